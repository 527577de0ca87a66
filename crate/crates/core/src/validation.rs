//! Self-checks of the library against independent references and published
//! anchor values. Each check is cheap (well under a second in release builds).

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::Position;
use crate::error::Result;
use crate::focus::{alpha_3db, beamdepth_closed, beamdepth_numeric, ebrd, AlphaSource, BeamdepthResult};
use crate::gain::{decay_functions, inverse_range_grid, matched_gain_with, uca_range_gain_closed, windowed_envelope, GainOptions};
use crate::geometry::{ArrayGeometry, ArrayKind, CarrierConfig};
use crate::oracle;
use crate::specfun::{bessel_j0, fresnel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

fn carrier() -> Result<CarrierConfig> {
    CarrierConfig::from_ghz(28.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn geometry_anchors() -> Check {
    Check::from_result(
        "geometry anchors",
        (|| {
            let ula = ArrayGeometry::ula(256, carrier()?)?;
            let uca = ArrayGeometry::uca(256, carrier()?)?;
            let (rd_ula, rd_uca) = (ula.rayleigh_distance(), uca.rayleigh_distance());
            let ok = rel(rd_ula, 348.0) <= 0.02
                && rel(rd_uca, 35.0) <= 0.03
                && (ula.aperture() - 1.37).abs() < 0.01
                && (uca.aperture() - 0.436).abs() < 0.001;
            Ok((
                ok,
                format!(
                    "R_D ULA {rd_ula:.3} m, UCA {rd_uca:.3} m; D ULA {:.4} m, UCA {:.4} m",
                    ula.aperture(),
                    uca.aperture()
                ),
            ))
        })(),
    )
}

pub fn aperture_ratio() -> Check {
    Check::from_result(
        "aperture ratio",
        (|| {
            let mut worst: f64 = 0.0;
            for n in [16, 256, 1024] {
                let ula = ArrayGeometry::ula(n, carrier()?)?;
                let uca = ArrayGeometry::uca(n, carrier()?)?;
                worst = worst.max(rel(uca.aperture() * PI, ula.aperture()));
                worst = worst.max(rel(ula.rayleigh_distance() / uca.rayleigh_distance(), PI * PI));
            }
            Ok((worst <= 1e-12, format!("worst relative deviation {worst:.2e}")))
        })(),
    )
}

pub fn range_gain_fidelity() -> Check {
    Check::from_result(
        "UCA range gain vs |J0|",
        (|| {
            let g = ArrayGeometry::uca(256, carrier()?)?;
            let focus = Position::new(6.1, FRAC_PI_2, 0.0)?;
            let grid = inverse_range_grid(g.min_near_field(), 100.0 * g.rayleigh_distance(), 2000)?;
            let mut worst: f64 = 0.0;
            for &r in &grid {
                let sum = matched_gain_with(&g, &focus, r, GainOptions::taylor())?;
                worst = worst.max((sum - uca_range_gain_closed(&g, 6.1, FRAC_PI_2, r)?).abs());
            }
            Ok((worst <= 0.05, format!("max deviation {worst:.2e} over 2000 ranges")))
        })(),
    )
}

pub fn ebrd_anchors() -> Check {
    Check::from_result(
        "EBRD anchors",
        (|| {
            let ula = ArrayGeometry::ula(256, carrier()?)?;
            let uca = ArrayGeometry::uca(256, carrier()?)?;
            let e_ula = ebrd(&ula, 0.0, &alpha_3db(ArrayKind::Ula, AlphaSource::PaperConstant)?)?;
            let e_uca = ebrd(&uca, FRAC_PI_2, &alpha_3db(ArrayKind::Uca, AlphaSource::PaperConstant)?)?;
            let ok = rel(e_ula, ula.rayleigh_distance() / 7.0) <= 0.01
                && rel(e_ula, 49.7) <= 0.01
                && rel(e_uca, PI * uca.rayleigh_distance() / 19.2) <= 0.01
                && rel(e_uca, 5.72) <= 0.03;
            Ok((ok, format!("ULA {e_ula:.3} m (published 49.7), UCA {e_uca:.3} m (published 5.72)")))
        })(),
    )
}

pub fn beamdepth_anchors() -> Check {
    Check::from_result(
        "beamdepth anchors",
        (|| {
            let ula = ArrayGeometry::ula(256, carrier()?)?;
            let uca = ArrayGeometry::uca(256, carrier()?)?;
            let alpha = alpha_3db(ArrayKind::Ula, AlphaSource::PaperConstant)?;
            let closed = beamdepth_closed(&ula, &Position::in_plane(6.1, 0.0)?, &alpha)?
                .depth()
                .unwrap_or(f64::INFINITY);
            let numeric = beamdepth_numeric(&uca, &Position::new(6.1, FRAC_PI_2, 0.0)?, 4000)?;
            let numeric_depth = numeric.depth().unwrap_or(f64::INFINITY);
            let ok = rel(closed, 1.4) <= 0.15 && numeric_depth > 50.0;
            Ok((
                ok,
                format!("ULA closed depth {closed:.3} m (published 1.4), UCA numeric depth {numeric_depth:.1} m"),
            ))
        })(),
    )
}

fn random_focus(g: &ArrayGeometry, rng: &mut ChaCha8Rng) -> Result<(Position, f64)> {
    let angle = rng.gen_range(-FRAC_PI_2..=FRAC_PI_2);
    let r_f = rng.gen_range(g.min_near_field()..1.2 * ebrd_ceiling(g)?);
    let p = match g.kind() {
        ArrayKind::Uca => Position::new(r_f, angle, rng.gen_range(-PI..PI))?,
        ArrayKind::Ula => Position::in_plane(r_f, angle)?,
    };
    Ok((p, angle))
}

fn ebrd_ceiling(g: &ArrayGeometry) -> Result<f64> {
    let best = if g.kind() == ArrayKind::Uca { FRAC_PI_2 } else { 0.0 };
    ebrd(g, best, &alpha_3db(g.kind(), AlphaSource::PaperConstant)?)
}

pub fn branch_consistency() -> Check {
    Check::from_result(
        "beamdepth branch consistency",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6272);
            let mut mismatches = 0;
            let mut unbounded = 0;
            for kind in [ArrayKind::Uca, ArrayKind::Ula] {
                let g = ArrayGeometry::new(kind, 256, carrier()?)?;
                let alpha = alpha_3db(kind, AlphaSource::PaperConstant)?;
                for _ in 0..1000 {
                    let (focus, angle) = random_focus(&g, &mut rng)?;
                    let result = beamdepth_closed(&g, &focus, &alpha)?;
                    unbounded += usize::from(result.is_unbounded());
                    if result.is_unbounded() != (focus.r() >= ebrd(&g, angle, &alpha)?) {
                        mismatches += 1;
                    }
                }
            }
            Ok((
                mismatches == 0,
                format!("{mismatches} mismatches in 2000 samples ({unbounded} unbounded)"),
            ))
        })(),
    )
}

pub fn root_symmetry() -> Check {
    Check::from_result(
        "beamdepth root symmetry",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7379);
            let mut worst: f64 = 0.0;
            let mut finite = 0;
            for kind in [ArrayKind::Uca, ArrayKind::Ula] {
                let g = ArrayGeometry::new(kind, 256, carrier()?)?;
                let alpha = alpha_3db(kind, AlphaSource::PaperConstant)?;
                while finite < if kind == ArrayKind::Uca { 1000 } else { 2000 } {
                    let (focus, _) = random_focus(&g, &mut rng)?;
                    if let BeamdepthResult::Finite { r_min, r_max, .. } = beamdepth_closed(&g, &focus, &alpha)? {
                        let lhs = 1.0 / r_min - 1.0 / focus.r();
                        let rhs = 1.0 / focus.r() - 1.0 / r_max;
                        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
                        finite += 1;
                    }
                }
            }
            Ok((worst <= 1e-9, format!("worst relative asymmetry {worst:.2e} over {finite} finite cases")))
        })(),
    )
}

pub fn closed_vs_numeric_beamdepth() -> Check {
    Check::from_result(
        "closed vs numeric beamdepth",
        (|| {
            let g = ArrayGeometry::uca(256, carrier()?)?;
            let alpha = alpha_3db(ArrayKind::Uca, AlphaSource::ComputedRoot)?;
            let start = 3.0 * g.aperture();
            let mut worst: f64 = 0.0;
            let mut cases = 0;
            for theta in [0.8, 1.0, 1.2, 1.4, FRAC_PI_2] {
                let limit = ebrd(&g, theta, &alpha)?;
                for frac in [0.3, 0.4, 0.5] {
                    let r_f = frac * limit;
                    if r_f < start {
                        continue;
                    }
                    let focus = Position::new(r_f, theta, 0.4)?;
                    let closed = beamdepth_closed(&g, &focus, &alpha)?.depth();
                    let numeric = beamdepth_numeric(&g, &focus, 1000)?.depth();
                    let err = match (closed, numeric) {
                        (Some(c), Some(n)) => rel(c, n),
                        _ => f64::INFINITY,
                    };
                    worst = worst.max(err);
                    cases += 1;
                }
            }
            Ok((
                worst <= 0.2 && cases > 0,
                format!("worst relative gap {worst:.3} over {cases} foci in [3D, 0.5 EBRD]"),
            ))
        })(),
    )
}

pub fn fixed_aperture_count() -> Check {
    Check::from_result(
        "fixed-aperture UCA element count",
        (|| {
            let g = ArrayGeometry::uca_for_aperture(1.36, carrier()?)?;
            let n = g.len();
            Ok((rel(n as f64, 801.0) <= 0.01, format!("N = {n} (published 801)")))
        })(),
    )
}

pub fn special_function_accuracy() -> Check {
    Check::from_result(
        "special function accuracy",
        (|| {
            let mut j0_err: f64 = 0.0;
            for i in 0..=200 {
                let x = 0.25 * i as f64;
                j0_err = j0_err.max((bessel_j0(x)? - oracle::bessel_j0_series(x)).abs());
            }
            let mut fr_err: f64 = 0.0;
            for i in 0..=80 {
                let x = 0.25 * i as f64;
                let (c, s) = fresnel(x)?;
                let (qc, qs) = oracle::fresnel_quadrature(x);
                fr_err = fr_err.max((c - qc).abs()).max((s - qs).abs());
            }
            let mut envelope_ok = true;
            for i in 0..=19_000 {
                let x = 10.0 + 0.01 * i as f64;
                envelope_ok &= bessel_j0(x)?.abs() <= (2.0 / (PI * x)).sqrt();
            }
            Ok((
                j0_err <= 1e-10 && fr_err <= 1e-9 && envelope_ok,
                format!("J0 max error {j0_err:.1e}, Fresnel max error {fr_err:.1e}, envelope bound holds: {envelope_ok}"),
            ))
        })(),
    )
}

pub fn decay_ordering() -> Check {
    Check::from_result(
        "decay envelope ordering",
        (|| {
            let step = 0.005;
            let xs: Vec<f64> = (0..=((45.0 / step) as usize)).map(|i| 5.0 + i as f64 * step).collect();
            let (mut j0, mut fr, mut sc) = (vec![], vec![], vec![]);
            for &x in &xs {
                let (a, b, c) = decay_functions(x)?;
                j0.push(a);
                fr.push(b);
                sc.push(c);
            }
            let width = (2.0 * PI / step).ceil() as usize;
            let (ej, ef, es) = (
                windowed_envelope(&j0, width),
                windowed_envelope(&fr, width),
                windowed_envelope(&sc, width),
            );
            let windows = xs.len() - width;
            let violations = (0..windows).filter(|&i| !(ej[i] >= ef[i] && ef[i] >= es[i])).count();
            Ok((violations == 0, format!("{violations} violations in {windows} windows of width 2π")))
        })(),
    )
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        geometry_anchors(),
        aperture_ratio(),
        range_gain_fidelity(),
        ebrd_anchors(),
        beamdepth_anchors(),
        branch_consistency(),
        root_symmetry(),
        fixed_aperture_count(),
        special_function_accuracy(),
        decay_ordering(),
        closed_vs_numeric_beamdepth(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
