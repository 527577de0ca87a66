//! Range-domain beamfocusing gain.
//!
//! [`matched_gain`] evaluates the normalized matched-filter sum directly; it
//! is the reference every closed form here is checked against:
//!
//! * UCA: `G ≈ |J₀(ζ)|`, `ζ = (π·R_D/16)·r_eff·sin²θ`
//! * ULA: `G ≈ |(C(γ_F) + jS(γ_F))/γ_F|`, `γ_F = sqrt(N²d²cos²φ·r_eff/(2λ))`
//!
//! with `r_eff = |(r − r_f)/(r·r_f)|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{check_near_field, steering_phases, DistanceModel, Position};
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::geometry::{ArrayGeometry, ArrayKind};
use crate::specfun::{bessel_j0, fresnel, sinc};

/// Closed forms switch to their limiting value 1 below this argument.
pub const SMALL_ARGUMENT: f64 = 1e-6;

/// Effective inverse range `|(r − r_f)/(r·r_f)|`, in 1/m.
pub fn r_eff(r: f64, r_f: f64) -> Result<f64> {
    for (v, what) in [(r, "range"), (r_f, "focal range")] {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::Domain(format!("{what} must be positive, got {v}")));
        }
    }
    if r.is_infinite() {
        return Ok(1.0 / r_f);
    }
    if r_f.is_infinite() {
        return Ok(1.0 / r);
    }
    Ok((1.0 / r_f - 1.0 / r).abs())
}

/// Bessel argument `ζ = (π·R_D/16)·r_eff·sin²θ` of a UCA.
pub fn zeta(g: &ArrayGeometry, r_eff: f64, theta: f64) -> Result<f64> {
    require_kind(g, ArrayKind::Uca, "zeta")?;
    let s = theta.sin();
    Ok(PI * g.rayleigh_distance() / 16.0 * r_eff * s * s)
}

/// Fresnel argument `γ_F = sqrt(N²d²·cos²φ·r_eff/(2λ))` of a ULA.
pub fn fresnel_argument(g: &ArrayGeometry, r_eff: f64, phi: f64) -> Result<f64> {
    require_kind(g, ArrayKind::Ula, "fresnel_argument")?;
    let c = phi.cos();
    Ok(fresnel_argument_cos_sq(g, r_eff, c * c))
}

fn fresnel_argument_cos_sq(g: &ArrayGeometry, r_eff: f64, cos_sq: f64) -> f64 {
    let span = g.len() as f64 * g.spacing();
    (span * span * cos_sq * r_eff / (2.0 * g.wavelength())).sqrt()
}

fn require_kind(g: &ArrayGeometry, kind: ArrayKind, op: &'static str) -> Result<()> {
    if g.kind() == kind {
        Ok(())
    } else {
        Err(Error::Kind { op, kind: g.kind().name() })
    }
}

/// Options for the matched-filter sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainOptions {
    pub model: DistanceModel,
    /// Reject ranges below `1.2·D`.
    pub enforce_near_field: bool,
}

impl Default for GainOptions {
    fn default() -> Self {
        Self {
            model: DistanceModel::Exact,
            enforce_near_field: true,
        }
    }
}

impl GainOptions {
    pub fn taylor() -> Self {
        Self {
            model: DistanceModel::Taylor,
            ..Self::default()
        }
    }

    pub fn unchecked(model: DistanceModel) -> Self {
        Self {
            model,
            enforce_near_field: false,
        }
    }
}

/// Normalized matched-filter gain at range `r_obs` along the focus direction,
/// exact propagation model.
pub fn matched_gain(g: &ArrayGeometry, focus: &Position, r_obs: f64) -> Result<f64> {
    matched_gain_with(g, focus, r_obs, GainOptions::default())
}

/// `(1/N)·|Σ_n exp(j·k·[(r_obs⁽ⁿ⁾ − r_obs) − (r_f⁽ⁿ⁾ − r_f)])|`, summed in
/// element order.
pub fn matched_gain_with(
    g: &ArrayGeometry,
    focus: &Position,
    r_obs: f64,
    opts: GainOptions,
) -> Result<f64> {
    let observed = focus.with_range(r_obs).map_err(|e| match e {
        Error::Domain(msg) => Error::Config(format!("observation point: {msg}")),
        other => other,
    })?;
    if opts.enforce_near_field {
        check_near_field(g, focus.r())?;
        check_near_field(g, r_obs)?;
    }
    let a = steering_phases(g, &observed, opts.model);
    let b = steering_phases(g, focus, opts.model);
    let sum = a
        .iter()
        .zip(&b)
        .fold(Complex64::new(0.0, 0.0), |acc, (pa, pb)| {
            acc + Complex64::from_polar(1.0, pa - pb)
        });
    Ok((sum.norm() / g.len() as f64).min(1.0))
}

/// `|J₀(ζ)|` approximation of the UCA range-domain gain.
pub fn uca_range_gain_closed(g: &ArrayGeometry, r_f: f64, theta: f64, r: f64) -> Result<f64> {
    let z = zeta(g, r_eff(r, r_f)?, theta)?;
    if z < SMALL_ARGUMENT {
        return Ok(1.0);
    }
    Ok(bessel_j0(z)?.abs())
}

/// `|(C(γ_F) + jS(γ_F))/γ_F|` approximation of the ULA range-domain gain.
pub fn ula_range_gain_closed(g: &ArrayGeometry, r_f: f64, phi: f64, r: f64) -> Result<f64> {
    let gamma = fresnel_argument(g, r_eff(r, r_f)?, phi)?;
    fresnel_ratio(gamma)
}

/// `|(C(x) + jS(x))/x|`, 1 in the `x → 0` limit.
pub fn fresnel_ratio(x: f64) -> Result<f64> {
    if x < SMALL_ARGUMENT {
        return Ok(1.0);
    }
    let (c, s) = fresnel(x)?;
    Ok(c.hypot(s) / x)
}

/// Closed-form range gain for either kind along the direction of `focus`.
///
/// For a ULA the broadside factor `cos²φ` is taken as `1 − (sinθ·sinφ)²`,
/// which reduces to `cos²φ` in the array plane.
pub fn range_gain_closed(g: &ArrayGeometry, focus: &Position, r: f64) -> Result<f64> {
    match g.kind() {
        ArrayKind::Uca => uca_range_gain_closed(g, focus.r(), focus.theta(), r),
        ArrayKind::Ula => {
            let axial = focus.theta().sin() * focus.phi().sin();
            let gamma = fresnel_argument_cos_sq(g, r_eff(r, focus.r())?, 1.0 - axial * axial);
            fresnel_ratio(gamma)
        }
    }
}

/// Far-field angular-domain correlation between two in-plane directions.
///
/// ULA: `|sinc(N·d/λ·(sinφ_j − sinφ_k))|`;
/// UCA: `|J₀(4πR/λ·sin((φ_j − φ_k)/2))|`.
/// Both positions must lie in the array plane (`θ = π/2`).
pub fn angle_gain(g: &ArrayGeometry, p_j: &Position, p_k: &Position) -> Result<f64> {
    for p in [p_j, p_k] {
        if (p.theta().abs() - std::f64::consts::FRAC_PI_2).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "angle-domain gain is defined for in-plane directions (θ = ±π/2), got θ = {}",
                p.theta()
            )));
        }
    }
    // a point at θ = −π/2 is the in-plane direction φ + π
    let azimuth = |p: &Position| if p.theta() < 0.0 { p.phi() + PI } else { p.phi() };
    let (phi_j, phi_k) = (azimuth(p_j), azimuth(p_k));
    let lambda = g.wavelength();
    match g.kind() {
        ArrayKind::Ula => {
            let arg = g.len() as f64 * g.spacing() / lambda * (phi_j.sin() - phi_k.sin());
            Ok(sinc(arg)?.abs())
        }
        ArrayKind::Uca => {
            let radius = 0.5 * g.aperture();
            let arg = 4.0 * PI * radius / lambda * (0.5 * (phi_j - phi_k)).sin();
            Ok(bessel_j0(arg)?.abs())
        }
    }
}

/// How a [`GainProfile`] was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GainModel {
    /// Matched-filter sum with exact distances.
    ExactSum,
    /// Matched-filter sum with second-order distances.
    TaylorSum,
    /// `|J₀(ζ)|` (UCA) or the Fresnel ratio (ULA).
    ClosedForm,
}

/// Range cut of the beamfocusing gain along the focus direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainProfile {
    pub ranges: Vec<f64>,
    pub gains: Vec<f64>,
    pub focus: Position,
    pub kind: ArrayKind,
    pub model: GainModel,
}

impl GainProfile {
    /// `r_m,gain` CSV, one row per sample, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.ranges.len() + 16);
        out.push_str("r_m,gain\n");
        for (r, g) in self.ranges.iter().zip(&self.gains) {
            out.push_str(&sig12(*r));
            out.push(',');
            out.push_str(&sig12(*g));
            out.push('\n');
        }
        out
    }

    pub fn max_gain(&self) -> f64 {
        self.gains.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `samples` ranges on `[r_lo, r_hi]`, uniform in `1/r`, strictly increasing,
/// endpoints exact.
pub fn inverse_range_grid(r_lo: f64, r_hi: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {samples}")));
    }
    if !(r_lo > 0.0 && r_lo < r_hi && r_hi.is_finite()) {
        return Err(Error::Config(format!("invalid range window [{r_lo}, {r_hi}]")));
    }
    let (u_hi, u_lo) = (1.0 / r_lo, 1.0 / r_hi);
    let step = (u_hi - u_lo) / (samples - 1) as f64;
    let mut grid: Vec<f64> = (0..samples)
        .rev()
        .map(|i| 1.0 / (u_lo + i as f64 * step))
        .collect();
    grid[0] = r_lo;
    grid[samples - 1] = r_hi;
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "{samples} samples do not resolve the window [{r_lo}, {r_hi}]"
        )));
    }
    Ok(grid)
}

/// Gain along the focus direction on an inverse-range grid over
/// `[r_lo, r_hi]`, which must start at or beyond `1.2·D`.
pub fn gain_profile(
    g: &ArrayGeometry,
    focus: &Position,
    r_lo: f64,
    r_hi: f64,
    samples: usize,
    model: GainModel,
) -> Result<GainProfile> {
    if r_lo < g.min_near_field() * (1.0 - 1e-12) {
        return Err(Error::Config(format!(
            "window start {r_lo} m is inside the reactive limit {} m",
            g.min_near_field()
        )));
    }
    check_near_field(g, focus.r())?;
    let ranges = inverse_range_grid(r_lo, r_hi, samples)?;
    let gains = ranges
        .par_iter()
        .map(|&r| match model {
            GainModel::ExactSum => matched_gain(g, focus, r),
            GainModel::TaylorSum => matched_gain_with(g, focus, r, GainOptions::taylor()),
            GainModel::ClosedForm => range_gain_closed(g, focus, r),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainProfile {
        ranges,
        gains,
        focus: *focus,
        kind: g.kind(),
        model,
    })
}

/// The three normalized decay profiles compared across array types at a
/// common abscissa `x`: `(|J₀(x)|, |(C(x)+jS(x))/x|, |sinc(x)|)`.
pub fn decay_functions(x: f64) -> Result<(f64, f64, f64)> {
    Ok((bessel_j0(x)?.abs(), fresnel_ratio(x)?, sinc(x)?.abs()))
}

/// Running maximum of `values` over a window of `width` samples starting at
/// each index (truncated at the end).
pub fn windowed_envelope(values: &[f64], width: usize) -> Vec<f64> {
    let width = width.max(1);
    (0..values.len())
        .map(|i| {
            values[i..(i + width).min(values.len())]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CarrierConfig;
    use crate::oracle;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn carrier() -> CarrierConfig {
        CarrierConfig::from_ghz(28.0).unwrap()
    }

    fn uca(n: usize) -> ArrayGeometry {
        ArrayGeometry::uca(n, carrier()).unwrap()
    }

    fn ula(n: usize) -> ArrayGeometry {
        ArrayGeometry::ula(n, carrier()).unwrap()
    }

    #[test]
    fn r_eff_examples() {
        assert_eq!(r_eff(5.0, 5.0).unwrap(), 0.0);
        assert!((r_eff(10.0, 5.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((r_eff(f64::INFINITY, 4.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((r_eff(1e15, 4.0).unwrap() - 0.25).abs() < 1e-12);
        assert!(r_eff(0.0, 1.0).is_err());
        assert!(r_eff(1.0, -1.0).is_err());
    }

    #[test]
    fn zeta_examples() {
        let g = uca(256);
        assert_eq!(zeta(&g, 0.3, 0.0).unwrap(), 0.0);
        let rd = g.rayleigh_distance();
        let z = zeta(&g, 0.1, FRAC_PI_2).unwrap();
        assert!((z - PI * rd / 16.0 * 0.1).abs() < 1e-14);
        // with R_D = 35 m the same expression gives 0.687
        assert!((PI * 35.0 / 16.0 * 0.1 - 0.687).abs() < 1e-3);
        let radius = g.radius().unwrap();
        for theta in [0.2, 0.9, 1.4] {
            let direct = PI / g.wavelength() * radius * radius / 2.0 * 0.1 * f64::sin(theta).powi(2);
            assert!((zeta(&g, 0.1, theta).unwrap() - direct).abs() <= 1e-12 * direct);
        }
        assert!(matches!(zeta(&ula(8), 0.1, 0.3), Err(Error::Kind { .. })));
        assert!(matches!(fresnel_argument(&g, 0.1, 0.3), Err(Error::Kind { .. })));
    }

    #[test]
    fn matched_gain_examples() {
        let g = uca(256);
        let focus = Position::new(6.1, FRAC_PI_2, 0.3).unwrap();
        assert!((matched_gain(&g, &focus, 6.1).unwrap() - 1.0).abs() < 1e-9);
        let boresight = Position::new(2.0, 0.0, 0.0).unwrap();
        for r in [0.6, 3.0, 40.0, 500.0] {
            assert!((matched_gain(&g, &boresight, r).unwrap() - 1.0).abs() < 1e-9);
        }
        let closed = uca_range_gain_closed(&g, 6.1, FRAC_PI_2, 35.0).unwrap();
        assert!((matched_gain(&g, &focus, 35.0).unwrap() - closed).abs() < 0.05);
        assert!(matches!(
            matched_gain(&g, &focus, 0.1),
            Err(Error::NearFieldValidity { .. })
        ));
        assert!(matches!(matched_gain(&g, &focus, -3.0), Err(Error::Config(_))));
        assert!(matched_gain_with(&g, &focus, 0.1, GainOptions::unchecked(DistanceModel::Exact)).is_ok());
    }

    #[test]
    fn uca_closed_form_limits() {
        let g = uca(256);
        assert_eq!(uca_range_gain_closed(&g, 4.0, 1.0, 4.0).unwrap(), 1.0);
        assert_eq!(uca_range_gain_closed(&g, 4.0, 0.0, 40.0).unwrap(), 1.0);
        assert!(matches!(uca_range_gain_closed(&ula(8), 4.0, 0.0, 4.0), Err(Error::Kind { .. })));
    }

    #[test]
    fn uca_closed_form_tracks_taylor_sum() {
        let g = uca(256);
        let focus = Position::new(6.1, FRAC_PI_2, 0.0).unwrap();
        let grid = inverse_range_grid(g.min_near_field(), 100.0 * g.rayleigh_distance(), 2000).unwrap();
        let worst = grid
            .iter()
            .map(|&r| {
                let sum = matched_gain_with(&g, &focus, r, GainOptions::taylor()).unwrap();
                (sum - uca_range_gain_closed(&g, 6.1, FRAC_PI_2, r).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 0.05, "worst deviation {worst}");
    }

    #[test]
    fn taylor_sum_is_bessel_average() {
        // The Taylor-model sum collapses to (1/N)|Σ exp(-jζ cos 2ψ_n)|, which the
        // angular-average oracle evaluates as J0(ζ) up to aliasing of order J_{N/2}.
        let g = uca(256);
        let focus = Position::new(3.0, 1.0, 0.0).unwrap();
        for r in [1.0, 2.0, 5.0, 50.0] {
            let z = zeta(&g, r_eff(r, 3.0).unwrap(), 1.0).unwrap();
            let sum = matched_gain_with(&g, &focus, r, GainOptions::taylor()).unwrap();
            assert!((sum - oracle::bessel_j0_angular_average(z).abs()).abs() < 1e-9, "r = {r}");
        }
    }

    #[test]
    fn ula_closed_form() {
        let g = ula(256);
        assert_eq!(ula_range_gain_closed(&g, 6.1, 0.0, 6.1).unwrap(), 1.0);
        let mut prev = 1.0;
        for x in [10.0, 100.0, 1000.0, 1e4] {
            let v = fresnel_ratio(x).unwrap();
            assert!(v < prev && v <= 0.75 / x);
            prev = v;
        }
        assert!(matches!(ula_range_gain_closed(&uca(8), 1.0, 0.0, 2.0), Err(Error::Kind { .. })));
    }

    #[test]
    fn ula_closed_form_tracks_exact_sum_outside_main_lobe() {
        let g = ula(256);
        let focus = Position::in_plane(6.1, 0.0).unwrap();
        // closed-form 3 dB interval at α = 1.75 is about [5.44, 6.95] m
        let (r_min, r_max) = (5.44, 6.95);
        let depth = r_max - r_min;
        let grid = inverse_range_grid(g.min_near_field(), 100.0 * g.rayleigh_distance(), 2000).unwrap();
        let mut worst = 0.0f64;
        for &r in &grid {
            if r > r_min - depth && r < r_max + depth {
                continue;
            }
            let exact = matched_gain(&g, &focus, r).unwrap();
            let closed = ula_range_gain_closed(&g, 6.1, 0.0, r).unwrap();
            worst = worst.max((exact - closed).abs());
        }
        assert!(worst <= 0.05, "worst deviation {worst}");
    }

    #[test]
    fn angle_gain_examples() {
        let g = ula(256);
        let p = Position::in_plane(100.0, 0.4).unwrap();
        assert_eq!(angle_gain(&g, &p, &p).unwrap(), 1.0);
        assert_eq!(angle_gain(&uca(256), &p, &p).unwrap(), 1.0);
        // sinφ_j − sinφ_k = λ/(N d)
        let lambda = g.wavelength();
        let delta = lambda / (256.0 * g.spacing());
        let q = Position::in_plane(100.0, (0.4f64.sin() + delta).asin()).unwrap();
        assert!(angle_gain(&g, &q, &p).unwrap() < 1e-12);

        let c = uca(256);
        let a = Position::in_plane(1000.0, 0.2).unwrap();
        let b = Position::in_plane(1000.0, 0.1).unwrap();
        let want = bessel_j0(4.0 * PI * c.radius().unwrap() / lambda * 0.05f64.sin()).unwrap().abs();
        assert!((angle_gain(&c, &a, &b).unwrap() - want).abs() < 1e-15);
        assert!(angle_gain(&c, &Position::new(10.0, 0.3, 0.0).unwrap(), &a).is_err());
    }

    #[test]
    fn uca_angle_gain_matches_far_field_inner_product() {
        let g = uca(256);
        let k = g.carrier().wavenumber();
        let radius = g.radius().unwrap();
        let (pj, pk) = (0.2f64, 0.1f64);
        let sum: Complex64 = (1..=256)
            .map(|n| {
                let psi = 2.0 * PI * n as f64 / 256.0;
                Complex64::from_polar(1.0, k * radius * ((pj - psi).cos() - (pk - psi).cos()))
            })
            .sum();
        let direct = sum.norm() / 256.0;
        let a = Position::in_plane(1e3, pj).unwrap();
        let b = Position::in_plane(1e3, pk).unwrap();
        assert!((angle_gain(&g, &a, &b).unwrap() - direct).abs() < 1e-6);
    }

    #[test]
    fn uca_gain_invariant_in_azimuth() {
        let g = uca(256);
        for (r_f, r) in [(2.0, 4.0), (5.0, 1.0), (6.1, 35.0)] {
            let values: Vec<f64> = (0..72)
                .map(|i| {
                    let focus = Position::new(r_f, 1.2, i as f64 * PI / 36.0).unwrap();
                    matched_gain(&g, &focus, r).unwrap()
                })
                .collect();
            let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(spread < 0.01, "spread {spread}");
        }
    }

    #[test]
    fn asymptotic_orthogonality() {
        let opts = GainOptions::unchecked(DistanceModel::Exact);
        for kind in [ArrayKind::Ula, ArrayKind::Uca] {
            let values: Vec<f64> = [64, 256, 1024, 4096]
                .iter()
                .map(|&n| {
                    let g = ArrayGeometry::new(kind, n, carrier()).unwrap();
                    let focus = Position::in_plane(5.0, 0.0).unwrap();
                    matched_gain_with(&g, &focus, 10.0, opts).unwrap()
                })
                .collect();
            assert!(values[3] < 0.1, "{kind}: {values:?}");
            assert!(values[3] < values[0], "{kind}: {values:?}");
        }
    }

    #[test]
    fn profile_grid_and_peak() {
        let g = uca(256);
        let focus = Position::new(3.0, 1.0, 0.0).unwrap();
        let p = gain_profile(&g, &focus, 1.0, 30.0, 500, GainModel::ExactSum).unwrap();
        assert!(p.ranges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.ranges[0], 1.0);
        assert_eq!(*p.ranges.last().unwrap(), 30.0);
        assert!(p.gains.iter().all(|&v| (0.0..=1.0 + 1e-9).contains(&v)));
        let best = p
            .gains
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let nearest = p
            .ranges
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 3.0).abs().partial_cmp(&(b.1 - 3.0).abs()).unwrap())
            .unwrap()
            .0;
        assert_eq!(best, nearest);

        let csv = p.to_csv();
        assert!(csv.starts_with("r_m,gain\n1,"));
        assert_eq!(csv.lines().count(), 501);
    }

    #[test]
    fn profile_closed_vs_exact() {
        let g = uca(256);
        let focus = Position::new(6.1, FRAC_PI_2, 0.0).unwrap();
        let hi = 100.0 * g.rayleigh_distance();
        let a = gain_profile(&g, &focus, g.min_near_field(), hi, 2000, GainModel::ExactSum).unwrap();
        let b = gain_profile(&g, &focus, g.min_near_field(), hi, 2000, GainModel::ClosedForm).unwrap();
        let worst = a.gains.iter().zip(&b.gains).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst <= 0.05, "worst {worst}");
    }

    #[test]
    fn profile_rejects_bad_windows() {
        let g = uca(256);
        let focus = Position::new(3.0, 1.0, 0.0).unwrap();
        let lo = g.min_near_field();
        assert!(gain_profile(&g, &focus, 0.1, 10.0, 10, GainModel::ExactSum).is_err());
        assert!(gain_profile(&g, &focus, 5.0, 2.0, 10, GainModel::ExactSum).is_err());
        assert!(gain_profile(&g, &focus, lo, 10.0, 1, GainModel::ExactSum).is_err());
    }

    #[test]
    fn profile_is_deterministic() {
        let g = ula(128);
        let focus = Position::in_plane(4.0, 0.3).unwrap();
        let run = || gain_profile(&g, &focus, g.min_near_field(), 200.0, 3000, GainModel::ExactSum).unwrap();
        assert_eq!(run().to_csv(), run().to_csv());
    }

    #[test]
    fn decay_ordering_of_envelopes() {
        let step = 0.005;
        let xs: Vec<f64> = (0..=((45.0 / step) as usize)).map(|i| 5.0 + i as f64 * step).collect();
        let (mut j0, mut fr, mut sc) = (vec![], vec![], vec![]);
        for &x in &xs {
            let (a, b, c) = decay_functions(x).unwrap();
            j0.push(a);
            fr.push(b);
            sc.push(c);
        }
        let width = (2.0 * PI / step).ceil() as usize;
        let windows = xs.len() - width;
        let (ej, ef, es) = (
            windowed_envelope(&j0, width),
            windowed_envelope(&fr, width),
            windowed_envelope(&sc, width),
        );
        for i in 0..windows {
            assert!(ej[i] >= ef[i] && ef[i] >= es[i], "x = {}", xs[i]);
        }
    }

    proptest! {
        #[test]
        fn reciprocity(r1 in 1.0f64..50.0, r2 in 1.0f64..50.0, theta in 0.0f64..FRAC_PI_2, phi in -PI..PI) {
            let g = uca(64);
            let a = matched_gain(&g, &Position::new(r1, theta, phi).unwrap(), r2).unwrap();
            let b = matched_gain(&g, &Position::new(r2, theta, phi).unwrap(), r1).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn r_eff_symmetric(r in 0.1f64..1e4, rf in 0.1f64..1e4) {
            prop_assert!((r_eff(r, rf).unwrap() - r_eff(rf, r).unwrap()).abs() <= 1e-15 * (1.0 / r + 1.0 / rf));
            prop_assert!(r_eff(r, rf).unwrap() >= 0.0);
        }

        #[test]
        fn uca_closed_form_ignores_azimuth(r in 1.0f64..100.0, theta in 0.0f64..FRAC_PI_2, phi in -PI..PI) {
            let g = uca(256);
            let a = range_gain_closed(&g, &Position::new(4.0, theta, phi).unwrap(), r).unwrap();
            let b = range_gain_closed(&g, &Position::new(4.0, theta, 0.0).unwrap(), r).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
