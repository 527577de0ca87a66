//! Spherical-wave propagation distances and near-field steering vectors.
//!
//! Steering entries are `exp(−j·2π/λ·(r⁽ⁿ⁾ − r))` with unit modulus, so
//! `‖h‖² = N`. The `1/√N` normalization is left to the precoder.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, ArrayKind};

/// Spherical position relative to the array center.
///
/// `theta` is the elevation from the array normal in `[−π/2, π/2]`, `phi` the
/// azimuth, stored wrapped into `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Position {
    r: f64,
    theta: f64,
    phi: f64,
}

impl Position {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("range must be positive, got {r}")));
        }
        if !theta.is_finite() || theta.abs() > FRAC_PI_2 * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "elevation must lie in [-π/2, π/2], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::Domain(format!("azimuth must be finite, got {phi}")));
        }
        Ok(Self {
            r,
            theta: theta.clamp(-FRAC_PI_2, FRAC_PI_2),
            phi: wrap_angle(phi),
        })
    }

    /// A point in the array plane of a ULA (`θ = π/2`), `phi` from broadside.
    pub fn in_plane(r: f64, phi: f64) -> Result<Self> {
        Self::new(r, FRAC_PI_2, phi)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Same direction, different range.
    pub fn with_range(&self, r: f64) -> Result<Self> {
        Self::new(r, self.theta, self.phi)
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let u = self.direction();
        [self.r * u[0], self.r * u[1], self.r * u[2]]
    }
}

fn wrap_angle(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

/// Propagation model for per-element distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DistanceModel {
    /// Law of cosines.
    #[default]
    Exact,
    /// Second-order expansion in `1/r`.
    Taylor,
}

/// Length-N complex channel or steering vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    entries: Vec<Complex64>,
    model: DistanceModel,
    beta: Complex64,
}

impl ChannelVector {
    pub fn from_entries(entries: Vec<Complex64>, model: DistanceModel) -> Self {
        Self {
            entries,
            model,
            beta: Complex64::new(1.0, 0.0),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn model(&self) -> DistanceModel {
        self.model
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `selfᴴ·other`, summed in element index order.
    pub fn inner(&self, other: &ChannelVector) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::Config(format!(
                "channel length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every entry by `e^{jω}`.
    pub fn rotated(&self, omega: f64) -> Self {
        let w = Complex64::from_polar(1.0, omega);
        Self {
            entries: self.entries.iter().map(|z| z * w).collect(),
            model: self.model,
            beta: self.beta,
        }
    }
}

/// `r⁽ⁿ⁾ − r` for the exact model, in a cancellation-free form.
fn exact_path_difference(g: &ArrayGeometry, n: usize, p: &Position) -> f64 {
    let (norm_sqr, proj) = element_terms(g, n, p);
    let r = p.r();
    let rn = (r * r + norm_sqr - 2.0 * r * proj).max(0.0).sqrt();
    (norm_sqr - 2.0 * r * proj) / (rn + r)
}

/// `r⁽ⁿ⁾ − r` under the second-order expansion.
fn taylor_path_difference(g: &ArrayGeometry, n: usize, p: &Position) -> f64 {
    let (norm_sqr, proj) = element_terms(g, n, p);
    -proj + (norm_sqr - proj * proj) / (2.0 * p.r())
}

/// `(|e_n|², û·e_n)` from the law-of-cosines parametrization of each kind.
fn element_terms(g: &ArrayGeometry, n: usize, p: &Position) -> (f64, f64) {
    match g.kind() {
        ArrayKind::Uca => {
            let radius = 0.5 * g.aperture();
            let psi = 2.0 * PI * n as f64 / g.len() as f64;
            (radius * radius, radius * p.theta().sin() * (p.phi() - psi).cos())
        }
        ArrayKind::Ula => {
            let offset = (n as f64 - 0.5 * (g.len() as f64 + 1.0)) * g.spacing();
            (offset * offset, offset * p.theta().sin() * p.phi().sin())
        }
    }
}

/// Euclidean distance from element `n` (1-based) to `p`.
pub fn exact_element_distance(g: &ArrayGeometry, n: usize, p: &Position) -> Result<f64> {
    g.check_index(n)?;
    Ok(p.r() + exact_path_difference(g, n, p))
}

/// `r − R sinθ cos(φ−ψ_n) + (R²/2r)(1 − sin²θ cos²(φ−ψ_n))` for a UCA.
pub fn taylor_element_distance_uca(g: &ArrayGeometry, n: usize, p: &Position) -> Result<f64> {
    if g.kind() != ArrayKind::Uca {
        return Err(Error::Kind {
            op: "taylor_element_distance_uca",
            kind: g.kind().name(),
        });
    }
    g.check_index(n)?;
    let radius = 0.5 * g.aperture();
    let psi = 2.0 * PI * n as f64 / g.len() as f64;
    let c = p.theta().sin() * (p.phi() - psi).cos();
    let r = p.r();
    Ok(r - radius * c + radius * radius / (2.0 * r) * (1.0 - c * c))
}

/// Second-order distance for either kind.
pub fn taylor_element_distance(g: &ArrayGeometry, n: usize, p: &Position) -> Result<f64> {
    g.check_index(n)?;
    Ok(p.r() + taylor_path_difference(g, n, p))
}

pub(crate) fn check_near_field(g: &ArrayGeometry, r: f64) -> Result<()> {
    let limit = g.min_near_field();
    if r < limit * (1.0 - 1e-12) {
        Err(Error::NearFieldValidity { range_m: r, limit_m: limit })
    } else {
        Ok(())
    }
}

/// Per-element phase `−(2π/λ)(r⁽ⁿ⁾ − r)` in element order.
pub fn steering_phases(g: &ArrayGeometry, p: &Position, model: DistanceModel) -> Vec<f64> {
    let k = g.carrier().wavenumber();
    (1..=g.len())
        .map(|n| {
            let diff = match model {
                DistanceModel::Exact => exact_path_difference(g, n, p),
                DistanceModel::Taylor => taylor_path_difference(g, n, p),
            };
            -k * diff
        })
        .collect()
}

/// Unit-modulus near-field steering vector; `p` must satisfy `r ≥ 1.2·D`.
pub fn steering_vector(g: &ArrayGeometry, p: &Position, model: DistanceModel) -> Result<ChannelVector> {
    check_near_field(g, p.r())?;
    Ok(steering_vector_unchecked(g, p, model))
}

/// As [`steering_vector`] without the near-field validity check, for sweeps
/// that deliberately enter the reactive region.
pub fn steering_vector_unchecked(g: &ArrayGeometry, p: &Position, model: DistanceModel) -> ChannelVector {
    let entries = steering_phases(g, p, model)
        .into_iter()
        .map(|phase| Complex64::from_polar(1.0, phase))
        .collect();
    ChannelVector::from_entries(entries, model)
}

/// Line-of-sight channel `h = β·b` with `β = 1`, exact model.
pub fn channel_vector(g: &ArrayGeometry, p: &Position) -> Result<ChannelVector> {
    steering_vector(g, p, DistanceModel::Exact)
}
