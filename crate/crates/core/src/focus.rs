//! 3 dB beamdepth and effective beamfocusing Rayleigh distance (EBRD).
//!
//! With `A = π·R_D·sin²θ`, `B = 16·α·r_f` (UCA) or `A = R_D·cos²φ`,
//! `B = 4·α·r_f` (ULA), the 3 dB points of the closed-form gain are
//! `r = A·r_f/(A ± B)`. The beam has finite depth only while `B < A`, i.e.
//! `r_f` below the EBRD `A·r_f/B`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{check_near_field, Position};
use crate::error::{Error, Result};
use crate::gain::{fresnel_ratio, inverse_range_grid, matched_gain};
use crate::geometry::{ArrayGeometry, ArrayKind};
use crate::specfun::{bessel_j0, find_root_bracketed, ROOT_TOL};

/// Published 3 dB constant for the UCA (`|J₀|` gain).
pub const UCA_PUBLISHED_ALPHA: f64 = 1.2;
/// Published 3 dB constant for the ULA at broadside (Fresnel gain).
pub const ULA_PUBLISHED_ALPHA: f64 = 1.75;

/// Upper end of the numeric sweep, in Rayleigh distances. Stands in for
/// `r → ∞`, where `r_eff → 1/r_f`.
pub const NUMERIC_SWEEP_RAYLEIGH_MULTIPLE: f64 = 100.0;

/// Smallest grid accepted by [`beamdepth_numeric`].
pub const MIN_NUMERIC_GRID: usize = 1000;

const ALPHA_SEARCH_MAX: f64 = 3.0;
const ALPHA_SCAN_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    PaperConstant,
    ComputedRoot,
}

impl AlphaSource {
    pub fn name(self) -> &'static str {
        match self {
            AlphaSource::PaperConstant => "paper_constant",
            AlphaSource::ComputedRoot => "computed_root",
        }
    }
}

/// Argument of the closed-form gain at which its square equals 1/2.
///
/// For the UCA this is `ζ`; for the ULA it is `γ_F²`, the quantity that
/// appears linearly in the beamdepth expression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha3dB {
    pub kind: ArrayKind,
    pub value: f64,
    pub source: AlphaSource,
}

/// The published constant or the first root of `|G(α)|² = 1/2` on `(0, 3]`.
pub fn alpha_3db(kind: ArrayKind, source: AlphaSource) -> Result<Alpha3dB> {
    let value = match source {
        AlphaSource::PaperConstant => match kind {
            ArrayKind::Uca => UCA_PUBLISHED_ALPHA,
            ArrayKind::Ula => ULA_PUBLISHED_ALPHA,
        },
        AlphaSource::ComputedRoot => first_half_power_crossing(kind)?,
    };
    Ok(Alpha3dB { kind, value, source })
}

fn half_power_excess(kind: ArrayKind, alpha: f64) -> f64 {
    let gain = match kind {
        ArrayKind::Uca => bessel_j0(alpha).map(f64::abs),
        ArrayKind::Ula => fresnel_ratio(alpha.sqrt()),
    };
    gain.map_or(f64::NAN, |g| g * g - 0.5)
}

fn first_half_power_crossing(kind: ArrayKind) -> Result<f64> {
    let mut lo = 0.0;
    while lo < ALPHA_SEARCH_MAX {
        let hi = (lo + ALPHA_SCAN_STEP).min(ALPHA_SEARCH_MAX);
        if half_power_excess(kind, hi) <= 0.0 {
            return find_root_bracketed(|a| half_power_excess(kind, a), lo, hi, ROOT_TOL);
        }
        lo = hi;
    }
    Err(Error::Numerical(format!(
        "{kind} gain does not reach the 3 dB level on (0, {ALPHA_SEARCH_MAX}]"
    )))
}

/// 3 dB range interval around a focal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamdepthResult {
    Finite { r_min: f64, r_max: f64, depth: f64 },
    Unbounded,
}

impl BeamdepthResult {
    fn finite(r_min: f64, r_max: f64) -> Self {
        BeamdepthResult::Finite {
            r_min,
            r_max,
            depth: r_max - r_min,
        }
    }

    pub fn depth(&self) -> Option<f64> {
        match self {
            BeamdepthResult::Finite { depth, .. } => Some(*depth),
            BeamdepthResult::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, BeamdepthResult::Unbounded)
    }
}

/// The angle that governs beamfocusing for `focus`: elevation `θ` for a UCA,
/// broadside azimuth `φ` for a ULA.
pub fn focus_angle(g: &ArrayGeometry, focus: &Position) -> f64 {
    match g.kind() {
        ArrayKind::Uca => focus.theta(),
        ArrayKind::Ula => focus.phi(),
    }
}

/// `sin²θ` for a UCA, `1 − (sinθ·sinφ)²` for a ULA (`cos²φ` in-plane).
fn angular_factor(g: &ArrayGeometry, theta: f64, phi: f64) -> f64 {
    match g.kind() {
        ArrayKind::Uca => {
            let s = theta.sin();
            s * s
        }
        ArrayKind::Ula => {
            let s = theta.sin() * phi.sin();
            1.0 - s * s
        }
    }
}

/// `(A, 16α)` for a UCA or `(A, 4α)` for a ULA, so that `B = coefficient·r_f`.
fn depth_terms(g: &ArrayGeometry, factor: f64, alpha: &Alpha3dB) -> Result<(f64, f64)> {
    if alpha.kind != g.kind() {
        return Err(Error::Config(format!(
            "α for a {} used with a {} geometry",
            alpha.kind,
            g.kind()
        )));
    }
    if alpha.value.is_nan() || alpha.value <= 0.0 {
        return Err(Error::Config(format!("α must be positive, got {}", alpha.value)));
    }
    let rd = g.rayleigh_distance();
    Ok(match g.kind() {
        ArrayKind::Uca => (PI * rd * factor, 16.0 * alpha.value),
        ArrayKind::Ula => (rd * factor, 4.0 * alpha.value),
    })
}

fn ebrd_from_factor(g: &ArrayGeometry, factor: f64, alpha: &Alpha3dB) -> Result<f64> {
    let (a, coefficient) = depth_terms(g, factor, alpha)?;
    Ok(a / coefficient)
}

/// EBRD along `angle`: `π·R_D·sin²θ/(16α)` for a UCA (`angle = θ`),
/// `R_D·cos²φ/(4α)` for a ULA (`angle = φ` in the array plane).
pub fn ebrd(g: &ArrayGeometry, angle: f64, alpha: &Alpha3dB) -> Result<f64> {
    let factor = match g.kind() {
        ArrayKind::Uca => angular_factor(g, angle, 0.0),
        ArrayKind::Ula => angular_factor(g, std::f64::consts::FRAC_PI_2, angle),
    };
    ebrd_from_factor(g, factor, alpha)
}

/// EBRD along the direction of `focus` (its range is ignored).
pub fn ebrd_toward(g: &ArrayGeometry, focus: &Position, alpha: &Alpha3dB) -> Result<f64> {
    ebrd_from_factor(g, angular_factor(g, focus.theta(), focus.phi()), alpha)
}

/// Closed-form 3 dB beamdepth. Unbounded when `r_f ≥ EBRD`, including the
/// degenerate directions (UCA boresight, ULA endfire) where the EBRD is 0.
pub fn beamdepth_closed(g: &ArrayGeometry, focus: &Position, alpha: &Alpha3dB) -> Result<BeamdepthResult> {
    check_near_field(g, focus.r())?;
    let factor = angular_factor(g, focus.theta(), focus.phi());
    let limit = ebrd_from_factor(g, factor, alpha)?;
    let r_f = focus.r();
    if r_f >= limit {
        return Ok(BeamdepthResult::Unbounded);
    }
    let (a, coefficient) = depth_terms(g, factor, alpha)?;
    let b = coefficient * r_f;
    Ok(BeamdepthResult::finite(a * r_f / (a + b), a * r_f / (a - b)))
}

/// Beamdepth read off the exact matched-filter gain.
///
/// The gain is sampled on `grid` points uniform in `1/r` over
/// `[1.2·D, 100·R_D]`; the first samples below `1/√2` on either side of the
/// focus bracket the 3 dB edges, which are then refined by bisection.
/// Unbounded when the far edge is never reached inside the sweep. If the near
/// edge is not reached, the interval starts at `1.2·D`.
pub fn beamdepth_numeric(g: &ArrayGeometry, focus: &Position, grid: usize) -> Result<BeamdepthResult> {
    if grid < MIN_NUMERIC_GRID {
        return Err(Error::Config(format!(
            "numeric beamdepth needs at least {MIN_NUMERIC_GRID} grid points, got {grid}"
        )));
    }
    check_near_field(g, focus.r())?;
    let r_lo = g.min_near_field();
    let r_hi = NUMERIC_SWEEP_RAYLEIGH_MULTIPLE * g.rayleigh_distance();
    let r_f = focus.r();
    if r_f >= r_hi {
        return Ok(BeamdepthResult::Unbounded);
    }
    let ranges = inverse_range_grid(r_lo, r_hi, grid)?;
    let gains = ranges
        .par_iter()
        .map(|&r| matched_gain(g, focus, r))
        .collect::<Result<Vec<_>>>()?;
    let below = |i: usize| gains[i] < FRAC_1_SQRT_2;
    let edge = |outside: f64, inside: f64| -> Result<f64> {
        find_root_bracketed(
            |r| matched_gain(g, focus, r).map_or(f64::NAN, |v| v - FRAC_1_SQRT_2),
            outside,
            inside,
            ROOT_TOL * r_f.max(1.0),
        )
    };

    let split = ranges.partition_point(|&r| r < r_f);
    let far = (split..ranges.len()).find(|&i| below(i));
    let Some(far) = far else {
        return Ok(BeamdepthResult::Unbounded);
    };
    let far_inside = if far == split { r_f } else { ranges[far - 1].max(r_f) };
    let r_max = edge(ranges[far], far_inside)?;

    let near = (0..split).rev().find(|&i| below(i));
    let r_min = match near {
        Some(i) => {
            let inside = if i + 1 < split { ranges[i + 1] } else { r_f };
            edge(ranges[i], inside.min(r_f))?
        }
        None => r_lo,
    };
    Ok(BeamdepthResult::finite(r_min, r_max))
}

/// JSON record for one beamdepth evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamdepthReport {
    pub kind: ArrayKind,
    pub angle_rad: f64,
    pub focus_m: f64,
    pub alpha: Option<f64>,
    pub alpha_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_m: Option<f64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub unbounded: bool,
    pub ebrd_m: Option<f64>,
}

impl BeamdepthReport {
    /// Closed-form report; `ebrd_m` uses the same `α`.
    pub fn closed(g: &ArrayGeometry, focus: &Position, alpha: &Alpha3dB) -> Result<Self> {
        let result = beamdepth_closed(g, focus, alpha)?;
        let limit = ebrd_toward(g, focus, alpha)?;
        Ok(Self::assemble(g, focus, Some(alpha.value), alpha.source.name(), result, Some(limit)))
    }

    /// Numeric sweep report; carries no `α` and no EBRD.
    pub fn numeric(g: &ArrayGeometry, focus: &Position, grid: usize) -> Result<Self> {
        let result = beamdepth_numeric(g, focus, grid)?;
        Ok(Self::assemble(g, focus, None, "numeric", result, None))
    }

    fn assemble(
        g: &ArrayGeometry,
        focus: &Position,
        alpha: Option<f64>,
        alpha_source: &'static str,
        result: BeamdepthResult,
        ebrd_m: Option<f64>,
    ) -> Self {
        let (r_min_m, r_max_m, depth_m, unbounded) = match result {
            BeamdepthResult::Finite { r_min, r_max, depth } => (Some(r_min), Some(r_max), Some(depth), false),
            BeamdepthResult::Unbounded => (None, None, None, true),
        };
        Self {
            kind: g.kind(),
            angle_rad: focus_angle(g, focus),
            focus_m: focus.r(),
            alpha,
            alpha_source,
            r_min_m,
            r_max_m,
            depth_m,
            unbounded,
            ebrd_m,
        }
    }
}

/// JSON record for one EBRD evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EbrdReport {
    pub kind: ArrayKind,
    pub angle_rad: f64,
    pub alpha: f64,
    pub alpha_source: &'static str,
    pub ebrd_m: f64,
}

impl EbrdReport {
    pub fn new(g: &ArrayGeometry, angle: f64, alpha: &Alpha3dB) -> Result<Self> {
        Ok(Self {
            kind: g.kind(),
            angle_rad: angle,
            alpha: alpha.value,
            alpha_source: alpha.source.name(),
            ebrd_m: ebrd(g, angle, alpha)?,
        })
    }
}
