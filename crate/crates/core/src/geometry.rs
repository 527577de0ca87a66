//! Uniform linear (ULA) and uniform circular (UCA) array geometries.
//!
//! Coordinate conventions:
//!
//! * The UCA lies in the `xy` plane, centered at the origin. Element `n`
//!   (1-based) sits at polar angle `ψ_n = 2πn/N` on a circle of radius `R`.
//!   Elevation `θ` is measured from the array normal (`+z`), azimuth `φ`
//!   from `+x` in the array plane.
//! * The ULA lies on the `y` axis, centered at the origin, so a position at
//!   `θ = π/2` has azimuth `φ` measured from the array broadside (`+x`).
//!
//! Apertures follow the element-count relations `D_ULA = N·d` and
//! `π·D_UCA = N·d`, which makes the UCA aperture `1/π` of the ULA's and its
//! Rayleigh distance `1/π²` of the ULA's for equal `N` and `d`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Lower edge of the radiative near-field as a multiple of the aperture.
pub const MIN_NEAR_FIELD_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayKind {
    Ula,
    Uca,
}

impl ArrayKind {
    pub fn name(self) -> &'static str {
        match self {
            ArrayKind::Ula => "ULA",
            ArrayKind::Uca => "UCA",
        }
    }
}

impl fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Carrier frequency, wavelength and inter-element spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarrierConfig {
    frequency_hz: f64,
    wavelength_m: f64,
    spacing_m: f64,
}

impl CarrierConfig {
    /// Half-wavelength spacing at the given carrier frequency.
    pub fn half_wavelength(frequency_hz: f64) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::Config(format!(
                "carrier frequency must be positive, got {frequency_hz} Hz"
            )));
        }
        let wavelength_m = SPEED_OF_LIGHT / frequency_hz;
        Ok(Self {
            frequency_hz,
            wavelength_m,
            spacing_m: 0.5 * wavelength_m,
        })
    }

    pub fn from_ghz(frequency_ghz: f64) -> Result<Self> {
        Self::half_wavelength(frequency_ghz * 1e9)
    }

    /// Explicit wavelength and spacing; requires `0 < d ≤ λ/2`.
    pub fn from_wavelength(wavelength_m: f64, spacing_m: f64) -> Result<Self> {
        if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
            return Err(Error::Config(format!(
                "wavelength must be positive, got {wavelength_m} m"
            )));
        }
        if !(spacing_m.is_finite() && spacing_m > 0.0) || spacing_m > 0.5 * wavelength_m * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "spacing must lie in (0, λ/2] = (0, {}], got {spacing_m} m",
                0.5 * wavelength_m
            )));
        }
        Ok(Self {
            frequency_hz: SPEED_OF_LIGHT / wavelength_m,
            wavelength_m,
            spacing_m,
        })
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength_m
    }

    pub fn spacing(&self) -> f64 {
        self.spacing_m
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_m
    }
}

/// An immutable ULA or UCA with its derived constants and element layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    kind: ArrayKind,
    n: usize,
    carrier: CarrierConfig,
    aperture_m: f64,
    rayleigh_m: f64,
    elements: Vec<[f64; 3]>,
}

impl ArrayGeometry {
    /// ULA with aperture `D = N·d`, elements centered on the `y` axis.
    pub fn ula(n: usize, carrier: CarrierConfig) -> Result<Self> {
        check_count(n)?;
        let d = carrier.spacing();
        let center = 0.5 * (n as f64 + 1.0);
        let elements = (1..=n)
            .map(|i| [0.0, (i as f64 - center) * d, 0.0])
            .collect();
        Ok(Self::assemble(ArrayKind::Ula, n, carrier, n as f64 * d, elements))
    }

    /// UCA whose circumference holds `N` elements at arc spacing `d`.
    pub fn uca(n: usize, carrier: CarrierConfig) -> Result<Self> {
        check_count(n)?;
        let aperture = n as f64 * carrier.spacing() / PI;
        let radius = 0.5 * aperture;
        let elements = (1..=n)
            .map(|i| {
                let psi = uca_element_angle(i, n);
                [radius * psi.cos(), radius * psi.sin(), 0.0]
            })
            .collect();
        Ok(Self::assemble(ArrayKind::Uca, n, carrier, aperture, elements))
    }

    /// Convenience dispatch on `kind`.
    pub fn new(kind: ArrayKind, n: usize, carrier: CarrierConfig) -> Result<Self> {
        match kind {
            ArrayKind::Ula => Self::ula(n, carrier),
            ArrayKind::Uca => Self::uca(n, carrier),
        }
    }

    /// UCA with `N = round(π·D/d)` (ties round up).
    pub fn uca_for_aperture(aperture_m: f64, carrier: CarrierConfig) -> Result<Self> {
        let n = count_for_aperture(PI * aperture_m, carrier)?;
        Self::uca(n, carrier)
    }

    /// ULA with `N = round(D/d)` (ties round up).
    pub fn ula_for_aperture(aperture_m: f64, carrier: CarrierConfig) -> Result<Self> {
        let n = count_for_aperture(aperture_m, carrier)?;
        Self::ula(n, carrier)
    }

    pub fn for_aperture(kind: ArrayKind, aperture_m: f64, carrier: CarrierConfig) -> Result<Self> {
        match kind {
            ArrayKind::Ula => Self::ula_for_aperture(aperture_m, carrier),
            ArrayKind::Uca => Self::uca_for_aperture(aperture_m, carrier),
        }
    }

    fn assemble(
        kind: ArrayKind,
        n: usize,
        carrier: CarrierConfig,
        aperture_m: f64,
        elements: Vec<[f64; 3]>,
    ) -> Self {
        Self {
            kind,
            n,
            carrier,
            aperture_m,
            rayleigh_m: 2.0 * aperture_m * aperture_m / carrier.wavelength(),
            elements,
        }
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn carrier(&self) -> &CarrierConfig {
        &self.carrier
    }

    pub fn wavelength(&self) -> f64 {
        self.carrier.wavelength()
    }

    pub fn spacing(&self) -> f64 {
        self.carrier.spacing()
    }

    pub fn aperture(&self) -> f64 {
        self.aperture_m
    }

    /// UCA radius `D/2`; `None` for a ULA.
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            ArrayKind::Uca => Some(0.5 * self.aperture_m),
            ArrayKind::Ula => None,
        }
    }

    /// Rayleigh distance `2D²/λ`.
    pub fn rayleigh_distance(&self) -> f64 {
        self.rayleigh_m
    }

    /// Radiative near-field lower bound `1.2·D`.
    pub fn min_near_field(&self) -> f64 {
        MIN_NEAR_FIELD_FACTOR * self.aperture_m
    }

    /// Cartesian element coordinates in meters, index order `n = 1..=N`.
    pub fn element_positions(&self) -> &[[f64; 3]] {
        &self.elements
    }

    /// UCA element polar angle `ψ_n = 2πn/N` for 1-based `n`.
    pub fn element_angle(&self, n: usize) -> Result<f64> {
        if self.kind != ArrayKind::Uca {
            return Err(Error::Kind {
                op: "element_angle",
                kind: self.kind.name(),
            });
        }
        self.check_index(n)?;
        Ok(uca_element_angle(n, self.n))
    }

    pub(crate) fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n {
            Err(Error::Index { index: n, len: self.n })
        } else {
            Ok(())
        }
    }
}

/// Free-function form of [`ArrayGeometry::rayleigh_distance`].
pub fn rayleigh_distance(g: &ArrayGeometry) -> f64 {
    g.rayleigh_distance()
}

fn uca_element_angle(n: usize, count: usize) -> f64 {
    2.0 * PI * n as f64 / count as f64
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Config(format!("arrays need at least 2 elements, got {n}")))
    } else {
        Ok(())
    }
}

fn count_for_aperture(length_m: f64, carrier: CarrierConfig) -> Result<usize> {
    if !(length_m.is_finite() && length_m > 0.0) {
        return Err(Error::Config(format!("aperture must be positive, got {length_m} m")));
    }
    let n = (length_m / carrier.spacing() + 0.5).floor();
    if n < 2.0 {
        return Err(Error::Config(format!(
            "aperture {length_m} m holds fewer than 2 elements"
        )));
    }
    Ok(n as usize)
}
