//! Multi-user MRT sum-rate over random UE placements.
//!
//! With unit-modulus channels (`‖h‖² = N`) and MRT precoders `w_k = h_kᴴ/√N`,
//! user `k` sees `R_k = log₂(1 + γN / (1 + γN·Σ_{j≠k} G²_kj))`, where
//! `G_kj = |h_kᴴ h_j|/N` and `γ` is the per-user SNR.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{channel_vector, ChannelVector, Position};
use crate::error::{Error, Result};
use crate::focus::{alpha_3db, ebrd, AlphaSource};
use crate::format::sig12;
use crate::geometry::{ArrayGeometry, ArrayKind, CarrierConfig};

/// Generator behind every placement. Trial `t` of a run with seed `s` uses
/// `ChaCha8Rng::seed_from_u64(s)` with stream `t`.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3/seed_from_u64+stream=trial";

pub const DEFAULT_USERS: usize = 50;
pub const DEFAULT_TRIALS: usize = 200;

/// `|h_kᴴ h_j| / N`, clamped to 1 against rounding.
pub fn pairwise_correlation(h_k: &ChannelVector, h_j: &ChannelVector) -> Result<f64> {
    let inner = h_k.inner(h_j)?;
    if h_k.is_empty() {
        return Err(Error::Degenerate("empty channel vector".into()));
    }
    Ok((inner.norm() / h_k.len() as f64).min(1.0))
}

/// Unit-norm conjugate beamformer.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    weights: Vec<Complex64>,
}

impl Precoder {
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn norm(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `w·h`.
    pub fn apply(&self, h: &ChannelVector) -> Result<Complex64> {
        if h.len() != self.weights.len() {
            return Err(Error::Config(format!(
                "precoder length {} does not match channel length {}",
                self.weights.len(),
                h.len()
            )));
        }
        Ok(self.weights.iter().zip(h.entries()).map(|(w, x)| w * x).sum())
    }
}

/// `w = hᴴ/‖h‖`, which is `hᴴ/√N` for unit-modulus channels.
pub fn mrt_precoder(h: &ChannelVector) -> Result<Precoder> {
    let norm = h.norm_sqr().sqrt();
    if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
        return Err(Error::Degenerate(format!("cannot precode a channel with norm {norm}")));
    }
    Ok(Precoder {
        weights: h.entries().iter().map(|z| z.conj() / norm).collect(),
    })
}

fn check_snr(snr_linear: f64) -> Result<()> {
    if snr_linear > 0.0 && snr_linear.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("SNR must be positive and finite, got {snr_linear}")))
    }
}

fn rate(n: f64, snr_linear: f64, interference: f64) -> f64 {
    let signal = snr_linear * n;
    (1.0 + signal / (1.0 + signal * interference)).log2()
}

/// Rate of user `k` (0-based) in bits/s/Hz.
pub fn user_rate(k: usize, channels: &[ChannelVector], snr_linear: f64) -> Result<f64> {
    check_snr(snr_linear)?;
    let h_k = channels.get(k).ok_or(Error::Index {
        index: k,
        len: channels.len(),
    })?;
    let mut interference = 0.0;
    for (j, h_j) in channels.iter().enumerate() {
        if j != k {
            let g = pairwise_correlation(h_k, h_j)?;
            interference += g * g;
        }
    }
    Ok(rate(h_k.len() as f64, snr_linear, interference))
}

/// Squared correlations `G²_kj` (diagonal zero).
fn correlation_matrix(channels: &[ChannelVector]) -> Result<Vec<Vec<f64>>> {
    let k = channels.len();
    let mut m = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let g = pairwise_correlation(&channels[a], &channels[b])?;
            m[a][b] = g * g;
            m[b][a] = g * g;
        }
    }
    Ok(m)
}

/// `Σ_k R_k` for every SNR in `snr_linear`, sharing one correlation matrix.
pub fn sum_rates(channels: &[ChannelVector], snr_linear: &[f64]) -> Result<Vec<f64>> {
    let Some(first) = channels.first() else {
        return Err(Error::Config("sum rate needs at least one user".into()));
    };
    let n = first.len() as f64;
    let corr = correlation_matrix(channels)?;
    let interference: Vec<f64> = corr.iter().map(|row| row.iter().sum()).collect();
    snr_linear
        .iter()
        .map(|&snr| {
            check_snr(snr)?;
            Ok(interference.iter().map(|&i| rate(n, snr, i)).sum())
        })
        .collect()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ElementSpacing {
    #[default]
    #[serde(rename = "half-wavelength")]
    HalfWavelength,
}

/// Array in a scenario file: exactly one of `n` and `aperture_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySpec {
    pub kind: ArrayKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub aperture_m: Option<f64>,
    pub fc_ghz: f64,
    #[serde(default)]
    pub spacing: ElementSpacing,
}

impl ArraySpec {
    pub fn geometry(&self) -> Result<ArrayGeometry> {
        let carrier = CarrierConfig::from_ghz(self.fc_ghz)?;
        match (self.n, self.aperture_m) {
            (Some(n), None) => ArrayGeometry::new(self.kind, n, carrier),
            (None, Some(d)) => ArrayGeometry::for_aperture(self.kind, d, carrier),
            _ => Err(Error::Config("exactly one of `n` and `aperture_m` must be set".into())),
        }
    }
}

/// How UE directions are drawn. Ranges are always uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UeDistribution {
    /// `θ ~ U[−π/2, π/2]`, `φ ~ U[−π, π]`.
    Uniform2d,
    /// `θ = π/2`, `φ ~ U[−π, π]`.
    AzimuthOnly,
    /// `θ ~ U[−π/2, π/2]`, `φ = 0`.
    ElevationOnly,
    /// `θ = π/2`, `φ ~ U[−π/2, π/2]`: the half-plane in front of a ULA.
    BoresightUla,
}

/// Upper end of the UE range interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RangeBoundRepr", into = "RangeBoundRepr")]
pub enum RangeBound {
    /// EBRD at the array's best direction (UCA `θ = π/2`, ULA `φ = 0`) with
    /// the published α.
    EbrdAtBestAngle,
    Meters(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RangeBoundRepr {
    Name(String),
    Meters(f64),
}

impl TryFrom<RangeBoundRepr> for RangeBound {
    type Error = String;

    fn try_from(repr: RangeBoundRepr) -> std::result::Result<Self, String> {
        match repr {
            RangeBoundRepr::Name(s) if s == "ebrd_at_best_angle" => Ok(RangeBound::EbrdAtBestAngle),
            RangeBoundRepr::Name(s) => Err(format!("unknown range bound `{s}`")),
            RangeBoundRepr::Meters(m) => Ok(RangeBound::Meters(m)),
        }
    }
}

impl From<RangeBound> for RangeBoundRepr {
    fn from(b: RangeBound) -> Self {
        match b {
            RangeBound::EbrdAtBestAngle => RangeBoundRepr::Name("ebrd_at_best_angle".into()),
            RangeBound::Meters(m) => RangeBoundRepr::Meters(m),
        }
    }
}

impl RangeBound {
    pub fn resolve(&self, g: &ArrayGeometry) -> Result<f64> {
        match *self {
            RangeBound::Meters(m) => Ok(m),
            RangeBound::EbrdAtBestAngle => {
                let alpha = alpha_3db(g.kind(), AlphaSource::PaperConstant)?;
                let angle = match g.kind() {
                    ArrayKind::Uca => FRAC_PI_2,
                    ArrayKind::Ula => 0.0,
                };
                ebrd(g, angle, &alpha)
            }
        }
    }
}

fn default_users() -> usize {
    DEFAULT_USERS
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_bound() -> RangeBound {
    RangeBound::EbrdAtBestAngle
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub array: ArraySpec,
    #[serde(default = "default_users")]
    pub k: usize,
    pub distribution: UeDistribution,
    #[serde(default = "default_bound")]
    pub range_bound: RangeBound,
    pub snr_db: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("snr_db must not be empty".into()));
        }
        if let Some(bad) = self.snr_db.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("non-finite SNR {bad}")));
        }
        if self.distribution == UeDistribution::BoresightUla && self.array.kind != ArrayKind::Ula {
            return Err(Error::Config("boresight_ula placement requires a ULA".into()));
        }
        self.array.geometry().map(|_| ())
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        self.array.geometry()
    }

    /// `(1.2·D, bound)`, checked to be a non-empty interval.
    pub fn range_interval(&self, g: &ArrayGeometry) -> Result<(f64, f64)> {
        let lo = g.min_near_field();
        let hi = self.range_bound.resolve(g)?;
        if hi.is_nan() || hi <= lo || hi.is_infinite() {
            return Err(Error::Config(format!(
                "range bound {hi} m is not beyond the reactive limit {lo} m"
            )));
        }
        Ok((lo, hi))
    }
}

fn draw_position(
    distribution: UeDistribution,
    (lo, hi): (f64, f64),
    rng: &mut impl Rng,
) -> Result<Position> {
    let r = rng.gen_range(lo..=hi);
    let (theta, phi) = match distribution {
        UeDistribution::Uniform2d => (rng.gen_range(-FRAC_PI_2..=FRAC_PI_2), rng.gen_range(-PI..=PI)),
        UeDistribution::AzimuthOnly => (FRAC_PI_2, rng.gen_range(-PI..=PI)),
        UeDistribution::ElevationOnly => (rng.gen_range(-FRAC_PI_2..=FRAC_PI_2), 0.0),
        UeDistribution::BoresightUla => (FRAC_PI_2, rng.gen_range(-FRAC_PI_2..=FRAC_PI_2)),
    };
    Position::new(r, theta, phi)
}

/// `config.k` positions with ranges uniform in `[1.2·D, bound]`.
pub fn place_ues(config: &ScenarioConfig, rng: &mut impl Rng) -> Result<Vec<Position>> {
    config.validate()?;
    let g = config.geometry()?;
    let interval = config.range_interval(&g)?;
    (0..config.k)
        .map(|_| draw_position(config.distribution, interval, rng))
        .collect()
}

/// Generator for one trial; independent of scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumRatePoint {
    pub snr_db: f64,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

impl SumRatePoint {
    /// `std/√trials`.
    pub fn standard_error(&self) -> f64 {
        self.std / (self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumRateResult {
    pub points: Vec<SumRatePoint>,
    pub rng: &'static str,
}

impl SumRateResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,mean_sumrate,std_sumrate,trials\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", sig12(p.snr_db), sig12(p.mean), sig12(p.std), p.trials));
        }
        out
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }
}

/// Monte Carlo sum-rate. Each trial places `k` UEs once and evaluates every
/// SNR on that placement; trials run in parallel and are reduced in order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<SumRateResult> {
    config.validate()?;
    let g = config.geometry()?;
    let interval = config.range_interval(&g)?;
    let snr: Vec<f64> = config.snr_db.iter().map(|&db| db_to_linear(db)).collect();

    let per_trial = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let channels = (0..config.k)
                .map(|_| {
                    let p = draw_position(config.distribution, interval, &mut rng)?;
                    channel_vector(&g, &p)
                })
                .collect::<Result<Vec<_>>>()?;
            sum_rates(&channels, &snr)
        })
        .collect::<Result<Vec<_>>>()?;

    let trials = config.trials;
    let points = config
        .snr_db
        .iter()
        .enumerate()
        .map(|(i, &snr_db)| {
            let mean = per_trial.iter().map(|row| row[i]).sum::<f64>() / trials as f64;
            let std = if trials > 1 {
                let ss: f64 = per_trial.iter().map(|row| (row[i] - mean).powi(2)).sum();
                (ss / (trials - 1) as f64).sqrt()
            } else {
                0.0
            };
            SumRatePoint { snr_db, mean, std, trials }
        })
        .collect();
    Ok(SumRateResult {
        points,
        rng: RNG_ALGORITHM,
    })
}
