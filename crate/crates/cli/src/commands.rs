use std::f64::consts::FRAC_PI_2;
use std::fs;

use chrono::Utc;
use nearfield_core::capacity::{run_scenario, ScenarioConfig};
use nearfield_core::channel::Position;
use nearfield_core::focus::{alpha_3db, Alpha3dB, AlphaSource, BeamdepthReport, EbrdReport};
use nearfield_core::format::sig12;
use nearfield_core::gain::{decay_functions, gain_profile, GainModel};
use nearfield_core::geometry::{ArrayGeometry, ArrayKind, CarrierConfig};
use nearfield_core::validation::run_all;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{emit, to_json_text, Emission};
use crate::{AlphaArg, ArrayOpts, BeamdepthArgs, DecayArgs, EbrdArgs, FocusOpts, GainSweepArgs, ModelArg, SumrateArgs};

/// Degrees to radians, with ±90° mapped exactly onto ±π/2.
fn radians(deg: f64) -> f64 {
    if deg == 90.0 {
        FRAC_PI_2
    } else if deg == -90.0 {
        -FRAC_PI_2
    } else {
        deg.to_radians()
    }
}

fn geometry(a: &ArrayOpts) -> CliResult<ArrayGeometry> {
    let carrier = CarrierConfig::from_ghz(a.fc_ghz)?;
    let kind = ArrayKind::from(a.array);
    Ok(match (a.n, a.aperture_m) {
        (Some(n), None) => ArrayGeometry::new(kind, n, carrier)?,
        (None, Some(d)) => ArrayGeometry::for_aperture(kind, d, carrier)?,
        _ => return Err(CliError::Usage("exactly one of --n and --aperture-m is required".into())),
    })
}

fn geometry_json(g: &ArrayGeometry) -> Value {
    json!({
        "kind": g.kind(),
        "n": g.len(),
        "fc_hz": g.carrier().frequency_hz(),
        "wavelength_m": g.wavelength(),
        "spacing_m": g.spacing(),
        "aperture_m": g.aperture(),
        "rayleigh_m": g.rayleigh_distance(),
        "min_near_field_m": g.min_near_field(),
    })
}

fn focus_position(f: &FocusOpts) -> CliResult<Position> {
    Ok(Position::new(f.focus_m, radians(f.theta_deg), radians(f.phi_deg))?)
}

fn focus_json(f: &FocusOpts) -> Value {
    json!({"focus_m": f.focus_m, "theta_deg": f.theta_deg, "phi_deg": f.phi_deg})
}

fn alphas(kind: ArrayKind, arg: AlphaArg) -> CliResult<Vec<Alpha3dB>> {
    let sources: &[AlphaSource] = match arg {
        AlphaArg::Paper => &[AlphaSource::PaperConstant],
        AlphaArg::Computed => &[AlphaSource::ComputedRoot],
        AlphaArg::Both => &[AlphaSource::PaperConstant, AlphaSource::ComputedRoot],
    };
    sources
        .iter()
        .map(|&s| alpha_3db(kind, s).map_err(CliError::from))
        .collect()
}

fn alpha_name(arg: AlphaArg) -> &'static str {
    match arg {
        AlphaArg::Paper => "paper",
        AlphaArg::Computed => "computed",
        AlphaArg::Both => "both",
    }
}

pub fn gain_sweep(a: &GainSweepArgs) -> CliResult<()> {
    let started = Utc::now();
    let g = geometry(&a.array)?;
    let focus = focus_position(&a.focus)?;
    let r_lo = a.r_lo.unwrap_or_else(|| g.min_near_field());
    let r_hi = a.r_hi.unwrap_or_else(|| 100.0 * g.rayleigh_distance());
    let model = match a.model {
        ModelArg::Exact => GainModel::ExactSum,
        ModelArg::Taylor => GainModel::TaylorSum,
        ModelArg::Closed => GainModel::ClosedForm,
    };
    let profile = gain_profile(&g, &focus, r_lo, r_hi, a.samples, model)?;
    let config = json!({
        "geometry": geometry_json(&g),
        "focus": focus_json(&a.focus),
        "model": model,
        "r_lo_m": r_lo,
        "r_hi_m": r_hi,
        "samples": a.samples,
        "grid": "uniform in 1/r",
    });
    let e = Emission {
        command: "gain-sweep",
        body: profile.to_csv(),
        config,
        seed: None,
        rng: None,
    };
    emit(&e, a.out.as_deref(), started)
}

pub fn beamdepth(a: &BeamdepthArgs) -> CliResult<()> {
    let started = Utc::now();
    let g = geometry(&a.array)?;
    let focus = focus_position(&a.focus)?;
    let mut reports = alphas(g.kind(), a.alpha)?
        .iter()
        .map(|alpha| BeamdepthReport::closed(&g, &focus, alpha))
        .collect::<Result<Vec<_>, _>>()?;
    if a.numeric {
        reports.push(BeamdepthReport::numeric(&g, &focus, a.grid)?);
    }
    let body = if reports.len() == 1 {
        to_json_text(&reports[0])?
    } else {
        to_json_text(&reports)?
    };
    let config = json!({
        "geometry": geometry_json(&g),
        "focus": focus_json(&a.focus),
        "alpha": alpha_name(a.alpha),
        "numeric": a.numeric,
        "grid": a.grid,
    });
    let e = Emission {
        command: "beamdepth",
        body,
        config,
        seed: None,
        rng: None,
    };
    emit(&e, a.out.as_deref(), started)
}

/// Parses `start:stop:step` into the inclusive list of angles.
pub fn parse_sweep(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("--sweep-deg expects start:stop:step, got `{spec}`"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if ![start, stop, step].iter().all(|v| v.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn ebrd(a: &EbrdArgs) -> CliResult<()> {
    let started = Utc::now();
    let g = geometry(&a.array)?;
    let kind = g.kind();
    let alpha_list = alphas(kind, a.alpha)?;
    let mut config = json!({
        "geometry": geometry_json(&g),
        "alpha": alpha_name(a.alpha),
    });

    let body = if let Some(spec) = &a.sweep_deg {
        let [alpha] = alpha_list[..] else {
            return Err(CliError::Usage("--sweep-deg takes a single --alpha (paper or computed)".into()));
        };
        let angles = parse_sweep(spec)?;
        let mut csv = String::from("angle_deg,ebrd_m\n");
        for deg in angles {
            let v = nearfield_core::focus::ebrd(&g, radians(deg), &alpha)?;
            csv.push_str(&format!("{},{}\n", sig12(deg), sig12(v)));
        }
        config["sweep_deg"] = json!(spec);
        config["angle"] = json!(if kind == ArrayKind::Uca { "theta" } else { "phi" });
        csv
    } else {
        let deg = match kind {
            ArrayKind::Uca if a.phi_deg.is_some() => {
                return Err(CliError::Usage("the UCA EBRD depends on --theta-deg only".into()))
            }
            ArrayKind::Ula if a.theta_deg.is_some() => {
                return Err(CliError::Usage("the ULA EBRD depends on --phi-deg only".into()))
            }
            ArrayKind::Uca => a.theta_deg.unwrap_or(90.0),
            ArrayKind::Ula => a.phi_deg.unwrap_or(0.0),
        };
        let reports = alpha_list
            .iter()
            .map(|alpha| EbrdReport::new(&g, radians(deg), alpha))
            .collect::<Result<Vec<_>, _>>()?;
        config["angle_deg"] = json!(deg);
        if reports.len() == 1 {
            to_json_text(&reports[0])?
        } else {
            to_json_text(&reports)?
        }
    };
    let e = Emission {
        command: "ebrd",
        body,
        config,
        seed: None,
        rng: None,
    };
    emit(&e, a.out.as_deref(), started)
}

pub fn decay(a: &DecayArgs) -> CliResult<()> {
    let started = Utc::now();
    if ![a.x_lo, a.x_hi, a.step].iter().all(|v| v.is_finite()) || a.step <= 0.0 || a.x_lo < 0.0 || a.x_hi < a.x_lo {
        return Err(CliError::Usage("decay needs 0 ≤ --x-lo ≤ --x-hi and --step > 0".into()));
    }
    let count = ((a.x_hi - a.x_lo) / a.step + 1e-9).floor() as usize + 1;
    let mut csv = String::from("x,bessel,fresnel,sinc\n");
    for i in 0..count {
        let x = a.x_lo + i as f64 * a.step;
        let (j0, fr, sc) = decay_functions(x)?;
        csv.push_str(&format!("{},{},{},{}\n", sig12(x), sig12(j0), sig12(fr), sig12(sc)));
    }
    let e = Emission {
        command: "decay",
        body: csv,
        config: json!({"x_lo": a.x_lo, "x_hi": a.x_hi, "step": a.step}),
        seed: None,
        rng: None,
    };
    emit(&e, a.out.as_deref(), started)
}

pub fn sumrate(a: &SumrateArgs) -> CliResult<()> {
    let started = Utc::now();
    let text = fs::read_to_string(&a.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", a.config.display())))?;
    let mut cfg: ScenarioConfig = serde_json::from_str(&text)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = a.trials {
        cfg.trials = trials;
    }
    cfg.validate()?;
    let g = cfg.geometry()?;
    let (r_lo, r_hi) = cfg.range_interval(&g)?;
    let result = run_scenario(&cfg)?;
    let config = json!({
        "scenario": cfg,
        "resolved": {
            "geometry": geometry_json(&g),
            "range_interval_m": [r_lo, r_hi],
            "snr_axis": "per-user SNR gamma in dB",
        },
    });
    let e = Emission {
        command: "sumrate",
        body: result.to_csv(),
        config,
        seed: Some(cfg.seed),
        rng: Some(result.rng),
    };
    emit(&e, a.out.as_deref(), started)
}

pub fn validate() -> CliResult<()> {
    let checks = run_all();
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("0:90:30").unwrap(), vec![0.0, 30.0, 60.0, 90.0]);
        assert_eq!(parse_sweep("-10:10:10").unwrap(), vec![-10.0, 0.0, 10.0]);
        assert_eq!(parse_sweep("0:1:0.1").unwrap().len(), 11);
        for bad in ["0:90", "0:90:0", "10:0:1", "a:b:c"] {
            assert!(matches!(parse_sweep(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn right_angles_are_exact() {
        assert_eq!(radians(90.0), FRAC_PI_2);
        assert_eq!(radians(-90.0), -FRAC_PI_2);
        assert_eq!(radians(0.0), 0.0);
    }
}
