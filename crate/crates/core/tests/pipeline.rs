use std::f64::consts::FRAC_PI_2;

use nearfield_core::capacity::run_scenario;
use nearfield_core::channel::Position;
use nearfield_core::focus::{alpha_3db, beamdepth_closed, beamdepth_numeric, ebrd, ebrd_toward, AlphaSource};
use nearfield_core::geometry::{ArrayGeometry, ArrayKind, CarrierConfig};

fn uca() -> ArrayGeometry {
    ArrayGeometry::uca(256, CarrierConfig::from_ghz(28.0).unwrap()).unwrap()
}

#[test]
fn focus_inside_ebrd_has_matching_depths() {
    let g = uca();
    let alpha = alpha_3db(ArrayKind::Uca, AlphaSource::ComputedRoot).unwrap();
    let limit = ebrd(&g, FRAC_PI_2, &alpha).unwrap();
    let focus = Position::new(0.4 * limit, FRAC_PI_2, 0.3).unwrap();
    assert_eq!(ebrd_toward(&g, &focus, &alpha).unwrap(), limit);

    let closed = beamdepth_closed(&g, &focus, &alpha).unwrap().depth().unwrap();
    let numeric = beamdepth_numeric(&g, &focus, 2000).unwrap().depth().unwrap();
    assert!((closed - numeric).abs() / numeric < 0.02, "{closed} vs {numeric}");
}

#[test]
fn focus_past_ebrd_is_unbounded() {
    let g = uca();
    let alpha = alpha_3db(ArrayKind::Uca, AlphaSource::PaperConstant).unwrap();
    let limit = ebrd(&g, FRAC_PI_2, &alpha).unwrap();
    let focus = Position::new(1.01 * limit, FRAC_PI_2, 0.0).unwrap();
    assert!(beamdepth_closed(&g, &focus, &alpha).unwrap().is_unbounded());
}

#[test]
fn scenario_from_json_is_reproducible() {
    let text = r#"{"array":{"kind":"ula","n":64,"fc_ghz":28},"k":4,
        "distribution":"boresight_ula","snr_db":[0,20],"trials":6,"seed":7}"#;
    let cfg = serde_json::from_str(text).unwrap();
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let means = a.means();
    assert!(means[1] > means[0]);
}
