use revival_core::analysis::{compare_revival_vs_superrevival, superrevival_scan};
use revival_core::io::write_series_csv;
use revival_core::packet::autocorrelation_series;
use revival_core::radial::RadialBasis;
use revival_core::{EnergyModel, ExpansionPoint, WeightDistribution};

fn setup(delta: f64, nbar: f64) -> (EnergyModel, WeightDistribution, ExpansionPoint) {
    (
        EnergyModel::quantum_defect(delta).unwrap(),
        WeightDistribution::gaussian(nbar, 2.5, 5.0).unwrap(),
        ExpansionPoint::new(nbar).unwrap(),
    )
}

#[test]
fn defect_shifts_time_scales_exactly() {
    for delta in [0.05, 0.5] {
        let (model, _, point) = setup(delta, 45.0);
        let shifted = EnergyModel::hydrogenic()
            .time_scales(ExpansionPoint::new(45.0 - delta).unwrap())
            .unwrap();
        assert_eq!(model.time_scales(point).unwrap(), shifted);
    }
}

#[test]
fn scan_is_deterministic() {
    let (model, weights, point) = setup(0.0, 40.0);
    let a = superrevival_scan(&model, &weights, point).unwrap();
    let b = superrevival_scan(&model, &weights, point).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        a.iter().filter_map(|r| r.q).collect::<Vec<_>>(),
        vec![3, 6, 9]
    );
}

#[test]
fn series_csv_is_reproducible() {
    let (model, weights, point) = setup(0.0, 36.0);
    let ts = model.time_scales(point).unwrap();
    let render = || {
        let s =
            autocorrelation_series(&model, &weights, 0.0, 3.0 * ts.t_cl, ts.t_cl / 50.0).unwrap();
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &s).unwrap();
        buf
    };
    let first = render();
    assert_eq!(first, render());
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 1 + 151);
}

#[test]
fn narrow_packet_dominance_and_density() {
    let (model, weights, point) = setup(0.0, 36.0);
    let cmp = compare_revival_vs_superrevival(&model, &weights, point).unwrap();
    assert!(cmp.revival_max <= 1.0 && cmp.superrevival_max <= 1.0);
    assert!(!cmp.degenerate);

    let basis = RadialBasis::with_default_grid(&weights, 1).unwrap();
    let rho = basis.density(&model, cmp.superrevival_max_time);
    assert!((basis.grid().integrate(&rho) - 1.0).abs() < 1e-4);
}
