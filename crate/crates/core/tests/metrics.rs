use proptest::prelude::*;
use spinadc_core::adc::{run_conventional, BankRole, ComparatorModel, PhaseSchedule, PipelineConfig, QuantizerBank};
use spinadc_core::device::{DeviceConfig, SwitchProtocol};
use spinadc_core::metrics::*;
use spinadc_core::{SimError, SimOptions};

const UA: f64 = 1e-6;

fn quiet() -> PipelineConfig {
    PipelineConfig {
        comparator: ComparatorModel::default().noiseless(),
        sim: SimOptions::noiseless(),
        ..PipelineConfig::default()
    }
}

fn ideal_bank() -> QuantizerBank {
    QuantizerBank::design(&DeviceConfig::default(), 20.0 * UA, 140.0 * UA, BankRole::Conversion).unwrap()
}

#[test]
fn ideal_bank_thresholds_sit_on_the_designed_ladder() {
    let adc = SingleShotAdc::new(ideal_bank(), quiet());
    let curve = measure_transfer(&adc, 0.0, 160.0 * UA, 512).unwrap();
    let step = 160.0 * UA / 512.0;
    for (k, t) in curve.thresholds.iter().enumerate() {
        let want = 20.0 * UA * (k + 1) as f64;
        assert!((t - want).abs() < step, "threshold {k}: {t:e}");
        assert!((t / want - 1.0).abs() < 1e-9, "threshold {k}: {t:e}");
    }
    assert_eq!(curve.lsb, 20.0 * UA);
    let report = dnl_inl(&curve);
    assert!(report.dnl.iter().chain(&report.inl).all(|x| x.abs() < 1e-9), "{report:?}");
}

#[test]
fn range_below_the_first_threshold_has_no_transitions() {
    let adc = SingleShotAdc::new(ideal_bank(), quiet());
    assert!(matches!(measure_transfer(&adc, 0.0, 15.0 * UA, 512), Err(SimError::NoTransitions)));
}

#[test]
fn widening_one_device_shifts_only_its_threshold() {
    let mut bank = ideal_bank();
    bank.devices[3] = bank.devices[3].with_width(bank.devices[3].w_hm * 1.025);
    let curve = measure_transfer(&SingleShotAdc::new(bank, quiet()), 0.0, 160.0 * UA, 512).unwrap();
    assert!((curve.thresholds[3] / (80.0 * UA) - 1.025).abs() < 1e-8, "{:e}", curve.thresholds[3]);
    assert!((curve.thresholds[2] / (60.0 * UA) - 1.0).abs() < 1e-8);
    assert!((curve.thresholds[4] / (100.0 * UA) - 1.0).abs() < 1e-8);
}

#[test]
fn code_decrement_is_reported() {
    let adc = |i: f64| -> spinadc_core::Result<u8> {
        let code = (i / (20.0 * UA)).floor().min(7.0) as u8;
        Ok(if (95.0 * UA..100.0 * UA).contains(&i) { 2 } else { code })
    };
    let err = measure_transfer(&adc, 0.0, 160.0 * UA, 512).unwrap_err();
    assert!(matches!(err, SimError::NonMonotonicTransfer { from: 4, to: 2, .. }), "{err}");
}

#[test]
fn missing_top_codes_are_reported() {
    let adc = |i: f64| -> spinadc_core::Result<u8> { Ok((i / (20.0 * UA)).floor().min(5.0) as u8) };
    let err = measure_transfer(&adc, 0.0, 160.0 * UA, 512).unwrap_err();
    assert!(matches!(err, SimError::IncompleteTransfer { found: 5 }));
}

#[test]
fn coarse_ramps_are_rejected() {
    let adc = |_: f64| -> spinadc_core::Result<u8> { Ok(0) };
    assert!(matches!(measure_transfer(&adc, 0.0, 1.0, 100), Err(SimError::InvalidArgument(_))));
}

fn uniform() -> Vec<f64> {
    (1..=7).map(|k| 20.0 * UA * k as f64).collect()
}

#[test]
fn uniform_ladder_is_perfectly_linear() {
    let r = dnl_inl(&TransferCurve::from_thresholds(uniform(), 0.0, 160.0 * UA));
    assert_eq!(r.dnl.len(), 6);
    assert_eq!(r.inl.len(), 7);
    assert!(r.dnl.iter().chain(&r.inl).all(|x| x.abs() < 1e-12));
}

#[test]
fn half_lsb_shift_of_one_threshold() {
    let mut t = uniform();
    t[3] += 10.0 * UA;
    let r = dnl_inl(&TransferCurve::from_thresholds(t, 0.0, 160.0 * UA));
    assert!((r.dnl[2] - 0.5).abs() < 1e-12);
    assert!((r.dnl[3] + 0.5).abs() < 1e-12);
    for k in [0, 1, 4, 5] {
        assert!(r.dnl[k].abs() < 1e-12);
    }
    let max_inl = r.inl.iter().map(|x| x.abs()).fold(0.0, f64::max);
    assert!((max_inl - 0.5).abs() < 1e-12);
    assert!((r.dnl_range.0 + 0.5).abs() < 1e-12 && (r.dnl_range.1 - 0.5).abs() < 1e-12);
}

proptest! {
    #[test]
    fn dnl_telescopes(steps in proptest::collection::vec(5.0..35.0f64, 6), start in 5.0..30.0f64) {
        let mut t = vec![start * UA];
        for s in &steps {
            t.push(t.last().unwrap() + s * UA);
        }
        let r = dnl_inl(&TransferCurve::from_thresholds(t.clone(), 0.0, 160.0 * UA));
        let expected = (t[6] - t[0]) / r.lsb - 6.0;
        prop_assert!((r.dnl.iter().sum::<f64>() - expected).abs() < 1e-9);
        prop_assert!(r.telescoping_residual.abs() < 1e-9);
        prop_assert!(r.inl[0].abs() < 1e-12 && r.inl[6].abs() < 1e-9);
    }
}

#[test]
fn range_check_is_containment_with_margin() {
    let c = RangeCheck::new((-0.2, 0.1), (-0.383, 0.245), 0.15);
    assert!(c.pass);
    assert!((c.endpoint_error.0 - 0.183).abs() < 1e-12);
    assert!(!RangeCheck::new((-0.6, 0.1), (-0.383, 0.245), 0.15).pass);
    assert!(!RangeCheck::new((0.0, 0.4), (-0.383, 0.245), 0.15).pass);
}

#[test]
fn wilson_interval_reference_values() {
    let (lo, hi) = wilson_interval(8, 100, 1.959_963_984_540_054);
    assert!((lo - 0.041_093_461_484_380_61).abs() < 1e-12 && (hi - 0.149_981_077_009_487_35).abs() < 1e-12);
    let (lo, hi) = wilson_interval(0, 100, 1.959_963_984_540_054);
    assert_eq!(lo, 0.0);
    assert!((hi - 0.036_993_498_206_985_69).abs() < 1e-12);
}

fn mc(temperature: f64, overdrive: f64, trials: usize, seed: u64) -> MonteCarloReport {
    let dev = DeviceConfig::default();
    let ic = dev.critical_current(0.0).unwrap();
    monte_carlo_switching(&dev, overdrive * ic, 0.1, &SwitchProtocol::default(), &SimOptions::thermal(temperature), trials, seed)
        .unwrap()
}

#[test]
fn zero_kelvin_has_no_errors() {
    let r = mc(0.0, 1.2, 50, 3);
    assert_eq!(r.errors, 0);
    assert_eq!(r.error_rate, 0.0);
}

#[test]
fn monte_carlo_is_reproducible() {
    let (a, b) = (mc(300.0, 1.2, 40, 12), mc(300.0, 1.2, 40, 12));
    assert_eq!(a, b);
    assert!(a.errors <= a.trials);
    assert_eq!(a.final_p + a.final_ap + a.final_precessional, a.trials);
}

#[test]
fn zero_trials_is_an_error() {
    let dev = DeviceConfig::default();
    let r = monte_carlo_switching(&dev, 24e-6, 0.1, &SwitchProtocol::default(), &SimOptions::thermal(300.0), 0, 1);
    assert!(r.is_err());
}

#[test]
fn error_rate_does_not_grow_with_overdrive() {
    let reports: Vec<_> = [1.1, 1.5, 2.0].iter().map(|&f| mc(300.0, f, 200, 1)).collect();
    let mut inversions = 0;
    for w in reports.windows(2) {
        if w[1].error_rate > w[0].error_rate {
            inversions += 1;
            // Any increase has to sit inside the statistical error bars.
            assert!(w[1].wilson_low <= w[0].wilson_high, "{:?} -> {:?}", w[0], w[1]);
        }
    }
    assert!(inversions <= 1, "{reports:?}");
}

#[test]
fn throughput_of_uniform_spacing() {
    let dev = DeviceConfig::default();
    let conv = QuantizerBank::design(&dev, 20.0 * UA, 140.0 * UA, BankRole::Conversion).unwrap();
    let mut c = conv.clone();
    let recs = run_conventional(&[0.0, 0.0], &mut c, &conv, &PhaseSchedule::conventional(), &quiet()).unwrap();
    let p = 3.7e-9;
    let spaced: Vec<_> = (0..9)
        .map(|k| {
            let mut r = recs[0].clone();
            r.t_start = k as f64 * p;
            r.period = p;
            r
        })
        .collect();
    let s = throughput_and_power(&spaced).unwrap();
    assert!((s.throughput * p - 1.0).abs() < 1e-15);
    assert!((s.average_power - recs[0].energy / p).abs() < 1e-12 * s.average_power);
    assert!(throughput_and_power(&spaced[..1]).is_err());
}

#[test]
fn reports_round_trip_through_json() {
    let curve = TransferCurve::from_thresholds(uniform(), 0.0, 160.0 * UA);
    let dnl = dnl_inl(&curve);
    let mcr = mc(300.0, 1.2, 10, 4);
    let dev = DeviceConfig::default();
    let conv = QuantizerBank::design(&dev, 20.0 * UA, 140.0 * UA, BankRole::Conversion).unwrap();
    let mut c = conv.clone();
    let recs = run_conventional(&[90.0 * UA, 10.0 * UA], &mut c, &conv, &PhaseSchedule::conventional(), &quiet()).unwrap();
    let summary = throughput_and_power(&recs).unwrap();

    fn check<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
        let text = serde_json::to_string(v).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, v);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
    check(&curve);
    check(&dnl);
    check(&mcr);
    check(&recs);
    check(&summary);
}
