use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinadc_core::constants::MU0;
use spinadc_core::device::{switch_attempt, DeviceConfig, SwitchProtocol};
use spinadc_core::llg::*;
use spinadc_core::{SimError, SimOptions, Vector3};

const GAMMA0: f64 = 2.2127e5;

/// Device whose anisotropy exactly cancels demag, leaving the in-plane field as
/// the only (constant) field.
fn constant_field_device(h: f64, alpha: f64) -> DeviceConfig {
    let base = DeviceConfig::default();
    DeviceConfig {
        k_heat: 0.0,
        xi_vcma: 0.0,
        eta_bloch: 2.0,
        ki0: MU0 * base.ms0 * base.ms0 * base.t_fl / 2.0,
        h_inplane: h,
        alpha,
        ..base
    }
}

fn run(dev: &DeviceConfig, m0: Vector3, waveform: &DriveWaveform, cfg: IntegratorConfig, t_end: f64) -> Trajectory {
    let mut state = MagnetizationState::new(m0, 1, 0);
    integrate(&mut state, dev, waveform, &cfg, &ThermalModel::OFF, t_end).unwrap()
}

#[test]
fn field_is_axial_for_perpendicular_m() {
    let dev = DeviceConfig { h_inplane: 0.0, ..DeviceConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let h = assemble_effective_field(Vector3::Z, &dev, DriveSample::IDLE, &ThermalModel::OFF, 1e-12, &mut rng)
        .unwrap()
        .total();
    assert_eq!(h.x, 0.0);
    assert_eq!(h.y, 0.0);
    assert!(h.z != 0.0);
}

#[test]
fn pma_field_matches_hand_calculation() {
    // Ms(0) = 6.25e5·(1 − 0.4^1.5), Ki(0) = 3.2e-4·(1 − 0.4^1.5)^2.2,
    // h = 2·Ki/(μ0·Ms·t_FL) = 522044.287 A/m.
    let dev = DeviceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = assemble_effective_field(Vector3::Z, &dev, DriveSample::IDLE, &ThermalModel::OFF, 1e-12, &mut rng).unwrap();
    assert!((f.h_pma.z - 522_044.287_189).abs() < 1e-3, "{}", f.h_pma.z);
    assert!((f.h_demag.z + 466_886.116_992).abs() < 1e-3);
    assert_eq!(f.h_vcma, Vector3::ZERO);
    assert_eq!(f.h_thermal, Vector3::ZERO);
}

#[test]
fn vcma_field_reduces_anisotropy_under_positive_bias() {
    let dev = DeviceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let drive = DriveSample { v_bias: 0.3, ..DriveSample::IDLE };
    let f = assemble_effective_field(Vector3::Z, &dev, drive, &ThermalModel::OFF, 1e-12, &mut rng).unwrap();
    let ms = dev.ms_of_bias(0.3).unwrap();
    let expected = -2.0 * 60e-15 * 0.3 / (1.4e-9 * MU0 * ms * 1.1e-9);
    assert!((f.h_vcma.z / expected - 1.0).abs() < 1e-12);
}

#[test]
fn inplane_field_is_forty_oersted_along_minus_x() {
    let dev = DeviceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = assemble_effective_field(Vector3::Z, &dev, DriveSample::IDLE, &ThermalModel::OFF, 1e-12, &mut rng).unwrap();
    assert!((f.h_inplane.x + 3183.0988).abs() < 1e-3);
    assert_eq!((f.h_inplane.y, f.h_inplane.z), (0.0, 0.0));
}

#[test]
fn invalid_device_is_rejected() {
    let dev = DeviceConfig { t_ox: -1e-9, ..DeviceConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let err = assemble_effective_field(Vector3::Z, &dev, DriveSample::IDLE, &ThermalModel::OFF, 1e-12, &mut rng);
    assert!(matches!(err, Err(SimError::InvalidConfig(_))));
}

#[test]
fn thermal_field_is_zero_at_zero_temperature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = sample_thermal_field(&DeviceConfig::default(), 0.0, 0.0, 1e-12, &mut rng).unwrap();
    assert_eq!(h, Vector3::ZERO);
}

#[test]
fn thermal_field_statistics_match_fluctuation_dissipation() {
    // σ² = 2·α·kB·T/(γ0·μ0·Ms·V·dt) with Ms(0) = 466886.117 A/m, V = π(25 nm)²·1.1 nm.
    let volume = std::f64::consts::PI * 25e-9 * 25e-9 * 1.1e-9;
    let sigma = (2.0 * 0.05 * 1.38e-23 * 300.0 / (GAMMA0 * 1.2566e-6 * 466_886.116_992 * volume * 1e-12)).sqrt();
    assert!((sigma - 38_425.86).abs() < 0.1);

    let dev = DeviceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 100_000;
    let mut sum = [0.0f64; 3];
    let mut sq = [0.0f64; 3];
    for _ in 0..n {
        let h = sample_thermal_field(&dev, 300.0, 0.0, 1e-12, &mut rng).unwrap();
        for (k, c) in [h.x, h.y, h.z].into_iter().enumerate() {
            sum[k] += c;
            sq[k] += c * c;
        }
    }
    for k in 0..3 {
        let mean = sum[k] / n as f64;
        let var = sq[k] / n as f64 - mean * mean;
        assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt(), "component {k} mean {mean}");
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.02, "component {k} variance ratio {}", var / (sigma * sigma));
    }
}

#[test]
fn torques_vanish_without_current() {
    let t = compute_torques(Vector3::new(0.6, 0.0, 0.8), &DeviceConfig::default(), DriveSample::IDLE).unwrap();
    assert_eq!(t.tau_sot, Vector3::ZERO);
    assert_eq!(t.tau_stt, Vector3::ZERO);
}

#[test]
fn sot_vanishes_when_m_is_collinear_with_polarization() {
    let drive = DriveSample { i_sot: 50e-6, ..DriveSample::IDLE };
    let t = compute_torques(SOT_POLARIZATION, &DeviceConfig::default(), drive).unwrap();
    assert!(t.tau_sot.norm() < 1e-20);
}

#[test]
fn sot_on_reversed_state_points_toward_the_plane() {
    let drive = DriveSample { i_sot: 30e-6, ..DriveSample::IDLE };
    let t = compute_torques(Vector3::new(0.0, 0.0, -1.0), &DeviceConfig::default(), drive).unwrap();
    assert_eq!(t.tau_sot.x, 0.0);
    assert!(t.tau_sot.y < 0.0, "torque rotates m toward the spin polarization");
    assert!(t.tau_sot.z.abs() < 1e-9 * t.tau_sot.norm());
}

#[test]
fn rhs_is_zero_at_field_equilibrium() {
    let d = llg_rhs(Vector3::Z, Vector3::Z * 1e5, &TorqueTerms::default(), 0.05);
    assert_eq!(d, Vector3::ZERO);
}

#[test]
fn undamped_precession_rate() {
    let h = 1e5;
    let theta = 10f64.to_radians();
    let m = Vector3::from_spherical(theta, 0.4);
    let d = llg_rhs(m, Vector3::Z * h, &TorqueTerms::default(), 0.0);
    let expected = GAMMA0 * h * theta.sin();
    assert!((d.norm() / expected - 1.0).abs() < 1e-12);
}

#[test]
fn rhs_is_orthogonal_to_m() {
    let dev = DeviceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..200 {
        let m = Vector3::from_spherical(0.013 * k as f64 * 1.7, 0.29 * k as f64);
        let drive = DriveSample { i_sot: 1e-6 * k as f64, v_bias: 0.002 * k as f64 - 0.2, i_stt: -2e-7 * k as f64 };
        let thermal = ThermalModel::at(300.0);
        let h = assemble_effective_field(m, &dev, drive, &thermal, 1e-12, &mut rng).unwrap();
        let tau = compute_torques(m, &dev, drive).unwrap();
        let d = llg_rhs(m, h.total(), &tau, dev.alpha);
        assert!(m.dot(d).abs() <= 1e-12 * d.norm(), "step {k}: {}", m.dot(d));
    }
}

#[test]
fn precession_frequency_over_one_hundred_periods() {
    let h = 1e5;
    let dev = constant_field_device(h, 0.0);
    let f_expected = GAMMA0 * h / (2.0 * std::f64::consts::PI);
    let t_end = 100.5 / f_expected;
    let m0 = Vector3::new(0.5, 0.0, (0.75f64).sqrt());
    let traj = run(&dev, m0, &DriveWaveform::new(), IntegratorConfig::default(), t_end);

    // Upward zero crossings of m_y.
    let mut crossings = Vec::new();
    for w in traj.points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.m.y < 0.0 && b.m.y >= 0.0 {
            crossings.push(a.t + (b.t - a.t) * a.m.y / (a.m.y - b.m.y));
        }
    }
    assert!(crossings.len() >= 100);
    let periods = (crossings.len() - 1) as f64;
    let f = periods / (crossings[crossings.len() - 1] - crossings[0]);
    assert!((f / f_expected - 1.0).abs() < 1e-3, "f = {f}, expected {f_expected}");
}

#[test]
fn damped_relaxation_follows_closed_form() {
    // tan(θ/2) = tan(θ0/2)·exp(−α·γ0·H·t/(1+α²)) for the angle θ to the field axis.
    let (h, alpha) = (1e5, 0.05);
    let dev = constant_field_device(h, alpha);
    let theta0 = 80f64.to_radians();
    let m0 = Vector3::new(theta0.cos(), theta0.sin(), 0.0);
    let traj = run(&dev, m0, &DriveWaveform::new(), IntegratorConfig::default(), 2e-9);
    let rate = alpha * GAMMA0 * h / (1.0 + alpha * alpha);
    for p in traj.points.iter().step_by(100) {
        let theta = p.m.x.clamp(-1.0, 1.0).acos();
        let expected = 2.0 * ((theta0 / 2.0).tan() * (-rate * p.t).exp()).atan();
        let got = (theta / 2.0).tan();
        let want = (expected / 2.0).tan();
        assert!((got / want - 1.0).abs() < 5e-3, "t = {:e}: {got} vs {want}", p.t);
    }
}

#[test]
fn zero_drive_perpendicular_state_is_static() {
    let dev = DeviceConfig { h_inplane: 0.0, ..DeviceConfig::default() };
    let traj = run(&dev, Vector3::new(0.0, 0.0, -1.0), &DriveWaveform::new(), IntegratorConfig::default(), 1e-9);
    assert!(traj.points.iter().all(|p| p.m == Vector3::new(0.0, 0.0, -1.0)));
}

#[test]
fn relaxed_state_is_static_with_inplane_field() {
    let dev = DeviceConfig::default();
    let m0 = dev.equilibrium(spinadc_core::MagState::P, 0.0).unwrap();
    let traj = run(&dev, m0, &DriveWaveform::new(), IntegratorConfig::default(), 1e-9);
    let worst = traj.points.iter().map(|p| (p.m - m0).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
}

fn fig2_waveform(dev: &DeviceConfig) -> DriveWaveform {
    SwitchProtocol::delayed().waveform(1.5 * dev.critical_current(0.0).unwrap(), 0.1)
}

#[test]
fn deterministic_norm_drift_is_tiny_per_step() {
    let dev = DeviceConfig::default();
    let traj = run(&dev, Vector3::new(0.0, 0.0, -1.0), &fig2_waveform(&dev), IntegratorConfig::default(), 6.7e-9);
    assert!(traj.stats.max_norm_drift < 1e-6, "{}", traj.stats.max_norm_drift);
    assert!(traj.points.iter().all(|p| (p.m.norm() - 1.0).abs() < 1e-9));
}

#[test]
fn stochastic_norm_drift_is_tiny_per_step() {
    let dev = DeviceConfig::default();
    let mut state = MagnetizationState::new(Vector3::new(0.0, 0.0, -1.0), 9, 0);
    let traj = integrate(
        &mut state,
        &dev,
        &fig2_waveform(&dev),
        &IntegratorConfig::default(),
        &ThermalModel::at(300.0),
        6.7e-9,
    )
    .unwrap();
    assert!(traj.stats.max_norm_drift < 1e-6, "{}", traj.stats.max_norm_drift);
    assert!(traj.points.iter().all(|p| (p.m.norm() - 1.0).abs() < 1e-9));
}

#[test]
fn noisy_runs_are_bit_reproducible() {
    let dev = DeviceConfig::default();
    let go = || {
        let mut state = MagnetizationState::new(Vector3::new(0.0, 0.0, -1.0), 42, 3);
        integrate(&mut state, &dev, &fig2_waveform(&dev), &IntegratorConfig::default(), &ThermalModel::at(300.0), 3e-9)
            .unwrap()
    };
    let (a, b) = (go(), go());
    assert_eq!(a, b);
    let mut other = MagnetizationState::new(Vector3::new(0.0, 0.0, -1.0), 42, 4);
    let c = integrate(&mut other, &dev, &fig2_waveform(&dev), &IntegratorConfig::default(), &ThermalModel::at(300.0), 3e-9)
        .unwrap();
    assert_ne!(a, c);
}

#[test]
fn zero_temperature_heun_equals_drift_only_heun() {
    let dev = DeviceConfig::default();
    let heun = IntegratorConfig { scheme: Scheme::Heun, ..IntegratorConfig::default() };
    let mut a = MagnetizationState::new(Vector3::new(0.0, 0.0, -1.0), 1, 0);
    let mut b = a.clone();
    let zero_t = ThermalModel::at(0.0);
    let ta = integrate(&mut a, &dev, &fig2_waveform(&dev), &heun, &zero_t, 3e-9).unwrap();
    let tb = integrate(&mut b, &dev, &fig2_waveform(&dev), &heun, &ThermalModel::OFF, 3e-9).unwrap();
    assert_eq!(ta.points, tb.points);
}

#[test]
fn heun_and_rk4_agree_at_small_step() {
    let dev = DeviceConfig::default();
    let wave = DriveWaveform::new().then("sot", 1e-9, DriveSample { i_sot: 30e-6, v_bias: 0.1, i_stt: 0.0 });
    let m0 = Vector3::new(0.0, 0.0, -1.0);
    let rk4 = IntegratorConfig { dt: 1e-13, ..IntegratorConfig::default() };
    let heun = IntegratorConfig { scheme: Scheme::Heun, ..rk4 };
    let a = run(&dev, m0, &wave, rk4, 0.2e-9);
    let b = run(&dev, m0, &wave, heun, 0.2e-9);
    let worst = a.points.iter().zip(&b.points).map(|(p, q)| (p.m - q.m).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn halving_dt_moves_switching_time_by_under_one_percent() {
    let dev = DeviceConfig::default();
    let time = |dt: f64| {
        let opts = SimOptions { integrator: IntegratorConfig { dt, ..IntegratorConfig::default() }, ..SimOptions::default() };
        switch_attempt(&dev, 30e-6, 0.1, &SwitchProtocol::delayed(), &opts, ChaCha8Rng::seed_from_u64(0))
            .unwrap()
            .switch_time
            .unwrap()
    };
    let (coarse, fine) = (time(1e-12), time(0.5e-12));
    assert!((coarse / fine - 1.0).abs() < 0.01, "{coarse:e} vs {fine:e}");
}

#[test]
fn oversized_step_is_rejected() {
    let dev = DeviceConfig::default();
    let cfg = IntegratorConfig { dt: 5e-12, ..IntegratorConfig::default() };
    let mut state = MagnetizationState::new(Vector3::Z, 0, 0);
    let err = integrate(&mut state, &dev, &DriveWaveform::new(), &cfg, &ThermalModel::OFF, 1e-9).unwrap_err();
    assert!(matches!(err, SimError::InvalidConfig(_)));
}

#[test]
fn runaway_drive_trips_the_instability_check() {
    let dev = DeviceConfig::default();
    let cfg = IntegratorConfig { dt: 2e-12, ..IntegratorConfig::default() };
    let wave = DriveWaveform::new().then("sot", 1e-9, DriveSample { i_sot: 1.0, ..DriveSample::IDLE });
    let mut state = MagnetizationState::new(Vector3::new(0.0, 0.0, -1.0), 0, 0);
    let err = integrate(&mut state, &dev, &wave, &cfg, &ThermalModel::OFF, 1e-9).unwrap_err();
    assert!(matches!(err, SimError::Instability { .. }));
}

#[test]
fn trajectory_csv_has_header_and_rows() {
    let dev = DeviceConfig::default();
    let traj = run(&dev, Vector3::new(0.0, 0.0, -1.0), &DriveWaveform::new(), IntegratorConfig::default(), 5e-12);
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_s,mx,my,mz"));
    assert_eq!(lines.count(), 6);
}
