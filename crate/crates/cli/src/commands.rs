//! Command implementations. Each writes its files into the run directory and
//! returns the text report.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use spinadc_core::adc::{run_conventional, run_interleaved, BankRole, MAX_WIDTH, MIN_WIDTH};
use spinadc_core::device::{switch_attempt, SwitchProtocol};
use spinadc_core::metrics::{
    dnl_inl, measure_transfer, monte_carlo_switching, throughput_and_power, trial_rng, RangeCheck, SingleShotAdc,
    ThroughputSummary,
};
use spinadc_core::{
    Architecture, ConversionRecord, DnlInlReport, MagState, RunConfig, SimOptions, ThermalModel, TransferCurve, Vector3,
};

use crate::output::{aligned, RunDir};
use crate::{CompareArgs, Failure, MonteCarloArgs, OnOff, ProtocolChoice, RampArgs, SweepArgs, SwitchArgs};

const DNL_REFERENCE: (f64, f64) = (-0.383, 0.245);
const INL_REFERENCE: (f64, f64) = (-0.149, 0.233);
const RANGE_MARGIN: f64 = 0.15;
const REFERENCE_ERROR_RATE: f64 = 0.08;

/// Inclusive linear grid written as `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    stop: f64,
    count: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let count: usize = count.trim().parse().map_err(|e| format!("{count:?}: {e}"))?;
        if count == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(Grid { start: num(start)?, stop: num(stop)?, count })
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        linspace(self.start, self.stop, self.count)
    }
}

fn protocol(choice: ProtocolChoice) -> SwitchProtocol {
    match choice {
        ProtocolChoice::Standard => SwitchProtocol::default(),
        ProtocolChoice::Delayed => SwitchProtocol::delayed(),
    }
}

fn state_name(s: MagState) -> &'static str {
    match s {
        MagState::P => "P",
        MagState::AP => "AP",
        MagState::Precessional => "precessional",
    }
}

fn checked_temperature(t: f64) -> Result<f64, Failure> {
    if t >= 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Failure::Config(format!("temperature must be a non-negative number of kelvin, got {t}")))
    }
}

#[derive(Serialize)]
struct TrialSummary {
    switched: bool,
    switch_time_s: Option<f64>,
    final_state: MagState,
    final_m: Vector3,
    energy_j: f64,
}

#[derive(Serialize)]
struct SwitchSummary {
    i_sot_a: f64,
    v_bias_v: f64,
    protocol: SwitchProtocol,
    thermal: ThermalModel,
    seed: u64,
    trials: u64,
    switched: usize,
    final_p: usize,
    final_ap: usize,
    final_precessional: usize,
    first_trial: TrialSummary,
}

pub fn switch(cfg: &RunConfig, a: &SwitchArgs, run: &mut RunDir) -> Result<String, Failure> {
    let mut thermal = cfg.thermal;
    if let Some(t) = a.thermal {
        thermal.enabled = t == OnOff::On;
    }
    if let Some(t) = a.temperature {
        thermal.temperature = checked_temperature(t)?;
    }
    let protocol = a.protocol.map_or(cfg.switch, protocol);
    let base = SimOptions { thermal, ..cfg.sim_options() };
    let i_sot = a.isot * 1e-6;

    let outcomes = (0..a.trials)
        .into_par_iter()
        .map(|k| {
            let opts = if k == 0 { base.with_trajectory() } else { base };
            switch_attempt(&cfg.device, i_sot, a.vbias, &protocol, &opts, trial_rng(cfg.seed, k))
        })
        .collect::<spinadc_core::Result<Vec<_>>>()?;

    let mut csv = Vec::new();
    outcomes[0].trajectory.as_ref().expect("trial 0 keeps its trajectory").write_csv(&mut csv)?;
    run.write("trajectory.csv", &String::from_utf8(csv).expect("ascii csv"))?;
    run.write_csv(
        "outcomes.csv",
        "trial,switched,switch_time_s,final_state,mz_final,energy_J",
        outcomes.iter().enumerate().map(|(k, o)| {
            format!(
                "{k},{},{},{},{:.9},{:.6e}",
                o.switched,
                o.switch_time.map(|t| format!("{t:.6e}")).unwrap_or_default(),
                state_name(o.final_state),
                o.final_m.z,
                o.energy
            )
        }),
    )?;

    let count = |s: MagState| outcomes.iter().filter(|o| o.final_state == s).count();
    let first = &outcomes[0];
    let summary = SwitchSummary {
        i_sot_a: i_sot,
        v_bias_v: a.vbias,
        protocol,
        thermal,
        seed: cfg.seed,
        trials: a.trials,
        switched: outcomes.iter().filter(|o| o.switched).count(),
        final_p: count(MagState::P),
        final_ap: count(MagState::AP),
        final_precessional: count(MagState::Precessional),
        first_trial: TrialSummary {
            switched: first.switched,
            switch_time_s: first.switch_time,
            final_state: first.final_state,
            final_m: first.final_m,
            energy_j: first.energy,
        },
    };
    run.write_json("summary.json", &summary)?;

    let text = aligned(
        "switch",
        &[
            ("I_sot", format!("{:.3} uA", a.isot)),
            ("V_bias", format!("{:.3} V", a.vbias)),
            ("thermal", if thermal.enabled { format!("on, {} K", thermal.temperature) } else { "off".into() }),
            ("trials", a.trials.to_string()),
            ("switched", format!("{} / {}", summary.switched, a.trials)),
            ("final P/AP/precessional", format!("{} / {} / {}", summary.final_p, summary.final_ap, summary.final_precessional)),
            ("trial 0 final m_z", format!("{:.6}", first.final_m.z)),
            (
                "trial 0 switch time",
                first.switch_time.filter(|_| first.switched).map_or("-".into(), |t| format!("{:.4} ns", t * 1e9)),
            ),
            ("trial 0 energy", format!("{:.4e} J", first.energy)),
        ],
    );
    run.write("summary.txt", &text)?;
    Ok(text)
}

#[derive(Serialize)]
struct BankLevel {
    level: usize,
    width_nm: f64,
    ic_ua: f64,
}

#[derive(Serialize)]
struct SweepSummary {
    rows: usize,
    failed_rows: usize,
    bank: Vec<BankLevel>,
}

pub fn sweep_ic(cfg: &RunConfig, a: &SweepArgs, run: &mut RunDir) -> Result<String, Failure> {
    let (widths, biases) = (a.widths.values(), a.biases.values());
    let mut rows = Vec::with_capacity(widths.len() * biases.len());
    let mut failed = 0;
    for &w in &widths {
        for &v in &biases {
            let width = w * 1e-9;
            let feasible = width >= MIN_WIDTH * (1.0 - 1e-12) && width <= MAX_WIDTH * (1.0 + 1e-12);
            let result = if !feasible {
                Err(format!("infeasible width {w} nm"))
            } else {
                cfg.device.with_width(width).critical_current(v).map_err(|e| e.to_string())
            };
            rows.push(match result {
                Ok(ic) => format!("{w},{v},{:.9},", ic * 1e6),
                Err(e) => {
                    failed += 1;
                    format!("{w},{v},,{}", e.replace(',', ";"))
                }
            });
        }
    }
    let n = rows.len();
    run.write_csv("ic_sweep.csv", "width_nm,vbias_V,ic_uA,error", rows)?;

    let bank = cfg.ideal_bank(BankRole::Conversion)?;
    let levels = bank
        .devices
        .iter()
        .enumerate()
        .map(|(k, d)| Ok(BankLevel { level: k, width_nm: d.w_hm * 1e9, ic_ua: d.critical_current(0.0)? * 1e6 }))
        .collect::<spinadc_core::Result<Vec<_>>>()?;
    let mut table = vec![("grid points", n.to_string()), ("failed points", failed.to_string())];
    let labels: Vec<String> = levels.iter().map(|l| format!("device {}", l.level)).collect();
    for (l, label) in levels.iter().zip(&labels) {
        table.push((label.as_str(), format!("w = {:.3} nm, Ic(0 V) = {:.4} uA", l.width_nm, l.ic_ua)));
    }
    let text = aligned("sweep-ic", &table);
    run.write_json("summary.json", &SweepSummary { rows: n, failed_rows: failed, bank: levels })?;
    run.write("summary.txt", &text)?;
    Ok(text)
}

/// `n ≥ 2` points from `lo` to exactly `hi`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

fn pipeline_run(cfg: &RunConfig, arch: Architecture, samples: &[f64]) -> Result<Vec<ConversionRecord>, Failure> {
    let (mut a, mut b) = (cfg.bank(BankRole::Conversion)?, cfg.bank(BankRole::Dummy)?);
    let schedule = cfg.schedule(arch);
    let pipeline = cfg.pipeline();
    Ok(match arch {
        Architecture::Conventional => run_conventional(samples, &mut a, &b, &schedule, &pipeline)?,
        Architecture::Interleaved => run_interleaved(samples, &mut a, &mut b, &schedule, &pipeline)?,
    })
}

fn conversion_rows(records: &[ConversionRecord]) -> impl Iterator<Item = String> + '_ {
    records.iter().map(ConversionRecord::csv_row)
}

#[derive(Serialize)]
struct RampReport {
    architecture: Architecture,
    thermal: ThermalModel,
    mismatch_sigma: f64,
    mismatch_seed: u64,
    widths_nm: Vec<f64>,
    transfer: TransferCurve,
    linearity: DnlInlReport,
    dnl_check: RangeCheck,
    inl_check: RangeCheck,
    timing: ThroughputSummary,
    anomalies: usize,
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:+.4}")).collect::<Vec<_>>().join(" ")
}

pub fn ramp(cfg: &RunConfig, a: &RampArgs, run: &mut RunDir) -> Result<String, Failure> {
    let mut cfg = cfg.clone();
    if a.ideal {
        cfg.bank.mismatch_sigma = 0.0;
    } else if let Some(m) = a.mismatch {
        cfg.bank.mismatch_sigma = m;
    }
    cfg.validate()?;
    let arch = Architecture::from(a.arch);
    let (lo, hi) = cfg.bank.full_scale();

    let bank = cfg.bank(BankRole::Conversion)?;
    let widths_nm = bank.devices.iter().map(|d| d.w_hm * 1e9).collect();
    let transfer = measure_transfer(&SingleShotAdc::new(bank, cfg.pipeline()), lo, hi, a.steps)?;
    let linearity = dnl_inl(&transfer);

    let records = pipeline_run(&cfg, arch, &linspace(lo, hi, a.samples as usize))?;
    run.write_csv("conversions.csv", ConversionRecord::csv_header(), conversion_rows(&records))?;
    run.write_csv(
        "transfer.csv",
        "code,threshold_A",
        transfer.thresholds.iter().enumerate().map(|(k, t)| format!("{},{t:.12e}", k + 1)),
    )?;
    let timing = throughput_and_power(&records)?;

    let report = RampReport {
        architecture: arch,
        thermal: cfg.thermal,
        mismatch_sigma: cfg.bank.mismatch_sigma,
        mismatch_seed: cfg.bank.mismatch_seed,
        widths_nm,
        dnl_check: RangeCheck::new(linearity.dnl_range, DNL_REFERENCE, RANGE_MARGIN),
        inl_check: RangeCheck::new(linearity.inl_range, INL_REFERENCE, RANGE_MARGIN),
        transfer,
        linearity,
        timing,
        anomalies: records.iter().map(|r| r.errors.len()).sum(),
    };
    run.write_json("report.json", &report)?;

    let l = &report.linearity;
    let verdict = |c: &RangeCheck| if c.pass { "within" } else { "outside" };
    let text = aligned(
        "ramp",
        &[
            ("architecture", format!("{arch:?}").to_lowercase()),
            ("mismatch", format!("{} (seed {})", report.mismatch_sigma, report.mismatch_seed)),
            (
                "mode",
                if cfg.thermal.enabled { format!("thermal, {} K", cfg.thermal.temperature) } else { "noiseless".into() },
            ),
            ("LSB", format!("{:.4} uA", l.lsb * 1e6)),
            ("DNL", fmt_list(&l.dnl)),
            ("INL", fmt_list(&l.inl)),
            (
                "DNL range",
                format!("[{:+.4}, {:+.4}] {} reference +-{RANGE_MARGIN}", l.dnl_range.0, l.dnl_range.1, verdict(&report.dnl_check)),
            ),
            (
                "INL range",
                format!("[{:+.4}, {:+.4}] {} reference +-{RANGE_MARGIN}", l.inl_range.0, l.inl_range.1, verdict(&report.inl_check)),
            ),
            ("throughput", format!("{:.3} MS/s", report.timing.throughput / 1e6)),
            ("average power", format!("{:.2} uW", report.timing.average_power * 1e6)),
            ("anomalies", report.anomalies.to_string()),
        ],
    );
    run.write("summary.txt", &text)?;
    Ok(text)
}

pub fn montecarlo(cfg: &RunConfig, a: &MonteCarloArgs, run: &mut RunDir) -> Result<String, Failure> {
    let temperature = checked_temperature(a.temperature.unwrap_or(cfg.thermal.temperature))?;
    let thermal = ThermalModel { enabled: true, temperature, ..cfg.thermal };
    let opts = SimOptions { thermal, ..cfg.sim_options() };
    let ic = cfg.device.critical_current(0.0)?;
    let report = monte_carlo_switching(
        &cfg.device,
        a.overdrive * ic,
        a.vbias,
        &protocol(a.protocol),
        &opts,
        a.trials as usize,
        cfg.seed,
    )?;
    run.write_json("montecarlo.json", &report)?;
    let text = aligned(
        "montecarlo",
        &[
            ("I_sot", format!("{:.4} uA ({}x Ic)", report.i_sot * 1e6, a.overdrive)),
            ("V_bias", format!("{} V", report.v_bias)),
            ("temperature", format!("{} K", report.temperature)),
            ("seed", report.seed.to_string()),
            ("reference state", state_name(report.reference_state).into()),
            ("errors", format!("{} / {}", report.errors, report.trials)),
            ("error rate", format!("{:.4}", report.error_rate)),
            ("Wilson 95%", format!("[{:.4}, {:.4}]", report.wilson_low, report.wilson_high)),
            (
                "contains 8%",
                if report.interval_contains(REFERENCE_ERROR_RATE) { "yes".into() } else { "no".into() },
            ),
            ("final P/AP/precessional", format!("{} / {} / {}", report.final_p, report.final_ap, report.final_precessional)),
        ],
    );
    run.write("summary.txt", &text)?;
    Ok(text)
}

#[derive(Serialize)]
struct Comparison {
    samples: usize,
    conventional: ThroughputSummary,
    interleaved: ThroughputSummary,
    throughput_ratio: f64,
    period_ratio: f64,
    code_agreement_pct: f64,
}

pub fn compare_arch(cfg: &RunConfig, a: &CompareArgs, run: &mut RunDir) -> Result<String, Failure> {
    let n = a.n_samples as usize;
    let (lo, hi) = cfg.bank.full_scale();
    let (mid, amp) = (0.5 * (lo + hi), 0.475 * (hi - lo));
    let samples: Vec<f64> = (0..n)
        .map(|k| mid + amp * (2.0 * std::f64::consts::PI * a.cycles * k as f64 / n as f64).sin())
        .collect();

    let conv = pipeline_run(cfg, Architecture::Conventional, &samples)?;
    let inter = pipeline_run(cfg, Architecture::Interleaved, &samples)?;
    run.write_csv("conversions_conventional.csv", ConversionRecord::csv_header(), conversion_rows(&conv))?;
    run.write_csv("conversions_interleaved.csv", ConversionRecord::csv_header(), conversion_rows(&inter))?;

    let agree = conv.iter().zip(&inter).filter(|(x, y)| x.binary == y.binary).count();
    let (conventional, interleaved) = (throughput_and_power(&conv)?, throughput_and_power(&inter)?);
    let cmp = Comparison {
        samples: n,
        throughput_ratio: interleaved.throughput / conventional.throughput,
        period_ratio: cfg.schedule(Architecture::Conventional).period() / cfg.schedule(Architecture::Interleaved).period(),
        code_agreement_pct: 100.0 * agree as f64 / n as f64,
        conventional,
        interleaved,
    };
    run.write_json("comparison.json", &cmp)?;

    let row = |s: &ThroughputSummary| {
        format!(
            "{:>9.3} MS/s  {:>9.2} uW  {:>9.3} pJ/sample",
            s.throughput / 1e6,
            s.average_power * 1e6,
            s.energy_per_sample * 1e12
        )
    };
    let text = aligned(
        "compare-arch",
        &[
            ("samples", n.to_string()),
            ("conventional", row(&cmp.conventional)),
            ("interleaved", row(&cmp.interleaved)),
            ("throughput ratio", format!("{:.4} (schedule {:.4})", cmp.throughput_ratio, cmp.period_ratio)),
            ("code agreement", format!("{:.1} %", cmp.code_agreement_pct)),
        ],
    );
    run.write("summary.txt", &text)?;
    Ok(text)
}
