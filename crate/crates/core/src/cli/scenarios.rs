use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dynamics::{
    precession_closed_form, vertical_transition_gap, PrecessionPropagator, TrajectoryState,
    PROPAGATION_MAX_SPINS,
};
use crate::franck_condon::{
    favored_level_exact, favored_level_hp, fc_table, ground_column_closed_form, hp_fc_factor,
    HpFcParams,
};
use crate::model::{effective_environment, ModelParams};
use crate::spectroscopy::{blockade_metric, linspace, BlockadeMetric, Spectrometer, SpectrumGrid};
use crate::validation::run_suite;

use super::config::{Resolved, Scenario};
use super::output::{write_json, CsvWriter, Field};
use super::CliError;

/// What a scenario produced.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
    pub validation_failed: bool,
}

pub fn run(r: &Resolved) -> Result<Report, CliError> {
    std::fs::create_dir_all(&r.output)
        .map_err(|e| CliError::Io(format!("{}: {e}", r.output.display())))?;
    match r.scenario {
        Scenario::FcFactors => fc_factors(r),
        Scenario::FcSweep => fc_sweep(r),
        Scenario::Favored => favored(r),
        Scenario::Spectrum => spectra(r, false),
        Scenario::ThermalSpectrum => spectra(r, true),
        Scenario::HpCompare => hp_compare(r),
        Scenario::Dynamics => dynamics(r),
        Scenario::Validate => validate(r),
    }
}

fn fc_factors(r: &Resolved) -> Result<Report, CliError> {
    let table = fc_table(&r.params)?;
    let mut w = CsvWriter::create(&r.output.join("fc_table.csv"), &["n", "m", "f"])?;
    for m in 0..table.dim() {
        for n in 0..table.dim() {
            w.row(&[Field::Int(n), Field::Int(m), Field::Num(table.factor(m, n))])?;
        }
    }
    Ok(Report {
        files: vec![w.finish()?],
        lines: vec![format!(
            "N = {}, A = {}, theta = {:.6}, max |sum_n f^2 - 1| = {:.2e}",
            r.params.n_spins,
            r.params.hyperfine,
            table.theta,
            table.unitarity_defect()
        )],
        ..Default::default()
    })
}

fn fc_sweep(r: &Resolved) -> Result<Report, CliError> {
    let lo = r.sweep.hyperfine_min.unwrap_or(0.0);
    let hi = r.sweep.hyperfine_max.unwrap_or(5.0);
    let points = r.sweep.hyperfine_points.unwrap_or(501);
    let max_level = r.sweep.max_level.unwrap_or(10).min(r.params.n_spins);
    let mut w = CsvWriter::create(
        &r.output.join("fc_sweep.csv"),
        &["hyperfine_over_omega_nu", "n", "abs_f"],
    )?;
    for a in linspace(lo, hi, points) {
        let p = r.params.with_hyperfine(a);
        p.validate()?;
        let col = ground_column_closed_form(p.n_spins, p.rotation_angle());
        for (n, f) in col.iter().enumerate().take(max_level + 1) {
            w.row(&[Field::Num(a), Field::Int(n), Field::Num(f.abs())])?;
        }
    }
    Ok(Report {
        files: vec![w.finish()?],
        ..Default::default()
    })
}

fn favored(r: &Resolved) -> Result<Report, CliError> {
    let couplings = r
        .sweep
        .hyperfine
        .clone()
        .unwrap_or_else(|| vec![0.1, 0.2, 0.5, 1.0, 2.0, 5.0]);
    let sizes = r
        .sweep
        .n_spins
        .clone()
        .unwrap_or_else(|| vec![r.params.n_spins]);
    let mut w = CsvWriter::create(
        &r.output.join("favored.csv"),
        &[
            "n_spins",
            "hyperfine_over_omega_nu",
            "n_mf_exact",
            "tie_exact",
            "n_mf_hp",
            "tie_hp",
            "argmax_abs_f",
        ],
    )?;
    let mut lines = vec!["     N        A  exact     hp  argmax".to_string()];
    for &n in &sizes {
        for &a in &couplings {
            let p = r.params.with_spins(n).with_hyperfine(a);
            let exact = favored_level_exact(&p);
            let hp = favored_level_hp(&HpFcParams::from_params(&p)?);
            let argmax = fc_table(&p)?.argmax_from(0);
            let tie = |t: Option<usize>| t.map_or(Field::Empty, Field::Int);
            w.row(&[
                Field::Int(n),
                Field::Num(a),
                Field::Int(exact.level),
                tie(exact.tie),
                Field::Int(hp.level),
                tie(hp.tie),
                Field::Int(argmax),
            ])?;
            lines.push(format!(
                "{n:>6} {a:>8} {:>6} {:>6} {argmax:>7}",
                exact.level, hp.level
            ));
        }
    }
    Ok(Report {
        files: vec![w.finish()?],
        lines,
        ..Default::default()
    })
}

#[derive(Serialize)]
struct ChannelPeak {
    m: usize,
    n: usize,
    resonance: f64,
    /// Weighted line height at resonance.
    height: f64,
    fc_squared: f64,
}

#[derive(Serialize)]
struct SpectrumSummary {
    hyperfine: f64,
    file: String,
    peak_detuning: f64,
    peak_intensity: f64,
    integrated_intensity: f64,
    local_maxima: Vec<[f64; 2]>,
    strongest_channels: Vec<ChannelPeak>,
    uncovered_channels: usize,
}

#[derive(Serialize)]
struct BlockadeEntry {
    hyperfine: f64,
    reference_hyperfine: f64,
    #[serde(flatten)]
    metric: BlockadeMetric,
}

#[derive(Serialize)]
struct SpectraSummary {
    scenario: &'static str,
    n_spins: usize,
    window_time: f64,
    temperature: Option<f64>,
    grid_min: f64,
    grid_max: f64,
    grid_points: usize,
    spectra: Vec<SpectrumSummary>,
    blockade: Vec<BlockadeEntry>,
}

fn spectra(r: &Resolved, thermal: bool) -> Result<Report, CliError> {
    let couplings = r
        .sweep
        .hyperfine
        .clone()
        .unwrap_or_else(|| vec![r.params.hyperfine]);
    let widest = couplings.iter().copied().fold(0.0, f64::max);
    let grid = match (r.grid.detuning_min, r.grid.detuning_max) {
        (Some(lo), Some(hi)) => linspace(lo, hi, r.grid.detuning_points.unwrap_or(4001)),
        _ => {
            let g = Spectrometer::new(r.params.with_hyperfine(widest))?.default_grid();
            match r.grid.detuning_points {
                Some(p) => linspace(g[0], g[g.len() - 1], p),
                None => g,
            }
        }
    };
    let stem = if thermal {
        "thermal_spectrum"
    } else {
        "spectrum"
    };

    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut summaries = Vec::new();
    let mut computed: Vec<(f64, SpectrumGrid)> = Vec::new();
    for &a in &couplings {
        let s = Spectrometer::new(r.params.with_hyperfine(a))?;
        let spec = if thermal {
            s.spectrum_thermal(&grid)?
        } else {
            s.spectrum_zero_t(&grid)?
        };
        let name = format!("{stem}_a{a}.csv");
        files.push(write_spectrum(&r.output.join(&name), &spec, !thermal)?);
        let (at, height) = spec.peak();
        lines.push(format!(
            "A = {a}: peak I = {height:.6} at delta = {at:.4}, integral = {:.6}",
            spec.integrated_intensity()
        ));
        summaries.push(summarize(a, name, &spec));
        computed.push((a, spec));
    }
    let mut blockade = Vec::new();
    if let Some((a_ref, reference)) = computed.first() {
        for (a, spec) in computed.iter().skip(1) {
            blockade.push(BlockadeEntry {
                hyperfine: *a,
                reference_hyperfine: *a_ref,
                metric: blockade_metric(spec, reference)?,
            });
        }
    }
    let summary = SpectraSummary {
        scenario: if thermal {
            "thermal-spectrum"
        } else {
            "spectrum"
        },
        n_spins: r.params.n_spins,
        window_time: r.params.window_time,
        temperature: thermal.then_some(r.params.temperature),
        grid_min: grid[0],
        grid_max: grid[grid.len() - 1],
        grid_points: grid.len(),
        spectra: summaries,
        blockade,
    };
    files.push(write_json(
        &r.output.join(format!("{stem}_summary.json")),
        &summary,
    )?);
    Ok(Report {
        files,
        lines,
        ..Default::default()
    })
}

/// Rows per grid point: one total row with empty channel fields, then one
/// row per channel when `channel_rows` is set.
fn write_spectrum(
    path: &Path,
    spec: &SpectrumGrid,
    channel_rows: bool,
) -> Result<PathBuf, CliError> {
    let mut w = CsvWriter::create(
        path,
        &[
            "delta_over_omega_nu",
            "intensity",
            "channel_m",
            "channel_n",
            "channel_rate",
        ],
    )?;
    let rates: Vec<Vec<f64>> = if channel_rows {
        (0..spec.channels.len())
            .map(|i| spec.channel_rate(i))
            .collect()
    } else {
        Vec::new()
    };
    for (i, (&d, &intensity)) in spec.detunings.iter().zip(&spec.intensity).enumerate() {
        w.row(&[
            Field::Num(d),
            Field::Num(intensity),
            Field::Empty,
            Field::Empty,
            Field::Num(intensity),
        ])?;
        for (c, k) in spec.channels.iter().zip(&rates) {
            w.row(&[
                Field::Num(d),
                Field::Num(intensity),
                Field::Int(c.m),
                Field::Int(c.n),
                Field::Num(k[i]),
            ])?;
        }
    }
    w.finish()
}

fn summarize(a: f64, file: String, spec: &SpectrumGrid) -> SpectrumSummary {
    let t = spec.window_time;
    let mut channels: Vec<ChannelPeak> = spec
        .channels
        .iter()
        .map(|c| ChannelPeak {
            m: c.m,
            n: c.n,
            resonance: c.resonance,
            height: c.weight * t * c.fc_squared,
            fc_squared: c.fc_squared,
        })
        .collect();
    channels.sort_by(|x, y| {
        y.height
            .total_cmp(&x.height)
            .then(x.m.cmp(&y.m))
            .then(x.n.cmp(&y.n))
    });
    channels.truncate(20);
    let (peak_detuning, peak_intensity) = spec.peak();
    SpectrumSummary {
        hyperfine: a,
        file,
        peak_detuning,
        peak_intensity,
        integrated_intensity: spec.integrated_intensity(),
        local_maxima: spec
            .local_maxima(0.05)
            .into_iter()
            .map(|(d, i)| [d, i])
            .collect(),
        strongest_channels: channels,
        uncovered_channels: spec.uncovered_channels,
    }
}

fn hp_compare(r: &Resolved) -> Result<Report, CliError> {
    let table = fc_table(&r.params)?;
    let hp = HpFcParams::from_params(&r.params)?;
    let max_level = r.sweep.max_level.unwrap_or(10).min(r.params.n_spins);
    let mut w = CsvWriter::create(
        &r.output.join("hp_compare.csv"),
        &["m", "n", "abs_f_exact", "abs_f_hp", "abs_diff"],
    )?;
    let mut worst: f64 = 0.0;
    for m in 0..=max_level {
        for n in 0..=max_level {
            let exact = table.factor(m, n).abs();
            let boson = hp_fc_factor(&hp, m, n).abs();
            worst = worst.max((exact - boson).abs());
            w.row(&[
                Field::Int(m),
                Field::Int(n),
                Field::Num(exact),
                Field::Num(boson),
                Field::Num((exact - boson).abs()),
            ])?;
        }
    }
    Ok(Report {
        files: vec![w.finish()?],
        lines: vec![format!(
            "lambda = {:.6}, max | |f_exact| - |f_hp| | over m, n <= {max_level}: {worst:.3e}",
            hp.lambda
        )],
        ..Default::default()
    })
}

#[derive(Serialize)]
struct DynamicsSummary {
    n_spins: usize,
    hyperfine: f64,
    theta: f64,
    omega_tilde: f64,
    expected_period: f64,
    measured_period: Option<f64>,
    radius: f64,
    max_deviation_closed_vs_numerical: Option<f64>,
    jx_drift: Option<f64>,
    favored_level: usize,
    vertical_transition_gap: f64,
}

fn write_trajectory(path: &Path, tr: &TrajectoryState) -> Result<PathBuf, CliError> {
    let mut w = CsvWriter::create(path, &["t", "jx_rot", "jy_rot", "jz_rot"])?;
    for i in 0..tr.len() {
        w.row(&[
            Field::Num(tr.times[i]),
            Field::Num(tr.jx_rot[i]),
            Field::Num(tr.jy_rot[i]),
            Field::Num(tr.jz_rot[i]),
        ])?;
    }
    w.finish()
}

fn dynamics(r: &Resolved) -> Result<Report, CliError> {
    let p: ModelParams = r.params;
    let env = effective_environment(&p, 1)?;
    let expected_period = 2.0 * PI / env.omega_tilde;
    let t_max = r.grid.time_max.unwrap_or(2.0 * expected_period);
    let times = linspace(0.0, t_max, r.grid.time_points.unwrap_or(401));
    let closed = precession_closed_form(&p, &times)?;
    let mut files = vec![write_trajectory(
        &r.output.join("trajectory_closed_form.csv"),
        &closed,
    )?];

    let mut summary = DynamicsSummary {
        n_spins: p.n_spins,
        hyperfine: p.hyperfine,
        theta: p.rotation_angle(),
        omega_tilde: env.omega_tilde,
        expected_period,
        measured_period: None,
        radius: p.n_spins as f64 / 2.0 * p.rotation_angle().sin(),
        max_deviation_closed_vs_numerical: None,
        jx_drift: None,
        favored_level: favored_level_exact(&p).level,
        vertical_transition_gap: vertical_transition_gap(&p),
    };
    let mut lines = Vec::new();
    if p.n_spins <= PROPAGATION_MAX_SPINS {
        let prop = PrecessionPropagator::new(&p)?;
        let numerical = prop.trajectory(&times);
        files.push(write_trajectory(
            &r.output.join("trajectory.csv"),
            &numerical,
        )?);
        summary.max_deviation_closed_vs_numerical = Some(numerical.max_deviation(&closed));
        summary.jx_drift = Some(numerical.jx_drift());
        summary.measured_period =
            prop.measured_period(t_max.max(2.0 * expected_period), expected_period / 64.0);
        lines.push(format!(
            "max |closed form - exact| = {:.3e}, period {:.10} (expected {:.10})",
            numerical.max_deviation(&closed),
            summary.measured_period.unwrap_or(f64::NAN),
            expected_period
        ));
    } else {
        lines.push(format!(
            "N = {} above propagation cap {PROPAGATION_MAX_SPINS}; closed form only",
            p.n_spins
        ));
    }
    files.push(write_json(
        &r.output.join("dynamics_summary.json"),
        &summary,
    )?);
    Ok(Report {
        files,
        lines,
        ..Default::default()
    })
}

fn validate(r: &Resolved) -> Result<Report, CliError> {
    let checks = run_suite(&r.params)?;
    let mut lines = Vec::new();
    let mut failed = false;
    for c in &checks {
        failed |= !c.passed;
        lines.push(format!(
            "[{}] {} ({})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let file = write_json(&r.output.join("validation.json"), &checks)?;
    Ok(Report {
        files: vec![file],
        lines,
        validation_failed: failed,
    })
}
