use std::fs;
use std::path::{Path, PathBuf};

use pilesway_core::{
    atomic_write_text, builtin_catalog, generate_event_opts, optimal_lambda, peak_error,
    peak_error_signed, read_displacement_column, read_event, rms_error, run_pipeline_with,
    sma_window, write_displacements, write_event, Error, EstimationResult, PipelineOptions,
    Result, Scalar, ScoreRow, SensorEventRecord, TimeSeries, TrainEventSpec,
};

use crate::config::RunConfig;
use crate::{Cli, Command};

pub fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let opts = if cli.strict_paper {
        PipelineOptions::strict_paper()
    } else {
        PipelineOptions::default()
    };

    match &cli.command {
        Command::Simulate { spec } => simulate(spec, &cfg, &out_dir, cli.seed),
        Command::Estimate { event } => estimate(event, &cfg, &out_dir, &opts, cli.strict_paper),
        Command::Compare {
            estimated,
            measured,
            est_column,
            meas_column,
        } => compare(
            estimated,
            measured,
            est_column.as_deref(),
            meas_column.as_deref(),
            cli.strict_paper,
        ),
        Command::Bench => bench(&cfg, &out_dir, &opts, cli.seed, cli.strict_paper),
        Command::Lambda { n } => {
            println!("{:.8e}", optimal_lambda(*n)?);
            Ok(())
        }
    }
}

fn resolve_spec(arg: &str) -> Result<TrainEventSpec> {
    let catalog = builtin_catalog();
    if let Some(spec) = catalog.iter().find(|s| s.event_id == arg) {
        return Ok(spec.clone());
    }
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
        let spec: TrainEventSpec = serde_json::from_str(&text)
            .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
        spec.validate()?;
        return Ok(spec);
    }
    let ids: Vec<&str> = catalog.iter().map(|s| s.event_id.as_str()).collect();
    Err(Error::invalid(
        "cli",
        format!(
            "{arg:?} is neither a spec file nor a builtin event id; builtin ids: {}",
            ids.join(", ")
        ),
    ))
}

fn simulate(spec_arg: &str, cfg: &RunConfig, out_dir: &Path, seed: Option<u64>) -> Result<()> {
    let mut spec = resolve_spec(spec_arg)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(sigma) = cfg.noise_sigma {
        spec.noise_sigma = sigma;
    }
    let (record, report) = generate_event_opts::<f64>(
        &spec,
        &cfg.geometry()?,
        &cfg.section()?,
        cfg.sample_rate_hz,
        &cfg.gen_options(),
    )?;

    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join("event.csv");
    write_event(&csv_path, &record)?;
    let meta_path = out_dir.join("event.meta.json");
    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::format(format!("metadata serialization: {e}")))?;
    json.push('\n');
    atomic_write_text(&meta_path, &json)?;

    println!(
        "wrote {} ({} samples at {} Hz, event {})",
        csv_path.display(),
        record.top.ax.len(),
        cfg.sample_rate_hz,
        spec.event_id
    );
    println!("wrote {}", meta_path.display());
    Ok(())
}

/// Replace the unsigned peak errors with signed ones (legacy convention).
fn sign_scores<T: Scalar>(result: &mut EstimationResult<T>) -> Result<()> {
    if let Some(reference) = &result.reference {
        let s1 = peak_error_signed(&result.total_1dof, reference)?;
        let s2 = peak_error_signed(&result.total_2dof, reference)?;
        if let Some(row) = result.scores.as_mut() {
            row.e1_1dof = s1;
            row.e1_2dof = s2;
        }
    }
    Ok(())
}

fn estimate(
    event_path: &Path,
    cfg: &RunConfig,
    out_dir: &Path,
    opts: &PipelineOptions,
    signed_e1: bool,
) -> Result<()> {
    let record: SensorEventRecord<f64> = read_event(event_path, cfg.geometry()?)?;
    let dt = 1.0 / record.sample_rate_hz;
    let fir_cfg = cfg.fir_config(dt);
    let mut result = run_pipeline_with(&record, &fir_cfg, &cfg.incl_config(), opts)?;
    if signed_e1 {
        sign_scores(&mut result)?;
    }
    if let Some(row) = result.scores.as_mut() {
        row.event_id = event_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }

    fs::create_dir_all(out_dir)?;
    let disp_path = out_dir.join("displacements.csv");
    write_displacements(&disp_path, &result)?;
    println!("wrote {}", disp_path.display());

    if let Some(row) = &result.scores {
        let scores_path = out_dir.join("scores.csv");
        atomic_write_text(
            &scores_path,
            &format!("{}\n{}\n", ScoreRow::CSV_HEADER, row.csv_line()),
        )?;
        println!("wrote {}", scores_path.display());
    }

    let summary = estimate_summary(event_path, cfg, &fir_cfg, &record, &result)?;
    let summary_path = out_dir.join("summary.txt");
    atomic_write_text(&summary_path, &summary)?;
    println!("wrote {}", summary_path.display());
    Ok(())
}

fn peak_abs_mm<T: Scalar>(series: &TimeSeries<T>) -> f64 {
    series
        .values()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.as_f64().abs()))
        * 1e3
}

fn estimate_summary(
    event_path: &Path,
    cfg: &RunConfig,
    fir_cfg: &pilesway_core::FirConfig,
    record: &SensorEventRecord<f64>,
    result: &EstimationResult<f64>,
) -> Result<String> {
    let fs = record.sample_rate_hz;
    let lambda = match fir_cfg.lambda_override {
        Some(l) => l,
        None => optimal_lambda(2 * fir_cfg.k + 3)?,
    };
    let n_sma = sma_window(fs, cfg.cutoff_hz);
    let mut s = String::new();
    s.push_str(&format!("event: {}\n", event_path.display()));
    s.push_str(&format!("samples: {} at {fs} Hz\n", record.top.ax.len()));
    s.push_str(&format!(
        "filter: k = {}, window = {} points, lambda = {:.8e}\n",
        fir_cfg.k,
        2 * fir_cfg.k + 3,
        lambda
    ));
    s.push_str(&format!(
        "moving average: {n_sma} points ({} Hz cutoff)\n",
        cfg.cutoff_hz
    ));
    s.push_str(&format!(
        "peak |total|: 1DOF {:.3} mm, 2DOF {:.3} mm\n",
        peak_abs_mm(&result.total_1dof),
        peak_abs_mm(&result.total_2dof)
    ));
    match &result.scores {
        Some(row) => {
            s.push_str(&format!(
                "scores vs reference: E1 1DOF {:.1}%, E1 2DOF {:.1}%, E2 1DOF {:.1}%, E2 2DOF {:.1}%\n",
                row.e1_1dof * 100.0,
                row.e1_2dof * 100.0,
                row.e2_1dof * 100.0,
                row.e2_2dof * 100.0
            ));
            let (p1, p2) = pilesway_core::pseudo_component_scores(result, n_sma)?;
            s.push_str(&format!(
                "pseudo-static component only: E2 1DOF {:.1}%, E2 2DOF {:.1}%\n",
                p1 * 100.0,
                p2 * 100.0
            ));
        }
        None => s.push_str("no reference channel in the input; scores not computed\n"),
    }
    Ok(s)
}

fn compare(
    est_path: &Path,
    meas_path: &Path,
    est_column: Option<&str>,
    meas_column: Option<&str>,
    signed_e1: bool,
) -> Result<()> {
    let est: TimeSeries<f64> = read_displacement_column(est_path, est_column)?;
    let meas: TimeSeries<f64> = read_displacement_column(meas_path, meas_column)?;
    let e1 = if signed_e1 {
        peak_error_signed(&est, &meas)?
    } else {
        peak_error(&est, &meas)?
    };
    let e2 = rms_error(&est, &meas)?;
    println!("E1 = {:.1}%", e1 * 100.0);
    println!("E2 = {:.1}%", e2 * 100.0);
    Ok(())
}

fn bench(
    cfg: &RunConfig,
    out_dir: &Path,
    opts: &PipelineOptions,
    seed: Option<u64>,
    signed_e1: bool,
) -> Result<()> {
    let geometry = cfg.geometry()?;
    let section = cfg.section()?;
    let gen_opts = cfg.gen_options();
    let fs = cfg.sample_rate_hz;
    let fir_cfg = cfg.fir_config(1.0 / fs);
    let incl_cfg = cfg.incl_config();

    let mut lines = vec![ScoreRow::CSV_HEADER.to_string()];
    let mut rows: Vec<ScoreRow> = Vec::new();
    let mut failures: Vec<(String, Error)> = Vec::new();

    for (i, mut spec) in builtin_catalog().into_iter().enumerate() {
        if let Some(base) = seed {
            spec.seed = base.wrapping_add(i as u64);
        }
        if let Some(sigma) = cfg.noise_sigma {
            spec.noise_sigma = sigma;
        }
        let outcome = generate_event_opts::<f64>(&spec, &geometry, &section, fs, &gen_opts)
            .and_then(|(record, _)| {
                let mut result = run_pipeline_with(&record, &fir_cfg, &incl_cfg, opts)?;
                if signed_e1 {
                    sign_scores(&mut result)?;
                }
                result.scores.take().ok_or_else(|| {
                    Error::invalid("cli", "generated event lost its reference channel")
                })
            });
        match outcome {
            Ok(mut row) => {
                row.event_id = spec.event_id.clone();
                lines.push(row.csv_line());
                rows.push(row);
            }
            Err(e) => {
                lines.push(format!("{},failed,failed,failed,failed", spec.event_id));
                failures.push((spec.event_id.clone(), e));
            }
        }
    }

    let mut summary = String::new();
    summary.push_str(&format!(
        "catalog: {} events at {fs} Hz, {} succeeded\n",
        lines.len() - 1,
        rows.len()
    ));
    summary.push_str(&format!(
        "filter: k = {}, window = {} points\n",
        fir_cfg.k,
        2 * fir_cfg.k + 3
    ));
    summary.push_str(&format!(
        "moving average: {} points ({} Hz cutoff)\n",
        sma_window(fs, cfg.cutoff_hz),
        cfg.cutoff_hz
    ));

    if !rows.is_empty() {
        let n = rows.len() as f64;
        let avg = ScoreRow {
            event_id: "average".into(),
            e1_1dof: rows.iter().map(|r| r.e1_1dof).sum::<f64>() / n,
            e1_2dof: rows.iter().map(|r| r.e1_2dof).sum::<f64>() / n,
            e2_1dof: rows.iter().map(|r| r.e2_1dof).sum::<f64>() / n,
            e2_2dof: rows.iter().map(|r| r.e2_2dof).sum::<f64>() / n,
        };
        let wins = rows.iter().filter(|r| r.e2_2dof < r.e2_1dof).count();
        let reduction = (avg.e2_1dof - avg.e2_2dof) / avg.e2_1dof * 100.0;
        lines.push(avg.csv_line());
        summary.push_str(&format!(
            "2DOF beat 1DOF on E2 in {wins}/{} events\n",
            rows.len()
        ));
        summary.push_str(&format!(
            "average E2: 1DOF {:.1}%, 2DOF {:.1}% ({reduction:.1}% reduction)\n",
            avg.e2_1dof * 100.0,
            avg.e2_2dof * 100.0
        ));
        summary.push_str(&format!(
            "average E1: 1DOF {:.1}%, 2DOF {:.1}%\n",
            avg.e1_1dof * 100.0,
            avg.e1_2dof * 100.0
        ));
    }
    if failures.is_empty() {
        summary.push_str("failures: none\n");
    } else {
        for (id, e) in &failures {
            summary.push_str(&format!("failure: {id}: {e}\n"));
        }
    }

    fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join("bench_report.csv");
    atomic_write_text(&report_path, &(lines.join("\n") + "\n"))?;
    let summary_path = out_dir.join("bench_summary.txt");
    atomic_write_text(&summary_path, &summary)?;
    println!("wrote {}", report_path.display());
    println!("wrote {}", summary_path.display());
    print!("{summary}");

    match failures.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}
