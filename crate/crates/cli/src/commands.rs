use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::{info, warn};
use mvb::io::{
    counts_to_csv, counts_to_json, general_to_json, graph_to_dot, graph_to_json, model_from_json,
    model_to_json, natural_to_json, outcomes_to_csv, params_from_json, path_to_csv, ParamFile,
};
use mvb::sparse::extract_graph_from_natural;
use mvb::{
    check_dimension, extract_graph, fit, fit_l1, general_to_natural, natural_to_general,
    parameter_counts, regularization_path, sample, Dataset, FitOptions, GeneralParams, L1Options,
    MvbGlmModel, NaturalParams, OutcomeVector, PathOptions, PenaltySpec,
};
use serde_json::{json, Value};

use crate::config::{Command, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::ingest::ingest_csv;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sends `text` to the configured output file, or to `out`.
fn emit(config: &RunConfig, out: &mut dyn Write, text: &str) -> CliResult<()> {
    match &config.output {
        Some(path) => write_file(path, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn load_data(config: &RunConfig) -> CliResult<Dataset<f64>> {
    let data = ingest_csv(config.require_input()?)?;
    check_dimension(data.k(), config.force_large_k)?;
    Ok(data)
}

fn load_params(config: &RunConfig) -> CliResult<ParamFile<f64>> {
    let parsed = params_from_json(&read_text(config.require_input()?)?)?;
    let k = match &parsed {
        ParamFile::General(p) => p.k(),
        ParamFile::Natural(f) => f.k(),
    };
    check_dimension(k, config.force_large_k)?;
    Ok(parsed)
}

fn as_general(params: ParamFile<f64>) -> GeneralParams<f64> {
    match params {
        ParamFile::General(p) => p,
        ParamFile::Natural(f) => natural_to_general(&f),
    }
}

fn fit_options(config: &RunConfig) -> FitOptions<f64> {
    let mut opts = FitOptions {
        gtol: config.solver.gtol,
        standardize: config.solver.standardize,
        ..FitOptions::default()
    };
    if let Some(m) = config.solver.max_iter {
        opts.max_iter = m;
    }
    opts
}

fn l1_options(config: &RunConfig) -> L1Options<f64> {
    let mut opts = L1Options::default();
    if let Some(m) = config.solver.max_iter {
        opts.max_iter = m;
    }
    opts
}

fn check_positive(name: &str, v: f64) -> CliResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be a positive number, got {v}")))
    }
}

/// Runs one command. Results go to `config.output` when set, otherwise to
/// `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    check_positive("gtol", config.solver.gtol)?;
    if !(config.solver.tol >= 0.0) {
        return Err(CliError::Usage("--tol must be nonnegative".into()));
    }
    match config.command {
        Command::Fit => run_fit(config, out),
        Command::FitL1 => run_fit_l1(config, out),
        Command::Path => run_path(config, out),
        Command::Structure => run_structure(config, out),
        Command::Sample => run_sample(config, out),
        Command::Density => run_density(config, out),
        Command::Convert => run_convert(config, out),
        Command::Counts => run_counts(config, out),
    }
}

fn run_fit(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Json])?;
    let data = load_data(config)?;
    let model = fit(&data, &fit_options(config))?;
    if !model.converged {
        warn!(
            "Newton stopped after {} iterations without reaching gtol {}",
            model.iterations, config.solver.gtol
        );
    }
    emit(config, out, &model_to_json(&model))
}

fn run_fit_l1(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Json])?;
    let lambda = config
        .solver
        .lambda
        .ok_or_else(|| CliError::Usage("fit-l1 requires --lambda".into()))?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(CliError::Usage(format!("--lambda must be nonnegative, got {lambda}")));
    }
    let data = load_data(config)?;
    let pen = PenaltySpec::uniform(data.k(), lambda)?;
    let res = fit_l1(&data, &pen, &l1_options(config))?;
    if !res.kkt.satisfied {
        warn!("KKT certificate not met: {}", res.kkt);
    }
    let mut doc: Value = serde_json::from_str(&model_to_json(&res.model)).expect("valid JSON");
    let obj = doc.as_object_mut().expect("model JSON is an object");
    obj.insert("lambda".into(), json!(lambda));
    obj.insert(
        "kkt".into(),
        json!({
            "max_violation": res.kkt.max_violation,
            "ktol": res.kkt.ktol,
            "satisfied": res.kkt.satisfied,
        }),
    );
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    emit(config, out, &text)
}

/// `out.csv` → `out.best.json`.
fn default_best_path(output: &Path) -> PathBuf {
    output.with_extension("best.json")
}

fn run_path(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Csv])?;
    if config.solver.grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let data = load_data(config)?;
    let opts = PathOptions {
        grid_size: config.solver.grid,
        l1: l1_options(config),
        intercept_fit: fit_options(config),
        ..PathOptions::default()
    };
    let path = regularization_path(&data, &opts)?;
    for (lambda, kkt) in path.grid.iter().zip(&path.kkt) {
        if !kkt.satisfied {
            warn!("λ={lambda}: KKT certificate not met: {kkt}");
        }
    }
    emit(config, out, &path_to_csv(&path))?;

    let best = path.best_by_bic();
    let target = config
        .best_model
        .clone()
        .or_else(|| config.output.as_deref().map(default_best_path));
    match target {
        Some(p) => write_file(&p, &model_to_json(&path.models[best])),
        None => {
            info!("no --best-model or --output given; BIC-selected model not written");
            Ok(())
        }
    }
}

fn run_structure(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let format = config.format_among(&[Format::Json, Format::Dot])?;
    let text = read_text(config.require_input()?)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| mvb::MvbError::Parse(e.to_string()))?;
    let tol = config.solver.tol;
    let graph = if value.get("coef").is_some() {
        let model: MvbGlmModel<f64> = model_from_json(&text)?;
        check_dimension(model.k(), config.force_large_k)?;
        extract_graph(&model, config.at.as_deref(), tol)?
    } else {
        if config.at.is_some() {
            return Err(CliError::Usage(
                "--at applies only to fitted model files".into(),
            ));
        }
        let f: NaturalParams<f64> = match load_params(config)? {
            ParamFile::Natural(f) => f,
            ParamFile::General(p) => general_to_natural(&p)?,
        };
        extract_graph_from_natural(&f, tol)?
    };
    let rendered = match format {
        Format::Dot => graph_to_dot(&graph),
        _ => graph_to_json(&graph),
    };
    emit(config, out, &rendered)
}

fn run_sample(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Csv])?;
    let seed = config
        .solver
        .seed
        .ok_or_else(|| CliError::Usage("sample requires --seed".into()))?;
    let n = config
        .n
        .ok_or_else(|| CliError::Usage("sample requires --n".into()))?;
    let p = as_general(load_params(config)?);
    let draws = sample(&p, n, seed);
    emit(config, out, &outcomes_to_csv(p.k(), &draws))
}

fn run_density(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Csv])?;
    let text = config
        .outcome
        .as_deref()
        .ok_or_else(|| CliError::Usage("density requires --outcome".into()))?;
    let y = OutcomeVector::parse(text)?;
    let p = as_general(load_params(config)?);
    let prob = p.prob(y)?;
    emit(config, out, &format!("{prob}\n"))
}

fn run_convert(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    config.format_among(&[Format::Json])?;
    let text = match load_params(config)? {
        ParamFile::General(p) => natural_to_json(&general_to_natural(&p)?),
        ParamFile::Natural(f) => general_to_json(&natural_to_general(&f)),
    };
    emit(config, out, &text)
}

fn run_counts(config: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let format = config.format_among(&[Format::Csv, Format::Json])?;
    let (lo, hi) = config
        .k_range
        .ok_or_else(|| CliError::Usage("counts requires --k".into()))?;
    let rows = (lo..=hi)
        .map(parameter_counts)
        .collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Json => counts_to_json(&rows),
        _ => counts_to_csv(&rows),
    };
    emit(config, out, &text)
}
