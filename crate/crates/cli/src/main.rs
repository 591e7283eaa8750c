//! Command-line runner: simulate a scenario or model file, analyze λ sweeps,
//! reproduce the built-in result tables, or write a greyed model file.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use greymap::{
    builtin, classify, full_report, inject_greyness, load_model, run, save_model, supported_engines,
    Behavior, Engine, Error, GreyEntry, Model, ModelSpec, ScenarioId, Trajectory,
};

/// Environment variable overriding the iteration horizon.
const MAX_STEPS_ENV: &str = "GREYMAP_MAX_STEPS";

#[derive(Parser)]
#[command(name = "greymap", version, about = "Grey cognitive map simulation and convergence analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelSource {
    /// Built-in scenario: web, web-case1, web-case2, civil, civil-case1, civil-case2
    #[arg(long, conflicts_with = "model")]
    scenario: Option<String>,
    /// Path to a model JSON file
    #[arg(long)]
    model: Option<PathBuf>,
}

impl ModelSource {
    fn load(&self) -> Result<Model, Error> {
        match (&self.scenario, &self.model) {
            (Some(name), None) => Ok(builtin(ScenarioId::from_str(name)?)),
            (None, Some(path)) => load_model(path),
            _ => Err(Error::InvalidModel(
                "exactly one of --scenario or --model is required".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one engine at one λ and emit the trace as CSV
    Simulate {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long, default_value = "fggcm")]
        engine: String,
        #[arg(long)]
        lambda: f64,
        /// Iteration horizon (overrides the model and GREYMAP_MAX_STEPS)
        #[arg(long)]
        steps: Option<usize>,
        /// Trace CSV destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate convergence conditions over a λ list
    Analyze {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long, default_value = "fggcm")]
        engine: String,
        /// Comma-separated λ values; defaults to the model's sweep list
        #[arg(long)]
        lambdas: Option<String>,
        /// Output format: csv (one row per λ) or kv (flat key=value blocks)
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit one of the built-in result tables: t2, t4, t5, t6, behaviors
    Reproduce {
        #[arg(long)]
        table: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Widen a crisp weight matrix into intervals and write the model file
    InjectGrey {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        greyness: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::UnsupportedEngine { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Simulate {
            source,
            engine,
            lambda,
            steps,
            out,
        } => simulate(source, &engine, lambda, steps, out),
        Command::Analyze {
            source,
            engine,
            lambdas,
            format,
            out,
        } => analyze(source, &engine, lambdas.as_deref(), &format, out),
        Command::Reproduce { table, out } => reproduce(&table, out),
        Command::InjectGrey {
            source,
            greyness,
            out,
        } => inject(source, greyness, &out),
    }
}

fn env_max_steps() -> Result<Option<usize>, Error> {
    match std::env::var(MAX_STEPS_ENV) {
        Ok(v) => v.parse::<usize>().map(Some).map_err(|_| {
            Error::InvalidModel(format!("{MAX_STEPS_ENV} must be an integer, got `{v}`"))
        }),
        Err(_) => Ok(None),
    }
}

fn write_output(out: Option<PathBuf>, data: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(data.as_bytes())?;
        }
    }
    Ok(())
}

fn trace_csv(traj: &Trajectory) -> String {
    let mut s = String::from("step,node,kernel,greyness\n");
    for (t, state) in traj.states.iter().enumerate() {
        for (node, g) in state.iter().enumerate() {
            s.push_str(&format!(
                "{t},{node},{:.11e},{:.11e}\n",
                g.kernel(),
                g.greyness()
            ));
        }
    }
    s
}

fn behavior_line(behavior: &Behavior) -> String {
    format!(
        "behavior={} settle_step={} period={}",
        behavior.kind,
        behavior
            .settle_step
            .map_or("-".to_string(), |v| v.to_string()),
        behavior.period.map_or("-".to_string(), |v| v.to_string()),
    )
}

fn simulate(
    source: ModelSource,
    engine: &str,
    lambda: f64,
    steps: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let mut model = source.load()?;
    if let Some(n) = match steps {
        Some(n) => Some(n),
        None => env_max_steps()?,
    } {
        model.max_steps = n;
    }
    let engine = Engine::from_str(engine)?;
    let traj = run(&model, lambda, engine)?;
    let behavior = classify(&traj, model.fp_tolerance, model.cycle_tolerance)?;
    write_output(out, &trace_csv(&traj))?;
    println!("{}", behavior_line(&behavior));
    Ok(())
}

fn parse_lambdas(spec: &str) -> Result<Vec<f64>, Error> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidLambda(f64::NAN))
                .and_then(|l| {
                    if l > 0.0 && l.is_finite() {
                        Ok(l)
                    } else {
                        Err(Error::InvalidLambda(l))
                    }
                })
        })
        .collect()
}

fn fmt4_opt(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |x| format!("{x:.4}"))
}

fn analyze(
    source: ModelSource,
    engine: &str,
    lambdas: Option<&str>,
    format: &str,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let model = source.load()?;
    let engine = Engine::from_str(engine)?;
    let lambdas = match lambdas {
        Some(spec) => parse_lambdas(spec)?,
        None if !model.lambda_sweep.is_empty() => model.lambda_sweep.clone(),
        None => {
            return Err(Error::InvalidModel(
                "model has no sweep list; pass --lambdas".into(),
            ))
        }
    };
    let kv = match format {
        "csv" => false,
        "kv" => true,
        other => {
            return Err(Error::InvalidModel(format!(
                "unknown format `{other}` (expected csv or kv)"
            )))
        }
    };
    let mut s = if kv {
        String::new()
    } else {
        String::from(
            "lambda,norm_kernel,norm_wstar,lhs_times_lambda,kernel_verdict,mtilde_norm,greyness_verdict,behavior\n",
        )
    };
    for &lambda in &lambdas {
        let r = full_report(&model, lambda, engine)?;
        if kv {
            s.push_str(&r.to_key_values());
            s.push('\n');
            continue;
        }
        for note in &r.notes {
            eprintln!("note (lambda={lambda}): {note}");
        }
        s.push_str(&format!(
            "{lambda},{:.4},{},{:.4},{},{},{},{}\n",
            r.frobenius_kernel,
            fmt4_opt(r.w_star_frobenius),
            r.kernel_verdict.lhs * lambda,
            r.kernel_verdict.kind,
            fmt4_opt(r.m_tilde_frobenius),
            r.greyness_verdict.kind,
            r.behavior.kind,
        ));
    }
    write_output(out, &s)?;
    Ok(())
}

fn norm_table(base: ScenarioId, case1: ScenarioId, case2: ScenarioId) -> Result<String, Error> {
    let model = builtin(base);
    let rows: [(&str, f64); 5] = [
        ("crisp", model.crisp_weights().expect("base crisp").frobenius()),
        (
            "comparison",
            greymap::w_star(model.ign_weights().expect("base intervals"))?.frobenius(),
        ),
        ("kernel", model.kernel_weights().frobenius()),
        ("kernel-case1", builtin(case1).kernel_weights().frobenius()),
        ("kernel-case2", builtin(case2).kernel_weights().frobenius()),
    ];
    let lambdas = base.lambdas();
    let mut s = String::from("matrix");
    for l in lambdas {
        s.push_str(&format!(",lambda={l}"));
    }
    s.push('\n');
    for (label, norm) in rows {
        s.push_str(label);
        for l in lambdas {
            s.push_str(&format!(",{:.4}", norm * l));
        }
        s.push('\n');
    }
    Ok(s)
}

fn m_tilde_table(id: ScenarioId) -> Result<String, Error> {
    let model = builtin(id);
    let mut header = String::from("quantity");
    let mut row = String::from("mtilde_frobenius");
    for &lambda in id.lambdas() {
        header.push_str(&format!(",lambda={lambda}"));
        let r = full_report(&model, lambda, Engine::Fggcm)?;
        row.push_str(&format!(",{}", fmt4_opt(r.m_tilde_frobenius)));
    }
    Ok(format!("{header}\n{row}\n"))
}

fn behaviors_table() -> Result<String, Error> {
    let mut s = String::from("scenario,lambda,fcm,fgcm,fggcm\n");
    for id in [ScenarioId::Web, ScenarioId::Civil] {
        let model = builtin(id);
        let supported = supported_engines(&model);
        for &lambda in id.lambdas() {
            s.push_str(&format!("{},{lambda}", id.name()));
            for engine in Engine::ALL {
                if supported.contains(&engine) {
                    let traj = run(&model, lambda, engine)?;
                    let b = classify(&traj, model.fp_tolerance, model.cycle_tolerance)?;
                    s.push_str(&format!(",{}", b.kind));
                } else {
                    s.push_str(",-");
                }
            }
            s.push('\n');
        }
    }
    Ok(s)
}

fn reproduce(table: &str, out: Option<PathBuf>) -> Result<(), Error> {
    let data = match table.to_ascii_lowercase().as_str() {
        "t2" => norm_table(ScenarioId::Web, ScenarioId::WebCase1, ScenarioId::WebCase2)?,
        "t4" => norm_table(
            ScenarioId::Civil,
            ScenarioId::CivilCase1,
            ScenarioId::CivilCase2,
        )?,
        "t5" => m_tilde_table(ScenarioId::Web)?,
        "t6" => m_tilde_table(ScenarioId::Civil)?,
        "behaviors" => behaviors_table()?,
        other => {
            return Err(Error::InvalidModel(format!(
                "unknown table `{other}` (expected t2, t4, t5, t6 or behaviors)"
            )))
        }
    };
    write_output(out, &data)
}

fn inject(source: ModelSource, greyness: f64, out: &PathBuf) -> Result<(), Error> {
    let base = source.load()?;
    let crisp = base
        .crisp_weights()
        .ok_or_else(|| Error::InvalidModel("model has no crisp weight matrix to widen".into()))?
        .clone();
    let crisp_initial = base.crisp_initial().map(<[f64]>::to_vec);
    let injected = inject_greyness(&crisp, greyness, base.weight_domain)?;
    let entries = injected.map(|iv| GreyEntry::Interval(*iv));
    let mut spec = ModelSpec::new(
        format!("{}-grey{greyness}", base.name),
        base.activation,
        entries,
        base.initial_entries.clone(),
    );
    spec.grey_domain = Some(base.grey_domain);
    spec.weight_domain = Some(base.weight_domain);
    spec.crisp_weights = Some(crisp);
    spec.crisp_initial = crisp_initial;
    spec.max_steps = Some(base.max_steps);
    spec.fp_tolerance = Some(base.fp_tolerance);
    spec.cycle_tolerance = Some(base.cycle_tolerance);
    spec.lambda_sweep = base.lambda_sweep.clone();
    let model = Model::new(spec)?;
    save_model(&model, out)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_list_parsing() {
        assert_eq!(parse_lambdas("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert!(parse_lambdas("0.5,uh").is_err());
        assert!(parse_lambdas("-1").is_err());
        assert!(parse_lambdas("").is_err());
    }

    #[test]
    fn trace_format_is_exponent_form() {
        let model = builtin(ScenarioId::Civil);
        let traj = run(&model, 0.2, Engine::Fggcm).unwrap();
        let csv = trace_csv(&traj);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "step,node,kernel,greyness");
        let first = lines.next().unwrap();
        let kernel_field = first.split(',').nth(2).unwrap();
        assert!(kernel_field.contains('e'), "got {kernel_field}");
    }
}
