use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use foliation::harness::{
    emit_reports, gallery, gallery_list, load_scenario_file, run_scenario_with, Format, ScenarioKind, ScenarioSpec,
};
use foliation::{Error, Result};

#[derive(Parser)]
#[command(name = "foliation", version, about = "Germs of integrable one-forms: first integrals, focal values, blow-ups, holonomy")]
struct Cli {
    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Seed for randomized scenarios.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation order N.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Relative integrator tolerance.
    #[arg(long = "tol-rel", global = true)]
    tol_rel: Option<f64>,
    /// Absolute integrator tolerance.
    #[arg(long = "tol-abs", global = true)]
    tol_abs: Option<f64>,
    /// Record per-check timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrability and leading jet.
    Check {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Solve ω = g·df with Q taken from the tangent cone.
    FirstIntegral {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Focal values of a planar form with leading part d(x²+y²).
    Focal {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Strict transform and divisor singularities in one chart.
    Blowup {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 0)]
        chart: usize,
    },
    /// Holonomy germ of the exceptional divisor.
    Holonomy {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 0)]
        chart: usize,
    },
    /// Poincaré return map from (x₀, 0).
    Poincare {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = 0.1)]
        x0: f64,
    },
    /// Restrict to the hyperplane x_n = Σ a_j x_j.
    Restrict {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Comma-separated rationals a_1,…,a_{n−1}.
        #[arg(long)]
        coeffs: String,
    },
    /// Run gallery scenarios: all of them, or one with key=value overrides.
    Gallery {
        name: Option<String>,
        settings: Vec<String>,
        /// List scenario names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Run the scenarios of a `[scenario.<name>]` file.
    Run { file: PathBuf },
}

fn form_spec(kind: ScenarioKind, form: &str, extra: &[(&str, String)]) -> Result<ScenarioSpec> {
    let mut spec = ScenarioSpec::new(kind.label(), kind);
    spec.form = Some(form.to_string());
    for (k, v) in extra {
        spec.set(k, v)?;
    }
    Ok(spec)
}

fn specs(command: &Command) -> Result<Vec<ScenarioSpec>> {
    Ok(match command {
        Command::Check { form } => vec![form_spec(ScenarioKind::FormCheck, form, &[])?],
        Command::FirstIntegral { form } => vec![form_spec(ScenarioKind::FirstIntegral, form, &[])?],
        Command::Focal { form, count } => vec![form_spec(ScenarioKind::Focal, form, &[("count", count.to_string())])?],
        Command::Blowup { form, chart } => vec![form_spec(ScenarioKind::Blowup, form, &[("chart", chart.to_string())])?],
        Command::Holonomy { form, chart } => {
            vec![form_spec(ScenarioKind::Holonomy, form, &[("chart", chart.to_string())])?]
        }
        Command::Poincare { form, x0 } => vec![form_spec(ScenarioKind::Poincare, form, &[("x0", x0.to_string())])?],
        Command::Restrict { form, coeffs } => vec![form_spec(ScenarioKind::Restrict, form, &[("coeffs", coeffs.clone())])?],
        Command::Gallery { name: None, .. } => gallery_list(),
        Command::Gallery { name: Some(name), settings, .. } => {
            let mut spec = gallery(name)?;
            for s in settings {
                let (k, v) = s.split_once('=').ok_or_else(|| Error::Scenario(format!("expected key=value, got `{s}`")))?;
                spec.set(k, v)?;
            }
            vec![spec]
        }
        Command::Run { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Scenario(format!("{}: {e}", file.display())))?;
            load_scenario_file(&text)?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Gallery { list: true, .. } = cli.command {
        for s in gallery_list() {
            println!("{:<24} {}", s.name, s.kind);
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(true)` when no check failed.
fn run(cli: &Cli) -> Result<bool> {
    let mut specs = specs(&cli.command)?;
    for spec in &mut specs {
        if let Some(seed) = cli.seed {
            spec.seed = seed;
        }
        if let Some(order) = cli.order {
            spec.order = order;
        }
        if let Some(v) = cli.tol_rel {
            spec.integrator.rtol = v;
        }
        if let Some(v) = cli.tol_abs {
            spec.integrator.atol = v;
        }
    }
    let reports: Vec<_> = specs.iter().map(|s| run_scenario_with(s, cli.timings)).collect();
    let bytes = emit_reports(&reports, cli.format)?;
    std::io::stdout().write_all(&bytes).map_err(|e| Error::Scenario(e.to_string()))?;
    Ok(reports.iter().all(|r| !r.failed()))
}
