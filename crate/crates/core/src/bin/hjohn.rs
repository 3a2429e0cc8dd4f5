use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harmonic_john::cli::{coefficient_report, run, MapSource, RunConfig, Suite};
use harmonic_john::john::summary_line;
use harmonic_john::report::table_csv;
use harmonic_john::{Error, Result};

#[derive(Parser)]
#[command(name = "hjohn", version, about = "John-disk diagnostics for planar harmonic maps of the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every suite.
    Analyze(Common),
    /// Radial John constant, box criterion, exponent fit and verdict.
    John(Common),
    /// Pommerenke-interior bracket.
    Pommerenke(Common),
    /// Pre-Schwarzian boundary test, Schwarz-Pick bound and radial lengths.
    Preschwarzian(Common),
    /// Hardy means, series identity and coefficient sums.
    Hardy(Common),
    /// Coefficient table, sums and critical exponent.
    Coeffs {
        #[command(flatten)]
        common: Common,
        /// Number of coefficients.
        #[arg(long, default_value_t = 256)]
        terms: usize,
    },
    /// Distortion lemmas, two-sided frame bound and tail diagnostics.
    Lemmas(Common),
}

#[derive(Args)]
struct Common {
    /// Catalog entry, e.g. `affine:a=0.5` or `analytic:expr=lune`.
    #[arg(long, conflicts_with = "spec")]
    map: Option<String>,
    /// JSON map specification file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Ladder depth.
    #[arg(long)]
    ladder: Option<usize>,
    #[arg(long)]
    rays: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self, suites: &[Suite]) -> Result<RunConfig> {
        let source = match (&self.map, &self.spec) {
            (Some(m), _) => Some(MapSource::parse_catalog(m)?),
            (None, Some(p)) => Some(MapSource::Spec { path: p.clone() }),
            (None, None) => None,
        };
        let mut cfg = match (&self.config, source) {
            (Some(path), src) => {
                let mut c = RunConfig::from_json(&fs::read_to_string(path)?)?;
                if let Some(s) = src {
                    c.map = s;
                }
                c
            }
            (None, Some(src)) => RunConfig::new(src),
            (None, None) => return Err(Error::Config("one of --map, --spec or --config is required".into())),
        };
        if !suites.is_empty() {
            cfg.suites = suites.iter().copied().collect::<BTreeSet<_>>();
        }
        cfg.alpha = self.alpha.unwrap_or(cfg.alpha);
        cfg.epsilon = self.epsilon.unwrap_or(cfg.epsilon);
        cfg.ladder_depth = self.ladder.unwrap_or(cfg.ladder_depth);
        cfg.rays = self.rays.unwrap_or(cfg.rays);
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<u8> {
    let (common, suites): (&Common, &[Suite]) = match &cli.command {
        Command::Analyze(c) => (c, &Suite::ALL),
        Command::John(c) => (c, &[Suite::John]),
        Command::Pommerenke(c) => (c, &[Suite::Pommerenke]),
        Command::Preschwarzian(c) => (c, &[Suite::Schwarz]),
        Command::Hardy(c) => (c, &[Suite::Hardy]),
        Command::Lemmas(c) => (c, &[Suite::Lemmas]),
        Command::Coeffs { common, terms } => {
            let cfg = common.resolve(&[Suite::Hardy])?;
            let map = cfg.map.resolve()?;
            let (report, table) = coefficient_report(&map, *terms)?;
            fs::create_dir_all(&cfg.out)?;
            fs::write(cfg.out.join("coefficients.csv"), table_csv(&["n", "abs_a", "abs_b"], &table.rows()))?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?);
            return Ok(0);
        }
    };
    let cfg = common.resolve(suites)?;
    let outcome = run(&cfg)?;
    if let Some(j) = &outcome.report.john {
        println!("{}", summary_line(&j.report));
    }
    for v in &outcome.report.violations {
        eprintln!("violation: {v}");
    }
    for e in &outcome.report.errors {
        eprintln!("error: {e}");
    }
    println!("report: {}", outcome.report_path.display());
    Ok(outcome.exit_code as u8)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hjohn: {e}");
            ExitCode::from(1)
        }
    }
}
