//! Command line front end. Every subcommand shares one flag set; a flat JSON
//! config file (`--config`) may supply any of them and explicit flags win.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gr::{snapshot, CheckStatus, DEFAULT_STEP_CAP};
use crate::harness::{self, CampaignSpec, ExperimentSpec, Mode};
use crate::lattice::{Ball, Norm};
use crate::potential::GreenTable;

#[derive(Debug, Parser)]
#[command(name = "arw", about = "Activated random walk experiments", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilize Poisson configurations and estimate P(origin visited >= r times).
    Stabilize {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the configuration and odometer of trial 0 as JSON.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Run the embedded IDLA process and summarize V given F.
    Idla(CommonArgs),
    /// Export exact hitting probabilities, Green row and exit times.
    Green(CommonArgs),
    /// Compute the exact-tail certificate (with --trials, compare to simulation).
    Certificate(CommonArgs),
    /// Estimate P(A_r) over a grid of densities and sleep rates.
    Scan(CommonArgs),
    /// Check order independence of stabilization on random instances.
    VerifyAbelian {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_particles: Option<u32>,
    },
    /// Check monotonicity under deletions, sleeps and inserted sleep envelopes.
    VerifyMonotone {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_particles: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    L2,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L2 => Norm::Euclidean,
            NormArg::Linf => Norm::Sup,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat JSON object with any of the flags below (snake_case keys).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// One radius or a comma separated list.
    #[arg(long, value_delimiter = ',')]
    pub radius: Option<Vec<u32>>,
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
    /// Density; a list is a grid axis for `scan`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub mu: Option<Vec<f64>>,
    /// Sleep rate; a list is a grid axis for `scan` and a pool for `verify-*`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Option<Vec<f64>>,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub step_cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    dim: Option<usize>,
    radius: Option<OneOrMany<u32>>,
    norm: Option<NormArg>,
    mu: Option<OneOrMany<f64>>,
    lambda: Option<OneOrMany<f64>>,
    r: Option<u64>,
    trials: Option<usize>,
    seed: Option<u64>,
    step_cap: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    max_particles: Option<u32>,
}

/// Flags after merging the config file underneath the command line.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub dim: usize,
    pub radii: Vec<u32>,
    pub norm: Norm,
    pub mu: Vec<f64>,
    pub lambda: Vec<f64>,
    pub r: u64,
    pub trials: Option<usize>,
    pub seed: u64,
    pub step_cap: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub max_particles: Option<u32>,
}

impl CommonArgs {
    pub fn resolve(&self, max_particles: Option<u32>) -> Result<Resolved> {
        let file = match &self.config {
            Some(path) => serde_json::from_reader(io::BufReader::new(File::open(path)?))?,
            None => ConfigFile::default(),
        };
        Ok(Resolved {
            dim: self.dim.or(file.dim).unwrap_or(1),
            radii: self.radius.clone().or(file.radius.map(OneOrMany::into_vec)).unwrap_or(vec![20]),
            norm: self.norm.or(file.norm).map(Norm::from).unwrap_or_default(),
            mu: self.mu.clone().or(file.mu.map(OneOrMany::into_vec)).unwrap_or(vec![1.5]),
            lambda: self.lambda.clone().or(file.lambda.map(OneOrMany::into_vec)).unwrap_or(vec![1.0]),
            r: self.r.or(file.r).unwrap_or(1),
            trials: self.trials.or(file.trials),
            seed: self.seed.or(file.seed).unwrap_or(0),
            step_cap: self.step_cap.or(file.step_cap).unwrap_or(DEFAULT_STEP_CAP),
            out: self.out.clone().or(file.out),
            format: self.format.or(file.format).unwrap_or(Format::Csv),
            max_particles: max_particles.or(file.max_particles),
        })
    }
}

fn single<T: Copy + std::fmt::Debug>(name: &str, values: &[T]) -> Result<T> {
    match values {
        [x] => Ok(*x),
        _ => Err(Error::InvalidParameter(format!("--{name} takes one value here, got {values:?}"))),
    }
}

impl Resolved {
    fn spec_unchecked(&self, mode: Mode) -> ExperimentSpec {
        ExperimentSpec {
            dim: self.dim,
            radii: self.radii.clone(),
            norm: self.norm,
            mu: self.mu.first().copied().unwrap_or(1.5),
            lambda: self.lambda.first().copied().unwrap_or(1.0),
            r: self.r,
            trials: self.trials.unwrap_or(100),
            seed: self.seed,
            step_cap: self.step_cap,
            mode,
        }
    }

    fn spec(&self, mode: Mode) -> Result<ExperimentSpec> {
        single("mu", &self.mu)?;
        single("lambda", &self.lambda)?;
        let spec = self.spec_unchecked(mode);
        spec.validate()?;
        Ok(spec)
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// Some trial ran out of steps; partial output was still written.
    StepCapExhausted,
    /// A property check found a counterexample.
    CheckFailed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::StepCapExhausted => 2,
            Outcome::CheckFailed => 1,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Stabilize { common, snapshot } => run_stabilize(&common.resolve(None)?, snapshot),
        Command::Idla(c) => run_idla(&c.resolve(None)?),
        Command::Green(c) => run_green(&c.resolve(None)?),
        Command::Certificate(c) => run_certificate(&c.resolve(None)?),
        Command::Scan(c) => run_scan(&c.resolve(None)?),
        Command::VerifyAbelian { common, max_particles } => {
            run_verify(&common.resolve(max_particles)?, true)
        }
        Command::VerifyMonotone { common, max_particles } => {
            run_verify(&common.resolve(max_particles)?, false)
        }
    }
}

fn run_stabilize(args: &Resolved, snapshot_path: Option<PathBuf>) -> Result<Outcome> {
    let spec = args.spec(Mode::Stabilize)?;
    let table = harness::estimate_ar_trials(&spec)?;
    let exhausted = table.iter().any(|(row, _)| row.exhausted > 0);
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => {
            let rows: Vec<_> = table.iter().map(|(r, _)| r.clone()).collect();
            harness::write_ar_csv(&mut w, &rows)?;
        }
        Format::Json => {
            let trials: Vec<_> = table.iter().flat_map(|(_, t)| t.iter().cloned()).collect();
            harness::write_json(&mut w, &trials)?;
        }
    }
    w.flush()?;
    if let Some(path) = snapshot_path {
        let ball = Ball::new(spec.dim, spec.radii[0], spec.norm)?;
        let (_, out) = harness::stabilize_run(&ball, &spec, harness::trial_seed(spec.seed, 0, 0))?;
        let value = snapshot(&ball, &out.config, &out.odometer, out.fixated);
        harness::write_json(BufWriter::new(File::create(path)?), &value)?;
    }
    Ok(if exhausted { Outcome::StepCapExhausted } else { Outcome::Ok })
}

fn run_idla(args: &Resolved) -> Result<Outcome> {
    let spec = args.spec(Mode::Idla)?;
    let results = harness::estimate_v_trials(&spec)?;
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => {
            let rows: Vec<_> = results.iter().map(|(s, _)| s.clone()).collect();
            harness::write_v_csv(&mut w, &rows)?;
        }
        Format::Json => {
            let records: Vec<_> = results.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
            harness::write_json(&mut w, &records)?;
        }
    }
    w.flush()?;
    for (s, _) in &results {
        if s.p_exceeds.is_none() {
            eprintln!("radius {}: no trial satisfied F; conditional probability undefined", s.radius);
        }
    }
    Ok(Outcome::Ok)
}

fn run_green(args: &Resolved) -> Result<Outcome> {
    let radius = single("radius", &args.radii)?;
    let ball = Ball::new(args.dim, radius, args.norm)?;
    let table = GreenTable::compute(&ball)?;
    table.check_identities()?;
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => {
            let sites: Vec<_> = ball
                .sites()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    json!({
                        "site": p.coords(),
                        "h": table.h[i],
                        "g_row0": table.g_row0[i],
                        "exit_time": table.exit_time[i],
                    })
                })
                .collect();
            let doc = json!({
                "dim": ball.dim(),
                "radius": radius,
                "g00": table.g00,
                "sites": sites,
            });
            harness::write_json(&mut w, &doc)?;
        }
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn run_certificate(args: &Resolved) -> Result<Outcome> {
    let mu = single("mu", &args.mu)?;
    // with --trials, attach the same conditional estimate `idla` reports
    let summaries = match args.trials {
        Some(_) => Some(harness::estimate_v(&args.spec(Mode::Certificate)?)?),
        None => None,
    };
    let mut reports = Vec::new();
    for (j, &radius) in args.radii.iter().enumerate() {
        let mut report = harness::certificate(args.dim, radius, mu, args.norm)?;
        if let Some(s) = &summaries {
            report.attach(&s[j]);
        }
        reports.push(report);
    }
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => harness::write_certificate_csv(&mut w, &reports)?,
        Format::Json => harness::write_json(&mut w, &reports)?,
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn run_scan(args: &Resolved) -> Result<Outcome> {
    let grid: Vec<(f64, f64)> =
        args.mu.iter().flat_map(|&m| args.lambda.iter().map(move |&l| (m, l))).collect();
    let base = ExperimentSpec {
        mu: args.mu[0],
        lambda: args.lambda[0],
        ..args.spec_unchecked(Mode::Scan)
    };
    let rows = harness::scan(&base, &grid)?;
    let exhausted = rows.iter().any(|r| r.row.exhausted > 0);
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => harness::write_scan_csv(&mut w, &rows)?,
        Format::Json => harness::write_json(&mut w, &rows)?,
    }
    w.flush()?;
    Ok(if exhausted { Outcome::StepCapExhausted } else { Outcome::Ok })
}

fn run_verify(args: &Resolved, abelian: bool) -> Result<Outcome> {
    let spec = CampaignSpec {
        instances: args.trials.unwrap_or(100),
        max_radius: *args.radii.iter().max().expect("non-empty"),
        max_particles: args.max_particles.unwrap_or(20),
        lambdas: args.lambda.clone(),
        seed: args.seed,
        step_cap: args.step_cap,
    };
    if spec.lambdas.iter().any(|l| !(*l >= 0.0)) {
        return Err(Error::InvalidParameter("sleep rates must be non-negative".into()));
    }
    let records = if abelian {
        harness::abelian_campaign(&spec)?
    } else {
        harness::monotone_campaign(&spec)?
    };
    let mut w = args.sink()?;
    match args.format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(&mut w);
            out.write_record([
                "instance", "dim", "radius", "particles", "lambda", "burned", "status", "site", "quantity",
            ])?;
            for r in &records {
                let (site, quantity) = match &r.report.divergence {
                    Some(d) => (d.site.to_string(), d.quantity.clone()),
                    None => (String::new(), String::new()),
                };
                out.write_record([
                    r.instance.to_string(),
                    r.dim.to_string(),
                    r.radius.to_string(),
                    r.particles.to_string(),
                    crate::io::float17(r.lambda),
                    r.burned.to_string(),
                    format!("{:?}", r.report.status).to_lowercase(),
                    site,
                    quantity,
                ])?;
            }
            out.flush()?;
        }
        Format::Json => harness::write_json(&mut w, &records)?,
    }
    w.flush()?;
    let failed = records.iter().filter(|r| r.report.status == CheckStatus::Fail).count();
    let inconclusive = records.iter().filter(|r| r.report.status == CheckStatus::Inconclusive).count();
    eprintln!("{} instances: {failed} failed, {inconclusive} inconclusive", records.len());
    Ok(if failed > 0 {
        Outcome::CheckFailed
    } else if inconclusive > 0 {
        Outcome::StepCapExhausted
    } else {
        Outcome::Ok
    })
}
