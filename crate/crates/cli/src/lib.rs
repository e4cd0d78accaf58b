//! Command-line front end: argument and config-file handling, grid runs and
//! CSV/JSON tables.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_outputs, FileConfig, Format, ModelChoice, Output, RunConfig, Sweep};
use error::CliError;
use table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "casimir-film",
    version,
    about = "Casimir free energy, pressure and entropy of metallic films"
)]
pub struct Cli {
    /// Increase log verbosity (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one (a, T) point.
    Compute(RunArgs),
    /// Evaluate a grid of thicknesses and temperatures.
    Sweep(RunArgs),
    /// Compare the thermal correction, pressure and entropy with their low-temperature closed forms.
    CompareAsymptotics(RunArgs),
    /// Split the Drude free energy into plasma, zero-frequency and F_gamma parts.
    Decompose(RunArgs),
    /// Check F_gamma against its bound X(a, T).
    BoundCheck(RunArgs),
    /// Print I1, I2 and C at omega_p_tilde = 1, 5, 15.
    #[command(name = "table-III")]
    TableIii(TableArgs),
    /// Materials database commands.
    #[command(subcommand)]
    Materials(MaterialsCommand),
    /// Print the JSON schema of the output tables.
    Schema,
}

#[derive(Debug, Subcommand)]
pub enum MaterialsCommand {
    /// List known materials (search path, then built-ins).
    List(TableArgs),
}

#[derive(Debug, Args, Default)]
pub struct TableArgs {
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// TOML file with run settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Material name or path to a materials TOML file.
    #[arg(long)]
    pub material: Option<String>,
    #[arg(long)]
    pub model: Option<ModelChoice>,
    /// Thickness in m.
    #[arg(long, conflicts_with = "a_sweep")]
    pub a: Option<Sweep>,
    /// Temperature in K.
    #[arg(long = "T", conflicts_with = "t_sweep")]
    pub t: Option<Sweep>,
    /// Thickness grid: v1,v2,... or start:stop:lin|log:count.
    #[arg(long)]
    pub a_sweep: Option<Sweep>,
    /// Temperature grid: v1,v2,... or start:stop:lin|log:count.
    #[arg(long = "T-sweep")]
    pub t_sweep: Option<Sweep>,
    /// Comma-separated: free_energy, pressure, entropy, decomposition, asymptotics, bound_check.
    #[arg(long, value_parser = parse_outputs)]
    pub outputs: Option<std::collections::BTreeSet<Output>>,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_l: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Defaults, then `preset`, then the config file, then flags.
    pub fn resolve(&self, preset: impl FnOnce(&mut RunConfig)) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        preset(&mut cfg);
        if let Some(path) = &self.config {
            cfg.apply_file(FileConfig::load(path)?);
        }
        if let Some(v) = &self.material {
            cfg.material = v.clone();
        }
        if let Some(v) = self.model {
            cfg.model = v;
        }
        if let Some(v) = self.a.as_ref().or(self.a_sweep.as_ref()) {
            cfg.a = v.clone();
        }
        if let Some(v) = self.t.as_ref().or(self.t_sweep.as_ref()) {
            cfg.t = v.clone();
        }
        if let Some(v) = &self.outputs {
            cfg.outputs = v.clone();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.max_l {
            cfg.max_l = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(table: &Table, format: Format, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(format, &mut w)?;
        }
    }
    Ok(())
}

fn outputs(list: &[Output]) -> std::collections::BTreeSet<Output> {
    list.iter().copied().collect()
}

/// Runs a parsed command line, writing the table to stdout or `--out`.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let (table, format, out) = match &cli.command {
        Command::Compute(args) => {
            let cfg = args.resolve(|_| {})?;
            if cfg.a.0.len() != 1 || cfg.t.0.len() != 1 {
                return Err(CliError::config(
                    "compute takes a single --a and --T; use sweep for grids",
                ));
            }
            (run::run(&cfg, "compute")?, cfg.format, cfg.out)
        }
        Command::Sweep(args) => {
            let cfg = args.resolve(|_| {})?;
            (run::run(&cfg, "sweep")?, cfg.format, cfg.out)
        }
        Command::CompareAsymptotics(args) => {
            let cfg = args.resolve(|c| {
                c.t = Sweep::single(10.0);
                c.outputs = outputs(&[Output::Asymptotics]);
            })?;
            (run::run(&cfg, "compare-asymptotics")?, cfg.format, cfg.out)
        }
        Command::Decompose(args) => {
            let cfg = args.resolve(|c| {
                c.model = ModelChoice::Drude;
                c.outputs = outputs(&[Output::Decomposition]);
            })?;
            (run::run(&cfg, "decompose")?, cfg.format, cfg.out)
        }
        Command::BoundCheck(args) => {
            let cfg = args.resolve(|c| {
                c.model = ModelChoice::Drude;
                c.t = Sweep::single(5.0);
                c.outputs = outputs(&[Output::BoundCheck]);
            })?;
            (run::run(&cfg, "bound-check")?, cfg.format, cfg.out)
        }
        Command::TableIii(args) => {
            let mut quad = casimir_film::QuadratureConfig::default();
            if let Some(r) = args.rel_tol {
                quad.rel_tol = r;
            }
            quad.validate().map_err(|e| CliError::config(e.to_string()))?;
            (
                run::table_iii(&quad)?,
                args.format.unwrap_or_default(),
                args.out.clone(),
            )
        }
        Command::Materials(MaterialsCommand::List(args)) => (
            run::materials_table()?,
            args.format.unwrap_or_default(),
            args.out.clone(),
        ),
        Command::Schema => {
            print!("{}", table::SCHEMA);
            return Ok(());
        }
    };
    emit(&table, format, out.as_ref())
}
