//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::analysis::{find_transition, max_repulsion_beyond, solve_locus, sweep, LocusSetup, SweepParameter};
use crate::approx::{analytic_mu_for_eps, compare_zero_frequency};
use crate::config::{RunConfig, PROVENANCE_MARKER};
use crate::error::{Error, Result};
use crate::lifshitz::{ideal_pressure, total_pressure, CavityConfig, EngineSettings, PressureDecomposition};
use crate::materials::ResponseModel;
use crate::reflection::Thickness;

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir pressure between a metal and a magnetodielectric plate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (key = value with unit suffixes).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Relative tolerance, overriding `rel_tol` from the configuration.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Worker threads for row-parallel commands.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Accepted for scripting; results never depend on random state.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Pressure and its mode decomposition on the `separations` grid.
    Pressure,
    /// Transition separation and maximum repulsion.
    Metrics,
    /// μ(0) keeping the pressure zero at `d_t` for each `eps0_grid` value.
    Locus,
    /// Pressure or repulsion metrics over `sweep_grid`.
    Sweep,
    /// Zero-frequency pressure against its Taylor and Padé approximations.
    ApproxCompare,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Pressure => "pressure",
            Self::Metrics => "metrics",
            Self::Locus => "locus",
            Self::Sweep => "sweep",
            Self::ApproxCompare => "approx-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Count(usize),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Num(v) => format!("{:.8e}", if *v == 0.0 { 0.0 } else { *v }),
            Self::Count(n) => n.to_string(),
            Self::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num(v) if v.is_finite() => json!(v),
            Self::Count(n) => json!(n),
            _ => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub error: Option<Error>,
}

impl Row {
    fn ok(cells: Vec<Cell>) -> Self {
        Self { cells, error: None }
    }

    fn failed(width: usize, key: f64, error: Error) -> Self {
        let mut cells = vec![Cell::Empty; width];
        cells[0] = Cell::Num(key);
        Self { cells, error: Some(error) }
    }
}

/// Command output: named columns plus a trailing `error` column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn write_csv(&self, config: &str, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "{PROVENANCE_MARKER}")?;
        for line in config.lines() {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.columns.clone();
        header.push("error");
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record: Vec<String> = row.cells.iter().map(Cell::csv).collect();
            record.push(row.error.as_ref().map(|e| e.to_string()).unwrap_or_default());
            w.write_record(&record)?;
        }
        w.flush()
    }

    pub fn to_json(&self, command: Command, config: &str) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(&row.cells) {
                    obj.insert(name.to_string(), cell.json());
                }
                obj.insert("error".into(), row.error.as_ref().map_or(Value::Null, |e| json!(e.to_string())));
                Value::Object(obj)
            })
            .collect();
        json!({ "command": command.name(), "config": config.lines().collect::<Vec<_>>(), "rows": rows })
    }

    /// Exit status: zero unless every row failed.
    pub fn exit_code(&self) -> i32 {
        match self.rows.iter().map(|r| r.error.as_ref()).collect::<Option<Vec<_>>>() {
            Some(errors) if !errors.is_empty() => errors[0].exit_code(),
            _ => 0,
        }
    }
}

fn require<T: Clone>(value: &Option<T>, key: &str, command: Command) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| Error::Config(format!("field '{key}': required by the {} command", command.name())))
}

const PRESSURE_COLUMNS: [&str; 8] = ["d", "total", "te_zero", "tm_zero", "te_pos", "tm_pos", "total_over_pc", "n_terms"];

fn pressure_cells(d: f64, p: &PressureDecomposition) -> Vec<Cell> {
    vec![
        Cell::Num(d),
        Cell::Num(p.total),
        Cell::Num(p.te_zero),
        Cell::Num(p.tm_zero),
        Cell::Num(p.te_pos),
        Cell::Num(p.tm_pos),
        Cell::Num(p.total / ideal_pressure(d)),
        Cell::Count(p.n_terms_used),
    ]
}

fn pressure_table(grid: &[f64], cav: &CavityConfig, settings: &EngineSettings) -> Table {
    let rows = grid
        .par_iter()
        .map(|&d| match total_pressure(d, cav, settings) {
            Ok(p) => Row::ok(pressure_cells(d, &p)),
            Err(e) => Row::failed(PRESSURE_COLUMNS.len(), d, e),
        })
        .collect();
    Table { columns: PRESSURE_COLUMNS.to_vec(), rows }
}

fn metrics_table(config: &RunConfig) -> Result<Table> {
    let cav = config.cavity()?;
    let d_t = find_transition(&cav, config.bracket, &config.settings)?;
    let m = max_repulsion_beyond(&cav, d_t, config.d_start.unwrap_or(d_t), &config.settings)?;
    Ok(Table {
        columns: vec!["d_t", "d_at_max", "p_max"],
        rows: vec![Row::ok(vec![Cell::Num(m.d_transition), Cell::Num(m.d_at_max_repulsion), Cell::Num(m.p_max)])],
    })
}

fn locus_table(config: &RunConfig, command: Command) -> Result<Table> {
    let d_t = require(&config.d_t, "d_t", command)?;
    let grid = require(&config.eps0_grid, "eps0_grid", command)?;
    let setup = LocusSetup {
        left: config.left.material.clone(),
        eps_template: config.right.material.epsilon.clone(),
        mu_template: config.right.material.mu.clone(),
        d_t,
        thickness: config.thickness,
        temperature: config.temperature,
    };
    let settings = config.settings;
    let analytic = |eps0: f64| -> Result<f64> {
        let omega_p = match config.left.material.epsilon {
            ResponseModel::Plasma { omega_p } => omega_p,
            _ => return Err(Error::UnsupportedModel("analytic relation needs a plasma-model left plate".into())),
        };
        let b = match config.thickness {
            Thickness::Finite(b) => b,
            Thickness::Infinite => return Err(Error::UnsupportedModel("analytic relation needs a finite plate".into())),
        };
        let p = total_pressure(d_t, &setup.cavity(eps0, 1.0)?, &settings)?;
        analytic_mu_for_eps(eps0, d_t, b, config.temperature, omega_p, p.nonzero())
    };
    let rows = grid
        .par_iter()
        .map(|&eps0| {
            let numeric = solve_locus(eps0, &setup, &settings).map(|p| p.mu0);
            let analytic = analytic(eps0);
            let cell = |r: &Result<f64>| r.as_ref().map_or(Cell::Empty, |v| Cell::Num(*v));
            let rel = match (&numeric, &analytic) {
                (Ok(n), Ok(a)) => Cell::Num((a - n) / n),
                _ => Cell::Empty,
            };
            let error = numeric.as_ref().err().or(analytic.as_ref().err()).cloned();
            Row { cells: vec![Cell::Num(eps0), cell(&numeric), cell(&analytic), rel], error }
        })
        .collect();
    Ok(Table { columns: vec!["eps0", "mu0_numeric", "mu0_analytic", "rel_diff"], rows })
}

fn sweep_table(config: &RunConfig, command: Command) -> Result<Table> {
    let (parameter, grid) = require(&config.sweep, "sweep_parameter", command)?;
    let records = sweep(parameter, &grid, &config.cavity()?, &config.settings)?;
    if parameter == SweepParameter::Separation {
        let mut columns = PRESSURE_COLUMNS.to_vec();
        columns[0] = "separation";
        let rows = records
            .into_iter()
            .map(|r| match (r.pressure, r.error) {
                (Some(p), _) => Row::ok(pressure_cells(r.value, &p)),
                (None, e) => Row::failed(columns.len(), r.value, e.expect("failed sweep row carries its error")),
            })
            .collect();
        return Ok(Table { columns, rows });
    }
    let rows = records
        .into_iter()
        .map(|r| match (r.metrics, r.error) {
            (Some(m), _) => Row::ok(vec![
                Cell::Num(r.value),
                Cell::Num(m.d_transition),
                Cell::Num(m.d_at_max_repulsion),
                Cell::Num(m.p_max),
            ]),
            (None, e) => Row::failed(4, r.value, e.expect("failed sweep row carries its error")),
        })
        .collect();
    Ok(Table { columns: vec![parameter.name(), "d_t", "d_at_max", "p_max"], rows })
}

const APPROX_COLUMNS: [&str; 10] =
    ["d", "beta_te", "beta_tm", "delta", "te_engine", "te_pade", "te_taylor", "tm_engine", "tm_pade", "tm_taylor"];

fn approx_table(config: &RunConfig, command: Command) -> Result<Table> {
    let grid = require(&config.separations, "separations", command)?;
    let cav = config.cavity()?;
    let rows = grid
        .par_iter()
        .map(|&d| match compare_zero_frequency(d, &cav, &config.settings) {
            Ok(c) => Row::ok(
                [
                    d,
                    c.context.beta_te,
                    c.context.beta_tm,
                    c.context.delta,
                    c.te_engine,
                    c.te_pade,
                    c.te_taylor,
                    c.tm_engine,
                    c.tm_pade,
                    c.tm_taylor,
                ]
                .into_iter()
                .map(Cell::Num)
                .collect(),
            ),
            Err(e) => Row::failed(APPROX_COLUMNS.len(), d, e),
        })
        .collect();
    Ok(Table { columns: APPROX_COLUMNS.to_vec(), rows })
}

/// Runs one command on a resolved configuration.
pub fn execute(command: Command, config: &RunConfig) -> Result<Table> {
    match command {
        Command::Pressure => {
            let grid = require(&config.separations, "separations", command)?;
            Ok(pressure_table(&grid, &config.cavity()?, &config.settings))
        }
        Command::Metrics => metrics_table(config),
        Command::Locus => locus_table(config, command),
        Command::Sweep => sweep_table(config, command),
        Command::ApproxCompare => approx_table(config, command),
    }
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let mut config = RunConfig::load(path)?;
    if let Some(tol) = cli.tol {
        config.settings.rel_tol = tol;
        config.settings.validate()?;
    }
    if cli.threads == Some(0) {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    Ok(config)
}

fn emit(cli: &Cli, table: &Table, config: &RunConfig) -> std::io::Result<()> {
    let rendered = config.render();
    let mut buffer = Vec::new();
    match cli.format {
        Format::Csv => table.write_csv(&rendered, &mut buffer)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buffer, &table.to_json(cli.command, &rendered))?;
            buffer.push(b'\n');
        }
    }
    match &cli.out {
        Some(path) => std::fs::write(path, buffer),
        None => std::io::stdout().lock().write_all(&buffer),
    }
}

fn run_parsed(cli: &Cli) -> i32 {
    let config = match load(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let table = match pool.install(|| execute(cli.command, &config)) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = emit(cli, &table, &config) {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    for row in &table.rows {
        if let Some(e) = &row.error {
            eprintln!("warning: row {}: {e}", row.cells[0].csv());
        }
    }
    table.exit_code()
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_parsed(&cli),
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(error: Option<Error>) -> Row {
        Row { cells: vec![Cell::Num(1.0)], error }
    }

    #[test]
    fn exit_code_only_when_every_row_fails() {
        let nt = Error::NoTransition("x".into());
        let t = Table { columns: vec!["a"], rows: vec![row(None), row(Some(nt.clone()))] };
        assert_eq!(t.exit_code(), 0);
        let t = Table { columns: vec!["a"], rows: vec![row(Some(nt.clone())), row(Some(nt))] };
        assert_eq!(t.exit_code(), 4);
        assert_eq!(Table { columns: vec!["a"], rows: vec![] }.exit_code(), 0);
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            columns: vec!["d", "n"],
            rows: vec![
                Row::ok(vec![Cell::Num(1.5e-6), Cell::Count(7)]),
                Row::failed(2, 2e-6, Error::Config("bad, really".into())),
            ],
        };
        let mut out = Vec::new();
        t.write_csv("b = 1e-6 m\n", &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PROVENANCE_MARKER);
        assert_eq!(lines[1], "# b = 1e-6 m");
        assert_eq!(lines[2], "d,n,error");
        assert_eq!(lines[3], "1.50000000e-6,7,");
        assert_eq!(lines[4], "2.00000000e-6,,\"configuration error: bad, really\"");
    }

    #[test]
    fn json_uses_null_for_missing() {
        let t = Table { columns: vec!["d", "x"], rows: vec![Row::failed(2, 1.0, Error::Config("no".into()))] };
        let v = t.to_json(Command::Pressure, "T = 1e0 K\n");
        assert_eq!(v["rows"][0]["x"], Value::Null);
        assert_eq!(v["rows"][0]["d"], json!(1.0));
        assert_eq!(v["command"], json!("pressure"));
    }
}
