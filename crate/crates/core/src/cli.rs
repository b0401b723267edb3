//! `mic-kepler` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::interbasis::{w_matrix, w_tilde_matrix, ExpansionMatrix};
use crate::qnum::{half, parse_half, Block, SystemParams};
use crate::spheroidal::{solve, sweep};
use crate::verify::{self, CheckReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mic-kepler", version, about = "Spectra, interbasis coefficients and spheroidal separation constants of the generalized MIC-Kepler system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies of every (n, m) sector up to n_max.
    Spectrum(SpectrumArgs),
    /// W, W-tilde, U or V matrix of one sector.
    Coefficients(CoefficientsArgs),
    /// Separation constants along an R grid.
    Sweep(SweepArgs),
    /// Run the numeric check suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    W,
    WTilde,
    U,
    V,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Monopole number s (integer or half-integer, e.g. 1/2)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value_t = 0.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c2: f64,
}

impl SystemArgs {
    fn params(&self) -> Result<SystemParams> {
        SystemParams::new(parse_half(&self.s)?, self.c1, self.c2)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BlockArgs {
    /// Principal quantum number n
    #[arg(long)]
    pub n: String,
    /// Azimuthal quantum number m
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
}

impl BlockArgs {
    fn block(&self, params: SystemParams) -> Result<Block> {
        Block::new(params, parse_half(&self.n)?, parse_half(&self.m)?)
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value = "3")]
    pub n_max: String,
    /// Restrict to one m
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoefficientsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub block: BlockArgs,
    #[arg(long, value_enum, default_value_t = MatrixKind::W)]
    pub kind: MatrixKind,
    /// Interfocus distance, required for U and V
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub block: BlockArgs,
    /// "start:stop:steps" or a comma-separated list
    #[arg(long = "R-grid")]
    pub r_grid: String,
    /// Add U and V columns
    #[arg(long)]
    pub vectors: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Without --s, --c1, --c2 the six-case grid s in {0, 1/2, 1} x c in {(0,0), (0.3,0.7)} is used
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long, default_value = "5")]
    pub n_max: String,
    #[arg(long = "R-grid", default_value = "0.1,1,10,100")]
    pub r_grid: String,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    /// Report stream format: JSON lines or CSV
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `"start:stop:steps"` (inclusive, evenly spaced) or `"a,b,c"`.
pub fn parse_r_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidGrid(format!("`{spec}`: {why}"));
    let spec_t = spec.trim();
    if spec_t.is_empty() {
        return Err(bad("empty grid"));
    }
    let grid: Vec<f64> = if spec_t.contains(':') {
        let parts: Vec<&str> = spec_t.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:steps"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("bad step count"))?;
        match steps {
            0 => return Err(bad("step count must be positive")),
            1 => vec![start],
            _ => (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect(),
        }
    } else {
        spec_t
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad("bad number")))
            .collect::<Result<_>>()?
    };
    if grid.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(bad("R values must be finite and nonnegative"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(bad("grid must be strictly ascending"));
    }
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// doubled quantum number, printed as its decimal value
    Half(i32),
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Half(h) => format!("{}", half(*h)),
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Text(t) => t.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Half(h) => Value::from(half(*h)),
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(t) => Value::from(t.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }

    /// Array of row objects keyed by header.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (h, c) in self.headers.iter().zip(row) {
                    obj.insert(h.clone(), c.json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn spectrum_table(params: &SystemParams, two_n_max: i32, two_m: Option<i32>) -> Result<Table> {
    if let Some(m) = two_m {
        params.derive(m)?;
    }
    let mut t = Table {
        headers: ["n", "m", "delta1", "delta2", "E"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for b in params.blocks_up_to(two_n_max) {
        if two_m.is_some_and(|m| m != b.two_m) {
            continue;
        }
        t.rows.push(vec![
            Cell::Half(b.two_n),
            Cell::Half(b.two_m),
            Cell::Real(b.dc.delta1),
            Cell::Real(b.dc.delta2),
            Cell::Real(b.energy()),
        ]);
    }
    Ok(t)
}

fn matrix_table(m: &ExpansionMatrix) -> Table {
    let mut headers = vec!["row".to_string()];
    headers.extend(m.col_labels.iter().map(ToString::to_string));
    let rows = (0..m.dim)
        .map(|i| {
            let mut row = vec![Cell::Text(m.row_labels[i].to_string())];
            row.extend((0..m.dim).map(|k| Cell::Real(m.entries[(i, k)])));
            row
        })
        .collect();
    Table { headers, rows }
}

pub fn coefficients_table(block: &Block, kind: MatrixKind, r: Option<f64>) -> Result<Table> {
    let m = match kind {
        MatrixKind::W => w_matrix(block)?,
        MatrixKind::WTilde => w_tilde_matrix(block)?,
        MatrixKind::U | MatrixKind::V => {
            let r = r.ok_or_else(|| Error::InvalidParams("--R is required for U and V".into()))?;
            let sol = solve(block, r)?;
            if kind == MatrixKind::U {
                sol.u
            } else {
                sol.v
            }
        }
    };
    Ok(matrix_table(&m))
}

pub fn sweep_table(block: &Block, grid: &[f64], vectors: bool) -> Result<Table> {
    let sols = sweep(block, grid)?;
    let d = block.dim();
    let mut headers: Vec<String> = ["R", "q", "lambda"].map(String::from).to_vec();
    if vectors {
        headers.extend((0..d).map(|k| format!("U[{}]", crate::interbasis::Label::J(block.two_j(k)))));
        headers.extend((0..d).map(|i| format!("V[n1={i}]")));
    }
    let mut rows = Vec::new();
    for s in &sols {
        for q in 0..d {
            let mut row = vec![Cell::Real(s.r), Cell::Int(q as i64), Cell::Real(s.lambda[q])];
            if vectors {
                row.extend((0..d).map(|k| Cell::Real(s.u.entries[(k, q)])));
                row.extend((0..d).map(|i| Cell::Real(s.v.entries[(i, q)])));
            }
            rows.push(row);
        }
    }
    Ok(Table { headers, rows })
}

pub fn reports_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "residual", "tolerance", "passed", "context"]).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.check_id.clone(),
            format!("{:.16e}", r.residual),
            format!("{:.16e}", r.tolerance),
            r.passed.to_string(),
            r.context.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

/// 0 if every report passed, 1 otherwise.
pub fn verify_exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::result::Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn usage_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

pub fn run_verify(args: &VerifyArgs) -> Result<(Vec<CheckReport>, String)> {
    let two_n_max = parse_half(&args.n_max)?;
    if two_n_max < 2 {
        return Err(Error::InvalidQuantumNumbers("--n-max must be at least 1".into()));
    }
    let r_list = parse_r_grid(&args.r_grid)?;
    let grid = if args.s.is_none() && args.c1.is_none() && args.c2.is_none() {
        verify::default_grid()
    } else {
        let two_s = parse_half(args.s.as_deref().unwrap_or("0"))?;
        vec![SystemParams::new(two_s, args.c1.unwrap_or(0.0), args.c2.unwrap_or(0.0))?]
    };
    let reports = verify::run_grid(&grid, two_n_max, &r_list, args.seed);
    let stream = match args.format {
        Format::Json => verify::to_json_lines(&reports),
        Format::Csv => reports_csv(&reports),
    };
    Ok((reports, stream))
}

fn dispatch(cli: Cli) -> i32 {
    let rendered: Result<(String, &Option<PathBuf>)> = match &cli.command {
        Command::Spectrum(a) => (|| {
            let params = a.system.params()?;
            let m = a.m.as_deref().map(parse_half).transpose()?;
            let t = spectrum_table(&params, parse_half(&a.n_max)?, m)?;
            Ok((t.render(a.output.format), &a.output.out))
        })(),
        Command::Coefficients(a) => (|| {
            let block = a.block.block(a.system.params()?)?;
            let t = coefficients_table(&block, a.kind, a.r)?;
            Ok((t.render(a.output.format), &a.output.out))
        })(),
        Command::Sweep(a) => (|| {
            let block = a.block.block(a.system.params()?)?;
            let grid = parse_r_grid(&a.r_grid)?;
            let t = sweep_table(&block, &grid, a.vectors)?;
            Ok((t.render(a.output.format), &a.output.out))
        })(),
        Command::Verify(a) => {
            return match run_verify(a) {
                Ok((reports, stream)) => {
                    if let Err(e) = emit(&stream, &a.out) {
                        return usage_error(e);
                    }
                    let summary = verify::summary_table(&reports);
                    if a.out.is_some() {
                        print!("{summary}");
                    } else {
                        eprint!("{summary}");
                    }
                    verify_exit_code(&reports)
                }
                Err(e) => usage_error(e),
            };
        }
    };
    match rendered {
        Ok((text, out)) => match emit(&text, out) {
            Ok(()) => EXIT_OK,
            Err(e) => usage_error(e),
        },
        Err(e) => usage_error(e),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
