//! The `nsim` command line: solving, symmetry queries, presets, verification
//! and the HTTP service, behind one `run` entry point so tests can drive it
//! in-process.

pub mod service;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use nsim_core::preset::{build_preset, PresetKind, PresetName};
use nsim_core::report::Report;
use nsim_core::verify::{verify_target, Target};
use nsim_core::{
    automorphism_group, canonical_key, find_color_swap_isomorphism, find_isomorphism, parse_position,
    position_to_json, uncolored_edge_orbits, Budget, EdgeId, GameStatus, GameValue, Position, PositionDoc, SolveError,
    SolveOptions, SolveStats, Solver,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Exact solver and verification workbench for the Sim family of games.
#[derive(Debug, Parser)]
#[command(name = "nsim", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact game value of a position.
    Solve(SolveArgs),
    /// Exact value after every uncoloured edge.
    BestMoves(SolveArgs),
    /// The engine's deterministic optimal move.
    Reply(SolveArgs),
    /// Whose move it is and whether the game is over.
    Status(SourceArgs),
    /// Find a vertex relabelling mapping one position onto another.
    Iso(IsoArgs),
    /// Canonical key under vertex relabelling (n <= 7).
    Canon(SourceArgs),
    /// Orbits of the uncoloured edges under the automorphism group.
    Orbits(SourceArgs),
    /// Print a named position.
    Preset(PresetArgs),
    /// Run verification checks.
    Verify(VerifyArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Position file, or `-` for standard input.
    #[arg(conflicts_with = "preset", required_unless_present = "preset")]
    pub file: Option<PathBuf>,
    /// Use a named preset instead of a file.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_seconds: Option<u64>,
    /// Key the transposition table by canonical form (n <= 7).
    #[arg(long)]
    pub canonical_memo: bool,
}

impl BudgetArgs {
    fn options(&self) -> SolveOptions {
        let d = Budget::default();
        SolveOptions {
            budget: Budget {
                max_nodes: self.max_nodes.or(d.max_nodes),
                max_time: self.max_seconds.map(Duration::from_secs).or(d.max_time),
            },
            canonical_memo: self.canonical_memo,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Args)]
pub struct IsoArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Look for a map onto the colour-swapped second position.
    #[arg(long)]
    pub swap: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PresetArgs {
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Check name, or `all`.
    pub target: String,
    /// Restrict theorem checks to one board size.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Also try to solve the two-K5 board outright; informational only.
    #[arg(long)]
    pub attempt_full_solve: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = service::DEFAULT_PORT)]
    pub port: u16,
}

/// A failure that ends the command with a specific exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl ToString) -> Exit {
        Exit { code: EXIT_USAGE, message: message.to_string() }
    }
}

impl From<SolveError> for Exit {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Exit { code, message: e.to_string() }
    }
}

type CmdResult = Result<i32, Exit>;

/// Parses `argv` (including the program name) and executes it.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Exit> {
    writeln!(out, "{value}").map_err(|e| Exit { code: EXIT_USAGE, message: e.to_string() })
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::BestMoves(a) => cmd_best_moves(&a, out),
        Command::Reply(a) => cmd_reply(&a, out),
        Command::Status(a) => cmd_status(&a, out),
        Command::Iso(a) => cmd_iso(&a, out),
        Command::Canon(a) => cmd_canon(&a, out),
        Command::Orbits(a) => cmd_orbits(&a, out),
        Command::Preset(a) => {
            let p = preset_position(&a.name, a.n, a.k)?;
            writeln!(out, "{}", position_to_json(&p)).map_err(Exit::usage)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Serve(a) => cmd_serve(&a),
    }
}

fn preset_position(name: &str, n: Option<usize>, k: Option<usize>) -> Result<Position, Exit> {
    let kind: PresetKind = name.parse().map_err(Exit::usage)?;
    let name = kind.with_params(n, k).map_err(Exit::usage)?;
    build_preset(name).map_err(Exit::usage)
}

fn read_file(path: &PathBuf) -> Result<Position, Exit> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Exit::usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?
    };
    parse_position(&text).map_err(|e| Exit::usage(format!("{}: {e}", path.display())))
}

fn load(src: &SourceArgs) -> Result<Position, Exit> {
    match (&src.file, &src.preset) {
        (Some(path), None) => {
            if src.n.is_some() || src.k.is_some() {
                return Err(Exit::usage("--n/--k only apply with --preset"));
            }
            read_file(path)
        }
        (None, Some(name)) => preset_position(name, src.n, src.k),
        _ => Err(Exit::usage("give exactly one of a position file or --preset")),
    }
}

fn pair(p: &Position, e: EdgeId) -> [usize; 2] {
    let (a, b) = p.tables().endpoints[e.index()];
    [a as usize, b as usize]
}

/// Terminal positions have a value without search.
fn terminal_value(p: &Position) -> Result<Option<GameValue>, Exit> {
    let status = p.status().map_err(Exit::usage)?;
    Ok(GameValue::from_status(status))
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(&a.source)?;
    let (value, stats) = match terminal_value(&p)? {
        Some(v) => (v, SolveStats::default()),
        None => {
            let start = Instant::now();
            let mut solver = Solver::new(a.budget.options());
            let v = solver.solve(&p)?;
            let mut stats = solver.stats();
            stats.elapsed = start.elapsed();
            (v, stats)
        }
    };
    emit(out, &json!({ "value": value, "stats": stats }))?;
    Ok(EXIT_OK)
}

fn cmd_best_moves(a: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(&a.source)?;
    let start = Instant::now();
    let mut solver = Solver::new(a.budget.options());
    let moves = solver.best_moves(&p)?;
    let value = solver.solve(&p)?;
    let mut stats = solver.stats();
    stats.elapsed = start.elapsed();
    let moves: Vec<_> = moves.iter().map(|&(e, v)| json!({ "edge": pair(&p, e), "value": v })).collect();
    emit(out, &json!({ "value": value, "to_move": p.player_to_move(), "moves": moves, "stats": stats }))?;
    Ok(EXIT_OK)
}

fn cmd_reply(a: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(&a.source)?;
    let start = Instant::now();
    let mut solver = Solver::new(a.budget.options());
    let e = solver.engine_reply(&p)?;
    let value = solver.solve(&p)?;
    let mut stats = solver.stats();
    stats.elapsed = start.elapsed();
    let after = p.apply_move(e).map_err(Exit::usage)?;
    emit(
        out,
        &json!({
            "edge": pair(&p, e),
            "color": p.player_to_move(),
            "value": value,
            "position": PositionDoc::from(&after),
            "stats": stats,
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_status(a: &SourceArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(a)?;
    let status: GameStatus = p.status().map_err(Exit::usage)?;
    emit(
        out,
        &json!({
            "status": status,
            "to_move": p.player_to_move(),
            "green": p.green().len(),
            "red": p.red().len(),
            "uncolored": p.uncolored().len(),
        }),
    )?;
    Ok(EXIT_OK)
}

/// Exit 1 when no map exists: the asserted isomorphism is false.
fn cmd_iso(a: &IsoArgs, out: &mut dyn Write) -> CmdResult {
    let p = read_file(&a.first)?;
    let q = read_file(&a.second)?;
    if p.n() != q.n() {
        return Err(Exit::usage(format!("board sizes differ: {} vs {}", p.n(), q.n())));
    }
    let witness = if a.swap { find_color_swap_isomorphism(&p, &q) } else { find_isomorphism(&p, &q) };
    let found = witness.is_some();
    emit(out, &json!({ "isomorphic": found, "swap": a.swap, "witness": witness }))?;
    Ok(if found { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_canon(a: &SourceArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(a)?;
    let key = canonical_key(&p).map_err(Exit::usage)?;
    emit(out, &json!({ "n": p.n(), "key": key.to_hex() }))?;
    Ok(EXIT_OK)
}

fn cmd_orbits(a: &SourceArgs, out: &mut dyn Write) -> CmdResult {
    let p = load(a)?;
    let orbits: Vec<Vec<[usize; 2]>> =
        uncolored_edge_orbits(&p).iter().map(|o| o.iter().map(|&e| pair(&p, e)).collect()).collect();
    emit(
        out,
        &json!({ "automorphisms": automorphism_group(&p).len(), "orbit_count": orbits.len(), "orbits": orbits }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let target: Target = a.target.parse().map_err(|e| Exit::usage(format!("{e}; expected one of {}", Target::NAMES.join(", "))))?;
    let reports = verify_target(target, a.n, a.budget.options()).map_err(Exit::usage)?;
    for r in &reports {
        let verdict = match (r.pass, r.budget_exceeded) {
            (true, _) => "PASS",
            (false, true) => "BUDGET",
            (false, false) => "FAIL",
        };
        let _ = writeln!(err, "{verdict} {} ({} ms)", r.name, r.stats.elapsed_ms);
        for c in r.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(err, "    {}: {}", c.name, c.detail);
        }
    }
    if a.attempt_full_solve {
        attempt_full_solve(&a.budget, err);
    }
    emit(out, &serde_json::to_value(&reports).expect("reports serialize"))?;
    Ok(verdict_code(&reports))
}

/// Any genuine failure outranks running out of budget.
fn verdict_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| !r.pass && !r.budget_exceeded) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.budget_exceeded) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

/// Straight search on the two-K5 board. Far beyond desk scale without a big
/// budget; the outcome is printed but never affects the exit code.
fn attempt_full_solve(budget: &BudgetArgs, err: &mut dyn Write) {
    let mut opts = budget.options();
    if budget.max_seconds.is_none() {
        opts.budget.max_time = Some(Duration::from_secs(60));
    }
    let p = build_preset(PresetName::Thm1 { k: 2 }).expect("thm1(2) builds");
    let mut solver = Solver::new(opts);
    let line = match solver.solve(&p) {
        Ok(v) => format!("full solve of thm1(2): {v}"),
        Err(e) => format!("full solve of thm1(2) abandoned: {e}"),
    };
    let _ = writeln!(err, "{line} ({} nodes)", solver.stats().nodes);
}

fn cmd_serve(a: &ServeArgs) -> CmdResult {
    let rt = tokio::runtime::Runtime::new().map_err(Exit::usage)?;
    rt.block_on(service::serve(a.port)).map_err(|e| Exit { code: EXIT_USAGE, message: format!("serve: {e}") })?;
    Ok(EXIT_OK)
}
