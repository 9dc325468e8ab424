//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage, 2 input error, 3 resource limit or
//! incomplete enumeration, 4 `check` found a mismatch.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::analysis;
use crate::dynamics::{self, StateTransitionGraph, TrapSpaceFilter, UpdateRule};
use crate::encode;
use crate::error::Error;
use crate::expr::DEFAULT_SUPPORT_CAP;
use crate::io::{read_network, write_network};
use crate::primes::{Literal, PrimeImplicantGraph};
use crate::randgen::{self, GeneratorConfig};
use crate::solver::{self, Extremality, SolverOptions, TrapSpaceReport};
use crate::space::{BooleanNetwork, Subspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

/// Attractors with more members than this are printed without their member list.
const MEMBER_ELISION: usize = 64;

#[derive(Parser, Debug)]
#[command(name = "trapspace", version, about = "Trap spaces of Boolean networks")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Solver timeout in seconds (0 disables it).
    #[arg(long, global = true, default_value_t = solver::DEFAULT_TIMEOUT.as_secs_f64())]
    timeout: f64,
    /// Maximum number of solutions the solver enumerates.
    #[arg(long, global = true, default_value_t = solver::DEFAULT_SOLUTION_LIMIT)]
    limit: usize,
    /// Maximum number of variables a single update function may depend on.
    #[arg(long, global = true, default_value_t = DEFAULT_SUPPORT_CAP)]
    support_cap: usize,
    /// Maximum number of variables for state transition graphs and exhaustive checks.
    #[arg(long, global = true)]
    stg_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the prime implicant graph, one arc per line.
    Primes { file: PathBuf },
    /// Minimal, maximal or all trap spaces.
    Trapspaces {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SpaceMode::Min)]
        mode: SpaceMode,
    },
    /// Steady states.
    Steady { file: PathBuf },
    /// Attractors of the state transition graph.
    Attractors {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Update::Async)]
        update: Update,
    },
    /// Divide out the fixed variables of a trap space; prints a network file.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        space: String,
        /// Skip the trap space check.
        #[arg(long)]
        unchecked: bool,
    },
    /// Lower bound on the number of cyclic attractors.
    Bound { file: PathBuf },
    /// Steady states and cyclic attractors inside each maximal trap space (CSV).
    Commitment { file: PathBuf },
    /// Relate attractors to minimal trap spaces.
    Audit {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Update::Async)]
        update: Update,
    },
    /// Compare solver results with exhaustive enumeration.
    Check { file: PathBuf },
    /// Write a random network.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = randgen::DEFAULT_MEAN_DEGREE)]
        k: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = randgen::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time the solver on random networks (CSV).
    Bench {
        /// Network sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 50])]
        n: Vec<usize>,
        /// Networks per size.
        #[arg(long, default_value_t = 5)]
        reps: u64,
        #[arg(long, default_value_t = randgen::DEFAULT_MEAN_DEGREE)]
        k: f64,
        /// Seed of the first network; later networks use consecutive seeds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = randgen::DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip minimal trap spaces for sizes above this.
        #[arg(long)]
        min_up_to: Option<usize>,
    },
    /// Emit the arc-set problem for an external solver.
    Encode {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_enum, default_value_t = SpaceMode::Min)]
        mode: SpaceMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SpaceMode {
    Min,
    Max,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Update {
    Sync,
    Async,
}

impl From<Update> for UpdateRule {
    fn from(u: Update) -> Self {
        match u {
            Update::Sync => UpdateRule::Synchronous,
            Update::Async => UpdateRule::Asynchronous,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Asp,
    Ilp,
}

/// Failure of a command: an exit code and a message for the diagnostic stream.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Timeout { .. } | Error::CapExceeded { .. } | Error::SupportTooLarge { .. } => {
                EXIT_LIMIT
            }
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::from(Error::from(e))
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Run with process arguments on stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Run with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Context {
        global: &cli.global,
        out,
        err,
    };
    match ctx.dispatch(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

struct Context<'a> {
    global: &'a GlobalArgs,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn load(path: &Path) -> Result<BooleanNetwork, Failure> {
    Ok(read_network(path)?)
}

fn pattern_json(p: &Subspace, names: &[String]) -> Value {
    let fixed: Map<String, Value> = p
        .fixed_vars()
        .map(|(v, c)| (names[v].clone(), json!(u8::from(c))))
        .collect();
    Value::Object(fixed)
}

fn state_text(n: usize, code: u64) -> String {
    Subspace::from_state_code(n, code).to_string()
}

fn literal_json(l: Literal, names: &[String]) -> Value {
    json!({ "var": names[l.var], "value": u8::from(l.value) })
}

impl Context<'_> {
    fn options(&self) -> SolverOptions {
        let g = self.global;
        SolverOptions {
            limit: g.limit,
            timeout: (g.timeout > 0.0).then(|| Duration::from_secs_f64(g.timeout)),
            support_cap: g.support_cap,
        }
    }

    fn stg_cap(&self, rule: UpdateRule) -> usize {
        self.global.stg_cap.unwrap_or(match rule {
            UpdateRule::Synchronous => dynamics::DEFAULT_SYNC_CAP,
            UpdateRule::Asynchronous => dynamics::DEFAULT_ASYNC_CAP,
        })
    }

    fn brute_cap(&self) -> usize {
        self.global
            .stg_cap
            .unwrap_or(dynamics::DEFAULT_BRUTE_FORCE_CAP)
    }

    fn json(&mut self, value: &Value) -> std::io::Result<()> {
        writeln!(
            self.out,
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        )
    }

    fn dispatch(&mut self, command: &Command) -> Outcome {
        match command {
            Command::Primes { file } => self.primes(&load(file)?),
            Command::Trapspaces { file, mode } => self.trapspaces(&load(file)?, *mode),
            Command::Steady { file } => {
                let net = load(file)?;
                let report = solver::steady_states(&net, &self.options())?;
                self.report(&net, &report)
            }
            Command::Attractors { file, update } => self.attractors(&load(file)?, (*update).into()),
            Command::Reduce {
                file,
                space,
                unchecked,
            } => self.reduce(&load(file)?, space, !unchecked),
            Command::Bound { file } => self.bound(&load(file)?),
            Command::Commitment { file } => self.commitment(&load(file)?),
            Command::Audit { file, update } => self.audit(&load(file)?, (*update).into()),
            Command::Check { file } => self.check(&load(file)?),
            Command::Random {
                n,
                k,
                seed,
                degree_cap,
                output,
            } => {
                let config = GeneratorConfig {
                    n: *n,
                    k: *k,
                    seed: *seed,
                    degree_cap: *degree_cap,
                };
                let text = write_network(&randgen::generate(&config)?);
                self.emit(&text, output.as_deref())
            }
            Command::Bench {
                n,
                reps,
                k,
                seed,
                degree_cap,
                jobs,
                min_up_to,
            } => self.bench(n, *reps, *k, *seed, *degree_cap, *jobs, *min_up_to),
            Command::Encode {
                file,
                format,
                mode,
                output,
            } => {
                let net = load(file)?;
                let g = PrimeImplicantGraph::build(&net, self.global.support_cap)?;
                let mode = match mode {
                    SpaceMode::Min => Extremality::Minimal,
                    SpaceMode::Max => Extremality::Maximal,
                    SpaceMode::All => {
                        return Err(Failure {
                            code: EXIT_USAGE,
                            message: "encode supports --mode min or max".into(),
                        })
                    }
                };
                let text = match format {
                    Format::Asp => encode::emit_asp(&g, mode),
                    Format::Ilp => encode::emit_ilp(&g, mode),
                };
                self.emit(&text, output.as_deref())
            }
        }
    }

    fn emit(&mut self, text: &str, output: Option<&Path>) -> Outcome {
        match output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
            None => self.out.write_all(text.as_bytes())?,
        }
        Ok(EXIT_OK)
    }

    fn primes(&mut self, net: &BooleanNetwork) -> Outcome {
        let g = PrimeImplicantGraph::build(net, self.global.support_cap)?;
        if self.global.json {
            let names = g.names();
            let arcs: Vec<Value> = g
                .arcs()
                .iter()
                .map(|a| {
                    json!({
                        "id": a.id,
                        "tail": a.tail.iter().map(|&l| literal_json(l, names)).collect::<Vec<_>>(),
                        "head": literal_json(a.head, names),
                    })
                })
                .collect();
            self.json(&json!({ "arcs": arcs }))?;
        } else {
            for arc in g.arcs() {
                writeln!(self.out, "{}", g.display_arc(arc))?;
            }
        }
        Ok(EXIT_OK)
    }

    /// Print a solver report; incomplete enumerations exit with the resource code.
    fn report(&mut self, net: &BooleanNetwork, report: &TrapSpaceReport) -> Outcome {
        if self.global.json {
            self.json(&report.to_json(net.names()))?;
        } else {
            for p in &report.spaces {
                writeln!(self.out, "{p}")?;
            }
        }
        if !report.stats.complete {
            writeln!(
                self.err,
                "warning: solution limit {} reached; the list above may be incomplete",
                self.global.limit
            )?;
            return Ok(EXIT_LIMIT);
        }
        Ok(EXIT_OK)
    }

    fn trapspaces(&mut self, net: &BooleanNetwork, mode: SpaceMode) -> Outcome {
        let options = self.options();
        match mode {
            SpaceMode::Min => {
                let report = solver::min_trap_spaces(net, &options)?;
                if report.spaces.len() == 1 && report.spaces[0].is_full() {
                    writeln!(
                        self.err,
                        "note: the network has no proper trap space; the whole space is its unique minimal trap space"
                    )?;
                }
                self.report(net, &report)
            }
            SpaceMode::Max => {
                let report = solver::max_trap_spaces(net, &options)?;
                if report.spaces.is_empty() {
                    writeln!(self.err, "note: the network has no proper trap space")?;
                }
                self.report(net, &report)
            }
            SpaceMode::All => {
                let spaces = dynamics::brute_force_trap_spaces(
                    net,
                    TrapSpaceFilter::All,
                    self.brute_cap(),
                    self.global.support_cap,
                )?;
                if self.global.json {
                    let list: Vec<Value> = spaces
                        .iter()
                        .map(|p| pattern_json(p, net.names()))
                        .collect();
                    self.json(&json!({ "mode": "all", "spaces": list }))?;
                } else {
                    for p in &spaces {
                        writeln!(self.out, "{p}")?;
                    }
                }
                Ok(EXIT_OK)
            }
        }
    }

    fn attractors(&mut self, net: &BooleanNetwork, rule: UpdateRule) -> Outcome {
        let stg = StateTransitionGraph::build_capped(net, rule, self.stg_cap(rule))?;
        let n = net.len();
        let attractors = stg.attractors();
        if self.global.json {
            let list: Vec<Value> = attractors
                .iter()
                .map(|a| {
                    let hull = Subspace::enclosing_codes(n, a).expect("attractors are non-empty");
                    json!({
                        "size": a.len(),
                        "enclosing": hull.to_string(),
                        "states": a.iter().map(|&x| state_text(n, x)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            self.json(&json!({ "update": rule.to_string(), "attractors": list }))?;
        } else {
            for a in &attractors {
                let hull = Subspace::enclosing_codes(n, a).expect("attractors are non-empty");
                let members = if a.len() > MEMBER_ELISION {
                    "...".to_string()
                } else {
                    a.iter()
                        .map(|&x| state_text(n, x))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                writeln!(self.out, "{} {} {}", a.len(), hull, members)?;
            }
        }
        Ok(EXIT_OK)
    }

    fn reduce(&mut self, net: &BooleanNetwork, pattern: &str, checked: bool) -> Outcome {
        let p = net.subspace(pattern)?;
        let reduced = analysis::reduce(net, &p, checked, self.global.support_cap)?;
        if self.global.json {
            let functions: Map<String, Value> = reduced
                .network
                .names()
                .iter()
                .zip(reduced.network.functions())
                .map(|(name, f)| {
                    (
                        name.clone(),
                        json!(f.display(reduced.network.names()).to_string()),
                    )
                })
                .collect();
            self.json(&json!({
                "space": p.to_string(),
                "fixed": pattern_json(&p, net.names()),
                "functions": functions,
            }))?;
        } else {
            self.out
                .write_all(write_network(&reduced.network).as_bytes())?;
        }
        Ok(EXIT_OK)
    }

    fn bound(&mut self, net: &BooleanNetwork) -> Outcome {
        let bound = analysis::cyclic_attractor_lower_bound(net, &self.options())?;
        let names = net.names();
        if self.global.json {
            let witnesses: Vec<Value> = bound
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "space": w.space.to_string(),
                        "free": w.free.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            self.json(&json!({ "bound": bound.count, "witnesses": witnesses }))?;
        } else {
            writeln!(self.out, "{}", bound.count)?;
            for w in &bound.witnesses {
                let free: Vec<&str> = w.free.iter().map(|&v| names[v].as_str()).collect();
                writeln!(
                    self.out,
                    "{} oscillating among: {}",
                    w.space,
                    free.join(" ")
                )?;
            }
        }
        Ok(EXIT_OK)
    }

    fn commitment(&mut self, net: &BooleanNetwork) -> Outcome {
        let cap = self.global.stg_cap.unwrap_or(dynamics::DEFAULT_ASYNC_CAP);
        let columns = analysis::commitment_table(net, &self.options(), cap)?;
        if self.global.json {
            let list: Vec<Value> = columns
                .iter()
                .map(|c| {
                    json!({
                        "space": c.space.to_string(),
                        "steady": c.steady,
                        "sync_cyclic": c.sync_cyclic,
                        "async_cyclic": c.async_cyclic,
                    })
                })
                .collect();
            self.json(&json!({ "columns": list }))?;
        } else {
            self.out
                .write_all(analysis::commitment_csv(net, &columns).as_bytes())?;
        }
        Ok(EXIT_OK)
    }

    fn audit(&mut self, net: &BooleanNetwork, rule: UpdateRule) -> Outcome {
        let audit =
            analysis::attractor_trapspace_audit(net, rule, &self.options(), self.stg_cap(rule))?;
        let n = net.len();
        if self.global.json {
            let spaces: Vec<Value> = audit
                .spaces
                .iter()
                .map(|s| {
                    json!({
                        "space": s.space.to_string(),
                        "attractors": s.attractors.iter().map(|(a, fills)| json!({
                            "size": a.len(),
                            "fills_space": fills,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let outside: Vec<Value> = audit
                .outside
                .iter()
                .map(|a| json!({ "size": a.len(), "first": state_text(n, a[0]) }))
                .collect();
            self.json(
                &json!({ "update": rule.to_string(), "spaces": spaces, "outside": outside }),
            )?;
        } else {
            for s in &audit.spaces {
                let filling = s.attractors.iter().filter(|(_, f)| *f).count();
                writeln!(
                    self.out,
                    "{} attractors={} filling={}",
                    s.space,
                    s.attractors.len(),
                    filling
                )?;
            }
            writeln!(self.out, "outside={}", audit.outside.len())?;
        }
        Ok(EXIT_OK)
    }

    fn check(&mut self, net: &BooleanNetwork) -> Outcome {
        let options = self.options();
        let cap = self.brute_cap();
        let sc = self.global.support_cap;
        let g = PrimeImplicantGraph::build(net, sc)?;
        let brute_min = dynamics::brute_force_trap_spaces(net, TrapSpaceFilter::Min, cap, sc)?;
        let brute_max = dynamics::brute_force_trap_spaces(net, TrapSpaceFilter::Max, cap, sc)?;
        let brute_steady: Vec<Subspace> =
            brute_min.iter().filter(|p| p.is_state()).cloned().collect();
        let cases = [
            ("min", solver::min_trap_spaces_of(&g, &options)?, brute_min),
            ("max", solver::max_trap_spaces_of(&g, &options)?, brute_max),
            (
                "steady",
                solver::steady_states_of(&g, &options)?,
                brute_steady,
            ),
        ];
        let mut mismatches = Vec::new();
        for (name, report, expected) in &cases {
            if !report.stats.complete {
                writeln!(
                    self.err,
                    "warning: {name} enumeration hit the solution limit"
                )?;
                return Ok(EXIT_LIMIT);
            }
            if &report.spaces != expected {
                mismatches.push(format!(
                    "{name}: solver [{}] vs exhaustive [{}]",
                    join(&report.spaces),
                    join(expected)
                ));
            }
        }
        if self.global.json {
            self.json(&json!({ "ok": mismatches.is_empty(), "mismatches": mismatches }))?;
        } else if mismatches.is_empty() {
            writeln!(self.out, "OK")?;
        } else {
            for m in &mismatches {
                writeln!(self.out, "MISMATCH {m}")?;
            }
        }
        Ok(if mismatches.is_empty() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn bench(
        &mut self,
        sizes: &[usize],
        reps: u64,
        k: f64,
        seed: u64,
        degree_cap: usize,
        jobs: usize,
        min_up_to: Option<usize>,
    ) -> Outcome {
        let options = self.options();
        let support_cap = self.global.support_cap;
        let tasks: Vec<GeneratorConfig> = sizes
            .iter()
            .flat_map(|&n| {
                (0..reps).map(move |r| GeneratorConfig {
                    n,
                    k,
                    seed: seed + r,
                    degree_cap,
                })
            })
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?;
        let rows: Vec<Result<BenchRow, Error>> = pool.install(|| {
            tasks
                .par_iter()
                .map(|config| bench_one(config, &options, support_cap, min_up_to))
                .collect()
        });
        writeln!(
            self.out,
            "{}",
            BENCH_HEADER_COMMENT.replace("{cap}", &degree_cap.to_string())
        )?;
        writeln!(self.out, "{}", BENCH_COLUMNS)?;
        let mut code = EXIT_OK;
        for row in rows {
            let row = row?;
            if row.status() != "ok" {
                code = EXIT_LIMIT;
            }
            writeln!(self.out, "{}", row.csv())?;
        }
        Ok(code)
    }
}

fn join(spaces: &[Subspace]) -> String {
    spaces
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub const BENCH_HEADER_COMMENT: &str =
    "# in-degree ~ Poisson(k) clamped to [1, min({cap}, n)]; regulators drawn without replacement";
pub const BENCH_COLUMNS: &str =
    "n,seed,arcs,min_ts,max_ts,mean_fixed_min,mean_fixed_max,ms_min,ms_max,status";

/// Result of one solver run in a benchmark row.
enum Measure {
    Done {
        count: usize,
        mean_fixed: f64,
        ms: f64,
        complete: bool,
    },
    TimedOut,
    Skipped,
}

impl Measure {
    fn of(result: Result<TrapSpaceReport, Error>, started: Instant) -> Result<Measure, Error> {
        match result {
            Ok(report) => {
                let count = report.spaces.len();
                let fixed: usize = report.spaces.iter().map(|p| p.fixed_count()).sum();
                Ok(Measure::Done {
                    count,
                    mean_fixed: if count == 0 {
                        0.0
                    } else {
                        fixed as f64 / count as f64
                    },
                    ms: started.elapsed().as_secs_f64() * 1e3,
                    complete: report.stats.complete,
                })
            }
            Err(Error::Timeout { .. }) => Ok(Measure::TimedOut),
            Err(e) => Err(e),
        }
    }

    fn cells(&self) -> [String; 3] {
        match self {
            Measure::Done {
                count,
                mean_fixed,
                ms,
                ..
            } => [
                count.to_string(),
                format!("{mean_fixed:.3}"),
                format!("{ms:.1}"),
            ],
            Measure::TimedOut | Measure::Skipped => ["NA".into(), "NA".into(), "NA".into()],
        }
    }
}

struct BenchRow {
    n: usize,
    seed: u64,
    arcs: usize,
    min: Measure,
    max: Measure,
}

impl BenchRow {
    fn status(&self) -> &'static str {
        let runs = [&self.min, &self.max];
        if runs.iter().any(|m| matches!(m, Measure::TimedOut)) {
            "timeout"
        } else if runs.iter().any(|m| {
            matches!(
                m,
                Measure::Done {
                    complete: false,
                    ..
                }
            )
        }) {
            "incomplete"
        } else {
            "ok"
        }
    }

    fn csv(&self) -> String {
        let [min_count, min_fixed, min_ms] = self.min.cells();
        let [max_count, max_fixed, max_ms] = self.max.cells();
        format!(
            "{},{},{},{min_count},{max_count},{min_fixed},{max_fixed},{min_ms},{max_ms},{}",
            self.n,
            self.seed,
            self.arcs,
            self.status()
        )
    }
}

fn bench_one(
    config: &GeneratorConfig,
    options: &SolverOptions,
    support_cap: usize,
    min_up_to: Option<usize>,
) -> Result<BenchRow, Error> {
    let net = randgen::generate(config)?;
    let g = PrimeImplicantGraph::build(&net, support_cap)?;
    let started = Instant::now();
    let max = Measure::of(solver::max_trap_spaces_of(&g, options), started)?;
    let min = if min_up_to.is_none_or(|cap| config.n <= cap) {
        let started = Instant::now();
        Measure::of(solver::min_trap_spaces_of(&g, options), started)?
    } else {
        Measure::Skipped
    };
    Ok(BenchRow {
        n: config.n,
        seed: config.seed,
        arcs: g.arcs().len(),
        min,
        max,
    })
}
