//! Stable and consistent arc sets of the prime implicant graph, and the
//! extremal trap spaces they induce.
//!
//! An arc set `A` is consistent when no two heads assign a variable opposite
//! values, and stable when every tail literal of every arc in `A` is the
//! head of some arc in `A`. The induced subspace of a consistent set is the
//! intersection of its heads; stable and consistent sets induce exactly the
//! trap spaces. Inclusion-maximal sets cover the minimal trap spaces and
//! inclusion-minimal non-empty sets cover the maximal ones.
//!
//! Enumeration follows the no-good-cut loop: find an inclusion-extremal
//! feasible set, record it, forbid all its subsets (maximal mode) or
//! supersets (minimal mode), repeat until infeasible.

mod engine;

use std::time::Duration;

use serde_json::{json, Map, Value};
use web_time::Instant;

use crate::error::{Error, Result};
use crate::expr::DEFAULT_SUPPORT_CAP;
use crate::primes::{Literal, PrimeImplicantGraph};
use crate::space::{BooleanNetwork, Subspace};
use engine::{neg, pos, Engine, Goal, Lit, Outcome};

pub const DEFAULT_SOLUTION_LIMIT: usize = 100_000;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub limit: usize,
    pub timeout: Option<Duration>,
    pub support_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            limit: DEFAULT_SOLUTION_LIMIT,
            timeout: Some(DEFAULT_TIMEOUT),
            support_cap: DEFAULT_SUPPORT_CAP,
        }
    }
}

/// Which inclusion-extremal arc sets to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremality {
    /// Inclusion-minimal non-empty sets (they induce the maximal trap spaces).
    Minimal,
    /// Inclusion-maximal sets (they induce the minimal trap spaces).
    Maximal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSetSolution {
    /// Sorted arc ids.
    pub arcs: Vec<usize>,
    pub induced: Subspace,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub solutions: Vec<ArcSetSolution>,
    /// False when the solution limit stopped the loop.
    pub complete: bool,
    pub iterations: usize,
    pub nodes: u64,
}

fn check_ids(g: &PrimeImplicantGraph, arcs: &[usize]) -> Result<()> {
    for &id in arcs {
        g.arc(id)?;
    }
    Ok(())
}

pub fn is_consistent(g: &PrimeImplicantGraph, arcs: &[usize]) -> Result<bool> {
    check_ids(g, arcs)?;
    let mut seen = vec![false; 2 * g.var_count()];
    for &id in arcs {
        seen[g.arc(id)?.head.index()] = true;
    }
    Ok((0..g.var_count()).all(|v| !(seen[2 * v] && seen[2 * v + 1])))
}

pub fn is_stable(g: &PrimeImplicantGraph, arcs: &[usize]) -> Result<bool> {
    check_ids(g, arcs)?;
    let mut headed = vec![false; 2 * g.var_count()];
    for &id in arcs {
        headed[g.arc(id)?.head.index()] = true;
    }
    Ok(arcs
        .iter()
        .all(|&id| g.arcs()[id - 1].tail.iter().all(|l| headed[l.index()])))
}

/// Intersection of the heads of a consistent arc set.
pub fn induced_subspace(g: &PrimeImplicantGraph, arcs: &[usize]) -> Result<Subspace> {
    check_ids(g, arcs)?;
    let mut p = Subspace::full(g.var_count());
    for &id in arcs {
        let head = g.arcs()[id - 1].head;
        match p.get(head.var) {
            Some(c) if c != head.value => return Err(Error::Inconsistent(head.var)),
            _ => p.set(head.var, Some(head.value)),
        }
    }
    Ok(p)
}

/// Clause form of the head-linking, stability and consistency constraints.
fn build_engine(g: &PrimeImplicantGraph, mode: Extremality, all_fixed: bool) -> Engine {
    let n = g.var_count();
    let heads: Vec<usize> = g.arcs().iter().map(|a| a.head.index()).collect();
    let mut e = Engine::new(heads, 2 * n);
    for (k, arc) in g.arcs().iter().enumerate() {
        let x = e.x(k);
        let mut literals: Vec<Literal> = arc.tail.clone();
        literals.push(arc.head);
        literals.sort();
        literals.dedup();
        // selecting an arc induces its head and requires its tail
        for l in &literals {
            e.add_clause(vec![neg(x), pos(e.y(l.index()))]);
        }
        if mode == Extremality::Maximal {
            // never optimal to leave out an arc all of whose literals are induced
            let mut clause: Vec<Lit> = literals.iter().map(|l| neg(e.y(l.index()))).collect();
            clause.push(pos(x));
            e.add_clause(clause);
        }
    }
    for v in 0..n {
        for value in [false, true] {
            let l = Literal::new(v, value);
            let mut clause = vec![neg(e.y(l.index()))];
            clause.extend(g.arcs_inducing(l).iter().map(|&id| pos(e.x(id - 1))));
            e.add_clause(clause);
        }
        let (y0, y1) = (e.y(2 * v), e.y(2 * v + 1));
        e.add_clause(vec![neg(y0), neg(y1)]);
        if all_fixed {
            e.add_clause(vec![pos(y0), pos(y1)]);
        }
    }
    if mode == Extremality::Minimal {
        e.add_clause((0..g.arcs().len()).map(|k| pos(e.x(k))).collect());
    }
    e
}

fn is_subset(small: &[usize], large: &[usize]) -> bool {
    small.iter().all(|id| large.binary_search(id).is_ok())
}

fn enumerate(
    g: &PrimeImplicantGraph,
    mode: Extremality,
    all_fixed: bool,
    options: &SolverOptions,
) -> Result<Enumeration> {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let mut engine = build_engine(g, mode, all_fixed);
    let goal = match mode {
        Extremality::Maximal => Goal::Maximize,
        Extremality::Minimal => Goal::Minimize,
    };
    let mut solutions: Vec<ArcSetSolution> = Vec::new();
    let mut iterations = 0;
    let complete = loop {
        if solutions.len() >= options.limit {
            break false;
        }
        iterations += 1;
        let x = match engine.solve(goal, deadline) {
            Outcome::Extremal(x) => x,
            Outcome::Infeasible => break true,
            Outcome::TimedOut => {
                return Err(Error::Timeout {
                    solutions: solutions.len(),
                })
            }
        };
        let arcs: Vec<usize> = (0..x.len()).filter(|&k| x[k]).map(|k| k + 1).collect();
        let cut: Vec<Lit> = match mode {
            Extremality::Maximal => (0..x.len())
                .filter(|&k| !x[k])
                .map(|k| pos(engine.x(k)))
                .collect(),
            Extremality::Minimal => (0..x.len())
                .filter(|&k| x[k])
                .map(|k| neg(engine.x(k)))
                .collect(),
        };
        engine.add_clause(cut);
        let induced = induced_subspace(g, &arcs)?;
        solutions.push(ArcSetSolution { arcs, induced });
    };
    solutions.sort_by(|a, b| {
        a.arcs
            .len()
            .cmp(&b.arcs.len())
            .then_with(|| a.arcs.cmp(&b.arcs))
    });
    for (i, a) in solutions.iter().enumerate() {
        for b in &solutions[..i] {
            assert!(
                !is_subset(&a.arcs, &b.arcs) && !is_subset(&b.arcs, &a.arcs),
                "cut loop produced comparable arc sets {:?} and {:?}",
                a.arcs,
                b.arcs
            );
        }
    }
    Ok(Enumeration {
        solutions,
        complete,
        iterations,
        nodes: engine.nodes,
    })
}

/// All inclusion-extremal stable and consistent arc sets, ordered by
/// cardinality with ties broken by smallest arc ids.
pub fn enumerate_extremal(
    g: &PrimeImplicantGraph,
    mode: Extremality,
    options: &SolverOptions,
) -> Result<Enumeration> {
    enumerate(g, mode, false, options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    Min,
    Max,
    Steady,
}

impl ReportMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportMode::Min => "min",
            ReportMode::Max => "max",
            ReportMode::Steady => "steady",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverStats {
    pub arcs: usize,
    pub iterations: usize,
    pub nodes: u64,
    pub elapsed: Duration,
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct TrapSpaceReport {
    pub mode: ReportMode,
    /// Pairwise incomparable, in canonical order.
    pub spaces: Vec<Subspace>,
    /// One witness arc set per space.
    pub witnesses: Vec<ArcSetSolution>,
    pub stats: SolverStats,
}

impl TrapSpaceReport {
    /// `{"mode":..,"spaces":[{"v1":0,..}],"witnesses":[[ids]],"stats":{..}}`,
    /// listing fixed variables only.
    pub fn to_json(&self, names: &[String]) -> Value {
        let spaces: Vec<Value> = self
            .spaces
            .iter()
            .map(|p| {
                let fixed: Map<String, Value> = p
                    .fixed_vars()
                    .map(|(v, c)| (names[v].clone(), json!(u8::from(c))))
                    .collect();
                Value::Object(fixed)
            })
            .collect();
        let witnesses: Vec<&Vec<usize>> = self.witnesses.iter().map(|w| &w.arcs).collect();
        json!({
            "mode": self.mode.as_str(),
            "spaces": spaces,
            "witnesses": witnesses,
            "stats": {
                "arcs": self.stats.arcs,
                "iterations": self.stats.iterations,
                "nodes": self.stats.nodes,
                "elapsed_ms": self.stats.elapsed.as_secs_f64() * 1e3,
                "complete": self.stats.complete,
            }
        })
    }
}

/// Deduplicate induced spaces (keeping the first witness in (size, ids)
/// order) and keep the spaces `keep` accepts, canonically sorted.
fn collect_spaces(
    mut solutions: Vec<ArcSetSolution>,
    keep: impl Fn(&Subspace, &[Subspace]) -> bool,
) -> (Vec<Subspace>, Vec<ArcSetSolution>) {
    solutions.sort_by(|a, b| {
        a.arcs
            .len()
            .cmp(&b.arcs.len())
            .then_with(|| a.arcs.cmp(&b.arcs))
    });
    let mut unique: Vec<ArcSetSolution> = Vec::new();
    for s in solutions {
        if !unique.iter().any(|u| u.induced == s.induced) {
            unique.push(s);
        }
    }
    let spaces: Vec<Subspace> = unique.iter().map(|s| s.induced.clone()).collect();
    let mut kept: Vec<ArcSetSolution> = unique
        .into_iter()
        .filter(|s| keep(&s.induced, &spaces))
        .collect();
    kept.sort_by(|a, b| a.induced.cmp(&b.induced));
    (kept.iter().map(|s| s.induced.clone()).collect(), kept)
}

fn report(
    g: &PrimeImplicantGraph,
    mode: ReportMode,
    started: Instant,
    enumeration: &Enumeration,
    spaces: Vec<Subspace>,
    witnesses: Vec<ArcSetSolution>,
) -> TrapSpaceReport {
    TrapSpaceReport {
        mode,
        spaces,
        witnesses,
        stats: SolverStats {
            arcs: g.arcs().len(),
            iterations: enumeration.iterations,
            nodes: enumeration.nodes,
            elapsed: started.elapsed(),
            complete: enumeration.complete,
        },
    }
}

/// Minimal trap spaces from an already built graph. The whole space is
/// returned when no proper trap space exists.
pub fn min_trap_spaces_of(
    g: &PrimeImplicantGraph,
    options: &SolverOptions,
) -> Result<TrapSpaceReport> {
    let started = Instant::now();
    let enumeration = enumerate_extremal(g, Extremality::Maximal, options)?;
    let (mut spaces, mut witnesses) = collect_spaces(enumeration.solutions.clone(), |p, all| {
        !all.iter().any(|q| q.lt(p))
    });
    if spaces.is_empty() {
        let whole = Subspace::full(g.var_count());
        spaces.push(whole.clone());
        witnesses.push(ArcSetSolution {
            arcs: Vec::new(),
            induced: whole,
        });
    }
    Ok(report(
        g,
        ReportMode::Min,
        started,
        &enumeration,
        spaces,
        witnesses,
    ))
}

/// Maximal trap spaces (strictly below the whole space) from a built graph.
pub fn max_trap_spaces_of(
    g: &PrimeImplicantGraph,
    options: &SolverOptions,
) -> Result<TrapSpaceReport> {
    let started = Instant::now();
    let enumeration = enumerate_extremal(g, Extremality::Minimal, options)?;
    let (spaces, witnesses) = collect_spaces(enumeration.solutions.clone(), |p, all| {
        !p.is_full() && !all.iter().any(|q| !q.is_full() && p.lt(q))
    });
    Ok(report(
        g,
        ReportMode::Max,
        started,
        &enumeration,
        spaces,
        witnesses,
    ))
}

/// Steady states as the solutions that fix every variable.
pub fn steady_states_of(
    g: &PrimeImplicantGraph,
    options: &SolverOptions,
) -> Result<TrapSpaceReport> {
    let started = Instant::now();
    let enumeration = enumerate(g, Extremality::Maximal, true, options)?;
    let (spaces, witnesses) = collect_spaces(enumeration.solutions.clone(), |_, _| true);
    Ok(report(
        g,
        ReportMode::Steady,
        started,
        &enumeration,
        spaces,
        witnesses,
    ))
}

pub fn min_trap_spaces(net: &BooleanNetwork, options: &SolverOptions) -> Result<TrapSpaceReport> {
    min_trap_spaces_of(
        &PrimeImplicantGraph::build(net, options.support_cap)?,
        options,
    )
}

pub fn max_trap_spaces(net: &BooleanNetwork, options: &SolverOptions) -> Result<TrapSpaceReport> {
    max_trap_spaces_of(
        &PrimeImplicantGraph::build(net, options.support_cap)?,
        options,
    )
}

pub fn steady_states(net: &BooleanNetwork, options: &SolverOptions) -> Result<TrapSpaceReport> {
    steady_states_of(
        &PrimeImplicantGraph::build(net, options.support_cap)?,
        options,
    )
}
