//! Model reduction and attractor reasoning built on trap spaces.

use crate::dynamics::{StateTransitionGraph, UpdateRule};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::solver::{self, SolverOptions};
use crate::space::{BooleanNetwork, Subspace};

/// A network with the fixed variables of a subspace divided out.
#[derive(Debug, Clone)]
pub struct ReducedNetwork {
    pub fixing: Subspace,
    pub network: BooleanNetwork,
    /// Parent index of each reduced variable.
    pub parent_index: Vec<usize>,
}

impl ReducedNetwork {
    /// Parent state code of a reduced state code.
    pub fn embed_code(&self, reduced: u64) -> u64 {
        let m = self.parent_index.len();
        let n = self.fixing.len();
        let mut code = self.fixing.state_code();
        for (j, &i) in self.parent_index.iter().enumerate() {
            if (reduced >> (m - 1 - j)) & 1 == 1 {
                code |= 1 << (n - 1 - i);
            }
        }
        code
    }
}

/// Restrict every free variable's function by `p` and drop the fixed variables.
/// With `checked`, `p` must be a trap space.
pub fn reduce(
    net: &BooleanNetwork,
    p: &Subspace,
    checked: bool,
    support_cap: usize,
) -> Result<ReducedNetwork> {
    if p.len() != net.len() {
        return Err(Error::DimensionMismatch {
            expected: net.len(),
            got: p.len(),
        });
    }
    if checked && !net.is_trap_space(p, support_cap)? {
        return Err(Error::NotATrapSpace(p.to_string()));
    }
    let parent_index: Vec<usize> = p.free_vars().collect();
    if parent_index.is_empty() {
        return Err(Error::EmptyReduction(p.to_string()));
    }
    let mut reindex = vec![usize::MAX; net.len()];
    for (j, &i) in parent_index.iter().enumerate() {
        reindex[i] = j;
    }
    let names = parent_index
        .iter()
        .map(|&i| net.names()[i].clone())
        .collect();
    let functions = parent_index
        .iter()
        .map(|&i| renumber(&net.functions()[i].restrict(p), &reindex))
        .collect();
    Ok(ReducedNetwork {
        fixing: p.clone(),
        network: BooleanNetwork::new(names, functions)?,
        parent_index,
    })
}

fn renumber(e: &Expr, reindex: &[usize]) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(*c),
        Expr::Var(i) => Expr::Var(reindex[*i]),
        Expr::Not(c) => Expr::not(renumber(c, reindex)),
        Expr::And(cs) => Expr::And(cs.iter().map(|c| renumber(c, reindex)).collect()),
        Expr::Or(cs) => Expr::Or(cs.iter().map(|c| renumber(c, reindex)).collect()),
    }
}

#[derive(Debug, Clone)]
pub struct LowerBoundWitness {
    pub space: Subspace,
    /// Variables of which at least one oscillates in every attractor inside `space`.
    pub free: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CyclicLowerBound {
    pub count: usize,
    pub witnesses: Vec<LowerBoundWitness>,
}

/// Minimal trap spaces that are not steady states; each holds only cyclic attractors.
pub fn cyclic_attractor_lower_bound(
    net: &BooleanNetwork,
    options: &SolverOptions,
) -> Result<CyclicLowerBound> {
    let min = solver::min_trap_spaces(net, options)?;
    let witnesses: Vec<LowerBoundWitness> = min
        .spaces
        .into_iter()
        .filter(|p| !p.is_state())
        .map(|p| LowerBoundWitness {
            free: p.free_vars().collect(),
            space: p,
        })
        .collect();
    Ok(CyclicLowerBound {
        count: witnesses.len(),
        witnesses,
    })
}

/// Whether attractor `a` (state codes) lies inside `p`.
fn inside(a: &[u64], p: &Subspace) -> bool {
    Subspace::enclosing_codes(p.len(), a).is_ok_and(|hull| hull.leq(p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitmentColumn {
    pub space: Subspace,
    pub steady: usize,
    /// `None` when the graph exceeds the state cap.
    pub sync_cyclic: Option<usize>,
    pub async_cyclic: Option<usize>,
}

/// Steady states and cyclic attractors inside each maximal trap space.
pub fn commitment_table(
    net: &BooleanNetwork,
    options: &SolverOptions,
    stg_cap: usize,
) -> Result<Vec<CommitmentColumn>> {
    let max = solver::max_trap_spaces(net, options)?;
    let steady = solver::steady_states(net, options)?;
    let cyclic_for = |rule: UpdateRule| -> Result<Option<Vec<Vec<u64>>>> {
        match StateTransitionGraph::build_capped(net, rule, stg_cap) {
            Ok(g) => Ok(Some(
                g.attractors().into_iter().filter(|a| a.len() > 1).collect(),
            )),
            Err(Error::CapExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let sync = cyclic_for(UpdateRule::Synchronous)?;
    let asy = cyclic_for(UpdateRule::Asynchronous)?;
    let count = |attractors: &Option<Vec<Vec<u64>>>, p: &Subspace| {
        attractors
            .as_ref()
            .map(|list| list.iter().filter(|a| inside(a, p)).count())
    };
    Ok(max
        .spaces
        .into_iter()
        .map(|p| CommitmentColumn {
            steady: steady.spaces.iter().filter(|x| x.leq(&p)).count(),
            sync_cyclic: count(&sync, &p),
            async_cyclic: count(&asy, &p),
            space: p,
        })
        .collect())
}

/// Table layout: one row per count kind, one column per maximal trap space.
pub fn commitment_csv(net: &BooleanNetwork, columns: &[CommitmentColumn]) -> String {
    let mut out = String::from("row");
    for c in columns {
        let fixed: Vec<String> = c
            .space
            .fixed_vars()
            .map(|(v, b)| format!("{}={}", net.names()[v], u8::from(b)))
            .collect();
        out.push_str(&format!(",{}", fixed.join(" ")));
    }
    out.push('\n');
    let cell = |v: Option<usize>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
    let rows = [
        (
            "steady",
            columns
                .iter()
                .map(|c| c.steady.to_string())
                .collect::<Vec<_>>(),
        ),
        (
            "sync_cyclic",
            columns.iter().map(|c| cell(c.sync_cyclic)).collect(),
        ),
        (
            "async_cyclic",
            columns.iter().map(|c| cell(c.async_cyclic)).collect(),
        ),
    ];
    for (name, cells) in rows {
        out.push_str(name);
        for value in cells {
            out.push(',');
            out.push_str(&value);
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct SpaceAudit {
    pub space: Subspace,
    /// Attractors inside the space, with whether their enclosing subspace equals it.
    pub attractors: Vec<(Vec<u64>, bool)>,
}

#[derive(Debug, Clone)]
pub struct AttractorAudit {
    pub rule: UpdateRule,
    pub spaces: Vec<SpaceAudit>,
    /// Attractors outside every minimal trap space.
    pub outside: Vec<Vec<u64>>,
}

/// Relate the attractors of one update rule to the minimal trap spaces.
pub fn attractor_trapspace_audit(
    net: &BooleanNetwork,
    rule: UpdateRule,
    options: &SolverOptions,
    stg_cap: usize,
) -> Result<AttractorAudit> {
    let min = solver::min_trap_spaces(net, options)?;
    let g = StateTransitionGraph::build_capped(net, rule, stg_cap)?;
    let attractors = g.attractors();
    let n = net.len();
    let spaces = min
        .spaces
        .iter()
        .map(|p| SpaceAudit {
            space: p.clone(),
            attractors: attractors
                .iter()
                .filter(|a| inside(a, p))
                .map(|a| {
                    (
                        a.clone(),
                        Subspace::enclosing_codes(n, a).is_ok_and(|h| &h == p),
                    )
                })
                .collect(),
        })
        .collect();
    let outside = attractors
        .iter()
        .filter(|a| !min.spaces.iter().any(|p| inside(a, p)))
        .cloned()
        .collect();
    Ok(AttractorAudit {
        rule,
        spaces,
        outside,
    })
}
