//! Explicit state transition graphs for small networks.
//!
//! States are integer codes with the first variable as the most significant
//! bit. State sets are sorted arrays of codes.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::{BooleanNetwork, Subspace};

pub const DEFAULT_SYNC_CAP: usize = 24;
pub const DEFAULT_ASYNC_CAP: usize = 20;
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    Synchronous,
    Asynchronous,
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateRule::Synchronous => "sync",
            UpdateRule::Asynchronous => "async",
        })
    }
}

#[derive(Debug, Clone)]
pub struct StateTransitionGraph {
    rule: UpdateRule,
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u64>,
}

impl StateTransitionGraph {
    /// Build the graph with the default caps (24 variables sync, 20 async).
    pub fn build(net: &BooleanNetwork, rule: UpdateRule) -> Result<Self> {
        let cap = match rule {
            UpdateRule::Synchronous => DEFAULT_SYNC_CAP,
            UpdateRule::Asynchronous => DEFAULT_ASYNC_CAP,
        };
        Self::build_capped(net, rule, cap)
    }

    pub fn build_capped(net: &BooleanNetwork, rule: UpdateRule, cap: usize) -> Result<Self> {
        let n = net.len();
        if n > cap.min(32) {
            return Err(Error::CapExceeded {
                what: "state transition graph",
                n,
                cap,
            });
        }
        let size = 1usize << n;
        let mut offsets = Vec::with_capacity(size + 1);
        let mut targets = Vec::with_capacity(size);
        offsets.push(0);
        for x in 0..size as u64 {
            let image = net.image_code(x);
            match rule {
                UpdateRule::Synchronous => targets.push(image),
                UpdateRule::Asynchronous => {
                    let diff = x ^ image;
                    if diff == 0 {
                        targets.push(x);
                    } else {
                        // one flipped bit at a time, ascending codes
                        let mut bits: Vec<u64> = (0..n)
                            .map(|b| 1u64 << b)
                            .filter(|b| diff & b != 0)
                            .collect();
                        bits.sort_by_key(|b| x ^ b);
                        targets.extend(bits.into_iter().map(|b| x ^ b));
                    }
                }
            }
            offsets.push(targets.len());
        }
        Ok(StateTransitionGraph {
            rule,
            n,
            offsets,
            targets,
        })
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn successors(&self, x: u64) -> &[u64] {
        let x = x as usize;
        &self.targets[self.offsets[x]..self.offsets[x + 1]]
    }

    /// Whether no transition leaves `states` (sorted codes).
    pub fn is_trap_set(&self, states: &[u64]) -> Result<bool> {
        if states.is_empty() {
            return Err(Error::EmptyStateSet);
        }
        Ok(states.iter().all(|&x| {
            self.successors(x)
                .iter()
                .all(|y| states.binary_search(y).is_ok())
        }))
    }

    /// Terminal strongly connected components, each sorted, ordered by smallest member.
    pub fn attractors(&self) -> Vec<Vec<u64>> {
        let components = tarjan(self);
        let mut component_of = vec![0usize; self.state_count()];
        for (c, members) in components.iter().enumerate() {
            for &x in members {
                component_of[x as usize] = c;
            }
        }
        let mut out: Vec<Vec<u64>> = components
            .into_iter()
            .enumerate()
            .filter(|(c, members)| {
                members.iter().all(|&x| {
                    self.successors(x)
                        .iter()
                        .all(|&y| component_of[y as usize] == *c)
                })
            })
            .map(|(_, mut members)| {
                members.sort_unstable();
                members
            })
            .collect();
        out.sort_by_key(|members| members[0]);
        out
    }
}

/// Iterative Tarjan over the explicit graph.
fn tarjan(g: &StateTransitionGraph) -> Vec<Vec<u64>> {
    const UNVISITED: u32 = u32::MAX;
    let size = g.state_count();
    let mut index = vec![UNVISITED; size];
    let mut low = vec![0u32; size];
    let mut on_stack = vec![false; size];
    let mut stack: Vec<u64> = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0u32;
    // (state, next successor position)
    let mut call: Vec<(u64, usize)> = Vec::new();
    for root in 0..size as u64 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (x, ref mut next)) = call.last_mut() {
            let succ = g.successors(x);
            if *next < succ.len() {
                let y = succ[*next];
                *next += 1;
                let yi = y as usize;
                if index[yi] == UNVISITED {
                    index[yi] = counter;
                    low[yi] = counter;
                    counter += 1;
                    stack.push(y);
                    on_stack[yi] = true;
                    call.push((y, 0));
                } else if on_stack[yi] {
                    low[x as usize] = low[x as usize].min(index[yi]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent as usize] = low[parent as usize].min(low[x as usize]);
            }
            if low[x as usize] == index[x as usize] {
                let mut members = Vec::new();
                loop {
                    let y = stack.pop().unwrap();
                    on_stack[y as usize] = false;
                    members.push(y);
                    if y == x {
                        break;
                    }
                }
                components.push(members);
            }
        }
    }
    components
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapSpaceFilter {
    All,
    Min,
    Max,
}

/// Every subspace in `S*`, in base-3 counting order.
pub fn all_subspaces(n: usize) -> impl Iterator<Item = Subspace> {
    (0..3usize.pow(n as u32)).map(move |mut k| {
        let mut p = Subspace::full(n);
        for i in (0..n).rev() {
            p.set(i, [None, Some(false), Some(true)][k % 3]);
            k /= 3;
        }
        p
    })
}

/// Trap spaces by testing all `3^n` subspaces with `F[p] <= p`.
pub fn brute_force_trap_spaces(
    net: &BooleanNetwork,
    filter: TrapSpaceFilter,
    n_cap: usize,
    support_cap: usize,
) -> Result<Vec<Subspace>> {
    let n = net.len();
    if n > n_cap {
        return Err(Error::CapExceeded {
            what: "brute-force trap space enumeration",
            n,
            cap: n_cap,
        });
    }
    let mut traps = Vec::new();
    for p in all_subspaces(n) {
        if net.is_trap_space(&p, support_cap)? {
            traps.push(p);
        }
    }
    let mut out = extremal_subspaces(traps, filter);
    out.sort();
    Ok(out)
}

/// Inclusion-extremal members of a set of subspaces. `Max` ignores the whole space.
pub fn extremal_subspaces(mut spaces: Vec<Subspace>, filter: TrapSpaceFilter) -> Vec<Subspace> {
    match filter {
        TrapSpaceFilter::All => spaces,
        TrapSpaceFilter::Min => {
            // anything below p has more fixed variables, so is seen first
            spaces.sort_by_key(|p| std::cmp::Reverse(p.fixed_count()));
            let mut minimal: Vec<Subspace> = Vec::new();
            for p in spaces {
                if !minimal.iter().any(|m| m.lt(&p)) {
                    minimal.push(p);
                }
            }
            minimal
        }
        TrapSpaceFilter::Max => {
            spaces.retain(|p| !p.is_full());
            spaces.sort_by_key(|p| p.fixed_count());
            let mut maximal: Vec<Subspace> = Vec::new();
            for p in spaces {
                if !maximal.iter().any(|m| p.lt(m)) {
                    maximal.push(p);
                }
            }
            maximal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::DEFAULT_SUPPORT_CAP as CAP;
    use crate::space::tests::running_example;

    fn code(text: &str) -> u64 {
        text.parse::<Subspace>().unwrap().state_code()
    }

    fn texts(spaces: &[Subspace]) -> Vec<String> {
        spaces.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn transitions_of_running_example() {
        let net = running_example();
        let sync = StateTransitionGraph::build(&net, UpdateRule::Synchronous).unwrap();
        assert_eq!(sync.successors(code("1101")), &[code("1101")]);
        let asy = StateTransitionGraph::build(&net, UpdateRule::Asynchronous).unwrap();
        assert_eq!(asy.successors(code("0000")), &[code("0001")]);
        assert_eq!(asy.successors(code("1101")), &[code("1101")]);
        // F(0110) = 1000 differs in v1, v2, v3
        assert_eq!(
            asy.successors(code("0110")),
            &[code("0010"), code("0100"), code("1110")]
        );
    }

    #[test]
    fn async_self_loops_exactly_at_steady_states() {
        let net = running_example();
        let asy = StateTransitionGraph::build(&net, UpdateRule::Asynchronous).unwrap();
        for x in 0..16u64 {
            let steady = net.image_code(x) == x;
            assert_eq!(asy.successors(x).contains(&x), steady);
            assert!(!asy.successors(x).is_empty());
        }
    }

    #[test]
    fn attractors_of_running_example() {
        let net = running_example();
        let asy = StateTransitionGraph::build(&net, UpdateRule::Asynchronous).unwrap();
        let attractors = asy.attractors();
        assert_eq!(attractors.len(), 2);
        let q: Subspace = "00--".parse().unwrap();
        assert!(attractors[0].len() > 1 && attractors[0].iter().all(|&x| q.contains_code(x)));
        assert_eq!(attractors[1], vec![code("1101")]);
    }

    #[test]
    fn attractors_of_small_networks() {
        let constant = BooleanNetwork::from_rules(&[("v1", "1")]).unwrap();
        let g = StateTransitionGraph::build(&constant, UpdateRule::Synchronous).unwrap();
        assert_eq!(g.attractors(), vec![vec![1]]);
        let cycle = BooleanNetwork::from_rules(&[("v1", "!v2"), ("v2", "v1")]).unwrap();
        let g = StateTransitionGraph::build(&cycle, UpdateRule::Synchronous).unwrap();
        assert_eq!(g.attractors(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn trap_set_examples() {
        let net = running_example();
        for rule in [UpdateRule::Synchronous, UpdateRule::Asynchronous] {
            let g = StateTransitionGraph::build(&net, rule).unwrap();
            let all: Vec<u64> = (0..16).collect();
            assert!(g.is_trap_set(&all).unwrap());
            let q: Subspace = "00--".parse().unwrap();
            assert!(g.is_trap_set(&q.referenced_states(24).unwrap()).unwrap());
            let r: Subspace = "--11".parse().unwrap();
            assert!(!g.is_trap_set(&r.referenced_states(24).unwrap()).unwrap());
            assert_eq!(g.is_trap_set(&[]), Err(Error::EmptyStateSet));
        }
    }

    #[test]
    fn brute_force_running_example() {
        let net = running_example();
        let all = brute_force_trap_spaces(&net, TrapSpaceFilter::All, 12, CAP).unwrap();
        assert_eq!(
            texts(&all),
            ["----", "00--", "1---", "1-0-", "1-01", "1101"]
        );
        let min = brute_force_trap_spaces(&net, TrapSpaceFilter::Min, 12, CAP).unwrap();
        assert_eq!(texts(&min), ["00--", "1101"]);
        let max = brute_force_trap_spaces(&net, TrapSpaceFilter::Max, 12, CAP).unwrap();
        assert_eq!(texts(&max), ["00--", "1---"]);
        assert!(brute_force_trap_spaces(&net, TrapSpaceFilter::All, 3, CAP).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let net = running_example();
        assert!(StateTransitionGraph::build_capped(&net, UpdateRule::Synchronous, 3).is_err());
    }
}
