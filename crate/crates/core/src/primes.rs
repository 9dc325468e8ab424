//! Prime implicants and the prime implicant graph.
//!
//! A `c`-prime implicant of `f` is a maximal subspace on which `f` is the
//! constant `c`. Each one becomes a hyperarc whose tail is the set of
//! literals of the implicant and whose head is the literal `(target, c)`.
//! Constant functions get a single self-referential arc `{(v, c)} -> (v, c)`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{essential_positions, Expr};
use crate::space::{BooleanNetwork, Subspace};

/// A single-variable assignment, a node of the prime implicant graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub value: bool,
}

impl Literal {
    pub fn new(var: usize, value: bool) -> Self {
        Literal { var, value }
    }

    /// Dense index `2 * var + value`.
    pub fn index(self) -> usize {
        2 * self.var + usize::from(self.value)
    }

    pub fn negated(self) -> Self {
        Literal::new(self.var, !self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeImplicant {
    pub subspace: Subspace,
    pub value: bool,
    pub target: usize,
}

/// Cube over the positions of a support: `free` bits are don't-cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Cube {
    free: u32,
    bits: u32,
}

/// Quine-McCluskey merging of the rows of `table` equal to `c` into prime cubes.
fn prime_cubes(table: &[bool], k: usize, c: bool) -> Vec<Cube> {
    let mut level: Vec<Cube> = (0..table.len())
        .filter(|&r| table[r] == c)
        .map(|r| Cube {
            free: 0,
            bits: r as u32,
        })
        .collect();
    let mut primes = Vec::new();
    while !level.is_empty() {
        let present: HashSet<Cube> = level.iter().copied().collect();
        let mut merged: HashSet<Cube> = HashSet::new();
        let mut next: HashSet<Cube> = HashSet::new();
        for cube in &level {
            for j in 0..k {
                let bit = 1u32 << j;
                if cube.free & bit != 0 {
                    continue;
                }
                let partner = Cube {
                    free: cube.free,
                    bits: cube.bits ^ bit,
                };
                if present.contains(&partner) {
                    merged.insert(*cube);
                    next.insert(Cube {
                        free: cube.free | bit,
                        bits: cube.bits & !bit,
                    });
                }
            }
        }
        primes.extend(level.iter().filter(|c| !merged.contains(c)).copied());
        level = next.into_iter().collect();
    }
    primes
}

/// All `c`-prime implicants of `f`, the update function of `target` in a
/// network of `len` variables, sorted by their literal sequence.
pub fn c_prime_implicants(
    f: &Expr,
    c: bool,
    target: usize,
    len: usize,
    cap: usize,
) -> Result<Vec<PrimeImplicant>> {
    let syntactic = f.support();
    if syntactic.len() > cap {
        return Err(Error::SupportTooLarge {
            support: syntactic.len(),
            cap,
        });
    }
    let full_table = f.truth_table(&syntactic);
    let essential: Vec<usize> = essential_positions(&full_table, syntactic.len())
        .into_iter()
        .map(|j| syntactic[j])
        .collect();
    if essential.is_empty() {
        return Ok(if full_table[0] == c {
            vec![PrimeImplicant {
                subspace: Subspace::full(len).with(target, Some(c)),
                value: c,
                target,
            }]
        } else {
            Vec::new()
        });
    }
    let table = f.truth_table(&essential);
    let mut out: Vec<PrimeImplicant> = prime_cubes(&table, essential.len(), c)
        .into_iter()
        .map(|cube| {
            let mut p = Subspace::full(len);
            for (j, &v) in essential.iter().enumerate() {
                if cube.free >> j & 1 == 0 {
                    p.set(v, Some(cube.bits >> j & 1 == 1));
                }
            }
            PrimeImplicant {
                subspace: p,
                value: c,
                target,
            }
        })
        .collect();
    out.sort_by_key(|pi| literals_of(&pi.subspace));
    Ok(out)
}

fn literals_of(p: &Subspace) -> Vec<Literal> {
    p.fixed_vars().map(|(v, c)| Literal::new(v, c)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperArc {
    /// 1-based position in the canonical arc order.
    pub id: usize,
    /// Sorted by variable, pairwise distinct variables, never empty.
    pub tail: Vec<Literal>,
    pub head: Literal,
}

impl HyperArc {
    pub fn tail_subspace(&self, len: usize) -> Subspace {
        let mut p = Subspace::full(len);
        for l in &self.tail {
            p.set(l.var, Some(l.value));
        }
        p
    }

    /// Canonical order: target ascending, value 1 before 0, then tails lexicographically.
    fn canonical_cmp(&self, other: &HyperArc) -> Ordering {
        self.head
            .var
            .cmp(&other.head.var)
            .then(other.head.value.cmp(&self.head.value))
            .then_with(|| self.tail.cmp(&other.tail))
    }
}

#[derive(Debug, Clone)]
pub struct PrimeImplicantGraph {
    names: Vec<String>,
    arcs: Vec<HyperArc>,
    by_head: Vec<Vec<usize>>,
}

impl PrimeImplicantGraph {
    /// Enumerate the prime implicants of every function and assign arc ids.
    pub fn build(net: &BooleanNetwork, cap: usize) -> Result<Self> {
        let len = net.len();
        let primes_of = |(i, f): (usize, &Expr)| -> Result<Vec<PrimeImplicant>> {
            let mut arcs = c_prime_implicants(f, true, i, len, cap)?;
            arcs.extend(c_prime_implicants(f, false, i, len, cap)?);
            Ok(arcs)
        };
        #[cfg(feature = "parallel")]
        let per_function = net
            .functions()
            .par_iter()
            .enumerate()
            .map(primes_of)
            .collect::<Result<Vec<_>>>()?;
        #[cfg(not(feature = "parallel"))]
        let per_function = net
            .functions()
            .iter()
            .enumerate()
            .map(primes_of)
            .collect::<Result<Vec<_>>>()?;
        let mut arcs: Vec<HyperArc> = per_function
            .into_iter()
            .flatten()
            .map(|pi| HyperArc {
                id: 0,
                tail: literals_of(&pi.subspace),
                head: Literal::new(pi.target, pi.value),
            })
            .collect();
        arcs.sort_by(HyperArc::canonical_cmp);
        let mut by_head = vec![Vec::new(); 2 * len];
        for (k, arc) in arcs.iter_mut().enumerate() {
            arc.id = k + 1;
            by_head[arc.head.index()].push(arc.id);
        }
        Ok(PrimeImplicantGraph {
            names: net.names().to_vec(),
            arcs,
            by_head,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of network variables.
    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn arcs(&self) -> &[HyperArc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Result<&HyperArc> {
        id.checked_sub(1)
            .and_then(|k| self.arcs.get(k))
            .ok_or(Error::UnknownArc(id))
    }

    /// Ids of the arcs whose head is `literal`.
    pub fn arcs_inducing(&self, literal: Literal) -> &[usize] {
        &self.by_head[literal.index()]
    }

    pub fn display_arc<'a>(&'a self, arc: &'a HyperArc) -> ArcDisplay<'a> {
        ArcDisplay { graph: self, arc }
    }

    fn literal_text(&self, l: Literal) -> String {
        format!("{}={}", self.names[l.var], u8::from(l.value))
    }
}

/// `<id> <tail literals as v=c,...> -> <head v=c>`
pub struct ArcDisplay<'a> {
    graph: &'a PrimeImplicantGraph,
    arc: &'a HyperArc,
}

impl fmt::Display for ArcDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail: Vec<String> = self
            .arc
            .tail
            .iter()
            .map(|&l| self.graph.literal_text(l))
            .collect();
        write!(
            f,
            "{} {} -> {}",
            self.arc.id,
            tail.join(","),
            self.graph.literal_text(self.arc.head)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, DEFAULT_SUPPORT_CAP as CAP};
    use crate::space::tests::running_example;
    use proptest::prelude::*;

    fn s(text: &str) -> Subspace {
        text.parse().unwrap()
    }

    fn patterns(primes: &[PrimeImplicant]) -> Vec<String> {
        primes.iter().map(|p| p.subspace.to_string()).collect()
    }

    #[test]
    fn primes_of_disjunction() {
        let f = parse_expression("v1 | v2", &["v1", "v2", "v3", "v4"]).unwrap();
        assert_eq!(
            patterns(&c_prime_implicants(&f, true, 0, 4, CAP).unwrap()),
            ["1---", "-1--"]
        );
        assert_eq!(
            patterns(&c_prime_implicants(&f, false, 0, 4, CAP).unwrap()),
            ["00--"]
        );
        // 11-- forces f1 = 1 but is not prime
        let ones = c_prime_implicants(&f, true, 0, 4, CAP).unwrap();
        assert!(!ones.iter().any(|p| p.subspace == s("11--")));
    }

    #[test]
    fn constant_function_gets_self_loop() {
        let one = Expr::Const(true);
        let primes = c_prime_implicants(&one, true, 1, 4, CAP).unwrap();
        assert_eq!(
            primes,
            vec![PrimeImplicant {
                subspace: s("-1--"),
                value: true,
                target: 1
            }]
        );
        assert!(c_prime_implicants(&one, false, 1, 4, CAP)
            .unwrap()
            .is_empty());
        let tautology = parse_expression("a | !a", &["a", "b"]).unwrap();
        assert_eq!(
            patterns(&c_prime_implicants(&tautology, true, 1, 2, CAP).unwrap()),
            ["-1"]
        );
    }

    #[test]
    fn running_example_graph_matches_published_arcs() {
        let g = PrimeImplicantGraph::build(&running_example(), CAP).unwrap();
        let expected = [
            ("1---", 0, true),
            ("-1--", 0, true),
            ("00--", 0, false),
            ("1--1", 1, true),
            ("0---", 1, false),
            ("---0", 1, false),
            ("0--1", 2, true),
            ("1---", 2, false),
            ("---0", 2, false),
            ("--0-", 3, true),
            ("--1-", 3, false),
        ];
        assert_eq!(g.arcs().len(), 11);
        for (arc, (tail, var, value)) in g.arcs().iter().zip(expected) {
            assert_eq!(arc.tail_subspace(4), s(tail), "arc a{}", arc.id);
            assert_eq!(arc.head, Literal::new(var, value), "arc a{}", arc.id);
        }
        let a3 = g.arc(3).unwrap();
        assert_eq!(
            a3.tail,
            vec![Literal::new(0, false), Literal::new(1, false)]
        );
        assert_eq!(g.display_arc(a3).to_string(), "3 v1=0,v2=0 -> v1=0");
        assert_eq!(g.arcs_inducing(Literal::new(3, true)), &[10]);
        assert!(g.arc(12).is_err());
        assert!(g.arc(0).is_err());
    }

    #[test]
    fn identity_network_has_two_self_loops() {
        let net = BooleanNetwork::from_rules(&[("v1", "v1")]).unwrap();
        let g = PrimeImplicantGraph::build(&net, CAP).unwrap();
        assert_eq!(g.arcs().len(), 2);
        for arc in g.arcs() {
            assert_eq!(arc.tail, vec![arc.head]);
        }
    }

    #[test]
    fn builds_are_deterministic() {
        let net = running_example();
        let a = PrimeImplicantGraph::build(&net, CAP).unwrap();
        let b = PrimeImplicantGraph::build(&net, CAP).unwrap();
        assert_eq!(a.arcs(), b.arcs());
    }

    /// Brute force: every subspace over the support on which `f` is `c` and
    /// which cannot be enlarged by freeing one variable.
    fn oracle_primes(f: &Expr, c: bool, len: usize) -> Vec<Subspace> {
        let support = f.support();
        let mut out = Vec::new();
        for mut k in 0..3usize.pow(support.len() as u32) {
            let mut p = Subspace::full(len);
            for &v in &support {
                p.set(v, [None, Some(false), Some(true)][k % 3]);
                k /= 3;
            }
            let forces = |q: &Subspace| f.restrict(q).constant_value(CAP).unwrap() == Some(c);
            if forces(&p)
                && p.fixed_vars()
                    .all(|(v, _)| !forces(&p.clone().with(v, None)))
            {
                out.push(p);
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn matches_brute_force_oracle(e in crate::expr::tests::arb_expr(6), c in any::<bool>()) {
            let essential = e.essential_support(CAP).unwrap();
            prop_assume!(!essential.is_empty());
            let mut got: Vec<Subspace> = c_prime_implicants(&e, c, 0, 6, CAP)
                .unwrap()
                .into_iter()
                .map(|p| p.subspace)
                .collect();
            got.sort();
            prop_assert_eq!(got, oracle_primes(&e, c, 6));
        }

        #[test]
        fn sound_prime_and_covering(e in crate::expr::tests::arb_expr(8), c in any::<bool>()) {
            let essential = e.essential_support(CAP).unwrap();
            prop_assume!(!essential.is_empty());
            let primes = c_prime_implicants(&e, c, 0, 8, CAP).unwrap();
            for p in &primes {
                prop_assert_eq!(e.restrict(&p.subspace).constant_value(CAP).unwrap(), Some(c));
                for (v, _) in p.subspace.fixed_vars() {
                    let wider = p.subspace.clone().with(v, None);
                    prop_assert_ne!(e.restrict(&wider).constant_value(CAP).unwrap(), Some(c));
                }
            }
            for code in 0..256u64 {
                let x = Subspace::from_state_code(8, code);
                if e.evaluate(&x) == c {
                    prop_assert!(primes.iter().any(|p| p.subspace.contains_code(code)));
                }
            }
        }
    }
}
