//! ASP and LP-format encodings of the arc-set problem for external solvers.
//!
//! Both emitters are deterministic: arcs appear in canonical id order and
//! variable names go through [`atom_names`].

use std::collections::HashSet;
use std::fmt::Write;

use crate::primes::{Literal, PrimeImplicantGraph};
use crate::solver::Extremality;

/// Lowercased names with non-alphanumerics mapped to `_`, prefixed with `v_`
/// when they would not start with a letter, and suffixed on collisions.
pub fn atom_names(names: &[String]) -> Vec<String> {
    let mut used = HashSet::new();
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut atom: String = name
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() {
                        c.to_ascii_lowercase()
                    } else {
                        '_'
                    }
                })
                .collect();
            if !atom.starts_with(|c: char| c.is_ascii_lowercase()) {
                atom = format!("v_{atom}");
            }
            if used.contains(&atom) {
                atom = format!("{atom}_{}", i + 1);
            }
            used.insert(atom.clone());
            atom
        })
        .collect()
}

fn mode_name(mode: Extremality) -> &'static str {
    match mode {
        Extremality::Minimal => "min",
        Extremality::Maximal => "max",
    }
}

fn name_table(out: &mut String, comment: &str, names: &[String], atoms: &[String]) {
    let _ = writeln!(out, "{comment} variable names:");
    for (name, atom) in names.iter().zip(atoms) {
        let _ = writeln!(out, "{comment}   {name} -> {atom}");
    }
}

/// Answer set program: one fact line per arc, then the choice rule and the
/// stability and consistency constraints.
pub fn emit_asp(g: &PrimeImplicantGraph, mode: Extremality) -> String {
    let atoms = atom_names(g.names());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "% Stable and consistent arc sets of a prime implicant graph: {} variables, {} arcs.",
        g.var_count(),
        g.arcs().len()
    );
    match mode {
        Extremality::Minimal => {
            out.push_str("% mode min: enumerate the subset-minimal answer sets over x/1 (maximal trap spaces).\n");
            out.push_str("% The solver must enumerate subset-minimal models, e.g. clasp\n");
            out.push_str(
                "%   --heuristic=Domain --dom-mod=6 --dom-pref=32 --enum-mode=domRec --models=0\n",
            );
        }
        Extremality::Maximal => {
            out.push_str("% mode max: enumerate the subset-maximal answer sets over x/1 (minimal trap spaces).\n");
            out.push_str("% The solver must enumerate subset-maximal models, e.g. clasp\n");
            out.push_str(
                "%   --heuristic=Domain --dom-mod=7 --dom-pref=32 --enum-mode=domRec --models=0\n",
            );
        }
    }
    name_table(&mut out, "%", g.names(), &atoms);
    let literal = |kind: &str, l: Literal, id: usize| {
        format!("{kind}({},{},a{id}).", atoms[l.var], u8::from(l.value))
    };
    for arc in g.arcs() {
        let mut parts = vec![literal("head", arc.head, arc.id)];
        parts.extend(arc.tail.iter().map(|&l| literal("tail", l, arc.id)));
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out.push_str("{x(ID) : head(V,C,ID)}.\n");
    out.push_str(":- x(ID1), tail(V,C,ID1), not x(ID2) : head(V,C,ID2).\n");
    out.push_str(":- x(ID1), x(ID2), head(V,1,ID1), head(V,0,ID2).\n");
    if mode == Extremality::Minimal {
        out.push_str(":- {x(_)} 0.\n");
    }
    out
}

/// `coefficient name` terms of a linear expression, wrapped every eight terms.
fn linear(terms: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (i, (positive, name)) in terms.iter().enumerate() {
        if i > 0 {
            if i % 8 == 0 {
                out.push_str("\n  ");
            }
            out.push_str(if *positive { " + " } else { " - " });
        } else if !positive {
            out.push_str("- ");
        }
        out.push_str(name);
    }
    out
}

/// CPLEX LP-format 0-1 program. A single solve yields one cardinality-optimal
/// set; the header describes the cut loop that enumerates all of them.
pub fn emit_ilp(g: &PrimeImplicantGraph, mode: Extremality) -> String {
    let atoms = atom_names(g.names());
    let x = |id: usize| format!("x_a{id}");
    let y = |l: Literal| format!("y_{}_{}", atoms[l.var], u8::from(l.value));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ Stable and consistent arc sets of a prime implicant graph: {} variables, {} arcs, mode {}.",
        g.var_count(),
        g.arcs().len(),
        mode_name(mode)
    );
    out.push_str(
        "\\ One solve returns one cardinality-optimal set. To enumerate all inclusion-extremal\n",
    );
    out.push_str(
        "\\ sets, re-solve after adding a no-good cut for every solution s until infeasible:\n",
    );
    match mode {
        Extremality::Maximal => {
            out.push_str("\\   x_a summed over the arcs with s(x_a) = 0  >= 1   (forbids subsets of s)\n")
        }
        Extremality::Minimal => out.push_str(
            "\\   x_a summed over the arcs with s(x_a) = 1  <= |{a : s(x_a) = 1}| - 1   (forbids supersets of s)\n",
        ),
    }
    name_table(&mut out, "\\", g.names(), &atoms);
    let all_x: Vec<(bool, String)> = g.arcs().iter().map(|a| (true, x(a.id))).collect();
    out.push_str(match mode {
        Extremality::Maximal => "Maximize\n",
        Extremality::Minimal => "Minimize\n",
    });
    let _ = writeln!(out, " obj: {}", linear(&all_x));
    out.push_str("Subject To\n");
    for (v, atom) in atoms.iter().enumerate() {
        for value in [false, true] {
            let l = Literal::new(v, value);
            let mut terms = vec![(true, y(l))];
            terms.extend(g.arcs_inducing(l).iter().map(|&id| (false, x(id))));
            let _ = writeln!(
                out,
                " link_{}_{}: {} <= 0",
                atom,
                u8::from(value),
                linear(&terms)
            );
            for &id in g.arcs_inducing(l) {
                let _ = writeln!(out, " head_a{id}: {} - {} <= 0", x(id), y(l));
            }
        }
    }
    for arc in g.arcs() {
        for &l in &arc.tail {
            let _ = writeln!(
                out,
                " tail_a{}_{}_{}: {} - {} <= 0",
                arc.id,
                atoms[l.var],
                u8::from(l.value),
                x(arc.id),
                y(l)
            );
        }
    }
    for (v, atom) in atoms.iter().enumerate() {
        let (y0, y1) = (y(Literal::new(v, false)), y(Literal::new(v, true)));
        let _ = writeln!(out, " excl_{atom}: {y0} + {y1} <= 1");
    }
    if mode == Extremality::Minimal {
        let _ = writeln!(out, " nonempty: {} >= 1", linear(&all_x));
    }
    out.push_str("Binary\n");
    for chunk in all_x.chunks(8) {
        let names: Vec<&str> = chunk.iter().map(|(_, n)| n.as_str()).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    for v in 0..g.var_count() {
        let _ = writeln!(
            out,
            " {} {}",
            y(Literal::new(v, false)),
            y(Literal::new(v, true))
        );
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::DEFAULT_SUPPORT_CAP as CAP;
    use crate::space::tests::running_example;

    fn graph() -> PrimeImplicantGraph {
        PrimeImplicantGraph::build(&running_example(), CAP).unwrap()
    }

    #[test]
    fn atom_names_are_valid_and_unique() {
        let names: Vec<String> = ["EGFR_stimulus", "egfr-stimulus", "_x", "A1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            atom_names(&names),
            ["egfr_stimulus", "egfr_stimulus_2", "v__x", "a1"]
        );
    }

    #[test]
    fn asp_contains_arc_facts_and_rules() {
        let text = emit_asp(&graph(), Extremality::Minimal);
        assert!(text.contains("\nhead(v1,0,a3). tail(v1,0,a3). tail(v2,0,a3).\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("head(")).count(), 11);
        assert!(text
            .lines()
            .filter(|l| l.starts_with("head("))
            .all(|l| l.contains("tail(")));
        assert!(text.ends_with(":- {x(_)} 0.\n"));
        let max = emit_asp(&graph(), Extremality::Maximal);
        assert!(!max.contains(":- {x(_)} 0."));
        assert_eq!(max, emit_asp(&graph(), Extremality::Maximal));
    }

    #[test]
    fn ilp_contains_constraint_shapes() {
        let text = emit_ilp(&graph(), Extremality::Maximal);
        assert!(text.contains("Maximize\n"));
        assert!(text.contains(" excl_v1: y_v1_0 + y_v1_1 <= 1\n"));
        assert!(text.contains(" tail_a3_v2_0: x_a3 - y_v2_0 <= 0\n"));
        assert!(text.contains(" link_v1_1: y_v1_1 - x_a1 - x_a2 <= 0\n"));
        let binary = text
            .split("Binary\n")
            .nth(1)
            .unwrap()
            .trim_end_matches("End\n");
        assert_eq!(binary.split_whitespace().count(), 19);
        let min = emit_ilp(&graph(), Extremality::Minimal);
        assert!(min.contains("Minimize\n") && min.contains(" nonempty: "));
    }
}
