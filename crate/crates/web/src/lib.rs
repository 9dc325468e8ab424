//! Browser bindings. Every operation takes network text and returns JSON
//! (or network text); the `#[wasm_bindgen]` wrappers only convert errors.

use serde_json::{json, Value};
use trapspace::analysis::cyclic_attractor_lower_bound;
use trapspace::dynamics::{StateTransitionGraph, UpdateRule};
use trapspace::io::{parse_network, write_network};
use trapspace::randgen::{generate, GeneratorConfig};
use trapspace::solver::{self, SolverOptions};
use trapspace::{BooleanNetwork, PrimeImplicantGraph, Subspace};
use wasm_bindgen::prelude::*;

/// Largest network whose state space is drawn.
pub const MAX_DRAWN_VARIABLES: usize = 12;
/// Largest network the page generates.
pub const MAX_RANDOM_VARIABLES: usize = 200;

fn options() -> SolverOptions {
    SolverOptions {
        limit: 10_000,
        ..SolverOptions::default()
    }
}

fn network(text: &str) -> Result<BooleanNetwork, String> {
    parse_network(text).map_err(|e| e.to_string())
}

fn patterns(spaces: &[Subspace]) -> Vec<String> {
    spaces.iter().map(|p| p.to_string()).collect()
}

/// Minimal and maximal trap spaces, steady states and the cyclic attractor bound.
pub fn analyze(text: &str) -> Result<String, String> {
    let net = network(text)?;
    let g = PrimeImplicantGraph::build(&net, options().support_cap).map_err(|e| e.to_string())?;
    let min = solver::min_trap_spaces_of(&g, &options()).map_err(|e| e.to_string())?;
    let max = solver::max_trap_spaces_of(&g, &options()).map_err(|e| e.to_string())?;
    let steady = solver::steady_states_of(&g, &options()).map_err(|e| e.to_string())?;
    let bound = cyclic_attractor_lower_bound(&net, &options()).map_err(|e| e.to_string())?;
    let value = json!({
        "names": net.names(),
        "arcs": g.arcs().len(),
        "min": patterns(&min.spaces),
        "max": patterns(&max.spaces),
        "steady": patterns(&steady.spaces),
        "bound": bound.count,
        "complete": min.stats.complete && max.stats.complete && steady.stats.complete,
    });
    Ok(value.to_string())
}

/// Arcs of the prime implicant graph in canonical order.
pub fn prime_graph(text: &str) -> Result<String, String> {
    let net = network(text)?;
    let g = PrimeImplicantGraph::build(&net, options().support_cap).map_err(|e| e.to_string())?;
    let names = g.names();
    let literal = |l: trapspace::Literal| format!("{}={}", names[l.var], u8::from(l.value));
    let arcs: Vec<Value> = g
        .arcs()
        .iter()
        .map(|a| {
            json!({
                "id": a.id,
                "tail": a.tail.iter().map(|&l| literal(l)).collect::<Vec<_>>(),
                "head": literal(a.head),
            })
        })
        .collect();
    Ok(json!({ "arcs": arcs }).to_string())
}

/// Per-state data for a heat map: the minimal trap space holding each state
/// and the attractor it belongs to (or -1).
pub fn state_space(text: &str, synchronous: bool) -> Result<String, String> {
    let net = network(text)?;
    let n = net.len();
    if n > MAX_DRAWN_VARIABLES {
        return Err(format!(
            "state space drawing is limited to {MAX_DRAWN_VARIABLES} variables"
        ));
    }
    let rule = if synchronous {
        UpdateRule::Synchronous
    } else {
        UpdateRule::Asynchronous
    };
    let stg = StateTransitionGraph::build(&net, rule).map_err(|e| e.to_string())?;
    let min = solver::min_trap_spaces(&net, &options()).map_err(|e| e.to_string())?;
    let attractors = stg.attractors();
    let states = 1u64 << n;
    let mut attractor_of = vec![-1i64; states as usize];
    for (k, a) in attractors.iter().enumerate() {
        for &x in a {
            attractor_of[x as usize] = k as i64;
        }
    }
    let space_of: Vec<i64> = (0..states)
        .map(|x| {
            min.spaces
                .iter()
                .position(|p| p.contains_code(x))
                .map_or(-1, |k| k as i64)
        })
        .collect();
    let hulls: Vec<Value> = attractors
        .iter()
        .map(|a| {
            let hull = Subspace::enclosing_codes(n, a).expect("attractors are non-empty");
            json!({ "size": a.len(), "hull": hull.to_string() })
        })
        .collect();
    let value = json!({
        "n": n,
        "rows": n / 2,
        "cols": n - n / 2,
        "update": rule.to_string(),
        "spaces": patterns(&min.spaces),
        "space_of": space_of,
        "attractors": hulls,
        "attractor_of": attractor_of,
    });
    Ok(value.to_string())
}

/// A random network with mean in-degree `k`.
pub fn random_network(n: usize, k: f64, seed: u64) -> Result<String, String> {
    if n > MAX_RANDOM_VARIABLES {
        return Err(format!("at most {MAX_RANDOM_VARIABLES} variables"));
    }
    let config = GeneratorConfig {
        k,
        ..GeneratorConfig::new(n, seed)
    };
    generate(&config)
        .map(|net| write_network(&net))
        .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = analyze)]
pub fn analyze_js(text: &str) -> Result<String, JsValue> {
    analyze(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = primeGraph)]
pub fn prime_graph_js(text: &str) -> Result<String, JsValue> {
    prime_graph(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = stateSpace)]
pub fn state_space_js(text: &str, synchronous: bool) -> Result<String, JsValue> {
    state_space(text, synchronous).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = randomNetwork)]
pub fn random_network_js(n: usize, k: f64, seed: u64) -> Result<String, JsValue> {
    random_network(n, k, seed).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "targets, factors\nv1, v1 | v2\nv2, v1 & v4\nv3, !v1 & v4\nv4, !v3\n";

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn analyze_running_example() {
        let v = parse(&analyze(EXAMPLE).unwrap());
        assert_eq!(v["min"], json!(["00--", "1101"]));
        assert_eq!(v["max"], json!(["00--", "1---"]));
        assert_eq!(v["steady"], json!(["1101"]));
        assert_eq!(v["bound"], 1);
        assert_eq!(v["arcs"], 11);
    }

    #[test]
    fn prime_graph_lists_arcs() {
        let v = parse(&prime_graph(EXAMPLE).unwrap());
        assert_eq!(
            v["arcs"][2],
            json!({"id": 3, "tail": ["v1=0", "v2=0"], "head": "v1=0"})
        );
    }

    #[test]
    fn state_space_marks_spaces_and_attractors() {
        let v = parse(&state_space(EXAMPLE, false).unwrap());
        assert_eq!(v["space_of"].as_array().unwrap().len(), 16);
        // 0000..0011 lie in 00--, 1101 is the steady state
        assert_eq!(v["space_of"][0], 0);
        assert_eq!(v["space_of"][0b1101], 1);
        assert_eq!(v["space_of"][0b1000], -1);
        assert_eq!(v["attractor_of"][0b0011], 0);
        assert_eq!(v["attractors"][0], json!({"size": 4, "hull": "00--"}));
    }

    #[test]
    fn errors_are_messages() {
        assert!(analyze("targets, factors\na, b\n")
            .unwrap_err()
            .contains("line 2"));
        let big = random_network(13, 2.0, 1).unwrap();
        assert!(state_space(&big, true).is_err());
        assert!(random_network(0, 2.0, 1).is_err());
    }

    #[test]
    fn random_network_round_trips() {
        let text = random_network(10, 3.0, 7).unwrap();
        assert_eq!(text, random_network(10, 3.0, 7).unwrap());
        assert!(parse(&analyze(&text).unwrap())["complete"]
            .as_bool()
            .unwrap());
    }
}
