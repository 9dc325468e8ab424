//! Network files.
//!
//! ```text
//! targets, factors
//! v1, v1 | v2
//! v2, v1 & v4
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Variable order is
//! line order.

use std::path::Path;

use crate::error::{Error, Result};
use crate::expr::parse_expression;
use crate::space::BooleanNetwork;

pub const HEADER: &str = "targets, factors";

pub fn parse_network(text: &str) -> Result<BooleanNetwork> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, header)) if is_header(header) => {}
        Some((line, _)) => {
            return Err(Error::InvalidNetwork(format!(
                "line {line}: expected header `{HEADER}`"
            )))
        }
        None => return Err(Error::InvalidNetwork("empty network file".into())),
    }
    let mut rules = Vec::new();
    for (line, text) in lines {
        let (name, expr) = text.split_once(',').ok_or_else(|| {
            Error::InvalidNetwork(format!("line {line}: expected `<name>, <expression>`"))
        })?;
        rules.push((line, name.trim().to_string(), expr.trim().to_string()));
    }
    let names: Vec<String> = rules.iter().map(|(_, n, _)| n.clone()).collect();
    let functions = rules
        .iter()
        .map(|(line, name, expr)| {
            parse_expression(expr, &names)
                .map_err(|e| Error::InvalidNetwork(format!("line {line} (`{name}`): {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    BooleanNetwork::new(names, functions)
}

fn is_header(line: &str) -> bool {
    let parts: Vec<String> = line
        .split(',')
        .map(|p| p.trim().to_ascii_lowercase())
        .collect();
    parts == ["targets", "factors"]
}

pub fn read_network(path: &Path) -> Result<BooleanNetwork> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_network(&text)
}

pub fn write_network(net: &BooleanNetwork) -> String {
    let mut out = format!("{HEADER}\n");
    for (name, f) in net.names().iter().zip(net.functions()) {
        out.push_str(&format!("{name}, {}\n", f.display(net.names())));
    }
    out
}
