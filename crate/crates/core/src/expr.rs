//! Boolean expressions over the variables of a network.
//!
//! Concrete syntax: identifiers `[A-Za-z_][A-Za-z0-9_]*`, constants `0`/`1`,
//! `!` negation, `&` conjunction, `|` disjunction and parentheses. `!` binds
//! tighter than `&`, which binds tighter than `|`.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::Subspace;

/// Default cap on the number of variables a single function may depend on.
pub const DEFAULT_SUPPORT_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    /// At least two children.
    And(Vec<Expr>),
    /// At least two children.
    Or(Vec<Expr>),
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Expr) -> Expr {
        Expr::Not(Box::new(child))
    }

    /// Conjunction; collapses to the child itself (or `1`) for fewer than two children.
    pub fn and(mut children: Vec<Expr>) -> Expr {
        match children.len() {
            0 => Expr::Const(true),
            1 => children.pop().unwrap(),
            _ => Expr::And(children),
        }
    }

    /// Disjunction; collapses to the child itself (or `0`) for fewer than two children.
    pub fn or(mut children: Vec<Expr>) -> Expr {
        match children.len() {
            0 => Expr::Const(false),
            1 => children.pop().unwrap(),
            _ => Expr::Or(children),
        }
    }

    /// Evaluate with `value(i)` giving the value of variable `i`.
    pub fn eval_with<F: Fn(usize) -> bool>(&self, value: &F) -> bool {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => value(*i),
            Expr::Not(child) => !child.eval_with(value),
            Expr::And(children) => children.iter().all(|c| c.eval_with(value)),
            Expr::Or(children) => children.iter().any(|c| c.eval_with(value)),
        }
    }

    /// Evaluate at a state. Variables that `x` leaves free read as 0.
    pub fn evaluate(&self, x: &Subspace) -> bool {
        self.eval_with(&|i| x.get(i) == Some(true))
    }

    /// Sorted, deduplicated variable indices occurring in the expression.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(i) => out.push(*i),
            Expr::Not(child) => child.collect_vars(out),
            Expr::And(children) | Expr::Or(children) => {
                for c in children {
                    c.collect_vars(out);
                }
            }
        }
    }

    /// Largest referenced variable index plus one (0 for constant expressions).
    pub fn width(&self) -> usize {
        self.support().last().map_or(0, |v| v + 1)
    }

    /// Truth table over `support`: entry `r` is the value at the assignment
    /// where `support[j]` takes bit `j` of `r`.
    pub fn truth_table(&self, support: &[usize]) -> Vec<bool> {
        let mut position = vec![usize::MAX; self.width().max(1)];
        for (j, &v) in support.iter().enumerate() {
            if v < position.len() {
                position[v] = j;
            }
        }
        (0..1usize << support.len())
            .map(|row| {
                self.eval_with(&|i| {
                    let j = position.get(i).copied().unwrap_or(usize::MAX);
                    j != usize::MAX && (row >> j) & 1 == 1
                })
            })
            .collect()
    }

    fn capped_support(&self, cap: usize) -> Result<Vec<usize>> {
        let support = self.support();
        if support.len() > cap {
            return Err(Error::SupportTooLarge {
                support: support.len(),
                cap,
            });
        }
        Ok(support)
    }

    /// Substitute the fixed values of `p` and fold constants locally.
    pub fn restrict(&self, p: &Subspace) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => match p.get(*i) {
                Some(c) => Expr::Const(c),
                None => Expr::Var(*i),
            },
            Expr::Not(child) => match child.restrict(p) {
                Expr::Const(c) => Expr::Const(!c),
                other => Expr::not(other),
            },
            Expr::And(children) => {
                let mut kept = Vec::with_capacity(children.len());
                for c in children {
                    match c.restrict(p) {
                        Expr::Const(false) => return Expr::Const(false),
                        Expr::Const(true) => {}
                        other => kept.push(other),
                    }
                }
                Expr::and(kept)
            }
            Expr::Or(children) => {
                let mut kept = Vec::with_capacity(children.len());
                for c in children {
                    match c.restrict(p) {
                        Expr::Const(true) => return Expr::Const(true),
                        Expr::Const(false) => {}
                        other => kept.push(other),
                    }
                }
                Expr::or(kept)
            }
        }
    }

    /// The constant value of the function, decided by exhaustive evaluation
    /// over the syntactic support.
    pub fn constant_value(&self, cap: usize) -> Result<Option<bool>> {
        if let Expr::Const(c) = self {
            return Ok(Some(*c));
        }
        let support = self.capped_support(cap)?;
        let table = self.truth_table(&support);
        let first = table[0];
        Ok(table.iter().all(|&b| b == first).then_some(first))
    }

    /// Variables the function actually depends on.
    pub fn essential_support(&self, cap: usize) -> Result<Vec<usize>> {
        let support = self.capped_support(cap)?;
        let table = self.truth_table(&support);
        Ok(essential_positions(&table, support.len())
            .into_iter()
            .map(|j| support[j])
            .collect())
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> ExprDisplay<'a, S> {
        ExprDisplay { expr: self, names }
    }
}

/// Positions `j` of a `k`-input truth table on which the table depends.
pub(crate) fn essential_positions(table: &[bool], k: usize) -> Vec<usize> {
    (0..k)
        .filter(|&j| {
            let bit = 1usize << j;
            (0..table.len())
                .filter(|r| r & bit == 0)
                .any(|r| table[r] != table[r | bit])
        })
        .collect()
}

pub struct ExprDisplay<'a, S> {
    expr: &'a Expr,
    names: &'a [S],
}

impl<S: AsRef<str>> ExprDisplay<'_, S> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        match e {
            Expr::Const(c) => write!(f, "{}", u8::from(*c)),
            Expr::Var(i) => match self.names.get(*i) {
                Some(name) => f.write_str(name.as_ref()),
                None => write!(f, "v{}", i + 1),
            },
            Expr::Not(child) => {
                f.write_str("!")?;
                match **child {
                    Expr::And(_) | Expr::Or(_) => self.parenthesized(f, child),
                    _ => self.write(f, child),
                }
            }
            Expr::And(children) => self.join(f, children, " & ", |c| {
                matches!(c, Expr::And(_) | Expr::Or(_))
            }),
            Expr::Or(children) => self.join(f, children, " | ", |c| matches!(c, Expr::Or(_))),
        }
    }

    fn parenthesized(&self, f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
        f.write_str("(")?;
        self.write(f, e)?;
        f.write_str(")")
    }

    fn join(
        &self,
        f: &mut fmt::Formatter<'_>,
        children: &[Expr],
        sep: &str,
        needs_parens: impl Fn(&Expr) -> bool,
    ) -> fmt::Result {
        for (i, c) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            if needs_parens(c) {
                self.parenthesized(f, c)?;
            } else {
                self.write(f, c)?;
            }
        }
        Ok(())
    }
}

impl<S: AsRef<str>> fmt::Display for ExprDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Const(bool),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let token = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::Open,
            b')' => Token::Close,
            b'0' | b'1' => {
                if bytes
                    .get(i + 1)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    return Err(Error::Syntax {
                        position: i,
                        message: "malformed constant".into(),
                    });
                }
                Token::Const(b == b'1')
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((start, token));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, S> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    vocabulary: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.to_string(),
        })
    }

    fn disjunction(&mut self) -> Result<Expr> {
        let mut children = vec![self.conjunction()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            children.push(self.conjunction()?);
        }
        Ok(Expr::or(children))
    }

    fn conjunction(&mut self) -> Result<Expr> {
        let mut children = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            children.push(self.unary()?);
        }
        Ok(Expr::and(children))
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Expr::not(self.unary()?))
            }
            Some(Token::Const(c)) => {
                let c = *c;
                self.pos += 1;
                Ok(Expr::Const(c))
            }
            Some(Token::Ident(name)) => {
                let index = self
                    .vocabulary
                    .iter()
                    .position(|v| v.as_ref() == name)
                    .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
                self.pos += 1;
                Ok(Expr::Var(index))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected an operand"),
            None => self.error("unexpected end of expression"),
        }
    }
}

/// Parse `text` over the ordered variable names in `vocabulary`.
pub fn parse_expression<S: AsRef<str>>(text: &str, vocabulary: &[S]) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        vocabulary,
    };
    let expr = parser.disjunction()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(expr)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    const V: [&str; 4] = ["v1", "v2", "v3", "v4"];

    fn parse(text: &str) -> Expr {
        parse_expression(text, &V).unwrap()
    }

    fn state(bits: &str) -> Subspace {
        bits.parse().unwrap()
    }

    #[test]
    fn parses_running_example_functions() {
        assert_eq!(parse("v1 | v2"), Expr::Or(vec![Expr::Var(0), Expr::Var(1)]));
        assert_eq!(parse("0"), Expr::Const(false));
        let abc = ["a", "b", "c"];
        assert_eq!(
            parse_expression("!(a & b) | c", &abc).unwrap(),
            Expr::Or(vec![
                Expr::not(Expr::And(vec![Expr::Var(0), Expr::Var(1)])),
                Expr::Var(2)
            ])
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("v1 | v2 & !v3 | v4"),
            Expr::Or(vec![
                Expr::Var(0),
                Expr::And(vec![Expr::Var(1), Expr::not(Expr::Var(2))]),
                Expr::Var(3)
            ])
        );
        assert_eq!(
            parse("v1 & v2 & v3"),
            Expr::And(vec![Expr::Var(0), Expr::Var(1), Expr::Var(2)])
        );
        assert_eq!(parse("!!v1"), Expr::not(Expr::not(Expr::Var(0))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse_expression("v1 & ", &V),
            Err(Error::Syntax {
                position: 5,
                message: "unexpected end of expression".into()
            })
        );
        assert!(matches!(
            parse_expression("v1 v2", &V),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse_expression("(v1 | v2", &V),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expression("v1 + v2", &V),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert_eq!(
            parse_expression("v1 | x9", &V),
            Err(Error::UnknownIdentifier("x9".into()))
        );
    }

    #[test]
    fn evaluates_running_example() {
        let x = state("1101");
        assert!(parse("v1 | v2").evaluate(&x));
        assert!(!parse("!v1 & v4").evaluate(&x));
        assert!(Expr::Const(true).evaluate(&state("0000")));
    }

    #[test]
    fn restrict_substitutes_and_folds() {
        let p = state("1---");
        assert_eq!(parse("v1 & v4").restrict(&p), Expr::Var(3));
        assert_eq!(parse("!v1 & v4").restrict(&p), Expr::Const(false));
        let f4 = parse("!v3");
        assert_eq!(f4.restrict(&state("----")), f4);
        let r = state("--11");
        assert_eq!(parse("!v1 & v4").restrict(&r), Expr::not(Expr::Var(0)));
        assert_eq!(
            parse("v1 | v2").restrict(&state("00--")),
            Expr::Const(false)
        );
    }

    #[test]
    fn constant_value_is_semantic() {
        let q = state("00--");
        assert_eq!(
            parse("v1 | v2").restrict(&q).constant_value(16),
            Ok(Some(false))
        );
        assert_eq!(Expr::Var(2).constant_value(16), Ok(None));
        assert_eq!(parse("v1 & !v1").constant_value(16), Ok(Some(false)));
        assert_eq!(parse("v1 | !v1").constant_value(16), Ok(Some(true)));
        assert_eq!(
            parse("v1 | v2 | v3").constant_value(2),
            Err(Error::SupportTooLarge { support: 3, cap: 2 })
        );
    }

    #[test]
    fn essential_support_drops_fictitious_variables() {
        assert_eq!(parse("v1 | v2").essential_support(16), Ok(vec![0, 1]));
        assert_eq!(parse("v1 | 1").essential_support(16), Ok(vec![]));
        assert_eq!(parse("v1 & (v2 | !v2)").essential_support(16), Ok(vec![0]));
        assert!(parse("v1 & v2").essential_support(1).is_err());
    }

    #[test]
    fn display_round_trips_nested_structure() {
        let e = Expr::And(vec![
            Expr::And(vec![Expr::Var(0), Expr::Var(1)]),
            Expr::not(Expr::Or(vec![Expr::Var(2), Expr::Const(true)])),
        ]);
        let text = e.display(&V).to_string();
        assert_eq!(text, "(v1 & v2) & !(v3 | 1)");
        assert_eq!(parse(&text), e);
    }

    pub(crate) fn arb_expr(nvars: usize) -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            any::<bool>().prop_map(Expr::Const),
            (0..nvars).prop_map(Expr::Var),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::not),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::And),
                prop::collection::vec(inner, 2..4).prop_map(Expr::Or),
            ]
        })
    }

    fn arb_subspace(n: usize) -> impl Strategy<Value = Subspace> {
        prop::collection::vec(
            prop_oneof![Just(None), Just(Some(false)), Just(Some(true))],
            n,
        )
        .prop_map(|cells| Subspace::from_cells(&cells))
    }

    const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr(6)) {
            let text = e.display(&NAMES).to_string();
            prop_assert_eq!(parse_expression(&text, &NAMES).unwrap(), e);
        }

        #[test]
        fn restrict_is_sound(e in arb_expr(6), p in arb_subspace(6), bits in 0u32..64) {
            let x = (0..6).map(|i| Some(p.get(i).unwrap_or((bits >> i) & 1 == 1))).collect::<Vec<_>>();
            let x = Subspace::from_cells(&x);
            let r = e.restrict(&p);
            prop_assert_eq!(r.evaluate(&x), e.evaluate(&x));
            for v in r.support() {
                prop_assert!(p.get(v).is_none());
            }
        }

        #[test]
        fn constant_value_holds_everywhere(e in arb_expr(6)) {
            if let Some(c) = e.constant_value(10).unwrap() {
                let support = e.support();
                prop_assert!(e.truth_table(&support).iter().all(|&b| b == c));
            }
        }
    }
}
