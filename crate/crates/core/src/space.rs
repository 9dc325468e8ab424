//! States, subspaces and Boolean networks.
//!
//! A [`Subspace`] is a pair of bit sets over the variable indices: the fixed
//! variables and their values. Value bits of free variables are always zero,
//! so structural equality is semantic equality. A state is a subspace that
//! fixes every variable.
//!
//! Text form: one character per variable from `{0, 1, -}`, position `i`
//! holding variable `i` (the first variable is printed first, and is the
//! most significant bit of an integer state code).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};

/// Default cap on `n` for operations that enumerate states.
pub const DEFAULT_STATE_CAP: usize = 24;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    len: usize,
    fixed: Vec<u64>,
    values: Vec<u64>,
}

impl Subspace {
    /// The whole state space over `len` variables.
    pub fn full(len: usize) -> Self {
        let words = len.div_ceil(WORD);
        Subspace {
            len,
            fixed: vec![0; words],
            values: vec![0; words],
        }
    }

    pub fn from_cells(cells: &[Option<bool>]) -> Self {
        let mut s = Subspace::full(cells.len());
        for (i, c) in cells.iter().enumerate() {
            s.set(i, *c);
        }
        s
    }

    /// State with integer code `code`; variable 0 is the most significant of `len` bits.
    pub fn from_state_code(len: usize, code: u64) -> Self {
        let mut s = Subspace::full(len);
        for i in 0..len {
            s.set(i, Some((code >> (len - 1 - i)) & 1 == 1));
        }
        s
    }

    /// Integer code of a state (free variables read as 0). Requires `len <= 64`.
    pub fn state_code(&self) -> u64 {
        (0..self.len).fold(0u64, |acc, i| {
            (acc << 1) | u64::from(self.get(i) == Some(true))
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        let (w, b) = (var / WORD, var % WORD);
        if var >= self.len || (self.fixed[w] >> b) & 1 == 0 {
            None
        } else {
            Some((self.values[w] >> b) & 1 == 1)
        }
    }

    pub fn set(&mut self, var: usize, value: Option<bool>) {
        assert!(var < self.len, "variable {var} out of range");
        let (w, mask) = (var / WORD, 1u64 << (var % WORD));
        match value {
            None => {
                self.fixed[w] &= !mask;
                self.values[w] &= !mask;
            }
            Some(c) => {
                self.fixed[w] |= mask;
                if c {
                    self.values[w] |= mask;
                } else {
                    self.values[w] &= !mask;
                }
            }
        }
    }

    pub fn with(mut self, var: usize, value: Option<bool>) -> Self {
        self.set(var, value);
        self
    }

    /// Number of fixed variables.
    pub fn fixed_count(&self) -> usize {
        self.fixed.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_state(&self) -> bool {
        self.fixed_count() == self.len
    }

    pub fn is_full(&self) -> bool {
        self.fixed.iter().all(|&w| w == 0)
    }

    /// Fixed variables with their values, in index order.
    pub fn fixed_vars(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        (0..self.len).filter_map(move |i| self.get(i).map(|c| (i, c)))
    }

    pub fn free_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i).is_none())
    }

    /// `self <= other`, i.e. the states of `self` are contained in those of `other`.
    pub fn leq(&self, other: &Subspace) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.fixed
            .iter()
            .zip(&other.fixed)
            .zip(self.values.iter().zip(&other.values))
            .all(|((&fp, &fq), (&vp, &vq))| fq & !fp == 0 && (vp ^ vq) & fq == 0)
    }

    pub fn lt(&self, other: &Subspace) -> bool {
        self != other && self.leq(other)
    }

    /// Whether the subspace contains the state with the given code.
    pub fn contains_code(&self, code: u64) -> bool {
        self.fixed_vars()
            .all(|(i, c)| ((code >> (self.len - 1 - i)) & 1 == 1) == c)
    }

    /// Intersection, or `None` if the subspaces are disjoint.
    pub fn intersect(&self, other: &Subspace) -> Option<Subspace> {
        let mut out = self.clone();
        for w in 0..self.fixed.len() {
            let both = self.fixed[w] & other.fixed[w];
            if (self.values[w] ^ other.values[w]) & both != 0 {
                return None;
            }
            out.fixed[w] |= other.fixed[w];
            out.values[w] |= other.values[w];
        }
        Some(out)
    }

    /// Codes of all states in the subspace, ascending.
    pub fn referenced_states(&self, cap: usize) -> Result<Vec<u64>> {
        if self.len > cap.min(63) {
            return Err(Error::CapExceeded {
                what: "state enumeration",
                n: self.len,
                cap,
            });
        }
        let free: Vec<usize> = self.free_vars().collect();
        let base = self.state_code();
        let mut out: Vec<u64> = (0..1u64 << free.len())
            .map(|r| {
                free.iter().enumerate().fold(base, |acc, (j, &v)| {
                    let bit = (r >> (free.len() - 1 - j)) & 1;
                    acc | (bit << (self.len - 1 - v))
                })
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The smallest subspace containing all given states.
    pub fn enclosing(states: &[Subspace]) -> Result<Subspace> {
        let (first, rest) = states.split_first().ok_or(Error::EmptyStateSet)?;
        let mut out = first.clone();
        for x in rest {
            for i in 0..out.len {
                if out.get(i).is_some() && out.get(i) != x.get(i) {
                    out.set(i, None);
                }
            }
        }
        Ok(out)
    }

    /// [`Subspace::enclosing`] over integer state codes.
    pub fn enclosing_codes(len: usize, codes: &[u64]) -> Result<Subspace> {
        let first = *codes.first().ok_or(Error::EmptyStateSet)?;
        let all_mask = if len == 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        };
        let varying = codes.iter().fold(0u64, |acc, &c| acc | (c ^ first)) & all_mask;
        let mut out = Subspace::full(len);
        for i in 0..len {
            let bit = len - 1 - i;
            if (varying >> bit) & 1 == 0 {
                out.set(i, Some((first >> bit) & 1 == 1));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(match self.get(i) {
                None => "-",
                Some(false) => "0",
                Some(true) => "1",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Subspace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cells = s
            .trim()
            .chars()
            .map(|c| match c {
                '-' => Ok(None),
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                _ => Err(Error::InvalidPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_cells(&cells))
    }
}

/// Canonical order: position by position, `-` < `0` < `1` (the order of the text form).
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |c: Option<bool>| match c {
            None => 0,
            Some(false) => 1,
            Some(true) => 2,
        };
        (0..self.len.min(other.len))
            .map(|i| key(self.get(i)).cmp(&key(other.get(i))))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| self.len.cmp(&other.len))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered variables with one update function each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanNetwork {
    names: Vec<String>,
    functions: Vec<Expr>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl BooleanNetwork {
    pub fn new(names: Vec<String>, functions: Vec<Expr>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidNetwork("network has no variables".into()));
        }
        if names.len() != functions.len() {
            return Err(Error::InvalidNetwork(format!(
                "{} variables but {} functions",
                names.len(),
                functions.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidNetwork(format!(
                    "invalid variable name `{name}`"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate variable `{name}`"
                )));
            }
        }
        for (name, f) in names.iter().zip(&functions) {
            if f.width() > names.len() {
                return Err(Error::InvalidNetwork(format!(
                    "function of `{name}` references an undeclared variable"
                )));
            }
        }
        Ok(BooleanNetwork { names, functions })
    }

    /// Build from `(name, expression text)` pairs.
    pub fn from_rules<S: AsRef<str>>(rules: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = rules.iter().map(|(n, _)| n.as_ref().to_string()).collect();
        let functions = rules
            .iter()
            .map(|(_, text)| parse_expression(text.as_ref(), &names))
            .collect::<Result<Vec<_>>>()?;
        BooleanNetwork::new(names, functions)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn functions(&self) -> &[Expr] {
        &self.functions
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn check_len(&self, p: &Subspace) -> Result<()> {
        if p.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: p.len(),
            });
        }
        Ok(())
    }

    /// Parse a subspace pattern and check its length against the network.
    pub fn subspace(&self, pattern: &str) -> Result<Subspace> {
        let p: Subspace = pattern.parse()?;
        self.check_len(&p)?;
        Ok(p)
    }

    /// `F(x)`.
    pub fn image_state(&self, x: &Subspace) -> Subspace {
        let cells: Vec<Option<bool>> = self.functions.iter().map(|f| Some(f.evaluate(x))).collect();
        Subspace::from_cells(&cells)
    }

    /// `F(x)` on integer state codes.
    pub fn image_code(&self, code: u64) -> u64 {
        let n = self.len();
        let value = |i: usize| (code >> (n - 1 - i)) & 1 == 1;
        self.functions
            .iter()
            .fold(0u64, |acc, f| (acc << 1) | u64::from(f.eval_with(&value)))
    }

    /// `F[p]`: fixes `v_i` exactly when `f_i[p]` is constant.
    pub fn image_subspace(&self, p: &Subspace, cap: usize) -> Result<Subspace> {
        self.check_len(p)?;
        let cells = self
            .functions
            .iter()
            .map(|f| f.restrict(p).constant_value(cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_cells(&cells))
    }

    /// Trap-space test `F[p] <= p`. Only the fixed variables of `p` need checking.
    pub fn is_trap_space(&self, p: &Subspace, cap: usize) -> Result<bool> {
        self.check_len(p)?;
        for (i, c) in p.fixed_vars() {
            if self.functions[i].restrict(p).constant_value(cap)? != Some(c) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::expr::DEFAULT_SUPPORT_CAP as CAP;

    pub(crate) fn running_example() -> BooleanNetwork {
        BooleanNetwork::from_rules(&[
            ("v1", "v1 | v2"),
            ("v2", "v1 & v4"),
            ("v3", "!v1 & v4"),
            ("v4", "!v3"),
        ])
        .unwrap()
    }

    fn s(text: &str) -> Subspace {
        text.parse().unwrap()
    }

    #[test]
    fn pattern_round_trip_and_canonical_form() {
        let p = s("-1-0");
        assert_eq!(p.to_string(), "-1-0");
        assert_eq!(p.fixed_count(), 2);
        let mut q = s("-110");
        q.set(2, None);
        assert_eq!(q, p);
        assert!("01x".parse::<Subspace>().is_err());
    }

    #[test]
    fn state_codes_put_first_variable_on_top() {
        let x = s("1000");
        assert_eq!(x.state_code(), 8);
        assert_eq!(Subspace::from_state_code(4, 0b0110), s("0110"));
    }

    #[test]
    fn leq_examples() {
        assert!(s("1101").leq(&s("1-01")));
        assert!(s("1-0-").leq(&s("1-0-")));
        assert!(!s("1---").leq(&s("00--")));
        assert!(!s("00--").leq(&s("1---")));
        assert!(s("00--").leq(&s("----")));
    }

    #[test]
    fn referenced_states_examples() {
        assert_eq!(
            s("--10").referenced_states(24).unwrap(),
            vec![0b0010, 0b0110, 0b1010, 0b1110]
        );
        assert_eq!(s("1101").referenced_states(24).unwrap(), vec![0b1101]);
        assert_eq!(
            s("----").referenced_states(24).unwrap(),
            (0..16).collect::<Vec<_>>()
        );
        assert!(s("----").referenced_states(3).is_err());
    }

    #[test]
    fn images_of_running_example() {
        let net = running_example();
        for (x, y) in [
            ("1101", "1101"),
            ("0000", "0001"),
            ("0110", "1000"),
            ("1111", "1100"),
        ] {
            assert_eq!(net.image_state(&s(x)), s(y));
            assert_eq!(net.image_code(s(x).state_code()), s(y).state_code());
        }
        for (p, q) in [("1---", "1-0-"), ("00--", "00--"), ("--11", "---0")] {
            assert_eq!(net.image_subspace(&s(p), CAP).unwrap(), s(q));
        }
    }

    #[test]
    fn trap_space_examples() {
        let net = running_example();
        assert!(net.is_trap_space(&s("1---"), CAP).unwrap());
        assert!(!net.is_trap_space(&s("--11"), CAP).unwrap());
        assert!(net.is_trap_space(&s("----"), CAP).unwrap());
        assert!(net.is_trap_space(&s("---"), CAP).is_err());
    }

    #[test]
    fn enclosing_subspace_examples() {
        let states: Vec<Subspace> = ["0010", "0001", "0011", "0000"]
            .iter()
            .map(|t| s(t))
            .collect();
        assert_eq!(Subspace::enclosing(&states).unwrap(), s("00--"));
        assert_eq!(Subspace::enclosing(&[s("1011")]).unwrap(), s("1011"));
        assert_eq!(
            Subspace::enclosing(&[s("0000"), s("1111")]).unwrap(),
            s("----")
        );
        assert_eq!(Subspace::enclosing(&[]), Err(Error::EmptyStateSet));
        assert_eq!(
            Subspace::enclosing_codes(4, &[2, 1, 3, 0]).unwrap(),
            s("00--")
        );
    }

    #[test]
    fn network_validation() {
        assert!(BooleanNetwork::from_rules::<&str>(&[]).is_err());
        assert!(BooleanNetwork::from_rules(&[("a", "a"), ("a", "a")]).is_err());
        assert!(BooleanNetwork::from_rules(&[("a", "b")]).is_err());
        assert!(BooleanNetwork::new(vec!["a".into()], vec![Expr::Var(3)]).is_err());
    }

    fn all_subspaces(n: usize) -> Vec<Subspace> {
        (0..3usize.pow(n as u32))
            .map(|mut k| {
                let cells: Vec<Option<bool>> = (0..n)
                    .map(|_| {
                        let d = k % 3;
                        k /= 3;
                        [None, Some(false), Some(true)][d]
                    })
                    .collect();
                Subspace::from_cells(&cells)
            })
            .collect()
    }

    #[test]
    fn leq_agrees_with_state_containment() {
        for n in 1..=4 {
            let all = all_subspaces(n);
            let states: Vec<Vec<u64>> = all
                .iter()
                .map(|p| p.referenced_states(24).unwrap())
                .collect();
            for (p, sp) in all.iter().zip(&states) {
                for (q, sq) in all.iter().zip(&states) {
                    let contained = sp.iter().all(|x| sq.binary_search(x).is_ok());
                    assert_eq!(p.leq(q), contained, "{p} vs {q}");
                }
            }
        }
    }

    #[test]
    fn enclosing_of_referenced_states_is_identity() {
        for n in 1..=6 {
            for p in all_subspaces(n) {
                let codes = p.referenced_states(24).unwrap();
                assert_eq!(Subspace::enclosing_codes(n, &codes).unwrap(), p);
            }
        }
    }

    #[test]
    fn image_subspace_contains_images_of_members() {
        let net = running_example();
        for p in all_subspaces(4) {
            let image = net.image_subspace(&p, CAP).unwrap();
            for code in p.referenced_states(24).unwrap() {
                assert!(image.contains_code(net.image_code(code)));
            }
        }
    }

    #[test]
    fn canonical_order_matches_text_order() {
        let mut v = [s("1101"), s("00--"), s("1---"), s("----")];
        v.sort();
        let text: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        let mut sorted = text.clone();
        sorted.sort();
        assert_eq!(text, sorted);
    }
}
