//! Conflict-driven search for inclusion-extremal 0-1 assignments.
//!
//! Variables `0..arcs` are the arc indicators `x_a` (arc id `a` is variable
//! `a - 1`), variables `arcs..arcs + 2n` are the literal indicators `y_i^c`
//! (literal index `2i + c`). Constraints are clauses, propagated with two
//! watched literals; conflicts are analysed to first-UIP learned clauses.
//!
//! Every decision assigns the preferred value (1 when maximizing, 0 when
//! minimizing), and the literal indicators are functions of the arc
//! indicators. Any other assignment on the trail is therefore implied by the
//! clauses, so if a model `M'` strictly beyond the returned model `M` in the
//! preferred direction existed, the first trail entry where they disagree
//! would be a sound implication that `M'` violates. Hence the first model
//! found is inclusion-extremal over the arc indicators.

use web_time::Instant;

/// `2 * var` is the positive literal, `2 * var + 1` the negative one.
pub(crate) type Lit = u32;

pub(crate) fn pos(var: usize) -> Lit {
    (2 * var) as Lit
}

pub(crate) fn neg(var: usize) -> Lit {
    (2 * var + 1) as Lit
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Inclusion-maximal set of selected arcs.
    Maximize,
    /// Inclusion-minimal set of selected arcs.
    Minimize,
}

pub(crate) enum Outcome {
    Extremal(Vec<bool>),
    Infeasible,
    TimedOut,
}

const UNASSIGNED: i8 = 0;
const NO_REASON: u32 = u32::MAX;
const RESTART_UNIT: u64 = 128;
const CHECK_INTERVAL: u64 = 512;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
}

/// Max-heap of variables keyed by activity; ties go to the smaller index.
struct VarHeap {
    heap: Vec<u32>,
    /// Position in `heap`, or `u32::MAX` when absent.
    index: Vec<u32>,
}

impl VarHeap {
    fn new(vars: usize) -> Self {
        VarHeap {
            heap: (0..vars as u32).collect(),
            index: (0..vars as u32).collect(),
        }
    }

    fn before(a: u32, b: u32, activity: &[f64]) -> bool {
        let (x, y) = (activity[a as usize], activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.index.get(v).is_some_and(|&i| i != u32::MAX)
    }

    fn sift_up(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::before(v, self.heap[parent], activity) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.index[self.heap[i] as usize] = i as u32;
            i = parent;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as u32;
    }

    fn sift_down(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len()
                && Self::before(self.heap[right], self.heap[left], activity)
            {
                right
            } else {
                left
            };
            if !Self::before(self.heap[child], v, activity) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.index[self.heap[i] as usize] = i as u32;
            i = child;
        }
        self.heap[i] = v;
        self.index[v as usize] = i as u32;
    }

    fn insert(&mut self, v: usize, activity: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v as u32);
        self.index[v] = (self.heap.len() - 1) as u32;
        self.sift_up(self.heap.len() - 1, activity);
    }

    fn pop(&mut self, activity: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.index[top as usize] = u32::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.index[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top as usize)
    }

    fn increased(&mut self, v: usize, activity: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.index[v] as usize, activity);
        }
    }
}

fn luby(mut i: u64) -> u64 {
    // i-th element (0-based) of 1 1 2 1 1 2 4 ...
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub(crate) struct Engine {
    arcs: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    /// False once the clauses are unsatisfiable.
    ok: bool,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    queue_head: usize,
    activity: Vec<f64>,
    bump: f64,
    heap: VarHeap,
    seen: Vec<bool>,
    learnt_count: usize,
    max_learnts: usize,
    /// Decisions made over the engine's lifetime.
    pub(crate) nodes: u64,
    conflicts: u64,
}

impl Engine {
    /// `literals` is the number of literal indicators; `heads` is accepted
    /// for symmetry with the encoding and only fixes the arc count.
    pub(crate) fn new(heads: Vec<usize>, literals: usize) -> Self {
        let arcs = heads.len();
        let vars = arcs + literals;
        let activity = vec![0.0; vars];
        Engine {
            arcs,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * vars],
            ok: true,
            assign: vec![UNASSIGNED; vars],
            level: vec![0; vars],
            reason: vec![NO_REASON; vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            queue_head: 0,
            activity,
            bump: 1.0,
            heap: VarHeap::new(arcs),
            seen: vec![false; vars],
            learnt_count: 0,
            max_learnts: 4096,
            nodes: 0,
            conflicts: 0,
        }
    }

    pub(crate) fn x(&self, arc_index: usize) -> usize {
        arc_index
    }

    pub(crate) fn y(&self, literal: usize) -> usize {
        self.arcs + literal
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.assign[(lit >> 1) as usize];
        if lit & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Add a clause; only valid between searches (at decision level 0).
    pub(crate) fn add_clause(&mut self, mut clause: Vec<Lit>) {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return;
        }
        clause.sort_unstable();
        clause.dedup();
        if clause.windows(2).any(|w| w[0] ^ 1 == w[1]) || clause.iter().any(|&l| self.value(l) == 1)
        {
            return;
        }
        clause.retain(|&l| self.value(l) != -1);
        match clause.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(clause[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(clause, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let index = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(index);
        self.watches[lits[1] as usize].push(index);
        self.clauses.push(Clause { lits, learnt });
        if learnt {
            self.learnt_count += 1;
        }
        index
    }

    fn enqueue(&mut self, lit: Lit, reason: u32) {
        let var = (lit >> 1) as usize;
        debug_assert_eq!(self.assign[var], UNASSIGNED);
        self.assign[var] = if lit & 1 == 1 { -1 } else { 1 };
        self.level[var] = self.decision_level();
        self.reason[var] = reason;
        self.trail.push(lit);
    }

    /// Unit propagation; the index of a falsified clause on conflict.
    fn propagate(&mut self) -> Option<u32> {
        while self.queue_head < self.trail.len() {
            let falsified = self.trail[self.queue_head] ^ 1;
            self.queue_head += 1;
            let mut watchers = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < watchers.len() {
                let ci = watchers[i];
                let lits = &mut self.clauses[ci as usize].lits;
                if lits[0] == falsified {
                    lits.swap(0, 1);
                }
                let other = lits[0];
                let other_value = {
                    let v = self.assign[(other >> 1) as usize];
                    if other & 1 == 1 {
                        -v
                    } else {
                        v
                    }
                };
                if other_value == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    let v = self.assign[(l >> 1) as usize];
                    let lv = if l & 1 == 1 { -v } else { v };
                    if lv != -1 {
                        lits.swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    watchers.swap_remove(i);
                    continue;
                }
                i += 1;
                if other_value == -1 {
                    conflict = Some(ci);
                    break;
                }
                self.enqueue(other, ci);
            }
            self.watches[falsified as usize] = watchers;
            if conflict.is_some() {
                self.queue_head = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for k in start..self.trail.len() {
            let var = (self.trail[k] >> 1) as usize;
            self.assign[var] = UNASSIGNED;
            self.reason[var] = NO_REASON;
            if var < self.arcs {
                self.heap.insert(var, &self.activity);
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.queue_head = start;
    }

    fn bump_var(&mut self, var: usize) {
        self.activity[var] += self.bump;
        if self.activity[var] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
        }
        if var < self.arcs {
            self.heap.increased(var, &self.activity);
        }
    }

    /// First-UIP learned clause (asserting literal first) and the level to
    /// return to.
    fn analyze(&mut self, mut conflict: u32) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0;
        let mut index = self.trail.len();
        let mut asserting: Option<Lit> = None;
        loop {
            let skip = usize::from(asserting.is_some());
            for k in skip..self.clauses[conflict as usize].lits.len() {
                let q = self.clauses[conflict as usize].lits[k];
                let var = (q >> 1) as usize;
                if !self.seen[var] && self.level[var] > 0 {
                    self.seen[var] = true;
                    self.bump_var(var);
                    if self.level[var] == current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let p = self.trail[index];
            let var = (p >> 1) as usize;
            self.seen[var] = false;
            pending -= 1;
            asserting = Some(p);
            if pending == 0 {
                break;
            }
            conflict = self.reason[var];
        }
        learnt[0] = asserting.expect("conflict above level 0") ^ 1;
        for &l in &learnt[1..] {
            self.seen[(l >> 1) as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[(learnt[k] >> 1) as usize] > self.level[(learnt[best] >> 1) as usize]
                {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.level[(learnt[1] >> 1) as usize];
        }
        self.bump *= 1.0 / 0.95;
        (learnt, back)
    }

    /// Drop the longer half of the learned clauses. Only at level 0, where no
    /// reason is ever consulted again.
    fn reduce_learnts(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut lengths: Vec<usize> = self
            .clauses
            .iter()
            .filter(|c| c.learnt && c.lits.len() > 2)
            .map(|c| c.lits.len())
            .collect();
        if lengths.is_empty() {
            return;
        }
        lengths.sort_unstable();
        let threshold = lengths[lengths.len() / 2];
        let clauses = std::mem::take(&mut self.clauses);
        for w in &mut self.watches {
            w.clear();
        }
        for r in &mut self.reason {
            *r = NO_REASON;
        }
        self.learnt_count = 0;
        for mut c in clauses {
            if c.learnt && c.lits.len() > 2 && c.lits.len() >= threshold {
                continue;
            }
            if c.lits.iter().any(|&l| self.value(l) == 1) {
                continue;
            }
            // level 0 is fully propagated, so at least two literals are open
            c.lits.sort_by_key(|&l| self.value(l) == -1);
            self.attach(c.lits, c.learnt);
        }
    }

    fn pick(&mut self) -> Option<usize> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v] == UNASSIGNED {
                return Some(v);
            }
        }
        (self.arcs..self.assign.len()).find(|&v| self.assign[v] == UNASSIGNED)
    }

    /// Find an assignment whose selected arcs are inclusion-extremal for `goal`.
    pub(crate) fn solve(&mut self, goal: Goal, deadline: Option<Instant>) -> Outcome {
        self.backtrack(0);
        if !self.ok {
            return Outcome::Infeasible;
        }
        let preferred = |var: usize| match goal {
            Goal::Maximize => pos(var),
            Goal::Minimize => neg(var),
        };
        let mut restart = 0u64;
        let mut budget = luby(restart) * RESTART_UNIT;
        let mut steps = 0u64;
        loop {
            steps += 1;
            if steps.is_multiple_of(CHECK_INTERVAL) && deadline.is_some_and(|d| Instant::now() >= d)
            {
                self.backtrack(0);
                return Outcome::TimedOut;
            }
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Outcome::Infeasible;
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let ci = self.attach(learnt, true);
                    self.enqueue(asserting, ci);
                }
                budget = budget.saturating_sub(1);
                if budget == 0 {
                    restart += 1;
                    budget = luby(restart) * RESTART_UNIT;
                    self.backtrack(0);
                    if self.learnt_count > self.max_learnts {
                        if self.propagate().is_some() {
                            self.ok = false;
                            return Outcome::Infeasible;
                        }
                        self.reduce_learnts();
                        self.max_learnts += self.max_learnts / 10;
                    }
                }
                continue;
            }
            match self.pick() {
                Some(var) => {
                    self.nodes += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(preferred(var), NO_REASON);
                }
                None => {
                    debug_assert!(self
                        .clauses
                        .iter()
                        .all(|c| c.lits.iter().any(|&l| self.value(l) == 1)));
                    let x = self.assign[..self.arcs].iter().map(|&v| v == 1).collect();
                    self.backtrack(0);
                    return Outcome::Extremal(x);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(e: &mut Engine, goal: Goal) -> Vec<bool> {
        match e.solve(goal, None) {
            Outcome::Extremal(x) => x,
            _ => panic!("expected a model"),
        }
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    /// Three arcs over one variable, no constraints: all arcs when maximizing
    /// and none when minimizing.
    #[test]
    fn unconstrained_extremes() {
        let mut e = Engine::new(vec![0, 0, 1], 2);
        assert_eq!(model(&mut e, Goal::Maximize), vec![true, true, true]);
        assert_eq!(model(&mut e, Goal::Minimize), vec![false, false, false]);
    }

    #[test]
    fn models_are_inclusion_extremal() {
        // exactly one of three arcs may be chosen, at least one must be
        let mut e = Engine::new(vec![0, 0, 0], 2);
        e.add_clause(vec![pos(0), pos(1), pos(2)]);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            e.add_clause(vec![neg(a), neg(b)]);
        }
        assert_eq!(
            model(&mut e, Goal::Maximize).iter().filter(|&&b| b).count(),
            1
        );
        assert_eq!(
            model(&mut e, Goal::Minimize).iter().filter(|&&b| b).count(),
            1
        );
        // x0 -> x1 and x2 -> (x0 | x1): the only minimal non-empty set is {1}
        let mut e = Engine::new(vec![0, 0, 0], 2);
        e.add_clause(vec![pos(0), pos(1), pos(2)]);
        e.add_clause(vec![neg(0), pos(1)]);
        e.add_clause(vec![neg(2), pos(0), pos(1)]);
        assert_eq!(model(&mut e, Goal::Minimize), vec![false, true, false]);
    }

    #[test]
    fn empty_clause_is_infeasible() {
        let mut e = Engine::new(vec![0], 2);
        e.add_clause(vec![]);
        assert!(matches!(e.solve(Goal::Maximize, None), Outcome::Infeasible));
        let mut e = Engine::new(vec![0], 2);
        e.add_clause(vec![pos(0)]);
        e.add_clause(vec![neg(0)]);
        assert!(matches!(e.solve(Goal::Minimize, None), Outcome::Infeasible));
    }

    #[test]
    fn learns_through_a_pigeonhole_conflict() {
        // three pigeons, two holes: unsatisfiable, found only by search
        let var = |p: usize, h: usize| 2 * p + h;
        let mut e = Engine::new(vec![0; 6], 2);
        for p in 0..3 {
            e.add_clause(vec![pos(var(p, 0)), pos(var(p, 1))]);
        }
        for h in 0..2 {
            for p in 0..3 {
                for q in p + 1..3 {
                    e.add_clause(vec![neg(var(p, h)), neg(var(q, h))]);
                }
            }
        }
        assert!(matches!(e.solve(Goal::Minimize, None), Outcome::Infeasible));
    }
}
