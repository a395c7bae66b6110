//! SAT solving: a CDCL solver and a pure enumerator for cross-checks.
//!
//! The CDCL solver uses two watched literals, first-UIP clause learning,
//! VSIDS branching with phase saving, and Luby restarts.

use thiserror::Error;

use super::tseitin::Cnf;

/// Largest variable budget [`sat_brute_force`] accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 26;
/// Largest variable count [`enumerate`] accepts.
pub const MAX_ENUMERATE_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Vec<bool>),
    Unsat,
    /// The conflict limit was reached.
    Unknown,
}

impl SatOutcome {
    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatOutcome::Sat(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("budget {0} exceeds {MAX_BRUTE_FORCE_VARS}")]
    Budget(usize),
    #[error("{vars} variables exceed the budget of {budget}")]
    TooManyVars { vars: usize, budget: usize },
}

/// Tries every assignment. Cross-check only.
pub fn enumerate(cnf: &Cnf) -> Result<SatOutcome, SatError> {
    if cnf.num_vars > MAX_ENUMERATE_VARS {
        return Err(SatError::TooManyVars {
            vars: cnf.num_vars,
            budget: MAX_ENUMERATE_VARS,
        });
    }
    for m in 0u64..(1 << cnf.num_vars) {
        let a: Vec<bool> = (0..cnf.num_vars).map(|i| (m >> i) & 1 == 1).collect();
        if cnf.satisfied_by(&a) {
            return Ok(SatOutcome::Sat(a));
        }
    }
    Ok(SatOutcome::Unsat)
}

/// Budgeted search: refuses instances over `var_budget` variables.
pub fn sat_brute_force(cnf: &Cnf, var_budget: usize) -> Result<SatOutcome, SatError> {
    if var_budget > MAX_BRUTE_FORCE_VARS {
        return Err(SatError::Budget(var_budget));
    }
    if cnf.num_vars > var_budget {
        return Err(SatError::TooManyVars {
            vars: cnf.num_vars,
            budget: var_budget,
        });
    }
    Ok(solve(cnf))
}

/// Complete CDCL search.
pub fn solve(cnf: &Cnf) -> SatOutcome {
    Solver::new(cnf).run(None)
}

/// CDCL search giving up after `max_conflicts`.
pub fn solve_with_limit(cnf: &Cnf, max_conflicts: u64) -> SatOutcome {
    Solver::new(cnf).run(Some(max_conflicts))
}

type Lit = u32;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + (dimacs < 0) as u32
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNASSIGNED: u8 = 2;

fn luby(mut i: u64) -> u64 {
    // i is 1-based.
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl VarHeap {
    fn new(n: usize) -> Self {
        Self {
            heap: Vec::with_capacity(n),
            pos: vec![ABSENT; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != ABSENT
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let p = (i - 1) / 2;
            if act[self.heap[p]] >= act[self.heap[i]] {
                break;
            }
            self.swap(i, p);
            i = p;
        }
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && act[self.heap[r]] > act[self.heap[l]] { r } else { l };
            if act[self.heap[c]] <= act[self.heap[i]] {
                break;
            }
            self.swap(i, c);
            i = c;
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i]] = i;
        self.pos[self.heap[j]] = j;
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = ABSENT;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.down(0, act);
        }
        Some(top)
    }
}

struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    assign: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    inc: f64,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    trivially_unsat: bool,
}

impl Solver {
    fn new(cnf: &Cnf) -> Self {
        let n = cnf.num_vars;
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assign: vec![UNASSIGNED; n],
            level: vec![0; n],
            reason: vec![None; n],
            phase: vec![false; n],
            activity: vec![0.0; n],
            inc: 1.0,
            heap: VarHeap::new(n),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; n],
            trivially_unsat: false,
        };
        for v in 0..n {
            s.heap.insert(v, &s.activity);
        }
        for clause in &cnf.clauses {
            let mut c: Vec<Lit> = clause.iter().map(|&l| lit_of(l)).collect();
            c.sort_unstable();
            c.dedup();
            if c.windows(2).any(|w| w[0] == neg(w[1])) {
                continue;
            }
            match c.len() {
                0 => s.trivially_unsat = true,
                1 => match s.value(c[0]) {
                    Some(true) => {}
                    Some(false) => s.trivially_unsat = true,
                    None => s.enqueue(c[0], None),
                },
                _ => {
                    s.attach(c);
                }
            }
        }
        s
    }

    fn value(&self, l: Lit) -> Option<bool> {
        match self.assign[var(l)] {
            UNASSIGNED => None,
            a => Some((a == 1) != (l & 1 == 1)),
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.assign[v] = (l & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[c[0] as usize].push(idx);
        self.watches[c[1] as usize].push(idx);
        self.clauses.push(c);
        idx
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == Some(true) {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci][k];
                    if self.value(l) != Some(false) {
                        self.clauses[ci].swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == Some(false) {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn analyze(&mut self, confl: usize) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = confl;
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let lits: Vec<Lit> = self.clauses[confl][start..].to_vec();
            for q in lits {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[var(pl)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(pl)].expect("implied literal has a reason");
        }
        learnt[0] = neg(p.expect("conflict has a UIP"));
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var(learnt[1])];
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for idx in (lim..self.trail.len()).rev() {
            let l = self.trail[idx];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNASSIGNED;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
        self.qhead = lim;
    }

    fn decide(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v] == UNASSIGNED {
                return Some(2 * v as u32 + (!self.phase[v]) as u32);
            }
        }
        None
    }

    fn run(mut self, max_conflicts: Option<u64>) -> SatOutcome {
        if self.trivially_unsat || self.propagate().is_some() {
            return SatOutcome::Unsat;
        }
        let mut conflicts = 0u64;
        let mut restart_no = 1u64;
        let mut until_restart = 100 * luby(restart_no);
        loop {
            if let Some(confl) = self.propagate() {
                conflicts += 1;
                if self.decision_level() == 0 {
                    return SatOutcome::Unsat;
                }
                if max_conflicts.is_some_and(|m| conflicts >= m) {
                    return SatOutcome::Unknown;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let idx = self.attach(learnt);
                    self.enqueue(asserting, Some(idx));
                }
                self.inc /= 0.95;
                until_restart = until_restart.saturating_sub(1);
            } else {
                if until_restart == 0 {
                    restart_no += 1;
                    until_restart = 100 * luby(restart_no);
                    self.backtrack(0);
                    continue;
                }
                match self.decide() {
                    None => {
                        let model = (0..self.num_vars).map(|v| self.assign[v] == 1).collect();
                        return SatOutcome::Sat(model);
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cnf(num_vars: usize, clauses: &[&[i32]]) -> Cnf {
        Cnf {
            num_vars,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
        }
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(seq, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn small_cases() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]])), SatOutcome::Unsat);
        assert_eq!(solve(&cnf(1, &[&[]])), SatOutcome::Unsat);
        assert_eq!(
            sat_brute_force(&cnf(2, &[&[1, 2], &[-1]]), 26),
            Ok(SatOutcome::Sat(vec![false, true]))
        );
        assert_eq!(sat_brute_force(&cnf(1, &[&[1], &[-1]]), 26), Ok(SatOutcome::Unsat));
        let f = cnf(3, &[&[1, 2], &[-1, 3], &[-3, -2]]);
        let m = solve(&f).model().unwrap().to_vec();
        assert!(f.satisfied_by(&m));
    }

    /// Pigeonhole: `p + 1` pigeons in `p` holes.
    fn pigeonhole(p: usize) -> Cnf {
        let v = |i: usize, h: usize| (i * p + h + 1) as i32;
        let mut clauses = Vec::new();
        for i in 0..=p {
            clauses.push((0..p).map(|h| v(i, h)).collect());
        }
        for h in 0..p {
            for i in 0..=p {
                for j in i + 1..=p {
                    clauses.push(vec![-v(i, h), -v(j, h)]);
                }
            }
        }
        Cnf {
            num_vars: (p + 1) * p,
            clauses,
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        for p in 2..=6 {
            assert_eq!(solve(&pigeonhole(p)), SatOutcome::Unsat, "p = {p}");
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let f = pigeonhole(5);
        assert_eq!(sat_brute_force(&f, 27), Err(SatError::Budget(27)));
        assert!(matches!(sat_brute_force(&f, 20), Err(SatError::TooManyVars { .. })));
        assert_eq!(sat_brute_force(&pigeonhole(4), 20), Ok(SatOutcome::Unsat));
        assert!(enumerate(&pigeonhole(5)).is_err());
    }

    fn random_3cnf() -> impl Strategy<Value = Cnf> {
        (3usize..=12).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            prop::collection::vec(prop::collection::vec(lit, 1..=3), 1..=6 * n)
                .prop_map(move |clauses| Cnf { num_vars: n, clauses })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn cdcl_agrees_with_enumeration(f in random_3cnf()) {
            let slow = enumerate(&f).unwrap();
            let fast = solve(&f);
            match (&slow, &fast) {
                (SatOutcome::Unsat, SatOutcome::Unsat) => {}
                (SatOutcome::Sat(_), SatOutcome::Sat(m)) => prop_assert!(f.satisfied_by(m)),
                _ => prop_assert!(false, "enumeration {:?} vs cdcl {:?}", slow, fast),
            }
        }
    }
}
