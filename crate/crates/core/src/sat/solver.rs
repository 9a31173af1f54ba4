use std::time::Instant;

use serde::Serialize;

use super::{Assignment, Cnf, Lit};

/// Resource limits for a single search.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    /// Maximum number of propagated literals plus decisions.
    pub max_effort: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn none() -> Limits {
        Limits::default()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

impl SolveStats {
    /// Machine-independent work measure.
    pub fn effort(&self) -> u64 {
        self.decisions + self.propagations
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Assignment),
    Unsat,
    /// The budget ran out; carries the effort spent.
    Timeout {
        effort: u64,
    },
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat)
    }
}

pub fn solve(cnf: &Cnf) -> SolveOutcome {
    solve_with(cnf, &Limits::none()).0
}

/// DPLL with two watched literals and chronological backtracking.
///
/// Branching is static: variables by descending occurrence count, ties to
/// the lower index, trying `false` first. The search is therefore fully
/// deterministic.
pub fn solve_with(cnf: &Cnf, limits: &Limits) -> (SolveOutcome, SolveStats) {
    let mut s = Solver::new(cnf);
    let out = s.run(limits);
    (out, s.stats)
}

const UNASSIGNED: i8 = 0;

fn lit_val(value: &[i8], l: Lit) -> i8 {
    let v = value[l.var() as usize];
    if l.is_positive() {
        v
    } else {
        -v
    }
}

struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// `watches[lit.index()]`: clauses currently watching `lit`.
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Lit>,
    /// Trail length at the start of each decision level, with the decision
    /// literal and whether it is already the flipped branch.
    levels: Vec<(usize, Lit, bool)>,
    qhead: usize,
    order: Vec<u32>,
    order_pos: Vec<usize>,
    next: usize,
    units: Vec<Lit>,
    empty_clause: bool,
    stats: SolveStats,
}

impl Solver {
    fn new(cnf: &Cnf) -> Solver {
        let n = cnf.num_vars as usize;
        let mut occurrences = vec![0usize; n + 1];
        let mut clauses = Vec::new();
        let mut units = Vec::new();
        let mut empty_clause = false;
        for c in &cnf.clauses {
            for l in c {
                occurrences[l.var() as usize] += 1;
            }
            match c.len() {
                0 => empty_clause = true,
                1 => units.push(c[0]),
                _ => clauses.push(c.clone()),
            }
        }
        let mut watches = vec![Vec::new(); 2 * n];
        for (i, c) in clauses.iter().enumerate() {
            watches[c[0].index()].push(i);
            watches[c[1].index()].push(i);
        }
        let mut order: Vec<u32> = (1..=n as u32).collect();
        order.sort_by(|&a, &b| {
            occurrences[b as usize]
                .cmp(&occurrences[a as usize])
                .then(a.cmp(&b))
        });
        let mut order_pos = vec![0; n + 1];
        for (i, &v) in order.iter().enumerate() {
            order_pos[v as usize] = i;
        }
        Solver {
            num_vars: n,
            clauses,
            watches,
            value: vec![UNASSIGNED; n + 1],
            trail: Vec::new(),
            levels: Vec::new(),
            qhead: 0,
            order,
            order_pos,
            next: 0,
            units,
            empty_clause,
            stats: SolveStats::default(),
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        lit_val(&self.value, l)
    }

    fn enqueue(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            1 => true,
            -1 => false,
            _ => {
                self.value[l.var() as usize] = if l.is_positive() { 1 } else { -1 };
                self.trail.push(l);
                true
            }
        }
    }

    /// Returns `false` on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut watchers = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut conflict = false;
            while i < watchers.len() {
                let ci = watchers[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if lit_val(&self.value, first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    if lit_val(&self.value, l) != -1 {
                        clause.swap(1, k);
                        self.watches[l.index()].push(ci);
                        watchers.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                if !self.enqueue(first) {
                    conflict = true;
                    break;
                }
            }
            self.watches[false_lit.index()].extend(watchers);
            if conflict {
                self.stats.conflicts += 1;
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            let v = l.var() as usize;
            self.value[v] = UNASSIGNED;
            self.next = self.next.min(self.order_pos[v]);
        }
        self.qhead = len;
    }

    fn pick(&mut self) -> Option<u32> {
        while self.next < self.order.len() {
            let v = self.order[self.next];
            if self.value[v as usize] == UNASSIGNED {
                return Some(v);
            }
            self.next += 1;
        }
        None
    }

    fn out_of_budget(&self, limits: &Limits) -> bool {
        if let Some(max) = limits.max_effort {
            if self.stats.effort() > max {
                return true;
            }
        }
        if let Some(deadline) = limits.deadline {
            if self.stats.decisions % 256 == 0 && Instant::now() >= deadline {
                return true;
            }
        }
        false
    }

    fn run(&mut self, limits: &Limits) -> SolveOutcome {
        if self.empty_clause {
            return SolveOutcome::Unsat;
        }
        for l in std::mem::take(&mut self.units) {
            if !self.enqueue(l) {
                return SolveOutcome::Unsat;
            }
        }
        loop {
            if !self.propagate() {
                // Chronological backtracking to the latest unflipped decision.
                loop {
                    let Some((len, lit, flipped)) = self.levels.pop() else {
                        return SolveOutcome::Unsat;
                    };
                    self.undo_to(len);
                    if !flipped {
                        self.levels.push((len, !lit, true));
                        self.enqueue(!lit);
                        break;
                    }
                }
                continue;
            }
            if self.out_of_budget(limits) {
                return SolveOutcome::Timeout {
                    effort: self.stats.effort(),
                };
            }
            let Some(v) = self.pick() else {
                let values = (1..=self.num_vars).map(|v| self.value[v] == 1).collect();
                return SolveOutcome::Sat(Assignment::from_values(values));
            };
            self.stats.decisions += 1;
            let lit = Lit::neg(v);
            self.levels.push((self.trail.len(), lit, false));
            self.enqueue(lit);
        }
    }
}
