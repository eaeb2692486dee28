//! A small CDCL SAT solver: two watched literals, first-UIP learning,
//! VSIDS branching, Luby restarts and solving under assumptions.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | (!positive) as u32)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;

/// Max-heap of variables keyed by activity.
#[derive(Default)]
struct Heap {
    items: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl Heap {
    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize].is_some()
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.items.swap(i, j);
        self.pos[self.items[i] as usize] = Some(i);
        self.pos[self.items[j] as usize] = Some(j);
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.items[i] as usize] <= act[self.items[parent] as usize] {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.items.len() && act[self.items[l] as usize] > act[self.items[best] as usize] {
                best = l;
            }
            if r < self.items.len() && act[self.items[r] as usize] > act[self.items[best] as usize] {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.items.push(v);
        let i = self.items.len() - 1;
        self.pos[v as usize] = Some(i);
        self.up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.items.is_empty() {
            return None;
        }
        let last = self.items.len() - 1;
        self.swap(0, last);
        let v = self.items.pop().unwrap();
        self.pos[v as usize] = None;
        if !self.items.is_empty() {
            self.down(0, act);
        }
        Some(v)
    }
}

pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    /// Set once the clause set is unsatisfiable without assumptions.
    inconsistent: bool,
    pub stats: Stats,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

fn luby(mut i: u64) -> u64 {
    // 1 1 2 1 1 2 4 ...
    let mut size = 1u64;
    let mut seq = 0u32;
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

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            heap: Heap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            inconsistent: false,
            stats: Stats::default(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn new_var(&mut self) -> Lit {
        let v = self.assigns.len() as u32;
        self.assigns.push(UNDEF);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.activity.push(0.0);
        self.phase.push(true);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.pos.push(None);
        self.heap.insert(v, &self.activity);
        Lit::new(v, true)
    }

    fn value(&self, l: Lit) -> u8 {
        let a = self.assigns[l.var() as usize];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (!l.is_positive()) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn assign(&mut self, l: Lit, reason: u32) {
        let v = l.var() as usize;
        self.assigns[v] = l.is_positive() as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        self.backtrack(0);
        if self.inconsistent {
            return;
        }
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.value(l) {
                1 => return,
                0 => continue,
                _ => {
                    if c.contains(&!l) {
                        return;
                    }
                    if !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => {
                self.assign(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.inconsistent = true;
                }
            }
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> u32 {
        let id = self.clauses.len() as u32;
        self.watches[(!c[0]).index()].push(id);
        self.watches[(!c[1]).index()].push(id);
        self.clauses.push(c);
        id
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cid = ws[i];
                let clause = &mut self.clauses[cid as usize];
                let false_lit = !p;
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_val = {
                    let a = self.assigns[first.var() as usize];
                    if a == UNDEF { UNDEF } else { a ^ (!first.is_positive()) as u8 }
                };
                if first_val == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let a = self.assigns[l.var() as usize];
                    let val = if a == UNDEF { UNDEF } else { a ^ (!l.is_positive()) as u8 };
                    if val != 0 {
                        clause.swap(1, k);
                        let w = !clause[1];
                        self.watches[w.index()].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    ws.swap_remove(i);
                    continue;
                }
                if first_val == 0 {
                    conflict = Some(cid);
                    self.qhead = self.trail.len();
                    break;
                }
                self.assign(first, cid);
                i += 1;
            }
            let rest = std::mem::replace(&mut self.watches[p.index()], ws);
            self.watches[p.index()].extend(rest);
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if let Some(i) = self.heap.pos[v as usize] {
            self.heap.up(i, &self.activity);
        }
    }

    fn analyze(&mut self, mut conflict: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let clause = self.clauses[conflict as usize].clone();
            let start = if p.is_some() { 1 } else { 0 };
            for &q in &clause[start..] {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(q.var());
                    if self.level[v] >= self.decision_level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            counter -= 1;
            if counter == 0 {
                break;
            }
            conflict = self.reason[lit.var() as usize];
        }
        learnt[0] = !p.unwrap();
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            back = self.level[learnt[1].var() as usize];
        }
        self.var_inc /= 0.95;
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var() as usize;
            self.phase[v] = l.is_positive();
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    /// Decides satisfiability of the clauses together with the assumptions.
    pub fn solve(&mut self, assumptions: &[Lit]) -> bool {
        self.backtrack(0);
        if self.inconsistent {
            return false;
        }
        let mut restart = 0u64;
        loop {
            let budget = 100 * luby(restart);
            match self.search(assumptions, budget) {
                Some(r) => {
                    if !r {
                        self.backtrack(0);
                    }
                    return r;
                }
                None => restart += 1,
            }
        }
    }

    /// `Some(answer)` or `None` when the conflict budget ran out.
    fn search(&mut self, assumptions: &[Lit], budget: u64) -> Option<bool> {
        let mut conflicts = 0u64;
        loop {
            if let Some(c) = self.propagate() {
                if self.decision_level() == 0 {
                    self.inconsistent = true;
                    return Some(false);
                }
                conflicts += 1;
                self.stats.conflicts += 1;
                let (learnt, back) = self.analyze(c);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], NO_REASON);
                } else {
                    let first = learnt[0];
                    let id = self.attach(learnt);
                    self.assign(first, id);
                }
                continue;
            }
            if conflicts >= budget {
                self.backtrack(0);
                return None;
            }
            let mut next = None;
            while (self.decision_level() as usize) < assumptions.len() {
                let a = assumptions[self.decision_level() as usize];
                match self.value(a) {
                    1 => self.trail_lim.push(self.trail.len()),
                    0 => return Some(false),
                    _ => {
                        next = Some(a);
                        break;
                    }
                }
            }
            if next.is_none() {
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assigns[v as usize] == UNDEF {
                        next = Some(Lit::new(v, self.phase[v as usize]));
                        break;
                    }
                }
            }
            match next {
                None => return Some(true),
                Some(l) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.assign(l, NO_REASON);
                }
            }
        }
    }

    /// Value of a literal in the last satisfying assignment.
    pub fn model_value(&self, l: Lit) -> bool {
        self.value(l) == 1
    }
}
