//! Exact branch-and-bound search for maximum partial spreads at small
//! parameters, and a seeded greedy heuristic.
//!
//! The exact search branches on points. At every node it picks the open
//! point lying on the fewest surviving candidates and either covers it by one
//! of those candidates or declares it a hole. The first member is fixed to
//! the span of the first `t` coordinates.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::SpreadParams;
use crate::construct::PartialSpread;
use crate::gf::Field;
use crate::linalg::{
    encode_vector, enumerate_subspaces, gaussian_binomial, normalized_vectors, Subspace,
};

/// Above this many candidate subspaces the exact search is not attempted.
pub const DEFAULT_MAX_SUBSPACES: u64 = 200_000;

/// Limits for [`max_partial_spread`]; whichever is hit first stops the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
    pub max_subspaces: u64,
    /// Seed for the greedy fallback when the subspace cap is exceeded.
    pub greedy_seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            max_time: Duration::from_secs(300),
            max_subspaces: DEFAULT_MAX_SUBSPACES,
            greedy_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    /// The tree was exhausted; `best_size` is the maximum.
    Exact,
    /// Too many subspaces to search; the witness comes from [`greedy_spread`].
    LowerWitnessOnly,
    /// Node or time budget ran out; the witness is the incumbent.
    BudgetExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    #[serde(flatten)]
    pub params: SpreadParams,
    pub best_size: usize,
    pub witness: PartialSpread,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    /// Seconds.
    pub wall_time: f64,
}

/// Single-threaded [`max_partial_spread_threads`].
pub fn max_partial_spread(params: &SpreadParams, budget: &SearchBudget) -> SearchResult {
    max_partial_spread_threads(params, budget, 1)
}

/// Maximum partial spread search. Top-level branches are shared among
/// `threads` workers; the maximum found does not depend on the thread count,
/// the witness may.
pub fn max_partial_spread_threads(
    params: &SpreadParams,
    budget: &SearchBudget,
    threads: usize,
) -> SearchResult {
    let start = Instant::now();
    let field = Field::with_order(params.q()).expect("params carry a prime power");
    let (n, t) = (params.n() as usize, params.t() as usize);
    let count = gaussian_binomial(n as u32, t as u32, params.q());
    let candidates = match enumerate_subspaces(n, t, &field, budget.max_subspaces) {
        Ok(it) if count <= BigUint::from(budget.max_subspaces) => it.collect::<Vec<_>>(),
        _ => {
            let witness = greedy_spread(params, budget.greedy_seed);
            return SearchResult {
                params: *params,
                best_size: witness.len(),
                witness,
                status: SearchStatus::LowerWitnessOnly,
                nodes_explored: 0,
                wall_time: start.elapsed().as_secs_f64(),
            };
        }
    };

    let problem = Problem::new(&field, n, &candidates);
    let shared = Shared {
        best: AtomicUsize::new(1),
        witness: Mutex::new(vec![0]),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        deadline: start + budget.max_time,
        max_nodes: budget.max_nodes,
    };

    let mut root = State::new(&problem);
    root.take(&problem, 0);
    let branches = root.branches(&problem);
    let next = AtomicUsize::new(0);
    let worker = || {
        let mut state = root.clone();
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(&branch) = branches.get(i) else { break };
            if shared.stop.load(Ordering::Relaxed) {
                break;
            }
            let mark = state.apply(&problem, branch);
            state.search(&problem, &shared);
            state.undo(&problem, mark);
        }
    };
    let threads = threads.max(1);
    if threads == 1 || branches.len() <= 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }

    let chosen = shared.witness.into_inner().expect("no worker panicked");
    let members = chosen.iter().map(|&i| candidates[i].clone()).collect();
    let mut witness = PartialSpread::new(*params, members).expect("field already built");
    witness.verify();
    let status = if shared.stop.load(Ordering::Relaxed) {
        SearchStatus::BudgetExhausted
    } else {
        SearchStatus::Exact
    };
    SearchResult {
        params: *params,
        best_size: chosen.len(),
        witness,
        status,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        wall_time: start.elapsed().as_secs_f64(),
    }
}

struct Problem {
    /// Point indices of each candidate.
    lines: Vec<Vec<u32>>,
    /// Candidates through each point.
    through: Vec<Vec<u32>>,
    per_member: usize,
}

impl Problem {
    fn new(field: &Field, n: usize, candidates: &[Subspace]) -> Self {
        let q = field.order();
        let mut index = vec![u32::MAX; (q as usize).pow(n as u32)];
        let mut points = 0u32;
        for v in normalized_vectors(q, n) {
            index[encode_vector(q, &v)] = points;
            points += 1;
        }
        let lines: Vec<Vec<u32>> = candidates
            .iter()
            .map(|s| s.point_codes().iter().map(|&c| index[c]).collect())
            .collect();
        let mut through = vec![Vec::new(); points as usize];
        for (c, pts) in lines.iter().enumerate() {
            for &p in pts {
                through[p as usize].push(c as u32);
            }
        }
        let per_member = lines.first().map_or(1, Vec::len);
        Problem {
            lines,
            through,
            per_member,
        }
    }
}

struct Shared {
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    deadline: Instant,
    max_nodes: u64,
}

impl Shared {
    fn offer(&self, chosen: &[usize]) {
        let size = chosen.len();
        if self.best.fetch_max(size, Ordering::SeqCst) < size {
            let mut w = self.witness.lock().expect("no worker panicked");
            if w.len() < size {
                *w = chosen.to_vec();
            }
        }
    }

    fn tick(&self) -> bool {
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if k > self.max_nodes || (k.is_multiple_of(1024) && Instant::now() >= self.deadline) {
            self.stop.store(true, Ordering::Relaxed);
        }
        self.stop.load(Ordering::Relaxed)
    }
}

const OPEN: u8 = 0;
const COVERED: u8 = 1;
const HOLE: u8 = 2;

#[derive(Debug, Clone, Copy)]
enum Branch {
    Take(usize),
    Hole(usize),
}

#[derive(Clone)]
struct State {
    point_state: Vec<u8>,
    /// Alive candidates through each point.
    degree: Vec<u32>,
    alive: Vec<bool>,
    alive_count: usize,
    /// Open points with positive degree.
    coverable: usize,
    chosen: Vec<usize>,
    killed: Vec<u32>,
    marked: Vec<u32>,
}

#[derive(Clone, Copy)]
struct Mark {
    killed: usize,
    marked: usize,
    chosen: usize,
}

impl State {
    fn new(p: &Problem) -> Self {
        let degree: Vec<u32> = p.through.iter().map(|c| c.len() as u32).collect();
        State {
            point_state: vec![OPEN; p.through.len()],
            coverable: degree.iter().filter(|&&d| d > 0).count(),
            degree,
            alive: vec![true; p.lines.len()],
            alive_count: p.lines.len(),
            chosen: Vec::new(),
            killed: Vec::new(),
            marked: Vec::new(),
        }
    }

    fn mark(&self) -> Mark {
        Mark {
            killed: self.killed.len(),
            marked: self.marked.len(),
            chosen: self.chosen.len(),
        }
    }

    fn kill(&mut self, p: &Problem, c: usize) {
        self.alive[c] = false;
        self.alive_count -= 1;
        self.killed.push(c as u32);
        for &pt in &p.lines[c] {
            let pt = pt as usize;
            self.degree[pt] -= 1;
            if self.degree[pt] == 0 && self.point_state[pt] == OPEN {
                self.coverable -= 1;
            }
        }
    }

    fn set_point(&mut self, pt: usize, s: u8) {
        if self.degree[pt] > 0 {
            self.coverable -= 1;
        }
        self.point_state[pt] = s;
        self.marked.push(pt as u32);
    }

    fn take(&mut self, p: &Problem, c: usize) {
        self.chosen.push(c);
        for &pt in &p.lines[c] {
            self.set_point(pt as usize, COVERED);
        }
        for &pt in &p.lines[c] {
            for &d in &p.through[pt as usize] {
                if self.alive[d as usize] {
                    self.kill(p, d as usize);
                }
            }
        }
    }

    fn hole(&mut self, p: &Problem, pt: usize) {
        self.set_point(pt, HOLE);
        for &d in &p.through[pt] {
            if self.alive[d as usize] {
                self.kill(p, d as usize);
            }
        }
    }

    fn apply(&mut self, p: &Problem, b: Branch) -> Mark {
        let m = self.mark();
        match b {
            Branch::Take(c) => self.take(p, c),
            Branch::Hole(pt) => self.hole(p, pt),
        }
        m
    }

    fn undo(&mut self, p: &Problem, m: Mark) {
        while self.killed.len() > m.killed {
            let c = self.killed.pop().expect("length checked") as usize;
            self.alive[c] = true;
            self.alive_count += 1;
            for &pt in &p.lines[c] {
                let pt = pt as usize;
                if self.degree[pt] == 0 && self.point_state[pt] == OPEN {
                    self.coverable += 1;
                }
                self.degree[pt] += 1;
            }
        }
        while self.marked.len() > m.marked {
            let pt = self.marked.pop().expect("length checked") as usize;
            self.point_state[pt] = OPEN;
            if self.degree[pt] > 0 {
                self.coverable += 1;
            }
        }
        self.chosen.truncate(m.chosen);
    }

    /// Open point of least positive degree, if any.
    fn pivot(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for (pt, (&s, &d)) in self.point_state.iter().zip(&self.degree).enumerate() {
            if s == OPEN && d > 0 && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, pt));
                if d == 1 {
                    break;
                }
            }
        }
        best.map(|(_, pt)| pt)
    }

    fn branches(&self, p: &Problem) -> Vec<Branch> {
        let Some(pt) = self.pivot() else {
            return Vec::new();
        };
        let mut out: Vec<Branch> = p.through[pt]
            .iter()
            .filter(|&&c| self.alive[c as usize])
            .map(|&c| Branch::Take(c as usize))
            .collect();
        out.push(Branch::Hole(pt));
        out
    }

    fn bound(&self, p: &Problem) -> usize {
        let size = self.chosen.len();
        (size + self.alive_count).min(size + self.coverable / p.per_member)
    }

    fn search(&mut self, p: &Problem, sh: &Shared) {
        if sh.tick() {
            return;
        }
        sh.offer(&self.chosen);
        if self.bound(p) <= sh.best.load(Ordering::Relaxed) {
            return;
        }
        for b in self.branches(p) {
            let m = self.apply(p, b);
            self.search(p, sh);
            self.undo(p, m);
            if sh.stop.load(Ordering::Relaxed) || self.bound(p) <= sh.best.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// Above this many `t`-subspaces, [`greedy_spread`] samples random subspaces
/// instead of shuffling the full list.
const GREEDY_ENUMERATION_LIMIT: u64 = 1 << 20;
/// Consecutive rejected samples before the sampling greedy gives up.
const GREEDY_PATIENCE: usize = 256;

/// Adds subspaces one at a time, in a seeded shuffle of the canonical order,
/// whenever they meet no earlier choice. Deterministic for a fixed seed and
/// always verified.
pub fn greedy_spread(params: &SpreadParams, seed: u64) -> PartialSpread {
    let field = Field::with_order(params.q()).expect("params carry a prime power");
    let (n, t) = (params.n() as usize, params.t() as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<Subspace> = Vec::new();

    if let Ok(it) = enumerate_subspaces(n, t, &field, GREEDY_ENUMERATION_LIMIT) {
        let all: Vec<Subspace> = it.collect();
        let problem = Problem::new(&field, n, &all);
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.shuffle(&mut rng);
        let mut covered = vec![false; problem.through.len()];
        for c in order {
            let pts = &problem.lines[c];
            if pts.iter().all(|&pt| !covered[pt as usize]) {
                for &pt in pts {
                    covered[pt as usize] = true;
                }
                members.push(all[c].clone());
            }
        }
    } else {
        let q = field.order();
        let mut misses = 0;
        while misses < GREEDY_PATIENCE {
            let rows: Vec<Vec<u32>> = (0..t)
                .map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            let s = Subspace::span(&field, n, &rows).expect("entries are field elements");
            let fits = s.dim() == t
                && members
                    .iter()
                    .all(|m| m.is_disjoint(&s).expect("same ambient space"));
            if fits {
                members.push(s);
                misses = 0;
            } else {
                misses += 1;
            }
        }
        if members.is_empty() {
            members.push(Subspace::coordinate(&field, n, 0, t));
        }
    }

    let mut spread = PartialSpread::new(*params, members).expect("field already built");
    spread.verify();
    spread
}
