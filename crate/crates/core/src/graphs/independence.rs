//! Exact (weighted) independence number by branch and bound.

use super::Graph;
use crate::error::{Error, Result};

pub const EXACT_SOLVER_LIMIT: usize = 40;

/// `α(G)` and a maximum independent set (sorted).
pub fn independence_number(g: &Graph) -> Result<(usize, Vec<usize>)> {
    let (value, set) = solve(g, &vec![1.0; g.n()])?;
    Ok((value.round() as usize, set))
}

/// `α(G, w)` and a maximum-weight independent set (sorted).
///
/// Zero-weight vertices never appear in the witness.
pub fn weighted_independence(g: &Graph, w: &[f64]) -> Result<(f64, Vec<usize>)> {
    if w.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: w.len(),
        });
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    solve(g, w)
}

struct Search<'a> {
    adj: Vec<u64>,
    w: &'a [f64],
    best: f64,
    best_set: u64,
}

fn solve(g: &Graph, w: &[f64]) -> Result<(f64, Vec<usize>)> {
    let n = g.n();
    if n > EXACT_SOLVER_LIMIT {
        return Err(Error::ExactSolverLimit {
            n,
            limit: EXACT_SOLVER_LIMIT,
        });
    }
    let adj: Vec<u64> = (0..n).map(|i| g.row_mask(i)).collect();
    let cand: u64 = (0..n).filter(|&i| w[i] > 0.0).fold(0, |m, i| m | 1 << i);
    let mut s = Search {
        adj,
        w,
        best: 0.0,
        best_set: 0,
    };
    s.greedy(cand);
    s.branch(cand, 0.0, 0);
    let set: Vec<usize> = (0..n).filter(|&i| s.best_set >> i & 1 == 1).collect();
    Ok((s.best, set))
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

impl Search<'_> {
    fn weight(&self, set: u64) -> f64 {
        bits(set).map(|i| self.w[i]).sum()
    }

    fn greedy(&mut self, mut cand: u64) {
        let mut set = 0;
        while cand != 0 {
            let v = bits(cand)
                .max_by(|&a, &b| {
                    let ka = self.w[a] / (1 + (self.adj[a] & cand).count_ones()) as f64;
                    let kb = self.w[b] / (1 + (self.adj[b] & cand).count_ones()) as f64;
                    ka.total_cmp(&kb).then(b.cmp(&a))
                })
                .expect("non-empty");
            set |= 1 << v;
            cand &= !(self.adj[v] | 1 << v);
        }
        self.best = self.weight(set);
        self.best_set = set;
    }

    /// Greedy clique cover: each clique contributes its heaviest vertex.
    fn cover_bound(&self, cand: u64) -> f64 {
        let mut order: Vec<usize> = bits(cand).collect();
        order.sort_by(|&a, &b| self.w[b].total_cmp(&self.w[a]).then(a.cmp(&b)));
        let mut cliques: Vec<u64> = Vec::new();
        let mut bound = 0.0;
        for v in order {
            match cliques.iter_mut().find(|c| **c & !self.adj[v] == 0) {
                Some(c) => *c |= 1 << v,
                None => {
                    cliques.push(1 << v);
                    bound += self.w[v];
                }
            }
        }
        bound
    }

    fn branch(&mut self, cand: u64, cur: f64, set: u64) {
        if cand == 0 {
            if cur > self.best {
                self.best = cur;
                self.best_set = set;
            }
            return;
        }
        if cur + self.cover_bound(cand) <= self.best + 1e-12 {
            return;
        }
        let v = bits(cand)
            .max_by(|&a, &b| {
                let da = (self.adj[a] & cand).count_ones();
                let db = (self.adj[b] & cand).count_ones();
                da.cmp(&db).then(b.cmp(&a))
            })
            .expect("non-empty");
        let nv = self.adj[v] & cand;
        self.branch(cand & !(nv | 1 << v), cur + self.w[v], set | 1 << v);
        if nv != 0 {
            self.branch(cand & !(1 << v), cur, set);
        }
    }
}
