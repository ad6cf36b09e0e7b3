//! Exhaustive minimum leaf count of a complete tree, by dynamic programming over boxes.

use std::collections::HashMap;

use super::complete::{classify, hull_rows};
use crate::error::{domain, Error, Result};
use crate::kernel::int;
use crate::polyhedra::{HPolyhedron, MixedIntegerSet};

/// Largest number of sub-boxes of the root box the program will visit.
pub const DEFAULT_BOX_CAP: u128 = 200_000;

/// `f(box) = 1` if `box ∩ relax ⊆ conv(P^I)`, else the minimum of `f(L) + f(R)` over
/// every branching `x_i <= t | x_i >= t+1` with both children proper sub-boxes.
pub fn min_complete_tree_size(m: &MixedIntegerSet, cap: u128) -> Result<usize> {
    let n = m.dim();
    if m.int_vars.len() != n {
        return domain("the box program needs every variable to be integer");
    }
    let needed = m
        .upper_bounds
        .iter()
        .fold(1u128, |acc, &u| acc.saturating_mul((u as u128 + 1) * (u as u128 + 2) / 2));
    if needed > cap {
        return Err(Error::Capacity {
            what: "sub-boxes",
            needed,
            limit: cap,
        });
    }
    let hull = hull_rows(m)?;
    let mut root = vec![(0i64, 0i64); n];
    for (&i, &u) in m.int_vars.iter().zip(&m.upper_bounds) {
        root[i] = (0, u as i64);
    }
    let mut dp = Dp {
        m,
        hull: hull.as_ref(),
        memo: HashMap::new(),
    };
    Ok(dp.solve(&root))
}

struct Dp<'a> {
    m: &'a MixedIntegerSet,
    hull: Option<&'a HPolyhedron>,
    memo: HashMap<Vec<(i64, i64)>, usize>,
}

impl Dp<'_> {
    fn solve(&mut self, b: &[(i64, i64)]) -> usize {
        if let Some(&v) = self.memo.get(b) {
            return v;
        }
        let v = if self.contained(b) {
            1
        } else {
            let mut best = usize::MAX;
            for i in 0..b.len() {
                let (lo, hi) = b[i];
                for t in lo..hi {
                    let mut l = b.to_vec();
                    l[i].1 = t;
                    let mut r = b.to_vec();
                    r[i].0 = t + 1;
                    let s = self.solve(&l) + self.solve(&r);
                    best = best.min(s);
                }
            }
            best
        };
        self.memo.insert(b.to_vec(), v);
        v
    }

    fn contained(&self, b: &[(i64, i64)]) -> bool {
        classify(&self.polytope(b), self.hull).is_ok()
    }

    fn polytope(&self, b: &[(i64, i64)]) -> HPolyhedron {
        let n = b.len();
        let mut h = self.m.relax.clone();
        for (i, &(lo, hi)) in b.iter().enumerate() {
            let mut e = vec![int(0); n];
            e[i] = int(1);
            h.add_le(e.clone(), int(hi));
            h.add_ge(e, int(lo));
        }
        h
    }
}
