//! Leaf-wise completeness: a tree is complete iff every leaf polytope lies in `conv(P^I)`.
//! Branching on integer thresholds keeps every integer point in some leaf, so the
//! union of the leaves always contains `P^I`.

use rayon::prelude::*;

use super::BBTree;
use crate::error::{dimension, Result};
use crate::kernel::{RatVector, Rational};
use crate::polyhedra::{hull, is_empty, lp_optimize, mixed_integer_hull, HPolyhedron, LpOutcome, MixedIntegerSet, Sense, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafStatus {
    Empty,
    Contained,
    /// `point` is a leaf point outside the integer hull.
    Violating { point: RatVector },
}

impl LeafStatus {
    pub fn label(&self) -> &'static str {
        match self {
            LeafStatus::Empty => "empty",
            LeafStatus::Contained => "contained",
            LeafStatus::Violating { .. } => "violating",
        }
    }

    pub fn is_ok(&self) -> bool {
        !matches!(self, LeafStatus::Violating { .. })
    }
}

/// `conv(P^I)` as rows over the first `m.dim()` coordinates; `None` if `P^I` is empty.
pub(super) fn hull_rows(m: &MixedIntegerSet) -> Result<Option<HPolyhedron>> {
    let v = mixed_integer_hull(m, DEFAULT_ENUMERATION_CAP)?;
    if v.is_empty() {
        return Ok(None);
    }
    Ok(Some(hull(&v.vertices)?))
}

/// Maximizes every hull row over `leaf`, whose leading coordinates are the hull's.
pub(super) fn classify(leaf: &HPolyhedron, h: Option<&HPolyhedron>) -> LeafStatus {
    if is_empty(leaf) {
        return LeafStatus::Empty;
    }
    let h = match h {
        Some(h) => h,
        None => {
            let point = crate::polyhedra::lp_feasible_point(leaf).expect("nonempty leaf");
            return LeafStatus::Violating { point };
        }
    };
    let pad = |a: &[Rational], s: &Rational| -> RatVector {
        let mut c: Vec<Rational> = a.iter().map(|x| x * s).collect();
        c.resize(leaf.dim(), Rational::from_integer(0.into()));
        RatVector(c)
    };
    let one = Rational::from_integer(1.into());
    for r in h.rows() {
        let signs: &[Rational] = if r.is_eq { &[one.clone(), -one.clone()] } else { std::slice::from_ref(&one) };
        for s in signs {
            match lp_optimize(leaf, &pad(r.a, s), Sense::Max) {
                LpOutcome::Optimal { value, point, .. } => {
                    if value > r.b * s {
                        return LeafStatus::Violating { point };
                    }
                }
                LpOutcome::Unbounded => {
                    let point = crate::polyhedra::lp_feasible_point(leaf).expect("nonempty leaf");
                    return LeafStatus::Violating { point };
                }
                LpOutcome::Infeasible { .. } => unreachable!("leaf checked nonempty"),
            }
        }
    }
    LeafStatus::Contained
}

fn statuses(tree: &BBTree, h: Option<&HPolyhedron>) -> Vec<(usize, LeafStatus)> {
    tree.leaves()
        .into_par_iter()
        .map(|id| (id, classify(&tree.node_polytope(id), h)))
        .collect()
}

/// Status of every leaf against `conv` of the tree's own target.
pub fn leaf_statuses(tree: &BBTree) -> Result<Vec<(usize, LeafStatus)>> {
    let h = hull_rows(&tree.target)?;
    Ok(statuses(tree, h.as_ref()))
}

/// Status of every leaf projected onto the first `origin.dim()` coordinates,
/// against `conv(origin^I)`.
pub fn leaf_statuses_projected(tree: &BBTree, origin: &MixedIntegerSet) -> Result<Vec<(usize, LeafStatus)>> {
    if origin.dim() > tree.target.dim() {
        return dimension("origin has more variables than the tree's target");
    }
    let h = hull_rows(origin)?;
    Ok(statuses(tree, h.as_ref()).into_iter().map(|(id, s)| (id, truncate(s, origin.dim()))).collect())
}

fn truncate(s: LeafStatus, n: usize) -> LeafStatus {
    match s {
        LeafStatus::Violating { point } => LeafStatus::Violating {
            point: RatVector(point.0[..n].to_vec()),
        },
        s => s,
    }
}

pub fn check_complete(tree: &BBTree) -> Result<bool> {
    Ok(leaf_statuses(tree)?.iter().all(|(_, s)| s.is_ok()))
}

/// Completeness of a tree over an extension, measured in the original x-space.
pub fn check_complete_projected(tree: &BBTree, origin: &MixedIntegerSet) -> Result<bool> {
    Ok(leaf_statuses_projected(tree, origin)?.iter().all(|(_, s)| s.is_ok()))
}
