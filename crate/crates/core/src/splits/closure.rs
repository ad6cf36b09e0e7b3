//! Membership, optimization and H-representations for bounded split closures.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{verify_split_cut, ScaledPoint, SplitFamily, SplitSet};
use crate::error::{dimension, Error, Result};
use crate::kernel::{dot, RatVector, Rational};
use crate::polyhedra::{
    hull, lp_optimize, vertices, HPolyhedron, Inequality, LpOutcome, MixedIntegerSet, Sense, UnionMembership,
};

/// Default cap on the cuts added by [`closure_optimize`].
pub const DEFAULT_CUT_CAP: usize = 10_000;

/// Membership in `conv((H ∩ {pi.x <= pi0}) ∪ (H ∩ {pi.x >= pi0 + 1}))`. A separator
/// is re-verified as a split cut before it is returned.
pub fn split_hull_member(p: &[Rational], h: &HPolyhedron, s: &SplitSet) -> UnionMembership {
    let (h1, h2) = s.pieces(h);
    let out = crate::polyhedra::conv_union_member(p, &h1, &h2);
    if let UnionMembership::NonMember { a, b, .. } = &out {
        let cut = Inequality::le(a.clone(), b.clone());
        assert!(verify_split_cut(h, s, &cut).valid, "separator failed split-cut verification");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosureMembership {
    /// `p` lies in `conv(P \ S)` for every split of the family. This is evidence for
    /// the bounded family only, not for the full split closure.
    Member {
        /// Splits of the family whose slab contains `p`.
        candidates: usize,
        /// Candidates that needed the disjunctive LP.
        lp_checks: usize,
    },
    /// Certified: `separator` is valid for `conv(P \ S)` and cuts off `p`. `split` is
    /// `None` when `p` already violates the relaxation.
    NonMember { split: Option<SplitSet>, separator: Inequality },
}

impl ClosureMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ClosureMembership::Member { .. })
    }
}

/// Segments `[v, w]` through `p` with both ends in the polyhedron: `v` a vertex,
/// `w` where the ray from `v` through `p` leaves. A split with `v` and `w` both
/// outside its slab cannot separate `p`.
struct SegmentPool {
    ends: Vec<(ScaledPoint, ScaledPoint)>,
}

impl SegmentPool {
    fn new(h: &HPolyhedron, verts: &[RatVector], p: &[Rational]) -> Self {
        let mut ends = Vec::new();
        for v in verts {
            let d: Vec<Rational> = p.iter().zip(v.iter()).map(|(a, b)| a - b).collect();
            if d.iter().all(|x| x == &Rational::from_integer(0.into())) {
                continue;
            }
            let mut t: Option<Rational> = None;
            for r in h.rows() {
                if r.is_eq {
                    continue;
                }
                let ad = dot(r.a, &d);
                if ad > Rational::from_integer(0.into()) {
                    let cand = (r.b - dot(r.a, p)) / ad;
                    if t.as_ref().is_none_or(|t| &cand < t) {
                        t = Some(cand);
                    }
                }
            }
            let t = match t {
                Some(t) if t > Rational::from_integer(0.into()) => t,
                _ => continue,
            };
            let w: Vec<Rational> = p.iter().zip(&d).map(|(a, b)| a + b * &t).collect();
            if let (Some(sv), Some(sw)) = (ScaledPoint::new(v), ScaledPoint::new(&w)) {
                ends.push((sv, sw));
            }
        }
        SegmentPool { ends }
    }

    fn outside(q: &ScaledPoint, pi: &[i64], pi0: i64) -> Option<bool> {
        let v = q.dot(pi)?;
        let lo = (pi0 as i128).checked_mul(q.den)?;
        let hi = (pi0 as i128 + 1).checked_mul(q.den)?;
        Some(v <= lo || v >= hi)
    }

    /// True when some segment certifies `p ∈ conv(P \ S)`.
    fn settles(&self, s: &SplitSet) -> bool {
        let pi: Option<Vec<i64>> = s.pi.iter().map(|v| i64::try_from(v).ok()).collect();
        let (pi, pi0) = match (pi, i64::try_from(&s.pi0).ok()) {
            (Some(pi), Some(pi0)) => (pi, pi0),
            _ => return false,
        };
        self.ends.iter().any(|(v, w)| {
            Self::outside(v, &pi, pi0).unwrap_or(false) && Self::outside(w, &pi, pi0).unwrap_or(false)
        })
    }
}

fn relax_vertices(h: &HPolyhedron) -> Vec<RatVector> {
    vertices(h).map(|v| v.vertices).unwrap_or_default()
}

fn violated_row(h: &HPolyhedron, p: &[Rational]) -> Option<Inequality> {
    for r in h.rows() {
        let lhs = dot(r.a, p);
        if &lhs > r.b {
            return Some(Inequality::le(r.a.iter().cloned().collect(), r.b.clone()));
        }
        if r.is_eq && &lhs < r.b {
            return Some(Inequality::ge(r.a.iter().cloned().collect(), r.b.clone()));
        }
    }
    None
}

/// Scans `candidates` in order; the first split whose hull excludes `p` wins.
fn first_violation(
    p: &[Rational],
    relax: &HPolyhedron,
    pool: &SegmentPool,
    candidates: &[(usize, SplitSet)],
    lp_checks: &AtomicUsize,
) -> Option<(usize, SplitSet, Inequality)> {
    candidates.par_iter().find_map_first(|(key, s)| {
        if pool.settles(s) {
            return None;
        }
        lp_checks.fetch_add(1, Ordering::Relaxed);
        match split_hull_member(p, relax, s) {
            UnionMembership::Member { .. } => None,
            UnionMembership::NonMember { a, b, .. } => Some((*key, s.clone(), Inequality::le(a, b))),
        }
    })
}

/// Is `p` in `conv(P \ S)` for every `S` of the family? A `NonMember` answer is a
/// certificate against the full split closure; a `Member` answer is evidence for the
/// bounded family only.
pub fn closure_member(p: &[Rational], m: &MixedIntegerSet, family: &SplitFamily) -> Result<ClosureMembership> {
    if p.len() != m.dim() || family.dim != m.dim() {
        return dimension("point, set and family dimensions differ");
    }
    if let Some(separator) = violated_row(&m.relax, p) {
        return Ok(ClosureMembership::NonMember { split: None, separator });
    }
    let candidates = family.containing_indexed(p);
    let pool = SegmentPool::new(&m.relax, &relax_vertices(&m.relax), p);
    let lp_checks = AtomicUsize::new(0);
    Ok(match first_violation(p, &m.relax, &pool, &candidates, &lp_checks) {
        Some((_, split, separator)) => ClosureMembership::NonMember {
            split: Some(split),
            separator,
        },
        None => ClosureMembership::Member {
            candidates: candidates.len(),
            lp_checks: lp_checks.into_inner(),
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureOptimum {
    /// Optimum over the family closure (an outer approximation of the split closure,
    /// so a bound on the true optimum).
    pub value: Rational,
    pub point: RatVector,
    pub cuts: Vec<(SplitSet, Inequality)>,
}

/// Cutting-plane loop: optimize over the current relaxation, separate the optimizer
/// with the first violated split (scanning round-robin from the last one that
/// fired), repeat until no split of the family is violated.
pub fn closure_optimize(
    m: &MixedIntegerSet,
    family: &SplitFamily,
    c: &RatVector,
    sense: Sense,
    cut_cap: usize,
) -> Result<ClosureOptimum> {
    if c.len() != m.dim() || family.dim != m.dim() {
        return dimension("objective, set and family dimensions differ");
    }
    let verts = relax_vertices(&m.relax);
    let mut cur = m.relax.clone();
    let mut cuts: Vec<(SplitSet, Inequality)> = Vec::new();
    let mut registry: BTreeSet<(SplitSet, Vec<Rational>)> = BTreeSet::new();
    let mut last_key: Option<usize> = None;
    loop {
        let (value, point) = match lp_optimize(&cur, c, sense) {
            LpOutcome::Optimal { value, point, .. } => (value, point),
            LpOutcome::Infeasible { .. } => return Err(Error::Infeasible("closure relaxation is empty".into())),
            LpOutcome::Unbounded => return Err(Error::Unbounded("closure objective unbounded".into())),
        };
        let mut candidates = family.containing_indexed(&point);
        if let Some(k) = last_key {
            let start = candidates.iter().position(|(key, _)| *key > k).unwrap_or(candidates.len());
            candidates.rotate_left(start);
        }
        let pool = SegmentPool::new(&m.relax, &verts, &point);
        let lp_checks = AtomicUsize::new(0);
        match first_violation(&point, &m.relax, &pool, &candidates, &lp_checks) {
            None => return Ok(ClosureOptimum { value, point, cuts }),
            Some((key, split, cut)) => {
                let mut entry = cut.a.0.clone();
                entry.push(cut.rhs.clone());
                assert!(registry.insert((split.clone(), entry)), "a split cut was generated twice");
                if cuts.len() >= cut_cap {
                    return Err(Error::Capacity {
                        what: "closure cuts",
                        needed: cuts.len() as u128 + 1,
                        limit: cut_cap as u128,
                    });
                }
                let (a, b) = cut.as_le();
                cur.add_le(a.0, b);
                cuts.push((split, cut));
                last_key = Some(key);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectedMembership {
    /// `point` lies in the family closure and agrees with `x` on the fixed coordinates.
    /// Evidence for the bounded family only.
    Member { point: RatVector, cuts: usize },
    /// Certified: the relaxation with these split cuts has no point over `x`; `farkas`
    /// has one multiplier per row of the relaxation, then one per cut, then one per
    /// fixing equation.
    NonMember { cuts: Vec<(SplitSet, Inequality)>, farkas: RatVector },
}

impl ProjectedMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ProjectedMembership::Member { .. })
    }
}

/// Is there a point of the family closure whose coordinates `coords` equal `x`?
/// Cutting-plane search over the fiber `{coords = x}` of the relaxation.
pub fn closure_project_member(
    x: &[Rational],
    coords: &[usize],
    m: &MixedIntegerSet,
    family: &SplitFamily,
    cut_cap: usize,
) -> Result<ProjectedMembership> {
    if x.len() != coords.len() || coords.iter().any(|&j| j >= m.dim()) || family.dim != m.dim() {
        return dimension("fixed coordinates, set and family dimensions differ");
    }
    let n = m.dim();
    let mut cuts: Vec<(SplitSet, Inequality)> = Vec::new();
    loop {
        let mut cur = m.relax.clone();
        for (_, cut) in &cuts {
            let (a, b) = cut.as_le();
            cur.add_le(a.0, b);
        }
        for (&j, v) in coords.iter().zip(x) {
            cur.add_eq(RatVector::unit(n, j).0, v.clone());
        }
        let point = match lp_optimize(&cur, &RatVector::zeros(n), Sense::Max) {
            LpOutcome::Optimal { point, .. } => point,
            LpOutcome::Infeasible { farkas } => return Ok(ProjectedMembership::NonMember { cuts, farkas }),
            LpOutcome::Unbounded => unreachable!("zero objective"),
        };
        match closure_member(&point, m, family)? {
            ClosureMembership::Member { .. } => return Ok(ProjectedMembership::Member { point, cuts: cuts.len() }),
            ClosureMembership::NonMember { split, separator } => {
                let split = split.expect("the point satisfies the relaxation");
                if cuts.len() >= cut_cap {
                    return Err(Error::Capacity {
                        what: "closure cuts",
                        needed: cuts.len() as u128 + 1,
                        limit: cut_cap as u128,
                    });
                }
                cuts.push((split, separator));
            }
        }
    }
}

fn point_in_open_slab(q: &ScaledPoint, s: &SplitSet) -> bool {
    let pi: Option<Vec<i64>> = s.pi.iter().map(|v| i64::try_from(v).ok()).collect();
    match (pi, i64::try_from(&s.pi0).ok()) {
        (Some(pi), Some(pi0)) => match q.dot(&pi) {
            Some(v) => v > pi0 as i128 * q.den && v < (pi0 as i128 + 1) * q.den,
            None => true,
        },
        _ => true,
    }
}

fn any_vertex_inside(verts: &[RatVector], scaled: &[Option<ScaledPoint>], s: &SplitSet) -> bool {
    verts.iter().zip(scaled).any(|(v, sv)| match sv {
        Some(q) => point_in_open_slab(q, s),
        None => s.contains(v),
    })
}

fn empty_polyhedron(names: Vec<String>) -> HPolyhedron {
    let n = names.len();
    let mut h = HPolyhedron::universe_named(names);
    h.add_le(vec![Rational::from_integer(0.into()); n], Rational::from_integer((-1).into()));
    h
}

/// `P ∩ ⋂_S conv(P \ S)` over the family, with an irredundant description.
///
/// Splits whose open slab holds no vertex of the running intersection cannot cut it
/// and are skipped. Only meant for small instances.
pub fn closure_hrep(m: &MixedIntegerSet, family: &SplitFamily, cap: usize) -> Result<HPolyhedron> {
    if family.dim != m.dim() {
        return dimension("set and family dimensions differ");
    }
    let names = m.relax.var_names().to_vec();
    let base = vertices(&m.relax)?.vertices;
    if base.is_empty() {
        return Ok(empty_polyhedron(names));
    }
    let mut cur_verts = base.clone();
    let mut cur = hull(&cur_verts)?;
    let mut used = 0usize;
    for s in family.iter() {
        let scaled: Vec<Option<ScaledPoint>> = cur_verts.iter().map(|v| ScaledPoint::new(v)).collect();
        if !any_vertex_inside(&cur_verts, &scaled, &s) {
            continue;
        }
        used += 1;
        if used > cap {
            return Err(Error::Capacity {
                what: "closure splits",
                needed: used as u128,
                limit: cap as u128,
            });
        }
        let (h1, h2) = s.pieces(&m.relax);
        let mut pts = vertices(&h1)?.vertices;
        pts.extend(vertices(&h2)?.vertices);
        if pts.is_empty() {
            return Ok(empty_polyhedron(names));
        }
        let hs = hull(&pts)?;
        let before = cur.n_rows();
        for r in hs.rows() {
            let cuts_off = cur_verts.iter().any(|v| {
                let lhs = dot(r.a, v);
                &lhs > r.b || (r.is_eq && &lhs < r.b)
            });
            if cuts_off {
                cur.extend_rows([(r.a.to_vec(), r.b.clone(), r.is_eq)]);
            }
        }
        if cur.n_rows() == before {
            continue;
        }
        cur_verts = vertices(&cur)?.vertices;
        if cur_verts.is_empty() {
            return Ok(empty_polyhedron(names));
        }
        cur = hull(&cur_verts)?;
    }
    cur.set_var_names(names);
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::polyhedra::same_set;
    use crate::splits::{enumerate_family, integer_family, DEFAULT_FAMILY_CAP};

    fn fig1() -> MixedIntegerSet {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap()
    }

    #[test]
    fn xbar_in_conv_of_pieces() {
        let m = fig1();
        let s = SplitSet::from_ints(&[1, 0], 1).unwrap();
        assert!(split_hull_member(&[rat(5, 4), rat(3, 2)], &m.relax, &s).is_member());
        // strictly inside the first piece
        assert!(split_hull_member(&[rat(1, 2), rat(1, 2)], &m.relax, &s).is_member());
    }

    #[test]
    fn fractional_vertex_is_cut() {
        let m = fig1();
        let f = integer_family(&m, 1, DEFAULT_FAMILY_CAP).unwrap();
        match closure_member(&[rat(3, 2), int(2)], &m, &f).unwrap() {
            ClosureMembership::NonMember { split: Some(s), separator } => {
                assert!(verify_split_cut(&m.relax, &s, &separator).valid);
                assert!(!separator.holds_at(&[rat(3, 2), int(2)]));
            }
            other => panic!("expected a separation, got {other:?}"),
        }
    }

    #[test]
    fn outside_point_is_rejected() {
        let m = fig1();
        let f = integer_family(&m, 1, DEFAULT_FAMILY_CAP).unwrap();
        let r = closure_member(&[int(3), int(0)], &m, &f).unwrap();
        assert!(matches!(r, ClosureMembership::NonMember { split: None, .. }));
    }

    #[test]
    fn empty_family_optimum_is_lp() {
        let m = fig1();
        let r = closure_optimize(&m, &SplitFamily::empty(2), &RatVector::from_ints(&[0, 1]), Sense::Max, 10).unwrap();
        assert_eq!(r.value, int(2));
        assert!(r.cuts.is_empty());
    }

    #[test]
    fn unit_square_closure_is_itself() {
        let h = HPolyhedron::cube(&[int(0), int(0)], &[int(1), int(1)]);
        let m = MixedIntegerSet::new(h.clone(), vec![0, 1], vec![1, 1]).unwrap();
        let f = integer_family(&m, 1, DEFAULT_FAMILY_CAP).unwrap();
        let c = closure_hrep(&m, &f, 1000).unwrap();
        assert!(same_set(&c, &h).unwrap());
    }

    #[test]
    fn single_split_closure_is_piece_hull() {
        let m = fig1();
        let s = SplitSet::from_ints(&[1, 0], 1).unwrap();
        let f = SplitFamily::empty(2).with_extra([s.clone()]);
        let c = closure_hrep(&m, &f, 10).unwrap();
        let (h1, h2) = s.pieces(&m.relax);
        let mut pts = vertices(&h1).unwrap().vertices;
        pts.extend(vertices(&h2).unwrap().vertices);
        assert!(same_set(&c, &hull(&pts).unwrap()).unwrap());
    }

    #[test]
    fn pentagon_closure_between_hull_and_relaxation() {
        let m = fig1();
        let f = enumerate_family(&[0, 1], 2, &m.relax, DEFAULT_FAMILY_CAP).unwrap();
        let c = closure_hrep(&m, &f, 1000).unwrap();
        assert!(crate::polyhedra::subset_of(&c, &m.relax).unwrap());
        for v in crate::polyhedra::mixed_integer_hull(&m, 1000).unwrap().vertices {
            assert!(c.contains(&v));
        }
        let opt = closure_optimize(&m, &f, &RatVector::from_ints(&[0, 1]), Sense::Max, 100).unwrap();
        let lp = lp_optimize(&c, &RatVector::from_ints(&[0, 1]), Sense::Max);
        assert_eq!(lp.value(), Some(&opt.value));
    }
}
