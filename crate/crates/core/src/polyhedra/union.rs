//! Membership in the convex hull of the union of two polyhedra.

use num_traits::{One, Signed, Zero};

use super::{is_empty, lp_optimize, HPolyhedron, LpOutcome, Sense};
use crate::kernel::{dot, primitive_integer, RatVector, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum UnionMembership {
    /// `p = lambda * y1 + (1 - lambda) * y2` with `y1` in the first piece and `y2` in
    /// the second; a point is `None` exactly when its weight is zero.
    Member {
        lambda: Rational,
        y1: Option<RatVector>,
        y2: Option<RatVector>,
    },
    /// `a.x <= b` holds on both pieces and fails at `p`. When both pieces are
    /// empty the separator is `0 <= -1` and `hull_empty` is set.
    NonMember {
        a: RatVector,
        b: Rational,
        hull_empty: bool,
    },
}

impl UnionMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, UnionMembership::Member { .. })
    }
}

fn primitive(a: &[Rational], b: &Rational) -> (RatVector, Rational) {
    let mut v = a.to_vec();
    v.push(b.clone());
    let mut p = primitive_integer(&v);
    let b = Rational::from_integer(p.pop().unwrap());
    (p.into_iter().map(Rational::from_integer).collect(), b)
}

/// First row of `h` violated by `p`, as a `<=` separator.
fn violated_row(h: &HPolyhedron, p: &[Rational]) -> (RatVector, Rational) {
    for r in h.rows() {
        let lhs = dot(r.a, p);
        if &lhs > r.b {
            return primitive(r.a, r.b);
        }
        if r.is_eq && &lhs < r.b {
            let a: Vec<Rational> = r.a.iter().map(|v| -v).collect();
            return primitive(&a, &-r.b.clone());
        }
    }
    unreachable!("point lies in the polyhedron")
}

fn assert_valid(h: &HPolyhedron, a: &RatVector, b: &Rational) {
    match lp_optimize(h, a, Sense::Max) {
        LpOutcome::Optimal { value, .. } => assert!(&value <= b, "separator is not valid for a piece"),
        LpOutcome::Infeasible { .. } => {}
        LpOutcome::Unbounded => panic!("separator unbounded over a piece"),
    }
}

/// Decides `p in conv(H1 ∪ H2)` by the disjunctive LP; on failure returns a
/// separator read off the Farkas certificate and re-verified by LP.
pub fn conv_union_member(p: &[Rational], h1: &HPolyhedron, h2: &HPolyhedron) -> UnionMembership {
    conv_union_member_known(p, h1, h2, is_empty(h1), is_empty(h2))
}

pub(crate) fn conv_union_member_known(
    p: &[Rational],
    h1: &HPolyhedron,
    h2: &HPolyhedron,
    empty1: bool,
    empty2: bool,
) -> UnionMembership {
    let n = p.len();
    assert!(h1.dim() == n && h2.dim() == n, "dimension mismatch in union membership");
    let result = match (empty1, empty2) {
        (true, true) => {
            return UnionMembership::NonMember {
                a: RatVector::zeros(n),
                b: -Rational::one(),
                hull_empty: true,
            }
        }
        (false, true) | (true, false) => {
            let (h, first) = if empty2 { (h1, true) } else { (h2, false) };
            if h.contains(p) {
                let pt = Some(RatVector(p.to_vec()));
                let lambda = if first { Rational::one() } else { Rational::zero() };
                let (y1, y2) = if first { (pt, None) } else { (None, pt) };
                return UnionMembership::Member { lambda, y1, y2 };
            }
            let (a, b) = violated_row(h, p);
            UnionMembership::NonMember { a, b, hull_empty: false }
        }
        (false, false) => disjunctive(p, h1, h2),
    };
    if let UnionMembership::NonMember { a, b, .. } = &result {
        assert!(&dot(a, p) > b, "separator does not cut the point");
        if !empty1 {
            assert_valid(h1, a, b);
        }
        if !empty2 {
            assert_valid(h2, a, b);
        }
    }
    result
}

/// Variables `(y, lambda)` with `y = lambda * y1`, `p - y = (1 - lambda) * y2`.
fn disjunctive(p: &[Rational], h1: &HPolyhedron, h2: &HPolyhedron) -> UnionMembership {
    let n = p.len();
    let m1 = h1.n_rows();
    let mut lp = HPolyhedron::universe(n + 1);
    let mut rows = Vec::new();
    for r in h1.rows() {
        let mut a = r.a.to_vec();
        a.push(-r.b.clone());
        rows.push((a, Rational::zero(), r.is_eq));
    }
    for r in h2.rows() {
        let mut a: Vec<Rational> = r.a.iter().map(|v| -v).collect();
        a.push(r.b.clone());
        rows.push((a, r.b - dot(r.a, p), r.is_eq));
    }
    let mut hi = vec![Rational::zero(); n + 1];
    hi[n] = Rational::one();
    rows.push((hi.clone(), Rational::one(), false));
    rows.push((hi.iter().map(|v| -v).collect(), Rational::zero(), false));
    lp.extend_rows(rows);
    match lp_optimize(&lp, &RatVector::zeros(n + 1), Sense::Max) {
        LpOutcome::Optimal { point, .. } => {
            let lambda = point[n].clone();
            let y: RatVector = point[..n].iter().cloned().collect();
            let y1 = (lambda.is_positive()).then(|| y.scale(&lambda.recip()));
            let rest = Rational::one() - &lambda;
            let y2 = rest
                .is_positive()
                .then(|| RatVector(p.to_vec()).sub(&y).scale(&rest.recip()));
            UnionMembership::Member { lambda, y1, y2 }
        }
        LpOutcome::Infeasible { farkas } => {
            let u1 = &farkas[..m1];
            let u2 = &farkas[m1..m1 + h2.n_rows()];
            let mut a = vec![Rational::zero(); n];
            for (k, r) in h1.rows().enumerate() {
                if u1[k].is_zero() {
                    continue;
                }
                for (x, y) in a.iter_mut().zip(r.a) {
                    *x += &u1[k] * y;
                }
            }
            let b1 = dot(u1, h1.rhs());
            let b2 = dot(u2, h2.rhs());
            let b = if b1 > b2 { b1 } else { b2 };
            let (a, b) = primitive(&a, &b);
            UnionMembership::NonMember { a, b, hull_empty: false }
        }
        LpOutcome::Unbounded => unreachable!("feasibility LP has a zero objective"),
    }
}
