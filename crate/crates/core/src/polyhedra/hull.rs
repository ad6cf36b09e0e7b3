//! Facets of the convex hull of a finite point set.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{default_names, dd::extreme_rays, HPolyhedron};
use crate::error::{domain, Result};
use crate::kernel::{common_denominator, dot, nullspace, primitive_integer, rank, rref, RatMatrix, RatVector, Rational};

struct AffineFrame {
    /// Coordinates that parametrize the affine hull.
    pivots: Vec<usize>,
    /// Primitive integer normals `a` with `a.x = a.v0` on the hull.
    equations: Vec<(Vec<Rational>, Rational)>,
}

fn affine_frame(points: &[RatVector]) -> AffineFrame {
    let n = points[0].len();
    let v0 = &points[0];
    let mut diffs = RatMatrix::zeros(0, n);
    for p in &points[1..] {
        diffs.push_row(p.sub(v0).0);
    }
    let (_, pivots) = rref(&diffs);
    let equations = nullspace(&diffs)
        .into_iter()
        .map(|a| {
            let a: Vec<Rational> = primitive_integer(&a).into_iter().map(Rational::from_integer).collect();
            let b = dot(&a, v0);
            (a, b)
        })
        .collect();
    AffineFrame { pivots, equations }
}

fn dedup(points: &[RatVector]) -> Vec<RatVector> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.dedup();
    v
}

/// Facets `a.x <= b` in the frame coordinates, lifted back to the full space.
fn facets(points: &[RatVector], frame: &AffineFrame) -> Vec<(Vec<Rational>, Rational)> {
    let n = points[0].len();
    let d = frame.pivots.len();
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let w: Vec<Rational> = frame.pivots.iter().map(|&j| p[j].clone()).collect();
            let den = common_denominator(&w);
            let mut row: Vec<BigInt> = w
                .iter()
                .map(|x| -(x * Rational::from_integer(den.clone())).to_integer())
                .collect();
            row.push(den);
            row
        })
        .collect();
    let rays = extreme_rays(&rows, d + 1).expect("points span their affine hull");
    let mut out: Vec<(Vec<Rational>, Rational)> = rays
        .into_iter()
        .filter(|r| r[..d].iter().any(|x| !x.is_zero()))
        .map(|r| {
            let mut a = vec![Rational::zero(); n];
            for (k, &j) in frame.pivots.iter().enumerate() {
                a[j] = Rational::from_integer(r[k].clone());
            }
            (a, Rational::from_integer(r[d].clone()))
        })
        .collect();
    out.sort();
    out
}

/// Irredundant description of `conv(points)`, with explicit equations for the
/// affine hull when the points are not full-dimensional.
pub fn hull(points: &[RatVector]) -> Result<HPolyhedron> {
    if points.is_empty() {
        return domain("hull of an empty point set");
    }
    let n = points[0].len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return domain("hull points must share a positive dimension");
    }
    let pts = dedup(points);
    let frame = affine_frame(&pts);
    let mut h = HPolyhedron::universe_named(default_names(n));
    for (a, b) in &frame.equations {
        h.add_eq(a.clone(), b.clone());
    }
    if !frame.pivots.is_empty() {
        for (a, b) in facets(&pts, &frame) {
            h.add_le(a, b);
        }
    }
    Ok(h)
}

/// The points of `points` that are vertices of their convex hull, sorted.
pub fn minimal_vertices(points: &[RatVector]) -> Result<Vec<RatVector>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let pts = dedup(points);
    let frame = affine_frame(&pts);
    let d = frame.pivots.len();
    if d == 0 {
        return Ok(pts);
    }
    let fs = facets(&pts, &frame);
    Ok(pts
        .into_iter()
        .filter(|p| {
            let mut tight = RatMatrix::zeros(0, d);
            for (a, b) in &fs {
                if &dot(a, p) == b {
                    tight.push_row(frame.pivots.iter().map(|&j| a[j].clone()).collect());
                }
            }
            tight.rows() >= d && rank(&tight) == d
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::polyhedra::{same_set, vertices};

    #[test]
    fn standard_simplex() {
        let pts = vec![
            RatVector::from_ints(&[0, 0]),
            RatVector::from_ints(&[1, 0]),
            RatVector::from_ints(&[0, 1]),
        ];
        let h = hull(&pts).unwrap();
        assert_eq!(h.n_rows(), 3);
        assert!(h.eq_rows().is_empty());
        let mut want = HPolyhedron::universe(2);
        want.add_ge(vec![int(1), int(0)], int(0));
        want.add_ge(vec![int(0), int(1)], int(0));
        want.add_le(vec![int(1), int(1)], int(1));
        assert!(same_set(&h, &want).unwrap());
        assert!(pts.iter().all(|p| h.contains(p)));
    }

    #[test]
    fn single_point_gives_equations() {
        let h = hull(&[RatVector(vec![rat(1, 2), int(3)])]).unwrap();
        assert_eq!(h.n_rows(), 2);
        assert_eq!(h.eq_rows().len(), 2);
        assert!(h.contains(&[rat(1, 2), int(3)]));
        assert!(!h.contains(&[int(0), int(3)]));
    }

    #[test]
    fn segment_in_space() {
        let pts = vec![RatVector::from_ints(&[0, 0, 1]), RatVector::from_ints(&[2, 2, 1])];
        let h = hull(&pts).unwrap();
        assert_eq!(h.eq_rows().len(), 2);
        assert_eq!(h.n_rows(), 4);
        assert!(h.contains(&[int(1), int(1), int(1)]));
        assert!(!h.contains(&[int(3), int(3), int(1)]));
    }

    #[test]
    fn minimal_drops_interior_points() {
        let pts = vec![
            RatVector::from_ints(&[0, 0]),
            RatVector::from_ints(&[2, 0]),
            RatVector::from_ints(&[0, 2]),
            RatVector::from_ints(&[1, 0]),
            RatVector::from_ints(&[0, 1]),
            RatVector(vec![rat(1, 2), rat(1, 2)]),
        ];
        let v = minimal_vertices(&pts).unwrap();
        assert_eq!(v.len(), 3);
        let back = vertices(&hull(&pts).unwrap()).unwrap();
        assert_eq!(back.vertices, v);
    }
}
