//! Integer hulls of small bounded mixed-integer sets by enumeration.

use num_bigint::BigInt;

use super::{dd::polytope_vertices, lp_optimize, minimal_vertices, LpOutcome, MixedIntegerSet, Sense, VPolytope};
use crate::error::{Error, Result};
use crate::kernel::{ceil, floor, RatVector, Rational};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

fn assignment_count(m: &MixedIntegerSet) -> u128 {
    m.upper_bounds
        .iter()
        .fold(1u128, |acc, &u| acc.saturating_mul(u as u128 + 1))
}

/// Every vertex of every nonempty integer slice of `m` (with repetitions removed).
/// Branches whose LP range for the next integer variable is empty are pruned.
pub fn enumerate_mixed_points(m: &MixedIntegerSet, cap: u128) -> Result<Vec<RatVector>> {
    let needed = assignment_count(m);
    if needed > cap {
        return Err(Error::Capacity {
            what: "integer assignments",
            needed,
            limit: cap,
        });
    }
    let mut out = Vec::new();
    let pure = m.int_vars.len() == m.dim();
    descend(m, &m.relax, 0, pure, &mut out)?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup();
    Ok(out)
}

fn descend(
    m: &MixedIntegerSet,
    cur: &super::HPolyhedron,
    depth: usize,
    pure: bool,
    out: &mut Vec<RatVector>,
) -> Result<()> {
    let n = m.dim();
    if depth == m.int_vars.len() {
        if pure {
            // Every variable is fixed by an equation; read the point off the LP.
            if let LpOutcome::Optimal { point, .. } = lp_optimize(cur, &RatVector::zeros(n), Sense::Max) {
                out.push(point);
            }
        } else {
            out.extend(polytope_vertices(cur)?);
        }
        return Ok(());
    }
    let j = m.int_vars[depth];
    let e = RatVector::unit(n, j);
    let lo = match lp_optimize(cur, &e, Sense::Min) {
        LpOutcome::Optimal { value, .. } => ceil(&value),
        LpOutcome::Infeasible { .. } => return Ok(()),
        LpOutcome::Unbounded => return Err(Error::Unbounded("integer variable unbounded".into())),
    };
    let hi = match lp_optimize(cur, &e, Sense::Max) {
        LpOutcome::Optimal { value, .. } => floor(&value),
        _ => return Err(Error::Unbounded("integer variable unbounded".into())),
    };
    let mut k = lo;
    while k <= hi {
        let mut next = cur.clone();
        next.add_eq(e.0.clone(), Rational::from_integer(k.clone()));
        descend(m, &next, depth + 1, pure, out)?;
        k += BigInt::from(1);
    }
    Ok(())
}

/// Minimal vertex set of `conv(P^I)`.
pub fn mixed_integer_hull(m: &MixedIntegerSet, cap: u128) -> Result<VPolytope> {
    let pts = enumerate_mixed_points(m, cap)?;
    Ok(VPolytope {
        vertices: minimal_vertices(&pts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::polyhedra::{vertices, HPolyhedron};

    fn fig1() -> HPolyhedron {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        h
    }

    #[test]
    fn pentagon_integer_hull() {
        let m = MixedIntegerSet::new(fig1(), vec![0, 1], vec![2, 2]).unwrap();
        let v = mixed_integer_hull(&m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                RatVector::from_ints(&[0, 0]),
                RatVector::from_ints(&[0, 1]),
                RatVector::from_ints(&[2, 0]),
                RatVector::from_ints(&[2, 1]),
            ]
        );
    }

    #[test]
    fn continuous_set_gives_vertices() {
        let m = MixedIntegerSet::new(fig1(), vec![], vec![]).unwrap();
        let v = mixed_integer_hull(&m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(v, vertices(&fig1()).unwrap());
    }

    #[test]
    fn line_with_single_integer_point() {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_eq(vec![rat(-1, 2), int(1)], rat(1, 2));
        let m = MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap();
        let v = mixed_integer_hull(&m, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(v.vertices, vec![RatVector::from_ints(&[1, 1])]);
    }

    #[test]
    fn capacity_is_enforced() {
        let m = MixedIntegerSet::new(fig1(), vec![0, 1], vec![2, 2]).unwrap();
        assert!(matches!(mixed_integer_hull(&m, 8), Err(Error::Capacity { .. })));
    }
}
