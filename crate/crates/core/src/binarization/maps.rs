//! Integral affine maps between binarization polytopes.

use num_traits::One;

use super::{BinarizationPolytope, Generator, WitnessRule};
use crate::error::{dimension, domain, Result};
use crate::kernel::{dot, int, invert, RatMatrix, RatVector, Rational};
use crate::polyhedra::HPolyhedron;

/// `f(z) = V z + v` with integral `V` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntAffineMap {
    pub matrix: RatMatrix,
    pub offset: RatVector,
}

impl IntAffineMap {
    pub fn new(matrix: RatMatrix, offset: RatVector) -> Result<Self> {
        if matrix.rows() != offset.len() {
            return dimension("offset length differs from the codomain dimension");
        }
        if !matrix.is_integral() || !offset.is_integral() {
            return domain("integral affine map needs integral data");
        }
        Ok(IntAffineMap { matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        IntAffineMap {
            matrix: RatMatrix::identity(n),
            offset: RatVector::zeros(n),
        }
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, z: &[Rational]) -> RatVector {
        self.matrix.mul_vec(z).expect("map applied to a vector of the wrong length").add(&self.offset)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &IntAffineMap) -> Result<Self> {
        let matrix = self.matrix.mul(&inner.matrix)?;
        let offset = self.apply(&inner.offset);
        IntAffineMap::new(matrix, offset)
    }
}

/// For an affine `B` with zero-slice code `wbar`, maps `B` through
/// `g(z) = wbar + D z`, `D = diag(1 - 2 wbar)`, which makes the relation linear.
pub fn affine_to_linear(b: &BinarizationPolytope) -> Result<(BinarizationPolytope, IntAffineMap)> {
    if b.classify()?.affine.is_none() {
        return domain("affine_to_linear needs an affine binarization polytope");
    }
    let q = b.q;
    let wbar = b.witnesses(WitnessRule::default())?[0].w.clone();
    let mut d = RatMatrix::zeros(q, q);
    for j in 0..q {
        d[(j, j)] = Rational::one() - int(2) * &wbar[j];
    }
    let g = IntAffineMap::new(d.clone(), wbar.clone())?;
    // z = D (z' - wbar), so a_z.z = (a_z D).z' - (a_z D).wbar
    let mut body = HPolyhedron::universe_named(b.body.var_names().to_vec());
    body.extend_rows(b.body.rows().map(|r| {
        let mut a = vec![r.a[0].clone()];
        let az: Vec<Rational> = (0..q).map(|j| &r.a[j + 1] * &d[(j, j)]).collect();
        let rhs = r.b + dot(&az, &wbar);
        a.extend(az);
        (a, rhs, r.is_eq)
    }));
    let generators = b.generators.as_ref().map(|gs| {
        gs.iter()
            .map(|gen| Generator {
                k: gen.k,
                w: g.apply(&gen.w),
            })
            .collect()
    });
    let kind = if wbar.is_zero() { b.kind } else { None };
    Ok((
        BinarizationPolytope {
            body,
            u: b.u,
            q,
            generators,
            kind,
        },
        g,
    ))
}

/// For a unimodular `B` (perfect, `q = u`) with codes `v^j` and any `C` with codes
/// `w^j` (chosen by the default witness rule), the map
/// `f(z) = W V^{-1} z - W V^{-1} v^0 + w^0` where the columns of `V`, `W` are
/// `v^j - v^0`, `w^j - w^0`.
pub fn unimodular_map(b: &BinarizationPolytope, c: &BinarizationPolytope) -> Result<IntAffineMap> {
    if b.u != c.u {
        return domain("unimodular_map needs polytopes with the same u");
    }
    let cls = b.classify()?;
    if !cls.is_unimodular {
        return domain("unimodular_map needs a unimodular source polytope");
    }
    let v = b.witnesses(WitnessRule::default())?;
    let w = c.witnesses(WitnessRule::default())?;
    let vcols: Vec<RatVector> = v[1..].iter().map(|g| g.w.sub(&v[0].w)).collect();
    let wcols: Vec<RatVector> = w[1..].iter().map(|g| g.w.sub(&w[0].w)).collect();
    let vm = RatMatrix::from_columns(&vcols)?;
    let wm = RatMatrix::from_columns(&wcols)?;
    let m = wm.mul(&invert(&vm)?)?;
    let offset = w[0].w.sub(&m.mul_vec(&v[0].w)?);
    IntAffineMap::new(m, offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarization::PolytopeKind;

    #[test]
    fn unary_to_full_in_two() {
        let b = BinarizationPolytope::make(PolytopeKind::Unary, 2).unwrap();
        let c = BinarizationPolytope::make(PolytopeKind::Full, 2).unwrap();
        let f = unimodular_map(&b, &c).unwrap();
        // f(z) = (z1 - z2, z2)
        assert_eq!(f.matrix, RatMatrix::from_int_rows(&[vec![1, -1], vec![0, 1]]).unwrap());
        assert!(f.offset.is_zero());
        assert_eq!(f.apply(&RatVector::from_ints(&[1, 0])), RatVector::from_ints(&[1, 0]));
        assert_eq!(f.apply(&RatVector::from_ints(&[1, 1])), RatVector::from_ints(&[0, 1]));
    }

    #[test]
    fn full_to_itself_is_identity() {
        let b = BinarizationPolytope::make(PolytopeKind::Full, 3).unwrap();
        assert_eq!(unimodular_map(&b, &b).unwrap(), IntAffineMap::identity(3));
    }

    #[test]
    fn full_to_logplus_three() {
        let b = BinarizationPolytope::make(PolytopeKind::Full, 3).unwrap();
        let c = BinarizationPolytope::make(PolytopeKind::LogPerfect, 3).unwrap();
        let f = unimodular_map(&b, &c).unwrap();
        assert_eq!(f.apply(&RatVector::from_ints(&[1, 0, 0])), RatVector::from_ints(&[1, 0]));
        assert_eq!(f.apply(&RatVector::from_ints(&[0, 1, 0])), RatVector::from_ints(&[0, 1]));
        assert_eq!(f.apply(&RatVector::from_ints(&[0, 0, 1])), RatVector::from_ints(&[1, 1]));
    }

    #[test]
    fn log_source_is_rejected() {
        let b = BinarizationPolytope::make(PolytopeKind::Log, 3).unwrap();
        let c = BinarizationPolytope::make(PolytopeKind::Full, 3).unwrap();
        assert!(unimodular_map(&b, &c).is_err());
    }

    #[test]
    fn affine_code_becomes_linear() {
        // x = -z1 + z2 + 1: codes w0 = (1,0), w1 = (0,0), w2 = (0,1)
        let gens = vec![
            Generator { k: 0, w: RatVector::from_ints(&[1, 0]) },
            Generator { k: 1, w: RatVector::from_ints(&[0, 0]) },
            Generator { k: 2, w: RatVector::from_ints(&[0, 1]) },
        ];
        let b = BinarizationPolytope::from_generators(2, gens).unwrap();
        let cls = b.classify().unwrap();
        assert!(cls.affine.is_some() && !cls.linear);
        let (b2, g) = affine_to_linear(&b).unwrap();
        assert_eq!(g.apply(&RatVector::from_ints(&[1, 0])), RatVector::from_ints(&[0, 0]));
        let cls2 = b2.classify().unwrap();
        assert!(cls2.linear);
        assert_eq!(cls2.is_perfect, cls.is_perfect);
        let full = BinarizationPolytope::make(PolytopeKind::Full, 3).unwrap();
        let (same, id) = affine_to_linear(&full).unwrap();
        assert_eq!(id, IntAffineMap::identity(3));
        assert_eq!(same.body, full.body);
    }
}
