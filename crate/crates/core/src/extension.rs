//! The binary extended formulation `P_B` of a mixed-integer set.

use std::ops::Range;

use num_traits::{One, ToPrimitive, Zero};

use crate::binarization::{BinarizationScheme, IntAffineMap, WitnessRule};
use crate::error::{dimension, domain, Result};
use crate::kernel::{is_integral, RatMatrix, RatVector, Rational};
use crate::polyhedra::{project, HPolyhedron, MixedIntegerSet};

/// `P_B` with integer set `I_B`, or `I' = I_B \ I` when the original integrality is dropped.
#[derive(Debug, Clone)]
pub struct ExtendedSet {
    pub ext: MixedIntegerSet,
    /// Column range of the z-block for the i-th integer variable of the origin.
    pub blocks: Vec<Range<usize>>,
    /// The binarized integer variables of the origin, in block order.
    pub origin_int_vars: Vec<usize>,
    pub origin_dim: usize,
    pub scheme: BinarizationScheme,
    pub drop_original_integrality: bool,
}

pub fn extend(m: &MixedIntegerSet, scheme: &BinarizationScheme, drop_original_integrality: bool) -> Result<ExtendedSet> {
    extend_targets(m, &m.int_vars, scheme, drop_original_integrality)
}

/// Binarizes only the integer variables in `targets`; the other integer
/// variables of `m` stay integer in both `I_B` and `I'`.
pub fn extend_targets(
    m: &MixedIntegerSet,
    targets: &[usize],
    scheme: &BinarizationScheme,
    drop_original_integrality: bool,
) -> Result<ExtendedSet> {
    if scheme.polytopes.len() != targets.len() {
        return dimension("one binarization polytope per binarized variable required");
    }
    for (k, (p, &t)) in scheme.polytopes.iter().zip(targets).enumerate() {
        let u = match m.upper_bound(t) {
            Some(u) => u,
            None => return domain(format!("variable {} is not an integer variable", t + 1)),
        };
        if p.u != u {
            return domain(format!(
                "binarization polytope {} has u = {} but the variable is bounded by {}",
                k + 1,
                p.u,
                u
            ));
        }
    }
    let n = m.dim();
    let mut names = m.relax.var_names().to_vec();
    let mut blocks = Vec::new();
    for (k, p) in scheme.polytopes.iter().enumerate() {
        let start = names.len();
        names.extend((1..=p.q).map(|j| format!("z{}_{}", k + 1, j)));
        blocks.push(start..names.len());
    }
    let map: Vec<usize> = (0..n).collect();
    let mut relax = m.relax.lift(names.clone(), &map);
    for (k, p) in scheme.polytopes.iter().enumerate() {
        let mut cols = vec![targets[k]];
        cols.extend(blocks[k].clone());
        let lifted = p.body.lift(names.clone(), &cols);
        relax.extend_rows(lifted.rows().map(|r| (r.a.to_vec(), r.b.clone(), r.is_eq)));
    }
    let mut int_vars = Vec::new();
    let mut ub = Vec::new();
    for (&i, &u) in m.int_vars.iter().zip(&m.upper_bounds) {
        if !drop_original_integrality || !targets.contains(&i) {
            int_vars.push(i);
            ub.push(u);
        }
    }
    for b in &blocks {
        int_vars.extend(b.clone());
        ub.extend(std::iter::repeat_n(1, b.len()));
    }
    Ok(ExtendedSet {
        ext: MixedIntegerSet::new(relax, int_vars, ub)?,
        blocks,
        origin_int_vars: targets.to_vec(),
        origin_dim: n,
        scheme: scheme.clone(),
        drop_original_integrality,
    })
}

impl ExtendedSet {
    pub fn dim(&self) -> usize {
        self.ext.dim()
    }

    /// `proj_x(h)` for a polyhedron in the extended space.
    pub fn project_x(&self, h: &HPolyhedron) -> Result<HPolyhedron> {
        if h.dim() != self.dim() {
            return dimension("polyhedron does not live in the extended space");
        }
        project(h, &(0..self.origin_dim).collect::<Vec<_>>())
    }

    /// The first `origin_dim` coordinates of an extended point.
    pub fn x_part(&self, p: &[Rational]) -> RatVector {
        RatVector(p[..self.origin_dim].to_vec())
    }

    /// Appends the witness codes of the integer coordinates of `x`.
    pub fn lift_point(&self, x: &[Rational], rule: WitnessRule) -> Result<RatVector> {
        if x.len() != self.origin_dim {
            return dimension("point does not live in the origin space");
        }
        let mut out = x.to_vec();
        for (k, p) in self.scheme.polytopes.iter().enumerate() {
            let v = &x[self.origin_int_vars[k]];
            let idx = match v.to_integer().to_u64() {
                Some(k) if is_integral(v) && k <= p.u => k as usize,
                _ => return domain("integer coordinate outside 0..=u"),
            };
            out.extend(p.witnesses(rule)?[idx].w.iter().cloned());
        }
        Ok(RatVector(out))
    }

    /// For integral affine blocks `x_i = alpha_i.z_i + beta_i`: the map that replaces
    /// each binarized `x_i` by its expression in `z_i` and fixes everything else.
    /// It is the identity on `P_B`, so pulling a split back through it moves the
    /// split's `x_i` coefficients onto `z_i`.
    pub fn substitution_map(&self) -> Result<IntAffineMap> {
        let n = self.dim();
        let mut v = RatMatrix::identity(n);
        let mut offset = RatVector::zeros(n);
        for (k, p) in self.scheme.polytopes.iter().enumerate() {
            let (alpha, beta) = match p.classify()?.affine {
                Some(a) => a,
                None => return domain(format!("binarization polytope {} is not affine", k + 1)),
            };
            let i = self.origin_int_vars[k];
            v[(i, i)] = Rational::zero();
            for (j, c) in self.blocks[k].clone().zip(alpha.iter()) {
                v[(i, j)] = c.clone();
            }
            offset[i] = beta;
        }
        IntAffineMap::new(v, offset)
    }

    /// `F(x, z) = (x, f_1(z_1), ..., f_l(z_l))` from this extension into `other`.
    pub fn block_map(&self, other: &ExtendedSet, maps: &[IntAffineMap]) -> Result<IntAffineMap> {
        if maps.len() != self.blocks.len() || other.blocks.len() != self.blocks.len() || other.origin_dim != self.origin_dim {
            return dimension("block maps need extensions of the same origin");
        }
        let mut v = RatMatrix::zeros(other.dim(), self.dim());
        let mut offset = RatVector::zeros(other.dim());
        for i in 0..self.origin_dim {
            v[(i, i)] = Rational::one();
        }
        for (k, f) in maps.iter().enumerate() {
            let (src, dst) = (&self.blocks[k], &other.blocks[k]);
            if f.domain_dim() != src.len() || f.codomain_dim() != dst.len() {
                return dimension("block map dimensions differ from the z-blocks");
            }
            for (r, di) in dst.clone().enumerate() {
                for (c, si) in src.clone().enumerate() {
                    v[(di, si)] = f.matrix[(r, c)].clone();
                }
                offset[di] = f.offset[r].clone();
            }
        }
        IntAffineMap::new(v, offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarization::PolytopeKind;
    use crate::kernel::int;
    use crate::polyhedra::same_set;

    fn fig1() -> MixedIntegerSet {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap()
    }

    #[test]
    fn log_extension_of_pentagon() {
        let m = fig1();
        let s = BinarizationScheme::uniform(PolytopeKind::Log, &[2, 2]).unwrap();
        let e = extend(&m, &s, false).unwrap();
        assert_eq!(e.dim(), 6);
        assert_eq!(e.blocks, vec![2..4, 4..6]);
        assert_eq!(e.ext.int_vars, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(e.ext.relax.var_names()[3], "z1_2");
        // x1 = z1_1 + 2 z1_2 holds as a row
        assert!(e.ext.relax.rows().any(|r| r.is_eq
            && r.a == [int(1), int(0), int(-1), int(-2), int(0), int(0)]
            && r.b.is_zero()));
        assert!(same_set(&e.project_x(&e.ext.relax).unwrap(), &m.relax).unwrap());
    }

    #[test]
    fn dropping_integrality_keeps_only_z() {
        let s = BinarizationScheme::uniform(PolytopeKind::Log, &[2, 2]).unwrap();
        let e = extend(&fig1(), &s, true).unwrap();
        assert_eq!(e.ext.int_vars, vec![2, 3, 4, 5]);
    }

    #[test]
    fn empty_scheme_is_identity() {
        let h = HPolyhedron::cube(&[int(0)], &[int(1)]);
        let m = MixedIntegerSet::new(h, vec![], vec![]).unwrap();
        let e = extend(&m, &BinarizationScheme { polytopes: vec![] }, false).unwrap();
        assert_eq!(e.ext, m);
    }

    #[test]
    fn bound_mismatch_is_rejected() {
        let s = BinarizationScheme::uniform(PolytopeKind::Log, &[3, 2]).unwrap();
        assert!(extend(&fig1(), &s, false).is_err());
    }

    #[test]
    fn lifted_points_are_feasible() {
        let s = BinarizationScheme::uniform(PolytopeKind::Full, &[2, 2]).unwrap();
        let e = extend(&fig1(), &s, false).unwrap();
        let p = e.lift_point(&[int(2), int(1)], WitnessRule::Colex).unwrap();
        assert_eq!(p, RatVector::from_ints(&[2, 1, 0, 1, 1, 0]));
        assert!(e.ext.contains(&p));
    }

    #[test]
    fn substitution_moves_x_onto_z() {
        let s = BinarizationScheme::uniform(PolytopeKind::Log, &[2, 2]).unwrap();
        let e = extend(&fig1(), &s, false).unwrap();
        let f = e.substitution_map().unwrap();
        let p = e.lift_point(&[int(1), int(2)], WitnessRule::Colex).unwrap();
        assert_eq!(f.apply(&p), p);
        // row x1 reads z1_1 + 2 z1_2
        assert_eq!(f.matrix.row(0), &[int(0), int(0), int(1), int(2), int(0), int(0)]);
    }
}
