//! Pulling split sets back through integral affine maps.

use num_traits::Zero;

use super::{SplitFamily, SplitSet};
use crate::binarization::IntAffineMap;
use crate::error::{dimension, domain, Result};
use crate::kernel::{dot, Rational};

/// `f^{-1}(S) = {pi0 - pi.v < (V^T pi).x < pi0 - pi.v + 1}` for `f(x) = V x + v`.
/// `Ok(None)` when `V^T pi = 0`: the preimage is then empty or the whole space.
pub fn preimage_split(f: &IntAffineMap, s: &SplitSet) -> Result<Option<SplitSet>> {
    if s.dim() != f.codomain_dim() {
        return dimension("split does not live in the codomain of the map");
    }
    let pi = s.pi_rat();
    let vt = f.matrix.transpose();
    let new_pi = vt.mul_vec(&pi)?;
    let shift = dot(&pi, &f.offset);
    if !new_pi.is_integral() {
        return domain("preimage of a split under an integral map must be integral");
    }
    if new_pi.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    // pi.v is an integer since pi and v are
    let pi0 = (Rational::from_integer(s.pi0.clone()) - shift).to_integer();
    Ok(Some(SplitSet::new(new_pi.iter().map(|v| v.to_integer()).collect(), pi0)?))
}

/// `domain_family` plus the preimage of every split of `codomain_family` (degenerate
/// preimages dropped, duplicates skipped).
pub fn augment_family_with_preimages(
    f: &IntAffineMap,
    codomain_family: &SplitFamily,
    domain_family: &SplitFamily,
) -> Result<SplitFamily> {
    if codomain_family.dim != f.codomain_dim() || domain_family.dim != f.domain_dim() {
        return dimension("families do not match the map");
    }
    let mut pulled = Vec::new();
    for s in codomain_family.iter() {
        if let Some(p) = preimage_split(f, &s)? {
            pulled.push(p);
        }
    }
    Ok(domain_family.with_extra(pulled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{RatMatrix, RatVector};

    #[test]
    fn identity_keeps_split() {
        let s = SplitSet::from_ints(&[1, -1], 2).unwrap();
        assert_eq!(preimage_split(&IntAffineMap::identity(2), &s).unwrap(), Some(s));
    }

    #[test]
    fn shear_substitutes() {
        let f = IntAffineMap::new(
            RatMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
            RatVector::zeros(2),
        )
        .unwrap();
        let s = SplitSet::from_ints(&[1, 0], 0).unwrap();
        assert_eq!(preimage_split(&f, &s).unwrap(), Some(SplitSet::from_ints(&[1, 1], 0).unwrap()));
    }

    #[test]
    fn offset_shifts_pi0_and_constant_maps_degenerate() {
        let f = IntAffineMap::new(RatMatrix::from_int_rows(&[vec![1, 0]]).unwrap(), RatVector::from_ints(&[3])).unwrap();
        let s = SplitSet::from_ints(&[2], 7).unwrap();
        // 7 < 2(x1 + 3) < 8  <=>  1 < 2 x1 < 2
        assert_eq!(preimage_split(&f, &s).unwrap(), Some(SplitSet::from_ints(&[2, 0], 1).unwrap()));
        let c = IntAffineMap::new(RatMatrix::zeros(1, 2), RatVector(vec![Rational::from_integer(1.into())])).unwrap();
        assert_eq!(preimage_split(&c, &s).unwrap(), None);
    }
}
