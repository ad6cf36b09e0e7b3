#![allow(dead_code)]

use binext::binarization::{BinarizationScheme, PolytopeKind};
use binext::extension::{extend, extend_targets, ExtendedSet};
use binext::kernel::{int, rat, RatVector, Rational};
use binext::polyhedra::{HPolyhedron, Inequality, MixedIntegerSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn r(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ints(v: &[i64]) -> RatVector {
    RatVector::from_ints(v)
}

/// `{x in [0,2]^2 : 2x1 + x2 <= 5, -2x1 + 3x2 <= 3}`
pub fn pentagon() -> MixedIntegerSet {
    let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
    h.add_le(vec![int(2), int(1)], int(5));
    h.add_le(vec![int(-2), int(3)], int(3));
    MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap()
}

/// `{x in [0,2]^2 : x1 + 10x2 <= 20, 10x1 + x2 <= 20}`
pub fn kite() -> MixedIntegerSet {
    let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
    h.add_le(vec![int(1), int(10)], int(20));
    h.add_le(vec![int(10), int(1)], int(20));
    MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap()
}

/// `{(x, y) in [0,3]^3 x [0,1]^3 : x1 + x2 + x3 = 4, x_i <= 4 y_i}`, all integer.
pub fn three_bins() -> MixedIntegerSet {
    let mut h = HPolyhedron::cube(&[int(0), int(0), int(0), int(0), int(0), int(0)], &[int(3), int(3), int(3), int(1), int(1), int(1)]);
    h.add_eq(ints(&[1, 1, 1, 0, 0, 0]).0, int(4));
    for i in 0..3 {
        let mut a = vec![int(0); 6];
        a[i] = int(1);
        a[3 + i] = int(-4);
        h.add_le(a, int(0));
    }
    MixedIntegerSet::new(h, (0..6).collect(), vec![3, 3, 3, 1, 1, 1]).unwrap()
}

pub fn ext(m: &MixedIntegerSet, kind: PolytopeKind) -> ExtendedSet {
    let s = BinarizationScheme::uniform(kind, &m.upper_bounds).unwrap();
    extend(m, &s, false).unwrap()
}

/// Binarizes the three x variables of [`three_bins`] only.
pub fn three_bins_ext(kind: PolytopeKind) -> ExtendedSet {
    let s = BinarizationScheme::uniform(kind, &[3, 3, 3]).unwrap();
    extend_targets(&three_bins(), &[0, 1, 2], &s, false).unwrap()
}

/// Coefficients by variable name; unnamed variables get 0.
pub fn row(e: &ExtendedSet, terms: &[(&str, i64)]) -> RatVector {
    row_rat(e.ext.relax.var_names(), &terms.iter().map(|&(v, c)| (v, int(c))).collect::<Vec<_>>())
}

pub fn row_rat(names: &[String], terms: &[(&str, Rational)]) -> RatVector {
    let mut a = RatVector::zeros(names.len());
    for (v, c) in terms {
        let j = names.iter().position(|n| n == v).unwrap_or_else(|| panic!("no variable {v}"));
        a[j] += c;
    }
    a
}

pub fn le(a: RatVector, b: i64) -> Inequality {
    Inequality::le(a, int(b))
}

pub fn ge(a: RatVector, b: i64) -> Inequality {
    Inequality::ge(a, int(b))
}

/// A random polytope in `[0,u]^2` cut by two random rows through a fractional
/// interior point, so it is nonempty and usually not integral.
pub fn random_planar(rng: &mut ChaCha8Rng, u: u64) -> MixedIntegerSet {
    let ui = u as i64;
    let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(ui), int(ui)]);
    let c = [rat(rng.gen_range(1..2 * ui), 2), rat(rng.gen_range(1..2 * ui), 2)];
    for _ in 0..2 {
        let a = [int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3))];
        let slack = rat(rng.gen_range(1..=4), 2);
        let b = &a[0] * &c[0] + &a[1] * &c[1] + slack;
        h.add_le(a.to_vec(), b);
    }
    MixedIntegerSet::new(h, vec![0, 1], vec![u, u]).unwrap()
}

/// Base seed for the randomized suites; `BINEXT_SEED` overrides the default 0.
pub fn base_seed() -> u64 {
    std::env::var("BINEXT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

pub fn rng(offset: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(base_seed().wrapping_add(offset))
}
