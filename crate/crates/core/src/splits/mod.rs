//! Split sets, split and Gomory-Chvátal cuts, and bounded split closures.
//!
//! The split closure intersects `conv(P \ S)` over every split set. Here the
//! intersection runs over a finite [`SplitFamily`], so a point that survives is
//! only evidence of membership in an outer approximation, while a separated point
//! is certified to lie outside the true closure.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::kernel::{ceil, floor, is_integral, RatVector, Rational};
use crate::polyhedra::{lp_optimize, HPolyhedron, LpOutcome, MixedIntegerSet, Sense};

mod closure;
mod cuts;
mod preimage;

pub use closure::{
    closure_hrep, closure_member, closure_optimize, closure_project_member, split_hull_member, ClosureMembership,
    ClosureOptimum, ProjectedMembership, DEFAULT_CUT_CAP,
};
pub use cuts::{
    gc_round, verify_aggregation, verify_split_cut, AggStep, AggregationReport, CutVerdict, PieceCertificate, Rounding,
    StepRelation,
};
pub use preimage::{augment_family_with_preimages, preimage_split};

/// Default cap on the number of splits in a family.
pub const DEFAULT_FAMILY_CAP: u128 = 5_000_000;

/// The open slab `pi0 < pi.x < pi0 + 1` with integral data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitSet {
    pub pi: Vec<BigInt>,
    pub pi0: BigInt,
}

impl SplitSet {
    pub fn new(pi: Vec<BigInt>, pi0: BigInt) -> Result<Self> {
        if pi.iter().all(Zero::is_zero) {
            return domain("split direction must be nonzero");
        }
        Ok(SplitSet { pi, pi0 })
    }

    pub fn from_ints(pi: &[i64], pi0: i64) -> Result<Self> {
        SplitSet::new(pi.iter().map(|&v| BigInt::from(v)).collect(), BigInt::from(pi0))
    }

    /// A split over the integer variables of `m`: coefficients on continuous
    /// variables are rejected.
    pub fn for_set(m: &MixedIntegerSet, pi: Vec<BigInt>, pi0: BigInt) -> Result<Self> {
        if pi.len() != m.dim() {
            return Err(Error::Dimension("split direction length differs from the set".into()));
        }
        if pi.iter().enumerate().any(|(j, v)| !v.is_zero() && !m.is_int(j)) {
            return domain("split direction has a coefficient on a continuous variable");
        }
        SplitSet::new(pi, pi0)
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    pub fn pi_rat(&self) -> RatVector {
        self.pi.iter().cloned().map(Rational::from_integer).collect()
    }

    pub fn value(&self, p: &[Rational]) -> Rational {
        self.pi
            .iter()
            .zip(p)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| x * Rational::from_integer(c.clone()))
            .sum()
    }

    /// True iff `p` lies in the open slab.
    pub fn contains(&self, p: &[Rational]) -> bool {
        let v = self.value(p);
        let lo = Rational::from_integer(self.pi0.clone());
        v > lo && v < lo + Rational::from_integer(1.into())
    }

    /// `(H ∩ {pi.x <= pi0}, H ∩ {pi.x >= pi0 + 1})`.
    pub fn pieces(&self, h: &HPolyhedron) -> (HPolyhedron, HPolyhedron) {
        assert_eq!(h.dim(), self.dim(), "split dimension differs from polyhedron");
        let pi = self.pi_rat().0;
        let lo = Rational::from_integer(self.pi0.clone());
        let h1 = h.with_le(pi.clone(), lo.clone());
        let h2 = h.with_ge(pi, lo + Rational::from_integer(1.into()));
        (h1, h2)
    }

    pub fn display(&self, names: &[String]) -> String {
        let pi = self.pi_rat();
        let expr = crate::polyhedra::format_row(&pi, "", &Rational::zero(), names);
        let expr = expr.trim_end_matches(" 0").trim_end();
        format!("{} < {} < {}", self.pi0, expr, &self.pi0 + 1)
    }
}

impl fmt::Display for SplitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi: Vec<String> = self.pi.iter().map(|v| v.to_string()).collect();
        write!(f, "pi = {} ; pi0 = {}", pi.join(" "), self.pi0)
    }
}

/// Parses `pi = <ints> ; pi0 = <int>`.
pub fn parse_split(s: &str) -> Result<SplitSet> {
    let bad = || Error::Domain(format!("cannot parse split '{s}'"));
    let (lhs, rhs) = s.split_once(';').ok_or_else(bad)?;
    let pi = lhs.trim().strip_prefix("pi").and_then(|r| r.trim().strip_prefix('=')).ok_or_else(bad)?;
    let pi0 = rhs.trim().strip_prefix("pi0").and_then(|r| r.trim().strip_prefix('=')).ok_or_else(bad)?;
    let pi = pi
        .split_whitespace()
        .map(|t| t.parse::<BigInt>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    SplitSet::new(pi, pi0.trim().parse::<BigInt>().map_err(|_| bad())?)
}

/// A finite family of splits: every lexicographically positive `pi` with
/// `|pi_j| <= K` on `support` (zero elsewhere), each with the `pi0` whose slab meets
/// the bounding box of the polyhedron, followed by explicit extras.
///
/// Directions are ordered by `||pi||_1`, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFamily {
    pub dim: usize,
    pub support: Vec<usize>,
    pub k: u32,
    /// Dense directions with their inclusive `pi0` range.
    pub directions: Vec<(Vec<i64>, i64, i64)>,
    pub extra: Vec<SplitSet>,
}

impl SplitFamily {
    pub fn empty(dim: usize) -> Self {
        SplitFamily {
            dim,
            support: Vec::new(),
            k: 0,
            directions: Vec::new(),
            extra: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.directions.iter().map(|(_, lo, hi)| (hi - lo + 1).max(0) as usize).sum::<usize>() + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every split in family order.
    pub fn iter(&self) -> impl Iterator<Item = SplitSet> + '_ {
        self.directions
            .iter()
            .flat_map(|(pi, lo, hi)| {
                (*lo..=*hi).map(move |pi0| SplitSet {
                    pi: pi.iter().map(|&v| BigInt::from(v)).collect(),
                    pi0: BigInt::from(pi0),
                })
            })
            .chain(self.extra.iter().cloned())
    }

    /// The splits whose slab contains `p`, in family order. For each direction at
    /// most one `pi0` qualifies, and only when `pi.p` is fractional.
    pub fn containing(&self, p: &[Rational]) -> Vec<SplitSet> {
        self.containing_indexed(p).into_iter().map(|(_, s)| s).collect()
    }

    /// As [`SplitFamily::containing`], each split keyed by its position among the
    /// directions (extras follow the directions).
    pub fn containing_indexed(&self, p: &[Rational]) -> Vec<(usize, SplitSet)> {
        let scaled = ScaledPoint::new(p);
        let mut out = Vec::new();
        for (key, (pi, lo, hi)) in self.directions.iter().enumerate() {
            let fast = scaled.as_ref().and_then(|sp| sp.dot(pi).map(|v| (v, sp.den)));
            let pi0 = match fast {
                Some((v, den)) => {
                    if v.rem_euclid(den) == 0 {
                        continue;
                    }
                    match i64::try_from(v.div_euclid(den)) {
                        Ok(f) => f,
                        Err(_) => continue,
                    }
                }
                None => {
                    let v: Rational = pi
                        .iter()
                        .zip(p)
                        .filter(|(c, _)| **c != 0)
                        .map(|(&c, x)| x * Rational::from_integer(c.into()))
                        .sum();
                    if is_integral(&v) {
                        continue;
                    }
                    match floor(&v).to_i64() {
                        Some(f) => f,
                        None => continue,
                    }
                }
            };
            if pi0 >= *lo && pi0 <= *hi {
                let s = SplitSet {
                    pi: pi.iter().map(|&v| BigInt::from(v)).collect(),
                    pi0: BigInt::from(pi0),
                };
                out.push((key, s));
            }
        }
        let base = self.directions.len();
        out.extend(
            self.extra
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(p))
                .map(|(i, s)| (base + i, s.clone())),
        );
        out
    }

    /// Appends extras that are not already members.
    pub fn with_extra(&self, extra: impl IntoIterator<Item = SplitSet>) -> Self {
        let mut out = self.clone();
        let mut seen: std::collections::BTreeSet<SplitSet> = self.iter().collect();
        for s in extra {
            assert_eq!(s.dim(), self.dim, "extra split dimension differs from the family");
            if seen.insert(s.clone()) {
                out.extra.push(s);
            }
        }
        out
    }

    pub fn union(&self, other: &SplitFamily) -> Self {
        self.with_extra(other.iter())
    }
}

/// A rational point scaled to `i128` numerators over a common denominator.
pub(crate) struct ScaledPoint {
    pub num: Vec<i128>,
    pub den: i128,
}

impl ScaledPoint {
    pub fn new(p: &[Rational]) -> Option<Self> {
        let den = crate::kernel::common_denominator(p);
        let d = den.to_i128()?;
        if d.abs() > (1 << 40) {
            return None;
        }
        let mut num = Vec::with_capacity(p.len());
        for x in p {
            let v = (x * Rational::from_integer(den.clone())).to_integer().to_i128()?;
            if v.abs() > (1 << 60) {
                return None;
            }
            num.push(v);
        }
        Some(ScaledPoint { num, den: d })
    }

    pub fn dot(&self, pi: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (&c, &x) in pi.iter().zip(&self.num) {
            if c != 0 {
                acc = acc.checked_add((c as i128).checked_mul(x)?)?;
            }
        }
        Some(acc)
    }
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// The canonical bounded family over `support` with coefficient bound `k`.
pub fn enumerate_family(support: &[usize], k: u32, h: &HPolyhedron, cap: u128) -> Result<SplitFamily> {
    if k == 0 {
        return domain("coefficient bound K must be positive");
    }
    let n = h.dim();
    if support.iter().any(|&j| j >= n) {
        return domain("split support outside the space");
    }
    let width = 2 * k as u128 + 1;
    let needed = width
        .checked_pow(support.len() as u32)
        .map_or(u128::MAX, |w| (w - 1) / 2);
    if needed > cap {
        return Err(Error::Capacity {
            what: "split directions",
            needed,
            limit: cap,
        });
    }
    let mut lo = Vec::with_capacity(support.len());
    let mut hi = Vec::with_capacity(support.len());
    for &j in support {
        let e = RatVector::unit(n, j);
        let l = match lp_optimize(h, &e, Sense::Min) {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Infeasible { .. } => return Ok(SplitFamily::empty(n)),
            LpOutcome::Unbounded => return Err(Error::Unbounded("split support variable unbounded".into())),
        };
        let u = match lp_optimize(h, &e, Sense::Max) {
            LpOutcome::Optimal { value, .. } => value,
            _ => return Err(Error::Unbounded("split support variable unbounded".into())),
        };
        lo.push(l);
        hi.push(u);
    }
    let k = k as i64;
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    let mut coeffs = vec![-k; support.len()];
    'odometer: loop {
        if lex_positive(&coeffs) {
            dirs.push(coeffs.clone());
        }
        for i in (0..coeffs.len()).rev() {
            if coeffs[i] < k {
                coeffs[i] += 1;
                coeffs[i + 1..].iter_mut().for_each(|c| *c = -k);
                continue 'odometer;
            }
        }
        break;
    }
    dirs.sort_by(|a, b| {
        let na: i64 = a.iter().map(|c| c.abs()).sum();
        let nb: i64 = b.iter().map(|c| c.abs()).sum();
        na.cmp(&nb).then_with(|| b.cmp(a))
    });
    let mut directions = Vec::with_capacity(dirs.len());
    let mut total: u128 = 0;
    for d in dirs {
        let mut m = Rational::zero();
        let mut mm = Rational::zero();
        for (t, &c) in d.iter().enumerate() {
            let c = Rational::from_integer(c.into());
            let (a, b) = (&c * &lo[t], &c * &hi[t]);
            if a <= b {
                m += a;
                mm += b;
            } else {
                m += b;
                mm += a;
            }
        }
        // pi0 < max and pi0 + 1 > min
        let first = floor(&m);
        let last = ceil(&mm) - 1;
        if first > last {
            continue;
        }
        let (first, last) = match (first.to_i64(), last.to_i64()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Capacity { what: "split offsets", needed: u128::MAX, limit: cap }),
        };
        total += (last - first + 1) as u128;
        if total > cap {
            return Err(Error::Capacity {
                what: "splits",
                needed: total,
                limit: cap,
            });
        }
        let mut dense = vec![0i64; n];
        for (t, &j) in support.iter().enumerate() {
            dense[j] = d[t];
        }
        directions.push((dense, first, last));
    }
    Ok(SplitFamily {
        dim: n,
        support: support.to_vec(),
        k: k as u32,
        directions,
        extra: Vec::new(),
    })
}

/// `enumerate_family` over every integer variable of `m`.
pub fn integer_family(m: &MixedIntegerSet, k: u32, cap: u128) -> Result<SplitFamily> {
    let mut support = m.int_vars.clone();
    support.sort_unstable();
    enumerate_family(&support, k, &m.relax, cap)
}

/// `(H ∩ {pi.x <= pi0}, H ∩ {pi.x >= pi0 + 1})`.
pub fn split_pieces(h: &HPolyhedron, s: &SplitSet) -> (HPolyhedron, HPolyhedron) {
    s.pieces(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::polyhedra::is_empty;

    fn fig1() -> HPolyhedron {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        h
    }

    #[test]
    fn pieces_of_unit_split() {
        let s = SplitSet::from_ints(&[1, 0], 1).unwrap();
        let (h1, h2) = s.pieces(&fig1());
        assert!(h1.contains(&[int(1), int(5) / int(3)]));
        assert!(!h1.contains(&[rat(3, 2), int(1)]));
        assert!(h2.contains(&[int(2), int(1)]));
        assert!(!h2.contains(&[int(1), int(1)]));
    }

    #[test]
    fn far_split_leaves_one_piece() {
        let s = SplitSet::from_ints(&[1, 0], 10).unwrap();
        let (h1, h2) = s.pieces(&fig1());
        assert!(crate::polyhedra::same_set(&h1, &fig1()).unwrap());
        assert!(is_empty(&h2));
    }

    #[test]
    fn zero_direction_is_rejected() {
        assert!(SplitSet::from_ints(&[0, 0], 0).is_err());
    }

    #[test]
    fn unit_family_on_interval() {
        let h = HPolyhedron::cube(&[int(0)], &[int(2)]);
        let f = enumerate_family(&[0], 1, &h, DEFAULT_FAMILY_CAP).unwrap();
        let all: Vec<SplitSet> = f.iter().collect();
        assert_eq!(all, vec![SplitSet::from_ints(&[1], 0).unwrap(), SplitSet::from_ints(&[1], 1).unwrap()]);
        assert!(enumerate_family(&[0], 0, &h, DEFAULT_FAMILY_CAP).is_err());
    }

    #[test]
    fn pentagon_unit_family_matches_direct_enumeration() {
        let h = fig1();
        let f = enumerate_family(&[0, 1], 1, &h, DEFAULT_FAMILY_CAP).unwrap();
        // directions (1,1),(1,0),(1,-1),(0,1) over the box [0,2]^2
        let mut expect = Vec::new();
        for (pi, lo, hi) in [([0, 1], 0, 1), ([1, 0], 0, 1), ([1, 1], 0, 3), ([1, -1], -2, 1)] {
            for pi0 in lo..=hi {
                expect.push(SplitSet::from_ints(&pi, pi0).unwrap());
            }
        }
        let mut got: Vec<SplitSet> = f.iter().collect();
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
        assert_eq!(f.len(), 12);
    }

    #[test]
    fn containing_matches_filter() {
        let h = fig1();
        let f = enumerate_family(&[0, 1], 3, &h, DEFAULT_FAMILY_CAP).unwrap();
        let p = [rat(5, 4), rat(3, 2)];
        let fast = f.containing(&p);
        let slow: Vec<SplitSet> = f.iter().filter(|s| s.contains(&p)).collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn split_text_round_trip() {
        let s = SplitSet::from_ints(&[1, -2, 0], 3).unwrap();
        assert_eq!(s.to_string(), "pi = 1 -2 0 ; pi0 = 3");
        assert_eq!(parse_split(&s.to_string()).unwrap(), s);
        assert!(parse_split("pi = 0 0 ; pi0 = 1").is_err());
    }
}
