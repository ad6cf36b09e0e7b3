//! Binarization polytopes `B ⊆ {(x, z) : 0 <= x <= u, z in [0,1]^q}` whose 0-1
//! slices realize exactly `{0, ..., u}`, and schemes built from them.

mod knapsack;
mod maps;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::kernel::{int, is_integral, rank, solve, RatMatrix, RatVector, Rational};
use crate::polyhedra::{hull, same_set, vertices, HPolyhedron};

pub use knapsack::superincreasing_knapsack_facets;
pub use maps::{affine_to_linear, unimodular_map, IntAffineMap};

/// Largest `q` for which the `2^q` binary codes are enumerated.
pub const MAX_ENUM_Q: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolytopeKind {
    Full,
    Unary,
    Log,
    LogPerfect,
    Alt,
}

impl PolytopeKind {
    pub const ALL: [PolytopeKind; 5] = [
        PolytopeKind::Full,
        PolytopeKind::Unary,
        PolytopeKind::Log,
        PolytopeKind::LogPerfect,
        PolytopeKind::Alt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolytopeKind::Full => "full",
            PolytopeKind::Unary => "unary",
            PolytopeKind::Log => "log",
            PolytopeKind::LogPerfect => "logplus",
            PolytopeKind::Alt => "alt",
        }
    }
}

impl fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolytopeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolytopeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown binarization kind `{s}`")))
    }
}

/// Which 0-1 code represents a value that has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessRule {
    /// Smallest `sum_j 2^(j-1) z_j`, i.e. lexicographic order reading `z_q` first.
    #[default]
    Colex,
    /// Lexicographic order reading `z_1` first.
    Lex,
}

/// A 0-1 code `w` together with the value `x` it fixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub k: u64,
    pub w: RatVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarizationPolytope {
    /// Over `(x, z_1, ..., z_q)`.
    pub body: HPolyhedron,
    pub u: u64,
    pub q: usize,
    pub generators: Option<Vec<Generator>>,
    pub kind: Option<PolytopeKind>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub is_exact: bool,
    pub is_perfect: bool,
    pub is_unimodular: bool,
    /// `x = alpha.z + alpha0` on the whole polytope.
    pub affine: Option<(RatVector, Rational)>,
    pub linear: bool,
}

fn body_names(q: usize) -> Vec<String> {
    std::iter::once("x".to_string())
        .chain((1..=q).map(|j| format!("z{j}")))
        .collect()
}

fn ceil_log2_succ(u: u64) -> usize {
    // ceil(log2(u + 1))
    (64 - u.leading_zeros()) as usize
}

fn code(bits: u64, q: usize) -> RatVector {
    (0..q).map(|j| int(((bits >> j) & 1) as i64)).collect()
}

/// Adds `0 <= x <= u` and `0 <= z <= 1` rows.
fn add_bounds(h: &mut HPolyhedron, u: u64, q: usize) {
    let n = q + 1;
    let mut rows = Vec::new();
    for j in 0..n {
        let e = RatVector::unit(n, j).0;
        let hi = if j == 0 { int(u as i64) } else { Rational::one() };
        rows.push((e.iter().map(|v| -v).collect(), Rational::zero(), false));
        rows.push((e, hi, false));
    }
    h.extend_rows(rows);
}

impl BinarizationPolytope {
    /// A polytope from an explicit body over `(x, z)`; bound rows are added.
    pub fn from_body(body: &HPolyhedron, u: u64) -> Result<Self> {
        if body.dim() < 2 {
            return domain("binarization body needs x and at least one z");
        }
        let q = body.dim() - 1;
        let mut b = HPolyhedron::universe_named(body_names(q));
        b.extend_rows(body.rows().map(|r| (r.a.to_vec(), r.b.clone(), r.is_eq)));
        add_bounds(&mut b, u, q);
        Ok(BinarizationPolytope {
            body: b,
            u,
            q,
            generators: None,
            kind: None,
        })
    }

    /// `conv{(k, w^k)}`.
    pub fn from_generators(u: u64, gens: Vec<Generator>) -> Result<Self> {
        let q = gens.first().map_or(0, |g| g.w.len());
        if q == 0 || gens.iter().any(|g| g.w.len() != q) {
            return domain("generators need codes of one positive length");
        }
        let pts: Vec<RatVector> = gens
            .iter()
            .map(|g| std::iter::once(int(g.k as i64)).chain(g.w.iter().cloned()).collect())
            .collect();
        let h = hull(&pts)?;
        let mut p = Self::from_body(&h, u)?;
        p.generators = Some(gens);
        Ok(p)
    }

    pub fn make(kind: PolytopeKind, u: u64) -> Result<Self> {
        if u < 1 {
            return domain("binarization needs u >= 1");
        }
        let ui = u as i64;
        let (q, x_coeffs, mut extra): (usize, Vec<i64>, Vec<(Vec<i64>, i64)>) = match kind {
            PolytopeKind::Full => {
                let q = u as usize;
                (q, (1..=ui).collect(), vec![(vec![1; q], 1)])
            }
            PolytopeKind::Unary => {
                let q = u as usize;
                // z_{j+1} - z_j <= 0
                let rows = (1..q)
                    .map(|j| {
                        let mut a = vec![0; q];
                        a[j] = 1;
                        a[j - 1] = -1;
                        (a, 0)
                    })
                    .collect();
                (q, vec![1; q], rows)
            }
            PolytopeKind::Log | PolytopeKind::LogPerfect => {
                let q = ceil_log2_succ(u);
                (q, (0..q).map(|j| 1i64 << j).collect(), Vec::new())
            }
            PolytopeKind::Alt => {
                if u < 2 {
                    return domain("the alternative binarization needs u >= 2");
                }
                let q = u as usize;
                let mut coeffs = vec![1; q];
                coeffs[q - 1] = ui;
                let mut rows: Vec<(Vec<i64>, i64)> = (1..q - 1)
                    .map(|j| {
                        let mut a = vec![0; q];
                        a[j] = 1;
                        a[j - 1] = -1;
                        (a, 0)
                    })
                    .collect();
                let mut a = vec![0; q];
                a[0] = 1;
                a[q - 1] = 1;
                rows.push((a, 1));
                (q, coeffs, rows)
            }
        };
        if kind == PolytopeKind::LogPerfect {
            for ineq in superincreasing_knapsack_facets(u, q) {
                let a = ineq.a.iter().map(|v| v.to_integer().try_into().expect("0-1 coefficient")).collect();
                extra.push((a, ineq.rhs.to_integer().try_into().expect("small rhs")));
            }
        }
        let mut body = HPolyhedron::universe_named(body_names(q));
        let mut eq = vec![int(1)];
        eq.extend(x_coeffs.iter().map(|&c| int(-c)));
        body.add_eq(eq, Rational::zero());
        for (a, b) in extra {
            let mut row = vec![Rational::zero()];
            row.extend(a.into_iter().map(int));
            body.add_le(row, int(b));
        }
        add_bounds(&mut body, u, q);
        let generators = match kind {
            PolytopeKind::Log => None,
            PolytopeKind::Full => Some(
                (0..=u)
                    .map(|k| Generator {
                        k,
                        w: if k == 0 { RatVector::zeros(q) } else { RatVector::unit(q, k as usize - 1) },
                    })
                    .collect(),
            ),
            PolytopeKind::Unary => Some(
                (0..=u)
                    .map(|k| Generator {
                        k,
                        w: (0..q).map(|j| int((j < k as usize) as i64)).collect(),
                    })
                    .collect(),
            ),
            PolytopeKind::LogPerfect => Some((0..=u).map(|k| Generator { k, w: code(k, q) }).collect()),
            PolytopeKind::Alt => Some(
                (0..=u)
                    .map(|k| Generator {
                        k,
                        w: if k == u {
                            RatVector::unit(q, q - 1)
                        } else {
                            (0..q).map(|j| int((j < k as usize) as i64)).collect()
                        },
                    })
                    .collect(),
            ),
        };
        Ok(BinarizationPolytope {
            body,
            u,
            q,
            generators,
            kind: Some(kind),
        })
    }

    fn require_enumerable(&self) -> Result<()> {
        if self.q > MAX_ENUM_Q {
            return Err(Error::Capacity {
                what: "binary codes",
                needed: 1u128 << self.q.min(127),
                limit: 1u128 << MAX_ENUM_Q,
            });
        }
        Ok(())
    }

    /// The x-range of the slice `z = w`, or `None` when the slice is empty.
    pub fn slice(&self, w: &[Rational]) -> Option<(Option<Rational>, Option<Rational>)> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for r in self.body.rows() {
            let ax = &r.a[0];
            let t = r.b - crate::kernel::dot(&r.a[1..], w);
            if ax.is_zero() {
                let ok = if r.is_eq { t.is_zero() } else { t >= Rational::zero() };
                if !ok {
                    return None;
                }
                continue;
            }
            let v = &t / ax;
            let positive = ax > &Rational::zero();
            if r.is_eq || positive {
                hi = Some(match hi {
                    Some(h) if h < v => h,
                    _ => v.clone(),
                });
            }
            if r.is_eq || !positive {
                lo = Some(match lo {
                    Some(l) if l > v => l,
                    _ => v,
                });
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return None;
            }
        }
        Some((lo, hi))
    }

    /// All 0-1 points `(k, w)` of the polytope, each value's codes ordered by `rule`.
    /// Fails if some nonempty slice does not pin `x` to one integer.
    pub fn zero_one_points(&self, rule: WitnessRule) -> Result<Vec<Generator>> {
        self.require_enumerable()?;
        let mut out = Vec::new();
        for bits in 0u64..(1u64 << self.q) {
            let w = code(bits, self.q);
            let Some((lo, hi)) = self.slice(&w) else { continue };
            match (lo, hi) {
                (Some(l), Some(h)) if l == h && is_integral(&l) && l >= Rational::zero() && l <= int(self.u as i64) => {
                    out.push(Generator {
                        k: l.to_integer().try_into().expect("bounded value"),
                        w,
                    });
                }
                _ => return domain("a 0-1 slice does not fix x to an integer in range"),
            }
        }
        match rule {
            WitnessRule::Colex => out.sort_by_key(|g| g.k),
            WitnessRule::Lex => out.sort_by(|a, b| a.k.cmp(&b.k).then_with(|| a.w.0.cmp(&b.w.0))),
        }
        Ok(out)
    }

    /// Membership in `Gamma^q_u`: every nonempty 0-1 slice fixes an integer in
    /// `{0..u}` and every such integer is attained.
    pub fn check_membership(&self) -> Result<bool> {
        self.require_enumerable()?;
        match self.zero_one_points(WitnessRule::Colex) {
            Ok(pts) => {
                let mut seen = vec![false; self.u as usize + 1];
                for g in &pts {
                    seen[g.k as usize] = true;
                }
                Ok(seen.into_iter().all(|s| s))
            }
            Err(Error::Domain(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// One code per value, chosen by `rule`.
    pub fn witnesses(&self, rule: WitnessRule) -> Result<Vec<Generator>> {
        let pts = self.zero_one_points(rule)?;
        let mut out: Vec<Generator> = Vec::with_capacity(self.u as usize + 1);
        for g in pts {
            if out.last().map(|l| l.k) != Some(g.k) {
                out.push(g);
            }
        }
        if out.len() != self.u as usize + 1 {
            return domain("not a binarization polytope: some value has no code");
        }
        Ok(out)
    }

    pub fn classify(&self) -> Result<Classification> {
        if !self.check_membership()? {
            return domain("not a binarization polytope");
        }
        let pts = self.zero_one_points(WitnessRule::Colex)?;
        let is_exact = pts.len() == self.u as usize + 1;
        let is_perfect = is_exact && {
            let lifted: Vec<RatVector> = pts
                .iter()
                .map(|g| std::iter::once(int(g.k as i64)).chain(g.w.iter().cloned()).collect())
                .collect();
            let mut h = hull(&lifted)?;
            h.set_var_names(self.body.var_names().to_vec());
            same_set(&h, &self.body)?
        };
        let is_unimodular = is_perfect && self.q as u64 == self.u && {
            let cols: Vec<RatVector> = pts[1..].iter().map(|g| g.w.sub(&pts[0].w)).collect();
            crate::kernel::is_unimodular(&RatMatrix::from_columns(&cols)?)?
        };
        let affine = self.affine_relation()?;
        let linear = affine.as_ref().is_some_and(|(_, a0)| a0.is_zero());
        Ok(Classification {
            is_exact,
            is_perfect,
            is_unimodular,
            affine,
            linear,
        })
    }

    /// Solves `x = alpha.z + alpha0` over the vertices of the body, trying
    /// `alpha0 = 0` first.
    fn affine_relation(&self) -> Result<Option<(RatVector, Rational)>> {
        let verts = vertices(&self.body)?.vertices;
        let q = self.q;
        let xs: Vec<Rational> = verts.iter().map(|v| v[0].clone()).collect();
        let zs = RatMatrix::from_rows(verts.iter().map(|v| v[1..].to_vec()).collect())?;
        if let Some(alpha) = solve(&zs, &xs)? {
            return Ok(Some((alpha, Rational::zero())));
        }
        let with_one = RatMatrix::from_rows(
            verts
                .iter()
                .map(|v| v[1..].iter().cloned().chain(std::iter::once(Rational::one())).collect())
                .collect(),
        )?;
        Ok(solve(&with_one, &xs)?.map(|s| (s[..q].iter().cloned().collect(), s[q].clone())))
    }

    /// `conv{(k, w_k)}` with one code per value chosen by `rule`; perfect and contained in `self`.
    pub fn perfect_restriction(&self, rule: WitnessRule) -> Result<Self> {
        let gens = self.witnesses(rule)?;
        let mut p = Self::from_generators(self.u, gens)?;
        p.kind = match self.kind {
            Some(PolytopeKind::Log) => Some(PolytopeKind::LogPerfect),
            k => k,
        };
        Ok(p)
    }

    /// Dimension of the polytope (at most `u` for a binarization polytope).
    pub fn dimension(&self) -> Result<usize> {
        let v = vertices(&self.body)?.vertices;
        if v.is_empty() {
            return Ok(0);
        }
        let diffs = RatMatrix::from_rows(v[1..].iter().map(|p| p.sub(&v[0]).0).collect())
            .unwrap_or_else(|_| RatMatrix::zeros(0, self.q + 1));
        Ok(if v.len() == 1 { 0 } else { rank(&diffs) })
    }
}

/// One binarization polytope per integer variable, in integer-variable order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinarizationScheme {
    pub polytopes: Vec<BinarizationPolytope>,
}

impl BinarizationScheme {
    pub fn uniform(kind: PolytopeKind, bounds: &[u64]) -> Result<Self> {
        Ok(BinarizationScheme {
            polytopes: bounds.iter().map(|&u| BinarizationPolytope::make(kind, u)).collect::<Result<_>>()?,
        })
    }

    pub fn total_q(&self) -> usize {
        self.polytopes.iter().map(|p| p.q).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn eq9() -> BinarizationPolytope {
        let gens = vec![
            Generator { k: 0, w: RatVector::from_ints(&[0, 0]) },
            Generator { k: 1, w: RatVector::from_ints(&[1, 0]) },
            Generator { k: 2, w: RatVector::from_ints(&[1, 1]) },
            Generator { k: 3, w: RatVector::from_ints(&[0, 1]) },
        ];
        BinarizationPolytope::from_generators(3, gens).unwrap()
    }

    #[test]
    fn full_two_rows() {
        let b = BinarizationPolytope::make(PolytopeKind::Full, 2).unwrap();
        assert_eq!(b.q, 2);
        assert!(b.body.contains(&[int(2), int(0), int(1)]));
        assert!(!b.body.contains(&[int(3), int(1), int(1)]));
        assert!(b.check_membership().unwrap());
    }

    #[test]
    fn logplus_extra_rows() {
        let b = BinarizationPolytope::make(PolytopeKind::LogPerfect, 2).unwrap();
        let plain = BinarizationPolytope::make(PolytopeKind::Log, 2).unwrap();
        assert!(plain.body.contains(&[rat(3, 2), int(1), rat(1, 4)]));
        assert!(!b.body.contains(&[rat(3, 2), int(1), rat(1, 4)]));
        let b5 = BinarizationPolytope::make(PolytopeKind::LogPerfect, 5).unwrap();
        assert_eq!(b5.q, 3);
        // z2 + z3 <= 1 cuts (6, (0,1,1))
        assert!(!b5.body.contains(&[int(6), int(0), int(1), int(1)]));
    }

    #[test]
    fn membership_detects_missing_value() {
        let mut b = BinarizationPolytope::make(PolytopeKind::Full, 2).unwrap();
        b.body.add_ge(vec![int(1), int(0), int(0)], int(1));
        assert!(!b.check_membership().unwrap());
        assert!(eq9().check_membership().unwrap());
    }

    #[test]
    fn classification_of_named_polytopes() {
        let c = BinarizationPolytope::make(PolytopeKind::Unary, 4).unwrap().classify().unwrap();
        assert!(c.is_exact && c.is_perfect && c.is_unimodular && c.linear);
        let c = BinarizationPolytope::make(PolytopeKind::Log, 2).unwrap().classify().unwrap();
        assert!(c.is_exact && !c.is_perfect && c.linear);
        let c = eq9().classify().unwrap();
        assert!(c.is_exact && c.is_perfect && c.affine.is_none() && !c.linear);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in PolytopeKind::ALL {
            assert_eq!(k.name().parse::<PolytopeKind>().unwrap(), k);
        }
        assert!("gray".parse::<PolytopeKind>().is_err());
    }
}
