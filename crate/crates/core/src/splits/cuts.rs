//! Verification of split cuts, Gomory-Chvátal rounding and multiplier chains.

use num_traits::{Signed, Zero};

use super::SplitSet;
use crate::error::{dimension, domain, Error, Result};
use crate::kernel::{ceil, floor, is_integral, RatVector, Rational};
use crate::polyhedra::{
    enumerate_mixed_points, lp_optimize, HPolyhedron, Inequality, LpOutcome, MixedIntegerSet, Relation, Sense,
};

/// Why a cut holds (or fails) on one side of a split.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceCertificate {
    /// The piece is empty; Farkas multipliers over its rows.
    Empty { farkas: RatVector },
    /// The cut's left side is at most `bound` on the piece; LP duals over its rows.
    Bounded { bound: Rational, duals: RatVector },
    /// A point of the piece violating the cut.
    Violated { point: RatVector },
    Unbounded,
}

impl PieceCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, PieceCertificate::Empty { .. } | PieceCertificate::Bounded { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutVerdict {
    pub valid: bool,
    pub pieces: [PieceCertificate; 2],
}

fn certify(piece: &HPolyhedron, a: &RatVector, b: &Rational) -> PieceCertificate {
    match lp_optimize(piece, a, Sense::Max) {
        LpOutcome::Infeasible { farkas } => PieceCertificate::Empty { farkas },
        LpOutcome::Unbounded => PieceCertificate::Unbounded,
        LpOutcome::Optimal { value, point, duals } => {
            if &value <= b {
                PieceCertificate::Bounded { bound: value, duals }
            } else {
                PieceCertificate::Violated { point }
            }
        }
    }
}

/// Decides whether `cut` is valid for `conv(H \ S)` by LP on both pieces.
pub fn verify_split_cut(h: &HPolyhedron, s: &SplitSet, cut: &Inequality) -> CutVerdict {
    assert_eq!(cut.a.len(), h.dim(), "cut dimension differs from polyhedron");
    let (a, b) = cut.as_le();
    let (h1, h2) = s.pieces(h);
    let pieces = [certify(&h1, &a, &b), certify(&h2, &a, &b)];
    CutVerdict {
        valid: pieces.iter().all(PieceCertificate::holds),
        pieces,
    }
}

fn check_int_support(m: &MixedIntegerSet, c: &[Rational]) -> Result<()> {
    for (j, v) in c.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if !m.is_int(j) {
            return domain(format!("coefficient on continuous variable {}", j + 1));
        }
        if !is_integral(v) {
            return domain(format!("coefficient {} on variable {} is not integral", v, j + 1));
        }
    }
    Ok(())
}

/// `(a / divisor).x <= floor(max_P a.x / divisor)`.
pub fn gc_round(m: &MixedIntegerSet, a: &RatVector, divisor: &Rational) -> Result<Inequality> {
    if a.len() != m.dim() {
        return dimension("cut dimension differs from the set");
    }
    if !divisor.is_positive() {
        return domain("divisor must be positive");
    }
    let c = a.scale(&divisor.recip());
    check_int_support(m, &c)?;
    let beta = match lp_optimize(&m.relax, a, Sense::Max) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Unbounded => return Err(Error::Unbounded("gc_round objective unbounded".into())),
        LpOutcome::Infeasible { .. } => return Err(Error::Infeasible("gc_round over an empty set".into())),
    };
    Ok(Inequality::le(c, Rational::from_integer(floor(&(beta / divisor)))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRelation {
    Le,
    Ge,
    Eq,
}

/// `multiplier * (a.x REL rhs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggStep {
    pub a: RatVector,
    pub rhs: Rational,
    pub rel: StepRelation,
    pub multiplier: Rational,
}

impl AggStep {
    pub fn new(a: RatVector, rel: StepRelation, rhs: Rational, multiplier: Rational) -> Self {
        AggStep { a, rhs, rel, multiplier }
    }

    /// Row `i` of `h` with the given multiplier.
    pub fn row(h: &HPolyhedron, i: usize, multiplier: Rational) -> Self {
        let r = h.row(i);
        let rel = if r.is_eq { StepRelation::Eq } else { StepRelation::Le };
        AggStep::new(r.a.iter().cloned().collect(), rel, r.b.clone(), multiplier)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    None,
    /// Divide by `divisor` (coefficients must become integral) and round the right-hand side.
    Rhs,
    /// Round every coefficient and the right-hand side; needs nonnegative integer variables.
    CoeffsAndRhs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregationReport {
    pub valid: bool,
    pub aggregated: Inequality,
    pub derived: Inequality,
    /// Target checked at every point of the integer set, when enumerable.
    pub enumeration_check: Option<bool>,
    pub reason: Option<String>,
}

fn step_is_valid(h: &HPolyhedron, s: &AggStep) -> bool {
    let max_ok = || match lp_optimize(h, &s.a, Sense::Max) {
        LpOutcome::Optimal { value, .. } => value <= s.rhs,
        LpOutcome::Infeasible { .. } => true,
        LpOutcome::Unbounded => false,
    };
    let min_ok = || match lp_optimize(h, &s.a, Sense::Min) {
        LpOutcome::Optimal { value, .. } => value >= s.rhs,
        LpOutcome::Infeasible { .. } => true,
        LpOutcome::Unbounded => false,
    };
    match s.rel {
        StepRelation::Le => max_ok(),
        StepRelation::Ge => min_ok(),
        StepRelation::Eq => max_ok() && min_ok(),
    }
}

/// Positive `lambda` with `x = lambda * y`, if any.
fn positive_ratio(x: &[Rational], y: &[Rational]) -> Option<Rational> {
    let mut ratio: Option<Rational> = None;
    for (a, b) in x.iter().zip(y) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = a / b;
                if !r.is_positive() || ratio.as_ref().is_some_and(|q| *q != r) {
                    return None;
                }
                ratio = Some(r);
            }
            _ => return None,
        }
    }
    ratio
}

/// Re-derives `target` from a multiplier chain over valid inequalities of `m`.
///
/// Steps are combined in the orientation of `target`: for a `>=` target, `>=` steps
/// need nonnegative multipliers and `<=` steps nonpositive ones (and symmetrically);
/// equations take any sign. `divisor` is used by [`Rounding::Rhs`] only.
pub fn verify_aggregation(
    m: &MixedIntegerSet,
    steps: &[AggStep],
    rounding: Rounding,
    divisor: &Rational,
    target: &Inequality,
    cap: u128,
) -> Result<AggregationReport> {
    let n = m.dim();
    if target.a.len() != n || steps.iter().any(|s| s.a.len() != n) {
        return dimension("aggregation step dimension differs from the set");
    }
    let ge = target.sense == Relation::Ge;
    let mut agg_a = RatVector::zeros(n);
    let mut agg_rhs = Rational::zero();
    let mut reason = None;
    for (k, s) in steps.iter().enumerate() {
        let sign_ok = match (s.rel, ge) {
            (StepRelation::Eq, _) => true,
            (StepRelation::Ge, true) | (StepRelation::Le, false) => !s.multiplier.is_negative(),
            (StepRelation::Le, true) | (StepRelation::Ge, false) => !s.multiplier.is_positive(),
        };
        if !sign_ok {
            return domain(format!("step {} has a multiplier of the wrong sign for its sense", k + 1));
        }
        if s.multiplier.is_zero() {
            continue;
        }
        if reason.is_none() && !step_is_valid(&m.relax, s) {
            reason = Some(format!("step {} is not valid for the set", k + 1));
        }
        agg_a = agg_a.add(&s.a.scale(&s.multiplier));
        agg_rhs += &s.multiplier * &s.rhs;
    }
    let aggregated = Inequality {
        a: agg_a.clone(),
        rhs: agg_rhs.clone(),
        sense: target.sense,
    };
    let round = |r: &Rational| Rational::from_integer(if ge { ceil(r) } else { floor(r) });
    let derived = match rounding {
        Rounding::None => aggregated.clone(),
        Rounding::Rhs => {
            if !divisor.is_positive() {
                return domain("divisor must be positive");
            }
            let c = agg_a.scale(&divisor.recip());
            if let Err(e) = check_int_support(m, &c) {
                reason.get_or_insert(e.to_string());
            }
            Inequality {
                a: c,
                rhs: round(&(&agg_rhs / divisor)),
                sense: target.sense,
            }
        }
        Rounding::CoeffsAndRhs => {
            for (j, v) in agg_a.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let nonneg = m.is_int(j)
                    && matches!(
                        lp_optimize(&m.relax, &RatVector::unit(n, j), Sense::Min),
                        LpOutcome::Optimal { ref value, .. } if !value.is_negative()
                    );
                if !nonneg && reason.is_none() {
                    reason = Some(format!("variable {} is not a nonnegative integer variable", j + 1));
                }
            }
            Inequality {
                a: agg_a.iter().map(&round).collect(),
                rhs: round(&agg_rhs),
                sense: target.sense,
            }
        }
    };
    let matches = match positive_ratio(&target.a, &derived.a) {
        Some(l) => {
            let scaled = &derived.rhs * &l;
            if ge {
                target.rhs <= scaled
            } else {
                target.rhs >= scaled
            }
        }
        None => {
            target.a.is_zero()
                && derived.a.is_zero()
                && if ge {
                    target.rhs <= derived.rhs
                } else {
                    target.rhs >= derived.rhs
                }
        }
    };
    if !matches && reason.is_none() {
        reason = Some(format!(
            "derived inequality differs from the target: {:?} {} vs {:?} {}",
            derived.a.0, derived.rhs, target.a.0, target.rhs
        ));
    }
    let enumeration_check = if rounding == Rounding::CoeffsAndRhs {
        match enumerate_mixed_points(m, cap) {
            Ok(points) => Some(points.iter().all(|p| target.holds_at(p))),
            Err(Error::Capacity { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if enumeration_check == Some(false) && reason.is_none() {
        reason = Some("target fails at a point of the integer set".into());
    }
    Ok(AggregationReport {
        valid: reason.is_none(),
        aggregated,
        derived,
        enumeration_check,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn fig1() -> MixedIntegerSet {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        MixedIntegerSet::new(h, vec![0, 1], vec![2, 2]).unwrap()
    }

    #[test]
    fn split_cut_on_x1() {
        let m = fig1();
        let s = SplitSet::from_ints(&[1, 0], 1).unwrap();
        let cut = Inequality::le(RatVector::from_ints(&[2, 3]), int(7));
        let v = verify_split_cut(&m.relax, &s, &cut);
        assert!(v.valid);
        let too_strong = Inequality::le(RatVector::from_ints(&[2, 3]), int(6));
        assert!(!verify_split_cut(&m.relax, &s, &too_strong).valid);
    }

    #[test]
    fn trivial_cut_is_valid() {
        let m = fig1();
        let s = SplitSet::from_ints(&[1, 1], 2).unwrap();
        let cut = Inequality::le(RatVector::zeros(2), int(1));
        assert!(verify_split_cut(&m.relax, &s, &cut).valid);
    }

    #[test]
    fn gc_round_on_pentagon() {
        let m = fig1();
        // max x2 = 2 already integral
        let c = gc_round(&m, &RatVector::from_ints(&[0, 1]), &int(1)).unwrap();
        assert_eq!(c, Inequality::le(RatVector::from_ints(&[0, 1]), int(2)));
        // max 2x1 + 2x2 = 7 at (3/2, 2)
        let c = gc_round(&m, &RatVector::from_ints(&[2, 2]), &int(2)).unwrap();
        assert_eq!(c, Inequality::le(RatVector::from_ints(&[1, 1]), int(3)));
        assert!(gc_round(&m, &RatVector::from_ints(&[1, 2]), &int(2)).is_err());
    }

    #[test]
    fn single_row_aggregation() {
        let m = fig1();
        let i = m.relax.n_rows() - 1;
        let steps: Vec<AggStep> = (0..m.relax.n_rows())
            .map(|k| AggStep::row(&m.relax, k, if k == i { int(1) } else { int(0) }))
            .collect();
        let target = Inequality::le(RatVector::from_ints(&[-2, 3]), int(3));
        let r = verify_aggregation(&m, &steps, Rounding::None, &int(1), &target, 1000).unwrap();
        assert!(r.valid, "{:?}", r.reason);
    }

    #[test]
    fn wrong_sign_is_rejected() {
        let m = fig1();
        let steps = vec![AggStep::new(RatVector::from_ints(&[1, 0]), StepRelation::Le, int(2), int(-1))];
        let target = Inequality::le(RatVector::from_ints(&[-1, 0]), int(-2));
        assert!(verify_aggregation(&m, &steps, Rounding::None, &int(1), &target, 1000).is_err());
    }

    #[test]
    fn rhs_rounding() {
        let m = fig1();
        // (2x1 + x2 <= 5) + (x2 <= 2) = 2x1 + 2x2 <= 7, halved and rounded: x1 + x2 <= 3
        let steps = vec![
            AggStep::new(RatVector::from_ints(&[2, 1]), StepRelation::Le, int(5), int(1)),
            AggStep::new(RatVector::from_ints(&[0, 1]), StepRelation::Le, int(2), int(1)),
        ];
        let target = Inequality::le(RatVector::from_ints(&[1, 1]), int(3));
        let r = verify_aggregation(&m, &steps, Rounding::Rhs, &int(2), &target, 1000).unwrap();
        assert!(r.valid, "{:?}", r.reason);
        let wrong = Inequality::le(RatVector::from_ints(&[1, 1]), int(2));
        assert!(!verify_aggregation(&m, &steps, Rounding::Rhs, &int(2), &wrong, 1000).unwrap().valid);
        let r = verify_aggregation(&m, &steps, Rounding::Rhs, &rat(1, 1), &target, 1000).unwrap();
        assert!(!r.valid);
    }
}
