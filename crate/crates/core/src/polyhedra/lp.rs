//! Exact simplex.
//!
//! `max c.x s.t. A x <= b` (x free) is solved through its dual
//! `min b.y s.t. A^T y = c, y >= 0`, which has one equation per variable.
//! The dual is run with a two-phase primal simplex under Bland's rule; the
//! primal point is read off the reduced costs of the artificial columns.

use num_traits::{Signed, Zero};

use super::HPolyhedron;
use crate::kernel::{dot, RatVector, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `farkas` has one multiplier per row (nonnegative on inequality rows) with
    /// `farkas^T A = 0` and `farkas^T b = -1`.
    Infeasible { farkas: RatVector },
    Unbounded,
    /// For `Max`, `duals^T A = c` and `duals^T b = value`; for `Min`, the same with
    /// `-c` and `-value`. Duals are nonnegative on inequality rows.
    Optimal {
        value: Rational,
        point: RatVector,
        duals: RatVector,
    },
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

enum DualResult {
    /// `y` on the dual columns, `x` the primal optimum.
    Optimal { y: Vec<Rational>, x: Vec<Rational> },
    /// Nonnegative `d` with `sum_k d_k a_k = 0` and `b.d < 0`.
    Unbounded { ray: Vec<Rational> },
    Infeasible,
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    obj: Vec<Rational>,
    obj_rhs: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, s: usize) {
        let p = self.t[r][s].clone();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        self.rhs[r] /= &p;
        let nz: Vec<usize> = (0..self.t[r].len()).filter(|&j| !self.t[r][j].is_zero()).collect();
        let (prow, prhs) = (self.t[r].clone(), self.rhs[r].clone());
        for i in 0..self.t.len() {
            if i == r || self.t[i][s].is_zero() {
                continue;
            }
            let f = self.t[i][s].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.t[i][j] -= d;
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &f * &prhs;
            }
        }
        if !self.obj[s].is_zero() {
            let f = self.obj[s].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.obj[j] -= d;
            }
            if !prhs.is_zero() {
                self.obj_rhs -= &f * &prhs;
            }
        }
        self.basis[r] = s;
    }

    /// Bland's rule over columns `< limit`. Returns `false` when unbounded
    /// (the entering column is left in `entering`).
    fn run(&mut self, limit: usize, entering: &mut Option<usize>) -> bool {
        loop {
            let Some(s) = (0..limit).find(|&k| self.obj[k].is_negative()) else {
                *entering = None;
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][s].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][s];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, s),
                None => {
                    *entering = Some(s);
                    return false;
                }
            }
        }
    }
}

/// `min b.y s.t. sum_k y_k a_k = c, y >= 0` where column `k` is `(a_k, b_k)`.
fn solve_dual(cols: &[(&[Rational], Rational)], c: &[Rational]) -> DualResult {
    let n = c.len();
    let nc = cols.len();
    let width = nc + n;
    let sign: Vec<bool> = c.iter().map(|v| v.is_negative()).collect();
    let mut t = vec![vec![Rational::zero(); width]; n];
    let mut rhs = Vec::with_capacity(n);
    for j in 0..n {
        for (k, (a, _)) in cols.iter().enumerate() {
            if !a[j].is_zero() {
                t[j][k] = if sign[j] { -a[j].clone() } else { a[j].clone() };
            }
        }
        t[j][nc + j] = Rational::from_integer(1.into());
        rhs.push(if sign[j] { -c[j].clone() } else { c[j].clone() });
    }
    let mut obj = vec![Rational::zero(); width];
    for k in 0..nc {
        for row in &t {
            if !row[k].is_zero() {
                obj[k] -= &row[k];
            }
        }
    }
    let obj_rhs = -rhs.iter().fold(Rational::zero(), |acc, v| acc + v);
    let mut tab = Tableau {
        t,
        rhs,
        obj,
        obj_rhs,
        basis: (nc..nc + n).collect(),
    };

    let mut entering = None;
    tab.run(nc, &mut entering);
    if !tab.obj_rhs.is_zero() {
        return DualResult::Infeasible;
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..n {
        if tab.basis[i] >= nc {
            if let Some(k) = (0..nc).find(|&k| !tab.t[i][k].is_zero()) {
                tab.pivot(i, k);
            }
        }
    }

    let cost = |k: usize| -> Rational {
        if k < nc {
            cols[k].1.clone()
        } else {
            Rational::zero()
        }
    };
    let mut obj = (0..width).map(&cost).collect::<Vec<_>>();
    let mut obj_rhs = Rational::zero();
    for i in 0..n {
        let cb = cost(tab.basis[i]);
        if cb.is_zero() {
            continue;
        }
        for (k, o) in obj.iter_mut().enumerate() {
            if !tab.t[i][k].is_zero() {
                *o -= &cb * &tab.t[i][k];
            }
        }
        obj_rhs -= &cb * &tab.rhs[i];
    }
    tab.obj = obj;
    tab.obj_rhs = obj_rhs;

    if !tab.run(nc, &mut entering) {
        let s = entering.expect("entering column recorded");
        let mut ray = vec![Rational::zero(); nc];
        ray[s] = Rational::from_integer(1.into());
        for i in 0..n {
            let k = tab.basis[i];
            if k < nc && !tab.t[i][s].is_zero() {
                ray[k] = -tab.t[i][s].clone();
            }
        }
        return DualResult::Unbounded { ray };
    }

    let mut y = vec![Rational::zero(); nc];
    for i in 0..n {
        if tab.basis[i] < nc {
            y[tab.basis[i]] = tab.rhs[i].clone();
        }
    }
    let x = (0..n)
        .map(|j| {
            let v = -tab.obj[nc + j].clone();
            if sign[j] {
                -v
            } else {
                v
            }
        })
        .collect();
    DualResult::Optimal { y, x }
}

/// Column list of the dual: one per inequality row, two per equation.
fn dual_columns(h: &HPolyhedron) -> (Vec<(Vec<Rational>, Rational)>, Vec<(usize, bool)>) {
    let mut cols = Vec::new();
    let mut origin = Vec::new();
    for (i, r) in h.rows().enumerate() {
        cols.push((r.a.to_vec(), r.b.clone()));
        origin.push((i, false));
        if r.is_eq {
            cols.push((r.a.iter().map(|v| -v).collect(), -r.b.clone()));
            origin.push((i, true));
        }
    }
    (cols, origin)
}

fn fold_multipliers(m: usize, origin: &[(usize, bool)], y: &[Rational]) -> RatVector {
    let mut u = RatVector::zeros(m);
    for (k, &(i, neg)) in origin.iter().enumerate() {
        if y[k].is_zero() {
            continue;
        }
        if neg {
            u[i] -= &y[k];
        } else {
            u[i] += &y[k];
        }
    }
    u
}

/// Exact LP over `h`.
pub fn lp_optimize(h: &HPolyhedron, c: &RatVector, sense: Sense) -> LpOutcome {
    assert_eq!(c.len(), h.dim(), "objective length differs from dimension");
    let (cols, origin) = dual_columns(h);
    let refs: Vec<(&[Rational], Rational)> = cols.iter().map(|(a, b)| (a.as_slice(), b.clone())).collect();
    let obj: Vec<Rational> = match sense {
        Sense::Max => c.0.clone(),
        Sense::Min => c.iter().map(|v| -v).collect(),
    };
    let m = h.n_rows();
    let infeasible = |ray: Vec<Rational>| {
        let mut u = fold_multipliers(m, &origin, &ray);
        let bu = dot(&u, h.rhs());
        debug_assert!(bu.is_negative());
        let s = -bu.recip();
        u.iter_mut().for_each(|v| *v *= &s);
        LpOutcome::Infeasible { farkas: u }
    };
    match solve_dual(&refs, &obj) {
        DualResult::Optimal { y, x } => {
            let duals = fold_multipliers(m, &origin, &y);
            let point = RatVector(x);
            let raw = dot(&obj, &point);
            debug_assert!(h.contains(&point), "simplex returned an infeasible point");
            debug_assert_eq!(raw, dot(&duals, h.rhs()));
            let value = match sense {
                Sense::Max => raw,
                Sense::Min => -raw,
            };
            LpOutcome::Optimal { value, point, duals }
        }
        DualResult::Unbounded { ray } => infeasible(ray),
        DualResult::Infeasible => {
            let zero = vec![Rational::zero(); h.dim()];
            match solve_dual(&refs, &zero) {
                DualResult::Unbounded { ray } => infeasible(ray),
                _ => LpOutcome::Unbounded,
            }
        }
    }
}

/// Some point of `h`, or `None` when empty.
pub fn lp_feasible_point(h: &HPolyhedron) -> Option<RatVector> {
    match lp_optimize(h, &RatVector::zeros(h.dim()), Sense::Max) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

pub fn is_empty(h: &HPolyhedron) -> bool {
    lp_feasible_point(h).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    /// 2x1 + x2 <= 5, -2x1 + 3x2 <= 3, 0 <= x <= 2.
    pub(crate) fn fig1() -> HPolyhedron {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        h
    }

    #[test]
    fn optimum_over_pentagon() {
        let h = fig1();
        match lp_optimize(&h, &RatVector::from_ints(&[0, 1]), Sense::Max) {
            LpOutcome::Optimal { value, point, duals } => {
                // vertex enumeration: (0,0) (2,0) (2,1) (3/2,2) (0,1)
                assert_eq!(value, int(2));
                assert_eq!(point, RatVector(vec![rat(3, 2), int(2)]));
                assert!(duals.iter().all(|d| !d.is_negative()));
            }
            other => panic!("{other:?}"),
        }
        let r = lp_optimize(&h, &RatVector::from_ints(&[1, 1]), Sense::Min);
        assert_eq!(r.value(), Some(&int(0)));
    }

    #[test]
    fn unit_box() {
        let h = HPolyhedron::cube(&[int(0), int(0)], &[int(1), int(1)]);
        match lp_optimize(&h, &RatVector::from_ints(&[1, 1]), Sense::Max) {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(value, int(2));
                assert_eq!(point, RatVector::from_ints(&[1, 1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        let mut h = HPolyhedron::universe(1);
        h.add_le(vec![int(1)], int(0));
        h.add_ge(vec![int(1)], int(1));
        match lp_optimize(&h, &RatVector::from_ints(&[1]), Sense::Max) {
            LpOutcome::Infeasible { farkas } => {
                assert!(farkas.iter().all(|v| !v.is_negative()));
                assert_eq!(dot(&farkas, h.rhs()), int(-1));
                assert!(h.matrix().transpose().mul_vec(&farkas).unwrap().is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_and_equations() {
        let mut h = HPolyhedron::universe(2);
        h.add_eq(vec![int(1), int(-1)], int(0));
        assert_eq!(lp_optimize(&h, &RatVector::from_ints(&[1, 0]), Sense::Max), LpOutcome::Unbounded);
        h.add_le(vec![int(1), int(0)], int(3));
        match lp_optimize(&h, &RatVector::from_ints(&[1, 1]), Sense::Max) {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(value, int(6));
                assert_eq!(point, RatVector::from_ints(&[3, 3]));
            }
            other => panic!("{other:?}"),
        }
        // infeasible through equations
        let mut e = HPolyhedron::universe(2);
        e.add_eq(vec![int(1), int(1)], int(1));
        e.add_eq(vec![int(1), int(1)], int(2));
        assert!(matches!(lp_optimize(&e, &RatVector::zeros(2), Sense::Max), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn empty_row_set() {
        let h = HPolyhedron::universe(2);
        assert!(matches!(lp_optimize(&h, &RatVector::zeros(2), Sense::Max), LpOutcome::Optimal { .. }));
        assert_eq!(lp_optimize(&h, &RatVector::from_ints(&[0, 1]), Sense::Min), LpOutcome::Unbounded);
    }
}
