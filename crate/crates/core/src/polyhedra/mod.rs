//! Inequality-form polyhedra, LP, vertex/facet enumeration, projection and
//! mixed-integer hulls.

mod dd;
mod hull;
mod integer_hull;
mod lp;
mod project;
mod union;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{dimension, domain, Result};
use crate::kernel::{dot, primitive_integer, RatMatrix, RatVector, Rational};

pub use hull::{hull, minimal_vertices};
pub use integer_hull::{enumerate_mixed_points, mixed_integer_hull, DEFAULT_ENUMERATION_CAP};
pub use lp::{is_empty, lp_feasible_point, lp_optimize, LpOutcome, Sense};
pub use project::project;
pub use union::{conv_union_member, UnionMembership};



/// `{x : A_i x <= b_i, i not in eq_rows; A_i x = b_i, i in eq_rows}`.
#[derive(Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    a: RatMatrix,
    b: RatVector,
    eq_rows: BTreeSet<usize>,
    var_names: Vec<String>,
}

/// One row of an [`HPolyhedron`], borrowed.
#[derive(Debug, Clone, Copy)]
pub struct RowRef<'a> {
    pub a: &'a [Rational],
    pub b: &'a Rational,
    pub is_eq: bool,
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl HPolyhedron {
    /// The whole space `R^n` (no rows).
    pub fn universe(n: usize) -> Self {
        Self::universe_named(default_names(n))
    }

    pub fn universe_named(var_names: Vec<String>) -> Self {
        assert!(!var_names.is_empty(), "polyhedron needs at least one variable");
        let n = var_names.len();
        HPolyhedron {
            a: RatMatrix::zeros(0, n),
            b: RatVector::zeros(0),
            eq_rows: BTreeSet::new(),
            var_names,
        }
    }

    pub fn new(a: RatMatrix, b: RatVector, eq_rows: BTreeSet<usize>, var_names: Vec<String>) -> Result<Self> {
        if a.rows() != b.len() {
            return dimension("A and b have different row counts");
        }
        if a.cols() != var_names.len() || var_names.is_empty() {
            return dimension("variable names do not match the column count");
        }
        if eq_rows.iter().any(|&i| i >= a.rows()) {
            return dimension("equation row index out of range");
        }
        Ok(HPolyhedron {
            a,
            b,
            eq_rows,
            var_names,
        })
    }

    /// Box `lo <= x <= hi`.
    pub fn cube(lo: &[Rational], hi: &[Rational]) -> Self {
        let n = lo.len();
        let mut h = Self::universe(n);
        for i in 0..n {
            h.add_ge(RatVector::unit(n, i).0, lo[i].clone());
            h.add_le(RatVector::unit(n, i).0, hi[i].clone());
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.b.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn set_var_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.dim());
        self.var_names = names;
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &RatVector {
        &self.b
    }

    pub fn eq_rows(&self) -> &BTreeSet<usize> {
        &self.eq_rows
    }

    pub fn row(&self, i: usize) -> RowRef<'_> {
        RowRef {
            a: self.a.row(i),
            b: &self.b[i],
            is_eq: self.eq_rows.contains(&i),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = RowRef<'_>> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    fn push(&mut self, a: Vec<Rational>, b: Rational, is_eq: bool) {
        if is_eq {
            self.eq_rows.insert(self.b.len());
        }
        self.a.push_row(a);
        self.b.0.push(b);
    }

    /// Appends `a x <= b`.
    pub fn add_le(&mut self, a: Vec<Rational>, b: Rational) {
        self.push(a, b, false);
    }

    /// Appends `a x >= b`, stored as `-a x <= -b`.
    pub fn add_ge(&mut self, a: Vec<Rational>, b: Rational) {
        self.push(a.into_iter().map(|x| -x).collect(), -b, false);
    }

    pub fn add_eq(&mut self, a: Vec<Rational>, b: Rational) {
        self.push(a, b, true);
    }

    pub fn add_row(&mut self, row: RowRef<'_>) {
        self.push(row.a.to_vec(), row.b.clone(), row.is_eq);
    }

    pub fn extend_rows(&mut self, rows: impl IntoIterator<Item = (Vec<Rational>, Rational, bool)>) {
        for (a, b, is_eq) in rows {
            self.push(a, b, is_eq);
        }
    }

    pub fn with_le(&self, a: Vec<Rational>, b: Rational) -> Self {
        let mut h = self.clone();
        h.add_le(a, b);
        h
    }

    pub fn with_ge(&self, a: Vec<Rational>, b: Rational) -> Self {
        let mut h = self.clone();
        h.add_ge(a, b);
        h
    }

    /// Rows of both polyhedra (same space).
    pub fn intersect(&self, other: &HPolyhedron) -> Result<Self> {
        if self.dim() != other.dim() {
            return dimension("intersecting polyhedra of different dimension");
        }
        let mut h = self.clone();
        h.extend_rows(other.rows().map(|r| (r.a.to_vec(), r.b.clone(), r.is_eq)));
        Ok(h)
    }

    /// Embeds into a larger space: column `j` of `self` becomes column `map[j]`.
    pub fn lift(&self, names: Vec<String>, map: &[usize]) -> Self {
        let n = names.len();
        let mut h = HPolyhedron::universe_named(names);
        h.extend_rows(self.rows().map(|r| {
            let mut a = vec![Rational::zero(); n];
            for (j, v) in r.a.iter().enumerate() {
                a[map[j]] = v.clone();
            }
            (a, r.b.clone(), r.is_eq)
        }));
        h
    }

    /// Exact membership test.
    pub fn contains(&self, p: &[Rational]) -> bool {
        assert_eq!(p.len(), self.dim(), "point dimension differs from polyhedron");
        self.rows().all(|r| {
            let lhs = dot(r.a, p);
            if r.is_eq {
                &lhs == r.b
            } else {
                &lhs <= r.b
            }
        })
    }

    /// Rows rescaled to primitive integer coefficients, duplicates and trivial rows removed.
    /// A row `0 <= negative` is kept (it certifies emptiness).
    pub fn normalized(&self) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = HPolyhedron::universe_named(self.var_names.clone());
        let mut rows = Vec::new();
        for r in self.rows() {
            let mut v: Vec<Rational> = r.a.to_vec();
            v.push(r.b.clone());
            let mut p = primitive_integer(&v);
            let zero_lhs = p[..p.len() - 1].iter().all(Zero::is_zero);
            if zero_lhs {
                let ok = if r.is_eq { p[p.len() - 1].is_zero() } else { !p[p.len() - 1].is_negative() };
                if ok {
                    continue;
                }
            }
            if r.is_eq {
                // orient equations so that the first nonzero coefficient is positive
                if let Some(f) = p.iter().find(|x| !x.is_zero()) {
                    if f.is_negative() {
                        p.iter_mut().for_each(|x| *x = -x.clone());
                    }
                }
            }
            if seen.insert((r.is_eq, p.clone())) {
                let b = Rational::from_integer(p.pop().unwrap());
                rows.push((p.into_iter().map(Rational::from_integer).collect(), b, r.is_eq));
            }
        }
        out.extend_rows(rows);
        out
    }
}

impl fmt::Debug for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HPolyhedron over ({})", self.var_names.join(", "))?;
        for r in self.rows() {
            writeln!(f, "  {}", format_row(r.a, if r.is_eq { "=" } else { "<=" }, r.b, &self.var_names))?;
        }
        Ok(())
    }
}

/// Human-readable `2 x1 - x2 <= 3`.
pub fn format_row(a: &[Rational], sense: &str, b: &Rational, names: &[String]) -> String {
    let mut s = String::new();
    for (j, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&format!("{mag} "));
        }
        s.push_str(&names[j]);
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} {sense} {b}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
}

/// `a.x <= rhs` or `a.x >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub a: RatVector,
    pub rhs: Rational,
    pub sense: Relation,
}

impl Inequality {
    pub fn le(a: RatVector, rhs: Rational) -> Self {
        Inequality { a, rhs, sense: Relation::Le }
    }

    pub fn ge(a: RatVector, rhs: Rational) -> Self {
        Inequality { a, rhs, sense: Relation::Ge }
    }

    /// Same inequality written as `a.x <= b`.
    pub fn as_le(&self) -> (RatVector, Rational) {
        match self.sense {
            Relation::Le => (self.a.clone(), self.rhs.clone()),
            Relation::Ge => (self.a.iter().map(|v| -v).collect(), -self.rhs.clone()),
        }
    }

    pub fn holds_at(&self, p: &[Rational]) -> bool {
        let lhs = dot(&self.a, p);
        match self.sense {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        let s = match self.sense {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        format_row(&self.a, s, &self.rhs, names)
    }
}

/// Finite point set, minimal after construction via [`minimal_vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    pub vertices: Vec<RatVector>,
}

impl VPolytope {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices sorted lexicographically, for order-independent comparison.
    pub fn sorted(&self) -> Vec<RatVector> {
        let mut v = self.vertices.clone();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// Vertex set of a bounded polyhedron via double description.
pub fn vertices(h: &HPolyhedron) -> Result<VPolytope> {
    Ok(VPolytope {
        vertices: dd::polytope_vertices(h)?,
    })
}

/// `P^I`: a polyhedron with bounded integer variables `0 <= x_i <= u_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedIntegerSet {
    pub relax: HPolyhedron,
    pub int_vars: Vec<usize>,
    pub upper_bounds: Vec<u64>,
}

impl MixedIntegerSet {
    /// Adds the rows `0 <= x_i <= u_i` for every integer variable.
    pub fn new(relax: HPolyhedron, int_vars: Vec<usize>, upper_bounds: Vec<u64>) -> Result<Self> {
        if int_vars.len() != upper_bounds.len() {
            return dimension("one upper bound per integer variable required");
        }
        let n = relax.dim();
        let mut seen = BTreeSet::new();
        if int_vars.iter().any(|&i| i >= n || !seen.insert(i)) {
            return domain("integer variable index out of range or repeated");
        }
        let mut relax = relax;
        let mut rows = Vec::new();
        for (&i, &u) in int_vars.iter().zip(&upper_bounds) {
            let e = RatVector::unit(n, i).0;
            let neg: Vec<Rational> = e.iter().map(|x| -x).collect();
            let has = |a: &[Rational], b: &Rational| {
                relax.rows().any(|r| !r.is_eq && r.a == a && r.b == b)
            };
            if !has(&neg, &Rational::zero()) {
                rows.push((neg.clone(), Rational::zero(), false));
            }
            let ub = Rational::from_integer(u.into());
            if !has(&e, &ub) {
                rows.push((e, ub, false));
            }
        }
        relax.extend_rows(rows);
        Ok(MixedIntegerSet {
            relax,
            int_vars,
            upper_bounds,
        })
    }

    pub fn dim(&self) -> usize {
        self.relax.dim()
    }

    pub fn is_int(&self, j: usize) -> bool {
        self.int_vars.contains(&j)
    }

    pub fn upper_bound(&self, j: usize) -> Option<u64> {
        self.int_vars
            .iter()
            .position(|&i| i == j)
            .map(|k| self.upper_bounds[k])
    }

    /// Same integer structure over a different relaxation (used for closure iteration).
    pub fn with_relax(&self, relax: HPolyhedron) -> Self {
        assert_eq!(relax.dim(), self.dim());
        MixedIntegerSet {
            relax,
            int_vars: self.int_vars.clone(),
            upper_bounds: self.upper_bounds.clone(),
        }
    }

    /// Same relaxation with another integer-variable set. Bounds are read off the relaxation.
    pub fn with_int_vars(&self, int_vars: Vec<usize>) -> Result<Self> {
        let mut ub = Vec::new();
        for &j in &int_vars {
            let hi = match lp_optimize(&self.relax, &RatVector::unit(self.dim(), j), Sense::Max) {
                LpOutcome::Optimal { value, .. } => value,
                _ => return domain("integer variable without a finite upper bound"),
            };
            let u = crate::kernel::floor(&hi);
            ub.push(u64::try_from(u).map_err(|_| crate::error::Error::Domain("negative bound".into()))?);
        }
        MixedIntegerSet::new(self.relax.clone(), int_vars, ub)
    }

    /// True iff every integer variable of `p` is integral and `p` lies in the relaxation.
    pub fn contains(&self, p: &[Rational]) -> bool {
        self.int_vars.iter().all(|&i| crate::kernel::is_integral(&p[i])) && self.relax.contains(p)
    }
}

impl fmt::Debug for MixedIntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.relax)?;
        writeln!(f, "  int {:?} ub {:?}", self.int_vars, self.upper_bounds)
    }
}

/// Mutual containment of two polyhedra, decided by LP over every row.
pub fn same_set(a: &HPolyhedron, b: &HPolyhedron) -> Result<bool> {
    Ok(subset_of(a, b)? && subset_of(b, a)?)
}

/// `a ⊆ b`, decided by maximizing each row of `b` over `a`.
pub fn subset_of(a: &HPolyhedron, b: &HPolyhedron) -> Result<bool> {
    if a.dim() != b.dim() {
        return dimension("containment between different dimensions");
    }
    if is_empty(a) {
        return Ok(true);
    }
    for r in b.rows() {
        let c: RatVector = r.a.iter().cloned().collect();
        match lp_optimize(a, &c, Sense::Max) {
            LpOutcome::Optimal { value, .. } if &value <= r.b => {}
            _ => return Ok(false),
        }
        if r.is_eq {
            match lp_optimize(a, &c, Sense::Min) {
                LpOutcome::Optimal { value, .. } if &value >= r.b => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// `max c.x` over `h`, expecting a finite optimum.
pub fn lp_max(h: &HPolyhedron, c: &[Rational]) -> Result<Option<Rational>> {
    let c: RatVector = c.iter().cloned().collect();
    match lp_optimize(h, &c, Sense::Max) {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => Err(crate::error::Error::Unbounded("objective unbounded".into())),
    }
}
