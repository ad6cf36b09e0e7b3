//! Exact rational scalars, vectors and dense matrices.

use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{dimension, Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q`. The denominator must be positive.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p).map_err(|_| bad())?;
            let q = BigInt::from_str(q).map_err(|_| bad())?;
            if !q.is_positive() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales `xs` by a positive factor so that all entries become coprime integers.
/// The zero vector maps to zeros.
pub fn primitive_integer(xs: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(xs);
    let ints: Vec<BigInt> = xs
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatVector(pub Vec<Rational>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        xs.iter().map(|&x| int(x)).collect()
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        dot(&self.0, other)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integral)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.0.iter().map(|x| x * s).collect()
    }

    pub fn add(&self, other: &RatVector) -> Self {
        self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, other: &RatVector) -> Self {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

impl Deref for RatVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for RatVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return dimension("ragged rows");
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVector]) -> Result<Self> {
        let n = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != n) {
            return dimension("columns of unequal length");
        }
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols, "row length differs from column count");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        p[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if self.cols != v.len() {
            return dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            ));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(is_integral)
    }

    fn require_square(&self, op: &str) -> Result<()> {
        if self.rows != self.cols {
            return dimension(format!(
                "{op} needs a square matrix, got {}x{}",
                self.rows, self.cols
            ));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Exact determinant via Bareiss fraction-free elimination.
pub fn determinant(m: &RatMatrix) -> Result<Rational> {
    m.require_square("determinant")?;
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    // Clear denominators row by row; remember the scaling.
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let d = common_denominator(m.row(i));
        a.push(
            m.row(i)
                .iter()
                .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
                .collect(),
        );
        scale *= d;
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = if sign < 0 { -prev } else { prev };
    Ok(Rational::new(det, scale))
}

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                if !a[(r, j)].is_zero() {
                    let v = &a[(i, j)] - &f * &a[(r, j)];
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

/// A basis of `{v : M v = 0}`.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVector> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = RatVector::zeros(m.cols);
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `M x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Option<RatVector>> {
    if b.len() != m.rows {
        return dimension("right-hand side length differs from row count");
    }
    let mut aug = RatMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = RatVector::zeros(m.cols);
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, m.cols)].clone();
    }
    Ok(Some(x))
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert(m: &RatMatrix) -> Result<RatMatrix> {
    m.require_square("invert")?;
    let n = m.rows;
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        let kernel = nullspace(m)
            .into_iter()
            .next()
            .expect("singular matrix has a kernel vector");
        return Err(Error::Singular { kernel });
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)].clone();
        }
    }
    Ok(inv)
}

pub fn is_unimodular(m: &RatMatrix) -> Result<bool> {
    m.require_square("is_unimodular")?;
    if !m.is_integral() {
        return Ok(false);
    }
    Ok(determinant(m)?.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&RatMatrix::identity(2)).unwrap(), int(1));
        let m = RatMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), int(1));
        let m = RatMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), int(-1));
        let m = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ])
        .unwrap();
        assert_eq!(determinant(&m).unwrap(), rat(1, 10) - rat(1, 12));
        let m = RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), int(0));
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = RatMatrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn invert_closed_form_and_singular() {
        let m = RatMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let inv = invert(&m).unwrap();
        assert_eq!(inv, RatMatrix::from_int_rows(&[vec![1, -1], vec![0, 1]]).unwrap());
        let s = RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        match invert(&s) {
            Err(Error::Singular { kernel }) => {
                assert!(!kernel.is_zero());
                assert!(s.mul_vec(&kernel).unwrap().is_zero());
            }
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&RatMatrix::identity(3)).unwrap());
        let m = RatMatrix::from_int_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!is_unimodular(&m).unwrap());
        let half = RatMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert!(!is_unimodular(&half).unwrap());
    }

    #[test]
    fn rational_parsing_and_display() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rat(6, -4).to_string(), "-3/2");
        assert_eq!(int(5).to_string(), "5");
    }

    #[test]
    fn primitive_scaling() {
        let v = primitive_integer(&[rat(1, 2), rat(-3, 4), int(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn solve_and_nullspace() {
        let m = RatMatrix::from_int_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let x = solve(&m, &[int(2), int(3)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), RatVector::from_ints(&[2, 3]));
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().is_zero());
        let m = RatMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(solve(&m, &[int(1), int(2)]).unwrap(), None);
    }
}
