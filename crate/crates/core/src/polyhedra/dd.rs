//! Double description over integer data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_empty, HPolyhedron};
use crate::error::{Error, Result};
use crate::kernel::{invert, RatMatrix, RatVector, Rational};

type Bits = Vec<u64>;

fn bits_new(m: usize) -> Bits {
    vec![0; m.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_count(a: &Bits) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x /= &g);
    }
}

/// Indices of a maximal linearly independent subset of `rows`, in order.
fn independent_rows(rows: &[Vec<BigInt>], dim: usize) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        let mut v: Vec<Rational> = row.iter().map(|x| Rational::from_integer(x.clone())).collect();
        for (p, e) in &echelon {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / &e[*p];
                for j in 0..dim {
                    if !e[j].is_zero() {
                        v[j] -= &f * &e[j];
                    }
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((p, v));
            chosen.push(i);
        }
    }
    chosen
}

/// Extreme rays of the pointed cone `{y : g_i . y >= 0}`. `None` if the cone has a
/// nontrivial lineality space (the rows do not span `dim` dimensions).
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<Vec<BigInt>>> {
    let m = rows.len();
    let init = independent_rows(rows, dim);
    if init.len() < dim {
        return None;
    }
    let basis = RatMatrix::from_rows(
        init.iter()
            .map(|&i| rows[i].iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect(),
    )
    .expect("rectangular");
    let inv = invert(&basis).expect("independent rows");
    let mut rays: Vec<(Vec<BigInt>, Bits)> = Vec::with_capacity(dim);
    for j in 0..dim {
        let col = inv.column(j);
        let mut ray = crate::kernel::primitive_integer(&col);
        make_primitive(&mut ray);
        let mut z = bits_new(m);
        for (k, &i) in init.iter().enumerate() {
            if k != j {
                bit_set(&mut z, i);
            }
        }
        rays.push((ray, z));
    }
    let mut done = vec![false; m];
    for &i in &init {
        done[i] = true;
    }
    for i in 0..m {
        if done[i] {
            continue;
        }
        done[i] = true;
        let g = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| int_dot(g, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, (_, z)) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    bit_set(z, i);
                }
            }
            continue;
        }
        let mut fresh: Vec<(Vec<BigInt>, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].1, &rays[q].1);
                if bits_count(&common) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|t| t == p || t == q || !bits_subset(&common, &rays[t].1));
                if !adjacent {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let mut v: Vec<BigInt> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(x, y)| a * x + &b * y)
                    .collect();
                make_primitive(&mut v);
                let mut z = common;
                bit_set(&mut z, i);
                fresh.push((v, z));
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (k, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                bit_set(&mut z, i);
            }
            next.push((r, z));
        }
        next.extend(fresh);
        rays = next;
    }
    Some(rays.into_iter().map(|(r, _)| r).collect())
}

/// Integer rows `(a, b)` of `h` as homogeneous constraints `b t - a x >= 0` plus `t >= 0`.
fn homogenized(h: &HPolyhedron) -> Vec<Vec<BigInt>> {
    let norm = h.normalized();
    let n = h.dim();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for r in norm.rows() {
        let mut g: Vec<BigInt> = r.a.iter().map(|v| -v.to_integer()).collect();
        g.push(r.b.to_integer());
        if r.is_eq {
            out.push(g.iter().map(|x| -x).collect());
        }
        out.push(g);
    }
    let mut t = vec![BigInt::zero(); n + 1];
    t[n] = BigInt::one();
    out.push(t);
    out
}

/// Vertices of a bounded polyhedron, sorted lexicographically.
pub(crate) fn polytope_vertices(h: &HPolyhedron) -> Result<Vec<RatVector>> {
    let n = h.dim();
    let rows = homogenized(h);
    let Some(rays) = extreme_rays(&rows, n + 1) else {
        if is_empty(h) {
            return Ok(Vec::new());
        }
        return Err(Error::Unbounded("polyhedron contains a line".into()));
    };
    let mut verts = Vec::new();
    let mut recession = false;
    for r in rays {
        let t = &r[n];
        if t.is_zero() {
            recession = true;
            continue;
        }
        let t = Rational::from_integer(t.clone());
        verts.push(r[..n].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect::<RatVector>());
    }
    if recession && !verts.is_empty() {
        return Err(Error::Unbounded("polyhedron has a recession direction".into()));
    }
    verts.sort_by(|a, b| a.0.cmp(&b.0));
    verts.dedup();
    Ok(verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    #[test]
    fn pentagon_vertices() {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(-2), int(3)], int(3));
        let v = polytope_vertices(&h).unwrap();
        let mut want = vec![
            RatVector::from_ints(&[0, 0]),
            RatVector::from_ints(&[2, 0]),
            RatVector::from_ints(&[2, 1]),
            RatVector(vec![rat(3, 2), int(2)]),
            RatVector::from_ints(&[0, 1]),
        ];
        want.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(v, want);
    }

    #[test]
    fn empty_and_unbounded() {
        let mut h = HPolyhedron::universe(2);
        h.add_le(vec![int(1), int(0)], int(0));
        h.add_ge(vec![int(1), int(0)], int(1));
        h.add_le(vec![int(0), int(1)], int(1));
        h.add_ge(vec![int(0), int(1)], int(0));
        assert!(polytope_vertices(&h).unwrap().is_empty());
        let mut u = HPolyhedron::universe(1);
        u.add_ge(vec![int(1)], int(0));
        assert!(matches!(polytope_vertices(&u), Err(Error::Unbounded(_))));
        assert!(matches!(polytope_vertices(&HPolyhedron::universe(2)), Err(Error::Unbounded(_))));
    }

    #[test]
    fn segment_in_plane() {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_eq(vec![int(-1), int(2)], int(1));
        let v = polytope_vertices(&h).unwrap();
        assert_eq!(
            v,
            vec![RatVector(vec![int(0), rat(1, 2)]), RatVector(vec![int(2), rat(3, 2)])]
        );
    }
}
