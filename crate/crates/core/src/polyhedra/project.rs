//! Fourier-Motzkin projection with LP redundancy removal after every step.

use num_traits::{Signed, Zero};

use super::{is_empty, lp_optimize, HPolyhedron, LpOutcome, Sense};
use crate::error::{domain, Result};
use crate::kernel::{RatVector, Rational};

type Row = (Vec<Rational>, Rational, bool);

fn rows_of(h: &HPolyhedron) -> Vec<Row> {
    h.rows().map(|r| (r.a.to_vec(), r.b.clone(), r.is_eq)).collect()
}

fn build(names: &[String], rows: Vec<Row>) -> HPolyhedron {
    let mut h = HPolyhedron::universe_named(names.to_vec());
    h.extend_rows(rows);
    h.normalized()
}

/// Drops inequality rows implied by the remaining ones.
pub(crate) fn remove_redundant(h: &HPolyhedron) -> HPolyhedron {
    let mut rows = rows_of(&h.normalized());
    let names = h.var_names().to_vec();
    let mut i = 0;
    while i < rows.len() {
        if rows[i].2 {
            i += 1;
            continue;
        }
        let row = rows.remove(i);
        let others = {
            let mut o = HPolyhedron::universe_named(names.clone());
            o.extend_rows(rows.iter().cloned());
            o
        };
        let c: RatVector = row.0.iter().cloned().collect();
        let implied = matches!(lp_optimize(&others, &c, Sense::Max), LpOutcome::Optimal { value, .. } if value <= row.1);
        if !implied {
            rows.insert(i, row);
            i += 1;
        }
    }
    build(&names, rows)
}

fn eliminate(rows: Vec<Row>, j: usize) -> Vec<Row> {
    if let Some(e) = rows.iter().position(|r| r.2 && !r.0[j].is_zero()) {
        let (ea, eb, _) = rows[e].clone();
        return rows
            .into_iter()
            .enumerate()
            .filter(|&(k, _)| k != e)
            .map(|(_, (mut a, mut b, is_eq))| {
                if !a[j].is_zero() {
                    let f = &a[j] / &ea[j];
                    for (x, y) in a.iter_mut().zip(&ea) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                    b -= &f * &eb;
                }
                (a, b, is_eq)
            })
            .collect();
    }
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.0[j].is_positive() {
            pos.push(r);
        } else if r.0[j].is_negative() {
            neg.push(r);
        } else {
            out.push(r);
        }
    }
    for p in &pos {
        for q in &neg {
            let (s, t) = (-&q.0[j], p.0[j].clone());
            let a = p.0.iter().zip(&q.0).map(|(x, y)| &s * x + &t * y).collect();
            let b = &s * &p.1 + &t * &q.1;
            out.push((a, b, false));
        }
    }
    out
}

/// `{x_keep : exists rest, (x_keep, rest) in h}`, columns in the order of `keep`.
pub fn project(h: &HPolyhedron, keep: &[usize]) -> Result<HPolyhedron> {
    let n = h.dim();
    if keep.is_empty() || keep.iter().any(|&k| k >= n) {
        return domain("projection needs a nonempty set of valid coordinates");
    }
    let names: Vec<String> = keep.iter().map(|&k| h.var_names()[k].clone()).collect();
    if is_empty(h) {
        let mut e = HPolyhedron::universe_named(names);
        e.add_le(vec![Rational::zero(); keep.len()], Rational::from_integer((-1).into()));
        return Ok(e);
    }
    let mut cur = remove_redundant(h);
    let mut drop: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
    while !drop.is_empty() {
        // Prefer variables that sit in an equation, then the smallest product of signs.
        let score = |j: usize| -> (u8, usize) {
            let mut p = 0usize;
            let mut q = 0usize;
            for r in cur.rows() {
                if r.is_eq && !r.a[j].is_zero() {
                    return (0, 0);
                }
                if r.a[j].is_positive() {
                    p += 1;
                } else if r.a[j].is_negative() {
                    q += 1;
                }
            }
            (1, p * q)
        };
        let (pos, &j) = drop
            .iter()
            .enumerate()
            .min_by_key(|&(_, &j)| score(j))
            .expect("nonempty");
        drop.remove(pos);
        let rows = eliminate(rows_of(&cur), j);
        cur = remove_redundant(&build(h.var_names(), rows));
    }
    let mut out = HPolyhedron::universe_named(names);
    out.extend_rows(cur.rows().map(|r| {
        (keep.iter().map(|&k| r.a[k].clone()).collect(), r.b.clone(), r.is_eq)
    }));
    Ok(out.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};
    use crate::polyhedra::same_set;

    #[test]
    fn box_to_interval() {
        let h = HPolyhedron::cube(&[int(0), int(-1)], &[int(2), int(3)]);
        let p = project(&h, &[1]).unwrap();
        let want = HPolyhedron::cube(&[int(-1)], &[int(3)]);
        assert!(same_set(&p, &want).unwrap());
        assert_eq!(p.n_rows(), 2);
    }

    #[test]
    fn identity_projection() {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(2), int(2)]);
        h.add_le(vec![int(2), int(1)], int(5));
        h.add_le(vec![int(1), int(1)], int(10));
        let p = project(&h, &[0, 1]).unwrap();
        assert!(same_set(&p, &h).unwrap());
        assert_eq!(p.n_rows(), 5);
    }

    #[test]
    fn triangle_shadow_and_equation() {
        // x + y <= 1, x,y >= 0, z = x + 2y
        let mut h = HPolyhedron::universe(3);
        h.add_ge(vec![int(1), int(0), int(0)], int(0));
        h.add_ge(vec![int(0), int(1), int(0)], int(0));
        h.add_le(vec![int(1), int(1), int(0)], int(1));
        h.add_eq(vec![int(1), int(2), int(-1)], int(0));
        let p = project(&h, &[2]).unwrap();
        assert!(same_set(&p, &HPolyhedron::cube(&[int(0)], &[int(2)])).unwrap());
        let q = project(&h, &[0, 2]).unwrap();
        assert!(q.contains(&[rat(1, 2), int(1)]));
        assert!(!q.contains(&[int(1), int(2)]));
    }

    #[test]
    fn empty_projects_to_empty() {
        let mut h = HPolyhedron::universe(2);
        h.add_le(vec![int(1), int(1)], int(0));
        h.add_ge(vec![int(1), int(1)], int(1));
        let p = project(&h, &[0]).unwrap();
        assert!(is_empty(&p));
    }
}
