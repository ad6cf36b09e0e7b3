//! Cover inequalities for binary knapsacks with coefficients `1, 2, 4, ...`.

use crate::kernel::{int, RatVector};
use crate::polyhedra::Inequality;

/// Rows `a_j.x <= b_j`, `j in J`, that together with `0 <= x <= 1` describe
/// `conv{x in {0,1}^n : sum 2^(i-1) x_i <= bbar}`.
///
/// `J` holds the zero bits of `bbar`; `a_j` is 1 at `j`, copies the bits of
/// `bbar` above `j`, and is 0 below; `b_j = |a_j| - 1`.
pub fn superincreasing_knapsack_facets(bbar: u64, n: usize) -> Vec<Inequality> {
    assert!(bbar > 0 && n > 0);
    if n < 64 && bbar > (1u64 << n) - 1 {
        return Vec::new();
    }
    let bits: Vec<i64> = (0..n).map(|k| ((bbar >> k) & 1) as i64).collect();
    let mut out = Vec::new();
    for j in 0..n {
        if bits[j] == 1 {
            continue;
        }
        let a: Vec<i64> = (0..n)
            .map(|k| match k.cmp(&j) {
                std::cmp::Ordering::Greater => bits[k],
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            })
            .collect();
        let b = a.iter().sum::<i64>() - 1;
        out.push(Inequality::le(RatVector::from_ints(&a), int(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_in_three_bits() {
        let f = superincreasing_knapsack_facets(5, 3);
        assert_eq!(f, vec![Inequality::le(RatVector::from_ints(&[0, 1, 1]), int(1))]);
    }

    #[test]
    fn all_bits_set_or_too_large() {
        assert!(superincreasing_knapsack_facets(7, 3).is_empty());
        assert!(superincreasing_knapsack_facets(8, 3).is_empty());
    }

    #[test]
    fn two_in_two_bits() {
        let f = superincreasing_knapsack_facets(2, 2);
        assert_eq!(f, vec![Inequality::le(RatVector::from_ints(&[1, 1]), int(1))]);
    }
}
