//! Trees that branch on unary auxiliary variables, rewritten over the original set:
//! `z_{it} = 0 | z_{it} = 1` becomes `x_i <= t-1 | x_i >= t`.

use super::{BBTree, Restriction};
use crate::binarization::PolytopeKind;
use crate::error::{domain, Result};
use crate::extension::ExtendedSet;
use crate::polyhedra::{project, subset_of, MixedIntegerSet};

/// Same shape and leaf order as `tree`, with the rewritten branches.
pub fn translate_unary_tree(tree: &BBTree, ext: &ExtendedSet, origin: &MixedIntegerSet) -> Result<BBTree> {
    let mut out = BBTree::new(origin.clone());
    let mut stack = vec![(0usize, 0usize)];
    while let Some((src, dst)) = stack.pop() {
        let Some((l, r)) = tree.nodes[src].children else { continue };
        let (col, t) = match tree.nodes[l].restrictions.last() {
            Some(&Restriction::Le { var, t }) => (var, t),
            _ => unreachable!("left child carries the <= restriction"),
        };
        let k = match ext.blocks.iter().position(|b| b.contains(&col)) {
            Some(k) => k,
            None => return domain(format!("branch on {} is not on an auxiliary variable", tree.var_name(col))),
        };
        if ext.scheme.polytopes[k].kind != Some(PolytopeKind::Unary) {
            return domain(format!("block {} is not a unary binarization", k + 1));
        }
        if t != 0 {
            return domain(format!("branch on {} must be at 0", tree.var_name(col)));
        }
        let pos = (col - ext.blocks[k].start + 1) as i64;
        let (nl, nr) = out.branch(dst, ext.origin_int_vars[k], pos - 1)?;
        stack.push((r, nr));
        stack.push((l, nl));
    }
    Ok(out)
}

/// Per leaf pair `(N, N')`: `N' ∩ P ⊆ proj_x(N ∩ P_B)`.
pub fn verify_translation(tree: &BBTree, translated: &BBTree, ext: &ExtendedSet) -> Result<Vec<bool>> {
    if tree.leaf_count() != translated.leaf_count() {
        return domain("trees have different leaf counts");
    }
    let keep: Vec<usize> = (0..ext.origin_dim).collect();
    let order = |t: &BBTree| {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            match t.nodes[i].children {
                Some((l, r)) => stack.extend([r, l]),
                None => out.push(i),
            }
        }
        out
    };
    order(tree)
        .into_iter()
        .zip(order(translated))
        .map(|(n, n2)| {
            let proj = project(&tree.node_polytope(n), &keep)?;
            subset_of(&translated.node_polytope(n2), &proj)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarization::BinarizationScheme;
    use crate::extension::extend;
    use crate::kernel::int;
    use crate::polyhedra::HPolyhedron;

    fn setup() -> (MixedIntegerSet, ExtendedSet) {
        let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(3), int(3)]);
        h.add_le(vec![int(1), int(1)], int(5));
        let m = MixedIntegerSet::new(h, vec![0, 1], vec![3, 3]).unwrap();
        let s = BinarizationScheme::uniform(PolytopeKind::Unary, &[3, 3]).unwrap();
        let e = extend(&m, &s, false).unwrap();
        (m, e)
    }

    #[test]
    fn single_branch_translates() {
        let (m, e) = setup();
        let mut t = BBTree::new(e.ext.clone());
        t.branch(0, e.blocks[0].start + 2, 0).unwrap();
        let tr = translate_unary_tree(&t, &e, &m).unwrap();
        assert_eq!(tr.to_string(), "branch x1 <=2 | >=3\n  LEAF\n  LEAF\n");
        assert!(verify_translation(&t, &tr, &e).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn root_only_stays_root_only() {
        let (m, e) = setup();
        let tr = translate_unary_tree(&BBTree::new(e.ext.clone()), &e, &m).unwrap();
        assert_eq!(tr.leaf_count(), 1);
    }

    #[test]
    fn depth_two_tree_keeps_shape_and_containment() {
        let (m, e) = setup();
        let mut t = BBTree::new(e.ext.clone());
        let (l, r) = t.branch(0, e.blocks[0].start, 0).unwrap();
        t.branch(l, e.blocks[1].start + 1, 0).unwrap();
        t.branch(r, e.blocks[0].start + 2, 0).unwrap();
        let tr = translate_unary_tree(&t, &e, &m).unwrap();
        assert_eq!(tr.leaf_count(), 4);
        assert_eq!(
            tr.to_string(),
            "branch x1 <=0 | >=1\n  branch x2 <=1 | >=2\n    LEAF\n    LEAF\n  branch x1 <=2 | >=3\n    LEAF\n    LEAF\n"
        );
        assert!(verify_translation(&t, &tr, &e).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn branch_on_x_is_rejected() {
        let (m, e) = setup();
        let mut t = BBTree::new(e.ext.clone());
        t.branch(0, 0, 1).unwrap();
        assert!(translate_unary_tree(&t, &e, &m).is_err());
    }
}
