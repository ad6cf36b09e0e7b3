//! The corner-cut polytope `P^n` and the small tree on its `B^o(4)` extension.

use super::BBTree;
use crate::binarization::{BinarizationScheme, PolytopeKind};
use crate::error::{Error, Result};
use crate::extension::{extend, ExtendedSet};
use crate::kernel::{int, rat};
use crate::polyhedra::{HPolyhedron, MixedIntegerSet};

/// Largest `n` for which the `2^n` corner rows are written out.
pub const MAX_CORNER_N: usize = 16;

/// `{x in [0,4]^n : sum_{i in S} x_i + sum_{i not in S} (4 - x_i) >= 1/2 for all S}`, all integer.
pub fn build_corner_cut(n: usize) -> Result<MixedIntegerSet> {
    if n == 0 {
        return Err(Error::Domain("corner cut needs n >= 1".into()));
    }
    if n > MAX_CORNER_N {
        return Err(Error::Capacity {
            what: "corner rows",
            needed: 1u128 << n.min(127),
            limit: 1u128 << MAX_CORNER_N,
        });
    }
    let mut h = HPolyhedron::cube(&vec![int(0); n], &vec![int(4); n]);
    for s in 0u64..(1 << n) {
        let inside = |i: usize| s >> i & 1 == 1;
        let a = (0..n).map(|i| if inside(i) { int(1) } else { int(-1) }).collect();
        let outside = (0..n).filter(|&i| !inside(i)).count() as i64;
        h.add_ge(a, rat(1, 2) - int(4 * outside));
    }
    MixedIntegerSet::new(h, (0..n).collect(), vec![4; n])
}

/// The `2^n + n` leaf tree: branch `z_{i1}` for `i = 1..n` along the left spine
/// (leaves `R_i`), then a complete depth-`n` subtree on `z_{i4}` below `L_n`.
pub fn build_bbt1_tree(n: usize) -> Result<(ExtendedSet, BBTree)> {
    let m = build_corner_cut(n)?;
    let scheme = BinarizationScheme::uniform(PolytopeKind::Alt, &vec![4; n])?;
    let ext = extend(&m, &scheme, false)?;
    let mut tree = BBTree::new(ext.ext.clone());
    let mut spine = 0;
    for b in &ext.blocks {
        spine = tree.branch(spine, b.start, 0)?.0;
    }
    let mut level = vec![spine];
    for b in &ext.blocks {
        let mut next = Vec::with_capacity(2 * level.len());
        for node in level {
            let (l, r) = tree.branch(node, b.start + 3, 0)?;
            next.extend([l, r]);
        }
        level = next;
    }
    Ok((ext, tree))
}
