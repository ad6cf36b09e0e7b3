//! Branch-and-bound trees used as completeness certificates rather than solvers.

mod complete;
mod corner;
mod dp;
mod unary;

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::kernel::{int, Rational};
use crate::polyhedra::{HPolyhedron, MixedIntegerSet};

pub use complete::{check_complete, check_complete_projected, leaf_statuses, leaf_statuses_projected, LeafStatus};
pub use corner::{build_bbt1_tree, build_corner_cut, MAX_CORNER_N};
pub use dp::{min_complete_tree_size, DEFAULT_BOX_CAP};
pub use unary::{translate_unary_tree, verify_translation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Restriction {
    /// `x_var <= t`
    Le { var: usize, t: i64 },
    /// `x_var >= t`
    Ge { var: usize, t: i64 },
}

impl Restriction {
    pub fn var(&self) -> usize {
        match *self {
            Restriction::Le { var, .. } | Restriction::Ge { var, .. } => var,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub restrictions: Vec<Restriction>,
    pub children: Option<(usize, usize)>,
}

impl BBNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// The branching variable and threshold `t` of `x <= t | x >= t+1`.
    fn split_of(&self, tree: &BBTree) -> Option<(usize, i64)> {
        let (l, _) = self.children?;
        match tree.nodes[l].restrictions.last() {
            Some(&Restriction::Le { var, t }) => Some((var, t)),
            _ => None,
        }
    }
}

/// A rooted binary tree over the integer variables of `target`; node 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct BBTree {
    pub target: MixedIntegerSet,
    pub nodes: Vec<BBNode>,
}

impl BBTree {
    pub fn new(target: MixedIntegerSet) -> Self {
        BBTree {
            target,
            nodes: vec![BBNode {
                id: 0,
                parent: None,
                restrictions: Vec::new(),
                children: None,
            }],
        }
    }

    pub fn root(&self) -> &BBNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &BBNode {
        &self.nodes[id]
    }

    /// Splits leaf `node` into `x_var <= t` and `x_var >= t+1`, returning the child ids.
    pub fn branch(&mut self, node: usize, var: usize, t: i64) -> Result<(usize, usize)> {
        if node >= self.nodes.len() {
            return domain(format!("no node {node}"));
        }
        if !self.nodes[node].is_leaf() {
            return domain(format!("node {node} already has children"));
        }
        if var >= self.target.dim() {
            return domain(format!("no variable {}", var + 1));
        }
        let u = match self.target.upper_bound(var) {
            Some(u) => u,
            None => return domain(format!("{} is not an integer variable", self.var_name(var))),
        };
        if t < 0 || t as u64 > u {
            return domain(format!("threshold {t} outside 0..={u} for {}", self.var_name(var)));
        }
        let base = self.nodes[node].restrictions.clone();
        let mut ids = [0; 2];
        for (k, r) in [Restriction::Le { var, t }, Restriction::Ge { var, t: t + 1 }].into_iter().enumerate() {
            let mut restrictions = base.clone();
            restrictions.push(r);
            ids[k] = self.nodes.len();
            self.nodes.push(BBNode {
                id: ids[k],
                parent: Some(node),
                restrictions,
                children: None,
            });
        }
        self.nodes[node].children = Some((ids[0], ids[1]));
        Ok((ids[0], ids[1]))
    }

    /// Removes everything below `node`, which becomes a leaf. Ids are compacted.
    pub fn prune(&mut self, node: usize) {
        self.nodes[node].children = None;
        let mut keep = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            keep[i] = true;
            if let Some((l, r)) = self.nodes[i].children {
                stack.extend([l, r]);
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = next;
                next += 1;
            }
        }
        let old = std::mem::take(&mut self.nodes);
        for (i, mut n) in old.into_iter().enumerate() {
            if keep[i] {
                n.id = remap[i];
                n.parent = n.parent.map(|p| remap[p]);
                n.children = n.children.map(|(l, r)| (remap[l], remap[r]));
                self.nodes.push(n);
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| n.is_leaf()).map(|n| n.id).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.restrictions.len()).max().unwrap_or(0)
    }

    /// Integer bounds `[lo, hi]` of every integer variable at `node` (`lo > hi` when empty).
    pub fn node_box(&self, node: usize) -> Vec<(usize, i64, i64)> {
        let mut b: Vec<(usize, i64, i64)> = self
            .target
            .int_vars
            .iter()
            .zip(&self.target.upper_bounds)
            .map(|(&i, &u)| (i, 0, u as i64))
            .collect();
        for r in &self.nodes[node].restrictions {
            let e = b.iter_mut().find(|e| e.0 == r.var()).expect("restriction on an integer variable");
            match *r {
                Restriction::Le { t, .. } => e.2 = e.2.min(t),
                Restriction::Ge { t, .. } => e.1 = e.1.max(t),
            }
        }
        b
    }

    /// `N ∩ relax` for the label `N` of `node`.
    pub fn node_polytope(&self, node: usize) -> HPolyhedron {
        let n = self.target.dim();
        let mut h = self.target.relax.clone();
        for r in &self.nodes[node].restrictions {
            let mut a = vec![Rational::from_integer(0.into()); n];
            match *r {
                Restriction::Le { var, t } => {
                    a[var] = int(1);
                    h.add_le(a, int(t));
                }
                Restriction::Ge { var, t } => {
                    a[var] = int(1);
                    h.add_ge(a, int(t));
                }
            }
        }
        h
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.target.relax.var_names()[var]
    }

    /// Indented text, one line per node in preorder; `status` annotates leaves.
    pub fn render(&self, status: Option<&dyn Fn(usize) -> Option<LeafStatus>>) -> String {
        let mut out = String::new();
        self.render_node(0, 0, status, &mut out);
        out
    }

    fn render_node(&self, id: usize, depth: usize, status: Option<&dyn Fn(usize) -> Option<LeafStatus>>, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self.nodes[id].children {
            Some((l, r)) => {
                let (var, t) = self.nodes[id].split_of(self).expect("left child carries the <= restriction");
                out.push_str(&format!("{pad}branch {} <={} | >={}\n", self.var_name(var), t, t + 1));
                self.render_node(l, depth + 1, status, out);
                self.render_node(r, depth + 1, status, out);
            }
            None => match status.and_then(|f| f(id)) {
                Some(s) => out.push_str(&format!("{pad}LEAF {}\n", s.label())),
                None => out.push_str(&format!("{pad}LEAF\n")),
            },
        }
    }

    /// Reads the format written by [`BBTree::render`]; leaf annotations are ignored.
    pub fn parse(text: &str, target: MixedIntegerSet) -> Result<Self> {
        let lines: Vec<(usize, usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(no, l)| {
                let body = l.trim_start_matches(' ');
                (no + 1, l.len() - body.len(), body.trim_end())
            })
            .collect();
        let mut tree = BBTree::new(target);
        let mut pos = 0;
        tree.parse_node(&lines, &mut pos, 0, 0)?;
        if pos != lines.len() {
            return Err(Error::Domain(format!("line {}: trailing input after the tree", lines[pos].0)));
        }
        Ok(tree)
    }

    fn parse_node(&mut self, lines: &[(usize, usize, &str)], pos: &mut usize, node: usize, depth: usize) -> Result<()> {
        let &(no, indent, body) = match lines.get(*pos) {
            Some(l) => l,
            None => return domain("tree ends before every branch has two children"),
        };
        if indent != 2 * depth {
            return Err(Error::Domain(format!("line {no}: expected indentation {}", 2 * depth)));
        }
        *pos += 1;
        let words: Vec<&str> = body.split_whitespace().collect();
        match words.as_slice() {
            ["LEAF", ..] => Ok(()),
            ["branch", name, le, "|", ge] => {
                let var = self
                    .target
                    .relax
                    .var_names()
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Domain(format!("line {no}: unknown variable {name}")))?;
                let bad = || Error::Domain(format!("line {no}: expected `<=t | >=t+1`"));
                let t: i64 = le.strip_prefix("<=").and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let t1: i64 = ge.strip_prefix(">=").and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                if t1 != t + 1 {
                    return Err(bad());
                }
                let (l, r) = self.branch(node, var, t).map_err(|e| Error::Domain(format!("line {no}: {e}")))?;
                self.parse_node(lines, pos, l, depth + 1)?;
                self.parse_node(lines, pos, r, depth + 1)
            }
            _ => Err(Error::Domain(format!("line {no}: expected `branch` or `LEAF`"))),
        }
    }
}

impl fmt::Display for BBTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn segment(lo: Rational, hi: Rational, u: u64) -> MixedIntegerSet {
        MixedIntegerSet::new(HPolyhedron::cube(&[lo], &[hi]), vec![0], vec![u]).unwrap()
    }

    #[test]
    fn branch_splits_the_root() {
        let mut t = BBTree::new(segment(int(0), int(4), 4));
        let (l, r) = t.branch(0, 0, 0).unwrap();
        assert_eq!(t.node_box(l), vec![(0, 0, 0)]);
        assert_eq!(t.node_box(r), vec![(0, 1, 4)]);
        assert_eq!(t.leaves(), vec![1, 2]);
    }

    #[test]
    fn branch_errors() {
        let mut t = BBTree::new(segment(int(0), int(4), 4));
        assert!(t.branch(0, 0, 5).is_err());
        assert!(t.branch(0, 1, 0).is_err());
        t.branch(0, 0, 1).unwrap();
        assert!(t.branch(0, 0, 2).is_err());
        // t = u leaves an empty right box
        let (_, r) = t.branch(2, 0, 4).unwrap();
        let b = t.node_box(r)[0];
        assert!(b.1 > b.2);
    }

    #[test]
    fn text_round_trip() {
        let mut t = BBTree::new(segment(rat(1, 2), rat(7, 2), 4));
        let (_, r) = t.branch(0, 0, 0).unwrap();
        t.branch(r, 0, 3).unwrap();
        let s = t.to_string();
        assert_eq!(s, "branch x1 <=0 | >=1\n  LEAF\n  branch x1 <=3 | >=4\n    LEAF\n    LEAF\n");
        let back = BBTree::parse(&s, t.target.clone()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn parse_rejects_bad_input() {
        let m = segment(int(0), int(4), 4);
        assert!(BBTree::parse("branch x1 <=0 | >=2\n  LEAF\n  LEAF\n", m.clone()).is_err());
        assert!(BBTree::parse("branch x1 <=0 | >=1\n  LEAF\n", m.clone()).is_err());
        assert!(BBTree::parse("branch y <=0 | >=1\n  LEAF\n  LEAF\n", m.clone()).is_err());
        assert!(BBTree::parse("LEAF\nLEAF\n", m).is_err());
    }

    #[test]
    fn prune_compacts_ids() {
        let mut t = BBTree::new(segment(int(0), int(4), 4));
        let (l, _) = t.branch(0, 0, 1).unwrap();
        t.branch(l, 0, 0).unwrap();
        t.prune(l);
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.leaf_count(), 2);
    }
}
