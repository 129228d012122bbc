//! The blow-up tree `T_B` of the roots and its per-vertex statistics.
//!
//! A vertex at depth `d` is a class of size at least two of the relation
//! `m[i][j] >= d`. One vertex is created per depth step, so a cluster that
//! survives several powers of the uniformizer yields a chain of vertices, one
//! per blow-up generation. The horizontal divisor at infinity never enters a
//! weight.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::valuation::{check_root_count, validate_ultrametric, ValuationMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Index of a vertex in a [`ClusterTree`]; the root is `0`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterVertex {
    pub id: VertexId,
    /// Blow-up generation; the root has depth 0.
    pub depth: u64,
    /// Sorted indices of the roots in this vertex's disk.
    pub members: Vec<usize>,
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
    pub wt: usize,
    /// Roots whose horizontal divisor meets this component.
    pub l_prime: usize,
    /// Children of odd weight.
    pub r: usize,
    /// Children of even weight.
    pub s: usize,
    /// `l_prime + r`.
    pub l: usize,
    /// Order of vanishing of `f` along the component.
    pub f_val: u64,
    pub parity: Parity,
}

impl ClusterVertex {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.parity.is_odd()
    }

    pub fn is_even(&self) -> bool {
        self.parity.is_even()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    vertices: Vec<ClusterVertex>,
    num_roots: usize,
}

impl ClusterTree {
    pub fn root(&self) -> &ClusterVertex {
        &self.vertices[0]
    }

    pub fn vertex(&self, id: VertexId) -> &ClusterVertex {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[ClusterVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn num_roots(&self) -> usize {
        self.num_roots
    }

    pub fn genus(&self) -> usize {
        (self.num_roots - 2) / 2
    }

    pub fn parent(&self, v: &ClusterVertex) -> Option<&ClusterVertex> {
        v.parent.map(|p| &self.vertices[p])
    }

    pub fn children<'a>(&'a self, v: &'a ClusterVertex) -> impl Iterator<Item = &'a ClusterVertex> + 'a {
        v.children.iter().map(move |&c| &self.vertices[c])
    }

    /// Parity of the parent, `None` at the root.
    pub fn parent_parity(&self, v: &ClusterVertex) -> Option<Parity> {
        self.parent(v).map(|p| p.parity)
    }

    /// Roots counted by `l'_v`: members of `v` outside every child.
    pub fn separating_roots(&self, v: &ClusterVertex) -> Vec<usize> {
        let mut inside = vec![false; self.num_roots];
        for c in self.children(v) {
            for &i in &c.members {
                inside[i] = true;
            }
        }
        v.members.iter().copied().filter(|&i| !inside[i]).collect()
    }

    /// Assembles a tree from `(depth, members, parent)` triples listed in id
    /// order, root first, and fills in every derived statistic.
    pub(crate) fn from_skeleton(num_roots: usize, skeleton: Vec<(u64, Vec<usize>, Option<VertexId>)>) -> Self {
        let mut vertices: Vec<ClusterVertex> = skeleton
            .into_iter()
            .enumerate()
            .map(|(id, (depth, members, parent))| ClusterVertex {
                id,
                depth,
                wt: members.len(),
                members,
                parent,
                children: Vec::new(),
                l_prime: 0,
                r: 0,
                s: 0,
                l: 0,
                f_val: 0,
                parity: Parity::Even,
            })
            .collect();
        for id in 1..vertices.len() {
            let p = vertices[id].parent.expect("non-root vertex has a parent");
            vertices[p].children.push(id);
        }
        for id in 0..vertices.len() {
            let child_wts: Vec<usize> = vertices[id].children.iter().map(|&c| vertices[c].wt).collect();
            let v = &mut vertices[id];
            v.r = child_wts.iter().filter(|&&w| w % 2 == 1).count();
            v.s = child_wts.len() - v.r;
            v.l_prime = v.wt - child_wts.iter().sum::<usize>();
            v.l = v.l_prime + v.r;
        }
        // parents precede children in id order
        for id in 1..vertices.len() {
            let p = vertices[id].parent.unwrap();
            vertices[id].f_val = vertices[p].f_val + vertices[id].wt as u64;
            vertices[id].parity = Parity::of(vertices[id].f_val);
        }
        Self { vertices, num_roots }
    }
}

/// Classes of `{0..n}` under `m[i][j] >= threshold`, sorted by smallest member.
/// Relies on ultrametricity for transitivity.
fn classes_at(m: &ValuationMatrix, threshold: u64) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (i..n)
            .filter(|&j| j == i || (!assigned[j] && m.off(i, j) >= threshold))
            .collect();
        for &j in &class {
            assigned[j] = true;
        }
        out.push(class);
    }
    out
}

/// Builds `T_B` by slicing the matrix at every depth `d = 1, 2, ...`.
///
/// `allow_small_genus` admits 2 or 4 roots for synthetic experiments.
pub fn build_cluster_tree(m: &ValuationMatrix, allow_small_genus: bool) -> Result<ClusterTree, InputError> {
    check_root_count(m.len(), allow_small_genus)?;
    validate_ultrametric(m).into_result()?;
    let n = m.len();

    let mut levels: Vec<u64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m.off(i, j))
        .filter(|&v| v > 0)
        .collect();
    levels.sort_unstable();
    levels.dedup();

    let mut skeleton: Vec<(u64, Vec<usize>, Option<VertexId>)> = vec![(0, (0..n).collect(), None)];
    // owner[i]: vertex at the previous depth containing root i, if any
    let mut owner: Vec<Option<VertexId>> = vec![Some(0); n];
    let mut depth = 0u64;
    for &level in &levels {
        // the partition is constant for depths in (previous level, level]
        let clusters: Vec<Vec<usize>> = classes_at(m, level).into_iter().filter(|c| c.len() >= 2).collect();
        while depth < level {
            depth += 1;
            let mut next_owner = vec![None; n];
            for class in &clusters {
                let parent = owner[class[0]].expect("cluster refines a previous cluster");
                let id = skeleton.len();
                skeleton.push((depth, class.clone(), Some(parent)));
                for &i in class {
                    next_owner[i] = Some(id);
                }
            }
            owner = next_owner;
        }
    }
    Ok(ClusterTree::from_skeleton(n, skeleton))
}

/// `d(v) = Σ_{w child} wt_w (wt_w - 1)`.
pub fn local_d(tree: &ClusterTree, v: &ClusterVertex) -> i64 {
    tree.children(v).map(|w| (w.wt * (w.wt - 1)) as i64).sum()
}

/// `ν(d_f) = 2 Σ_{i<j} m[i][j]`, the valuation of the discriminant of `f` as
/// a polynomial of degree `2g+2`.
pub fn equation_discriminant(m: &ValuationMatrix) -> i64 {
    let n = m.len();
    let half: u64 = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m.off(i, j))
        .sum();
    2 * i64::try_from(half).expect("discriminant valuation fits in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{build_matrix, parse_rational, Instance, Prime};

    fn tree_of(p: u64, roots: &[&str]) -> (ValuationMatrix, ClusterTree) {
        let inst = Instance::new(
            Prime::new(p).unwrap(),
            roots.iter().map(|s| parse_rational(s).unwrap()).collect(),
            false,
        )
        .unwrap();
        let m = build_matrix(&inst).unwrap();
        let t = build_cluster_tree(&m, false).unwrap();
        (m, t)
    }

    /// (wt, parity, l', r, s, l)
    fn stats(v: &ClusterVertex) -> (usize, Parity, usize, usize, usize, usize) {
        (v.wt, v.parity, v.l_prime, v.r, v.s, v.l)
    }

    #[test]
    fn fixture_a_tree() {
        let (m, t) = tree_of(3, &["0", "1", "2", "3", "4", "5"]);
        assert_eq!(t.len(), 4);
        assert_eq!(stats(t.root()), (6, Parity::Even, 0, 0, 3, 0));
        let kids: Vec<_> = t.children(t.root()).collect();
        assert_eq!(kids.len(), 3);
        for (k, c) in kids.iter().enumerate() {
            assert_eq!(c.depth, 1);
            assert_eq!(c.members, vec![k, k + 3]);
            assert_eq!(stats(c), (2, Parity::Even, 2, 0, 0, 2));
            assert_eq!(local_d(&t, c), 0);
        }
        assert_eq!(local_d(&t, t.root()), 6);
        assert_eq!(equation_discriminant(&m), 6);
    }

    #[test]
    fn fixture_b_tree() {
        let (m, t) = tree_of(5, &["0", "5", "10", "1", "2", "3"]);
        assert_eq!(t.len(), 2);
        assert_eq!(stats(t.root()), (6, Parity::Even, 3, 1, 0, 4));
        let c = t.vertex(1);
        assert_eq!(c.f_val, 3);
        assert_eq!(stats(c), (3, Parity::Odd, 3, 0, 0, 3));
        assert_eq!(local_d(&t, t.root()), 6);
        assert_eq!(local_d(&t, c), 0);
        assert_eq!(equation_discriminant(&m), 6);
    }

    #[test]
    fn fixture_c_chain() {
        let (m, t) = tree_of(5, &["0", "25", "1", "2", "3", "4"]);
        assert_eq!(t.len(), 3);
        // l = l' + r = 4; only its parity enters the local terms
        assert_eq!(stats(t.root()), (6, Parity::Even, 4, 0, 1, 4));
        let c1 = t.vertex(1);
        let c2 = t.vertex(2);
        assert_eq!((c1.depth, c1.parent, c1.f_val), (1, Some(0), 2));
        assert_eq!(stats(c1), (2, Parity::Even, 0, 0, 1, 0));
        assert_eq!((c2.depth, c2.parent, c2.f_val), (2, Some(1), 4));
        assert_eq!(stats(c2), (2, Parity::Even, 2, 0, 0, 2));
        assert_eq!(t.separating_roots(t.root()), vec![2, 3, 4, 5]);
        assert_eq!(equation_discriminant(&m), 4);
        let total: i64 = t.vertices().iter().map(|v| local_d(&t, v)).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn good_reduction_is_single_vertex() {
        let (m, t) = tree_of(7, &["0", "1", "2", "3", "4", "5"]);
        assert_eq!(t.len(), 1);
        assert_eq!(stats(t.root()), (6, Parity::Even, 6, 0, 0, 6));
        assert_eq!(local_d(&t, t.root()), 0);
        assert_eq!(equation_discriminant(&m), 0);
    }

    #[test]
    fn rejects_small_and_non_ultrametric() {
        let m = ValuationMatrix::from_fn(4, |_, _| 0);
        assert!(matches!(build_cluster_tree(&m, false), Err(InputError::TooFewRoots { .. })));
        assert!(build_cluster_tree(&m, true).is_ok());
        let bad = ValuationMatrix::from_fn(6, |i, j| u64::from((i, j) == (0, 1)) * 3 + u64::from((i, j) == (1, 2)) * 3);
        assert!(matches!(build_cluster_tree(&bad, false), Err(InputError::UltrametricViolation(_))));
    }

    #[test]
    fn ids_sorted_by_depth_then_smallest_member() {
        let (_, t) = tree_of(3, &["0", "9", "1", "4", "2", "27"]);
        let keys: Vec<_> = t.vertices().iter().map(|v| (v.depth, v.members[0])).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
