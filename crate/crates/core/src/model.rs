//! Dual graphs of the intermediate model `Y` and of the regular model `X`.
//!
//! `Y` is `T_B` with one extra even vertex on every edge joining two odd
//! vertices and one even leaf per root meeting an odd component. `X` is the
//! normalization of `Y` in the quadratic extension given by `f`; its dual
//! graph is read off from where the branch locus (odd components plus the
//! horizontal root divisors) meets each component of `Y`.

use std::collections::BTreeMap;

use crate::cluster::{ClusterTree, ClusterVertex, Parity, VertexId};
use crate::error::InvariantViolation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum YOrigin {
    /// Strict transform of a `T_B` component.
    StrictTransform(VertexId),
    /// Exceptional curve over the meeting point of two odd components.
    ChainInsert { parent: VertexId, child: VertexId },
    /// Exceptional curve over the meeting point of an odd component and the
    /// divisor of a root.
    HorizontalLeaf { vertex: VertexId, root: usize },
}

impl YOrigin {
    /// The `T_B` vertex this component maps to (`φ₂`); for a point on two
    /// components, the one closer to the root.
    pub fn cluster_vertex(self) -> VertexId {
        match self {
            YOrigin::StrictTransform(v) => v,
            YOrigin::ChainInsert { parent, .. } => parent,
            YOrigin::HorizontalLeaf { vertex, .. } => vertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YVertex {
    pub id: usize,
    pub origin: YOrigin,
    pub parity: Parity,
    pub attached_roots: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YGraph {
    vertices: Vec<YVertex>,
    /// `T_Y` id of the strict transform of each `T_B` vertex.
    strict: Vec<usize>,
}

impl YGraph {
    pub fn vertices(&self) -> &[YVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &YVertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn strict_transform(&self, v: VertexId) -> usize {
        self.strict[v]
    }

    pub fn neighbors(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let v = &self.vertices[id];
        v.parent.into_iter().chain(v.children.iter().copied())
    }

    /// Tree edges `(parent, child)` in child-id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.iter().filter_map(|v| v.parent.map(|p| (p, v.id)))
    }

    /// Number of branch-locus components meeting vertex `id`: odd neighbours
    /// plus attached root divisors. Meaningful for even vertices.
    pub fn branch_degree(&self, id: usize) -> usize {
        let odd = self
            .neighbors(id)
            .filter(|&w| self.vertices[w].parity.is_odd())
            .count();
        odd + self.vertices[id].attached_roots.len()
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.vertices[id].children.is_empty()
    }
}

/// Inserts chain vertices between adjacent odd vertices and one leaf per
/// root on each odd vertex.
pub fn build_ty(tree: &ClusterTree) -> YGraph {
    let mut vertices: Vec<YVertex> = tree
        .vertices()
        .iter()
        .map(|v| YVertex {
            id: v.id,
            origin: YOrigin::StrictTransform(v.id),
            parity: v.parity,
            attached_roots: if v.is_even() {
                tree.separating_roots(v)
            } else {
                Vec::new()
            },
            parent: None,
            children: Vec::new(),
        })
        .collect();
    let strict: Vec<usize> = (0..tree.len()).collect();

    let link = |vertices: &mut Vec<YVertex>, parent: usize, child: usize| {
        vertices[child].parent = Some(parent);
        vertices[parent].children.push(child);
    };

    for v in tree.vertices().iter().skip(1) {
        let p = tree.parent(v).expect("non-root");
        if p.is_odd() && v.is_odd() {
            let id = vertices.len();
            vertices.push(YVertex {
                id,
                origin: YOrigin::ChainInsert {
                    parent: p.id,
                    child: v.id,
                },
                parity: Parity::Even,
                attached_roots: Vec::new(),
                parent: None,
                children: Vec::new(),
            });
            link(&mut vertices, p.id, id);
            link(&mut vertices, id, v.id);
        } else {
            link(&mut vertices, p.id, v.id);
        }
    }
    for v in tree.vertices().iter().filter(|v| v.is_odd()) {
        for root in tree.separating_roots(v) {
            let id = vertices.len();
            vertices.push(YVertex {
                id,
                origin: YOrigin::HorizontalLeaf { vertex: v.id, root },
                parity: Parity::Even,
                attached_roots: vec![root],
                parent: None,
                children: Vec::new(),
            });
            link(&mut vertices, v.id, id);
        }
    }
    // children in id order keeps every traversal deterministic
    for v in &mut vertices {
        v.children.sort_unstable();
    }
    YGraph { vertices, strict }
}

/// Checks the structural rules `Y` must satisfy before it is covered.
pub fn check_ty(y: &YGraph) -> Result<(), InvariantViolation> {
    for (a, b) in y.edges() {
        if y.vertex(a).parity.is_odd() && y.vertex(b).parity.is_odd() {
            return Err(InvariantViolation::at("two odd components of Y meet", a));
        }
    }
    for v in y.vertices() {
        if !matches!(v.origin, YOrigin::StrictTransform(_)) && v.parity.is_odd() {
            return Err(InvariantViolation::at("an exceptional component of Y is odd", v.id));
        }
        if v.parity.is_even() && y.branch_degree(v.id) % 2 == 1 {
            return Err(InvariantViolation::at(
                "branch locus meets an even component of Y in an odd number of points",
                v.id,
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XComponent {
    pub id: usize,
    /// The `T_Y` vertex this component covers.
    pub over: usize,
    /// 0 or 1; only split covers use sheet 1.
    pub sheet: u8,
    pub multiplicity: i64,
    /// Euler characteristic of the (smooth) component.
    pub chi: i64,
}

/// Intersection of two components. `from` lies on the root side of the
/// corresponding `T_Y` edge, which orients `T_X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XEdge {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGraph {
    components: Vec<XComponent>,
    edges: Vec<XEdge>,
    genus: usize,
    /// Components over each `T_Y` vertex.
    fibers: Vec<Vec<usize>>,
}

impl XGraph {
    pub fn components(&self) -> &[XComponent] {
        &self.components
    }

    pub fn edges(&self) -> &[XEdge] {
        &self.edges
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn fiber(&self, y_vertex: usize) -> &[usize] {
        &self.fibers[y_vertex]
    }

    /// Intersection number `Γ_a.Γ_b` for `a != b`.
    pub fn intersection(&self, a: usize, b: usize) -> i64 {
        self.edges
            .iter()
            .filter(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
            .map(|e| e.weight)
            .sum()
    }

    /// `(neighbor, weight)` pairs of component `a`.
    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.from == a {
                Some((e.to, e.weight))
            } else if e.to == a {
                Some((e.from, e.weight))
            } else {
                None
            }
        })
    }

    /// `(child, weight)` pairs of component `a` in the orientation from `T_Y`.
    pub fn children(&self, a: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.from == a)
            .map(|e| (e.to, e.weight))
    }

    pub fn is_connected(&self) -> bool {
        if self.components.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.components.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for (b, _) in self.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Total intersection weight `Σ_{i<j} Γ_i.Γ_j`.
    pub fn total_intersection(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// `χ(X_s) = Σ χ(Γ_i) - Σ_{i<j} Γ_i.Γ_j`.
    pub fn special_fiber_euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.chi).sum::<i64>() - self.total_intersection()
    }

    /// Removes the first edge; used only to inject faults in tests.
    pub(crate) fn drop_first_edge(&mut self) {
        if !self.edges.is_empty() {
            self.edges.remove(0);
        }
    }
}

/// Builds the dual graph of `X_s` from `T_Y`.
///
/// An even component not meeting the branch locus has an unramified, hence
/// split, double cover: two rational sheets. Otherwise there is one
/// component, ramified at the `β` branch points (Riemann-Hurwitz gives
/// `χ = 4 - β`), or lying over an odd component (`m = 2`, rational).
pub fn build_tx(tree: &ClusterTree, y: &YGraph) -> Result<XGraph, InvariantViolation> {
    let mut components = Vec::new();
    let mut fibers = vec![Vec::new(); y.len()];
    for v in y.vertices() {
        let beta = y.branch_degree(v.id);
        let phi = tree.vertex(v.origin.cluster_vertex());
        let odd_image = phi.is_odd();
        let even_leaf = v.parity.is_even() && y.is_leaf(v.id);
        let multiplicity = if odd_image && !even_leaf { 2 } else { 1 };
        let sheets: &[(u8, i64)] = match (v.parity, beta) {
            (Parity::Odd, _) => &[(0, 2)],
            (Parity::Even, 0) => &[(0, 2), (1, 2)],
            (Parity::Even, _) => &[(0, 0)],
        };
        for &(sheet, chi) in sheets {
            let chi = if v.parity.is_even() && beta > 0 {
                4 - beta as i64
            } else {
                chi
            };
            let id = components.len();
            fibers[v.id].push(id);
            components.push(XComponent {
                id,
                over: v.id,
                sheet,
                multiplicity,
                chi,
            });
        }
    }

    let mut edges = Vec::new();
    for (a, b) in y.edges() {
        let (fa, fb) = (&fibers[a], &fibers[b]);
        let odd_end = y.vertex(a).parity.is_odd() || y.vertex(b).parity.is_odd();
        match (fa.len(), fb.len()) {
            (1, 1) => edges.push(XEdge {
                from: fa[0],
                to: fb[0],
                // two preimages of an unbranched point, both on the same
                // irreducible components
                weight: if odd_end { 1 } else { 2 },
            }),
            (1, 2) | (2, 1) => {
                for &from in fa {
                    for &to in fb {
                        edges.push(XEdge { from, to, weight: 1 });
                    }
                }
            }
            (2, 2) => {
                for k in 0..2 {
                    edges.push(XEdge {
                        from: fa[k],
                        to: fb[k],
                        weight: 1,
                    });
                }
            }
            _ => unreachable!("each Y component has one or two preimages"),
        }
    }

    let x = XGraph {
        components,
        edges,
        genus: tree.genus(),
        fibers,
    };
    if !x.is_connected() {
        return Err(InvariantViolation::new("special fiber of X is disconnected"));
    }
    Ok(x)
}

/// `-Art(X/S) = Σ_i [(1-m_i)χ(Γ_i) + Σ_{j≠i}(m_j-1)Γ_i.Γ_j] + Σ_{i<j} Γ_i.Γ_j`.
pub fn artin_direct(x: &XGraph) -> i64 {
    let comps = x.components();
    let local: i64 = comps
        .iter()
        .map(|c| {
            let nb: i64 = x
                .neighbors(c.id)
                .map(|(j, w)| (comps[j].multiplicity - 1) * w)
                .sum();
            (1 - c.multiplicity) * c.chi + nb
        })
        .sum();
    local + x.total_intersection()
}

/// Contribution `δ(v'')` of one component in the oriented decomposition:
/// `(1-m)χ + Σ_{N}(m_w-1)Γ.Γ_w + Σ_{C} Γ.Γ_w`.
pub fn component_delta(x: &XGraph, a: usize) -> i64 {
    let comps = x.components();
    let c = &comps[a];
    let nb: i64 = x
        .neighbors(a)
        .map(|(j, w)| (comps[j].multiplicity - 1) * w)
        .sum();
    let down: i64 = x.children(a).map(|(_, w)| w).sum();
    (1 - c.multiplicity) * c.chi + nb + down
}

/// Regroups `-Art(X/S)` by `T_B` vertex via `φ = φ₂ ∘ φ₁`.
pub fn artin_by_cluster_vertex(tree: &ClusterTree, y: &YGraph, x: &XGraph) -> Vec<i64> {
    let mut out = vec![0i64; tree.len()];
    for c in x.components() {
        out[y.vertex(c.over).origin.cluster_vertex()] += component_delta(x, c.id);
    }
    out
}

/// `Γ_i² = -(Σ_{j≠i} m_j Γ_i.Γ_j) / m_i`, from `X_s.Γ_i = 0`.
pub fn self_intersections(x: &XGraph) -> Result<Vec<i64>, InvariantViolation> {
    let comps = x.components();
    comps
        .iter()
        .map(|c| {
            let s: i64 = x.neighbors(c.id).map(|(j, w)| comps[j].multiplicity * w).sum();
            if s % c.multiplicity != 0 {
                return Err(InvariantViolation::at("non-integral self-intersection", c.id));
            }
            Ok(-s / c.multiplicity)
        })
        .collect()
}

/// `Σ m_i(-χ_i - Γ_i²)`, which adjunction forces to equal `2g - 2`.
pub fn genus_check(x: &XGraph, self_int: &[i64]) -> i64 {
    x.components()
        .iter()
        .map(|c| c.multiplicity * (-c.chi - self_int[c.id]))
        .sum()
}

/// Odd vertices with `l' = 0`, an even parent and a single even child: these
/// carry the contractible (-1)-curves. Empty iff `X` is minimal.
pub fn detect_nonminimal(tree: &ClusterTree) -> Vec<VertexId> {
    tree.vertices()
        .iter()
        .filter(|v| is_nonminimal_pattern(tree, v))
        .map(|v| v.id)
        .collect()
}

fn is_nonminimal_pattern(tree: &ClusterTree, v: &ClusterVertex) -> bool {
    v.is_odd()
        && v.l_prime == 0
        && tree.parent_parity(v) == Some(Parity::Even)
        && v.children.len() == 1
        && tree.vertex(v.children[0]).is_even()
}

/// Checks the fiber-shape statements about `X → Y → T_B`.
pub fn check_tx(tree: &ClusterTree, y: &YGraph, x: &XGraph) -> Result<(), InvariantViolation> {
    for v in y.vertices() {
        let fiber = x.fiber(v.id);
        let beta = y.branch_degree(v.id);
        let expect = if v.parity.is_even() && beta == 0 { 2 } else { 1 };
        if fiber.len() != expect {
            return Err(InvariantViolation::at("wrong number of components over a Y vertex", v.id));
        }
        if v.parity.is_even() {
            let chi = x.components()[fiber[0]].chi;
            if chi % 2 != 0 {
                return Err(InvariantViolation::at("odd Euler characteristic over an even component", v.id));
            }
        }
    }
    for e in x.edges() {
        if !(1..=2).contains(&e.weight) {
            return Err(InvariantViolation::at("intersection number outside {1, 2}", e.from));
        }
        if e.weight == 2 {
            let (a, b) = (&x.components()[e.from], &x.components()[e.to]);
            let ok = [a, b].iter().all(|c| {
                let yv = y.vertex(c.over);
                yv.parity.is_even()
                    && matches!(yv.origin, YOrigin::StrictTransform(_))
                    && y.branch_degree(yv.id) > 0
            });
            if !ok {
                return Err(InvariantViolation::at("double intersection outside two ramified even components", e.from));
            }
        }
    }
    // fiber of X over an odd cluster vertex: one m=2 component, s_v components
    // with m=2 over chain inserts, l'_v components with m=1 over leaves
    let mut over_cluster: BTreeMap<VertexId, Vec<&XComponent>> = BTreeMap::new();
    for c in x.components() {
        over_cluster
            .entry(y.vertex(c.over).origin.cluster_vertex())
            .or_default()
            .push(c);
    }
    for v in tree.vertices().iter().filter(|v| v.is_odd()) {
        let comps = &over_cluster[&v.id];
        let mut strict = 0;
        let mut chain = 0;
        let mut leaf = 0;
        for c in comps {
            match (y.vertex(c.over).origin, c.multiplicity) {
                (YOrigin::StrictTransform(_), 2) => strict += 1,
                (YOrigin::ChainInsert { .. }, 2) => chain += 1,
                (YOrigin::HorizontalLeaf { .. }, 1) => leaf += 1,
                _ => return Err(InvariantViolation::at("unexpected multiplicity over an odd vertex", v.id)),
            }
        }
        if (strict, chain, leaf) != (1, v.s, v.l_prime) {
            return Err(InvariantViolation::at("fiber over an odd vertex is not 1 + s + l'", v.id));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::build_cluster_tree;
    use crate::valuation::{build_matrix, parse_rational, Instance, Prime, ValuationMatrix};

    fn tree_of(p: u64, roots: &[&str]) -> ClusterTree {
        let inst = Instance::new(
            Prime::new(p).unwrap(),
            roots.iter().map(|s| parse_rational(s).unwrap()).collect(),
            false,
        )
        .unwrap();
        build_cluster_tree(&build_matrix(&inst).unwrap(), false).unwrap()
    }

    fn graphs(tree: &ClusterTree) -> (YGraph, XGraph) {
        let y = build_ty(tree);
        check_ty(&y).unwrap();
        let x = build_tx(tree, &y).unwrap();
        check_tx(tree, &y, &x).unwrap();
        (y, x)
    }

    fn summary(x: &XGraph) -> Vec<(i64, i64)> {
        x.components().iter().map(|c| (c.multiplicity, c.chi)).collect()
    }

    #[test]
    fn fixture_a_graphs() {
        let t = tree_of(3, &["0", "1", "2", "3", "4", "5"]);
        let (y, x) = graphs(&t);
        assert_eq!(y.len(), t.len());
        assert!(y.vertex(0).attached_roots.is_empty());
        for k in 1..4 {
            assert_eq!(y.vertex(k).attached_roots.len(), 2);
        }
        assert_eq!(summary(&x), vec![(1, 2), (1, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(x.edges().len(), 6);
        assert!(x.edges().iter().all(|e| e.weight == 1));
        // each child meets both sheets of the root
        for k in 1..4 {
            let c = x.fiber(k)[0];
            assert_eq!(x.intersection(0, c), 1);
            assert_eq!(x.intersection(1, c), 1);
        }
        assert_eq!(artin_direct(&x), 6);
        let si = self_intersections(&x).unwrap();
        assert_eq!(si, vec![-3, -3, -2, -2, -2]);
        assert_eq!(genus_check(&x, &si), 2);
        assert!(detect_nonminimal(&t).is_empty());
    }

    #[test]
    fn fixture_b_graphs() {
        let t = tree_of(5, &["0", "5", "10", "1", "2", "3"]);
        let (y, x) = graphs(&t);
        assert_eq!(y.len(), 5);
        assert_eq!(y.vertex(0).attached_roots, vec![3, 4, 5]);
        let leaves: Vec<_> = y.vertices().iter().filter(|v| matches!(v.origin, YOrigin::HorizontalLeaf { .. })).collect();
        assert_eq!(leaves.len(), 3);
        assert!(leaves.iter().all(|l| l.parent == Some(1) && l.attached_roots.len() == 1));
        // root chi 0, odd vertex m=2, three leaves
        assert_eq!(summary(&x), vec![(1, 0), (2, 2), (1, 2), (1, 2), (1, 2)]);
        assert_eq!(x.edges().len(), 4);
        assert_eq!(x.neighbors(1).count(), 4);
        assert_eq!(artin_direct(&x), 6);
        let si = self_intersections(&x).unwrap();
        assert_eq!(si, vec![-2; 5]);
        assert_eq!(genus_check(&x, &si), 2);
    }

    #[test]
    fn fixture_c_four_cycle() {
        let t = tree_of(5, &["0", "25", "1", "2", "3", "4"]);
        let (_, x) = graphs(&t);
        assert_eq!(summary(&x), vec![(1, 0), (1, 2), (1, 2), (1, 2)]);
        let pairs: Vec<_> = x.edges().iter().map(|e| (e.from, e.to, e.weight)).collect();
        assert_eq!(pairs, vec![(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]);
        assert_eq!((x.components()[1].sheet, x.components()[2].sheet), (0, 1));
        assert_eq!(artin_direct(&x), 4);
        let si = self_intersections(&x).unwrap();
        assert_eq!(genus_check(&x, &si), 2);
    }

    #[test]
    fn good_reduction_single_component() {
        let t = tree_of(7, &["0", "1", "2", "3", "4", "5"]);
        let (_, x) = graphs(&t);
        assert_eq!(summary(&x), vec![(1, -2)]);
        assert_eq!(artin_direct(&x), 0);
        let si = self_intersections(&x).unwrap();
        assert_eq!(si, vec![0]);
        assert_eq!(genus_check(&x, &si), 2);
    }

    #[test]
    fn odd_odd_edge_gets_one_chain_insert() {
        // p = 3: {0, 3, 6} is odd at depth 1 (f_val 3); {0, 9} inside it is
        // odd at depth 2 (f_val 5)
        let t = tree_of(3, &["0", "9", "3", "1", "2", "5"]);
        let v1 = t.vertex(1);
        assert!(v1.is_odd() && t.vertex(v1.children[0]).is_odd());
        let y = build_ty(&t);
        let inserts: Vec<_> = y.vertices().iter().filter(|v| matches!(v.origin, YOrigin::ChainInsert { .. })).collect();
        assert_eq!(inserts.len(), 1);
        let ci = inserts[0];
        assert_eq!(ci.parity, Parity::Even);
        assert_eq!(ci.parent, Some(1));
        assert_eq!(ci.children, vec![v1.children[0]]);
        assert_eq!(y.branch_degree(ci.id), 2);
        let x = build_tx(&t, &y).unwrap();
        check_tx(&t, &y, &x).unwrap();
        let c = &x.components()[x.fiber(ci.id)[0]];
        assert_eq!((c.multiplicity, c.chi), (2, 2));
    }

    #[test]
    fn nonminimal_pattern_is_detected() {
        // {0, 25, 50}: odd at depth 1 with no separating roots, one even child
        // at depth 2
        let t = tree_of(5, &["0", "25", "50", "1", "2", "3"]);
        assert_eq!(detect_nonminimal(&t), vec![1]);
        let (_, x) = graphs(&t);
        let si = self_intersections(&x).unwrap();
        // the odd component is a (-1)-curve
        assert_eq!(si[1], -1);
        assert_eq!(genus_check(&x, &si), 2);
    }

    #[test]
    fn trees_without_odd_vertices_are_minimal() {
        let m = ValuationMatrix::from_fn(6, |i, j| u64::from(i / 2 == j / 2) * 2);
        let t = build_cluster_tree(&m, false).unwrap();
        assert!(t.vertices().iter().all(|v| v.is_even()));
        assert!(detect_nonminimal(&t).is_empty());
    }

    #[test]
    fn regrouped_terms_sum_to_artin() {
        for (p, roots) in [
            (3, ["0", "1", "2", "3", "4", "5"]),
            (3, ["0", "9", "3", "1", "2", "5"]),
            (5, ["0", "25", "50", "1", "2", "3"]),
        ] {
            let t = tree_of(p, &roots);
            let (y, x) = graphs(&t);
            let per = artin_by_cluster_vertex(&t, &y, &x);
            assert_eq!(per.iter().sum::<i64>(), artin_direct(&x));
        }
    }
}
