//! Maximum bipartite matching and the Dulmage-Mendelsohn even/odd/unreachable
//! classification.
//!
//! Left vertices are applicants, right vertices posts. A vertex is even (odd)
//! if some alternating path of even (odd) length reaches it from an unmatched
//! vertex, unreachable otherwise. The labels do not depend on which maximum
//! matching is used.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
    radj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl BipartiteGraph {
    /// Rejects out-of-range endpoints and duplicate edges.
    pub fn new<I>(left: usize, right: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = BipartiteGraph {
            left,
            right,
            adj: vec![Vec::new(); left],
            radj: vec![Vec::new(); right],
            num_edges: 0,
        };
        for (u, v) in edges {
            if u >= left || v >= right {
                return Err(Error::Parameter(format!(
                    "edge ({u}, {v}) outside a {left}x{right} graph"
                )));
            }
            if g.adj[u].contains(&v) {
                return Err(Error::Parameter(format!("duplicate edge ({u}, {v})")));
            }
            g.adj[u].push(v);
            g.radj[v].push(u);
            g.num_edges += 1;
        }
        Ok(g)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn neighbours(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn right_neighbours(&self, v: usize) -> &[usize] {
        &self.radj[v]
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.radj[v].len()
    }

    pub fn max_left_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteMatching {
    mate_left: Vec<Option<usize>>,
    mate_right: Vec<Option<usize>>,
}

impl BipartiteMatching {
    pub fn empty(g: &BipartiteGraph) -> Self {
        BipartiteMatching {
            mate_left: vec![None; g.left],
            mate_right: vec![None; g.right],
        }
    }

    /// Builds a matching of `g` from pairs; fails on non-edges or reuse.
    pub fn from_pairs<I>(g: &BipartiteGraph, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::empty(g);
        for (u, v) in pairs {
            if u >= g.left || v >= g.right || !g.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("({u}, {v}) is not an edge")));
            }
            if m.mate_left[u].is_some() || m.mate_right[v].is_some() {
                return Err(Error::InvalidMatching(format!("({u}, {v}) reuses a vertex")));
            }
            m.join(u, v);
        }
        Ok(m)
    }

    pub fn mate_left(&self, u: usize) -> Option<usize> {
        self.mate_left[u]
    }

    pub fn mate_right(&self, v: usize) -> Option<usize> {
        self.mate_right[v]
    }

    pub fn len(&self) -> usize {
        self.mate_left.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate_left
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v)))
    }

    fn join(&mut self, u: usize, v: usize) {
        self.mate_left[u] = Some(v);
        self.mate_right[v] = Some(u);
    }

    fn check(&self, g: &BipartiteGraph) -> Result<()> {
        if self.mate_left.len() != g.left || self.mate_right.len() != g.right {
            return Err(Error::InvalidMatching("matching is sized for another graph".into()));
        }
        for (u, v) in self.pairs() {
            if !g.has_edge(u, v) || self.mate_right[v] != Some(u) {
                return Err(Error::InvalidMatching(format!("({u}, {v}) is not a consistent edge")));
            }
        }
        for (v, u) in self.mate_right.iter().enumerate() {
            if let Some(u) = *u {
                if self.mate_left[u] != Some(v) {
                    return Err(Error::InvalidMatching(format!("right {v} mate mismatch")));
                }
            }
        }
        Ok(())
    }
}

/// Tries to augment from the unmatched left vertex `root` with one BFS.
/// Returns the number of vertex visits.
fn augment_from(
    g: &BipartiteGraph,
    m: &mut BipartiteMatching,
    root: usize,
    parent: &mut [Option<usize>],
    touched: &mut Vec<usize>,
) -> (bool, usize) {
    // parent[v] = left vertex that reached right vertex v
    let mut queue = VecDeque::from([root]);
    let mut work = 0;
    let mut found = None;
    'bfs: while let Some(u) = queue.pop_front() {
        for &v in &g.adj[u] {
            work += 1;
            if parent[v].is_some() {
                continue;
            }
            parent[v] = Some(u);
            touched.push(v);
            match m.mate_right[v] {
                None => {
                    found = Some(v);
                    break 'bfs;
                }
                Some(w) => queue.push_back(w),
            }
        }
    }
    let ok = found.is_some();
    if let Some(mut v) = found {
        loop {
            let u = parent[v].expect("path vertex has a parent");
            let next = m.mate_left[u];
            m.join(u, v);
            match next {
                Some(prev) if u != root => v = prev,
                _ => break,
            }
        }
    }
    for v in touched.drain(..) {
        parent[v] = None;
    }
    (ok, work)
}

/// Extends `m` to a maximum matching of `g`, trying unmatched left vertices
/// in `order`. Matched vertices stay matched. Returns a work count.
pub fn augment_in_order(g: &BipartiteGraph, m: &mut BipartiteMatching, order: &[usize]) -> usize {
    let mut parent = vec![None; g.right];
    let mut touched = Vec::new();
    let mut work = 0;
    for &u in order {
        if m.mate_left[u].is_none() {
            work += augment_from(g, m, u, &mut parent, &mut touched).1 + 1;
        }
    }
    work
}

/// Extends `m` to a maximum matching of `g`.
pub fn augment(g: &BipartiteGraph, m: &mut BipartiteMatching) -> usize {
    let order: Vec<usize> = (0..g.left).collect();
    augment_in_order(g, m, &order)
}

/// Maximum-cardinality matching by repeated augmenting-path search, left
/// vertices taken in increasing order.
pub fn max_matching(g: &BipartiteGraph) -> BipartiteMatching {
    let mut m = BipartiteMatching::empty(g);
    augment(g, &mut m);
    m
}

/// As [`max_matching`] with an explicit left-vertex order. Different orders
/// generally produce different maximum matchings.
pub fn max_matching_in_order(g: &BipartiteGraph, order: &[usize]) -> BipartiteMatching {
    let mut m = BipartiteMatching::empty(g);
    augment_in_order(g, &mut m, order);
    m
}

/// Linear-time maximum matching when every left vertex has degree at most 2.
///
/// View each left vertex as an edge between its two right neighbours (or a
/// pendant half-edge when it has one). A connected component with `k` right
/// vertices and `e` such edges admits a matching of size `min(e, k)`: orient
/// a spanning tree away from a root, give each tree edge to its child, and if
/// the component has a spare edge root the tree at its endpoint and give the
/// spare edge to the root.
pub fn max_matching_deg2(g: &BipartiteGraph) -> Result<BipartiteMatching> {
    if g.max_left_degree() > 2 {
        return Err(Error::Parameter("left degree exceeds 2".into()));
    }
    let mut m = BipartiteMatching::empty(g);
    let mut comp = vec![usize::MAX; g.right];
    let mut stack = Vec::new();
    let mut members: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    let mut tree_edge = vec![false; g.left];
    let mut seen_left = vec![false; g.left];

    for start in 0..g.right {
        if comp[start] != usize::MAX || g.radj[start].is_empty() {
            continue;
        }
        // collect the component and a spanning tree rooted at `start`
        members.clear();
        comp[start] = start;
        stack.push(start);
        let mut spare: Option<(usize, usize)> = None; // (left vertex, right endpoint)
        while let Some(v) = stack.pop() {
            members.push(v);
            for &u in &g.radj[v] {
                if seen_left[u] {
                    continue;
                }
                seen_left[u] = true;
                let other = g.adj[u].iter().copied().find(|&w| w != v);
                match other {
                    None => {
                        if spare.is_none() {
                            spare = Some((u, v));
                        }
                    }
                    Some(w) if comp[w] == usize::MAX => {
                        comp[w] = start;
                        tree_edge[u] = true;
                        stack.push(w);
                    }
                    Some(_) => {
                        if spare.is_none() {
                            spare = Some((u, v));
                        }
                    }
                }
            }
        }
        let root = spare.map_or(start, |(_, r)| r);
        if let Some((u, r)) = spare {
            m.join(u, r);
        }
        // BFS over tree edges from the root; each tree edge goes to its child
        queue.push_back(root);
        let mut reached = vec![root];
        comp[root] = usize::MAX - 1;
        while let Some(v) = queue.pop_front() {
            for &u in &g.radj[v] {
                if !tree_edge[u] {
                    continue;
                }
                let w = g.adj[u].iter().copied().find(|&w| w != v).expect("tree edge has two ends");
                if comp[w] == usize::MAX - 1 {
                    continue;
                }
                comp[w] = usize::MAX - 1;
                reached.push(w);
                m.join(u, w);
                queue.push_back(w);
            }
        }
        debug_assert_eq!(reached.len(), members.len());
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DmLabel {
    Even,
    Odd,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmClassification {
    left: Vec<DmLabel>,
    right: Vec<DmLabel>,
}

impl DmClassification {
    pub fn left(&self, u: usize) -> DmLabel {
        self.left[u]
    }

    pub fn right(&self, v: usize) -> DmLabel {
        self.right[v]
    }

    pub fn left_labels(&self) -> &[DmLabel] {
        &self.left
    }

    pub fn right_labels(&self) -> &[DmLabel] {
        &self.right
    }

    pub fn count(&self, label: DmLabel) -> usize {
        self.left.iter().chain(&self.right).filter(|&&l| l == label).count()
    }
}

/// Even/odd/unreachable labels relative to the maximum matching `m`.
///
/// Two BFS passes over alternating paths: one from unmatched left vertices,
/// one from unmatched right vertices. Fails with [`Error::NotMaximum`] when
/// the passes reveal an augmenting path.
pub fn classify(g: &BipartiteGraph, m: &BipartiteMatching) -> Result<DmClassification> {
    m.check(g)?;
    let (left_even, right_odd) = alternating_layers(&g.adj, &m.mate_left, &m.mate_right)?;
    let (right_even, left_odd) = alternating_layers(&g.radj, &m.mate_right, &m.mate_left)?;
    let label = |even: bool, odd: bool| -> Result<DmLabel> {
        match (even, odd) {
            (true, true) => Err(Error::NotMaximum),
            (true, false) => Ok(DmLabel::Even),
            (false, true) => Ok(DmLabel::Odd),
            (false, false) => Ok(DmLabel::Unreachable),
        }
    };
    let left = (0..g.left)
        .map(|u| label(left_even[u], left_odd[u]))
        .collect::<Result<_>>()?;
    let right = (0..g.right)
        .map(|v| label(right_even[v], right_odd[v]))
        .collect::<Result<_>>()?;
    Ok(DmClassification { left, right })
}

/// From every unmatched vertex on the `adj` side, marks same-side vertices
/// reached at even distance and other-side vertices at odd distance.
fn alternating_layers(
    adj: &[Vec<usize>],
    mate: &[Option<usize>],
    mate_other: &[Option<usize>],
) -> Result<(Vec<bool>, Vec<bool>)> {
    let mut even = vec![false; adj.len()];
    let mut odd = vec![false; mate_other.len()];
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&u| mate[u].is_none()).collect();
    for &u in &queue {
        even[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if mate[u] == Some(v) || odd[v] {
                continue;
            }
            odd[v] = true;
            match mate_other[v] {
                None => return Err(Error::NotMaximum),
                Some(w) if !even[w] => {
                    even[w] = true;
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    Ok((even, odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(l: usize, r: usize, e: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::new(l, r, e.iter().copied()).unwrap()
    }

    /// Largest matching by trying every subset of edges.
    fn brute_max(g: &BipartiteGraph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut ul = vec![false; g.left()];
            let mut ur = vec![false; g.right()];
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if ul[u] || ur[v] {
                        ok = false;
                        break;
                    }
                    ul[u] = true;
                    ur[v] = true;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn small_cases() {
        assert_eq!(max_matching(&graph(1, 1, &[(0, 0)])).len(), 1);
        assert_eq!(max_matching(&graph(2, 1, &[(0, 0), (1, 0)])).len(), 1);
        // helper graph of the first iteration on the three-applicant example
        let h1 = graph(3, 3, &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
        assert_eq!(brute_max(&h1), 2);
        assert_eq!(max_matching(&h1).len(), 2);
        assert_eq!(max_matching_deg2(&h1).unwrap().len(), 2);
        let c = classify(&h1, &max_matching(&h1)).unwrap();
        assert_eq!(c.right(2), DmLabel::Even);
    }

    #[test]
    fn classify_examples() {
        let g = graph(1, 1, &[(0, 0)]);
        let c = classify(&g, &max_matching(&g)).unwrap();
        assert_eq!(c.left(0), DmLabel::Unreachable);
        assert_eq!(c.right(0), DmLabel::Unreachable);

        let g = graph(2, 1, &[(0, 0), (1, 0)]);
        let m = BipartiteMatching::from_pairs(&g, [(0, 0)]).unwrap();
        let c = classify(&g, &m).unwrap();
        assert_eq!(c.left(1), DmLabel::Even);
        assert_eq!(c.right(0), DmLabel::Odd);
        assert_eq!(c.left(0), DmLabel::Even);
    }

    #[test]
    fn rejects_non_maximum() {
        let g = graph(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        let m = BipartiteMatching::from_pairs(&g, [(1, 0)]).unwrap();
        assert_eq!(classify(&g, &m).unwrap_err(), Error::NotMaximum);
        let g = graph(1, 1, &[(0, 0)]);
        assert_eq!(
            classify(&g, &BipartiteMatching::empty(&g)).unwrap_err(),
            Error::NotMaximum
        );
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(BipartiteGraph::new(1, 1, [(0, 0), (0, 0)]).is_err());
        assert!(BipartiteGraph::new(1, 1, [(0, 1)]).is_err());
        let g = graph(1, 3, &[(0, 0), (0, 1), (0, 2)]);
        assert!(max_matching_deg2(&g).is_err());
    }

    #[test]
    fn deg2_cycles_paths_and_pendants() {
        // 4-cycle plus a path with a pendant
        let g = graph(
            5,
            5,
            &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4)],
        );
        let m = max_matching_deg2(&g).unwrap();
        assert_eq!(m.len(), brute_max(&g));
        m.check(&g).unwrap();
        // a tree component leaves one right vertex free
        let g = graph(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]);
        assert_eq!(max_matching_deg2(&g).unwrap().len(), 2);
    }

    use proptest::prelude::*;

    fn arb_graph(max_deg: usize) -> impl Strategy<Value = BipartiteGraph> {
        (1usize..=6, 1usize..=6).prop_flat_map(move |(l, r)| {
            proptest::collection::vec(proptest::collection::btree_set(0..r, 0..=max_deg.min(r)), l)
                .prop_map(move |adj| {
                    BipartiteGraph::new(
                        l,
                        r,
                        adj.iter()
                            .enumerate()
                            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v))),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn max_matching_is_maximum(g in arb_graph(3)) {
            prop_assume!(g.num_edges() <= 16);
            prop_assert_eq!(max_matching(&g).len(), brute_max(&g));
        }

        #[test]
        fn deg2_matches_general(g in arb_graph(2)) {
            let m = max_matching_deg2(&g).unwrap();
            prop_assert!(m.check(&g).is_ok());
            prop_assert_eq!(m.len(), max_matching(&g).len());
            prop_assert_eq!(classify(&g, &m).unwrap(), classify(&g, &max_matching(&g)).unwrap());
        }
    }
}
