//! Graph representations for the source graph `G` and the target multigraph `H`,
//! plus list/weight tables and the [`Instance`] the solvers recurse on.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0} (source graphs must be simple)")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("colour {colour} out of range for target with {k} colours")]
    ColourOutOfRange { colour: usize, k: usize },
    #[error("duplicate colour name {0:?}")]
    DuplicateColourName(String),
    #[error("list table covers {got} vertices, graph has {expected}")]
    ListLengthMismatch { got: usize, expected: usize },
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// Neighbour lists are kept sorted so that equality, iteration order and
/// every traversal built on top of them are deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(GraphError::ParallelEdge(u.min(v), u.max(v))),
            Err(pos) => self.adj[u].insert(pos, v),
        }
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Maximum degree, `0` for the empty graph.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `keep` (any order, duplicates ignored). New ids follow
    /// ascending old ids; the returned map sends each old id to its new id.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (SimpleGraph, Vec<Option<usize>>) {
        let mut old_to_new = vec![None; self.n()];
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let adj = sorted.iter().map(|&old| self.adj[old].iter().filter_map(|&w| old_to_new[w]).collect()).collect();
        (SimpleGraph { adj }, old_to_new)
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

/// Partition of the vertex set into maximal connected sets, each sorted, the
/// list ordered by smallest member.
pub fn connected_components(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut components = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Largest `t` (capped at `cap`) such that `g` contains an induced path on `t`
/// vertices. `g` is `P_t`-free exactly when the uncapped value is below `t`.
///
/// Exhaustive search over induced paths; only meant for small graphs.
pub fn longest_induced_path_order(g: &SimpleGraph, cap: usize) -> usize {
    let cap = cap.max(1);
    let n = g.n();
    if n == 0 {
        return 0;
    }
    // hits[w] = number of path vertices adjacent to w
    let mut hits = vec![0usize; n];
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(cap);
    let mut best = 1;
    for start in 0..n {
        extend_induced(g, start, &mut path, &mut on_path, &mut hits, &mut best, cap);
        if best >= cap {
            break;
        }
    }
    best.min(cap)
}

fn extend_induced(
    g: &SimpleGraph,
    v: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    hits: &mut [usize],
    best: &mut usize,
    cap: usize,
) {
    path.push(v);
    on_path[v] = true;
    for &w in g.neighbours(v) {
        hits[w] += 1;
    }
    *best = (*best).max(path.len());
    if *best < cap {
        for &w in g.neighbours(v) {
            // w touches only v among path vertices
            if !on_path[w] && hits[w] == 1 {
                extend_induced(g, w, path, on_path, hits, best, cap);
                if *best >= cap {
                    break;
                }
            }
        }
    }
    for &w in g.neighbours(v) {
        hits[w] -= 1;
    }
    on_path[v] = false;
    path.pop();
}

/// The target multigraph `H`: named colours, symmetric adjacency, loops allowed,
/// at most one edge per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetGraph {
    names: Vec<String>,
    matrix: Vec<Vec<bool>>,
    neighbours: Vec<Vec<usize>>,
}

impl TargetGraph {
    pub fn new(names: Vec<String>) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateColourName(name.clone()));
            }
        }
        let k = names.len();
        Ok(TargetGraph { names, matrix: vec![vec![false; k]; k], neighbours: vec![Vec::new(); k] })
    }

    /// Colours named `1..=k` with no edges.
    pub fn with_numbered_colours(k: usize) -> Self {
        TargetGraph::new((1..=k).map(|i| i.to_string()).collect()).expect("distinct names")
    }

    /// The complete graph `K_k` (no loops); its list colourings are proper `k`-colourings.
    pub fn complete(k: usize) -> Self {
        let mut h = TargetGraph::with_numbered_colours(k);
        for a in 0..k {
            for b in a + 1..k {
                h.add_edge(a, b).expect("fresh pair");
            }
        }
        h
    }

    /// The two-colour target `({in, out}, {in-out, out-out})`. Its homomorphisms
    /// from `G` are exactly the indicator maps of independent sets (`in`).
    pub fn independent_set_target() -> Self {
        let mut h = TargetGraph::new(vec!["in".into(), "out".into()]).expect("distinct names");
        h.add_edge(0, 1).expect("fresh pair");
        h.add_edge(1, 1).expect("fresh pair");
        h
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let k = self.k();
        for c in [a, b] {
            if c >= k {
                return Err(GraphError::ColourOutOfRange { colour: c, k });
            }
        }
        if self.matrix[a][b] {
            return Err(GraphError::ParallelEdge(a.min(b), a.max(b)));
        }
        self.matrix[a][b] = true;
        self.matrix[b][a] = true;
        for (x, y) in [(a, b), (b, a)] {
            if let Err(pos) = self.neighbours[x].binary_search(&y) {
                self.neighbours[x].insert(pos, y);
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn colour_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.matrix[a][b]
    }

    /// `N_H(c)`, containing `c` itself iff `c` carries a loop.
    pub fn neighbours(&self, c: usize) -> &[usize] {
        &self.neighbours[c]
    }

    pub fn has_loop(&self, c: usize) -> bool {
        self.matrix[c][c]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.k()).flat_map(move |a| self.neighbours[a].iter().filter(move |&&b| a <= b).map(move |&b| (a, b)))
    }

    /// First pair of distinct colours sharing two or more common neighbours,
    /// together with the shared neighbourhood.
    pub fn common_neighbourhood_violation(&self) -> Option<(usize, usize, Vec<usize>)> {
        for a in 0..self.k() {
            for b in a + 1..self.k() {
                let shared: Vec<usize> = self.neighbours[a].iter().copied().filter(|&c| self.matrix[b][c]).collect();
                if shared.len() > 1 {
                    return Some((a, b, shared));
                }
            }
        }
        None
    }
}

/// True iff every two distinct colours share at most one common neighbour.
/// For loopless `H` this is the same as `H` having no 4-cycle subgraph.
pub fn check_common_neighbourhood_condition(h: &TargetGraph) -> bool {
    h.common_neighbourhood_violation().is_none()
}

/// Per-vertex allowed colours `L_v`, each list sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<usize>>,
}

impl ListAssignment {
    pub fn new(mut lists: Vec<Vec<usize>>, k: usize) -> Result<Self, GraphError> {
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            if let Some(&c) = list.iter().find(|&&c| c >= k) {
                return Err(GraphError::ColourOutOfRange { colour: c, k });
            }
        }
        Ok(ListAssignment { lists })
    }

    pub fn full(n: usize, k: usize) -> Self {
        ListAssignment { lists: vec![(0..k).collect(); n] }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn get(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub(crate) fn set(&mut self, v: usize, list: Vec<usize>) {
        self.lists[v] = list;
    }

    /// Largest colour id mentioned, if any.
    pub fn max_colour(&self) -> Option<usize> {
        self.lists.iter().filter_map(|l| l.last().copied()).max()
    }
}

/// Vertex/colour weights `w_{v,h}`; absent pairs weigh one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightTable {
    weights: BTreeMap<(usize, usize), BigRational>,
}

impl WeightTable {
    pub fn new() -> Self {
        WeightTable::default()
    }

    pub fn set(&mut self, v: usize, c: usize, w: BigRational) {
        if w.is_one() {
            self.weights.remove(&(v, c));
        } else {
            self.weights.insert((v, c), w);
        }
    }

    pub fn get(&self, v: usize, c: usize) -> BigRational {
        self.weights.get(&(v, c)).cloned().unwrap_or_else(BigRational::one)
    }

    pub fn get_ref(&self, v: usize, c: usize) -> Option<&BigRational> {
        self.weights.get(&(v, c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.weights.iter()
    }

    fn reindex(&self, old_to_new: &[Option<usize>]) -> WeightTable {
        let weights = self
            .weights
            .iter()
            .filter_map(|(&(v, c), w)| old_to_new.get(v).copied().flatten().map(|nv| ((nv, c), w.clone())))
            .collect();
        WeightTable { weights }
    }
}

/// A list `H`-colouring instance `(G, L, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: SimpleGraph,
    pub lists: ListAssignment,
    pub weights: WeightTable,
}

impl Instance {
    pub fn new(graph: SimpleGraph, lists: ListAssignment, weights: WeightTable) -> Result<Self, GraphError> {
        if lists.len() != graph.n() {
            return Err(GraphError::ListLengthMismatch { got: lists.len(), expected: graph.n() });
        }
        if let Some(&(v, _)) = weights.weights.keys().find(|&&(v, _)| v >= graph.n()) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: graph.n() });
        }
        Ok(Instance { graph, lists, weights })
    }

    /// Full lists over `k` colours and unit weights.
    pub fn unweighted(graph: SimpleGraph, k: usize) -> Self {
        let lists = ListAssignment::full(graph.n(), k);
        Instance { graph, lists, weights: WeightTable::new() }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `Σ_v |L_v|`.
    pub fn weight(&self) -> usize {
        self.lists.as_slice().iter().map(Vec::len).sum()
    }

    /// Every list holds at least two colours.
    pub fn is_reduced(&self) -> bool {
        self.lists.as_slice().iter().all(|l| l.len() >= 2)
    }

    /// `G - v` with lists and weights carried over. Remaining vertices keep their
    /// relative order; the map sends old ids to new ids (`None` for `v`).
    pub fn delete_vertex(&self, v: usize) -> Result<(Instance, Vec<Option<usize>>), GraphError> {
        let n = self.n();
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
        let keep: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        Ok(self.restrict(&keep))
    }

    /// The sub-instance induced by `keep`.
    pub fn restrict(&self, keep: &[usize]) -> (Instance, Vec<Option<usize>>) {
        let (graph, old_to_new) = self.graph.induced_subgraph(keep);
        let mut lists = vec![Vec::new(); graph.n()];
        for (old, new) in old_to_new.iter().enumerate() {
            if let Some(new) = *new {
                lists[new] = self.lists.get(old).to_vec();
            }
        }
        let inst = Instance { graph, lists: ListAssignment { lists }, weights: self.weights.reindex(&old_to_new) };
        (inst, old_to_new)
    }
}
