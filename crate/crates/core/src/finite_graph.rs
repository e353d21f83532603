//! Cycle decompositions of balanced weighted digraphs and the
//! Birkhoff–von Neumann decomposition of bistochastic weights.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact_lp::{Exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph is not balanced at vertices {}", .violators.join(", "))]
    NotBalanced { violators: Vec<String> },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("self-loop at `{0}` in a graph without self-loops")]
    SelfLoop(String),
    #[error("weight of edge {0} -> {1} must be positive")]
    NonPositiveWeight(String, String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("weights are not bistochastic")]
    NotBistochastic,
    #[error("positive support has no perfect matching")]
    NoPerfectMatching,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("matrix is not square")]
    NotSquare,
}

/// Directed graph with positive rational weights on ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    weights: BTreeMap<(usize, usize), Rational>,
    self_loops: bool,
}

impl Default for WeightedDigraph {
    fn default() -> Self {
        Self::new()
    }
}

impl WeightedDigraph {
    pub fn new() -> Self {
        Self {
            labels: Vec::new(),
            index: HashMap::new(),
            weights: BTreeMap::new(),
            self_loops: false,
        }
    }

    /// A graph that accepts self-loops, as needed for bistochastic weights.
    pub fn with_self_loops() -> Self {
        Self {
            self_loops: true,
            ..Self::new()
        }
    }

    /// Weights from a square matrix; vertices are labelled `0..n`, self-loops
    /// allowed, zero entries skipped.
    pub fn from_matrix(matrix: &[Vec<Rational>]) -> Result<Self, GraphError> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotSquare);
        }
        let mut g = Self::with_self_loops();
        for i in 0..n {
            g.add_vertex(&i.to_string());
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                if !w.is_zero() {
                    g.set_weight(i, j, w.clone())?;
                }
            }
        }
        Ok(g)
    }

    pub fn allows_self_loops(&self) -> bool {
        self.self_loops
    }

    /// Id of `label`, inserting it if new.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Add an edge by label; repeated edges are rejected.
    pub fn add_edge(&mut self, from: &str, to: &str, weight: Rational) -> Result<(), GraphError> {
        let u = self.add_vertex(from);
        let v = self.add_vertex(to);
        if self.weights.contains_key(&(u, v)) {
            return Err(GraphError::DuplicateEdge(from.into(), to.into()));
        }
        self.set_weight(u, v, weight)
    }

    /// Set the weight of `(u, v)` by id. A zero weight removes the edge.
    pub fn set_weight(&mut self, u: usize, v: usize, weight: Rational) -> Result<(), GraphError> {
        assert!(u < self.labels.len() && v < self.labels.len(), "vertex id out of range");
        if u == v && !self.self_loops {
            return Err(GraphError::SelfLoop(self.labels[u].clone()));
        }
        if weight.is_negative() {
            return Err(GraphError::NonPositiveWeight(self.labels[u].clone(), self.labels[v].clone()));
        }
        if weight.is_zero() {
            self.weights.remove(&(u, v));
        } else {
            self.weights.insert((u, v), weight);
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn weight(&self, u: usize, v: usize) -> Rational {
        self.weights.get(&(u, v)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.weights
    }

    pub fn out_weight(&self, u: usize) -> Rational {
        self.weights.range((u, 0)..(u + 1, 0)).map(|(_, w)| w).sum()
    }

    pub fn in_weight(&self, v: usize) -> Rational {
        self.weights.iter().filter(|((_, t), _)| *t == v).map(|(_, w)| w).sum()
    }

    fn out_edges(&self, u: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.weights.range((u, 0)..(u + 1, 0)).map(|(&(_, v), w)| (v, w))
    }
}

/// A cycle of distinct vertices, stored with its smallest vertex id first.
/// A single vertex denotes a self-loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphCycle {
    vertices: Vec<usize>,
}

impl GraphCycle {
    pub fn new(vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::InvalidCycle("empty vertex sequence".into()));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidCycle("repeated vertex".into()));
        }
        let start = (0..vertices.len()).min_by_key(|&i| vertices[i]).unwrap_or(0);
        let mut vertices = vertices;
        vertices.rotate_left(start);
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Consecutive pairs including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Render with vertex labels from `g`.
    pub fn display<'a>(&'a self, g: &'a WeightedDigraph) -> impl fmt::Display + 'a {
        CycleDisplay { cycle: self, graph: g }
    }
}

struct CycleDisplay<'a> {
    cycle: &'a GraphCycle,
    graph: &'a WeightedDigraph,
}

impl fmt::Display for CycleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.cycle.vertices.iter().map(|&v| self.graph.label(v)).collect();
        write!(f, "({})", labels.join(" "))
    }
}

/// `r = Σ weight · r^[C]`, where `r^[C]` is the indicator of the cycle's edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphDecomposition {
    pub terms: Vec<(GraphCycle, Rational)>,
}

impl GraphDecomposition {
    pub fn reconstruct(&self) -> BTreeMap<(usize, usize), Rational> {
        let mut out: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (cycle, w) in &self.terms {
            for e in cycle.edges() {
                *out.entry(e).or_insert_with(Rational::zero) += w;
            }
        }
        out.retain(|_, w| !w.is_zero());
        out
    }

    /// Exact comparison of the reconstruction with the weights of `g`, and
    /// positivity of every term.
    pub fn verify(&self, g: &WeightedDigraph) -> bool {
        self.terms.iter().all(|(_, w)| w.is_positive()) && self.reconstruct() == *g.edges()
    }

    /// Merge terms with the same cycle.
    pub fn merged(self) -> Self {
        let mut acc: BTreeMap<GraphCycle, Rational> = BTreeMap::new();
        for (c, w) in self.terms {
            *acc.entry(c).or_insert_with(Rational::zero) += w;
        }
        Self {
            terms: acc.into_iter().collect(),
        }
    }
}

/// Result of the in/out weight comparison at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub violators: Vec<usize>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.violators.is_empty()
    }
}

pub fn is_balanced_graph(g: &WeightedDigraph) -> BalanceReport {
    let n = g.num_vertices();
    let mut net = vec![Rational::zero(); n];
    for (&(u, v), w) in g.edges() {
        net[u] += w;
        net[v] -= w;
    }
    BalanceReport {
        violators: (0..n).filter(|&v| !net[v].is_zero()).collect(),
    }
}

fn not_balanced(g: &WeightedDigraph, report: &BalanceReport) -> GraphError {
    GraphError::NotBalanced {
        violators: report.violators.iter().map(|&v| g.label(v).to_string()).collect(),
    }
}

/// Greedy walk from the globally lightest edge: every edge weighs at least
/// that much, and balance guarantees an exit from every vertex entered, so the
/// walk closes a cycle within `|V|` steps. Each step follows the lightest
/// outgoing edge, ties going to the least target id.
pub fn extract_min_cycle(g: &WeightedDigraph) -> Result<(GraphCycle, Rational), GraphError> {
    let Some((&(u, v), _)) = g.edges().iter().min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0))) else {
        return Err(GraphError::EmptyGraph);
    };
    let mut path = vec![u];
    let mut position: HashMap<usize, usize> = HashMap::from([(u, 0)]);
    let mut current = v;
    let start = loop {
        if let Some(&at) = position.get(&current) {
            break at;
        }
        position.insert(current, path.len());
        path.push(current);
        let Some((next, _)) = g.out_edges(current).min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0))) else {
            return Err(GraphError::NotBalanced {
                violators: vec![g.label(current).to_string()],
            });
        };
        current = next;
    };
    let cycle = GraphCycle::new(path.split_off(start))?;
    let m = cycle
        .edges()
        .map(|(a, b)| g.weight(a, b))
        .min()
        .expect("cycle has edges");
    Ok((cycle, m))
}

/// Decompose a balanced graph into at most `|E|` weighted cycles.
pub fn decompose_graph(g: &WeightedDigraph) -> Result<GraphDecomposition, GraphError> {
    let report = is_balanced_graph(g);
    if !report.is_balanced() {
        return Err(not_balanced(g, &report));
    }
    let mut residual = g.clone();
    let mut terms = Vec::new();
    while residual.num_edges() > 0 {
        let (cycle, m) = extract_min_cycle(&residual)?;
        for (a, b) in cycle.edges() {
            let w = residual.weight(a, b) - &m;
            residual.set_weight(a, b, w)?;
        }
        terms.push((cycle, m));
    }
    Ok(GraphDecomposition { terms })
}

/// Every row and column sums to exactly one.
pub fn is_bistochastic(g: &WeightedDigraph) -> bool {
    let n = g.num_vertices();
    let mut rows = vec![Rational::zero(); n];
    let mut cols = vec![Rational::zero(); n];
    for (&(u, v), w) in g.edges() {
        rows[u] += w;
        cols[v] += w;
    }
    rows.iter().chain(&cols).all(One::is_one)
}

/// A bijection `i -> image[i]` on vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }
}

/// Perfect matching rows -> columns on the positive support, or `None`.
fn hopcroft_karp(n: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    const FREE: usize = usize::MAX;
    let mut match_row = vec![FREE; n];
    let mut match_col = vec![FREE; n];
    let mut dist = vec![0usize; n];

    fn bfs(adj: &[Vec<usize>], match_row: &[usize], match_col: &[usize], dist: &mut [usize]) -> bool {
        let mut queue = VecDeque::new();
        for (u, d) in dist.iter_mut().enumerate() {
            if match_row[u] == FREE {
                *d = 0;
                queue.push_back(u);
            } else {
                *d = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_col[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(u: usize, adj: &[Vec<usize>], match_row: &mut [usize], match_col: &mut [usize], dist: &mut [usize]) -> bool {
        for &v in &adj[u] {
            let w = match_col[v];
            if w == FREE || (dist[w] == dist[u] + 1 && dfs(w, adj, match_row, match_col, dist)) {
                match_row[u] = v;
                match_col[v] = u;
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }

    let mut size = 0;
    while bfs(adj, &match_row, &match_col, &mut dist) {
        for u in 0..n {
            if match_row[u] == FREE && dfs(u, adj, &mut match_row, &mut match_col, &mut dist) {
                size += 1;
            }
        }
    }
    (size == n).then_some(match_row)
}

/// Peel permutation matrices off a bistochastic weight until nothing is
/// left. Each step zeroes at least one entry, so the residual moves to a
/// strictly smaller face of the Birkhoff polytope and at most `(n−1)² + 1`
/// permutations are produced.
pub fn birkhoff_decompose(g: &WeightedDigraph) -> Result<Vec<(Permutation, Rational)>, GraphError> {
    if !is_bistochastic(g) {
        return Err(GraphError::NotBistochastic);
    }
    let n = g.num_vertices();
    let mut residual: BTreeMap<(usize, usize), Rational> = g.edges().clone();
    let mut out = Vec::new();
    while !residual.is_empty() {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in residual.keys() {
            adj[u].push(v);
        }
        let matching = hopcroft_karp(n, &adj).ok_or(GraphError::NoPerfectMatching)?;
        let weight = (0..n)
            .map(|u| residual[&(u, matching[u])].clone())
            .min()
            .expect("n > 0 when residual is nonempty");
        for (u, &v) in matching.iter().enumerate() {
            let entry = residual.get_mut(&(u, v)).expect("matched entry is positive");
            *entry -= &weight;
            if entry.is_zero() {
                residual.remove(&(u, v));
            }
        }
        out.push((Permutation(matching), weight));
    }
    Ok(out)
}

/// Disjoint cycles of a permutation. Fixed points are returned separately.
pub fn permutation_to_cycles(pi: &Permutation) -> (Vec<GraphCycle>, Vec<usize>) {
    let n = pi.0.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut fixed = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        if pi.0[start] == start {
            seen[start] = true;
            fixed.push(start);
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = pi.0[x];
        }
        cycles.push(GraphCycle::new(orbit).expect("orbit vertices are distinct"));
    }
    (cycles, fixed)
}

/// Birkhoff decomposition followed by the cycle split of each permutation.
/// Fixed points appear as single-vertex cycles standing for self-loops;
/// identical cycles from different permutations are merged.
pub fn birkhoff_cycle_decomposition(g: &WeightedDigraph) -> Result<GraphDecomposition, GraphError> {
    let mut terms = Vec::new();
    for (pi, w) in birkhoff_decompose(g)? {
        let (cycles, fixed) = permutation_to_cycles(&pi);
        for c in cycles {
            terms.push((c, w.clone()));
        }
        for x in fixed {
            terms.push((GraphCycle::new(vec![x])?, w.clone()));
        }
    }
    Ok(GraphDecomposition { terms }.merged())
}

/// `label weight` lines for human-readable reports.
pub fn format_decomposition(dec: &GraphDecomposition, g: &WeightedDigraph) -> String {
    dec.terms
        .iter()
        .map(|(c, w)| format!("{} {}\n", c.display(g), Exact(w)))
        .collect()
}
