//! Finite simplicial graphs and the graph invariants used by the group theory:
//! cliques, complements, induced subgraphs, the opposite path length and the
//! named families (opposite paths, double graphs, circular clique graphs).

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A set of vertices, indexed by position in the owning graph.
pub type VertexSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A finite undirected graph without loops or multiple edges.
///
/// Vertices are opaque strings kept in lexicographic order; the index of a
/// vertex is its position in that order.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<FixedBitSet>,
}

/// An inclusion-maximal clique, stored as sorted vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique(pub Vec<usize>);

impl SimplicialGraph {
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (S, S)>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0].clone()));
            }
        }
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = names.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            let (u, v): (String, String) = (u.into(), v.into());
            let iu = *index.get(&u).ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let iv = *index.get(&v).ok_or(GraphError::UnknownVertex(v))?;
            if iu == iv {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[iu].insert(iv);
            adjacency[iv].insert(iu);
        }
        Ok(Self { names, index, adjacency })
    }

    /// Builds a graph from names and index pairs (names need not be sorted).
    fn from_index_edges(names: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let named: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| (names[a].clone(), names[b].clone()))
            .collect();
        Self::new(names, named).expect("generated graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require_index(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name).ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            for v in self.adjacency[u].ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn empty_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.vertex_count())
    }

    pub fn full_set(&self) -> VertexSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, GraphError> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.require_index(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<String> {
        set.ones().map(|v| self.names[v].clone()).collect()
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        let members: Vec<usize> = set.ones().collect();
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    /// The opposite graph: same vertices, `u ~ v` iff `u != v` and not adjacent here.
    pub fn complement(&self) -> Self {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.adjacent(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_index_edges(self.names.clone(), &edges)
    }

    pub fn induced_subgraph<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, GraphError> {
        let set = self.set_from_names(names)?;
        Ok(self.induced_by_set(&set))
    }

    /// Induced subgraph on a vertex set; keeps the original vertex names.
    pub fn induced_by_set(&self, set: &VertexSet) -> Self {
        let members: Vec<usize> = set.ones().collect();
        let names: Vec<String> = members.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Self::from_index_edges(names, &edges)
    }

    /// All inclusion-maximal cliques, sorted; Bron–Kerbosch with Tomita pivoting.
    pub fn maximal_cliques(&self) -> Vec<Clique> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut r = Vec::new();
        let mut p = self.full_set();
        let mut x = self.empty_set();
        self.bron_kerbosch(&mut r, &mut p, &mut x, &mut out);
        for c in &mut out {
            c.0.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        p: &mut FixedBitSet,
        x: &mut FixedBitSet,
        out: &mut Vec<Clique>,
    ) {
        if p.is_clear() {
            if x.is_clear() {
                out.push(Clique(r.clone()));
            }
            return;
        }
        // Pivot maximising |P ∩ N(u)| over u ∈ P ∪ X.
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| p.intersection(&self.adjacency[u]).count())
            .expect("P is nonempty");
        let mut candidates = p.clone();
        candidates.difference_with(&self.adjacency[pivot]);
        for v in candidates.ones() {
            let mut p_next = p.clone();
            p_next.intersect_with(&self.adjacency[v]);
            let mut x_next = x.clone();
            x_next.intersect_with(&self.adjacency[v]);
            r.push(v);
            self.bron_kerbosch(r, &mut p_next, &mut x_next, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    /// Δ(Γ): the largest `m` such that the opposite path Δ_m is an induced
    /// subgraph, or 0 for complete graphs.
    ///
    /// Δ_m is induced in Γ exactly when the path on `m + 1` vertices is induced
    /// in the complement, so this is a longest-induced-path search there.
    pub fn opposite_path_length(&self) -> Result<usize, GraphError> {
        if self.is_empty() {
            return Err(GraphError::Empty);
        }
        Ok(self.complement().longest_induced_path_edges())
    }

    /// Number of edges of a longest induced path.
    pub fn longest_induced_path_edges(&self) -> usize {
        let n = self.vertex_count();
        let mut best = 0;
        let mut path = Vec::with_capacity(n);
        for start in 0..n {
            // Vertices that may still extend the path: not on it and not adjacent
            // to any path vertex other than the current endpoint.
            let mut allowed = self.full_set();
            allowed.set(start, false);
            path.push(start);
            self.extend_induced_path(&mut path, &allowed, &mut best);
            path.pop();
            if best + 1 == n {
                break;
            }
        }
        best
    }

    fn extend_induced_path(&self, path: &mut Vec<usize>, allowed: &FixedBitSet, best: &mut usize) {
        let edges = path.len() - 1;
        if edges > *best {
            *best = edges;
        }
        let end = *path.last().expect("path is nonempty");
        let mut next = allowed.clone();
        next.intersect_with(&self.adjacency[end]);
        if next.is_clear() {
            return;
        }
        // Bound: every further vertex must come from `allowed`.
        if edges + allowed.count_ones(..) <= *best {
            return;
        }
        // After stepping to `v`, neighbours of the old endpoint become forbidden.
        let mut base = allowed.clone();
        base.difference_with(&self.adjacency[end]);
        for v in next.ones() {
            let mut allowed_next = base.clone();
            allowed_next.set(v, false);
            path.push(v);
            self.extend_induced_path(path, &allowed_next, best);
            path.pop();
        }
    }

    /// Vertices of the double graph are `a:v` and `b:v`; each edge `(v, w)`
    /// yields the four edges between `{a:v, b:v}` and `{a:w, b:w}`.
    pub fn double_graph(&self) -> Self {
        let mut names = Vec::with_capacity(2 * self.vertex_count());
        for v in &self.names {
            names.push(double_name('a', v));
            names.push(double_name('b', v));
        }
        let mut edges = Vec::with_capacity(4 * self.edge_count());
        for (u, v) in self.edges() {
            for x in [2 * u, 2 * u + 1] {
                for y in [2 * v, 2 * v + 1] {
                    edges.push((x, y));
                }
            }
        }
        Self::from_index_edges(names, &edges)
    }
}

pub fn double_name(side: char, vertex: &str) -> String {
    format!("{side}:{vertex}")
}

fn family_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// The opposite path Δ_m on `v0..vm` with `vi ~ vj` iff `|i - j| >= 2`.
pub fn opposite_path(m: usize) -> Result<SimplicialGraph, GraphError> {
    if m < 1 {
        return Err(GraphError::InvalidParameter("opposite path needs m >= 1".into()));
    }
    let mut edges = Vec::new();
    for i in 0..=m {
        for j in i + 2..=m {
            edges.push((i, j));
        }
    }
    Ok(SimplicialGraph::from_index_edges(family_names(m + 1), &edges))
}

pub fn complete_graph(n: usize) -> SimplicialGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    SimplicialGraph::from_index_edges(family_names(n), &edges)
}

pub fn edgeless_graph(n: usize) -> SimplicialGraph {
    SimplicialGraph::from_index_edges(family_names(n), &[])
}

pub fn cycle_graph(n: usize) -> Result<SimplicialGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter("cycle needs n >= 3".into()));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(SimplicialGraph::from_index_edges(family_names(n), &edges))
}

pub fn path_graph(n: usize) -> SimplicialGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    SimplicialGraph::from_index_edges(family_names(n), &edges)
}

/// Γ_{m,n}: `n` vertices on a circle, each window of `m` consecutive vertices a clique.
pub fn gamma_mn(m: usize, n: usize) -> Result<SimplicialGraph, GraphError> {
    if m < 2 || n < 2 * m {
        return Err(GraphError::InvalidParameter(format!(
            "gamma_mn needs m >= 2 and n >= 2m (got m = {m}, n = {n})"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (j - i).min(n - (j - i));
            if gap < m {
                edges.push((i, j));
            }
        }
    }
    Ok(SimplicialGraph::from_index_edges(family_names(n), &edges))
}

/// Erdős–Rényi graph on `v0..v{n-1}` from a ChaCha8 stream seeded with `seed`.
/// Pairs are sampled in the order `(0,1), (0,2), …, (n-2,n-1)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<SimplicialGraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_with(n, p, &mut rng)
}

pub fn random_graph_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<SimplicialGraph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!("edge probability {p} not in [0, 1]")));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(SimplicialGraph::from_index_edges(family_names(n), &edges))
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(&str, &str)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (self.name(u), self.name(v)))
            .collect();
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}
