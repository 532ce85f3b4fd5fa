//! k-uniform hypergraphs, including semisimple graphs with loops.
//!
//! Hyperedges are unordered multisets of vertices. They are stored sorted in
//! ascending vertex order, which is also the argument order used when an
//! anti-symmetric metric is evaluated on the edge.

mod colouring;
mod nac;
mod packing;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use colouring::EdgeColouring;
pub use nac::{find_nac_colouring, is_nac_colouring, simple_cycles, NacColouring};
pub use packing::{has_two_edge_disjoint_spanning_trees, two_tree_packing};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    k: usize,
    vertex_count: usize,
    edges: Vec<Vec<Vertex>>,
    simple: bool,
}

impl Hypergraph {
    /// Builds a hypergraph; edges are sorted internally and put in
    /// lexicographic order. Repeated hyperedges are rejected.
    pub fn new(k: usize, vertex_count: usize, edges: Vec<Vec<Vertex>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGraph("arity must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for mut e in edges {
            if e.len() != k {
                return Err(Error::InvalidGraph(format!(
                    "hyperedge {e:?} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count });
            }
            e.sort_unstable();
            if !seen.insert(e.clone()) {
                return Err(Error::InvalidGraph(format!("repeated hyperedge {e:?}")));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let simple = k == 2 && edges.iter().all(|e| e[0] != e[1]);
        Ok(Self { k, vertex_count, edges, simple })
    }

    /// A 2-uniform graph from an edge list. Loops are allowed (semisimple).
    pub fn graph(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        Self::new(2, vertex_count, edges.iter().map(|&(u, v)| vec![u, v]).collect())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| vec![u, v])).collect();
        Self::new(2, n, edges).expect("complete graph is valid")
    }

    /// Complete semisimple graph: every pair and every loop.
    pub fn complete_with_loops(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u..n).map(move |v| vec![u, v])).collect();
        Self::new(2, n, edges).expect("complete semisimple graph is valid")
    }

    /// Every k-multiset of `n` vertices as a hyperedge.
    pub fn complete_with_repetition(n: usize, k: usize) -> Self {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(v, n, k, cur, out);
                cur.pop();
            }
        }
        let mut edges = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut edges);
        Self::new(k, n, edges).expect("complete multiset hypergraph is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::graph(n, &edges).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Self::graph(n, &edges).expect("cycle on at least 3 vertices is valid")
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::graph(leaves + 1, &edges).expect("star is valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Self::graph(a + b, &edges).expect("complete bipartite graph is valid")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Hyperedges in canonical (lexicographic) order, each sorted ascending.
    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    /// True for 2-uniform graphs without loops.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// Maximum number of hyperedges incident to a single vertex. A vertex
    /// repeated inside one hyperedge counts once for it.
    pub fn max_degree(&self) -> Result<usize> {
        if self.vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut deg = vec![0usize; self.vertex_count];
        for e in &self.edges {
            let mut prev = None;
            for &v in e {
                if prev != Some(v) {
                    deg[v] += 1;
                }
                prev = Some(v);
            }
        }
        Ok(deg.into_iter().max().unwrap_or(0))
    }

    /// Adjacency lists of a 2-uniform graph (loops are skipped).
    pub fn neighbours(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in self.edges.iter().filter(|e| self.k == 2 && e[0] != e[1]) {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            for w in e.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        (1..self.vertex_count).all(|v| uf.same(0, v))
    }

    pub fn is_tree(&self) -> bool {
        self.k == 2 && self.simple && self.edges.len() + 1 == self.vertex_count && self.is_connected()
    }

    /// Adds a new vertex joined to `u` and `w`.
    pub fn zero_extension(&self, u: Vertex, w: Vertex) -> Result<Self> {
        if self.k != 2 {
            return Err(Error::InvalidGraph("0-extension needs a 2-uniform graph".into()));
        }
        for v in [u, w] {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count });
            }
        }
        if u == w {
            return Err(Error::InvalidArgument(
                "0-extension needs two distinct attachment vertices".into(),
            ));
        }
        let n = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.push(vec![u, n]);
        edges.push(vec![w, n]);
        Self::new(2, n + 1, edges)
    }

    /// Vertices grouped by shortest-path distance from `root` in a tree.
    pub fn depth_partition(&self, root: Vertex) -> Result<Vec<Vec<Vertex>>> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        if root >= self.vertex_count {
            return Err(Error::VertexOutOfRange { vertex: root, vertex_count: self.vertex_count });
        }
        let adj = self.neighbours();
        let mut depth = vec![usize::MAX; self.vertex_count];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut layers: Vec<Vec<Vertex>> = vec![vec![root]];
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    if layers.len() <= depth[v] {
                        layers.push(Vec::new());
                    }
                    layers[depth[v]].push(v);
                    queue.push_back(v);
                }
            }
        }
        for layer in &mut layers {
            layer.sort_unstable();
        }
        Ok(layers)
    }

    /// Parent of each vertex in the BFS tree rooted at `root` (`None` for the root).
    pub fn tree_parents(&self, root: Vertex) -> Result<Vec<Option<Vertex>>> {
        let layers = self.depth_partition(root)?;
        let adj = self.neighbours();
        let mut depth = vec![0usize; self.vertex_count];
        for (i, layer) in layers.iter().enumerate() {
            for &v in layer {
                depth[v] = i;
            }
        }
        Ok((0..self.vertex_count)
            .map(|v| {
                if v == root {
                    None
                } else {
                    adj[v].iter().copied().find(|&u| depth[u] + 1 == depth[v])
                }
            })
            .collect())
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            k: self.k,
            vertices: self.vertex_count,
            edges: self.edges.clone(),
            simple: Some(self.simple),
        }
    }
}

/// On-disk graph format: `{"k":2,"vertices":4,"edges":[[0,1],...],"simple":true}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub k: usize,
    pub vertices: usize,
    pub edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
}

impl TryFrom<GraphJson> for Hypergraph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        let h = Hypergraph::new(g.k, g.vertices, g.edges)?;
        if g.simple == Some(true) && !h.is_simple() {
            return Err(Error::InvalidGraph("`simple` is true but the graph has loops or k != 2".into()));
        }
        Ok(h)
    }
}

impl Hypergraph {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        g.try_into()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }

    pub(crate) fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}
