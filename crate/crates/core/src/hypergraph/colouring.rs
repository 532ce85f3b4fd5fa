use std::collections::HashMap;
use std::hash::Hash;

use super::Hypergraph;
use crate::error::{Error, Result};

/// An edge colouring of a complete graph with dense colour ids `0..colour_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    graph: Hypergraph,
    colour_of: Vec<usize>,
    colour_count: usize,
}

impl EdgeColouring {
    /// `colour_of[i]` colours the i-th edge of `K_n` in canonical order.
    /// Arbitrary ids are relabelled densely in order of first appearance.
    pub fn new(n: usize, colour_of: &[usize]) -> Result<Self> {
        Self::from_labels(n, colour_of)
    }

    /// Builds a colouring from any hashable edge labels.
    pub fn from_labels<L: Eq + Hash + Clone>(n: usize, labels: &[L]) -> Result<Self> {
        let graph = Hypergraph::complete(n);
        if labels.len() != graph.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "{} colours given for {} edges",
                labels.len(),
                graph.edge_count()
            )));
        }
        let mut ids: HashMap<L, usize> = HashMap::new();
        let colour_of = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Ok(Self { graph, colour_of, colour_count: ids.len() })
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    pub fn colour_of(&self, edge: usize) -> usize {
        self.colour_of[edge]
    }

    pub fn colours(&self) -> &[usize] {
        &self.colour_of
    }

    /// Edges `(u, v)` of each colour class.
    pub fn classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut classes = vec![Vec::new(); self.colour_count];
        for (e, &c) in self.graph.edges().iter().zip(&self.colour_of) {
            classes[c].push((e[0], e[1]));
        }
        classes
    }

    /// Number of distinct colours on edges at each vertex.
    pub fn colour_degrees(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![vec![false; self.colour_count]; n];
        for (e, &c) in self.graph.edges().iter().zip(&self.colour_of) {
            seen[e[0]][c] = true;
            seen[e[1]][c] = true;
        }
        seen.iter().map(|s| s.iter().filter(|&&b| b).count()).collect()
    }
}
