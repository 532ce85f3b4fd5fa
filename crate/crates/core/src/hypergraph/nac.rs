//! NAC-colourings: surjective red/blue edge colourings in which every cycle is
//! either monochromatic or has at least two edges of each colour.

use std::collections::HashSet;

use serde::Serialize;

use super::Hypergraph;
use crate::error::{Error, Result};

const MAX_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NacColouring {
    /// `red[i]` is the colour of the i-th edge in canonical order.
    pub red: Vec<bool>,
}

/// All simple cycles of a simple graph, each as a sorted list of edge indices.
pub fn simple_cycles(g: &Hypergraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if e[0] != e[1] {
            adj[e[0]].push((e[1], i));
            adj[e[1]].push((e[0], i));
        }
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let mut path_edges = Vec::new();
        dfs(start, start, &adj, &mut on_path, &mut path_edges, &mut seen, &mut out);
    }
    out.sort();
    out
}

fn dfs(
    start: usize,
    u: usize,
    adj: &[Vec<(usize, usize)>],
    on_path: &mut [bool],
    path_edges: &mut Vec<usize>,
    seen: &mut HashSet<Vec<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    for &(w, e) in &adj[u] {
        if w == start && path_edges.len() >= 2 && path_edges.last() != Some(&e) {
            let mut cyc = path_edges.clone();
            cyc.push(e);
            cyc.sort_unstable();
            if seen.insert(cyc.clone()) {
                out.push(cyc);
            }
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path_edges.push(e);
            dfs(start, w, adj, on_path, path_edges, seen, out);
            path_edges.pop();
            on_path[w] = false;
        }
    }
}

fn cycle_ok(red: usize, len: usize) -> bool {
    let blue = len - red;
    red == 0 || blue == 0 || (red >= 2 && blue >= 2)
}

/// Checks surjectivity and the cycle condition on every simple cycle.
pub fn is_nac_colouring(g: &Hypergraph, colouring: &NacColouring) -> bool {
    if colouring.red.len() != g.edge_count() {
        return false;
    }
    let reds = colouring.red.iter().filter(|&&r| r).count();
    if reds == 0 || reds == colouring.red.len() {
        return false;
    }
    simple_cycles(g)
        .iter()
        .all(|c| cycle_ok(c.iter().filter(|&&e| colouring.red[e]).count(), c.len()))
}

/// Exhaustive search over colourings, up to 20 edges.
pub fn find_nac_colouring(g: &Hypergraph) -> Result<Option<NacColouring>> {
    if g.k() != 2 || !g.is_simple() {
        return Err(Error::InvalidGraph("NAC-colourings are defined for simple graphs".into()));
    }
    let m = g.edge_count();
    if m > MAX_EDGES {
        return Err(Error::SearchTooLarge(format!("{m} edges; the exhaustive search handles at most {MAX_EDGES}")));
    }
    if m < 2 {
        return Ok(None);
    }
    let cycles: Vec<(u32, usize)> = simple_cycles(g)
        .into_iter()
        .map(|c| (c.iter().fold(0u32, |acc, &e| acc | 1 << e), c.len()))
        .collect();
    let full: u32 = (1u32 << m) - 1;
    // Swapping colours preserves the condition, so edge 0 is fixed red.
    let found = (0u32..1 << (m - 1))
        .map(|rest| 1 | rest << 1)
        .filter(|&mask| mask != full)
        .find(|&mask| cycles.iter().all(|&(c, len)| cycle_ok((mask & c).count_ones() as usize, len)));
    Ok(found.map(|mask| NacColouring { red: (0..m).map(|i| mask >> i & 1 == 1).collect() }))
}
