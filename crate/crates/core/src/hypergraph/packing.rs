//! Packing two edge-disjoint spanning trees via matroid partition.
//!
//! Two forests are grown edge by edge. An edge that cannot be placed directly
//! triggers a breadth-first search in the exchange graph: from edge `x` there
//! is an arc to every edge `y` of forest `i` lying on the cycle that `x`
//! closes in forest `i`. A shortest path ending at an edge that some forest
//! accepts outright is then applied as a chain of swaps.

use std::collections::VecDeque;

use super::Hypergraph;

/// Returns two edge-index lists forming edge-disjoint spanning trees, if any.
pub fn two_tree_packing(g: &Hypergraph) -> Option<(Vec<usize>, Vec<usize>)> {
    if g.k() != 2 || !g.is_connected() {
        return None;
    }
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e[0], e[1])).collect();
    if edges.len() < 2 * (n - 1) {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; edges.len()];

    for start in 0..edges.len() {
        let (u, v) = edges[start];
        if u == v {
            continue;
        }
        augment(n, &edges, &mut owner, start);
    }

    let f0: Vec<usize> = (0..edges.len()).filter(|&e| owner[e] == Some(0)).collect();
    let f1: Vec<usize> = (0..edges.len()).filter(|&e| owner[e] == Some(1)).collect();
    (f0.len() == n - 1 && f1.len() == n - 1).then_some((f0, f1))
}

pub fn has_two_edge_disjoint_spanning_trees(g: &Hypergraph) -> bool {
    two_tree_packing(g).is_some()
}

fn augment(n: usize, edges: &[(usize, usize)], owner: &mut [Option<usize>], start: usize) -> bool {
    let forests: [Vec<usize>; 2] = [0, 1].map(|i| (0..edges.len()).filter(|&e| owner[e] == Some(i)).collect());
    let adjacency: Vec<Vec<Vec<(usize, usize)>>> = forests
        .iter()
        .map(|f| {
            let mut adj = vec![Vec::new(); n];
            for &e in f {
                let (a, b) = edges[e];
                adj[a].push((b, e));
                adj[b].push((a, e));
            }
            adj
        })
        .collect();

    // parent[y] = (x, i): y leaves forest i and x takes its place.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; edges.len()];
    let mut visited = vec![false; edges.len()];
    visited[start] = true;
    let mut queue = VecDeque::from([start]);

    while let Some(x) = queue.pop_front() {
        let (a, b) = edges[x];
        for i in 0..2 {
            if owner[x] == Some(i) {
                continue;
            }
            match forest_path(&adjacency[i], a, b) {
                None => {
                    apply(owner, &parent, x, i);
                    return true;
                }
                Some(path) => {
                    for y in path {
                        if !visited[y] {
                            visited[y] = true;
                            parent[y] = Some((x, i));
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
    }
    false
}

fn apply(owner: &mut [Option<usize>], parent: &[Option<(usize, usize)>], sink: usize, forest: usize) {
    let mut cur = sink;
    let mut target = forest;
    loop {
        let next = parent[cur];
        owner[cur] = Some(target);
        match next {
            Some((prev, i)) => {
                cur = prev;
                target = i;
            }
            None => break,
        }
    }
}

/// Edge ids on the forest path between `a` and `b`, or `None` if disconnected.
fn forest_path(adj: &[Vec<(usize, usize)>], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut via: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            let mut path = Vec::new();
            let mut c = b;
            while let Some((p, e)) = via[c] {
                path.push(e);
                c = p;
            }
            return Some(path);
        }
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                via[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    None
}

/// True when the edge subset is a spanning tree on `n` vertices.
#[cfg(test)]
pub(crate) fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut uf = super::UnionFind::new(n);
    edges.iter().all(|&(a, b)| uf.union(a, b))
}
