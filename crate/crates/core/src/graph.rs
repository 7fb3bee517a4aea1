//! The symmetrized nonzero pattern `X_L` and its components.

use std::collections::VecDeque;

use crate::bifunction::BiFunction;
use crate::scalar::Tolerance;

/// Undirected graph on the points of `L`: `x ~ y` for `x != y` when
/// `L(x, y) != 0` or `L(y, x) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphView {
    pub adjacency: Vec<Vec<usize>>,
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Minimum eccentricity of each component.
    pub radius: Vec<usize>,
}

impl GraphView {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// `max_i radius_i`, or 0 for the empty graph.
    pub fn max_radius(&self) -> usize {
        self.radius.iter().copied().max().unwrap_or(0)
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        bfs_distances(&self.adjacency, v)
    }
}

fn bfs_distances(adj: &[Vec<usize>], v: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[v] = Some(0);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap_or(0) + 1;
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn graph_view(l: &BiFunction, tol: Tolerance) -> GraphView {
    let n = l.size();
    let s = l.scale();
    let mut adjacency = vec![Vec::new(); n];
    for x in 0..n {
        for y in x + 1..n {
            if !tol.is_zero(l.get(x, y), s) || !tol.is_zero(l.get(y, x), s) {
                adjacency[x].push(y);
                adjacency[y].push(x);
            }
        }
    }
    for a in adjacency.iter_mut() {
        a.sort_unstable();
    }
    let mut component_of = vec![usize::MAX; n];
    let mut components = Vec::new();
    let mut radius = Vec::new();
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let dist = bfs_distances(&adjacency, start);
        let members: Vec<usize> = (0..n).filter(|&v| dist[v].is_some()).collect();
        for &v in &members {
            component_of[v] = id;
        }
        let r = members
            .iter()
            .map(|&z| bfs_distances(&adjacency, z).into_iter().flatten().max().unwrap_or(0))
            .min()
            .unwrap_or(0);
        components.push(members);
        radius.push(r);
    }
    GraphView { adjacency, components, component_of, radius }
}

/// Components of the bipartite graph with row nodes `0..n`, column nodes
/// `0..n` and an edge `row x -- column y` for each nonzero `L(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteComponents {
    pub row_component: Vec<usize>,
    pub col_component: Vec<usize>,
    pub count: usize,
}

pub fn bipartite_components(l: &BiFunction, tol: Tolerance) -> BipartiteComponents {
    let n = l.size();
    let s = l.scale();
    let mut adj = vec![Vec::new(); 2 * n];
    for x in 0..n {
        for y in 0..n {
            if !tol.is_zero(l.get(x, y), s) {
                adj[x].push(n + y);
                adj[n + y].push(x);
            }
        }
    }
    let mut comp = vec![usize::MAX; 2 * n];
    let mut count = 0;
    for start in 0..2 * n {
        if comp[start] != usize::MAX {
            continue;
        }
        for (v, d) in bfs_distances(&adj, start).into_iter().enumerate() {
            if d.is_some() {
                comp[v] = count;
            }
        }
        count += 1;
    }
    BipartiteComponents {
        row_component: comp[..n].to_vec(),
        col_component: comp[n..].to_vec(),
        count,
    }
}
