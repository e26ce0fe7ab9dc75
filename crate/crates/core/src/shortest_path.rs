//! Dijkstra on undirected multigraphs with nonnegative edge weights.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on vertex id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest `source`–`sink` path. `edges[k] = (u, v)` is undirected with
/// weight `weights[k] >= 0`; parallel edges are fine.
///
/// Returns the length and the edge ids from source to sink, or `None` when
/// the sink is unreachable. Exact distance ties keep the predecessor edge
/// with the smaller id.
pub fn shortest_path(
    num_vertices: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
    source: usize,
    sink: usize,
) -> Option<(f64, Vec<usize>)> {
    debug_assert_eq!(edges.len(), weights.len());
    let mut adjacent: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_vertices];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adjacent[u].push((v, id));
        adjacent[v].push((u, id));
    }

    let mut dist = vec![f64::INFINITY; num_vertices];
    let mut via: Vec<Option<usize>> = vec![None; num_vertices];
    let mut done = vec![false; num_vertices];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        vertex: source,
    });

    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == sink {
            break;
        }
        for &(v, id) in &adjacent[u] {
            if done[v] {
                continue;
            }
            let candidate = d + weights[id];
            let better = candidate < dist[v] || (candidate == dist[v] && via[v].is_some_and(|p| id < p));
            if better {
                dist[v] = candidate;
                via[v] = Some(id);
                heap.push(Entry {
                    dist: candidate,
                    vertex: v,
                });
            }
        }
    }

    if !dist[sink].is_finite() {
        return None;
    }
    let mut path = Vec::new();
    let mut at = sink;
    while at != source {
        let id = via[at]?;
        path.push(id);
        let (u, v) = edges[id];
        at = if u == at { v } else { u };
    }
    path.reverse();
    Some((dist[sink], path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_cheaper_parallel_edge() {
        let edges = [(0, 1), (0, 1), (1, 2)];
        let (d, path) = shortest_path(3, &edges, &[2.0, 1.0, 1.0], 0, 2).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(path, vec![1, 2]);
    }

    #[test]
    fn undirected_traversal() {
        // sink reachable only by walking an edge "backwards"
        let edges = [(1, 0), (2, 1)];
        let (d, path) = shortest_path(3, &edges, &[1.0, 1.0], 0, 2).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(path, vec![0, 1]);
    }

    #[test]
    fn exact_tie_prefers_smaller_edge_id() {
        let edges = [(0, 1), (0, 1)];
        let (_, path) = shortest_path(2, &edges, &[1.0, 1.0], 0, 1).unwrap();
        assert_eq!(path, vec![0]);
    }

    #[test]
    fn unreachable() {
        assert!(shortest_path(3, &[(0, 1)], &[1.0], 0, 2).is_none());
    }
}
