//! Small lab graphs: the 5-user/3-item case graph, random bipartite graphs
//! and random trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SparseAdjacency;

pub const CASE_USERS: usize = 5;
pub const CASE_ITEMS: usize = 3;

/// `(user, item)` edges of the case graph, users `u1..u5` at 0..5 and items
/// `i1..i3` at 0..3 on the item side.
pub const CASE_EDGES: [(usize, usize); 8] = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (4, 0), (4, 2)];

/// Node index of report label `k + 1`; labels 1→2→3→4 form a 3-hop path.
pub const CASE_LABELS: [usize; 8] = [0, 5, 1, 6, 2, 3, 7, 4];

pub fn build_case_graph() -> SparseAdjacency {
    SparseAdjacency::from_interactions(CASE_USERS, CASE_ITEMS, &CASE_EDGES).expect("static edges are in range")
}

/// Report label (1-based) of a case-graph node.
pub fn case_label(node: usize) -> Option<usize> {
    CASE_LABELS.iter().position(|&n| n == node).map(|k| k + 1)
}

/// `u3`, `i2`, ... for node indices of a graph with `user_count` users.
pub fn node_name(node: usize, user_count: usize) -> String {
    if node < user_count {
        format!("u{}", node + 1)
    } else {
        format!("i{}", node - user_count + 1)
    }
}

/// Bernoulli(`density`) edges between `users` and `items`; isolated nodes
/// are allowed.
pub fn random_bipartite(users: usize, items: usize, density: f64, seed: u64) -> Result<SparseAdjacency> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Config(format!("edge density must lie in [0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..users {
        for i in 0..items {
            if rng.gen_bool(density) {
                edges.push((u, i));
            }
        }
    }
    SparseAdjacency::from_interactions(users, items, &edges)
}

/// A random tree on `nodes` nodes whose depth from node 0 is at most
/// `max_depth`. Even depths are users, odd depths items.
pub fn random_tree(nodes: usize, max_depth: usize, seed: u64) -> Result<SparseAdjacency> {
    if nodes < 2 || max_depth == 0 {
        return Err(Error::Config("a random tree needs ≥ 2 nodes and depth ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut depth = vec![0usize];
    let mut parent = vec![usize::MAX];
    for _ in 1..nodes {
        let open: Vec<usize> = (0..depth.len()).filter(|&v| depth[v] < max_depth).collect();
        let p = open[rng.gen_range(0..open.len())];
        depth.push(depth[p] + 1);
        parent.push(p);
    }
    let mut side_index = vec![0usize; nodes];
    let (mut users, mut items) = (0, 0);
    for v in 0..nodes {
        if depth[v] % 2 == 0 {
            side_index[v] = users;
            users += 1;
        } else {
            side_index[v] = items;
            items += 1;
        }
    }
    let edges: Vec<(usize, usize)> = (1..nodes)
        .map(|v| {
            let p = parent[v];
            if depth[v] % 2 == 0 {
                (side_index[v], side_index[p])
            } else {
                (side_index[p], side_index[v])
            }
        })
        .collect();
    SparseAdjacency::from_interactions(users, items, &edges)
}

/// Unweighted hop distances from `source`; `None` for unreachable nodes.
pub fn hop_distances(adj: &SparseAdjacency, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.node_count()];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued nodes have a distance");
        for &w in adj.neighbours(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn is_connected(adj: &SparseAdjacency) -> bool {
    adj.node_count() == 0 || hop_distances(adj, 0).iter().all(Option::is_some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_graph_shape() {
        let adj = build_case_graph();
        assert_eq!(adj.node_count(), 8);
        assert_eq!((adj.user_count(), adj.item_count()), (5, 3));
        assert!(is_connected(&adj));
        let d = hop_distances(&adj, CASE_LABELS[0]);
        for (k, hops) in [(1, 1), (2, 2), (3, 3)] {
            assert_eq!(d[CASE_LABELS[k]], Some(hops));
        }
        for k in 0..3 {
            assert!(adj.neighbours(CASE_LABELS[k]).contains(&CASE_LABELS[k + 1]));
        }
        assert_eq!(case_label(7), Some(7));
        assert_eq!(node_name(6, 5), "i2");
    }

    #[test]
    fn trees_are_connected_and_acyclic() {
        for seed in 0..20 {
            let adj = random_tree(12, 4, seed).unwrap();
            assert_eq!(adj.nnz(), 2 * 11);
            assert!(is_connected(&adj));
            let d = hop_distances(&adj, 0);
            assert!(d.iter().all(|x| x.unwrap() <= 4));
        }
    }

    #[test]
    fn random_bipartite_is_seeded() {
        assert_eq!(
            random_bipartite(5, 6, 0.4, 3).unwrap(),
            random_bipartite(5, 6, 0.4, 3).unwrap()
        );
        assert!(random_bipartite(5, 6, 1.5, 3).is_err());
    }
}
