use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected tree on nodes `0..n_nodes` rooted at the leader, node 0.
///
/// Edges are oriented by breadth-first search from the leader: each follower
/// has exactly one parent and any number of children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologySpec", into = "TopologySpec")]
pub struct Topology {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

/// Serialized form of a [`Topology`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TryFrom<TopologySpec> for Topology {
    type Error = Error;
    fn try_from(spec: TopologySpec) -> Result<Self> {
        Topology::from_edges(spec.n_nodes, spec.edges)
    }
}

impl From<Topology> for TopologySpec {
    fn from(t: Topology) -> Self {
        Self {
            n_nodes: t.n_nodes,
            edges: t.edges,
        }
    }
}

impl Topology {
    pub fn from_edges(n_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::InvalidTopology(format!(
                "need a leader and at least one follower, got {n_nodes} nodes"
            )));
        }
        let mut adj = vec![Vec::new(); n_nodes];
        for &(a, b) in &edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::InvalidTopology(format!(
                    "edge ({a}, {b}) references a node outside 0..{n_nodes}"
                )));
            }
            if a == b {
                return Err(Error::CyclicTopology);
            }
            adj[a].push(b);
            adj[b].push(a);
        }

        let mut parent = vec![None; n_nodes];
        let mut children = vec![Vec::new(); n_nodes];
        let mut seen = vec![false; n_nodes];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            let mut skipped_parent = false;
            for &v in &adj[u] {
                if Some(v) == parent[u] && !skipped_parent {
                    skipped_parent = true;
                    continue;
                }
                if seen[v] {
                    return Err(Error::CyclicTopology);
                }
                seen[v] = true;
                parent[v] = Some(u);
                children[u].push(v);
                queue.push_back(v);
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::DisconnectedTopology(missing));
        }
        Ok(Self {
            n_nodes,
            edges,
            parent,
            children,
        })
    }

    /// Leader followed by `n_followers` agents in a chain.
    pub fn path(n_followers: usize) -> Result<Self> {
        Self::from_edges(n_followers + 1, (0..n_followers).map(|i| (i, i + 1)).collect())
    }

    /// Adds a chain of `len` new agents hanging off `at`.
    pub fn with_chain(self, at: usize, len: usize) -> Result<Self> {
        let mut edges = self.edges;
        let mut prev = at;
        let mut n = self.n_nodes;
        for _ in 0..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        Self::from_edges(n, edges)
    }

    /// Adds `count` new leaf agents adjacent to `at`.
    pub fn with_leaves(self, at: usize, count: usize) -> Result<Self> {
        let mut edges = self.edges;
        let n = self.n_nodes;
        edges.extend((0..count).map(|k| (at, n + k)));
        Self::from_edges(n + count, edges)
    }

    /// Adds a complete binary tree of the given depth below `at`
    /// (`2 + 4 + ... + 2^depth` new agents).
    pub fn with_binary_tree(self, at: usize, depth: usize) -> Result<Self> {
        let mut edges = self.edges;
        let mut n = self.n_nodes;
        let mut level = vec![at];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(2 * level.len());
            for &u in &level {
                for _ in 0..2 {
                    edges.push((u, n));
                    next.push(n);
                    n += 1;
                }
            }
            level = next;
        }
        Self::from_edges(n, edges)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of followers (every node except the leader).
    pub fn n_agents(&self) -> usize {
        self.n_nodes - 1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Whether the graph is the plain chain `0 - 1 - ... - N`.
    pub fn is_path(&self) -> bool {
        (1..self.n_nodes).all(|v| self.parent[v] == Some(v - 1))
    }
}
