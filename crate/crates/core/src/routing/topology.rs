use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected connectivity graph plus a declared Hamiltonian order.
/// `order[p]` is the qutrit at position `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    adj: Vec<Vec<usize>>,
    order: Vec<usize>,
    pos: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    /// Defaults to 0..n when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

impl Topology {
    pub fn new(n: usize, edges: &[[usize; 2]], order: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTopology("no vertices".into()));
        }
        let mut adj = vec![BTreeSet::new(); n];
        for &[a, b] in edges {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), bound: n });
            }
            if a == b {
                return Err(Error::InvalidTopology(format!("self loop at {a}")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
        if order.len() != n {
            return Err(Error::NoHamiltonianPath(format!("order has {} entries for {n} vertices", order.len())));
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::NoHamiltonianPath(format!("order is not a permutation of 0..{n}")));
            }
            pos[v] = p;
        }
        for w in order.windows(2) {
            if !adj[w[0]].contains(&w[1]) {
                return Err(Error::NoHamiltonianPath(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(Topology { n, adj, order, pos })
    }

    /// Path 0 - 1 - … - n−1.
    pub fn line(n: usize) -> Result<Self> {
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
        Self::new(n, &edges, (0..n).collect())
    }

    /// rows × cols grid with snake labels, so 0..n is a Hamiltonian path.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let label = |r: usize, c: usize| r * cols + if r.is_multiple_of(2) { c } else { cols - 1 - c };
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push([label(r, c), label(r, c + 1)]);
                }
                if r + 1 < rows {
                    edges.push([label(r, c), label(r + 1, c)]);
                }
            }
        }
        Self::new(rows * cols, &edges, (0..rows * cols).collect())
    }

    pub fn from_json(j: &TopologyJson) -> Result<Self> {
        Self::new(j.n, &j.edges, j.order.clone().unwrap_or_else(|| (0..j.n).collect()))
    }

    pub fn to_json(&self) -> TopologyJson {
        TopologyJson { n: self.n, edges: self.edges(), order: Some(self.order.clone()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.n).flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| [a, b])).collect()
    }

    /// Same graph relabeled so that vertex p is the qutrit at position p.
    pub(crate) fn position_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|p| {
                let mut v: Vec<usize> = self.adj[self.order[p]].iter().map(|&u| self.pos[u]).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }
}

/// Rooted tree stored as parent links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTree {
    root: usize,
    parent: Vec<Option<usize>>,
    in_tree: Vec<bool>,
    terminals: Vec<usize>,
}

impl SteinerTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_tree.get(v).copied().unwrap_or(false)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(v).copied().flatten()
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&v| self.in_tree[v]).collect()
    }

    /// Tree vertices that are not terminals.
    pub fn steiner_points(&self) -> Vec<usize> {
        self.vertices().into_iter().filter(|v| !self.terminals.contains(v)).collect()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.vertices().into_iter().filter_map(|v| self.parent(v).map(|p| [p, v])).collect()
    }

    /// Vertices from the root down to `v`, both included.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn depth(&self, v: usize) -> usize {
        self.path_from_root(v).len() - 1
    }

    fn relabel(self, map: &[usize]) -> SteinerTree {
        let n = self.in_tree.len();
        let mut parent = vec![None; n];
        let mut in_tree = vec![false; n];
        for v in 0..n {
            in_tree[map[v]] = self.in_tree[v];
            parent[map[v]] = self.parent[v].map(|p| map[p]);
        }
        SteinerTree {
            root: map[self.root],
            parent,
            in_tree,
            terminals: self.terminals.iter().map(|&t| map[t]).collect(),
        }
    }
}

/// Shortest-path insertion heuristic restricted to vertices where `allowed`
/// holds: repeatedly attach the nearest unconnected terminal (smallest label
/// on ties) along a BFS shortest path.
pub(crate) fn steiner_in(
    adj: &[Vec<usize>],
    allowed: impl Fn(usize) -> bool,
    terminals: &[usize],
    root: usize,
) -> Result<SteinerTree> {
    let n = adj.len();
    let mut in_tree = vec![false; n];
    let mut parent = vec![None; n];
    in_tree[root] = true;
    let mut pending: BTreeSet<usize> = terminals.iter().copied().filter(|&t| t != root).collect();
    while !pending.is_empty() {
        let mut via = vec![None; n];
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for v in (0..n).filter(|&v| in_tree[v]) {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX && allowed(w) {
                    dist[w] = dist[u] + 1;
                    via[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        let t = pending.iter().copied().filter(|&t| dist[t] != usize::MAX).min_by_key(|&t| (dist[t], t)).ok_or_else(
            || {
                Error::DisconnectedTerminals(format!(
                    "terminal {} unreachable from {root}",
                    pending.iter().next().unwrap()
                ))
            },
        )?;
        let mut cur = t;
        while !in_tree[cur] {
            in_tree[cur] = true;
            parent[cur] = via[cur];
            cur = via[cur].expect("BFS path reaches the tree");
        }
        pending.retain(|&v| !in_tree[v]);
    }
    let mut terms: Vec<usize> = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    Ok(SteinerTree { root, parent, in_tree, terminals: terms })
}

/// BFS tree over strictly decreasing edges from `root`, pruned to terminal paths.
pub(crate) fn decreasing_in(adj: &[Vec<usize>], terminals: &[usize], root: usize) -> Result<SteinerTree> {
    let n = adj.len();
    if let Some(&t) = terminals.iter().find(|&&t| t > root) {
        return Err(Error::NoDecreasingTree(format!("terminal {t} lies above root {root}")));
    }
    let mut via = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if w < u && !seen[w] {
                seen[w] = true;
                via[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    let mut in_tree = vec![false; n];
    let mut parent = vec![None; n];
    in_tree[root] = true;
    for &t in terminals {
        if !seen[t] {
            return Err(Error::NoDecreasingTree(format!("terminal {t} has no decreasing path from {root}")));
        }
        let mut cur = t;
        while !in_tree[cur] {
            in_tree[cur] = true;
            parent[cur] = via[cur];
            cur = via[cur].unwrap();
        }
    }
    let mut terms: Vec<usize> = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    Ok(SteinerTree { root, parent, in_tree, terminals: terms })
}

fn check_vertices(topo: &Topology, terminals: &[usize], root: usize) -> Result<()> {
    for &v in terminals.iter().chain([&root]) {
        if v >= topo.n() {
            return Err(Error::IndexOutOfRange { index: v, bound: topo.n() });
        }
    }
    Ok(())
}

/// Steiner tree over the whole topology connecting `terminals` to `root`.
pub fn steiner_tree(topo: &Topology, terminals: &[usize], root: usize) -> Result<SteinerTree> {
    check_vertices(topo, terminals, root)?;
    steiner_in(&topo.adj, |_| true, terminals, root)
}

/// Steiner tree whose every edge goes from a higher position to a lower one
/// in the declared order. `root` must be the highest-positioned terminal.
pub fn decreasing_steiner_tree(topo: &Topology, terminals: &[usize], root: usize) -> Result<SteinerTree> {
    check_vertices(topo, terminals, root)?;
    let terms: Vec<usize> = terminals.iter().map(|&t| topo.pos[t]).collect();
    decreasing_in(&topo.position_adjacency(), &terms, topo.pos[root]).map(|t| t.relabel(&topo.order))
}
