//! Depth, ⅋-closure and underlying graphs.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::Formula;
use crate::net::{BoxId, EdgeId, Element, Layout, LinkId, LinkKind, Net};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown element {0}")]
pub struct UnknownElement(pub Element);

/// Number of boxes strictly containing a link or edge. Border links have the
/// depth of their box.
pub fn depth(net: &Net, x: Element) -> Result<usize, UnknownElement> {
    let layout = Layout::new(net);
    match x {
        Element::Link(l) if net.try_link(l).is_some() => Ok(layout.link_depth(l)),
        Element::Edge(e) if net.try_edge(e).is_some() => Ok(layout.edge_depth(e)),
        _ => Err(UnknownElement(x)),
    }
}

/// Largest link depth, zero for box-free nets.
pub fn max_depth(net: &Net) -> usize {
    let layout = Layout::new(net);
    net.link_ids().map(|l| layout.link_depth(l)).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClosureError {
    #[error("conclusion {0} carries a flat label")]
    FlatConclusion(EdgeId),
}

/// Joins all conclusions with right-nested par links, `A1 @ (A2 @ (...))`.
/// Nets with zero or one conclusion are returned unchanged.
pub fn parr_closure(net: &Net) -> Result<Net, ClosureError> {
    if let Some(&e) = net.conclusions().iter().find(|&&e| net.label(e).is_flat()) {
        return Err(ClosureError::FlatConclusion(e));
    }
    let mut out = net.clone();
    let concl = net.conclusions().to_vec();
    if concl.len() < 2 {
        return Ok(out);
    }
    let mut acc = *concl.last().unwrap();
    for &e in concl[..concl.len() - 1].iter().rev() {
        let f = Formula::par(formula_of(&out, e), formula_of(&out, acc));
        let c = out.add_formula_edge(f);
        out.add_link(LinkKind::Par, vec![e, acc], vec![c], None);
        acc = c;
    }
    out.set_conclusions(vec![acc]);
    Ok(out)
}

fn formula_of(net: &Net, e: EdgeId) -> Formula {
    net.label(e).formula().clone()
}

/// Node of an underlying graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UNode {
    Link(LinkId),
    /// A box collapsed into a single node.
    Box(BoxId),
}

impl fmt::Display for UNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UNode::Link(l) => l.fmt(f),
            UNode::Box(b) => b.fmt(f),
        }
    }
}

/// Undirected multigraph; each graph edge remembers the net edge it comes from.
#[derive(Clone, Debug, Default)]
pub struct UGraph {
    pub nodes: Vec<UNode>,
    pub edges: Vec<(usize, usize, EdgeId)>,
}

impl UGraph {
    pub fn node_index(&self, n: UNode) -> Option<usize> {
        self.nodes.iter().position(|&m| m == n)
    }

    /// A cycle as a list of net edges, if the multigraph has one. Parallel
    /// edges and loops count as cycles.
    pub fn find_cycle(&self) -> Option<Vec<EdgeId>> {
        find_cycle(self.nodes.len(), &self.edges)
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Connected components as lists of node indexes.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(a, b, _) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Cycle detection in an undirected multigraph given as an edge list; the
/// result lists the payloads of the cycle's edges in traversal order.
pub fn find_cycle<T: Copy>(nodes: usize, edges: &[(usize, usize, T)]) -> Option<Vec<T>> {
    let mut uf = UnionFind::new(nodes);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (i, &(a, b, _)) in edges.iter().enumerate() {
        if !uf.union(a, b) {
            // a and b already connected by tree edges: path plus this edge
            let path = tree_path(&adj, a, b)?;
            let mut cycle: Vec<T> = path.into_iter().map(|k| edges[k].2).collect();
            cycle.push(edges[i].2);
            return Some(cycle);
        }
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    None
}

fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            break;
        }
        for &(v, k) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, k));
                stack.push(v);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, k) = prev[cur]?;
        out.push(k);
        cur = p;
    }
    out.reverse();
    Some(out)
}

/// Plain union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// The underlying graph of the whole net (every link at every depth, boxes
/// ignored), or, with `at_depth_zero`, the depth-0 graph in which every
/// depth-0 box is one node.
pub fn underlying_graph(net: &Net, at_depth_zero: bool) -> UGraph {
    if at_depth_zero {
        level_graph(net, None)
    } else {
        let layout = Layout::new(net);
        let nodes: Vec<UNode> = net.link_ids().map(UNode::Link).collect();
        let index: BTreeMap<UNode, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut edges = Vec::new();
        for e in net.edge_ids() {
            if let (Some(p), Some(c)) = (layout.producer(e), layout.consumer(e)) {
                edges.push((index[&UNode::Link(p)], index[&UNode::Link(c)], e));
            }
        }
        UGraph { nodes, edges }
    }
}

/// Graph of one level of the box tree: the links directly inside `level`
/// (or at depth zero), with every immediately nested box collapsed into one
/// node together with its border.
pub fn level_graph(net: &Net, level: Option<BoxId>) -> UGraph {
    let layout = Layout::new(net);
    let node_of = |l: LinkId| -> Option<UNode> {
        if layout.container(l) != level {
            return None;
        }
        Some(match layout.border_of(l) {
            Some(b) => UNode::Box(b),
            None => UNode::Link(l),
        })
    };
    let mut nodes = Vec::new();
    let mut index = BTreeMap::new();
    for l in net.link_ids() {
        if let Some(n) = node_of(l) {
            index.entry(n).or_insert_with(|| {
                nodes.push(n);
                nodes.len() - 1
            });
        }
    }
    let mut edges = Vec::new();
    for e in net.edge_ids() {
        let (Some(p), Some(c)) = (layout.producer(e), layout.consumer(e)) else { continue };
        if let (Some(a), Some(b)) = (node_of(p), node_of(c)) {
            // edges running inside a collapsed box vanish with it
            if a == b && matches!(a, UNode::Box(_)) {
                continue;
            }
            edges.push((index[&a], index[&b], e));
        }
    }
    UGraph { nodes, edges }
}
