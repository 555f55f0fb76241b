//! Labelled DAGs: relatives, topological order and outgoing-edge removal.
//!
//! Nodes are addressed by [`NodeId`], their position in the declaration order.
//! Declaration order is the canonical order: every set-valued result is
//! reported sorted by it.

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a node in declaration order.
pub type NodeId = usize;

/// Set of nodes, iterated in canonical (declaration) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(BTreeSet<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: NodeId) -> Self {
        Self(BTreeSet::from([v]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        self.0.remove(&v)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        self.0.intersection(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = NodeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, NodeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Directed acyclic graph over string-labelled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
    order: Vec<NodeId>,
}

impl Dag {
    /// Builds a DAG, rejecting duplicate or empty labels, unknown endpoints,
    /// self-loops, duplicate edges and directed cycles.
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidGraph("empty node label".into()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node `{label}`")));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownNode(s.to_string()))
        };
        let mut ids = Vec::new();
        for (tail, head) in edges {
            ids.push((lookup(tail.as_ref())?, lookup(head.as_ref())?));
        }
        Self::from_ids(labels, ids)
    }

    fn from_ids(labels: Vec<String>, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        let n = labels.len();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(t, h) in &edges {
            if t == h {
                return Err(Error::InvalidGraph(format!("self-loop on `{}`", labels[t])));
            }
            if children[t].contains(&h) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge `{} -> {}`",
                    labels[t], labels[h]
                )));
            }
            parents[h].push(t);
            children[t].push(h);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        let order = kahn_order(&parents, &children).map_err(|cycle| {
            Error::Cycle(cycle.into_iter().map(|v| labels[v].clone()).collect())
        })?;
        Ok(Self {
            labels,
            index,
            edges,
            parents,
            children,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.labels.len()
    }

    pub fn all_nodes(&self) -> NodeSet {
        self.nodes().collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    /// Edges in declaration order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn has_edge(&self, tail: NodeId, head: NodeId) -> bool {
        self.children[tail].binary_search(&head).is_ok()
    }

    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn node_set<I, S>(&self, labels: I) -> Result<NodeSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels.into_iter().map(|l| self.node(l.as_ref())).collect()
    }

    pub fn set_labels(&self, set: &NodeSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(format!("#{v}")))
        }
    }

    pub(crate) fn check_set(&self, set: &NodeSet) -> Result<()> {
        set.iter().try_for_each(|v| self.check_node(v))
    }

    /// Parents of `v`, sorted.
    pub fn parent_ids(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v]
    }

    /// Children of `v`, sorted.
    pub fn child_ids(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn parents(&self, v: NodeId) -> Result<NodeSet> {
        self.check_node(v)?;
        Ok(self.parents[v].iter().copied().collect())
    }

    pub fn children(&self, v: NodeId) -> Result<NodeSet> {
        self.check_node(v)?;
        Ok(self.children[v].iter().copied().collect())
    }

    /// Topological order; ties are broken by declaration order.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// Nodes with a directed path of length at least one into some member of `vs`.
    pub fn ancestors(&self, vs: &NodeSet) -> Result<NodeSet> {
        self.check_set(vs)?;
        Ok(self.closure(vs, &self.parents))
    }

    /// Nodes reachable from some member of `vs` by a directed path of length at least one.
    pub fn descendants(&self, vs: &NodeSet) -> Result<NodeSet> {
        self.check_set(vs)?;
        Ok(self.closure(vs, &self.children))
    }

    fn closure(&self, seeds: &NodeSet, step: &[Vec<NodeId>]) -> NodeSet {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<NodeId> = seeds.iter().flat_map(|v| step[v].iter().copied()).collect();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend_from_slice(&step[v]);
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(v, &s)| s.then_some(v))
            .collect()
    }

    /// Copy of the graph with every edge whose tail lies in `set` deleted.
    pub fn remove_outgoing(&self, set: &NodeSet) -> Result<Dag> {
        self.check_set(set)?;
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(t, _)| !set.contains(t))
            .collect();
        Self::from_ids(self.labels.clone(), edges)
    }

    /// Copy of the graph with one extra edge; fails if it would close a cycle.
    pub fn with_edge(&self, tail: NodeId, head: NodeId) -> Result<Dag> {
        self.check_node(tail)?;
        self.check_node(head)?;
        let mut edges = self.edges.clone();
        edges.push((tail, head));
        Self::from_ids(self.labels.clone(), edges)
    }

    /// Same nodes and same edge set, ignoring edge declaration order.
    pub fn same_structure(&self, other: &Dag) -> bool {
        self.labels == other.labels && self.parents == other.parents
    }

    /// Parses the line-oriented graph format: one label per node line,
    /// `tail -> head` per edge line, `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Dag> {
        let mut labels: Vec<String> = Vec::new();
        let mut declared: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(NodeId, NodeId, usize)> = Vec::new();
        let mut pending: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if let Some((tail, head)) = line.split_once("->") {
                let (tail, head) = (tail.trim(), head.trim());
                for end in [tail, head] {
                    if !is_label(end) {
                        return Err(parse_err(format!("invalid edge endpoint `{end}`")));
                    }
                }
                pending.push((tail.to_string(), head.to_string(), line_no));
            } else {
                if !is_label(line) {
                    return Err(parse_err(format!("invalid node declaration `{line}`")));
                }
                if declared.insert(line.to_string(), line_no).is_some() {
                    return Err(parse_err(format!("duplicate node `{line}`")));
                }
                labels.push(line.to_string());
            }
        }
        let index: HashMap<&str, NodeId> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        for (tail, head, line) in &pending {
            let find = |s: &str| {
                index.get(s).copied().ok_or_else(|| Error::Parse {
                    line: *line,
                    message: format!("edge endpoint `{s}` is not a declared node"),
                })
            };
            edges.push((find(tail)?, find(head)?, *line));
        }
        for (k, &(t, h, line)) in edges.iter().enumerate() {
            let message = if t == h {
                Some(format!("self-loop on `{}`", labels[t]))
            } else if edges[..k].iter().any(|&(a, b, _)| a == t && b == h) {
                Some(format!("duplicate edge `{} -> {}`", labels[t], labels[h]))
            } else {
                None
            };
            if let Some(message) = message {
                return Err(Error::Parse { line, message });
            }
        }
        Self::from_ids(labels, edges.into_iter().map(|(t, h, _)| (t, h)).collect())
    }

    /// Serializes in the format read by [`Dag::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push_str(l);
            out.push('\n');
        }
        for &(t, h) in &self.edges {
            out.push_str(&format!("{} -> {}\n", self.labels[t], self.labels[h]));
        }
        out
    }
}

impl fmt::Display for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace) && !s.contains("->")
}

/// Kahn's algorithm with a min-heap so ties follow declaration order.
/// On failure returns one directed cycle.
fn kahn_order(parents: &[Vec<NodeId>], children: &[Vec<NodeId>]) -> std::result::Result<Vec<NodeId>, Vec<NodeId>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<NodeId>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every remaining node has a remaining parent; walk parents until a repeat.
    let start = (0..n).find(|&v| indegree[v] > 0).expect("unsorted node");
    let mut walk = vec![start];
    let mut pos = HashMap::from([(start, 0usize)]);
    let mut v = start;
    loop {
        v = *parents[v]
            .iter()
            .find(|&&p| indegree[p] > 0)
            .expect("blocked node has a blocked parent");
        if let Some(&i) = pos.get(&v) {
            let mut cycle: Vec<NodeId> = walk[i..].to_vec();
            cycle.reverse();
            cycle.push(cycle[0]);
            return Err(cycle);
        }
        pos.insert(v, walk.len());
        walk.push(v);
    }
}
