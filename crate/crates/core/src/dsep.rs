//! Path blocking, d-separation and the back-door criterion.
//!
//! [`is_d_separated`] is a linear-time active-trail reachability search.
//! [`is_d_separated_oracle`] enumerates every simple path and applies
//! [`is_blocked`] to each; the two must always agree.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId, NodeSet};

/// Default cap on enumerated paths used by the command-line front end.
pub const DEFAULT_PATH_LIMIT: usize = 100_000;

/// Orientation of one step along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// `v_i -> v_{i+1}`
    Forward,
    /// `v_i <- v_{i+1}`
    Backward,
}

/// Simple path in the skeleton of a DAG, with edge orientations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    nodes: Vec<NodeId>,
    steps: Vec<Step>,
}

impl Path {
    /// Builds a path, checking that it is simple and consistent with `g`.
    pub fn new(g: &Dag, nodes: Vec<NodeId>, steps: Vec<Step>) -> Result<Self> {
        let path = Self { nodes, steps };
        path.validate(g)?;
        Ok(path)
    }

    /// Reads orientations off `g` for a node sequence.
    pub fn from_nodes(g: &Dag, nodes: Vec<NodeId>) -> Result<Self> {
        let mut steps = Vec::with_capacity(nodes.len().saturating_sub(1));
        for w in nodes.windows(2) {
            g.check_node(w[0])?;
            g.check_node(w[1])?;
            if g.has_edge(w[0], w[1]) {
                steps.push(Step::Forward);
            } else if g.has_edge(w[1], w[0]) {
                steps.push(Step::Backward);
            } else {
                return Err(Error::InvalidPath(format!(
                    "`{}` and `{}` are not adjacent",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        Self::new(g, nodes, steps)
    }

    fn validate(&self, g: &Dag) -> Result<()> {
        if self.nodes.len() < 2 || self.steps.len() + 1 != self.nodes.len() {
            return Err(Error::InvalidPath("a path needs at least one step".into()));
        }
        let mut seen = vec![false; g.len()];
        for &v in &self.nodes {
            g.check_node(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPath(format!("node `{}` repeats", g.label(v))));
            }
        }
        for (w, step) in self.nodes.windows(2).zip(&self.steps) {
            let ok = match step {
                Step::Forward => g.has_edge(w[0], w[1]),
                Step::Backward => g.has_edge(w[1], w[0]),
            };
            if !ok {
                return Err(Error::InvalidPath(format!(
                    "no edge `{} {} {}`",
                    g.label(w[0]),
                    if *step == Step::Forward { "->" } else { "<-" },
                    g.label(w[1])
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("non-empty path")
    }

    /// Interior nodes with a flag telling whether each is a collider.
    pub fn interior(&self) -> impl Iterator<Item = (NodeId, bool)> + '_ {
        (1..self.nodes.len() - 1).map(move |i| {
            let collider = self.steps[i - 1] == Step::Forward && self.steps[i] == Step::Backward;
            (self.nodes[i], collider)
        })
    }

    /// Renders as `A <- L -> Y`.
    pub fn display<'a>(&'a self, g: &'a Dag) -> PathDisplay<'a> {
        PathDisplay { path: self, g }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    g: &'a Dag,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.g.label(self.path.nodes[0]))?;
        for (v, step) in self.path.nodes[1..].iter().zip(&self.path.steps) {
            let arrow = match step {
                Step::Forward => " -> ",
                Step::Backward => " <- ",
            };
            write!(f, "{arrow}{}", self.g.label(*v))?;
        }
        Ok(())
    }
}

/// `x`, `y` non-empty and `x`, `y`, `z` pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationQuery {
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
}

impl SeparationQuery {
    pub fn new(g: &Dag, x: NodeSet, y: NodeSet, z: NodeSet) -> Result<Self> {
        for s in [&x, &y, &z] {
            g.check_set(s)?;
        }
        if x.is_empty() || y.is_empty() {
            return Err(Error::InvalidQuery("x and y must be non-empty".into()));
        }
        if !x.is_disjoint(&y) || !x.is_disjoint(&z) || !y.is_disjoint(&z) {
            return Err(Error::InvalidQuery("x, y and z must be pairwise disjoint".into()));
        }
        Ok(Self { x, y, z })
    }

    pub fn from_labels(g: &Dag, x: &[&str], y: &[&str], z: &[&str]) -> Result<Self> {
        Self::new(g, g.node_set(x)?, g.node_set(y)?, g.node_set(z)?)
    }
}

/// True iff some interior node blocks `p` given `z`.
pub fn is_blocked(g: &Dag, p: &Path, z: &NodeSet) -> Result<bool> {
    p.validate(g)?;
    g.check_set(z)?;
    Ok(blocked_unchecked(g, p, z))
}

fn blocked_unchecked(g: &Dag, p: &Path, z: &NodeSet) -> bool {
    p.interior().any(|(w, collider)| {
        if collider {
            !z.contains(w) && g.descendants(&NodeSet::singleton(w)).is_ok_and(|d| d.is_disjoint(z))
        } else {
            z.contains(w)
        }
    })
}

/// All simple paths between `x` and `y`, shortest first, then by node sequence.
pub fn enumerate_paths(g: &Dag, x: NodeId, y: NodeId) -> Result<Vec<Path>> {
    enumerate_paths_with_limit(g, x, y, usize::MAX)
}

pub fn enumerate_paths_with_limit(g: &Dag, x: NodeId, y: NodeId, limit: usize) -> Result<Vec<Path>> {
    g.check_node(x)?;
    g.check_node(y)?;
    if x == y {
        return Err(Error::InvalidQuery("path endpoints must differ".into()));
    }
    let mut out = Vec::new();
    let mut nodes = vec![x];
    let mut steps = Vec::new();
    let mut on_path = vec![false; g.len()];
    on_path[x] = true;
    walk(g, y, limit, &mut nodes, &mut steps, &mut on_path, &mut out)?;
    out.sort_by(|a, b| a.nodes.len().cmp(&b.nodes.len()).then_with(|| a.nodes.cmp(&b.nodes)));
    Ok(out)
}

fn walk(
    g: &Dag,
    target: NodeId,
    limit: usize,
    nodes: &mut Vec<NodeId>,
    steps: &mut Vec<Step>,
    on_path: &mut [bool],
    out: &mut Vec<Path>,
) -> Result<()> {
    let v = *nodes.last().expect("non-empty");
    let next = g
        .child_ids(v)
        .iter()
        .map(|&c| (c, Step::Forward))
        .chain(g.parent_ids(v).iter().map(|&p| (p, Step::Backward)));
    for (w, step) in next {
        if on_path[w] {
            continue;
        }
        nodes.push(w);
        steps.push(step);
        if w == target {
            if out.len() >= limit {
                return Err(Error::PathOverflow { limit });
            }
            out.push(Path {
                nodes: nodes.clone(),
                steps: steps.clone(),
            });
        } else {
            on_path[w] = true;
            walk(g, target, limit, nodes, steps, on_path, out)?;
            on_path[w] = false;
        }
        nodes.pop();
        steps.pop();
    }
    Ok(())
}

/// Active-trail reachability (Bayes-ball style), linear in the graph size.
pub fn is_d_separated(g: &Dag, q: &SeparationQuery) -> bool {
    let reachable = reachable_given(g, &q.x, &q.z);
    q.y.iter().all(|v| !reachable[v])
}

/// Nodes connected to `sources` by an active trail given `z`.
fn reachable_given(g: &Dag, sources: &NodeSet, z: &NodeSet) -> Vec<bool> {
    let n = g.len();
    // z together with its ancestors: colliders in this set are open.
    let mut opens_collider = vec![false; n];
    for v in z.iter().chain(g.ancestors(z).expect("valid set").iter()) {
        opens_collider[v] = true;
    }
    // visited[v][0]: reached travelling up (from a child), [1]: down (from a parent)
    let mut visited = vec![[false; 2]; n];
    let mut reachable = vec![false; n];
    let mut queue: VecDeque<(NodeId, usize)> = sources.iter().map(|v| (v, 0)).collect();
    const UP: usize = 0;
    const DOWN: usize = 1;
    while let Some((v, dir)) = queue.pop_front() {
        if std::mem::replace(&mut visited[v][dir], true) {
            continue;
        }
        let observed = z.contains(v);
        if !observed {
            reachable[v] = true;
        }
        if dir == UP && !observed {
            queue.extend(g.parent_ids(v).iter().map(|&p| (p, UP)));
            queue.extend(g.child_ids(v).iter().map(|&c| (c, DOWN)));
        } else if dir == DOWN {
            if !observed {
                queue.extend(g.child_ids(v).iter().map(|&c| (c, DOWN)));
            }
            if opens_collider[v] {
                queue.extend(g.parent_ids(v).iter().map(|&p| (p, UP)));
            }
        }
    }
    reachable
}

/// Brute-force d-separation: every path between every pair must be blocked.
pub fn is_d_separated_oracle(g: &Dag, q: &SeparationQuery) -> bool {
    q.x.iter().all(|x| {
        q.y.iter().all(|y| {
            enumerate_paths(g, x, y)
                .expect("valid query")
                .iter()
                .all(|p| blocked_unchecked(g, p, &q.z))
        })
    })
}

/// First unblocked path in enumeration order, if any.
pub fn d_connecting_path(g: &Dag, q: &SeparationQuery, limit: usize) -> Result<Option<Path>> {
    for x in q.x.iter() {
        for y in q.y.iter() {
            let paths = enumerate_paths_with_limit(g, x, y, limit)?;
            if let Some(p) = paths.into_iter().find(|p| !blocked_unchecked(g, p, &q.z)) {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// A back-door path, flagged when it passes through another treatment node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackdoorPath {
    pub path: Path,
    pub through_treatment: bool,
}

fn check_treatment(g: &Dag, a_set: &NodeSet, y: NodeId) -> Result<()> {
    g.check_set(a_set)?;
    g.check_node(y)?;
    if a_set.is_empty() {
        return Err(Error::InvalidQuery("treatment set is empty".into()));
    }
    if a_set.contains(y) {
        return Err(Error::InvalidQuery(format!(
            "outcome `{}` is in the treatment set",
            g.label(y)
        )));
    }
    Ok(())
}

/// Paths from a treatment node to `y` whose first edge points into the treatment.
pub fn backdoor_paths(g: &Dag, a_set: &NodeSet, y: NodeId) -> Result<Vec<BackdoorPath>> {
    backdoor_paths_with_limit(g, a_set, y, usize::MAX)
}

pub fn backdoor_paths_with_limit(
    g: &Dag,
    a_set: &NodeSet,
    y: NodeId,
    limit: usize,
) -> Result<Vec<BackdoorPath>> {
    check_treatment(g, a_set, y)?;
    let mut out = Vec::new();
    for a in a_set.iter() {
        for path in enumerate_paths_with_limit(g, a, y, limit)? {
            if path.steps[0] != Step::Backward {
                continue;
            }
            let through_treatment = path.nodes[1..].iter().any(|&v| a_set.contains(v));
            out.push(BackdoorPath {
                path,
                through_treatment,
            });
        }
    }
    Ok(out)
}

/// Outcome of the back-door criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    /// Adjustment set and treatment set are disjoint (always true in a returned report).
    pub disjoint: bool,
    /// No adjustment node descends from a treatment node.
    pub no_descendants: bool,
    /// Adjustment nodes that do descend from a treatment node.
    pub offending_descendants: NodeSet,
    /// Every back-door path is blocked.
    pub blocks_backdoor: bool,
    /// First unblocked back-door path, when `blocks_backdoor` is false.
    pub witness: Option<BackdoorPath>,
    /// Number of back-door paths examined.
    pub paths_checked: usize,
}

impl CriterionReport {
    pub fn holds(&self) -> bool {
        self.disjoint && self.no_descendants && self.blocks_backdoor
    }
}

pub fn backdoor_criterion(g: &Dag, a_set: &NodeSet, y: NodeId, l: &NodeSet) -> Result<CriterionReport> {
    backdoor_criterion_with_limit(g, a_set, y, l, usize::MAX)
}

pub fn backdoor_criterion_with_limit(
    g: &Dag,
    a_set: &NodeSet,
    y: NodeId,
    l: &NodeSet,
    limit: usize,
) -> Result<CriterionReport> {
    check_treatment(g, a_set, y)?;
    g.check_set(l)?;
    let overlap = l.intersection(a_set);
    if !overlap.is_empty() {
        return Err(Error::AdjustmentOverlapsTreatment(g.set_labels(&overlap)));
    }
    if l.contains(y) {
        return Err(Error::InvalidQuery(format!(
            "outcome `{}` is in the adjustment set",
            g.label(y)
        )));
    }
    let offending_descendants = l.intersection(&g.descendants(a_set)?);
    let paths = backdoor_paths_with_limit(g, a_set, y, limit)?;
    let paths_checked = paths.len();
    let witness = paths.into_iter().find(|bp| !blocked_unchecked(g, &bp.path, l));
    Ok(CriterionReport {
        disjoint: true,
        no_descendants: offending_descendants.is_empty(),
        offending_descendants,
        blocks_backdoor: witness.is_none(),
        witness,
        paths_checked,
    })
}

/// A subset of the candidates satisfying the criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub set: NodeSet,
    /// No proper subset is admissible.
    pub minimal: bool,
}

/// Every admissible subset of `candidates`, by size then canonical order.
pub fn enumerate_admissible_sets(
    g: &Dag,
    a_set: &NodeSet,
    y: NodeId,
    candidates: &NodeSet,
) -> Result<Vec<AdmissibleSet>> {
    enumerate_admissible_sets_with_limit(g, a_set, y, candidates, usize::MAX)
}

pub fn enumerate_admissible_sets_with_limit(
    g: &Dag,
    a_set: &NodeSet,
    y: NodeId,
    candidates: &NodeSet,
    limit: usize,
) -> Result<Vec<AdmissibleSet>> {
    check_treatment(g, a_set, y)?;
    g.check_set(candidates)?;
    if !candidates.is_disjoint(a_set) || candidates.contains(y) {
        return Err(Error::InvalidQuery(
            "candidates must exclude the treatment and outcome nodes".into(),
        ));
    }
    let pool = candidates.to_vec();
    if pool.len() >= 32 {
        return Err(Error::InvalidQuery("too many candidate nodes".into()));
    }
    let mut subsets: Vec<NodeSet> = (0u64..1 << pool.len())
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
    let mut out: Vec<AdmissibleSet> = Vec::new();
    for set in subsets {
        if backdoor_criterion_with_limit(g, a_set, y, &set, limit)?.holds() {
            let minimal = !out.iter().any(|found| found.set.is_subset(&set));
            out.push(AdmissibleSet { set, minimal });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure1() -> Dag {
        Dag::new(["L", "A", "Y"], [("L", "A"), ("L", "Y"), ("A", "Y")]).unwrap()
    }

    fn figure2() -> Dag {
        Dag::new(["L", "A", "Y"], [("L", "A"), ("L", "Y")]).unwrap()
    }

    fn collider() -> Dag {
        Dag::new(["A", "C", "Y"], [("A", "C"), ("Y", "C")]).unwrap()
    }

    fn path(g: &Dag, labels: &[&str]) -> Path {
        Path::from_nodes(g, labels.iter().map(|l| g.node(l).unwrap()).collect()).unwrap()
    }

    fn set(g: &Dag, labels: &[&str]) -> NodeSet {
        g.node_set(labels).unwrap()
    }

    fn show(g: &Dag, paths: &[Path]) -> Vec<String> {
        paths.iter().map(|p| p.display(g).to_string()).collect()
    }

    #[test]
    fn blocking_examples() {
        let g = figure1();
        let l = set(&g, &["L"]);
        assert!(is_blocked(&g, &path(&g, &["A", "L", "Y"]), &l).unwrap());
        assert!(!is_blocked(&g, &path(&g, &["A", "Y"]), &l).unwrap());

        let c = collider();
        let p = path(&c, &["A", "C", "Y"]);
        assert!(is_blocked(&c, &p, &NodeSet::new()).unwrap());
        assert!(!is_blocked(&c, &p, &set(&c, &["C"])).unwrap());
    }

    #[test]
    fn collider_opened_by_descendant() {
        let g = Dag::new(["A", "C", "Y", "D"], [("A", "C"), ("Y", "C"), ("C", "D")]).unwrap();
        let p = path(&g, &["A", "C", "Y"]);
        assert!(!is_blocked(&g, &p, &set(&g, &["D"])).unwrap());
    }

    #[test]
    fn inconsistent_path_is_rejected() {
        let g = figure2();
        let bad = Path {
            nodes: vec![1, 2],
            steps: vec![Step::Forward],
        };
        assert!(matches!(is_blocked(&g, &bad, &NodeSet::new()), Err(Error::InvalidPath(_))));
        let reversed = Path {
            nodes: vec![0, 1],
            steps: vec![Step::Backward],
        };
        assert!(is_blocked(&g, &reversed, &NodeSet::new()).is_err());
        let repeat = Path {
            nodes: vec![1, 0, 1],
            steps: vec![Step::Backward, Step::Forward],
        };
        assert!(is_blocked(&g, &repeat, &NodeSet::new()).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let g = figure1();
        let (a, y) = (g.node("A").unwrap(), g.node("Y").unwrap());
        assert_eq!(show(&g, &enumerate_paths(&g, a, y).unwrap()), ["A -> Y", "A <- L -> Y"]);

        let e = Dag::new(["A", "Y"], Vec::<(&str, &str)>::new()).unwrap();
        assert!(enumerate_paths(&e, 0, 1).unwrap().is_empty());

        let g2 = figure2();
        assert_eq!(show(&g2, &enumerate_paths(&g2, a, y).unwrap()), ["A <- L -> Y"]);
        assert!(enumerate_paths(&g, a, a).is_err());
    }

    #[test]
    fn path_limit_overflows() {
        let g = figure1();
        let err = enumerate_paths_with_limit(&g, 1, 2, 1).unwrap_err();
        assert_eq!(err, Error::PathOverflow { limit: 1 });
    }

    #[test]
    fn d_separation_examples() {
        let g2 = figure2();
        let q = SeparationQuery::from_labels(&g2, &["A"], &["Y"], &["L"]).unwrap();
        assert!(is_d_separated(&g2, &q));
        assert!(is_d_separated_oracle(&g2, &q));

        let g1 = figure1();
        let q = SeparationQuery::from_labels(&g1, &["A"], &["Y"], &["L"]).unwrap();
        assert!(!is_d_separated(&g1, &q));
        assert!(!is_d_separated_oracle(&g1, &q));
        let w = d_connecting_path(&g1, &q, DEFAULT_PATH_LIMIT).unwrap().unwrap();
        assert_eq!(w.display(&g1).to_string(), "A -> Y");

        let c = collider();
        let open = SeparationQuery::from_labels(&c, &["A"], &["Y"], &[]).unwrap();
        let closed = SeparationQuery::from_labels(&c, &["A"], &["Y"], &["C"]).unwrap();
        assert!(is_d_separated(&c, &open));
        assert!(!is_d_separated(&c, &closed));
    }

    #[test]
    fn overlapping_query_rejected() {
        let g = figure1();
        assert!(SeparationQuery::from_labels(&g, &["A"], &["A"], &[]).is_err());
        assert!(SeparationQuery::from_labels(&g, &["A"], &["Y"], &["A"]).is_err());
        assert!(SeparationQuery::from_labels(&g, &[], &["Y"], &[]).is_err());
    }

    #[test]
    fn backdoor_path_examples() {
        let g = figure1();
        let a = set(&g, &["A"]);
        let y = g.node("Y").unwrap();
        let bps = backdoor_paths(&g, &a, y).unwrap();
        assert_eq!(bps.len(), 1);
        assert_eq!(bps[0].path.display(&g).to_string(), "A <- L -> Y");
        assert!(!bps[0].through_treatment);

        let chain = Dag::new(["A", "Y"], [("A", "Y")]).unwrap();
        assert!(backdoor_paths(&chain, &set(&chain, &["A"]), 1).unwrap().is_empty());
    }

    #[test]
    fn backdoor_paths_through_other_treatments_are_flagged() {
        let g = Dag::new(["U", "A1", "A2", "Y"], [("U", "A1"), ("U", "A2"), ("A2", "Y")]).unwrap();
        let bps = backdoor_paths(&g, &set(&g, &["A1", "A2"]), g.node("Y").unwrap()).unwrap();
        let flagged: Vec<(String, bool)> = bps
            .iter()
            .map(|b| (b.path.display(&g).to_string(), b.through_treatment))
            .collect();
        assert_eq!(flagged, [("A1 <- U -> A2 -> Y".to_string(), true)]);
    }

    #[test]
    fn criterion_examples() {
        let g = figure1();
        let (a, y) = (set(&g, &["A"]), g.node("Y").unwrap());
        assert!(backdoor_criterion(&g, &a, y, &set(&g, &["L"])).unwrap().holds());

        let r = backdoor_criterion(&g, &a, y, &NodeSet::new()).unwrap();
        assert!(!r.holds());
        assert!(r.no_descendants);
        assert!(!r.blocks_backdoor);
        assert_eq!(r.witness.unwrap().path.display(&g).to_string(), "A <- L -> Y");

        let err = backdoor_criterion(&g, &a, y, &set(&g, &["A", "L"])).unwrap_err();
        assert!(matches!(err, Error::AdjustmentOverlapsTreatment(_)));
        assert!(backdoor_criterion(&g, &a, y, &set(&g, &["Y"])).is_err());
    }

    #[test]
    fn m_graph_collider_opened() {
        let m = Dag::new(
            ["A", "U1", "W", "U2", "Y"],
            [("U1", "A"), ("U1", "W"), ("U2", "W"), ("U2", "Y")],
        )
        .unwrap();
        let (a, y) = (set(&m, &["A"]), m.node("Y").unwrap());
        // Only back-door path: A <- U1 -> W <- U2 -> Y, collider at W.
        let only = path(&m, &["A", "U1", "W", "U2", "Y"]);
        assert!(is_blocked(&m, &only, &NodeSet::new()).unwrap());
        assert!(!is_blocked(&m, &only, &set(&m, &["W"])).unwrap());

        let r = backdoor_criterion(&m, &a, y, &set(&m, &["W"])).unwrap();
        assert!(r.no_descendants);
        assert!(!r.blocks_backdoor);
        assert!(backdoor_criterion(&m, &a, y, &NodeSet::new()).unwrap().holds());
    }

    #[test]
    fn descendant_in_adjustment_set_fails_condition_one() {
        let g = Dag::new(["A", "M", "Y"], [("A", "M"), ("M", "Y")]).unwrap();
        let r = backdoor_criterion(&g, &set(&g, &["A"]), 2, &set(&g, &["M"])).unwrap();
        assert!(!r.no_descendants);
        assert!(r.blocks_backdoor);
        assert_eq!(g.set_labels(&r.offending_descendants), ["M"]);
    }

    #[test]
    fn admissible_set_examples() {
        let g = figure1();
        let (a, y) = (set(&g, &["A"]), g.node("Y").unwrap());
        let sets = enumerate_admissible_sets(&g, &a, y, &set(&g, &["L"])).unwrap();
        assert_eq!(sets, [AdmissibleSet { set: set(&g, &["L"]), minimal: true }]);
        assert!(enumerate_admissible_sets(&g, &a, y, &NodeSet::new()).unwrap().is_empty());

        let chain = Dag::new(["A", "Y"], [("A", "Y")]).unwrap();
        let sets = enumerate_admissible_sets(&chain, &set(&chain, &["A"]), 1, &NodeSet::new()).unwrap();
        assert_eq!(sets, [AdmissibleSet { set: NodeSet::new(), minimal: true }]);

        assert!(enumerate_admissible_sets(&g, &a, y, &set(&g, &["A"])).is_err());
    }

    #[test]
    fn admissible_sets_flag_non_minimal() {
        // L -> A, L -> Y, A -> Y, plus an isolated-ish pre-treatment node P -> L
        let g = Dag::new(
            ["P", "L", "A", "Y"],
            [("P", "L"), ("L", "A"), ("L", "Y"), ("A", "Y")],
        )
        .unwrap();
        let sets = enumerate_admissible_sets(&g, &set(&g, &["A"]), 3, &set(&g, &["P", "L"])).unwrap();
        let got: Vec<(Vec<String>, bool)> = sets.iter().map(|s| (g.set_labels(&s.set), s.minimal)).collect();
        assert_eq!(
            got,
            [(vec!["L".to_string()], true), (vec!["P".to_string(), "L".to_string()], false)]
        );
    }
}
