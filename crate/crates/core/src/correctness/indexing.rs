//! Integer indexings of nets, balance of walks, and the constraint checker.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use crate::net::{EdgeId, Layout, LinkId, LinkKind, Net};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// Only paragraph links shift the index.
    Plain,
    /// Paragraph, of-course and why-not links shift the index.
    Exponential,
    /// As exponential, with no constraint across axiom links.
    Quasi,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Exponential => "exponential",
            Flavor::Quasi => "quasi",
        }
    }

    pub fn from_name(s: &str) -> Option<Flavor> {
        [Flavor::Plain, Flavor::Exponential, Flavor::Quasi].into_iter().find(|f| f.name() == s)
    }

    fn exponential(self) -> bool {
        self != Flavor::Plain
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Indexing {
    pub flavor: Flavor,
    pub assignment: BTreeMap<EdgeId, i64>,
}

impl Indexing {
    pub fn get(&self, e: EdgeId) -> i64 {
        self.assignment[&e]
    }

    pub fn to_json(&self, name: impl Fn(EdgeId) -> String) -> Value {
        let assignment: serde_json::Map<String, Value> =
            self.assignment.iter().map(|(&e, &v)| (name(e), json!(v))).collect();
        json!({ "flavor": self.flavor.name(), "assignment": assignment })
    }
}

/// Offset of edge `e` relative to the conclusion of link `l`: the index of
/// `e` minus the index of the conclusion, as imposed by the link. `None`
/// means `e` is not constrained through `l` (axioms in the quasi flavor).
pub fn offset(kind: LinkKind, is_premise: bool, flavor: Flavor) -> Option<i64> {
    if !is_premise {
        return if kind == LinkKind::Axiom && flavor == Flavor::Quasi { None } else { Some(0) };
    }
    Some(match kind {
        LinkKind::Paragraph => 1,
        LinkKind::OfCourse | LinkKind::WhyNot if flavor.exponential() => 1,
        _ => 0,
    })
}

/// One pairwise constraint `I(a) - I(b) = w`, imposed by `link`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub link: LinkId,
    pub a: EdgeId,
    pub b: EdgeId,
    pub w: i64,
}

/// Constraints linking every edge of a link to the link's first edge. Cuts
/// have no conclusion; their two premises are equal.
pub fn constraints(net: &Net, flavor: Flavor) -> Vec<Constraint> {
    let mut out = Vec::new();
    for (id, l) in net.links() {
        let edges: Vec<(EdgeId, Option<i64>)> = l
            .premises
            .iter()
            .map(|&e| (e, offset(l.kind, true, flavor)))
            .chain(l.conclusions.iter().map(|&e| (e, offset(l.kind, false, flavor))))
            .collect();
        let Some(&(a, Some(wa))) = edges.first() else { continue };
        for &(b, wb) in &edges[1..] {
            if let Some(wb) = wb {
                out.push(Constraint { link: id, a, b, w: wa - wb });
            }
        }
    }
    out
}

/// A closed walk in the underlying graph: a start edge, then steps that
/// cross a link to reach the next edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Walk {
    pub start: Option<EdgeId>,
    pub steps: Vec<(LinkId, EdgeId)>,
}

impl Walk {
    pub fn edges(&self) -> Vec<EdgeId> {
        self.start.into_iter().chain(self.steps.iter().map(|&(_, e)| e)).collect()
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.start {
            write!(f, "{s}")?;
        }
        for (l, e) in &self.steps {
            write!(f, " -{l}- {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceWitness {
    pub cycle: Walk,
    pub balance: u64,
    pub flavor: Flavor,
}

impl fmt::Display for BalanceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle {} has {} balance {}", self.cycle, self.flavor, self.balance)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("step {step}: link {link} does not connect edge {from} to edge {to}")]
    NotIncident { step: usize, link: LinkId, from: EdgeId, to: EdgeId },
    #[error("walk has steps but no start edge")]
    NoStart,
}

/// `|n+ - n-|` over the walk: crossings of paragraph links, and of
/// of-course and why-not links when `exponential` is set.
pub fn balance(net: &Net, walk: &Walk, exponential: bool) -> Result<u64, WalkError> {
    let flavor = if exponential { Flavor::Exponential } else { Flavor::Plain };
    let Some(mut cur) = walk.start else {
        return if walk.steps.is_empty() { Ok(0) } else { Err(WalkError::NoStart) };
    };
    let mut total = 0i64;
    for (step, &(l, next)) in walk.steps.iter().enumerate() {
        let link = net.try_link(l);
        let off = |e: EdgeId| -> Option<i64> {
            let link = link?;
            if link.premises.contains(&e) {
                offset(link.kind, true, flavor)
            } else if link.conclusions.contains(&e) {
                Some(0)
            } else {
                None
            }
        };
        match (off(cur), off(next)) {
            (Some(a), Some(b)) if cur != next => {
                total += a - b;
            }
            _ => return Err(WalkError::NotIncident { step, link: l, from: cur, to: next }),
        }
        cur = next;
    }
    Ok(total.unsigned_abs())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IndexingError {
    #[error("edge {0} has no index")]
    Missing(EdgeId),
    #[error("link {link}: edges {a} and {b} have indexes {ia} and {ib}, expected a difference of {w}")]
    Violated { link: LinkId, a: EdgeId, b: EdgeId, ia: i64, ib: i64, w: i64 },
}

/// Checks an indexing against every link constraint of its flavor.
pub fn check_indexing(net: &Net, ix: &Indexing) -> Result<(), IndexingError> {
    for e in net.edge_ids() {
        if !ix.assignment.contains_key(&e) {
            return Err(IndexingError::Missing(e));
        }
    }
    let i = |e: EdgeId| ix.assignment[&e];
    let exp = i64::from(ix.flavor.exponential());
    for (id, l) in net.links() {
        // (a, b, w): required I(a) - I(b) = w
        let mut req: Vec<(EdgeId, EdgeId, i64)> = Vec::new();
        let (p, c) = (&l.premises, &l.conclusions);
        match l.kind {
            LinkKind::Axiom if ix.flavor != Flavor::Quasi => req.push((c[0], c[1], 0)),
            LinkKind::Axiom | LinkKind::One | LinkKind::Bottom => {}
            LinkKind::Cut => req.push((p[0], p[1], 0)),
            LinkKind::Tensor | LinkKind::Par => {
                req.push((p[0], c[0], 0));
                req.push((p[1], c[0], 0));
            }
            LinkKind::Flat | LinkKind::Pax => req.push((p[0], c[0], 0)),
            LinkKind::Paragraph => req.push((p[0], c[0], 1)),
            LinkKind::OfCourse | LinkKind::WhyNot => req.extend(p.iter().map(|&e| (e, c[0], exp))),
        }
        for (a, b, w) in req {
            if i(a) - i(b) != w {
                return Err(IndexingError::Violated { link: id, a, b, ia: i(a), ib: i(b), w });
            }
        }
    }
    Ok(())
}

/// Connected components of the constraint graph of a flavor, as lists of
/// edges. Components are numbered by their smallest edge.
pub fn components(net: &Net, flavor: Flavor) -> Vec<Vec<EdgeId>> {
    let mut uf = crate::graph::UnionFind::new(net.edge_capacity());
    for c in constraints(net, flavor) {
        uf.union(c.a.index(), c.b.index());
    }
    let mut groups: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for e in net.edge_ids() {
        groups.entry(uf.find(e.index())).or_default().push(e);
    }
    let mut out: Vec<Vec<EdgeId>> = groups.into_values().collect();
    out.sort();
    out
}

/// Weighted breadth-first propagation, one anchor at 0 per component.
pub fn solve_indexing(net: &Net, flavor: Flavor) -> Result<Indexing, BalanceWitness> {
    let cons = constraints(net, flavor);
    let cap = net.edge_capacity();
    // adjacency: (neighbour, weight such that I(nb) = I(self) + w, constraint)
    let mut adj: Vec<Vec<(EdgeId, i64, usize)>> = vec![Vec::new(); cap];
    for (k, c) in cons.iter().enumerate() {
        adj[c.a.index()].push((c.b, -c.w, k));
        adj[c.b.index()].push((c.a, c.w, k));
    }
    let mut value: Vec<Option<i64>> = vec![None; cap];
    let mut parent: Vec<Option<(EdgeId, usize)>> = vec![None; cap];
    for root in net.edge_ids() {
        if value[root.index()].is_some() {
            continue;
        }
        value[root.index()] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let vu = value[u.index()].unwrap();
            for &(v, w, k) in &adj[u.index()] {
                match value[v.index()] {
                    None => {
                        value[v.index()] = Some(vu + w);
                        parent[v.index()] = Some((u, k));
                        queue.push_back(v);
                    }
                    Some(vv) if vv != vu + w => {
                        return Err(witness(net, flavor, &cons, &parent, u, v, k));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let assignment = net.edge_ids().map(|e| (e, value[e.index()].unwrap())).collect();
    Ok(Indexing { flavor, assignment })
}

fn witness(
    net: &Net,
    flavor: Flavor,
    cons: &[Constraint],
    parent: &[Option<(EdgeId, usize)>],
    u: EdgeId,
    v: EdgeId,
    k: usize,
) -> BalanceWitness {
    // tree paths from u and v up to their common ancestor
    let chain = |mut x: EdgeId| {
        let mut out = vec![(x, None)];
        while let Some((p, c)) = parent[x.index()] {
            out.push((p, Some(c)));
            x = p;
        }
        out
    };
    let cu = chain(u);
    let cv = chain(v);
    let in_v: BTreeMap<EdgeId, usize> = cv.iter().enumerate().map(|(i, &(e, _))| (e, i)).collect();
    let (iu, iv) = cu
        .iter()
        .enumerate()
        .find_map(|(i, (e, _))| in_v.get(e).map(|&j| (i, j)))
        .expect("both ends lie in one tree");
    // walk: lca -> ... -> u, then u -> v via constraint k, then v -> ... -> lca
    let mut steps = Vec::new();
    for i in (0..iu).rev() {
        let (e, _) = cu[i];
        let c = cu[i + 1].1.unwrap();
        steps.push((cons[c].link, e));
    }
    steps.push((cons[k].link, v));
    for &(e, c) in &cv[1..=iv] {
        steps.push((cons[c.unwrap()].link, e));
    }
    let cycle = Walk { start: Some(cu[iu].0), steps };
    let bal = balance(net, &cycle, flavor.exponential()).unwrap_or(0);
    BalanceWitness { cycle, balance: bal, flavor }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ShiftError {
    #[error("unknown component {0}")]
    UnknownComponent(usize),
}

/// Translates the indexes of whole components (numbered as in
/// [`components`]).
pub fn shift_indexing(ix: &Indexing, net: &Net, shifts: &BTreeMap<usize, i64>) -> Result<Indexing, ShiftError> {
    let comps = components(net, ix.flavor);
    let mut out = ix.clone();
    for (&c, &k) in shifts {
        let edges = comps.get(c).ok_or(ShiftError::UnknownComponent(c))?;
        for e in edges {
            *out.assignment.get_mut(e).unwrap() += k;
        }
    }
    Ok(out)
}

/// Why an aligned indexing does not exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlignmentFailure {
    Unbalanced(BalanceWitness),
    /// Two conclusions in one component with different indexes.
    Conclusions { first: EdgeId, second: EdgeId, difference: i64 },
}

impl fmt::Display for AlignmentFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlignmentFailure::Unbalanced(w) => w.fmt(f),
            AlignmentFailure::Conclusions { first, second, difference } => write!(
                f,
                "conclusions {first} and {second} are connected but their indexes differ by {difference}"
            ),
        }
    }
}

/// An indexing giving every conclusion index 0, obtained by solving and then
/// translating components. Fails when two conclusions of one component
/// cannot be equal.
pub fn solve_aligned(net: &Net, flavor: Flavor) -> Result<Indexing, AlignmentFailure> {
    let ix = solve_indexing(net, flavor).map_err(AlignmentFailure::Unbalanced)?;
    let comps = components(net, flavor);
    let comp_of: BTreeMap<EdgeId, usize> =
        comps.iter().enumerate().flat_map(|(i, es)| es.iter().map(move |&e| (e, i))).collect();
    let mut first: BTreeMap<usize, EdgeId> = BTreeMap::new();
    let mut shifts = BTreeMap::new();
    for &c in net.conclusions() {
        let k = comp_of[&c];
        match first.get(&k) {
            None => {
                first.insert(k, c);
                shifts.insert(k, -ix.get(c));
            }
            Some(&f) if ix.get(f) != ix.get(c) => {
                return Err(AlignmentFailure::Conclusions { first: f, second: c, difference: ix.get(c) - ix.get(f) });
            }
            Some(_) => {}
        }
    }
    Ok(shift_indexing(&ix, net, &shifts).expect("component numbers come from components()"))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("net has cuts")]
pub struct HasCuts;

/// Conclusions at 0; going up, the index grows by one across paragraph,
/// of-course and why-not links. Every value is non-negative.
pub fn default_exponential_quasi_indexing(net: &Net) -> Result<Indexing, HasCuts> {
    if net.has_cuts() {
        return Err(HasCuts);
    }
    let layout = Layout::new(net);
    let mut memo: Vec<Option<i64>> = vec![None; net.edge_capacity()];
    fn level(net: &Net, layout: &Layout, memo: &mut Vec<Option<i64>>, e: EdgeId) -> i64 {
        if let Some(v) = memo[e.index()] {
            return v;
        }
        let v = match layout.consumer(e) {
            None => 0,
            Some(l) => {
                let link = net.link(l);
                level(net, layout, memo, link.conclusions[0]) + offset(link.kind, true, Flavor::Quasi).unwrap()
            }
        };
        memo[e.index()] = Some(v);
        v
    }
    for e in net.edge_ids() {
        level(net, &layout, &mut memo, e);
    }
    let assignment: BTreeMap<EdgeId, i64> = net.edge_ids().map(|e| (e, memo[e.index()].unwrap())).collect();
    assert!(assignment.values().all(|&v| v >= 0), "default quasi-indexing is non-negative");
    Ok(Indexing { flavor: Flavor::Quasi, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::*;
    use crate::formula::Formula;

    fn x() -> Formula {
        Formula::atom("X")
    }

    /// Conclusion `§X^ @ X`.
    fn par_x_to_x() -> Net {
        let n = paragraph_rule(&ax(x()), 0).unwrap();
        par_rule(&n, 0, 1).unwrap()
    }

    #[test]
    fn paragraph_implication_has_no_indexing() {
        let n = par_x_to_x();
        let w = solve_indexing(&n, Flavor::Plain).unwrap_err();
        assert_eq!(w.balance, 1);
        assert_eq!(balance(&n, &w.cycle, false).unwrap(), 1);
        // without the par the net is a tree, indexable but not strongly
        let open = paragraph_rule(&ax(x()), 0).unwrap();
        assert!(solve_indexing(&open, Flavor::Plain).is_ok());
        assert!(matches!(
            solve_aligned(&open, Flavor::Plain),
            Err(AlignmentFailure::Conclusions { difference: 1, .. })
        ));
    }

    #[test]
    fn paragraph_free_nets_index_to_zero() {
        let n = par_rule(&mix(&ax(x()), &ax(Formula::atom("Y"))), 0, 3).unwrap();
        let ix = solve_indexing(&n, Flavor::Plain).unwrap();
        assert!(ix.assignment.values().all(|&v| v == 0));
        check_indexing(&n, &ix).unwrap();
    }

    #[test]
    fn balance_examples() {
        let n = paragraph_rule(&ax(x()), 1).unwrap();
        assert_eq!(balance(&n, &Walk::default(), false).unwrap(), 0);
        let (pid, p) = n.links().find(|(_, l)| l.kind == LinkKind::Paragraph).unwrap();
        let (below, above) = (p.conclusions[0], p.premises[0]);
        let w = Walk { start: Some(below), steps: vec![(pid, above), (pid, below)] };
        assert_eq!(balance(&n, &w, false).unwrap(), 0);
        let half = Walk { start: Some(below), steps: vec![(pid, above)] };
        assert_eq!(balance(&n, &half, false).unwrap(), 1);
        let bad = Walk { start: Some(below), steps: vec![(LinkId(0), above)] };
        assert!(balance(&n, &bad, false).is_err() || n.link(LinkId(0)).conclusions.contains(&above));
    }

    #[test]
    fn cut_cycle_witness_is_unbalanced() {
        let mut n = ax(x());
        let [a, b] = [n.conclusions()[0], n.conclusions()[1]];
        let pa = n.add_formula_edge(Formula::paragraph(x().dual()));
        n.add_link(LinkKind::Paragraph, vec![a], vec![pa], None);
        let pb = n.add_formula_edge(Formula::paragraph(x()));
        n.add_link(LinkKind::Paragraph, vec![b], vec![pb], None);
        let qb = n.add_formula_edge(Formula::paragraph(Formula::paragraph(x())));
        n.add_link(LinkKind::Paragraph, vec![pb], vec![qb], None);
        n.set_conclusions(vec![pa, qb]);
        let ix = solve_indexing(&n, Flavor::Plain).unwrap();
        check_indexing(&n, &ix).unwrap();
        let mut m = n.clone();
        let t = m.add_formula_edge(Formula::tensor(Formula::paragraph(x().dual()), Formula::paragraph(Formula::paragraph(x()))));
        m.add_link(LinkKind::Tensor, vec![pa, qb], vec![t], None);
        m.set_conclusions(vec![t]);
        let w = solve_indexing(&m, Flavor::Plain).unwrap_err();
        assert_eq!(w.balance, 1);
        assert_eq!(balance(&m, &w.cycle, false).unwrap(), 1);
        assert_eq!(w.cycle.steps.last().unwrap().1, w.cycle.start.unwrap());
    }

    #[test]
    fn quasi_default_on_dereliction() {
        let d = flat_rule(&ax(x()), 0).unwrap();
        let d = whynot_rule(&d, &[0], &x().dual()).unwrap();
        let q = default_exponential_quasi_indexing(&d).unwrap();
        let (_, axl) = d.links().find(|(_, l)| l.kind == LinkKind::Axiom).unwrap();
        assert_eq!(q.get(axl.conclusions[0]), 1);
        assert_eq!(q.get(axl.conclusions[1]), 0);
        check_indexing(&d, &q).unwrap();
        let strict = Indexing { flavor: Flavor::Exponential, ..q };
        assert!(check_indexing(&d, &strict).is_err());
    }

    #[test]
    fn shifts_preserve_validity() {
        let n = mix(&paragraph_rule(&ax(x()), 0).unwrap(), &ax(Formula::atom("Y")));
        let ix = solve_indexing(&n, Flavor::Plain).unwrap();
        assert_eq!(components(&n, Flavor::Plain).len(), 2);
        let same = shift_indexing(&ix, &n, &BTreeMap::new()).unwrap();
        assert_eq!(same, ix);
        let moved = shift_indexing(&ix, &n, &BTreeMap::from([(1, 5)])).unwrap();
        check_indexing(&n, &moved).unwrap();
        assert_ne!(moved, ix);
        assert!(shift_indexing(&ix, &n, &BTreeMap::from([(2, 1)])).is_err());
    }
}
