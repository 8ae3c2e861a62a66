//! Switchings and Danos-Regnier correctness.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{find_cycle, level_graph, UGraph, UNode};
use crate::net::{BoxId, EdgeId, Layout, LinkId, Net};

/// Default cap on the number of switchings enumerated per box level.
pub const DEFAULT_SWITCHING_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{count} switchings at {level} exceed the budget of {budget}")]
pub struct BudgetExceeded {
    pub level: String,
    pub count: u128,
    pub budget: u64,
}

/// One premise chosen for every switched link of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Switching {
    /// `None` for depth zero, otherwise the box whose contents are switched.
    pub level: Option<BoxId>,
    /// Switched link to the position of its chosen premise.
    pub choices: BTreeMap<LinkId, usize>,
}

/// A switching with a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSwitching {
    pub switching: Switching,
    pub cycle: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrVerdict {
    pub correct: bool,
    pub witness: Option<CyclicSwitching>,
}

/// Par and why-not links with at least one premise directly at `level`.
pub fn switched_links(net: &Net, level: Option<BoxId>) -> Vec<(LinkId, usize)> {
    let layout = Layout::new(net);
    net.links()
        .filter(|(id, l)| l.kind.is_switched() && !l.premises.is_empty() && layout.container(*id) == level)
        .map(|(id, l)| (id, l.premises.len()))
        .collect()
}

/// Number of switchings at `level`.
pub fn switching_count(net: &Net, level: Option<BoxId>) -> u128 {
    switched_links(net, level)
        .iter()
        .fold(1u128, |acc, &(_, k)| acc.saturating_mul(k as u128))
}

/// All switchings of depth zero (boxes collapsed), or an error if there are
/// more than `budget`.
pub fn enumerate_switchings(net: &Net, budget: u64) -> Result<Switchings, BudgetExceeded> {
    enumerate_switchings_at(net, None, budget)
}

pub fn enumerate_switchings_at(
    net: &Net,
    level: Option<BoxId>,
    budget: u64,
) -> Result<Switchings, BudgetExceeded> {
    let count = switching_count(net, level);
    if count > budget as u128 {
        return Err(BudgetExceeded {
            level: level.map_or("depth 0".to_string(), |b| format!("box {b}")),
            count,
            budget,
        });
    }
    let links = switched_links(net, level);
    Ok(Switchings { level, digits: vec![0; links.len()], links, done: false })
}

/// Odometer over premise choices.
pub struct Switchings {
    level: Option<BoxId>,
    links: Vec<(LinkId, usize)>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Switchings {
    type Item = Switching;

    fn next(&mut self) -> Option<Switching> {
        if self.done {
            return None;
        }
        let choices = self.links.iter().zip(&self.digits).map(|(&(l, _), &d)| (l, d)).collect();
        let out = Switching { level: self.level, choices };
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.links[i].1 {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// The undirected graph of a switching: the level graph (nested boxes
/// collapsed) without the premises the switching erases.
pub fn switching_graph(net: &Net, s: &Switching) -> UGraph {
    let mut g = level_graph(net, s.level);
    let erased: BTreeSet<EdgeId> = s
        .choices
        .iter()
        .flat_map(|(&l, &k)| {
            net.link(l)
                .premises
                .iter()
                .enumerate()
                .filter(move |&(i, _)| i != k)
                .map(|(_, &e)| e)
        })
        .collect();
    g.edges.retain(|(_, _, e)| !erased.contains(e));
    g
}

fn levels(net: &Net) -> Vec<Option<BoxId>> {
    std::iter::once(None).chain(net.box_ids().map(Some)).collect()
}

/// Danos-Regnier correctness by enumerating every switching of every level.
pub fn is_dr_correct_brute(net: &Net, budget: u64) -> Result<DrVerdict, BudgetExceeded> {
    for level in levels(net) {
        for s in enumerate_switchings_at(net, level, budget)? {
            if let Some(cycle) = switching_graph(net, &s).find_cycle() {
                return Ok(DrVerdict { correct: false, witness: Some(CyclicSwitching { switching: s, cycle }) });
            }
        }
    }
    Ok(DrVerdict { correct: true, witness: None })
}

/// Danos-Regnier correctness. The decision uses [`is_dr_correct_fast`];
/// on failure a cyclic switching is searched for as a witness.
pub fn is_dr_correct(net: &Net) -> DrVerdict {
    if is_dr_correct_fast(net) {
        return DrVerdict { correct: true, witness: None };
    }
    DrVerdict { correct: false, witness: find_cyclic_switching(net) }
}

/// Searches a cyclic switching level by level, extending partial switchings
/// only while the graph built so far stays acyclic.
pub fn find_cyclic_switching(net: &Net) -> Option<CyclicSwitching> {
    for level in levels(net) {
        let base = level_graph(net, level);
        let links = switched_links(net, level);
        let switched_premises: BTreeSet<EdgeId> =
            links.iter().flat_map(|&(l, _)| net.link(l).premises.iter().copied()).collect();
        let fixed: Vec<(usize, usize, EdgeId)> =
            base.edges.iter().copied().filter(|(_, _, e)| !switched_premises.contains(e)).collect();
        if let Some(cycle) = find_cycle(base.nodes.len(), &fixed) {
            let choices = links.iter().map(|&(l, _)| (l, 0)).collect();
            return Some(CyclicSwitching { switching: Switching { level, choices }, cycle });
        }
        let arcs: BTreeMap<EdgeId, (usize, usize)> = base.edges.iter().map(|&(a, b, e)| (e, (a, b))).collect();
        let mut choice = Vec::new();
        if let Some(cycle) = extend(net, &base, &fixed, &arcs, &links, &mut choice) {
            let choices = links.iter().zip(choice).map(|(&(l, _), k)| (l, k)).collect();
            return Some(CyclicSwitching { switching: Switching { level, choices }, cycle });
        }
    }
    None
}

fn extend(
    net: &Net,
    base: &UGraph,
    edges: &[(usize, usize, EdgeId)],
    arcs: &BTreeMap<EdgeId, (usize, usize)>,
    links: &[(LinkId, usize)],
    choice: &mut Vec<usize>,
) -> Option<Vec<EdgeId>> {
    let i = choice.len();
    if i == links.len() {
        return None;
    }
    let (l, k) = links[i];
    for c in 0..k {
        let e = net.link(l).premises[c];
        let mut next = edges.to_vec();
        if let Some(&(a, b)) = arcs.get(&e) {
            next.push((a, b, e));
        }
        choice.push(c);
        if let Some(cycle) = find_cycle(base.nodes.len(), &next) {
            // complete the remaining choices arbitrarily
            choice.resize(links.len(), 0);
            return Some(cycle);
        }
        if let Some(cycle) = extend(net, base, &next, arcs, links, choice) {
            return Some(cycle);
        }
        choice.pop();
    }
    None
}

/// Exact polynomial check. Each level is dismantled the way a
/// sequentialization would build it backwards: links whose conclusions are
/// all pending and which are neither tensor nor cut are removed (this never
/// changes correctness); when only tensors and cuts are terminal, one whose
/// removal disconnects its two premises is removed. A correct level always
/// empties; getting stuck means some switching is cyclic.
pub fn is_dr_correct_fast(net: &Net) -> bool {
    levels(net).into_iter().all(|level| level_dismantles(net, level))
}

fn level_dismantles(net: &Net, level: Option<BoxId>) -> bool {
    let g = level_graph(net, level);
    let n = g.nodes.len();
    // for each node: graph edges where it is the producer / consumer
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(p, c, _)) in g.edges.iter().enumerate() {
        below[p].push(k);
        above[c].push(k);
    }
    let splittable = |v: usize| match g.nodes[v] {
        UNode::Link(l) => matches!(net.link(l).kind, crate::net::LinkKind::Tensor | crate::net::LinkKind::Cut),
        UNode::Box(_) => false,
    };
    let mut alive = vec![true; n];
    let mut edge_alive = vec![true; g.edges.len()];
    let mut remaining = n;
    loop {
        // remove terminal non-splitting nodes until none is left
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if alive[v] && !splittable(v) && below[v].iter().all(|&k| !edge_alive[k]) {
                    alive[v] = false;
                    remaining -= 1;
                    for &k in &above[v] {
                        edge_alive[k] = false;
                    }
                    changed = true;
                }
            }
        }
        if remaining == 0 {
            return true;
        }
        let mut split = None;
        for v in 0..n {
            if !(alive[v] && splittable(v) && below[v].iter().all(|&k| !edge_alive[k])) {
                continue;
            }
            let prem: Vec<usize> = above[v].iter().filter(|&&k| edge_alive[k]).map(|&k| g.edges[k].0).collect();
            if prem.len() != 2 {
                split = Some(v);
                break;
            }
            if !connected_without(&g, &alive, &edge_alive, v, prem[0], prem[1]) {
                split = Some(v);
                break;
            }
        }
        match split {
            Some(v) => {
                alive[v] = false;
                remaining -= 1;
                for &k in &above[v] {
                    edge_alive[k] = false;
                }
            }
            None => return false,
        }
    }
}

fn connected_without(g: &UGraph, alive: &[bool], edge_alive: &[bool], skip: usize, from: usize, to: usize) -> bool {
    if from == to {
        return true;
    }
    let n = g.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(a, b, _)) in g.edges.iter().enumerate() {
        if edge_alive[k] && a != skip && b != skip && alive[a] && alive[b] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::*;
    use crate::formula::Formula;
    use crate::net::LinkKind;

    fn x() -> Formula {
        Formula::atom("X")
    }

    #[test]
    fn counts() {
        let a = ax(x());
        assert_eq!(enumerate_switchings(&a, 10).unwrap().count(), 1);
        let p = par_rule(&a, 0, 1).unwrap();
        assert_eq!(enumerate_switchings(&p, 10).unwrap().count(), 2);
        // one par and one binary why-not
        let two = mix(&ax(x()), &ax(x()));
        let two = flat_rule(&flat_rule(&two, 0).unwrap(), 2).unwrap();
        let w = whynot_rule(&two, &[0, 2], &x().dual()).unwrap();
        let w = par_rule(&w, 1, 2).unwrap();
        assert_eq!(enumerate_switchings(&w, 10).unwrap().count(), 4);
        assert!(enumerate_switchings(&w, 3).is_err());
        // weakenings contribute a factor 1
        let wk = whynot_rule(&p, &[], &x()).unwrap();
        assert_eq!(enumerate_switchings(&wk, 10).unwrap().count(), 2);
    }

    #[test]
    fn tensor_loop_is_incorrect_with_witness() {
        let mut n = ax(x());
        let [a, b] = [n.conclusions()[0], n.conclusions()[1]];
        let t = n.add_formula_edge(Formula::tensor(x().dual(), x()));
        n.add_link(LinkKind::Tensor, vec![a, b], vec![t], None);
        n.set_conclusions(vec![t]);
        let v = is_dr_correct(&n);
        assert!(!v.correct);
        let w = v.witness.unwrap();
        assert_eq!(w.cycle.len(), 2);
        assert!(!is_dr_correct_brute(&n, 10).unwrap().correct);
    }

    #[test]
    fn identity_is_correct() {
        let p = par_rule(&ax(x()), 0, 1).unwrap();
        assert!(is_dr_correct(&p).correct);
        assert!(is_dr_correct_brute(&p, 10).unwrap().correct);
    }

    #[test]
    fn par_joining_two_sides_of_tensor() {
        // ax(A), ax(B), tensor(A, B), par(A^, B^): correct
        let n = mix(&ax(Formula::atom("A")), &ax(Formula::atom("B")));
        let n = tensor_rule(&n, 1, &daimon(), 0);
        assert!(n.is_err());
        let m = mix(&ax(Formula::atom("A")), &ax(Formula::atom("B")));
        let mut m2 = m.clone();
        let c = m2.conclusions().to_vec();
        let t = m2.add_formula_edge(Formula::tensor(Formula::atom("A"), Formula::atom("B")));
        m2.add_link(LinkKind::Tensor, vec![c[1], c[3]], vec![t], None);
        let p = m2.add_formula_edge(Formula::par(Formula::dual_atom("A"), Formula::dual_atom("B")));
        m2.add_link(LinkKind::Par, vec![c[0], c[2]], vec![p], None);
        m2.set_conclusions(vec![p, t]);
        assert!(crate::validate::validate(&m2).is_valid());
        assert!(is_dr_correct_fast(&m2));
        assert!(is_dr_correct_brute(&m2, 10).unwrap().correct);
        // tensor in place of the par is a cycle
        let last = m2.link_ids().last().unwrap();
        m2.link_mut(last).kind = LinkKind::Tensor;
        assert!(!is_dr_correct_fast(&m2));
        assert!(!is_dr_correct_brute(&m2, 10).unwrap().correct);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]
        #[test]
        fn fast_agrees_with_brute_force(seed in 0u64..1_000_000, flips in proptest::collection::vec(0usize..64, 0..4)) {
            use crate::generate::{random_net, GenParams};
            let p = GenParams { size: 14, cut_bias: 0.2, box_bias: 0.3, exponential_bias: 0.3, ..GenParams::default() };
            let mut n = random_net(seed, &p);
            // turning pars into tensors and why-nots' premises around breaks correctness in various ways
            let pars: Vec<LinkId> = n.links().filter(|(_, l)| l.kind == LinkKind::Par).map(|(id, _)| id).collect();
            for f in flips {
                if let Some(&l) = pars.get(f % pars.len().max(1)) {
                    n.link_mut(l).kind = LinkKind::Tensor;
                }
            }
            let brute = is_dr_correct_brute(&n, 1 << 16).unwrap();
            proptest::prop_assert_eq!(brute.correct, is_dr_correct_fast(&n));
            let v = is_dr_correct(&n);
            proptest::prop_assert_eq!(v.correct, brute.correct);
            if let Some(w) = v.witness {
                proptest::prop_assert!(switching_graph(&n, &w.switching).find_cycle().is_some());
            }
        }
    }
}
