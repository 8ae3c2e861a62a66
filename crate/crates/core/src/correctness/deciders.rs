use std::collections::{BTreeMap, VecDeque};

use crate::graph::{parr_closure, ClosureError};
use crate::net::{EdgeId, LinkId, LinkKind, Net};

use super::indexing::{balance, solve_aligned, AlignmentFailure, BalanceWitness, Flavor, Indexing, Walk};
use super::switching::is_dr_correct_fast;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum L3Error {
    #[error("not a DR-correct net")]
    NotDrCorrect,
    #[error("conclusion {0} carries a flat label")]
    FlatConclusion(EdgeId),
}

fn flat_conclusion(net: &Net) -> Option<EdgeId> {
    net.conclusions().iter().copied().find(|&e| net.label(e).is_flat())
}

/// A plain indexing giving every conclusion the same index, or why there is
/// none. Components are aligned independently.
pub fn strong_indexing(net: &Net) -> Result<Result<Indexing, AlignmentFailure>, ClosureError> {
    if let Some(e) = flat_conclusion(net) {
        return Err(ClosureError::FlatConclusion(e));
    }
    Ok(solve_aligned(net, Flavor::Plain))
}

pub fn is_strongly_indexable(net: &Net) -> Result<bool, ClosureError> {
    Ok(strong_indexing(net)?.is_ok())
}

/// A DR-net whose ⅋-closure is §-correct.
pub fn is_proof_net(net: &Net) -> bool {
    flat_conclusion(net).is_none() && is_dr_correct_fast(net) && matches!(is_strongly_indexable(net), Ok(true))
}

fn l3_precondition(net: &Net) -> Result<(), L3Error> {
    if let Some(e) = flat_conclusion(net) {
        return Err(L3Error::FlatConclusion(e));
    }
    if !is_dr_correct_fast(net) {
        return Err(L3Error::NotDrCorrect);
    }
    Ok(())
}

/// An exponential indexing with all conclusions at 0, or why there is none.
pub fn l3_indexing(net: &Net) -> Result<Result<Indexing, AlignmentFailure>, L3Error> {
    l3_precondition(net)?;
    Ok(solve_aligned(net, Flavor::Exponential))
}

/// Membership in linear logic by levels: the net admits an exponential
/// indexing.
pub fn is_l3_indexing_route(net: &Net) -> Result<bool, L3Error> {
    Ok(l3_indexing(net)?.is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricVerdict {
    pub member: bool,
    /// A cycle of the ⅋-closure that is not !?-balanced.
    pub witness: Option<BalanceWitness>,
    /// The ⅋-closure the witness refers to.
    pub closure: Net,
}

/// Membership in linear logic by levels: every cycle of the ⅋-closure is
/// !?-balanced. Decided with a union-find carrying index offsets.
pub fn is_l3_geometric(net: &Net) -> Result<GeometricVerdict, L3Error> {
    l3_precondition(net)?;
    let closure = parr_closure(net).map_err(|ClosureError::FlatConclusion(e)| L3Error::FlatConclusion(e))?;
    let witness = unbalanced_cycle(&closure);
    Ok(GeometricVerdict { member: witness.is_none(), witness, closure })
}

/// Height gained going from the conclusion of a link up to one of its
/// premises, counting paragraph and exponential links.
fn rise(kind: LinkKind) -> i64 {
    match kind {
        LinkKind::Paragraph | LinkKind::OfCourse | LinkKind::WhyNot => 1,
        _ => 0,
    }
}

/// Offsets union-find: `pot[x]` is the height of edge `x` minus the height
/// of its representative.
struct Offsets {
    parent: Vec<usize>,
    pot: Vec<i64>,
}

impl Offsets {
    fn find(&mut self, x: usize) -> (usize, i64) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let p = self.parent[x];
        let (r, pp) = self.find(p);
        self.parent[x] = r;
        self.pot[x] += pp;
        (r, self.pot[x])
    }

    /// Records `h(a) - h(b) = w`; returns false on contradiction.
    fn relate(&mut self, a: usize, b: usize, w: i64) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa - pb == w;
        }
        // h(a) = pa + h(ra), h(b) = pb + h(rb)  =>  h(rb) = h(ra) + pa - pb - w
        self.parent[rb] = ra;
        self.pot[rb] = pa - pb - w;
        true
    }
}

fn unbalanced_cycle(net: &Net) -> Option<BalanceWitness> {
    let cap = net.edge_capacity();
    let mut uf = Offsets { parent: (0..cap).collect(), pot: vec![0; cap] };
    // spanning forest of accepted relations, for witness paths
    let mut tree: Vec<Vec<(EdgeId, LinkId)>> = vec![Vec::new(); cap];
    for (id, l) in net.links() {
        let mut ends: Vec<(EdgeId, i64)> = l.premises.iter().map(|&e| (e, rise(l.kind))).collect();
        ends.extend(l.conclusions.iter().map(|&e| (e, 0)));
        for k in 1..ends.len() {
            let (a, ha) = ends[0];
            let (b, hb) = ends[k];
            if uf.relate(a.index(), b.index(), ha - hb) {
                tree[a.index()].push((b, id));
                tree[b.index()].push((a, id));
            } else {
                let mut steps = forest_path(&tree, b, a)?;
                steps.push((id, b));
                let cycle = Walk { start: Some(b), steps };
                let bal = balance(net, &cycle, true).unwrap_or(0);
                return Some(BalanceWitness { cycle, balance: bal, flavor: Flavor::Exponential });
            }
        }
    }
    None
}

fn forest_path(tree: &[Vec<(EdgeId, LinkId)>], from: EdgeId, to: EdgeId) -> Option<Vec<(LinkId, EdgeId)>> {
    let mut prev: BTreeMap<EdgeId, (EdgeId, LinkId)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; tree.len()];
    seen[from.index()] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &(v, l) in &tree[u.index()] {
            if !seen[v.index()] {
                seen[v.index()] = true;
                prev.insert(v, (u, l));
                queue.push_back(v);
            }
        }
    }
    if !seen[to.index()] {
        return None;
    }
    let mut steps = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, l) = prev[&cur];
        steps.push((l, cur));
        cur = p;
    }
    steps.reverse();
    Some(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::*;
    use crate::formula::Formula;

    fn x() -> Formula {
        Formula::atom("X")
    }

    #[test]
    fn dereliction_is_not_l3() {
        let d = dereliction(x());
        assert!(!is_l3_indexing_route(&d).unwrap());
        let g = is_l3_geometric(&d).unwrap();
        assert!(!g.member);
        assert!(g.witness.unwrap().balance > 0);
    }

    #[test]
    fn exponential_free_nets_are_l3() {
        let n = par_rule(&mix(&ax(x()), &ax(Formula::atom("Y"))), 1, 2).unwrap();
        assert!(is_l3_indexing_route(&n).unwrap());
        assert!(is_l3_geometric(&n).unwrap().member);
    }

    #[test]
    fn paragraph_implications_are_not_proof_nets() {
        let a = par_rule(&paragraph_rule(&ax(x()), 0).unwrap(), 0, 1).unwrap();
        let b = par_rule(&paragraph_rule(&ax(x()), 1).unwrap(), 0, 1).unwrap();
        for n in [a, b] {
            assert!(is_dr_correct_fast(&n));
            assert!(!is_strongly_indexable(&n).unwrap());
            assert!(!is_proof_net(&n));
        }
    }

    #[test]
    fn identity_on_paragraph_is_proof_net() {
        let n = paragraph_rule(&paragraph_rule(&ax(x()), 0).unwrap(), 1).unwrap();
        assert!(is_proof_net(&n));
    }

    #[test]
    fn preconditions() {
        let f = flat_rule(&ax(x()), 0).unwrap();
        assert_eq!(is_l3_indexing_route(&f), Err(L3Error::FlatConclusion(f.conclusions()[0])));
        assert!(!is_proof_net(&f));
    }
}
