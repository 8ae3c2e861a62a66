//! Interactive tests on nets with every atom instantiated by `X ⊗ X`.
//!
//! An atom site is the four-link net `id_{X⊗X}` (two axioms on `X`, a tensor
//! of their positive sides, a par of their negative sides in the same
//! order) or its crossed variant `γ_{X,X}` (par premises swapped).

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::builder::{ax, bottom_rule, daimon, flat_rule, mix, one_rule, par_rule, paragraph_rule, promotion, tensor_rule, whynot_rule};
use crate::canon::nets_equal;
use crate::correctness::{default_exponential_quasi_indexing, is_dr_correct_fast, HasCuts};
use crate::formula::{EdgeLabel, Formula, BULLET_ATOM};
use crate::net::{EdgeId, Layout, LinkId, LinkKind, Net};
use crate::rewrite::{normalize_with_budget, NormalizeError, Strategy, DEFAULT_STEP_BUDGET};

/// Identity on `a` with atomic axioms; conclusions `a⊥, a`.
pub fn identity_net(a: &Formula) -> Net {
    let pair = |b: &Formula, c: &Formula| mix(&identity_net(b), &identity_net(c));
    match a {
        Formula::Atom { .. } => ax(a.clone()),
        Formula::One => mix(&bottom_rule(&daimon()), &one_rule()),
        Formula::Bottom => bottom_rule(&one_rule()),
        Formula::Tensor(b, c) => {
            // [b⊥, b, c⊥, c] -> [b⊥, b⊗c, c⊥] -> [b⊥⅋c⊥, b⊗c]
            let n = tensor_rule(&identity_net(b), 1, &identity_net(c), 1).unwrap();
            par_rule(&n, 0, 2).unwrap()
        }
        Formula::Par(b, c) => {
            // [b⊥, b, c⊥, c] -> [b⊥⊗c⊥, b, c] -> [b⊥⊗c⊥, b⅋c]
            let n = tensor_inside(&pair(b, c), 0, 2);
            par_rule(&n, 1, 2).unwrap()
        }
        Formula::Paragraph(b) => {
            let n = paragraph_rule(&identity_net(b), 0).unwrap();
            paragraph_rule(&n, 1).unwrap()
        }
        Formula::OfCourse(b) => {
            let n = flat_rule(&identity_net(b), 0).unwrap();
            let n = promotion(&n, 1).unwrap();
            whynot_rule(&n, &[0], &b.dual()).unwrap()
        }
        Formula::WhyNot(b) => {
            let n = flat_rule(&identity_net(b), 1).unwrap();
            let n = promotion(&n, 0).unwrap();
            whynot_rule(&n, &[1], b).unwrap()
        }
    }
}

/// Tensor of two conclusions of the same net, placed at the first one.
fn tensor_inside(n: &Net, i: usize, j: usize) -> Net {
    let mut out = n.clone();
    let (ei, ej) = (n.conclusions()[i], n.conclusions()[j]);
    let f = Formula::tensor(n.label(ei).formula().clone(), n.label(ej).formula().clone());
    let c = out.add_formula_edge(f);
    out.add_link(LinkKind::Tensor, vec![ei, ej], vec![c], None);
    let concl: Vec<EdgeId> = n
        .conclusions()
        .iter()
        .enumerate()
        .filter_map(|(k, &e)| if k == i { Some(c) } else if k == j { None } else { Some(e) })
        .collect();
    out.set_conclusions(concl);
    out
}

/// `γ_{X,X}`: conclusions `X⊥ ⅋ X⊥, X ⊗ X` with crossed axioms.
pub fn swap_net() -> Net {
    let n = tensor_rule(&ax(Formula::atom(BULLET_ATOM)), 1, &ax(Formula::atom(BULLET_ATOM)), 1).unwrap();
    par_rule(&n, 2, 0).unwrap()
}

/// Puts `replacement` (conclusions `A⊥, A`) in place of the axiom `alpha`.
/// `flip` matches the replacement's conclusions to the axiom's in reverse.
fn replace_axiom(net: &mut Net, layout: &Layout, alpha: LinkId, replacement: &Net, flip: bool) {
    let targets = net.link(alpha).conclusions.clone();
    let before = net.conclusions().len();
    let ren = net.absorb(replacement, layout.container(alpha));
    net.conclusions_mut().truncate(before);
    let rl = replacement.layout();
    for (k, &target) in targets.iter().enumerate() {
        let src = replacement.conclusions()[if flip { 1 - k } else { k }];
        let producer = ren.links[&rl.producer(src).expect("replacement conclusions are produced")];
        let new = ren.edges[&src];
        for c in net.link_mut(producer).conclusions.iter_mut() {
            if *c == new {
                *c = target;
            }
        }
        net.remove_edge(new);
    }
    net.remove_link(alpha);
}

/// Replaces every axiom on a compound formula by its expansion.
pub fn eta_expand(net: &Net) -> Result<Net, HasCuts> {
    if net.has_cuts() {
        return Err(HasCuts);
    }
    let mut out = net.clone();
    let layout = net.layout();
    for (id, l) in net.links() {
        if l.kind != LinkKind::Axiom {
            continue;
        }
        let a = net.label(l.conclusions[1]).formula();
        if a.is_atomic() {
            continue;
        }
        replace_axiom(&mut out, &layout, id, &identity_net(a), false);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BulletError {
    #[error("axiom {0} is not atomic; eta-expand first")]
    NonAtomicAxiom(LinkId),
}

/// `π•`: every atomic axiom becomes an identity site on `X ⊗ X`.
pub fn bullet_net(net: &Net) -> Result<Net, BulletError> {
    let mut out = net.clone();
    for e in net.edge_ids() {
        out.edge_mut(e).label = net.label(e).map(Formula::bullet);
    }
    let layout = net.layout();
    let site = identity_net(&Formula::tensor(Formula::atom(BULLET_ATOM), Formula::atom(BULLET_ATOM)));
    for (id, l) in net.links() {
        if l.kind != LinkKind::Axiom {
            continue;
        }
        let a = net.label(l.conclusions[1]).formula();
        let Formula::Atom { dual, .. } = a else {
            return Err(BulletError::NonAtomicAxiom(id));
        };
        replace_axiom(&mut out, &layout, id, &site, *dual);
    }
    Ok(out)
}

/// An `id_{X⊗X}` or `γ_{X,X}` occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    /// Axiom feeding the left tensor premise, then the right one.
    pub axioms: [LinkId; 2],
    pub tensor: LinkId,
    pub par: LinkId,
    pub swapped: bool,
}

impl Site {
    pub fn links(&self) -> [LinkId; 4] {
        [self.axioms[0], self.axioms[1], self.tensor, self.par]
    }
}

/// Every site of a net, by tensor identifier.
pub fn sites(net: &Net) -> Vec<Site> {
    let layout = net.layout();
    let other = |ax: LinkId, e: EdgeId| net.link(ax).conclusions.iter().copied().find(|&c| c != e);
    let mut out = Vec::new();
    for (t, l) in net.links() {
        if l.kind != LinkKind::Tensor {
            continue;
        }
        let (Some(a0), Some(a1)) = (layout.producer(l.premises[0]), layout.producer(l.premises[1])) else {
            continue;
        };
        if a0 == a1 || net.link(a0).kind != LinkKind::Axiom || net.link(a1).kind != LinkKind::Axiom {
            continue;
        }
        let (Some(n0), Some(n1)) = (other(a0, l.premises[0]), other(a1, l.premises[1])) else { continue };
        let (Some(p), Some(q)) = (layout.consumer(n0), layout.consumer(n1)) else { continue };
        if p != q || net.link(p).kind != LinkKind::Par {
            continue;
        }
        let swapped = net.link(p).premises == [n1, n0];
        out.push(Site { axioms: [a0, a1], tensor: t, par: p, swapped });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomSite {
    pub site: Site,
    /// Index of the tensor conclusion in the default quasi-indexing.
    pub level: i64,
}

/// Sites of a cut-free net with their levels.
pub fn atom_sites(net: &Net) -> Result<Vec<AtomSite>, HasCuts> {
    let q = default_exponential_quasi_indexing(net)?;
    Ok(sites(net)
        .into_iter()
        .map(|site| AtomSite { site, level: q.get(net.link(site.tensor).conclusions[0]) })
        .collect())
}

fn set_swapped(net: &mut Net, site: &Site, swapped: bool) {
    if site.swapped != swapped {
        net.link_mut(site.par).premises.reverse();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Test {
    pub net: Net,
    pub formula: Formula,
    pub level: i64,
    pub swapped: Vec<Site>,
}

/// `θ^A_k`: the identity on `A•` with every site at level `k` crossed.
pub fn make_test(a: &Formula, k: i64) -> Test {
    let mut net = identity_net(&a.bullet());
    let mut swapped = Vec::new();
    for s in atom_sites(&net).expect("identity nets are cut-free") {
        if s.level == k {
            set_swapped(&mut net, &s.site, true);
            swapped.push(Site { swapped: true, ..s.site });
        }
    }
    Test { net, formula: a.clone(), level: k, swapped }
}

/// Highest site level of the identity on `A•`, if it has sites.
pub fn max_test_level(a: &Formula) -> Option<i64> {
    let id = identity_net(&a.bullet());
    atom_sites(&id).expect("identity nets are cut-free").iter().map(|s| s.level).max()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("{partners} partners for a net with {conclusions} conclusions")]
    TooManyPartners { partners: usize, conclusions: usize },
    #[error("conclusion {index} is not a formula")]
    FlatConclusion { index: usize },
    #[error("partner {index} has no conclusion {label}")]
    NoMatch { index: usize, label: String },
    #[error("partner {index} has several conclusions {label}; give the position explicitly")]
    Ambiguous { index: usize, label: String },
    #[error("partner {index}: conclusion {position} is not {label}")]
    Mismatch { index: usize, position: usize, label: String },
}

/// Juxtaposes `net` and the partners, cutting the `i`-th conclusion of `net`
/// against the dual conclusion of partner `i`. Identifiers of `net` are
/// kept.
pub fn cut_compose(net: &Net, partners: &[Net]) -> Result<Net, ComposeError> {
    if partners.len() > net.conclusions().len() {
        return Err(ComposeError::TooManyPartners { partners: partners.len(), conclusions: net.conclusions().len() });
    }
    let mut plan = Vec::new();
    for (i, p) in partners.iter().enumerate() {
        let want = dual_label(net, i)?;
        let hits: Vec<usize> = (0..p.conclusions().len()).filter(|&k| *p.label(p.conclusions()[k]) == want).collect();
        match hits.as_slice() {
            [] => return Err(ComposeError::NoMatch { index: i, label: want.to_string() }),
            [k] => plan.push((i, p, *k)),
            _ => return Err(ComposeError::Ambiguous { index: i, label: want.to_string() }),
        }
    }
    compose(net, &plan)
}

/// Explicit form: `(conclusion of net, partner, conclusion of partner)`.
pub fn cut_compose_at(net: &Net, plan: &[(usize, &Net, usize)]) -> Result<Net, ComposeError> {
    for (index, &(i, p, k)) in plan.iter().enumerate() {
        let want = dual_label(net, i)?;
        if p.conclusions().get(k).map(|&e| p.label(e)) != Some(&want) {
            return Err(ComposeError::Mismatch { index, position: k, label: want.to_string() });
        }
    }
    compose(net, plan)
}

fn dual_label(net: &Net, i: usize) -> Result<EdgeLabel, ComposeError> {
    let e = *net
        .conclusions()
        .get(i)
        .ok_or(ComposeError::TooManyPartners { partners: i + 1, conclusions: net.conclusions().len() })?;
    match net.label(e) {
        EdgeLabel::Plain(f) => Ok(EdgeLabel::Plain(f.dual())),
        EdgeLabel::Flat(_) => Err(ComposeError::FlatConclusion { index: i }),
    }
}

fn compose(net: &Net, plan: &[(usize, &Net, usize)]) -> Result<Net, ComposeError> {
    let mut out = net.clone();
    let mut cut_edges = BTreeSet::new();
    for &(i, p, k) in plan {
        let ren = out.absorb(p, None);
        let (a, b) = (net.conclusions()[i], ren.edges[&p.conclusions()[k]]);
        out.add_link(LinkKind::Cut, vec![a, b], vec![], None);
        cut_edges.insert(a);
        cut_edges.insert(b);
    }
    out.conclusions_mut().retain(|e| !cut_edges.contains(e));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterpretError {
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("net is not DR-correct")]
    NotDrCorrect,
}

/// `⟦π⟧`: normal form, eta-expanded, atoms instantiated, plus a bottom link.
pub fn syntactic_interpretation(net: &Net) -> Result<Net, InterpretError> {
    if !is_dr_correct_fast(net) {
        return Err(InterpretError::NotDrCorrect);
    }
    let (nf, _) = normalize_with_budget(net, Strategy::LeftmostOutermost, DEFAULT_STEP_BUDGET)?;
    let eta = eta_expand(&nf).expect("normal forms are cut-free");
    Ok(bottom_rule(&bullet_net(&eta).expect("eta-expanded nets have atomic axioms")))
}

/// Whether `a` is `b` with a non-empty set of its identity sites crossed.
pub fn swapping_compare(a: &Net, b: &Net) -> bool {
    let sa = sites(a);
    let sb = sites(b);
    let crossed_a = sa.iter().filter(|s| s.swapped).count();
    let crossed_b = sb.iter().filter(|s| s.swapped).count();
    if sa.len() != sb.len() || crossed_a <= crossed_b {
        return false;
    }
    if crossed_b == 0 {
        return nets_equal(&uncross(a, &sa), b);
    }
    // try every way of crossing extra identity sites of b
    let free: Vec<&Site> = sb.iter().filter(|s| !s.swapped).collect();
    let need = crossed_a - crossed_b;
    let mut found = false;
    choose(free.len(), need, &mut |pick| {
        if found {
            return;
        }
        let mut c = b.clone();
        for &k in pick {
            set_swapped(&mut c, free[k], true);
        }
        found = nets_equal(a, &c);
    });
    found
}

fn uncross(n: &Net, s: &[Site]) -> Net {
    let mut c = n.clone();
    for site in s {
        set_swapped(&mut c, site, false);
    }
    c
}

fn choose(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelResult {
    pub k: i64,
    pub pass: bool,
    /// Crossed sites in the normal form of the composition.
    pub swapped_sites: usize,
    /// The normal form is the tested net with some sites crossed.
    pub below: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractiveReport {
    pub formula: Option<Formula>,
    pub levels: Vec<LevelResult>,
}

impl InteractiveReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(|l| l.pass)
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|l| json!({ "k": l.k, "pass": l.pass, "swapped_sites": l.swapped_sites, "below": l.below }))
            .collect();
        json!({
            "formula": self.formula.as_ref().map(|f| f.to_string()).unwrap_or_default(),
            "levels": levels,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InteractiveError {
    #[error("net has cuts; normalize it first")]
    HasCuts,
    #[error("net has {0} conclusions; close it with pars first")]
    Conclusions(usize),
    #[error("conclusion carries a flat label")]
    FlatConclusion,
    #[error("net is not DR-correct")]
    NotDrCorrect,
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// Runs the tests `θ^A_k` against a cut-free single-conclusion net, for the
/// given levels or for every level carrying a site.
pub fn interactive_report(net: &Net, levels: Option<&[i64]>, budget: u64) -> Result<InteractiveReport, InteractiveError> {
    if net.has_cuts() {
        return Err(InteractiveError::HasCuts);
    }
    if net.has_flat_conclusion() {
        return Err(InteractiveError::FlatConclusion);
    }
    if net.conclusions().len() > 1 {
        return Err(InteractiveError::Conclusions(net.conclusions().len()));
    }
    if !is_dr_correct_fast(net) {
        return Err(InteractiveError::NotDrCorrect);
    }
    let Some(&c) = net.conclusions().first() else {
        return Ok(InteractiveReport { formula: None, levels: Vec::new() });
    };
    let a = net.label(c).formula().clone();
    let target = bullet_net(&eta_expand(net).expect("checked cut-free")).expect("eta-expanded");
    let ks: Vec<i64> = match levels {
        Some(ks) => ks.to_vec(),
        None => (0..=max_test_level(&a).unwrap_or(-1)).collect(),
    };
    let mut out = Vec::new();
    for k in ks {
        let test = make_test(&a, k);
        let composed = cut_compose(&target, std::slice::from_ref(&test.net)).expect("test type matches");
        let (nf, _) = normalize_with_budget(&composed, Strategy::LeftmostOutermost, budget)?;
        let pass = nets_equal(&nf, &target);
        let swapped_sites = sites(&nf).iter().filter(|s| s.swapped).count();
        let below = !pass && swapping_compare(&nf, &target);
        out.push(LevelResult { k, pass, swapped_sites, below });
    }
    Ok(InteractiveReport { formula: Some(a), levels: out })
}

/// Membership in linear logic by levels, decided by interactive tests.
pub fn interactive_l3_check(net: &Net) -> Result<InteractiveReport, InteractiveError> {
    interactive_report(net, None, DEFAULT_STEP_BUDGET)
}

/// A chain of three sites cut together: the inner toe's tensor conclusion is
/// cut against the par conclusion of `outer[0]`, its par conclusion against
/// the tensor conclusion of `outer[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Foot {
    pub inner: Site,
    pub outer: [Site; 2],
    pub cuts: [LinkId; 2],
}

pub fn detect_feet(net: &Net) -> Vec<Foot> {
    let layout = net.layout();
    let all = sites(net);
    let by_tensor = |l: LinkId| all.iter().find(|s| s.tensor == l);
    let by_par = |l: LinkId| all.iter().find(|s| s.par == l);
    // the site across a cut from edge `e`, with the cut
    let across = |e: EdgeId| -> Option<(LinkId, LinkId)> {
        let c = layout.consumer(e)?;
        let link = net.link(c);
        if link.kind != LinkKind::Cut {
            return None;
        }
        let other = *link.premises.iter().find(|&&x| x != e)?;
        Some((c, layout.producer(other)?))
    };
    let out_of = |l: LinkId| net.link(l).conclusions[0];
    let mut feet = Vec::new();
    for s in &all {
        let Some((c0, p)) = across(out_of(s.tensor)) else { continue };
        let Some((c1, t)) = across(out_of(s.par)) else { continue };
        let (Some(left), Some(right)) = (by_par(p), by_tensor(t)) else { continue };
        if left == s || right == s || left == right {
            continue;
        }
        // outer toes are not cut on their other side
        let left_open = across(out_of(left.tensor)).is_none_or(|(_, x)| by_par(x).is_none());
        let right_open = across(out_of(right.par)).is_none_or(|(_, x)| by_tensor(x).is_none());
        if left_open && right_open {
            feet.push(Foot { inner: *s, outer: [*left, *right], cuts: [c0, c1] });
        }
    }
    feet
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::dereliction;
    use crate::correctness::{is_l3_geometric, is_proof_net};
    use crate::rewrite::{normalize, normalize_no_axiom};
    use crate::validate::validate;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn identity_nets_are_expanded_and_correct() {
        for s in ["Z", "(Z * Y)", "(Z @ Y^)", "!Z", "?(Z @ 1)", "#(bot * !?Z)"] {
            let a = f(s);
            let id = identity_net(&a);
            assert!(validate(&id).is_valid(), "{s}");
            assert_eq!(id.conclusion_labels(), [EdgeLabel::Plain(a.dual()), EdgeLabel::Plain(a.clone())]);
            assert!(id.links().all(|(_, l)| l.kind != LinkKind::Axiom || id.label(l.conclusions[0]).formula().is_atomic()));
            assert!(is_proof_net(&id), "{s}");
            assert_eq!(eta_expand(&ax(a.clone())).unwrap().count_kind(LinkKind::Axiom), id.count_kind(LinkKind::Axiom));
        }
    }

    #[test]
    fn tensor_identity_is_a_site() {
        let id = identity_net(&f("(X * X)"));
        assert_eq!(id.num_links(), 4);
        let s = sites(&id);
        assert_eq!(s.len(), 1);
        assert!(!s[0].swapped);
        let g = swap_net();
        assert!(sites(&g)[0].swapped);
        assert!(!nets_equal(&g, &id));
        assert_eq!(g.conclusion_labels(), id.conclusion_labels());
        assert!(is_proof_net(&g));
    }

    #[test]
    fn bullet_of_axiom_is_the_site() {
        let b = bullet_net(&ax(f("Z"))).unwrap();
        assert!(nets_equal(&b, &identity_net(&f("(X * X)"))));
        let flipped = bullet_net(&ax(f("Z^"))).unwrap();
        assert!(validate(&flipped).is_valid());
        assert_eq!(flipped.conclusion_labels()[0], EdgeLabel::Plain(f("(X * X)")));
        assert!(matches!(bullet_net(&ax(f("!Z"))), Err(BulletError::NonAtomicAxiom(_))));
    }

    #[test]
    fn site_levels() {
        let s = atom_sites(&identity_net(&f("(?Z^ @ Z)").bullet())).unwrap();
        let mut levels: Vec<i64> = s.iter().map(|s| s.level).collect();
        levels.sort();
        assert_eq!(levels, [0, 1]);
    }

    #[test]
    fn tests_on_atoms() {
        let t = make_test(&f("Z"), 0);
        assert!(nets_equal(&t.net, &swap_net()));
        let t = make_test(&f("Z"), 3);
        assert!(t.swapped.is_empty());
        assert!(nets_equal(&t.net, &identity_net(&f("(X * X)"))));
        let t = make_test(&f("(?Z^ @ Z)"), 1);
        assert_eq!(t.swapped.len(), 1);
    }

    #[test]
    fn swap_is_self_inverse() {
        let g = swap_net();
        let c = cut_compose_at(&g, &[(1, &g, 0)]).unwrap();
        let (nf, _) = normalize(&c, Strategy::LeftmostOutermost).unwrap();
        assert!(nets_equal(&nf, &identity_net(&f("(X * X)"))));
    }

    #[test]
    fn identity_on_atom_passes() {
        let r = interactive_l3_check(&ax(f("Z")).clone()).unwrap_err();
        assert_eq!(r, InteractiveError::Conclusions(2));
        let closed = par_rule(&ax(f("Z")), 0, 1).unwrap();
        let r = interactive_l3_check(&closed).unwrap();
        assert!(r.passed());
        assert_eq!(r.levels.len(), 1);
    }

    #[test]
    fn dereliction_fails_with_a_crossed_residue() {
        let d = dereliction(f("Z"));
        let r = interactive_l3_check(&d).unwrap();
        assert!(!r.passed());
        let bad: Vec<_> = r.levels.iter().filter(|l| !l.pass).collect();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|l| l.below && l.swapped_sites >= 1));
        assert!(!is_l3_geometric(&d).unwrap().member);
    }

    #[test]
    fn swapping_relation() {
        let id = identity_net(&f("(X * X)"));
        assert!(!swapping_compare(&id, &id));
        assert!(swapping_compare(&swap_net(), &id));
        assert!(!swapping_compare(&id, &swap_net()));
        let two = identity_net(&f("((X * X) * (X * X))"));
        let s = sites(&two);
        let mut one = two.clone();
        set_swapped(&mut one, &s[0], true);
        let mut both = one.clone();
        set_swapped(&mut both, &s[1], true);
        assert!(swapping_compare(&both, &one));
        assert!(swapping_compare(&both, &two));
        assert!(!swapping_compare(&one, &both));
    }

    #[test]
    fn feet_of_an_axiom() {
        let pi = bullet_net(&ax(f("Z"))).unwrap();
        let ids: Vec<Net> = pi.conclusion_labels().iter().map(|l| identity_net(l.formula())).collect();
        let c = cut_compose(&pi, &ids).unwrap();
        let (m, t) = normalize_no_axiom(&c).unwrap();
        assert!(t.is_empty());
        let feet = detect_feet(&m);
        assert_eq!(feet.len(), 1);
        assert_eq!(feet[0].inner.tensor, sites(&pi)[0].tensor);
        assert!(detect_feet(&pi).is_empty());
    }

    #[test]
    fn interpretation_adds_one_bottom() {
        let d = par_rule(&ax(f("(Z * Y)")), 0, 1).unwrap();
        let i = syntactic_interpretation(&d).unwrap();
        assert_eq!(i.conclusions().len(), 2);
        assert_eq!(i.count_kind(LinkKind::Bottom), 1);
        assert_eq!(sites(&i).len(), 2);
    }
}
