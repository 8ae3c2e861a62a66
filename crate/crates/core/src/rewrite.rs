//! Cut-elimination.
//!
//! Steps rewrite a net in place: surviving links and edges keep their
//! identifiers and created ones get fresh identifiers. Each step reports a
//! [`LiftMap`] sending every created element except new cuts to the element
//! it comes from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Map, Value};

use crate::correctness::{solve_indexing, Flavor, Indexing};
use crate::formula::{EdgeLabel, Formula};
use crate::net::{BoxId, EdgeId, Layout, LinkId, LinkKind, Net};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepKind {
    Axiom,
    Unit,
    Multiplicative,
    Exponential,
    Paragraph,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Axiom => "axiom",
            StepKind::Unit => "unit",
            StepKind::Multiplicative => "multiplicative",
            StepKind::Exponential => "exponential",
            StepKind::Paragraph => "paragraph",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Redex {
    pub cut: LinkId,
    pub kind: StepKind,
}

/// Residue bookkeeping for one step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiftMap {
    /// Created links and their lifts.
    pub links: BTreeMap<LinkId, LinkId>,
    /// Created edges and their lifts.
    pub edges: BTreeMap<EdgeId, EdgeId>,
    /// Created cut links; they have no lift.
    pub fresh_cuts: Vec<LinkId>,
    pub erased_links: BTreeSet<LinkId>,
    pub erased_edges: BTreeSet<EdgeId>,
}

impl LiftMap {
    /// Lift of a link of the target, `None` for a created cut.
    pub fn lift_link(&self, l: LinkId) -> Option<LinkId> {
        if self.fresh_cuts.contains(&l) {
            return None;
        }
        Some(self.links.get(&l).copied().unwrap_or(l))
    }

    pub fn lift_edge(&self, e: EdgeId) -> EdgeId {
        self.edges.get(&e).copied().unwrap_or(e)
    }

    fn erase_link(&mut self, net: &mut Net, l: LinkId) {
        net.remove_link(l);
        self.erased_links.insert(l);
    }

    fn erase_edge(&mut self, net: &mut Net, e: EdgeId) {
        net.remove_edge(e);
        self.erased_edges.insert(e);
    }

    fn fresh_cut(&mut self, net: &mut Net, premises: [EdgeId; 2], container: Option<BoxId>) -> LinkId {
        let c = net.add_link(LinkKind::Cut, premises.to_vec(), Vec::new(), container);
        self.fresh_cuts.push(c);
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("{cut} is not a {kind} redex")]
    NotARedex { cut: LinkId, kind: StepKind },
    #[error("conclusion {0} carries a flat label; the exponential step needs formula conclusions")]
    FlatConclusion(EdgeId),
    #[error("an auxiliary port of the box cut at {0} feeds the same why-not link")]
    BoxFeedsCut(LinkId),
    #[error("malformed exponential wiring at {0}")]
    Wiring(LinkId),
}

fn classify(net: &Net, layout: &Layout, cut: LinkId) -> Option<StepKind> {
    let c = net.link(cut);
    if c.kind != LinkKind::Cut || c.premises.len() != 2 {
        return None;
    }
    let p0 = layout.producer(c.premises[0])?;
    let p1 = layout.producer(c.premises[1])?;
    if p0 == p1 {
        return None;
    }
    use LinkKind as K;
    match (net.link(p0).kind, net.link(p1).kind) {
        (K::Axiom, _) | (_, K::Axiom) => Some(StepKind::Axiom),
        (K::One, K::Bottom) | (K::Bottom, K::One) => Some(StepKind::Unit),
        (K::Tensor, K::Par) | (K::Par, K::Tensor) => Some(StepKind::Multiplicative),
        (K::OfCourse, K::WhyNot) | (K::WhyNot, K::OfCourse) => Some(StepKind::Exponential),
        (K::Paragraph, K::Paragraph) => Some(StepKind::Paragraph),
        _ => None,
    }
}

/// Every cut matching a step pattern, ordered by depth then identifier.
pub fn find_redexes(net: &Net) -> Vec<Redex> {
    let layout = net.layout();
    let mut out: Vec<(usize, Redex)> = net
        .links()
        .filter(|(_, l)| l.kind == LinkKind::Cut)
        .filter_map(|(id, _)| classify(net, &layout, id).map(|kind| (layout.link_depth(id), Redex { cut: id, kind })))
        .collect();
    out.sort();
    out.into_iter().map(|(_, r)| r).collect()
}

/// Applies one step to a copy of `net`.
pub fn apply_step(net: &Net, r: Redex) -> Result<(Net, LiftMap), StepError> {
    let mut n = net.clone();
    let lift = step_in_place(&mut n, r)?;
    Ok((n, lift))
}

/// Applies one step to `net` itself.
pub fn step_in_place(net: &mut Net, r: Redex) -> Result<LiftMap, StepError> {
    let layout = net.layout();
    if net.try_link(r.cut).is_none() || classify(net, &layout, r.cut) != Some(r.kind) {
        return Err(StepError::NotARedex { cut: r.cut, kind: r.kind });
    }
    let mut lift = LiftMap::default();
    match r.kind {
        StepKind::Axiom => axiom_step(net, &layout, r.cut, &mut lift),
        StepKind::Unit => unit_step(net, &layout, r.cut, &mut lift),
        StepKind::Multiplicative => multiplicative_step(net, &layout, r.cut, &mut lift),
        StepKind::Paragraph => paragraph_step(net, &layout, r.cut, &mut lift),
        StepKind::Exponential => exponential_step(net, &layout, r.cut, &mut lift)?,
    }
    Ok(lift)
}

fn producers(net: &Net, layout: &Layout, cut: LinkId) -> ([EdgeId; 2], [LinkId; 2]) {
    let p = &net.link(cut).premises;
    let e = [p[0], p[1]];
    (e, [layout.producer(e[0]).unwrap(), layout.producer(e[1]).unwrap()])
}

fn axiom_step(net: &mut Net, layout: &Layout, cut: LinkId, lift: &mut LiftMap) {
    let (e, p) = producers(net, layout, cut);
    let i = if net.link(p[0]).kind == LinkKind::Axiom { 0 } else { 1 };
    let (a, y, alpha) = (e[i], e[1 - i], p[i]);
    let x = net.link(alpha).conclusions.iter().copied().find(|&c| c != a).unwrap();
    match layout.consumer(x) {
        Some(u) => {
            for q in net.link_mut(u).premises.iter_mut() {
                if *q == x {
                    *q = y;
                }
            }
        }
        None => {
            for q in net.conclusions_mut().iter_mut() {
                if *q == x {
                    *q = y;
                }
            }
        }
    }
    lift.erase_link(net, alpha);
    lift.erase_link(net, cut);
    lift.erase_edge(net, a);
    lift.erase_edge(net, x);
}

fn unit_step(net: &mut Net, layout: &Layout, cut: LinkId, lift: &mut LiftMap) {
    let (e, p) = producers(net, layout, cut);
    for l in [p[0], p[1], cut] {
        lift.erase_link(net, l);
    }
    for x in e {
        lift.erase_edge(net, x);
    }
}

fn multiplicative_step(net: &mut Net, layout: &Layout, cut: LinkId, lift: &mut LiftMap) {
    let (e, p) = producers(net, layout, cut);
    let left = net.link(p[0]).premises.clone();
    let right = net.link(p[1]).premises.clone();
    let container = layout.container(cut);
    for l in [p[0], p[1], cut] {
        lift.erase_link(net, l);
    }
    for x in e {
        lift.erase_edge(net, x);
    }
    lift.fresh_cut(net, [left[0], right[0]], container);
    lift.fresh_cut(net, [left[1], right[1]], container);
}

fn paragraph_step(net: &mut Net, layout: &Layout, cut: LinkId, lift: &mut LiftMap) {
    let (e, p) = producers(net, layout, cut);
    let left = net.link(p[0]).premises[0];
    let right = net.link(p[1]).premises[0];
    let container = layout.container(cut);
    for l in [p[0], p[1], cut] {
        lift.erase_link(net, l);
    }
    for x in e {
        lift.erase_edge(net, x);
    }
    lift.fresh_cut(net, [left, right], container);
}

/// Where a premise of the cut why-not link comes from: a flat link, reached
/// through the pax links of `crossings` (outermost box first).
struct Source {
    body: EdgeId,
    place: Option<BoxId>,
    crossings: Vec<BoxId>,
    links: Vec<LinkId>,
    edges: Vec<EdgeId>,
}

/// Where an auxiliary port of the cut box goes: through the pax links of
/// `chain` (innermost first) down to the why-not link `target`.
struct Exit {
    port: LinkId,
    inner: EdgeId,
    chain: Vec<LinkId>,
    edges: Vec<EdgeId>,
    target: LinkId,
}

fn exponential_step(net: &mut Net, layout: &Layout, cut: LinkId, lift: &mut LiftMap) -> Result<(), StepError> {
    if let Some(&e) = net.conclusions().iter().find(|&&e| net.label(e).is_flat()) {
        return Err(StepError::FlatConclusion(e));
    }
    let (e, p) = producers(net, layout, cut);
    let bang_side = if net.link(p[0]).kind == LinkKind::OfCourse { 0 } else { 1 };
    let (oc, wn) = (p[bang_side], p[1 - bang_side]);
    let b = layout.border_of(oc).ok_or(StepError::Wiring(oc))?;
    let body_edge = net.link(oc).premises[0];

    let mut sources = Vec::new();
    for &q in &net.link(wn).premises {
        let mut s = Source { body: q, place: None, crossings: Vec::new(), links: Vec::new(), edges: vec![q] };
        let mut cur = q;
        loop {
            let l = layout.producer(cur).ok_or(StepError::Wiring(wn))?;
            let link = net.link(l);
            match link.kind {
                LinkKind::Flat => {
                    s.links.push(l);
                    s.body = link.premises[0];
                    s.place = layout.container(l);
                    break;
                }
                LinkKind::Pax => {
                    let bx = layout.border_of(l).ok_or(StepError::Wiring(l))?;
                    if bx == b {
                        return Err(StepError::BoxFeedsCut(cut));
                    }
                    s.crossings.push(bx);
                    s.links.push(l);
                    cur = link.premises[0];
                    s.edges.push(cur);
                }
                _ => return Err(StepError::Wiring(l)),
            }
        }
        sources.push(s);
    }

    let mut exits = Vec::new();
    for &port in &net.net_box(b).auxiliaries {
        let inner = net.link(port).premises[0];
        let mut cur = net.link(port).conclusions[0];
        let mut x = Exit { port, inner, chain: Vec::new(), edges: vec![cur], target: port };
        loop {
            let u = layout.consumer(cur).ok_or(StepError::FlatConclusion(cur))?;
            match net.link(u).kind {
                LinkKind::WhyNot if u == wn => return Err(StepError::BoxFeedsCut(cut)),
                LinkKind::WhyNot => {
                    x.target = u;
                    break;
                }
                LinkKind::Pax => {
                    x.chain.push(u);
                    cur = net.link(u).conclusions[0];
                    x.edges.push(cur);
                }
                _ => return Err(StepError::Wiring(u)),
            }
        }
        exits.push(x);
    }

    let interior = layout.interior(net, b);
    let nested = layout.nested_boxes(b);
    let mut merged: Vec<Vec<EdgeId>> = vec![Vec::new(); exits.len()];
    for s in &sources {
        let emap = copy_interior(net, layout, &interior, &nested, b, s.place, lift);
        let a = emap[&body_edge];
        let premises = if bang_side == 0 { [a, s.body] } else { [s.body, a] };
        lift.fresh_cut(net, premises, s.place);
        for (j, x) in exits.iter().enumerate() {
            let mut cur = emap[&x.inner];
            for &bx in s.crossings.iter().rev() {
                let (px, out) = add_pax(net, bx, cur);
                lift.links.insert(px, x.port);
                lift.edges.insert(out, x.edges[0]);
                cur = out;
            }
            for (m, &old) in x.chain.iter().enumerate() {
                let bx = layout.border_of(old).ok_or(StepError::Wiring(old))?;
                let (px, out) = add_pax(net, bx, cur);
                lift.links.insert(px, old);
                lift.edges.insert(out, x.edges[m + 1]);
                cur = out;
            }
            merged[j].push(cur);
        }
    }
    for (x, new) in exits.iter().zip(merged) {
        let slot = *x.edges.last().unwrap();
        let prem = &mut net.link_mut(x.target).premises;
        let pos = prem.iter().position(|&q| q == slot).ok_or(StepError::Wiring(x.target))?;
        prem.splice(pos..=pos, new);
    }

    // erase the redex
    let mut links: Vec<LinkId> = vec![cut, oc, wn];
    let mut edges: Vec<EdgeId> = e.to_vec();
    for s in &sources {
        links.extend(&s.links);
        edges.extend(&s.edges);
    }
    for x in &exits {
        links.push(x.port);
        links.extend(&x.chain);
        edges.extend(&x.edges);
    }
    for &l in &interior {
        edges.extend(net.link(l).conclusions.iter().copied());
        links.push(l);
    }
    for l in links {
        lift.erase_link(net, l);
    }
    for x in edges {
        lift.erase_edge(net, x);
    }
    for bx in nested.into_iter().chain([b]) {
        net.remove_box(bx);
    }
    Ok(())
}

/// New pax link on box `bx` carrying `inner` out.
fn add_pax(net: &mut Net, bx: BoxId, inner: EdgeId) -> (LinkId, EdgeId) {
    let out = net.add_edge(net.label(inner).clone());
    let parent = net.net_box(bx).parent;
    let px = net.add_link(LinkKind::Pax, vec![inner], vec![out], parent);
    net.box_mut(bx).auxiliaries.push(px);
    (px, out)
}

/// Copies the links strictly inside `b` (with their boxes and edges) into
/// `target`. Returns the edge renaming.
fn copy_interior(
    net: &mut Net,
    layout: &Layout,
    interior: &[LinkId],
    nested: &[BoxId],
    b: BoxId,
    target: Option<BoxId>,
    lift: &mut LiftMap,
) -> BTreeMap<EdgeId, EdgeId> {
    let mut bmap: BTreeMap<BoxId, BoxId> = BTreeMap::new();
    for &nb in nested {
        let parent = match net.net_box(nb).parent {
            Some(p) if p == b => target,
            Some(p) => Some(bmap[&p]),
            None => target,
        };
        let id = net.add_box(LinkId(0), Vec::new(), parent);
        bmap.insert(nb, id);
    }
    let mut emap = BTreeMap::new();
    for &l in interior {
        for e in net.link(l).conclusions.clone() {
            let new = net.add_edge(net.label(e).clone());
            emap.insert(e, new);
            lift.edges.insert(new, e);
        }
    }
    let mut lmap = BTreeMap::new();
    for &l in interior {
        let link = net.link(l).clone();
        let prem = link.premises.iter().map(|e| emap[e]).collect();
        let conc = link.conclusions.iter().map(|e| emap[e]).collect();
        let container = match layout.container(l) {
            Some(c) if c == b => target,
            Some(c) => Some(bmap[&c]),
            None => target,
        };
        let new = net.add_link(link.kind, prem, conc, container);
        lmap.insert(l, new);
        lift.links.insert(new, l);
    }
    for &nb in nested {
        let old = net.net_box(nb).clone();
        let copy = net.box_mut(bmap[&nb]);
        copy.principal = lmap[&old.principal];
        copy.auxiliaries = old.auxiliaries.iter().map(|a| lmap[a]).collect();
    }
    emap
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Shallowest cut first, ties broken by identifier.
    #[default]
    LeftmostOutermost,
    /// Deepest cut first.
    Innermost,
    /// Lowest index first, then as leftmost-outermost.
    ByLevel,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::LeftmostOutermost, Strategy::Innermost, Strategy::ByLevel];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::LeftmostOutermost => "lo",
            Strategy::Innermost => "in",
            Strategy::ByLevel => "level",
        }
    }

    pub fn from_name(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub redex: Redex,
    pub lift: LiftMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.redex.kind == kind).count()
    }

    pub fn to_json(&self) -> Value {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mut lift = Map::new();
                for (new, old) in &s.lift.links {
                    lift.insert(new.to_string(), json!(old.to_string()));
                }
                for (new, old) in &s.lift.edges {
                    lift.insert(new.to_string(), json!(old.to_string()));
                }
                let fresh: Vec<String> = s.lift.fresh_cuts.iter().map(|l| l.to_string()).collect();
                json!({ "cut": s.redex.cut.to_string(), "kind": s.redex.kind.name(), "lift": lift, "fresh": fresh })
            })
            .collect();
        Value::Array(steps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("step budget of {0} exhausted")]
    Budget(u64),
    #[error(transparent)]
    Step(#[from] StepError),
}

pub fn normalize(net: &Net, strategy: Strategy) -> Result<(Net, RewriteTrace), NormalizeError> {
    run(net, strategy, DEFAULT_STEP_BUDGET, true)
}

pub fn normalize_with_budget(net: &Net, strategy: Strategy, budget: u64) -> Result<(Net, RewriteTrace), NormalizeError> {
    run(net, strategy, budget, true)
}

/// Fixed point of every step except the axiom step. Multiplicative steps
/// between a tensor and a par whose premises all come from axioms are held
/// back as well: on nets whose atoms are instantiated by `X ⊗ X` they are
/// the images of axiom steps.
pub fn normalize_no_axiom(net: &Net) -> Result<(Net, RewriteTrace), NormalizeError> {
    run(net, Strategy::LeftmostOutermost, DEFAULT_STEP_BUDGET, false)
}

pub fn normalize_no_axiom_with_budget(net: &Net, budget: u64) -> Result<(Net, RewriteTrace), NormalizeError> {
    run(net, Strategy::LeftmostOutermost, budget, false)
}

fn run(net: &Net, strategy: Strategy, budget: u64, axiom: bool) -> Result<(Net, RewriteTrace), NormalizeError> {
    let mut n = net.clone();
    let mut trace = RewriteTrace::default();
    loop {
        let mut redexes = find_redexes(&n);
        if !axiom {
            let layout = n.layout();
            redexes.retain(|r| match r.kind {
                StepKind::Axiom => false,
                StepKind::Multiplicative => !between_atom_sites(&n, &layout, r.cut),
                _ => true,
            });
        }
        if redexes.is_empty() {
            return Ok((n, trace));
        }
        if trace.len() as u64 >= budget {
            return Err(NormalizeError::Budget(budget));
        }
        let r = pick(&n, strategy, &redexes);
        let lift = step_in_place(&mut n, r)?;
        trace.steps.push(TraceStep { redex: r, lift });
    }
}

fn between_atom_sites(net: &Net, layout: &Layout, cut: LinkId) -> bool {
    let (_, p) = producers(net, layout, cut);
    p.iter().all(|&l| {
        net.link(l).premises.iter().all(|&e| layout.producer(e).is_some_and(|a| net.link(a).kind == LinkKind::Axiom))
    })
}

fn pick(net: &Net, strategy: Strategy, redexes: &[Redex]) -> Redex {
    match strategy {
        Strategy::LeftmostOutermost => redexes[0],
        Strategy::Innermost => {
            let layout = net.layout();
            *redexes
                .iter()
                .min_by_key(|r| (std::cmp::Reverse(layout.link_depth(r.cut)), r.cut))
                .unwrap()
        }
        Strategy::ByLevel => {
            let ix = solve_indexing(net, Flavor::Plain).or_else(|_| solve_indexing(net, Flavor::Exponential));
            match ix {
                Ok(ix) => *redexes
                    .iter()
                    .enumerate()
                    .min_by_key(|&(k, r)| (ix.get(net.link(r.cut).premises[0]), k))
                    .unwrap()
                    .1,
                Err(_) => redexes[0],
            }
        }
    }
}

/// Re-applies the redexes of a trace.
pub fn replay(net: &Net, trace: &RewriteTrace) -> Result<Net, StepError> {
    let mut n = net.clone();
    for s in &trace.steps {
        step_in_place(&mut n, s.redex)?;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("step {0} is an axiom step")]
    AxiomStep(usize),
    #[error("step {step}: edge {edge} has no index")]
    Missing { step: usize, edge: EdgeId },
}

/// Moves an indexing along a trace: every residue takes the index of its
/// lift.
pub fn transport_indexing(q: &Indexing, t: &RewriteTrace) -> Result<Indexing, TransportError> {
    let mut cur = q.assignment.clone();
    for (k, s) in t.steps.iter().enumerate() {
        if s.redex.kind == StepKind::Axiom {
            return Err(TransportError::AxiomStep(k));
        }
        let mut next: BTreeMap<EdgeId, i64> =
            cur.iter().filter(|(e, _)| !s.lift.erased_edges.contains(e)).map(|(&e, &v)| (e, v)).collect();
        for (&new, old) in &s.lift.edges {
            let v = *cur.get(old).ok_or(TransportError::Missing { step: k, edge: *old })?;
            next.insert(new, v);
        }
        cur = next;
    }
    Ok(Indexing { flavor: q.flavor, assignment: cur })
}

/// `π⁺`: a paragraph link above every of-course and flat link.
pub fn shift_net(net: &Net) -> Net {
    let mut n = net.clone();
    let layout = n.layout();
    for e in net.edge_ids() {
        let label = match net.label(e) {
            EdgeLabel::Plain(f) => EdgeLabel::Plain(f.shift()),
            EdgeLabel::Flat(f) => EdgeLabel::Flat(Formula::paragraph(f.shift())),
        };
        n.edge_mut(e).label = label;
    }
    for (id, l) in net.links() {
        let container = match l.kind {
            LinkKind::OfCourse => layout.border_of(id),
            LinkKind::Flat => layout.container(id),
            _ => continue,
        };
        let below = l.premises[0];
        let above = n.add_formula_edge(Formula::paragraph(n.label(below).formula().clone()));
        n.add_link(LinkKind::Paragraph, vec![below], vec![above], container);
        n.link_mut(id).premises[0] = above;
    }
    n
}
