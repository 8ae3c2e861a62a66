//! Structural validation: every condition a net must satisfy before any
//! correctness question makes sense.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::{EdgeLabel, Formula};
use crate::net::{BoxId, EdgeId, Layout, LinkId, LinkKind, Net};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingEdge { link: LinkId, edge: EdgeId },
    DanglingLink { net_box: BoxId, link: LinkId },
    DanglingBox { net_box: BoxId, parent: BoxId },
    Arity { link: LinkId, kind: LinkKind, premises: usize, conclusions: usize },
    NoProducer { edge: EdgeId },
    SeveralProducers { edge: EdgeId, links: Vec<LinkId> },
    SeveralConsumers { edge: EdgeId, links: Vec<LinkId> },
    ConclusionConsumed { edge: EdgeId, link: LinkId },
    UndeclaredConclusion { edge: EdgeId },
    DuplicateConclusion { edge: EdgeId },
    Typing { link: LinkId, message: String },
    FlatPremise { edge: EdgeId, link: LinkId },
    PrincipalNotOfCourse { net_box: BoxId, link: LinkId },
    AuxiliaryNotPax { net_box: BoxId, link: LinkId },
    OfCourseNotPrincipal { link: LinkId, boxes: usize },
    PaxNotInBorder { link: LinkId, boxes: usize },
    Overlap { link: LinkId, boxes: Vec<BoxId> },
    BorderInsideOwnBox { net_box: BoxId, link: LinkId },
    BorderMisplaced { net_box: BoxId, link: LinkId },
    ParentCycle { net_box: BoxId },
    CrossesBorder { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DanglingEdge { link, edge } => write!(f, "link {link} refers to missing edge {edge}"),
            DanglingLink { net_box, link } => write!(f, "box {net_box} refers to missing link {link}"),
            DanglingBox { net_box, parent } => write!(f, "box {net_box} has missing parent {parent}"),
            Arity { link, kind, premises, conclusions } => write!(
                f,
                "link {link} ({kind}) has {premises} premise(s) and {conclusions} conclusion(s)"
            ),
            NoProducer { edge } => write!(f, "edge {edge} is the conclusion of no link"),
            SeveralProducers { edge, links } => {
                write!(f, "edge {edge} is the conclusion of >1 link: {}", join(links))
            }
            SeveralConsumers { edge, links } => {
                write!(f, "edge {edge} premise of >1 link: {}", join(links))
            }
            ConclusionConsumed { edge, link } => {
                write!(f, "declared conclusion {edge} is a premise of link {link}")
            }
            UndeclaredConclusion { edge } => {
                write!(f, "edge {edge} is premise of no link but not declared a conclusion")
            }
            DuplicateConclusion { edge } => write!(f, "edge {edge} declared as conclusion twice"),
            Typing { link, message } => write!(f, "link {link}: {message}"),
            FlatPremise { edge, link } => write!(
                f,
                "flat-labelled edge {edge} is a premise of link {link}, which is neither pax nor why-not"
            ),
            PrincipalNotOfCourse { net_box, link } => {
                write!(f, "principal port {link} of box {net_box} is not an of-course link")
            }
            AuxiliaryNotPax { net_box, link } => {
                write!(f, "auxiliary port {link} of box {net_box} is not a pax link")
            }
            OfCourseNotPrincipal { link, boxes } => write!(
                f,
                "of-course link {link} is principal port of {boxes} boxes (condition a: exactly one)"
            ),
            PaxNotInBorder { link, boxes } => write!(
                f,
                "pax link {link} is in the border of {boxes} boxes (condition b: exactly one)"
            ),
            Overlap { link, boxes } => write!(
                f,
                "link {link} lies in boxes {} which are neither disjoint nor nested (condition c)",
                join(boxes)
            ),
            BorderInsideOwnBox { net_box, link } => {
                write!(f, "border link {link} is listed among the contents of its own box {net_box}")
            }
            BorderMisplaced { net_box, link } => write!(
                f,
                "border link {link} of box {net_box} does not sit at the depth of the box"
            ),
            ParentCycle { net_box } => write!(f, "box {net_box} is nested inside itself"),
            CrossesBorder { edge } => {
                write!(f, "edge {edge} crosses a box border outside the ports of the box")
            }
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural condition on nets. Nets with ♭-labelled
/// conclusions are valid nets (the builder produces them); they are only
/// excluded from DR-nets and from net documents.
pub fn validate(net: &Net) -> ValidationReport {
    let mut out = Vec::new();

    // references
    let mut dangling = false;
    for (id, l) in net.links() {
        for &e in l.premises.iter().chain(&l.conclusions) {
            if net.try_edge(e).is_none() {
                out.push(Violation::DanglingEdge { link: id, edge: e });
                dangling = true;
            }
        }
    }
    for (bid, b) in net.boxes() {
        for l in b.border().chain(b.contents.iter().copied()) {
            if net.try_link(l).is_none() {
                out.push(Violation::DanglingLink { net_box: bid, link: l });
                dangling = true;
            }
        }
        if let Some(p) = b.parent {
            if net.try_box(p).is_none() {
                out.push(Violation::DanglingBox { net_box: bid, parent: p });
                dangling = true;
            }
        }
    }
    for &c in net.conclusions() {
        if net.try_edge(c).is_none() {
            out.push(Violation::NoProducer { edge: c });
            dangling = true;
        }
    }
    if dangling {
        return ValidationReport { violations: out };
    }

    // arity
    for (id, l) in net.links() {
        let arity_ok = l.kind.arity().is_none_or(|a| a == l.premises.len());
        if !arity_ok || l.conclusions.len() != l.kind.co_arity() {
            out.push(Violation::Arity {
                link: id,
                kind: l.kind,
                premises: l.premises.len(),
                conclusions: l.conclusions.len(),
            });
        }
    }

    // incidence
    let mut producers: BTreeMap<EdgeId, Vec<LinkId>> = BTreeMap::new();
    let mut consumers: BTreeMap<EdgeId, Vec<LinkId>> = BTreeMap::new();
    for (id, l) in net.links() {
        for &e in &l.conclusions {
            producers.entry(e).or_default().push(id);
        }
        for &e in &l.premises {
            consumers.entry(e).or_default().push(id);
        }
    }
    for e in net.edge_ids() {
        match producers.get(&e).map(Vec::as_slice) {
            None | Some([]) => out.push(Violation::NoProducer { edge: e }),
            Some([_]) => {}
            Some(many) => out.push(Violation::SeveralProducers { edge: e, links: many.to_vec() }),
        }
        if let Some(many) = consumers.get(&e) {
            if many.len() > 1 {
                out.push(Violation::SeveralConsumers { edge: e, links: many.clone() });
            }
        }
    }
    let mut declared = BTreeMap::new();
    for &c in net.conclusions() {
        if declared.insert(c, ()).is_some() {
            out.push(Violation::DuplicateConclusion { edge: c });
        }
        if let Some(cons) = consumers.get(&c) {
            out.push(Violation::ConclusionConsumed { edge: c, link: cons[0] });
        }
    }
    for e in net.edge_ids() {
        if !consumers.contains_key(&e) && !declared.contains_key(&e) {
            out.push(Violation::UndeclaredConclusion { edge: e });
        }
    }

    // typing
    for (id, l) in net.links() {
        if let Err(message) = check_typing(net, l.kind, &l.premises, &l.conclusions) {
            out.push(Violation::Typing { link: id, message });
        }
        if !matches!(l.kind, LinkKind::Pax | LinkKind::WhyNot) {
            for &e in &l.premises {
                if net.label(e).is_flat() {
                    out.push(Violation::FlatPremise { edge: e, link: id });
                }
            }
        }
    }

    // boxes
    let mut principal_count: BTreeMap<LinkId, usize> = BTreeMap::new();
    let mut aux_count: BTreeMap<LinkId, usize> = BTreeMap::new();
    let mut membership: BTreeMap<LinkId, Vec<BoxId>> = BTreeMap::new();
    for (bid, b) in net.boxes() {
        if net.link(b.principal).kind != LinkKind::OfCourse {
            out.push(Violation::PrincipalNotOfCourse { net_box: bid, link: b.principal });
        }
        *principal_count.entry(b.principal).or_default() += 1;
        for &a in &b.auxiliaries {
            if net.link(a).kind != LinkKind::Pax {
                out.push(Violation::AuxiliaryNotPax { net_box: bid, link: a });
            }
            *aux_count.entry(a).or_default() += 1;
        }
        for &l in &b.contents {
            membership.entry(l).or_default().push(bid);
        }
        let mut seen = 0;
        let mut cur = b.parent;
        while let Some(p) = cur {
            if p == bid || seen > net.box_capacity() {
                out.push(Violation::ParentCycle { net_box: bid });
                break;
            }
            seen += 1;
            cur = net.net_box(p).parent;
        }
    }
    if out.iter().any(|v| matches!(v, Violation::ParentCycle { .. })) {
        return ValidationReport { violations: out };
    }
    for (id, l) in net.links() {
        match l.kind {
            LinkKind::OfCourse => {
                let n = principal_count.get(&id).copied().unwrap_or(0);
                if n != 1 {
                    out.push(Violation::OfCourseNotPrincipal { link: id, boxes: n });
                }
            }
            LinkKind::Pax => {
                let n = aux_count.get(&id).copied().unwrap_or(0);
                if n != 1 {
                    out.push(Violation::PaxNotInBorder { link: id, boxes: n });
                }
            }
            _ => {}
        }
    }
    for (l, boxes) in &membership {
        if boxes.len() > 1 {
            out.push(Violation::Overlap { link: *l, boxes: boxes.clone() });
        }
    }
    let layout = Layout::new(net);
    for (bid, b) in net.boxes() {
        for l in b.border() {
            if b.contents.contains(&l) {
                out.push(Violation::BorderInsideOwnBox { net_box: bid, link: l });
            } else if layout.container(l) != b.parent {
                out.push(Violation::BorderMisplaced { net_box: bid, link: l });
            }
        }
    }

    // every edge stays inside one box, except across the ports
    for e in net.edge_ids() {
        let Some(p) = layout.producer(e) else { continue };
        let ok = match layout.consumer(e) {
            Some(c) => match layout.border_of(c) {
                Some(b) => layout.container(p) == Some(b),
                None => layout.container(p) == layout.container(c),
            },
            None => layout.container(p).is_none(),
        };
        if !ok {
            out.push(Violation::CrossesBorder { edge: e });
        }
    }

    ValidationReport { violations: out }
}

fn plain<'a>(net: &'a Net, e: EdgeId, what: &str) -> Result<&'a Formula, String> {
    net.label(e).as_plain().ok_or_else(|| format!("{what} {e} must carry a formula, not a flat label"))
}

fn check_typing(net: &Net, kind: LinkKind, prem: &[EdgeId], conc: &[EdgeId]) -> Result<(), String> {
    if kind.arity().is_some_and(|a| a != prem.len()) || conc.len() != kind.co_arity() {
        return Ok(()); // reported as an arity violation
    }
    let expect = |e: EdgeId, want: EdgeLabel| -> Result<(), String> {
        let got = net.label(e);
        if *got == want {
            Ok(())
        } else {
            Err(format!("edge {e} is labelled {got}, expected {want}"))
        }
    };
    match kind {
        LinkKind::Axiom => {
            let a = plain(net, conc[0], "conclusion")?;
            expect(conc[1], EdgeLabel::Plain(a.dual()))
        }
        LinkKind::Cut => {
            let a = plain(net, prem[0], "premise")?;
            plain(net, prem[1], "premise")?;
            expect(prem[1], EdgeLabel::Plain(a.dual()))
        }
        LinkKind::One => expect(conc[0], EdgeLabel::Plain(Formula::One)),
        LinkKind::Bottom => expect(conc[0], EdgeLabel::Plain(Formula::Bottom)),
        LinkKind::Tensor | LinkKind::Par => {
            let a = plain(net, prem[0], "premise")?.clone();
            let b = plain(net, prem[1], "premise")?.clone();
            let f = if kind == LinkKind::Tensor { Formula::tensor(a, b) } else { Formula::par(a, b) };
            expect(conc[0], EdgeLabel::Plain(f))
        }
        LinkKind::Flat => {
            let a = plain(net, prem[0], "premise")?;
            expect(conc[0], EdgeLabel::Flat(a.clone()))
        }
        LinkKind::Pax => match net.label(prem[0]) {
            EdgeLabel::Flat(a) => expect(conc[0], EdgeLabel::Flat(a.clone())),
            EdgeLabel::Plain(_) => Err(format!("pax premise {} must be a flat label", prem[0])),
        },
        LinkKind::WhyNot => {
            let body = match plain(net, conc[0], "conclusion")? {
                Formula::WhyNot(a) => a.as_ref().clone(),
                other => return Err(format!("why-not conclusion {} is {other}, not ?A", conc[0])),
            };
            for &p in prem {
                expect(p, EdgeLabel::Flat(body.clone()))?;
            }
            Ok(())
        }
        LinkKind::OfCourse => {
            let a = plain(net, prem[0], "premise")?;
            expect(conc[0], EdgeLabel::Plain(Formula::of_course(a.clone())))
        }
        LinkKind::Paragraph => {
            let a = plain(net, prem[0], "premise")?;
            expect(conc[0], EdgeLabel::Plain(Formula::paragraph(a.clone())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn axiom_net() -> Net {
        let mut n = Net::new();
        let a = n.add_formula_edge(Formula::dual_atom("X"));
        let b = n.add_formula_edge(Formula::atom("X"));
        n.add_link(LinkKind::Axiom, vec![], vec![a, b], None);
        n.set_conclusions(vec![a, b]);
        n
    }

    #[test]
    fn single_axiom_is_valid() {
        assert!(validate(&axiom_net()).is_valid());
        assert!(validate(&Net::new()).is_valid());
    }

    #[test]
    fn edge_premise_of_two_links() {
        let mut n = axiom_net();
        let [a, b] = [n.conclusions()[0], n.conclusions()[1]];
        let t = n.add_formula_edge(Formula::tensor(Formula::dual_atom("X"), Formula::atom("X")));
        n.add_link(LinkKind::Tensor, vec![a, b], vec![t], None);
        let c = n.add_formula_edge(Formula::dual_atom("X"));
        n.add_link(LinkKind::Flat, vec![a], vec![c], None);
        n.set_conclusions(vec![t, c]);
        let r = validate(&n);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::SeveralConsumers { edge, .. } if *edge == a)));
        assert!(r.to_string().contains("premise of >1 link"));
    }

    #[test]
    fn wrong_labels_are_typing_errors() {
        let mut n = Net::new();
        let a = n.add_formula_edge(Formula::atom("X"));
        let b = n.add_formula_edge(Formula::atom("X"));
        n.add_link(LinkKind::Axiom, vec![], vec![a, b], None);
        n.set_conclusions(vec![a, b]);
        assert!(matches!(validate(&n).violations[..], [Violation::Typing { .. }]));
    }

    #[test]
    fn undeclared_conclusion() {
        let mut n = axiom_net();
        n.set_conclusions(vec![n.conclusions()[0]]);
        assert!(matches!(validate(&n).violations[..], [Violation::UndeclaredConclusion { .. }]));
    }
}
