//! The net data model: typed links, directed labelled edges and nested boxes.
//!
//! Identifiers are dense indices into slot vectors. Removed elements leave a
//! tombstone so that identifiers are never reused inside one net; rewriting
//! relies on this to express residues as "same identifier".

use std::fmt;

use crate::formula::{EdgeLabel, Formula};

macro_rules! id_type {
    ($name:ident, $prefix:literal) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(EdgeId, "e");
id_type!(LinkId, "l");
id_type!(BoxId, "b");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkKind {
    Axiom,
    Cut,
    One,
    Bottom,
    Tensor,
    Par,
    Flat,
    Pax,
    /// Arity is the number of premises; a nullary why-not is a weakening.
    WhyNot,
    OfCourse,
    Paragraph,
}

impl LinkKind {
    pub const ALL: [LinkKind; 11] = [
        LinkKind::Axiom,
        LinkKind::Cut,
        LinkKind::One,
        LinkKind::Bottom,
        LinkKind::Tensor,
        LinkKind::Par,
        LinkKind::Flat,
        LinkKind::Pax,
        LinkKind::WhyNot,
        LinkKind::OfCourse,
        LinkKind::Paragraph,
    ];

    /// Fixed number of premises, `None` for why-not links.
    pub fn arity(self) -> Option<usize> {
        match self {
            LinkKind::Axiom | LinkKind::One | LinkKind::Bottom => Some(0),
            LinkKind::Cut | LinkKind::Tensor | LinkKind::Par => Some(2),
            LinkKind::Flat | LinkKind::Pax | LinkKind::OfCourse | LinkKind::Paragraph => Some(1),
            LinkKind::WhyNot => None,
        }
    }

    pub fn co_arity(self) -> usize {
        match self {
            LinkKind::Axiom => 2,
            LinkKind::Cut => 0,
            _ => 1,
        }
    }

    /// Premises are unordered for cut and why-not links.
    pub fn unordered_premises(self) -> bool {
        matches!(self, LinkKind::Cut | LinkKind::WhyNot)
    }

    /// Links that a switching cuts down to one premise.
    pub fn is_switched(self) -> bool {
        matches!(self, LinkKind::Par | LinkKind::WhyNot)
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkKind::Axiom => "axiom",
            LinkKind::Cut => "cut",
            LinkKind::One => "one",
            LinkKind::Bottom => "bottom",
            LinkKind::Tensor => "tensor",
            LinkKind::Par => "par",
            LinkKind::Flat => "flat",
            LinkKind::Pax => "pax",
            LinkKind::WhyNot => "whynot",
            LinkKind::OfCourse => "ofcourse",
            LinkKind::Paragraph => "paragraph",
        }
    }

    pub fn from_name(name: &str) -> Option<LinkKind> {
        LinkKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub kind: LinkKind,
    pub premises: Vec<EdgeId>,
    pub conclusions: Vec<EdgeId>,
}

/// A box. Border links (the principal of-course and the pax links) are
/// recorded here but are not part of `contents`; they belong to the contents
/// of the parent box, or to depth zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetBox {
    pub principal: LinkId,
    pub auxiliaries: Vec<LinkId>,
    /// Links immediately inside the box, including the border links of
    /// directly nested boxes but not the contents of those boxes.
    pub contents: Vec<LinkId>,
    pub parent: Option<BoxId>,
}

impl NetBox {
    pub fn border(&self) -> impl Iterator<Item = LinkId> + '_ {
        std::iter::once(self.principal).chain(self.auxiliaries.iter().copied())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Net {
    edges: Vec<Option<Edge>>,
    links: Vec<Option<Link>>,
    boxes: Vec<Option<NetBox>>,
    conclusions: Vec<EdgeId>,
}

impl Net {
    /// The empty net.
    pub fn new() -> Net {
        Net::default()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        self.try_edge(id).unwrap_or_else(|| panic!("no edge {id}"))
    }

    pub fn try_edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id.index()).and_then(Option::as_ref)
    }

    pub fn label(&self, id: EdgeId) -> &EdgeLabel {
        &self.edge(id).label
    }

    pub fn link(&self, id: LinkId) -> &Link {
        self.try_link(id).unwrap_or_else(|| panic!("no link {id}"))
    }

    pub fn try_link(&self, id: LinkId) -> Option<&Link> {
        self.links.get(id.index()).and_then(Option::as_ref)
    }

    pub fn net_box(&self, id: BoxId) -> &NetBox {
        self.try_box(id).unwrap_or_else(|| panic!("no box {id}"))
    }

    pub fn try_box(&self, id: BoxId) -> Option<&NetBox> {
        self.boxes.get(id.index()).and_then(Option::as_ref)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn link_ids(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(|(i, _)| LinkId(i as u32))
    }

    pub fn box_ids(&self) -> impl Iterator<Item = BoxId> + '_ {
        self.boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_some())
            .map(|(i, _)| BoxId(i as u32))
    }

    pub fn links(&self) -> impl Iterator<Item = (LinkId, &Link)> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.as_ref().map(|l| (LinkId(i as u32), l)))
    }

    pub fn boxes(&self) -> impl Iterator<Item = (BoxId, &NetBox)> + '_ {
        self.boxes
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.as_ref().map(|b| (BoxId(i as u32), b)))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn num_links(&self) -> usize {
        self.links.iter().filter(|l| l.is_some()).count()
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.iter().filter(|b| b.is_some()).count()
    }

    pub fn count_kind(&self, kind: LinkKind) -> usize {
        self.links().filter(|(_, l)| l.kind == kind).count()
    }

    /// Upper bound (exclusive) on link indices, for sizing side tables.
    pub fn link_capacity(&self) -> usize {
        self.links.len()
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn box_capacity(&self) -> usize {
        self.boxes.len()
    }

    pub fn conclusions(&self) -> &[EdgeId] {
        &self.conclusions
    }

    pub fn conclusion_labels(&self) -> Vec<EdgeLabel> {
        self.conclusions.iter().map(|&e| self.label(e).clone()).collect()
    }

    pub fn has_cuts(&self) -> bool {
        self.links().any(|(_, l)| l.kind == LinkKind::Cut)
    }

    pub fn has_flat_conclusion(&self) -> bool {
        self.conclusions.iter().any(|&e| self.label(e).is_flat())
    }

    // ----- low-level mutation -------------------------------------------
    //
    // These do not maintain any invariant beyond slot bookkeeping; callers
    // are the builder, the loader and the rewriting engine.

    pub fn add_edge(&mut self, label: EdgeLabel) -> EdgeId {
        self.edges.push(Some(Edge { label }));
        EdgeId(self.edges.len() as u32 - 1)
    }

    pub fn add_formula_edge(&mut self, f: Formula) -> EdgeId {
        self.add_edge(EdgeLabel::Plain(f))
    }

    /// Adds a link and records it in the contents of `container`.
    pub fn add_link(
        &mut self,
        kind: LinkKind,
        premises: Vec<EdgeId>,
        conclusions: Vec<EdgeId>,
        container: Option<BoxId>,
    ) -> LinkId {
        self.links.push(Some(Link { kind, premises, conclusions }));
        let id = LinkId(self.links.len() as u32 - 1);
        if let Some(b) = container {
            self.box_mut(b).contents.push(id);
        }
        id
    }

    pub fn add_box(&mut self, principal: LinkId, auxiliaries: Vec<LinkId>, parent: Option<BoxId>) -> BoxId {
        self.boxes.push(Some(NetBox { principal, auxiliaries, contents: Vec::new(), parent }));
        BoxId(self.boxes.len() as u32 - 1)
    }

    pub fn link_mut(&mut self, id: LinkId) -> &mut Link {
        self.links[id.index()].as_mut().unwrap_or_else(|| panic!("no link {id}"))
    }

    pub fn edge_mut(&mut self, id: EdgeId) -> &mut Edge {
        self.edges[id.index()].as_mut().unwrap_or_else(|| panic!("no edge {id}"))
    }

    pub fn box_mut(&mut self, id: BoxId) -> &mut NetBox {
        self.boxes[id.index()].as_mut().unwrap_or_else(|| panic!("no box {id}"))
    }

    /// Removes a link from the slot table and from every box record that
    /// mentions it in its contents.
    pub fn remove_link(&mut self, id: LinkId) {
        self.links[id.index()] = None;
        for b in self.boxes.iter_mut().flatten() {
            b.contents.retain(|&l| l != id);
            b.auxiliaries.retain(|&l| l != id);
        }
    }

    pub fn remove_edge(&mut self, id: EdgeId) {
        self.edges[id.index()] = None;
        self.conclusions.retain(|&e| e != id);
    }

    pub fn remove_box(&mut self, id: BoxId) {
        self.boxes[id.index()] = None;
    }

    pub fn set_conclusions(&mut self, conclusions: Vec<EdgeId>) {
        self.conclusions = conclusions;
    }

    pub fn conclusions_mut(&mut self) -> &mut Vec<EdgeId> {
        &mut self.conclusions
    }

    /// Copies every element of `other` into `self` under fresh identifiers.
    /// Top-level links and boxes of `other` land in `container`. The
    /// conclusions of `other` are appended to those of `self`.
    pub fn absorb(&mut self, other: &Net, container: Option<BoxId>) -> Renaming {
        let mut ren = Renaming::default();
        for id in other.edge_ids() {
            let new = self.add_edge(other.label(id).clone());
            ren.edges.insert(id, new);
        }
        // boxes first so that links can be placed in them
        let layout = Layout::new(other);
        for (id, b) in other.boxes() {
            let placeholder = self.add_box(b.principal, Vec::new(), None);
            ren.boxes.insert(id, placeholder);
        }
        for (id, b) in other.boxes() {
            let parent = match b.parent {
                Some(p) => Some(ren.boxes[&p]),
                None => container,
            };
            self.box_mut(ren.boxes[&id]).parent = parent;
        }
        for (id, l) in other.links() {
            let prem = l.premises.iter().map(|e| ren.edges[e]).collect();
            let conc = l.conclusions.iter().map(|e| ren.edges[e]).collect();
            let target = match layout.container(id) {
                Some(b) => Some(ren.boxes[&b]),
                None => container,
            };
            let new = self.add_link(l.kind, prem, conc, target);
            ren.links.insert(id, new);
        }
        for (id, b) in other.boxes() {
            let principal = ren.links[&b.principal];
            let aux = b.auxiliaries.iter().map(|l| ren.links[l]).collect();
            let nb = self.box_mut(ren.boxes[&id]);
            nb.principal = principal;
            nb.auxiliaries = aux;
        }
        for &c in &other.conclusions {
            self.conclusions.push(ren.edges[&c]);
        }
        ren
    }

    /// Same net with identifiers renumbered densely, dropping tombstones.
    pub fn compact(&self) -> Net {
        let mut out = Net::new();
        let ren = out.absorb(self, None);
        // absorb appends conclusions in order; nothing else to fix
        debug_assert_eq!(ren.edges.len(), self.num_edges());
        out
    }
}

/// Identifier translation produced by [`Net::absorb`].
#[derive(Clone, Debug, Default)]
pub struct Renaming {
    pub edges: std::collections::BTreeMap<EdgeId, EdgeId>,
    pub links: std::collections::BTreeMap<LinkId, LinkId>,
    pub boxes: std::collections::BTreeMap<BoxId, BoxId>,
}

/// Derived incidence and nesting information for a net.
///
/// Built in one pass; on malformed nets the first producer/consumer/box
/// seen wins, and [`crate::validate`] reports the conflicts.
#[derive(Clone, Debug)]
pub struct Layout {
    producer: Vec<Option<LinkId>>,
    consumer: Vec<Option<LinkId>>,
    container: Vec<Option<BoxId>>,
    border: Vec<Option<BoxId>>,
    box_depth: Vec<usize>,
    children: Vec<Vec<BoxId>>,
}

impl Layout {
    pub fn new(net: &Net) -> Layout {
        let mut producer = vec![None; net.edge_capacity()];
        let mut consumer = vec![None; net.edge_capacity()];
        for (id, l) in net.links() {
            for &e in &l.conclusions {
                if let Some(slot) = producer.get_mut(e.index()) {
                    slot.get_or_insert(id);
                }
            }
            for &e in &l.premises {
                if let Some(slot) = consumer.get_mut(e.index()) {
                    slot.get_or_insert(id);
                }
            }
        }
        let mut container = vec![None; net.link_capacity()];
        let mut border = vec![None; net.link_capacity()];
        let mut children = vec![Vec::new(); net.box_capacity()];
        for (bid, b) in net.boxes() {
            for &l in &b.contents {
                if let Some(slot) = container.get_mut(l.index()) {
                    slot.get_or_insert(bid);
                }
            }
            for l in b.border() {
                if let Some(slot) = border.get_mut(l.index()) {
                    slot.get_or_insert(bid);
                }
            }
            if let Some(p) = b.parent {
                if let Some(c) = children.get_mut(p.index()) {
                    c.push(bid);
                }
            }
        }
        let mut box_depth = vec![0; net.box_capacity()];
        for (bid, _) in net.boxes() {
            // parent chains are bounded by the box count even when cyclic
            let mut d = 0;
            let mut cur = net.net_box(bid).parent;
            while let Some(p) = cur {
                d += 1;
                if d > net.box_capacity() {
                    break;
                }
                cur = net.try_box(p).and_then(|b| b.parent);
            }
            box_depth[bid.index()] = d;
        }
        Layout { producer, consumer, container, border, box_depth, children }
    }

    pub fn producer(&self, e: EdgeId) -> Option<LinkId> {
        self.producer.get(e.index()).copied().flatten()
    }

    pub fn consumer(&self, e: EdgeId) -> Option<LinkId> {
        self.consumer.get(e.index()).copied().flatten()
    }

    /// Box whose contents include `l`; `None` at depth zero.
    pub fn container(&self, l: LinkId) -> Option<BoxId> {
        self.container.get(l.index()).copied().flatten()
    }

    /// Box for which `l` is the principal port or an auxiliary port.
    pub fn border_of(&self, l: LinkId) -> Option<BoxId> {
        self.border.get(l.index()).copied().flatten()
    }

    pub fn box_depth(&self, b: BoxId) -> usize {
        self.box_depth[b.index()]
    }

    pub fn children(&self, b: BoxId) -> &[BoxId] {
        &self.children[b.index()]
    }

    /// Number of boxes strictly containing the link. Border links have the
    /// depth of their box.
    pub fn link_depth(&self, l: LinkId) -> usize {
        match self.container(l) {
            None => 0,
            Some(b) => self.box_depth(b) + 1,
        }
    }

    pub fn edge_depth(&self, e: EdgeId) -> usize {
        match (self.producer(e), self.consumer(e)) {
            (Some(p), _) => self.link_depth(p),
            (None, Some(c)) => self.link_depth(c),
            (None, None) => 0,
        }
    }

    /// Box in which an edge lives (`None` at depth zero).
    pub fn edge_container(&self, e: EdgeId) -> Option<BoxId> {
        match (self.producer(e), self.consumer(e)) {
            (Some(p), _) => self.container(p),
            (None, Some(c)) => self.container(c),
            (None, None) => None,
        }
    }

    /// True if box `inner` equals `outer` or is nested inside it.
    pub fn box_within(&self, net: &Net, inner: BoxId, outer: BoxId) -> bool {
        let mut cur = Some(inner);
        let mut steps = 0;
        while let Some(b) = cur {
            if b == outer {
                return true;
            }
            steps += 1;
            if steps > net.box_capacity() {
                return false;
            }
            cur = net.try_box(b).and_then(|x| x.parent);
        }
        false
    }

    /// True if link `l` lies strictly inside box `b` (at any depth).
    pub fn link_inside(&self, net: &Net, l: LinkId, b: BoxId) -> bool {
        match self.container(l) {
            Some(c) => self.box_within(net, c, b),
            None => false,
        }
    }

    /// All links strictly inside `b`, at any depth, in identifier order.
    pub fn interior(&self, net: &Net, b: BoxId) -> Vec<LinkId> {
        net.link_ids().filter(|&l| self.link_inside(net, l, b)).collect()
    }

    /// Boxes nested strictly inside `b`, parents before children.
    pub fn nested_boxes(&self, b: BoxId) -> Vec<BoxId> {
        let mut out = Vec::new();
        let mut stack: Vec<BoxId> = self.children(b).iter().rev().copied().collect();
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(self.children(c).iter().rev().copied());
        }
        out
    }
}

impl Net {
    pub fn layout(&self) -> Layout {
        Layout::new(self)
    }
}

/// A link or an edge, used where both can be referred to (depth queries,
/// lift maps).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Link(LinkId),
    Edge(EdgeId),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Link(l) => l.fmt(f),
            Element::Edge(e) => e.fmt(f),
        }
    }
}

impl std::str::FromStr for Element {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, tail) = s.split_at(s.len().min(1));
        let n: u32 = tail.parse().map_err(|_| format!("bad element id '{s}'"))?;
        match head {
            "l" => Ok(Element::Link(LinkId(n))),
            "e" => Ok(Element::Edge(EdgeId(n))),
            _ => Err(format!("bad element id '{s}'")),
        }
    }
}
