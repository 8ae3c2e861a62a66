//! JSON net documents.
//!
//! ```json
//! {"edges":[{"id":"e0","label":"X^"},{"id":"e1","label":"X"}],
//!  "links":[{"id":"l0","kind":"axiom","premises":[],"conclusions":["e0","e1"]}],
//!  "boxes":[],
//!  "conclusions":["e0","e1"]}
//! ```
//!
//! Box `contents` lists the links immediately inside the box, including the
//! border links of directly nested boxes; nested boxes go in `boxes`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{EdgeLabel, ParseError};
use crate::net::{BoxId, EdgeId, LinkId, LinkKind, Net};
use crate::validate::{validate, ValidationReport};

#[derive(Serialize, Deserialize)]
struct Doc {
    edges: Vec<EdgeDoc>,
    links: Vec<LinkDoc>,
    #[serde(default)]
    boxes: Vec<BoxDoc>,
    conclusions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct LinkDoc {
    id: String,
    kind: String,
    #[serde(default)]
    premises: Vec<String>,
    #[serde(default)]
    conclusions: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BoxDoc {
    principal: String,
    #[serde(default)]
    auxiliaries: Vec<String>,
    #[serde(default)]
    contents: Vec<String>,
    #[serde(default)]
    boxes: Vec<BoxDoc>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("edge {edge}: {source}")]
    Label { edge: String, source: ParseError },
    #[error("link {link}: unknown kind '{kind}'")]
    UnknownKind { link: String, kind: String },
    #[error("duplicate id '{0}'")]
    DuplicateId(String),
    #[error("reference to unknown {what} '{id}'")]
    UnknownId { what: &'static str, id: String },
    #[error("conclusion {edge} carries the flat label {label}; a net conclusion must be a formula")]
    FlatConclusion { edge: String, label: String },
    #[error("invalid net:\n{message}")]
    Invalid { report: ValidationReport, message: String },
}

/// Document names of the edges and links of a loaded net.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameTable {
    edges: BTreeMap<EdgeId, String>,
    links: BTreeMap<LinkId, String>,
}

impl NameTable {
    /// Document name of an edge, or its internal identifier for edges the
    /// document did not name.
    pub fn edge(&self, e: EdgeId) -> String {
        self.edges.get(&e).cloned().unwrap_or_else(|| e.to_string())
    }

    pub fn link(&self, l: LinkId) -> String {
        self.links.get(&l).cloned().unwrap_or_else(|| l.to_string())
    }

    /// Rewrites internal identifiers (`e3`, `l7`) in a message into
    /// document names.
    pub fn translate(&self, text: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let boundary = i == 0 || !chars[i - 1].is_alphanumeric();
            if boundary && (c == 'e' || c == 'l') {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let end_ok = j == chars.len() || !chars[j].is_alphanumeric();
                if j > i + 1 && end_ok {
                    let n: u32 = chars[i + 1..j].iter().collect::<String>().parse().unwrap();
                    let name = if c == 'e' { self.edges.get(&EdgeId(n)) } else { self.links.get(&LinkId(n)) };
                    if let Some(name) = name {
                        out.push_str(name);
                        i = j;
                        continue;
                    }
                }
            }
            out.push(c);
            i += 1;
        }
        out
    }
}

/// Parses and validates a net document. Nets with a flat-labelled
/// conclusion are rejected.
pub fn load(bytes: &[u8]) -> Result<Net, LoadError> {
    load_named(bytes).map(|(net, _)| net)
}

/// As [`load`], keeping the document names.
pub fn load_named(bytes: &[u8]) -> Result<(Net, NameTable), LoadError> {
    let doc: Doc = serde_json::from_slice(bytes).map_err(|e| LoadError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut net = Net::new();
    let mut edge_ids = BTreeMap::new();
    let mut names = NameTable::default();
    for e in &doc.edges {
        let label = EdgeLabel::parse(&e.label)
            .map_err(|source| LoadError::Label { edge: e.id.clone(), source })?;
        let id = net.add_edge(label);
        if edge_ids.insert(e.id.clone(), id).is_some() {
            return Err(LoadError::DuplicateId(e.id.clone()));
        }
        names.edges.insert(id, e.id.clone());
    }
    let edge = |name: &String| {
        edge_ids.get(name).copied().ok_or_else(|| LoadError::UnknownId { what: "edge", id: name.clone() })
    };
    let mut link_ids = BTreeMap::new();
    for l in &doc.links {
        let kind = LinkKind::from_name(&l.kind)
            .ok_or_else(|| LoadError::UnknownKind { link: l.id.clone(), kind: l.kind.clone() })?;
        let prem = l.premises.iter().map(edge).collect::<Result<Vec<_>, _>>()?;
        let conc = l.conclusions.iter().map(edge).collect::<Result<Vec<_>, _>>()?;
        let id = net.add_link(kind, prem, conc, None);
        if link_ids.insert(l.id.clone(), id).is_some() {
            return Err(LoadError::DuplicateId(l.id.clone()));
        }
        names.links.insert(id, l.id.clone());
    }
    let link = |name: &String| {
        link_ids.get(name).copied().ok_or_else(|| LoadError::UnknownId { what: "link", id: name.clone() })
    };
    fn add_boxes(
        net: &mut Net,
        docs: &[BoxDoc],
        parent: Option<BoxId>,
        link: &dyn Fn(&String) -> Result<LinkId, LoadError>,
    ) -> Result<(), LoadError> {
        for b in docs {
            let principal = link(&b.principal)?;
            let aux = b.auxiliaries.iter().map(link).collect::<Result<Vec<_>, _>>()?;
            let id = net.add_box(principal, aux, parent);
            net.box_mut(id).contents = b.contents.iter().map(link).collect::<Result<Vec<_>, _>>()?;
            add_boxes(net, &b.boxes, Some(id), link)?;
        }
        Ok(())
    }
    add_boxes(&mut net, &doc.boxes, None, &link)?;
    let concl = doc.conclusions.iter().map(edge).collect::<Result<Vec<_>, _>>()?;
    net.set_conclusions(concl);

    let report = validate(&net);
    if !report.is_valid() {
        let message = names.translate(&report.to_string());
        return Err(LoadError::Invalid { report, message });
    }
    if let Some(&e) = net.conclusions().iter().find(|&&e| net.label(e).is_flat()) {
        return Err(LoadError::FlatConclusion { edge: names.edge(e), label: net.label(e).to_string() });
    }
    Ok((net, names))
}

/// Serializes a net; identifiers are the internal ones (`e<n>`, `l<n>`).
pub fn save(net: &Net) -> Vec<u8> {
    let edges = net
        .edge_ids()
        .map(|e| EdgeDoc { id: e.to_string(), label: net.label(e).to_string() })
        .collect();
    let links = net
        .links()
        .map(|(id, l)| LinkDoc {
            id: id.to_string(),
            kind: l.kind.name().to_string(),
            premises: l.premises.iter().map(|e| e.to_string()).collect(),
            conclusions: l.conclusions.iter().map(|e| e.to_string()).collect(),
        })
        .collect();
    let layout = net.layout();
    fn box_doc(net: &Net, layout: &crate::net::Layout, b: BoxId) -> BoxDoc {
        let nb = net.net_box(b);
        BoxDoc {
            principal: nb.principal.to_string(),
            auxiliaries: nb.auxiliaries.iter().map(|l| l.to_string()).collect(),
            contents: nb.contents.iter().map(|l| l.to_string()).collect(),
            boxes: layout.children(b).iter().map(|&c| box_doc(net, layout, c)).collect(),
        }
    }
    let boxes = net
        .boxes()
        .filter(|(_, b)| b.parent.is_none())
        .map(|(id, _)| box_doc(net, &layout, id))
        .collect();
    let doc = Doc { edges, links, boxes, conclusions: net.conclusions().iter().map(|e| e.to_string()).collect() };
    let mut out = serde_json::to_vec_pretty(&doc).expect("net documents always serialize");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::*;
    use crate::canon::canonical_form;
    use crate::formula::Formula;
    use crate::generate::{random_net, GenParams};

    #[test]
    fn minimal_axiom_document() {
        let doc = r#"{"edges":[{"id":"a","label":"X^"},{"id":"b","label":"X"}],
            "links":[{"id":"ax","kind":"axiom","premises":[],"conclusions":["a","b"]}],
            "conclusions":["a","b"]}"#;
        let n = load(doc.as_bytes()).unwrap();
        assert_eq!(n.num_links(), 1);
        assert_eq!(n.num_edges(), 2);
    }

    #[test]
    fn flat_conclusion_rejected() {
        let n = flat_rule(&ax(Formula::atom("X")), 0).unwrap();
        let err = load(&save(&n)).unwrap_err();
        assert!(matches!(err, LoadError::FlatConclusion { ref edge, .. } if edge == "e2"), "{err}");
    }

    #[test]
    fn names_survive_loading() {
        let doc = r#"{"edges":[{"id":"a","label":"X^"},{"id":"b","label":"X"}],
            "links":[{"id":"ax","kind":"axiom","conclusions":["a","b"]}],
            "conclusions":["b","a"]}"#;
        let (n, names) = load_named(doc.as_bytes()).unwrap();
        let concl: Vec<String> = n.conclusions().iter().map(|&e| names.edge(e)).collect();
        assert_eq!(concl, ["b", "a"]);
        assert_eq!(names.link(LinkId(0)), "ax");
        assert_eq!(names.edge(EdgeId(9)), "e9");
        assert_eq!(names.translate("l0 joins e0 and e1"), "ax joins a and b");
    }

    #[test]
    fn json_error_has_location() {
        let err = load(b"{\"edges\": [\n  {\"id\": }").unwrap_err();
        assert!(matches!(err, LoadError::Json { line: 2, .. }), "{err}");
    }

    #[test]
    fn invalid_report_uses_document_names() {
        let doc = r#"{"edges":[{"id":"left","label":"X"},{"id":"right","label":"X"}],
            "links":[{"id":"the_axiom","kind":"axiom","conclusions":["left","right"]}],
            "conclusions":["left","right"]}"#;
        let err = load(doc.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("the_axiom") && err.contains("right"), "{err}");
    }

    #[test]
    fn round_trip_corpus() {
        let p = GenParams { size: 20, cut_bias: 0.2, box_bias: 0.3, ..GenParams::default() };
        for seed in 0..150 {
            let n = random_net(seed, &p);
            let back = load(&save(&n)).unwrap();
            assert_eq!(canonical_form(&back).unwrap(), canonical_form(&n).unwrap());
            assert_eq!(save(&back), save(&n.compact()));
        }
    }
}
