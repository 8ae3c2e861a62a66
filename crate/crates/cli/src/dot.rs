//! DOT rendering of a net: links are nodes, edges are arcs from producer to
//! consumer, boxes are clusters.

use std::fmt::Write as _;

use stratnet::io::NameTable;
use stratnet::{BoxId, Layout, Net};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn cluster(out: &mut String, net: &Net, layout: &Layout, names: &NameTable, b: BoxId, indent: usize) {
    let pad = "  ".repeat(indent);
    let _ = writeln!(out, "{pad}subgraph cluster_{b} {{");
    let _ = writeln!(out, "{pad}  label={};", quote(&b.to_string()));
    for &l in &net.net_box(b).contents {
        let _ = writeln!(out, "{pad}  {};", quote(&names.link(l)));
    }
    for &c in layout.children(b) {
        cluster(out, net, layout, names, c, indent + 1);
    }
    let _ = writeln!(out, "{pad}}}");
}

pub fn render(net: &Net, names: &NameTable) -> String {
    let layout = net.layout();
    let mut out = String::from("digraph net {\n  node [shape=box];\n");
    for (id, l) in net.links() {
        let _ = writeln!(out, "  {} [label={}];", quote(&names.link(id)), quote(l.kind.name()));
    }
    for (b, nb) in net.boxes() {
        if nb.parent.is_none() {
            cluster(&mut out, net, &layout, names, b, 1);
        }
    }
    for e in net.edge_ids() {
        let Some(from) = layout.producer(e) else { continue };
        let to = match layout.consumer(e) {
            Some(c) => quote(&names.link(c)),
            None => {
                let end = quote(&format!("out_{}", names.edge(e)));
                let _ = writeln!(out, "  {end} [shape=point];");
                end
            }
        };
        let label = format!("{}: {}", names.edge(e), net.label(e));
        let _ = writeln!(out, "  {} -> {to} [label={}];", quote(&names.link(from)), quote(&label));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use stratnet::builder::{ax, flat_rule, promotion, whynot_rule};
    use stratnet::io::{load_named, save};
    use stratnet::Formula;

    #[test]
    fn axiom_has_two_open_arcs() {
        let (n, names) = load_named(&save(&ax(Formula::atom("X")))).unwrap();
        let text = render(&n, &names);
        assert_eq!(text.matches("shape=point").count(), 2);
        assert!(text.contains("\"l0\" [label=\"axiom\"]"));
    }

    #[test]
    fn boxes_become_clusters() {
        let x = Formula::atom("X");
        let b = promotion(&flat_rule(&ax(x.clone()), 0).unwrap(), 1).unwrap();
        let n = whynot_rule(&b, &[0], &x.dual()).unwrap();
        let text = render(&n, &Default::default());
        assert_eq!(text.matches("subgraph cluster_").count(), 1);
        assert_eq!(text.matches('{').count(), text.matches('}').count());
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
