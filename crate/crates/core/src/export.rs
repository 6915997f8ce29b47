//! DOT and GraphML renderings of a graph. Output is sorted by id so equal
//! graphs give byte-identical files.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::model::{GenealogyGraph, PersonId};

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz digraph with advisor → student edges. Laureates are boxed and
/// nodes in `highlight` are filled magenta.
pub fn export_dot(graph: &GenealogyGraph, highlight: &BTreeSet<PersonId>) -> String {
    let mut out = String::from("digraph genealogy {\n");
    for p in graph.persons() {
        let label = if p.name.is_empty() {
            p.id.as_str()
        } else {
            &p.name
        };
        let mut attrs = vec![format!("label={}", dot_quote(label))];
        if p.laureate {
            attrs.push("shape=box".into());
        }
        if highlight.contains(&p.id) {
            attrs.push("style=filled".into());
            attrs.push("color=magenta".into());
        }
        let _ = writeln!(
            out,
            "  {} [{}];",
            dot_quote(p.id.as_str()),
            attrs.join(", ")
        );
    }
    for e in graph.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_quote(e.advisor.as_str()),
            dot_quote(e.student.as_str()),
            dot_quote(e.kind.as_str())
        );
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const NODE_KEYS: [(&str, &str); 7] = [
    ("name", "string"),
    ("gender", "string"),
    ("laureate", "boolean"),
    ("prize_year", "int"),
    ("candidate", "boolean"),
    ("degree_year", "int"),
    ("degree_institution", "string"),
];

/// GraphML document with person attributes as node data and the edge kind as
/// edge data. Absent optional values are omitted.
pub fn export_graphml(graph: &GenealogyGraph) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
    );
    for (name, ty) in NODE_KEYS {
        let _ = writeln!(
            out,
            "  <key id=\"{name}\" for=\"node\" attr.name=\"{name}\" attr.type=\"{ty}\"/>"
        );
    }
    out.push_str("  <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"genealogy\" edgedefault=\"directed\">\n");
    for p in graph.persons() {
        let _ = writeln!(out, "    <node id=\"{}\">", xml_escape(p.id.as_str()));
        let mut data = |key: &str, value: &str| {
            let _ = writeln!(
                out,
                "      <data key=\"{key}\">{}</data>",
                xml_escape(value)
            );
        };
        data("name", &p.name);
        data("gender", p.gender.as_str());
        data("laureate", if p.laureate { "true" } else { "false" });
        if let Some(y) = p.prize_year {
            data("prize_year", &y.to_string());
        }
        data("candidate", if p.candidate { "true" } else { "false" });
        if let Some(y) = p.degree_year {
            data("degree_year", &y.to_string());
        }
        if let Some(inst) = &p.degree_institution {
            data("degree_institution", inst);
        }
        out.push_str("    </node>\n");
    }
    for e in graph.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\">\n      <data key=\"kind\">{}</data>\n    </edge>",
            xml_escape(e.advisor.as_str()),
            xml_escape(e.student.as_str()),
            e.kind.as_str()
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
