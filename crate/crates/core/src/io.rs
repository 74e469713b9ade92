//! Plain-text formats.
//!
//! Complex files list one simplex per line as whitespace-separated vertex
//! labels; the complex is the closure. Multigraph files use
//! `edge <id> <u> <v>` and `vertex <v>` lines. In both, `#` starts a comment.

use std::collections::HashSet;

use crate::budget::Budget;
use crate::complex::{Multigraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::morse::MorseComplex;

fn content(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before).trim()
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn check_label(line: usize, label: &str) -> Result<()> {
    if label.contains(',') {
        return Err(parse_error(line, format!("label {label:?} contains a comma")));
    }
    Ok(())
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let labels: Vec<&str> = content(raw).split_whitespace().collect();
        if labels.is_empty() {
            continue;
        }
        let mut seen = HashSet::new();
        for l in &labels {
            check_label(line, l)?;
            if !seen.insert(*l) {
                return Err(parse_error(line, format!("vertex {l} repeated in simplex")));
            }
        }
        faces.push(labels);
    }
    SimplicialComplex::closure(faces)
}

/// Facets in lexicographic order, one per line, labels separated by spaces.
pub fn serialize_complex(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for f in k.facets() {
        let labels: Vec<&str> = f.vertices().iter().map(|&v| k.label(v)).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_multigraph(text: &str) -> Result<Multigraph> {
    let mut isolated: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut ids = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let words: Vec<&str> = content(raw).split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["vertex", v] => {
                check_label(line, v)?;
                isolated.push(v.to_string());
            }
            ["edge", id, u, v] => {
                check_label(line, u)?;
                check_label(line, v)?;
                if u == v {
                    return Err(parse_error(line, format!("edge {id} is a loop at {u}")));
                }
                if !ids.insert(id.to_string()) {
                    return Err(parse_error(line, format!("duplicate edge id {id}")));
                }
                edges.push((id.to_string(), u.to_string(), v.to_string()));
            }
            _ => return Err(parse_error(line, "expected `edge <id> <u> <v>` or `vertex <v>`")),
        }
    }
    Multigraph::new(&isolated, &edges)
}

/// `vertex` lines for isolated vertices, then `edge` lines in edge-id order.
pub fn serialize_multigraph(g: &Multigraph) -> String {
    let mut out = String::new();
    for v in 0..g.num_vertices() as u32 {
        if g.incident_edges(v).is_empty() {
            out.push_str(&format!("vertex {}\n", g.label(v)));
        }
    }
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.label, g.label(e.ends.0), g.label(e.ends.1)));
    }
    out
}

/// Either kind of input file. Files whose first non-comment line starts with
/// `edge` or `vertex` are multigraphs.
#[derive(Debug, Clone)]
pub enum Input {
    Complex(SimplicialComplex),
    Multigraph(Multigraph),
}

pub fn parse_input(text: &str) -> Result<Input> {
    let first = text.lines().map(content).find(|l| !l.is_empty());
    let is_multigraph = first.is_some_and(|l| {
        let word = l.split_whitespace().next().unwrap_or("");
        (word == "edge" && l.split_whitespace().count() == 4) || (word == "vertex" && l.split_whitespace().count() == 2)
    });
    if is_multigraph {
        parse_multigraph(text).map(Input::Multigraph)
    } else {
        parse_complex(text).map(Input::Complex)
    }
}

impl Input {
    pub fn morse_complex(&self) -> MorseComplex {
        match self {
            Input::Complex(k) => MorseComplex::of_complex(k),
            Input::Multigraph(g) => MorseComplex::of_multigraph(g),
        }
    }
}

/// `𝔐` as a complex file on pair labels, followed by the pair table as
/// comment lines, so the output parses back as a complex.
pub fn serialize_morse_complex(m: &MorseComplex, budget: &Budget) -> Result<String> {
    let mut out = serialize_complex(&m.underlying(budget)?);
    for row in m.pair_table() {
        out.push_str("# ");
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_a_line() {
        let k = parse_complex("a b c").unwrap();
        assert_eq!(k, SimplicialComplex::closure([["a", "b", "c"]]).unwrap());
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let k = parse_complex("# header\n\na b # edge\nc\n").unwrap();
        assert_eq!(serialize_complex(&k), "a b\nc\n");
    }

    #[test]
    fn repeated_vertex_names_line() {
        assert_eq!(parse_complex("a a b"), Err(Error::Parse { line: 1, message: "vertex a repeated in simplex".into() }));
        assert!(matches!(parse_complex("a b\nc c"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_complex("a,b c"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip_is_canonical() {
        let k = parse_complex("v10 v2 v1\nv2 v3\nv1 v2\n").unwrap();
        let text = serialize_complex(&k);
        assert_eq!(text, "v1 v2 v10\nv2 v3\n");
        assert_eq!(parse_complex(&text).unwrap(), k);
        let same = parse_complex("v2 v3\nv1 v10 v2").unwrap();
        assert_eq!(serialize_complex(&same), text);
    }

    #[test]
    fn multigraphs() {
        let g = parse_multigraph("edge e1 u v\nedge e2 u v").unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert!(matches!(parse_multigraph("edge e1 u u"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_multigraph("edge e1 u v\nedge e1 v w"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_multigraph("edge e1 u"), Err(Error::Parse { line: 1, .. })));
        let h = parse_multigraph("vertex z\nedge b v u\nedge a u v\n").unwrap();
        assert_eq!(serialize_multigraph(&h), "vertex z\nedge a u v\nedge b u v\n");
        assert_eq!(parse_multigraph(&serialize_multigraph(&h)).unwrap(), h);
    }

    #[test]
    fn input_kind_detection() {
        assert!(matches!(parse_input("# g\nedge a u v"), Ok(Input::Multigraph(_))));
        assert!(matches!(parse_input("a b"), Ok(Input::Complex(_))));
        assert!(matches!(parse_input("edge vertex"), Ok(Input::Complex(_))));
    }

    #[test]
    fn morse_file_of_an_edge() {
        let m = MorseComplex::of_complex(&parse_complex("a b").unwrap());
        let text = serialize_morse_complex(&m, &Budget::default()).unwrap();
        assert_eq!(text, "p0\np1\n# p0 0 a -> a,b\n# p1 0 b -> a,b\n");
        let back = parse_complex(&text).unwrap();
        assert_eq!(back.num_vertices(), 2);
        assert_eq!(back.dim(), Some(0));
    }
}
