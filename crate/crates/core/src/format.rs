//! Line-oriented instance files.
//!
//! ```text
//! c any comment
//! p sdfvs-e <n> <m>      arc form (or `sdfvs-v` for vertex form)
//! a <u> <v> [s]          arc; a trailing `s` puts it in S (arc form only)
//! s <v>                  S vertex (vertex form only)
//! u <v>                  undeletable vertex
//! k <budget>
//! ```
//!
//! Vertices are numbered from 1 in files and from 0 in memory. Serializing
//! writes comments, the header, arcs, `s` lines, `u` lines and the budget,
//! in that order.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Arc, ArcSet, Digraph, VertexId, VertexSet};
use crate::solver::{EdgeInstance, VertexInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Edge,
    Vertex,
}

impl ProblemKind {
    fn tag(self) -> &'static str {
        match self {
            ProblemKind::Edge => "sdfvs-e",
            ProblemKind::Vertex => "sdfvs-v",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub kind: ProblemKind,
    pub n: usize,
    pub comments: Vec<String>,
    /// `(tail, head, in_s)`, 0-based.
    pub arcs: Vec<(usize, usize, bool)>,
    pub s_vertices: Vec<usize>,
    pub undeletable: Vec<usize>,
    pub budget: usize,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
        let mut header: Option<(ProblemKind, usize, usize, usize)> = None;
        let mut file = InstanceFile {
            kind: ProblemKind::Edge,
            n: 0,
            comments: Vec::new(),
            arcs: Vec::new(),
            s_vertices: Vec::new(),
            undeletable: Vec::new(),
            budget: 0,
        };
        let mut budget = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed == "c" || trimmed.starts_with("c ") {
                file.comments.push(trimmed[1..].trim_start().to_string());
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let number = |s: &str| -> Result<usize, ParseError> {
                usize::from_str(s).map_err(|_| err(line, format!("expected a number, found `{s}`")))
            };
            let vertex = |s: &str, n: usize| -> Result<usize, ParseError> {
                let v = number(s)?;
                if v == 0 || v > n {
                    return Err(err(line, format!("vertex {v} outside 1..={n}")));
                }
                Ok(v - 1)
            };
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return Err(err(line, "duplicate problem line"));
                    }
                    if fields.len() != 4 {
                        return Err(err(line, "expected `p <kind> <n> <m>`"));
                    }
                    let kind = match fields[1] {
                        "sdfvs-e" => ProblemKind::Edge,
                        "sdfvs-v" => ProblemKind::Vertex,
                        other => return Err(err(line, format!("unknown problem kind `{other}`"))),
                    };
                    header = Some((kind, number(fields[2])?, number(fields[3])?, line));
                }
                tag => {
                    let Some((kind, n, _, _)) = header else {
                        return Err(err(line, "data before the problem line"));
                    };
                    match (tag, fields.len()) {
                        ("a", 3) | ("a", 4) => {
                            let u = vertex(fields[1], n)?;
                            let v = vertex(fields[2], n)?;
                            let in_s = match fields.get(3) {
                                None => false,
                                Some(&"s") if kind == ProblemKind::Edge => true,
                                Some(&"s") => {
                                    return Err(err(line, "arc marker `s` in a vertex-form file"))
                                }
                                Some(other) => {
                                    return Err(err(line, format!("unknown arc marker `{other}`")))
                                }
                            };
                            file.arcs.push((u, v, in_s));
                        }
                        ("s", 2) => {
                            if kind == ProblemKind::Edge {
                                return Err(err(line, "`s` vertex line in an arc-form file"));
                            }
                            file.s_vertices.push(vertex(fields[1], n)?);
                        }
                        ("u", 2) => file.undeletable.push(vertex(fields[1], n)?),
                        ("k", 2) => {
                            if budget.is_some() {
                                return Err(err(line, "duplicate budget line"));
                            }
                            budget = Some(number(fields[1])?);
                        }
                        _ => return Err(err(line, format!("malformed line `{trimmed}`"))),
                    }
                }
            }
        }
        let Some((kind, n, m, pline)) = header else {
            return Err(err(text.lines().count().max(1), "missing problem line"));
        };
        if file.arcs.len() != m {
            return Err(err(
                pline,
                format!("header declares {m} arcs but {} are listed", file.arcs.len()),
            ));
        }
        file.kind = kind;
        file.n = n;
        file.budget = budget.ok_or_else(|| err(text.lines().count().max(1), "missing budget line"))?;
        Ok(file)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            if c.is_empty() {
                out.push_str("c\n");
            } else {
                let _ = writeln!(out, "c {c}");
            }
        }
        let _ = writeln!(out, "p {} {} {}", self.kind.tag(), self.n, self.arcs.len());
        for &(u, v, s) in &self.arcs {
            let _ = writeln!(out, "a {} {}{}", u + 1, v + 1, if s { " s" } else { "" });
        }
        for v in &self.s_vertices {
            let _ = writeln!(out, "s {}", v + 1);
        }
        for v in &self.undeletable {
            let _ = writeln!(out, "u {}", v + 1);
        }
        let _ = writeln!(out, "k {}", self.budget);
        out
    }

    fn graph(&self) -> Digraph {
        let pairs: Vec<(usize, usize)> = self.arcs.iter().map(|&(u, v, _)| (u, v)).collect();
        Digraph::build(self.n, &pairs, &self.undeletable).expect("endpoints checked while parsing")
    }

    /// The arc-form instance; vertex-form files are converted by marking
    /// every arc that touches an `S` vertex.
    pub fn to_edge_instance(&self) -> EdgeInstance {
        match self.kind {
            ProblemKind::Edge => {
                let s: ArcSet = self
                    .arcs
                    .iter()
                    .filter(|a| a.2)
                    .map(|&(u, v, _)| Arc::from((u, v)))
                    .collect();
                EdgeInstance::new(self.graph(), s, self.budget).expect("S arcs are graph arcs")
            }
            ProblemKind::Vertex => crate::solver::vertex_to_edge(&self.to_vertex_instance()),
        }
    }

    /// The vertex-form instance. Arc-form files have their `S`-arcs
    /// subdivided.
    pub fn to_vertex_instance(&self) -> VertexInstance {
        match self.kind {
            ProblemKind::Vertex => {
                let s: VertexSet = self.s_vertices.iter().map(|&v| VertexId::from(v)).collect();
                VertexInstance::new(self.graph(), s, self.budget).expect("S vertices are in range")
            }
            ProblemKind::Edge => crate::solver::edge_to_vertex(&self.to_edge_instance(), false),
        }
    }

    /// Arc-form file for `inst`. Every copy of an `S` pair is marked.
    pub fn from_edge_instance(inst: &EdgeInstance, comments: Vec<String>) -> InstanceFile {
        let g = inst.graph();
        InstanceFile {
            kind: ProblemKind::Edge,
            n: g.capacity(),
            comments,
            arcs: g
                .arcs()
                .iter()
                .map(|a| (a.tail.index(), a.head.index(), inst.s_arcs().contains(a)))
                .collect(),
            s_vertices: Vec::new(),
            undeletable: g.undeletable_set().iter().map(|v| v.index()).collect(),
            budget: inst.budget(),
        }
    }

    pub fn from_vertex_instance(inst: &VertexInstance, comments: Vec<String>) -> InstanceFile {
        let g = inst.graph();
        InstanceFile {
            kind: ProblemKind::Vertex,
            n: g.capacity(),
            comments,
            arcs: g.arcs().iter().map(|a| (a.tail.index(), a.head.index(), false)).collect(),
            s_vertices: inst.s_vertices().iter().map(|v| v.index()).collect(),
            undeletable: g.undeletable_set().iter().map(|v| v.index()).collect(),
            budget: inst.budget(),
        }
    }
}

/// Reads a solution: whitespace-separated 1-based ids, `c` lines ignored.
pub fn parse_solution(text: &str, n: usize) -> Result<VertexSet, ParseError> {
    let mut out = VertexSet::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed == "c" || trimmed.starts_with("c ") {
            continue;
        }
        for tok in trimmed.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(i + 1, format!("expected a vertex id, found `{tok}`")))?;
            if v == 0 || v > n {
                return Err(err(i + 1, format!("vertex {v} outside 1..={n}")));
            }
            out.insert(VertexId::from(v - 1));
        }
    }
    Ok(out)
}

/// Space-separated 1-based ids.
pub fn format_solution(x: &VertexSet) -> String {
    x.iter()
        .map(|v| (v.index() + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const C2: &str = "p sdfvs-e 2 2\na 1 2 s\na 2 1\nk 1\n";

    #[test]
    fn parses_c2() {
        let f = InstanceFile::parse(C2).unwrap();
        let inst = f.to_edge_instance();
        assert_eq!(inst.graph().arc_count(), 2);
        assert_eq!(inst.s_arcs(), &ArcSet::from([Arc::new(0usize, 1usize)]));
        assert_eq!(inst.budget(), 1);
        assert_eq!(f.serialize(), C2);
    }

    #[test]
    fn normalizes_order() {
        let text = "p sdfvs-v 3 1\nk 2\nc late comment\nu 3\ns 1\na 1 2\n";
        let f = InstanceFile::parse(text).unwrap();
        let norm = "c late comment\np sdfvs-v 3 1\na 1 2\ns 1\nu 3\nk 2\n";
        assert_eq!(f.serialize(), norm);
        assert_eq!(InstanceFile::parse(norm).unwrap().serialize(), norm);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = InstanceFile::parse("p sdfvs-e 2 1\na 1 3\nk 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = InstanceFile::parse("p sdfvs-v 2 1\na 1 2 s\nk 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = InstanceFile::parse("p sdfvs-e 2 2\na 1 2\nk 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(InstanceFile::parse("a 1 2\n").is_err());
        assert!(InstanceFile::parse("p sdfvs-e 2 0\n").is_err());
        assert!(InstanceFile::parse("p sdfvs-e 2 0\nx 1\nk 0\n").is_err());
    }

    #[test]
    fn solutions_round_trip() {
        let x = parse_solution("c found\n1 3\n", 3).unwrap();
        assert_eq!(format_solution(&x), "1 3");
        assert!(parse_solution("4", 3).is_err());
    }
}
