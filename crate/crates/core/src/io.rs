//! Text formats: the edge-list digraph format, certificates, and DOT export.
//!
//! Digraph format: first non-comment line `N M`, then `M` lines `u v`, one arc
//! `u → v` each, vertices 0-indexed. Blank lines and lines starting with `#`
//! are ignored. Serialization is canonical: deduplicated arcs, sorted.
//!
//! Certificate format: first line `adhc`, `adp`, `dhc` or `2factor`, then one
//! line per walk, `v1 v2 … vd | +-+-…`, where `+` marks an arc along the walk
//! direction and `-` an arc against it.

use crate::digraph::{Digraph, GraphError};
use crate::walk::{verify_two_factor, verify_walk, OrientedWalk, Requirements, TwoFactorCert, Violation, WalkKind};
use std::collections::HashSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed header {text:?}, expected \"N M\"")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: malformed arc {text:?}, expected \"u v\"")]
    MalformedArc { line: usize, text: String },
    #[error("header announces {expected} arcs but {found} were given")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("line {line}: unknown certificate kind {text:?}")]
    UnknownKind { line: usize, text: String },
    #[error("line {line}: malformed walk {text:?}")]
    MalformedWalk { line: usize, text: String },
    #[error("certificate of kind {kind} needs {expected} walk line(s), found {found}")]
    WalkCount {
        kind: &'static str,
        expected: &'static str,
        found: usize,
    },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_digraph_bytes(bytes: &[u8]) -> Result<Digraph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Utf8)?;
    parse_digraph(text)
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let bad_header = || ParseError::MalformedHeader {
        line: hline,
        text: header.to_string(),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(bad_header());
    }
    let order: usize = fields[0].parse().map_err(|_| bad_header())?;
    let expected: usize = fields[1].parse().map_err(|_| bad_header())?;

    let mut found = 0;
    let mut pending = Vec::new();
    for (line, text) in lines {
        let mut it = text.split_whitespace();
        let parsed = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
            _ => None,
        };
        let (u, v) = parsed.ok_or_else(|| ParseError::MalformedArc {
            line,
            text: text.to_string(),
        })?;
        found += 1;
        pending.push((line, u, v));
    }
    if found != expected {
        return Err(ParseError::ArcCountMismatch { expected, found });
    }
    for &(line, u, v) in &pending {
        let source = if u >= order || v >= order {
            GraphError::VertexOutOfRange(u, v, order)
        } else if u == v {
            GraphError::Loop(u)
        } else {
            continue;
        };
        return Err(ParseError::Graph { line, source });
    }
    Ok(Digraph::from_arcs(order, pending.into_iter().map(|(_, u, v)| (u, v))).expect("arcs validated above"))
}

/// Canonical text form: header, then arcs in lexicographic order.
pub fn serialize_digraph(d: &Digraph) -> String {
    let mut s = String::with_capacity(16 + d.num_arcs() * 8);
    let _ = writeln!(s, "{} {}", d.order(), d.num_arcs());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// A solver certificate as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Adhc(OrientedWalk),
    Adp(OrientedWalk),
    Dhc(OrientedWalk),
    TwoFactor(TwoFactorCert),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Adhc(_) => "adhc",
            Certificate::Adp(_) => "adp",
            Certificate::Dhc(_) => "dhc",
            Certificate::TwoFactor(_) => "2factor",
        }
    }

    fn walks(&self) -> Vec<&OrientedWalk> {
        match self {
            Certificate::Adhc(w) | Certificate::Adp(w) | Certificate::Dhc(w) => vec![w],
            Certificate::TwoFactor(c) => c.cycles.iter().collect(),
        }
    }
}

fn walk_line(w: &OrientedWalk) -> String {
    let verts: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
    let bits: String = w.forward.iter().map(|&f| if f { '+' } else { '-' }).collect();
    format!("{} | {}", verts.join(" "), bits)
}

pub fn serialize_certificate(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", c.kind());
    for w in c.walks() {
        let _ = writeln!(s, "{}", walk_line(w));
    }
    s
}

fn parse_walk(line: usize, text: &str, kind: WalkKind) -> Result<OrientedWalk, ParseError> {
    let bad = || ParseError::MalformedWalk {
        line,
        text: text.to_string(),
    };
    let (verts, bits) = text.split_once('|').ok_or_else(bad)?;
    let vertices = verts
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    let forward = bits
        .trim()
        .chars()
        .map(|c| match c {
            '+' => Ok(true),
            '-' => Ok(false),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrientedWalk::new(vertices, forward, kind))
}

pub fn parse_certificate(text: &str) -> Result<Certificate, ParseError> {
    // The empty path serializes as the line "|", so it survives this filter.
    let mut lines = content_lines(text);
    let (kline, kind) = lines.next().ok_or(ParseError::MissingHeader)?;
    let rest: Vec<(usize, &str)> = lines.collect();
    let single = |k: &'static str, wk: WalkKind| -> Result<OrientedWalk, ParseError> {
        if rest.len() != 1 {
            return Err(ParseError::WalkCount {
                kind: k,
                expected: "exactly 1",
                found: rest.len(),
            });
        }
        parse_walk(rest[0].0, rest[0].1, wk)
    };
    match kind {
        "adhc" => Ok(Certificate::Adhc(single("adhc", WalkKind::Cycle)?)),
        "adp" => Ok(Certificate::Adp(single("adp", WalkKind::Path)?)),
        "dhc" => Ok(Certificate::Dhc(single("dhc", WalkKind::Cycle)?)),
        "2factor" => {
            if rest.is_empty() {
                return Err(ParseError::WalkCount {
                    kind: "2factor",
                    expected: "at least 1",
                    found: 0,
                });
            }
            let cycles = rest
                .iter()
                .map(|&(l, t)| parse_walk(l, t, WalkKind::Cycle))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Certificate::TwoFactor(TwoFactorCert { cycles }))
        }
        other => Err(ParseError::UnknownKind {
            line: kline,
            text: other.to_string(),
        }),
    }
}

/// Verifies a certificate against the predicates its kind promises.
pub fn verify_certificate(d: &Digraph, c: &Certificate) -> Result<(), Violation> {
    match c {
        Certificate::Adhc(w) => verify_walk(d, w, Requirements::ADHC),
        Certificate::Adp(w) => verify_walk(d, w, Requirements::NONE.anti_directed()),
        Certificate::Dhc(w) => verify_walk(d, w, Requirements::DHC),
        Certificate::TwoFactor(t) => verify_two_factor(d, t),
    }
}

/// Graphviz rendering; arcs in `highlight` are drawn bold red.
pub fn to_dot(d: &Digraph, highlight: &[(usize, usize)]) -> String {
    let marked: HashSet<(usize, usize)> = highlight.iter().copied().collect();
    let mut s = String::from("digraph D {\n");
    for v in d.vertices() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in d.arcs() {
        if marked.contains(&(u, v)) {
            let _ = writeln!(s, "  {u} -> {v} [color=red, penwidth=2];");
        } else {
            let _ = writeln!(s, "  {u} -> {v};");
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_example() {
        let d = parse_digraph("4 2\n0 1\n2 3\n").unwrap();
        assert_eq!(d.order(), 4);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn rejects_loop() {
        assert!(matches!(
            parse_digraph("3 1\n0 0\n"),
            Err(ParseError::Graph {
                line: 2,
                source: GraphError::Loop(0)
            })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_digraph("3\n"), Err(ParseError::MalformedHeader { .. })));
        assert!(matches!(parse_digraph(""), Err(ParseError::MissingHeader)));
        assert!(matches!(
            parse_digraph("3 1\n0 5\n"),
            Err(ParseError::Graph {
                source: GraphError::VertexOutOfRange(0, 5, 3),
                ..
            })
        ));
        assert!(matches!(
            parse_digraph("3 2\n0 1\n"),
            Err(ParseError::ArcCountMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(parse_digraph("3 1\n0 x\n"), Err(ParseError::MalformedArc { .. })));
        assert_eq!(parse_digraph_bytes(&[0xff, 0xfe]), Err(ParseError::Utf8));
    }

    #[test]
    fn comments_and_duplicates() {
        let d = parse_digraph("# a comment\n3 3\n0 1\n# mid\n0 1\n1 2\n").unwrap();
        assert_eq!(serialize_digraph(&d), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn certificate_round_trip() {
        let w = OrientedWalk::alternating(vec![0, 1, 2, 3], true, WalkKind::Cycle);
        let c = Certificate::Adhc(w);
        let text = serialize_certificate(&c);
        assert_eq!(text, "adhc\n0 1 2 3 | +-+-\n");
        assert_eq!(parse_certificate(&text).unwrap(), c);
        let empty = Certificate::Adp(OrientedWalk::empty_path());
        assert_eq!(parse_certificate(&serialize_certificate(&empty)).unwrap(), empty);
    }

    #[test]
    fn dot_marks_highlighted_arcs() {
        let d = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let dot = to_dot(&d, &[(0, 1)]);
        assert!(dot.contains("0 -> 1 [color=red"));
    }
}
