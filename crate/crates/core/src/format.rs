//! Line-based text formats for graphs, homomorphisms, paths and instances.
//!
//! ```text
//! graph h
//! vertices 3
//! loops all            # none | all | space-separated indices
//! label 0 apex         # optional, one per vertex
//! edges
//! 0 1
//! 1 2
//! end
//!
//! hom alpha
//! 0 -> 1
//! 1 -> 2
//! end
//!
//! path
//! 0 1 2                # vertex from to
//! end
//! ```
//!
//! `#` starts a comment; blank lines are ignored. An instance file is two
//! graph blocks (source, target) followed by two hom blocks.

use crate::error::ParseError;
use crate::graph::Graph;
use crate::hom::{Homomorphism, RecoloringPath, RecoloringStep};

/// Non-fatal findings while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let l = self.peek().ok_or_else(|| {
            ParseError::new(
                self.last_line() + 1,
                format!("unexpected end of input, expected {}", what),
            )
        })?;
        self.pos += 1;
        Ok(l)
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(0, |l| l.0)
    }

    fn done(&self) -> bool {
        self.pos >= self.lines.len()
    }
}

fn keyword<'a>(line: (usize, &'a str), kw: &str) -> Result<&'a str, ParseError> {
    let (no, text) = line;
    let mut parts = text.splitn(2, char::is_whitespace);
    if parts.next() == Some(kw) {
        Ok(parts.next().unwrap_or("").trim())
    } else {
        Err(ParseError::new(
            no,
            format!("expected `{}`, found `{}`", kw, text),
        ))
    }
}

fn number(no: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| {
        ParseError::new(
            no,
            format!("expected a non-negative integer, found `{}`", tok),
        )
    })
}

fn parse_graph_block(
    lines: &mut Lines<'_>,
    warnings: &mut Vec<Warning>,
) -> Result<Graph, ParseError> {
    let mut name = "unnamed".to_string();
    let first = lines.next("`graph` or `vertices`")?;
    let vertices_line = if first.1.starts_with("graph") && keyword(first, "graph").is_ok() {
        let n = keyword(first, "graph")?;
        if !n.is_empty() {
            name = n.to_string();
        }
        lines.next("`vertices`")?
    } else {
        first
    };
    let n = number(vertices_line.0, keyword(vertices_line, "vertices")?)?;
    let mut g = Graph::new(name, n);

    let loops_line = lines.next("`loops`")?;
    let spec = keyword(loops_line, "loops")?;
    match spec {
        "none" | "" => {}
        "all" => {
            for v in 0..n {
                g.add_loop(v).expect("in range");
            }
        }
        list => {
            for tok in list.split_whitespace() {
                let v = number(loops_line.0, tok)?;
                g.add_loop(v)
                    .map_err(|e| ParseError::new(loops_line.0, e.to_string()))?;
            }
        }
    }

    loop {
        let line = lines.next("`edges`")?;
        if line.1 == "edges" {
            break;
        }
        let rest = keyword(line, "label").map_err(|_| {
            ParseError::new(
                line.0,
                format!("expected `label` or `edges`, found `{}`", line.1),
            )
        })?;
        let mut parts = rest.splitn(2, char::is_whitespace);
        let v = number(line.0, parts.next().unwrap_or(""))?;
        let text = parts.next().unwrap_or("").trim();
        g.set_label(v, text)
            .map_err(|e| ParseError::new(line.0, e.to_string()))?;
    }

    loop {
        let (no, text) = lines.next("an edge or `end`")?;
        if text == "end" {
            break;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::new(
                no,
                format!("expected `<u> <v>`, found `{}`", text),
            ));
        }
        let (u, v) = (number(no, toks[0])?, number(no, toks[1])?);
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => warnings.push(Warning {
                line: no,
                message: format!("duplicate edge ({}, {}) ignored", u, v),
            }),
            Err(e) => return Err(ParseError::new(no, e.to_string())),
        }
    }
    Ok(g)
}

pub fn parse_graph_with_warnings(text: &str) -> Result<(Graph, Vec<Warning>), ParseError> {
    let mut lines = Lines::new(text);
    let mut warnings = Vec::new();
    let g = parse_graph_block(&mut lines, &mut warnings)?;
    if let Some((no, t)) = lines.peek() {
        return Err(ParseError::new(no, format!("trailing content `{}`", t)));
    }
    Ok((g, warnings))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    parse_graph_with_warnings(text).map(|(g, _)| g)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\nvertices {}\n", g.name(), g.n());
    let loops: Vec<usize> = g.loop_vertices().collect();
    if loops.is_empty() {
        out.push_str("loops none\n");
    } else if loops.len() == g.n() {
        out.push_str("loops all\n");
    } else {
        let list: Vec<String> = loops.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("loops {}\n", list.join(" ")));
    }
    for v in g.vertices() {
        if let Some(l) = g.label(v) {
            out.push_str(&format!("label {} {}\n", v, l));
        }
    }
    out.push_str("edges\n");
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out.push_str("end\n");
    out
}

fn parse_hom_block(lines: &mut Lines<'_>) -> Result<(String, Homomorphism), ParseError> {
    let header = lines.next("`hom`")?;
    let name = keyword(header, "hom")?.to_string();
    let mut entries: Vec<Option<usize>> = Vec::new();
    loop {
        let (no, text) = lines.next("a `<u> -> <x>` line or `end`")?;
        if text == "end" {
            break;
        }
        let (lhs, rhs) = text.split_once("->").ok_or_else(|| {
            ParseError::new(no, format!("expected `<u> -> <x>`, found `{}`", text))
        })?;
        let (u, x) = (number(no, lhs.trim())?, number(no, rhs.trim())?);
        if u >= entries.len() {
            entries.resize(u + 1, None);
        }
        if entries[u].replace(x).is_some() {
            return Err(ParseError::new(no, format!("vertex {} mapped twice", u)));
        }
    }
    let map = entries
        .into_iter()
        .enumerate()
        .map(|(v, x)| {
            x.ok_or_else(|| ParseError::new(header.0, format!("vertex {} has no image", v)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name, Homomorphism::from_map_unchecked(map)))
}

/// Parses a hom block. The map is not checked against any graph.
pub fn parse_hom(text: &str) -> Result<(String, Homomorphism), ParseError> {
    let mut lines = Lines::new(text);
    let out = parse_hom_block(&mut lines)?;
    if let Some((no, t)) = lines.peek() {
        return Err(ParseError::new(no, format!("trailing content `{}`", t)));
    }
    Ok(out)
}

pub fn serialize_hom(name: &str, hom: &Homomorphism) -> String {
    let mut out = format!("hom {}\n", name);
    for (u, x) in hom.map().iter().enumerate() {
        out.push_str(&format!("{} -> {}\n", u, x));
    }
    out.push_str("end\n");
    out
}

/// Parses a path block; the caller supplies the start map.
pub fn parse_path(text: &str, start: Homomorphism) -> Result<RecoloringPath, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines.next("`path`")?;
    if header.1 != "path" {
        return Err(ParseError::new(
            header.0,
            format!("expected `path`, found `{}`", header.1),
        ));
    }
    let mut steps = Vec::new();
    loop {
        let (no, text) = lines.next("a step or `end`")?;
        if text == "end" {
            break;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ParseError::new(
                no,
                format!("expected `<vertex> <from> <to>`, found `{}`", text),
            ));
        }
        steps.push(RecoloringStep::new(
            number(no, toks[0])?,
            number(no, toks[1])?,
            number(no, toks[2])?,
        ));
    }
    if let Some((no, t)) = lines.peek() {
        return Err(ParseError::new(no, format!("trailing content `{}`", t)));
    }
    Ok(RecoloringPath { start, steps })
}

pub fn serialize_path(path: &RecoloringPath) -> String {
    let mut out = String::from("path\n");
    for s in &path.steps {
        out.push_str(&format!("{} {} {}\n", s.vertex, s.from, s.to));
    }
    out.push_str("end\n");
    out
}

/// The four blocks of an instance file, unvalidated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub g: Graph,
    pub h: Graph,
    pub alpha_name: String,
    pub alpha: Homomorphism,
    pub beta_name: String,
    pub beta: Homomorphism,
    pub warnings: Vec<Warning>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = Lines::new(text);
    let mut warnings = Vec::new();
    let g = parse_graph_block(&mut lines, &mut warnings)?;
    let h = parse_graph_block(&mut lines, &mut warnings)?;
    let (alpha_name, alpha) = parse_hom_block(&mut lines)?;
    let (beta_name, beta) = parse_hom_block(&mut lines)?;
    if !lines.done() {
        let (no, t) = lines.peek().expect("not done");
        return Err(ParseError::new(no, format!("trailing content `{}`", t)));
    }
    Ok(InstanceFile {
        g,
        h,
        alpha_name,
        alpha,
        beta_name,
        beta,
        warnings,
    })
}

pub fn serialize_instance(
    g: &Graph,
    h: &Graph,
    alpha: &Homomorphism,
    beta: &Homomorphism,
) -> String {
    format!(
        "{}\n{}\n{}\n{}",
        serialize_graph(g),
        serialize_graph(h),
        serialize_hom("alpha", alpha),
        serialize_hom("beta", beta)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use proptest::prelude::*;

    #[test]
    fn smallest_edge() {
        let g = parse_graph("graph h\nvertices 2\nloops none\nedges\n0 1\nend\n").unwrap();
        assert_eq!(g, complete(2).with_name("h"));
    }

    #[test]
    fn h7_file() {
        let text = "# figure graph\ngraph h7\nvertices 7\nloops all\nedges\n0 1\n1 2\n0 2\n0 3\n3 4\n0 4\n2 5\n5 6\n3 6\nend\n";
        assert_eq!(parse_graph(text).unwrap(), h7());
    }

    #[test]
    fn header_is_optional() {
        let g = parse_graph("vertices 1\nloops all\nedges\nend\n").unwrap();
        assert_eq!(g.n(), 1);
        assert!(g.is_reflexive());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_graph("graph g\nvertices 2\nloops none\nedges\n0 5\nend\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_graph("graph g\nvertices 2\nloops none\nedges\n0 x\nend\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_graph("graph g\nvertices 2\nloop none\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_graph("graph g\nvertices 2\nloops none\nedges\n1 1\nend\n").unwrap_err();
        assert_eq!(err.line, 5);
        let err = parse_graph("graph g\nvertices 2\nloops none\nedges\n0 1\n").unwrap_err();
        assert_eq!(err.line, 6);
    }

    #[test]
    fn duplicate_edges_warn() {
        let (g, w) =
            parse_graph_with_warnings("vertices 2\nloops none\nedges\n0 1\n1 0\nend\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].line, 5);
    }

    #[test]
    fn hom_and_path_blocks() {
        let (name, a) = parse_hom("hom alpha\n1 -> 2\n0 -> 1\nend\n").unwrap();
        assert_eq!(name, "alpha");
        assert_eq!(a.map(), &[1, 2]);
        assert!(parse_hom("hom a\n1 -> 2\nend\n").is_err());
        assert!(parse_hom("hom a\n0 -> 2\n0 -> 1\nend\n").is_err());
        let p = parse_path("path\n0 1 2\n1 1 2\nend\n", a.clone()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(parse_path(&serialize_path(&p), a).unwrap(), p);
    }

    #[test]
    fn instance_round_trip() {
        let g = complete(2).reflexive_closure().with_name("g");
        let a = Homomorphism::from_map_unchecked(vec![1, 1]);
        let b = Homomorphism::from_map_unchecked(vec![6, 6]);
        let text = serialize_instance(&g, &h7(), &a, &b);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed.g, g);
        assert_eq!(parsed.h, h7());
        assert_eq!(parsed.alpha, a);
        assert_eq!(parsed.beta, b);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..7).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2),
                proptest::collection::vec(proptest::option::of("[a-z(){},0-9 ]{1,12}"), n),
            )
                .prop_map(move |(loops, bits, labels)| {
                    let mut g = Graph::new("arb", n);
                    let mut k = 0;
                    for u in 0..n {
                        for v in u + 1..n {
                            if bits[k] {
                                g.add_edge(u, v).unwrap();
                            }
                            k += 1;
                        }
                        if loops[u] {
                            g.add_loop(u).unwrap();
                        }
                        if let Some(l) = &labels[u] {
                            if !l.trim().is_empty() {
                                g.set_label(u, l.trim()).unwrap();
                            }
                        }
                    }
                    g
                })
        })
    }

    proptest! {
        #[test]
        fn graph_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
        }
    }
}
