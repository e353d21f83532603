//! Line-oriented text formats. `#` starts a comment; blank lines are skipped;
//! numbers are integers or `num/den`.
//!
//! ```text
//! # measure: one atom per line
//! 1 0 1/4
//! -1 0 1/4
//!
//! # graph
//! digraph triangle
//! a b 1
//!
//! # surface
//! orientable yes
//! vertex p
//! edge 0 1
//! face +0 +1 -2
//!
//! # field or rates on a torus (`i j h|v`) or by edge index
//! field torus 10x10
//! 3 0 v -1
//! rates ring 5
//! 0 2 1
//!
//! # decompositions
//! decomposition graph
//! cycle 1/2 a b c
//! decomposition lattice 2
//! class 1/3 1 2 -1 2 -1 2
//! trivial 0
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::complex::{Rates, Shape, SignedEdge, TwoComplex, VectorField};
use crate::exact_lp::{format_rational, parse_rational, Rational};
use crate::finite_graph::{GraphCycle, GraphDecomposition, WeightedDigraph};
use crate::lattice::{LatticeCycleClass, LatticeDecomposition, LatticeMeasure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments removed, paired with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn rational(line: usize, token: &str) -> Result<Rational, ParseError> {
    parse_rational(token).or_else(|e| err(line, e.to_string()))
}

fn integer<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, ParseError> {
    token.parse().or_else(|_| err(line, format!("expected an integer, found `{token}`")))
}

pub fn parse_measure(text: &str) -> Result<LatticeMeasure, ParseError> {
    let mut dim = None;
    let mut atoms: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    for (line, tokens) in content_lines(text) {
        let d = *dim.get_or_insert(tokens.len() - 1);
        if d == 0 {
            return err(line, "an atom needs coordinates and a mass");
        }
        if tokens.len() != d + 1 {
            return err(line, format!("expected {d} coordinates and a mass"));
        }
        let point = tokens[..d].iter().map(|t| integer(line, t)).collect::<Result<Vec<i64>, _>>()?;
        let mass = rational(line, tokens[d])?;
        if mass < Rational::zero() {
            return err(line, "negative mass");
        }
        if atoms.insert(point, mass).is_some() {
            return err(line, "duplicate point");
        }
    }
    let Some(dim) = dim else {
        return err(0, "measure file has no atoms");
    };
    LatticeMeasure::from_atoms(dim, atoms).or_else(|e| err(0, e.to_string()))
}

pub fn write_measure(p: &LatticeMeasure) -> String {
    let mut out = String::new();
    for (x, w) in p.atoms() {
        let coords: Vec<String> = x.iter().map(i64::to_string).collect();
        out.push_str(&format!("{} {}\n", coords.join(" "), format_rational(w)));
    }
    out
}

/// Reads `digraph <name>` followed by `u v w` lines. Self-loops are accepted
/// only when `self_loops` is set.
pub fn parse_graph(text: &str, self_loops: bool) -> Result<(String, WeightedDigraph), ParseError> {
    let mut lines = content_lines(text);
    let name = match lines.next() {
        Some((_, t)) if t[0] == "digraph" && t.len() <= 2 => t.get(1).unwrap_or(&"").to_string(),
        Some((line, _)) => return err(line, "expected header `digraph <name>`"),
        None => return err(0, "empty graph file"),
    };
    let mut g = if self_loops {
        WeightedDigraph::with_self_loops()
    } else {
        WeightedDigraph::new()
    };
    for (line, tokens) in lines {
        let [u, v, w] = tokens[..] else {
            return err(line, "expected `u v weight`");
        };
        let w = rational(line, w)?;
        g.add_edge(u, v, w).or_else(|e| err(line, e.to_string()))?;
    }
    Ok((name, g))
}

pub fn write_graph(name: &str, g: &WeightedDigraph) -> String {
    let mut out = format!("digraph {name}\n");
    for (&(u, v), w) in g.edges() {
        out.push_str(&format!("{} {} {}\n", g.label(u), g.label(v), format_rational(w)));
    }
    out
}

pub fn parse_surface(text: &str) -> Result<TwoComplex, ParseError> {
    let mut orientable = None;
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens[0] {
            "orientable" => {
                let value = match tokens.get(1..) {
                    Some(["yes"]) => true,
                    Some(["no"]) => false,
                    _ => return err(line, "expected `orientable yes|no`"),
                };
                if orientable.replace(value).is_some() {
                    return err(line, "repeated orientable header");
                }
            }
            "vertex" => match tokens[1..] {
                [] => labels.push(labels.len().to_string()),
                [label] => labels.push(label.to_string()),
                _ => return err(line, "expected `vertex [label]`"),
            },
            "edge" => {
                let [_, a, b] = tokens[..] else {
                    return err(line, "expected `edge u v`");
                };
                edges.push((integer(line, a)?, integer(line, b)?));
            }
            "face" => {
                let mut face = Vec::new();
                for t in &tokens[1..] {
                    let (forward, idx) = match t.split_at(1) {
                        ("+", rest) => (true, rest),
                        ("-", rest) => (false, rest),
                        _ => return err(line, format!("signed edge `{t}` must start with + or -")),
                    };
                    face.push(SignedEdge {
                        edge: integer(line, idx)?,
                        forward,
                    });
                }
                faces.push(face);
            }
            other => return err(line, format!("unknown record `{other}`")),
        }
    }
    let Some(orientable) = orientable else {
        return err(0, "missing `orientable yes|no` header");
    };
    TwoComplex::surface(labels, edges, faces, orientable).or_else(|e| err(0, e.to_string()))
}

pub fn write_surface(c: &TwoComplex) -> String {
    let mut out = format!("orientable {}\n", if c.is_orientable() { "yes" } else { "no" });
    for label in c.labels() {
        out.push_str(&format!("vertex {label}\n"));
    }
    for (a, b) in c.edges() {
        out.push_str(&format!("edge {a} {b}\n"));
    }
    for f in 0..c.num_faces() {
        let cells: Vec<String> = c
            .face(f)
            .iter()
            .map(|se| format!("{}{}", if se.forward { '+' } else { '-' }, se.edge))
            .collect();
        out.push_str(&format!("face {}\n", cells.join(" ")));
    }
    out
}

/// Complex named by an edge-data header, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredShape {
    Torus(usize, usize),
    Ring(usize),
}

impl DeclaredShape {
    pub fn build(self) -> Result<TwoComplex, ParseError> {
        match self {
            DeclaredShape::Torus(a, b) => TwoComplex::torus(a, b),
            DeclaredShape::Ring(n) => TwoComplex::ring(n),
        }
        .or_else(|e| err(0, e.to_string()))
    }
}

/// `N` or `N1xN2`.
pub fn parse_torus_dims(text: &str) -> Option<(usize, usize)> {
    match text.split_once('x') {
        Some((a, b)) => Some((a.parse().ok()?, b.parse().ok()?)),
        None => text.parse().ok().map(|n| (n, n)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeData {
    Field(VectorField),
    Rates(Rates),
}

impl EdgeData {
    /// A field is read as its minimal rates `[φ]₊`, `[−φ]₊`.
    pub fn into_rates(self) -> Rates {
        match self {
            EdgeData::Field(phi) => crate::complex::field_to_rates(&phi),
            EdgeData::Rates(r) => r,
        }
    }

    pub fn into_field(self) -> VectorField {
        match self {
            EdgeData::Field(phi) => phi,
            EdgeData::Rates(r) => crate::complex::rates_to_field(&r),
        }
    }
}

/// Header of an edge-data file: `field|rates [torus N1xN2 | ring N]`.
pub fn peek_edge_header(text: &str) -> Result<(bool, Option<DeclaredShape>), ParseError> {
    let Some((line, tokens)) = content_lines(text).next() else {
        return err(0, "empty field file");
    };
    let is_rates = match tokens[0] {
        "field" => false,
        "rates" => true,
        _ => return err(line, "expected header `field` or `rates`"),
    };
    let shape = match tokens[1..] {
        [] => None,
        ["torus", dims] => {
            let (a, b) = parse_torus_dims(dims).ok_or_else(|| ParseError {
                line,
                message: format!("bad torus size `{dims}`"),
            })?;
            Some(DeclaredShape::Torus(a, b))
        }
        ["ring", n] => Some(DeclaredShape::Ring(integer(line, n)?)),
        _ => return err(line, "expected `torus N1xN2` or `ring N` after the header"),
    };
    Ok((is_rates, shape))
}

fn edge_address(c: &TwoComplex, line: usize, tokens: &[&str]) -> Result<(usize, usize), ParseError> {
    if let (Some((n1, n2)), [i, j, dir, ..]) = (c.torus_dims(), tokens) {
        if *dir == "h" || *dir == "v" {
            let (i, j): (usize, usize) = (integer(line, i)?, integer(line, j)?);
            if i >= n1 || j >= n2 {
                return err(line, format!("vertex ({i},{j}) outside the {n1}x{n2} torus"));
            }
            let e = if *dir == "h" { c.horizontal_edge(i, j) } else { c.vertical_edge(i, j) };
            return Ok((e, 3));
        }
    }
    let e: usize = integer(line, tokens[0])?;
    if e >= c.num_edges() {
        return err(line, format!("edge {e} out of range"));
    }
    Ok((e, 1))
}

/// Values on the edges of `c`; edges not listed are zero.
pub fn parse_edge_data(text: &str, c: &TwoComplex) -> Result<EdgeData, ParseError> {
    let (is_rates, shape) = peek_edge_header(text)?;
    if let Some(shape) = shape {
        let matches = match (shape, c.shape()) {
            (DeclaredShape::Torus(a, b), Shape::Torus { n1, n2 }) => (a, b) == (n1, n2),
            (DeclaredShape::Ring(n), Shape::Ring { n: m }) => n == m,
            _ => false,
        };
        if !matches {
            return err(1, format!("file declares a different complex than {}", c.shape()));
        }
    }
    let width = if is_rates { 2 } else { 1 };
    let ne = c.num_edges();
    let mut values = vec![vec![Rational::zero(); ne]; width];
    let mut seen = vec![false; ne];
    for (line, tokens) in content_lines(text).skip(1) {
        let (e, used) = edge_address(c, line, &tokens)?;
        if tokens.len() != used + width {
            return err(line, format!("expected {width} value(s) after the edge"));
        }
        if std::mem::replace(&mut seen[e], true) {
            return err(line, format!("edge {e} listed twice"));
        }
        for (k, t) in tokens[used..].iter().enumerate() {
            values[k][e] = rational(line, t)?;
        }
    }
    if is_rates {
        let backward = values.pop().expect("two columns");
        let forward = values.pop().expect("two columns");
        Rates::new(forward, backward).map(EdgeData::Rates).or_else(|e| err(0, e.to_string()))
    } else {
        Ok(EdgeData::Field(VectorField(values.pop().expect("one column"))))
    }
}

fn shape_suffix(c: &TwoComplex) -> String {
    match c.shape() {
        Shape::Torus { n1, n2 } => format!(" torus {n1}x{n2}"),
        Shape::Ring { n } => format!(" ring {n}"),
        _ => String::new(),
    }
}

fn edge_prefix(c: &TwoComplex, e: usize) -> String {
    match c.torus_dims() {
        Some((n1, _)) => {
            let v = e / 2;
            format!("{} {} {}", v % n1, v / n1, if e.is_multiple_of(2) { 'h' } else { 'v' })
        }
        None => e.to_string(),
    }
}

/// Nonzero entries only.
pub fn write_field(c: &TwoComplex, phi: &VectorField) -> String {
    let mut out = format!("field{}\n", shape_suffix(c));
    for (e, v) in phi.0.iter().enumerate() {
        if !v.is_zero() {
            out.push_str(&format!("{} {}\n", edge_prefix(c, e), format_rational(v)));
        }
    }
    out
}

pub fn write_rates(c: &TwoComplex, r: &Rates) -> String {
    let mut out = format!("rates{}\n", shape_suffix(c));
    for e in 0..r.len() {
        if !r.forward[e].is_zero() || !r.backward[e].is_zero() {
            out.push_str(&format!(
                "{} {} {}\n",
                edge_prefix(c, e),
                format_rational(&r.forward[e]),
                format_rational(&r.backward[e])
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionFile {
    /// Cycles as label sequences.
    Graph(Vec<(Vec<String>, Rational)>),
    Lattice(LatticeDecomposition),
}

pub fn write_graph_decomposition(dec: &GraphDecomposition, g: &WeightedDigraph) -> String {
    let mut out = String::from("decomposition graph\n");
    for (cycle, w) in &dec.terms {
        let labels: Vec<&str> = cycle.vertices().iter().map(|&v| g.label(v)).collect();
        out.push_str(&format!("cycle {} {}\n", format_rational(w), labels.join(" ")));
    }
    out
}

pub fn write_lattice_decomposition(dec: &LatticeDecomposition) -> String {
    let mut out = format!("decomposition lattice {}\n", dec.dim);
    for (class, w) in &dec.terms {
        let mut cells = vec![format_rational(w)];
        for (x, n) in class.entries() {
            cells.push(n.to_string());
            cells.extend(x.iter().map(i64::to_string));
        }
        out.push_str(&format!("class {}\n", cells.join(" ")));
    }
    out.push_str(&format!("trivial {}\n", format_rational(&dec.trivial_mass)));
    out
}

pub fn parse_decomposition(text: &str) -> Result<DecompositionFile, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(ParseError {
        line: 0,
        message: "empty decomposition file".into(),
    })?;
    match header[..] {
        ["decomposition", "graph"] => {
            let mut terms = Vec::new();
            for (line, t) in lines {
                if t[0] != "cycle" || t.len() < 3 {
                    return err(line, "expected `cycle weight v1 v2 ...`");
                }
                terms.push((t[2..].iter().map(|s| s.to_string()).collect(), rational(line, t[1])?));
            }
            Ok(DecompositionFile::Graph(terms))
        }
        ["decomposition", "lattice", d] => {
            let dim: usize = integer(line, d)?;
            if dim == 0 {
                return err(line, "dimension must be positive");
            }
            let mut terms = Vec::new();
            let mut trivial = None;
            for (line, t) in lines {
                match t[0] {
                    "class" if t.len() >= 2 && (t.len() - 2) % (dim + 1) == 0 => {
                        let w = rational(line, t[1])?;
                        let mut entries = Vec::new();
                        for chunk in t[2..].chunks(dim + 1) {
                            let n: u64 = integer(line, chunk[0])?;
                            let x = chunk[1..].iter().map(|s| integer(line, s)).collect::<Result<Vec<i64>, _>>()?;
                            entries.push((x, n));
                        }
                        let class = LatticeCycleClass::new(entries).or_else(|e| err(line, e.to_string()))?;
                        terms.push((class, w));
                    }
                    "trivial" if t.len() == 2 => {
                        if trivial.replace(rational(line, t[1])?).is_some() {
                            return err(line, "repeated trivial record");
                        }
                    }
                    _ => return err(line, "expected `class weight n x... ...` or `trivial weight`"),
                }
            }
            Ok(DecompositionFile::Lattice(LatticeDecomposition {
                dim,
                terms,
                trivial_mass: trivial.unwrap_or_else(Rational::zero),
            }))
        }
        _ => err(line, "expected `decomposition graph` or `decomposition lattice <d>`"),
    }
}

/// Resolve labels against `g`.
pub fn graph_decomposition_from_labels(
    terms: &[(Vec<String>, Rational)],
    g: &WeightedDigraph,
) -> Result<GraphDecomposition, ParseError> {
    let mut out = Vec::new();
    for (labels, w) in terms {
        let ids = labels
            .iter()
            .map(|l| g.vertex_id(l).ok_or_else(|| ParseError { line: 0, message: format!("unknown vertex `{l}`") }))
            .collect::<Result<Vec<_>, _>>()?;
        let cycle = GraphCycle::new(ids).or_else(|e| err(0, e.to_string()))?;
        out.push((cycle, w.clone()));
    }
    Ok(GraphDecomposition { terms: out })
}
