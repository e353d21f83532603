//! Two-dimensional cell complexes, their boundary and coboundary operators,
//! and the discrete Hodge decomposition on the torus.
//!
//! Every edge is stored once with a chosen orientation `(tail, head)`; a
//! [`VectorField`] holds its value on that orientation and is extended to the
//! reverse by antisymmetry. Faces are stored as cyclic lists of signed edges,
//! and a [`TwoChain`] holds the value on the stored orientation of each face.
//!
//! Torus conventions (`n1 × n2`, vertex `(i, j)` has id `i + n1·j`):
//!
//! * edge `2v` is horizontal, from `v` to `v + e1`; edge `2v + 1` is vertical,
//!   from `v` to `v + e2`;
//! * the face with lower-left corner `v` has id `v` and boundary
//!   `+h(v), +v(v + e1), −h(v + e2), −v(v)`, i.e. it is traversed
//!   anticlockwise;
//! * hence for a horizontal edge the face whose anticlockwise boundary uses it
//!   forward (`f₊`) is the face above, and for a vertical edge it is the face
//!   to the left. `dψ(e) = ψ(f₊) − ψ(f₋)`.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact_lp::{self, int, positive_part, LpError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("operation requires a two-dimensional torus")]
    NotTorus,
    #[error("field is not in the image of the boundary operator (fails at edge {edge})")]
    NotHomologous { edge: usize },
    #[error("length {found} does not match the complex ({expected})")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative rate on edge {0}")]
    NegativeRate(usize),
}

/// An edge used forward or backward in a face boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedEdge {
    pub edge: usize,
    pub forward: bool,
}

impl SignedEdge {
    pub fn sign(&self) -> Rational {
        if self.forward {
            Rational::one()
        } else {
            -Rational::one()
        }
    }
}

/// One use of an edge in a face boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub face: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Torus { n1: usize, n2: usize },
    /// One-dimensional torus: a cycle of `n` vertices and no faces.
    Ring { n: usize },
    KleinBottle { n1: usize, n2: usize },
    Surface,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComplex {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<SignedEdge>>,
    occurrences: Vec<Vec<Occurrence>>,
    orientable: bool,
    shape: Shape,
}

macro_rules! form {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(pub Vec<Rational>);

        impl $name {
            pub fn zeros(len: usize) -> Self {
                Self(vec![Rational::zero(); len])
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn scale(&self, c: &Rational) -> Self {
                Self(self.0.iter().map(|a| a * c).collect())
            }

            /// Sum over stored cells of the pointwise product.
            pub fn inner(&self, other: &Self) -> Rational {
                self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
            }
        }
    };
}

form!(
    /// Function on vertices.
    ZeroForm
);
form!(
    /// Antisymmetric function on oriented edges, stored on the chosen
    /// orientation of each edge.
    VectorField
);
form!(
    /// Function on oriented faces, stored on the chosen orientation of each
    /// face; the reversed face carries the negated value.
    TwoChain
);

impl TwoChain {
    pub fn constant(len: usize, c: Rational) -> Self {
        Self(vec![c; len])
    }

    pub fn indicator(len: usize, face: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[face] = Rational::one();
        v
    }

    /// True when all entries are equal.
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl ZeroForm {
    pub fn indicator(len: usize, vertex: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[vertex] = Rational::one();
        v
    }
}

impl TwoComplex {
    /// The `n1 × n2` discrete torus. Both sides must be at least 2.
    pub fn torus(n1: usize, n2: usize) -> Result<Self, ComplexError> {
        if n1 < 2 || n2 < 2 {
            return Err(ComplexError::InvalidComplex("torus sides must be at least 2".into()));
        }
        let nv = n1 * n2;
        let vid = |i: usize, j: usize| (i % n1) + n1 * (j % n2);
        let mut edges = Vec::with_capacity(2 * nv);
        for v in 0..nv {
            let (i, j) = (v % n1, v / n1);
            edges.push((v, vid(i + 1, j)));
            edges.push((v, vid(i, j + 1)));
        }
        let faces = (0..nv)
            .map(|v| {
                let (i, j) = (v % n1, v / n1);
                vec![
                    SignedEdge { edge: 2 * v, forward: true },
                    SignedEdge { edge: 2 * vid(i + 1, j) + 1, forward: true },
                    SignedEdge { edge: 2 * vid(i, j + 1), forward: false },
                    SignedEdge { edge: 2 * v + 1, forward: false },
                ]
            })
            .collect();
        let labels = (0..nv).map(|v| format!("({},{})", v % n1, v / n1)).collect();
        Self::build(labels, edges, faces, true, Shape::Torus { n1, n2 })
    }

    /// The one-dimensional torus: `n >= 3` vertices on a cycle, edges
    /// `(x, x + 1)`.
    pub fn ring(n: usize) -> Result<Self, ComplexError> {
        if n < 3 {
            return Err(ComplexError::InvalidComplex("ring needs at least 3 vertices".into()));
        }
        Ok(Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
            faces: Vec::new(),
            occurrences: vec![Vec::new(); n],
            orientable: true,
            shape: Shape::Ring { n },
        })
    }

    /// `n1 × n2` grid with the vertical wrap reflected by `i ↦ (n1 − i) mod n1`.
    pub fn klein_bottle(n1: usize, n2: usize) -> Result<Self, ComplexError> {
        if n1 < 2 || n2 < 2 {
            return Err(ComplexError::InvalidComplex("Klein bottle sides must be at least 2".into()));
        }
        let nv = n1 * n2;
        let flip = |i: usize| (n1 - i % n1) % n1;
        let vid = |i: usize, j: usize| (i % n1) + n1 * j;
        let mut edges = Vec::with_capacity(2 * nv);
        for v in 0..nv {
            let (i, j) = (v % n1, v / n1);
            edges.push((v, vid(i + 1, j)));
            let up = if j + 1 < n2 { vid(i, j + 1) } else { vid(flip(i), 0) };
            edges.push((v, up));
        }
        let faces = (0..nv)
            .map(|v| {
                let (i, j) = (v % n1, v / n1);
                let top = if j + 1 < n2 {
                    SignedEdge { edge: 2 * vid(i, j + 1), forward: false }
                } else {
                    SignedEdge { edge: 2 * vid(flip(i + 1), 0), forward: true }
                };
                vec![
                    SignedEdge { edge: 2 * v, forward: true },
                    SignedEdge { edge: 2 * vid(i + 1, j) + 1, forward: true },
                    top,
                    SignedEdge { edge: 2 * v + 1, forward: false },
                ]
            })
            .collect();
        let labels = (0..nv).map(|v| format!("({},{})", v % n1, v / n1)).collect();
        Self::build(labels, edges, faces, false, Shape::KleinBottle { n1, n2 })
    }

    /// A closed surface from explicit cells. Every face must be a closed walk
    /// and every edge must be used exactly twice. When `orientable` is true the
    /// two uses must have opposite signs; when false the faces must admit no
    /// consistent re-orientation.
    pub fn surface(
        labels: Vec<String>,
        edges: Vec<(usize, usize)>,
        faces: Vec<Vec<SignedEdge>>,
        orientable: bool,
    ) -> Result<Self, ComplexError> {
        Self::build(labels, edges, faces, orientable, Shape::Surface)
    }

    fn build(
        labels: Vec<String>,
        edges: Vec<(usize, usize)>,
        faces: Vec<Vec<SignedEdge>>,
        orientable: bool,
        shape: Shape,
    ) -> Result<Self, ComplexError> {
        let invalid = |msg: String| Err(ComplexError::InvalidComplex(msg));
        let nv = labels.len();
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= nv || b >= nv {
                return invalid(format!("edge {e} uses an unknown vertex"));
            }
            if a == b {
                return invalid(format!("edge {e} is a loop"));
            }
        }
        let mut occurrences = vec![Vec::new(); edges.len()];
        for (f, boundary) in faces.iter().enumerate() {
            if boundary.is_empty() {
                return invalid(format!("face {f} is empty"));
            }
            for (k, se) in boundary.iter().enumerate() {
                if se.edge >= edges.len() {
                    return invalid(format!("face {f} uses unknown edge {}", se.edge));
                }
                let next = boundary[(k + 1) % boundary.len()];
                if next.edge >= edges.len() {
                    return invalid(format!("face {f} uses unknown edge {}", next.edge));
                }
                let end = oriented(edges[se.edge], se.forward).1;
                let start = oriented(edges[next.edge], next.forward).0;
                if end != start {
                    return invalid(format!("face {f} is not a closed walk"));
                }
                occurrences[se.edge].push(Occurrence { face: f, forward: se.forward });
            }
        }
        for (e, occ) in occurrences.iter().enumerate() {
            if occ.len() != 2 {
                return invalid(format!("edge {e} belongs to {} face sides instead of 2", occ.len()));
            }
        }
        if !faces.is_empty() && !dual_connected(faces.len(), &occurrences) {
            return invalid("faces do not form a connected surface".into());
        }
        let agree = occurrences.iter().all(|o| o[0].forward != o[1].forward);
        if orientable && !agree {
            return invalid("faces of an orientable complex are not oriented in agreement".into());
        }
        if !orientable && reorientable(faces.len(), &occurrences) {
            return invalid("complex declared non-orientable admits a consistent orientation".into());
        }
        Ok(Self {
            labels,
            edges,
            faces,
            occurrences,
            orientable,
            shape,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn torus_dims(&self) -> Option<(usize, usize)> {
        match self.shape {
            Shape::Torus { n1, n2 } => Some((n1, n2)),
            _ => None,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `(tail, head)` of the stored orientation.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn face(&self, f: usize) -> &[SignedEdge] {
        &self.faces[f]
    }

    pub fn occurrences(&self, e: usize) -> &[Occurrence] {
        &self.occurrences[e]
    }

    /// Vertex cycle traversed by the stored orientation of face `f`.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f]
            .iter()
            .map(|se| oriented(self.edges[se.edge], se.forward).0)
            .collect()
    }

    /// `(f₊, f₋)` for an orientable complex: the face using `e` forward and
    /// the face using it backward.
    pub fn plus_minus_faces(&self, e: usize) -> Option<(usize, usize)> {
        let occ = &self.occurrences[e];
        if occ.len() != 2 {
            return None;
        }
        match (occ[0].forward, occ[1].forward) {
            (true, false) => Some((occ[0].face, occ[1].face)),
            (false, true) => Some((occ[1].face, occ[0].face)),
            _ => None,
        }
    }

    pub fn torus_vertex(&self, i: usize, j: usize) -> usize {
        let (n1, n2) = self.torus_dims().expect("torus complex");
        (i % n1) + n1 * (j % n2)
    }

    /// Horizontal edge leaving `(i, j)`.
    pub fn horizontal_edge(&self, i: usize, j: usize) -> usize {
        2 * self.torus_vertex(i, j)
    }

    /// Vertical edge leaving `(i, j)`.
    pub fn vertical_edge(&self, i: usize, j: usize) -> usize {
        2 * self.torus_vertex(i, j) + 1
    }

    /// Face with lower-left corner `(i, j)`.
    pub fn face_at(&self, i: usize, j: usize) -> usize {
        self.torus_vertex(i, j)
    }

    fn check_len(expected: usize, found: usize) -> Result<(), ComplexError> {
        if expected == found {
            Ok(())
        } else {
            Err(ComplexError::DimensionMismatch { expected, found })
        }
    }

    /// `δf(x, y) = f(y) − f(x)`.
    pub fn coboundary0(&self, f: &ZeroForm) -> VectorField {
        VectorField(self.edges.iter().map(|&(a, b)| &f.0[b] - &f.0[a]).collect())
    }

    /// Divergence `dφ(x) = Σ_y φ(x, y)`: outflow minus inflow.
    pub fn boundary1(&self, phi: &VectorField) -> ZeroForm {
        let mut out = ZeroForm::zeros(self.num_vertices());
        for (&(a, b), v) in self.edges.iter().zip(&phi.0) {
            out.0[a] += v;
            out.0[b] -= v;
        }
        out
    }

    /// `dψ(e) = Σ` over the faces using `e` of `±ψ(face)`.
    pub fn boundary2(&self, psi: &TwoChain) -> VectorField {
        VectorField(
            self.occurrences
                .iter()
                .map(|occ| {
                    occ.iter()
                        .map(|o| if o.forward { psi.0[o.face].clone() } else { -psi.0[o.face].clone() })
                        .sum()
                })
                .collect(),
        )
    }

    /// Circulation `δφ(f) = Σ_{(x,y) ∈ f} φ(x, y)`.
    pub fn coboundary1(&self, phi: &VectorField) -> TwoChain {
        TwoChain(
            self.faces
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|se| if se.forward { phi.0[se.edge].clone() } else { -phi.0[se.edge].clone() })
                        .sum()
                })
                .collect(),
        )
    }

    /// Matrix of `δ: Λ⁰ → Λ¹` (rows edges, columns vertices).
    pub fn coboundary0_matrix(&self) -> Vec<Vec<Rational>> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let mut row = vec![Rational::zero(); self.num_vertices()];
                row[a] -= Rational::one();
                row[b] += Rational::one();
                row
            })
            .collect()
    }

    /// Matrix of `d: Λ² → Λ¹` (rows edges, columns faces).
    pub fn boundary2_matrix(&self) -> Vec<Vec<Rational>> {
        self.occurrences
            .iter()
            .map(|occ| {
                let mut row = vec![Rational::zero(); self.num_faces()];
                for o in occ {
                    if o.forward {
                        row[o.face] += Rational::one();
                    } else {
                        row[o.face] -= Rational::one();
                    }
                }
                row
            })
            .collect()
    }

    /// Constant unit field along direction `axis` (0 horizontal, 1 vertical).
    pub fn harmonic_basis(&self, axis: usize) -> Result<VectorField, ComplexError> {
        self.torus_dims().ok_or(ComplexError::NotTorus)?;
        Ok(VectorField(
            (0..self.num_edges())
                .map(|e| if e % 2 == axis { Rational::one() } else { Rational::zero() })
                .collect(),
        ))
    }

    fn direction_sums(&self, phi: &VectorField) -> [Rational; 2] {
        let mut sums = [Rational::zero(), Rational::zero()];
        for (e, v) in phi.0.iter().enumerate() {
            sums[e % 2] += v;
        }
        sums
    }

    /// Torus test for `φ ∈ dΛ²`: zero divergence and zero total flux in each
    /// direction. On other complexes this is solvability of `dψ = φ`.
    pub fn in_d_lambda2(&self, phi: &VectorField) -> Result<bool, ComplexError> {
        Self::check_len(self.num_edges(), phi.len())?;
        if self.torus_dims().is_some() {
            return Ok(self.boundary1(phi).is_zero() && self.direction_sums(phi).iter().all(Zero::is_zero));
        }
        match self.recover_psi(phi, 0) {
            Ok(_) => Ok(true),
            Err(ComplexError::NotHomologous { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// A two-chain `ψ` with `dψ = φ`.
    ///
    /// Orientable complexes: breadth-first integration over the dual graph
    /// from `base_face` (where `ψ = 0`), then a consistency check on every
    /// edge; any other solution differs by a constant.
    /// Non-orientable complexes: the exact linear system has at most one
    /// solution, and `base_face` is ignored.
    pub fn recover_psi(&self, phi: &VectorField, base_face: usize) -> Result<TwoChain, ComplexError> {
        Self::check_len(self.num_edges(), phi.len())?;
        if self.faces.is_empty() {
            return match phi.0.iter().position(|v| !v.is_zero()) {
                Some(edge) => Err(ComplexError::NotHomologous { edge }),
                None => Ok(TwoChain::zeros(0)),
            };
        }
        if base_face >= self.num_faces() {
            return Err(ComplexError::DimensionMismatch {
                expected: self.num_faces(),
                found: base_face,
            });
        }
        let psi = if self.orientable {
            self.integrate_dual(phi, base_face)
        } else {
            match exact_lp::solve_exact_linear(&self.boundary2_matrix(), &phi.0) {
                Ok(v) => TwoChain(v),
                Err(LpError::NoSolution) => {
                    return Err(ComplexError::NotHomologous { edge: 0 });
                }
                Err(e) => unreachable!("square system built from the complex: {e}"),
            }
        };
        let check = self.boundary2(&psi);
        if let Some(edge) = (0..self.num_edges()).find(|&e| check.0[e] != phi.0[e]) {
            return Err(ComplexError::NotHomologous { edge });
        }
        Ok(psi)
    }

    fn integrate_dual(&self, phi: &VectorField, base_face: usize) -> TwoChain {
        let nf = self.num_faces();
        let mut psi: Vec<Option<Rational>> = vec![None; nf];
        psi[base_face] = Some(Rational::zero());
        let mut queue = VecDeque::from([base_face]);
        while let Some(f) = queue.pop_front() {
            let here = psi[f].clone().expect("visited");
            for se in &self.faces[f] {
                let (plus, minus) = self.plus_minus_faces(se.edge).expect("orientable");
                // ψ(f₊) − ψ(f₋) = φ(e)
                let (other, value) = if plus == f {
                    (minus, &here - &phi.0[se.edge])
                } else {
                    (plus, &here + &phi.0[se.edge])
                };
                if psi[other].is_none() {
                    psi[other] = Some(value);
                    queue.push_back(other);
                }
            }
        }
        TwoChain(psi.into_iter().map(|v| v.expect("dual graph is connected")).collect())
    }

    /// Three-way orthogonal split of a torus field.
    pub fn hodge_decompose(&self, phi: &VectorField) -> Result<HodgeParts, ComplexError> {
        let (n1, n2) = self.torus_dims().ok_or(ComplexError::NotTorus)?;
        Self::check_len(self.num_edges(), phi.len())?;
        let area = int((n1 * n2) as i64);
        let [s1, s2] = self.direction_sums(phi);
        let coefficients = (s1 / &area, s2 / &area);
        let harmonic = self
            .harmonic_basis(0)?
            .scale(&coefficients.0)
            .add(&self.harmonic_basis(1)?.scale(&coefficients.1));

        // Normal equations d(δf) = dφ, pinned by f(0) = 0.
        let nv = self.num_vertices();
        let mut laplacian = vec![vec![Rational::zero(); nv]; nv];
        for &(a, b) in &self.edges {
            for (x, y) in [(a, b), (b, a)] {
                laplacian[x][x] -= Rational::one();
                laplacian[x][y] += Rational::one();
            }
        }
        let mut rhs = self.boundary1(phi).0;
        let mut pin = vec![Rational::zero(); nv];
        pin[0] = Rational::one();
        laplacian.push(pin);
        rhs.push(Rational::zero());
        let potential = ZeroForm(
            exact_lp::solve_exact_linear(&laplacian, &rhs).expect("divergence is orthogonal to constants"),
        );
        let gradient = self.coboundary0(&potential);
        let homologous = phi.sub(&gradient).sub(&harmonic);
        Ok(HodgeParts {
            potential,
            gradient,
            homologous,
            harmonic,
            harmonic_coefficients: coefficients,
        })
    }

    /// Edges of the dual graph as `(f₊, f₋, primal edge)`; orientable only.
    pub fn dual_edges(&self) -> Option<Vec<(usize, usize, usize)>> {
        (0..self.num_edges())
            .map(|e| self.plus_minus_faces(e).map(|(p, m)| (p, m, e)))
            .collect()
    }
}

/// Re-orient a face `f` when `flip[f]`; true if some choice makes every edge
/// appear once forward and once backward.
fn reorientable(num_faces: usize, occurrences: &[Vec<Occurrence>]) -> bool {
    let mut adjacency = vec![Vec::new(); num_faces];
    for occ in occurrences {
        let (a, b) = (occ[0], occ[1]);
        // flip[a] xor flip[b] must equal (a.forward == b.forward).
        let parity = a.forward == b.forward;
        if a.face == b.face {
            if parity {
                return false;
            }
            continue;
        }
        adjacency[a.face].push((b.face, parity));
        adjacency[b.face].push((a.face, parity));
    }
    let mut flip: Vec<Option<bool>> = vec![None; num_faces];
    for root in 0..num_faces {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            let here = flip[f].expect("visited");
            for &(g, parity) in &adjacency[f] {
                let want = here ^ parity;
                match flip[g] {
                    None => {
                        flip[g] = Some(want);
                        queue.push_back(g);
                    }
                    Some(v) if v != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

fn dual_connected(num_faces: usize, occurrences: &[Vec<Occurrence>]) -> bool {
    let mut adjacency = vec![Vec::new(); num_faces];
    for occ in occurrences {
        adjacency[occ[0].face].push(occ[1].face);
        adjacency[occ[1].face].push(occ[0].face);
    }
    let mut seen = vec![false; num_faces];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(f) = stack.pop() {
        for &g in &adjacency[f] {
            if !std::mem::replace(&mut seen[g], true) {
                stack.push(g);
            }
        }
    }
    seen.into_iter().all(|v| v)
}

fn oriented(edge: (usize, usize), forward: bool) -> (usize, usize) {
    if forward {
        edge
    } else {
        (edge.1, edge.0)
    }
}

/// `φ = gradient + homologous + harmonic` with the three parts pairwise
/// orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeParts {
    /// `f` with `gradient = δf` and `f(0) = 0`.
    pub potential: ZeroForm,
    pub gradient: VectorField,
    pub homologous: VectorField,
    pub harmonic: VectorField,
    /// Coefficients of the horizontal and vertical unit fields.
    pub harmonic_coefficients: (Rational, Rational),
}

impl HodgeParts {
    pub fn recompose(&self) -> VectorField {
        self.gradient.add(&self.homologous).add(&self.harmonic)
    }
}

/// Nonnegative rates on both orientations of every stored edge:
/// `forward[e] = r(tail, head)`, `backward[e] = r(head, tail)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rates {
    pub forward: Vec<Rational>,
    pub backward: Vec<Rational>,
}

impl Rates {
    pub fn new(forward: Vec<Rational>, backward: Vec<Rational>) -> Result<Self, ComplexError> {
        Self::check_len(forward.len(), backward.len())?;
        if let Some(e) = forward.iter().zip(&backward).position(|(a, b)| a < &Rational::zero() || b < &Rational::zero()) {
            return Err(ComplexError::NegativeRate(e));
        }
        Ok(Self { forward, backward })
    }

    fn check_len(expected: usize, found: usize) -> Result<(), ComplexError> {
        TwoComplex::check_len(expected, found)
    }

    /// Equal rates `s` in both directions.
    pub fn symmetric(s: Vec<Rational>) -> Result<Self, ComplexError> {
        Self::new(s.clone(), s)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn add(&self, other: &Rates) -> Rates {
        Rates {
            forward: self.forward.iter().zip(&other.forward).map(|(a, b)| a + b).collect(),
            backward: self.backward.iter().zip(&other.backward).map(|(a, b)| a + b).collect(),
        }
    }

    /// Per-edge symmetric part `s = min(r(x,y), r(y,x))`.
    pub fn symmetric_values(&self) -> Vec<Rational> {
        self.forward.iter().zip(&self.backward).map(|(a, b)| a.min(b).clone()).collect()
    }
}

/// `φ^r(x, y) = r(x, y) − r(y, x)`.
pub fn rates_to_field(r: &Rates) -> VectorField {
    VectorField(r.forward.iter().zip(&r.backward).map(|(a, b)| a - b).collect())
}

/// Minimal rates `r^φ(x, y) = [φ(x, y)]₊`.
pub fn field_to_rates(phi: &VectorField) -> Rates {
    Rates {
        forward: phi.0.iter().map(positive_part).collect(),
        backward: phi.0.iter().map(|v| positive_part(&-v.clone())).collect(),
    }
}

/// The symmetric part `s`, as rates equal in both directions; `r = s + r^{φ^r}`.
pub fn symmetric_part(r: &Rates) -> Rates {
    let s = r.symmetric_values();
    Rates {
        forward: s.clone(),
        backward: s,
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Torus { n1, n2 } => write!(f, "torus {n1}x{n2}"),
            Shape::Ring { n } => write!(f, "ring {n}"),
            Shape::KleinBottle { n1, n2 } => write!(f, "klein bottle {n1}x{n2}"),
            Shape::Surface => f.write_str("surface"),
        }
    }
}
