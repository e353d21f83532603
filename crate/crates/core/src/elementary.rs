//! Decompositions into elementary cycles: back-and-forth cycles on single
//! edges and boundary cycles of single faces.
//!
//! Write `r = s + r^φ` with `s` the symmetric part and `φ = dψ`. A rate lies in
//! `R^e` exactly when some shift `c` puts every edge interval `c + I(e)` within
//! distance `s(e)` of the origin (orientable surfaces), or when
//! `s(e) >= d(0, J(e))` for every edge (non-orientable surfaces, where `ψ` is
//! unique and no shift is available). The decomposition uses face weights
//! `[ψ + c]₊` and `[−ψ − c]₊`; everything left over goes to edge cycles.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use petgraph::algo::min_spanning_tree;
use petgraph::data::Element;
use petgraph::graph::UnGraph;

use crate::complex::{rates_to_field, ComplexError, Rates, Shape, TwoChain, TwoComplex, VectorField};
use crate::exact_lp::{self, int, positive_part, Feasibility, Rational};
use crate::finite_graph::{GraphCycle, GraphDecomposition, GraphError, WeightedDigraph};
use crate::lattice::{PeriodicCycle, PeriodicLift, PeriodicRecord, Translates};

/// Largest number of LP variables the brute-force oracle accepts.
pub const ORACLE_VARIABLE_BUDGET: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElementaryError {
    #[error("rates are not in R^e")]
    NotInRe,
    #[error("edge {edge} would receive negative weight")]
    NegativeEdgeWeight { edge: usize },
    #[error("field is not constant on the ring, so the divergence is nonzero")]
    NotBalanced,
    #[error("parameter a must lie in [0, m]")]
    ParameterOutOfRange,
    #[error("operation requires an orientable complex")]
    NotOrientable,
    #[error("operation requires a ring complex")]
    NotRing,
    #[error("oracle needs {variables} variables, over the budget of {budget}")]
    TooLarge { variables: usize, budget: usize },
    #[error("{found} rates for {expected} edges")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_rates(r: &Rates, complex: &TwoComplex) -> Result<(), ElementaryError> {
    if r.len() != complex.num_edges() || r.backward.len() != r.forward.len() {
        return Err(ElementaryError::DimensionMismatch {
            expected: complex.num_edges(),
            found: r.len(),
        });
    }
    Ok(())
}

/// Closed set attached to an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeSet {
    /// `[lo, hi]`.
    Interval { lo: Rational, hi: Rational },
    /// `(−∞, lo] ∪ [hi, ∞)`, for edges used with the same sign by both faces.
    Complement { lo: Rational, hi: Rational },
}

impl EdgeSet {
    fn from_values(a: &Rational, b: &Rational, complement: bool) -> Self {
        let (lo, hi) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if complement {
            EdgeSet::Complement { lo, hi }
        } else {
            EdgeSet::Interval { lo, hi }
        }
    }

    /// Distance from the origin to the set.
    pub fn distance_to_zero(&self) -> Rational {
        match self {
            EdgeSet::Interval { lo, hi } => distance_to_interval(&Rational::zero(), lo, hi),
            EdgeSet::Complement { lo, hi } => {
                if lo.is_negative() && hi.is_positive() {
                    (-lo.clone()).min(hi.clone())
                } else {
                    Rational::zero()
                }
            }
        }
    }
}

fn distance_to_interval(x: &Rational, lo: &Rational, hi: &Rational) -> Rational {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        Rational::zero()
    }
}

/// Distance between two closed intervals.
pub fn interval_distance(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> Rational {
    positive_part(&(b.0 - a.1)).max(positive_part(&(a.0 - b.1)))
}

/// One set per stored edge, built from `ψ` on the two faces using the edge.
pub fn edge_intervals(psi: &TwoChain, complex: &TwoComplex) -> Vec<EdgeSet> {
    (0..complex.num_edges())
        .map(|e| {
            let occ = complex.occurrences(e);
            let same_sign = occ[0].forward == occ[1].forward;
            EdgeSet::from_values(&psi.0[occ[0].face], &psi.0[occ[1].face], same_sign)
        })
        .collect()
}

/// Why a rate is not in `R^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReRejection {
    /// `φ^r ∉ dΛ²`, which already rules out homotopically trivial cycles.
    NotHomologous { edge: usize },
    /// `s(first) + s(second) < d(I(first), I(second))`.
    PolyhedronViolated {
        first: usize,
        second: usize,
        distance: Rational,
        slack_sum: Rational,
    },
    /// Non-orientable case: `s(edge) < d(0, J(edge))`.
    EdgeBelowDistance { edge: usize, distance: Rational, slack: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReVerdict {
    /// `witness` is the shift `c`; `interval` is the full feasible range of
    /// shifts (absent for non-orientable complexes, where `c = 0`).
    Yes {
        witness: Rational,
        interval: Option<(Rational, Rational)>,
    },
    No(ReRejection),
}

impl ReVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ReVerdict::Yes { .. })
    }
}

/// Decide `r ∈ R^e`, dispatching on orientability.
pub fn in_re(r: &Rates, complex: &TwoComplex) -> Result<ReVerdict, ElementaryError> {
    check_rates(r, complex)?;
    if !complex.is_orientable() {
        return in_re_nonorientable(r, complex);
    }
    let phi = rates_to_field(r);
    let psi = match recover(&phi, complex)? {
        Ok(psi) => psi,
        Err(rejection) => return Ok(ReVerdict::No(rejection)),
    };
    let s = r.symmetric_values();
    let sets = edge_intervals(&psi, complex);
    Ok(intersect_shifted(&sets, &s))
}

fn recover(phi: &VectorField, complex: &TwoComplex) -> Result<Result<TwoChain, ReRejection>, ElementaryError> {
    if complex.num_faces() == 0 {
        return Err(ElementaryError::Complex(ComplexError::InvalidComplex(
            "complex has no faces".into(),
        )));
    }
    match complex.recover_psi(phi, 0) {
        Ok(psi) => Ok(Ok(psi)),
        Err(ComplexError::NotHomologous { edge }) => Ok(Err(ReRejection::NotHomologous { edge })),
        Err(e) => Err(e.into()),
    }
}

fn bounds(set: &EdgeSet) -> (&Rational, &Rational) {
    match set {
        EdgeSet::Interval { lo, hi } | EdgeSet::Complement { lo, hi } => (lo, hi),
    }
}

/// One pass over the edges: the admissible shifts for edge `e` are
/// `[−hi − s, −lo + s]`; intersect them all.
fn intersect_shifted(sets: &[EdgeSet], s: &[Rational]) -> ReVerdict {
    let mut lower: Option<(Rational, usize)> = None;
    let mut upper: Option<(Rational, usize)> = None;
    for (e, (set, se)) in sets.iter().zip(s).enumerate() {
        let (lo, hi) = bounds(set);
        let l = -hi.clone() - se;
        let u = -lo.clone() + se;
        if lower.as_ref().is_none_or(|(b, _)| l > *b) {
            lower = Some((l, e));
        }
        if upper.as_ref().is_none_or(|(b, _)| u < *b) {
            upper = Some((u, e));
        }
    }
    let (Some((lower, first)), Some((upper, second))) = (lower, upper) else {
        return ReVerdict::Yes {
            witness: Rational::zero(),
            interval: None,
        };
    };
    if lower <= upper {
        let witness = (&lower + &upper) / int(2);
        ReVerdict::Yes {
            witness,
            interval: Some((lower, upper)),
        }
    } else {
        ReVerdict::No(ReRejection::PolyhedronViolated {
            first,
            second,
            distance: interval_distance(bounds(&sets[first]), bounds(&sets[second])),
            slack_sum: &s[first] + &s[second],
        })
    }
}

/// The pairwise form of the interval test: `s_i + s_j >= d(I_i, I_j)` for
/// every pair, including `i = j`. Returns the first violating pair. Quadratic;
/// kept as an independent check of the one-pass intersection.
pub fn pairwise_violation(sets: &[EdgeSet], s: &[Rational]) -> Option<(usize, usize)> {
    for i in 0..sets.len() {
        for j in i..sets.len() {
            if &s[i] + &s[j] < interval_distance(bounds(&sets[i]), bounds(&sets[j])) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `ψ` and the edge sets of a rate, for diagnostics and cross-checks.
pub fn analyze(r: &Rates, complex: &TwoComplex) -> Result<Option<(TwoChain, Vec<EdgeSet>)>, ElementaryError> {
    check_rates(r, complex)?;
    match recover(&rates_to_field(r), complex)? {
        Ok(psi) => {
            let sets = edge_intervals(&psi, complex);
            Ok(Some((psi, sets)))
        }
        Err(_) => Ok(None),
    }
}

/// Non-orientable test: `ψ` is unique, and each edge independently needs
/// `s(e) >= d(0, J(e))`.
pub fn in_re_nonorientable(r: &Rates, complex: &TwoComplex) -> Result<ReVerdict, ElementaryError> {
    check_rates(r, complex)?;
    let psi = match recover(&rates_to_field(r), complex)? {
        Ok(psi) => psi,
        Err(rejection) => return Ok(ReVerdict::No(rejection)),
    };
    let s = r.symmetric_values();
    for (edge, set) in edge_intervals(&psi, complex).iter().enumerate() {
        let distance = set.distance_to_zero();
        if s[edge] < distance {
            return Ok(ReVerdict::No(ReRejection::EdgeBelowDistance {
                edge,
                distance,
                slack: s[edge].clone(),
            }));
        }
    }
    Ok(ReVerdict::Yes {
        witness: Rational::zero(),
        interval: None,
    })
}

/// Weights of an elementary decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDecomposition {
    /// Weight of the back-and-forth cycle on each stored edge.
    pub edge_weights: Vec<Rational>,
    /// Per stored face: weight of the face cycle in its stored orientation
    /// and in the reversed orientation.
    pub face_weights: Vec<(Rational, Rational)>,
    /// The shift `c` applied to `ψ`.
    pub constant: Rational,
}

impl ElementaryDecomposition {
    /// `Σ ρ(C) r^[C]` as rates on the complex.
    pub fn reconstruct(&self, complex: &TwoComplex) -> Rates {
        let mut forward = self.edge_weights.clone();
        let mut backward = self.edge_weights.clone();
        for (f, (w, wc)) in self.face_weights.iter().enumerate() {
            for se in complex.face(f) {
                let (with, against) = if se.forward {
                    (&mut forward, &mut backward)
                } else {
                    (&mut backward, &mut forward)
                };
                with[se.edge] += w;
                against[se.edge] += wc;
            }
        }
        Rates { forward, backward }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.edge_weights.iter().all(|w| !w.is_negative())
            && self.face_weights.iter().all(|(a, b)| !a.is_negative() && !b.is_negative())
    }

    /// The same decomposition as vertex cycles on the digraph of the rates.
    /// Zero-weight cycles are omitted; parallel edges of tiny complexes are
    /// merged by summing.
    pub fn to_graph_decomposition(
        &self,
        complex: &TwoComplex,
    ) -> Result<(WeightedDigraph, GraphDecomposition), ElementaryError> {
        let g = rates_digraph(complex, &self.reconstruct(complex))?;
        let mut terms = Vec::new();
        for (e, w) in self.edge_weights.iter().enumerate() {
            if !w.is_zero() {
                let (a, b) = complex.edge(e);
                terms.push((GraphCycle::new(vec![a, b])?, w.clone()));
            }
        }
        for (f, (w, wc)) in self.face_weights.iter().enumerate() {
            let mut verts = complex.face_vertices(f);
            if !w.is_zero() {
                terms.push((GraphCycle::new(verts.clone())?, w.clone()));
            }
            if !wc.is_zero() {
                verts.reverse();
                terms.push((GraphCycle::new(verts)?, wc.clone()));
            }
        }
        Ok((g, GraphDecomposition { terms }))
    }

    /// Periodic description on `Z²` for a torus decomposition.
    pub fn on_torus<'a>(&'a self, complex: &'a TwoComplex) -> TorusLift<'a> {
        TorusLift { dec: self, complex }
    }
}

/// The digraph on the vertices of `complex` carrying `r`; rates on parallel
/// edges are summed.
pub fn rates_digraph(complex: &TwoComplex, r: &Rates) -> Result<WeightedDigraph, ElementaryError> {
    check_rates(r, complex)?;
    let mut g = WeightedDigraph::new();
    for label in complex.labels() {
        g.add_vertex(label);
    }
    let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (e, &(a, b)) in complex.edges().iter().enumerate() {
        *acc.entry((a, b)).or_insert_with(Rational::zero) += &r.forward[e];
        *acc.entry((b, a)).or_insert_with(Rational::zero) += &r.backward[e];
    }
    for ((a, b), w) in acc {
        g.set_weight(a, b, w)?;
    }
    Ok(g)
}

/// Decompose `r ∈ R^e` with face weights `[ψ + c]₊`, `[−ψ − c]₊` and edge
/// weights `s − d(0, c + I)` (or `s − d(0, J)`). `c` defaults to the midpoint
/// of the feasible shifts; non-orientable complexes only admit `c = 0`.
pub fn elementary_decompose(
    r: &Rates,
    complex: &TwoComplex,
    c: Option<Rational>,
) -> Result<ElementaryDecomposition, ElementaryError> {
    let verdict = in_re(r, complex)?;
    let ReVerdict::Yes { witness, .. } = verdict else {
        return Err(ElementaryError::NotInRe);
    };
    let constant = c.unwrap_or(witness);
    if !complex.is_orientable() && !constant.is_zero() {
        return Err(ElementaryError::NotInRe);
    }
    let psi = complex.recover_psi(&rates_to_field(r), 0)?;
    let shifted = TwoChain(psi.0.iter().map(|v| v + &constant).collect());
    let s = r.symmetric_values();
    let edge_weights: Vec<Rational> = edge_intervals(&shifted, complex)
        .iter()
        .zip(&s)
        .map(|(set, se)| se - set.distance_to_zero())
        .collect();
    if let Some(edge) = edge_weights.iter().position(Signed::is_negative) {
        return Err(ElementaryError::NegativeEdgeWeight { edge });
    }
    let face_weights = shifted
        .0
        .iter()
        .map(|v| (positive_part(v), positive_part(&-v.clone())))
        .collect();
    Ok(ElementaryDecomposition {
        edge_weights,
        face_weights,
        constant,
    })
}

/// [`PeriodicLift`] view of a torus decomposition: cycles are written in
/// unwrapped `Z²` coordinates and repeat with the torus periods.
pub struct TorusLift<'a> {
    dec: &'a ElementaryDecomposition,
    complex: &'a TwoComplex,
}

impl PeriodicLift for TorusLift<'_> {
    fn periodic_lift(&self) -> Vec<PeriodicRecord> {
        let Some((n1, n2)) = self.complex.torus_dims() else {
            return Vec::new();
        };
        let coords = |v: usize| vec![(v % n1) as i64, (v / n1) as i64];
        let translates = Translates::PeriodLattice(vec![n1 as i64, n2 as i64]);
        let mut out = Vec::new();
        for (e, w) in self.dec.edge_weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let start = coords(e / 2);
            let mut end = start.clone();
            end[e % 2] += 1;
            out.push(PeriodicRecord {
                cycle: PeriodicCycle::Vertices(vec![start, end]),
                weight: w.clone(),
                translates: translates.clone(),
            });
        }
        for (f, (w, wc)) in self.dec.face_weights.iter().enumerate() {
            let [i, j] = [coords(f)[0], coords(f)[1]];
            let mut square = vec![vec![i, j], vec![i + 1, j], vec![i + 1, j + 1], vec![i, j + 1]];
            for weight in [w, wc] {
                if !weight.is_zero() {
                    out.push(PeriodicRecord {
                        cycle: PeriodicCycle::Vertices(square.clone()),
                        weight: weight.clone(),
                        translates: translates.clone(),
                    });
                }
                square.reverse();
            }
        }
        out
    }
}

/// Closed-form decompositions of a one-dimensional rate with constant `φ = c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimensionalFamily {
    pub c: Rational,
    /// Upper end of the parameter range, `min_e s(e)`.
    pub m: Rational,
    pub symmetric: Vec<Rational>,
    /// Homotopically trivial decomposition exists iff `c = 0`.
    pub in_r_star: bool,
}

/// One member of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimensionalDecomposition {
    pub edge_weights: Vec<Rational>,
    /// Weight of the cycle winding once in the `+1` direction.
    pub plus: Rational,
    /// Weight of the cycle winding once in the `−1` direction.
    pub minus: Rational,
}

impl OneDimensionalDecomposition {
    pub fn reconstruct(&self) -> Rates {
        Rates {
            forward: self.edge_weights.iter().map(|w| w + &self.plus).collect(),
            backward: self.edge_weights.iter().map(|w| w + &self.minus).collect(),
        }
    }
}

impl OneDimensionalFamily {
    /// Weights for parameter `a`; rejected unless `0 <= a <= m`.
    pub fn instance(&self, a: &Rational) -> Result<OneDimensionalDecomposition, ElementaryError> {
        if a.is_negative() || *a > self.m {
            return Err(ElementaryError::ParameterOutOfRange);
        }
        Ok(self.instance_unchecked(a))
    }

    /// Weights for any `a`, possibly negative; used to show why `a` is bounded.
    pub fn instance_unchecked(&self, a: &Rational) -> OneDimensionalDecomposition {
        OneDimensionalDecomposition {
            edge_weights: self.symmetric.iter().map(|s| s - a).collect(),
            plus: positive_part(&self.c) + a,
            minus: positive_part(&-self.c.clone()) + a,
        }
    }
}

/// The family of decompositions on a ring. Requires `φ^r` constant.
pub fn decompose_1d(r: &Rates, ring: &TwoComplex) -> Result<OneDimensionalFamily, ElementaryError> {
    if !matches!(ring.shape(), Shape::Ring { .. }) {
        return Err(ElementaryError::NotRing);
    }
    check_rates(r, ring)?;
    let phi = rates_to_field(r);
    let c = phi.0[0].clone();
    if phi.0.iter().any(|v| *v != c) {
        return Err(ElementaryError::NotBalanced);
    }
    let symmetric = r.symmetric_values();
    let m = symmetric.iter().min().cloned().expect("ring has edges");
    Ok(OneDimensionalFamily {
        in_r_star: c.is_zero(),
        c,
        m,
        symmetric,
    })
}

/// Spanning-tree bound on the spread of `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterBound {
    /// Weight of a minimum spanning tree of the dual graph with weights `|φ|`.
    pub m_bound: Rational,
    /// Every `s(e) >= m_bound / 2`; then `r ∈ R^e`.
    pub sufficient: bool,
}

/// One-sided test: a `true` verdict implies `r ∈ R^e`.
pub fn sufficient_diameter_bound(r: &Rates, complex: &TwoComplex) -> Result<DiameterBound, ElementaryError> {
    check_rates(r, complex)?;
    let dual = complex.dual_edges().ok_or(ElementaryError::NotOrientable)?;
    let phi = rates_to_field(r);
    if let Err(rejection) = recover(&phi, complex)? {
        let ReRejection::NotHomologous { edge } = rejection else {
            unreachable!()
        };
        return Err(ComplexError::NotHomologous { edge }.into());
    }
    let mut graph: UnGraph<(), Rational> = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..complex.num_faces()).map(|_| graph.add_node(())).collect();
    for (plus, minus, e) in dual {
        graph.add_edge(nodes[plus], nodes[minus], phi.0[e].abs());
    }
    let m_bound: Rational = min_spanning_tree(&graph)
        .filter_map(|el| match el {
            Element::Edge { weight, .. } => Some(weight),
            Element::Node { .. } => None,
        })
        .sum();
    let half = &m_bound / int(2);
    let sufficient = r.symmetric_values().iter().all(|s| *s >= half);
    Ok(DiameterBound { m_bound, sufficient })
}

/// Independent check: exact LP feasibility of nonnegative weights on all
/// elementary cycles reproducing `r`.
pub fn brute_force_re_oracle(r: &Rates, complex: &TwoComplex) -> Result<bool, ElementaryError> {
    check_rates(r, complex)?;
    let ne = complex.num_edges();
    let nf = complex.num_faces();
    let variables = ne + 2 * nf;
    if variables > ORACLE_VARIABLE_BUDGET {
        return Err(ElementaryError::TooLarge {
            variables,
            budget: ORACLE_VARIABLE_BUDGET,
        });
    }
    // Rows 0..ne: forward rates; rows ne..2ne: backward rates.
    // Columns: edge cycles, then each face, then each reversed face.
    let mut a_eq = vec![vec![Rational::zero(); variables]; 2 * ne];
    for e in 0..ne {
        a_eq[e][e] = int(1);
        a_eq[ne + e][e] = int(1);
    }
    for f in 0..nf {
        for se in complex.face(f) {
            let (with, against) = if se.forward { (se.edge, ne + se.edge) } else { (ne + se.edge, se.edge) };
            a_eq[with][ne + f] += int(1);
            a_eq[against][ne + nf + f] += int(1);
        }
    }
    let b_eq: Vec<Rational> = r.forward.iter().chain(&r.backward).cloned().collect();
    let verdict = exact_lp::lp_feasible(&[], &[], &a_eq, &b_eq, variables).map_err(|_| {
        ElementaryError::DimensionMismatch {
            expected: ne,
            found: r.len(),
        }
    })?;
    Ok(matches!(verdict, Feasibility::Feasible(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{field_to_rates, symmetric_part};
    use crate::exact_lp::rat;
    use proptest::prelude::*;

    fn band(t: &TwoComplex, lo: usize, hi: usize) -> TwoChain {
        let (n1, _) = t.torus_dims().unwrap();
        TwoChain((0..t.num_faces()).map(|f| if (lo..hi).contains(&(f % n1)) { int(1) } else { int(0) }).collect())
    }

    fn with_symmetric(base: &Rates, s: Rational) -> Rates {
        base.add(&Rates::symmetric(vec![s; base.len()]).unwrap())
    }

    #[test]
    fn interval_examples() {
        let t = TwoComplex::torus(4, 4).unwrap();
        let zero = edge_intervals(&TwoChain::zeros(16), &t);
        assert!(zero.iter().all(|s| *s == EdgeSet::Interval { lo: int(0), hi: int(0) }));

        let g = t.face_at(1, 1);
        let sets = edge_intervals(&TwoChain::indicator(16, g), &t);
        let unit = EdgeSet::Interval { lo: int(0), hi: int(1) };
        assert_eq!(sets.iter().filter(|s| **s == unit).count(), 4);

        let sets = edge_intervals(&band(&t, 1, 3), &t);
        assert!(sets.contains(&EdgeSet::Interval { lo: int(1), hi: int(1) }));
        assert_eq!(sets.iter().filter(|s| **s == unit).count(), 8);
    }

    #[test]
    fn set_distances() {
        assert_eq!(EdgeSet::from_values(&int(1), &int(2), false).distance_to_zero(), int(1));
        assert_eq!(EdgeSet::from_values(&int(-1), &int(2), false).distance_to_zero(), int(0));
        assert_eq!(EdgeSet::from_values(&int(1), &int(2), true).distance_to_zero(), int(0));
        assert_eq!(EdgeSet::from_values(&int(-1), &int(2), true).distance_to_zero(), int(1));
        assert_eq!(EdgeSet::from_values(&rat(-5, 2), &int(2), true).distance_to_zero(), int(2));
        assert_eq!(interval_distance((&int(0), &int(0)), (&int(1), &int(1))), int(1));
        assert_eq!(interval_distance((&int(0), &int(3)), (&int(1), &int(1))), int(0));
    }

    #[test]
    fn fig2_verdicts() {
        let t = TwoComplex::torus(10, 10).unwrap();
        let phi = t.boundary2(&band(&t, 3, 7));
        let minimal = field_to_rates(&phi);
        let v = in_re(&minimal, &t).unwrap();
        let ReVerdict::No(ReRejection::PolyhedronViolated { distance, slack_sum, .. }) = v else {
            panic!("expected rejection, got {v:?}");
        };
        assert!(slack_sum < distance);

        let r = with_symmetric(&minimal, rat(1, 2));
        let v = in_re(&r, &t).unwrap();
        assert_eq!(
            v,
            ReVerdict::Yes {
                witness: rat(-1, 2),
                interval: Some((rat(-1, 2), rat(-1, 2)))
            }
        );
        let d = elementary_decompose(&r, &t, None).unwrap();
        assert!(d.is_nonnegative());
        assert_eq!(d.reconstruct(&t), r);
        let (g, gd) = d.to_graph_decomposition(&t).unwrap();
        assert!(gd.verify(&g));
        assert_eq!(g, rates_digraph(&t, &r).unwrap());
        assert_eq!(d.on_torus(&t).periodic_lift().len(), gd.terms.len());
    }

    #[test]
    fn simple_verdicts() {
        let t = TwoComplex::torus(3, 3).unwrap();
        let sym = Rates::symmetric(vec![int(1); 18]).unwrap();
        assert_eq!(in_re(&sym, &t).unwrap(), ReVerdict::Yes { witness: int(0), interval: Some((int(-1), int(1))) });
        let d = elementary_decompose(&sym, &t, Some(int(0))).unwrap();
        assert_eq!(d.edge_weights, vec![int(1); 18]);
        assert!(d.face_weights.iter().all(|(a, b)| a.is_zero() && b.is_zero()));

        let face = field_to_rates(&t.boundary2(&TwoChain::indicator(9, 4)));
        let d = elementary_decompose(&face, &t, None).unwrap();
        assert_eq!(d.face_weights[4], (int(1), int(0)));
        assert_eq!(d.face_weights.iter().filter(|(a, b)| !a.is_zero() || !b.is_zero()).count(), 1);
        assert!(d.edge_weights.iter().all(Zero::is_zero));

        let h = field_to_rates(&t.harmonic_basis(0).unwrap());
        assert!(matches!(in_re(&h, &t).unwrap(), ReVerdict::No(ReRejection::NotHomologous { .. })));
        assert_eq!(elementary_decompose(&h, &t, None), Err(ElementaryError::NotInRe));
    }

    #[test]
    fn oracle_examples() {
        let t = TwoComplex::torus(4, 4).unwrap();
        assert!(brute_force_re_oracle(&Rates::symmetric(vec![int(1); 32]).unwrap(), &t).unwrap());
        let fig2 = field_to_rates(&t.boundary2(&band(&t, 1, 3)));
        assert!(!brute_force_re_oracle(&fig2, &t).unwrap());
        assert!(!in_re(&fig2, &t).unwrap().is_yes());
        let big = TwoComplex::torus(12, 12).unwrap();
        assert!(matches!(
            brute_force_re_oracle(&Rates::symmetric(vec![int(0); 288]).unwrap(), &big),
            Err(ElementaryError::TooLarge { .. })
        ));
    }

    #[test]
    fn nonorientable_examples() {
        let k = TwoComplex::klein_bottle(3, 3).unwrap();
        let same = (0..k.num_edges())
            .find(|&e| k.occurrences(e)[0].forward == k.occurrences(e)[1].forward)
            .unwrap();
        let (f1, f2) = (k.occurrences(same)[0].face, k.occurrences(same)[1].face);

        let mut psi = TwoChain::zeros(9);
        psi.0[f1] = int(-1);
        psi.0[f2] = int(2);
        let base = field_to_rates(&k.boundary2(&psi));
        let sets = edge_intervals(&psi, &k);
        assert_eq!(sets[same], EdgeSet::Complement { lo: int(-1), hi: int(2) });
        assert_eq!(sets[same].distance_to_zero(), int(1));

        let v = in_re(&base, &k).unwrap();
        assert!(matches!(v, ReVerdict::No(ReRejection::EdgeBelowDistance { .. })));
        assert!(!brute_force_re_oracle(&base, &k).unwrap());

        let lifted = with_symmetric(&base, int(1));
        assert!(in_re(&lifted, &k).unwrap().is_yes());
        assert!(brute_force_re_oracle(&lifted, &k).unwrap());
        let d = elementary_decompose(&lifted, &k, None).unwrap();
        assert!(d.is_nonnegative());
        assert_eq!(d.reconstruct(&k), lifted);

        psi.0[f1] = int(1);
        let agree = field_to_rates(&k.boundary2(&psi));
        assert_eq!(edge_intervals(&psi, &k)[same].distance_to_zero(), int(0));
        assert_eq!(in_re(&agree, &k).unwrap().is_yes(), brute_force_re_oracle(&agree, &k).unwrap());
    }

    #[test]
    fn one_dimensional_family() {
        let ring = TwoComplex::ring(3).unwrap();
        let r = Rates::new(vec![int(2); 3], vec![int(1); 3]).unwrap();
        let fam = decompose_1d(&r, &ring).unwrap();
        assert_eq!((fam.c.clone(), fam.m.clone(), fam.in_r_star), (int(1), int(1), false));
        let a0 = fam.instance(&int(0)).unwrap();
        assert_eq!((a0.edge_weights.clone(), a0.plus.clone(), a0.minus.clone()), (vec![int(1); 3], int(1), int(0)));
        assert_eq!(a0.reconstruct(), r);
        let a1 = fam.instance(&int(1)).unwrap();
        assert_eq!((a1.edge_weights.clone(), a1.plus.clone(), a1.minus.clone()), (vec![int(0); 3], int(2), int(1)));
        assert_eq!(a1.reconstruct(), r);
        assert_eq!(fam.instance(&int(2)), Err(ElementaryError::ParameterOutOfRange));
        assert!(fam.instance_unchecked(&int(2)).edge_weights[0].is_negative());

        let sym = Rates::symmetric(vec![int(3); 4]).unwrap();
        let fam = decompose_1d(&sym, &TwoComplex::ring(4).unwrap()).unwrap();
        assert!(fam.in_r_star);
        assert_eq!(fam.instance(&int(0)).unwrap().edge_weights, vec![int(3); 4]);

        let mut bad = Rates::symmetric(vec![int(2); 4]).unwrap();
        bad.forward[0] = int(1);
        assert_eq!(decompose_1d(&bad, &TwoComplex::ring(4).unwrap()), Err(ElementaryError::NotBalanced));
        let t = TwoComplex::torus(3, 3).unwrap();
        assert_eq!(decompose_1d(&Rates::symmetric(vec![int(0); 18]).unwrap(), &t), Err(ElementaryError::NotRing));
    }

    #[test]
    fn diameter_bound_examples() {
        let t = TwoComplex::torus(4, 4).unwrap();
        let b = sufficient_diameter_bound(&Rates::symmetric(vec![int(0); 32]).unwrap(), &t).unwrap();
        assert_eq!(b, DiameterBound { m_bound: int(0), sufficient: true });

        let face = field_to_rates(&t.boundary2(&TwoChain::indicator(16, 5)));
        let b = sufficient_diameter_bound(&face, &t).unwrap();
        assert_eq!(b.m_bound, int(1));
        assert!(!b.sufficient);
        let b = sufficient_diameter_bound(&with_symmetric(&face, rat(1, 2)), &t).unwrap();
        assert!(b.sufficient);

        let h = field_to_rates(&t.harmonic_basis(1).unwrap());
        assert!(sufficient_diameter_bound(&h, &t).is_err());
        let k = TwoComplex::klein_bottle(3, 3).unwrap();
        assert_eq!(
            sufficient_diameter_bound(&Rates::symmetric(vec![int(0); 18]).unwrap(), &k),
            Err(ElementaryError::NotOrientable)
        );
    }

    fn homologous_rates(n: usize) -> impl Strategy<Value = Rates> {
        (
            proptest::collection::vec(-3i64..4, n * n),
            proptest::collection::vec(0i64..5, 2 * n * n),
            1i64..4,
        )
            .prop_map(move |(psi, s, den)| {
                let t = TwoComplex::torus(n, n).unwrap();
                let phi = t.boundary2(&TwoChain(psi.into_iter().map(int).collect()));
                field_to_rates(&phi).add(&Rates::symmetric(s.into_iter().map(|v| rat(v, den)).collect()).unwrap())
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn verdict_matches_oracle(r in homologous_rates(3)) {
            let t = TwoComplex::torus(3, 3).unwrap();
            let verdict = in_re(&r, &t).unwrap();
            prop_assert_eq!(verdict.is_yes(), brute_force_re_oracle(&r, &t).unwrap());
            let (psi, sets) = analyze(&r, &t).unwrap().unwrap();
            prop_assert_eq!(verdict.is_yes(), pairwise_violation(&sets, &r.symmetric_values()).is_none());

            let shifted = TwoChain(psi.0.iter().map(|v| v + int(7)).collect());
            let shifted_sets = edge_intervals(&shifted, &t);
            prop_assert_eq!(
                pairwise_violation(&shifted_sets, &r.symmetric_values()).is_none(),
                verdict.is_yes()
            );

            let bound = sufficient_diameter_bound(&r, &t).unwrap();
            if bound.sufficient {
                prop_assert!(verdict.is_yes());
            }
            if verdict.is_yes() {
                let d = elementary_decompose(&r, &t, None).unwrap();
                prop_assert!(d.is_nonnegative());
                prop_assert_eq!(d.reconstruct(&t), r.clone());
                let (g, gd) = d.to_graph_decomposition(&t).unwrap();
                prop_assert!(gd.verify(&g));
                let bumped = r.add(&symmetric_part(&r));
                prop_assert!(in_re(&bumped, &t).unwrap().is_yes());
            }
        }

        #[test]
        fn klein_verdict_matches_oracle(
            psi in proptest::collection::vec(-2i64..3, 9),
            s in proptest::collection::vec(0i64..3, 18),
        ) {
            let k = TwoComplex::klein_bottle(3, 3).unwrap();
            let phi = k.boundary2(&TwoChain(psi.into_iter().map(int).collect()));
            let r = field_to_rates(&phi).add(&Rates::symmetric(s.into_iter().map(int).collect()).unwrap());
            let verdict = in_re(&r, &k).unwrap();
            prop_assert_eq!(verdict.is_yes(), brute_force_re_oracle(&r, &k).unwrap());
            if verdict.is_yes() {
                let d = elementary_decompose(&r, &k, None).unwrap();
                prop_assert_eq!(d.reconstruct(&k), r);
            }
        }
    }
}
