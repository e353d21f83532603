//! Balanced jump measures on `Z^d` and their cyclic decompositions.
//!
//! A finitely supported measure is cyclic exactly when its mean is zero. The
//! decomposition repeatedly picks a Carathéodory simplex around the origin
//! from the current support, turns its barycentric coordinates into integer
//! multiplicities, and subtracts the largest admissible multiple of the
//! resulting purely cyclic measure.
//!
//! For one-dimensional measures with divergent moments on both sides there is
//! no finite algorithm; [`HeavyTailStream`] produces the decomposition one
//! two-vector class at a time.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_lp::{self, affinely_independent, int, lcm_of_denominators, Exact, LpError, Rational};

/// Default ceiling on `Σ n_i` for the exhaustive irreducibility search.
pub const IRREDUCIBILITY_BOUND: u64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("measure is not balanced: mean is ({})", format_vector(.mean))]
    NotBalanced { mean: Vec<Rational> },
    #[error("points are not in general position")]
    NotGeneralPosition,
    #[error("origin is not in the relative interior of the points' hull")]
    ZeroNotInterior,
    #[error("total multiplicity {total} exceeds the exhaustive bound {bound}")]
    TooLarge { total: u64, bound: u64 },
    #[error("measure has no mass away from the origin")]
    TrivialMeasure,
    #[error("invalid cycle class: {0}")]
    InvalidClass(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("oracle reports no positive mass on the {side} side within [-{limit}, {limit}]")]
    OracleExhausted { side: Side, limit: i64 },
    #[error(transparent)]
    Lp(#[from] LpError),
}

fn format_vector(v: &[Rational]) -> String {
    v.iter().map(|q| Exact(q).to_string()).collect::<Vec<_>>().join(", ")
}

/// Finite-support nonnegative measure on `Z^d`. Zero atoms are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMeasure {
    dim: usize,
    atoms: BTreeMap<Vec<i64>, Rational>,
}

impl LatticeMeasure {
    /// Empty measure in dimension `dim`.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            atoms: BTreeMap::new(),
        }
    }

    /// Unit mass at the origin.
    pub fn delta_zero(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        m.atoms.insert(vec![0; dim], Rational::one());
        m
    }

    /// Build from `(point, mass)` pairs. Zero masses are dropped; negative
    /// masses, mixed dimensions and repeated points are rejected.
    pub fn from_atoms(
        dim: usize,
        atoms: impl IntoIterator<Item = (Vec<i64>, Rational)>,
    ) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::InvalidMeasure("dimension must be positive".into()));
        }
        let mut out = BTreeMap::new();
        for (point, mass) in atoms {
            if point.len() != dim {
                return Err(LatticeError::InvalidMeasure(format!(
                    "point of dimension {} in a dimension-{dim} measure",
                    point.len()
                )));
            }
            if mass.is_negative() {
                return Err(LatticeError::InvalidMeasure(format!("negative mass {}", Exact(&mass))));
            }
            if out.contains_key(&point) {
                return Err(LatticeError::InvalidMeasure(format!("duplicate point {point:?}")));
            }
            if !mass.is_zero() {
                out.insert(point, mass);
            }
        }
        Ok(Self { dim, atoms: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.atoms
    }

    pub fn mass_at(&self, x: &[i64]) -> Rational {
        self.atoms.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.values().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    pub fn is_sub_probability(&self) -> bool {
        self.total_mass() <= Rational::one()
    }

    /// Support points other than the origin.
    pub fn nontrivial_support(&self) -> Vec<Vec<i64>> {
        self.atoms
            .keys()
            .filter(|x| x.iter().any(|&c| c != 0))
            .cloned()
            .collect()
    }

    /// `self + scale · other`; entries that cancel are removed. Panics on a
    /// dimension mismatch.
    pub fn add_scaled(&mut self, scale: &Rational, other: &LatticeMeasure) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (x, m) in &other.atoms {
            let entry = self.atoms.entry(x.clone()).or_insert_with(Rational::zero);
            *entry += scale * m;
            if entry.is_zero() {
                self.atoms.remove(x);
            }
        }
    }

    fn min_mass(&self) -> Option<&Rational> {
        self.atoms.values().min()
    }
}

/// Multiset of displacement vectors `{(w^i, n_i)}` with `Σ n_i w^i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeCycleClass {
    entries: BTreeMap<Vec<i64>, u64>,
}

impl LatticeCycleClass {
    /// Validate and build a class. Vectors must share a dimension, be
    /// nonzero, have positive multiplicity and sum to zero.
    pub fn new(entries: impl IntoIterator<Item = (Vec<i64>, u64)>) -> Result<Self, LatticeError> {
        let mut map: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        for (w, n) in entries {
            if n == 0 {
                return Err(LatticeError::InvalidClass("zero multiplicity".into()));
            }
            if w.iter().all(|&c| c == 0) {
                return Err(LatticeError::InvalidClass("zero displacement".into()));
            }
            *map.entry(w).or_insert(0) += n;
        }
        let Some(dim) = map.keys().next().map(Vec::len) else {
            return Err(LatticeError::InvalidClass("empty class".into()));
        };
        if map.keys().any(|w| w.len() != dim) {
            return Err(LatticeError::InvalidClass("mixed dimensions".into()));
        }
        let class = Self { entries: map };
        if class.displacement_sum().iter().any(|s| !s.is_zero()) {
            return Err(LatticeError::InvalidClass("displacements do not sum to zero".into()));
        }
        Ok(class)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<i64>, u64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.keys().next().map_or(0, Vec::len)
    }

    /// `|C| = Σ n_i`.
    pub fn length(&self) -> u64 {
        self.entries.values().sum()
    }

    /// `Σ n_i w^i`, exact in big integers.
    pub fn displacement_sum(&self) -> Vec<BigInt> {
        let mut sum = vec![BigInt::zero(); self.dim()];
        for (w, &n) in &self.entries {
            for (s, &c) in sum.iter_mut().zip(w) {
                *s += BigInt::from(c) * BigInt::from(n);
            }
        }
        sum
    }

    /// A closed lattice path realizing the class, starting at the origin.
    pub fn representative_path(&self) -> Vec<Vec<i64>> {
        let mut pos = vec![0i64; self.dim()];
        let mut path = vec![pos.clone()];
        for (w, &n) in &self.entries {
            for _ in 0..n {
                for (p, c) in pos.iter_mut().zip(w) {
                    *p += c;
                }
                path.push(pos.clone());
            }
        }
        path.pop();
        path
    }
}

impl fmt::Display for LatticeCycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(w, n)| format!("{w:?}x{n}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `p = Σ weight · p^[C] + trivial_mass · δ₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDecomposition {
    pub dim: usize,
    pub terms: Vec<(LatticeCycleClass, Rational)>,
    pub trivial_mass: Rational,
}

impl LatticeDecomposition {
    /// Recompute the measure from the terms.
    pub fn reconstruct(&self) -> LatticeMeasure {
        let mut out = LatticeMeasure::zero(self.dim);
        for (class, weight) in &self.terms {
            out.add_scaled(weight, &empirical_measure(class));
        }
        if !self.trivial_mass.is_zero() {
            out.add_scaled(&self.trivial_mass, &LatticeMeasure::delta_zero(self.dim));
        }
        out
    }

    pub fn total_weight(&self) -> Rational {
        self.terms.iter().map(|(_, w)| w).sum::<Rational>() + &self.trivial_mass
    }
}

/// The purely cyclic measure `p^C`: mass `n_i / Σ n_j` at each `w^i`.
pub fn empirical_measure(class: &LatticeCycleClass) -> LatticeMeasure {
    let total = class.length() as i64;
    LatticeMeasure {
        dim: class.dim(),
        atoms: class
            .entries
            .iter()
            .map(|(w, &n)| (w.clone(), Rational::new(BigInt::from(n), BigInt::from(total))))
            .collect(),
    }
}

/// Exact first moment `Σ p(x) x`.
pub fn mean(p: &LatticeMeasure) -> Vec<Rational> {
    let mut m = vec![Rational::zero(); p.dim];
    for (x, mass) in &p.atoms {
        for (acc, &c) in m.iter_mut().zip(x) {
            if c != 0 {
                *acc += mass * int(c);
            }
        }
    }
    m
}

/// For finitely supported measures, balanced is the same as mean zero.
pub fn is_balanced(p: &LatticeMeasure) -> bool {
    mean(p).iter().all(Zero::is_zero)
}

/// The unique irreducible class supported on affinely independent `points`
/// whose hull contains the origin in its relative interior. Multiplicities are
/// `n_i = b μ_i` with `μ` the barycentric coordinates of the origin and `b` the
/// lcm of their denominators.
pub fn irreducible_class(points: &[Vec<i64>]) -> Result<LatticeCycleClass, LatticeError> {
    if points.is_empty() {
        return Err(LatticeError::InvalidClass("empty point set".into()));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(LatticeError::InvalidClass("mixed dimensions".into()));
    }
    let refs: Vec<&Vec<i64>> = points.iter().collect();
    if !affinely_independent(&refs) {
        return Err(LatticeError::NotGeneralPosition);
    }
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|axis| points.iter().map(|p| int(p[axis])).collect())
        .collect();
    rows.push(vec![Rational::one(); points.len()]);
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(Rational::one());
    let mu = match exact_lp::solve_exact_linear(&rows, &rhs) {
        Ok(mu) => mu,
        Err(LpError::NoSolution) => return Err(LatticeError::ZeroNotInterior),
        Err(e) => return Err(e.into()),
    };
    if mu.iter().any(|m| !m.is_positive()) {
        return Err(LatticeError::ZeroNotInterior);
    }
    let b = lcm_of_denominators(&mu);
    let entries = points.iter().zip(&mu).map(|(p, m)| {
        let n = (m * Rational::from_integer(b.clone())).to_integer();
        (p.clone(), n.to_u64().expect("multiplicity fits in u64"))
    });
    LatticeCycleClass::new(entries)
}

/// Exhaustive irreducibility with the default bound.
pub fn is_irreducible(class: &LatticeCycleClass) -> Result<bool, LatticeError> {
    is_irreducible_with_bound(class, IRREDUCIBILITY_BOUND)
}

/// True iff no proper nonempty sub-multiset of the displacements sums to zero.
///
/// Meet in the middle: the entries are split into two halves of similar
/// sub-multiset count, all partial sums of one half are indexed, and the other
/// half is scanned for negated matches. Each partial sum remembers whether it
/// took nothing or everything from its half, which is all that is needed to
/// exclude the empty and full selections.
pub fn is_irreducible_with_bound(class: &LatticeCycleClass, bound: u64) -> Result<bool, LatticeError> {
    let total = class.length();
    if total > bound {
        return Err(LatticeError::TooLarge { total, bound });
    }
    let entries: Vec<(&Vec<i64>, u64)> = class.entries.iter().map(|(w, &n)| (w, n)).collect();

    let mut split = 0;
    let mut left_count: u128 = 1;
    let full: u128 = entries.iter().map(|(_, n)| u128::from(*n) + 1).product();
    while split < entries.len() && left_count * left_count < full {
        left_count *= u128::from(entries[split].1) + 1;
        split += 1;
    }
    let (left, right) = entries.split_at(split);

    let mut index: BTreeMap<Vec<i64>, Vec<(bool, bool)>> = BTreeMap::new();
    for (sum, empty, all) in partial_sums(left, class.dim()) {
        let kinds = index.entry(sum).or_default();
        if !kinds.contains(&(empty, all)) {
            kinds.push((empty, all));
        }
    }
    for (sum, empty_r, all_r) in partial_sums(right, class.dim()) {
        let target: Vec<i64> = sum.iter().map(|c| -c).collect();
        if let Some(kinds) = index.get(&target) {
            if kinds.iter().any(|&(empty_l, all_l)| !(empty_l && empty_r) && !(all_l && all_r)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every `(Σ k_i w^i, all k_i = 0, all k_i = n_i)` for `0 <= k_i <= n_i`.
fn partial_sums(entries: &[(&Vec<i64>, u64)], dim: usize) -> Vec<(Vec<i64>, bool, bool)> {
    let mut acc = vec![(vec![0i64; dim], true, true)];
    for &(w, n) in entries {
        let mut next = Vec::with_capacity(acc.len() * (n as usize + 1));
        for (base, empty, all) in &acc {
            let mut cur = base.clone();
            for k in 0..=n {
                next.push((cur.clone(), *empty && k == 0, *all && k == n));
                for (c, d) in cur.iter_mut().zip(w) {
                    *c += d;
                }
            }
        }
        acc = next;
    }
    acc
}

/// One Carathéodory step: returns the class, its weight `m` and the residual
/// `p − m · p^C`, which is balanced, nonnegative and loses at least one atom.
pub fn caratheodory_step(
    p: &LatticeMeasure,
) -> Result<(LatticeCycleClass, Rational, LatticeMeasure), LatticeError> {
    if !is_balanced(p) {
        return Err(LatticeError::NotBalanced { mean: mean(p) });
    }
    let support = p.nontrivial_support();
    if support.is_empty() {
        return Err(LatticeError::TrivialMeasure);
    }
    let vertex = exact_lp::barycentric_vertex(&support, &vec![0; p.dim])?;
    let points: Vec<Vec<i64>> = vertex.support_indices.iter().map(|&i| support[i].clone()).collect();
    let class = irreducible_class(&points)?;
    let q = empirical_measure(&class);
    let weight = q
        .atoms
        .iter()
        .map(|(w, qm)| p.mass_at(w) / qm)
        .min()
        .expect("class is nonempty");
    let mut residual = p.clone();
    residual.add_scaled(&-weight.clone(), &q);
    debug_assert!(residual.min_mass().is_none_or(|m| m.is_positive()));
    Ok((class, weight, residual))
}

/// Full decomposition of a balanced finite-support measure. Performs at most
/// `|S(p) \ {0}|` steps.
pub fn decompose_lattice(p: &LatticeMeasure) -> Result<LatticeDecomposition, LatticeError> {
    if !is_balanced(p) {
        return Err(LatticeError::NotBalanced { mean: mean(p) });
    }
    let origin = vec![0; p.dim];
    let mut terms = Vec::new();
    let mut current = p.clone();
    while !current.nontrivial_support().is_empty() {
        let (class, weight, residual) = caratheodory_step(&current)?;
        terms.push((class, weight));
        current = residual;
    }
    Ok(LatticeDecomposition {
        dim: p.dim,
        terms,
        trivial_mass: current.mass_at(&origin),
    })
}

/// Which half-line an oracle search ran out on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Positive => "positive",
            Side::Negative => "negative",
        })
    }
}

type MassFn = dyn Fn(i64) -> Rational + Send + Sync;

/// Query access to a one-dimensional measure with `Σ x p(x) = Σ x p(−x) = ∞`.
///
/// The divergence cannot be checked from finitely many queries; the
/// constructor is where the caller asserts it. `search_limit` caps how far the
/// stream looks for the next positive atom.
pub struct HeavyTailOracle1D {
    mass_at: Box<MassFn>,
    search_limit: i64,
}

impl HeavyTailOracle1D {
    pub fn assume_divergent_moments(
        mass_at: impl Fn(i64) -> Rational + Send + Sync + 'static,
        search_limit: i64,
    ) -> Self {
        Self {
            mass_at: Box::new(mass_at),
            search_limit,
        }
    }

    /// `weight / x²` away from the origin, zero at the origin.
    pub fn inverse_square(weight: Rational, search_limit: i64) -> Self {
        Self::assume_divergent_moments(
            move |x| {
                if x == 0 {
                    Rational::zero()
                } else {
                    &weight / int(x * x)
                }
            },
            search_limit,
        )
    }

    pub fn mass_at(&self, x: i64) -> Rational {
        (self.mass_at)(x)
    }

    pub fn search_limit(&self) -> i64 {
        self.search_limit
    }
}

/// Which of the two weight formulas a heavy-tail step used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeavyTailCase {
    /// `p(x₊)x₊ + p(x₋)x₋ >= 0`: the negative atom is exhausted.
    A,
    /// Otherwise: the positive atom is exhausted.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyTailStep {
    pub class: LatticeCycleClass,
    pub weight: Rational,
    pub case: HeavyTailCase,
    pub x_plus: i64,
    pub x_minus: i64,
}

/// Single-consumer stream of the one-dimensional heavy-tail decomposition.
pub struct HeavyTailStream {
    oracle: HeavyTailOracle1D,
    consumed: BTreeMap<i64, Rational>,
    cursor_plus: i64,
    cursor_minus: i64,
}

impl HeavyTailStream {
    pub fn new(oracle: HeavyTailOracle1D) -> Self {
        Self {
            oracle,
            consumed: BTreeMap::new(),
            cursor_plus: 1,
            cursor_minus: -1,
        }
    }

    /// Residual mass `p^l(x)` at the current step.
    pub fn residual(&self, x: i64) -> Rational {
        if x == 0 {
            return Rational::zero();
        }
        self.oracle.mass_at(x) - self.partial_sum(x)
    }

    /// Mass at `x` covered by the classes emitted so far.
    pub fn partial_sum(&self, x: i64) -> Rational {
        self.consumed.get(&x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn origin_mass(&self) -> Rational {
        self.oracle.mass_at(0)
    }

    pub fn consumed(&self) -> &BTreeMap<i64, Rational> {
        &self.consumed
    }

    fn next_positive(&mut self, side: Side) -> Result<i64, LatticeError> {
        let limit = self.oracle.search_limit;
        loop {
            let x = match side {
                Side::Positive => self.cursor_plus,
                Side::Negative => self.cursor_minus,
            };
            if x.abs() > limit {
                return Err(LatticeError::OracleExhausted { side, limit });
            }
            if self.residual(x).is_positive() {
                return Ok(x);
            }
            match side {
                Side::Positive => self.cursor_plus += 1,
                Side::Negative => self.cursor_minus -= 1,
            }
        }
    }

    /// Emit the next class and subtract it from the residual.
    pub fn step(&mut self) -> Result<HeavyTailStep, LatticeError> {
        let x_plus = self.next_positive(Side::Positive)?;
        let x_minus = self.next_positive(Side::Negative)?;
        let p_plus = self.residual(x_plus);
        let p_minus = self.residual(x_minus);

        let g = x_plus.gcd(&x_minus);
        let n_plus = (-x_minus / g) as u64;
        let n_minus = (x_plus / g) as u64;
        let total = int((n_plus + n_minus) as i64);

        let balance = &p_plus * int(x_plus) + &p_minus * int(x_minus);
        let (case, weight) = if !balance.is_negative() {
            (HeavyTailCase::A, &p_minus * &total / int(n_minus as i64))
        } else {
            (HeavyTailCase::B, &p_plus * &total / int(n_plus as i64))
        };

        let class = LatticeCycleClass::new([(vec![x_plus], n_plus), (vec![x_minus], n_minus)])?;
        for (x, n) in [(x_plus, n_plus), (x_minus, n_minus)] {
            let removed = &weight * int(n as i64) / &total;
            *self.consumed.entry(x).or_insert_with(Rational::zero) += removed;
        }
        Ok(HeavyTailStep {
            class,
            weight,
            case,
            x_plus,
            x_minus,
        })
    }
}

/// Run `steps` steps of the heavy-tail stream and return them with the stream.
pub fn decompose_1d_heavy_tail(
    oracle: HeavyTailOracle1D,
    steps: usize,
) -> Result<(Vec<HeavyTailStep>, HeavyTailStream), LatticeError> {
    let mut stream = HeavyTailStream::new(oracle);
    let out = (0..steps).map(|_| stream.step()).collect::<Result<Vec<_>, _>>()?;
    Ok((out, stream))
}

/// One cycle class of a translation-invariant decomposition on `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicCycle {
    Displacements(LatticeCycleClass),
    /// Closed vertex path in `Z^d` coordinates, unwrapped across the torus seam.
    Vertices(Vec<Vec<i64>>),
}

/// Which translates of a cycle carry the weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Translates {
    AllOfZd,
    /// Translates by the lattice `p_1 Z × … × p_d Z`.
    PeriodLattice(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicRecord {
    pub cycle: PeriodicCycle,
    pub weight: Rational,
    pub translates: Translates,
}

impl fmt::Display for PeriodicRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cycle {
            PeriodicCycle::Displacements(c) => write!(f, "class {c}")?,
            PeriodicCycle::Vertices(v) => write!(f, "cycle {v:?}")?,
        }
        write!(f, " weight {} ", Exact(&self.weight))?;
        match &self.translates {
            Translates::AllOfZd => write!(f, "on all translates in Z^d"),
            Translates::PeriodLattice(p) => write!(f, "on all translates by the period lattice {p:?}"),
        }
    }
}

/// Describe a decomposition as a periodic decomposition on the infinite lattice.
pub trait PeriodicLift {
    fn periodic_lift(&self) -> Vec<PeriodicRecord>;
}

impl PeriodicLift for LatticeDecomposition {
    fn periodic_lift(&self) -> Vec<PeriodicRecord> {
        self.terms
            .iter()
            .map(|(class, weight)| PeriodicRecord {
                cycle: PeriodicCycle::Displacements(class.clone()),
                weight: weight.clone(),
                translates: Translates::AllOfZd,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lp::rat;
    use proptest::prelude::*;

    fn measure(dim: usize, atoms: &[(&[i64], Rational)]) -> LatticeMeasure {
        LatticeMeasure::from_atoms(dim, atoms.iter().map(|(x, m)| (x.to_vec(), m.clone()))).unwrap()
    }

    fn class(entries: &[(&[i64], u64)]) -> LatticeCycleClass {
        LatticeCycleClass::new(entries.iter().map(|(w, n)| (w.to_vec(), *n))).unwrap()
    }

    #[test]
    fn empirical_examples() {
        let q = empirical_measure(&class(&[(&[1, 0], 1), (&[-1, 0], 1)]));
        assert_eq!(q.mass_at(&[1, 0]), rat(1, 2));
        let q = empirical_measure(&class(&[(&[2, -1], 1), (&[-1, 2], 1), (&[-1, -1], 1)]));
        assert_eq!(q.mass_at(&[-1, -1]), rat(1, 3));
        let q = empirical_measure(&class(&[(&[1, 0], 2), (&[-2, 0], 1)]));
        assert_eq!(q.mass_at(&[1, 0]), rat(2, 3));
        assert_eq!(q.mass_at(&[-2, 0]), rat(1, 3));
        assert!(is_balanced(&q));
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean(&LatticeMeasure::delta_zero(2)), vec![int(0), int(0)]);
        let p = measure(2, &[(&[1, 1], rat(3, 4)), (&[0, -1], rat(1, 4))]);
        assert_eq!(mean(&p), vec![rat(3, 4), rat(1, 2)]);
        let fig1 = measure(2, &[(&[2, -1], rat(1, 2)), (&[-1, 2], rat(1, 2))]);
        assert!(!is_balanced(&fig1));
        assert!(is_balanced(&LatticeMeasure::delta_zero(3)));
    }

    #[test]
    fn class_validation() {
        assert!(LatticeCycleClass::new([(vec![1], 1)]).is_err());
        assert!(LatticeCycleClass::new([(vec![0], 1)]).is_err());
        assert!(LatticeCycleClass::new(Vec::<(Vec<i64>, u64)>::new()).is_err());
        assert!(LatticeCycleClass::new([(vec![1], 0), (vec![-1], 1)]).is_err());
        let c = class(&[(&[2, -1], 1), (&[-1, 2], 1), (&[-1, -1], 1)]);
        assert_eq!(c.representative_path().len(), 3);
    }

    #[test]
    fn measure_validation() {
        assert!(LatticeMeasure::from_atoms(1, [(vec![1], int(-1))]).is_err());
        assert!(LatticeMeasure::from_atoms(1, [(vec![1], int(1)), (vec![1], int(1))]).is_err());
        assert!(LatticeMeasure::from_atoms(2, [(vec![1], int(1))]).is_err());
        let p = LatticeMeasure::from_atoms(1, [(vec![1], int(0))]).unwrap();
        assert!(p.atoms().is_empty());
    }

    #[test]
    fn irreducible_class_examples() {
        let c = irreducible_class(&[vec![1, 0], vec![-1, 0]]).unwrap();
        assert_eq!(c, class(&[(&[1, 0], 1), (&[-1, 0], 1)]));
        let c = irreducible_class(&[vec![2, -1], vec![-1, 2], vec![-1, -1]]).unwrap();
        assert_eq!(c.length(), 3);
        let c = irreducible_class(&[vec![1, 0], vec![-2, 0]]).unwrap();
        assert_eq!(c.entries()[&vec![1, 0]], 2);
        assert_eq!(c.entries()[&vec![-2, 0]], 1);
        assert_eq!(
            irreducible_class(&[vec![1, 0], vec![2, 0], vec![-1, 0]]),
            Err(LatticeError::NotGeneralPosition)
        );
        assert_eq!(irreducible_class(&[vec![1, 0], vec![2, 0]]), Err(LatticeError::ZeroNotInterior));
        assert_eq!(irreducible_class(&[vec![1, 0], vec![0, 1]]), Err(LatticeError::ZeroNotInterior));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&class(&[(&[1, 0], 1), (&[-1, 0], 1)])).unwrap());
        assert!(!is_irreducible(&class(&[(&[1, 0], 2), (&[-1, 0], 2)])).unwrap());
        assert!(is_irreducible(&class(&[(&[-5, -5], 1), (&[1, 1], 1), (&[2, 2], 2)])).unwrap());
        let big = class(&[(&[1], 20), (&[-4], 5)]);
        assert!(matches!(is_irreducible(&big), Err(LatticeError::TooLarge { .. })));
        assert!(!is_irreducible_with_bound(&big, 30).unwrap());
    }

    #[test]
    fn caratheodory_examples() {
        let p = measure(2, &[(&[1, 0], rat(1, 2)), (&[-1, 0], rat(1, 2))]);
        let (c, w, r) = caratheodory_step(&p).unwrap();
        assert_eq!(c, class(&[(&[1, 0], 1), (&[-1, 0], 1)]));
        assert_eq!(w, int(1));
        assert!(r.atoms().is_empty());

        let p = measure(1, &[(&[1], rat(1, 2)), (&[-1], rat(1, 4)), (&[-2], rat(1, 8)), (&[0], rat(1, 8))]);
        let (_, w, r) = caratheodory_step(&p).unwrap();
        assert!(w.is_positive());
        assert!(r.nontrivial_support().len() <= 2);
        assert!(is_balanced(&r));
        assert_eq!(r.mass_at(&[0]), rat(1, 8));

        assert!(matches!(
            caratheodory_step(&LatticeMeasure::delta_zero(1)),
            Err(LatticeError::TrivialMeasure)
        ));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_lattice(&LatticeMeasure::delta_zero(2)).unwrap();
        assert!(d.terms.is_empty());
        assert_eq!(d.trivial_mass, int(1));

        let p = measure(
            2,
            &[(&[1, 0], rat(1, 4)), (&[-1, 0], rat(1, 4)), (&[0, 1], rat(1, 4)), (&[0, -1], rat(1, 4))],
        );
        let d = decompose_lattice(&p).unwrap();
        assert_eq!(d.reconstruct(), p);
        assert!(d.terms.len() <= 4);

        let fig1 = measure(2, &[(&[2, -1], rat(1, 2)), (&[-1, 2], rat(1, 2))]);
        assert!(matches!(decompose_lattice(&fig1), Err(LatticeError::NotBalanced { .. })));
    }

    #[test]
    fn heavy_tail_inverse_square_first_step() {
        let c = rat(3, 10);
        let (steps, stream) = decompose_1d_heavy_tail(HeavyTailOracle1D::inverse_square(c.clone(), 100), 1).unwrap();
        assert_eq!(steps[0].class, class(&[(&[1], 1), (&[-1], 1)]));
        assert_eq!(steps[0].weight, &c * int(2));
        assert_eq!(steps[0].case, HeavyTailCase::A);
        assert!(stream.residual(1).is_zero());
        assert!(stream.residual(-1).is_zero());
    }

    #[test]
    fn heavy_tail_boundary_case() {
        let oracle = HeavyTailOracle1D::assume_divergent_moments(
            |x| match x {
                2 => rat(1, 4),
                -1 => rat(1, 2),
                _ => int(0),
            },
            10,
        );
        let mut stream = HeavyTailStream::new(oracle);
        let s = stream.step().unwrap();
        assert_eq!(s.class, class(&[(&[2], 1), (&[-1], 2)]));
        assert_eq!(s.case, HeavyTailCase::A);
        assert_eq!(s.weight, rat(3, 4));
        assert!(stream.residual(2).is_zero());
        assert!(stream.residual(-1).is_zero());
        assert!(matches!(stream.step(), Err(LatticeError::OracleExhausted { .. })));
    }

    #[test]
    fn heavy_tail_case_b() {
        let oracle = HeavyTailOracle1D::assume_divergent_moments(
            |x| match x {
                1 => rat(1, 10),
                -3 => rat(1, 2),
                -5 => rat(1, 5),
                2 => rat(1, 5),
                _ => int(0),
            },
            10,
        );
        let mut stream = HeavyTailStream::new(oracle);
        let s = stream.step().unwrap();
        assert_eq!(s.case, HeavyTailCase::B);
        assert!(stream.residual(1).is_zero());
        assert!(stream.residual(-3).is_positive());
        let s = stream.step().unwrap();
        assert_eq!((s.x_plus, s.x_minus), (2, -3));
    }

    #[test]
    fn periodic_lift_records() {
        let d = LatticeDecomposition {
            dim: 1,
            terms: vec![(class(&[(&[1], 1), (&[-1], 1)]), int(1))],
            trivial_mass: int(0),
        };
        let recs = d.periodic_lift();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].translates, Translates::AllOfZd);
        assert!(recs[0].to_string().contains("all translates"));
        let empty = LatticeDecomposition { dim: 1, terms: vec![], trivial_mass: int(1) };
        assert!(empty.periodic_lift().is_empty());
    }

    fn balanced_measure(dim: usize) -> impl Strategy<Value = LatticeMeasure> {
        proptest::collection::btree_map(proptest::collection::vec(-4i64..5, dim), 1i64..20, 1..12).prop_map(
            move |raw| {
                let mut atoms: BTreeMap<Vec<i64>, Rational> = raw.into_iter().map(|(x, m)| (x, int(m))).collect();
                let total = mean(&LatticeMeasure { dim, atoms: atoms.clone() });
                for (axis, m) in total.iter().enumerate() {
                    let mut e = vec![0; dim];
                    e[axis] = if m.is_positive() { -1 } else { 1 };
                    *atoms.entry(e).or_insert_with(Rational::zero) += m.abs();
                }
                atoms.retain(|_, m| !m.is_zero());
                let mass: Rational = atoms.values().sum();
                for m in atoms.values_mut() {
                    *m /= &mass;
                }
                LatticeMeasure { dim, atoms }
            },
        )
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs(p in (1usize..4).prop_flat_map(balanced_measure)) {
            prop_assert!(is_balanced(&p));
            let d = decompose_lattice(&p).unwrap();
            prop_assert_eq!(d.reconstruct(), p.clone());
            prop_assert!(d.terms.len() <= p.nontrivial_support().len());
            for (c, w) in &d.terms {
                prop_assert!(w.is_positive());
                prop_assert!(c.displacement_sum().iter().all(Zero::is_zero));
                let pts: Vec<Vec<i64>> = c.entries().keys().cloned().collect();
                prop_assert_eq!(&irreducible_class(&pts).unwrap(), c);
                if c.length() <= IRREDUCIBILITY_BOUND {
                    prop_assert!(is_irreducible(c).unwrap());
                }
            }
        }

        #[test]
        fn irreducibility_matches_brute_force(
            raw in proptest::collection::btree_map(-3i64..4, 1u64..4, 1..5)
        ) {
            let s: i64 = raw.iter().map(|(w, n)| w * *n as i64).sum();
            let mut entries: Vec<(Vec<i64>, u64)> = raw.into_iter().filter(|(w, _)| *w != 0).map(|(w, n)| (vec![w], n)).collect();
            if s != 0 {
                entries.push((vec![-s], 1));
            }
            prop_assume!(entries.len() >= 2);
            let Ok(c) = LatticeCycleClass::new(entries) else { return Ok(()); };
            let flat: Vec<i64> = c.entries().iter().flat_map(|(w, &n)| std::iter::repeat_n(w[0], n as usize)).collect();
            let brute = (1u32..(1 << flat.len()) - 1).all(|mask| {
                flat.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| v).sum::<i64>() != 0
            });
            prop_assert_eq!(is_irreducible_with_bound(&c, 64).unwrap(), brute);
        }
    }
}
