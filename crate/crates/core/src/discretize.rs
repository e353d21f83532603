//! Discrete fields from smooth stream functions on the unit torus, and the
//! periodic random environment built from them.
//!
//! A potential `ψ` is sampled at face centers and snapped to rationals with a
//! fixed denominator, so every identity downstream is exact. The horizontal
//! edge at `x` carries `ψ(above) − ψ(below)`, the vertical edge
//! `ψ(left) − ψ(right)`; this is the flux of `∇^⊥ψ` across the dual segment.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{ComplexError, Rates, TwoChain, TwoComplex, VectorField};
use crate::elementary::{in_re, ElementaryError, ReVerdict};
use crate::exact_lp::{format_rational, int, positive_part, rat, snap_f64, Rational};

pub const DEFAULT_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiscretizeError {
    #[error("invalid environment: {0}")]
    InvalidSpec(String),
    #[error("unknown potential `{0}`")]
    UnknownPotential(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
}

/// Named potentials, parseable from the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Constant(f64),
    /// 1 on `lo <= u₁ < hi`, 0 elsewhere.
    Band { lo: f64, hi: f64 },
    /// `sin(2πu₁) sin(2πu₂)`.
    SineProduct,
    /// Random trigonometric polynomial with modes up to `degree`.
    Trig { seed: u64, degree: u32 },
}

impl FromStr for PotentialSpec {
    type Err = DiscretizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || DiscretizeError::UnknownPotential(s.to_string());
        let num = |t: &str| t.parse::<f64>().map_err(|_| unknown());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["zero"] => Ok(PotentialSpec::Constant(0.0)),
            ["constant", c] => Ok(PotentialSpec::Constant(num(c)?)),
            ["band", lo, hi] => Ok(PotentialSpec::Band { lo: num(lo)?, hi: num(hi)? }),
            ["sine"] => Ok(PotentialSpec::SineProduct),
            ["trig", seed] => Ok(PotentialSpec::Trig {
                seed: seed.parse().map_err(|_| unknown())?,
                degree: 2,
            }),
            ["trig", seed, degree] => Ok(PotentialSpec::Trig {
                seed: seed.parse().map_err(|_| unknown())?,
                degree: degree.parse().map_err(|_| unknown())?,
            }),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Constant(c) => write!(f, "constant:{c}"),
            PotentialSpec::Band { lo, hi } => write!(f, "band:{lo}:{hi}"),
            PotentialSpec::SineProduct => write!(f, "sine"),
            PotentialSpec::Trig { seed, degree } => write!(f, "trig:{seed}:{degree}"),
        }
    }
}

impl PotentialSpec {
    pub fn sampler(&self) -> PotentialSampler {
        match *self {
            PotentialSpec::Constant(c) => PotentialSampler::new(move |_, _| c),
            PotentialSpec::Band { lo, hi } => PotentialSampler::band(lo, hi),
            PotentialSpec::SineProduct => PotentialSampler::sine_product(),
            PotentialSpec::Trig { seed, degree } => PotentialSampler::random_trig(seed, degree),
        }
    }
}

/// `ψ: [0,1)² → ℝ`, extended periodically, with the snapping denominator.
#[derive(Clone)]
pub struct PotentialSampler {
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    denominator: i64,
}

impl fmt::Debug for PotentialSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSampler").field("denominator", &self.denominator).finish()
    }
}

impl PotentialSampler {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            denominator: DEFAULT_DENOMINATOR,
        }
    }

    pub fn with_denominator(mut self, denominator: i64) -> Self {
        assert!(denominator > 0, "denominator must be positive");
        self.denominator = denominator;
        self
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn band(lo: f64, hi: f64) -> Self {
        Self::new(move |u, _| if (lo..hi).contains(&u) { 1.0 } else { 0.0 })
    }

    pub fn sine_product() -> Self {
        Self::new(|u, v| (TAU * u).sin() * (TAU * v).sin())
    }

    pub fn random_trig(seed: u64, degree: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = degree as i64;
        let mut modes = Vec::new();
        for k1 in -d..=d {
            for k2 in 0..=d {
                if k2 == 0 && k1 <= 0 {
                    continue;
                }
                let amp: f64 = rng.gen_range(-1.0..1.0);
                let phase: f64 = rng.gen_range(0.0..TAU);
                modes.push((k1 as f64, k2 as f64, amp, phase));
            }
        }
        Self::new(move |u, v| {
            modes
                .iter()
                .map(|(k1, k2, a, p)| a * (TAU * (k1 * u + k2 * v) + p).cos())
                .sum()
        })
    }

    /// Snapped value at `(u, v)`, reduced mod 1.
    pub fn sample(&self, u: f64, v: f64) -> Rational {
        snap_f64((self.eval)(u.rem_euclid(1.0), v.rem_euclid(1.0)), self.denominator)
    }
}

/// `ψ_N` on the faces of the `n1 × n2` torus, optionally shifted by `shift`
/// (in unit coordinates).
fn face_samples(p: &PotentialSampler, t: &TwoComplex, shift: (f64, f64)) -> TwoChain {
    let (n1, n2) = t.torus_dims().expect("torus complex");
    let mut psi = TwoChain::zeros(t.num_faces());
    for j in 0..n2 {
        for i in 0..n1 {
            let u = (i as f64 + 0.5) / n1 as f64 + shift.0;
            let v = (j as f64 + 0.5) / n2 as f64 + shift.1;
            psi.0[t.face_at(i, j)] = p.sample(u, v);
        }
    }
    psi
}

/// Differences of face samples across each edge.
fn edge_differences(psi: &TwoChain, t: &TwoComplex) -> VectorField {
    let (n1, n2) = t.torus_dims().expect("torus complex");
    let mut phi = VectorField::zeros(t.num_edges());
    for j in 0..n2 {
        for i in 0..n1 {
            let above = &psi.0[t.face_at(i, j)];
            let below = &psi.0[t.face_at(i, j + n2 - 1)];
            phi.0[t.horizontal_edge(i, j)] = above - below;
            let left = &psi.0[t.face_at(i + n1 - 1, j)];
            let right = &psi.0[t.face_at(i, j)];
            phi.0[t.vertical_edge(i, j)] = left - right;
        }
    }
    phi
}

#[derive(Debug, Clone)]
pub struct Discretized {
    pub complex: TwoComplex,
    pub field: VectorField,
    /// Face-center samples; `boundary2(psi) = field`.
    pub psi: TwoChain,
}

/// `φ_N` on the `n × n` torus.
pub fn discretize_potential(p: &PotentialSampler, n: usize) -> Result<Discretized, DiscretizeError> {
    let complex = TwoComplex::torus(n, n)?;
    let psi = face_samples(p, &complex, (0.0, 0.0));
    let field = edge_differences(&psi, &complex);
    Ok(Discretized { complex, field, psi })
}

/// Grid oscillation `max ψ_N − min ψ_N`; a lower bound for the continuum value.
pub fn oscillation_bound(p: &PotentialSampler, n: usize) -> Result<Rational, DiscretizeError> {
    Ok(oscillation(&discretize_potential(p, n)?.psi))
}

fn oscillation(psi: &TwoChain) -> Rational {
    match (psi.0.iter().max(), psi.0.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => Rational::zero(),
    }
}

/// `s_min >= M/2`: then every rate `r^{φ_N} + s` with `s >= s_min` is in `R^e`.
pub fn check_re_sufficient(p: &PotentialSampler, n: usize, s_min: &Rational) -> Result<bool, DiscretizeError> {
    let m = oscillation_bound(p, n)?;
    Ok(s_min * int(2) >= m)
}

#[derive(Debug, Clone)]
pub struct EnvironmentSpec {
    pub potential: PotentialSampler,
    /// Label written into the output header.
    pub potential_name: String,
    pub a: Rational,
    pub b: Rational,
    pub seed: u64,
    pub n1: usize,
    pub n2: usize,
}

impl EnvironmentSpec {
    fn validate(&self) -> Result<(), DiscretizeError> {
        if !self.a.is_positive() {
            return Err(DiscretizeError::InvalidSpec("noise lower bound a must be positive".into()));
        }
        if self.a > self.b {
            return Err(DiscretizeError::InvalidSpec("noise bounds need a <= b".into()));
        }
        if self.n1 < 2 || self.n2 < 2 {
            return Err(DiscretizeError::InvalidSpec("torus sides must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Grid oscillation of the shifted samples.
    pub oscillation: Rational,
    /// `a >= M/2`.
    pub a_dominates: bool,
    /// Exact verdict on the unnormalized weights.
    pub in_re: bool,
    pub witness: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Environment {
    pub n1: usize,
    pub n2: usize,
    pub seed: u64,
    pub potential_name: String,
    /// Shift in units of the snapping grid.
    pub shift: (i64, i64),
    pub field: VectorField,
    /// `r^φ + U` before normalization.
    pub weights: Rates,
    /// Per vertex `i + n1·j`: right, up, left, down.
    pub probabilities: Vec<[Rational; 4]>,
    pub certificate: Certificate,
}

/// One realization of the periodic environment.
pub fn random_environment(spec: &EnvironmentSpec) -> Result<Environment, DiscretizeError> {
    spec.validate()?;
    let t = TwoComplex::torus(spec.n1, spec.n2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.potential.denominator();
    let shift = (rng.gen_range(0..d), rng.gen_range(0..d));
    let psi = face_samples(&spec.potential, &t, (shift.0 as f64 / d as f64, shift.1 as f64 / d as f64));
    let field = edge_differences(&psi, &t);

    let width = &spec.b - &spec.a;
    let noise: Vec<Rational> = (0..t.num_edges())
        .map(|_| &spec.a + &width * rat(rng.gen_range(0..=d), d))
        .collect();
    let weights = Rates::new(
        field.0.iter().zip(&noise).map(|(v, u)| positive_part(v) + u).collect(),
        field.0.iter().zip(&noise).map(|(v, u)| positive_part(&-v.clone()) + u).collect(),
    )?;

    let (n1, n2) = (spec.n1, spec.n2);
    let mut probabilities = Vec::with_capacity(t.num_vertices());
    for j in 0..n2 {
        for i in 0..n1 {
            let out = [
                weights.forward[t.horizontal_edge(i, j)].clone(),
                weights.forward[t.vertical_edge(i, j)].clone(),
                weights.backward[t.horizontal_edge(i + n1 - 1, j)].clone(),
                weights.backward[t.vertical_edge(i, j + n2 - 1)].clone(),
            ];
            let z: Rational = out.iter().sum();
            probabilities.push(out.map(|w| w / &z));
        }
    }

    let m = oscillation(&psi);
    let verdict = in_re(&weights, &t)?;
    let certificate = Certificate {
        a_dominates: &spec.a * int(2) >= m,
        oscillation: m,
        in_re: verdict.is_yes(),
        witness: match verdict {
            ReVerdict::Yes { witness, .. } => Some(witness),
            ReVerdict::No(_) => None,
        },
    };
    Ok(Environment {
        n1,
        n2,
        seed: spec.seed,
        potential_name: spec.potential_name.clone(),
        shift,
        field,
        weights,
        probabilities,
        certificate,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Environment {
    /// Line format: `x1 x2 : p_right p_up p_left p_down`, then `#` lines
    /// holding the certificate.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "# environment {}x{} seed {} potential {} shift {} {}\n",
            self.n1, self.n2, self.seed, self.potential_name, self.shift.0, self.shift.1
        );
        for (v, row) in self.probabilities.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&format!("{} {} : {}\n", v % self.n1, v / self.n1, cells.join(" ")));
        }
        let c = &self.certificate;
        out.push_str(&format!("# certificate oscillation {}\n", format_rational(&c.oscillation)));
        out.push_str(&format!("# certificate a_dominates {}\n", yes_no(c.a_dominates)));
        out.push_str(&format!("# certificate in_re {}\n", yes_no(c.in_re)));
        if let Some(w) = &c.witness {
            out.push_str(&format!("# certificate shift_c {}\n", format_rational(w)));
        }
        out
    }

    pub fn rows_sum_to_one(&self) -> bool {
        self.probabilities.iter().all(|row| row.iter().sum::<Rational>() == int(1))
    }
}
