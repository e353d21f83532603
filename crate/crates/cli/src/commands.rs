use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::ValueEnum;
use cycdec_core::complex::{TwoComplex, VectorField};
use cycdec_core::discretize::{discretize_potential, random_environment, EnvironmentSpec, PotentialSpec};
use cycdec_core::elementary::{
    decompose_1d, elementary_decompose, in_re, rates_digraph, sufficient_diameter_bound, ElementaryError,
    ReRejection, ReVerdict,
};
use cycdec_core::exact_lp::{format_rational, int, parse_rational, Rational};
use cycdec_core::finite_graph::{
    birkhoff_cycle_decomposition, birkhoff_decompose, decompose_graph, is_balanced_graph, is_bistochastic,
    GraphCycle, GraphDecomposition, GraphError, WeightedDigraph,
};
use cycdec_core::formats::{
    graph_decomposition_from_labels, parse_decomposition, parse_edge_data, parse_graph, parse_measure,
    parse_surface, parse_torus_dims, peek_edge_header, write_field, write_graph_decomposition,
    write_lattice_decomposition, DecompositionFile, EdgeData,
};
use cycdec_core::lattice::{
    decompose_1d_heavy_tail, decompose_lattice, is_balanced, mean, HeavyTailOracle1D, LatticeDecomposition,
    LatticeError, LatticeMeasure, PeriodicLift,
};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{CheckKind, ComplexArgs, DecomposeArgs, DiscretizeArgs, Mode, RandomEnvArgs};

fn q(x: &Rational) -> String {
    format_rational(x)
}

fn qs<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Vec<String> {
    xs.into_iter().map(format_rational).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn in_file<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> anyhow::Result<T> {
    r.map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn rational_arg(name: &str, text: &str) -> anyhow::Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("--{name}: {e}"))
}

fn resolve_complex(args: &ComplexArgs, declared: Option<cycdec_core::formats::DeclaredShape>) -> anyhow::Result<TwoComplex> {
    if let Some(path) = &args.surface {
        return in_file(path, parse_surface(&read(path)?));
    }
    if let Some(dims) = &args.torus {
        let (n1, n2) = parse_torus_dims(dims).ok_or_else(|| anyhow!("--torus: expected N or N1xN2, found `{dims}`"))?;
        return Ok(TwoComplex::torus(n1, n2)?);
    }
    if let Some(n) = args.ring {
        return Ok(TwoComplex::ring(n)?);
    }
    match declared {
        Some(shape) => Ok(shape.build()?),
        None => bail!("no complex given: use --torus, --ring or --surface, or name it in the file header"),
    }
}

fn load_edge_data(path: &Path, args: &ComplexArgs) -> anyhow::Result<(TwoComplex, EdgeData)> {
    let text = read(path)?;
    let (_, declared) = in_file(path, peek_edge_header(&text))?;
    let complex = resolve_complex(args, declared)?;
    let data = in_file(path, parse_edge_data(&text, &complex))?;
    Ok((complex, data))
}

fn edge_name(c: &TwoComplex, e: usize) -> String {
    match c.torus_dims() {
        Some((n1, _)) => {
            let v = e / 2;
            format!("{},{},{}", v % n1, v / n1, if e.is_multiple_of(2) { 'h' } else { 'v' })
        }
        None => e.to_string(),
    }
}

fn field_json(c: &TwoComplex, phi: &VectorField) -> Value {
    Value::Object(
        phi.0
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(e, v)| (edge_name(c, e), Value::String(q(v))))
            .collect(),
    )
}

pub fn check(kind: CheckKind, input: &Path, complex: &ComplexArgs) -> anyhow::Result<Report> {
    match kind {
        CheckKind::Graph => {
            let (_, g) = in_file(input, parse_graph(&read(input)?, false))?;
            let report = is_balanced_graph(&g);
            let violators: Vec<&str> = report.violators.iter().map(|&v| g.label(v)).collect();
            let mut text = format!("balanced {}\n", yes_no(report.is_balanced()));
            if !report.is_balanced() {
                text.push_str(&format!("violators {}\n", violators.join(" ")));
            }
            let json = json!({"balanced": report.is_balanced(), "violators": violators});
            Ok(Report::new(text, json, report.is_balanced()))
        }
        CheckKind::Lattice => {
            let p = in_file(input, parse_measure(&read(input)?))?;
            let balanced = is_balanced(&p);
            let m = mean(&p);
            let text = format!(
                "balanced {}\nmean {}\nprobability {}\n",
                yes_no(balanced),
                qs(&m).join(" "),
                yes_no(p.is_probability())
            );
            let json = json!({"balanced": balanced, "mean": qs(&m), "probability": p.is_probability()});
            Ok(Report::new(text, json, balanced))
        }
        CheckKind::Bistochastic => {
            let (_, g) = in_file(input, parse_graph(&read(input)?, true))?;
            let ok = is_bistochastic(&g);
            Ok(Report::new(format!("bistochastic {}\n", yes_no(ok)), json!({"bistochastic": ok}), ok))
        }
        CheckKind::Homologous => {
            let (c, data) = load_edge_data(input, complex)?;
            let phi = data.into_field();
            let ok = c.in_d_lambda2(&phi)?;
            let divergence_free = c.boundary1(&phi).is_zero();
            let mut text = format!("in_d_lambda2 {}\ndivergence_free {}\n", yes_no(ok), yes_no(divergence_free));
            let mut json = json!({"in_d_lambda2": ok, "divergence_free": divergence_free});
            if c.torus_dims().is_some() {
                let (h1, h2) = c.hodge_decompose(&phi)?.harmonic_coefficients;
                text.push_str(&format!("harmonic_coefficients {} {}\n", q(&h1), q(&h2)));
                json["harmonic_coefficients"] = json!([q(&h1), q(&h2)]);
            }
            Ok(Report::new(text, json, ok))
        }
        CheckKind::Elementary => elementary(input, complex),
    }
}

pub fn elementary(input: &Path, complex: &ComplexArgs) -> anyhow::Result<Report> {
    let (c, data) = load_edge_data(input, complex)?;
    let r = data.into_rates();
    let verdict = in_re(&r, &c)?;
    let mut text = String::new();
    let mut json = json!({"verdict": verdict.is_yes()});
    match &verdict {
        ReVerdict::Yes { witness, interval } => {
            text.push_str(&format!("verdict yes\nwitness_c {}\n", q(witness)));
            json["witness_c"] = json!(q(witness));
            if let Some((lo, hi)) = interval {
                text.push_str(&format!("feasible_shifts {} {}\n", q(lo), q(hi)));
                json["feasible_shifts"] = json!([q(lo), q(hi)]);
            }
        }
        ReVerdict::No(ReRejection::NotHomologous { edge }) => {
            text.push_str(&format!("verdict no\nreason not_homologous\nviolating_edges {}\n", edge_name(&c, *edge)));
            json["reason"] = json!("not_homologous");
            json["violating_edges"] = json!([edge_name(&c, *edge)]);
        }
        ReVerdict::No(ReRejection::PolyhedronViolated {
            first,
            second,
            distance,
            slack_sum,
        }) => {
            let edges = [edge_name(&c, *first), edge_name(&c, *second)];
            text.push_str(&format!(
                "verdict no\nreason interval_distance\nviolating_edges {} {}\ndistance {}\nslack_sum {}\n",
                edges[0],
                edges[1],
                q(distance),
                q(slack_sum)
            ));
            json["reason"] = json!("interval_distance");
            json["violating_edges"] = json!(edges);
            json["distance"] = json!(q(distance));
            json["slack_sum"] = json!(q(slack_sum));
        }
        ReVerdict::No(ReRejection::EdgeBelowDistance { edge, distance, slack }) => {
            text.push_str(&format!(
                "verdict no\nreason edge_distance\nviolating_edges {}\ndistance {}\nslack {}\n",
                edge_name(&c, *edge),
                q(distance),
                q(slack)
            ));
            json["reason"] = json!("edge_distance");
            json["violating_edges"] = json!([edge_name(&c, *edge)]);
            json["distance"] = json!(q(distance));
            json["slack"] = json!(q(slack));
        }
    }
    let necessary = !matches!(verdict, ReVerdict::No(ReRejection::NotHomologous { .. }));
    text.push_str(&format!("r_star_necessary {}\n", if necessary { "holds" } else { "fails" }));
    json["r_star_necessary"] = json!(necessary);
    if c.is_orientable() && c.num_faces() > 0 {
        if let Ok(bound) = sufficient_diameter_bound(&r, &c) {
            text.push_str(&format!("M_bound {}\nsufficient {}\n", q(&bound.m_bound), yes_no(bound.sufficient)));
            json["M_bound"] = json!(q(&bound.m_bound));
            json["sufficient"] = json!(bound.sufficient);
        }
    }
    Ok(Report::new(text, json, verdict.is_yes()))
}

pub fn hodge(input: &Path, complex: &ComplexArgs) -> anyhow::Result<Report> {
    let (c, data) = load_edge_data(input, complex)?;
    let phi = data.into_field();
    let parts = c.hodge_decompose(&phi)?;
    let exact = parts.recompose() == phi;
    let (h1, h2) = &parts.harmonic_coefficients;
    let mut text = format!("# harmonic_coefficients {} {}\n# recompose exact {}\n", q(h1), q(h2), yes_no(exact));
    for (name, part) in [
        ("gradient", &parts.gradient),
        ("homologous", &parts.homologous),
        ("harmonic", &parts.harmonic),
    ] {
        text.push_str(&format!("# part {name}\n"));
        text.push_str(&write_field(&c, part));
    }
    let json = json!({
        "harmonic_coefficients": [q(h1), q(h2)],
        "recompose_exact": exact,
        "gradient": field_json(&c, &parts.gradient),
        "homologous": field_json(&c, &parts.homologous),
        "harmonic": field_json(&c, &parts.harmonic),
    });
    Ok(Report::new(text, json, exact))
}

pub fn discretize(args: &DiscretizeArgs) -> anyhow::Result<Report> {
    let spec = PotentialSpec::from_str(&args.potential)?;
    let mut sampler = spec.sampler();
    if let Some(d) = args.denominator {
        if d <= 0 {
            bail!("--denominator must be positive");
        }
        sampler = sampler.with_denominator(d);
    }
    let d = discretize_potential(&sampler, args.n)?;
    let max = d.psi.0.iter().max().cloned().unwrap_or_else(Rational::zero);
    let min = d.psi.0.iter().min().cloned().unwrap_or_else(Rational::zero);
    let oscillation = max - min;
    let mut text = format!("# potential {spec}\n# oscillation {}\n", q(&oscillation));
    let mut json = json!({"potential": spec.to_string(), "oscillation": q(&oscillation)});
    if let Some(s) = &args.s_min {
        let s = rational_arg("s-min", s)?;
        let ok = &s * int(2) >= oscillation;
        text.push_str(&format!("# re_sufficient {}\n", yes_no(ok)));
        json["re_sufficient"] = json!(ok);
    }
    if args.psi {
        for f in 0..d.psi.len() {
            text.push_str(&format!("# psi {} {} {}\n", f % args.n, f / args.n, q(&d.psi.0[f])));
        }
        json["psi"] = json!(qs(&d.psi.0));
    }
    text.push_str(&write_field(&d.complex, &d.field));
    json["field"] = field_json(&d.complex, &d.field);
    Ok(Report::new(text, json, true))
}

pub fn random_env(args: &RandomEnvArgs) -> anyhow::Result<Report> {
    let potential = PotentialSpec::from_str(&args.potential)?;
    let mut sampler = potential.sampler();
    if let Some(d) = args.denominator {
        if d <= 0 {
            bail!("--denominator must be positive");
        }
        sampler = sampler.with_denominator(d);
    }
    let (n1, n2) = parse_torus_dims(&args.torus).ok_or_else(|| anyhow!("--torus: expected N or N1xN2"))?;
    let spec = EnvironmentSpec {
        potential: sampler,
        potential_name: potential.to_string(),
        a: rational_arg("a", &args.a)?,
        b: rational_arg("b", &args.b)?,
        seed: args.seed,
        n1,
        n2,
    };
    let env = random_environment(&spec)?;
    let cert = &env.certificate;
    let rows: Vec<Value> = env
        .probabilities
        .iter()
        .enumerate()
        .map(|(v, row)| json!({"x": [v % n1, v / n1], "p": qs(row)}))
        .collect();
    let json = json!({
        "torus": [n1, n2],
        "seed": env.seed,
        "potential": env.potential_name,
        "shift": [env.shift.0, env.shift.1],
        "probabilities": rows,
        "certificate": {
            "oscillation": q(&cert.oscillation),
            "a_dominates": cert.a_dominates,
            "in_re": cert.in_re,
            "shift_c": cert.witness.as_ref().map(q),
        },
    });
    Ok(Report::new(env.to_file_string(), json, true))
}

fn graph_decomposition_ok(text: &str, g: &WeightedDigraph) -> anyhow::Result<bool> {
    let DecompositionFile::Graph(terms) = parse_decomposition(text)? else {
        bail!("expected a graph decomposition");
    };
    let dec = graph_decomposition_from_labels(&terms, g)?;
    Ok(dec.terms.iter().all(|(_, w)| w.is_positive()) && dec.verify(g))
}

fn lattice_decomposition(text: &str) -> anyhow::Result<LatticeDecomposition> {
    match parse_decomposition(text)? {
        DecompositionFile::Lattice(dec) => Ok(dec),
        DecompositionFile::Graph(_) => bail!("expected a lattice decomposition"),
    }
}

fn lattice_decomposition_ok(text: &str, p: &LatticeMeasure) -> anyhow::Result<bool> {
    let dec = lattice_decomposition(text)?;
    Ok(dec.dim == p.dim()
        && dec.terms.iter().all(|(_, w)| w.is_positive())
        && !dec.trivial_mass.is_negative()
        && dec.reconstruct() == *p)
}

fn decomposition_json(text: &str) -> Value {
    let notes: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .collect();
    let body = match parse_decomposition(text) {
        Ok(DecompositionFile::Graph(terms)) => json!({
            "kind": "graph",
            "terms": terms.iter().map(|(c, w)| json!({"cycle": c, "weight": q(w)})).collect::<Vec<_>>(),
        }),
        Ok(DecompositionFile::Lattice(dec)) => json!({
            "kind": "lattice",
            "dim": dec.dim,
            "terms": dec.terms.iter().map(|(c, w)| json!({
                "class": c.entries().iter().map(|(x, n)| json!({"point": x, "multiplicity": n})).collect::<Vec<_>>(),
                "weight": q(w),
            })).collect::<Vec<_>>(),
            "trivial": q(&dec.trivial_mass),
        }),
        Err(_) => Value::Null,
    };
    json!({"decomposition": body, "notes": notes})
}

fn negative(message: String) -> Report {
    eprintln!("{message}");
    Report::new(format!("# {message}\n"), json!({"error": message}), false)
}

/// What a decomposition mode produced: the file, or a negative verdict.
enum Outcome {
    Emitted(String),
    Rejected(String),
}

type Checker = Box<dyn Fn(&str) -> anyhow::Result<bool>>;

pub fn decompose(args: &DecomposeArgs) -> anyhow::Result<Report> {
    let (mode, input) = match (args.mode, args.positional.as_slice()) {
        (Some(mode), [input]) => (mode, input.clone()),
        (None, [mode, input]) => (
            Mode::from_str(mode, true).map_err(|_| anyhow!("unknown mode `{mode}`"))?,
            input.clone(),
        ),
        (Some(_), _) => bail!("with --mode, give exactly one INPUT"),
        (None, _) => bail!("usage: decompose MODE INPUT"),
    };
    let (outcome, checker): (Outcome, Checker) = match mode {
        Mode::Graph => decompose_graph_mode(Path::new(&input))?,
        Mode::Birkhoff => decompose_birkhoff_mode(Path::new(&input))?,
        Mode::Lattice => decompose_lattice_mode(Path::new(&input), args.periodic)?,
        Mode::Elementary => decompose_elementary_mode(Path::new(&input), args)?,
        Mode::OneD => decompose_1d_mode(Path::new(&input), args)?,
        Mode::OneDHeavy => decompose_heavy_mode(&input, args)?,
    };
    match args.verify.as_deref() {
        Some(file) if !file.is_empty() => {
            let path = Path::new(file);
            let ok = in_file(path, checker(&read(path)?))?;
            Ok(Report::new(format!("verified {}\n", yes_no(ok)), json!({"verified": ok}), ok))
        }
        verify => match outcome {
            Outcome::Rejected(message) => Ok(negative(message)),
            Outcome::Emitted(mut text) => {
                if verify.is_some() {
                    let ok = checker(&text)?;
                    if !ok {
                        return Ok(negative("verification of the emitted decomposition failed".into()));
                    }
                    text.push_str("# verified exact reconstruction\n");
                }
                let json = decomposition_json(&text);
                Ok(Report::new(text, json, true))
            }
        },
    }
}

fn decompose_graph_mode(input: &Path) -> anyhow::Result<(Outcome, Checker)> {
    let (name, g) = in_file(input, parse_graph(&read(input)?, false))?;
    let outcome = match decompose_graph(&g) {
        Ok(dec) => Outcome::Emitted(format!(
            "# decomposition of digraph {name}\n{}",
            write_graph_decomposition(&dec, &g)
        )),
        Err(e @ GraphError::NotBalanced { .. }) => Outcome::Rejected(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    Ok((outcome, Box::new(move |text| graph_decomposition_ok(text, &g))))
}

fn decompose_birkhoff_mode(input: &Path) -> anyhow::Result<(Outcome, Checker)> {
    let (name, g) = in_file(input, parse_graph(&read(input)?, true))?;
    let outcome = match birkhoff_decompose(&g) {
        Ok(perms) => {
            let mut text = format!("# birkhoff decomposition of digraph {name}\n");
            for (pi, w) in &perms {
                let images: Vec<&str> = pi.0.iter().map(|&v| g.label(v)).collect();
                text.push_str(&format!("# permutation {} {}\n", q(w), images.join(" ")));
            }
            text.push_str(&write_graph_decomposition(&birkhoff_cycle_decomposition(&g)?, &g));
            Outcome::Emitted(text)
        }
        Err(e @ GraphError::NotBistochastic) => Outcome::Rejected(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    Ok((outcome, Box::new(move |text| graph_decomposition_ok(text, &g))))
}

fn decompose_lattice_mode(input: &Path, periodic: bool) -> anyhow::Result<(Outcome, Checker)> {
    let p = in_file(input, parse_measure(&read(input)?))?;
    let outcome = match decompose_lattice(&p) {
        Ok(dec) => {
            let mut text = write_lattice_decomposition(&dec);
            if periodic {
                for record in dec.periodic_lift() {
                    text.push_str(&format!("# periodic {record}\n"));
                }
            }
            Outcome::Emitted(text)
        }
        Err(e @ (LatticeError::NotBalanced { .. } | LatticeError::TooLarge { .. })) => Outcome::Rejected(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    Ok((outcome, Box::new(move |text| lattice_decomposition_ok(text, &p))))
}

fn decompose_elementary_mode(input: &Path, args: &DecomposeArgs) -> anyhow::Result<(Outcome, Checker)> {
    let (c, data) = load_edge_data(input, &args.complex)?;
    let r = data.into_rates();
    let shift = args.c.as_deref().map(|s| rational_arg("c", s)).transpose()?;
    let g = rates_digraph(&c, &r)?;
    let outcome = match elementary_decompose(&r, &c, shift) {
        Ok(dec) => {
            let (_, gd) = dec.to_graph_decomposition(&c)?;
            let mut text = format!("# shift_c {}\n{}", q(&dec.constant), write_graph_decomposition(&gd, &g));
            if args.periodic {
                for record in dec.on_torus(&c).periodic_lift() {
                    text.push_str(&format!("# periodic {record}\n"));
                }
            }
            Outcome::Emitted(text)
        }
        Err(e @ (ElementaryError::NotInRe | ElementaryError::NegativeEdgeWeight { .. })) => {
            Outcome::Rejected(e.to_string())
        }
        Err(e) => return Err(e.into()),
    };
    Ok((outcome, Box::new(move |text| graph_decomposition_ok(text, &g))))
}

fn decompose_1d_mode(input: &Path, args: &DecomposeArgs) -> anyhow::Result<(Outcome, Checker)> {
    let (ring, data) = load_edge_data(input, &args.complex)?;
    let r = data.into_rates();
    let g = rates_digraph(&ring, &r)?;
    let a = args.a.as_deref().map(|s| rational_arg("a", s)).transpose()?.unwrap_or_else(Rational::zero);
    let outcome = match decompose_1d(&r, &ring) {
        Ok(family) => match family.instance(&a) {
            Ok(inst) => {
                let n = ring.num_vertices();
                let mut terms = Vec::new();
                for (i, w) in inst.edge_weights.iter().enumerate() {
                    if !w.is_zero() {
                        terms.push((GraphCycle::new(vec![i, (i + 1) % n])?, w.clone()));
                    }
                }
                let around: Vec<usize> = (0..n).collect();
                if !inst.plus.is_zero() {
                    terms.push((GraphCycle::new(around.clone())?, inst.plus.clone()));
                }
                if !inst.minus.is_zero() {
                    terms.push((GraphCycle::new(around.into_iter().rev().collect())?, inst.minus.clone()));
                }
                Outcome::Emitted(format!(
                    "# c {}\n# m {}\n# in_r_star {}\n# a {}\n{}",
                    q(&family.c),
                    q(&family.m),
                    yes_no(family.in_r_star),
                    q(&a),
                    write_graph_decomposition(&GraphDecomposition { terms }, &g)
                ))
            }
            Err(e) => Outcome::Rejected(format!("{e} (m = {})", q(&family.m))),
        },
        Err(e @ ElementaryError::NotBalanced) => Outcome::Rejected(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    Ok((outcome, Box::new(move |text| graph_decomposition_ok(text, &g))))
}

fn heavy_oracle(input: &str, search_limit: i64) -> anyhow::Result<HeavyTailOracle1D> {
    let weight = match input.split_once(':') {
        Some(("inverse-square", w)) => parse_rational(w).map_err(|e| anyhow!("weight: {e}"))?,
        None if input == "inverse-square" => int(1),
        _ => bail!("unknown heavy-tail input `{input}`; expected `inverse-square[:W]`"),
    };
    if !weight.is_positive() {
        bail!("heavy-tail weight must be positive");
    }
    Ok(HeavyTailOracle1D::inverse_square(weight, search_limit))
}

fn decompose_heavy_mode(input: &str, args: &DecomposeArgs) -> anyhow::Result<(Outcome, Checker)> {
    let outcome = match decompose_1d_heavy_tail(heavy_oracle(input, args.search_limit)?, args.steps) {
        Ok((steps, stream)) => {
            let dec = LatticeDecomposition {
                dim: 1,
                terms: steps.iter().map(|s| (s.class.clone(), s.weight.clone())).collect(),
                trivial_mass: stream.origin_mass(),
            };
            let mut text = format!("# heavy-tail stream {input}, {} steps\n", steps.len());
            for (l, s) in steps.iter().enumerate() {
                text.push_str(&format!("# step {} case {:?} x_plus {} x_minus {}\n", l + 1, s.case, s.x_plus, s.x_minus));
            }
            text.push_str(&write_lattice_decomposition(&dec));
            Outcome::Emitted(text)
        }
        Err(e @ LatticeError::OracleExhausted { .. }) => Outcome::Rejected(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let input = input.to_string();
    let limit = args.search_limit;
    let checker: Checker = Box::new(move |text| {
        let dec = lattice_decomposition(text)?;
        let (steps, stream) = decompose_1d_heavy_tail(heavy_oracle(&input, limit)?, dec.terms.len())?;
        let same = steps.iter().map(|s| (&s.class, &s.weight)).eq(dec.terms.iter().map(|(c, w)| (c, w)));
        let oracle = heavy_oracle(&input, limit)?;
        let dim = dec.dim;
        let covered = LatticeDecomposition {
            trivial_mass: Rational::zero(),
            ..dec
        }
        .reconstruct();
        let dominated = covered.atoms().iter().all(|(x, m)| *m <= oracle.mass_at(x[0]));
        Ok(dim == 1 && same && dominated && stream.consumed().values().all(|m| !m.is_negative()))
    });
    Ok((outcome, checker))
}
