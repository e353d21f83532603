use cycdec_core::complex::{field_to_rates, Rates, SignedEdge, TwoChain, TwoComplex};
use cycdec_core::discretize::{discretize_potential, random_environment, EnvironmentSpec, PotentialSampler, PotentialSpec};
use cycdec_core::elementary::{
    brute_force_re_oracle, decompose_1d, elementary_decompose, in_re, sufficient_diameter_bound, ElementaryError,
    ReVerdict,
};
use cycdec_core::exact_lp::{int, rat, Rational};
use cycdec_core::finite_graph::decompose_graph;
use cycdec_core::formats::{
    parse_decomposition, parse_edge_data, parse_graph, parse_measure, parse_surface, write_field,
    write_lattice_decomposition, write_measure, write_rates, write_surface, DecompositionFile, EdgeData,
};
use cycdec_core::lattice::{
    decompose_1d_heavy_tail, decompose_lattice, HeavyTailCase, HeavyTailOracle1D, LatticeCycleClass, LatticeMeasure,
};
use num_traits::Zero;
use proptest::prelude::*;

fn se(edge: usize, forward: bool) -> SignedEdge {
    SignedEdge { edge, forward }
}

fn tetrahedron() -> TwoComplex {
    let labels = (0..4).map(|v| format!("v{v}")).collect();
    let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let faces = vec![
        vec![se(0, true), se(3, true), se(1, false)],
        vec![se(2, true), se(4, false), se(0, false)],
        vec![se(1, true), se(5, true), se(2, false)],
        vec![se(4, true), se(5, false), se(3, false)],
    ];
    TwoComplex::surface(labels, edges, faces, true).unwrap()
}

fn rates_from(c: &TwoComplex, psi: &[i64], s: &[i64], den: i64) -> Rates {
    let psi = TwoChain(psi.iter().map(|&x| rat(x, den)).collect());
    let sym = Rates::symmetric(s.iter().map(|&x| rat(x, den)).collect()).unwrap();
    field_to_rates(&c.boundary2(&psi)).add(&sym)
}

#[test]
fn heavy_tail_two_atoms() {
    let oracle = HeavyTailOracle1D::assume_divergent_moments(
        |x| match x {
            2 => rat(1, 4),
            -1 => rat(1, 2),
            _ => Rational::zero(),
        },
        10,
    );
    let (steps, stream) = decompose_1d_heavy_tail(oracle, 1).unwrap();
    let step = &steps[0];
    assert_eq!(step.class, LatticeCycleClass::new([(vec![2], 1), (vec![-1], 2)]).unwrap());
    assert_eq!(step.case, HeavyTailCase::A);
    assert_eq!(step.weight, rat(3, 4));
    assert!(stream.residual(2).is_zero() && stream.residual(-1).is_zero());
}

#[test]
fn tetrahedron_surface() {
    let c = tetrahedron();
    let back = parse_surface(&write_surface(&c)).unwrap();
    assert_eq!(back.num_faces(), 4);
    assert_eq!(back.edges(), c.edges());

    let sym = rates_from(&c, &[0; 4], &[1; 6], 1);
    assert!(in_re(&sym, &c).unwrap().is_yes());

    let one_face = rates_from(&c, &[1, 0, 0, 0], &[0; 6], 1);
    let v = in_re(&one_face, &c).unwrap();
    assert!(v.is_yes());
    assert!(brute_force_re_oracle(&one_face, &c).unwrap());
    let d = elementary_decompose(&one_face, &c, None).unwrap();
    assert!(d.is_nonnegative());
    assert_eq!(d.reconstruct(&c), one_face);

    let split = rates_from(&c, &[2, 2, 0, 0], &[0; 6], 1);
    assert!(!in_re(&split, &c).unwrap().is_yes());
    assert!(!brute_force_re_oracle(&split, &c).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agrees_on_torus_4(psi in prop::collection::vec(-3i64..=3, 16), s in prop::collection::vec(0i64..=3, 32)) {
        let t = TwoComplex::torus(4, 4).unwrap();
        let r = rates_from(&t, &psi, &s, 2);
        let fast = in_re(&r, &t).unwrap();
        prop_assert_eq!(fast.is_yes(), brute_force_re_oracle(&r, &t).unwrap());
        if let ReVerdict::Yes { witness, .. } = fast {
            let d = elementary_decompose(&r, &t, Some(witness)).unwrap();
            prop_assert!(d.is_nonnegative());
            prop_assert_eq!(d.reconstruct(&t), r.clone());
        }
        if let Ok(bound) = sufficient_diameter_bound(&r, &t) {
            if bound.sufficient {
                prop_assert!(in_re(&r, &t).unwrap().is_yes());
            }
        }
    }

    #[test]
    fn oracle_agrees_on_tetrahedron(psi in prop::collection::vec(-4i64..=4, 4), s in prop::collection::vec(0i64..=4, 6)) {
        let c = tetrahedron();
        let r = rates_from(&c, &psi, &s, 3);
        prop_assert_eq!(in_re(&r, &c).unwrap().is_yes(), brute_force_re_oracle(&r, &c).unwrap());
    }

    #[test]
    fn oracle_agrees_on_klein_bottle(psi in prop::collection::vec(-3i64..=3, 9), s in prop::collection::vec(0i64..=3, 18)) {
        let k = TwoComplex::klein_bottle(3, 3).unwrap();
        let r = rates_from(&k, &psi, &s, 2);
        prop_assert_eq!(in_re(&r, &k).unwrap().is_yes(), brute_force_re_oracle(&r, &k).unwrap());
    }
}

#[test]
fn ring_family_through_files() {
    let ring = TwoComplex::ring(3).unwrap();
    let r = Rates::new(vec![int(2); 3], vec![int(1); 3]).unwrap();
    let text = write_rates(&ring, &r);
    let EdgeData::Rates(back) = parse_edge_data(&text, &ring).unwrap() else {
        panic!("expected rates");
    };
    assert_eq!(back, r);
    let fam = decompose_1d(&back, &ring).unwrap();
    assert_eq!((fam.c.clone(), fam.m.clone()), (int(1), int(1)));
    for a in [int(0), rat(1, 2), int(1)] {
        assert_eq!(fam.instance(&a).unwrap().reconstruct(), r);
    }
    let mut uneven = r.clone();
    uneven.forward[1] = int(3);
    assert_eq!(decompose_1d(&uneven, &ring), Err(ElementaryError::NotBalanced));
}

#[test]
fn lattice_round_trip() {
    let p = LatticeMeasure::from_atoms(
        2,
        [
            (vec![2, -1], rat(1, 6)),
            (vec![-1, 2], rat(1, 6)),
            (vec![0, 0], rat(1, 2)),
            (vec![-1, -1], rat(1, 6)),
        ],
    )
    .unwrap();
    let parsed = parse_measure(&write_measure(&p)).unwrap();
    assert_eq!(parsed, p);
    let dec = decompose_lattice(&parsed).unwrap();
    let DecompositionFile::Lattice(back) = parse_decomposition(&write_lattice_decomposition(&dec)).unwrap() else {
        panic!("expected lattice decomposition");
    };
    assert_eq!(back.reconstruct(), p);
}

#[test]
fn graph_from_text() {
    let (name, g) = parse_graph("digraph square\na b 1/2\nb c 1/2\nc d 1/2\nd a 1/2\na c 1/4\nc a 1/4\n", false)
        .unwrap();
    assert_eq!(name, "square");
    let dec = decompose_graph(&g).unwrap();
    assert!(dec.verify(&g));
    assert!(dec.terms.len() <= g.num_edges());
}

#[test]
fn discretized_band_needs_symmetric_part() {
    let d = discretize_potential(&PotentialSampler::band(0.3, 0.7), 10).unwrap();
    let text = write_field(&d.complex, &d.field);
    let EdgeData::Field(phi) = parse_edge_data(&text, &d.complex).unwrap() else {
        panic!("expected field");
    };
    assert_eq!(phi, d.field);
    let bare = field_to_rates(&phi);
    assert!(!in_re(&bare, &d.complex).unwrap().is_yes());
    let lifted = bare.add(&Rates::symmetric(vec![rat(1, 2); d.complex.num_edges()]).unwrap());
    assert!(in_re(&lifted, &d.complex).unwrap().is_yes());
}

#[test]
fn environment_is_reproducible() {
    let spec = EnvironmentSpec {
        potential: "trig:5".parse::<PotentialSpec>().unwrap().sampler(),
        potential_name: "trig:5".into(),
        a: int(1),
        b: int(2),
        seed: 3,
        n1: 5,
        n2: 4,
    };
    let e1 = random_environment(&spec).unwrap();
    let e2 = random_environment(&spec).unwrap();
    assert_eq!(e1.to_file_string(), e2.to_file_string());
    assert!(e1.rows_sum_to_one());
    if e1.certificate.a_dominates {
        assert!(e1.certificate.in_re);
    }
}
