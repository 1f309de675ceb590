use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::extension::{build_extension, BoundaryParameters, Extension, UnitaryParam};
use crate::graph::complement_frame;
use crate::hilbert::{graph_inner, HVec, HilbertVector};
use crate::models::{potential_l2_local_distance, CoreFunc, CoreVector, ModelOperator, ModelSpec, PotentialSpec};
use crate::testutil::*;
use crate::{Error, C64, I};

fn twisted(theta: f64) -> Extension {
    Extension::from_boundary_condition(&momentum(), &BoundaryParameters::Twisted { theta }.to_bc()).unwrap()
}

fn free_at(y: [f64; 3]) -> Extension {
    let m = ModelOperator::new(ModelSpec::PointInteraction3D { center: y }).unwrap();
    build_extension(&m, UnitaryParam::phase(PI)).unwrap()
}

fn counterexample_center(n: usize) -> [f64; 3] {
    if n % 2 == 1 {
        [0.0; 3]
    } else {
        [n as f64, 0.0, 0.0]
    }
}

fn counterexample(n_max: usize) -> SequenceSpec {
    SequenceSpec::from_fn(free_at([0.0; 3]), n_max, |n| Ok(free_at(counterexample_center(n)))).unwrap()
}

fn settings(metric: MetricKind, tol: f64, delta: f64, sub: Subsequence) -> DiagnosticSettings {
    DiagnosticSettings { metric, tol, delta, subsequence: sub }
}

#[test]
fn verdict_examples() {
    let all = Subsequence::default();
    assert!(verdict(&[0.0; 32], 1e-3, 0.1, &all).unwrap().is_converged());
    assert!(verdict(&[0.5; 32], 1e-3, 0.1, &all).unwrap().is_diverged());
    let harmonic: Vec<f64> = (1..=256).map(|n| 1.0 / n as f64).collect();
    assert!(verdict(&harmonic, 1e-2, 0.1, &all).unwrap().is_converged());
    assert!(matches!(verdict(&[0.0; 15], 1e-3, 0.1, &all), Err(Error::Config(_))));
    let alternating: Vec<f64> = (1..=64).map(|n| if n % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let even = Subsequence { parity: Parity::Even, from: 1 };
    assert!(verdict(&alternating, 1e-3, 0.5, &even).unwrap().is_diverged());
    assert!(matches!(verdict(&alternating, 1e-3, 0.5, &all).unwrap(), Verdict::Inconclusive { .. }));
    let mut bumpy = vec![0.0; 32];
    bumpy[20] = 1e-4;
    assert!(matches!(verdict(&bumpy, 1e-3, 0.1, &all).unwrap(), Verdict::Inconclusive { .. }));
}

#[test]
fn decay_fit_recovers_power_law() {
    let e: Vec<f64> = (1..=128).map(|n| 3.0 / (n as f64).powi(2)).collect();
    match fit_decay(&e) {
        FittedDecay::PowerLaw { prefactor, exponent } => {
            assert!((exponent - 2.0).abs() < 1e-10 && (prefactor - 3.0).abs() < 1e-8);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(fit_decay(&[0.0; 32]), FittedDecay::Zero);
}

#[test]
fn constant_sequences_have_zero_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for m in [laplace(), point()] {
        let target = random_extension(&m, &mut rng);
        let seq = SequenceSpec::constant(target.clone(), 16).unwrap();
        let spec = DictionarySpec { seed: 2, core: 1, h: 1, plus: 1, graph: 1, domain: 1, explicit: vec![] };
        let dict = Dictionary::generate(&target, &spec).unwrap();
        for kind in MetricKind::ALL {
            let r = run_diagnostic(&seq, &dict, &settings(kind, 1e-10, 0.1, Subsequence::default())).unwrap();
            let worst = r.vectors.iter().flat_map(|v| v.metrics.iter()).fold(0.0f64, |a, b| a.max(*b));
            assert!(worst < 1e-12, "{} {}: {worst:.3e}", m.name(), kind.name());
            assert!(r.verdict.is_converged());
        }
    }
}

#[test]
fn momentum_unitary_phase_drift() {
    let m = momentum();
    let target = build_extension(&m, UnitaryParam::phase(0.7)).unwrap();
    let seq = SequenceSpec::from_fn(target.clone(), 256, |n| build_extension(&m, UnitaryParam::phase(0.7 + 1.0 / n as f64))).unwrap();
    let phi = &m.frame().plus().vectors()[0];
    let e = ucond_metric(&seq, phi).unwrap();
    for (i, v) in e.iter().enumerate() {
        let exact = (C64::from_polar(1.0, 1.0 / (i + 1) as f64) - 1.0).norm();
        assert!((v - exact).abs() < 1e-12);
    }
    // ψ = (1 + x) has a nonzero H₊ component
    let psi = HVec::sample(m.grid().unwrap(), |x| C64::new(1.0 + x, 0.0));
    let overlap = phi.inner(&psi).unwrap().norm();
    let us = unitary_strong_metric(&seq, &psi).unwrap();
    for (i, v) in us.iter().enumerate() {
        let exact = (C64::from_polar(1.0, 1.0 / (i + 1) as f64) - 1.0).norm() * overlap;
        assert!((v - exact).abs() < 1e-12);
    }
    let orth = HVec::lin_comb(&[(C64::new(1.0, 0.0), &psi), (-phi.inner(&psi).unwrap(), phi)]).unwrap();
    assert!(unitary_strong_metric(&seq, &orth).unwrap().iter().all(|v| *v < 1e-14));
    let adj = adjoint_limit_certificate(&seq, phi).unwrap();
    assert!((adj[9] - std::f64::consts::SQRT_2 * e[9]).abs() < 1e-12);
    let x = test_graph_vec(&m, &mut ChaCha8Rng::seed_from_u64(4));
    assert!(projection_metric(&seq, &x).unwrap().iter().all(|v| *v < 1e-8));
}

/// `(B_θ + i)^{-1} 1 = -i + c e^x` with `c = i(1 - e^{iθ})/(e - e^{iθ})`.
fn twisted_resolvent_of_one(theta: f64) -> impl Fn(f64) -> C64 {
    let e = C64::from_polar(1.0, theta);
    let c = I * (1.0 - e) / (std::f64::consts::E - e);
    move |x| -I + c * x.exp()
}

#[test]
fn momentum_srs_matches_closed_form() {
    let m = momentum();
    let base = PI;
    let seq = SequenceSpec::from_fn(twisted(base), 64, |n| Ok(twisted(base + 1.0 / n as f64))).unwrap();
    let one = HVec::sample(m.grid().unwrap(), |_| C64::new(1.0, 0.0));
    let e = srs_metric(&seq, &one).unwrap();
    let exact_target = HVec::sample(m.grid().unwrap(), twisted_resolvent_of_one(base));
    for (i, v) in e.iter().enumerate() {
        let u = HVec::sample(m.grid().unwrap(), twisted_resolvent_of_one(base + 1.0 / (i + 1) as f64));
        assert!((v - u.distance(&exact_target).unwrap()).abs() < 1e-10);
    }
    let alternating = SequenceSpec::from_fn(twisted(0.0), 32, |n| Ok(twisted(if n % 2 == 0 { PI } else { 0.0 }))).unwrap();
    let e = srs_metric(&alternating, &one).unwrap();
    let even = Subsequence { parity: Parity::Even, from: 1 };
    assert!(verdict(&e, 1e-3, 0.1, &even).unwrap().is_diverged());
}

#[test]
fn diffex_core_bound_is_factorwise() {
    let phi_pot = PotentialSpec::bump(5.0, 2.5, 1.0);
    let chi = PotentialSpec::bump(3.75, 1.25, 2.0);
    let model_n = |n: usize| {
        let potential = phi_pot.clone().plus(chi.clone().scaled(1.0 / n as f64));
        ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential, truncation: 40.0 }).unwrap()
    };
    let target_model = ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential: phi_pot.clone(), truncation: 40.0 }).unwrap();
    let target = build_extension(&target_model, UnitaryParam::phase(0.4)).unwrap();
    let seq = SequenceSpec::from_fn(target, 16, |n| build_extension(&model_n(n), UnitaryParam::phase(0.4))).unwrap();
    let f = CoreFunc::bump(9.0, 8.5, C64::new(0.3, -0.2), 0.5);
    let r = core_convergence_certificate(&seq, &CoreVector::Profile(f.clone())).unwrap();
    let local = potential_l2_local_distance(&chi, &PotentialSpec::Zero, f.support());
    for (i, v) in r.iter().enumerate() {
        let bound = f.sup_norm() * local / (i + 1) as f64;
        assert!(*v <= bound * (1.0 + 1e-6) && *v > 0.1 * bound, "n = {}: {v:.6e} vs {bound:.6e}", i + 1);
    }
    // a perturbation away from supp φ is invisible
    let far = CoreVector::Profile(CoreFunc::bump(25.0, 8.5, C64::new(1.0, 0.0), 0.0));
    assert!(core_convergence_certificate(&seq, &far).unwrap().iter().all(|v| *v < 1e-14));
}

#[test]
fn counterexample_structure() {
    let seq = counterexample(24);
    let target = seq.target();
    let w1 = complement_frame(target).unwrap().vectors()[0].clone();
    let e = projection_metric(&seq, &w1).unwrap();
    for (i, v) in e.iter().enumerate() {
        let n = i + 1;
        if n % 2 == 1 {
            assert!(*v < 1e-8, "n = {n}: {v:.3e}");
        } else {
            let wn = complement_frame(seq.member(n)).unwrap().vectors()[0].clone();
            let overlap = graph_inner(&wn, &w1).unwrap().norm();
            let exact = (1.0 - overlap * overlap).sqrt();
            assert!((v - exact).abs() < 1e-7, "n = {n}: {v:.6e} vs {exact:.6e}");
            if n >= 20 {
                assert!(overlap <= 0.05 && *v >= 0.99);
            }
        }
    }
    let one = HVec::atoms([(C64::new(1.0, 0.0), crate::hilbert::Atom::green(crate::hilbert::Pole::MinusI, [0.5, 0.0, 0.0]))]);
    assert!(srs_metric(&seq, &one).unwrap().iter().all(|v| *v < 1e-14));
    let phi = target.frame().plus().vectors()[0].clone();
    let us = unitary_strong_metric(&seq, &phi).unwrap();
    let uc = ucond_metric(&seq, &phi).unwrap();
    for (i, (a, b)) in us.iter().zip(&uc).enumerate() {
        assert!(*b + 1e-12 >= 0.5 * a);
        if (i + 1) % 2 == 1 {
            assert!(*a < 1e-12);
        } else if i + 1 >= 20 {
            assert!(*a > 0.9 && *b > 0.9);
        }
    }
}

#[test]
fn counterexample_consistency_annotates_gap() {
    let seq = counterexample(64);
    let spec = DictionarySpec {
        seed: 9,
        core: 2,
        h: 2,
        plus: 1,
        graph: 0,
        domain: 0,
        explicit: vec![
            ExplicitVector { id: "w1".into(), role: Role::Graph, spec: VectorSpec::ComplementFrame { index: 0 } },
            ExplicitVector { id: "phi_plus".into(), role: Role::H, spec: VectorSpec::PlusFrame { index: 0 } },
        ],
    };
    let dict = Dictionary::generate(seq.target(), &spec).unwrap();
    let even = Subsequence { parity: Parity::Even, from: 20 };
    let reports: Vec<ConvergenceReport> = [
        MetricKind::CoreCertificate,
        MetricKind::UnitaryStrong,
        MetricKind::Srs,
        MetricKind::Projection,
        MetricKind::AdjointCertificate,
    ]
    .iter()
    .map(|k| run_diagnostic(&seq, &dict, &settings(*k, 1e-2, 0.5, even)).unwrap())
    .collect();
    let labels: Vec<&str> = reports.iter().map(|r| r.verdict.label()).collect();
    assert_eq!(labels, ["converged", "diverged", "converged", "diverged", "diverged"]);
    let record = theorem_consistency(&reports).unwrap();
    assert_eq!(record.violations, 0);
    assert!(record.annotations.iter().any(|a| a.starts_with("strictly_stronger_gap")));
}

fn synthetic(kind: MetricKind, v: Verdict) -> ConvergenceReport {
    ConvergenceReport {
        diagnostic: kind,
        tol: 1e-3,
        delta: 0.1,
        subsequence: Subsequence::default(),
        verdict: v,
        vectors: vec![],
        dictionary: String::new(),
        rate_label: RATE_LABEL.into(),
    }
}

#[test]
fn implication_checks() {
    let c = || Verdict::Converged { final_value: 0.0, tol: 1e-3 };
    let d = || Verdict::Diverged { lower_bound: 1.0, delta: 0.1, subsequence: Subsequence::default() };
    let i = || Verdict::Inconclusive { reason: String::new() };
    let kinds = [
        MetricKind::CoreCertificate,
        MetricKind::UnitaryStrong,
        MetricKind::Srs,
        MetricKind::Projection,
        MetricKind::AdjointCertificate,
    ];
    let build = |vs: [Verdict; 5]| kinds.iter().zip(vs).map(|(k, v)| synthetic(*k, v)).collect::<Vec<_>>();
    assert_eq!(theorem_consistency(&build([c(), c(), c(), c(), c()])).unwrap().violations, 0);
    // resolvent and projections converge while U diverges
    assert!(theorem_consistency(&build([c(), d(), c(), c(), c()])).unwrap().violations >= 2);
    // inconclusive never violates
    assert_eq!(theorem_consistency(&build([c(), i(), c(), c(), i()])).unwrap().violations, 0);
    let partial: Vec<_> = build([c(), c(), c(), c(), c()]).into_iter().take(3).collect();
    assert!(matches!(theorem_consistency(&partial), Err(Error::MissingReport(_))));
}

#[test]
fn verdicts_ignore_dictionary_scaling() {
    let seq = SequenceSpec::from_fn(twisted(PI), 32, |n| Ok(twisted(PI + 1.0 / n as f64))).unwrap();
    let spec = DictionarySpec { seed: 5, core: 1, h: 2, plus: 1, graph: 1, domain: 1, explicit: vec![] };
    let dict = Dictionary::generate(seq.target(), &spec).unwrap();
    let scaled = dict.scaled(C64::new(-2.5, 1.0));
    for kind in [MetricKind::Srs, MetricKind::Ucond, MetricKind::QProjection, MetricKind::GraphLimit] {
        let s = settings(kind, 2e-2, 0.1, Subsequence::default());
        let a = run_diagnostic(&seq, &dict, &s).unwrap();
        let b = run_diagnostic(&seq, &scaled, &s).unwrap();
        assert_eq!(a.verdict.label(), b.verdict.label(), "{}", kind.name());
        for (x, y) in a.vectors.iter().zip(&b.vectors) {
            for (p, q) in x.metrics.iter().zip(&y.metrics) {
                assert!((q - p * 2.5f64.hypot(1.0)).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #[test]
    fn verdicts_are_scale_free(values in proptest::collection::vec(0.0f64..1.0, 16..64), c in 0.01f64..100.0) {
        let sub = Subsequence { parity: Parity::Even, from: 1 };
        let a = verdict(&values, 0.05, 0.2, &sub).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let b = verdict(&scaled, 0.05 * c, 0.2 * c, &sub).unwrap();
        prop_assert_eq!(a.label(), b.label());
        if a.is_converged() {
            prop_assert!(*values.last().unwrap() <= 0.05);
        }
    }
}
