use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::hilbert::atoms::Pole;
use crate::hilbert::{HVec, HilbertVector};
use crate::models::{robin, BoundaryCondition};
use crate::testutil::*;
use crate::{Error, Sign, C64, I};

#[test]
fn momentum_phase_records() {
    let m = momentum();
    let theta = |u: f64| match boundary_parameters(&build_extension(&m, UnitaryParam::phase(u)).unwrap()) {
        BoundaryParameters::Twisted { theta } => theta,
        other => panic!("{other:?}"),
    };
    assert!(theta(0.0).min(2.0 * PI - theta(0.0)) < 1e-10);
    assert!((theta(PI) - PI).abs() < 1e-10);
}

#[test]
fn twisted_resolvent_matches_fourier_oracle() {
    let m = momentum();
    for u in [0.3, 1.7, PI, 4.0] {
        let ext = build_extension(&m, UnitaryParam::phase(u)).unwrap();
        let BoundaryParameters::Twisted { theta } = boundary_parameters(&ext) else { panic!() };
        let modes: Vec<(f64, C64)> = (-3..=3).map(|j| (theta + 2.0 * PI * j as f64, c(1.0 / (1.0 + (j * j) as f64), 0.2 * j as f64))).collect();
        let f = HVec::sample(m.grid().unwrap(), |x| modes.iter().map(|(k, a)| a * (I * k * x).exp()).sum());
        for sign in [Sign::Plus, Sign::Minus] {
            let exact = HVec::sample(m.grid().unwrap(), |x| {
                modes.iter().map(|(k, a)| a / (k + sign.value()) * (I * k * x).exp()).sum()
            });
            assert!(vn_resolvent(&ext, sign, &f).unwrap().distance(&exact).unwrap() < 1e-9);
            assert!(resolvent(&ext, sign, &f).unwrap().distance(&exact).unwrap() < 1e-9);
        }
    }
}

#[test]
fn point_interaction_records() {
    let m = point();
    let free = build_extension(&m, UnitaryParam::phase(PI)).unwrap();
    assert_eq!(boundary_parameters(&free), BoundaryParameters::PointInteraction { alpha: None });
    let (kp, km) = (Pole::PlusI.kappa(), Pole::MinusI.kappa());
    for theta in [0.0, 0.5, 2.0, -1.0] {
        let u = C64::from_polar(1.0, theta);
        let expected = I * (kp + u * km) / (4.0 * PI * (1.0 + u));
        assert!(expected.im.abs() < 1e-12);
        let ext = build_extension(&m, UnitaryParam::phase(theta)).unwrap();
        match boundary_parameters(&ext) {
            BoundaryParameters::PointInteraction { alpha: Some(a) } => assert!((a - expected.re).abs() < 1e-10, "{a} vs {expected}"),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn laplace_dirichlet_and_neumann_records() {
    let m = laplace();
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let dir = BoundaryCondition::new(vec![vec![one, zero, zero, zero], vec![zero, one, zero, zero]]).unwrap();
    let neu = BoundaryCondition::new(vec![vec![zero, zero, one, zero], vec![zero, zero, zero, one]]).unwrap();
    let ext = Extension::from_boundary_condition(&m, &dir).unwrap();
    match boundary_parameters(&ext) {
        BoundaryParameters::Interval { rows, label } => {
            assert_eq!(label, IntervalLabel::Dirichlet);
            for (i, r) in rows.iter().enumerate() {
                for (j, x) in r.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((x - e).norm() < 1e-9);
                }
            }
        }
        other => panic!("{other:?}"),
    }
    let ext = Extension::from_boundary_condition(&m, &neu).unwrap();
    assert!(matches!(boundary_parameters(&ext), BoundaryParameters::Interval { label: IntervalLabel::Neumann, .. }));
    let f = HVec::sample(m.grid().unwrap(), |x| c((PI * x).cos(), 0.0));
    let u = resolvent(&ext, Sign::Plus, &f).unwrap();
    assert!(u.distance(&f.scale(1.0 / (PI * PI + I))).unwrap() < 1e-9);
}

#[test]
fn robin_round_trip() {
    let m = half_line();
    for beta in [0.0, 0.4, PI / 2.0, 2.5] {
        let ext = Extension::from_boundary_condition(&m, &robin(beta)).unwrap();
        match boundary_parameters(&ext) {
            BoundaryParameters::Robin { beta: b } => {
                let d = (b - beta).rem_euclid(PI);
                assert!(d.min(PI - d) < 1e-8, "{b} vs {beta}");
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn parameter_records_reproduce_the_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in all_models() {
        let ext = random_extension(&m, &mut rng);
        let back = Extension::from_boundary_condition(&m, &boundary_parameters(&ext).to_bc()).unwrap();
        assert!(back.unitary().distance(ext.unitary()) < 1e-8, "{}", m.name());
    }
}

#[test]
fn rejects_bad_unitaries() {
    let m = laplace();
    assert!(matches!(build_extension(&m, UnitaryParam::phase(0.3)), Err(Error::Config(_))));
    let bad = nalgebra::DMatrix::from_element(1, 1, c(1.1, 0.0));
    assert!(matches!(UnitaryParam::new(bad), Err(Error::NotUnitary { .. })));
}

#[test]
fn plus_vectors_follow_the_range_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in all_models() {
        let ext = random_extension(&m, &mut rng);
        for l in 0..m.k() {
            let mut coeffs = vec![c(0.0, 0.0); m.k()];
            coeffs[l] = c(1.0, 0.0);
            let (v, bv) = apply_extension(&ext, &DomainElement::new(None, coeffs)).unwrap();
            let lhs = bv.add(&v.scale(I)).unwrap();
            let rhs = ext.frame().plus().vectors()[l].scale(2.0 * I);
            assert!(lhs.distance(&rhs).unwrap() < 1e-12, "{}", m.name());
        }
    }
}

#[test]
fn extension_is_symmetric_on_its_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in all_models() {
        let ext = random_extension(&m, &mut rng);
        let elt = |rng: &mut ChaCha8Rng| {
            let coeffs = (0..m.k()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            DomainElement::new(Some(test_core(&m, rng)), coeffs)
        };
        let (v, bv) = apply_extension(&ext, &elt(&mut rng)).unwrap();
        let (w, bw) = apply_extension(&ext, &elt(&mut rng)).unwrap();
        let gap = (v.inner(&bw).unwrap() - bv.inner(&w).unwrap()).norm();
        assert!(gap < 1e-8, "{}: {gap:.3e}", m.name());
    }
}

#[test]
fn resolvent_inverts_on_the_core() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in all_models() {
        let ext = random_extension(&m, &mut rng);
        let phi = test_core(&m, &mut rng);
        let v = m.core_vector(&phi).unwrap();
        let av = m.apply_on_core(&phi).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let psi = av.add(&v.scale(sign.value())).unwrap();
            let back = vn_resolvent(&ext, sign, &psi).unwrap();
            let err = back.distance(&v).unwrap() / v.norm().unwrap();
            assert!(err < 1e-7, "{} {sign:?}: {err:.3e}", m.name());
        }
    }
}

#[test]
fn von_neumann_and_green_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for m in all_models() {
        for _ in 0..3 {
            let ext = random_extension(&m, &mut rng);
            let f = test_input(&m, &mut rng);
            for sign in [Sign::Plus, Sign::Minus] {
                let a = vn_resolvent(&ext, sign, &f).unwrap();
                let b = resolvent(&ext, sign, &f).unwrap();
                let err = a.distance(&b).unwrap() / f.norm().unwrap();
                assert!(err < 1e-7, "{} {sign:?}: {err:.3e}", m.name());
            }
        }
    }
}

#[test]
fn resolvents_are_contractive_adjoint_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for m in all_models() {
        let ext = random_extension(&m, &mut rng);
        let f = test_input(&m, &mut rng);
        let g = test_input(&m, &mut rng);
        let rp = vn_resolvent(&ext, Sign::Plus, &f).unwrap();
        let rm = vn_resolvent(&ext, Sign::Minus, &f).unwrap();
        let fnorm = f.norm().unwrap();
        assert!(rp.norm().unwrap() <= fnorm * (1.0 + 1e-9));
        assert!(rm.norm().unwrap() <= fnorm * (1.0 + 1e-9));
        let lhs = rp.inner(&g).unwrap();
        let rhs = f.inner(&vn_resolvent(&ext, Sign::Minus, &g).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-8 * fnorm * g.norm().unwrap(), "{}", m.name());
        // R₊ - R₋ = -2i R₋R₊
        let lhs = rp.sub(&rm).unwrap();
        let rhs = vn_resolvent(&ext, Sign::Minus, &rp).unwrap().scale(-2.0 * I);
        assert!(lhs.distance(&rhs).unwrap() < 1e-8 * fnorm, "{}", m.name());
    }
}

#[test]
fn distinct_unitaries_give_distinct_resolvents() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for m in all_models() {
        let e1 = random_extension(&m, &mut rng);
        let e2 = build_extension(&m, e1.unitary().times_exp_i(&(random_hermitian(m.k(), &mut rng) * c(0.3, 0.0))).unwrap()).unwrap();
        let gap = (0..m.k())
            .map(|l| {
                let p = &m.frame().plus().vectors()[l];
                vn_resolvent(&e1, Sign::Plus, p).unwrap().distance(&vn_resolvent(&e2, Sign::Plus, p).unwrap()).unwrap()
            })
            .fold(0.0, f64::max);
        assert!(gap > 1e-3, "{}: {gap:.3e}", m.name());
    }
}

#[test]
fn certified_domain_elements() {
    let m = laplace();
    let v = HVec::sample(m.grid().unwrap(), |x| c((x * (1.0 - x)).powi(2), 0.0));
    let elt = DomainElement::certified(&m, v.clone(), vec![c(0.0, 0.0); 2]).unwrap();
    let ext = build_extension(&m, UnitaryParam::identity(2)).unwrap();
    let (_, bv) = apply_extension(&ext, &elt).unwrap();
    let exact = HVec::sample(m.grid().unwrap(), |x| c(-(2.0 - 12.0 * x + 12.0 * x * x), 0.0));
    assert!(bv.distance(&exact).unwrap() < 1e-8);
    let bad = HVec::sample(m.grid().unwrap(), |x| c(x, 0.0));
    assert!(matches!(DomainElement::certified(&m, bad, vec![c(0.0, 0.0); 2]), Err(Error::Domain(_))));
}
