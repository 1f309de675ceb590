use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{atomic_boundary_data, laplacian_of_atoms};
use super::*;
use crate::hilbert::atoms::{Atom, Pole};
use crate::hilbert::{AtomVec, HVec, HilbertVector};
use crate::{Error, Sign, C64, I};

fn momentum() -> ModelOperator {
    ModelOperator::new(ModelSpec::MomentumInterval).unwrap()
}

fn laplace() -> ModelOperator {
    ModelOperator::new(ModelSpec::LaplaceInterval).unwrap()
}

fn half_line(potential: PotentialSpec) -> ModelOperator {
    ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential, truncation: 40.0 }).unwrap()
}

fn point(center: [f64; 3]) -> ModelOperator {
    ModelOperator::new(ModelSpec::PointInteraction3D { center }).unwrap()
}

fn bump_potential() -> PotentialSpec {
    PotentialSpec::bump(5.0, 2.5, 1.0)
}

/// Random bump whose radius spans at least a dozen grid panels when
/// `[lo, hi]` is the whole model interval.
fn random_core(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> CoreFunc {
    let radius = rng.gen_range(0.2..0.45) * (hi - lo);
    let center = rng.gen_range(lo + radius + 1e-3..hi - radius - 1e-3);
    let amp = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    CoreFunc::bump(center, radius, amp, rng.gen_range(-6.0..6.0))
}

/// `H²` atom combination at `c` that vanishes at `y`.
fn atomic_core(c: [f64; 3], y: [f64; 3]) -> AtomVec {
    let a = Atom::Green { pole: Pole::PlusI, order: 2, center: c };
    let b = Atom::Green { pole: Pole::MinusI, order: 2, center: c };
    let mu = -a.value_at(y) / b.value_at(y);
    AtomVec::new([(C64::new(1.0, 0.0), a), (mu, b)])
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> C64 {
    let c = rng.gen_range(4.0..16.0);
    let w = rng.gen_range(1.5..3.0);
    let k = rng.gen_range(-2.0..2.0);
    let a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    move |x: f64| a * (-(x - c) * (x - c) / (2.0 * w * w)).exp() * (I * k * x).exp()
}

fn grid_fn(model: &ModelOperator, f: impl Fn(f64) -> C64) -> HVec {
    HVec::sample(model.grid().unwrap(), f)
}

#[test]
fn deficiency_indices() {
    let ks: Vec<usize> = [momentum(), laplace(), half_line(PotentialSpec::Zero), point([0.0; 3])]
        .iter()
        .map(|m| m.frame().k())
        .collect();
    assert_eq!(ks, vec![1, 2, 1, 1]);
}

#[test]
fn momentum_frame_is_normalised_exponential() {
    let m = momentum();
    let np = ((1.0 - (-2f64).exp()) / 2.0).powf(-0.5);
    let nm = (((2f64).exp() - 1.0) / 2.0).powf(-0.5);
    let plus = grid_fn(&m, |x| C64::new(np * (-x).exp(), 0.0));
    let minus = grid_fn(&m, |x| C64::new(nm * x.exp(), 0.0));
    assert!(m.frame().plus().vectors()[0].distance(&plus).unwrap() < 1e-12);
    assert!(m.frame().minus().vectors()[0].distance(&minus).unwrap() < 1e-12);
    let d = &m.frame().plus_data()[0];
    assert!((d[0] - np).norm() < 1e-12 && (d[1] - np * (-1f64).exp()).norm() < 1e-12);
}

#[test]
fn point_interaction_frame_is_normalised_green_atom() {
    let y = [0.3, -1.0, 2.0];
    let m = point(y);
    // ‖e^{iκr}/(4πr)‖² = 1/(8π Im κ)
    let w = (8.0 * PI * std::f64::consts::FRAC_1_SQRT_2).sqrt();
    let expected = HVec::atoms([(C64::new(w, 0.0), Atom::green(Pole::PlusI, y))]);
    assert!(m.frame().plus().vectors()[0].distance(&expected).unwrap() < 1e-10);
    let expected = HVec::atoms([(C64::new(w, 0.0), Atom::green(Pole::MinusI, y))]);
    assert!(m.frame().minus().vectors()[0].distance(&expected).unwrap() < 1e-10);
}

#[test]
fn free_half_line_frame_matches_decaying_exponential() {
    let m = half_line(PotentialSpec::Zero);
    let kappa = I.sqrt();
    let n = 2f64.powf(0.25);
    // Proportionality: the frame vector is phase-fixed at the first node.
    let expected = grid_fn(&m, |x| n * (I * kappa * x).exp());
    let overlap = expected.inner(&m.frame().plus().vectors()[0]).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-10, "{overlap}");
    let minus = grid_fn(&m, |x| n * (I * kappa * x).exp().conj());
    let overlap = minus.inner(&m.frame().minus().vectors()[0]).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-10);
}

#[test]
fn frame_residuals_and_orthogonality() {
    let models = [momentum(), laplace(), half_line(PotentialSpec::Zero), half_line(bump_potential()), point([0.0; 3])];
    for m in &models {
        assert!(m.frame().max_residual() < FRAME_RESIDUAL_TOL, "{}: {}", m.name(), m.frame().max_residual());
        assert!(m.frame().plus().gram_deviation().unwrap() < 1e-10);
        assert!(m.frame().minus().gram_deviation().unwrap() < 1e-10);
    }
}

#[test]
fn plus_space_is_orthogonal_to_range_of_a_plus_i() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in [momentum(), laplace(), half_line(bump_potential())] {
        let hi = if m.name() == "schrodinger_half_line" { 40.0 } else { 1.0 };
        for _ in 0..5 {
            let phi = CoreVector::Profile(random_core(&mut rng, 0.0, hi));
            let v = m.apply_on_core(&phi).unwrap().add(&m.core_vector(&phi).unwrap().scale(I)).unwrap();
            for b in m.frame().plus().vectors() {
                assert!(b.inner(&v).unwrap().norm() < 1e-8, "{} {}", m.name(), b.inner(&v).unwrap().norm());
            }
        }
    }
    let m = point([0.0; 3]);
    let phi = CoreVector::Atomic(atomic_core([1.0, 0.5, 0.0], [0.0; 3]));
    let v = m.apply_on_core(&phi).unwrap().add(&m.core_vector(&phi).unwrap().scale(I)).unwrap();
    assert!(m.frame().plus().vectors()[0].inner(&v).unwrap().norm() < 1e-8);
}

#[test]
fn momentum_action_is_symmetric_on_core() {
    let m = momentum();
    let phi = CoreVector::Profile(CoreFunc::bump(0.4, 0.3, C64::new(0.3, 0.8), 4.0));
    let q = m.core_vector(&phi).unwrap().inner(&m.apply_on_core(&phi).unwrap()).unwrap();
    assert!(q.im.abs() < 1e-10);
}

#[test]
fn laplace_action_matches_finite_differences() {
    let m = laplace();
    let f = CoreFunc::bump(0.5, 0.35, C64::new(1.0, 0.0), PI);
    let got = m.apply_on_core(&CoreVector::Profile(f.clone())).unwrap();
    let g = m.grid().unwrap();
    let samples = g.sample(|x| f.value(x));
    let expected = HVec::on_grid(g.clone(), g.differentiate(&g.differentiate(&samples)).iter().map(|v| -v).collect());
    let d = got.distance(&expected).unwrap();
    assert!(d < 1e-6 * expected.norm().unwrap(), "{d}");
}

#[test]
fn potential_perturbation_bound() {
    let chi = PotentialSpec::bump(3.75, 1.25, 2.0);
    let base = half_line(bump_potential());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1.0, 3.0, 10.0] {
        let pert = half_line(bump_potential().plus(chi.clone().scaled(1.0 / n)));
        for _ in 0..20 {
            let f = random_core(&mut rng, 0.0, 40.0);
            let phi = CoreVector::Profile(f.clone());
            let lhs = pert.apply_on_core(&phi).unwrap().distance(&base.apply_on_core(&phi).unwrap()).unwrap();
            let rhs = f.sup_norm() * potential_l2_local_distance(&chi, &PotentialSpec::Zero, f.support()) / n;
            assert!(lhs <= rhs * (1.0 + 1e-6), "{lhs} > {rhs}");
        }
    }
}

#[test]
fn core_support_is_checked() {
    let m = momentum();
    let phi = CoreVector::Profile(CoreFunc::bump(0.1, 0.2, C64::new(1.0, 0.0), 0.0));
    assert!(matches!(m.apply_on_core(&phi), Err(Error::Domain(_))));
    let p = point([0.0; 3]);
    let bad = CoreVector::Atomic(AtomVec::new([(C64::new(1.0, 0.0), Atom::green(Pole::PlusI, [1.0, 0.0, 0.0]))]));
    assert!(matches!(p.apply_on_core(&bad), Err(Error::Domain(_))));
}

#[test]
fn three_d_core_approximant_vanishes_at_moved_center() {
    let phi = CoreVector::Atomic(atomic_core([1.0, 0.0, 0.0], [0.0; 3]));
    let moved = point([6.0, 0.0, 0.0]);
    assert!(moved.validate_core(&phi).is_err());
    let approx = moved.core_approximant(&phi).unwrap();
    let CoreVector::Atomic(a) = &approx else { panic!() };
    assert!(atomic_boundary_data(a, [6.0, 0.0, 0.0])[1].norm() < 1e-14);
    let d = moved.core_vector(&approx).unwrap().distance(&moved.core_vector(&phi).unwrap()).unwrap();
    assert!(d > 0.0 && d < 1e-2);
}

#[test]
fn half_line_potential_must_fit() {
    let r = ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential: PotentialSpec::bump(19.5, 1.0, 1.0), truncation: 40.0 });
    assert!(matches!(r, Err(Error::Config(_))));
}

#[test]
fn momentum_reference_matches_spectral_oracle() {
    let m = momentum();
    let coeffs: Vec<(i32, C64)> = (-4..=4).map(|j| (j, C64::new(1.0 / (1.0 + j as f64 * j as f64), 0.3 * j as f64))).collect();
    let f = grid_fn(&m, |x| coeffs.iter().map(|(j, c)| c * (2.0 * PI * I * *j as f64 * x).exp()).sum());
    for sign in [Sign::Plus, Sign::Minus] {
        let s = sign.value();
        let u = m.reference_resolvent(sign, &f).unwrap();
        let exact = grid_fn(&m, |x| {
            coeffs.iter().map(|(j, c)| c / (2.0 * PI * *j as f64 + s) * (2.0 * PI * I * *j as f64 * x).exp()).sum()
        });
        assert!(u.distance(&exact).unwrap() < 1e-7);
    }
}

#[test]
fn laplace_dirichlet_eigenfunction() {
    let m = laplace();
    let f = grid_fn(&m, |x| C64::new((PI * x).sin(), 0.0));
    for sign in [Sign::Plus, Sign::Minus] {
        let u = m.reference_resolvent(sign, &f).unwrap();
        let exact = f.scale(1.0 / (PI * PI + sign.value()));
        assert!(u.distance(&exact).unwrap() < 1e-10);
    }
}

#[test]
fn laplace_general_condition_residual() {
    let m = laplace();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<C64>> = (0..2)
        .map(|_| (0..4).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    let bc = BoundaryCondition::new(rows).unwrap();
    let f = grid_fn(&m, |x| C64::new(x * x, -x));
    let u = green_resolvent(&m, &bc, Sign::Plus, &f).unwrap();
    let data = m.boundary_data(&u).unwrap();
    assert!(bc.apply(&data).iter().all(|c| c.norm() < 1e-9));
    let g = m.grid().unwrap();
    let HVec::Grid(uv) = &u else { panic!() };
    let d2 = g.differentiate(&g.differentiate(&uv.values));
    let res: Vec<C64> = d2.iter().zip(&uv.values).zip(g.nodes()).map(|((d, v), x)| -d + I * v - C64::new(x * x, -x)).collect();
    assert!(HVec::on_grid(g.clone(), res).norm().unwrap() < 1e-7);
}

#[test]
fn point_interaction_reference_is_resolvent_identity() {
    let y = [0.0, 1.0, 0.0];
    let m = point(y);
    for sign in [Sign::Plus, Sign::Minus] {
        for zp in [Pole::PlusI, Pole::MinusI] {
            let f = HVec::atoms([(C64::new(1.0, 0.0), Atom::green(zp, y))]);
            let u = m.reference_resolvent(sign, &f).unwrap();
            let HVec::Atoms(ua) = &u else { panic!() };
            // (−Δ − z)u = f with z = −sign, and u has no point singularity.
            assert!(atomic_boundary_data(ua, y)[0].norm() < 1e-14);
            let lhs = HVec::Atoms(laplacian_of_atoms(ua).unwrap()).sub(&u.scale(-sign.value())).unwrap();
            assert!(lhs.distance(&f).unwrap() < 1e-10);
            if zp.z() != -sign.value() {
                let z = Pole::from_z(-sign.value()).unwrap();
                // (G_{z'} - G_z)/(z' - z)
                let expected = HVec::atoms([
                    (-1.0 / (zp.z() + sign.value()), Atom::green(z, y)),
                    (1.0 / (zp.z() + sign.value()), Atom::green(zp, y)),
                ]);
                assert!(u.distance(&expected).unwrap() < 1e-12, "{}", u.distance(&expected).unwrap());
            }
        }
    }
}

#[test]
fn dirichlet_half_line_matches_closed_form() {
    let m = half_line(PotentialSpec::Zero);
    let f = grid_fn(&m, |x| C64::new((-x).exp(), 0.0));
    for sign in [Sign::Plus, Sign::Minus] {
        let s = sign.value();
        let kappa = s.sqrt();
        let u = m.reference_resolvent(sign, &f).unwrap();
        let exact = grid_fn(&m, |x| ((-x).exp() - (-kappa * x).exp()) / (s - 1.0));
        assert!(u.distance(&exact).unwrap() < 1e-8, "{}", u.distance(&exact).unwrap());
    }
}

#[test]
fn robin_half_line_residual_and_adjoint_pairing() {
    let m = half_line(bump_potential());
    let g = m.grid().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let beta = rng.gen_range(0.0..PI);
        let bc = robin(beta);
        let f1 = random_gaussian(&mut rng);
        let f2 = random_gaussian(&mut rng);
        let f = grid_fn(&m, &f1);
        let h = grid_fn(&m, &f2);
        let u = schrodinger_green_resolvent(&m, &bc, Sign::Plus, &f).unwrap();
        let HVec::Grid(uv) = &u else { panic!() };
        let d2 = g.differentiate(&g.differentiate(&uv.values));
        let pot = bump_potential();
        let res: Vec<C64> = (0..g.len())
            .map(|j| -d2[j] + (pot.eval(g.nodes()[j]) + I) * uv.values[j] - f1(g.nodes()[j]))
            .collect();
        let r = HVec::on_grid(g.clone(), res).norm().unwrap();
        assert!(r < 1e-7, "{r}");
        let data = m.boundary_data(&u).unwrap();
        assert!((beta.cos() * data[0] + beta.sin() * data[1]).norm() < 1e-8);
        assert!(uv.values.last().unwrap().norm() < 1e-6 * u.norm().unwrap());
        let lhs = schrodinger_green_resolvent(&m, &bc, Sign::Minus, &f).unwrap().inner(&h).unwrap();
        let rhs = f.inner(&u_for(&m, &bc, &h)).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }
}

fn u_for(m: &ModelOperator, bc: &BoundaryCondition, h: &HVec) -> HVec {
    schrodinger_green_resolvent(m, bc, Sign::Plus, h).unwrap()
}

#[test]
fn reference_and_sturm_liouville_paths_agree() {
    let m = half_line(bump_potential());
    let f = grid_fn(&m, |x| C64::new((-0.3 * x).exp() * x, 0.0));
    let a = m.reference_resolvent(Sign::Minus, &f).unwrap();
    let b = schrodinger_green_resolvent(&m, &robin(0.0), Sign::Minus, &f).unwrap();
    assert!(a.distance(&b).unwrap() < 1e-12);
}
