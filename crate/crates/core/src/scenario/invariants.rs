use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convergence::{
    run_diagnostic, ucond_metric, unitary_strong_metric, DiagnosticSettings, Dictionary, DictionarySpec, MetricKind,
    SequenceSpec, Subsequence,
};
use crate::extension::{apply_extension, build_extension, random_hermitian, vn_resolvent, BoundaryParameters, DomainElement, Extension, UnitaryParam};
use crate::fixtures::{self, random_extension, test_core, test_graph_vec, test_input};
use crate::graph::{complement_frame, pstar_three_block, q_projection, GraphProjection, ProjectionKind};
use crate::hilbert::{dist_to_span, graph_inner, gram_schmidt, project_onto_span, GraphVec, HilbertVector, DEFAULT_GS_TOL};
use crate::models::{
    potential_l2_local_distance, robin, schrodinger_green_resolvent, CoreFunc, CoreVector, ModelOperator, ModelSpec,
    PotentialSpec, FRAME_RESIDUAL_TOL,
};
use crate::scenario::config::SCHEMA_VERSION;
use crate::{Result, Sign, C64, I};

/// Random draws per model in each check.
const SAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Passes when `measured ≤ bound`.
    AtMost,
    /// Passes when `measured ≥ bound`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub module: String,
    pub measured: Option<f64>,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub schema_version: String,
    pub seed: u64,
    /// Replaces every `at_most` bound when set.
    pub tol_override: Option<f64>,
    pub passed: bool,
    pub failures: usize,
    pub results: Vec<InvariantResult>,
}

impl InvariantReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            super::EXIT_OK
        } else {
            super::EXIT_VIOLATION
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

struct Ctx {
    models: Vec<ModelOperator>,
    rng: ChaCha8Rng,
}

type CheckFn = fn(&mut Ctx) -> Result<f64>;

struct Check {
    name: &'static str,
    module: &'static str,
    relation: Relation,
    bound: f64,
    run: CheckFn,
}

const fn at_most(module: &'static str, name: &'static str, bound: f64, run: CheckFn) -> Check {
    Check { name, module, relation: Relation::AtMost, bound, run }
}

const CHECKS: &[Check] = &[
    at_most("hilbert-core", "inner_product_sesquilinear", 1e-12, sesquilinearity),
    at_most("hilbert-core", "w_isometry_and_square", 1e-12, w_map_identities),
    at_most("hilbert-core", "gram_schmidt_orthonormal_and_spanning", 1e-10, gram_schmidt_check),
    at_most("hilbert-core", "span_projection_idempotent_self_adjoint", 1e-10, span_projection_check),
    at_most("model-catalog", "frame_residuals", FRAME_RESIDUAL_TOL, frame_residuals),
    at_most("model-catalog", "plus_space_orthogonal_to_range", 1e-8, plus_orthogonal_to_range),
    at_most("model-catalog", "reference_matches_sturm_liouville", 1e-7, reference_vs_sturm_liouville),
    at_most("model-catalog", "potential_perturbation_bound", 1e-6, perturbation_bound),
    at_most("extension-engine", "extension_inverts_on_core", 1e-7, inverts_on_core),
    at_most("extension-engine", "range_rule", 1e-8, range_rule),
    at_most("extension-engine", "resolvent_contractive", 1e-9, contractivity),
    Check {
        name: "distinct_unitaries_distinct_resolvents",
        module: "extension-engine",
        relation: Relation::AtLeast,
        bound: 1e-3,
        run: injectivity,
    },
    at_most("graph-geometry", "projections_idempotent_self_adjoint", 1e-8, projections_are_orthogonal),
    at_most("graph-geometry", "q_equals_p_plus_r", 1e-8, q_splits),
    at_most("graph-geometry", "decomposition_complete", 1e-8, pythagoras),
    at_most("graph-geometry", "pstar_duality", 1e-8, pstar_duality),
    at_most("graph-geometry", "pstar_three_block", 1e-8, pstar_blocks),
    at_most("convergence-lab", "verdicts_scale_free", 1e-9, scaling),
    at_most("convergence-lab", "ucond_dominates_unitary_part", 1e-12, ucond_domination),
    at_most("convergence-lab", "counterexample_overlap_floor", 0.05, overlap_floor),
];

/// Runs every invariant with inputs drawn from `seed`. Each check gets its
/// own stream, so checks do not perturb each other's inputs.
pub fn invariant_suite(seed: u64, tol_override: Option<f64>) -> Result<InvariantReport> {
    let models = fixtures::all_models()?;
    let results: Vec<InvariantResult> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, check)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut ctx = Ctx { models: models.clone(), rng };
            let bound = match (check.relation, tol_override) {
                (Relation::AtMost, Some(t)) => t,
                _ => check.bound,
            };
            let (measured, error) = match (check.run)(&mut ctx) {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let passed = match (measured, check.relation) {
                (Some(v), Relation::AtMost) => v <= bound,
                (Some(v), Relation::AtLeast) => v >= bound,
                (None, _) => false,
            };
            InvariantResult {
                name: check.name.into(),
                module: check.module.into(),
                measured,
                relation: check.relation,
                bound,
                passed,
                error,
            }
        })
        .collect();
    let failures = results.iter().filter(|r| !r.passed).count();
    Ok(InvariantReport {
        schema_version: SCHEMA_VERSION.into(),
        seed,
        tol_override,
        passed: failures == 0,
        failures,
        results,
    })
}

fn cplx(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rel<V: HilbertVector>(a: &V, b: &V, scale: &V) -> Result<f64> {
    Ok(a.distance(b)? / scale.norm()?.max(1e-300))
}

fn max_over_models(ctx: &mut Ctx, mut f: impl FnMut(&ModelOperator, &mut ChaCha8Rng) -> Result<f64>) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for m in &ctx.models {
        for _ in 0..SAMPLES {
            worst = worst.max(f(m, &mut ctx.rng)?);
        }
    }
    Ok(worst)
}

fn sesquilinearity(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let (x, y, z) = (test_input(m, rng), test_input(m, rng), test_input(m, rng));
        let (a, b) = (cplx(rng), cplx(rng));
        let comb = HilbertVector::lin_comb(&[(a, &y), (b, &z)])?;
        let scale = x.norm()? * (a.norm() * y.norm()? + b.norm() * z.norm()?);
        let second = (x.inner(&comb)? - (a * x.inner(&y)? + b * x.inner(&z)?)).norm() / scale;
        let first = (comb.inner(&x)? - (a.conj() * y.inner(&x)? + b.conj() * z.inner(&x)?)).norm() / scale;
        let herm = (x.inner(&y)? - y.inner(&x)?.conj()).norm() / (x.norm()? * y.norm()?);
        Ok(second.max(first).max(herm))
    })
}

fn w_map_identities(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let x = test_graph_vec(m, rng)?;
        let n = x.norm()?;
        let iso = (x.w_map().norm()? - n).abs() / n;
        let square = x.w_map().w_map().add(&x)?.norm()? / n;
        Ok(iso.max(square))
    })
}

fn gram_schmidt_check(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let inputs = vec![test_input(m, rng), test_input(m, rng), m.frame().plus().vectors()[0].clone()];
        let onb = gram_schmidt(&inputs, DEFAULT_GS_TOL)?;
        let mut worst = onb.gram_deviation()?;
        for v in &inputs {
            worst = worst.max(dist_to_span(&onb, v)? / v.norm()?);
        }
        Ok(worst)
    })
}

fn span_projection_check(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let inputs: Vec<_> = (0..2).map(|_| test_input(m, rng)).collect();
        let onb = gram_schmidt(&inputs, DEFAULT_GS_TOL)?;
        let (x, z) = (test_input(m, rng), test_input(m, rng));
        let px = project_onto_span(&onb, &x)?;
        let pz = project_onto_span(&onb, &z)?;
        let idem = rel(&project_onto_span(&onb, &px)?, &px, &x)?;
        let adj = (px.inner(&z)? - x.inner(&pz)?).norm() / (x.norm()? * z.norm()?);
        Ok(idem.max(adj))
    })
}

fn frame_residuals(ctx: &mut Ctx) -> Result<f64> {
    Ok(ctx.models.iter().map(|m| m.frame().max_residual()).fold(0.0, f64::max))
}

fn plus_orthogonal_to_range(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let phi = test_core(m, rng);
        let v = m.apply_on_core(&phi)?.add(&m.core_vector(&phi)?.scale(I))?;
        let mut worst: f64 = 0.0;
        for b in m.frame().plus().vectors() {
            worst = worst.max(b.inner(&v)?.norm());
        }
        Ok(worst)
    })
}

fn reference_vs_sturm_liouville(ctx: &mut Ctx) -> Result<f64> {
    let m = fixtures::half_line()?;
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let f = test_input(&m, &mut ctx.rng);
        for sign in [Sign::Plus, Sign::Minus] {
            let a = m.reference_resolvent(sign, &f)?;
            let b = schrodinger_green_resolvent(&m, &robin(0.0), sign, &f)?;
            worst = worst.max(a.distance(&b)? / f.norm()?);
        }
    }
    Ok(worst)
}

/// `max(measured / bound) - 1` over 20 random core profiles; negative means slack.
fn perturbation_bound(ctx: &mut Ctx) -> Result<f64> {
    let base_potential = PotentialSpec::bump(5.0, 2.5, 1.0);
    let chi = PotentialSpec::bump(3.75, 1.25, 2.0);
    let at = |p: PotentialSpec| ModelOperator::new(ModelSpec::SchrodingerHalfLine { potential: p, truncation: 40.0 });
    let base = at(base_potential.clone())?;
    let mut worst = f64::NEG_INFINITY;
    for n in [1.0, 4.0] {
        let pert = at(base_potential.clone().plus(chi.clone().scaled(1.0 / n)))?;
        for _ in 0..10 {
            let rng = &mut ctx.rng;
            let f = CoreFunc::bump(rng.gen_range(9.0..31.0), rng.gen_range(8.0..9.0), cplx(rng), rng.gen_range(-1.0..1.0));
            let phi = CoreVector::Profile(f.clone());
            let lhs = pert.apply_on_core(&phi)?.distance(&base.apply_on_core(&phi)?)?;
            let rhs = f.sup_norm() * potential_l2_local_distance(&chi, &PotentialSpec::Zero, f.support()) / n;
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs - 1.0);
            } else {
                worst = worst.max(if lhs > 0.0 { f64::INFINITY } else { -1.0 });
            }
        }
    }
    Ok(worst)
}

fn inverts_on_core(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let phi = test_core(m, rng);
        let v = m.core_vector(&phi)?;
        let av = m.apply_on_core(&phi)?;
        let mut worst: f64 = 0.0;
        for sign in [Sign::Plus, Sign::Minus] {
            let back = vn_resolvent(&ext, sign, &av.add(&v.scale(sign.value()))?)?;
            worst = worst.max(rel(&back, &v, &v)?);
        }
        Ok(worst)
    })
}

fn range_rule(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let mut worst: f64 = 0.0;
        for l in 0..m.k() {
            let mut coeffs = vec![C64::new(0.0, 0.0); m.k()];
            coeffs[l] = C64::new(1.0, 0.0);
            let (v, bv) = apply_extension(&ext, &DomainElement::new(None, coeffs))?;
            let rhs = ext.frame().plus().vectors()[l].scale(2.0 * I);
            worst = worst.max(bv.add(&v.scale(I))?.distance(&rhs)?);
        }
        Ok(worst)
    })
}

/// `max ‖(B±i)^{-1}f‖/‖f‖ - 1`.
fn contractivity(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let f = test_input(m, rng);
        let mut worst = f64::NEG_INFINITY;
        for sign in [Sign::Plus, Sign::Minus] {
            worst = worst.max(vn_resolvent(&ext, sign, &f)?.norm()? / f.norm()? - 1.0);
        }
        Ok(worst)
    })
}

/// Smallest resolvent gap on the plus basis between `U` and `U·exp(0.3iK)`.
fn injectivity(ctx: &mut Ctx) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for m in &ctx.models {
        let rng = &mut ctx.rng;
        let e1 = random_extension(m, rng)?;
        let gen = random_hermitian(m.k(), rng) * C64::new(0.3, 0.0);
        let e2 = build_extension(m, e1.unitary().times_exp_i(&gen)?)?;
        let mut gap: f64 = 0.0;
        for p in m.frame().plus().vectors() {
            gap = gap.max(vn_resolvent(&e1, Sign::Plus, p)?.distance(&vn_resolvent(&e2, Sign::Plus, p)?)?);
        }
        worst = worst.min(gap);
    }
    Ok(worst)
}

fn projections(ext: &Extension) -> Result<[GraphProjection; 3]> {
    Ok([
        GraphProjection::new(ProjectionKind::QOfExtension, ext)?,
        GraphProjection::new(ProjectionKind::POfSymmetric, ext)?,
        GraphProjection::new(ProjectionKind::PstarOfAdjoint, ext)?,
    ])
}

fn projections_are_orthogonal(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let (x, y) = (test_graph_vec(m, rng)?, test_graph_vec(m, rng)?);
        let mut worst: f64 = 0.0;
        for p in projections(&ext)? {
            let px = p.apply(&x)?;
            let py = p.apply(&y)?;
            worst = worst.max(rel(&p.apply(&px)?, &px, &x)?);
            let gap = (graph_inner(&px, &y)? - graph_inner(&x, &py)?).norm();
            worst = worst.max(gap / (x.norm()? * y.norm()?));
        }
        Ok(worst)
    })
}

fn q_splits(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let x = test_graph_vec(m, rng)?;
        let px = GraphProjection::new(ProjectionKind::POfSymmetric, &ext)?.apply(&x)?;
        let r = project_onto_span(&complement_frame(&ext)?, &x)?;
        rel(&q_projection(&ext, &x)?, &px.add(&r)?, &x)
    })
}

fn pythagoras(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let x = test_graph_vec(m, rng)?;
        let px = GraphProjection::new(ProjectionKind::POfSymmetric, &ext)?.apply(&x)?;
        let rest = x.sub(&px)?;
        let recon = rel(&px.add(&rest)?, &x, &x)?;
        let xn2 = x.norm()?.powi(2);
        let pyth = (rest.norm()?.powi(2) + px.norm()?.powi(2) - xn2).abs() / xn2;
        Ok(recon.max(pyth))
    })
}

fn pstar_duality(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let x = test_graph_vec(m, rng)?;
        let ps = GraphProjection::new(ProjectionKind::PstarOfAdjoint, &ext)?;
        let p = GraphProjection::new(ProjectionKind::POfSymmetric, &ext)?;
        let a = ps.apply(&x)?;
        let idem = rel(&ps.apply(&a)?, &a, &x)?;
        let xn2 = x.norm()?.powi(2);
        let total = a.norm()?.powi(2) + p.apply(&x.w_map())?.norm()?.powi(2);
        Ok(idem.max((total - xn2).abs() / xn2))
    })
}

fn pstar_blocks(ctx: &mut Ctx) -> Result<f64> {
    max_over_models(ctx, |m, rng| {
        let ext = random_extension(m, rng)?;
        let x = test_graph_vec(m, rng)?;
        let a = GraphProjection::new(ProjectionKind::PstarOfAdjoint, &ext)?.apply(&x)?;
        rel(&a, &pstar_three_block(&ext, &x)?, &x)
    })
}

fn twisted_drift(n_max: usize) -> Result<SequenceSpec> {
    let m = fixtures::momentum()?;
    let twisted = |theta: f64| Extension::from_boundary_condition(&m, &BoundaryParameters::Twisted { theta }.to_bc());
    SequenceSpec::from_fn(twisted(PI)?, n_max, |n| twisted(PI + 1.0 / n as f64))
}

fn counterexample(n_max: usize) -> Result<SequenceSpec> {
    let free_at = |y: [f64; 3]| -> Result<Extension> {
        build_extension(&ModelOperator::new(ModelSpec::PointInteraction3D { center: y })?, UnitaryParam::phase(PI))
    };
    SequenceSpec::from_fn(free_at([0.0; 3])?, n_max, |n| {
        free_at(if n % 2 == 1 { [0.0; 3] } else { [n as f64, 0.0, 0.0] })
    })
}

/// Label mismatches plus the relative failure of `e(cx) = |c| e(x)`.
fn scaling(ctx: &mut Ctx) -> Result<f64> {
    let seq = twisted_drift(32)?;
    let spec = DictionarySpec { seed: ctx.rng.gen(), core: 1, h: 1, plus: 1, graph: 1, domain: 1, explicit: vec![] };
    let dict = Dictionary::generate(seq.target(), &spec)?;
    let c = C64::new(ctx.rng.gen_range(-3.0..3.0), ctx.rng.gen_range(-3.0..3.0));
    let scaled = dict.scaled(c);
    let mut worst: f64 = 0.0;
    for metric in [MetricKind::Srs, MetricKind::Ucond, MetricKind::QProjection, MetricKind::GraphLimit] {
        let s = DiagnosticSettings { metric, tol: 2e-2, delta: 0.1, subsequence: Subsequence::default() };
        let a = run_diagnostic(&seq, &dict, &s)?;
        let b = run_diagnostic(&seq, &scaled, &s)?;
        if a.verdict.label() != b.verdict.label() {
            worst += 1.0;
        }
        for (x, y) in a.vectors.iter().zip(&b.vectors) {
            for (p, q) in x.metrics.iter().zip(&y.metrics) {
                worst = worst.max((q - p * c.norm()).abs() / (p * c.norm()).max(1e-300).max(1e-12));
            }
        }
    }
    Ok(worst)
}

/// `max_n (½‖U_nψ - Uψ‖ - ucond_n)`; the invariant says this is `≤ 0`.
fn ucond_domination(ctx: &mut Ctx) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for seq in [twisted_drift(24)?, counterexample(24)?] {
        let phi = seq.target().frame().plus().vectors()[0].scale(cplx(&mut ctx.rng));
        let us = unitary_strong_metric(&seq, &phi)?;
        let uc = ucond_metric(&seq, &phi)?;
        for (a, b) in us.iter().zip(&uc) {
            worst = worst.max(0.5 * a - b);
        }
    }
    Ok(worst)
}

/// Largest `|⟨v̂_n, v̂₁⟩|` over even `n ≥ 20` in the moving-center sequence.
fn overlap_floor(_ctx: &mut Ctx) -> Result<f64> {
    let seq = counterexample(24)?;
    let w1 = complement_frame(seq.target())?.vectors()[0].clone();
    let mut worst: f64 = 0.0;
    for n in (20..=24).step_by(2) {
        let wn: GraphVec = complement_frame(seq.member(n))?.vectors()[0].clone();
        worst = worst.max(graph_inner(&wn, &w1)?.norm());
    }
    Ok(worst)
}
