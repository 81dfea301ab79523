//! Verification suites: algebra identities, lattice convergence, field
//! transformation properties, current construction/conservation, and the
//! reduction comparison. Each suite returns a [`SuiteReport`] built from the
//! static check registry.
//!
//! Sweeps that the acceptance thresholds quantify (conservation,
//! mixing, covariance, invariance slopes, derivative oracles, the free-wave
//! residual) run on canonical desk-scale lattices so their values do not
//! depend on the experiment's lattice choice; residual diagnostics of the
//! configured fields run on the configured lattice. All random coefficients
//! come from one seeded generator.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use velgauge::fields::{
    action, apply_transformation, lattice_gradients, numeric_dl_dgrad_gauge,
    numeric_dl_dgrad_matter, FieldConfiguration, GaugeField, MatterField, Model, SiteState,
};
use velgauge::kinematics::{
    lambda_analytic, lambda_numeric, GaugeParameterSet, ScalarFunction, VelocityField,
};
use velgauge::lattice::{
    adjoint_rank2_slot, adjoint_vector_slot, matter_vector_slot, rank2_slot, FieldShape, Lattice,
    LatticeField,
};
use velgauge::lie::{builtin_algebra, extract_structure_constants, verify_jacobi, LieAlgebra};
use velgauge::noether::{
    check_conditions, check_conservation, contract_lambda, covariance_defect_richardson,
    current_j1, current_j2, current_j2_mixed, defining_requirement_residual,
    field_equation_residuals, standard_gauge_reduction, strength_f2,
};
use velgauge::report::SuiteReport;
use velgauge::{to_f64, CoreError};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::registry::{assert_record, log_record, window_record};

use num_complex::Complex;

const BUILTINS: [&str; 3] = ["u1", "su2", "su3"];

pub fn suite_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn canonical_lattice() -> Lattice<f64> {
    Lattice::cubic(8, 0.25).unwrap()
}

fn box2pi_lattice(l: usize) -> Lattice<f64> {
    Lattice::cubic(l, 2.0 * std::f64::consts::PI / l as f64).unwrap()
}

// ---------------------------------------------------------------------------
// random field draws
// ---------------------------------------------------------------------------

fn random_harmonic(rng: &mut ChaCha12Rng, base_wave: f64) -> ScalarFunction<f64> {
    let axis = rng.gen_range(0..4usize);
    let mode = rng.gen_range(1..=2) as f64;
    let mut wave = [0.0; 4];
    wave[axis] = base_wave * mode;
    // occasionally mix a second axis in
    if rng.gen_bool(0.35) {
        let other = rng.gen_range(0..4usize);
        wave[other] += base_wave;
    }
    ScalarFunction::harmonic(
        rng.gen_range(-0.3..0.3),
        rng.gen_range(0.3..0.9),
        wave,
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

pub fn random_matter(
    n_rep: usize,
    velocity: &VelocityField<f64>,
    lattice: Lattice<f64>,
    rng: &mut ChaCha12Rng,
) -> MatterField<f64> {
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let components = (0..n_rep)
        .map(|_| (random_harmonic(rng, k), random_harmonic(rng, k)))
        .collect();
    MatterField::from_velocity_functions(components, velocity, lattice)
}

pub fn random_gauge(
    n_adj: usize,
    velocity: &VelocityField<f64>,
    lattice: Lattice<f64>,
    rng: &mut ChaCha12Rng,
) -> GaugeField<f64> {
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let components = (0..n_adj)
        .map(|_| std::array::from_fn(|_| random_harmonic(rng, k)))
        .collect();
    GaugeField::from_functions(components, velocity, lattice)
}

pub fn random_parameters(
    n_adj: usize,
    epsilon: f64,
    rng: &mut ChaCha12Rng,
) -> GaugeParameterSet<f64> {
    let functions = (0..n_adj).map(|_| random_harmonic(rng, 1.0)).collect();
    GaugeParameterSet::new(functions, epsilon)
}

/// Random velocity map: affine near the identity or pure-harmonic
/// components, alternating with the draw.
pub fn random_velocity(lattice: Lattice<f64>, rng: &mut ChaCha12Rng) -> VelocityField<f64> {
    if rng.gen_bool(0.5) {
        let mut m = [[0.0; 4]; 4];
        for (nu, row) in m.iter_mut().enumerate() {
            for (mu, v) in row.iter_mut().enumerate() {
                *v = if nu == mu { 1.0 } else { 0.0 } + rng.gen_range(-0.25..0.25);
            }
        }
        let offset = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        VelocityField::affine(m, offset)
    } else {
        let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
        VelocityField::trigonometric(std::array::from_fn(|_| random_harmonic(rng, k)))
    }
}

/// A fully random configuration for the conservation sweeps.
pub fn random_configuration(
    name: &str,
    lattice: Lattice<f64>,
    epsilon: f64,
    rng: &mut ChaCha12Rng,
    affine_only: bool,
) -> Result<FieldConfiguration<f64>, CoreError> {
    let algebra = builtin_algebra(name)?;
    let velocity = if affine_only {
        let mut m = [[0.0; 4]; 4];
        for (nu, row) in m.iter_mut().enumerate() {
            for (mu, v) in row.iter_mut().enumerate() {
                *v = if nu == mu { 1.0 } else { 0.0 } + rng.gen_range(-0.25..0.25);
            }
        }
        VelocityField::affine(m, std::array::from_fn(|_| rng.gen_range(-0.5..0.5)))
    } else {
        random_velocity(lattice, rng)
    };
    let matter = random_matter(algebra.n_rep(), &velocity, lattice, rng);
    let gauge = random_gauge(algebra.n_adj(), &velocity, lattice, rng);
    let params = random_parameters(algebra.n_adj(), epsilon, rng);
    let coupling = rng.gen_range(0.5..2.0);
    let mass = rng.gen_range(0.5..1.5);
    FieldConfiguration::new(
        algebra, lattice, velocity, matter, gauge, params, coupling, mass,
    )
}

// ---------------------------------------------------------------------------
// canonical (deterministic) configurations for slope and ratio measurements
// ---------------------------------------------------------------------------

fn canonical_matter(
    n_rep: usize,
    k: f64,
    velocity: &VelocityField<f64>,
    lattice: Lattice<f64>,
) -> MatterField<f64> {
    MatterField::from_velocity_functions(
        (0..n_rep)
            .map(|j| {
                let mut wave_re = [0.0; 4];
                wave_re[j % 4] = k;
                let mut wave_im = [0.0; 4];
                wave_im[(j + 2) % 4] = k;
                (
                    ScalarFunction::harmonic(0.3, 0.7, wave_re, 0.2 * j as f64),
                    ScalarFunction::harmonic(-0.1, 0.5, wave_im, 0.4),
                )
            })
            .collect(),
        velocity,
        lattice,
    )
}

fn canonical_gauge(
    n_adj: usize,
    k: f64,
    velocity: &VelocityField<f64>,
    lattice: Lattice<f64>,
) -> GaugeField<f64> {
    GaugeField::from_functions(
        (0..n_adj)
            .map(|alpha| {
                std::array::from_fn(|mu| {
                    let mut wave = [0.0; 4];
                    wave[(mu + alpha + 1) % 4] = k;
                    ScalarFunction::harmonic(
                        0.2 + 0.05 * alpha as f64,
                        0.4 + 0.1 * mu as f64,
                        wave,
                        0.3 * alpha as f64 + 0.1 * mu as f64,
                    )
                })
            })
            .collect(),
        velocity,
        lattice,
    )
}

fn canonical_configuration(
    name: &str,
    lattice: Lattice<f64>,
    params: GaugeParameterSet<f64>,
) -> FieldConfiguration<f64> {
    let algebra = builtin_algebra(name).unwrap();
    let velocity = VelocityField::identity_map();
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let matter = canonical_matter(algebra.n_rep(), k, &velocity, lattice);
    let gauge = canonical_gauge(algebra.n_adj(), k, &velocity, lattice);
    FieldConfiguration::new(algebra, lattice, velocity, matter, gauge, params, 1.0, 1.0).unwrap()
}

// ---------------------------------------------------------------------------
// algebra suite
// ---------------------------------------------------------------------------

/// Structure-constant checks for one algebra.
pub fn algebra_suite_for(algebra: &LieAlgebra<f64>) -> SuiteReport {
    let mut report = SuiteReport::new();
    let name = algebra.name();
    report.push(assert_record(
        "{alg}-commutation",
        name,
        algebra.max_commutation_residual(),
    ));
    report.push(assert_record(
        "{alg}-jacobi",
        name,
        to_f64(verify_jacobi(algebra)),
    ));
    report.push(assert_record(
        "{alg}-total-antisymmetry",
        name,
        to_f64(algebra.constants().total_antisymmetry_residual()),
    ));
    let (re_extracted, _) = extract_structure_constants(algebra.generators()).unwrap();
    let n = algebra.n_adj();
    let mut worst = 0.0f64;
    for gamma in 0..n {
        for alpha in 0..n {
            for beta in 0..n {
                let a = re_extracted.get(gamma, alpha, beta);
                let b = algebra.constants().get(gamma, alpha, beta);
                if a.to_bits() != b.to_bits() {
                    worst = worst.max((a - b).abs().max(f64::MIN_POSITIVE));
                }
            }
        }
    }
    report.push(assert_record("{alg}-extraction-idempotent", name, worst));
    report
}

/// Algebra suite over the builtin set plus, when custom, the configured one.
pub fn algebra_suite(extra: Option<&LieAlgebra<f64>>) -> SuiteReport {
    let mut report = SuiteReport::new();
    for name in BUILTINS {
        report.extend(algebra_suite_for(&builtin_algebra(name).unwrap()));
    }
    if let Some(algebra) = extra {
        if !BUILTINS.contains(&algebra.name()) {
            report.extend(algebra_suite_for(algebra));
        }
    }
    report
}

/// Per-triple Jacobi residual table (`alpha,beta,gamma,max residual over delta`).
pub fn jacobi_table_csv(algebra: &LieAlgebra<f64>) -> String {
    let n = algebra.n_adj();
    let c = algebra.constants();
    let mut out = String::from("alpha,beta,gamma,max_residual\n");
    for alpha in 0..n {
        for beta in 0..n {
            for gamma in 0..n {
                let mut worst = 0.0f64;
                for delta in 0..n {
                    worst = worst.max(to_f64(c.jacobi_term(alpha, beta, gamma, delta).abs()));
                }
                out.push_str(&format!("{alpha},{beta},{gamma},{worst:e}\n"));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// lattice suite
// ---------------------------------------------------------------------------

fn trig_velocity_for(lattice: Lattice<f64>) -> VelocityField<f64> {
    let k1 = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(1));
    let k3 = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(3));
    VelocityField::trigonometric([
        ScalarFunction::harmonic(0.1, 1.0, [0.0, k1, 0.0, 0.0], 0.2),
        ScalarFunction::harmonic(0.0, 0.7, [0.0, 0.0, 0.0, k3], 1.1),
        ScalarFunction::harmonic(-0.2, 1.3, [k1, 0.0, 0.0, 0.0], 0.0),
        ScalarFunction::harmonic(0.4, 0.5, [0.0, 0.0, k1, 0.0], 0.7),
    ])
}

/// Max numeric-vs-analytic λ deviation over all sites.
pub fn lambda_error(velocity: &VelocityField<f64>, lattice: Lattice<f64>) -> f64 {
    let ana = lambda_analytic(velocity, lattice);
    let num = lambda_numeric(velocity, lattice).unwrap();
    to_f64(num.field().max_abs_diff(ana.field()).unwrap())
}

/// Like [`lambda_error`] but restricted to wrap-free interior sites (the
/// affine map is not periodic, so seam sites see the wrap).
pub fn lambda_error_interior(velocity: &VelocityField<f64>, lattice: Lattice<f64>) -> f64 {
    let ana = lambda_analytic(velocity, lattice);
    let num = lambda_numeric(velocity, lattice).unwrap();
    let ext = lattice.extents();
    let mut worst = 0.0f64;
    for site in 0..lattice.site_count() {
        let c = lattice.coords(site);
        if (0..4).any(|a| c[a] == 0 || c[a] == ext[a] - 1) {
            continue;
        }
        for nu in 0..4 {
            for mu in 0..4 {
                worst = worst.max((num.value(site, nu, mu) - ana.value(site, nu, mu)).abs());
            }
        }
    }
    worst
}

fn stencil_error(l: usize, h: f64) -> f64 {
    let lattice = Lattice::new([l, 4, 4, 4], h).unwrap();
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let f = LatticeField::from_real_fn(lattice, FieldShape::Scalar, |site, _| {
        (k * lattice.position(site)[0]).sin()
    });
    let d = f.partial(0).unwrap();
    let mut worst = 0.0f64;
    for site in 0..lattice.site_count() {
        let exact = k * (k * lattice.position(site)[0]).cos();
        worst = worst.max((d.value(site, 0).re - exact).abs());
    }
    worst
}

/// Quick two-resolution convergence checks on canonical grids.
pub fn lattice_suite() -> SuiteReport {
    let mut report = SuiteReport::new();

    let e1 = stencil_error(16, 0.25);
    let e2 = stencil_error(32, 0.125);
    report.push(
        window_record("stencil-order-ratio", "", e1 / e2, 3.6, 4.4)
            .with_note(format!("errors {e1:e} -> {e2:e}")),
    );

    let coarse = canonical_lattice();
    let fine = Lattice::cubic(16, 0.125).unwrap();
    let ratio = lambda_error(&trig_velocity_for(coarse), coarse)
        / lambda_error(&trig_velocity_for(fine), fine);
    report.push(window_record("lambda-convergence-ratio", "", ratio, 3.6, 4.4));

    let affine = VelocityField::affine(
        [
            [0.9, 0.3, -0.2, 0.4],
            [0.2, 1.1, 0.3, -0.1],
            [-0.3, 0.2, 0.8, 0.2],
            [0.1, -0.2, 0.4, 1.2],
        ],
        [0.2, -0.1, 0.3, 0.0],
    );
    let worst = lambda_error_interior(&affine, coarse).max(lambda_error_interior(&affine, fine));
    report.push(assert_record("lambda-affine-exact", "", worst).with_note("exact"));
    report
}

// ---------------------------------------------------------------------------
// fields suite
// ---------------------------------------------------------------------------

/// Log-log slope of |δS|/|S| in ε for constant parameters (canonical
/// configuration of the named algebra).
pub fn global_invariance_slope(name: &str) -> f64 {
    let lattice = canonical_lattice();
    let algebra = builtin_algebra::<f64>(name).unwrap();
    let n_adj = algebra.n_adj();
    let p: Vec<f64> = (0..n_adj).map(|a| 0.3 + 0.2 * a as f64).collect();
    let cfg = canonical_configuration(name, lattice, GaugeParameterSet::constant(p, 1e-3));
    let base = action(&cfg).unwrap();
    let rel = |eps: f64| -> f64 {
        let transformed = apply_transformation(&cfg, eps).unwrap();
        ((action(&transformed).unwrap() - base) / base).abs()
    };
    // least-squares log-log slope over the three amplitudes
    let points: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps: &f64| (eps.log10(), rel(eps).log10()))
        .collect();
    let n = points.len() as f64;
    let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (sxx, sxy): (f64, f64) = points
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// ε-odd action variation ratio between h and h/2 (≈ 4 at second order).
pub fn local_invariance_ratio() -> f64 {
    // identity map, box 2π, harmonic parameters: the ε-odd part of the
    // action variation isolates the O(εh²) discretisation residue
    let variation = |l: usize, eps: f64| -> f64 {
        let lattice = box2pi_lattice(l);
        let params = GaugeParameterSet::new(
            vec![
                ScalarFunction::harmonic(0.2, 0.8, [1.0, 0.0, 0.0, 0.0], 0.3),
                ScalarFunction::harmonic(-0.1, 0.6, [0.0, 1.0, 0.0, 0.0], 0.9),
                ScalarFunction::harmonic(0.3, 0.7, [0.0, 0.0, 1.0, 0.0], 0.0),
            ],
            eps,
        );
        let cfg = canonical_configuration("su2", lattice, params);
        let base = action(&cfg).unwrap();
        let v_plus = action(&apply_transformation(&cfg, eps).unwrap()).unwrap() - base;
        let v_minus = action(&apply_transformation(&cfg, -eps).unwrap()).unwrap() - base;
        // the h⁴ site weight already makes the action comparable across
        // resolutions at fixed box
        (v_plus - v_minus).abs() / 2.0
    };
    let eps = 1e-3;
    variation(8, eps) / variation(16, eps)
}

/// Worst relative deviation of the analytic Lagrangian partials from the
/// site-perturbation probe over 50 seeded (site, slot) draws:
/// `(matter, gauge)`.
pub fn derivative_oracle_worst(seed: u64) -> (f64, f64) {
    let mut rng = suite_rng(seed ^ 0x6f72_6163_6c65);
    let lattice = canonical_lattice();
    let cfg = random_configuration("su2", lattice, 1e-3, &mut rng, false).unwrap();
    let grads = lattice_gradients(&cfg).unwrap();
    let model = Model::of(&cfg);
    let n_rep = cfg.algebra().n_rep();
    let n_adj = cfg.algebra().n_adj();
    let step = 1e-5;

    let mut matter_pairs = Vec::new();
    let mut gauge_pairs = Vec::new();
    for _ in 0..50 {
        let site = rng.gen_range(0..lattice.site_count());
        let s = SiteState::gather(&cfg, &grads, site);
        let analytic_phi = model.dl_dgrad_phi(&s);
        let mu = rng.gen_range(0..4usize);
        let k = rng.gen_range(0..n_rep);
        let numeric = numeric_dl_dgrad_matter(&model, &s, mu, k, step);
        matter_pairs.push((numeric, analytic_phi[matter_vector_slot(mu, k, n_rep)]));

        let analytic_gauge = model.dl_dgrad_gauge(&s);
        let alpha = rng.gen_range(0..n_adj);
        let gmu = rng.gen_range(0..4usize);
        let gnu = rng.gen_range(0..4usize);
        let numeric = numeric_dl_dgrad_gauge(&model, &s, alpha, gmu, gnu, step);
        gauge_pairs.push((numeric, analytic_gauge[adjoint_rank2_slot(alpha, gmu, gnu)]));
    }
    let matter_scale = matter_pairs
        .iter()
        .map(|(_, a)| a.norm())
        .fold(0.0f64, f64::max);
    let matter_worst = matter_pairs
        .iter()
        .map(|(n, a)| (n - a).norm() / a.norm().max(1e-3 * matter_scale))
        .fold(0.0f64, f64::max);
    let gauge_scale = gauge_pairs
        .iter()
        .map(|(_, a)| a.abs())
        .fold(0.0f64, f64::max);
    let gauge_worst = gauge_pairs
        .iter()
        .map(|(n, a)| (n - a).abs() / a.abs().max(1e-3 * gauge_scale))
        .fold(0.0f64, f64::max);
    (matter_worst, gauge_worst)
}

/// Lattice gradient of the sampled gauge field vs the chain rule
/// `(∂^σ̇ D) λ^σ_μ` at one resolution: max componentwise deviation. The
/// velocity map varies along axis 0 only; keeping that axis long makes the
/// inner wavenumber small enough for a clean O(h²) ratio.
pub fn pullback_chain_error(l0: usize, h: f64) -> f64 {
    let lattice = Lattice::new([l0, 4, 4, 4], h).unwrap();
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let velocity = VelocityField::trigonometric(std::array::from_fn(|nu| {
        ScalarFunction::harmonic(0.1 * nu as f64, 0.4 + 0.1 * nu as f64, [k, 0.0, 0.0, 0.0], 0.3 * nu as f64)
    }));
    let gauge = canonical_gauge(3, 1.0, &velocity, lattice);
    let lambda = lambda_analytic(&velocity, lattice);
    let sampled_grad = gauge.samples().gradient().unwrap(); // (α, μ, ν)
    let analytic = gauge.velocity_gradient(&velocity).unwrap(); // (α, σ, ν)
    let mut worst = 0.0f64;
    for site in 0..lattice.site_count() {
        for alpha in 0..3 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut chain = 0.0;
                    for sigma in 0..4 {
                        chain += analytic
                            .value(site, adjoint_rank2_slot(alpha, sigma, nu))
                            .re
                            * lambda.value(site, sigma, mu);
                    }
                    let lat = sampled_grad
                        .value(site, adjoint_rank2_slot(alpha, mu, nu))
                        .re;
                    worst = worst.max((lat - chain).abs());
                }
            }
        }
    }
    worst
}

/// Slope of the forward+backward transformation residual in ε.
pub fn transform_reversal_slope() -> f64 {
    let lattice = canonical_lattice();
    let k = 2.0 * std::f64::consts::PI / to_f64(lattice.box_length(0));
    let params = GaugeParameterSet::new(
        vec![
            ScalarFunction::harmonic(0.2, 0.7, [k, 0.0, 0.0, 0.0], 0.0),
            ScalarFunction::Constant(0.4),
            ScalarFunction::linear(0.3, 2),
        ],
        1e-3,
    );
    let minus = GaugeParameterSet::new(
        params.functions().iter().map(|f| f.negated()).collect(),
        1e-3,
    );
    let cfg = canonical_configuration("su2", lattice, params);
    let residual_at = |eps: f64| -> f64 {
        let there = apply_transformation(&cfg, eps).unwrap();
        let back = apply_transformation(&there.with_params(minus.clone()).unwrap(), eps).unwrap();
        to_f64(
            back.matter()
                .samples()
                .max_abs_diff(cfg.matter().samples())
                .unwrap()
                .max(
                    back.gauge()
                        .samples()
                        .max_abs_diff(cfg.gauge().samples())
                        .unwrap(),
                ),
        )
    };
    (residual_at(1e-2) / residual_at(1e-3)).log10()
}

/// Transformation and Lagrangian-derivative checks.
pub fn fields_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new();
    for name in ["u1", "su2"] {
        report.push(window_record(
            "global-invariance-slope-{alg}",
            name,
            global_invariance_slope(name),
            1.9,
            2.1,
        ));
    }
    report.push(window_record(
        "local-invariance-h-ratio",
        "",
        local_invariance_ratio(),
        3.0,
        5.0,
    ));
    let (matter_worst, gauge_worst) = derivative_oracle_worst(seed);
    report.push(assert_record("derivative-oracle-matter", "", matter_worst));
    report.push(assert_record("derivative-oracle-gauge", "", gauge_worst));
    let ratio = pullback_chain_error(32, 0.25) / pullback_chain_error(64, 0.125);
    report.push(window_record("pullback-chain-ratio", "", ratio, 3.6, 4.4));
    report.push(window_record(
        "transform-reversal-slope",
        "",
        transform_reversal_slope(),
        1.9,
        2.1,
    ));
    report
}

// ---------------------------------------------------------------------------
// noether suite
// ---------------------------------------------------------------------------

/// Worst relative J2 divergence over seeded random configurations.
pub fn conservation_sweep(name: &str, runs: usize, epsilon: f64, seed: u64) -> f64 {
    let mut rng = suite_rng(seed ^ algebra_stream(name));
    let lattice = canonical_lattice();
    let mut worst = 0.0f64;
    for _ in 0..runs {
        let cfg = random_configuration(name, lattice, epsilon, &mut rng, false).unwrap();
        let j2 = current_j2(&cfg).unwrap();
        let stat = check_conservation(&j2.canonical).unwrap();
        worst = worst.max(stat.relative);
    }
    worst
}

// stable per-algebra stream separation
fn algebra_stream(name: &str) -> u64 {
    name.bytes()
        .fold(0xa5a5_5a5a_u64, |acc, b| acc.rotate_left(7) ^ b as u64)
}

/// Worst pointwise relative mixing residual over seeded affine draws.
pub fn mixing_sweep(runs: usize, epsilon: f64, seed: u64) -> f64 {
    let mut rng = suite_rng(seed ^ 0x6d69_7869_6e67);
    let lattice = canonical_lattice();
    let mut worst = 0.0f64;
    for _ in 0..runs {
        let cfg = random_configuration("su2", lattice, epsilon, &mut rng, true).unwrap();
        let j1 = current_j1(&cfg).unwrap();
        let j2m = current_j2_mixed(&cfg).unwrap();
        // independent contraction loop
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for site in 0..lattice.site_count() {
            for alpha in 0..3 {
                for nu in 0..4 {
                    let mut acc = Complex::new(0.0, 0.0);
                    for mu in 0..4 {
                        acc += j1
                            .eq9
                            .field()
                            .value(site, adjoint_vector_slot(alpha, mu))
                            .scale(cfg.lambda().value(site, nu, mu));
                    }
                    let got = j2m.field().value(site, adjoint_vector_slot(alpha, nu));
                    diff = diff.max((got - acc).norm());
                    scale = scale.max(got.norm());
                }
            }
        }
        worst = worst.max(diff / scale.max(1e-300));
    }
    worst
}

/// Richardson-corrected covariance defect slope for su2 (lattices 8/12/24,
/// box 2π, amplitudes of order one).
pub fn covariance_slope() -> f64 {
    let cfg_at = |l: usize, eps: f64| -> FieldConfiguration<f64> {
        let lattice = box2pi_lattice(l);
        let params = GaugeParameterSet::new(
            vec![
                ScalarFunction::harmonic(0.2, 1.5, [1.0, 0.0, 0.0, 0.0], 0.3),
                ScalarFunction::harmonic(-0.1, 1.2, [0.0, 1.0, 0.0, 0.0], 0.9),
                ScalarFunction::harmonic(0.3, 1.0, [0.0, 0.0, 1.0, 0.0], 0.0),
            ],
            eps,
        );
        canonical_configuration("su2", lattice, params)
    };
    let corrected = |eps: f64| {
        covariance_defect_richardson(&cfg_at(8, eps), &cfg_at(12, eps), &cfg_at(24, eps), eps)
            .unwrap()
    };
    (corrected(1e-2) / corrected(1e-3)).log10()
}

/// The u1 zone-boundary plane wave: real alternating wave along axis 0 that
/// solves the discrete free matter equation with `m = 2/h` and carries zero
/// phase current, driving the Eq. (25) residual to rounding level.
pub fn free_wave_eq25_residual() -> f64 {
    let lattice = canonical_lattice();
    let algebra = builtin_algebra("u1").unwrap();
    let h = to_f64(lattice.spacing());
    let phi = LatticeField::from_fn(lattice, FieldShape::Matter { n_rep: 1 }, |site, _| {
        let c = lattice.coords(site)[0];
        Complex::new(if c % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
    });
    let cfg = FieldConfiguration::new(
        algebra,
        lattice,
        VelocityField::identity_map(),
        MatterField::from_samples(phi).unwrap(),
        GaugeField::zero(1, lattice),
        GaugeParameterSet::zero(1, 1e-3),
        1.0,
        2.0 / h,
    )
    .unwrap();
    field_equation_residuals(&cfg).unwrap().eq25.norm
}

/// Residual table of the configured fields (name, norm, relative, h, ε) for
/// `residuals.csv`.
pub fn residual_records(
    cfg: &FieldConfiguration<f64>,
    epsilon: f64,
) -> Vec<velgauge::report::ResidualRecord> {
    let h = to_f64(cfg.lattice().spacing());
    let mut rows = Vec::new();
    let mut push = |name: &str, norm: f64, relative: f64| {
        rows.push(velgauge::report::ResidualRecord {
            name: name.to_string(),
            norm,
            relative,
            spacing: h,
            epsilon,
        });
    };
    let conditions = check_conditions(cfg).unwrap();
    push("eq5", conditions.eq5.norm, conditions.eq5.relative);
    push("eq6a", conditions.eq6a.norm, conditions.eq6a.relative);
    push("eq6b", conditions.eq6b.norm, conditions.eq6b.relative);
    push("eq7a", conditions.eq7a.norm, conditions.eq7a.relative);
    push("eq7b", conditions.eq7b.norm, conditions.eq7b.relative);
    let j1 = current_j1(cfg).unwrap();
    let j1_cons = check_conservation(&j1.eq9).unwrap();
    push("eq12-j1-divergence", j1_cons.norm, j1_cons.relative);
    let j2 = current_j2(cfg).unwrap();
    let j2_cons = check_conservation(&j2.canonical).unwrap();
    push("eq22-j2-divergence", j2_cons.norm, j2_cons.relative);
    let eom = field_equation_residuals(cfg).unwrap();
    push("eq25", eom.eq25.norm, eom.eq25.relative);
    push("eq26", eom.eq26.norm, eom.eq26.relative);
    rows
}

/// Current construction, conservation, covariance and on-shell diagnostics.
/// Sweeps run on canonical lattices; the residual records describe `cfg`.
pub fn noether_suite(cfg: &FieldConfiguration<f64>, seed: u64, epsilon: f64) -> SuiteReport {
    let mut report = SuiteReport::new();

    let f2 = strength_f2(cfg).unwrap();
    report.push(assert_record(
        "f2-antisymmetry",
        "",
        to_f64(f2.antisymmetry_residual()),
    ));

    // the "all elements nonzero" regime and the invertibility reading,
    // reported side by side
    let min_component = to_f64(cfg.lambda().min_abs_component());
    let dets = cfg.lambda().determinants();
    let (det_min, det_max) = dets.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, d| {
        (acc.0.min(*d), acc.1.max(*d))
    });
    report.push(
        log_record("lambda-regime", min_component)
            .with_note(format!("det range [{det_min:e}, {det_max:e}]")),
    );

    for name in BUILTINS {
        report.push(assert_record(
            "j2-conservation-{alg}",
            name,
            conservation_sweep(name, 20, epsilon, seed),
        ));
    }
    report.push(assert_record(
        "mixing-affine",
        "",
        mixing_sweep(10, epsilon, seed),
    ));
    report.push(window_record(
        "covariance-slope-su2",
        "",
        covariance_slope(),
        1.85,
        2.15,
    ));

    // current reality on one seeded generic configuration per algebra
    for name in BUILTINS {
        let mut rng = suite_rng(seed ^ 0x7265_616c);
        let lattice = canonical_lattice();
        let generic = random_configuration(name, lattice, epsilon, &mut rng, false).unwrap();
        let j1 = current_j1(&generic).unwrap();
        let j2 = current_j2(&generic).unwrap();
        let j2m = current_j2_mixed(&generic).unwrap();
        let worst = to_f64(j1.eq9.relative_imaginary())
            .max(to_f64(j2.canonical.relative_imaginary()))
            .max(to_f64(j2m.relative_imaginary()));
        report.push(assert_record("current-reality-{alg}", name, worst));
    }

    // on-shell and cross-check diagnostics of the configured fields
    let conditions = check_conditions(cfg).unwrap();
    report.push(log_record("eq5-residual", conditions.eq5.relative));
    report.push(log_record("eq6a-residual", conditions.eq6a.relative));
    report.push(log_record("eq6b-residual", conditions.eq6b.relative));
    report.push(log_record("eq7a-residual", conditions.eq7a.relative));
    report.push(log_record("eq7b-residual", conditions.eq7b.relative));

    let j1 = current_j1(cfg).unwrap();
    let j1_cons = check_conservation(&j1.eq9).unwrap();
    report.push(log_record("eq12-j1-divergence", j1_cons.relative));
    report.push(log_record(
        "eq15-defining-requirement",
        defining_requirement_residual(cfg).unwrap(),
    ));
    let j2 = current_j2(cfg).unwrap();
    report.push(log_record("eq19-vs-eq20", j2.eq19_vs_canonical()));
    report.push(log_record("eq24-vs-eq20", j2.eq24_vs_canonical()));
    report.push(log_record("eq9-vs-eq23", j1.relative_difference()));

    let eom = field_equation_residuals(cfg).unwrap();
    report.push(log_record("eq25-residual", eom.eq25.relative));
    report.push(log_record("eq26-residual", eom.eq26.relative));
    report.push(log_record("eq25-free-wave", free_wave_eq25_residual()));

    report
}

// ---------------------------------------------------------------------------
// reduction suite
// ---------------------------------------------------------------------------

/// Compare both current families against the independent space-time-gauge
/// reference at identity λ, with generic and velocity-independent gauge
/// fields.
pub fn reduction_suite(seed: u64, epsilon: f64) -> SuiteReport {
    let mut report = SuiteReport::new();
    let lattice = canonical_lattice();
    for name in ["u1", "su2"] {
        let mut rng = suite_rng(seed ^ 0x7265_6475_6365);
        let algebra = builtin_algebra(name).unwrap();
        let velocity = VelocityField::identity_map();
        let mut worst_j1 = 0.0f64;
        let mut worst_j2 = 0.0f64;
        let mut lambda_dev = 0.0f64;
        for constant_gauge in [false, true] {
            let matter = random_matter(algebra.n_rep(), &velocity, lattice, &mut rng);
            let gauge = if constant_gauge {
                let values = (0..algebra.n_adj())
                    .map(|_| std::array::from_fn(|_| rng.gen_range(-0.8..0.8)))
                    .collect();
                GaugeField::constant(values, lattice)
            } else {
                random_gauge(algebra.n_adj(), &velocity, lattice, &mut rng)
            };
            let cfg = FieldConfiguration::new(
                algebra.clone(),
                lattice,
                velocity.clone(),
                matter,
                gauge,
                GaugeParameterSet::zero(algebra.n_adj(), epsilon),
                1.0,
                1.0,
            )
            .unwrap();
            let outcome = standard_gauge_reduction(&cfg).unwrap();
            worst_j1 = worst_j1.max(outcome.j1_deviation);
            worst_j2 = worst_j2.max(outcome.j2_deviation);
            lambda_dev = lambda_dev.max(outcome.lambda_deviation);
        }
        report.push(assert_record("reduction-j1-{alg}", name, worst_j1));
        report.push(assert_record("reduction-j2-{alg}", name, worst_j2));
        report.push(log_record("reduction-regime-flag", lambda_dev).with_note(format!(
            "{name}: identity lambda, generic and velocity-independent gauge"
        )));
    }
    report
}

// ---------------------------------------------------------------------------
// convergence suite
// ---------------------------------------------------------------------------

/// Error-ratio table across a resolution ladder at fixed physical box.
/// O(h²) ratio windows generalise to `(r₂/r₁)² ± 10%` for non-halving steps.
pub fn convergence_suite(
    config: &ExperimentConfig,
    resolutions: &[usize],
) -> Result<SuiteReport, CliError> {
    if resolutions.len() < 2 {
        return Err(CliError::Config(
            "convergence needs at least 2 resolutions (e.g. --resolutions 8,16)".to_string(),
        ));
    }
    for &r in resolutions {
        if r < Lattice::<f64>::MIN_EXTENT {
            return Err(CliError::Config(format!(
                "resolution {r} is below the minimum extent 4"
            )));
        }
    }
    let box_length = config.lattice.extents[0] as f64 * config.lattice.spacing;
    let lattice_at = |r: usize| Lattice::cubic(r, box_length / r as f64).map_err(CliError::from);

    let velocity_spec = config.velocity.clone();
    let mut report = SuiteReport::new();
    for pair in resolutions.windows(2) {
        let (r1, r2) = (pair[0], pair[1]);
        let lat1 = lattice_at(r1)?;
        let lat2 = lattice_at(r2)?;
        let expected = (r2 as f64 / r1 as f64).powi(2);
        let (lo, hi) = (0.9 * expected, 1.1 * expected);
        let note = format!("resolutions {r1}/{r2}");

        // velocity-field convergence: configured family when given,
        // canonical trigonometric otherwise
        let affine = match &velocity_spec {
            Some(spec) => {
                let v = spec.build()?;
                matches!(
                    v.family(),
                    velgauge::kinematics::VelocityFamily::Affine
                )
            }
            None => false,
        };
        if affine {
            let v = velocity_spec.as_ref().unwrap().build()?;
            let worst = lambda_error_interior(&v, lat1).max(lambda_error_interior(&v, lat2));
            report.push(
                assert_record("lambda-affine-exact", "", worst)
                    .with_note(format!("{note}; exact, ratio skipped")),
            );
        } else {
            let e1 = lambda_error(&trig_velocity_for(lat1), lat1);
            let e2 = lambda_error(&trig_velocity_for(lat2), lat2);
            report.push(
                window_record("lambda-convergence-ratio", "", e1 / e2, lo, hi).with_note(note.clone()),
            );
        }

        let s1 = stencil_error(r1 * 2, box_length / (2 * r1) as f64);
        let s2 = stencil_error(r2 * 2, box_length / (2 * r2) as f64);
        report.push(
            window_record("stencil-order-ratio", "", s1 / s2, lo, hi).with_note(note.clone()),
        );

        let p1 = pullback_chain_error(r1 * 4, box_length / (r1 * 4) as f64);
        let p2 = pullback_chain_error(r2 * 4, box_length / (r2 * 4) as f64);
        report.push(window_record("pullback-chain-ratio", "", p1 / p2, lo, hi).with_note(note));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// full run
// ---------------------------------------------------------------------------

/// Execute the selected suites in dependency order.
pub fn run_suites(
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(SuiteReport, FieldConfiguration<f64>), CliError> {
    let cfg = config.build_configuration(seed)?;
    let mut report = SuiteReport::new();
    for suite in config.selected_suites() {
        match suite {
            "algebra" => report.extend(algebra_suite(Some(cfg.algebra()))),
            "lattice" => report.extend(lattice_suite()),
            "fields" => report.extend(fields_suite(seed)),
            "noether" => report.extend(noether_suite(&cfg, seed, config.epsilon)),
            "reduction" => report.extend(reduction_suite(seed, config.epsilon)),
            _ => unreachable!("validated suite name"),
        }
    }
    Ok((report, cfg))
}

/// λ-mixing helper used by tests: contract a current with λ.
pub fn lambda_contract_current(
    field: &LatticeField<f64>,
    cfg: &FieldConfiguration<f64>,
) -> LatticeField<f64> {
    contract_lambda(field, cfg.lambda())
}

/// Expose the lambda rank-2 slot helper for snapshot tooling.
pub fn lambda_slot(nu: usize, mu: usize) -> usize {
    rank2_slot(nu, mu)
}
