//! Matter and gauge fields, their infinitesimal gauge transformations, and a
//! concrete gauge-invariant model Lagrangian with analytic derivative
//! formulas.
//!
//! The model Lagrangian is a minimally coupled complex scalar plus a
//! quadratic strength term,
//!
//! ```text
//! L = Σ_μ (D̂_μφ)†(D̂_μφ) − m² φ†φ − ¼ Σ_{α,μ,ν} F⁽²⁾_α^{μν} F⁽²⁾_α^{μν}
//! ```
//!
//! with `D̂_μφ = ∂_μφ + i g A_μ,α T_α φ` built on the composite connection
//! `A_μ,α = D_ρ̇,α(ẋ(x)) λ^ρ_μ(x)`. It is the smallest model that exercises
//! both derivative partials `∂L/∂(∂φ)` and `∂L/∂(∂D)` that the current
//! formulas need.
//!
//! Two conventions used throughout:
//!
//! * Commutator-descended contractions `±i g C^γ_{αβ} X_β Y_γ` of real
//!   adjoint fields carry the commutator's own factor of i through
//!   `[T_α,T_β] = iC^γ_{αβ}T_γ`, so they enter the real component formulas
//!   as `∓ g Σ C^γ_{αβ} X_β Y_γ` with the sign fixed by the isovector
//!   transformation law; the covariance checks verify the choice numerically.
//! * Sums over matter components always include the conjugate field as an
//!   independent partner (`∂L/∂(∂φ*) = D̂φ`, transforming with `−T*`), which
//!   is what makes every physical current real.

use num_complex::Complex;
use num_traits::Zero;

use crate::kinematics::{
    evaluate_parameters, lambda_analytic, lambda_grad_analytic, GaugeParameterSet, LambdaField,
    ScalarFunction, VelocityField,
};
use crate::lattice::{
    adjoint_rank2_slot, adjoint_vector_slot, matter_vector_slot, rank3_slot, FieldShape, Lattice,
    LatticeField,
};
use crate::lie::LieAlgebra;
use crate::{error::CoreError, lit, to_f64, Real};

/// Matter multiplet `φ_k`, `k = 1..n`: complex lattice samples, optionally
/// backed by closed-form functions of the velocity coordinates.
#[derive(Debug, Clone)]
pub struct MatterField<T> {
    samples: LatticeField<T>,
    /// `(re, im)` component functions of ẋ when in closed-form mode.
    functions: Option<Vec<(ScalarFunction<T>, ScalarFunction<T>)>>,
}

impl<T: Real> MatterField<T> {
    /// Closed-form mode: `φ_k(ẋ(x))` sampled sitewise.
    pub fn from_velocity_functions(
        functions: Vec<(ScalarFunction<T>, ScalarFunction<T>)>,
        velocity: &VelocityField<T>,
        lattice: Lattice<T>,
    ) -> Self {
        let n_rep = functions.len();
        let samples = LatticeField::from_fn(lattice, FieldShape::Matter { n_rep }, |site, k| {
            let xdot = velocity.eval(lattice.position(site));
            Complex::new(functions[k].0.eval(xdot), functions[k].1.eval(xdot))
        });
        Self {
            samples,
            functions: Some(functions),
        }
    }

    /// Sample closed forms of the space-time coordinates directly.
    pub fn from_spacetime_functions(
        functions: &[(ScalarFunction<T>, ScalarFunction<T>)],
        lattice: Lattice<T>,
    ) -> Self {
        let n_rep = functions.len();
        let samples = LatticeField::from_fn(lattice, FieldShape::Matter { n_rep }, |site, k| {
            let x = lattice.position(site);
            Complex::new(functions[k].0.eval(x), functions[k].1.eval(x))
        });
        Self {
            samples,
            functions: None,
        }
    }

    /// Raw lattice-data mode.
    pub fn from_samples(samples: LatticeField<T>) -> Result<Self, CoreError> {
        match samples.shape() {
            FieldShape::Matter { .. } => Ok(Self {
                samples,
                functions: None,
            }),
            other => Err(CoreError::ShapeMismatch {
                expected: "Matter".to_string(),
                found: format!("{other:?}"),
            }),
        }
    }

    pub fn zero(n_rep: usize, lattice: Lattice<T>) -> Self {
        Self {
            samples: LatticeField::zeros(lattice, FieldShape::Matter { n_rep }),
            functions: None,
        }
    }

    pub fn n_rep(&self) -> usize {
        match self.samples.shape() {
            FieldShape::Matter { n_rep } => n_rep,
            _ => unreachable!(),
        }
    }

    pub fn samples(&self) -> &LatticeField<T> {
        &self.samples
    }

    /// Max deviation between the stored samples and a fresh pullback of the
    /// closed forms; `None` in lattice-data mode.
    pub fn consistency_residual(&self, velocity: &VelocityField<T>) -> Option<T> {
        let functions = self.functions.as_ref()?;
        let lattice = *self.samples.lattice();
        let fresh = Self::from_velocity_functions(functions.clone(), velocity, lattice);
        Some(self.samples.max_abs_diff(&fresh.samples).unwrap())
    }
}

/// Velocity-space gauge field `D_μ̇,α`: real sitewise samples of the pullback
/// `D(ẋ(x))`, optionally backed by closed-form component functions.
#[derive(Debug, Clone)]
pub struct GaugeField<T> {
    samples: LatticeField<T>,
    functions: Option<Vec<[ScalarFunction<T>; 4]>>,
    velocity_independent: bool,
}

impl<T: Real> GaugeField<T> {
    /// Closed-form mode: `components[α][μ̇]` are functions of ẋ.
    pub fn from_functions(
        components: Vec<[ScalarFunction<T>; 4]>,
        velocity: &VelocityField<T>,
        lattice: Lattice<T>,
    ) -> Self {
        let n_adj = components.len();
        let velocity_independent = components
            .iter()
            .flatten()
            .all(|f| matches!(f, ScalarFunction::Constant(_)));
        let samples = LatticeField::from_real_fn(
            lattice,
            FieldShape::AdjointVector { n_adj },
            |site, slot| {
                let xdot = velocity.eval(lattice.position(site));
                components[slot / 4][slot % 4].eval(xdot)
            },
        );
        Self {
            samples,
            functions: Some(components),
            velocity_independent,
        }
    }

    /// The velocity-independent limit: `D` constant in ẋ (hence uniform).
    pub fn constant(values: Vec<[T; 4]>, lattice: Lattice<T>) -> Self {
        let components: Vec<[ScalarFunction<T>; 4]> = values
            .iter()
            .map(|row| std::array::from_fn(|mu| ScalarFunction::Constant(row[mu])))
            .collect();
        let n_adj = components.len();
        let samples = LatticeField::from_real_fn(
            lattice,
            FieldShape::AdjointVector { n_adj },
            |_, slot| values[slot / 4][slot % 4],
        );
        Self {
            samples,
            functions: Some(components),
            velocity_independent: true,
        }
    }

    pub fn zero(n_adj: usize, lattice: Lattice<T>) -> Self {
        Self {
            samples: LatticeField::zeros(lattice, FieldShape::AdjointVector { n_adj }),
            functions: None,
            velocity_independent: true,
        }
    }

    /// Raw lattice-data mode (the state after a transformation).
    pub fn from_samples(samples: LatticeField<T>) -> Result<Self, CoreError> {
        match samples.shape() {
            FieldShape::AdjointVector { .. } => Ok(Self {
                samples,
                functions: None,
                velocity_independent: false,
            }),
            other => Err(CoreError::ShapeMismatch {
                expected: "AdjointVector".to_string(),
                found: format!("{other:?}"),
            }),
        }
    }

    pub fn n_adj(&self) -> usize {
        match self.samples.shape() {
            FieldShape::AdjointVector { n_adj } => n_adj,
            _ => unreachable!(),
        }
    }

    pub fn samples(&self) -> &LatticeField<T> {
        &self.samples
    }

    pub fn velocity_independent(&self) -> bool {
        self.velocity_independent
    }

    /// Analytic velocity-space gradient `∂^σ̇ D_ν̇,α` pulled back to sites,
    /// shape `(α, σ, ν)`; `None` in lattice-data mode.
    pub fn velocity_gradient(&self, velocity: &VelocityField<T>) -> Option<LatticeField<T>> {
        let components = self.functions.as_ref()?;
        let n_adj = components.len();
        let lattice = *self.samples.lattice();
        Some(LatticeField::from_real_fn(
            lattice,
            FieldShape::AdjointRank2 { n_adj },
            |site, slot| {
                let xdot = velocity.eval(lattice.position(site));
                let alpha = slot / 16;
                let sigma = (slot / 4) % 4;
                let nu = slot % 4;
                components[alpha][nu].grad(xdot)[sigma]
            },
        ))
    }

    pub fn consistency_residual(&self, velocity: &VelocityField<T>) -> Option<T> {
        let functions = self.functions.as_ref()?;
        let lattice = *self.samples.lattice();
        let fresh = Self::from_functions(functions.clone(), velocity, lattice);
        Some(self.samples.max_abs_diff(&fresh.samples).unwrap())
    }
}

/// Everything a Lagrangian evaluation needs: algebra, lattice, velocity map,
/// λ and its analytic gradient, matter/gauge fields, gauge parameters, the
/// composite connection, coupling and mass.
#[derive(Debug, Clone)]
pub struct FieldConfiguration<T> {
    algebra: LieAlgebra<T>,
    lattice: Lattice<T>,
    velocity: VelocityField<T>,
    lambda: LambdaField<T>,
    lambda_grad: LatticeField<T>,
    matter: MatterField<T>,
    gauge: GaugeField<T>,
    params: GaugeParameterSet<T>,
    param_values: LatticeField<T>,
    param_grads: LatticeField<T>,
    connection: LatticeField<T>,
    coupling: T,
    mass: T,
}

impl<T: Real> FieldConfiguration<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        algebra: LieAlgebra<T>,
        lattice: Lattice<T>,
        velocity: VelocityField<T>,
        matter: MatterField<T>,
        gauge: GaugeField<T>,
        params: GaugeParameterSet<T>,
        coupling: T,
        mass: T,
    ) -> Result<Self, CoreError> {
        if coupling <= T::zero() {
            return Err(CoreError::NonPositiveCoupling {
                value: to_f64(coupling),
            });
        }
        if mass < T::zero() {
            return Err(CoreError::NegativeMass {
                value: to_f64(mass),
            });
        }
        if matter.n_rep() != algebra.n_rep() {
            return Err(CoreError::RepresentationMismatch {
                expected: algebra.n_rep(),
                found: matter.n_rep(),
            });
        }
        if gauge.n_adj() != algebra.n_adj() {
            return Err(CoreError::AdjointMismatch {
                expected: algebra.n_adj(),
                found: gauge.n_adj(),
            });
        }
        if params.n_adj() != algebra.n_adj() {
            return Err(CoreError::AdjointMismatch {
                expected: algebra.n_adj(),
                found: params.n_adj(),
            });
        }
        if *matter.samples().lattice() != lattice || *gauge.samples().lattice() != lattice {
            return Err(CoreError::LatticeMismatch);
        }
        let lambda = lambda_analytic(&velocity, lattice);
        let lambda_grad = lambda_grad_analytic(&velocity, lattice);
        let (param_values, param_grads) = evaluate_parameters(&params, &velocity, lattice);
        let connection = compose_connection(&gauge, &lambda)?;
        Ok(Self {
            algebra,
            lattice,
            velocity,
            lambda,
            lambda_grad,
            matter,
            gauge,
            params,
            param_values,
            param_grads,
            connection,
            coupling,
            mass,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.algebra
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn velocity(&self) -> &VelocityField<T> {
        &self.velocity
    }

    pub fn lambda(&self) -> &LambdaField<T> {
        &self.lambda
    }

    /// Analytic `∂_ρ λ^ν_μ` (rank-3, `(ρ, ν, μ)`).
    pub fn lambda_grad(&self) -> &LatticeField<T> {
        &self.lambda_grad
    }

    pub fn matter(&self) -> &MatterField<T> {
        &self.matter
    }

    pub fn gauge(&self) -> &GaugeField<T> {
        &self.gauge
    }

    pub fn params(&self) -> &GaugeParameterSet<T> {
        &self.params
    }

    /// `p_α(ẋ(x))`, unscaled by ε (Adjoint shape).
    pub fn param_values(&self) -> &LatticeField<T> {
        &self.param_values
    }

    /// `∂^ρ̇ p_α(ẋ(x))`, unscaled by ε (`(α, ρ)` shape).
    pub fn param_grads(&self) -> &LatticeField<T> {
        &self.param_grads
    }

    /// The composite connection `A_μ,α = D_ρ̇,α λ^ρ_μ` (`(α, μ)` shape).
    pub fn connection(&self) -> &LatticeField<T> {
        &self.connection
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// Replace gauge parameters (same algebra dimension).
    pub fn with_params(&self, params: GaugeParameterSet<T>) -> Result<Self, CoreError> {
        if params.n_adj() != self.algebra.n_adj() {
            return Err(CoreError::AdjointMismatch {
                expected: self.algebra.n_adj(),
                found: params.n_adj(),
            });
        }
        let (param_values, param_grads) =
            evaluate_parameters(&params, &self.velocity, self.lattice);
        let mut next = self.clone();
        next.params = params;
        next.param_values = param_values;
        next.param_grads = param_grads;
        Ok(next)
    }

    /// Rebuild the connection from its constituents (bitwise reproducible).
    pub fn recompute_connection(&self) -> Result<LatticeField<T>, CoreError> {
        compose_connection(&self.gauge, &self.lambda)
    }
}

/// `A_μ,α(x) = Σ_ρ D_ρ̇,α(x) λ^ρ_μ(x)`.
fn compose_connection<T: Real>(
    gauge: &GaugeField<T>,
    lambda: &LambdaField<T>,
) -> Result<LatticeField<T>, CoreError> {
    if gauge.samples().lattice() != lambda.lattice() {
        return Err(CoreError::LatticeMismatch);
    }
    let n_adj = gauge.n_adj();
    let lattice = *lambda.lattice();
    Ok(LatticeField::from_real_fn(
        lattice,
        FieldShape::AdjointVector { n_adj },
        |site, slot| {
            let alpha = slot / 4;
            let mu = slot % 4;
            let mut acc = T::zero();
            for rho in 0..4 {
                acc = acc
                    + gauge
                        .samples()
                        .value(site, adjoint_vector_slot(alpha, rho))
                        .re
                        * lambda.value(site, rho, mu);
            }
            acc
        },
    ))
}

/// Matter transformation increment `δφ_k = −i ε p_α(ẋ) (T_α)_{kl} φ_l`.
pub fn transform_matter<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<LatticeField<T>, CoreError> {
    matter_increment(cfg, cfg.params.epsilon())
}

/// Gauge transformation increment
/// `δD_μ,α = ε [ (1/g) ∂^ρ̇p_α λ^ρ_μ + C^γ_{αβ} p_β D_μ̇,γ ]`.
pub fn transform_gauge<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<LatticeField<T>, CoreError> {
    gauge_increment(cfg, cfg.params.epsilon())
}

fn matter_increment<T: Real>(
    cfg: &FieldConfiguration<T>,
    eps: T,
) -> Result<LatticeField<T>, CoreError> {
    let n_rep = cfg.algebra.n_rep();
    let n_adj = cfg.algebra.n_adj();
    let minus_i_eps = Complex::new(T::zero(), -eps);
    let mut out = LatticeField::zeros(cfg.lattice, FieldShape::Matter { n_rep });
    for site in 0..cfg.lattice.site_count() {
        let phi = cfg.matter.samples().site(site).to_vec();
        let mut acc = vec![Complex::<T>::zero(); n_rep];
        for alpha in 0..n_adj {
            let p = cfg.param_values.value(site, alpha).re;
            if p == T::zero() {
                continue;
            }
            let tphi = cfg.algebra.generator(alpha).mul_vec(&phi);
            for k in 0..n_rep {
                acc[k] = acc[k] + tphi[k].scale(p);
            }
        }
        for k in 0..n_rep {
            out.set_value(site, k, acc[k] * minus_i_eps);
        }
    }
    Ok(out)
}

fn gauge_increment<T: Real>(
    cfg: &FieldConfiguration<T>,
    eps: T,
) -> Result<LatticeField<T>, CoreError> {
    let n_adj = cfg.algebra.n_adj();
    let inv_g = T::one() / cfg.coupling;
    let constants = cfg.algebra.constants();
    let mut out = LatticeField::zeros(cfg.lattice, FieldShape::AdjointVector { n_adj });
    let mut p = vec![T::zero(); n_adj];
    let mut d_col = vec![T::zero(); n_adj];
    for site in 0..cfg.lattice.site_count() {
        for (alpha, slot) in p.iter_mut().enumerate() {
            *slot = cfg.param_values.value(site, alpha).re;
        }
        for mu in 0..4 {
            for gamma in 0..n_adj {
                d_col[gamma] = cfg
                    .gauge
                    .samples()
                    .value(site, adjoint_vector_slot(gamma, mu))
                    .re;
            }
            for alpha in 0..n_adj {
                let mut inhomogeneous = T::zero();
                for rho in 0..4 {
                    inhomogeneous = inhomogeneous
                        + cfg
                            .param_grads
                            .value(site, adjoint_vector_slot(alpha, rho))
                            .re
                            * cfg.lambda.value(site, rho, mu);
                }
                let homogeneous = constants.cross(alpha, &p, &d_col);
                let delta = eps * (inv_g * inhomogeneous + homogeneous);
                out.set_value(
                    site,
                    adjoint_vector_slot(alpha, mu),
                    Complex::new(delta, T::zero()),
                );
            }
        }
    }
    Ok(out)
}

/// Apply the infinitesimal transformation at amplitude `ε` (small, ≤ 0.1
/// recommended; the increments are first order only): returns a new
/// configuration with `φ += δφ`, `D += δD` in lattice-data mode; the input
/// is untouched.
pub fn apply_transformation<T: Real>(
    cfg: &FieldConfiguration<T>,
    eps: T,
) -> Result<FieldConfiguration<T>, CoreError> {
    let dphi = matter_increment(cfg, eps)?;
    let dgauge = gauge_increment(cfg, eps)?;
    let matter = MatterField::from_samples(cfg.matter.samples().add(&dphi)?)?;
    let gauge = GaugeField::from_samples(cfg.gauge.samples().add(&dgauge)?)?;
    let connection = compose_connection(&gauge, &cfg.lambda)?;
    let mut next = cfg.clone();
    next.matter = matter;
    next.gauge = gauge;
    next.connection = connection;
    Ok(next)
}

/// Per-site inputs of the model Lagrangian. `grad_gauge` holds the
/// space-time derivative of the pulled-back gauge field, `∂_μ D_ν̇,α`, as an
/// independent variable; the connection gradient is assembled from it by the
/// chain rule `∂_μ A_ν = (∂_μ D_ρ̇) λ^ρ_ν + D_ρ̇ ∂_μ λ^ρ_ν`.
#[derive(Debug, Clone)]
pub struct SiteState<T> {
    /// `φ_k`.
    pub phi: Vec<Complex<T>>,
    /// `∂_μ φ_k`, slots `(μ, k)`.
    pub grad_phi: Vec<Complex<T>>,
    /// `D_ν̇,α`, slots `(α, ν)`.
    pub gauge: Vec<T>,
    /// `∂_μ D_ν̇,α`, slots `(α, μ, ν)`.
    pub grad_gauge: Vec<T>,
    /// `λ^ν_μ`, indexed `[ν][μ]`.
    pub lambda: [[T; 4]; 4],
    /// `∂_ρ λ^ν_μ`, indexed `[ρ][ν][μ]`.
    pub grad_lambda: [[[T; 4]; 4]; 4],
}

/// Lattice gradients of the dynamical fields, computed once per sweep.
#[derive(Debug, Clone)]
pub struct ConfigGradients<T> {
    /// `∂_μ φ_k` (`MatterVector`).
    pub grad_phi: LatticeField<T>,
    /// `∂_μ D_ν̇,α` (`AdjointRank2`, `(α, μ, ν)`).
    pub grad_gauge: LatticeField<T>,
}

/// Central-difference gradients of the matter and gauge samples.
pub fn lattice_gradients<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<ConfigGradients<T>, CoreError> {
    Ok(ConfigGradients {
        grad_phi: cfg.matter.samples().gradient()?,
        grad_gauge: cfg.gauge.samples().gradient()?,
    })
}

impl<T: Real> SiteState<T> {
    pub fn gather(cfg: &FieldConfiguration<T>, grads: &ConfigGradients<T>, site: usize) -> Self {
        let gauge = cfg
            .gauge
            .samples()
            .site(site)
            .iter()
            .map(|v| v.re)
            .collect();
        let grad_gauge = grads.grad_gauge.site(site).iter().map(|v| v.re).collect();
        let mut lambda = [[T::zero(); 4]; 4];
        let mut grad_lambda = [[[T::zero(); 4]; 4]; 4];
        for nu in 0..4 {
            for mu in 0..4 {
                lambda[nu][mu] = cfg.lambda.value(site, nu, mu);
                for rho in 0..4 {
                    grad_lambda[rho][nu][mu] =
                        cfg.lambda_grad.value(site, rank3_slot(rho, nu, mu)).re;
                }
            }
        }
        Self {
            phi: cfg.matter.samples().site(site).to_vec(),
            grad_phi: grads.grad_phi.site(site).to_vec(),
            gauge,
            grad_gauge,
            lambda,
            grad_lambda,
        }
    }
}

/// The model Lagrangian bound to an algebra, coupling and mass.
#[derive(Debug, Clone, Copy)]
pub struct Model<'a, T> {
    pub algebra: &'a LieAlgebra<T>,
    pub coupling: T,
    pub mass: T,
}

impl<'a, T: Real> Model<'a, T> {
    pub fn of(cfg: &'a FieldConfiguration<T>) -> Self {
        Self {
            algebra: cfg.algebra(),
            coupling: cfg.coupling(),
            mass: cfg.mass(),
        }
    }

    /// `A_μ,α = Σ_ρ D_ρ̇,α λ^ρ_μ`, slots `(α, μ)`.
    pub fn connection(&self, s: &SiteState<T>) -> Vec<T> {
        let n_adj = self.algebra.n_adj();
        let mut a = vec![T::zero(); n_adj * 4];
        for alpha in 0..n_adj {
            for mu in 0..4 {
                let mut acc = T::zero();
                for rho in 0..4 {
                    acc = acc + s.gauge[adjoint_vector_slot(alpha, rho)] * s.lambda[rho][mu];
                }
                a[adjoint_vector_slot(alpha, mu)] = acc;
            }
        }
        a
    }

    /// `∂_μ A_ν,α` by the chain rule, slots `(α, μ, ν)`.
    pub fn connection_gradient(&self, s: &SiteState<T>) -> Vec<T> {
        let n_adj = self.algebra.n_adj();
        let mut da = vec![T::zero(); n_adj * 16];
        for alpha in 0..n_adj {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut acc = T::zero();
                    for rho in 0..4 {
                        acc = acc
                            + s.grad_gauge[adjoint_rank2_slot(alpha, mu, rho)] * s.lambda[rho][nu]
                            + s.gauge[adjoint_vector_slot(alpha, rho)]
                                * s.grad_lambda[mu][rho][nu];
                    }
                    da[adjoint_rank2_slot(alpha, mu, nu)] = acc;
                }
            }
        }
        da
    }

    /// `F⁽²⁾_α^{μν} = ∂_ν A_μ,α − ∂_μ A_ν,α + g Σ C^γ_{αβ} A_μ,β A_ν,γ`,
    /// slots `(α, μ, ν)`; real by the bookkept contraction.
    pub fn f2(&self, s: &SiteState<T>) -> Vec<T> {
        let a = self.connection(s);
        let da = self.connection_gradient(s);
        self.f2_from_parts(&a, &da)
    }

    /// `F⁽²⁾` from an explicit connection and connection gradient.
    pub fn f2_from_parts(&self, a: &[T], da: &[T]) -> Vec<T> {
        let n_adj = self.algebra.n_adj();
        let constants = self.algebra.constants();
        let g = self.coupling;
        let mut f2 = vec![T::zero(); n_adj * 16];
        let mut col_mu = vec![T::zero(); n_adj];
        let mut col_nu = vec![T::zero(); n_adj];
        for mu in 0..4 {
            for nu in (mu + 1)..4 {
                for beta in 0..n_adj {
                    col_mu[beta] = a[adjoint_vector_slot(beta, mu)];
                    col_nu[beta] = a[adjoint_vector_slot(beta, nu)];
                }
                for alpha in 0..n_adj {
                    let curl = da[adjoint_rank2_slot(alpha, nu, mu)]
                        - da[adjoint_rank2_slot(alpha, mu, nu)];
                    let cross = constants.cross(alpha, &col_mu, &col_nu);
                    let v = curl + g * cross;
                    f2[adjoint_rank2_slot(alpha, mu, nu)] = v;
                    f2[adjoint_rank2_slot(alpha, nu, mu)] = -v;
                }
            }
        }
        f2
    }

    /// `D̂_μφ_k = ∂_μφ_k + i g A_μ,α (T_α φ)_k`, slots `(μ, k)`.
    pub fn covariant_grad_phi(&self, s: &SiteState<T>, a: &[T]) -> Vec<Complex<T>> {
        let n_rep = self.algebra.n_rep();
        let n_adj = self.algebra.n_adj();
        let ig = Complex::new(T::zero(), self.coupling);
        let mut out = s.grad_phi.clone();
        for alpha in 0..n_adj {
            let tphi = self.algebra.generator(alpha).mul_vec(&s.phi);
            for mu in 0..4 {
                let coeff = ig.scale(a[adjoint_vector_slot(alpha, mu)]);
                for k in 0..n_rep {
                    let slot = matter_vector_slot(mu, k, n_rep);
                    out[slot] = out[slot] + tphi[k] * coeff;
                }
            }
        }
        out
    }

    /// The model Lagrangian density at one site.
    pub fn lagrangian(&self, s: &SiteState<T>) -> T {
        let n_rep = self.algebra.n_rep();
        let a = self.connection(s);
        let da = self.connection_gradient(s);
        let f2 = self.f2_from_parts(&a, &da);
        let dhat = self.covariant_grad_phi(s, &a);

        let mut kinetic = T::zero();
        for v in &dhat {
            kinetic = kinetic + v.norm_sqr();
        }
        let mut mass_term = T::zero();
        for k in 0..n_rep {
            mass_term = mass_term + s.phi[k].norm_sqr();
        }
        let mut strength = T::zero();
        for v in &f2 {
            strength = strength + *v * *v;
        }
        kinetic - self.mass * self.mass * mass_term - lit::<T>(0.25) * strength
    }

    /// Analytic `∂L/∂(∂_μφ_k) = (D̂_μφ_k)*`, slots `(μ, k)`.
    pub fn dl_dgrad_phi(&self, s: &SiteState<T>) -> Vec<Complex<T>> {
        let a = self.connection(s);
        self.covariant_grad_phi(s, &a)
            .into_iter()
            .map(|v| v.conj())
            .collect()
    }

    /// Analytic `∂L/∂(∂_μ D_ν̇,α) = Σ_σ F⁽²⁾_α^{μσ} λ^ν_σ`, slots `(α, μ, ν)`.
    pub fn dl_dgrad_gauge(&self, s: &SiteState<T>) -> Vec<T> {
        let f2 = self.f2(s);
        self.dl_dgrad_gauge_from_f2(&f2, s)
    }

    pub fn dl_dgrad_gauge_from_f2(&self, f2: &[T], s: &SiteState<T>) -> Vec<T> {
        let n_adj = self.algebra.n_adj();
        let mut out = vec![T::zero(); n_adj * 16];
        for alpha in 0..n_adj {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut acc = T::zero();
                    for sigma in 0..4 {
                        acc =
                            acc + f2[adjoint_rank2_slot(alpha, mu, sigma)] * s.lambda[nu][sigma];
                    }
                    out[adjoint_rank2_slot(alpha, mu, nu)] = acc;
                }
            }
        }
        out
    }
}

/// `L(x)` sampled over the lattice (real scalar field).
pub fn lagrangian_density<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<LatticeField<T>, CoreError> {
    let grads = lattice_gradients(cfg)?;
    let model = Model::of(cfg);
    let mut out = LatticeField::zeros(cfg.lattice, FieldShape::Scalar);
    for site in 0..cfg.lattice.site_count() {
        let s = SiteState::gather(cfg, &grads, site);
        out.set_value(site, 0, Complex::new(model.lagrangian(&s), T::zero()));
    }
    Ok(out)
}

/// Total action `Σ_x L(x) · h⁴`.
pub fn action<T: Real>(cfg: &FieldConfiguration<T>) -> Result<T, CoreError> {
    let density = lagrangian_density(cfg)?;
    let h = cfg.lattice.spacing();
    let h4 = h * h * h * h;
    let sum = density.values().iter().fold(T::zero(), |acc, v| acc + v.re);
    Ok(sum * h4)
}

/// `∂L/∂(∂_μφ_k)` over the lattice (`MatterVector`, complex).
pub fn dl_dgrad_matter<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<LatticeField<T>, CoreError> {
    let grads = lattice_gradients(cfg)?;
    let model = Model::of(cfg);
    let n_rep = cfg.algebra.n_rep();
    let mut out = LatticeField::zeros(cfg.lattice, FieldShape::MatterVector { n_rep });
    for site in 0..cfg.lattice.site_count() {
        let s = SiteState::gather(cfg, &grads, site);
        for (slot, v) in model.dl_dgrad_phi(&s).into_iter().enumerate() {
            out.set_value(site, slot, v);
        }
    }
    Ok(out)
}

/// `∂L/∂(∂_μ D_ν̇,α)` over the lattice (`AdjointRank2`, real, `(α, μ, ν)`).
pub fn dl_dgrad_gauge<T: Real>(
    cfg: &FieldConfiguration<T>,
) -> Result<LatticeField<T>, CoreError> {
    let grads = lattice_gradients(cfg)?;
    let model = Model::of(cfg);
    let n_adj = cfg.algebra.n_adj();
    let mut out = LatticeField::zeros(cfg.lattice, FieldShape::AdjointRank2 { n_adj });
    for site in 0..cfg.lattice.site_count() {
        let s = SiteState::gather(cfg, &grads, site);
        for (slot, v) in model.dl_dgrad_gauge(&s).into_iter().enumerate() {
            out.set_value(site, slot, Complex::new(v, T::zero()));
        }
    }
    Ok(out)
}

/// Central-difference probe of `∂L/∂(∂_μφ_k)` at one site: perturbs the real
/// and imaginary parts of the gradient slot and reassembles the Wirtinger
/// derivative `(∂L/∂a − i ∂L/∂b)/2`.
pub fn numeric_dl_dgrad_matter<T: Real>(
    model: &Model<'_, T>,
    state: &SiteState<T>,
    mu: usize,
    k: usize,
    step: T,
) -> Complex<T> {
    let slot = matter_vector_slot(mu, k, model.algebra.n_rep());
    let two_step = step + step;
    let mut s = state.clone();

    s.grad_phi[slot] = state.grad_phi[slot] + Complex::new(step, T::zero());
    let lp = model.lagrangian(&s);
    s.grad_phi[slot] = state.grad_phi[slot] - Complex::new(step, T::zero());
    let lm = model.lagrangian(&s);
    let d_re = (lp - lm) / two_step;

    s.grad_phi[slot] = state.grad_phi[slot] + Complex::new(T::zero(), step);
    let lp = model.lagrangian(&s);
    s.grad_phi[slot] = state.grad_phi[slot] - Complex::new(T::zero(), step);
    let lm = model.lagrangian(&s);
    let d_im = (lp - lm) / two_step;

    Complex::new(d_re, -d_im).scale(lit::<T>(0.5))
}

/// Central-difference probe of `∂L/∂(∂_μ D_ν̇,α)` at one site.
pub fn numeric_dl_dgrad_gauge<T: Real>(
    model: &Model<'_, T>,
    state: &SiteState<T>,
    alpha: usize,
    mu: usize,
    nu: usize,
    step: T,
) -> T {
    let slot = adjoint_rank2_slot(alpha, mu, nu);
    let mut s = state.clone();
    s.grad_gauge[slot] = state.grad_gauge[slot] + step;
    let lp = model.lagrangian(&s);
    s.grad_gauge[slot] = state.grad_gauge[slot] - step;
    let lm = model.lagrangian(&s);
    (lp - lm) / (step + step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin_algebra;
    use crate::to_f64;

    fn lat8() -> Lattice<f64> {
        Lattice::cubic(8, 0.25).unwrap()
    }

    /// su2 test configuration with harmonic matter/gauge data, identity ẋ.
    fn su2_cfg(params: GaugeParameterSet<f64>) -> FieldConfiguration<f64> {
        let lattice = lat8();
        let algebra = builtin_algebra("su2").unwrap();
        let velocity = VelocityField::identity_map();
        let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
        let matter = MatterField::from_velocity_functions(
            vec![
                (
                    ScalarFunction::harmonic(0.2, 0.8, [k, 0.0, 0.0, 0.0], 0.1),
                    ScalarFunction::harmonic(0.0, 0.5, [0.0, k, 0.0, 0.0], 0.7),
                ),
                (
                    ScalarFunction::harmonic(-0.1, 0.6, [0.0, 0.0, k, 0.0], 0.0),
                    ScalarFunction::harmonic(0.3, 0.4, [0.0, 0.0, 0.0, k], 1.2),
                ),
            ],
            &velocity,
            lattice,
        );
        let gauge = GaugeField::from_functions(
            (0..3)
                .map(|alpha| {
                    std::array::from_fn(|mu| {
                        let mut wave = [0.0; 4];
                        wave[mu] = k;
                        ScalarFunction::harmonic(
                            0.1 * (alpha as f64 + 1.0),
                            0.3 + 0.1 * mu as f64,
                            wave,
                            0.2 * alpha as f64,
                        )
                    })
                })
                .collect(),
            &velocity,
            lattice,
        );
        FieldConfiguration::new(algebra, lattice, velocity, matter, gauge, params, 1.0, 1.0)
            .unwrap()
    }

    #[test]
    fn zero_parameters_give_zero_increments() {
        let cfg = su2_cfg(GaugeParameterSet::zero(3, 1e-3));
        assert_eq!(to_f64(transform_matter(&cfg).unwrap().max_abs()), 0.0);
        assert_eq!(to_f64(transform_gauge(&cfg).unwrap().max_abs()), 0.0);
    }

    #[test]
    fn u1_constant_parameter_is_a_global_phase() {
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let velocity = VelocityField::identity_map();
        let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
        let matter = MatterField::from_spacetime_functions(
            &[(
                ScalarFunction::harmonic(
                    0.0,
                    1.0,
                    [k, 0.0, 0.0, 0.0],
                    std::f64::consts::FRAC_PI_2,
                ),
                ScalarFunction::harmonic(0.0, 1.0, [k, 0.0, 0.0, 0.0], 0.0),
            )],
            lattice,
        );
        let gauge = GaugeField::zero(1, lattice);
        let c = 0.7;
        let params = GaugeParameterSet::constant(vec![c], 1e-2);
        let cfg =
            FieldConfiguration::new(algebra, lattice, velocity, matter, gauge, params, 1.0, 1.0)
                .unwrap();
        let dphi = transform_matter(&cfg).unwrap();
        // δφ = −i ε c φ
        for site in [0, 31, 4095] {
            let expect = cfg.matter().samples().value(site, 0) * Complex::new(0.0, -1e-2 * c);
            assert!((dphi.value(site, 0) - expect).norm() < 1e-16);
        }
    }

    #[test]
    fn su2_matter_increment_matches_matrix_action() {
        // φ = (1, 0), p = (1, 0, 0) at amplitude ε: δφ = −iε (0, 1/2)
        let lattice = lat8();
        let algebra = builtin_algebra("su2").unwrap();
        let velocity = VelocityField::identity_map();
        let matter = MatterField::from_spacetime_functions(
            &[
                (ScalarFunction::Constant(1.0), ScalarFunction::zero()),
                (ScalarFunction::zero(), ScalarFunction::zero()),
            ],
            lattice,
        );
        let gauge = GaugeField::zero(3, lattice);
        let eps = 1e-3;
        let params = GaugeParameterSet::constant(vec![1.0, 0.0, 0.0], eps);
        let cfg =
            FieldConfiguration::new(algebra, lattice, velocity, matter, gauge, params, 1.0, 1.0)
                .unwrap();
        let dphi = transform_matter(&cfg).unwrap();
        for site in [0, 100] {
            assert!((dphi.value(site, 0)).norm() < 1e-18);
            assert!((dphi.value(site, 1) - Complex::new(0.0, -0.5 * eps)).norm() < 1e-18);
        }
    }

    #[test]
    fn u1_gauge_increment_is_parameter_gradient_pullback() {
        // p = a·ẋ^1 (coordinate index 1): δD_μ = ε (a/g) λ^1_μ
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let m = [
            [1.0, 0.4, 0.2, 0.1],
            [0.3, 1.0, 0.5, 0.2],
            [0.6, 0.2, 1.0, 0.7],
            [0.1, 0.8, 0.3, 1.0],
        ];
        let velocity = VelocityField::affine(m, [0.0; 4]);
        let matter = MatterField::zero(1, lattice);
        let gauge = GaugeField::zero(1, lattice);
        let a = 0.9;
        let eps = 1e-2;
        let g = 2.0;
        let params = GaugeParameterSet::new(vec![ScalarFunction::linear(a, 1)], eps);
        let cfg =
            FieldConfiguration::new(algebra, lattice, velocity, matter, gauge, params, g, 1.0)
                .unwrap();
        let dd = transform_gauge(&cfg).unwrap();
        for site in [0, 17, 4000] {
            for mu in 0..4 {
                let expect = eps * (a / g) * m[1][mu];
                assert!((dd.value(site, adjoint_vector_slot(0, mu)).re - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn su2_global_gauge_increment_is_adjoint_rotation() {
        let eps = 1e-3;
        let p = [0.5, -0.3, 0.8];
        let cfg = su2_cfg(GaugeParameterSet::constant(p.to_vec(), eps));
        let dd = transform_gauge(&cfg).unwrap();
        let c = cfg.algebra().constants();
        for site in [5, 999] {
            for alpha in 0..3 {
                for mu in 0..4 {
                    let mut expect = 0.0;
                    for beta in 0..3 {
                        for gamma in 0..3 {
                            expect += c.get(gamma, alpha, beta)
                                * p[beta]
                                * cfg
                                    .gauge()
                                    .samples()
                                    .value(site, adjoint_vector_slot(gamma, mu))
                                    .re;
                        }
                    }
                    let got = dd.value(site, adjoint_vector_slot(alpha, mu)).re;
                    assert!((got - eps * expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn connection_recomputes_bitwise() {
        let cfg = su2_cfg(GaugeParameterSet::zero(3, 1e-3));
        let again = cfg.recompute_connection().unwrap();
        assert_eq!(cfg.connection(), &again);
    }

    #[test]
    fn lagrangian_of_zero_fields_vanishes() {
        let lattice = lat8();
        let algebra = builtin_algebra("su2").unwrap();
        let cfg = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            MatterField::zero(2, lattice),
            GaugeField::zero(3, lattice),
            GaugeParameterSet::zero(3, 1e-3),
            1.0,
            1.0,
        )
        .unwrap();
        let l = lagrangian_density(&cfg).unwrap();
        assert_eq!(to_f64(l.max_abs()), 0.0);
    }

    #[test]
    fn constant_matter_leaves_only_the_mass_term() {
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let m = 1.7;
        let matter = MatterField::from_spacetime_functions(
            &[(
                ScalarFunction::Constant(0.6),
                ScalarFunction::Constant(-0.2),
            )],
            lattice,
        );
        let cfg = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            matter,
            GaugeField::zero(1, lattice),
            GaugeParameterSet::zero(1, 1e-3),
            1.0,
            m,
        )
        .unwrap();
        let l = lagrangian_density(&cfg).unwrap();
        let expect = -m * m * (0.6 * 0.6 + 0.2 * 0.2);
        for site in [0, 2048, 4095] {
            assert!((l.value(site, 0).re - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn plane_wave_lagrangian_matches_hand_value() {
        // u1, D ≡ 0, φ = e^{i k x_1}: L = (sin(kh)/h)² − m² exactly.
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
        let m = 0.8;
        let matter = MatterField::from_spacetime_functions(
            &[(
                ScalarFunction::harmonic(
                    0.0,
                    1.0,
                    [k, 0.0, 0.0, 0.0],
                    std::f64::consts::FRAC_PI_2,
                ),
                ScalarFunction::harmonic(0.0, 1.0, [k, 0.0, 0.0, 0.0], 0.0),
            )],
            lattice,
        );
        let cfg = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            matter,
            GaugeField::zero(1, lattice),
            GaugeParameterSet::zero(1, 1e-3),
            1.0,
            m,
        )
        .unwrap();
        let h = lattice.spacing();
        let k_lat = (k * h).sin() / h;
        let expect = k_lat * k_lat - m * m;
        let l = lagrangian_density(&cfg).unwrap();
        for site in [0, 123, 4095] {
            assert!((l.value(site, 0).re - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn dl_dgrad_matter_reduces_to_conjugate_gradient_for_free_field() {
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let k = 2.0 * std::f64::consts::PI / lattice.box_length(2);
        let matter = MatterField::from_spacetime_functions(
            &[(
                ScalarFunction::harmonic(0.1, 0.9, [0.0, 0.0, k, 0.0], 0.4),
                ScalarFunction::harmonic(0.0, 0.7, [0.0, 0.0, k, 0.0], 1.1),
            )],
            lattice,
        );
        let cfg = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            matter,
            GaugeField::zero(1, lattice),
            GaugeParameterSet::zero(1, 1e-3),
            1.0,
            1.0,
        )
        .unwrap();
        let grads = lattice_gradients(&cfg).unwrap();
        let dl = dl_dgrad_matter(&cfg).unwrap();
        for site in [0, 200, 4001] {
            for slot in 0..4 {
                let expect = grads.grad_phi.value(site, slot).conj();
                assert!((dl.value(site, slot) - expect).norm() < 1e-16);
            }
        }
    }

    #[test]
    fn derivative_partials_agree_with_site_perturbation() {
        let cfg = su2_cfg(GaugeParameterSet::zero(3, 1e-3));
        let grads = lattice_gradients(&cfg).unwrap();
        let model = Model::of(&cfg);
        let step = 1e-5;
        for site in [3, 777, 2500] {
            let s = SiteState::gather(&cfg, &grads, site);
            let analytic_phi = model.dl_dgrad_phi(&s);
            for mu in 0..4 {
                for k in 0..2 {
                    let w = numeric_dl_dgrad_matter(&model, &s, mu, k, step);
                    let a = analytic_phi[matter_vector_slot(mu, k, 2)];
                    assert!(
                        (w - a).norm() <= 1e-6 * a.norm().max(1e-2),
                        "site {site} mu {mu} k {k}: {w} vs {a}"
                    );
                }
            }
            let analytic_gauge = model.dl_dgrad_gauge(&s);
            for alpha in 0..3 {
                for mu in 0..4 {
                    for nu in 0..4 {
                        let w = numeric_dl_dgrad_gauge(&model, &s, alpha, mu, nu, step);
                        let a = analytic_gauge[adjoint_rank2_slot(alpha, mu, nu)];
                        assert!(
                            (w - a).abs() <= 1e-6 * a.abs().max(1e-2),
                            "site {site} ({alpha},{mu},{nu}): {w} vs {a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zero_amplitude_transformation_is_identity() {
        let cfg = su2_cfg(GaugeParameterSet::constant(vec![0.4, 0.1, -0.2], 1e-3));
        let next = apply_transformation(&cfg, 0.0).unwrap();
        assert_eq!(cfg.matter().samples(), next.matter().samples());
        assert_eq!(cfg.gauge().samples(), next.gauge().samples());
        assert_eq!(cfg.connection(), next.connection());
    }

    #[test]
    fn forward_backward_transform_returns_at_second_order() {
        let k = 2.0 * std::f64::consts::PI / (8.0 * 0.25);
        let p = GaugeParameterSet::new(
            vec![
                ScalarFunction::harmonic(0.2, 0.7, [k, 0.0, 0.0, 0.0], 0.0),
                ScalarFunction::Constant(0.4),
                ScalarFunction::linear(0.3, 2),
            ],
            1e-3,
        );
        let cfg = su2_cfg(p.clone());
        let minus = GaugeParameterSet::new(
            p.functions()
                .iter()
                .map(|f| match f {
                    ScalarFunction::Constant(c) => ScalarFunction::Constant(-*c),
                    ScalarFunction::Polynomial(terms) => ScalarFunction::Polynomial(
                        terms
                            .iter()
                            .map(|t| crate::kinematics::PolyTerm {
                                coeff: -t.coeff,
                                powers: t.powers,
                            })
                            .collect(),
                    ),
                    ScalarFunction::Harmonic {
                        offset,
                        amplitude,
                        wave,
                        phase,
                    } => ScalarFunction::Harmonic {
                        offset: -*offset,
                        amplitude: -*amplitude,
                        wave: *wave,
                        phase: *phase,
                    },
                })
                .collect(),
            1e-3,
        );
        let residual_at = |eps: f64| -> f64 {
            let there = apply_transformation(&cfg, eps).unwrap();
            let back =
                apply_transformation(&there.with_params(minus.clone()).unwrap(), eps).unwrap();
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
        let r1 = residual_at(1e-2);
        let r2 = residual_at(1e-3);
        let slope = (r1 / r2).log10();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn global_invariance_slope_is_quadratic() {
        for name in ["u1", "su2"] {
            let lattice = lat8();
            let algebra = builtin_algebra(name).unwrap();
            let n_adj = algebra.n_adj();
            let n_rep = algebra.n_rep();
            let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
            let velocity = VelocityField::identity_map();
            let matter = MatterField::from_spacetime_functions(
                &(0..n_rep)
                    .map(|j| {
                        (
                            ScalarFunction::harmonic(
                                0.2,
                                0.8,
                                [
                                    k * ((j == 0) as i32 as f64),
                                    k * ((j == 1) as i32 as f64),
                                    0.0,
                                    0.0,
                                ],
                                0.3,
                            ),
                            ScalarFunction::harmonic(0.0, 0.5, [0.0, 0.0, k, 0.0], 0.9),
                        )
                    })
                    .collect::<Vec<_>>(),
                lattice,
            );
            let gauge = GaugeField::from_functions(
                (0..n_adj)
                    .map(|alpha| {
                        std::array::from_fn(|mu| {
                            ScalarFunction::harmonic(
                                0.15 * (alpha + 1) as f64,
                                0.25,
                                [0.0, 0.0, 0.0, k * ((mu % 2) as f64)],
                                0.1 * mu as f64,
                            )
                        })
                    })
                    .collect(),
                &velocity,
                lattice,
            );
            let p: Vec<f64> = (0..n_adj).map(|a| 0.3 + 0.2 * a as f64).collect();
            let params = GaugeParameterSet::constant(p, 1e-3);
            let cfg = FieldConfiguration::new(
                algebra, lattice, velocity, matter, gauge, params, 1.0, 1.0,
            )
            .unwrap();
            let base = action(&cfg).unwrap();
            let rel = |eps: f64| -> f64 {
                let transformed = apply_transformation(&cfg, eps).unwrap();
                ((action(&transformed).unwrap() - base) / base).abs()
            };
            let d2 = rel(1e-2);
            let d4 = rel(1e-4);
            let slope = (d2 / d4).log10() / 2.0;
            assert!((slope - 2.0).abs() < 0.1, "{name}: slope {slope}");
        }
    }

    #[test]
    fn chain_rule_connection_gradient_converges_to_the_lattice_gradient() {
        // ∂_μA_ν assembled as (∂_μD)λ + D(∂_μλ) versus the central
        // difference of the sampled composite connection; the two are
        // distinct O(h²) discretisations of the same tensor.
        let err_at = |l0: usize, h: f64| -> f64 {
            let lattice = Lattice::new([l0, 4, 4, 4], h).unwrap();
            let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
            let velocity = VelocityField::trigonometric(std::array::from_fn(|nu| {
                ScalarFunction::harmonic(
                    0.1 * nu as f64,
                    0.5 + 0.1 * nu as f64,
                    [k, 0.0, 0.0, 0.0],
                    0.4 * nu as f64,
                )
            }));
            let algebra = builtin_algebra("su2").unwrap();
            let gauge = GaugeField::from_functions(
                (0..3)
                    .map(|alpha| {
                        std::array::from_fn(|mu| {
                            let mut wave = [0.0; 4];
                            wave[(mu + alpha + 1) % 4] = 1.0;
                            ScalarFunction::harmonic(0.2, 0.5, wave, 0.1 * alpha as f64)
                        })
                    })
                    .collect(),
                &velocity,
                lattice,
            );
            let cfg = FieldConfiguration::new(
                algebra,
                lattice,
                velocity,
                MatterField::zero(2, lattice),
                gauge,
                GaugeParameterSet::zero(3, 1e-3),
                1.0,
                1.0,
            )
            .unwrap();
            let grads = lattice_gradients(&cfg).unwrap();
            let model = Model::of(&cfg);
            let lattice_grad = cfg.connection().gradient().unwrap();
            let mut worst = 0.0f64;
            for site in 0..lattice.site_count() {
                let state = SiteState::gather(&cfg, &grads, site);
                let chain = model.connection_gradient(&state);
                for (slot, v) in chain.iter().enumerate() {
                    worst = worst.max((v - lattice_grad.value(site, slot).re).abs());
                }
            }
            worst
        };
        let ratio = err_at(32, 0.25) / err_at(64, 0.125);
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn tiny_global_u1_transform_leaves_the_action_unchanged() {
        // The exact global phase is a symmetry of L; the first-order
        // increment deviates from it at O(eps^2), so a small enough
        // amplitude pushes the action change below 1e-12 relative.
        let lattice = lat8();
        let algebra = builtin_algebra("u1").unwrap();
        let k = 2.0 * std::f64::consts::PI / lattice.box_length(0);
        let matter = MatterField::from_spacetime_functions(
            &[(
                ScalarFunction::harmonic(0.2, 0.9, [k, 0.0, 0.0, 0.0], 0.1),
                ScalarFunction::harmonic(0.0, 0.6, [0.0, k, 0.0, 0.0], 0.8),
            )],
            lattice,
        );
        let params = GaugeParameterSet::constant(vec![0.7], 1e-7);
        let cfg = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            matter,
            GaugeField::zero(1, lattice),
            params,
            1.0,
            1.0,
        )
        .unwrap();
        let base = action(&cfg).unwrap();
        let transformed = apply_transformation(&cfg, 1e-7).unwrap();
        let rel = ((action(&transformed).unwrap() - base) / base).abs();
        assert!(rel <= 1e-12, "relative action change {rel:e}");
    }

    #[test]
    fn closed_form_sampling_is_consistent() {
        let cfg = su2_cfg(GaugeParameterSet::zero(3, 1e-3));
        let r = cfg.matter().consistency_residual(cfg.velocity()).unwrap();
        assert!(to_f64(r) <= 1e-13);
        let r = cfg.gauge().consistency_residual(cfg.velocity()).unwrap();
        assert!(to_f64(r) <= 1e-13);
    }

    #[test]
    fn configuration_validates_dimensions() {
        let lattice = lat8();
        let algebra = builtin_algebra("su2").unwrap();
        let bad_matter = MatterField::zero(3, lattice); // su2 wants n = 2
        let err = FieldConfiguration::new(
            algebra,
            lattice,
            VelocityField::identity_map(),
            bad_matter,
            GaugeField::zero(3, lattice),
            GaugeParameterSet::zero(3, 1e-3),
            1.0,
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::RepresentationMismatch { .. }));
    }
}
