//! Analytic velocity fields `ẋ(x)`, the λ tensor, and velocity-space gauge
//! parameters `p_α(ẋ)`.
//!
//! Velocity fields and parameter functions are closed-form families rather
//! than free lattice data: the formalism differentiates them in velocity
//! space, and an analytic gradient there is exact where a second grid would
//! only add discretisation error. Supported families: affine, polynomial
//! (total degree ≤ 3) and single-harmonic trigonometric components.

use num_complex::Complex;

use crate::lattice::{adjoint_vector_slot, rank2_slot, FieldShape, Lattice, LatticeField};
use crate::{error::CoreError, Real};

/// One monomial `coeff · x₁^e₁ x₂^e₂ x₃^e₃ x₄^e₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyTerm<T> {
    pub coeff: T,
    pub powers: [u8; 4],
}

impl<T: Real> PolyTerm<T> {
    pub fn total_degree(&self) -> u32 {
        self.powers.iter().map(|&p| p as u32).sum()
    }

    fn eval(&self, x: [T; 4]) -> T {
        let mut v = self.coeff;
        for mu in 0..4 {
            v = v * x[mu].powi(self.powers[mu] as i32);
        }
        v
    }

    /// ∂/∂x_μ of the monomial.
    fn derivative(&self, mu: usize) -> Option<PolyTerm<T>> {
        if self.powers[mu] == 0 {
            return None;
        }
        let mut powers = self.powers;
        powers[mu] -= 1;
        Some(PolyTerm {
            coeff: self.coeff * T::from_u8(self.powers[mu]).unwrap(),
            powers,
        })
    }
}

/// Closed-form scalar function of four coordinates with analytic first and
/// second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFunction<T> {
    Constant(T),
    Polynomial(Vec<PolyTerm<T>>),
    /// `offset + amplitude · sin(wave · x + phase)`
    Harmonic {
        offset: T,
        amplitude: T,
        wave: [T; 4],
        phase: T,
    },
}

impl<T: Real> ScalarFunction<T> {
    pub fn zero() -> Self {
        ScalarFunction::Constant(T::zero())
    }

    /// Polynomial family, total degree capped at 3.
    pub fn polynomial(terms: Vec<PolyTerm<T>>) -> Result<Self, CoreError> {
        if let Some(t) = terms.iter().find(|t| t.total_degree() > 3) {
            return Err(CoreError::Invalid(format!(
                "polynomial term has total degree {} > 3",
                t.total_degree()
            )));
        }
        Ok(ScalarFunction::Polynomial(terms))
    }

    /// `a · x_μ` (one linear monomial).
    pub fn linear(a: T, mu: usize) -> Self {
        let mut powers = [0u8; 4];
        powers[mu] = 1;
        ScalarFunction::Polynomial(vec![PolyTerm { coeff: a, powers }])
    }

    pub fn harmonic(offset: T, amplitude: T, wave: [T; 4], phase: T) -> Self {
        ScalarFunction::Harmonic {
            offset,
            amplitude,
            wave,
            phase,
        }
    }

    /// The pointwise negation `-f`.
    pub fn negated(&self) -> Self {
        match self {
            ScalarFunction::Constant(c) => ScalarFunction::Constant(-*c),
            ScalarFunction::Polynomial(terms) => ScalarFunction::Polynomial(
                terms
                    .iter()
                    .map(|t| PolyTerm {
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
        }
    }

    pub fn eval(&self, x: [T; 4]) -> T {
        match self {
            ScalarFunction::Constant(c) => *c,
            ScalarFunction::Polynomial(terms) => terms
                .iter()
                .fold(T::zero(), |acc, t| acc + t.eval(x)),
            ScalarFunction::Harmonic {
                offset,
                amplitude,
                wave,
                phase,
            } => {
                let arg = dot(*wave, x) + *phase;
                *offset + *amplitude * arg.sin()
            }
        }
    }

    pub fn grad(&self, x: [T; 4]) -> [T; 4] {
        let mut g = [T::zero(); 4];
        match self {
            ScalarFunction::Constant(_) => {}
            ScalarFunction::Polynomial(terms) => {
                for mu in 0..4 {
                    for t in terms {
                        if let Some(d) = t.derivative(mu) {
                            g[mu] = g[mu] + d.eval(x);
                        }
                    }
                }
            }
            ScalarFunction::Harmonic {
                amplitude,
                wave,
                phase,
                ..
            } => {
                let c = *amplitude * (dot(*wave, x) + *phase).cos();
                for mu in 0..4 {
                    g[mu] = c * wave[mu];
                }
            }
        }
        g
    }

    pub fn hessian(&self, x: [T; 4]) -> [[T; 4]; 4] {
        let mut h = [[T::zero(); 4]; 4];
        match self {
            ScalarFunction::Constant(_) => {}
            ScalarFunction::Polynomial(terms) => {
                for rho in 0..4 {
                    for mu in 0..4 {
                        for t in terms {
                            if let Some(d) = t.derivative(rho) {
                                if let Some(dd) = d.derivative(mu) {
                                    h[rho][mu] = h[rho][mu] + dd.eval(x);
                                }
                            }
                        }
                    }
                }
            }
            ScalarFunction::Harmonic {
                amplitude,
                wave,
                phase,
                ..
            } => {
                let s = -*amplitude * (dot(*wave, x) + *phase).sin();
                for rho in 0..4 {
                    for mu in 0..4 {
                        h[rho][mu] = s * wave[rho] * wave[mu];
                    }
                }
            }
        }
        h
    }
}

#[inline]
fn dot<T: Real>(a: [T; 4], b: [T; 4]) -> T {
    let mut acc = T::zero();
    for i in 0..4 {
        acc = acc + a[i] * b[i];
    }
    acc
}

/// Function family of a velocity field, recorded for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityFamily {
    Affine,
    Polynomial,
    Trigonometric,
}

impl VelocityFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            VelocityFamily::Affine => "affine",
            VelocityFamily::Polynomial => "polynomial",
            VelocityFamily::Trigonometric => "trigonometric",
        }
    }
}

/// Analytic map `x → ẋ(x)` with closed-form Jacobian and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField<T> {
    components: [ScalarFunction<T>; 4],
    family: VelocityFamily,
}

impl<T: Real> VelocityField<T> {
    /// `ẋ^ν = Σ_μ M^ν_μ x_μ + b^ν`.
    pub fn affine(matrix: [[T; 4]; 4], offset: [T; 4]) -> Self {
        let components = std::array::from_fn(|nu| {
            let mut terms = Vec::new();
            if offset[nu] != T::zero() {
                terms.push(PolyTerm {
                    coeff: offset[nu],
                    powers: [0; 4],
                });
            }
            for mu in 0..4 {
                if matrix[nu][mu] != T::zero() {
                    let mut powers = [0u8; 4];
                    powers[mu] = 1;
                    terms.push(PolyTerm {
                        coeff: matrix[nu][mu],
                        powers,
                    });
                }
            }
            ScalarFunction::Polynomial(terms)
        });
        Self {
            components,
            family: VelocityFamily::Affine,
        }
    }

    /// Constant map `ẋ = b`.
    pub fn constant(offset: [T; 4]) -> Self {
        Self::affine([[T::zero(); 4]; 4], offset)
    }

    /// Identity map `ẋ = x` (λ = identity everywhere).
    pub fn identity_map() -> Self {
        let mut m = [[T::zero(); 4]; 4];
        for i in 0..4 {
            m[i][i] = T::one();
        }
        Self::affine(m, [T::zero(); 4])
    }

    pub fn trigonometric(components: [ScalarFunction<T>; 4]) -> Self {
        Self {
            components,
            family: VelocityFamily::Trigonometric,
        }
    }

    pub fn polynomial(components: [ScalarFunction<T>; 4]) -> Self {
        Self {
            components,
            family: VelocityFamily::Polynomial,
        }
    }

    pub fn family(&self) -> VelocityFamily {
        self.family
    }

    pub fn components(&self) -> &[ScalarFunction<T>; 4] {
        &self.components
    }

    pub fn eval(&self, x: [T; 4]) -> [T; 4] {
        std::array::from_fn(|nu| self.components[nu].eval(x))
    }

    /// `λ^ν_μ(x) = ∂_μ ẋ^ν`, indexed `[ν][μ]`.
    pub fn jacobian(&self, x: [T; 4]) -> [[T; 4]; 4] {
        std::array::from_fn(|nu| self.components[nu].grad(x))
    }

    /// `∂_ρ λ^ν_μ`, indexed `[ρ][ν][μ]`.
    pub fn jacobian_grad(&self, x: [T; 4]) -> [[[T; 4]; 4]; 4] {
        let mut out = [[[T::zero(); 4]; 4]; 4];
        for nu in 0..4 {
            let h = self.components[nu].hessian(x);
            for rho in 0..4 {
                for mu in 0..4 {
                    out[rho][nu][mu] = h[rho][mu];
                }
            }
        }
        out
    }
}

/// The λ tensor sampled on a lattice: a real rank-2 field `λ^ν_μ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaField<T> {
    field: LatticeField<T>,
}

impl<T: Real> LambdaField<T> {
    pub fn field(&self) -> &LatticeField<T> {
        &self.field
    }

    pub fn lattice(&self) -> &Lattice<T> {
        self.field.lattice()
    }

    #[inline]
    pub fn value(&self, site: usize, nu: usize, mu: usize) -> T {
        self.field.value(site, rank2_slot(nu, mu)).re
    }

    /// The componentwise reading of the "all elements nonzero" regime.
    pub fn check_all_nonzero(&self) -> Result<(), CoreError> {
        for site in 0..self.lattice().site_count() {
            for nu in 0..4 {
                for mu in 0..4 {
                    if self.value(site, nu, mu) == T::zero() {
                        return Err(CoreError::LambdaZeroComponent { site, nu, mu });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn min_abs_component(&self) -> T {
        let mut min = T::infinity();
        for v in self.field.values() {
            min = min.min(v.re.abs());
        }
        min
    }

    /// `det λ` per site (the invertibility reading, reported alongside).
    pub fn determinants(&self) -> Vec<T> {
        (0..self.lattice().site_count())
            .map(|site| {
                let mut m = [[T::zero(); 4]; 4];
                for nu in 0..4 {
                    for mu in 0..4 {
                        m[nu][mu] = self.value(site, nu, mu);
                    }
                }
                det4(&m)
            })
            .collect()
    }

    /// Max componentwise deviation from the identity tensor.
    pub fn max_deviation_from_identity(&self) -> T {
        let mut worst = T::zero();
        for site in 0..self.lattice().site_count() {
            for nu in 0..4 {
                for mu in 0..4 {
                    let expect = if nu == mu { T::one() } else { T::zero() };
                    worst = worst.max((self.value(site, nu, mu) - expect).abs());
                }
            }
        }
        worst
    }
}

fn det4<T: Real>(m: &[[T; 4]; 4]) -> T {
    // cofactor expansion along the first row via 3x3 minors
    let minor = |r: usize, c: usize| -> T {
        let mut sub = [[T::zero(); 3]; 3];
        let mut si = 0;
        for i in 0..4 {
            if i == r {
                continue;
            }
            let mut sj = 0;
            for j in 0..4 {
                if j == c {
                    continue;
                }
                sub[si][sj] = m[i][j];
                sj += 1;
            }
            si += 1;
        }
        sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
            - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
            + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0])
    };
    let mut det = T::zero();
    let mut sign = T::one();
    for c in 0..4 {
        det = det + sign * m[0][c] * minor(0, c);
        sign = -sign;
    }
    det
}

/// λ from the closed-form Jacobian at each site.
pub fn lambda_analytic<T: Real>(v: &VelocityField<T>, lattice: Lattice<T>) -> LambdaField<T> {
    let field = LatticeField::from_real_fn(lattice, FieldShape::Rank2, |site, slot| {
        let jac = v.jacobian(lattice.position(site));
        jac[slot / 4][slot % 4]
    });
    LambdaField { field }
}

/// λ via lattice central differences of the sampled map — the validation
/// twin of [`lambda_analytic`].
pub fn lambda_numeric<T: Real>(
    v: &VelocityField<T>,
    lattice: Lattice<T>,
) -> Result<LambdaField<T>, CoreError> {
    let mut field = LatticeField::zeros(lattice, FieldShape::Rank2);
    for nu in 0..4 {
        let component = LatticeField::from_real_fn(lattice, FieldShape::Scalar, |site, _| {
            v.eval(lattice.position(site))[nu]
        });
        for mu in 0..4 {
            let d = component.partial(mu)?;
            for site in 0..lattice.site_count() {
                field.set_value(site, rank2_slot(nu, mu), d.value(site, 0));
            }
        }
    }
    Ok(LambdaField { field })
}

/// Analytic `∂_ρ λ^ν_μ` sampled on the lattice (rank-3, `(ρ, ν, μ)`).
pub fn lambda_grad_analytic<T: Real>(
    v: &VelocityField<T>,
    lattice: Lattice<T>,
) -> LatticeField<T> {
    LatticeField::from_real_fn(lattice, FieldShape::Rank3, |site, slot| {
        let g = v.jacobian_grad(lattice.position(site));
        let rho = slot / 16;
        let nu = (slot / 4) % 4;
        let mu = slot % 4;
        g[rho][nu][mu]
    })
}

/// Gauge parameter functions `p_α(ẋ)` with the transformation amplitude ε.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeParameterSet<T> {
    functions: Vec<ScalarFunction<T>>,
    epsilon: T,
}

impl<T: Real> GaugeParameterSet<T> {
    pub fn new(functions: Vec<ScalarFunction<T>>, epsilon: T) -> Self {
        Self { functions, epsilon }
    }

    pub fn zero(n_adj: usize, epsilon: T) -> Self {
        Self::new(vec![ScalarFunction::zero(); n_adj], epsilon)
    }

    /// Parameters constant in ẋ — a global transformation.
    pub fn constant(values: Vec<T>, epsilon: T) -> Self {
        Self::new(
            values.into_iter().map(ScalarFunction::Constant).collect(),
            epsilon,
        )
    }

    pub fn n_adj(&self) -> usize {
        self.functions.len()
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: T) -> Self {
        Self {
            functions: self.functions.clone(),
            epsilon,
        }
    }

    pub fn functions(&self) -> &[ScalarFunction<T>] {
        &self.functions
    }

    /// Whether every parameter function is constant in ẋ.
    pub fn is_global(&self) -> bool {
        self.functions
            .iter()
            .all(|f| matches!(f, ScalarFunction::Constant(_)))
    }
}

/// Pull the parameter values `p_α(ẋ(x))` and their velocity-space gradients
/// `∂^ρ̇ p_α(ẋ(x))` back to lattice sites. Both outputs are unscaled by ε.
pub fn evaluate_parameters<T: Real>(
    params: &GaugeParameterSet<T>,
    v: &VelocityField<T>,
    lattice: Lattice<T>,
) -> (LatticeField<T>, LatticeField<T>) {
    let n_adj = params.n_adj();
    let mut values = LatticeField::zeros(lattice, FieldShape::Adjoint { n_adj });
    let mut grads = LatticeField::zeros(lattice, FieldShape::AdjointVector { n_adj });
    for site in 0..lattice.site_count() {
        let xdot = v.eval(lattice.position(site));
        for (alpha, f) in params.functions.iter().enumerate() {
            values.set_value(site, alpha, Complex::new(f.eval(xdot), T::zero()));
            let g = f.grad(xdot);
            for rho in 0..4 {
                grads.set_value(
                    site,
                    adjoint_vector_slot(alpha, rho),
                    Complex::new(g[rho], T::zero()),
                );
            }
        }
    }
    (values, grads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::to_f64;

    fn lat8() -> Lattice<f64> {
        Lattice::cubic(8, 0.25).unwrap()
    }

    #[test]
    fn constant_velocity_has_zero_lambda() {
        let v = VelocityField::constant([1.0, -2.0, 0.5, 3.0]);
        let lam = lambda_analytic(&v, lat8());
        assert_eq!(to_f64(lam.field().max_abs()), 0.0);
        let num = lambda_numeric(&v, lat8()).unwrap();
        assert_eq!(to_f64(num.field().max_abs()), 0.0);
        assert!(lam.check_all_nonzero().is_err());
    }

    #[test]
    fn affine_lambda_is_the_matrix_everywhere() {
        let m = [
            [1.0, 0.5, -0.25, 2.0],
            [0.75, -1.0, 0.1, 0.3],
            [0.2, 0.4, 1.5, -0.6],
            [-0.9, 0.8, 0.7, 1.1],
        ];
        let v = VelocityField::affine(m, [0.3, 0.0, -1.0, 0.5]);
        let lat = lat8();
        let lam = lambda_analytic(&v, lat);
        for site in [0, 17, 4095] {
            for nu in 0..4 {
                for mu in 0..4 {
                    assert_eq!(lam.value(site, nu, mu), m[nu][mu]);
                }
            }
        }
        lam.check_all_nonzero().unwrap();
        // affine second derivatives vanish identically
        let grad = lambda_grad_analytic(&v, lat);
        assert_eq!(to_f64(grad.max_abs()), 0.0);
        // determinant reported per site
        let dets = lam.determinants();
        assert!((dets[0] - dets[4095]).abs() < 1e-15);
    }

    #[test]
    fn harmonic_component_matches_hand_derivative() {
        // ẋ^0 = sin(k x_1), other components affine
        let k = std::f64::consts::PI; // one harmonic across the 8·0.25 box
        let v = VelocityField::trigonometric([
            ScalarFunction::harmonic(0.0, 1.0, [0.0, k, 0.0, 0.0], 0.0),
            ScalarFunction::linear(1.0, 1),
            ScalarFunction::linear(1.0, 2),
            ScalarFunction::linear(1.0, 3),
        ]);
        let lat = lat8();
        let lam = lambda_analytic(&v, lat);
        for site in 0..lat.site_count() {
            let x = lat.position(site);
            let expect = k * (k * x[1]).cos();
            assert!((lam.value(site, 0, 1) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn numeric_lambda_exact_for_affine() {
        let m = [
            [0.2, 0.5, -0.25, 2.0],
            [0.75, -1.0, 0.1, 0.3],
            [0.2, 0.4, 1.5, -0.6],
            [-0.9, 0.8, 0.7, 1.1],
        ];
        let v = VelocityField::affine(m, [0.0; 4]);
        let lat = lat8();
        let ana = lambda_analytic(&v, lat);
        let num = lambda_numeric(&v, lat).unwrap();
        // central difference is exact on affine maps, but the sampled map is
        // not periodic, so only wrap-free sites count
        let ext = lat.extents();
        for site in 0..lat.site_count() {
            let c = lat.coords(site);
            if (0..4).any(|a| c[a] == 0 || c[a] == ext[a] - 1) {
                continue;
            }
            for nu in 0..4 {
                for mu in 0..4 {
                    assert!((ana.value(site, nu, mu) - num.value(site, nu, mu)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn numeric_lambda_second_order_for_trigonometric() {
        let err_at = |l: usize, h: f64| -> f64 {
            let lat = Lattice::cubic(l, h).unwrap();
            let k1 = 2.0 * std::f64::consts::PI / lat.box_length(1);
            let k3 = 2.0 * std::f64::consts::PI / lat.box_length(3);
            let v = VelocityField::trigonometric([
                ScalarFunction::harmonic(0.1, 1.0, [0.0, k1, 0.0, 0.0], 0.2),
                ScalarFunction::harmonic(0.0, 0.7, [0.0, 0.0, 0.0, k3], 1.1),
                ScalarFunction::harmonic(-0.2, 1.3, [k1, 0.0, 0.0, 0.0], 0.0),
                ScalarFunction::harmonic(0.4, 0.5, [0.0, 0.0, k1, 0.0], 0.7),
            ]);
            let ana = lambda_analytic(&v, lat);
            let num = lambda_numeric(&v, lat).unwrap();
            to_f64(num.field().max_abs_diff(ana.field()).unwrap())
        };
        let ratio = err_at(8, 0.25) / err_at(16, 0.125);
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn parameter_pullback_values_and_gradients() {
        let lat = lat8();
        let v = VelocityField::identity_map();

        // zero parameters
        let zero = GaugeParameterSet::zero(3, 1e-3);
        let (vals, grads) = evaluate_parameters(&zero, &v, lat);
        assert_eq!(to_f64(vals.max_abs()), 0.0);
        assert_eq!(to_f64(grads.max_abs()), 0.0);

        // constants: zero gradient, constant value
        let consts = GaugeParameterSet::constant(vec![0.3, -0.1, 0.9], 1e-3);
        let (vals, grads) = evaluate_parameters(&consts, &v, lat);
        assert_eq!(vals.value(100, 1).re, -0.1);
        assert_eq!(to_f64(grads.max_abs()), 0.0);
        assert!(consts.is_global());

        // p_1 = a·ẋ^2 (velocity coordinate index 1): gradient is a
        let a = 0.8;
        let lin = GaugeParameterSet::new(vec![ScalarFunction::linear(a, 1)], 1e-3);
        let (_, grads) = evaluate_parameters(&lin, &v, lat);
        for site in [0, 1000, 4095] {
            assert_eq!(grads.value(site, adjoint_vector_slot(0, 1)).re, a);
            assert_eq!(grads.value(site, adjoint_vector_slot(0, 0)).re, 0.0);
        }
    }

    #[test]
    fn parameter_pullback_matches_direct_composition() {
        let lat = lat8();
        let v = VelocityField::affine(
            [
                [1.0, 0.2, 0.0, 0.0],
                [0.0, 1.0, 0.3, 0.0],
                [0.1, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
            [0.5, 0.0, -0.2, 0.0],
        );
        let p = GaugeParameterSet::new(
            vec![ScalarFunction::harmonic(0.0, 1.2, [0.5, 0.0, 0.25, 0.0], 0.3)],
            1e-3,
        );
        let (vals, _) = evaluate_parameters(&p, &v, lat);
        for site in [3, 77, 2048] {
            let expect = p.functions()[0].eval(v.eval(lat.position(site)));
            assert!((vals.value(site, 0).re - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn hessian_agrees_with_finite_differences() {
        let f = ScalarFunction::polynomial(vec![
            PolyTerm {
                coeff: 0.7,
                powers: [2, 1, 0, 0],
            },
            PolyTerm {
                coeff: -0.3,
                powers: [0, 0, 3, 0],
            },
        ])
        .unwrap();
        let g = ScalarFunction::harmonic(0.1, 0.9, [0.3, -0.2, 0.5, 0.7], 0.4);
        let x = [0.3, -0.7, 1.1, 0.5];
        let step = 1e-5;
        for func in [&f, &g] {
            // value-level: analytic gradient vs central difference of eval
            let grad = func.grad(x);
            for mu in 0..4 {
                let mut xp = x;
                let mut xm = x;
                xp[mu] += step;
                xm[mu] -= step;
                let num: f64 = (func.eval(xp) - func.eval(xm)) / (2.0 * step);
                assert!((num - grad[mu]).abs() < 1e-8);
            }
            let h = func.hessian(x);
            for rho in 0..4 {
                let mut xp = x;
                let mut xm = x;
                xp[rho] += step;
                xm[rho] -= step;
                let gp = func.grad(xp);
                let gm = func.grad(xm);
                for mu in 0..4 {
                    let num: f64 = (gp[mu] - gm[mu]) / (2.0 * step);
                    assert!((num - h[rho][mu]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn polynomial_degree_is_capped() {
        let err = ScalarFunction::polynomial(vec![PolyTerm {
            coeff: 1.0_f64,
            powers: [2, 2, 0, 0],
        }])
        .unwrap_err();
        assert!(err.to_string().contains("degree"));
    }
}
