//! Lie algebra representations, structure constants, and identity checks.
//!
//! An algebra is given by N Hermitian generators `T_α` of an n-dimensional
//! representation with `[T_α, T_β] = i C^γ_{αβ} T_γ`. Builtins cover u1, su2
//! (σ/2) and su3 (half Gell-Mann), all normalised so the generators are
//! trace-orthogonal; custom generator sets are accepted as long as they are
//! Hermitian, trace-orthogonal and close under commutation.

use num_complex::Complex;

use crate::matrix::{commutator, CMatrix};
use crate::{error::CoreError, spec_tol, to_f64, Real};

/// Dense structure-constant array `C^γ_{αβ}`, indexed `[γ][α][β]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<T> {
    n_adj: usize,
    data: Vec<T>,
}

impl<T: Real> StructureConstants<T> {
    pub fn zeros(n_adj: usize) -> Self {
        Self {
            n_adj,
            data: vec![T::zero(); n_adj * n_adj * n_adj],
        }
    }

    pub fn from_raw(n_adj: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n_adj * n_adj * n_adj);
        Self { n_adj, data }
    }

    pub fn n_adj(&self) -> usize {
        self.n_adj
    }

    #[inline]
    pub fn get(&self, gamma: usize, alpha: usize, beta: usize) -> T {
        self.data[(gamma * self.n_adj + alpha) * self.n_adj + beta]
    }

    #[inline]
    pub fn set(&mut self, gamma: usize, alpha: usize, beta: usize, v: T) {
        self.data[(gamma * self.n_adj + alpha) * self.n_adj + beta] = v;
    }

    /// `Σ_β C^γ_{αβ} x_β y_γ` summed over β and γ — the adjoint "cross
    /// product" that every commutator-descended contraction reduces to.
    #[inline]
    pub fn cross(&self, alpha: usize, x: &[T], y: &[T]) -> T {
        let n = self.n_adj;
        let mut acc = T::zero();
        for beta in 0..n {
            let xb = x[beta];
            if xb == T::zero() {
                continue;
            }
            for gamma in 0..n {
                acc = acc + self.get(gamma, alpha, beta) * xb * y[gamma];
            }
        }
        acc
    }

    /// Max over `(α,β,γ,δ)` of the cyclic Jacobi sum
    /// `|Σ_ε C^δ_{αε} C^ε_{βγ} + C^δ_{βε} C^ε_{γα} + C^δ_{γε} C^ε_{αβ}|`.
    pub fn jacobi_residual(&self) -> T {
        let n = self.n_adj;
        let mut worst = T::zero();
        for alpha in 0..n {
            for beta in 0..n {
                for gamma in 0..n {
                    for delta in 0..n {
                        let r = self.jacobi_term(alpha, beta, gamma, delta).abs();
                        if r > worst {
                            worst = r;
                        }
                    }
                }
            }
        }
        worst
    }

    /// One cyclic Jacobi sum for a fixed index tuple.
    pub fn jacobi_term(&self, alpha: usize, beta: usize, gamma: usize, delta: usize) -> T {
        let n = self.n_adj;
        let mut acc = T::zero();
        for eps in 0..n {
            acc = acc
                + self.get(delta, alpha, eps) * self.get(eps, beta, gamma)
                + self.get(delta, beta, eps) * self.get(eps, gamma, alpha)
                + self.get(delta, gamma, eps) * self.get(eps, alpha, beta);
        }
        acc
    }

    /// Max violation of the stored antisymmetry `C^γ_{αβ} = -C^γ_{βα}`.
    pub fn lower_antisymmetry_residual(&self) -> T {
        let n = self.n_adj;
        let mut worst = T::zero();
        for gamma in 0..n {
            for alpha in 0..n {
                for beta in 0..n {
                    let r = (self.get(gamma, alpha, beta) + self.get(gamma, beta, alpha)).abs();
                    if r > worst {
                        worst = r;
                    }
                }
            }
        }
        worst
    }

    /// Max violation of total antisymmetry under any transposition of
    /// `(α, β, γ)`; meaningful for trace-orthonormal compact algebras.
    pub fn total_antisymmetry_residual(&self) -> T {
        let n = self.n_adj;
        let mut worst = T::zero();
        for gamma in 0..n {
            for alpha in 0..n {
                for beta in 0..n {
                    let c = self.get(gamma, alpha, beta);
                    // swap lower pair, swap γ with α, swap γ with β
                    let r1 = (c + self.get(gamma, beta, alpha)).abs();
                    let r2 = (c + self.get(alpha, gamma, beta)).abs();
                    let r3 = (c + self.get(beta, alpha, gamma)).abs();
                    worst = worst.max(r1).max(r2).max(r3);
                }
            }
        }
        worst
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == T::zero())
    }
}

/// A compact Lie algebra in a fixed matrix representation.
#[derive(Debug, Clone)]
pub struct LieAlgebra<T> {
    name: String,
    generators: Vec<CMatrix<T>>,
    constants: StructureConstants<T>,
    /// Normalisation `k` in `tr(T_α T_β) = k δ_αβ`.
    trace_norm: T,
}

impl<T: Real> LieAlgebra<T> {
    /// Build and validate an algebra from a generator set.
    ///
    /// Rejects non-Hermitian generators, non-trace-orthogonal sets (the
    /// offending pair is named) and sets that do not close under
    /// commutation. The structure constants are extracted from traces and
    /// stored with exact α↔β antisymmetry.
    pub fn from_generators(name: &str, generators: Vec<CMatrix<T>>) -> Result<Self, CoreError> {
        let tol = spec_tol::<T>(1e-12);
        for (i, g) in generators.iter().enumerate() {
            let r = g.hermiticity_residual();
            if r > to_f64(tol) {
                return Err(CoreError::NotHermitian {
                    index: i,
                    residual: r,
                });
            }
        }
        let (constants, trace_norm) = extract_structure_constants(&generators)?;
        let algebra = Self {
            name: name.to_string(),
            generators,
            constants,
            trace_norm,
        };
        algebra.check_closure(tol)?;
        Ok(algebra)
    }

    /// Commutation-closure residual check `[T_α,T_β] = i C^γ_{αβ} T_γ`.
    fn check_closure(&self, tol: T) -> Result<(), CoreError> {
        for alpha in 0..self.n_adj() {
            for beta in 0..self.n_adj() {
                let r = self.commutation_residual(alpha, beta)?;
                if r > to_f64(tol) {
                    return Err(CoreError::AlgebraNotClosed {
                        alpha,
                        beta,
                        residual: r,
                        tolerance: to_f64(tol),
                    });
                }
            }
        }
        Ok(())
    }

    /// `max |[T_α,T_β] - i Σ_γ C^γ_{αβ} T_γ|` componentwise.
    pub fn commutation_residual(&self, alpha: usize, beta: usize) -> Result<f64, CoreError> {
        let comm = commutator(&self.generators[alpha], &self.generators[beta])?;
        let mut rhs = CMatrix::zeros(self.n_rep());
        for gamma in 0..self.n_adj() {
            let c = self.constants.get(gamma, alpha, beta);
            if c == T::zero() {
                continue;
            }
            rhs = rhs.add(&self.generators[gamma].scale(Complex::new(T::zero(), c)));
        }
        Ok(comm.max_abs_diff(&rhs))
    }

    /// Worst commutation residual over all generator pairs.
    pub fn max_commutation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for alpha in 0..self.n_adj() {
            for beta in 0..self.n_adj() {
                worst = worst.max(self.commutation_residual(alpha, beta).unwrap());
            }
        }
        worst
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of generators (adjoint dimension N).
    pub fn n_adj(&self) -> usize {
        self.generators.len()
    }

    /// Representation dimension n.
    pub fn n_rep(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    pub fn generator(&self, alpha: usize) -> &CMatrix<T> {
        &self.generators[alpha]
    }

    pub fn constants(&self) -> &StructureConstants<T> {
        &self.constants
    }

    /// Normalisation `k` in `tr(T_α T_β) = k δ_αβ`.
    pub fn trace_norm(&self) -> T {
        self.trace_norm
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_zero()
    }
}

/// Commutator `AB − BA` of two representation matrices.
pub fn commutator_op<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>, CoreError> {
    commutator(a, b)
}

/// Extract `C^γ_{αβ} = (1/(i k)) tr([T_α, T_β] T_γ)` from a trace-orthogonal
/// generator set, `k` measured as `tr(T_1²)`.
///
/// The result is stored with exact α↔β antisymmetry (the β<α half mirrors
/// the α<β half bitwise, the diagonal is exactly zero).
pub fn extract_structure_constants<T: Real>(
    generators: &[CMatrix<T>],
) -> Result<(StructureConstants<T>, T), CoreError> {
    let n_adj = generators.len();
    let tol = spec_tol::<T>(1e-12);
    let k = generators[0].mul(&generators[0])?.trace().re;
    if k <= T::zero() {
        return Err(CoreError::Invalid(format!(
            "trace normalisation tr(T_1²) = {} must be positive",
            to_f64(k)
        )));
    }
    // Orthogonality: tr(T_α T_β) = k δ_αβ.
    for alpha in 0..n_adj {
        for beta in alpha..n_adj {
            let t = generators[alpha].mul(&generators[beta])?.trace();
            let expected = if alpha == beta { k } else { T::zero() };
            let dev = ((t.re - expected) * (t.re - expected) + t.im * t.im).sqrt();
            if dev > tol * k.max(T::one()) {
                return Err(CoreError::NonOrthogonalGenerators {
                    first: alpha,
                    second: beta,
                    value: to_f64(t.re),
                    expected: to_f64(expected),
                });
            }
        }
    }
    let mut constants = StructureConstants::zeros(n_adj);
    for alpha in 0..n_adj {
        for beta in (alpha + 1)..n_adj {
            let comm = commutator(&generators[alpha], &generators[beta])?;
            for gamma in 0..n_adj {
                let t = comm.mul(&generators[gamma])?.trace();
                // C = t / (i k); a real residue of t would make C imaginary.
                if t.re.abs() > tol * k.max(T::one()) {
                    return Err(CoreError::Invalid(format!(
                        "structure constant C^{gamma}_{{{alpha}{beta}}} has imaginary residue {:e}",
                        to_f64(t.re.abs())
                    )));
                }
                let c = t.im / k;
                constants.set(gamma, alpha, beta, c);
                constants.set(gamma, beta, alpha, -c);
            }
        }
    }
    Ok((constants, k))
}

/// Max Jacobi residual of an algebra's structure constants.
pub fn verify_jacobi<T: Real>(algebra: &LieAlgebra<T>) -> T {
    algebra.constants().jacobi_residual()
}

/// Builtin algebra by name: `u1`, `su2` or `su3`.
pub fn builtin_algebra<T: Real>(name: &str) -> Result<LieAlgebra<T>, CoreError> {
    match name.to_ascii_lowercase().as_str() {
        "u1" => LieAlgebra::from_generators("u1", vec![CMatrix::from_rows(&[vec![(1.0, 0.0)]])?]),
        "su2" => LieAlgebra::from_generators("su2", su2_generators()?),
        "su3" => LieAlgebra::from_generators("su3", su3_generators()?),
        _ => Err(CoreError::UnknownAlgebra {
            name: name.to_string(),
        }),
    }
}

/// σ/2 doublet generators, `tr(T_α T_β) = δ_αβ/2`.
fn su2_generators<T: Real>() -> Result<Vec<CMatrix<T>>, CoreError> {
    Ok(vec![
        CMatrix::from_rows(&[vec![(0.0, 0.0), (0.5, 0.0)], vec![(0.5, 0.0), (0.0, 0.0)]])?,
        CMatrix::from_rows(&[vec![(0.0, 0.0), (0.0, -0.5)], vec![(0.0, 0.5), (0.0, 0.0)]])?,
        CMatrix::from_rows(&[vec![(0.5, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (-0.5, 0.0)]])?,
    ])
}

/// Half Gell-Mann triplet generators, `tr(T_α T_β) = δ_αβ/2`.
fn su3_generators<T: Real>() -> Result<Vec<CMatrix<T>>, CoreError> {
    let z = (0.0, 0.0);
    let h = (0.5, 0.0);
    let mh = (-0.5, 0.0);
    let ih = (0.0, 0.5);
    let mih = (0.0, -0.5);
    let s3 = 1.0 / (2.0 * 3.0f64.sqrt());
    Ok(vec![
        CMatrix::from_rows(&[vec![z, h, z], vec![h, z, z], vec![z, z, z]])?,
        CMatrix::from_rows(&[vec![z, mih, z], vec![ih, z, z], vec![z, z, z]])?,
        CMatrix::from_rows(&[vec![h, z, z], vec![z, mh, z], vec![z, z, z]])?,
        CMatrix::from_rows(&[vec![z, z, h], vec![z, z, z], vec![h, z, z]])?,
        CMatrix::from_rows(&[vec![z, z, mih], vec![z, z, z], vec![ih, z, z]])?,
        CMatrix::from_rows(&[vec![z, z, z], vec![z, z, h], vec![z, h, z]])?,
        CMatrix::from_rows(&[vec![z, z, z], vec![z, z, mih], vec![z, ih, z]])?,
        CMatrix::from_rows(&[
            vec![(s3, 0.0), z, z],
            vec![z, (s3, 0.0), z],
            vec![z, z, (-2.0 * s3, 0.0)],
        ])?,
    ])
}
