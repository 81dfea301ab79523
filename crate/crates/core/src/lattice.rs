//! Periodic 4D space-time grid, sampled tensor fields, and central
//! finite-difference operators.
//!
//! The O(h²) central stencil on a periodic grid is a linear shift operator,
//! so mixed partials commute (to rounding) and the double divergence of any
//! antisymmetric rank-2 field cancels — the property the conservation checks
//! lean on.

use std::io::{self, Write};

use num_complex::Complex;
use num_traits::Zero;

use crate::{error::CoreError, lit, Real};

/// Periodic 4D grid with uniform spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice<T> {
    extents: [usize; 4],
    spacing: T,
}

impl<T: Real> Lattice<T> {
    /// Central stencils need two distinct neighbours per side.
    pub const MIN_EXTENT: usize = 4;

    pub fn new(extents: [usize; 4], spacing: T) -> Result<Self, CoreError> {
        for (axis, &l) in extents.iter().enumerate() {
            if l < Self::MIN_EXTENT {
                return Err(CoreError::ExtentTooSmall { axis, extent: l });
            }
        }
        if spacing <= T::zero() {
            return Err(CoreError::NonPositiveSpacing {
                value: crate::to_f64(spacing),
            });
        }
        Ok(Self { extents, spacing })
    }

    /// Cubic lattice `l⁴`.
    pub fn cubic(l: usize, spacing: T) -> Result<Self, CoreError> {
        Self::new([l; 4], spacing)
    }

    pub fn extents(&self) -> [usize; 4] {
        self.extents
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn site_count(&self) -> usize {
        self.extents.iter().product()
    }

    /// Linear site index; axis 0 runs fastest.
    #[inline]
    pub fn index(&self, c: [usize; 4]) -> usize {
        ((c[3] * self.extents[2] + c[2]) * self.extents[1] + c[1]) * self.extents[0] + c[0]
    }

    #[inline]
    pub fn coords(&self, mut idx: usize) -> [usize; 4] {
        let mut c = [0usize; 4];
        for axis in 0..4 {
            c[axis] = idx % self.extents[axis];
            idx /= self.extents[axis];
        }
        c
    }

    /// Neighbour index with periodic wrap.
    #[inline]
    pub fn shifted(&self, idx: usize, axis: usize, step: isize) -> usize {
        let mut c = self.coords(idx);
        let l = self.extents[axis] as isize;
        c[axis] = (c[axis] as isize + step).rem_euclid(l) as usize;
        self.index(c)
    }

    /// Space-time position of a site, `x_μ = h · c_μ`.
    #[inline]
    pub fn position(&self, idx: usize) -> [T; 4] {
        let c = self.coords(idx);
        let mut x = [T::zero(); 4];
        for axis in 0..4 {
            x[axis] = self.spacing * T::from_usize(c[axis]).unwrap();
        }
        x
    }

    /// Physical box length along an axis, `L_μ · h`.
    pub fn box_length(&self, axis: usize) -> T {
        self.spacing * T::from_usize(self.extents[axis]).unwrap()
    }
}

/// Tensor slot layout of a field value at one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldShape {
    /// One value per site.
    Scalar,
    /// Space-time 4-vector, slot `μ`.
    Vector,
    /// Rank-2 tensor `(ν, μ)`; used for λ^ν_μ.
    Rank2,
    /// Rank-3 tensor `(ρ, ν, μ)`; used for ∂_ρ λ^ν_μ.
    Rank3,
    /// One value per adjoint index `α`.
    Adjoint { n_adj: usize },
    /// Adjoint-indexed 4-vector, slots `(α, μ)`.
    AdjointVector { n_adj: usize },
    /// Adjoint-indexed rank-2 tensor, slots `(α, μ, ν)`.
    AdjointRank2 { n_adj: usize },
    /// Matter multiplet, slot `k`.
    Matter { n_rep: usize },
    /// Space-time gradient of a matter multiplet, slots `(μ, k)`.
    MatterVector { n_rep: usize },
}

impl FieldShape {
    pub fn slot_count(&self) -> usize {
        match *self {
            FieldShape::Scalar => 1,
            FieldShape::Vector => 4,
            FieldShape::Rank2 => 16,
            FieldShape::Rank3 => 64,
            FieldShape::Adjoint { n_adj } => n_adj,
            FieldShape::AdjointVector { n_adj } => n_adj * 4,
            FieldShape::AdjointRank2 { n_adj } => n_adj * 16,
            FieldShape::Matter { n_rep } => n_rep,
            FieldShape::MatterVector { n_rep } => n_rep * 4,
        }
    }

    /// Decompose a flat slot into its named indices (for CSV export).
    pub fn slot_indices(&self, slot: usize) -> Vec<usize> {
        match *self {
            FieldShape::Scalar => vec![],
            FieldShape::Vector => vec![slot],
            FieldShape::Rank2 => vec![slot / 4, slot % 4],
            FieldShape::Rank3 => vec![slot / 16, (slot / 4) % 4, slot % 4],
            FieldShape::Adjoint { .. } => vec![slot],
            FieldShape::AdjointVector { .. } => vec![slot / 4, slot % 4],
            FieldShape::AdjointRank2 { .. } => vec![slot / 16, (slot / 4) % 4, slot % 4],
            FieldShape::Matter { .. } => vec![slot],
            FieldShape::MatterVector { n_rep } => vec![slot / n_rep, slot % n_rep],
        }
    }

    /// Header names matching [`FieldShape::slot_indices`].
    pub fn index_names(&self) -> &'static [&'static str] {
        match self {
            FieldShape::Scalar => &[],
            FieldShape::Vector => &["mu"],
            FieldShape::Rank2 => &["nu", "mu"],
            FieldShape::Rank3 => &["rho", "nu", "mu"],
            FieldShape::Adjoint { .. } => &["alpha"],
            FieldShape::AdjointVector { .. } => &["alpha", "mu"],
            FieldShape::AdjointRank2 { .. } => &["alpha", "mu", "nu"],
            FieldShape::Matter { .. } => &["k"],
            FieldShape::MatterVector { .. } => &["mu", "k"],
        }
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

/// Flat slot of a rank-2 entry `(ν, μ)`.
#[inline]
pub fn rank2_slot(nu: usize, mu: usize) -> usize {
    nu * 4 + mu
}

/// Flat slot of a rank-3 entry `(ρ, ν, μ)`.
#[inline]
pub fn rank3_slot(rho: usize, nu: usize, mu: usize) -> usize {
    (rho * 4 + nu) * 4 + mu
}

/// Flat slot of an adjoint-vector entry `(α, μ)`.
#[inline]
pub fn adjoint_vector_slot(alpha: usize, mu: usize) -> usize {
    alpha * 4 + mu
}

/// Flat slot of an adjoint-rank-2 entry `(α, μ, ν)`.
#[inline]
pub fn adjoint_rank2_slot(alpha: usize, mu: usize, nu: usize) -> usize {
    (alpha * 4 + mu) * 4 + nu
}

/// Flat slot of a matter-gradient entry `(μ, k)`.
#[inline]
pub fn matter_vector_slot(mu: usize, k: usize, n_rep: usize) -> usize {
    mu * n_rep + k
}

/// Which 4-slot of a tensor field a divergence contracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivSlot {
    /// The single vector slot of `Vector` / `AdjointVector` / `MatterVector`.
    Vector,
    /// First space-time slot `μ` of `AdjointRank2` (the `(α, μ, ν)` layout).
    First,
    /// Second space-time slot `ν` of `AdjointRank2`.
    Second,
}

/// A sampled field: one complex value per site per slot, site-major.
///
/// Fields that are mathematically real carry a `real` tag; their imaginary
/// parts stay exactly zero under the linear lattice operations.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField<T> {
    lattice: Lattice<T>,
    shape: FieldShape,
    real: bool,
    values: Vec<Complex<T>>,
}

impl<T: Real> LatticeField<T> {
    pub fn zeros(lattice: Lattice<T>, shape: FieldShape) -> Self {
        let n = lattice.site_count() * shape.slot_count();
        Self {
            lattice,
            shape,
            real: true,
            values: vec![Complex::zero(); n],
        }
    }

    /// Sample a complex-valued function of `(site, slot)`.
    pub fn from_fn(
        lattice: Lattice<T>,
        shape: FieldShape,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let slots = shape.slot_count();
        let mut values = Vec::with_capacity(lattice.site_count() * slots);
        for site in 0..lattice.site_count() {
            for slot in 0..slots {
                values.push(f(site, slot));
            }
        }
        Self {
            lattice,
            shape,
            real: false,
            values,
        }
    }

    /// Sample a real-valued function of `(site, slot)`; the field is
    /// real-tagged.
    pub fn from_real_fn(
        lattice: Lattice<T>,
        shape: FieldShape,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let mut field = Self::from_fn(lattice, shape, |site, slot| {
            Complex::new(f(site, slot), T::zero())
        });
        field.real = true;
        field
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn shape(&self) -> FieldShape {
        self.shape
    }

    pub fn slot_count(&self) -> usize {
        self.shape.slot_count()
    }

    pub fn real_tagged(&self) -> bool {
        self.real
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn value(&self, site: usize, slot: usize) -> Complex<T> {
        self.values[site * self.shape.slot_count() + slot]
    }

    #[inline]
    pub fn set_value(&mut self, site: usize, slot: usize, v: Complex<T>) {
        if v.im != T::zero() {
            self.real = false;
        }
        self.values[site * self.shape.slot_count() + slot] = v;
    }

    /// Per-site slice of slot values.
    #[inline]
    pub fn site(&self, site: usize) -> &[Complex<T>] {
        let n = self.shape.slot_count();
        &self.values[site * n..(site + 1) * n]
    }

    fn check_same_layout(&self, other: &Self) -> Result<(), CoreError> {
        if self.lattice != other.lattice {
            return Err(CoreError::LatticeMismatch);
        }
        if self.shape != other.shape {
            return Err(CoreError::ShapeMismatch {
                expected: self.shape.describe(),
                found: other.shape.describe(),
            });
        }
        Ok(())
    }

    /// Central difference `(f(x+hê_μ) − f(x−hê_μ)) / 2h` with periodic wrap;
    /// every slot is differentiated independently.
    pub fn partial(&self, axis: usize) -> Result<Self, CoreError> {
        if axis >= 4 {
            return Err(CoreError::AxisOutOfRange { axis });
        }
        let slots = self.shape.slot_count();
        let inv2h = T::one() / (lit::<T>(2.0) * self.lattice.spacing());
        let mut values = vec![Complex::zero(); self.values.len()];
        for site in 0..self.lattice.site_count() {
            let plus = self.lattice.shifted(site, axis, 1) * slots;
            let minus = self.lattice.shifted(site, axis, -1) * slots;
            let here = site * slots;
            for s in 0..slots {
                values[here + s] = (self.values[plus + s] - self.values[minus + s]).scale(inv2h);
            }
        }
        Ok(Self {
            lattice: self.lattice,
            shape: self.shape,
            real: self.real,
            values,
        })
    }

    /// All four partials assembled into the next-rank shape. The derivative
    /// index is appended right after the adjoint index when one is present,
    /// otherwise it leads: `Scalar → Vector(μ)`, `Matter(k) → MatterVector(μ,k)`,
    /// `Rank2(ν,μ) → Rank3(ρ,ν,μ)`, `AdjointVector(α,ν) → AdjointRank2(α,μ,ν)`
    /// with `μ` the derivative axis.
    pub fn gradient(&self) -> Result<Self, CoreError> {
        let out_shape = match self.shape {
            FieldShape::Scalar => FieldShape::Vector,
            FieldShape::Matter { n_rep } => FieldShape::MatterVector { n_rep },
            FieldShape::Rank2 => FieldShape::Rank3,
            FieldShape::AdjointVector { n_adj } => FieldShape::AdjointRank2 { n_adj },
            other => {
                return Err(CoreError::ShapeMismatch {
                    expected: "Scalar | Matter | Rank2 | AdjointVector".to_string(),
                    found: other.describe(),
                })
            }
        };
        let mut out = Self::zeros(self.lattice, out_shape);
        out.real = self.real;
        for axis in 0..4 {
            let d = self.partial(axis)?;
            for site in 0..self.lattice.site_count() {
                match self.shape {
                    FieldShape::Scalar => {
                        out.values[site * 4 + axis] = d.value(site, 0);
                    }
                    FieldShape::Matter { n_rep } => {
                        for k in 0..n_rep {
                            out.values[site * 4 * n_rep + matter_vector_slot(axis, k, n_rep)] =
                                d.value(site, k);
                        }
                    }
                    FieldShape::Rank2 => {
                        for nu in 0..4 {
                            for mu in 0..4 {
                                out.values[site * 64 + rank3_slot(axis, nu, mu)] =
                                    d.value(site, rank2_slot(nu, mu));
                            }
                        }
                    }
                    FieldShape::AdjointVector { n_adj } => {
                        for alpha in 0..n_adj {
                            for nu in 0..4 {
                                out.values
                                    [site * n_adj * 16 + adjoint_rank2_slot(alpha, axis, nu)] =
                                    d.value(site, adjoint_vector_slot(alpha, nu));
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(out)
    }

    /// `Σ_μ ∂_μ v_μ` over the selected 4-slot; remaining slots broadcast.
    pub fn divergence(&self, slot: DivSlot) -> Result<Self, CoreError> {
        let (out_shape, in_slot): (FieldShape, Box<dyn Fn(usize, usize) -> usize>) =
            match (self.shape, slot) {
                (FieldShape::Vector, DivSlot::Vector) => {
                    (FieldShape::Scalar, Box::new(|_out, mu| mu))
                }
                (FieldShape::AdjointVector { n_adj }, DivSlot::Vector) => (
                    FieldShape::Adjoint { n_adj },
                    Box::new(adjoint_vector_slot),
                ),
                (FieldShape::MatterVector { n_rep }, DivSlot::Vector) => (
                    FieldShape::Matter { n_rep },
                    Box::new(move |k, mu| matter_vector_slot(mu, k, n_rep)),
                ),
                (FieldShape::AdjointRank2 { n_adj }, DivSlot::First) => (
                    FieldShape::AdjointVector { n_adj },
                    // out slot (α, ν), contract μ
                    Box::new(|out, mu| adjoint_rank2_slot(out / 4, mu, out % 4)),
                ),
                (FieldShape::AdjointRank2 { n_adj }, DivSlot::Second) => (
                    FieldShape::AdjointVector { n_adj },
                    Box::new(|out, nu| adjoint_rank2_slot(out / 4, out % 4, nu)),
                ),
                (shape, sel) => {
                    return Err(CoreError::ShapeMismatch {
                        expected: format!("a field with a 4-vector slot for {sel:?}"),
                        found: shape.describe(),
                    })
                }
            };
        let out_slots = out_shape.slot_count();
        let in_slots = self.shape.slot_count();
        let inv2h = T::one() / (lit::<T>(2.0) * self.lattice.spacing());
        let mut out = Self::zeros(self.lattice, out_shape);
        out.real = self.real;
        for site in 0..self.lattice.site_count() {
            for o in 0..out_slots {
                let mut acc = Complex::zero();
                for mu in 0..4 {
                    let s = in_slot(o, mu);
                    let plus = self.lattice.shifted(site, mu, 1) * in_slots + s;
                    let minus = self.lattice.shifted(site, mu, -1) * in_slots + s;
                    acc = acc + (self.values[plus] - self.values[minus]).scale(inv2h);
                }
                out.values[site * out_slots + o] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_same_layout(other)?;
        Ok(Self {
            lattice: self.lattice,
            shape: self.shape,
            real: self.real && other.real,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_same_layout(other)?;
        Ok(Self {
            lattice: self.lattice,
            shape: self.shape,
            real: self.real && other.real,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            lattice: self.lattice,
            shape: self.shape,
            real: self.real,
            values: self.values.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            lattice: self.lattice,
            shape: self.shape,
            real: self.real && s.im == T::zero(),
            values: self.values.iter().map(|a| a * s).collect(),
        }
    }

    /// `sqrt(Σ |v|²)` over all sites and slots.
    pub fn l2_norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
            .sqrt()
    }

    /// Site-count-normalised norm, comparable across resolutions.
    pub fn rms_norm(&self) -> T {
        self.l2_norm() / T::from_usize(self.values.len()).unwrap().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.norm()))
    }

    pub fn max_imag(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.im.abs()))
    }

    /// Largest componentwise difference to another field.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T, CoreError> {
        self.check_same_layout(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm())))
    }

    /// Snapshot as CSV: site index, slot indices, re, im.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        write!(w, "site")?;
        for name in self.shape.index_names() {
            write!(w, ",{name}")?;
        }
        writeln!(w, ",re,im")?;
        let slots = self.shape.slot_count();
        for site in 0..self.lattice.site_count() {
            for slot in 0..slots {
                let v = self.value(site, slot);
                write!(w, "{site}")?;
                for ix in self.shape.slot_indices(slot) {
                    write!(w, ",{ix}")?;
                }
                writeln!(w, ",{:e},{:e}", crate::to_f64(v.re), crate::to_f64(v.im))?;
            }
        }
        Ok(())
    }
}
