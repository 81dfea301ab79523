//! Standard space-time-gauge currents, coded independently of the main
//! tensor pipeline.
//!
//! This module is the oracle for the reduction comparison: it computes the
//! conserved currents of a gauge field that lives directly on space-time
//! (no velocity map, no λ contraction) with its own storage layout, its own
//! periodic indexing and its own finite-difference loops. It deliberately
//! shares no tensor-assembly code with [`crate::noether`].
//!
//! Site indices agree with [`crate::lattice::Lattice::index`] (axis 0 runs
//! fastest) so results can be compared sitewise.

use num_complex::Complex;
use num_traits::Zero;

use crate::Real;

/// Inputs of the reference computation, flattened to plain nested arrays.
pub struct ReferenceInput<T> {
    pub extents: [usize; 4],
    pub spacing: T,
    pub n_rep: usize,
    pub n_adj: usize,
    /// Matter samples, `phi[site][k]`.
    pub phi: Vec<Vec<Complex<T>>>,
    /// Space-time gauge field samples, `gauge[site][alpha][mu]`.
    pub gauge: Vec<Vec<[T; 4]>>,
    /// Representation generators, row-major `n×n` per adjoint index.
    pub generators: Vec<Vec<Complex<T>>>,
    /// Structure constants `constants[gamma][alpha][beta]`.
    pub constants: Vec<Vec<Vec<T>>>,
    pub coupling: T,
}

/// Currents of the standard space-time-gauge treatment,
/// `j[site][alpha][nu]`.
pub struct ReferenceCurrents<T> {
    pub j1: Vec<Vec<[T; 4]>>,
    pub j2: Vec<Vec<[T; 4]>>,
}

fn coords_of(extents: [usize; 4], mut idx: usize) -> [usize; 4] {
    let mut c = [0usize; 4];
    for axis in 0..4 {
        c[axis] = idx % extents[axis];
        idx /= extents[axis];
    }
    c
}

fn index_of(extents: [usize; 4], c: [usize; 4]) -> usize {
    ((c[3] * extents[2] + c[2]) * extents[1] + c[1]) * extents[0] + c[0]
}

fn neighbour(extents: [usize; 4], idx: usize, axis: usize, forward: bool) -> usize {
    let mut c = coords_of(extents, idx);
    let l = extents[axis];
    c[axis] = if forward {
        (c[axis] + 1) % l
    } else {
        (c[axis] + l - 1) % l
    };
    index_of(extents, c)
}

/// `J⁽¹⁾` and `J⁽²⁾` of the space-time-gauge treatment.
pub fn standard_currents<T: Real>(input: &ReferenceInput<T>) -> ReferenceCurrents<T> {
    let sites: usize = input.extents.iter().product();
    let n_rep = input.n_rep;
    let n_adj = input.n_adj;
    let half = T::one() / (input.spacing + input.spacing);
    let g = input.coupling;

    // generator action (T_alpha phi)_k, own little matvec
    let t_phi = |alpha: usize, phi: &[Complex<T>]| -> Vec<Complex<T>> {
        let gen = &input.generators[alpha];
        (0..n_rep)
            .map(|row| {
                let mut acc = Complex::<T>::zero();
                for (col, p) in phi.iter().enumerate() {
                    acc = acc + gen[row * n_rep + col] * *p;
                }
                acc
            })
            .collect()
    };

    // matter gradient dphi[site][mu][k]
    let mut dphi = vec![vec![vec![Complex::<T>::zero(); n_rep]; 4]; sites];
    for site in 0..sites {
        for mu in 0..4 {
            let plus = neighbour(input.extents, site, mu, true);
            let minus = neighbour(input.extents, site, mu, false);
            for k in 0..n_rep {
                dphi[site][mu][k] = (input.phi[plus][k] - input.phi[minus][k]).scale(half);
            }
        }
    }

    // field strength f[site][alpha][mu][nu] =
    //   d_nu A_mu - d_mu A_nu + g C^gamma_{alpha beta} A_mu,beta A_nu,gamma
    let mut strength = vec![vec![[[T::zero(); 4]; 4]; n_adj]; sites];
    for site in 0..sites {
        for mu in 0..4 {
            for nu in 0..4 {
                if mu == nu {
                    continue;
                }
                let plus_nu = neighbour(input.extents, site, nu, true);
                let minus_nu = neighbour(input.extents, site, nu, false);
                let plus_mu = neighbour(input.extents, site, mu, true);
                let minus_mu = neighbour(input.extents, site, mu, false);
                for alpha in 0..n_adj {
                    let d_nu_a_mu =
                        (input.gauge[plus_nu][alpha][mu] - input.gauge[minus_nu][alpha][mu]) * half;
                    let d_mu_a_nu =
                        (input.gauge[plus_mu][alpha][nu] - input.gauge[minus_mu][alpha][nu]) * half;
                    let mut cross = T::zero();
                    for beta in 0..n_adj {
                        for gamma in 0..n_adj {
                            cross = cross
                                + input.constants[gamma][alpha][beta]
                                    * input.gauge[site][beta][mu]
                                    * input.gauge[site][gamma][nu];
                        }
                    }
                    strength[site][alpha][mu][nu] = d_nu_a_mu - d_mu_a_nu + g * cross;
                }
            }
        }
    }

    // J2^nu = Sum_mu d_mu F^{mu nu}
    let mut j2 = vec![vec![[T::zero(); 4]; n_adj]; sites];
    for site in 0..sites {
        for alpha in 0..n_adj {
            for nu in 0..4 {
                let mut acc = T::zero();
                for mu in 0..4 {
                    let plus = neighbour(input.extents, site, mu, true);
                    let minus = neighbour(input.extents, site, mu, false);
                    acc = acc
                        + (strength[plus][alpha][mu][nu] - strength[minus][alpha][mu][nu]) * half;
                }
                j2[site][alpha][nu] = acc;
            }
        }
    }

    // J1^mu = g [ -2 Im Sum_k conj(Dhat_mu phi_k) (T_alpha phi)_k
    //             + Sum_nu C^gamma_{alpha beta} F_beta^{mu nu} A_nu,gamma ]
    let mut j1 = vec![vec![[T::zero(); 4]; n_adj]; sites];
    for site in 0..sites {
        let phi = &input.phi[site];
        let tphis: Vec<Vec<Complex<T>>> = (0..n_adj).map(|a| t_phi(a, phi)).collect();
        // covariant gradient Dhat_mu phi_k
        let mut dhat = vec![vec![Complex::<T>::zero(); n_rep]; 4];
        for mu in 0..4 {
            for k in 0..n_rep {
                let mut acc = dphi[site][mu][k];
                for alpha in 0..n_adj {
                    acc = acc
                        + tphis[alpha][k]
                            * Complex::new(T::zero(), g * input.gauge[site][alpha][mu]);
                }
                dhat[mu][k] = acc;
            }
        }
        for alpha in 0..n_adj {
            for mu in 0..4 {
                let mut s = Complex::<T>::zero();
                for k in 0..n_rep {
                    s = s + dhat[mu][k].conj() * tphis[alpha][k];
                }
                let matter = -(s.im + s.im);
                let mut gauge_part = T::zero();
                for nu in 0..4 {
                    for beta in 0..n_adj {
                        for gamma in 0..n_adj {
                            gauge_part = gauge_part
                                + input.constants[gamma][alpha][beta]
                                    * strength[site][beta][mu][nu]
                                    * input.gauge[site][gamma][nu];
                        }
                    }
                }
                j1[site][alpha][mu] = g * (matter + gauge_part);
            }
        }
    }

    ReferenceCurrents { j1, j2 }
}
