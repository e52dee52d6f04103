//! Cramér-Rao lower bounds for DOA estimation with a switch-compressed
//! array, and the antenna-selection objective they induce.
//!
//! The general bound treats the stochastic signal model with unknown
//! parameter vector `[theta_1..theta_Q, sigma_1^2..sigma_Q^2, sigma_v^2]`.
//! With `R` the receive covariance, the per-snapshot Fisher information is
//!
//! ```text
//! G_ij = tr(R^-1 dR/da_i R^-1 dR/da_j)
//! ```
//!
//! and the DOA block of the bound is the inverse Schur complement
//! `CRLB = [T (G_tt - G_tn G_nn^-1 G_nt)]^-1`, i.e. the noise and source
//! powers are treated as nuisance parameters and projected out. All
//! covariance derivatives are analytic here; the test-side oracle rebuilds
//! the same matrix from finite differences.
//!
//! For a single source the bound collapses to
//! `1/(T * beta * [K*sum(p^2) - (sum p)^2])` over the selected indices `p`,
//! with `beta = 8 pi^2 (d0/lambda)^2 gamma^2 cos^2(theta) / (1 + K gamma)`
//! and `d0/lambda = 1/2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::array::{steering_vector, ArrayGeometry, SelectionVector, SourceEnsemble};
use crate::linalg::{hermitian_condition, invert_hermitian};
use crate::{Error, Result};

/// Q x Q CRLB matrix (radians^2) with its diagonal.
#[derive(Debug, Clone)]
pub struct CrlbResult {
    matrix: DMatrix<f64>,
    per_source: Vec<f64>,
}

impl CrlbResult {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Per-source variance floors, diagonal of the CRLB matrix.
    pub fn per_source(&self) -> &[f64] {
        &self.per_source
    }
}

/// Derivative of the steering vector with respect to the angle:
/// elementwise `j*(2*pi/lambda)*d0*cos(theta)*p_i*a_i`.
pub fn steering_derivative(geometry: &ArrayGeometry, theta: f64) -> Result<DVector<Complex64>> {
    let a = steering_vector(geometry, theta)?;
    let c = theta.cos();
    Ok(DVector::from_iterator(
        geometry.len(),
        geometry
            .indices()
            .iter()
            .zip(a.iter())
            .map(|(&p, &ai)| Complex64::new(0.0, std::f64::consts::PI * p as f64 * c) * ai),
    ))
}

/// Analytic covariance derivatives for the parameter vector
/// `[theta; source powers; noise power]`, length 2Q+1.
fn covariance_derivatives(
    geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
) -> Result<Vec<DMatrix<Complex64>>> {
    let k = geometry.len();
    let q = sources.source_count();
    let mut derivs = Vec::with_capacity(2 * q + 1);
    for (qi, &th) in sources.angles().iter().enumerate() {
        let a = steering_vector(geometry, th)?;
        let da = steering_derivative(geometry, th)?;
        let p = sources.powers()[qi];
        let mut d = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                d[(i, j)] = (da[i] * a[j].conj() + a[i] * da[j].conj()) * p;
            }
        }
        derivs.push(d);
    }
    for &th in sources.angles() {
        let a = steering_vector(geometry, th)?;
        let mut d = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                d[(i, j)] = a[i] * a[j].conj();
            }
        }
        derivs.push(d);
    }
    derivs.push(DMatrix::identity(k, k));
    Ok(derivs)
}

/// Per-snapshot Fisher information matrix over
/// `[theta; source powers; noise power]` built from a list of covariance
/// derivatives. Exposed for the finite-difference oracle in tests.
pub fn fisher_information_from_derivatives(
    r_inv: &DMatrix<Complex64>,
    derivs: &[DMatrix<Complex64>],
) -> DMatrix<f64> {
    let n = derivs.len();
    let prods: Vec<DMatrix<Complex64>> = derivs.iter().map(|d| r_inv * d).collect();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // tr(P_i P_j) with P = R^-1 dR is real for Hermitian R, dR
            let mut tr = Complex64::new(0.0, 0.0);
            for a in 0..r_inv.nrows() {
                for b in 0..r_inv.nrows() {
                    tr += prods[i][(a, b)] * prods[j][(b, a)];
                }
            }
            g[(i, j)] = tr.re;
            g[(j, i)] = tr.re;
        }
    }
    g
}

/// General multi-source CRLB with source and noise powers projected out as
/// nuisance parameters.
pub fn crlb_general(
    geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
    snapshots: usize,
) -> Result<CrlbResult> {
    let k = geometry.len();
    let q = sources.source_count();
    if q >= k {
        return Err(Error::Domain(format!(
            "identifiability requires Q < K, got Q={q}, K={k}"
        )));
    }
    if snapshots == 0 {
        return Err(Error::Domain("need at least one snapshot".into()));
    }
    let r = crate::array::true_covariance(geometry, sources)?;
    let cond = hermitian_condition(r.data())?;
    if cond > 1e12 {
        return Err(Error::Numerical(format!(
            "covariance condition number {cond:.3e} exceeds 1e12"
        )));
    }
    let r_inv = invert_hermitian(r.data())?;
    let derivs = covariance_derivatives(geometry, sources)?;
    let g = fisher_information_from_derivatives(&r_inv, &derivs);
    crlb_from_fisher(&g, q, snapshots)
}

/// Schur-complement reduction of the full Fisher matrix to the DOA block.
/// Shared by the production path and the finite-difference oracle.
pub fn crlb_from_fisher(g: &DMatrix<f64>, q: usize, snapshots: usize) -> Result<CrlbResult> {
    let n = g.nrows();
    let g_tt = g.view((0, 0), (q, q)).into_owned();
    let g_tn = g.view((0, q), (q, n - q)).into_owned();
    let g_nn = g.view((q, q), (n - q, n - q)).into_owned();
    let g_nn_inv = g_nn
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("nuisance Fisher block is singular".into()))?;
    let eff = g_tt - &g_tn * g_nn_inv * g_tn.transpose();
    let mut crlb = eff
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("effective Fisher matrix is singular".into()))?;
    crlb.scale_mut(1.0 / snapshots as f64);
    // symmetrize roundoff
    let sym = (&crlb + crlb.transpose()) * 0.5;
    let per_source = (0..q).map(|i| sym[(i, i)]).collect();
    Ok(CrlbResult { matrix: sym, per_source })
}

/// Closed-form single-source CRLB for a selection at look angle `theta`,
/// SNR ratio `gamma` and `snapshots` samples.
pub fn crlb_single_source(
    selection: &SelectionVector,
    theta: f64,
    gamma: f64,
    snapshots: usize,
) -> Result<f64> {
    let k = selection.chain_count();
    if k < 2 {
        return Err(Error::Domain("single-source bound needs K >= 2".into()));
    }
    if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain("angle must lie in (-pi/2, pi/2)".into()));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain("SNR ratio gamma must be positive".into()));
    }
    if snapshots == 0 {
        return Err(Error::Domain("need at least one snapshot".into()));
    }
    let bracket = selection_objective(selection);
    // beta = 8 pi^2 (d0/lambda)^2 gamma^2 cos^2(theta) / (1 + K gamma),
    // with half-wavelength spacing (d0/lambda)^2 = 1/4
    let beta = 2.0 * std::f64::consts::PI.powi(2) * gamma * gamma * theta.cos().powi(2)
        / (1.0 + k as f64 * gamma);
    Ok(1.0 / (snapshots as f64 * beta * bracket))
}

/// Aperture-spread objective `K * sum(p^2) - (sum p)^2` over the selected
/// 1-based indices; maximizing it minimizes the single-source CRLB.
pub fn selection_objective(selection: &SelectionVector) -> f64 {
    objective_of_indices(selection.chain_count(), &selection.selected_indices())
}

/// Same objective on a plain index list.
pub fn objective_of_indices(k: usize, indices: &[u32]) -> f64 {
    let s1: u64 = indices.iter().map(|&p| p as u64).sum();
    let s2: u64 = indices.iter().map(|&p| (p as u64) * (p as u64)).sum();
    (k as u64 * s2) as f64 - (s1 * s1) as f64
}
