//! DOA estimators: MVDR spectrum search, Root-MUSIC on a contiguous
//! subarray, and the alternating selection/regression loop that couples
//! the two trained networks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::array::{
    compress_geometry, sample_covariance, steering_vector, synthesize_snapshots, ArrayGeometry,
    CovarianceMatrix, SelectionVector, SourceEnsemble,
};
use crate::linalg::{hermitian_condition, hermitian_eigen, invert_hermitian};
use crate::neural::{asn_infer, dnn_infer, normalized_features, Mlp};
use crate::rng::derive_seed;
use crate::swsha::AngleGrid;
use crate::{Error, Result};

/// Capon spectrum `P(theta) = 1 / (a^H R^-1 a)` over a grid. Diagonal
/// loading `1e-6 * tr(R)/K` is applied when the covariance is poorly
/// conditioned (Capon 1969).
pub fn mvdr_spectrum(
    r: &CovarianceMatrix,
    geometry: &ArrayGeometry,
    grid: &AngleGrid,
) -> Result<Vec<f64>> {
    if geometry.len() != r.dim() {
        return Err(Error::Domain("geometry and covariance dimension mismatch".into()));
    }
    let mut m = r.data().clone();
    if hermitian_condition(&m)? > 1e10 {
        let load = 1e-6 * r.trace_re() / r.dim() as f64;
        for i in 0..m.nrows() {
            m[(i, i)] += Complex64::new(load, 0.0);
        }
    }
    let r_inv = invert_hermitian(&m)
        .map_err(|_| Error::Numerical("covariance is singular even after loading".into()))?;
    let mut spectrum = Vec::with_capacity(grid.len());
    for gi in 0..grid.len() {
        let a = steering_vector(geometry, grid.angle(gi))?;
        let denom = (a.adjoint() * &r_inv * &a)[(0, 0)].re;
        if denom <= 0.0 {
            return Err(Error::Numerical("nonpositive MVDR denominator".into()));
        }
        spectrum.push(1.0 / denom);
    }
    Ok(spectrum)
}

/// Peak of the Capon spectrum; ties resolve to the first grid point.
pub fn mvdr_estimate(
    r: &CovarianceMatrix,
    geometry: &ArrayGeometry,
    grid: &AngleGrid,
) -> Result<f64> {
    let spectrum = mvdr_spectrum(r, geometry, grid)?;
    let mut best = 0usize;
    for (i, v) in spectrum.iter().enumerate() {
        if *v > spectrum[best] {
            best = i;
        }
    }
    Ok(grid.angle(best))
}

/// Durand-Kerner root finder for a complex polynomial given by ascending
/// coefficients. Deterministic start, tolerance 1e-12.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    // trim negligible leading coefficients
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::Numerical("zero polynomial".into()));
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().norm() < 1e-14 * scale {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            acc = acc * z + monic[k];
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-12 {
            break;
        }
    }
    Ok(roots)
}

/// Root-MUSIC on a contiguous subarray: noise-subspace polynomial rooting,
/// returning the `q` angles whose roots sit closest to (and inside) the
/// unit circle, ascending.
pub fn root_music(
    r: &CovarianceMatrix,
    geometry: &ArrayGeometry,
    q: usize,
) -> Result<Vec<f64>> {
    let k = geometry.len();
    if !geometry.is_contiguous() {
        return Err(Error::Domain("root-MUSIC needs a contiguous subarray".into()));
    }
    if q == 0 || q >= k {
        return Err(Error::Domain(format!(
            "identifiability requires 0 < Q < K, got Q={q}, K={k}"
        )));
    }
    if r.dim() != k {
        return Err(Error::Domain("geometry and covariance dimension mismatch".into()));
    }
    let (_, vectors) = hermitian_eigen(r.data())?;
    // noise subspace: eigenvectors of the K - Q smallest eigenvalues
    let en = vectors.columns(0, k - q).into_owned();
    let c = &en * en.adjoint();
    // f(z) = sum_d c_d z^d, d in [-(K-1), K-1], c_d = d-th diagonal sum;
    // multiplied by z^{K-1} to a degree 2K-2 polynomial
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * k - 1];
    for d in -(k as i64 - 1)..=(k as i64 - 1) {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..k {
            let j = i as i64 + d;
            if (0..k as i64).contains(&j) {
                s += c[(i, j as usize)];
            }
        }
        coeffs[(d + k as i64 - 1) as usize] = s;
    }
    let roots = polynomial_roots(&coeffs)?;
    // keep roots inside (or on) the unit circle, nearest first
    let mut inside: Vec<Complex64> = roots
        .into_iter()
        .filter(|z| z.norm() <= 1.0 + 1e-9)
        .collect();
    inside.sort_by(|a, b| {
        (a.norm() - 1.0)
            .abs()
            .partial_cmp(&(b.norm() - 1.0).abs())
            .unwrap()
    });
    if inside.len() < q {
        return Err(Error::Numerical("too few roots inside the unit circle".into()));
    }
    let mut angles: Vec<f64> = inside[..q]
        .iter()
        .map(|z| {
            let s = (z.arg() / std::f64::consts::PI).clamp(-1.0, 1.0);
            s.asin()
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(angles)
}

/// Loop controls for [`asn_dnn_estimate`].
#[derive(Debug, Clone)]
pub struct AsnDnnConfig {
    /// Convergence threshold on consecutive estimates, radians.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Output clamp range, radians (the regressor's training range).
    pub angle_min: f64,
    pub angle_max: f64,
    /// Grid for the MVDR initialization.
    pub mvdr_grid: AngleGrid,
}

impl Default for AsnDnnConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.5f64.to_radians(),
            max_iter: 10,
            angle_min: (-60f64).to_radians(),
            angle_max: 60f64.to_radians(),
            mvdr_grid: AngleGrid::from_degrees(-60.0, 60.5, 0.5).unwrap(),
        }
    }
}

/// Outcome of the alternating loop.
#[derive(Debug, Clone, Copy)]
pub struct AsnDnnEstimate {
    /// Final estimate `(last + previous)/2`, radians.
    pub theta: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Alternating selection/estimation loop.
///
/// MVDR on the `rho0` configuration seeds the angle; each iteration asks
/// the selection network for a configuration, takes a fresh block of `t`
/// snapshots on it, and regresses the angle from the accumulated sample
/// covariance. Accumulation restarts whenever the selection changes, so
/// only measurements taken under the current configuration are pooled.
/// The loop stops once consecutive estimates agree within `epsilon`.
pub fn asn_dnn_estimate(
    asn: &Mlp,
    dnn: &Mlp,
    full_geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
    t: usize,
    rho0: &SelectionVector,
    cfg: &AsnDnnConfig,
    seed: u64,
) -> Result<AsnDnnEstimate> {
    if !(cfg.epsilon > 0.0) {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    if cfg.max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }
    let k = rho0.chain_count();
    let clamp = |v: f64| v.clamp(cfg.angle_min, cfg.angle_max);

    // initialization: MVDR on the rho0 configuration
    let geom0 = compress_geometry(full_geometry, rho0)?;
    let y0 = synthesize_snapshots(&geom0, sources, t, derive_seed(seed, 0))?;
    let r0 = sample_covariance(&y0)?;
    let mut prev = clamp(mvdr_estimate(&r0, &geom0, &cfg.mvdr_grid)?);

    let mut cur = prev;
    let mut converged = false;
    let mut iterations = 0;
    let mut acc: Option<(SelectionVector, DMatrix<Complex64>, usize)> = None;

    for j in 1..=cfg.max_iter {
        iterations = j;
        let sel = asn_infer(asn, prev.cos(), k)?;
        let geom = compress_geometry(full_geometry, &sel)?;
        let y = synthesize_snapshots(&geom, sources, t, derive_seed(seed, j as u64))?;
        let r = sample_covariance(&y)?;
        acc = match acc {
            Some((s, sum, n)) if s == sel => Some((s, sum + r.data(), n + 1)),
            _ => Some((sel, r.data().clone(), 1)),
        };
        let (_, sum, n) = acc.as_ref().unwrap();
        let mean = CovarianceMatrix::new(sum / Complex64::new(*n as f64, 0.0))?;
        let feats = normalized_features(&mean);
        cur = clamp(dnn_infer(dnn, &feats)?);
        if (cur - prev).abs() <= cfg.epsilon {
            converged = true;
            break;
        }
        prev = cur;
    }
    Ok(AsnDnnEstimate { theta: (cur + prev) / 2.0, converged, iterations })
}

/// Single-shot regression baseline: features of one sample covariance on a
/// fixed configuration, no selection loop.
pub fn plain_dnn_estimate(
    dnn: &Mlp,
    geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
    t: usize,
    clamp_range: (f64, f64),
    seed: u64,
) -> Result<f64> {
    let y = synthesize_snapshots(geometry, sources, t, seed)?;
    let r = sample_covariance(&y)?;
    let est = dnn_infer(dnn, &normalized_features(&r))?;
    Ok(est.clamp(clamp_range.0, clamp_range.1))
}
