//! Physical-array model: geometry on the half-wavelength grid, steering
//! vectors, switch-selection algebra, snapshot synthesis and covariance
//! estimation.
//!
//! Antennas sit on a uniform grid with spacing `d0 = lambda/2`; antenna `m`
//! (1-based) is at position `m * d0`, so a steering-vector entry is
//! `exp(j*pi*m*sin(theta))`. All angles are radians internally.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigen, hermitize};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Antenna index set on the half-wavelength grid plus carrier wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    indices: Vec<u32>,
    wavelength: f64,
}

impl ArrayGeometry {
    /// `indices` must be strictly increasing and >= 1.
    pub fn new(indices: Vec<u32>, wavelength: f64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("geometry needs at least one antenna".into()));
        }
        if indices[0] < 1 {
            return Err(Error::Domain("antenna indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "antenna indices must be strictly increasing".into(),
            ));
        }
        if !(wavelength > 0.0) {
            return Err(Error::Domain("wavelength must be positive".into()));
        }
        Ok(Self { indices, wavelength })
    }

    /// Contiguous array `{1, .., m}`.
    pub fn ula(m: usize, wavelength: f64) -> Result<Self> {
        Self::new((1..=m as u32).collect(), wavelength)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Element spacing `d0 = lambda/2`.
    pub fn element_spacing(&self) -> f64 {
        self.wavelength / 2.0
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// True if the indices form a contiguous run `{c, c+1, ..}`.
    pub fn is_contiguous(&self) -> bool {
        self.indices.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// One switch configuration: a binary mask over the `M` antennas with
/// exactly `K` ones. Equivalent to the `M x K` selection matrix whose
/// columns are unit vectors; only the mask is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionVector {
    rho: Vec<bool>,
    k: usize,
}

impl SelectionVector {
    pub fn from_mask(rho: Vec<bool>) -> Result<Self> {
        let k = rho.iter().filter(|&&b| b).count();
        if k == 0 {
            return Err(Error::Domain("selection must pick at least one antenna".into()));
        }
        Ok(Self { rho, k })
    }

    /// Build from 1-based antenna indices out of `m` antennas.
    pub fn from_indices(indices: &[u32], m: usize) -> Result<Self> {
        let mut rho = vec![false; m];
        for &i in indices {
            if i < 1 || i as usize > m {
                return Err(Error::Domain(format!("antenna index {i} outside 1..={m}")));
            }
            if rho[i as usize - 1] {
                return Err(Error::Domain(format!("duplicate antenna index {i}")));
            }
            rho[i as usize - 1] = true;
        }
        Self::from_mask(rho)
    }

    /// The split template `{1..ceil(K/2)} U {M-floor(K/2)+1..M}`: half the
    /// chains on each edge of the aperture.
    pub fn boundary_template(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::Domain(format!("need 1 <= K <= M, got K={k}, M={m}")));
        }
        let lo = k - k / 2;
        let mut idx: Vec<u32> = (1..=lo as u32).collect();
        idx.extend(((m - k / 2 + 1)..=m).map(|i| i as u32));
        Self::from_indices(&idx, m)
    }

    pub fn mask(&self) -> &[bool] {
        &self.rho
    }

    pub fn array_len(&self) -> usize {
        self.rho.len()
    }

    /// Number of RF chains K.
    pub fn chain_count(&self) -> usize {
        self.k
    }

    /// Selected antenna indices, 1-based, ascending.
    pub fn selected_indices(&self) -> Vec<u32> {
        self.rho
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    pub fn is_selected(&self, index_1based: u32) -> bool {
        self.rho
            .get(index_1based as usize - 1)
            .copied()
            .unwrap_or(false)
    }
}

/// Far-field narrowband source set: angles, per-source powers and the
/// noise power at the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceEnsemble {
    angles: Vec<f64>,
    powers: Vec<f64>,
    noise_power: f64,
}

impl SourceEnsemble {
    pub fn new(angles: Vec<f64>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Domain("need at least one source".into()));
        }
        if angles.len() != powers.len() {
            return Err(Error::Domain("angles and powers must have equal length".into()));
        }
        if angles.iter().any(|t| !(t.abs() < std::f64::consts::FRAC_PI_2)) {
            return Err(Error::Domain("source angles must lie in (-pi/2, pi/2)".into()));
        }
        for i in 0..angles.len() {
            for j in (i + 1)..angles.len() {
                if angles[i] == angles[j] {
                    return Err(Error::Domain("source angles must be pairwise distinct".into()));
                }
            }
        }
        if powers.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Domain("source powers must be positive".into()));
        }
        if !(noise_power >= 0.0) {
            return Err(Error::Domain("noise power must be nonnegative".into()));
        }
        Ok(Self { angles, powers, noise_power })
    }

    pub fn single(angle: f64, power: f64, noise_power: f64) -> Result<Self> {
        Self::new(vec![angle], vec![power], noise_power)
    }

    /// Equal-power sources at the given SNR (dB) over unit noise.
    pub fn equal_power_from_snr(angles: Vec<f64>, snr_db: f64) -> Result<Self> {
        let p = 10f64.powf(snr_db / 10.0);
        let n = angles.len();
        Self::new(angles, vec![p; n], 1.0)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn source_count(&self) -> usize {
        self.angles.len()
    }
}

/// Complex snapshot block; rows are array elements, columns are the `T`
/// time samples.
#[derive(Debug, Clone)]
pub struct SnapshotMatrix {
    data: DMatrix<Complex64>,
}

impl SnapshotMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.ncols() == 0 {
            return Err(Error::Domain("snapshot matrix needs T >= 1 columns".into()));
        }
        Ok(Self { data })
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn snapshot_count(&self) -> usize {
        self.data.ncols()
    }

    pub fn element_count(&self) -> usize {
        self.data.nrows()
    }

    /// Rotate every snapshot by a common phase. The sample covariance is
    /// invariant under this map.
    pub fn rotated(&self, phase: f64) -> Self {
        let z = Complex64::from_polar(1.0, phase);
        Self { data: self.data.map(|v| v * z) }
    }
}

/// Hermitian positive-semidefinite covariance matrix.
///
/// Construction validates Hermitian symmetry (relative 1e-10) and
/// eigenvalue nonnegativity (relative -1e-8).
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    data: DMatrix<Complex64>,
}

impl CovarianceMatrix {
    pub fn new(mut data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::Domain("covariance matrix must be square".into()));
        }
        let scale = data.iter().map(|v| v.norm()).fold(0.0_f64, f64::max).max(1.0);
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                if (data[(i, j)] - data[(j, i)].conj()).norm() > 1e-10 * scale {
                    return Err(Error::Domain(format!(
                        "matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        hermitize(&mut data);
        let (vals, _) = hermitian_eigen(&data)?;
        let max = vals.iter().fold(0.0_f64, |a, &b| a.max(b));
        if vals[0] < -1e-8 * max.max(1.0) {
            return Err(Error::Domain(format!(
                "matrix is not PSD: min eigenvalue {}",
                vals[0]
            )));
        }
        Ok(Self { data })
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace_re(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.data)?.0.iter().copied().collect())
    }
}

/// Steering vector `a(theta)` of the geometry; entry `i` is
/// `exp(j*(2*pi/lambda)*p_i*d0*sin(theta))` with unit modulus.
pub fn steering_vector(geometry: &ArrayGeometry, theta: f64) -> Result<DVector<Complex64>> {
    if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "angle {theta} outside the open interval (-pi/2, pi/2)"
        )));
    }
    let s = theta.sin();
    Ok(DVector::from_iterator(
        geometry.len(),
        geometry
            .indices()
            .iter()
            .map(|&p| Complex64::from_polar(1.0, std::f64::consts::PI * p as f64 * s)),
    ))
}

/// Keep only the selected antennas of `full`; the compressed index set
/// stays a subset of the physical grid.
pub fn compress_geometry(full: &ArrayGeometry, sel: &SelectionVector) -> Result<ArrayGeometry> {
    if sel.array_len() != full.len() {
        return Err(Error::Domain(format!(
            "selection length {} does not match geometry size {}",
            sel.array_len(),
            full.len()
        )));
    }
    let indices: Vec<u32> = full
        .indices()
        .iter()
        .zip(sel.mask())
        .filter(|(_, &keep)| keep)
        .map(|(&p, _)| p)
        .collect();
    ArrayGeometry::new(indices, full.wavelength())
}

/// Draw `t` snapshots `y = A s + v` with circular complex Gaussian signals
/// (`s_q ~ CN(0, sigma_q^2)`) and noise (`v ~ CN(0, sigma_v^2 I)`).
/// Bit-reproducible for a fixed seed.
pub fn synthesize_snapshots(
    geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
    t: usize,
    seed: u64,
) -> Result<SnapshotMatrix> {
    if t == 0 {
        return Err(Error::Domain("need at least one snapshot".into()));
    }
    let k = geometry.len();
    let q = sources.source_count();
    let a: Vec<DVector<Complex64>> = sources
        .angles()
        .iter()
        .map(|&th| steering_vector(geometry, th))
        .collect::<Result<_>>()?;
    let sig_scale: Vec<f64> = sources.powers().iter().map(|p| (p / 2.0).sqrt()).collect();
    let noise_scale = (sources.noise_power() / 2.0).sqrt();

    let mut rng = rng_from_seed(seed);
    let mut draw = move |scale: f64| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    };

    let mut data = DMatrix::zeros(k, t);
    for col in 0..t {
        for qi in 0..q {
            let s = draw(sig_scale[qi]);
            for row in 0..k {
                data[(row, col)] += a[qi][row] * s;
            }
        }
        for row in 0..k {
            data[(row, col)] += draw(noise_scale);
        }
    }
    SnapshotMatrix::new(data)
}

/// Sample covariance `(1/T) * sum_t y(t) y(t)^H`.
pub fn sample_covariance(snapshots: &SnapshotMatrix) -> Result<CovarianceMatrix> {
    let y = snapshots.data();
    let t = snapshots.snapshot_count() as f64;
    let mut r = y * y.adjoint();
    r.scale_mut(1.0 / t);
    CovarianceMatrix::new(r)
}

/// Ensemble covariance `A R_s A^H + sigma_v^2 I`.
pub fn true_covariance(
    geometry: &ArrayGeometry,
    sources: &SourceEnsemble,
) -> Result<CovarianceMatrix> {
    let k = geometry.len();
    let mut r = DMatrix::<Complex64>::zeros(k, k);
    for (qi, &th) in sources.angles().iter().enumerate() {
        let a = steering_vector(geometry, th)?;
        let p = sources.powers()[qi];
        for i in 0..k {
            for j in 0..k {
                r[(i, j)] += a[i] * a[j].conj() * p;
            }
        }
    }
    for i in 0..k {
        r[(i, i)] += sources.noise_power();
    }
    CovarianceMatrix::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn steering_at_broadside_is_all_ones() {
        let g = ArrayGeometry::ula(8, 2.0).unwrap();
        let a = steering_vector(&g, 0.0).unwrap();
        assert_eq!(a.len(), 8);
        for v in a.iter() {
            assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
            assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn steering_near_endfire_alternates_sign() {
        // indices {1,2} at theta -> pi/2: phases -> pi*1, pi*2, entries -> (-1, 1)
        let g = ArrayGeometry::new(vec![1, 2], 2.0).unwrap();
        let eps = 1e-9;
        let a = steering_vector(&g, std::f64::consts::FRAC_PI_2 - eps).unwrap();
        assert!((a[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        assert!((a[1] - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn steering_phases_at_30_degrees() {
        // sin(30 deg) = 1/2 so phases are (pi/2) * {1, 3, 5}
        let g = ArrayGeometry::new(vec![1, 3, 5], 2.0).unwrap();
        let a = steering_vector(&g, deg(30.0)).unwrap();
        for (i, &p) in [1.0_f64, 3.0, 5.0].iter().enumerate() {
            let want = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * p);
            assert!((a[i] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn steering_rejects_endfire() {
        let g = ArrayGeometry::ula(4, 2.0).unwrap();
        assert!(steering_vector(&g, std::f64::consts::FRAC_PI_2).is_err());
        assert!(steering_vector(&g, -2.0).is_err());
    }

    #[test]
    fn steering_entries_unit_modulus() {
        let g = ArrayGeometry::new(vec![1, 5, 17, 64, 128], 2.0).unwrap();
        for &th in &[-1.3, -0.4, 0.0, 0.9, 1.5] {
            let a = steering_vector(&g, th).unwrap();
            for v in a.iter() {
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compress_full_selection_is_identity() {
        let g = ArrayGeometry::ula(8, 2.0).unwrap();
        let sel = SelectionVector::from_mask(vec![true; 8]).unwrap();
        let c = compress_geometry(&g, &sel).unwrap();
        assert_eq!(c, g);
    }

    #[test]
    fn compress_keeps_selected_indices() {
        let g = ArrayGeometry::ula(8, 2.0).unwrap();
        let sel = SelectionVector::from_indices(&[1, 2, 7, 8], 8).unwrap();
        let c = compress_geometry(&g, &sel).unwrap();
        assert_eq!(c.indices(), &[1, 2, 7, 8]);
    }

    #[test]
    fn compress_paper_boundary_selection() {
        let g = ArrayGeometry::ula(128, 2.0).unwrap();
        let sel = SelectionVector::from_indices(&[1, 2, 3, 4, 125, 126, 127, 128], 128).unwrap();
        let c = compress_geometry(&g, &sel).unwrap();
        assert_eq!(c.indices(), &[1, 2, 3, 4, 125, 126, 127, 128]);
    }

    #[test]
    fn boundary_template_shapes() {
        let t = SelectionVector::boundary_template(128, 8).unwrap();
        assert_eq!(t.selected_indices(), &[1, 2, 3, 4, 125, 126, 127, 128]);
        let t = SelectionVector::boundary_template(10, 3).unwrap();
        assert_eq!(t.selected_indices(), &[1, 2, 10]);
    }

    #[test]
    fn noiseless_single_source_single_snapshot_is_rank_one() {
        let g = ArrayGeometry::ula(4, 2.0).unwrap();
        let src = SourceEnsemble::single(deg(17.0), 1.0, 0.0).unwrap();
        let y = synthesize_snapshots(&g, &src, 1, 3).unwrap();
        // column proportional to a(theta): elementwise ratio is constant
        let a = steering_vector(&g, deg(17.0)).unwrap();
        let ratio = y.data()[(0, 0)] / a[0];
        for i in 1..4 {
            assert!((y.data()[(i, 0)] / a[i] - ratio).norm() < 1e-12);
        }
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let g = ArrayGeometry::ula(4, 2.0).unwrap();
        let src = SourceEnsemble::single(0.3, 1.0, 1.0).unwrap();
        let y1 = synthesize_snapshots(&g, &src, 16, 42).unwrap();
        let y2 = synthesize_snapshots(&g, &src, 16, 42).unwrap();
        let y3 = synthesize_snapshots(&g, &src, 16, 43).unwrap();
        assert_eq!(y1.data(), y2.data());
        assert_ne!(y1.data(), y3.data());
    }

    #[test]
    fn sample_covariance_of_single_snapshot_is_outer_product() {
        let g = ArrayGeometry::ula(3, 2.0).unwrap();
        let src = SourceEnsemble::single(0.1, 2.0, 0.5).unwrap();
        let y = synthesize_snapshots(&g, &src, 1, 9).unwrap();
        let r = sample_covariance(&y).unwrap();
        let col = y.data().column(0);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.data()[(i, j)] - col[i] * col[j].conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_snapshots_give_zero_covariance() {
        let y = SnapshotMatrix::new(DMatrix::zeros(3, 5)).unwrap();
        let r = sample_covariance(&y).unwrap();
        assert!(r.data().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn sample_covariance_converges_to_ensemble() {
        // law of large numbers at T = 1e5: Frobenius relative error within 2%
        let g = ArrayGeometry::ula(4, 2.0).unwrap();
        let src = SourceEnsemble::single(deg(25.0), 1.0, 1.0).unwrap();
        let y = synthesize_snapshots(&g, &src, 100_000, 7).unwrap();
        let rs = sample_covariance(&y).unwrap();
        let rt = true_covariance(&g, &src).unwrap();
        let diff = (rs.data() - rt.data()).norm();
        assert!(diff / rt.data().norm() < 0.02, "rel err {}", diff / rt.data().norm());
    }

    #[test]
    fn true_covariance_rank_one_noiseless() {
        let g = ArrayGeometry::new(vec![3, 9], 2.0).unwrap();
        let src = SourceEnsemble::single(0.4, 1.0, 0.0).unwrap();
        let r = true_covariance(&g, &src).unwrap();
        assert_relative_eq!(r.trace_re(), 2.0, epsilon = 1e-12);
        let ev = r.eigenvalues().unwrap();
        assert!(ev[0].abs() < 1e-12);
        assert_relative_eq!(ev[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn true_covariance_noise_only() {
        let g = ArrayGeometry::ula(5, 2.0).unwrap();
        let src = SourceEnsemble::new(vec![0.2], vec![1e-300], 0.7);
        // powers must be > 0; use a tiny power to approximate sigma_s = 0
        let src = src.unwrap();
        let r = true_covariance(&g, &src).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 0.7 } else { 0.0 };
                assert!((r.data()[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn true_covariance_diagonal_is_total_power() {
        let g = ArrayGeometry::new(vec![1, 4, 6, 13], 2.0).unwrap();
        let src =
            SourceEnsemble::new(vec![-0.5, 0.2, 0.9], vec![1.5, 0.5, 2.0], 0.25).unwrap();
        let r = true_covariance(&g, &src).unwrap();
        for i in 0..4 {
            assert_relative_eq!(r.data()[(i, i)].re, 1.5 + 0.5 + 2.0 + 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn true_covariance_matches_bruteforce_build() {
        let g = ArrayGeometry::ula(6, 2.0).unwrap();
        let src = SourceEnsemble::new(vec![deg(-20.0), deg(35.0)], vec![1.0, 2.0], 0.3).unwrap();
        let r = true_covariance(&g, &src).unwrap();
        // independent brute-force: R = sum_q p_q a_q a_q^H + nv I elementwise
        let mut want = DMatrix::<Complex64>::zeros(6, 6);
        for (qi, &th) in src.angles().iter().enumerate() {
            let a = steering_vector(&g, th).unwrap();
            let p = src.powers()[qi];
            for i in 0..6 {
                for j in 0..6 {
                    want[(i, j)] += a[i] * a[j].conj() * p;
                }
            }
        }
        for i in 0..6 {
            want[(i, i)] += 0.3;
        }
        assert!((r.data() - &want).norm() < 1e-12);
        // smallest eigenvalue >= noise floor
        let ev = r.eigenvalues().unwrap();
        assert!(ev[0] >= 0.3 - 1e-10);
    }

    #[test]
    fn covariance_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.4, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(CovarianceMatrix::new(m).is_err());
    }

    #[test]
    fn geometry_invariants_enforced() {
        assert!(ArrayGeometry::new(vec![], 2.0).is_err());
        assert!(ArrayGeometry::new(vec![0, 1], 2.0).is_err());
        assert!(ArrayGeometry::new(vec![3, 3], 2.0).is_err());
        assert!(ArrayGeometry::new(vec![5, 2], 2.0).is_err());
        assert!(ArrayGeometry::new(vec![1, 2], 0.0).is_err());
    }

    #[test]
    fn selection_invariants_enforced() {
        assert!(SelectionVector::from_mask(vec![false; 4]).is_err());
        assert!(SelectionVector::from_indices(&[0], 4).is_err());
        assert!(SelectionVector::from_indices(&[5], 4).is_err());
        assert!(SelectionVector::from_indices(&[2, 2], 4).is_err());
        let s = SelectionVector::from_indices(&[2, 4], 4).unwrap();
        assert_eq!(s.chain_count(), 2);
        assert_eq!(s.selected_indices(), &[2, 4]);
    }

    #[test]
    fn ensemble_invariants_enforced() {
        assert!(SourceEnsemble::new(vec![], vec![], 1.0).is_err());
        assert!(SourceEnsemble::new(vec![0.1, 0.1], vec![1.0, 1.0], 1.0).is_err());
        assert!(SourceEnsemble::new(vec![0.1], vec![0.0], 1.0).is_err());
        assert!(SourceEnsemble::new(vec![2.0], vec![1.0], 1.0).is_err());
        assert!(SourceEnsemble::new(vec![0.1], vec![1.0], -0.1).is_err());
    }
}
