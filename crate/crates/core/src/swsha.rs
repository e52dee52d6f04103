//! Time-switched sparse hybrid array: nested subarray schedule, augmented
//! array, difference co-array analytics, the vectorized virtual signal and
//! the on-grid dictionary it is matched against.
//!
//! A schedule runs `L` slots; slot `l` connects the `K = K1 + K2` chains to
//!
//! ```text
//! {(k1-1)L + l | 1 <= k1 <= K1} U {(k2(K1+1)-1)L + l | 1 <= k2 <= K2}
//! ```
//!
//! The slot sets are pairwise disjoint (every element of slot `l` is
//! congruent to `l` mod `L`), their union spans `K2(K1+1)L` grid cells, and
//! the difference co-array of the union is hole-free.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::array::{steering_vector, ArrayGeometry, CovarianceMatrix, SourceEnsemble};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Per-slot nested subarray plan.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedSchedule {
    k1: usize,
    k2: usize,
    slots: usize,
    slot_sets: Vec<Vec<u32>>,
    /// Switch settling delay in seconds; bookkeeping only. Its carrier
    /// phase rotation is compensated exactly during stacking, so the value
    /// never enters any computation.
    pub switch_delay: f64,
}

impl NestedSchedule {
    /// Build the schedule for an explicit `(K1, K2, L)` split.
    pub fn from_split(k1: usize, k2: usize, slots: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 || slots == 0 {
            return Err(Error::Domain("K1, K2 and L must all be positive".into()));
        }
        let slot_sets = (1..=slots)
            .map(|l| Self::slot_indices(k1, k2, slots, l))
            .collect();
        Ok(Self { k1, k2, slots, slot_sets, switch_delay: 0.0 })
    }

    fn slot_indices(k1: usize, k2: usize, slots: usize, l: usize) -> Vec<u32> {
        let mut set: Vec<u32> = (1..=k1).map(|i| ((i - 1) * slots + l) as u32).collect();
        set.extend((1..=k2).map(|i| ((i * (k1 + 1) - 1) * slots + l) as u32));
        set
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// RF chain count `K = K1 + K2`.
    pub fn chain_count(&self) -> usize {
        self.k1 + self.k2
    }

    pub fn slot_count(&self) -> usize {
        self.slots
    }

    /// Largest antenna index used by any slot: `K2(K1+1)L`.
    pub fn max_element(&self) -> u32 {
        (self.k2 * (self.k1 + 1) * self.slots) as u32
    }

    /// Index set of slot `l` (1-based).
    pub fn subarray_indices(&self, l: usize) -> Result<&[u32]> {
        if l < 1 || l > self.slots {
            return Err(Error::Domain(format!(
                "slot {l} outside 1..={}",
                self.slots
            )));
        }
        Ok(&self.slot_sets[l - 1])
    }

    pub fn slot_sets(&self) -> &[Vec<u32>] {
        &self.slot_sets
    }

    /// Sorted union of all slot sets.
    pub fn augmented(&self) -> AugmentedArray {
        let mut indices: Vec<u32> = self.slot_sets.iter().flatten().copied().collect();
        indices.sort_unstable();
        AugmentedArray { indices }
    }

    /// Geometry of a single slot's subarray.
    pub fn slot_geometry(&self, l: usize, wavelength: f64) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.subarray_indices(l)?.to_vec(), wavelength)
    }

    /// Plain-text export: one slot per line, comma-separated indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for set in &self.slot_sets {
            let line: Vec<String> = set.iter().map(|i| i.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Largest slot count that keeps the schedule inside an `m`-element
/// aperture for the given split.
pub fn max_slots(m: usize, k1: usize, k2: usize) -> usize {
    m / (k2 * (k1 + 1))
}

/// Build a schedule for `m` antennas and `k` chains using the DOF-optimal
/// split (`K1 = K2 = K/2` for even `K`, `K1 = (K-1)/2`, `K2 = (K+1)/2` for
/// odd). `slots = None` picks the largest feasible `L`.
pub fn build_schedule(m: usize, k: usize, slots: Option<usize>) -> Result<NestedSchedule> {
    if k < 2 {
        return Err(Error::Domain("need at least two RF chains".into()));
    }
    if m < k {
        return Err(Error::Domain(format!("need M >= K, got M={m}, K={k}")));
    }
    let (k1, k2) = if k % 2 == 0 {
        (k / 2, k / 2)
    } else {
        ((k - 1) / 2, (k + 1) / 2)
    };
    let l_max = max_slots(m, k1, k2);
    if l_max == 0 {
        return Err(Error::Domain(format!(
            "aperture M={m} cannot hold even one slot of the K={k} nested split"
        )));
    }
    let l = slots.unwrap_or(l_max);
    if l == 0 {
        return Err(Error::Domain("slot count must be positive".into()));
    }
    if l > l_max {
        return Err(Error::Domain(format!(
            "requested L={l} exceeds L_max={l_max} for M={m}, K={k}"
        )));
    }
    NestedSchedule::from_split(k1, k2, l)
}

/// Sorted union of the slot subarrays.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedArray {
    indices: Vec<u32>,
}

impl AugmentedArray {
    pub fn from_indices(mut indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("augmented array cannot be empty".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("augmented array has duplicate indices".into()));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn geometry(&self, wavelength: f64) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.indices.clone(), wavelength)
    }
}

/// All pairwise index differences of an augmented array.
#[derive(Debug, Clone)]
pub struct DifferenceCoarray {
    lags: Vec<i64>,
    unique_lags: Vec<i64>,
    consecutive_halfspan: u32,
}

impl DifferenceCoarray {
    /// Full difference multiset, sorted ascending; size `|P|^2`.
    pub fn lags(&self) -> &[i64] {
        &self.lags
    }

    /// Deduplicated lags, sorted ascending.
    pub fn unique_lags(&self) -> &[i64] {
        &self.unique_lags
    }

    /// Largest `u` with `{0, +/-1, .., +/-u}` all present.
    pub fn consecutive_halfspan(&self) -> u32 {
        self.consecutive_halfspan
    }
}

/// Compute the difference co-array `{n1 - n2 | n1, n2 in P}` as a multiset.
pub fn difference_coarray(p: &AugmentedArray) -> DifferenceCoarray {
    let idx = p.indices();
    let mut lags = Vec::with_capacity(idx.len() * idx.len());
    for &a in idx {
        for &b in idx {
            lags.push(a as i64 - b as i64);
        }
    }
    lags.sort_unstable();
    let mut unique_lags = lags.clone();
    unique_lags.dedup();
    let mut halfspan = 0u32;
    while unique_lags.binary_search(&(halfspan as i64 + 1)).is_ok() {
        halfspan += 1;
    }
    DifferenceCoarray { lags, unique_lags, consecutive_halfspan: halfspan }
}

/// Degrees of freedom: half-length of the maximal consecutive symmetric
/// segment around lag zero.
pub fn dof(coarray: &DifferenceCoarray) -> usize {
    coarray.consecutive_halfspan() as usize
}

/// Stacked covariance of all `L` slot measurements after carrier-phase
/// compensation, ordered by ascending augmented-array index.
///
/// One signal vector drives every slot block of a snapshot (the narrowband
/// identity `s(t + tau) = s(t) e^{j 2 pi f_c tau}` makes the compensated
/// blocks share it), while the noise is drawn independently per slot.
pub fn synthesize_augmented_covariance(
    schedule: &NestedSchedule,
    sources: &SourceEnsemble,
    t: usize,
    seed: u64,
    wavelength: f64,
) -> Result<CovarianceMatrix> {
    if t == 0 {
        return Err(Error::Domain("need at least one snapshot per slot".into()));
    }
    let k = schedule.chain_count();
    let l = schedule.slot_count();
    let q = sources.source_count();
    let n = l * k;

    // steering vectors per slot, stacked in slot order
    let mut stacked_steering: Vec<DVector<Complex64>> = Vec::with_capacity(q);
    for (qi, &th) in sources.angles().iter().enumerate() {
        let _ = qi;
        let mut v = DVector::zeros(n);
        for li in 0..l {
            let g = schedule.slot_geometry(li + 1, wavelength)?;
            let a = steering_vector(&g, th)?;
            for r in 0..k {
                v[li * k + r] = a[r];
            }
        }
        stacked_steering.push(v);
    }

    // permutation: stacked slot order -> ascending augmented index order
    let stacked_indices: Vec<u32> = schedule.slot_sets().iter().flatten().copied().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| stacked_indices[i]);

    let sig_scale: Vec<f64> = sources.powers().iter().map(|p| (p / 2.0).sqrt()).collect();
    let noise_scale = (sources.noise_power() / 2.0).sqrt();
    let mut rng = rng_from_seed(seed);
    let mut draw = move |scale: f64| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    };

    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    let mut y = DVector::<Complex64>::zeros(n);
    for _ in 0..t {
        y.fill(Complex64::new(0.0, 0.0));
        for qi in 0..q {
            let s = draw(sig_scale[qi]);
            y.axpy(s, &stacked_steering[qi], Complex64::new(1.0, 0.0));
        }
        for r in 0..n {
            y[r] += draw(noise_scale);
        }
        // accumulate y y^H with rows/cols permuted to sorted order
        for i in 0..n {
            let yi = y[order[i]];
            for j in 0..n {
                acc[(i, j)] += yi * y[order[j]].conj();
            }
        }
    }
    acc.scale_mut(1.0 / t as f64);
    CovarianceMatrix::new(acc)
}

/// Infinite-snapshot covariance `A_P R_s A_P^H + sigma_v^2 I` on the
/// augmented array; the oracle counterpart of
/// [`synthesize_augmented_covariance`].
pub fn augmented_covariance_analytic(
    schedule: &NestedSchedule,
    sources: &SourceEnsemble,
    wavelength: f64,
) -> Result<CovarianceMatrix> {
    let g = schedule.augmented().geometry(wavelength)?;
    crate::array::true_covariance(&g, sources)
}

/// Column-major vectorization of the augmented covariance together with
/// its lag bookkeeping: entry `i + j*N` observes lag `p_i - p_j`.
#[derive(Debug, Clone)]
pub struct VirtualSignal {
    values: DVector<Complex64>,
    lags: Vec<i64>,
}

impl VirtualSignal {
    /// Assemble from raw parts; lengths must agree.
    pub fn from_parts(values: DVector<Complex64>, lags: Vec<i64>) -> Result<Self> {
        if values.len() != lags.len() {
            return Err(Error::Domain("values and lag map differ in length".into()));
        }
        Ok(Self { values, lags })
    }

    pub fn values(&self) -> &DVector<Complex64> {
        &self.values
    }

    /// Lag observed by each vector entry, aligned with `values`.
    pub fn lags(&self) -> &[i64] {
        &self.lags
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 0
    }
}

/// `vec()` the covariance (column-major) and attach the lag map.
pub fn vectorize_virtual(
    r: &CovarianceMatrix,
    array: &AugmentedArray,
) -> Result<VirtualSignal> {
    let n = array.len();
    if r.dim() != n {
        return Err(Error::Domain(format!(
            "covariance dim {} does not match augmented array size {n}",
            r.dim()
        )));
    }
    let p = array.indices();
    let mut values = DVector::zeros(n * n);
    let mut lags = vec![0i64; n * n];
    for j in 0..n {
        for i in 0..n {
            values[i + j * n] = r.data()[(i, j)];
            lags[i + j * n] = p[i] as i64 - p[j] as i64;
        }
    }
    Ok(VirtualSignal { values, lags })
}

/// Uniform angular grid, half-open `[min, max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    min: f64,
    step: f64,
    count: usize,
}

impl AngleGrid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Domain("grid step must be positive".into()));
        }
        if max <= min {
            return Err(Error::Domain("grid needs max > min".into()));
        }
        let count = ((max - min) / step).round() as usize;
        if count == 0 {
            return Err(Error::Domain("grid is empty".into()));
        }
        Ok(Self { min, step, count })
    }

    /// Grid in degrees, stored in radians.
    pub fn from_degrees(min_deg: f64, max_deg: f64, step_deg: f64) -> Result<Self> {
        Self::new(min_deg.to_radians(), max_deg.to_radians(), step_deg.to_radians())
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn angle(&self, i: usize) -> f64 {
        self.min + self.step * i as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.angle(i)).collect()
    }
}

/// On-grid dictionary: one column per grid angle, rows aligned with the
/// virtual-signal entries (same lag order).
#[derive(Debug, Clone)]
pub struct DictionaryMatrix {
    grid: AngleGrid,
    matrix: DMatrix<Complex64>,
}

impl DictionaryMatrix {
    /// Assemble from raw parts; one column per grid angle.
    pub fn from_parts(grid: AngleGrid, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.ncols() != grid.len() {
            return Err(Error::Domain("dictionary columns must match the grid".into()));
        }
        Ok(Self { grid, matrix })
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Build the dictionary for the given lag rows: entry at (row, col) is
/// `exp(j*pi*lag_row*sin(theta_col))`.
pub fn build_dictionary(lags: &[i64], grid: &AngleGrid) -> Result<DictionaryMatrix> {
    if lags.is_empty() {
        return Err(Error::Domain("dictionary needs at least one lag row".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("dictionary needs a nonempty grid".into()));
    }
    let mut matrix = DMatrix::zeros(lags.len(), grid.len());
    for col in 0..grid.len() {
        let s = grid.angle(col).sin();
        for (row, &d) in lags.iter().enumerate() {
            matrix[(row, col)] = Complex64::from_polar(1.0, std::f64::consts::PI * d as f64 * s);
        }
    }
    Ok(DictionaryMatrix { grid: grid.clone(), matrix })
}
