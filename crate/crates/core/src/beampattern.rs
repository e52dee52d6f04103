//! Selection beampattern, peak-sidelobe-level evaluation and the
//! PSL-constrained CRLB-minimizing antenna selection search.
//!
//! The beampattern of a selection at mainlobe angle `theta_m` is
//! `B(theta) = |sum_{m in sel} exp(j*pi*m*(sin(theta_m) - sin(theta)))|`,
//! so `B(theta_m) = K`. PSL is reported as the normalized sidelobe POWER
//! `(max sidelobe / K)^2`: sidelobes are the local maxima of `B` outside
//! the mainlobe mask, and the feasibility constraint `PSL <= delta`
//! compares this power ratio against the configured ceiling.
//!
//! The mainlobe mask defaults to a half-power halfwidth `51 deg / K`
//! widened by `1/cos(theta_m)` for beam broadening away from broadside.
//! Candidate swaps are scored through an incremental phasor accumulator,
//! one subtract-add per antenna swap over the scan grid.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::array::{ArrayGeometry, SelectionVector};
use crate::crlb::objective_of_indices;
use crate::rng::derived_rng;
use crate::swsha::AngleGrid;
use crate::{Error, Result};

/// Search strategy for [`constrained_select`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerate every K-subset; permitted only while `C(M,K) <= 1e6`.
    Exhaustive,
    /// Repair-then-ascend local search from the boundary-split template
    /// plus random restarts.
    GreedySwap,
}

/// Knobs for PSL evaluation and the selection search.
#[derive(Debug, Clone)]
pub struct SelectionConfig {
    /// Normalized sidelobe power ceiling, in `[0, 1]`.
    pub delta: f64,
    /// Number of RF chains to select.
    pub chain_count: usize,
    /// Angular scan grid for sidelobe evaluation.
    pub scan: AngleGrid,
    /// Fixed mainlobe halfwidth in degrees; `None` picks
    /// `(51/K)/max(cos(theta_m), 0.2)`.
    pub mainlobe_halfwidth_deg: Option<f64>,
    pub strategy: Strategy,
    /// Extra random starts for the greedy search.
    pub restarts: usize,
    pub seed: u64,
}

impl SelectionConfig {
    pub fn new(delta: f64, chain_count: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Domain("delta must lie in [0, 1]".into()));
        }
        if chain_count == 0 {
            return Err(Error::Domain("chain count must be positive".into()));
        }
        Ok(Self {
            delta,
            chain_count,
            scan: AngleGrid::from_degrees(-90.0, 90.0, 0.05)?,
            mainlobe_halfwidth_deg: None,
            strategy: Strategy::GreedySwap,
            restarts: 8,
            seed: 0,
        })
    }

    fn halfwidth_deg(&self, theta_m: f64) -> f64 {
        match self.mainlobe_halfwidth_deg {
            Some(h) => h,
            None => (51.0 / self.chain_count as f64) / theta_m.cos().max(0.2),
        }
    }
}

/// PSL evaluation outcome.
#[derive(Debug, Clone, Copy)]
pub struct PslReport {
    /// Normalized sidelobe power `(max local sidelobe / K)^2`.
    pub value: f64,
    /// Set when the visible region contains no local maximum at all.
    pub degenerate: bool,
}

/// `B(theta)` over the grid for a selection steered to `theta_m`.
pub fn beampattern(selection: &SelectionVector, theta_m: f64, grid: &AngleGrid) -> Vec<f64> {
    let sm = theta_m.sin();
    let idx = selection.selected_indices();
    (0..grid.len())
        .map(|gi| {
            let u = sm - grid.angle(gi).sin();
            let (mut re, mut im) = (0.0, 0.0);
            for &p in &idx {
                let ph = std::f64::consts::PI * p as f64 * u;
                re += ph.cos();
                im += ph.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// Peak sidelobe power level of a selection steered to `theta_m`.
pub fn psl(selection: &SelectionVector, theta_m: f64, cfg: &SelectionConfig) -> PslReport {
    let b = beampattern(selection, theta_m, &cfg.scan);
    let visible = visible_mask(&cfg.scan, theta_m, cfg.halfwidth_deg(theta_m));
    psl_from_pattern(&b, &visible, selection.chain_count())
}

fn visible_mask(grid: &AngleGrid, theta_m: f64, halfwidth_deg: f64) -> Vec<bool> {
    let hw = halfwidth_deg.to_radians();
    (0..grid.len())
        .map(|i| (grid.angle(i) - theta_m).abs() >= hw)
        .collect()
}

/// Largest local maximum of `b` whose three-point neighborhood is fully
/// outside the mainlobe mask, normalized to power.
fn psl_from_pattern(b: &[f64], visible: &[bool], k: usize) -> PslReport {
    let mut best: Option<f64> = None;
    for i in 1..b.len().saturating_sub(1) {
        if visible[i - 1] && visible[i] && visible[i + 1] && b[i] >= b[i - 1] && b[i] >= b[i + 1] {
            best = Some(best.map_or(b[i], |v: f64| v.max(b[i])));
        }
    }
    match best {
        Some(v) => PslReport { value: (v / k as f64).powi(2), degenerate: false },
        None => PslReport { value: 0.0, degenerate: true },
    }
}

/// Incremental beampattern accumulator: per-antenna phasor tables over the
/// scan grid so a single-antenna swap costs one subtract-add per grid
/// point.
struct SwapEvaluator {
    k: usize,
    grid_len: usize,
    tab_re: Vec<f64>,
    tab_im: Vec<f64>,
    visible: Vec<bool>,
    acc_re: Vec<f64>,
    acc_im: Vec<f64>,
}

impl SwapEvaluator {
    fn new(m: usize, k: usize, theta_m: f64, scan: &AngleGrid, halfwidth_deg: f64) -> Self {
        let g = scan.len();
        let sm = theta_m.sin();
        let mut tab_re = vec![0.0; m * g];
        let mut tab_im = vec![0.0; m * g];
        for ant in 0..m {
            let p = (ant + 1) as f64 * std::f64::consts::PI;
            for gi in 0..g {
                let ph = p * (sm - scan.angle(gi).sin());
                tab_re[ant * g + gi] = ph.cos();
                tab_im[ant * g + gi] = ph.sin();
            }
        }
        Self {
            k,
            grid_len: g,
            tab_re,
            tab_im,
            visible: visible_mask(scan, theta_m, halfwidth_deg),
            acc_re: vec![0.0; g],
            acc_im: vec![0.0; g],
        }
    }

    fn load(&mut self, indices: &[u32]) {
        self.acc_re.fill(0.0);
        self.acc_im.fill(0.0);
        for &p in indices {
            let base = (p as usize - 1) * self.grid_len;
            for gi in 0..self.grid_len {
                self.acc_re[gi] += self.tab_re[base + gi];
                self.acc_im[gi] += self.tab_im[base + gi];
            }
        }
    }

    fn apply_swap(&mut self, out: u32, inn: u32) {
        let bo = (out as usize - 1) * self.grid_len;
        let bi = (inn as usize - 1) * self.grid_len;
        for gi in 0..self.grid_len {
            self.acc_re[gi] += self.tab_re[bi + gi] - self.tab_re[bo + gi];
            self.acc_im[gi] += self.tab_im[bi + gi] - self.tab_im[bo + gi];
        }
    }

    fn psl_current(&self) -> PslReport {
        let mut best: Option<f64> = None;
        let b2 = |i: usize| self.acc_re[i] * self.acc_re[i] + self.acc_im[i] * self.acc_im[i];
        for i in 1..self.grid_len - 1 {
            if self.visible[i - 1] && self.visible[i] && self.visible[i + 1] {
                let v = b2(i);
                if v >= b2(i - 1) && v >= b2(i + 1) {
                    best = Some(best.map_or(v, |x: f64| x.max(v)));
                }
            }
        }
        match best {
            Some(v) => PslReport { value: v / (self.k * self.k) as f64, degenerate: false },
            None => PslReport { value: 0.0, degenerate: true },
        }
    }

    /// PSL after swapping `out -> inn`, leaving the accumulator unchanged.
    fn psl_after_swap(&mut self, out: u32, inn: u32) -> f64 {
        self.apply_swap(out, inn);
        let r = self.psl_current();
        self.apply_swap(inn, out);
        r.value
    }
}

struct LocalOptimum {
    indices: Vec<u32>,
    objective: f64,
}

/// Among all selections whose PSL at `theta_m` stays below `cfg.delta`,
/// return one maximizing the aperture-spread objective.
pub fn constrained_select(
    theta_m: f64,
    cfg: &SelectionConfig,
    geometry: &ArrayGeometry,
) -> Result<SelectionVector> {
    if !(theta_m.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain("mainlobe angle must lie in (-pi/2, pi/2)".into()));
    }
    if !geometry.is_contiguous() || geometry.indices()[0] != 1 {
        return Err(Error::Domain(
            "selection search expects the full physical array {1..M}".into(),
        ));
    }
    let m = geometry.len();
    let k = cfg.chain_count;
    if k > m {
        return Err(Error::Domain(format!("cannot select K={k} of M={m} antennas")));
    }
    match cfg.strategy {
        Strategy::Exhaustive => exhaustive_select(theta_m, cfg, m, k),
        Strategy::GreedySwap => greedy_select(theta_m, cfg, m, k),
    }
}

fn binomial(m: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v *= (m - i) as f64 / (i + 1) as f64;
    }
    v
}

fn exhaustive_select(
    theta_m: f64,
    cfg: &SelectionConfig,
    m: usize,
    k: usize,
) -> Result<SelectionVector> {
    if binomial(m, k) > 1e6 {
        return Err(Error::Domain(format!(
            "exhaustive search refused: C({m},{k}) exceeds 1e6 candidates"
        )));
    }
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    'outer: loop {
        combos.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < (m - (k - 1 - i)) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }

    let skip_psl = cfg.delta >= 1.0; // PSL <= 1 always holds
    let halfwidth = cfg.halfwidth_deg(theta_m);
    let eval = |chunk: &[Vec<u32>]| -> (Option<LocalOptimum>, f64) {
        let mut ev = if skip_psl {
            None
        } else {
            Some(SwapEvaluator::new(m, k, theta_m, &cfg.scan, halfwidth))
        };
        let mut best: Option<LocalOptimum> = None;
        let mut min_psl = f64::INFINITY;
        for c in chunk {
            let feasible = if let Some(ev) = ev.as_mut() {
                ev.load(c);
                let p = ev.psl_current().value;
                min_psl = min_psl.min(p);
                p <= cfg.delta
            } else {
                true
            };
            if feasible {
                let obj = objective_of_indices(k, c);
                let better = match &best {
                    None => true,
                    Some(b) => obj > b.objective || (obj == b.objective && c < &b.indices),
                };
                if better {
                    best = Some(LocalOptimum { indices: c.clone(), objective: obj });
                }
            }
        }
        (best, min_psl)
    };

    let chunks: Vec<&[Vec<u32>]> = combos.chunks(4096).collect();
    let results: Vec<(Option<LocalOptimum>, f64)> = chunks.par_iter().map(|c| eval(c)).collect();
    let mut best: Option<LocalOptimum> = None;
    let mut min_psl = f64::INFINITY;
    for (cand, mp) in results {
        min_psl = min_psl.min(mp);
        if let Some(c) = cand {
            let better = match &best {
                None => true,
                Some(b) => {
                    c.objective > b.objective
                        || (c.objective == b.objective && c.indices < b.indices)
                }
            };
            if better {
                best = Some(c);
            }
        }
    }
    match best {
        Some(b) => SelectionVector::from_indices(&b.indices, m),
        None => Err(Error::Infeasible { min_psl }),
    }
}

fn greedy_select(
    theta_m: f64,
    cfg: &SelectionConfig,
    m: usize,
    k: usize,
) -> Result<SelectionVector> {
    let skip_psl = cfg.delta >= 1.0;
    let halfwidth = cfg.halfwidth_deg(theta_m);
    let mut ev = SwapEvaluator::new(m, k, theta_m, &cfg.scan, halfwidth);

    let template = SelectionVector::boundary_template(m, k)?.selected_indices();
    let mut starts = vec![template];
    let mut rng = derived_rng(cfg.seed, 0x5E1);
    let all: Vec<u32> = (1..=m as u32).collect();
    for _ in 0..cfg.restarts {
        let mut pool = all.clone();
        pool.shuffle(&mut rng);
        let mut s: Vec<u32> = pool[..k].to_vec();
        s.sort_unstable();
        starts.push(s);
    }

    let mut best: Option<LocalOptimum> = None;
    let mut min_psl = f64::INFINITY;
    for start in starts {
        if let Some(opt) = greedy_from(&mut ev, start, cfg.delta, skip_psl, m, k, &mut min_psl) {
            let better = match &best {
                None => true,
                Some(b) => {
                    opt.objective > b.objective
                        || (opt.objective == b.objective && opt.indices < b.indices)
                }
            };
            if better {
                best = Some(opt);
            }
        }
    }
    match best {
        Some(b) => SelectionVector::from_indices(&b.indices, m),
        None => Err(Error::Infeasible { min_psl }),
    }
}

/// Local search from one start: first drive PSL below `delta` by
/// best-improvement swaps, then climb the objective while staying
/// feasible.
fn greedy_from(
    ev: &mut SwapEvaluator,
    start: Vec<u32>,
    delta: f64,
    skip_psl: bool,
    m: usize,
    k: usize,
    min_psl: &mut f64,
) -> Option<LocalOptimum> {
    let mut sel = start;
    let mut selected = vec![false; m + 1];
    for &p in &sel {
        selected[p as usize] = true;
    }

    let mut cur_psl = if skip_psl {
        0.0
    } else {
        ev.load(&sel);
        let p = ev.psl_current().value;
        *min_psl = (*min_psl).min(p);
        p
    };

    // repair phase; each pass swaps one antenna, so a short cap suffices
    let mut guard = 0;
    while cur_psl > delta && guard < 100 {
        guard += 1;
        let mut best_swap: Option<(f64, u32, u32)> = None;
        for oi in 0..sel.len() {
            let out = sel[oi];
            for inn in 1..=m as u32 {
                if selected[inn as usize] {
                    continue;
                }
                let p = ev.psl_after_swap(out, inn);
                *min_psl = (*min_psl).min(p);
                if p < cur_psl - 1e-12 {
                    let better = match best_swap {
                        None => true,
                        Some((bp, _, _)) => p < bp,
                    };
                    if better {
                        best_swap = Some((p, out, inn));
                    }
                }
            }
        }
        let (p, out, inn) = best_swap?;
        cur_psl = p;
        ev.apply_swap(out, inn);
        selected[out as usize] = false;
        selected[inn as usize] = true;
        let pos = sel.iter().position(|&x| x == out).unwrap();
        sel[pos] = inn;
    }
    if cur_psl > delta {
        return None;
    }

    // ascent phase: best feasible objective-improving swap, repeated
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > 100 {
            break;
        }
        let cur_obj = objective_of_indices(k, &sel);
        let mut cands: Vec<(f64, u32, u32)> = Vec::new();
        for oi in 0..sel.len() {
            let out = sel[oi];
            for inn in 1..=m as u32 {
                if selected[inn as usize] {
                    continue;
                }
                let mut c: Vec<u32> = sel.clone();
                let pos = c.iter().position(|&x| x == out).unwrap();
                c[pos] = inn;
                let obj = objective_of_indices(k, &c);
                if obj > cur_obj {
                    cands.push((obj, out, inn));
                }
            }
        }
        cands.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap()
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        let mut applied = false;
        for (_, out, inn) in cands {
            let feasible = if skip_psl {
                true
            } else {
                let p = ev.psl_after_swap(out, inn);
                *min_psl = (*min_psl).min(p);
                p <= delta
            };
            if feasible {
                if !skip_psl {
                    ev.apply_swap(out, inn);
                }
                selected[out as usize] = false;
                selected[inn as usize] = true;
                let pos = sel.iter().position(|&x| x == out).unwrap();
                sel[pos] = inn;
                applied = true;
                break;
            }
        }
        if !applied {
            break;
        }
    }

    sel.sort_unstable();
    let objective = objective_of_indices(k, &sel);
    Some(LocalOptimum { indices: sel, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn cfg(delta: f64, k: usize) -> SelectionConfig {
        SelectionConfig::new(delta, k).unwrap()
    }

    #[test]
    fn beampattern_peak_is_chain_count() {
        let sel = SelectionVector::from_indices(&[1, 2, 4, 8], 16).unwrap();
        let grid = AngleGrid::from_degrees(-90.0, 90.0, 0.5).unwrap();
        let tm = deg(10.0);
        let b = beampattern(&sel, tm, &grid);
        let gi = ((10.0 - (-90.0)) / 0.5) as usize;
        assert!((grid.angle(gi) - tm).abs() < 1e-12);
        assert!((b[gi] - 4.0).abs() < 1e-12);
        let peak = b
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let hw = cfg(1.0, 4).halfwidth_deg(tm).to_radians();
        assert!((grid.angle(peak) - tm).abs() < hw);
    }

    #[test]
    fn full_array_matches_dirichlet_kernel() {
        let m = 8;
        let sel = SelectionVector::from_mask(vec![true; m]).unwrap();
        let grid = AngleGrid::from_degrees(-90.0, 90.0, 0.25).unwrap();
        let b = beampattern(&sel, 0.0, &grid);
        for gi in 0..grid.len() {
            let u = -grid.angle(gi).sin();
            let denom = (std::f64::consts::PI * u / 2.0).sin();
            let want = if denom.abs() < 1e-12 {
                m as f64
            } else {
                ((m as f64 * std::f64::consts::PI * u / 2.0).sin() / denom).abs()
            };
            assert!((b[gi] - want).abs() < 1e-9, "mismatch at {gi}: {} vs {want}", b[gi]);
        }
    }

    #[test]
    fn single_element_pattern_is_flat() {
        let sel = SelectionVector::from_indices(&[5], 16).unwrap();
        let grid = AngleGrid::from_degrees(-90.0, 90.0, 1.0).unwrap();
        let b = beampattern(&sel, 0.0, &grid);
        for v in b {
            assert!((v - 1.0).abs() < 1e-12);
        }
        // flat pattern: every interior point is a plateau local max, PSL = 1
        let r = psl(&sel, 0.0, &cfg(1.0, 1));
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(!r.degenerate);
    }

    #[test]
    fn ula_psl_matches_first_dirichlet_sidelobe() {
        // 8-element contiguous array at broadside against a dense-grid
        // brute-force oracle of the Dirichlet ratio beyond the first null
        let sel = SelectionVector::from_indices(&(1..=8).collect::<Vec<_>>(), 8).unwrap();
        let mut c = cfg(1.0, 8);
        c.scan = AngleGrid::from_degrees(-90.0, 90.0, 0.01).unwrap();
        let r = psl(&sel, 0.0, &c);
        assert!(!r.degenerate);

        let mut want = 0.0f64;
        let mut u = 0.2501;
        while u < 1.0 {
            let denom = (std::f64::consts::PI * u / 2.0).sin();
            let v = ((8.0 * std::f64::consts::PI * u / 2.0).sin() / denom).abs() / 8.0;
            want = want.max(v * v);
            u += 1e-5;
        }
        assert!((r.value - want).abs() < 1e-3, "psl {} vs oracle {want}", r.value);
    }

    #[test]
    fn paper_selection_sets_split_by_delta_at_30_degrees() {
        // the published delta = 0.5 set stays feasible while the
        // unconstrained boundary optimum does not
        let relaxed =
            SelectionVector::from_indices(&[1, 2, 4, 8, 119, 124, 127, 128], 128).unwrap();
        let tight =
            SelectionVector::from_indices(&[1, 2, 3, 4, 125, 126, 127, 128], 128).unwrap();
        let c = cfg(0.5, 8);
        let tm = deg(30.0);
        let pr = psl(&relaxed, tm, &c);
        let pt = psl(&tight, tm, &c);
        assert!(pr.value <= 0.5, "relaxed set PSL {}", pr.value);
        assert!(pt.value > 0.5, "tight set PSL {}", pt.value);
    }

    #[test]
    fn psl_bounded_and_defined_everywhere() {
        let a = SelectionVector::from_indices(&[3, 17, 31, 64], 64).unwrap();
        let c = cfg(1.0, 4);
        for &tm in &[-0.9, 0.0, 0.4, 1.1] {
            let r = psl(&a, tm, &c);
            assert!((0.0..=1.0 + 1e-12).contains(&r.value));
        }
    }

    #[test]
    fn exhaustive_delta_one_contains_boundaries() {
        let g = ArrayGeometry::ula(10, 2.0).unwrap();
        let mut c = cfg(1.0, 4);
        c.strategy = Strategy::Exhaustive;
        for &tm in &[deg(-20.0), 0.0, deg(35.0)] {
            let sel = constrained_select(tm, &c, &g).unwrap();
            let idx = sel.selected_indices();
            assert!(idx.contains(&1) && idx.contains(&10), "got {idx:?}");
        }
    }

    #[test]
    fn exhaustive_and_greedy_agree_on_small_instances() {
        for (m, k) in [(10usize, 3usize), (12, 4)] {
            let g = ArrayGeometry::ula(m, 2.0).unwrap();
            let mut ce = cfg(1.0, k);
            ce.strategy = Strategy::Exhaustive;
            let mut cg = cfg(1.0, k);
            cg.strategy = Strategy::GreedySwap;
            cg.restarts = 4;
            let a = constrained_select(0.2, &ce, &g).unwrap();
            let b = constrained_select(0.2, &cg, &g).unwrap();
            assert_eq!(
                crate::crlb::selection_objective(&a),
                crate::crlb::selection_objective(&b),
                "m={m} k={k}"
            );
        }
    }

    #[test]
    fn greedy_reproduces_unconstrained_boundary_optimum() {
        let g = ArrayGeometry::ula(128, 2.0).unwrap();
        let mut c = cfg(1.0, 8);
        c.restarts = 2;
        let sel = constrained_select(deg(30.0), &c, &g).unwrap();
        assert_eq!(sel.selected_indices(), &[1, 2, 3, 4, 125, 126, 127, 128]);
    }

    #[test]
    fn tighter_delta_never_improves_objective() {
        let g = ArrayGeometry::ula(64, 2.0).unwrap();
        let mut last = f64::INFINITY;
        for &delta in &[1.0, 0.7, 0.5, 0.3] {
            let mut c = cfg(delta, 6);
            c.restarts = 4;
            let sel = constrained_select(deg(20.0), &c, &g).unwrap();
            let obj = crate::crlb::selection_objective(&sel);
            assert!(obj <= last, "objective rose from {last} to {obj} at delta {delta}");
            last = obj;
        }
    }

    #[test]
    fn infeasible_delta_reports_min_psl() {
        let g = ArrayGeometry::ula(16, 2.0).unwrap();
        let mut c = cfg(0.0, 4);
        c.restarts = 1;
        match constrained_select(0.1, &c, &g) {
            Err(Error::Infeasible { min_psl }) => assert!(min_psl > 0.0),
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_guard_rejects_huge_instances() {
        let g = ArrayGeometry::ula(128, 2.0).unwrap();
        let mut c = cfg(1.0, 8);
        c.strategy = Strategy::Exhaustive;
        assert!(constrained_select(0.0, &c, &g).is_err());
    }

    #[test]
    fn beampattern_depends_only_on_selection_set() {
        let a = SelectionVector::from_indices(&[2, 9, 5], 12).unwrap();
        let b = SelectionVector::from_indices(&[9, 2, 5], 12).unwrap();
        let grid = AngleGrid::from_degrees(-90.0, 90.0, 1.0).unwrap();
        assert_eq!(beampattern(&a, 0.3, &grid), beampattern(&b, 0.3, &grid));
    }
}
