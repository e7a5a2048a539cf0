//! Fourier–Bohr coefficients, Bragg candidates from the dual scheme, ε-dual
//! characters and spectral diagnostics.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::autocorr::Autocorrelation;
use crate::comb::{PointSetPatch, WeightedComb};
use crate::cps::{DualSchemeBasis, IntPoint};
use crate::error::{Error, Result};
use crate::geometry::{grid_points, AxisBox, RVec};
use crate::prng::XorShift64Star;
use crate::spatial::{covering_on_grid, NearestIndex};
use crate::summation::ComplexSum;
use crate::window::{PredicateWindow, WindowUnion};

/// Default internal cutoff `K` for Bragg candidates, `[−K, K]^m`.
pub const DEFAULT_INTERNAL_CUTOFF: f64 = 30.0;
/// Grid steps per axis for covering radii of frequency sets.
pub const FREQUENCY_GRID_STEPS: usize = 1000;
/// Float slack allowed when certifying ε-dual characters on a patch.
pub const CERTIFICATION_SLACK: f64 = 1e-12;

/// A frequency with its dual lattice key when it comes from the dual scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frequency {
    pub k: RVec,
    pub key: Option<IntPoint>,
}

impl Frequency {
    pub fn free(k: RVec) -> Self {
        Self { k, key: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMethod {
    BohrSum,
    ViaAutocorr,
}

impl SpectrumMethod {
    pub fn label(self) -> &'static str {
        match self {
            SpectrumMethod::BohrSum => "bohr_sum",
            SpectrumMethod::ViaAutocorr => "via_autocorr",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub frequency: Frequency,
    pub intensity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub radius: f64,
    pub method: SpectrumMethod,
}

impl Spectrum {
    /// Entries sorted by decreasing intensity, ties by input order.
    pub fn strongest(&self, count: usize) -> Vec<SpectrumEntry> {
        let mut e = self.entries.clone();
        e.sort_by(|a, b| b.intensity.total_cmp(&a.intensity));
        e.truncate(count);
        e
    }
}

/// Precomputed positions and weights of a comb inside `A_R`.
#[derive(Clone, Debug)]
pub struct FourierBohr {
    radius: f64,
    volume: f64,
    positions: Vec<RVec>,
    weights: Vec<Complex64>,
}

impl FourierBohr {
    pub fn new(comb: &WeightedComb, radius: f64) -> Result<Self> {
        let patch = comb.patch();
        let fits = patch
            .region()
            .sides()
            .iter()
            .all(|s| s.lo <= -radius + 1e-9 && s.hi >= radius - 1e-9);
        if !(radius > 0.0) || !fits {
            return Err(Error::RegionTooSmall { radius });
        }
        let (positions, weights) = patch
            .embedded()
            .iter()
            .zip(comb.weights())
            .filter(|(e, _)| e.physical.norm_inf() <= radius)
            .map(|(e, w)| (e.physical, *w))
            .unzip();
        Ok(Self {
            radius,
            volume: (2.0 * radius).powi(patch.scheme().d() as i32),
            positions,
            weights,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `S_R(k) = (1/Vol) Σ ω(x) exp(−2πi k·x)` with compensated summation.
    pub fn coefficient(&self, k: &RVec) -> Complex64 {
        let mut sum = ComplexSum::new();
        let two_pi = 2.0 * std::f64::consts::PI;
        for (x, w) in self.positions.iter().zip(&self.weights) {
            sum.add(*w * Complex64::from_polar(1.0, -two_pi * k.dot(x)));
        }
        sum.value() / self.volume
    }

    pub fn intensity(&self, k: &RVec) -> f64 {
        self.coefficient(k).norm_sqr()
    }

    /// Intensities for many frequencies, in input order.
    pub fn intensities(&self, ks: &[RVec]) -> Vec<f64> {
        ks.par_iter().map(|k| self.intensity(k)).collect()
    }

    pub fn spectrum(&self, freqs: &[Frequency]) -> Spectrum {
        let ks: Vec<RVec> = freqs.iter().map(|f| f.k).collect();
        let entries = self
            .intensities(&ks)
            .into_iter()
            .zip(freqs)
            .map(|(intensity, f)| SpectrumEntry {
                frequency: *f,
                intensity,
            })
            .collect();
        Spectrum {
            entries,
            radius: self.radius,
            method: SpectrumMethod::BohrSum,
        }
    }
}

pub fn fourier_bohr(comb: &WeightedComb, k: &RVec, radius: f64) -> Result<Complex64> {
    Ok(FourierBohr::new(comb, radius)?.coefficient(k))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutocorrIntensity {
    pub value: f64,
    pub imaginary: f64,
    /// Set when the imaginary part exceeds `1e-6 · |value|`.
    pub flagged: bool,
}

/// Weighting of the inner average in [`intensity_via_autocorr_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Taper {
    /// `Σ_{|x|_∞ ≤ r} γ(z) e(−k·x) / (2r)^d`.
    #[default]
    Box,
    /// `Σ_{|x|_∞ ≤ r} γ(z) e(−k·x) Π_k (1 − |x_k|/r) / r^d`, the box average
    /// of `[−r/2, r/2]^d` applied twice. Side lobes fall off quadratically.
    Fejer,
}

/// `Σ_{|x|_∞ ≤ r} γ(z) exp(−2πi k·x) / Vol([−r, r]^d)` on the edge-corrected
/// coefficients of `γ`.
pub fn intensity_via_autocorr(gamma: &Autocorrelation, k: &RVec, inner_radius: f64) -> Result<AutocorrIntensity> {
    intensity_via_autocorr_with(gamma, k, inner_radius, Taper::Box)
}

pub fn intensity_via_autocorr_with(
    gamma: &Autocorrelation,
    k: &RVec,
    inner_radius: f64,
    taper: Taper,
) -> Result<AutocorrIntensity> {
    if !(inner_radius > 0.0) || inner_radius > gamma.radius() / 2.0 {
        return Err(Error::InnerTooLarge {
            inner: inner_radius,
            radius: gamma.radius(),
        });
    }
    let scheme = gamma.scheme();
    let d = scheme.d() as i32;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut sum = ComplexSum::new();
    for (key, v) in gamma.coefficients() {
        let x = scheme.physical(key);
        if x.norm_inf() > inner_radius {
            continue;
        }
        let weight = match taper {
            Taper::Box => 1.0,
            Taper::Fejer => x.as_slice().iter().map(|xk| 1.0 - xk.abs() / inner_radius).product(),
        };
        let corrected = v * (weight / gamma.overlap_factor(key));
        sum.add(corrected * Complex64::from_polar(1.0, -two_pi * k.dot(&x)));
    }
    let norm = match taper {
        Taper::Box => (2.0 * inner_radius).powi(d),
        Taper::Fejer => inner_radius.powi(d),
    };
    let total = sum.value() / norm;
    Ok(AutocorrIntensity {
        value: total.re,
        imaginary: total.im,
        flagged: total.im.abs() >= 1e-6 * total.re.abs(),
    })
}

/// Dual lattice points with physical part in `freq_box` and internal part
/// in `[−K, K]^m`.
pub fn bragg_candidates(dual: &DualSchemeBasis, freq_box: &AxisBox, internal_cutoff: f64) -> Result<Vec<Frequency>> {
    if freq_box.is_empty() {
        return Ok(Vec::new());
    }
    let internal = AxisBox::centered(dual.m(), internal_cutoff);
    Ok(dual
        .enumerate_lattice(freq_box, &internal)?
        .into_iter()
        .map(|w| Frequency {
            k: dual.physical(&w),
            key: Some(w),
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct EpsDualSet {
    pub eps: f64,
    pub frequencies: Vec<Frequency>,
    pub window: PredicateWindow,
    /// Largest `max_x |exp(2πi k·x) − 1|` seen during certification.
    pub worst_patch_deviation: f64,
}

impl EpsDualSet {
    pub fn positions(&self) -> Vec<RVec> {
        self.frequencies.iter().map(|f| f.k).collect()
    }
}

/// Dual lattice points in `freq_box` whose internal part lies in
/// `N(W̄, ε)`, each certified against the points of `patch`.
pub fn eps_dual_characters(
    dual: &DualSchemeBasis,
    window: &WindowUnion,
    eps: f64,
    freq_box: &AxisBox,
    patch: &PointSetPatch,
) -> Result<EpsDualSet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let predicate = PredicateWindow::eps_dual(window, eps);
    if freq_box.is_empty() {
        return Ok(EpsDualSet {
            eps,
            frequencies: Vec::new(),
            window: predicate,
            worst_patch_deviation: 0.0,
        });
    }
    // outside this box some window side sees a full period
    let m = window.dim();
    let mut bound = vec![0.0f64; m];
    for b in window.boxes() {
        for (k, s) in b.sides().iter().enumerate() {
            bound[k] = bound[k].max(s.width());
        }
    }
    let reach: Vec<f64> = bound
        .iter()
        .map(|w| if *w > 0.0 { 1.0 / w } else { DEFAULT_INTERNAL_CUTOFF })
        .collect();
    let neg: Vec<f64> = reach.iter().map(|r| -r).collect();
    let internal = if eps >= 2.0 {
        AxisBox::centered(m, DEFAULT_INTERNAL_CUTOFF)
    } else {
        AxisBox::closed(&neg, &reach)
    };
    let candidates = dual.enumerate_lattice(freq_box, &internal)?;
    let frequencies: Vec<Frequency> = candidates
        .into_iter()
        .filter(|w| eps >= 2.0 || window.eps_dual_member(&dual.star(w), eps))
        .map(|w| Frequency {
            k: dual.physical(&w),
            key: Some(w),
        })
        .collect();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    for f in &frequencies {
        let dev = patch
            .embedded()
            .par_iter()
            .map(|e| (Complex64::from_polar(1.0, two_pi * f.k.dot(&e.physical)) - 1.0).norm())
            .reduce(|| 0.0, f64::max);
        if dev > eps + CERTIFICATION_SLACK {
            return Err(Error::CertificationFailure {
                frequency: f.k.as_slice().to_vec(),
                deviation: dev,
                eps,
            });
        }
        worst = worst.max(dev);
    }
    Ok(EpsDualSet {
        eps,
        frequencies,
        window: predicate,
        worst_patch_deviation: worst,
    })
}

/// `1.1 · max_n Σ_{z ∈ A_n} |γ(z)| / Vol(A_n)` over radii up to `R`.
pub fn lipschitz_constant(gamma: &Autocorrelation, radii: &[f64]) -> f64 {
    let m = gamma.to_measure();
    1.1 * radii
        .iter()
        .filter(|&&r| r <= gamma.radius())
        .map(|&r| m.mean_abs(r))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzRow {
    pub psi: RVec,
    pub chi: RVec,
    /// `||S_R(ψ+χ)|² − |S_R(ψ)|²|`.
    pub difference: f64,
    /// `|I_R − I_2R|` at both frequencies, summed.
    pub slack: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzReport {
    pub c_est: f64,
    pub eps: f64,
    pub rows: Vec<LipschitzRow>,
    pub violations: usize,
    /// `max difference / bound`.
    pub max_ratio: f64,
}

/// Checks `||S_R(ψ+χ)|² − |S_R(ψ)|²| ≤ C ε + slack` for every `ψ` and every
/// `χ`, with the slack measured as the two-scale discrepancy between `R`
/// and `2R` at both frequencies.
pub fn lipschitz_bound_check(
    comb: &WeightedComb,
    chis: &[RVec],
    eps: f64,
    psis: &[RVec],
    c_est: f64,
    radius: f64,
) -> Result<LipschitzReport> {
    let fine = FourierBohr::new(comb, radius)?;
    let coarse = FourierBohr::new(comb, 2.0 * radius)?;
    let mut freqs: Vec<RVec> = Vec::with_capacity(psis.len() * (chis.len() + 1));
    for psi in psis {
        freqs.push(*psi);
        for chi in chis {
            freqs.push(*psi + *chi);
        }
    }
    let at_r = fine.intensities(&freqs);
    let at_2r = coarse.intensities(&freqs);
    let mut rows = Vec::with_capacity(psis.len() * chis.len());
    let stride = chis.len() + 1;
    for (i, psi) in psis.iter().enumerate() {
        let base = i * stride;
        for (j, chi) in chis.iter().enumerate() {
            let idx = base + 1 + j;
            let difference = (at_r[idx] - at_r[base]).abs();
            let slack = (at_r[idx] - at_2r[idx]).abs() + (at_r[base] - at_2r[base]).abs();
            rows.push(LipschitzRow {
                psi: *psi,
                chi: *chi,
                difference,
                slack,
                bound: c_est * eps + slack,
            });
        }
    }
    let violations = rows.iter().filter(|r| r.difference > r.bound).count();
    let max_ratio = rows
        .iter()
        .map(|r| {
            if r.bound > 0.0 {
                r.difference / r.bound
            } else if r.difference > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(LipschitzReport {
        c_est,
        eps,
        rows,
        violations,
        max_ratio,
    })
}

/// Largest distance from a grid point of `region` to the nearest listed
/// frequency.
pub fn covering_radius(freqs: &[RVec], region: &AxisBox) -> Result<f64> {
    if freqs.is_empty() {
        return Err(Error::EmptySet);
    }
    let index = NearestIndex::new(freqs);
    Ok(covering_on_grid(&index, region, FREQUENCY_GRID_STEPS))
}

/// Uniform random frequencies in `region`.
pub fn random_frequencies(region: &AxisBox, count: usize, seed: u64) -> Vec<RVec> {
    let mut rng = XorShift64Star::new(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<f64> = region
                .sides()
                .iter()
                .map(|s| s.lo + rng.next_f64() * s.width())
                .collect();
            RVec::new(&coords)
        })
        .collect()
}

/// Random frequencies in `region` farther than `guard` from every listed
/// candidate. Gives up after `100 · count` draws.
pub fn off_module_probes(region: &AxisBox, count: usize, seed: u64, candidates: &[RVec], guard: f64) -> Vec<RVec> {
    let index = (!candidates.is_empty()).then(|| NearestIndex::new(candidates));
    let mut rng = XorShift64Star::new(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..100 * count.max(1) {
        if out.len() == count {
            break;
        }
        let coords: Vec<f64> = region
            .sides()
            .iter()
            .map(|s| s.lo + rng.next_f64() * s.width())
            .collect();
        let k = RVec::new(&coords);
        if index.as_ref().is_none_or(|ix| ix.nearest_dist(&k) > guard) {
            out.push(k);
        }
    }
    out
}

/// Largest intensity over the probe frequencies.
pub fn noise_floor(fb: &FourierBohr, probes: &[RVec]) -> f64 {
    fb.intensities(probes).into_iter().fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualBin {
    pub bin: AxisBox,
    /// Mean of `Vol · |S_R(k)|²` over kept samples; 0 when none are kept.
    pub level: f64,
    pub samples: usize,
}

/// Mean of `Vol(A_R) · |S_R(k)|²` over a regular grid in each bin, skipping
/// samples within `guard` of any listed peak. The default guard is
/// `10 / Vol(A_R)^(1/d)`.
pub fn continuous_residual(
    comb: &WeightedComb,
    radius: f64,
    bins: &[AxisBox],
    samples_per_axis: usize,
    peaks: &[RVec],
    guard: Option<f64>,
) -> Result<Vec<ResidualBin>> {
    let fb = FourierBohr::new(comb, radius)?;
    let d = comb.patch().scheme().d();
    let guard = guard.unwrap_or(10.0 / fb.volume().powf(1.0 / d as f64));
    let index = (!peaks.is_empty()).then(|| NearestIndex::new(peaks));
    let mut out = Vec::with_capacity(bins.len());
    for bin in bins {
        let samples: Vec<RVec> = cell_centers(bin, samples_per_axis)
            .into_iter()
            .filter(|k| index.as_ref().is_none_or(|ix| ix.nearest_dist(k) > guard))
            .collect();
        let values = fb.intensities(&samples);
        let level = if values.is_empty() {
            0.0
        } else {
            fb.volume() * values.iter().sum::<f64>() / values.len() as f64
        };
        out.push(ResidualBin {
            bin: *bin,
            level,
            samples: values.len(),
        });
    }
    Ok(out)
}

/// Centers of the `n^d` equal cells of `region`.
fn cell_centers(region: &AxisBox, n: usize) -> Vec<RVec> {
    let n = n.max(1);
    if n == 1 {
        return vec![region.center()];
    }
    let half: Vec<f64> = region.sides().iter().map(|s| 0.5 * s.width() / n as f64).collect();
    let lo: Vec<f64> = region.sides().iter().zip(&half).map(|(s, h)| s.lo + h).collect();
    let hi: Vec<f64> = region.sides().iter().zip(&half).map(|(s, h)| s.hi - h).collect();
    grid_points(&AxisBox::closed(&lo, &hi), n - 1)
}

/// `n` equal bins splitting `region` along its first axis.
pub fn split_bins(region: &AxisBox, n: usize) -> Vec<AxisBox> {
    let s0 = region.side(0);
    let step = s0.width() / n as f64;
    (0..n)
        .map(|i| {
            let mut lo = region.lo().as_slice().to_vec();
            let mut hi = region.hi().as_slice().to_vec();
            lo[0] = s0.lo + step * i as f64;
            hi[0] = s0.lo + step * (i + 1) as f64;
            AxisBox::closed(&lo, &hi)
        })
        .collect()
}
