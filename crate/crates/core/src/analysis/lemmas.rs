//! Numerical checks of the moment and tail lemmas behind the estimator.

use super::scenario::Scenario;
use super::stats::{central_moment, fit_line, kurtosis, mean, replicate_seed, variance, LineFit};
use crate::error::{Error, Result};
use crate::estimator::{effective_size, inversion::deconvolved_level, Index, IndexSet};
use crate::model::{DesignDensity, KernelSpec};
use crate::series::TrigSeries;
use crate::wavelets::{build_level, Axis, WaveletSpec};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// `∫₀¹ F / h^power` by midpoint quadrature with the value at the singularity subtracted.
fn singular_integral(
    samples: &[f64],
    at_singularity: f64,
    density: &DesignDensity,
    power: f64,
) -> Result<f64> {
    let g = samples.len();
    if density.is_uniform() {
        return Ok(samples.iter().sum::<f64>() / g as f64);
    }
    let exponent = density.beta * power;
    if exponent >= 1.0 {
        return Err(Error::NonIntegrableReciprocal { beta: exponent });
    }
    let c = density.normalization().powf(power);
    let x0 = density.singularity;
    let mut acc = 0.0;
    for (n, &f) in samples.iter().enumerate() {
        let x = (n as f64 + 0.5) / g as f64;
        let d = (x - x0).abs();
        if d > 0.0 {
            acc += (f - at_singularity) / (c * d.powf(exponent));
        }
    }
    let tail = (x0.powf(1.0 - exponent) + (1.0 - x0).powf(1.0 - exponent)) / (c * (1.0 - exponent));
    Ok(acc / g as f64 + at_singularity * tail)
}

/// Midpoint samples `s((n + 1/2) / g)`.
fn midpoint_samples(s: &TrigSeries, g: usize) -> Vec<f64> {
    s.shifted(-0.5 / g as f64).to_samples(g)
}

fn floored_distance(k: usize, center: f64, j: u32) -> f64 {
    (k as f64 - (center * (1u64 << j) as f64).round()).abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Row {
    pub index: Index,
    pub second: f64,
    pub fourth: f64,
    pub second_ratio: f64,
    pub fourth_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub rows: Vec<Lemma1Row>,
    /// max/min of `second_ratio`.
    pub second_spread: f64,
    pub fourth_spread: f64,
}

fn spread(v: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = v.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.fold(f64::INFINITY, f64::min);
    hi / lo
}

/// `(∫∫ U²/(h1 h2), ∫∫ U⁴/(h1³ h2³))` by fine-grid quadrature.
pub fn lemma1_integrals(
    w: &Index,
    kernel: &KernelSpec,
    wavelet: &WaveletSpec,
    design_t: &DesignDensity,
    design_x: &DesignDensity,
) -> Result<(f64, f64)> {
    let g = wavelet.grid;
    let u = deconvolved_level(&build_level(wavelet, Axis::Time, w.j1)?, kernel, None)?.series(w.k1);
    let eta = build_level(wavelet, Axis::Space, w.j2)?.series(w.k2);
    let ut = midpoint_samples(&u, g);
    let scale = |x: f64| kernel.profile_scale(x);
    let ex: Vec<f64> = midpoint_samples(&eta, g)
        .iter()
        .enumerate()
        .map(|(n, v)| v / scale((n as f64 + 0.5) / g as f64))
        .collect();
    let u0 = u.eval(design_t.singularity);
    let e0 = eta.eval(design_x.singularity) / scale(design_x.singularity);
    let pow = |v: &[f64], p: i32| v.iter().map(|x| x.powi(p)).collect::<Vec<_>>();
    let second = singular_integral(&pow(&ut, 2), u0.powi(2), design_t, 1.0)?
        * singular_integral(&pow(&ex, 2), e0.powi(2), design_x, 1.0)?;
    let fourth = singular_integral(&pow(&ut, 4), u0.powi(4), design_t, 3.0)?
        * singular_integral(&pow(&ex, 4), e0.powi(4), design_x, 3.0)?;
    Ok((second, fourth))
}

/// Indices at time levels `levels` whose cells lie at least a quarter period from the singularity.
pub fn lemma1_sweep(design_t: &DesignDensity, levels: std::ops::RangeInclusive<u32>, j2: u32, k2: usize) -> Vec<Index> {
    levels
        .flat_map(|j1| {
            let size = 1usize << j1;
            (0..size)
                .filter(move |&k| {
                    let d = (k as f64 / size as f64 - design_t.singularity).abs();
                    d.min(1.0 - d) >= 0.25
                })
                .map(move |k1| Index::new(j1, k1, j2, k2))
        })
        .collect()
}

/// Quadrature integrals divided by their predicted orders across a sweep of indices.
pub fn verify_lemma1(
    kernel: &KernelSpec,
    wavelet: &WaveletSpec,
    design_t: &DesignDensity,
    design_x: &DesignDensity,
    indices: &[Index],
) -> Result<Lemma1Report> {
    if indices.is_empty() {
        return Err(Error::invalid("indices", "empty sweep"));
    }
    let (nu, b1, b2) = (kernel.nu, design_t.beta, design_x.beta);
    let rows = indices
        .par_iter()
        .map(|w| {
            let (second, fourth) = lemma1_integrals(w, kernel, wavelet, design_t, design_x)?;
            let d1 = floored_distance(w.k1, design_t.singularity, w.j1);
            let d2 = floored_distance(w.k2, design_x.singularity, w.j2);
            let (j1, j2) = (w.j1 as f64, w.j2 as f64);
            let second_order = ((2.0 * nu + b1) * j1 + b2 * j2).exp2() * d1.powf(-b1) * d2.powf(-b2);
            let fourth_order = (j1 * (4.0 * nu + 3.0 * b1) + j2 * (3.0 * b2 + 1.0)).exp2() * d1.powf(-3.0 * b1) * d2.powf(-3.0 * b2);
            Ok(Lemma1Row {
                index: *w,
                second,
                fourth,
                second_ratio: second / second_order,
                fourth_ratio: fourth / fourth_order,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lemma1Report {
        second_spread: spread(rows.iter().map(|r| r.second_ratio)),
        fourth_spread: spread(rows.iter().map(|r| r.fourth_ratio)),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma2Row {
    pub n: usize,
    pub m: usize,
    pub variance: f64,
    pub fourth_moment: f64,
    pub kurtosis: f64,
    /// Variance order `σ² 2^{...} / (M N^α)` without constants.
    pub variance_order: f64,
    /// Two-term fourth-moment order without constants.
    pub fourth_order: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub index: Index,
    pub rows: Vec<Lemma2Row>,
    /// Slope of `ln Var` against `ln N`.
    pub slope: LineFit,
    /// Kurtosis of the standardized estimates pooled over the ladder.
    pub pooled_kurtosis: f64,
    /// max/min of `fourth_moment / fourth_order` over the ladder.
    pub fourth_ratio_spread: f64,
}

fn with_index_levels(scenario: &Scenario, w: &Index) -> Scenario {
    let mut s = scenario.clone();
    s.estimator.j1 = Some((w.j1 + 1).max(s.wavelet.m10));
    s.estimator.j2 = Some((w.j2 + 1).max(s.wavelet.m20));
    s
}

/// Monte Carlo moments of one coefficient estimate across a ladder of `N` at fixed `M`.
pub fn verify_lemma2(scenario: &Scenario, w: &Index, ns: &[usize], m: usize, replicates: usize, seed: u64) -> Result<Lemma2Report> {
    if ns.len() < 2 || replicates < 4 {
        return Err(Error::invalid("ladder", "need >= 2 sizes and >= 4 replicates"));
    }
    let s = with_index_levels(scenario, w);
    let (nu, b1, b2) = (s.kernel.nu, s.design_t.beta, s.design_x.beta);
    let (alpha, sigma) = (s.noise.alpha, s.noise.sigma);
    let mut rows = Vec::new();
    let mut pooled = Vec::new();
    for (li, &n) in ns.iter().enumerate() {
        let pipeline = s.pipeline(n, m)?;
        let point_seed = replicate_seed(seed, li as u64);
        let values: Vec<f64> = (0..replicates as u64)
            .into_par_iter()
            .map(|r| pipeline.estimator.coefficient(w, &pipeline.observe(replicate_seed(point_seed, r)).y))
            .collect::<Result<_>>()?;
        let var = variance(&values);
        let d1 = floored_distance(w.k1, s.design_t.singularity, w.j1);
        let d2 = floored_distance(w.k2, s.design_x.singularity, w.j2);
        let (j1, j2) = (w.j1 as f64, w.j2 as f64);
        let growth2 = ((2.0 * nu + b1) * j1 + b2 * j2).exp2() * d1.powf(-b1) * d2.powf(-b2);
        let growth4 = (j1 * (4.0 * nu + 3.0 * b1) + j2 * (3.0 * b2 + 1.0)).exp2() * d1.powf(-3.0 * b1) * d2.powf(-3.0 * b2);
        let (mf, nf) = (m as f64, n as f64);
        let s4 = sigma.powi(4);
        let fourth_order = s4 * growth4 / (mf.powi(3) * nf * nf) + s4 * growth2 * growth2 / (mf * mf * nf.powf(2.0 * alpha));
        let mu = mean(&values);
        let sd = var.sqrt();
        pooled.extend(values.iter().map(|v| (v - mu) / sd));
        rows.push(Lemma2Row {
            n,
            m,
            variance: var,
            fourth_moment: central_moment(&values, 4),
            kurtosis: kurtosis(&values),
            variance_order: sigma * sigma * growth2 / effective_size(m, n, alpha),
            fourth_order,
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.variance.ln()).collect();
    Ok(Lemma2Report {
        index: *w,
        slope: fit_line(&x, &y)?,
        pooled_kurtosis: kurtosis(&pooled),
        fourth_ratio_spread: spread(rows.iter().map(|r| r.fourth_moment / r.fourth_order)),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma3Report {
    pub n: usize,
    pub m: usize,
    pub replicates: usize,
    pub set: IndexSet,
    /// Exceedance frequency of `|β̃ - β| > λ/2` per index.
    pub frequency: DMatrix<f64>,
    pub lambda: DMatrix<f64>,
}

impl Lemma3Report {
    pub fn max_frequency(&self) -> (Index, f64) {
        let (mut best, mut at) = (f64::NEG_INFINITY, (0, 0));
        for r in 0..self.frequency.nrows() {
            for c in 0..self.frequency.ncols() {
                if self.frequency[(r, c)] > best {
                    best = self.frequency[(r, c)];
                    at = (r, c);
                }
            }
        }
        (self.set.index_at(at.0, at.1), best)
    }

    /// Columns `j1,k1,j2,k2,lambda,frequency`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["j1", "k1", "j2", "k2", "lambda", "frequency"])?;
        for idx in self.set.iter() {
            let cell = self.set.cell(&idx);
            w.write_record(&[
                idx.j1.to_string(),
                idx.k1.to_string(),
                idx.j2.to_string(),
                idx.k2.to_string(),
                self.lambda[cell].to_string(),
                self.frequency[cell].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Empirical `Pr(|β̃_ω - β_ω| > λ(ω)/2)` for every `ω` in the index set.
pub fn verify_lemma3(scenario: &Scenario, n: usize, m: usize, replicates: usize, seed: u64) -> Result<Lemma3Report> {
    if replicates == 0 {
        return Err(Error::invalid("replicates", "must be positive"));
    }
    let pipeline = scenario.pipeline(n, m)?;
    let lambda = pipeline.estimator.thresholds().clone();
    let half = &lambda * 0.5;
    let counts = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let raw = pipeline.estimator.raw_coefficients(&pipeline.observe(replicate_seed(seed, r)).y)?;
            let err = raw - &pipeline.truth;
            Ok(err.zip_map(&half, |e, h| if e.abs() > h { 1.0 } else { 0.0 }))
        })
        .collect::<Result<Vec<DMatrix<f64>>>>()?
        .into_iter()
        .fold(DMatrix::zeros(lambda.nrows(), lambda.ncols()), |acc, c| acc + c);
    Ok(Lemma3Report {
        n,
        m,
        replicates,
        set: pipeline.estimator.index_set(),
        frequency: counts / replicates as f64,
        lambda,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailDecay {
    /// `(M N^α, max exceedance frequency)` per ladder point.
    pub points: Vec<(f64, f64)>,
    /// Fitted decay exponent; absent when some frequency is zero or too few points.
    pub tau: Option<f64>,
}

/// Maximum exceedance frequency across a size ladder and its fitted power-law decay.
pub fn tail_decay(scenario: &Scenario, sizes: &[[usize; 2]], replicates: usize, seed: u64) -> Result<TailDecay> {
    let mut points = Vec::new();
    for (i, &[n, m]) in sizes.iter().enumerate() {
        let rep = verify_lemma3(scenario, n, m, replicates, replicate_seed(seed, i as u64))?;
        points.push((effective_size(m, n, scenario.noise.alpha), rep.max_frequency().1));
    }
    let tau = if points.len() >= 2 && points.iter().all(|p| p.1 > 0.0) {
        let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
        let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
        Some(-fit_line(&x, &y)?.slope)
    } else {
        None
    };
    Ok(TailDecay { points, tau })
}
