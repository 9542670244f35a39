//! Small descriptive statistics used by the verification suites.

use crate::error::{Error, Result};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased sample variance.
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

pub fn central_moment(v: &[f64], order: i32) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(order)).sum::<f64>() / v.len() as f64
}

/// `m4 / m2²`; 3 for a Gaussian.
pub fn kurtosis(v: &[f64]) -> f64 {
    central_moment(v, 4) / central_moment(v, 2).powi(2)
}

pub fn standard_error(v: &[f64]) -> f64 {
    (variance(v) / v.len() as f64).sqrt()
}

/// Least-squares line `y = intercept + slope x`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero with two points.
    pub slope_se: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::DegenerateFit(format!("need >= 2 paired points, got {} and {}", x.len(), y.len())));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 1e-12 * x.iter().map(|v| v * v).sum::<f64>().max(1e-300)) {
        return Err(Error::DegenerateFit("abscissae have no spread".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = x.len() as f64 - 2.0;
    let slope_se = if dof > 0.0 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        (rss / dof / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_se,
    })
}

/// Seed of replicate `r` derived from `base` by the splitmix64 finalizer.
pub fn replicate_seed(base: u64, r: u64) -> u64 {
    let mut z = base.wrapping_add(r.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
