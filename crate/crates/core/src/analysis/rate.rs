use super::besov::{theoretical_exponent, RateClass};
use super::scenario::Scenario;
use super::stats::{fit_line, mean, replicate_seed, standard_error, LineFit};
use crate::error::{Error, Result};
use crate::estimator::effective_size;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Sample sizes and replicate count of a rate study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ladder {
    /// `[N, M]` pairs in increasing order.
    pub sizes: Vec<[usize; 2]>,
    pub replicates: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self {
            sizes: vec![[128, 128], [256, 256], [512, 512], [1024, 1024]],
            replicates: 20,
        }
    }
}

impl Ladder {
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.sizes.is_empty() {
            p.push("ladder.sizes is empty".into());
        }
        if self.replicates < 2 {
            p.push(format!("ladder.replicates must be >= 2 (got {})", self.replicates));
        }
        if self.sizes.iter().any(|s| s[0] < 8 || s[1] < 8) {
            p.push("ladder.sizes entries must be >= 8".into());
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: usize,
    pub m: usize,
    /// `M N^α`.
    pub n_eff: f64,
    /// `σ² ln(n) / (A² n)`.
    pub chi: f64,
    pub j1: u32,
    pub j2: u32,
    pub mise: f64,
    pub se: f64,
    pub kept_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub points: Vec<RatePoint>,
    /// Slope of `ln MISE` against `ln n`.
    pub fit: LineFit,
    /// The same slope after dividing MISE by `(ln n)^d`.
    pub log_adjusted: Option<LineFit>,
    pub class: std::result::Result<RateClass, String>,
}

impl RateReport {
    pub fn target_slope(&self) -> Option<f64> {
        self.class.as_ref().ok().map(|c| -c.exponent)
    }

    /// One row per ladder point.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["N", "M", "n_eff", "chi", "J1", "J2", "mise", "se", "kept_mean"])?;
        for p in &self.points {
            w.write_record(&[
                p.n.to_string(),
                p.m.to_string(),
                p.n_eff.to_string(),
                p.chi.to_string(),
                p.j1.to_string(),
                p.j2.to_string(),
                p.mise.to_string(),
                p.se.to_string(),
                p.kept_mean.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Two columns `log_n,log_mise` for plotting.
    pub fn write_plot_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["log_n", "log_mise"])?;
        for p in &self.points {
            w.write_record(&[p.n_eff.ln().to_string(), p.mise.ln().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "fitted slope {:.4} ± {:.4} over {} points\n",
            self.fit.slope,
            self.fit.slope_se,
            self.points.len()
        );
        if let Some(adj) = &self.log_adjusted {
            s += &format!("log-adjusted slope {:.4} ± {:.4}\n", adj.slope, adj.slope_se);
        }
        match &self.class {
            Ok(c) => {
                s += &format!(
                    "regime {} exponent d = {:.4} (target slope {:.4}), xi1 = {}, xi2 = {}, min-formula d = {:.4}\n",
                    c.regime, c.exponent, -c.exponent, c.xi1, c.xi2, c.min_exponent
                );
                for note in &c.notes {
                    s += &format!("note: {note}\n");
                }
            }
            Err(e) => s += &format!("regime: {e}\n"),
        }
        s
    }
}

/// Least-squares slope of `ln MISE` against `ln n`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("need >= 3 points, got {}", points.len())));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::DegenerateFit("sample sizes must be strictly increasing".into()));
    }
    if points.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(Error::DegenerateFit("sizes and risks must be positive".into()));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    fit_line(&x, &y)
}

/// Mean losses over replicates at every ladder point, with the fitted and theoretical rates.
pub fn rate_experiment(scenario: &Scenario, ladder: &Ladder, seed: u64) -> Result<RateReport> {
    let p = ladder.problems();
    if !p.is_empty() {
        return Err(Error::Validation(p));
    }
    let f = scenario.test_function();
    let mut points = Vec::with_capacity(ladder.sizes.len());
    for (li, &[n, m]) in ladder.sizes.iter().enumerate() {
        let pipeline = scenario.pipeline(n, m)?;
        let point_seed = replicate_seed(seed, li as u64);
        let runs: Vec<(f64, usize)> = (0..ladder.replicates as u64)
            .into_par_iter()
            .map(|r| {
                let (field, loss) = pipeline.run(replicate_seed(point_seed, r))?;
                Ok((loss, field.kept_count()))
            })
            .collect::<Result<_>>()?;
        let losses: Vec<f64> = runs.iter().map(|r| r.0).collect();
        let n_eff = effective_size(m, n, scenario.noise.alpha);
        let set = pipeline.estimator.index_set();
        let a = scenario.estimator.radius;
        points.push(RatePoint {
            n,
            m,
            n_eff,
            chi: scenario.noise.sigma.powi(2) * n_eff.ln() / (a * a * n_eff),
            j1: set.time.top,
            j2: set.space.top,
            mise: mean(&losses),
            se: standard_error(&losses),
            kept_mean: mean(&runs.iter().map(|r| r.1 as f64).collect::<Vec<_>>()),
        });
    }
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.n_eff, p.mise)).collect();
    let fit = fit_rate(&pairs)?;
    let class = theoretical_exponent(&f.besov, scenario.kernel.nu, scenario.design_t.beta, scenario.design_x.beta)
        .map_err(|e| e.to_string());
    let log_adjusted = match &class {
        Ok(c) => {
            let adjusted: Vec<(f64, f64)> = pairs.iter().map(|&(n, v)| (n, v / n.ln().powf(c.exponent))).collect();
            Some(fit_rate(&adjusted)?)
        }
        Err(_) => None,
    };
    Ok(RateReport {
        points,
        fit,
        log_adjusted,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5, 1e6].iter().map(|&n| (n, 3.0 * f64::powf(n, -0.5))).collect();
        assert!((fit_rate(&pts).unwrap().slope + 0.5).abs() < 1e-10);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_rate(&[(10.0, 1.0), (10.0, 0.5), (20.0, 0.2)]).is_err());
        assert!(fit_rate(&[(10.0, 1.0), (20.0, 0.5)]).is_err());
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let n = 2f64.powi(10 + i);
                let noise = 1.0 + 0.05 * (rng.random::<f64>() - 0.5);
                (n, n.powf(-0.4) * noise)
            })
            .collect();
        assert!((fit_rate(&pts).unwrap().slope + 0.4).abs() < 0.05);
    }
}
