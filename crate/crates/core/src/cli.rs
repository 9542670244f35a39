//! Configuration-driven runs that persist their inputs and outputs.
//!
//! Every command writes into one output directory: the artifacts, the resolved
//! `config.toml`, and a `manifest.toml` listing each artifact with its format tag.

use crate::analysis::lemmas::{lemma1_sweep, tail_decay, verify_lemma1, verify_lemma2, verify_lemma3};
use crate::analysis::{fit_rate, mise, rate_experiment, theoretical_exponent, BesovParams, Ladder, Scenario};
use crate::error::{Error, Result};
use crate::estimator::{reconstruct, Estimator, Index};
use crate::model::{observation::file_error, simulate_observations, ObservationGrid};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservationFormat {
    #[default]
    Csv,
    Afdc,
}

impl ObservationFormat {
    fn file_name(self) -> &'static str {
        match self {
            ObservationFormat::Csv => "observations.csv",
            ObservationFormat::Afdc => "observations.afdc",
        }
    }
}

/// Sizes for a single simulate or estimate run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSpec {
    /// Time points `N`.
    pub n: usize,
    /// Spatial profiles `M`.
    pub m: usize,
    pub format: ObservationFormat,
    /// Observation file read by `estimate`; simulated from the seed when absent.
    pub input: Option<PathBuf>,
    /// Side of the uniform reconstruction grid.
    pub reconstruction: usize,
    /// Quadrature grid for the grid-route MISE.
    pub fine_grid: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            n: 256,
            m: 256,
            format: ObservationFormat::Csv,
            input: None,
            reconstruction: 128,
            fine_grid: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaPlan {
    /// Which checks to run, from `{1, 2, 3}`.
    pub run: Vec<u8>,
    /// Inclusive time-level range of the quadrature sweep.
    pub quadrature_levels: [u32; 2],
    pub quadrature_space: [usize; 2],
    pub moment_index: Index,
    pub moment_n: Vec<usize>,
    pub moment_m: usize,
    pub moment_replicates: usize,
    /// `[N, M]` sizes of the tail check; two or more also fit a decay exponent.
    pub tail_sizes: Vec<[usize; 2]>,
    pub tail_replicates: usize,
}

impl Default for LemmaPlan {
    fn default() -> Self {
        Self {
            run: vec![1, 2, 3],
            quadrature_levels: [3, 6],
            quadrature_space: [3, 2],
            moment_index: Index::new(3, 2, 2, 1),
            moment_n: vec![128, 256, 512, 1024],
            moment_m: 128,
            moment_replicates: 500,
            tail_sizes: vec![[256, 256]],
            tail_replicates: 1000,
        }
    }
}

impl LemmaPlan {
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.run.iter().any(|k| !(1..=3).contains(k)) {
            p.push(format!("lemmas.run entries must be 1, 2 or 3 (got {:?})", self.run));
        }
        if self.quadrature_levels[0] > self.quadrature_levels[1] {
            p.push("lemmas.quadrature_levels must be [low, high]".into());
        }
        if self.moment_n.len() < 2 || self.moment_n.windows(2).any(|w| w[1] <= w[0]) {
            p.push("lemmas.moment_n needs >= 2 strictly increasing sizes".into());
        }
        if self.moment_replicates < 4 {
            p.push("lemmas.moment_replicates must be >= 4".into());
        }
        if self.tail_sizes.is_empty() || self.tail_replicates == 0 {
            p.push("lemmas.tail_sizes and lemmas.tail_replicates must be non-empty".into());
        }
        p
    }
}

/// Everything a run needs, in one TOML document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
    pub out: PathBuf,
    pub sample: SampleSpec,
    pub scenario: Scenario,
    pub ladder: Ladder,
    pub lemmas: LemmaPlan,
    /// Smoothness class used by `report`; defaults to the test function's own.
    pub besov: Option<BesovParams>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            threads: 0,
            out: PathBuf::from("out"),
            sample: SampleSpec::default(),
            scenario: Scenario::default(),
            ladder: Ladder::default(),
            lemmas: LemmaPlan::default(),
            besov: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Format(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| file_error(path, e))?;
        Self::from_toml(&text)
    }

    pub fn problems(&self) -> Vec<String> {
        let mut p = self.scenario.problems();
        p.extend(self.ladder.problems());
        p.extend(self.lemmas.problems());
        if self.sample.n < 8 || self.sample.m < 8 {
            p.push("sample.n and sample.m must be >= 8".into());
        }
        if self.sample.reconstruction < 2 || self.sample.fine_grid < 16 {
            p.push("sample.reconstruction must be >= 2 and sample.fine_grid >= 16".into());
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(p))
        }
    }

    pub fn besov(&self) -> BesovParams {
        self.besov.unwrap_or_else(|| self.scenario.test_function().besov)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: String,
    pub format: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub package_version: String,
    pub command: String,
    pub seed: u64,
    pub artifacts: Vec<Artifact>,
}

/// An output directory that records every file written into it.
pub struct OutputDir {
    dir: PathBuf,
    command: String,
    artifacts: Vec<Artifact>,
}

impl OutputDir {
    pub fn create(dir: &Path, command: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| file_error(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.into(),
            artifacts: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Writes one artifact through a buffered writer and registers it.
    pub fn write(
        &mut self,
        name: &str,
        format: &str,
        description: &str,
        body: impl FnOnce(&mut dyn Write) -> Result<()>,
    ) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path).map_err(|e| file_error(&path, e))?);
        body(&mut w)?;
        w.flush().map_err(|e| file_error(&path, e))?;
        self.artifacts.push(Artifact {
            path: name.into(),
            format: format!("{format}/{FORMAT_VERSION}"),
            description: description.into(),
        });
        Ok(path)
    }

    /// Writes the resolved config and the manifest.
    pub fn finish(mut self, config: &RunConfig) -> Result<Manifest> {
        let text = config.to_toml()?;
        self.write("config.toml", "afdecon-config-toml", "resolved run configuration", |w| {
            Ok(w.write_all(text.as_bytes())?)
        })?;
        let manifest = Manifest {
            format_version: FORMAT_VERSION,
            package_version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            seed: config.seed,
            artifacts: self.artifacts,
        };
        let body = toml::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?;
        let path = self.dir.join("manifest.toml");
        fs::write(&path, body).map_err(|e| file_error(&path, e))?;
        Ok(manifest)
    }
}

fn write_summary(out: &mut OutputDir, text: &str) -> Result<()> {
    out.write("summary.txt", "afdecon-summary-text", "human-readable summary", |w| {
        Ok(w.write_all(text.as_bytes())?)
    })?;
    Ok(())
}

/// Simulates one observation set and writes it in the configured format.
pub fn cmd_simulate(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let s = &config.sample;
    let obs = simulate_observations(&config.scenario.plan(s.n, s.m), config.seed)?;
    let mut out = OutputDir::create(&config.out, "simulate")?;
    let (name, tag) = match s.format {
        ObservationFormat::Csv => (s.format.file_name(), "afdecon-observations-csv"),
        ObservationFormat::Afdc => (s.format.file_name(), "afdecon-observations-afdc"),
    };
    out.write(name, tag, "noisy observations", |w| match s.format {
        ObservationFormat::Csv => obs.write_csv(w),
        ObservationFormat::Afdc => obs.write_afdc(w),
    })?;
    let summary = format!(
        "simulated N = {} time points x M = {} profiles ({} values), seed {}\n",
        obs.n(),
        obs.m(),
        obs.n() * obs.m(),
        config.seed
    );
    write_summary(&mut out, &summary)?;
    out.finish(config)?;
    Ok(summary)
}

/// Estimates the thresholded coefficient field, a reconstruction, and its MISE.
pub fn cmd_estimate(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let s = &config.sample;
    let scenario = &config.scenario;
    let obs = match &s.input {
        Some(path) => ObservationGrid::load(path)?,
        None => simulate_observations(&scenario.plan(s.n, s.m), config.seed)?,
    };
    obs.validate()?;
    let estimator = Estimator::new(&scenario.setup(), &obs.t, &obs.x)?;
    let f = scenario.test_function();
    let truth = estimator.truth(&f)?;
    let field = estimator.estimate(&obs)?.with_truth(truth)?;
    let coefficient_loss = field.loss_from_coefficients(f.norm_sq(scenario.wavelet.grid)?)?;
    let rec = reconstruct(&field, estimator.basis_t(), estimator.basis_x(), s.reconstruction)?;
    let grid_loss = mise(&rec, &f, s.fine_grid)?;

    let mut out = OutputDir::create(&config.out, "estimate")?;
    out.write("coefficients.csv", "afdecon-coefficients-csv", "empirical coefficients, thresholds, keep flags", |w| {
        field.write_csv(w)
    })?;
    out.write("reconstruction.csv", "afdecon-reconstruction-csv", "estimate on a uniform grid", |w| {
        rec.write_csv(w)
    })?;
    out.write("reconstruction.pgm", "pgm-p5", "greyscale image of the estimate", |w| rec.write_pgm(w))?;
    let set = estimator.index_set();
    let summary = format!(
        "N = {}, M = {}, levels J1 = {}, J2 = {}\n\
         coefficients: {} total, {} kept\n\
         squared L2 loss against the configured function: {:.6e} (coefficients), {:.6e} (grid {})\n",
        obs.n(),
        obs.m(),
        set.time.top,
        set.space.top,
        set.len(),
        field.kept_count(),
        coefficient_loss,
        grid_loss,
        s.reconstruction
    );
    write_summary(&mut out, &summary)?;
    out.finish(config)?;
    Ok(summary)
}

/// Runs the quadrature, moment and tail checks selected in `lemmas.run`.
pub fn cmd_verify(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let plan = &config.lemmas;
    let sc = &config.scenario;
    let mut out = OutputDir::create(&config.out, "verify-lemmas")?;
    let mut summary = String::new();

    if plan.run.contains(&1) {
        let [lo, hi] = plan.quadrature_levels;
        let [j2, k2] = plan.quadrature_space;
        let idx = lemma1_sweep(&sc.design_t, lo..=hi, j2 as u32, k2);
        let rep = verify_lemma1(&sc.kernel, &sc.wavelet, &sc.design_t, &sc.design_x, &idx)?;
        out.write("lemma1.csv", "afdecon-lemma1-csv", "quadrature integrals and ratios per index", |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["j1", "k1", "j2", "k2", "second", "fourth", "second_ratio", "fourth_ratio"])?;
            for r in &rep.rows {
                let i = r.index;
                c.write_record(&[
                    i.j1.to_string(),
                    i.k1.to_string(),
                    i.j2.to_string(),
                    i.k2.to_string(),
                    r.second.to_string(),
                    r.fourth.to_string(),
                    r.second_ratio.to_string(),
                    r.fourth_ratio.to_string(),
                ])?;
            }
            Ok(c.flush()?)
        })?;
        let _ = writeln!(
            summary,
            "quadrature: {} indices, second-moment spread {:.4}, fourth-moment spread {:.4}",
            rep.rows.len(),
            rep.second_spread,
            rep.fourth_spread
        );
    }

    if plan.run.contains(&2) {
        let rep = verify_lemma2(
            sc,
            &plan.moment_index,
            &plan.moment_n,
            plan.moment_m,
            plan.moment_replicates,
            config.seed,
        )?;
        out.write("lemma2.csv", "afdecon-lemma2-csv", "Monte Carlo moments per N", |w| {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["N", "M", "variance", "fourth_moment", "kurtosis", "variance_order", "fourth_order"])?;
            for r in &rep.rows {
                c.write_record(&[
                    r.n.to_string(),
                    r.m.to_string(),
                    r.variance.to_string(),
                    r.fourth_moment.to_string(),
                    r.kurtosis.to_string(),
                    r.variance_order.to_string(),
                    r.fourth_order.to_string(),
                ])?;
            }
            Ok(c.flush()?)
        })?;
        let _ = writeln!(
            summary,
            "moments at {}: variance slope {:.4} ± {:.4} (predicted {:.4}), pooled kurtosis {:.4}, fourth-moment ratio spread {:.4}",
            rep.index,
            rep.slope.slope,
            rep.slope.slope_se,
            -sc.noise.alpha,
            rep.pooled_kurtosis,
            rep.fourth_ratio_spread
        );
    }

    if plan.run.contains(&3) {
        let [n, m] = plan.tail_sizes[0];
        let rep = verify_lemma3(sc, n, m, plan.tail_replicates, config.seed)?;
        out.write("lemma3.csv", "afdecon-lemma3-csv", "exceedance frequency of half the threshold per index", |w| {
            rep.write_csv(w)
        })?;
        let (at, freq) = rep.max_frequency();
        let _ = writeln!(
            summary,
            "tail at N = {n}, M = {m}: max exceedance frequency {freq:.4} at {at} over {} indices",
            rep.set.len()
        );
        if plan.tail_sizes.len() >= 2 {
            let decay = tail_decay(sc, &plan.tail_sizes, plan.tail_replicates, config.seed)?;
            out.write("lemma3_decay.csv", "afdecon-lemma3-decay-csv", "max exceedance frequency per size", |w| {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["n_eff", "max_frequency"])?;
                for (ne, f) in &decay.points {
                    c.write_record(&[ne.to_string(), f.to_string()])?;
                }
                Ok(c.flush()?)
            })?;
            match decay.tau {
                Some(t) => _ = writeln!(summary, "tail decay exponent {t:.4}"),
                None => _ = writeln!(summary, "tail decay exponent not fitted (zero frequencies)"),
            }
        }
    }

    write_summary(&mut out, &summary)?;
    out.finish(config)?;
    Ok(summary)
}

/// Runs the rate ladder and writes the per-point table, plot data and summary.
pub fn cmd_bench_rate(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let rep = rate_experiment(&config.scenario, &config.ladder, config.seed)?;
    let mut out = OutputDir::create(&config.out, "bench-rate")?;
    out.write("rate.csv", "afdecon-rate-csv", "MISE per ladder point", |w| rep.write_csv(w))?;
    out.write("rate_plot.csv", "afdecon-plot-csv", "log n against log MISE", |w| rep.write_plot_csv(w))?;
    let summary = rep.summary();
    write_summary(&mut out, &summary)?;
    out.finish(config)?;
    Ok(summary)
}

/// Regime classification for the configured class, plus a fit of any `rate.csv` already in the output directory.
pub fn cmd_report(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let sc = &config.scenario;
    let bp = config.besov();
    let class = theoretical_exponent(&bp, sc.kernel.nu, sc.design_t.beta, sc.design_x.beta)?;
    let mut summary = format!(
        "class s1 = {}, s2 = {}, p = {}, nu = {}, beta = ({}, {})\n\
         regime {} exponent d = {:.6}, xi1 = {}, xi2 = {}, min-formula d = {:.6} (agrees: {})\n",
        bp.s1,
        bp.s2,
        bp.p,
        sc.kernel.nu,
        sc.design_t.beta,
        sc.design_x.beta,
        class.regime,
        class.exponent,
        class.xi1,
        class.xi2,
        class.min_exponent,
        class.agrees_with_min
    );
    for n in &class.notes {
        let _ = writeln!(summary, "note: {n}");
    }
    let rate_path = config.out.join("rate.csv");
    if rate_path.exists() {
        let mut r = csv::Reader::from_path(&rate_path)?;
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Format(format!("rate.csv: missing column {name}")))
        };
        let (ni, mi) = (col("n_eff")?, col("mise")?);
        let mut pts = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |i: usize| {
                rec[i]
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("rate.csv: {e}")))
            };
            pts.push((parse(ni)?, parse(mi)?));
        }
        let fit = fit_rate(&pts)?;
        let _ = writeln!(
            summary,
            "measured slope {:.4} ± {:.4} against target {:.4} (difference {:.4})",
            fit.slope,
            fit.slope_se,
            -class.exponent,
            fit.slope + class.exponent
        );
    }
    let mut out = OutputDir::create(&config.out, "report")?;
    out.write("exponent.csv", "afdecon-exponent-csv", "regime classification", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["regime", "exponent", "xi1", "xi2", "min_exponent", "agrees_with_min"])?;
        c.write_record(&[
            class.regime.to_string(),
            class.exponent.to_string(),
            class.xi1.to_string(),
            class.xi2.to_string(),
            class.min_exponent.to_string(),
            class.agrees_with_min.to_string(),
        ])?;
        Ok(c.flush()?)
    })?;
    out.write("report.txt", "afdecon-summary-text", "classification and measured rate", |w| {
        Ok(w.write_all(summary.as_bytes())?)
    })?;
    out.finish(config)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let cfg = RunConfig::default();
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_toml("sed = 3"), Err(Error::Format(_))));
    }

    #[test]
    fn empty_ladder_is_a_validation_error() {
        let mut cfg = RunConfig::default();
        cfg.ladder.sizes.clear();
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
