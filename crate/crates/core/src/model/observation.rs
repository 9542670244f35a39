//! Observation grids: generation from the convolution model and file formats.

use super::design::{quantile_design, DesignDensity};
use super::kernel::{KernelShape, KernelSpec};
use super::noise::{NoiseSampler, NoiseSpec};
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::io::{Read, Write};
use std::path::Path;

pub const AFDC_MAGIC: [u8; 4] = *b"AFDC";
pub const AFDC_VERSION: u32 = 1;

/// Responses `y[(i, l)]` at `(t[i], x[l])`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservationGrid {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: DMatrix<f64>,
    pub seed: u64,
}

impl ObservationGrid {
    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self) -> Result<()> {
        let increasing = |v: &[f64]| v.iter().all(|&p| p > 0.0 && p < 1.0) && v.windows(2).all(|w| w[0] < w[1]);
        if self.y.nrows() != self.n() || self.y.ncols() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "responses are {}x{}, design is {}x{}",
                self.y.nrows(),
                self.y.ncols(),
                self.n(),
                self.m()
            )));
        }
        if !increasing(&self.t) || !increasing(&self.x) {
            return Err(Error::Format("design points must be strictly increasing inside (0, 1)".into()));
        }
        Ok(())
    }

    /// Rows `i,l,t,x,Y` with 1-based indices, profile by profile.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["i", "l", "t", "x", "Y"])?;
        for (l, &x) in self.x.iter().enumerate() {
            for (i, &t) in self.t.iter().enumerate() {
                w.write_record(&[
                    (i + 1).to_string(),
                    (l + 1).to_string(),
                    t.to_string(),
                    x.to_string(),
                    self.y[(i, l)].to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, seed: u64) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != 5 {
                return Err(Error::Format(format!("expected 5 columns, found {}", rec.len())));
            }
            let parse_idx = |s: &str| s.parse::<usize>().map_err(|e| Error::Format(format!("index {s:?}: {e}")));
            let parse_val = |s: &str| s.parse::<f64>().map_err(|e| Error::Format(format!("value {s:?}: {e}")));
            rows.push((
                parse_idx(&rec[0])?,
                parse_idx(&rec[1])?,
                parse_val(&rec[2])?,
                parse_val(&rec[3])?,
                parse_val(&rec[4])?,
            ));
        }
        let n = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let m = rows.iter().map(|r| r.1).max().unwrap_or(0);
        if n == 0 || m == 0 || rows.len() != n * m {
            return Err(Error::Format(format!("{} rows do not form a full {n}x{m} grid", rows.len())));
        }
        let mut t = vec![f64::NAN; n];
        let mut x = vec![f64::NAN; m];
        let mut y = DMatrix::from_element(n, m, f64::NAN);
        for (i, l, tv, xv, yv) in rows {
            if i == 0 || l == 0 {
                return Err(Error::Format("indices are 1-based".into()));
            }
            if (!t[i - 1].is_nan() && t[i - 1] != tv) || (!x[l - 1].is_nan() && x[l - 1] != xv) {
                return Err(Error::Format(format!("inconsistent design point at i = {i}, l = {l}")));
            }
            t[i - 1] = tv;
            x[l - 1] = xv;
            y[(i - 1, l - 1)] = yv;
        }
        if y.iter().any(|v| v.is_nan()) {
            return Err(Error::Format("missing grid cells".into()));
        }
        let grid = Self { t, x, y, seed };
        grid.validate()?;
        Ok(grid)
    }

    /// Binary container; layout in FORMATS.md.
    pub fn write_afdc<W: Write>(&self, mut w: W) -> Result<()> {
        let dim = |v: usize| u32::try_from(v).map_err(|_| Error::Format("dimension exceeds u32".into()));
        w.write_all(&AFDC_MAGIC)?;
        w.write_all(&AFDC_VERSION.to_le_bytes())?;
        w.write_all(&dim(self.n())?.to_le_bytes())?;
        w.write_all(&dim(self.m())?.to_le_bytes())?;
        for v in self.t.iter().chain(&self.x).chain(self.y.iter()) {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&self.seed.to_le_bytes())?;
        Ok(())
    }

    pub fn read_afdc<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if header[..4] != AFDC_MAGIC {
            return Err(Error::Format("bad magic, expected AFDC".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().expect("4 bytes"));
        let version = word(4);
        if version != AFDC_VERSION {
            return Err(Error::Format(format!("unsupported AFDC version {version}")));
        }
        let (n, m) = (word(8) as usize, word(12) as usize);
        let mut read_f64s = |count: usize| -> Result<Vec<f64>> {
            let mut buf = vec![0u8; count * 8];
            r.read_exact(&mut buf)?;
            Ok(buf
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect())
        };
        let t = read_f64s(n)?;
        let x = read_f64s(m)?;
        let y = DMatrix::from_vec(n, m, read_f64s(n * m)?);
        let mut seed = [0u8; 8];
        r.read_exact(&mut seed)?;
        let grid = Self {
            t,
            x,
            y,
            seed: u64::from_le_bytes(seed),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| file_error(path, source))?;
        let w = std::io::BufWriter::new(file);
        if is_binary(path) {
            self.write_afdc(w)
        } else {
            self.write_csv(w)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| file_error(path, source))?;
        let r = std::io::BufReader::new(file);
        if is_binary(path) {
            Self::read_afdc(r)
        } else {
            Self::read_csv(r, 0)
        }
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("afdc"))
}

pub(crate) fn file_error(path: &Path, source: std::io::Error) -> Error {
    Error::File {
        path: path.display().to_string(),
        source,
    }
}

/// Everything needed to generate observations except the seed.
#[derive(Clone, Debug)]
pub struct SimulationPlan {
    pub function: TestFunction,
    pub kernel: KernelSpec,
    pub design_t: DesignDensity,
    pub design_x: DesignDensity,
    pub noise: NoiseSpec,
    pub n: usize,
    pub m: usize,
    /// Fine grid for Fourier coefficients of non-closed-form profiles.
    pub grid: usize,
}

/// A plan with its noiseless signal and noise factor precomputed.
#[derive(Debug)]
pub struct Simulator {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub clean: DMatrix<f64>,
    sigma: f64,
    sampler: Option<NoiseSampler>,
    m: usize,
}

impl Simulator {
    pub fn new(plan: &SimulationPlan) -> Result<Self> {
        plan.kernel.validate()?;
        plan.noise.validate()?;
        let t = quantile_design(plan.n, &plan.design_t)?;
        let x = quantile_design(plan.m, &plan.design_x)?;
        let clean = clean_signal(&plan.function, &plan.kernel, &t, &x, plan.grid)?;
        let sampler = if plan.noise.sigma > 0.0 {
            Some(NoiseSampler::new(&plan.noise, plan.n)?)
        } else {
            None
        };
        Ok(Self {
            t,
            x,
            clean,
            sigma: plan.noise.sigma,
            sampler,
            m: plan.m,
        })
    }

    pub fn simulate(&self, seed: u64) -> ObservationGrid {
        let mut y = self.clean.clone();
        if let Some(sampler) = &self.sampler {
            y += sampler.sample(seed, self.m) * self.sigma;
        }
        ObservationGrid {
            t: self.t.clone(),
            x: self.x.clone(),
            y,
            seed,
        }
    }
}

/// `q(t_i, x_l) = Σ_m f̂(m, x_l) g(m, x_l) e^{i2πm t_i}`.
pub fn clean_signal(
    f: &TestFunction,
    kernel: &KernelSpec,
    t: &[f64],
    x: &[f64],
    grid: usize,
) -> Result<DMatrix<f64>> {
    let mut q = DMatrix::zeros(t.len(), x.len());
    let scale: Vec<f64> = x.iter().map(|&v| kernel.profile_scale(v)).collect();
    for term in f.separable(grid)? {
        let time = if kernel.shape == KernelShape::Identity {
            term.eval_time(t)
        } else {
            term.time
                .map_coeffs(|m, c| c * kernel.coeff(m as i64))
                .eval_many(t)
        };
        let space: Vec<f64> = term
            .eval_space(x)
            .iter()
            .zip(&scale)
            .map(|(b, s)| b * s)
            .collect();
        q += DVector::from_vec(time) * DVector::from_vec(space).transpose();
    }
    Ok(q)
}

pub fn simulate_observations(plan: &SimulationPlan, seed: u64) -> Result<ObservationGrid> {
    Ok(Simulator::new(plan)?.simulate(seed))
}
