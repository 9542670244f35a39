//! Test functions built as finite sums of separable terms `a(t) b(x)`.

use crate::analysis::BesovParams;
use crate::error::Result;
use crate::series::TrigSeries;
use crate::wavelets::{build_level, Axis, WaveletSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A 1-periodic function of one variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    Constant {
        value: f64,
    },
    Cosine {
        amplitude: f64,
        frequency: u32,
        phase: f64,
    },
    /// `amplitude · Σ_{m=1}^{terms} m^{-(smoothness + 1/2)} cos(2πmt + φ_m)` with seeded phases.
    PowerSeries {
        amplitude: f64,
        smoothness: f64,
        terms: usize,
        seed: u64,
    },
    /// Compactly supported smooth bump of half-width `width` around `center`.
    Bump {
        height: f64,
        center: f64,
        width: f64,
    },
    /// `height · (frac(t - offset) - 1/2)`.
    Sawtooth {
        height: f64,
        offset: f64,
    },
    /// A single Meyer basis element at index level `level`.
    Atom {
        level: u32,
        shift: usize,
        coarsest: u32,
    },
}

fn periodic_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl Profile {
    fn power_series(&self, amplitude: f64, smoothness: f64, terms: usize, seed: u64) -> TrigSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); terms + 1];
        for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
            let phase = rng.random::<f64>() * 2.0 * PI;
            *c = Complex64::from_polar(0.5 * amplitude * (m as f64).powf(-(smoothness + 0.5)), phase);
        }
        TrigSeries::new(coeffs)
    }

    fn atom_series(level: u32, shift: usize, coarsest: u32) -> Result<TrigSeries> {
        let spec = WaveletSpec {
            m10: coarsest,
            ..WaveletSpec::default()
        };
        Ok(build_level(&spec, Axis::Time, level)?.series(shift))
    }

    /// Fourier series; exact where a closed form exists, otherwise from `grid` samples.
    pub fn series(&self, grid: usize) -> Result<TrigSeries> {
        let zero = Complex64::new(0.0, 0.0);
        Ok(match *self {
            Profile::Constant { value } => TrigSeries::new(vec![Complex64::new(value, 0.0)]),
            Profile::Cosine {
                amplitude,
                frequency,
                phase,
            } => {
                let f = frequency as usize;
                let mut c = vec![zero; f + 1];
                c[f] = if f == 0 {
                    Complex64::new(amplitude * phase.cos(), 0.0)
                } else {
                    Complex64::from_polar(0.5 * amplitude, phase)
                };
                TrigSeries::new(c)
            }
            Profile::PowerSeries {
                amplitude,
                smoothness,
                terms,
                seed,
            } => self.power_series(amplitude, smoothness, terms, seed),
            Profile::Sawtooth { height, offset } => {
                let band = grid / 2 - 1;
                let mut c = vec![zero; band + 1];
                for (m, v) in c.iter_mut().enumerate().skip(1) {
                    let m = m as f64;
                    *v = Complex64::new(0.0, height / (2.0 * PI * m))
                        * Complex64::from_polar(1.0, -2.0 * PI * m * offset);
                }
                TrigSeries::new(c)
            }
            Profile::Bump { .. } => {
                let samples: Vec<f64> = (0..grid).map(|n| self.eval(n as f64 / grid as f64)).collect();
                TrigSeries::from_samples(&samples).trimmed(1e-15)
            }
            Profile::Atom {
                level,
                shift,
                coarsest,
            } => Self::atom_series(level, shift, coarsest)?,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Cosine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (2.0 * PI * frequency as f64 * t + phase).cos(),
            Profile::PowerSeries {
                amplitude,
                smoothness,
                terms,
                seed,
            } => self.power_series(amplitude, smoothness, terms, seed).eval(t),
            Profile::Bump {
                height,
                center,
                width,
            } => {
                let d = periodic_distance(t, center) / width;
                if d < 1.0 {
                    height * (1.0 - 1.0 / (1.0 - d * d)).exp()
                } else {
                    0.0
                }
            }
            Profile::Sawtooth { height, offset } => height * ((t - offset).rem_euclid(1.0) - 0.5),
            Profile::Atom {
                level,
                shift,
                coarsest,
            } => Self::atom_series(level, shift, coarsest)
                .map(|s| s.eval(t))
                .unwrap_or(f64::NAN),
        }
    }

    /// Whether `eval` is cheap enough to call point by point.
    fn has_direct_eval(&self) -> bool {
        !matches!(self, Profile::PowerSeries { .. } | Profile::Atom { .. })
    }
}

/// Named test functions for configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionChoice {
    TensorSinusoid { amplitude: f64 },
    BumpRamp { amplitude: f64 },
    Cosine,
    Custom { function: TestFunction },
}

impl Default for FunctionChoice {
    fn default() -> Self {
        FunctionChoice::TensorSinusoid { amplitude: 1.0 }
    }
}

impl FunctionChoice {
    pub fn build(&self) -> TestFunction {
        match self {
            FunctionChoice::TensorSinusoid { amplitude } => TestFunction::tensor_sinusoid(*amplitude),
            FunctionChoice::BumpRamp { amplitude } => TestFunction::bump_ramp(*amplitude),
            FunctionChoice::Cosine => TestFunction::cosine(),
            FunctionChoice::Custom { function } => function.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub time: Profile,
    pub space: Profile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub name: String,
    pub terms: Vec<Term>,
    pub besov: BesovParams,
}

/// A term with both factors expanded into Fourier series.
#[derive(Clone, Debug)]
pub struct SeparableTerm {
    pub time: TrigSeries,
    pub space: TrigSeries,
    pub time_profile: Profile,
    pub space_profile: Profile,
}

impl SeparableTerm {
    pub fn eval_time(&self, points: &[f64]) -> Vec<f64> {
        eval_profile(&self.time_profile, &self.time, points)
    }

    pub fn eval_space(&self, points: &[f64]) -> Vec<f64> {
        eval_profile(&self.space_profile, &self.space, points)
    }
}

fn eval_profile(profile: &Profile, series: &TrigSeries, points: &[f64]) -> Vec<f64> {
    if profile.has_direct_eval() {
        points.iter().map(|&t| profile.eval(t)).collect()
    } else {
        series.eval_many(points)
    }
}

impl TestFunction {
    /// `w(t) w(x)` with `w` a power-law random-phase series of smoothness 1.
    pub fn tensor_sinusoid(amplitude: f64) -> Self {
        let w = |seed| Profile::PowerSeries {
            amplitude: 1.0,
            smoothness: 1.0,
            terms: 2048,
            seed,
        };
        let mut first = w(11);
        if let Profile::PowerSeries { amplitude: a, .. } = &mut first {
            *a = amplitude;
        }
        Self {
            name: "tensor-sinusoid".into(),
            terms: vec![Term {
                time: first,
                space: w(29),
            }],
            besov: BesovParams::new(1.0, 1.0, 2.0, f64::INFINITY, amplitude),
        }
    }

    /// A localized bump plus a ramp with a jump in `t`.
    pub fn bump_ramp(amplitude: f64) -> Self {
        Self {
            name: "bump-ramp".into(),
            terms: vec![
                Term {
                    time: Profile::Bump {
                        height: amplitude,
                        center: 0.3,
                        width: 0.15,
                    },
                    space: Profile::Bump {
                        height: 1.0,
                        center: 0.6,
                        width: 0.2,
                    },
                },
                Term {
                    time: Profile::Sawtooth {
                        height: 0.5 * amplitude,
                        offset: 0.7,
                    },
                    space: Profile::Cosine {
                        amplitude: 1.0,
                        frequency: 1,
                        phase: 0.0,
                    },
                },
            ],
            besov: BesovParams::new(1.0, 1.0, 1.0, f64::INFINITY, amplitude),
        }
    }

    pub fn cosine() -> Self {
        Self {
            name: "cosine".into(),
            terms: vec![Term {
                time: Profile::Cosine {
                    amplitude: 1.0,
                    frequency: 1,
                    phase: 0.0,
                },
                space: Profile::Constant { value: 1.0 },
            }],
            besov: BesovParams::new(4.0, 4.0, 2.0, f64::INFINITY, 1.0),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            name: "constant".into(),
            terms: vec![Term {
                time: Profile::Constant { value },
                space: Profile::Constant { value: 1.0 },
            }],
            besov: BesovParams::new(4.0, 4.0, 2.0, f64::INFINITY, value.abs()),
        }
    }

    /// The tensor atom `ψ_{j1,k1}(t) η_{j2,k2}(x)` of the Meyer basis.
    pub fn atom(spec: &WaveletSpec, j1: u32, k1: usize, j2: u32, k2: usize) -> Self {
        Self {
            name: format!("atom({j1},{k1};{j2},{k2})"),
            terms: vec![Term {
                time: Profile::Atom {
                    level: j1,
                    shift: k1,
                    coarsest: spec.m10,
                },
                space: Profile::Atom {
                    level: j2,
                    shift: k2,
                    coarsest: spec.m20,
                },
            }],
            besov: BesovParams::new(4.0, 4.0, 2.0, f64::INFINITY, 1.0),
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.time.eval(t) * term.space.eval(x))
            .sum()
    }

    pub fn separable(&self, grid: usize) -> Result<Vec<SeparableTerm>> {
        self.terms
            .iter()
            .map(|term| {
                Ok(SeparableTerm {
                    time: term.time.series(grid)?,
                    space: term.space.series(grid)?,
                    time_profile: term.time.clone(),
                    space_profile: term.space.clone(),
                })
            })
            .collect()
    }

    /// Values on the tensor grid `ts × xs`, indexed `[i][l]` in a flat time-major buffer.
    pub fn eval_grid(&self, grid: usize, ts: &[f64], xs: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let mut out = nalgebra::DMatrix::zeros(ts.len(), xs.len());
        for term in self.separable(grid)? {
            let a = nalgebra::DVector::from_vec(term.eval_time(ts));
            let b = nalgebra::DVector::from_vec(term.eval_space(xs));
            out += a * b.transpose();
        }
        Ok(out)
    }

    /// `‖f‖²` on the unit square from the separable spectra.
    pub fn norm_sq(&self, grid: usize) -> Result<f64> {
        let terms = self.separable(grid)?;
        let mut acc = 0.0;
        for a in &terms {
            for b in &terms {
                acc += a.time.inner(&b.time) * a.space.inner(&b.space);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_are_periodic_in_time() {
        for f in [
            TestFunction::tensor_sinusoid(1.0),
            TestFunction::bump_ramp(1.0),
            TestFunction::cosine(),
        ] {
            for &x in &[0.1, 0.45, 0.8] {
                assert!((f.eval(0.0, x) - f.eval(1.0, x)).abs() < 1e-8, "{}", f.name);
            }
        }
    }

    #[test]
    fn exact_series_match_point_values() {
        let p = Profile::Sawtooth {
            height: 1.0,
            offset: 0.7,
        };
        let s = p.series(1 << 14).unwrap();
        // away from the jump the truncated series converges like 1/(G · distance)
        for &t in &[0.1, 0.3, 0.5] {
            assert!((s.eval(t) - p.eval(t)).abs() < 1e-3);
        }
        let b = Profile::Bump {
            height: 2.0,
            center: 0.9,
            width: 0.3,
        };
        let bs = b.series(1 << 12).unwrap();
        for &t in &[0.0, 0.15, 0.7, 0.95] {
            assert!((bs.eval(t) - b.eval(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn norm_matches_grid_quadrature() {
        let f = TestFunction::bump_ramp(1.0);
        let n = 512;
        let pts: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let grid = f.eval_grid(1 << 14, &pts, &pts).unwrap();
        let quad = grid.iter().map(|v| v * v).sum::<f64>() / (n * n) as f64;
        assert!((quad - f.norm_sq(1 << 14).unwrap()).abs() < 1e-3);
    }
}
