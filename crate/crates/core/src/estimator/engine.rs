use super::config::{choose_levels, EstimatorConfig, ThresholdRule};
use super::field::{hard_threshold, CoefficientField};
use super::index::{Index, IndexSet};
use super::inversion::{compute_u, deconvolved_basis};
use crate::error::{Error, Result};
use crate::model::{DesignDensity, KernelSpec, ObservationGrid, TestFunction};
use crate::wavelets::{Axis, Basis1d, WaveletSpec};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Model knowledge the estimator is allowed to use.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Setup {
    pub wavelet: WaveletSpec,
    pub kernel: KernelSpec,
    pub design_t: DesignDensity,
    pub design_x: DesignDensity,
    pub config: EstimatorConfig,
}

impl Setup {
    /// `(J1, J2)` for an `N × M` sample, never below the coarsest resolutions.
    pub fn levels(&self, m: usize, n: usize) -> (u32, u32) {
        let c = &self.config;
        let (auto1, auto2) = choose_levels(m, n, c.alpha, c.sigma, c.radius, self.kernel.nu);
        (
            c.j1.unwrap_or(auto1).max(self.wavelet.m10),
            c.j2.unwrap_or(auto2).max(self.wavelet.m20),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let mut p = self.wavelet.problems();
        p.extend(self.kernel.problems());
        p.extend(self.config.problems());
        for (name, d) in [("design_t", &self.design_t), ("design_x", &self.design_x)] {
            if let Err(e) = d.validate() {
                p.push(format!("{name}: {e}"));
            }
        }
        if p.is_empty() {
            self.wavelet.check_regularity(self.kernel.nu.max(self.kernel.r))
        } else {
            Err(Error::Validation(p))
        }
    }
}

fn check_design(points: &[f64], density: &DesignDensity) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&p| {
            let h = density.density(p);
            if h > 0.0 && p > 0.0 && p < 1.0 {
                Ok(h)
            } else {
                Err(Error::SingularDesignPoint {
                    point: p,
                    singularity: density.singularity,
                })
            }
        })
        .collect()
}

/// Precomputed weighted inversion rows for a fixed design.
#[derive(Clone, Debug)]
pub struct Estimator {
    setup: Setup,
    set: IndexSet,
    basis_t: Basis1d,
    basis_x: Basis1d,
    /// `u_p(t_i) / h1(t_i)`, one row per time position.
    u_rows: DMatrix<f64>,
    /// `η_q(x_l) / (h2(x_l) s(x_l))`, one row per space position.
    e_rows: DMatrix<f64>,
    lambda: DMatrix<f64>,
    n: usize,
    m: usize,
}

impl Estimator {
    pub fn new(setup: &Setup, t: &[f64], x: &[f64]) -> Result<Self> {
        setup.validate()?;
        let (n, m) = (t.len(), x.len());
        let (top1, top2) = setup.levels(m, n);
        let set = IndexSet::new(setup.wavelet.m10, top1, setup.wavelet.m20, top2);
        let basis_t = Basis1d::new(&setup.wavelet, Axis::Time, top1)?;
        let basis_x = Basis1d::new(&setup.wavelet, Axis::Space, top2)?;
        let h1 = check_design(t, &setup.design_t)?;
        let h2 = check_design(x, &setup.design_x)?;

        let inverse = deconvolved_basis(&basis_t, &setup.kernel, setup.config.band_limit)?;
        let mut u_rows = inverse.eval_matrix(t);
        for (i, mut col) in u_rows.column_iter_mut().enumerate() {
            col /= h1[i];
        }
        let mut e_rows = basis_x.eval_matrix(x);
        for (l, mut col) in e_rows.column_iter_mut().enumerate() {
            col /= h2[l] * setup.kernel.profile_scale(x[l]);
        }

        let rule = ThresholdRule::new(&setup.config, setup.kernel.nu, &setup.design_t, &setup.design_x, m, n);
        let lambda = DMatrix::from_fn(set.time.dim(), set.space.dim(), |r, c| rule.lambda(&set.index_at(r, c)));
        Ok(Self {
            setup: setup.clone(),
            set,
            basis_t,
            basis_x,
            u_rows,
            e_rows,
            lambda,
            n,
            m,
        })
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn index_set(&self) -> IndexSet {
        self.set
    }

    pub fn basis_t(&self) -> &Basis1d {
        &self.basis_t
    }

    pub fn basis_x(&self) -> &Basis1d {
        &self.basis_x
    }

    pub fn thresholds(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    fn check_shape(&self, y: &DMatrix<f64>) -> Result<()> {
        if y.shape() != (self.n, self.m) {
            return Err(Error::DimensionMismatch(format!(
                "observations are {:?}, estimator expects {:?}",
                y.shape(),
                (self.n, self.m)
            )));
        }
        Ok(())
    }

    /// `β̃` for every index: `(1/MN) Σ_l Σ_i U(t_i, x_l) Y_il / (h1(t_i) h2(x_l))`.
    pub fn raw_coefficients(&self, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_shape(y)?;
        let scale = 1.0 / (self.n * self.m) as f64;
        Ok((&self.u_rows * y) * self.e_rows.transpose() * scale)
    }

    pub fn coefficient(&self, w: &Index, y: &DMatrix<f64>) -> Result<f64> {
        self.check_shape(y)?;
        if !self.set.contains(w) {
            return Err(Error::invalid("index", format!("{w} is outside the index set")));
        }
        let (r, c) = self.set.cell(w);
        let weighted = self.u_rows.row(r) * y;
        Ok(weighted.dot(&self.e_rows.row(c)) / (self.n * self.m) as f64)
    }

    /// Thresholded field without truth attached.
    pub fn estimate(&self, obs: &ObservationGrid) -> Result<CoefficientField> {
        let raw = self.raw_coefficients(&obs.y)?;
        Ok(hard_threshold(CoefficientField::new(self.set, raw, self.lambda.clone())?))
    }

    pub fn truth(&self, f: &TestFunction) -> Result<DMatrix<f64>> {
        true_coefficients(f, &self.basis_t, &self.basis_x, self.setup.wavelet.grid)
    }
}

/// Exact `β_ω = ⟨f, ψ_{j1k1} η_{j2k2}⟩` from the separable spectra of `f`.
pub fn true_coefficients(f: &TestFunction, basis_t: &Basis1d, basis_x: &Basis1d, grid: usize) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(basis_t.dim(), basis_x.dim());
    for term in f.separable(grid)? {
        let a = nalgebra::DVector::from_vec(basis_t.project(&term.time));
        let b = nalgebra::DVector::from_vec(basis_x.project(&term.space));
        out += a * b.transpose();
    }
    Ok(out)
}

/// Direct evaluation of a single `β̃_ω` through `U_ω`.
pub fn estimate_coefficient(w: &Index, obs: &ObservationGrid, setup: &Setup) -> Result<f64> {
    obs.validate()?;
    let h1 = check_design(&obs.t, &setup.design_t)?;
    let h2 = check_design(&obs.x, &setup.design_x)?;
    let u = compute_u(w, &setup.kernel, &setup.wavelet, &obs.t, &obs.x, setup.config.band_limit)?;
    let mut acc = 0.0;
    for l in 0..obs.m() {
        for i in 0..obs.n() {
            acc += u[(i, l)] * obs.y[(i, l)] / (h1[i] * h2[l]);
        }
    }
    Ok(acc / (obs.n() * obs.m()) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{quantile_design, KernelSpec};

    fn setup(kernel: KernelSpec) -> Setup {
        Setup {
            kernel,
            design_x: DesignDensity::new(0.3, 0.4).unwrap(),
            config: EstimatorConfig {
                j1: Some(5),
                j2: Some(4),
                ..EstimatorConfig::default()
            },
            ..Setup::default()
        }
    }

    #[test]
    fn engine_matches_direct_formula_and_is_linear() {
        let s = setup(KernelSpec::laplace(1.0).with_modulation(0.2));
        let t = quantile_design(48, &s.design_t).unwrap();
        let x = quantile_design(40, &s.design_x).unwrap();
        let est = Estimator::new(&s, &t, &x).unwrap();
        let y1 = DMatrix::from_fn(48, 40, |i, l| ((i * 7 + l * 3) % 11) as f64 - 5.0);
        let y2 = DMatrix::from_fn(48, 40, |i, l| ((i * l) % 5) as f64 * 0.3);
        let obs = ObservationGrid {
            t: t.clone(),
            x: x.clone(),
            y: y1.clone(),
            seed: 0,
        };
        for w in [Index::new(2, 5, 2, 3), Index::new(4, 9, 3, 7)] {
            let direct = estimate_coefficient(&w, &obs, &s).unwrap();
            assert!((est.coefficient(&w, &y1).unwrap() - direct).abs() < 1e-10);
        }
        let sum = est.raw_coefficients(&(&y1 + &y2)).unwrap();
        let parts = est.raw_coefficients(&y1).unwrap() + est.raw_coefficients(&y2).unwrap();
        assert!((sum - parts).abs().max() < 1e-10);
        assert_eq!(est.raw_coefficients(&DMatrix::zeros(48, 40)).unwrap().abs().max(), 0.0);
    }

    #[test]
    fn atom_truth_is_a_delta() {
        let s = setup(KernelSpec::default());
        let est = Estimator::new(&s, &quantile_design(64, &s.design_t).unwrap(), &quantile_design(64, &s.design_x).unwrap()).unwrap();
        let f = TestFunction::atom(&s.wavelet, 3, 1, 3, 4);
        let truth = est.truth(&f).unwrap();
        let (r, c) = est.index_set().cell(&Index::new(3, 1, 3, 4));
        for ((i, j), v) in truth.iter().enumerate().map(|(p, v)| ((p % truth.nrows(), p / truth.nrows()), v)) {
            let expect = if (i, j) == (r, c) { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-10);
        }
        let constant = est.truth(&TestFunction::constant(2.0)).unwrap();
        for w in est.index_set().iter() {
            let v = constant[est.index_set().cell(&w)];
            if !est.index_set().is_scaling(&w) {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_design_point_is_rejected() {
        let s = setup(KernelSpec::default());
        let t = quantile_design(16, &s.design_t).unwrap();
        let mut x = quantile_design(16, &s.design_x).unwrap();
        x[7] = 0.4;
        x.sort_by(f64::total_cmp);
        assert!(matches!(
            Estimator::new(&s, &t, &x),
            Err(Error::SingularDesignPoint { .. })
        ));
    }
}
