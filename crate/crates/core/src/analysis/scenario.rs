use crate::error::{Error, Result};
use crate::estimator::{CoefficientField, Estimator, EstimatorConfig, Setup};
use crate::model::{
    DesignDensity, FunctionChoice, KernelSpec, NoiseSpec, ObservationGrid, SimulationPlan, Simulator, TestFunction,
};
use crate::wavelets::WaveletSpec;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// A complete simulation and estimation problem, minus the sample sizes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub function: FunctionChoice,
    pub kernel: KernelSpec,
    pub design_t: DesignDensity,
    pub design_x: DesignDensity,
    pub noise: NoiseSpec,
    pub wavelet: WaveletSpec,
    /// Threshold and level settings; its noise fields are overwritten from `noise`.
    pub estimator: EstimatorConfig,
}

impl Scenario {
    pub fn problems(&self) -> Vec<String> {
        let mut p = self.kernel.problems();
        p.extend(self.noise.problems());
        p.extend(self.wavelet.problems());
        p.extend(self.setup().config.problems());
        for (name, d) in [("design_t", &self.design_t), ("design_x", &self.design_x)] {
            if let Err(e) = d.validate() {
                p.push(format!("{name}: {e}"));
            }
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

    pub fn test_function(&self) -> TestFunction {
        self.function.build()
    }

    pub fn setup(&self) -> Setup {
        Setup {
            wavelet: self.wavelet.clone(),
            kernel: self.kernel.clone(),
            design_t: self.design_t.clone(),
            design_x: self.design_x.clone(),
            config: EstimatorConfig {
                kind: self.noise.kind,
                sigma: self.noise.sigma,
                alpha: self.noise.alpha,
                ..self.estimator.clone()
            },
        }
    }

    pub fn plan(&self, n: usize, m: usize) -> SimulationPlan {
        SimulationPlan {
            function: self.test_function(),
            kernel: self.kernel.clone(),
            design_t: self.design_t.clone(),
            design_x: self.design_x.clone(),
            noise: self.noise.clone(),
            n,
            m,
            grid: self.wavelet.grid,
        }
    }

    pub fn pipeline(&self, n: usize, m: usize) -> Result<Pipeline> {
        self.validate()?;
        let simulator = Simulator::new(&self.plan(n, m))?;
        let estimator = Estimator::new(&self.setup(), &simulator.t, &simulator.x)?;
        let f = self.test_function();
        let truth = estimator.truth(&f)?;
        let norm_sq = f.norm_sq(self.wavelet.grid)?;
        Ok(Pipeline {
            simulator,
            estimator,
            truth,
            norm_sq,
        })
    }
}

/// A scenario fixed at one sample size, ready for repeated replicates.
#[derive(Debug)]
pub struct Pipeline {
    pub simulator: Simulator,
    pub estimator: Estimator,
    pub truth: DMatrix<f64>,
    pub norm_sq: f64,
}

impl Pipeline {
    pub fn observe(&self, seed: u64) -> ObservationGrid {
        self.simulator.simulate(seed)
    }

    pub fn field(&self, obs: &ObservationGrid) -> Result<CoefficientField> {
        self.estimator.estimate(obs)?.with_truth(self.truth.clone())
    }

    /// Thresholded field and its squared `L²` loss.
    pub fn run(&self, seed: u64) -> Result<(CoefficientField, f64)> {
        let field = self.field(&self.observe(seed))?;
        let loss = field.loss_from_coefficients(self.norm_sq)?;
        Ok((field, loss))
    }

    pub fn loss(&self, seed: u64) -> Result<f64> {
        let kept = self.estimator.estimate(&self.observe(seed))?.kept_coefficients();
        Ok(self.norm_sq - 2.0 * kept.dot(&self.truth) + kept.norm_squared())
    }
}
