use super::index::{Index, IndexSet};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::io::Write;

/// Estimated coefficients over `Ω(J1, J2)` with thresholds, keep flags and optional truth.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientField {
    pub set: IndexSet,
    pub estimate: DMatrix<f64>,
    pub lambda: DMatrix<f64>,
    pub kept: DMatrix<bool>,
    pub truth: Option<DMatrix<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub index: Index,
    pub estimate: f64,
    pub lambda: f64,
    pub kept: bool,
    pub truth: Option<f64>,
}

impl CoefficientField {
    pub fn new(set: IndexSet, estimate: DMatrix<f64>, lambda: DMatrix<f64>) -> Result<Self> {
        let shape = (set.time.dim(), set.space.dim());
        if estimate.shape() != shape || lambda.shape() != shape {
            return Err(Error::DimensionMismatch(format!(
                "coefficient grid {:?} / thresholds {:?} do not match {shape:?}",
                estimate.shape(),
                lambda.shape()
            )));
        }
        let kept = DMatrix::from_element(shape.0, shape.1, false);
        Ok(Self {
            set,
            estimate,
            lambda,
            kept,
            truth: None,
        })
    }

    pub fn with_truth(mut self, truth: DMatrix<f64>) -> Result<Self> {
        if truth.shape() != self.estimate.shape() {
            return Err(Error::DimensionMismatch("truth grid shape".into()));
        }
        self.truth = Some(truth);
        Ok(self)
    }

    pub fn entry(&self, w: &Index) -> Option<Entry> {
        if !self.set.contains(w) {
            return None;
        }
        let cell = self.set.cell(w);
        Some(Entry {
            index: *w,
            estimate: self.estimate[cell],
            lambda: self.lambda[cell],
            kept: self.kept[cell],
            truth: self.truth.as_ref().map(|t| t[cell]),
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.set.iter().map(|w| self.entry(&w).expect("index from own set"))
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    /// Estimates with dropped entries set to zero.
    pub fn kept_coefficients(&self) -> DMatrix<f64> {
        self.estimate.zip_map(&self.kept, |v, k| if k { v } else { 0.0 })
    }

    /// `‖f̂ - f‖²` via Parseval, given `‖f‖²`; requires the truth.
    pub fn loss_from_coefficients(&self, norm_sq: f64) -> Result<f64> {
        let truth = self
            .truth
            .as_ref()
            .ok_or_else(|| Error::invalid("truth", "true coefficients are not attached"))?;
        let kept = self.kept_coefficients();
        let cross = kept.dot(truth);
        Ok(norm_sq - 2.0 * cross + kept.norm_squared())
    }

    /// Columns `j1,k1,j2,k2,beta_hat,lambda,kept,beta_true`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["j1", "k1", "j2", "k2", "beta_hat", "lambda", "kept", "beta_true"])?;
        for e in self.entries() {
            w.write_record(&[
                e.index.j1.to_string(),
                e.index.k1.to_string(),
                e.index.j2.to_string(),
                e.index.k2.to_string(),
                e.estimate.to_string(),
                e.lambda.to_string(),
                u8::from(e.kept).to_string(),
                e.truth.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Keeps `|β̃| > λ` and the pure scaling block.
pub fn hard_threshold(mut field: CoefficientField) -> CoefficientField {
    let set = field.set;
    for r in 0..field.estimate.nrows() {
        for c in 0..field.estimate.ncols() {
            let w = set.index_at(r, c);
            field.kept[(r, c)] = set.is_scaling(&w) || field.estimate[(r, c)].abs() > field.lambda[(r, c)];
        }
    }
    field
}
