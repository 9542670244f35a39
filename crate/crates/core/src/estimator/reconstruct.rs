use super::field::CoefficientField;
use crate::error::{Error, Result};
use crate::wavelets::Basis1d;
use nalgebra::DMatrix;
use std::io::Write;

/// Samples of an estimate on the uniform grid `(a / G, b / G)`; rows follow `t`, columns `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub values: DMatrix<f64>,
}

pub fn uniform_points(size: usize) -> Vec<f64> {
    (0..size).map(|i| i as f64 / size as f64).collect()
}

impl Reconstruction {
    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    /// Rows `t,x,value`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let pts = uniform_points(self.size());
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "x", "value"])?;
        for (a, t) in pts.iter().enumerate() {
            for (b, x) in pts.iter().enumerate() {
                w.write_record(&[t.to_string(), x.to_string(), self.values[(a, b)].to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Binary greyscale PGM, `t` down the rows, linearly scaled to 0..=255.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        write!(w, "P5\n{} {}\n255\n", self.values.ncols(), self.values.nrows())?;
        let mut bytes = Vec::with_capacity(self.values.len());
        for a in 0..self.values.nrows() {
            for b in 0..self.values.ncols() {
                bytes.push(((self.values[(a, b)] - lo) / span * 255.0).round() as u8);
            }
        }
        w.write_all(&bytes)?;
        Ok(())
    }
}

/// `Σ c_pq θ_p(t) η_q(x)` on the uniform grid of the given size.
pub fn synthesize(coeffs: &DMatrix<f64>, basis_t: &Basis1d, basis_x: &Basis1d, size: usize) -> Result<DMatrix<f64>> {
    if coeffs.shape() != (basis_t.dim(), basis_x.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "coefficients {:?} vs basis ({}, {})",
            coeffs.shape(),
            basis_t.dim(),
            basis_x.dim()
        )));
    }
    let pts = uniform_points(size);
    let phi_t = basis_t.eval_matrix(&pts);
    let phi_x = basis_x.eval_matrix(&pts);
    Ok(phi_t.transpose() * coeffs * phi_x)
}

/// Discrete inner products of grid samples with every tensor atom.
pub fn analyze_grid(values: &DMatrix<f64>, basis_t: &Basis1d, basis_x: &Basis1d) -> DMatrix<f64> {
    let phi_t = basis_t.eval_matrix(&uniform_points(values.nrows()));
    let phi_x = basis_x.eval_matrix(&uniform_points(values.ncols()));
    phi_t * values * phi_x.transpose() / (values.nrows() * values.ncols()) as f64
}

pub fn reconstruct(field: &CoefficientField, basis_t: &Basis1d, basis_x: &Basis1d, size: usize) -> Result<Reconstruction> {
    Ok(Reconstruction {
        values: synthesize(&field.kept_coefficients(), basis_t, basis_x, size)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{hard_threshold, Index, IndexSet};
    use crate::wavelets::{Axis, WaveletSpec};

    fn bases() -> (Basis1d, Basis1d) {
        let spec = WaveletSpec::default();
        (
            Basis1d::new(&spec, Axis::Time, 6).unwrap(),
            Basis1d::new(&spec, Axis::Space, 5).unwrap(),
        )
    }

    #[test]
    fn single_atom_and_empty_field() {
        let (bt, bx) = bases();
        let set = IndexSet::new(3, 6, 3, 5);
        let w = Index::new(4, 3, 3, 5);
        let mut est = DMatrix::zeros(64, 32);
        est[set.cell(&w)] = 1.0;
        let field = hard_threshold(CoefficientField::new(set, est, DMatrix::from_element(64, 32, 0.5)).unwrap());
        let rec = reconstruct(&field, &bt, &bx, 128).unwrap();
        let pts = uniform_points(128);
        for a in (0..128).step_by(9) {
            for b in (0..128).step_by(7) {
                let v = bt.level(4).eval(3, pts[a]) * bx.level(3).eval(5, pts[b]);
                assert!((rec.values[(a, b)] - v).abs() < 1e-8);
            }
        }
        let empty = hard_threshold(CoefficientField::new(set, DMatrix::zeros(64, 32), DMatrix::from_element(64, 32, 0.5)).unwrap());
        assert_eq!(reconstruct(&empty, &bt, &bx, 64).unwrap().values.abs().max(), 0.0);
    }

    #[test]
    fn analysis_inverts_synthesis() {
        let (bt, bx) = bases();
        let coeffs = DMatrix::from_fn(64, 32, |r, c| (((r * 13 + c * 7) % 17) as f64 - 8.0) / 9.0);
        let values = synthesize(&coeffs, &bt, &bx, 256).unwrap();
        let back = analyze_grid(&values, &bt, &bx);
        assert!((back - coeffs).abs().max() < 1e-6);
    }

    #[test]
    fn pgm_header() {
        let rec = Reconstruction {
            values: DMatrix::from_fn(4, 3, |a, b| (a + b) as f64),
        };
        let mut out = Vec::new();
        rec.write_pgm(&mut out).unwrap();
        assert!(out.starts_with(b"P5\n3 4\n255\n"));
        assert_eq!(out.len(), 11 + 12);
        assert_eq!(*out.last().unwrap(), 255);
    }
}
