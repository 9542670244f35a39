use crate::error::{Error, Result};
use crate::estimator::{uniform_points, Reconstruction};
use crate::model::TestFunction;
use nalgebra::DMatrix;

/// Periodic trapezoid rule for `∫∫ (a - b)²` on a uniform grid.
pub fn grid_loss(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!("grids {:?} and {:?}", a.shape(), b.shape())));
    }
    Ok((a - b).norm_squared() / a.len() as f64)
}

/// Integrated squared error of a reconstruction against the true function.
pub fn mise(fhat: &Reconstruction, f: &TestFunction, fine_grid: usize) -> Result<f64> {
    let pts = uniform_points(fhat.size());
    let truth = f.eval_grid(fine_grid, &pts, &pts)?;
    grid_loss(&fhat.values, &truth)
}
