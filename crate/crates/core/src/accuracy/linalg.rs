use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

/// Least-squares solution of `x beta = y` for a row-major `rows x cols`
/// design matrix. Returns `None` when the smallest singular value falls
/// below `rel_tol` times the largest.
pub(crate) fn least_squares(x: &[f64], cols: usize, y: &[f64], rel_tol: f64) -> Option<Vec<f64>> {
    let rows = y.len();
    debug_assert_eq!(x.len(), rows * cols);
    if rows < cols || cols == 0 {
        return None;
    }
    let svd = DMatrix::from_row_slice(rows, cols, x).svd(true, true);
    let sv = &svd.singular_values;
    let (lo, hi) = (sv.min(), sv.max());
    if hi == 0.0 || lo <= rel_tol * hi {
        return None;
    }
    let beta = svd.solve(&DVector::from_column_slice(y), 0.0).ok()?;
    Some(beta.iter().copied().collect())
}
