use crate::error::{invalid, Result};

/// True iff `|pi_i P_ij - pi_j P_ji| <= tol` for every pair of states.
pub fn check_detailed_balance(transition: &[Vec<f64>], target: &[f64], tol: f64) -> Result<bool> {
    let n = target.len();
    if transition.len() != n || transition.iter().any(|row| row.len() != n) {
        return Err(invalid(format!(
            "transition matrix must be {n}x{n} to match the target pmf"
        )));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (target[i] * transition[i][j] - target[j] * transition[j][i]).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
