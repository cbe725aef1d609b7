use super::knots::KnotVector;
use crate::error::{Error, Result};

/// The `p + 1` basis functions that are nonzero on span `span`, evaluated at
/// `u` (Cox–de Boor triangle).
pub(crate) fn basis_funs(kv: &KnotVector, span: usize, u: f64) -> Vec<f64> {
    let p = kv.degree();
    let knots = kv.knots();
    let mut n = vec![0.0; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    n[0] = 1.0;
    for j in 1..=p {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

pub(crate) fn check_parameter(u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!(
            "parameter u = {u} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// All B-spline basis values `N_{i,p}(u)` for `i = 0 … control_count − 1`.
///
/// At `u = 1` the left limit is used, so the last function equals 1.
pub fn bspline_basis_all(kv: &KnotVector, u: f64) -> Result<Vec<f64>> {
    check_parameter(u)?;
    let span = kv.find_span(u);
    let local = basis_funs(kv, span, u);
    let mut out = vec![0.0; kv.control_count()];
    let p = kv.degree();
    out[span - p..=span].copy_from_slice(&local);
    Ok(out)
}
