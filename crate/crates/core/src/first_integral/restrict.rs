use crate::algebra::{Composition, Rational, Scalar, Series};
use crate::error::{Error, Result};
use crate::exterior::{KForm, QForm};

/// Restricts `ω` to the hyperplane `x_n = Σ_{j<n} a_j x_j`, giving a form in
/// the first `n − 1` variables.
pub fn restrict_hyperplane<K: Scalar>(omega: &KForm<K>, coeffs: &[K]) -> Result<KForm<K>> {
    let n = omega.nvars();
    if n < 2 || coeffs.len() != n - 1 {
        return Err(Error::Structural(format!(
            "{} hyperplane coefficients for a form in {} variables",
            coeffs.len(),
            n
        )));
    }
    let order = omega.order() + 1;
    let mut images: Vec<Series<K>> = (0..n - 1).map(|i| Series::var(n - 1, i, order)).collect();
    let mut last = Series::zero(n - 1, order);
    for (j, a) in coeffs.iter().enumerate() {
        last = last.try_add(&Series::var(n - 1, j, order).scale(a))?;
    }
    images.push(last);
    Ok(omega.pullback(&images, Composition::Strict)?.truncated(omega.order()))
}

/// Whether promoting to Gaussian coefficients commutes with restriction on
/// this input, compared coefficient by coefficient.
pub fn complexify_restrict_commutes(omega: &QForm, coeffs: &[Rational]) -> Result<bool> {
    let lhs = restrict_hyperplane(omega, coeffs)?.complexify();
    let ccoeffs: Vec<_> = coeffs.iter().cloned().map(Scalar::from_rational).collect();
    let rhs = restrict_hyperplane(&omega.complexify(), &ccoeffs)?;
    Ok(lhs == rhs)
}
