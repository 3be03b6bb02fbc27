use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tf::RationalTF;

/// Single-input single-output realization `(A, B, C, D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceBlock {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub d: f64,
}

impl StateSpaceBlock {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `C (sI - A)^-1 B + D`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let n = self.dim();
        if n == 0 {
            return Ok(Complex64::new(self.d, 0.0));
        }
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let diag = if i == j { s } else { Complex64::new(0.0, 0.0) };
            diag - self.a[(i, j)]
        });
        let rhs = self.b.map(|v| Complex64::new(v, 0.0));
        let x = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSolve(format!("sI - A singular at s = {s}")))?;
        let y: Complex64 = self.c.iter().zip(x.iter()).map(|(c, x)| x * *c).sum();
        Ok(y + self.d)
    }
}

/// Controllable canonical realization of `n(s) / (s^p d(s))`, origin poles
/// included, so the block dimension is `p + deg d`.
pub fn realize(tf: &RationalTF) -> Result<StateSpaceBlock> {
    if !tf.is_proper() {
        return Err(Error::ImproperTF {
            num: tf.num().degree(),
            den: tf.order(),
        });
    }
    let den = tf.full_den();
    let n = tf.order();
    let lead = den.coeff(n);
    let a_coef: Vec<f64> = (0..=n).map(|k| den.coeff(k) / lead).collect();
    let b_coef: Vec<f64> = (0..=n).map(|k| tf.num().coeff(k) / lead).collect();

    let d = b_coef[n];
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    if n > 0 {
        for j in 0..n {
            a[(n - 1, j)] = -a_coef[j];
        }
    }
    let mut b = DVector::zeros(n);
    if n > 0 {
        b[n - 1] = 1.0;
    }
    let c = DVector::from_fn(n, |k, _| b_coef[k] - d * a_coef[k]);
    Ok(StateSpaceBlock { a, b, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn double_integrator_is_nilpotent() {
        let tf = RationalTF::from_coeffs(&[1.0], &[0.0, 0.0, 1.0]).unwrap();
        let blk = realize(&tf).unwrap();
        assert_eq!(blk.dim(), 2);
        assert!((&blk.a * &blk.a).iter().all(|&v| v == 0.0));
        assert_eq!(blk.d, 0.0);
    }

    #[test]
    fn front_loop_at_j() {
        let blk = realize(&presets::front_loop()).unwrap();
        assert_eq!(blk.dim(), 3);
        let v = blk.eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v - Complex64::new(-1.6, -0.8)).norm() < 1e-12);
    }

    #[test]
    fn biproper_has_feedthrough() {
        // (2 s + 1) / (s (s + 1)) is strictly proper; (s^2 + 1)/(s (s + 2)) is not.
        let tf = RationalTF::from_coeffs(&[1.0, 0.0, 1.0], &[0.0, 2.0, 1.0]).unwrap();
        let blk = realize(&tf).unwrap();
        assert_eq!(blk.d, 1.0);
        let s = Complex64::new(0.3, 0.7);
        let expect = tf.eval(s).unwrap();
        assert!((blk.eval(s).unwrap() - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn improper_rejected() {
        let tf = RationalTF::from_coeffs(&[1.0, 1.0, 1.0], &[0.0, 1.0]).unwrap();
        assert!(matches!(realize(&tf), Err(Error::ImproperTF { .. })));
    }
}
