//! The extremal analytic selector for the couple `(ℓ∞, ℓ₁)` at `1/2`.
//!
//! For `x ≠ 0` the selector is
//!
//! ```text
//! Bx(z)ᵢ = sgn(xᵢ) · |xᵢ|^{2z} · ‖x‖₂^{1−2z}
//! ```
//!
//! It equals `x` at `z = 1/2`, has `‖Bx(it)‖∞ = ‖Bx(1+it)‖₁ = ‖x‖₂` on the
//! boundary lines, and its Taylor coefficients at `1/2` are the differentials
//! `Ω₁,₀x = 2x log(|x|/‖x‖₂)` and `½(Bx)″(1/2) = 2x log²(|x|/‖x‖₂)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seq::{safe_xlog, sgn, ComplexSeqVector, SeqVector};

/// A point of the closed strip `0 ≤ Re z ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint(Complex64);

impl StripPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re >= 0.0 && z.re <= 1.0 && z.im.is_finite()) {
            return Err(Error::OutsideStrip(z));
        }
        Ok(StripPoint(z))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    /// The base point `1/2`.
    pub fn center() -> Self {
        StripPoint(Complex64::new(0.5, 0.0))
    }

    /// `it` on the left boundary line.
    pub fn left(t: f64) -> Self {
        StripPoint(Complex64::new(0.0, t))
    }

    /// `1 + it` on the right boundary line.
    pub fn right(t: f64) -> Self {
        StripPoint(Complex64::new(1.0, t))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

/// `Bx(z)` for the extremal selector.
pub fn extremal_selector(x: &SeqVector, z: StripPoint) -> Result<ComplexSeqVector> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let z = z.z();
    if z == Complex64::new(0.5, 0.0) {
        let coords = x.as_slice().iter().map(|&c| Complex64::new(c, 0.0)).collect();
        return Ok(ComplexSeqVector::from_vec_unchecked(coords));
    }
    Ok(ComplexSeqVector::from_vec_unchecked(selector_values(x, z)))
}

/// Unchecked evaluation; `x` must be nonzero.
fn selector_values(x: &SeqVector, z: Complex64) -> Vec<Complex64> {
    let log_norm = x.norm2().ln();
    x.as_slice()
        .iter()
        .map(|&c| {
            if c == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                // |c|^{2z} ‖x‖^{1−2z} = exp(2z log|c| + (1−2z) log‖x‖)
                let e = 2.0 * z * c.abs().ln() + (1.0 - 2.0 * z) * log_norm;
                sgn(c) * e.exp()
            }
        })
        .collect()
}

/// Taylor data of the selector at `1/2`.
///
/// Order 0 is `x`, order 1 is `Ω₁,₀x = 2x log(|x|/‖x‖₂)`, and order 2 is the
/// halved second derivative `½(Bx)″(1/2) = 2x log²(|x|/‖x‖₂)`.
pub fn selector_derivative(x: &SeqVector, order: u32) -> Result<SeqVector> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let norm = x.norm2();
    match order {
        0 => Ok(x.clone()),
        1 | 2 => Ok(safe_xlog(x, order, norm)?.scale(2.0)),
        k => Err(Error::InvalidOrder(k)),
    }
}

/// Central finite differences of `z ↦ Bx(z)` along the real axis at `1/2`,
/// one Richardson step with `h` and `h/2`.
///
/// Order 2 returns the full `(Bx)″(1/2)`, which is twice
/// `selector_derivative(x, 2)`.
pub fn numeric_derivative(x: &SeqVector, order: u32, h: f64) -> Result<SeqVector> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidStep(h));
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let eval = |z: f64| selector_values(x, Complex64::new(z, 0.0));
    let d = richardson(&eval, x.dim(), order, h)?;
    let bound = 10.0 * h * h;
    let residue = d.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
    if residue > bound {
        return Err(Error::ImaginaryResidue { residue, bound });
    }
    Ok(SeqVector::from_vec_unchecked(
        d.iter().map(|c| c.re).collect(),
    ))
}

/// Richardson-extrapolated central difference of order 1 or 2 at `z = 1/2`
/// for a vector-valued function of a real variable.
pub(crate) fn richardson(
    f: &dyn Fn(f64) -> Vec<Complex64>,
    dim: usize,
    order: u32,
    h: f64,
) -> Result<Vec<Complex64>> {
    let stencil = |h: f64| -> Result<Vec<Complex64>> {
        let plus = f(0.5 + h);
        let minus = f(0.5 - h);
        match order {
            1 => Ok((0..dim).map(|i| (plus[i] - minus[i]) / (2.0 * h)).collect()),
            2 => {
                let mid = f(0.5);
                Ok((0..dim)
                    .map(|i| (plus[i] - 2.0 * mid[i] + minus[i]) / (h * h))
                    .collect())
            }
            k => Err(Error::InvalidOrder(k)),
        }
    };
    let coarse = stencil(h)?;
    let fine = stencil(0.5 * h)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConformalChoice {
    /// `φ(z) = (e^{iπz} − i)/(e^{iπz} + i)`, symmetric about `Re z = 1/2`.
    SymmetricStrip,
}

/// A conformal map of the strip onto the unit disc with `φ(1/2) = 0`, and
/// the constant `d = φ″(1/2) / (2φ′(1/2))` obtained by finite differences.
#[derive(Debug, Clone, Copy)]
pub struct ConformalData {
    choice: ConformalChoice,
    /// `φ′(1/2)`
    pub derivative: Complex64,
    pub d: Complex64,
}

impl ConformalData {
    pub fn phi(&self, z: Complex64) -> Complex64 {
        match self.choice {
            ConformalChoice::SymmetricStrip => symmetric_phi(z),
        }
    }

    /// `φ(z)/φ′(1/2)`, normalized to unit derivative at the base point.
    pub fn normalized_phi(&self, z: Complex64) -> Complex64 {
        self.phi(z) / self.derivative
    }

    pub fn choice(&self) -> ConformalChoice {
        self.choice
    }
}

fn symmetric_phi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let w = (i * std::f64::consts::PI * z).exp();
    (w - i) / (w + i)
}

/// Step used for the finite-difference derivatives of `φ`.
pub const CONFORMAL_STEP: f64 = 1e-3;

pub fn conformal_constant(choice: ConformalChoice) -> ConformalData {
    let phi = |t: f64| vec![symmetric_phi(Complex64::new(t, 0.0))];
    let h = CONFORMAL_STEP;
    let d1 = richardson(&phi, 1, 1, h).expect("order 1")[0];
    let d2 = richardson(&phi, 1, 2, h).expect("order 2")[0];
    ConformalData {
        choice,
        derivative: d1,
        d: d2 / (2.0 * d1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> SeqVector {
        SeqVector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn identity_at_center() {
        let x = v(&[0.3, -1.7, 0.0, 2.0]);
        let b = extremal_selector(&x, StripPoint::center()).unwrap();
        assert_eq!(b.real_part(), x);
        assert_eq!(b.max_imag(), 0.0);
    }

    #[test]
    fn boundary_examples() {
        let x = v(&[3.0, 4.0]);
        for t in [-2.0, 0.0, 0.7, 3.0] {
            let left = extremal_selector(&x, StripPoint::left(t)).unwrap().moduli();
            assert!(left.as_slice().iter().all(|m| (m - 5.0).abs() < 1e-13));
            let right = extremal_selector(&x, StripPoint::right(t)).unwrap().moduli();
            let l1: f64 = right.as_slice().iter().sum();
            assert!((l1 - 5.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_zero_and_out_of_strip() {
        assert_eq!(
            extremal_selector(&SeqVector::zeros(2), StripPoint::center()),
            Err(Error::ZeroVector)
        );
        assert!(StripPoint::real(1.2).is_err());
        assert!(StripPoint::real(-0.1).is_err());
        assert!(selector_derivative(&SeqVector::zeros(3), 1).is_err());
        assert!(selector_derivative(&v(&[1.0]), 3).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            selector_derivative(&SeqVector::unit(3, 0), 1).unwrap(),
            SeqVector::zeros(3)
        );
        for n in [2usize, 16, 100] {
            let d = selector_derivative(&SeqVector::ones(n), 1).unwrap();
            let expect = -(n as f64).ln();
            assert!(d.as_slice().iter().all(|c| (c - expect).abs() < 1e-13));
        }
        let d2 = selector_derivative(&v(&[3.0, 4.0]), 2).unwrap();
        let expect = [
            2.0 * 3.0 * (0.6f64).ln().powi(2),
            2.0 * 4.0 * (0.8f64).ln().powi(2),
        ];
        assert!((d2[0] - expect[0]).abs() < 1e-14);
        assert!((d2[1] - expect[1]).abs() < 1e-14);
    }

    #[test]
    fn numeric_oracle_examples() {
        let e1 = SeqVector::unit(2, 0);
        let d = numeric_derivative(&e1, 1, 1e-4).unwrap();
        assert!(d.norm_inf() < 1e-7);

        let x = v(&[3.0, 4.0]);
        let num = numeric_derivative(&x, 1, 1e-4).unwrap();
        let exact = selector_derivative(&x, 1).unwrap();
        assert!(num.max_abs_diff(&exact).unwrap() < 1e-6 * exact.norm_inf());

        let x = v(&[1.0, 2.0, 3.0]);
        let num = numeric_derivative(&x, 2, 1e-3).unwrap();
        let exact = selector_derivative(&x, 2).unwrap().scale(2.0);
        assert!(num.max_abs_diff(&exact).unwrap() < 1e-4 * exact.norm_inf());
    }

    #[test]
    fn numeric_step_range() {
        let x = v(&[1.0, 2.0]);
        assert!(matches!(numeric_derivative(&x, 1, 1e-7), Err(Error::InvalidStep(_))));
        assert!(matches!(numeric_derivative(&x, 1, 0.1), Err(Error::InvalidStep(_))));
        assert!(matches!(numeric_derivative(&x, 3, 1e-3), Err(Error::InvalidOrder(3))));
    }

    #[test]
    fn conformal_examples() {
        let c = conformal_constant(ConformalChoice::SymmetricStrip);
        assert!(c.phi(Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(c.d.norm() < 1e-8);
        // φ′(1/2) = iπ/2
        let expect = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
        assert!((c.derivative - expect).norm() < 1e-10);
        let q = c.phi(Complex64::new(0.25, 0.0)).norm();
        assert!(q > 0.0 && q < 1.0);
        for re in [0.05, 0.3, 0.5, 0.9] {
            for im in [-3.0, -0.5, 0.0, 1.0, 4.0] {
                assert!(c.phi(Complex64::new(re, im)).norm() < 1.0);
            }
        }
        // normalized map is real on the real axis
        let n = c.normalized_phi(Complex64::new(0.6, 0.0));
        assert!(n.im.abs() < 1e-12 && n.re > 0.0);
    }
}
