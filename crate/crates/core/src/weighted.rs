//! The couple `(ℓ₂(w⁻¹), ℓ₂(w))` for a weight sequence `w`.
//!
//! Here the selector is `B(x)(z) = w^{2z−1}x` and every differential is a
//! diagonal linear map, so all the twisted sums split.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calderon::{conformal_constant, richardson, ConformalChoice, StripPoint};
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::seq::{check_dims, ComplexSeqVector, SeqVector, WeightSeq};
use crate::twisted::Twisted2;

/// A weight together with the conformal constant `d = φ″(1/2)/(2φ′(1/2))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedCouple {
    w: WeightSeq,
    log_w: Vec<f64>,
    d: f64,
}

impl WeightedCouple {
    /// Uses the symmetric conformal map of the strip.
    pub fn new(w: WeightSeq) -> Self {
        let d = conformal_constant(ConformalChoice::SymmetricStrip).d.re;
        Self::with_d(w, d)
    }

    /// Same couple with an explicitly prescribed conformal constant.
    pub fn with_d(w: WeightSeq, d: f64) -> Self {
        let log_w = w.as_slice().iter().map(|v| v.ln()).collect();
        WeightedCouple { w, log_w, d }
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `log wᵢ`
    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    /// `(coef(log wᵢ)·xᵢ)ᵢ`
    fn diag(&self, x: &SeqVector, coef: impl Fn(f64) -> f64) -> Result<SeqVector> {
        check_dims(self.dim(), x.dim())?;
        Ok(SeqVector::from_vec_unchecked(
            x.as_slice()
                .iter()
                .zip(&self.log_w)
                .map(|(x, l)| coef(*l) * x)
                .collect(),
        ))
    }
}

/// `w^{2z−1}x`, coordinatewise.
pub fn weighted_selector(
    c: &WeightedCouple,
    x: &SeqVector,
    z: StripPoint,
) -> Result<ComplexSeqVector> {
    check_dims(c.dim(), x.dim())?;
    Ok(ComplexSeqVector::from_vec_unchecked(selector_at(c, x, z.z())))
}

fn selector_at(c: &WeightedCouple, x: &SeqVector, z: Complex64) -> Vec<Complex64> {
    let e = 2.0 * z - 1.0;
    x.as_slice()
        .iter()
        .zip(&c.log_w)
        .map(|(x, l)| (e * l).exp() * x)
        .collect()
}

/// Argument or value of a weighted differential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightedValue {
    Vector(SeqVector),
    Pair(Twisted2),
}

impl WeightedValue {
    pub fn vector(&self) -> Option<&SeqVector> {
        match self {
            WeightedValue::Vector(v) => Some(v),
            WeightedValue::Pair(_) => None,
        }
    }

    pub fn pair(&self) -> Option<&Twisted2> {
        match self {
            WeightedValue::Pair(p) => Some(p),
            WeightedValue::Vector(_) => None,
        }
    }

    fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        match (self, o) {
            (WeightedValue::Vector(a), WeightedValue::Vector(b)) => a.max_abs_diff(b),
            (WeightedValue::Pair(a), WeightedValue::Pair(b)) => a.max_abs_diff(b),
            _ => Err(Error::InvalidConfig("value shapes differ".into())),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            WeightedValue::Vector(a) => a.norm_inf(),
            WeightedValue::Pair(p) => p.y.norm_inf().max(p.x.norm_inf()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightedLevel {
    /// `x ↦ 2 log w·x`
    Om10,
    /// `x ↦ (2 log² w·x, 2 log w·x)`
    Om21_0,
    /// `(y, x) ↦ (2 log w + d)y − (2 log² w + 2d log w)x`
    Om2_10,
    /// `x ↦ x/(2 log w)`
    Om10Inverse,
}

impl WeightedLevel {
    pub const ALL: [WeightedLevel; 4] = [
        WeightedLevel::Om10,
        WeightedLevel::Om21_0,
        WeightedLevel::Om2_10,
        WeightedLevel::Om10Inverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightedLevel::Om10 => "om10",
            WeightedLevel::Om21_0 => "om21_0",
            WeightedLevel::Om2_10 => "om2_10",
            WeightedLevel::Om10Inverse => "om10_inverse",
        }
    }
}

pub fn weighted_omega(
    c: &WeightedCouple,
    level: WeightedLevel,
    arg: &WeightedValue,
) -> Result<WeightedValue> {
    let shape = |expected| Error::ShapeMismatch {
        map: 'Ω',
        expected,
    };
    match level {
        WeightedLevel::Om10 => {
            let x = arg.vector().ok_or(shape("single vector"))?;
            Ok(WeightedValue::Vector(c.diag(x, |l| 2.0 * l)?))
        }
        WeightedLevel::Om21_0 => {
            let x = arg.vector().ok_or(shape("single vector"))?;
            Ok(WeightedValue::Pair(Twisted2 {
                y: c.diag(x, |l| 2.0 * l * l)?,
                x: c.diag(x, |l| 2.0 * l)?,
            }))
        }
        WeightedLevel::Om2_10 => {
            let p = arg.pair().ok_or(shape("pair"))?;
            let d = c.d;
            let a = c.diag(&p.y, |l| 2.0 * l + d)?;
            let b = c.diag(&p.x, |l| 2.0 * l * l + 2.0 * d * l)?;
            Ok(WeightedValue::Vector(a.sub(&b)?))
        }
        WeightedLevel::Om10Inverse => {
            let x = arg.vector().ok_or(shape("single vector"))?;
            check_dims(c.dim(), x.dim())?;
            if let Some(i) = c.log_w.iter().position(|&l| l == 0.0) {
                return Err(Error::SingularInverse(i));
            }
            Ok(WeightedValue::Vector(c.diag(x, |l| 1.0 / (2.0 * l))?))
        }
    }
}

/// `½W″(1/2)` for `W(y,x) = φ/φ′(1/2)·B(y − Ω₁,₀x) + Bx`, by the closed form
/// `Ω₁,₀v + d·v + 2 log² w·x` with `v = y − Ω₁,₀x`.
pub fn weighted_selector_composition(
    c: &WeightedCouple,
    y: &SeqVector,
    x: &SeqVector,
) -> Result<SeqVector> {
    check_dims(y.dim(), x.dim())?;
    let v = y.sub(&c.diag(x, |l| 2.0 * l)?)?;
    let d = c.d;
    let first = c.diag(&v, |l| 2.0 * l + d)?;
    first.add(&c.diag(x, |l| 2.0 * l * l)?)
}

/// `½W″(1/2)` by Richardson-extrapolated central differences of the assembled
/// function `W`, with step `h`.
pub fn weighted_selector_composition_numeric(
    c: &WeightedCouple,
    y: &SeqVector,
    x: &SeqVector,
    h: f64,
) -> Result<SeqVector> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidStep(h));
    }
    check_dims(c.dim(), y.dim())?;
    check_dims(y.dim(), x.dim())?;
    let v = y.sub(&c.diag(x, |l| 2.0 * l)?)?;
    let conformal = conformal_constant(ConformalChoice::SymmetricStrip);
    let w = |t: f64| -> Vec<Complex64> {
        let z = Complex64::new(t, 0.0);
        let phi = conformal.normalized_phi(z);
        selector_at(c, &v, z)
            .into_iter()
            .zip(selector_at(c, x, z))
            .map(|(bv, bx)| phi * bv + bx)
            .collect()
    };
    let second = richardson(&w, x.dim(), 2, h)?;
    Ok(SeqVector::from_vec_unchecked(
        second.iter().map(|s| 0.5 * s.re).collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightedSpace {
    /// `‖y − 2 log w·x‖₂ + ‖x‖₂`
    Z2w,
    /// `‖x‖₂ + ‖log w·(y − log w·x)‖₂`
    CircleW,
    /// `‖log w·(y − 2 log w·x)‖₂ + ‖log w·x‖₂`: the twisted sum of `ℓ₂(log w)` by `2 log w`
    Z2wLog,
    /// `‖log² w·x‖₂`
    L2Log2W,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub norm: f64,
    pub within_bound: bool,
}

/// Defining norm expression of `space` at the current truncation, compared with `bound`.
pub fn membership(
    c: &WeightedCouple,
    space: WeightedSpace,
    v: &WeightedValue,
    bound: f64,
) -> Result<Membership> {
    let shape = |expected| Error::ShapeMismatch {
        map: '∈',
        expected,
    };
    let norm = match space {
        WeightedSpace::L2Log2W => {
            let x = v.vector().ok_or(shape("single vector"))?;
            c.diag(x, |l| l * l)?.norm2()
        }
        _ => {
            let p = v.pair().ok_or(shape("pair"))?;
            check_dims(c.dim(), p.dim())?;
            match space {
                WeightedSpace::Z2w => {
                    p.y.sub(&c.diag(&p.x, |l| 2.0 * l)?)?.norm2() + p.x.norm2()
                }
                WeightedSpace::CircleW => {
                    let r = p.y.sub(&c.diag(&p.x, |l| l)?)?;
                    p.x.norm2() + c.diag(&r, |l| l)?.norm2()
                }
                WeightedSpace::Z2wLog => {
                    let r = p.y.sub(&c.diag(&p.x, |l| 2.0 * l)?)?;
                    c.diag(&r, |l| l)?.norm2() + c.diag(&p.x, |l| l)?.norm2()
                }
                WeightedSpace::L2Log2W => unreachable!(),
            }
        }
    };
    Ok(Membership {
        norm,
        within_bound: norm <= bound,
    })
}

fn random_value(level: WeightedLevel, dim: usize, rng: &mut impl Rng) -> WeightedValue {
    let mut draw = || {
        SeqVector::from_vec_unchecked((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
    };
    match level {
        WeightedLevel::Om2_10 => WeightedValue::Pair(Twisted2 {
            y: draw(),
            x: draw(),
        }),
        _ => WeightedValue::Vector(draw()),
    }
}

fn add_values(a: &WeightedValue, b: &WeightedValue) -> Result<WeightedValue> {
    match (a, b) {
        (WeightedValue::Vector(a), WeightedValue::Vector(b)) => Ok(WeightedValue::Vector(a.add(b)?)),
        (WeightedValue::Pair(a), WeightedValue::Pair(b)) => Ok(WeightedValue::Pair(a.add(b)?)),
        _ => Err(Error::InvalidConfig("value shapes differ".into())),
    }
}

/// Largest additivity defect `‖Ω(x₁+x₂) − Ωx₁ − Ωx₂‖∞`, relative to
/// `‖Ωx₁‖∞ + ‖Ωx₂‖∞`, over `samples` random pairs.
///
/// The differentials are linear, so the only nonzero contribution is
/// floating-point rounding (a few units in the last place).
pub fn triviality_defect(
    c: &WeightedCouple,
    level: WeightedLevel,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..samples.max(1) {
        let mut rng = trial_rng(seed, t as u64);
        let a = random_value(level, c.dim(), &mut rng);
        let b = random_value(level, c.dim(), &mut rng);
        let oa = weighted_omega(c, level, &a)?;
        let ob = weighted_omega(c, level, &b)?;
        let osum = weighted_omega(c, level, &add_values(&a, &b)?)?;
        let scale = oa.max_abs() + ob.max_abs();
        if scale > 0.0 {
            worst = worst.max(osum.max_abs_diff(&add_values(&oa, &ob)?)? / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::omega10;
    use std::f64::consts::E;

    fn v(xs: &[f64]) -> SeqVector {
        SeqVector::new(xs.to_vec()).unwrap()
    }

    fn couple(n: usize) -> WeightedCouple {
        WeightedCouple::new(WeightSeq::from_fn(n, |k| 1.0 / ((k + 2) as f64).ln()).unwrap())
    }

    #[test]
    fn selector_examples() {
        let c = couple(4);
        let x = v(&[1.0, -2.0, 0.5, 3.0]);
        let half = weighted_selector(&c, &x, StripPoint::center()).unwrap();
        assert_eq!(half.real_part(), x);
        let one = weighted_selector(&c, &x, StripPoint::real(1.0).unwrap()).unwrap();
        let wx = x.hadamard(&SeqVector::new(c.weights().as_slice().to_vec()).unwrap()).unwrap();
        assert!(one.real_part().max_abs_diff(&wx).unwrap() < 1e-15);

        let h = 1e-3;
        let fd = |t: f64| selector_at(&c, &x, Complex64::new(t, 0.0));
        let d1 = richardson(&fd, 4, 1, h).unwrap();
        let om = weighted_omega(&c, WeightedLevel::Om10, &WeightedValue::Vector(x.clone())).unwrap();
        for (a, b) in d1.iter().zip(om.vector().unwrap().as_slice()) {
            assert!((a.re - b).abs() <= 1e-6 * b.abs().max(1.0));
        }
        assert!(weighted_selector(&c, &v(&[1.0]), StripPoint::center()).is_err());
    }

    #[test]
    fn omega_examples() {
        let c = WeightedCouple::new(WeightSeq::new(vec![E.powi(-1), E.powi(-2)]).unwrap());
        let e1 = SeqVector::unit(2, 0);
        let om = weighted_omega(&c, WeightedLevel::Om10, &WeightedValue::Vector(e1)).unwrap();
        assert!(om.vector().unwrap().max_abs_diff(&v(&[-2.0, 0.0])).unwrap() < 1e-15);

        let c0 = WeightedCouple::with_d(c.weights().clone(), 0.0);
        let (y, x) = (v(&[1.0, 2.0]), v(&[-0.5, 3.0]));
        let got = weighted_omega(
            &c0,
            WeightedLevel::Om2_10,
            &WeightedValue::Pair(Twisted2::new(y.clone(), x.clone()).unwrap()),
        )
        .unwrap();
        let l = c0.log_weights();
        let want: Vec<f64> = (0..2)
            .map(|i| 2.0 * l[i] * y[i] - 2.0 * l[i] * l[i] * x[i])
            .collect();
        assert!(got.vector().unwrap().max_abs_diff(&v(&want)).unwrap() < 1e-14);

        let xv = WeightedValue::Vector(v(&[0.3, -7.0]));
        let fwd = weighted_omega(&c, WeightedLevel::Om10, &xv).unwrap();
        let back = weighted_omega(&c, WeightedLevel::Om10Inverse, &fwd).unwrap();
        assert!(back.max_abs_diff(&xv).unwrap() < 1e-15);

        let singular = WeightedCouple::new(WeightSeq::new(vec![1.0, 0.5]).unwrap());
        assert!(matches!(
            weighted_omega(&singular, WeightedLevel::Om10Inverse, &xv),
            Err(Error::SingularInverse(0))
        ));
        assert!(weighted_omega(&c, WeightedLevel::Om2_10, &xv).is_err());
    }

    #[test]
    fn conformal_constant_vanishes() {
        assert!(couple(3).d().abs() < 1e-8);
    }

    #[test]
    fn composition_examples() {
        let c = couple(5);
        let x = v(&[1.0, -0.5, 0.25, 2.0, 0.1]);
        let y = weighted_omega(&c, WeightedLevel::Om10, &WeightedValue::Vector(x.clone()))
            .unwrap()
            .vector()
            .unwrap()
            .clone();
        let got = weighted_selector_composition(&c, &y, &x).unwrap();
        let want = c.diag(&x, |l| 2.0 * l * l).unwrap();
        assert!(got.max_abs_diff(&want).unwrap() < 1e-14);

        let y = v(&[0.3, 0.2, -1.0, 0.0, 4.0]);
        let z = SeqVector::zeros(5);
        let got = weighted_selector_composition(&c, &y, &z).unwrap();
        let want = c.diag(&y, |l| 2.0 * l + c.d()).unwrap();
        assert!(got.max_abs_diff(&want).unwrap() < 1e-14);

        let closed = weighted_selector_composition(&c, &y, &x).unwrap();
        let numeric = weighted_selector_composition_numeric(&c, &y, &x, 1e-3).unwrap();
        for (a, b) in closed.as_slice().iter().zip(numeric.as_slice()) {
            assert!((a - b).abs() <= 1e-4 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn membership_examples() {
        let c = couple(6);
        let x = v(&[1.0, 0.5, -0.2, 0.1, 0.0, 3.0]);
        let graph = |k: f64| {
            WeightedValue::Pair(Twisted2::new(c.diag(&x, |l| k * l).unwrap(), x.clone()).unwrap())
        };
        let m = membership(&c, WeightedSpace::Z2w, &graph(2.0), 10.0).unwrap();
        assert!((m.norm - x.norm2()).abs() < 1e-14 && m.within_bound);
        let m = membership(&c, WeightedSpace::CircleW, &graph(1.0), 1.0).unwrap();
        assert!((m.norm - x.norm2()).abs() < 1e-14 && !m.within_bound);
        assert!(membership(&c, WeightedSpace::L2Log2W, &graph(1.0), 1.0).is_err());
    }

    #[test]
    fn membership_separates_l2_from_l2_log_w() {
        // ‖x‖₂ converges, ‖log w·x‖₂ grows like √(log log n)
        let norms = |n: usize| {
            let c = WeightedCouple::new(
                WeightSeq::from_fn(n, |k| ((k + 1) as f64).powf(-0.25)).unwrap(),
            );
            let x = SeqVector::new(
                (1..=n)
                    .map(|k| (k as f64).powf(-0.5) / ((k + 1) as f64).ln())
                    .collect(),
            )
            .unwrap();
            let p = WeightedValue::Pair(Twisted2::new(SeqVector::zeros(n), x.clone()).unwrap());
            (x.norm2(), membership(&c, WeightedSpace::Z2w, &p, f64::INFINITY).unwrap().norm)
        };
        let (small_x, small_z) = norms(1 << 6);
        let (big_x, big_z) = norms(1 << 16);
        assert!(big_x - small_x < 0.1);
        assert!(big_z - small_z > 0.15);
    }

    #[test]
    fn defects_vanish() {
        let c = couple(16);
        for level in [WeightedLevel::Om10, WeightedLevel::Om21_0, WeightedLevel::Om2_10] {
            assert!(triviality_defect(&c, level, 100, 3).unwrap() < 1e-15);
        }
        // contrast with the nonlinear unweighted differential
        let (e1, e2) = (SeqVector::unit(2, 0), SeqVector::unit(2, 1));
        let defect = omega10(&e1.add(&e2).unwrap())
            .sub(&omega10(&e1).add(&omega10(&e2)).unwrap())
            .unwrap()
            .norm2();
        assert!(defect > 0.1);
    }
}
