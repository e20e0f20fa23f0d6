//! Finite real and complex sequences, classical and weighted norms, and the
//! `x·logᵏ(|x|/s)` primitive shared by every differential in the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite real sequence with at least one coordinate and no NaN/Inf entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SeqVector(Vec<f64>);

impl SeqVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(SeqVector(coords))
    }

    /// Internal constructor for values produced by arithmetic on valid vectors.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        SeqVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        SeqVector(vec![0.0; dim])
    }

    /// The canonical unit vector `e_{index+1}` in dimension `dim`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = 1.0;
        v
    }

    /// The all-ones vector `𝟙ₙ`.
    pub fn ones(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        SeqVector(vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        SeqVector(self.0.iter().map(|&c| f(c)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| s * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Coordinatewise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(SeqVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm2(&self) -> f64 {
        l2(&self.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest coordinatewise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Zero-pads (or truncates) to `dim` coordinates.
    pub fn resized(&self, dim: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(dim, 0.0);
        SeqVector(v)
    }
}

impl TryFrom<Vec<f64>> for SeqVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        SeqVector::new(v)
    }
}

impl From<SeqVector> for Vec<f64> {
    fn from(v: SeqVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for SeqVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A finite complex sequence: the value of an analytic selector at a strip point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeqVector(Vec<Complex64>);

impl ComplexSeqVector {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(ComplexSeqVector(coords))
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<Complex64>) -> Self {
        ComplexSeqVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// Moduli of the coordinates.
    pub fn moduli(&self) -> SeqVector {
        SeqVector(self.0.iter().map(|c| c.norm()).collect())
    }

    pub fn real_part(&self) -> SeqVector {
        SeqVector(self.0.iter().map(|c| c.re).collect())
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }
}

/// A positive non-increasing weight sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightSeq(Vec<f64>);

impl WeightSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidWeight {
                    index: i,
                    reason: "weights must be finite and strictly positive",
                });
            }
            if i > 0 && v > values[i - 1] {
                return Err(Error::InvalidWeight {
                    index: i,
                    reason: "weights must be non-increasing",
                });
            }
        }
        Ok(WeightSeq(values))
    }

    /// Builds `w_n = f(n)` for `n = 1..=dim`.
    pub fn from_fn(dim: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((1..=dim).map(f).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightSeq {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightSeq::new(v)
    }
}

impl From<WeightSeq> for Vec<f64> {
    fn from(w: WeightSeq) -> Self {
        w.0
    }
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Overflow-safe Euclidean norm.
pub(crate) fn l2(xs: &[f64]) -> f64 {
    let scale = xs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = xs.iter().map(|c| (c / scale) * (c / scale)).sum();
    scale * s.sqrt()
}

/// `(Σ|xᵢ|^p)^{1/p}`, or `max|xᵢ|` for `p = ∞`.
pub fn lp_norm(x: &SeqVector, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let xs = x.as_slice();
    if p.is_infinite() {
        return Ok(x.norm_inf());
    }
    if p == 1.0 {
        return Ok(xs.iter().map(|c| c.abs()).sum());
    }
    if p == 2.0 {
        return Ok(l2(xs));
    }
    let scale = x.norm_inf();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = xs.iter().map(|c| (c.abs() / scale).powf(p)).sum();
    Ok(scale * s.powf(1.0 / p))
}

/// `‖x‖_{ℓ₂(v)} = ‖v·x‖₂` with a multiplicative weight.
pub fn weighted_l2_norm(x: &SeqVector, v: &[f64]) -> Result<f64> {
    check_dims(x.dim(), v.len())?;
    if let Some(i) = v.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidWeight {
            index: i,
            reason: "weights must be finite and strictly positive",
        });
    }
    let prod: Vec<f64> = x.as_slice().iter().zip(v).map(|(a, b)| a * b).collect();
    Ok(l2(&prod))
}

/// Scalar kernel of [`safe_xlog`]: `x·logᵏ(|x|/scale)` with `0·log 0 = 0`.
#[inline]
pub fn xlog(x: f64, power: u32, scale: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x.abs() / scale).ln().powi(power as i32)
    }
}

/// Coordinatewise `xᵢ·log^power(|xᵢ|/scale)`, zero coordinates mapped to zero.
pub fn safe_xlog(x: &SeqVector, power: u32, scale: f64) -> Result<SeqVector> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidScale(scale));
    }
    Ok(x.map(|c| xlog(c, power, scale)))
}

/// `sgn(x) = x/|x|`, `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
