//! Kalton–Peck type twisted sums `Z₂` and `Z₃` over finite sequences.
//!
//! Elements of `Z₂` are pairs `(y, x)` with quasi-norm `‖y − Ω₁,₀x‖₂ + ‖x‖₂`.
//! Elements of `Z₃` are triples `(w, y, x)` ordered as (second Taylor
//! coefficient, first, value), with quasi-norm
//! `‖(w, y) − Ω⟨2,1⟩,₀x‖_{Z₂} + ‖x‖₂`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calderon::selector_derivative;
use crate::error::{Error, Result};
use crate::orlicz::{dual_norm, OrliczFunction};
use crate::seq::{check_dims, SeqVector};

/// `Ω₁,₀x = 2x log(|x|/‖x‖₂)`, with `Ω₁,₀0 = 0`.
pub fn omega10(x: &SeqVector) -> SeqVector {
    if x.is_zero() {
        return SeqVector::zeros(x.dim());
    }
    selector_derivative(x, 1).expect("nonzero")
}

/// `Ω₂,₀x = 2x log²(|x|/‖x‖₂)`, with `Ω₂,₀0 = 0`.
pub fn omega20(x: &SeqVector) -> SeqVector {
    if x.is_zero() {
        return SeqVector::zeros(x.dim());
    }
    selector_derivative(x, 2).expect("nonzero")
}

/// `Ω⟨2,1⟩,₀x = (Ω₂,₀x, Ω₁,₀x)` as a `Z₂` element.
pub fn omega21_0(x: &SeqVector) -> Twisted2 {
    Twisted2 {
        y: omega20(x),
        x: omega10(x),
    }
}

/// A pair `(y, x)` in `Z₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTwisted2")]
pub struct Twisted2 {
    pub y: SeqVector,
    pub x: SeqVector,
}

#[derive(Deserialize)]
struct RawTwisted2 {
    y: SeqVector,
    x: SeqVector,
}

impl TryFrom<RawTwisted2> for Twisted2 {
    type Error = Error;

    fn try_from(r: RawTwisted2) -> Result<Self> {
        Twisted2::new(r.y, r.x)
    }
}

impl Twisted2 {
    pub fn new(y: SeqVector, x: SeqVector) -> Result<Self> {
        check_dims(y.dim(), x.dim())?;
        Ok(Twisted2 { y, x })
    }

    pub fn zeros(dim: usize) -> Self {
        Twisted2 {
            y: SeqVector::zeros(dim),
            x: SeqVector::zeros(dim),
        }
    }

    /// The graph point `(Ω₁,₀x, x)`.
    pub fn graph(x: &SeqVector) -> Self {
        Twisted2 {
            y: omega10(x),
            x: x.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Twisted2 {
            y: self.y.add(&o.y)?,
            x: self.x.add(&o.x)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        Ok(Twisted2 {
            y: self.y.sub(&o.y)?,
            x: self.x.sub(&o.x)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Twisted2 {
            y: self.y.scale(s),
            x: self.x.scale(s),
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        Ok(self.y.max_abs_diff(&o.y)?.max(self.x.max_abs_diff(&o.x)?))
    }
}

/// A triple `(w, y, x)` in `Z₃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTwisted3")]
pub struct Twisted3 {
    pub w: SeqVector,
    pub y: SeqVector,
    pub x: SeqVector,
}

#[derive(Deserialize)]
struct RawTwisted3 {
    w: SeqVector,
    y: SeqVector,
    x: SeqVector,
}

impl TryFrom<RawTwisted3> for Twisted3 {
    type Error = Error;

    fn try_from(r: RawTwisted3) -> Result<Self> {
        Twisted3::new(r.w, r.y, r.x)
    }
}

impl Twisted3 {
    pub fn new(w: SeqVector, y: SeqVector, x: SeqVector) -> Result<Self> {
        check_dims(w.dim(), y.dim())?;
        check_dims(y.dim(), x.dim())?;
        Ok(Twisted3 { w, y, x })
    }

    pub fn zeros(dim: usize) -> Self {
        Twisted3 {
            w: SeqVector::zeros(dim),
            y: SeqVector::zeros(dim),
            x: SeqVector::zeros(dim),
        }
    }

    /// The graph point `(Ω⟨2,1⟩,₀x, x)`.
    pub fn graph(x: &SeqVector) -> Self {
        let top = omega21_0(x);
        Twisted3 {
            w: top.y,
            y: top.x,
            x: x.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Twisted3 {
            w: self.w.add(&o.w)?,
            y: self.y.add(&o.y)?,
            x: self.x.add(&o.x)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Twisted3 {
            w: self.w.scale(s),
            y: self.y.scale(s),
            x: self.x.scale(s),
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        Ok(self
            .w
            .max_abs_diff(&o.w)?
            .max(self.y.max_abs_diff(&o.y)?)
            .max(self.x.max_abs_diff(&o.x)?))
    }

    /// Truncates or zero-pads every slot to `dim`.
    pub fn resized(&self, dim: usize) -> Self {
        Twisted3 {
            w: self.w.resized(dim),
            y: self.y.resized(dim),
            x: self.x.resized(dim),
        }
    }

    /// Concatenation `[w | y | x]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 * self.dim());
        v.extend_from_slice(self.w.as_slice());
        v.extend_from_slice(self.y.as_slice());
        v.extend_from_slice(self.x.as_slice());
        v
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.is_empty() || flat.len() % 3 != 0 {
            return Err(Error::DimensionMismatch {
                left: flat.len(),
                right: 3 * (flat.len() / 3).max(1),
            });
        }
        let n = flat.len() / 3;
        Twisted3::new(
            SeqVector::new(flat[..n].to_vec())?,
            SeqVector::new(flat[n..2 * n].to_vec())?,
            SeqVector::new(flat[2 * n..].to_vec())?,
        )
    }
}

/// `‖y − Ω₁,₀x‖₂ + ‖x‖₂`.
pub fn z2_quasinorm(v: &Twisted2) -> f64 {
    let shifted = v.y.sub(&omega10(&v.x)).expect("dims checked at construction");
    shifted.norm2() + v.x.norm2()
}

/// `‖(w, y) − Ω⟨2,1⟩,₀x‖_{Z₂} + ‖x‖₂`.
pub fn z3_quasinorm(v: &Twisted3) -> f64 {
    let top = omega21_0(&v.x);
    let rest = Twisted2 {
        y: v.w.sub(&top.y).expect("dims"),
        x: v.y.sub(&top.x).expect("dims"),
    };
    z2_quasinorm(&rest) + v.x.norm2()
}

/// The closed subspaces of `Z₃` cut out by vanishing slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceTag {
    Z3,
    /// `(w, y, 0)`: the copy of `Z₂`.
    Z2Corner,
    /// `(w, 0, x)`
    Wedge,
    /// `(0, y, x)`
    Circle,
    /// `(w, 0, 0)`
    L2,
    /// `(0, y, 0)`
    Lf,
    /// `(0, 0, x)`
    Lg,
}

impl SubspaceTag {
    /// Which of the slots `(w, y, x)` are forced to vanish.
    pub fn zero_slots(self) -> [bool; 3] {
        match self {
            SubspaceTag::Z3 => [false, false, false],
            SubspaceTag::Z2Corner => [false, false, true],
            SubspaceTag::Wedge => [false, true, false],
            SubspaceTag::Circle => [true, false, false],
            SubspaceTag::L2 => [false, true, true],
            SubspaceTag::Lf => [true, false, true],
            SubspaceTag::Lg => [true, true, false],
        }
    }
}

impl fmt::Display for SubspaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The restriction of the `Z₃` quasi-norm to a tagged subspace.
pub fn subspace_norm(v: &Twisted3, tag: SubspaceTag) -> Result<f64> {
    let slots = [("w", &v.w), ("y", &v.y), ("x", &v.x)];
    for ((name, s), must_vanish) in slots.iter().zip(tag.zero_slots()) {
        if must_vanish && !s.is_zero() {
            return Err(Error::ForbiddenSlot {
                slot: name,
                tag: tag.to_string(),
            });
        }
    }
    Ok(z3_quasinorm(v))
}

/// The differentials whose domains are measured by [`domain_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Differential {
    /// `Ω₁,₀ : ℓ₂ → ℓ₂`-ambient, target norm `ℓ₂`.
    Omega10,
    /// `Ω₂,₀`, target norm the dual Orlicz norm of `f`.
    Omega20,
    /// `Ω⟨2,1⟩,₀`, target norm `Z₂`.
    Omega21_0,
}

impl FromStr for Differential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "om10" | "omega10" => Ok(Differential::Omega10),
            "om20" | "omega20" => Ok(Differential::Omega20),
            "om21_0" | "omega21_0" => Ok(Differential::Omega21_0),
            other => Err(Error::UnknownDifferential(other.to_string())),
        }
    }
}

/// `‖Ωx‖_target + ‖x‖₂`.
pub fn domain_norm(omega: Differential, x: &SeqVector) -> f64 {
    let target = match omega {
        Differential::Omega10 => omega10(x).norm2(),
        Differential::Omega20 => dual_norm(&OrliczFunction::f(), &omega20(x)),
        Differential::Omega21_0 => z2_quasinorm(&omega21_0(x)),
    };
    target + x.norm2()
}

/// `⟨U₂ a, b⟩ = −⟨x_a, y_b⟩ + ⟨y_a, x_b⟩`.
pub fn u2_pairing(a: &Twisted2, b: &Twisted2) -> Result<f64> {
    Ok(-a.x.dot(&b.y)? + a.y.dot(&b.x)?)
}

/// `⟨U₃ a, b⟩ = ⟨x_a, w_b⟩ − ⟨y_a, y_b⟩ + ⟨w_a, x_b⟩`.
pub fn u3_pairing(a: &Twisted3, b: &Twisted3) -> Result<f64> {
    Ok(a.x.dot(&b.w)? - a.y.dot(&b.y)? + a.w.dot(&b.x)?)
}
