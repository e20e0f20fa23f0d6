//! Orlicz functions `t²·logᵏ t` near zero, their Luxemburg norms, numeric
//! convex conjugates, and the finite search for the strict-singularity
//! criterion between two Orlicz sequence spaces.
//!
//! The small-argument law only defines a convex function on a neighbourhood
//! of zero, so each [`OrliczFunction`] carries a cutoff `t₀` and continues
//! past it with the quadratic that matches value, slope and curvature at
//! `t₀`. Sequence-space norms only see the behaviour near zero, so any such
//! continuation yields the same space up to equivalence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::SeqVector;

/// Relative tolerance of every bisection and golden-section loop in this module.
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrliczKind {
    /// `t² log² t`
    F,
    /// `t² log⁴ t`
    G,
    /// `t²`
    Square,
    Custom,
}

/// A convex increasing gauge `M` with `M(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrliczFunction {
    kind: OrliczKind,
    log_power: u32,
    cutoff: f64,
    // M(t₀), M'(t₀), M''(t₀)
    at_cutoff: [f64; 3],
}

/// Anything that can serve as a Young function for a Luxemburg gauge.
pub trait Gauge {
    fn value(&self, t: f64) -> f64;

    /// Generalized inverse: the `t` with `value(t) = v`.
    fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.value(hi) < v {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        while hi - lo > 1e-15 * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl OrliczFunction {
    /// `f(t) = t² log² t` with cutoff `e⁻³`.
    pub fn f() -> Self {
        Self::with_cutoff(OrliczKind::F, (-3.0f64).exp()).expect("default cutoff of f is convex")
    }

    /// `g(t) = t² log⁴ t` with cutoff `e⁻⁵`.
    ///
    /// `t² log⁴ t` has inflection points at `log t = −3 ± √3`, so the cutoff
    /// must lie below `e^{−3−√3} ≈ e^{−4.73}`.
    pub fn g() -> Self {
        Self::with_cutoff(OrliczKind::G, (-5.0f64).exp()).expect("default cutoff of g is convex")
    }

    pub fn square() -> Self {
        Self::with_cutoff(OrliczKind::Square, (-3.0f64).exp()).expect("t² is convex")
    }

    pub fn with_cutoff(kind: OrliczKind, cutoff: f64) -> Result<Self> {
        let log_power = match kind {
            OrliczKind::F => 2,
            OrliczKind::G => 4,
            OrliczKind::Square => 0,
            OrliczKind::Custom => {
                return Err(Error::InvalidOrlicz(
                    "use OrliczFunction::custom for custom log powers".into(),
                ))
            }
        };
        Self::build(kind, log_power, cutoff)
    }

    /// `t² log^{log_power} t` for an even `log_power`.
    pub fn custom(log_power: u32, cutoff: f64) -> Result<Self> {
        Self::build(OrliczKind::Custom, log_power, cutoff)
    }

    fn build(kind: OrliczKind, log_power: u32, cutoff: f64) -> Result<Self> {
        if log_power % 2 != 0 {
            return Err(Error::InvalidOrlicz(format!(
                "log power must be even, got {log_power}"
            )));
        }
        if !(cutoff > 0.0 && cutoff < 1.0) {
            return Err(Error::InvalidOrlicz(format!(
                "cutoff must lie in (0, 1), got {cutoff}"
            )));
        }
        let at_cutoff = [
            law(log_power, cutoff),
            law_d1(log_power, cutoff),
            law_d2(log_power, cutoff),
        ];
        // Log-spaced sampling of M'' on (0, t₀] down to 1e-300.
        let samples = 400;
        let lmin = -690.0f64;
        let lmax = cutoff.ln();
        for k in 0..=samples {
            let t = (lmin + (lmax - lmin) * k as f64 / samples as f64).exp();
            let m2 = law_d2(log_power, t);
            if m2 < 0.0 {
                return Err(Error::NotConvex {
                    cutoff,
                    at: t,
                    value: m2,
                });
            }
        }
        if at_cutoff[1] <= 0.0 {
            return Err(Error::InvalidOrlicz(format!(
                "law is not increasing at the cutoff {cutoff}"
            )));
        }
        Ok(OrliczFunction {
            kind,
            log_power,
            cutoff,
            at_cutoff,
        })
    }

    pub fn kind(&self) -> OrliczKind {
        self.kind
    }

    pub fn log_power(&self) -> u32 {
        self.log_power
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Coefficients `(a, b, c)` of the continuation `a t² + b t + c` on `(t₀, ∞)`.
    pub fn extension(&self) -> (f64, f64, f64) {
        let [m0, m1, m2] = self.at_cutoff;
        let t0 = self.cutoff;
        (0.5 * m2, m1 - m2 * t0, m0 - m1 * t0 + 0.5 * m2 * t0 * t0)
    }

    /// The small-argument law `t² logᵏ t`, valid as `M` only on `(0, t₀]`.
    pub fn small_argument_law(&self, t: f64) -> f64 {
        law(self.log_power, t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        if self.log_power == 0 {
            return t * t;
        }
        if t <= self.cutoff {
            law(self.log_power, t)
        } else {
            let [m0, m1, m2] = self.at_cutoff;
            let u = t - self.cutoff;
            m0 + u * (m1 + 0.5 * m2 * u)
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if self.log_power == 0 {
            return 2.0 * t;
        }
        if t <= self.cutoff {
            law_d1(self.log_power, t)
        } else {
            let [_, m1, m2] = self.at_cutoff;
            m1 + m2 * (t - self.cutoff)
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        if self.log_power == 0 {
            return 2.0;
        }
        if t <= self.cutoff {
            law_d2(self.log_power, t)
        } else {
            self.at_cutoff[2]
        }
    }

    /// The complementary function `M*`, evaluated numerically.
    pub fn conjugate(&self) -> Conjugate<'_> {
        Conjugate { m: self }
    }
}

impl Gauge for OrliczFunction {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn inverse(&self, v: f64) -> f64 {
        if self.log_power == 0 {
            return v.max(0.0).sqrt();
        }
        let [m0, m1, m2] = self.at_cutoff;
        if v > m0 {
            // Solve m0 + m1 u + ½ m2 u² = v for u ≥ 0.
            let a = 0.5 * m2;
            let disc = m1 * m1 + 4.0 * a * (v - m0);
            let u = 2.0 * (v - m0) / (m1 + disc.sqrt());
            return self.cutoff + u;
        }
        // Bisection on the monotone law below the cutoff.
        let (mut lo, mut hi) = (0.0, self.cutoff);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if law(self.log_power, mid) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn law(p: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if p == 0 {
        return t * t;
    }
    t * t * t.ln().powi(p as i32)
}

fn law_d1(p: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if p == 0 {
        return 2.0 * t;
    }
    let l = t.ln();
    t * l.powi(p as i32 - 1) * (2.0 * l + p as f64)
}

fn law_d2(p: u32, t: f64) -> f64 {
    if p == 0 {
        return 2.0;
    }
    if t <= 0.0 {
        return f64::INFINITY;
    }
    let l = t.ln();
    let pf = p as f64;
    let poly = 2.0 * l * l + 3.0 * pf * l + pf * (pf - 1.0);
    if p == 1 {
        poly / l
    } else {
        l.powi(p as i32 - 2) * poly
    }
}

/// `M*(s) = sup_{t ≥ 0} (s t − M(t))` for a borrowed `M`.
#[derive(Debug, Clone, Copy)]
pub struct Conjugate<'a> {
    m: &'a OrliczFunction,
}

impl Conjugate<'_> {
    pub fn eval(&self, s: f64) -> f64 {
        conjugate_eval(self.m, s)
    }
}

impl Gauge for Conjugate<'_> {
    fn value(&self, s: f64) -> f64 {
        conjugate_eval(self.m, s)
    }
}

/// `M*(s)` by golden-section search on the concave objective `s t − M(t)`.
///
/// The bracket `[h/2, h]` is found by doubling or halving `h` until `M'`
/// crosses `s`; the maximizer is the unique point with `M'(t) = s`.
pub fn conjugate_eval(m: &OrliczFunction, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0f64;
    if m.derivative(hi) < s {
        while m.derivative(hi) < s {
            hi *= 2.0;
        }
    } else {
        while hi > 1e-300 && m.derivative(0.5 * hi) >= s {
            hi *= 0.5;
        }
    }
    let mut lo = 0.5 * hi;
    let objective = |t: f64| s * t - m.eval(t);

    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = objective(a);
    let mut fb = objective(b);
    while hi - lo > ROOT_TOLERANCE * 1e-2 * hi {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = objective(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = objective(a);
        }
    }
    fa.max(fb).max(objective(lo)).max(objective(hi)).max(0.0)
}

/// Bracket `[lo, hi]` for the Luxemburg bisection of a nonzero vector.
///
/// `lo = ‖x‖∞ / M⁻¹(#supp)` has `Σ M(|xᵢ|/lo) ≥ 1`; `hi = ‖x‖₁·max(1, 1/M⁻¹(1))`
/// has `Σ M(|xᵢ|/hi) ≤ 1` by convexity and `M(0) = 0`.
pub fn luxemburg_bracket<G: Gauge + ?Sized>(m: &G, x: &SeqVector) -> (f64, f64) {
    let support = x.as_slice().iter().filter(|c| **c != 0.0).count() as f64;
    let inf = x.norm_inf();
    let l1: f64 = x.as_slice().iter().map(|c| c.abs()).sum();
    let lo = inf / m.inverse(support);
    let hi = l1 * 1f64.max(1.0 / m.inverse(1.0));
    (lo, hi)
}

/// Modular `Σ M(|xᵢ|/ρ)`.
pub fn modular<G: Gauge + ?Sized>(m: &G, x: &SeqVector, rho: f64) -> f64 {
    x.as_slice().iter().map(|c| m.value(c.abs() / rho)).sum()
}

/// `inf{ρ > 0 : Σ M(|xᵢ|/ρ) ≤ 1}` for any Young function.
///
/// Returns the upper end of the final bracket, so the modular at the
/// returned value never exceeds 1.
pub fn luxemburg<G: Gauge + ?Sized>(m: &G, x: &SeqVector) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (mut lo, mut hi) = luxemburg_bracket(m, x);
    while hi - lo > ROOT_TOLERANCE * 1e-2 * hi {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(m, x, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Luxemburg norm `‖x‖_M`.
pub fn luxemburg_norm(m: &OrliczFunction, x: &SeqVector) -> f64 {
    luxemburg(m, x)
}

/// Luxemburg norm with respect to the numeric conjugate `M*`: the computable
/// stand-in for the dual norm of `ℓ_M`, equivalent to it within a factor 2.
pub fn dual_norm(m: &OrliczFunction, y: &SeqVector) -> f64 {
    luxemburg(&m.conjugate(), y)
}

/// A finite certificate for `Σ M(τᵢ t) ≥ B Σ N(τᵢ t)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionWitness {
    pub tau: Vec<f64>,
    #[serde(rename = "B")]
    pub b: f64,
    /// `min_t (Σ M(τᵢ t) − B Σ N(τᵢ t))` over the sample grid.
    pub margin: f64,
}

/// Number of points in the `t`-grid used by [`criterion_search`].
pub const CRITERION_GRID: usize = 1000;

/// Evaluates the criterion margin for a fixed `τ` on the `t`-grid.
pub fn criterion_margin(m: &OrliczFunction, n: &OrliczFunction, b: f64, tau: &[f64]) -> f64 {
    (0..CRITERION_GRID)
        .map(|j| {
            let t = j as f64 / (CRITERION_GRID - 1) as f64;
            let sm: f64 = tau.iter().map(|&ti| m.eval(ti * t)).sum();
            let sn: f64 = tau.iter().map(|&ti| n.eval(ti * t)).sum();
            sm - b * sn
        })
        .fold(f64::INFINITY, f64::min)
}

/// Searches geometric families `τᵢ = rⁱ` (`i = 1..=n`, `n ≤ n_max`) for a
/// witness with nonnegative margin, trying `r = 0.9, 0.9², …` down to `~10⁻⁶`.
///
/// `None` means the search space was exhausted, not that no witness exists.
pub fn criterion_search(
    m: &OrliczFunction,
    n: &OrliczFunction,
    b: f64,
    n_max: usize,
) -> Option<CriterionWitness> {
    for k in 1..=131 {
        let r = 0.9f64.powi(k);
        for len in 1..=n_max {
            let tau: Vec<f64> = (1..=len as i32).map(|i| r.powi(i)).collect();
            let margin = criterion_margin(m, n, b, &tau);
            if margin >= 0.0 {
                return Some(CriterionWitness { tau, b, margin });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn v(xs: &[f64]) -> SeqVector {
        SeqVector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(OrliczFunction::square().eval(3.0), 9.0);
        let f = OrliczFunction::f();
        let t = E.powi(-4);
        assert!((f.eval(t) / (16.0 * E.powi(-8)) - 1.0).abs() < 1e-14);
        // g's law at e⁻⁴ (above g's cutoff, so only the raw law is checked)
        let g = OrliczFunction::g();
        assert!((g.small_argument_law(t) / (256.0 * E.powi(-8)) - 1.0).abs() < 1e-14);
        let t6 = E.powi(-6);
        assert!((g.eval(t6) / (1296.0 * E.powi(-12)) - 1.0).abs() < 1e-14);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(g.eval(0.0), 0.0);
    }

    #[test]
    fn g_with_cutoff_e3_is_rejected() {
        let err = OrliczFunction::with_cutoff(OrliczKind::G, E.powi(-3)).unwrap_err();
        assert!(matches!(err, Error::NotConvex { .. }));
        assert!(OrliczFunction::with_cutoff(OrliczKind::F, 0.5).is_err());
        assert!(OrliczFunction::custom(3, 0.01).is_err());
        assert!(OrliczFunction::custom(2, 1.5).is_err());
    }

    #[test]
    fn continuation_is_c2_and_increasing() {
        for m in [OrliczFunction::f(), OrliczFunction::g()] {
            let t0 = m.cutoff();
            let (a, b, c) = m.extension();
            let poly = |t: f64| a * t * t + b * t + c;
            assert!((poly(t0) - m.small_argument_law(t0)).abs() < 1e-15);
            assert!((m.eval(2.0) - poly(2.0)).abs() < 1e-12 * poly(2.0));
            let h = 1e-7 * t0;
            let left = (m.eval(t0) - m.eval(t0 - h)) / h;
            let right = (m.eval(t0 + h) - m.eval(t0)) / h;
            assert!((left - right).abs() < 1e-5 * left);
            assert!(a > 0.0);
            let mut prev = 0.0;
            for k in 1..2000 {
                let t = k as f64 * 1e-3;
                assert!(m.eval(t) > prev);
                prev = m.eval(t);
            }
        }
    }

    #[test]
    fn luxemburg_examples() {
        let x = v(&[3.0, -4.0, 1.0]);
        let sq = luxemburg_norm(&OrliczFunction::square(), &x);
        assert!((sq - 26f64.sqrt()).abs() < 1e-9 * sq);
        assert_eq!(luxemburg_norm(&OrliczFunction::f(), &SeqVector::zeros(4)), 0.0);

        let f = OrliczFunction::f();
        let c = 2.5;
        let single = luxemburg_norm(&f, &v(&[c, 0.0]));
        let closed = c / f.inverse(1.0);
        assert!((single - closed).abs() < 1e-9 * closed);
        assert!((f.eval(f.inverse(1.0)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bracket_is_valid() {
        let f = OrliczFunction::f();
        for x in [v(&[1.0, 0.5, 0.25]), v(&[1e-3, 2e-3]), v(&[10.0])] {
            let (lo, hi) = luxemburg_bracket(&f, &x);
            assert!(modular(&f, &x, lo) >= 1.0 - 1e-12);
            assert!(modular(&f, &x, hi) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn conjugate_examples() {
        let sq = OrliczFunction::square();
        for s in [0.1, 1.0, 3.0] {
            assert!((conjugate_eval(&sq, s) - s * s / 4.0).abs() < 1e-10);
        }
        assert_eq!(conjugate_eval(&OrliczFunction::f(), 0.0), 0.0);

        // brute-force grid oracle over [0, 10], step 1e-6
        let f = OrliczFunction::f();
        let s = 0.1;
        let mut best = 0.0f64;
        for k in 0..=10_000_000u32 {
            let t = k as f64 * 1e-6;
            best = best.max(s * t - f.eval(t));
        }
        let got = conjugate_eval(&f, s);
        assert!(got >= best - 1e-12);
        assert!((got - best).abs() < 1e-10);
    }

    #[test]
    fn dual_norm_examples() {
        let sq = OrliczFunction::square();
        let y = v(&[3.0, 4.0]);
        assert!((dual_norm(&sq, &y) - 2.5).abs() < 1e-8);
        assert_eq!(dual_norm(&OrliczFunction::f(), &SeqVector::zeros(3)), 0.0);

        let f = OrliczFunction::f();
        let e1 = SeqVector::unit(3, 0);
        let closed = 1.0 / f.conjugate().inverse(1.0);
        assert!((dual_norm(&f, &e1) - closed).abs() < 1e-8 * closed);
    }

    #[test]
    fn criterion_examples() {
        let (f, g, sq) = (
            OrliczFunction::f(),
            OrliczFunction::g(),
            OrliczFunction::square(),
        );
        let w = criterion_search(&f, &sq, 2.0, 8).expect("f -> square");
        assert!(w.margin >= 0.0);
        assert!((criterion_margin(&f, &sq, 2.0, &w.tau) - w.margin).abs() == 0.0);
        let w = criterion_search(&g, &f, 4.0, 8).expect("g -> f");
        assert!(w.margin >= 0.0);
        assert!(criterion_search(&sq, &sq, 2.0, 4).is_none());
    }

    #[test]
    fn witness_json_schema() {
        let w = CriterionWitness {
            tau: vec![0.5, 0.25],
            b: 2.0,
            margin: 0.0,
        };
        let j = serde_json::to_value(&w).unwrap();
        assert_eq!(j, serde_json::json!({"tau": [0.5, 0.25], "B": 2.0, "margin": 0.0}));
    }
}
