//! Reproducible verification suites over dimension ladders, with JSON
//! reports and CSV curves.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::calderon::{
    conformal_constant, extremal_selector, numeric_derivative, selector_derivative,
    ConformalChoice, StripPoint,
};
use crate::diagrams::{
    block_operator_r, check_diagram_identities, commutativity_check_12_13,
    pairing_identity_deviation, projection_matrix, r_matrix, seqinz3_identity, BlockBasis,
    DiagramSpec,
};
use crate::error::{Error, Result};
use crate::orlicz::{
    conjugate_eval, criterion_search, dual_norm, luxemburg_norm, OrliczFunction,
};
use crate::rng::{sub_seed, trial_rng};
use crate::seq::{lp_norm, weighted_l2_norm, SeqVector, WeightSeq};
use crate::twisted::{
    domain_norm, omega10, omega21_0, subspace_norm, u2_pairing, u3_pairing, z2_quasinorm,
    Differential, SubspaceTag, Twisted2, Twisted3,
};
use crate::weighted::{
    triviality_defect, weighted_omega, weighted_selector_composition,
    weighted_selector_composition_numeric, WeightedCouple, WeightedLevel, WeightedSpace,
    WeightedValue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Selector,
    Quasilinearity,
    Diagrams,
    HiddenSymmetry,
    BlockIdentity,
    Duality,
    OrliczCriterion,
    Weighted,
    Nontriviality,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Selector,
        Suite::Quasilinearity,
        Suite::Diagrams,
        Suite::HiddenSymmetry,
        Suite::BlockIdentity,
        Suite::Duality,
        Suite::OrliczCriterion,
        Suite::Weighted,
        Suite::Nontriviality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Selector => "selector",
            Suite::Quasilinearity => "quasilinearity",
            Suite::Diagrams => "diagrams",
            Suite::HiddenSymmetry => "hidden_symmetry",
            Suite::BlockIdentity => "block_identity",
            Suite::Duality => "duality",
            Suite::OrliczCriterion => "orlicz_criterion",
            Suite::Weighted => "weighted",
            Suite::Nontriviality => "nontriviality",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Selector => "boundary norms and derivatives of the extremal selector",
            Suite::Quasilinearity => "defect constants of Ω₁,₀ and Ω⟨2,1⟩,₀ across dimensions",
            Suite::Diagrams => "exactness of the six 3×3 diagrams",
            Suite::HiddenSymmetry => "corner and domain norms against Orlicz norms",
            Suite::BlockIdentity => "block operators, pairing identity, projection, block identity",
            Suite::Duality => "Fenchel–Young, dual norms and twisted pairings",
            Suite::OrliczCriterion => "finite witnesses for Orlicz inclusions",
            Suite::Weighted => "linear differentials of the weighted Hilbert couple",
            Suite::Nontriviality => "growth of the best linear fit residual of Ω₁,₀",
        }
    }

    /// Ladder used when a configuration gives no dimensions.
    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Suite::Selector => vec![4, 16, 64],
            Suite::Quasilinearity => vec![64, 256, 1024],
            Suite::Diagrams => vec![8],
            Suite::HiddenSymmetry => (4..=12).map(|k| 1 << k).collect(),
            Suite::BlockIdentity => (4..=10).map(|k| 1 << k).collect(),
            Suite::Duality => vec![8, 32, 128],
            Suite::OrliczCriterion => vec![1],
            Suite::Weighted => vec![16, 64],
            Suite::Nontriviality => (4..=10).map(|k| 1 << k).collect(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Replaces the bound of the named checks.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn new(suite: Suite, dims: Vec<usize>, samples: usize, seed: u64) -> Self {
        ExperimentConfig {
            suite,
            dims,
            samples,
            seed,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Fills in default dimensions and checks the invariants.
    pub fn validated(mut self) -> Result<Self> {
        if self.dims.is_empty() {
            self.dims = self.suite.default_dims();
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("dims must be strictly increasing".into()));
        }
        if self.dims[0] == 0 {
            return Err(Error::InvalidConfig("dims must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `value ≤ bound`
    AtMost,
    /// `value ≥ bound`
    AtLeast,
    /// `value < bound`
    Below,
    /// `value > bound`
    Above,
    /// `value == bound`
    Equals,
}

impl Comparison {
    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Comparison::AtMost => value <= bound,
            Comparison::AtLeast => value >= bound,
            Comparison::Below => value < bound,
            Comparison::Above => value > bound,
            Comparison::Equals => value == bound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub dim: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Max deviation, or the statistic summarizing the curve.
    pub value: f64,
    pub bound: f64,
    pub comparison: Comparison,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curve: Vec<CurvePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Record wall-clock time per check (makes the report non-reproducible).
    pub timings: bool,
}

struct Recorder<'a> {
    cfg: &'a ExperimentConfig,
    timings: bool,
    checks: Vec<CheckResult>,
}

impl Recorder<'_> {
    fn push(
        &mut self,
        name: &str,
        comparison: Comparison,
        bound: f64,
        started: Instant,
        measure: (f64, Vec<CurvePoint>),
    ) {
        let bound = self.cfg.tolerances.get(name).copied().unwrap_or(bound);
        let (value, curve) = measure;
        self.checks.push(CheckResult {
            name: name.to_string(),
            value,
            bound,
            comparison,
            passed: value.is_finite() && comparison.holds(value, bound),
            curve,
            runtime_ms: self
                .timings
                .then(|| started.elapsed().as_millis() as u64),
        });
    }

    /// Runs `f`, then records its result.
    fn run(
        &mut self,
        name: &str,
        comparison: Comparison,
        bound: f64,
        f: impl FnOnce() -> Result<(f64, Vec<CurvePoint>)>,
    ) -> Result<()> {
        let t = Instant::now();
        let m = f()?;
        self.push(name, comparison, bound, t, m);
        Ok(())
    }
}

pub fn run_suite(cfg: &ExperimentConfig) -> Result<Report> {
    run_suite_with(cfg, RunOptions::default())
}

pub fn run_suite_with(cfg: &ExperimentConfig, opts: RunOptions) -> Result<Report> {
    let cfg = cfg.clone().validated()?;
    let seed = sub_seed(cfg.seed, cfg.suite.name());
    let mut rec = Recorder {
        cfg: &cfg,
        timings: opts.timings,
        checks: Vec::new(),
    };
    match cfg.suite {
        Suite::Selector => selector_suite(&mut rec, seed)?,
        Suite::Quasilinearity => quasilinearity_suite(&mut rec, seed)?,
        Suite::Diagrams => diagrams_suite(&mut rec, seed)?,
        Suite::HiddenSymmetry => hidden_symmetry_suite(&mut rec)?,
        Suite::BlockIdentity => block_identity_suite(&mut rec, seed)?,
        Suite::Duality => duality_suite(&mut rec, seed)?,
        Suite::OrliczCriterion => orlicz_criterion_suite(&mut rec)?,
        Suite::Weighted => weighted_suite(&mut rec, seed)?,
        Suite::Nontriviality => nontriviality_suite(&mut rec, seed)?,
    }
    let checks = rec.checks;
    Ok(Report {
        suite: cfg.suite,
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        config: cfg,
        checks,
    })
}

fn max_curve(curve: Vec<CurvePoint>) -> (f64, Vec<CurvePoint>) {
    (curve.iter().fold(0.0, |m, p| m.max(p.value)), curve)
}

/// `max(r, 1/r)` over the curve: the smallest `C` with every ratio in `[1/C, C]`.
fn band(curve: &[CurvePoint]) -> f64 {
    curve
        .iter()
        .fold(1.0f64, |m, p| m.max(p.value).max(1.0 / p.value))
}

/// Random vector with coordinates uniform in `[-1, 1]` times a random scale `10^[-3,3]`.
fn random_scaled(rng: &mut ChaCha8Rng, dim: usize) -> SeqVector {
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    loop {
        let v: Vec<f64> = (0..dim).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        if v.iter().any(|&c| c != 0.0) {
            return SeqVector::from_vec_unchecked(v);
        }
    }
}

fn rel_inf(a: &SeqVector, b: &SeqVector, scale: f64) -> Result<f64> {
    Ok(a.max_abs_diff(b)? / scale.max(f64::MIN_POSITIVE))
}

const FD_STEP: f64 = 1e-3;

fn selector_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    let draw = |label: &str, dim: usize, t: usize| {
        random_scaled(&mut trial_rng(sub_seed(seed, label), (dim * samples + t) as u64), dim)
    };

    rec.run("boundary_norm", Comparison::AtMost, 1e-9, || {
        let mut curve = Vec::new();
        for &dim in &dims {
            let mut worst = 0.0f64;
            for t in 0..samples {
                let x = draw("boundary", dim, t);
                let norm = x.norm2();
                let mut rng = trial_rng(sub_seed(seed, "boundary-t"), t as u64);
                let s: f64 = rng.gen_range(-5.0..5.0);
                let left = extremal_selector(&x, StripPoint::left(s))?.moduli().norm_inf();
                let right = lp_norm(&extremal_selector(&x, StripPoint::right(s))?.moduli(), 1.0)?;
                worst = worst.max((left.max(right) / norm - 1.0).abs());
            }
            curve.push(CurvePoint { dim, value: worst });
        }
        Ok(max_curve(curve))
    })?;

    for (order, bound) in [(1u32, 1e-6), (2, 1e-4)] {
        rec.run(&format!("derivative_order{order}"), Comparison::AtMost, bound, || {
            let mut curve = Vec::new();
            for &dim in &dims {
                let mut worst = 0.0f64;
                for t in 0..samples {
                    let x = draw("derivative", dim, t);
                    let closed = selector_derivative(&x, order)?;
                    // numeric_derivative returns the full derivative; the order-2
                    // closed form is half of it
                    let numeric = numeric_derivative(&x, order, FD_STEP)?
                        .scale(if order == 2 { 0.5 } else { 1.0 });
                    let scale = closed.norm_inf().max(x.norm_inf());
                    worst = worst.max(rel_inf(&numeric, &closed, scale)?);
                }
                curve.push(CurvePoint { dim, value: worst });
            }
            Ok(max_curve(curve))
        })?;
    }

    rec.run("order1_is_omega10", Comparison::Equals, 0.0, || {
        let mut worst = 0.0f64;
        for &dim in &dims {
            for t in 0..samples {
                let x = draw("derivative", dim, t);
                worst = worst.max(selector_derivative(&x, 1)?.max_abs_diff(&omega10(&x))?);
            }
        }
        Ok((worst, Vec::new()))
    })
}

/// Support size spread log-uniformly over `lo..=dim`.
fn log_uniform_size(rng: &mut ChaCha8Rng, lo: usize, dim: usize) -> usize {
    let (a, b) = ((lo as f64).ln(), (dim as f64).ln());
    (rng.gen_range(a..=b).exp().round() as usize).clamp(lo, dim)
}

fn signed_magnitude(rng: &mut ChaCha8Rng) -> f64 {
    let c = rng.gen_range(0.1..1.0);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// Pairs from three families with independent random scales: dense,
/// independently placed sparse supports, and disjoint supports. Support
/// sizes are log-uniform, so small supports occur at every dimension.
pub fn defect_pair(rng: &mut ChaCha8Rng, dim: usize) -> (SeqVector, SeqVector) {
    let mut a = vec![0.0; dim];
    let mut b = vec![0.0; dim];
    let sa = 10f64.powf(rng.gen_range(-2.0..2.0));
    let sb = 10f64.powf(rng.gen_range(-2.0..2.0));
    match rng.gen_range(0..3) {
        0 => {
            for i in 0..dim {
                a[i] = sa * rng.gen_range(-1.0..1.0);
                b[i] = sb * rng.gen_range(-1.0..1.0);
            }
        }
        1 => {
            let ka = log_uniform_size(rng, 1, dim);
            let kb = log_uniform_size(rng, 1, dim);
            for i in rand::seq::index::sample(rng, dim, ka) {
                a[i] = sa * signed_magnitude(rng);
            }
            for i in rand::seq::index::sample(rng, dim, kb) {
                b[i] = sb * signed_magnitude(rng);
            }
        }
        _ => {
            let k = log_uniform_size(rng, 2.min(dim), dim);
            let mut idx: Vec<usize> = (0..dim).collect();
            idx.shuffle(rng);
            let split = rng.gen_range(1..k.max(2));
            for (n, &i) in idx.iter().take(k).enumerate() {
                if n < split {
                    a[i] = sa * signed_magnitude(rng);
                } else {
                    b[i] = sb * signed_magnitude(rng);
                }
            }
        }
    }
    // a pair with a zero member has no defect; keep both nonzero
    if a.iter().all(|&c| c == 0.0) {
        a[0] = sa;
    }
    if b.iter().all(|&c| c == 0.0) {
        b[dim - 1] = sb;
    }
    (SeqVector::from_vec_unchecked(a), SeqVector::from_vec_unchecked(b))
}

/// `‖Ω₁,₀(a+b) − Ω₁,₀a − Ω₁,₀b‖₂ / (‖a‖₂ + ‖b‖₂)`
pub fn omega10_defect(a: &SeqVector, b: &SeqVector) -> Result<f64> {
    let d = omega10(&a.add(b)?).sub(&omega10(a).add(&omega10(b))?)?;
    Ok(d.norm2() / (a.norm2() + b.norm2()))
}

/// The same for `Ω⟨2,1⟩,₀`, measured in `Z₂`.
pub fn omega21_defect(a: &SeqVector, b: &SeqVector) -> Result<f64> {
    let d = omega21_0(&a.add(b)?).sub(&omega21_0(a).add(&omega21_0(b))?)?;
    Ok(z2_quasinorm(&d) / (a.norm2() + b.norm2()))
}

fn quasilinearity_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    type DefectFn = fn(&SeqVector, &SeqVector) -> Result<f64>;
    let maps: [(&str, DefectFn); 2] = [("omega10", omega10_defect), ("omega21_0", omega21_defect)];
    for (label, defect) in maps {
        let mut curve = Vec::new();
        let t0 = Instant::now();
        for &dim in &dims {
            let stream = sub_seed(seed, &format!("{label}/{dim}"));
            let mut worst = 0.0f64;
            for t in 0..samples {
                let (a, b) = defect_pair(&mut trial_rng(stream, t as u64), dim);
                worst = worst.max(defect(&a, &b)?);
            }
            curve.push(CurvePoint { dim, value: worst });
        }
        let sup = curve.iter().fold(0.0f64, |m, p| m.max(p.value));
        rec.push(
            &format!("defect_{label}"),
            Comparison::Below,
            f64::INFINITY,
            t0,
            (sup, curve.clone()),
        );
        let first = curve.first().expect("dims nonempty").value;
        let last = curve.last().expect("dims nonempty").value;
        rec.push(
            &format!("defect_{label}_variation"),
            Comparison::Below,
            0.2,
            Instant::now(),
            ((last / first - 1.0).abs(), Vec::new()),
        );
    }
    Ok(())
}

fn diagrams_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    for spec in DiagramSpec::all() {
        let t0 = Instant::now();
        let mut per_check: BTreeMap<String, f64> = BTreeMap::new();
        let mut order = Vec::new();
        for &dim in &dims {
            let s = sub_seed(seed, &format!("{}/{dim}", spec.name()));
            let r = check_diagram_identities(&spec, samples, dim, s)?;
            for c in r.checks {
                if !per_check.contains_key(&c.name) {
                    order.push(c.name.clone());
                }
                let e = per_check.entry(c.name).or_insert(0.0);
                *e = e.max(c.max_deviation);
            }
        }
        for name in order {
            rec.push(
                &format!("[{}] {name}", spec.name()),
                Comparison::Equals,
                0.0,
                t0,
                (per_check[&name], Vec::new()),
            );
        }
    }
    Ok(())
}

/// `xₙ = n^{−α}`, `n = 1..=dim`.
pub fn power_family(dim: usize, alpha: f64) -> SeqVector {
    SeqVector::from_vec_unchecked((1..=dim).map(|n| (n as f64).powf(-alpha)).collect())
}

pub const HIDDEN_SYMMETRY_ALPHAS: [f64; 3] = [0.6, 0.75, 1.0];

fn hidden_symmetry_suite(rec: &mut Recorder) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let f = OrliczFunction::f();
    let g = OrliczFunction::g();
    let ratios: [(&str, &dyn Fn(&SeqVector) -> Result<f64>); 3] = [
        ("om20_domain_over_lf", &|x| {
            Ok(domain_norm(Differential::Omega20, x) / luxemburg_norm(&f, x))
        }),
        ("lf_corner_over_lf", &|x| {
            let z = SeqVector::zeros(x.dim());
            let v = Twisted3::new(z.clone(), x.clone(), z)?;
            Ok(subspace_norm(&v, SubspaceTag::Lf)? / luxemburg_norm(&f, x))
        }),
        ("lg_corner_over_lg", &|x| {
            let z = SeqVector::zeros(x.dim());
            let v = Twisted3::new(z.clone(), z, x.clone())?;
            Ok(subspace_norm(&v, SubspaceTag::Lg)? / luxemburg_norm(&g, x))
        }),
    ];
    for (label, ratio) in ratios {
        for alpha in HIDDEN_SYMMETRY_ALPHAS {
            rec.run(
                &format!("{label}_alpha{alpha}"),
                Comparison::Below,
                50.0,
                || {
                    let curve = dims
                        .iter()
                        .map(|&dim| {
                            Ok(CurvePoint {
                                dim,
                                value: ratio(&power_family(dim, alpha))?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((band(&curve), curve))
                },
            )?;
        }
    }
    Ok(())
}

/// Block families used for the projection and commutativity checks.
pub fn block_families(count: usize, seed: u64) -> Vec<(&'static str, BlockBasis)> {
    let mut rng = trial_rng(seed, 0);
    vec![
        ("canonical", BlockBasis::canonical(count)),
        ("equal_pairs", BlockBasis::equal_pairs(count)),
        ("random", BlockBasis::random(count, 3, false, &mut rng)),
    ]
}

/// Positive block families used for the block identity.
pub fn positive_block_families(count: usize, seed: u64) -> Vec<(&'static str, BlockBasis)> {
    let mut rng = trial_rng(seed, 1);
    vec![
        ("canonical", BlockBasis::canonical(count)),
        ("equal_pairs", BlockBasis::equal_pairs(count)),
        (
            "profile_321",
            BlockBasis::repeated(count, &[3.0, 2.0, 1.0]).expect("valid profile"),
        ),
        ("random_positive", BlockBasis::random(count, 4, true, &mut rng)),
    ]
}

const PROJECTION_BLOCKS: usize = 16;
const PROJECTION_PADDING: usize = 4;

fn block_identity_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;

    rec.run("pairing_identity", Comparison::AtMost, 1e-12, || {
        let mut rng = trial_rng(sub_seed(seed, "pairing"), 0);
        let u = BlockBasis::random(12, 3, false, &mut rng);
        Ok((pairing_identity_deviation(&u, 12), Vec::new()))
    })?;

    let families = block_families(PROJECTION_BLOCKS, sub_seed(seed, "families"));
    rec.run("commutativity", Comparison::AtMost, 1e-10, || {
        let mut worst = 0.0f64;
        for (k, (_, u)) in families.iter().enumerate() {
            let r = commutativity_check_12_13(u, samples, sub_seed(seed, &format!("comm/{k}")))?;
            worst = worst.max(r.max_deviation());
        }
        Ok((worst, Vec::new()))
    })?;

    let mut idem = 0.0f64;
    let mut fixes = 0.0f64;
    let t0 = Instant::now();
    for (k, (_, u)) in families.iter().enumerate() {
        let n = u.ambient_dim() + PROJECTION_PADDING;
        let p = projection_matrix(u, n)?;
        let mut rng = trial_rng(sub_seed(seed, &format!("projection/{k}")), 0);
        for _ in 0..samples {
            let v: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = nalgebra::DVector::from_vec(v);
            let pv = &p * &v;
            let ppv = &p * &pv;
            idem = idem.max((ppv - &pv).amax());

            let w: Vec<f64> = (0..3 * u.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rw = block_operator_r(u, &Twisted3::from_flat(&w)?)?.resized(n);
            let rw = nalgebra::DVector::from_vec(rw.to_flat());
            fixes = fixes.max((&p * &rw - &rw).amax());
        }
    }
    rec.push("projection_idempotent", Comparison::AtMost, 1e-8, t0, (idem, Vec::new()));
    rec.push("projection_fixes_range", Comparison::AtMost, 1e-8, t0, (fixes, Vec::new()));

    let mut residual = 0.0f64;
    let mut curve = Vec::new();
    let t0 = Instant::now();
    for &dim in &dims {
        let x = power_family(dim, 0.75);
        let mut hi = 0.0f64;
        let mut lo = f64::INFINITY;
        for (_, u) in positive_block_families(dim, sub_seed(seed, &format!("blocks/{dim}"))) {
            let r = seqinz3_identity(&u, &x)?;
            residual = residual.max(r.residual);
            hi = hi.max(r.ratio);
            lo = lo.min(r.ratio);
        }
        curve.push(CurvePoint { dim, value: hi });
        curve.push(CurvePoint { dim, value: lo });
    }
    rec.push("block_identity_residual", Comparison::AtMost, 1e-10, t0, (residual, Vec::new()));
    let c = band(&curve);
    rec.push("block_identity_band", Comparison::Below, 50.0, t0, (c, curve));

    rec.run("r_matrix_generators_isometric", Comparison::AtMost, 1e-8, || {
        let mut worst = 0.0f64;
        for (_, u) in &families {
            let m = r_matrix(u, u.ambient_dim())?;
            for col in 0..m.ncols() {
                let image = Twisted3::from_flat(m.column(col).as_slice())?;
                let mut e = vec![0.0; m.ncols()];
                e[col] = 1.0;
                let source = Twisted3::from_flat(&e)?;
                let ratio = crate::twisted::z3_quasinorm(&image)
                    / crate::twisted::z3_quasinorm(&source);
                worst = worst.max((ratio - 1.0).abs());
            }
        }
        Ok((worst, Vec::new()))
    })
}

fn duality_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    let functions = [
        ("f", OrliczFunction::f()),
        ("g", OrliczFunction::g()),
        ("square", OrliczFunction::square()),
    ];

    rec.run("fenchel_young", Comparison::AtMost, 1e-9, || {
        let mut rng = trial_rng(sub_seed(seed, "fenchel"), 0);
        let mut worst = 0.0f64;
        for (_, m) in &functions {
            for _ in 0..samples {
                let t = 10f64.powf(rng.gen_range(-4.0..1.0));
                let s = 10f64.powf(rng.gen_range(-4.0..1.0));
                let gap = s * t - m.eval(t) - conjugate_eval(m, s);
                worst = worst.max(gap / (1.0 + s * t));
            }
        }
        Ok((worst, Vec::new()))
    })?;

    for (label, m) in &functions {
        rec.run(&format!("duality_gap_{label}"), Comparison::AtMost, 2.0, || {
            let mut curve = Vec::new();
            for &dim in &dims {
                let stream = sub_seed(seed, &format!("gap/{label}/{dim}"));
                let mut worst = 0.0f64;
                for t in 0..samples {
                    let mut rng = trial_rng(stream, t as u64);
                    let x = random_scaled(&mut rng, dim);
                    let y = random_scaled(&mut rng, dim);
                    let ratio = x.dot(&y)?.abs() / (luxemburg_norm(m, &x) * dual_norm(m, &y));
                    worst = worst.max(ratio);
                }
                curve.push(CurvePoint { dim, value: worst });
            }
            Ok(max_curve(curve))
        })?;
    }

    rec.run("square_dual_is_half_l2", Comparison::AtMost, 1e-9, || {
        let sq = OrliczFunction::square();
        let mut worst = 0.0f64;
        for &dim in &dims {
            for t in 0..samples {
                let y = random_scaled(&mut trial_rng(sub_seed(seed, "square"), t as u64), dim);
                worst = worst.max((dual_norm(&sq, &y) / (0.5 * y.norm2()) - 1.0).abs());
            }
        }
        Ok((worst, Vec::new()))
    })?;

    rec.run("pairing_symmetries", Comparison::AtMost, 1e-12, || {
        let mut worst = 0.0f64;
        for &dim in &dims {
            for t in 0..samples {
                let mut rng = trial_rng(sub_seed(seed, "pairings"), t as u64);
                let mut draw = || random_scaled(&mut rng, dim);
                let (a2, b2) = (Twisted2::new(draw(), draw())?, Twisted2::new(draw(), draw())?);
                let scale2 = a2.y.norm2().max(a2.x.norm2()) * b2.y.norm2().max(b2.x.norm2());
                let anti = (u2_pairing(&a2, &b2)? + u2_pairing(&b2, &a2)?).abs() / scale2;
                let a3 = Twisted3::new(draw(), draw(), draw())?;
                let b3 = Twisted3::new(draw(), draw(), draw())?;
                let n3 = |v: &Twisted3| v.w.norm2().max(v.y.norm2()).max(v.x.norm2());
                let sym = (u3_pairing(&a3, &b3)? - u3_pairing(&b3, &a3)?).abs() / (n3(&a3) * n3(&b3));
                worst = worst.max(anti).max(sym);
            }
        }
        Ok((worst, Vec::new()))
    })
}

pub const CRITERION_N_MAX: usize = 8;

fn orlicz_criterion_suite(rec: &mut Recorder) -> Result<()> {
    let f = OrliczFunction::f();
    let g = OrliczFunction::g();
    let sq = OrliczFunction::square();
    // margin of the witness found; NaN (a failure) when the search is exhausted
    let margin = |m: &OrliczFunction, n: &OrliczFunction, b: f64| {
        let found = criterion_search(m, n, b, CRITERION_N_MAX);
        Ok((found.map_or(f64::NAN, |w| w.margin), Vec::new()))
    };
    for b in [2.0, 4.0, 8.0] {
        rec.run(&format!("f_to_square_B{b}"), Comparison::AtLeast, 0.0, || {
            margin(&f, &sq, b)
        })?;
        rec.run(&format!("g_to_f_B{b}"), Comparison::AtLeast, 0.0, || {
            margin(&g, &f, b)
        })?;
    }
    // 1 if a witness is found
    rec.run("square_to_square_B2_fails", Comparison::Equals, 0.0, || {
        let hits = criterion_search(&sq, &sq, 2.0, CRITERION_N_MAX).map_or(0.0, |_| 1.0);
        Ok((hits, Vec::new()))
    })
}

/// The two weights used by the weighted suite.
pub fn weight_families(dim: usize) -> Result<Vec<(&'static str, WeightSeq)>> {
    Ok(vec![
        ("inv_log", WeightSeq::from_fn(dim, |n| 1.0 / ((n + 2) as f64).ln())?),
        ("quarter_power", WeightSeq::from_fn(dim, |n| ((n + 1) as f64).powf(-0.25))?),
    ])
}

fn weighted_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    let couples = |dim| -> Result<Vec<WeightedCouple>> {
        Ok(weight_families(dim)?
            .into_iter()
            .map(|(_, w)| WeightedCouple::new(w))
            .collect())
    };

    for level in [WeightedLevel::Om10, WeightedLevel::Om21_0, WeightedLevel::Om2_10] {
        rec.run(&format!("defect_{}", level.name()), Comparison::AtMost, 1e-14, || {
            let mut worst = 0.0f64;
            for &dim in &dims {
                for (k, c) in couples(dim)?.iter().enumerate() {
                    let s = sub_seed(seed, &format!("{}/{dim}/{k}", level.name()));
                    worst = worst.max(triviality_defect(c, level, samples, s)?);
                }
            }
            Ok((worst, Vec::new()))
        })?;
    }

    rec.run("inverse_roundtrip", Comparison::AtMost, 1e-14, || {
        let mut worst = 0.0f64;
        for &dim in &dims {
            for c in couples(dim)? {
                for t in 0..samples {
                    let x = random_scaled(&mut trial_rng(sub_seed(seed, "inverse"), t as u64), dim);
                    let xv = WeightedValue::Vector(x.clone());
                    let fwd = weighted_omega(&c, WeightedLevel::Om10, &xv)?;
                    let back = weighted_omega(&c, WeightedLevel::Om10Inverse, &fwd)?;
                    let back = back.vector().expect("vector level");
                    worst = worst.max(rel_inf(back, &x, x.norm_inf())?);
                }
            }
        }
        Ok((worst, Vec::new()))
    })?;

    rec.run("composition_vs_numeric", Comparison::AtMost, 1e-4, || {
        let mut worst = 0.0f64;
        for &dim in &dims {
            for c in couples(dim)? {
                for t in 0..samples {
                    let mut rng = trial_rng(sub_seed(seed, "composition"), t as u64);
                    let y = random_scaled(&mut rng, dim);
                    let x = random_scaled(&mut rng, dim);
                    let closed = weighted_selector_composition(&c, &y, &x)?;
                    let numeric = weighted_selector_composition_numeric(&c, &y, &x, FD_STEP)?;
                    worst = worst.max(rel_inf(&numeric, &closed, closed.norm_inf())?);
                }
            }
        }
        Ok((worst, Vec::new()))
    })?;

    rec.run("conformal_d", Comparison::AtMost, 1e-8, || {
        Ok((conformal_constant(ConformalChoice::SymmetricStrip).d.norm(), Vec::new()))
    })?;

    rec.run("graph_cancellation", Comparison::AtMost, 1e-12, || {
        let mut worst = 0.0f64;
        for &dim in &dims {
            for c in couples(dim)? {
                let x = random_scaled(&mut trial_rng(sub_seed(seed, "graph"), dim as u64), dim);
                let l = c.log_weights();
                for (k, space) in [(2.0, WeightedSpace::Z2w), (1.0, WeightedSpace::CircleW)] {
                    let y: Vec<f64> = x.as_slice().iter().zip(l).map(|(x, l)| k * l * x).collect();
                    let p = Twisted2::new(SeqVector::new(y)?, x.clone())?;
                    let m = crate::weighted::membership(&c, space, &WeightedValue::Pair(p), 0.0)?;
                    worst = worst.max((m.norm / x.norm2() - 1.0).abs());
                }
            }
        }
        Ok((worst, Vec::new()))
    })?;

    rec.run("domain_ratio_band", Comparison::Below, 50.0, || {
        let mut curve = Vec::new();
        for &dim in &dims {
            let c = WeightedCouple::new(weight_families(dim)?.remove(0).1);
            let two_log: Vec<f64> = c.log_weights().iter().map(|l| 2.0 * l.abs()).collect();
            let x = power_family(dim, 0.75);
            let om = weighted_omega(&c, WeightedLevel::Om10, &WeightedValue::Vector(x.clone()))?;
            let domain = om.vector().expect("vector").norm2() + x.norm2();
            curve.push(CurvePoint {
                dim,
                value: domain / weighted_l2_norm(&x, &two_log)?,
            });
        }
        Ok((band(&curve), curve))
    })
}

/// Vectors with entries in `{−1, 0, 1}` whose support sizes are spread
/// log-uniformly over `1..=dim`.
pub fn sparse_sign_vector(rng: &mut ChaCha8Rng, dim: usize) -> SeqVector {
    let k = ((dim as f64).powf(rng.gen::<f64>()).round() as usize).clamp(1, dim);
    let mut v = vec![0.0; dim];
    for i in rand::seq::index::sample(rng, dim, k) {
        v[i] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    }
    SeqVector::from_vec_unchecked(v)
}

/// Mean of `‖Ω₁,₀x − Lx‖₂/‖x‖₂` for the least-squares linear map `L`
/// fitted on `count` sparse sign vectors in dimension `dim`.
pub fn linear_fit_residual(dim: usize, count: usize, seed: u64) -> Result<f64> {
    let mut x = DMatrix::zeros(dim, count);
    let mut y = DMatrix::zeros(dim, count);
    for k in 0..count {
        let v = sparse_sign_vector(&mut trial_rng(seed, k as u64), dim);
        let o = omega10(&v);
        x.column_mut(k).copy_from_slice(v.as_slice());
        y.column_mut(k).copy_from_slice(o.as_slice());
    }
    // L = Y Xᵀ (X Xᵀ)⁻¹, i.e. (X Xᵀ) Lᵀ = X Yᵀ
    let gram = &x * x.transpose();
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::InvalidConfig("sample Gram matrix is singular".into()))?;
    let lt = chol.solve(&(&x * y.transpose()));
    let resid = y - lt.transpose() * &x;
    let mut total = 0.0;
    for k in 0..count {
        total += resid.column(k).norm() / x.column(k).norm();
    }
    Ok(total / count as f64)
}

/// Least-squares slope of `ln value` against `ln dim`.
pub fn log_log_slope(curve: &[CurvePoint]) -> f64 {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .map(|p| ((p.dim as f64).ln(), p.value.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Sample count per dimension: enough columns for the fit to be overdetermined.
pub fn nontriviality_count(dim: usize, samples: usize) -> usize {
    samples.max(4 * dim)
}

fn nontriviality_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let dims = rec.cfg.dims.clone();
    let samples = rec.cfg.samples;
    if dims.len() < 2 {
        return Err(Error::InvalidConfig(
            "nontriviality needs at least two dimensions".into(),
        ));
    }
    rec.run("fit_residual_slope", Comparison::Above, 0.0, || {
        let curve = dims
            .iter()
            .map(|&dim| {
                let s = sub_seed(seed, &format!("fit/{dim}"));
                Ok(CurvePoint {
                    dim,
                    value: linear_fit_residual(dim, nontriviality_count(dim, samples), s)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((log_log_slope(&curve), curve))
    })
}

/// Rounds every float to 12 significant digits and drops non-finite values.
fn canonical_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonical_json(v))).collect()),
        other => other,
    }
}

/// Bit-stable JSON text: sorted keys, floats at 12 significant digits.
pub fn report_json(r: &Report) -> Result<String> {
    let value = serde_json::to_value(r).map_err(|e| Error::Io(e.to_string()))?;
    let mut text =
        serde_json::to_string_pretty(&canonical_json(value)).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// `dim,check,value` rows for every curve point.
pub fn curves_csv(r: &Report) -> String {
    let mut out = String::from("dim,check,value\n");
    for c in &r.checks {
        for p in &c.curve {
            out.push_str(&format!("{},{},{:.11e}\n", p.dim, c.name, p.value));
        }
    }
    out
}

/// Writes `report.json` and `curves.csv` into the directory `path`, or the
/// JSON alone to stdout when `path` is `-`.
pub fn emit_report(r: &Report, path: &str) -> Result<()> {
    let json = report_json(r)?;
    if path == "-" {
        std::io::stdout().lock().write_all(json.as_bytes())?;
        return Ok(());
    }
    let dir = Path::new(path);
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), json)?;
    fs::write(dir.join("curves.csv"), curves_csv(r))?;
    Ok(())
}
