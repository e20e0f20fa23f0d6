//! The six `3×3` diagrams `[abc]` generated by the interpolators
//! `(Δ_a, Δ_b, Δ_c)`, and the block-basis operators `τ_U`, `S_U`, `R_U`
//! together with the projection onto the range of `R_U`.
//!
//! Diagram layout (rows and columns are exact):
//!
//! ```text
//! kernel        ══  kernel
//!   │ j               │ k
//! middle_left ─l→  center ─s→ middle_right
//!   │ q               │ r         ║
//! bottom_left ─i→ bottom_middle ─p→ bottom_right
//! ```

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orlicz::{luxemburg_norm, OrliczFunction};
use crate::rng::trial_rng;
use crate::seq::SeqVector;
use crate::twisted::{omega21_0, z3_quasinorm, Twisted2, Twisted3};

/// The spaces that occur in the six diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    L2,
    Lf,
    Lg,
    LfDual,
    LgDual,
    Z2,
    Z3,
    Wedge,
    Circle,
    WedgeDual,
    CircleDual,
}

impl Space {
    pub fn symbol(self) -> &'static str {
        match self {
            Space::L2 => "ℓ₂",
            Space::Lf => "ℓ_f",
            Space::Lg => "ℓ_g",
            Space::LfDual => "ℓ_f*",
            Space::LgDual => "ℓ_g*",
            Space::Z2 => "Z₂",
            Space::Z3 => "Z₃",
            Space::Wedge => "∧",
            Space::Circle => "◯",
            Space::WedgeDual => "∧*",
            Space::CircleDual => "◯*",
        }
    }
}

/// The seven corner spaces of one diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerLabels {
    /// `Δ_a(ker Δ_b ∩ ker Δ_c)`
    pub kernel: Space,
    /// `⟨Δ_a, Δ_b⟩(ker Δ_c)`
    pub middle_left: Space,
    /// `⟨Δ_a, Δ_b, Δ_c⟩(𝒞)`
    pub center: Space,
    /// `Δ_c(𝒞)`
    pub middle_right: Space,
    /// `Δ_b(ker Δ_c)`
    pub bottom_left: Space,
    /// `⟨Δ_b, Δ_c⟩(𝒞)`
    pub bottom_middle: Space,
    /// `Δ_c(𝒞)` again
    pub bottom_right: Space,
}

/// One of the six diagrams, keyed by the permutation `(a, b, c)` of `(2, 1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramSpec {
    perm: [u8; 3],
    labels: CornerLabels,
}

impl DiagramSpec {
    pub fn new(perm: [u8; 3]) -> Result<Self> {
        use Space::*;
        let row = |k, ml, mr, bl, bm| CornerLabels {
            kernel: k,
            middle_left: ml,
            center: Z3,
            middle_right: mr,
            bottom_left: bl,
            bottom_middle: bm,
            bottom_right: mr,
        };
        let labels = match perm {
            [2, 1, 0] => row(L2, Z2, L2, L2, Z2),
            [0, 1, 2] => row(Lg, Circle, LgDual, L2, CircleDual),
            [1, 2, 0] => row(Lf, Z2, L2, LfDual, WedgeDual),
            [1, 0, 2] => row(Lf, Circle, LgDual, Lf, WedgeDual),
            [2, 0, 1] => row(L2, Wedge, LfDual, Lf, Z2),
            [0, 2, 1] => row(Lg, Wedge, LfDual, LfDual, CircleDual),
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "{perm:?} is not a permutation of (2, 1, 0)"
                )))
            }
        };
        Ok(DiagramSpec { perm, labels })
    }

    /// All six diagrams in the order `[210], [012], [120], [102], [201], [021]`.
    pub fn all() -> Vec<DiagramSpec> {
        [[2, 1, 0], [0, 1, 2], [1, 2, 0], [1, 0, 2], [2, 0, 1], [0, 2, 1]]
            .into_iter()
            .map(|p| DiagramSpec::new(p).expect("valid permutation"))
            .collect()
    }

    pub fn perm(&self) -> [u8; 3] {
        self.perm
    }

    pub fn labels(&self) -> &CornerLabels {
        &self.labels
    }

    /// `"210"`-style name.
    pub fn name(&self) -> String {
        self.perm.iter().map(|d| char::from(b'0' + d)).collect()
    }

    /// Generator of the central column: `Ω_{a,⟨b,c⟩}`.
    pub fn column_generator(&self) -> String {
        let [a, b, c] = self.perm;
        format!("Ω_{{{a},⟨{b},{c}⟩}}")
    }

    /// Generator of the central row: `Ω_{⟨a,b⟩,c}`.
    pub fn row_generator(&self) -> String {
        let [a, b, c] = self.perm;
        format!("Ω_{{⟨{a},{b}⟩,{c}}}")
    }
}

/// A point of one of the diagram corners, as a raw coordinate tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Single(SeqVector),
    Pair(SeqVector, SeqVector),
    Triple(SeqVector, SeqVector, SeqVector),
}

impl Element {
    fn max_abs_diff(&self, other: &Element) -> f64 {
        use Element::*;
        let d = |a: &SeqVector, b: &SeqVector| a.max_abs_diff(b).unwrap_or(f64::INFINITY);
        match (self, other) {
            (Single(a), Single(b)) => d(a, b),
            (Pair(a1, a2), Pair(b1, b2)) => d(a1, b1).max(d(a2, b2)),
            (Triple(a1, a2, a3), Triple(b1, b2, b3)) => d(a1, b1).max(d(a2, b2)).max(d(a3, b3)),
            _ => f64::INFINITY,
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            Element::Single(a) => a.norm_inf(),
            Element::Pair(a, b) => a.norm_inf().max(b.norm_inf()),
            Element::Triple(a, b, c) => a.norm_inf().max(b.norm_inf()).max(c.norm_inf()),
        }
    }
}

/// The eight maps of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapId {
    J,
    K,
    L,
    Q,
    I,
    S,
    R,
    P,
}

impl MapId {
    fn letter(self) -> char {
        match self {
            MapId::J => 'j',
            MapId::K => 'k',
            MapId::L => 'l',
            MapId::Q => 'q',
            MapId::I => 'i',
            MapId::S => 's',
            MapId::R => 'r',
            MapId::P => 'p',
        }
    }
}

/// Applies one diagram map to a coordinate tuple.
///
/// The maps are the same coordinate inclusions and projections for every
/// permutation; only the spaces they act between differ.
pub fn diagram_maps(_spec: &DiagramSpec, element: &Element, map: MapId) -> Result<Element> {
    use Element::*;
    let zero = |v: &SeqVector| SeqVector::zeros(v.dim());
    let mismatch = |expected| Error::ShapeMismatch {
        map: map.letter(),
        expected,
    };
    match (map, element) {
        (MapId::J | MapId::I, Single(h)) => Ok(Pair(h.clone(), zero(h))),
        (MapId::K, Single(h)) => Ok(Triple(h.clone(), zero(h), zero(h))),
        (MapId::L, Pair(g1, g2)) => Ok(Triple(g1.clone(), g2.clone(), zero(g1))),
        (MapId::Q | MapId::P, Pair(_, g2)) => Ok(Single(g2.clone())),
        (MapId::S, Triple(_, _, f3)) => Ok(Single(f3.clone())),
        (MapId::R, Triple(_, f2, f3)) => Ok(Pair(f2.clone(), f3.clone())),
        (MapId::J | MapId::I | MapId::K, _) => Err(mismatch("single vector")),
        (MapId::L | MapId::Q | MapId::P, _) => Err(mismatch("pair")),
        (MapId::S | MapId::R, _) => Err(mismatch("triple")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub dim: usize,
    pub value: f64,
}

/// `{diagram, checks, ratios}` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub diagram: String,
    pub checks: Vec<CheckRecord>,
    pub ratios: Vec<RatioPoint>,
}

impl DiagramReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.max_deviation))
    }
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> SeqVector {
    SeqVector::from_vec_unchecked((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// Verifies every composable identity of the diagram on random elements.
pub fn check_diagram_identities(
    spec: &DiagramSpec,
    samples: usize,
    dim: usize,
    seed: u64,
) -> Result<DiagramReport> {
    use Element::*;
    use MapId::*;
    if samples == 0 || dim == 0 {
        return Err(Error::InvalidConfig("samples and dim must be positive".into()));
    }
    let m = |e: &Element, id| diagram_maps(spec, e, id);
    let zero = SeqVector::zeros(dim);
    let zero_pair = Pair(zero.clone(), zero.clone());

    type Check<'a> = (&'a str, Box<dyn Fn(&[SeqVector; 3]) -> Result<f64> + 'a>);
    let checks: Vec<Check> = vec![
        ("l∘j = k", Box::new(|v| {
            let h = Single(v[0].clone());
            Ok(m(&m(&h, J)?, L)?.max_abs_diff(&m(&h, K)?))
        })),
        ("r∘k = 0", Box::new(|v| {
            Ok(m(&m(&Single(v[0].clone()), K)?, R)?.max_abs_diff(&zero_pair))
        })),
        ("s∘k = 0", Box::new(|v| Ok(m(&m(&Single(v[0].clone()), K)?, S)?.max_abs()))),
        ("s∘l = 0", Box::new(|v| {
            Ok(m(&m(&Pair(v[0].clone(), v[1].clone()), L)?, S)?.max_abs())
        })),
        ("q∘j = 0", Box::new(|v| Ok(m(&m(&Single(v[0].clone()), J)?, Q)?.max_abs()))),
        ("p∘i = 0", Box::new(|v| Ok(m(&m(&Single(v[0].clone()), I)?, P)?.max_abs()))),
        ("r∘l = i∘q", Box::new(|v| {
            let g = Pair(v[0].clone(), v[1].clone());
            Ok(m(&m(&g, L)?, R)?.max_abs_diff(&m(&m(&g, Q)?, I)?))
        })),
        ("p∘r = s", Box::new(|v| {
            let f = Triple(v[0].clone(), v[1].clone(), v[2].clone());
            Ok(m(&m(&f, R)?, P)?.max_abs_diff(&m(&f, S)?))
        })),
        ("ker r = im k", Box::new(|v| {
            let f = Triple(v[0].clone(), zero.clone(), zero.clone());
            let pre = m(&m(&f, R)?, Q)?.max_abs();
            Ok(pre.max(m(&Single(v[0].clone()), K)?.max_abs_diff(&f)))
        })),
        ("ker s = im l", Box::new(|v| {
            let f = Triple(v[0].clone(), v[1].clone(), zero.clone());
            let pre = m(&f, S)?.max_abs();
            Ok(pre.max(m(&Pair(v[0].clone(), v[1].clone()), L)?.max_abs_diff(&f)))
        })),
        ("ker q = im j", Box::new(|v| {
            let g = Pair(v[0].clone(), zero.clone());
            let pre = m(&g, Q)?.max_abs();
            Ok(pre.max(m(&Single(v[0].clone()), J)?.max_abs_diff(&g)))
        })),
        ("ker p = im i", Box::new(|v| {
            let g = Pair(v[1].clone(), zero.clone());
            let pre = m(&g, P)?.max_abs();
            Ok(pre.max(m(&Single(v[1].clone()), I)?.max_abs_diff(&g)))
        })),
        ("r onto", Box::new(|v| {
            let target = Pair(v[1].clone(), v[2].clone());
            let lift = Triple(zero.clone(), v[1].clone(), v[2].clone());
            Ok(m(&lift, R)?.max_abs_diff(&target))
        })),
        ("s onto", Box::new(|v| {
            let lift = Triple(zero.clone(), zero.clone(), v[2].clone());
            Ok(m(&lift, S)?.max_abs_diff(&Single(v[2].clone())))
        })),
    ];

    let mut report = DiagramReport {
        diagram: spec.name(),
        checks: Vec::with_capacity(checks.len()),
        ratios: Vec::new(),
    };
    for (ci, (name, check)) in checks.iter().enumerate() {
        let mut worst = 0.0f64;
        for t in 0..samples {
            let mut rng = trial_rng(seed, (ci * samples + t) as u64);
            let v = [
                random_vec(&mut rng, dim),
                random_vec(&mut rng, dim),
                random_vec(&mut rng, dim),
            ];
            worst = worst.max(check(&v)?);
        }
        report.checks.push(CheckRecord {
            name: name.to_string(),
            max_deviation: worst,
        });
    }
    Ok(report)
}

/// Normalized, disjointly supported blocks `u₁, u₂, …` in a common ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBasis {
    blocks: Vec<SeqVector>,
    ambient: usize,
}

impl BlockBasis {
    pub fn new(blocks: Vec<SeqVector>) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidBlocks("no blocks".into()))?;
        let ambient = first.dim();
        let mut owner = vec![usize::MAX; ambient];
        for (n, b) in blocks.iter().enumerate() {
            if b.dim() != ambient {
                return Err(Error::InvalidBlocks(format!(
                    "block {n} has dimension {} instead of {ambient}",
                    b.dim()
                )));
            }
            if (b.norm2() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidBlocks(format!(
                    "block {n} has norm {} instead of 1",
                    b.norm2()
                )));
            }
            for (i, &c) in b.as_slice().iter().enumerate() {
                if c != 0.0 {
                    if owner[i] != usize::MAX {
                        return Err(Error::InvalidBlocks(format!(
                            "blocks {} and {n} overlap at coordinate {i}",
                            owner[i]
                        )));
                    }
                    owner[i] = n;
                }
            }
        }
        Ok(BlockBasis { blocks, ambient })
    }

    /// `uₙ = eₙ`.
    pub fn canonical(count: usize) -> Self {
        let blocks = (0..count).map(|n| SeqVector::unit(count, n)).collect();
        BlockBasis {
            blocks,
            ambient: count,
        }
    }

    /// Consecutive copies of one profile, normalized: block `n` occupies
    /// coordinates `n·len .. (n+1)·len`.
    pub fn repeated(count: usize, profile: &[f64]) -> Result<Self> {
        let len = profile.len();
        let norm = crate::seq::l2(profile);
        if len == 0 || norm == 0.0 {
            return Err(Error::InvalidBlocks("empty profile".into()));
        }
        let ambient = count * len;
        let blocks = (0..count)
            .map(|n| {
                let mut c = vec![0.0; ambient];
                for (k, p) in profile.iter().enumerate() {
                    c[n * len + k] = p / norm;
                }
                SeqVector::new(c)
            })
            .collect::<Result<Vec<_>>>()?;
        BlockBasis::new(blocks)
    }

    /// `uₙ = (e_{2n−1} + e_{2n})/√2`.
    pub fn equal_pairs(count: usize) -> Self {
        Self::repeated(count, &[1.0, 1.0]).expect("valid profile")
    }

    /// Consecutive blocks with random lengths in `1..=max_len` and random
    /// coordinates (positive if `positive`).
    pub fn random(count: usize, max_len: usize, positive: bool, rng: &mut impl Rng) -> Self {
        let lens: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=max_len)).collect();
        let ambient: usize = lens.iter().sum();
        let mut start = 0;
        let blocks = lens
            .iter()
            .map(|&len| {
                let mut c = vec![0.0; ambient];
                for slot in c.iter_mut().skip(start).take(len) {
                    let mag = rng.gen_range(0.1..1.0);
                    *slot = if positive || rng.gen_bool(0.5) { mag } else { -mag };
                }
                start += len;
                let n = crate::seq::l2(&c);
                SeqVector::from_vec_unchecked(c.into_iter().map(|v| v / n).collect())
            })
            .collect();
        BlockBasis::new(blocks).expect("disjoint normalized blocks")
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn blocks(&self) -> &[SeqVector] {
        &self.blocks
    }

    fn need(&self, dim: usize) -> Result<()> {
        if dim > self.len() {
            return Err(Error::TooFewBlocks {
                needed: dim,
                available: self.len(),
            });
        }
        Ok(())
    }

    /// `Σ aₙ gen(uₙ)` for a generator image `gen`.
    fn combine(&self, coeffs: &SeqVector, gen: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient];
        for (a, u) in coeffs.as_slice().iter().zip(&self.blocks) {
            if *a == 0.0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(u.as_slice()) {
                if c != 0.0 {
                    *o += a * gen(c);
                }
            }
        }
        out
    }
}

fn gen_u(c: f64) -> f64 {
    c
}

/// `2u log|u|`
fn gen_ulog(c: f64) -> f64 {
    2.0 * c * c.abs().ln()
}

/// `2u log²|u|`
fn gen_ulog2(c: f64) -> f64 {
    2.0 * c * c.abs().ln().powi(2)
}

fn add_into(a: &mut [f64], b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// `τ_U(eₙ) = uₙ`.
pub fn tau_u(u: &BlockBasis, a: &SeqVector) -> Result<SeqVector> {
    u.need(a.dim())?;
    Ok(SeqVector::from_vec_unchecked(u.combine(a, gen_u)))
}

/// `S_U(eₙ, 0) = (uₙ, 0)`, `S_U(0, eₙ) = (Ω₁,₀uₙ, uₙ)`.
pub fn block_operator_s(u: &BlockBasis, v: &Twisted2) -> Result<Twisted2> {
    u.need(v.dim())?;
    let mut top = u.combine(&v.y, gen_u);
    add_into(&mut top, &u.combine(&v.x, gen_ulog));
    Ok(Twisted2 {
        y: SeqVector::from_vec_unchecked(top),
        x: SeqVector::from_vec_unchecked(u.combine(&v.x, gen_u)),
    })
}

/// The upper-triangular operator with rows `(u, 2u log u, 2u log² u)`,
/// `(0, u, 2u log u)`, `(0, 0, u)`.
pub fn block_operator_r(u: &BlockBasis, v: &Twisted3) -> Result<Twisted3> {
    u.need(v.dim())?;
    let mut w = u.combine(&v.w, gen_u);
    add_into(&mut w, &u.combine(&v.y, gen_ulog));
    add_into(&mut w, &u.combine(&v.x, gen_ulog2));
    let mut y = u.combine(&v.y, gen_u);
    add_into(&mut y, &u.combine(&v.x, gen_ulog));
    Ok(Twisted3 {
        w: SeqVector::from_vec_unchecked(w),
        y: SeqVector::from_vec_unchecked(y),
        x: SeqVector::from_vec_unchecked(u.combine(&v.x, gen_u)),
    })
}

/// Matrix of `R_U′` from block coordinates `(ℝ^K)³` into `(ℝ^N)³`, slot order `(w, y, x)`.
pub fn r_matrix(u: &BlockBasis, trunc_dim: usize) -> Result<DMatrix<f64>> {
    if u.ambient_dim() > trunc_dim {
        return Err(Error::InvalidBlocks(format!(
            "blocks live in dimension {} > truncation {trunc_dim}",
            u.ambient_dim()
        )));
    }
    let (k, n) = (u.len(), trunc_dim);
    let mut m = DMatrix::zeros(3 * n, 3 * k);
    for (b, block) in u.blocks().iter().enumerate() {
        for (i, &c) in block.as_slice().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (g1, g2, g3) = (gen_u(c), gen_ulog(c), gen_ulog2(c));
            // column (eₙ, 0, 0)
            m[(i, b)] = g1;
            // column (0, eₙ, 0)
            m[(i, k + b)] = g2;
            m[(n + i, k + b)] = g1;
            // column (0, 0, eₙ)
            m[(i, 2 * k + b)] = g3;
            m[(n + i, 2 * k + b)] = g2;
            m[(2 * n + i, 2 * k + b)] = g1;
        }
    }
    Ok(m)
}

/// Gram matrix of the `U₃` pairing on `(ℝ^n)³`.
pub fn u3_gram(n: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(3 * n, 3 * n);
    for i in 0..n {
        g[(i, 2 * n + i)] = 1.0;
        g[(2 * n + i, i)] = 1.0;
        g[(n + i, n + i)] = -1.0;
    }
    g
}

/// `D_U = (R_U′)ᵀ D R_U′`, the pairing pulled back to block coordinates.
/// The block pairing identity says this equals `u3_gram(K)`.
pub fn block_gram(u: &BlockBasis) -> DMatrix<f64> {
    let m = r_matrix(u, u.ambient_dim()).expect("ambient fits");
    m.transpose() * u3_gram(u.ambient_dim()) * m
}

/// Largest deviation from `δ_in − δ_jm + δ_kl` over all generator triples
/// `(e_i, e_j, e_k)`, `(e_l, e_m, e_n)` with indices below `max_index`.
pub fn pairing_identity_deviation(u: &BlockBasis, max_index: usize) -> f64 {
    let k = u.len();
    let top = max_index.min(k);
    let g = block_gram(u);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut worst = 0.0f64;
    for i in 0..top {
        for j in 0..top {
            for kk in 0..top {
                let a = [i, k + j, 2 * k + kk];
                for l in 0..top {
                    for m in 0..top {
                        for n in 0..top {
                            let b = [l, k + m, 2 * k + n];
                            let mut s = 0.0;
                            for &p in &a {
                                for &q in &b {
                                    s += g[(p, q)];
                                }
                            }
                            let expect = delta(i, n) - delta(j, m) + delta(kk, l);
                            worst = worst.max((s - expect).abs());
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Matrix of the projection `R_U′ D_U⁻¹ (R_U′)ᵀ D` on `(ℝ^N)³`.
pub fn projection_matrix(u: &BlockBasis, trunc_dim: usize) -> Result<DMatrix<f64>> {
    let m = r_matrix(u, trunc_dim)?;
    let g = u3_gram(trunc_dim);
    let d_u = m.transpose() * &g * &m;
    let lu = d_u.lu();
    let rhs = m.transpose() * &g;
    let solved = lu
        .solve(&rhs)
        .ok_or(Error::SingularBlockForm(trunc_dim))?;
    if solved.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularBlockForm(trunc_dim));
    }
    Ok(m * solved)
}

/// Projects `v ∈ (ℝ^N)³` onto the range of `R_U`.
pub fn projection_onto_ru(u: &BlockBasis, v: &Twisted3, trunc_dim: usize) -> Result<Twisted3> {
    if v.dim() != trunc_dim {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: trunc_dim,
        });
    }
    let p = projection_matrix(u, trunc_dim)?;
    let out = p * DVector::from_vec(v.to_flat());
    Twisted3::from_flat(out.as_slice())
}

/// Max deviation in the commutative squares of `S_U` and `R_U` over random inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutativityReport {
    /// `S_U` against `τ_U` on the sequence `ℓ₂ → Z₂ → ℓ₂`.
    pub square_s: f64,
    /// `R_U` against `S_U` and `τ_U` on the sequence `Z₂ → Z₃ → ℓ₂`.
    pub square_r: f64,
}

impl CommutativityReport {
    pub fn max_deviation(&self) -> f64 {
        self.square_s.max(self.square_r)
    }
}

pub fn commutativity_check_12_13(
    u: &BlockBasis,
    samples: usize,
    seed: u64,
) -> Result<CommutativityReport> {
    let k = u.len();
    let mut report = CommutativityReport {
        square_s: 0.0,
        square_r: 0.0,
    };
    let zero_k = SeqVector::zeros(k);
    let zero_n = SeqVector::zeros(u.ambient_dim());
    for t in 0..samples {
        let mut rng = trial_rng(seed, t as u64);
        let (a, b, c) = (
            random_vec(&mut rng, k),
            random_vec(&mut rng, k),
            random_vec(&mut rng, k),
        );
        // ℓ₂ → Z₂: a ↦ (a, 0), then S_U versus (τ a, 0)
        let left = block_operator_s(u, &Twisted2::new(a.clone(), zero_k.clone())?)?;
        let right = Twisted2::new(tau_u(u, &a)?, zero_n.clone())?;
        let mut dev = left.max_abs_diff(&right)?;
        // Z₂ → ℓ₂: (y, x) ↦ x, against τ_U
        let s = block_operator_s(u, &Twisted2::new(a.clone(), b.clone())?)?;
        dev = dev.max(s.x.max_abs_diff(&tau_u(u, &b)?)?);
        report.square_s = report.square_s.max(dev);

        // Z₂ → Z₃: (w, y) ↦ (w, y, 0), R_U versus S_U
        let r = block_operator_r(u, &Twisted3::new(a.clone(), b.clone(), zero_k.clone())?)?;
        let s = block_operator_s(u, &Twisted2::new(a.clone(), b.clone())?)?;
        let mut dev = r.w.max_abs_diff(&s.y)?.max(r.y.max_abs_diff(&s.x)?);
        dev = dev.max(r.x.norm_inf());
        // Z₃ → ℓ₂: (w, y, x) ↦ x, against τ_U
        let r = block_operator_r(u, &Twisted3::new(a, b, c.clone())?)?;
        dev = dev.max(r.x.max_abs_diff(&tau_u(u, &c)?)?);
        report.square_r = report.square_r.max(dev);
    }
    Ok(report)
}

/// Outcome of the block identity `xΩu − Ω(xu) = (−2xu(log²x + 2 log x log u), −2xu log x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqInZ3Report {
    /// Max coordinatewise difference between the two sides.
    pub residual: f64,
    /// `‖(xΩ⟨2,1⟩,₀u, xu)‖_{Z₃} / ‖x‖_{ℓ_g}`
    pub ratio: f64,
}

/// Evaluates both sides of the block identity for positive blocks and a
/// positive coefficient sequence, normalized so that `‖xu‖₂ = 1`.
pub fn seqinz3_identity(u: &BlockBasis, x: &SeqVector) -> Result<SeqInZ3Report> {
    u.need(x.dim())?;
    if x.as_slice().iter().any(|&c| c <= 0.0) {
        return Err(Error::NonPositive);
    }
    let blocks = &u.blocks()[..x.dim()];
    if blocks.iter().any(|b| b.as_slice().iter().any(|&c| c < 0.0)) {
        return Err(Error::NonPositive);
    }
    let x = x.scale(1.0 / x.norm2());
    let n = u.ambient_dim();

    // x·Ω⟨2,1⟩,₀u = Σ xₙ Ω⟨2,1⟩,₀(uₙ)
    let mut lhs_w = vec![0.0; n];
    let mut lhs_y = vec![0.0; n];
    for (xn, b) in x.as_slice().iter().zip(blocks) {
        let o = omega21_0(b);
        for i in 0..n {
            lhs_w[i] += xn * o.y[i];
            lhs_y[i] += xn * o.x[i];
        }
    }
    let xu = tau_u(u, &x)?;
    let o = omega21_0(&xu);
    for i in 0..n {
        lhs_w[i] -= o.y[i];
        lhs_y[i] -= o.x[i];
    }

    let mut rhs_w = vec![0.0; n];
    let mut rhs_y = vec![0.0; n];
    for (xn, b) in x.as_slice().iter().zip(blocks) {
        let lx = xn.ln();
        for (i, &c) in b.as_slice().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let lu = c.ln();
            rhs_w[i] = -2.0 * xn * c * (lx * lx + 2.0 * lx * lu);
            rhs_y[i] = -2.0 * xn * c * lx;
        }
    }
    let residual = lhs_w
        .iter()
        .zip(&rhs_w)
        .chain(lhs_y.iter().zip(&rhs_y))
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    let mut top_w = vec![0.0; n];
    let mut top_y = vec![0.0; n];
    for (xn, b) in x.as_slice().iter().zip(blocks) {
        let o = omega21_0(b);
        for i in 0..n {
            top_w[i] += xn * o.y[i];
            top_y[i] += xn * o.x[i];
        }
    }
    let triple = Twisted3::new(
        SeqVector::from_vec_unchecked(top_w),
        SeqVector::from_vec_unchecked(top_y),
        xu,
    )?;
    let ratio = z3_quasinorm(&triple) / luxemburg_norm(&OrliczFunction::g(), &x);
    Ok(SeqInZ3Report { residual, ratio })
}
