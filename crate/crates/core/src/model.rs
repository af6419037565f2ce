//! Linear color-equivariant message passing over per-node color beliefs.
//!
//! A layer maps the `n x k` belief matrix `H` to
//!
//! ```text
//! H' = λC·H + γC·(H 1)1ᵀ + λA·(A H) + γA·(A H 1)1ᵀ + β·11ᵀ
//! ```
//!
//! where `A` is the adjacency matrix. Every weight matrix is of the form
//! `λI + γ11ᵀ`, which commutes with any color permutation, so permuting the
//! input columns permutes the output columns identically. Row sums are taken
//! in a canonical value order so that this holds bit for bit.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::graph::{ColorAssignment, Graph};
use crate::scalar::{canonical_sum, Scalar};

/// Rows above this many cells are computed on the rayon pool.
const PAR_CELLS: usize = 1 << 14;

/// Dense row-major `n x k` matrix; row `v` is the color belief of node `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix<T> {
    n: usize,
    k: usize,
    data: Vec<T>,
}

impl<T: Scalar> EmbeddingMatrix<T> {
    pub fn zeros(n: usize, k: usize) -> Self {
        EmbeddingMatrix {
            n,
            k,
            data: vec![T::zero(); n * k],
        }
    }

    pub fn from_vec(n: usize, k: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * k {
            return Err(Error::Dimension(format!(
                "{} values for a {n}x{k} matrix",
                data.len()
            )));
        }
        Ok(EmbeddingMatrix { n, k, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let k = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(EmbeddingMatrix {
            n: rows.len(),
            k,
            data: rows.concat(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[T] {
        &self.data[v * self.k..(v + 1) * self.k]
    }

    #[inline]
    pub fn row_mut(&mut self, v: usize) -> &mut [T] {
        &mut self.data[v * self.k..(v + 1) * self.k]
    }

    #[inline]
    pub fn get(&self, v: usize, j: usize) -> T {
        self.data[v * self.k + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &x| if x.abs() > acc { x.abs() } else { acc })
    }

    /// `alpha * self + beta * other`, entrywise.
    pub fn axpby(&self, alpha: T, other: &Self, beta: T) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Dimension("axpby shape mismatch".into()));
        }
        Ok(EmbeddingMatrix {
            n: self.n,
            k: self.k,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        })
    }

    /// Row-wise softmax, shifted by the row maximum.
    pub fn softmax_rows(&self) -> Self {
        let mut out = self.clone();
        for v in 0..self.n {
            let row = out.row_mut(v);
            let max = row.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
            let mut total = T::zero();
            for x in row.iter_mut() {
                *x = (*x - max).exp();
                total = total + *x;
            }
            for x in row.iter_mut() {
                *x = *x / total;
            }
        }
        out
    }
}

/// The five trainable scalars of one layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerParams<T> {
    pub lambda_c: T,
    pub gamma_c: T,
    pub lambda_a: T,
    pub gamma_a: T,
    pub beta: T,
}

impl<T: Scalar> LayerParams<T> {
    pub fn new(lambda_c: T, gamma_c: T, lambda_a: T, gamma_a: T, beta: T) -> Self {
        LayerParams {
            lambda_c,
            gamma_c,
            lambda_a,
            gamma_a,
            beta,
        }
    }

    /// Keep the node's own belief and subtract the neighbors' beliefs.
    pub fn default_init() -> Self {
        Self::new(T::one(), T::zero(), -T::one(), T::zero(), T::zero())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn to_array(self) -> [T; 5] {
        [
            self.lambda_c,
            self.gamma_c,
            self.lambda_a,
            self.gamma_a,
            self.beta,
        ]
    }

    pub fn from_array(a: [T; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

/// Per-layer parameters of a depth-`L` network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GdnParams<T> {
    layers: Vec<LayerParams<T>>,
}

impl<T: Scalar> GdnParams<T> {
    pub fn new(layers: Vec<LayerParams<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument("network needs at least one layer".into()));
        }
        if let Some(i) = layers.iter().position(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument(format!("layer {i} has a non-finite scalar")));
        }
        Ok(GdnParams { layers })
    }

    /// `(λC, γC, λA, γA, β) = (1, 0, -1, 0, 0)` in every layer.
    pub fn default_init(depth: usize) -> Result<Self> {
        Self::new(vec![LayerParams::default_init(); depth])
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[LayerParams<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [LayerParams<T>] {
        &mut self.layers
    }

    /// Scalars in layer-major order, five per layer.
    pub fn flatten(&self) -> Vec<T> {
        self.layers.iter().flat_map(|l| l.to_array()).collect()
    }

    pub fn from_flat(values: &[T]) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(5) {
            return Err(Error::Dimension(format!(
                "{} scalars do not form whole layers",
                values.len()
            )));
        }
        Self::new(
            values
                .chunks_exact(5)
                .map(|c| LayerParams::from_array([c[0], c[1], c[2], c[3], c[4]]))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    depth: usize,
    layers: Vec<[f64; 5]>,
}

impl GdnParams<f64> {
    pub fn to_json(&self) -> String {
        let file = ParamsFile {
            depth: self.depth(),
            layers: self.layers.iter().map(|l| l.to_array()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("params serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ParamsFile = serde_json::from_str(text)?;
        if file.depth != file.layers.len() {
            return Err(Error::InvalidArgument(format!(
                "depth {} but {} layers listed",
                file.depth,
                file.layers.len()
            )));
        }
        Self::new(file.layers.into_iter().map(LayerParams::from_array).collect())
    }

    /// Short stable digest of the exact parameter bits.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for x in self.flatten() {
            hasher.update(x.to_bits().to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// A bijection on color indices `0..k`; color `i` maps to `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPermutation {
    perm: Vec<usize>,
}

impl ColorPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(ColorPermutation { perm })
    }

    pub fn identity(k: usize) -> Self {
        ColorPermutation {
            perm: (0..k).collect(),
        }
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(a, b);
        ColorPermutation { perm }
    }

    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(rng);
        ColorPermutation { perm }
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    #[inline]
    pub fn apply(&self, color: usize) -> usize {
        self.perm[color]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        ColorPermutation { perm: inv }
    }
}

/// Nodes whose initial belief is fixed to a single color.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinSet {
    pins: BTreeMap<usize, usize>,
}

impl PinSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, node: usize, color: usize) -> Option<usize> {
        self.pins.insert(node, color)
    }

    pub fn get(&self, node: usize) -> Option<usize> {
        self.pins.get(&node).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pins.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pins.iter().map(|(&v, &c)| (v, c))
    }

    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        for (v, c) in self.iter() {
            if v >= n {
                return Err(Error::InvalidArgument(format!("pinned node {v} >= n = {n}")));
            }
            if c >= k {
                return Err(Error::ColorOutOfRange { node: v, color: c, k });
            }
        }
        Ok(())
    }

    /// The same pins with every color relabelled by `perm`.
    pub fn permuted(&self, perm: &ColorPermutation) -> Self {
        PinSet {
            pins: self.pins.iter().map(|(&v, &c)| (v, perm.apply(c))).collect(),
        }
    }
}

impl FromIterator<(usize, usize)> for PinSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        PinSet {
            pins: iter.into_iter().collect(),
        }
    }
}

/// Centered one-hot row for `color`.
pub fn pinned_row<T: Scalar>(k: usize, color: usize) -> Vec<T> {
    let shift = T::one() / T::of(k as f64);
    (0..k)
        .map(|j| if j == color { T::one() - shift } else { -shift })
        .collect()
}

/// Random centered color distributions.
///
/// Unpinned rows are `p - 1/k` with `p` uniform on the simplex (normalized
/// unit exponentials); pinned rows are centered one-hots. Random draws are
/// made for every node, pinned or not, so changing the pins never shifts the
/// rows of other nodes.
pub fn init_attributes<T: Scalar>(
    g: &Graph,
    k: usize,
    pins: &PinSet,
    seed: u64,
) -> Result<EmbeddingMatrix<T>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("palette k = {k} must be at least 2")));
    }
    pins.validate(g.n(), k)?;
    let mut rng = rng_from_seed(seed);
    let mut out = EmbeddingMatrix::zeros(g.n(), k);
    let shift = 1.0 / k as f64;
    let mut draw = vec![0.0f64; k];
    for v in 0..g.n() {
        for x in draw.iter_mut() {
            // 1 - U lies in (0, 1], so the log is finite
            let u: f64 = rng.gen();
            *x = -(1.0 - u).ln();
        }
        let total: f64 = draw.iter().sum();
        let row = out.row_mut(v);
        match pins.get(v) {
            Some(c) => row.copy_from_slice(&pinned_row::<T>(k, c)),
            None => {
                for (dst, &e) in row.iter_mut().zip(&draw) {
                    *dst = T::of(e / total) - T::of(shift);
                }
            }
        }
    }
    Ok(out)
}

fn check_dims<T: Scalar>(h: &EmbeddingMatrix<T>, g: &Graph) -> Result<()> {
    if h.n() != g.n() {
        return Err(Error::Dimension(format!(
            "embedding has {} rows, graph has {} nodes",
            h.n(),
            g.n()
        )));
    }
    if h.k() == 0 {
        return Err(Error::Dimension("embedding has no color columns".into()));
    }
    Ok(())
}

/// `m_v = Σ_{u ∈ N(v)} h_u`, optionally including `h_v` itself.
pub fn aggregate<T: Scalar>(h: &EmbeddingMatrix<T>, g: &Graph, closed: bool) -> EmbeddingMatrix<T> {
    let k = h.k();
    let mut out = EmbeddingMatrix::zeros(h.n(), k);
    // summing in ascending node id makes equal neighborhoods give equal bits
    let fill = |(v, row): (usize, &mut [T])| {
        let nbrs = g.neighbors(v);
        let split = if closed { nbrs.partition_point(|&u| u < v) } else { nbrs.len() };
        let mut add = |u: usize| {
            for (dst, &x) in row.iter_mut().zip(h.row(u)) {
                *dst = *dst + x;
            }
        };
        nbrs[..split].iter().for_each(|&u| add(u));
        if closed {
            add(v);
            nbrs[split..].iter().for_each(|&u| add(u));
        }
    };
    if h.n() * k >= PAR_CELLS {
        out.data.par_chunks_mut(k).enumerate().for_each(fill);
    } else {
        out.data.chunks_mut(k).enumerate().for_each(fill);
    }
    out
}

/// Row sums in canonical order.
pub fn row_sums<T: Scalar>(h: &EmbeddingMatrix<T>) -> Vec<T> {
    let mut scratch = Vec::with_capacity(h.k());
    (0..h.n()).map(|v| canonical_sum(h.row(v), &mut scratch)).collect()
}

/// Applies `out = λ·h + γ·rowsum(h) + λ'·msg + γ'·rowsum(msg) + β` row by row.
fn combine<T: Scalar>(
    h: Option<&EmbeddingMatrix<T>>,
    msg: &EmbeddingMatrix<T>,
    p: &LayerParams<T>,
) -> EmbeddingMatrix<T> {
    let k = msg.k();
    let mut out = EmbeddingMatrix::zeros(msg.n(), k);
    let fill = |(v, row): (usize, &mut [T])| {
        let mut scratch = Vec::with_capacity(k);
        let m_row = msg.row(v);
        let m_sum = canonical_sum(m_row, &mut scratch);
        match h {
            Some(h) => {
                let h_row = h.row(v);
                let h_sum = canonical_sum(h_row, &mut scratch);
                for j in 0..k {
                    row[j] = p.lambda_c * h_row[j]
                        + p.gamma_c * h_sum
                        + p.lambda_a * m_row[j]
                        + p.gamma_a * m_sum
                        + p.beta;
                }
            }
            None => {
                for j in 0..k {
                    row[j] = p.lambda_a * m_row[j] + p.gamma_a * m_sum + p.beta;
                }
            }
        }
    };
    if msg.n() * k >= PAR_CELLS {
        out.data.par_chunks_mut(k).enumerate().for_each(fill);
    } else {
        out.data.chunks_mut(k).enumerate().for_each(fill);
    }
    out
}

/// One message-passing layer. The input is left untouched.
pub fn forward_layer<T: Scalar>(
    h: &EmbeddingMatrix<T>,
    g: &Graph,
    p: &LayerParams<T>,
) -> Result<EmbeddingMatrix<T>> {
    check_dims(h, g)?;
    let msg = aggregate(h, g, false);
    Ok(combine(Some(h), &msg, p))
}

/// Integrated variant: the aggregate runs over the closed neighborhood
/// `N(v) ∪ {v}` and there is no separate self term, so `λC` and `γC` are
/// unused.
pub fn integrated_forward_layer<T: Scalar>(
    h: &EmbeddingMatrix<T>,
    g: &Graph,
    p: &LayerParams<T>,
) -> Result<EmbeddingMatrix<T>> {
    check_dims(h, g)?;
    let msg = aggregate(h, g, true);
    Ok(combine(None, &msg, p))
}

#[derive(Clone, Debug, Default)]
pub struct ForwardOptions {
    /// Re-impose these pinned rows after every layer.
    pub clamp: Option<PinSet>,
}

/// Input and per-layer outputs of a forward pass; `states[0]` is the input.
#[derive(Clone, Debug)]
pub struct ForwardTrace<T> {
    pub states: Vec<EmbeddingMatrix<T>>,
}

impl<T: Scalar> ForwardTrace<T> {
    pub fn output(&self) -> &EmbeddingMatrix<T> {
        self.states.last().expect("trace holds the input")
    }

    pub fn into_output(mut self) -> EmbeddingMatrix<T> {
        self.states.pop().expect("trace holds the input")
    }

    /// Output of layer `i` (1-based); layer 0 is the input.
    pub fn layer(&self, i: usize) -> &EmbeddingMatrix<T> {
        &self.states[i]
    }
}

pub fn forward<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    g: &Graph,
    params: &GdnParams<T>,
) -> Result<ForwardTrace<T>> {
    forward_with(x, g, params, &ForwardOptions::default())
}

pub fn forward_with<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    g: &Graph,
    params: &GdnParams<T>,
    opts: &ForwardOptions,
) -> Result<ForwardTrace<T>> {
    run_layers(x, g, params, opts, forward_layer)
}

pub fn integrated_forward<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    g: &Graph,
    params: &GdnParams<T>,
) -> Result<ForwardTrace<T>> {
    run_layers(x, g, params, &ForwardOptions::default(), integrated_forward_layer)
}

type LayerFn<T> = fn(&EmbeddingMatrix<T>, &Graph, &LayerParams<T>) -> Result<EmbeddingMatrix<T>>;

fn run_layers<T: Scalar>(
    x: &EmbeddingMatrix<T>,
    g: &Graph,
    params: &GdnParams<T>,
    opts: &ForwardOptions,
    layer: LayerFn<T>,
) -> Result<ForwardTrace<T>> {
    check_dims(x, g)?;
    if let Some(pins) = &opts.clamp {
        pins.validate(g.n(), x.k())?;
    }
    let mut states = Vec::with_capacity(params.depth() + 1);
    states.push(x.clone());
    for (i, p) in params.layers().iter().enumerate() {
        let mut next = layer(states.last().unwrap(), g, p)?;
        if let Some(pins) = &opts.clamp {
            for (v, c) in pins.iter() {
                next.row_mut(v).copy_from_slice(&pinned_row::<T>(x.k(), c));
            }
        }
        if !next.is_finite() {
            return Err(Error::NonFinite { layer: i + 1 });
        }
        states.push(next);
    }
    Ok(ForwardTrace { states })
}

/// Row argmax, ties to the lowest color index.
pub fn classify_argmax<T: Scalar>(h: &EmbeddingMatrix<T>) -> ColorAssignment {
    let colors = (0..h.n())
        .map(|v| {
            let row = h.row(v);
            let mut best = 0;
            for j in 1..row.len() {
                if row[j] > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect();
    ColorAssignment::new(colors, h.k().max(1)).expect("argmax stays in range")
}

/// `true` when no row has two entries tied at its maximum.
pub fn has_unique_maxima<T: Scalar>(h: &EmbeddingMatrix<T>) -> bool {
    (0..h.n()).all(|v| {
        let row = h.row(v);
        let max = row.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
        row.iter().filter(|&&x| x == max).count() == 1
    })
}

/// Right-multiplication by the permutation matrix of `perm`: the value in
/// column `i` moves to column `perm(i)`.
pub fn permute_colors<T: Scalar>(
    h: &EmbeddingMatrix<T>,
    perm: &ColorPermutation,
) -> Result<EmbeddingMatrix<T>> {
    if perm.k() != h.k() {
        return Err(Error::Dimension(format!(
            "permutation over {} colors applied to {} columns",
            perm.k(),
            h.k()
        )));
    }
    let mut out = EmbeddingMatrix::zeros(h.n(), h.k());
    for v in 0..h.n() {
        let src = h.row(v);
        let dst = out.row_mut(v);
        for (i, &x) in src.iter().enumerate() {
            dst[perm.apply(i)] = x;
        }
    }
    Ok(out)
}
