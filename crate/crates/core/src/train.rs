//! Unsupervised margin loss, reverse-mode gradients through the linear
//! layers, Adam, and a central-difference gradient oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::derive_seed;
use crate::graph::Graph;
use crate::model::{
    aggregate, forward, init_attributes, row_sums, EmbeddingMatrix, GdnParams, LayerParams,
    PinSet,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossConfig<T> {
    pub margin: T,
}

impl<T: Scalar> LossConfig<T> {
    pub fn new(margin: T) -> Result<Self> {
        if !(margin > T::zero()) || !margin.is_finite() {
            return Err(Error::InvalidArgument(format!("margin {margin} must be positive")));
        }
        Ok(LossConfig { margin })
    }
}

impl<T: Scalar> Default for LossConfig<T> {
    fn default() -> Self {
        LossConfig { margin: T::one() }
    }
}

#[inline]
fn edge_distance<T: Scalar>(h: &EmbeddingMatrix<T>, u: usize, v: usize) -> T {
    h.row(u)
        .iter()
        .zip(h.row(v))
        .map(|(&a, &b)| (a - b) * (a - b))
        .fold(T::zero(), |acc, x| acc + x)
        .sqrt()
}

/// Euclidean distance of every edge's endpoint embeddings, in edge order.
pub fn edge_distances<T: Scalar>(h: &EmbeddingMatrix<T>, g: &Graph) -> Vec<T> {
    g.edges().iter().map(|&(u, v)| edge_distance(h, u, v)).collect()
}

/// `Σ_{uv ∈ E} max(m - ‖h_u - h_v‖, 0)`.
pub fn margin_loss<T: Scalar>(h: &EmbeddingMatrix<T>, g: &Graph, cfg: &LossConfig<T>) -> T {
    g.edges()
        .iter()
        .map(|&(u, v)| (cfg.margin - edge_distance(h, u, v)).max(T::zero()))
        .fold(T::zero(), |acc, x| acc + x)
}

/// Partial derivatives laid out like [`GdnParams`], plus the loss value.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientRecord<T> {
    pub layers: Vec<LayerParams<T>>,
    pub loss: T,
}

impl<T: Scalar> GradientRecord<T> {
    pub fn zeros(depth: usize) -> Self {
        GradientRecord {
            layers: vec![LayerParams::zero(); depth],
            loss: T::zero(),
        }
    }

    pub fn flatten(&self) -> Vec<T> {
        self.layers.iter().flat_map(|l| l.to_array()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.flatten().iter().all(|x| x.is_zero())
    }

    fn from_flat(values: &[T], loss: T) -> Self {
        GradientRecord {
            layers: values
                .chunks_exact(5)
                .map(|c| LayerParams::from_array([c[0], c[1], c[2], c[3], c[4]]))
                .collect(),
            loss,
        }
    }
}

/// Gradient of the margin loss with respect to the final embeddings.
///
/// Edges on or beyond the margin and edges with coincident endpoints
/// contribute nothing.
fn loss_gradient<T: Scalar>(
    h: &EmbeddingMatrix<T>,
    g: &Graph,
    cfg: &LossConfig<T>,
) -> EmbeddingMatrix<T> {
    let k = h.k();
    let mut grad = EmbeddingMatrix::zeros(h.n(), k);
    for &(u, v) in g.edges() {
        let d = edge_distance(h, u, v);
        if d >= cfg.margin || d == T::zero() {
            continue;
        }
        for j in 0..k {
            let diff = (h.get(u, j) - h.get(v, j)) / d;
            grad.row_mut(u)[j] = grad.row_mut(u)[j] - diff;
            grad.row_mut(v)[j] = grad.row_mut(v)[j] + diff;
        }
    }
    grad
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Exact gradient of the margin loss of `forward(x)` w.r.t. every scalar.
pub fn backward<T: Scalar>(
    g: &Graph,
    x: &EmbeddingMatrix<T>,
    params: &GdnParams<T>,
    cfg: &LossConfig<T>,
) -> Result<GradientRecord<T>> {
    let trace = forward(x, g, params)?;
    let k = x.k();
    let loss = margin_loss(trace.output(), g, cfg);
    let mut upstream = loss_gradient(trace.output(), g, cfg);
    let mut record = GradientRecord::zeros(params.depth());
    record.loss = loss;

    for (i, p) in params.layers().iter().enumerate().rev() {
        let h = &trace.states[i];
        let msg = aggregate(h, g, false);
        let h_sum = row_sums(h);
        let m_sum = row_sums(&msg);
        let g_sum: Vec<T> = (0..h.n())
            .map(|v| upstream.row(v).iter().fold(T::zero(), |a, &b| a + b))
            .collect();

        let slot = &mut record.layers[i];
        slot.lambda_c = dot(upstream.as_slice(), h.as_slice());
        slot.gamma_c = dot(&g_sum, &h_sum);
        slot.lambda_a = dot(upstream.as_slice(), msg.as_slice());
        slot.gamma_a = dot(&g_sum, &m_sum);
        slot.beta = g_sum.iter().fold(T::zero(), |a, &b| a + b);

        if i == 0 {
            break;
        }
        // dL/dH = λC·G + γC·(G1)1ᵀ + Aᵀ(λA·G + γA·(G1)1ᵀ), with A symmetric
        let mut through_msg = EmbeddingMatrix::zeros(h.n(), k);
        for v in 0..h.n() {
            let shift = p.gamma_a * g_sum[v];
            for (dst, &gv) in through_msg.row_mut(v).iter_mut().zip(upstream.row(v)) {
                *dst = p.lambda_a * gv + shift;
            }
        }
        let spread = aggregate(&through_msg, g, false);
        let mut next = EmbeddingMatrix::zeros(h.n(), k);
        for v in 0..h.n() {
            let shift = p.gamma_c * g_sum[v];
            let row = next.row_mut(v);
            for j in 0..k {
                row[j] = p.lambda_c * upstream.get(v, j) + shift + spread.get(v, j);
            }
        }
        upstream = next;
    }
    Ok(record)
}

/// Central differences `(L(p + s·e) - L(p - s·e)) / 2s` for every scalar.
pub fn finite_diff_grad<T: Scalar>(
    g: &Graph,
    x: &EmbeddingMatrix<T>,
    params: &GdnParams<T>,
    cfg: &LossConfig<T>,
    step: T,
) -> Result<GradientRecord<T>> {
    if !(step > T::zero()) {
        return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
    }
    let base = params.flatten();
    let loss_at = |flat: &[T]| -> Result<T> {
        let p = GdnParams::from_flat(flat)?;
        Ok(margin_loss(forward(x, g, &p)?.output(), g, cfg))
    };
    let loss = loss_at(&base)?;
    let mut grads = Vec::with_capacity(base.len());
    let mut probe = base.clone();
    for i in 0..base.len() {
        probe[i] = base[i] + step;
        let up = loss_at(&probe)?;
        probe[i] = base[i] - step;
        let down = loss_at(&probe)?;
        probe[i] = base[i];
        grads.push((up - down) / (T::of(2.0) * step));
    }
    Ok(GradientRecord::from_flat(&grads, loss))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<T> {
    pub t: u64,
    pub first: Vec<T>,
    pub second: Vec<T>,
    pub cfg: AdamConfig,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(params: &GdnParams<T>, cfg: AdamConfig) -> Self {
        let len = 5 * params.depth();
        AdamState {
            t: 0,
            first: vec![T::zero(); len],
            second: vec![T::zero(); len],
            cfg,
        }
    }

    /// One bias-corrected Adam update of `params` in place.
    pub fn step(&mut self, params: &mut GdnParams<T>, grads: &GradientRecord<T>) -> Result<()> {
        let g = grads.flatten();
        if g.len() != self.first.len() || params.depth() * 5 != g.len() {
            return Err(Error::Dimension(format!(
                "gradient of {} scalars for {} parameters",
                g.len(),
                params.depth() * 5
            )));
        }
        self.t += 1;
        let (b1, b2) = (T::of(self.cfg.beta1), T::of(self.cfg.beta2));
        let bias1 = T::one() - b1.powi(self.t as i32);
        let bias2 = T::one() - b2.powi(self.t as i32);
        let (lr, eps) = (T::of(self.cfg.lr), T::of(self.cfg.eps));
        let mut flat = params.flatten();
        for i in 0..flat.len() {
            self.first[i] = b1 * self.first[i] + (T::one() - b1) * g[i];
            self.second[i] = b2 * self.second[i] + (T::one() - b2) * g[i] * g[i];
            let m_hat = self.first[i] / bias1;
            let v_hat = self.second[i] / bias2;
            flat[i] = flat[i] - lr * m_hat / (v_hat.sqrt() + eps);
        }
        *params = GdnParams::from_flat(&flat)?;
        Ok(())
    }
}

/// Functional form of [`AdamState::step`].
pub fn adam_step<T: Scalar>(
    mut state: AdamState<T>,
    mut params: GdnParams<T>,
    grads: &GradientRecord<T>,
) -> Result<(AdamState<T>, GdnParams<T>)> {
    state.step(&mut params, grads)?;
    Ok((state, params))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    pub margin: f64,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            seed: 0,
            margin: 1.0,
            adam: AdamConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome<T> {
    pub params: GdnParams<T>,
    /// Mean loss over the corpus for each epoch, measured before each update.
    pub epoch_losses: Vec<f64>,
}

/// Sequential per-instance Adam over `corpus`, fresh attributes for every
/// instance in every epoch.
pub fn train<T: Scalar>(
    corpus: &[(Graph, usize)],
    params0: GdnParams<T>,
    cfg: &TrainConfig,
) -> Result<TrainOutcome<T>> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("training corpus is empty".into()));
    }
    let loss_cfg = LossConfig::new(T::of(cfg.margin))?;
    let mut params = params0;
    let mut adam = AdamState::new(&params, cfg.adam);
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let mut total = 0.0;
        for (idx, (g, k)) in corpus.iter().enumerate() {
            let seed = derive_seed(cfg.seed, epoch as u64, idx as u64);
            let x = init_attributes::<T>(g, *k, &PinSet::new(), seed)?;
            let grads = backward(g, &x, &params, &loss_cfg)?;
            total += grads.loss.as_f64();
            adam.step(&mut params, &grads)?;
        }
        epoch_losses.push(total / corpus.len() as f64);
    }
    Ok(TrainOutcome {
        params,
        epoch_losses,
    })
}

/// Mean margin loss of `params` over the corpus with attributes drawn from
/// `seed`, for before/after comparisons.
pub fn mean_loss<T: Scalar>(
    corpus: &[(Graph, usize)],
    params: &GdnParams<T>,
    margin: f64,
    seed: u64,
) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("corpus is empty".into()));
    }
    let cfg = LossConfig::new(T::of(margin))?;
    let mut total = 0.0;
    for (idx, (g, k)) in corpus.iter().enumerate() {
        let x = init_attributes::<T>(g, *k, &PinSet::new(), derive_seed(seed, u64::MAX, idx as u64))?;
        total += margin_loss(forward(&x, g, params)?.output(), g, &cfg).as_f64();
    }
    Ok(total / corpus.len() as f64)
}

/// Machine-readable record of a training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub corpus: String,
    pub instances: usize,
    pub seed: u64,
    pub epochs: usize,
    pub margin: f64,
    pub adam: AdamConfig,
    pub epoch_losses: Vec<f64>,
    pub depth: usize,
    pub params: Vec<[f64; 5]>,
}

impl TrainReport {
    pub fn new(
        corpus: impl Into<String>,
        instances: usize,
        cfg: &TrainConfig,
        outcome: &TrainOutcome<f64>,
    ) -> Self {
        TrainReport {
            corpus: corpus.into(),
            instances,
            seed: cfg.seed,
            epochs: cfg.epochs,
            margin: cfg.margin,
            adam: cfg.adam,
            epoch_losses: outcome.epoch_losses.clone(),
            depth: outcome.params.depth(),
            params: outcome.params.layers().iter().map(|l| l.to_array()).collect(),
        }
    }
}
