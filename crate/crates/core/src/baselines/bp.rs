//! Belief propagation for k-coloring.
//!
//! `η_{e→u}[c]` is the probability that edge `e = {u, v}` refutes color `c`
//! at `u`, i.e. that `v` takes `c`. One sweep recomputes every message from
//! the sender's other incoming messages:
//!
//! ```text
//! η_{e→u}[c] ∝ Π_{v' ∈ N(v) \ u} (1 - η_{{v,v'}→v}[c])
//! ```

use rand::Rng;

use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::graph::{ColorAssignment, Graph};

/// Message of edge `e` toward its smaller endpoint lives at slot `2e`,
/// toward the larger endpoint at `2e + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BpMessages {
    k: usize,
    values: Vec<f64>,
}

impl BpMessages {
    pub fn uniform(g: &Graph, k: usize) -> Self {
        BpMessages {
            k,
            values: vec![1.0 / k as f64; 2 * g.m() * k],
        }
    }

    /// Near-uniform messages with multiplicative noise of relative size
    /// `noise`, renormalized.
    pub fn random<R: Rng>(g: &Graph, k: usize, noise: f64, rng: &mut R) -> Self {
        let mut msgs = Self::uniform(g, k);
        for slot in msgs.values.chunks_mut(k) {
            for x in slot.iter_mut() {
                *x *= 1.0 + noise * (2.0 * rng.gen::<f64>() - 1.0);
            }
            let total: f64 = slot.iter().sum();
            slot.iter_mut().for_each(|x| *x /= total);
        }
        msgs
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Message of edge `edge` toward `to`, which must be an endpoint.
    pub fn get(&self, g: &Graph, edge: usize, to: usize) -> &[f64] {
        let slot = slot_of(g, edge, to);
        &self.values[slot * self.k..(slot + 1) * self.k]
    }

    pub fn set(&mut self, g: &Graph, edge: usize, to: usize, msg: &[f64]) {
        let slot = slot_of(g, edge, to);
        self.values[slot * self.k..(slot + 1) * self.k].copy_from_slice(msg);
    }

    /// Largest deviation of any message from summing to one.
    pub fn normalization_error(&self) -> f64 {
        self.values
            .chunks(self.k)
            .map(|m| (m.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn slot_of(g: &Graph, edge: usize, to: usize) -> usize {
    let (a, b) = g.edges()[edge];
    assert!(to == a || to == b, "node {to} is not on edge {edge}");
    2 * edge + usize::from(to == b)
}

/// For each node, the slots of messages flowing into it and the slots of
/// the reverse messages flowing out along the same edges.
struct Incidence {
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(g: &Graph) -> Self {
        let mut incoming = vec![Vec::new(); g.n()];
        let mut outgoing = vec![Vec::new(); g.n()];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            incoming[a].push(2 * e);
            outgoing[a].push(2 * e + 1);
            incoming[b].push(2 * e + 1);
            outgoing[b].push(2 * e);
        }
        Incidence { incoming, outgoing }
    }
}

fn sweep(g: &Graph, msgs: &BpMessages, inc: &Incidence) -> BpMessages {
    let k = msgs.k;
    let mut out = msgs.clone();
    let mut prefix: Vec<f64> = Vec::new();
    for v in 0..g.n() {
        let ins = &inc.incoming[v];
        let d = ins.len();
        // prefix[i] = Π_{j < i} (1 - η_j), per color
        prefix.clear();
        prefix.resize((d + 1) * k, 1.0);
        for (i, &slot) in ins.iter().enumerate() {
            let m = &msgs.values[slot * k..(slot + 1) * k];
            for c in 0..k {
                prefix[(i + 1) * k + c] = prefix[i * k + c] * (1.0 - m[c]);
            }
        }
        let mut suffix = vec![1.0; k];
        for i in (0..d).rev() {
            let target = inc.outgoing[v][i];
            let dst = &mut out.values[target * k..(target + 1) * k];
            let mut total = 0.0;
            for c in 0..k {
                dst[c] = prefix[i * k + c] * suffix[c];
                total += dst[c];
            }
            if total > 0.0 && total.is_finite() {
                dst.iter_mut().for_each(|x| *x /= total);
            } else {
                dst.iter_mut().for_each(|x| *x = 1.0 / k as f64);
            }
            let m = &msgs.values[ins[i] * k..(ins[i] + 1) * k];
            for c in 0..k {
                suffix[c] *= 1.0 - m[c];
            }
        }
    }
    out
}

/// One synchronous sweep of the update over every directed edge.
pub fn bp_update(g: &Graph, msgs: &BpMessages) -> BpMessages {
    sweep(g, msgs, &Incidence::new(g))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpConfig {
    pub sweeps: usize,
    pub damping: f64,
    pub seed: u64,
    pub noise: f64,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            sweeps: 100,
            damping: 0.5,
            seed: 0,
            noise: 0.1,
        }
    }
}

/// Damped belief propagation followed by per-node decoding: each node takes
/// the color with the largest belief `Π_e (1 - η_{e→u}[c])`, ties to the
/// lowest index.
pub fn bp_color(g: &Graph, k: usize, cfg: &BpConfig) -> Result<ColorAssignment> {
    if cfg.sweeps == 0 {
        return Err(Error::InvalidArgument("belief propagation needs at least one sweep".into()));
    }
    if !(0.0..1.0).contains(&cfg.damping) {
        return Err(Error::InvalidArgument(format!("damping {} outside [0, 1)", cfg.damping)));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("palette is empty".into()));
    }
    let inc = Incidence::new(g);
    let mut rng = rng_from_seed(cfg.seed);
    let mut msgs = BpMessages::random(g, k, cfg.noise, &mut rng);
    for _ in 0..cfg.sweeps {
        let fresh = sweep(g, &msgs, &inc);
        for (old, new) in msgs.values.iter_mut().zip(&fresh.values) {
            *old = cfg.damping * *old + (1.0 - cfg.damping) * new;
        }
    }
    let colors = (0..g.n())
        .map(|u| {
            let mut belief = vec![0.0f64; k];
            for &slot in &inc.incoming[u] {
                let m = &msgs.values[slot * k..(slot + 1) * k];
                for c in 0..k {
                    belief[c] += (1.0 - m[c]).max(f64::MIN_POSITIVE).ln();
                }
            }
            let mut best = 0;
            for c in 1..k {
                if belief[c] > belief[best] {
                    best = c;
                }
            }
            best
        })
        .collect();
    ColorAssignment::new(colors, k)
}
