use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EmbeddingMatrix;
use crate::scalar::Scalar;

/// Confidence levels, most to least strict.
pub const THRESHOLDS: [f64; 6] = [0.9999, 0.999, 0.99, 0.95, 0.9, 0.8];

/// Constraints forwarded to the exact completer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    pub pinned: BTreeMap<usize, usize>,
    pub forbidden: BTreeMap<usize, BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartialFile {
    pins: Vec<(usize, usize)>,
    forbidden: Vec<(usize, Vec<usize>)>,
}

impl PartialAssignment {
    pub fn is_empty(&self) -> bool {
        self.pinned.is_empty() && self.forbidden.is_empty()
    }

    pub fn is_forbidden(&self, v: usize, c: usize) -> bool {
        self.forbidden.get(&v).is_some_and(|s| s.contains(&c))
    }

    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        for (&v, &c) in &self.pinned {
            if v >= n || c >= k {
                return Err(Error::InvalidArgument(format!("pin ({v}, {c}) out of range")));
            }
            if self.is_forbidden(v, c) {
                return Err(Error::InvalidArgument(format!(
                    "node {v} pinned to forbidden color {c}"
                )));
            }
        }
        for (&v, set) in &self.forbidden {
            if v >= n || set.iter().any(|&c| c >= k) {
                return Err(Error::InvalidArgument(format!("forbid on node {v} out of range")));
            }
            if set.len() >= k {
                return Err(Error::InvalidArgument(format!("node {v} has every color forbidden")));
            }
        }
        Ok(())
    }

    /// Fraction of the `n·k` (node, color) cells decided by the constraints;
    /// a pinned node decides its whole row.
    pub fn reduction_ratio(&self, n: usize, k: usize) -> f64 {
        if n == 0 || k == 0 {
            return 0.0;
        }
        let mut cells = self.pinned.len() * k;
        for (v, set) in &self.forbidden {
            if !self.pinned.contains_key(v) {
                cells += set.len();
            }
        }
        cells as f64 / (n * k) as f64
    }

    pub fn to_json(&self) -> String {
        let file = PartialFile {
            pins: self.pinned.iter().map(|(&v, &c)| (v, c)).collect(),
            forbidden: self
                .forbidden
                .iter()
                .map(|(&v, s)| (v, s.iter().copied().collect()))
                .collect(),
        };
        serde_json::to_string(&file).expect("partial assignment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PartialFile = serde_json::from_str(text)?;
        Ok(PartialAssignment {
            pinned: file.pins.into_iter().collect(),
            forbidden: file
                .forbidden
                .into_iter()
                .map(|(v, cs)| (v, cs.into_iter().collect()))
                .collect(),
        })
    }
}

/// Index into [`THRESHOLDS`] for a problem of `n·k` cells:
/// `clamp(floor(ln(n·k)) - 6, 0, 5)`.
pub fn threshold_index(n: usize, k: usize) -> usize {
    let cells = (n * k).max(1) as f64;
    (cells.ln().floor() as i64 - 6).clamp(0, 5) as usize
}

/// Pins every (node, color) whose probability reaches the size-adapted
/// threshold `T` and forbids those at or below `(1 - T)²`. Rows must already
/// be probability distributions.
pub fn threshold_partial<T: Scalar>(probs: &EmbeddingMatrix<T>) -> PartialAssignment {
    let (n, k) = (probs.n(), probs.k());
    let t = THRESHOLDS[threshold_index(n, k)];
    let low = (1.0 - t) * (1.0 - t);
    let mut pa = PartialAssignment::default();
    for v in 0..n {
        let row = probs.row(v);
        let mut banned = BTreeSet::new();
        for (c, &p) in row.iter().enumerate() {
            let p = p.as_f64();
            if p >= t && !pa.pinned.contains_key(&v) {
                pa.pinned.insert(v, c);
            } else if p <= low {
                banned.insert(c);
            }
        }
        if !banned.is_empty() && banned.len() < k {
            pa.forbidden.insert(v, banned);
        }
    }
    pa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_formula() {
        // ln 125 = 4.83 -> -2 -> clamped to 0
        assert_eq!(threshold_index(25, 5), 0);
        assert_eq!(THRESHOLDS[threshold_index(25, 5)], 0.9999);
        // 19717 * 8 = 157736, ln = 11.97 -> 5
        assert_eq!(threshold_index(19717, 8), 5);
        assert_eq!(THRESHOLDS[threshold_index(19717, 8)], 0.8);
        // e^7 = 1096.6: 1097 cells -> index 1
        assert_eq!(threshold_index(1097, 1), 1);
        assert_eq!(threshold_index(1096, 1), 0);
    }

    #[test]
    fn uniform_rows_give_nothing() {
        for k in 2..=24 {
            for n in [3usize, 200, 5000] {
                let probs = EmbeddingMatrix::from_vec(n, k, vec![1.0 / k as f64; n * k]).unwrap();
                assert!(threshold_partial(&probs).is_empty(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn confident_rows_pin_and_forbid() {
        let probs = EmbeddingMatrix::from_rows(&[
            vec![0.99999, 0.00001 - 1e-9, 1e-9],
            vec![0.5, 0.5 - 1e-9, 1e-9],
            vec![0.4, 0.3, 0.3],
        ])
        .unwrap();
        let pa = threshold_partial(&probs);
        assert_eq!(pa.pinned.get(&0), Some(&0));
        assert_eq!(pa.forbidden[&0], BTreeSet::from([2]));
        assert!(!pa.pinned.contains_key(&1));
        assert_eq!(pa.forbidden[&1], BTreeSet::from([2]));
        assert!(!pa.forbidden.contains_key(&2));
        pa.validate(3, 3).unwrap();
        assert_eq!(PartialAssignment::from_json(&pa.to_json()).unwrap(), pa);
    }

    #[test]
    fn never_forbids_a_whole_row() {
        let probs = EmbeddingMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let pa = threshold_partial(&probs);
        assert!(pa.forbidden.is_empty());
    }

    #[test]
    fn json_shape() {
        let mut pa = PartialAssignment::default();
        pa.pinned.insert(3, 1);
        pa.forbidden.insert(2, BTreeSet::from([0, 2]));
        assert_eq!(pa.to_json(), r#"{"pins":[[3,1]],"forbidden":[[2,[0,2]]]}"#);
        assert!((pa.reduction_ratio(4, 3) - 5.0 / 12.0).abs() < 1e-15);
    }
}
