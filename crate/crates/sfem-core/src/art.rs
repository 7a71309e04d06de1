//! Fusion ART primitives.
//!
//! Inputs arrive through one or more channels, each complement coded so that
//! the coded vector has constant norm. Category nodes hold one weight vector
//! per channel; activation, competition, matching and learning all operate on
//! the fuzzy AND (element-wise min) of activity and weights.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArtError {
    #[error("channel {channel}, element {index}: value {value} outside [0, 1]")]
    OutOfRange {
        channel: usize,
        index: usize,
        value: f64,
    },
    #[error("expected {expected} channels, got {got}")]
    ChannelCount { expected: usize, got: usize },
    #[error("channel {channel}: expected dimension {expected}, got {got}")]
    Dimension {
        channel: usize,
        expected: usize,
        got: usize,
    },
    #[error("vigilance must be > 0, got {0}")]
    NonPositiveVigilance(f64),
    #[error("choice parameter alpha must be > 0, got {0}")]
    NonPositiveAlpha(f64),
    #[error("learning rate beta must lie in [0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("parameter {name} must lie in [0, 1], got {value}")]
    ParamOutOfRange { name: &'static str, value: f64 },
}

/// Multi-channel complement-coded activity vector.
///
/// Channel `k` of raw dimension `d` is stored as `(I; 1 - I)` of length `2d`,
/// whose norm (element sum) is exactly `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityVector {
    pub channels: Vec<Vec<f64>>,
}

impl ActivityVector {
    /// Complement-code every channel of a raw input.
    pub fn encode(inputs: &[Vec<f64>]) -> Result<Self, ArtError> {
        let channels = inputs
            .iter()
            .enumerate()
            .map(|(k, raw)| complement_code_channel(raw, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { channels })
    }

    /// Raw (pre-coding) dimension of each channel.
    pub fn raw_dims(&self) -> Vec<usize> {
        self.channels.iter().map(|c| c.len() / 2).collect()
    }
}

/// Complement-code one channel: `(I; 1 - I)`.
pub fn complement_code(values: &[f64]) -> Result<Vec<f64>, ArtError> {
    complement_code_channel(values, 0)
}

fn complement_code_channel(values: &[f64], channel: usize) -> Result<Vec<f64>, ArtError> {
    for (index, &value) in values.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) || value.is_nan() {
            return Err(ArtError::OutOfRange {
                channel,
                index,
                value,
            });
        }
    }
    let mut coded = Vec::with_capacity(values.len() * 2);
    coded.extend_from_slice(values);
    coded.extend(values.iter().map(|v| 1.0 - v));
    Ok(coded)
}

/// A category node: one weight vector per channel, same layout as the
/// activity vectors it matches against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryNode {
    pub weights: Vec<Vec<f64>>,
}

/// Commit a new category node with weights initialised to the activity
/// vector itself, so it matches its own origin perfectly.
pub fn commit_new(x: &ActivityVector) -> CategoryNode {
    CategoryNode {
        weights: x.channels.clone(),
    }
}

/// Learning parameters for one ART field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtParams {
    /// Per-channel contribution weight in [0, 1].
    pub gamma: Vec<f64>,
    /// Choice parameter, strictly positive.
    pub alpha: f64,
    /// Learning rate in [0, 1].
    pub beta: f64,
    /// Per-channel vigilance in [0, 1].
    pub rho: Vec<f64>,
}

impl ArtParams {
    pub fn uniform(channels: usize, gamma: f64, alpha: f64, beta: f64, rho: f64) -> Self {
        Self {
            gamma: vec![gamma; channels],
            alpha,
            beta,
            rho: vec![rho; channels],
        }
    }

    pub fn validate(&self) -> Result<(), ArtError> {
        if self.alpha <= 0.0 {
            return Err(ArtError::NonPositiveAlpha(self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ArtError::BetaOutOfRange(self.beta));
        }
        for &g in &self.gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(ArtError::ParamOutOfRange {
                    name: "gamma",
                    value: g,
                });
            }
        }
        for &r in &self.rho {
            if !(0.0..=1.0).contains(&r) {
                return Err(ArtError::ParamOutOfRange {
                    name: "rho",
                    value: r,
                });
            }
        }
        Ok(())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().sum()
}

fn fuzzy_and_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.min(*y)).sum()
}

fn check_layout(x: &ActivityVector, node: &CategoryNode) -> Result<(), ArtError> {
    if x.channels.len() != node.weights.len() {
        return Err(ArtError::ChannelCount {
            expected: node.weights.len(),
            got: x.channels.len(),
        });
    }
    for (k, (xc, wc)) in x.channels.iter().zip(&node.weights).enumerate() {
        if xc.len() != wc.len() {
            return Err(ArtError::Dimension {
                channel: k,
                expected: wc.len(),
                got: xc.len(),
            });
        }
    }
    Ok(())
}

fn choice_base(x: &ActivityVector, node: &CategoryNode, params: &ArtParams) -> f64 {
    let mut t = 0.0;
    for (k, (xc, wc)) in x.channels.iter().zip(&node.weights).enumerate() {
        t += params.gamma[k] * fuzzy_and_norm(xc, wc) / (params.alpha + norm(wc));
    }
    t
}

/// Vigilance-modulated choice activation over a node field.
///
/// Each node's base choice value is scaled by `rho_init / rho_j`, giving
/// nodes whose vigilance has been lowered a competitive advantage. With all
/// per-node vigilances equal to `rho_init` the coefficient is exactly 1 and
/// the output is the unmodulated choice function.
pub fn choice_activation(
    x: &ActivityVector,
    nodes: &[CategoryNode],
    params: &ArtParams,
    vigilances: &[f64],
    rho_init: f64,
) -> Result<Vec<f64>, ArtError> {
    if rho_init <= 0.0 {
        return Err(ArtError::NonPositiveVigilance(rho_init));
    }
    if vigilances.len() != nodes.len() {
        return Err(ArtError::ChannelCount {
            expected: nodes.len(),
            got: vigilances.len(),
        });
    }
    let mut out = Vec::with_capacity(nodes.len());
    for (node, &rho_j) in nodes.iter().zip(vigilances) {
        if rho_j <= 0.0 {
            return Err(ArtError::NonPositiveVigilance(rho_j));
        }
        check_layout(x, node)?;
        out.push((rho_init / rho_j) * choice_base(x, node, params));
    }
    Ok(out)
}

/// Winner selection: argmax of the activation vector, ties broken by the
/// lowest node index so replays are deterministic. Empty fields have no
/// winner.
pub fn compete(t: &[f64]) -> Option<usize> {
    let mut winner: Option<usize> = None;
    for (j, &v) in t.iter().enumerate() {
        match winner {
            Some(w) if t[w] >= v => {}
            _ => winner = Some(j),
        }
    }
    winner
}

/// Per-channel template match against one node.
///
/// Returns the per-channel match values and whether every channel meets its
/// vigilance (inclusive at equality). Zero-width channels impose no
/// constraint and report a match of 1.
pub fn template_match(
    x: &ActivityVector,
    node: &CategoryNode,
    rho: &[f64],
) -> Result<(Vec<f64>, bool), ArtError> {
    check_layout(x, node)?;
    if rho.len() != x.channels.len() {
        return Err(ArtError::ChannelCount {
            expected: x.channels.len(),
            got: rho.len(),
        });
    }
    let mut matches = Vec::with_capacity(x.channels.len());
    let mut resonates = true;
    for (k, (xc, wc)) in x.channels.iter().zip(&node.weights).enumerate() {
        let xn = norm(xc);
        let m = if xc.is_empty() {
            1.0
        } else if xn == 0.0 {
            0.0
        } else {
            fuzzy_and_norm(xc, wc) / xn
        };
        if m < rho[k] {
            resonates = false;
        }
        matches.push(m);
    }
    Ok((matches, resonates))
}

/// Template learning: move weights toward the fuzzy AND of activity and
/// weights. Element-wise the new weights never exceed the old ones.
pub fn template_learn(
    x: &ActivityVector,
    node: &mut CategoryNode,
    beta: f64,
) -> Result<(), ArtError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(ArtError::BetaOutOfRange(beta));
    }
    check_layout(x, node)?;
    for (xc, wc) in x.channels.iter().zip(node.weights.iter_mut()) {
        for (w, &xv) in wc.iter_mut().zip(xc) {
            *w = (1.0 - beta) * *w + beta * xv.min(*w);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(values: &[f64]) -> ActivityVector {
        ActivityVector::encode(&[values.to_vec()]).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64]) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn complement_code_concatenates_input_and_complement() {
        assert_close(
            &complement_code(&[0.3, 0.7]).unwrap(),
            &[0.3, 0.7, 0.7, 0.3],
        );
        assert_eq!(complement_code(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn complement_code_norm_equals_raw_dimension() {
        let coded = complement_code(&[1.0, 0.5, 0.0]).unwrap();
        assert_eq!(coded, vec![1.0, 0.5, 0.0, 0.0, 0.5, 1.0]);
        assert_eq!(norm(&coded), 3.0);
    }

    #[test]
    fn complement_code_rejects_out_of_range() {
        assert!(complement_code(&[0.5, 1.2]).is_err());
        assert!(complement_code(&[-0.1]).is_err());
    }

    #[test]
    fn choice_matches_hand_evaluation() {
        // Weights equal to the activity vector, |x| = 2, gamma = 1, alpha = 0.01:
        // T = 2 / 2.01.
        let x = single(&[0.3, 0.7]);
        let node = commit_new(&x);
        let params = ArtParams::uniform(1, 1.0, 0.01, 0.5, 0.9);
        let t = choice_activation(&x, &[node], &params, &[0.9], 0.9).unwrap();
        assert!((t[0] - 2.0 / 2.01).abs() < 1e-12);
    }

    #[test]
    fn lowering_a_node_vigilance_scales_its_activation() {
        let x = single(&[0.3, 0.7]);
        let node = commit_new(&x);
        let params = ArtParams::uniform(1, 1.0, 0.01, 0.5, 0.9);
        let base = choice_activation(&x, std::slice::from_ref(&node), &params, &[0.9], 0.9).unwrap()[0];
        let halved = choice_activation(&x, &[node], &params, &[0.45], 0.9).unwrap()[0];
        assert!((halved - 2.0 * base).abs() < 1e-12);
    }

    #[test]
    fn choice_rejects_non_positive_vigilance() {
        let x = single(&[0.5]);
        let node = commit_new(&x);
        let params = ArtParams::uniform(1, 1.0, 0.01, 0.5, 0.9);
        assert!(choice_activation(&x, &[node], &params, &[0.0], 0.9).is_err());
    }

    #[test]
    fn compete_takes_argmax_with_lowest_index_ties() {
        assert_eq!(compete(&[0.2, 0.9, 0.5]), Some(1));
        assert_eq!(compete(&[0.5, 0.5]), Some(0));
        assert_eq!(compete(&[]), None);
    }

    #[test]
    fn template_match_identity_is_one() {
        let x = single(&[0.3, 0.7]);
        let node = commit_new(&x);
        let (m, resonates) = template_match(&x, &node, &[1.0]).unwrap();
        assert_eq!(m, vec![1.0]);
        assert!(resonates);
    }

    #[test]
    fn template_match_boundary_is_inclusive() {
        let x = single(&[0.3, 0.7]);
        let node = CategoryNode {
            weights: vec![vec![0.2, 0.7, 0.6, 0.3]],
        };
        let (m, resonates) = template_match(&x, &node, &[0.9]).unwrap();
        assert!((m[0] - 0.9).abs() < 1e-12);
        assert!(resonates, "match exactly at vigilance must resonate");
    }

    #[test]
    fn template_match_zero_weights_fail_positive_vigilance() {
        let x = single(&[0.3, 0.7]);
        let node = CategoryNode {
            weights: vec![vec![0.0; 4]],
        };
        let (m, resonates) = template_match(&x, &node, &[0.1]).unwrap();
        assert_eq!(m[0], 0.0);
        assert!(!resonates);
    }

    #[test]
    fn template_learn_hand_case() {
        let x = ActivityVector {
            channels: vec![vec![0.2, 0.8, 0.8, 0.2]],
        };
        let mut node = CategoryNode {
            weights: vec![vec![0.4, 0.6, 0.6, 0.4]],
        };
        template_learn(&x, &mut node, 0.5).unwrap();
        assert_close(&node.weights[0], &[0.3, 0.6, 0.6, 0.3]);
    }

    #[test]
    fn template_learn_extremes() {
        let x = ActivityVector {
            channels: vec![vec![0.2, 0.8, 0.8, 0.2]],
        };
        let start = vec![0.4, 0.6, 0.6, 0.4];
        let mut fast = CategoryNode {
            weights: vec![start.clone()],
        };
        template_learn(&x, &mut fast, 1.0).unwrap();
        assert_eq!(fast.weights[0], vec![0.2, 0.6, 0.6, 0.2]);

        let mut frozen = CategoryNode {
            weights: vec![start.clone()],
        };
        template_learn(&x, &mut frozen, 0.0).unwrap();
        assert_eq!(frozen.weights[0], start);

        let mut node = CategoryNode {
            weights: vec![start],
        };
        assert!(template_learn(&x, &mut node, 1.5).is_err());
    }

    #[test]
    fn commit_then_match_at_full_vigilance_resonates() {
        let x = single(&[0.3, 0.7]);
        let node = commit_new(&x);
        let (_, resonates) = template_match(&x, &node, &[1.0]).unwrap();
        assert!(resonates);
    }

    #[test]
    fn two_commits_are_distinct_nodes() {
        let x = single(&[0.3, 0.7]);
        let a = commit_new(&x);
        let b = commit_new(&x);
        // No dedup at this layer: both exist independently.
        assert_eq!(a, b);
        let nodes = [a, b];
        assert_eq!(nodes.len(), 2);
    }

    #[test]
    fn off_by_small_feature_still_resonates_in_high_dimension() {
        let mut raw = vec![0.5; 10];
        let x0 = single(&raw);
        let node = commit_new(&x0);
        raw[3] -= 0.1;
        let x1 = single(&raw);
        let (m, resonates) = template_match(&x1, &node, &[0.9]).unwrap();
        assert!((m[0] - 0.99).abs() < 1e-12);
        assert!(resonates);
    }
}
