//! Memory-strength lifecycle.
//!
//! Every episode node carries a strength in [0, 1]. Activation reinforces the
//! winner, every other node decays, and nodes at or below the deletion
//! threshold are pruned. With a fixed decay factor the round-robin recurrence
//!
//! `s(T+1) = r + (1 - r) * (1 - delta)^(n-1) * s(T)`
//!
//! converges to `r / (1 - (1 - r)(1 - delta)^(n-1))`, which sinks below any
//! useful threshold once the episode count `n` grows — regularly activated
//! memories still die. The adaptive decay factor `delta_init / (n - 1)` with
//! `delta_init = ln(s_init (1 - r) / (s_init - r))` pins the regular-
//! activation fixed point at `s_init` instead, independent of `n`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrengthError {
    #[error("parameter {name} = {value} outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("adaptive decay requires s_init > r, got s_init = {s_init}, r = {r}")]
    AdaptiveDomain { s_init: f64, r: f64 },
    #[error("degenerate recurrence: r = 0 and delta = 0 give no fixed point")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaMode {
    /// Constant decay factor per decay step.
    Fixed(f64),
    /// Decay factor `delta_init / (n - 1)` recomputed from the live episode
    /// count on every decay step.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthParams {
    /// Strength assigned on creation, in (0, 1].
    pub s_init: f64,
    /// Reinforcement factor in [0, 1).
    pub r: f64,
    /// Deletion threshold in [0, 1); nodes with `s <= theta` are pruned.
    pub theta: f64,
    pub mode: DeltaMode,
}

impl Default for StrengthParams {
    fn default() -> Self {
        Self {
            s_init: 0.8,
            r: 0.1,
            theta: 0.1,
            mode: DeltaMode::Adaptive,
        }
    }
}

impl StrengthParams {
    pub fn validate(&self) -> Result<(), StrengthError> {
        if !(self.s_init > 0.0 && self.s_init <= 1.0) {
            return Err(StrengthError::OutOfDomain {
                name: "s_init",
                value: self.s_init,
                domain: "(0, 1]",
            });
        }
        if !(0.0..1.0).contains(&self.r) {
            return Err(StrengthError::OutOfDomain {
                name: "r",
                value: self.r,
                domain: "[0, 1)",
            });
        }
        if !(0.0..1.0).contains(&self.theta) {
            return Err(StrengthError::OutOfDomain {
                name: "theta",
                value: self.theta,
                domain: "[0, 1)",
            });
        }
        match self.mode {
            DeltaMode::Fixed(d) => {
                if !(0.0..=1.0).contains(&d) {
                    return Err(StrengthError::OutOfDomain {
                        name: "delta",
                        value: d,
                        domain: "[0, 1]",
                    });
                }
            }
            DeltaMode::Adaptive => {
                if self.s_init <= self.r {
                    return Err(StrengthError::AdaptiveDomain {
                        s_init: self.s_init,
                        r: self.r,
                    });
                }
            }
        }
        Ok(())
    }

    /// Effective decay factor for the current episode count.
    ///
    /// Adaptive mode uses `delta_init / (n - 1)`; with a single episode there
    /// is nothing to decay against, so `delta_init` itself is used.
    pub fn effective_delta(&self, n: usize) -> f64 {
        match self.mode {
            DeltaMode::Fixed(d) => d,
            DeltaMode::Adaptive => {
                let d0 = adaptive_delta_init(self.s_init, self.r)
                    .expect("validated parameters have s_init > r");
                if n > 1 {
                    d0 / (n - 1) as f64
                } else {
                    d0
                }
            }
        }
    }
}

/// What happened to a node during one episode-field activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrengthEvent {
    Created,
    Reactivated,
    Decayed,
}

/// One strength update. `n` is the live episode count, used only by the
/// adaptive decay factor. The result is clamped to [0, 1] so extreme
/// parameter choices cannot push a strength out of range.
pub fn update_strength(s: f64, event: StrengthEvent, params: &StrengthParams, n: usize) -> f64 {
    let next = match event {
        StrengthEvent::Created => params.s_init,
        StrengthEvent::Reactivated => s + (1.0 - s) * params.r,
        StrengthEvent::Decayed => {
            let delta = params.effective_delta(n).clamp(0.0, 1.0);
            s * (1.0 - delta)
        }
    };
    next.clamp(0.0, 1.0)
}

/// Initial value of the adaptive decay factor:
/// `ln(s_init (1 - r) / (s_init - r))`, strictly positive for `0 < r < s_init`.
pub fn adaptive_delta_init(s_init: f64, r: f64) -> Result<f64, StrengthError> {
    if !(s_init > 0.0 && s_init <= 1.0) {
        return Err(StrengthError::OutOfDomain {
            name: "s_init",
            value: s_init,
            domain: "(0, 1]",
        });
    }
    if !(0.0..1.0).contains(&r) {
        return Err(StrengthError::OutOfDomain {
            name: "r",
            value: r,
            domain: "[0, 1)",
        });
    }
    if s_init <= r {
        return Err(StrengthError::AdaptiveDomain { s_init, r });
    }
    Ok((s_init * (1.0 - r) / (s_init - r)).ln())
}

/// Strength after `t` round-robin iterations (n - 1 decays plus one
/// reinforcement each), in closed form. `t = 1` is the initial value.
pub fn closed_form_strength(
    t: u32,
    n: usize,
    params: &StrengthParams,
) -> Result<f64, StrengthError> {
    if t == 0 {
        return Err(StrengthError::OutOfDomain {
            name: "t",
            value: 0.0,
            domain: ">= 1",
        });
    }
    let delta = params.effective_delta(n);
    let big_delta = (1.0 - params.r) * (1.0 - delta).powi(n as i32 - 1);
    if big_delta >= 1.0 {
        return Err(StrengthError::Degenerate);
    }
    let fixed_point = params.r / (1.0 - big_delta);
    Ok((params.s_init - fixed_point) * big_delta.powi(t as i32 - 1) + fixed_point)
}

/// Fixed point of the fixed-decay recurrence:
/// `r / (1 - (1 - r)(1 - delta)^(n-1))`.
pub fn terminal_value(n: usize, r: f64, delta: f64) -> Result<f64, StrengthError> {
    let big_delta = (1.0 - r) * (1.0 - delta).powi(n as i32 - 1);
    if big_delta >= 1.0 {
        return Err(StrengthError::Degenerate);
    }
    Ok(r / (1.0 - big_delta))
}

/// Deletion test, inclusive at the threshold. The relative guard tolerates
/// round-off at the exact boundary: a negative-feedback floor
/// `theta / (1 - delta)` decayed once lands on `theta` only up to one ulp.
pub fn below_threshold(s: f64, theta: f64) -> bool {
    s <= theta + theta.abs() * 1e-12
}

/// Remove every node with strength at or below `theta`; returns the deleted
/// ids in ascending order.
pub fn prune(states: &mut BTreeMap<usize, f64>, theta: f64) -> Vec<usize> {
    let doomed: Vec<usize> = states
        .iter()
        .filter(|(_, &s)| below_threshold(s, theta))
        .map(|(&id, _)| id)
        .collect();
    for id in &doomed {
        states.remove(id);
    }
    doomed
}

/// Per-activation record emitted by [`StrengthSim`].
#[derive(Debug, Clone, Copy)]
pub struct ActivationRow {
    pub iteration: u64,
    /// Activation index within the iteration, 0-based.
    pub activation: usize,
    /// Live episode count at the time of the update.
    pub n: usize,
    pub delta: f64,
    /// Strength of the tracked node, if still alive.
    pub tracked: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub pruned: usize,
}

/// Round-robin population simulator.
///
/// One iteration activates every live node once; the activated node is
/// reinforced while all others decay, then deletion runs. Node 0 is the
/// tracked node and is placed last in the rotation, so its value right after
/// an iteration matches the closed-form iterate.
#[derive(Debug, Clone)]
pub struct StrengthSim {
    params: StrengthParams,
    strengths: Vec<f64>,
    /// Parallel flag: strengths[0] is the tracked node while `tracked_alive`.
    tracked_alive: bool,
    pub tracked_pruned_at: Option<u64>,
    iteration: u64,
}

impl StrengthSim {
    pub fn new(params: StrengthParams, n: usize) -> Result<Self, StrengthError> {
        params.validate()?;
        Ok(Self {
            params,
            strengths: vec![params.s_init; n],
            tracked_alive: n > 0,
            tracked_pruned_at: None,
            iteration: 0,
        })
    }

    pub fn population(&self) -> usize {
        self.strengths.len()
    }

    pub fn tracked(&self) -> Option<f64> {
        if self.tracked_alive {
            self.strengths.first().copied()
        } else {
            None
        }
    }

    /// Grow or shrink the population. New nodes start at `s_init`; shrinking
    /// removes the newest nodes first, never the tracked node.
    pub fn set_population(&mut self, n: usize) {
        let n = n.max(1);
        if n > self.strengths.len() {
            self.strengths.resize(n, self.params.s_init);
        } else {
            let keep = n.max(if self.tracked_alive { 1 } else { 0 });
            self.strengths.truncate(keep);
        }
    }

    /// Run one full iteration (`n` activations), invoking `row` after every
    /// activation.
    pub fn step_iteration<F: FnMut(ActivationRow)>(&mut self, mut row: F) {
        self.iteration += 1;
        let n = self.strengths.len();
        for k in 0..n {
            if self.strengths.is_empty() {
                break;
            }
            let live = self.strengths.len();
            // Rotate so the tracked node (index 0) is reinforced last.
            let winner = (k + 1) % n;
            let delta = self.params.effective_delta(live);
            for (j, s) in self.strengths.iter_mut().enumerate() {
                let event = if j == winner {
                    StrengthEvent::Reactivated
                } else {
                    StrengthEvent::Decayed
                };
                *s = update_strength(*s, event, &self.params, live);
            }
            let pruned = self.prune_population();
            let (min, max) = self
                .strengths
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                    (lo.min(s), hi.max(s))
                });
            row(ActivationRow {
                iteration: self.iteration,
                activation: k,
                n: self.strengths.len(),
                delta,
                tracked: self.tracked(),
                min,
                max,
                pruned,
            });
        }
    }

    fn prune_population(&mut self) -> usize {
        let theta = self.params.theta;
        let before = self.strengths.len();
        if self.tracked_alive && !self.strengths.is_empty() {
            if below_threshold(self.strengths[0], theta) {
                self.tracked_alive = false;
                self.tracked_pruned_at = Some(self.iteration);
            }
        }
        self.strengths.retain(|&s| !below_threshold(s, theta));
        before - self.strengths.len()
    }
}
