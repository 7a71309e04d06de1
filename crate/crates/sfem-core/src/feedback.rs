//! User-feedback classification and memory-parameter modulation.
//!
//! Feedback is a scalar rating compared against the weak-positive value
//! `xi_w`: above it is explicit satisfaction, equal is implicit acceptance,
//! below is rejection. Strong positives push strength up with a doubled
//! reinforcement and lower the node's vigilance (easier to activate);
//! negatives decay strength — twice, or straight to a deletion floor once the
//! strength proxy says the node was not activated within the last `p`
//! episodes — and raise vigilance (harder to activate).

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeedbackClass {
    StrongPositive,
    WeakPositive,
    Negative,
}

/// Classify a rating against the weak-positive value.
pub fn classify_feedback(xi: f64, xi_w: f64) -> FeedbackClass {
    if xi > xi_w {
        FeedbackClass::StrongPositive
    } else if xi < xi_w {
        FeedbackClass::Negative
    } else {
        FeedbackClass::WeakPositive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackParams {
    /// Reinforcement factor for the strength modulation.
    pub r_s: f64,
    /// Strength decay used by the modulation functions. The network keeps
    /// this equal to the live effective decay factor at the moment feedback
    /// is applied.
    pub delta_s: f64,
    /// Episode parameter: a node whose strength has fallen to the level it
    /// would have after `p` consecutive decays counts as inactive.
    pub p: u32,
    /// Vigilance reinforcement factor.
    pub r_rho: f64,
    /// Vigilance decay factor.
    pub delta_rho: f64,
    pub rho_init: f64,
    pub theta: f64,
    pub s_init: f64,
    /// Weak-positive feedback value; ratings are classified against it.
    pub xi_w: f64,
}

impl Default for FeedbackParams {
    fn default() -> Self {
        Self {
            r_s: 0.1,
            delta_s: 0.05,
            p: 2,
            r_rho: 0.1,
            delta_rho: 0.05,
            rho_init: 0.9,
            theta: 0.1,
            s_init: 0.8,
            xi_w: 1.0,
        }
    }
}

/// Strength development of the serviced node. `None` means no feedback was
/// given, which is a plain decay step.
pub fn modulate_strength(s_old: f64, fb: Option<FeedbackClass>, p: &FeedbackParams) -> f64 {
    let next = match fb {
        Some(FeedbackClass::StrongPositive) => {
            (s_old + 2.0 * (1.0 - s_old) * p.r_s).min(1.0)
        }
        Some(FeedbackClass::WeakPositive) => s_old + (1.0 - s_old) * p.r_s,
        Some(FeedbackClass::Negative) => {
            let retained = (1.0 - p.delta_s).powi(p.p as i32);
            if s_old - p.s_init * retained > 0.0 {
                // Activated recently enough: decay twice.
                s_old * (1.0 - p.delta_s).powi(2)
            } else {
                // Deletion floor: one more missed activation lands on theta.
                p.theta / (1.0 - p.delta_s)
            }
        }
        None => s_old * (1.0 - p.delta_s),
    };
    next.clamp(0.0, 1.0)
}

/// Vigilance development of the serviced node. Strong positives lower it,
/// negatives raise it toward 1; weak positives and silence leave it alone.
pub fn modulate_vigilance(rho_old: f64, fb: Option<FeedbackClass>, p: &FeedbackParams) -> f64 {
    match fb {
        Some(FeedbackClass::StrongPositive) => rho_old * (1.0 - p.delta_rho),
        Some(FeedbackClass::Negative) => (rho_old + (1.0 - rho_old) * p.r_rho).min(1.0),
        Some(FeedbackClass::WeakPositive) | None => rho_old,
    }
}
