//! Personal service management: executing a retrieved episode against the
//! simulated timeline.
//!
//! A plan walks its episode in order. User-type events block until a
//! matching observation arrives (or a timeout aborts the plan silently);
//! device-type events are actuated immediately; events already observed
//! since the plan started — including the cue that triggered retrieval —
//! are skipped. Feedback routes to the plan's origin node: a negative
//! rating aborts the service, registers the routine in negative memory and
//! switches the scheduler into observation mode, where subsequently
//! demonstrated device events accumulate into a replacement episode.

use crate::feedback::FeedbackClass;
use crate::network::{NetworkError, Retrieval, SfemNetwork};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PsmError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("no plan is active and no recently completed plan accepts feedback")]
    NoTarget,
}

/// How a plan-relevant event is executed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventClass {
    /// Wait for the user (context events).
    User,
    /// Actuate a device.
    Device { device: String, action: String },
    /// Time-gap tokens execute as no-ops; the waiting happens on the next
    /// user event anyway.
    Gap,
}

/// Classification and display label of each known event node, maintained by
/// the simulation loop as events are first observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventMeta {
    pub class: EventClass,
    pub label: String,
}

pub type EventRegistry = BTreeMap<usize, EventMeta>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Actuation {
    pub time: f64,
    pub device: String,
    pub action: String,
    pub source_node: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbortReason {
    NegativeFeedback,
    Timeout,
    Stopped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanStatus {
    Waiting,
    Actuating,
    Done,
    Aborted(AbortReason),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServicePlan {
    pub episode: Vec<usize>,
    pub cursor: usize,
    pub origin_node: usize,
    pub status: PlanStatus,
    observed: BTreeSet<usize>,
    started_at: f64,
    wait_since: f64,
    pub got_feedback: bool,
}

/// What a plan consumes on one step: an observed event or the passage of
/// time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanInput {
    Event(usize),
    Tick,
}

impl ServicePlan {
    /// Start a plan. `initial_observed` is the retrieval cue window: those
    /// events count as already complete.
    pub fn new(retrieval: &Retrieval, initial_observed: &[usize], now: f64) -> Self {
        Self {
            episode: retrieval.events.clone(),
            cursor: 0,
            origin_node: retrieval.node,
            status: PlanStatus::Waiting,
            observed: initial_observed.iter().copied().collect(),
            started_at: now,
            wait_since: now,
            got_feedback: false,
        }
    }

    pub fn active(&self) -> bool {
        matches!(self.status, PlanStatus::Waiting | PlanStatus::Actuating)
    }

    /// User-type events of the walked prefix, in episode order: the part of
    /// the routine the user had already performed when the plan ended.
    pub fn completed_user_prefix(&self, registry: &EventRegistry) -> Vec<usize> {
        self.episode[..self.cursor.min(self.episode.len())]
            .iter()
            .copied()
            .filter(|e| matches!(registry.get(e), Some(m) if m.class == EventClass::User))
            .collect()
    }

    fn class_of<'r>(&self, event: usize, registry: &'r EventRegistry) -> &'r EventClass {
        registry.get(&event).map(|m| &m.class).unwrap_or(&EventClass::User)
    }
}

/// Advance a plan by one step, emitting at most one actuation. Call
/// repeatedly until it returns `None` to drain consecutive device events;
/// the caller can interleave feedback between actuations.
pub fn execute_step(
    plan: &mut ServicePlan,
    input: PlanInput,
    now: f64,
    registry: &EventRegistry,
    wait_timeout: f64,
) -> Option<Actuation> {
    if !plan.active() {
        return None;
    }
    let mut incoming = match input {
        PlanInput::Event(e) => {
            plan.observed.insert(e);
            Some(e)
        }
        PlanInput::Tick => None,
    };
    while plan.cursor < plan.episode.len() {
        let current = plan.episode[plan.cursor];
        // isComplete: anything observed since the plan started, and gap
        // tokens, are skipped outright.
        if plan.observed.contains(&current) || *plan.class_of(current, registry) == EventClass::Gap
        {
            plan.cursor += 1;
            plan.wait_since = now;
            continue;
        }
        match plan.class_of(current, registry).clone() {
            EventClass::User => {
                if incoming.take() == Some(current) {
                    plan.cursor += 1;
                    plan.wait_since = now;
                    continue;
                }
                if now - plan.wait_since > wait_timeout {
                    plan.status = PlanStatus::Aborted(AbortReason::Timeout);
                    return None;
                }
                plan.status = PlanStatus::Waiting;
                return None;
            }
            EventClass::Device { device, action } => {
                plan.status = PlanStatus::Actuating;
                plan.cursor += 1;
                plan.wait_since = now;
                plan.observed.insert(current);
                return Some(Actuation {
                    time: now,
                    device,
                    action,
                    source_node: plan.origin_node,
                });
            }
            EventClass::Gap => unreachable!("gaps are skipped above"),
        }
    }
    plan.status = PlanStatus::Done;
    None
}

/// Replacement-episode observation: the user prefix of the rejected (or
/// superseded) routine plus whatever device events the user demonstrates
/// afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub seed: Vec<usize>,
    pub collected: Vec<usize>,
}

impl Observation {
    pub fn episode_events(&self) -> Vec<usize> {
        let mut all = self.seed.clone();
        all.extend(&self.collected);
        all
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchedulerParams {
    /// Seconds a plan waits on one user event before aborting silently.
    pub wait_timeout: f64,
    /// Seconds after completion during which feedback still routes to the
    /// finished plan's node.
    pub grace: f64,
}

impl Default for SchedulerParams {
    fn default() -> Self {
        Self {
            wait_timeout: 600.0,
            grace: 60.0,
        }
    }
}

/// What handling a feedback value did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackOutcome {
    /// Modulation applied to an active plan's node.
    Applied(FeedbackClass),
    /// Modulation applied to a just-completed plan's node.
    AppliedLate(FeedbackClass),
    /// Feedback mechanism disabled: a low rating only stops the service.
    Stopped,
    Ignored,
}

/// One service scheduler: at most one active plan, plus the grace-window
/// and observation-mode bookkeeping around it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Scheduler {
    pub params: SchedulerParams,
    pub plan: Option<ServicePlan>,
    pub observation: Option<Observation>,
    last_done: Option<LastDone>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LastDone {
    node: usize,
    at: f64,
    user_prefix: Vec<usize>,
}

impl Scheduler {
    pub fn new(params: SchedulerParams) -> Self {
        Self {
            params,
            plan: None,
            observation: None,
            last_done: None,
        }
    }

    pub fn plan_active(&self) -> bool {
        self.plan.as_ref().is_some_and(|p| p.active())
    }

    pub fn start_plan(&mut self, retrieval: &Retrieval, cue: &[usize], now: f64) {
        self.plan = Some(ServicePlan::new(retrieval, cue, now));
    }

    /// Mark the active plan finished and resolve its strength update:
    /// completion without explicit feedback counts as implicit acceptance.
    pub fn finish_plan(&mut self, now: f64, registry: &EventRegistry, network: &mut SfemNetwork) {
        if let Some(plan) = self.plan.take() {
            if plan.status == PlanStatus::Done {
                if !plan.got_feedback {
                    let _ = network.confirm_service(plan.origin_node);
                }
                self.last_done = Some(LastDone {
                    node: plan.origin_node,
                    at: now,
                    user_prefix: plan.completed_user_prefix(registry),
                });
            }
        }
    }

    /// Route a feedback rating per the current plan state.
    ///
    /// With the feedback mechanism enabled the rating modulates the serviced
    /// node; a negative rating additionally aborts the service and opens
    /// observation mode seeded with the routine's completed user prefix.
    /// With feedback disabled, a rating below the weak value acts as a bare
    /// stop signal (abort and observe, no modulation); anything else is
    /// ignored.
    pub fn handle_feedback(
        &mut self,
        xi: f64,
        now: f64,
        registry: &EventRegistry,
        network: &mut SfemNetwork,
    ) -> Result<FeedbackOutcome, PsmError> {
        let xi_w = network.config().feedback.xi_w;
        if let Some(plan) = self.plan.as_mut().filter(|p| p.active()) {
            if network.feedback_enabled() {
                let class = network.apply_feedback(plan.origin_node, xi)?;
                plan.got_feedback = true;
                if class == FeedbackClass::Negative {
                    plan.status = PlanStatus::Aborted(AbortReason::NegativeFeedback);
                    self.observation = Some(Observation {
                        seed: plan.completed_user_prefix(registry),
                        collected: Vec::new(),
                    });
                    self.plan = None;
                }
                return Ok(FeedbackOutcome::Applied(class));
            }
            if xi < xi_w {
                plan.status = PlanStatus::Aborted(AbortReason::Stopped);
                self.observation = Some(Observation {
                    seed: plan.completed_user_prefix(registry),
                    collected: Vec::new(),
                });
                self.plan = None;
                return Ok(FeedbackOutcome::Stopped);
            }
            return Ok(FeedbackOutcome::Ignored);
        }
        if let Some(done) = self.last_done.clone() {
            if now - done.at <= self.params.grace {
                if network.feedback_enabled() {
                    let class = network.apply_feedback(done.node, xi)?;
                    if class == FeedbackClass::Negative {
                        self.observation = Some(Observation {
                            seed: done.user_prefix,
                            collected: Vec::new(),
                        });
                    }
                    return Ok(FeedbackOutcome::AppliedLate(class));
                }
                if xi < xi_w {
                    self.observation = Some(Observation {
                        seed: done.user_prefix,
                        collected: Vec::new(),
                    });
                    return Ok(FeedbackOutcome::Stopped);
                }
                return Ok(FeedbackOutcome::Ignored);
            }
        }
        Ok(FeedbackOutcome::Ignored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry() -> EventRegistry {
        BTreeMap::from([
            (0, EventMeta { class: EventClass::User, label: "a".into() }),
            (
                1,
                EventMeta {
                    class: EventClass::Device { device: "dev".into(), action: "b".into() },
                    label: "b".into(),
                },
            ),
            (
                2,
                EventMeta {
                    class: EventClass::Device { device: "dev".into(), action: "c".into() },
                    label: "c".into(),
                },
            ),
        ])
    }

    fn retrieval(events: Vec<usize>) -> Retrieval {
        Retrieval { node: 7, events, activation: 0.5 }
    }

    #[test]
    fn user_then_two_devices_emits_both_after_observation() {
        let reg = registry();
        let mut plan = ServicePlan::new(&retrieval(vec![0, 1, 2]), &[], 0.0);

        // Unrelated event: no change, still waiting on the user.
        assert!(execute_step(&mut plan, PlanInput::Event(9), 1.0, &reg, 600.0).is_none());
        assert_eq!(plan.status, PlanStatus::Waiting);

        let first = execute_step(&mut plan, PlanInput::Event(0), 2.0, &reg, 600.0).unwrap();
        assert_eq!(first.action, "b");
        let second = execute_step(&mut plan, PlanInput::Tick, 2.0, &reg, 600.0).unwrap();
        assert_eq!(second.action, "c");
        assert!(execute_step(&mut plan, PlanInput::Tick, 2.0, &reg, 600.0).is_none());
        assert_eq!(plan.status, PlanStatus::Done);
    }

    #[test]
    fn already_observed_cue_events_are_skipped() {
        let reg = registry();
        let mut plan = ServicePlan::new(&retrieval(vec![0, 1]), &[0], 0.0);
        let act = execute_step(&mut plan, PlanInput::Tick, 0.0, &reg, 600.0).unwrap();
        assert_eq!(act.action, "b");
        assert!(execute_step(&mut plan, PlanInput::Tick, 0.0, &reg, 600.0).is_none());
        assert_eq!(plan.status, PlanStatus::Done);
    }

    #[test]
    fn waiting_past_the_timeout_aborts_silently() {
        let reg = registry();
        let mut plan = ServicePlan::new(&retrieval(vec![0, 1]), &[], 0.0);
        assert!(execute_step(&mut plan, PlanInput::Tick, 601.0, &reg, 600.0).is_none());
        assert_eq!(plan.status, PlanStatus::Aborted(AbortReason::Timeout));
    }

    #[test]
    fn plans_never_actuate_user_events() {
        let reg = registry();
        let mut plan = ServicePlan::new(&retrieval(vec![0, 0, 0]), &[], 0.0);
        for t in 0..3 {
            let out = execute_step(&mut plan, PlanInput::Event(0), t as f64, &reg, 600.0);
            assert!(out.is_none());
        }
    }

    #[test]
    fn completed_user_prefix_excludes_device_events() {
        let reg = registry();
        let mut plan = ServicePlan::new(&retrieval(vec![0, 1, 2]), &[0], 0.0);
        let _ = execute_step(&mut plan, PlanInput::Tick, 0.0, &reg, 600.0);
        assert_eq!(plan.completed_user_prefix(&reg), vec![0]);
    }
}
