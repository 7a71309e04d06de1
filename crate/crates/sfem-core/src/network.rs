//! The SF-EM network.
//!
//! Four input channels (user action, environment, device state, device
//! event) feed a fusion-ART event layer. Event firings develop a buffered
//! sequence code, and the episode layer clusters those codes into two
//! fields: ordinary memory, which carries strength and per-node vigilance
//! dynamics plus the feedback mechanism, and negative memory, which stores
//! rejected service routines with frozen parameters and blocks their
//! re-retrieval. The event layer and the negative field never prune and
//! never modulate, so they keep learning every kind of input.
//!
//! An input is either a context (`[c; 0]`: user, environment and device
//! state with a zero device-event half) or a service (`[0; s]`: a device
//! event alone); anything else violates the input contract.
//!
//! Retrieval deliberately does not reuse the learning vigilance: a one-event
//! cue can never reach a high match fraction against a long episode, so
//! candidates compete on vigilance-modulated choice activation and must only
//! clear an activation floor `t_min`. Resonance gating applies during
//! learning alone.

use crate::art::{
    choice_activation, commit_new, compete, template_learn, template_match,
    ActivityVector, ArtError, ArtParams, CategoryNode,
};
use crate::codec::{
    decode_sequence, deepart_step, encode_sequence, CodecError, CodecParams, CodecScheme,
    SequenceCode,
};
use crate::feedback::{
    classify_feedback, modulate_strength, modulate_vigilance, FeedbackClass, FeedbackParams,
};
use crate::recognize::{
    recognize_episodes, BufferError, Episode, EpisodeToken, RecognizeParams, WorkingBuffer,
};
use crate::strength::{below_threshold, update_strength, StrengthError, StrengthEvent, StrengthParams};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error(transparent)]
    Art(#[from] ArtError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Buffer(#[from] BufferError),
    #[error(transparent)]
    Strength(#[from] StrengthError),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("episode of length {0} is too short to commit (need >= 2)")]
    EpisodeTooShort(usize),
    #[error("retrieval cue must not be empty")]
    EmptyCue,
    #[error("the feedback mechanism is disabled on this network")]
    FeedbackDisabled,
    #[error("unsupported snapshot version {0}")]
    SnapshotVersion(u32),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error("configuration: {0}")]
    Config(String),
}

/// Raw per-channel dimensions. The user channel includes one reserved
/// trailing slot for the time-gap token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelDims {
    pub user: usize,
    pub env: usize,
    pub dev_state: usize,
    pub dev_event: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Context,
    Service,
}

/// One observation, already encoded per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkInput {
    pub user: Vec<f64>,
    pub env: Vec<f64>,
    pub dev_state: Vec<f64>,
    pub dev_event: Vec<f64>,
}

fn any_nonzero(v: &[f64]) -> bool {
    v.iter().any(|&x| x != 0.0)
}

impl NetworkInput {
    pub fn context(user: Vec<f64>, env: Vec<f64>, dev_state: Vec<f64>, dev_event_dim: usize) -> Self {
        Self {
            user,
            env,
            dev_state,
            dev_event: vec![0.0; dev_event_dim],
        }
    }

    pub fn service(dims: &ChannelDims, dev_event: Vec<f64>) -> Self {
        Self {
            user: vec![0.0; dims.user],
            env: vec![0.0; dims.env],
            dev_state: vec![0.0; dims.dev_state],
            dev_event,
        }
    }

    /// Which half of the `[c; 0]` / `[0; s]` contract this input occupies.
    pub fn kind(&self) -> Result<InputKind, NetworkError> {
        let context = any_nonzero(&self.user) || any_nonzero(&self.env) || any_nonzero(&self.dev_state);
        let service = any_nonzero(&self.dev_event);
        match (context, service) {
            (true, false) => Ok(InputKind::Context),
            (false, true) => Ok(InputKind::Service),
            (true, true) => Err(NetworkError::MalformedInput(
                "both context and service halves are nonzero".into(),
            )),
            (false, false) => Err(NetworkError::MalformedInput(
                "input is entirely zero".into(),
            )),
        }
    }
}

/// An episode-field node. Ordinary nodes evolve their strength and
/// vigilance; negative nodes keep both frozen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeNode {
    pub weights: Vec<f64>,
    pub strength: f64,
    pub vigilance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Ordinary,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfemConfig {
    pub dims: ChannelDims,
    /// Event-layer contribution weight, uniform across the four channels.
    pub gamma: f64,
    pub alpha: f64,
    /// Event-layer learning rate.
    pub beta: f64,
    /// Event-layer vigilance, uniform across channels and never modulated.
    pub rho: f64,
    /// Episode-layer learning rate.
    pub episode_beta: f64,
    /// Initial vigilance of fresh ordinary episode nodes.
    pub rho_init: f64,
    /// Negative-field vigilance used both to cluster rejected routines and
    /// to block matching candidates at retrieval.
    pub rho_negative: f64,
    /// Retrieval activation floor: the best unblocked candidate must reach
    /// it or no service is offered.
    pub t_min: f64,
    pub codec: CodecParams,
    pub strength: StrengthParams,
    pub feedback: FeedbackParams,
    pub feedback_enabled: bool,
    pub negative_enabled: bool,
    pub buffer_capacity: usize,
    pub recognize: RecognizeParams,
}

impl SfemConfig {
    pub fn new(dims: ChannelDims) -> Self {
        Self {
            dims,
            gamma: 0.25,
            alpha: 0.01,
            beta: 0.5,
            rho: 0.9,
            episode_beta: 0.5,
            rho_init: 0.9,
            rho_negative: 0.9,
            t_min: 0.05,
            codec: CodecParams::default(),
            strength: StrengthParams::default(),
            feedback: FeedbackParams::default(),
            feedback_enabled: true,
            negative_enabled: true,
            buffer_capacity: 256,
            recognize: RecognizeParams::default(),
        }
    }

    fn art_params(&self) -> ArtParams {
        ArtParams::uniform(4, self.gamma, self.alpha, self.beta, self.rho)
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        self.art_params().validate()?;
        self.strength.validate()?;
        for (name, v) in [
            ("rho_init", self.rho_init),
            ("rho_negative", self.rho_negative),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(NetworkError::Config(format!("{name} = {v} outside (0, 1]")));
            }
        }
        if !(0.0..=1.0).contains(&self.episode_beta) {
            return Err(NetworkError::Config(format!(
                "episode_beta = {} outside [0, 1]",
                self.episode_beta
            )));
        }
        if self.t_min < 0.0 {
            return Err(NetworkError::Config(format!("t_min = {} negative", self.t_min)));
        }
        if self.dims.user == 0 {
            return Err(NetworkError::Config(
                "user channel needs at least the reserved time-gap slot".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of an episode-layer learning pass.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutcome {
    pub node: usize,
    pub created: bool,
    pub pruned: Vec<usize>,
}

/// A successful retrieval: the winning node, its decoded chronological
/// event sequence, and the winning activation.
#[derive(Debug, Clone, PartialEq)]
pub struct Retrieval {
    pub node: usize,
    pub events: Vec<usize>,
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrieveOutcome {
    pub retrieval: Option<Retrieval>,
    pub pruned: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SfemNetwork {
    config: SfemConfig,
    event_nodes: Vec<CategoryNode>,
    episodes: BTreeMap<usize, EpisodeNode>,
    next_episode_id: usize,
    negatives: BTreeMap<usize, EpisodeNode>,
    next_negative_id: usize,
    buffer: WorkingBuffer,
    code: SequenceCode,
    gap_node: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    version: u32,
    network: SfemNetwork,
}

/// Choice activation of an episode field: overlap over weight norm. Codes
/// and weights may differ in length as the event layer grows; missing
/// entries count as zero.
fn episode_choice(y: &[f64], w: &[f64]) -> f64 {
    let wn: f64 = w.iter().sum();
    if wn == 0.0 {
        return 0.0;
    }
    let and: f64 = y.iter().zip(w).map(|(a, b)| a.min(*b)).sum();
    and / wn
}

/// Match fraction of a code against episode weights: overlap over code norm.
fn episode_match(y: &[f64], w: &[f64]) -> f64 {
    let yn: f64 = y.iter().sum();
    if yn == 0.0 {
        return 0.0;
    }
    let and: f64 = y.iter().zip(w).map(|(a, b)| a.min(*b)).sum();
    and / yn
}

impl SfemNetwork {
    pub fn new(mut config: SfemConfig) -> Result<Self, NetworkError> {
        // The modulation functions share the strength notions of the
        // lifecycle parameters; keep them in lockstep.
        config.feedback.theta = config.strength.theta;
        config.feedback.s_init = config.strength.s_init;
        config.feedback.rho_init = config.rho_init;
        config.validate()?;
        let buffer = WorkingBuffer::new(config.buffer_capacity);
        Ok(Self {
            config,
            event_nodes: Vec::new(),
            episodes: BTreeMap::new(),
            next_episode_id: 0,
            negatives: BTreeMap::new(),
            next_negative_id: 0,
            buffer,
            code: SequenceCode::zeros(0, CodecScheme::DeepArt),
            gap_node: None,
        })
    }

    pub fn config(&self) -> &SfemConfig {
        &self.config
    }

    pub fn event_count(&self) -> usize {
        self.event_nodes.len()
    }

    pub fn episode_count(&self) -> usize {
        self.episodes.len()
    }

    pub fn negative_count(&self) -> usize {
        self.negatives.len()
    }

    pub fn episode(&self, id: usize) -> Option<&EpisodeNode> {
        self.episodes.get(&id)
    }

    pub fn episode_ids(&self) -> Vec<usize> {
        self.episodes.keys().copied().collect()
    }

    pub fn strengths(&self) -> BTreeMap<usize, f64> {
        self.episodes.iter().map(|(&id, n)| (id, n.strength)).collect()
    }

    pub fn vigilances(&self) -> BTreeMap<usize, f64> {
        self.episodes.iter().map(|(&id, n)| (id, n.vigilance)).collect()
    }

    pub fn buffer(&self) -> &WorkingBuffer {
        &self.buffer
    }

    pub fn gap_node(&self) -> Option<usize> {
        self.gap_node
    }

    pub fn feedback_enabled(&self) -> bool {
        self.config.feedback_enabled
    }

    /// Decode the stored weights of an ordinary node back to its event
    /// sequence.
    pub fn decode_episode(&self, id: usize) -> Result<Vec<usize>, NetworkError> {
        let node = self.episodes.get(&id).ok_or(NetworkError::UnknownNode(id))?;
        let code = SequenceCode::from_values(node.weights.clone(), CodecScheme::DeepArt);
        Ok(decode_sequence(&code, &self.config.codec)?)
    }

    fn validate_input(&self, input: &NetworkInput) -> Result<(), NetworkError> {
        let d = &self.config.dims;
        for (name, got, want) in [
            ("user", input.user.len(), d.user),
            ("env", input.env.len(), d.env),
            ("dev_state", input.dev_state.len(), d.dev_state),
            ("dev_event", input.dev_event.len(), d.dev_event),
        ] {
            if got != want {
                return Err(NetworkError::MalformedInput(format!(
                    "{name} channel has dimension {got}, catalog says {want}"
                )));
            }
        }
        input.kind()?;
        Ok(())
    }

    /// Run the event-layer choice/compete/match cycle for one activity
    /// vector; resonance learns into the winner, failure commits a new node.
    fn classify_activity(&mut self, x: &ActivityVector) -> Result<(usize, bool), NetworkError> {
        let params = self.config.art_params();
        if !self.event_nodes.is_empty() {
            let uniform = vec![self.config.rho; self.event_nodes.len()];
            let t = choice_activation(x, &self.event_nodes, &params, &uniform, self.config.rho)?;
            if let Some(j) = compete(&t) {
                let (_, resonates) = template_match(x, &self.event_nodes[j], &params.rho)?;
                if resonates {
                    template_learn(x, &mut self.event_nodes[j], params.beta)?;
                    return Ok((j, false));
                }
            }
        }
        self.event_nodes.push(commit_new(x));
        self.code.push_zero();
        Ok((self.event_nodes.len() - 1, true))
    }

    /// Observe one input: classify it at the event layer, append the firing
    /// to the working buffer and advance the running sequence code. Returns
    /// the event-node index.
    pub fn observe_event(&mut self, input: &NetworkInput, time: f64) -> Result<usize, NetworkError> {
        self.validate_input(input)?;
        let x = ActivityVector::encode(&[
            input.user.clone(),
            input.env.clone(),
            input.dev_state.clone(),
            input.dev_event.clone(),
        ])?;
        let (idx, _) = self.classify_activity(&x)?;
        self.buffer.push(idx, time)?;
        self.code = deepart_step(&self.code, idx, &self.config.codec)?;
        Ok(idx)
    }

    /// The event node reserved for the time-gap token, committed on demand
    /// from the reserved one-hot in the user channel.
    pub fn ensure_gap_node(&mut self) -> Result<usize, NetworkError> {
        if let Some(idx) = self.gap_node {
            return Ok(idx);
        }
        let d = &self.config.dims;
        let mut user = vec![0.0; d.user];
        user[d.user - 1] = 1.0;
        let x = ActivityVector::encode(&[
            user,
            vec![0.0; d.env],
            vec![0.0; d.dev_state],
            vec![0.0; d.dev_event],
        ])?;
        let (idx, _) = self.classify_activity(&x)?;
        self.gap_node = Some(idx);
        Ok(idx)
    }

    /// Recognise episodes in the current working buffer.
    pub fn recognize_episodes(&self) -> Vec<Episode> {
        recognize_episodes(&self.buffer, &self.config.recognize)
    }

    /// Drop buffered events and restart the running code, e.g. at a phase
    /// boundary after batch learning.
    pub fn reset_context(&mut self) {
        self.buffer.clear();
        self.code = SequenceCode::zeros(self.event_count(), CodecScheme::DeepArt);
    }

    fn token_indices(&mut self, ep: &Episode) -> Result<Vec<usize>, NetworkError> {
        let mut out = Vec::with_capacity(ep.tokens.len());
        for token in &ep.tokens {
            match token {
                EpisodeToken::Event(e) => {
                    if *e >= self.event_count() {
                        return Err(NetworkError::UnknownNode(*e));
                    }
                    out.push(*e);
                }
                EpisodeToken::TimeGap => out.push(self.ensure_gap_node()?),
            }
        }
        Ok(out)
    }

    fn encode_events(&self, events: &[usize]) -> Result<SequenceCode, NetworkError> {
        Ok(encode_sequence(events, self.event_count(), &self.config.codec)?)
    }

    /// Decay every ordinary node except `winner`, then prune. The live
    /// episode count feeds the adaptive decay factor.
    fn decay_and_prune(&mut self, winner: Option<usize>) -> Vec<usize> {
        let n = self.episodes.len();
        let params = self.config.strength;
        for (&id, node) in self.episodes.iter_mut() {
            if Some(id) != winner {
                node.strength = update_strength(node.strength, StrengthEvent::Decayed, &params, n);
            }
        }
        let doomed: Vec<usize> = self
            .episodes
            .iter()
            .filter(|(&id, node)| Some(id) != winner && below_threshold(node.strength, params.theta))
            .map(|(&id, _)| id)
            .collect();
        for id in &doomed {
            self.episodes.remove(id);
        }
        doomed
    }

    fn field_learn(
        field: &mut BTreeMap<usize, EpisodeNode>,
        next_id: &mut usize,
        y: &SequenceCode,
        beta: f64,
        new_strength: f64,
        new_vigilance: f64,
    ) -> (usize, bool) {
        let values = y.values();
        let mut best: Option<(usize, f64)> = None;
        for (&id, node) in field.iter() {
            let t = episode_choice(values, &node.weights);
            if best.map_or(true, |(_, bt)| t > bt) {
                best = Some((id, t));
            }
        }
        if let Some((id, _)) = best {
            let node = field.get_mut(&id).expect("winner exists");
            if episode_match(values, &node.weights) >= node.vigilance {
                // Template learning toward the fuzzy AND; pad first so a
                // grown event layer cannot truncate the code.
                if node.weights.len() < values.len() {
                    node.weights.resize(values.len(), 0.0);
                }
                for (w, &v) in node.weights.iter_mut().zip(values) {
                    *w = (1.0 - beta) * *w + beta * v.min(*w);
                }
                return (id, false);
            }
        }
        let id = *next_id;
        *next_id += 1;
        field.insert(
            id,
            EpisodeNode {
                weights: values.to_vec(),
                strength: new_strength,
                vigilance: new_vigilance,
            },
        );
        (id, true)
    }

    /// Learn an episode into the requested field.
    ///
    /// Ordinary learning is one full episode-field activation: the winner is
    /// reactivated (or created at `s_init`), everything else decays and the
    /// threshold prunes. Negative learning stores the routine with frozen
    /// parameters and touches no ordinary strength.
    pub fn learn_episode(
        &mut self,
        ep: &Episode,
        polarity: Polarity,
    ) -> Result<LearnOutcome, NetworkError> {
        if ep.tokens.len() < 2 {
            return Err(NetworkError::EpisodeTooShort(ep.tokens.len()));
        }
        let indices = self.token_indices(ep)?;
        let y = self.encode_events(&indices)?;
        match polarity {
            Polarity::Ordinary => {
                let params = self.config.strength;
                let (id, created) = Self::field_learn(
                    &mut self.episodes,
                    &mut self.next_episode_id,
                    &y,
                    self.config.episode_beta,
                    params.s_init,
                    self.config.rho_init,
                );
                if !created {
                    let n = self.episodes.len();
                    let node = self.episodes.get_mut(&id).expect("winner exists");
                    node.strength =
                        update_strength(node.strength, StrengthEvent::Reactivated, &params, n);
                }
                let pruned = self.decay_and_prune(Some(id));
                Ok(LearnOutcome { node: id, created, pruned })
            }
            Polarity::Negative => {
                let (id, created) = Self::field_learn(
                    &mut self.negatives,
                    &mut self.next_negative_id,
                    &y,
                    self.config.episode_beta,
                    self.config.strength.s_init,
                    self.config.rho_negative,
                );
                Ok(LearnOutcome { node: id, created, pruned: Vec::new() })
            }
        }
    }

    fn blocked_by_negative(&self, events: &[usize]) -> Result<bool, NetworkError> {
        if self.negatives.is_empty() {
            return Ok(false);
        }
        let z = self.encode_events(events)?;
        Ok(self
            .negatives
            .values()
            .any(|node| episode_match(z.values(), &node.weights) >= self.config.rho_negative))
    }

    /// Retrieve a service routine for a partial cue.
    ///
    /// The cue is encoded and ordinary nodes compete on vigilance-modulated
    /// choice activation. Candidates are taken in descending activation;
    /// one whose decoded routine resonates with any negative node is
    /// skipped. The first unblocked candidate at or above `t_min` wins and
    /// is decoded into its chronological event list.
    ///
    /// Every losing ordinary node decays (a completed field activation,
    /// win or lose) and pruning runs. With the feedback mechanism enabled
    /// the winner's own update is deferred: it is resolved later by
    /// [`SfemNetwork::apply_feedback`] or [`SfemNetwork::confirm_service`],
    /// so a rejected service never collects a reinforcement first. Without
    /// feedback the winner is reactivated immediately.
    pub fn retrieve_service(&mut self, cue: &[usize]) -> Result<RetrieveOutcome, NetworkError> {
        if cue.is_empty() {
            return Err(NetworkError::EmptyCue);
        }
        for &e in cue {
            if e >= self.event_count() {
                return Err(NetworkError::UnknownNode(e));
            }
        }
        let y = self.encode_events(cue)?;
        let mut candidates: Vec<(usize, f64)> = self
            .episodes
            .iter()
            .map(|(&id, node)| {
                let t = (self.config.rho_init / node.vigilance)
                    * episode_choice(y.values(), &node.weights);
                (id, t)
            })
            .collect();
        candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));

        let mut winner: Option<Retrieval> = None;
        for (id, t) in candidates {
            if t < self.config.t_min {
                break;
            }
            let node = &self.episodes[&id];
            let code = SequenceCode::from_values(node.weights.clone(), CodecScheme::DeepArt);
            let events = match decode_sequence(&code, &self.config.codec) {
                Ok(events) => events,
                // Blurred weights that no longer decode cannot be served.
                Err(_) => continue,
            };
            if self.blocked_by_negative(&events)? {
                continue;
            }
            winner = Some(Retrieval { node: id, events, activation: t });
            break;
        }

        if let Some(r) = &winner {
            if !self.config.feedback_enabled {
                let params = self.config.strength;
                let n = self.episodes.len();
                let node = self.episodes.get_mut(&r.node).expect("winner exists");
                node.strength =
                    update_strength(node.strength, StrengthEvent::Reactivated, &params, n);
            }
        }
        let pruned = self.decay_and_prune(winner.as_ref().map(|r| r.node));
        Ok(RetrieveOutcome { retrieval: winner, pruned })
    }

    /// Resolve a served episode that got no explicit feedback: implicit
    /// acceptance reactivates it. A no-op when feedback is disabled (the
    /// winner was already reactivated at retrieval).
    pub fn confirm_service(&mut self, node_id: usize) -> Result<(), NetworkError> {
        if !self.config.feedback_enabled {
            return Ok(());
        }
        let params = self.config.strength;
        let n = self.episodes.len();
        let node = self
            .episodes
            .get_mut(&node_id)
            .ok_or(NetworkError::UnknownNode(node_id))?;
        node.strength = update_strength(node.strength, StrengthEvent::Reactivated, &params, n);
        Ok(())
    }

    /// Apply user feedback to a serviced ordinary node: modulate its
    /// strength and vigilance, and register the routine into negative
    /// memory when the rating is negative.
    pub fn apply_feedback(&mut self, node_id: usize, xi: f64) -> Result<FeedbackClass, NetworkError> {
        if !self.config.feedback_enabled {
            return Err(NetworkError::FeedbackDisabled);
        }
        if !self.episodes.contains_key(&node_id) {
            return Err(NetworkError::UnknownNode(node_id));
        }
        let class = classify_feedback(xi, self.config.feedback.xi_w);
        let live = FeedbackParams {
            delta_s: self.config.strength.effective_delta(self.episodes.len()),
            ..self.config.feedback
        };
        {
            let node = self.episodes.get_mut(&node_id).expect("checked above");
            node.strength = modulate_strength(node.strength, Some(class), &live);
            node.vigilance = modulate_vigilance(node.vigilance, Some(class), &live);
        }
        if class == FeedbackClass::Negative && self.config.negative_enabled {
            if let Ok(events) = self.decode_episode(node_id) {
                let y = self.encode_events(&events)?;
                Self::field_learn(
                    &mut self.negatives,
                    &mut self.next_negative_id,
                    &y,
                    self.config.episode_beta,
                    self.config.strength.s_init,
                    self.config.rho_negative,
                );
            }
        }
        Ok(class)
    }

    pub fn to_snapshot_json(&self) -> Result<String, NetworkError> {
        let snapshot = Snapshot {
            version: SNAPSHOT_VERSION,
            network: self.clone(),
        };
        serde_json::to_string_pretty(&snapshot).map_err(|e| NetworkError::Snapshot(e.to_string()))
    }

    pub fn from_snapshot_json(json: &str) -> Result<Self, NetworkError> {
        let snapshot: Snapshot =
            serde_json::from_str(json).map_err(|e| NetworkError::Snapshot(e.to_string()))?;
        if snapshot.version != SNAPSHOT_VERSION {
            return Err(NetworkError::SnapshotVersion(snapshot.version));
        }
        snapshot.network.config.validate()?;
        Ok(snapshot.network)
    }
}

