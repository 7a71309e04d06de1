//! Raw observation records to network inputs.
//!
//! A scenario catalog declares the user-action labels, the fuzzified
//! environment variables and the devices with their states and events. The
//! interpreter turns timestamped records into context inputs (user action
//! one-hot plus the latest environment and device-state snapshot) or service
//! inputs (a device-event one-hot), keeping the snapshot sticky between
//! records so an action observed in the dark actually encodes the darkness.

use crate::network::{ChannelDims, NetworkInput};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Reserved user-channel label for the time-gap token; always the last slot.
pub const TIME_GAP_LABEL: &str = "time_gap";

#[derive(Debug, Error)]
pub enum InterpretError {
    #[error("unknown user action {got:?}; catalog lists {valid:?}")]
    UnknownUserAction { got: String, valid: Vec<String> },
    #[error("unknown environment variable {0:?}")]
    UnknownEnvVariable(String),
    #[error("unknown device {0:?}")]
    UnknownDevice(String),
    #[error("device {device:?} has no state {state:?}")]
    UnknownDeviceState { device: String, state: String },
    #[error("device {device:?} has no event {event:?}")]
    UnknownDeviceEvent { device: String, event: String },
    #[error("record {0:?} is malformed: {1}")]
    MalformedRecord(String, String),
    #[error("catalog: {0}")]
    Catalog(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    UserAction,
    EnvReading,
    DeviceState,
    DeviceEvent,
    Feedback,
}

/// One timestamped simulated observation. `name` holds the action label,
/// the environment variable, or `device:state` / `device:event`; feedback
/// records carry the rating in `xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub time: f64,
    pub kind: RecordKind,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub value: Option<f64>,
    #[serde(default)]
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvVariable {
    pub name: String,
    pub unit: String,
    pub levels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub name: String,
    #[serde(default)]
    pub states: Vec<String>,
    #[serde(default)]
    pub events: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    #[serde(default)]
    pub user_actions: Vec<String>,
    #[serde(default)]
    pub env_variables: Vec<EnvVariable>,
    #[serde(default)]
    pub devices: Vec<Device>,
}

impl Catalog {
    pub fn validate(&self) -> Result<(), InterpretError> {
        let mut seen = Vec::new();
        for label in &self.user_actions {
            if label == TIME_GAP_LABEL {
                return Err(InterpretError::Catalog(format!(
                    "user action {TIME_GAP_LABEL:?} is reserved"
                )));
            }
            if seen.contains(&label) {
                return Err(InterpretError::Catalog(format!("duplicate user action {label:?}")));
            }
            seen.push(label);
        }
        for var in &self.env_variables {
            if var.levels.len() < 2 {
                return Err(InterpretError::Catalog(format!(
                    "environment variable {:?} needs at least 2 levels",
                    var.name
                )));
            }
        }
        let mut names = Vec::new();
        for dev in &self.devices {
            if names.contains(&&dev.name) {
                return Err(InterpretError::Catalog(format!("duplicate device {:?}", dev.name)));
            }
            names.push(&dev.name);
        }
        Ok(())
    }

    /// Channel dimensions implied by the catalog. The user channel gets one
    /// reserved trailing slot for the time-gap token.
    pub fn dims(&self) -> ChannelDims {
        ChannelDims {
            user: self.user_actions.len() + 1,
            env: self.env_variables.iter().map(|v| v.levels.len()).sum(),
            dev_state: self.devices.iter().map(|d| d.states.len()).sum(),
            dev_event: self.devices.iter().map(|d| d.events.len()).sum(),
        }
    }

    pub fn user_action_index(&self, label: &str) -> Result<usize, InterpretError> {
        if label == TIME_GAP_LABEL {
            return Ok(self.user_actions.len());
        }
        self.user_actions
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| InterpretError::UnknownUserAction {
                got: label.to_string(),
                valid: self.user_actions.clone(),
            })
    }

    fn device(&self, name: &str) -> Result<&Device, InterpretError> {
        self.devices
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| InterpretError::UnknownDevice(name.to_string()))
    }

    fn state_offset(&self, device: &str) -> usize {
        self.devices
            .iter()
            .take_while(|d| d.name != device)
            .map(|d| d.states.len())
            .sum()
    }

    fn event_offset(&self, device: &str) -> usize {
        self.devices
            .iter()
            .take_while(|d| d.name != device)
            .map(|d| d.events.len())
            .sum()
    }
}

/// Triangular membership function for one level of an environment variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub level: String,
    pub left: f64,
    pub peak: f64,
    pub right: f64,
}

impl Triangle {
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.left || x > self.right {
            0.0
        } else if x == self.peak {
            1.0
        } else if x < self.peak {
            (x - self.left) / (self.peak - self.left)
        } else {
            (self.right - x) / (self.right - self.peak)
        }
    }
}

/// Per-variable triangular membership functions, keyed by variable name.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MembershipConfig(pub BTreeMap<String, Vec<Triangle>>);

impl MembershipConfig {
    pub fn validate(&self, catalog: &Catalog) -> Result<(), InterpretError> {
        for var in &catalog.env_variables {
            let triangles = self.0.get(&var.name).ok_or_else(|| {
                InterpretError::Catalog(format!("no membership functions for {:?}", var.name))
            })?;
            if triangles.len() != var.levels.len() {
                return Err(InterpretError::Catalog(format!(
                    "variable {:?}: {} membership functions for {} levels",
                    var.name,
                    triangles.len(),
                    var.levels.len()
                )));
            }
            for (t, level) in triangles.iter().zip(&var.levels) {
                if &t.level != level {
                    return Err(InterpretError::Catalog(format!(
                        "variable {:?}: membership {:?} does not match level {:?}",
                        var.name, t.level, level
                    )));
                }
                if !(t.left <= t.peak && t.peak <= t.right && t.left < t.right) {
                    return Err(InterpretError::Catalog(format!(
                        "variable {:?}, level {:?}: degenerate triangle",
                        var.name, level
                    )));
                }
            }
            // Coverage: the outer levels must be shoulders and adjacent
            // supports must overlap, so every in-range reading (clamped
            // endpoints included) activates at least one level.
            let first = triangles.first().expect("levels checked non-empty");
            let last = triangles.last().expect("levels checked non-empty");
            if first.peak != first.left || last.peak != last.right {
                return Err(InterpretError::Catalog(format!(
                    "variable {:?}: outer levels must peak at the range edges",
                    var.name
                )));
            }
            for w in triangles.windows(2) {
                if w[1].left >= w[0].right {
                    return Err(InterpretError::Catalog(format!(
                        "variable {:?}: gap between levels {:?} and {:?}",
                        var.name, w[0].level, w[1].level
                    )));
                }
            }
        }
        Ok(())
    }

    fn range(&self, var: &str) -> Option<(f64, f64)> {
        let triangles = self.0.get(var)?;
        let lo = triangles.iter().map(|t| t.left).fold(f64::INFINITY, f64::min);
        let hi = triangles.iter().map(|t| t.right).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}

/// What a record turned into.
#[derive(Debug, Clone, PartialEq)]
pub enum Interpretation {
    Input(NetworkInput),
    Feedback(f64),
}

/// Stateful record interpreter: holds the sticky environment and
/// device-state snapshot that context inputs carry.
#[derive(Debug, Clone)]
pub struct Interpreter {
    catalog: Catalog,
    membership: MembershipConfig,
    env_snapshot: BTreeMap<String, f64>,
    state_snapshot: BTreeMap<String, String>,
}

impl Interpreter {
    pub fn new(catalog: Catalog, membership: MembershipConfig) -> Result<Self, InterpretError> {
        catalog.validate()?;
        membership.validate(&catalog)?;
        Ok(Self {
            catalog,
            membership,
            env_snapshot: BTreeMap::new(),
            state_snapshot: BTreeMap::new(),
        })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn dims(&self) -> ChannelDims {
        self.catalog.dims()
    }

    /// One-hot user-action encoding over the catalog labels plus the
    /// reserved time-gap slot.
    pub fn encode_user_action(&self, label: &str) -> Result<Vec<f64>, InterpretError> {
        let dims = self.dims();
        let mut v = vec![0.0; dims.user];
        v[self.catalog.user_action_index(label)?] = 1.0;
        Ok(v)
    }

    /// Concatenated membership degrees of the current readings, one block
    /// per variable in catalog order. Variables without a reading stay
    /// all-zero (unknown state); out-of-range readings are clamped.
    pub fn fuzzify_environment(&self, readings: &BTreeMap<String, f64>) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims().env);
        for var in &self.catalog.env_variables {
            match readings.get(&var.name) {
                None => out.extend(std::iter::repeat(0.0).take(var.levels.len())),
                Some(&raw) => {
                    let (lo, hi) = self.membership.range(&var.name).unwrap_or((raw, raw));
                    let x = raw.clamp(lo, hi);
                    if x != raw {
                        eprintln!(
                            "warning: {} reading {raw} {} clamped to [{lo}, {hi}]",
                            var.name, var.unit
                        );
                    }
                    let triangles = &self.membership.0[&var.name];
                    out.extend(triangles.iter().map(|t| t.membership(x)));
                }
            }
        }
        out
    }

    /// Concatenated per-device state one-hots; devices with unknown state
    /// stay all-zero.
    pub fn encode_device_state(
        &self,
        states: &BTreeMap<String, String>,
    ) -> Result<Vec<f64>, InterpretError> {
        let mut out = vec![0.0; self.dims().dev_state];
        for (device, state) in states {
            let dev = self.catalog.device(device)?;
            let pos = dev.states.iter().position(|s| s == state).ok_or_else(|| {
                InterpretError::UnknownDeviceState {
                    device: device.clone(),
                    state: state.clone(),
                }
            })?;
            out[self.catalog.state_offset(device) + pos] = 1.0;
        }
        Ok(out)
    }

    /// One-hot over (device, event) pairs.
    pub fn encode_device_event(&self, device: &str, event: &str) -> Result<Vec<f64>, InterpretError> {
        let dev = self.catalog.device(device)?;
        let pos = dev.events.iter().position(|e| e == event).ok_or_else(|| {
            InterpretError::UnknownDeviceEvent {
                device: device.to_string(),
                event: event.to_string(),
            }
        })?;
        let mut out = vec![0.0; self.dims().dev_event];
        out[self.catalog.event_offset(device) + pos] = 1.0;
        Ok(out)
    }

    fn context_input(&self, user: Vec<f64>) -> NetworkInput {
        let dims = self.dims();
        NetworkInput::context(
            user,
            self.fuzzify_environment(&self.env_snapshot),
            self.encode_device_state(&self.state_snapshot)
                .expect("snapshot states were validated when stored"),
            dims.dev_event,
        )
    }

    fn split_name<'a>(&self, record: &'a EventRecord) -> Result<(&'a str, &'a str), InterpretError> {
        record.name.split_once(':').ok_or_else(|| {
            InterpretError::MalformedRecord(
                format!("{record:?}"),
                "expected name of the form device:part".into(),
            )
        })
    }

    /// Interpret one record. Context-bearing kinds refresh the sticky
    /// snapshot and yield a context input; device events yield a service
    /// input; feedback records pass their rating through untouched.
    pub fn interpret(&mut self, record: &EventRecord) -> Result<Interpretation, InterpretError> {
        match record.kind {
            RecordKind::UserAction => {
                let user = self.encode_user_action(&record.name)?;
                Ok(Interpretation::Input(self.context_input(user)))
            }
            RecordKind::EnvReading => {
                let value = record.value.ok_or_else(|| {
                    InterpretError::MalformedRecord(
                        format!("{record:?}"),
                        "environment reading without a value".into(),
                    )
                })?;
                if !self.catalog.env_variables.iter().any(|v| v.name == record.name) {
                    return Err(InterpretError::UnknownEnvVariable(record.name.clone()));
                }
                self.env_snapshot.insert(record.name.clone(), value);
                let dims = self.dims();
                Ok(Interpretation::Input(self.context_input(vec![0.0; dims.user])))
            }
            RecordKind::DeviceState => {
                let (device, state) = self.split_name(record)?;
                // Validate before storing so the snapshot stays encodable.
                let dev = self.catalog.device(device)?;
                if !dev.states.iter().any(|s| s == state) {
                    return Err(InterpretError::UnknownDeviceState {
                        device: device.to_string(),
                        state: state.to_string(),
                    });
                }
                self.state_snapshot.insert(device.to_string(), state.to_string());
                let dims = self.dims();
                Ok(Interpretation::Input(self.context_input(vec![0.0; dims.user])))
            }
            RecordKind::DeviceEvent => {
                let (device, event) = self.split_name(record)?;
                let dims = self.dims();
                let input = NetworkInput::service(&dims, self.encode_device_event(device, event)?);
                Ok(Interpretation::Input(input))
            }
            RecordKind::Feedback => {
                let xi = record.xi.ok_or_else(|| {
                    InterpretError::MalformedRecord(
                        format!("{record:?}"),
                        "feedback record without xi".into(),
                    )
                })?;
                Ok(Interpretation::Feedback(xi))
            }
        }
    }
}
