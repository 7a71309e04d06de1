//! Temporal sequence codes.
//!
//! Two encodings of an event sequence into a fixed-length vector indexed by
//! event-node id:
//!
//! * decay scheme: the fired entry is set to 1 and every other entry decays
//!   by `(1 - tau)`; sorting descending recovers recency order only.
//! * buffered scheme: the new code is `i_w * onehot(fired) + b_w * previous`,
//!   so each occurrence contributes a distinct power of `b_w` and the exact
//!   chronological order can be decoded back, including repeated events.
//!
//! Decodability of the buffered scheme requires the geometric tail to stay
//! below one unit: `b_w / (1 - b_w) < 1`, i.e. `b_w < 0.5` strictly, which
//! the parameter constructor enforces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Termination / matching tolerance for the decoder: elements at or below
/// this value count as zero (floating point never cancels exactly).
pub const EPS_DECODE: f64 = 1e-9;

/// Relative tolerance when matching an element against its expected power
/// term. Learned (averaged) codes may sit slightly below a pure power sum;
/// anything further off is reported as a decode failure.
pub const POWER_MATCH_REL: f64 = 0.05;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("decay factor tau must lie in (0, 1), got {0}")]
    TauOutOfRange(f64),
    #[error("input weight i_w must be > 0, got {0}")]
    InputWeightNonPositive(f64),
    #[error("buffer weight b_w must lie in (0, 0.5), got {0}")]
    BufferWeightOutOfRange(f64),
    #[error("fired index {index} out of range for code of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("scheme mismatch: expected {expected:?}")]
    SchemeMismatch { expected: CodecScheme },
    #[error(
        "code is not a power-sum sequence at step {step}: element {value} \
         (index {index}) does not carry the expected term {expected}"
    )]
    DecodeFailure {
        step: usize,
        index: usize,
        value: f64,
        expected: f64,
    },
    #[error("code mass {mass} exceeds the bound {bound} at step {step}")]
    ExcessMass { step: usize, mass: f64, bound: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodecScheme {
    EmArt,
    DeepArt,
}

/// Sequence-code parameters. Constructed through [`CodecParams::new`] so the
/// decodability constraint on `b_w` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCodecParams")]
pub struct CodecParams {
    tau: f64,
    i_w: f64,
    b_w: f64,
}

#[derive(Deserialize)]
struct RawCodecParams {
    tau: f64,
    i_w: f64,
    b_w: f64,
}

impl TryFrom<RawCodecParams> for CodecParams {
    type Error = CodecError;
    fn try_from(raw: RawCodecParams) -> Result<Self, CodecError> {
        CodecParams::new(raw.tau, raw.i_w, raw.b_w)
    }
}

impl CodecParams {
    pub fn new(tau: f64, i_w: f64, b_w: f64) -> Result<Self, CodecError> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(CodecError::TauOutOfRange(tau));
        }
        if !(i_w > 0.0) {
            return Err(CodecError::InputWeightNonPositive(i_w));
        }
        if !(b_w > 0.0 && b_w < 0.5) {
            return Err(CodecError::BufferWeightOutOfRange(b_w));
        }
        Ok(Self { tau, i_w, b_w })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn input_weight(&self) -> f64 {
        self.i_w
    }

    pub fn buffer_weight(&self) -> f64 {
        self.b_w
    }

    /// Strict upper bound on any element of a buffered-scheme code.
    pub fn element_bound(&self) -> f64 {
        self.i_w / (1.0 - self.b_w)
    }
}

impl Default for CodecParams {
    fn default() -> Self {
        Self::new(0.5, 1.0, 0.4).expect("default codec parameters are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceCode {
    values: Vec<f64>,
    scheme: CodecScheme,
}

impl SequenceCode {
    pub fn zeros(len: usize, scheme: CodecScheme) -> Self {
        Self {
            values: vec![0.0; len],
            scheme,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scheme(&self) -> CodecScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grow the code when a new event node is committed.
    pub fn push_zero(&mut self) {
        self.values.push(0.0);
    }

    /// Wrap raw values, e.g. stored episode weights about to be decoded.
    pub fn from_values(values: Vec<f64>, scheme: CodecScheme) -> Self {
        Self { values, scheme }
    }
}

/// Decay-scheme update: the fired entry snaps to 1, every other entry decays
/// by `(1 - tau)`. The most recent event always holds the strict maximum.
pub fn emart_update(code: &mut SequenceCode, fired: usize, tau: f64) -> Result<(), CodecError> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(CodecError::TauOutOfRange(tau));
    }
    if code.scheme != CodecScheme::EmArt {
        return Err(CodecError::SchemeMismatch {
            expected: CodecScheme::EmArt,
        });
    }
    if fired >= code.values.len() {
        return Err(CodecError::IndexOutOfRange {
            index: fired,
            len: code.values.len(),
        });
    }
    for (j, v) in code.values.iter_mut().enumerate() {
        if j == fired {
            *v = 1.0;
        } else {
            *v *= 1.0 - tau;
        }
    }
    Ok(())
}

/// Recency order of a decay-scheme code: indices of nonzero entries sorted
/// descending by value (most recent first), ties by lowest index.
pub fn emart_recency_order(code: &SequenceCode) -> Vec<usize> {
    let mut indexed: Vec<(usize, f64)> = code
        .values
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, v)| *v > 0.0)
        .collect();
    indexed.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    indexed.into_iter().map(|(i, _)| i).collect()
}

/// Buffered-scheme step: `i_w * onehot(fired) + b_w * previous`.
pub fn deepart_step(
    prev: &SequenceCode,
    fired: usize,
    params: &CodecParams,
) -> Result<SequenceCode, CodecError> {
    if prev.scheme != CodecScheme::DeepArt {
        return Err(CodecError::SchemeMismatch {
            expected: CodecScheme::DeepArt,
        });
    }
    if fired >= prev.values.len() {
        return Err(CodecError::IndexOutOfRange {
            index: fired,
            len: prev.values.len(),
        });
    }
    let mut values: Vec<f64> = prev.values.iter().map(|v| params.b_w * v).collect();
    values[fired] += params.i_w;
    Ok(SequenceCode {
        values,
        scheme: CodecScheme::DeepArt,
    })
}

/// Encode a whole sequence through repeated buffered steps, starting from a
/// zero code of length `len`.
pub fn encode_sequence(
    events: &[usize],
    len: usize,
    params: &CodecParams,
) -> Result<SequenceCode, CodecError> {
    let mut code = SequenceCode::zeros(len, CodecScheme::DeepArt);
    for &e in events {
        code = deepart_step(&code, e, params)?;
    }
    Ok(code)
}

/// Decode a buffered-scheme code back to the chronological event sequence.
///
/// Extraction order is most-recent-first: at step `m` the remaining maximum
/// element must carry the power term `i_w * b_w^m` (each step of the encoder
/// contributed exactly one such term, all exponents distinct across the
/// code). Subtracting terms until nothing above [`EPS_DECODE`] remains and
/// reversing the queue yields the chronological order.
pub fn decode_sequence(
    code: &SequenceCode,
    params: &CodecParams,
) -> Result<Vec<usize>, CodecError> {
    if code.scheme != CodecScheme::DeepArt {
        return Err(CodecError::SchemeMismatch {
            expected: CodecScheme::DeepArt,
        });
    }
    let mut values = code.values.clone();
    let mut queue = Vec::new();
    let mut step = 0usize;
    loop {
        let mass: f64 = values.iter().sum();
        let power = params.i_w * params.b_w.powi(step as i32);
        // Everything still encoded must fit under the geometric tail that
        // starts at the current power; more mass means a corrupt code.
        let bound = power / (1.0 - params.b_w) * (1.0 + POWER_MATCH_REL) + EPS_DECODE;
        if mass > bound {
            return Err(CodecError::ExcessMass { step, mass, bound });
        }
        let (index, value) = match values
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
        {
            Some(best) => best,
            None => break,
        };
        if value <= EPS_DECODE {
            break;
        }
        if value < power * (1.0 - POWER_MATCH_REL) {
            return Err(CodecError::DecodeFailure {
                step,
                index,
                value,
                expected: power,
            });
        }
        values[index] = (value - power).max(0.0);
        queue.push(index);
        step += 1;
    }
    queue.reverse();
    Ok(queue)
}
