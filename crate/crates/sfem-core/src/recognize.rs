//! Episode recognition over the working buffer.
//!
//! The buffer is a timestamped list of event-node firings. Adjacent items
//! that occur sequentially at least twice are merged into chunks, repeatedly,
//! until no pair repeats; chunks of length >= 2 are the recognised episodes.
//! A pair whose occurrences are separated by a regular and substantial time
//! gap gets a gap token inserted between its halves, so waiting periods
//! survive into the learned episode. Merging a chunk with itself is never
//! allowed — no repeated contiguous subsequence inside an episode.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BufferError {
    #[error("buffer timestamps must be non-decreasing: {prev} then {next}")]
    TimeRegression { prev: f64, next: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EpisodeToken {
    Event(usize),
    TimeGap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Episode {
    pub tokens: Vec<EpisodeToken>,
}

impl Episode {
    pub fn from_events(events: &[usize]) -> Self {
        Self {
            tokens: events.iter().map(|&e| EpisodeToken::Event(e)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BufferEntry {
    pub event: usize,
    pub time: f64,
}

/// Bounded FIFO of event firings; overflowing drops the oldest entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorkingBuffer {
    entries: VecDeque<BufferEntry>,
    capacity: usize,
}

impl WorkingBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: VecDeque::new(),
            capacity: capacity.max(1),
        }
    }

    pub fn push(&mut self, event: usize, time: f64) -> Result<(), BufferError> {
        if let Some(last) = self.entries.back() {
            if time < last.time {
                return Err(BufferError::TimeRegression {
                    prev: last.time,
                    next: time,
                });
            }
        }
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(BufferEntry { event, time });
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = &BufferEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecognizeParams {
    /// Gaps count as regular when (max - min) <= regularity * mean.
    pub gap_regularity: f64,
    /// Minimum mean gap, in seconds, before a gap token is worth inserting;
    /// back-to-back events never produce one.
    pub gap_min: f64,
}

impl Default for RecognizeParams {
    fn default() -> Self {
        Self {
            gap_regularity: 0.2,
            gap_min: 60.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Chunk {
    tokens: Vec<EpisodeToken>,
    start: f64,
    end: f64,
}

/// Recognise episodes in the buffer. Returns distinct episodes of length
/// >= 2 in order of first occurrence; chunks that stay singletons are not
/// committed.
pub fn recognize_episodes(buffer: &WorkingBuffer, params: &RecognizeParams) -> Vec<Episode> {
    let mut items: Vec<Chunk> = buffer
        .entries()
        .map(|e| Chunk {
            tokens: vec![EpisodeToken::Event(e.event)],
            start: e.time,
            end: e.time,
        })
        .collect();

    loop {
        // Count adjacent pairs by content. Distinct-sided pairs cannot
        // overlap themselves, so a plain scan counts occurrences correctly;
        // equal-sided pairs are skipped outright (their merge would repeat a
        // subsequence).
        let mut counts: HashMap<(Vec<EpisodeToken>, Vec<EpisodeToken>), usize> = HashMap::new();
        for w in items.windows(2) {
            if w[0].tokens == w[1].tokens {
                continue;
            }
            *counts
                .entry((w[0].tokens.clone(), w[1].tokens.clone()))
                .or_insert(0) += 1;
        }
        // Most frequent pair first, ties by earliest occurrence: scan the
        // items left to right so selection does not depend on map order.
        let mut best: Option<(usize, usize)> = None; // (count, first position)
        for (pos, w) in items.windows(2).enumerate() {
            if w[0].tokens == w[1].tokens {
                continue;
            }
            let c = counts[&(w[0].tokens.clone(), w[1].tokens.clone())];
            if c < 2 {
                continue;
            }
            if best.map_or(true, |(bc, _)| c > bc) {
                best = Some((c, pos));
            }
        }
        let Some((_, first_pos)) = best else { break };
        let key = (
            items[first_pos].tokens.clone(),
            items[first_pos + 1].tokens.clone(),
        );

        // Gap statistics across every occurrence of the chosen pair.
        let mut gaps = Vec::new();
        let mut i = 0;
        while i + 1 < items.len() {
            if items[i].tokens == key.0 && items[i + 1].tokens == key.1 {
                gaps.push(items[i + 1].start - items[i].end);
                i += 2;
            } else {
                i += 1;
            }
        }
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let spread = gaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        let insert_gap = mean >= params.gap_min && spread <= params.gap_regularity * mean;

        // Merge every occurrence, left to right, without overlap.
        let mut merged = Vec::with_capacity(items.len());
        let mut i = 0;
        while i < items.len() {
            if i + 1 < items.len() && items[i].tokens == key.0 && items[i + 1].tokens == key.1 {
                let mut tokens = items[i].tokens.clone();
                if insert_gap {
                    tokens.push(EpisodeToken::TimeGap);
                }
                tokens.extend(items[i + 1].tokens.iter().copied());
                merged.push(Chunk {
                    tokens,
                    start: items[i].start,
                    end: items[i + 1].end,
                });
                i += 2;
            } else {
                merged.push(items[i].clone());
                i += 1;
            }
        }
        items = merged;
    }

    let mut seen: Vec<Vec<EpisodeToken>> = Vec::new();
    let mut episodes = Vec::new();
    for chunk in items {
        if chunk.tokens.len() < 2 || seen.contains(&chunk.tokens) {
            continue;
        }
        seen.push(chunk.tokens.clone());
        episodes.push(Episode {
            tokens: chunk.tokens,
        });
    }
    episodes
}
