//! Hanoi states, the two move types and the implicit state graph.
//!
//! A Hanoi state of length `k` over the alphabet `{0, ..., r}` is a sequence
//! with no two consecutive equal entries. A *proper* state additionally has a
//! nonzero first entry. Positions in error messages are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the number of states materialized explicitly.
pub const DEFAULT_STATE_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HanoiError {
    #[error("invalid parameters: r = {r}, k = {k} (both must be at least 1)")]
    InvalidParams { r: u32, k: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("entry {value} at position {position} is outside the alphabet 0..={r}")]
    OutOfAlphabet { position: usize, value: u32, r: u32 },
    #[error("positions {} and {position} hold the same value", .position - 1)]
    ConsecutiveEqual { position: usize },
    #[error("proper states must not start with 0")]
    ImproperLeadingZero,
    #[error("involution needs a state of length at least 2")]
    TooShort,
    #[error("cannot adjust the last entry to {value}: {reason}")]
    IllegalAdjust { value: u32, reason: &'static str },
    #[error("involution not allowed: {reason}")]
    IllegalInvolute { reason: &'static str },
    #[error("state space has {count} states, above the cap of {cap}")]
    TooLarge { count: u128, cap: u64 },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Alphabet bound, state length and proper/improper mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HanoiParams {
    r: u32,
    k: usize,
    proper: bool,
}

impl HanoiParams {
    pub fn new(r: u32, k: usize, proper: bool) -> Result<Self, HanoiError> {
        if r == 0 || k == 0 {
            return Err(HanoiError::InvalidParams { r, k });
        }
        Ok(HanoiParams { r, k, proper })
    }

    /// Parameters of the proper game (states with nonzero first entry).
    pub fn proper(r: u32, k: usize) -> Result<Self, HanoiError> {
        Self::new(r, k, true)
    }

    pub fn improper(r: u32, k: usize) -> Result<Self, HanoiError> {
        Self::new(r, k, false)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// Same `r` and `k` with the other mode.
    pub fn with_proper(&self, proper: bool) -> Self {
        HanoiParams { proper, ..*self }
    }

    /// `r^k` when proper, `(r+1) r^(k-1)` otherwise. `None` on overflow.
    pub fn state_count(&self) -> Option<u128> {
        let r = self.r as u128;
        let first = if self.proper { r } else { r + 1 };
        let exp = u32::try_from(self.k - 1).ok()?;
        first.checked_mul(r.checked_pow(exp)?)
    }

    /// State count, or [`HanoiError::TooLarge`] if it exceeds `cap`.
    pub fn checked_state_count(&self, cap: u64) -> Result<u64, HanoiError> {
        match self.state_count() {
            Some(count) if count <= cap as u128 => Ok(count as u64),
            Some(count) => Err(HanoiError::TooLarge { count, cap }),
            None => Err(HanoiError::TooLarge {
                count: u128::MAX,
                cap,
            }),
        }
    }

    /// Checks a raw entry sequence against these parameters.
    pub fn validate(&self, entries: &[u32]) -> Result<(), HanoiError> {
        if entries.len() != self.k {
            return Err(HanoiError::LengthMismatch {
                expected: self.k,
                found: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|&v| v > self.r) {
            return Err(HanoiError::OutOfAlphabet {
                position: i + 1,
                value: entries[i],
                r: self.r,
            });
        }
        if let Some(i) = entries.windows(2).position(|w| w[0] == w[1]) {
            return Err(HanoiError::ConsecutiveEqual { position: i + 2 });
        }
        if self.proper && entries[0] == 0 {
            return Err(HanoiError::ImproperLeadingZero);
        }
        Ok(())
    }
}

/// A validated Hanoi state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HanoiState {
    entries: Vec<u32>,
}

impl HanoiState {
    pub fn new(entries: Vec<u32>, params: &HanoiParams) -> Result<Self, HanoiError> {
        params.validate(&entries)?;
        Ok(HanoiState { entries })
    }

    /// Parses the comma-separated text form, e.g. `1,2,3,4`.
    pub fn parse(text: &str, params: &HanoiParams) -> Result<Self, HanoiError> {
        Self::new(parse_entries(text)?, params)
    }

    pub(crate) fn from_raw(entries: Vec<u32>) -> Self {
        HanoiState { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.entries[0]
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }
}

impl fmt::Display for HanoiState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.entries)
    }
}

pub(crate) fn write_entries(f: &mut impl fmt::Write, entries: &[u32]) -> fmt::Result {
    for (i, v) in entries.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Parses comma-separated decimal entries without validating Hanoi rules.
pub fn parse_entries(text: &str) -> Result<Vec<u32>, HanoiError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(HanoiError::Parse {
            input: text.to_owned(),
            reason: "empty state".to_owned(),
        });
    }
    text.split(',')
        .map(|tok| {
            tok.parse::<u32>().map_err(|e| HanoiError::Parse {
                input: text.to_owned(),
                reason: format!("entry {tok:?}: {e}"),
            })
        })
        .collect()
}

/// Validating constructor.
pub fn make_state(entries: &[u32], params: &HanoiParams) -> Result<HanoiState, HanoiError> {
    HanoiState::new(entries.to_vec(), params)
}

/// One move of the Hanoi game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Replace the last entry by the given value.
    Adjust(u32),
    /// Swap the two last values throughout the longest alternating tail.
    Involute,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Adjust(v) => write!(f, "a{v}"),
            Move::Involute => f.write_str("i"),
        }
    }
}

impl FromStr for Move {
    type Err = HanoiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| HanoiError::Parse {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        match s {
            "i" => Ok(Move::Involute),
            _ => {
                let rest = s
                    .strip_prefix('a')
                    .ok_or_else(|| bad("expected `i` or `a<value>`"))?;
                rest.parse()
                    .map(Move::Adjust)
                    .map_err(|_| bad("adjust target is not a nonnegative integer"))
            }
        }
    }
}

/// 0-based start of the longest tail segment alternating between the last
/// two values. Requires `entries.len() >= 2`.
pub(crate) fn segment_start(entries: &[u32]) -> usize {
    let k = entries.len();
    debug_assert!(k >= 2);
    let (last, prev) = (entries[k - 1], entries[k - 2]);
    let mut j = k - 2;
    while j > 0 && (entries[j - 1] == last || entries[j - 1] == prev) {
        j -= 1;
    }
    j
}

/// 1-based index `j` such that positions `j..=k` form the involution segment.
pub fn involution_segment(x: &HanoiState) -> Result<usize, HanoiError> {
    if x.len() < 2 {
        return Err(HanoiError::TooShort);
    }
    Ok(segment_start(&x.entries) + 1)
}

/// Checks legality of `m` on raw entries under `params`.
pub(crate) fn check_move(entries: &[u32], m: Move, params: &HanoiParams) -> Result<(), HanoiError> {
    let k = entries.len();
    match m {
        Move::Adjust(value) => {
            let illegal = |reason| Err(HanoiError::IllegalAdjust { value, reason });
            if value > params.r {
                return illegal("value outside the alphabet");
            }
            if value == entries[k - 1] {
                return illegal("value equals the current last entry");
            }
            if k > 1 && value == entries[k - 2] {
                return illegal("value equals the second-to-last entry");
            }
            if params.proper && k == 1 && value == 0 {
                return illegal("would make the first entry 0 in a proper state");
            }
            Ok(())
        }
        Move::Involute => {
            if k < 2 {
                return Err(HanoiError::IllegalInvolute {
                    reason: "state has length 1",
                });
            }
            if params.proper && segment_start(entries) == 0 {
                // position 1 receives the partner value
                let partner = if entries[0] == entries[k - 1] {
                    entries[k - 2]
                } else {
                    entries[k - 1]
                };
                if partner == 0 {
                    return Err(HanoiError::IllegalInvolute {
                        reason: "would make the first entry 0 in a proper state",
                    });
                }
            }
            Ok(())
        }
    }
}

/// Applies `m` in place without legality checks. Returns the 0-based first
/// position that changed.
pub(crate) fn apply_unchecked(entries: &mut [u32], m: Move) -> usize {
    let k = entries.len();
    match m {
        Move::Adjust(v) => {
            entries[k - 1] = v;
            k - 1
        }
        Move::Involute => {
            let start = segment_start(entries);
            let (last, prev) = (entries[k - 1], entries[k - 2]);
            for e in &mut entries[start..] {
                *e = if *e == last { prev } else { last };
            }
            start
        }
    }
}

pub fn apply_move(x: &HanoiState, m: Move, params: &HanoiParams) -> Result<HanoiState, HanoiError> {
    params.validate(&x.entries)?;
    check_move(&x.entries, m, params)?;
    let mut entries = x.entries.clone();
    apply_unchecked(&mut entries, m);
    Ok(HanoiState { entries })
}

/// Moves legal from raw entries, adjustments in increasing target order
/// followed by the involution.
pub(crate) fn legal_moves_raw(entries: &[u32], params: &HanoiParams) -> Vec<Move> {
    let mut moves: Vec<Move> = (0..=params.r)
        .map(Move::Adjust)
        .filter(|&m| check_move(entries, m, params).is_ok())
        .collect();
    if check_move(entries, Move::Involute, params).is_ok() {
        moves.push(Move::Involute);
    }
    moves
}

pub fn legal_moves(x: &HanoiState, params: &HanoiParams) -> Vec<Move> {
    legal_moves_raw(&x.entries, params)
}

/// States reachable from `x` in one move.
pub fn neighbors(x: &HanoiState, params: &HanoiParams) -> Vec<HanoiState> {
    legal_moves(x, params)
        .into_iter()
        .map(|m| {
            let mut entries = x.entries.clone();
            apply_unchecked(&mut entries, m);
            HanoiState { entries }
        })
        .collect()
}

/// True iff no value occurs in both states.
pub fn has_disjoint_support(a: &HanoiState, b: &HanoiState) -> bool {
    disjoint_raw(&a.entries, &b.entries)
}

pub(crate) fn disjoint_raw(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// `(first, second, first, second, ...)` of the given length.
pub fn alternating(first: u32, second: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| if i % 2 == 0 { first } else { second })
        .collect()
}

/// Bijection between the states of a parameter set and `0..count`,
/// preserving lexicographic order.
///
/// The first entry is a digit of radix `r` (proper) or `r + 1`; each later
/// entry is a digit of radix `r`, skipping the value of its predecessor.
#[derive(Debug, Clone, Copy)]
pub struct StateSpace {
    params: HanoiParams,
    count: u64,
}

impl StateSpace {
    pub fn new(params: HanoiParams, cap: u64) -> Result<Self, HanoiError> {
        let count = params.checked_state_count(cap)?;
        Ok(StateSpace { params, count })
    }

    pub fn params(&self) -> &HanoiParams {
        &self.params
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn rank(&self, entries: &[u32]) -> u64 {
        let r = self.params.r as u64;
        let mut idx = if self.params.proper {
            entries[0] as u64 - 1
        } else {
            entries[0] as u64
        };
        for w in entries.windows(2) {
            let digit = w[1] - u32::from(w[1] > w[0]);
            idx = idx * r + digit as u64;
        }
        idx
    }

    pub fn unrank(&self, mut idx: u64, out: &mut [u32]) {
        let r = self.params.r as u64;
        let k = out.len();
        debug_assert_eq!(k, self.params.k);
        // digits first, then shift each past its predecessor's value
        for d in out[1..].iter_mut().rev() {
            *d = (idx % r) as u32;
            idx /= r;
        }
        out[0] = if self.params.proper {
            idx as u32 + 1
        } else {
            idx as u32
        };
        for i in 1..k {
            if out[i] >= out[i - 1] {
                out[i] += 1;
            }
        }
    }

    pub fn state(&self, idx: u64) -> HanoiState {
        let mut entries = vec![0; self.params.k];
        self.unrank(idx, &mut entries);
        HanoiState { entries }
    }
}

/// All valid states in lexicographic order, or `TooLarge` above `cap`.
pub fn enumerate_states(params: &HanoiParams, cap: u64) -> Result<Vec<HanoiState>, HanoiError> {
    let space = StateSpace::new(*params, cap)?;
    Ok((0..space.len()).map(|i| space.state(i)).collect())
}
