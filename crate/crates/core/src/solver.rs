//! Constructive solution of the Hanoi game and path validation.
//!
//! [`solve`] follows the inductive construction on the state length: equal
//! first entries reduce to the tails, different first entries route through
//! the alternating state `(a1, b1, a1, ...)`, one full-length involution and
//! its mirror. Paths have at most `2^k - 1` moves and every intermediate state
//! starts with `a1` or `b1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hanoi::{self, alternating, HanoiError, HanoiParams, HanoiState, Move};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("states have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid state: {0}")]
    InvalidState(#[from] HanoiError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("move {index} is illegal: {reason}")]
    IllegalMoveAt { index: usize, reason: HanoiError },
    #[error("invalid start state: {0}")]
    InvalidStart(HanoiError),
}

/// A start state and a sequence of moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePath {
    pub start: HanoiState,
    pub moves: Vec<Move>,
}

impl MovePath {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// All states visited, including the start and the final state. Assumes
    /// the path is legal.
    pub fn states(&self) -> Vec<HanoiState> {
        let mut cur = self.start.entries().to_vec();
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(self.start.clone());
        for &m in &self.moves {
            hanoi::apply_unchecked(&mut cur, m);
            out.push(HanoiState::from_raw(cur.clone()));
        }
        out
    }
}

/// Whitespace-separated move list, e.g. `a3 i a0`.
pub struct MoveList<'a>(pub &'a [Move]);

impl fmt::Display for MoveList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub fn parse_moves(text: &str) -> Result<Vec<Move>, HanoiError> {
    text.split_whitespace().map(Move::from_str).collect()
}

/// A path from `a` to `b` of at most `2^k - 1` moves.
pub fn solve(a: &HanoiState, b: &HanoiState, params: &HanoiParams) -> Result<MovePath, SolveError> {
    if a.len() != b.len() {
        return Err(SolveError::LengthMismatch(a.len(), b.len()));
    }
    params.validate(a.entries())?;
    params.validate(b.entries())?;

    let mut cur = a.entries().to_vec();
    let mut moves = Vec::new();
    drive(&mut cur, 0, b.entries(), &mut moves);
    debug_assert_eq!(cur.as_slice(), b.entries());
    Ok(MovePath {
        start: a.clone(),
        moves,
    })
}

/// Turns `cur[from..]` into `target`, leaving `cur[..from]` untouched.
fn drive(cur: &mut [u32], from: usize, target: &[u32], moves: &mut Vec<Move>) {
    if &cur[from..] == target {
        return;
    }
    if target.len() == 1 {
        emit(cur, from, Move::Adjust(target[0]), moves);
        return;
    }
    let (head, goal_head) = (cur[from], target[0]);
    if head == goal_head {
        drive(cur, from + 1, &target[1..], moves);
        return;
    }
    let tail_len = target.len() - 1;
    drive(
        cur,
        from + 1,
        &alternating(goal_head, head, tail_len),
        moves,
    );
    emit(cur, from, Move::Involute, moves);
    drive(cur, from + 1, &target[1..], moves);
}

fn emit(cur: &mut [u32], from: usize, m: Move, moves: &mut Vec<Move>) {
    let changed = hanoi::apply_unchecked(cur, m);
    // a move issued for the subproblem at `from` never reaches earlier entries
    debug_assert!(
        changed >= from,
        "move {m} changed position {} below {}",
        changed + 1,
        from + 1
    );
    moves.push(m);
}

/// Replays the path, returning the final state or the 1-based index of the
/// first illegal move.
pub fn verify_path(path: &MovePath, params: &HanoiParams) -> Result<HanoiState, PathError> {
    params
        .validate(path.start.entries())
        .map_err(PathError::InvalidStart)?;
    let mut cur = path.start.entries().to_vec();
    for (i, &m) in path.moves.iter().enumerate() {
        hanoi::check_move(&cur, m, params).map_err(|reason| PathError::IllegalMoveAt {
            index: i + 1,
            reason,
        })?;
        hanoi::apply_unchecked(&mut cur, m);
    }
    Ok(HanoiState::from_raw(cur))
}
