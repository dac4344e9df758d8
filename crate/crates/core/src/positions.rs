use serde::Serialize;

use crate::bits::BitWord;
use crate::error::{ensure, Result};

/// Anything that can answer "is position `n` a member".
pub trait Membership {
    fn contains(&self, n: u64) -> bool;
}

/// Sorted, duplicate-free positions inside a half-open window `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionSet {
    start: u64,
    end: u64,
    members: Vec<u64>,
}

impl PositionSet {
    pub fn new(start: u64, end: u64, members: Vec<u64>) -> Result<Self> {
        ensure!(start <= end, InvalidArgument, "window [{start}, {end}) is reversed");
        ensure!(
            members.windows(2).all(|w| w[0] < w[1]),
            InvalidArgument,
            "positions must be strictly increasing"
        );
        if let (Some(&lo), Some(&hi)) = (members.first(), members.last()) {
            ensure!(
                lo >= start && hi < end,
                InvalidArgument,
                "positions {lo}..={hi} leave window [{start}, {end})"
            );
        }
        Ok(Self { start, end, members })
    }

    pub(crate) fn from_sorted_unchecked(start: u64, end: u64, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { start, end, members }
    }

    /// Positions in `[start, end)` satisfying `pred`.
    pub fn from_predicate(start: u64, end: u64, pred: impl Fn(u64) -> bool) -> Self {
        Self {
            start,
            end,
            members: (start..end).filter(|&n| pred(n)).collect(),
        }
    }

    /// Zero positions of `word`, on the window `[0, |word|)`.
    pub fn zeros_of(word: &BitWord) -> Self {
        Self {
            start: 0,
            end: word.len() as u64,
            members: word.zeros().map(|i| i as u64).collect(),
        }
    }

    pub fn window(&self) -> (u64, u64) {
        (self.start, self.end)
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn into_members(self) -> Vec<u64> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.members.last().copied()
    }
}

impl Membership for PositionSet {
    fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

/// Zero positions of a word, answered straight from the bits.
pub struct ZeroSet<'a>(pub &'a BitWord);

impl Membership for ZeroSet<'_> {
    fn contains(&self, n: u64) -> bool {
        (n as usize) < self.0.len() && !self.0.get(n as usize)
    }
}

impl<F: Fn(u64) -> bool> Membership for F {
    fn contains(&self, n: u64) -> bool {
        self(n)
    }
}
