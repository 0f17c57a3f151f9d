//! Base-string machinery for the 2-label view-3 cycle-detection scheme.
//!
//! The scheme winds the periodic bit string S = 001101 along every tree path
//! away from the core. A *base string* is one of the six distinct length-5
//! substrings of S-infinity, printed in route order from grandparent to
//! grandchild, so its second position is the parent of the central node. The
//! *tree string set* t(b) collects every length-5 string a node may read along
//! one of its centered routes when b is its true base string.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// One period of the infinite string S-infinity.
const PERIOD: [u8; 6] = [0, 0, 1, 1, 0, 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringError {
    #[error("{0} is not a base string (length-5 substring of S-infinity)")]
    NotABaseString(BitString),
    #[error("substring queries support length <= 6, got {0}")]
    LengthExceeded(usize),
    #[error("bit strings must be non-empty and contain only 0/1")]
    Malformed,
}

/// Non-empty sequence over {0, 1}, most significant (first printed) bit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self, StringError> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(StringError::Malformed);
        }
        Ok(BitString(bits))
    }

    pub fn parse(s: &str) -> Result<Self, StringError> {
        let bits: Result<Vec<u8>, _> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(StringError::Malformed),
            })
            .collect();
        Self::new(bits?)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> BitString {
        BitString(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        *self == self.reversed()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Whether `s` occurs in repeat(001101) at some offset. Callers never need
/// queries longer than 6 (one full period).
pub fn is_substring_of_s_infinity(s: &BitString) -> Result<bool, StringError> {
    if s.len() > 6 {
        return Err(StringError::LengthExceeded(s.len()));
    }
    Ok((0..PERIOD.len()).any(|offset| {
        s.bits()
            .iter()
            .enumerate()
            .all(|(i, &b)| PERIOD[(offset + i) % PERIOD.len()] == b)
    }))
}

/// The 6 distinct length-5 substrings of S-infinity, in order of first
/// occurrence: 00110, 01101, 11010, 10100, 01001, 10011.
pub fn base_strings() -> Vec<BitString> {
    (0..PERIOD.len())
        .map(|offset| {
            BitString(
                (0..5)
                    .map(|i| PERIOD[(offset + i) % PERIOD.len()])
                    .collect(),
            )
        })
        .collect()
}

/// The tree string set t(b) of a base string, holding every length-5 string a
/// centered route may read under the oracular labeling, in both reading
/// directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStringSet {
    base: BitString,
    members: BTreeSet<BitString>,
}

impl TreeStringSet {
    pub fn base(&self) -> &BitString {
        &self.base
    }

    pub fn members(&self) -> &BTreeSet<BitString> {
        &self.members
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.contains(s)
    }
}

/// Builds t(b) from the three route classes. With the base string printed
/// grandparent-to-grandchild as b1 b2 b3 b4 b5:
///
/// * grandchild-to-grandparent routes read b or its reversal;
/// * grandchild-to-grandchild routes read b5 b4 b3 b4 b5 (a palindrome);
/// * grandchild-to-child-of-parent routes read b5 b4 b3 b2 b3 or its reversal.
pub fn tree_string_set(b: &BitString) -> Result<TreeStringSet, StringError> {
    if b.len() != 5 || !is_substring_of_s_infinity(b)? {
        return Err(StringError::NotABaseString(b.clone()));
    }
    let bits = b.bits();
    let (b2, b3, b4, b5) = (bits[1], bits[2], bits[3], bits[4]);
    let gc_gc = BitString(vec![b5, b4, b3, b4, b5]);
    let gc_cp = BitString(vec![b5, b4, b3, b2, b3]);
    let mut members = BTreeSet::new();
    members.insert(b.clone());
    members.insert(b.reversed());
    members.insert(gc_gc);
    members.insert(gc_cp.reversed());
    members.insert(gc_cp);
    Ok(TreeStringSet {
        base: b.clone(),
        members,
    })
}
