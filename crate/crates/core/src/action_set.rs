use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest action universe an [`ActionSet`] can describe.
pub const MAX_ACTIONS: usize = 63;

/// A set of actions drawn from `1..=n`, stored as a bitmask.
///
/// Action `i` occupies bit `i - 1`, so the mask of `{1, 3}` is `0b101`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionSet(u64);

impl ActionSet {
    pub const EMPTY: ActionSet = ActionSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ActionSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(
            n <= MAX_ACTIONS,
            "action universe larger than {MAX_ACTIONS}"
        );
        ActionSet((1u64 << n) - 1)
    }

    pub fn singleton(action: usize) -> Self {
        assert!(
            (1..=MAX_ACTIONS).contains(&action),
            "action {action} out of range"
        );
        ActionSet(1 << (action - 1))
    }

    pub fn from_actions<I: IntoIterator<Item = usize>>(actions: I) -> Self {
        actions.into_iter().fold(Self::EMPTY, |s, a| s.with(a))
    }

    pub fn with(self, action: usize) -> Self {
        self.union(Self::singleton(action))
    }

    pub fn contains(self, action: usize) -> bool {
        (1..=MAX_ACTIONS).contains(&action) && self.0 & (1 << (action - 1)) != 0
    }

    /// Membership test by zero-based index.
    pub fn contains_index(self, index: usize) -> bool {
        index < MAX_ACTIONS && self.0 & (1 << index) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ActionSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ActionSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ActionSet(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        ActionSet(self.0 ^ other.0)
    }

    /// `{1..n} \ self`.
    pub fn complement(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest action in the set, if any.
    pub fn max_action(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Fails with `OutOfRange` unless every action lies in `1..=n`.
    pub fn check_within(self, n: usize) -> Result<()> {
        match self.max_action() {
            Some(a) if a > n => Err(Error::OutOfRange { action: a, n }),
            _ => Ok(()),
        }
    }

    /// Actions in ascending order (one-based).
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i + 1)
        })
    }

    /// Zero-based indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        self.iter().map(|a| a - 1)
    }

    /// Every subset of `{1..n}`, ordered by mask value.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ActionSet> {
        assert!(n < MAX_ACTIONS);
        (0..1u64 << n).map(ActionSet)
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, a) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ActionSet {
    type Err = Error;

    /// Accepts `{1,2,3}`, a decimal mask such as `7`, or a binary mask `0b111`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("cannot parse action set {s:?}"));
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let mut set = ActionSet::EMPTY;
            for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let a: usize = tok.parse().map_err(|_| bad())?;
                if !(1..=MAX_ACTIONS).contains(&a) {
                    return Err(Error::OutOfRange {
                        action: a,
                        n: MAX_ACTIONS,
                    });
                }
                set = set.with(a);
            }
            return Ok(set);
        }
        let bits = match s.strip_prefix("0b") {
            Some(b) => u64::from_str_radix(b, 2),
            None => s.parse(),
        }
        .map_err(|_| bad())?;
        if bits >> MAX_ACTIONS != 0 {
            return Err(bad());
        }
        Ok(ActionSet(bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let s = ActionSet::from_actions([1, 3]);
        assert_eq!(s.bits(), 0b101);
        assert_eq!(s.complement(4), ActionSet::from_actions([2, 4]));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(
            s.symmetric_difference(ActionSet::from_actions([3, 4])),
            ActionSet::from_actions([1, 4])
        );
        assert!(s.is_subset(ActionSet::full(3)));
        assert_eq!(s.max_action(), Some(3));
        assert!(s.check_within(2).is_err());
        assert_eq!(ActionSet::EMPTY.max_action(), None);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("{1,2,3}".parse::<ActionSet>().unwrap(), ActionSet::full(3));
        assert_eq!("7".parse::<ActionSet>().unwrap(), ActionSet::full(3));
        assert_eq!("0b101".parse::<ActionSet>().unwrap().to_string(), "{1,3}");
        assert_eq!("{}".parse::<ActionSet>().unwrap(), ActionSet::EMPTY);
        assert!("{0}".parse::<ActionSet>().is_err());
        assert!("x".parse::<ActionSet>().is_err());
    }
}
