use std::fmt;

/// Largest value a [`Domain`] can hold.
pub const MAX_VALUE: u32 = 63;

/// A finite set of small non-negative integers backed by a 64-bit mask.
///
/// Values live in `0..=MAX_VALUE`. An empty domain is representable (it is
/// what a wipeout leaves behind) but the model never keeps one around: every
/// removal that would empty a domain is reported as [`RemoveOutcome::Wipeout`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Domain(u64);

/// Result of removing a value from a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemoveOutcome {
    Changed,
    Unchanged,
    Wipeout,
}

impl Domain {
    pub const EMPTY: Domain = Domain(0);

    /// The interval `lo..=hi`. Panics if `hi > MAX_VALUE`.
    pub fn range(lo: u32, hi: u32) -> Self {
        assert!(hi <= MAX_VALUE, "domain value {hi} exceeds {MAX_VALUE}");
        if lo > hi {
            return Domain::EMPTY;
        }
        let width = hi - lo + 1;
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        Domain(mask << lo)
    }

    pub fn singleton(value: u32) -> Self {
        assert!(value <= MAX_VALUE, "domain value {value} exceeds {MAX_VALUE}");
        Domain(1u64 << value)
    }

    pub fn from_bits(bits: u64) -> Self {
        Domain(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, value: u32) -> bool {
        value <= MAX_VALUE && self.0 & (1u64 << value) != 0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_fixed(self) -> bool {
        self.0.is_power_of_two()
    }

    /// The single remaining value, if the domain is fixed.
    pub fn value(self) -> Option<u32> {
        self.is_fixed().then(|| self.0.trailing_zeros())
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn insert(&mut self, value: u32) {
        assert!(value <= MAX_VALUE, "domain value {value} exceeds {MAX_VALUE}");
        self.0 |= 1u64 << value;
    }

    pub fn remove(&mut self, value: u32) -> RemoveOutcome {
        if !self.contains(value) {
            return RemoveOutcome::Unchanged;
        }
        self.0 &= !(1u64 << value);
        if self.0 == 0 {
            RemoveOutcome::Wipeout
        } else {
            RemoveOutcome::Changed
        }
    }

    /// Keeps only the values also present in `other`.
    pub fn retain(&mut self, other: Domain) -> RemoveOutcome {
        let narrowed = self.0 & other.0;
        if narrowed == self.0 {
            RemoveOutcome::Unchanged
        } else if narrowed == 0 {
            self.0 = 0;
            RemoveOutcome::Wipeout
        } else {
            self.0 = narrowed;
            RemoveOutcome::Changed
        }
    }

    pub fn intersect(self, other: Domain) -> Domain {
        Domain(self.0 & other.0)
    }

    pub fn union(self, other: Domain) -> Domain {
        Domain(self.0 | other.0)
    }

    pub fn difference(self, other: Domain) -> Domain {
        Domain(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Domain) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Domain) -> bool {
        self.0 & other.0 != 0
    }

    /// Values in ascending order.
    pub fn iter(self) -> DomainIter {
        DomainIter { bits: self.0 }
    }
}

impl FromIterator<u32> for Domain {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut d = Domain::EMPTY;
        for v in iter {
            d.insert(v);
        }
        d
    }
}

impl IntoIterator for Domain {
    type Item = u32;
    type IntoIter = DomainIter;

    fn into_iter(self) -> DomainIter {
        self.iter()
    }
}

pub struct DomainIter {
    bits: u64,
}

impl Iterator for DomainIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.bits == 0 {
            return None;
        }
        let v = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl DoubleEndedIterator for DomainIter {
    fn next_back(&mut self) -> Option<u32> {
        if self.bits == 0 {
            return None;
        }
        let v = 63 - self.bits.leading_zeros();
        self.bits &= !(1u64 << v);
        Some(v)
    }
}

impl ExactSizeIterator for DomainIter {}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
