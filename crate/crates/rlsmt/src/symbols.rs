//! Symbol values and range sets.
//!
//! Words processed by the automaton pipeline are sequences of symbol
//! values `0..=257`: the 256 byte values plus two padding markers,
//! [`SIGMA_START`] and [`SIGMA_END`].  Every value of a string variable
//! travels through the pipeline in padded form `σs^i · w · σe^j` with
//! `i, j ≥ 1`, which gives all variables of a problem equal-length
//! symbol sequences regardless of the lengths of their payloads.
//!
//! A [`RangeSet`] is a normalized union of closed symbol intervals;
//! it is the predicate attached to consuming automaton edges.

pub type Symbol = u16;

/// Padding marker consumed before the payload of a variable.
pub const SIGMA_START: Symbol = 256;
/// Padding marker consumed after the payload of a variable.
pub const SIGMA_END: Symbol = 257;
/// Largest meaningful symbol value.
pub const MAX_SYMBOL: Symbol = SIGMA_END;
/// Number of bits used to encode one symbol in a transition system.
pub const SYMBOL_BITS: usize = 9;

pub fn is_word_byte(s: Symbol) -> bool {
    matches!(s, 0x30..=0x39 | 0x41..=0x5a | 0x61..=0x7a) || s == 0x5f
}

/// Normalized set of symbols stored as sorted, disjoint, non-adjacent
/// closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RangeSet {
    ranges: Vec<(Symbol, Symbol)>,
}

impl RangeSet {
    pub fn empty() -> Self {
        RangeSet { ranges: Vec::new() }
    }

    pub fn singleton(s: Symbol) -> Self {
        RangeSet { ranges: vec![(s, s)] }
    }

    pub fn range(lo: Symbol, hi: Symbol) -> Self {
        debug_assert!(lo <= hi && hi <= MAX_SYMBOL);
        RangeSet { ranges: vec![(lo, hi)] }
    }

    /// All byte values, excluding the padding markers.
    pub fn all_bytes() -> Self {
        Self::range(0, 255)
    }

    pub fn from_ranges(mut ranges: Vec<(Symbol, Symbol)>) -> Self {
        ranges.retain(|&(lo, hi)| lo <= hi);
        ranges.sort_unstable();
        let mut out: Vec<(Symbol, Symbol)> = Vec::with_capacity(ranges.len());
        for (lo, hi) in ranges {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        RangeSet { ranges: out }
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.ranges
            .binary_search_by(|&(lo, hi)| {
                if s < lo {
                    std::cmp::Ordering::Greater
                } else if s > hi {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn ranges(&self) -> &[(Symbol, Symbol)] {
        &self.ranges
    }

    pub fn union(&self, other: &RangeSet) -> RangeSet {
        let mut all = self.ranges.clone();
        all.extend_from_slice(&other.ranges);
        RangeSet::from_ranges(all)
    }

    pub fn intersect(&self, other: &RangeSet) -> RangeSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (alo, ahi) = self.ranges[i];
            let (blo, bhi) = other.ranges[j];
            let lo = alo.max(blo);
            let hi = ahi.min(bhi);
            if lo <= hi {
                out.push((lo, hi));
            }
            if ahi < bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        RangeSet { ranges: out }
    }

    /// Complement within the byte alphabet `0..=255`.  Padding markers
    /// never participate in user-written classes.
    pub fn complement_bytes(&self) -> RangeSet {
        let mut out = Vec::new();
        let mut next: u32 = 0;
        for &(lo, hi) in &self.ranges {
            let lo = lo.min(256);
            if next < lo as u32 {
                out.push((next as Symbol, (lo - 1) as Symbol));
            }
            next = next.max(hi as u32 + 1);
        }
        if next <= 255 {
            out.push((next as Symbol, 255));
        }
        RangeSet { ranges: out }
    }

    /// Number of symbols in the set.
    pub fn count(&self) -> usize {
        self.ranges.iter().map(|&(lo, hi)| (hi - lo) as usize + 1).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.ranges.iter().flat_map(|&(lo, hi)| lo..=hi)
    }

    /// Boundary values useful for partitioning the symbol space: the
    /// low end of every range plus the first value after every range.
    pub fn cut_points(&self, out: &mut Vec<Symbol>) {
        for &(lo, hi) in &self.ranges {
            out.push(lo);
            if hi < MAX_SYMBOL {
                out.push(hi + 1);
            }
        }
    }
}

impl std::fmt::Display for RangeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, &(lo, hi)) in self.ranges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if lo == hi {
                write!(f, "{lo}")?;
            } else {
                write!(f, "{lo}-{hi}")?;
            }
        }
        write!(f, "]")
    }
}
