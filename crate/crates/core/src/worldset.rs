//! Bit-vector sets of worlds over a fixed, small universe.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported universe.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds `{0, .., len-1}` stored as a 64-bit mask.
///
/// Sets are only comparable when they share a universe size. Ordering is by
/// cardinality first, then by bit pattern, which is the canonical order used
/// for families of opens.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WorldSet {
    bits: u64,
    len: u8,
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl WorldSet {
    pub fn empty(len: usize) -> Self {
        assert!(
            len <= MAX_WORLDS,
            "universe of {len} worlds exceeds {MAX_WORLDS}"
        );
        WorldSet {
            bits: 0,
            len: len as u8,
        }
    }

    pub fn full(len: usize) -> Self {
        assert!(
            len <= MAX_WORLDS,
            "universe of {len} worlds exceeds {MAX_WORLDS}"
        );
        WorldSet {
            bits: mask(len),
            len: len as u8,
        }
    }

    pub fn singleton(len: usize, world: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(world);
        s
    }

    /// Builds a set from raw bits; bits outside the universe are an error.
    pub fn from_bits(len: usize, bits: u64) -> Option<Self> {
        if len > MAX_WORLDS || bits & !mask(len) != 0 {
            return None;
        }
        Some(WorldSet {
            bits,
            len: len as u8,
        })
    }

    pub fn from_worlds<I: IntoIterator<Item = usize>>(len: usize, worlds: I) -> Self {
        let mut s = Self::empty(len);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn universe(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn contains(self, world: usize) -> bool {
        world < self.universe() && self.bits >> world & 1 == 1
    }

    pub fn insert(&mut self, world: usize) {
        assert!(
            world < self.universe(),
            "world {world} outside universe of {}",
            self.len
        );
        self.bits |= 1 << world;
    }

    pub fn remove(&mut self, world: usize) {
        if world < self.universe() {
            self.bits &= !(1 << world);
        }
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(self) -> bool {
        self.bits == mask(self.universe())
    }

    #[inline]
    pub fn count(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            bits: self.bits | other.bits,
            len: self.len,
        }
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            bits: self.bits & other.bits,
            len: self.len,
        }
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        WorldSet {
            bits: self.bits & !other.bits,
            len: self.len,
        }
    }

    #[inline]
    pub fn complement(self) -> Self {
        WorldSet {
            bits: !self.bits & mask(self.universe()),
            len: self.len,
        }
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.bits & other.bits == 0
    }

    /// Worlds in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w)
            }
        })
    }

    /// First world in the set, if any.
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// Every subset of `self`, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = WorldSet> {
        let full = self.bits;
        let len = self.len;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(WorldSet { bits: cur, len })
        })
    }

    /// Renders the set with the given world names, e.g. `{a,b}`.
    pub fn display_with<'a>(self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedSet { set: self, names }
    }
}

struct NamedSet<'a> {
    set: WorldSet,
    names: &'a [String],
}

impl fmt::Display for NamedSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match self.names.get(w) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "w{w}")?,
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        NamedSet {
            set: *self,
            names: &[],
        }
        .fmt(f)
    }
}

impl PartialOrd for WorldSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WorldSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count()
            .cmp(&other.count())
            .then(self.bits.cmp(&other.bits))
            .then(self.len.cmp(&other.len))
    }
}

/// Sorts a family canonically and removes duplicates.
pub fn canonical_family(mut family: Vec<WorldSet>) -> Vec<WorldSet> {
    family.sort();
    family.dedup();
    family
}

/// The ⊆-minimal members of a family, in canonical order.
pub fn minimal_members(family: &[WorldSet]) -> Vec<WorldSet> {
    let family = canonical_family(family.to_vec());
    let mut minimal: Vec<WorldSet> = Vec::new();
    // canonical order lists smaller sets first, so a set's subsets precede it
    for set in family {
        if !minimal.iter().any(|m| m.is_subset(set)) {
            minimal.push(set);
        }
    }
    minimal
}

/// Union of every member of a family.
pub fn family_union(universe: usize, family: &[WorldSet]) -> WorldSet {
    family
        .iter()
        .fold(WorldSet::empty(universe), |acc, s| acc.union(*s))
}

/// A superset-closed family within a bound, stored as its minimal antichain.
///
/// `X` is a member iff `X ⊆ bound` and some minimal set is contained in `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpSet {
    bound: WorldSet,
    minimal: Vec<WorldSet>,
}

impl UpSet {
    /// Closes `generators` upwards inside `bound`. Generators outside the bound
    /// are dropped.
    pub fn new(bound: WorldSet, generators: &[WorldSet]) -> Self {
        let inside: Vec<WorldSet> = generators
            .iter()
            .copied()
            .filter(|g| g.is_subset(bound))
            .collect();
        UpSet {
            bound,
            minimal: minimal_members(&inside),
        }
    }

    pub fn bound(&self) -> WorldSet {
        self.bound
    }

    pub fn minimal(&self) -> &[WorldSet] {
        &self.minimal
    }

    pub fn is_empty(&self) -> bool {
        self.minimal.is_empty()
    }

    pub fn contains(&self, x: WorldSet) -> bool {
        x.is_subset(self.bound) && self.minimal.iter().any(|m| m.is_subset(x))
    }

    /// True iff some member lies inside `x`.
    pub fn has_member_within(&self, x: WorldSet) -> bool {
        self.minimal.iter().any(|m| m.is_subset(x))
    }

    /// Every member, in canonical order. Exponential in `|bound|`.
    pub fn members(&self) -> Vec<WorldSet> {
        let mut out: Vec<WorldSet> = self.bound.subsets().filter(|x| self.contains(*x)).collect();
        out.sort();
        out
    }

    pub fn member_count(&self) -> usize {
        self.bound.subsets().filter(|x| self.contains(*x)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_powerset() {
        let s = WorldSet::from_worlds(4, [0, 2, 3]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(WorldSet::empty(3).subsets().count(), 1);
    }

    #[test]
    fn ordering_is_cardinality_first() {
        let a = WorldSet::from_worlds(3, [2]);
        let b = WorldSet::from_worlds(3, [0, 1]);
        assert!(a < b);
        assert!(WorldSet::empty(3) < a);
    }

    #[test]
    fn from_bits_rejects_out_of_range() {
        assert!(WorldSet::from_bits(2, 0b100).is_none());
        assert!(WorldSet::from_bits(3, 0b100).is_some());
    }

    #[test]
    fn complement_stays_in_universe() {
        let s = WorldSet::from_worlds(3, [1]);
        assert_eq!(s.complement(), WorldSet::from_worlds(3, [0, 2]));
        assert!(WorldSet::full(64).complement().is_empty());
    }

    #[test]
    fn upset_membership() {
        let bound = WorldSet::from_worlds(3, [0, 1]);
        let up = UpSet::new(bound, &[WorldSet::from_worlds(3, [0]), bound]);
        assert_eq!(up.minimal(), &[WorldSet::from_worlds(3, [0])]);
        assert!(up.contains(bound));
        assert!(!up.contains(WorldSet::full(3)));
        assert_eq!(up.member_count(), 2);
    }

    #[test]
    fn display_uses_names() {
        let names = vec!["a".to_string(), "b".to_string()];
        let s = WorldSet::from_worlds(2, [0, 1]);
        assert_eq!(s.display_with(&names).to_string(), "{a,b}");
        assert_eq!(s.to_string(), "{w0,w1}");
    }

    mod laws {
        use super::*;
        use proptest::prelude::*;

        fn pair() -> impl Strategy<Value = (WorldSet, WorldSet)> {
            (1usize..=MAX_WORLDS).prop_flat_map(|n| {
                let set = any::<u64>().prop_map(move |b| {
                    WorldSet::from_worlds(n, (0..n).filter(|i| b >> i & 1 == 1))
                });
                (set.clone(), set)
            })
        }

        proptest! {
            #[test]
            fn de_morgan((a, b) in pair()) {
                prop_assert_eq!(a.union(b).complement(), a.complement().intersection(b.complement()));
                prop_assert_eq!(a.difference(b), a.intersection(b.complement()));
            }

            #[test]
            fn subset_agrees_with_union((a, b) in pair()) {
                prop_assert_eq!(a.is_subset(b), a.union(b) == b);
                prop_assert_eq!(a.is_disjoint(b), a.intersection(b).is_empty());
                prop_assert_eq!(a.count(), a.iter().count());
                prop_assert!(a.complement().complement() == a);
            }
        }
    }
}
