use std::cmp::Ordering;
use std::fmt;

/// Largest universe an [`ElementSet`] can range over.
pub const MAX_UNIVERSE: usize = 128;

/// A subset of a fixed universe `{0, ..., universe-1}`, packed into a `u128`.
///
/// Element ids are indices into some ambient structure (usually a
/// [`FiniteSemigroup`](crate::semigroup::FiniteSemigroup)); the set itself
/// knows nothing about what they denote.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: u32,
    bits: u128,
}

impl ElementSet {
    /// The empty subset of `{0, ..., universe-1}`.
    pub fn new(universe: usize) -> Self {
        assert!(
            universe <= MAX_UNIVERSE,
            "universe {universe} exceeds {MAX_UNIVERSE}"
        );
        ElementSet {
            universe: universe as u32,
            bits: 0,
        }
    }

    /// The full universe as a set.
    pub fn full(universe: usize) -> Self {
        assert!(
            universe <= MAX_UNIVERSE,
            "universe {universe} exceeds {MAX_UNIVERSE}"
        );
        let bits = if universe == MAX_UNIVERSE {
            !0
        } else {
            (1u128 << universe) - 1
        };
        ElementSet {
            universe: universe as u32,
            bits,
        }
    }

    pub fn singleton(universe: usize, e: usize) -> Self {
        let mut s = Self::new(universe);
        s.insert(e);
        s
    }

    pub fn from_elems(universe: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn from_bits(universe: usize, bits: u128) -> Self {
        let full = Self::full(universe);
        assert!(bits & !full.bits == 0, "bits outside universe");
        ElementSet {
            universe: universe as u32,
            bits,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.universe() && self.bits >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        assert!(
            e < self.universe(),
            "element {e} outside universe {}",
            self.universe
        );
        self.bits |= 1u128 << e;
    }

    pub fn remove(&mut self, e: usize) {
        if e < self.universe() {
            self.bits &= !(1u128 << e);
        }
    }

    /// Copy of `self` with `e` added.
    pub fn with(&self, e: usize) -> Self {
        let mut s = *self;
        s.insert(e);
        s
    }

    /// Copy of `self` with `e` removed.
    pub fn without(&self, e: usize) -> Self {
        let mut s = *self;
        s.remove(e);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        ElementSet {
            universe: self.universe,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        ElementSet {
            universe: self.universe,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        ElementSet {
            universe: self.universe,
            bits: self.bits & !other.bits,
        }
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe()).difference(self)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Elements in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Canonical order: universe, then cardinality, then bit pattern.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then(self.len().cmp(&other.len()))
            .then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
