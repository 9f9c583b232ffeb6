//! Binary relations on {1..n} as bit matrices, the dictionary between
//! subsets of B(n) and relations, and the counting operations it enables.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::semigroup::{BrandtCoord, SubSemigroup};
use crate::set::ElementSet;

/// Point-count cap for [`count_linear_extensions`] (down-set DP memory).
pub const LINEXT_CAP: usize = 12;
/// Cap for [`count_transitive`].
pub const TRANSITIVE_COUNT_CAP: usize = 5;
/// Hard cap on relation size; everything here fits in u16 rows.
pub const RELATION_CAP: usize = 12;

/// A binary relation on {1..n}, stored as one bit row per point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanRelation {
    n: usize,
    rows: Vec<u16>,
}

/// Finest label applying to a relation, in the order used by [`classify`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelationClass {
    NotTransitive,
    Transitive,
    StrictPartialOrder,
    PartialEquivalence,
    Preorder,
    Equivalence,
}

impl BooleanRelation {
    pub fn new(n: usize) -> Self {
        assert!(
            n <= RELATION_CAP,
            "relation size {n} exceeds {RELATION_CAP}"
        );
        BooleanRelation {
            n,
            rows: vec![0; n],
        }
    }

    /// Build from 1-based pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::new(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        debug_assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        self.rows[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        self.rows[i - 1] |= 1 << (j - 1);
    }

    /// 1-based pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                if self.contains(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Relational composition: (i,k) ∈ R∘Q iff ∃j (i,j) ∈ R and (j,k) ∈ Q.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::new(self.n);
        for i in 0..self.n {
            let mut row = 0u16;
            let mut mids = self.rows[i];
            while mids != 0 {
                let j = mids.trailing_zeros() as usize;
                mids &= mids - 1;
                row |= other.rows[j];
            }
            out.rows[i] = row;
        }
        out
    }

    pub fn is_subrelation_of(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subrelation_of(self)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.rows[i] >> i & 1 == 1)
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|i| self.rows[i] >> i & 1 == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (1..=self.n).all(|j| self.contains(i, j) == self.contains(j, i)))
    }

    /// Transitive closure (of the relation itself, not reflexive).
    pub fn transitive_closure(&self) -> Self {
        let mut cur = self.clone();
        loop {
            let step = cur.compose(&cur);
            let mut next = cur.clone();
            for i in 0..self.n {
                next.rows[i] |= step.rows[i];
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

impl fmt::Display for BooleanRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (i, j)) in self.pairs().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for BooleanRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The relation of X ⊆ B(n): (i,j) ∈ R iff the pair (i,j) ∈ X. The zero is
/// ignored, so the map is 2-to-1 overall and bijective on subsets containing 0.
pub fn to_relation(n: usize, x: &ElementSet) -> BooleanRelation {
    debug_assert_eq!(x.universe(), n * n + 1);
    let mut r = BooleanRelation::new(n);
    for id in x.iter().filter(|&id| id != 0) {
        if let BrandtCoord::Pair(i, j) = BrandtCoord::from_id(n, id) {
            r.insert(i, j);
        }
    }
    r
}

/// Inverse of [`to_relation`] on the 0-containing fiber.
pub fn relation_to_subset_with_zero(r: &BooleanRelation) -> ElementSet {
    let n = r.n();
    let mut x = ElementSet::singleton(n * n + 1, 0);
    for (i, j) in r.pairs() {
        x.insert(BrandtCoord::Pair(i, j).id(n));
    }
    x
}

/// Finest label for R. Precedence among transitive relations: equivalence,
/// preorder, partial equivalence, strict partial order, plain transitive.
/// The empty relation reports partial-equivalence (the empty partition).
pub fn classify(r: &BooleanRelation) -> RelationClass {
    if !r.is_transitive() {
        return RelationClass::NotTransitive;
    }
    if r.is_reflexive() {
        if r.is_symmetric() {
            return RelationClass::Equivalence;
        }
        return RelationClass::Preorder;
    }
    if r.is_symmetric() {
        return RelationClass::PartialEquivalence;
    }
    if r.is_irreflexive() {
        return RelationClass::StrictPartialOrder;
    }
    RelationClass::Transitive
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationClass::NotTransitive => "not-transitive",
            RelationClass::Transitive => "transitive",
            RelationClass::StrictPartialOrder => "strict-partial-order",
            RelationClass::PartialEquivalence => "partial-equivalence",
            RelationClass::Preorder => "preorder",
            RelationClass::Equivalence => "equivalence",
        };
        f.write_str(s)
    }
}

/// Split a transitive R into its partial-equivalence part Π (mutual pairs and
/// diagonal) and strict-order part P = R ∖ Π, with ΠP ∪ PΠ ⊆ P.
pub fn split_transitive(r: &BooleanRelation) -> Result<(BooleanRelation, BooleanRelation)> {
    if !r.is_transitive() {
        return Err(Error::contract(
            "split_transitive requires a transitive relation",
        ));
    }
    let n = r.n();
    let mut pi = BooleanRelation::new(n);
    let mut p = BooleanRelation::new(n);
    for (i, j) in r.pairs() {
        if i == j || r.contains(j, i) {
            pi.insert(i, j);
        } else {
            p.insert(i, j);
        }
    }
    debug_assert!(matches!(
        classify(&pi),
        RelationClass::PartialEquivalence | RelationClass::Equivalence
    ));
    Ok((pi, p))
}

/// All relations on n points, by bit scan. n ≤ 4.
pub fn enumerate_transitive(n: usize) -> Result<Vec<BooleanRelation>> {
    if n > 4 {
        return Err(Error::SizeLimit {
            what: "enumerate_transitive n",
            limit: 4,
            actual: n,
        });
    }
    let cells = n * n;
    let mut out = Vec::new();
    for bits in 0u32..1 << cells {
        let mut r = BooleanRelation::new(n);
        for c in 0..cells {
            if bits >> c & 1 == 1 {
                r.insert(c / n + 1, c % n + 1);
            }
        }
        if r.is_transitive() {
            out.push(r);
        }
    }
    Ok(out)
}

/// T(n), the number of transitive relations on n points. Exhaustive scan for
/// n ≤ 3, closure-pruned backtracking above.
pub fn count_transitive(n: usize) -> Result<BigUint> {
    if n > TRANSITIVE_COUNT_CAP {
        return Err(Error::SizeLimit {
            what: "count_transitive n",
            limit: TRANSITIVE_COUNT_CAP,
            actual: n,
        });
    }
    if n <= 3 {
        return Ok(BigUint::from(enumerate_transitive(n)?.len()));
    }
    Ok(BigUint::from(count_transitive_backtrack(n)))
}

/// Backtracking over cells in row-major order; a branch dies as soon as some
/// fully-decided triple violates (i,j),(j,k) ∈ R ⇒ (i,k) ∈ R.
fn count_transitive_backtrack(n: usize) -> u64 {
    let cells = n * n;
    let cell = |i: usize, j: usize| i * n + j;
    // triples[m]: checks that become decidable once cell m is assigned
    let mut triples: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); cells];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, c) = (cell(i, j), cell(j, k), cell(i, k));
                let m = a.max(b).max(c);
                triples[m].push((a, b, c));
            }
        }
    }
    let mut assigned = vec![false; cells];
    fn rec(
        m: usize,
        cells: usize,
        assigned: &mut Vec<bool>,
        triples: &[Vec<(usize, usize, usize)>],
    ) -> u64 {
        if m == cells {
            return 1;
        }
        let mut total = 0;
        for v in [false, true] {
            assigned[m] = v;
            let ok = triples[m]
                .iter()
                .all(|&(a, b, c)| !(assigned[a] && assigned[b] && !assigned[c]));
            if ok {
                total += rec(m + 1, cells, assigned, triples);
            }
        }
        total
    }
    rec(0, cells, &mut assigned, &triples)
}

/// |Sub(B(n))| = T(n) + n + 1.
pub fn count_subsemigroups(n: usize) -> Result<BigUint> {
    Ok(count_transitive(n)? + BigUint::from(n + 1))
}

/// A partition of a subset of {1..n}: pairwise-disjoint nonempty blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl PartialPartition {
    /// Validates and canonicalizes (blocks sorted internally and by minimum).
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::contract("empty block in partial partition"));
            }
            let mut b = block;
            b.sort_unstable();
            for &x in &b {
                if x == 0 || x > n {
                    return Err(Error::contract(format!("point {x} outside 1..{n}")));
                }
                if seen[x] {
                    return Err(Error::contract(format!("point {x} appears twice")));
                }
                seen[x] = true;
            }
            canon.push(b);
        }
        canon.sort();
        Ok(PartialPartition { n, blocks: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

impl fmt::Display for PartialPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (t, x) in b.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All partial partitions of {1..n}, deterministic order. Count is Bell(n+1).
pub fn enumerate_partial_partitions(n: usize) -> Vec<PartialPartition> {
    fn rec(n: usize, next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<PartialPartition>) {
        if next > n {
            out.push(PartialPartition::new(n, blocks.clone()).expect("construction is valid"));
            return;
        }
        // point absent
        rec(n, next + 1, blocks, out);
        // point joins an existing block
        for k in 0..blocks.len() {
            blocks[k].push(next);
            rec(n, next + 1, blocks, out);
            blocks[k].pop();
        }
        // point opens a new block
        blocks.push(vec![next]);
        rec(n, next + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

/// {0} ∪ ⋃ᵢ (Xᵢ × Xᵢ): the inverse subsemigroup of B(n) matching Π.
pub fn partial_partition_to_inverse(n: usize, pi: &PartialPartition) -> SubSemigroup {
    debug_assert_eq!(pi.n(), n);
    let mut x = ElementSet::singleton(n * n + 1, 0);
    for block in pi.blocks() {
        for &i in block {
            for &j in block {
                x.insert(BrandtCoord::Pair(i, j).id(n));
            }
        }
    }
    SubSemigroup(x)
}

/// Bell numbers B(0..=k) by the triangle recurrence.
pub fn bell_numbers(k: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::from(1u32)];
    let mut row = vec![BigUint::from(1u32)];
    for _ in 1..=k {
        let mut next = vec![row.last().unwrap().clone()];
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

/// Number of strict linear orders containing the strict partial order P,
/// by dynamic programming over down-sets.
pub fn count_linear_extensions(p: &BooleanRelation) -> Result<BigUint> {
    if !p.is_irreflexive() || !p.is_transitive() {
        return Err(Error::contract(
            "count_linear_extensions requires a strict partial order",
        ));
    }
    let n = p.n();
    if n > LINEXT_CAP {
        return Err(Error::SizeLimit {
            what: "count_linear_extensions n",
            limit: LINEXT_CAP,
            actual: n,
        });
    }
    // above[x]: points strictly greater than x (0-based masks)
    let mut above = vec![0u32; n];
    for (i, j) in p.pairs() {
        above[i - 1] |= 1 << (j - 1);
    }
    let mut f = vec![0u64; 1 << n];
    f[0] = 1;
    for mask in 1u32..1 << n {
        let mut total = 0u64;
        let mut m = mask;
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            m &= m - 1;
            if above[x] & mask == 0 {
                total += f[(mask & !(1 << x)) as usize];
            }
        }
        f[mask as usize] = total;
    }
    Ok(BigUint::from(f[(1usize << n) - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::brandt;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classify_examples() {
        let r = BooleanRelation::from_pairs(3, [(1, 2), (2, 3), (1, 3)]);
        assert_eq!(classify(&r), RelationClass::StrictPartialOrder);

        let diag = BooleanRelation::from_pairs(3, [(1, 1), (2, 2), (3, 3)]);
        assert_eq!(classify(&diag), RelationClass::Equivalence);

        let r = BooleanRelation::from_pairs(3, [(1, 2), (2, 3)]);
        assert_eq!(classify(&r), RelationClass::NotTransitive);

        let r = BooleanRelation::from_pairs(2, [(1, 1), (2, 2), (1, 2)]);
        assert_eq!(classify(&r), RelationClass::Preorder);

        let r = BooleanRelation::from_pairs(3, [(1, 1), (1, 2), (2, 1), (2, 2)]);
        assert_eq!(classify(&r), RelationClass::PartialEquivalence);

        assert_eq!(
            classify(&BooleanRelation::new(3)),
            RelationClass::PartialEquivalence
        );

        // transitive, neither reflexive nor irreflexive nor symmetric
        let r = BooleanRelation::from_pairs(2, [(1, 1), (1, 2)]);
        assert_eq!(classify(&r), RelationClass::Transitive);
    }

    #[test]
    fn classify_consistency_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let bits: u16 = rng.gen();
            let mut r = BooleanRelation::new(4);
            for c in 0..16 {
                if bits >> c & 1 == 1 {
                    r.insert(c / 4 + 1, c % 4 + 1);
                }
            }
            match classify(&r) {
                RelationClass::NotTransitive => assert!(!r.is_transitive()),
                RelationClass::Equivalence => {
                    assert!(r.is_transitive() && r.is_reflexive() && r.is_symmetric())
                }
                RelationClass::Preorder => assert!(r.is_transitive() && r.is_reflexive()),
                RelationClass::PartialEquivalence => {
                    assert!(r.is_transitive() && r.is_symmetric())
                }
                RelationClass::StrictPartialOrder => {
                    assert!(r.is_transitive() && r.is_irreflexive())
                }
                RelationClass::Transitive => assert!(r.is_transitive()),
            }
        }
    }

    #[test]
    fn to_relation_is_morphism_on_b3() {
        let s = brandt(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let x = ElementSet::from_bits(s.size(), rng.gen_range(0..1u128 << s.size()));
            let y = ElementSet::from_bits(s.size(), rng.gen_range(0..1u128 << s.size()));
            let xy = s.set_product(&x, &y);
            let lhs = to_relation(3, &xy);
            let rhs = to_relation(3, &x).compose(&to_relation(3, &y));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn to_relation_two_to_one() {
        let x = ElementSet::from_elems(10, [BrandtCoord::Pair(1, 2).id(3)]);
        let with_zero = x.with(0);
        assert_eq!(to_relation(3, &x), to_relation(3, &with_zero));
        assert_eq!(relation_to_subset_with_zero(&to_relation(3, &x)), with_zero);
    }

    #[test]
    fn transitive_counts_small() {
        assert_eq!(count_transitive(1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_transitive(2).unwrap(), BigUint::from(13u32));
        assert_eq!(count_transitive(3).unwrap(), BigUint::from(171u32));
        assert!(count_transitive(6).is_err());
    }

    #[test]
    fn backtracking_agrees_with_scan_at_4() {
        let scan = enumerate_transitive(4).unwrap().len() as u64;
        assert_eq!(count_transitive_backtrack(4), scan);
    }

    #[test]
    fn subsemigroup_counts() {
        assert_eq!(count_subsemigroups(1).unwrap(), BigUint::from(4u32));
        assert_eq!(count_subsemigroups(2).unwrap(), BigUint::from(16u32));
        assert_eq!(count_subsemigroups(3).unwrap(), BigUint::from(175u32));
    }

    #[test]
    fn subsemigroups_with_zero_are_transitive_relations() {
        let s = brandt(3).unwrap();
        let mut count = 0u32;
        for bits in 0u128..1 << s.size() {
            let x = ElementSet::from_bits(s.size(), bits);
            if x.contains(0) && s.is_closed(&x) {
                count += 1;
                assert!(to_relation(3, &x).is_transitive());
            }
        }
        assert_eq!(BigUint::from(count), count_transitive(3).unwrap());
    }

    #[test]
    fn partial_partition_validation() {
        assert!(PartialPartition::new(3, vec![vec![1, 2], vec![2]]).is_err());
        assert!(PartialPartition::new(3, vec![vec![]]).is_err());
        assert!(PartialPartition::new(3, vec![vec![4]]).is_err());
        let p = PartialPartition::new(4, vec![vec![4], vec![2, 1]]).unwrap();
        assert_eq!(format!("{p}"), "[[1,2],[4]]");
    }

    #[test]
    fn partial_partition_counts_are_bell() {
        let bells = bell_numbers(6);
        assert_eq!(bells[5], BigUint::from(52u32));
        for n in 0..=4 {
            let all = enumerate_partial_partitions(n);
            assert_eq!(BigUint::from(all.len()), bells[n + 1], "n = {n}");
            let mut uniq = all.clone();
            uniq.dedup_by(|a, b| a == b);
            assert_eq!(uniq.len(), all.len());
        }
    }

    #[test]
    fn partition_to_inverse_examples() {
        let pi = PartialPartition::new(3, vec![vec![1, 2]]).unwrap();
        let t = partial_partition_to_inverse(3, &pi);
        let expect = ElementSet::from_elems(
            10,
            [
                0,
                BrandtCoord::Pair(1, 1).id(3),
                BrandtCoord::Pair(1, 2).id(3),
                BrandtCoord::Pair(2, 1).id(3),
                BrandtCoord::Pair(2, 2).id(3),
            ],
        );
        assert_eq!(*t.set(), expect);

        let empty = PartialPartition::new(3, vec![]).unwrap();
        assert_eq!(partial_partition_to_inverse(3, &empty).to_vec(), vec![0]);
    }

    #[test]
    fn split_transitive_props() {
        for r in enumerate_transitive(3).unwrap() {
            let (pi, p) = split_transitive(&r).unwrap();
            assert!(matches!(
                classify(&pi),
                RelationClass::PartialEquivalence | RelationClass::Equivalence
            ));
            assert!(p.is_irreflexive() && p.is_transitive());
            // ΠP ∪ PΠ ⊆ P
            assert!(pi.compose(&p).is_subrelation_of(&p));
            assert!(p.compose(&pi).is_subrelation_of(&p));
        }
    }

    #[test]
    fn linear_extension_examples() {
        let empty = BooleanRelation::new(3);
        assert_eq!(
            count_linear_extensions(&empty).unwrap(),
            BigUint::from(6u32)
        );

        let chain = BooleanRelation::from_pairs(3, [(1, 2), (2, 3), (1, 3)]);
        assert_eq!(
            count_linear_extensions(&chain).unwrap(),
            BigUint::from(1u32)
        );

        let single = BooleanRelation::from_pairs(3, [(1, 2)]);
        assert_eq!(
            count_linear_extensions(&single).unwrap(),
            BigUint::from(3u32)
        );

        let refl = BooleanRelation::from_pairs(2, [(1, 1)]);
        assert!(count_linear_extensions(&refl).is_err());
    }

    #[test]
    fn linear_extensions_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for n in 2..=5usize {
            for _ in 0..40 {
                // random strict partial order: transitive closure of random arcs on a random permutation order
                let perm: Vec<usize> = {
                    let mut v: Vec<usize> = (1..=n).collect();
                    for i in (1..v.len()).rev() {
                        v.swap(i, rng.gen_range(0..=i));
                    }
                    v
                };
                let mut p = BooleanRelation::new(n);
                for a in 0..n {
                    for b in a + 1..n {
                        if rng.gen_bool(0.4) {
                            p.insert(perm[a], perm[b]);
                        }
                    }
                }
                let p = p.transitive_closure();
                assert!(p.is_irreflexive());
                let dp = count_linear_extensions(&p).unwrap();
                let brute = (1..=n)
                    .permutations(n)
                    .filter(|order| {
                        let pos: Vec<usize> = {
                            let mut pos = vec![0; n + 1];
                            for (k, &v) in order.iter().enumerate() {
                                pos[v] = k;
                            }
                            pos
                        };
                        p.pairs().iter().all(|&(i, j)| pos[i] < pos[j])
                    })
                    .count();
                assert_eq!(dp, BigUint::from(brute));
            }
        }
    }
}
