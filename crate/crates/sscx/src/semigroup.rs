//! Finite semigroups as multiplication tables, the Brandt semigroups B(n),
//! and the structural decompositions of their subsemigroups.

use std::fmt;
use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::set::{ElementSet, MAX_UNIVERSE};

/// Largest n accepted by [`brandt`].
pub const BRANDT_CAP: usize = 8;

/// Sizes up to this bound get an exhaustive associativity check.
const ASSOC_EXHAUSTIVE_LIMIT: usize = 64;
/// Random triples sampled above the exhaustive limit.
const ASSOC_SAMPLES: usize = 100_000;

/// A finite semigroup given by its multiplication table.
///
/// Element ids are `0..size`. An optional two-sided zero and an optional
/// involution (the inverse map of an inverse semigroup) are carried along
/// when present.
#[derive(Clone)]
pub struct FiniteSemigroup {
    size: usize,
    table: Vec<u8>,
    zero: Option<usize>,
    involution: Option<Vec<u8>>,
    names: Vec<String>,
}

/// A subset of a semigroup known to be closed under the product.
///
/// The empty set qualifies. Instances are only built by operations that
/// establish closure ([`FiniteSemigroup::generate`], [`sub_semigroup`], ...).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubSemigroup(pub(crate) ElementSet);

impl SubSemigroup {
    pub fn set(&self) -> &ElementSet {
        &self.0
    }

    pub fn into_set(self) -> ElementSet {
        self.0
    }
}

impl Deref for SubSemigroup {
    type Target = ElementSet;

    fn deref(&self) -> &ElementSet {
        &self.0
    }
}

/// An element of B(n): the zero or a coordinate pair (i,j) with 1 ≤ i,j ≤ n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BrandtCoord {
    Zero,
    Pair(usize, usize),
}

impl BrandtCoord {
    /// Element id inside B(n): 0 for the zero, (i-1)n + j for (i,j).
    pub fn id(&self, n: usize) -> usize {
        match *self {
            BrandtCoord::Zero => 0,
            BrandtCoord::Pair(i, j) => {
                debug_assert!(1 <= i && i <= n && 1 <= j && j <= n);
                (i - 1) * n + j
            }
        }
    }

    pub fn from_id(n: usize, id: usize) -> Self {
        debug_assert!(id <= n * n);
        if id == 0 {
            BrandtCoord::Zero
        } else {
            BrandtCoord::Pair((id - 1) / n + 1, (id - 1) % n + 1)
        }
    }
}

impl fmt::Display for BrandtCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BrandtCoord::Zero => write!(f, "0"),
            BrandtCoord::Pair(i, j) => write!(f, "({i},{j})"),
        }
    }
}

/// The aperiodic Brandt semigroup B(n) on n²+1 elements.
///
/// Product rule: (i,j)(k,l) = (i,l) if j = k, otherwise 0. The zero sits at
/// id 0 and the involution swaps coordinates.
pub fn brandt(n: usize) -> Result<FiniteSemigroup> {
    if n == 0 {
        return Err(Error::contract("brandt requires n >= 1"));
    }
    if n > BRANDT_CAP {
        return Err(Error::SizeLimit {
            what: "brandt n",
            limit: BRANDT_CAP,
            actual: n,
        });
    }
    let size = n * n + 1;
    let mut table = vec![0u8; size * size];
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if j == k {
                        let a = BrandtCoord::Pair(i, j).id(n);
                        let b = BrandtCoord::Pair(k, l).id(n);
                        table[a * size + b] = BrandtCoord::Pair(i, l).id(n) as u8;
                    }
                }
            }
        }
    }
    let mut involution = vec![0u8; size];
    let mut names = vec!["0".to_string()];
    for (id, inv) in involution.iter_mut().enumerate().skip(1) {
        let c = BrandtCoord::from_id(n, id);
        if let BrandtCoord::Pair(i, j) = c {
            *inv = BrandtCoord::Pair(j, i).id(n) as u8;
        }
        names.push(c.to_string());
    }
    let s = FiniteSemigroup {
        size,
        table,
        zero: Some(0),
        involution: Some(involution),
        names,
    };
    debug_assert!(s.check_invariants().is_ok());
    Ok(s)
}

impl FiniteSemigroup {
    /// Build from a size×size table of element ids, checking associativity.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        Self::from_parts(table, None, None)
    }

    /// Build with an optional involution and optional display names.
    pub fn from_parts(
        table: &[Vec<usize>],
        involution: Option<&[usize]>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let size = table.len();
        if size == 0 {
            return Err(Error::contract("semigroup must be nonempty"));
        }
        if size > MAX_UNIVERSE {
            return Err(Error::SizeLimit {
                what: "semigroup size",
                limit: MAX_UNIVERSE,
                actual: size,
            });
        }
        let mut flat = vec![0u8; size * size];
        for (a, row) in table.iter().enumerate() {
            if row.len() != size {
                return Err(Error::contract(format!(
                    "row {a} has length {}, expected {size}",
                    row.len()
                )));
            }
            for (b, &p) in row.iter().enumerate() {
                if p >= size {
                    return Err(Error::contract(format!(
                        "table entry {p} out of range at ({a},{b})"
                    )));
                }
                flat[a * size + b] = p as u8;
            }
        }
        let inv = match involution {
            None => None,
            Some(m) => {
                if m.len() != size {
                    return Err(Error::contract("involution length mismatch"));
                }
                if m.iter().any(|&x| x >= size) {
                    return Err(Error::contract("involution id out of range"));
                }
                Some(m.iter().map(|&x| x as u8).collect())
            }
        };
        let names = match names {
            Some(v) => {
                if v.len() != size {
                    return Err(Error::contract("names length mismatch"));
                }
                v
            }
            None => (0..size).map(|i| format!("s{i}")).collect(),
        };
        let mut s = FiniteSemigroup {
            size,
            table: flat,
            zero: None,
            involution: inv,
            names,
        };
        s.zero = s.detect_zero();
        s.check_invariants()?;
        Ok(s)
    }

    fn detect_zero(&self) -> Option<usize> {
        (0..self.size)
            .find(|&z| (0..self.size).all(|a| self.product(z, a) == z && self.product(a, z) == z))
    }

    /// Associativity (exhaustive for size ≤ 64, sampled above), the zero law,
    /// and the involution laws.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.size;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.product(self.product(a, b), c) != self.product(a, self.product(b, c)) {
                return Err(Error::contract(format!(
                    "associativity fails on ({a},{b},{c})"
                )));
            }
            Ok(())
        };
        if n <= ASSOC_EXHAUSTIVE_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1_ab1e);
            for _ in 0..ASSOC_SAMPLES {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        if let Some(z) = self.zero {
            for a in 0..n {
                if self.product(z, a) != z || self.product(a, z) != z {
                    return Err(Error::contract("declared zero is not absorbing"));
                }
            }
        }
        if let Some(inv) = &self.involution {
            for a in 0..n {
                if inv[inv[a] as usize] as usize != a {
                    return Err(Error::contract("involution is not an involution"));
                }
                for b in 0..n {
                    let lhs = inv[self.product(a, b)] as usize;
                    let rhs = self.product(inv[b] as usize, inv[a] as usize);
                    if lhs != rhs {
                        return Err(Error::contract("involution is not an antihomomorphism"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn inverse_of(&self, a: usize) -> Option<usize> {
        self.involution.as_ref().map(|m| m[a] as usize)
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    pub fn is_closed(&self, x: &ElementSet) -> bool {
        x.iter()
            .all(|a| x.iter().all(|b| x.contains(self.product(a, b))))
    }

    /// Subset product XY = { xy : x ∈ X, y ∈ Y }.
    pub fn set_product(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        let mut out = ElementSet::new(self.size);
        for a in x.iter() {
            for b in y.iter() {
                out.insert(self.product(a, b));
            }
        }
        out
    }

    /// Smallest product-closed superset of X.
    pub fn generate(&self, x: &ElementSet) -> SubSemigroup {
        let mut cur = *x;
        loop {
            let next = cur.union(&self.set_product(&cur, &cur));
            if next == cur {
                return SubSemigroup(cur);
            }
            cur = next;
        }
    }

    /// generate(X ∪ X⁻¹); the inverse subsemigroup generated by X.
    pub fn inverse_generate(&self, x: &ElementSet) -> Result<SubSemigroup> {
        let Some(inv) = &self.involution else {
            return Err(Error::unsupported(
                "inverse_generate requires an involution",
            ));
        };
        let mut seed = *x;
        for a in x.iter() {
            seed.insert(inv[a] as usize);
        }
        Ok(self.generate(&seed))
    }

    pub fn idempotents(&self) -> ElementSet {
        ElementSet::from_elems(
            self.size,
            (0..self.size).filter(|&a| self.product(a, a) == a),
        )
    }

    /// Least k with Tᵏ = {0}, if any. The empty set reports 0 by convention.
    pub fn nilpotency_index(&self, t: &ElementSet) -> Result<Option<usize>> {
        if !self.is_closed(t) {
            return Err(Error::contract("nilpotency_index requires a closed subset"));
        }
        if t.is_empty() {
            return Ok(Some(0));
        }
        let zero_set = self.zero.map(|z| ElementSet::singleton(self.size, z));
        let mut power = *t;
        let mut seen = std::collections::HashSet::new();
        for k in 1..=2 * self.size + 1 {
            if Some(power) == zero_set {
                return Ok(Some(k));
            }
            if !seen.insert(power.bits()) {
                return Ok(None);
            }
            power = self.set_product(&power, t);
        }
        Ok(None)
    }

    /// True iff S·I ∪ I·S ⊆ I.
    pub fn is_ideal(&self, i: &ElementSet) -> bool {
        let all = self.full_set();
        self.set_product(&all, i).is_subset_of(i) && self.set_product(i, &all).is_subset_of(i)
    }

    /// Collapse the ideal I to 0. Returns the quotient and the old→new id map.
    pub fn rees_quotient(&self, i: &ElementSet) -> Result<(FiniteSemigroup, Vec<usize>)> {
        if !self.is_ideal(i) {
            return Err(Error::contract("rees_quotient requires an ideal"));
        }
        match self.zero {
            Some(z) if i.contains(z) => {}
            _ => return Err(Error::contract("rees_quotient requires 0 ∈ I")),
        }
        let survivors: Vec<usize> = (0..self.size).filter(|&a| !i.contains(a)).collect();
        let qsize = survivors.len() + 1;
        let mut remap = vec![0usize; self.size];
        let mut names = vec!["0".to_string()];
        for (new_id, &old) in survivors.iter().enumerate() {
            remap[old] = new_id + 1;
            names.push(self.names[old].clone());
        }
        let mut table = vec![0u8; qsize * qsize];
        for (a_new, &a_old) in survivors.iter().enumerate() {
            for (b_new, &b_old) in survivors.iter().enumerate() {
                let p = self.product(a_old, b_old);
                table[(a_new + 1) * qsize + (b_new + 1)] = remap[p] as u8;
            }
        }
        let involution = self.involution.as_ref().and_then(|inv| {
            // Only meaningful when the ideal is involution-closed.
            if i.iter().all(|a| i.contains(inv[a] as usize)) {
                let mut q = vec![0u8; qsize];
                for (a_new, &a_old) in survivors.iter().enumerate() {
                    q[a_new + 1] = remap[inv[a_old] as usize] as u8;
                }
                Some(q)
            } else {
                None
            }
        });
        let q = FiniteSemigroup {
            size: qsize,
            table,
            zero: Some(0),
            involution,
            names,
        };
        debug_assert!(q.check_invariants().is_ok());
        Ok((q, remap))
    }

    /// The closed subset T as a standalone semigroup, with the new→old id map.
    pub fn sub_as_semigroup(&self, t: &ElementSet) -> Result<(FiniteSemigroup, Vec<usize>)> {
        if !self.is_closed(t) {
            return Err(Error::contract("sub_as_semigroup requires a closed subset"));
        }
        if t.is_empty() {
            return Err(Error::contract(
                "sub_as_semigroup requires a nonempty subset",
            ));
        }
        let old_ids = t.to_vec();
        let size = old_ids.len();
        let mut new_of = vec![usize::MAX; self.size];
        for (new, &old) in old_ids.iter().enumerate() {
            new_of[old] = new;
        }
        let mut table = vec![0u8; size * size];
        for (a, &ao) in old_ids.iter().enumerate() {
            for (b, &bo) in old_ids.iter().enumerate() {
                table[a * size + b] = new_of[self.product(ao, bo)] as u8;
            }
        }
        let involution = self.involution.as_ref().and_then(|inv| {
            if old_ids.iter().all(|&a| t.contains(inv[a] as usize)) {
                Some(
                    old_ids
                        .iter()
                        .map(|&a| new_of[inv[a] as usize] as u8)
                        .collect(),
                )
            } else {
                None
            }
        });
        let names = old_ids.iter().map(|&a| self.names[a].clone()).collect();
        let mut s = FiniteSemigroup {
            size,
            table,
            zero: None,
            involution,
            names,
        };
        s.zero = s.detect_zero();
        debug_assert!(s.check_invariants().is_ok());
        Ok((s, old_ids))
    }

    /// Deduplicated list of the cyclic subsemigroups s⁺, in canonical order,
    /// with the η-class index of every element (s η t iff s⁺ = t⁺).
    pub fn cyclic_subsemigroups(&self) -> (Vec<SubSemigroup>, Vec<usize>) {
        let per_elem: Vec<SubSemigroup> = (0..self.size)
            .map(|s| self.generate(&ElementSet::singleton(self.size, s)))
            .collect();
        let mut uniq: Vec<SubSemigroup> = per_elem.clone();
        uniq.sort();
        uniq.dedup();
        let class_of = per_elem
            .iter()
            .map(|s| uniq.binary_search(s).expect("dedup list contains every s⁺"))
            .collect();
        (uniq, class_of)
    }

    /// Serialize to the text interchange format.
    pub fn to_text(&self) -> String {
        let mut out = format!("size {}\n", self.size);
        if let Some(z) = self.zero {
            out.push_str(&format!("zero {z}\n"));
        }
        if let Some(inv) = &self.involution {
            out.push_str("involution");
            for &x in inv {
                out.push_str(&format!(" {x}"));
            }
            out.push('\n');
        }
        out.push_str("table\n");
        for a in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|b| self.product(a, b).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the text interchange format produced by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut size: Option<usize> = None;
        let mut declared_zero: Option<usize> = None;
        let mut involution: Option<Vec<usize>> = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut in_table = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            if in_table {
                let row: std::result::Result<Vec<usize>, _> =
                    line.split_whitespace().map(str::parse).collect();
                rows.push(row.map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1)))?);
                continue;
            }
            match toks.next() {
                Some("size") => {
                    let v = toks
                        .next()
                        .ok_or_else(|| Error::parse("size needs a value"))?;
                    size = Some(v.parse().map_err(|e| Error::parse(format!("size: {e}")))?);
                }
                Some("zero") => {
                    let v = toks
                        .next()
                        .ok_or_else(|| Error::parse("zero needs a value"))?;
                    declared_zero =
                        Some(v.parse().map_err(|e| Error::parse(format!("zero: {e}")))?);
                }
                Some("involution") => {
                    let v: std::result::Result<Vec<usize>, _> = toks.map(str::parse).collect();
                    involution = Some(v.map_err(|e| Error::parse(format!("involution: {e}")))?);
                }
                Some("table") => in_table = true,
                Some(k) => return Err(Error::parse(format!("unknown keyword `{k}`"))),
                None => {}
            }
        }
        let size = size.ok_or_else(|| Error::parse("missing `size`"))?;
        if rows.len() != size {
            return Err(Error::parse(format!(
                "expected {size} table rows, found {}",
                rows.len()
            )));
        }
        let s = Self::from_parts(&rows, involution.as_deref(), None)?;
        if declared_zero.is_some() && s.zero != declared_zero {
            return Err(Error::parse("declared zero does not match the table"));
        }
        Ok(s)
    }
}

/// Validate T as a subsemigroup of S.
pub fn sub_semigroup(s: &FiniteSemigroup, t: &ElementSet) -> Result<SubSemigroup> {
    if s.is_closed(t) {
        Ok(SubSemigroup(*t))
    } else {
        Err(Error::contract("subset is not product-closed"))
    }
}

/// 0-disjoint union: keep the parts' products, share the zero, and send
/// cross-part products to 0. Part k's nonzero elements keep their relative
/// order after an offset.
pub fn zero_disjoint_union(parts: &[&FiniteSemigroup]) -> Result<FiniteSemigroup> {
    let mut total = 1usize;
    for (k, p) in parts.iter().enumerate() {
        if p.zero().is_none() {
            return Err(Error::unsupported(format!("part {k} has no zero")));
        }
        total += p.size() - 1;
    }
    if total > MAX_UNIVERSE {
        return Err(Error::SizeLimit {
            what: "union size",
            limit: MAX_UNIVERSE,
            actual: total,
        });
    }
    // old id (per part) → new id, skipping each part's zero
    let mut maps: Vec<Vec<usize>> = Vec::with_capacity(parts.len());
    let mut names = vec!["0".to_string()];
    let mut next = 1usize;
    for p in parts {
        let z = p.zero().unwrap();
        let mut m = vec![0usize; p.size()];
        for (a, slot) in m.iter_mut().enumerate() {
            if a != z {
                *slot = next;
                names.push(p.name(a).to_string());
                next += 1;
            }
        }
        maps.push(m);
    }
    let mut table = vec![0u8; total * total];
    for (k, p) in parts.iter().enumerate() {
        let z = p.zero().unwrap();
        for a in 0..p.size() {
            for b in 0..p.size() {
                if a != z && b != z {
                    table[maps[k][a] * total + maps[k][b]] = maps[k][p.product(a, b)] as u8;
                }
            }
        }
    }
    let involution = {
        let all_inv = parts.iter().all(|p| p.has_involution());
        all_inv.then(|| {
            let mut inv = vec![0u8; total];
            for (k, p) in parts.iter().enumerate() {
                let z = p.zero().unwrap();
                for a in 0..p.size() {
                    if a != z {
                        inv[maps[k][a]] = maps[k][p.inverse_of(a).unwrap()] as u8;
                    }
                }
            }
            inv
        })
    };
    let s = FiniteSemigroup {
        size: total,
        table,
        zero: Some(0),
        involution,
        names,
    };
    debug_assert!(s.check_invariants().is_ok());
    Ok(s)
}

/// Split a subsemigroup T of B(n) containing 0 into its unique inverse part I
/// and nilpotent ideal N with T = I ∪ N and I ∩ N = {0}.
///
/// I collects 0, the diagonal pairs of T, and every (i,j) whose reverse (j,i)
/// also lies in T; N is the rest plus 0.
pub fn in_decompose(n: usize, t: &ElementSet) -> Result<(SubSemigroup, SubSemigroup)> {
    let size = n * n + 1;
    if t.universe() != size {
        return Err(Error::contract("subset universe does not match B(n)"));
    }
    if !t.contains(0) {
        return Err(Error::contract("in_decompose requires 0 ∈ T"));
    }
    let member = |i: usize, j: usize| t.contains(BrandtCoord::Pair(i, j).id(n));
    for a in t.iter().filter(|&a| a != 0) {
        let BrandtCoord::Pair(i, j) = BrandtCoord::from_id(n, a) else {
            unreachable!()
        };
        for b in t.iter().filter(|&b| b != 0) {
            let BrandtCoord::Pair(k, l) = BrandtCoord::from_id(n, b) else {
                unreachable!()
            };
            if j == k && !member(i, l) {
                return Err(Error::contract("in_decompose requires a closed subset"));
            }
        }
    }
    let mut i_part = ElementSet::singleton(size, 0);
    for a in t.iter().filter(|&a| a != 0) {
        let BrandtCoord::Pair(i, j) = BrandtCoord::from_id(n, a) else {
            unreachable!()
        };
        let symmetric = if i == j { true } else { member(j, i) };
        if symmetric {
            i_part.insert(a);
        }
    }
    let mut n_part = t.difference(&i_part);
    n_part.insert(0);
    Ok((SubSemigroup(i_part), SubSemigroup(n_part)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize) -> FiniteSemigroup {
        brandt(n).unwrap()
    }

    fn pid(n: usize, i: usize, j: usize) -> usize {
        BrandtCoord::Pair(i, j).id(n)
    }

    #[test]
    fn brandt_1_is_forced() {
        let s = b(1);
        assert_eq!(s.size(), 2);
        assert_eq!(s.product(1, 1), 1);
        assert_eq!(s.product(0, 1), 0);
        assert_eq!(s.zero(), Some(0));
    }

    #[test]
    fn brandt_2_products() {
        let s = b(2);
        assert_eq!(s.product(pid(2, 1, 2), pid(2, 2, 1)), pid(2, 1, 1));
        assert_eq!(s.product(pid(2, 1, 2), pid(2, 1, 2)), 0);
    }

    #[test]
    fn brandt_3_associativity_exhaustive() {
        let s = b(3);
        for a in 0..s.size() {
            for bb in 0..s.size() {
                for c in 0..s.size() {
                    assert_eq!(
                        s.product(s.product(a, bb), c),
                        s.product(a, s.product(bb, c))
                    );
                }
            }
        }
    }

    #[test]
    fn brandt_cap() {
        assert!(matches!(brandt(9), Err(Error::SizeLimit { .. })));
        assert!(brandt(0).is_err());
    }

    #[test]
    fn coord_roundtrip() {
        for n in 1..=5 {
            for id in 0..=n * n {
                assert_eq!(BrandtCoord::from_id(n, id).id(n), id);
            }
        }
    }

    #[test]
    fn generate_examples() {
        let s2 = b(2);
        let g = s2.generate(&ElementSet::singleton(s2.size(), pid(2, 1, 2)));
        assert_eq!(g.to_vec(), vec![0, pid(2, 1, 2)]);

        let g = s2.generate(&ElementSet::from_elems(
            s2.size(),
            [pid(2, 1, 2), pid(2, 2, 1)],
        ));
        assert_eq!(g.len(), s2.size());

        let s3 = b(3);
        let g = s3.generate(&ElementSet::from_elems(
            s3.size(),
            [pid(3, 1, 2), pid(3, 2, 3)],
        ));
        let expect =
            ElementSet::from_elems(s3.size(), [0, pid(3, 1, 2), pid(3, 2, 3), pid(3, 1, 3)]);
        assert_eq!(*g.set(), expect);
    }

    #[test]
    fn generate_is_closure_operator() {
        let s = b(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let bits = rng.gen_range(0u128..1 << s.size());
            let x = ElementSet::from_bits(s.size(), bits);
            let gx = s.generate(&x);
            assert!(x.is_subset_of(gx.set()));
            assert_eq!(s.generate(gx.set()).set(), gx.set());
            let y = x.without(x.iter().next().unwrap_or(0));
            assert!(s.generate(&y).set().is_subset_of(gx.set()));
        }
    }

    #[test]
    fn inverse_generate_examples() {
        let s3 = b(3);
        let g = s3
            .inverse_generate(&ElementSet::singleton(s3.size(), pid(3, 1, 2)))
            .unwrap();
        let expect = ElementSet::from_elems(
            s3.size(),
            [0, pid(3, 1, 2), pid(3, 1, 1), pid(3, 2, 1), pid(3, 2, 2)],
        );
        assert_eq!(*g.set(), expect);

        // the path 1–2–3 spans K₃, so it inverse-generates everything
        let g = s3
            .inverse_generate(&ElementSet::from_elems(
                s3.size(),
                [pid(3, 1, 2), pid(3, 2, 3)],
            ))
            .unwrap();
        assert_eq!(g.len(), s3.size());

        let s2 = b(2);
        let g = s2
            .inverse_generate(&ElementSet::singleton(s2.size(), pid(2, 1, 1)))
            .unwrap();
        assert_eq!(g.to_vec(), vec![pid(2, 1, 1)]);

        let plain = FiniteSemigroup::from_table(&[vec![0]]).unwrap();
        assert!(plain.inverse_generate(&ElementSet::new(1)).is_err());
    }

    #[test]
    fn idempotent_examples() {
        for n in 1..=4 {
            let s = b(n);
            let e = s.idempotents();
            assert_eq!(e.len(), n + 1);
            assert!(e.contains(0));
            for i in 1..=n {
                assert!(e.contains(pid(n, i, i)));
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        let s2 = b(2);
        let t = ElementSet::from_elems(s2.size(), [0, pid(2, 1, 2)]);
        assert_eq!(s2.nilpotency_index(&t).unwrap(), Some(2));
        assert_eq!(s2.nilpotency_index(&s2.full_set()).unwrap(), None);
        assert_eq!(
            s2.nilpotency_index(&ElementSet::new(s2.size())).unwrap(),
            Some(0)
        );
        assert!(s2
            .nilpotency_index(&ElementSet::singleton(s2.size(), pid(2, 1, 2)))
            .is_err());
    }

    #[test]
    fn maximal_nilpotent_has_index_n() {
        // N(L) for L = 1<2<...<n: arcs (a,b) with b < a, plus 0
        for n in 2..=4 {
            let s = b(n);
            let mut t = ElementSet::singleton(s.size(), 0);
            for a in 1..=n {
                for bb in 1..a {
                    t.insert(pid(n, a, bb));
                }
            }
            assert_eq!(t.len(), n * (n - 1) / 2 + 1);
            assert_eq!(s.nilpotency_index(&t).unwrap(), Some(n));
        }
    }

    #[test]
    fn ideal_examples() {
        let s2 = b(2);
        assert!(s2.is_ideal(&ElementSet::singleton(s2.size(), 0)));
        assert!(!s2.is_ideal(&ElementSet::singleton(s2.size(), pid(2, 1, 1))));
        assert!(s2.is_ideal(&s2.full_set()));
    }

    #[test]
    fn rees_quotient_of_zero_is_isomorphic() {
        let s = b(2);
        let (q, remap) = s
            .rees_quotient(&ElementSet::singleton(s.size(), 0))
            .unwrap();
        assert_eq!(q.size(), s.size());
        for a in 0..s.size() {
            for bb in 0..s.size() {
                assert_eq!(q.product(remap[a], remap[bb]), remap[s.product(a, bb)]);
            }
        }
    }

    #[test]
    fn rees_quotient_size_formula() {
        let s = b(3);
        // ideal generated by row 3: {0} ∪ {3}×{1,2,3} is not an ideal; use a real one:
        // I = {0} ∪ {(i,j): i arbitrary} … simplest nontrivial ideal of B(n) is all of it
        let (q, _) = s.rees_quotient(&s.full_set()).unwrap();
        assert_eq!(q.size(), s.size() - s.size() + 1);
    }

    #[test]
    fn zero_union_examples() {
        let u = zero_disjoint_union(&[&b(1), &b(1)]).unwrap();
        assert_eq!(u.size(), 3);
        assert_eq!(u.product(1, 2), 0);
        assert_eq!(u.product(1, 1), 1);
        assert_eq!(u.product(2, 2), 2);
        u.check_invariants().unwrap();
    }

    #[test]
    fn in_decompose_full_and_nilpotent() {
        let n = 3;
        let s = b(n);
        let (i, nn) = in_decompose(n, &s.full_set()).unwrap();
        assert_eq!(*i.set(), s.full_set());
        assert_eq!(nn.to_vec(), vec![0]);

        // T = N(L) ∪ E for L = 1<2<3
        let mut t = s.idempotents();
        t.insert(0);
        for a in 1..=n {
            for bb in 1..a {
                t.insert(pid(n, a, bb));
            }
        }
        let (i, nn) = in_decompose(n, &t).unwrap();
        let mut e = s.idempotents();
        e.insert(0);
        assert_eq!(*i.set(), e);
        assert_eq!(nn.len(), n * (n - 1) / 2 + 1);
        assert_eq!(i.intersection(nn.set()).to_vec(), vec![0]);
        assert_eq!(i.union(nn.set()), t);
    }

    #[test]
    fn cyclic_subsemigroups_of_brandt_are_all_distinct() {
        // aperiodic ⇒ η is the identity
        for n in 1..=3 {
            let s = b(n);
            let (cyc, class_of) = s.cyclic_subsemigroups();
            assert_eq!(cyc.len(), s.size());
            let mut seen = class_of.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), s.size());
        }
        let s = b(2);
        let g = s.generate(&ElementSet::singleton(s.size(), pid(2, 1, 2)));
        let (cyc, _) = s.cyclic_subsemigroups();
        assert!(cyc.contains(&g));
    }

    #[test]
    fn text_roundtrip() {
        let s = b(2);
        let text = s.to_text();
        let t = FiniteSemigroup::from_text(&text).unwrap();
        assert_eq!(t.size(), s.size());
        assert_eq!(t.zero(), s.zero());
        for a in 0..s.size() {
            assert_eq!(t.inverse_of(a), s.inverse_of(a));
            for bb in 0..s.size() {
                assert_eq!(t.product(a, bb), s.product(a, bb));
            }
        }
    }

    #[test]
    fn from_table_rejects_non_associative() {
        // left-zero vs constant mix that breaks associativity
        let bad = vec![vec![0, 1], vec![0, 0]];
        assert!(FiniteSemigroup::from_table(&bad).is_err());
    }

    #[test]
    fn sub_as_semigroup_of_brandt() {
        let s = b(2);
        let t = ElementSet::from_elems(s.size(), [0, pid(2, 1, 2)]);
        let (sub, old_ids) = s.sub_as_semigroup(&t).unwrap();
        assert_eq!(sub.size(), 2);
        assert_eq!(sub.zero(), Some(0));
        assert_eq!(old_ids, vec![0, pid(2, 1, 2)]);
        assert_eq!(sub.product(1, 1), 0);
    }
}
