//! Finite lattices, ∨-generated lattices, the subsemigroup lattice Sub(S),
//! and the transversal construction turning a lattice into a complex.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, SubSemigroup};
use crate::set::ElementSet;

/// Hard cap on lattice size; keeps the exhaustive order/bound checks cheap.
pub const LATTICE_CAP: usize = 512;
/// Default cap on |Sub(S)| in [`sub_lattice`].
pub const SUB_LATTICE_CAP: usize = 100_000;
/// Vertex cap for [`transversal_complex`] (2^k face table).
pub const TRANSVERSAL_CAP: usize = 20;

/// A finite lattice: full ≤ relation plus join/meet tables, all validated on
/// construction (partial order axioms, least/greatest bounds, bottom, top).
#[derive(Clone)]
pub struct FiniteLattice {
    size: usize,
    words: usize,
    up: Vec<u64>,
    join: Vec<u16>,
    meet: Vec<u16>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Build from a ≤ predicate. Fails if the order axioms do not hold or
    /// some pair lacks a least upper or greatest lower bound.
    pub fn from_leq(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if size == 0 {
            return Err(Error::contract("lattice must be nonempty"));
        }
        if size > LATTICE_CAP {
            return Err(Error::SizeLimit {
                what: "lattice size",
                limit: LATTICE_CAP,
                actual: size,
            });
        }
        let words = size.div_ceil(64);
        let mut up = vec![0u64; size * words];
        let mut down = vec![0u64; size * words];
        for a in 0..size {
            for b in 0..size {
                if leq(a, b) {
                    up[a * words + b / 64] |= 1 << (b % 64);
                    down[b * words + a / 64] |= 1 << (a % 64);
                }
            }
        }
        let row = |rows: &Vec<u64>, a: usize| rows[a * words..(a + 1) * words].to_vec();
        let subset = |x: &[u64], y: &[u64]| x.iter().zip(y).all(|(a, b)| a & !b == 0);
        for a in 0..size {
            if !leq(a, a) {
                return Err(Error::contract(format!("order not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && leq(a, b) && leq(b, a) {
                    return Err(Error::contract(format!(
                        "order not antisymmetric at ({a},{b})"
                    )));
                }
                if leq(a, b) && !subset(&row(&up, b), &row(&up, a)) {
                    return Err(Error::contract(format!(
                        "order not transitive through ({a},{b})"
                    )));
                }
            }
        }
        let full_row: Vec<u64> = {
            let mut r = vec![0u64; words];
            for i in 0..size {
                r[i / 64] |= 1 << (i % 64);
            }
            r
        };
        let bottom = (0..size)
            .find(|&x| row(&up, x) == full_row)
            .ok_or_else(|| Error::contract("no bottom element"))?;
        let top = (0..size)
            .find(|&x| row(&down, x) == full_row)
            .ok_or_else(|| Error::contract("no top element"))?;
        let mut join = vec![0u16; size * size];
        let mut meet = vec![0u16; size * size];
        let mut common = vec![0u64; words];
        for a in 0..size {
            for b in a..size {
                for w in 0..words {
                    common[w] = up[a * words + w] & up[b * words + w];
                }
                let j = iter_bits(&common)
                    .find(|&u| subset(&common, &row(&up, u)))
                    .ok_or_else(|| Error::contract(format!("no join for ({a},{b})")))?;
                join[a * size + b] = j as u16;
                join[b * size + a] = j as u16;
                for w in 0..words {
                    common[w] = down[a * words + w] & down[b * words + w];
                }
                let m = iter_bits(&common)
                    .find(|&u| subset(&common, &row(&down, u)))
                    .ok_or_else(|| Error::contract(format!("no meet for ({a},{b})")))?;
                meet[a * size + b] = m as u16;
                meet[b * size + a] = m as u16;
            }
        }
        Ok(FiniteLattice {
            size,
            words,
            up,
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Elements covered by x (maximal strictly below x), ascending.
    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        (0..self.size)
            .filter(|&y| {
                y != x
                    && self.le(y, x)
                    && !(0..self.size).any(|z| z != x && z != y && self.le(y, z) && self.le(z, x))
            })
            .collect()
    }

    /// Elements covering x, ascending.
    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        (0..self.size)
            .filter(|&y| {
                y != x
                    && self.le(x, y)
                    && !(0..self.size).any(|z| z != x && z != y && self.le(x, z) && self.le(z, y))
            })
            .collect()
    }

    /// Strictly join irreducible elements: exactly one lower cover.
    pub fn sji(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.lower_covers(x).len() == 1)
            .collect()
    }

    /// All bottom-to-top maximal chains (as id lists), DFS order.
    pub fn maximal_chains(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.size > 1000 {
            return Err(Error::SizeLimit {
                what: "maximal_chains size",
                limit: 1000,
                actual: self.size,
            });
        }
        let covers: Vec<Vec<usize>> = (0..self.size).map(|x| self.upper_covers(x)).collect();
        let mut out = Vec::new();
        let mut chain = vec![self.bottom];
        self.chain_dfs(&covers, &mut chain, &mut out, cap)?;
        Ok(out)
    }

    fn chain_dfs(
        &self,
        covers: &[Vec<usize>],
        chain: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        let x = *chain.last().unwrap();
        if x == self.top {
            if out.len() == cap {
                return Err(Error::SizeLimit {
                    what: "maximal chain count",
                    limit: cap,
                    actual: cap + 1,
                });
            }
            out.push(chain.clone());
            return Ok(());
        }
        for &y in &covers[x] {
            chain.push(y);
            self.chain_dfs(covers, chain, out, cap)?;
            chain.pop();
        }
        Ok(())
    }

    /// Cover relation as a DOT digraph (edges point upward).
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let name = |x: usize| match labels {
            Some(ls) => ls[x].clone(),
            None => format!("e{x}"),
        };
        let mut out = String::from("digraph lattice {\n");
        for x in 0..self.size {
            for y in self.upper_covers(x) {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", name(x), name(y)));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                None
            } else {
                let i = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + i)
            }
        })
    })
}

/// A lattice together with a generating map ι from a vertex set A, such that
/// every element is a join of generator images (∨∅ = bottom).
#[derive(Clone)]
pub struct GeneratedLattice {
    lattice: FiniteLattice,
    vertex_labels: Vec<String>,
    iota: Vec<usize>,
}

impl GeneratedLattice {
    pub fn new(
        lattice: FiniteLattice,
        vertex_labels: Vec<String>,
        iota: Vec<usize>,
    ) -> Result<Self> {
        if vertex_labels.len() != iota.len() {
            return Err(Error::contract("one label per vertex required"));
        }
        if iota.iter().any(|&x| x >= lattice.size()) {
            return Err(Error::contract("iota maps outside the lattice"));
        }
        // every element must be reachable as a join of generator images
        let mut reachable = vec![false; lattice.size()];
        reachable[lattice.bottom()] = true;
        let mut frontier = vec![lattice.bottom()];
        while let Some(x) = frontier.pop() {
            for &g in &iota {
                let j = lattice.join(x, g);
                if !reachable[j] {
                    reachable[j] = true;
                    frontier.push(j);
                }
            }
        }
        if reachable.iter().any(|r| !r) {
            return Err(Error::contract(
                "lattice is not ∨-generated by the vertex images",
            ));
        }
        Ok(GeneratedLattice {
            lattice,
            vertex_labels,
            iota,
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn vertex_count(&self) -> usize {
        self.iota.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn iota(&self, v: usize) -> usize {
        self.iota[v]
    }
}

/// Sub(S) as a ∨-generated lattice: all subsemigroups (including ∅) ordered
/// by inclusion, with ι(s) = s⁺. Ids follow the canonical (size, bits) order.
pub struct SubLattice {
    pub generated: GeneratedLattice,
    /// Subsemigroup carried by each lattice id.
    pub subsemigroups: Vec<SubSemigroup>,
}

pub fn sub_lattice(s: &FiniteSemigroup, cap: usize) -> Result<SubLattice> {
    if s.size() > TRANSVERSAL_CAP {
        return Err(Error::SizeLimit {
            what: "sub_lattice semigroup size",
            limit: TRANSVERSAL_CAP,
            actual: s.size(),
        });
    }
    let mut subs: Vec<ElementSet> = Vec::new();
    for bits in 0..1u128 << s.size() {
        let x = ElementSet::from_bits(s.size(), bits);
        if s.is_closed(&x) {
            subs.push(x);
            if subs.len() > cap {
                return Err(Error::SizeLimit {
                    what: "|Sub(S)|",
                    limit: cap,
                    actual: subs.len(),
                });
            }
        }
    }
    subs.sort();
    let lattice = FiniteLattice::from_leq(subs.len(), |a, b| subs[a].is_subset_of(&subs[b]))?;
    let id_of = |set: &ElementSet| subs.binary_search(set).expect("closed set is interned");
    let iota: Vec<usize> = (0..s.size())
        .map(|e| id_of(s.generate(&ElementSet::singleton(s.size(), e)).set()))
        .collect();
    let labels: Vec<String> = (0..s.size()).map(|e| s.name(e).to_string()).collect();
    debug_assert_eq!(subs[lattice.bottom()], ElementSet::new(s.size()));
    debug_assert_eq!(subs[lattice.top()], s.full_set());
    // join in Sub(S) is generate of the union; spot check against the LUB tables
    debug_assert!((0..subs.len().min(40)).all(|a| (0..subs.len().min(40))
        .all(|b| { subs[lattice.join(a, b)] == s.generate(&subs[a].union(&subs[b])).into_set() })));
    let generated = GeneratedLattice::new(lattice, labels, iota)?;
    let subsemigroups = subs.into_iter().map(SubSemigroup).collect();
    Ok(SubLattice {
        generated,
        subsemigroups,
    })
}

/// The complex H(L,ι) of a ∨-generated lattice: X is a face iff some
/// enumeration of X has strictly increasing joins, equivalently X = ∅ or some
/// x ∈ X satisfies ι(x) ≰ ∨ι(X∖{x}) with X∖{x} a face.
pub fn transversal_complex(g: &GeneratedLattice) -> Result<SimplicialComplex> {
    let k = g.vertex_count();
    if k > TRANSVERSAL_CAP {
        return Err(Error::SizeLimit {
            what: "transversal vertex count",
            limit: TRANSVERSAL_CAP,
            actual: k,
        });
    }
    let l = g.lattice();
    let full = 1usize << k;
    let mut joinimg = vec![0u16; full];
    let mut face = vec![false; full];
    joinimg[0] = l.bottom() as u16;
    face[0] = true;
    for m in 1..full {
        let low = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        joinimg[m] = l.join(joinimg[rest] as usize, g.iota(low)) as u16;
        let mut bits = m;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let without = m & !(1 << x);
            if face[without] && !l.le(g.iota(x), joinimg[without] as usize) {
                face[m] = true;
                break;
            }
        }
    }
    let masks = (0..full as u32).filter(|&m| face[m as usize]);
    SimplicialComplex::from_faces(k, masks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::brandt;

    fn boolean_lattice(k: usize) -> FiniteLattice {
        FiniteLattice::from_leq(1 << k, |a, b| a & !b == 0).unwrap()
    }

    #[test]
    fn boolean_lattice_structure() {
        let l = boolean_lattice(3);
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 7);
        assert_eq!(l.join(0b001, 0b010), 0b011);
        assert_eq!(l.meet(0b011, 0b101), 0b001);
        assert_eq!(l.sji(), vec![1, 2, 4]);
    }

    #[test]
    fn chain_counts() {
        let two_chain = FiniteLattice::from_leq(2, |a, b| a <= b).unwrap();
        assert_eq!(two_chain.maximal_chains(10).unwrap(), vec![vec![0, 1]]);

        let square = boolean_lattice(2);
        assert_eq!(square.maximal_chains(10).unwrap().len(), 2);
        assert_eq!(boolean_lattice(3).maximal_chains(100).unwrap().len(), 6);
        assert!(boolean_lattice(3).maximal_chains(3).is_err());
    }

    #[test]
    fn chain_sji_on_chain() {
        let chain = FiniteLattice::from_leq(4, |a, b| a <= b).unwrap();
        assert_eq!(chain.sji(), vec![1, 2, 3]);
    }

    #[test]
    fn rejects_non_lattice() {
        // two incomparable atoms with two incomparable tops: no join of atoms
        let leq = [
            [true, true, true, true, true],
            [false, true, false, true, true],
            [false, false, true, true, true],
            [false, false, false, true, false],
            [false, false, false, false, true],
        ];
        assert!(FiniteLattice::from_leq(5, |a, b| leq[a][b]).is_err());
    }

    #[test]
    fn sub_lattice_b2() {
        let s = brandt(2).unwrap();
        let sl = sub_lattice(&s, SUB_LATTICE_CAP).unwrap();
        assert_eq!(sl.generated.lattice().size(), 16);
        let l = sl.generated.lattice();
        assert!(sl.subsemigroups[l.bottom()].is_empty());
        assert_eq!(sl.subsemigroups[l.top()].len(), 5);
        // purity of H(B(2)) seen through chains: all maximal chains have 6 nodes
        for chain in l.maximal_chains(10_000).unwrap() {
            assert_eq!(chain.len(), 6);
        }
    }

    #[test]
    fn sub_lattice_b3_count() {
        let s = brandt(3).unwrap();
        let sl = sub_lattice(&s, SUB_LATTICE_CAP).unwrap();
        assert_eq!(sl.generated.lattice().size(), 175);
    }

    #[test]
    fn sji_of_sub_lattice_are_cyclic() {
        for n in [2usize, 3] {
            let s = brandt(n).unwrap();
            let sl = sub_lattice(&s, SUB_LATTICE_CAP).unwrap();
            let l = sl.generated.lattice();
            let sji: Vec<_> = l
                .sji()
                .into_iter()
                .map(|id| *sl.subsemigroups[id].set())
                .collect();
            let (cyc, _) = s.cyclic_subsemigroups();
            // s⁺ for s = 0 is {0}, which is also ∅⁺-adjacent; sji excludes nothing here:
            let mut cyc_sets: Vec<_> = cyc.iter().map(|c| *c.set()).collect();
            cyc_sets.sort();
            let mut sji_sorted = sji.clone();
            sji_sorted.sort();
            assert_eq!(sji_sorted, cyc_sets);
        }
    }

    #[test]
    fn transversal_of_sub_lattice_b2_is_everything() {
        let s = brandt(2).unwrap();
        let sl = sub_lattice(&s, SUB_LATTICE_CAP).unwrap();
        let h = transversal_complex(&sl.generated).unwrap();
        assert_eq!(h.facets().to_vec(), vec![(1u32 << s.size()) - 1]);
    }

    #[test]
    fn three_chain_two_atoms() {
        let chain = FiniteLattice::from_leq(3, |a, b| a <= b).unwrap();
        let g = GeneratedLattice::new(chain, vec!["a".into(), "b".into()], vec![1, 2]).unwrap();
        let h = transversal_complex(&g).unwrap();
        assert!(h.contains(0b11));
    }

    #[test]
    fn generated_lattice_rejects_non_generating() {
        let square = boolean_lattice(2);
        // a single atom does not generate the square
        assert!(GeneratedLattice::new(square, vec!["a".into()], vec![1]).is_err());
    }

    #[test]
    fn dot_export_lists_cover_edges() {
        let l = boolean_lattice(2);
        let dot = l.to_dot(None);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), 4);
    }
}
