//! Generic simplicial-complex machinery: the brute-force face oracle for
//! subsemigroup complexes, facets, purity, the exchange property, flats and
//! closures, boolean representability, simplification, and shellability.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::semigroup::FiniteSemigroup;
use crate::set::ElementSet;

/// Vertex cap for explicit complexes (faces as u32 masks).
pub const VERTEX_CAP: usize = 24;
/// Semigroup-size cap for the dense [`all_faces`] table.
pub const ALL_FACES_CAP: usize = 20;
/// Vertex cap for flat enumeration (3^v subset walk).
pub const FLATS_CAP: usize = 20;
/// Facet cap for the shellability search.
pub const SHELLABILITY_CAP: usize = 8;

/// An explicit finite simplicial complex, stored by its facets.
///
/// Invariants: faces are downward closed, ∅ is a face, every vertex is a
/// face. Facet masks are kept in canonical (popcount, value) order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<u32>,
}

fn canonical_sort(masks: &mut [u32]) {
    masks.sort_by_key(|&m| (m.count_ones(), m));
}

impl SimplicialComplex {
    /// Build from the maximal faces. They must form an antichain covering
    /// every vertex.
    pub fn from_facets(vertex_count: usize, mut facets: Vec<u32>) -> Result<Self> {
        if vertex_count > VERTEX_CAP {
            return Err(Error::SizeLimit {
                what: "complex vertices",
                limit: VERTEX_CAP,
                actual: vertex_count,
            });
        }
        let full = if vertex_count == 32 {
            u32::MAX
        } else {
            (1u32 << vertex_count) - 1
        };
        if facets.is_empty() {
            facets.push(0);
        }
        let mut covered = 0u32;
        for &f in &facets {
            if f & !full != 0 {
                return Err(Error::contract("facet mask outside the vertex range"));
            }
            covered |= f;
        }
        if covered != full {
            return Err(Error::contract("every vertex must be a face"));
        }
        canonical_sort(&mut facets);
        facets.dedup();
        for (i, &a) in facets.iter().enumerate() {
            for &b in &facets[i + 1..] {
                if a & !b == 0 {
                    return Err(Error::contract("facet list is not an antichain"));
                }
            }
        }
        Ok(SimplicialComplex {
            vertex_count,
            facets,
        })
    }

    /// Build from a full face family, validating downward closure and
    /// singleton membership.
    pub fn from_faces(vertex_count: usize, faces: impl IntoIterator<Item = u32>) -> Result<Self> {
        if vertex_count > VERTEX_CAP {
            return Err(Error::SizeLimit {
                what: "complex vertices",
                limit: VERTEX_CAP,
                actual: vertex_count,
            });
        }
        let mut masks: Vec<u32> = faces.into_iter().collect();
        canonical_sort(&mut masks);
        masks.dedup();
        let member = |m: u32| {
            masks
                .binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x))
                .is_ok()
        };
        if !member(0) {
            return Err(Error::contract("the empty set must be a face"));
        }
        for v in 0..vertex_count {
            if !member(1 << v) {
                return Err(Error::contract(format!("vertex {v} is not a face")));
            }
        }
        for &m in &masks {
            let mut bits = m;
            while bits != 0 {
                let x = bits.trailing_zeros();
                bits &= bits - 1;
                if !member(m & !(1 << x)) {
                    return Err(Error::contract("face family is not downward closed"));
                }
            }
        }
        let facets: Vec<u32> = masks
            .iter()
            .copied()
            .filter(|&m| (0..vertex_count as u32).all(|v| m >> v & 1 == 1 || !member(m | 1 << v)))
            .collect();
        Self::from_facets(vertex_count, facets)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[u32] {
        &self.facets
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.facets.iter().any(|&f| mask & !f == 0)
    }

    /// Max face cardinality minus one; −1 for the empty-set-only complex.
    pub fn dimension(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.count_ones() as isize)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn is_pure(&self) -> bool {
        self.facets
            .iter()
            .all(|f| f.count_ones() == self.facets[0].count_ones())
    }

    /// All faces in canonical (popcount, value) order, walked down from the
    /// facets.
    pub fn faces(&self) -> Vec<u32> {
        let mut seen: std::collections::HashSet<u32> = self.facets.iter().copied().collect();
        let mut stack: Vec<u32> = self.facets.clone();
        while let Some(m) = stack.pop() {
            let mut bits = m;
            while bits != 0 {
                let x = bits.trailing_zeros();
                bits &= bits - 1;
                let down = m & !(1 << x);
                if seen.insert(down) {
                    stack.push(down);
                }
            }
        }
        let mut out: Vec<u32> = seen.into_iter().collect();
        canonical_sort(&mut out);
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Exchange-property check over all face pairs with |I| = |J| + 1.
    /// Returns a violating (I, J) pair, or None for a matroid.
    pub fn matroid_counterexample(&self) -> Option<(u32, u32)> {
        let faces = self.faces();
        let max_size = self.facets.last().map_or(0, |f| f.count_ones());
        let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); max_size as usize + 1];
        for &m in &faces {
            by_size[m.count_ones() as usize].push(m);
        }
        for k in 0..max_size as usize {
            for &j in &by_size[k] {
                for &i in &by_size[k + 1] {
                    let candidates = i & !j;
                    let mut bits = candidates;
                    let mut ok = false;
                    while bits != 0 {
                        let p = bits.trailing_zeros();
                        bits &= bits - 1;
                        if self.contains(j | 1 << p) {
                            ok = true;
                            break;
                        }
                    }
                    if !ok {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    pub fn is_matroid(&self) -> bool {
        self.matroid_counterexample().is_none()
    }

    /// All flats: X such that every face inside X extends by every outside
    /// vertex to a face.
    pub fn flats(&self) -> Result<FlatLattice> {
        let v = self.vertex_count;
        if v > FLATS_CAP {
            return Err(Error::SizeLimit {
                what: "flats vertex count",
                limit: FLATS_CAP,
                actual: v,
            });
        }
        let full = (1u32 << v) - 1;
        let mut flats = Vec::new();
        'next: for x in 0..=full {
            let outside = full & !x;
            // iterate subsets of x, largest first; the empty subset matters too
            let mut sub = x;
            loop {
                if self.contains(sub) {
                    let mut bits = outside;
                    while bits != 0 {
                        let p = bits.trailing_zeros();
                        bits &= bits - 1;
                        if !self.contains(sub | 1 << p) {
                            continue 'next;
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & x;
            }
            flats.push(x);
        }
        FlatLattice::new(v, flats)
    }

    /// Boolean representability: every face admits an enumeration with
    /// strictly increasing closures.
    pub fn is_boolean_representable(&self) -> Result<bool> {
        let fl = self.flats()?;
        Ok(self.is_boolean_representable_with(&fl))
    }

    pub fn is_boolean_representable_with(&self, fl: &FlatLattice) -> bool {
        let mut verdict: HashMap<u32, bool> = HashMap::new();
        let mut closure: HashMap<u32, u32> = HashMap::new();
        self.faces()
            .iter()
            .all(|&m| self.increasing_chain(fl, m, &mut verdict, &mut closure))
    }

    fn increasing_chain(
        &self,
        fl: &FlatLattice,
        m: u32,
        verdict: &mut HashMap<u32, bool>,
        closure: &mut HashMap<u32, u32>,
    ) -> bool {
        if m.count_ones() <= 1 {
            return true;
        }
        if let Some(&v) = verdict.get(&m) {
            return v;
        }
        let cl_m = *closure.entry(m).or_insert_with(|| fl.closure(m));
        let mut bits = m;
        let mut ok = false;
        while bits != 0 {
            let x = bits.trailing_zeros();
            bits &= bits - 1;
            let rest = m & !(1 << x);
            let cl_rest = match closure.get(&rest) {
                Some(&c) => c,
                None => {
                    let c = fl.closure(rest);
                    closure.insert(rest, c);
                    c
                }
            };
            if cl_rest != cl_m && self.increasing_chain(fl, rest, verdict, closure) {
                ok = true;
                break;
            }
        }
        verdict.insert(m, ok);
        ok
    }

    /// Quotient by η (equal singleton closures). Returns the quotient and the
    /// η-classes as sorted vertex lists. Requires boolean representability.
    pub fn simplify(&self) -> Result<(SimplicialComplex, Vec<Vec<usize>>)> {
        let fl = self.flats()?;
        if !self.is_boolean_representable_with(&fl) {
            return Err(Error::unsupported(
                "simplify requires a boolean representable complex",
            ));
        }
        let closures: Vec<u32> = (0..self.vertex_count).map(|a| fl.closure(1 << a)).collect();
        let mut class_of = vec![usize::MAX; self.vertex_count];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.vertex_count {
            match (0..a).find(|&b| closures[b] == closures[a]) {
                Some(b) => {
                    let c = class_of[b];
                    class_of[a] = c;
                    classes[c].push(a);
                }
                None => {
                    class_of[a] = classes.len();
                    classes.push(vec![a]);
                }
            }
        }
        let image_faces: Vec<u32> = self
            .faces()
            .into_iter()
            .map(|m| {
                let mut img = 0u32;
                let mut bits = m;
                while bits != 0 {
                    let x = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    img |= 1 << class_of[x];
                }
                img
            })
            .collect();
        let quotient = SimplicialComplex::from_faces(classes.len(), image_faces)?;
        Ok((quotient, classes))
    }

    /// H restricted to W, relabeled onto 0..|W| (ascending original ids).
    /// Returns the restriction and the new→old vertex map.
    pub fn restriction(&self, w_mask: u32) -> Result<(SimplicialComplex, Vec<usize>)> {
        if w_mask == 0 {
            return Err(Error::contract(
                "restriction requires a nonempty vertex set",
            ));
        }
        let old_ids: Vec<usize> = (0..self.vertex_count)
            .filter(|&v| w_mask >> v & 1 == 1)
            .collect();
        let relabel = |m: u32| {
            let mut out = 0u32;
            for (new, &old) in old_ids.iter().enumerate() {
                if m >> old & 1 == 1 {
                    out |= 1 << new;
                }
            }
            out
        };
        let mut candidates: Vec<u32> = self.facets.iter().map(|&f| relabel(f & w_mask)).collect();
        canonical_sort(&mut candidates);
        candidates.dedup();
        let maximal: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|&m| !candidates.iter().any(|&o| o != m && m & !o == 0))
            .collect();
        let restricted = SimplicialComplex::from_facets(old_ids.len(), maximal)?;
        Ok((restricted, old_ids))
    }

    /// Brute-force shellability search over facet orderings.
    pub fn shellability(&self) -> Shellability {
        if self.facets.len() > SHELLABILITY_CAP {
            return Shellability::Indeterminate;
        }
        let t = self.facets.len();
        if t <= 1 {
            return Shellability::Shellable((0..t).collect());
        }
        // A facet can be appended to a chosen set iff the maximal pairwise
        // intersections with it all have exactly one vertex less, so
        // reachability over chosen-sets decides shellability.
        let full = (1usize << t) - 1;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; full + 1];
        let mut reachable = vec![false; full + 1];
        for first in 0..t {
            reachable[1 << first] = true;
            parent[1 << first] = Some((0, first));
        }
        for state in 1..=full {
            if !reachable[state] {
                continue;
            }
            for k in 0..t {
                if state >> k & 1 == 1 {
                    continue;
                }
                let next = state | 1 << k;
                if reachable[next] {
                    continue;
                }
                if self.can_append(state, k) {
                    reachable[next] = true;
                    parent[next] = Some((state, k));
                }
            }
        }
        if !reachable[full] {
            return Shellability::NotShellable;
        }
        let mut order = Vec::with_capacity(t);
        let mut state = full;
        while let Some((prev, k)) = parent[state] {
            order.push(k);
            state = prev;
            if state == 0 {
                break;
            }
        }
        order.reverse();
        Shellability::Shellable(order)
    }

    fn can_append(&self, chosen: usize, k: usize) -> bool {
        let bk = self.facets[k];
        let mut inters: Vec<u32> = (0..self.facets.len())
            .filter(|&i| chosen >> i & 1 == 1)
            .map(|i| bk & self.facets[i])
            .collect();
        inters.sort_unstable();
        inters.dedup();
        let maximal: Vec<u32> = inters
            .iter()
            .copied()
            .filter(|&m| !inters.iter().any(|&o| o != m && m & !o == 0))
            .collect();
        // (B_k, I(B_k)) must be pure of dimension |B_k| − 2
        maximal
            .iter()
            .all(|m| m.count_ones() + 1 == bk.count_ones())
    }

    pub fn to_json_string(&self) -> String {
        let facets = self.facets.iter().map(|&m| mask_to_ids(m)).collect();
        let doc = ComplexJson {
            schema: 1,
            vertices: self.vertex_count,
            facets: Some(facets),
            faces: None,
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ComplexJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("complex JSON: {e}")))?;
        if doc.schema != 1 {
            return Err(Error::parse(format!("unsupported schema {}", doc.schema)));
        }
        let to_mask = |ids: &[usize]| -> Result<u32> {
            let mut m = 0u32;
            for &v in ids {
                if v >= doc.vertices {
                    return Err(Error::parse(format!("vertex {v} out of range")));
                }
                m |= 1 << v;
            }
            Ok(m)
        };
        match (&doc.facets, &doc.faces) {
            (Some(facets), _) => {
                let masks = facets
                    .iter()
                    .map(|f| to_mask(f))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_facets(doc.vertices, masks)
            }
            (None, Some(faces)) => {
                let masks = faces
                    .iter()
                    .map(|f| to_mask(f))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_faces(doc.vertices, masks)
            }
            (None, None) => Err(Error::parse("complex JSON needs `facets` or `faces`")),
        }
    }
}

fn mask_to_ids(m: u32) -> Vec<usize> {
    (0..32).filter(|&v| m >> v & 1 == 1).collect()
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    schema: u32,
    vertices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Vec<usize>>>,
}

/// Result of the bounded shellability search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Shellability {
    /// A shelling order, as indices into `facets()`.
    Shellable(Vec<usize>),
    NotShellable,
    /// Facet count above [`SHELLABILITY_CAP`]; no verdict.
    Indeterminate,
}

/// The flats of a complex: intersection-closed, ordered by inclusion. The
/// explicit inclusion lattice is built on demand (flat families can outgrow
/// the eager-lattice cap).
#[derive(Clone)]
pub struct FlatLattice {
    vertex_count: usize,
    flats: Vec<u32>,
}

impl FlatLattice {
    fn new(vertex_count: usize, mut flats: Vec<u32>) -> Result<Self> {
        canonical_sort(&mut flats);
        let member = |list: &[u32], m: u32| {
            list.binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x))
                .is_ok()
        };
        debug_assert!(member(&flats, 0));
        debug_assert!(member(&flats, (1u32 << vertex_count) - 1));
        for (i, &a) in flats.iter().enumerate() {
            for &b in &flats[i..] {
                debug_assert!(member(&flats, a & b), "flats not intersection-closed");
            }
        }
        Ok(FlatLattice {
            vertex_count,
            flats,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn flats(&self) -> &[u32] {
        &self.flats
    }

    /// The inclusion lattice over the flats.
    pub fn lattice(&self) -> Result<FiniteLattice> {
        FiniteLattice::from_leq(self.flats.len(), |a, b| self.flats[a] & !self.flats[b] == 0)
    }

    /// Intersection of all flats containing X.
    pub fn closure(&self, x: u32) -> u32 {
        let mut out = (1u32 << self.vertex_count) - 1;
        for &f in &self.flats {
            if x & !f == 0 {
                out &= f;
            }
        }
        out
    }

    /// The flats matrix: one row per flat, entry 0 iff the vertex lies in the
    /// flat.
    pub fn matrix(&self) -> BooleanMatrix {
        let full = (1u64 << self.vertex_count) - 1;
        BooleanMatrix {
            rows: self.flats.len(),
            cols: self.vertex_count,
            row_bits: self.flats.iter().map(|&f| !(f as u64) & full).collect(),
        }
    }
}

/// A 0/1 matrix with up to 64 columns, stored as row bitmasks.
#[derive(Clone, Debug)]
pub struct BooleanMatrix {
    rows: usize,
    cols: usize,
    row_bits: Vec<u64>,
}

impl BooleanMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        assert!(cols <= 64);
        let row_bits = (0..rows)
            .map(|r| {
                (0..cols)
                    .filter(|&c| f(r, c))
                    .fold(0u64, |acc, c| acc | 1 << c)
            })
            .collect();
        BooleanMatrix {
            rows,
            cols,
            row_bits,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_bits[r] >> c & 1 == 1
    }
}

/// Column-set independence: some row/column permutation of the submatrix is
/// lower unitriangular. Peeling any column isolated by some row is complete,
/// so no backtracking is needed.
pub fn matrix_independent(m: &BooleanMatrix, x: u64) -> bool {
    debug_assert_eq!(x >> m.cols, 0, "column set outside the matrix");
    let mut live = x;
    while live != 0 {
        let isolated = m.row_bits.iter().find_map(|&row| {
            let s = row & live;
            (s.count_ones() == 1).then_some(s)
        });
        match isolated {
            Some(c) => live &= !c,
            None => return false,
        }
    }
    true
}

/// Brute-force face oracle for H(S): X is a face iff X = ∅ or some x ∈ X has
/// x ∉ ⟨X∖{x}⟩ with X∖{x} a face. Memoized per instance.
pub struct FaceOracle<'a> {
    s: &'a FiniteSemigroup,
    closures: HashMap<u32, u32>,
    verdicts: HashMap<u32, bool>,
}

impl<'a> FaceOracle<'a> {
    pub fn new(s: &'a FiniteSemigroup) -> Result<Self> {
        if s.size() > VERTEX_CAP {
            return Err(Error::SizeLimit {
                what: "oracle semigroup size",
                limit: VERTEX_CAP,
                actual: s.size(),
            });
        }
        Ok(FaceOracle {
            s,
            closures: HashMap::new(),
            verdicts: HashMap::new(),
        })
    }

    fn closure_mask(&mut self, m: u32) -> u32 {
        if let Some(&c) = self.closures.get(&m) {
            return c;
        }
        let set = ElementSet::from_bits(self.s.size(), m as u128);
        let c = self.s.generate(&set).bits() as u32;
        self.closures.insert(m, c);
        c
    }

    pub fn is_face_mask(&mut self, m: u32) -> bool {
        if m == 0 {
            return true;
        }
        if let Some(&v) = self.verdicts.get(&m) {
            return v;
        }
        let mut bits = m;
        let mut ok = false;
        while bits != 0 {
            let x = bits.trailing_zeros();
            bits &= bits - 1;
            let rest = m & !(1 << x);
            if self.closure_mask(rest) >> x & 1 == 0 && self.is_face_mask(rest) {
                ok = true;
                break;
            }
        }
        self.verdicts.insert(m, ok);
        ok
    }

    pub fn is_face(&mut self, x: &ElementSet) -> bool {
        debug_assert_eq!(x.universe(), self.s.size());
        self.is_face_mask(x.bits() as u32)
    }
}

/// One-shot oracle query; builds a fresh memo.
pub fn is_face(s: &FiniteSemigroup, x: &ElementSet) -> Result<bool> {
    Ok(FaceOracle::new(s)?.is_face(x))
}

/// True iff x is a face of H(S) that no element of S can extend.
pub fn is_facet(s: &FiniteSemigroup, x: &ElementSet) -> Result<bool> {
    let mut oracle = FaceOracle::new(s)?;
    if !oracle.is_face(x) {
        return Ok(false);
    }
    Ok((0..s.size()).all(|e| x.contains(e) || !oracle.is_face(&x.with(e))))
}

/// The full subsemigroup complex H(S) by dense dynamic programming over all
/// 2^|S| subsets (closures built incrementally, then the face recursion).
pub fn all_faces(s: &FiniteSemigroup) -> Result<SimplicialComplex> {
    let n = s.size();
    if n > ALL_FACES_CAP {
        return Err(Error::SizeLimit {
            what: "all_faces semigroup size",
            limit: ALL_FACES_CAP,
            actual: n,
        });
    }
    let full = 1usize << n;
    let mut closure = vec![0u32; full];
    for m in 1..full {
        let x = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        closure[m] = extend_closure(s, closure[rest], x);
    }
    let mut face = vec![false; full];
    face[0] = true;
    for m in 1..full {
        let mut bits = m;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = m & !(1 << x);
            if face[rest] && closure[rest] >> x & 1 == 0 {
                face[m] = true;
                break;
            }
        }
    }
    let facets: Vec<u32> = (0..full)
        .filter(|&m| face[m] && (0..n).all(|y| m >> y & 1 == 1 || !face[m | 1 << y]))
        .map(|m| m as u32)
        .collect();
    SimplicialComplex::from_facets(n, facets)
}

/// Close `closed ∪ {x}` under the product, assuming `closed` already is.
fn extend_closure(s: &FiniteSemigroup, closed: u32, x: usize) -> u32 {
    let mut cur = closed | 1 << x;
    let mut queue = vec![x];
    while let Some(e) = queue.pop() {
        let mut bits = cur;
        while bits != 0 {
            let a = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for p in [s.product(a, e), s.product(e, a)] {
                if cur >> p & 1 == 0 {
                    cur |= 1 << p;
                    queue.push(p);
                }
            }
        }
    }
    cur
}
