//! Simplicial complexes on the vertex set `[m] = {1, …, m}`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::exactla::Matrix;
use crate::field::Field;
use crate::graded::{DeformationRetract, GradedComplex};

pub const MAX_VERTICES: usize = 20;

/// A subset of `[m]` as a bitmask; vertex `i` is bit `i − 1`.
///
/// Ordering is by size, then lexicographic on the sorted vertex list. This is
/// the basis order of every cochain group and strand in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(m: usize) -> VertexSet {
        if m >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << m) - 1)
        }
    }

    pub fn singleton(v: u32) -> VertexSet {
        debug_assert!((1..=32).contains(&v));
        VertexSet(1 << (v - 1))
    }

    pub fn from_vertices(vs: &[u32]) -> VertexSet {
        vs.iter().fold(VertexSet::EMPTY, |acc, &v| acc.with(v))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=32).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn with(self, v: u32) -> VertexSet {
        VertexSet(self.0 | 1 << (v - 1))
    }

    pub fn without(self, v: u32) -> VertexSet {
        VertexSet(self.0 & !(1 << (v - 1)))
    }

    pub fn union(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & o.0)
    }

    pub fn minus(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: VertexSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: VertexSet) -> bool {
        self.0 & o.0 == 0
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            Some(b + 1)
        })
    }

    pub fn vertices(self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Number of elements of `self` smaller than `v`.
    pub fn rank_of(self, v: u32) -> usize {
        (self.0 & ((1u32 << (v - 1)) - 1)).count_ones() as usize
    }

    /// All subsets, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(VertexSet(cur))
        })
    }

    /// Subsets in face order (size, then lexicographic).
    pub fn subsets_ordered(self) -> Vec<VertexSet> {
        let mut v: Vec<_> = self.subsets().collect();
        v.sort();
        v
    }

    /// Lexicographic comparison of the sorted vertex lists.
    pub fn lex_cmp(self, o: VertexSet) -> Ordering {
        self.vertices().cmp(&o.vertices())
    }
}

impl Ord for VertexSet {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| {
            let x = self.0 ^ o.0;
            if x == 0 {
                Ordering::Equal
            } else if self.0 & (x & x.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Number of pairs `(i, j) ∈ I × J` with `i > j`.
pub fn epsilon(i: VertexSet, j: VertexSet) -> usize {
    i.iter().map(|v| j.rank_of(v)).sum()
}

/// A downward-closed family of subsets of `[m]`. The void complex (no faces
/// at all) is distinct from `{∅}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    /// Membership bitset over all `2^m` subsets.
    member: Vec<u64>,
    /// Faces in face order.
    faces: Vec<VertexSet>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return write!(f, "Void(m={})", self.m);
        }
        write!(f, "K(m={}, facets={:?})", self.m, self.facets())
    }
}

fn check_m(m: usize) -> Result<(), Error> {
    if m > MAX_VERTICES {
        return Err(Error::TooManyVertices(m));
    }
    Ok(())
}

fn parse_face(m: usize, vs: &[u32]) -> Result<VertexSet, Error> {
    for w in vs.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::UnsortedFace(vs.to_vec()));
        }
    }
    for &v in vs {
        if v < 1 || v as usize > m {
            return Err(Error::VertexOutOfRange { vertex: v, m });
        }
    }
    Ok(VertexSet::from_vertices(vs))
}

impl SimplicialComplex {
    fn from_member(m: usize, member: Vec<u64>) -> Self {
        let mut faces: Vec<VertexSet> = (0..1u32 << m)
            .filter(|&b| member[(b >> 6) as usize] >> (b & 63) & 1 == 1)
            .map(VertexSet)
            .collect();
        faces.sort();
        SimplicialComplex { m, member, faces }
    }

    fn empty_member(m: usize) -> Vec<u64> {
        vec![0u64; (1usize << m).div_ceil(64)]
    }

    pub fn void(m: usize) -> Result<Self, Error> {
        check_m(m)?;
        Ok(SimplicialComplex { m, member: Self::empty_member(m), faces: Vec::new() })
    }

    /// Downward closure of the given faces.
    pub fn from_face_sets(m: usize, generators: &[VertexSet]) -> Result<Self, Error> {
        check_m(m)?;
        let mut member = Self::empty_member(m);
        let full = VertexSet::full(m);
        for g in generators {
            if !g.is_subset(full) {
                let v = g.minus(full).iter().next().unwrap_or(0);
                return Err(Error::VertexOutOfRange { vertex: v, m });
            }
            for s in g.subsets() {
                member[(s.0 >> 6) as usize] |= 1 << (s.0 & 63);
            }
        }
        Ok(Self::from_member(m, member))
    }

    /// Downward closure of a facet list. An empty list gives the void complex;
    /// `[[]]` gives `{∅}`.
    pub fn from_facets(m: usize, facets: &[Vec<u32>]) -> Result<Self, Error> {
        check_m(m)?;
        let sets = facets.iter().map(|f| parse_face(m, f)).collect::<Result<Vec<_>, _>>()?;
        Self::from_face_sets(m, &sets)
    }

    /// All subsets of `[m]` containing none of the given non-faces.
    pub fn from_nonfaces(m: usize, nonfaces: &[Vec<u32>]) -> Result<Self, Error> {
        check_m(m)?;
        let sets = nonfaces.iter().map(|f| parse_face(m, f)).collect::<Result<Vec<_>, _>>()?;
        let mut member = Self::empty_member(m);
        for b in 0..1u32 << m {
            if sets.iter().all(|n| !n.is_subset(VertexSet(b))) {
                member[(b >> 6) as usize] |= 1 << (b & 63);
            }
        }
        Ok(Self::from_member(m, member))
    }

    /// The full simplex on `[m]`.
    pub fn simplex(m: usize) -> Result<Self, Error> {
        Self::from_face_sets(m, &[VertexSet::full(m)])
    }

    /// The boundary of the simplex on `[m]`.
    pub fn simplex_boundary(m: usize) -> Result<Self, Error> {
        let full: Vec<u32> = (1..=m as u32).collect();
        Self::from_nonfaces(m, &[full])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        if !s.is_subset(VertexSet::full(self.m)) {
            return false;
        }
        self.member[(s.0 >> 6) as usize] >> (s.0 & 63) & 1 == 1
    }

    pub fn faces(&self) -> &[VertexSet] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Faces of a given size (`dim + 1`), in face order.
    pub fn faces_of_size(&self, k: usize) -> impl Iterator<Item = VertexSet> + '_ {
        self.faces.iter().copied().filter(move |f| f.len() == k)
    }

    /// Union of all faces.
    pub fn vertex_set(&self) -> VertexSet {
        self.faces.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f))
    }

    /// `−1` for `{∅}`, `None` for the void complex.
    pub fn dim(&self) -> Option<i32> {
        self.faces.last().map(|f| f.len() as i32 - 1)
    }

    /// Maximal faces in face order.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        self.faces
            .iter()
            .filter(|&&f| {
                VertexSet::full(self.m)
                    .minus(f)
                    .iter()
                    .all(|v| !self.contains(f.with(v)))
            })
            .map(|f| f.vertices())
            .collect()
    }

    /// `f_{-1}, f_0, …`: number of faces of each size.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in &self.faces {
            let k = f.len();
            if out.len() <= k {
                out.resize(k + 1, 0);
            }
            out[k] += 1;
        }
        out
    }

    fn filtered(&self, keep: impl Fn(VertexSet) -> bool) -> Self {
        let mut member = Self::empty_member(self.m);
        let faces: Vec<VertexSet> = self.faces.iter().copied().filter(|&s| keep(s)).collect();
        for s in &faces {
            member[(s.0 >> 6) as usize] |= 1 << (s.0 & 63);
        }
        SimplicialComplex { m: self.m, member, faces }
    }

    /// `K_U = {σ ∈ K : σ ⊆ U}`, keeping the original labels.
    pub fn full_subcomplex(&self, u: VertexSet) -> Self {
        self.filtered(|s| s.is_subset(u))
    }

    /// `K∖F = {σ ∈ K : F ⊄ σ}`; by convention `K∖∅` is void.
    pub fn face_deletion(&self, f: VertexSet) -> Self {
        if f.is_empty() {
            return self.filtered(|_| false);
        }
        self.filtered(|s| !f.is_subset(s))
    }

    pub fn union(&self, o: &SimplicialComplex) -> Self {
        let m = self.m.max(o.m);
        let mut gens: Vec<VertexSet> = self.faces.clone();
        gens.extend_from_slice(&o.faces);
        Self::from_face_sets(m, &gens).expect("union of valid complexes")
    }

    pub fn is_subcomplex_of(&self, o: &SimplicialComplex) -> bool {
        self.faces.iter().all(|&s| o.contains(s))
    }

    /// `K ∗ L = {σ ∪ τ}`; the vertex sets must be disjoint.
    pub fn join(&self, o: &SimplicialComplex) -> Result<Self, Error> {
        let overlap = self.vertex_set().intersection(o.vertex_set());
        if !overlap.is_empty() {
            return Err(Error::OverlappingLabels(overlap.vertices()));
        }
        let m = self.m.max(o.m);
        let mut gens = Vec::with_capacity(self.faces.len() * o.faces.len());
        for &a in &self.faces {
            for &b in &o.faces {
                gens.push(a.union(b));
            }
        }
        Self::from_face_sets(m, &gens)
    }

    /// Minimal non-faces in lexicographic order of their vertex lists.
    pub fn minimal_nonfaces(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = (0..1u32 << self.m)
            .map(VertexSet)
            .filter(|&s| !self.contains(s) && s.iter().all(|v| self.contains(s.without(v))))
            .collect();
        out.sort_by(|a, b| a.lex_cmp(*b));
        out
    }

    /// Pairs of vertices of `K` not joined by an edge.
    pub fn missing_edges(&self) -> Vec<VertexSet> {
        let verts: Vec<u32> = (1..=self.m as u32)
            .filter(|&v| self.contains(VertexSet::singleton(v)))
            .collect();
        let mut out = Vec::new();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                let e = VertexSet::from_vertices(&[i, j]);
                if !self.contains(e) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// All minimal non-faces have exactly two elements.
    pub fn is_flag(&self) -> bool {
        self.minimal_nonfaces().iter().all(|n| n.len() == 2)
    }

    /// Reduced cochain complex with face-order bases.
    pub fn reduced_cochain_complex<F: Field>(&self, f: &F) -> CochainComplex<F::Elem> {
        let top = self.faces.last().map_or(0, |s| s.len() + 1);
        let mut bases: Vec<Vec<VertexSet>> = vec![Vec::new(); top];
        for &s in &self.faces {
            bases[s.len()].push(s);
        }
        let mut d = Vec::with_capacity(top);
        for k in 0..top {
            let src = &bases[k];
            let tgt: &[VertexSet] = if k + 1 < top { &bases[k + 1] } else { &[] };
            let mut m = Matrix::zeros(tgt.len(), src.len(), f);
            for (col, &s) in src.iter().enumerate() {
                for v in VertexSet::full(self.m).minus(s).iter() {
                    let t = s.with(v);
                    if !self.contains(t) {
                        continue;
                    }
                    let row = tgt.binary_search(&t).expect("face present in basis");
                    m.set(row, col, f.sign(s.rank_of(v) % 2 == 1));
                }
            }
            d.push(m);
        }
        CochainComplex { bases, complex: GradedComplex::new(-1, d) }
    }

    /// Reduced cohomology with deterministic representatives.
    pub fn reduced_cohomology<F: Field>(&self, f: &F) -> ReducedCohomology<F::Elem> {
        let cc = self.reduced_cochain_complex(f);
        let retract = DeformationRetract::build(&cc.complex, f);
        ReducedCohomology { cochains: cc, retract }
    }
}

/// Reduced simplicial cochains. Block `k` is degree `k − 1` and has basis
/// `bases[k]`, the faces with `k` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex<E> {
    pub bases: Vec<Vec<VertexSet>>,
    pub complex: GradedComplex<E>,
}

impl<E: Clone> CochainComplex<E> {
    pub fn differential(&self, q: i32) -> Option<&Matrix<E>> {
        self.complex.block(q).map(|k| &self.complex.d[k])
    }

    pub fn basis(&self, q: i32) -> &[VertexSet] {
        self.complex.block(q).map_or(&[], |k| &self.bases[k])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCohomology<E> {
    pub cochains: CochainComplex<E>,
    pub retract: DeformationRetract<E>,
}

impl<E: Clone> ReducedCohomology<E> {
    pub fn dim(&self, q: i32) -> usize {
        self.cochains.complex.block(q).map_or(0, |k| self.retract.sigma[k].cols())
    }

    /// `(q, dim H̃^q)` for every degree present.
    pub fn dims(&self) -> Vec<(i32, usize)> {
        (0..self.cochains.complex.len())
            .map(|k| (k as i32 - 1, self.retract.sigma[k].cols()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.retract.sigma.iter().map(|s| s.cols()).sum()
    }

    /// Representative cocycles of degree `q`, as columns.
    pub fn representatives(&self, q: i32) -> Option<&Matrix<E>> {
        self.cochains.complex.block(q).map(|k| &self.retract.sigma[k])
    }
}

/// Map on reduced cohomology induced by restricting cochains from `K` to a
/// subcomplex `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap<E> {
    pub degree: i32,
    /// dim H̃^q(L) × dim H̃^q(K)
    pub matrix: Matrix<E>,
    pub is_zero: bool,
}

/// Restriction `H̃^*(K) → H̃^*(L)` for `L ⊆ K`, in each side's deterministic
/// representative basis.
pub fn induced_map_on_cohomology<F: Field>(
    l: &SimplicialComplex,
    k: &SimplicialComplex,
    f: &F,
) -> Result<Vec<InducedMap<F::Elem>>, Error> {
    if let Some(bad) = l.faces().iter().find(|&&s| !k.contains(s)) {
        return Err(Error::NotASubcomplex(bad.vertices()));
    }
    let hk = k.reduced_cohomology(f);
    let hl = l.reduced_cohomology(f);
    Ok(restriction_maps(&hk, &hl, f))
}

/// Restriction between precomputed cohomologies (no subcomplex check).
pub fn restriction_maps<F: Field>(
    hk: &ReducedCohomology<F::Elem>,
    hl: &ReducedCohomology<F::Elem>,
    f: &F,
) -> Vec<InducedMap<F::Elem>> {
    let mut out = Vec::new();
    for (kb, basis) in hk.cochains.bases.iter().enumerate() {
        let q = kb as i32 - 1;
        let reps = &hk.retract.sigma[kb];
        let lbasis = hl.cochains.basis(q);
        let matrix = match hl.cochains.complex.block(q) {
            Some(lb) if reps.cols() > 0 && hl.retract.sigma[lb].cols() > 0 => {
                let mut restrict = Matrix::zeros(lbasis.len(), basis.len(), f);
                for (row, s) in lbasis.iter().enumerate() {
                    let col = basis.binary_search(s).expect("L face lies in K");
                    restrict.set(row, col, f.one());
                }
                hl.retract.pi[lb].mul(&restrict.mul(reps, f), f)
            }
            _ => Matrix::zeros(hl.dim(q), reps.cols(), f),
        };
        let is_zero = matrix.is_zero(f);
        out.push(InducedMap { degree: q, matrix, is_zero });
    }
    out
}
