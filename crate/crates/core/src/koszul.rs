//! The reduced Koszul complex `R(K)` split into squarefree strands, with the
//! exterior action `ι_i = ∂/∂u_i` and the signed Hochster isomorphism onto
//! reduced simplicial cochains of full subcomplexes.
//!
//! A basis element of `Strand(U)` is `v_I u_J` with `I ∈ K`, `I ⊔ J = U`; it
//! is recorded by `I` alone. Block `k` holds the elements with `|I| = k`, so
//! block `k` sits in cochain degree `p = k − 1`, homological degree
//! `|U| − k` and total degree `|U| + k`. Within a block the order is
//! lexicographic on `I`, which is exactly the face order of `C̃^*(K_U)`.

use rayon::prelude::*;

use crate::exactla::Matrix;
use crate::field::Field;
use crate::graded::{DeformationRetract, GradedComplex};
use crate::simplicial::{epsilon, SimplicialComplex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand<E> {
    pub u: VertexSet,
    /// `basis[k]`: the sets `I` with `|I| = k`, in face order.
    pub basis: Vec<Vec<VertexSet>>,
    pub complex: GradedComplex<E>,
    /// `iota[n]` is `ι_i` for the `n`-th vertex `i` of `U`; `iota[n][k]` maps
    /// block `k` of this strand to block `k` of `Strand(U∖i)`.
    pub iota: Vec<(u32, Vec<Matrix<E>>)>,
}

impl<E: Clone> Strand<E> {
    pub fn dim(&self) -> usize {
        self.basis.iter().map(|b| b.len()).sum()
    }

    pub fn blocks(&self) -> usize {
        self.basis.len()
    }

    pub fn block_dim(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, |b| b.len())
    }

    pub fn iota(&self, i: u32) -> Option<&[Matrix<E>]> {
        self.iota.iter().find(|(v, _)| *v == i).map(|(_, m)| m.as_slice())
    }

    /// Homological degree of block `k`.
    pub fn homological_degree(&self, k: usize) -> usize {
        self.u.len() - k
    }

    /// Human-readable monomial `v_I u_J`.
    pub fn monomial_name(&self, i: VertexSet) -> String {
        monomial_name(i, self.u.minus(i))
    }
}

pub fn monomial_name(i: VertexSet, j: VertexSet) -> String {
    let mut s = String::new();
    for v in i.iter() {
        s.push_str(&format!("v{v}"));
    }
    for v in j.iter() {
        s.push_str(&format!("u{v}"));
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn faces_by_size(k: &SimplicialComplex, u: VertexSet) -> Vec<Vec<VertexSet>> {
    let mut basis: Vec<Vec<VertexSet>> = Vec::new();
    for &s in k.faces() {
        if !s.is_subset(u) {
            continue;
        }
        if basis.len() <= s.len() {
            basis.resize(s.len() + 1, Vec::new());
        }
        basis[s.len()].push(s);
    }
    basis
}

/// `Strand(U)` with its Leibniz differential
/// `d(v_I u_J) = Σ_ℓ (−1)^{ℓ−1} v_{I∪j_ℓ} u_{J∖j_ℓ}` and the operators `ι_i`.
pub fn build_strand<F: Field>(k: &SimplicialComplex, u: VertexSet, f: &F) -> Strand<F::Elem> {
    let basis = faces_by_size(k, u);
    let nblocks = basis.len();
    let mut d = Vec::with_capacity(nblocks);
    for b in 0..nblocks {
        let src = &basis[b];
        let tgt: &[VertexSet] = if b + 1 < nblocks { &basis[b + 1] } else { &[] };
        let mut m = Matrix::zeros(tgt.len(), src.len(), f);
        for (col, &i) in src.iter().enumerate() {
            let j = u.minus(i);
            for v in j.iter() {
                let t = i.with(v);
                if let Ok(row) = tgt.binary_search(&t) {
                    m.set(row, col, f.sign(j.rank_of(v) % 2 == 1));
                }
            }
        }
        d.push(m);
    }
    let complex = if nblocks == 0 { GradedComplex::zero() } else { GradedComplex::new(-1, d) };
    let mut iota = Vec::with_capacity(u.len());
    for v in u.iter() {
        let target = u.without(v);
        let mut per_block = Vec::with_capacity(nblocks);
        for src in &basis {
            let tgt: Vec<VertexSet> = src.iter().copied().filter(|s| s.is_subset(target)).collect();
            let mut m = Matrix::zeros(tgt.len(), src.len(), f);
            for (col, &i) in src.iter().enumerate() {
                if i.contains(v) {
                    continue;
                }
                let j = u.minus(i);
                let row = tgt.binary_search(&i).expect("face stays in K_{U∖i}");
                m.set(row, col, f.sign(j.rank_of(v) % 2 == 1));
            }
            per_block.push(m);
        }
        iota.push((v, per_block));
    }
    Strand { u, basis, complex, iota }
}

/// Every strand of `R(K)`, indexed by the bitmask of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulComplex<E> {
    pub m: usize,
    pub strands: Vec<Strand<E>>,
}

impl<E: Clone + Send + Sync> KoszulComplex<E> {
    pub fn build<F: Field<Elem = E>>(k: &SimplicialComplex, f: &F) -> Self {
        let m = k.m();
        let strands = (0..1u32 << m)
            .into_par_iter()
            .map(|b| build_strand(k, VertexSet(b), f))
            .collect();
        KoszulComplex { m, strands }
    }

    pub fn strand(&self, u: VertexSet) -> &Strand<E> {
        &self.strands[u.bits() as usize]
    }
}

/// `h(v_I u_J) = (−1)^{ε(I,U)} I^∨` as a sign per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochsterMap<E> {
    pub u: VertexSet,
    /// `signs[k][n]` for the `n`-th element of block `k`.
    pub signs: Vec<Vec<E>>,
}

impl<E: Clone> HochsterMap<E> {
    pub fn new<F: Field<Elem = E>>(strand: &Strand<E>, f: &F) -> Self {
        let signs = strand
            .basis
            .iter()
            .map(|b| b.iter().map(|&i| f.sign(epsilon(i, strand.u) % 2 == 1)).collect())
            .collect();
        HochsterMap { u: strand.u, signs }
    }

    /// The diagonal sign matrix of block `k`.
    pub fn block<F: Field<Elem = E>>(&self, k: usize, f: &F) -> Matrix<E> {
        let n = self.signs[k].len();
        let mut m = Matrix::zeros(n, n, f);
        for (i, s) in self.signs[k].iter().enumerate() {
            m.set(i, i, s.clone());
        }
        m
    }

    /// Multiplies the rows of a block-`k` matrix by the signs.
    pub fn apply_rows<F: Field<Elem = E>>(&self, k: usize, m: &Matrix<E>, f: &F) -> Matrix<E> {
        self.block(k, f).mul(m, f)
    }

    /// Multiplies the columns of a matrix with block-`k` columns by the signs.
    pub fn apply_cols<F: Field<Elem = E>>(&self, k: usize, m: &Matrix<E>, f: &F) -> Matrix<E> {
        m.mul(&self.block(k, f), f)
    }
}

/// The Hochster map of a strand, checked to be a chain isomorphism onto
/// `C̃^*(K_U)` (degree `i ↦ |U| − i − 1`). A failure is a bug, so it panics.
pub fn hochster_iso<F: Field>(
    strand: &Strand<F::Elem>,
    k: &SimplicialComplex,
    f: &F,
) -> HochsterMap<F::Elem> {
    let h = HochsterMap::new(strand, f);
    let cc = k.full_subcomplex(strand.u).reduced_cochain_complex(f);
    assert_eq!(cc.bases, strand.basis, "strand basis differs from cochain basis of K_U");
    for b in 0..strand.blocks() {
        let lhs = if b + 1 < strand.blocks() {
            h.apply_rows(b + 1, &strand.complex.d[b], f)
        } else {
            strand.complex.d[b].clone()
        };
        let rhs = h.apply_cols(b, &cc.complex.d[b], f);
        assert_eq!(lhs, rhs, "Hochster map is not a chain map on strand {:?} block {b}", strand.u);
    }
    h
}

/// Cohomology of every strand with chosen representatives, on both the
/// Koszul side and (through the Hochster signs) the simplicial side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochsterBasis<E> {
    pub m: usize,
    /// Per strand, indexed by bitmask.
    pub retracts: Vec<DeformationRetract<E>>,
    pub maps: Vec<HochsterMap<E>>,
}

impl<E: Clone + Send + Sync> HochsterBasis<E> {
    pub fn new<F: Field<Elem = E>>(kc: &KoszulComplex<E>, retracts: Vec<DeformationRetract<E>>, f: &F) -> Self {
        let maps = kc.strands.iter().map(|s| HochsterMap::new(s, f)).collect();
        HochsterBasis { m: kc.m, retracts, maps }
    }

    pub fn retract(&self, u: VertexSet) -> &DeformationRetract<E> {
        &self.retracts[u.bits() as usize]
    }

    /// `dim H̃^p(K_U)`.
    pub fn dim(&self, u: VertexSet, p: i32) -> usize {
        let k = p + 1;
        let r = self.retract(u);
        if k < 0 || k as usize >= r.sigma.len() {
            0
        } else {
            r.sigma[k as usize].cols()
        }
    }

    /// Dimensions of `H^n(Z_K)` for `n = 0..=2m`, summed over strands.
    pub fn total_dims(&self) -> Vec<usize> {
        let mut out = vec![0; 2 * self.m + 1];
        for (b, r) in self.retracts.iter().enumerate() {
            let u = VertexSet(b as u32);
            for (k, s) in r.sigma.iter().enumerate() {
                out[u.len() + k] += s.cols();
            }
        }
        out
    }

    /// Simplicial representatives of `H̃^p(K_U)` (columns of `C̃^p(K_U)`).
    pub fn simplicial_reps<F: Field<Elem = E>>(&self, u: VertexSet, p: i32, f: &F) -> Matrix<E> {
        let k = (p + 1) as usize;
        self.maps[u.bits() as usize].apply_rows(k, &self.retract(u).sigma[k], f)
    }

    /// Coordinates of simplicial cocycles in the representative basis.
    pub fn simplicial_projection<F: Field<Elem = E>>(&self, u: VertexSet, p: i32, f: &F) -> Matrix<E> {
        let k = (p + 1) as usize;
        self.maps[u.bits() as usize].apply_cols(k, &self.retract(u).pi[k], f)
    }
}

/// Block of `ι_j` on cohomology, `H̃^p(K_U) → H̃^p(K_{U∖j})`, computed as the
/// restriction map times `(−1)^{ε(j,U) + p + 1}` and checked against `ι_j`
/// transported through the representatives.
pub fn primary_operation_matrix<F: Field>(
    kc: &KoszulComplex<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    u: VertexSet,
    j: u32,
    p: i32,
    f: &F,
) -> Matrix<F::Elem> {
    assert!(u.contains(j), "vertex {j} not in {u:?}");
    let target = u.without(j);
    let (ns, nt) = (hb.dim(u, p), hb.dim(target, p));
    if ns == 0 || nt == 0 {
        return Matrix::zeros(nt, ns, f);
    }
    let kb = (p + 1) as usize;
    let src_basis = &kc.strand(u).basis[kb];
    let tgt_basis = &kc.strand(target).basis[kb];
    let mut restrict = Matrix::zeros(tgt_basis.len(), src_basis.len(), f);
    for (row, s) in tgt_basis.iter().enumerate() {
        let col = src_basis.binary_search(s).expect("face of K_{U∖j} lies in K_U");
        restrict.set(row, col, f.one());
    }
    let sign = f.sign((epsilon(VertexSet::singleton(j), u) as i32 + p + 1) % 2 != 0);
    let via_restriction = hb
        .simplicial_projection(target, p, f)
        .mul(&restrict, f)
        .mul(&hb.simplicial_reps(u, p, f), f)
        .scale(&sign, f);
    let iota = &kc.strand(u).iota(j).expect("j in U")[kb];
    let via_iota = hb.retract(target).pi[kb].mul(iota, f).mul(&hb.retract(u).sigma[kb], f);
    assert_eq!(via_restriction, via_iota, "restriction and ι_{j} disagree on {u:?}");
    via_iota
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn vs(v: &[u32]) -> VertexSet {
        VertexSet::from_vertices(v)
    }

    #[test]
    fn simplex_strand() {
        let q = Rationals;
        let k = SimplicialComplex::simplex(2).unwrap();
        let s = build_strand(&k, vs(&[1, 2]), &q);
        assert_eq!(s.basis, vec![vec![VertexSet::EMPTY], vec![vs(&[1]), vs(&[2])], vec![vs(&[1, 2])]]);
        // d(u1u2) = v1u2 − v2u1
        assert_eq!(s.complex.d[0], Matrix::from_i64(&[&[1], &[-1]], &q));
        // d(v1u2) = d(v2u1) = v1v2
        assert_eq!(s.complex.d[1], Matrix::from_i64(&[&[1, 1]], &q));
        assert!(s.complex.is_square_zero(&q));
    }

    #[test]
    fn boundary_strand() {
        let q = Rationals;
        let k = SimplicialComplex::simplex_boundary(2).unwrap();
        let s = build_strand(&k, vs(&[1, 2]), &q);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.complex.d[1].rows(), 0);
        let e = build_strand(&k, VertexSet::EMPTY, &q);
        assert_eq!(e.dim(), 1);
        assert!(e.complex.d[0].is_zero(&q));
    }

    #[test]
    fn hochster_signs() {
        let q = Rationals;
        let k = SimplicialComplex::simplex(2).unwrap();
        let s = build_strand(&k, vs(&[1, 2]), &q);
        let h = hochster_iso(&s, &k, &q);
        assert_eq!(h.signs[0], vec![q.one()]);
        assert_eq!(h.signs[1], vec![q.one(), q.from_i64(-1)]);
        assert_eq!(h.signs[2], vec![q.from_i64(-1)]);
    }
}
