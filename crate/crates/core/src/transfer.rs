//! Homological perturbation: deformation retractions of the strands and the
//! induced operations `∂_I` on cohomology, plus the same machinery for an
//! arbitrary finite dg module over an exterior algebra.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactla::{self, Matrix};
use crate::field::Field;
use crate::graded::{DeformationRetract, GradedComplex};
use crate::koszul::{HochsterBasis, KoszulComplex};
use crate::simplicial::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RetractionChoice {
    /// Pivots taken in the given basis order.
    Standard,
    /// Pivots taken after reversing every block's basis.
    Reversed,
}

/// One deformation retraction per strand, indexed by the bitmask of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction<E> {
    pub choice: RetractionChoice,
    pub strands: Vec<DeformationRetract<E>>,
}

/// Builds and checks a retraction of every strand. Panics if an axiom fails,
/// since that can only be a bug.
pub fn build_retraction<F: Field>(
    kc: &KoszulComplex<F::Elem>,
    choice: RetractionChoice,
    f: &F,
) -> Retraction<F::Elem> {
    let strands = kc
        .strands
        .par_iter()
        .map(|s| {
            let r = match choice {
                RetractionChoice::Standard => DeformationRetract::build(&s.complex, f),
                RetractionChoice::Reversed => DeformationRetract::build_reversed(&s.complex, f),
            };
            if let Err(e) = r.check(&s.complex, f) {
                panic!("retraction axiom failed on strand {:?}: {e}", s.u);
            }
            r
        })
        .collect();
    Retraction { choice, strands }
}

/// The block of `∂_I` with source `H̃^p(K_U)` and target
/// `H̃^{p−|I|+1}(K_{U∖I})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpBlock<E> {
    pub source: VertexSet,
    /// Cochain degree `p` of the source.
    pub degree: i32,
    pub matrix: Matrix<E>,
}

impl<E> OpBlock<E> {
    pub fn target_degree(&self, index: VertexSet) -> i32 {
        self.degree - index.len() as i32 + 1
    }
}

/// `∂_I` for every nonempty squarefree `I`, stored blockwise. Only blocks with
/// nonzero source and target cohomology are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTable<E> {
    pub m: usize,
    pub ops: BTreeMap<VertexSet, Vec<OpBlock<E>>>,
}

impl<E: Clone> OperationTable<E> {
    pub fn blocks(&self, index: VertexSet) -> &[OpBlock<E>] {
        self.ops.get(&index).map_or(&[], |v| v.as_slice())
    }

    pub fn block(&self, index: VertexSet, source: VertexSet, degree: i32) -> Option<&OpBlock<E>> {
        self.blocks(index).iter().find(|b| b.source == source && b.degree == degree)
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, index: VertexSet, f: &F) -> bool {
        self.blocks(index).iter().all(|b| b.matrix.is_zero(f))
    }

    /// Indices with a nonzero block, in table order.
    pub fn nonzero_indices<F: Field<Elem = E>>(&self, f: &F) -> Vec<VertexSet> {
        self.ops.keys().copied().filter(|&i| !self.is_zero(i, f)).collect()
    }
}

/// Evaluates the perturbation series `π ρ (h ρ)^n σ` with `ρ = Σ v_i ⊗ ι_i`,
/// grouped by the squarefree monomial: `z_W = Σ_{i∈W} ι_i y_{W∖i}`,
/// `y_W = h z_W`, `∂_W = π z_W`, starting from `y_∅ = σ`.
pub fn operation_table<F: Field>(
    kc: &KoszulComplex<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    f: &F,
) -> OperationTable<F::Elem> {
    let per_source: Vec<Vec<(VertexSet, OpBlock<F::Elem>)>> = (0..kc.strands.len())
        .into_par_iter()
        .map(|b| source_operations(kc, hb, VertexSet(b as u32), f))
        .collect();
    let mut ops: BTreeMap<VertexSet, Vec<OpBlock<F::Elem>>> = BTreeMap::new();
    for list in per_source {
        for (index, block) in list {
            ops.entry(index).or_default().push(block);
        }
    }
    for blocks in ops.values_mut() {
        blocks.sort_by_key(|b| (b.source, b.degree));
    }
    OperationTable { m: kc.m, ops }
}

fn source_operations<F: Field>(
    kc: &KoszulComplex<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    u: VertexSet,
    f: &F,
) -> Vec<(VertexSet, OpBlock<F::Elem>)> {
    let mut out = Vec::new();
    let retract = hb.retract(u);
    let mut subsets: Vec<VertexSet> = u.subsets().filter(|w| !w.is_empty()).collect();
    subsets.sort();
    for (kb, sigma) in retract.sigma.iter().enumerate() {
        if sigma.cols() == 0 {
            continue;
        }
        let p = kb as i32 - 1;
        let mut y: HashMap<VertexSet, Matrix<F::Elem>> = HashMap::new();
        y.insert(VertexSet::EMPTY, sigma.clone());
        for &w in &subsets {
            if w.len() > kb + 1 {
                break;
            }
            let target = u.minus(w);
            let tb = kb + 1 - w.len();
            let mut z: Option<Matrix<F::Elem>> = None;
            for i in w.iter() {
                let Some(prev) = y.get(&w.without(i)) else { continue };
                let from = u.minus(w.without(i));
                let iota = &kc.strand(from).iota(i).expect("i in U∖(W∖i)")[tb];
                let term = iota.mul(prev, f);
                z = Some(match z {
                    Some(acc) => acc.add(&term, f),
                    None => term,
                });
            }
            let tr = hb.retract(target);
            let nh = tr.sigma.get(tb).map_or(0, |s| s.cols());
            let z = z.filter(|z| !z.is_zero(f));
            if nh > 0 {
                let matrix = match &z {
                    Some(z) => tr.pi[tb].mul(z, f),
                    None => Matrix::zeros(nh, sigma.cols(), f),
                };
                out.push((w, OpBlock { source: u, degree: p, matrix }));
            }
            if let Some(z) = z {
                if tb >= 1 {
                    let next = tr.h[tb].mul(&z, f);
                    if !next.is_zero(f) {
                        y.insert(w, next);
                    }
                }
            }
        }
    }
    out
}

/// Outcome of a cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

impl CheckStatus {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckStatus::Fail(_))
    }
}

/// Recomputes `∂_I` from cocycle representatives by the recursion
/// `δ_T = Σ_{t∈T} ι_t d^{-1} δ_{T∖t}`, `δ_{t} = ι_t α`, choosing preimages with
/// [`exactla::solve`] instead of the homotopy, and compares classes exactly.
/// Requires every `∂_J` with `∅ ≠ J ⊊ I` to vanish; otherwise `Skipped`.
pub fn massey_delta_check<F: Field>(
    kc: &KoszulComplex<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    table: &OperationTable<F::Elem>,
    index: VertexSet,
    f: &F,
) -> CheckStatus {
    if index.is_empty() {
        return CheckStatus::Skipped("empty index".into());
    }
    for j in index.subsets() {
        if !j.is_empty() && j != index && !table.is_zero(j, f) {
            return CheckStatus::Skipped(format!("lower operation {j:?} is nonzero"));
        }
    }
    let mut proper: Vec<VertexSet> = index.subsets().filter(|t| !t.is_empty()).collect();
    proper.sort();
    for (b, retract) in hb.retracts.iter().enumerate() {
        let u = VertexSet(b as u32);
        if !index.is_subset(u) {
            continue;
        }
        for (kb, sigma) in retract.sigma.iter().enumerate() {
            if sigma.cols() == 0 || index.len() > kb + 1 {
                continue;
            }
            let p = kb as i32 - 1;
            // cocycle representatives δ_T, one column per class
            let mut reps: HashMap<VertexSet, Matrix<F::Elem>> = HashMap::new();
            for &t in &proper {
                let tb = kb + 1 - t.len();
                let mut acc: Option<Matrix<F::Elem>> = None;
                for i in t.iter() {
                    let rest = t.without(i);
                    let from = u.minus(rest);
                    let iota = &kc.strand(from).iota(i).expect("i in U")[tb];
                    let pre = if rest.is_empty() {
                        sigma.clone()
                    } else {
                        let prev = &reps[&rest];
                        let d = &kc.strand(from).complex.d[tb];
                        match exactla::solve_columns(d, prev, f) {
                            Some(x) => x,
                            None => {
                                return CheckStatus::Fail(format!(
                                    "representative of δ_{rest:?} on {u:?} is not exact"
                                ))
                            }
                        }
                    };
                    let term = iota.mul(&pre, f);
                    acc = Some(match acc {
                        Some(a) => a.add(&term, f),
                        None => term,
                    });
                }
                reps.insert(t, acc.expect("nonempty T"));
            }
            let target = u.minus(index);
            let tb = kb + 1 - index.len();
            let tr = hb.retract(target);
            let nh = tr.sigma[tb].cols();
            let expected = table.block(index, u, p).map(|b| b.matrix.clone());
            if nh == 0 {
                if expected.is_some() {
                    return CheckStatus::Fail(format!("table has a block into zero cohomology at {u:?}"));
                }
                continue;
            }
            let rep = &reps[&index];
            let boundaries = if tb == 0 {
                Matrix::zeros(tr.sigma[tb].rows(), 0, f)
            } else {
                kc.strand(target).complex.d[tb - 1].clone()
            };
            let lhs = tr.sigma[tb].hstack(&boundaries);
            let Some(coords) = exactla::solve_columns(&lhs, rep, f) else {
                return CheckStatus::Fail(format!("δ_{index:?} on {u:?} is not a cocycle"));
            };
            let classes = coords.select_rows(&(0..nh).collect::<Vec<_>>());
            let expected = expected.unwrap_or_else(|| Matrix::zeros(nh, sigma.cols(), f));
            if classes != expected {
                return CheckStatus::Fail(format!(
                    "recursive δ_{index:?} differs from the table on source {u:?}, degree {p}"
                ));
            }
        }
    }
    CheckStatus::Pass
}

// ---------------------------------------------------------------------------
// Generic dg modules over Λ(ι_1, …, ι_r)

/// A finite graded vector space with a degree `+1` differential and `r`
/// anticommuting square-zero degree `−1` operators that anticommute with `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLambdaModule<E> {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    pub d: Matrix<E>,
    pub iota: Vec<Matrix<E>>,
    pub operator_names: Vec<String>,
}

impl<E: Clone> DgLambdaModule<E> {
    pub fn new<F: Field<Elem = E>>(
        labels: Vec<String>,
        degrees: Vec<i32>,
        d: Matrix<E>,
        iota: Vec<Matrix<E>>,
        operator_names: Vec<String>,
        f: &F,
    ) -> Result<Self, Error> {
        let n = degrees.len();
        let bad = |s: String| Err(Error::InvalidModule(s));
        if labels.len() != n {
            return bad(format!("{} labels for {n} basis elements", labels.len()));
        }
        if operator_names.len() != iota.len() {
            return bad("operator names do not match operators".into());
        }
        if d.rows() != n || d.cols() != n {
            return bad("differential has the wrong shape".into());
        }
        let span = degrees.iter().max().zip(degrees.iter().min()).map_or(0, |(a, b)| a - b);
        if span > 4096 {
            return bad(format!("grading spans {span} degrees"));
        }
        let check_degree = |m: &Matrix<E>, shift: i32, name: &str| -> Result<(), Error> {
            for r in 0..n {
                for c in 0..n {
                    if !f.is_zero(m.get(r, c)) && degrees[r] != degrees[c] + shift {
                        return Err(Error::InvalidModule(format!(
                            "{name} entry ({r},{c}) is not of degree {shift:+}"
                        )));
                    }
                }
            }
            Ok(())
        };
        check_degree(&d, 1, "d")?;
        if !d.mul(&d, f).is_zero(f) {
            return bad("d^2 != 0".into());
        }
        for (a, ia) in iota.iter().enumerate() {
            if ia.rows() != n || ia.cols() != n {
                return bad(format!("operator {a} has the wrong shape"));
            }
            check_degree(ia, -1, &operator_names[a])?;
            if !ia.mul(&d, f).add(&d.mul(ia, f), f).is_zero(f) {
                return bad(format!("{} does not anticommute with d", operator_names[a]));
            }
            for ib in &iota[a..] {
                if !ia.mul(ib, f).add(&ib.mul(ia, f), f).is_zero(f) {
                    return bad(format!("{} fails the exterior relations", operator_names[a]));
                }
            }
        }
        Ok(DgLambdaModule { labels, degrees, d, iota, operator_names })
    }

    /// Basis indices grouped by degree, lowest degree first.
    fn blocks(&self) -> (i32, Vec<Vec<usize>>) {
        let (Some(&lo), Some(&hi)) = (self.degrees.iter().min(), self.degrees.iter().max()) else {
            return (0, Vec::new());
        };
        let mut blocks = vec![Vec::new(); (hi - lo + 1) as usize];
        for (i, &deg) in self.degrees.iter().enumerate() {
            blocks[(deg - lo) as usize].push(i);
        }
        (lo, blocks)
    }
}

/// `∂_M` for a multiset `M` of operator indices, from degree `degree` to
/// `degree − 2|M| + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericOpBlock<E> {
    pub index: Vec<usize>,
    pub degree: i32,
    pub matrix: Matrix<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericOperations<E> {
    pub start: i32,
    /// Per degree: cohomology representatives (columns over the whole basis).
    pub representatives: Vec<Matrix<E>>,
    pub blocks: Vec<GenericOpBlock<E>>,
}

impl<E: Clone> GenericOperations<E> {
    pub fn cohomology_dims(&self) -> Vec<(i32, usize)> {
        self.representatives
            .iter()
            .enumerate()
            .map(|(k, r)| (self.start + k as i32, r.cols()))
            .collect()
    }

    pub fn block(&self, index: &[usize], degree: i32) -> Option<&GenericOpBlock<E>> {
        self.blocks.iter().find(|b| b.index == index && b.degree == degree)
    }
}

/// Sorted multisets of size `len` over `0..r`.
fn multisets(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(r: usize, len: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for a in from..r {
            cur.push(a);
            rec(r, len, a, cur, out);
            cur.pop();
        }
    }
    rec(r, len, 0, &mut cur, &mut out);
    out
}

/// The perturbation series over `k[v_1, …, v_r]` with repeated indices.
pub fn generic_operations<F: Field>(
    n: &DgLambdaModule<F::Elem>,
    choice: RetractionChoice,
    f: &F,
) -> GenericOperations<F::Elem> {
    let (start, blocks) = n.blocks();
    let nb = blocks.len();
    let sub = |m: &Matrix<F::Elem>, to: usize, from: usize| -> Matrix<F::Elem> {
        m.select_rows(&blocks[to]).select_cols(&blocks[from])
    };
    let d: Vec<Matrix<F::Elem>> = (0..nb)
        .map(|k| {
            if k + 1 < nb {
                sub(&n.d, k + 1, k)
            } else {
                Matrix::zeros(0, blocks[k].len(), f)
            }
        })
        .collect();
    let complex = GradedComplex::new(start, d);
    let retract = match choice {
        RetractionChoice::Standard => DeformationRetract::build(&complex, f),
        RetractionChoice::Reversed => DeformationRetract::build_reversed(&complex, f),
    };
    if let Err(e) = retract.check(&complex, f) {
        panic!("retraction axiom failed: {e}");
    }
    // ι_a restricted to block k → k−1
    let iota: Vec<Vec<Option<Matrix<F::Elem>>>> = n
        .iota
        .iter()
        .map(|ia| (0..nb).map(|k| (k >= 1).then(|| sub(ia, k - 1, k))).collect())
        .collect();
    let r = n.iota.len();
    let mut out = Vec::new();
    for (kb, sigma) in retract.sigma.iter().enumerate() {
        if sigma.cols() == 0 {
            continue;
        }
        let degree = start + kb as i32;
        let mut y: HashMap<Vec<usize>, Matrix<F::Elem>> = HashMap::new();
        y.insert(Vec::new(), sigma.clone());
        let mut len = 1;
        // z at length L sits in block kb − 2L + 1
        while kb + 1 >= 2 * len && !y.is_empty() {
            let tb = kb + 1 - 2 * len;
            let mut next = HashMap::new();
            for ms in multisets(r, len) {
                let mut z: Option<Matrix<F::Elem>> = None;
                let mut last = None;
                for (pos, &a) in ms.iter().enumerate() {
                    if last == Some(a) {
                        continue;
                    }
                    last = Some(a);
                    let mut rest = ms.clone();
                    rest.remove(pos);
                    let Some(prev) = y.get(&rest) else { continue };
                    let Some(ia) = &iota[a][tb + 1] else { continue };
                    let term = ia.mul(prev, f);
                    z = Some(match z {
                        Some(acc) => acc.add(&term, f),
                        None => term,
                    });
                }
                let nh = retract.sigma[tb].cols();
                let z = z.filter(|z| !z.is_zero(f));
                if nh > 0 {
                    let matrix = match &z {
                        Some(z) => retract.pi[tb].mul(z, f),
                        None => Matrix::zeros(nh, sigma.cols(), f),
                    };
                    out.push(GenericOpBlock { index: ms.clone(), degree, matrix });
                }
                if let Some(z) = z {
                    if tb >= 1 {
                        let h = retract.h[tb].mul(&z, f);
                        if !h.is_zero(f) {
                            next.insert(ms, h);
                        }
                    }
                }
            }
            y = next;
            len += 1;
        }
    }
    out.sort_by(|a, b| (a.index.len(), &a.index, a.degree).cmp(&(b.index.len(), &b.index, b.degree)));
    let total = n.degrees.len();
    let representatives = retract
        .sigma
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut full = Matrix::zeros(total, s.cols(), f);
            for (pos, &i) in blocks[k].iter().enumerate() {
                for c in 0..s.cols() {
                    full.set(i, c, s.get(pos, c).clone());
                }
            }
            full
        })
        .collect();
    GenericOperations { start, representatives, blocks: out }
}

impl<E: Clone + Send + Sync> KoszulComplex<E> {
    /// Flattens all strands into one dg module with the `m` operators `ι_i`.
    /// Basis elements are ordered by strand bitmask, then strand basis order;
    /// the degree is the total degree `|U| + |I|`.
    pub fn to_dg_module<F: Field<Elem = E>>(&self, f: &F) -> DgLambdaModule<E> {
        let mut offsets = Vec::with_capacity(self.strands.len());
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for s in &self.strands {
            offsets.push(labels.len());
            for b in &s.basis {
                for &i in b {
                    labels.push(s.monomial_name(i));
                    degrees.push((s.u.len() + i.len()) as i32);
                }
            }
        }
        let n = labels.len();
        let block_offset = |s: &crate::koszul::Strand<E>, k: usize| -> usize {
            offsets[s.u.bits() as usize] + s.basis[..k].iter().map(|b| b.len()).sum::<usize>()
        };
        let mut d = Matrix::zeros(n, n, f);
        let mut iota = vec![Matrix::zeros(n, n, f); self.m];
        for s in &self.strands {
            for k in 0..s.blocks() {
                let src = block_offset(s, k);
                if k + 1 < s.blocks() {
                    let tgt = block_offset(s, k + 1);
                    let m = &s.complex.d[k];
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            d.set(tgt + r, src + c, m.get(r, c).clone());
                        }
                    }
                }
                for (v, per_block) in &s.iota {
                    let t = self.strand(s.u.without(*v));
                    let tgt = block_offset(t, k);
                    let m = &per_block[k];
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            iota[*v as usize - 1].set(tgt + r, src + c, m.get(r, c).clone());
                        }
                    }
                }
            }
        }
        let names = (1..=self.m).map(|i| format!("v{i}")).collect();
        DgLambdaModule::new(labels, degrees, d, iota, names, f).expect("R(K) is a dg Λ-module")
    }
}

/// Matrix of a dg module file: triplets `[row, col, value]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgModuleFile {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    pub d: Vec<(usize, usize, i64)>,
    pub operators: Vec<OperatorFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub name: String,
    pub entries: Vec<(usize, usize, i64)>,
}

impl DgModuleFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_module<F: Field>(&self, f: &F) -> Result<DgLambdaModule<F::Elem>, Error> {
        let n = self.degrees.len();
        let build = |trips: &[(usize, usize, i64)]| -> Result<Matrix<F::Elem>, Error> {
            let mut m = Matrix::zeros(n, n, f);
            for &(r, c, v) in trips {
                if r >= n || c >= n {
                    return Err(Error::InvalidModule(format!("entry ({r},{c}) out of range")));
                }
                let cur = m.get(r, c).clone();
                m.set(r, c, f.add(&cur, &f.from_i64(v)));
            }
            Ok(m)
        };
        let d = build(&self.d)?;
        let iota = self.operators.iter().map(|o| build(&o.entries)).collect::<Result<Vec<_>, _>>()?;
        let names = self.operators.iter().map(|o| o.name.clone()).collect();
        DgLambdaModule::new(self.labels.clone(), self.degrees.clone(), d, iota, names, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::simplicial::SimplicialComplex;

    #[test]
    fn boundary_of_interval_operation() {
        let q = Rationals;
        let k = SimplicialComplex::simplex_boundary(2).unwrap();
        let kc = KoszulComplex::build(&k, &q);
        let r = build_retraction(&kc, RetractionChoice::Standard, &q);
        let hb = HochsterBasis::new(&kc, r.strands, &q);
        let table = operation_table(&kc, &hb, &q);
        let u = VertexSet::from_vertices(&[1, 2]);
        // the class basis of H̃^0(K_12) is [v1u2]
        let sigma = &hb.retract(u).sigma[1];
        assert_eq!(sigma.column(0), vec![q.one(), q.zero()]);
        let b = table.block(u, u, 0).unwrap();
        assert_eq!(b.matrix, Matrix::from_i64(&[&[1]], &q));
        assert_eq!(table.nonzero_indices(&q), vec![u]);
    }

    #[test]
    fn multisets_enumerate() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(multisets(3, 0), vec![Vec::<usize>::new()]);
    }
}
