//! The augmented Čech double complex of the cover `{K_{J∖i} : i ∈ I∩J}` of
//! `K_J` and its spectral sequence.
//!
//! Summands are indexed by `S ⊆ I∩J` (row `q = |S| − 1`, so `S = ∅` is the
//! augmentation row). In the total complex a cochain `ω ∈ C̃^p(K_{J∖S})`
//! maps to `±δω + Vω` with the horizontal sign `+` on the augmentation row
//! and `−` elsewhere; `V` is restriction out of the augmentation row and
//! `(−1)^p č` elsewhere. With these signs the page differentials are the
//! zig-zag maps: `δx_k = V x_{k−1}` and `d_r[x_0] = [V x_{r−1}]`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::exactla::{self, Matrix};
use crate::field::Field;
use crate::koszul::HochsterBasis;
use crate::simplicial::{epsilon, CochainComplex, SimplicialComplex, VertexSet};
use crate::transfer::{CheckStatus, OperationTable};

pub struct AugmentedCech<E> {
    pub coords: VertexSet,
    pub j: VertexSet,
    /// `I ∩ J`
    pub cover: VertexSet,
    /// Subsets `S ⊆ I∩J` in face order.
    pub summands: Vec<VertexSet>,
    /// Cochains of `K_{J∖S}` per summand.
    pub cochains: Vec<CochainComplex<E>>,
    /// Lowest total degree (always −2).
    pub n_min: i32,
    /// `basis[n − n_min]`: `(summand, face)` spanning `Tot^n`.
    pub basis: Vec<Vec<(usize, VertexSet)>>,
    /// `d[n − n_min]: Tot^n → Tot^{n+1}`.
    pub d: Vec<Matrix<E>>,
    index: Vec<HashMap<(usize, VertexSet), usize>>,
}

impl<E: Clone + PartialEq> AugmentedCech<E> {
    pub fn build<F: Field<Elem = E>>(k: &SimplicialComplex, coords: VertexSet, j: VertexSet, f: &F) -> Self {
        let cover = coords.intersection(j);
        let summands = cover.subsets_ordered();
        let cochains: Vec<CochainComplex<E>> = summands
            .iter()
            .map(|&s| k.full_subcomplex(j.minus(s)).reduced_cochain_complex(f))
            .collect();
        let n_min = -2;
        let top_p = cochains.iter().map(|c| c.complex.len() as i32 - 2).max().unwrap_or(-1);
        let n_max = top_p + cover.len() as i32;
        let levels = (n_max - n_min + 2).max(1) as usize;
        let mut basis: Vec<Vec<(usize, VertexSet)>> = vec![Vec::new(); levels];
        for (si, s) in summands.iter().enumerate() {
            let q = s.len() as i32 - 1;
            for (kb, faces) in cochains[si].bases.iter().enumerate() {
                let p = kb as i32 - 1;
                let n = p + q;
                for &face in faces {
                    basis[(n - n_min) as usize].push((si, face));
                }
            }
        }
        let index: Vec<HashMap<(usize, VertexSet), usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, &key)| (key, i)).collect())
            .collect();
        let pos: HashMap<VertexSet, usize> = summands.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut d = Vec::with_capacity(levels);
        for lvl in 0..levels {
            let rows = basis.get(lvl + 1).map_or(0, |b| b.len());
            let mut mat = Matrix::zeros(rows, basis[lvl].len(), f);
            for (col, &(si, face)) in basis[lvl].iter().enumerate() {
                let s = summands[si];
                let p = face.len() as i32 - 1;
                let cc = &cochains[si];
                // horizontal
                let kb = face.len();
                if kb < cc.complex.len() {
                    let dk = &cc.complex.d[kb];
                    let src = cc.bases[kb].binary_search(&face).expect("face in basis");
                    for r in 0..dk.rows() {
                        let x = dk.get(r, src);
                        if f.is_zero(x) {
                            continue;
                        }
                        let tgt = index[lvl + 1][&(si, cc.bases[kb + 1][r])];
                        let v = if s.is_empty() { x.clone() } else { f.neg(x) };
                        mat.set(tgt, col, v);
                    }
                }
                // vertical
                for t in cover.minus(s).iter() {
                    if face.contains(t) {
                        continue;
                    }
                    let s2 = s.with(t);
                    let tgt = index[lvl + 1][&(pos[&s2], face)];
                    let v = if s.is_empty() {
                        f.one()
                    } else {
                        f.sign((p.rem_euclid(2) as usize + s2.rank_of(t)) % 2 == 1)
                    };
                    mat.set(tgt, col, v);
                }
            }
            d.push(mat);
        }
        AugmentedCech { coords, j, cover, summands, cochains, n_min, basis, d, index }
    }

    pub fn levels(&self) -> usize {
        self.basis.len()
    }

    pub fn row_of(&self, entry: (usize, VertexSet)) -> i32 {
        self.summands[entry.0].len() as i32 - 1
    }

    pub fn top_row(&self) -> i32 {
        self.cover.len() as i32 - 1
    }

    /// `D² = 0` on every level.
    pub fn is_square_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0], f).is_zero(f))
    }

    /// `δ² = 0`, `V² = 0` and `D² = 0` separately.
    pub fn check<F: Field<Elem = E>>(&self, f: &F) -> Result<(), String> {
        let (mut h, mut v) = (Vec::new(), Vec::new());
        for (lvl, d) in self.d.iter().enumerate() {
            let mut hm = d.clone();
            let mut vm = d.clone();
            for c in 0..d.cols() {
                for r in 0..d.rows() {
                    let same = self.basis[lvl][c].0 == self.basis[lvl + 1][r].0;
                    if same {
                        vm.set(r, c, f.zero());
                    } else {
                        hm.set(r, c, f.zero());
                    }
                }
            }
            h.push(hm);
            v.push(vm);
        }
        for lvl in 1..self.d.len() {
            if !h[lvl].mul(&h[lvl - 1], f).is_zero(f) {
                return Err(format!("horizontal differential squares to nonzero at level {lvl}"));
            }
            if !v[lvl].mul(&v[lvl - 1], f).is_zero(f) {
                return Err(format!("vertical differential squares to nonzero at level {lvl}"));
            }
            if !self.d[lvl].mul(&self.d[lvl - 1], f).is_zero(f) {
                return Err(format!("total differential squares to nonzero at level {lvl}"));
            }
        }
        Ok(())
    }

    /// `dim H^n(Tot)` per level, from ranks.
    pub fn total_homology<F: Field<Elem = E>>(&self, f: &F) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(|m| exactla::rank(m, f)).collect();
        (0..self.levels())
            .map(|l| self.basis[l].len() - ranks[l] - if l > 0 { ranks[l - 1] } else { 0 })
            .collect()
    }

    /// `Σ_S Σ_p dim H̃^p(K_{J∖S})`, the total dimension of the first page.
    pub fn e1_total<F: Field<Elem = E>>(&self, k: &SimplicialComplex, f: &F) -> usize {
        self.summands
            .iter()
            .map(|&s| k.full_subcomplex(self.j.minus(s)).reduced_cohomology(f).total_dim())
            .sum()
    }

    fn unit(&self, lvl: usize, i: usize, f: &impl Field<Elem = E>) -> Vec<E> {
        let mut v = vec![f.zero(); self.basis[lvl].len()];
        v[i] = f.one();
        v
    }
}

/// Degeneration at the first page of the spectral sequences of the covers
/// `U_{I,J}` for every `J ⊆ [m]`.
///
/// The single cover `U_I = U_{I,[m]}` is not enough: for the path `1–3–2`
/// and `I = {1,2}` its first page vanishes while `∂_{12}` is nonzero on
/// `H̃^0(K_{12})`. See [`degenerates_at_e1_single_cover`].
pub fn degenerates_at_e1<F: Field>(k: &SimplicialComplex, coords: VertexSet, f: &F) -> bool {
    MvDecider::new(k, f).degenerates(coords)
}

/// Degeneration for `U_I` alone, from the full total complex.
pub fn degenerates_at_e1_single_cover<F: Field>(k: &SimplicialComplex, coords: VertexSet, f: &F) -> bool {
    let ac = AugmentedCech::build(k, coords, VertexSet::full(k.m()), f);
    let tot: usize = ac.total_homology(f).iter().sum();
    tot == ac.e1_total(k, f)
}

// ---------------------------------------------------------------------------
// Pages

/// One position `(p, q)` of a page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spot<E> {
    /// Representatives in `Tot^{p+q}` coordinates.
    pub reps: Vec<Vec<E>>,
    /// The same classes in first-page coordinates (columns).
    pub e1: Matrix<E>,
    /// Spanning set of the first-page classes killed so far.
    pub e1_killed: Matrix<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page<E> {
    pub r: usize,
    pub spots: BTreeMap<(i32, i32), Spot<E>>,
    /// `d_r` out of `(p, q)`, a `dim E_r^{p−r+1,q+r} × dim E_r^{p,q}` matrix.
    pub d: BTreeMap<(i32, i32), Matrix<E>>,
}

impl<E: Clone> Page<E> {
    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.spots.get(&(p, q)).map_or(0, |s| s.reps.len())
    }

    pub fn is_zero_differential<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.d.values().all(|m| m.is_zero(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPages<E> {
    pub pages: Vec<Page<E>>,
}

struct Solver<'a, E, F: Field<Elem = E>> {
    ac: &'a AugmentedCech<E>,
    f: &'a F,
    z: HashMap<(i32, i32, usize), Vec<Vec<E>>>,
}

impl<'a, E: Clone + PartialEq, F: Field<Elem = E>> Solver<'a, E, F> {
    fn lvl(&self, n: i32) -> Option<usize> {
        let l = n - self.ac.n_min;
        (l >= 0 && (l as usize) < self.ac.levels()).then_some(l as usize)
    }

    /// `Z_r^{q,n} = {x ∈ F^q Tot^n : Dx ∈ F^{q+r}}`.
    fn z(&mut self, q: i32, n: i32, r: usize) -> Vec<Vec<E>> {
        if let Some(v) = self.z.get(&(q, n, r)) {
            return v.clone();
        }
        let ac = self.ac;
        let f = self.f;
        let out = match self.lvl(n) {
            None => Vec::new(),
            Some(l) => {
                let cols: Vec<usize> = (0..ac.basis[l].len()).filter(|&i| ac.row_of(ac.basis[l][i]) >= q).collect();
                if r == 0 || l + 1 >= ac.levels() {
                    cols.iter().map(|&i| ac.unit(l, i, f)).collect()
                } else {
                    let hi = q + r as i32 - 1;
                    let rows: Vec<usize> = (0..ac.basis[l + 1].len())
                        .filter(|&i| {
                            let row = ac.row_of(ac.basis[l + 1][i]);
                            row >= q && row <= hi
                        })
                        .collect();
                    let m = ac.d[l].select_rows(&rows).select_cols(&cols);
                    exactla::kernel_basis(&m, f)
                        .into_iter()
                        .map(|k| {
                            let mut v = vec![f.zero(); ac.basis[l].len()];
                            for (c, x) in cols.iter().zip(k) {
                                v[*c] = x;
                            }
                            v
                        })
                        .collect()
                }
            }
        };
        self.z.insert((q, n, r), out.clone());
        out
    }

    fn apply_d(&self, n: i32, x: &[E]) -> Vec<E> {
        match self.lvl(n) {
            Some(l) if l + 1 < self.ac.levels() => self.ac.d[l].apply(x, self.f),
            _ => Vec::new(),
        }
    }

    fn dim(&self, n: i32) -> usize {
        self.lvl(n).map_or(0, |l| self.ac.basis[l].len())
    }

    /// Spanning set of `Z_{r−1}^{q+1,n} + D Z_{r−1}^{q−r+1,n−1}`.
    fn killed(&mut self, q: i32, n: i32, r: usize) -> Vec<Vec<E>> {
        let mut out = self.z(q + 1, n, r - 1);
        for x in self.z(q - r as i32 + 1, n - 1, r - 1) {
            let y = self.apply_d(n - 1, &x);
            if !y.is_empty() {
                out.push(y);
            }
        }
        out
    }
}

fn coords_in<F: Field>(
    span: &[Vec<F::Elem>],
    reps: &[Vec<F::Elem>],
    dim: usize,
    y: &[F::Elem],
    f: &F,
) -> Option<Vec<F::Elem>> {
    let mut cols = span.to_vec();
    cols.extend(reps.iter().cloned());
    if cols.is_empty() {
        return exactla::vec_is_zero(y, f).then(Vec::new);
    }
    let sol = exactla::solve(&Matrix::from_columns(dim, &cols), y, f)?;
    Some(sol[span.len()..].to_vec())
}

/// Pages `E_1, …, E_{r_max}` with first-page classes given by the Hochster
/// representatives of `H̃^p(K_{J∖S})`.
pub fn pages<F: Field>(
    ac: &AugmentedCech<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    r_max: usize,
    f: &F,
) -> SpectralPages<F::Elem> {
    assert!(r_max >= 1, "r_max must be at least 1");
    let mut solver = Solver { ac, f, z: HashMap::new() };
    let top_q = ac.top_row();
    let top_p = ac.cochains.iter().map(|c| c.complex.len() as i32 - 2).max().unwrap_or(-1);
    let positions: Vec<(i32, i32)> = (-1..=top_q).flat_map(|q| (-1..=top_p).map(move |p| (p, q))).collect();

    // first page
    let mut spots = BTreeMap::new();
    for &(p, q) in &positions {
        let n = p + q;
        let Some(l) = solver.lvl(n) else { continue };
        let mut reps = Vec::new();
        for (si, &s) in ac.summands.iter().enumerate() {
            if s.len() as i32 - 1 != q {
                continue;
            }
            let u = ac.j.minus(s);
            if hb.dim(u, p) == 0 {
                continue;
            }
            let sr = hb.simplicial_reps(u, p, f);
            let faces = ac.cochains[si].basis(p);
            for c in 0..sr.cols() {
                let mut v = vec![f.zero(); ac.basis[l].len()];
                for (r, face) in faces.iter().enumerate() {
                    v[ac.index[l][&(si, *face)]] = sr.get(r, c).clone();
                }
                reps.push(v);
            }
        }
        if reps.is_empty() {
            continue;
        }
        let k = reps.len();
        spots.insert((p, q), Spot { reps, e1: Matrix::identity(k, f), e1_killed: Matrix::zeros(k, 0, f) });
    }

    let mut pages = Vec::new();
    let mut r = 1;
    loop {
        // d_r
        let mut d = BTreeMap::new();
        for (&(p, q), spot) in &spots {
            let n = p + q;
            let tgt = (p - r as i32 + 1, q + r as i32);
            let tdim = spots.get(&tgt).map_or(0, |s: &Spot<F::Elem>| s.reps.len());
            let mut mat = Matrix::zeros(tdim, spot.reps.len(), f);
            if tdim > 0 {
                let killed = solver.killed(tgt.1, n + 1, r);
                let trep = &spots[&tgt].reps;
                for (c, x) in spot.reps.iter().enumerate() {
                    let y = solver.apply_d(n, x);
                    let coeffs = coords_in(&killed, trep, solver.dim(n + 1), &y, f)
                        .expect("D of a page representative lies in the target page");
                    for (row, v) in coeffs.into_iter().enumerate() {
                        mat.set(row, c, v);
                    }
                }
            }
            d.insert((p, q), mat);
        }
        pages.push(Page { r, spots: spots.clone(), d: d.clone() });
        if r == r_max {
            break;
        }
        // E_{r+1}
        let mut next = BTreeMap::new();
        for (&(p, q), spot) in &spots {
            let n = p + q;
            let out = &d[&(p, q)];
            let src = (p + r as i32 - 1, q - r as i32);
            let incoming = d.get(&src).cloned().unwrap_or_else(|| Matrix::zeros(spot.reps.len(), 0, f));
            let kernel = exactla::kernel_basis(out, f);
            if kernel.is_empty() {
                continue;
            }
            let kmat = Matrix::from_columns(spot.reps.len(), &kernel);
            let chosen: Vec<usize> = exactla::pivot_columns(&incoming.hstack(&kmat), f)
                .into_iter()
                .filter(|&c| c >= incoming.cols())
                .map(|c| c - incoming.cols())
                .collect();
            if chosen.is_empty() {
                continue;
            }
            let tgt_q = q + r as i32;
            let mut reps = Vec::new();
            for &ci in &chosen {
                let mut x = vec![f.zero(); spot.reps[0].len()];
                for (i, coef) in kernel[ci].iter().enumerate() {
                    if !f.is_zero(coef) {
                        x = exactla::vec_add(&x, &exactla::vec_scale(&spot.reps[i], coef, f), f);
                    }
                }
                let y = solver.apply_d(n, &x);
                if !y.is_empty() && !exactla::vec_is_zero(&y, f) {
                    // Dx = a + Db with a ∈ Z_{r−1}^{q+r+1}, b ∈ Z_{r−1}^{q+1}
                    let a_span = solver.z(tgt_q + 1, n + 1, r - 1);
                    let b_span = solver.z(q + 1, n, r - 1);
                    let db: Vec<Vec<F::Elem>> = b_span.iter().map(|b| solver.apply_d(n, b)).collect();
                    let c = coords_in(&a_span, &db, solver.dim(n + 1), &y, f)
                        .expect("kernel class lifts to the next page");
                    for (coef, b) in c.iter().zip(&b_span) {
                        if !f.is_zero(coef) {
                            x = exactla::vec_add(&x, &exactla::vec_scale(b, &f.neg(coef), f), f);
                        }
                    }
                }
                reps.push(x);
            }
            let picked = kmat.select_cols(&chosen);
            let e1 = spot.e1.mul(&picked, f);
            let e1_killed = spot.e1_killed.hstack(&spot.e1.mul(&incoming, f));
            next.insert((p, q), Spot { reps, e1, e1_killed });
        }
        spots = next;
        r += 1;
    }
    SpectralPages { pages }
}

impl<E: Clone> SpectralPages<E> {
    /// `Σ_{p+q=n} dim E_r^{p,q}` on the last page, keyed by `n`.
    pub fn last_page_totals(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        if let Some(page) = self.pages.last() {
            for (&(p, q), s) in &page.spots {
                *out.entry(p + q).or_insert(0) += s.reps.len();
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Comparison with the operation table

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageComparison {
    pub page: usize,
    pub degree: i32,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationsReport {
    pub status: CheckStatus,
    pub compared: Vec<PageComparison>,
    pub skipped: Vec<String>,
}

/// Compares every `d_s` leaving the augmentation row with the blocks
/// `(−1)^{ε(S,J)+p+s} ∂_S`, `|S| = s`, on the classes where all lower
/// operations vanish exactly.
pub fn check_against_operations<F: Field>(
    ac: &AugmentedCech<F::Elem>,
    sp: &SpectralPages<F::Elem>,
    table: &OperationTable<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    f: &F,
) -> OperationsReport {
    let j = ac.j;
    let mut compared = Vec::new();
    let mut skipped = Vec::new();
    let op = |s: VertexSet, p: i32, rows: usize, cols: usize| -> Matrix<F::Elem> {
        table.block(s, j, p).map_or_else(|| Matrix::zeros(rows, cols, f), |b| b.matrix.clone())
    };
    for page in &sp.pages {
        let s = page.r;
        if s > ac.cover.len() {
            break;
        }
        for (&(p, q), spot) in &page.spots {
            if q != -1 || spot.reps.is_empty() {
                continue;
            }
            let src_dim = hb.dim(j, p);
            let a = &spot.e1;
            // lower operations must vanish on these classes
            let lower = ac
                .summands
                .iter()
                .filter(|t| !t.is_empty() && t.len() < s)
                .find(|&&t| {
                    let tp = p - t.len() as i32 + 1;
                    let m = op(t, p, hb.dim(j.minus(t), tp), src_dim);
                    !m.mul(a, f).is_zero(f)
                });
            if let Some(t) = lower {
                skipped.push(format!("d_{s} on E^({p},-1): operation {t:?} is nonzero on the surviving classes"));
                continue;
            }
            let tp = p - s as i32 + 1;
            let tq = s as i32 - 1;
            let mut expected: Option<Matrix<F::Elem>> = None;
            for &t in ac.summands.iter().filter(|t| t.len() == s) {
                let rows = hb.dim(j.minus(t), tp);
                let sign = f.sign((epsilon(t, j) + p.rem_euclid(2) as usize + s) % 2 == 1);
                let block = op(t, p, rows, src_dim).scale(&sign, f).mul(a, f);
                expected = Some(match expected {
                    Some(e) => e.vstack(&block),
                    None => block,
                });
            }
            let expected = expected.unwrap_or_else(|| Matrix::zeros(0, a.cols(), f));
            let actual = &page.d[&(p, q)];
            let tspot = page.spots.get(&(tp, tq));
            let mapped = match tspot {
                None => {
                    if expected.rows() > 0 && !expected.is_zero(f) {
                        // the target was killed: expected must lie in the killed span
                        skipped.push(format!("d_{s} on E^({p},-1): target vanished on this page"));
                        continue;
                    }
                    Matrix::zeros(0, a.cols(), f)
                }
                Some(t) => {
                    let mut cols = Vec::new();
                    for c in 0..expected.cols() {
                        match coords_in(&t.e1_killed.columns(), &t.e1.columns(), t.e1.rows(), &expected.column(c), f) {
                            Some(v) => cols.push(v),
                            None => {
                                return OperationsReport {
                                    status: CheckStatus::Fail(format!(
                                        "d_{s} on E^({p},-1): signed operation is not a class of the page"
                                    )),
                                    compared,
                                    skipped,
                                }
                            }
                        }
                    }
                    Matrix::from_columns(t.reps.len(), &cols)
                }
            };
            if &mapped != actual {
                return OperationsReport {
                    status: CheckStatus::Fail(format!(
                        "d_{s} on E^({p},-1) differs from the signed operations: {actual:?} vs {mapped:?}"
                    )),
                    compared,
                    skipped,
                };
            }
            compared.push(PageComparison { page: s, degree: p, classes: a.cols() });
        }
    }
    let status = if compared.is_empty() && !skipped.is_empty() {
        CheckStatus::Skipped(skipped[0].clone())
    } else {
        CheckStatus::Pass
    };
    OperationsReport { status, compared, skipped }
}

// ---------------------------------------------------------------------------
// Dump

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDump {
    pub r: usize,
    /// `(p, q, dim)`
    pub dims: Vec<(i32, i32, usize)>,
    /// `d_r` out of `(p, q)` as `(p, q, row, col, value)` triplets.
    pub differentials: Vec<(i32, i32, usize, usize, String)>,
}

impl<E: Clone> SpectralPages<E> {
    pub fn dump<F: Field<Elem = E>>(&self, f: &F) -> Vec<PageDump> {
        self.pages
            .iter()
            .map(|page| PageDump {
                r: page.r,
                dims: page.spots.iter().map(|(&(p, q), s)| (p, q, s.reps.len())).collect(),
                differentials: page
                    .d
                    .iter()
                    .flat_map(|(&(p, q), m)| {
                        let mut v = Vec::new();
                        for r in 0..m.rows() {
                            for c in 0..m.cols() {
                                if !f.is_zero(m.get(r, c)) {
                                    v.push((p, q, r, c, f.fmt_elem(m.get(r, c))));
                                }
                            }
                        }
                        v
                    })
                    .collect(),
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Dimension-only path

/// `dim H(Tot)` of the augmented Čech complex for `(J, cover)`, computed as
/// `N − 2 rank D` by a sparse column reduction. With an empty cover this is
/// `Σ_p dim H̃^p(K_J)`.
pub fn total_dimension<F: Field>(k: &SimplicialComplex, j: VertexSet, cover: VertexSet, f: &F) -> usize {
    let m = k.m();
    let faces: Vec<VertexSet> = k.faces().iter().copied().filter(|s| s.is_subset(j)).collect();
    let key = |s: VertexSet, sigma: VertexSet| ((s.bits() as usize) << m) | sigma.bits() as usize;
    let mut pos = vec![u32::MAX; 1 << (2 * m)];
    let mut cells: Vec<(VertexSet, VertexSet)> = Vec::new();
    for s in cover.subsets() {
        for &sigma in &faces {
            if sigma.is_disjoint(s) {
                pos[key(s, sigma)] = cells.len() as u32;
                cells.push((s, sigma));
            }
        }
    }
    let n = cells.len();
    let mut pivots: Vec<Option<Vec<(u32, F::Elem)>>> = vec![None; n];
    let mut rank = 0;
    for &(s, sigma) in &cells {
        let mut col: Vec<(u32, F::Elem)> = Vec::new();
        let p = sigma.len() as i32 - 1;
        for v in j.minus(s.union(sigma)).iter() {
            let up = sigma.with(v);
            if k.contains(up) {
                let neg = (sigma.rank_of(v) % 2 == 1) != !s.is_empty();
                col.push((pos[key(s, up)], f.sign(neg)));
            }
        }
        for t in cover.minus(s.union(sigma)).iter() {
            let s2 = s.with(t);
            let neg = !s.is_empty() && (p.rem_euclid(2) as usize + s2.rank_of(t)) % 2 == 1;
            col.push((pos[key(s2, sigma)], f.sign(neg)));
        }
        col.sort_by_key(|e| e.0);
        while let Some((r, x)) = col.last().cloned() {
            match &pivots[r as usize] {
                None => {
                    pivots[r as usize] = Some(col);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    let factor = f.div(&x, &piv.last().expect("nonempty pivot").1);
                    col = sparse_axpy(&col, piv, &factor, f);
                }
            }
        }
    }
    n - 2 * rank
}

/// `a − c·b` for sorted sparse vectors.
fn sparse_axpy<F: Field>(a: &[(u32, F::Elem)], b: &[(u32, F::Elem)], c: &F::Elem, f: &F) -> Vec<(u32, F::Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(k).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            out.push((rb, f.neg(&f.mul(c, &b[k].1))));
            k += 1;
        } else {
            let v = f.sub(&a[i].1, &f.mul(c, &b[k].1));
            if !f.is_zero(&v) {
                out.push((ra, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Degeneration tests for every cover `U_{I,J}` of one complex, with the
/// first-page and total dimensions cached across coordinate sets.
pub struct MvDecider<'a, F: Field> {
    complex: &'a SimplicialComplex,
    field: &'a F,
    reduced: Vec<Option<usize>>,
    pairs: HashMap<(VertexSet, VertexSet), bool>,
}

impl<'a, F: Field> MvDecider<'a, F> {
    pub fn new(complex: &'a SimplicialComplex, field: &'a F) -> Self {
        MvDecider { complex, field, reduced: vec![None; 1 << complex.m()], pairs: HashMap::new() }
    }

    fn reduced_total(&mut self, u: VertexSet) -> usize {
        let (k, f) = (self.complex, self.field);
        *self.reduced[u.bits() as usize].get_or_insert_with(|| total_dimension(k, u, VertexSet::EMPTY, f))
    }

    /// The spectral sequence of `U_{I,J}` degenerates at `E_1` iff
    /// `dim E_1 = dim H(Tot)`.
    pub fn degenerates_for(&mut self, coords: VertexSet, j: VertexSet) -> bool {
        let cover = coords.intersection(j);
        if cover.is_empty() {
            return true;
        }
        if let Some(&b) = self.pairs.get(&(j, cover)) {
            return b;
        }
        let e1: usize = cover.subsets().map(|s| self.reduced_total(j.minus(s))).sum();
        let b = e1 == total_dimension(self.complex, j, cover, self.field);
        self.pairs.insert((j, cover), b);
        b
    }

    /// Degeneration for `U_{I,J}` at every `J ⊆ [m]`; returns the first
    /// failing `J` in face order.
    pub fn first_failure(&mut self, coords: VertexSet) -> Option<VertexSet> {
        VertexSet::full(self.complex.m()).subsets_ordered().into_iter().find(|&j| !self.degenerates_for(coords, j))
    }

    pub fn degenerates(&mut self, coords: VertexSet) -> bool {
        self.first_failure(coords).is_none()
    }
}
