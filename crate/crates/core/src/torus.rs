//! Subtori of `T^m`, their hulls and `𝒥`-ideals, and the equivariant
//! formality deciders.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactla::{self, Matrix};
use crate::field::{Field, FieldSpec};
use crate::pipeline::MomentAngle;
use crate::resolution::ResolutionModel;
use crate::simplicial::{restriction_maps, ReducedCohomology, SimplicialComplex, VertexSet};

/// Rows are one-parameter subgroups `t ↦ (t^{a_1}, …, t^{a_m})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtorusSpec {
    pub rows: Vec<Vec<i64>>,
}

impl SubtorusSpec {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let s: SubtorusSpec = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let Some(first) = self.rows.first() else {
            return Err(Error::InvalidInput("subtorus needs at least one row".into()));
        };
        if first.is_empty() {
            return Err(Error::InvalidInput("subtorus rows are empty".into()));
        }
        if self.rows.iter().any(|r| r.len() != first.len()) {
            return Err(Error::InvalidInput("subtorus rows have different lengths".into()));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }
}

/// `{i : some row has a_i ≠ 0}`.
pub fn hull(spec: &SubtorusSpec) -> VertexSet {
    let mut out = VertexSet::EMPTY;
    for row in &spec.rows {
        for (i, &a) in row.iter().enumerate() {
            if a != 0 {
                out = out.with(i as u32 + 1);
            }
        }
    }
    out
}

/// Z-basis of `{x ∈ Z^m : A x = 0}` by unimodular column reduction.
pub fn integer_kernel(rows: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    // columns of u track the column operations
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(i32::from(i == j))).collect())
        .collect();
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in mat.iter_mut() {
            row.swap(x, y);
        }
    };
    let axpy_col = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let mut piv = 0;
    for r in 0..a.len() {
        if piv == m {
            break;
        }
        loop {
            let best = (piv..m)
                .filter(|&j| !a[r][j].is_zero())
                .min_by(|&x, &y| a[r][x].abs().cmp(&a[r][y].abs()).then(x.cmp(&y)));
            let Some(j) = best else { break };
            swap_cols(&mut a, piv, j);
            swap_cols(&mut u, piv, j);
            let mut done = true;
            for j in piv + 1..m {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = a[r][j].div_floor(&a[r][piv]);
                axpy_col(&mut a, j, piv, &q);
                axpy_col(&mut u, j, piv, &q);
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    (piv..m).map(|c| u.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Z-basis of the saturation `(Q·rows) ∩ Z^m` of the row lattice.
pub fn saturate(spec: &SubtorusSpec) -> Vec<Vec<BigInt>> {
    let m = spec.m();
    let rows: Vec<Vec<BigInt>> = spec.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let orth = integer_kernel(&rows, m);
    integer_kernel(&orth, m)
}

/// `{i : a_i ≢ 0 mod p for some a in the saturated lattice}`.
pub fn p_hull(spec: &SubtorusSpec, p: u64) -> Result<VertexSet, Error> {
    if !crate::field::is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let pb = BigInt::from(p);
    let mut out = VertexSet::EMPTY;
    for row in saturate(spec) {
        for (i, a) in row.iter().enumerate() {
            if !a.mod_floor(&pb).is_zero() {
                out = out.with(i as u32 + 1);
            }
        }
    }
    Ok(out)
}

/// Basis of `V_H = {b ∈ k^m : A b = 0}`, with `A` the saturated rows reduced
/// into `k`. Each vector `b` stands for the linear form `Σ b_i v_i`.
pub fn j_ideal_generators<F: Field>(spec: &SubtorusSpec, f: &F) -> Vec<Vec<F::Elem>> {
    let m = spec.m();
    let rows: Vec<Vec<F::Elem>> = saturate(spec)
        .iter()
        .map(|r| r.iter().map(|x| reduce_int(x, f)).collect())
        .collect();
    if rows.is_empty() {
        return (0..m)
            .map(|i| (0..m).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
    }
    exactla::kernel_basis(&Matrix::from_rows(m, rows), f)
}

fn reduce_int<F: Field>(x: &BigInt, f: &F) -> F::Elem {
    match f.characteristic() {
        0 => match x.to_i64() {
            Some(v) => f.from_i64(v),
            None => {
                // only reachable for huge inputs; build by halves
                let (q, r) = x.div_mod_floor(&BigInt::from(1i64 << 32));
                let hi = reduce_int(&q, f);
                f.add(&f.mul(&hi, &f.from_i64(1i64 << 32)), &f.from_i64(r.to_i64().expect("remainder fits")))
            }
        },
        p => f.from_i64(x.mod_floor(&BigInt::from(p)).to_i64().expect("residue fits")),
    }
}

pub fn linear_form_string<F: Field>(b: &[F::Elem], f: &F) -> String {
    let mut out = String::new();
    for (i, c) in b.iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        let s = f.fmt_elem(c);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(&format!("v{}", i + 1));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Coordinate,
    Combinatorial,
    Flag,
    Subtorus,
    EdgeIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Success: every candidate obstruction was examined.
    Exhaustive { checked: usize },
    /// A resolution term `coefficient · v_index` from generator `generator`
    /// (a class of `H̃^{cochain_degree}(K_source)`) to `target`.
    Operation {
        index: VertexSet,
        source: VertexSet,
        cochain_degree: i32,
        generator: usize,
        target: usize,
        coefficient: String,
    },
    /// `K_J∖(I∩J) ↪ K_J` is nonzero on `H̃^degree`.
    Restriction { j: VertexSet, deleted: VertexSet, degree: i32 },
    NotAFace { face: VertexSet },
    /// Missing edge `edge` and `vertex ∈ I` lacking an edge to one end.
    MissingEdge { edge: VertexSet, vertex: u32 },
    /// Two vertices of `I` joined in the graph.
    Dependent { edge: VertexSet },
    /// Graph edge `edge` with `vertex ∈ I` adjacent to one of its ends.
    Adjacent { edge: VertexSet, vertex: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfVerdict {
    pub formal: bool,
    pub criterion: Criterion,
    pub coordinates: VertexSet,
    pub witness: Witness,
}

impl EfVerdict {
    fn pass(criterion: Criterion, coordinates: VertexSet, checked: usize) -> Self {
        EfVerdict { formal: true, criterion, coordinates, witness: Witness::Exhaustive { checked } }
    }

    fn fail(criterion: Criterion, coordinates: VertexSet, witness: Witness) -> Self {
        EfVerdict { formal: false, criterion, coordinates, witness }
    }
}

/// Formal iff no term of the resolution has its monomial inside `I`. The
/// witness is the first such term by (monomial, source generator).
pub fn ef_coordinate<F: Field>(model: &ResolutionModel<F::Elem>, coords: VertexSet, f: &F) -> EfVerdict {
    let mut best: Option<(VertexSet, usize, usize)> = None;
    let mut checked = 0;
    for (g, terms) in model.differential.iter().enumerate() {
        for (t_idx, t) in terms.iter().enumerate() {
            checked += 1;
            if t.monomial.is_subset(coords) && best.is_none_or(|(w, bg, _)| (t.monomial, g) < (w, bg)) {
                best = Some((t.monomial, g, t_idx));
            }
        }
    }
    match best {
        None => EfVerdict::pass(Criterion::Coordinate, coords, checked),
        Some((index, g, t_idx)) => {
            let gen = &model.generators[g];
            let t = &model.differential[g][t_idx];
            EfVerdict::fail(
                Criterion::Coordinate,
                coords,
                Witness::Operation {
                    index,
                    source: gen.multidegree,
                    cochain_degree: gen.cochain_degree,
                    generator: g,
                    target: t.target,
                    coefficient: f.fmt_elem(&t.coeff),
                },
            )
        }
    }
}

/// Face-deletion decider with caches shared across coordinate sets.
pub struct CombinatorialDecider<'a, F: Field> {
    complex: &'a SimplicialComplex,
    field: &'a F,
    full: HashMap<VertexSet, ReducedCohomology<F::Elem>>,
    nonzero: HashMap<(VertexSet, VertexSet), Option<i32>>,
}

impl<'a, F: Field> CombinatorialDecider<'a, F> {
    pub fn new(complex: &'a SimplicialComplex, field: &'a F) -> Self {
        CombinatorialDecider { complex, field, full: HashMap::new(), nonzero: HashMap::new() }
    }

    /// First degree where `K_J∖F ↪ K_J` is nonzero on reduced cohomology.
    pub fn obstruction(&mut self, j: VertexSet, deleted: VertexSet) -> Option<i32> {
        if deleted.is_empty() {
            return None;
        }
        if let Some(&r) = self.nonzero.get(&(j, deleted)) {
            return r;
        }
        let (k, f) = (self.complex, self.field);
        let hk = self.full.entry(j).or_insert_with(|| k.full_subcomplex(j).reduced_cohomology(f));
        let r = first_nonzero(hk, &k.full_subcomplex(j).face_deletion(deleted), f);
        self.nonzero.insert((j, deleted), r);
        r
    }

    pub fn decide(&mut self, coords: VertexSet) -> EfVerdict {
        let mut js: Vec<VertexSet> = VertexSet::full(self.complex.m()).subsets().collect();
        js.sort();
        for &j in &js {
            let deleted = coords.intersection(j);
            if let Some(degree) = self.obstruction(j, deleted) {
                return EfVerdict::fail(Criterion::Combinatorial, coords, Witness::Restriction { j, deleted, degree });
            }
        }
        EfVerdict::pass(Criterion::Combinatorial, coords, js.len())
    }
}

fn first_nonzero<F: Field>(hk: &ReducedCohomology<F::Elem>, l: &SimplicialComplex, f: &F) -> Option<i32> {
    if hk.total_dim() == 0 || l.is_void() {
        return None;
    }
    let hl = l.reduced_cohomology(f);
    restriction_maps(hk, &hl, f).into_iter().find(|m| !m.is_zero).map(|m| m.degree)
}

/// Formal iff `K_J∖(I∩J) ↪ K_J` is zero on `H̃^*` for every `J ⊆ [m]`.
pub fn ef_combinatorial<F: Field>(k: &SimplicialComplex, coords: VertexSet, f: &F) -> EfVerdict {
    let mut js: Vec<VertexSet> = VertexSet::full(k.m()).subsets().collect();
    js.sort();
    let hits: Vec<Option<(VertexSet, VertexSet, i32)>> = js
        .par_iter()
        .map(|&j| {
            let deleted = coords.intersection(j);
            if deleted.is_empty() {
                return None;
            }
            let kj = k.full_subcomplex(j);
            let hk = kj.reduced_cohomology(f);
            first_nonzero(&hk, &kj.face_deletion(deleted), f).map(|d| (j, deleted, d))
        })
        .collect();
    match hits.into_iter().flatten().next() {
        Some((j, deleted, degree)) => {
            EfVerdict::fail(Criterion::Combinatorial, coords, Witness::Restriction { j, deleted, degree })
        }
        None => EfVerdict::pass(Criterion::Combinatorial, coords, js.len()),
    }
}

/// Field-free test for flag complexes: `I ∈ K`, and every `v ∈ I∖{i,j}` is
/// adjacent to both ends of every missing edge `{i,j}`.
pub fn ef_flag(k: &SimplicialComplex, coords: VertexSet) -> Result<EfVerdict, Error> {
    if !k.is_flag() {
        return Err(Error::NotFlag);
    }
    if !k.contains(coords) {
        return Ok(EfVerdict::fail(Criterion::Flag, coords, Witness::NotAFace { face: coords }));
    }
    let missing = k.missing_edges();
    let mut checked = 0;
    for &e in &missing {
        for v in coords.minus(e).iter() {
            checked += 1;
            let ok = e.iter().all(|i| k.contains(VertexSet::from_vertices(&[i.min(v), i.max(v)])));
            if !ok {
                return Ok(EfVerdict::fail(Criterion::Flag, coords, Witness::MissingEdge { edge: e, vertex: v }));
            }
        }
    }
    Ok(EfVerdict::pass(Criterion::Flag, coords, checked))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtorusVerdict {
    pub field: FieldSpec,
    pub hull: VertexSet,
    /// The coordinate set the question was reduced to: the hull in
    /// characteristic zero, the `p`-hull in characteristic `p`.
    pub reduced_to: VertexSet,
    pub verdict: EfVerdict,
}

pub fn ef_subtorus<F: Field>(ma: &MomentAngle<F>, spec: &SubtorusSpec) -> Result<SubtorusVerdict, Error> {
    spec.validate()?;
    if spec.m() != ma.complex.m() {
        return Err(Error::InvalidInput(format!(
            "subtorus has {} coordinates but the complex has {} vertices",
            spec.m(),
            ma.complex.m()
        )));
    }
    let f = &ma.field;
    let h = hull(spec);
    let reduced_to = match f.characteristic() {
        0 => h,
        p => p_hull(spec, p)?,
    };
    let mut verdict = ef_coordinate(&ma.model, reduced_to, f);
    verdict.criterion = Criterion::Subtorus;
    Ok(SubtorusVerdict { field: f.spec(), hull: h, reduced_to, verdict })
}

/// A simple graph on `[m]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub m: usize,
    pub edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(m: usize, edges: &[(u32, u32)]) -> Result<Self, Error> {
        let mut out = Vec::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v as usize > m {
                    return Err(Error::VertexOutOfRange { vertex: v, m });
                }
            }
            if a == b {
                return Err(Error::InvalidInput(format!("loop at vertex {a}")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort();
        out.dedup();
        Ok(Graph { m, edges: out })
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// The flag complex of independent sets.
    pub fn independence_complex(&self) -> Result<SimplicialComplex, Error> {
        let nonfaces: Vec<Vec<u32>> = self.edges.iter().map(|&(a, b)| vec![a, b]).collect();
        SimplicialComplex::from_nonfaces(self.m, &nonfaces)
    }
}

/// `I` is independent and no vertex of `I` outside an edge is adjacent to
/// either end of it.
pub fn edge_ideal_jclosed(g: &Graph, coords: VertexSet) -> EfVerdict {
    let verts = coords.vertices();
    for (x, &a) in verts.iter().enumerate() {
        for &b in &verts[x + 1..] {
            if g.has_edge(a, b) {
                return EfVerdict::fail(
                    Criterion::EdgeIdeal,
                    coords,
                    Witness::Dependent { edge: VertexSet::from_vertices(&[a, b]) },
                );
            }
        }
    }
    let mut checked = 0;
    for &(i, j) in &g.edges {
        for &v in &verts {
            if v == i || v == j {
                continue;
            }
            checked += 1;
            if g.has_edge(i, v) || g.has_edge(j, v) {
                return EfVerdict::fail(
                    Criterion::EdgeIdeal,
                    coords,
                    Witness::Adjacent { edge: VertexSet::from_vertices(&[i, j]), vertex: v },
                );
            }
        }
    }
    EfVerdict::pass(Criterion::EdgeIdeal, coords, checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn spec(rows: &[&[i64]]) -> SubtorusSpec {
        SubtorusSpec { rows: rows.iter().map(|r| r.to_vec()).collect() }
    }

    #[test]
    fn hulls() {
        let s = spec(&[&[1, 5]]);
        assert_eq!(hull(&s), VertexSet::from_vertices(&[1, 2]));
        assert_eq!(p_hull(&s, 5).unwrap(), VertexSet::from_vertices(&[1]));
        assert_eq!(p_hull(&s, 3).unwrap(), VertexSet::from_vertices(&[1, 2]));
        assert!(p_hull(&s, 4).is_err());
        let c = spec(&[&[1, 0, 0]]);
        for p in [2, 3, 5, 7] {
            assert_eq!(p_hull(&c, p).unwrap(), VertexSet::singleton(1));
        }
        let d = spec(&[&[2, 4]]);
        assert_eq!(p_hull(&d, 2).unwrap(), VertexSet::singleton(1));
        assert_eq!(p_hull(&d, 3).unwrap(), VertexSet::from_vertices(&[1, 2]));
    }

    #[test]
    fn j_ideal_examples() {
        let q = Rationals;
        let g = j_ideal_generators(&spec(&[&[1, 1]]), &q);
        assert_eq!(g.len(), 1);
        assert_eq!(linear_form_string(&g[0], &q), "-v1 + v2");
        let f3 = PrimeField::new(3).unwrap();
        let g = j_ideal_generators(&spec(&[&[1, 3]]), &f3);
        assert_eq!(g, vec![vec![0, 1]]);
        assert!(j_ideal_generators(&spec(&[&[1, 0], &[0, 1]]), &q).is_empty());
    }

    #[test]
    fn edge_ideal_examples() {
        let g = Graph::new(2, &[(1, 2)]).unwrap();
        assert!(edge_ideal_jclosed(&g, VertexSet::singleton(1)).formal);
        let path = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
        let v = edge_ideal_jclosed(&path, VertexSet::singleton(3));
        assert!(!v.formal);
        assert_eq!(v.witness, Witness::Adjacent { edge: VertexSet::from_vertices(&[1, 2]), vertex: 3 });
        let two = Graph::new(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(edge_ideal_jclosed(&two, VertexSet::from_vertices(&[1, 3])).formal);
    }
}
