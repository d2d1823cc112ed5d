//! The minimal multigraded free resolution `(S ⊗ H, Σ v_I ⊗ ∂_I)` of `k[K]`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactla::{self, Matrix};
use crate::field::{Field, FieldSpec};
use crate::koszul::HochsterBasis;
use crate::simplicial::{SimplicialComplex, VertexSet};
use crate::transfer::OperationTable;

/// A free generator `S(−U)` in homological degree `degree`; it is the
/// `index`-th class of `H̃^{cochain_degree}(K_U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub degree: usize,
    pub multidegree: VertexSet,
    pub cochain_degree: i32,
    pub index: usize,
}

impl Generator {
    /// Cohomological degree of the class in `H^*(Z_K)`.
    pub fn total_degree(&self) -> usize {
        2 * self.multidegree.len() - self.degree
    }
}

/// `coeff · v_monomial · e_target`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<E> {
    pub target: usize,
    pub coeff: E,
    pub monomial: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionModel<E> {
    pub m: usize,
    pub field: FieldSpec,
    /// Ordered by multidegree (face order), then cochain degree, then index.
    pub generators: Vec<Generator>,
    /// `differential[g]` lists the terms of `d(e_g)` ordered by
    /// (monomial, target).
    pub differential: Vec<Vec<Term<E>>>,
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        if v.iter().any(|&x| x == 0 || x > 32) {
            return Err(serde::de::Error::custom("vertex out of range"));
        }
        Ok(VertexSet::from_vertices(&v))
    }
}

/// Reads the resolution off the operation table.
pub fn assemble<F: Field>(
    table: &OperationTable<F::Elem>,
    hb: &HochsterBasis<F::Elem>,
    f: &F,
) -> ResolutionModel<F::Elem> {
    let m = hb.m;
    let mut us: Vec<VertexSet> = VertexSet::full(m).subsets().collect();
    us.sort();
    let mut generators = Vec::new();
    let mut lookup: HashMap<(VertexSet, i32), usize> = HashMap::new();
    for &u in &us {
        for (kb, s) in hb.retract(u).sigma.iter().enumerate() {
            let p = kb as i32 - 1;
            if s.cols() > 0 {
                lookup.insert((u, p), generators.len());
            }
            for index in 0..s.cols() {
                generators.push(Generator {
                    degree: u.len() - kb,
                    multidegree: u,
                    cochain_degree: p,
                    index,
                });
            }
        }
    }
    let mut differential: Vec<Vec<Term<F::Elem>>> = vec![Vec::new(); generators.len()];
    for (&index, blocks) in &table.ops {
        assert!(!index.is_empty(), "minimality: no constant part");
        for b in blocks {
            let src0 = lookup[&(b.source, b.degree)];
            let tgt0 = lookup[&(b.source.minus(index), b.target_degree(index))];
            for c in 0..b.matrix.cols() {
                for r in 0..b.matrix.rows() {
                    let x = b.matrix.get(r, c);
                    if !f.is_zero(x) {
                        differential[src0 + c].push(Term { target: tgt0 + r, coeff: x.clone(), monomial: index });
                    }
                }
            }
        }
    }
    for terms in differential.iter_mut() {
        terms.sort_by_key(|t| (t.monomial, t.target));
    }
    ResolutionModel { m, field: f.spec(), generators, differential }
}

/// Multigraded Betti numbers `β_{i,U}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, VertexSet), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, u: VertexSet) -> usize {
        self.entries.get(&(i, u)).copied().unwrap_or(0)
    }

    /// `β_i = Σ_U β_{i,U}` for `i = 0..=max`.
    pub fn totals(&self) -> Vec<usize> {
        let top = self.entries.keys().map(|k| k.0).max();
        let mut out = vec![0; top.map_or(0, |t| t + 1)];
        for (&(i, _), &b) in &self.entries {
            out[i] += b;
        }
        out
    }

    /// `β_{i,j}` with `j = |U|`.
    pub fn graded(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (&(i, u), &b) in &self.entries {
            *out.entry((i, u.len())).or_insert(0) += b;
        }
        out
    }

    /// Hochster: `β_{i,U} = dim H̃^{|U|−i−1}(K_U)`, from any per-`U` cohomology.
    pub fn from_hochster<E: Clone + Send + Sync>(hb: &HochsterBasis<E>) -> Self {
        let mut entries = BTreeMap::new();
        for (b, r) in hb.retracts.iter().enumerate() {
            let u = VertexSet(b as u32);
            for (kb, s) in r.sigma.iter().enumerate() {
                if s.cols() > 0 {
                    entries.insert((u.len() - kb, u), s.cols());
                }
            }
        }
        BettiTable { entries }
    }
}

impl<E: Clone> ResolutionModel<E> {
    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for g in &self.generators {
            *entries.entry((g.degree, g.multidegree)).or_insert(0) += 1;
        }
        BettiTable { entries }
    }

    pub fn max_degree(&self) -> usize {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// All terms as `(source, term)` in generator order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Term<E>)> {
        self.differential.iter().enumerate().flat_map(|(g, ts)| ts.iter().map(move |t| (g, t)))
    }
}

/// Outcome of one of the four resolution checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub square_zero: CheckOutcome,
    pub minimality: CheckOutcome,
    pub exactness: CheckOutcome,
    pub hilbert: CheckOutcome,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.square_zero.passed && self.minimality.passed && self.exactness.passed && self.hilbert.passed
    }

    pub fn checks(&self) -> [&CheckOutcome; 4] {
        [&self.square_zero, &self.minimality, &self.exactness, &self.hilbert]
    }
}

pub const MAX_BOX_SAMPLES: usize = 5000;

/// Multidegrees examined by the exactness check: all of `{0,1}^m`, then
/// `2e_i + b` for `b ∈ {0,1}^m` when `bound ≥ 2`, capped at
/// [`MAX_BOX_SAMPLES`].
pub fn sample_multidegrees(m: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for b in 0..1u32 << m {
        out.push((0..m).map(|i| b >> i & 1).collect());
    }
    if bound >= 2 {
        'outer: for i in 0..m {
            for b in 0..1u32 << m {
                if out.len() >= MAX_BOX_SAMPLES {
                    break 'outer;
                }
                let a: Vec<u32> = (0..m).map(|j| (b >> j & 1) + if j == i { 2 } else { 0 }).collect();
                if a.iter().all(|&x| x <= bound) {
                    out.push(a);
                }
            }
        }
    }
    out.truncate(MAX_BOX_SAMPLES);
    out
}

fn support(a: &[u32]) -> VertexSet {
    let mut s = VertexSet::EMPTY;
    for (i, &x) in a.iter().enumerate() {
        if x > 0 {
            s = s.with(i as u32 + 1);
        }
    }
    s
}

/// Runs the four checks: `d² = 0` symbolically, minimality, exactness of the
/// degree-`a` strands of `F → k[K]`, and the multigraded Hilbert identity.
pub fn verify<F: Field>(
    model: &ResolutionModel<F::Elem>,
    k: &SimplicialComplex,
    f: &F,
    bound: u32,
) -> VerifyReport {
    VerifyReport {
        square_zero: check_square_zero(model, f),
        minimality: check_minimality(model, f),
        exactness: check_exactness(model, k, f, bound),
        hilbert: check_hilbert(model, k),
    }
}

fn check_square_zero<F: Field>(model: &ResolutionModel<F::Elem>, f: &F) -> CheckOutcome {
    let mut checked = 0;
    for (g, terms) in model.differential.iter().enumerate() {
        // monomial v_A v_B is keyed by (A ∪ B, A ∩ B)
        let mut acc: BTreeMap<(usize, u32, u32), F::Elem> = BTreeMap::new();
        for t in terms {
            for t2 in &model.differential[t.target] {
                let key = (t2.target, t.monomial.union(t2.monomial).bits(), t.monomial.intersection(t2.monomial).bits());
                let e = acc.entry(key).or_insert_with(|| f.zero());
                *e = f.mul_add(e, &t.coeff, &t2.coeff);
            }
        }
        checked += 1;
        if let Some(((tgt, _, _), c)) = acc.iter().find(|(_, c)| !f.is_zero(c)) {
            return CheckOutcome {
                name: "square_zero".into(),
                passed: false,
                checked,
                failure: Some(format!("d(d(e{g})) has coefficient {} on e{tgt}", f.fmt_elem(c))),
            };
        }
    }
    CheckOutcome { name: "square_zero".into(), passed: true, checked, failure: None }
}

fn check_minimality<F: Field>(model: &ResolutionModel<F::Elem>, f: &F) -> CheckOutcome {
    for (g, t) in model.terms() {
        let src = &model.generators[g];
        let tgt = &model.generators[t.target];
        let problem = if t.monomial.is_empty() {
            Some("unit coefficient")
        } else if f.is_zero(&t.coeff) {
            Some("stored zero")
        } else if tgt.degree + 1 != src.degree {
            Some("homological degree does not drop by one")
        } else if tgt.multidegree.union(t.monomial) != src.multidegree
            || !tgt.multidegree.is_disjoint(t.monomial)
        {
            Some("multidegree mismatch")
        } else {
            None
        };
        if let Some(p) = problem {
            return CheckOutcome {
                name: "minimality".into(),
                passed: false,
                checked: g,
                failure: Some(format!("{p} in d(e{g}) at e{}", t.target)),
            };
        }
    }
    let n = model.terms().count();
    CheckOutcome { name: "minimality".into(), passed: true, checked: n, failure: None }
}

/// Homology dimensions of the degree-`a` part of `F`, which depends only on
/// the support of `a`: the generators are those with `U ⊆ supp(a)` and every
/// term contributes its coefficient. Fails when the strand is not a complex
/// of the expected shape.
pub fn strand_homology<F: Field>(model: &ResolutionModel<F::Elem>, supp: VertexSet, f: &F) -> Result<Vec<usize>, String> {
    let top = model.max_degree();
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    let mut pos = vec![usize::MAX; model.generators.len()];
    for (g, gen) in model.generators.iter().enumerate() {
        if gen.multidegree.is_subset(supp) {
            pos[g] = by_degree[gen.degree].len();
            by_degree[gen.degree].push(g);
        }
    }
    let mut ranks = vec![0usize; top + 2];
    for i in 1..=top {
        let (src, tgt) = (&by_degree[i], &by_degree[i - 1]);
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let mut mat = Matrix::zeros(tgt.len(), src.len(), f);
        for (c, &g) in src.iter().enumerate() {
            for t in &model.differential[g] {
                if pos[t.target] == usize::MAX || model.generators[t.target].degree + 1 != i {
                    return Err(format!("d(e{g}) leaves the strand at e{}", t.target));
                }
                let cur = mat.get(pos[t.target], c).clone();
                mat.set(pos[t.target], c, f.add(&cur, &t.coeff));
            }
        }
        ranks[i] = exactla::rank(&mat, f);
    }
    (0..=top)
        .map(|i| {
            by_degree[i]
                .len()
                .checked_sub(ranks[i] + ranks[i + 1])
                .ok_or_else(|| format!("d² ≠ 0 in homological degree {i}"))
        })
        .collect()
}

fn check_exactness<F: Field>(
    model: &ResolutionModel<F::Elem>,
    k: &SimplicialComplex,
    f: &F,
    bound: u32,
) -> CheckOutcome {
    let samples = sample_multidegrees(model.m, bound);
    let mut supports: Vec<VertexSet> = samples.iter().map(|a| support(a)).collect();
    supports.sort();
    supports.dedup();
    let homology: HashMap<VertexSet, Result<Vec<usize>, String>> = supports
        .par_iter()
        .map(|&s| (s, strand_homology(model, s, f)))
        .collect();
    for a in &samples {
        let s = support(a);
        let h = match &homology[&s] {
            Ok(h) => h,
            Err(e) => {
                return CheckOutcome {
                    name: "exactness".into(),
                    passed: false,
                    checked: samples.len(),
                    failure: Some(format!("multidegree {a:?}: {e}")),
                }
            }
        };
        let expect0 = usize::from(k.contains(s));
        let bad = h.iter().enumerate().find(|&(i, &d)| d != if i == 0 { expect0 } else { 0 });
        if let Some((i, &d)) = bad {
            return CheckOutcome {
                name: "exactness".into(),
                passed: false,
                checked: samples.len(),
                failure: Some(format!("multidegree {a:?}: homology of dimension {d} in degree {i}")),
            };
        }
        if h.is_empty() && expect0 == 1 {
            return CheckOutcome {
                name: "exactness".into(),
                passed: false,
                checked: samples.len(),
                failure: Some(format!("multidegree {a:?}: k[K] is nonzero but F is empty")),
            };
        }
    }
    CheckOutcome { name: "exactness".into(), passed: true, checked: samples.len(), failure: None }
}

/// Coefficients of the multilinear polynomial `Σ_{σ∈K} t^σ Π_{i∉σ}(1 − t_i)`,
/// keyed by monomial.
pub fn hilbert_numerator_from_faces(k: &SimplicialComplex) -> BTreeMap<VertexSet, i64> {
    let mut out = BTreeMap::new();
    let full = VertexSet::full(k.m());
    for &s in k.faces() {
        for t in full.minus(s).subsets() {
            let c = if t.len() % 2 == 0 { 1 } else { -1 };
            *out.entry(s.union(t)).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `Σ_i (−1)^i β_{i,U} t^U`.
pub fn hilbert_numerator_from_betti(b: &BettiTable) -> BTreeMap<VertexSet, i64> {
    let mut out = BTreeMap::new();
    for (&(i, u), &n) in &b.entries {
        let c = if i % 2 == 0 { n as i64 } else { -(n as i64) };
        *out.entry(u).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn check_hilbert<E: Clone>(model: &ResolutionModel<E>, k: &SimplicialComplex) -> CheckOutcome {
    let lhs = hilbert_numerator_from_betti(&model.betti());
    let rhs = hilbert_numerator_from_faces(k);
    let mut keys: Vec<&VertexSet> = lhs.keys().chain(rhs.keys()).collect();
    keys.sort();
    keys.dedup();
    for key in &keys {
        let (a, b) = (lhs.get(key).copied().unwrap_or(0), rhs.get(key).copied().unwrap_or(0));
        if a != b {
            return CheckOutcome {
                name: "hilbert".into(),
                passed: false,
                checked: keys.len(),
                failure: Some(format!("coefficient of t^{key:?}: Betti side {a}, face side {b}")),
            };
        }
    }
    CheckOutcome { name: "hilbert".into(), passed: true, checked: keys.len(), failure: None }
}

/// One nonzero homology entry of a quotient model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientEntry {
    pub cohomological_degree: usize,
    pub multidegree: Vec<u32>,
    pub chain_dim: usize,
    pub homology_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub coordinates: VertexSet,
    pub bound: u32,
    pub zero_differential: bool,
    /// Homology equals the chains at every multidegree of the box.
    pub free_in_box: bool,
    pub surviving_terms: usize,
    pub entries: Vec<QuotientEntry>,
}

pub const MAX_QUOTIENT_BOX: usize = 200_000;

/// Drops every term whose monomial meets `[m]∖I` and computes the homology
/// of the resulting complex over `k[v_i : i ∈ I]` in each multidegree `b`
/// with `b_i ≤ bound` on `I` and `b_j ≤ 1` off `I`.
pub fn quotient_by_coordinates<F: Field>(
    model: &ResolutionModel<F::Elem>,
    coords: VertexSet,
    bound: u32,
    f: &F,
) -> QuotientReport {
    let m = model.m;
    let kept: Vec<Vec<&Term<F::Elem>>> = model
        .differential
        .iter()
        .map(|ts| ts.iter().filter(|t| t.monomial.is_subset(coords)).collect())
        .collect();
    let surviving_terms: usize = kept.iter().map(|v| v.len()).sum();
    // enumerate the box
    let radix: Vec<u32> = (1..=m as u32).map(|v| if coords.contains(v) { bound + 1 } else { 2 }).collect();
    let size: usize = radix.iter().map(|&r| r as usize).product::<usize>().min(MAX_QUOTIENT_BOX);
    let mut entries = Vec::new();
    let mut free_in_box = true;
    for idx in 0..size {
        let mut b = Vec::with_capacity(m);
        let mut rest = idx;
        for &r in &radix {
            b.push((rest % r as usize) as u32);
            rest /= r as usize;
        }
        let total: usize = b.iter().map(|&x| x as usize).sum();
        // generators g with U_g ≤ b and b − U_g supported on I
        let admissible = |g: &Generator| -> bool {
            (1..=m as u32).all(|v| {
                let bi = b[v as usize - 1];
                let ui = u32::from(g.multidegree.contains(v));
                ui <= bi && (coords.contains(v) || bi == ui)
            })
        };
        let top = model.max_degree();
        let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        let mut pos = vec![usize::MAX; model.generators.len()];
        for (g, gen) in model.generators.iter().enumerate() {
            if admissible(gen) {
                pos[g] = by_degree[gen.degree].len();
                by_degree[gen.degree].push(g);
            }
        }
        if by_degree.iter().all(|v| v.is_empty()) {
            continue;
        }
        let mut ranks = vec![0usize; top + 2];
        for i in 1..=top {
            let (src, tgt) = (&by_degree[i], &by_degree[i - 1]);
            if src.is_empty() || tgt.is_empty() {
                continue;
            }
            let mut mat = Matrix::zeros(tgt.len(), src.len(), f);
            for (c, &g) in src.iter().enumerate() {
                for t in &kept[g] {
                    if pos[t.target] == usize::MAX {
                        continue;
                    }
                    let cur = mat.get(pos[t.target], c).clone();
                    mat.set(pos[t.target], c, f.add(&cur, &t.coeff));
                }
            }
            ranks[i] = exactla::rank(&mat, f);
        }
        for i in 0..=top {
            let chain = by_degree[i].len();
            if chain == 0 {
                continue;
            }
            let hom = chain - ranks[i] - ranks[i + 1];
            if hom != chain {
                free_in_box = false;
            }
            entries.push(QuotientEntry {
                cohomological_degree: 2 * total - i,
                multidegree: b.clone(),
                chain_dim: chain,
                homology_dim: hom,
            });
        }
    }
    entries.sort_by(|a, b| (a.cohomological_degree, &a.multidegree).cmp(&(b.cohomological_degree, &b.multidegree)));
    QuotientReport {
        coordinates: coords,
        bound,
        zero_differential: surviving_terms == 0,
        free_in_box,
        surviving_terms,
        entries,
    }
}

// ---------------------------------------------------------------------------
// Export

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub id: usize,
    pub homological_degree: usize,
    pub multidegree: Vec<u32>,
    pub cochain_degree: i32,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub source: usize,
    pub target: usize,
    pub coefficient: String,
    pub monomial: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionExport {
    pub m: usize,
    pub field: FieldSpec,
    pub betti: Vec<usize>,
    pub generators: Vec<GeneratorRecord>,
    pub terms: Vec<TermRecord>,
}

pub fn monomial_string(w: VertexSet) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|v| format!("v{v}")).collect::<Vec<_>>().join("*")
}

impl<E: Clone> ResolutionModel<E> {
    pub fn export<F: Field<Elem = E>>(&self, f: &F) -> ResolutionExport {
        ResolutionExport {
            m: self.m,
            field: self.field,
            betti: self.betti().totals(),
            generators: self
                .generators
                .iter()
                .enumerate()
                .map(|(id, g)| GeneratorRecord {
                    id,
                    homological_degree: g.degree,
                    multidegree: g.multidegree.vertices(),
                    cochain_degree: g.cochain_degree,
                    index: g.index,
                })
                .collect(),
            terms: self
                .terms()
                .map(|(g, t)| TermRecord {
                    source: g,
                    target: t.target,
                    coefficient: f.fmt_elem(&t.coeff),
                    monomial: t.monomial.vertices(),
                })
                .collect(),
        }
    }

    /// Matrices of the differential per homological degree, entries written
    /// as polynomials.
    pub fn render_text<F: Field<Elem = E>>(&self, f: &F) -> String {
        let mut out = String::new();
        let betti = self.betti().totals();
        out.push_str(&format!("field {}, betti {:?}\n", self.field, betti));
        for i in 1..=self.max_degree() {
            let src: Vec<usize> = (0..self.generators.len()).filter(|&g| self.generators[g].degree == i).collect();
            let tgt: Vec<usize> = (0..self.generators.len()).filter(|&g| self.generators[g].degree == i - 1).collect();
            out.push_str(&format!("\nd{i}: F{i} ({}) -> F{} ({})\n", src.len(), i - 1, tgt.len()));
            let col_names: Vec<String> = src.iter().map(|&g| format!("e{g}{:?}", self.generators[g].multidegree)).collect();
            out.push_str(&format!("{:>14} {}\n", "", col_names.join(" ")));
            for &t in &tgt {
                let mut row = format!("{:>14}", format!("e{t}{:?}", self.generators[t].multidegree));
                for (c, &g) in src.iter().enumerate() {
                    let entry: Vec<String> = self.differential[g]
                        .iter()
                        .filter(|term| term.target == t)
                        .map(|term| {
                            let c = f.fmt_elem(&term.coeff);
                            let mono = monomial_string(term.monomial);
                            if c == "1" {
                                mono
                            } else {
                                format!("{c}*{mono}")
                            }
                        })
                        .collect();
                    let cell = if entry.is_empty() { "0".to_string() } else { entry.join("+") };
                    row.push(' ');
                    row.push_str(&format!("{:>width$}", cell, width = col_names[c].len()));
                }
                out.push_str(&row);
                out.push('\n');
            }
        }
        out
    }
}
