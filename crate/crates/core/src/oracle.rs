//! Brute-force cross-checks that share no elimination code with `exactla`,
//! and an optional comparison against an external Macaulay2 binary.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::{Field, FieldSpec};
use crate::resolution::{hilbert_numerator_from_faces, BettiTable};
use crate::simplicial::{SimplicialComplex, VertexSet};
use crate::transfer::CheckStatus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub inputs_digest: String,
    pub status: CheckStatus,
    pub details: Vec<String>,
}

pub fn digest_of(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn complex_key(k: &SimplicialComplex) -> String {
    let facets: Vec<String> = k.facets().iter().map(|f| format!("{f:?}")).collect();
    format!("m={};facets={}", k.m(), facets.join(","))
}

/// Plain row reduction; returns the rank and destroys `rows`.
fn rank_of_rows<F: Field>(rows: &mut [Vec<F::Elem>], f: &F) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !f.is_zero(&rows[r][c])) else { continue };
        rows.swap(rank, p);
        let inv = f.inv(&rows[rank][c]);
        for r in rank + 1..rows.len() {
            if f.is_zero(&rows[r][c]) {
                continue;
            }
            let factor = f.mul(&rows[r][c], &inv);
            for x in c..ncols {
                let t = f.mul(&factor, &rows[rank][x]);
                rows[r][x] = f.sub(&rows[r][x], &t);
            }
        }
        rank += 1;
    }
    rank
}

/// Homology of the `U`-strand of the Koszul complex, as dims indexed by
/// homological degree `0..=|U|`. The strand in homological degree `i` is
/// spanned by `v_I u_{U∖I}` with `I ∈ K`, `|I| = |U| − i`, and
/// `d(u_j) = v_j`.
pub fn strand_homology_direct<F: Field>(k: &SimplicialComplex, u: VertexSet, f: &F) -> Vec<usize> {
    let n = u.len();
    let mut chains: Vec<Vec<VertexSet>> = vec![Vec::new(); n + 1];
    for sub in u.subsets() {
        if k.contains(sub) {
            chains[n - sub.len()].push(sub);
        }
    }
    // d: degree i → i−1 sends v_I u_{U∖I} to Σ_{j∉I} ± v_{I∪j} u_{U∖(I∪j)}
    let mut ranks = vec![0usize; n + 2];
    for i in 1..=n {
        let (src, tgt) = (&chains[i], &chains[i - 1]);
        if src.is_empty() || tgt.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<F::Elem>> = vec![vec![f.zero(); src.len()]; tgt.len()];
        for (c, &s) in src.iter().enumerate() {
            let free = u.minus(s);
            for (pos, j) in free.iter().enumerate() {
                let t = s.with(j);
                if let Some(r) = tgt.iter().position(|&x| x == t) {
                    rows[r][c] = f.sign(pos % 2 == 1);
                }
            }
        }
        ranks[i] = rank_of_rows(&mut rows, f);
    }
    (0..=n).map(|i| chains[i].len() - ranks[i] - ranks[i + 1]).collect()
}

/// `Σ (−1)^i β_{i,U} t^U` against the face-side numerator.
pub fn hilbert_identity(k: &SimplicialComplex, betti: &BettiTable) -> OracleReport {
    let mut lhs: BTreeMap<VertexSet, i64> = BTreeMap::new();
    for (&(i, u), &b) in &betti.entries {
        *lhs.entry(u).or_insert(0) += if i % 2 == 0 { b as i64 } else { -(b as i64) };
    }
    lhs.retain(|_, c| *c != 0);
    let rhs = hilbert_numerator_from_faces(k);
    let mut details = Vec::new();
    for key in lhs.keys().chain(rhs.keys()) {
        let (a, b) = (lhs.get(key).copied().unwrap_or(0), rhs.get(key).copied().unwrap_or(0));
        if a != b {
            details.push(format!("t^{key:?}: betti {a}, faces {b}"));
        }
    }
    details.sort();
    details.dedup();
    let status = if details.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail(details[0].clone()) };
    OracleReport { check: "hilbert_identity".into(), inputs_digest: digest_of(&complex_key(k)), status, details }
}

/// Polynomial `Σ c_U t^U` written with `t1*t2` style monomials.
pub fn format_numerator(p: &BTreeMap<VertexSet, i64>) -> String {
    let mut out = String::new();
    for (u, &c) in p {
        let mono = if u.is_empty() {
            String::new()
        } else {
            u.iter().map(|v| format!("t{v}")).collect::<Vec<_>>().join("*")
        };
        let mag = c.unsigned_abs();
        let body = match (mag, mono.is_empty()) {
            (_, true) => mag.to_string(),
            (1, false) => mono,
            (_, false) => format!("{mag}*{mono}"),
        };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

// ---------------------------------------------------------------------------
// Macaulay2 adapter

pub const M2_ENV: &str = "SRRES_M2_BIN";

/// Script printing `BETTI <i> <e1,...,em>` for every free summand of the
/// minimal resolution of `k[K]` and `LAST <vars>` for every nonzero entry
/// of the final differential (`vars` lists the variables in its support).
pub fn m2_script(k: &SimplicialComplex, field: FieldSpec) -> String {
    let m = k.m();
    let ring = match field {
        FieldSpec::Rationals => "QQ".to_string(),
        FieldSpec::Prime(p) => format!("ZZ/{p}"),
    };
    let vars: Vec<String> = (1..=m).map(|i| format!("v{i}")).collect();
    let degrees: Vec<String> = (0..m)
        .map(|i| format!("{{{}}}", (0..m).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(",")))
        .collect();
    let gens: Vec<String> = k
        .minimal_nonfaces()
        .iter()
        .map(|n| n.iter().map(|v| format!("v{v}")).collect::<Vec<_>>().join("*"))
        .collect();
    let ideal = if gens.is_empty() { "ideal(0_R)".to_string() } else { format!("ideal({})", gens.join(",")) };
    format!(
        "R = {ring}[{vars}, Degrees => {{{degrees}}}];\n\
         I = {ideal};\n\
         C = res(R^1/I);\n\
         L = length C;\n\
         for i from 0 to L do for d in degrees C_i do print(\"BETTI \" | toString i | \" \" | demark(\",\", apply(d, toString)));\n\
         if L > 0 then for e in flatten entries C.dd_L do if e != 0 then print(\"LAST \" | demark(\",\", apply(support e, toString)));\n\
         exit 0;\n",
        vars = vars.join(","),
        degrees = degrees.join(","),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct M2Output {
    /// `(i, exponent vector)` with multiplicity.
    pub betti: BTreeMap<(usize, Vec<u32>), usize>,
    /// Variable supports of the nonzero entries of the last differential.
    pub last_supports: Vec<Vec<String>>,
}

pub fn parse_m2_output(text: &str) -> Result<M2Output, String> {
    let mut out = M2Output::default();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("BETTI ") {
            let (i, deg) = rest.split_once(' ').ok_or_else(|| format!("bad BETTI line: {line}"))?;
            let i: usize = i.parse().map_err(|_| format!("bad degree in: {line}"))?;
            let deg: Vec<u32> = deg
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad multidegree in: {line}"))?;
            *out.betti.entry((i, deg)).or_insert(0) += 1;
        } else if let Some(rest) = line.strip_prefix("LAST") {
            let vars = rest.trim().split(',').filter(|s| !s.is_empty()).map(|s| s.trim().to_string()).collect();
            out.last_supports.push(vars);
        }
    }
    Ok(out)
}

/// Compares a parsed M2 run with our Betti table, and reports whether `v7`
/// style variables occur in the last differential.
pub fn compare_m2(k: &SimplicialComplex, betti: &BettiTable, parsed: &M2Output) -> (CheckStatus, Vec<String>) {
    let m = k.m();
    let mut ours: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    for (&(i, u), &b) in &betti.entries {
        let exps: Vec<u32> = (1..=m as u32).map(|v| u32::from(u.contains(v))).collect();
        ours.insert((i, exps), b);
    }
    let mut details = Vec::new();
    for key in ours.keys().chain(parsed.betti.keys()) {
        let (a, b) = (ours.get(key).copied().unwrap_or(0), parsed.betti.get(key).copied().unwrap_or(0));
        if a != b {
            details.push(format!("beta_{} at {:?}: ours {a}, external {b}", key.0, key.1));
        }
    }
    details.sort();
    details.dedup();
    let mut vars: Vec<&String> = parsed.last_supports.iter().flatten().collect();
    vars.sort();
    vars.dedup();
    let info = format!("last differential variables: {}", vars.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
    let status = if details.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail(details[0].clone()) };
    details.push(info);
    (status, details)
}

/// Runs `$SRRES_M2_BIN --script` on the generated script. Absent binary or
/// any subprocess failure gives `Skipped`.
pub fn m2_compare<F: Field>(k: &SimplicialComplex, betti: &BettiTable, f: &F) -> OracleReport {
    let script = m2_script(k, f.spec());
    let inputs_digest = digest_of(&script);
    let skipped = |why: String| OracleReport {
        check: "m2_compare".into(),
        inputs_digest: inputs_digest.clone(),
        status: CheckStatus::Skipped(why),
        details: Vec::new(),
    };
    let Some(bin) = std::env::var_os(M2_ENV) else {
        return skipped(format!("{M2_ENV} is not set"));
    };
    let child = Command::new(&bin)
        .args(["--script", "/dev/stdin"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(e) => return skipped(format!("could not start {}: {e}", bin.to_string_lossy())),
    };
    if let Some(mut stdin) = child.stdin.take() {
        if let Err(e) = stdin.write_all(script.as_bytes()) {
            return skipped(format!("writing script failed: {e}"));
        }
    }
    let output = match child.wait_with_output() {
        Ok(o) => o,
        Err(e) => return skipped(format!("waiting for subprocess failed: {e}")),
    };
    if !output.status.success() {
        return skipped(format!("subprocess failed: {}", String::from_utf8_lossy(&output.stderr).trim()));
    }
    match parse_m2_output(&String::from_utf8_lossy(&output.stdout)) {
        Err(e) => skipped(format!("unparseable output: {e}")),
        Ok(parsed) => {
            let (status, details) = compare_m2(k, betti, &parsed);
            OracleReport { check: "m2_compare".into(), inputs_digest, status, details }
        }
    }
}
