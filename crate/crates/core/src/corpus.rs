//! Test corpora: every complex on a few labelled vertices, and seeded random
//! complexes on more.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::simplicial::{SimplicialComplex, VertexSet};

/// All downward-closed families on `[m]` that contain `∅` (the void complex
/// is left out), in a fixed order.
pub fn all_complexes(m: usize) -> Vec<SimplicialComplex> {
    let subsets = VertexSet::full(m).subsets_ordered();
    let mut out = Vec::new();
    let mut chosen = vec![false; 1 << m];
    chosen[0] = true;
    extend(m, &subsets, 1, &mut chosen, &mut out);
    out
}

fn extend(m: usize, subsets: &[VertexSet], at: usize, chosen: &mut Vec<bool>, out: &mut Vec<SimplicialComplex>) {
    if at == subsets.len() {
        let faces: Vec<VertexSet> = subsets.iter().copied().filter(|s| chosen[s.bits() as usize]).collect();
        out.push(SimplicialComplex::from_face_sets(m, &faces).expect("downward closed"));
        return;
    }
    let s = subsets[at];
    extend(m, subsets, at + 1, chosen, out);
    // a set may join only if all its codimension-one faces are present
    if s.iter().all(|v| chosen[s.without(v).bits() as usize]) {
        chosen[s.bits() as usize] = true;
        extend(m, subsets, at + 1, chosen, out);
        chosen[s.bits() as usize] = false;
    }
}

/// All complexes on `1..=max_m` vertices.
pub fn small_complexes(max_m: usize) -> Vec<SimplicialComplex> {
    (1..=max_m).flat_map(all_complexes).collect()
}

pub const RANDOM_SEED: u64 = 0x5eed_2024;

/// `count` complexes on 6 or 7 vertices, each generated by 2 to 8 random
/// faces of size 1 to 4.
pub fn random_complexes(seed: u64, count: usize) -> Vec<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(6..=7);
            let gens = rng.gen_range(2..=8);
            let mut faces = Vec::with_capacity(gens);
            for _ in 0..gens {
                let size = rng.gen_range(1..=4);
                let mut s = VertexSet::EMPTY;
                while s.len() < size {
                    s = s.with(rng.gen_range(1..=m as u32));
                }
                faces.push(s);
            }
            SimplicialComplex::from_face_sets(m, &faces).expect("random faces are in range")
        })
        .collect()
}
