//! Built-in example complexes and the Chevalley–Eilenberg dg module.

use crate::formats::parse_complex;
use crate::simplicial::SimplicialComplex;
use crate::transfer::DgModuleFile;

pub const BOUNDARY_SIMPLEX_2: &str = include_str!("../fixtures/boundary_simplex_2.json");
pub const BOUNDARY_SIMPLEX_3: &str = include_str!("../fixtures/boundary_simplex_3.json");
pub const BOUNDARY_SIMPLEX_4: &str = include_str!("../fixtures/boundary_simplex_4.json");
pub const FOUR_CYCLE: &str = include_str!("../fixtures/four_cycle.json");
pub const PENTAGON_WITH_CHORD: &str = include_str!("../fixtures/pentagon_with_chord.json");
pub const RP2_SIX: &str = include_str!("../fixtures/rp2_six.json");
/// Seven vertices, twenty minimal non-faces; its `v7` coordinate circle acts
/// formally over `Q` but not over `F_2`.
pub const K_HAT: &str = include_str!("../fixtures/k_hat.json");
/// `Λ(w,x,y,z)` with `dx = wx`, `dy = −wy`, `dz = xy` and contraction `ι_Z`.
pub const CHEVALLEY_EILENBERG: &str = include_str!("../fixtures/chevalley_eilenberg.json");

pub const NAMES: [&str; 7] = [
    "boundary_simplex_2",
    "boundary_simplex_3",
    "boundary_simplex_4",
    "four_cycle",
    "pentagon_with_chord",
    "rp2_six",
    "k_hat",
];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "boundary_simplex_2" => BOUNDARY_SIMPLEX_2,
        "boundary_simplex_3" => BOUNDARY_SIMPLEX_3,
        "boundary_simplex_4" => BOUNDARY_SIMPLEX_4,
        "four_cycle" => FOUR_CYCLE,
        "pentagon_with_chord" => PENTAGON_WITH_CHORD,
        "rp2_six" => RP2_SIX,
        "k_hat" => K_HAT,
        _ => return None,
    })
}

/// Panics on an unknown name; the data is compiled in.
pub fn complex(name: &str) -> SimplicialComplex {
    let text = source(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    parse_complex(text).expect("fixture parses")
}

pub fn chevalley_eilenberg() -> DgModuleFile {
    DgModuleFile::parse(CHEVALLEY_EILENBERG).expect("fixture parses")
}
