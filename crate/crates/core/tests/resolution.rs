use proptest::prelude::*;

use srres_core::corpus;
use srres_core::fixtures;
use srres_core::oracle::strand_homology_direct;
use srres_core::resolution::{self, quotient_by_coordinates, ResolutionExport};
use srres_core::{with_field, Field, FieldSpec, MomentAngle, PrimeField, Rationals, SimplicialComplex, VertexSet};

fn vs(v: &[u32]) -> VertexSet {
    VertexSet::from_vertices(v)
}

#[test]
fn interval_boundary_resolution() {
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    let ma = MomentAngle::new(&k, Rationals);
    let model = &ma.model;
    assert_eq!(model.betti().totals(), vec![1, 1]);
    assert_eq!(model.generators.len(), 2);
    let (src, term) = model.terms().next().unwrap();
    assert_eq!((src, term.target, term.monomial), (1, 0, vs(&[1, 2])));
    assert!(ma.field.is_one(&term.coeff));
    assert!(model.render_text(&ma.field).contains("v1*v2"));
}

#[test]
fn four_cycle_resolution() {
    let k = fixtures::complex("four_cycle");
    let ma = MomentAngle::new(&k, Rationals);
    let betti = ma.model.betti();
    assert_eq!(betti.totals(), vec![1, 2, 1]);
    assert_eq!(betti.get(1, vs(&[1, 3])), 1);
    assert_eq!(betti.get(1, vs(&[2, 4])), 1);
    assert_eq!(betti.get(2, vs(&[1, 2, 3, 4])), 1);
    // the Koszul syzygy: d(e_top) = ±v2v4 e_13 ± v1v3 e_24
    let top = ma.model.generators.iter().position(|g| g.degree == 2).unwrap();
    let monos: Vec<VertexSet> = ma.model.differential[top].iter().map(|t| t.monomial).collect();
    assert_eq!(monos, vec![vs(&[1, 3]), vs(&[2, 4])]);
}

#[test]
fn simplex_is_free() {
    let k = SimplicialComplex::simplex(4).unwrap();
    let ma = MomentAngle::new(&k, PrimeField::new(2).unwrap());
    assert_eq!(ma.model.betti().totals(), vec![1]);
    assert_eq!(ma.model.terms().count(), 0);
}

#[test]
fn fixtures_verify() {
    for name in fixtures::NAMES {
        let k = fixtures::complex(name);
        if k.m() > 8 {
            continue;
        }
        for spec in [FieldSpec::Rationals, FieldSpec::Prime(2)] {
            with_field!(spec, |f| {
                let ma = MomentAngle::new(&k, f);
                let report = resolution::verify(&ma.model, &k, &ma.field, 2);
                assert!(report.passed(), "{name} over {spec}: {report:?}");
            });
        }
    }
}

#[test]
fn mutated_model_fails() {
    let q = Rationals;
    let k = fixtures::complex("pentagon_with_chord");
    let ma = MomentAngle::new(&k, q);
    let mut model = ma.model.clone();
    // scale one term of a degree-2 generator
    let g = model.generators.iter().position(|g| g.degree == 2).unwrap();
    model.differential[g][0].coeff = q.mul(&model.differential[g][0].coeff, &q.from_i64(2));
    let report = resolution::verify(&model, &k, &q, 2);
    assert!(!report.passed());
    assert!(!report.exactness.passed && report.exactness.failure.is_some(), "{report:?}");

    // a constant entry breaks minimality
    let mut model = ma.model.clone();
    model.differential[g][0].monomial = VertexSet::EMPTY;
    assert!(!resolution::verify(&model, &k, &q, 2).minimality.passed);
}

#[test]
fn export_roundtrip() {
    let k = fixtures::complex("four_cycle");
    let f3 = PrimeField::new(3).unwrap();
    let ma = MomentAngle::new(&k, f3);
    let export = ma.model.export(&ma.field);
    assert_eq!(export.betti, vec![1, 2, 1]);
    assert_eq!(export.terms.len(), ma.model.terms().count());
    let text = serde_json::to_string(&export).unwrap();
    let back: ResolutionExport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, export);
}

#[test]
fn hilbert_numerators() {
    let k = fixtures::complex("four_cycle");
    let faces = resolution::hilbert_numerator_from_faces(&k);
    let expected = [(VertexSet::EMPTY, 1), (vs(&[1, 3]), -1), (vs(&[2, 4]), -1), (vs(&[1, 2, 3, 4]), 1)];
    assert_eq!(faces, expected.into_iter().collect());
    let ma = MomentAngle::new(&k, Rationals);
    assert_eq!(resolution::hilbert_numerator_from_betti(&ma.model.betti()), faces);
}

/// Killing no variables recovers `k[K]`: one class in each multidegree whose
/// support is a face, all in homological degree zero.
#[test]
fn quotient_by_all_coordinates_is_the_face_ring() {
    for name in ["boundary_simplex_2", "four_cycle", "pentagon_with_chord"] {
        let k = fixtures::complex(name);
        let ma = MomentAngle::new(&k, Rationals);
        let full = VertexSet::full(k.m());
        let report = quotient_by_coordinates(&ma.model, full, 2, &ma.field);
        let mut seen = 0;
        for e in report.entries.iter().filter(|e| e.homology_dim > 0) {
            let supp = VertexSet::from_vertices(&(1..=k.m() as u32).filter(|&v| e.multidegree[v as usize - 1] > 0).collect::<Vec<_>>());
            let total: u32 = e.multidegree.iter().sum();
            assert!(k.contains(supp), "{name}: {e:?}");
            assert_eq!(e.homology_dim, 1);
            assert_eq!(e.cohomological_degree, 2 * total as usize);
            seen += 1;
        }
        let expected: usize = k.faces().iter().map(|s| 2usize.pow(s.len() as u32)).sum();
        assert_eq!(seen, expected, "{name}");
    }
}

#[test]
fn strand_homology_of_model_vanishes_off_degree_zero() {
    for k in corpus::small_complexes(4) {
        let ma = MomentAngle::new(&k, PrimeField::new(5).unwrap());
        for supp in VertexSet::full(k.m()).subsets() {
            let h = resolution::strand_homology(&ma.model, supp, &ma.field).unwrap();
            assert_eq!(h.first().copied().unwrap_or(0), usize::from(k.contains(supp)), "{:?} {supp:?}", k.facets());
            assert!(h.iter().skip(1).all(|&x| x == 0));
        }
    }
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (1usize..=6).prop_flat_map(|m| {
        proptest::collection::vec(1u32..(1 << m), 1..7)
            .prop_map(move |g| SimplicialComplex::from_face_sets(m, &g.into_iter().map(VertexSet).collect::<Vec<_>>()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn betti_numbers_match_strand_oracle(k in complex_strategy()) {
        for spec in [FieldSpec::Rationals, FieldSpec::Prime(2)] {
            with_field!(spec, |f| {
                let ma = MomentAngle::new(&k, f);
                let betti = ma.model.betti();
                for u in VertexSet::full(k.m()).subsets() {
                    let direct = strand_homology_direct(&k, u, &ma.field);
                    for (i, &n) in direct.iter().enumerate() {
                        prop_assert_eq!(betti.get(i, u), n, "beta_{},{:?} over {}", i, u, spec);
                    }
                }
            });
        }
    }

    #[test]
    fn terms_are_homogeneous(k in complex_strategy()) {
        let ma = MomentAngle::new(&k, Rationals);
        let gens = &ma.model.generators;
        for (g, t) in ma.model.terms() {
            prop_assert!(!t.monomial.is_empty());
            prop_assert_eq!(gens[t.target].degree + 1, gens[g].degree);
            prop_assert!(t.monomial.is_disjoint(gens[t.target].multidegree));
            prop_assert_eq!(t.monomial.union(gens[t.target].multidegree), gens[g].multidegree);
        }
    }
}
