use proptest::prelude::*;

use srres_core::corpus;
use srres_core::exactla::Matrix;
use srres_core::fixtures;
use srres_core::simplicial::{epsilon, induced_map_on_cohomology, MAX_VERTICES};
use srres_core::{Error, Field, PrimeField, Rationals, SimplicialComplex, VertexSet};

fn vs(v: &[u32]) -> VertexSet {
    VertexSet::from_vertices(v)
}

fn faces(k: &SimplicialComplex) -> Vec<Vec<u32>> {
    k.faces().iter().map(|s| s.vertices()).collect()
}

#[test]
fn epsilon_examples() {
    assert_eq!(epsilon(VertexSet::EMPTY, vs(&[1, 2, 3])), 0);
    assert_eq!(epsilon(vs(&[2, 4]), vs(&[1, 3])), 3);
    assert_eq!(epsilon(vs(&[1, 2]), vs(&[1, 2])), 1);
}

#[test]
fn full_subcomplex_examples() {
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    assert_eq!(faces(&k.full_subcomplex(vs(&[1]))), vec![vec![], vec![1]]);
    let p = fixtures::complex("pentagon_with_chord");
    let sub = p.full_subcomplex(vs(&[2, 4, 5]));
    assert_eq!(faces(&sub), vec![vec![], vec![2], vec![4], vec![5], vec![4, 5]]);
    assert_eq!(faces(&p.full_subcomplex(VertexSet::EMPTY)), vec![Vec::<u32>::new()]);
}

#[test]
fn face_deletion_examples() {
    let simplex = SimplicialComplex::simplex(3).unwrap();
    assert_eq!(simplex.face_deletion(vs(&[1, 2, 3])), SimplicialComplex::simplex_boundary(3).unwrap());
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    assert_eq!(faces(&k.face_deletion(vs(&[1]))), vec![vec![], vec![2]]);
    assert!(k.face_deletion(VertexSet::EMPTY).is_void());
}

#[test]
fn reduced_cohomology_examples() {
    let q = Rationals;
    let f2 = PrimeField::new(2).unwrap();
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    assert_eq!(k.reduced_cohomology(&q).dim(0), 1);
    let rp2 = fixtures::complex("rp2_six");
    let h2 = rp2.reduced_cohomology(&f2);
    assert_eq!((h2.dim(1), h2.dim(2)), (1, 1));
    assert_eq!(rp2.reduced_cohomology(&q).total_dim(), 0);
    let point = k.full_subcomplex(VertexSet::EMPTY);
    assert_eq!(point.reduced_cohomology(&q).dims(), vec![(-1, 1)]);
}

#[test]
fn induced_map_examples() {
    let q = Rationals;
    let p = fixtures::complex("pentagon_with_chord");
    for m in induced_map_on_cohomology(&p, &p, &q).unwrap() {
        assert_eq!(m.matrix, Matrix::identity(m.matrix.rows(), &q));
    }
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    let l = SimplicialComplex::from_facets(2, &[vec![2]]).unwrap();
    assert!(induced_map_on_cohomology(&l, &k, &q).unwrap().iter().all(|m| m.is_zero));
    // {1,3} is not a face, so deleting it changes nothing
    let deleted = p.face_deletion(vs(&[1, 3]));
    assert_eq!(deleted, p);
    let maps = induced_map_on_cohomology(&deleted, &p, &q).unwrap();
    assert!(maps.iter().any(|m| m.degree == 1 && !m.is_zero));
    assert_eq!(
        induced_map_on_cohomology(&p, &l, &q).unwrap_err(),
        Error::NotASubcomplex(vec![1])
    );
}

#[test]
fn flag_and_nonfaces() {
    assert!(!SimplicialComplex::simplex_boundary(3).unwrap().is_flag());
    let c4 = fixtures::complex("four_cycle");
    assert!(c4.is_flag());
    assert_eq!(c4.missing_edges(), vec![vs(&[1, 3]), vs(&[2, 4])]);
    assert_eq!(SimplicialComplex::simplex_boundary(2).unwrap().minimal_nonfaces(), vec![vs(&[1, 2])]);
    let k_hat = fixtures::complex("k_hat");
    assert_eq!(k_hat.minimal_nonfaces().len(), 20);
}

#[test]
fn join_of_boundaries_is_four_cycle() {
    let a = SimplicialComplex::from_facets(4, &[vec![1], vec![3]]).unwrap();
    let b = SimplicialComplex::from_facets(4, &[vec![2], vec![4]]).unwrap();
    assert_eq!(a.join(&b).unwrap(), fixtures::complex("four_cycle"));
    assert!(matches!(a.join(&a), Err(Error::OverlappingLabels(_))));
}

#[test]
fn construction_errors() {
    assert_eq!(SimplicialComplex::from_facets(2, &[vec![1, 3]]).unwrap_err(), Error::VertexOutOfRange { vertex: 3, m: 2 });
    assert_eq!(SimplicialComplex::from_facets(3, &[vec![2, 1]]).unwrap_err(), Error::UnsortedFace(vec![2, 1]));
    assert_eq!(SimplicialComplex::simplex(MAX_VERTICES + 1).unwrap_err(), Error::TooManyVertices(21));
    assert!(SimplicialComplex::simplex(MAX_VERTICES).is_ok());
}

/// Dedekind numbers minus one: downward-closed families on `m` labelled
/// points that contain the empty set.
#[test]
fn corpus_counts() {
    for (m, n) in [(1, 2), (2, 5), (3, 19), (4, 167)] {
        assert_eq!(corpus::all_complexes(m).len(), n, "m = {m}");
    }
    assert_eq!(corpus::small_complexes(4).len(), 2 + 5 + 19 + 167);
    let a = corpus::random_complexes(7, 20);
    assert_eq!(a, corpus::random_complexes(7, 20));
    assert!(a.iter().all(|k| (6..=7).contains(&k.m())));
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (1usize..=6).prop_flat_map(|m| {
        proptest::collection::vec(1u32..(1 << m), 0..6)
            .prop_map(move |gens| SimplicialComplex::from_face_sets(m, &gens.into_iter().map(VertexSet).collect::<Vec<_>>()).unwrap())
    })
}

fn euler<F: Field>(k: &SimplicialComplex, f: &F) -> (i64, i64) {
    let h: i64 = k.reduced_cohomology(f).dims().iter().map(|&(q, d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
    let c: i64 = k.faces().iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum();
    (h, c)
}

proptest! {
    #[test]
    fn euler_characteristic(k in complex_strategy()) {
        let (h, c) = euler(&k, &Rationals);
        prop_assert_eq!(h, c);
        let (h, c) = euler(&k, &PrimeField::new(2).unwrap());
        prop_assert_eq!(h, c);
    }

    #[test]
    fn deletion_is_union_of_links(k in complex_strategy(), bits in 1u32..64) {
        let m = k.m();
        let f = VertexSet(bits & ((1 << m) - 1));
        prop_assume!(!f.is_empty());
        let mut union = SimplicialComplex::void(m).unwrap();
        for i in f.iter() {
            union = union.union(&k.full_subcomplex(VertexSet::full(m).without(i)));
        }
        prop_assert_eq!(k.face_deletion(f), union);
    }

    #[test]
    fn facet_and_nonface_roundtrip(k in complex_strategy()) {
        let m = k.m();
        prop_assert_eq!(&SimplicialComplex::from_facets(m, &k.facets()).unwrap(), &k);
        let nonfaces: Vec<Vec<u32>> = k.minimal_nonfaces().iter().map(|s| s.vertices()).collect();
        prop_assert_eq!(&SimplicialComplex::from_nonfaces(m, &nonfaces).unwrap(), &k);
    }

    #[test]
    fn restriction_to_itself_is_identity(k in complex_strategy()) {
        let q = Rationals;
        for m in induced_map_on_cohomology(&k, &k, &q).unwrap() {
            prop_assert_eq!(&m.matrix, &Matrix::identity(m.matrix.rows(), &q));
        }
    }

    #[test]
    fn cochains_square_to_zero(k in complex_strategy()) {
        let f3 = PrimeField::new(3).unwrap();
        prop_assert!(k.reduced_cochain_complex(&f3).complex.is_square_zero(&f3));
    }
}
