use proptest::prelude::*;

use srres_core::corpus;
use srres_core::exactla::{self, Matrix};
use srres_core::fixtures;
use srres_core::torus::{
    edge_ideal_jclosed, ef_combinatorial, ef_coordinate, ef_flag, ef_subtorus, hull, j_ideal_generators,
    linear_form_string, p_hull, Graph, SubtorusSpec, Witness,
};
use srres_core::{Error, Field, MomentAngle, PrimeField, Rationals, SimplicialComplex, VertexSet};

fn vs(v: &[u32]) -> VertexSet {
    VertexSet::from_vertices(v)
}

fn spec(rows: &[&[i64]]) -> SubtorusSpec {
    SubtorusSpec { rows: rows.iter().map(|r| r.to_vec()).collect() }
}

#[test]
fn hull_examples() {
    for p in [2u64, 3, 5, 7] {
        let s = spec(&[&[1, p as i64]]);
        assert_eq!(hull(&s), vs(&[1, 2]));
        assert_eq!(p_hull(&s, p).unwrap(), vs(&[1]));
        assert_eq!(p_hull(&spec(&[&[1, 0, 0]]), p).unwrap(), vs(&[1]));
    }
    let s = spec(&[&[2, 4]]);
    assert_eq!(hull(&s), vs(&[1, 2]));
    assert_eq!(p_hull(&s, 2).unwrap(), vs(&[1]));
    assert_eq!(p_hull(&s, 3).unwrap(), vs(&[1, 2]));
    assert_eq!(p_hull(&s, 4), Err(Error::InvalidPrime(4)));
    assert!(SubtorusSpec::parse(r#"{"rows": [[1,2],[0]]}"#).is_err());
    assert!(SubtorusSpec::parse(r#"{"rows": []}"#).is_err());
}

#[test]
fn j_ideal_examples() {
    let q = Rationals;
    let v = j_ideal_generators(&spec(&[&[1, 1]]), &q);
    assert_eq!(v, vec![vec![q.from_i64(-1), q.one()]]);
    assert_eq!(linear_form_string(&v[0], &q), "-v1 + v2");
    let f3 = PrimeField::new(3).unwrap();
    let v = j_ideal_generators(&spec(&[&[1, 3]]), &f3);
    assert_eq!(v, vec![vec![f3.zero(), f3.one()]]);
    assert_eq!(linear_form_string(&v[0], &f3), "v2");
    assert!(j_ideal_generators(&spec(&[&[1, 0], &[0, 1]]), &q).is_empty());
    assert!(j_ideal_generators(&spec(&[&[2, 0], &[0, 2]]), &PrimeField::new(2).unwrap()).is_empty());
}

#[test]
fn coordinate_examples() {
    let q = Rationals;
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    let ma = MomentAngle::new(&k, q);
    assert!(ef_coordinate(&ma.model, vs(&[1]), &q).formal);
    let v = ef_coordinate(&ma.model, vs(&[1, 2]), &q);
    assert!(!v.formal);
    assert!(matches!(v.witness, Witness::Operation { index, .. } if index == vs(&[1, 2])));

    let k_hat = fixtures::complex("k_hat");
    let ma = MomentAngle::new(&k_hat, q);
    assert!(ef_coordinate(&ma.model, vs(&[7]), &q).formal);
    let f2 = PrimeField::new(2).unwrap();
    let ma = MomentAngle::new(&k_hat, f2);
    assert!(!ef_coordinate(&ma.model, vs(&[7]), &f2).formal);
}

#[test]
fn combinatorial_examples() {
    let q = Rationals;
    let c4 = fixtures::complex("four_cycle");
    assert!(ef_combinatorial(&c4, vs(&[1]), &q).formal);
    let v = ef_combinatorial(&c4, vs(&[1, 3]), &q);
    assert!(!v.formal);
    assert!(matches!(v.witness, Witness::Restriction { j, .. } if j == vs(&[1, 3])));
    let rp2 = fixtures::complex("rp2_six");
    let f2 = PrimeField::new(2).unwrap();
    for i in VertexSet::full(6).subsets().filter(|i| !i.is_empty()) {
        assert!(!ef_combinatorial(&rp2, i, &q).formal);
        assert!(!ef_combinatorial(&rp2, i, &f2).formal);
    }
}

#[test]
fn flag_examples() {
    let c4 = fixtures::complex("four_cycle");
    assert!(ef_flag(&c4, vs(&[1])).unwrap().formal);
    let v = ef_flag(&c4, vs(&[1, 3])).unwrap();
    assert_eq!(v.witness, Witness::NotAFace { face: vs(&[1, 3]) });
    assert!(ef_flag(&c4, VertexSet::EMPTY).unwrap().formal);
    assert_eq!(ef_flag(&SimplicialComplex::simplex_boundary(3).unwrap(), vs(&[1])), Err(Error::NotFlag));
}

#[test]
fn subtorus_examples() {
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    for p in [2u64, 3, 5] {
        let s = spec(&[&[1, p as i64]]);
        let ma = MomentAngle::new(&k, PrimeField::new(p).unwrap());
        let v = ef_subtorus(&ma, &s).unwrap();
        assert_eq!(v.reduced_to, vs(&[1]));
        assert!(v.verdict.formal);
        let ma = MomentAngle::new(&k, Rationals);
        let v = ef_subtorus(&ma, &s).unwrap();
        assert_eq!(v.reduced_to, vs(&[1, 2]));
        assert!(!v.verdict.formal);
    }
    // the Hopf action
    let ma = MomentAngle::new(&k, Rationals);
    assert!(!ef_subtorus(&ma, &spec(&[&[1, 1]])).unwrap().verdict.formal);
    assert!(ef_subtorus(&ma, &spec(&[&[1, 1, 1]])).is_err());
}

#[test]
fn edge_ideal_examples() {
    let g = Graph::new(2, &[(1, 2)]).unwrap();
    assert!(edge_ideal_jclosed(&g, vs(&[1])).formal);
    let path = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
    let v = edge_ideal_jclosed(&path, vs(&[3]));
    assert_eq!(v.witness, Witness::Adjacent { edge: vs(&[1, 2]), vertex: 3 });
    let two = Graph::new(4, &[(1, 2), (3, 4)]).unwrap();
    assert!(edge_ideal_jclosed(&two, vs(&[1, 3])).formal);
    assert!(Graph::new(3, &[(1, 1)]).is_err());
    assert!(Graph::new(3, &[(1, 4)]).is_err());
}

/// Every graph on up to five vertices against the resolution of its
/// independence complex.
#[test]
fn edge_ideal_matches_coordinate() {
    let q = Rationals;
    for m in 1..=5usize {
        let pairs: Vec<(u32, u32)> = (1..=m as u32).flat_map(|a| (a + 1..=m as u32).map(move |b| (a, b))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(u32, u32)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::new(m, &edges).unwrap();
            let k = g.independence_complex().unwrap();
            let ma = MomentAngle::new(&k, q);
            for i in VertexSet::full(m).subsets() {
                assert_eq!(edge_ideal_jclosed(&g, i).formal, ef_coordinate(&ma.model, i, &q).formal, "{edges:?} I={i:?}");
            }
        }
    }
}

#[test]
fn deciders_agree_on_small_complexes() {
    let f2 = PrimeField::new(2).unwrap();
    for k in corpus::small_complexes(4) {
        let ma = MomentAngle::new(&k, f2);
        for i in VertexSet::full(k.m()).subsets() {
            let c = ef_coordinate(&ma.model, i, &f2).formal;
            assert_eq!(c, ef_combinatorial(&k, i, &f2).formal, "{:?} I={i:?}", k.facets());
            if k.is_flag() {
                assert_eq!(c, ef_flag(&k, i).unwrap().formal);
            }
        }
    }
}

/// `ι_v` out of `H⁴` and `ι_{ij}` out of `H³` already decide the flag case.
#[test]
fn flag_low_degree_operations_suffice() {
    let q = Rationals;
    for k in corpus::small_complexes(5).into_iter().filter(|k| k.is_flag()) {
        let ma = MomentAngle::new(&k, q);
        let nonzero: Vec<(VertexSet, VertexSet, i32)> = ma
            .table
            .ops
            .iter()
            .flat_map(|(&index, blocks)| blocks.iter().filter(|b| !b.matrix.is_zero(&q)).map(move |b| (index, b.source, b.degree)))
            .collect();
        for i in VertexSet::full(k.m()).subsets() {
            let low = nonzero.iter().any(|&(index, source, p)| {
                let total = p + 1 + source.len() as i32;
                index.is_subset(i) && ((index.len() == 1 && total == 4) || (index.len() == 2 && total == 3))
            });
            let any = nonzero.iter().any(|&(index, _, _)| index.is_subset(i));
            assert_eq!(low, any, "{:?} I={i:?}", k.facets());
        }
    }
}

/// `(Q·rows) ∩ Z^m` by enumeration: the integer points of a box whose
/// rational span adds nothing to the rows.
fn brute_p_hull(rows: &[Vec<i64>], m: usize, p: i64, radius: i64) -> VertexSet {
    let q = Rationals;
    let base: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect();
    let rank = exactla::rank(&Matrix::from_rows(m, base.clone()), &q);
    let side = (2 * radius + 1) as usize;
    let mut out = VertexSet::EMPTY;
    for idx in 0..side.pow(m as u32) {
        let v: Vec<i64> = (0..m).map(|i| (idx / side.pow(i as u32) % side) as i64 - radius).collect();
        let mut with = base.clone();
        with.push(v.iter().map(|&x| q.from_i64(x)).collect());
        if exactla::rank(&Matrix::from_rows(m, with), &q) == rank {
            for (i, &x) in v.iter().enumerate() {
                if x.rem_euclid(p) != 0 {
                    out = out.with(i as u32 + 1);
                }
            }
        }
    }
    out
}

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (1usize..=6).prop_flat_map(|m| {
        proptest::collection::vec(1u32..(1 << m), 1..7)
            .prop_map(move |g| SimplicialComplex::from_face_sets(m, &g.into_iter().map(VertexSet).collect::<Vec<_>>()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_hull_matches_lattice_enumeration(
        m in 1usize..=3,
        raw in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 1..=2),
        p in prop::sample::select(vec![2i64, 3, 5]),
    ) {
        let rows: Vec<Vec<i64>> = raw.into_iter().map(|r| r[..m].to_vec()).collect();
        let s = SubtorusSpec { rows: rows.clone() };
        prop_assert_eq!(p_hull(&s, p as u64).unwrap(), brute_p_hull(&rows, m, p, 6));
        prop_assert!(p_hull(&s, p as u64).unwrap().is_subset(hull(&s)));
    }

    #[test]
    fn j_ideal_is_annihilator(m in 1usize..=4, raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 1..=3)) {
        let rows: Vec<Vec<i64>> = raw.into_iter().map(|r| r[..m].to_vec()).collect();
        let q = Rationals;
        let s = SubtorusSpec { rows: rows.clone() };
        let basis = j_ideal_generators(&s, &q);
        let a = Matrix::from_rows(m, rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect());
        prop_assert_eq!(basis.len(), m - exactla::rank(&a, &q));
        for b in &basis {
            prop_assert!(exactla::vec_is_zero(&a.apply(b, &q), &q));
        }
    }

    #[test]
    fn formality_is_monotone_and_needs_a_face(k in complex_strategy()) {
        let f3 = PrimeField::new(3).unwrap();
        let ma = MomentAngle::new(&k, f3);
        let full = VertexSet::full(k.m());
        let formal: Vec<bool> = (0..1u32 << k.m()).map(|b| ef_coordinate(&ma.model, VertexSet(b), &f3).formal).collect();
        for i in full.subsets() {
            if formal[i.bits() as usize] {
                prop_assert!(k.contains(i), "formal but not a face: {:?}", i);
                for sub in i.subsets() {
                    prop_assert!(formal[sub.bits() as usize], "{:?} formal, {:?} not", i, sub);
                }
            }
        }
    }
}
