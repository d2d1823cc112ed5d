use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use srres_core::exactla::{self, Matrix};
use srres_core::{Field, PrimeField, Rational, Rationals};

fn q_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_i64(rows, &Rationals)
}

#[test]
fn rref_examples() {
    let q = Rationals;
    let r = exactla::rref(&q_matrix(&[&[1, 2], &[2, 4]]), &q);
    assert_eq!(r.reduced, q_matrix(&[&[1, 2], &[0, 0]]));
    assert_eq!(r.pivots, vec![0]);

    let f2 = PrimeField::new(2).unwrap();
    let id = Matrix::identity(3, &f2);
    let r = exactla::rref(&id, &f2);
    assert_eq!(r.reduced, id);
    assert_eq!(r.pivots, vec![0, 1, 2]);

    let two = Matrix::from_i64(&[&[2]], &f2);
    let r = exactla::rref(&two, &f2);
    assert_eq!(r.reduced, Matrix::from_i64(&[&[0]], &f2));
    assert!(r.pivots.is_empty());
}

#[test]
fn kernel_and_solve_examples() {
    let q = Rationals;
    let k = exactla::kernel_basis(&q_matrix(&[&[1, 1]]), &q);
    assert_eq!(k, vec![vec![q.from_i64(-1), q.one()]]);

    let b = vec![q.from_i64(3), q.from_i64(1)];
    assert_eq!(exactla::solve(&q_matrix(&[&[1, 0], &[0, 0]]), &b, &q), None);

    let x = exactla::solve(&q_matrix(&[&[1, 1]]), &[q.from_i64(5)], &q);
    assert_eq!(x, Some(vec![q.from_i64(5), q.zero()]));
}

#[test]
fn split_examples() {
    let q = Rationals;
    let zero = Matrix::zeros(2, 3, &q);
    let s = exactla::split(&zero, &q);
    assert!(s.complement.is_empty());
    assert_eq!(s.kernel.len(), 3);

    let id = Matrix::identity(3, &q);
    let s = exactla::split(&id, &q);
    assert!(s.kernel.is_empty());
    assert_eq!(s.complement.len(), 3);

    let m = q_matrix(&[&[1, 1], &[0, 0]]);
    let s = exactla::split(&m, &q);
    assert_eq!(s.kernel, vec![vec![q.from_i64(-1), q.one()]]);
    assert_eq!(s.complement, vec![vec![q.one(), q.zero()]]);
    assert_eq!(s.image, vec![vec![q.one(), q.zero()]]);
}

#[test]
fn rationals_promote_and_demote() {
    let q = Rationals;
    let big = q.from_i64(i64::MAX);
    let sq = q.mul(&big, &big);
    let expected = BigRational::from_integer(BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    assert_eq!(sq.to_big(), expected);
    let back = q.div(&sq, &big);
    assert_eq!(back, big);
    assert_eq!(q.fmt_elem(&Rational::new(6, -4)), "-3/2");
}

fn field_matrix<F: Field>(entries: &[i64], rows: usize, cols: usize, f: &F) -> Matrix<F::Elem> {
    let data: Vec<Vec<F::Elem>> = entries.chunks(cols).take(rows).map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
    Matrix::from_rows(cols, data)
}

fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-3i64..4, r * c)))
}

fn check_invariants<F: Field>(m: &Matrix<F::Elem>, f: &F) {
    let r = exactla::rref(m, f);
    assert_eq!(r.transform.mul(m, f), r.reduced);
    assert!(exactla::inverse(&r.transform, f).is_some());
    let rank = r.rank();
    assert_eq!(exactla::rank(&m.transpose(), f), rank);
    let kernel = exactla::kernel_basis(m, f);
    assert_eq!(kernel.len(), m.cols() - rank);
    for v in &kernel {
        assert!(exactla::vec_is_zero(&m.apply(v, f), f));
    }
    // a consistent right-hand side is solved exactly
    let x: Vec<F::Elem> = (0..m.cols()).map(|i| f.from_i64(i as i64 + 1)).collect();
    let b = m.apply(&x, f);
    let y = exactla::solve(m, &b, f).expect("consistent system");
    assert_eq!(m.apply(&y, f), b);
    let s = exactla::split(m, f);
    assert_eq!(s.kernel.len() + s.complement.len(), m.cols());
    // the sparse path agrees with the dense one
    let (red, piv, _) = exactla::rref_sparse(&m.to_sparse(f), f);
    assert_eq!(red.to_dense(f), r.reduced);
    assert_eq!(piv, r.pivots);
}

proptest! {
    #[test]
    fn elimination_invariants_q((r, c, e) in matrix_strategy()) {
        check_invariants(&field_matrix(&e, r, c, &Rationals), &Rationals);
    }

    #[test]
    fn elimination_invariants_f5((r, c, e) in matrix_strategy()) {
        let f = PrimeField::new(5).unwrap();
        check_invariants(&field_matrix(&e, r, c, &f), &f);
    }

    #[test]
    fn rational_arithmetic_matches_bigrational(a in any::<i64>(), b in 1i64..i64::MAX, c in any::<i64>(), d in 1i64..i64::MAX) {
        let q = Rationals;
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let (bx, by) = (x.to_big(), y.to_big());
        prop_assert_eq!(q.add(&x, &y).to_big(), &bx + &by);
        prop_assert_eq!(q.sub(&x, &y).to_big(), &bx - &by);
        prop_assert_eq!(q.mul(&x, &y).to_big(), &bx * &by);
        if !q.is_zero(&y) {
            prop_assert_eq!(q.div(&x, &y).to_big(), &bx / &by);
        }
    }

    #[test]
    fn prime_field_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7, 2_147_483_647]), a in 1i64..1_000_000) {
        let f = PrimeField::new(p).unwrap();
        let x = f.from_i64(a);
        prop_assume!(!f.is_zero(&x));
        prop_assert!(f.is_one(&f.mul(&x, &f.inv(&x))));
    }
}
