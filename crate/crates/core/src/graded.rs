//! Finite based cochain complexes and their deformation retractions onto
//! cohomology.

use crate::exactla::{self, Matrix};
use crate::field::Field;

/// A bounded cochain complex of based vector spaces. Block `k` sits in degree
/// `start + k`; `d[k]` maps block `k` to block `k + 1` (the last map has zero
/// rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex<E> {
    pub start: i32,
    pub d: Vec<Matrix<E>>,
}

impl<E: Clone> GradedComplex<E> {
    pub fn new(start: i32, d: Vec<Matrix<E>>) -> Self {
        for k in 0..d.len() {
            let next = if k + 1 < d.len() { d[k + 1].cols() } else { 0 };
            assert_eq!(d[k].rows(), next, "differential {k} has wrong target dimension");
        }
        GradedComplex { start, d }
    }

    pub fn zero() -> Self {
        GradedComplex { start: 0, d: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.d.get(k).map_or(0, |m| m.cols())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.d.iter().map(|m| m.cols()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.d.iter().map(|m| m.cols()).sum()
    }

    /// Block index of a degree, if present.
    pub fn block(&self, degree: i32) -> Option<usize> {
        let k = degree - self.start;
        (k >= 0 && (k as usize) < self.d.len()).then_some(k as usize)
    }

    pub fn is_square_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0], f).is_zero(f))
    }

    /// Conjugates each block by the basis reversal permutation.
    pub fn reversed(&self) -> Self {
        GradedComplex {
            start: self.start,
            d: self.d.iter().map(reverse_both).collect(),
        }
    }
}

fn reverse_both<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    let rows: Vec<usize> = (0..m.rows()).rev().collect();
    let cols: Vec<usize> = (0..m.cols()).rev().collect();
    m.select_rows(&rows).select_cols(&cols)
}

fn reverse_rows<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    let rows: Vec<usize> = (0..m.rows()).rev().collect();
    m.select_rows(&rows)
}

fn reverse_cols<E: Clone>(m: &Matrix<E>) -> Matrix<E> {
    let cols: Vec<usize> = (0..m.cols()).rev().collect();
    m.select_cols(&cols)
}

/// Special deformation retraction `(σ, π, h)` of a [`GradedComplex`] onto its
/// cohomology: `πσ = 1`, `dh + hd = 1 − σπ`, and `hσ = πh = hh = 0`.
///
/// Per block, `C = B ⊕ H ⊕ L` where `L` is spanned by the standard vectors at
/// the pivot columns of the outgoing differential, `B = d(L_prev)` and `H`
/// collects the first kernel vectors independent of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationRetract<E> {
    /// `sigma[k]`: dim C_k × dim H_k, columns are cocycle representatives.
    pub sigma: Vec<Matrix<E>>,
    /// `pi[k]`: dim H_k × dim C_k.
    pub pi: Vec<Matrix<E>>,
    /// `h[k]`: dim C_{k-1} × dim C_k (zero rows for k = 0).
    pub h: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> DeformationRetract<E> {
    pub fn build<F: Field<Elem = E>>(c: &GradedComplex<E>, f: &F) -> Self {
        let n = c.len();
        let splits: Vec<_> = c.d.iter().map(|d| exactla::split(d, f)).collect();
        let mut sigma = Vec::with_capacity(n);
        let mut pi = Vec::with_capacity(n);
        let mut h = Vec::with_capacity(n);
        for k in 0..n {
            let dim = c.dim(k);
            // boundaries: images of the previous pivot complement
            let prev_pivots: &[usize] = if k == 0 { &[] } else { &splits[k - 1].pivots };
            let b_cols: Vec<Vec<E>> = if k == 0 { Vec::new() } else { splits[k - 1].image.clone() };
            let z_cols = &splits[k].kernel;
            let bz = Matrix::from_columns(dim, &b_cols).hstack(&Matrix::from_columns(dim, z_cols));
            let chosen: Vec<Vec<E>> = exactla::pivot_columns(&bz, f)
                .into_iter()
                .filter(|&p| p >= b_cols.len())
                .map(|p| z_cols[p - b_cols.len()].clone())
                .collect();
            let l_cols = &splits[k].complement;
            let nb = b_cols.len();
            let nh = chosen.len();
            debug_assert_eq!(nb + nh + l_cols.len(), dim, "block {k} does not decompose");
            let mut basis = b_cols;
            basis.extend(chosen.iter().cloned());
            basis.extend(l_cols.iter().cloned());
            let p = Matrix::from_columns(dim, &basis);
            let q = exactla::inverse(&p, f).expect("B ⊕ H ⊕ L is a basis");
            let h_rows: Vec<usize> = (nb..nb + nh).collect();
            sigma.push(Matrix::from_columns(dim, &chosen));
            pi.push(q.select_rows(&h_rows));
            // h sends d(e_p) back to e_p for the previous pivots p
            let prev_dim = if k == 0 { 0 } else { c.dim(k - 1) };
            let mut hk = Matrix::zeros(prev_dim, dim, f);
            for (j, &pcol) in prev_pivots.iter().enumerate() {
                for col in 0..dim {
                    hk.set(pcol, col, q.get(j, col).clone());
                }
            }
            h.push(hk);
        }
        DeformationRetract { sigma, pi, h }
    }

    /// The same construction after reversing the basis of every block, with
    /// the result expressed back in the original bases.
    pub fn build_reversed<F: Field<Elem = E>>(c: &GradedComplex<E>, f: &F) -> Self {
        let r = Self::build(&c.reversed(), f);
        DeformationRetract {
            sigma: r.sigma.iter().map(reverse_rows).collect(),
            pi: r.pi.iter().map(reverse_cols).collect(),
            h: r.h.iter().map(reverse_both).collect(),
        }
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.sigma.iter().map(|s| s.cols()).collect()
    }

    /// Checks `πσ = 1` and `dh + hd = 1 − σπ` entrywise, plus the side
    /// conditions. Returns the first failing block.
    pub fn check<F: Field<Elem = E>>(&self, c: &GradedComplex<E>, f: &F) -> Result<(), String> {
        for k in 0..c.len() {
            let dim = c.dim(k);
            let nh = self.sigma[k].cols();
            if self.pi[k].mul(&self.sigma[k], f) != Matrix::identity(nh, f) {
                return Err(format!("pi*sigma != 1 in block {k}"));
            }
            let mut lhs = Matrix::zeros(dim, dim, f);
            if k > 0 {
                lhs = lhs.add(&c.d[k - 1].mul(&self.h[k], f), f);
            }
            if k + 1 < c.len() {
                lhs = lhs.add(&self.h[k + 1].mul(&c.d[k], f), f);
            }
            let rhs = Matrix::identity(dim, f).sub(&self.sigma[k].mul(&self.pi[k], f), f);
            if lhs != rhs {
                return Err(format!("dh + hd != 1 - sigma*pi in block {k}"));
            }
            if !c.d[k].mul(&self.sigma[k], f).is_zero(f) {
                return Err(format!("sigma is not a cocycle map in block {k}"));
            }
            if k > 0 && !self.h[k].mul(&self.sigma[k], f).is_zero(f) {
                return Err(format!("h*sigma != 0 in block {k}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn interval() -> GradedComplex<crate::field::Rational> {
        // k --(1,1)--> k^2 --(1,-1)--> k
        let q = Rationals;
        GradedComplex::new(
            -1,
            vec![
                Matrix::from_i64(&[&[1], &[1]], &q),
                Matrix::from_i64(&[&[1, -1]], &q),
                Matrix::zeros(0, 1, &q),
            ],
        )
    }

    #[test]
    fn acyclic_complex_has_zero_cohomology() {
        let q = Rationals;
        let c = interval();
        assert!(c.is_square_zero(&q));
        let r = DeformationRetract::build(&c, &q);
        assert_eq!(r.cohomology_dims(), vec![0, 0, 0]);
        r.check(&c, &q).unwrap();
        let rr = DeformationRetract::build_reversed(&c, &q);
        rr.check(&c, &q).unwrap();
    }

    #[test]
    fn zero_differential_is_all_cohomology() {
        let q = Rationals;
        let c = GradedComplex::new(0, vec![Matrix::zeros(3, 2, &q), Matrix::zeros(0, 3, &q)]);
        let r = DeformationRetract::build(&c, &q);
        assert_eq!(r.cohomology_dims(), vec![2, 3]);
        assert!(r.h.iter().all(|h| h.is_zero(&q)));
        assert_eq!(r.sigma[1].mul(&r.pi[1], &q), Matrix::identity(3, &q));
        r.check(&c, &q).unwrap();
    }
}
