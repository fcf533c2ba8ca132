//! Gaussian elimination over an exact field.

use num_traits::{One, Zero};

use super::rat::Rat;
use super::ratfun::RatFun;

pub trait Field: Clone + PartialEq {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_div(&self, o: &Self) -> Self;
    fn f_neg(&self) -> Self;
    /// Pivot preference; smaller is better.
    fn weight(&self) -> usize;
}

impl Field for Rat {
    fn f_zero() -> Self {
        Zero::zero()
    }
    fn f_one() -> Self {
        One::one()
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
    fn f_neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for RatFun {
    fn f_zero() -> Self {
        RatFun::zero()
    }
    fn f_one() -> Self {
        RatFun::one()
    }
    fn f_is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
    fn f_neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.num().degree().unwrap_or(0) + self.den().degree().unwrap_or(0)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let best = (row..m.len())
            .filter(|&r| !m[r][col].f_is_zero())
            .min_by_key(|&r| m[r][col].weight());
        let Some(p) = best else { continue };
        m.swap(row, p);
        let inv = F::f_one().f_div(&m[row][col]);
        for c in col..ncols {
            m[row][c] = m[row][c].f_mul(&inv);
        }
        for r in 0..m.len() {
            if r == row || m[r][col].f_is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                if m[row][c].f_is_zero() {
                    continue;
                }
                let t = f.f_mul(&m[row][c]);
                m[r][c] = m[r][c].f_sub(&t);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the right kernel of `m` (rows of length `ncols`).
pub fn nullspace<F: Field>(m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::f_zero(); ncols];
        v[free] = F::f_one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].f_neg();
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b`; `None` if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::f_zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let k = nullspace(&m, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            let s: Rat = m[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(Zero::is_zero(&s));
        }
    }

    #[test]
    fn solves_square_system() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let x = solve(&m, &[rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![crate::exact::frac(4, 5), crate::exact::frac(7, 5)]);
        assert!(solve(&[vec![rat(1)], vec![rat(1)]], &[rat(1), rat(2)]).is_none());
    }
}
