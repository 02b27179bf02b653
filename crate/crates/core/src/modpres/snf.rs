//! Smith normal form over Z with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u · a · v = s`, with `u_inv = u^{-1}` kept alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries followed by zeros, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }
}

struct Work {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    /// row_dst += q row_src
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.s.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
        self.u_inv.add_col(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.s.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
    }
}

/// Smith normal form by repeated minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (r, c) = (a.rows(), a.cols());
    let mut w = Work {
        s: a.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
    };
    let mut rank = 0;
    for p in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in p..r {
                for j in p..c {
                    let x = &w.s[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Snf {
                    u: w.u,
                    u_inv: w.u_inv,
                    s: w.s,
                    v: w.v,
                    rank,
                };
            };
            w.swap_rows(p, bi);
            w.swap_cols(p, bj);
            let piv = w.s[(p, p)].clone();
            let mut clean = true;
            for i in p + 1..r {
                if w.s[(i, p)].is_zero() {
                    continue;
                }
                let q = w.s[(i, p)].div_floor(&piv);
                w.add_row(i, p, &-q);
                clean &= w.s[(i, p)].is_zero();
            }
            for j in p + 1..c {
                if w.s[(p, j)].is_zero() {
                    continue;
                }
                let q = w.s[(p, j)].div_floor(&piv);
                w.add_col(j, p, &-q);
                clean &= w.s[(p, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (p + 1..r).find(|&i| (p + 1..c).any(|j| !w.s[(i, j)].is_multiple_of(&piv)));
            if let Some(i) = bad {
                w.add_row(p, i, &BigInt::from(1));
                continue;
            }
            if piv.is_negative() {
                w.negate_row(p);
            }
            rank += 1;
            break;
        }
    }
    Snf {
        u: w.u,
        u_inv: w.u_inv,
        s: w.s,
        v: w.v,
        rank,
    }
}

/// A Z-basis (as columns) of `{x : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols()).map(|j| snf.v.col(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows.len(), rows.first().map_or(0, Vec::len), rows)
    }

    fn check(a: &IntMatrix) -> Snf {
        let f = smith_normal_form(a);
        assert_eq!(&(&f.u * a) * &f.v, f.s);
        assert_eq!(&f.u * &f.u_inv, IntMatrix::identity(a.rows()));
        assert!(f.v.det().abs().is_one());
        assert!(f.s.is_diagonal());
        f
    }

    #[test]
    fn examples() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        let f = check(&m(&[vec![2, 4], vec![0, 6]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(6)]);
        let f = check(&IntMatrix::zeros(2, 2));
        assert_eq!(f.rank, 0);
        assert_eq!(f.s, IntMatrix::zeros(2, 2));
    }

    #[test]
    fn needs_divisibility_fix() {
        let f = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_empty() {
        let f = check(&m(&[vec![4, 6, 8]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2)]);
        let k = integer_kernel(&m(&[vec![4, 6, 8]]));
        assert_eq!(k.len(), 2);
        let e = IntMatrix::zeros(0, 3);
        assert_eq!(smith_normal_form(&e).rank, 0);
        assert_eq!(integer_kernel(&e).len(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9]]);
        for v in integer_kernel(&a) {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }
}
