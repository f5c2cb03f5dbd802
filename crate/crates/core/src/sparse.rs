//! Coordinate-format sparse matrices used in the integrator hot loop and for
//! applying single-site operators to large product-space vectors.

use nalgebra::{DMatrix, DVector};

use crate::C64;

#[derive(Clone, Debug)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseMatrix {
    /// Keeps every entry that is not exactly zero.
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let v = m[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    entries.push((r, c, v));
                }
            }
        }
        SparseMatrix { nrows: m.nrows(), ncols: m.ncols(), entries }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn scaled(&self, s: C64) -> Self {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * s)).collect(),
        }
    }

    /// out += self · x for square dense `x` (column-major, n×n).
    pub fn left_mul_acc(&self, x: &[C64], n: usize, out: &mut [C64]) {
        debug_assert_eq!(self.ncols, n);
        for col in 0..n {
            let xc = &x[col * n..(col + 1) * n];
            let oc = &mut out[col * self.nrows..(col + 1) * self.nrows];
            for &(r, k, v) in &self.entries {
                oc[r] += v * xc[k];
            }
        }
    }

    /// out += x · self† for dense `x` (column-major, n rows).
    pub fn right_mul_adjoint_acc(&self, x: &[C64], n: usize, out: &mut [C64]) {
        for &(c, k, v) in &self.entries {
            let vc = v.conj();
            let xk = &x[k * n..(k + 1) * n];
            let oc = &mut out[c * n..(c + 1) * n];
            for (o, xv) in oc.iter_mut().zip(xk) {
                *o += vc * xv;
            }
        }
    }

    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.nrows);
        for &(r, c, a) in &self.entries {
            out[r] += a * v[c];
        }
        out
    }

    /// Applies this (site-local) operator to axis `axis` of a vector viewed as a
    /// row-major tensor with shape (outer, self.ncols, inner).
    pub fn apply_on_axis(&self, v: &[C64], outer: usize, inner: usize) -> Vec<C64> {
        let d_in = self.ncols;
        let d_out = self.nrows;
        let mut out = vec![C64::new(0.0, 0.0); outer * d_out * inner];
        for o in 0..outer {
            let src = &v[o * d_in * inner..(o + 1) * d_in * inner];
            let dst = &mut out[o * d_out * inner..(o + 1) * d_out * inner];
            for &(r, c, a) in &self.entries {
                let s = &src[c * inner..(c + 1) * inner];
                let d = &mut dst[r * inner..(r + 1) * inner];
                for (x, y) in d.iter_mut().zip(s) {
                    *x += a * y;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn sample(n: usize, seed: u64) -> DMatrix<C64> {
        let mut s = seed;
        DMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 33) % 7) as f64 - 3.0;
            let b = ((s >> 40) % 5) as f64 - 2.0;
            if (s >> 20).is_multiple_of(3) {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(a, b)
            }
        })
    }

    #[test]
    fn products_match_dense() {
        let a = sample(7, 1);
        let x = sample(7, 2);
        let sa = SparseMatrix::from_dense(&a);
        let mut out = vec![Complex::new(0.0, 0.0); 49];
        sa.left_mul_acc(x.as_slice(), 7, &mut out);
        assert!((DMatrix::from_column_slice(7, 7, &out) - &a * &x).norm() < 1e-12);
        let mut out = vec![Complex::new(0.0, 0.0); 49];
        sa.right_mul_adjoint_acc(x.as_slice(), 7, &mut out);
        assert!((DMatrix::from_column_slice(7, 7, &out) - &x * a.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn axis_application_matches_kron() {
        let a = sample(3, 5);
        let sa = SparseMatrix::from_dense(&a);
        let v: Vec<C64> = (0..3 * 3 * 2).map(|k| Complex::new(k as f64, 1.0 - k as f64)).collect();
        let full = DMatrix::<C64>::identity(3, 3).kronecker(&a).kronecker(&DMatrix::<C64>::identity(2, 2));
        let expect = &full * DVector::from_column_slice(&v);
        let got = sa.apply_on_axis(&v, 3, 2);
        assert!((DVector::from_vec(got) - expect).norm() < 1e-12);
    }
}
