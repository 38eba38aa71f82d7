//! Minimal safe wrappers around the LAPACK routines used by the dense
//! oracles (symmetric eigensolves, Cholesky factorization and solves,
//! generalized symmetric-definite pencils). Linked from the system OpenBLAS.

use std::os::raw::c_char;

use crate::error::{Error, Result};

extern "C" {
    fn dsyevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn dsygvd_(
        itype: *const i32,
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn dpotrf_(
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        info: *mut i32,
    );
    fn dpotrs_(
        uplo: *const c_char,
        n: *const i32,
        nrhs: *const i32,
        a: *const f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
    fn dgemm_(
        transa: *const c_char,
        transb: *const c_char,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const f64,
        a: *const f64,
        lda: *const i32,
        b: *const f64,
        ldb: *const i32,
        beta: *const f64,
        c: *mut f64,
        ldc: *const i32,
    );
}

fn check(routine: &'static str, info: i32) -> Result<()> {
    if info == 0 {
        Ok(())
    } else {
        Err(Error::Lapack { routine, info })
    }
}

/// Eigenvalues (ascending) of a symmetric matrix given row-major (symmetry
/// makes the storage order immaterial). The input buffer is clobbered.
pub fn sym_eigvals(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut w = vec![0.0; n];
    let lwork = (2 * n * n + 6 * n + 1).max(1) as i32;
    let liwork = (5 * n + 3).max(1) as i32;
    let mut work = vec![0.0; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0;
    unsafe {
        dsyevd_(
            &(b'N' as c_char),
            &(b'L' as c_char),
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("dsyevd", info)?;
    Ok(w)
}

/// Full symmetric eigendecomposition; returns (eigenvalues ascending,
/// eigenvectors as rows of the returned buffer in the row-major view).
pub fn sym_eig(a: &mut [f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut w = vec![0.0; n];
    let lwork = (2 * n * n + 6 * n + 1).max(1) as i32;
    let liwork = (5 * n + 3).max(1) as i32;
    let mut work = vec![0.0; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0;
    unsafe {
        dsyevd_(
            &(b'V' as c_char),
            &(b'U' as c_char), // upper in column-major = lower triangle of the row-major buffer
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("dsyevd", info)?;
    // LAPACK stores eigenvector j in column j (column-major), i.e. in
    // elements a[j*n..(j+1)*n] of the buffer, which reads as row j here.
    Ok((w, a.to_vec()))
}

/// Eigenvalues of the symmetric-definite pencil A x = lambda B x
/// (itype = 1). Both buffers are clobbered; B must be positive definite.
pub fn sym_eigvals_gen(a: &mut [f64], b: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n * n);
    let ni = n as i32;
    let itype = 1i32;
    let mut w = vec![0.0; n];
    let lwork = (2 * n * n + 6 * n + 1).max(1) as i32;
    let liwork = (5 * n + 3).max(1) as i32;
    let mut work = vec![0.0; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0;
    unsafe {
        dsygvd_(
            &itype,
            &(b'N' as c_char),
            &(b'L' as c_char),
            &ni,
            a.as_mut_ptr(),
            &ni,
            b.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("dsygvd", info)?;
    Ok(w)
}

/// Cholesky factorization of a symmetric positive definite matrix, kept in
/// the buffer for subsequent `cholesky_solve` calls.
pub struct CholeskyFactor {
    n: usize,
    factor: Vec<f64>,
}

pub fn cholesky(mut a: Vec<f64>, n: usize) -> Result<CholeskyFactor> {
    assert_eq!(a.len(), n * n);
    let ni = n as i32;
    let mut info = 0;
    unsafe {
        dpotrf_(&(b'L' as c_char), &ni, a.as_mut_ptr(), &ni, &mut info);
    }
    check("dpotrf", info)?;
    Ok(CholeskyFactor { n, factor: a })
}

impl CholeskyFactor {
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.n);
        let ni = self.n as i32;
        let one = 1i32;
        let mut x = b.to_vec();
        let mut info = 0;
        unsafe {
            dpotrs_(
                &(b'L' as c_char),
                &ni,
                &one,
                self.factor.as_ptr(),
                &ni,
                x.as_mut_ptr(),
                &ni,
                &mut info,
            );
        }
        check("dpotrs", info)?;
        Ok(x)
    }
}

/// C = A * B for row-major square-free shapes: A is m x k, B is k x n,
/// C is m x n, all row-major.
pub fn matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), k * n);
    let mut c = vec![0.0; m * n];
    // row-major C = A B  <=>  column-major C^T = B^T A^T
    let (mi, ki, ni) = (m as i32, k as i32, n as i32);
    let alpha = 1.0;
    let beta = 0.0;
    unsafe {
        dgemm_(
            &(b'N' as c_char),
            &(b'N' as c_char),
            &ni,
            &mi,
            &ki,
            &alpha,
            b.as_ptr(),
            &ni,
            a.as_ptr(),
            &ki,
            &beta,
            c.as_mut_ptr(),
            &ni,
        );
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigvals_of_2x2() {
        let mut a = vec![2.0, 1.0, 1.0, 2.0];
        let w = sym_eigvals(&mut a, 2).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eig_with_vectors() {
        let mut a = vec![2.0, 1.0, 1.0, 2.0];
        let (w, v) = sym_eig(&mut a, 2).unwrap();
        // residual check A x = w x for each eigenpair
        let a0 = [2.0, 1.0, 1.0, 2.0];
        for j in 0..2 {
            let x = [v[j * 2], v[j * 2 + 1]];
            for r in 0..2 {
                let ax = a0[r * 2] * x[0] + a0[r * 2 + 1] * x[1];
                assert!((ax - w[j] * x[r]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generalized_pencil() {
        let mut a = vec![4.0, 0.0, 0.0, 9.0];
        let mut b = vec![2.0, 0.0, 0.0, 3.0];
        let w = sym_eigvals_gen(&mut a, &mut b, 2).unwrap();
        assert!((w[0] - 2.0).abs() < 1e-12 && (w[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_solve() {
        let a = vec![4.0, 2.0, 2.0, 3.0];
        let f = cholesky(a, 2).unwrap();
        let x = f.solve(&[8.0, 7.0]).unwrap();
        // A x = b with A = [[4,2],[2,3]], b = (8,7) -> x = (1.25, 1.5)
        assert!((x[0] - 1.25).abs() < 1e-12 && (x[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn matmul_small() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]; // 2x3
        let b = vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]; // 3x2
        let c = matmul(&a, &b, 2, 3, 2);
        assert_eq!(c, vec![58.0, 64.0, 139.0, 154.0]);
    }
}
