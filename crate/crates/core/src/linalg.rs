//! Small dense complex matrices.
//!
//! The matrices met in this crate are at most `(K-1)N` wide and `N` tall, so
//! everything here is a straightforward row-major implementation: a cyclic
//! Jacobi eigensolver for Hermitian matrices, a Cholesky factorization for
//! Hermitian positive definite ones, and LU with partial pivoting for general
//! determinants.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major construction; panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "row-major data has the wrong length"
        );
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// `A Aᴴ`, Hermitian positive semidefinite by construction.
    pub fn gram(&self) -> Self {
        let n = self.rows;
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = Complex::zero();
                for k in 0..self.cols {
                    acc += self[(i, k)] * self[(j, k)].conj();
                }
                g[(i, j)] = acc;
                g[(j, i)] = acc.conj();
            }
            g[(i, i)].im = T::zero();
        }
        g
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `I + s·M` for square `M`.
    pub fn shifted_identity_plus(&self, s: T) -> Self {
        let mut out = self.scale(s);
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += T::one();
        }
        out
    }

    /// Horizontal concatenation `[A, B, ...]`; all blocks must share the row count.
    pub fn hstack(rows: usize, blocks: &[Self]) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack blocks must have equal row counts");
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.cols;
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian within `tol · max(1, ‖M‖_F)`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let bound = tol * self.frobenius_norm().max(T::one());
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > bound {
                    return false;
                }
            }
        }
        true
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Eigenvalues of a complex Hermitian matrix in ascending order.
///
/// Cyclic Jacobi: each `(p, q)` rotation first removes the phase of `m[p][q]`
/// with a diagonal unitary, then applies the real symmetric Jacobi rotation
/// that annihilates the now-real off-diagonal entry. Sweeps continue until the
/// off-diagonal Frobenius norm is at most `tol · ‖M‖_F`.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if !m.all_finite() {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let tol = T::solver_tolerance();
    if !m.is_hermitian(tol) {
        return Err(Error::input("matrix is not Hermitian"));
    }
    let n = m.rows;
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)].im = T::zero();
    }
    let threshold = tol * a.frobenius_norm();

    let off_norm = |a: &CMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..=MAX_JACOBI_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::numeric(format!(
            "Jacobi did not converge in {MAX_JACOBI_SWEEPS} sweeps"
        )));
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}

fn rotate<T: Real>(a: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let n = a.rows;
    // phase = e^{-iφ} with a_pq = r e^{iφ}
    let phase = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (r + r);
    let t = {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // A ← A·J with J = D·R, D = diag(.., 1 at p, e^{-iφ} at q, ..)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)] * phase;
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
    }
    // A ← Jᴴ·A
    let phase_c = phase.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)] * phase_c;
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
}

/// Lower-triangular Cholesky factor `L` with `M = L Lᴴ`, reading only the
/// lower triangle of `M`.
pub fn cholesky<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "Cholesky needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if !m.all_finite() {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let n = m.rows;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::numeric(format!(
                "matrix is not positive definite (pivot {j} = {d})"
            )));
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex::new(ljj, T::zero());
        for i in (j + 1)..n {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Ok(l)
}

/// Natural-log determinant of a Hermitian positive definite matrix.
pub fn spd_logdet<T: Real>(m: &CMatrix<T>) -> Result<T> {
    let l = cholesky(m)?;
    Ok((0..l.rows).map(|i| l[(i, i)].re.ln()).sum::<T>() * T::of(2.0))
}

/// `ln det(I + M)` for Hermitian positive semidefinite `M`.
///
/// An `LDLᴴ` factorization of `I + M` that carries each pivot as `dⱼ − 1`,
/// so the result keeps full relative precision when `M` is small (it is
/// `ln_1p(m)` exactly for a 1×1 `M`).
pub fn logdet_identity_plus<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "log-determinant needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if !m.all_finite() {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let n = m.rows;
    let mut l = CMatrix::identity(n);
    let mut d = vec![T::zero(); n];
    let mut acc = T::zero();
    for j in 0..n {
        let mut e = m[(j, j)].re;
        for k in 0..j {
            e -= l[(j, k)].norm_sqr() * d[k];
        }
        let dj = T::one() + e;
        if !(dj > T::zero()) || !dj.is_finite() {
            return Err(Error::numeric(format!(
                "I + M is not positive definite (pivot {j} = {dj})"
            )));
        }
        d[j] = dj;
        acc += e.ln_1p();
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj() * d[k];
            }
            l[(i, j)] = v / dj;
        }
    }
    Ok(acc)
}

/// Solves `L X = B` for lower-triangular `L` by forward substitution.
pub fn solve_lower<T: Real>(l: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(l.rows, b.rows, "dimension mismatch in triangular solve");
    let n = l.rows;
    let mut x = b.clone();
    for col in 0..b.cols {
        for i in 0..n {
            let mut acc = x[(i, col)];
            for k in 0..i {
                acc -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = acc / l[(i, i)];
        }
    }
    x
}

/// `ln |det M|` for a general square matrix via LU with partial pivoting;
/// `-inf` when `M` is singular.
pub fn log_abs_det<T: Real>(m: &CMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::input("determinant of a non-square matrix"));
    }
    if !m.all_finite() {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut acc = T::zero();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[(i, col)]
                    .norm()
                    .partial_cmp(&a[(j, col)].norm())
                    .expect("finite")
            })
            .expect("non-empty range");
        let pv = a[(pivot, col)];
        if pv.is_zero() {
            return Ok(T::neg_infinity());
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
        }
        acc += pv.norm().ln();
        for i in (col + 1)..n {
            let f = a[(i, col)] / pv;
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let v = a[(col, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    Ok(acc)
}
