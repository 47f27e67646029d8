//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here works on square matrices stored row-major. The Hermitian
//! eigensolver reduces to a real symmetric tridiagonal matrix with Householder
//! reflections and finishes with implicit QL iterations.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative tolerance for the Hermiticity check on eigensolver inputs.
pub const HERMITIAN_RTOL: f64 = 1e-10;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        if self.dim <= 9 {
            for i in 0..self.dim {
                let row: Vec<String> = self
                    .row(i)
                    .iter()
                    .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless `data.len()` is a
    /// positive perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows do not form a square matrix".into()));
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Outer product |v⟩⟨w|.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        assert_eq!(v.len(), w.len());
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn add_identity(&self, s: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += s;
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let orow = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Real part of Tr(self · other); the usual expectation value when one
    /// factor is a state and the other an observable.
    pub fn expectation(&self, observable: &Self) -> f64 {
        self.trace_product(observable).re
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    /// Max-entry deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, rtol: f64) -> bool {
        self.hermiticity_defect() <= rtol * self.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    /// (m + m†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Permutes rows and columns simultaneously: out[i][j] = self[p[i]][p[j]].
    pub fn permute_indices(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let src = perm[i] * n;
            for j in 0..n {
                out[i * n + j] = self.data[src + perm[j]];
            }
        }
        Self { dim: n, data: out }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = vec![ZERO; n * n];
    for i in 0..na {
        for j in 0..na {
            let s = a.data[i * na + j];
            if s == ZERO {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * n + j * nb;
                let brow = &b.data[k * nb..(k + 1) * nb];
                for (o, &bv) in out[row..row + nb].iter_mut().zip(brow) {
                    *o = s * bv;
                }
            }
        }
    }
    ComplexMatrix { dim: n, data: out }
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = factors.into_iter();
    let first = it.next().expect("kron_all needs at least one factor").clone();
    it.fold(first, |acc, m| kron(&acc, m))
}

/// Spectral decomposition m = U diag(values) U†, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }

    /// U f(λ) U†
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        weighted_gram(&self.vectors, &weights)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Σ_k w_k u_k u_k† for the columns u_k of `u`. Columns with zero weight are
/// skipped, which makes low-temperature thermal states cheap.
pub fn weighted_gram(u: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let n = u.dim;
    assert_eq!(weights.len(), n);
    let active: Vec<usize> = (0..n).filter(|&k| weights[k] != 0.0).collect();
    let r = active.len();
    // Split storage of the scaled columns, one row per output index, so the
    // inner loops run over contiguous memory.
    let mut pos_re = vec![0.0; n * r];
    let mut pos_im = vec![0.0; n * r];
    let mut sign = vec![1.0; r];
    for (c, &k) in active.iter().enumerate() {
        let w = weights[k];
        let s = w.abs().sqrt();
        sign[c] = w.signum();
        for i in 0..n {
            let z = u.data[i * n + k] * s;
            pos_re[i * r + c] = z.re;
            pos_im[i * r + c] = z.im;
        }
    }
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        let (ar, ai) = (&pos_re[i * r..(i + 1) * r], &pos_im[i * r..(i + 1) * r]);
        for j in i..n {
            let (br, bi) = (&pos_re[j * r..(j + 1) * r], &pos_im[j * r..(j + 1) * r]);
            let mut re = 0.0;
            let mut im = 0.0;
            for c in 0..r {
                let s = sign[c];
                re += s * (ar[c] * br[c] + ai[c] * bi[c]);
                im += s * (ai[c] * br[c] - ar[c] * bi[c]);
            }
            out[i * n + j] = C64::new(re, im);
            out[j * n + i] = C64::new(re, -im);
        }
    }
    ComplexMatrix { dim: n, data: out }
}

fn checked_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = m.frobenius_norm();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_RTOL * norm.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::NonHermitianInput { defect, norm });
    }
    Ok(m.hermitian_part())
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form. Returns (diag, offdiag, reflectors, phases) where the original
/// matrix equals Q D T D† Q† with Q the product of the reflectors and D the
/// diagonal phase matrix.
struct Tridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    reflectors: Vec<(usize, Vec<C64>)>,
    phases: Vec<C64>,
}

fn tridiagonalize(mut a: ComplexMatrix) -> Tridiagonal {
    let n = a.dim;
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let x: Vec<C64> = (start..n).map(|i| a.data[i * n + k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // column/row k
        a.data[start * n + k] = alpha;
        a.data[k * n + start] = alpha.conj();
        for i in start + 1..n {
            a.data[i * n + k] = ZERO;
            a.data[k * n + i] = ZERO;
        }
        // trailing block B <- H B H with H = I - 2 v v†
        for (ii, pi) in p[..m].iter_mut().enumerate() {
            let row = &a.data[(start + ii) * n + start..(start + ii) * n + n];
            *pi = row.iter().zip(&v).map(|(b, vj)| b * vj).sum();
        }
        let vp: C64 = v.iter().zip(&p[..m]).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C64> = (0..m).map(|i| p[i] - v[i] * vp.re).collect();
        for ii in 0..m {
            let vi2 = v[ii] * 2.0;
            let wi2 = w[ii] * 2.0;
            let row = &mut a.data[(start + ii) * n + start..(start + ii) * n + n];
            for (jj, b) in row.iter_mut().enumerate() {
                *b -= vi2 * w[jj].conj() + wi2 * v[jj].conj();
            }
        }
        reflectors.push((start, v));
    }
    let diag: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
    let mut offdiag = vec![0.0; n.saturating_sub(1)];
    let mut phases = vec![ONE; n];
    for k in 0..n.saturating_sub(1) {
        let e = a.data[(k + 1) * n + k];
        let r = e.norm();
        offdiag[k] = r;
        phases[k + 1] = if r > 0.0 { phases[k] * (e / r) } else { phases[k] };
    }
    Tridiagonal {
        diag,
        offdiag,
        reflectors,
        phases,
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. When `zt` is given it holds
/// the transposed eigenvector matrix (row i = eigenvector i) and is rotated in
/// place.
fn tridiagonal_ql(d: &mut [f64], offdiag: &[f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence("tridiagonal QL".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..(i + 1) * n];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let t = zi1[k];
                        zi1[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix; values ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let a = checked_hermitian(m)?;
    let n = a.dim;
    let tri = tridiagonalize(a);
    let mut d = tri.diag.clone();
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut d, &tri.offdiag, Some(&mut zt))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    // Column c of the result is Q D z_{order[c]}; build D Z first.
    let mut vec_data = vec![ZERO; n * n];
    for (c, &src) in order.iter().enumerate() {
        let z = &zt[src * n..(src + 1) * n];
        for i in 0..n {
            vec_data[i * n + c] = tri.phases[i] * z[i];
        }
    }
    // Apply reflectors in reverse: M <- H_k M on rows start..n.
    let mut tmp = vec![ZERO; n];
    for (start, v) in tri.reflectors.iter().rev() {
        let start = *start;
        tmp.iter_mut().for_each(|t| *t = ZERO);
        for (ii, vi) in v.iter().enumerate() {
            let vc = vi.conj();
            let row = &vec_data[(start + ii) * n..(start + ii + 1) * n];
            for (t, x) in tmp.iter_mut().zip(row) {
                *t += vc * x;
            }
        }
        for (ii, vi) in v.iter().enumerate() {
            let f = vi * 2.0;
            let row = &mut vec_data[(start + ii) * n..(start + ii + 1) * n];
            for (x, t) in row.iter_mut().zip(&tmp) {
                *x -= f * t;
            }
        }
    }
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix { dim: n, data: vec_data },
    })
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = checked_hermitian(m)?;
    let tri = tridiagonalize(a);
    let mut d = tri.diag;
    tridiagonal_ql(&mut d, &tri.offdiag, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(m)?[0])
}

/// Returns true when the Hermitian matrix `m` has an eigenvalue below
/// `threshold`, decided by attempting a Cholesky factorization of
/// `m - threshold·I`. Cheaper than a full spectrum.
pub fn has_eigenvalue_below(m: &ComplexMatrix, threshold: f64) -> bool {
    let n = m.dim;
    let mut l = m.data.clone();
    for i in 0..n {
        l[i * n + i] -= threshold;
    }
    // In-place lower Cholesky, row-oriented: L[i][j] for j <= i.
    let mut prefix = Vec::with_capacity(n);
    for j in 0..n {
        let rowj = &l[j * n..j * n + j];
        let djj = l[j * n + j].re - rowj.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(djj > 0.0) {
            return true;
        }
        let ljj = djj.sqrt();
        l[j * n + j] = C64::new(ljj, 0.0);
        prefix.clear();
        prefix.extend(l[j * n..j * n + j].iter().map(|z| z.conj()));
        for i in j + 1..n {
            let rowi = &mut l[i * n..(i + 1) * n];
            let dot: C64 = rowi[..j].iter().zip(&prefix).map(|(a, b)| a * b).sum();
            rowi[j] = (rowi[j] - dot) / ljj;
        }
    }
    false
}

/// Singular values, descending. Computed as the positive half of the
/// spectrum of the Hermitian dilation [[0, m], [m†, 0]], which keeps small
/// singular values accurate to machine precision relative to ‖m‖.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim;
    let mut dil = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            dil[(i, n + j)] = m[(i, j)];
            dil[(n + j, i)] = m[(i, j)].conj();
        }
    }
    let vals = eigvals_hermitian(&dil).expect("dilation is Hermitian by construction");
    let mut sv: Vec<f64> = vals[n..].iter().map(|v| v.max(0.0)).collect();
    sv.reverse();
    sv
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut dil = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            dil[(i, n + j)] = m[(i, j)];
            dil[(n + j, i)] = m[(i, j)].conj();
        }
    }
    let vals = eigvals_hermitian(&dil).expect("dilation is Hermitian by construction");
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

/// U f(λ) U† for Hermitian m.
pub fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(m)?.map(f))
}

// ---------------------------------------------------------------------------
// Real symmetric matrices (correlation matrices live here).

/// Square real matrix, row-major. Used for the (d²−1)-sized correlation
/// matrices and orthogonal basis changes.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows do not form a square matrix".into()));
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn outer(v: &[f64], w: &[f64]) -> Self {
        assert_eq!(v.len(), w.len());
        Self::from_fn(v.len(), |i, j| v[i] * w[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add_identity(&self, s: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += s;
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Largest deviation of OᵀO from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        self.transpose()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    /// Spectral norm of a symmetric matrix.
    pub fn spectral_norm_symmetric(&self) -> f64 {
        let e = eig_symmetric(self);
        e.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.dim, rhs.dim);
        RealMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        assert_eq!(self.dim, rhs.dim);
        RealMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigenpairs of a real symmetric matrix: values ascending, eigenvectors as
/// the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
}

/// Cyclic Jacobi; the matrices here are at most a few dozen wide.
pub fn eig_symmetric(m: &RealMatrix) -> SymmetricEigen {
    let n = m.dim;
    let mut a = m.symmetrized();
    let mut v = RealMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = RealMatrix::from_fn(n, |i, c| v[(i, order[c])]);
    SymmetricEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[1.0, -1.0])
    }

    fn lcg_matrix(n: usize, seed: u64, hermitian: bool) -> ComplexMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = ComplexMatrix::from_fn(n, |_, _| c(next(), next()));
        if hermitian {
            m.hermitian_part()
        } else {
            m
        }
    }

    #[test]
    fn zero_matrix_eigen() {
        let e = eig_hermitian(&ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(e.values, vec![0.0, 0.0]);
        assert!(e.vectors.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn pauli_spectra() {
        let e = eig_hermitian(&pauli_z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        // eigenvector for -1 is (1,-1)/√2 up to phase
        let v = e.vector(0);
        let ratio = v[1] / v[0];
        assert!((ratio - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        for (n, seed) in [(1, 1), (2, 2), (7, 3), (27, 4), (64, 5)] {
            let m = lcg_matrix(n, seed, true);
            let e = eig_hermitian(&m).unwrap();
            let err = e.reconstruct().distance(&m);
            assert!(err <= 1e-10 * m.frobenius_norm(), "n={n} err={err}");
            let gram = e.vectors.adjoint().matmul(&e.vectors);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let vals = eigvals_hermitian(&m).unwrap();
            for (a, b) in vals.iter().zip(&e.values) {
                assert!((a - b).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // projector of rank 3 in dim 6 rotated by a unitary
        let h = lcg_matrix(6, 11, true);
        let u = eig_hermitian(&h).unwrap().vectors;
        let p = u
            .matmul(&ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]))
            .matmul(&u.adjoint());
        let e = eig_hermitian(&p).unwrap();
        for (i, v) in e.values.iter().enumerate() {
            let want = if i < 3 { 0.0 } else { 1.0 };
            assert!((v - want).abs() < 1e-12);
        }
        assert!(e.reconstruct().distance(&p) < 1e-12);
    }

    #[test]
    fn trace_norm_cases() {
        assert!((trace_norm(&ComplexMatrix::from_real_diag(&[1.0, -2.0])) - 3.0).abs() < 1e-14);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3)), 0.0);
        let u = eig_hermitian(&lcg_matrix(5, 9, true)).unwrap().vectors;
        assert!((trace_norm(&u) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_unitary_invariance() {
        let m = lcg_matrix(6, 21, false);
        let u = eig_hermitian(&lcg_matrix(6, 22, true)).unwrap().vectors;
        let v = eig_hermitian(&lcg_matrix(6, 23, true)).unwrap().vectors;
        let t = trace_norm(&m);
        assert!((t - trace_norm(&m.adjoint())).abs() < 1e-9);
        assert!((t - trace_norm(&u.matmul(&m).matmul(&v))).abs() < 1e-9);
    }

    #[test]
    fn spectral_map_cases() {
        let z = pauli_z();
        assert!(spectral_map(&z, |x| x).unwrap().max_abs_diff(&z) < 1e-14);
        let e0 = spectral_map(&ComplexMatrix::zeros(3), f64::exp).unwrap();
        assert!(e0.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        let sq = spectral_map(&pauli_x(), |x| x * x).unwrap();
        assert!(sq.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn exp_determinant_identity() {
        for n in [2, 5, 16] {
            let m = lcg_matrix(n, 40 + n as u64, true);
            let e = eig_hermitian(&spectral_map(&m, f64::exp).unwrap()).unwrap();
            let logdet: f64 = e.values.iter().map(|v| v.ln()).sum();
            let tr = m.trace().re;
            assert!(((logdet - tr) / tr.abs().max(1.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn kron_cases() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&pauli_z(), &pauli_z()),
            ComplexMatrix::from_real_diag(&[1.0, -1.0, -1.0, 1.0])
        );
        // trace(a⊗b) = trace(a) trace(b), checked against explicit summation
        let a = lcg_matrix(3, 50, false);
        let b = lcg_matrix(3, 51, false);
        let k = kron(&a, &b);
        let mut direct = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                direct += a[(i, i)] * b[(j, j)];
            }
        }
        assert!((k.trace() - direct).norm() < 1e-14);
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-14);
    }

    #[test]
    fn kron_mixed_product() {
        let (a, b, c2, d) = (
            lcg_matrix(2, 60, false),
            lcg_matrix(3, 61, false),
            lcg_matrix(2, 62, false),
            lcg_matrix(3, 63, false),
        );
        let lhs = kron(&a, &b).matmul(&kron(&c2, &d));
        let rhs = kron(&a.matmul(&c2), &b.matmul(&d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn cholesky_threshold() {
        let m = ComplexMatrix::from_real_diag(&[-0.5, 0.2, 1.0]);
        assert!(has_eigenvalue_below(&m, -1e-9));
        assert!(!has_eigenvalue_below(&m, -0.6));
        let h = lcg_matrix(20, 70, true);
        let lo = min_eigenvalue(&h).unwrap();
        assert!(has_eigenvalue_below(&h, lo + 1e-8));
        assert!(!has_eigenvalue_below(&h, lo - 1e-8));
    }

    #[test]
    fn weighted_gram_matches_matmul() {
        let h = lcg_matrix(9, 80, true);
        let e = eig_hermitian(&h).unwrap();
        let w: Vec<f64> = (0..9).map(|i| if i % 3 == 0 { 0.0 } else { i as f64 - 4.0 }).collect();
        let direct = e
            .vectors
            .matmul(&ComplexMatrix::from_real_diag(&w))
            .matmul(&e.vectors.adjoint());
        assert!(weighted_gram(&e.vectors, &w).max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn jacobi_symmetric() {
        let m = RealMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ])
        .unwrap();
        let e = eig_symmetric(&m);
        let want = [-1.0, 1.0, 3.0];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let rec = e
            .vectors
            .matmul(&RealMatrix::from_diag(&e.values))
            .matmul(&e.vectors.transpose());
        assert!(rec.max_abs_diff(&m) < 1e-14);
        assert!(e.vectors.orthogonality_defect() < 1e-14);
    }
}
