//! Dense complex matrices in split (re, im) layout, sparse constant
//! matrices, and trace-of-product evaluation.
//!
//! The split layout lets a complex product run as three real GEMMs
//! (Karatsuba-style), which is what makes desk-scale Monte Carlo at side 256
//! tolerable. Traces of words never materialize the full product: the word
//! is split in half, each half is multiplied out, and the two halves are
//! contracted entrywise, saving one GEMM and letting sparse constants stay
//! sparse.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::perm::EntryPermutation;

/// A dense `n×n` complex matrix, row-major, stored as separate real and
/// imaginary planes.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            re: vec![0.0; n * n],
            im: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let z = f(r, c);
                m.re[r * n + c] = z.re;
                m.im[r * n + c] = z.im;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based (row, col).
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        Complex64::new(self.re[r * self.n + c], self.im[r * self.n + c])
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.re[r * self.n + c] = z.re;
        self.im[r * self.n + c] = z.im;
    }

    /// `[A^σ]_{ij} = A_{σ(i,j)}`: relabels entries by the permutation.
    pub fn permuted(&self, sigma: &EntryPermutation) -> Result<CMat> {
        if sigma.n() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: sigma.n(),
            });
        }
        let n = self.n;
        let mut out = CMat::zeros(n);
        for idx in 0..n * n {
            let src = sigma.apply_flat(idx);
            out.re[idx] = self.re[src];
            out.im[idx] = self.im[src];
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.re[r * n + c] = self.re[c * n + r];
                out.im[r * n + c] = -self.im[c * n + r];
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n;
        for r in 0..n {
            for c in r..n {
                if self.re[r * n + c] != self.re[c * n + r]
                    || self.im[r * n + c] != -self.im[c * n + r]
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.n;
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..n {
            re += self.re[k * n + k];
            im += self.im[k * n + k];
        }
        Complex64::new(re, im)
    }

    /// `tr(A)/n`, so that the identity has normalized trace 1.
    pub fn normalized_trace(&self) -> Complex64 {
        self.trace() / self.n as f64
    }

    /// Dense product via three real GEMMs.
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut p1 = vec![0.0; n * n]; // Ar·Br
        let mut p2 = vec![0.0; n * n]; // Ai·Bi
        let mut p3 = vec![0.0; n * n]; // (Ar+Ai)·(Br+Bi)
        dgemm(n, &self.re, &rhs.re, &mut p1);
        dgemm(n, &self.im, &rhs.im, &mut p2);
        let a_sum: Vec<f64> = self.re.iter().zip(&self.im).map(|(a, b)| a + b).collect();
        let b_sum: Vec<f64> = rhs.re.iter().zip(&rhs.im).map(|(a, b)| a + b).collect();
        dgemm(n, &a_sum, &b_sum, &mut p3);
        let re = p1.iter().zip(&p2).map(|(a, b)| a - b).collect();
        let im = p3
            .iter()
            .zip(p1.iter().zip(&p2))
            .map(|(s, (a, b))| s - a - b)
            .collect();
        CMat { n, re, im }
    }

    /// Schoolbook product, kept as the reference implementation.
    pub fn mul_naive(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

fn dgemm(n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    unsafe {
        matrixmultiply::dgemm(
            n,
            n,
            n,
            1.0,
            a.as_ptr(),
            n as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// A real sparse matrix given by coordinate triples; the constant matrices
/// of interest have at most two entries per row.
#[derive(Debug, Clone)]
pub struct SparseMat {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMat {
    pub fn new(n: usize, entries: Vec<(usize, usize, f64)>) -> Self {
        debug_assert!(entries.iter().all(|&(r, c, _)| r < n && c < n));
        SparseMat { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat::new(n, (0..n).map(|k| (k, k, 1.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_dense(&self) -> CMat {
        let mut out = CMat::zeros(self.n);
        for &(r, c, v) in &self.entries {
            out.re[r * self.n + c] += v;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        let t: f64 = self
            .entries
            .iter()
            .filter(|(r, c, _)| r == c)
            .map(|(_, _, v)| v)
            .sum();
        Complex64::new(t, 0.0)
    }

    /// `dense · self`, O(n · nnz).
    fn mul_left_dense(&self, lhs: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for &(r, c, v) in &self.entries {
            for i in 0..n {
                out.re[i * n + c] += lhs.re[i * n + r] * v;
                out.im[i * n + c] += lhs.im[i * n + r] * v;
            }
        }
        out
    }

    /// `self · dense`, O(n · nnz).
    fn mul_right_dense(&self, rhs: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for &(r, c, v) in &self.entries {
            for j in 0..n {
                out.re[r * n + j] += v * rhs.re[c * n + j];
                out.im[r * n + j] += v * rhs.im[c * n + j];
            }
        }
        out
    }
}

/// One factor of a word product, borrowed from caller storage.
#[derive(Debug, Clone, Copy)]
pub enum FactorRef<'a> {
    Dense(&'a CMat),
    Sparse(&'a SparseMat),
}

impl FactorRef<'_> {
    fn n(&self) -> usize {
        match self {
            FactorRef::Dense(m) => m.n(),
            FactorRef::Sparse(m) => m.n(),
        }
    }
}

enum Half<'a> {
    BorrowedDense(&'a CMat),
    BorrowedSparse(&'a SparseMat),
    Owned(CMat),
}

impl Half<'_> {
    fn as_dense(&self) -> Option<&CMat> {
        match self {
            Half::BorrowedDense(m) => Some(m),
            Half::Owned(m) => Some(m),
            Half::BorrowedSparse(_) => None,
        }
    }
}

fn product_of<'a>(factors: &[FactorRef<'a>]) -> Half<'a> {
    if factors.len() == 1 {
        return match factors[0] {
            FactorRef::Dense(m) => Half::BorrowedDense(m),
            FactorRef::Sparse(m) => Half::BorrowedSparse(m),
        };
    }
    let mut acc: Option<CMat> = None;
    let mut idx = 0;
    while idx < factors.len() {
        acc = Some(match (acc, factors[idx]) {
            (None, FactorRef::Dense(m)) => m.clone(),
            (None, FactorRef::Sparse(s)) => {
                // Fold a sparse head into the next factor directly.
                idx += 1;
                match factors.get(idx) {
                    Some(FactorRef::Dense(m)) => s.mul_right_dense(m),
                    Some(FactorRef::Sparse(t)) => s.mul_right_dense(&t.to_dense()),
                    None => s.to_dense(),
                }
            }
            (Some(a), FactorRef::Dense(m)) => a.mul(m),
            (Some(a), FactorRef::Sparse(s)) => s.mul_left_dense(&a),
        });
        idx += 1;
    }
    Half::Owned(acc.unwrap())
}

/// `tr(L·R) = Σ_{i,k} L[i,k]·R[k,i]` without forming `L·R`.
fn trace_contract(left: &Half<'_>, right: &Half<'_>) -> Complex64 {
    match (left, right) {
        (Half::BorrowedSparse(s), r) => {
            let d = r.as_dense().expect("two sparse halves are densified");
            let n = s.n();
            let mut acc = Complex64::new(0.0, 0.0);
            for &(i, k, v) in &s.entries {
                acc += v * d.get(k, i);
                let _ = n;
            }
            acc
        }
        (l, Half::BorrowedSparse(s)) => {
            let d = l.as_dense().expect("two sparse halves are densified");
            let mut acc = Complex64::new(0.0, 0.0);
            for &(k, i, v) in &s.entries {
                acc += d.get(i, k) * v;
            }
            acc
        }
        (l, r) => {
            let a = l.as_dense().unwrap();
            let b = r.as_dense().unwrap();
            let n = a.n();
            let mut re = 0.0;
            let mut im = 0.0;
            for i in 0..n {
                for k in 0..n {
                    let (ar, ai) = (a.re[i * n + k], a.im[i * n + k]);
                    let (br, bi) = (b.re[k * n + i], b.im[k * n + i]);
                    re += ar * br - ai * bi;
                    im += ar * bi + ai * br;
                }
            }
            Complex64::new(re, im)
        }
    }
}

/// Full (unnormalized) trace of the product of the factors, in order.
///
/// The word is split at the middle; each half is multiplied out and the two
/// halves are contracted. A word of length `m` therefore costs `m − 2` dense
/// products, and words like `A·Z·A·T` with sparse `Z, T` cost none.
pub fn trace_product(factors: &[FactorRef<'_>]) -> Result<Complex64> {
    if factors.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = factors[0].n();
    for f in factors {
        if f.n() != n {
            return Err(Error::SizeMismatch {
                left: n,
                right: f.n(),
            });
        }
    }
    if factors.len() == 1 {
        return Ok(match factors[0] {
            FactorRef::Dense(m) => m.trace(),
            FactorRef::Sparse(s) => s.trace(),
        });
    }
    // Sparse factors fold in O(n²); bias the split so they sit at a fold
    // boundary when the word is A Z A T-shaped anyway.
    let mid = factors.len().div_ceil(2);
    let (lhs, rhs) = factors.split_at(mid);
    let left = product_of(lhs);
    let right = product_of(rhs);
    // Two borrowed-sparse halves only happen for words of two sparse factors.
    if matches!(left, Half::BorrowedSparse(_)) && matches!(right, Half::BorrowedSparse(_)) {
        let dense = match right {
            Half::BorrowedSparse(s) => Half::Owned(s.to_dense()),
            _ => unreachable!(),
        };
        return Ok(trace_contract(&left, &dense));
    }
    Ok(trace_contract(&left, &right))
}
