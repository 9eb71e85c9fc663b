use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FockVector;
use crate::{Error, Result};

/// Entries of a Hermitian-flagged operator must satisfy `|A - A†| <= HERMITIAN_TOL`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Complex sparse matrix in compressed-row form.
///
/// Entries within a row are sorted by column and duplicates are summed on
/// construction, so identical inputs always give identical storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    hermitian: bool,
}

impl SparseOperator {
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= dim || c >= dim {
                return Err(Error::arg(format!("entry ({r}, {c}) outside a {dim}x{dim} operator")));
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            vals,
            hermitian: false,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim).collect(),
            vals: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the Hermitian flag after checking the defect against [`HERMITIAN_TOL`].
    pub fn into_hermitian(mut self) -> Result<Self> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::arg(format!("operator is not Hermitian (defect {defect:e})")));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim, "operator/vector dimension mismatch");
        assert_eq!(y.len(), self.dim, "operator/vector dimension mismatch");
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yr = acc;
        }
    }

    pub fn apply_slice(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        FockVector::new(self.apply_slice(v.amplitudes()))
    }

    /// ⟨ψ, A ψ⟩.
    pub fn expectation(&self, v: &FockVector) -> Complex64 {
        let av = self.apply_slice(v.amplitudes());
        v.amplitudes().iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self.entries().map(|(r, c, v)| (c, r, v.conj())).collect();
        let mut out = Self::from_triplets(self.dim, triplets).expect("adjoint keeps indices in range");
        out.hermitian = self.hermitian;
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out.hermitian = self.hermitian && s.im == 0.0;
        out
    }

    /// Σ_j c_j A_j. The Hermitian flag is set when every term is Hermitian
    /// with a real coefficient.
    pub fn linear_combination(dim: usize, terms: &[(Complex64, &SparseOperator)]) -> Result<Self> {
        let mut triplets = Vec::new();
        let mut hermitian = true;
        for (c, op) in terms {
            if op.dim != dim {
                return Err(Error::arg(format!("operator of dimension {} in a sum of dimension {dim}", op.dim)));
            }
            hermitian &= op.hermitian && c.im == 0.0;
            triplets.extend(op.entries().map(|(r, col, v)| (r, col, c * v)));
        }
        let mut out = Self::from_triplets(dim, triplets)?;
        out.hermitian = hermitian;
        Ok(out)
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(self.dim, &[(one, self), (one, other)])
    }

    /// Matrix product `self · other` within the truncated space.
    pub fn matmul(&self, other: &SparseOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::arg("matmul dimension mismatch"));
        }
        let mut triplets = Vec::new();
        let mut acc: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.dim];
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.vals[k];
                let mid = self.cols[k];
                for kk in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.cols[kk];
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * other.vals[kk];
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = Complex64::new(0.0, 0.0);
                mark[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.dim, triplets)
    }

    /// max |A_ij − conj(A_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        for (r, c, v) in self.entries() {
            defect = defect.max((v - self.get(c, r).conj()).norm());
        }
        defect
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Real diagonal of the operator.
    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r).re).collect()
    }
}
