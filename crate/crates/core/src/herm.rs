//! Hermitian matrices, tensor-factor layouts, partial traces and Kronecker
//! products.
//!
//! [`HermitianMatrix`] is the universal carrier for Choi matrices, tester
//! elements, dual variables and marginals. Hermitian symmetry is enforced on
//! ingestion by symmetrizing `(H + H†)/2`; inputs that are asymmetric beyond
//! tolerance are rejected. All operations here preserve exact symmetry of the
//! stored entries, so downstream code never re-checks.

use num_complex::Complex64;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Asymmetry above this (relative to scale) is rejected outright.
const ASYM_REJECT: f64 = 1e-6;
/// Asymmetry above this is silently repaired but logged.
const ASYM_WARN: f64 = 1e-9;

/// Dense complex Hermitian matrix, row-major.
///
/// Invariant: `entries[i][j] == conj(entries[j][i])` exactly (enforced by
/// construction), `dim >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Ingest raw entries; symmetrizes `(H + H†)/2`, warns above 1e-9
    /// asymmetry and rejects above 1e-6 (relative to the matrix scale).
    pub fn from_entries(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be >= 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        let m = ComplexMatrix::from_rows(
            (0..dim)
                .map(|i| data[i * dim..(i + 1) * dim].to_vec())
                .collect(),
        )?;
        Self::from_cmatrix(&m)
    }

    /// Ingest a square [`ComplexMatrix`] with the same symmetrization rules.
    pub fn from_cmatrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimMismatch("matrix is not square".into()));
        }
        let asym = m.asymmetry();
        let scale = m.frob_norm().max(1.0);
        if asym > ASYM_REJECT * scale {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        if asym > ASYM_WARN * scale {
            log::warn!(
                "symmetrizing matrix with asymmetry {asym:.3e} (scale {scale:.3e})"
            );
        }
        let dim = m.rows();
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(m.get(i, i).re, 0.0);
            for j in (i + 1)..dim {
                let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                data[i * dim + j] = v;
                data[j * dim + i] = v.conj();
            }
        }
        Ok(Self { dim, data })
    }

    /// Internal constructor for entries already known to be exactly symmetric.
    pub(crate) fn from_raw_symmetric(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim])
    }

    pub fn diag(d: &[f64]) -> Self {
        let dim = d.len();
        let mut m = Self::zeros(dim);
        for (i, v) in d.iter().enumerate() {
            m.data[i * dim + i] = Complex64::new(*v, 0.0);
        }
        m
    }

    /// Rank-one projector |v><v| onto the (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = v[i] * v[j].conj();
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Set the (i, j) entry and mirror it to (j, i); the diagonal keeps only
    /// the real part.
    pub fn set_sym(&mut self, i: usize, j: usize, v: Complex64) {
        if i == j {
            self.data[i * self.dim + i] = Complex64::new(v.re, 0.0);
        } else {
            self.data[i * self.dim + j] = v;
            self.data[j * self.dim + i] = v.conj();
        }
    }

    pub fn to_cmatrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch("hermitian addition".into()));
        }
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_raw_symmetric(self.dim, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Real scalar multiple (complex scaling would break symmetry).
    pub fn scale(&self, s: f64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self::from_raw_symmetric(self.dim, data)
    }

    /// Real linear combination `sum_i coeffs[i] * mats[i]`.
    pub fn lincomb(terms: &[(f64, &Self)]) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, m)| m.dim)
            .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut acc = Self::zeros(dim);
        for (c, m) in terms {
            acc = acc.add(&m.scale(*c))?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Hilbert-Schmidt inner product `<X, Y> = Tr(XY)`, real for Hermitian
    /// arguments (the imaginary part cancels exactly by symmetry).
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch("inner product".into()));
        }
        // Tr(XY) = sum_ij X[i][j] * conj(Y[i][j]) for Hermitian Y.
        let mut acc = 0.0;
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            acc += a.re * b.re + a.im * b.im;
        }
        Ok(acc)
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product; `self` owns the slower-varying index.
    pub fn kron(&self, other: &Self) -> Self {
        let d1 = self.dim;
        let d2 = other.dim;
        let dim = d1 * d2;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i1 in 0..d1 {
            for j1 in 0..d1 {
                let a = self.get(i1, j1);
                if a == Complex64::ZERO {
                    continue;
                }
                for i2 in 0..d2 {
                    for j2 in 0..d2 {
                        data[(i1 * d2 + i2) * dim + (j1 * d2 + j2)] = a * other.get(i2, j2);
                    }
                }
            }
        }
        Self::from_raw_symmetric(dim, data)
    }

    /// Entrywise transpose (stays Hermitian: conj of every entry).
    pub fn transpose(&self) -> Self {
        let data = self.data.iter().map(|v| v.conj()).collect();
        Self::from_raw_symmetric(self.dim, data)
    }

    /// Conjugation `U self U†` (or `U selfᵀ U†` when `transpose_first`).
    pub fn conjugate_by(&self, u: &ComplexMatrix, transpose_first: bool) -> Result<Self> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(Error::DimMismatch("conjugation".into()));
        }
        let base = if transpose_first {
            self.transpose()
        } else {
            self.clone()
        };
        let m = u.matmul(&base.to_cmatrix())?.matmul(&u.adjoint())?;
        // Exactly Hermitian in exact arithmetic; repair roundoff.
        let dim = self.dim;
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(m.get(i, i).re, 0.0);
            for j in (i + 1)..dim {
                let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                data[i * dim + j] = v;
                data[j * dim + i] = v.conj();
            }
        }
        Ok(Self { dim, data })
    }
}

/// Ordered step dimensions of a process layout.
///
/// Step `t` (1-based) has input dimension `n_v(t)` and output dimension
/// `n_w(t)`. The flattened index of the full space enumerates factors
/// left-to-right `W_T, V_T, ..., W_1, V_1`, with the rightmost (`V_1`)
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemLayout {
    steps: Vec<(usize, usize)>, // (n_v, n_w) for t = 1..T
}

impl SystemLayout {
    pub fn new(steps: Vec<(usize, usize)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one step".into()));
        }
        if steps.iter().any(|&(v, w)| v == 0 || w == 0) {
            return Err(Error::InvalidArgument("all step dimensions must be >= 1".into()));
        }
        Ok(Self { steps })
    }

    /// Single step with input dim `n_v`, output dim `n_w`.
    pub fn single(n_v: usize, n_w: usize) -> Self {
        Self {
            steps: vec![(n_v, n_w)],
        }
    }

    pub fn t_count(&self) -> usize {
        self.steps.len()
    }

    /// Input dimension of step `t` (1-based).
    pub fn n_v(&self, t: usize) -> usize {
        self.steps[t - 1].0
    }

    /// Output dimension of step `t` (1-based).
    pub fn n_w(&self, t: usize) -> usize {
        self.steps[t - 1].1
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn total_dim(&self) -> usize {
        self.steps.iter().map(|&(v, w)| v * w).product()
    }

    /// Product of the input dimensions `prod_t n_v(t)`.
    pub fn input_dim_product(&self) -> usize {
        self.steps.iter().map(|&(v, _)| v).product()
    }

    /// Factor dimensions in flattened-index order `[W_T, V_T, ..., W_1, V_1]`.
    pub fn factor_dims(&self) -> Vec<usize> {
        let mut dims = Vec::with_capacity(2 * self.steps.len());
        for &(v, w) in self.steps.iter().rev() {
            dims.push(w);
            dims.push(v);
        }
        dims
    }

    /// Dimensions of the truncated space `W_t ⊗ V_t ⊗ ... ⊗ W_1 ⊗ V_1`.
    pub fn level_dims(&self, t: usize) -> Vec<usize> {
        let mut dims = Vec::new();
        for s in (1..=t).rev() {
            dims.push(self.n_w(s));
            dims.push(self.n_v(s));
        }
        dims
    }

    /// Total dimension of the level-`t` truncated space (1 for `t = 0`).
    pub fn level_dim(&self, t: usize) -> usize {
        self.level_dims(t).iter().product::<usize>().max(1)
    }

    /// Concatenate two layouts: `self` supplies the later steps.
    pub fn concat(later: &SystemLayout, earlier: &SystemLayout) -> SystemLayout {
        let mut steps = earlier.steps.clone();
        steps.extend_from_slice(&later.steps);
        SystemLayout { steps }
    }
}

/// Partial trace over the factors listed in `drop` (indices into `dims`,
/// which lists factor dimensions slowest-first). Keeps the remaining factors
/// in their original order.
pub fn partial_trace(x: &HermitianMatrix, dims: &[usize], drop: &[usize]) -> Result<HermitianMatrix> {
    let total: usize = dims.iter().product();
    if x.dim() != total {
        return Err(Error::DimMismatch(format!(
            "matrix dim {} != layout product {}",
            x.dim(),
            total
        )));
    }
    if drop.iter().any(|&f| f >= dims.len()) {
        return Err(Error::InvalidArgument("factor index out of range".into()));
    }
    let nf = dims.len();
    let dropped = |f: usize| drop.contains(&f);

    // Strides of each factor in the flattened index (rightmost fastest).
    let mut strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }

    let keep: Vec<usize> = (0..nf).filter(|f| !dropped(*f)).collect();
    let kept_dim: usize = keep.iter().map(|&f| dims[f]).product::<usize>().max(1);
    let drop_dim: usize = drop.iter().map(|&f| dims[f]).product::<usize>().max(1);

    // Enumerate kept and dropped multi-indices via mixed-radix counters.
    let expand = |counter: usize, factors: &[usize]| -> usize {
        let mut rem = counter;
        let mut flat = 0usize;
        for &f in factors.iter().rev() {
            let d = dims[f];
            flat += (rem % d) * strides[f];
            rem /= d;
        }
        flat
    };

    let mut out = HermitianMatrix::zeros(kept_dim);
    for ki in 0..kept_dim {
        let base_i = expand(ki, &keep);
        for kj in ki..kept_dim {
            let base_j = expand(kj, &keep);
            let mut acc = Complex64::ZERO;
            for di in 0..drop_dim {
                let off = expand(di, drop);
                acc += x.get(base_i + off, base_j + off);
            }
            out.set_sym(ki, kj, acc);
        }
    }
    Ok(out)
}

/// Embed a matrix as `I_{n} ⊗ x` (identity on a new slowest factor).
pub fn kron_identity_left(n: usize, x: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::identity(n).kron(x)
}

/// Reorder tensor factors: `perm[k]` names the source factor that moves to
/// position `k` of the output.
pub fn permute_factors(
    x: &HermitianMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<HermitianMatrix> {
    let total: usize = dims.iter().product();
    if x.dim() != total || perm.len() != dims.len() {
        return Err(Error::DimMismatch("permute_factors".into()));
    }
    let nf = dims.len();
    let mut src_strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        src_strides[f] = src_strides[f + 1] * dims[f + 1];
    }
    let out_dims: Vec<usize> = perm.iter().map(|&f| dims[f]).collect();
    let mut out_strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        out_strides[f] = out_strides[f + 1] * out_dims[f + 1];
    }
    // Map each flat output index to its source index.
    let mut src_of = vec![0usize; total];
    for (out_idx, src) in src_of.iter_mut().enumerate() {
        let mut s = 0usize;
        for k in 0..nf {
            let digit = (out_idx / out_strides[k]) % out_dims[k];
            s += digit * src_strides[perm[k]];
        }
        *src = s;
    }
    let mut out = HermitianMatrix::zeros(total);
    for i in 0..total {
        for j in i..total {
            out.set_sym(i, j, x.get(src_of[i], src_of[j]));
        }
    }
    Ok(out)
}
