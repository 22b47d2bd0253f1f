//! Dense complex tensors over explicit mode dimensions: inner products,
//! flattenings, matrix rank, and the higher-order singular value
//! decomposition (HOSVD).
//!
//! Conventions fixed here and inherited by every other module:
//!
//! * the inner product is linear in the first argument and conjugate-linear
//!   in the second, `<T, S> = sum T_idx * conj(S_idx)`;
//! * entries are stored row-major over modes in ascending order;
//! * flattening row/column indices are row-major over the ascending mode
//!   subset and its complement.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Shape of a `d`-mode tensor product space: one positive dimension per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument(
                "a tensor space needs at least one mode".into(),
            ));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "every mode dimension must be positive".into(),
            ));
        }
        let mut total = 1usize;
        for &n in &dims {
            total = total
                .checked_mul(n)
                .ok_or_else(|| Error::ResourceCap("total dimension overflows usize".into()))?;
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of modes `d`.
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Product of all mode dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Concatenates the mode lists (the horizontal product of spaces).
    pub fn horizontal(&self, other: &TensorSpace) -> TensorSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        TensorSpace { dims }
    }

    /// Multiplies dimensions mode by mode (the vertical product of spaces).
    pub fn vertical(&self, other: &TensorSpace) -> Result<TensorSpace> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "vertical product needs equal mode counts, got {} and {}",
                self.order(),
                other.order()
            )));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(&a, &b)| a * b)
            .collect();
        TensorSpace::new(dims)
    }

    /// Row-major linear index of a (0-based) multi-index.
    pub fn linear_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut lin = 0usize;
        for (i, &n) in idx.iter().zip(&self.dims) {
            debug_assert!(*i < n);
            lin = lin * n + i;
        }
        lin
    }

    /// Inverse of [`TensorSpace::linear_index`].
    pub fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dims.len()];
        for (slot, &n) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = lin % n;
            lin /= n;
        }
        idx
    }
}

/// Dense complex coefficient array over a [`TensorSpace`]; the universal
/// value type of the toolkit.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    space: TensorSpace,
    entries: Vec<C64>,
}

impl DenseTensor {
    pub fn zeros(space: TensorSpace) -> Self {
        let n = space.total_dim();
        Self {
            space,
            entries: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn from_entries(space: TensorSpace, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dims {:?}, got {}",
                space.total_dim(),
                space.dims(),
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "tensor entries must be finite".into(),
            ));
        }
        Ok(Self { space, entries })
    }

    pub fn from_fn(space: TensorSpace, f: impl Fn(&[usize]) -> C64) -> Self {
        let mut t = Self::zeros(space);
        for lin in 0..t.entries.len() {
            let idx = t.space.multi_index(lin);
            t.entries[lin] = f(&idx);
        }
        t
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.entries[self.space.linear_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C64) {
        let lin = self.space.linear_index(idx);
        self.entries[lin] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, c: C64) -> DenseTensor {
        DenseTensor {
            space: self.space.clone(),
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "subtraction needs matching spaces".into(),
            ));
        }
        Ok(DenseTensor {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [C64] {
        &mut self.entries
    }
}

/// `<T, S> = sum_idx T_idx * conj(S_idx)`, matching `trace(A B^*)` on matrices.
pub fn inner(t: &DenseTensor, s: &DenseTensor) -> Result<C64> {
    if t.space != s.space {
        return Err(Error::DimensionMismatch(
            "inner product needs matching spaces".into(),
        ));
    }
    Ok(t.entries
        .iter()
        .zip(&s.entries)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// The l2 norm `||T|| = sqrt(<T, T>)`.
pub fn frobenius_norm(t: &DenseTensor) -> f64 {
    t.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A tensor reshaped into a matrix over a bipartition of its modes.
#[derive(Clone, Debug)]
pub struct Flattening {
    pub row_modes: Vec<usize>,
    pub matrix: DMatrix<C64>,
}

fn check_row_modes(space: &TensorSpace, row_modes: &[usize]) -> Result<()> {
    let d = space.order();
    if row_modes.is_empty() || row_modes.len() >= d {
        return Err(Error::InvalidArgument(
            "row modes must be a nonempty proper subset of the modes".into(),
        ));
    }
    if row_modes.iter().any(|&m| m >= d) {
        return Err(Error::InvalidArgument(format!(
            "row mode out of range for a {d}-mode tensor"
        )));
    }
    if row_modes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "row modes must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Reshapes `t` into a matrix: rows run over the (0-based, ascending)
/// `row_modes`, columns over the complementary modes, both row-major.
pub fn flatten(t: &DenseTensor, row_modes: &[usize]) -> Result<Flattening> {
    check_row_modes(&t.space, row_modes)?;
    let dims = t.space.dims();
    let col_modes: Vec<usize> = (0..dims.len())
        .filter(|m| !row_modes.contains(m))
        .collect();
    let nrows: usize = row_modes.iter().map(|&m| dims[m]).product();
    let ncols: usize = col_modes.iter().map(|&m| dims[m]).product();
    let mut matrix = DMatrix::zeros(nrows, ncols);
    for lin in 0..t.entries.len() {
        let idx = t.space.multi_index(lin);
        let mut r = 0usize;
        for &m in row_modes {
            r = r * dims[m] + idx[m];
        }
        let mut c = 0usize;
        for &m in &col_modes {
            c = c * dims[m] + idx[m];
        }
        matrix[(r, c)] = t.entries[lin];
    }
    Ok(Flattening {
        row_modes: row_modes.to_vec(),
        matrix,
    })
}

fn singular_values_desc(m: &DMatrix<C64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Number of singular values exceeding `tol` times the largest one.
/// `tol` must be positive; the zero matrix has rank 0.
pub fn matrix_rank(m: &DMatrix<C64>, tol: f64) -> usize {
    assert!(tol > 0.0, "rank tolerance must be positive");
    let vals = singular_values_desc(m);
    let max = vals.first().copied().unwrap_or(0.0);
    vals.iter().filter(|&&s| s > tol * max).count()
}

/// Largest singular value of the chosen flattening. Any pure unit tensor is
/// a unit vector of the flattened bipartite space, so this upper-bounds the
/// tensor spectral norm.
pub fn flattening_spectral_norm(t: &DenseTensor, row_modes: &[usize]) -> Result<f64> {
    let f = flatten(t, row_modes)?;
    Ok(singular_values_desc(&f.matrix).first().copied().unwrap_or(0.0))
}

/// HOSVD output: per-mode orthonormal bases (columns), the coefficient core
/// in those bases, and the nonincreasing mode singular values.
#[derive(Clone, Debug)]
pub struct HosvdResult {
    pub bases: Vec<DMatrix<C64>>,
    pub core: DenseTensor,
    pub mode_singular_values: Vec<Vec<f64>>,
}

impl HosvdResult {
    /// Applies the bases to the core, reproducing the original tensor.
    pub fn reassemble(&self) -> DenseTensor {
        let mut t = self.core.clone();
        for (mode, basis) in self.bases.iter().enumerate() {
            t = mode_apply(&t, mode, basis);
        }
        t
    }
}

/// Multiplies `t` along `mode` by the matrix `a` (rows of `a` index the new
/// mode): `out[.., k, ..] = sum_i a[(k, i)] t[.., i, ..]`.
pub fn mode_apply(t: &DenseTensor, mode: usize, a: &DMatrix<C64>) -> DenseTensor {
    let dims = t.space.dims();
    assert_eq!(a.ncols(), dims[mode], "mode product dimension mismatch");
    let mut new_dims = dims.to_vec();
    new_dims[mode] = a.nrows();
    let out_space = TensorSpace::new(new_dims).expect("valid dims");
    let mut out = DenseTensor::zeros(out_space);
    for lin in 0..t.entries.len() {
        let v = t.entries[lin];
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let mut idx = t.space.multi_index(lin);
        let i = idx[mode];
        for k in 0..a.nrows() {
            idx[mode] = k;
            let out_lin = out.space.linear_index(&idx);
            out.entries[out_lin] += a[(k, i)] * v;
        }
    }
    out
}

/// Rotates each column so its largest-magnitude entry is real positive.
/// Resolves the sign/phase ambiguity of singular vectors deterministically.
fn fix_column_phases(m: &mut DMatrix<C64>) {
    for c in 0..m.ncols() {
        let mut best = 0usize;
        let mut best_mag = -1.0f64;
        for r in 0..m.nrows() {
            let mag = m[(r, c)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        if best_mag <= 1e-300 {
            continue;
        }
        let phase = m[(best, c)] / best_mag;
        let rot = phase.conj();
        for r in 0..m.nrows() {
            m[(r, c)] *= rot;
        }
    }
}

/// Left singular vectors (completed to a full orthonormal basis of C^n)
/// together with the descending singular values, zero-padded to length n.
fn full_left_basis(m: &DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>) {
    let n = m.nrows();
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut cols: Vec<(f64, DVector<C64>)> = (0..u.ncols())
        .map(|c| (svd.singular_values[c], u.column(c).into_owned()))
        .collect();
    cols.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut basis: Vec<DVector<C64>> = cols.iter().map(|(_, v)| v.clone()).collect();
    let mut svals: Vec<f64> = cols.iter().map(|(s, _)| *s).collect();

    // Complete to a full basis via modified Gram-Schmidt over standard basis
    // vectors; only needed when the flattening has fewer columns than rows.
    let mut e = 0usize;
    while basis.len() < n {
        assert!(e < n, "basis completion ran out of candidates");
        let mut v = DVector::from_fn(n, |r, _| {
            if r == e {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        for b in &basis {
            let overlap: C64 = v.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / C64::new(norm, 0.0));
            svals.push(0.0);
        }
        e += 1;
    }

    let mut full = DMatrix::from_fn(n, n, |r, c| basis[c][r]);
    fix_column_phases(&mut full);
    (full, svals)
}

/// Per-mode basis change making the mode-k slices pairwise orthogonal with
/// nonincreasing norms; the slice norms are the mode singular values.
pub fn hosvd(t: &DenseTensor) -> Result<HosvdResult> {
    if t.is_zero() {
        return Err(Error::DegenerateInput("hosvd of the zero tensor".into()));
    }
    let d = t.space.order();
    let mut bases = Vec::with_capacity(d);
    let mut mode_singular_values = Vec::with_capacity(d);
    for mode in 0..d {
        let (basis, svals) = if d == 1 {
            // Single-mode tensor: the flattening machinery needs a proper
            // bipartition, so treat the vector case directly.
            let m = DMatrix::from_fn(t.space.dims()[0], 1, |r, _| t.entries[r]);
            full_left_basis(&m)
        } else {
            let f = flatten(t, &[mode])?;
            full_left_basis(&f.matrix)
        };
        bases.push(basis);
        mode_singular_values.push(svals);
    }
    // Core coefficients: contract each mode with the conjugate basis.
    let mut core = t.clone();
    for (mode, basis) in bases.iter().enumerate() {
        let uh = basis.adjoint();
        core = mode_apply(&core, mode, &uh);
    }
    Ok(HosvdResult {
        bases,
        core,
        mode_singular_values,
    })
}
