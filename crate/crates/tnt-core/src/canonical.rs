//! Constructors for the canonical tensor zoo: matrix multiplication
//! tensors, finite-group multiplication tensors with their discrete Fourier
//! decompositions, the determinant and permanent, and the explicit low-rank
//! decompositions that come with them.
//!
//! Where a construction is t-orthogonal for structural reasons, the returned
//! tuple or decomposition carries the corresponding certificate, assembled
//! through the horizontal/vertical product rules rather than asserted ad hoc.

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;

use crate::decomposition::{
    horizontal_product, vertical_product, Decomposition, PureTensor, PureTuple, Term,
};
use crate::error::{Error, Result};
use crate::orthogonality::{try_certify_orthonormal, TOrthoCert};
use crate::tensor::{flatten, matrix_rank, DenseTensor, TensorSpace};

/// Determinant/permanent mode count cap (n^n entries).
const PERM_TENSOR_CAP: usize = 6;
/// Group order cap for the dense multiplication tensor (n^3 entries).
const GROUP_ORDER_CAP: usize = 32;
/// Matrix multiplication cap: (pqr)^2 dense entries must stay desk-scale.
const MATMUL_PQR_CAP: usize = 64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The set `{1..n}` as the certified orthonormal basis tuple of C^n.
fn basis_tuple(n: usize) -> PureTuple {
    let members = (0..n)
        .map(|i| PureTensor::basis(&[n], &[i]).expect("valid basis index"))
        .collect();
    let tuple = PureTuple::new(members).expect("nonempty");
    if n == 1 {
        // A single unit vector is trivially orthonormal.
        return tuple.with_cert(TOrthoCert::orthonormal());
    }
    try_certify_orthonormal(&tuple, 1e-12).expect("standard basis is orthonormal")
}

/// `count` copies of the unit scalar in C^1; unit members, no certificate.
fn ones_tuple(count: usize) -> PureTuple {
    let members = vec![PureTensor::new(vec![vec![re(1.0)]]).expect("valid"); count];
    PureTuple::new(members).expect("nonempty")
}

/// The matrix multiplication tensor `M_{p,q,r} = sum e_{i,j} (x) e_{j,k}
/// (x) e_{k,i}` of shape `(pq, qr, rp)`, together with its `pqr`-term
/// decomposition carrying the structural 2-orthogonality certificate.
pub fn matmul_tensor(p: usize, q: usize, r: usize) -> Result<(DenseTensor, Decomposition)> {
    if p == 0 || q == 0 || r == 0 {
        return Err(Error::InvalidArgument("p, q, r must be positive".into()));
    }
    if p * q * r > MATMUL_PQR_CAP {
        return Err(Error::ResourceCap(format!(
            "pqr = {} exceeds the matrix multiplication cap {MATMUL_PQR_CAP}",
            p * q * r
        )));
    }
    let dims = vec![p * q, q * r, r * p];
    let space = TensorSpace::new(dims.clone())?;
    let mut dense = DenseTensor::zeros(space.clone());
    let mut terms = Vec::with_capacity(p * q * r);
    for i in 0..p {
        for j in 0..q {
            for k in 0..r {
                let idx = [i * q + j, j * r + k, k * p + i];
                dense.set(&idx, re(1.0));
                terms.push(Term {
                    coeff: re(1.0),
                    pure: PureTensor::basis(&dims, &idx)?,
                });
            }
        }
    }
    let dec = Decomposition::new(space, terms)?.with_cert(matmul_cert(p, q, r)?);
    Ok((dense, dec))
}

/// Composes the certificate for the matrix multiplication tuple: three
/// mode-aligned pair tuples, each 2-orthogonal as a horizontal product of
/// orthonormal tuples, combined with vertical products. Transposing the
/// third mode (`e_{i,k}` vs `e_{k,i}`) is a per-mode unitary change and
/// leaves every measure, hence the certificate, intact.
fn matmul_cert(p: usize, q: usize, r: usize) -> Result<TOrthoCert> {
    let pair_p = horizontal_product(
        &horizontal_product(&basis_tuple(p), &ones_tuple(p))?,
        &basis_tuple(p),
    )?;
    let pair_q = horizontal_product(
        &horizontal_product(&basis_tuple(q), &basis_tuple(q))?,
        &ones_tuple(q),
    )?;
    let pair_r = horizontal_product(
        &horizontal_product(&ones_tuple(r), &basis_tuple(r))?,
        &basis_tuple(r),
    )?;
    let product = vertical_product(&vertical_product(&pair_p, &pair_q)?, &pair_r)?;
    product
        .cert()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("product certificate missing".into()))
}

/// The mode-aligned pair tuples whose vertical product is the matrix
/// multiplication tuple (up to transposing the third mode).
pub fn matmul_pair_tuples(p: usize, q: usize, r: usize) -> Result<(PureTuple, PureTuple, PureTuple)> {
    Ok((
        horizontal_product(
            &horizontal_product(&basis_tuple(p), &ones_tuple(p))?,
            &basis_tuple(p),
        )?,
        horizontal_product(
            &horizontal_product(&basis_tuple(q), &basis_tuple(q))?,
            &ones_tuple(q),
        )?,
        horizontal_product(
            &horizontal_product(&ones_tuple(r), &basis_tuple(r))?,
            &basis_tuple(r),
        )?,
    ))
}

/// Strassen's seven-term decomposition of `M_{2,2,2}`, transcribed with
/// integer entries; assembly reproduces the dense tensor exactly.
pub fn strassen_decomposition() -> Decomposition {
    // Factor vector over C^{2x2} from (row, col, weight) triples, 1-based.
    let f = |entries: &[(usize, usize, f64)]| -> Vec<C64> {
        let mut v = vec![re(0.0); 4];
        for &(a, b, w) in entries {
            v[(a - 1) * 2 + (b - 1)] += re(w);
        }
        v
    };
    let term = |m1: Vec<C64>, m2: Vec<C64>, m3: Vec<C64>| Term {
        coeff: re(1.0),
        pure: PureTensor::new(vec![m1, m2, m3]).expect("length-4 factors"),
    };
    let terms = vec![
        term(
            f(&[(1, 1, 1.0), (2, 2, 1.0)]),
            f(&[(1, 1, 1.0), (2, 2, 1.0)]),
            f(&[(1, 1, 1.0), (2, 2, 1.0)]),
        ),
        term(
            f(&[(2, 1, 1.0), (2, 2, -1.0)]),
            f(&[(1, 1, 1.0)]),
            f(&[(1, 2, 1.0), (2, 2, 1.0)]),
        ),
        term(
            f(&[(1, 2, 1.0), (2, 2, 1.0)]),
            f(&[(2, 1, 1.0), (2, 2, -1.0)]),
            f(&[(1, 1, 1.0)]),
        ),
        term(
            f(&[(1, 1, 1.0), (2, 1, 1.0)]),
            f(&[(1, 2, 1.0), (1, 1, -1.0)]),
            f(&[(2, 2, 1.0)]),
        ),
        term(
            f(&[(1, 2, 1.0), (1, 1, -1.0)]),
            f(&[(2, 2, 1.0)]),
            f(&[(1, 1, 1.0), (2, 1, 1.0)]),
        ),
        term(
            f(&[(2, 2, 1.0)]),
            f(&[(1, 1, 1.0), (2, 1, 1.0)]),
            f(&[(1, 2, 1.0), (1, 1, -1.0)]),
        ),
        term(
            f(&[(1, 1, 1.0)]),
            f(&[(1, 2, 1.0), (2, 2, 1.0)]),
            f(&[(2, 1, 1.0), (2, 2, -1.0)]),
        ),
    ];
    Decomposition::new(TensorSpace::new(vec![4, 4, 4]).expect("valid"), terms).expect("shared space")
}

/// Multiplication table of a finite group over 0-based element indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
}

impl GroupTable {
    /// Cyclic group of order `n`; element `i` represents `x^i`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        let g = Self {
            order: n,
            mul,
            identity: 0,
        };
        g.validate()?;
        Ok(g)
    }

    /// Dihedral group of order `2n`: elements `0..n` are the rotations
    /// `r^a`, elements `n..2n` are the reflections `r^a s`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "dihedral parameter must be positive".into(),
            ));
        }
        let order = 2 * n;
        let mut mul = vec![0usize; order * order];
        for a in 0..order {
            for b in 0..order {
                let (ra, fa) = (a % n, a >= n);
                let (rb, fb) = (b % n, b >= n);
                // r^a s r^b = r^(a-b) s; s s = 1.
                let rot = if fa { (n + ra - rb) % n } else { (ra + rb) % n };
                let flip = fa ^ fb;
                mul[a * order + b] = rot + if flip { n } else { 0 };
            }
        }
        let g = Self {
            order,
            mul,
            identity: 0,
        };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric group on three letters, permutations enumerated in
    /// lexicographic order with the identity first.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let find = |p: &[usize; 3]| perms.iter().position(|q| q == p).expect("closed");
        let mut mul = vec![0usize; 36];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // (g h)(x) = g(h(x)).
                let composed = [pa[pb[0]], pa[pb[1]], pa[pb[2]]];
                mul[a * 6 + b] = find(&composed);
            }
        }
        let g = Self {
            order: 6,
            mul,
            identity: 0,
        };
        g.validate().expect("S3 is a group");
        g
    }

    /// Builds a table from 1-based data, validating the group axioms.
    pub fn from_table(order: usize, mul: &[Vec<usize>], identity: usize) -> Result<Self> {
        if order == 0 || mul.len() != order || mul.iter().any(|row| row.len() != order) {
            return Err(Error::GroupValidation(format!(
                "table must be {order}x{order}"
            )));
        }
        if identity == 0 || identity > order {
            return Err(Error::GroupValidation("identity index out of range".into()));
        }
        let mut flat = vec![0usize; order * order];
        for (a, row) in mul.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v == 0 || v > order {
                    return Err(Error::GroupValidation(format!(
                        "entry ({}, {}) = {v} out of range",
                        a + 1,
                        b + 1
                    )));
                }
                flat[a * order + b] = v - 1;
            }
        }
        let g = Self {
            order,
            mul: flat,
            identity: identity - 1,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order)
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("validated tables have inverses")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks the Latin square property, the identity laws, and (for orders
    /// up to 64, exhaustively) associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let e = self.identity;
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(Error::GroupValidation(format!(
                    "element {} violates the identity law",
                    a + 1
                )));
            }
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[self.mul(a, b)] = true;
                col[self.mul(b, a)] = true;
            }
            if row.iter().any(|&x| !x) || col.iter().any(|&x| !x) {
                return Err(Error::GroupValidation(format!(
                    "row/column {} is not a permutation",
                    a + 1
                )));
            }
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::GroupValidation(format!(
                                "associativity fails at ({}, {}, {})",
                                a + 1,
                                b + 1,
                                c + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn rows_1based(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b) + 1).collect())
            .collect()
    }
}

/// `T_G = sum_{ghk = 1} g (x) h (x) k`: a 0/1 tensor with `n^2` ones.
pub fn group_tensor(g: &GroupTable) -> Result<DenseTensor> {
    let n = g.order();
    if n > GROUP_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "group order {n} exceeds the dense cap {GROUP_ORDER_CAP}"
        )));
    }
    let space = TensorSpace::new(vec![n, n, n])?;
    let mut t = DenseTensor::zeros(space);
    for a in 0..n {
        for b in 0..n {
            let k = g.inverse(g.mul(a, b));
            t.set(&[a, b, k], re(1.0));
        }
    }
    Ok(t)
}

/// The discrete Fourier decomposition of `T_{C_n}`: `n` terms with
/// coefficient `sqrt(n)` on products of normalized characters. Certified
/// 3-orthogonal as a horizontal product of orthonormal character tuples.
pub fn dft_decomposition(n: usize) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > GROUP_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "n = {n} exceeds the dense cap {GROUP_ORDER_CAP}"
        )));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let character = |t: usize| -> Vec<C64> {
        (0..n)
            .map(|i| {
                let angle = std::f64::consts::TAU * ((t * i) % n) as f64 / n as f64;
                C64::from_polar(scale, angle)
            })
            .collect()
    };
    let chars = PureTuple::new(
        (0..n)
            .map(|t| PureTensor::new(vec![character(t)]))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let chars = if n == 1 {
        chars.with_cert(TOrthoCert::orthonormal())
    } else {
        try_certify_orthonormal(&chars, 1e-12)?
    };
    let triple = horizontal_product(&horizontal_product(&chars, &chars)?, &chars)?;
    let cert = triple.cert().cloned().expect("orthonormal parts certify");
    let space = triple.space().clone();
    let terms = triple
        .members()
        .iter()
        .map(|m| Term {
            coeff: re((n as f64).sqrt()),
            pure: m.clone(),
        })
        .collect();
    Ok(Decomposition::new(space, terms)?.with_cert(cert))
}

/// Dimensions of the irreducible representations of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepDims {
    dims: Vec<usize>,
}

impl IrrepDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "irreducible dimensions must be positive".into(),
            ));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Closed-form group spectrum: `sqrt(n / d_i)` with multiplicity `d_i^3`.
#[derive(Clone, Debug)]
pub struct GroupSpectrum {
    pub values: Vec<f64>,
    pub nuclear: f64,
    pub spectral: f64,
}

/// Singular values of `T_G` from the irreducible dimensions: value
/// `sqrt(n/d_i)` with multiplicity `d_i^3`, nuclear norm
/// `sqrt(n) * sum d_i^(5/2)`, spectral norm `sqrt(n)`.
pub fn group_singular_values(order: usize, irreps: &IrrepDims) -> Result<GroupSpectrum> {
    let sum_sq: usize = irreps.dims.iter().map(|&d| d * d).sum();
    if sum_sq != order {
        return Err(Error::InvalidArgument(format!(
            "sum of squared irreducible dimensions is {sum_sq}, expected the group order {order}"
        )));
    }
    let n = order as f64;
    let mut values = Vec::new();
    for &d in &irreps.dims {
        let v = (n / d as f64).sqrt();
        for _ in 0..d * d * d {
            values.push(v);
        }
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let nuclear = n.sqrt()
        * irreps
            .dims
            .iter()
            .map(|&d| (d as f64).powf(2.5))
            .sum::<f64>();
    Ok(GroupSpectrum {
        values,
        nuclear,
        spectral: n.sqrt(),
    })
}

/// The tuple `(g (x) h (x) k | ghk = 1)` of `n^2` basis pure tensors,
/// carrying the named 3/2-orthogonality certificate.
pub fn group_tuple(g: &GroupTable) -> Result<PureTuple> {
    let n = g.order();
    if n > GROUP_ORDER_CAP {
        return Err(Error::ResourceCap(format!(
            "group order {n} exceeds the dense cap {GROUP_ORDER_CAP}"
        )));
    }
    let dims = [n, n, n];
    let mut members = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let k = g.inverse(g.mul(a, b));
            members.push(PureTensor::basis(&dims, &[a, b, k])?);
        }
    }
    Ok(PureTuple::new(members)?.with_cert(TOrthoCert::group_algebra()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermutationTensorKind {
    Determinant,
    Permanent,
}

fn permutation_entries(n: usize, kind: PermutationTensorKind) -> Result<DenseTensor> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > PERM_TENSOR_CAP {
        return Err(Error::ResourceCap(format!(
            "n = {n} exceeds the determinant/permanent cap {PERM_TENSOR_CAP}"
        )));
    }
    let space = TensorSpace::new(vec![n; n])?;
    let mut t = DenseTensor::zeros(space);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let value = match kind {
            PermutationTensorKind::Determinant => {
                if permutation_sign(&perm) {
                    1.0
                } else {
                    -1.0
                }
            }
            PermutationTensorKind::Permanent => 1.0,
        };
        t.set(&perm.clone(), re(value));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(t)
}

/// Parity of a permutation: true when even.
fn permutation_sign(perm: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions.is_multiple_of(2)
}

/// Lexicographic successor in place; false once the last permutation passed.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// `det_n = sum_sigma sgn(sigma) e_{sigma(1)} (x) ... (x) e_{sigma(n)}`.
pub fn determinant_tensor(n: usize) -> Result<DenseTensor> {
    permutation_entries(n, PermutationTensorKind::Determinant)
}

/// `per_n = sum_sigma e_{sigma(1)} (x) ... (x) e_{sigma(n)}`.
pub fn permanent_tensor(n: usize) -> Result<DenseTensor> {
    permutation_entries(n, PermutationTensorKind::Permanent)
}

/// Glynn's `2^(n-1)`-term decomposition of the permanent; assembly is exact
/// because every entry is a multiple of `2^(1-n)` well inside f64 range.
pub fn glynn_decomposition(n: usize) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > PERM_TENSOR_CAP {
        return Err(Error::ResourceCap(format!(
            "n = {n} exceeds the determinant/permanent cap {PERM_TENSOR_CAP}"
        )));
    }
    let space = TensorSpace::new(vec![n; n])?;
    let count = 1usize << (n - 1);
    let scale = 1.0 / count as f64;
    let mut terms = Vec::with_capacity(count);
    for m in 0..count {
        let mut delta = vec![1.0f64; n];
        for (j, slot) in delta.iter_mut().enumerate().skip(1) {
            if (m >> (j - 1)) & 1 == 1 {
                *slot = -1.0;
            }
        }
        let product: f64 = delta.iter().product();
        let factor: Vec<C64> = delta.iter().map(|&d| re(d)).collect();
        terms.push(Term {
            coeff: re(product * scale),
            pure: PureTensor::new(vec![factor; n])?,
        });
    }
    Decomposition::new(space, terms)
}

/// The explicit five-term decomposition of `det_3`; assembly reproduces the
/// determinant tensor exactly (entries are halves and ones).
pub fn det3_decomposition() -> Decomposition {
    let f = |entries: &[(usize, f64)]| -> Vec<C64> {
        let mut v = vec![re(0.0); 3];
        for &(i, w) in entries {
            v[i - 1] += re(w);
        }
        v
    };
    let term = |a: Vec<C64>, b: Vec<C64>, c: Vec<C64>| Term {
        coeff: re(0.5),
        pure: PureTensor::new(vec![a, b, c]).expect("length-3 factors"),
    };
    let terms = vec![
        term(
            f(&[(3, 1.0), (2, 1.0)]),
            f(&[(1, 1.0), (2, -1.0)]),
            f(&[(1, 1.0), (2, 1.0)]),
        ),
        term(
            f(&[(1, 1.0), (2, 1.0)]),
            f(&[(2, 1.0), (3, -1.0)]),
            f(&[(2, 1.0), (3, 1.0)]),
        ),
        term(
            f(&[(2, 2.0)]),
            f(&[(3, 1.0), (1, -1.0)]),
            f(&[(3, 1.0), (1, 1.0)]),
        ),
        term(
            f(&[(3, 1.0), (2, -1.0)]),
            f(&[(2, 1.0), (1, 1.0)]),
            f(&[(2, 1.0), (1, -1.0)]),
        ),
        term(
            f(&[(1, 1.0), (2, -1.0)]),
            f(&[(3, 1.0), (2, 1.0)]),
            f(&[(3, 1.0), (2, -1.0)]),
        ),
    ];
    Decomposition::new(TensorSpace::new(vec![3, 3, 3]).expect("valid"), terms)
        .expect("shared space")
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rank of the `floor(n/2)`-mode flattening of the chosen tensor; by the
/// generalized Laplace expansion this equals `C(n, floor(n/2))`, which the
/// function asserts before returning.
pub fn laplace_flattening_bound(n: usize, kind: PermutationTensorKind) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the flattening bound needs n >= 2".into(),
        ));
    }
    let t = permutation_entries(n, kind)?;
    let row_modes: Vec<usize> = (0..n / 2).collect();
    let f = flatten(&t, &row_modes)?;
    let rank = matrix_rank(&f.matrix, 1e-9);
    let expected = binomial(n, n / 2);
    if rank != expected {
        return Err(Error::Format(format!(
            "flattening rank {rank} does not match the Laplace bound {expected}"
        )));
    }
    Ok(rank)
}

/// Exact value of `(5/6)^floor(n/3) * n!`, the recursive determinant rank
/// upper bound obtained from the five-term `det_3` decomposition.
pub fn det_rank_recursive_upper(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut factorial = BigInt::from(1);
    for i in 2..=n {
        factorial *= BigInt::from(i);
    }
    let five_sixths = BigRational::new(BigInt::from(5), BigInt::from(6));
    let mut acc = BigRational::from_integer(factorial);
    for _ in 0..(n / 3) {
        acc *= five_sixths.clone();
    }
    Ok(acc)
}

/// Sharp analytic spectral-norm upper bounds: Hadamard's inequality gives
/// `[det_n] <= 1`; its permanent analog gives `[per_n] <= n!/n^(n/2)`.
pub fn hadamard_spectral_override(kind: PermutationTensorKind, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(match kind {
        PermutationTensorKind::Determinant => 1.0,
        PermutationTensorKind::Permanent => {
            let mut factorial = 1.0f64;
            for i in 2..=n {
                factorial *= i as f64;
            }
            factorial / (n as f64).powf(n as f64 / 2.0)
        }
    })
}

/// The triple `(e1 e1 e1, e1 e2 e2, e2 e1 e2)` in `C^2 (x) C^2 (x) C^2`:
/// every pair is 2-orthogonal but the triple is not.
pub fn pairwise_counterexample() -> PureTuple {
    let dims = [2usize, 2, 2];
    PureTuple::new(vec![
        PureTensor::basis(&dims, &[0, 0, 0]).expect("valid"),
        PureTensor::basis(&dims, &[0, 1, 1]).expect("valid"),
        PureTensor::basis(&dims, &[1, 0, 1]).expect("valid"),
    ])
    .expect("nonempty")
}

/// Structural identity of a tensor, used to key analytic spectral-norm
/// overrides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalKind {
    Determinant(usize),
    Permanent(usize),
    GroupAlgebra(usize),
    MatrixMultiplication(usize, usize, usize),
}

fn entries_match(a: &DenseTensor, b: &DenseTensor) -> bool {
    a.space() == b.space()
        && a.entries()
            .iter()
            .zip(b.entries())
            .all(|(x, y)| (x - y).norm() <= 1e-12)
}

/// Recognizes the canonical tensors by exact structural matching; returns
/// `None` for everything else.
pub fn identify(t: &DenseTensor) -> Option<CanonicalKind> {
    let dims = t.space().dims();
    let d = dims.len();

    // Determinant / permanent: n modes of dimension n each.
    if (2..=PERM_TENSOR_CAP).contains(&d) && dims.iter().all(|&m| m == d) {
        if let Ok(det) = determinant_tensor(d) {
            if entries_match(t, &det) {
                return Some(CanonicalKind::Determinant(d));
            }
        }
        if let Ok(per) = permanent_tensor(d) {
            if entries_match(t, &per) {
                return Some(CanonicalKind::Permanent(d));
            }
        }
    }

    if d == 3 {
        // Matrix multiplication: dims (pq, qr, rp) determine p, q, r.
        let product = dims[0] * dims[1] * dims[2];
        let s = (product as f64).sqrt().round() as usize;
        if s > 0 && s * s == product && s <= MATMUL_PQR_CAP {
            let (a, b, c) = (dims[0], dims[1], dims[2]);
            if s.is_multiple_of(a) && s.is_multiple_of(b) && s.is_multiple_of(c) {
                let (p, q, r) = (s / b, s / c, s / a);
                if p * q == a && q * r == b && r * p == c {
                    if let Ok((dense, _)) = matmul_tensor(p, q, r) {
                        if entries_match(t, &dense) {
                            return Some(CanonicalKind::MatrixMultiplication(p, q, r));
                        }
                    }
                }
            }
        }

        // Group algebra: reconstruct a multiplication table and validate.
        let n = dims[0];
        if dims[1] == n && dims[2] == n && n <= GROUP_ORDER_CAP {
            if let Some(kind) = identify_group(t, n) {
                return Some(kind);
            }
        }
    }

    None
}

fn identify_group(t: &DenseTensor, n: usize) -> Option<CanonicalKind> {
    // Entries must be 0/1 with exactly one 1 per (g, h) pair.
    let mut phi = vec![usize::MAX; n * n];
    for lin in 0..t.entries().len() {
        let z = t.entries()[lin];
        let idx = t.space().multi_index(lin);
        if (z - re(1.0)).norm() <= 1e-12 {
            let slot = idx[0] * n + idx[1];
            if phi[slot] != usize::MAX {
                return None;
            }
            phi[slot] = idx[2];
        } else if z.norm() > 1e-12 {
            return None;
        }
    }
    if phi.contains(&usize::MAX) {
        return None;
    }
    // ghk = 1 forces phi(g, h) = (gh)^(-1); try every identity candidate.
    for e in 0..n {
        let inv: Vec<usize> = (0..n).map(|h| phi[e * n + h]).collect();
        let mut seen = vec![false; n];
        for &k in &inv {
            seen[k] = true;
        }
        if seen.iter().any(|&s| !s) {
            continue;
        }
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|g| (0..n).map(|h| inv[phi[g * n + h]] + 1).collect())
            .collect();
        if let Ok(table) = GroupTable::from_table(n, &mul, e + 1) {
            if let Ok(gt) = group_tensor(&table) {
                if entries_match(t, &gt) {
                    return Some(CanonicalKind::GroupAlgebra(n));
                }
            }
        }
    }
    None
}
