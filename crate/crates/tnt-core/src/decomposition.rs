//! Pure tensors, weighted pure-tensor decompositions, and the horizontal /
//! vertical tuple products.
//!
//! A [`Decomposition`] is an ordered list of `(coefficient, pure tensor)`
//! terms; its nuclear cost is an upper bound on the nuclear norm of the
//! assembled tensor. [`normalize`] brings a decomposition into candidate
//! form for a diagonal singular value decomposition: unit pure terms,
//! real positive nonincreasing coefficients.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::orthogonality::TOrthoCert;
use crate::tensor::{DenseTensor, TensorSpace};

const UNIT_TOL: f64 = 1e-9;

/// One factor vector per mode; represents `v^(1) (x) ... (x) v^(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureTensor {
    space: TensorSpace,
    factors: Vec<Vec<C64>>,
}

impl PureTensor {
    pub fn new(factors: Vec<Vec<C64>>) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let space = TensorSpace::new(dims)?;
        if factors
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "pure tensor factors must be finite".into(),
            ));
        }
        Ok(Self { space, factors })
    }

    /// Standard basis pure tensor `e_{idx[0]} (x) ... (x) e_{idx[d-1]}`
    /// (0-based indices).
    pub fn basis(dims: &[usize], idx: &[usize]) -> Result<Self> {
        if dims.len() != idx.len() {
            return Err(Error::InvalidArgument(
                "basis index length must match mode count".into(),
            ));
        }
        let factors = dims
            .iter()
            .zip(idx)
            .map(|(&n, &i)| {
                if i >= n {
                    return Err(Error::InvalidArgument(format!(
                        "basis index {i} out of range for dimension {n}"
                    )));
                }
                let mut f = vec![C64::new(0.0, 0.0); n];
                f[i] = C64::new(1.0, 0.0);
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        PureTensor::new(factors)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn factors(&self) -> &[Vec<C64>] {
        &self.factors
    }

    /// `prod_j ||factor_j||`, the l2 length of the assembled pure tensor.
    pub fn length(&self) -> f64 {
        self.factors.iter().map(|f| vec_norm(f)).product()
    }

    /// Entry at a 0-based multi-index.
    pub fn entry(&self, idx: &[usize]) -> C64 {
        self.factors
            .iter()
            .zip(idx)
            .map(|(f, &i)| f[i])
            .product()
    }

    /// Inner product of pure tensors factors through the modes.
    pub fn inner(&self, other: &PureTensor) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "pure tensor inner product needs matching spaces".into(),
            ));
        }
        Ok(self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| vec_inner(a, b))
            .product())
    }

    pub fn to_dense(&self) -> DenseTensor {
        DenseTensor::from_fn(self.space.clone(), |idx| self.entry(idx))
    }

    /// Rescales every factor to unit length; `None` if some factor is zero.
    pub fn normalized_factors(&self) -> Option<PureTensor> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let n = vec_norm(f);
            if n == 0.0 {
                return None;
            }
            factors.push(f.iter().map(|z| z / n).collect());
        }
        Some(PureTensor {
            space: self.space.clone(),
            factors,
        })
    }

    /// Multiplies the first factor by `c` (coefficient/phase absorption).
    pub fn scale_first_factor(&self, c: C64) -> PureTensor {
        let mut factors = self.factors.clone();
        for z in &mut factors[0] {
            *z *= c;
        }
        PureTensor {
            space: self.space.clone(),
            factors,
        }
    }

    /// Horizontal product: concatenates the mode lists.
    pub fn tensor_product(&self, other: &PureTensor) -> PureTensor {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PureTensor {
            space: self.space.horizontal(&other.space),
            factors,
        }
    }

    /// Vertical product: Kronecker product mode by mode. Index order in each
    /// mode is row-major over (left, right), matching the dense layout.
    pub fn kron_product(&self, other: &PureTensor) -> Result<PureTensor> {
        let space = self.space.vertical(&other.space)?;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        out.push(x * y);
                    }
                }
                out
            })
            .collect();
        Ok(PureTensor { space, factors })
    }
}

pub(crate) fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a, b> = sum a_i conj(b_i)`.
pub(crate) fn vec_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// `<T, v>` for dense `T` and pure `v`, without densifying `v`.
pub fn dense_pure_inner(t: &DenseTensor, v: &PureTensor) -> Result<C64> {
    if t.space() != v.space() {
        return Err(Error::DimensionMismatch(
            "inner product needs matching spaces".into(),
        ));
    }
    let mut acc = C64::new(0.0, 0.0);
    for (lin, &z) in t.entries().iter().enumerate() {
        if z.re == 0.0 && z.im == 0.0 {
            continue;
        }
        let idx = t.space().multi_index(lin);
        acc += z * v.entry(&idx).conj();
    }
    Ok(acc)
}

/// One weighted term of a decomposition.
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: C64,
    pub pure: PureTensor,
}

/// Ordered list of weighted pure tensors sharing one space.
#[derive(Clone, Debug)]
pub struct Decomposition {
    space: TensorSpace,
    terms: Vec<Term>,
    cert: Option<TOrthoCert>,
}

impl Decomposition {
    pub fn new(space: TensorSpace, terms: Vec<Term>) -> Result<Self> {
        for (i, term) in terms.iter().enumerate() {
            if term.pure.space() != &space {
                return Err(Error::DimensionMismatch(format!(
                    "term {i} lives in a different space"
                )));
            }
            if !term.coeff.re.is_finite() || !term.coeff.im.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "term {i} has a non-finite coefficient"
                )));
            }
        }
        Ok(Self {
            space,
            terms,
            cert: None,
        })
    }

    pub fn empty(space: TensorSpace) -> Self {
        Self {
            space,
            terms: Vec::new(),
            cert: None,
        }
    }

    pub fn with_cert(mut self, cert: TOrthoCert) -> Self {
        self.cert = Some(cert);
        self
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn cert(&self) -> Option<&TOrthoCert> {
        self.cert.as_ref()
    }

    /// The tuple of pure terms, carrying the certificate if present.
    pub fn tuple(&self) -> Result<PureTuple> {
        let members = self.terms.iter().map(|t| t.pure.clone()).collect();
        let mut tuple = PureTuple::new(members)?;
        tuple.cert = self.cert.clone();
        Ok(tuple)
    }
}

/// Ordered list of pure tensors (not necessarily unit) sharing one space,
/// optionally tagged with a structural t-orthogonality certificate.
#[derive(Clone, Debug)]
pub struct PureTuple {
    space: TensorSpace,
    members: Vec<PureTensor>,
    cert: Option<TOrthoCert>,
}

impl PureTuple {
    pub fn new(members: Vec<PureTensor>) -> Result<Self> {
        let space = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("a tuple needs at least one member".into()))?
            .space()
            .clone();
        for (i, m) in members.iter().enumerate() {
            if m.space() != &space {
                return Err(Error::DimensionMismatch(format!(
                    "tuple member {i} lives in a different space"
                )));
            }
        }
        Ok(Self {
            space,
            members,
            cert: None,
        })
    }

    pub fn with_cert(mut self, cert: TOrthoCert) -> Self {
        debug_assert!(crate::orthogonality::cardinality_bound_holds(
            self.members.len(),
            self.space.total_dim(),
            cert.t()
        ));
        self.cert = Some(cert);
        self
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn members(&self) -> &[PureTensor] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cert(&self) -> Option<&TOrthoCert> {
        self.cert.as_ref()
    }

    pub(crate) fn all_unit(&self, tol: f64) -> bool {
        self.members
            .iter()
            .all(|m| (m.length() - 1.0).abs() <= tol)
    }
}

/// Dense sum of the decomposition's terms; the empty decomposition
/// assembles to the zero tensor.
pub fn assemble(dec: &Decomposition) -> DenseTensor {
    let mut out = DenseTensor::zeros(dec.space.clone());
    let total = dec.space.total_dim();
    for term in &dec.terms {
        for lin in 0..total {
            let idx = dec.space.multi_index(lin);
            out.entries_mut()[lin] += term.coeff * term.pure.entry(&idx);
        }
    }
    out
}

/// `sum_i |coeff_i| * ||v_i||`, the cost of this particular decomposition;
/// always an upper bound on the nuclear norm of the assembled tensor.
pub fn nuclear_cost(dec: &Decomposition) -> f64 {
    dec.terms
        .iter()
        .map(|t| t.coeff.norm() * t.pure.length())
        .sum()
}

pub struct NormalizeOutcome {
    pub decomposition: Decomposition,
    pub warnings: Vec<String>,
}

/// Rescales every pure term to unit length, folds lengths and phases into
/// the coefficients, absorbs coefficient phases into the first factor so
/// coefficients end up real positive, sorts by coefficient nonincreasing
/// (ties broken lexicographically on the first factor), and drops terms
/// with negligible coefficients.
pub fn normalize(dec: &Decomposition) -> NormalizeOutcome {
    let mut warnings = Vec::new();
    let mut staged: Vec<(f64, PureTensor)> = Vec::with_capacity(dec.terms.len());
    for (i, term) in dec.terms.iter().enumerate() {
        let unit = match term.pure.normalized_factors() {
            Some(u) => u,
            None => {
                warnings.push(format!("term {i} dropped: zero factor"));
                continue;
            }
        };
        let coeff = term.coeff * term.pure.length();
        let mag = coeff.norm();
        if mag == 0.0 {
            warnings.push(format!("term {i} dropped: zero coefficient"));
            continue;
        }
        let phase = coeff / mag;
        staged.push((mag, unit.scale_first_factor(phase)));
    }

    let max_mag = staged.iter().map(|(m, _)| *m).fold(0.0f64, f64::max);
    let cutoff = 1e-14 * max_mag;
    let before = staged.len();
    staged.retain(|(m, _)| *m >= cutoff);
    if staged.len() < before {
        warnings.push(format!(
            "{} term(s) dropped: coefficient below 1e-14 of the largest",
            before - staged.len()
        ));
    }

    staged.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then_with(|| lex_cmp(&a.1.factors()[0], &b.1.factors()[0]))
    });

    let terms = staged
        .into_iter()
        .map(|(m, pure)| Term {
            coeff: C64::new(m, 0.0),
            pure,
        })
        .collect();
    NormalizeOutcome {
        decomposition: Decomposition {
            space: dec.space.clone(),
            terms,
            cert: dec.cert.clone(),
        },
        warnings,
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.re.partial_cmp(&y.re).unwrap();
        if c != std::cmp::Ordering::Equal {
            return c;
        }
        let c = x.im.partial_cmp(&y.im).unwrap();
        if c != std::cmp::Ordering::Equal {
            return c;
        }
    }
    std::cmp::Ordering::Equal
}

/// Componentwise tensor product `(v_1 (x) w_1, ..., v_r (x) w_r)` in the
/// concatenated tensor space. Certificates add their orthogonality degrees;
/// an uncertified unit-member side contributes zero.
pub fn horizontal_product(v: &PureTuple, w: &PureTuple) -> Result<PureTuple> {
    if v.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "horizontal product needs equal tuple lengths, got {} and {}",
            v.len(),
            w.len()
        )));
    }
    let members: Vec<PureTensor> = v
        .members
        .iter()
        .zip(&w.members)
        .map(|(a, b)| a.tensor_product(b))
        .collect();
    let mut out = PureTuple::new(members)?;
    if v.all_unit(UNIT_TOL) && w.all_unit(UNIT_TOL) {
        out.cert = TOrthoCert::combine_horizontal(v.cert.as_ref(), w.cert.as_ref());
    }
    Ok(out)
}

/// All-pairs tensor product `(v_i (x) w_j)` merging corresponding modes;
/// members ordered lexicographically by `(i, j)`. Certificates take the
/// minimum of the two degrees.
pub fn vertical_product(v: &PureTuple, w: &PureTuple) -> Result<PureTuple> {
    let mut members = Vec::with_capacity(v.len() * w.len());
    for a in &v.members {
        for b in &w.members {
            members.push(a.kron_product(b)?);
        }
    }
    let mut out = PureTuple::new(members)?;
    if v.all_unit(UNIT_TOL) && w.all_unit(UNIT_TOL) {
        out.cert = TOrthoCert::combine_vertical(v.cert.as_ref(), w.cert.as_ref());
    }
    Ok(out)
}

/// `v^(x)d`, the d-fold horizontal product of `v` with itself.
pub fn tuple_power(v: &PureTuple, d: u32) -> Result<PureTuple> {
    if d == 0 {
        return Err(Error::InvalidArgument("tuple power needs d >= 1".into()));
    }
    let mut out = v.clone();
    for _ in 1..d {
        out = horizontal_product(&out, v)?;
    }
    Ok(out)
}
