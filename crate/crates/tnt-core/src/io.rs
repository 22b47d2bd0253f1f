//! File formats: tensors, decompositions/tuples, and group tables as JSON.
//!
//! All floating point output goes through a 17-significant-digit formatter
//! so that written files and reports round-trip losslessly and
//! byte-identically. Indices in files are 1-based; omitted tensor entries
//! are zero; writers emit entries in ascending row-major index order.

use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::canonical::GroupTable;
use crate::decomposition::{Decomposition, PureTensor, PureTuple, Term};
use crate::error::{Error, Result};
use crate::orthogonality::TOrthoCert;
use crate::tensor::{DenseTensor, TensorSpace};

/// Compact JSON formatter printing every f64 with 17 significant digits.
struct SigDigFormatter;

impl serde_json::ser::Formatter for SigDigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value with the lossless float formatter.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigFormatter);
    value.serialize(&mut ser)?;
    String::from_utf8(out).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub idx: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub dims: Vec<usize>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: ComplexJson,
    pub factors: Vec<Vec<ComplexJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertJson {
    pub t: f64,
    pub rule: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionJson {
    pub dims: Vec<usize>,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTableJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

pub fn tensor_to_json(t: &DenseTensor) -> TensorJson {
    let mut entries = Vec::new();
    for lin in 0..t.entries().len() {
        let z = t.entries()[lin];
        if z.re == 0.0 && z.im == 0.0 {
            continue;
        }
        let idx = t.space().multi_index(lin).iter().map(|i| i + 1).collect();
        entries.push(EntryJson {
            idx,
            re: z.re,
            im: z.im,
        });
    }
    TensorJson {
        dims: t.space().dims().to_vec(),
        entries,
    }
}

pub fn tensor_from_json(j: &TensorJson) -> Result<DenseTensor> {
    let space = TensorSpace::new(j.dims.clone())?;
    let mut t = DenseTensor::zeros(space.clone());
    let mut seen = vec![false; space.total_dim()];
    for e in &j.entries {
        if e.idx.len() != j.dims.len() {
            return Err(Error::Format(format!(
                "entry index {:?} has wrong arity",
                e.idx
            )));
        }
        let mut idx = Vec::with_capacity(e.idx.len());
        for (&i, &n) in e.idx.iter().zip(&j.dims) {
            if i == 0 || i > n {
                return Err(Error::Format(format!(
                    "entry index {:?} out of range (1-based)",
                    e.idx
                )));
            }
            idx.push(i - 1);
        }
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(Error::Format("entries must be finite".into()));
        }
        let lin = space.linear_index(&idx);
        if seen[lin] {
            return Err(Error::Format(format!("duplicate entry at {:?}", e.idx)));
        }
        seen[lin] = true;
        t.set(&idx, C64::new(e.re, e.im));
    }
    Ok(t)
}

fn factors_to_json(p: &PureTensor) -> Vec<Vec<ComplexJson>> {
    p.factors()
        .iter()
        .map(|f| f.iter().map(|&z| z.into()).collect())
        .collect()
}

pub fn pure_tensor_to_json(p: &PureTensor) -> Vec<Vec<ComplexJson>> {
    factors_to_json(p)
}

fn pure_from_factors(dims: &[usize], factors: &[Vec<ComplexJson>]) -> Result<PureTensor> {
    if factors.len() != dims.len() {
        return Err(Error::Format("term has wrong number of factors".into()));
    }
    for (f, &n) in factors.iter().zip(dims) {
        if f.len() != n {
            return Err(Error::Format(format!(
                "factor of length {} does not match dimension {n}",
                f.len()
            )));
        }
    }
    PureTensor::new(
        factors
            .iter()
            .map(|f| f.iter().map(|&z| z.into()).collect())
            .collect(),
    )
}

pub fn decomposition_to_json(d: &Decomposition) -> DecompositionJson {
    DecompositionJson {
        dims: d.space().dims().to_vec(),
        terms: d
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff.into(),
                factors: factors_to_json(&t.pure),
            })
            .collect(),
        certificate: d.cert().map(|c| CertJson {
            t: c.t(),
            rule: c.rule().to_string(),
        }),
    }
}

pub fn decomposition_from_json(j: &DecompositionJson) -> Result<Decomposition> {
    let space = TensorSpace::new(j.dims.clone())?;
    let terms = j
        .terms
        .iter()
        .map(|t| {
            Ok(Term {
                coeff: t.coeff.into(),
                pure: pure_from_factors(&j.dims, &t.factors)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dec = Decomposition::new(space, terms)?;
    match &j.certificate {
        Some(c) => Ok(dec.with_cert(TOrthoCert::new(c.t, c.rule.clone())?)),
        None => Ok(dec),
    }
}

/// Tuples reuse the decomposition format; coefficients are ignored and the
/// members are the pure terms.
pub fn tuple_from_json(j: &DecompositionJson) -> Result<PureTuple> {
    let members = j
        .terms
        .iter()
        .map(|t| pure_from_factors(&j.dims, &t.factors))
        .collect::<Result<Vec<_>>>()?;
    let tuple = PureTuple::new(members)?;
    match &j.certificate {
        Some(c) => Ok(tuple.with_cert(TOrthoCert::new(c.t, c.rule.clone())?)),
        None => Ok(tuple),
    }
}

pub fn tuple_to_json(t: &PureTuple) -> DecompositionJson {
    DecompositionJson {
        dims: t.space().dims().to_vec(),
        terms: t
            .members()
            .iter()
            .map(|m| TermJson {
                coeff: ComplexJson { re: 1.0, im: 0.0 },
                factors: factors_to_json(m),
            })
            .collect(),
        certificate: t.cert().map(|c| CertJson {
            t: c.t(),
            rule: c.rule().to_string(),
        }),
    }
}

pub fn group_table_to_json(g: &GroupTable) -> GroupTableJson {
    GroupTableJson {
        order: g.order(),
        mul: g.rows_1based(),
        identity: g.identity() + 1,
    }
}

pub fn group_table_from_json(j: &GroupTableJson) -> Result<GroupTable> {
    GroupTable::from_table(j.order, &j.mul, j.identity)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn save_tensor(path: &Path, t: &DenseTensor) -> Result<()> {
    write_file(path, &to_json_string(&tensor_to_json(t))?)
}

pub fn load_tensor(path: &Path) -> Result<DenseTensor> {
    let data = std::fs::read_to_string(path)?;
    tensor_from_json(&serde_json::from_str(&data)?)
}

pub fn save_decomposition(path: &Path, d: &Decomposition) -> Result<()> {
    write_file(path, &to_json_string(&decomposition_to_json(d))?)
}

pub fn load_decomposition(path: &Path) -> Result<Decomposition> {
    let data = std::fs::read_to_string(path)?;
    decomposition_from_json(&serde_json::from_str(&data)?)
}

pub fn load_tuple(path: &Path) -> Result<PureTuple> {
    let data = std::fs::read_to_string(path)?;
    tuple_from_json(&serde_json::from_str(&data)?)
}

pub fn save_group_table(path: &Path, g: &GroupTable) -> Result<()> {
    write_file(path, &to_json_string(&group_table_to_json(g))?)
}

pub fn load_group_table(path: &Path) -> Result<GroupTable> {
    let data = std::fs::read_to_string(path)?;
    group_table_from_json(&serde_json::from_str(&data)?)
}
