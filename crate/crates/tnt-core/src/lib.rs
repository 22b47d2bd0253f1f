//! Tensor norm toolkit core library.
//!
//! Implements dense complex tensors, pure-tensor decompositions, the
//! coherence and spectral-measure machinery on tuples of tensors,
//! t-orthogonality certificates, diagonal singular value decompositions
//! (verification and greedy extraction), certified nuclear-norm bounds, and
//! constructors for the canonical tensor zoo (matrix multiplication, group
//! algebras, determinant, permanent).

pub mod bounds;
pub mod canonical;
pub mod decomposition;
pub mod error;
pub mod io;
pub mod orthogonality;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{C64, DenseTensor, Flattening, HosvdResult, TensorSpace};

pub use decomposition::{Decomposition, NormalizeOutcome, PureTensor, PureTuple, Term};
pub use orthogonality::{
    DsvdClause, DsvdFailure, DsvdReport, ExtractOutcome, MeasureEstimate, MeasureStatus,
    OptimizerSettings, OrthogonalityVerdict, TOrthoCert, Verdict,
};

pub use bounds::{BoundSide, MainInequalityReport, NuclearInterval, SpectralBounds};
pub use canonical::{
    CanonicalKind, GroupSpectrum, GroupTable, IrrepDims, PermutationTensorKind,
};
