//! Factorial series: exact coefficient transforms, sequence transformations,
//! Padé approximants and numerical evaluation.

pub mod accel;
pub mod applications;
pub mod error;
pub mod evaluation;
pub mod pade;
pub mod scalar;
pub mod series;
pub mod stirling;
pub mod transform;

pub use accel::{levin, weniger_s, Method, OmegaStrategy, TransformInput, TransformTable};
pub use applications::{OscillatorMethod, OscillatorSeries};
pub use error::{Error, Result};
pub use evaluation::{QuadratureSpec, SummationReport};
pub use pade::PadeApprox;
pub use scalar::{real, BigFloat, PrecisionContext, Real};
pub use series::{FormalSeries, MomentSequence, SeriesKind};
pub use stirling::{StirlingCache, StirlingKind, StirlingPair};
pub use transform::TransformMatrix;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub type Rational = BigRational;
pub type HpFloat = BigFloat;
pub type ExactMatrix = TransformMatrix<BigRational>;
pub type HpReport = SummationReport<BigFloat>;
pub type HpTable = TransformTable<BigFloat>;
pub type HpInput = TransformInput<BigFloat>;
