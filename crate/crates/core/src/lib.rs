//! Exact symbolic verification for Cartan (super)geometry.
//!
//! Everything is generic over an exact coefficient field implementing
//! [`Coeff`]; the aliases below fix the default field `ℚ(i)` with arbitrary
//! precision rationals.

pub mod algebra;
pub mod cartan;
pub mod clifford;
pub mod coeff;
pub mod error;
pub mod fda;
pub mod forms;
pub mod linalg;
pub mod scalar;
pub mod spmat;
pub mod variational;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;

pub use coeff::Coeff;
pub use error::{Error, Result};
pub use scalar::{ParamMono, ParamPoly};

pub type Rational = Ratio<BigInt>;
pub type GaussianRational = Complex<Rational>;
/// Gaussian rationals over machine integers; faster, may overflow.
pub type SmallGaussianRational = Complex<Ratio<i64>>;
pub type Scalar = ParamPoly<GaussianRational>;
pub type SuperAlgebra = algebra::SuperAlgebra<GaussianRational>;
pub type GammaRep = clifford::GammaRep<GaussianRational>;
