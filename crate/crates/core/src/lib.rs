pub mod constraints;
pub mod error;
pub mod free_algebra;
pub mod hall;
pub mod lattice;
pub mod optimizer;
pub mod scalar;
pub mod schemes;
pub mod validate;

pub use error::{Error, Result};
pub use free_algebra::{Alphabet, DenseSeries, Generator, NCSeries, Word};
pub use hall::{HallBasis, HallTree, LieSeries};
pub use scalar::{Const, Rational, Scalar};
pub use schemes::{ErrorReport, Family, ParamAssignment, Scheme};

pub type ExactSeries = NCSeries<Rational>;
pub type FloatSeries = NCSeries<f64>;
pub type ExactLieSeries = LieSeries<Rational>;
pub type FloatLieSeries = LieSeries<f64>;
