pub mod cli;
pub mod count;
pub mod descent;
pub mod error;
pub mod fields;
pub mod kclass;
pub mod linalg;
pub mod poly;
pub mod quadform;
pub mod strat;

pub use error::{Error, Result};
pub use fields::{Field, FieldElem};
pub use linalg::Matrix;
pub use poly::{parse_poly, AffinePoly, HomogPoly};
