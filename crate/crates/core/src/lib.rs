//! WKB coefficients, Borel-Pade-Laplace summation, convergent factorial
//! series and explicit remainder bounds for
//! `w'' = (u^2 f0 + u f1 + f2) w` with a large parameter `u`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod apps;
pub mod borel;
pub mod bounds;
pub mod coeffs;
pub mod equation;
pub mod error;
pub mod factorial;
pub mod numerics;
pub mod poly;
pub mod transform;
pub mod types;

pub use borel::{BorelSeries, BorelSummation, PadeApproximant};
pub use bounds::{BoundReport, ConditionCert, ConstantsChain};
pub use coeffs::{Backend, CoeffEntry, CoeffTable, RayContext, RayFunction};
pub use equation::{ConditionKind, EquationSpec};
pub use error::{Result, WkbError};
pub use factorial::{FactorialSeriesExpansion, StirlingTable};
pub use poly::{PolyC, PolyQ, VarTag};
pub use transform::{PotentialTriple, RayPath, XiPoint};
pub use types::Sign;
pub use num_complex::Complex64 as C64;
