//! Construction, evaluation and numerical verification of K-optimal
//! (condition-number minimizing) approximate designs for first- and
//! second-order Scheffé mixture models.
//!
//! ```
//! use kopt_core::{analytic, basis::ModelBasis, metrics};
//!
//! let design = analytic::k_optimal_second_order(3).unwrap();
//! let basis = ModelBasis::second(3).unwrap();
//! let report = metrics::evaluate(&design, &basis).unwrap();
//! assert!((report.kappa - 65.98484500).abs() < 1e-6);
//! ```

pub mod analytic;
pub mod basis;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod optimizer;
pub mod simplex;

pub use basis::{ModelBasis, Order, PairIncidenceMatrix};
pub use error::{Error, Result};
pub use linalg::{ConditionNumber, Spectrum, SymMatrix};
pub use optimizer::{Criterion, OptimizeResult, OptimizeSpec};
pub use simplex::{ComponentBounds, Design, MixturePoint, TransformDirection};
