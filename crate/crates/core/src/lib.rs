//! QUBO and Ising models, fixed-point encodings, penalty gadgets for
//! non-smooth functions (absolute value, ReLU, q-loss), and the annealers and
//! exhaustive search used to minimize them.

pub mod encoding;
pub mod error;
pub mod experiments;
pub mod gadgets;
pub mod io;
pub mod model;
pub mod solvers;

pub use encoding::{AffineExpr, FixedPointEncoding, PolyExpr, VarAllocator};
pub use error::{Error, Result};
pub use gadgets::{GadgetExpansion, GadgetVariant, PenaltyConfig};
pub use model::{IsingModel, QuboModel, VarId};
pub use solvers::{AnnealSchedule, SolveResult};
