//! Finite quantum-logic structures and the operator constructions built on them.

pub mod boolean_rep;
pub mod clan;
pub mod cli;
pub mod error;
pub mod gns;
pub mod io;
pub mod matrix;
pub mod naimark;
pub mod order;
pub mod ortho;
pub mod property;
pub mod quasilogic;
pub mod random;
pub mod report;
pub mod semilogic;

pub use error::{Error, Result};
pub use order::{ElementId, FinitePoset};
pub use report::VerificationReport;
