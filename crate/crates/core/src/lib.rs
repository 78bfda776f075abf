//! Exact symbolic algebra for quivers with potentials: Ginzburg dg algebras,
//! Calabi-Yau completions, Jacobian algebras, small Hochschild complexes,
//! pre-mutation and the Calabi-Yau pairing on the bimodule resolution.

pub mod algebra;
pub mod catalog;
pub mod completion;
pub mod dg;
pub mod document;
pub mod error;
pub mod hochschild;
pub mod jacobian;
pub mod linalg;
pub mod mutation;
pub mod ncgeom;
pub mod potential;

pub use error::{Error, Result};
