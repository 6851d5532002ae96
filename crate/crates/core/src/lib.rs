//! Exact computations for Rees matrix semigroup algebras: Hochschild
//! (co)homology, Morita contexts with group algebras, and structural
//! certificates, all over the rationals.

pub mod algebra;
pub mod bimodule;
pub mod checks;
pub mod config;
pub mod driver;
pub mod hochschild;
pub mod linalg;
pub mod morita;
pub mod oracle;
pub mod rees;
pub mod report;
