//! Finite-field geometry toolkit: Kakeya and Nikodym sets, the polynomial
//! method with multiplicities, Hermitian varieties and point-plane incidences.

pub mod cli;
pub mod error;
pub mod gf;
pub mod hermitian;
pub mod incidence;
pub mod io;
pub mod geom;
pub mod linalg;
pub mod kakeya;
pub mod nikodym;
pub mod poly;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use gf::{Fe, Field};
