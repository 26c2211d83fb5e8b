//! Exact infinitesimal Torelli verification for a family of Z/3-quotients of
//! complete intersections of two cubics in P^4.

pub mod error;
pub mod exactla;
pub mod family;
pub mod geomchecks;
pub mod polyring;
pub mod quotient;
pub mod report;
pub mod torelli;

pub use error::{Error, Result};
