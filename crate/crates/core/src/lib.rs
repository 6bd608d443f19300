//! Upper bounds on the number of inequivalent irreducible and extended
//! irreducible Goppa codes, computed in closed form and checked against a
//! brute-force orbit count.

pub mod census;
pub mod error;
pub mod ff;
pub mod goppa;
pub mod group;
mod json;
pub mod linalg;
pub mod ntheory;
pub mod oracle;

pub use census::{census_report, census_report_with, CensusReport, Ladder, Params};
pub use error::{Error, Result};
pub use ff::{build_ctx, Element, FieldCtx};
