//! Finite-field tower F_p ⊂ F_q ⊂ F_{q^r}.

pub mod base;
pub mod ctx;
pub mod poly;
pub mod scalar;

pub use base::BaseField;
pub use ctx::{build_ctx, Element, FieldCtx, FullDegreeIter, ResidueVector};
pub use poly::{is_irreducible, Poly};
pub use scalar::{PrimeField, ScalarField};
