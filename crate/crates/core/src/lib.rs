//! Exact arithmetic, continued fractions and sail geometry for totally real fields of
//! degree 2, 3 and 4, with indecomposable integers and the families built from them.

pub mod arith;
pub mod cfrac;
pub mod error;
pub mod families;
pub mod field;
pub mod indecomp;
pub mod interval;
pub mod latgeo;
pub mod linalg;
pub mod par;
pub mod units;

pub use error::{Error, Result};
pub use field::{Field, FieldDescriptor, FieldElement};
