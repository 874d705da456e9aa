//! Exact arithmetic in cyclotomic number fields Q(ζ_n).
//!
//! A [`Cyclotomic`] is stored at the smallest conductor that contains it, so
//! structural equality is value equality. Sign decisions for real elements go
//! through [`real_sign`], which never guesses: it either resolves the sign
//! from a rigorous enclosure or refines until it can.

mod coeffs;
mod field;
mod layout;
mod sign;
mod text;
mod value;

pub use field::{
    contains_named_sqrt, field_generated, galois_orbit, sqrt_of_integer, units, FieldDescriptor,
};
pub use layout::{euler_phi, normalize_conductor};
pub use sign::{
    embed, embed_f64, real_sign, real_sign_with, set_sign_start_bits, sign_start_bits, Sign,
    DEFAULT_START_BITS,
};
pub use text::parse;
pub use value::{conductor_cap, with_conductor_cap, Cyclotomic, DEFAULT_CONDUCTOR_CAP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("conductor {needed} exceeds cap {cap}")]
    ConductorCap { needed: u32, cap: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not real")]
    NotReal,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
