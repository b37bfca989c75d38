//! Reed-Solomon outer code over GF(2^b), b = log₂ M, one symbol per section.

mod composite;
mod gf;
mod rs;

pub use composite::{composite_rate, CompositeCode, CompositeRate};
pub use gf::{Gf, PRIMITIVE_POLYNOMIALS};
pub use rs::{rs_decode, rs_encode, RsCode, RsDecoded};
