//! Truncated p-typical Witt vectors, their analytic norms, and the
//! finite-support model of the Fargues–Fontaine ring.

pub mod poly;

pub use poly::{gen_witt_polys, witt_table, IntPoly, WittPolyTable};
pub mod vector;

pub use vector::{teichmuller, witt_alpha_norm, witt_from_integer, DigitRing, WittVector};
pub mod ff;
pub mod key;

pub use ff::{ff_gauss_norm, ff_two_sided_norm, FFElement};
pub use key::{key_exponent_transform, key_inequality_check};

#[cfg(test)]
mod tests;
