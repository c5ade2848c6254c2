//! Finite-scale analytic geometry over F1: normed sets, geometric monoids,
//! base change into Banach rings, analytic Witt vectors, Fargues–Fontaine
//! Gauss norms, perfectoid Puiseux arithmetic and the Berkovich spectrum of Z.

pub mod basechange;
pub mod cli;
pub mod error;
pub mod norm;
pub mod monoids;
pub mod normcore;
pub mod perfectoid;
pub mod rational;
pub mod scalars;
pub mod spectrum;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use norm::NormValue;
pub use rational::Rat;
