//! Substitution subshifts: factor languages, minimality and linear
//! repetitivity with certificates, and three applications (periodic
//! approximants of Schrödinger operators, stutter witnesses for digit
//! expansions of fixed points, and unique 1-partitions).

pub mod catalog;
pub mod classifier;
pub mod definition;
pub mod error;
pub mod language;
pub mod number_theory;
pub mod par;
pub mod recognizer;
pub mod report;
pub mod spectral;
pub mod substitution;
pub mod words;

pub use error::Error;
