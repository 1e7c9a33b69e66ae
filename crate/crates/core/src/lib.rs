//! Exact arithmetic and proof replay for universal binary Hermitian lattices
//! over imaginary quadratic fields.

pub mod catalog;
pub mod hermitian;
pub mod prover;
pub mod qform;
pub mod report;
pub mod ring;
pub mod transfer;
