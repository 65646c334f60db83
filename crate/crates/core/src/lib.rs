//! Framed deformations of the trivial mod-`p` representation, realized as
//! tuples of matrices over finite-precision `p`-adic rings.

pub mod cli;
pub mod counting;
pub mod crystalline;
pub mod deformation;
pub mod error;
pub mod linalg;
pub mod localring;
pub mod paths;

pub use error::{Error, Result};
