//! Exact root-system, Weyl-group and Levi-subgroup computations, with a
//! parametric polyhedral engine for verifying outside-FPP claims about
//! unitary-dual reductions of complex simple groups.

pub mod error;
pub mod levi;
pub mod param;
pub mod rational;
pub mod rootsys;
pub mod verify;
pub mod weyl;
pub mod cli;

pub use error::{Error, Result};
pub use rational::Rational;
pub use rootsys::{datum, Datum, Family, NodeSet, RootDatum, RootVector, Weight};
pub use weyl::{ModulePair, WeylWord};
