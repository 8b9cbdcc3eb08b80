//! Gradings of the graded Cartan type Lie algebras `W`, `S`, `H`, `K` over
//! fields of odd characteristic, and conjugation of finite quasi-tori into
//! the standard maximal torus.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod autgrp;
pub mod diag;
pub mod dpa;
pub mod error;
pub mod field;
pub mod forms;
pub mod grading;
pub mod liealg;
pub mod linalg;
pub mod sample;

pub use dpa::{DpaElement, Shape};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
