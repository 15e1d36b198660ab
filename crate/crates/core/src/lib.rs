//! Exact computations with graded presentations of Cox rings.
//!
//! The crate is `no_std` and only needs an allocator. Everything is exact:
//! integers are arbitrary precision, scalars live in a tower of quadratic
//! extensions of the rationals.
//!
//! Modules, bottom up:
//!
//! * [`matrix`]: integer matrices, Smith and Hermite normal forms.
//! * [`abgroup`]: finitely generated abelian groups and homomorphisms.
//! * [`numfield`]: quadratic field towers and sums of two squares.
//! * [`lattice`]: degree fibers and Hilbert bases of fiber monoids.
//! * [`polyalg`]: sparse polynomials, graded presentations, relation discovery.
//! * [`veronese`]: Veronese subalgebras, pullbacks, generator minimization.
//! * [`galois`]: semilinear actions, descent to the fixed field, twisting.
//! * [`torsor`]: irrelevant ideals and integral point parameterizations.

#![no_std]

extern crate alloc;

pub mod abgroup;
pub mod error;
pub mod galois;
pub mod lattice;
pub mod linalg;
mod lp;
pub mod matrix;
pub mod numfield;
pub mod polyalg;
pub mod torsor;
pub mod veronese;

pub use error::{Error, Result};
