//! Arithmetic for m-fold metaplectic covers of GL_d and Sp_2d.
//!
//! * [`arith`]: residue fields, roots of unity, tame Hilbert symbols.
//! * [`cover`]: 2-cocycle arithmetic on monomial subgroups.
//! * [`lfactor`]: exact unramified L- and gamma factors in `X = q^{-s}`.
//! * [`archgamma`]: gamma factors at a complex place.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod archgamma;
pub mod arith;
pub mod cover;
pub mod lfactor;
