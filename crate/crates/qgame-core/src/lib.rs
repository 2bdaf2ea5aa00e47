//! Engine for quantized 2x2 games played through a shared two-qubit
//! correlation state.
//!
//! The pipeline: a referee prepares a correlation state (maximally
//! entangled, dephased, full rank, or a corrupted mixture), both players
//! apply local SU(2) operators drawn from a tagged strategy space, the
//! referee undoes the entangler and measures in the computational basis,
//! and the four outcome probabilities are folded against a 2x2 payoff
//! matrix. On top of that sits a grid-based Nash equilibrium search with
//! epsilon-certification of every reported equilibrium.
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the
//! default `std` feature for embedded use. All float math goes through
//! `libm` so results are identical in both modes.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod game;
pub mod linalg;
pub mod quantize;
pub mod search;
pub mod strategy;
pub mod tol;

pub(crate) mod math {
    //! Thin wrappers so the numeric kernels build without `std`.

    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[inline]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }

    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }

    #[inline]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
}
