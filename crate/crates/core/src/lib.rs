//! Executable checks for strict Lie 2-algebra actions on Lie algebroids.
//!
//! The symbolic layers ([`graded_poly`], [`algebroid`], [`lie2`], [`action`])
//! work with exact rationals, so every identity there is decided by comparing
//! coefficients. The group-level layers ([`groups`], [`integrate`],
//! [`two_groupoid`]) use floating point matrices and explicit tolerances.

#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod algebroid;
pub mod catalog;
pub mod error;
pub mod graded_poly;
pub mod groups;
pub mod integrate;
pub mod io;
pub mod lie2;
pub mod report;
pub mod two_groupoid;

pub use error::{G2Error, Result};
