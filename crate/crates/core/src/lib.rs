// SPDX-License-Identifier: Apache-2.0

//! Rank-metric coset coding with staircase codes for communication-efficient
//! secure distributed storage.

pub mod error;
pub mod field;
pub mod linearized;
pub mod matrix;
pub mod phi;
pub mod channel;
pub mod codes;
pub mod coset;
pub mod rng;
pub mod rmx;
pub mod staircase;

pub use error::{DecodeFailure, Error, Result};
pub use field::{BaseField, ExtElement, Field, FieldTower, Fq, TowerPolys};
pub use matrix::{BaseMatrix, ExtMatrix, Matrix};
