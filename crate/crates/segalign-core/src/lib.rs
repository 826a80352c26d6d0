//! Segment-based sequence alignment over finite pre-orders.
//!
//! The crate models colored segments, their truncations and the alignment
//! environments they induce, together with the finite-set limits and right
//! Kan extensions used to glue pairwise alignments into multiple ones.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod alignment_functor;
pub mod chromology;
pub mod dp_align;
pub mod environment;
pub mod error;
pub mod finset;
pub mod kan;
pub mod preorder;
pub mod segments;
pub mod slices;
pub mod truncation;

pub use error::{Error, Result};
