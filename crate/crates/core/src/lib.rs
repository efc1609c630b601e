#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod int;
pub mod laurent;
pub mod matrix;
pub mod quiver;
pub mod report;
pub mod seed;
pub mod sequence;
pub mod unfold;
pub mod verify;
