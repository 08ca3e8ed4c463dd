#![allow(clippy::needless_range_loop)]

pub mod algebroid;
pub mod battery;
pub mod bundle;
pub mod courant;
pub mod dirac;
pub mod dorfman;
pub mod laops;
pub mod prolong;
pub mod report;
pub mod symkernel;

pub use bundle::{Mat, Patch, Section};
pub use report::{CheckReport, Status, Witness};
pub use symkernel::{parse_poly, rat, ratio, Poly, PolyError, Rational, Ring};
