pub mod charsums;
pub mod cyclotomic;
pub mod error;
pub mod euler;
pub mod ffield;
pub mod geometry;
pub mod harness;
pub mod heckechar;
pub mod motive;
pub mod numtheory;
pub mod qseries;
