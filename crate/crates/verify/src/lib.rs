//! Identity tables and proptest generators shared by the property suite and
//! the acceptance runner.

pub mod identities;

#[cfg(test)]
mod properties;

pub use identities::*;
