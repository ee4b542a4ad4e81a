//! Exact-arithmetic construction of Neumann subgroups of the extended
//! modular group from involution block data, with coset-graph machinery
//! and independent cross-checking scans.

pub mod cli;
pub mod graph232;
pub mod invospec;
pub mod neumann;
pub mod oracle;
pub mod pgl2;
