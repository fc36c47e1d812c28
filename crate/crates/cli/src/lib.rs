//! Spectrum sweeps, self-verification and table export on top of
//! `spiral-dirac-core`.

pub mod command;
pub mod config;
pub mod error;
pub mod export;
pub mod table;
pub mod verify;
