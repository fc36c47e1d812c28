#![no_std]
extern crate alloc;

pub mod error;
pub mod geometry;
pub mod ode;
pub mod quadrature;
pub mod radial_oracle;
pub mod specfun;
pub mod spectrum;
pub mod wavefunction;
