//! Command line and HTTP front ends for the `toric-nurbs` engine.

pub mod api;
pub mod service;
