//! Exact tools for the finite rigid sets X_n of pants graphs of punctured
//! spheres: curves, mapping classes, pants graphs, the constructions of the
//! rigid sets, and checkers for their finite properties.

pub mod curve;
pub mod mapclass;
pub mod pants;
pub mod rigidset;
pub mod graphs;
pub mod verify;
