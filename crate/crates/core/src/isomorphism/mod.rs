//! Artin-Schreier solving, and isomorphisms from arbitrary Artin-Schreier
//! towers onto the primitive one.

pub mod general;
pub mod solve;

pub use general::{
    apply_inverse, apply_isomorphism, compute_images, primitive_general_tower, random_general_tower, GeneralElement, GeneralTower,
    GeneralTowerFile,
};
pub use solve::{approximate_as, artin_schreier_solve, find_parameterization, naive_solve};
