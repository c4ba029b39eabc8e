//! Construction of the primitive tower: minimal polynomials `Q_0, ..., Q_k`
//! and the per-level tables.

pub mod compose;
pub mod descriptor;
pub mod serial;
pub mod star;

pub use compose::{compose, naive_compose};
pub use descriptor::{extend_tower, init_tower, smallest_base_polynomial, GeneratorKind, TowerDescriptor};
pub use serial::TowerFile;
pub use star::{cyclotomic, cyclotomic_mod_p, star_product};
