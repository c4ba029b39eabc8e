//! Conversions between the univariate basis of `U_i` and the bivariate basis
//! over `U_{i-1}`.

pub mod bivariate;
pub mod mulmod;
pub mod pushdown;

pub use bivariate::{biv_add, biv_mul, BivariateElement};
pub use mulmod::{mulmod, mulmod_transposed, BivPoly};
pub use pushdown::{
    embed, embed_to, lift_up, precompute_level_tables, project, push_down, push_down_rec,
    push_down_rec_transposed, push_down_transposed, TraceTable,
};
