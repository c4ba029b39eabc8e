//! Arithmetic in `U_i` on the univariate basis, and in `U_i[Y]`.

mod arith;
pub mod element;
pub mod poly;

pub use element::TowerElement;
pub use poly::{tower_poly_add, tower_poly_divrem, tower_poly_mul, tower_poly_sub, tower_poly_xgcd, TowerPoly};
