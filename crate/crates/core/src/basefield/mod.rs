//! Arithmetic in F_p and F_p[X].

pub mod dual;
pub mod gcd;
pub mod modcomp;
pub mod modulus;
pub mod mul;
pub mod poly;
pub mod reduce;

pub use dual::{extend_recurrent, newton_trace_series, power_sums, transposed_mul, transposed_mul_naive};
pub use gcd::{inverse_mod, poly_xgcd};
pub use modcomp::{compose_mod, frobenius_power, frobenius_powers, modular_compose};
pub use modulus::PrimeModulus;
pub use poly::{poly_divrem, poly_mul, poly_rev, PrimePoly};
pub use reduce::PolyModulus;
