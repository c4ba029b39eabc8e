//! Polynomials over `U_i`, multiplied through Kronecker substitution.

use super::TowerElement;
use crate::basefield::PrimePoly;
use crate::error::{Error, Result};
use crate::towerbuild::TowerDescriptor;

const NEWTON_DIVISION_THRESHOLD: usize = 16;

/// A polynomial in `Y` with coefficients in `U_i`, constant term first and
/// no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerPoly {
    level: usize,
    coeffs: Vec<TowerElement>,
}

impl TowerPoly {
    pub fn new(t: &TowerDescriptor, level: usize, coeffs: Vec<TowerElement>) -> Result<Self> {
        for c in &coeffs {
            if c.level() != level {
                return Err(Error::LevelMismatch(level, c.level()));
            }
            t.check(c)?;
        }
        Ok(Self::trimmed(level, coeffs))
    }

    fn trimmed(level: usize, mut coeffs: Vec<TowerElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TowerPoly { level, coeffs }
    }

    pub fn zero(level: usize) -> Self {
        TowerPoly { level, coeffs: Vec::new() }
    }

    pub fn one(t: &TowerDescriptor, level: usize) -> Self {
        TowerPoly { level, coeffs: vec![t.one(level)] }
    }

    /// `Y - c`
    pub fn linear(t: &TowerDescriptor, c: &TowerElement) -> Self {
        TowerPoly { level: c.level(), coeffs: vec![t.neg(c), t.one(c.level())] }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[TowerElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self, t: &TowerDescriptor) -> bool {
        self.coeffs.last().is_some_and(|c| *c == t.one(self.level))
    }

    /// Horner evaluation at `c`.
    pub fn eval(&self, t: &TowerDescriptor, c: &TowerElement) -> Result<TowerElement> {
        let mut acc = t.zero(self.level);
        for a in self.coeffs.iter().rev() {
            acc = t.add(&t.mul(&acc, c)?, a)?;
        }
        Ok(acc)
    }

    fn coeff_or_zero(&self, t: &TowerDescriptor, i: usize) -> TowerElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| t.zero(self.level))
    }
}

fn same_level(a: &TowerPoly, b: &TowerPoly) -> Result<usize> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    Ok(a.level)
}

pub fn tower_poly_add(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<TowerPoly> {
    let level = same_level(a, b)?;
    let n = a.coeffs.len().max(b.coeffs.len());
    let v = (0..n)
        .map(|i| t.add(&a.coeff_or_zero(t, i), &b.coeff_or_zero(t, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerPoly::trimmed(level, v))
}

pub fn tower_poly_sub(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<TowerPoly> {
    let level = same_level(a, b)?;
    let n = a.coeffs.len().max(b.coeffs.len());
    let v = (0..n)
        .map(|i| t.sub(&a.coeff_or_zero(t, i), &b.coeff_or_zero(t, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerPoly::trimmed(level, v))
}

/// Unreduced Kronecker product of two coefficient lists over `U_i`: each
/// coefficient occupies a block of `2n - 1` base coefficients.
pub(crate) fn kronecker_mul(
    t: &TowerDescriptor,
    level: usize,
    a: &[TowerElement],
    b: &[TowerElement],
) -> Vec<TowerElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let f = t.field();
    let n = t.degree(level);
    let block = 2 * n - 1;
    let pack = |x: &[TowerElement]| {
        let mut v = vec![0u64; (x.len() - 1) * block + n];
        for (k, c) in x.iter().enumerate() {
            v[k * block..k * block + n].copy_from_slice(c.coeffs());
        }
        PrimePoly::from_reduced(f, v)
    };
    let prod = &pack(a) * &pack(b);
    let m = t.modulus(level);
    let raw = prod.coeffs();
    (0..a.len() + b.len() - 1)
        .map(|k| {
            let lo = (k * block).min(raw.len());
            let hi = ((k + 1) * block).min(raw.len());
            let chunk = PrimePoly::from_reduced(f, raw[lo..hi].to_vec());
            TowerElement::from_parts(level, m.reduce(&chunk).padded(n))
        })
        .collect()
}

pub fn tower_poly_mul(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<TowerPoly> {
    let level = same_level(a, b)?;
    Ok(TowerPoly::trimmed(level, kronecker_mul(t, level, &a.coeffs, &b.coeffs)))
}

fn truncated(a: &TowerPoly, n: usize) -> TowerPoly {
    TowerPoly::trimmed(a.level, a.coeffs.iter().take(n).cloned().collect())
}

fn reversed(t: &TowerDescriptor, a: &TowerPoly, e: usize) -> TowerPoly {
    let v = (0..=e).map(|i| a.coeff_or_zero(t, e - i)).collect();
    TowerPoly::trimmed(a.level, v)
}

/// Inverse of a power series with constant term 1, to precision `n`.
fn inverse_series(t: &TowerDescriptor, s: &TowerPoly, n: usize) -> Result<TowerPoly> {
    let level = s.level;
    let mut g = TowerPoly::one(t, level);
    let mut prec = 1;
    let two = TowerPoly { level, coeffs: vec![t.constant(level, 2)] };
    while prec < n {
        prec = (2 * prec).min(n);
        let sg = truncated(&tower_poly_mul(t, &truncated(s, prec), &g)?, prec);
        let corr = tower_poly_sub(t, &two, &sg)?;
        g = truncated(&tower_poly_mul(t, &g, &corr)?, prec);
    }
    Ok(g)
}

/// Euclidean division by a monic divisor.
pub fn tower_poly_divrem(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<(TowerPoly, TowerPoly)> {
    let level = same_level(a, b)?;
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    if !b.is_monic(t) {
        return Err(Error::NotMonic);
    }
    let da = match a.degree() {
        Some(da) if da >= db => da,
        _ => return Ok((TowerPoly::zero(level), a.clone())),
    };
    let qlen = da - db + 1;
    if qlen < NEWTON_DIVISION_THRESHOLD || db < NEWTON_DIVISION_THRESHOLD {
        return divrem_naive(t, a, b);
    }
    let inv = inverse_series(t, &reversed(t, b, db), qlen)?;
    let qrev = truncated(&tower_poly_mul(t, &reversed(t, a, da), &inv)?, qlen);
    let q = reversed(t, &qrev, qlen - 1);
    let r = tower_poly_sub(t, a, &tower_poly_mul(t, &q, b)?)?;
    Ok((q, truncated(&r, db)))
}

/// Schoolbook division by a monic divisor.
pub fn divrem_naive(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<(TowerPoly, TowerPoly)> {
    let level = same_level(a, b)?;
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    if !b.is_monic(t) {
        return Err(Error::NotMonic);
    }
    let mut r = a.coeffs.clone();
    if r.len() <= db {
        return Ok((TowerPoly::zero(level), a.clone()));
    }
    let mut q = vec![t.zero(level); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            r[k + j] = t.sub(&r[k + j], &t.mul(&c, bj)?)?;
        }
        q[k] = c;
    }
    r.truncate(db);
    Ok((TowerPoly::trimmed(level, q), TowerPoly::trimmed(level, r)))
}

fn make_monic(t: &TowerDescriptor, a: &TowerPoly) -> Result<(TowerPoly, TowerElement)> {
    let lc = a.coeffs.last().ok_or(Error::ZeroGcd)?;
    let inv = t.inv(lc)?;
    let v = a.coeffs.iter().map(|c| t.mul(c, &inv)).collect::<Result<Vec<_>>>()?;
    Ok((TowerPoly::trimmed(a.level, v), inv))
}

fn scale(t: &TowerDescriptor, a: &TowerPoly, c: &TowerElement) -> Result<TowerPoly> {
    let v = a.coeffs.iter().map(|x| t.mul(x, c)).collect::<Result<Vec<_>>>()?;
    Ok(TowerPoly::trimmed(a.level, v))
}

/// Extended GCD: `(G, U, V)` with `G` monic and `G = U A + V B`.
pub fn tower_poly_xgcd(t: &TowerDescriptor, a: &TowerPoly, b: &TowerPoly) -> Result<(TowerPoly, TowerPoly, TowerPoly)> {
    let level = same_level(a, b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (TowerPoly::one(t, level), TowerPoly::zero(level));
    let (mut u0, mut u1) = (TowerPoly::zero(level), TowerPoly::one(t, level));
    while !r1.is_zero() {
        let (m, lc_inv) = make_monic(t, &r1)?;
        let (q, r) = tower_poly_divrem(t, &r0, &m)?;
        let q = scale(t, &q, &lc_inv)?;
        let s = tower_poly_sub(t, &s0, &tower_poly_mul(t, &q, &s1)?)?;
        let u = tower_poly_sub(t, &u0, &tower_poly_mul(t, &q, &u1)?)?;
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        u0 = std::mem::replace(&mut u1, u);
    }
    let (g, lc_inv) = make_monic(t, &r0)?;
    Ok((g, scale(t, &s0, &lc_inv)?, scale(t, &u0, &lc_inv)?))
}
