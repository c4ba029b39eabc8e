use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::modulus::PrimeModulus;
use super::mul::mul_slices;
use crate::error::{Error, Result};

/// Dense polynomial over F_p, constant term first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimePoly {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl PrimePoly {
    /// Builds a polynomial from residues, reducing them mod p and trimming.
    pub fn new(modulus: PrimeModulus, coeffs: Vec<u64>) -> Self {
        let mut coeffs = coeffs;
        for c in coeffs.iter_mut() {
            *c = modulus.reduce(*c);
        }
        trim(&mut coeffs);
        Self { modulus, coeffs }
    }

    /// Builds a polynomial from coefficients already in `[0, p)`.
    pub(crate) fn from_reduced(modulus: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus.value()));
        trim(&mut coeffs);
        Self { modulus, coeffs }
    }

    pub fn from_i64(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_reduced(modulus, coeffs.iter().map(|&c| modulus.from_i64(c)).collect())
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        Self { modulus, coeffs: Vec::new() }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Self::constant(modulus, 1)
    }

    pub fn constant(modulus: PrimeModulus, c: u64) -> Self {
        Self::new(modulus, vec![c])
    }

    /// `c * X^e`.
    pub fn monomial(modulus: PrimeModulus, c: u64, e: usize) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Self::new(modulus, v)
    }

    pub fn x(modulus: PrimeModulus) -> Self {
        Self::monomial(modulus, 1, 1)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficients padded with zeros to exactly `n` entries.
    pub fn padded(&self, n: usize) -> Vec<u64> {
        let mut v = self.coeffs.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus.value(), other.modulus.value()));
        }
        Ok(())
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.modulus;
        Self::from_reduced(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn make_monic(&self) -> Self {
        match self.modulus.inv(self.leading()) {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    /// `self * X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self { modulus: self.modulus, coeffs: v }
    }

    /// `self mod X^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_reduced(self.modulus, self.coeffs[..n.min(self.coeffs.len())].to_vec())
    }

    /// `self div X^n`.
    pub fn shift_down(&self, n: usize) -> Self {
        Self::from_reduced(self.modulus, self.coeffs[n.min(self.coeffs.len())..].to_vec())
    }

    pub fn derivative(&self) -> Self {
        let f = self.modulus;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.reduce(i as u64)))
            .collect();
        Self::from_reduced(f, v)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.modulus;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `X^e P(1/X)`; fails when `deg P > e`.
    pub fn rev(&self, e: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > e {
                return Err(Error::DegreeBound { degree: d, bound: e });
            }
        }
        let mut v = vec![0; e + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[e - i] = c;
        }
        Ok(Self::from_reduced(self.modulus, v))
    }

    /// Inverse of `self` modulo `X^n`; the constant term must be nonzero.
    pub fn inv_series(&self, n: usize) -> Result<Self> {
        let f = self.modulus;
        let c0 = f.inv(self.coeff(0))?;
        let mut g = Self::constant(f, c0);
        let mut k = 1;
        while k < n {
            k = (2 * k).min(n);
            // g <- g (2 - self g) mod X^k
            let e = (&self.truncate(k) * &g).truncate(k);
            let two_minus = &Self::constant(f, 2) - &e;
            g = (&g * &two_minus).truncate(k);
        }
        Ok(g.truncate(n))
    }

    /// Euclidean division; Newton iteration for large quotients.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        self.check_same(b)?;
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let f = self.modulus;
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return Ok((Self::zero(f), self.clone())),
        };
        let qlen = da - db + 1;
        if qlen < 64 || db < 32 {
            return Ok(self.divrem_naive(b));
        }
        let ra = self.rev(da)?;
        let rb = b.rev(db)?;
        let inv = rb.inv_series(qlen)?;
        let q = (&ra.truncate(qlen) * &inv).truncate(qlen).rev(qlen - 1)?;
        let r = (self - &(&q * b)).truncate(db);
        Ok((q, r))
    }

    pub(crate) fn divrem_naive(&self, b: &Self) -> (Self, Self) {
        let f = self.modulus;
        let db = b.degree().expect("nonzero divisor");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return (Self::zero(f), self.clone());
        }
        let lc_inv = f.inv(b.leading()).expect("p prime");
        let mut q = vec![0; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = f.mul(r[i], lc_inv);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            let off = i - db;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                r[off + j] = f.sub(r[off + j], f.mul(c, bj));
            }
        }
        r.truncate(db);
        (Self::from_reduced(f, q), Self::from_reduced(f, r))
    }

    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.divrem(b)?.1)
    }
}

impl fmt::Debug for PrimePoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{self} (mod {})", self.modulus.value())
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(fm, "{c}")?,
                (1, 1) => write!(fm, "X")?,
                (1, c) => write!(fm, "{c}*X")?,
                (i, 1) => write!(fm, "X^{i}")?,
                (i, c) => write!(fm, "{c}*X^{i}")?,
            }
        }
        Ok(())
    }
}

fn assert_same(a: &PrimePoly, b: &PrimePoly) {
    assert_eq!(a.modulus, b.modulus, "polynomials over different prime fields");
}

impl Add for &PrimePoly {
    type Output = PrimePoly;
    fn add(self, rhs: &PrimePoly) -> PrimePoly {
        assert_same(self, rhs);
        let f = self.modulus;
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (&self.coeffs, &rhs.coeffs)
        } else {
            (&rhs.coeffs, &self.coeffs)
        };
        let mut v = long.clone();
        for (o, &s) in v.iter_mut().zip(short) {
            *o = f.add(*o, s);
        }
        PrimePoly::from_reduced(f, v)
    }
}

impl Sub for &PrimePoly {
    type Output = PrimePoly;
    fn sub(self, rhs: &PrimePoly) -> PrimePoly {
        assert_same(self, rhs);
        let f = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = self.coeffs.clone();
        v.resize(n, 0);
        for (o, &s) in v.iter_mut().zip(&rhs.coeffs) {
            *o = f.sub(*o, s);
        }
        PrimePoly::from_reduced(f, v)
    }
}

impl Neg for &PrimePoly {
    type Output = PrimePoly;
    fn neg(self) -> PrimePoly {
        let f = self.modulus;
        PrimePoly::from_reduced(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &PrimePoly {
    type Output = PrimePoly;
    fn mul(self, rhs: &PrimePoly) -> PrimePoly {
        assert_same(self, rhs);
        PrimePoly::from_reduced(self.modulus, mul_slices(self.modulus, &self.coeffs, &rhs.coeffs))
    }
}

/// Product in F_p[X].
pub fn poly_mul(a: &PrimePoly, b: &PrimePoly) -> Result<PrimePoly> {
    a.check_same(b)?;
    Ok(a * b)
}

/// Euclidean division `a = q b + r` with `deg r < deg b`.
pub fn poly_divrem(a: &PrimePoly, b: &PrimePoly) -> Result<(PrimePoly, PrimePoly)> {
    a.divrem(b)
}

/// Reversal `X^e a(1/X)`.
pub fn poly_rev(a: &PrimePoly, e: usize) -> Result<PrimePoly> {
    a.rev(e)
}
