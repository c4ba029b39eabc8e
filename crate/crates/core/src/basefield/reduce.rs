use std::borrow::Cow;

use super::modulus::PrimeModulus;
use super::poly::PrimePoly;
use crate::error::{Error, Result};

const NAIVE_REDUCTION_DEGREE: usize = 48;

/// A monic modulus `h` of positive degree with a precomputed inverse of its
/// reversal, so that reductions cost two products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModulus {
    h: PrimePoly,
    rev_inv: PrimePoly,
}

impl PolyModulus {
    pub fn new(h: PrimePoly) -> Result<Self> {
        let n = h.degree().ok_or(Error::ConstantModulus)?;
        Self::with_precision(h, n)
    }

    /// Keeps `rev(h)^{-1} mod X^prec`.
    pub fn with_precision(h: PrimePoly, prec: usize) -> Result<Self> {
        let n = h.degree().ok_or(Error::ConstantModulus)?;
        if n == 0 {
            return Err(Error::ConstantModulus);
        }
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
        let rev_inv = h.rev(n)?.inv_series(prec.max(1))?;
        Ok(Self { h, rev_inv })
    }

    #[inline]
    pub fn poly(&self) -> &PrimePoly {
        &self.h
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.h.coeffs().len() - 1
    }

    #[inline]
    pub fn field(&self) -> PrimeModulus {
        self.h.modulus()
    }

    pub fn precision(&self) -> usize {
        self.rev_inv.coeffs().len().max(1)
    }

    /// `rev_n(h)^{-1} mod X^len`, from the cache when it is long enough.
    pub fn rev_inverse(&self, len: usize) -> Cow<'_, PrimePoly> {
        if len <= self.precision() {
            Cow::Owned(self.rev_inv.truncate(len))
        } else {
            Cow::Owned(
                self.h
                    .rev(self.degree())
                    .and_then(|r| r.inv_series(len))
                    .expect("monic modulus"),
            )
        }
    }

    pub fn reduce(&self, a: &PrimePoly) -> PrimePoly {
        let n = self.degree();
        let da = match a.degree() {
            Some(d) if d >= n => d,
            _ => return a.clone(),
        };
        if n < NAIVE_REDUCTION_DEGREE || da - n + 1 < 16 {
            return a.divrem_naive(&self.h).1;
        }
        let prec = self.precision();
        let mut r = a.clone();
        // peel off the top in chunks the cached inverse can handle
        while let Some(d) = r.degree() {
            if d < n {
                break;
            }
            let ql = d - n + 1;
            if ql <= prec {
                r = self.barrett(&r, d, ql);
                break;
            }
            let s = d + 1 - (n + prec);
            let hi = r.shift_down(s);
            let lo = r.truncate(s);
            let hi = self.barrett(&hi, n + prec - 1, prec);
            r = &hi.shift(s) + &lo;
        }
        r
    }

    fn barrett(&self, a: &PrimePoly, d: usize, ql: usize) -> PrimePoly {
        let n = self.degree();
        let top = a.shift_down(n).rev(ql - 1).expect("degree bound");
        let q = (&top * &self.rev_inv.truncate(ql)).truncate(ql).rev(ql - 1).expect("degree bound");
        debug_assert!(d + 1 - n == ql);
        (a - &(&q * &self.h)).truncate(n)
    }

    pub fn mulmod(&self, a: &PrimePoly, b: &PrimePoly) -> PrimePoly {
        self.reduce(&(a * b))
    }

    pub fn powmod(&self, a: &PrimePoly, mut e: u64) -> PrimePoly {
        let mut base = self.reduce(a);
        let mut r = self.reduce(&PrimePoly::one(self.field()));
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulmod(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base);
            }
        }
        r
    }

    /// `a^p mod h`, using `a(X)^p = a(X^p)` over F_p.
    pub fn frobenius(&self, a: &PrimePoly) -> PrimePoly {
        let f = self.field();
        let p = f.value() as usize;
        if a.is_zero() {
            return a.clone();
        }
        if a.degree().unwrap_or(0).saturating_mul(p) > 64 * self.degree().max(1) {
            return self.powmod(a, f.value());
        }
        let mut v = vec![0; a.coeffs().len().saturating_sub(1) * p + 1];
        for (i, &c) in a.coeffs().iter().enumerate() {
            v[i * p] = c;
        }
        self.reduce(&PrimePoly::from_reduced(f, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrett_matches_long_division() {
        let f = PrimeModulus::new(7).unwrap();
        let h = PrimePoly::new(f, (0..200).map(|i| (i * 3 + 1) % 7).chain([1]).collect());
        let m = PolyModulus::new(h.clone()).unwrap();
        for len in [10usize, 150, 201, 350, 401, 900, 2000] {
            let a = PrimePoly::new(f, (0..len as u64).map(|i| (i * i + 5) % 7).collect());
            assert_eq!(m.reduce(&a), a.divrem_naive(&h).1, "len {len}");
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        let f = PrimeModulus::new(5).unwrap();
        assert_eq!(PolyModulus::new(PrimePoly::constant(f, 1)), Err(Error::ConstantModulus));
        assert_eq!(PolyModulus::new(PrimePoly::new(f, vec![1, 2])), Err(Error::NotMonic));
    }

    #[test]
    fn frobenius_is_pth_power() {
        let f = PrimeModulus::new(3).unwrap();
        let h = PrimePoly::new(f, vec![2, 1, 0, 0, 1, 1, 0, 1]);
        let m = PolyModulus::new(h).unwrap();
        let a = PrimePoly::new(f, vec![1, 2, 0, 1, 1, 2]);
        assert_eq!(m.frobenius(&a), m.powmod(&a, 3));
    }
}
