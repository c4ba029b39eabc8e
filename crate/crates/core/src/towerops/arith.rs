use rand::Rng;

use super::TowerElement;
use crate::basefield::{inverse_mod, PrimePoly};
use crate::error::{Error, Result};
use crate::towerbuild::TowerDescriptor;

/// Field operations in `U_i`, on the power basis of `x_i`.
impl TowerDescriptor {
    pub fn zero(&self, level: usize) -> TowerElement {
        TowerElement::from_parts(level, vec![0; self.degree(level)])
    }

    pub fn one(&self, level: usize) -> TowerElement {
        self.constant(level, 1)
    }

    pub fn constant(&self, level: usize, c: u64) -> TowerElement {
        let mut v = vec![0; self.degree(level)];
        v[0] = self.field().reduce(c);
        TowerElement::from_parts(level, v)
    }

    /// The generator `x_i`.
    pub fn x(&self, level: usize) -> Result<TowerElement> {
        let x = PrimePoly::x(self.field());
        self.from_poly(level, &x)
    }

    /// An element from its coordinates; residues are reduced mod p.
    pub fn element(&self, level: usize, coeffs: Vec<u64>) -> Result<TowerElement> {
        self.level(level)?;
        let n = self.degree(level);
        if coeffs.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: coeffs.len() });
        }
        let f = self.field();
        Ok(TowerElement::from_parts(level, coeffs.into_iter().map(|c| f.reduce(c)).collect()))
    }

    /// The class of `a(x_i)`.
    pub fn from_poly(&self, level: usize, a: &PrimePoly) -> Result<TowerElement> {
        let m = &self.level(level)?.q;
        a.check_same(m.poly())?;
        Ok(TowerElement::from_parts(level, m.reduce(a).padded(m.degree())))
    }

    /// The canonical preimage in F_p[X] of degree `< p^i d`.
    pub fn to_poly(&self, a: &TowerElement) -> PrimePoly {
        PrimePoly::new(self.field(), a.coeffs().to_vec())
    }

    pub fn random<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> TowerElement {
        let p = self.p();
        let v = (0..self.degree(level)).map(|_| rng.gen_range(0..p)).collect();
        TowerElement::from_parts(level, v)
    }

    /// Checks that `a` is a well-formed element of this tower.
    pub fn check(&self, a: &TowerElement) -> Result<()> {
        self.level(a.level())?;
        let n = self.degree(a.level());
        if a.coeffs().len() != n {
            return Err(Error::LengthMismatch { expected: n, found: a.coeffs().len() });
        }
        let p = self.p();
        if a.coeffs().iter().any(|&c| c >= p) {
            return Err(Error::Invalid(format!("coordinate not reduced modulo {p}")));
        }
        Ok(())
    }

    fn same_level(&self, a: &TowerElement, b: &TowerElement) -> Result<()> {
        if a.level() != b.level() {
            return Err(Error::LevelMismatch(a.level(), b.level()));
        }
        self.check(a)?;
        self.check(b)
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        let f = self.field();
        let v = a.coeffs().iter().zip(b.coeffs()).map(|(&x, &y)| f.add(x, y)).collect();
        Ok(TowerElement::from_parts(a.level(), v))
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        let f = self.field();
        let v = a.coeffs().iter().zip(b.coeffs()).map(|(&x, &y)| f.sub(x, y)).collect();
        Ok(TowerElement::from_parts(a.level(), v))
    }

    pub fn neg(&self, a: &TowerElement) -> TowerElement {
        let f = self.field();
        TowerElement::from_parts(a.level(), a.coeffs().iter().map(|&x| f.neg(x)).collect())
    }

    pub fn scale(&self, a: &TowerElement, c: u64) -> TowerElement {
        let f = self.field();
        let c = f.reduce(c);
        TowerElement::from_parts(a.level(), a.coeffs().iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        let m = self.modulus(a.level());
        let prod = m.mulmod(&self.to_poly(a), &self.to_poly(b));
        Ok(TowerElement::from_parts(a.level(), prod.padded(m.degree())))
    }

    pub fn square(&self, a: &TowerElement) -> Result<TowerElement> {
        self.mul(a, a)
    }

    /// Inverse by extended GCD with `Q_i`.
    pub fn inv(&self, a: &TowerElement) -> Result<TowerElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        let m = self.modulus(a.level());
        let inv = inverse_mod(&self.to_poly(a), m.poly())?;
        Ok(TowerElement::from_parts(a.level(), inv.padded(m.degree())))
    }

    pub fn pow(&self, a: &TowerElement, mut e: u64) -> Result<TowerElement> {
        self.check(a)?;
        let mut base = a.clone();
        let mut r = self.one(a.level());
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base)?;
            }
        }
        Ok(r)
    }

    /// `a^p`, by one powering.
    pub fn frobenius_once(&self, a: &TowerElement) -> Result<TowerElement> {
        self.check(a)?;
        let m = self.modulus(a.level());
        Ok(TowerElement::from_parts(a.level(), m.frobenius(&self.to_poly(a)).padded(m.degree())))
    }

    /// `Tr_{U_i/F_p}(a)`.
    pub fn absolute_trace(&self, a: &TowerElement) -> Result<u64> {
        self.check(a)?;
        let f = self.field();
        let tr = self.trace_series(a.level())?;
        Ok(a.coeffs().iter().zip(tr).fold(0, |acc, (&x, &t)| f.add(acc, f.mul(x, t))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::PrimeModulus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, q0: &[i64], k: usize) -> TowerDescriptor {
        let f = PrimeModulus::new(p).unwrap();
        TowerDescriptor::build(f, PrimePoly::from_i64(f, q0), k).unwrap()
    }

    #[test]
    fn level_one_over_f2() {
        let t = tower(2, &[1, 1], 1);
        let x1 = t.x(1).unwrap();
        assert_eq!(t.mul(&x1, &x1).unwrap().coeffs(), &[1, 1]);
        assert_eq!(t.inv(&x1).unwrap().coeffs(), &[1, 1]);
        assert_eq!(t.mul(&x1, &t.one(1)).unwrap(), x1);
        assert_eq!(t.inv(&t.zero(1)), Err(Error::NotInvertible));
        assert!(matches!(t.add(&x1, &t.one(0)), Err(Error::LevelMismatch(1, 0))));
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, q0, k) in [(2u64, vec![1i64, 1], 5), (3, vec![2, 1], 3), (2, vec![1, 1, 1], 3)] {
            let t = tower(p, &q0, k);
            for level in 0..=k {
                for _ in 0..10 {
                    let a = t.random(level, &mut rng);
                    let b = t.random(level, &mut rng);
                    let c = t.random(level, &mut rng);
                    let ab_c = t.mul(&t.mul(&a, &b).unwrap(), &c).unwrap();
                    let a_bc = t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                    let lhs = t.mul(&a, &t.add(&b, &c).unwrap()).unwrap();
                    let rhs = t.add(&t.mul(&a, &b).unwrap(), &t.mul(&a, &c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                    if !a.is_zero() {
                        assert_eq!(t.mul(&a, &t.inv(&a).unwrap()).unwrap(), t.one(level));
                    }
                    assert_eq!(t.frobenius_once(&a).unwrap(), t.pow(&a, p).unwrap());
                }
            }
        }
    }
}
