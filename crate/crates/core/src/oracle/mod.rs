//! Slow reference implementations: arithmetic on the multivariate basis
//! `x_0^{e_0} x_1^{e_1} ... x_i^{e_i}` (`e_0 < d`, `e_j < p`), naive Frobenius
//! and traces, irreducibility, and the matrices of linear maps.
//!
//! Nothing here uses push-down, lift-up or the pseudotrace tables, so it can
//! serve as an independent check of them.

use crate::basefield::{frobenius_powers, poly_xgcd, PolyModulus, PrimeModulus, PrimePoly};
use crate::error::{Error, Result};
use crate::towerbuild::TowerDescriptor;
use crate::towerops::TowerElement;

/// Largest number of coordinates the dense conversions accept.
pub const SIZE_LIMIT: usize = 4096;

fn guard(size: usize) -> Result<()> {
    if size > SIZE_LIMIT {
        return Err(Error::SizeGuard { size, limit: SIZE_LIMIT });
    }
    Ok(())
}

/// Distinct-degree test: `X^{p^n} = X mod q` and `gcd(X^{p^{n/r}} - X, q) = 1`
/// for every prime `r | n`.
pub fn irreducible(q: &PrimePoly) -> bool {
    let n = match q.degree() {
        Some(n) if n >= 1 && q.is_monic() => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let f = q.modulus();
    let h = match PolyModulus::new(q.clone()) {
        Ok(h) => h,
        Err(_) => return false,
    };
    let x = PrimePoly::x(f);
    let rs = prime_factors(n);
    let mut exps: Vec<u64> = rs.iter().map(|r| (n / r) as u64).collect();
    exps.push(n as u64);
    let mut xis = frobenius_powers(&h, &exps);
    if xis.pop().expect("n") != h.reduce(&x) {
        return false;
    }
    xis.into_iter().all(|xi| {
        let g = &xi - &x;
        match poly_xgcd(&g, q) {
            Ok((d, _, _)) => d.degree() == Some(0),
            Err(_) => false,
        }
    })
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n % r == 0 {
            out.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A tower `F_p[X_0, ..., X_k] / (Q_0(X_0), X_j^p - X_j - G_{j-1})` where each
/// `G_{j-1}` is given on the multivariate basis of level `j - 1`.
#[derive(Clone, Debug)]
pub struct MultivariateTower {
    q0: PolyModulus,
    gammas: Vec<MultivariateElement>,
}

/// Dense coordinates on the multivariate basis, `e_0` varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultivariateElement {
    level: usize,
    coeffs: Vec<u64>,
}

impl MultivariateElement {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl MultivariateTower {
    /// The tower with generators `gamma_j = x_j^{e_j}` of the given descriptor.
    pub fn primitive(t: &TowerDescriptor) -> Result<Self> {
        Self::primitive_to(t, t.height())
    }

    /// The primitive tower cut at height `k`.
    pub fn primitive_to(t: &TowerDescriptor, k: usize) -> Result<Self> {
        if k > t.height() {
            return Err(Error::LevelOutOfRange { level: k, height: t.height() });
        }
        let mut mt = MultivariateTower { q0: PolyModulus::new(t.q(0)?.clone())?, gammas: Vec::new() };
        for j in 0..k {
            let e = t.kind(j)?.exponent(t.p()) as u64;
            let g = mt.pow(&mt.generator(j)?, e)?;
            mt.gammas.push(g);
        }
        Ok(mt)
    }

    /// A tower with arbitrary generators; `gammas[j]` must have level `j`.
    pub fn general(q0: PrimePoly, gammas: Vec<Vec<u64>>) -> Result<Self> {
        let mut mt = MultivariateTower { q0: PolyModulus::new(q0)?, gammas: Vec::new() };
        for (j, g) in gammas.into_iter().enumerate() {
            let g = mt.element(j, g)?;
            mt.gammas.push(g);
        }
        Ok(mt)
    }

    pub fn field(&self) -> PrimeModulus {
        self.q0.field()
    }

    pub fn p(&self) -> usize {
        self.field().value() as usize
    }

    pub fn d(&self) -> usize {
        self.q0.degree()
    }

    pub fn height(&self) -> usize {
        self.gammas.len()
    }

    pub fn q0(&self) -> &PrimePoly {
        self.q0.poly()
    }

    pub fn gamma(&self, j: usize) -> &MultivariateElement {
        &self.gammas[j]
    }

    pub fn size(&self, level: usize) -> usize {
        self.d() * self.p().pow(level as u32)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.height() {
            return Err(Error::LevelOutOfRange { level, height: self.height() });
        }
        Ok(())
    }

    pub fn element(&self, level: usize, coeffs: Vec<u64>) -> Result<MultivariateElement> {
        self.check_level(level)?;
        let n = self.size(level);
        if coeffs.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: coeffs.len() });
        }
        let f = self.field();
        Ok(MultivariateElement { level, coeffs: coeffs.into_iter().map(|c| f.reduce(c)).collect() })
    }

    pub fn zero(&self, level: usize) -> MultivariateElement {
        MultivariateElement { level, coeffs: vec![0; self.size(level)] }
    }

    pub fn one(&self, level: usize) -> MultivariateElement {
        let mut z = self.zero(level);
        z.coeffs[0] = 1;
        z
    }

    /// `x_j` seen at level `j`.
    pub fn generator(&self, j: usize) -> Result<MultivariateElement> {
        self.check_level(j)?;
        let mut z = self.zero(j);
        if j == 0 {
            let x = self.q0.reduce(&PrimePoly::x(self.field()));
            z.coeffs = x.padded(self.d());
        } else {
            z.coeffs[self.size(j - 1)] = 1;
        }
        Ok(z)
    }

    /// The same element seen at a higher level (zero coordinates appended).
    pub fn lift(&self, a: &MultivariateElement, level: usize) -> Result<MultivariateElement> {
        self.check_level(level)?;
        if level < a.level {
            return Err(Error::LevelMismatch(level, a.level));
        }
        let mut c = a.coeffs.clone();
        c.resize(self.size(level), 0);
        Ok(MultivariateElement { level, coeffs: c })
    }

    pub fn add(&self, a: &MultivariateElement, b: &MultivariateElement) -> Result<MultivariateElement> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        let f = self.field();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect();
        Ok(MultivariateElement { level: a.level, coeffs })
    }

    pub fn sub(&self, a: &MultivariateElement, b: &MultivariateElement) -> Result<MultivariateElement> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        let f = self.field();
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect();
        Ok(MultivariateElement { level: a.level, coeffs })
    }

    pub fn scale(&self, a: &MultivariateElement, c: u64) -> MultivariateElement {
        let f = self.field();
        let c = f.reduce(c);
        MultivariateElement { level: a.level, coeffs: a.coeffs.iter().map(|&x| f.mul(x, c)).collect() }
    }

    fn width(&self, j: usize) -> usize {
        if j == 0 {
            2 * self.d() - 1
        } else {
            2 * self.p() - 1
        }
    }

    fn packed_len(&self, level: usize) -> usize {
        (0..=level).map(|j| self.width(j)).product()
    }

    // spread dense coordinates into the Kronecker layout with room for products
    fn pack(&self, a: &MultivariateElement) -> Vec<u64> {
        let mut out = vec![0; self.packed_len(a.level)];
        let d = self.d();
        let p = self.p();
        for (idx, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut rest = idx / d;
            let mut pos = idx % d;
            let mut stride = self.width(0);
            for j in 1..=a.level {
                pos += (rest % p) * stride;
                rest /= p;
                stride *= self.width(j);
            }
            out[pos] = c;
        }
        out
    }

    fn reduce_packed(&self, level: usize, arr: &[u64]) -> Result<Vec<u64>> {
        let f = self.field();
        if level == 0 {
            let r = self.q0.reduce(&PrimePoly::new(f, arr.to_vec()));
            return Ok(r.padded(self.d()));
        }
        let p = self.p();
        let inner = self.packed_len(level - 1);
        let slice = |t: usize| {
            let lo = (t * inner).min(arr.len());
            let hi = ((t + 1) * inner).min(arr.len());
            let mut s = arr[lo..hi].to_vec();
            s.resize(inner, 0);
            s
        };
        let mut low: Vec<Vec<u64>> = (0..p).map(slice).collect();
        // x_i^t = x_i^{t-p+1} + G_{i-1} x_i^{t-p}, folded while still packed
        let gamma = PrimePoly::from_reduced(f, self.pack(&self.gammas[level - 1]));
        for t in p..2 * p - 1 {
            let hi = slice(t);
            if hi.iter().all(|&c| c == 0) {
                continue;
            }
            let c = MultivariateElement { level: level - 1, coeffs: self.reduce_packed(level - 1, &hi)? };
            let gc = &gamma * &PrimePoly::from_reduced(f, self.pack(&c));
            for (dst, src) in [(t - p + 1, &hi[..]), (t - p, gc.coeffs())] {
                for (o, &x) in low[dst].iter_mut().zip(src) {
                    *o = f.add(*o, x);
                }
            }
        }
        let mut out = Vec::with_capacity(self.size(level));
        for s in &low {
            out.extend(self.reduce_packed(level - 1, s)?);
        }
        Ok(out)
    }

    /// One polynomial product followed by reduction by the triangular
    /// relations, innermost first.
    pub fn mul(&self, a: &MultivariateElement, b: &MultivariateElement) -> Result<MultivariateElement> {
        if a.level != b.level {
            return Err(Error::LevelMismatch(a.level, b.level));
        }
        self.check_level(a.level)?;
        let f = self.field();
        let pa = PrimePoly::from_reduced(f, self.pack(a));
        let pb = PrimePoly::from_reduced(f, self.pack(b));
        let prod = &pa * &pb;
        let coeffs = self.reduce_packed(a.level, prod.coeffs())?;
        Ok(MultivariateElement { level: a.level, coeffs })
    }

    pub fn pow(&self, a: &MultivariateElement, mut e: u64) -> Result<MultivariateElement> {
        let mut base = a.clone();
        let mut r = self.one(a.level);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(r)
    }

    /// `a^{p^n}` by `n` successive `p`-th powers.
    pub fn naive_frobenius(&self, a: &MultivariateElement, n: u64) -> Result<MultivariateElement> {
        let mut cur = a.clone();
        for _ in 0..n {
            cur = self.pow(&cur, self.p() as u64)?;
        }
        Ok(cur)
    }

    /// `a + a^p + ... + a^{p^{n-1}}`
    pub fn naive_pseudotrace(&self, a: &MultivariateElement, n: u64) -> Result<MultivariateElement> {
        let mut acc = self.zero(a.level);
        let mut cur = a.clone();
        for _ in 0..n {
            acc = self.add(&acc, &cur)?;
            cur = self.pow(&cur, self.p() as u64)?;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a`, columns indexed by basis elements.
    pub fn mul_matrix(&self, a: &MultivariateElement) -> Result<Vec<Vec<u64>>> {
        let n = self.size(a.level);
        guard(n)?;
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = self.zero(a.level);
            e.coeffs[k] = 1;
            cols.push(self.mul(a, &e)?.coeffs);
        }
        Ok(cols)
    }

    /// `Tr_{U_i/F_p}(a)` as the trace of the multiplication matrix.
    pub fn matrix_trace(&self, a: &MultivariateElement) -> Result<u64> {
        let f = self.field();
        let cols = self.mul_matrix(a)?;
        Ok((0..cols.len()).fold(0, |acc, k| f.add(acc, cols[k][k])))
    }

    /// `sum_{j} c_j x_i^j` evaluated by Horner.
    pub fn eval_in_generator(&self, level: usize, c: &[u64]) -> Result<MultivariateElement> {
        let x = self.generator(level)?;
        let mut acc = self.zero(level);
        for &cj in c.iter().rev() {
            acc = self.mul(&acc, &x)?;
            acc.coeffs[0] = self.field().add(acc.coeffs[0], cj);
        }
        Ok(acc)
    }
}

/// Expresses a univariate element on the multivariate basis, from the powers
/// of `x_i` computed by repeated products.
pub fn basis_convert(mt: &MultivariateTower, a: &TowerElement) -> Result<MultivariateElement> {
    BasisConverter::new(mt, a.level())?.convert(a)
}

/// [`basis_convert`] for one level, keeping the powers of `x_i` between calls.
#[derive(Clone, Debug)]
pub struct BasisConverter {
    field: PrimeModulus,
    level: usize,
    powers: Vec<Vec<u64>>,
}

impl BasisConverter {
    pub fn new(mt: &MultivariateTower, level: usize) -> Result<Self> {
        mt.check_level(level)?;
        let n = mt.size(level);
        guard(n)?;
        let x = mt.generator(level)?;
        let mut power = mt.one(level);
        let mut powers = Vec::with_capacity(n);
        for _ in 0..n {
            let next = mt.mul(&power, &x)?;
            powers.push(std::mem::replace(&mut power, next).coeffs);
        }
        Ok(BasisConverter { field: mt.field(), level, powers })
    }

    pub fn convert(&self, a: &TowerElement) -> Result<MultivariateElement> {
        if a.level() != self.level {
            return Err(Error::LevelMismatch(self.level, a.level()));
        }
        let n = self.powers.len();
        if a.coeffs().len() != n {
            return Err(Error::LengthMismatch { expected: n, found: a.coeffs().len() });
        }
        let f = self.field;
        let mut out = vec![0u64; n];
        for (&c, power) in a.coeffs().iter().zip(&self.powers) {
            if c != 0 {
                for (o, &v) in out.iter_mut().zip(power) {
                    *o = f.add(*o, f.mul(c, v));
                }
            }
        }
        Ok(MultivariateElement { level: self.level, coeffs: out })
    }
}

/// `a^{p^n}` in `U_i` by `n` modular `p`-th powers of the univariate representative.
pub fn naive_iter_frobenius(t: &TowerDescriptor, a: &TowerElement, n: u64) -> Result<TowerElement> {
    t.check(a)?;
    let h = PolyModulus::new(t.q(a.level())?.clone())?;
    let mut cur = t.to_poly(a);
    for _ in 0..n {
        cur = h.powmod(&cur, t.p());
    }
    t.element(a.level(), cur.padded(h.degree()))
}

/// `a + a^p + ... + a^{p^{n-1}}` in `U_i`, term by term.
pub fn naive_conjugate_sum(t: &TowerDescriptor, a: &TowerElement, n: u64) -> Result<TowerElement> {
    t.check(a)?;
    let h = PolyModulus::new(t.q(a.level())?.clone())?;
    let mut cur = t.to_poly(a);
    let mut acc = PrimePoly::zero(t.field());
    for _ in 0..n {
        acc = &acc + &cur;
        cur = h.powmod(&cur, t.p());
    }
    t.element(a.level(), acc.padded(h.degree()))
}

/// `Tr_{U_i/U_j}(a) = sum_{l < p^{i-j}} a^{|U_j|^l}`, as an element of `U_i`.
pub fn naive_relative_trace(t: &TowerDescriptor, a: &TowerElement, j: usize) -> Result<TowerElement> {
    let i = a.level();
    if j > i {
        return Err(Error::LevelMismatch(i, j));
    }
    let h = PolyModulus::new(t.q(i)?.clone())?;
    let step = t.degree(j);
    let mut cur = t.to_poly(a);
    let mut acc = PrimePoly::zero(t.field());
    for _ in 0..t.degree(i) / step {
        acc = &acc + &cur;
        for _ in 0..step {
            cur = h.powmod(&cur, t.p());
        }
    }
    t.element(i, acc.padded(h.degree()))
}

/// Trace of the multiplication-by-`x^a` matrix modulo `q`, on the power basis.
pub fn matrix_power_trace(q: &PrimePoly, a: usize) -> Result<u64> {
    let n = q.degree().ok_or(Error::ConstantModulus)?;
    guard(n)?;
    let h = PolyModulus::new(q.clone())?;
    let f = q.modulus();
    let xa = h.powmod(&PrimePoly::x(f), a as u64);
    let mut tr = 0;
    for k in 0..n {
        let col = h.mulmod(&xa, &PrimePoly::monomial(f, 1, k));
        tr = f.add(tr, col.coeff(k));
    }
    Ok(tr)
}
