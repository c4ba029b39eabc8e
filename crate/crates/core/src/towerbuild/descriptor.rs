use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::compose::compose;
use super::star::star_product;
use crate::basefield::{inverse_mod, power_sums, PolyModulus, PrimeModulus, PrimePoly};
use crate::error::{Error, Result};
use crate::frobtrace::{self, BetaTables};
use crate::oracle;
use crate::towerops::TowerElement;

/// Shape of the generator `G_i` whose class `gamma_i` defines the next level
/// through `x_{i+1}^p - x_{i+1} = gamma_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// `G_i = X_i`
    Linear,
    /// `G_i = X_i^{2p-1}`
    Power,
}

impl GeneratorKind {
    /// Exponent `e` with `gamma_i = x_i^e`.
    pub fn exponent(self, p: u64) -> usize {
        match self {
            GeneratorKind::Linear => 1,
            GeneratorKind::Power => 2 * p as usize - 1,
        }
    }

    /// The fixed schedule: linear at level 0, and at level 1 when `p = 2` and
    /// `d` is odd; power everywhere else.
    pub fn schedule(p: u64, d: usize, level: usize) -> Self {
        match level {
            0 => GeneratorKind::Linear,
            1 if p == 2 && d % 2 == 1 => GeneratorKind::Linear,
            _ => GeneratorKind::Power,
        }
    }
}

/// Parameters `(c, n, K)` of the top-level slicing used by push-down at a
/// level of degree `size`: `size - 1 < (c+1) p^n` and `K` is the `Y`-length
/// of the reduced bivariate polynomial.
pub(crate) fn push_down_shape(p: usize, size: usize) -> (usize, u32, usize) {
    let top = size - 1;
    let mut n = 0u32;
    let mut block = 1usize;
    while block * p <= top {
        block *= p;
        n += 1;
    }
    let c = top / block;
    let k = if n == 0 { 1 } else { (c + 1) * block / p };
    (c, n, k)
}

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) q: PolyModulus,
    pub(crate) kind: GeneratorKind,
    /// `Tr_{U_i/F_p}(x_i^a)` for `a < 2 p^i d - 1`.
    pub(crate) trace: Vec<u64>,
    /// `Q_i'^{-1} mod Q_i`
    pub(crate) dqinv: PrimePoly,
    pub(crate) gamma: TowerElement,
    /// Computed on first use.
    pub(crate) betas: OnceLock<BetaTables>,
}

/// A primitive Artin-Schreier tower `U_0 ⊂ ... ⊂ U_k` with the minimal
/// polynomials of its generators and the tables used by the fast algorithms.
#[derive(Clone, Debug)]
pub struct TowerDescriptor {
    field: PrimeModulus,
    d: usize,
    pub(crate) levels: Vec<Level>,
    /// `x_0^{p^n} mod Q_0` for the small exponents used by the pseudotrace.
    pub(crate) base_frobenius: BTreeMap<usize, PrimePoly>,
}

impl TowerDescriptor {
    /// Builds the tower up to height `k`.
    pub fn build(field: PrimeModulus, q0: PrimePoly, k: usize) -> Result<Self> {
        let mut t = init_tower(field, q0)?;
        for _ in 0..k {
            t = extend_tower(t)?;
        }
        Ok(t)
    }

    pub fn field(&self) -> PrimeModulus {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.value()
    }

    /// Degree of `U_0` over F_p.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    /// `[U_i : F_p] = p^i d`.
    pub fn degree(&self, level: usize) -> usize {
        self.d * (self.p() as usize).pow(level as u32)
    }

    pub(crate) fn level(&self, i: usize) -> Result<&Level> {
        self.levels.get(i).ok_or(Error::LevelOutOfRange { level: i, height: self.height() })
    }

    /// The minimal polynomial `Q_i` of `x_i`.
    pub fn q(&self, level: usize) -> Result<&PrimePoly> {
        Ok(self.level(level)?.q.poly())
    }

    pub(crate) fn modulus(&self, level: usize) -> &PolyModulus {
        &self.levels[level].q
    }

    pub fn kind(&self, level: usize) -> Result<GeneratorKind> {
        Ok(self.level(level)?.kind)
    }

    /// `gamma_i`, the class of `G_i`.
    pub fn gamma(&self, level: usize) -> Result<&TowerElement> {
        Ok(&self.level(level)?.gamma)
    }

    /// Values of `Tr_{U_i/F_p}` on the power basis of `U_i`.
    pub fn trace_series(&self, level: usize) -> Result<&[u64]> {
        Ok(&self.level(level)?.trace[..self.degree(level)])
    }

    pub fn dqinv(&self, level: usize) -> Result<&PrimePoly> {
        Ok(&self.level(level)?.dqinv)
    }

    /// Pseudotrace tables of `gamma_i`, computed on first use. Those of level
    /// `i` need the tables of the levels below.
    pub fn betas(&self, level: usize) -> Result<&BetaTables> {
        let cell = &self.level(level)?.betas;
        if let Some(b) = cell.get() {
            return Ok(b);
        }
        let b = frobtrace::precompute_betas(self, level)?;
        Ok(cell.get_or_init(|| b))
    }

    /// Computes every missing pseudotrace table.
    pub fn fill_tables(&self) -> Result<()> {
        for i in 0..=self.height() {
            self.betas(i)?;
        }
        Ok(())
    }

    /// Minimal polynomials `Q_0, ..., Q_k`.
    pub fn q_chain(&self) -> Vec<&PrimePoly> {
        self.levels.iter().map(|l| l.q.poly()).collect()
    }
}

fn gamma_of(q: &PolyModulus, kind: GeneratorKind, level: usize) -> TowerElement {
    let f = q.field();
    let e = kind.exponent(f.value());
    let g = q.reduce(&PrimePoly::monomial(f, 1, e));
    TowerElement::from_parts(level, g.padded(q.degree()))
}

/// Precision of `rev(Q_i)^{-1}` needed by the level above.
fn precision_for(p: u64, size: usize, kind: GeneratorKind) -> usize {
    let (_, _, k) = push_down_shape(p as usize, size * p as usize);
    let span = kind.exponent(p) * (k - 1) + 1;
    span.max(size)
}

pub(crate) fn make_level(q: PrimePoly, kind: GeneratorKind, level: usize) -> Result<Level> {
    let f = q.modulus();
    let n = q.degree().ok_or(Error::ConstantModulus)?;
    let q = PolyModulus::with_precision(q, precision_for(f.value(), n, kind))?;
    let trace = power_sums(q.poly(), 2 * n - 1)?;
    let dqinv = inverse_mod(&q.poly().derivative(), q.poly())
        .map_err(|_| Error::Internal(format!("Q_{level}' is not invertible modulo Q_{level}")))?;
    let gamma = gamma_of(&q, kind, level);
    Ok(Level { q, kind, trace, dqinv, gamma, betas: OnceLock::new() })
}

/// Validates `Q_0` and returns the height-0 tower. When `Tr(x_0) = 0` and `p`
/// does not divide `d`, `Q_0` is replaced by `Q_0(X - 1)`.
pub fn init_tower(field: PrimeModulus, q0: PrimePoly) -> Result<TowerDescriptor> {
    if q0.modulus() != field {
        return Err(Error::ModulusMismatch(field.value(), q0.modulus().value()));
    }
    let d = q0.degree().ok_or(Error::ConstantModulus)?;
    if d == 0 {
        return Err(Error::ConstantModulus);
    }
    if !q0.is_monic() {
        return Err(Error::NotMonic);
    }
    if !oracle::irreducible(&q0) {
        return Err(Error::Reducible);
    }
    let mut q0 = q0;
    if power_sums(&q0, 2)?[1] == 0 {
        if d as u64 % field.value() == 0 {
            return Err(Error::ZeroBaseTrace(d));
        }
        let shift = PrimePoly::from_i64(field, &[-1, 1]);
        q0 = compose(&q0, &shift)?;
    }
    from_chain(field, vec![(q0, None)])
}

/// The base polynomial used when none is given: the first monic irreducible
/// polynomial of degree `d` in lexicographic order of `(c_0, ..., c_{d-1})`
/// that [`init_tower`] accepts, after the shift it applies.
pub fn smallest_base_polynomial(field: PrimeModulus, d: usize) -> Result<PrimePoly> {
    if d == 0 {
        return Err(Error::ConstantModulus);
    }
    let p = field.value();
    // odometer with c_{d-1} varying fastest
    let mut c = vec![0u64; d];
    loop {
        let mut coeffs = c.clone();
        coeffs.push(1);
        let q = PrimePoly::new(field, coeffs);
        if oracle::irreducible(&q) {
            match init_tower(field, q) {
                Ok(t) => return Ok(t.q(0)?.clone()),
                Err(Error::ZeroBaseTrace(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let mut k = d;
        loop {
            if k == 0 {
                return Err(Error::Invalid(format!("no usable irreducible polynomial of degree {d}")));
            }
            k -= 1;
            c[k] += 1;
            if c[k] < p {
                break;
            }
            c[k] = 0;
        }
    }
}

/// Adds one level: `Q_{i+1} = Q_i(X^p - X)` after a linear generator and
/// `q_i*(X^p - X)` after a power generator.
pub fn extend_tower(mut t: TowerDescriptor) -> Result<TowerDescriptor> {
    let i = t.height();
    let f = t.field;
    let base = match t.levels[i].kind {
        GeneratorKind::Linear => t.levels[i].q.poly().clone(),
        GeneratorKind::Power => star_product(t.levels[i].q.poly())?,
    };
    let as_poly = &PrimePoly::monomial(f, 1, f.value() as usize) - &PrimePoly::x(f);
    let next = compose(&base, &as_poly)?;
    let kind = GeneratorKind::schedule(f.value(), t.d, i + 1);
    t.levels.push(make_level(next, kind, i + 1)?);
    Ok(t)
}

/// Assembles a descriptor from a chain of minimal polynomials, with optional
/// pseudotrace tables per level. Missing tables are computed when needed.
pub(crate) fn from_chain(
    field: PrimeModulus,
    chain: Vec<(PrimePoly, Option<BetaTables>)>,
) -> Result<TowerDescriptor> {
    let d = chain
        .first()
        .and_then(|(q, _)| q.degree())
        .ok_or_else(|| Error::Invalid("empty tower".into()))?;
    let p = field.value() as usize;
    let mut levels = Vec::with_capacity(chain.len());
    let mut tables = Vec::with_capacity(chain.len());
    for (i, (q, betas)) in chain.into_iter().enumerate() {
        let want = d * p.pow(i as u32);
        if q.degree() != Some(want) {
            return Err(Error::Invalid(format!("Q_{i} must have degree {want}")));
        }
        if q.modulus() != field {
            return Err(Error::ModulusMismatch(field.value(), q.modulus().value()));
        }
        let kind = GeneratorKind::schedule(field.value(), d, i);
        levels.push(make_level(q, kind, i)?);
        tables.push(betas);
    }
    let mut t = TowerDescriptor { field, d, levels, base_frobenius: BTreeMap::new() };
    t.base_frobenius = frobtrace::base_frobenius_table(&t)?;
    for (i, betas) in tables.into_iter().enumerate() {
        if let Some(b) = betas {
            b.check_shape(&t, i)?;
            t.levels[i].betas = OnceLock::from(b);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> PrimePoly {
        PrimePoly::from_i64(fp(p), c)
    }

    #[test]
    fn shape_parameters() {
        assert_eq!(push_down_shape(2, 2), (1, 0, 1));
        assert_eq!(push_down_shape(2, 4), (1, 1, 2));
        assert_eq!(push_down_shape(3, 3), (2, 0, 1));
        assert_eq!(push_down_shape(3, 6), (1, 1, 2));
        assert_eq!(push_down_shape(3, 9), (2, 1, 3));
        assert_eq!(push_down_shape(2, 8), (1, 2, 4));
    }

    #[test]
    fn schedule() {
        assert_eq!(GeneratorKind::schedule(2, 1, 0), GeneratorKind::Linear);
        assert_eq!(GeneratorKind::schedule(2, 1, 1), GeneratorKind::Linear);
        assert_eq!(GeneratorKind::schedule(2, 2, 1), GeneratorKind::Power);
        assert_eq!(GeneratorKind::schedule(3, 1, 1), GeneratorKind::Power);
        assert_eq!(GeneratorKind::schedule(2, 1, 2), GeneratorKind::Power);
    }

    #[test]
    fn small_chains() {
        let t = TowerDescriptor::build(fp(2), poly(2, &[1, 1]), 2).unwrap();
        assert_eq!(*t.q(1).unwrap(), poly(2, &[1, 1, 1]));
        assert_eq!(*t.q(2).unwrap(), poly(2, &[1, 1, 0, 0, 1]));
        let t = TowerDescriptor::build(fp(3), poly(3, &[2, 1]), 1).unwrap();
        assert_eq!(*t.q(1).unwrap(), poly(3, &[2, 2, 0, 1]));
    }

    #[test]
    fn lexicographic_search() {
        assert_eq!(smallest_base_polynomial(fp(2), 1).unwrap(), poly(2, &[1, 1]));
        assert_eq!(smallest_base_polynomial(fp(2), 2).unwrap(), poly(2, &[1, 1, 1]));
        assert_eq!(smallest_base_polynomial(fp(2), 3).unwrap(), poly(2, &[1, 0, 1, 1]));
        // X has zero trace and becomes X - 1
        assert_eq!(smallest_base_polynomial(fp(3), 1).unwrap(), poly(3, &[2, 1]));
        assert_eq!(smallest_base_polynomial(fp(3), 2).unwrap(), poly(3, &[2, 1, 1]));
    }

    #[test]
    fn base_polynomial_shift() {
        let t = init_tower(fp(2), poly(2, &[0, 1])).unwrap();
        assert_eq!(*t.q(0).unwrap(), poly(2, &[1, 1]));
        let t = init_tower(fp(3), poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(*t.q(0).unwrap(), poly(3, &[2, 1, 1]));
        assert_eq!(t.trace_series(0).unwrap()[1], 2);
        // X^2 + X + 1 over F_2 has Tr(x_0) = 1
        assert!(init_tower(fp(2), poly(2, &[1, 1, 1])).is_ok());
        assert_eq!(init_tower(fp(2), poly(2, &[1, 0, 1])).unwrap_err(), Error::Reducible);
        // X^3 + 2X + 1 over F_3 is irreducible with zero trace, and 3 | 3
        assert_eq!(init_tower(fp(3), poly(3, &[1, 2, 0, 1])).unwrap_err(), Error::ZeroBaseTrace(3));
    }
}
