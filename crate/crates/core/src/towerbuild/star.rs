//! The cyclotomic product `Q*(Y) = prod_{j < 2p-1} Q(x^j Y)` over
//! `A = F_p[X]/Phi_{2p-1}`, and its compressed form `q*` with
//! `Q* = q*(Y^{2p-1})`.

use std::collections::BTreeMap;

use crate::basefield::{PrimeModulus, PrimePoly};
use crate::error::{Error, Result};

/// `Phi_m mod p`, by dividing `X^m - 1` by the cyclotomic factors of the
/// proper divisors of `m`.
pub fn cyclotomic(f: PrimeModulus, m: usize) -> PrimePoly {
    let mut memo = BTreeMap::new();
    cyclotomic_memo(f, m, &mut memo)
}

fn cyclotomic_memo(f: PrimeModulus, m: usize, memo: &mut BTreeMap<usize, PrimePoly>) -> PrimePoly {
    if let Some(c) = memo.get(&m) {
        return c.clone();
    }
    let mut num = PrimePoly::monomial(f, 1, m);
    num = &num - &PrimePoly::one(f);
    for e in (1..m).filter(|e| m % e == 0) {
        let phi = cyclotomic_memo(f, e, memo);
        num = num.divrem(&phi).expect("nonzero").0;
    }
    memo.insert(m, num.clone());
    num
}

/// Reduction mod p of the (2p-1)-th cyclotomic polynomial.
pub fn cyclotomic_mod_p(f: PrimeModulus) -> PrimePoly {
    cyclotomic(f, 2 * f.value() as usize - 1)
}

/// Arithmetic in `A[Y]`, coefficients stored as dense vectors of length `phi`.
struct CycloRing {
    f: PrimeModulus,
    phi: PrimePoly,
    width: usize,
}

impl CycloRing {
    fn reduce(&self, v: Vec<u64>) -> Vec<u64> {
        let r = PrimePoly::from_reduced(self.f, v).divrem_naive(&self.phi).1;
        r.padded(self.width)
    }

    /// Product in `A[Y]` through a single Kronecker-packed product.
    fn mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let w = self.width;
        let block = 2 * w - 1;
        let pack = |x: &[Vec<u64>]| {
            let mut v = vec![0u64; x.len() * block];
            for (k, c) in x.iter().enumerate() {
                v[k * block..k * block + w].copy_from_slice(c);
            }
            PrimePoly::from_reduced(self.f, v)
        };
        let prod = &pack(a) * &pack(b);
        let n = a.len() + b.len() - 1;
        (0..n)
            .map(|k| {
                let chunk: Vec<u64> = (0..block).map(|t| prod.coeff(k * block + t)).collect();
                self.reduce(chunk)
            })
            .collect()
    }

    fn product(&self, mut polys: Vec<Vec<Vec<u64>>>) -> Vec<Vec<u64>> {
        while polys.len() > 1 {
            let mut next = Vec::with_capacity(polys.len().div_ceil(2));
            let mut it = polys.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(self.mul(&a, &b)),
                    None => next.push(a),
                }
            }
            polys = next;
        }
        polys.pop().unwrap_or_default()
    }
}

/// The factors `Q(x^j Y)` for `j < 2p - 1`, as polynomials over `A`.
fn star_factors(ring: &CycloRing, q: &PrimePoly, m: usize) -> Vec<Vec<Vec<u64>>> {
    let f = ring.f;
    let powers: Vec<Vec<u64>> = (0..m).map(|e| ring.reduce(PrimePoly::monomial(f, 1, e).padded(e + 1))).collect();
    (0..m)
        .map(|j| {
            q.coeffs()
                .iter()
                .enumerate()
                .map(|(k, &c)| powers[(j * k) % m].iter().map(|&x| f.mul(x, c)).collect())
                .collect()
        })
        .collect()
}

/// Returns `q*` with `q*(Y^{2p-1}) = prod_j Q(x^j Y)`.
pub fn star_product(q: &PrimePoly) -> Result<PrimePoly> {
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    let f = q.modulus();
    let m = 2 * f.value() as usize - 1;
    let phi = cyclotomic_mod_p(f);
    let width = phi.degree().expect("nonconstant");
    let ring = CycloRing { f, phi, width };
    let full = ring.product(star_factors(&ring, q, m));
    let mut out = Vec::with_capacity(full.len() / m + 1);
    for (t, c) in full.iter().enumerate() {
        if c[1..].iter().any(|&x| x != 0) {
            return Err(Error::Internal(format!("star product coefficient {t} is not a constant")));
        }
        if t % m == 0 {
            out.push(c[0]);
        } else if c[0] != 0 {
            return Err(Error::Internal(format!("star product has a nonzero term at Y^{t}")));
        }
    }
    Ok(PrimePoly::from_reduced(f, out))
}
