use crate::basefield::{PrimeModulus, PrimePoly};
use crate::error::Result;

/// Nonzero terms `(exponent, coefficient)` of a polynomial.
fn sparse_terms(r: &PrimePoly) -> Vec<(usize, u64)> {
    r.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e, c))
        .collect()
}

/// `a * sum c X^e` over the listed terms.
fn mul_sparse(f: PrimeModulus, a: &[u64], terms: &[(usize, u64)]) -> Vec<u64> {
    if a.is_empty() || terms.is_empty() {
        return Vec::new();
    }
    let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut out = vec![0u64; a.len() + top];
    for &(e, c) in terms {
        let dst = &mut out[e..e + a.len()];
        if c == 1 {
            for (o, &x) in dst.iter_mut().zip(a) {
                *o = f.add(*o, x);
            }
        } else {
            for (o, &x) in dst.iter_mut().zip(a) {
                *o = f.add(*o, f.mul(x, c));
            }
        }
    }
    out
}

fn add_into(f: PrimeModulus, acc: &mut Vec<u64>, b: &[u64]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), 0);
    }
    for (o, &x) in acc.iter_mut().zip(b) {
        *o = f.add(*o, x);
    }
}

/// `P(R)` by accumulating powers of `R`, multiplying term by term.
pub fn naive_compose(p: &PrimePoly, r: &PrimePoly) -> Result<PrimePoly> {
    p.check_same(r)?;
    let f = p.modulus();
    Ok(PrimePoly::from_reduced(f, naive_compose_raw(f, p.coeffs(), &sparse_terms(r))))
}

fn naive_compose_raw(f: PrimeModulus, p: &[u64], terms: &[(usize, u64)]) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    let mut rho: Vec<u64> = vec![1];
    for (i, &c) in p.iter().enumerate() {
        if c != 0 {
            if acc.len() < rho.len() {
                acc.resize(rho.len(), 0);
            }
            for (o, &x) in acc.iter_mut().zip(&rho) {
                *o = f.add(*o, f.mul(x, c));
            }
        }
        if i + 1 < p.len() {
            rho = mul_sparse(f, &rho, terms);
        }
    }
    crate::basefield::poly::trim(&mut acc);
    acc
}

/// `P(R)`: slices `P` into at most `p` pieces of degree `< p^n`, composes
/// them recursively, and recombines with Horner's rule using
/// `R^{p^n} = R(X^{p^n})`.
pub fn compose(p: &PrimePoly, r: &PrimePoly) -> Result<PrimePoly> {
    p.check_same(r)?;
    let f = p.modulus();
    let terms = sparse_terms(r);
    Ok(PrimePoly::from_reduced(f, compose_raw(f, p.coeffs(), &terms)))
}

fn compose_raw(f: PrimeModulus, p: &[u64], terms: &[(usize, u64)]) -> Vec<u64> {
    let q = f.value() as usize;
    let deg = match p.len().checked_sub(1) {
        Some(d) if d > 0 => d,
        _ => return p.to_vec(),
    };
    // n = floor(log_q deg), block = q^n
    let mut block = 1usize;
    while block.saturating_mul(q) <= deg {
        block *= q;
    }
    if block == 1 {
        return naive_compose_raw(f, p, terms);
    }
    let spread: Vec<(usize, u64)> = terms.iter().map(|&(e, c)| (e * block, c)).collect();
    let parts: Vec<Vec<u64>> = p.chunks(block).map(|s| compose_raw(f, s, terms)).collect();
    let mut acc: Vec<u64> = Vec::new();
    for part in parts.iter().rev() {
        acc = mul_sparse(f, &acc, &spread);
        add_into(f, &mut acc, part);
    }
    crate::basefield::poly::trim(&mut acc);
    acc
}
