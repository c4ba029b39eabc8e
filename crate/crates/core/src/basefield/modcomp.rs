use super::poly::PrimePoly;
use super::reduce::PolyModulus;
use crate::error::{Error, Result};

/// `f(g) mod h` by baby-step/giant-step with a naive block product.
pub fn modular_compose(f: &PrimePoly, g: &PrimePoly, h: &PrimePoly) -> Result<PrimePoly> {
    f.check_same(g)?;
    f.check_same(h)?;
    if h.degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantModulus);
    }
    if !h.is_monic() {
        return Err(Error::NotMonic);
    }
    let m = PolyModulus::new(h.clone())?;
    Ok(compose_mod(f, g, &m))
}

/// Same as [`modular_compose`] with a prepared modulus.
pub fn compose_mod(f: &PrimePoly, g: &PrimePoly, h: &PolyModulus) -> PrimePoly {
    let field = h.field();
    let n = h.degree();
    let len = f.coeffs().len();
    if len <= 1 {
        return h.reduce(f);
    }
    let g = h.reduce(g);
    let t = (len as f64).sqrt().ceil() as usize;
    let mut powers = Vec::with_capacity(t + 1);
    powers.push(PrimePoly::one(field));
    for i in 1..=t {
        powers.push(h.mulmod(&powers[i - 1], &g));
    }
    let giant = powers.pop().expect("t >= 1");
    let baby: Vec<Vec<u64>> = powers.iter().map(|q| q.padded(n)).collect();
    let blocks: Vec<PrimePoly> = f
        .coeffs()
        .chunks(t)
        .map(|chunk| combine(field, chunk, &baby, n))
        .collect();
    let mut acc = PrimePoly::zero(field);
    for b in blocks.iter().rev() {
        acc = &h.mulmod(&acc, &giant) + b;
    }
    acc
}

// sum_i c_i * baby_i, each baby_i padded to length n
fn combine(field: super::PrimeModulus, c: &[u64], baby: &[Vec<u64>], n: usize) -> PrimePoly {
    let mut out = vec![0u64; n];
    if field.is_small() {
        let mut acc = vec![0u128; n];
        for (&ci, b) in c.iter().zip(baby) {
            if ci == 0 {
                continue;
            }
            for (a, &bj) in acc.iter_mut().zip(b) {
                *a += (ci * bj) as u128;
            }
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o = field.reduce_u128(a);
        }
    } else {
        for (&ci, b) in c.iter().zip(baby) {
            for (o, &bj) in out.iter_mut().zip(b) {
                *o = field.add(*o, field.mul(ci, bj));
            }
        }
    }
    PrimePoly::from_reduced(field, out)
}

/// `X^{p^n} mod h`, by repeated composition: `X^{p^{a+b}} = xi_a(xi_b)`.
pub fn frobenius_power(h: &PolyModulus, n: u64) -> PrimePoly {
    frobenius_powers(h, &[n]).pop().expect("one exponent")
}

/// `X^{p^n} mod h` for several `n`, sharing the table of `X^{p^{2^j}}`.
pub fn frobenius_powers(h: &PolyModulus, ns: &[u64]) -> Vec<PrimePoly> {
    let x = PrimePoly::x(h.field());
    let top = ns.iter().copied().max().unwrap_or(0);
    let mut table = vec![h.frobenius(&x)];
    while (2u64 << (table.len() - 1)) <= top {
        let last = table.last().expect("nonempty");
        table.push(compose_mod(last, last, h));
    }
    ns.iter()
        .map(|&n| {
            let mut result: Option<PrimePoly> = None;
            for (j, step) in table.iter().enumerate() {
                if n >> j & 1 == 1 {
                    result = Some(match result {
                        None => step.clone(),
                        Some(r) => compose_mod(&r, step, h),
                    });
                }
            }
            result.unwrap_or_else(|| h.reduce(&x))
        })
        .collect()
}
