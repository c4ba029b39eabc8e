//! Linear forms on `F_p[X]/h`, given by their values on the power basis
//! `(1, x, ..., x^{n-1})`, and the operations acting on them.

use super::poly::PrimePoly;
use super::reduce::PolyModulus;
use crate::error::{Error, Result};

/// Values `(L(x^0), ..., L(x^{len-1}))` of a linear form known on the first
/// `n = deg h` powers; the sequence is linearly generated by `h`.
pub fn extend_recurrent(dual: &[u64], h: &PolyModulus, len: usize) -> Vec<u64> {
    let n = h.degree();
    debug_assert_eq!(dual.len(), n);
    if len <= n {
        return dual[..len].to_vec();
    }
    let f = h.field();
    let s = PrimePoly::from_reduced(f, dual.to_vec());
    let rev_h = h.poly().rev(n).expect("deg h = n");
    let num = (&s * &rev_h).truncate(n);
    let ext = (&num * &h.rev_inverse(len)).truncate(len);
    ext.padded(len)
}

/// Same as [`extend_recurrent`], by direct recurrence. Quadratic.
pub fn extend_recurrent_naive(dual: &[u64], h: &PolyModulus, len: usize) -> Vec<u64> {
    let n = h.degree();
    let f = h.field();
    let hc = h.poly().padded(n + 1);
    let mut s = dual.to_vec();
    while s.len() < len {
        let m = s.len() - n;
        let mut acc = 0;
        for k in 0..n {
            acc = f.sub(acc, f.mul(hc[k], s[m + k]));
        }
        s.push(acc);
    }
    s.truncate(len);
    s
}

/// Transposed multiplication: returns the form `v -> L(v w)`, i.e.
/// `out[j] = L(x^j w mod h)`, via a middle product against the extended
/// sequence of `L`.
pub fn transposed_mul(w: &PrimePoly, dual: &[u64], h: &PolyModulus) -> Result<Vec<u64>> {
    let n = h.degree();
    if dual.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: dual.len() });
    }
    w.check_same(h.poly())?;
    let w = h.reduce(w);
    if w.is_zero() {
        return Ok(vec![0; n]);
    }
    let seq = extend_recurrent(dual, h, 2 * n - 1);
    Ok(middle_product(&w, &seq, n))
}

/// `out[j] = sum_k w_k s_{j+k}` for `j < n`, with `deg w < n` and `s` of length `2n - 1`.
pub(crate) fn middle_product(w: &PrimePoly, seq: &[u64], n: usize) -> Vec<u64> {
    let f = w.modulus();
    let wr = w.rev(n - 1).expect("deg w < n");
    let s = PrimePoly::from_reduced(f, seq.to_vec());
    let prod = &wr * &s;
    (0..n).map(|j| prod.coeff(n - 1 + j)).collect()
}

/// Quadratic transposed multiplication straight from the defining contract.
pub fn transposed_mul_naive(w: &PrimePoly, dual: &[u64], h: &PolyModulus) -> Result<Vec<u64>> {
    let n = h.degree();
    if dual.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: dual.len() });
    }
    let f = h.field();
    let hc = h.poly().padded(n + 1);
    let mut cur = h.reduce(w).padded(n);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut acc = 0;
        for (&l, &c) in dual.iter().zip(&cur) {
            acc = f.add(acc, f.mul(l, c));
        }
        out.push(acc);
        // cur <- x * cur mod h
        let top = cur[n - 1];
        for k in (1..n).rev() {
            cur[k] = f.sub(cur[k - 1], f.mul(top, hc[k]));
        }
        cur[0] = f.neg(f.mul(top, hc[0]));
    }
    Ok(out)
}

/// Power sums `Tr(x^a)` for `a < len`, where `x = X mod q`.
pub fn power_sums(q: &PrimePoly, len: usize) -> Result<Vec<u64>> {
    let n = q.degree().ok_or(Error::ConstantModulus)?;
    if !q.is_monic() {
        return Err(Error::NotMonic);
    }
    if n == 0 {
        return Err(Error::ConstantModulus);
    }
    let num = q.derivative().rev(n - 1)?;
    let den_inv = q.rev(n)?.inv_series(len)?;
    Ok((&num * &den_inv).truncate(len).padded(len))
}

/// Values of the trace form `Tr_{F_p[X]/q / F_p}` on the power basis.
pub fn newton_trace_series(q: &PrimePoly) -> Result<Vec<u64>> {
    let n = q.degree().ok_or(Error::ConstantModulus)?;
    power_sums(q, n)
}
