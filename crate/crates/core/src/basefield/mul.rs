//! Multiplication kernels for dense coefficient slices over F_p.
//!
//! Products dispatch on the length of the shorter operand: schoolbook below
//! [`KARATSUBA_THRESHOLD`], Karatsuba up to [`FFT_THRESHOLD`], and above that a
//! number-theoretic transform over the Goldilocks prime whenever the exact
//! integer convolution is guaranteed to fit below that prime. Otherwise
//! Karatsuba is used at every size.

use super::modulus::PrimeModulus;

pub const KARATSUBA_THRESHOLD: usize = 32;
pub const FFT_THRESHOLD: usize = 256;

/// Product of two coefficient slices (constant term first). Trailing zeros
/// are not stripped.
pub fn mul_slices(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let short = a.len().min(b.len());
    if short >= FFT_THRESHOLD && ntt::fits(f, short) {
        return ntt::convolve(f, a, b);
    }
    if short < KARATSUBA_THRESHOLD {
        return naive(f, a, b);
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    karatsuba_into(f, a, b, &mut out);
    out
}

/// Schoolbook product.
pub fn naive(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let mut out = vec![0u64; n];
    if f.is_small() {
        for (k, o) in out.iter_mut().enumerate() {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut acc: u128 = 0;
            for i in lo..=hi {
                acc += (a[i] * b[k - i]) as u128;
            }
            *o = f.reduce_u128(acc);
        }
    } else {
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
    out
}

// Accumulates a*b into out (out.len() >= a.len() + b.len() - 1).
fn karatsuba_into(f: PrimeModulus, a: &[u64], b: &[u64], out: &mut [u64]) {
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if a.is_empty() {
        return;
    }
    if a.len() < KARATSUBA_THRESHOLD {
        let prod = naive(f, a, b);
        for (o, v) in out.iter_mut().zip(prod) {
            *o = f.add(*o, v);
        }
        return;
    }
    if 2 * a.len() <= b.len() {
        // unbalanced: slice the long operand
        for (c, chunk) in b.chunks(a.len()).enumerate() {
            let off = c * a.len();
            karatsuba_into(f, a, chunk, &mut out[off..]);
        }
        return;
    }
    let h = b.len() / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h);
    let mut low = vec![0; a0.len() + b0.len() - 1];
    karatsuba_into(f, a0, b0, &mut low);
    let mut high = if a1.is_empty() {
        Vec::new()
    } else {
        vec![0; a1.len() + b1.len() - 1]
    };
    if !a1.is_empty() {
        karatsuba_into(f, a1, b1, &mut high);
    }
    let sa = add_slices(f, a0, a1);
    let sb = add_slices(f, b0, b1);
    let mut mid = vec![0; sa.len() + sb.len() - 1];
    karatsuba_into(f, &sa, &sb, &mut mid);
    for (i, &v) in low.iter().enumerate() {
        mid[i] = f.sub(mid[i], v);
        out[i] = f.add(out[i], v);
    }
    for (i, &v) in high.iter().enumerate() {
        mid[i] = f.sub(mid[i], v);
        out[i + 2 * h] = f.add(out[i + 2 * h], v);
    }
    for (i, &v) in mid.iter().enumerate() {
        if v != 0 {
            out[i + h] = f.add(out[i + h], v);
        }
    }
}

fn add_slices(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    out
}

pub(crate) mod ntt {
    use super::PrimeModulus;

    /// 2^64 - 2^32 + 1.
    pub const P: u64 = 0xFFFF_FFFF_0000_0001;
    const EPSILON: u64 = 0xFFFF_FFFF;
    const GENERATOR: u64 = 7;
    const TWO_ADICITY: u32 = 32;

    /// Whether an exact convolution with `short` terms per coefficient fits below P.
    pub fn fits(f: PrimeModulus, short: usize) -> bool {
        let pm = (f.value() - 1) as u128;
        pm < (1 << 40) && (short as u128) * pm * pm < P as u128
    }

    #[inline]
    fn reduce128(x: u128) -> u64 {
        let lo = x as u64;
        let hi = (x >> 64) as u64;
        let hi_hi = hi >> 32;
        let hi_lo = hi & EPSILON;
        let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
        if borrow {
            t0 = t0.wrapping_sub(EPSILON);
        }
        let t1 = hi_lo * EPSILON;
        let (res, carry) = t0.overflowing_add(t1);
        let r = res.wrapping_add(EPSILON * carry as u64);
        if r >= P {
            r - P
        } else {
            r
        }
    }

    #[inline]
    fn mul(a: u64, b: u64) -> u64 {
        reduce128(a as u128 * b as u128)
    }

    #[inline]
    fn add(a: u64, b: u64) -> u64 {
        let (s, c) = a.overflowing_add(b);
        let (s2, c2) = s.overflowing_sub(P);
        if c || !c2 {
            s2
        } else {
            s
        }
    }

    #[inline]
    fn sub(a: u64, b: u64) -> u64 {
        let (d, borrow) = a.overflowing_sub(b);
        if borrow {
            d.wrapping_add(P)
        } else {
            d
        }
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn transform(a: &mut [u64], invert: bool) {
        let n = a.len();
        let log = n.trailing_zeros();
        assert!(log <= TWO_ADICITY);
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let root = pow(GENERATOR, (P - 1) >> TWO_ADICITY);
        let root = if invert { pow(root, P - 2) } else { root };
        let mut tw = Vec::with_capacity(n / 2);
        let mut len = 2;
        while len <= n {
            let w = pow(root, 1u64 << (TWO_ADICITY - len.trailing_zeros()));
            let half = len / 2;
            tw.clear();
            let mut cur = 1u64;
            for _ in 0..half {
                tw.push(cur);
                cur = mul(cur, w);
            }
            for chunk in a.chunks_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k];
                    let v = mul(hi[k], tw[k]);
                    lo[k] = add(u, v);
                    hi[k] = sub(u, v);
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = pow(n as u64, P - 2);
            for x in a.iter_mut() {
                *x = mul(*x, ninv);
            }
        }
    }

    pub fn convolve(f: PrimeModulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        let len = a.len() + b.len() - 1;
        let n = len.next_power_of_two();
        let mut fa = vec![0u64; n];
        fa[..a.len()].copy_from_slice(a);
        transform(&mut fa, false);
        if std::ptr::eq(a, b) {
            for x in fa.iter_mut() {
                *x = mul(*x, *x);
            }
        } else {
            let mut fb = vec![0u64; n];
            fb[..b.len()].copy_from_slice(b);
            transform(&mut fb, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = mul(*x, *y);
            }
        }
        transform(&mut fa, true);
        fa.truncate(len);
        for x in fa.iter_mut() {
            *x = f.reduce(*x);
        }
        fa
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn reduction_matches_u128_mod() {
            let samples = [0u128, 1, P as u128 - 1, P as u128, u64::MAX as u128, u128::MAX];
            for &x in &samples {
                assert_eq!(reduce128(x) as u128, x % P as u128);
            }
            let mut s: u128 = 0x1234_5678_9abc_def0_1357_9bdf_2468_ace0;
            for _ in 0..10_000 {
                s = s.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(0x9E37_79B9);
                assert_eq!(reduce128(s) as u128, s % P as u128);
            }
        }
    }
}
