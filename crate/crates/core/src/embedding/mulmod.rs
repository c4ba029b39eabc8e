//! Multiplication by `X_i + R_n` modulo `X_i^p - X_i - Y`, where
//! `R_n = Y + Y^p + ... + Y^{p^{n-1}}`, and its transpose.

use crate::basefield::PrimeModulus;
use crate::error::{Error, Result};

/// A polynomial in `F_p[Y, X_i]` with `deg(., X_i) < p`, stored as `p` rows
/// of `Y`-coefficients, each of length `ylen`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivPoly {
    p: usize,
    ylen: usize,
    data: Vec<u64>,
}

impl BivPoly {
    pub fn zeros(p: usize, ylen: usize) -> Self {
        BivPoly { p, ylen, data: vec![0; p * ylen] }
    }

    /// Builds from `p` rows of equal length.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let p = rows.len();
        let ylen = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != ylen) {
            return Err(Error::LengthMismatch { expected: ylen, found: r.len() });
        }
        Ok(BivPoly { p, ylen, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn ylen(&self) -> usize {
        self.ylen
    }

    pub fn row(&self, j: usize) -> &[u64] {
        &self.data[j * self.ylen..(j + 1) * self.ylen]
    }

    pub fn row_mut(&mut self, j: usize) -> &mut [u64] {
        &mut self.data[j * self.ylen..(j + 1) * self.ylen]
    }

    pub fn get(&self, j: usize, y: usize) -> u64 {
        self.data[j * self.ylen + y]
    }

    /// Pads with zeros or truncates each row to `ylen`.
    pub fn resized(&self, ylen: usize) -> Self {
        let mut out = BivPoly::zeros(self.p, ylen);
        let keep = ylen.min(self.ylen);
        for j in 0..self.p {
            out.row_mut(j)[..keep].copy_from_slice(&self.row(j)[..keep]);
        }
        out
    }

    /// `sum a_{j,y} b_{j,y}`
    pub fn inner(&self, f: PrimeModulus, other: &BivPoly) -> u64 {
        self.data.iter().zip(&other.data).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub(crate) fn add_assign(&mut self, f: PrimeModulus, other: &BivPoly) {
        for j in 0..self.p.min(other.p) {
            let n = self.ylen.min(other.ylen);
            let src = &other.data[j * other.ylen..j * other.ylen + n];
            for (d, &s) in self.data[j * self.ylen..j * self.ylen + n].iter_mut().zip(src) {
                *d = f.add(*d, s);
            }
        }
    }
}

fn shifts(p: usize, n: u32) -> Vec<usize> {
    (0..n).map(|j| p.pow(j)).collect()
}

/// `MulMod_{k,n}`: for `A` with `Y`-length `k`, returns `(X_i + R_n) A mod
/// (X_i^p - X_i - Y)` with `Y`-length `k + p^{n-1}`.
pub fn mulmod(f: PrimeModulus, a: &BivPoly, n: u32) -> Result<BivPoly> {
    let p = f.value() as usize;
    if a.p != p {
        return Err(Error::LengthMismatch { expected: p, found: a.p });
    }
    if n == 0 {
        return Err(Error::Invalid("MulMod needs n >= 1".into()));
    }
    let k = a.ylen;
    let out_len = k + p.pow(n - 1);
    let mut out = BivPoly::zeros(p, out_len);
    let sh = shifts(p, n);
    for j in 0..p {
        let src = a.row(j);
        let dst = out.row_mut(j);
        for &s in &sh {
            for (d, &x) in dst[s..s + k].iter_mut().zip(src) {
                *d = f.add(*d, x);
            }
        }
    }
    // X_i * A: row j-1 moves to row j, and X_i^p = X_i + Y
    for j in 1..p {
        let dst = &mut out.data[j * out_len..j * out_len + k];
        for (d, &x) in dst.iter_mut().zip(a.row(j - 1)) {
            *d = f.add(*d, x);
        }
    }
    let top = a.row(p - 1).to_vec();
    for (y, &x) in top.iter().enumerate() {
        let d = &mut out.data[out_len + y];
        *d = f.add(*d, x);
        let d = &mut out.data[y + 1];
        *d = f.add(*d, x);
    }
    Ok(out)
}

/// Transpose of [`mulmod`]: maps a form on outputs (`Y`-length `k + p^{n-1}`)
/// to the form on inputs (`Y`-length `k`).
pub fn mulmod_transposed(f: PrimeModulus, l: &BivPoly, n: u32) -> Result<BivPoly> {
    let p = f.value() as usize;
    if l.p != p {
        return Err(Error::LengthMismatch { expected: p, found: l.p });
    }
    if n == 0 {
        return Err(Error::Invalid("MulMod needs n >= 1".into()));
    }
    let s_max = p.pow(n - 1);
    if l.ylen < s_max {
        return Err(Error::LengthMismatch { expected: s_max, found: l.ylen });
    }
    let k = l.ylen - s_max;
    let mut out = BivPoly::zeros(p, k);
    let sh = shifts(p, n);
    for j in 0..p {
        let src = l.row(j);
        let dst = &mut out.data[j * k..(j + 1) * k];
        for &s in &sh {
            for (d, &x) in dst.iter_mut().zip(&src[s..s + k]) {
                *d = f.add(*d, x);
            }
        }
    }
    for j in 0..p - 1 {
        for y in 0..k {
            let v = l.get(j + 1, y);
            out.data[j * k + y] = f.add(out.data[j * k + y], v);
        }
    }
    for y in 0..k {
        let v = f.add(l.get(0, y + 1), l.get(1, y));
        let d = &mut out.data[(p - 1) * k + y];
        *d = f.add(*d, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn examples() {
        let one = BivPoly::from_rows(&[vec![1], vec![0]]).unwrap();
        assert_eq!(mulmod(f(2), &one, 1).unwrap(), BivPoly::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap());
        let x = BivPoly::from_rows(&[vec![0], vec![1]]).unwrap();
        assert_eq!(mulmod(f(2), &x, 1).unwrap(), BivPoly::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap());
        let zero = BivPoly::zeros(3, 4);
        assert_eq!(mulmod(f(3), &zero, 2).unwrap(), BivPoly::zeros(3, 7));
        assert_eq!(mulmod_transposed(f(3), &BivPoly::zeros(3, 7), 2).unwrap(), zero);
    }

    // the 4x2 matrix of MulMod_{1,1} for p = 2, rows (1, Y, X, XY), columns (1, X)
    #[test]
    fn explicit_transpose() {
        let m = [[0u64, 0], [1, 1], [1, 1], [0, 1]];
        for r in 0..4 {
            let mut l = BivPoly::zeros(2, 2);
            l.row_mut(r / 2)[r % 2] = 1;
            let t = mulmod_transposed(f(2), &l, 1).unwrap();
            assert_eq!([t.get(0, 0), t.get(1, 0)], m[r]);
        }
    }

    #[test]
    fn duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, k, n) in [(2u64, 4usize, 2u32), (3, 5, 2), (5, 7, 1), (2, 3, 3)] {
            let fp = f(p);
            let s = (p as usize).pow(n - 1);
            for _ in 0..50 {
                let rows_a: Vec<Vec<u64>> = (0..p).map(|_| (0..k).map(|_| rng.gen_range(0..p)).collect()).collect();
                let rows_l: Vec<Vec<u64>> = (0..p).map(|_| (0..k + s).map(|_| rng.gen_range(0..p)).collect()).collect();
                let a = BivPoly::from_rows(&rows_a).unwrap();
                let l = BivPoly::from_rows(&rows_l).unwrap();
                let lhs = mulmod_transposed(fp, &l, n).unwrap().inner(fp, &a);
                let rhs = l.inner(fp, &mulmod(fp, &a, n).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
