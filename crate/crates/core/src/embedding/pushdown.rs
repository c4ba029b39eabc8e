//! Change of basis `U_i <-> U_{i-1}[X_i]/(X_i^p - X_i - gamma_{i-1})`.
//!
//! Push-down rewrites the power basis of `x_i` in terms of `x_{i-1}` and
//! `x_i` by slicing into blocks of size `p^n` and running Horner on
//! `x_i^{p^n} = x_i + R_n(Y)` with `Y = gamma_{i-1}` kept symbolic; the
//! resulting polynomial in `Y` is then evaluated at `x_{i-1}^e` and reduced.
//! Lift-up goes back through the transposed push-down and the trace form.

use super::bivariate::BivariateElement;
use super::mulmod::{mulmod, mulmod_transposed, BivPoly};
use crate::basefield::dual::middle_product;
use crate::basefield::{extend_recurrent, PrimeModulus, PrimePoly};
use crate::error::{Error, Result};
use crate::towerbuild::descriptor::push_down_shape;
use crate::towerbuild::TowerDescriptor;
use crate::towerops::TowerElement;

/// Rewrites `v` (of length at most `(c+1) p^n`) as a polynomial in
/// `F_p[Y, X_i]` with `Y`-length `(c+1) p^{n-1}` (or `1` when `n = 0`).
pub fn push_down_rec(f: PrimeModulus, v: &[u64], c: usize, n: u32) -> Result<BivPoly> {
    let p = f.value() as usize;
    if c >= p {
        return Err(Error::Invalid(format!("slice count {} exceeds p", c + 1)));
    }
    if n == 0 {
        if v.len() > c + 1 {
            return Err(Error::LengthMismatch { expected: c + 1, found: v.len() });
        }
        let mut out = BivPoly::zeros(p, 1);
        for (j, &x) in v.iter().enumerate() {
            out.row_mut(j)[0] = x;
        }
        return Ok(out);
    }
    let block = p.pow(n);
    if v.len() > (c + 1) * block {
        return Err(Error::LengthMismatch { expected: (c + 1) * block, found: v.len() });
    }
    let k = (c + 1) * block / p;
    let mut w = BivPoly::zeros(p, k);
    for j in (0..=c).rev() {
        if j < c {
            let prod = mulmod(f, &w, n)?;
            debug_assert!((0..p).all(|r| prod.row(r)[k..].iter().all(|&x| x == 0)));
            w = prod.resized(k);
        }
        let lo = (j * block).min(v.len());
        let hi = ((j + 1) * block).min(v.len());
        if lo < hi {
            let part = push_down_rec(f, &v[lo..hi], p - 1, n - 1)?;
            w.add_assign(f, &part);
        }
    }
    Ok(w)
}

/// Transpose of [`push_down_rec`]: a form on `Y`-length `(c+1) p^{n-1}`
/// bivariate polynomials becomes a form on the first `(c+1) p^n` monomials.
pub fn push_down_rec_transposed(f: PrimeModulus, l: &BivPoly, c: usize, n: u32) -> Result<Vec<u64>> {
    let p = f.value() as usize;
    if n == 0 {
        return Ok((0..=c).map(|j| l.get(j, 0)).collect());
    }
    let block = p.pow(n);
    let sub = block / p;
    let k = (c + 1) * sub;
    if l.ylen() != k {
        return Err(Error::LengthMismatch { expected: k, found: l.ylen() });
    }
    let mut out = Vec::with_capacity((c + 1) * block);
    let mut cur = l.clone();
    for j in 0..=c {
        let part = push_down_rec_transposed(f, &cur.resized(sub), p - 1, n - 1)?;
        out.extend_from_slice(&part);
        if j < c {
            cur = mulmod_transposed(f, &cur.resized(k + sub), n)?;
        }
    }
    Ok(out)
}

fn check_upper(t: &TowerDescriptor, level: usize) -> Result<()> {
    if level == 0 || level > t.height() {
        return Err(Error::LevelOutOfRange { level, height: t.height() });
    }
    Ok(())
}

/// Writes `v` in `U_i` as `sum_j v_j x_i^j` with `v_j` in `U_{i-1}`.
pub fn push_down(t: &TowerDescriptor, v: &TowerElement) -> Result<BivariateElement> {
    let i = v.level();
    check_upper(t, i)?;
    t.check(v)?;
    let f = t.field();
    let p = f.value() as usize;
    let (c, n, _) = push_down_shape(p, t.degree(i));
    let w = push_down_rec(f, v.coeffs(), c, n)?;
    let e = t.kind(i - 1)?.exponent(f.value());
    let lower = t.modulus(i - 1);
    let parts = (0..p)
        .map(|j| {
            let row = w.row(j);
            let mut spread = vec![0; e * (row.len() - 1) + 1];
            for (y, &x) in row.iter().enumerate() {
                spread[e * y] = x;
            }
            let r = lower.reduce(&PrimePoly::from_reduced(f, spread));
            TowerElement::from_parts(i - 1, r.padded(lower.degree()))
        })
        .collect();
    Ok(BivariateElement::from_parts(i, parts))
}

/// Transposed push-down: given `p` forms `L_b` on `U_{i-1}`, returns the form
/// on `U_i` sending `x_i^a` to `sum_b L_b(v_b)`, where `(v_b)` is the
/// push-down of `x_i^a`.
pub fn push_down_transposed(t: &TowerDescriptor, level: usize, forms: &[Vec<u64>]) -> Result<Vec<u64>> {
    check_upper(t, level)?;
    let f = t.field();
    let p = f.value() as usize;
    if forms.len() != p {
        return Err(Error::LengthMismatch { expected: p, found: forms.len() });
    }
    let m = t.degree(level - 1);
    if let Some(bad) = forms.iter().find(|r| r.len() != m) {
        return Err(Error::LengthMismatch { expected: m, found: bad.len() });
    }
    let size = t.degree(level);
    let (c, n, k) = push_down_shape(p, size);
    let e = t.kind(level - 1)?.exponent(f.value());
    let lower = t.modulus(level - 1);
    let span = e * (k - 1) + 1;
    let rows: Vec<Vec<u64>> = forms
        .iter()
        .map(|r| {
            let ext = extend_recurrent(r, lower, span);
            (0..k).map(|y| ext[e * y]).collect()
        })
        .collect();
    let l = BivPoly::from_rows(&rows)?;
    let mut out = push_down_rec_transposed(f, &l, c, n)?;
    out.truncate(size);
    Ok(out)
}

/// Inverse of [`push_down`].
pub fn lift_up(t: &TowerDescriptor, w: &BivariateElement) -> Result<TowerElement> {
    let i = w.level();
    check_upper(t, i)?;
    let f = t.field();
    let p = f.value() as usize;
    if w.parts().len() != p {
        return Err(Error::LengthMismatch { expected: p, found: w.parts().len() });
    }
    for part in w.parts() {
        if part.level() != i - 1 {
            return Err(Error::LevelMismatch(i - 1, part.level()));
        }
        t.check(part)?;
    }
    let m = t.degree(i - 1);
    let size = t.degree(i);
    if w.parts().iter().all(|x| x.is_zero()) {
        return Ok(t.zero(i));
    }
    // the form a -> Tr_{U_i/F_p}(a w) on the bivariate basis: its restriction
    // to U_{i-1} x_i^b is a -> -Tr_{U_{i-1}}(a u_b)
    let parts = w.parts();
    let ext = &t.level(i - 1)?.trace;
    let forms: Vec<Vec<u64>> = (0..p)
        .map(|b| {
            let u = if b < p - 1 {
                t.to_poly(&parts[p - 1 - b])
            } else {
                &t.to_poly(&parts[0]) + &t.to_poly(&parts[p - 1])
            };
            if u.is_zero() {
                return vec![0; m];
            }
            middle_product(&u, &ext[..2 * m - 1], m).into_iter().map(|x| f.neg(x)).collect()
        })
        .collect();
    let dual = push_down_transposed(t, i, &forms)?;
    // the form is Tr(. V), V = rev(rev(Q_i) * dual mod X^size) / Q_i'
    let q = t.modulus(i);
    let num = (&PrimePoly::from_reduced(f, dual) * &q.poly().rev(size)?).truncate(size);
    let num = num.rev(size - 1)?;
    let v = q.mulmod(&num, t.dqinv(i)?);
    Ok(TowerElement::from_parts(i, v.padded(size)))
}

/// The inclusion `U_{i-1} -> U_i`.
pub fn embed(t: &TowerDescriptor, a: &TowerElement) -> Result<TowerElement> {
    let i = a.level() + 1;
    check_upper(t, i)?;
    let mut parts = vec![t.zero(i - 1); t.p() as usize];
    parts[0] = a.clone();
    lift_up(t, &BivariateElement::from_parts(i, parts))
}

/// Repeated [`embed`] up to `level`.
pub fn embed_to(t: &TowerDescriptor, a: &TowerElement, level: usize) -> Result<TowerElement> {
    if level < a.level() {
        return Err(Error::LevelMismatch(level, a.level()));
    }
    let mut cur = a.clone();
    while cur.level() < level {
        cur = embed(t, &cur)?;
    }
    Ok(cur)
}

/// The preimage of `a` under [`embed`], or `None` when `a` is not in `U_{i-1}`.
pub fn project(t: &TowerDescriptor, a: &TowerElement) -> Result<Option<TowerElement>> {
    let w = push_down(t, a)?;
    if w.parts()[1..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(w.into_parts().swap_remove(0)))
}

/// `(Tr(x_{i-1}^a x_i^b))_{b, a}`: the trace form of `U_i` on the bivariate
/// basis. Only the row `b = p - 1` is nonzero, equal to `-Tr_{U_{i-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTable {
    level: usize,
    rows: Vec<Vec<u64>>,
}

impl TraceTable {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn entry(&self, b: usize, a: usize) -> u64 {
        self.rows[b][a]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

/// The trace table of level `i` and `Q_i'^{-1} mod Q_i`.
pub fn precompute_level_tables(t: &TowerDescriptor, level: usize) -> Result<(TraceTable, PrimePoly)> {
    check_upper(t, level)?;
    let f = t.field();
    let p = t.p() as usize;
    let m = t.degree(level - 1);
    let mut rows = vec![vec![0; m]; p];
    rows[p - 1] = t.trace_series(level - 1)?.iter().map(|&x| f.neg(x)).collect();
    Ok((TraceTable { level, rows }, t.dqinv(level)?.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::mulmod::BivPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tower(p: u64, q0: &[i64], k: usize) -> TowerDescriptor {
        let f = PrimeModulus::new(p).unwrap();
        TowerDescriptor::build(f, PrimePoly::from_i64(f, q0), k).unwrap()
    }

    #[test]
    fn example_cube() {
        let t = tower(2, &[1, 1], 2);
        let x2 = t.x(2).unwrap();
        let cube = t.pow(&x2, 3).unwrap();
        let w = push_down(&t, &cube).unwrap();
        assert_eq!(w.parts()[0].coeffs(), &[0, 1]);
        assert_eq!(w.parts()[1].coeffs(), &[1, 1]);
        assert_eq!(lift_up(&t, &w).unwrap(), cube);
    }

    #[test]
    fn rec_transpose_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, c, n) in [(2u64, 1usize, 3u32), (3, 2, 2), (3, 0, 2), (5, 3, 1), (2, 1, 0)] {
            let f = PrimeModulus::new(p).unwrap();
            let pu = p as usize;
            let len = (c + 1) * pu.pow(n);
            let k = if n == 0 { 1 } else { len / pu };
            for _ in 0..20 {
                let v: Vec<u64> = (0..len).map(|_| rng.gen_range(0..p)).collect();
                let rows: Vec<Vec<u64>> = (0..p).map(|_| (0..k).map(|_| rng.gen_range(0..p)).collect()).collect();
                let l = BivPoly::from_rows(&rows).unwrap();
                let lhs = l.inner(f, &push_down_rec(f, &v, c, n).unwrap());
                let lt = push_down_rec_transposed(f, &l, c, n).unwrap();
                let rhs = lt.iter().zip(&v).fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn round_trips_and_multiplicativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (p, q0, k) in [(2u64, vec![1i64, 1], 5), (3, vec![2, 1], 3), (2, vec![1, 1, 1], 3), (5, vec![2, 1], 2)] {
            let t = tower(p, &q0, k);
            for i in 1..=k {
                for _ in 0..5 {
                    let a = t.random(i, &mut rng);
                    let b = t.random(i, &mut rng);
                    let wa = push_down(&t, &a).unwrap();
                    assert_eq!(lift_up(&t, &wa).unwrap(), a);
                    let wb = push_down(&t, &b).unwrap();
                    let prod = push_down(&t, &t.mul(&a, &b).unwrap()).unwrap();
                    assert_eq!(crate::embedding::biv_mul(&t, &wa, &wb).unwrap(), prod);
                }
                let c = t.random(i - 1, &mut rng);
                let e = embed(&t, &c).unwrap();
                assert_eq!(project(&t, &e).unwrap(), Some(c));
                assert_eq!(project(&t, &t.x(i).unwrap()).unwrap(), None);
            }
        }
    }

    #[test]
    fn embedding_respects_generators() {
        let t = tower(3, &[2, 1], 3);
        for i in 1..=3 {
            // x_i^p - x_i = gamma_{i-1}
            let xi = t.x(i).unwrap();
            let lhs = t.sub(&t.pow(&xi, 3).unwrap(), &xi).unwrap();
            assert_eq!(lhs, embed(&t, t.gamma(i - 1).unwrap()).unwrap());
        }
    }

    #[test]
    fn transposed_push_down_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = tower(3, &[1, 0, 1], 2);
        let f = t.field();
        for i in 1..=2 {
            let m = t.degree(i - 1);
            let forms: Vec<Vec<u64>> = (0..3).map(|_| (0..m).map(|_| rng.gen_range(0..3)).collect()).collect();
            let fast = push_down_transposed(&t, i, &forms).unwrap();
            for (a, &got) in fast.iter().enumerate() {
                let mono = t.from_poly(i, &PrimePoly::monomial(f, 1, a)).unwrap();
                let w = push_down(&t, &mono).unwrap();
                let want = w.parts().iter().zip(&forms).fold(0, |acc, (part, form)| {
                    part.coeffs().iter().zip(form).fold(acc, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
                });
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn trace_table_shape() {
        let t = tower(2, &[1, 1], 2);
        let (tt, dq) = precompute_level_tables(&t, 2).unwrap();
        assert_eq!(tt.rows().len(), 2);
        assert!(tt.rows()[0].iter().all(|&x| x == 0));
        assert_eq!(tt.entry(1, 0), 0);
        assert_eq!(&dq, t.dqinv(2).unwrap());
        assert!(precompute_level_tables(&t, 0).is_err());
    }
}
