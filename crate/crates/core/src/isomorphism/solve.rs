//! Artin-Schreier equations `X^p - X = alpha` in the primitive tower.

use crate::basefield::PrimeModulus;
use crate::embedding::{biv_mul, embed, lift_up, project, push_down, BivariateElement};
use crate::error::{Error, Result};
use crate::frobtrace::{beta_big, pseudotrace};
use crate::towerbuild::TowerDescriptor;
use crate::towerops::TowerElement;

/// Solves `M y = b` over F_p for a tall matrix given by columns; `None` when
/// inconsistent. Columns are assumed independent.
fn solve_columns(f: PrimeModulus, cols: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let rows = b.len();
    let n = cols.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).chain(std::iter::once(b[r])).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..rows {
            if k != r && m[k][c] != 0 {
                let factor = m[k][c];
                let (src, dst) = if k < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[k])
                } else {
                    let (a, b) = m.split_at_mut(k);
                    (&a[r], &mut b[0])
                };
                for (d, &s) in dst.iter_mut().zip(src.iter()) {
                    *d = f.sub(*d, f.mul(factor, s));
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if m[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut y = vec![0; n];
    for (r, c) in pivots {
        y[c] = m[r][n];
    }
    Some(y)
}

/// `delta` in `U_0` with `delta^p - delta = alpha` and zero constant
/// coordinate, by linear algebra.
pub fn naive_solve(t: &TowerDescriptor, alpha: &TowerElement) -> Result<TowerElement> {
    t.check(alpha)?;
    if alpha.level() != 0 {
        return Err(Error::LevelMismatch(0, alpha.level()));
    }
    if t.absolute_trace(alpha)? != 0 {
        return Err(Error::NonzeroTrace);
    }
    let f = t.field();
    let d = t.d();
    // the kernel of y -> y^p - y is F_p, so the basis x_0^1 .. x_0^{d-1} suffices
    let cols: Vec<Vec<u64>> = (1..d)
        .map(|k| {
            let mut c = vec![0; d];
            c[k] = 1;
            let y = TowerElement::from_parts(0, c);
            let yp = t.frobenius_once(&y)?;
            Ok(t.sub(&yp, &y)?.into_coeffs())
        })
        .collect::<Result<_>>()?;
    let y = solve_columns(f, &cols, alpha.coeffs()).ok_or(Error::NonzeroTrace)?;
    let mut out = vec![0; d];
    out[1..].copy_from_slice(&y);
    Ok(TowerElement::from_parts(0, out))
}

/// `mu` in `U_i` with `mu^{p^{p^{i-1} d}} - mu = eta`, by back-substitution
/// in the bivariate basis; the coordinate `mu_0` is set to zero.
pub fn approximate_as(t: &TowerDescriptor, eta: &TowerElement) -> Result<TowerElement> {
    let i = eta.level();
    if i == 0 {
        return Err(Error::LevelOutOfRange { level: 0, height: t.height() });
    }
    let f = t.field();
    let p = t.p() as usize;
    let parts = push_down(t, eta)?.into_parts();
    if !parts[p - 1].is_zero() {
        return Err(Error::NotInImage);
    }
    // x_i^{q} = x_i + beta with q = |U_{i-1}|
    let beta = beta_big(t, i - 1, i - 1)?;
    let beta_inv = t.inv(&beta)?;
    let mut beta_pow = vec![t.one(i - 1)];
    for k in 1..=p {
        beta_pow.push(t.mul(&beta_pow[k - 1], &beta)?);
    }
    let mut mu = vec![t.zero(i - 1); p];
    for j in (1..p).rev() {
        let mut rhs = parts[j - 1].clone();
        for h in j + 1..p {
            let c = f.binomial(h as u64, (j - 1) as u64);
            let term = t.scale(&t.mul(&beta_pow[h - j + 1], &mu[h])?, c);
            rhs = t.sub(&rhs, &term)?;
        }
        let jinv = f.inv(j as u64)?;
        mu[j] = t.scale(&t.mul(&rhs, &beta_inv)?, jinv);
    }
    lift_up(t, &BivariateElement::from_parts(i, mu))
}

/// `delta` in `U_i` with `delta^p - delta = alpha`; requires `Tr(alpha) = 0`.
pub fn artin_schreier_solve(t: &TowerDescriptor, alpha: &TowerElement) -> Result<TowerElement> {
    t.check(alpha)?;
    let i = alpha.level();
    if t.absolute_trace(alpha)? != 0 {
        return Err(Error::NonzeroTrace);
    }
    if i == 0 {
        return naive_solve(t, alpha);
    }
    let eta = pseudotrace(t, alpha, i - 1)?;
    let mu = approximate_as(t, &eta)?;
    // alpha - (mu^p - mu) lies in U_{i-1}
    let rest = t.add(&t.sub(alpha, &t.frobenius_once(&mu)?)?, &mu)?;
    let rest = project(t, &rest)?
        .ok_or_else(|| Error::Internal(format!("Artin-Schreier residue at level {i} is not in U_{}", i - 1)))?;
    let delta = artin_schreier_solve(t, &rest)?;
    t.add(&mu, &embed(t, &delta)?)
}

/// For `b` generating `U_i` over `U_{i-1}` with `b^p - b` in `U_{i-1}`,
/// returns `A_0, ..., A_{p-1}` in `U_{i-1}` with `w = sum_j A_j b^j`.
///
/// On the basis `1, b, ..., b^{p-1}` the relative trace form is
/// `(0, ..., 0, -1)`, so `A` follows from the `p` values `Tr(b^j w)`.
pub fn find_parameterization(
    t: &TowerDescriptor,
    w: &BivariateElement,
    b: &BivariateElement,
) -> Result<Vec<TowerElement>> {
    if w.level() != b.level() {
        return Err(Error::LevelMismatch(w.level(), b.level()));
    }
    let level = w.level();
    let p = t.p() as usize;
    if b.parts()[1..].iter().all(|x| x.is_zero()) {
        return Err(Error::NonGenerating);
    }
    let mut powers = vec![BivariateElement::zero(t, level)];
    let mut one = vec![t.zero(level - 1); p];
    one[0] = t.one(level - 1);
    powers[0] = BivariateElement::from_parts(level, one);
    for j in 1..=p {
        let next = biv_mul(t, &powers[j - 1], b)?;
        powers.push(next);
    }
    // b^p - b must lie in U_{i-1}
    let bp = &powers[p];
    if (1..p).any(|j| bp.parts()[j] != b.parts()[j]) {
        return Err(Error::NotArtinSchreier);
    }
    // M_j = Tr_{U_i/U_{i-1}}(b^j w) = -(b^j w)_{p-1}
    let m = (0..p)
        .map(|j| Ok(t.neg(&biv_mul(t, &powers[j], w)?.parts()[p - 1])))
        .collect::<Result<Vec<_>>>()?;
    let mut a = Vec::with_capacity(p);
    a.push(t.sub(&m[0], &m[p - 1])?);
    for j in 1..p {
        a.push(t.neg(&m[p - 1 - j]));
    }
    Ok(a)
}
