//! Iterated Frobenius and pseudotraces.
//!
//! In `U_i` one has `x_i^{p^n} = x_i + beta_{i-1,n}` where
//! `beta_{i,n} = gamma_i + gamma_i^p + ... + gamma_i^{p^{n-1}}`, so powers of
//! Frobenius can be pushed down one level at a time. Only exponents `n < d`
//! reached by the halving recursion and `n = p^j d` are ever needed.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::basefield::{compose_mod, frobenius_power, PrimePoly};
use crate::embedding::bivariate::mul_by_shifted_generator;
use crate::embedding::{biv_add, lift_up, push_down, BivariateElement};
use crate::error::{Error, Result};
use crate::towerbuild::TowerDescriptor;
use crate::towerops::TowerElement;

/// Pseudotraces of `gamma_i` stored with level `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaTables {
    /// `beta_{i,n}` for `n` in [`little_exponents`]`(d)`.
    pub little: BTreeMap<usize, TowerElement>,
    /// `beta_{i,p^j d}` for `j <= i`.
    pub big: Vec<TowerElement>,
}

impl BetaTables {
    pub(crate) fn check_shape(&self, t: &TowerDescriptor, level: usize) -> Result<()> {
        let want: BTreeSet<usize> = little_exponents(t.d());
        let have: BTreeSet<usize> = self.little.keys().copied().collect();
        if want != have {
            return Err(Error::Invalid(format!("little pseudotrace table of level {level} has the wrong exponents")));
        }
        if self.big.len() != level + 1 {
            return Err(Error::LengthMismatch { expected: level + 1, found: self.big.len() });
        }
        for e in self.little.values().chain(&self.big) {
            if e.level() != level {
                return Err(Error::LevelMismatch(level, e.level()));
            }
            t.check(e)?;
        }
        Ok(())
    }
}

/// Exponents `n <= d` visited by the little pseudotrace recursion:
/// `d`, then `floor(n/2)` down to 1, plus `n - 1` for each odd `n >= 3`.
pub fn little_exponents(d: usize) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    let mut n = d;
    loop {
        s.insert(n);
        if n <= 1 {
            break;
        }
        let m = n / 2;
        if n % 2 == 1 {
            s.insert(2 * m);
        }
        n = m;
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Exponent {
    /// `n < d`
    Small(usize),
    /// `n = p^j d`
    Big(usize),
}

fn classify(t: &TowerDescriptor, n: u64) -> Result<Exponent> {
    let d = t.d() as u64;
    if n < d {
        return Ok(Exponent::Small(n as usize));
    }
    let p = t.p();
    let mut m = d;
    let mut j = 0;
    while m < n {
        m = m.checked_mul(p).ok_or(Error::InadmissibleExponent { n })?;
        j += 1;
    }
    if m == n {
        Ok(Exponent::Big(j))
    } else {
        Err(Error::InadmissibleExponent { n })
    }
}

/// `x_0^{p^n} mod Q_0` for the small exponents the pseudotraces use.
pub(crate) fn base_frobenius_table(t: &TowerDescriptor) -> Result<BTreeMap<usize, PrimePoly>> {
    let q0 = t.modulus(0);
    Ok(little_exponents(t.d())
        .into_iter()
        .filter(|&n| n < t.d())
        .map(|n| (n, frobenius_power(q0, n as u64)))
        .collect())
}

fn xi(t: &TowerDescriptor, n: usize) -> Cow<'_, PrimePoly> {
    match t.base_frobenius.get(&n) {
        Some(x) => Cow::Borrowed(x),
        None => Cow::Owned(frobenius_power(t.modulus(0), n as u64)),
    }
}

/// `beta_{level, n}`, from the tables.
fn beta(t: &TowerDescriptor, level: usize, e: Exponent) -> Result<Cow<'_, TowerElement>> {
    let stored = t.betas(level)?;
    match e {
        Exponent::Small(n) => match stored.little.get(&n) {
            Some(b) => Ok(Cow::Borrowed(b)),
            None => Ok(Cow::Owned(little_pseudotrace(t, t.gamma(level)?, n)?)),
        },
        // x_{level+1}^{p^j d} = x_{level+1} once j > level
        Exponent::Big(j) if j > level => Ok(Cow::Owned(t.zero(level))),
        Exponent::Big(j) => Ok(Cow::Borrowed(&stored.big[j])),
    }
}

/// `beta_{level, p^j d} = x_{level+1}^{p^{p^j d}} - x_{level+1}`.
pub fn beta_big(t: &TowerDescriptor, level: usize, j: usize) -> Result<TowerElement> {
    Ok(beta(t, level, Exponent::Big(j))?.into_owned())
}

/// `v^{p^n}` for `n < d` or `n = p^j d`.
pub fn iter_frobenius(t: &TowerDescriptor, v: &TowerElement, n: u64) -> Result<TowerElement> {
    t.check(v)?;
    let e = classify(t, n)?;
    frob_rec(t, v, e)
}

fn frob_rec(t: &TowerDescriptor, v: &TowerElement, e: Exponent) -> Result<TowerElement> {
    let i = v.level();
    match e {
        Exponent::Small(0) => return Ok(v.clone()),
        // [U_i : F_p] divides p^j d
        Exponent::Big(j) if i <= j => return Ok(v.clone()),
        _ => {}
    }
    if i == 0 {
        let n = match e {
            Exponent::Small(n) => n,
            Exponent::Big(_) => unreachable!("handled above"),
        };
        let q0 = t.modulus(0);
        let r = compose_mod(&t.to_poly(v), &xi(t, n), q0);
        return Ok(TowerElement::from_parts(0, r.padded(q0.degree())));
    }
    let parts = push_down(t, v)?.into_parts();
    let images = parts.iter().map(|x| frob_rec(t, x, e)).collect::<Result<Vec<_>>>()?;
    let b = beta(t, i - 1, e)?;
    // Horner in x_i^{p^n} = x_i + beta
    let p = t.p() as usize;
    let mut acc = BivariateElement::zero(t, i);
    for img in images.into_iter().rev() {
        acc = mul_by_shifted_generator(t, &acc, &b)?;
        let mut c = vec![t.zero(i - 1); p];
        c[0] = img;
        acc = biv_add(t, &acc, &BivariateElement::from_parts(i, c))?;
    }
    lift_up(t, &acc)
}

/// `v + v^p + ... + v^{p^{n-1}}` for `1 <= n <= d`.
pub fn little_pseudotrace(t: &TowerDescriptor, v: &TowerElement, n: usize) -> Result<TowerElement> {
    if n == 0 || n > t.d() {
        return Err(Error::InadmissibleExponent { n: n as u64 });
    }
    t.check(v)?;
    lpt_rec(t, v, n, &mut None)
}

fn lpt_rec(
    t: &TowerDescriptor,
    v: &TowerElement,
    n: usize,
    record: &mut Option<BTreeMap<usize, TowerElement>>,
) -> Result<TowerElement> {
    if n == 1 {
        if let Some(r) = record {
            r.insert(1, v.clone());
        }
        return Ok(v.clone());
    }
    let m = n / 2;
    let half = lpt_rec(t, v, m, record)?;
    let mut out = t.add(&half, &frob_rec(t, &half, Exponent::Small(m))?)?;
    if n % 2 == 1 {
        if let Some(r) = record {
            r.insert(2 * m, out.clone());
        }
        out = t.add(&out, &frob_rec(t, v, Exponent::Small(2 * m))?)?;
    }
    if let Some(r) = record {
        r.insert(n, out.clone());
    }
    Ok(out)
}

/// `v + v^p + ... + v^{p^{p^j d - 1}}` for `j <= level(v)`.
pub fn pseudotrace(t: &TowerDescriptor, v: &TowerElement, j: usize) -> Result<TowerElement> {
    t.check(v)?;
    if j > v.level() {
        return Err(Error::Invalid(format!("pseudotrace index {j} exceeds level {}", v.level())));
    }
    if j == 0 {
        return lpt_rec(t, v, t.d(), &mut None);
    }
    let prev = pseudotrace(t, v, j - 1)?;
    sum_conjugates(t, prev, j - 1)
}

// sum_{h<p} w^{p^{h p^j d}}
fn sum_conjugates(t: &TowerDescriptor, w: TowerElement, j: usize) -> Result<TowerElement> {
    let mut acc = w.clone();
    let mut cur = w;
    for _ in 1..t.p() {
        cur = frob_rec(t, &cur, Exponent::Big(j))?;
        acc = t.add(&acc, &cur)?;
    }
    Ok(acc)
}

/// Pseudotrace tables of `gamma_i`. Needs the tables of the levels below.
pub(crate) fn precompute_betas(t: &TowerDescriptor, level: usize) -> Result<BetaTables> {
    let gamma = t.gamma(level)?;
    let mut record = Some(BTreeMap::new());
    let top = lpt_rec(t, gamma, t.d(), &mut record)?;
    let little = record.expect("recording");
    let mut big = vec![top];
    for j in 1..=level {
        let next = sum_conjugates(t, big[j - 1].clone(), j - 1)?;
        big.push(next);
    }
    Ok(BetaTables { little, big })
}
