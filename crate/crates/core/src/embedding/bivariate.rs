use crate::error::{Error, Result};
use crate::towerbuild::TowerDescriptor;
use crate::towerops::poly::kronecker_mul;
use crate::towerops::TowerElement;

/// An element of `U_i` written as `sum_{j<p} v_j x_i^j` with `v_j` in `U_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateElement {
    level: usize,
    parts: Vec<TowerElement>,
}

impl BivariateElement {
    pub(crate) fn from_parts(level: usize, parts: Vec<TowerElement>) -> Self {
        BivariateElement { level, parts }
    }

    /// Checks that there are `p` parts, all in `U_{level-1}`.
    pub fn new(t: &TowerDescriptor, level: usize, parts: Vec<TowerElement>) -> Result<Self> {
        if level == 0 || level > t.height() {
            return Err(Error::LevelOutOfRange { level, height: t.height() });
        }
        let p = t.p() as usize;
        if parts.len() != p {
            return Err(Error::LengthMismatch { expected: p, found: parts.len() });
        }
        for part in &parts {
            if part.level() != level - 1 {
                return Err(Error::LevelMismatch(level - 1, part.level()));
            }
            t.check(part)?;
        }
        Ok(BivariateElement { level, parts })
    }

    pub fn zero(t: &TowerDescriptor, level: usize) -> Self {
        let p = t.p() as usize;
        BivariateElement { level, parts: vec![t.zero(level - 1); p] }
    }

    /// The level `i` of the element being represented.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn parts(&self) -> &[TowerElement] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<TowerElement> {
        self.parts
    }
}

pub fn biv_add(t: &TowerDescriptor, a: &BivariateElement, b: &BivariateElement) -> Result<BivariateElement> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    let parts = a.parts.iter().zip(&b.parts).map(|(x, y)| t.add(x, y)).collect::<Result<_>>()?;
    Ok(BivariateElement { level: a.level, parts })
}

/// Product in `U_{i-1}[X_i]/(X_i^p - X_i - gamma_{i-1})`.
pub fn biv_mul(t: &TowerDescriptor, a: &BivariateElement, b: &BivariateElement) -> Result<BivariateElement> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    let level = a.level;
    let p = t.p() as usize;
    let gamma = t.gamma(level - 1)?;
    let mut c = kronecker_mul(t, level - 1, &a.parts, &b.parts);
    // X^t = X^{t-p+1} + gamma X^{t-p}
    for k in (p..c.len()).rev() {
        let top = std::mem::replace(&mut c[k], t.zero(level - 1));
        c[k - p + 1] = t.add(&c[k - p + 1], &top)?;
        c[k - p] = t.add(&c[k - p], &t.mul(gamma, &top)?)?;
    }
    c.truncate(p);
    c.resize(p, t.zero(level - 1));
    Ok(BivariateElement { level, parts: c })
}

/// Multiplication by `x_i + beta` with `beta` in `U_{i-1}`.
pub(crate) fn mul_by_shifted_generator(
    t: &TowerDescriptor,
    a: &BivariateElement,
    beta: &TowerElement,
) -> Result<BivariateElement> {
    let p = t.p() as usize;
    let gamma = t.gamma(a.level - 1)?;
    let v = &a.parts;
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let mut s = t.mul(beta, &v[j])?;
        if j == 0 {
            s = t.add(&s, &t.mul(gamma, &v[p - 1])?)?;
        } else {
            s = t.add(&s, &v[j - 1])?;
        }
        if j == 1 {
            s = t.add(&s, &v[p - 1])?;
        }
        out.push(s);
    }
    Ok(BivariateElement { level: a.level, parts: out })
}
