//! Extended GCD over F_p[X]: classical Euclid for small inputs and a
//! half-gcd driven variant above [`HGCD_THRESHOLD`].

use super::poly::PrimePoly;
use crate::error::{Error, Result};

pub const HGCD_THRESHOLD: usize = 96;

/// 2x2 polynomial matrix acting on column vectors `(a, b)`.
#[derive(Clone, Debug)]
struct Mat([PrimePoly; 4]);

impl Mat {
    fn identity(a: &PrimePoly) -> Self {
        let f = a.modulus();
        Mat([PrimePoly::one(f), PrimePoly::zero(f), PrimePoly::zero(f), PrimePoly::one(f)])
    }

    fn apply(&self, a: &PrimePoly, b: &PrimePoly) -> (PrimePoly, PrimePoly) {
        let [m00, m01, m10, m11] = &self.0;
        (&(m00 * a) + &(m01 * b), &(m10 * a) + &(m11 * b))
    }

    fn compose(&self, rhs: &Mat) -> Mat {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        Mat([
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        ])
    }

    /// Left-multiplies by a Euclid step without a full matrix product.
    fn push_step(self, q: &PrimePoly) -> Mat {
        let [m00, m01, m10, m11] = self.0;
        let n10 = &m00 - &(q * &m10);
        let n11 = &m01 - &(q * &m11);
        Mat([m10, m11, n10, n11])
    }
}

fn deg(a: &PrimePoly) -> isize {
    a.degree().map_or(-1, |d| d as isize)
}

/// Returns a product `M` of Euclid steps such that `M (a, b) = (c, d)` with
/// `deg d < ceil(deg a / 2) <= deg c`. Requires `deg a > deg b`.
fn hgcd(a: &PrimePoly, b: &PrimePoly) -> Mat {
    let n = deg(a);
    let m = (n + 1) / 2;
    if deg(b) < m {
        return Mat::identity(a);
    }
    if (n as usize) < HGCD_THRESHOLD {
        let mut mat = Mat::identity(a);
        let (mut x, mut y) = (a.clone(), b.clone());
        while deg(&y) >= m {
            let (q, r) = x.divrem(&y).expect("nonzero");
            mat = mat.push_step(&q);
            x = y;
            y = r;
        }
        return mat;
    }
    let mu = m as usize;
    let r = hgcd(&a.shift_down(mu), &b.shift_down(mu));
    let (a1, b1) = r.apply(a, b);
    if deg(&b1) < m {
        return r;
    }
    let (q, e) = a1.divrem(&b1).expect("nonzero");
    let r = r.push_step(&q);
    let k = (2 * m - deg(&b1)).max(0) as usize;
    let s = hgcd(&b1.shift_down(k), &e.shift_down(k));
    s.compose(&r)
}

/// Extended GCD: returns `(g, u, v)` with `g` monic, `g = gcd(a, b) = u a + v b`.
pub fn poly_xgcd(a: &PrimePoly, b: &PrimePoly) -> Result<(PrimePoly, PrimePoly, PrimePoly)> {
    a.check_same(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let f = a.modulus();
    let swap = deg(a) < deg(b);
    let (mut x, mut y) = if swap { (b.clone(), a.clone()) } else { (a.clone(), b.clone()) };
    let mut mat = Mat::identity(&x);
    if deg(&x) == deg(&y) && !y.is_zero() {
        let (q, r) = x.divrem(&y)?;
        mat = mat.push_step(&q);
        x = y;
        y = r;
    }
    while !y.is_zero() {
        if deg(&x) as usize >= HGCD_THRESHOLD {
            let h = hgcd(&x, &y);
            let (nx, ny) = h.apply(&x, &y);
            mat = h.compose(&mat);
            x = nx;
            y = ny;
            if y.is_zero() {
                break;
            }
        }
        let (q, r) = x.divrem(&y)?;
        mat = mat.push_step(&q);
        x = y;
        y = r;
    }
    let lc_inv = f.inv(x.leading())?;
    let [m00, m01, _, _] = mat.0;
    let (u, v) = if swap { (m01, m00) } else { (m00, m01) };
    Ok((x.scale(lc_inv), u.scale(lc_inv), v.scale(lc_inv)))
}

/// Classical extended Euclid, kept as a reference for the fast path.
pub fn xgcd_classical(a: &PrimePoly, b: &PrimePoly) -> Result<(PrimePoly, PrimePoly, PrimePoly)> {
    a.check_same(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let f = a.modulus();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PrimePoly::one(f), PrimePoly::zero(f));
    let (mut t0, mut t1) = (PrimePoly::zero(f), PrimePoly::one(f));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc_inv = f.inv(r0.leading())?;
    Ok((r0.scale(lc_inv), s0.scale(lc_inv), t0.scale(lc_inv)))
}

/// Inverse of `a` modulo `h`, if it exists.
pub fn inverse_mod(a: &PrimePoly, h: &PrimePoly) -> Result<PrimePoly> {
    let (g, u, _) = poly_xgcd(&a.rem(h)?, h)?;
    if g.degree() != Some(0) {
        return Err(Error::NotInvertible);
    }
    u.rem(h)
}
