//! Invariant suites run by `astower verify`, at sizes the dense oracles can handle.

use anyhow::{Context, Result};
use astower::basefield::{transposed_mul, PolyModulus, PrimePoly};
use astower::embedding::{embed, lift_up, push_down, push_down_transposed};
use astower::frobtrace::{iter_frobenius, little_pseudotrace, pseudotrace};
use astower::isomorphism::{
    apply_inverse, apply_isomorphism, artin_schreier_solve, compute_images, primitive_general_tower,
    random_general_tower,
};
use astower::oracle::{
    basis_convert, naive_conjugate_sum, naive_iter_frobenius, naive_relative_trace, MultivariateTower, SIZE_LIMIT,
};
use astower::towerbuild::{TowerDescriptor, TowerFile};
use astower::towerops::TowerElement;
use astower::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::InvariantFailure;

const MUL_ORACLE_SIZE: usize = 512;
const SMALL_SIZE: usize = 256;
/// Levels with at most this many elements are enumerated by `--exhaustive`.
const ENUMERATION_LIMIT: u64 = 1 << 16;

pub struct Options {
    pub exhaustive: bool,
    pub seed: u64,
    pub samples: usize,
}

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: astower::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Runner {
    passed: usize,
}

impl Runner {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Check) -> Result<()> {
        match f() {
            Ok(()) => {
                println!("ok   {name}");
                self.passed += 1;
                Ok(())
            }
            Err(why) => {
                println!("FAIL {name}: {why}");
                Err(InvariantFailure(format!("{name}: {why}")).into())
            }
        }
    }
}

fn highest_level(t: &TowerDescriptor, size: usize) -> Option<usize> {
    (0..=t.height()).rev().find(|&i| t.degree(i) <= size)
}

fn field_order(t: &TowerDescriptor, i: usize) -> Option<u64> {
    t.p().checked_pow(t.degree(i) as u32)
}

fn all_elements(t: &TowerDescriptor, i: usize) -> impl Iterator<Item = TowerElement> + '_ {
    let p = t.p();
    let n = t.degree(i);
    (0..field_order(t, i).unwrap_or(0)).map(move |mut code| {
        let c = (0..n)
            .map(|_| {
                let x = code % p;
                code /= p;
                x
            })
            .collect();
        t.element(i, c).expect("reduced coordinates")
    })
}

/// `Tr_{U_i/U_{i-1}}(gamma_i)` as an element of `U_{i-1}`.
fn gamma_relative_trace(t: &TowerDescriptor, i: usize) -> astower::Result<TowerElement> {
    let below = t.gamma(i - 1)?;
    Ok(if t.p() != 2 {
        t.neg(below)
    } else if i == 1 && t.d() % 2 == 1 {
        t.one(0)
    } else {
        t.add(&t.one(i - 1), below)?
    })
}

fn admissible_exponents(t: &TowerDescriptor, i: usize) -> Vec<u64> {
    let d = t.d() as u64;
    let mut ns: Vec<u64> = (0..d).collect();
    ns.extend((0..=i as u32 + 1).map(|j| d * t.p().pow(j)));
    ns
}

fn frobenius_agrees(t: &TowerDescriptor, v: &TowerElement) -> Check {
    for n in admissible_exponents(t, v.level()) {
        let fast = lib(iter_frobenius(t, v, n))?;
        let slow = lib(naive_iter_frobenius(t, v, n))?;
        ensure!(fast == slow, "v^(p^{n}) differs for {v:?}");
    }
    Ok(())
}

fn solver_agrees(t: &TowerDescriptor, alpha: &TowerElement) -> Check {
    match artin_schreier_solve(t, alpha) {
        Ok(delta) => {
            let back = lib(t.sub(&lib(t.frobenius_once(&delta))?, &delta))?;
            ensure!(&back == alpha, "solution of X^p - X = {alpha:?} is wrong");
        }
        Err(Error::NonzeroTrace) => ensure!(lib(t.absolute_trace(alpha))? != 0, "spurious trace obstruction"),
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

pub fn run(file: &TowerFile, opts: Options) -> Result<()> {
    let mut r = Runner { passed: 0 };
    r.check("tower consistency", || lib(file.check_consistency()))?;
    let t = file.clone().into_tower().context("loading tower")?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let f = t.field();
    let p = t.p();
    let s = opts.samples;

    let top = highest_level(&t, SIZE_LIMIT);
    let mul_top = highest_level(&t, MUL_ORACLE_SIZE);
    let mt = match mul_top {
        Some(k) => Some(MultivariateTower::primitive_to(&t, k).context("building the oracle tower")?),
        None => None,
    };

    for i in 0..=top.unwrap_or(0).min(t.height()) {
        if t.degree(i) > SIZE_LIMIT {
            break;
        }
        r.check(&format!("field axioms at level {i}"), || {
            for _ in 0..s {
                let [a, b, c] = [0; 3].map(|_| t.random(i, &mut rng));
                let ab_c = lib(t.mul(&lib(t.mul(&a, &b))?, &c))?;
                ensure!(ab_c == lib(t.mul(&a, &lib(t.mul(&b, &c))?))?, "product is not associative");
                let dist = lib(t.add(&lib(t.mul(&a, &b))?, &lib(t.mul(&a, &c))?))?;
                ensure!(lib(t.mul(&a, &lib(t.add(&b, &c))?))? == dist, "product is not distributive");
                if !a.is_zero() {
                    ensure!(lib(t.mul(&a, &lib(t.inv(&a))?))? == t.one(i), "a * a^-1 != 1 for {a:?}");
                }
            }
            Ok(())
        })?;
        if let (Some(mt), true) = (&mt, t.degree(i) <= MUL_ORACLE_SIZE) {
            r.check(&format!("product against the multivariate oracle at level {i}"), || {
                for _ in 0..s {
                    let a = t.random(i, &mut rng);
                    let b = t.random(i, &mut rng);
                    let want = lib(mt.mul(&lib(basis_convert(mt, &a))?, &lib(basis_convert(mt, &b))?))?;
                    ensure!(lib(basis_convert(mt, &lib(t.mul(&a, &b))?))? == want, "products differ");
                }
                Ok(())
            })?;
        }
        if i > 0 {
            r.check(&format!("push_down and lift_up round trip at level {i}"), || {
                for _ in 0..s {
                    let v = t.random(i, &mut rng);
                    ensure!(lib(lift_up(&t, &lib(push_down(&t, &v))?))? == v, "round trip differs for {v:?}");
                }
                Ok(())
            })?;
            r.check(&format!("relative trace of gamma_{i}"), || {
                let got = lib(naive_relative_trace(&t, lib(t.gamma(i))?, i - 1))?;
                ensure!(got == lib(embed(&t, &lib(gamma_relative_trace(&t, i))?))?, "wrong relative trace");
                Ok(())
            })?;
        }
        r.check(&format!("Artin-Schreier solver at level {i}"), || {
            for _ in 0..s {
                let delta = t.random(i, &mut rng);
                let alpha = lib(t.sub(&lib(t.frobenius_once(&delta))?, &delta))?;
                let sol = lib(artin_schreier_solve(&t, &alpha))?;
                ensure!(lib(t.sub(&sol, &delta))?.as_constant().is_some(), "solutions differ by a non-constant");
            }
            ensure!(lib(artin_schreier_solve(&t, &t.zero(i)))?.is_zero(), "X^p - X = 0 not solved by 0");
            Ok(())
        })?;
        if t.degree(i) <= SMALL_SIZE {
            r.check(&format!("iterated Frobenius at level {i}"), || {
                (0..s).try_for_each(|_| frobenius_agrees(&t, &t.random(i, &mut rng)))
            })?;
            r.check(&format!("pseudotraces at level {i}"), || {
                for _ in 0..s {
                    let v = t.random(i, &mut rng);
                    for n in 1..=t.d() {
                        let want = lib(naive_conjugate_sum(&t, &v, n as u64))?;
                        ensure!(lib(little_pseudotrace(&t, &v, n))? == want, "little pseudotrace {n} differs");
                    }
                    for j in 0..=i {
                        let want = lib(naive_conjugate_sum(&t, &v, t.d() as u64 * p.pow(j as u32)))?;
                        ensure!(lib(pseudotrace(&t, &v, j))? == want, "pseudotrace {j} differs");
                    }
                }
                Ok(())
            })?;
            r.check(&format!("transposed products at level {i}"), || {
                let n = t.degree(i);
                let h = lib(PolyModulus::new(lib(t.q(i))?.clone()))?;
                let dot = |a: &[u64], b: &[u64]| a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                for _ in 0..s {
                    let [w, l, v] = [0; 3].map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<u64>>());
                    let (w, v) = (PrimePoly::new(f, w), PrimePoly::new(f, v));
                    let lhs = dot(&lib(transposed_mul(&w, &l, &h))?, &v.padded(n));
                    ensure!(lhs == dot(&l, &h.mulmod(&w, &v).padded(n)), "transposed_mul is not the transpose");
                    if i > 0 {
                        let m = t.degree(i - 1);
                        let forms: Vec<Vec<u64>> =
                            (0..p).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
                        let x = t.random(i, &mut rng);
                        let lhs = dot(&lib(push_down_transposed(&t, i, &forms))?, x.coeffs());
                        let parts = lib(push_down(&t, &x))?;
                        let rhs = parts.parts().iter().zip(&forms).fold(0, |acc, (y, l)| f.add(acc, dot(y.coeffs(), l)));
                        ensure!(lhs == rhs, "push_down_transposed is not the transpose");
                    }
                }
                Ok(())
            })?;
        }
        if opts.exhaustive && field_order(&t, i).is_some_and(|q| q <= ENUMERATION_LIMIT) {
            r.check(&format!("every element of level {i}"), || {
                for v in all_elements(&t, i) {
                    if i > 0 {
                        ensure!(lib(lift_up(&t, &lib(push_down(&t, &v))?))? == v, "round trip differs for {v:?}");
                    }
                    if !v.is_zero() {
                        ensure!(lib(t.mul(&v, &lib(t.inv(&v))?))? == t.one(i), "a * a^-1 != 1 for {v:?}");
                    }
                    let fast = lib(iter_frobenius(&t, &v, t.d() as u64))?;
                    ensure!(fast == lib(naive_iter_frobenius(&t, &v, t.d() as u64))?, "Frobenius differs for {v:?}");
                    solver_agrees(&t, &v)?;
                }
                Ok(())
            })?;
        }
        if let (Some(mt), true) = (&mt, opts.exhaustive && t.degree(i) <= 64) {
            r.check(&format!("every product of basis elements at level {i}"), || {
                let n = t.degree(i);
                let unit = |a: usize| {
                    let mut c = vec![0; n];
                    c[a] = 1;
                    t.element(i, c).expect("unit vector")
                };
                for a in 0..n {
                    for b in a..n {
                        let (x, y) = (unit(a), unit(b));
                        let want = lib(mt.mul(&lib(basis_convert(mt, &x))?, &lib(basis_convert(mt, &y))?))?;
                        ensure!(lib(basis_convert(mt, &lib(t.mul(&x, &y))?))? == want, "x^{a} * x^{b} differs");
                    }
                }
                Ok(())
            })?;
        }
    }

    if let Some(k) = top.filter(|&k| k > 0) {
        r.check("isomorphism of the tower with itself", || {
            let mut g = lib(primitive_general_tower(&t, k))?;
            lib(compute_images(&t, &mut g))?;
            for i in 0..=k {
                let x = lib(t.x(i))?;
                ensure!(lib(t.sub(&g.images()[i], &x))?.as_constant().is_some(), "s_{i} - x_{i} is not constant");
                ensure!(lib(apply_inverse(&t, &g, &g.images()[i]))? == lib(g.x(i))?, "sigma^-1(s_{i}) != x'_{i}");
            }
            Ok(())
        })?;
        r.check("isomorphism with a random tower", || {
            let g = lib(random_general_tower(&t, k, &mut rng))?;
            for i in 1..=k {
                let s = &g.images()[i];
                let lhs = lib(t.sub(&lib(t.frobenius_once(s))?, s))?;
                let rhs = lib(embed(&t, &lib(apply_isomorphism(&t, &g, g.generator(i - 1)))?))?;
                ensure!(lhs == rhs, "s_{i} is not a root of its Artin-Schreier polynomial");
            }
            for _ in 0..s {
                let a = g.random(k, &mut rng);
                let b = g.random(k, &mut rng);
                let (sa, sb) = (lib(apply_isomorphism(&t, &g, &a))?, lib(apply_isomorphism(&t, &g, &b))?);
                let sab = lib(apply_isomorphism(&t, &g, &lib(g.mul(&a, &b))?))?;
                ensure!(sab == lib(t.mul(&sa, &sb))?, "sigma is not multiplicative");
                let sum = lib(apply_isomorphism(&t, &g, &lib(g.add(&a, &b))?))?;
                ensure!(sum == lib(t.add(&sa, &sb))?, "sigma is not additive");
                ensure!(lib(apply_inverse(&t, &g, &sa))? == a, "sigma^-1(sigma(a)) != a");
            }
            Ok(())
        })?;
    }
    println!("{} checks passed", r.passed);
    Ok(())
}
