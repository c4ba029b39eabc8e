use std::sync::OnceLock;

use astower::basefield::{PrimeModulus, PrimePoly};
use astower::embedding::{biv_add, biv_mul, embed, lift_up, project, push_down};
use astower::frobtrace::{iter_frobenius, pseudotrace};
use astower::isomorphism::{apply_inverse, apply_isomorphism, artin_schreier_solve, random_general_tower, GeneralTower};
use astower::towerbuild::{smallest_base_polynomial, TowerDescriptor};
use astower::towerops::TowerElement;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Fixture {
    t: TowerDescriptor,
    g: GeneralTower,
}

const SHAPES: [(u64, usize, usize); 4] = [(2, 1, 6), (2, 3, 3), (3, 1, 4), (5, 2, 2)];

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        SHAPES
            .iter()
            .map(|&(p, d, k)| {
                let f = PrimeModulus::new(p).unwrap();
                let t = TowerDescriptor::build(f, smallest_base_polynomial(f, d).unwrap(), k).unwrap();
                let g = random_general_tower(&t, k, &mut ChaCha8Rng::seed_from_u64(p * 31 + d as u64)).unwrap();
                Fixture { t, g }
            })
            .collect()
    })
}

/// A fixture, a level of it and a seeded generator for elements at that level.
fn case() -> impl Strategy<Value = (usize, usize, u64)> {
    (0..SHAPES.len()).prop_flat_map(|c| (Just(c), 0..=SHAPES[c].2, any::<u64>()))
}

fn elems(t: &TowerDescriptor, level: usize, seed: u64) -> [TowerElement; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [t.random(level, &mut rng), t.random(level, &mut rng), t.random(level, &mut rng)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_laws((c, i, seed) in case()) {
        let t = &fixtures()[c].t;
        let [a, b, e] = elems(t, i, seed);
        prop_assert_eq!(t.mul(&a, &b).unwrap(), t.mul(&b, &a).unwrap());
        let lhs = t.mul(&t.mul(&a, &b).unwrap(), &e).unwrap();
        prop_assert_eq!(lhs, t.mul(&a, &t.mul(&b, &e).unwrap()).unwrap());
        let lhs = t.mul(&a, &t.add(&b, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, t.add(&t.mul(&a, &b).unwrap(), &t.mul(&a, &e).unwrap()).unwrap());
        prop_assert_eq!(t.add(&a, &t.neg(&a)).unwrap(), t.zero(i));
    }

    #[test]
    fn inverses((c, i, seed) in case()) {
        let t = &fixtures()[c].t;
        let [a, ..] = elems(t, i, seed);
        prop_assume!(!a.is_zero());
        prop_assert_eq!(t.mul(&a, &t.inv(&a).unwrap()).unwrap(), t.one(i));
    }

    #[test]
    fn push_down_is_a_ring_isomorphism((c, i, seed) in case()) {
        prop_assume!(i > 0);
        let t = &fixtures()[c].t;
        let [a, b, _] = elems(t, i, seed);
        let (wa, wb) = (push_down(t, &a).unwrap(), push_down(t, &b).unwrap());
        prop_assert_eq!(&lift_up(t, &wa).unwrap(), &a);
        prop_assert_eq!(push_down(t, &t.add(&a, &b).unwrap()).unwrap(), biv_add(t, &wa, &wb).unwrap());
        prop_assert_eq!(push_down(t, &t.mul(&a, &b).unwrap()).unwrap(), biv_mul(t, &wa, &wb).unwrap());
    }

    #[test]
    fn embedding_then_projection((c, i, seed) in case()) {
        let t = &fixtures()[c].t;
        prop_assume!(i < t.height());
        let [a, b, _] = elems(t, i, seed);
        let (ea, eb) = (embed(t, &a).unwrap(), embed(t, &b).unwrap());
        prop_assert_eq!(project(t, &ea).unwrap(), Some(a.clone()));
        prop_assert_eq!(t.mul(&ea, &eb).unwrap(), embed(t, &t.mul(&a, &b).unwrap()).unwrap());
        // x_{i+1} does not come from below
        prop_assert_eq!(project(t, &t.add(&ea, &t.x(i + 1).unwrap()).unwrap()).unwrap(), None);
    }

    #[test]
    fn frobenius_is_an_automorphism((c, i, seed) in case(), pick in any::<prop::sample::Index>()) {
        let t = &fixtures()[c].t;
        let [a, b, _] = elems(t, i, seed);
        let (p, d) = (t.p(), t.d() as u64);
        let mut admissible: Vec<u64> = (0..d).collect();
        admissible.extend((0..=i as u32).map(|j| p.pow(j) * d));
        let n = *pick.get(&admissible);
        let fa = iter_frobenius(t, &a, n).unwrap();
        if n < 4 {
            prop_assert_eq!(&fa, &t.pow(&a, p.pow(n as u32)).unwrap());
        }
        let fb = iter_frobenius(t, &b, n).unwrap();
        prop_assert_eq!(iter_frobenius(t, &t.mul(&a, &b).unwrap(), n).unwrap(), t.mul(&fa, &fb).unwrap());
        prop_assert_eq!(iter_frobenius(t, &t.add(&a, &b).unwrap(), n).unwrap(), t.add(&fa, &fb).unwrap());
        if n >= d && n < t.degree(i) as u64 {
            // p applications of F^n give F^{pn}
            let mut cur = a.clone();
            for _ in 0..p {
                cur = iter_frobenius(t, &cur, n).unwrap();
            }
            prop_assert_eq!(cur, iter_frobenius(t, &a, p * n).unwrap());
        }
        // [U_i : F_p] = p^i d
        prop_assert_eq!(&iter_frobenius(t, &a, t.degree(i) as u64).unwrap(), &a);
    }

    #[test]
    fn pseudotrace_is_linear_and_frobenius_stable((c, i, seed) in case(), j in 0usize..4, s in 0u64..5) {
        prop_assume!(j <= i);
        let t = &fixtures()[c].t;
        let [a, b, _] = elems(t, i, seed);
        let p = t.p();
        let combo = t.add(&t.scale(&a, s % p), &b).unwrap();
        let lhs = pseudotrace(t, &combo, j).unwrap();
        let rhs = t.add(&t.scale(&pseudotrace(t, &a, j).unwrap(), s % p), &pseudotrace(t, &b, j).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // telescoping: P(a^p) - P(a) = a^{p^N} - a with N = p^j d
        let shifted = iter_frobenius(t, &a, 1).unwrap();
        let full = pseudotrace(t, &a, j).unwrap();
        let wrap = iter_frobenius(t, &a, (t.d() as u64) * p.pow(j as u32)).unwrap();
        prop_assert_eq!(
            t.sub(&pseudotrace(t, &shifted, j).unwrap(), &full).unwrap(),
            t.sub(&wrap, &a).unwrap()
        );
    }

    #[test]
    fn artin_schreier_solutions((c, i, seed) in case()) {
        let t = &fixtures()[c].t;
        let [v, ..] = elems(t, i, seed);
        let alpha = t.sub(&t.pow(&v, t.p()).unwrap(), &v).unwrap();
        let delta = artin_schreier_solve(t, &alpha).unwrap();
        prop_assert_eq!(t.sub(&t.pow(&delta, t.p()).unwrap(), &delta).unwrap(), alpha);
        // solutions differ by an element of F_p
        prop_assert!(t.sub(&delta, &v).unwrap().as_constant().is_some());
    }

    #[test]
    fn general_isomorphism((c, i, seed) in case()) {
        let Fixture { t, g } = &fixtures()[c];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (g.random(i, &mut rng), g.random(i, &mut rng));
        let (sa, sb) = (apply_isomorphism(t, g, &a).unwrap(), apply_isomorphism(t, g, &b).unwrap());
        prop_assert_eq!(apply_isomorphism(t, g, &g.mul(&a, &b).unwrap()).unwrap(), t.mul(&sa, &sb).unwrap());
        prop_assert_eq!(apply_isomorphism(t, g, &g.add(&a, &b).unwrap()).unwrap(), t.add(&sa, &sb).unwrap());
        prop_assert_eq!(apply_inverse(t, g, &sa).unwrap(), a);
    }

    #[test]
    fn polynomial_round_trip((c, i, seed) in case()) {
        let t = &fixtures()[c].t;
        let [a, ..] = elems(t, i, seed);
        let poly: PrimePoly = t.to_poly(&a);
        prop_assert_eq!(t.from_poly(i, &poly).unwrap(), a);
    }
}
