//! Towers given by arbitrary generators `gamma'_i` on the multivariate basis,
//! and the isomorphism `sigma` onto the primitive tower.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::solve::{artin_schreier_solve, find_parameterization};
use crate::basefield::{PrimeModulus, PrimePoly};
use crate::embedding::{biv_add, biv_mul, embed, lift_up, push_down, BivariateElement};
use crate::error::{Error, Result};
use crate::oracle::{MultivariateElement, MultivariateTower};
use crate::towerbuild::TowerDescriptor;
use crate::towerops::TowerElement;

/// An element of `U'_i` on the basis `x'_0^{e_0} ... x'_i^{e_i}`, `e_0` fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralElement {
    pub level: usize,
    pub coeffs: Vec<u64>,
}

/// `U'_0 = U_0` and `U'_{i+1} = U'_i[X]/(X^p - X - gamma'_i)`, with the
/// images `s_i = sigma(x'_i)` once computed.
#[derive(Clone, Debug)]
pub struct GeneralTower {
    mt: MultivariateTower,
    generators: Vec<GeneralElement>,
    images: Vec<TowerElement>,
    // push-downs of s_1, s_2, ...
    pushed: Vec<BivariateElement>,
}

/// `{p, d, k, q0, generators, images?}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralTowerFile {
    pub p: u64,
    pub d: usize,
    pub k: usize,
    pub q0: Vec<u64>,
    pub generators: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Vec<u64>>>,
}

impl GeneralTower {
    /// `generators[i]` is `gamma'_i`, of level `i`. `U'_0` shares `Q_0` with `t`.
    pub fn new(t: &TowerDescriptor, generators: Vec<GeneralElement>) -> Result<Self> {
        if generators.len() > t.height() {
            return Err(Error::LevelOutOfRange { level: generators.len(), height: t.height() });
        }
        for (i, g) in generators.iter().enumerate() {
            if g.level != i {
                return Err(Error::LevelMismatch(i, g.level));
            }
        }
        let mt = MultivariateTower::general(t.q(0)?.clone(), generators.iter().map(|g| g.coeffs.clone()).collect())?;
        let generators = (0..generators.len()).map(|i| to_general(mt.gamma(i))).collect();
        Ok(GeneralTower { mt, generators, images: Vec::new(), pushed: Vec::new() })
    }

    pub fn field(&self) -> PrimeModulus {
        self.mt.field()
    }

    pub fn height(&self) -> usize {
        self.mt.height()
    }

    pub fn size(&self, level: usize) -> usize {
        self.mt.size(level)
    }

    pub fn generator(&self, i: usize) -> &GeneralElement {
        &self.generators[i]
    }

    /// `s_0, ..., s_j` for the levels computed so far.
    pub fn images(&self) -> &[TowerElement] {
        &self.images
    }

    pub fn element(&self, level: usize, coeffs: Vec<u64>) -> Result<GeneralElement> {
        Ok(to_general(&self.mt.element(level, coeffs)?))
    }

    /// `x'_i`
    pub fn x(&self, level: usize) -> Result<GeneralElement> {
        Ok(to_general(&self.mt.generator(level)?))
    }

    pub fn one(&self, level: usize) -> GeneralElement {
        to_general(&self.mt.one(level))
    }

    pub fn random<R: Rng + ?Sized>(&self, level: usize, rng: &mut R) -> GeneralElement {
        let p = self.field().value();
        GeneralElement { level, coeffs: (0..self.size(level)).map(|_| rng.gen_range(0..p)).collect() }
    }

    fn to_mv(&self, a: &GeneralElement) -> Result<MultivariateElement> {
        self.mt.element(a.level, a.coeffs.clone())
    }

    pub fn add(&self, a: &GeneralElement, b: &GeneralElement) -> Result<GeneralElement> {
        Ok(to_general(&self.mt.add(&self.to_mv(a)?, &self.to_mv(b)?)?))
    }

    pub fn sub(&self, a: &GeneralElement, b: &GeneralElement) -> Result<GeneralElement> {
        Ok(to_general(&self.mt.sub(&self.to_mv(a)?, &self.to_mv(b)?)?))
    }

    /// Product on the multivariate basis (dense reference arithmetic).
    pub fn mul(&self, a: &GeneralElement, b: &GeneralElement) -> Result<GeneralElement> {
        Ok(to_general(&self.mt.mul(&self.to_mv(a)?, &self.to_mv(b)?)?))
    }

    pub fn to_file(&self) -> GeneralTowerFile {
        GeneralTowerFile {
            p: self.field().value(),
            d: self.mt.d(),
            k: self.height(),
            q0: self.mt.q0().coeffs().to_vec(),
            generators: self.generators.iter().map(|g| g.coeffs.clone()).collect(),
            images: (!self.images.is_empty()).then(|| self.images.iter().map(|s| s.coeffs().to_vec()).collect()),
        }
    }

    /// Loads a file against the primitive tower `t`; stored images are
    /// checked against their defining equations.
    pub fn from_file(t: &TowerDescriptor, file: GeneralTowerFile) -> Result<Self> {
        if file.p != t.p() || file.d != t.d() {
            return Err(Error::Invalid("general tower and primitive tower differ in p or d".into()));
        }
        if PrimePoly::new(t.field(), file.q0.clone()) != *t.q(0)? {
            return Err(Error::Invalid("general tower must share Q_0 with the primitive tower".into()));
        }
        if file.generators.len() != file.k {
            return Err(Error::LengthMismatch { expected: file.k, found: file.generators.len() });
        }
        let gens = file
            .generators
            .into_iter()
            .enumerate()
            .map(|(level, coeffs)| GeneralElement { level, coeffs })
            .collect();
        let mut g = GeneralTower::new(t, gens)?;
        if let Some(images) = file.images {
            for (i, s) in images.into_iter().enumerate() {
                let s = t.element(i, s)?;
                g.push_image(t, s)?;
            }
        }
        Ok(g)
    }

    fn push_image(&mut self, t: &TowerDescriptor, s: TowerElement) -> Result<()> {
        let i = self.images.len();
        if i > self.height() {
            return Err(Error::LevelOutOfRange { level: i, height: self.height() });
        }
        if i == 0 {
            if s != t.x(0)? {
                return Err(Error::Invalid("s_0 must be x_0".into()));
            }
        } else {
            let alpha = embed(t, &apply_isomorphism(t, self, &self.generators[i - 1])?)?;
            let lhs = t.sub(&t.frobenius_once(&s)?, &s)?;
            if lhs != alpha {
                return Err(Error::Invalid(format!("image s_{i} does not satisfy its Artin-Schreier equation")));
            }
            self.pushed.push(push_down(t, &s)?);
        }
        self.images.push(s);
        Ok(())
    }
}

fn to_general(a: &MultivariateElement) -> GeneralElement {
    GeneralElement { level: a.level(), coeffs: a.coeffs().to_vec() }
}

/// Fills `s_0, ..., s_k`: `s_i` is a root of `X^p - X - sigma(gamma'_{i-1})`.
/// Fails with [`Error::DegenerateGenerator`] when `gamma'_{i-1}` has zero
/// absolute trace, since `U'_i` is then not a field.
pub fn compute_images(t: &TowerDescriptor, g: &mut GeneralTower) -> Result<()> {
    if g.images.is_empty() {
        g.push_image(t, t.x(0)?)?;
    }
    while g.images.len() <= g.height() {
        let i = g.images.len();
        let alpha = apply_isomorphism(t, g, &g.generators[i - 1])?;
        if t.absolute_trace(&alpha)? == 0 {
            return Err(Error::DegenerateGenerator(i - 1));
        }
        let s = artin_schreier_solve(t, &embed(t, &alpha)?)?;
        g.push_image(t, s)?;
    }
    Ok(())
}

/// `sigma(v)` in the primitive tower.
pub fn apply_isomorphism(t: &TowerDescriptor, g: &GeneralTower, v: &GeneralElement) -> Result<TowerElement> {
    let i = v.level;
    if i >= g.images.len() {
        return Err(Error::MissingImages(i));
    }
    let n = g.size(i);
    if v.coeffs.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: v.coeffs.len() });
    }
    if i == 0 {
        return t.element(0, v.coeffs.clone());
    }
    let p = t.p() as usize;
    let m = g.size(i - 1);
    let s = &g.pushed[i - 1];
    let mut acc = BivariateElement::zero(t, i);
    for j in (0..p).rev() {
        let slice = GeneralElement { level: i - 1, coeffs: v.coeffs[j * m..(j + 1) * m].to_vec() };
        let img = apply_isomorphism(t, g, &slice)?;
        acc = biv_mul(t, &acc, s)?;
        let mut c = vec![t.zero(i - 1); p];
        c[0] = img;
        acc = biv_add(t, &acc, &BivariateElement::from_parts(i, c))?;
    }
    lift_up(t, &acc)
}

/// `sigma^{-1}(a)` on the basis of the general tower.
pub fn apply_inverse(t: &TowerDescriptor, g: &GeneralTower, a: &TowerElement) -> Result<GeneralElement> {
    t.check(a)?;
    let i = a.level();
    if i >= g.images.len() {
        return Err(Error::MissingImages(i));
    }
    if i == 0 {
        return Ok(GeneralElement { level: 0, coeffs: a.coeffs().to_vec() });
    }
    let w = push_down(t, a)?;
    let coeffs = find_parameterization(t, &w, &g.pushed[i - 1])?;
    let mut out = Vec::with_capacity(g.size(i));
    for c in &coeffs {
        out.extend(apply_inverse(t, g, c)?.coeffs);
    }
    Ok(GeneralElement { level: i, coeffs: out })
}

/// A general tower of height `k` with random generators of nonzero trace,
/// images included.
pub fn random_general_tower<R: Rng + ?Sized>(t: &TowerDescriptor, k: usize, rng: &mut R) -> Result<GeneralTower> {
    let mut g = GeneralTower::new(t, Vec::new())?;
    compute_images(t, &mut g)?;
    for i in 0..k {
        loop {
            let cand = g.random(i, rng);
            let alpha = apply_isomorphism(t, &g, &cand)?;
            if t.absolute_trace(&alpha)? != 0 {
                let mut gens = g.generators.clone();
                gens.push(cand);
                let images = std::mem::take(&mut g.images);
                let pushed = std::mem::take(&mut g.pushed);
                let mut next = GeneralTower::new(t, gens)?;
                next.images = images;
                next.pushed = pushed;
                compute_images(t, &mut next)?;
                g = next;
                break;
            }
        }
    }
    Ok(g)
}

/// The primitive tower itself, up to height `k`, seen as a general tower:
/// `gamma'_i` is `gamma_i` on the multivariate basis. Images are not computed.
pub fn primitive_general_tower(t: &TowerDescriptor, k: usize) -> Result<GeneralTower> {
    let mt = MultivariateTower::primitive_to(t, k)?;
    GeneralTower::new(t, (0..k).map(|i| to_general(mt.gamma(i))).collect())
}
