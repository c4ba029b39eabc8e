//! JSON form of a tower: `{p, d, k, levels: [{q, kind, tables?}]}` with
//! coefficient arrays constant term first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::compose::compose;
use super::descriptor::{from_chain, GeneratorKind, TowerDescriptor};
use super::star::star_product;
use crate::basefield::{power_sums, PrimeModulus, PrimePoly};
use crate::error::{Error, Result};
use crate::frobtrace::BetaTables;
use crate::oracle;
use crate::towerops::TowerElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerFile {
    pub p: u64,
    pub d: usize,
    pub k: usize,
    pub levels: Vec<LevelFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFile {
    pub q: Vec<u64>,
    pub kind: GeneratorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<LevelTables>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTables {
    pub trace: Vec<u64>,
    pub dqinv: Vec<u64>,
    #[serde(default)]
    pub beta_little: Vec<(usize, Vec<u64>)>,
    #[serde(default)]
    pub beta_big: Vec<Vec<u64>>,
}

impl TowerFile {
    /// The file form of `t`, with every table (missing pseudotrace tables are
    /// computed first).
    pub fn from_tower(t: &TowerDescriptor) -> Result<Self> {
        let levels = (0..=t.height())
            .map(|i| {
                let l = &t.levels[i];
                let b = t.betas(i)?;
                let tables = LevelTables {
                    trace: l.trace[..t.degree(i)].to_vec(),
                    dqinv: l.dqinv.padded(t.degree(i)),
                    beta_little: b.little.iter().map(|(&n, e)| (n, e.coeffs().to_vec())).collect(),
                    beta_big: b.big.iter().map(|e| e.coeffs().to_vec()).collect(),
                };
                Ok(LevelFile { q: l.q.poly().coeffs().to_vec(), kind: l.kind, tables: Some(tables) })
            })
            .collect::<Result<_>>()?;
        Ok(TowerFile { p: t.p(), d: t.d(), k: t.height(), levels })
    }

    /// The file form of `t` with the minimal polynomials only.
    pub fn without_tables(t: &TowerDescriptor) -> Self {
        let levels = (0..=t.height())
            .map(|i| LevelFile { q: t.levels[i].q.poly().coeffs().to_vec(), kind: t.levels[i].kind, tables: None })
            .collect();
        TowerFile { p: t.p(), d: t.d(), k: t.height(), levels }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("tower file: {e}")))
    }

    fn field(&self) -> Result<PrimeModulus> {
        PrimeModulus::new(self.p)
    }

    fn chain(&self) -> Result<Vec<PrimePoly>> {
        let f = self.field()?;
        self.levels
            .iter()
            .map(|l| {
                if l.q.iter().any(|&c| c >= self.p) {
                    return Err(Error::Invalid(format!("coefficient not reduced modulo {}", self.p)));
                }
                Ok(PrimePoly::new(f, l.q.clone()))
            })
            .collect()
    }

    /// Checks that the file describes the tower the construction would
    /// produce: shape, `Q_0` irreducible with nonzero trace, each `Q_{i+1}`
    /// obtained from `Q_i`, and stored tables matching recomputed ones.
    pub fn check_consistency(&self) -> Result<()> {
        let f = self.field()?;
        if self.levels.len() != self.k + 1 {
            return Err(Error::Invalid(format!("expected {} levels, found {}", self.k + 1, self.levels.len())));
        }
        let chain = self.chain()?;
        for (i, (l, q)) in self.levels.iter().zip(&chain).enumerate() {
            let want = self.d * (self.p as usize).pow(i as u32);
            if q.degree() != Some(want) || !q.is_monic() {
                return Err(Error::Invalid(format!("tower consistency: Q_{i} is not monic of degree {want}")));
            }
            if l.kind != GeneratorKind::schedule(self.p, self.d, i) {
                return Err(Error::Invalid(format!("tower consistency: unexpected generator kind at level {i}")));
            }
        }
        if !oracle::irreducible(&chain[0]) {
            return Err(Error::Invalid("tower consistency: Q_0 is reducible".into()));
        }
        if power_sums(&chain[0], 2)?[1] == 0 {
            return Err(Error::Invalid("tower consistency: Tr(x_0) = 0".into()));
        }
        let as_poly = &PrimePoly::monomial(f, 1, self.p as usize) - &PrimePoly::x(f);
        for i in 0..self.k {
            let base = match self.levels[i].kind {
                GeneratorKind::Linear => chain[i].clone(),
                GeneratorKind::Power => star_product(&chain[i])?,
            };
            if compose(&base, &as_poly)? != chain[i + 1] {
                return Err(Error::Invalid(format!("tower consistency: Q_{} does not follow from Q_{i}", i + 1)));
            }
        }
        let mut fresh = None;
        for (i, (l, q)) in self.levels.iter().zip(&chain).enumerate() {
            if let Some(tb) = &l.tables {
                let n = q.degree().unwrap_or(0);
                if tb.trace != power_sums(q, n)? {
                    return Err(Error::Invalid(format!("tower consistency: trace table of level {i}")));
                }
                let dq = PrimePoly::new(f, tb.dqinv.clone());
                if !(&q.derivative() * &dq).rem(q)?.padded(n).iter().enumerate().all(|(a, &c)| c == (a == 0) as u64) {
                    return Err(Error::Invalid(format!("tower consistency: Q_{i}' inverse of level {i}")));
                }
                if !tb.beta_big.is_empty() || !tb.beta_little.is_empty() {
                    if fresh.is_none() {
                        fresh = Some(from_chain(f, chain.iter().map(|q| (q.clone(), None)).collect())?);
                    }
                    let b = fresh.as_ref().expect("just built").betas(i)?;
                    let little: Vec<(usize, Vec<u64>)> =
                        b.little.iter().map(|(&n, e)| (n, e.coeffs().to_vec())).collect();
                    let big: Vec<Vec<u64>> = b.big.iter().map(|e| e.coeffs().to_vec()).collect();
                    if tb.beta_little != little || tb.beta_big != big {
                        return Err(Error::Invalid(format!("tower consistency: pseudotrace tables of level {i}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the descriptor, reusing stored pseudotrace tables.
    pub fn into_tower(self) -> Result<TowerDescriptor> {
        let f = self.field()?;
        if self.levels.len() != self.k + 1 {
            return Err(Error::Invalid(format!("expected {} levels, found {}", self.k + 1, self.levels.len())));
        }
        let chain = self.chain()?;
        if !oracle::irreducible(&chain[0]) {
            return Err(Error::Reducible);
        }
        let mut items = Vec::with_capacity(chain.len());
        for (i, (l, q)) in self.levels.into_iter().zip(chain).enumerate() {
            if l.kind != GeneratorKind::schedule(f.value(), self.d, i) {
                return Err(Error::Invalid(format!("unexpected generator kind at level {i}")));
            }
            let n = q.degree().unwrap_or(0);
            let betas = match l.tables {
                Some(tb) if !tb.beta_big.is_empty() => {
                    let elem = |v: Vec<u64>| -> Result<TowerElement> {
                        if v.len() != n || v.iter().any(|&c| c >= f.value()) {
                            return Err(Error::Invalid(format!("malformed pseudotrace entry at level {i}")));
                        }
                        Ok(TowerElement::from_parts(i, v))
                    };
                    let little = tb
                        .beta_little
                        .into_iter()
                        .map(|(m, v)| Ok((m, elem(v)?)))
                        .collect::<Result<BTreeMap<_, _>>>()?;
                    let big = tb.beta_big.into_iter().map(elem).collect::<Result<Vec<_>>>()?;
                    Some(BetaTables { little, big })
                }
                _ => None,
            };
            items.push((q, betas));
        }
        from_chain(f, items)
    }
}
