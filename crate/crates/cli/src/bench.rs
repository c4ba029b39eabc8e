//! Median-of-N wall clock timings, one CSV row per operation and level.

use std::fmt::Write as _;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use astower::embedding::{lift_up, push_down};
use astower::frobtrace::{iter_frobenius, pseudotrace};
use astower::isomorphism::{apply_inverse, apply_isomorphism, random_general_tower, GeneralTower};
use astower::towerbuild::TowerDescriptor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    PushDown,
    LiftUp,
    ElemMul,
    ElemInv,
    IterFrobenius,
    Pseudotrace,
    IsoApply,
    IsoInverse,
}

impl Op {
    pub const ALL: [Op; 8] = [
        Op::PushDown,
        Op::LiftUp,
        Op::ElemMul,
        Op::ElemInv,
        Op::IterFrobenius,
        Op::Pseudotrace,
        Op::IsoApply,
        Op::IsoInverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::PushDown => "push_down",
            Op::LiftUp => "lift_up",
            Op::ElemMul => "elem_mul",
            Op::ElemInv => "elem_inv",
            Op::IterFrobenius => "iter_frobenius",
            Op::Pseudotrace => "pseudotrace",
            Op::IsoApply => "iso_apply",
            Op::IsoInverse => "iso_inverse",
        }
    }

    fn needs_iso(self) -> bool {
        matches!(self, Op::IsoApply | Op::IsoInverse)
    }
}

impl FromStr for Op {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s.trim())
            .ok_or_else(|| anyhow!("unknown op {s:?}; expected one of {}", Op::ALL.map(Op::name).join(", ")))
    }
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub op: Op,
    pub level: usize,
    pub size: usize,
    pub ns: u128,
    pub median_of: usize,
}

fn median_ns(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<u128> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed().as_nanos());
    }
    times.sort_unstable();
    Ok(times[reps / 2])
}

pub fn run(t: &TowerDescriptor, levels: (usize, usize), ops: &[Op], reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    if levels.1 > t.height() {
        bail!("level {} exceeds the tower height {}", levels.1, t.height());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let general: Option<GeneralTower> = if ops.iter().any(|op| op.needs_iso()) {
        Some(random_general_tower(t, levels.1, &mut rng)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for level in levels.0..=levels.1 {
        let a = t.random(level, &mut rng);
        let b = t.random(level, &mut rng);
        for &op in ops {
            let ns = match op {
                Op::PushDown | Op::LiftUp if level == 0 => continue,
                Op::PushDown => median_ns(reps, || {
                    black_box(push_down(t, &a)?);
                    Ok(())
                })?,
                Op::LiftUp => {
                    let w = push_down(t, &a)?;
                    median_ns(reps, || {
                        black_box(lift_up(t, &w)?);
                        Ok(())
                    })?
                }
                Op::ElemMul => median_ns(reps, || {
                    black_box(t.mul(&a, &b)?);
                    Ok(())
                })?,
                Op::ElemInv => median_ns(reps, || {
                    black_box(t.inv(&a)?);
                    Ok(())
                })?,
                Op::IterFrobenius => median_ns(reps, || {
                    black_box(iter_frobenius(t, &a, t.d() as u64)?);
                    Ok(())
                })?,
                // the relative trace down to U_{level-1}, as in the solver
                Op::Pseudotrace => median_ns(reps, || {
                    black_box(pseudotrace(t, &a, level.saturating_sub(1))?);
                    Ok(())
                })?,
                Op::IsoApply => {
                    let g = general.as_ref().expect("built above");
                    let v = g.random(level, &mut rng);
                    median_ns(reps, || {
                        black_box(apply_isomorphism(t, g, &v)?);
                        Ok(())
                    })?
                }
                Op::IsoInverse => {
                    let g = general.as_ref().expect("built above");
                    median_ns(reps, || {
                        black_box(apply_inverse(t, g, &a)?);
                        Ok(())
                    })?
                }
            };
            rows.push(BenchRecord { op, level, size: t.degree(level), ns, median_of: reps });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRecord]) -> String {
    let mut out = String::from("op,level,size,ns,median_of\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.op.name(), r.level, r.size, r.ns, r.median_of).expect("string write");
    }
    out
}
