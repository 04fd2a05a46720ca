//! Dimension formulas and He's reduction, propagated over a finite table.

use std::collections::HashMap;

use super::Setting;
use crate::iwahori::{AffineElement, KottwitzClass};
use crate::{Error, Result};

/// `½(ℓ(x) + ℓ(η) − def)`, rejecting odd numerators.
pub fn half_formula(len_x: usize, len_eta: usize, defect: usize) -> Result<i64> {
    let total = len_x as i64 + len_eta as i64 - defect as i64;
    if total % 2 != 0 {
        return Err(Error::Internal(format!(
            "ℓ(x) + ℓ(η) − def = {len_x} + {len_eta} − {defect} is odd"
        )));
    }
    Ok(total / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimEntry {
    Empty,
    Dim(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionConflict {
    pub x: AffineElement,
    pub existing: DimEntry,
    pub proposed: DimEntry,
    pub rule: &'static str,
}

/// Known dimensions (or emptiness) of `X_x(b)` for a fixed `b`.
#[derive(Clone, Debug, Default)]
pub struct DimTable {
    pub entries: HashMap<AffineElement, DimEntry>,
    pub conflicts: Vec<DimensionConflict>,
}

impl DimTable {
    pub fn get(&self, x: &AffineElement) -> Option<DimEntry> {
        self.entries.get(x).copied()
    }

    /// Records `value` for `x`; returns whether the table grew. Disagreement
    /// with an existing entry is logged as a conflict and the entry is kept.
    pub fn set(&mut self, x: &AffineElement, value: DimEntry, rule: &'static str) -> bool {
        match self.entries.get(x) {
            None => {
                self.entries.insert(x.clone(), value);
                true
            }
            Some(&existing) if existing == value => false,
            Some(&existing) => {
                let c = DimensionConflict {
                    x: x.clone(),
                    existing,
                    proposed: value,
                    rule,
                };
                if !self.conflicts.contains(&c) {
                    self.conflicts.push(c);
                }
                false
            }
        }
    }

    fn conflict(&mut self, x: &AffineElement, existing: DimEntry, proposed: DimEntry, rule: &'static str) {
        let c = DimensionConflict {
            x: x.clone(),
            existing,
            proposed,
            rule,
        };
        if !self.conflicts.contains(&c) {
            self.conflicts.push(c);
        }
    }
}

impl Setting {
    /// `½(ℓ(x) + ℓ(η_σ(x)) − def(b))` for shrunken `x` with `X_x(b) ≠ ∅`.
    pub fn dim_shrunken(&self, x: &AffineElement, b_kappa: &KottwitzClass) -> Result<i64> {
        let p = self.profile(x)?;
        if !p.shrunken {
            return Err(Error::Undefined("x is not in a shrunken chamber".into()));
        }
        if !self.decide_nonempty(x, b_kappa)?.nonempty {
            return Err(Error::Undefined("X_x(b) is empty".into()));
        }
        let def = self.defect(b_kappa)?.value;
        half_formula(self.group.length(x), p.eta.length(), def)
    }

    /// Rank-2 split formula for `x` in exactly one critical strip:
    /// `½(ℓ(x) + min(ℓ(η), ℓ(σ⁻¹(s)ηs)) − def) − ε` with `ε = 1` iff `η = w₀`.
    pub fn dim_one_strip_rank2(&self, x: &AffineElement, b_kappa: &KottwitzClass) -> Result<i64> {
        let sys = self.group.sys();
        if sys.rank() != 2 || !self.sigma.is_identity() {
            return Err(Error::Undefined("needs a split rank-2 system".into()));
        }
        let p = self.profile(x)?;
        let i = p
            .single_strip_index()
            .ok_or_else(|| Error::Undefined("x does not lie in exactly one critical strip".into()))?;
        if !self.decide_nonempty(x, b_kappa)?.nonempty {
            return Err(Error::Undefined("X_x(b) is empty".into()));
        }
        let s = sys.reflection(i);
        let other = self.twisted_conjugate(&p.eta, &s);
        let def = self.defect(b_kappa)?.value;
        let base = half_formula(self.group.length(x), p.eta.length().min(other.length()), def)?;
        let eps = i64::from(p.eta == sys.longest_element());
        Ok(base - eps)
    }

    /// One application of `dim X_x = max(dim X_{sx}, dim X_{sxσ(s)}) + 1` for
    /// the affine simple reflection with index `s`, in whichever direction the
    /// table allows. Returns whether the table grew.
    pub fn dim_recursion_step(&self, x: &AffineElement, s: usize, table: &mut DimTable) -> Result<bool> {
        let g = &self.group;
        let refl = &g.simple_reflections()[s].1;
        let sx = g.mul(refl, x);
        let sxs = g.mul(&sx, &g.apply_sigma(&self.sigma, refl));
        let lx = g.length(x);
        if g.length(&sxs) + 2 != lx {
            return Err(Error::Precondition(format!(
                "ℓ(sxσ(s)) = {} is not ℓ(x) − 2 = {}",
                g.length(&sxs),
                lx as i64 - 2
            )));
        }
        let (a, c, e) = (table.get(&sx), table.get(&sxs), table.get(x));
        let mut grew = false;
        if let (Some(a), Some(c)) = (a, c) {
            let up = match (a, c) {
                (DimEntry::Empty, DimEntry::Empty) => DimEntry::Empty,
                (DimEntry::Dim(d), DimEntry::Empty) | (DimEntry::Empty, DimEntry::Dim(d)) => DimEntry::Dim(d + 1),
                (DimEntry::Dim(d1), DimEntry::Dim(d2)) => DimEntry::Dim(d1.max(d2) + 1),
            };
            grew |= table.set(x, up, "recursion-up");
        }
        match e {
            Some(DimEntry::Empty) => {
                grew |= table.set(&sx, DimEntry::Empty, "recursion-down-empty");
                grew |= table.set(&sxs, DimEntry::Empty, "recursion-down-empty");
            }
            Some(DimEntry::Dim(d)) => {
                for (branch, other) in [(&sx, c), (&sxs, a)] {
                    let forced = match other {
                        Some(DimEntry::Empty) => true,
                        Some(DimEntry::Dim(k)) => k + 1 < d,
                        None => false,
                    };
                    if forced {
                        grew |= table.set(branch, DimEntry::Dim(d - 1), "recursion-down");
                    }
                }
                for (branch, known) in [(&sx, a), (&sxs, c)] {
                    if let Some(DimEntry::Dim(k)) = known {
                        if k + 1 > d {
                            table.conflict(branch, DimEntry::Dim(k), DimEntry::Dim(d - 1), "recursion-bound");
                        }
                    }
                }
            }
            None => {}
        }
        Ok(grew)
    }

    /// Fills a table over every `x` with `κ(x) = κ(b)` and `ℓ(x) ≤ max_len`.
    ///
    /// Seeds: `Empty` wherever [`Setting::decide_nonempty`] is negative, and
    /// [`Setting::dim_shrunken`] on nonempty shrunken `x`. Propagation uses
    /// He's reduction in both directions, and equality of dimensions when
    /// `ℓ(sxσ(s)) = ℓ(x)`, until nothing changes.
    pub fn dimension_table(&self, b_kappa: &KottwitzClass, max_len: usize, cap: usize) -> Result<DimTable> {
        let g = &self.group;
        let xs: Vec<AffineElement> = g
            .enumerate(max_len, cap)?
            .into_iter()
            .filter(|x| self.kottwitz(x).coinvariant == b_kappa.coinvariant)
            .collect();
        let mut table = DimTable::default();
        for x in &xs {
            let verdict = self.decide_nonempty(x, b_kappa)?;
            if !verdict.nonempty {
                table.set(x, DimEntry::Empty, "criterion");
            } else if self.profile(x)?.shrunken {
                table.set(x, DimEntry::Dim(self.dim_shrunken(x, b_kappa)?), "shrunken-formula");
            }
        }
        let lengths: Vec<usize> = xs.iter().map(|x| g.length(x)).collect();
        let sigma_s: Vec<AffineElement> = g
            .simple_reflections()
            .iter()
            .map(|(_, s)| g.apply_sigma(&self.sigma, s))
            .collect();
        loop {
            let mut grew = false;
            for (x, &lx) in xs.iter().zip(&lengths) {
                for (k, (_, s)) in g.simple_reflections().iter().enumerate() {
                    let sxs = g.mul(&g.mul(s, x), &sigma_s[k]);
                    let l = g.length(&sxs);
                    if l + 2 == lx {
                        grew |= self.dim_recursion_step(x, k, &mut table)?;
                    } else if l == lx && sxs != *x {
                        match (table.get(x), table.get(&sxs)) {
                            (Some(v), None) => grew |= table.set(&sxs, v, "length-preserving"),
                            (None, Some(v)) => grew |= table.set(x, v, "length-preserving"),
                            (Some(v), Some(w)) if v != w => {
                                table.set(&sxs, v, "length-preserving");
                            }
                            _ => {}
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Ok(table)
    }
}
