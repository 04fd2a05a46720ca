//! `B(G)_x` for `x = v·t^μ`, the set `B(G,μ)`, and defects of basic classes.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Setting, SupportCheck};
use crate::alcove;
use crate::cartan::{Coweight, RootSystem};
use crate::iwahori::{AffineElement, KottwitzClass};
use crate::linalg;
use crate::weyl::FiniteWeylElement;
use crate::{Error, Result, Q};

/// A σ-conjugacy class, recorded by its dominant Newton point and its
/// σ-coinvariant Kottwitz class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaConjClassPoint {
    pub newton: Coweight,
    pub kappa: Vec<Q>,
}

impl SigmaConjClassPoint {
    /// `self ≤ other`: equal κ and `other.newton − self.newton` a
    /// nonnegative rational combination of simple coroots.
    pub fn le(&self, other: &Self, sys: &RootSystem) -> bool {
        self.kappa == other.kappa && dominates(sys, &other.newton, &self.newton)
    }
}

fn dominates(sys: &RootSystem, big: &Coweight, small: &Coweight) -> bool {
    sys.coroot_coordinates(&big.sub(small))
        .expect("rank matches")
        .iter()
        .all(|c| *c >= Q::zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BgMuEnumeration {
    pub points: Vec<SigmaConjClassPoint>,
    pub length_bound: usize,
    /// Whether doubling the length bound left the point set unchanged; `None`
    /// when not audited.
    pub stable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BgxConclusion {
    /// `μ` central: `B(G)_x = {[t^μ]}`.
    Central(SigmaConjClassPoint),
    /// The σ-support test held for every `r ∈ W_x`, so `B(G)_x = B(G,μ)`.
    EqualsBgMu(BgMuEnumeration),
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BgxReport {
    pub x: AffineElement,
    /// `{r ∈ W₀(μ) : ℓ(v r⁻¹) = ℓ(v) + ℓ(r)}`.
    pub formula_set: Vec<FiniteWeylElement>,
    /// `W_x` from the alcove profile.
    pub alcove_set: Vec<FiniteWeylElement>,
    pub agrees: bool,
    pub checks: Vec<SupportCheck>,
    pub conclusion: BgxConclusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub value: usize,
    /// Set for nontrivial σ, where the fixed-space formula is unverified.
    pub heuristic: bool,
}

impl Setting {
    fn require_dominant(&self, mu: &[i64]) -> Result<()> {
        if mu.len() != self.group.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.group.rank(),
                got: mu.len(),
            });
        }
        if mu.iter().any(|c| *c < 0) {
            return Err(Error::Precondition(format!("{mu:?} is not dominant")));
        }
        Ok(())
    }

    /// `W₀(μ)` elements with `ℓ(v r⁻¹) = ℓ(v) + ℓ(r)`, in (length, word) order.
    pub fn bgx_formula_set(&self, v: &FiniteWeylElement, mu: &[i64]) -> Vec<FiniteWeylElement> {
        let sys = self.group.sys();
        self.w0
            .iter()
            .filter(|r| r.act_on_int(mu) == mu)
            .filter(|r| sys.compose(v, &r.inverse()).length() == v.length() + r.length())
            .cloned()
            .collect()
    }

    pub fn point_of(&self, y: &AffineElement) -> SigmaConjClassPoint {
        SigmaConjClassPoint {
            newton: self.group.newton(y, &self.sigma).dominant,
            kappa: self.kottwitz(y).coinvariant,
        }
    }

    pub fn bgx_cordial(&self, v: &FiniteWeylElement, mu: &[i64], cap: usize) -> Result<BgxReport> {
        self.require_dominant(mu)?;
        let x = self.group.v_t_mu(v, mu);
        let formula_set = self.bgx_formula_set(v, mu);
        let p = self.profile(&x)?;
        let alcove_set = p.w_x_set.clone();
        let agrees = formula_set == alcove_set;
        let checks: Vec<SupportCheck> = formula_set.iter().map(|r| self.support_check(&p.eta, r)).collect();
        let conclusion = if mu.iter().all(|c| *c == 0) {
            BgxConclusion::Central(self.point_of(&self.group.translation(mu)))
        } else if checks.iter().all(|c| c.full) {
            BgxConclusion::EqualsBgMu(self.enumerate_b_g_mu(mu, cap, false)?)
        } else {
            BgxConclusion::Undetermined
        };
        Ok(BgxReport {
            x,
            formula_set,
            alcove_set,
            agrees,
            checks,
            conclusion,
        })
    }

    /// Average of `μ` over its σ-orbit.
    pub fn sigma_average(&self, mu: &[i64]) -> Coweight {
        let ord = self.sigma.order();
        let mut acc = Coweight::zero(mu.len());
        let mut cur = mu.to_vec();
        for _ in 0..ord {
            acc = acc.add(&Coweight::from_ints(&cur));
            cur = self.sigma.apply_int(&cur);
        }
        acc.scale(Q::new(1, ord as i64))
    }

    fn collect_b_g_mu(&self, mu: &[i64], bound: usize, cap: usize) -> Result<BTreeSet<SigmaConjClassPoint>> {
        let target = self.kottwitz(&self.group.translation(mu)).coinvariant;
        let top = self.sigma_average(mu);
        let sys = self.group.sys();
        let mut out = BTreeSet::new();
        for y in self.group.enumerate(bound, cap)? {
            if self.kottwitz(&y).coinvariant != target {
                continue;
            }
            let point = self.point_of(&y);
            if dominates(sys, &top, &point.newton) {
                out.insert(point);
            }
        }
        Ok(out)
    }

    /// `B(G,μ)` from Newton points of all `y` with `ℓ(y) ≤ ℓ(t^μ) + |Φ⁺|`.
    /// With `audit`, the scan is repeated at twice the bound.
    pub fn enumerate_b_g_mu(&self, mu: &[i64], cap: usize, audit: bool) -> Result<BgMuEnumeration> {
        self.require_dominant(mu)?;
        let bound = self.group.length(&self.group.translation(mu)) + self.group.sys().num_positive_roots();
        let points = self.collect_b_g_mu(mu, bound, cap)?;
        let stable = if audit {
            Some(self.collect_b_g_mu(mu, 2 * bound, cap)? == points)
        } else {
            None
        };
        Ok(BgMuEnumeration {
            points: points.into_iter().collect(),
            length_bound: bound,
            stable,
        })
    }

    /// `dim V^σ − dim V^{p(ω)σ}` for the length-zero `ω` representing `κ`.
    pub fn defect(&self, b_kappa: &KottwitzClass) -> Result<Defect> {
        let omega = self
            .group
            .omega_elements()
            .into_iter()
            .find(|o| self.kottwitz(o).coinvariant == b_kappa.coinvariant)
            .ok_or_else(|| Error::Precondition(format!("no basic class with κ = {:?}", b_kappa.coinvariant)))?;
        let r = self.group.rank();
        let fixed_dim = |f: &dyn Fn(&Coweight) -> Coweight| {
            let cols: Vec<Coweight> = (0..r).map(|j| f(&Coweight::fundamental(r, j))).collect();
            let m: Vec<Vec<Q>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| cols[j].0[i] - if i == j { Q::one() } else { Q::zero() })
                        .collect()
                })
                .collect();
            r - linalg::rank(&m)
        };
        let sigma_fixed = fixed_dim(&|p| self.sigma.apply_coweight(p));
        let twisted_fixed = fixed_dim(&|p| omega.finite.act_on_coweight(&self.sigma.apply_coweight(p)));
        Ok(Defect {
            value: sigma_fixed - twisted_fixed,
            heuristic: !self.sigma.is_identity(),
        })
    }

    /// Support check of `σ⁻¹(r)·η_σ(x)·r⁻¹` for every `r` in `rs`.
    pub fn support_checks(&self, x: &AffineElement, rs: &[FiniteWeylElement]) -> Result<Vec<SupportCheck>> {
        let eta = alcove::eta_sigma(&self.group, x, &self.sigma)?;
        Ok(rs.iter().map(|r| self.support_check(&eta, r)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwahori::{trivial_class, IwahoriWeyl};
    use crate::weyl::DiagramAutomorphism;

    fn setting(s: &str) -> Setting {
        Setting::split(IwahoriWeyl::new(s.parse().unwrap())).unwrap()
    }

    #[test]
    fn regular_mu_with_identity() {
        let st = setting("A2");
        let id = st.group().sys().identity();
        let rep = st.bgx_cordial(&id, &[1, 1], 100_000).unwrap();
        assert_eq!(rep.formula_set, vec![id.clone()]);
        assert!(rep.agrees);
    }

    #[test]
    fn longest_element_times_fundamental() {
        let st = setting("A2");
        let w0 = st.group().sys().longest_element();
        let rep = st.bgx_cordial(&w0, &[1, 0], 100_000).unwrap();
        assert!(rep.agrees);
        assert_eq!(rep.formula_set, rep.alcove_set);
    }

    #[test]
    fn central_mu_collapses() {
        let st = setting("B2");
        let v = st.group().sys().reflection(1);
        let rep = st.bgx_cordial(&v, &[0, 0], 100_000).unwrap();
        match rep.conclusion {
            BgxConclusion::Central(p) => {
                assert!(p.newton.is_zero());
                assert!(p.kappa.iter().all(Zero::is_zero));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(st.bgx_cordial(&v, &[-1, 1], 100).is_err());
    }

    #[test]
    fn b_g_mu_examples() {
        let st = setting("A1");
        let zero = st.enumerate_b_g_mu(&[0], 100_000, true).unwrap();
        assert_eq!(zero.points.len(), 1);
        assert!(zero.points[0].newton.is_zero());
        assert_eq!(zero.stable, Some(true));

        let e = st.enumerate_b_g_mu(&[2], 100_000, true).unwrap();
        let newtons: Vec<_> = e.points.iter().map(|p| p.newton.clone()).collect();
        assert_eq!(newtons, vec![Coweight::from_ints(&[0]), Coweight::from_ints(&[2])]);
        assert!(e.points[0].le(&e.points[1], st.group().sys()));
        assert!(!e.points[1].le(&e.points[0], st.group().sys()));
        assert_eq!(e.stable, Some(true));
    }

    #[test]
    fn b_g_mu_points_are_dominated() {
        let st = setting("A2");
        let mu = [2, 1];
        let e = st.enumerate_b_g_mu(&mu, 1_000_000, false).unwrap();
        let top = st.sigma_average(&mu);
        for p in &e.points {
            assert!(dominates(st.group().sys(), &top, &p.newton));
            assert!(p.newton.is_dominant());
        }
        assert!(e.points.iter().any(|p| p.newton == Coweight::from_ints(&mu)));
    }

    #[test]
    fn defect_examples() {
        let st = setting("A2");
        assert_eq!(
            st.defect(&trivial_class(2)).unwrap(),
            Defect {
                value: 0,
                heuristic: false
            }
        );
        let k1 = st.kottwitz(&st.group().translation(&[1, 0]));
        assert_eq!(st.defect(&k1).unwrap().value, 2);

        let g = IwahoriWeyl::new("A3".parse().unwrap());
        let flip = DiagramAutomorphism::parse(g.sys(), "(1 3)").unwrap();
        let tw = Setting::new(g, flip).unwrap();
        assert!(tw.defect(&trivial_class(3)).unwrap().heuristic);
    }
}
