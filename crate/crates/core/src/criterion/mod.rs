//! Nonemptiness of `X_x(b)` for basic `b`.
//!
//! [`Setting::decide_nonempty`] applies, in order: the Kottwitz obstruction,
//! the non-full affine σ-support shortcut, and the σ-support test over `W_x`.
//! [`Setting::oracle_nonempty`] is the independent `(J,w)_σ`-alcove scan.

mod bgx;
mod dimension;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alcove::{self, AlcoveProfile};
use crate::cartan::RootSystem;
use crate::iwahori::{AffineElement, IwahoriWeyl, KottwitzClass};
use crate::weyl::{DiagramAutomorphism, FiniteWeylElement, DEFAULT_W0_CAP};
use crate::{Error, Result};

pub use bgx::{BgMuEnumeration, BgxConclusion, BgxReport, Defect, SigmaConjClassPoint};
pub use dimension::{half_formula, DimEntry, DimTable, DimensionConflict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    KottwitzMismatch,
    ShortcutFirstlemma,
    SigmaSupportCriterion,
    AlcoveOracle,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::KottwitzMismatch => "kottwitz-mismatch",
            Rule::ShortcutFirstlemma => "shortcut-firstlemma",
            Rule::SigmaSupportCriterion => "sigma-support-criterion",
            Rule::AlcoveOracle => "alcove-oracle",
        }
    }
}

/// One `r ∈ W_x` with `J_{r,x} = supp_σ(σ⁻¹(r)·η_σ(x)·r⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCheck {
    pub r: FiniteWeylElement,
    pub j: BTreeSet<usize>,
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub nonempty: bool,
    pub rule: Rule,
    /// Every `r` examined, in order. Empty unless the σ-support test ran.
    pub checks: Vec<SupportCheck>,
    /// First `r ∈ W_x` whose σ-support is proper.
    pub failing: Option<SupportCheck>,
    /// A `(J, w)` with `x` a `(J,w)_σ`-alcove.
    pub alcove_pair: Option<(BTreeSet<usize>, FiniteWeylElement)>,
}

impl Verdict {
    fn bare(nonempty: bool, rule: Rule) -> Self {
        Verdict {
            nonempty,
            rule,
            checks: Vec::new(),
            failing: None,
            alcove_pair: None,
        }
    }
}

/// A root system with a diagram automorphism and the finite data every
/// decision needs: `W₀` in (length, reduced word) order and the proper
/// σ-stable subsets of `S` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Setting {
    group: IwahoriWeyl,
    sigma: DiagramAutomorphism,
    w0: Vec<FiniteWeylElement>,
    proper_stable: Vec<BTreeSet<usize>>,
    full: BTreeSet<usize>,
}

/// Whether σ permutes the irreducible components in a single orbit.
fn sigma_is_transitive(sys: &RootSystem, sigma: &DiagramAutomorphism) -> bool {
    let comps = sys.components();
    let mut seen = vec![false; comps.len()];
    let mut c = 0;
    while !seen[c] {
        seen[c] = true;
        c = sys.component_of(sigma.apply_index(comps[c].indices().start));
    }
    seen.iter().all(|s| *s)
}

impl Setting {
    pub fn new(group: IwahoriWeyl, sigma: DiagramAutomorphism) -> Result<Self> {
        Self::with_cap(group, sigma, DEFAULT_W0_CAP)
    }

    /// As [`Setting::new`], refusing Weyl groups with more than `w0_cap` elements.
    pub fn with_cap(group: IwahoriWeyl, sigma: DiagramAutomorphism, w0_cap: u128) -> Result<Self> {
        if sigma.rank() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                got: sigma.rank(),
            });
        }
        if !sigma_is_transitive(group.sys(), &sigma) {
            return Err(Error::Precondition(format!(
                "σ does not permute the components of {} transitively, so the group is not simple; \
                 treat each σ-orbit of components separately",
                group.sys().label()
            )));
        }
        let mut w0 = group.sys().enumerate_w0(w0_cap)?;
        w0.sort_by_cached_key(|w| (w.length(), group.sys().reduced_word(w)));
        let r = group.rank();
        if r >= 20 {
            return Err(Error::CapExceeded {
                what: "subsets of simple reflections".into(),
                size: 1u128 << r,
                cap: 1 << 20,
            });
        }
        let mut proper_stable: Vec<BTreeSet<usize>> = (0u32..(1 << r) - 1)
            .map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
            .filter(|j| sigma.is_stable(j))
            .collect();
        proper_stable.sort();
        Ok(Setting {
            full: (0..r).collect(),
            group,
            sigma,
            w0,
            proper_stable,
        })
    }

    pub fn split(group: IwahoriWeyl) -> Result<Self> {
        let r = group.rank();
        Self::new(group, DiagramAutomorphism::identity(r))
    }

    pub fn group(&self) -> &IwahoriWeyl {
        &self.group
    }

    pub fn sigma(&self) -> &DiagramAutomorphism {
        &self.sigma
    }

    pub fn w0(&self) -> &[FiniteWeylElement] {
        &self.w0
    }

    pub fn proper_stable_subsets(&self) -> &[BTreeSet<usize>] {
        &self.proper_stable
    }

    pub fn kottwitz(&self, x: &AffineElement) -> KottwitzClass {
        self.group.kottwitz(x, &self.sigma)
    }

    pub fn profile(&self, x: &AffineElement) -> Result<AlcoveProfile> {
        alcove::profile(&self.group, x, &self.sigma)
    }

    /// `σ⁻¹(r)·η·r⁻¹`.
    pub fn twisted_conjugate(&self, eta: &FiniteWeylElement, r: &FiniteWeylElement) -> FiniteWeylElement {
        let sys = self.group.sys();
        let left = self.sigma.inverse().apply_weyl(r);
        sys.compose(&sys.compose(&left, eta), &r.inverse())
    }

    fn support_check(&self, eta: &FiniteWeylElement, r: &FiniteWeylElement) -> SupportCheck {
        let j = self
            .group
            .sys()
            .sigma_support(&self.twisted_conjugate(eta, r), &self.sigma);
        SupportCheck {
            r: r.clone(),
            full: j == self.full,
            j,
        }
    }

    pub fn decide_nonempty(&self, x: &AffineElement, b_kappa: &KottwitzClass) -> Result<Verdict> {
        if self.kottwitz(x).coinvariant != b_kappa.coinvariant {
            return Ok(Verdict::bare(false, Rule::KottwitzMismatch));
        }
        if !self.group.affine_sigma_support(x, &self.sigma).full {
            return Ok(Verdict::bare(true, Rule::ShortcutFirstlemma));
        }
        let p = self.profile(x)?;
        self.sigma_support_test(&p)
    }

    /// The σ-support test over `W_x` alone, without the two preliminary rules.
    pub fn sigma_support_test(&self, p: &AlcoveProfile) -> Result<Verdict> {
        let mut verdict = Verdict::bare(true, Rule::SigmaSupportCriterion);
        for r in &p.w_x_set {
            let check = self.support_check(&p.eta, r);
            let full = check.full;
            verdict.checks.push(check.clone());
            if !full {
                let w = self.group.sys().compose(&p.v_x, &r.inverse());
                verdict.nonempty = false;
                verdict.alcove_pair = Some((check.j.clone(), w));
                verdict.failing = Some(check);
                break;
            }
        }
        Ok(verdict)
    }

    fn require_stable(&self, j: &BTreeSet<usize>) -> Result<()> {
        if j.iter().any(|&i| i >= self.group.rank()) {
            return Err(Error::Precondition(format!("index set {j:?} out of range")));
        }
        if !self.sigma.is_stable(j) {
            return Err(Error::Precondition(format!("index set {j:?} is not σ-stable")));
        }
        Ok(())
    }

    /// `x` is a `(J,w)_σ`-alcove: the finite part of `w⁻¹·x·σ(w)` lies in
    /// `W_J`, and `k(a, x) ≥ k(a, id)` for every `a ∈ w(Φ⁺∖Φ_J⁺)`.
    pub fn is_jw_alcove(&self, x: &AffineElement, j: &BTreeSet<usize>, w: &FiniteWeylElement) -> Result<bool> {
        self.require_stable(j)?;
        Ok(self.jw_alcove_unchecked(x, j, w))
    }

    fn jw_alcove_unchecked(&self, x: &AffineElement, j: &BTreeSet<usize>, w: &FiniteWeylElement) -> bool {
        let sys = self.group.sys();
        let conj = sys.compose(&sys.compose(&w.inverse(), &x.finite), &self.sigma.apply_weyl(w));
        if !sys.in_parabolic(&conj, j) {
            return false;
        }
        sys.positive_roots()
            .iter()
            .filter(|b| b.0.iter().enumerate().any(|(i, c)| *c != 0 && !j.contains(&i)))
            .all(|b| {
                let a = w.act_on_root(b);
                self.group.k_value_raw(&a, x) >= alcove::k_value_identity(&a)
            })
    }

    /// First `(J, w)` in (J lexicographic, w by length then reduced word)
    /// order with `x` a `(J,w)_σ`-alcove and `J` proper.
    pub fn first_alcove_pair(&self, x: &AffineElement) -> Option<(BTreeSet<usize>, FiniteWeylElement)> {
        self.proper_stable.iter().find_map(|j| {
            self.w0
                .iter()
                .find(|w| self.jw_alcove_unchecked(x, j, w))
                .map(|w| (j.clone(), w.clone()))
        })
    }

    /// The `(J,w)_σ`-alcove criterion. Only asserted when the Kottwitz classes
    /// match and the affine σ-support of `x` is full.
    pub fn oracle_nonempty(&self, x: &AffineElement, b_kappa: &KottwitzClass) -> Result<Verdict> {
        if self.kottwitz(x).coinvariant != b_kappa.coinvariant {
            return Err(Error::Precondition("Kottwitz classes of x and b differ".into()));
        }
        if !self.group.affine_sigma_support(x, &self.sigma).full {
            return Err(Error::Precondition("affine σ-support of x is not full".into()));
        }
        let pair = self.first_alcove_pair(x);
        Ok(Verdict {
            nonempty: pair.is_none(),
            rule: Rule::AlcoveOracle,
            checks: Vec::new(),
            failing: None,
            alcove_pair: pair,
        })
    }

    /// `J_{r,x}`. Also checks that `x` is a `(J_{r,x}, v_x r⁻¹)_σ`-alcove.
    pub fn j_rx(&self, x: &AffineElement, r: &FiniteWeylElement) -> Result<BTreeSet<usize>> {
        let p = self.profile(x)?;
        if !p.w_x_set.contains(r) {
            return Err(Error::Precondition(format!(
                "{:?} is not in W_x",
                self.group.sys().reduced_word(r)
            )));
        }
        let check = self.support_check(&p.eta, r);
        let w = self.group.sys().compose(&p.v_x, &r.inverse());
        if !self.jw_alcove_unchecked(x, &check.j, &w) {
            return Err(Error::Internal(format!(
                "x is not a (J,w)-alcove for J = {:?}, w = {:?}",
                check.j,
                self.group.sys().reduced_word(&w)
            )));
        }
        Ok(check.j)
    }

    /// Type A only: `μ_x ∈ Q∨` with `⟨ϖ_1, μ_x⟩ > 1` and `⟨ϖ_n, μ_x⟩ > 1`.
    pub fn anresult_filter(&self, x: &AffineElement) -> Result<bool> {
        let sys = self.group.sys();
        let comps = sys.components();
        if comps.len() != 1 || comps[0].cartan_type != crate::cartan::CartanType::A {
            return Err(Error::Precondition(format!("{} is not of type A", sys.label())));
        }
        let d = alcove::dominant_decompose(&self.group, x)?;
        Ok(mu_passes_anresult(sys, &d.mu))
    }
}

fn mu_passes_anresult(sys: &crate::cartan::RootSystem, mu: &[i64]) -> bool {
    let c = sys
        .coroot_coordinates(&crate::cartan::Coweight::from_ints(mu))
        .expect("rank matches");
    let one = crate::Q::from_integer(1);
    c.iter().all(|q| q.is_integer()) && c[0] > one && c[c.len() - 1] > one
}
