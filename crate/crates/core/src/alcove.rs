//! Alcove geometry in a single apartment.
//!
//! For a root `a` and `x ∈ W̃` the k-value `k(a, x)` is the integer with the
//! alcove `x·a` between `H_a(k)` and `H_a(k+1)`. The critical strip of `a` is
//! the band containing the base alcove, so `x` lies in it iff
//! `k(a, x) = k(a, id)`.

use std::collections::{HashSet, VecDeque};

use num_traits::Zero;

use crate::cartan::{Root, RootSubset};
use crate::iwahori::{AffineElement, IwahoriWeyl};
use crate::weyl::{DiagramAutomorphism, FiniteWeylElement};
use crate::{Error, Result, Q};

/// `x = v · t^μ · w` with `v⁻¹x` in the dominant chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantDecomposition {
    pub v: FiniteWeylElement,
    pub mu: Vec<i64>,
    pub w: FiniteWeylElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcoveProfile {
    pub x: AffineElement,
    pub v_x: FiniteWeylElement,
    pub mu_x: Vec<i64>,
    pub w_x: FiniteWeylElement,
    pub eta: FiniteWeylElement,
    pub phi_x: Vec<Root>,
    pub w_x_set: Vec<FiniteWeylElement>,
    pub strips: Vec<Root>,
    pub shrunken: bool,
}

/// `k(a, id)`: 0 for positive roots, −1 for negative ones.
pub fn k_value_identity(a: &Root) -> i64 {
    if a.is_positive() {
        0
    } else {
        -1
    }
}

/// `k(a, t^λ w) = ⟨a, λ⟩ + δ(w⁻¹a)` with `δ = 0` on positive roots and −1
/// on negative ones.
pub fn k_value(g: &IwahoriWeyl, a: &Root, x: &AffineElement) -> Result<i64> {
    if !g.sys().is_root(a) {
        return Err(Error::NotARoot(a.0.clone()));
    }
    Ok(g.k_value_raw(a, x))
}

/// `⌊⟨a, p⟩⌋` at the barycenter `p` of `x·a`. Independent of the closed form.
pub fn k_value_barycentric(g: &IwahoriWeyl, a: &Root, x: &AffineElement) -> Result<i64> {
    let p = g.barycenter(x);
    let pairing = g.sys().pair(a, &p)?;
    Ok(pairing.floor().to_integer())
}

/// Positive roots whose critical strip contains `x`.
pub fn critical_strips_containing(g: &IwahoriWeyl, x: &AffineElement) -> Vec<Root> {
    g.sys()
        .positive_roots()
        .iter()
        .filter(|b| g.k_value_raw(b, x) == 0)
        .cloned()
        .collect()
}

pub fn is_shrunken(g: &IwahoriWeyl, x: &AffineElement) -> bool {
    critical_strips_containing(g, x).is_empty()
}

/// Descends the barycenter of `x·a` into the dominant chamber.
pub fn dominant_decompose(g: &IwahoriWeyl, x: &AffineElement) -> Result<DominantDecomposition> {
    let sys = g.sys();
    let mut p = g.barycenter(x);
    let mut v = sys.identity();
    while let Some(i) = p.0.iter().position(|c| *c < Q::zero()) {
        p = sys.reflect_coweight(i, &p);
        v = sys.compose(&v, &sys.reflection(i));
    }
    if !p.is_strictly_dominant() {
        return Err(Error::Internal(format!("alcove barycenter {:?} lies on a wall", p.0)));
    }
    let vi = v.inverse();
    let mu = vi.act_on_int(&x.translation);
    if mu.iter().any(|c| *c < 0) {
        return Err(Error::Internal(format!("translation part {mu:?} is not dominant")));
    }
    let w = sys.compose(&vi, &x.finite);
    Ok(DominantDecomposition { v, mu, w })
}

/// `η_σ(x) = σ⁻¹(w_x)·v_x`.
pub fn eta_sigma(g: &IwahoriWeyl, x: &AffineElement, sigma: &DiagramAutomorphism) -> Result<FiniteWeylElement> {
    let d = dominant_decompose(g, x)?;
    Ok(eta_from(g, &d, sigma))
}

fn eta_from(g: &IwahoriWeyl, d: &DominantDecomposition, sigma: &DiagramAutomorphism) -> FiniteWeylElement {
    g.sys().compose(&sigma.inverse().apply_weyl(&d.w), &d.v)
}

fn phi_from(g: &IwahoriWeyl, x: &AffineElement, v: &FiniteWeylElement) -> Vec<Root> {
    g.sys()
        .positive_roots()
        .iter()
        .filter(|a| {
            let va = v.act_on_root(a);
            g.k_value_raw(&va, x) == k_value_identity(&va)
        })
        .cloned()
        .collect()
}

/// `Φ_x = {α ∈ Φ⁺ : x ∈ C_{v_x α}}`.
pub fn phi_x_set(g: &IwahoriWeyl, x: &AffineElement) -> Result<Vec<Root>> {
    let d = dominant_decompose(g, x)?;
    Ok(phi_from(g, x, &d.v))
}

fn complement(g: &IwahoriWeyl, phi: &[Root]) -> Vec<Root> {
    let phi: HashSet<&Root> = phi.iter().collect();
    g.sys()
        .positive_roots()
        .iter()
        .filter(|a| !phi.contains(a))
        .cloned()
        .collect()
}

fn keeps_positive(r: &FiniteWeylElement, roots: &[Root]) -> bool {
    roots.iter().all(|b| r.act_on_root(b).is_positive())
}

fn sort_by_word(g: &IwahoriWeyl, set: &mut [FiniteWeylElement]) {
    set.sort_by_cached_key(|w| (w.length(), g.sys().reduced_word(w)));
}

fn w_x_from(g: &IwahoriWeyl, phi: &[Root]) -> Vec<FiniteWeylElement> {
    let sys = g.sys();
    let rest = complement(g, phi);
    let id = sys.identity();
    let mut seen: HashSet<FiniteWeylElement> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(r) = queue.pop_front() {
        for i in 0..sys.rank() {
            if r.has_left_descent(i) {
                continue;
            }
            let sr = sys.compose(&sys.reflection(i), &r);
            if !seen.contains(&sr) && keeps_positive(&sr, &rest) {
                seen.insert(sr.clone());
                out.push(sr.clone());
                queue.push_back(sr);
            }
        }
    }
    sort_by_word(g, &mut out);
    out
}

/// `W_x = {r ∈ W₀ : r(Φ⁺∖Φ_x) ⊆ Φ⁺}`, by upward search from the identity.
/// Sorted by length, then reduced word.
pub fn w_x_set(g: &IwahoriWeyl, x: &AffineElement) -> Result<Vec<FiniteWeylElement>> {
    Ok(w_x_from(g, &phi_x_set(g, x)?))
}

/// `W_x` by filtering a full list of `W₀`.
pub fn w_x_set_brute(g: &IwahoriWeyl, x: &AffineElement, w0: &[FiniteWeylElement]) -> Result<Vec<FiniteWeylElement>> {
    let rest = complement(g, &phi_x_set(g, x)?);
    let mut out: Vec<_> = w0.iter().filter(|r| keeps_positive(r, &rest)).cloned().collect();
    sort_by_word(g, &mut out);
    Ok(out)
}

pub fn profile(g: &IwahoriWeyl, x: &AffineElement, sigma: &DiagramAutomorphism) -> Result<AlcoveProfile> {
    let d = dominant_decompose(g, x)?;
    let eta = eta_from(g, &d, sigma);
    let phi_x = phi_from(g, x, &d.v);
    let w_x_set = w_x_from(g, &phi_x);
    let strips = critical_strips_containing(g, x);
    Ok(AlcoveProfile {
        x: x.clone(),
        v_x: d.v,
        mu_x: d.mu,
        w_x: d.w,
        eta,
        shrunken: phi_x.is_empty(),
        phi_x,
        w_x_set,
        strips,
    })
}

impl AlcoveProfile {
    pub fn phi_subset(&self) -> RootSubset {
        RootSubset::new(self.phi_x.iter().cloned())
    }

    /// For a one-strip element, the simple index `i` with `Φ_x = {α_i}`.
    pub fn single_strip_index(&self) -> Option<usize> {
        match self.phi_x.as_slice() {
            [a] if a.height() == 1 => a.0.iter().position(|c| *c == 1),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> IwahoriWeyl {
        IwahoriWeyl::new(s.parse().unwrap())
    }

    #[test]
    fn k_value_examples() {
        let g = group("A2");
        let id = g.identity();
        for a in g.sys().positive_roots() {
            assert_eq!(k_value(&g, a, &id).unwrap(), 0);
            assert_eq!(k_value(&g, &a.neg(), &id).unwrap(), -1);
        }
        let alpha1 = g.sys().simple_root(0);
        let t = g.translation(&g.sys().coroot_as_coweight(&alpha1));
        assert_eq!(k_value(&g, &alpha1, &t).unwrap(), 2);
        assert_eq!(k_value_barycentric(&g, &alpha1, &t).unwrap(), 2);
        assert!(matches!(k_value(&g, &Root(vec![2, 0]), &id), Err(Error::NotARoot(_))));
    }

    #[test]
    fn decomposition_examples() {
        let g = group("A2");
        let t = g.translation(&[2, 1]);
        let d = dominant_decompose(&g, &t).unwrap();
        assert!(d.v.is_identity() && d.w.is_identity());
        assert_eq!(d.mu, vec![2, 1]);

        let s1 = g.from_finite(&g.sys().reflection(0));
        let d = dominant_decompose(&g, &s1).unwrap();
        assert_eq!(d.v, g.sys().reflection(0));
        assert_eq!(d.mu, vec![0, 0]);
        assert!(d.w.is_identity());
        assert_eq!(
            eta_sigma(&g, &s1, &DiagramAutomorphism::identity(2)).unwrap(),
            g.sys().reflection(0)
        );

        let a1 = group("A1");
        let omega = a1.omega_elements()[1].clone();
        let d = dominant_decompose(&a1, &omega).unwrap();
        assert!(d.v.is_identity());
        assert_eq!(d.mu, vec![1]);
        assert_eq!(d.w, a1.sys().reflection(0));
        assert_eq!(
            eta_sigma(&a1, &omega, &DiagramAutomorphism::identity(1)).unwrap(),
            a1.sys().reflection(0)
        );
    }

    #[test]
    fn eta_of_dominant_translation_is_trivial() {
        let g = group("A3");
        let flip = DiagramAutomorphism::parse(g.sys(), "(1 3)").unwrap();
        let t = g.translation(&[1, 0, 2]);
        assert!(eta_sigma(&g, &t, &flip).unwrap().is_identity());
    }

    #[test]
    fn identity_profile() {
        let g = group("B2");
        let p = profile(&g, &g.identity(), &DiagramAutomorphism::identity(2)).unwrap();
        assert_eq!(p.phi_x.len(), 4);
        assert_eq!(p.strips.len(), 4);
        assert_eq!(p.w_x_set.len(), 8);
        assert!(!p.shrunken);
    }

    #[test]
    fn deep_translation_is_shrunken() {
        let g = group("A2");
        let t = g.translation(&[2, 2]);
        let p = profile(&g, &t, &DiagramAutomorphism::identity(2)).unwrap();
        assert!(p.shrunken && p.strips.is_empty() && p.phi_x.is_empty());
        assert_eq!(p.w_x_set, vec![g.sys().identity()]);
    }

    #[test]
    fn base_alcove_meets_every_strip_in_a2() {
        let g = group("A2");
        assert_eq!(critical_strips_containing(&g, &g.identity()).len(), 3);
        assert!(!is_shrunken(&g, &g.identity()));
    }

    #[test]
    fn one_strip_example() {
        // t^{(2,0)} in A2: ⟨α2, μ⟩ = 0 so exactly the α2-strip survives.
        let g = group("A2");
        let t = g.translation(&[2, 0]);
        let p = profile(&g, &t, &DiagramAutomorphism::identity(2)).unwrap();
        assert_eq!(p.strips, vec![g.sys().simple_root(1)]);
        assert_eq!(p.phi_x, vec![g.sys().simple_root(1)]);
        assert_eq!(p.single_strip_index(), Some(1));
        assert_eq!(p.w_x_set, vec![g.sys().identity(), g.sys().reflection(1)]);
    }

    #[test]
    fn barycenter_is_strictly_inside() {
        let g = group("G2");
        let p = g.base_barycenter();
        for a in g.sys().positive_roots() {
            let v = g.sys().pair(a, p).unwrap();
            assert!(v > Q::zero() && v < Q::from_integer(1));
        }
    }
}
