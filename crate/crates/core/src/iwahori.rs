//! The Iwahori-Weyl group `W̃ = P∨ ⋊ W₀` of an adjoint group.
//!
//! `x = t^λ·w` acts on the apartment by `p ↦ λ + w·p`. The base alcove is
//! `{p : 0 < ⟨α, p⟩ < 1 for α ∈ Φ⁺}` and its stabiliser `Ω ≅ P∨/Q∨` gives the
//! splitting `W̃ = W_a ⋊ Ω`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cartan::{Coweight, Root, RootSystem};
use crate::weyl::{DiagramAutomorphism, FiniteWeylElement};
use crate::{Error, Result, Q};

/// `t^translation · finite`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    pub translation: Vec<i64>,
    pub finite: FiniteWeylElement,
}

impl AffineElement {
    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }

    pub fn translation_coweight(&self) -> Coweight {
        Coweight::from_ints(&self.translation)
    }
}

/// Image of an element under `W̃ → P∨/Q∨`, with its σ-coinvariant class.
///
/// Classes are recorded as the fractional parts of the simple-coroot
/// coordinates of a translation representative. The coinvariant is the
/// lexicographically smallest representative of the coset modulo
/// `(1 − σ)(P∨/Q∨)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KottwitzClass {
    pub class: Vec<Q>,
    pub coinvariant: Vec<Q>,
}

impl KottwitzClass {
    pub fn is_trivial(&self) -> bool {
        self.coinvariant.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPoint {
    pub vector: Coweight,
    pub dominant: Coweight,
    /// The `N` used: `x·σ(x)⋯σ^{N−1}(x)` is a translation.
    pub period: usize,
}

impl NewtonPoint {
    pub fn is_central(&self) -> bool {
        self.dominant.is_zero()
    }
}

/// An affine simple reflection: a finite `s_i` or the `s_0` of a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AffineSimple {
    Finite(usize),
    Zero(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSupport {
    pub members: BTreeSet<AffineSimple>,
    pub full: bool,
}

/// See [`IwahoriWeyl::large_length_bound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeLengthBound {
    /// Every `x` with `ℓ(x) ≥ length` is covered.
    pub length: usize,
    /// Smallest `Σ c_j` that beats `|Φ⁺|`.
    pub coefficient_sum: i64,
    /// Smallest σ-averaged coroot coordinate of a fundamental coweight.
    pub min_coefficient: Q,
    /// Largest simple-root coordinate of `2ρ`.
    pub max_two_rho: i64,
}

fn frac(v: Q) -> Q {
    v - v.floor()
}

/// The extended affine Weyl group attached to a root system.
#[derive(Clone, Debug)]
pub struct IwahoriWeyl {
    sys: RootSystem,
    simple: Vec<(AffineSimple, AffineElement)>,
    omega: HashMap<Vec<Q>, AffineElement>,
    classes: Vec<Vec<Q>>,
    barycenter: Coweight,
}

impl IwahoriWeyl {
    pub fn new(sys: RootSystem) -> Self {
        let r = sys.rank();
        let mut g = IwahoriWeyl {
            sys,
            simple: Vec::new(),
            omega: HashMap::new(),
            classes: Vec::new(),
            barycenter: Coweight::zero(r),
        };
        let sys = &g.sys;
        let mut simple: Vec<_> = (0..r)
            .map(|i| {
                (
                    AffineSimple::Finite(i),
                    AffineElement {
                        translation: vec![0; r],
                        finite: sys.reflection(i),
                    },
                )
            })
            .collect();
        for (k, theta) in sys.highest_roots().iter().enumerate() {
            simple.push((
                AffineSimple::Zero(k),
                AffineElement {
                    translation: sys.coroot_as_coweight(theta),
                    finite: sys.root_reflection(theta),
                },
            ));
        }

        let mut bary = vec![Q::zero(); r];
        for (comp, theta) in sys.components().iter().zip(sys.highest_roots()) {
            for i in comp.indices() {
                bary[i] = Q::new(1, (comp.rank as i64 + 1) * theta.0[i] as i64);
            }
        }

        // Ω as products of per-component elements t^{ϖ_j∨}·w_{0,S∖j}·w_0
        // over minuscule j (or the identity).
        let mut omegas = vec![AffineElement {
            translation: vec![0; r],
            finite: sys.identity(),
        }];
        for (comp, theta) in sys.components().iter().zip(sys.highest_roots()) {
            let all: BTreeSet<usize> = comp.indices().collect();
            let w0 = sys.longest_in(&all);
            let mut factors = vec![None];
            for j in comp.indices().filter(|&j| theta.0[j] == 1) {
                let mut rest = all.clone();
                rest.remove(&j);
                let mut lambda = vec![0; r];
                lambda[j] = 1;
                factors.push(Some(AffineElement {
                    translation: lambda,
                    finite: sys.compose(&sys.longest_in(&rest), &w0),
                }));
            }
            omegas = omegas
                .iter()
                .flat_map(|o| {
                    factors.iter().map(move |f| match f {
                        None => o.clone(),
                        Some(f) => Self::mul_in(sys, o, f),
                    })
                })
                .collect();
        }
        let mut omega = HashMap::new();
        for o in omegas {
            let class = Self::class_in(sys, &o.translation);
            omega.insert(class, o);
        }
        let mut classes: Vec<Vec<Q>> = omega.keys().cloned().collect();
        classes.sort();

        g.simple = simple;
        g.omega = omega;
        g.classes = classes;
        g.barycenter = Coweight(bary);
        debug_assert!(g.omega.values().all(|o| g.length(o) == 0));
        g
    }

    pub fn sys(&self) -> &RootSystem {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    /// The affine simple reflections `S̃`: finite ones first, then one `s_0`
    /// per component.
    pub fn simple_reflections(&self) -> &[(AffineSimple, AffineElement)] {
        &self.simple
    }

    pub fn simple_reflection(&self, s: AffineSimple) -> &AffineElement {
        &self
            .simple
            .iter()
            .find(|(l, _)| *l == s)
            .expect("affine simple reflection exists")
            .1
    }

    /// The length-zero elements, ordered by class.
    pub fn omega_elements(&self) -> Vec<&AffineElement> {
        self.classes.iter().map(|c| &self.omega[c]).collect()
    }

    /// Elements of `P∨/Q∨`, as fractional coroot coordinates.
    pub fn fundamental_group(&self) -> &[Vec<Q>] {
        &self.classes
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement {
            translation: vec![0; self.rank()],
            finite: self.sys.identity(),
        }
    }

    pub fn translation(&self, lambda: &[i64]) -> AffineElement {
        AffineElement {
            translation: lambda.to_vec(),
            finite: self.sys.identity(),
        }
    }

    pub fn from_finite(&self, w: &FiniteWeylElement) -> AffineElement {
        AffineElement {
            translation: vec![0; self.rank()],
            finite: w.clone(),
        }
    }

    /// `v·t^μ = t^{v·μ}·v`.
    pub fn v_t_mu(&self, v: &FiniteWeylElement, mu: &[i64]) -> AffineElement {
        AffineElement {
            translation: v.act_on_int(mu),
            finite: v.clone(),
        }
    }

    fn mul_in(sys: &RootSystem, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let moved = x.finite.act_on_int(&y.translation);
        AffineElement {
            translation: x.translation.iter().zip(&moved).map(|(a, b)| a + b).collect(),
            finite: sys.compose(&x.finite, &y.finite),
        }
    }

    /// `(t^λ u)(t^μ v) = t^{λ + u·μ} uv`.
    pub fn mul(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        Self::mul_in(&self.sys, x, y)
    }

    pub fn inv(&self, x: &AffineElement) -> AffineElement {
        let wi = x.finite.inverse();
        AffineElement {
            translation: wi.act_on_int(&x.translation).into_iter().map(|c| -c).collect(),
            finite: wi,
        }
    }

    /// σ acting on both the translation and the finite part.
    pub fn apply_sigma(&self, sigma: &DiagramAutomorphism, x: &AffineElement) -> AffineElement {
        if sigma.is_identity() {
            return x.clone();
        }
        AffineElement {
            translation: sigma.apply_int(&x.translation),
            finite: sigma.apply_weyl(&x.finite),
        }
    }

    /// `σ⁻¹(x)`.
    pub fn apply_sigma_inverse(&self, sigma: &DiagramAutomorphism, x: &AffineElement) -> AffineElement {
        self.apply_sigma(&sigma.inverse(), x)
    }

    /// Iwahori-Matsumoto length of `t^λ w`:
    /// `Σ_{α>0, w⁻¹α>0} |⟨α,λ⟩| + Σ_{α>0, w⁻¹α<0} |⟨α,λ⟩ − 1|`.
    pub fn length(&self, x: &AffineElement) -> usize {
        let winv = x.finite.inverse();
        self.sys
            .positive_roots()
            .iter()
            .map(|a| {
                let p = a.pair_int(&x.translation);
                let shift = if winv.act_on_root(a).is_negative() { 1 } else { 0 };
                (p - shift).unsigned_abs() as usize
            })
            .sum()
    }

    /// Affine action `p ↦ λ + w·p` on a rational point.
    pub fn act_on_point(&self, x: &AffineElement, p: &Coweight) -> Coweight {
        x.finite.act_on_coweight(p).add(&Coweight::from_ints(&x.translation))
    }

    /// Barycenter of the base alcove.
    pub fn base_barycenter(&self) -> &Coweight {
        &self.barycenter
    }

    /// Barycenter of the alcove `x·a`.
    pub fn barycenter(&self, x: &AffineElement) -> Coweight {
        self.act_on_point(x, &self.barycenter)
    }

    /// Vertices of the base alcove (a product of simplices).
    pub fn base_alcove_vertices(&self) -> Vec<Coweight> {
        let r = self.rank();
        let mut verts = vec![Coweight::zero(r)];
        for (comp, theta) in self.sys.components().iter().zip(self.sys.highest_roots()) {
            let mut local = vec![Coweight::zero(r)];
            for i in comp.indices() {
                let mut v = Coweight::zero(r);
                v.0[i] = Q::new(1, theta.0[i] as i64);
                local.push(v);
            }
            verts = verts.iter().flat_map(|v| local.iter().map(move |l| v.add(l))).collect();
        }
        verts
    }

    fn class_in(sys: &RootSystem, lambda: &[i64]) -> Vec<Q> {
        sys.coroot_coordinates(&Coweight::from_ints(lambda))
            .expect("rank matches")
            .into_iter()
            .map(frac)
            .collect()
    }

    /// Class of `λ` in `P∨/Q∨`.
    pub fn class_of_coweight(&self, lambda: &[i64]) -> Vec<Q> {
        Self::class_in(&self.sys, lambda)
    }

    fn coinvariant(&self, class: &[Q], sigma: &DiagramAutomorphism) -> Vec<Q> {
        if sigma.is_identity() {
            return class.to_vec();
        }
        let shifts: HashSet<Vec<Q>> = self
            .classes
            .iter()
            .map(|c| {
                let s = sigma.apply_q(c);
                c.iter().zip(&s).map(|(a, b)| frac(a - b)).collect()
            })
            .collect();
        shifts
            .iter()
            .map(|h| class.iter().zip(h).map(|(a, b)| frac(a + b)).collect::<Vec<Q>>())
            .min()
            .expect("nonempty")
    }

    /// Kottwitz invariant of `t^λ`.
    pub fn kottwitz_of_coweight(&self, lambda: &[i64], sigma: &DiagramAutomorphism) -> KottwitzClass {
        let class = self.class_of_coweight(lambda);
        let coinvariant = self.coinvariant(&class, sigma);
        KottwitzClass { class, coinvariant }
    }

    /// `κ(x)`: the class of the translation part.
    pub fn kottwitz(&self, x: &AffineElement, sigma: &DiagramAutomorphism) -> KottwitzClass {
        self.kottwitz_of_coweight(&x.translation, sigma)
    }

    /// The length-zero element with the given `P∨/Q∨` class.
    pub fn omega_for_class(&self, class: &[Q]) -> &AffineElement {
        &self.omega[class]
    }

    /// `x = x_a·ω_x` with `x_a ∈ W_a` and `ω_x ∈ Ω`.
    pub fn decompose(&self, x: &AffineElement) -> (AffineElement, AffineElement) {
        let omega = self.omega[&self.class_of_coweight(&x.translation)].clone();
        (self.mul(x, &self.inv(&omega)), omega)
    }

    /// Reduced word of `x_a` over `S̃`, by greedy removal of the first left
    /// descent (indices into [`Self::simple_reflections`]).
    pub fn affine_reduced_word(&self, x: &AffineElement) -> Vec<usize> {
        let (mut cur, _) = self.decompose(x);
        let mut len = self.length(&cur);
        let mut word = Vec::with_capacity(len);
        while len > 0 {
            let (k, next) = self
                .simple
                .iter()
                .enumerate()
                .map(|(k, (_, s))| (k, self.mul(s, &cur)))
                .find(|(_, n)| self.length(n) < len)
                .expect("nontrivial element has a left descent");
            word.push(k);
            cur = next;
            len -= 1;
        }
        word
    }

    /// `supp~_σ(x)`: the support of `x_a` closed under `s ↦ ω_x σ(s) ω_x⁻¹`.
    pub fn affine_sigma_support(&self, x: &AffineElement, sigma: &DiagramAutomorphism) -> AffineSupport {
        let (_, omega) = self.decompose(x);
        let omega_inv = self.inv(&omega);
        let xi: Vec<usize> = self
            .simple
            .iter()
            .map(|(_, s)| {
                let img = self.mul(&self.mul(&omega, &self.apply_sigma(sigma, s)), &omega_inv);
                self.simple
                    .iter()
                    .position(|(_, t)| *t == img)
                    .expect("Ω·σ permutes the affine simple reflections")
            })
            .collect();
        let mut members: BTreeSet<usize> = self.affine_reduced_word(x).into_iter().collect();
        let mut frontier: Vec<usize> = members.iter().copied().collect();
        while let Some(k) = frontier.pop() {
            if members.insert(xi[k]) {
                frontier.push(xi[k]);
            }
        }
        AffineSupport {
            full: members.len() == self.simple.len(),
            members: members.into_iter().map(|k| self.simple[k].0).collect(),
        }
    }

    /// Dominant representative of the `W₀`-orbit of `μ`.
    pub fn dominant(&self, mu: &Coweight) -> Coweight {
        let mut cur = mu.clone();
        while let Some(i) = cur.0.iter().position(|c| *c < Q::zero()) {
            cur = self.sys.reflect_coweight(i, &cur);
        }
        cur
    }

    /// Newton point: `μ/N` where `x·σ(x)⋯σ^{N−1}(x) = t^μ`, with `N` the
    /// smallest multiple of the order of σ that works.
    pub fn newton(&self, x: &AffineElement, sigma: &DiagramAutomorphism) -> NewtonPoint {
        self.newton_with_multiple(x, sigma, 1)
    }

    /// As [`Self::newton`] but with `N` multiplied by `factor`.
    pub fn newton_with_multiple(&self, x: &AffineElement, sigma: &DiagramAutomorphism, factor: usize) -> NewtonPoint {
        let ord = sigma.order();
        let mut block = self.identity();
        let mut cur = x.clone();
        for _ in 0..ord {
            block = self.mul(&block, &cur);
            cur = self.apply_sigma(sigma, &cur);
        }
        let mut z = block.clone();
        let mut m = 1;
        while !z.finite.is_identity() {
            z = self.mul(&z, &block);
            m += 1;
        }
        let mut total = z.clone();
        for _ in 1..factor {
            total = self.mul(&total, &z);
        }
        let n = m * ord * factor;
        let vector = Coweight::from_ints(&total.translation).scale(Q::new(1, n as i64));
        let dominant = self.dominant(&vector);
        NewtonPoint {
            vector,
            dominant,
            period: n,
        }
    }

    /// The basic σ-conjugacy class with Kottwitz invariant `kappa`; its Newton
    /// point is central, hence zero in the adjoint case.
    pub fn basic_class_of(&self, kappa: &KottwitzClass) -> (NewtonPoint, KottwitzClass) {
        let zero = Coweight::zero(self.rank());
        (
            NewtonPoint {
                vector: zero.clone(),
                dominant: zero,
                period: 1,
            },
            kappa.clone(),
        )
    }

    /// All `x ∈ W_a` with `ℓ(x) ≤ max_len`, grouped by length.
    pub fn enumerate_affine_weyl(&self, max_len: usize, cap: usize) -> Result<Vec<Vec<AffineElement>>> {
        let mut layers = vec![vec![self.identity()]];
        let mut seen: HashSet<AffineElement> = HashSet::from([self.identity()]);
        for len in 0..max_len {
            let mut next = Vec::new();
            for y in &layers[len] {
                for (_, s) in &self.simple {
                    let z = self.mul(s, y);
                    if self.length(&z) == len + 1 && seen.insert(z.clone()) {
                        next.push(z);
                    }
                }
            }
            if seen.len() * self.omega.len() > cap {
                return Err(Error::CapExceeded {
                    what: format!("elements of length ≤ {max_len}"),
                    size: (seen.len() * self.omega.len()) as u128,
                    cap: cap as u128,
                });
            }
            next.sort();
            layers.push(next);
        }
        Ok(layers)
    }

    /// All `x ∈ W̃` with `ℓ(x) ≤ max_len`, sorted by length and then by the
    /// element order.
    pub fn enumerate(&self, max_len: usize, cap: usize) -> Result<Vec<AffineElement>> {
        let layers = self.enumerate_affine_weyl(max_len, cap)?;
        let omegas = self.omega_elements();
        let mut out = Vec::new();
        for layer in layers {
            let mut block: Vec<AffineElement> = layer
                .iter()
                .flat_map(|y| omegas.iter().map(move |o| self.mul(y, o)))
                .collect();
            block.sort();
            out.extend(block);
        }
        Ok(out)
    }

    /// `x·σ` fixes the barycenter of some face of the closed base alcove.
    /// Used only as a cross-check of non-full affine σ-support: the affine map
    /// permutes the faces it preserves, so a fixed point exists iff some
    /// preserved face exists, and the barycenter of that face is fixed.
    pub fn fixes_point_of_base_alcove(&self, x: &AffineElement, sigma: &DiagramAutomorphism) -> bool {
        let verts = self.base_alcove_vertices();
        let image = |p: &Coweight| self.act_on_point(x, &sigma.apply_coweight(p));
        let n = verts.len();
        assert!(n <= 20, "face enumeration is only meant for small ranks");
        let vset: HashSet<&Coweight> = verts.iter().collect();
        (1u32..(1 << n)).any(|mask| {
            let face: Vec<&Coweight> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &verts[i]).collect();
            let imgs: Vec<Coweight> = face.iter().map(|p| image(p)).collect();
            if !imgs.iter().all(|p| vset.contains(p)) {
                return false;
            }
            let fs: HashSet<&Coweight> = face.iter().copied().collect();
            imgs.iter().all(|p| fs.contains(p))
        })
    }

    /// Length from which every `x` has `ν_{r·μ_x}` strictly inside the open
    /// coroot cone for all `r ∈ W_x`, so a proper `J_{r,x}` is impossible.
    ///
    /// `μ_x − r·μ_x` is a sum of at most `ℓ(r) ≤ |Φ⁺|` simple coroots, each
    /// coroot coordinate of the σ-averaged `μ_x = Σ c_j ϖ_j∨` is at least
    /// `m·Σ c_j`, and `ℓ(x) ≤ ⟨2ρ, μ_x⟩ + 2|Φ⁺|`.
    pub fn large_length_bound(&self, sigma: &DiagramAutomorphism) -> Result<LargeLengthBound> {
        let r = self.rank();
        let pos = self.sys.num_positive_roots() as i64;
        let ord = sigma.order();
        let mut min_coefficient: Option<Q> = None;
        for j in 0..r {
            let c = self.sys.coroot_coordinates(&Coweight::fundamental(r, j))?;
            for i in 0..r {
                let avg = (0..ord).map(|k| c[sigma.power(k as i64).apply_index(i)]).sum::<Q>() / Q::from(ord as i64);
                min_coefficient = Some(min_coefficient.map_or(avg, |m| m.min(avg)));
            }
        }
        let m = min_coefficient.ok_or_else(|| Error::Precondition("rank 0".into()))?;
        if m <= Q::zero() {
            return Err(Error::Precondition(format!(
                "averaged fundamental coweights of {} are not strictly positive",
                self.sys.label()
            )));
        }
        let mut two_rho = vec![0i64; r];
        for a in self.sys.positive_roots() {
            for (t, c) in two_rho.iter_mut().zip(a.coords()) {
                *t += *c as i64;
            }
        }
        let max_two_rho = two_rho.into_iter().max().unwrap_or(0);
        let coefficient_sum = (Q::from(pos) / m).floor().to_integer() + 1;
        let length = max_two_rho * (coefficient_sum - 1) + 2 * pos + 1;
        Ok(LargeLengthBound {
            length: length as usize,
            coefficient_sum,
            min_coefficient: m,
            max_two_rho,
        })
    }

    /// `k(a, x)` helper shared with the alcove module: `⟨a, λ⟩ + δ_{w⁻¹a}`.
    pub(crate) fn k_value_raw(&self, a: &Root, x: &AffineElement) -> i64 {
        let delta = if x.finite.inverse().act_on_root(a).is_negative() {
            -1
        } else {
            0
        };
        a.pair_int(&x.translation) + delta
    }
}

/// Kottwitz class of the identity.
pub fn trivial_class(rank: usize) -> KottwitzClass {
    KottwitzClass {
        class: vec![Q::zero(); rank],
        coinvariant: vec![Q::zero(); rank],
    }
}
