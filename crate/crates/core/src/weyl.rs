//! The finite Weyl group `W₀` and diagram automorphisms.
//!
//! An element is stored by its matrix on the simple-root basis: column `j`
//! holds `w(α_j)`. The inverse matrix travels along so that the action on
//! coweights, `⟨α_i, w·μ⟩ = ⟨w⁻¹α_i, μ⟩`, is a plain matrix product.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::cartan::{Coweight, Root, RootSystem};
use crate::{Error, Result, Q};

pub const DEFAULT_W0_CAP: u128 = 1_000_000;

#[derive(Clone)]
pub struct FiniteWeylElement {
    rank: usize,
    images: Vec<i32>,
    inverse: Vec<i32>,
    length: usize,
}

impl PartialEq for FiniteWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for FiniteWeylElement {}

impl Hash for FiniteWeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for FiniteWeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteWeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| other.images.cmp(&self.images))
    }
}

impl fmt::Debug for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteWeylElement")
            .field("length", &self.length)
            .field("images", &self.images)
            .finish()
    }
}

fn mat_mul(rank: usize, a: &[i32], b: &[i32]) -> Vec<i32> {
    // column-major: entry (i, j) lives at j * rank + i
    let mut out = vec![0; rank * rank];
    for j in 0..rank {
        for k in 0..rank {
            let bkj = b[j * rank + k];
            if bkj == 0 {
                continue;
            }
            for i in 0..rank {
                out[j * rank + i] += a[k * rank + i] * bkj;
            }
        }
    }
    out
}

impl FiniteWeylElement {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// `w(α_j)`.
    pub fn image_of_simple(&self, j: usize) -> Root {
        Root(self.images[j * self.rank..(j + 1) * self.rank].to_vec())
    }

    pub fn act_on_root(&self, beta: &Root) -> Root {
        let r = self.rank;
        let mut out = vec![0; r];
        for (j, &b) in beta.0.iter().enumerate() {
            if b != 0 {
                for (i, o) in out.iter_mut().enumerate() {
                    *o += self.images[j * r + i] * b;
                }
            }
        }
        Root(out)
    }

    pub fn act_on_coweight(&self, mu: &Coweight) -> Coweight {
        let r = self.rank;
        Coweight(
            (0..r)
                .map(|i| {
                    (0..r)
                        .map(|k| mu.0[k] * Q::from_integer(self.inverse[i * r + k] as i64))
                        .sum()
                })
                .collect(),
        )
    }

    pub fn act_on_int(&self, mu: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|k| mu[k] * self.inverse[i * r + k] as i64).sum())
            .collect()
    }

    pub fn inverse(&self) -> FiniteWeylElement {
        FiniteWeylElement {
            rank: self.rank,
            images: self.inverse.clone(),
            inverse: self.images.clone(),
            length: self.length,
        }
    }

    /// Whether `w(α_i) < 0`, i.e. `s_i` is a right descent.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i * self.rank..(i + 1) * self.rank].iter().any(|&c| c < 0)
    }

    /// Whether `w⁻¹(α_i) < 0`, i.e. `s_i` is a left descent.
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse[i * self.rank..(i + 1) * self.rank].iter().any(|&c| c < 0)
    }
}

impl RootSystem {
    fn element(&self, images: Vec<i32>, inverse: Vec<i32>) -> FiniteWeylElement {
        let mut w = FiniteWeylElement {
            rank: self.rank(),
            images,
            inverse,
            length: 0,
        };
        w.length = self
            .positive_roots()
            .iter()
            .filter(|a| w.act_on_root(a).is_negative())
            .count();
        w
    }

    pub fn identity(&self) -> FiniteWeylElement {
        let r = self.rank();
        let mut m = vec![0; r * r];
        for i in 0..r {
            m[i * r + i] = 1;
        }
        FiniteWeylElement {
            rank: r,
            images: m.clone(),
            inverse: m,
            length: 0,
        }
    }

    /// The simple reflection `s_i` (0-based index).
    pub fn reflection(&self, i: usize) -> FiniteWeylElement {
        let r = self.rank();
        let mut m = vec![0; r * r];
        for j in 0..r {
            let img = self.reflect_root(i, &self.simple_root(j));
            m[j * r..(j + 1) * r].copy_from_slice(&img.0);
        }
        FiniteWeylElement {
            rank: r,
            images: m.clone(),
            inverse: m,
            length: 1,
        }
    }

    /// The reflection `s_β` for an arbitrary root.
    pub fn root_reflection(&self, beta: &Root) -> FiniteWeylElement {
        let r = self.rank();
        let coroot = self.coroot_as_coweight(beta);
        let mut m = vec![0; r * r];
        for j in 0..r {
            // s_β(α_j) = α_j − ⟨α_j, β∨⟩ β
            let p = coroot[j] as i32;
            for i in 0..r {
                m[j * r + i] = if i == j { 1 } else { 0 } - p * beta.0[i];
            }
        }
        self.element(m.clone(), m)
    }

    pub fn compose(&self, u: &FiniteWeylElement, v: &FiniteWeylElement) -> FiniteWeylElement {
        let r = self.rank();
        self.element(mat_mul(r, &u.images, &v.images), mat_mul(r, &v.inverse, &u.inverse))
    }

    /// Product of simple reflections, left to right (0-based indices).
    pub fn from_word(&self, word: &[usize]) -> FiniteWeylElement {
        word.iter()
            .fold(self.identity(), |w, &i| self.compose(&w, &self.reflection(i)))
    }

    /// Deterministic reduced word: repeatedly strip the smallest right descent.
    pub fn reduced_word(&self, w: &FiniteWeylElement) -> Vec<usize> {
        self.reduced_word_by(w, |w| (0..w.rank).find(|&i| w.has_right_descent(i)))
    }

    /// Reduced word stripping the largest right descent instead.
    pub fn reduced_word_largest(&self, w: &FiniteWeylElement) -> Vec<usize> {
        self.reduced_word_by(w, |w| (0..w.rank).rev().find(|&i| w.has_right_descent(i)))
    }

    fn reduced_word_by(&self, w: &FiniteWeylElement, pick: impl Fn(&FiniteWeylElement) -> Option<usize>) -> Vec<usize> {
        let mut word = Vec::with_capacity(w.length);
        let mut cur = w.clone();
        while let Some(i) = pick(&cur) {
            word.push(i);
            cur = self.compose(&cur, &self.reflection(i));
        }
        debug_assert!(cur.is_identity());
        word.reverse();
        word
    }

    pub fn support(&self, w: &FiniteWeylElement) -> BTreeSet<usize> {
        self.reduced_word(w).into_iter().collect()
    }

    pub fn sigma_support(&self, w: &FiniteWeylElement, sigma: &DiagramAutomorphism) -> BTreeSet<usize> {
        sigma.closure(&self.support(w))
    }

    /// Whether `w ∈ W_J`.
    pub fn in_parabolic(&self, w: &FiniteWeylElement, j: &BTreeSet<usize>) -> bool {
        self.support(w).is_subset(j)
    }

    /// Longest element of the parabolic subgroup `W_J`.
    pub fn longest_in(&self, j: &BTreeSet<usize>) -> FiniteWeylElement {
        let mut w = self.identity();
        while let Some(&i) = j.iter().find(|&&i| !w.has_right_descent(i)) {
            w = self.compose(&w, &self.reflection(i));
        }
        w
    }

    pub fn longest_element(&self) -> FiniteWeylElement {
        self.longest_in(&(0..self.rank()).collect())
    }

    /// All of `W₀` by breadth-first closure under right multiplication by
    /// simple reflections, in order of discovery.
    pub fn enumerate_w0(&self, cap: u128) -> Result<Vec<FiniteWeylElement>> {
        let order = self.weyl_order();
        if order > cap {
            return Err(Error::CapExceeded {
                what: format!("W₀({})", self.label()),
                size: order,
                cap,
            });
        }
        let gens: Vec<_> = (0..self.rank()).map(|i| self.reflection(i)).collect();
        let mut seen: HashSet<FiniteWeylElement> = HashSet::new();
        let mut out = Vec::with_capacity(order as usize);
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let n = self.compose(&w, g);
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
            out.push(w);
        }
        Ok(out)
    }

    /// Elements of the parabolic subgroup `W_J`, by the same closure.
    pub fn enumerate_parabolic(&self, j: &BTreeSet<usize>) -> Vec<FiniteWeylElement> {
        let mut seen: HashSet<FiniteWeylElement> = HashSet::from([self.identity()]);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(w) = queue.pop_front() {
            for &i in j {
                let n = self.compose(&w, &self.reflection(i));
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
            out.push(w);
        }
        out
    }
}

/// A permutation of the simple roots preserving the Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism {
            perm: (0..rank).collect(),
            order: 1,
        }
    }

    pub fn new(sys: &RootSystem, perm: Vec<usize>) -> Result<Self> {
        let r = sys.rank();
        if perm.len() != r {
            return Err(Error::InvalidSigma(format!(
                "permutation has {} entries, rank is {r}",
                perm.len()
            )));
        }
        let mut seen = vec![false; r];
        for &p in &perm {
            if p >= r || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidSigma(format!("{perm:?} is not a permutation")));
            }
        }
        let a = sys.cartan_matrix();
        for i in 0..r {
            for j in 0..r {
                if a[perm[i]][perm[j]] != a[i][j] {
                    return Err(Error::InvalidSigma(format!(
                        "{perm:?} does not preserve the Cartan matrix (entry {},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut order = 1;
        let mut cur: Vec<usize> = perm.clone();
        while cur.iter().enumerate().any(|(i, &c)| c != i) {
            cur = cur.iter().map(|&c| perm[c]).collect();
            order += 1;
        }
        Ok(DiagramAutomorphism { perm, order })
    }

    /// Parses `id` or cycle notation on 1-based indices, e.g. `(1 3)` or
    /// `(1,3)(2,4)`.
    pub fn parse(sys: &RootSystem, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" || s == "e" {
            return Ok(Self::identity(sys.rank()));
        }
        let mut perm: Vec<usize> = (0..sys.rank()).collect();
        let bad = |m: &str| Error::InvalidSigma(format!("`{s}`: {m}"));
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
            let close = open.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let cycle: Vec<usize> = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if (1..=sys.rank()).contains(&v) => Ok(v - 1),
                    _ => Err(bad(&format!("bad index `{t}`"))),
                })
                .collect::<Result<_>>()?;
            for (k, &i) in cycle.iter().enumerate() {
                perm[i] = cycle[(k + 1) % cycle.len()];
            }
            rest = open[close + 1..].trim_start();
        }
        Self::new(sys, perm)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// Image of the simple index `i`.
    pub fn apply_index(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> DiagramAutomorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        DiagramAutomorphism {
            perm: inv,
            order: self.order,
        }
    }

    fn permute<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.perm[i]] = x.clone();
        }
        out
    }

    pub fn apply_root(&self, beta: &Root) -> Root {
        Root(self.permute(&beta.0))
    }

    pub fn apply_coweight(&self, mu: &Coweight) -> Coweight {
        Coweight(self.permute(&mu.0))
    }

    pub fn apply_int(&self, mu: &[i64]) -> Vec<i64> {
        self.permute(mu)
    }

    pub fn apply_q(&self, v: &[Q]) -> Vec<Q> {
        self.permute(v)
    }

    /// `σ(w)`, sending `s_i` to `s_{σ(i)}`.
    pub fn apply_weyl(&self, w: &FiniteWeylElement) -> FiniteWeylElement {
        if self.is_identity() {
            return w.clone();
        }
        let r = w.rank;
        let map = |m: &[i32]| {
            let mut out = vec![0; r * r];
            for j in 0..r {
                let col = self.permute(&m[j * r..(j + 1) * r]);
                let tj = self.perm[j];
                out[tj * r..(tj + 1) * r].copy_from_slice(&col);
            }
            out
        };
        FiniteWeylElement {
            rank: r,
            images: map(&w.images),
            inverse: map(&w.inverse),
            length: w.length,
        }
    }

    /// `σ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> DiagramAutomorphism {
        let k = k.rem_euclid(self.order as i64) as usize;
        let mut perm: Vec<usize> = (0..self.perm.len()).collect();
        for _ in 0..k {
            perm = perm.iter().map(|&p| self.perm[p]).collect();
        }
        DiagramAutomorphism {
            perm,
            order: self.order,
        }
    }

    /// Smallest σ-stable set containing `set`.
    pub fn closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut frontier: Vec<usize> = set.iter().copied().collect();
        while let Some(i) = frontier.pop() {
            let j = self.perm[i];
            if out.insert(j) {
                frontier.push(j);
            }
        }
        out
    }

    pub fn is_stable(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&i| set.contains(&self.perm[i]))
    }
}
