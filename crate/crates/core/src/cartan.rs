//! Reduced root systems given by their Cartan data.
//!
//! Roots are integer vectors in the basis of simple roots; coweights are
//! rational vectors in the basis of fundamental coweights, so that
//! `⟨α_i, μ⟩ = μ[i]`. The Cartan matrix is stored with the convention
//! `cartan[i][j] = ⟨α_i∨, α_j⟩`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::weyl::FiniteWeylElement;
use crate::{linalg, Error, Result, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl CartanType {
    fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => CartanType::A,
            'B' => CartanType::B,
            'C' => CartanType::C,
            'D' => CartanType::D,
            'E' => CartanType::E,
            'F' => CartanType::F,
            'G' => CartanType::G,
            _ => return None,
        })
    }

    /// Whether `rank` is admissible for this type (Bourbaki ranges).
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 3,
            CartanType::E => (6..=8).contains(&rank),
            CartanType::F => rank == 4,
            CartanType::G => rank == 2,
        }
    }

    /// Order of the Weyl group of the irreducible system of this type.
    pub fn weyl_order(self, rank: usize) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            CartanType::A => fact(rank + 1),
            CartanType::B | CartanType::C => (1u128 << rank) * fact(rank),
            CartanType::D => (1u128 << (rank - 1)) * fact(rank),
            CartanType::E => match rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            CartanType::F => 1_152,
            CartanType::G => 12,
        }
    }

    /// Cartan matrix with Bourbaki numbering, `m[i][j] = ⟨α_i∨, α_j⟩`.
    fn cartan_matrix(self, n: usize) -> Vec<Vec<i32>> {
        let mut m = vec![vec![0i32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            m[i][j] = -1;
            m[j][i] = -1;
        };
        match self {
            CartanType::A | CartanType::B | CartanType::C => {
                for i in 1..n {
                    link(i - 1, i);
                }
            }
            CartanType::D => {
                for i in 1..n - 1 {
                    link(i - 1, i);
                }
                link(n - 3, n - 1);
            }
            CartanType::E => {
                link(0, 2);
                link(1, 3);
                for i in 3..n {
                    link(i - 1, i);
                }
            }
            CartanType::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            CartanType::G => link(0, 1),
        }
        match self {
            // α_n short
            CartanType::B => m[n - 1][n - 2] = -2,
            // α_n long
            CartanType::C => m[n - 2][n - 1] = -2,
            // α_1, α_2 long; α_3, α_4 short
            CartanType::F => m[2][1] = -2,
            // α_1 short, α_2 long
            CartanType::G => m[0][1] = -3,
            _ => {}
        }
        m
    }
}

/// One irreducible summand of a root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// Index of the first simple root of this component.
    pub offset: usize,
}

impl Component {
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.rank
    }
}

/// A root, in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().any(|&c| c < 0)
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The positive root among `±self`.
    pub fn abs(&self) -> Root {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `⟨self, λ⟩` for an integral coweight.
    pub fn pair_int(&self, lambda: &[i64]) -> i64 {
        self.0.iter().zip(lambda).map(|(&a, &l)| a as i64 * l).sum()
    }
}

/// A rational coweight in the basis of fundamental coweights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight(pub Vec<Q>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![Q::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Coweight(coords.iter().map(|&c| Q::from_integer(c)).collect())
    }

    /// Fundamental coweight `ϖ_i∨`.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Q::one();
        c
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Lies in `P∨`.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn is_strictly_dominant(&self) -> bool {
        self.0.iter().all(|c| c.is_positive())
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: Q) -> Coweight {
        Coweight(self.0.iter().map(|a| a * s).collect())
    }
}

/// A set of roots, tested for closedness, radicality and parabolicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSubset {
    pub members: BTreeSet<Root>,
}

impl RootSubset {
    pub fn new(members: impl IntoIterator<Item = Root>) -> Self {
        RootSubset {
            members: members.into_iter().collect(),
        }
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.members.contains(r)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetPredicates {
    pub closed: bool,
    pub radical: bool,
    pub parabolic: bool,
}

/// A reduced root system, possibly reducible (ordered direct sum).
#[derive(Clone, Debug)]
pub struct RootSystem {
    label: String,
    components: Vec<Component>,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    inverse_cartan: Vec<Vec<Q>>,
    /// `d_i = (α_i, α_i)/2`, normalised so the shortest root in each
    /// component has `d = 1`.
    symmetrizer: Vec<i64>,
    positive_roots: Vec<Root>,
    all_roots: HashSet<Root>,
    highest_roots: Vec<Root>,
}

impl FromStr for RootSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidSystem {
            descriptor: s.to_string(),
            reason,
        };
        let mut parts = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let mut chars = part.chars();
            let t = chars
                .next()
                .and_then(CartanType::from_char)
                .ok_or_else(|| invalid(format!("unknown type in `{part}`")))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| invalid(format!("missing or malformed rank in `{part}`")))?;
            parts.push((t, rank));
        }
        RootSystem::direct_sum(&parts)
    }
}

impl RootSystem {
    /// Irreducible root system of the given type and rank.
    pub fn build(cartan_type: CartanType, rank: usize) -> Result<Self> {
        Self::direct_sum(&[(cartan_type, rank)])
    }

    /// Ordered direct sum of irreducible systems.
    pub fn direct_sum(parts: &[(CartanType, usize)]) -> Result<Self> {
        let label = parts
            .iter()
            .map(|(t, r)| format!("{t}{r}"))
            .collect::<Vec<_>>()
            .join("+");
        if parts.is_empty() {
            return Err(Error::InvalidSystem {
                descriptor: label,
                reason: "empty descriptor".into(),
            });
        }
        for &(t, r) in parts {
            if !t.admits_rank(r) {
                return Err(Error::InvalidSystem {
                    descriptor: label,
                    reason: format!("type {t} does not exist in rank {r}"),
                });
            }
        }
        let rank: usize = parts.iter().map(|p| p.1).sum();
        let mut cartan = vec![vec![0; rank]; rank];
        let mut symmetrizer = vec![1; rank];
        let mut components = Vec::new();
        let mut offset = 0;
        for &(t, r) in parts {
            let block = t.cartan_matrix(r);
            for i in 0..r {
                for j in 0..r {
                    cartan[offset + i][offset + j] = block[i][j];
                }
            }
            for (i, d) in component_symmetrizer(&block).into_iter().enumerate() {
                symmetrizer[offset + i] = d;
            }
            components.push(Component {
                cartan_type: t,
                rank: r,
                offset,
            });
            offset += r;
        }
        let as_q: Vec<Vec<Q>> = cartan
            .iter()
            .map(|row| row.iter().map(|&v| Q::from_integer(v as i64)).collect())
            .collect();
        let inverse_cartan =
            linalg::inverse(&as_q).ok_or_else(|| Error::Internal("Cartan matrix is singular".into()))?;

        let mut sys = RootSystem {
            label,
            components,
            rank,
            cartan,
            inverse_cartan,
            symmetrizer,
            positive_roots: Vec::new(),
            all_roots: HashSet::new(),
            highest_roots: Vec::new(),
        };
        sys.generate_roots();
        Ok(sys)
    }

    /// Orbit of the simple roots under the simple reflections.
    fn generate_roots(&mut self) {
        let mut seen: HashSet<Root> = HashSet::new();
        let mut queue: VecDeque<Root> = (0..self.rank).map(|i| Root::simple(self.rank, i)).collect();
        for r in &queue {
            seen.insert(r.clone());
        }
        while let Some(r) = queue.pop_front() {
            for i in 0..self.rank {
                let s = self.reflect_root(i, &r);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        let mut pos: Vec<Root> = seen.iter().filter(|r| r.is_positive()).cloned().collect();
        pos.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
        self.highest_roots = self
            .components
            .iter()
            .map(|c| {
                pos.iter()
                    .filter(|r| r.0.iter().enumerate().all(|(i, &v)| v == 0 || c.indices().contains(&i)))
                    .max_by_key(|r| r.height())
                    .cloned()
                    .expect("component has a root")
            })
            .collect();
        self.positive_roots = pos;
        self.all_roots = seen;
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.indices().contains(&i))
            .expect("index within rank")
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn inverse_cartan(&self) -> &[Vec<Q>] {
        &self.inverse_cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// All roots, positive ones first (in height order), then their negatives.
    pub fn roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(Root::neg))
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank, i)
    }

    pub fn highest_roots(&self) -> &[Root] {
        &self.highest_roots
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.all_roots.contains(r)
    }

    /// Order of `W₀`.
    pub fn weyl_order(&self) -> u128 {
        self.components
            .iter()
            .map(|c| c.cartan_type.weyl_order(c.rank))
            .product()
    }

    /// `⟨β, α_i∨⟩`.
    pub fn pair_with_simple_coroot(&self, beta: &Root, i: usize) -> i64 {
        beta.0
            .iter()
            .zip(&self.cartan[i])
            .map(|(&b, &c)| b as i64 * c as i64)
            .sum()
    }

    /// `s_i(β) = β − ⟨β, α_i∨⟩ α_i`.
    pub fn reflect_root(&self, i: usize, beta: &Root) -> Root {
        let mut out = beta.clone();
        out.0[i] -= self.pair_with_simple_coroot(beta, i) as i32;
        out
    }

    /// `s_i·μ = μ − ⟨α_i, μ⟩ α_i∨`.
    pub fn reflect_coweight(&self, i: usize, mu: &Coweight) -> Coweight {
        let m = mu.0[i];
        Coweight(
            mu.0.iter()
                .zip(&self.cartan[i])
                .map(|(&c, &a)| c - m * Q::from_integer(a as i64))
                .collect(),
        )
    }

    pub fn reflect_int(&self, i: usize, mu: &[i64]) -> Vec<i64> {
        let m = mu[i];
        mu.iter()
            .zip(&self.cartan[i])
            .map(|(&c, &a)| c - m * a as i64)
            .collect()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank,
                got,
            })
        }
    }

    /// The pairing `⟨root, μ⟩`.
    pub fn pair(&self, root: &Root, mu: &Coweight) -> Result<Q> {
        self.check_dim(root.0.len())?;
        self.check_dim(mu.0.len())?;
        Ok(root
            .0
            .iter()
            .zip(&mu.0)
            .map(|(&a, &m)| m * Q::from_integer(a as i64))
            .sum())
    }

    /// Coordinates `c` with `μ = Σ c_i α_i∨`.
    pub fn coroot_coordinates(&self, mu: &Coweight) -> Result<Vec<Q>> {
        self.check_dim(mu.0.len())?;
        Ok((0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.inverse_cartan[j][i] * mu.0[j]).sum())
            .collect())
    }

    /// The coweight `Σ c_i α_i∨`.
    pub fn from_coroot_coordinates(&self, c: &[Q]) -> Result<Coweight> {
        self.check_dim(c.len())?;
        Ok(Coweight(
            (0..self.rank)
                .map(|j| {
                    (0..self.rank)
                        .map(|i| c[i] * Q::from_integer(self.cartan[i][j] as i64))
                        .sum()
                })
                .collect(),
        ))
    }

    /// The coroot `β∨` in simple-coroot coordinates (always integral).
    pub fn coroot_of(&self, beta: &Root) -> Vec<i64> {
        let mut norm = Q::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                norm += Q::from_integer(
                    beta.0[i] as i64 * beta.0[j] as i64 * self.symmetrizer[i] * self.cartan[i][j] as i64,
                );
            }
        }
        let d_beta = norm / 2;
        beta.0
            .iter()
            .zip(&self.symmetrizer)
            .map(|(&b, &d)| {
                let c = Q::from_integer(b as i64 * d) / d_beta;
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect()
    }

    /// The coroot `β∨` in fundamental-coweight coordinates.
    pub fn coroot_as_coweight(&self, beta: &Root) -> Vec<i64> {
        let c = self.coroot_of(beta);
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| c[i] * self.cartan[i][j] as i64).sum())
            .collect()
    }

    /// Whether `μ ∈ Q∨`.
    pub fn in_coroot_lattice(&self, mu: &Coweight) -> Result<bool> {
        Ok(self.coroot_coordinates(mu)?.iter().all(|c| c.is_integer()))
    }

    /// Whether `μ` pairs to zero with every root.
    pub fn is_central(&self, mu: &Coweight) -> bool {
        mu.is_zero()
    }

    /// Closed, radical and parabolic tests for a subset of `Φ`.
    pub fn subset_predicates(&self, psi: &RootSubset) -> SubsetPredicates {
        let closed = psi.members.iter().all(|a| {
            psi.members.iter().all(|b| {
                let s = a.add(b);
                !self.is_root(&s) || psi.contains(&s)
            })
        });
        let radical = psi.members.iter().all(|a| !psi.contains(&a.neg()));
        let parabolic = self
            .positive_roots
            .iter()
            .all(|a| psi.contains(a) || psi.contains(&a.neg()));
        SubsetPredicates {
            closed,
            radical,
            parabolic,
        }
    }

    /// `Φ⁺` as a subset.
    pub fn positive_subset(&self) -> RootSubset {
        RootSubset::new(self.positive_roots.iter().cloned())
    }

    /// `Φ⁻` as a subset.
    pub fn negative_subset(&self) -> RootSubset {
        RootSubset::new(self.positive_roots.iter().map(Root::neg))
    }

    /// Some `w ∈ W₀` with `w·Ψ_r ⊆ Φ⁺ ⊆ w·Ψ_p`, by exhaustive search.
    pub fn sandwich_positivizer(&self, psi_r: &RootSubset, psi_p: &RootSubset) -> Result<FiniteWeylElement> {
        for r in psi_r.members.iter().chain(&psi_p.members) {
            if !self.is_root(r) {
                return Err(Error::NotARoot(r.0.clone()));
            }
        }
        if !psi_r.members.is_subset(&psi_p.members) {
            return Err(Error::Precondition("Ψ_r is not contained in Ψ_p".into()));
        }
        let pr = self.subset_predicates(psi_r);
        if !(pr.closed && pr.radical) {
            return Err(Error::Precondition("Ψ_r must be radical and closed".into()));
        }
        let pp = self.subset_predicates(psi_p);
        if !(pp.closed && pp.parabolic) {
            return Err(Error::Precondition("Ψ_p must be parabolic and closed".into()));
        }
        let w0 = self.enumerate_w0(crate::weyl::DEFAULT_W0_CAP)?;
        w0.into_iter()
            .find(|w| {
                psi_r.members.iter().all(|a| w.act_on_root(a).is_positive())
                    && self
                        .positive_roots
                        .iter()
                        .all(|a| psi_p.contains(&w.inverse().act_on_root(a)))
            })
            .ok_or_else(|| Error::Internal("no sandwiching Weyl element exists".into()))
    }
}

/// Integer `d_i` with `d_i·A_ij = d_j·A_ji`, smallest value 1.
fn component_symmetrizer(a: &[Vec<i32>]) -> Vec<i64> {
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if j != i && a[i][j] != 0 && d[j].is_none() {
                let di = d[i].unwrap();
                d[j] = Some(di * Q::from_integer(a[i][j] as i64) / Q::from_integer(a[j][i] as i64));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|v| v.expect("connected diagram")).collect();
    let min = d.iter().copied().min().unwrap();
    d.into_iter().map(|v| (v / min).to_integer()).collect()
}
