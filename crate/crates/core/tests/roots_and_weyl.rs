use std::collections::BTreeSet;

use adlv_core::cartan::{CartanType, Coweight, Root, RootSubset, RootSystem};
use adlv_core::weyl::{DiagramAutomorphism, FiniteWeylElement, DEFAULT_W0_CAP};
use adlv_core::Q;
use num_traits::Zero;
use proptest::prelude::*;

fn sys(s: &str) -> RootSystem {
    s.parse().unwrap()
}

fn all_irreducible_up_to(rank: usize) -> Vec<RootSystem> {
    use CartanType::*;
    let mut out = Vec::new();
    for t in [A, B, C, D, E, F, G] {
        for r in 1..=rank {
            if t.admits_rank(r) {
                out.push(RootSystem::build(t, r).unwrap());
            }
        }
    }
    out
}

fn small_systems() -> Vec<RootSystem> {
    ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1+A1"]
        .iter()
        .map(|s| sys(s))
        .collect()
}

fn elements(rs: &RootSystem) -> Vec<FiniteWeylElement> {
    rs.enumerate_w0(DEFAULT_W0_CAP).unwrap()
}

fn box_coweights(rank: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |c| {
                    let mut v = v.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn inverse_cartan_entries_are_positive() {
    let systems = all_irreducible_up_to(8);
    assert_eq!(systems.len(), 8 + 7 + 7 + 6 + 3 + 1 + 1);
    for rs in systems {
        for row in rs.inverse_cartan() {
            for q in row {
                assert!(*q > Q::zero(), "{}", rs.label());
            }
        }
    }
}

#[test]
fn weyl_group_orders() {
    for rs in all_irreducible_up_to(4) {
        assert_eq!(elements(&rs).len() as u128, rs.weyl_order(), "{}", rs.label());
    }
    assert!(sys("E8").enumerate_w0(1_000).is_err());
}

#[test]
fn w_mu_minus_mu_lies_in_support_coroot_span() {
    for rs in small_systems() {
        let r = rs.rank();
        for w in elements(&rs) {
            let supp = rs.support(&w);
            for mu in box_coweights(r, -2, 2) {
                let diff: Vec<i64> = mu.iter().zip(w.act_on_int(&mu)).map(|(a, b)| a - b).collect();
                let c = rs.coroot_coordinates(&Coweight::from_ints(&diff)).unwrap();
                for (i, ci) in c.iter().enumerate() {
                    assert!(ci.is_integer(), "{} {mu:?}", rs.label());
                    assert!(supp.contains(&i) || ci.is_zero(), "{} {mu:?}", rs.label());
                }
            }
        }
    }
}

#[test]
fn r_mu_expansion_along_words() {
    // r = s_{i_m}⋯s_{i_1}: r·μ = μ − Σ_j ⟨s_{i_1}⋯s_{i_{j−1}} α_{i_j}, μ⟩ α_{i_j}∨
    for rs in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"].map(sys) {
        let r = rs.rank();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier = words.clone();
        for _ in 0..4 {
            frontier = frontier
                .iter()
                .flat_map(|w| {
                    (0..r).map(move |i| {
                        let mut w = w.clone();
                        w.push(i);
                        w
                    })
                })
                .collect();
            words.extend(frontier.iter().cloned());
        }
        let coroots: Vec<Vec<i64>> = (0..r).map(|i| rs.coroot_as_coweight(&rs.simple_root(i))).collect();
        for mu in box_coweights(r, -3, 3) {
            for word in &words {
                let reversed: Vec<usize> = word.iter().rev().copied().collect();
                let lhs = rs.from_word(&reversed).act_on_int(&mu);
                let mut rhs = mu.clone();
                for j in 0..word.len() {
                    let prefix = rs.from_word(&word[..j]);
                    let beta = prefix.act_on_root(&rs.simple_root(word[j]));
                    let coeff = beta.pair_int(&mu);
                    for (x, c) in rhs.iter_mut().zip(&coroots[word[j]]) {
                        *x -= coeff * c;
                    }
                }
                assert_eq!(lhs, rhs, "{} {word:?} {mu:?}", rs.label());
            }
        }
    }
}

#[test]
fn no_dominant_coweight_in_a_proper_levi_span() {
    let mut cases: Vec<(RootSystem, DiagramAutomorphism)> = all_irreducible_up_to(4)
        .into_iter()
        .map(|rs| {
            let id = DiagramAutomorphism::identity(rs.rank());
            (rs, id)
        })
        .collect();
    for (s, perm) in [("A1+A1", "(1 2)"), ("A2+A2", "(1 3)(2 4)")] {
        let rs = sys(s);
        let sigma = DiagramAutomorphism::parse(&rs, perm).unwrap();
        cases.push((rs, sigma));
    }
    let mut counterexamples = Vec::new();
    for (rs, sigma) in &cases {
        let r = rs.rank();
        let proper: Vec<BTreeSet<usize>> = (0u32..(1 << r) - 1)
            .map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect())
            .filter(|j| sigma.is_stable(j))
            .collect();
        for mu in box_coweights(r, 0, 3) {
            if mu.iter().all(|c| *c == 0) {
                continue;
            }
            let c = rs.coroot_coordinates(&Coweight::from_ints(&mu)).unwrap();
            for j in &proper {
                if (0..r).all(|i| j.contains(&i) || c[i].is_zero()) {
                    counterexamples.push((rs.label().to_string(), mu.clone(), j.clone()));
                }
            }
        }
    }
    assert!(counterexamples.is_empty(), "{counterexamples:?}");
}

#[test]
fn length_is_subadditive_and_inverse_invariant() {
    for rs in small_systems() {
        let ws = elements(&rs);
        for u in &ws {
            assert_eq!(u.length(), u.inverse().length());
            for v in &ws {
                assert!(rs.compose(u, v).length() <= u.length() + v.length());
            }
        }
    }
}

#[test]
fn support_does_not_depend_on_the_reduced_word() {
    for rs in [sys("A3"), sys("B2"), sys("G2")] {
        for w in elements(&rs) {
            let a: BTreeSet<usize> = rs.reduced_word(&w).into_iter().collect();
            let b: BTreeSet<usize> = rs.reduced_word_largest(&w).into_iter().collect();
            assert_eq!(a, b);
            assert_eq!(rs.from_word(&rs.reduced_word_largest(&w)), w);
            assert_eq!(rs.reduced_word(&w).len(), w.length());
        }
    }
}

#[test]
fn sigma_is_a_length_preserving_automorphism() {
    for (s, perm) in [("A3", "(1 3)"), ("A2", "(1 2)"), ("A1+A1", "(1 2)"), ("D4", "(1 3 4)")] {
        let rs = sys(s);
        let sigma = DiagramAutomorphism::parse(&rs, perm).unwrap();
        let ws = elements(&rs);
        let images: BTreeSet<Vec<usize>> = ws.iter().map(|w| rs.reduced_word(&sigma.apply_weyl(w))).collect();
        assert_eq!(images.len(), ws.len());
        for u in &ws {
            assert_eq!(sigma.apply_weyl(u).length(), u.length());
            if ws.len() > 48 {
                continue;
            }
            for v in &ws {
                assert_eq!(
                    sigma.apply_weyl(&rs.compose(u, v)),
                    rs.compose(&sigma.apply_weyl(u), &sigma.apply_weyl(v))
                );
            }
        }
        for i in 0..rs.rank() {
            assert_eq!(sigma.apply_weyl(&rs.reflection(i)), rs.reflection(sigma.apply_index(i)));
        }
    }
}

#[test]
fn longest_element_negates_positive_roots() {
    for rs in all_irreducible_up_to(4) {
        let w0 = rs.longest_element();
        assert_eq!(w0.length(), rs.num_positive_roots());
        for a in rs.positive_roots() {
            assert!(w0.act_on_root(a).is_negative());
        }
    }
}

#[test]
fn action_preserves_pairings() {
    for rs in small_systems() {
        for w in elements(&rs) {
            for mu in box_coweights(rs.rank(), -1, 2) {
                let wmu = Coweight::from_ints(&w.act_on_int(&mu));
                for a in rs.positive_roots() {
                    assert_eq!(
                        rs.pair(&w.act_on_root(a), &wmu).unwrap(),
                        rs.pair(a, &Coweight::from_ints(&mu)).unwrap()
                    );
                }
            }
        }
    }
}

fn additive_closure(rs: &RootSystem, seed: &[Root]) -> RootSubset {
    let mut set: BTreeSet<Root> = seed.iter().cloned().collect();
    loop {
        let sums: Vec<Root> = set
            .iter()
            .flat_map(|a| set.iter().map(move |b| a.add(b)))
            .filter(|s| rs.is_root(s) && !set.contains(s))
            .collect();
        if sums.is_empty() {
            return RootSubset::new(set);
        }
        set.extend(sums);
    }
}

fn system_and_indices() -> impl Strategy<Value = (String, Vec<prop::sample::Index>)> {
    prop::sample::select(vec!["A2", "A3", "B2", "B3", "C3", "G2"]).prop_flat_map(|s| {
        (
            Just(s.to_string()),
            prop::collection::vec(any::<prop::sample::Index>(), 1..4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn radical_closed_subsets_are_positive_after_conjugation((s, picks) in system_and_indices()) {
        let rs = sys(&s);
        let roots: Vec<Root> = rs.roots().collect();
        let seed: Vec<Root> = picks.iter().map(|i| i.get(&roots).clone()).collect();
        let psi = additive_closure(&rs, &seed);
        let p = rs.subset_predicates(&psi);
        prop_assume!(p.closed && p.radical);
        let found = elements(&rs)
            .into_iter()
            .any(|w| psi.members.iter().all(|a| w.act_on_root(a).is_positive()));
        prop_assert!(found);
    }

    #[test]
    fn sandwich_output_satisfies_both_inclusions(
        (s, picks) in system_and_indices(),
        w_pick in any::<prop::sample::Index>(),
        j_mask in 0u32..8,
    ) {
        let rs = sys(&s);
        let ws = elements(&rs);
        let w = w_pick.get(&ws);
        let j: BTreeSet<usize> = (0..rs.rank()).filter(|i| j_mask >> i & 1 == 1).collect();
        // Ψ_p = w(Φ⁺ ∪ Φ_J), Ψ_r = closure of some roots of w(Φ⁺)
        let levi = |a: &Root| a.0.iter().enumerate().all(|(i, c)| *c == 0 || j.contains(&i));
        let psi_p = RootSubset::new(
            rs.roots().filter(|a| a.is_positive() || levi(a)).map(|a| w.act_on_root(&a)),
        );
        let pos_images: Vec<Root> = rs.positive_roots().iter().map(|a| w.act_on_root(a)).collect();
        let seed: Vec<Root> = picks.iter().map(|i| i.get(&pos_images).clone()).collect();
        let psi_r = additive_closure(&rs, &seed);
        let u = rs.sandwich_positivizer(&psi_r, &psi_p).unwrap();
        for a in &psi_r.members {
            prop_assert!(u.act_on_root(a).is_positive());
        }
        for a in rs.positive_roots() {
            prop_assert!(psi_p.contains(&u.inverse().act_on_root(a)));
        }
    }
}
