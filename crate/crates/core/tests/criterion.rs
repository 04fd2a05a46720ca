use adlv_core::cartan::Coweight;
use adlv_core::criterion::{BgxConclusion, DimEntry, Rule, Setting};
use adlv_core::iwahori::{trivial_class, AffineElement, IwahoriWeyl};
use adlv_core::notation::{self, VerdictRecord};
use adlv_core::weyl::DiagramAutomorphism;
use adlv_core::Q;
use num_integer::Integer;
use num_traits::Zero;

fn setting(s: &str, perm: &str) -> Setting {
    let g = IwahoriWeyl::new(s.parse().unwrap());
    let sigma = DiagramAutomorphism::parse(g.sys(), perm).unwrap();
    Setting::new(g, sigma).unwrap()
}

fn elements(st: &Setting, len: usize) -> Vec<AffineElement> {
    st.group().enumerate(len, 1_000_000).unwrap()
}

#[test]
fn criterion_agrees_with_alcove_oracle() {
    for (s, perm, len) in [
        ("A2", "id", 8),
        ("B2", "id", 8),
        ("G2", "id", 8),
        ("A3", "(1 3)", 5),
        ("A1+A1", "(1 2)", 6),
    ] {
        let st = setting(s, perm);
        let mut compared = 0;
        for x in elements(&st, len) {
            if !st.group().affine_sigma_support(&x, st.sigma()).full {
                continue;
            }
            let k = st.kottwitz(&x);
            let a = st.decide_nonempty(&x, &k).unwrap();
            let b = st.oracle_nonempty(&x, &k).unwrap();
            assert_eq!(
                a.nonempty,
                b.nonempty,
                "{s} {}",
                notation::format_affine(st.group(), &x)
            );
            compared += 1;
        }
        assert!(compared > 0);
    }
}

#[test]
fn negative_verdicts_carry_alcove_witnesses() {
    let st = setting("B2", "id");
    for x in elements(&st, 8) {
        let k = st.kottwitz(&x);
        let v = st.decide_nonempty(&x, &k).unwrap();
        if v.nonempty {
            continue;
        }
        assert_eq!(v.rule, Rule::SigmaSupportCriterion);
        let failing = v.failing.as_ref().unwrap();
        assert!(!failing.full);
        let (j, w) = v.alcove_pair.as_ref().unwrap();
        assert_eq!(j, &failing.j);
        assert!(st.is_jw_alcove(&x, j, w).unwrap());
    }
}

#[test]
fn oracle_witness_is_the_smallest_pair() {
    let st = setting("A2", "id");
    for x in elements(&st, 6) {
        let Some((j, w)) = st.first_alcove_pair(&x) else {
            continue;
        };
        let earlier = st
            .proper_stable_subsets()
            .iter()
            .take_while(|jj| **jj != j)
            .any(|jj| st.w0().iter().any(|ww| st.is_jw_alcove(&x, jj, ww).unwrap()));
        assert!(!earlier);
        let pos = st.w0().iter().position(|ww| *ww == w).unwrap();
        assert!(st.w0()[..pos].iter().all(|ww| !st.is_jw_alcove(&x, &j, ww).unwrap()));
    }
}

#[test]
fn j_rx_is_always_an_alcove_pair() {
    for (s, perm, len) in [("A2", "id", 8), ("A3", "(1 3)", 4)] {
        let st = setting(s, perm);
        for x in elements(&st, len) {
            for r in st.profile(&x).unwrap().w_x_set {
                st.j_rx(&x, &r).unwrap();
            }
        }
    }
}

#[test]
fn shrunken_elements_reduce_to_the_support_of_eta() {
    for (s, perm, len) in [("A2", "id", 10), ("B2", "id", 10), ("G2", "id", 10), ("A3", "(1 3)", 6)] {
        let st = setting(s, perm);
        let mut shrunken = 0;
        for x in elements(&st, len) {
            let p = st.profile(&x).unwrap();
            if !p.shrunken {
                continue;
            }
            shrunken += 1;
            assert_eq!(p.w_x_set, vec![st.group().sys().identity()]);
            let full = st.group().sys().sigma_support(&p.eta, st.sigma()).len() == st.group().rank();
            assert_eq!(st.decide_nonempty(&x, &st.kottwitz(&x)).unwrap().nonempty, full, "{s}");
        }
        assert!(shrunken > 0);
    }
}

#[test]
fn one_strip_elements_follow_the_two_support_test() {
    for (s, perm, len) in [("A2", "id", 10), ("B2", "id", 10), ("G2", "id", 10), ("A3", "(1 3)", 6)] {
        let st = setting(s, perm);
        let sys = st.group().sys();
        let mut seen = 0;
        for x in elements(&st, len) {
            let p = st.profile(&x).unwrap();
            let Some(i) = p.single_strip_index() else { continue };
            seen += 1;
            let s_x = sys.reflection(i);
            let first = sys.sigma_support(&p.eta, st.sigma()).len() == sys.rank();
            let second = sys.sigma_support(&st.twisted_conjugate(&p.eta, &s_x), st.sigma()).len() == sys.rank();
            let verdict = st.decide_nonempty(&x, &st.kottwitz(&x)).unwrap();
            assert_eq!(verdict.nonempty, first && second, "{s}");
            if st.group().newton(&x, st.sigma()).dominant.is_zero() {
                assert!(first && second, "{s}");
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn translations_are_nonempty_only_at_zero() {
    for s in ["A2", "B2", "G2"] {
        let st = setting(s, "id");
        for x in elements(&st, 10).into_iter().filter(AffineElement::is_translation) {
            let k = st.kottwitz(&x);
            let v = st.decide_nonempty(&x, &k).unwrap();
            let zero = x.translation.iter().all(|c| *c == 0);
            assert_eq!(v.nonempty, zero, "{s}");
            if !zero {
                assert!(!st.oracle_nonempty(&x, &k).unwrap().nonempty);
            }
        }
    }
}

#[test]
fn v_t_mu_elements_agree_with_the_oracle() {
    let st = setting("A2", "id");
    let g = st.group();
    for v in st.w0() {
        for mu in [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [2, 1], [3, 2]] {
            let x = g.v_t_mu(v, &mu);
            if !g.affine_sigma_support(&x, st.sigma()).full {
                continue;
            }
            let k = st.kottwitz(&x);
            assert_eq!(
                st.decide_nonempty(&x, &k).unwrap().nonempty,
                st.oracle_nonempty(&x, &k).unwrap().nonempty
            );
        }
    }
    // w₀·t^μ with μ regular meets the basic class even though μ is not central.
    let x = g.v_t_mu(&g.sys().longest_element(), &[1, 1]);
    assert!(st.decide_nonempty(&x, &st.kottwitz(&x)).unwrap().nonempty);
}

#[test]
fn cordial_formula_matches_alcove_w_x() {
    for s in ["A2", "B2"] {
        let st = setting(s, "id");
        let g = st.group();
        for v in st.w0() {
            for a in 0..4 {
                for b in 0..4 {
                    let mu = [a, b];
                    if g.length(&g.v_t_mu(v, &mu)) > 8 {
                        continue;
                    }
                    let rep = st.bgx_cordial(v, &mu, 1_000_000).unwrap();
                    assert!(rep.agrees, "{s} {mu:?}");
                    if a == 0 && b == 0 {
                        assert!(matches!(rep.conclusion, BgxConclusion::Central(_)));
                    }
                }
            }
        }
    }
}

#[test]
fn defect_in_type_a_is_n_minus_gcd() {
    for n in 2..=6i64 {
        let st = setting(&format!("A{}", n - 1), "id");
        for i in 0..n {
            let mut lambda = vec![0; (n - 1) as usize];
            if i > 0 {
                lambda[(i - 1) as usize] = 1;
            }
            let k = st.kottwitz(&st.group().translation(&lambda));
            let d = st.defect(&k).unwrap();
            assert_eq!(d.value as i64, n - n.gcd(&i), "n = {n}, κ = {i}");
            assert!(!d.heuristic);
        }
    }
}

#[test]
fn dimension_table_is_consistent() {
    let st = setting("A2", "id");
    let b = trivial_class(2);
    let table = st.dimension_table(&b, 8, 1_000_000).unwrap();
    assert!(table.conflicts.is_empty(), "{:?}", table.conflicts);
    let mut compared = 0;
    for (x, e) in &table.entries {
        if let Ok(d) = st.dim_one_strip_rank2(x, &b) {
            assert_eq!(*e, DimEntry::Dim(d));
            compared += 1;
        }
        if let Ok(d) = st.dim_shrunken(x, &b) {
            assert_eq!(*e, DimEntry::Dim(d));
        }
    }
    assert!(compared > 0);
}

#[test]
fn verdict_records_serialize() {
    let st = setting("A2", "id");
    let x = notation::parse_affine(st.group(), "t[2,2]").unwrap();
    let k = st.kottwitz(&x);
    let v = st.decide_nonempty(&x, &k).unwrap();
    let p = st.profile(&x).unwrap();
    let rec = VerdictRecord::new(st.group(), &x, &k, &v, Some(&p));
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["rule"], "sigma-support-criterion");
    assert_eq!(json["nonempty"], false);
    assert_eq!(json["profile"]["W_x"], serde_json::json!(["e"]));
    let back: VerdictRecord = serde_json::from_value(json).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn large_length_bound_ingredients_hold() {
    for (s, perm, len) in [("A2", "id", 10), ("B2", "id", 10), ("G2", "id", 10), ("A3", "(1 3)", 6)] {
        let st = setting(s, perm);
        let g = st.group();
        let sys = g.sys();
        let pos = sys.num_positive_roots() as i64;
        let two_rho: Vec<i64> = (0..g.rank())
            .map(|j| sys.positive_roots().iter().map(|a| a.coords()[j] as i64).sum())
            .collect();
        for x in elements(&st, len) {
            let p = st.profile(&x).unwrap();
            let pairing: i64 = p.mu_x.iter().zip(&two_rho).map(|(c, t)| c * t).sum();
            assert!(g.length(&x) as i64 <= pairing + 2 * pos, "{s}");
            for r in &p.w_x_set {
                let moved = r.act_on_int(&p.mu_x);
                let diff: Vec<i64> = p.mu_x.iter().zip(&moved).map(|(a, b)| a - b).collect();
                let c = sys.coroot_coordinates(&Coweight::from_ints(&diff)).unwrap();
                assert!(c.iter().all(|q| q.is_integer() && *q >= Q::zero()), "{s}");
                assert!(c.iter().sum::<Q>() <= Q::from(r.length() as i64), "{s}");
            }
        }
    }
}

#[test]
fn past_the_coefficient_threshold_averaged_newton_points_are_regular() {
    for (s, perm) in [("A2", "id"), ("A2", "(1 2)"), ("B2", "id"), ("G2", "id")] {
        let st = setting(s, perm);
        let g = st.group();
        let sys = g.sys();
        let n = g.large_length_bound(st.sigma()).unwrap().coefficient_sum;
        let ord = st.sigma().order() as i64;
        for mu in [[n, 0], [0, n], [n / 2, n - n / 2]] {
            for v in st.w0() {
                for w in st.w0() {
                    let x = g.mul(&g.mul(&g.from_finite(v), &g.translation(&mu)), &g.from_finite(w));
                    let p = st.profile(&x).unwrap();
                    assert_eq!(p.mu_x, mu.to_vec());
                    assert!(g.affine_sigma_support(&x, st.sigma()).full, "{s}");
                    for r in &p.w_x_set {
                        let moved = r.act_on_int(&p.mu_x);
                        let mut avg = vec![Q::zero(); g.rank()];
                        for k in 0..ord {
                            let c = sys
                                .coroot_coordinates(&Coweight::from_ints(&st.sigma().power(k).apply_int(&moved)))
                                .unwrap();
                            for (a, q) in avg.iter_mut().zip(c) {
                                *a += q / Q::from(ord);
                            }
                        }
                        assert!(avg.iter().all(|q| *q > Q::zero()), "{s} {mu:?}");
                    }
                    let k = st.kottwitz(&x);
                    assert_eq!(
                        st.decide_nonempty(&x, &k).unwrap().nonempty,
                        st.oracle_nonempty(&x, &k).unwrap().nonempty
                    );
                }
            }
        }
    }
}
