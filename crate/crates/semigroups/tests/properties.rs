//! Instance properties drawn from the theory: zigzags with factors in a
//! single D-class, group elements sandwiched between idempotents,
//! idempotent abundance, reduction stability, and the end-to-end
//! enlargement pipeline. Plus a couple of proptest invariants for the
//! transformation algebra and serialization.

use proptest::prelude::*;

use semigroups::catalog;
use semigroups::construct::{
    b_generators, cycle_modify, enlarge_automaton, enlargement_report, rees_semigroup,
    u_of_enlargement,
};
use semigroups::corpus::corpus;
use semigroups::dominion::{
    certificate_from_classic, dominion, normalize_zigzag, reduce_to_top_j, verify_zigzag,
    zigzag_for, ClassicZigzag,
};
use semigroups::green::{self, GreenData};
use semigroups::io::SemigroupJson;
use semigroups::pseudo;
use semigroups::semigroup::{is_isomorphism, Subset};
use semigroups::transform::{
    cayley_semiautomaton, cayley_word_map, transition_semigroup, PartialTransformation,
    Semiautomaton,
};

fn shared_corpus() -> &'static Vec<semigroups::corpus::CorpusPair> {
    static CORPUS: std::sync::OnceLock<Vec<semigroups::corpus::CorpusPair>> =
        std::sync::OnceLock::new();
    CORPUS.get_or_init(|| corpus(0, 200))
}

#[test]
fn dominion_is_closure_like_on_corpus() {
    for pair in shared_corpus() {
        let dom = dominion(&pair.s, &pair.u).unwrap();
        assert!(pair.u.is_subset_of(&dom), "{}", pair.name);
        assert!(pair.s.is_subsemigroup(&dom), "{}", pair.name);
        let again = dominion(&pair.s, &dom).unwrap();
        assert_eq!(again, dom, "dominion not idempotent on {}", pair.name);
    }
}

#[test]
fn green_relations_match_brute_force_divisibility() {
    // independent oracle for the SCC-based computation: mutual divisibility
    // in S^1 checked by direct products
    let mut seen_tables = std::collections::HashSet::new();
    for pair in shared_corpus() {
        let s = &pair.s;
        if !seen_tables.insert(s.rows()) {
            continue;
        }
        let n = s.order();
        let divides_r = |x: usize, y: usize| {
            // y ∈ xS¹
            y == x || (0..n).any(|t| s.mul(x, t) == y)
        };
        let divides_l = |x: usize, y: usize| y == x || (0..n).any(|t| s.mul(t, x) == y);
        let divides_j = |x: usize, y: usize| {
            y == x
                || (0..n).any(|t| s.mul(x, t) == y || s.mul(t, x) == y)
                || (0..n).any(|a| (0..n).any(|b| s.mul(s.mul(a, x), b) == y))
        };
        let g = GreenData::compute(s);
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    g.r_class[x] == g.r_class[y],
                    divides_r(x, y) && divides_r(y, x),
                    "R mismatch at ({x},{y}) on {}",
                    pair.name
                );
                assert_eq!(
                    g.l_class[x] == g.l_class[y],
                    divides_l(x, y) && divides_l(y, x),
                    "L mismatch at ({x},{y}) on {}",
                    pair.name
                );
                assert_eq!(
                    g.j_class[x] == g.j_class[y],
                    divides_j(x, y) && divides_j(y, x),
                    "J mismatch at ({x},{y}) on {}",
                    pair.name
                );
                assert_eq!(
                    g.j_leq_elements(y, x),
                    divides_j(x, y),
                    "J-order mismatch at ({x},{y}) on {}",
                    pair.name
                );
            }
        }
    }
}

#[test]
fn amalgam_of_ds_member_stays_in_ds() {
    let mut exercised = 0;
    for pair in shared_corpus() {
        let Ok(am) = semigroups::dominion::amalgam(&pair.s, &pair.u) else {
            continue;
        };
        let g = GreenData::compute(&pair.s);
        if !pseudo::in_ds(&pair.s, &g) {
            continue;
        }
        exercised += 1;
        let gw = GreenData::compute(&am.w);
        assert!(
            pseudo::in_ds(&am.w, &gw),
            "amalgam left DS on {}",
            pair.name
        );
    }
    assert!(exercised > 0);
}

#[test]
fn normalization_preserves_corpus_certificates() {
    for pair in shared_corpus().iter().take(120) {
        let dom = dominion(&pair.s, &pair.u).unwrap();
        for &d in dom.iter() {
            let cert = zigzag_for(&pair.s, &pair.u, d, None).unwrap().unwrap();
            if cert.classic.is_none() {
                continue;
            }
            let norm = normalize_zigzag(&pair.s, &pair.u, &cert).unwrap();
            assert!(verify_zigzag(&pair.s, &pair.u, &norm).is_ok(), "{}", pair.name);
            assert_eq!(norm.d, d);
            let before = cert.classic.as_ref().unwrap().m;
            let after = norm.classic.as_ref().unwrap().m;
            assert!(after <= before, "{}", pair.name);
        }
    }
}

#[test]
fn pair_graph_edges_preserve_products() {
    // the flip edges (xu, y) ~ (x, uy) never change the pair product, so
    // fibers cannot merge
    let b2 = catalog::b2();
    let u = catalog::y_in_b2();
    let n1 = b2.order() + 1;
    for &g in u.iter() {
        for x in 0..n1 {
            for y in 0..n1 {
                let lhs = b2.mul1(b2.mul1(x, g), y);
                let rhs = b2.mul1(x, b2.mul1(g, y));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn zigzags_restricted_to_the_top_d_class() {
    // whenever U holds an idempotent in every R- and L-class of the
    // D-class of a J-maximal dominated element, a zigzag confined to that
    // class exists
    let mut exercised = 0;
    for pair in shared_corpus() {
        let dom = dominion(&pair.s, &pair.u).unwrap();
        let proper = pair.u.len() != pair.s.order();
        if !(proper && dom.len() == pair.s.order()) {
            continue;
        }
        let g = GreenData::compute(&pair.s);
        let complement: Subset = pair.s.elements().filter(|&x| !pair.u.contains(x)).collect();
        for &d in green::j_maximal(&pair.s, &g, &complement).iter() {
            let dclass = g.d_class(d);
            let members: Subset = pair
                .s
                .elements()
                .filter(|&x| g.d_class(x) == dclass)
                .collect();
            let r_classes: std::collections::HashSet<usize> =
                members.iter().map(|&x| g.r_class[x]).collect();
            let l_classes: std::collections::HashSet<usize> =
                members.iter().map(|&x| g.l_class[x]).collect();
            let covered = |classes: &std::collections::HashSet<usize>, by_r: bool| {
                classes.iter().all(|&c| {
                    pair.u.iter().any(|&e| {
                        pair.s.is_idempotent(e)
                            && if by_r {
                                g.r_class[e] == c
                            } else {
                                g.l_class[e] == c
                            }
                    })
                })
            };
            if covered(&r_classes, true) && covered(&l_classes, false) {
                exercised += 1;
                let cert = zigzag_for(&pair.s, &pair.u, d, Some(&members))
                    .unwrap()
                    .unwrap_or_else(|| panic!("restricted zigzag missing on {}", pair.name));
                assert!(verify_zigzag(&pair.s, &pair.u, &cert).is_ok());
            }
        }
    }
    assert!(exercised > 0, "hypothesis never satisfied in the corpus");
}

#[test]
fn sandwiched_elements_are_group_elements_when_u_avoids_y() {
    // for U in one of the three maximal pseudovarieties: e, u, f with u in
    // R_e ∩ L_f forces u^{ω+1} = u and e, u, f D-equivalent inside U
    let cap = pseudo::DEFAULT_BUDGET;
    let mut exercised = 0;
    for pair in shared_corpus() {
        let (u_sg, back) = pair.s.induced(&pair.u).unwrap();
        let in_some_v = pseudo::in_v1(&u_sg, cap).unwrap().holds()
            || pseudo::in_v2(&u_sg, cap).unwrap().holds()
            || pseudo::in_v3(&u_sg, cap).unwrap().holds();
        if !in_some_v {
            continue;
        }
        let g = GreenData::compute(&pair.s);
        let gu = GreenData::compute(&u_sg);
        let pos = |x: usize| back.iter().position(|&v| v == x).unwrap();
        for &e in pair.u.iter().filter(|&&e| pair.s.is_idempotent(e)) {
            for &f in pair.u.iter().filter(|&&f| pair.s.is_idempotent(f)) {
                for &u in pair.u.iter() {
                    if g.r_class[u] == g.r_class[e] && g.l_class[u] == g.l_class[f] {
                        exercised += 1;
                        assert_eq!(
                            green::omega_plus_one(&pair.s, u),
                            u,
                            "{}: sandwiched element not in a group",
                            pair.name
                        );
                        let (pe, pu, pf) = (pos(e), pos(u), pos(f));
                        assert!(
                            gu.d_eq(pe, pu) && gu.d_eq(pu, pf),
                            "{}: e, u, f not D-equivalent in U",
                            pair.name
                        );
                    }
                }
            }
        }
    }
    assert!(exercised > 0);
}

#[test]
fn idempotent_abundance_inside_covered_d_classes() {
    // if U (in some V_i) meets every R-class and L-class of a regular
    // D-class, it holds an idempotent in each of them
    let cap = pseudo::DEFAULT_BUDGET;
    let mut exercised = 0;
    for pair in shared_corpus() {
        let (u_sg, _) = pair.s.induced(&pair.u).unwrap();
        let in_some_v = pseudo::in_v1(&u_sg, cap).unwrap().holds()
            || pseudo::in_v2(&u_sg, cap).unwrap().holds()
            || pseudo::in_v3(&u_sg, cap).unwrap().holds();
        if !in_some_v {
            continue;
        }
        let g = GreenData::compute(&pair.s);
        for (c, regular) in g.regular_j.iter().enumerate() {
            if !regular {
                continue;
            }
            let members = g.j_members(c);
            let r_classes: std::collections::HashSet<usize> =
                members.iter().map(|&x| g.r_class[x]).collect();
            let l_classes: std::collections::HashSet<usize> =
                members.iter().map(|&x| g.l_class[x]).collect();
            let meets_all = r_classes.iter().all(|&rc| {
                pair.u
                    .iter()
                    .any(|&x| g.r_class[x] == rc && g.j_class[x] == c)
            }) && l_classes.iter().all(|&lc| {
                pair.u
                    .iter()
                    .any(|&x| g.l_class[x] == lc && g.j_class[x] == c)
            });
            if !meets_all {
                continue;
            }
            exercised += 1;
            for &rc in &r_classes {
                assert!(
                    pair.u
                        .iter()
                        .any(|&e| pair.s.is_idempotent(e) && g.r_class[e] == rc),
                    "{}: R-class without idempotent of U",
                    pair.name
                );
            }
            for &lc in &l_classes {
                assert!(
                    pair.u
                        .iter()
                        .any(|&e| pair.s.is_idempotent(e) && g.l_class[e] == lc),
                    "{}: L-class without idempotent of U",
                    pair.name
                );
            }
        }
    }
    assert!(exercised > 0);
}

#[test]
fn top_j_reduction_preserves_epimorphic_embeddings() {
    let mut reduced_count = 0;
    for pair in shared_corpus() {
        if pair.u.len() == pair.s.order() {
            continue;
        }
        let red = reduce_to_top_j(&pair.s, &pair.u).unwrap();
        // complement of the U-image sits inside J ∪ {0} (certified inside,
        // re-checked here)
        let qzero = red.quotient.zero();
        for x in red.quotient.elements() {
            assert!(
                red.u_image.contains(x) || red.j_image.contains(x) || Some(x) == qzero,
                "{}",
                pair.name
            );
        }
        if red.changed {
            reduced_count += 1;
        }
        let dom = dominion(&pair.s, &pair.u).unwrap();
        if dom.len() == pair.s.order() && red.u_image.len() < red.quotient.order() {
            let dom_q = dominion(&red.quotient, &red.u_image).unwrap();
            assert_eq!(
                dom_q.len(),
                red.quotient.order(),
                "{}: reduction lost the epimorphic embedding",
                pair.name
            );
        }
    }
    assert!(reduced_count > 0);
}

#[test]
fn normalization_strips_padded_factors() {
    // inside the enlargement T of B2-as-Rees, the displayed zigzag for the
    // below-diagonal element t = (i'', 1, λ') has y1 = t itself, which
    // carries strippable U-prefixes; normalization peels it down to the
    // top-corner factor and leaves an equivalent verified certificate
    let spec = catalog::b2_rees();
    let enl = semigroups::construct::cs0_enlarge(&spec).unwrap();
    let t = &enl.t;
    let coords = enl.coords;
    let phi = |lam: usize| spec.i_size + lam;
    // t = (3, 1, 0): first I''-index above φ(0) = 2
    let d = coords.index(3, 0, 0);
    let classic = ClassicZigzag {
        m: 2,
        spine: vec![
            coords.index(phi(0), 0, 0),
            coords.index(phi(0), 0, 1),
            coords.index(3, 0, 1),
        ],
        x: vec![d],
        y: vec![d],
    };
    let cert = certificate_from_classic(t, d, classic);
    verify_zigzag(t, &enl.u, &cert).unwrap();
    let norm = normalize_zigzag(t, &enl.u, &cert).unwrap();
    verify_zigzag(t, &enl.u, &norm).unwrap();
    let got = norm.classic.clone().unwrap();
    // the greedy peel ends at y1 = (4, 1, 0), the maximal-row corner cell
    assert_eq!(got.y, vec![coords.index(4, 0, 0)]);
    assert_eq!(
        got.spine,
        vec![
            coords.index(2, 0, 0),
            coords.index(2, 0, 2),
            coords.index(3, 0, 2),
        ]
    );
    // x1 = t admits no changing strip: unchanged
    assert_eq!(got.x, vec![d]);
    // idempotent under repetition
    let again = normalize_zigzag(t, &enl.u, &norm).unwrap();
    assert_eq!(again.classic, Some(got));
}

#[test]
fn enlargement_pipeline_end_to_end() {
    // cycle modification then enlargement lands in a completely 0-simple
    // semigroup with U epimorphically embedded; the original transition
    // semigroup embeds into the unmodified enlargement
    let two_state = Semiautomaton::new(
        2,
        vec!["a".into(), "b".into()],
        vec![
            PartialTransformation::total(&[1, 0]).unwrap(),
            PartialTransformation::identity(2),
        ],
    )
    .unwrap();
    for base in [catalog::q3a3(), catalog::t4_base(), two_state] {
        let modified = cycle_modify(&base);
        let enl = enlarge_automaton(&modified);
        let ts = transition_semigroup(&enl.enlarged);
        assert!(green::is_completely_0_simple(&ts.semigroup));
        let u = u_of_enlargement(&enl, &ts);
        let dom = dominion(&ts.semigroup, &u).unwrap();
        assert_eq!(dom.len(), ts.semigroup.order());

        // the unmodified enlargement carries the copy of T(A)
        let report = enlargement_report(&base);
        assert!(report.embedded_copy);
    }
}

#[test]
fn b_generators_restrict_to_base_actions() {
    let base = catalog::q3a3();
    let enl = enlarge_automaton(&base);
    let ts = transition_semigroup(&enl.enlarged);
    let ts_base = transition_semigroup(&base);
    for (la, &idx) in b_generators(&enl, &ts).iter().enumerate() {
        let restricted: Vec<Option<usize>> = (0..base.states())
            .map(|q| ts.transformations[idx].apply(q))
            .collect();
        let t = PartialTransformation::new(base.states(), &restricted).unwrap();
        assert_eq!(ts_base.index_of(&t), ts_base.index_of(base.action(la)));
    }
}

#[test]
fn cayley_word_map_on_rees49() {
    let (s, _) = rees_semigroup(&catalog::order49_rees()).unwrap();
    let gens = s.full_subset();
    let aut = cayley_semiautomaton(&s, &gens).unwrap();
    let ts = transition_semigroup(&aut);
    assert_eq!(ts.semigroup.order(), 49);
    let map = cayley_word_map(&s, &gens, &ts);
    assert!(is_isomorphism(&map, &ts.semigroup, &s));
}

#[test]
fn miller_clifford_exhaustive_on_catalog_constructions() {
    let (t16, _) = rees_semigroup(&catalog::b2_rees()).unwrap();
    let (t49, _) = rees_semigroup(&catalog::order49_rees()).unwrap();
    for s in [t16, t49, catalog::b2(), catalog::y()] {
        let g = GreenData::compute(&s);
        assert!(green::miller_clifford_check(&s, &g).is_empty());
    }
}

#[test]
fn cs0_coverage_matches_the_eggbox_prediction() {
    // the S-image together with U covers exactly the cells of the top
    // D-class predicted by the construction: the S block (I × Λ), the
    // I × {λ0} strip, and the I'' cells on or below the diagonal
    let spec = catalog::b2_rees();
    let enl = semigroups::construct::cs0_enlarge(&spec).unwrap();
    let coords = enl.coords;
    let phi = |lam: usize| spec.i_size + lam;
    let image: std::collections::HashSet<usize> = enl.embed.iter().copied().collect();
    for idx in enl.t.elements() {
        let covered = image.contains(&idx) || enl.u.contains(idx);
        let predicted = match coords.decode(idx) {
            None => true, // zero
            Some((i, g, lam)) => {
                let in_s = i < spec.i_size && lam < spec.lambda_size;
                let in_strip = i < spec.i_size && lam == enl.lambda0;
                let below_diag = i >= spec.i_size && i < phi(lam);
                let on_diag = i == phi(lam) && g == spec.group.identity().unwrap();
                in_s || in_strip || below_diag || on_diag
            }
        };
        assert_eq!(covered, predicted, "element {idx}");
    }
}

#[test]
fn analysis_types_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<semigroups::FiniteSemigroup>();
    assert_send_sync::<semigroups::Subset>();
    assert_send_sync::<GreenData>();
    assert_send_sync::<semigroups::dominion::ZigzagCertificate>();
    assert_send_sync::<semigroups::transform::Semiautomaton>();
}

proptest! {
    #[test]
    fn partial_transformation_composition_is_associative(
        seed in 0u64..500, degree in 1usize..7
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = semigroups::corpus::random_partial_transformation(&mut rng, degree);
        let g = semigroups::corpus::random_partial_transformation(&mut rng, degree);
        let h = semigroups::corpus::random_partial_transformation(&mut rng, degree);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = PartialTransformation::identity(degree);
        prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
        prop_assert_eq!(id.compose(&f).unwrap(), f);
    }

    #[test]
    fn semigroup_json_round_trip_is_identity(idx in 0usize..1024) {
        let pairs = shared_corpus();
        let pair = &pairs[idx % pairs.len()];
        let json = SemigroupJson::from_semigroup(&pair.s);
        let text = serde_json::to_string(&json).unwrap();
        let back: SemigroupJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.into_semigroup().unwrap(), pair.s.clone());
    }
}
