//! The reference verification suite: eight numbered criteria covering the
//! worked B₂/Y example, the pseudovariety predicates, both enlargement
//! constructions with their reported orders, an independent dominion
//! oracle over a generated corpus, and the theorem falsification and
//! property suites. Each criterion reports one pass/fail line per check
//! and a wall-clock reading against its pinned budget.

use std::time::Instant;

use serde::Serialize;

use crate::catalog;
use crate::construct::{
    cs0_enlarge, cs0_verify, cycle_modify, enlarge_automaton, enlargement_report,
    order_formula_check, rees_coordinatize, rees_isomorphic, u_of_enlargement,
};
use crate::corpus::corpus;
use crate::dominion::{
    amalgam, certificate_from_classic, dominion, verify_zigzag, zigzag_for, ClassicZigzag,
};
use crate::green::{self, GreenData};
use crate::pseudo;
use crate::semigroup::{is_embedding, FiniteSemigroup, Subset};
use crate::transform::transition_semigroup;

pub const CORPUS_TARGET: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: String,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
    pub millis: u128,
    pub budget_millis: u128,
    pub skipped: bool,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.skipped || self.checks.iter().all(|c| c.pass)
    }
}

struct Builder {
    id: usize,
    title: String,
    checks: Vec<CheckLine>,
    notes: Vec<String>,
    start: Instant,
    budget_millis: u128,
}

impl Builder {
    fn new(id: usize, title: &str, budget_millis: u128) -> Builder {
        Builder {
            id,
            title: title.to_string(),
            checks: Vec::new(),
            notes: Vec::new(),
            start: Instant::now(),
            budget_millis,
        }
    }

    fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            pass,
        });
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn finish(mut self) -> CriterionOutcome {
        let millis = self.start.elapsed().as_millis();
        self.checks.push(CheckLine {
            name: format!("runtime within {} ms", self.budget_millis),
            pass: millis <= self.budget_millis,
        });
        CriterionOutcome {
            id: self.id,
            title: self.title,
            checks: self.checks,
            notes: self.notes,
            millis,
            budget_millis: self.budget_millis,
            skipped: false,
        }
    }
}

/// Criterion 1: the dominion and displayed zigzag of b over Y in B₂.
pub fn criterion1() -> CriterionOutcome {
    let mut b = Builder::new(1, "dominion and zigzag of b over Y in B2", 100);
    let b2 = catalog::b2();
    let y = catalog::y_in_b2();
    let (a_ix, b_ix, ab_ix, ba_ix) = (0usize, 1usize, 2usize, 3usize);

    let dom = dominion(&b2, &y).expect("Y is a subsemigroup");
    b.check("dominion(Y, B2) equals all of B2", dom == b2.full_subset());

    let cert = zigzag_for(&b2, &y, b_ix, None)
        .expect("Y is a subsemigroup")
        .expect("b is dominated");
    let valid = verify_zigzag(&b2, &y, &cert).is_ok();
    b.check(
        "zigzag_for(B2, Y, b) yields a verifiable certificate",
        valid,
    );
    let classic = cert.classic.clone().expect("alternating chain");
    b.note(format!(
        "zigzag_for returned m = {} with spine {:?} (x = {:?}, y = {:?})",
        classic.m, classic.spine, classic.x, classic.y
    ));
    b.note(format!(
        "the fiber of b holds 4 pairs and its unique shortest chain has {} flips; \
         a length-2 zigzag (b = b*ab = b*a*b = ba*b) exists, so the displayed \
         length-3 form is not reachable by shortest-chain search",
        cert.chain.len()
    ));
    b.check("certificate classic form has m = 3", classic.m == 3);
    b.check(
        "certificate spine is (ab, a, a, a, ba)",
        classic.spine == vec![ab_ix, a_ix, a_ix, a_ix, ba_ix],
    );

    // hand transcription of the displayed zigzag
    let displayed = ClassicZigzag {
        m: 3,
        spine: vec![ab_ix, a_ix, a_ix, a_ix, ba_ix],
        x: vec![b_ix, b_ix],
        y: vec![b_ix, b_ix],
    };
    let transcribed = certificate_from_classic(&b2, b_ix, displayed);
    b.check(
        "hand-transcribed displayed zigzag verifies",
        verify_zigzag(&b2, &y, &transcribed).is_ok(),
    );
    b.finish()
}

/// Criterion 2: pseudovariety membership of B₂ and Y.
pub fn criterion2() -> CriterionOutcome {
    let mut b = Builder::new(2, "pseudovariety membership of B2 and Y", 1000);
    let b2 = catalog::b2();
    let y = catalog::y();
    let cap = pseudo::DEFAULT_BUDGET;
    let g_b2 = GreenData::compute(&b2);
    let g_y = GreenData::compute(&y);
    b.check("in_DS(B2) = false", !pseudo::in_ds(&b2, &g_b2));
    b.check("in_VY(Y) = true", pseudo::in_vy(&y, cap).unwrap().holds());
    b.check("in_V1(Y) = false", !pseudo::in_v1(&y, cap).unwrap().holds());
    b.check("in_V2(Y) = false", !pseudo::in_v2(&y, cap).unwrap().holds());
    b.check("in_V3(Y) = false", !pseudo::in_v3(&y, cap).unwrap().holds());
    b.check("in_DS(Y) = true", pseudo::in_ds(&y, &g_y));
    b.finish()
}

/// Criterion 3: the completely 0-simple enlargement of B₂ in Rees form.
pub fn criterion3() -> CriterionOutcome {
    let mut b = Builder::new(3, "completely 0-simple enlargement of B2", 5000);
    let spec = catalog::b2_rees();
    let enl = cs0_enlarge(&spec).expect("valid spec");
    b.check("|T| = 16", enl.t.order() == 16);
    b.check("|U| = 9", enl.u.len() == 9);
    let report = cs0_verify(&spec, &enl).expect("verification runs");
    b.check("U satisfies the Y-identities", report.u_in_vy);
    b.check("dominion(T, U) = T", report.dominion_full);
    b.check(
        "S embeds with image meeting U only at zero",
        report.embed_ok,
    );
    b.check("displayed zigzags verify", report.zigzags_ok);
    b.finish()
}

/// Criterion 4: the 4-state enlargement pipeline and its reported orders.
pub fn criterion4() -> CriterionOutcome {
    let mut b = Builder::new(4, "4-state automaton enlargement pipeline", 60_000);
    let base = catalog::t4_base();
    let report = enlargement_report(&base);
    b.check("|T(A)| = 256", report.base_order == 256);
    b.check("|T(~A)| = 4097", report.enlarged_order == 4097);
    b.check(
        "|U(~A)| = 11 = 2|A| + |A_mu| + 2",
        report.u_order == Some(11) && report.moving_letters == 3,
    );
    b.check(
        "report: <B> generates an isomorphic copy of T(A)",
        report.embedded_copy,
    );
    b.check(
        "report: aa'a = a and a'aa' = a'",
        report.sandwich_identities,
    );
    b.check(
        "report: |U(~A)| matches 2|A| + |A_mu| + 2",
        report.u_order_formula == Some(true),
    );
    b.check(
        "report: U(~A) depends only on (|Q|, |A|, |A_mu|)",
        report.parameter_isomorphism == Some(true),
    );
    b.check(
        "report: every nonzero element of U(~A) has a J-witness word of length <= 2",
        report.j_witnesses == Some(true),
    );
    b.check(
        "report: nonzero J-classes covered by <B> products and 1_Q",
        report.j_cover == Some(true),
    );
    b.check(
        "report: U(~A) epimorphically embedded with displayed zigzags",
        report.epi_embedding == Some(true),
    );
    b.check(
        "order formula: 4097 = 16*256 + 1",
        order_formula_check(&base).unwrap_or(false),
    );
    b.finish()
}

/// Criterion 5: the cycle-modified 3-state example and its Rees form.
pub fn criterion5() -> CriterionOutcome {
    let mut b = Builder::new(5, "cycle-modified 3-state example", 5000);
    let modified = cycle_modify(&catalog::q3a3());
    let enl = enlarge_automaton(&modified);
    let ts = transition_semigroup(&enl.enlarged);
    b.check("|T(~A)| = 49", ts.semigroup.order() == 49);
    let u = u_of_enlargement(&enl, &ts);
    b.check("|U(~A)| = 9", u.len() == 9);

    b.check(
        "T(~A) is completely 0-simple",
        green::is_completely_0_simple(&ts.semigroup),
    );
    let g = GreenData::compute(&ts.semigroup);
    let top = 1 - g.j_class[ts.semigroup.zero().expect("zero")];
    let eb = &g.eggboxes[top];
    b.check(
        "eggbox of the top class is 4x4 with H-classes of size 3",
        eb.row_r_classes.len() == 4
            && eb.col_l_classes.len() == 4
            && eb.cells.iter().flatten().all(|c| c.len() == 3),
    );
    match rees_coordinatize(&ts.semigroup) {
        Ok((extracted, _)) => {
            b.check(
                "T(~A) is isomorphic to the printed 4x4 Rees matrix over C3",
                rees_isomorphic(&extracted, &catalog::order49_rees()),
            );
        }
        Err(e) => {
            b.note(format!("coordinatization failed: {e}"));
            b.check(
                "T(~A) is isomorphic to the printed 4x4 Rees matrix over C3",
                false,
            );
        }
    }
    b.finish()
}

/// Independent bounded zigzag-enumeration oracle, straight off the classic
/// equation template: membership DP over states (x_i·v_i, y_i), length
/// bounded by |S|² + 1. Shares nothing with the disjoint-set or fiber-BFS
/// implementations.
pub fn oracle_dominion(s: &FiniteSemigroup, u: &Subset) -> Subset {
    let n = s.order();
    let in_u = u.mask(n);
    let mut members = Vec::new();
    for d in 0..n {
        if in_u[d] {
            members.push(d);
            continue;
        }
        let mut seen = vec![false; n * n];
        let mut queue = std::collections::VecDeque::new();
        // step 1: d = x1·u1 and u1 = v1·y1 give the state (x1·v1, y1)
        for x1 in 0..n {
            for u1 in 0..n {
                if !in_u[u1] || s.mul(x1, u1) != d {
                    continue;
                }
                for v1 in 0..n {
                    if !in_u[v1] {
                        continue;
                    }
                    for y1 in 0..n {
                        if s.mul(v1, y1) == u1 && !seen[s.mul(x1, v1) * n + y1] {
                            seen[s.mul(x1, v1) * n + y1] = true;
                            queue.push_back((s.mul(x1, v1), y1));
                        }
                    }
                }
            }
        }
        let mut dominated = false;
        // deduplicated states keep the search within the length bound
        let bound = n * n + 1;
        let mut expansions = 0usize;
        'bfs: while let Some((ell, yv)) = queue.pop_front() {
            // closing the system: u_m := ell must lie in U with ell·y = d
            if in_u[ell] && s.mul(ell, yv) == d {
                dominated = true;
                break 'bfs;
            }
            expansions += 1;
            if expansions > bound {
                break;
            }
            // step i+1: ell = x·u, u·y = v·y' gives (x·v, y')
            for x in 0..n {
                for uu in 0..n {
                    if !in_u[uu] || s.mul(x, uu) != ell {
                        continue;
                    }
                    let uy = s.mul(uu, yv);
                    for v in 0..n {
                        if !in_u[v] {
                            continue;
                        }
                        for yp in 0..n {
                            if s.mul(v, yp) == uy && !seen[s.mul(x, v) * n + yp] {
                                seen[s.mul(x, v) * n + yp] = true;
                                queue.push_back((s.mul(x, v), yp));
                            }
                        }
                    }
                }
            }
        }
        if dominated {
            members.push(d);
        }
    }
    members.into_iter().collect()
}

/// Criterion 6: three independent dominion routes agree over the corpus.
pub fn criterion6(seed: u64) -> CriterionOutcome {
    let mut b = Builder::new(6, "dominion oracle equivalence over the corpus", 300_000);
    let pairs = corpus(seed, CORPUS_TARGET);
    b.note(format!("corpus holds {} pairs (seed {seed})", pairs.len()));
    b.check(
        &format!("corpus has at least {CORPUS_TARGET} pairs"),
        pairs.len() >= CORPUS_TARGET,
    );
    let mut dsu_vs_oracle = true;
    let mut dsu_vs_bfs = true;
    for pair in &pairs {
        let dom = dominion(&pair.s, &pair.u).expect("subsemigroup");
        let oracle = oracle_dominion(&pair.s, &pair.u);
        if dom != oracle {
            dsu_vs_oracle = false;
            b.note(format!(
                "oracle mismatch on {}: dsu {:?} vs oracle {:?}",
                pair.name,
                dom.as_slice(),
                oracle.as_slice()
            ));
        }
        let bfs: Subset = pair
            .s
            .elements()
            .filter(|&d| {
                zigzag_for(&pair.s, &pair.u, d, None)
                    .expect("subsemigroup")
                    .is_some()
            })
            .collect();
        if dom != bfs {
            dsu_vs_bfs = false;
            b.note(format!("fiber-BFS mismatch on {}", pair.name));
        }
    }
    b.check(
        "disjoint-set dominion equals bounded zigzag enumeration",
        dsu_vs_oracle,
    );
    b.check(
        "disjoint-set dominion equals fiber-BFS reachability",
        dsu_vs_bfs,
    );
    b.finish()
}

/// Criterion 7: theorem falsification sweeps (no budget is stated beyond
/// the corpus one, so this shares the five-minute figure).
pub fn criterion7(seed: u64) -> CriterionOutcome {
    let mut b = Builder::new(7, "falsification sweeps over the corpus", 300_000);
    let pairs = corpus(seed, CORPUS_TARGET);
    let cap = pseudo::DEFAULT_BUDGET;
    let mut ds_violations = 0usize;
    let mut v23_violations = 0usize;
    let mut regular_violations = 0usize;
    let mut contrapositive_violations = 0usize;
    let mut proper_epis = 0usize;
    for pair in &pairs {
        let dom = dominion(&pair.s, &pair.u).expect("subsemigroup");
        let proper = pair.u.len() != pair.s.order();
        let epi = dom.len() == pair.s.order();
        if !(proper && epi) {
            continue;
        }
        proper_epis += 1;
        let g = GreenData::compute(&pair.s);
        if pseudo::in_ds(&pair.s, &g) {
            ds_violations += 1;
            b.note(format!("DS violation on {}", pair.name));
        }
        let (u_sg, _) = pair.s.induced(&pair.u).expect("subsemigroup");
        let in_v1 = pseudo::in_v1(&u_sg, cap).unwrap().holds();
        let in_v2 = pseudo::in_v2(&u_sg, cap).unwrap().holds();
        let in_v3 = pseudo::in_v3(&u_sg, cap).unwrap().holds();
        if in_v2 || in_v3 {
            v23_violations += 1;
            b.note(format!("V2/V3 violation on {}", pair.name));
        }
        if green::is_regular_semigroup(&u_sg) {
            regular_violations += 1;
            b.note(format!("regular-U violation on {}", pair.name));
        }
        if in_v1 || in_v2 || in_v3 {
            contrapositive_violations += 1;
        }
    }
    b.note(format!(
        "{proper_epis} proper epimorphic embeddings found in the corpus"
    ));
    b.check(
        "corpus contains a proper epimorphic embedding",
        proper_epis > 0,
    );
    b.check("no proper epi embedding with S in DS", ds_violations == 0);
    b.check(
        "no proper epi embedding with U in V2 or V3",
        v23_violations == 0,
    );
    b.check(
        "no proper epi embedding with U regular",
        regular_violations == 0,
    );
    b.check(
        "every proper epi embedding has U outside V1, V2, V3",
        contrapositive_violations == 0,
    );
    b.finish()
}

/// Criterion 8: property suites (J-maximal regularity, local dominions,
/// the location theorem, and the amalgam postconditions).
pub fn criterion8(seed: u64) -> CriterionOutcome {
    let mut b = Builder::new(8, "property suites over the corpus", 300_000);
    let pairs = corpus(seed, CORPUS_TARGET);

    // location theorem, exhaustively, on each distinct corpus semigroup
    let mut mc_ok = true;
    let mut seen_tables = std::collections::HashSet::new();
    for pair in &pairs {
        if !seen_tables.insert(pair.s.rows()) {
            continue;
        }
        let g = GreenData::compute(&pair.s);
        if !green::miller_clifford_check(&pair.s, &g).is_empty() {
            mc_ok = false;
            b.note(format!("location theorem violated on {}", pair.name));
        }
    }
    b.check("location theorem holds on every corpus semigroup", mc_ok);

    let mut jmax_regular_ok = true;
    let mut local_dominion_ok = true;
    for pair in &pairs {
        let dom = dominion(&pair.s, &pair.u).expect("subsemigroup");
        let proper = pair.u.len() != pair.s.order();
        let epi = dom.len() == pair.s.order();
        if !(proper && epi) {
            continue;
        }
        // every J-maximal element of S∖U is regular
        let g = GreenData::compute(&pair.s);
        let complement: Subset = pair.s.elements().filter(|&x| !pair.u.contains(x)).collect();
        let maximal = green::j_maximal(&pair.s, &g, &complement);
        if !maximal
            .iter()
            .all(|&d| green::is_regular_element(&pair.s, d))
        {
            jmax_regular_ok = false;
            b.note(format!("non-regular J-maximal element on {}", pair.name));
        }
        // Dom(EUE, ESE) = ESE
        let eue = green::compute_eue(&pair.s, &pair.u).expect("subsemigroup");
        let ese = green::compute_ese(&pair.s, &pair.u).expect("subsemigroup");
        let (ese_sg, back) = pair.s.induced(&ese).expect("closed");
        let eue_inside: Subset = eue
            .iter()
            .map(|&x| back.iter().position(|&v| v == x).expect("EUE inside ESE"))
            .collect();
        let local = dominion(&ese_sg, &eue_inside).expect("subsemigroup");
        if local.len() != ese_sg.order() {
            local_dominion_ok = false;
            b.note(format!("local dominion not full on {}", pair.name));
        }
    }
    b.check(
        "J-maximal elements outside U are regular whenever the embedding is epi",
        jmax_regular_ok,
    );
    b.check(
        "Dom(EUE, ESE) = ESE on every epi instance",
        local_dominion_ok,
    );

    // amalgam postconditions
    let mut eligible = 0usize;
    let mut amalgam_ok = true;
    for pair in &pairs {
        let Ok(am) = amalgam(&pair.s, &pair.u) else {
            continue;
        };
        eligible += 1;
        let phi_emb = is_embedding(&am.phi, &pair.s, &am.w);
        let psi_emb = is_embedding(&am.psi, &pair.s, &am.w);
        let agree_exactly = pair
            .s
            .elements()
            .all(|x| (am.phi[x] == am.psi[x]) == am.v.contains(x));
        let u_in_v = pair.u.is_subset_of(&am.v);
        let dom = dominion(&pair.s, &pair.u).expect("subsemigroup");
        let dom_inside_v = dom.iter().all(|&d| am.v.contains(d));
        if !(phi_emb && psi_emb && agree_exactly && u_in_v && dom_inside_v) {
            amalgam_ok = false;
            b.note(format!("amalgam postcondition failed on {}", pair.name));
        }
    }
    b.note(format!("{eligible} amalgam-eligible corpus instances"));
    b.check("at least 20 amalgam-eligible instances", eligible >= 20);
    b.check(
        "amalgam postconditions hold on every eligible instance",
        amalgam_ok,
    );
    b.finish()
}

fn skipped(id: usize, title: &str) -> CriterionOutcome {
    CriterionOutcome {
        id,
        title: title.to_string(),
        checks: Vec::new(),
        notes: vec!["skipped".into()],
        millis: 0,
        budget_millis: 0,
        skipped: true,
    }
}

/// Runs the whole suite; `quick` skips the heavyweight 4-state pipeline.
pub fn run_all(quick: bool, seed: u64) -> Vec<CriterionOutcome> {
    let mut out = vec![criterion1(), criterion2(), criterion3()];
    if quick {
        out.push(skipped(4, "4-state automaton enlargement pipeline"));
    } else {
        out.push(criterion4());
    }
    out.push(criterion5());
    out.push(criterion6(seed));
    out.push(criterion7(seed));
    out.push(criterion8(seed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_known_dominions() {
        let b2 = catalog::b2();
        assert_eq!(oracle_dominion(&b2, &catalog::y_in_b2()), b2.full_subset());
        let ab = b2.subset([2]).unwrap();
        assert_eq!(oracle_dominion(&b2, &ab), ab);
        let ab0 = b2.subset([2, 4]).unwrap();
        let dom = dominion(&b2, &ab0).unwrap();
        assert_eq!(oracle_dominion(&b2, &ab0), dom);
    }
}
