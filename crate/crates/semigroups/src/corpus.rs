//! Seeded generation of the (S, U) test corpus: small abstract semigroups
//! drawn from subsemigroups of the full transformation monoids on three and
//! four points, the fixed catalog pairs, and a family of right-zero
//! semigroups (which feed the amalgam construction).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::semigroup::{FiniteSemigroup, Subset};
use crate::transform::PartialTransformation;

/// A named pair U ≤ S.
#[derive(Clone, Debug)]
pub struct CorpusPair {
    pub name: String,
    pub s: FiniteSemigroup,
    pub u: Subset,
}

/// All total transformations of degree `n` (T_n), as image vectors.
fn all_transformations(n: usize) -> Vec<Vec<usize>> {
    let count = n.pow(n as u32);
    (0..count)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect()
        })
        .collect()
}

/// Closes a set of transformations under composition, giving up when the
/// closure exceeds `cap` elements.
fn close_transformations(seed: &[Vec<usize>], cap: usize) -> Option<Vec<Vec<usize>>> {
    let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { f.iter().map(|&v| g[v]).collect() };
    let mut elems: Vec<Vec<usize>> = Vec::new();
    for t in seed {
        if !elems.contains(t) {
            elems.push(t.clone());
        }
    }
    let mut frontier = 0;
    while frontier < elems.len() {
        let cur = elems[frontier].clone();
        for i in 0..elems.len() {
            for prod in [compose(&cur, &elems[i]), compose(&elems[i], &cur)] {
                if !elems.contains(&prod) {
                    if elems.len() >= cap {
                        return None;
                    }
                    elems.push(prod);
                }
            }
        }
        frontier += 1;
    }
    Some(elems)
}

fn semigroup_from_transformations(elems: &[Vec<usize>]) -> FiniteSemigroup {
    let n = elems.len();
    let mut table = vec![0u32; n * n];
    for (i, f) in elems.iter().enumerate() {
        for (j, g) in elems.iter().enumerate() {
            let prod: Vec<usize> = f.iter().map(|&v| g[v]).collect();
            let k = elems.iter().position(|t| *t == prod).expect("closed");
            table[i * n + j] = k as u32;
        }
    }
    FiniteSemigroup::from_flat_trusted(n, table, None)
}

/// Every nonempty subset closed under multiplication.
fn all_subsemigroups(s: &FiniteSemigroup) -> Vec<Subset> {
    let n = s.order();
    let mut out = Vec::new();
    for bits in 1u64..(1 << n) {
        let sub: Subset = (0..n).filter(|i| bits & (1 << i) != 0).collect();
        if s.is_subsemigroup(&sub) {
            out.push(sub);
        }
    }
    out
}

/// Deterministic corpus of at least `target` pairs (U ≤ S) with |S| ≤ 6.
pub fn corpus(seed: u64, target: usize) -> Vec<CorpusPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CorpusPair> = Vec::new();

    // fixed catalog pairs
    let b2 = catalog::b2();
    for u in all_subsemigroups(&b2) {
        out.push(CorpusPair {
            name: format!("b2/{:?}", u.as_slice()),
            s: b2.clone(),
            u,
        });
    }
    let y = catalog::y();
    for u in all_subsemigroups(&y) {
        out.push(CorpusPair {
            name: format!("y/{:?}", u.as_slice()),
            s: y.clone(),
            u,
        });
    }
    for s in [catalog::c3(), catalog::null_pair(), catalog::three_level()] {
        for u in all_subsemigroups(&s) {
            out.push(CorpusPair {
                name: format!("fixed{}/{:?}", s.order(), u.as_slice()),
                s: s.clone(),
                u,
            });
        }
    }
    // right-zero semigroups: every subset is a subsemigroup, and proper
    // subsets are exactly the amalgam-eligible shape
    for k in 2..=4 {
        let s = catalog::right_zero(k);
        for u in all_subsemigroups(&s) {
            out.push(CorpusPair {
                name: format!("rz{k}/{:?}", u.as_slice()),
                s: s.clone(),
                u,
            });
        }
    }

    // random small subsemigroups of T3 and T4
    let t3 = all_transformations(3);
    let t4 = all_transformations(4);
    let mut attempts = 0usize;
    while out.len() < target && attempts < 100_000 {
        attempts += 1;
        let pool = if attempts % 2 == 0 { &t3 } else { &t4 };
        let k = rng.gen_range(1..=2);
        let seed_ts: Vec<Vec<usize>> = (0..k)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let Some(elems) = close_transformations(&seed_ts, 6) else {
            continue;
        };
        let s = semigroup_from_transformations(&elems);
        let name_base = format!("t{}#{attempts}", if attempts % 2 == 0 { 3 } else { 4 });
        for u in all_subsemigroups(&s) {
            out.push(CorpusPair {
                name: format!("{name_base}/{:?}", u.as_slice()),
                s: s.clone(),
                u,
            });
        }
    }
    out
}

/// Partial-transformation generator for property tests.
pub fn random_partial_transformation(rng: &mut ChaCha8Rng, degree: usize) -> PartialTransformation {
    let image: Vec<Option<usize>> = (0..degree)
        .map(|_| {
            let v = rng.gen_range(0..=degree);
            (v < degree).then_some(v)
        })
        .collect();
    PartialTransformation::new(degree, &image).expect("valid image")
}
