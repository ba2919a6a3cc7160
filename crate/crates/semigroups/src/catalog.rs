//! Fixed reference semigroups, semiautomata, and Rees matrix data used by
//! the test suites and addressable from the CLI as `@name`.

use crate::construct::ReesMatrixSpec;
use crate::semigroup::{FiniteSemigroup, Subset};
use crate::transform::{PartialTransformation, Semiautomaton};

/// The 5-element aperiodic Brandt semigroup
/// `⟨a,b | aba=a, bab=b, a²=b²=0⟩`, elements `a, b, ab, ba, 0` in that order.
pub fn b2() -> FiniteSemigroup {
    let (a, b, ab, ba, z) = (0usize, 1, 2, 3, 4);
    let table = vec![
        vec![z, ab, z, a, z], // a·_
        vec![ba, z, b, z, z], // b·_
        vec![a, z, ab, z, z], // ab·_
        vec![z, b, z, ba, z], // ba·_
        vec![z, z, z, z, z],  // 0·_
    ];
    let labels = ["a", "b", "ab", "ba", "0"].map(String::from).to_vec();
    FiniteSemigroup::new(table, Some(labels)).expect("fixed table")
}

/// The subsemigroup `{ab, a, ba, 0} = B₂ \ {b}` as indices of [`b2`].
pub fn y_in_b2() -> Subset {
    [0usize, 2, 3, 4].into_iter().collect()
}

/// `Y` as a standalone 4-element semigroup. Index map into [`b2`]:
/// `0↦a, 1↦ab, 2↦ba, 3↦0`.
pub fn y() -> FiniteSemigroup {
    let (s, _) = b2().induced(&y_in_b2()).expect("Y is closed");
    s
}

/// Cyclic group of order 3 with identity at index 0.
pub fn c3() -> FiniteSemigroup {
    let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    let labels = ["1", "g", "g^2"].map(String::from).to_vec();
    FiniteSemigroup::new(table, Some(labels)).expect("fixed table")
}

/// The one-element semigroup.
pub fn trivial() -> FiniteSemigroup {
    FiniteSemigroup::new(vec![vec![0]], Some(vec!["e".into()])).expect("fixed table")
}

/// Null pair `{x, 0}` with `x² = 0`.
pub fn null_pair() -> FiniteSemigroup {
    let labels = ["x", "0"].map(String::from).to_vec();
    FiniteSemigroup::new(vec![vec![1, 1], vec![1, 1]], Some(labels)).expect("fixed table")
}

/// Three J-levels: `{x, y, 0}` with `x² = y` and all other products zero.
pub fn three_level() -> FiniteSemigroup {
    let labels = ["x", "y", "0"].map(String::from).to_vec();
    FiniteSemigroup::new(
        vec![vec![1, 2, 2], vec![2, 2, 2], vec![2, 2, 2]],
        Some(labels),
    )
    .expect("fixed table")
}

/// Right-zero semigroup of order `k` (`xy = y`).
pub fn right_zero(k: usize) -> FiniteSemigroup {
    assert!(k >= 1);
    let table = (0..k).map(|_| (0..k).collect()).collect();
    let labels = (0..k).map(|i| format!("r{i}")).collect();
    FiniteSemigroup::new(table, Some(labels)).expect("fixed table")
}

/// Left-zero semigroup of order `k` (`xy = x`).
pub fn left_zero(k: usize) -> FiniteSemigroup {
    assert!(k >= 1);
    let table = (0..k).map(|i| vec![i; k]).collect();
    let labels = (0..k).map(|i| format!("l{i}")).collect();
    FiniteSemigroup::new(table, Some(labels)).expect("fixed table")
}

/// The 4-state semiautomaton whose transition semigroup is the full
/// transformation monoid on four points: `a` is the 4-cycle, `b` the
/// transposition of the first two states, `c` a rank-3 idempotent.
pub fn t4_base() -> Semiautomaton {
    Semiautomaton::new(
        4,
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            PartialTransformation::total(&[1, 2, 3, 0]).unwrap(),
            PartialTransformation::total(&[1, 0, 2, 3]).unwrap(),
            PartialTransformation::total(&[1, 1, 2, 3]).unwrap(),
        ],
    )
    .expect("fixed automaton")
}

/// Three states, three letters, exactly one of which moves states (a
/// 3-cycle, deliberately not the canonical one so cycle modification has
/// something to do); the other two act as the identity.
pub fn q3a3() -> Semiautomaton {
    Semiautomaton::new(
        3,
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            PartialTransformation::total(&[2, 0, 1]).unwrap(),
            PartialTransformation::identity(3),
            PartialTransformation::identity(3),
        ],
    )
    .expect("fixed automaton")
}

/// `M⁰(2, {1}, 2, I)`: the Rees matrix presentation of [`b2`] over the
/// trivial group with the identity-pattern sandwich matrix.
pub fn b2_rees() -> ReesMatrixSpec {
    ReesMatrixSpec::new(
        2,
        trivial(),
        2,
        vec![vec![Some(0), None], vec![None, Some(0)]],
    )
    .expect("fixed spec")
}

/// `M⁰(4, C₃, 4, P)` with sandwich matrix rows
/// `(1,1,1,1), (0,g,0,0), (0,0,1,0), (0,0,0,1)`.
pub fn order49_rees() -> ReesMatrixSpec {
    let one = Some(0usize);
    let g = Some(1usize);
    ReesMatrixSpec::new(
        4,
        c3(),
        4,
        vec![
            vec![one, one, one, one],
            vec![None, g, None, None],
            vec![None, None, one, None],
            vec![None, None, None, one],
        ],
    )
    .expect("fixed spec")
}
