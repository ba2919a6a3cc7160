//! Finite semigroups as dense multiplication tables, plus subset and
//! quotient machinery.
//!
//! Elements are identified with their table index. All values are immutable
//! after construction, so they may be shared freely across threads.

use crate::error::{Error, Result};

/// Order up to which associativity is checked exhaustively at construction;
/// larger tables get a fixed deterministic sample of triples.
const ASSOC_EXHAUSTIVE_MAX: usize = 300;
const ASSOC_SAMPLE_TRIPLES: usize = 2_000_000;

/// A finite semigroup given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<u32>, // row-major, order*order entries
    labels: Option<Vec<String>>,
    identity: Option<usize>,
    zero: Option<usize>,
}

impl FiniteSemigroup {
    /// Validates and builds a semigroup from a square table of 0-based
    /// element indices. Identity and zero are detected by scan and cached.
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        order: n,
                    });
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(n, flat, labels)
    }

    /// Same as [`FiniteSemigroup::new`] but from a row-major flat table.
    pub fn from_flat(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::MalformedTable);
        }
        if let Some(ref ls) = labels {
            if ls.len() != order {
                return Err(Error::MalformedTable);
            }
            let mut seen = std::collections::HashSet::new();
            for l in ls {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
        }
        check_associativity(order, &table)?;
        Ok(Self::finish(order, table, labels))
    }

    /// Constructor for tables that are associative by construction
    /// (composition of functions, validated Rees products). A deterministic
    /// sample of triples is still checked in debug builds.
    pub(crate) fn from_flat_trusted(
        order: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(table.len(), order * order);
        debug_assert!(sample_associativity(order, &table).is_ok());
        Self::finish(order, table, labels)
    }

    fn finish(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Self {
        let mut s = FiniteSemigroup {
            order,
            table,
            labels,
            identity: None,
            zero: None,
        };
        s.identity = (0..order).find(|&e| (0..order).all(|x| s.mul(e, x) == x && s.mul(x, e) == x));
        s.zero = (0..order).find(|&z| (0..order).all(|x| s.mul(z, x) == z && s.mul(x, z) == z));
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Product of two elements by table lookup.
    #[inline(always)]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    /// Product in S^1: `self.order()` denotes the adjoined identity.
    #[inline(always)]
    pub fn mul1(&self, a: usize, b: usize) -> usize {
        if a == self.order {
            b
        } else if b == self.order {
            a
        } else {
            self.mul(a, b)
        }
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of an element (its index if no labels were given).
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) if i < ls.len() => ls[i].clone(),
            _ => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// Product of a nonempty word of element indices.
    pub fn eval_word(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.mul(acc, x)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.mul(i, j)).collect())
            .collect()
    }

    /// Returns S^1: a fresh identity is adjoined at index `order()`, even if
    /// the semigroup already is a monoid. Original indices are preserved.
    pub fn adjoin_identity(&self) -> FiniteSemigroup {
        let n = self.order;
        let m = n + 1;
        let mut table = vec![0u32; m * m];
        for a in 0..n {
            for b in 0..n {
                table[a * m + b] = self.table[a * n + b];
            }
        }
        for a in 0..m {
            table[a * m + n] = a as u32;
            table[n * m + a] = a as u32;
        }
        let labels = self.labels.as_ref().map(|ls| {
            let mut ls = ls.clone();
            let mut fresh = "1".to_string();
            while ls.contains(&fresh) {
                fresh.push('\'');
            }
            ls.push(fresh);
            ls
        });
        let mut s = FiniteSemigroup {
            order: m,
            table,
            labels,
            identity: Some(n),
            zero: self.zero,
        };
        // A previous zero is no longer absorbing only if it was also the
        // identity of a trivial semigroup; rescan to be exact.
        s.zero = (0..m).find(|&z| (0..m).all(|x| s.mul(z, x) == z && s.mul(x, z) == z));
        s
    }

    /// Builds a validated subset of this semigroup's elements.
    pub fn subset<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<Subset> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&x| x >= self.order) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                order: self.order,
            });
        }
        Ok(Subset { members: v })
    }

    pub fn full_subset(&self) -> Subset {
        Subset {
            members: (0..self.order).collect(),
        }
    }

    /// Smallest subset containing `seed` and closed under the table.
    pub fn closure(&self, seed: &Subset) -> Subset {
        assert!(!seed.is_empty(), "closure of an empty seed");
        let mut inside = vec![false; self.order];
        let mut list: Vec<usize> = Vec::new();
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for &x in seed.iter() {
            if !inside[x] {
                inside[x] = true;
                list.push(x);
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            // snapshot: products against everything currently inside
            for idx in 0..list.len() {
                let w = list[idx];
                for p in [self.mul(x, w), self.mul(w, x)] {
                    if !inside[p] {
                        inside[p] = true;
                        list.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        list.sort_unstable();
        Subset { members: list }
    }

    /// Checks closure under multiplication.
    pub fn is_subsemigroup(&self, x: &Subset) -> bool {
        self.subsemigroup_violation(x).is_none()
    }

    pub(crate) fn subsemigroup_violation(&self, x: &Subset) -> Option<(usize, usize, usize)> {
        for &a in x.iter() {
            for &b in x.iter() {
                let p = self.mul(a, b);
                if !x.contains(p) {
                    return Some((a, b, p));
                }
            }
        }
        None
    }

    /// The abstract semigroup carried by a subsemigroup, together with the
    /// map from new indices back to parent indices (ascending).
    pub fn induced(&self, x: &Subset) -> Result<(FiniteSemigroup, Vec<usize>)> {
        if let Some((a, b, p)) = self.subsemigroup_violation(x) {
            return Err(Error::NotASubsemigroup { a, b, product: p });
        }
        let members: Vec<usize> = x.iter().copied().collect();
        let mut pos = vec![usize::MAX; self.order];
        for (k, &m) in members.iter().enumerate() {
            pos[m] = k;
        }
        let k = members.len();
        let mut table = vec![0u32; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * k + j] = pos[self.mul(a, b)] as u32;
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| members.iter().map(|&m| ls[m].clone()).collect());
        Ok((
            FiniteSemigroup::from_flat_trusted(k, table, labels),
            members,
        ))
    }

    /// True iff S·X ∪ X·S ⊆ X.
    pub fn is_ideal(&self, x: &Subset) -> bool {
        self.ideal_violation(x).is_none()
    }

    fn ideal_violation(&self, x: &Subset) -> Option<(usize, usize, usize)> {
        for &i in x.iter() {
            for s in 0..self.order {
                let p = self.mul(s, i);
                if !x.contains(p) {
                    return Some((s, i, p));
                }
                let q = self.mul(i, s);
                if !x.contains(q) {
                    return Some((i, s, q));
                }
            }
        }
        None
    }

    /// Rees quotient by a nonempty ideal. Non-ideal elements keep their
    /// relative order at indices 0.., the collapsed ideal becomes the zero at
    /// the last index. Returns the quotient and the element map.
    pub fn rees_quotient(&self, ideal: &Subset) -> Result<(FiniteSemigroup, Vec<usize>)> {
        assert!(!ideal.is_empty(), "Rees quotient by an empty ideal");
        if let Some((s, x, product)) = self.ideal_violation(ideal) {
            return Err(Error::NotAnIdeal { s, x, product });
        }
        let survivors: Vec<usize> = (0..self.order).filter(|&x| !ideal.contains(x)).collect();
        let k = survivors.len();
        let zero = k; // collapsed class
        let mut map = vec![zero; self.order];
        for (i, &s) in survivors.iter().enumerate() {
            map[s] = i;
        }
        let m = k + 1;
        let mut table = vec![zero as u32; m * m];
        for (i, &a) in survivors.iter().enumerate() {
            for (j, &b) in survivors.iter().enumerate() {
                table[i * m + j] = map[self.mul(a, b)] as u32;
            }
        }
        // zero row/column already filled with zero
        let labels = self.labels.as_ref().map(|ls| {
            let mut out: Vec<String> = survivors.iter().map(|&s| ls[s].clone()).collect();
            let mut z = "0".to_string();
            while out.contains(&z) {
                z.push('\'');
            }
            out.push(z);
            out
        });
        Ok((FiniteSemigroup::from_flat_trusted(m, table, labels), map))
    }
}

fn check_associativity(n: usize, table: &[u32]) -> Result<()> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    if n <= ASSOC_EXHAUSTIVE_MAX {
        for i in 0..n {
            for j in 0..n {
                let ij = mul(i, j);
                for k in 0..n {
                    if mul(ij, k) != mul(i, mul(j, k)) {
                        return Err(Error::Associativity { i, j, k });
                    }
                }
            }
        }
        Ok(())
    } else {
        sample_associativity(n, table)
    }
}

fn sample_associativity(n: usize, table: &[u32]) -> Result<()> {
    let mul = |a: usize, b: usize| table[a * n + b] as usize;
    // splitmix64 stream, fixed seed: the sample is reproducible
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        (z ^ (z >> 31)) as usize
    };
    for _ in 0..ASSOC_SAMPLE_TRIPLES {
        let i = next() % n;
        let j = next() % n;
        let k = next() % n;
        if mul(mul(i, j), k) != mul(i, mul(j, k)) {
            return Err(Error::Associativity { i, j, k });
        }
    }
    Ok(())
}

/// An ordered, duplicate-free set of element indices of some parent
/// semigroup. Built through [`FiniteSemigroup::subset`] so membership is
/// validated against the parent's order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subset {
    members: Vec<usize>,
}

impl Subset {
    pub fn empty() -> Subset {
        Subset {
            members: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Membership mask over `0..order`.
    pub fn mask(&self, order: usize) -> Vec<bool> {
        let mut m = vec![false; order];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }
}

impl FromIterator<usize> for Subset {
    /// Unvalidated construction for internal use; prefer
    /// [`FiniteSemigroup::subset`] at the API boundary.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Subset { members: v }
    }
}

/// True iff `map` is a semigroup morphism from `s` to `t`.
pub fn is_morphism(map: &[usize], s: &FiniteSemigroup, t: &FiniteSemigroup) -> bool {
    if map.len() != s.order() || map.iter().any(|&v| v >= t.order()) {
        return false;
    }
    for x in s.elements() {
        for y in s.elements() {
            if map[s.mul(x, y)] != t.mul(map[x], map[y]) {
                return false;
            }
        }
    }
    true
}

/// Morphism and injective.
pub fn is_embedding(map: &[usize], s: &FiniteSemigroup, t: &FiniteSemigroup) -> bool {
    if !is_morphism(map, s, t) {
        return false;
    }
    let mut seen = vec![false; t.order()];
    for &v in map {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Bijective morphism.
pub fn is_isomorphism(map: &[usize], s: &FiniteSemigroup, t: &FiniteSemigroup) -> bool {
    s.order() == t.order() && is_embedding(map, s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn b2_is_valid_with_zero() {
        let b2 = catalog::b2();
        assert_eq!(b2.order(), 5);
        assert_eq!(b2.zero(), Some(4));
        assert_eq!(b2.identity(), None);
        // aba = a, bab = b, a^2 = b^2 = 0
        let (a, b, zero) = (0, 1, 4);
        assert_eq!(b2.eval_word(&[a, b, a]), Some(a));
        assert_eq!(b2.eval_word(&[b, a, b]), Some(b));
        assert_eq!(b2.mul(a, a), zero);
        assert_eq!(b2.mul(b, b), zero);
    }

    #[test]
    fn trivial_semigroup() {
        let t = FiniteSemigroup::new(vec![vec![0]], None).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.identity(), Some(0));
        assert_eq!(t.zero(), Some(0));
    }

    #[test]
    fn associativity_error_matches_brute_force() {
        // sweep all 16 binary operations on two elements; for each
        // non-associative one the constructor must report the first
        // violating triple in lexicographic scan order
        let mut nonassoc = 0;
        for code in 0..16u32 {
            let t = vec![
                vec![(code & 1) as usize, ((code >> 1) & 1) as usize],
                vec![((code >> 2) & 1) as usize, ((code >> 3) & 1) as usize],
            ];
            let mul = |a: usize, b: usize| t[a][b];
            let mut first = None;
            'scan: for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        if mul(mul(i, j), k) != mul(i, mul(j, k)) {
                            first = Some((i, j, k));
                            break 'scan;
                        }
                    }
                }
            }
            let got = FiniteSemigroup::new(t, None);
            match (first, got) {
                (None, Ok(_)) => {}
                (Some((i, j, k)), Err(Error::Associativity { i: a, j: b, k: c })) => {
                    nonassoc += 1;
                    assert_eq!((i, j, k), (a, b, c));
                }
                (expected, actual) => {
                    panic!("table {code:04b}: expected {expected:?}, got {actual:?}")
                }
            }
        }
        assert!(nonassoc > 0);
        // the specific table [[0,0],[1,0]] fails first at (1,0,1)
        let err = FiniteSemigroup::new(vec![vec![0, 0], vec![1, 0]], None).unwrap_err();
        match err {
            Error::Associativity { i, j, k } => assert_eq!((i, j, k), (1, 0, 1)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry() {
        let err = FiniteSemigroup::new(vec![vec![0, 2], vec![1, 0]], None).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { value: 2, .. }));
    }

    #[test]
    fn adjoin_identity_always_fresh() {
        let b2 = catalog::b2();
        let b21 = b2.adjoin_identity();
        assert_eq!(b21.order(), 6);
        assert_eq!(b21.identity(), Some(5));
        assert_eq!(b21.zero(), Some(4));

        let t = catalog::trivial();
        let t1 = t.adjoin_identity();
        assert_eq!(t1.order(), 2);
        assert_eq!(
            (0..2).filter(|&e| t1.is_idempotent(e)).count(),
            2,
            "both elements idempotent"
        );

        let c3 = catalog::c3();
        let c31 = c3.adjoin_identity();
        assert_eq!(c31.order(), 4);
        assert_eq!(
            c31.identity(),
            Some(3),
            "the fresh 1 is the designated identity"
        );
        // the old identity is still a local identity on the copy of C3
        for x in 0..3 {
            assert_eq!(c31.mul(0, x), x);
            assert_eq!(c31.mul(x, 0), x);
        }
    }

    #[test]
    fn closure_examples() {
        let b2 = catalog::b2();
        let a = b2.subset([0]).unwrap();
        assert_eq!(b2.closure(&a).as_slice(), &[0, 4]); // {a, 0}
        let ab = b2.subset([0, 1]).unwrap();
        assert_eq!(b2.closure(&ab).len(), 5); // a,b generate B2
        let all = b2.full_subset();
        assert_eq!(b2.closure(&all), all);
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        let b2 = catalog::b2();
        for bits in 1u32..(1 << 5) {
            let seed: Subset = (0..5).filter(|i| bits & (1 << i) != 0).collect();
            let c = b2.closure(&seed);
            assert_eq!(b2.closure(&c), c);
            for extra in 0..5 {
                let bigger: Subset = seed.iter().copied().chain([extra]).collect();
                assert!(c.is_subset_of(&b2.closure(&bigger)));
            }
        }
    }

    #[test]
    fn ideals_and_rees_quotient() {
        let b2 = catalog::b2();
        let zero_only = b2.subset([4]).unwrap();
        assert!(b2.is_ideal(&zero_only));
        let (q, map) = b2.rees_quotient(&zero_only).unwrap();
        // collapsing {0} reproduces B2 bit for bit
        assert_eq!(q.order(), 5);
        assert_eq!(q.rows(), b2.rows());
        assert_eq!(map, vec![0, 1, 2, 3, 4]);

        // {a, 0} is not an ideal: b*a = ba escapes
        let not_ideal = b2.subset([0, 4]).unwrap();
        assert!(!b2.is_ideal(&not_ideal));
        assert!(matches!(
            b2.rees_quotient(&not_ideal),
            Err(Error::NotAnIdeal { .. })
        ));

        // B2 is 0-simple: Y = {a,ab,ba,0} is not an ideal either (b*ab = b)
        let y = catalog::y_in_b2();
        assert!(!b2.is_ideal(&y));
        assert!(matches!(
            b2.rees_quotient(&y),
            Err(Error::NotAnIdeal { .. })
        ));
    }

    #[test]
    fn rees_quotient_of_three_level_chain() {
        // x^2 = y, all other products 0: collapsing {y, 0} leaves a null pair
        let s = catalog::three_level();
        let ideal = s.subset([1, 2]).unwrap();
        assert!(s.is_ideal(&ideal));
        let (q, map) = s.rees_quotient(&ideal).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.zero(), Some(1));
        assert_eq!(q.mul(0, 0), 1);
        assert_eq!(map, vec![0, 1, 1]);
    }

    #[test]
    fn quotient_map_is_surjective_morphism_injective_off_ideal() {
        let s = catalog::three_level();
        let ideal = s.subset([1, 2]).unwrap();
        let (q, map) = s.rees_quotient(&ideal).unwrap();
        assert!(is_morphism(&map, &s, &q));
        let mut hit = vec![false; q.order()];
        for &v in &map {
            hit[v] = true;
        }
        assert!(hit.into_iter().all(|b| b));
        for x in s.elements() {
            for y in s.elements() {
                if x != y && !ideal.contains(x) && !ideal.contains(y) {
                    assert_ne!(map[x], map[y]);
                }
            }
        }
    }

    #[test]
    fn morphism_and_embedding_checks() {
        let b2 = catalog::b2();
        let idmap: Vec<usize> = (0..5).collect();
        assert!(is_embedding(&idmap, &b2, &b2));
        assert!(is_isomorphism(&idmap, &b2, &b2));

        // Y -> B2 inclusion
        let (y, inc) = b2.induced(&catalog::y_in_b2()).unwrap();
        assert!(is_embedding(&inc, &y, &b2));

        // constant map to a non-idempotent is not a morphism
        let const_a = vec![0usize; 5];
        assert!(!is_morphism(&const_a, &b2, &b2));
    }
}
