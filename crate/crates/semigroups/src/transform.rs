//! Partial transformations, semiautomata, and generation of transition
//! semigroups by breadth-first orbit closure.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, Subset};

const UNDEF: u32 = u32::MAX;

/// A partial transformation of `{0..degree-1}`, applied on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialTransformation {
    degree: usize,
    image: Vec<u32>, // UNDEF marks points outside the domain
}

impl PartialTransformation {
    pub fn new(degree: usize, image: &[Option<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyStateSet);
        }
        if image.len() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: image.len(),
            });
        }
        let mut raw = Vec::with_capacity(degree);
        for &v in image {
            match v {
                Some(q) if q < degree => raw.push(q as u32),
                Some(q) => {
                    return Err(Error::IndexOutOfRange {
                        index: q,
                        order: degree,
                    })
                }
                None => raw.push(UNDEF),
            }
        }
        Ok(PartialTransformation { degree, image: raw })
    }

    /// Total transformation from a full image vector.
    pub fn total(image: &[usize]) -> Result<Self> {
        let opts: Vec<Option<usize>> = image.iter().map(|&q| Some(q)).collect();
        Self::new(image.len(), &opts)
    }

    pub fn identity(degree: usize) -> Self {
        PartialTransformation {
            degree,
            image: (0..degree as u32).collect(),
        }
    }

    /// Identity restricted to a subset of points.
    pub fn partial_identity(degree: usize, domain: &[usize]) -> Self {
        let mut image = vec![UNDEF; degree];
        for &q in domain {
            image[q] = q as u32;
        }
        PartialTransformation { degree, image }
    }

    pub fn empty(degree: usize) -> Self {
        PartialTransformation {
            degree,
            image: vec![UNDEF; degree],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn apply(&self, q: usize) -> Option<usize> {
        let v = self.image[q];
        (v != UNDEF).then_some(v as usize)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.degree).filter(|&q| self.image[q] != UNDEF)
    }

    pub fn is_total(&self) -> bool {
        self.image.iter().all(|&v| v != UNDEF)
    }

    pub fn is_empty_map(&self) -> bool {
        self.image.iter().all(|&v| v == UNDEF)
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.degree];
        let mut r = 0;
        for &v in &self.image {
            if v != UNDEF && !seen[v as usize] {
                seen[v as usize] = true;
                r += 1;
            }
        }
        r
    }

    /// Number of points moved (defined and not fixed).
    pub fn moved_points(&self) -> usize {
        (0..self.degree)
            .filter(|&q| self.image[q] != UNDEF && self.image[q] as usize != q)
            .count()
    }

    /// Right composition: `(q)(self*g) = ((q)self)g`; undefined propagates.
    pub fn compose(&self, g: &PartialTransformation) -> Result<PartialTransformation> {
        if self.degree != g.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree,
            });
        }
        let image = self
            .image
            .iter()
            .map(|&v| {
                if v == UNDEF {
                    UNDEF
                } else {
                    g.image[v as usize]
                }
            })
            .collect();
        Ok(PartialTransformation {
            degree: self.degree,
            image,
        })
    }

    /// Restriction of the domain to the given points.
    pub fn restrict(&self, points: &[usize]) -> PartialTransformation {
        let mut image = vec![UNDEF; self.degree];
        for &q in points {
            image[q] = self.image[q];
        }
        PartialTransformation {
            degree: self.degree,
            image,
        }
    }

    pub fn to_options(&self) -> Vec<Option<usize>> {
        self.image
            .iter()
            .map(|&v| (v != UNDEF).then_some(v as usize))
            .collect()
    }
}

/// A finite semiautomaton: states, letters, and one partial transformation
/// per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semiautomaton {
    states: usize,
    alphabet: Vec<String>,
    action: Vec<PartialTransformation>,
}

impl Semiautomaton {
    pub fn new(
        states: usize,
        alphabet: Vec<String>,
        action: Vec<PartialTransformation>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::EmptyStateSet);
        }
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if alphabet.len() != action.len() {
            return Err(Error::MalformedTable);
        }
        let mut seen = std::collections::HashSet::new();
        for l in &alphabet {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for t in &action {
            if t.degree() != states {
                return Err(Error::DegreeMismatch {
                    left: states,
                    right: t.degree(),
                });
            }
        }
        Ok(Semiautomaton {
            states,
            alphabet,
            action,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn action(&self, letter: usize) -> &PartialTransformation {
        &self.action[letter]
    }

    pub fn actions(&self) -> &[PartialTransformation] {
        &self.action
    }

    pub fn is_complete(&self) -> bool {
        self.action.iter().all(|t| t.is_total())
    }

    /// Letters that move at least one state.
    pub fn moving_letters(&self) -> Vec<usize> {
        (0..self.alphabet.len())
            .filter(|&a| self.action[a].moved_points() > 0)
            .collect()
    }

    /// Letters acting as the (total) identity on the state set.
    pub fn identity_letters(&self) -> Vec<usize> {
        let id = PartialTransformation::identity(self.states);
        (0..self.alphabet.len())
            .filter(|&a| self.action[a] == id)
            .collect()
    }
}

/// A transition semigroup generated from a semiautomaton: the abstract
/// semigroup together with, for each element, its transformation and one
/// shortest witnessing word (letter indices).
#[derive(Clone, Debug)]
pub struct TransitionSemigroup {
    pub semigroup: FiniteSemigroup,
    pub transformations: Vec<PartialTransformation>,
    pub words: Vec<Vec<usize>>,
    index: HashMap<PartialTransformation, usize>,
    /// right Cayley table over the generators: `gen_succ[e][a]` = index of e·δ(a)
    gen_succ: Vec<Vec<usize>>,
    /// element index of each single-letter word
    gen_first: Vec<usize>,
}

impl TransitionSemigroup {
    pub fn index_of(&self, t: &PartialTransformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Element reached by a nonempty word of letter indices.
    pub fn element_of_word(&self, word: &[usize]) -> Option<usize> {
        let (&first, rest) = word.split_first()?;
        let mut e = self.gen_first[first];
        for &a in rest {
            e = self.gen_succ[e][a];
        }
        Some(e)
    }

    pub fn word_string(&self, aut: &Semiautomaton, e: usize) -> String {
        self.words[e]
            .iter()
            .map(|&a| aut.alphabet()[a].as_str())
            .collect()
    }
}

/// Semigroup of all distinct nonempty-word actions of a semiautomaton.
///
/// Breadth-first orbit closure over right multiplication by the generators;
/// elements are numbered in discovery order, which also yields one shortest
/// witnessing word per element (lexicographically first among shortest, in
/// alphabet order). The empty transformation, if reachable, is an ordinary
/// element and serves as the zero.
pub fn transition_semigroup(aut: &Semiautomaton) -> TransitionSemigroup {
    let gens = aut.actions();
    let mut index: HashMap<PartialTransformation, usize> = HashMap::new();
    let mut elems: Vec<PartialTransformation> = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();

    for (a, t) in gens.iter().enumerate() {
        if !index.contains_key(t) {
            index.insert(t.clone(), elems.len());
            elems.push(t.clone());
            words.push(vec![a]);
        }
    }

    let mut gen_succ: Vec<Vec<usize>> = Vec::new();
    let mut frontier = 0;
    while frontier < elems.len() {
        let cur = elems[frontier].clone();
        let mut row = Vec::with_capacity(gens.len());
        for (a, g) in gens.iter().enumerate() {
            let prod = cur.compose(g).expect("equal degrees");
            let id = match index.get(&prod) {
                Some(&id) => id,
                None => {
                    let id = elems.len();
                    index.insert(prod.clone(), id);
                    elems.push(prod);
                    let mut w = words[frontier].clone();
                    w.push(a);
                    words.push(w);
                    id
                }
            };
            row.push(id);
        }
        gen_succ.push(row);
        frontier += 1;
    }

    let n = elems.len();
    // full table by folding each column's word through the generator table
    let mut table = vec![0u32; n * n];
    for t in 0..n {
        let word = &words[t];
        let mut col: Vec<usize> = (0..n).map(|s| gen_succ[s][word[0]]).collect();
        for &a in &word[1..] {
            for v in col.iter_mut() {
                *v = gen_succ[*v][a];
            }
        }
        for s in 0..n {
            table[s * n + t] = col[s] as u32;
        }
    }

    let labels = {
        let mut ls: Vec<String> = words
            .iter()
            .map(|w| w.iter().map(|&a| aut.alphabet()[a].as_str()).collect())
            .collect();
        // words are distinct by construction, but guard anyway
        let mut seen = std::collections::HashSet::new();
        let mut ok = true;
        for l in &ls {
            if !seen.insert(l.clone()) {
                ok = false;
            }
        }
        if !ok {
            ls = (0..n).map(|i| format!("w{i}")).collect();
        }
        ls
    };

    let semigroup = FiniteSemigroup::from_flat_trusted(n, table, Some(labels));
    let gen_first: Vec<usize> = aut.actions().iter().map(|t| index[t]).collect();
    TransitionSemigroup {
        semigroup,
        transformations: elems,
        words,
        index,
        gen_succ,
        gen_first,
    }
}

/// The Cayley semiautomaton of a semigroup with respect to a generating set:
/// states are S^1 (the fresh identity is the last state), letters are the
/// generators, and each letter acts by right multiplication.
pub fn cayley_semiautomaton(s: &FiniteSemigroup, generators: &Subset) -> Result<Semiautomaton> {
    if generators.is_empty() || s.closure(generators).len() != s.order() {
        return Err(Error::NotGenerating);
    }
    let n = s.order();
    let mut alphabet = Vec::new();
    let mut action = Vec::new();
    for &g in generators.iter() {
        alphabet.push(s.label(g));
        let image: Vec<usize> = (0..=n).map(|state| s.mul1(state, g)).collect();
        action.push(PartialTransformation::total(&image)?);
    }
    Semiautomaton::new(n + 1, alphabet, action)
}

/// The explicit isomorphism sending each transition-semigroup element to the
/// evaluation of its witnessing word, for Cayley semiautomata. Returns the
/// map `T(A) -> S`.
pub fn cayley_word_map(
    s: &FiniteSemigroup,
    generators: &Subset,
    ts: &TransitionSemigroup,
) -> Vec<usize> {
    let gens: Vec<usize> = generators.iter().copied().collect();
    ts.words
        .iter()
        .map(|w| {
            let letters: Vec<usize> = w.iter().map(|&a| gens[a]).collect();
            s.eval_word(&letters).expect("nonempty word")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::semigroup::is_isomorphism;

    #[test]
    fn compose_basics() {
        let id = PartialTransformation::identity(4);
        let g = PartialTransformation::total(&[1, 2, 3, 0]).unwrap();
        assert_eq!(id.compose(&g).unwrap(), g);
        let e = PartialTransformation::empty(4);
        assert_eq!(e.compose(&g).unwrap(), e);
        let short = PartialTransformation::identity(3);
        assert!(matches!(
            g.compose(&short),
            Err(crate::error::Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn t4_base_generates_t4() {
        let aut = catalog::t4_base();
        let ts = transition_semigroup(&aut);
        assert_eq!(ts.semigroup.order(), 256);
        assert!(ts.transformations.iter().all(|t| t.is_total()));
    }

    #[test]
    fn single_identity_letter_gives_trivial_semigroup() {
        let aut = Semiautomaton::new(
            3,
            vec!["a".into()],
            vec![PartialTransformation::identity(3)],
        )
        .unwrap();
        let ts = transition_semigroup(&aut);
        assert_eq!(ts.semigroup.order(), 1);
    }

    #[test]
    fn three_cycle_generates_c3() {
        let aut = Semiautomaton::new(
            3,
            vec!["a".into()],
            vec![PartialTransformation::total(&[1, 2, 0]).unwrap()],
        )
        .unwrap();
        let ts = transition_semigroup(&aut);
        assert_eq!(ts.semigroup.order(), 3);
        assert!(ts.semigroup.identity().is_some());
    }

    #[test]
    fn cayley_representation_round_trip() {
        for (s, gens) in [
            (catalog::b2(), vec![0usize, 1]),
            (catalog::c3(), vec![1]),
            (catalog::trivial(), vec![0]),
            (catalog::y(), vec![0, 1, 2]),
        ] {
            let gens = s.subset(gens).unwrap();
            let aut = cayley_semiautomaton(&s, &gens).unwrap();
            assert_eq!(aut.states(), s.order() + 1);
            assert!(aut.is_complete());
            let ts = transition_semigroup(&aut);
            assert_eq!(ts.semigroup.order(), s.order());
            let map = cayley_word_map(&s, &gens, &ts);
            assert!(is_isomorphism(&map, &ts.semigroup, &s));
        }
    }

    #[test]
    fn cayley_rejects_non_generating_sets() {
        let b2 = catalog::b2();
        let gens = b2.subset([2]).unwrap(); // {ab} generates only {ab}
        assert!(matches!(
            cayley_semiautomaton(&b2, &gens),
            Err(crate::error::Error::NotGenerating)
        ));
    }

    #[test]
    fn c3_cayley_shapes() {
        let c3 = catalog::c3();
        let gens = c3.subset([1]).unwrap();
        let aut = cayley_semiautomaton(&c3, &gens).unwrap();
        assert_eq!(aut.states(), 4);
        assert_eq!(aut.alphabet().len(), 1);
        let ts = transition_semigroup(&aut);
        assert_eq!(ts.semigroup.order(), 3);
    }
}
