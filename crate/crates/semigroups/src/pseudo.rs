//! ω-terms, pseudoidentity satisfaction, and the membership predicates for
//! the pseudovarieties used throughout the crate.
//!
//! Evaluation is exhaustive over all assignments, with an explicit budget
//! and a hard error on overflow — a `true` answer is always a proof, never
//! a sample. Assignments are enumerated in odometer order over element
//! indices (first variable most significant) so counterexamples are
//! reproducible. ω-terms evaluate exactly as written; no normalization such
//! as collapsing nested ω-powers is applied.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::green::{self, GreenData};
use crate::semigroup::FiniteSemigroup;

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// A term over binary product and ω-power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Prod(Box<Term>, Box<Term>),
    Omega(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }

    /// Left-associated product of several terms.
    pub fn product(terms: Vec<Term>) -> Term {
        let mut it = terms.into_iter();
        let first = it.next().expect("nonempty product");
        it.fold(first, Term::prod)
    }

    pub fn omega(t: Term) -> Term {
        Term::Omega(Box::new(t))
    }

    /// `t^{ω+1}`, sugar for `t^ω · t`.
    pub fn omega_plus_one(t: Term) -> Term {
        Term::prod(Term::omega(t.clone()), t)
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Prod(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Omega(t) => t.collect_vars(out),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Prod(a, b) => {
                write!(f, "{a}")?;
                match **b {
                    Term::Prod(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            Term::Omega(t) => match **t {
                Term::Var(_) => write!(f, "{t}^w"),
                _ => write!(f, "({t})^w"),
            },
        }
    }
}

/// An equation `lhs = rhs` between ω-terms over an ordered variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudoidentity {
    pub lhs: Term,
    pub rhs: Term,
    pub variables: Vec<String>,
}

impl Pseudoidentity {
    /// Variable order: first occurrence left to right, lhs before rhs.
    pub fn new(lhs: Term, rhs: Term) -> Pseudoidentity {
        let mut variables = lhs.variables();
        for v in rhs.variables() {
            if !variables.contains(&v) {
                variables.push(v);
            }
        }
        Pseudoidentity {
            lhs,
            rhs,
            variables,
        }
    }
}

impl std::fmt::Display for Pseudoidentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Evaluates a term under an assignment of elements to variables.
pub fn eval_term(
    s: &FiniteSemigroup,
    term: &Term,
    assignment: &HashMap<String, usize>,
) -> Result<usize> {
    match term {
        Term::Var(v) => assignment
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Term::Prod(a, b) => {
            let x = eval_term(s, a, assignment)?;
            let y = eval_term(s, b, assignment)?;
            Ok(s.mul(x, y))
        }
        Term::Omega(t) => {
            let x = eval_term(s, t, assignment)?;
            Ok(green::omega_power(s, x))
        }
    }
}

/// Outcome of an exhaustive satisfaction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    /// The canonically first counterexample, listed in the identity's
    /// variable order.
    Counterexample(Vec<usize>),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }
}

// compiled form: variables as indices, omega via a table
enum Compiled {
    Var(usize),
    Prod(Box<Compiled>, Box<Compiled>),
    Omega(Box<Compiled>),
}

fn compile(term: &Term, vars: &[String]) -> Result<Compiled> {
    Ok(match term {
        Term::Var(v) => Compiled::Var(
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        ),
        Term::Prod(a, b) => {
            Compiled::Prod(Box::new(compile(a, vars)?), Box::new(compile(b, vars)?))
        }
        Term::Omega(t) => Compiled::Omega(Box::new(compile(t, vars)?)),
    })
}

fn eval_compiled(
    s: &FiniteSemigroup,
    omega: &[usize],
    c: &Compiled,
    assignment: &[usize],
) -> usize {
    match c {
        Compiled::Var(i) => assignment[*i],
        Compiled::Prod(a, b) => s.mul(
            eval_compiled(s, omega, a, assignment),
            eval_compiled(s, omega, b, assignment),
        ),
        Compiled::Omega(t) => omega[eval_compiled(s, omega, t, assignment)],
    }
}

/// Exhaustively checks a pseudoidentity over all assignments. Errors with
/// [`Error::BudgetExceeded`] when `|S|^k > cap`; never samples.
pub fn satisfies(s: &FiniteSemigroup, id: &Pseudoidentity, cap: u128) -> Result<Satisfaction> {
    let n = s.order();
    let k = id.variables.len();
    let mut needed: u128 = 1;
    for _ in 0..k {
        needed = needed.saturating_mul(n as u128);
    }
    if needed > cap {
        return Err(Error::BudgetExceeded { needed, cap });
    }
    let lhs = compile(&id.lhs, &id.variables)?;
    let rhs = compile(&id.rhs, &id.variables)?;
    let omega: Vec<usize> = s.elements().map(|x| green::omega_power(s, x)).collect();

    let mut assignment = vec![0usize; k];
    loop {
        if eval_compiled(s, &omega, &lhs, &assignment)
            != eval_compiled(s, &omega, &rhs, &assignment)
        {
            return Ok(Satisfaction::Counterexample(assignment));
        }
        // odometer: last variable fastest, so assignments are lexicographic
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(Satisfaction::Holds);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < n {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

fn exf() -> (Term, Term, Term) {
    let e = Term::omega(Term::var("t"));
    let f = Term::omega(Term::var("z"));
    let exf = Term::product(vec![e.clone(), Term::var("x"), f.clone()]);
    (e, f, exf)
}

/// `(exf)^{ω+1} = exf` with `e = t^ω`, `f = z^ω`.
pub fn v1_identity() -> Pseudoidentity {
    let (_, _, exf) = exf();
    let id = Pseudoidentity::new(Term::omega_plus_one(exf.clone()), exf);
    reorder_xtz(id)
}

/// `exf·(ef)^ω = exf`.
pub fn v2_identity() -> Pseudoidentity {
    let (e, f, exf) = exf();
    let id = Pseudoidentity::new(Term::prod(exf.clone(), Term::omega(Term::prod(e, f))), exf);
    reorder_xtz(id)
}

/// `(ef)^ω·exf = exf`.
pub fn v3_identity() -> Pseudoidentity {
    let (e, f, exf) = exf();
    let id = Pseudoidentity::new(Term::prod(Term::omega(Term::prod(e, f)), exf.clone()), exf);
    reorder_xtz(id)
}

fn reorder_xtz(mut id: Pseudoidentity) -> Pseudoidentity {
    id.variables = vec!["x".into(), "t".into(), "z".into()];
    id
}

pub fn in_v1(s: &FiniteSemigroup, cap: u128) -> Result<Satisfaction> {
    satisfies(s, &v1_identity(), cap)
}

pub fn in_v2(s: &FiniteSemigroup, cap: u128) -> Result<Satisfaction> {
    satisfies(s, &v2_identity(), cap)
}

pub fn in_v3(s: &FiniteSemigroup, cap: u128) -> Result<Satisfaction> {
    satisfies(s, &v3_identity(), cap)
}

/// The three defining identities of the pseudovariety generated by `Y`:
/// `x³ = x²`, `xyx = x²y²`, `x²y² = y²x²`.
pub fn vy_identities() -> Vec<Pseudoidentity> {
    let x = || Term::var("x");
    let y = || Term::var("y");
    let xx = || Term::prod(x(), x());
    let yy = || Term::prod(y(), y());
    vec![
        Pseudoidentity::new(Term::product(vec![x(), x(), x()]), xx()),
        Pseudoidentity::new(Term::product(vec![x(), y(), x()]), Term::prod(xx(), yy())),
        Pseudoidentity::new(Term::prod(xx(), yy()), Term::prod(yy(), xx())),
    ]
}

/// Conjunction of the three Y-identities; the first failing identity's
/// counterexample is reported.
pub fn in_vy(s: &FiniteSemigroup, cap: u128) -> Result<Satisfaction> {
    for id in vy_identities() {
        match satisfies(s, &id, cap)? {
            Satisfaction::Holds => {}
            c => return Ok(c),
        }
    }
    Ok(Satisfaction::Holds)
}

/// Membership in DS: every regular D-class is closed under multiplication.
pub fn in_ds(s: &FiniteSemigroup, green: &GreenData) -> bool {
    ds_violation(s, green).is_none()
}

/// First pair `(a, b)` in a regular D-class whose product leaves the class.
pub fn ds_violation(s: &FiniteSemigroup, green: &GreenData) -> Option<(usize, usize)> {
    for (c, eb) in green.eggboxes.iter().enumerate() {
        if !green.regular_j[c] {
            continue;
        }
        let members: Vec<usize> = eb
            .cells
            .iter()
            .flat_map(|row| row.iter().flatten().copied())
            .collect();
        for &a in &members {
            for &b in &members {
                if green.j_class[s.mul(a, b)] != c {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Textual term syntax: juxtaposition for product, `^w` for ω-power,
/// `^w+1` for `t^ω·t`, parentheses for grouping, single-character variables.
pub fn parse_term(input: &str) -> Result<Term> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let t = parse_product(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::Parse(format!(
            "unexpected {:?} at offset {pos}",
            chars[pos]
        )));
    }
    Ok(t)
}

fn parse_product(chars: &[char], pos: &mut usize) -> Result<Term> {
    let mut factors = Vec::new();
    while *pos < chars.len() && chars[*pos] != ')' && chars[*pos] != '=' {
        factors.push(parse_factor(chars, pos)?);
    }
    if factors.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    Ok(Term::product(factors))
}

fn parse_factor(chars: &[char], pos: &mut usize) -> Result<Term> {
    let mut base = match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let t = parse_product(chars, pos)?;
            if chars.get(*pos) != Some(&')') {
                return Err(Error::Parse("unbalanced parenthesis".into()));
            }
            *pos += 1;
            t
        }
        Some(&c) if c.is_ascii_alphabetic() && c != '^' => {
            *pos += 1;
            Term::Var(c.to_string())
        }
        other => return Err(Error::Parse(format!("unexpected {other:?}"))),
    };
    while chars.get(*pos) == Some(&'^') {
        if chars.get(*pos + 1) != Some(&'w') {
            return Err(Error::Parse("expected w after ^".into()));
        }
        *pos += 2;
        if chars.get(*pos) == Some(&'+') && chars.get(*pos + 1) == Some(&'1') {
            *pos += 2;
            base = Term::omega_plus_one(base);
        } else {
            base = Term::omega(base);
        }
    }
    Ok(base)
}

/// Parses `lhs = rhs`.
pub fn parse_identity(input: &str) -> Result<Pseudoidentity> {
    let mut parts = input.splitn(2, '=');
    let lhs = parts
        .next()
        .ok_or_else(|| Error::Parse("missing left-hand side".into()))?;
    let rhs = parts
        .next()
        .ok_or_else(|| Error::Parse("identities look like lhs = rhs".into()))?;
    Ok(Pseudoidentity::new(parse_term(lhs)?, parse_term(rhs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn assign(pairs: &[(&str, usize)]) -> HashMap<String, usize> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let b2 = catalog::b2();
        let xw = Term::omega(Term::var("x"));
        assert_eq!(eval_term(&b2, &xw, &assign(&[("x", 0)])).unwrap(), 4); // a^ω = 0
        let xy = Term::prod(Term::var("x"), Term::var("y"));
        assert_eq!(
            eval_term(&b2, &xy, &assign(&[("x", 0), ("y", 1)])).unwrap(),
            2
        ); // ab
        assert_eq!(
            eval_term(&b2, &Term::var("x"), &assign(&[("x", 3)])).unwrap(),
            3
        );
        assert!(matches!(
            eval_term(&b2, &xy, &assign(&[("x", 0)])),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn eval_is_compositional() {
        let s = catalog::y();
        for x in s.elements() {
            for y in s.elements() {
                let a = assign(&[("x", x), ("y", y)]);
                let t = Term::prod(Term::var("x"), Term::var("y"));
                assert_eq!(eval_term(&s, &t, &a).unwrap(), s.mul(x, y));
                let w = Term::omega(t);
                assert!(s.is_idempotent(eval_term(&s, &w, &a).unwrap()));
            }
        }
    }

    #[test]
    fn satisfies_examples() {
        let y = catalog::y();
        let cube = parse_identity("xxx = xx").unwrap();
        assert!(satisfies(&y, &cube, DEFAULT_BUDGET).unwrap().holds());

        let b2 = catalog::b2();
        let id = parse_identity("xyx = xxyy").unwrap();
        match satisfies(&b2, &id, DEFAULT_BUDGET).unwrap() {
            Satisfaction::Counterexample(a) => assert_eq!(a, vec![0, 1]), // x=a, y=b
            _ => panic!("expected counterexample"),
        }

        let t = catalog::trivial();
        assert!(satisfies(&t, &id, DEFAULT_BUDGET).unwrap().holds());
    }

    #[test]
    fn budget_is_enforced() {
        let b2 = catalog::b2();
        let id = parse_identity("xyz = zyx").unwrap();
        assert!(matches!(
            satisfies(&b2, &id, 100),
            Err(Error::BudgetExceeded {
                needed: 125,
                cap: 100
            })
        ));
    }

    #[test]
    fn y_fails_all_three_vi() {
        let y = catalog::y();
        assert!(!in_v1(&y, DEFAULT_BUDGET).unwrap().holds());
        assert!(!in_v2(&y, DEFAULT_BUDGET).unwrap().holds());
        assert!(!in_v3(&y, DEFAULT_BUDGET).unwrap().holds());
        // the concrete witness x↦a, t↦ab, z↦ba: exf = a, (exf)^{ω+1} = 0
        let a = assign(&[("x", 0), ("t", 1), ("z", 2)]);
        let id = v1_identity();
        let lhs = eval_term(&y, &id.lhs, &a).unwrap();
        let rhs = eval_term(&y, &id.rhs, &a).unwrap();
        assert_eq!(rhs, 0); // exf = a
        assert_eq!(lhs, 3); // zero of Y
    }

    #[test]
    fn groups_satisfy_all_three_vi() {
        for g in [catalog::c3(), catalog::trivial()] {
            assert!(in_v1(&g, DEFAULT_BUDGET).unwrap().holds());
            assert!(in_v2(&g, DEFAULT_BUDGET).unwrap().holds());
            assert!(in_v3(&g, DEFAULT_BUDGET).unwrap().holds());
        }
    }

    #[test]
    fn completely_regular_satisfies_all_three_vi() {
        // a semilattice, groups, and left/right-zero bands
        let semilattice = FiniteSemigroup::new(vec![vec![0, 1], vec![1, 1]], None).unwrap();
        for s in [
            catalog::c3(),
            catalog::right_zero(3),
            catalog::left_zero(2),
            semilattice,
        ] {
            assert!(crate::green::is_completely_regular(&s));
            assert!(in_v1(&s, DEFAULT_BUDGET).unwrap().holds());
            assert!(in_v2(&s, DEFAULT_BUDGET).unwrap().holds());
            assert!(in_v3(&s, DEFAULT_BUDGET).unwrap().holds());
        }
    }

    #[test]
    fn ds_membership() {
        let b2 = catalog::b2();
        let g = GreenData::compute(&b2);
        assert!(!in_ds(&b2, &g));
        let (a, b) = ds_violation(&b2, &g).unwrap();
        assert_eq!(g.j_class[a], g.j_class[b]);
        assert_ne!(g.j_class[b2.mul(a, b)], g.j_class[a]);

        let y = catalog::y();
        let gy = GreenData::compute(&y);
        assert!(in_ds(&y, &gy));

        // a semilattice (chain of two idempotents) is in DS
        let semilattice = FiniteSemigroup::new(vec![vec![0, 1], vec![1, 1]], None).unwrap();
        let gs = GreenData::compute(&semilattice);
        assert!(in_ds(&semilattice, &gs));
    }

    #[test]
    fn vy_membership() {
        assert!(in_vy(&catalog::y(), DEFAULT_BUDGET).unwrap().holds());
        assert!(!in_vy(&catalog::b2(), DEFAULT_BUDGET).unwrap().holds());
    }

    #[test]
    fn identities_monotone_under_subsemigroups() {
        let b2 = catalog::b2();
        let ids = [
            v1_identity(),
            v2_identity(),
            v3_identity(),
            parse_identity("xxx = xx").unwrap(),
        ];
        // enumerate subsemigroups of B2
        for bits in 1u32..(1 << 5) {
            let sub: crate::semigroup::Subset = (0..5).filter(|i| bits & (1 << i) != 0).collect();
            if !b2.is_subsemigroup(&sub) {
                continue;
            }
            let (u, _) = b2.induced(&sub).unwrap();
            for id in &ids {
                if satisfies(&b2, id, DEFAULT_BUDGET).unwrap().holds() {
                    assert!(satisfies(&u, id, DEFAULT_BUDGET).unwrap().holds());
                }
            }
        }
    }

    #[test]
    fn term_parser() {
        let t = parse_term("(exf)^w+1").unwrap();
        assert_eq!(
            t,
            Term::omega_plus_one(Term::product(vec![
                Term::var("e"),
                Term::var("x"),
                Term::var("f")
            ]))
        );
        let id = parse_identity("x^w x = x^w+1").unwrap();
        assert_eq!(id.variables, vec!["x".to_string()]);
        assert_eq!(
            id.lhs,
            Term::prod(Term::omega(Term::var("x")), Term::var("x"))
        );
        assert_eq!(id.rhs, Term::omega_plus_one(Term::var("x")));
        assert!(parse_term("x(").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("x^2").is_err());
    }

    #[test]
    fn no_omega_normalization() {
        // Omega(Omega(t)) evaluates as written (the value happens to agree,
        // the tree is preserved)
        let t = parse_term("x^w^w").unwrap();
        assert_eq!(t, Term::omega(Term::omega(Term::var("x"))));
    }
}
