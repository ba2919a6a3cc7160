//! Exact dominion computation over the pair graph on S¹×S¹, zigzag
//! certificates (search, verification, normalization), epimorphic-embedding
//! predicates, the reduction to the top J-class, and the two-copy amalgam
//! that certifies non-epimorphisms.
//!
//! The pair graph has vertices (p, q) with an edge between (x·u, y) and
//! (x, u·y) for every x, y in S¹ and u in U. The product p·q is constant
//! along edges, so each fiber {(p, q) : pq = d} is a union of connected
//! components; d lies in Dom(U, S) exactly when (d, 1) and (1, d) are
//! connected. A single disjoint-set pass over all pairs answers every d at
//! once; per-element witnesses come from a BFS restricted to the fiber of d,
//! which yields a shortest flip chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{self, GreenData};
use crate::semigroup::{FiniteSemigroup, Subset};

struct Dsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    #[inline]
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    #[inline]
    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a as usize] < self.rank[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        if self.rank[a as usize] == self.rank[b as usize] {
            self.rank[a as usize] += 1;
        }
    }
}

fn ensure_subsemigroup(s: &FiniteSemigroup, u: &Subset) -> Result<()> {
    if u.is_empty() {
        return Err(Error::NotASubsemigroup {
            a: 0,
            b: 0,
            product: 0,
        });
    }
    if let Some((a, b, p)) = s.subsemigroup_violation(u) {
        return Err(Error::NotASubsemigroup { a, b, product: p });
    }
    Ok(())
}

/// `Dom(U, S)` by disjoint-set union over all of S¹×S¹.
pub fn dominion(s: &FiniteSemigroup, u: &Subset) -> Result<Subset> {
    ensure_subsemigroup(s, u)?;
    let n = s.order();
    let n1 = n + 1;
    let one = n;
    let mut dsu = Dsu::new(n1 * n1);
    // precomputed translates: xu[x] = x·u and uy[y] = u·y for the current u
    let mut xu = vec![0u32; n1];
    let mut uy = vec![0u32; n1];
    for &g in u.iter() {
        for x in 0..n1 {
            xu[x] = s.mul1(x, g) as u32;
            uy[x] = s.mul1(g, x) as u32;
        }
        for x in 0..n1 {
            let row_shrunk = xu[x] as usize * n1;
            let row = x * n1;
            for y in 0..n1 {
                dsu.union((row_shrunk + y) as u32, (row + uy[y] as usize) as u32);
            }
        }
    }
    let members = (0..n)
        .filter(|&d| dsu.find((d * n1 + one) as u32) == dsu.find((one * n1 + d) as u32))
        .collect();
    Ok(members)
}

/// One move in the pair graph. `(p, q)` is the source pair; a left shrink
/// moves `(x·u, y) → (x, u·y)` with `p = x·u, q = y`, a right shrink moves
/// `(x, u·y) → (x·u, y)` with `p = x, q = u·y`. Indices live in S¹, where
/// `S.order()` denotes the adjoined identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStep {
    pub p: usize,
    pub q: usize,
    pub x: usize,
    pub u: usize,
    pub y: usize,
    pub dir: FlipDir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlipDir {
    #[serde(rename = "L")]
    LeftShrink,
    #[serde(rename = "R")]
    RightShrink,
}

impl FlipStep {
    /// Target pair of the move.
    pub fn target(&self, s: &FiniteSemigroup) -> (usize, usize) {
        match self.dir {
            FlipDir::LeftShrink => (self.x, s.mul1(self.u, self.y)),
            FlipDir::RightShrink => (s.mul1(self.x, self.u), self.y),
        }
    }
}

/// Classic zigzag data: spine `(u₁, v₁, u₂, …, u_m)` of odd length `2m−1`
/// and interior factors `x₁..x_{m−1}`, `y₁..y_{m−1}` (with `x_m = y₀ = 1`
/// implicit). A length-1 zigzag is the degenerate `d = u₁ ∈ U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicZigzag {
    pub m: usize,
    pub spine: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

/// A verifiable witness that `d ∈ Dom(U, S)`: a chain of flips from
/// `(d, 1)` to `(1, d)`, plus the classic equation form when the chain's
/// alternation pattern yields one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagCertificate {
    pub d: usize,
    pub chain: Vec<FlipStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classic: Option<ClassicZigzag>,
}

/// Searches for a zigzag for `d` over `U` by BFS in the fiber of `d`.
/// Returns `None` iff `d ∉ Dom(U, S)` (respecting `restrict`). With
/// `restrict`, interior factors are drawn from `restrict ∪ {1}` and the
/// spine from `U ∩ restrict`.
pub fn zigzag_for(
    s: &FiniteSemigroup,
    u: &Subset,
    d: usize,
    restrict: Option<&Subset>,
) -> Result<Option<ZigzagCertificate>> {
    ensure_subsemigroup(s, u)?;
    if d >= s.order() {
        return Err(Error::IndexOutOfRange {
            index: d,
            order: s.order(),
        });
    }
    let n = s.order();
    let n1 = n + 1;
    let one = n;

    let spine_ok: Vec<usize> = match restrict {
        None => u.iter().copied().collect(),
        Some(r) => u.iter().copied().filter(|&g| r.contains(g)).collect(),
    };
    let factor_ok = |x: usize| -> bool { x == one || restrict.is_none_or(|r| r.contains(x)) };

    // division tables per spine element: left[p] = all x with x·u = p,
    // right[q] = all y with u·y = q (x, y restricted)
    let mut left_div: Vec<Vec<Vec<u32>>> = Vec::with_capacity(spine_ok.len());
    let mut right_div: Vec<Vec<Vec<u32>>> = Vec::with_capacity(spine_ok.len());
    for &g in &spine_ok {
        let mut left = vec![Vec::new(); n1];
        let mut right = vec![Vec::new(); n1];
        for x in 0..n1 {
            if factor_ok(x) {
                left[s.mul1(x, g)].push(x as u32);
                right[s.mul1(g, x)].push(x as u32);
            }
        }
        left_div.push(left);
        right_div.push(right);
    }

    let start = (d, one);
    let goal = (one, d);
    let key = |p: usize, q: usize| p * n1 + q;
    let mut seen: std::collections::HashMap<usize, Option<FlipStep>> =
        std::collections::HashMap::new();
    seen.insert(key(start.0, start.1), None);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    let mut found = start == goal;

    'bfs: while let Some((p, q)) = queue.pop_front() {
        let visit = |pair: (usize, usize),
                     step: FlipStep,
                     seen: &mut std::collections::HashMap<usize, Option<FlipStep>>,
                     queue: &mut std::collections::VecDeque<(usize, usize)>|
         -> bool {
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key(pair.0, pair.1)) {
                e.insert(Some(step));
                queue.push_back(pair);
                pair == goal
            } else {
                false
            }
        };
        for (gi, &g) in spine_ok.iter().enumerate() {
            // left shrinks: p = x·u
            for &x in &left_div[gi][p] {
                let step = FlipStep {
                    p,
                    q,
                    x: x as usize,
                    u: g,
                    y: q,
                    dir: FlipDir::LeftShrink,
                };
                if visit(step.target(s), step, &mut seen, &mut queue) {
                    found = true;
                    break 'bfs;
                }
            }
            // right shrinks: q = u·y
            for &y in &right_div[gi][q] {
                let step = FlipStep {
                    p,
                    q,
                    x: p,
                    u: g,
                    y: y as usize,
                    dir: FlipDir::RightShrink,
                };
                if visit(step.target(s), step, &mut seen, &mut queue) {
                    found = true;
                    break 'bfs;
                }
            }
        }
    }

    if !found {
        return Ok(None);
    }
    // reconstruct the chain backwards from the goal
    let mut chain = Vec::new();
    let mut cur = goal;
    while cur != start {
        let step = seen[&key(cur.0, cur.1)].expect("non-start vertices have parents");
        chain.push(step);
        cur = (step.p, step.q);
    }
    chain.reverse();
    let classic = chain_to_classic(s, u, d, &chain);
    let cert = ZigzagCertificate { d, chain, classic };
    debug_assert!(verify_zigzag(s, u, &cert).is_ok());
    Ok(Some(cert))
}

/// Merges consecutive same-direction flips (two left shrinks with witnesses
/// u then u' compose to a single one with witness u'·u) and reads the
/// classic equation system off the resulting strictly alternating chain.
/// Chains between (d, 1) and (1, d) always merge to the pattern
/// L(RL)^{m−1}, which is exactly the classic shape; `None` is returned only
/// for hand-built chains that fail it.
fn chain_to_classic(
    s: &FiniteSemigroup,
    u: &Subset,
    d: usize,
    chain: &[FlipStep],
) -> Option<ClassicZigzag> {
    if chain.is_empty() {
        return None;
    }
    let one = s.order();
    let mut merged: Vec<FlipStep> = Vec::new();
    for &step in chain {
        match merged.last_mut() {
            Some(prev) if prev.dir == step.dir => match step.dir {
                // (x'u'u, y) -> (x', u'u y): witness composes on the left
                FlipDir::LeftShrink => {
                    prev.u = s.mul1(step.u, prev.u);
                    prev.x = step.x;
                }
                // (x, u u' y') -> (x u u', y'): composes on the right
                FlipDir::RightShrink => {
                    prev.u = s.mul1(prev.u, step.u);
                    prev.y = step.y;
                }
            },
            _ => merged.push(step),
        }
    }
    let k = merged.len();
    if k % 2 == 0 {
        return None;
    }
    for (i, step) in merged.iter().enumerate() {
        let want = if i % 2 == 0 {
            FlipDir::LeftShrink
        } else {
            FlipDir::RightShrink
        };
        if step.dir != want {
            return None;
        }
    }
    let m = k.div_ceil(2);
    let mut spine = Vec::with_capacity(2 * m - 1);
    let mut xs = Vec::with_capacity(m - 1);
    let mut ys = Vec::with_capacity(m - 1);
    for (i, step) in merged.iter().enumerate() {
        if !u.contains(step.u) {
            return None; // merged witness escaped U (cannot happen for real U)
        }
        spine.push(step.u);
        if i % 2 == 0 {
            // left shrink: x_{i/2+1} = witness x (the final one must be 1)
            if i + 1 < k {
                if step.x == one {
                    return None;
                }
                xs.push(step.x);
            } else if step.x != one {
                return None;
            }
        } else {
            // right shrink: y_{(i+1)/2} = witness y
            if step.y == one {
                return None;
            }
            ys.push(step.y);
        }
    }
    let classic = ClassicZigzag {
        m,
        spine,
        x: xs,
        y: ys,
    };
    verify_classic(s, u, d, &classic).ok()?;
    Some(classic)
}

/// Builds the flip chain realizing a classic zigzag, giving a full
/// certificate from equation data (used for transcribing displayed
/// zigzags).
pub fn certificate_from_classic(
    s: &FiniteSemigroup,
    d: usize,
    classic: ClassicZigzag,
) -> ZigzagCertificate {
    let one = s.order();
    let m = classic.m;
    let mut chain = Vec::with_capacity(2 * m - 1);
    let x_i = |i: usize| if i == m { one } else { classic.x[i - 1] }; // 1-based
    let y_i = |i: usize| if i == 0 { one } else { classic.y[i - 1] };
    let u_i = |i: usize| classic.spine[2 * i - 2];
    let v_i = |i: usize| classic.spine[2 * i - 1];
    let mut pair = (d, one);
    for i in 1..=m {
        let left = FlipStep {
            p: pair.0,
            q: pair.1,
            x: x_i(i),
            u: u_i(i),
            y: y_i(i - 1),
            dir: FlipDir::LeftShrink,
        };
        pair = left.target(s);
        chain.push(left);
        if i < m {
            let right = FlipStep {
                p: pair.0,
                q: pair.1,
                x: x_i(i),
                u: v_i(i),
                y: y_i(i),
                dir: FlipDir::RightShrink,
            };
            pair = right.target(s);
            chain.push(right);
        }
    }
    ZigzagCertificate {
        d,
        chain,
        classic: Some(classic),
    }
}

/// Where a certificate first fails verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigzagFailure {
    pub equation: String,
}

impl std::fmt::Display for ZigzagFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "zigzag invalid at {}", self.equation)
    }
}

fn fail(eq: impl Into<String>) -> std::result::Result<(), ZigzagFailure> {
    Err(ZigzagFailure {
        equation: eq.into(),
    })
}

/// Checks every certificate invariant by table lookups only, independently
/// of how the certificate was produced. Both the chain and, when present,
/// the classic form are validated.
pub fn verify_zigzag(
    s: &FiniteSemigroup,
    u: &Subset,
    cert: &ZigzagCertificate,
) -> std::result::Result<(), ZigzagFailure> {
    let n = s.order();
    let one = n;
    if cert.d >= n {
        return fail("d must be an element of S");
    }
    if cert.chain.is_empty() {
        return fail("chain must be nonempty");
    }
    let first = &cert.chain[0];
    if (first.p, first.q) != (cert.d, one) {
        return fail("chain must start at (d, 1)");
    }
    let mut cur = (cert.d, one);
    for (i, step) in cert.chain.iter().enumerate() {
        if (step.p, step.q) != cur {
            return fail(format!("step {i} does not continue the chain"));
        }
        for idx in [step.p, step.q, step.x, step.y] {
            if idx > n {
                return fail(format!("step {i} references an element outside S^1"));
            }
        }
        if !u.contains(step.u) {
            return fail(format!("step {i}: witness u not in U"));
        }
        let consistent = match step.dir {
            FlipDir::LeftShrink => s.mul1(step.x, step.u) == step.p && step.y == step.q,
            FlipDir::RightShrink => step.x == step.p && s.mul1(step.u, step.y) == step.q,
        };
        if !consistent {
            return fail(format!("step {i}: witness does not reproduce the pair"));
        }
        if s.mul1(step.p, step.q) != cert.d {
            return fail(format!("step {i}: pair product drifted from d"));
        }
        cur = step.target(s);
    }
    if cur != (one, cert.d) {
        return fail("chain must end at (1, d)");
    }
    if let Some(classic) = &cert.classic {
        verify_classic(s, u, cert.d, classic)?;
    }
    Ok(())
}

fn verify_classic(
    s: &FiniteSemigroup,
    u: &Subset,
    d: usize,
    classic: &ClassicZigzag,
) -> std::result::Result<(), ZigzagFailure> {
    let n = s.order();
    let m = classic.m;
    if m == 0 {
        return fail("classic length m must be at least 1");
    }
    if classic.spine.len() != 2 * m - 1 {
        return fail("spine must have length 2m-1");
    }
    if classic.x.len() != m - 1 || classic.y.len() != m - 1 {
        return fail("factor lists must have length m-1");
    }
    if classic.spine.iter().any(|&g| !u.contains(g)) {
        return fail("spine entries must lie in U");
    }
    if classic.x.iter().chain(classic.y.iter()).any(|&v| v >= n) {
        return fail("factors x_i, y_i must lie in S");
    }
    let u_i = |i: usize| classic.spine[2 * i - 2];
    let v_i = |i: usize| classic.spine[2 * i - 1];
    let x_i = |i: usize| classic.x[i - 1];
    let y_i = |i: usize| classic.y[i - 1];
    if m == 1 {
        if classic.spine[0] != d {
            return fail("u1 = d");
        }
        return Ok(());
    }
    if s.mul(x_i(1), u_i(1)) != d {
        return fail("d = x1*u1");
    }
    if s.mul(v_i(1), y_i(1)) != u_i(1) {
        return fail("u1 = v1*y1");
    }
    for i in 2..=m - 1 {
        if s.mul(x_i(i - 1), v_i(i - 1)) != s.mul(x_i(i), u_i(i)) {
            return fail(format!("x{}*v{} = x{}*u{}", i - 1, i - 1, i, i));
        }
        if s.mul(u_i(i), y_i(i - 1)) != s.mul(v_i(i), y_i(i)) {
            return fail(format!("u{}*y{} = v{}*y{}", i, i - 1, i, i));
        }
    }
    if s.mul(x_i(m - 1), v_i(m - 1)) != u_i(m) {
        return fail(format!("x{}*v{} = u{}", m - 1, m - 1, m));
    }
    if s.mul(u_i(m), y_i(m - 1)) != d {
        return fail(format!("u{}*y{} = d", m, m - 1));
    }
    Ok(())
}

/// Greedily strips U-prefixes from the `y_i` and U-suffixes from the `x_i`
/// of a classic zigzag (replacing `y_i = w·y'` by `y'` while absorbing `w`
/// into `v_i` and `u_{i+1}`, and dually), until no rewrite changes the
/// certificate. Tie-breaking is by least element index; only rewrites that
/// actually change a factor are applied, and the result is re-verified.
pub fn normalize_zigzag(
    s: &FiniteSemigroup,
    u: &Subset,
    cert: &ZigzagCertificate,
) -> Result<ZigzagCertificate> {
    if let Err(f) = verify_zigzag(s, u, cert) {
        return Err(Error::InvalidCertificate(f.equation));
    }
    let Some(mut classic) = cert.classic.clone() else {
        return Err(Error::InvalidCertificate(
            "normalization requires the classic form".into(),
        ));
    };
    let m = classic.m;
    let n = s.order();
    let in_u = u.mask(n);
    let mut budget = 16 + 64 * m * n; // safety cap; greedy loops terminate long before
    'outer: loop {
        if budget == 0 {
            break;
        }
        budget -= 1;
        for i in 0..m.saturating_sub(1) {
            // y_{i+1} = w·y' with w in U, y' in S∖U, y' != y_{i+1}
            let yi = classic.y[i];
            for &w in u.iter() {
                for yp in 0..n {
                    if !in_u[yp] && yp != yi && s.mul(w, yp) == yi {
                        classic.spine[2 * i + 1] = s.mul(classic.spine[2 * i + 1], w);
                        classic.spine[2 * i + 2] = s.mul(classic.spine[2 * i + 2], w);
                        classic.y[i] = yp;
                        continue 'outer;
                    }
                }
            }
        }
        for i in 0..m.saturating_sub(1) {
            // x_{i+1} = x'·w with w in U, x' in S∖U, x' != x_{i+1}
            let xi = classic.x[i];
            for &w in u.iter() {
                for xp in 0..n {
                    if !in_u[xp] && xp != xi && s.mul(xp, w) == xi {
                        classic.spine[2 * i] = s.mul(w, classic.spine[2 * i]);
                        classic.spine[2 * i + 1] = s.mul(w, classic.spine[2 * i + 1]);
                        classic.x[i] = xp;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    let out = certificate_from_classic(s, cert.d, classic);
    match verify_zigzag(s, u, &out) {
        Ok(()) => Ok(out),
        Err(f) => Err(Error::InvalidCertificate(format!(
            "normalization produced an invalid certificate: {}",
            f.equation
        ))),
    }
}

/// Whether `U` is epimorphically embedded in `S`.
#[derive(Clone, Debug)]
pub struct EpiEmbedding {
    pub epi: bool,
    pub proper: bool,
    pub dominion: Subset,
}

pub fn is_epi_embedding(s: &FiniteSemigroup, u: &Subset) -> Result<EpiEmbedding> {
    let dom = dominion(s, u)?;
    Ok(EpiEmbedding {
        epi: dom.len() == s.order(),
        proper: u.len() != s.order(),
        dominion: dom,
    })
}

/// Result of collapsing everything not J-above the top class of S∖U.
#[derive(Clone, Debug)]
pub struct TopJReduction {
    pub quotient: FiniteSemigroup,
    pub u_image: Subset,
    /// The collapsed ideal (empty when the reduction was a no-op).
    pub ideal: Subset,
    /// Element map S → S/I (identity when the reduction was a no-op).
    pub map: Vec<usize>,
    /// Image of the chosen J-class in the quotient.
    pub j_image: Subset,
    pub changed: bool,
}

/// Chooses the J-class J of the canonically first J-maximal element of
/// S∖U, collapses the ideal I of all J-classes not above J, and certifies
/// that the quotient's complement of the U-image lies in J ∪ {0}.
pub fn reduce_to_top_j(s: &FiniteSemigroup, u: &Subset) -> Result<TopJReduction> {
    ensure_subsemigroup(s, u)?;
    if u.len() == s.order() {
        return Err(Error::NotProper);
    }
    let g = GreenData::compute(s);
    let complement: Subset = s.elements().filter(|&x| !u.contains(x)).collect();
    let maximal = green::j_maximal(s, &g, &complement);
    let top = *maximal.iter().next().expect("complement nonempty");
    let j = g.j_class[top];
    let ideal: Subset = s
        .elements()
        .filter(|&x| !g.j_leq(j, g.j_class[x]))
        .collect();
    let (quotient, map, changed) = if ideal.is_empty() {
        (s.clone(), (0..s.order()).collect::<Vec<_>>(), false)
    } else {
        let (q, map) = s.rees_quotient(&ideal)?;
        (q, map, true)
    };
    let u_image: Subset = u.iter().map(|&x| map[x]).collect();
    let j_image: Subset = g.j_members(j).into_iter().map(|x| map[x]).collect();
    // certification: everything outside the U-image lies in J ∪ {0}
    let quotient_zero = quotient.zero();
    for x in quotient.elements() {
        if !u_image.contains(x) && !j_image.contains(x) && Some(x) != quotient_zero {
            return Err(Error::PreconditionFailed(
                "top-J reduction left an element outside J ∪ {0}",
            ));
        }
    }
    Ok(TopJReduction {
        quotient,
        u_image,
        ideal,
        map,
        j_image,
        changed,
    })
}

/// Two embeddings of S into a common oversemigroup W that agree exactly on
/// the L-saturation V of U — a direct certificate that U ↪ S is not an
/// epimorphism.
#[derive(Clone, Debug)]
pub struct AmalgamResult {
    pub w: FiniteSemigroup,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
    pub v: Subset,
}

/// Builds the amalgam W = S′ ∪ S″ of two copies of S glued along
/// V = union of the L-classes meeting U, with multiplication
/// `s′t′ = (st)′`, `s″t″ = (st)″`, and for t outside V,
/// `s′t″ = (st)″`, `s″t′ = (st)′`.
pub fn amalgam(s: &FiniteSemigroup, u: &Subset) -> Result<AmalgamResult> {
    ensure_subsemigroup(s, u)?;
    let n = s.order();
    if u.len() == n {
        return Err(Error::NotProper);
    }
    let g = GreenData::compute(s);
    // S∖U inside a single D-class
    let outside: Vec<usize> = s.elements().filter(|&x| !u.contains(x)).collect();
    let d_class = g.d_class(outside[0]);
    if outside.iter().any(|&x| g.d_class(x) != d_class) {
        return Err(Error::PreconditionFailed(
            "S∖U is not contained in a single D-class",
        ));
    }
    // products touching D must stay in D or hit an absorbing zero in U
    for a in s.elements() {
        for b in s.elements() {
            if g.d_class(a) != d_class && g.d_class(b) != d_class {
                continue;
            }
            let p = s.mul(a, b);
            if g.d_class(p) != d_class {
                let zero_in_u = s.zero().is_some_and(|z| u.contains(z));
                if !(zero_in_u && Some(p) == s.zero()) {
                    return Err(Error::PreconditionFailed(
                        "products leave the D-class without an absorbing zero in U",
                    ));
                }
            }
        }
    }
    // V: union of L-classes meeting U
    let mut l_meets_u = vec![false; g.l_count];
    for &x in u.iter() {
        l_meets_u[g.l_class[x]] = true;
    }
    let v: Subset = s.elements().filter(|&x| l_meets_u[g.l_class[x]]).collect();
    if v.len() == n {
        return Err(Error::PreconditionFailed("every L-class meets U"));
    }

    // W indices: all of S′ first (V′ = V″ shared), then S″∖V″
    let in_v = v.mask(n);
    let mut second_rank = vec![usize::MAX; n];
    let mut next = n;
    for x in 0..n {
        if !in_v[x] {
            second_rank[x] = next;
            next += 1;
        }
    }
    let order = next;
    let phi: Vec<usize> = (0..n).collect();
    let psi: Vec<usize> = (0..n)
        .map(|x| if in_v[x] { x } else { second_rank[x] })
        .collect();
    // decode W index -> (element of S, lives in second copy?)
    let mut decode = Vec::with_capacity(order);
    for x in 0..n {
        decode.push((x, false));
    }
    for x in 0..n {
        if !in_v[x] {
            decode.push((x, true));
        }
    }
    let mut table = vec![vec![0usize; order]; order];
    for (wi, &(a, a2)) in decode.iter().enumerate() {
        for (wj, &(b, b2)) in decode.iter().enumerate() {
            let p = s.mul(a, b);
            // products follow the right factor's copy unless it lies in the
            // glued part, in which case they stay in the left factor's copy
            let side = if in_v[b] { a2 } else { b2 };
            table[wi][wj] = if side && !in_v[p] { second_rank[p] } else { p };
        }
    }
    let labels = s.labels().map(|ls| {
        decode
            .iter()
            .map(|&(x, two)| {
                if in_v[x] {
                    ls[x].clone()
                } else if two {
                    format!("{}''", ls[x])
                } else {
                    format!("{}'", ls[x])
                }
            })
            .collect::<Vec<_>>()
    });
    // full associativity check at construction
    let w = FiniteSemigroup::new(table, labels)?;
    Ok(AmalgamResult { w, phi, psi, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::semigroup::is_embedding;

    #[test]
    fn dominion_of_y_in_b2_is_everything() {
        let b2 = catalog::b2();
        let dom = dominion(&b2, &catalog::y_in_b2()).unwrap();
        assert_eq!(dom, b2.full_subset());
    }

    #[test]
    fn dominion_of_whole_is_whole() {
        let b2 = catalog::b2();
        assert_eq!(dominion(&b2, &b2.full_subset()).unwrap(), b2.full_subset());
    }

    #[test]
    fn dominion_of_idempotent_singleton() {
        let b2 = catalog::b2();
        let ab = b2.subset([2]).unwrap();
        assert_eq!(dominion(&b2, &ab).unwrap(), ab);
    }

    #[test]
    fn dominion_rejects_non_subsemigroups() {
        let b2 = catalog::b2();
        let not_closed = b2.subset([0]).unwrap(); // a² = 0 escapes
        assert!(matches!(
            dominion(&b2, &not_closed),
            Err(Error::NotASubsemigroup { .. })
        ));
    }

    #[test]
    fn zigzag_for_b_over_y() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let cert = zigzag_for(&b2, &y, 1, None).unwrap().unwrap();
        assert!(verify_zigzag(&b2, &y, &cert).is_ok());
        // shortest chain: three flips, classic length 2 with spine (ab, a, ba)
        assert_eq!(cert.chain.len(), 3);
        let classic = cert.classic.as_ref().unwrap();
        assert_eq!(classic.m, 2);
        assert_eq!(classic.spine, vec![2, 0, 3]);
        assert_eq!(classic.x, vec![1]);
        assert_eq!(classic.y, vec![1]);
    }

    #[test]
    fn zigzag_for_element_of_u() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let cert = zigzag_for(&b2, &y, 2, None).unwrap().unwrap();
        assert_eq!(cert.chain.len(), 1);
        let step = cert.chain[0];
        assert_eq!((step.x, step.u, step.y), (5, 2, 5)); // witness (1, d, 1)
        let classic = cert.classic.unwrap();
        assert_eq!((classic.m, classic.spine.as_slice()), (1, &[2_usize][..]));
    }

    #[test]
    fn zigzag_absent_outside_dominion() {
        let b2 = catalog::b2();
        let ab = b2.subset([2]).unwrap();
        assert!(zigzag_for(&b2, &ab, 0, None).unwrap().is_none());
    }

    #[test]
    fn paper_style_transcription_verifies() {
        // the displayed length-3 zigzag for b over Y: spine (ab, a, a, a, ba),
        // x1 = x2 = b, y1 = y2 = b
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let classic = ClassicZigzag {
            m: 3,
            spine: vec![2, 0, 0, 0, 3],
            x: vec![1, 1],
            y: vec![1, 1],
        };
        let cert = certificate_from_classic(&b2, 1, classic);
        assert!(verify_zigzag(&b2, &y, &cert).is_ok());

        // corrupting u2 to ab must fail at the x1*v1 = x2*u2 equation
        let bad = ClassicZigzag {
            m: 3,
            spine: vec![2, 0, 2, 0, 3],
            x: vec![1, 1],
            y: vec![1, 1],
        };
        let cert = ZigzagCertificate {
            d: 1,
            chain: certificate_from_classic(
                &b2,
                1,
                ClassicZigzag {
                    m: 3,
                    spine: vec![2, 0, 0, 0, 3],
                    x: vec![1, 1],
                    y: vec![1, 1],
                },
            )
            .chain,
            classic: Some(bad),
        };
        let failure = verify_zigzag(&b2, &y, &cert).unwrap_err();
        assert_eq!(failure.equation, "x1*v1 = x2*u2");
    }

    #[test]
    fn normalize_leaves_unpadded_certificates_alone() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let cert = zigzag_for(&b2, &y, 1, None).unwrap().unwrap();
        let norm = normalize_zigzag(&b2, &y, &cert).unwrap();
        assert_eq!(norm.classic, cert.classic);

        // length-1 zigzags are fixed points
        let unit = zigzag_for(&b2, &y, 2, None).unwrap().unwrap();
        let norm = normalize_zigzag(&b2, &y, &unit).unwrap();
        assert_eq!(norm.classic, unit.classic);
    }

    #[test]
    fn epi_embedding_flags() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let e = is_epi_embedding(&b2, &y).unwrap();
        assert!(e.epi && e.proper);
        let whole = is_epi_embedding(&b2, &b2.full_subset()).unwrap();
        assert!(whole.epi && !whole.proper);
        let small = is_epi_embedding(&b2, &b2.subset([2, 4]).unwrap()).unwrap();
        assert!(!small.epi);
    }

    #[test]
    fn reduce_to_top_j_on_b2_is_identity_shaped() {
        let b2 = catalog::b2();
        let red = reduce_to_top_j(&b2, &catalog::y_in_b2()).unwrap();
        // the ideal is {0}; collapsing it reproduces B2 bit for bit
        assert_eq!(red.quotient.rows(), b2.rows());
        assert_eq!(red.u_image, catalog::y_in_b2());
        assert_eq!(red.map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn reduce_to_top_j_collapses_lower_classes() {
        let s = catalog::three_level();
        let u = s.subset([1, 2]).unwrap(); // {y, 0}
        let red = reduce_to_top_j(&s, &u).unwrap();
        assert!(red.changed);
        assert_eq!(red.ideal.as_slice(), &[1, 2]);
        assert_eq!(red.quotient.order(), 2);
        // complement of the U-image is {x}, inside the J-image
        assert!(red.j_image.contains(red.map[0]));
    }

    #[test]
    fn reduce_to_top_j_noop_without_lower_classes() {
        let s = catalog::right_zero(3);
        let u = s.subset([0]).unwrap();
        let red = reduce_to_top_j(&s, &u).unwrap();
        assert!(!red.changed);
        assert!(red.ideal.is_empty());
        assert_eq!(red.quotient.rows(), s.rows());
    }

    #[test]
    fn reduce_to_top_j_requires_proper() {
        let s = catalog::right_zero(2);
        assert!(matches!(
            reduce_to_top_j(&s, &s.full_subset()),
            Err(Error::NotProper)
        ));
    }

    #[test]
    fn amalgam_on_right_zero_pair() {
        let s = catalog::right_zero(2);
        let u = s.subset([0]).unwrap();
        let am = amalgam(&s, &u).unwrap();
        assert_eq!(am.w.order(), 3); // 2·2 − 1
        assert_eq!(am.v.as_slice(), &[0]);
        assert!(is_embedding(&am.phi, &s, &am.w));
        assert!(is_embedding(&am.psi, &s, &am.w));
        assert_ne!(am.phi, am.psi);
        for x in s.elements() {
            assert_eq!(am.phi[x] == am.psi[x], am.v.contains(x));
        }
        // the pair (phi, psi) witnesses that dominion misses S∖V
        let dom = dominion(&s, &u).unwrap();
        assert!(dom.iter().all(|&dd| am.v.contains(dd)));
    }

    #[test]
    fn amalgam_preconditions() {
        let b2 = catalog::b2();
        // every L-class of the top class of B2 meets Y
        let err = amalgam(&b2, &catalog::y_in_b2()).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(msg) if msg.contains("L-class")));

        let s = catalog::right_zero(2);
        assert!(matches!(
            amalgam(&s, &s.full_subset()),
            Err(Error::NotProper)
        ));
    }

    #[test]
    fn certificate_json_round_trip() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let cert = zigzag_for(&b2, &y, 1, None).unwrap().unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"dir\":\"L\""));
        let back: ZigzagCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(verify_zigzag(&b2, &y, &back).is_ok());
    }
}
