//! Green's relations, the J-order, eggbox data, regularity, idempotents,
//! and ω-powers.
//!
//! Relations are computed by divisibility closure: R-classes are the
//! strongly connected components of the right Cayley graph of S over all of
//! S (edges x → x·s), L dually, J over the two-sided graph. This is exact
//! and fast enough for the target scale of a few thousand elements.

use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, Subset};

/// Green's data of a finite semigroup: class index per element for R, L, J,
/// H (with D = J by finiteness), the J-order, regularity flags, and one
/// eggbox grid per D-class.
#[derive(Clone, Debug)]
pub struct GreenData {
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub j_class: Vec<usize>,
    pub h_class: Vec<usize>,
    pub r_count: usize,
    pub l_count: usize,
    pub j_count: usize,
    pub h_count: usize,
    /// whether J-class `c` contains an idempotent
    pub regular_j: Vec<bool>,
    pub eggboxes: Vec<Eggbox>,
    j_leq: BitMatrix,
}

/// Eggbox grid of one D-class: rows are its R-classes, columns its
/// L-classes, each cell an H-class listed as ascending element indices.
#[derive(Clone, Debug)]
pub struct Eggbox {
    pub j_class: usize,
    pub row_r_classes: Vec<usize>,
    pub col_l_classes: Vec<usize>,
    pub cells: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }
    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }
    fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.n && c < self.n);
        self.bits[r * self.words + c / 64] & (1 << (c % 64)) != 0
    }
}

/// Iterative Tarjan SCC over an implicit graph. `neighbors(x, f)` must call
/// `f` on every successor of `x`. Returns the component index per node;
/// components are then renumbered by least member.
fn scc<F: Fn(usize, &mut dyn FnMut(usize))>(n: usize, neighbors: F) -> (Vec<usize>, usize) {
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![UNSET; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // DFS state: (node, iterator position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            // collect successors lazily: we re-enumerate and skip `pos`
            let mut k = 0usize;
            let mut pushed = None;
            let mut low_v = low[v];
            neighbors(v, &mut |w| {
                if pushed.is_some() {
                    return;
                }
                if k >= *pos {
                    if index[w] == UNSET {
                        pushed = Some(w);
                    } else if on_stack[w] {
                        low_v = low_v.min(index[w]);
                    }
                    *pos = k + 1;
                }
                k += 1;
            });
            low[v] = low_v;
            match pushed {
                Some(w) => {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                }
                None => {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp[w] = comp_count;
                            if w == v {
                                break;
                            }
                        }
                        comp_count += 1;
                    }
                }
            }
        }
    }
    renumber_by_least(&comp, comp_count)
}

fn renumber_by_least(raw: &[usize], count: usize) -> (Vec<usize>, usize) {
    let mut least = vec![usize::MAX; count];
    for (x, &c) in raw.iter().enumerate() {
        if least[c] == usize::MAX {
            least[c] = x;
        }
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&c| least[c]);
    let mut rank = vec![0usize; count];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    (raw.iter().map(|&c| rank[c]).collect(), count)
}

impl GreenData {
    pub fn compute(s: &FiniteSemigroup) -> GreenData {
        let n = s.order();
        let (r_class, r_count) = scc(n, |x, f| {
            for t in 0..n {
                f(s.mul(x, t));
            }
        });
        let (l_class, l_count) = scc(n, |x, f| {
            for t in 0..n {
                f(s.mul(t, x));
            }
        });
        let (j_class, j_count) = scc(n, |x, f| {
            for t in 0..n {
                f(s.mul(x, t));
                f(s.mul(t, x));
            }
        });

        // H = R ∧ L
        let mut h_map = std::collections::HashMap::new();
        let mut h_raw = Vec::with_capacity(n);
        for x in 0..n {
            let key = (r_class[x], l_class[x]);
            let next = h_map.len();
            let id = *h_map.entry(key).or_insert(next);
            h_raw.push(id);
        }
        let (h_class, h_count) = renumber_by_least(&h_raw, h_map.len());

        // D = R ∨ L must equal J on a finite semigroup
        let d_join = join_partition(&r_class, &l_class, n);
        assert_eq!(
            d_join, j_class,
            "D (join of R and L) must coincide with J on a finite semigroup"
        );

        // J-order: class a <= class b iff some (hence any) element of a is
        // reachable from an element of b in the two-sided graph
        let mut edge = vec![false; j_count * j_count];
        for x in 0..n {
            let cx = j_class[x];
            for t in 0..n {
                for y in [s.mul(x, t), s.mul(t, x)] {
                    let cy = j_class[y];
                    if cy != cx {
                        edge[cx * j_count + cy] = true;
                    }
                }
            }
        }
        let cond_adj: Vec<Vec<usize>> = (0..j_count)
            .map(|c| (0..j_count).filter(|&d| edge[c * j_count + d]).collect())
            .collect();
        let mut j_leq = BitMatrix::new(j_count);
        for start in 0..j_count {
            // everything reachable from `start` is <= start
            let mut seen = vec![false; j_count];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(c) = stack.pop() {
                j_leq.set(c, start);
                for &d in &cond_adj[c] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }

        let mut regular_j = vec![false; j_count];
        for e in 0..n {
            if s.is_idempotent(e) {
                regular_j[j_class[e]] = true;
            }
        }

        // eggboxes
        let mut eggboxes = Vec::with_capacity(j_count);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); j_count];
        for x in 0..n {
            members[j_class[x]].push(x);
        }
        for (c, elems) in members.iter().enumerate() {
            let mut rows: Vec<usize> = elems.iter().map(|&x| r_class[x]).collect();
            rows.sort_unstable();
            rows.dedup();
            let mut cols: Vec<usize> = elems.iter().map(|&x| l_class[x]).collect();
            cols.sort_unstable();
            cols.dedup();
            let rpos: std::collections::HashMap<usize, usize> =
                rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let cpos: std::collections::HashMap<usize, usize> =
                cols.iter().enumerate().map(|(i, &l)| (l, i)).collect();
            let mut cells = vec![vec![Vec::new(); cols.len()]; rows.len()];
            for &x in elems {
                cells[rpos[&r_class[x]]][cpos[&l_class[x]]].push(x);
            }
            eggboxes.push(Eggbox {
                j_class: c,
                row_r_classes: rows,
                col_l_classes: cols,
                cells,
            });
        }

        GreenData {
            r_class,
            l_class,
            j_class,
            h_class,
            r_count,
            l_count,
            j_count,
            h_count,
            regular_j,
            eggboxes,
            j_leq,
        }
    }

    /// D coincides with J on finite semigroups.
    pub fn d_class(&self, x: usize) -> usize {
        self.j_class[x]
    }

    /// Non-strict J-order on class indices.
    pub fn j_leq(&self, a: usize, b: usize) -> bool {
        self.j_leq.get(a, b)
    }

    pub fn j_lt(&self, a: usize, b: usize) -> bool {
        a != b && self.j_leq.get(a, b)
    }

    /// x <= y in the J-order on elements.
    pub fn j_leq_elements(&self, x: usize, y: usize) -> bool {
        self.j_leq(self.j_class[x], self.j_class[y])
    }

    pub fn j_lt_elements(&self, x: usize, y: usize) -> bool {
        self.j_lt(self.j_class[x], self.j_class[y])
    }

    pub fn j_members(&self, c: usize) -> Vec<usize> {
        (0..self.j_class.len())
            .filter(|&x| self.j_class[x] == c)
            .collect()
    }

    pub fn r_eq(&self, x: usize, y: usize) -> bool {
        self.r_class[x] == self.r_class[y]
    }

    pub fn l_eq(&self, x: usize, y: usize) -> bool {
        self.l_class[x] == self.l_class[y]
    }

    pub fn h_eq(&self, x: usize, y: usize) -> bool {
        self.h_class[x] == self.h_class[y]
    }

    pub fn d_eq(&self, x: usize, y: usize) -> bool {
        self.j_class[x] == self.j_class[y]
    }
}

fn join_partition(p: &[usize], q: &[usize], n: usize) -> Vec<usize> {
    // union-find over elements, uniting within p-blocks and q-blocks
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for part in [p, q] {
        let mut first: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for x in 0..n {
            match first.entry(part[x]) {
                std::collections::hash_map::Entry::Occupied(o) => {
                    let a = find(&mut parent, *o.get());
                    let b = find(&mut parent, x);
                    if a != b {
                        parent[b] = a;
                    }
                }
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(x);
                }
            }
        }
    }
    let raw: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    // normalize: number blocks by least member
    let mut seen = std::collections::HashMap::new();
    let mut out = vec![0usize; n];
    for x in 0..n {
        let next = seen.len();
        out[x] = *seen.entry(raw[x]).or_insert(next);
    }
    out
}

/// The set `E(S)` of idempotents.
pub fn idempotents(s: &FiniteSemigroup) -> Subset {
    s.elements().filter(|&e| s.is_idempotent(e)).collect()
}

/// Index (first exponent entering the cycle) and period of the power
/// sequence of an element, plus its unique idempotent power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaData {
    pub index: usize,
    pub period: usize,
    pub omega: usize,
}

pub fn omega_data(s: &FiniteSemigroup, x: usize) -> OmegaData {
    // walk powers x, x^2, ... until the first repeat
    let mut seen: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut powers = Vec::new();
    let mut cur = x;
    let mut k = 1usize;
    loop {
        if let Some(&first) = seen.get(&cur) {
            let index = first;
            let period = k - first;
            let omega = powers[index - 1..]
                .iter()
                .copied()
                .find(|&p| s.is_idempotent(p))
                .expect("a power cycle contains exactly one idempotent");
            return OmegaData {
                index,
                period,
                omega,
            };
        }
        seen.insert(cur, k);
        powers.push(cur);
        cur = s.mul(cur, x);
        k += 1;
    }
}

/// The unique idempotent power `s^ω`.
pub fn omega_power(s: &FiniteSemigroup, x: usize) -> usize {
    omega_data(s, x).omega
}

/// `s^{ω+1} = s^ω · s`.
pub fn omega_plus_one(s: &FiniteSemigroup, x: usize) -> usize {
    s.mul(omega_power(s, x), x)
}

/// Members of `x` that are J-maximal within `x`: no other member lies
/// strictly J-above them.
pub fn j_maximal(s: &FiniteSemigroup, green: &GreenData, x: &Subset) -> Subset {
    assert!(!x.is_empty(), "j_maximal of an empty set");
    let _ = s;
    x.iter()
        .copied()
        .filter(|&a| !x.iter().any(|&b| green.j_lt_elements(a, b)))
        .collect()
}

/// One violation of the Miller–Clifford location theorem; the list is empty
/// on every semigroup, so this serves as a test oracle for [`GreenData`].
#[derive(Clone, Copy, Debug)]
pub struct MillerCliffordViolation {
    pub s: usize,
    pub t: usize,
    pub product_in_cell: bool,
    pub idempotent_in_opposite: bool,
}

pub fn miller_clifford_check(
    s: &FiniteSemigroup,
    green: &GreenData,
) -> Vec<MillerCliffordViolation> {
    let n = s.order();
    // has_idem[l][r]: does the H-class (L-class l, R-class r) contain an idempotent?
    let mut has_idem = vec![false; green.l_count * green.r_count];
    for e in 0..n {
        if s.is_idempotent(e) {
            has_idem[green.l_class[e] * green.r_count + green.r_class[e]] = true;
        }
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let p = s.mul(a, b);
            let in_cell = green.r_eq(p, a) && green.l_eq(p, b);
            let idem = has_idem[green.l_class[a] * green.r_count + green.r_class[b]];
            if in_cell != idem {
                out.push(MillerCliffordViolation {
                    s: a,
                    t: b,
                    product_in_cell: in_cell,
                    idempotent_in_opposite: idem,
                });
            }
        }
    }
    out
}

/// The subsemigroup `EUE` of `U`, where `E = E(U)`: closure of
/// `{e·u·f : e,f ∈ E(U), u ∈ U}`.
pub fn compute_eue(s: &FiniteSemigroup, u: &Subset) -> Result<Subset> {
    if let Some((a, b, p)) = s.subsemigroup_violation(u) {
        return Err(Error::NotASubsemigroup { a, b, product: p });
    }
    let e: Vec<usize> = u.iter().copied().filter(|&x| s.is_idempotent(x)).collect();
    sandwich_closure(s, &e, u.as_slice())
}

/// `ESE` with `E = E(U)`: closure of `{e·x·f : e,f ∈ E(U), x ∈ S}`.
pub fn compute_ese(s: &FiniteSemigroup, u: &Subset) -> Result<Subset> {
    if let Some((a, b, p)) = s.subsemigroup_violation(u) {
        return Err(Error::NotASubsemigroup { a, b, product: p });
    }
    let e: Vec<usize> = u.iter().copied().filter(|&x| s.is_idempotent(x)).collect();
    let all: Vec<usize> = s.elements().collect();
    sandwich_closure(s, &e, &all)
}

fn sandwich_closure(s: &FiniteSemigroup, e: &[usize], mid: &[usize]) -> Result<Subset> {
    let mut seed = Vec::new();
    for &a in e {
        for &m in mid {
            let am = s.mul(a, m);
            for &b in e {
                seed.push(s.mul(am, b));
            }
        }
    }
    seed.sort_unstable();
    seed.dedup();
    if seed.is_empty() {
        // a nonempty finite subsemigroup always has an idempotent
        return Ok(Subset::empty());
    }
    let seed_subset: Subset = seed.into_iter().collect();
    Ok(s.closure(&seed_subset))
}

/// Every element lies in a subgroup: `s^{ω+1} = s` for all `s`.
pub fn is_completely_regular(s: &FiniteSemigroup) -> bool {
    s.elements().all(|x| omega_plus_one(s, x) == x)
}

fn primitive_among(s: &FiniteSemigroup, idems: &[usize]) -> bool {
    for &e in idems {
        for &f in idems {
            if s.mul(e, f) == e && s.mul(f, e) == e && e != f {
                return false;
            }
        }
    }
    true
}

/// Single D-class and primitive idempotents.
pub fn is_completely_simple(s: &FiniteSemigroup) -> bool {
    let green = GreenData::compute(s);
    if green.j_count != 1 {
        return false;
    }
    let idems: Vec<usize> = s.elements().filter(|&e| s.is_idempotent(e)).collect();
    primitive_among(s, &idems)
}

/// Exactly two D-classes, one reduced to the zero, primitivity among the
/// nonzero idempotents, and S² ≠ {0}.
pub fn is_completely_0_simple(s: &FiniteSemigroup) -> bool {
    let Some(zero) = s.zero() else {
        return false;
    };
    let green = GreenData::compute(s);
    if green.j_count != 2 {
        return false;
    }
    if green.j_members(green.j_class[zero]) != vec![zero] {
        return false;
    }
    let idems: Vec<usize> = s
        .elements()
        .filter(|&e| e != zero && s.is_idempotent(e))
        .collect();
    if !primitive_among(s, &idems) {
        return false;
    }
    s.elements()
        .any(|x| s.elements().any(|y| s.mul(x, y) != zero))
}

pub fn is_regular_element(s: &FiniteSemigroup, x: usize) -> bool {
    s.elements().any(|y| s.mul(s.mul(x, y), x) == x)
}

/// Every element regular.
pub fn is_regular_semigroup(s: &FiniteSemigroup) -> bool {
    s.elements().all(|x| is_regular_element(s, x))
}

/// Eggbox picture in Graphviz DOT: one cluster per D-class, rendered as an
/// HTML grid of H-classes with idempotent cells starred.
pub fn eggbox_dot(s: &FiniteSemigroup, green: &GreenData, dclass: Option<usize>) -> String {
    let mut out = String::from("digraph eggbox {\n  node [shape=plaintext];\n");
    for (c, box_) in green.eggboxes.iter().enumerate() {
        if dclass.is_some_and(|want| want != c) {
            continue;
        }
        out.push_str(&format!(
            "  subgraph cluster_d{c} {{\n    label=\"D{c}{}\";\n",
            if green.regular_j[c] { " (regular)" } else { "" }
        ));
        out.push_str(&format!(
            "    d{c} [label=<<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\">"
        ));
        for row in &box_.cells {
            out.push_str("<TR>");
            for cell in row {
                let star = cell.iter().any(|&x| s.is_idempotent(x));
                let body: Vec<String> = cell.iter().map(|&x| s.label(x)).collect();
                out.push_str(&format!(
                    "<TD>{}{}</TD>",
                    if star { "*" } else { "" },
                    body.join(", ")
                ));
            }
            out.push_str("</TR>");
        }
        out.push_str("</TABLE>>];\n  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn b2_green_structure() {
        let b2 = catalog::b2();
        let g = GreenData::compute(&b2);
        // two J-classes: {a,b,ab,ba} above {0}
        assert_eq!(g.j_count, 2);
        let top = g.j_class[0];
        assert_eq!(g.j_class[1], top);
        assert_eq!(g.j_class[2], top);
        assert_eq!(g.j_class[3], top);
        let bottom = g.j_class[4];
        assert_ne!(top, bottom);
        assert!(g.j_lt(bottom, top));
        assert!(g.regular_j[top]);
        // eggbox of the top class is 2x2 with trivial H-classes
        let eb = &g.eggboxes[top];
        assert_eq!(eb.row_r_classes.len(), 2);
        assert_eq!(eb.col_l_classes.len(), 2);
        for row in &eb.cells {
            for cell in row {
                assert_eq!(cell.len(), 1);
            }
        }
    }

    #[test]
    fn group_is_one_class() {
        let c3 = catalog::c3();
        let g = GreenData::compute(&c3);
        assert_eq!(g.j_count, 1);
        assert_eq!(g.h_count, 1);
    }

    #[test]
    fn y_green_structure() {
        let y = catalog::y();
        let g = GreenData::compute(&y);
        // J-classes: {ab}, {ba}, {a}, {0}; ab and ba maximal, a below both, 0 bottom
        assert_eq!(g.j_count, 4);
        let (a, ab, ba, z) = (0, 1, 2, 3);
        for x in [a, ab, ba, z] {
            assert_eq!(g.j_members(g.j_class[x]), vec![x]);
        }
        assert!(g.j_lt_elements(a, ab));
        assert!(g.j_lt_elements(a, ba));
        assert!(!g.j_leq_elements(ab, ba));
        assert!(!g.j_leq_elements(ba, ab));
        assert!(g.j_lt_elements(z, a));
    }

    #[test]
    fn idempotent_sets() {
        let b2 = catalog::b2();
        assert_eq!(idempotents(&b2).as_slice(), &[2, 3, 4]); // ab, ba, 0
        let y = catalog::y();
        assert_eq!(idempotents(&y).as_slice(), &[1, 2, 3]); // ab, ba, 0
        let c3 = catalog::c3();
        assert_eq!(idempotents(&c3).as_slice(), &[0]);
    }

    #[test]
    fn omega_powers() {
        let b2 = catalog::b2();
        assert_eq!(omega_power(&b2, 0), 4); // a^ω = 0
        assert_eq!(omega_power(&b2, 2), 2); // idempotent fixed
        let c3 = catalog::c3();
        assert_eq!(omega_power(&c3, 1), 0); // g^ω = 1
        assert_eq!(omega_plus_one(&c3, 1), 1); // g^{ω+1} = g
        let d = omega_data(&c3, 1);
        assert_eq!((d.index, d.period), (1, 3));
    }

    #[test]
    fn omega_is_idempotent_power() {
        for s in [
            catalog::b2(),
            catalog::y(),
            catalog::c3(),
            catalog::three_level(),
        ] {
            for x in s.elements() {
                let w = omega_power(&s, x);
                assert!(s.is_idempotent(w));
                // w is a power of x
                let mut p = x;
                let mut found = false;
                for _ in 0..=s.order() {
                    if p == w {
                        found = true;
                        break;
                    }
                    p = s.mul(p, x);
                }
                assert!(found);
                // ω+1 lies in the cyclic subsemigroup generated by x
                let cyclic = s.closure(&s.subset([x]).unwrap());
                assert!(cyclic.contains(omega_plus_one(&s, x)));
            }
        }
    }

    #[test]
    fn j_maximal_examples() {
        let b2 = catalog::b2();
        let g = GreenData::compute(&b2);
        let just_b = b2.subset([1]).unwrap();
        assert_eq!(j_maximal(&b2, &g, &just_b).as_slice(), &[1]);
        let a_and_zero = b2.subset([0, 4]).unwrap();
        assert_eq!(j_maximal(&b2, &g, &a_and_zero).as_slice(), &[0]);
        let top = b2.subset([0, 1, 2, 3]).unwrap();
        assert_eq!(j_maximal(&b2, &g, &top), top);
    }

    #[test]
    fn miller_clifford_holds_on_catalog() {
        for s in [
            catalog::b2(),
            catalog::y(),
            catalog::c3(),
            catalog::three_level(),
            catalog::right_zero(3),
            catalog::left_zero(4),
        ] {
            let g = GreenData::compute(&s);
            assert!(miller_clifford_check(&s, &g).is_empty());
        }
    }

    #[test]
    fn eue_examples() {
        let b2 = catalog::b2();
        let y = catalog::y_in_b2();
        let eue = compute_eue(&b2, &y).unwrap();
        assert_eq!(eue, y); // EYE = Y

        let c3 = catalog::c3();
        let whole = c3.full_subset();
        assert_eq!(compute_eue(&c3, &whole).unwrap(), whole);

        let null = catalog::null_pair();
        let u = null.full_subset();
        assert_eq!(compute_eue(&null, &u).unwrap().as_slice(), &[1]); // {0}
    }

    #[test]
    fn complete_regularity_flavors() {
        let b2 = catalog::b2();
        assert!(is_completely_0_simple(&b2));
        assert!(!is_completely_simple(&b2));
        assert!(!is_completely_regular(&b2));

        let c3 = catalog::c3();
        assert!(is_completely_simple(&c3));
        assert!(is_completely_regular(&c3));
        assert!(!is_completely_0_simple(&c3));

        let y = catalog::y();
        assert!(!is_completely_regular(&y)); // a^{ω+1} = 0 ≠ a
        assert!(!is_completely_simple(&y));
        assert!(!is_completely_0_simple(&y));

        // null pair has two D-classes but S² = {0}
        assert!(!is_completely_0_simple(&catalog::null_pair()));
    }

    #[test]
    fn stability_on_catalog() {
        for s in [
            catalog::b2(),
            catalog::y(),
            catalog::c3(),
            catalog::three_level(),
        ] {
            let g = GreenData::compute(&s);
            for x in s.elements() {
                for t in s.elements() {
                    let xt = s.mul(t, x);
                    if g.d_eq(xt, x) {
                        assert!(g.l_eq(xt, x), "left stability");
                    }
                    let tx = s.mul(x, t);
                    if g.d_eq(tx, x) {
                        assert!(g.r_eq(tx, x), "right stability");
                    }
                }
            }
        }
    }

    #[test]
    fn eggbox_h_classes_uniform_in_regular_d() {
        for s in [catalog::b2(), catalog::c3(), catalog::right_zero(4)] {
            let g = GreenData::compute(&s);
            for (c, eb) in g.eggboxes.iter().enumerate() {
                if !g.regular_j[c] {
                    continue;
                }
                let sz = eb.cells[0][0].len();
                for row in &eb.cells {
                    for cell in row {
                        assert_eq!(cell.len(), sz);
                    }
                }
            }
        }
    }

    #[test]
    fn eggbox_dot_output() {
        let b2 = catalog::b2();
        let g = GreenData::compute(&b2);
        let dot = eggbox_dot(&b2, &g, Some(0));
        assert!(dot.contains("cluster_d0"));
        assert_eq!(dot.matches("<TR>").count(), 2);
        assert_eq!(dot.matches('*').count(), 2); // ab, ba starred
        assert_eq!(dot, eggbox_dot(&b2, &g, Some(0)));
    }
}
