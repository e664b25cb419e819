//! Cayley-table semigroups.
//!
//! Elements are the dense indices `0..n`, and `table[a][b]` is the product
//! `ab` (row = left factor). Every [`FiniteSemigroup`] is validated on
//! construction, so closure and associativity can be relied upon by all
//! downstream algorithms.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    Shape { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is outside [0, {order})")]
    BadEntry {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("declared order {declared} but {rows} rows given")]
    OrderMismatch { declared: usize, rows: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("element {0} does not lie in a subgroup")]
pub struct NotInSubgroup(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("subset {0:?} is not closed under the product")]
pub struct NotClosed(pub Vec<usize>);

/// A validated finite semigroup given by its Cayley table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<TableRepr> for FiniteSemigroup {
    type Error = TableError;

    fn try_from(repr: TableRepr) -> Result<Self, Self::Error> {
        if repr.table.len() != repr.order {
            return Err(TableError::OrderMismatch {
                declared: repr.order,
                rows: repr.table.len(),
            });
        }
        FiniteSemigroup::new(repr.table)
    }
}

impl From<FiniteSemigroup> for TableRepr {
    fn from(s: FiniteSemigroup) -> Self {
        TableRepr {
            order: s.order,
            table: s.rows(),
        }
    }
}

/// A bijection on `0..n`, used as an isomorphism certificate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bijection(Vec<usize>);

impl Bijection {
    /// Wraps `images` if it is a permutation of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v >= images.len() || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Bijection(images))
    }

    pub fn identity(n: usize) -> Self {
        Bijection((0..n).collect())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Bijection(inv)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

fn check_shape(rows: &[Vec<usize>]) -> Result<usize, TableError> {
    let n = rows.len();
    if n == 0 {
        return Err(TableError::Empty);
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(TableError::Shape {
                row: r,
                len: row.len(),
                order: n,
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(TableError::BadEntry {
                    row: r,
                    col: c,
                    value: v,
                    order: n,
                });
            }
        }
    }
    Ok(n)
}

/// First non-associating triple of a closed flat table, if any.
///
/// Triples `(a, a, a)` are scanned first, then all triples in lexicographic
/// order, so the reported witness is deterministic.
pub(crate) fn associativity_witness(n: usize, t: &[usize]) -> Option<(usize, usize, usize)> {
    let m = |a: usize, b: usize| t[a * n + b];
    for a in 0..n {
        let aa = m(a, a);
        if m(aa, a) != m(a, aa) {
            return Some((a, a, a));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = m(a, b);
            for c in 0..n {
                if m(ab, c) != m(a, m(b, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Checks all `n³` triples. Assumes a square table with in-range entries.
pub fn is_associative_naive(table: &[Vec<usize>]) -> bool {
    let n = table.len();
    (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| table[table[a][b]][c] == table[a][table[b][c]]))
    })
}

/// Light's associativity test using every element as a generator.
pub fn is_associative_light(table: &[Vec<usize>]) -> bool {
    let all: Vec<usize> = (0..table.len()).collect();
    light_test(table, &all)
}

/// Light's test over a caller-supplied generating set.
///
/// If `generators` does not generate the whole magma the full element set is
/// used instead, so the verdict never depends on the hint.
pub fn is_associative_light_with_generators(table: &[Vec<usize>], generators: &[usize]) -> bool {
    let n = table.len();
    if generators.iter().any(|&g| g >= n) || magma_closure(table, generators).len() != n {
        return is_associative_light(table);
    }
    light_test(table, generators)
}

// For each generator g compare the tables x*(g*y) and (x*g)*y. The set of
// elements passing this comparison is closed under the product, so checking
// a generating set suffices.
fn light_test(table: &[Vec<usize>], generators: &[usize]) -> bool {
    let n = table.len();
    generators.iter().all(|&g| {
        (0..n).all(|x| {
            let xg = table[x][g];
            (0..n).all(|y| table[x][table[g][y]] == table[xg][y])
        })
    })
}

/// Sub-magma generated by `seeds`, as a sorted list.
pub fn magma_closure(table: &[Vec<usize>], seeds: &[usize]) -> Vec<usize> {
    let n = table.len();
    let mut inside = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    for &s in seeds {
        if s < n && !inside[s] {
            inside[s] = true;
            members.push(s);
        }
    }
    let mut i = 0;
    while i < members.len() {
        let a = members[i];
        for j in 0..=i {
            let b = members[j];
            for p in [table[a][b], table[b][a]] {
                if !inside[p] {
                    inside[p] = true;
                    members.push(p);
                }
            }
        }
        i += 1;
    }
    members.sort_unstable();
    members
}

impl FiniteSemigroup {
    /// Validates closure and associativity of an `n × n` table.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, TableError> {
        let n = check_shape(&rows)?;
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        Self::from_flat(n, table)
    }

    /// Like [`FiniteSemigroup::new`] over a row-major flat table.
    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::Empty);
        }
        if table.len() != order * order {
            return Err(TableError::Shape {
                row: table.len() / order,
                len: table.len() % order,
                order,
            });
        }
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(TableError::BadEntry {
                row: i / order,
                col: i % order,
                value: table[i],
                order,
            });
        }
        if let Some((a, b, c)) = associativity_witness(order, &table) {
            return Err(TableError::NotAssociative { a, b, c });
        }
        Ok(FiniteSemigroup { order, table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// Row-major flat table.
    pub fn flat(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The opposite semigroup (`a ∘ b = ba`).
    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[b * n + a] = self.mul(a, b);
            }
        }
        FiniteSemigroup { order: n, table }
    }

    /// `a^k` for `k ≥ 1`.
    pub fn power(&self, a: usize, k: usize) -> usize {
        assert!(k >= 1, "exponent must be positive");
        let mut acc = a;
        for _ in 1..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> BTreeSet<usize> {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// Index and period of the monogenic subsemigroup of `x`: the smallest
    /// `i < j` with `x^i = x^j` is returned as `(i, j - i)`.
    pub fn index_period(&self, x: usize) -> (usize, usize) {
        let mut first_seen = vec![usize::MAX; self.order];
        let mut p = x;
        let mut k = 1;
        loop {
            if first_seen[p] != usize::MAX {
                return (first_seen[p], k - first_seen[p]);
            }
            first_seen[p] = k;
            p = self.mul(p, x);
            k += 1;
        }
    }

    /// `x ∈ x²S ∩ Sx²` for every `x`.
    pub fn is_union_of_groups(&self) -> bool {
        self.elements().all(|x| {
            let sq = self.mul(x, x);
            self.elements().any(|s| self.mul(sq, s) == x)
                && self.elements().any(|s| self.mul(s, sq) == x)
        })
    }

    /// The identity `1_x` of the maximal subgroup containing `x`.
    pub fn local_identity(&self, x: usize) -> Result<usize, NotInSubgroup> {
        match self.index_period(x) {
            (1, period) => Ok(self.power(x, period)),
            _ => Err(NotInSubgroup(x)),
        }
    }

    /// The inverse of `x` inside its maximal subgroup.
    pub fn group_inverse(&self, x: usize) -> Result<usize, NotInSubgroup> {
        match self.index_period(x) {
            // x^{2p-1} · x = x^{2p} = 1_x
            (1, period) => Ok(self.power(x, 2 * period - 1)),
            _ => Err(NotInSubgroup(x)),
        }
    }

    pub fn subset_product(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| self.mul(x, y)))
            .collect()
    }

    /// `S² = S·S`.
    pub fn square(&self) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = self.elements().collect();
        self.subset_product(&all, &all)
    }

    /// Componentwise product; `(i, j)` is numbered `i·|T| + j`.
    pub fn direct_product(&self, other: &FiniteSemigroup) -> FiniteSemigroup {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let mut table = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let (i, j) = (x / m, x % m);
                let (k, l) = (y / m, y % m);
                table[x * size + y] = self.mul(i, k) * m + other.mul(j, l);
            }
        }
        FiniteSemigroup { order: size, table }
    }

    /// The table obtained by renaming each element `x` to `perm(x)`.
    pub fn relabel(&self, perm: &Bijection) -> FiniteSemigroup {
        let n = self.order;
        assert_eq!(perm.as_slice().len(), n);
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm.apply(a) * n + perm.apply(b)] = perm.apply(self.mul(a, b));
            }
        }
        FiniteSemigroup { order: n, table }
    }

    /// The subsemigroup on `subset` as a standalone table; element `k` of the
    /// result is the `k`-th smallest member of `subset`.
    pub fn restrict(&self, subset: &BTreeSet<usize>) -> Result<FiniteSemigroup, NotClosed> {
        let members: Vec<usize> = subset.iter().copied().collect();
        if members.is_empty() || members.iter().any(|&x| x >= self.order) {
            return Err(NotClosed(members));
        }
        let mut local = vec![usize::MAX; self.order];
        for (k, &x) in members.iter().enumerate() {
            local[x] = k;
        }
        let m = members.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &members {
            for &b in &members {
                let p = local[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(NotClosed(members));
                }
                table.push(p);
            }
        }
        Ok(FiniteSemigroup { order: m, table })
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_band(&self) -> bool {
        self.elements().all(|e| self.is_idempotent(e))
    }

    pub fn is_semilattice(&self) -> bool {
        self.is_band() && self.is_commutative()
    }

    /// Two-sided identity, if one exists.
    pub fn identity(&self) -> Option<usize> {
        self.elements()
            .find(|&e| self.elements().all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// Every row and column is a permutation and an identity exists.
    pub fn is_group(&self) -> bool {
        let n = self.order;
        let latin = self.elements().all(|a| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[self.mul(a, b)] = true;
                col[self.mul(b, a)] = true;
            }
            row.iter().all(|&v| v) && col.iter().all(|&v| v)
        });
        latin && self.identity().is_some()
    }

    pub fn is_left_zero(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == a))
    }

    pub fn is_right_zero(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == b))
    }

    /// `x² = x` and `xyx = x` for all `x, y`.
    pub fn is_rectangular_band(&self) -> bool {
        self.is_band()
            && self
                .elements()
                .all(|x| self.elements().all(|y| self.mul(self.mul(x, y), x) == x))
    }

    /// `S¹aS¹ = S` for every `a`.
    pub fn is_simple(&self) -> bool {
        let n = self.order;
        self.elements().all(|a| {
            let mut ideal = vec![false; n];
            ideal[a] = true;
            for s in 0..n {
                let sa = self.mul(s, a);
                ideal[sa] = true;
                ideal[self.mul(a, s)] = true;
                for t in 0..n {
                    ideal[self.mul(sa, t)] = true;
                }
            }
            ideal.iter().all(|&v| v)
        })
    }

    /// Finite simple union of groups.
    pub fn is_completely_simple(&self) -> bool {
        self.is_simple() && self.is_union_of_groups()
    }

    pub fn idempotents_closed(&self) -> bool {
        let e = self.idempotents();
        e.iter()
            .all(|&a| e.iter().all(|&b| self.is_idempotent(self.mul(a, b))))
    }
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSemigroup{:?}", self.rows())
    }
}

/// Plain text form: the order on one line, then one row per line.
impl fmt::Display for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.order)?;
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Smallest table (lexicographically, row-major) over all relabelings.
pub fn canonical_form(s: &FiniteSemigroup) -> FiniteSemigroup {
    let n = s.order;
    // sigma maps new label -> old label; relabeled[i][j] = inv(sigma)(t[sigma i][sigma j])
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut inv = vec![0; n];
    let mut best: Option<Vec<usize>> = None;
    let mut scratch = vec![0; n * n];
    loop {
        for (new, &old) in sigma.iter().enumerate() {
            inv[old] = new;
        }
        let mut ordering = std::cmp::Ordering::Equal;
        'cells: for i in 0..n {
            for j in 0..n {
                let v = inv[s.mul(sigma[i], sigma[j])];
                scratch[i * n + j] = v;
                if ordering == std::cmp::Ordering::Equal {
                    if let Some(b) = &best {
                        ordering = v.cmp(&b[i * n + j]);
                        if ordering == std::cmp::Ordering::Greater {
                            break 'cells;
                        }
                    }
                }
            }
        }
        if best.is_none() || ordering == std::cmp::Ordering::Less {
            best = Some(scratch.clone());
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    FiniteSemigroup {
        order: n,
        table: best.expect("at least one permutation"),
    }
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A bijection `φ` with `φ(ab) = φ(a)φ(b)`, if one exists.
pub fn are_isomorphic(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Option<Bijection> {
    IsoSearch::new(s, t).run()
}

/// A bijection `φ` with `φ(ab) = φ(b)φ(a)`, if one exists.
pub fn are_anti_isomorphic(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Option<Bijection> {
    are_isomorphic(s, &t.transpose())
}

/// Checks that `map` is a bijective homomorphism `s -> t`.
pub fn is_isomorphism(s: &FiniteSemigroup, t: &FiniteSemigroup, map: &[usize]) -> bool {
    s.order == t.order
        && map.len() == s.order
        && Bijection::new(map.to_vec()).is_some()
        && s.elements()
            .all(|a| s.elements().all(|b| map[s.mul(a, b)] == t.mul(map[a], map[b])))
}

/// Isomorphism-invariant fingerprint of an element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ElementInvariant {
    index: usize,
    period: usize,
    right_ideal: usize,
    left_ideal: usize,
    left_stabilized: usize,
    right_stabilized: usize,
}

fn invariants(s: &FiniteSemigroup) -> Vec<ElementInvariant> {
    let n = s.order;
    s.elements()
        .map(|x| {
            let (index, period) = s.index_period(x);
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            row[x] = true;
            col[x] = true;
            for y in 0..n {
                row[s.mul(x, y)] = true;
                col[s.mul(y, x)] = true;
            }
            ElementInvariant {
                index,
                period,
                right_ideal: row.iter().filter(|&&v| v).count(),
                left_ideal: col.iter().filter(|&&v| v).count(),
                left_stabilized: (0..n).filter(|&y| s.mul(x, y) == y).count(),
                right_stabilized: (0..n).filter(|&y| s.mul(y, x) == y).count(),
            }
        })
        .collect()
}

/// Greedy generating set: repeatedly add the smallest element not yet reached.
fn greedy_generators(s: &FiniteSemigroup) -> Vec<usize> {
    let rows = s.rows();
    let mut gens = Vec::new();
    let mut reached = vec![false; s.order];
    while let Some(x) = reached.iter().position(|&r| !r) {
        gens.push(x);
        for y in magma_closure(&rows, &gens) {
            reached[y] = true;
        }
    }
    gens
}

/// Backtracking over images of a generating set. Each generator choice is
/// propagated through right multiplication, so inconsistent branches fail
/// as soon as two words collide.
struct IsoSearch<'a> {
    s: &'a FiniteSemigroup,
    t: &'a FiniteSemigroup,
    inv_s: Vec<ElementInvariant>,
    inv_t: Vec<ElementInvariant>,
    gens: Vec<usize>,
}

impl<'a> IsoSearch<'a> {
    fn new(s: &'a FiniteSemigroup, t: &'a FiniteSemigroup) -> Self {
        IsoSearch {
            s,
            t,
            inv_s: invariants(s),
            inv_t: invariants(t),
            gens: greedy_generators(s),
        }
    }

    fn run(&self) -> Option<Bijection> {
        if self.s.order != self.t.order {
            return None;
        }
        let mut a = self.inv_s.clone();
        let mut b = self.inv_t.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
        let n = self.s.order;
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if self.extend(0, &mut map, &mut used) {
            debug_assert!(is_isomorphism(self.s, self.t, &map));
            Bijection::new(map)
        } else {
            None
        }
    }

    fn extend(&self, depth: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if depth == self.gens.len() {
            return map.iter().all(|&v| v != usize::MAX) && is_isomorphism(self.s, self.t, map);
        }
        let g = self.gens[depth];
        for h in 0..self.t.order {
            if self.inv_s[g] != self.inv_t[h] {
                continue;
            }
            if map[g] != usize::MAX && map[g] != h {
                continue;
            }
            if map[g] == usize::MAX && used[h] {
                continue;
            }
            let saved_map = map.clone();
            let saved_used = used.clone();
            if self.propagate(depth, g, h, map, used) && self.extend(depth + 1, map, used) {
                return true;
            }
            *map = saved_map;
            *used = saved_used;
        }
        false
    }

    // Assign g -> h and close the assigned part under right multiplication by
    // generators 0..=depth.
    fn propagate(
        &self,
        depth: usize,
        g: usize,
        h: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if map[g] == usize::MAX {
            map[g] = h;
            used[h] = true;
        }
        let gens = &self.gens[..=depth];
        let mut queue: Vec<usize> = (0..self.s.order).filter(|&x| map[x] != usize::MAX).collect();
        while let Some(x) = queue.pop() {
            for &k in gens {
                let (xk, kx) = (self.s.mul(x, k), self.s.mul(k, x));
                let img_xk = self.t.mul(map[x], map[k]);
                let img_kx = self.t.mul(map[k], map[x]);
                for (src, img) in [(xk, img_xk), (kx, img_kx)] {
                    if map[src] == usize::MAX {
                        if used[img] || self.inv_s[src] != self.inv_t[img] {
                            return false;
                        }
                        map[src] = img;
                        used[img] = true;
                        queue.push(src);
                    } else if map[src] != img {
                        return false;
                    }
                }
            }
        }
        true
    }
}
