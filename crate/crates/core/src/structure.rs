//! Semilattice decompositions and the structural side of the
//! characterization theorems.
//!
//! Every semigroup has a least semilattice congruence; its classes are the
//! components `S_α` and the quotient is the semilattice `Y`. For unions of
//! groups the components are completely simple. The `check_*` predicates
//! test the structural descriptions of the five inclusion classes in
//! [`crate::identities::predefined_classes`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::FiniteSemigroup;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0:?} is not a subsemigroup")]
pub struct NotASubsemigroup(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeDecomposition {
    /// Component id of each element.
    pub component_of: Vec<usize>,
    /// Components ordered by smallest member.
    pub components: Vec<BTreeSet<usize>>,
    /// The quotient semilattice on component ids.
    pub y: FiniteSemigroup,
}

impl SemilatticeDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `α ≤ β` iff `αβ = α`.
    pub fn le(&self, alpha: usize, beta: usize) -> bool {
        self.y.mul(alpha, beta) == alpha
    }

    pub fn lt(&self, alpha: usize, beta: usize) -> bool {
        alpha != beta && self.le(alpha, beta)
    }

    /// No `β` with `α < β`.
    pub fn is_maximal(&self, alpha: usize) -> bool {
        (0..self.len()).all(|beta| !self.lt(alpha, beta))
    }
}

/// Most specific description of a (sub)semigroup, tested in this order:
/// trivial (reported as `RectangularBand`), left zero, right zero,
/// rectangular band, group of order two, other group, rectangular group,
/// completely simple, other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    LeftZero,
    RightZero,
    RectangularBand,
    GroupOfOrderTwo,
    Group(usize),
    RectangularGroup,
    CompletelySimple,
    Other,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Group(k) => write!(f, "Group({k})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl std::str::FromStr for ComponentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "LeftZero" => ComponentKind::LeftZero,
            "RightZero" => ComponentKind::RightZero,
            "RectangularBand" => ComponentKind::RectangularBand,
            "GroupOfOrderTwo" => ComponentKind::GroupOfOrderTwo,
            "RectangularGroup" => ComponentKind::RectangularGroup,
            "CompletelySimple" => ComponentKind::CompletelySimple,
            "Other" => ComponentKind::Other,
            _ => {
                let inner = s
                    .strip_prefix("Group(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown component kind {s:?}"))?;
                ComponentKind::Group(inner.parse().map_err(|_| format!("bad group order {s:?}"))?)
            }
        })
    }
}

impl ComponentKind {
    /// Membership in `RB ∪ G₂` (left and right zero bands are rectangular).
    pub fn is_rb_or_g2(self) -> bool {
        matches!(
            self,
            ComponentKind::LeftZero
                | ComponentKind::RightZero
                | ComponentKind::RectangularBand
                | ComponentKind::GroupOfOrderTwo
        )
    }
}

/// Kind of a standalone semigroup.
pub fn classify(t: &FiniteSemigroup) -> ComponentKind {
    if t.order() == 1 {
        ComponentKind::RectangularBand
    } else if t.is_left_zero() {
        ComponentKind::LeftZero
    } else if t.is_right_zero() {
        ComponentKind::RightZero
    } else if t.is_rectangular_band() {
        ComponentKind::RectangularBand
    } else if t.is_group() {
        match t.order() {
            2 => ComponentKind::GroupOfOrderTwo,
            k => ComponentKind::Group(k),
        }
    } else if t.is_completely_simple() {
        if t.idempotents_closed() {
            ComponentKind::RectangularGroup
        } else {
            ComponentKind::CompletelySimple
        }
    } else {
        ComponentKind::Other
    }
}

pub fn classify_component(
    s: &FiniteSemigroup,
    subset: &BTreeSet<usize>,
) -> Result<ComponentKind, NotASubsemigroup> {
    s.restrict(subset)
        .map(|t| classify(&t))
        .map_err(|e| NotASubsemigroup(e.0))
}

/// `T ∈ R₀`, counting the trivial semigroup.
fn is_r0(t: &FiniteSemigroup) -> bool {
    t.is_right_zero()
}

fn is_g2(t: &FiniteSemigroup) -> bool {
    t.order() == 2 && t.is_group()
}

/// Congruence closure of `{(x, x²)} ∪ {(xy, yx)}`: the finest congruence
/// whose quotient is a semilattice. Classes are ordered by smallest member.
pub fn least_semilattice_congruence(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let n = s.order();
    let mut uf = UnionFind::new(n);
    for x in s.elements() {
        uf.union(x, s.mul(x, x));
        for y in s.elements() {
            uf.union(s.mul(x, y), s.mul(y, x));
        }
    }
    // a ≈ rep(a) must be compatible with multiplication on both sides
    loop {
        let mut changed = false;
        for a in 0..n {
            let r = uf.find(a);
            if r == a {
                continue;
            }
            for c in 0..n {
                changed |= uf.union(s.mul(a, c), s.mul(r, c));
                changed |= uf.union(s.mul(c, a), s.mul(c, r));
            }
        }
        if !changed {
            break;
        }
    }
    uf.classes()
}

/// Whether `component_of` is a congruence with semilattice quotient.
pub fn is_semilattice_congruence(s: &FiniteSemigroup, component_of: &[usize]) -> bool {
    let k = component_of.iter().max().map_or(0, |m| m + 1);
    let mut y = vec![usize::MAX; k * k];
    for a in s.elements() {
        for b in s.elements() {
            let cell = &mut y[component_of[a] * k + component_of[b]];
            let v = component_of[s.mul(a, b)];
            if *cell == usize::MAX {
                *cell = v;
            } else if *cell != v {
                return false;
            }
        }
    }
    (0..k).all(|a| y[a * k + a] == a && (0..k).all(|b| y[a * k + b] == y[b * k + a]))
}

pub fn decompose(s: &FiniteSemigroup) -> SemilatticeDecomposition {
    let classes = least_semilattice_congruence(s);
    let mut component_of = vec![0; s.order()];
    for (id, class) in classes.iter().enumerate() {
        for &x in class {
            component_of[x] = id;
        }
    }
    let k = classes.len();
    let mut y = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            y[a * k + b] = component_of[s.mul(classes[a][0], classes[b][0])];
        }
    }
    SemilatticeDecomposition {
        component_of,
        components: classes.into_iter().map(|c| c.into_iter().collect()).collect(),
        y: FiniteSemigroup::from_flat(k, y).expect("quotient of a semigroup is a semigroup"),
    }
}

/// Every pair of components is comparable.
pub fn is_chain(d: &SemilatticeDecomposition) -> bool {
    let k = d.len();
    (0..k).all(|a| (0..k).all(|b| d.le(a, b) || d.le(b, a)))
}

/// One named condition of a structural check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub holds: bool,
    pub conditions: Vec<Condition>,
}

impl StructureReport {
    fn from_conditions(conditions: Vec<Condition>) -> Self {
        StructureReport {
            holds: conditions.iter().all(|c| c.holds),
            conditions,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn condition(name: &str, witness: Option<String>) -> Condition {
    Condition {
        name: name.to_owned(),
        holds: witness.is_none(),
        witness,
    }
}

/// First element of `items` for which `bad` returns a description.
fn first_failure<I, F>(items: I, mut bad: F) -> Option<String>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Option<String>,
{
    items.into_iter().find_map(bad)
}

struct Components<'a> {
    s: &'a FiniteSemigroup,
    y: &'a FiniteSemigroup,
    component_of: &'a [usize],
    members: &'a [BTreeSet<usize>],
}

impl Components<'_> {
    fn alpha(&self, x: usize) -> usize {
        self.component_of[x]
    }

    fn join(&self, a: usize, b: usize) -> usize {
        self.y.mul(a, b)
    }

    fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.y.mul(a, b) == a
    }

    fn is_maximal(&self, a: usize) -> bool {
        (0..self.y.order()).all(|b| !self.lt(a, b))
    }

    fn theta(&self, x: usize, y: usize) -> usize {
        self.s.mul(self.s.mul(x, y), x)
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.s
            .elements()
            .flat_map(move |x| self.s.elements().map(move |y| (x, y)))
    }

    /// `S_α S_β ⊆ S_{αβ}`.
    fn products_respect_y(&self) -> Option<String> {
        first_failure(self.pairs(), |(x, y)| {
            let xy = self.s.mul(x, y);
            (self.alpha(xy) != self.join(self.alpha(x), self.alpha(y)))
                .then(|| format!("x={x}, y={y}: xy={xy} outside S_(αβ)"))
        })
    }

    /// `xy = (θ_x y)(θ_y x)` for the canonical `θ_x(y) = xyx`.
    fn theta_product(&self) -> Option<String> {
        first_failure(self.pairs(), |(x, y)| {
            let p = self.s.mul(self.theta(x, y), self.theta(y, x));
            (p != self.s.mul(x, y)).then(|| format!("x={x}, y={y}: (θ_x y)(θ_y x)={p}"))
        })
    }

    /// `θ_x` restricted to `S_β` lands in `target(αβ)` and is a homomorphism.
    fn theta_homomorphic<F>(&self, target: F) -> Option<String>
    where
        F: Fn(usize) -> BTreeSet<usize>,
    {
        first_failure(self.pairs(), |(x, y)| {
            let ab = self.join(self.alpha(x), self.alpha(y));
            let img = self.theta(x, y);
            if !target(ab).contains(&img) {
                return Some(format!("x={x}, y={y}: θ_x y={img} outside target component"));
            }
            let beta = self.alpha(y);
            first_failure(self.members[beta].iter(), |&z| {
                let lhs = self.theta(x, self.s.mul(y, z));
                let rhs = self.s.mul(img, self.theta(x, z));
                (lhs != rhs).then(|| format!("x={x}, y={y}, z={z}: θ_x(yz) != θ_x(y)θ_x(z)"))
            })
        })
    }

    /// `θ_{(θ_x y)(θ_y x)} z = θ_y θ_x z` whenever `right_zero(αβγ)`.
    fn theta_composition<F>(&self, right_zero: F) -> Option<String>
    where
        F: Fn(usize) -> bool,
    {
        first_failure(self.pairs(), |(x, y)| {
            let ab = self.join(self.alpha(x), self.alpha(y));
            let u = self.s.mul(self.theta(x, y), self.theta(y, x));
            first_failure(self.s.elements(), |z| {
                if !right_zero(self.join(ab, self.alpha(z))) {
                    return None;
                }
                let lhs = self.theta(u, z);
                let rhs = self.theta(y, self.theta(x, z));
                (lhs != rhs).then(|| format!("x={x}, y={y}, z={z}: θ_(θ_x y)(θ_y x) z={lhs}, θ_y θ_x z={rhs}"))
            })
        })
    }

    /// On `S_α`: `θ_one = θ_x θ_y = θ_x` for all `x, y` in `members`.
    fn theta_collapse(&self, alpha: usize, one: usize, members: &BTreeSet<usize>) -> Option<String> {
        let domain = &self.members[alpha];
        first_failure(members.iter(), |&x| {
            first_failure(members.iter(), |&y| {
                first_failure(domain.iter(), |&z| {
                    let base = self.theta(one, z);
                    let both = self.theta(x, self.theta(y, z));
                    let single = self.theta(x, z);
                    (base != both || base != single)
                        .then(|| format!("α={alpha}, x={x}, y={y}, z={z}: θ_1 z={base}, θ_x θ_y z={both}, θ_x z={single}"))
                })
            })
        })
    }
}

/// Chain of `RB ∪ G₂` components with absorbing lower components and only
/// trivial groups below the top.
pub fn check_theorem1_structure(s: &FiniteSemigroup) -> StructureReport {
    let d = decompose(s);
    let kinds: Vec<ComponentKind> = d
        .components
        .iter()
        .map(|c| classify_component(s, c).expect("components are subsemigroups"))
        .collect();
    let chain = (!is_chain(&d)).then(|| "Y is not totally ordered".to_owned());
    let components = first_failure(0..d.len(), |a| {
        (!kinds[a].is_rb_or_g2()).then(|| format!("component {a} is {}", kinds[a]))
    });
    let absorbing = first_failure(0..d.len(), |a| {
        first_failure((0..d.len()).filter(|&b| d.lt(a, b)), |b| {
            first_failure(d.components[a].iter(), |&x| {
                first_failure(d.components[b].iter(), |&y| {
                    (s.mul(x, y) != x || s.mul(y, x) != x)
                        .then(|| format!("x={x} in S_{a}, y={y} in S_{b}"))
                })
            })
        })
    });
    let trivial_groups = first_failure(0..d.len(), |a| {
        (!d.is_maximal(a) && kinds[a] == ComponentKind::GroupOfOrderTwo)
            .then(|| format!("non-maximal component {a} is a group of order two"))
    });
    StructureReport::from_conditions(vec![
        condition("chain", chain),
        condition("components_rb_or_g2", components),
        condition("lower_absorbs", absorbing),
        condition("nonmaximal_groups_trivial", trivial_groups),
    ])
}

/// `S²`, its decomposition and the induced partition `S_α = {x : x² ∈ (S²)_α}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareComponents {
    pub square: BTreeSet<usize>,
    /// Decomposition of `S²` as a standalone semigroup; element `k` there is
    /// the `k`-th smallest member of `square`.
    pub square_decomposition: SemilatticeDecomposition,
    /// `α` of each element of `S`.
    pub component_of: Vec<usize>,
    /// The sets `S_α`.
    pub components: Vec<BTreeSet<usize>>,
}

pub fn square_components(s: &FiniteSemigroup) -> SquareComponents {
    let square = s.square();
    let standalone = s.restrict(&square).expect("S² is a subsemigroup");
    let square_decomposition = decompose(&standalone);
    let local: BTreeMap<usize, usize> = square.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let component_of: Vec<usize> = s
        .elements()
        .map(|x| square_decomposition.component_of[local[&s.mul(x, x)]])
        .collect();
    let mut components = vec![BTreeSet::new(); square_decomposition.len()];
    for x in s.elements() {
        components[component_of[x]].insert(x);
    }
    SquareComponents {
        square,
        square_decomposition,
        component_of,
        components,
    }
}

/// Conditions (1)–(4.3) over `S_α = {x : x² ∈ (S²)_α}` with the canonical
/// `θ_x(y) = xyx`.
pub fn check_theorem2_structure(s: &FiniteSemigroup) -> StructureReport {
    let sq = square_components(s);
    let y = &sq.square_decomposition.y;
    let comps = Components {
        s,
        y,
        component_of: &sq.component_of,
        members: &sq.components,
    };
    let k = sq.components.len();
    let squares: Vec<BTreeSet<usize>> = sq
        .components
        .iter()
        .map(|c| s.subset_product(c, c))
        .collect();
    let square_tables: Vec<Option<FiniteSemigroup>> =
        squares.iter().map(|q| s.restrict(q).ok()).collect();
    let square_r0 = |a: usize| square_tables[a].as_ref().is_some_and(is_r0);
    let square_g2 = |a: usize| square_tables[a].as_ref().is_some_and(is_g2);

    let semilattice = comps.products_respect_y();
    let c1 = first_failure(0..k, |a| {
        (!square_r0(a) && !square_g2(a)).then(|| format!("(S_{a})² = {:?} not in R₀ ∪ G₂", squares[a]))
    });
    let c2 = first_failure(0..k, |a| {
        (!comps.is_maximal(a) && square_g2(a))
            .then(|| format!("non-maximal α={a} with (S_α)² of order two"))
    });
    let c3 = first_failure(0..k, |a| {
        (sq.components[a] != squares[a] && squares[a].len() != 1)
            .then(|| format!("S_{a} - (S_{a})² nonempty but |(S_{a})²| = {}", squares[a].len()))
    });
    let c4 = comps.theta_homomorphic(|ab| squares[ab].clone());
    let c41 = first_failure((0..k).filter(|&a| square_g2(a)), |a| {
        first_failure(squares[a].iter(), |&g| {
            let one = match s.local_identity(g) {
                Ok(e) => e,
                Err(_) => return Some(format!("g={g} not in a subgroup")),
            };
            // θ_g = θ_{1_g}, then θ_{1_g} = θ_x θ_y = θ_x on S_α
            let tg = first_failure(sq.components[a].iter(), |&z| {
                (comps.theta(g, z) != comps.theta(one, z))
                    .then(|| format!("g={g}, z={z}: θ_g z != θ_(1_g) z"))
            });
            tg.or_else(|| comps.theta_collapse(a, one, &sq.components[a]))
        })
    });
    let c42 = comps.theta_composition(square_r0);
    let c43 = comps.theta_product();
    StructureReport::from_conditions(vec![
        condition("semilattice_of_semigroups", semilattice),
        condition("squares_r0_or_g2", c1),
        condition("nonmaximal_square_groups_trivial", c2),
        condition("non_square_part_forces_trivial", c3),
        condition("theta_homomorphism", c4),
        condition("theta_group_collapse", c41),
        condition("theta_composition", c42),
        condition("theta_product", c43),
    ])
}

fn component_tables(s: &FiniteSemigroup, d: &SemilatticeDecomposition) -> Vec<FiniteSemigroup> {
    d.components
        .iter()
        .map(|c| s.restrict(c).expect("components are subsemigroups"))
        .collect()
}

/// Conditions for the `COR3` class over `decompose(S)` with the canonical
/// `θ_x(y) = xyx`.
pub fn check_corollary3_structure(s: &FiniteSemigroup) -> StructureReport {
    let d = decompose(s);
    let tables = component_tables(s, &d);
    let comps = Components {
        s,
        y: &d.y,
        component_of: &d.component_of,
        members: &d.components,
    };
    let k = d.len();
    let r0 = |a: usize| is_r0(&tables[a]);
    let g2 = |a: usize| is_g2(&tables[a]);
    let c11 = first_failure(0..k, |a| {
        (!r0(a) && !g2(a)).then(|| format!("S_{a} is {}", classify(&tables[a])))
    });
    let c12 = first_failure(0..k, |a| {
        (!d.is_maximal(a) && g2(a)).then(|| format!("non-maximal α={a} is a group of order two"))
    });
    let ca = comps.theta_homomorphic(|ab| d.components[ab].clone());
    let cb = comps.theta_composition(r0);
    let cc = first_failure((0..k).filter(|&a| g2(a)), |a| {
        let local_one = tables[a].identity().expect("groups have an identity");
        let one = *d.components[a].iter().nth(local_one).expect("in range");
        comps.theta_collapse(a, one, &d.components[a])
    });
    let product = comps.theta_product();
    StructureReport::from_conditions(vec![
        condition("components_r0_or_g2", c11),
        condition("nonmaximal_groups_trivial", c12),
        condition("theta_homomorphism", ca),
        condition("theta_composition", cb),
        condition("theta_group_collapse", cc),
        condition("theta_product", product),
    ])
}

fn all_components(s: &FiniteSemigroup, name: &str, ok: impl Fn(&FiniteSemigroup) -> bool) -> StructureReport {
    let d = decompose(s);
    let tables = component_tables(s, &d);
    let bad = first_failure(0..d.len(), |a| {
        (!ok(&tables[a])).then(|| format!("component {a} = {:?} is {}", d.components[a], classify(&tables[a])))
    });
    StructureReport::from_conditions(vec![condition(name, bad)])
}

/// Every component is right zero or a group of order at most two.
pub fn check_theorem4_structure(s: &FiniteSemigroup) -> StructureReport {
    all_components(s, "components_r0_or_g2", |t| is_r0(t) || is_g2(t))
}

/// Every component is a rectangular band or a group of order two.
pub fn check_theorem5_structure(s: &FiniteSemigroup) -> StructureReport {
    all_components(s, "components_rb_or_g2", |t| classify(t).is_rb_or_g2())
}

/// `E_S · E_S ⊆ E_S`.
pub fn idempotent_product_closed(s: &FiniteSemigroup) -> bool {
    s.idempotents_closed()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub elements: Vec<usize>,
    pub kind: ComponentKind,
}

/// Summary consumed by the command-line `decompose` report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub order: usize,
    pub components: Vec<ComponentReport>,
    pub y_table: Vec<Vec<usize>>,
    pub chain: bool,
    pub union_of_groups: bool,
    pub idempotents_closed: bool,
    /// Structural predicate per theorem id (`t1`, `t2`, `c3`, `t4`, `t5`).
    pub structure: BTreeMap<String, bool>,
}

impl DecompositionReport {
    pub fn new(s: &FiniteSemigroup) -> Self {
        let d = decompose(s);
        let components = d
            .components
            .iter()
            .map(|c| ComponentReport {
                elements: c.iter().copied().collect(),
                kind: classify_component(s, c).expect("components are subsemigroups"),
            })
            .collect();
        let structure = BTreeMap::from([
            ("t1".to_owned(), check_theorem1_structure(s).holds),
            ("t2".to_owned(), check_theorem2_structure(s).holds),
            ("c3".to_owned(), check_corollary3_structure(s).holds),
            ("t4".to_owned(), check_theorem4_structure(s).holds),
            ("t5".to_owned(), check_theorem5_structure(s).holds),
        ]);
        DecompositionReport {
            order: s.order(),
            components,
            y_table: d.y.rows(),
            chain: is_chain(&d),
            union_of_groups: s.is_union_of_groups(),
            idempotents_closed: s.idempotents_closed(),
            structure,
        }
    }

    /// Line-oriented `key: value` rendering with the same content as the
    /// JSON form.
    pub fn to_text(&self) -> String {
        let mut out = format!("order: {}\ncomponents: {}\n", self.order, self.components.len());
        for (i, c) in self.components.iter().enumerate() {
            out += &format!("component {i}: kind={} elements={:?}\n", c.kind, c.elements);
        }
        out += &format!("y_table: {:?}\n", self.y_table);
        out += &format!("chain: {}\n", self.chain);
        out += &format!("union_of_groups: {}\n", self.union_of_groups);
        out += &format!("idempotents_closed: {}\n", self.idempotents_closed);
        for (k, v) in &self.structure {
            out += &format!("{k}: {v}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(rows: &[&[usize]]) -> FiniteSemigroup {
        FiniteSemigroup::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn z2() -> FiniteSemigroup {
        sg(&[&[0, 1], &[1, 0]])
    }

    fn lz2() -> FiniteSemigroup {
        sg(&[&[0, 0], &[1, 1]])
    }

    fn rz(k: usize) -> FiniteSemigroup {
        FiniteSemigroup::new((0..k).map(|_| (0..k).collect()).collect()).unwrap()
    }

    fn rb22() -> FiniteSemigroup {
        lz2().direct_product(&rz(2))
    }

    fn chain3() -> FiniteSemigroup {
        sg(&[&[0, 0, 0], &[0, 1, 2], &[0, 1, 2]])
    }

    fn meet2() -> FiniteSemigroup {
        sg(&[&[0, 0], &[0, 1]])
    }

    fn left_group() -> FiniteSemigroup {
        lz2().direct_product(&z2())
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(least_semilattice_congruence(&meet2()), vec![vec![0], vec![1]]);
        assert_eq!(least_semilattice_congruence(&rb22()), vec![vec![0, 1, 2, 3]]);
        assert_eq!(
            least_semilattice_congruence(&sg(&[&[0, 0], &[0, 0]])),
            vec![vec![0, 1]]
        );
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose(&z2());
        assert_eq!(d.len(), 1);
        assert_eq!(d.y.order(), 1);

        let d = decompose(&chain3());
        assert_eq!(d.components, vec![set(&[0]), set(&[1, 2])]);
        assert_eq!(d.y.rows(), vec![vec![0, 0], vec![0, 1]]);
        assert!(is_chain(&d));

        let d = decompose(&meet2());
        assert_eq!(d.len(), 2);
        assert_eq!(d.y, meet2());
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_component(&chain3(), &set(&[1, 2])),
            Ok(ComponentKind::RightZero)
        );
        assert_eq!(
            classify_component(&chain3(), &set(&[0])),
            Ok(ComponentKind::RectangularBand)
        );
        assert_eq!(classify(&z2()), ComponentKind::GroupOfOrderTwo);
        assert_eq!(classify(&left_group()), ComponentKind::RectangularGroup);
        assert_eq!(classify(&rb22()), ComponentKind::RectangularBand);
        assert_eq!(classify(&lz2()), ComponentKind::LeftZero);
        assert_eq!(classify(&lz2().transpose()), ComponentKind::RightZero);
        assert_eq!(classify(&meet2()), ComponentKind::Other);
        let z3 = sg(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        assert_eq!(classify(&z3), ComponentKind::Group(3));
        assert_eq!(
            classify_component(&z2(), &set(&[1])),
            Err(NotASubsemigroup(vec![1]))
        );
    }

    #[test]
    fn kinds_round_trip_through_text() {
        for k in [
            ComponentKind::LeftZero,
            ComponentKind::Group(6),
            ComponentKind::Other,
            ComponentKind::RectangularGroup,
        ] {
            assert_eq!(k.to_string().parse::<ComponentKind>(), Ok(k));
        }
        assert!("Group(x)".parse::<ComponentKind>().is_err());
    }

    #[test]
    fn chain_detection() {
        assert!(is_chain(&decompose(&chain3())));
        assert!(is_chain(&decompose(&z2())));
        // {a, b, c} with ab = c below both
        let v = sg(&[&[0, 2, 2], &[2, 1, 2], &[2, 2, 2]]);
        assert!(!is_chain(&decompose(&v)));
    }

    #[test]
    fn theorem1_structure() {
        assert!(check_theorem1_structure(&chain3()).holds);
        assert!(check_theorem1_structure(&z2()).holds);
        let r = check_theorem1_structure(&left_group());
        assert!(!r.holds);
        assert!(!r.condition("components_rb_or_g2").unwrap().holds);
    }

    #[test]
    fn square_component_examples() {
        let null = sg(&[&[0, 0], &[0, 0]]);
        let sq = square_components(&null);
        assert_eq!(sq.square, set(&[0]));
        assert_eq!(sq.components, vec![set(&[0, 1])]);
        let sq = square_components(&z2());
        assert_eq!(sq.square, set(&[0, 1]));
        assert_eq!(sq.components, vec![set(&[0, 1])]);
    }

    #[test]
    fn theorem2_structure() {
        assert!(check_theorem2_structure(&rz(2)).holds);
        assert!(check_theorem2_structure(&z2()).holds);
        let r = check_theorem2_structure(&lz2());
        assert!(!r.holds);
        assert!(!r.condition("squares_r0_or_g2").unwrap().holds);
    }

    #[test]
    fn corollary3_structure() {
        assert!(check_corollary3_structure(&rz(2)).holds);
        assert!(check_corollary3_structure(&meet2()).holds);
        assert!(!check_corollary3_structure(&lz2()).holds);
    }

    #[test]
    fn theorem4_and_5_structure() {
        assert!(check_theorem4_structure(&rz(3)).holds);
        assert!(check_theorem4_structure(&z2()).holds);
        assert!(!check_theorem4_structure(&lz2()).holds);
        assert!(check_theorem5_structure(&rb22()).holds);
        assert!(!check_theorem5_structure(&left_group()).holds);
        assert!(check_theorem5_structure(&z2()).holds);
    }

    /// Brandt semigroup B₂ = {0, e11, e12, e21, e22}, e_ij e_jk = e_ik.
    fn brandt_b2() -> FiniteSemigroup {
        let name = |i: usize, j: usize| 1 + 2 * i + j;
        let mut rows = vec![vec![0; 5]; 5];
        for a in 0..4 {
            for b in 0..4 {
                let (i, j) = (a / 2, a % 2);
                let (k, l) = (b / 2, b % 2);
                rows[1 + a][1 + b] = if j == k { name(i, l) } else { 0 };
            }
        }
        FiniteSemigroup::new(rows).unwrap()
    }

    /// A₂: Rees 0-matrix over the trivial group with P = [[1,1],[1,0]].
    fn a2() -> FiniteSemigroup {
        let p = [[true, true], [true, false]];
        let mut rows = vec![vec![0; 5]; 5];
        for a in 0..4 {
            for b in 0..4 {
                let (i, lam) = (a / 2, a % 2);
                let (j, mu) = (b / 2, b % 2);
                rows[1 + a][1 + b] = if p[lam][j] { 1 + 2 * i + mu } else { 0 };
            }
        }
        FiniteSemigroup::new(rows).unwrap()
    }

    #[test]
    fn idempotent_closure() {
        assert!(idempotent_product_closed(&rb22()));
        assert!(idempotent_product_closed(&z2()));
        // idempotents of B₂ are 0, e11, e22 and commute
        assert!(idempotent_product_closed(&brandt_b2()));
        assert!(!idempotent_product_closed(&a2()));
    }

    #[test]
    fn report_text_mentions_every_field() {
        let r = DecompositionReport::new(&chain3());
        let text = r.to_text();
        assert!(text.contains("component 0: kind=RectangularBand elements=[0]"));
        assert!(text.contains("component 1: kind=RightZero elements=[1, 2]"));
        assert!(text.contains("chain: true"));
        assert!(text.contains("t1: true"));
    }
}
