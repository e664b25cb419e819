//! Constructions that produce members of the characterized classes from
//! structural data: chains of rectangular bands and groups of order two,
//! strong semilattices of semigroups, and `θ`-products.
//!
//! Every builder validates its output table before returning it, and the
//! chain, strong-semilattice and `θ`-product builders also confirm class
//! membership of the result.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::identities::{is_member, predefined};
use crate::semigroup::{Bijection, FiniteSemigroup, TableError};
use crate::structure::{classify, decompose};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("empty component list")]
    EmptySpec,
    #[error("component {position} is a group of order two below the top of the chain")]
    NontrivialG2BelowTop { position: usize },
    #[error("bad component spec {0:?}")]
    BadComponentSpec(String),
    #[error("index semigroup is not a semilattice")]
    NotASemilattice,
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("no map given from component {from} to component {to}")]
    MissingHom { from: usize, to: usize },
    #[error("map from component {from} to {to} is not a homomorphism")]
    NotAHomomorphism { from: usize, to: usize },
    #[error("maps through {alpha} <= {beta} <= {gamma} do not compose")]
    IncompatibleHoms {
        alpha: usize,
        beta: usize,
        gamma: usize,
    },
    #[error("component {0} is not right zero or a group of order two")]
    ComponentNotAllowed(usize),
    #[error("theta maps must be {0} maps on {0} elements")]
    ThetaShape(usize),
    #[error("theta condition ({condition}) violated: {witness}")]
    ThetaConditionViolated {
        condition: ThetaCondition,
        witness: String,
    },
    #[error("result is not in class {0}")]
    NotInClass(&'static str),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Which requirement on a `θ` family failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaCondition {
    /// `θ_x` restricted to `S_β` is a homomorphism into `S_{αβ}`.
    A,
    /// `θ_{(θ_x y)(θ_y x)} = θ_y θ_x` on `S_γ` when `S_{αβγ}` is right zero.
    B,
    /// `θ_1 = θ_x θ_y = θ_x` on a group component.
    C,
}

impl fmt::Display for ThetaCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaCondition::A => "a",
            ThetaCondition::B => "b",
            ThetaCondition::C => "c",
        })
    }
}

pub fn cyclic_group(k: usize) -> FiniteSemigroup {
    assert!(k >= 1);
    FiniteSemigroup::new((0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect())
        .expect("cyclic group")
}

pub fn left_zero(k: usize) -> FiniteSemigroup {
    assert!(k >= 1);
    FiniteSemigroup::new((0..k).map(|a| vec![a; k]).collect()).expect("left zero")
}

pub fn right_zero(k: usize) -> FiniteSemigroup {
    assert!(k >= 1);
    FiniteSemigroup::new((0..k).map(|_| (0..k).collect()).collect()).expect("right zero")
}

/// `I × Λ` with `(i, λ)(j, μ) = (i, μ)`; `(i, λ)` is numbered `i·q + λ`.
pub fn rectangular_band(p: usize, q: usize) -> FiniteSemigroup {
    left_zero(p).direct_product(&right_zero(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentSpec {
    Trivial,
    G2,
    RectangularBand(usize, usize),
    RightZero(usize),
    LeftZero(usize),
}

impl ComponentSpec {
    pub fn table(&self) -> FiniteSemigroup {
        match *self {
            ComponentSpec::Trivial => cyclic_group(1),
            ComponentSpec::G2 => cyclic_group(2),
            ComponentSpec::RectangularBand(p, q) => rectangular_band(p, q),
            ComponentSpec::RightZero(k) => right_zero(k),
            ComponentSpec::LeftZero(k) => left_zero(k),
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            ComponentSpec::Trivial => 1,
            ComponentSpec::G2 => 2,
            ComponentSpec::RectangularBand(p, q) => p * q,
            ComponentSpec::RightZero(k) | ComponentSpec::LeftZero(k) => k,
        }
    }
}

/// `trivial | g2 | rb:PxQ | rz:K | lz:K`
impl FromStr for ComponentSpec {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BuildError::BadComponentSpec(s.to_owned());
        let size = |t: &str| match t.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(bad()),
        };
        let s_trim = s.trim();
        match s_trim.split_once(':') {
            None if s_trim.eq_ignore_ascii_case("trivial") => Ok(ComponentSpec::Trivial),
            None if s_trim.eq_ignore_ascii_case("g2") => Ok(ComponentSpec::G2),
            Some((kind, arg)) => match kind.trim().to_ascii_lowercase().as_str() {
                "rz" => Ok(ComponentSpec::RightZero(size(arg)?)),
                "lz" => Ok(ComponentSpec::LeftZero(size(arg)?)),
                "rb" => {
                    let (p, q) = arg.split_once(['x', 'X']).ok_or_else(bad)?;
                    Ok(ComponentSpec::RectangularBand(size(p)?, size(q)?))
                }
                _ => Err(bad()),
            },
            None => Err(bad()),
        }
    }
}

impl fmt::Display for ComponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentSpec::Trivial => write!(f, "trivial"),
            ComponentSpec::G2 => write!(f, "g2"),
            ComponentSpec::RectangularBand(p, q) => write!(f, "rb:{p}x{q}"),
            ComponentSpec::RightZero(k) => write!(f, "rz:{k}"),
            ComponentSpec::LeftZero(k) => write!(f, "lz:{k}"),
        }
    }
}

/// Parses a bottom-to-top list separated by `;` or newlines. Lines starting
/// with `#` are ignored.
pub fn parse_chain_spec(text: &str) -> Result<Vec<ComponentSpec>, BuildError> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split(';'))
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Chain of components listed bottom to top. Products inside a component
/// follow its table; across components the lower element absorbs the
/// higher one (`xy = yx = x`).
pub fn build_chain(specs: &[ComponentSpec]) -> Result<FiniteSemigroup, BuildError> {
    if specs.is_empty() {
        return Err(BuildError::EmptySpec);
    }
    if let Some(position) = specs[..specs.len() - 1]
        .iter()
        .position(|c| *c == ComponentSpec::G2)
    {
        return Err(BuildError::NontrivialG2BelowTop { position });
    }
    let tables: Vec<FiniteSemigroup> = specs.iter().map(ComponentSpec::table).collect();
    let mut level = Vec::new();
    let mut local = Vec::new();
    for (c, t) in tables.iter().enumerate() {
        for x in t.elements() {
            level.push(c);
            local.push(x);
        }
    }
    let n = level.len();
    let offsets: Vec<usize> = tables
        .iter()
        .scan(0, |acc, t| {
            let o = *acc;
            *acc += t.order();
            Some(o)
        })
        .collect();
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = match level[x].cmp(&level[y]) {
                std::cmp::Ordering::Less => x,
                std::cmp::Ordering::Greater => y,
                std::cmp::Ordering::Equal => {
                    offsets[level[x]] + tables[level[x]].mul(local[x], local[y])
                }
            };
        }
    }
    let s = FiniteSemigroup::from_flat(n, table)?;
    ensure_member(&s, "THM1")?;
    Ok(s)
}

fn ensure_member(s: &FiniteSemigroup, class: &'static str) -> Result<(), BuildError> {
    let expr = predefined(class).expect("predefined class");
    if is_member(s, &expr) {
        Ok(())
    } else {
        Err(BuildError::NotInClass(class))
    }
}

/// A structure map `φ_{from → to}` for `to ≤ from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hom {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongSemilatticeData {
    pub y: FiniteSemigroup,
    /// One semigroup per element of `y`.
    pub components: Vec<FiniteSemigroup>,
    /// Maps for every strict `α < β`; identity maps may be omitted.
    pub homs: Vec<Hom>,
}

fn offsets(components: &[FiniteSemigroup]) -> Vec<usize> {
    let mut out = Vec::with_capacity(components.len() + 1);
    let mut acc = 0;
    for c in components {
        out.push(acc);
        acc += c.order();
    }
    out.push(acc);
    out
}

fn check_components(y: &FiniteSemigroup, components: &[FiniteSemigroup]) -> Result<(), BuildError> {
    if !y.is_semilattice() {
        return Err(BuildError::NotASemilattice);
    }
    if components.len() != y.order() {
        return Err(BuildError::ComponentCount {
            expected: y.order(),
            found: components.len(),
        });
    }
    Ok(())
}

/// Product `x·y = φ_{α→αβ}(x) · φ_{β→αβ}(y)` inside `S_{αβ}`. Components are
/// numbered consecutively in the order of `y`'s elements.
pub fn build_strong_semilattice(data: &StrongSemilatticeData) -> Result<FiniteSemigroup, BuildError> {
    let y = &data.y;
    check_components(y, &data.components)?;
    let k = y.order();
    let mut maps: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; k]; k];
    for h in &data.homs {
        if h.from >= k || h.to >= k || y.mul(h.to, h.from) != h.to {
            return Err(BuildError::NotAHomomorphism {
                from: h.from,
                to: h.to,
            });
        }
        maps[h.from][h.to] = Some(h.map.clone());
    }
    for (a, comp) in data.components.iter().enumerate() {
        let id: Vec<usize> = comp.elements().collect();
        match &maps[a][a] {
            None => maps[a][a] = Some(id),
            Some(m) if *m == id => {}
            Some(_) => return Err(BuildError::NotAHomomorphism { from: a, to: a }),
        }
    }
    for beta in 0..k {
        for alpha in (0..k).filter(|&a| y.mul(a, beta) == a) {
            let m = maps[beta][alpha]
                .as_ref()
                .ok_or(BuildError::MissingHom { from: beta, to: alpha })?;
            let (src, dst) = (&data.components[beta], &data.components[alpha]);
            let hom = m.len() == src.order()
                && m.iter().all(|&v| v < dst.order())
                && src
                    .elements()
                    .all(|a| src.elements().all(|b| m[src.mul(a, b)] == dst.mul(m[a], m[b])));
            if !hom {
                return Err(BuildError::NotAHomomorphism { from: beta, to: alpha });
            }
        }
    }
    for gamma in 0..k {
        for beta in (0..k).filter(|&b| y.mul(b, gamma) == b) {
            for alpha in (0..k).filter(|&a| y.mul(a, beta) == a) {
                let g_b = maps[gamma][beta].as_ref().expect("checked");
                let b_a = maps[beta][alpha].as_ref().expect("checked");
                let g_a = maps[gamma][alpha].as_ref().expect("checked");
                if (0..g_b.len()).any(|x| g_a[x] != b_a[g_b[x]]) {
                    return Err(BuildError::IncompatibleHoms { alpha, beta, gamma });
                }
            }
        }
    }

    let off = offsets(&data.components);
    let n = off[k];
    let comp_of: Vec<usize> = (0..k).flat_map(|a| std::iter::repeat_n(a, data.components[a].order())).collect();
    let mut table = vec![0; n * n];
    for x in 0..n {
        let a = comp_of[x];
        for z in 0..n {
            let b = comp_of[z];
            let d = y.mul(a, b);
            let px = maps[a][d].as_ref().expect("checked")[x - off[a]];
            let pz = maps[b][d].as_ref().expect("checked")[z - off[b]];
            table[x * n + z] = off[d] + data.components[d].mul(px, pz);
        }
    }
    let s = FiniteSemigroup::from_flat(n, table)?;
    if data.components.iter().all(|c| classify(c).is_rb_or_g2()) {
        ensure_member(&s, "THM5")?;
    }
    Ok(s)
}

/// Components over a semilattice `y` together with maps `θ_x` on the
/// concatenated element set (components numbered in the order of `y`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaData {
    pub y: FiniteSemigroup,
    pub components: Vec<FiniteSemigroup>,
    /// `theta[x][z] = θ_x(z)` in global numbering.
    pub theta: Vec<Vec<usize>>,
}

struct ThetaLayout<'a> {
    data: &'a ThetaData,
    off: Vec<usize>,
    comp_of: Vec<usize>,
}

impl ThetaLayout<'_> {
    fn join(&self, a: usize, b: usize) -> usize {
        self.data.y.mul(a, b)
    }

    /// Product of two elements of the same component, via its table.
    fn mul_in(&self, x: usize, z: usize) -> Option<usize> {
        let a = self.comp_of[x];
        (self.comp_of[z] == a)
            .then(|| self.off[a] + self.data.components[a].mul(x - self.off[a], z - self.off[a]))
    }

    fn members(&self, a: usize) -> std::ops::Range<usize> {
        self.off[a]..self.off[a + 1]
    }

    fn theta(&self, x: usize, z: usize) -> usize {
        self.data.theta[x][z]
    }

    fn violation(condition: ThetaCondition, witness: String) -> BuildError {
        BuildError::ThetaConditionViolated { condition, witness }
    }

    fn check_a(&self) -> Result<(), BuildError> {
        let n = self.comp_of.len();
        for x in 0..n {
            for y in 0..n {
                let ab = self.join(self.comp_of[x], self.comp_of[y]);
                if self.comp_of[self.theta(x, y)] != ab {
                    return Err(Self::violation(
                        ThetaCondition::A,
                        format!("θ_{x}({y}) = {} not in S_{ab}", self.theta(x, y)),
                    ));
                }
                for z in self.members(self.comp_of[y]) {
                    let yz = self.mul_in(y, z).expect("same component");
                    let rhs = self.mul_in(self.theta(x, y), self.theta(x, z)).expect("same component");
                    if self.theta(x, yz) != rhs {
                        return Err(Self::violation(
                            ThetaCondition::A,
                            format!("θ_{x}({y}·{z}) != θ_{x}({y})·θ_{x}({z})"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_b(&self, right_zero: &[bool]) -> Result<(), BuildError> {
        let n = self.comp_of.len();
        for x in 0..n {
            for y in 0..n {
                let ab = self.join(self.comp_of[x], self.comp_of[y]);
                let u = self.mul_in(self.theta(x, y), self.theta(y, x)).expect("checked by (a)");
                for z in 0..n {
                    if !right_zero[self.join(ab, self.comp_of[z])] {
                        continue;
                    }
                    if self.theta(u, z) != self.theta(y, self.theta(x, z)) {
                        return Err(Self::violation(
                            ThetaCondition::B,
                            format!("x={x}, y={y}, z={z}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_c(&self, groups: &[usize]) -> Result<(), BuildError> {
        for &a in groups {
            let one = self.off[a] + self.data.components[a].identity().expect("group");
            for x in self.members(a) {
                for y in self.members(a) {
                    for z in self.members(a) {
                        let base = self.theta(one, z);
                        if self.theta(x, self.theta(y, z)) != base || self.theta(x, z) != base {
                            return Err(Self::violation(
                                ThetaCondition::C,
                                format!("component {a}: x={x}, y={y}, z={z}"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Product `xy = (θ_x y)(θ_y x)`, evaluated in the component of `θ_x y`.
pub fn build_theta_product(data: &ThetaData) -> Result<FiniteSemigroup, BuildError> {
    let y = &data.y;
    check_components(y, &data.components)?;
    let k = y.order();
    let off = offsets(&data.components);
    let n = off[k];
    if data.theta.len() != n || data.theta.iter().any(|m| m.len() != n || m.iter().any(|&v| v >= n)) {
        return Err(BuildError::ThetaShape(n));
    }
    let right_zero: Vec<bool> = data.components.iter().map(FiniteSemigroup::is_right_zero).collect();
    let is_g2: Vec<bool> = data
        .components
        .iter()
        .map(|c| c.order() == 2 && c.is_group())
        .collect();
    for a in 0..k {
        if !right_zero[a] && !is_g2[a] {
            return Err(BuildError::ComponentNotAllowed(a));
        }
        let maximal = (0..k).all(|b| b == a || y.mul(a, b) != a);
        if is_g2[a] && !maximal {
            return Err(BuildError::NontrivialG2BelowTop { position: a });
        }
    }
    let layout = ThetaLayout {
        data,
        comp_of: (0..k).flat_map(|a| std::iter::repeat_n(a, data.components[a].order())).collect(),
        off,
    };
    layout.check_a()?;
    layout.check_b(&right_zero)?;
    let groups: Vec<usize> = (0..k).filter(|&a| is_g2[a]).collect();
    layout.check_c(&groups)?;

    let mut table = vec![0; n * n];
    for x in 0..n {
        for z in 0..n {
            table[x * n + z] = layout
                .mul_in(layout.theta(x, z), layout.theta(z, x))
                .expect("checked by (a)");
        }
    }
    let s = FiniteSemigroup::from_flat(n, table)?;
    ensure_member(&s, "THM2")?;
    Ok(s)
}

/// Reads off `θ_x(y) = xyx` together with the decomposition of `s`.
///
/// The returned bijection sends each element of `s` to its index in the
/// concatenated numbering used by [`ThetaData`], so for members of the
/// corollary class `build_theta_product(&data)` equals `s.relabel(&map)`.
pub fn extract_theta_data(s: &FiniteSemigroup) -> (ThetaData, Bijection) {
    let d = decompose(s);
    let order: Vec<usize> = d.components.iter().flat_map(|c| c.iter().copied()).collect();
    let relabel = Bijection::new(order).expect("components partition S").inverse();
    let components = d
        .components
        .iter()
        .map(|c: &BTreeSet<usize>| s.restrict(c).expect("components are subsemigroups"))
        .collect();
    let n = s.order();
    let mut theta = vec![vec![0; n]; n];
    for x in s.elements() {
        for z in s.elements() {
            theta[relabel.apply(x)][relabel.apply(z)] = relabel.apply(s.mul(s.mul(x, z), x));
        }
    }
    (
        ThetaData {
            y: d.y,
            components,
            theta,
        },
        relabel,
    )
}
