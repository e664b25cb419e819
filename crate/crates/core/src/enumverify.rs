//! Exhaustive enumeration of small semigroups and machine verification of
//! the characterization theorems over the enumerated universe.
//!
//! Tables are generated by backtracking over cells with an associativity
//! check after every assignment, then deduplicated by canonical form. The
//! search is split by the values of the first `n` cells and the pieces run
//! in parallel; results are merged into a sorted set, so output does not
//! depend on the number of worker threads.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builders::{build_theta_product, extract_theta_data};
use crate::identities::{is_member, predefined, InclusionClassExpr};
use crate::semigroup::{canonical_form, FiniteSemigroup};
use crate::structure::{
    check_corollary3_structure, check_theorem1_structure, check_theorem2_structure,
    check_theorem4_structure, check_theorem5_structure, classify, decompose, StructureReport,
};

pub const DEFAULT_MAX_ORDER: usize = 5;
/// Orders above this are never enumerated, whatever the envelope says.
pub const HARD_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("order {order} is outside the enumeration envelope (max {max})")]
    OrderTooLarge { order: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// One representative per isomorphism class.
    UpToIso,
    /// One representative per class of isomorphism or anti-isomorphism.
    UpToIsoAnti,
    /// Every associative table on `0..n`.
    Labeled,
}

/// Order in which the backtracking search fills table cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOrder {
    RowMajor,
    ColumnMajor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRequest {
    pub order: usize,
    pub mode: Mode,
    /// Keep only members of this class.
    pub filter: Option<InclusionClassExpr>,
    /// Largest order accepted.
    pub max_order: usize,
}

impl EnumerationRequest {
    pub fn new(order: usize, mode: Mode) -> Self {
        EnumerationRequest {
            order,
            mode,
            filter: None,
            max_order: DEFAULT_MAX_ORDER,
        }
    }

    fn check(&self) -> Result<(), EnumError> {
        let max = self.max_order.min(HARD_MAX_ORDER);
        if self.order == 0 {
            Err(EnumError::ZeroOrder)
        } else if self.order > max {
            Err(EnumError::OrderTooLarge {
                order: self.order,
                max,
            })
        } else {
            Ok(())
        }
    }
}

/// Rejects `max_order` up front so no work is done for an out-of-range scan.
fn check_scan(max_order: usize, envelope: usize) -> Result<(), EnumError> {
    let mut req = EnumerationRequest::new(max_order, Mode::UpToIso);
    req.max_order = envelope;
    req.check()
}

const UNSET: usize = usize::MAX;

struct Search {
    n: usize,
    cells: Vec<(usize, usize)>,
}

impl Search {
    fn new(n: usize, order: CellOrder) -> Self {
        let cells = (0..n * n)
            .map(|k| match order {
                CellOrder::RowMajor => (k / n, k % n),
                CellOrder::ColumnMajor => (k % n, k / n),
            })
            .collect();
        Search { n, cells }
    }

    /// Whether the just-assigned cell `(a, b)` keeps every fully determined
    /// triple associative. Each triple is examined when the last of its four
    /// cells `(x,y)`, `(xy,z)`, `(y,z)`, `(x,yz)` is assigned.
    fn consistent(&self, t: &[usize], a: usize, b: usize) -> bool {
        let n = self.n;
        let get = |x: usize, y: usize| t[x * n + y];
        let v = get(a, b);
        for z in 0..n {
            // (ab)z = a(bz)
            let (vz, bz) = (get(v, z), get(b, z));
            if vz != UNSET && bz != UNSET {
                let rhs = get(a, bz);
                if rhs != UNSET && rhs != vz {
                    return false;
                }
            }
            // (za)b = z(ab)
            let (za, zv) = (get(z, a), get(z, v));
            if za != UNSET && zv != UNSET {
                let lhs = get(za, b);
                if lhs != UNSET && lhs != zv {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                // (xy)b = x(yb) with xy = a
                if get(x, y) == a {
                    let yb = get(y, b);
                    if yb != UNSET {
                        let rhs = get(x, yb);
                        if rhs != UNSET && rhs != v {
                            return false;
                        }
                    }
                }
                // a(xy) = (ax)y with xy = b
                if get(x, y) == b {
                    let ax = get(a, x);
                    if ax != UNSET {
                        let lhs = get(ax, y);
                        if lhs != UNSET && lhs != v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&self, t: &mut Vec<usize>, depth: usize, out: &mut Vec<Vec<usize>>) {
        if depth == self.cells.len() {
            out.push(t.clone());
            return;
        }
        let (a, b) = self.cells[depth];
        for v in 0..self.n {
            t[a * self.n + b] = v;
            if self.consistent(t, a, b) {
                self.run(t, depth + 1, out);
            }
        }
        t[a * self.n + b] = UNSET;
    }

    /// All associative tables whose first `n` cells (in search order) are
    /// `prefix`.
    fn complete_prefix(&self, prefix: &[usize]) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut t = vec![UNSET; n * n];
        for (k, &v) in prefix.iter().enumerate() {
            let (a, b) = self.cells[k];
            t[a * n + b] = v;
            if !self.consistent(&t, a, b) {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        self.run(&mut t, prefix.len(), &mut out);
        out
    }
}

fn prefixes(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    for _ in 0..len {
        all = all
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    all
}

fn class_key(s: &FiniteSemigroup, mode: Mode) -> FiniteSemigroup {
    match mode {
        Mode::Labeled => s.clone(),
        Mode::UpToIso => canonical_form(s),
        Mode::UpToIsoAnti => canonical_form(s).min(canonical_form(&s.transpose())),
    }
}

/// Enumerates with the default row-major search.
pub fn enumerate_semigroups(req: &EnumerationRequest) -> Result<Vec<FiniteSemigroup>, EnumError> {
    enumerate_with_cell_order(req, CellOrder::RowMajor)
}

/// One representative per class in ascending table order.
pub fn enumerate_with_cell_order(
    req: &EnumerationRequest,
    cell_order: CellOrder,
) -> Result<Vec<FiniteSemigroup>, EnumError> {
    req.check()?;
    let n = req.order;
    let search = Search::new(n, cell_order);
    let reps: BTreeSet<FiniteSemigroup> = prefixes(n, n)
        .into_par_iter()
        .map(|prefix| {
            search
                .complete_prefix(&prefix)
                .into_iter()
                .map(|t| {
                    let s = FiniteSemigroup::from_flat(n, t).expect("search emits associative tables");
                    class_key(&s, req.mode)
                })
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(reps
        .into_iter()
        .filter(|s| req.filter.as_ref().is_none_or(|f| is_member(s, f)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub order: usize,
    pub total: usize,
    pub members: usize,
}

/// Members of `expr` among the enumerated semigroups of each order `1..=max_order`.
pub fn count_class_members(
    expr: &InclusionClassExpr,
    max_order: usize,
    mode: Mode,
) -> Result<Vec<ClassCount>, EnumError> {
    count_class_members_within(expr, max_order, mode, DEFAULT_MAX_ORDER)
}

/// [`count_class_members`] with an explicit enumeration envelope.
pub fn count_class_members_within(
    expr: &InclusionClassExpr,
    max_order: usize,
    mode: Mode,
    envelope: usize,
) -> Result<Vec<ClassCount>, EnumError> {
    check_scan(max_order, envelope)?;
    (1..=max_order)
        .map(|order| {
            let mut req = EnumerationRequest::new(order, mode);
            req.max_order = envelope;
            let all = enumerate_semigroups(&req)?;
            Ok(ClassCount {
                order,
                total: all.len(),
                members: all.iter().filter(|s| is_member(s, expr)).count(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    C3,
    T4,
    T5,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::T1,
        TheoremId::T2,
        TheoremId::C3,
        TheoremId::T4,
        TheoremId::T5,
    ];

    /// Name of the predefined inclusion class on the identity side.
    pub fn class_name(self) -> &'static str {
        match self {
            TheoremId::T1 => "THM1",
            TheoremId::T2 => "THM2",
            TheoremId::C3 => "COR3",
            TheoremId::T4 => "THM4",
            TheoremId::T5 => "THM5",
        }
    }

    pub fn structure(self, s: &FiniteSemigroup) -> StructureReport {
        match self {
            TheoremId::T1 => check_theorem1_structure(s),
            TheoremId::T2 => check_theorem2_structure(s),
            TheoremId::C3 => check_corollary3_structure(s),
            TheoremId::T4 => check_theorem4_structure(s),
            TheoremId::T5 => check_theorem5_structure(s),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremId::T1 => "t1",
            TheoremId::T2 => "t2",
            TheoremId::C3 => "c3",
            TheoremId::T4 => "t4",
            TheoremId::T5 => "t5",
        })
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem {s:?} (expected t1, t2, c3, t4 or t5)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MismatchSide {
    /// In the inclusion class, structural check fails.
    ClassOnly,
    /// Structural check holds, not in the inclusion class.
    StructureOnly,
    /// The `θ`-product rebuilt from the canonical data differs from the input.
    ConverseRebuild,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub table: Vec<Vec<usize>>,
    pub side: MismatchSide,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTally {
    pub order: usize,
    pub total: usize,
    pub in_class: usize,
    pub structural: usize,
    /// Class members rebuilt through the `θ`-product (t2 only).
    pub rebuilt: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub class: String,
    pub per_order: Vec<OrderTally>,
}

impl VerificationReport {
    pub fn scanned(&self) -> usize {
        self.per_order.iter().map(|t| t.total).sum()
    }

    pub fn mismatch_count(&self) -> usize {
        self.per_order.iter().map(|t| t.mismatches.len()).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.mismatch_count() == 0
    }
}

enum Outcome {
    Agree,
    Disagree(MismatchSide, Option<String>),
}

fn first_failed(r: &StructureReport) -> Option<String> {
    r.conditions
        .iter()
        .find(|c| !c.holds)
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
}

/// Compares class membership against the structural description for every
/// semigroup of order `1..=max_order` (up to isomorphism).
///
/// `t2` checks only that class members pass the structural check, and
/// additionally rebuilds every member of the corollary class (`COR3`) from
/// its canonical `θ` data. The other theorems are checked in both directions.
pub fn verify_theorem(id: TheoremId, max_order: usize) -> Result<VerificationReport, EnumError> {
    verify_theorem_within(id, max_order, DEFAULT_MAX_ORDER)
}

/// [`verify_theorem`] with an explicit enumeration envelope.
pub fn verify_theorem_within(
    id: TheoremId,
    max_order: usize,
    envelope: usize,
) -> Result<VerificationReport, EnumError> {
    check_scan(max_order, envelope)?;
    let class = predefined(id.class_name()).expect("predefined class");
    let cor3 = predefined("COR3").expect("predefined class");
    let mut per_order = Vec::new();
    for order in 1..=max_order {
        let mut req = EnumerationRequest::new(order, Mode::UpToIso);
        req.max_order = envelope;
        let universe = enumerate_semigroups(&req)?;
        let rows: Vec<(bool, bool, bool, Vec<Outcome>)> = universe
            .par_iter()
            .map(|s| {
                let member = is_member(s, &class);
                let report = id.structure(s);
                let mut outcomes = Vec::new();
                match (member, report.holds) {
                    (true, false) => outcomes.push(Outcome::Disagree(MismatchSide::ClassOnly, first_failed(&report))),
                    (false, true) if id != TheoremId::T2 => {
                        outcomes.push(Outcome::Disagree(MismatchSide::StructureOnly, None))
                    }
                    _ => outcomes.push(Outcome::Agree),
                }
                let mut rebuilt = false;
                if id == TheoremId::T2 && is_member(s, &cor3) {
                    rebuilt = true;
                    let (data, relabel) = extract_theta_data(s);
                    match build_theta_product(&data) {
                        Ok(t) if t == s.relabel(&relabel) => {}
                        Ok(_) => outcomes.push(Outcome::Disagree(
                            MismatchSide::ConverseRebuild,
                            Some("rebuilt table differs".to_owned()),
                        )),
                        Err(e) => outcomes.push(Outcome::Disagree(
                            MismatchSide::ConverseRebuild,
                            Some(e.to_string()),
                        )),
                    }
                }
                (member, report.holds, rebuilt, outcomes)
            })
            .collect();
        let mut tally = OrderTally {
            order,
            total: universe.len(),
            in_class: rows.iter().filter(|r| r.0).count(),
            structural: rows.iter().filter(|r| r.1).count(),
            rebuilt: rows.iter().filter(|r| r.2).count(),
            mismatches: Vec::new(),
        };
        for (s, (_, _, _, outcomes)) in universe.iter().zip(rows) {
            for o in outcomes {
                if let Outcome::Disagree(side, detail) = o {
                    tally.mismatches.push(Mismatch {
                        table: s.rows(),
                        side,
                        detail,
                    });
                }
            }
        }
        per_order.push(tally);
    }
    Ok(VerificationReport {
        theorem: id,
        class: class.to_string(),
        per_order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteTally {
    pub order: usize,
    pub members: usize,
    /// Members whose top component is a group of order two.
    pub exceptional: usize,
    pub violations: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteReport {
    pub per_order: Vec<NoteTally>,
}

impl NoteReport {
    pub fn violation_count(&self) -> usize {
        self.per_order.iter().map(|t| t.violations.len()).sum()
    }
}

/// Outcome of the chain-shape check for one member of the `THM1` class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainShape {
    AllRectangularBands,
    /// All rectangular bands except one maximal group of order two.
    MaximalGroupOfOrderTwo,
    Violation,
}

/// Whether `s` is a chain of rectangular bands, allowing a single maximal
/// component that is a group of order two.
pub fn chain_shape(s: &FiniteSemigroup) -> ChainShape {
    let d = decompose(s);
    let mut groups = 0;
    for (a, c) in d.components.iter().enumerate() {
        let kind = classify(&s.restrict(c).expect("components are subsemigroups"));
        match kind {
            crate::structure::ComponentKind::GroupOfOrderTwo if d.is_maximal(a) => groups += 1,
            crate::structure::ComponentKind::LeftZero
            | crate::structure::ComponentKind::RightZero
            | crate::structure::ComponentKind::RectangularBand => {}
            _ => return ChainShape::Violation,
        }
    }
    match groups {
        0 => ChainShape::AllRectangularBands,
        1 => ChainShape::MaximalGroupOfOrderTwo,
        _ => ChainShape::Violation,
    }
}

pub fn verify_note_after_theorem1(max_order: usize) -> Result<NoteReport, EnumError> {
    verify_note_after_theorem1_within(max_order, DEFAULT_MAX_ORDER)
}

/// [`verify_note_after_theorem1`] with an explicit enumeration envelope.
pub fn verify_note_after_theorem1_within(max_order: usize, envelope: usize) -> Result<NoteReport, EnumError> {
    check_scan(max_order, envelope)?;
    let class = predefined("THM1").expect("predefined class");
    let mut per_order = Vec::new();
    for order in 1..=max_order {
        let mut req = EnumerationRequest::new(order, Mode::UpToIso);
        req.max_order = envelope;
        req.filter = Some(class.clone());
        let members = enumerate_semigroups(&req)?;
        let shapes: Vec<ChainShape> = members.iter().map(chain_shape).collect();
        per_order.push(NoteTally {
            order,
            members: members.len(),
            exceptional: shapes
                .iter()
                .filter(|&&c| c == ChainShape::MaximalGroupOfOrderTwo)
                .count(),
            violations: members
                .iter()
                .zip(&shapes)
                .filter(|(_, &c)| c == ChainShape::Violation)
                .map(|(s, _)| s.rows())
                .collect(),
        });
    }
    Ok(NoteReport { per_order })
}
