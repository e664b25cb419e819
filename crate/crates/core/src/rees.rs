//! Rees matrix semigroups `I × G × Λ` with product
//! `(i, a, μ)(j, b, λ) = (i, a·p_{μj}·b, λ)`, sandwich normalization, and
//! Rees coordinates of completely simple semigroups.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::{is_isomorphism, Bijection, FiniteSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("group table is not a group")]
    NotAGroup,
    #[error("index sets must be nonempty")]
    EmptyIndexSet,
    #[error("sandwich matrix must be {rows}×{cols}")]
    SandwichShape { rows: usize, cols: usize },
    #[error("sandwich entry {0} is not a group element")]
    BadSandwichEntry(usize),
    #[error("semigroup is not completely simple")]
    NotCompletelySimple,
}

/// Group `G`, index sizes `|I|`, `|Λ|` and the `|Λ| × |I|` sandwich matrix
/// `P` of group elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReesSpec {
    pub group: FiniteSemigroup,
    pub i_size: usize,
    pub l_size: usize,
    /// `sandwich[μ][j] = p_{μj}`.
    pub sandwich: Vec<Vec<usize>>,
}

impl ReesSpec {
    pub fn validate(&self) -> Result<usize, ReesError> {
        if !self.group.is_group() {
            return Err(ReesError::NotAGroup);
        }
        if self.i_size == 0 || self.l_size == 0 {
            return Err(ReesError::EmptyIndexSet);
        }
        let shape = ReesError::SandwichShape {
            rows: self.l_size,
            cols: self.i_size,
        };
        if self.sandwich.len() != self.l_size || self.sandwich.iter().any(|r| r.len() != self.i_size)
        {
            return Err(shape);
        }
        if let Some(&bad) = self.sandwich.iter().flatten().find(|&&p| p >= self.group.order()) {
            return Err(ReesError::BadSandwichEntry(bad));
        }
        Ok(self.group.identity().expect("groups have an identity"))
    }

    pub fn order(&self) -> usize {
        self.i_size * self.group.order() * self.l_size
    }

    /// Index of `(i, g, λ)`.
    pub fn index(&self, i: usize, g: usize, lambda: usize) -> usize {
        (i * self.group.order() + g) * self.l_size + lambda
    }

    /// Inverse of [`ReesSpec::index`].
    pub fn coords(&self, x: usize) -> (usize, usize, usize) {
        let lambda = x % self.l_size;
        let rest = x / self.l_size;
        (rest / self.group.order(), rest % self.group.order(), lambda)
    }

    /// All sandwich entries in the first row and column are the identity.
    pub fn is_normalized(&self) -> bool {
        let Ok(e) = self.validate() else {
            return false;
        };
        self.sandwich[0].iter().all(|&p| p == e) && self.sandwich.iter().all(|r| r[0] == e)
    }
}

pub fn build_rees(spec: &ReesSpec) -> Result<FiniteSemigroup, ReesError> {
    spec.validate()?;
    let g = &spec.group;
    let n = spec.order();
    let mut table = vec![0; n * n];
    for x in 0..n {
        let (i, a, mu) = spec.coords(x);
        for y in 0..n {
            let (j, b, lambda) = spec.coords(y);
            let c = g.mul(g.mul(a, spec.sandwich[mu][j]), b);
            table[x * n + y] = spec.index(i, c, lambda);
        }
    }
    Ok(FiniteSemigroup::from_flat(n, table).expect("Rees matrix products associate"))
}

fn group_inverse(g: &FiniteSemigroup, e: usize, a: usize) -> usize {
    g.elements().find(|&b| g.mul(a, b) == e).expect("group elements are invertible")
}

/// Rewrites `P` so its first row and column are the identity.
///
/// With `a_j = p_{0j}` and `b_λ = p_{λ0} p_{00}⁻¹` the new matrix is
/// `q_{λj} = b_λ⁻¹ p_{λj} a_j⁻¹` and `(i, g, λ) ↦ (i, a_i g b_λ, λ)` is an
/// isomorphism from the old semigroup onto the new one, returned alongside.
pub fn normalize_sandwich(spec: &ReesSpec) -> Result<(ReesSpec, Bijection), ReesError> {
    let e = spec.validate()?;
    let g = &spec.group;
    let inv = |a| group_inverse(g, e, a);
    let p = &spec.sandwich;
    let a: Vec<usize> = (0..spec.i_size).map(|j| p[0][j]).collect();
    let b: Vec<usize> = (0..spec.l_size).map(|l| g.mul(p[l][0], inv(p[0][0]))).collect();
    let sandwich = (0..spec.l_size)
        .map(|l| {
            (0..spec.i_size)
                .map(|j| g.mul(g.mul(inv(b[l]), p[l][j]), inv(a[j])))
                .collect()
        })
        .collect();
    let normalized = ReesSpec {
        group: spec.group.clone(),
        i_size: spec.i_size,
        l_size: spec.l_size,
        sandwich,
    };
    let iso = (0..spec.order())
        .map(|x| {
            let (i, h, l) = spec.coords(x);
            spec.index(i, g.mul(g.mul(a[i], h), b[l]), l)
        })
        .collect();
    Ok((normalized, Bijection::new(iso).expect("twisting is bijective")))
}

/// Partition by `aS¹`, classes ordered by smallest member.
pub fn green_r_classes(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    classes_by(s, |a| {
        let mut ideal: BTreeSet<usize> = s.elements().map(|x| s.mul(a, x)).collect();
        ideal.insert(a);
        ideal
    })
}

/// Partition by `S¹a`, classes ordered by smallest member.
pub fn green_l_classes(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    classes_by(s, |a| {
        let mut ideal: BTreeSet<usize> = s.elements().map(|x| s.mul(x, a)).collect();
        ideal.insert(a);
        ideal
    })
}

fn classes_by<K: Ord>(s: &FiniteSemigroup, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let keys: Vec<K> = s.elements().map(&key).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in s.elements() {
        match out.iter_mut().find(|c| keys[c[0]] == keys[x]) {
            Some(c) => c.push(x),
            None => out.push(vec![x]),
        }
    }
    out
}

/// Rees coordinates of a completely simple semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinatization {
    pub spec: ReesSpec,
    /// `iso[x]` is the element of `S` represented by Rees index `x`.
    pub iso: Bijection,
}

/// Takes `e` = smallest idempotent, `G = eSe` (in ascending element order),
/// `I` = idempotents of the L-class of `e` (one per R-class), `Λ` =
/// idempotents of the R-class of `e` (one per L-class) and `p_{λi} = λ·i`.
/// The map `(i, g, λ) ↦ i·g·λ` is checked to be an isomorphism before
/// returning.
pub fn coordinatize(s: &FiniteSemigroup) -> Result<Coordinatization, ReesError> {
    if !s.is_completely_simple() {
        return Err(ReesError::NotCompletelySimple);
    }
    let e = *s.idempotents().iter().next().ok_or(ReesError::NotCompletelySimple)?;
    let group_elems: Vec<usize> = s
        .elements()
        .map(|x| s.mul(s.mul(e, x), e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let r_classes = green_r_classes(s);
    let l_classes = green_l_classes(s);
    let r_of_e = r_classes.iter().find(|c| c.contains(&e)).expect("e has an R-class");
    let l_of_e = l_classes.iter().find(|c| c.contains(&e)).expect("e has an L-class");
    let i_reps: Vec<usize> = l_of_e.iter().copied().filter(|&x| s.is_idempotent(x)).collect();
    let l_reps: Vec<usize> = r_of_e.iter().copied().filter(|&x| s.is_idempotent(x)).collect();

    let local = |x: usize| {
        group_elems
            .binary_search(&x)
            .map_err(|_| ReesError::NotCompletelySimple)
    };
    let mut group_table = Vec::with_capacity(group_elems.len() * group_elems.len());
    for &a in &group_elems {
        for &b in &group_elems {
            group_table.push(local(s.mul(a, b))?);
        }
    }
    let group = FiniteSemigroup::from_flat(group_elems.len(), group_table)
        .map_err(|_| ReesError::NotCompletelySimple)?;
    let sandwich = l_reps
        .iter()
        .map(|&lam| i_reps.iter().map(|&i| local(s.mul(lam, i))).collect())
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    let spec = ReesSpec {
        group,
        i_size: i_reps.len(),
        l_size: l_reps.len(),
        sandwich,
    };
    let rees = build_rees(&spec).map_err(|_| ReesError::NotCompletelySimple)?;
    let iso: Vec<usize> = (0..spec.order())
        .map(|x| {
            let (i, g, l) = spec.coords(x);
            s.mul(s.mul(i_reps[i], group_elems[g]), l_reps[l])
        })
        .collect();
    if !is_isomorphism(&rees, s, &iso) {
        return Err(ReesError::NotCompletelySimple);
    }
    Ok(Coordinatization {
        spec,
        iso: Bijection::new(iso).expect("checked bijective"),
    })
}
