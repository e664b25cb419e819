//! Brute-force reference implementations used to cross-check the library.
//! Nothing here calls the library's search, canonical-form or evaluation code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use semiforge::identities::{Factor, Inclusion, InclusionClassExpr, Word};
use semiforge::FiniteSemigroup;

pub type Rows = Vec<Vec<usize>>;

pub fn associative(t: &Rows) -> bool {
    let n = t.len();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Table of the copy of `t` obtained by renaming `x` to `p[x]`.
pub fn relabel(t: &Rows, p: &[usize]) -> Rows {
    let n = t.len();
    let mut out = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            out[p[a]][p[b]] = p[t[a][b]];
        }
    }
    out
}

pub fn transpose(t: &Rows) -> Rows {
    let n = t.len();
    (0..n).map(|a| (0..n).map(|b| t[b][a]).collect()).collect()
}

/// Lexicographically least relabeling, by trying every permutation.
pub fn min_relabeling(t: &Rows) -> Rows {
    permutations(t.len())
        .iter()
        .map(|p| relabel(t, p))
        .min()
        .expect("at least one permutation")
}

pub fn isomorphic(s: &Rows, t: &Rows) -> bool {
    s.len() == t.len() && permutations(s.len()).iter().any(|p| relabel(s, p) == *t)
}

/// Whether `map` (element of `s` -> element of `t`) is a bijective homomorphism.
pub fn is_iso_map(s: &FiniteSemigroup, t: &FiniteSemigroup, map: &[usize]) -> bool {
    let n = s.order();
    if t.order() != n || map.len() != n {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    image.len() == n
        && image.iter().all(|&v| v < n)
        && (0..n).all(|a| (0..n).all(|b| map[s.mul(a, b)] == t.mul(map[a], map[b])))
}

/// Every table on `0..n`, row-major, as an odometer.
pub fn all_tables(n: usize) -> impl Iterator<Item = Rows> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    (0..total).map(move |mut k| {
        let mut flat = vec![0; cells];
        for c in flat.iter_mut().rev() {
            *c = k % n;
            k /= n;
        }
        flat.chunks(n).map(<[usize]>::to_vec).collect()
    })
}

/// Classes of associative tables of order `n` represented by their least
/// relabeling (least of it and its transpose's when `anti`).
pub fn brute_force_classes(n: usize, anti: bool) -> BTreeSet<Rows> {
    all_tables(n)
        .filter(associative)
        .map(|t| {
            let c = min_relabeling(&t);
            if anti {
                c.min(min_relabeling(&transpose(&t)))
            } else {
                c
            }
        })
        .collect()
}

/// Word value with every power expanded to repeated letters and multiplied
/// left to right.
pub fn naive_eval(s: &FiniteSemigroup, w: &Word, env: &BTreeMap<char, usize>) -> usize {
    let letters: Vec<usize> = w
        .factors()
        .iter()
        .flat_map(|f| std::iter::repeat_n(env[&f.var], f.exp as usize))
        .collect();
    letters[1..].iter().fold(letters[0], |acc, &x| s.mul(acc, x))
}

pub fn naive_member(s: &FiniteSemigroup, expr: &InclusionClassExpr) -> bool {
    let vars: Vec<char> = expr.variables().iter().copied().collect();
    let n = s.order();
    let total = n.pow(vars.len() as u32);
    (0..total).all(|mut k| {
        let mut env = BTreeMap::new();
        for &v in vars.iter().rev() {
            env.insert(v, k % n);
            k /= n;
        }
        expr.inclusions().iter().all(|inc| {
            let allowed: BTreeSet<usize> = inc.rhs().iter().map(|w| naive_eval(s, w, &env)).collect();
            inc.lhs().iter().all(|w| allowed.contains(&naive_eval(s, w, &env)))
        })
    })
}

pub fn random_word<R: Rng>(rng: &mut R, vars: &[char], max_len: usize, max_exp: u32) -> Word {
    let len = rng.gen_range(1..=max_len);
    let factors = (0..len)
        .map(|_| Factor {
            var: vars[rng.gen_range(0..vars.len())],
            exp: rng.gen_range(1..=max_exp),
        })
        .collect();
    Word::new(factors).expect("valid factors")
}

pub fn random_expr<R: Rng>(rng: &mut R) -> InclusionClassExpr {
    const VARS: [char; 5] = ['x', 'y', 'z', 'u', 'v'];
    let nvars = rng.gen_range(1..=VARS.len());
    let vars = &VARS[..nvars];
    let inclusions = (0..rng.gen_range(1..=3))
        .map(|_| {
            let lhs = (0..rng.gen_range(1..=2)).map(|_| random_word(rng, vars, 4, 5)).collect();
            let rhs = (0..rng.gen_range(1..=4)).map(|_| random_word(rng, vars, 4, 5)).collect();
            Inclusion::new(lhs, rhs).expect("nonempty sides")
        })
        .collect();
    InclusionClassExpr::new(inclusions).expect("nonempty")
}

use semiforge::builders::{cyclic_group, left_zero, rectangular_band, right_zero, ComponentSpec, Hom, StrongSemilatticeData};
use semiforge::enumverify::{enumerate_semigroups, EnumerationRequest, Mode};

const CHAIN_MENU: [ComponentSpec; 9] = [
    ComponentSpec::Trivial,
    ComponentSpec::G2,
    ComponentSpec::RightZero(2),
    ComponentSpec::RightZero(3),
    ComponentSpec::LeftZero(2),
    ComponentSpec::LeftZero(3),
    ComponentSpec::RectangularBand(2, 2),
    ComponentSpec::RectangularBand(2, 3),
    ComponentSpec::RectangularBand(3, 2),
];

/// Every bottom-to-top list over a fixed component menu with total order at
/// most `max_total`.
pub fn chain_grid(max_total: usize) -> Vec<Vec<ComponentSpec>> {
    fn go(left: usize, cur: &mut Vec<ComponentSpec>, out: &mut Vec<Vec<ComponentSpec>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for c in CHAIN_MENU {
            if c.size() <= left {
                cur.push(c);
                go(left - c.size(), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(max_total, &mut Vec::new(), &mut out);
    out
}

/// Component menu for strong semilattices: every entry is a rectangular band
/// or a group of order two.
pub fn rb_or_g2_menu() -> Vec<FiniteSemigroup> {
    vec![
        cyclic_group(1),
        cyclic_group(2),
        right_zero(2),
        left_zero(2),
        rectangular_band(2, 2),
    ]
}

fn first_idempotent(s: &FiniteSemigroup) -> usize {
    *s.idempotents().iter().next().expect("finite semigroups have idempotents")
}

/// Strong semilattices over every semilattice of order at most 3, with
/// components drawn from `rb_or_g2_menu`. Structure maps are constant onto an
/// idempotent, or the identity when every component is the same semigroup.
pub fn strong_grid() -> Vec<StrongSemilatticeData> {
    let menu = rb_or_g2_menu();
    let mut out = Vec::new();
    for n in 1..=3 {
        let ys: Vec<FiniteSemigroup> = enumerate_semigroups(&EnumerationRequest::new(n, Mode::UpToIso))
            .unwrap()
            .into_iter()
            .filter(FiniteSemigroup::is_semilattice)
            .collect();
        for y in ys {
            let below = |a: usize, b: usize| a != b && y.mul(a, b) == a;
            let total = menu.len().pow(n as u32);
            for mut k in 0..total {
                let mut components = Vec::new();
                for _ in 0..n {
                    components.push(menu[k % menu.len()].clone());
                    k /= menu.len();
                }
                let mut homs = Vec::new();
                for from in 0..n {
                    for to in 0..n {
                        if below(to, from) {
                            let e = first_idempotent(&components[to]);
                            homs.push(Hom { from, to, map: vec![e; components[from].order()] });
                        }
                    }
                }
                out.push(StrongSemilatticeData { y: y.clone(), components: components.clone(), homs });
                if components.iter().all(|c| *c == components[0]) && n > 1 {
                    let mut homs = Vec::new();
                    for from in 0..n {
                        for to in 0..n {
                            if below(to, from) {
                                homs.push(Hom { from, to, map: components[0].elements().collect() });
                            }
                        }
                    }
                    out.push(StrongSemilatticeData { y: y.clone(), components, homs });
                }
            }
        }
    }
    out
}
