//! Inclusion-class expressions `[W₁ ⊆ T₁; …; W_k ⊆ T_k]` and membership
//! testing over finite semigroups.
//!
//! Text grammar:
//!
//! ```text
//! expr      := inclusion (';' inclusion)*
//! inclusion := wordset ('in' | '⊆' | '<=') wordset | word '=' word
//! wordset   := word | '{' word (',' word)* '}'
//! word      := (letter ('^' int)?)+
//! ```
//!
//! Whitespace may separate factors of a word. A standalone `in` (not
//! adjacent to another letter) is always the inclusion operator.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semigroup::FiniteSemigroup;

pub const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub var: char,
    pub exp: u32,
}

/// A nonempty product of variable powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    factors: Vec<Factor>,
}

impl Word {
    /// `None` if `factors` is empty, an exponent is outside `1..=MAX_EXPONENT`
    /// or a variable is not a lowercase ASCII letter.
    pub fn new(factors: Vec<Factor>) -> Option<Self> {
        let ok = !factors.is_empty()
            && factors.iter().all(|f| {
                f.var.is_ascii_lowercase() && (1..=MAX_EXPONENT).contains(&f.exp)
            });
        ok.then_some(Word { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn variables(&self) -> impl Iterator<Item = char> + '_ {
        self.factors.iter().map(|f| f.var)
    }
}

/// `lhs ⊆ rhs` over word values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inclusion {
    lhs: Vec<Word>,
    rhs: Vec<Word>,
}

impl Inclusion {
    /// Duplicate words are dropped (first occurrence kept). `None` if either
    /// side is empty.
    pub fn new(lhs: Vec<Word>, rhs: Vec<Word>) -> Option<Self> {
        let lhs = dedup(lhs);
        let rhs = dedup(rhs);
        (!lhs.is_empty() && !rhs.is_empty()).then_some(Inclusion { lhs, rhs })
    }

    pub fn lhs(&self) -> &[Word] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[Word] {
        &self.rhs
    }
}

fn dedup(words: Vec<Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::with_capacity(words.len());
    for w in words {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InclusionClassExpr {
    inclusions: Vec<Inclusion>,
    variables: BTreeSet<char>,
}

impl InclusionClassExpr {
    pub fn new(inclusions: Vec<Inclusion>) -> Option<Self> {
        if inclusions.is_empty() {
            return None;
        }
        let variables = inclusions
            .iter()
            .flat_map(|inc| inc.lhs.iter().chain(&inc.rhs))
            .flat_map(Word::variables)
            .collect();
        Some(InclusionClassExpr {
            inclusions,
            variables,
        })
    }

    pub fn inclusions(&self) -> &[Inclusion] {
        &self.inclusions
    }

    pub fn variables(&self) -> &BTreeSet<char> {
        &self.variables
    }

    /// The conjunction of both expressions.
    pub fn and(&self, other: &InclusionClassExpr) -> InclusionClassExpr {
        let mut inclusions = self.inclusions.clone();
        inclusions.extend(other.inclusions.iter().cloned());
        InclusionClassExpr::new(inclusions).expect("nonempty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    EmptySet,
    BadExponent,
    ExpectedWord,
    ExpectedOperator,
    /// `=` needs a single word on each side.
    BracedEquation,
    UnexpectedToken(char),
    UnterminatedSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {kind:?}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

pub fn parse_inclusion_class(text: &str) -> Result<InclusionClassExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error(ParseErrorKind::EmptyInput));
    }
    let mut inclusions = vec![p.inclusion()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(';') => {
                p.bump();
                inclusions.push(p.inclusion()?);
            }
            Some(c) => return Err(p.error(ParseErrorKind::UnexpectedToken(c))),
        }
    }
    Ok(InclusionClassExpr::new(inclusions).expect("nonempty"))
}

pub fn format_inclusion_class(expr: &InclusionClassExpr) -> String {
    expr.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

enum Operator {
    Subset,
    Equals,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn prev_is_letter(&self) -> bool {
        self.src[..self.pos]
            .chars()
            .next_back()
            .is_some_and(|c| c.is_ascii_alphabetic())
    }

    /// A standalone `in` starts here.
    fn at_in_keyword(&self) -> bool {
        let rest = self.rest();
        rest.starts_with("in")
            && !rest[2..].chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && !self.prev_is_letter()
    }

    fn inclusion(&mut self) -> Result<Inclusion, ParseError> {
        self.skip_ws();
        let (lhs, lhs_braced) = self.wordset()?;
        self.skip_ws();
        let op_pos = self.pos;
        let op = self.operator()?;
        self.skip_ws();
        let (rhs, rhs_braced) = self.wordset()?;
        if matches!(op, Operator::Equals) && (lhs_braced || rhs_braced) {
            return Err(ParseError {
                position: op_pos,
                kind: ParseErrorKind::BracedEquation,
            });
        }
        Ok(Inclusion::new(lhs, rhs).expect("wordsets are nonempty"))
    }

    fn operator(&mut self) -> Result<Operator, ParseError> {
        let rest = self.rest();
        if self.at_in_keyword() {
            self.pos += 2;
            Ok(Operator::Subset)
        } else if rest.starts_with('⊆') {
            self.pos += '⊆'.len_utf8();
            Ok(Operator::Subset)
        } else if rest.starts_with("<=") {
            self.pos += 2;
            Ok(Operator::Subset)
        } else if rest.starts_with('=') {
            self.pos += 1;
            Ok(Operator::Equals)
        } else {
            Err(self.error(ParseErrorKind::ExpectedOperator))
        }
    }

    fn wordset(&mut self) -> Result<(Vec<Word>, bool), ParseError> {
        if self.peek() != Some('{') {
            return Ok((vec![self.word()?], false));
        }
        self.bump();
        self.skip_ws();
        if self.peek() == Some('}') {
            return Err(self.error(ParseErrorKind::EmptySet));
        }
        let mut words = vec![self.word()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                    self.skip_ws();
                    words.push(self.word()?);
                }
                Some('}') => {
                    self.bump();
                    return Ok((words, true));
                }
                Some(c) => return Err(self.error(ParseErrorKind::UnexpectedToken(c))),
                None => return Err(self.error(ParseErrorKind::UnterminatedSet)),
            }
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut factors = Vec::new();
        loop {
            let save = self.pos;
            if !factors.is_empty() {
                self.skip_ws();
            }
            match self.peek() {
                Some(c) if c.is_ascii_lowercase() && !self.at_in_keyword() => {
                    self.bump();
                    let exp = self.exponent()?;
                    factors.push(Factor { var: c, exp });
                }
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        Word::new(factors).ok_or_else(|| self.error(ParseErrorKind::ExpectedWord))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        let digits = &self.src[start..self.pos];
        match digits.parse::<u64>() {
            Ok(e) if (1..=MAX_EXPONENT as u64).contains(&e) => Ok(e as u32),
            _ => Err(ParseError {
                position: start,
                kind: ParseErrorKind::BadExponent,
            }),
        }
    }
}

impl FromStr for InclusionClassExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_inclusion_class(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spaced = self.factors.iter().any(|x| x.exp > 1);
        let mut parts = self.factors.iter().map(|x| match x.exp {
            1 => x.var.to_string(),
            e => format!("{}^{}", x.var, e),
        });
        if spaced {
            let v: Vec<String> = parts.collect();
            write!(f, "{}", v.join(" "))
        } else {
            let joined: String = parts.by_ref().collect();
            // keep the word `in` distinct from the operator
            if joined == "in" {
                write!(f, "i n")
            } else {
                write!(f, "{joined}")
            }
        }
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, words: &[Word]) -> fmt::Result {
    let v: Vec<String> = words.iter().map(Word::to_string).collect();
    write!(f, "{{{}}}", v.join(", "))
}

impl fmt::Display for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let ([l], [r]) = (&self.lhs[..], &self.rhs[..]) {
            return write!(f, "{l} = {r}");
        }
        match &self.lhs[..] {
            [single] => write!(f, "{single}")?,
            many => write_set(f, many)?,
        }
        write!(f, " in ")?;
        write_set(f, &self.rhs)
    }
}

impl fmt::Display for InclusionClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, inc) in self.inclusions.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{inc}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("variable '{0}' is not assigned")]
pub struct UnboundVariable(pub char);

/// Value of `word` under `assignment`, folding left to right.
pub fn eval_word(
    s: &FiniteSemigroup,
    word: &Word,
    assignment: &BTreeMap<char, usize>,
) -> Result<usize, UnboundVariable> {
    let mut acc: Option<usize> = None;
    for f in &word.factors {
        let x = *assignment.get(&f.var).ok_or(UnboundVariable(f.var))?;
        let p = s.power(x, f.exp as usize);
        acc = Some(match acc {
            None => p,
            Some(a) => s.mul(a, p),
        });
    }
    Ok(acc.expect("words are nonempty"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipWitness {
    /// Index of the violated inclusion.
    pub inclusion: usize,
    pub assignment: BTreeMap<char, usize>,
    /// The lhs word whose value falls outside the rhs values.
    pub word: Word,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    pub witness: Option<MembershipWitness>,
}

/// Words compiled against one semigroup: variables become slots and every
/// power `x^e` with `e ≥ 2` is a table lookup.
struct CompiledWord(Vec<(usize, usize)>);

struct Compiled<'s> {
    s: &'s FiniteSemigroup,
    /// `powers[k][x] = x^(exponent k)`; slot 0 is exponent 1.
    powers: Vec<Vec<usize>>,
    inclusions: Vec<(Vec<CompiledWord>, Vec<CompiledWord>)>,
}

impl<'s> Compiled<'s> {
    fn new(s: &'s FiniteSemigroup, expr: &InclusionClassExpr) -> Self {
        let slots: HashMap<char, usize> = expr
            .variables
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut exp_index: HashMap<u32, usize> = HashMap::from([(1, 0)]);
        let mut powers: Vec<Vec<usize>> = vec![s.elements().collect()];
        let mut compile = |w: &Word| {
            CompiledWord(
                w.factors
                    .iter()
                    .map(|f| {
                        let k = *exp_index.entry(f.exp).or_insert_with(|| {
                            powers.push(s.elements().map(|x| s.power(x, f.exp as usize)).collect());
                            powers.len() - 1
                        });
                        (slots[&f.var], k)
                    })
                    .collect(),
            )
        };
        let inclusions = expr
            .inclusions
            .iter()
            .map(|inc| {
                (
                    inc.lhs.iter().map(&mut compile).collect(),
                    inc.rhs.iter().map(&mut compile).collect(),
                )
            })
            .collect();
        Compiled {
            s,
            powers,
            inclusions,
        }
    }

    #[inline]
    fn eval(&self, w: &CompiledWord, values: &[usize]) -> usize {
        let mut it = w.0.iter().map(|&(slot, k)| self.powers[k][values[slot]]);
        let first = it.next().expect("words are nonempty");
        it.fold(first, |a, p| self.s.mul(a, p))
    }

    /// First violated inclusion under `values`: (inclusion, lhs word, value).
    fn violation(&self, values: &[usize]) -> Option<(usize, usize, usize)> {
        for (i, (lhs, rhs)) in self.inclusions.iter().enumerate() {
            for (j, w) in lhs.iter().enumerate() {
                let v = self.eval(w, values);
                if !rhs.iter().any(|t| self.eval(t, values) == v) {
                    return Some((i, j, v));
                }
            }
        }
        None
    }
}

/// Checks every assignment of the expression's variables, scanning
/// assignments lexicographically (variables in alphabetical order, the last
/// variable varying fastest) and reporting the first counterexample.
pub fn member_of_class(s: &FiniteSemigroup, expr: &InclusionClassExpr) -> MembershipReport {
    let compiled = Compiled::new(s, expr);
    let k = expr.variables.len();
    let n = s.order();
    let mut values = vec![0usize; k];
    loop {
        if let Some((i, j, value)) = compiled.violation(&values) {
            let assignment = expr.variables.iter().copied().zip(values).collect();
            return MembershipReport {
                member: false,
                witness: Some(MembershipWitness {
                    inclusion: i,
                    assignment,
                    word: expr.inclusions[i].lhs[j].clone(),
                    value,
                }),
            };
        }
        // odometer
        let mut pos = k;
        loop {
            if pos == 0 {
                return MembershipReport {
                    member: true,
                    witness: None,
                };
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < n {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// Shorthand for `member_of_class(s, expr).member`.
pub fn is_member(s: &FiniteSemigroup, expr: &InclusionClassExpr) -> bool {
    member_of_class(s, expr).member
}

pub const THM1: &str = "xyx in {x, y}";
pub const THM2: &str = "xyx in {y, yx}";
pub const COR3: &str = "xyx in {y, yx}; x = x^3";
pub const THM4: &str = "xyx in {yx, y^2x^2y}; x = x^3";
pub const THM5: &str = "xyx in {xy^2x, y^2x^2y}; x = x^3";

pub const PREDEFINED_NAMES: [&str; 5] = ["THM1", "THM2", "COR3", "THM4", "THM5"];

/// The five named classes.
pub fn predefined_classes() -> BTreeMap<&'static str, InclusionClassExpr> {
    [
        ("THM1", THM1),
        ("THM2", THM2),
        ("COR3", COR3),
        ("THM4", THM4),
        ("THM5", THM5),
    ]
    .into_iter()
    .map(|(name, text)| (name, parse_inclusion_class(text).expect("predefined class parses")))
    .collect()
}

/// Looks up a predefined class by (case-insensitive) name.
pub fn predefined(name: &str) -> Option<InclusionClassExpr> {
    predefined_classes()
        .into_iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(name))
        .map(|(_, v)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        let e = parse_inclusion_class(&format!("{s} = {s}")).unwrap();
        e.inclusions[0].lhs[0].clone()
    }

    fn sg(rows: &[&[usize]]) -> FiniteSemigroup {
        FiniteSemigroup::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn parses_single_inclusion() {
        let e = parse_inclusion_class("xyx in {x, y}").unwrap();
        assert_eq!(e.inclusions().len(), 1);
        assert_eq!(e.inclusions()[0].lhs(), &[w("xyx")]);
        assert_eq!(e.inclusions()[0].rhs(), &[w("x"), w("y")]);
        assert_eq!(e.variables(), &BTreeSet::from(['x', 'y']));
    }

    #[test]
    fn parses_two_inclusions_with_equation_sugar() {
        let e = parse_inclusion_class("xyx in {xy^2x, y^2x^2y}; x = x^3").unwrap();
        assert_eq!(e.inclusions().len(), 2);
        assert_eq!(e.inclusions()[1].lhs(), &[w("x")]);
        assert_eq!(
            e.inclusions()[1].rhs()[0].factors(),
            &[Factor { var: 'x', exp: 3 }]
        );
        let f = e.inclusions()[0].rhs()[0].factors();
        assert_eq!(f.len(), 3);
        assert_eq!(f[1], Factor { var: 'y', exp: 2 });
    }

    #[test]
    fn alternative_operators() {
        let a = parse_inclusion_class("xyx ⊆ {x, y}").unwrap();
        let b = parse_inclusion_class("xyx <= {x,y}").unwrap();
        let c = parse_inclusion_class("  x y x   in{x ,y } ").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn parse_errors() {
        let err = parse_inclusion_class("xyx in {}").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptySet);
        assert_eq!(err.position, 8);
        assert_eq!(
            parse_inclusion_class("x = x^0").unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert_eq!(
            parse_inclusion_class("x = x^").unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert_eq!(
            parse_inclusion_class("x = x^65537").unwrap_err().kind,
            ParseErrorKind::BadExponent
        );
        assert!(parse_inclusion_class("x = x^65536").is_ok());
        assert_eq!(
            parse_inclusion_class("x = y )").unwrap_err().kind,
            ParseErrorKind::UnexpectedToken(')')
        );
        assert_eq!(
            parse_inclusion_class("x = y;").unwrap_err().kind,
            ParseErrorKind::ExpectedWord
        );
        assert_eq!(
            parse_inclusion_class("{x} = y").unwrap_err().kind,
            ParseErrorKind::BracedEquation
        );
        assert_eq!(parse_inclusion_class("   ").unwrap_err().kind, ParseErrorKind::EmptyInput);
        assert_eq!(
            parse_inclusion_class("xy {x}").unwrap_err().kind,
            ParseErrorKind::ExpectedOperator
        );
        assert_eq!(
            parse_inclusion_class("x in {y, z").unwrap_err().kind,
            ParseErrorKind::UnterminatedSet
        );
    }

    #[test]
    fn letters_i_and_n_are_variables_inside_words() {
        let e = parse_inclusion_class("xin in {nix}").unwrap();
        assert_eq!(e.inclusions()[0].lhs()[0].factors().len(), 3);
        let e = parse_inclusion_class("i n = n i").unwrap();
        assert_eq!(e.to_string(), "i n = ni");
        assert_eq!(parse_inclusion_class(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn canonical_formatting() {
        let e = parse_inclusion_class(THM5).unwrap();
        assert_eq!(e.to_string(), "xyx in {x y^2 x, y^2 x^2 y}; x = x^3");
        let e = parse_inclusion_class("x in {x^3}").unwrap();
        assert_eq!(format_inclusion_class(&e), "x = x^3");
        let e = parse_inclusion_class("{x, y} in {y}").unwrap();
        assert_eq!(e.to_string(), "{x, y} in {y}");
        for expr in predefined_classes().values() {
            let again = parse_inclusion_class(&format_inclusion_class(expr)).unwrap();
            assert_eq!(&again, expr);
        }
    }

    #[test]
    fn word_evaluation() {
        let z2 = sg(&[&[0, 1], &[1, 0]]);
        let rz = sg(&[&[0, 1], &[0, 1]]);
        let asg = BTreeMap::from([('x', 1), ('y', 0)]);
        assert_eq!(eval_word(&z2, &w("x^2y"), &asg), Ok(0));
        let asg = BTreeMap::from([('x', 0), ('y', 1)]);
        assert_eq!(eval_word(&rz, &w("xyx"), &asg), Ok(0));
        assert_eq!(eval_word(&rz, &w("x"), &asg), Ok(0));
        assert_eq!(eval_word(&rz, &w("xz"), &asg), Err(UnboundVariable('z')));
    }

    #[test]
    fn membership_examples() {
        let mut rows = vec![vec![0; 4]; 4];
        for x in 0..4 {
            for y in 0..4 {
                rows[x][y] = (x / 2) * 2 + y % 2;
            }
        }
        let rb = FiniteSemigroup::new(rows).unwrap();
        let thm1 = predefined("THM1").unwrap();
        assert!(member_of_class(&rb, &thm1).member);

        let z2 = sg(&[&[0, 1], &[1, 0]]);
        let thm5 = predefined("thm5").unwrap();
        assert_eq!(
            member_of_class(&z2, &thm5),
            MembershipReport {
                member: true,
                witness: None
            }
        );

        // left-zero 2 × Z2, (i, g) -> 2i + g
        let lz = sg(&[&[0, 0], &[1, 1]]);
        let lg = lz.direct_product(&z2);
        let report = member_of_class(&lg, &thm5);
        assert!(!report.member);
        let wit = report.witness.unwrap();
        assert_eq!(wit.inclusion, 0);
        assert_eq!(wit.assignment, BTreeMap::from([('x', 0), ('y', 3)]));
        assert_eq!(wit.word, w("xyx"));
        assert_eq!(wit.value, 1);
    }

    #[test]
    fn predefined_shapes() {
        let all = predefined_classes();
        assert_eq!(all.len(), 5);
        assert_eq!(all["THM1"].inclusions().len(), 1);
        assert_eq!(all["THM5"].inclusions().len(), 2);
        let x3 = parse_inclusion_class("x = x^3").unwrap();
        assert_eq!(all["THM2"].and(&x3), all["COR3"]);
        assert!(predefined("THM9").is_none());
    }
}
