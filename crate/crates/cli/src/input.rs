//! Table and builder-spec file formats.
//!
//! Text tables: `#` comment lines and blank lines are skipped, the first data
//! line holds the order `n` and the next `n` lines hold the rows as 0-based
//! element indices (row = left factor). JSON tables are objects with `order`
//! and `table` fields.

use std::fmt;

use semiforge::rees::ReesSpec;
use semiforge::{FiniteSemigroup, TableError};

#[derive(Debug)]
pub enum InputError {
    Syntax { line: usize, message: String },
    Table(TableError),
    Json(serde_json::Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            InputError::Table(e) => write!(f, "{e}"),
            InputError::Json(e) => write!(f, "invalid JSON: {e}"),
        }
    }
}

impl From<TableError> for InputError {
    fn from(e: TableError) -> Self {
        InputError::Table(e)
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Json(e)
    }
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Non-comment, non-blank lines parsed as whitespace-separated integers,
/// tagged with their 1-based line numbers.
fn number_lines(text: &str) -> Result<Vec<(usize, Vec<usize>)>, InputError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            let nums = l
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| InputError::Syntax {
                        line: i + 1,
                        message: format!("expected a non-negative integer, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((i + 1, nums))
        })
        .collect()
}

struct Lines {
    lines: std::vec::IntoIter<(usize, Vec<usize>)>,
    last: usize,
}

impl Lines {
    fn next(&mut self, what: &str) -> Result<(usize, Vec<usize>), InputError> {
        let (line, nums) = self.lines.next().ok_or_else(|| InputError::Syntax {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })?;
        self.last = line;
        Ok((line, nums))
    }

    fn single(&mut self, what: &str) -> Result<usize, InputError> {
        let (line, nums) = self.next(what)?;
        match nums[..] {
            [v] => Ok(v),
            _ => Err(InputError::Syntax {
                line,
                message: format!("expected {what} alone on the line"),
            }),
        }
    }

    fn table(&mut self) -> Result<FiniteSemigroup, InputError> {
        let n = self.single("the order")?;
        let rows = (0..n)
            .map(|r| self.next(&format!("row {r}")).map(|(_, nums)| nums))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSemigroup::new(rows)?)
    }

    fn finish(mut self) -> Result<(), InputError> {
        match self.lines.next() {
            None => Ok(()),
            Some((line, _)) => Err(InputError::Syntax {
                line,
                message: "unexpected trailing data".to_owned(),
            }),
        }
    }
}

fn lines(text: &str) -> Result<Lines, InputError> {
    Ok(Lines {
        lines: number_lines(text)?.into_iter(),
        last: 0,
    })
}

pub fn parse_table(text: &str) -> Result<FiniteSemigroup, InputError> {
    if is_json(text) {
        return Ok(serde_json::from_str(text)?);
    }
    let mut ls = lines(text)?;
    let s = ls.table()?;
    ls.finish()?;
    Ok(s)
}

/// Text form: the group table, then a line `|I| |Λ|`, then `|Λ|` rows of
/// `|I|` group elements (the sandwich matrix). JSON form: a serialized
/// [`ReesSpec`].
pub fn parse_rees_spec(text: &str) -> Result<ReesSpec, InputError> {
    if is_json(text) {
        return Ok(serde_json::from_str(text)?);
    }
    let mut ls = lines(text)?;
    let group = ls.table()?;
    let (line, sizes) = ls.next("the index sizes")?;
    let [i_size, l_size] = sizes[..] else {
        return Err(InputError::Syntax {
            line,
            message: "expected two index sizes".to_owned(),
        });
    };
    let sandwich = (0..l_size)
        .map(|r| ls.next(&format!("sandwich row {r}")).map(|(_, nums)| nums))
        .collect::<Result<Vec<_>, _>>()?;
    ls.finish()?;
    Ok(ReesSpec {
        group,
        i_size,
        l_size,
        sandwich,
    })
}
