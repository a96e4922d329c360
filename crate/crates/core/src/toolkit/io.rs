//! Plain-text file formats.
//!
//! Instance: a `T B` header line, then `T` lines of `B` non-negative
//! decimals. Assignment: `T` lines of `B` group numbers, 1-based; entry `b` of
//! line `t` is the group of item `b` of set `t`. PARTITION: one positive
//! decimal per line. 3-PARTITION: an `m U` header, then `3m` decimals.
//! In every format, lines starting with `#` are comments and blank lines are
//! skipped. Writers separate fields by a single space and end every line with
//! a newline.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Assignment, Instance, ModelError, Weight};
use crate::reductions::{PartitionInstance, ReductionError, ThreePartitionInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<i64>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>().map_err(|_| FormatError::Syntax {
                line: line_no,
                message: format!("`{tok}` is not an integer"),
            })
        })
        .collect()
}

fn header(
    lines: &mut impl Iterator<Item = (usize, impl AsRef<str>)>,
    what: &str,
) -> Result<(usize, i64, i64), FormatError> {
    let (line_no, line) = lines
        .next()
        .ok_or_else(|| FormatError::Truncated(format!("missing `{what}` header")))?;
    match numbers(line_no, line.as_ref())?[..] {
        [a, b] => Ok((line_no, a, b)),
        _ => Err(FormatError::Syntax {
            line: line_no,
            message: format!("header must be `{what}`"),
        }),
    }
}

fn count(line: usize, value: i64, name: &str) -> Result<usize, FormatError> {
    usize::try_from(value).map_err(|_| FormatError::Syntax {
        line,
        message: format!("{name} must be non-negative, got {value}"),
    })
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text);
    let (line_no, sets, groups) = header(&mut lines, "T B")?;
    let sets = count(line_no, sets, "T")?;
    let groups = count(line_no, groups, "B")?;
    let mut rows = Vec::with_capacity(sets);
    for (line_no, line) in lines {
        if rows.len() == sets {
            return Err(FormatError::Syntax {
                line: line_no,
                message: format!("more than T = {sets} rows"),
            });
        }
        let row = numbers(line_no, line)?;
        if row.len() != groups {
            return Err(FormatError::Model(ModelError::DimensionMismatch {
                row: rows.len(),
                expected: groups,
                found: row.len(),
            }));
        }
        rows.push(row);
    }
    if rows.len() != sets {
        return Err(FormatError::Truncated(format!(
            "expected {sets} rows, found {}",
            rows.len()
        )));
    }
    Ok(Instance::new(rows)?)
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = format!("{} {}\n", instance.sets(), instance.groups());
    for row in instance.rows() {
        push_row(&mut out, row.iter());
    }
    out
}

/// Reads an assignment. Group numbers are 1-based in the file.
pub fn parse_assignment(text: &str) -> Result<Assignment, FormatError> {
    let mut rows = Vec::new();
    for (line_no, line) in content_lines(text) {
        let row = numbers(line_no, line)?
            .into_iter()
            .map(|g| {
                if g < 1 {
                    Err(FormatError::Syntax {
                        line: line_no,
                        message: format!("group numbers start at 1, got {g}"),
                    })
                } else {
                    Ok(g as usize - 1)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Assignment::new(rows)?)
}

pub fn write_assignment(assignment: &Assignment) -> String {
    let mut out = String::new();
    for row in assignment.rows() {
        push_row(&mut out, row.iter().map(|g| g + 1));
    }
    out
}

pub fn parse_partition(text: &str) -> Result<PartitionInstance, FormatError> {
    let mut sizes = Vec::new();
    for (line_no, line) in content_lines(text) {
        match numbers(line_no, line)?[..] {
            [s] => sizes.push(s),
            _ => {
                return Err(FormatError::Syntax {
                    line: line_no,
                    message: "expected one size per line".into(),
                })
            }
        }
    }
    Ok(PartitionInstance::new(sizes)?)
}

pub fn write_partition(p: &PartitionInstance) -> String {
    p.sizes().iter().map(|s| format!("{s}\n")).collect()
}

pub fn parse_3partition(text: &str) -> Result<ThreePartitionInstance, FormatError> {
    let mut lines = content_lines(text);
    let (line_no, m, bound) = header(&mut lines, "m U")?;
    let m = count(line_no, m, "m")?;
    let mut sizes = Vec::with_capacity(3 * m);
    for (line_no, line) in lines {
        sizes.extend(numbers(line_no, line)?);
    }
    if sizes.len() != 3 * m {
        return Err(FormatError::Truncated(format!(
            "expected 3m = {} sizes, found {}",
            3 * m,
            sizes.len()
        )));
    }
    Ok(ThreePartitionInstance::new(sizes, bound)?)
}

pub fn write_3partition(q: &ThreePartitionInstance) -> String {
    let mut out = format!("{} {}\n", q.triples(), q.bound());
    for s in q.sizes() {
        let _ = writeln!(out, "{s}");
    }
    out
}

fn push_row<T: std::fmt::Display>(out: &mut String, row: impl Iterator<Item = T>) {
    for (i, v) in row.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

/// Weights of an instance as nested vectors, handy for tests and reports.
pub fn matrix(instance: &Instance) -> Vec<Vec<Weight>> {
    instance.rows().map(<[Weight]>::to_vec).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_text_is_exact() {
        let text = "# running example\n2 2\n1 4\n2 3\n";
        let i = parse_instance(text).unwrap();
        assert_eq!(matrix(&i), vec![vec![1, 4], vec![2, 3]]);
        assert_eq!(write_instance(&i), "2 2\n1 4\n2 3\n");
        // trailing newline is optional
        assert_eq!(parse_instance("1 2\n5 3").unwrap().total_weight(), 8);
    }

    #[test]
    fn instance_errors() {
        assert!(matches!(
            parse_instance("2 2\n1 4\n2 3 5\n"),
            Err(FormatError::Model(ModelError::DimensionMismatch {
                row: 1,
                ..
            }))
        ));
        assert!(matches!(
            parse_instance("1 2\n1 -1\n"),
            Err(FormatError::Model(ModelError::NegativeWeight {
                row: 0,
                column: 1,
                value: -1
            }))
        ));
        assert!(matches!(
            parse_instance("2 2\n1 4\n"),
            Err(FormatError::Truncated(_))
        ));
        assert!(matches!(
            parse_instance("1 2\n1 4\n9 9\n"),
            Err(FormatError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_instance("1 2\n1 x\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("2\n"),
            Err(FormatError::Syntax { line: 1, .. })
        ));
        assert!(matches!(parse_instance(""), Err(FormatError::Truncated(_))));
    }

    #[test]
    fn assignment_is_one_based() {
        let a = parse_assignment("1 2\n2 1\n").unwrap();
        assert_eq!(a.rows(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(write_assignment(&a), "1 2\n2 1\n");
        assert!(matches!(
            parse_assignment("0 1\n"),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(
            parse_assignment("1 1\n"),
            Err(FormatError::Model(ModelError::NotAPermutation {
                set: 0,
                group: 0,
                count: 2
            }))
        ));
    }

    #[test]
    fn partition_formats() {
        let p = parse_partition("# sizes\n1\n2\n3\n").unwrap();
        assert_eq!(p.sizes(), &[1, 2, 3]);
        assert_eq!(write_partition(&p), "1\n2\n3\n");
        assert!(parse_partition("1 2\n").is_err());
        assert!(parse_partition("0\n").is_err());

        let q = parse_3partition("2 100\n30\n35\n35\n40\n30\n30\n").unwrap();
        assert_eq!((q.triples(), q.bound()), (2, 100));
        assert_eq!(write_3partition(&q), "2 100\n30\n35\n35\n40\n30\n30\n");
        assert!(matches!(
            parse_3partition("2 100\n30\n35\n"),
            Err(FormatError::Truncated(_))
        ));
        assert!(matches!(
            parse_3partition("1 100\n10\n45\n45\n"),
            Err(FormatError::Reduction(ReductionError::InvariantViolation(
                _
            )))
        ));
    }
}
