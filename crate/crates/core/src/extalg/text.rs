//! Plain-text tensor format.
//!
//! ```text
//! # the Fano tensor, 1-based labels
//! dim 7 degree 3 one_based
//! 1 3 5 : 1
//! 1 4 7 : 1
//! 1 2 6 : 1
//! 2 3 4 : 1
//! 5 6 7 : 1
//! ```
//!
//! Indices on a line may come in any order; the coefficient picks up the sign
//! of the sorting permutation. Repeated lines for the same set accumulate.

use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{IndexSet, Multivector};
use crate::error::{Error, Result};
use crate::field::Integers;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_tensor(input: &str) -> Result<Multivector<BigInt>> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut out: Option<Multivector<BigInt>> = None;
    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((dim, degree, one_based)) = header else {
            let words: Vec<&str> = line.split_whitespace().collect();
            let (dim, degree, one_based) = match words.as_slice() {
                ["dim", d, "degree", k] => (*d, *k, false),
                ["dim", d, "degree", k, "one_based"] => (*d, *k, true),
                _ => {
                    return Err(parse_err(
                        lineno,
                        "expected `dim <n> degree <d> [one_based]`",
                    ))
                }
            };
            let dim: usize = dim
                .parse()
                .map_err(|_| parse_err(lineno, "bad dimension"))?;
            let degree: usize = degree
                .parse()
                .map_err(|_| parse_err(lineno, "bad degree"))?;
            if dim == 0 || degree > dim {
                return Err(parse_err(lineno, "degree exceeds dimension"));
            }
            header = Some((dim, degree, one_based));
            out = Some(Multivector::zero(Integers, dim, degree));
            continue;
        };
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, "expected `i j k : c`"))?;
        let coeff =
            BigInt::from_str(rhs.trim()).map_err(|_| parse_err(lineno, "bad coefficient"))?;
        let mut indices = Vec::new();
        for tok in lhs.split_whitespace() {
            let i: usize = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad index `{tok}`")))?;
            let i = if one_based {
                i.checked_sub(1)
                    .ok_or_else(|| parse_err(lineno, "index 0 with one_based labels"))?
            } else {
                i
            };
            if i >= dim {
                return Err(parse_err(
                    lineno,
                    format!("index out of range for dim {dim}"),
                ));
            }
            indices.push(i);
        }
        if indices.len() != degree {
            return Err(parse_err(lineno, format!("expected {degree} indices")));
        }
        let (set, odd) =
            IndexSet::from_unsorted(indices).ok_or_else(|| parse_err(lineno, "repeated index"))?;
        let coeff = if odd { -coeff } else { coeff };
        out.as_mut()
            .expect("set with header")
            .add_term(set, coeff)
            .map_err(|e| parse_err(lineno, e.to_string()))?;
    }
    out.ok_or_else(|| parse_err(0, "missing header"))
}

pub fn format_tensor(omega: &Multivector<BigInt>, one_based: bool) -> String {
    let mut s = format!("dim {} degree {}", omega.dim(), omega.degree());
    if one_based {
        s.push_str(" one_based");
    }
    s.push('\n');
    let shift = usize::from(one_based);
    for (set, c) in omega.terms() {
        let idx: Vec<String> = set
            .as_slice()
            .iter()
            .map(|i| (i + shift).to_string())
            .collect();
        let _ = writeln!(s, "{} : {c}", idx.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extalg::all_subsets;
    use proptest::prelude::*;

    #[test]
    fn one_based_labels_shift_down() {
        let t = parse_tensor("dim 7 degree 3 one_based\n1 3 5 : 2\n").unwrap();
        let s = IndexSet::new(vec![0, 2, 4]).unwrap();
        assert_eq!(t.coefficient(&s), BigInt::from(2));
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn unsorted_indices_carry_sign() {
        let t = parse_tensor("# comment\ndim 7 degree 3\n\n2 1 0 : 5 # trailing\n").unwrap();
        let s = IndexSet::new(vec![0, 1, 2]).unwrap();
        assert_eq!(t.coefficient(&s), BigInt::from(-5));
        let t = parse_tensor("dim 7 degree 3\n0 1 2 : 1\n1 0 2 : 1\n").unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("", 0),
            ("dim 7\n", 1),
            ("dim 7 degree 3\n0 1 : 1\n", 2),
            ("dim 7 degree 3\n0 1 1 : 1\n", 2),
            ("dim 7 degree 3\n0 1 7 : 1\n", 2),
            ("dim 7 degree 3\n\n0 1 2 : x\n", 3),
            ("dim 7 degree 3 one_based\n0 1 2 : 1\n", 2),
            ("dim 7 degree 3\n0 1 2 1\n", 2),
        ];
        for (text, line) in cases {
            match parse_tensor(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip(coeffs in prop::collection::vec(-50i64..=50, 35), one_based: bool) {
            let omega = Multivector::from_terms(
                Integers,
                7,
                3,
                all_subsets(6, 3).into_iter().zip(coeffs.into_iter().map(BigInt::from)),
            )
            .unwrap();
            let text = format_tensor(&omega, one_based);
            prop_assert_eq!(parse_tensor(&text).unwrap(), omega);
        }
    }
}
