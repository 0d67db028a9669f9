//! Plain-text Hamiltonian format.
//!
//! ```text
//! # comment
//! modes 4
//! 1.0 0.0 0^ 1      # (1.0 + 0.0i) a_0† a_1
//! 0.5 -0.5 2^ 2
//! ```
//!
//! Operators are listed in product order; `k^` is a creation operator.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::{FermionHamiltonian, LadderOperator, LadderTerm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `modes N` header")]
    MissingHeader,
    #[error("line {line}: mode {mode} out of range for {n_modes} modes")]
    ModeOverflow { line: usize, mode: usize, n_modes: usize },
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<FermionHamiltonian, FormatError> {
    let mut h: Option<FermionHamiltonian> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let Some(h) = h.as_mut() else {
            let (Some("modes"), Some(n), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(malformed(line_no, "expected `modes N`"));
            };
            let n: usize = n.parse().map_err(|_| malformed(line_no, format!("bad mode count `{n}`")))?;
            h = Some(FermionHamiltonian::new(n));
            continue;
        };
        let mut number = |what: &str| -> Result<f64, FormatError> {
            let tok = toks.next().ok_or_else(|| malformed(line_no, format!("missing {what} part")))?;
            tok.parse().map_err(|_| malformed(line_no, format!("bad {what} part `{tok}`")))
        };
        let coefficient = Complex64::new(number("real")?, number("imaginary")?);
        let mut factors = Vec::new();
        for tok in toks {
            let (digits, creation) = match tok.strip_suffix('^') {
                Some(d) => (d, true),
                None => (tok, false),
            };
            let mode: usize = digits
                .parse()
                .map_err(|_| malformed(line_no, format!("bad operator `{tok}`")))?;
            if mode >= h.n_modes() {
                return Err(FormatError::ModeOverflow {
                    line: line_no,
                    mode,
                    n_modes: h.n_modes(),
                });
            }
            factors.push(LadderOperator { mode, creation });
        }
        h.push(LadderTerm::new(coefficient, factors)).expect("modes checked");
    }
    h.ok_or(FormatError::MissingHeader)
}

fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Canonical rendering; `parse_hamiltonian` reads it back exactly.
pub fn render_hamiltonian(h: &FermionHamiltonian) -> String {
    let mut out = format!("modes {}\n", h.n_modes());
    for t in h.terms() {
        write!(out, "{} {}", fmt_f64(t.coefficient.re), fmt_f64(t.coefficient.im)).expect("string write");
        for op in &t.factors {
            write!(out, " {op}").expect("string write");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hop() {
        let h = parse_hamiltonian("modes 2\n1.0 0.0 0^ 1\n").unwrap();
        assert_eq!(h.terms(), &[LadderTerm::hop(Complex64::new(1.0, 0.0), 0, 1)]);
    }

    #[test]
    fn parses_complex_number_term() {
        let h = parse_hamiltonian("modes 3\n0.5 -0.5 2^ 2").unwrap();
        assert_eq!(h.terms(), &[LadderTerm::number(Complex64::new(0.5, -0.5), 2)]);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let h = parse_hamiltonian("# header\n\nmodes 1 # one mode\n# nothing\n2 0\n").unwrap();
        assert_eq!(h.terms().len(), 1);
        assert!(h.terms()[0].factors.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_hamiltonian("modes 2\n1 0 0^ x\n").unwrap_err();
        assert!(matches!(err, FormatError::Malformed { line: 2, .. }));
        let err = parse_hamiltonian("modes 2\n\n1 0 5^\n").unwrap_err();
        assert_eq!(err, FormatError::ModeOverflow { line: 3, mode: 5, n_modes: 2 });
        assert_eq!(parse_hamiltonian("# nothing\n"), Err(FormatError::MissingHeader));
        assert!(matches!(
            parse_hamiltonian("nodes 2\n"),
            Err(FormatError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("modes 2\n1.0\n"),
            Err(FormatError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn render_round_trips() {
        let text = "modes 3\n-1 0 0^ 1\n0.1 -2.5e-7 2^ 2 1^ 1\n1e300 0 \n";
        let h = parse_hamiltonian(text).unwrap();
        let r = render_hamiltonian(&h);
        assert_eq!(parse_hamiltonian(&r).unwrap(), h);
        assert_eq!(render_hamiltonian(&parse_hamiltonian(&r).unwrap()), r);
    }
}
