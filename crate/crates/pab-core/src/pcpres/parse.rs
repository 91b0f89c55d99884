//! Line-oriented presentation file format.
//!
//! ```text
//! % Heisenberg group of order 27
//! prime 3
//! gen x 3
//! gen y 3
//! derived free
//! comm y x 1
//! ```
//!
//! `%` starts a comment running to end of line; tokens are whitespace
//! separated. The first non-comment line must be `prime <p>`. Generator
//! declaration order fixes the normal-form ordering; a `comm a b m` line
//! requires `a` to be declared strictly after `b` and encodes
//! `[a, b] = c^m`. Exactly one `derived` line is required.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use thiserror::Error;

use super::{validate, DerivedSpec, Generator, PcPresentation, Violation};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: comm {a} {b} lists {a} first, but it is not declared after {b}")]
    CommOrderViolation { line: usize, a: String, b: String },
    #[error("line {line}: duplicate generator `{name}`")]
    DuplicateGenerator { line: usize, name: String },
    #[error("presentation violates invariants: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl ParseError {
    /// Violations carried by an `Invalid` error, if any.
    pub fn violations(&self) -> &[Violation] {
        match self {
            ParseError::Invalid(v) => v,
            _ => &[],
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses and validates a presentation file. Validation runs after the
/// syntactic pass, so a structurally well-formed file with, say, an even
/// prime fails with `Invalid([EvenPrime])`.
pub fn parse_presentation(text: &str) -> Result<PcPresentation, ParseError> {
    let mut prime: Option<u64> = None;
    let mut prime_line = 0usize;
    let mut generators: Vec<Generator> = Vec::new();
    let mut derived: Option<DerivedSpec> = None;
    let mut commutators: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('%') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if prime.is_none() && tokens[0] != "prime" {
            return Err(syntax(line_no, "first directive must be `prime <p>`"));
        }
        match tokens[0] {
            "prime" => {
                if prime.is_some() {
                    return Err(syntax(line_no, "duplicate `prime` directive"));
                }
                let [_, value] = tokens[..] else {
                    return Err(syntax(line_no, "expected `prime <p>`"));
                };
                let p: u64 = value
                    .parse()
                    .map_err(|_| syntax(line_no, format!("invalid prime `{}`", value)))?;
                prime = Some(p);
                prime_line = line_no;
            }
            "gen" => {
                let [_, name, order] = tokens[..] else {
                    return Err(syntax(line_no, "expected `gen <name> <order>`"));
                };
                if generators.iter().any(|g| g.name == name) {
                    return Err(ParseError::DuplicateGenerator {
                        line: line_no,
                        name: name.to_string(),
                    });
                }
                let order: BigUint = order
                    .parse()
                    .map_err(|_| syntax(line_no, format!("invalid order `{}`", order)))?;
                generators.push(Generator {
                    name: name.to_string(),
                    order,
                });
            }
            "derived" => {
                if derived.is_some() {
                    return Err(syntax(line_no, "duplicate `derived` directive"));
                }
                derived = Some(match tokens[1..] {
                    ["free"] => DerivedSpec::FreeCentral,
                    ["pow", name] => {
                        let d = generators
                            .iter()
                            .position(|g| g.name == name)
                            .ok_or_else(|| ParseError::UnknownGenerator {
                                line: line_no,
                                name: name.to_string(),
                            })?;
                        DerivedSpec::PowerOf(d)
                    }
                    _ => {
                        return Err(syntax(
                            line_no,
                            "expected `derived free` or `derived pow <name>`",
                        ))
                    }
                });
            }
            "comm" => {
                let [_, a, b, m] = tokens[..] else {
                    return Err(syntax(line_no, "expected `comm <a> <b> <m>`"));
                };
                let ja = generators.iter().position(|g| g.name == a).ok_or_else(|| {
                    ParseError::UnknownGenerator {
                        line: line_no,
                        name: a.to_string(),
                    }
                })?;
                let ib = generators.iter().position(|g| g.name == b).ok_or_else(|| {
                    ParseError::UnknownGenerator {
                        line: line_no,
                        name: b.to_string(),
                    }
                })?;
                if ja <= ib {
                    return Err(ParseError::CommOrderViolation {
                        line: line_no,
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
                if commutators.contains_key(&(ja, ib)) {
                    return Err(syntax(line_no, format!("duplicate comm for pair {} {}", a, b)));
                }
                let m: BigUint = m
                    .parse()
                    .map_err(|_| syntax(line_no, format!("invalid exponent `{}`", m)))?;
                // Reduced mod p here; c has order p.
                let p = prime.expect("prime precedes other directives");
                let reduced = if p == 0 {
                    0
                } else {
                    (m % BigUint::from(p))
                        .try_into()
                        .expect("residue mod a u64 fits in u64")
                };
                commutators.insert((ja, ib), reduced);
            }
            other => {
                return Err(syntax(line_no, format!("unknown directive `{}`", other)));
            }
        }
    }

    let Some(prime) = prime else {
        return Err(syntax(1, "empty presentation: missing `prime <p>`"));
    };
    let Some(derived) = derived else {
        return Err(syntax(
            prime_line,
            "missing `derived free` or `derived pow <name>`",
        ));
    };

    let pres = PcPresentation::new(prime, generators, derived, commutators);
    let violations = validate(&pres);
    if violations.is_empty() {
        Ok(pres)
    } else {
        Err(ParseError::Invalid(violations))
    }
}

/// Emits the canonical file form: generators in declaration order, comm
/// lines sorted, no comments. `parse_presentation` of the output returns an
/// equal presentation.
pub fn render_presentation(pres: &PcPresentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("prime {}\n", pres.prime()));
    for g in pres.generators() {
        out.push_str(&format!("gen {} {}\n", g.name, g.order));
    }
    match pres.derived() {
        DerivedSpec::FreeCentral => out.push_str("derived free\n"),
        DerivedSpec::PowerOf(d) => {
            out.push_str(&format!("derived pow {}\n", pres.generators()[d].name))
        }
    }
    for (&(j, i), &m) in pres.commutators() {
        out.push_str(&format!(
            "comm {} {} {}\n",
            pres.generators()[j].name,
            pres.generators()[i].name,
            m
        ));
    }
    out
}
