//! Left-associative `+`/`-` chains of numerals, evaluated on the machine.
//!
//! Grammar: `expr := term (("+" | "-") term)*`, `term := digit+`, where
//! digits are `0-9` followed by `a-z` for radices above ten. Whitespace is
//! ignored and there are no parentheses.
//!
//! Evaluation keeps every intermediate result in the memristors. Additions
//! are entered on top of what the wheels hold. Subtractions work in the
//! complement view: the wheels hold the complement of the running value, so
//! entering the subtrahend on top lowers that value. Switching between the
//! two views reads the wheels, clears them and enters the complement.

use std::fmt;

use thiserror::Error;

use crate::machine::{Machine, MachineError};
use crate::radix::{digit_value, Numeral, RadixSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Add => "+",
            Op::Sub => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub first: Numeral,
    pub rest: Vec<(Op, Numeral)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    InvalidDigit { c: char, radix: u32 },
    UnexpectedChar(char),
    MissingOperand,
    OperandTooLong { len: usize, max: usize },
}

/// `position` is a 1-based character column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::InvalidDigit { c, radix } => {
                write!(f, "digit '{c}' invalid for radix {radix}")
            }
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::MissingOperand => write!(f, "operand expected"),
            ParseErrorKind::OperandTooLong { len, max } => {
                write!(f, "operand has {len} digits but the machine has {max}")
            }
        }
    }
}

struct Literal {
    chars: Vec<(usize, char)>,
}

pub fn parse_expression(text: &str, system: &RadixSystem) -> Result<Expression, ParseError> {
    let tokens: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    if tokens.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            position: 1,
        });
    }
    let end = text.chars().count() + 1;
    let mut pos = 0;
    let operand = |pos: &mut usize| -> Result<Numeral, ParseError> {
        let mut lit = Literal { chars: Vec::new() };
        while let Some(&(col, c)) = tokens.get(*pos) {
            if !c.is_ascii_alphanumeric() {
                break;
            }
            lit.chars.push((col, c));
            *pos += 1;
        }
        if lit.chars.is_empty() {
            let position = tokens.get(*pos).map_or(end, |t| t.0);
            return Err(ParseError {
                kind: ParseErrorKind::MissingOperand,
                position,
            });
        }
        literal(&lit, system)
    };

    let first = operand(&mut pos)?;
    let mut rest = Vec::new();
    while let Some(&(col, c)) = tokens.get(pos) {
        let op = match c {
            '+' => Op::Add,
            '-' | '\u{2212}' => Op::Sub,
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(other),
                    position: col,
                })
            }
        };
        pos += 1;
        rest.push((op, operand(&mut pos)?));
    }
    Ok(Expression { first, rest })
}

fn literal(lit: &Literal, system: &RadixSystem) -> Result<Numeral, ParseError> {
    let len = lit.chars.len();
    let width = system.len();
    if len > width {
        return Err(ParseError {
            kind: ParseErrorKind::OperandTooLong { len, max: width },
            position: lit.chars[0].0,
        });
    }
    let mut digits = vec![0u32; width];
    for (j, &(col, c)) in lit.chars.iter().enumerate() {
        let place = len - 1 - j;
        let radix = system.radices()[place];
        match digit_value(c) {
            Some(d) if d < radix => digits[place] = d,
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::InvalidDigit { c, radix },
                    position: col,
                })
            }
        }
    }
    Ok(Numeral::from_digits(digits))
}

impl Expression {
    pub fn operands(&self) -> impl Iterator<Item = &Numeral> {
        std::iter::once(&self.first).chain(self.rest.iter().map(|(_, n)| n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum View {
    Direct,
    Complement,
}

/// Result of a chain evaluated on the machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// The running value modulo the capacity.
    pub readout: Numeral,
    /// Net count of wraps past the capacity: carries out of additions count
    /// up, carries out during subtraction count down.
    pub wraps: i64,
    /// Every complement that appeared on the wheels, in order: each
    /// complemented value entered, and each wheel state read in the
    /// complement view.
    pub complements: Vec<Numeral>,
}

impl Evaluation {
    pub fn carry_out(&self) -> bool {
        self.wraps > 0
    }

    pub fn negative(&self) -> bool {
        self.wraps < 0
    }

    /// Absolute value modulo the capacity.
    pub fn magnitude(&self, system: &RadixSystem) -> Numeral {
        if self.negative() {
            system
                .radix_complement(&self.readout)
                .expect("readout belongs to the system")
        } else {
            self.readout.clone()
        }
    }

    /// One-line report, e.g. `1642 (complements: 7984, 8357)`.
    pub fn render(&self, system: &RadixSystem) -> String {
        let fmt = |n: &Numeral| system.format(n).expect("numeral belongs to the system");
        let mut out = if self.negative() {
            format!(
                "-{} [negative; readout {} is its radix complement]",
                fmt(&self.magnitude(system)),
                fmt(&self.readout)
            )
        } else {
            fmt(&self.readout)
        };
        if self.carry_out() {
            out.push_str(" [carry out]");
        }
        if !self.complements.is_empty() {
            let list: Vec<String> = self.complements.iter().map(fmt).collect();
            out.push_str(&format!(" (complements: {})", list.join(", ")));
        }
        out
    }
}

/// Evaluate left to right on `machine`, starting from a cleared machine.
pub fn evaluate(expr: &Expression, machine: &mut Machine) -> Result<Evaluation, MachineError> {
    let system = machine.system().clone();
    let view_for = |op: Op| match op {
        Op::Add => View::Direct,
        Op::Sub => View::Complement,
    };
    let mut view = expr
        .rest
        .first()
        .map_or(View::Direct, |(op, _)| view_for(*op));
    let mut complements = Vec::new();
    let mut wraps = 0i64;

    machine.clear()?;
    let seed = match view {
        View::Direct => expr.first.clone(),
        View::Complement => {
            let c = system.complement(&expr.first)?;
            complements.push(c.clone());
            c
        }
    };
    machine.enter_number(&seed)?;

    for (op, operand) in &expr.rest {
        let needed = view_for(*op);
        if needed != view {
            let wheels = machine.read()?;
            if view == View::Complement {
                complements.push(wheels.clone());
            }
            let flipped = system.complement(&wheels)?;
            if needed == View::Complement {
                complements.push(flipped.clone());
            }
            machine.clear()?;
            machine.enter_number(&flipped)?;
            view = needed;
        }
        let before = machine.carry_out_count();
        machine.enter_number(operand)?;
        let wrapped = (machine.carry_out_count() - before) as i64;
        wraps += match op {
            Op::Add => wrapped,
            Op::Sub => -wrapped,
        };
    }

    let wheels = machine.read()?;
    let readout = match view {
        View::Direct => wheels,
        View::Complement => {
            complements.push(wheels.clone());
            system.complement(&wheels)?
        }
    };
    Ok(Evaluation {
        readout,
        wraps,
        complements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PascalineConfig;

    fn dec() -> RadixSystem {
        RadixSystem::uniform(10, 4).unwrap()
    }

    fn n(v: u128) -> Numeral {
        dec().from_value(v).unwrap()
    }

    fn eval(text: &str) -> (Evaluation, String) {
        let mut m = Machine::new(PascalineConfig::default()).unwrap();
        let e = parse_expression(text, m.system()).unwrap();
        let out = evaluate(&e, &mut m).unwrap();
        let s = out.render(m.system());
        (out, s)
    }

    #[test]
    fn parses_chains() {
        let e = parse_expression("1642+373", &dec()).unwrap();
        assert_eq!(e.first, n(1642));
        assert_eq!(e.rest, vec![(Op::Add, n(373))]);
        let e = parse_expression(" 2015 - 373 ", &dec()).unwrap();
        assert_eq!(e.rest, vec![(Op::Sub, n(373))]);
        let e = parse_expression("1+2-3+4", &dec()).unwrap();
        assert_eq!(e.rest.len(), 3);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bin = RadixSystem::uniform(2, 4).unwrap();
        let err = parse_expression("12", &bin).unwrap_err();
        assert_eq!(
            err.to_string(),
            "digit '2' invalid for radix 2 at position 2"
        );
        assert_eq!(
            parse_expression("   ", &dec()).unwrap_err().kind,
            ParseErrorKind::Empty
        );
        let err = parse_expression("12345", &dec()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::OperandTooLong { len: 5, max: 4 });
        let err = parse_expression("12+", &dec()).unwrap_err();
        assert_eq!(
            (err.kind, err.position),
            (ParseErrorKind::MissingOperand, 4)
        );
        let err = parse_expression("1*2", &dec()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('*'));
        let err = parse_expression("(1)", &dec()).unwrap_err();
        assert_eq!(err.position, 1);
        assert!(parse_expression("1 2", &dec()).is_ok());
    }

    #[test]
    fn letters_for_large_radices() {
        let s = RadixSystem::uniform(12, 2).unwrap();
        let e = parse_expression("bB+1", &s).unwrap();
        assert_eq!(e.first.digits(), &[11, 11]);
        assert!(parse_expression("c", &s).is_err());
    }

    #[test]
    fn mixed_radix_literal_positions() {
        let s = RadixSystem::new(vec![12, 20, 10]).unwrap();
        // written most significant first: 3, 19, 11
        let e = parse_expression("3jb", &s).unwrap();
        assert_eq!(e.first.digits(), &[11, 19, 3]);
        let err = parse_expression("k0", &s).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::InvalidDigit { c: 'k', radix: 20 });
    }

    #[test]
    fn addition_report() {
        assert_eq!(eval("1642+373").1, "2015");
    }

    #[test]
    fn subtraction_report() {
        assert_eq!(eval("2015-373").1, "1642 (complements: 7984, 8357)");
    }

    #[test]
    fn carry_report() {
        assert_eq!(eval("9999+1").1, "0000 [carry out]");
    }

    #[test]
    fn negative_report() {
        let (e, s) = eval("373-2015");
        assert!(e.negative());
        assert_eq!(
            s,
            "-1642 [negative; readout 8358 is its radix complement] (complements: 9626, 1641)"
        );
    }

    #[test]
    fn single_operand() {
        assert_eq!(eval("42").1, "0042");
    }

    #[test]
    fn chain_matches_pairwise() {
        let (chain, _) = eval("1642+373-15");
        let mut m = Machine::new(PascalineConfig::default()).unwrap();
        let s = m.add(&n(1642), &n(373)).unwrap();
        let d = m.subtract(&s.result, &n(15)).unwrap();
        assert_eq!(chain.readout, d.readout);
        assert_eq!(chain.readout, n(2000));
    }

    #[test]
    fn chain_switches_views() {
        let (e, _) = eval("100-30-20+5-1");
        assert_eq!(e.readout, n(54));
        assert_eq!(e.wraps, 0);
        // comp(100), wheels before switching back, comp(wheels after +5), final wheels
        assert_eq!(e.complements, vec![n(9899), n(9949), n(9944), n(9945)]);
    }
}
