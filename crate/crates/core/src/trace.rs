//! Time-sampled machine state and its CSV form.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitSample {
    /// Voltage across the memristor: the readout divider when idle, the
    /// forced drive during a pulse.
    pub v_m: f64,
    pub resistance: f64,
    pub pulse: bool,
    pub reset: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub digits: Vec<DigitSample>,
}

/// Rows in strictly increasing time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    n_digits: usize,
    rows: Vec<TraceRow>,
}

impl Trace {
    pub fn new(n_digits: usize) -> Self {
        Trace {
            n_digits,
            rows: Vec::new(),
        }
    }

    pub fn n_digits(&self) -> usize {
        self.n_digits
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Append a row; a row at the same time as the last one replaces it.
    pub fn record(&mut self, row: TraceRow) {
        debug_assert_eq!(row.digits.len(), self.n_digits);
        match self.rows.last_mut() {
            Some(last) if last.t == row.t => *last = row,
            Some(last) if last.t > row.t => {
                panic!("trace row at {} after {}", row.t, last.t)
            }
            _ => self.rows.push(row),
        }
    }

    /// Series for one digit, `(t, sample)`.
    pub fn channel(&self, digit: usize) -> impl Iterator<Item = (f64, DigitSample)> + '_ {
        self.rows.iter().map(move |r| (r.t, r.digits[digit]))
    }

    pub fn header(&self) -> String {
        let mut h = String::from("t_s");
        for i in 1..=self.n_digits {
            write!(h, ",v_m_{i},r_{i},pulse_{i},reset_{i}").unwrap();
        }
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for row in &self.rows {
            out.push_str(&sig9(row.t));
            for d in &row.digits {
                write!(
                    out,
                    ",{},{},{},{}",
                    sig9(d.v_m),
                    sig9(d.resistance),
                    u8::from(d.pulse),
                    u8::from(d.reset)
                )
                .unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest text with nine significant digits, in the style of C's `%.9g`.
pub fn sig9(x: f64) -> String {
    format_significant(x, 9)
}

pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
