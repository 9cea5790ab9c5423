//! State files: `key = value` lines, `#` starts a comment.
//!
//! ```text
//! # uniform four-qubit W state
//! n_qubits = 4
//! a = 0
//! b = 0.5 0.5 0.5 0.5
//! block = 1 2 3      # optional, ordered B qubits (default: all)
//! t = 1              # optional split index
//! normalize = false  # optional, rescale amplitudes to unit norm
//! ```
//!
//! Complex numbers are written `re,im` (no spaces) or as a bare real;
//! `re+imi` is accepted as well.

use std::fmt;

use num_complex::Complex64;
use wmono_core::wclass::{SubsystemSelection, WClassCoefficients};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line, 0 when the problem is not tied to one line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "state file: {}", self.message)
        } else {
            write!(f, "state file line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub coefficients: WClassCoefficients,
    pub block: SubsystemSelection,
    pub t: Option<usize>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_complex(tok: &str) -> Option<Complex64> {
    let real = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
    if let Some((re, im)) = tok.split_once(',') {
        return Some(Complex64::new(real(re)?, real(im)?));
    }
    if let Some(body) = tok.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let unit = |s: &str| match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            s => real(s),
        };
        return match split {
            Some(k) => Some(Complex64::new(real(&body[..k])?, unit(&body[k..])?)),
            None => Some(Complex64::new(0.0, unit(body)?)),
        };
    }
    Some(Complex64::new(real(tok)?, 0.0))
}

#[derive(Default)]
struct Fields {
    n_qubits: Option<(usize, usize)>,
    a: Option<(usize, Complex64)>,
    b: Option<(usize, Vec<Complex64>)>,
    block: Option<(usize, Vec<usize>)>,
    t: Option<(usize, usize)>,
    normalize: Option<(usize, bool)>,
}

pub fn parse_state(text: &str) -> Result<StateSpec, ParseError> {
    let mut f = Fields::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let dup = |present: bool| {
            if present {
                Err(err(line, format!("duplicate key `{key}`")))
            } else {
                Ok(())
            }
        };
        let int = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| err(line, format!("`{tok}` is not a non-negative integer")))
        };
        match key {
            "n_qubits" => {
                dup(f.n_qubits.is_some())?;
                f.n_qubits = Some((line, int(value)?));
            }
            "a" => {
                dup(f.a.is_some())?;
                let z = parse_complex(value)
                    .ok_or_else(|| err(line, format!("bad amplitude `{value}`")))?;
                f.a = Some((line, z));
            }
            "b" => {
                dup(f.b.is_some())?;
                let zs = value
                    .split_whitespace()
                    .map(|tok| {
                        parse_complex(tok)
                            .ok_or_else(|| err(line, format!("bad amplitude `{tok}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                f.b = Some((line, zs));
            }
            "block" => {
                dup(f.block.is_some())?;
                let js = value
                    .split_whitespace()
                    .map(int)
                    .collect::<Result<Vec<_>, _>>()?;
                f.block = Some((line, js));
            }
            "t" => {
                dup(f.t.is_some())?;
                f.t = Some((line, int(value)?));
            }
            "normalize" => {
                dup(f.normalize.is_some())?;
                let v = value
                    .parse::<bool>()
                    .map_err(|_| err(line, format!("`{value}` is not true or false")))?;
                f.normalize = Some((line, v));
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }

    let (n_line, n) = f.n_qubits.ok_or_else(|| err(0, "missing key `n_qubits`"))?;
    let (b_line, b) = f.b.ok_or_else(|| err(0, "missing key `b`"))?;
    if b.len() != n {
        return Err(err(
            b_line,
            format!(
                "expected {n} amplitudes for n_qubits = {n}, got {}",
                b.len()
            ),
        ));
    }
    if n < 2 {
        return Err(err(n_line, "n_qubits must be at least 2"));
    }
    let a = f.a.map_or(Complex64::new(0.0, 0.0), |(_, z)| z);
    let normalize = f.normalize.is_some_and(|(_, v)| v);
    let coefficients = if normalize {
        WClassCoefficients::normalized(a, b)
    } else {
        WClassCoefficients::new(a, b)
    }
    .map_err(|e| err(b_line, e.to_string()))?;
    let block = match f.block {
        Some((line, js)) => SubsystemSelection::new(n, js).map_err(|e| err(line, e.to_string()))?,
        None => SubsystemSelection::full(n).map_err(|e| err(n_line, e.to_string()))?,
    };
    let t = f.t.map(|(_, t)| t);
    Ok(StateSpec {
        coefficients,
        block,
        t,
    })
}
