//! Text serialization `vmge-state v1`.
//!
//! ```text
//! vmge-state v1 n_qubits=2
//! 0 0.7071067811865476 0
//! 3 0.7071067811865476 0
//! ```
//!
//! One line per nonzero amplitude, `<index> <re> <im>`, in any order.
//! Duplicate indices are rejected.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

const MAGIC: &str = "vmge-state v1";
const MAX_QUBITS: usize = 30;

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

pub fn to_string(state: &StateVector) -> String {
    let mut out = String::with_capacity(32 * state.dim());
    writeln!(out, "{MAGIC} n_qubits={}", state.n_qubits()).unwrap();
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.re != 0.0 || a.im != 0.0 {
            writeln!(out, "{i} {:e} {:e}", a.re, a.im).unwrap();
        }
    }
    out
}

pub fn write<W: Write>(mut w: W, state: &StateVector) -> Result<()> {
    w.write_all(to_string(state).as_bytes())?;
    Ok(())
}

pub fn save(path: impl AsRef<Path>, state: &StateVector) -> Result<()> {
    std::fs::write(path, to_string(state))?;
    Ok(())
}

pub fn read<R: BufRead>(reader: R) -> Result<StateVector> {
    let mut lines = reader.lines().enumerate();
    let n_qubits = loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| format_err(1, "missing header"))?;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        break parse_header(idx + 1, &line)?;
    };
    let dim = 1usize << n_qubits;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let mut seen = vec![false; dim];
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let (Some(i), Some(re), Some(im), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(format_err(lineno, "expected `<index> <re> <im>`"));
        };
        let i: usize = i
            .parse()
            .map_err(|_| format_err(lineno, format!("bad index `{i}`")))?;
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format_err(lineno, format!("bad number `{s}`")))
        };
        let (re, im) = (parse_f(re)?, parse_f(im)?);
        if i >= dim {
            return Err(format_err(
                lineno,
                format!("index {i} out of range for {n_qubits} qubits"),
            ));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(format_err(lineno, format!("duplicate index {i}")));
        }
        amps[i] = Complex64::new(re, im);
    }
    StateVector::new(amps).map_err(|e| format_err(0, e.to_string()))
}

pub fn load(path: impl AsRef<Path>) -> Result<StateVector> {
    let f = std::fs::File::open(path)?;
    read(std::io::BufReader::new(f))
}

fn parse_header(lineno: usize, line: &str) -> Result<usize> {
    let rest = line
        .trim()
        .strip_prefix(MAGIC)
        .ok_or_else(|| format_err(lineno, format!("expected header `{MAGIC} n_qubits=<N>`")))?;
    let n = rest
        .trim()
        .strip_prefix("n_qubits=")
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| format_err(lineno, "malformed n_qubits field"))?;
    if n == 0 || n > MAX_QUBITS {
        return Err(format_err(
            lineno,
            format!("n_qubits={n} outside 1..={MAX_QUBITS}"),
        ));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<StateVector> {
        read(s.as_bytes())
    }

    #[test]
    fn reads_lines_in_any_order() {
        let s = parse("vmge-state v1 n_qubits=2\n3 0.6 0\n0 0 0.8\n").unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(0.0, 0.8));
        assert_eq!(s.amplitudes()[3], Complex64::new(0.6, 0.0));
    }

    #[test]
    fn rejects_duplicates_with_line_number() {
        let err = parse("vmge-state v1 n_qubits=1\n0 1 0\n0 1 0\n").unwrap_err();
        match err {
            Error::Format { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("").is_err());
        assert!(parse("vmge-state v2 n_qubits=1\n0 1 0\n").is_err());
        assert!(parse("vmge-state v1 n_qubits=1\n2 1 0\n").is_err());
        assert!(parse("vmge-state v1 n_qubits=1\n0 1\n").is_err());
        assert!(parse("vmge-state v1 n_qubits=1\n0 x 0\n").is_err());
        assert!(parse("vmge-state v1 n_qubits=1\n0 0.5 0\n").is_err());
    }

    proptest! {
        #[test]
        fn write_read_round_trip(v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
            let amps = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
            let Ok(state) = StateVector::normalized(amps) else { return Ok(()) };
            let back = parse(&to_string(&state)).unwrap();
            for (a, b) in state.amplitudes().iter().zip(back.amplitudes()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }
    }
}
