//! Line-oriented text formats for matrices and symbols.
//!
//! Matrix files:
//!
//! ```text
//! matrix <rows> <cols> <index_origin>
//! m n re im
//! ...
//! ```
//!
//! with one line per nonzero entry, indices in the matrix's own origin
//! (0 or 1).  Symbol files are analogous:
//!
//! ```text
//! symbol <additive|multiplicative>
//! k re im
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.  Duplicate
//! coordinates are rejected.  Writers emit floats in shortest-round-trip
//! scientific notation, so read(write(x)) reproduces x bit for bit.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::schatten::{size_cap, ComplexMatrix, IndexOrigin, SymbolKind, SymbolSequence};
use crate::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

// Yields (1-based line number, trimmed content) of non-blank,
// non-comment lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|&(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(line: usize, token: &str, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from `{token}`")))
}

fn parse_u64(line: usize, token: &str, what: &str) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from `{token}`")))
}

/// Writes a matrix in the line-oriented format, nonzero entries only,
/// in row-major order.
pub fn write_matrix<W: Write>(out: &mut W, m: &ComplexMatrix) -> Result<()> {
    let origin = match m.origin() {
        IndexOrigin::Zero => 0usize,
        IndexOrigin::One => 1usize,
    };
    writeln!(out, "matrix {} {} {}", m.rows(), m.cols(), origin)?;
    for i in origin..m.rows() + origin {
        for j in origin..m.cols() + origin {
            let v = m.entry(i, j);
            if v != Complex64::new(0.0, 0.0) {
                writeln!(out, "{} {} {:e} {:e}", i, j, v.re, v.im)?;
            }
        }
    }
    Ok(())
}

/// Parses a matrix from the line-oriented format.
pub fn read_matrix<R: BufRead>(input: R) -> Result<ComplexMatrix> {
    let mut text = String::new();
    let mut reader = input;
    reader.read_to_string(&mut text)?;
    parse_matrix(&text)
}

/// Parses a matrix from in-memory text.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty input, expected `matrix <rows> <cols> <origin>`"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "matrix" {
        return Err(parse_err(header_no, "expected header `matrix <rows> <cols> <origin>`"));
    }
    let rows = parse_u64(header_no, tokens[1], "row count")? as usize;
    let cols = parse_u64(header_no, tokens[2], "column count")? as usize;
    if rows == 0 || cols == 0 {
        return Err(parse_err(header_no, "matrix dimensions must be positive"));
    }
    let cap = size_cap();
    if rows.max(cols) > cap {
        return Err(Error::SizeCapExceeded { requested: rows.max(cols), cap });
    }
    let origin = match tokens[3] {
        "0" => IndexOrigin::Zero,
        "1" => IndexOrigin::One,
        other => return Err(parse_err(header_no, format!("index origin must be 0 or 1, got `{other}`"))),
    };
    let off = match origin {
        IndexOrigin::Zero => 0u64,
        IndexOrigin::One => 1u64,
    };

    let mut matrix = ComplexMatrix::zeros(rows, cols, origin);
    let mut seen: BTreeSet<(u64, u64)> = BTreeSet::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(parse_err(no, "expected entry line `m n re im`"));
        }
        let m = parse_u64(no, tokens[0], "row index")?;
        let n = parse_u64(no, tokens[1], "column index")?;
        if m < off || m >= rows as u64 + off || n < off || n >= cols as u64 + off {
            return Err(parse_err(no, format!("index ({m}, {n}) outside the declared {rows}x{cols} range")));
        }
        if !seen.insert((m, n)) {
            return Err(Error::DuplicateEntry { m, n });
        }
        let re = parse_f64(no, tokens[2], "real part")?;
        let im = parse_f64(no, tokens[3], "imaginary part")?;
        matrix.set_entry(m as usize, n as usize, Complex64::new(re, im));
    }
    Ok(matrix)
}

/// Writes a symbol in the line-oriented format, ascending by index.
pub fn write_symbol<W: Write>(out: &mut W, s: &SymbolSequence) -> Result<()> {
    let kind = match s.kind() {
        SymbolKind::Additive => "additive",
        SymbolKind::Multiplicative => "multiplicative",
    };
    writeln!(out, "symbol {kind}")?;
    for (k, v) in s.support() {
        writeln!(out, "{} {:e} {:e}", k, v.re, v.im)?;
    }
    Ok(())
}

/// Parses a symbol from the line-oriented format.
pub fn read_symbol<R: BufRead>(input: R) -> Result<SymbolSequence> {
    let mut text = String::new();
    let mut reader = input;
    reader.read_to_string(&mut text)?;
    parse_symbol(&text)
}

/// Parses a symbol from in-memory text.
pub fn parse_symbol(text: &str) -> Result<SymbolSequence> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty input, expected `symbol <kind>`"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "symbol" {
        return Err(parse_err(header_no, "expected header `symbol <additive|multiplicative>`"));
    }
    let kind = match tokens[1] {
        "additive" => SymbolKind::Additive,
        "multiplicative" => SymbolKind::Multiplicative,
        other => return Err(parse_err(header_no, format!("unknown symbol kind `{other}`"))),
    };
    let mut symbol = SymbolSequence::new(kind);
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_err(no, "expected entry line `k re im`"));
        }
        let k = parse_u64(no, tokens[0], "index")?;
        if !seen.insert(k) {
            return Err(Error::DuplicateEntry { m: k, n: k });
        }
        let re = parse_f64(no, tokens[1], "real part")?;
        let im = parse_f64(no, tokens[2], "imaginary part")?;
        if kind == SymbolKind::Multiplicative && k == 0 {
            return Err(parse_err(no, "multiplicative symbols index from 1"));
        }
        symbol.set(k, Complex64::new(re, im))?;
    }
    Ok(symbol)
}

/// Reads a matrix from a file path.
pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

/// Writes a matrix to a file path.
pub fn write_matrix_file(path: &Path, m: &ComplexMatrix) -> Result<()> {
    let mut buf = Vec::new();
    write_matrix(&mut buf, m)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Reads a symbol from a file path.
pub fn read_symbol_file(path: &Path) -> Result<SymbolSequence> {
    parse_symbol(&std::fs::read_to_string(path)?)
}

/// Writes a symbol to a file path.
pub fn write_symbol_file(path: &Path, s: &SymbolSequence) -> Result<()> {
    let mut buf = Vec::new();
    write_symbol(&mut buf, s)?;
    std::fs::write(path, buf)?;
    Ok(())
}
