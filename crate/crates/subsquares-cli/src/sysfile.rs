//! Plain-text system files with exact float endpoints.
//!
//! Layout of a system file:
//!
//! ```text
//! # anything after a hash is a comment
//! m n
//! <m lines: the rows of A, n `lo hi` pairs each>
//! <m lines: the components of b, one `lo hi` pair each>
//! ```
//!
//! Endpoints are written as C-style hexadecimal floats
//! (`-0x1.599999999999ap+1`), which survive a write→read round trip bit for
//! bit. The reader additionally accepts plain decimal literals and
//! `inf`/`-inf`, so files can be authored by hand.
//!
//! Start boxes use the same tokens: a count line `n`, then n `lo hi` lines.

use std::fmt::Write as _;

use subsquares::interval::Interval;
use subsquares::linalg::{IntervalMatrix, IntervalVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

/// Formats one endpoint so that parsing it back reproduces identical bits.
pub fn format_endpoint(v: f64) -> String {
    assert!(!v.is_nan(), "system files cannot hold empty intervals");
    if v.is_infinite() {
        return if v < 0.0 { "-inf".into() } else { "inf".into() };
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        if mant == 0 {
            format!("{sign}0x0.0000000000000p+0")
        } else {
            // Subnormal: hidden bit 0, exponent pinned at the minimum.
            format!("{sign}0x0.{mant:013x}p-1022")
        }
    } else {
        format!("{sign}0x1.{mant:013x}p{:+}", exp - 1023)
    }
}

/// Strict reader for the shapes [`format_endpoint`] produces; reconstructs
/// the bit pattern directly so no rounding is involved.
fn parse_hex_endpoint(tok: &str) -> Option<f64> {
    let (sign, rest) = match tok.strip_prefix('-') {
        Some(r) => (1u64 << 63, r),
        None => (0, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let rest = rest.strip_prefix("0x")?;
    let (mantissa_part, exp_part) = rest.split_once('p')?;
    let exp: i64 = exp_part.parse().ok()?;
    let (lead, frac) = mantissa_part.split_once('.')?;
    if frac.len() != 13 || !frac.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let mant = u64::from_str_radix(frac, 16).ok()?;
    let bits = match lead {
        "1" if (-1022..=1023).contains(&exp) => sign | (((exp + 1023) as u64) << 52) | mant,
        "0" if mant == 0 && exp == 0 => sign,
        "0" if mant != 0 && exp == -1022 => sign | mant,
        _ => return None,
    };
    Some(f64::from_bits(bits))
}

/// Parses one endpoint token: hex float, decimal float, or `inf`/`-inf`.
pub fn parse_endpoint(tok: &str) -> Result<f64, String> {
    let hexish = tok.trim_start_matches(['-', '+']).starts_with("0x");
    if hexish {
        parse_hex_endpoint(tok).ok_or_else(|| format!("malformed hexadecimal float `{tok}`"))
    } else {
        match tok.parse::<f64>() {
            Ok(v) if !v.is_nan() => Ok(v),
            _ => Err(format!("expected a number, found `{tok}`")),
        }
    }
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

/// One entry per line that still has content after comment stripping.
fn tokenize(input: &str) -> Vec<Vec<Tok<'_>>> {
    let mut out = Vec::new();
    for (li, raw) in input.lines().enumerate() {
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let bytes = body.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            toks.push(Tok { line: li + 1, col: start + 1, text: &body[start..i] });
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

fn parse_count(t: Tok<'_>, what: &str) -> Result<usize, ParseError> {
    match t.text.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(syntax(t.line, t.col, format!("{what} must be a positive integer, found `{}`", t.text))),
    }
}

fn parse_interval(lo_tok: Tok<'_>, hi_tok: Tok<'_>) -> Result<Interval, ParseError> {
    let lo = parse_endpoint(lo_tok.text).map_err(|m| syntax(lo_tok.line, lo_tok.col, m))?;
    let hi = parse_endpoint(hi_tok.text).map_err(|m| syntax(hi_tok.line, hi_tok.col, m))?;
    if lo > hi {
        return Err(syntax(
            lo_tok.line,
            lo_tok.col,
            format!("interval bounds out of order: {} > {}", lo_tok.text, hi_tok.text),
        ));
    }
    if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
        return Err(syntax(lo_tok.line, lo_tok.col, "interval has no finite members"));
    }
    Ok(Interval::new(lo, hi))
}

/// Reads `want` intervals from one logical line.
fn parse_interval_line(toks: &[Tok<'_>], want: usize, what: &str) -> Result<Vec<Interval>, ParseError> {
    if toks.len() != 2 * want {
        let t = toks[0];
        return Err(syntax(
            t.line,
            t.col,
            format!("{} needs {} values (`lo hi` × {}), found {}", what, 2 * want, want, toks.len()),
        ));
    }
    toks.chunks(2).map(|p| parse_interval(p[0], p[1])).collect()
}

pub fn read_system(input: &str) -> Result<(IntervalMatrix, IntervalVector), ParseError> {
    let lines = tokenize(input);
    let mut it = lines.iter();
    let header = it
        .next()
        .ok_or_else(|| syntax(1, 1, "empty file: expected a `m n` size header"))?;
    if header.len() != 2 {
        return Err(syntax(header[0].line, header[0].col, "size header must be exactly `m n`"));
    }
    let m = parse_count(header[0], "equation count m")?;
    let n = parse_count(header[1], "unknown count n")?;

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let toks = it.next().ok_or_else(|| {
            syntax(header[0].line, header[0].col, format!("file ends before matrix row {}", i + 1))
        })?;
        rows.push(parse_interval_line(toks, n, &format!("matrix row {}", i + 1))?);
    }
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let toks = it.next().ok_or_else(|| {
            syntax(header[0].line, header[0].col, format!("file ends before right-hand side {}", i + 1))
        })?;
        b.push(parse_interval_line(toks, 1, &format!("right-hand side {}", i + 1))?[0]);
    }
    if let Some(extra) = it.next() {
        return Err(syntax(extra[0].line, extra[0].col, "unexpected content after the system"));
    }
    Ok((IntervalMatrix::from_rows(&rows), IntervalVector::new(b)))
}

pub fn write_system(a: &IntervalMatrix, b: &IntervalVector) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        let mut sep = "";
        for iv in a.row(i) {
            let (lo, hi) = iv.bounds().expect("system entries are never empty");
            let _ = write!(s, "{sep}{} {}", format_endpoint(lo), format_endpoint(hi));
            sep = " ";
        }
        s.push('\n');
    }
    for i in 0..b.len() {
        let (lo, hi) = b[i].bounds().expect("system entries are never empty");
        let _ = writeln!(s, "{} {}", format_endpoint(lo), format_endpoint(hi));
    }
    s
}

pub fn read_box(input: &str) -> Result<IntervalVector, ParseError> {
    let lines = tokenize(input);
    let mut it = lines.iter();
    let header = it
        .next()
        .ok_or_else(|| syntax(1, 1, "empty file: expected a component count"))?;
    if header.len() != 1 {
        return Err(syntax(header[0].line, header[0].col, "box header must be a single count"));
    }
    let n = parse_count(header[0], "component count")?;
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let toks = it.next().ok_or_else(|| {
            syntax(header[0].line, header[0].col, format!("file ends before box component {}", i + 1))
        })?;
        comps.push(parse_interval_line(toks, 1, &format!("box component {}", i + 1))?[0]);
    }
    if let Some(extra) = it.next() {
        return Err(syntax(extra[0].line, extra[0].col, "unexpected content after the box"));
    }
    Ok(IntervalVector::new(comps))
}

pub fn write_box(x: &IntervalVector) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", x.len());
    for i in 0..x.len() {
        let (lo, hi) = x[i].bounds().expect("boxes in files are never empty");
        let _ = writeln!(s, "{} {}", format_endpoint(lo), format_endpoint(hi));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn endpoint_round_trip_on_random_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 2000 {
            let v = f64::from_bits(rng.random::<u64>());
            if v.is_nan() {
                continue;
            }
            let s = format_endpoint(v);
            let back = parse_endpoint(&s).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
            checked += 1;
        }
    }

    #[test]
    fn endpoint_round_trip_on_edge_values() {
        for v in [
            0.0,
            -0.0,
            1.0,
            -1.0,
            f64::MIN_POSITIVE,            // smallest normal
            f64::MIN_POSITIVE / 4.0,      // subnormal
            5e-324,                       // smallest subnormal
            f64::MAX,
            f64::MIN,
            f64::INFINITY,
            f64::NEG_INFINITY,
            std::f64::consts::PI,
        ] {
            let back = parse_endpoint(&format_endpoint(v)).unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn accepts_decimal_and_infinite_tokens() {
        assert_eq!(parse_endpoint("1.5").unwrap(), 1.5);
        assert_eq!(parse_endpoint("-3").unwrap(), -3.0);
        assert_eq!(parse_endpoint("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_endpoint("-inf").unwrap(), f64::NEG_INFINITY);
        assert!(parse_endpoint("nan").is_err());
        assert!(parse_endpoint("0x2.0000000000000p+0").is_err());
        assert!(parse_endpoint("0x1.cafep+0").is_err()); // short fraction
    }

    fn sample_system() -> (IntervalMatrix, IntervalVector) {
        let a = IntervalMatrix::from_rows(&[
            vec![Interval::new(-0.8, 0.2), Interval::new(-20.1, -19.5)],
            vec![Interval::new(-15.6, -15.2), Interval::new(14.8, 16.7)],
            vec![Interval::new(18.8, 20.1), Interval::new(8.1, 9.5)],
        ]);
        let b = IntervalVector::new(vec![
            Interval::new(292.1, 292.7),
            Interval::new(-361.9, -361.1),
            Interval::new(28.4, 30.3),
        ]);
        (a, b)
    }

    #[test]
    fn system_round_trip_is_exact() {
        let (a, b) = sample_system();
        let text = write_system(&a, &b);
        let (a2, b2) = read_system(&text).unwrap();
        assert_eq!(a2.rows(), 3);
        for i in 0..3 {
            for j in 0..2 {
                let (l1, h1) = a[(i, j)].bounds().unwrap();
                let (l2, h2) = a2[(i, j)].bounds().unwrap();
                assert_eq!((l1.to_bits(), h1.to_bits()), (l2.to_bits(), h2.to_bits()));
            }
            let (l1, h1) = b[i].bounds().unwrap();
            let (l2, h2) = b2[i].bounds().unwrap();
            assert_eq!((l1.to_bits(), h1.to_bits()), (l2.to_bits(), h2.to_bits()));
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a 1x1 system\n\n1 1  # size\n2 3 # the matrix\n\n4 5\n";
        let (a, b) = read_system(text).unwrap();
        assert_eq!(a.rows(), 1);
        assert_eq!(a[(0, 0)], Interval::new(2.0, 3.0));
        assert_eq!(b[0], Interval::new(4.0, 5.0));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = read_system("1 1\n2 oops\n4 5\n").unwrap_err();
        let ParseError::Syntax { line, col, msg } = err;
        assert_eq!((line, col), (2, 3));
        assert!(msg.contains("oops"));

        let err = read_system("1 1\n3 2\n4 5\n").unwrap_err();
        let ParseError::Syntax { line, col, .. } = err;
        assert_eq!((line, col), (2, 1));

        let err = read_system("1 1\n2 3\n").unwrap_err();
        let ParseError::Syntax { msg, .. } = err;
        assert!(msg.contains("right-hand side"));

        let err = read_system("1 1\n2 3\n4 5\n6 7\n").unwrap_err();
        let ParseError::Syntax { line, .. } = err;
        assert_eq!(line, 4);
    }

    #[test]
    fn box_round_trip_accepts_unbounded_components() {
        let x = IntervalVector::new(vec![
            Interval::new(f64::NEG_INFINITY, 2.0),
            Interval::new(-1.0, f64::INFINITY),
        ]);
        let back = read_box(&write_box(&x)).unwrap();
        assert_eq!(back[0], x[0]);
        assert_eq!(back[1], x[1]);
    }
}
