//! Plain-text polynomial format.
//!
//! Terms are `coeff * z^i * w^j` joined by `+` (a leading `-` on a term is
//! also accepted). Coefficients are real literals or parenthesized complex
//! literals such as `(0.5+0.1i)`. Examples: `z^3 + z*w`,
//! `(0.5+0.1i)*z^2*w`, `w`, `0`.

use num_complex::Complex64;

use crate::algebra::poly::BivarPoly;
use crate::error::{Error, Result};

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let mut saw_digit = false;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            saw_digit = true;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if !saw_digit {
            return Err(Error::Parse(format!(
                "expected a number at byte {}",
                start
            )));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad number {text:?}: {e}")))
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected an exponent at byte {start}")));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<u32>()
            .map_err(|e| Error::Parse(format!("bad exponent {text:?}: {e}")))
    }
}

/// Parse a complex literal body: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
fn complex_body(sc: &mut Scanner) -> Result<Complex64> {
    // Leading bare `i` (optionally signed).
    let sign = if sc.eat(b'-') {
        -1.0
    } else {
        sc.eat(b'+');
        1.0
    };
    if sc.eat(b'i') {
        return Ok(Complex64::new(0.0, sign));
    }
    let first = sign * sc.number()?;
    if sc.eat(b'i') {
        return Ok(Complex64::new(0.0, first));
    }
    match sc.peek() {
        Some(b'+') | Some(b'-') => {
            let s2 = if sc.bump() == Some(b'-') { -1.0 } else { 1.0 };
            if sc.eat(b'i') {
                return Ok(Complex64::new(first, s2));
            }
            let second = s2 * sc.number()?;
            if sc.eat(b'i') {
                Ok(Complex64::new(first, second))
            } else {
                Err(Error::Parse("expected 'i' after imaginary part".into()))
            }
        }
        _ => Ok(Complex64::new(first, 0.0)),
    }
}

/// Parse one term: product of factors (coefficient literals and variables).
fn term(sc: &mut Scanner) -> Result<((u32, u32), Complex64)> {
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut iexp = 0u32;
    let mut jexp = 0u32;
    let mut saw_factor = false;
    loop {
        match sc.peek() {
            Some(b'(') => {
                sc.bump();
                coeff *= complex_body(sc)?;
                if !sc.eat(b')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
            }
            Some(b'z') => {
                sc.bump();
                let e = if sc.eat(b'^') { sc.uint()? } else { 1 };
                iexp += e;
            }
            Some(b'w') => {
                sc.bump();
                let e = if sc.eat(b'^') { sc.uint()? } else { 1 };
                jexp += e;
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                coeff *= Complex64::new(sc.number()?, 0.0);
            }
            other => {
                if !saw_factor {
                    return Err(Error::Parse(format!(
                        "expected a term, found {:?}",
                        other.map(|c| c as char)
                    )));
                }
                break;
            }
        }
        saw_factor = true;
        if !sc.eat(b'*') {
            // Factors may also be juxtaposed with `*` omitted only before
            // variables, e.g. after `)`; keep looping and let peek decide.
            match sc.peek() {
                Some(b'z') | Some(b'w') | Some(b'(') => continue,
                _ => break,
            }
        }
    }
    Ok(((iexp, jexp), coeff))
}

/// Parse the textual polynomial format.
pub fn parse_poly(src: &str) -> Result<BivarPoly> {
    let mut sc = Scanner::new(src);
    let mut poly = BivarPoly::zero();
    let mut first = true;
    loop {
        let mut sign = 1.0;
        match sc.peek() {
            None => {
                if first {
                    return Err(Error::Parse("empty polynomial".into()));
                }
                break;
            }
            Some(b'+') => {
                sc.bump();
            }
            Some(b'-') => {
                sc.bump();
                sign = -1.0;
            }
            _ if first => {}
            Some(other) => {
                return Err(Error::Parse(format!(
                    "expected '+' between terms, found {:?}",
                    other as char
                )))
            }
        }
        let ((i, j), c) = term(&mut sc)?;
        let c = c * sign;
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("parsed coefficient".into()));
        }
        poly.add_term(i, j, c);
        first = false;
        if sc.peek().is_none() {
            break;
        }
    }
    Ok(poly)
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        if c.re >= 0.0 {
            fmt_real(c.re)
        } else {
            format!("({})", fmt_real(c.re))
        }
    } else if c.re == 0.0 {
        format!("({}i)", fmt_real(c.im))
    } else if c.im < 0.0 {
        format!("({}{}i)", fmt_real(c.re), fmt_real(c.im))
    } else {
        format!("({}+{}i)", fmt_real(c.re), fmt_real(c.im))
    }
}

/// Print in the textual polynomial format; `parse_poly` round-trips it
/// exactly (f64 formatting is shortest-round-trip).
pub fn format_poly(p: &BivarPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // Highest total degree first, then higher z-exponent first.
    let mut keys: Vec<(u32, u32)> = p.terms().map(|(&k, _)| k).collect();
    keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let mut out = String::new();
    for (n, &(i, j)) in keys.iter().enumerate() {
        if n > 0 {
            out.push_str(" + ");
        }
        let c = p.coeff(i, j);
        let mut factors: Vec<String> = Vec::new();
        let coeff_is_one = c == Complex64::new(1.0, 0.0);
        if !coeff_is_one || (i == 0 && j == 0) {
            factors.push(fmt_coeff(c));
        }
        if i == 1 {
            factors.push("z".into());
        } else if i > 1 {
            factors.push(format!("z^{i}"));
        }
        if j == 1 {
            factors.push("w".into());
        } else if j > 1 {
            factors.push(format!("w^{j}"));
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_spec_example() {
        let p = parse_poly("(0.5+0.1i)*z^2*w").unwrap();
        assert_eq!(p.coeff(2, 1), c(0.5, 0.1));
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn parses_plain_variables_and_sums() {
        let p = parse_poly("z^3 + z*w").unwrap();
        assert_eq!(p.coeff(3, 0), c(1.0, 0.0));
        assert_eq!(p.coeff(1, 1), c(1.0, 0.0));

        let q = parse_poly("w").unwrap();
        assert_eq!(q.coeff(0, 1), c(1.0, 0.0));

        let r = parse_poly("z^2 - w^3").unwrap();
        assert_eq!(r.coeff(0, 3), c(-1.0, 0.0));
    }

    #[test]
    fn parses_pure_imaginary_and_zero() {
        let p = parse_poly("(2i)*w + (-i)*z").unwrap();
        assert_eq!(p.coeff(0, 1), c(0.0, 2.0));
        assert_eq!(p.coeff(1, 0), c(0.0, -1.0));
        assert!(parse_poly("0").unwrap().is_zero());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("z +").is_err());
        assert!(parse_poly("q^2").is_err());
        assert!(parse_poly("(1+2j)*z").is_err());
    }

    #[test]
    fn format_round_trip() {
        for src in [
            "z^3 + z*w",
            "(0.5+0.1i)*z^2*w",
            "(-0.25)*z + (0.125-3i)*w^4",
            "0",
            "(1.5e-3)*z^2",
        ] {
            let p = parse_poly(src).unwrap();
            let q = parse_poly(&format_poly(&p)).unwrap();
            assert_eq!(p, q, "round trip failed for {src}");
        }
    }
}
