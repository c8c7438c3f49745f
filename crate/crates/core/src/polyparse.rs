//! Text form for multivariate polynomials: `coeff*x1^a1*x2^a2 + ...`.
//!
//! Coefficients are either plain integers (prime-field scalars, signs
//! allowed) or bracketed vectors `[c0,c1,...]` giving the coefficients of a
//! field element on the power basis.  The coefficient and any `^a` may be
//! omitted (`x1*x2`, `3`, `x2^5` are all terms).  Parsing is purely
//! syntactic; reduction into a concrete field happens later.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawCoeff {
    Scalar(i64),
    Vector(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPoly {
    pub terms: Vec<(RawCoeff, Vec<u64>)>,
    pub nvars: usize,
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn fail(&self, what: &str) -> Error {
        Error::parse(format!("{} at byte {}", what, self.pos))
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.fail("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.fail("number too large"))
    }
}

fn parse_term(cur: &mut Cursor, sign: i64) -> Result<(RawCoeff, Vec<(usize, u64)>)> {
    cur.skip_ws();
    let mut coeff = None;
    match cur.peek() {
        Some(b'[') => {
            cur.bump();
            let mut entries = Vec::new();
            loop {
                cur.skip_ws();
                entries.push(cur.integer()?);
                cur.skip_ws();
                match cur.bump() {
                    Some(b',') => continue,
                    Some(b']') => break,
                    _ => return Err(cur.fail("expected ',' or ']'")),
                }
            }
            if sign < 0 {
                return Err(cur.fail(
                    "'-' before a bracketed coefficient is not supported; negate its entries mod p",
                ));
            }
            coeff = Some(RawCoeff::Vector(entries));
        }
        Some(b) if b.is_ascii_digit() => {
            let n = cur.integer()?;
            let n = i64::try_from(n).map_err(|_| cur.fail("coefficient too large"))?;
            coeff = Some(RawCoeff::Scalar(sign * n));
        }
        _ => {}
    }

    let mut factors = Vec::new();
    loop {
        cur.skip_ws();
        if coeff.is_some() || !factors.is_empty() {
            if cur.peek() == Some(b'*') {
                cur.bump();
                cur.skip_ws();
            } else {
                break;
            }
        }
        if cur.peek() != Some(b'x') {
            if coeff.is_none() && factors.is_empty() {
                return Err(cur.fail("expected a coefficient or a variable"));
            }
            return Err(cur.fail("expected a variable after '*'"));
        }
        cur.bump();
        let var = cur.integer()?;
        if var == 0 {
            return Err(cur.fail("variables are numbered from x1"));
        }
        if var > 32 {
            return Err(cur.fail("variable index too large (at most x32)"));
        }
        let exp = if cur.peek() == Some(b'^') {
            cur.bump();
            cur.integer()?
        } else {
            1
        };
        factors.push((var as usize - 1, exp));
    }

    let coeff = coeff.unwrap_or(RawCoeff::Scalar(sign));
    Ok((coeff, factors))
}

/// Parses the textual polynomial.  When `nvars` is given, every variable
/// index must fit; otherwise the variable count is the largest index seen
/// (at least one for a constant-only input).
pub fn parse_polynomial(text: &str, nvars: Option<usize>) -> Result<RawPoly> {
    if !text.is_ascii() {
        // normalize the unicode minus so exponents pasted from documents work
        let replaced = text.replace('\u{2212}', "-");
        if !replaced.is_ascii() {
            return Err(Error::parse("polynomial text must be ASCII"));
        }
        return parse_polynomial(&replaced, nvars);
    }
    let mut cur = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut raw_terms = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut sign = match cur.peek() {
        Some(b'-') => {
            cur.bump();
            -1
        }
        Some(b'+') => {
            cur.bump();
            1
        }
        _ => 1,
    };
    loop {
        let term = parse_term(&mut cur, sign)?;
        raw_terms.push(term);
        cur.skip_ws();
        match cur.bump() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(_) => return Err(cur.fail("expected '+' or '-' between terms")),
        }
    }

    let max_var = raw_terms
        .iter()
        .flat_map(|(_, fs)| fs.iter().map(|&(v, _)| v + 1))
        .max()
        .unwrap_or(0);
    let nvars = match nvars {
        Some(n) => {
            if max_var > n {
                return Err(Error::parse(format!(
                    "variable x{max_var} used but only {n} variables declared"
                )));
            }
            n
        }
        None => max_var.max(1),
    };

    let mut terms = Vec::new();
    for (coeff, factors) in raw_terms {
        let mut exps = vec![0u64; nvars];
        for (v, e) in factors {
            exps[v] = exps[v]
                .checked_add(e)
                .ok_or_else(|| Error::parse("exponent overflow"))?;
        }
        terms.push((coeff, exps));
    }
    Ok(RawPoly { terms, nvars })
}
