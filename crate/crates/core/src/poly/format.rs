//! Text form: a `d=<int>` header, then one `p/q * x1^a1x2^a2 * θ_1θ_2` line
//! per term. An empty monomial or `θ` part is written `1`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use super::{Polyvector, Term, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &a) in self.exps.iter().enumerate() {
            if a > 0 {
                write!(f, "x{}^{a}", i + 1)?;
                wrote = true;
            }
        }
        if !wrote {
            f.write_str("1")?;
        }
        f.write_str(" * ")?;
        if self.theta == 0 {
            return f.write_str("1");
        }
        for k in 0..64 {
            if self.theta >> k & 1 == 1 {
                write!(f, "θ_{}", k + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polyvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={}", self.d)?;
        for (t, c) in &self.terms {
            writeln!(f, "{} * {t}", format_q(c))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Polyvector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Polyvector::parse_text(s, 1)
    }
}

/// A cursor over one line that tracks 1-based character columns.
struct Cursor {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Self {
        Cursor {
            line,
            chars: text.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.chars.len() + 1, |c| c.0)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), msg)
    }

    fn eat(&mut self, s: &str) -> bool {
        let want: Vec<char> = s.chars().collect();
        let end = self.pos + want.len();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().map(|c| c.1).eq(want.iter().copied()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    /// Characters up to the next occurrence of `stop` or the end of the line.
    fn until(&mut self, stop: &str) -> (usize, String) {
        let col = self.column();
        let rest: String = self.chars[self.pos..].iter().map(|c| c.1).collect();
        let taken = rest.find(stop).map_or(rest.as_str(), |i| &rest[..i]).to_string();
        self.pos += taken.chars().count();
        (col, taken)
    }

    fn number(&mut self) -> Result<(usize, u64)> {
        let col = self.column();
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        digits
            .parse()
            .map(|v| (col, v))
            .map_err(|_| Error::parse(self.line, col, format!("number `{digits}` too large")))
    }

    fn at_end(&self) -> bool {
        self.pos == self.chars.len()
    }
}

fn parse_index(cur: &mut Cursor, d: usize) -> Result<usize> {
    let (col, i) = cur.number()?;
    if i == 0 || i as usize > d {
        return Err(Error::parse(cur.line, col, format!("index `{i}` outside 1..={d}")));
    }
    Ok(i as usize - 1)
}

fn parse_monomial(cur: &mut Cursor, d: usize) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; d];
    if cur.eat("1") {
        return Ok(exps);
    }
    let mut seen = BTreeSet::new();
    loop {
        let col = cur.column();
        cur.expect("x")?;
        let i = parse_index(cur, d)?;
        if !seen.insert(i) {
            return Err(Error::parse(cur.line, col, format!("variable x{} repeated", i + 1)));
        }
        exps[i] = if cur.eat("^") {
            let (c, a) = cur.number()?;
            u32::try_from(a).map_err(|_| Error::parse(cur.line, c, "exponent too large"))?
        } else {
            1
        };
        if cur.peek() != Some('x') {
            return Ok(exps);
        }
    }
}

fn parse_thetas(cur: &mut Cursor, d: usize) -> Result<u64> {
    if cur.eat("1") {
        return Ok(0);
    }
    let mut mask = 0u64;
    let mut last: Option<usize> = None;
    while !cur.at_end() {
        let col = cur.column();
        cur.expect("θ_")?;
        let k = parse_index(cur, d)?;
        if last.is_some_and(|l| k <= l) {
            return Err(Error::parse(cur.line, col, "θ indices must be strictly increasing"));
        }
        last = Some(k);
        mask |= 1 << k;
    }
    if last.is_none() {
        return Err(cur.err("expected `1` or θ factors"));
    }
    Ok(mask)
}

impl Polyvector {
    /// Parses the text form; `first_line` numbers the header line.
    pub fn parse_text(text: &str, first_line: usize) -> Result<Polyvector> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (first_line + k, l));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(first_line, 1, "missing `d=<int>` header"))?;
        let mut cur = Cursor::new(hl, header.trim_end());
        cur.expect("d=")?;
        let (col, d) = cur.number()?;
        if !cur.at_end() {
            return Err(cur.err("unexpected text after the header"));
        }
        if d as usize > MAX_DIMENSION {
            return Err(Error::parse(hl, col, format!("dimension {d} exceeds {MAX_DIMENSION}")));
        }
        let d = d as usize;
        let mut out = Polyvector::zero(d);
        for (ln, line) in lines {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let mut cur = Cursor::new(ln, line);
            let (ccol, coeff) = cur.until(" * ");
            let c = parse_q(&coeff).map_err(|m| Error::parse(ln, ccol, m))?;
            if c.is_zero() {
                return Err(Error::parse(ln, ccol, "zero coefficient"));
            }
            cur.expect(" * ")?;
            let exps = parse_monomial(&mut cur, d)?;
            cur.expect(" * ")?;
            let theta = parse_thetas(&mut cur, d)?;
            if !cur.at_end() {
                return Err(cur.err("unexpected trailing text"));
            }
            let key = Term { theta, exps };
            if out.terms.contains_key(&key) {
                return Err(Error::parse(ln, 1, "duplicate term"));
            }
            out.terms.insert(key, c);
        }
        Ok(out)
    }
}
