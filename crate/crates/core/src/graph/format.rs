//! `n=<int> edges=(s,t)...` and `n=<int> uedges={a,b}...`, 1-based.

use std::fmt;
use std::str::FromStr;

use super::{EdgeKind, Graph, MAX_VERTICES};
use crate::error::{Error, Result};

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} ", self.n)?;
        match self.kind {
            EdgeKind::Directed => {
                f.write_str("edges=")?;
                for &(a, b) in &self.edges {
                    write!(f, "({},{})", a + 1, b + 1)?;
                }
            }
            EdgeKind::Undirected => {
                f.write_str("uedges=")?;
                for &(a, b) in &self.edges {
                    write!(f, "{{{},{}}}", a + 1, b + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s, 1, 1)
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + self.pos, msg)
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{lit}`")))
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        let rest = &self.s[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        let tok = &rest[..len];
        let v = tok
            .parse::<usize>()
            .map_err(|_| self.err(format!("number `{tok}` out of range")))?;
        self.pos += len;
        Ok(v)
    }
}

/// Parses one graph; `line` and `column` locate the text for error messages.
pub(crate) fn parse_graph(s: &str, line: usize, column: usize) -> Result<Graph> {
    let mut c = Cursor {
        s,
        pos: 0,
        line,
        col0: column,
    };
    c.expect("n=")?;
    let n_at = c.pos;
    let n = c.number()?;
    if n == 0 || n > MAX_VERTICES {
        c.pos = n_at;
        return Err(c.err(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
    }
    c.expect(" ")?;
    let (kind, open, close) = if c.eat("edges=") {
        (EdgeKind::Directed, "(", ")")
    } else if c.eat("uedges=") {
        (EdgeKind::Undirected, "{", "}")
    } else {
        return Err(c.err("expected `edges=` or `uedges=`"));
    };
    let mut edges = Vec::new();
    while c.pos < s.len() {
        c.expect(open)?;
        let mut ends = [0u8; 2];
        for (k, end) in ends.iter_mut().enumerate() {
            if k == 1 {
                c.expect(",")?;
            }
            let at = c.pos;
            let v = c.number()?;
            if v == 0 || v > n {
                c.pos = at;
                return Err(c.err(format!("edge endpoint `{v}` outside 1..={n}")));
            }
            *end = (v - 1) as u8;
        }
        c.expect(close)?;
        edges.push((ends[0], ends[1]));
    }
    Ok(Graph::from_raw(kind, n, edges))
}
