//! Expressions over a backend: `pi`, `t`, `x`, `y`, `w` (the generator of a
//! non-prime `k`), integers, `+ - * / ^` and parentheses.

use crate::backend::{Backend, BackendKind, KElement};
use crate::error::{Error, Result};
use crate::tree::Vertex;

/// Parses an expression into an element of `K`.
pub fn parse_element(bk: &Backend, src: &str) -> Result<KElement> {
    let tokens = tokenize(src)?;
    let mut p = Parser { bk, tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected {:?} in {src:?}", p.tokens[p.pos])));
    }
    Ok(v)
}

/// Parses a vertex spec `n;expr` (or `n expr`) into the canonical vertex
/// `v(n, expr)`.
pub fn parse_vertex(bk: &Backend, spec: &str) -> Result<Vertex> {
    let spec = spec.trim();
    if spec.starts_with("v(") {
        return spec.parse();
    }
    let (n, z) = spec
        .split_once(';')
        .or_else(|| spec.split_once(char::is_whitespace))
        .ok_or_else(|| Error::Parse(format!("vertex spec {spec:?} is not of the form `n;expr`")))?;
    let n: i64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad level {:?}", n.trim())))?;
    let z = parse_element(bk, z.trim())?;
    Ok(Vertex::normalize(bk, n, &z))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| Error::Parse(format!("integer {s} too large")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    bk: &'a Backend,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<KElement> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { self.bk.add(&acc, &rhs) } else { self.bk.sub(&acc, &rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<KElement> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                self.bk.mul(&acc, &rhs)
            } else {
                self.bk.div(&acc, &rhs).map_err(|_| Error::Parse("division by zero".into()))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<KElement> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.bk.neg(&v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<KElement> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek_op() == Some('-');
        if negative {
            self.pos += 1;
        }
        let Some(Tok::Int(e)) = self.tokens.get(self.pos).cloned() else {
            return Err(Error::Parse("exponent must be an integer".into()));
        };
        self.pos += 1;
        let e = if negative { -e } else { e };
        self.bk.pow(&base, e).map_err(|_| Error::Parse("negative power of zero".into()))
    }

    fn atom(&mut self) -> Result<KElement> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        let elliptic = self.bk.kind() == BackendKind::EllipticDelta1;
        match tok {
            Tok::Int(n) => Ok(self.bk.from_int(n)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(self.bk.local_parameter()),
                "t" if !elliptic => Ok(self.bk.var()),
                "x" if elliptic => Ok(self.bk.var()),
                "y" if elliptic => self.bk.y(),
                "w" if self.bk.field().ext_degree() > 1 => Ok(KElement::constant(self.bk.field().generator())),
                other => Err(Error::Parse(format!("unknown symbol {other:?} for {}", self.bk.describe()))),
            },
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::BackendConfig;

    #[test]
    fn parses_rational_expressions() {
        let bk = Backend::new(BackendConfig::rational(2)).unwrap();
        let z = parse_element(&bk, "1/t").unwrap();
        assert_eq!(z, bk.local_parameter());
        let z = parse_element(&bk, "(t + 1)^2 - t^2").unwrap();
        assert_eq!(z, KElement::one());
        assert_eq!(parse_element(&bk, "pi^-1").unwrap(), bk.var());
        assert!(parse_element(&bk, "y").is_err());
        assert!(parse_element(&bk, "1/0").is_err());
        assert!(parse_element(&bk, "t +").is_err());
    }

    #[test]
    fn parses_vertex_specs() {
        let bk = Backend::new(BackendConfig::default_for(BackendKind::EllipticDelta1, 3).unwrap()).unwrap();
        let v = parse_vertex(&bk, "1;1/pi").unwrap();
        assert_eq!(v, Vertex::from_digits(1, [(-1, 1)]));
        assert_eq!(parse_vertex(&bk, "2 y/x + pi*2").unwrap(), Vertex::from_digits(2, [(-1, 1), (1, 2)]));
        assert_eq!(parse_vertex(&bk, "v(1; -1:1)").unwrap(), v);
        assert!(parse_vertex(&bk, "one;0").is_err());
    }
}
