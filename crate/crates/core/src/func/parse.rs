//! Function mini-language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '(' expr ')' | 'z' ['^' int] | complex | atom
//!         | 'compose(' expr ';' 'a=' complex ')'
//! atom   := 'poly:[' complex,* ']' | 'blaschke:[' complex,* ']' | 'gap:[' complex,* ']'
//!         | 'fa:a=C,p=P' | 'ha:a=C' | 'fp:p=P,depth=K'
//!         | 'log:a=C[,scale=C][,offset=C]' | 'mobius:a=C'
//! complex:= real [('+'|'-') real 'i'] | real 'i'
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::func::atoms::{make_atom, AtomKind};
use crate::func::expr::FunctionExpr;
use crate::func::lacunary::LacunaryCoefficients;
use crate::func::series::CoefficientSeries;

fn parse_unchecked(src: &str) -> Result<FunctionExpr> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_function(src: &str) -> Result<FunctionExpr> {
    let e = parse_unchecked(src)?;
    e.validate().map_err(|e| Error::Parse { pos: 0, token: src.to_string(), msg: e.to_string() })?;
    Ok(e)
}

/// Parses a single gap atom. No evaluation depth limit, since coefficient
/// criteria never evaluate inside the disc.
pub fn parse_coefficients(src: &str) -> Result<LacunaryCoefficients> {
    match parse_unchecked(src)? {
        FunctionExpr::Gap(a) => Ok(a),
        _ => Err(Error::Parse { pos: 0, token: src.to_string(), msg: "not a gap series (use fp:p=..,depth=.. or gap:[..])".into() }),
    }
}

/// Parses `RE[+IMi]`.
pub fn parse_complex(src: &str) -> Result<C64> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let c = p.complex()?;
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(c)
}

/// Parses `key=value,key=value` into a map of raw value strings.
pub fn parse_kv(src: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    if src.trim().is_empty() {
        return Ok(out);
    }
    let mut offset = 0;
    for part in src.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse {
            pos: offset,
            token: part.to_string(),
            msg: "expected key=value".into(),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
        offset += part.len() + 1;
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        let rest = &self.s[self.pos.min(self.s.len())..];
        let tok: String = String::from_utf8_lossy(rest)
            .chars()
            .take_while(|c| !c.is_whitespace())
            .take(16)
            .collect();
        Error::Parse { pos: self.pos, token: if tok.is_empty() { "<end>".into() } else { tok }, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FunctionExpr> {
        let mut parts = vec![self.term()?];
        loop {
            self.ws();
            if self.eat(b'+') {
                parts.push(self.term()?);
            } else if self.eat(b'-') {
                let t = self.term()?;
                parts.push(FunctionExpr::product(vec![FunctionExpr::constant(-1.0), t]));
            } else {
                break;
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { FunctionExpr::Sum(parts) })
    }

    fn term(&mut self) -> Result<FunctionExpr> {
        let mut parts = vec![self.factor()?];
        loop {
            self.ws();
            if self.eat(b'*') {
                parts.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { FunctionExpr::Product(parts) })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn factor(&mut self) -> Result<FunctionExpr> {
        self.ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.ws();
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' || c == b'-' => Ok(FunctionExpr::Constant(self.complex()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "z" => {
                        if self.eat(b'^') {
                            let n = self.real()?;
                            if n < 0.0 || n.fract() != 0.0 || n > u32::MAX as f64 {
                                self.pos = start;
                                return Err(self.err("exponent must be a nonnegative integer"));
                            }
                            Ok(FunctionExpr::Monomial(n as u32))
                        } else {
                            Ok(FunctionExpr::Monomial(1))
                        }
                    }
                    "i" => Ok(FunctionExpr::Constant(C64::new(0.0, 1.0))),
                    "compose" => {
                        self.expect(b'(')?;
                        let inner = self.expr()?;
                        self.ws();
                        self.expect(b';')?;
                        self.ws();
                        let kv = self.kv_list()?;
                        self.expect(b')')?;
                        let a = self.take(&kv, "a", start)?;
                        Ok(FunctionExpr::compose(inner, a))
                    }
                    _ => {
                        if !self.eat(b':') {
                            self.pos = start;
                            return Err(self.err("unknown identifier"));
                        }
                        self.atom(&name, start)
                    }
                }
            }
            _ => Err(self.err("unexpected character")),
        }
    }

    fn atom(&mut self, name: &str, start: usize) -> Result<FunctionExpr> {
        let built = match name {
            "poly" => Ok(FunctionExpr::Polynomial(CoefficientSeries::new(self.list()?))),
            "gap" => Ok(FunctionExpr::Gap(LacunaryCoefficients::new(self.list()?))),
            "blaschke" => make_atom(AtomKind::Blaschke { zeros: self.list()? }),
            "fa" => {
                let kv = self.kv_list()?;
                make_atom(AtomKind::Fa { a: self.take(&kv, "a", start)?, p: self.take_real(&kv, "p", start)? })
            }
            "ha" => {
                let kv = self.kv_list()?;
                make_atom(AtomKind::Ha { a: self.take(&kv, "a", start)? })
            }
            "fp" => {
                let kv = self.kv_list()?;
                let depth = self.take_real(&kv, "depth", start)?;
                if depth < 0.0 || depth.fract() != 0.0 {
                    self.pos = start;
                    return Err(self.err("depth must be a nonnegative integer"));
                }
                make_atom(AtomKind::Fp { p: self.take_real(&kv, "p", start)?, depth: depth as usize })
            }
            "log" => {
                let kv = self.kv_list()?;
                let one = C64::new(1.0, 0.0);
                make_atom(AtomKind::Log {
                    a: self.take(&kv, "a", start)?,
                    scale: kv.get("scale").copied().unwrap_or(one),
                    offset: kv.get("offset").copied().unwrap_or(one),
                })
            }
            "mobius" => {
                let kv = self.kv_list()?;
                make_atom(AtomKind::Mobius { a: self.take(&kv, "a", start)? })
            }
            _ => {
                self.pos = start;
                return Err(self.err(&format!("unknown atom '{name}'")));
            }
        };
        built.map_err(|e| Error::Parse {
            pos: start,
            token: name.to_string(),
            msg: e.to_string(),
        })
    }

    fn take(&mut self, kv: &BTreeMap<String, C64>, key: &str, start: usize) -> Result<C64> {
        kv.get(key).copied().ok_or_else(|| {
            self.pos = start;
            self.err(&format!("missing parameter '{key}'"))
        })
    }

    fn take_real(&mut self, kv: &BTreeMap<String, C64>, key: &str, start: usize) -> Result<f64> {
        let v = self.take(kv, key, start)?;
        if v.im != 0.0 {
            self.pos = start;
            return Err(self.err(&format!("parameter '{key}' must be real")));
        }
        Ok(v.re)
    }

    fn kv_list(&mut self) -> Result<BTreeMap<String, C64>> {
        let mut out = BTreeMap::new();
        loop {
            let key = self.ident();
            if key.is_empty() {
                return Err(self.err("expected parameter name"));
            }
            self.expect(b'=')?;
            let v = self.complex()?;
            out.insert(key, v);
            // Continue only if a comma is followed by `ident=`.
            let save = self.pos;
            if self.eat(b',') {
                let k2 = self.pos;
                let id = self.ident();
                if !id.is_empty() && self.peek() == Some(b'=') {
                    self.pos = k2;
                    continue;
                }
            }
            self.pos = save;
            return Ok(out);
        }
    }

    fn list(&mut self) -> Result<Vec<C64>> {
        self.expect(b'[')?;
        let mut out = vec![];
        self.ws();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            self.ws();
            out.push(self.complex()?);
            self.ws();
            if self.eat(b',') {
                continue;
            }
            self.expect(b']')?;
            return Ok(out);
        }
    }

    fn real(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let mut digits = 0;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            digits += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
                digits += 1;
            }
        }
        if digits == 0 {
            self.pos = start;
            return Err(self.err("expected number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'-' | b'+')) {
                self.pos += 1;
            }
            let mut ed = 0;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
                ed += 1;
            }
            if ed == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.err("malformed number")
        })
    }

    fn complex(&mut self) -> Result<C64> {
        let re = self.real()?;
        if self.eat(b'i') {
            return Ok(C64::new(0.0, re));
        }
        let save = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            let neg = self.peek() == Some(b'-');
            self.pos += 1;
            if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
                if let Ok(im) = self.real() {
                    if self.eat(b'i') {
                        return Ok(C64::new(re, if neg { -im } else { im }));
                    }
                }
            }
            self.pos = save;
        }
        Ok(C64::new(re, 0.0))
    }
}
