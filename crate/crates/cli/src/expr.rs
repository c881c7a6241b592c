//! Numeric arguments: plain numbers, multiples of `pi`, and simple products
//! or quotients such as `3pi/8` or `50*2pi`. Lists are comma-separated;
//! `start:stop:count` expands to `count` evenly spaced values.

use std::f64::consts::PI;

use crate::error::CliError;

pub fn parse_value(text: &str) -> Result<f64, CliError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.sum().map_err(|reason| bad(text, reason))?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(bad(text, "unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(bad(text, "value is not finite"));
    }
    Ok(v)
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(parse_value(v)?),
            [start, stop, count] => {
                let (a, b) = (parse_value(start)?, parse_value(stop)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| bad(item, "range count must be a positive integer"))?;
                match n {
                    0 => return Err(bad(item, "range count must be a positive integer")),
                    1 => out.push(a),
                    _ => out.extend((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64)),
                }
            }
            _ => return Err(bad(item, "expected a value or start:stop:count")),
        }
    }
    Ok(out)
}

fn bad(text: &str, reason: &str) -> CliError {
    CliError::Usage(format!("cannot parse `{text}`: {reason}"))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type Parse = Result<f64, &'static str>;

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Parse {
        let mut v = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if op == b'+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> Parse {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    v *= self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    v /= self.factor()?;
                }
                // juxtaposition: `2pi`, `3(pi)`
                Some(b'p' | b'(') => v *= self.factor()?,
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Parse {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err("unbalanced parenthesis");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                if self.src[self.pos..].starts_with(b"pi") {
                    self.pos += 2;
                    Ok(PI)
                } else {
                    Err("unknown symbol")
                }
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => self.number(),
            Some(_) => Err("unexpected character"),
            None => Err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Parse {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.src.get(p.pos).is_some_and(|b| b.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let before = self.pos;
            digits(self);
            if self.pos == before {
                self.pos = save;
            }
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or("malformed number")
    }
}
