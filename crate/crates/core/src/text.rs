//! Byte cursor shared by the scalar and polynomial parsers.

use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    /// `base` is added to reported positions so nested parsers report
    /// offsets into the outer text.
    pub(crate) fn new(src: &'a str, base: usize) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            base,
        }
    }

    pub(crate) fn pos(&self) -> usize {
        self.base + self.pos
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    /// Decimal digits as a string slice (leading whitespace skipped).
    pub(crate) fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    /// A natural number bounded by `limit`; larger values are reported with `overflow`.
    pub(crate) fn nat(&mut self, limit: u64, overflow: Error) -> Result<u64> {
        let at = self.pos();
        let Some(ds) = self.digits() else {
            return Err(Error::Syntax {
                pos: at,
                msg: "expected a number".into(),
            });
        };
        let mut v: u64 = 0;
        for d in ds.bytes() {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
                .ok_or_else(|| overflow.clone())?;
        }
        if v > limit {
            return Err(overflow);
        }
        Ok(v)
    }

    /// A natural number reduced modulo `m` (arbitrarily long input).
    pub(crate) fn nat_mod(&mut self, m: u64) -> Result<u64> {
        let at = self.pos();
        let Some(ds) = self.digits() else {
            return Err(Error::Syntax {
                pos: at,
                msg: "expected a number".into(),
            });
        };
        let mut v: u64 = 0;
        for d in ds.bytes() {
            v = ((u128::from(v) * 10 + u128::from(d - b'0')) % u128::from(m)) as u64;
        }
        Ok(v)
    }

    pub(crate) fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return None,
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()
    }

    /// Text up to the matching close paren; the cursor is left after it.
    pub(crate) fn parenthesized(&mut self) -> Result<(&'a str, usize)> {
        if !self.eat(b'(') {
            return self.error("expected `(`");
        }
        let start = self.pos;
        let mut depth = 1usize;
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                        self.pos += 1;
                        return Ok((inner, self.base + start));
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.error("unbalanced parenthesis")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
        _ => return false,
    }
    bytes.all(|c| c.is_ascii_alphanumeric() || c == b'_')
}
