//! Parser for the polynomial string grammar used in module files and on the
//! command line: rational coefficients, variables `x1..xm` and `t1..td`,
//! operators `+ - * ^`, parenthesized subexpressions, and no implicit
//! multiplication. Errors carry 1-based column numbers.

use crate::error::{Error, Result};
use crate::ring::{Coeff, Polynomial, RingSig};

pub fn parse_polynomial(input: &str, sig: RingSig) -> Result<Polynomial> {
    let mut p = Parser { chars: input.char_indices().peekable(), input, sig };
    let poly = p.expr()?;
    p.skip_ws();
    if let Some((i, c)) = p.chars.peek().copied() {
        return Err(p.err(i, format!("unexpected `{}`", c)));
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    input: &'a str,
    sig: RingSig,
}

impl<'a> Parser<'a> {
    fn err(&self, byte: usize, msg: String) -> Error {
        let col = self.input[..byte].chars().count() + 1;
        Error::Parse { col, msg }
    }

    fn err_eof(&self, msg: &str) -> Error {
        let col = self.input.chars().count() + 1;
        Error::Parse { col, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut negate = false;
        if let Some((_, '-')) = self.chars.peek() {
            self.chars.next();
            negate = true;
        } else if let Some((_, '+')) = self.chars.peek() {
            self.chars.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                Some((_, '+')) => {
                    self.chars.next();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some((_, '-')) => {
                    self.chars.next();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                Some((_, '*')) => {
                    self.chars.next();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some((i, c)) if c.is_ascii_alphanumeric() || c == '(' => {
                    return Err(self.err(i, "implicit multiplication is not allowed; use `*`".into()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        self.skip_ws();
        if let Some((_, '^')) = self.chars.peek() {
            self.chars.next();
            self.skip_ws();
            let (pos, n) = self.integer()?;
            if n < 0 {
                return Err(self.err(pos, "negative exponents are not allowed".into()));
            }
            let mut acc = Polynomial::one(self.sig);
            for _ in 0..n {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        match self.chars.peek().copied() {
            None => Err(self.err_eof("expected a coefficient, variable, or `(`")),
            Some((_, '(')) => {
                self.chars.next();
                let inner = self.expr()?;
                self.skip_ws();
                match self.chars.next() {
                    Some((_, ')')) => Ok(inner),
                    Some((i, c)) => Err(self.err(i, format!("expected `)`, found `{}`", c))),
                    None => Err(self.err_eof("unclosed `(`")),
                }
            }
            Some((_, '-')) => {
                self.chars.next();
                let inner = self.factor()?;
                Ok(-&inner)
            }
            Some((i, c)) if c == 'x' || c == 't' => {
                self.chars.next();
                let (_, idx) = self.integer().map_err(|_| {
                    self.err(i, format!("variable `{}` must carry an index, e.g. `{}1`", c, c))
                })?;
                let count = if c == 'x' { self.sig.base_vars } else { self.sig.fiber_vars };
                if idx < 1 || idx as usize > count {
                    return Err(self.err(
                        i,
                        format!("variable `{}{}` out of range; the ring has {} `{}` variables", c, idx, count, c),
                    ));
                }
                let j = idx as usize - 1;
                Ok(if c == 'x' {
                    Polynomial::x_var(self.sig, j)
                } else {
                    Polynomial::t_var(self.sig, j)
                })
            }
            Some((_, c)) if c.is_ascii_digit() => {
                let (_, numer) = self.integer()?;
                self.skip_ws();
                if let Some((_, '/')) = self.chars.peek() {
                    self.chars.next();
                    self.skip_ws();
                    let (dpos, denom) = self.integer()?;
                    if denom == 0 {
                        return Err(self.err(dpos, "zero denominator".into()));
                    }
                    return Ok(Polynomial::constant(
                        self.sig,
                        Coeff::new(numer.into(), denom.into()),
                    ));
                }
                Ok(Polynomial::constant(self.sig, Coeff::from_integer(numer.into())))
            }
            Some((i, c)) => Err(self.err(i, format!("unexpected `{}`", c))),
        }
    }

    fn integer(&mut self) -> Result<(usize, i64)> {
        self.skip_ws();
        let start = match self.chars.peek().copied() {
            Some((i, c)) if c.is_ascii_digit() || c == '-' => i,
            Some((i, c)) => return Err(self.err(i, format!("expected an integer, found `{}`", c))),
            None => return Err(self.err_eof("expected an integer")),
        };
        let mut digits = String::new();
        if let Some((_, '-')) = self.chars.peek() {
            digits.push('-');
            self.chars.next();
        }
        let mut any = false;
        while let Some((_, c)) = self.chars.peek().copied() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.chars.next();
                any = true;
            } else {
                break;
            }
        }
        if !any {
            return Err(self.err(start, "expected digits".into()));
        }
        digits
            .parse::<i64>()
            .map(|n| (start, n))
            .map_err(|_| self.err(start, "integer out of range".into()))
    }
}

/// Render a polynomial in the same grammar; parse(render(p)) == p.
pub fn render_polynomial(p: &Polynomial) -> String {
    p.to_string()
}
