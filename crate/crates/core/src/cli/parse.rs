use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{MultiPoly, Q};

/// Parse failure with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Polynomial or nested bracketed list of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Poly(MultiPoly),
    List(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

/// Recursive-descent parser over one line of text.
///
/// ```text
/// value  := '[' value (',' value)* ']' | expr
/// expr   := term (('+' | '-') term)*
/// term   := unary ('*' unary)*
/// unary  := '-' unary | power
/// power  := atom ('^' integer)?
/// atom   := integer ('/' integer)? | 'x' index | '(' expr ')'
/// ```
pub struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    n: usize,
    tok: Tok,
    tok_col: usize,
}

impl Parser {
    /// `col0` is the column of the first character of `src` in its line.
    pub fn new(src: &str, n: usize, line: usize, col0: usize) -> Result<Self, ParseError> {
        let mut p = Parser { chars: src.chars().collect(), pos: 0, line, col0, n, tok: Tok::End, tok_col: col0 };
        p.bump()?;
        Ok(p)
    }

    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.line, col, msg))
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.tok_col = self.col0 + self.pos;
        let Some(&c) = self.chars.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        self.pos += 1;
        self.tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '0'..='9' => {
                let start = self.pos - 1;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                Tok::Num(s.parse().expect("digits"))
            }
            'x' => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let i: usize = match s.parse() {
                    Ok(i) => i,
                    Err(_) => return self.err(self.tok_col, "expected variable index after `x`"),
                };
                if i == 0 || i > self.n {
                    return self.err(self.tok_col, format!("unknown variable x{i} (dimension {})", self.n));
                }
                Tok::Var(i - 1)
            }
            other => return self.err(self.tok_col, format!("unexpected character `{other}`")),
        };
        Ok(())
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok != t {
            return self.err(self.tok_col, format!("expected {what}"));
        }
        self.bump()
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.tok {
            Tok::End => Ok(()),
            Tok::RParen => self.err(self.tok_col, "unbalanced `)`"),
            _ => self.err(self.tok_col, "unexpected trailing input"),
        }
    }

    pub fn value(&mut self) -> Result<Value, ParseError> {
        if self.tok != Tok::LBracket {
            return Ok(Value::Poly(self.expr()?));
        }
        self.bump()?;
        let mut items = vec![self.value()?];
        while self.tok == Tok::Comma {
            self.bump()?;
            items.push(self.value()?);
        }
        self.expect(Tok::RBracket, "`,` or `]`")?;
        Ok(Value::List(items))
    }

    pub fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.bump()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.tok {
                Tok::Star => {
                    self.bump()?;
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => return self.err(self.tok_col, "division is only allowed inside rational literals"),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let col = self.tok_col;
        let Tok::Num(e) = self.tok.clone() else {
            return self.err(col, "expected a non-negative integer exponent");
        };
        let e: u32 = match e.try_into() {
            Ok(e) => e,
            Err(_) => return self.err(col, "exponent too large"),
        };
        self.bump()?;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let col = self.tok_col;
        match self.tok.clone() {
            Tok::Num(num) => {
                self.bump()?;
                let mut c = Q::from_integer(num);
                if self.tok == Tok::Slash {
                    self.bump()?;
                    let dcol = self.tok_col;
                    let Tok::Num(den) = self.tok.clone() else {
                        return self.err(dcol, "malformed rational: expected denominator");
                    };
                    if den.is_zero() {
                        return self.err(dcol, "malformed rational: zero denominator");
                    }
                    self.bump()?;
                    c /= Q::from_integer(den);
                }
                Ok(MultiPoly::constant(self.n, c))
            }
            Tok::Var(i) => {
                self.bump()?;
                Ok(MultiPoly::var(self.n, i))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.err(col, "unbalanced `(`");
                }
                self.bump()?;
                Ok(e)
            }
            Tok::RParen => self.err(col, "unbalanced `)`"),
            Tok::End => self.err(col, "unexpected end of input"),
            _ => self.err(col, "expected a number, variable or `(`"),
        }
    }
}

/// Parses a polynomial in `x1..xn`; `#` starts a comment.
pub fn parse_polynomial(text: &str, n: usize) -> Result<MultiPoly, ParseError> {
    parse_poly_at(strip_comment(text), n, 1, 1)
}

pub(crate) fn parse_poly_at(text: &str, n: usize, line: usize, col: usize) -> Result<MultiPoly, ParseError> {
    let mut p = Parser::new(text, n, line, col)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub(crate) fn parse_value_at(text: &str, n: usize, line: usize, col: usize) -> Result<Value, ParseError> {
    let mut p = Parser::new(text, n, line, col)?;
    let v = p.value()?;
    p.finish()?;
    Ok(v)
}

/// Rational literal `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str, line: usize, col: usize) -> Result<Q, ParseError> {
    crate::exact::parse_q(text).ok_or_else(|| ParseError::new(line, col, format!("malformed rational `{text}`")))
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
