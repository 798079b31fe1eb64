//! Expressions for trigonometric polynomials and point lists.
//!
//! Grammar (EBNF), lowest precedence first:
//!
//! ```text
//! expr    = term , { ( "+" | "-" ) , term } ;
//! term    = unary , { ( "*" | "/" ) , unary } ;
//! unary   = ( "-" | "+" ) , unary | power ;
//! power   = primary , [ "^" , integer ] ;
//! primary = number | "pi" | "x"
//!         | ( "cos" | "sin" ) , "(" , expr , ")"
//!         | "(" , expr , ")" ;
//! number  = digits , [ "." , [ digits ] ] , [ exponent ]
//!         | "." , digits , [ exponent ] ;
//! exponent = ( "e" | "E" ) , [ "+" | "-" ] , digits ;
//! integer = digits ;
//! ```
//!
//! So `-x^2` is `-(x^2)` and `2*cos(x)^2` is `2*(cos(x)^2)`. Whitespace is
//! free between tokens.
//!
//! Lowering to a [`TrigPoly`] expands powers by repeated multiplication and
//! phase shifts by angle addition. A trigonometric argument must reduce to
//! `k*x + c` with integer `k`; division is only by nonzero constants; a bare
//! `x` outside a trigonometric argument is rejected since `x` itself is not a
//! function on the circle.
//!
//! Point lists for divisors are `θ:m, θ:m, …` where each `θ` is a constant
//! expression such as `3*pi/2` and `m` is a positive integer.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::divisor::{CirclePoint, Divisor};
use crate::trigpoly::TrigPoly;

/// Deepest nesting accepted, to keep recursion bounded on hostile input.
pub const MAX_DEPTH: usize = 200;
/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Largest harmonic a lowered polynomial may reach.
pub const MAX_HARMONIC: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unsupported construct at position {position}: {message}")]
    Unsupported { position: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::Unsupported { position, .. } => *position,
        }
    }

    fn syntax(position: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { position, message: message.into() }
    }

    fn unsupported(position: usize, message: impl Into<String>) -> Self {
        ParseError::Unsupported { position, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Pi,
    X,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

/// A parsed expression; `position` is the byte offset where it starts.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub position: usize,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(v) => write!(f, "{v}"),
            ExprKind::Pi => write!(f, "pi"),
            ExprKind::X => write!(f, "x"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
            ExprKind::Pow(e, n) => write!(f, "{e}^{n}"),
            ExprKind::Call(func, e) => {
                let name = match func {
                    Func::Cos => "cos",
                    Func::Sin => "sin",
                };
                write!(f, "{name}({e})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Number(f64),
    Ident(Ident),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ident {
    Pi,
    X,
    Cos,
    Sin,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn skip_space(&mut self) {
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Next token and its start offset.
    fn next(&mut self) -> Result<(Token, usize), ParseError> {
        self.skip_space();
        let start = self.pos;
        let Some(&c) = self.bytes().get(self.pos) else {
            return Ok((Token::End, start));
        };
        let single = match c {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start).map(|v| (Token::Number(v), start));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let ident = match &self.src[start..self.pos] {
                "pi" => Ident::Pi,
                "x" => Ident::X,
                "cos" => Ident::Cos,
                "sin" => Ident::Sin,
                other => {
                    return Err(ParseError::syntax(start, format!("unknown identifier `{other}`")));
                }
            };
            return Ok((Token::Ident(ident), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError::syntax(start, format!("unexpected character `{ch}`")))
    }

    fn number(&mut self, start: usize) -> Result<f64, ParseError> {
        let int = self.digits();
        let mut frac = 0;
        if self.bytes().get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = self.digits();
        }
        if int == 0 && frac == 0 {
            return Err(ParseError::syntax(start, "malformed number"));
        }
        if matches!(self.bytes().get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.bytes().get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return Err(ParseError::syntax(mark, "exponent without digits"));
            }
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text
            .parse()
            .map_err(|_| ParseError::syntax(start, format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(ParseError::syntax(start, format!("number `{text}` is out of range")));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    token: Token,
    token_pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (token, token_pos) = lexer.next()?;
        Ok(Parser { lexer, token, token_pos, depth: 0 })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (t, p) = self.lexer.next()?;
        self.token = t;
        self.token_pos = p;
        Ok(())
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<(), ParseError> {
        if self.token != t {
            return Err(ParseError::syntax(self.token_pos, format!("expected {what}")));
        }
        self.bump()
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::syntax(self.token_pos, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.descend()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.token {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump()?;
            let rhs = self.term()?;
            let position = lhs.position;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), position };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.token {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => break,
            };
            self.bump()?;
            let rhs = self.unary()?;
            let position = lhs.position;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), position };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let position = self.token_pos;
        match self.token {
            Token::Minus | Token::Plus => {
                let negate = self.token == Token::Minus;
                self.bump()?;
                self.descend()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(if negate { Expr { kind: ExprKind::Neg(Box::new(inner)), position } } else { inner })
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.token != Token::Caret {
            return Ok(base);
        }
        self.bump()?;
        let at = self.token_pos;
        let Token::Number(v) = self.token else {
            return Err(ParseError::syntax(at, "expected a nonnegative integer exponent"));
        };
        if v.fract() != 0.0 || v < 0.0 {
            return Err(ParseError::unsupported(at, format!("exponent {v} is not a nonnegative integer")));
        }
        if v > MAX_EXPONENT as f64 {
            return Err(ParseError::unsupported(at, format!("exponent {v} exceeds {MAX_EXPONENT}")));
        }
        self.bump()?;
        let position = base.position;
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), v as u32), position })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let position = self.token_pos;
        let kind = match self.token {
            Token::Number(v) => {
                self.bump()?;
                ExprKind::Number(v)
            }
            Token::Ident(Ident::Pi) => {
                self.bump()?;
                ExprKind::Pi
            }
            Token::Ident(Ident::X) => {
                self.bump()?;
                ExprKind::X
            }
            Token::Ident(name @ (Ident::Cos | Ident::Sin)) => {
                self.bump()?;
                self.expect(Token::LParen, "`(` after function name")?;
                let arg = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                let func = if name == Ident::Cos { Func::Cos } else { Func::Sin };
                ExprKind::Call(func, Box::new(arg))
            }
            Token::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                return Ok(Expr { position, ..inner });
            }
            Token::End => return Err(ParseError::syntax(position, "unexpected end of input")),
            _ => return Err(ParseError::syntax(position, "expected a number, `x`, `pi`, a function or `(`")),
        };
        Ok(Expr { kind, position })
    }
}

/// Parses an expression without lowering it.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.token != Token::End {
        return Err(ParseError::syntax(p.token_pos, "unexpected trailing input"));
    }
    Ok(e)
}

/// `k*x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Affine {
    k: f64,
    c: f64,
}

impl Affine {
    fn constant(c: f64) -> Self {
        Affine { k: 0.0, c }
    }
}

/// Lowers an expression appearing inside `cos(…)` or `sin(…)`.
fn lower_affine(e: &Expr) -> Result<Affine, ParseError> {
    let at = e.position;
    Ok(match &e.kind {
        ExprKind::Number(v) => Affine::constant(*v),
        ExprKind::Pi => Affine::constant(PI),
        ExprKind::X => Affine { k: 1.0, c: 0.0 },
        ExprKind::Neg(inner) => {
            let a = lower_affine(inner)?;
            Affine { k: -a.k, c: -a.c }
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let (a, b) = (lower_affine(lhs)?, lower_affine(rhs)?);
            match op {
                BinOp::Add => Affine { k: a.k + b.k, c: a.c + b.c },
                BinOp::Sub => Affine { k: a.k - b.k, c: a.c - b.c },
                BinOp::Mul if a.k == 0.0 => Affine { k: a.c * b.k, c: a.c * b.c },
                BinOp::Mul if b.k == 0.0 => Affine { k: a.k * b.c, c: a.c * b.c },
                BinOp::Mul => {
                    return Err(ParseError::unsupported(at, "argument is not linear in x"));
                }
                BinOp::Div => {
                    if b.k != 0.0 {
                        return Err(ParseError::unsupported(rhs.position, "division by a non-constant"));
                    }
                    if b.c == 0.0 {
                        return Err(ParseError::unsupported(rhs.position, "division by zero"));
                    }
                    Affine { k: a.k / b.c, c: a.c / b.c }
                }
            }
        }
        ExprKind::Pow(base, n) => {
            let a = lower_affine(base)?;
            match (a.k == 0.0, *n) {
                (true, n) => Affine::constant(a.c.powi(n as i32)),
                (false, 0) => Affine::constant(1.0),
                (false, 1) => a,
                (false, _) => {
                    return Err(ParseError::unsupported(at, "argument is not linear in x"));
                }
            }
        }
        ExprKind::Call(..) => {
            let t = lower(e)?;
            if t.degree() != 0 {
                return Err(ParseError::unsupported(at, "argument is not linear in x"));
            }
            Affine::constant(t.cos_coeff(0))
        }
    })
}

/// `f(kx + c)` for integer `k`, expanded by angle addition.
fn trig_of_affine(func: Func, a: Affine, at: usize) -> Result<TrigPoly, ParseError> {
    if !a.k.is_finite() || !a.c.is_finite() {
        return Err(ParseError::unsupported(at, "argument is not finite"));
    }
    let k = a.k.round();
    if (a.k - k).abs() > 1e-9 * a.k.abs().max(1.0) {
        return Err(ParseError::unsupported(at, format!("harmonic {} is not an integer", a.k)));
    }
    if k.abs() > MAX_HARMONIC as f64 {
        return Err(ParseError::unsupported(at, format!("harmonic {k} exceeds {MAX_HARMONIC}")));
    }
    // f(−|k|x + c) = ±f(|k|x − c): cos is even, sin is odd
    let (n, c, sign) = if k < 0.0 {
        (-k as usize, -a.c, if func == Func::Sin { -1.0 } else { 1.0 })
    } else {
        (k as usize, a.c, 1.0)
    };
    let (sc, cc) = c.sin_cos();
    let poly = if n == 0 {
        TrigPoly::constant(match func {
            Func::Cos => cc,
            Func::Sin => sc,
        })
    } else {
        match func {
            // cos(nx + c) = cos c·cos nx − sin c·sin nx
            Func::Cos => TrigPoly::harmonic(n, cc, -sc),
            // sin(nx + c) = sin c·cos nx + cos c·sin nx
            Func::Sin => TrigPoly::harmonic(n, sc, cc),
        }
    };
    Ok(poly.scale(sign))
}

fn check_size(t: TrigPoly, at: usize) -> Result<TrigPoly, ParseError> {
    if t.degree() > MAX_HARMONIC {
        return Err(ParseError::unsupported(at, format!("result exceeds harmonic {MAX_HARMONIC}")));
    }
    if !t.cos_coeffs().iter().chain(t.sin_coeffs()).all(|c| c.is_finite()) {
        return Err(ParseError::unsupported(at, "coefficients overflow"));
    }
    Ok(t)
}

/// Lowers a parsed expression to a trigonometric polynomial.
pub fn lower(e: &Expr) -> Result<TrigPoly, ParseError> {
    let at = e.position;
    let t = match &e.kind {
        ExprKind::Number(v) => TrigPoly::constant(*v),
        ExprKind::Pi => TrigPoly::constant(PI),
        ExprKind::X => {
            return Err(ParseError::unsupported(
                at,
                "`x` may only appear inside cos(…) or sin(…)",
            ));
        }
        ExprKind::Neg(inner) => lower(inner)?.scale(-1.0),
        ExprKind::Binary(op, lhs, rhs) => {
            let a = lower(lhs)?;
            match op {
                BinOp::Add => a.add(&lower(rhs)?),
                BinOp::Sub => a.sub(&lower(rhs)?),
                BinOp::Mul => {
                    let b = lower(rhs)?;
                    if a.degree() + b.degree() > MAX_HARMONIC {
                        return Err(ParseError::unsupported(at, format!("result exceeds harmonic {MAX_HARMONIC}")));
                    }
                    a.multiply(&b)
                }
                BinOp::Div => {
                    let b = lower(rhs).map_err(|err| match err {
                        ParseError::Unsupported { .. } => {
                            ParseError::unsupported(rhs.position, "division by a non-constant")
                        }
                        other => other,
                    })?;
                    if b.degree() != 0 {
                        return Err(ParseError::unsupported(rhs.position, "division by a non-constant"));
                    }
                    let d = b.cos_coeff(0);
                    if d == 0.0 {
                        return Err(ParseError::unsupported(rhs.position, "division by zero"));
                    }
                    a.scale(1.0 / d)
                }
            }
        }
        ExprKind::Pow(base, n) => {
            let b = lower(base)?;
            if b.degree() * *n as usize > MAX_HARMONIC {
                return Err(ParseError::unsupported(at, format!("result exceeds harmonic {MAX_HARMONIC}")));
            }
            b.pow(*n)
        }
        ExprKind::Call(func, arg) => trig_of_affine(*func, lower_affine(arg)?, at)?,
    };
    check_size(t, at)
}

/// Parses and lowers in one step.
pub fn parse_trigpoly(text: &str) -> Result<TrigPoly, ParseError> {
    lower(&parse(text)?)
}

/// Parses a constant expression such as `3*pi/2`.
pub fn parse_constant(text: &str) -> Result<f64, ParseError> {
    let e = parse(text)?;
    let t = lower(&e).map_err(|err| match err {
        ParseError::Unsupported { position, message } if message.contains("`x`") => {
            ParseError::unsupported(position, "expected a constant")
        }
        other => other,
    })?;
    if t.degree() != 0 {
        return Err(ParseError::unsupported(e.position, "expected a constant"));
    }
    Ok(t.cos_coeff(0))
}

/// Parses `θ:m, θ:m, …` into a divisor. An empty or all-blank list is the
/// empty divisor. Positions in errors are byte offsets into `text`.
pub fn parse_points(text: &str) -> Result<Divisor, ParseError> {
    if text.trim().is_empty() {
        return Ok(Divisor::empty());
    }
    let mut entries = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let shift = |e: ParseError| match e {
            ParseError::Syntax { position, message } => ParseError::syntax(position + offset, message),
            ParseError::Unsupported { position, message } => ParseError::unsupported(position + offset, message),
        };
        let Some(colon) = item.rfind(':') else {
            let lead = item.len() - item.trim_start().len();
            return Err(ParseError::syntax(offset + lead, "expected `angle:multiplicity`"));
        };
        let (angle, mult) = (&item[..colon], &item[colon + 1..]);
        if angle.trim().is_empty() {
            return Err(ParseError::syntax(offset, "missing angle"));
        }
        let theta = parse_constant(angle).map_err(shift)?;
        let mult_at = offset + colon + 1 + (mult.len() - mult.trim_start().len());
        let m: u32 = mult
            .trim()
            .parse()
            .map_err(|_| ParseError::syntax(mult_at, "multiplicity must be a positive integer"))?;
        if m == 0 {
            return Err(ParseError::syntax(mult_at, "multiplicity must be a positive integer"));
        }
        entries.push((CirclePoint::new(theta), m));
        offset += item.len() + 1;
    }
    Ok(Divisor::new(entries))
}
