//! Scalar fields on `R^{1,1}` written in a small expression language, with
//! exact first partial derivatives by forward-mode dual numbers.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)*        right associative
//! exponent:= '-'? integer
//! primary := number | 't' | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt | tanh | atan | csc
//! ```
//!
//! Exponents must be integer literals; a chain `e^a^b` folds to `e^(a·b)`
//! only through right association, i.e. `x^2^3 = x^8`. There is no `abs`:
//! every field must be differentiable where it is evaluated.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::minkowski::SpacetimePoint;
use crate::{Error, Result};

/// The coordinate a [`Expr::Var`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Tanh,
    Atan,
    Csc,
}

impl Func {
    const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Tanh,
        Func::Atan,
        Func::Csc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
            Func::Atan => "atan",
            Func::Csc => "csc",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Abstract syntax tree of a field expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        parse(src)
    }

    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn t() -> Self {
        Expr::Var(Var::T)
    }

    pub fn x() -> Self {
        Expr::Var(Var::X)
    }

    pub fn call(f: Func, arg: Expr) -> Self {
        Expr::Call(f, Box::new(arg))
    }

    pub fn pow(self, n: i32) -> Self {
        Expr::Pow(Box::new(self), n)
    }

    /// Value and both first partial derivatives at `p`.
    pub fn eval(&self, p: SpacetimePoint) -> Result<FieldEval> {
        eval_with_derivatives(self, p)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Pow(_, _) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(_, _) => 5,
        }
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::Bin($op, Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, BinOp::Add);
expr_binop!(Sub, sub, BinOp::Sub);
expr_binop!(Mul, mul, BinOp::Mul);
expr_binop!(Div, div, BinOp::Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var(Var::T) => f.write_str("t"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                write_child(f, inner, inner.precedence() < 3)
            }
            Expr::Bin(op, lhs, rhs) => {
                let p = op.precedence();
                write_child(f, lhs, lhs.precedence() < p)?;
                f.write_str(op.symbol())?;
                write_child(f, rhs, rhs.precedence() <= p)
            }
            Expr::Pow(base, n) => {
                write_child(f, base, base.precedence() <= 4)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

// --------------------------------------------------------------------------
// lexer / parser

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Int(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((start, tok));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start).map(|t| (start, t));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(Error::Syntax {
            offset: start,
            expected: "an expression",
            found: format!("`{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos > s
        };
        let mut pos = self.pos;
        let int_digits = digits(&mut pos);
        let mut integral = true;
        if pos < bytes.len() && bytes[pos] == b'.' {
            integral = false;
            pos += 1;
            let frac_digits = digits(&mut pos);
            if !int_digits && !frac_digits {
                return Err(Error::Syntax {
                    offset: start,
                    expected: "a number",
                    found: "`.`".to_string(),
                });
            }
        }
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            let mut look = pos + 1;
            if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                look += 1;
            }
            if digits(&mut look) {
                integral = false;
                pos = look;
            }
        }
        self.pos = pos;
        let text = &self.src[start..pos];
        let bad = || Error::Syntax {
            offset: start,
            expected: "a finite number",
            found: format!("`{text}`"),
        };
        if integral {
            if let Ok(v) = text.parse::<u64>() {
                return Ok(Tok::Int(v));
            }
        }
        let v: f64 = text.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(bad());
        }
        Ok(Tok::Num(v))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (offset, tok) = lexer.next()?;
        Ok(Self { lexer, tok, offset })
    }

    fn bump(&mut self) -> Result<Tok> {
        let (offset, tok) = self.lexer.next()?;
        self.offset = offset;
        Ok(core::mem::replace(&mut self.tok, tok))
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset,
            expected,
            found: self.tok.describe(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let n = self.exponent_chain()?;
        Ok(Expr::Pow(Box::new(base), n))
    }

    /// `exponent ('^' exponent)*`, folded right to left into one integer.
    fn exponent_chain(&mut self) -> Result<i32> {
        let at = self.offset;
        let negative = if self.tok == Tok::Minus {
            self.bump()?;
            true
        } else {
            false
        };
        let Tok::Int(v) = self.tok else {
            return self.unexpected("an integer exponent");
        };
        self.bump()?;
        let mut n = i64::try_from(v).unwrap_or(i64::MAX);
        if negative {
            n = -n;
        }
        if self.tok == Tok::Caret {
            self.bump()?;
            let rest = self.exponent_chain()? as i64;
            n = match u32::try_from(rest) {
                Ok(r) => n.checked_pow(r).unwrap_or(i64::MAX),
                Err(_) => {
                    return Err(Error::Syntax {
                        offset: at,
                        expected: "a non-negative integer exponent",
                        found: format!("exponent {rest}"),
                    })
                }
            };
        }
        i32::try_from(n).map_err(|_| Error::Syntax {
            offset: at,
            expected: "an exponent that fits in 32 bits",
            found: format!("{n}"),
        })
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::Int(v) => {
                self.bump()?;
                Ok(Expr::Num(v as f64))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset;
                self.bump()?;
                match name.as_str() {
                    "t" => return Ok(Expr::Var(Var::T)),
                    "x" => return Ok(Expr::Var(Var::X)),
                    "pi" => return Ok(Expr::Num(core::f64::consts::PI)),
                    _ => {}
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(Error::UnknownIdentifier { name, offset: at });
                };
                if self.tok != Tok::LParen {
                    return self.unexpected("`(`");
                }
                self.bump()?;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => self.unexpected("a number, variable, function or `(`"),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.tok != Tok::RParen {
            return self.unexpected("`)` or an operator");
        }
        self.bump()?;
        Ok(())
    }
}

/// Parse a field expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

// --------------------------------------------------------------------------
// dual numbers

/// A dual number with a two-component infinitesimal part `(∂_t, ∂_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub dt: f64,
    pub dx: f64,
}

impl Dual2 {
    pub const fn constant(v: f64) -> Self {
        Self { v, dt: 0.0, dx: 0.0 }
    }

    /// Chain rule for a scalar function with value `f` and derivative `df`
    /// at `self.v`.
    fn chain(self, f: f64, df: f64) -> Self {
        Self {
            v: f,
            dt: df * self.dt,
            dx: df * self.dx,
        }
    }

    fn is_finite(&self) -> bool {
        self.v.is_finite() && self.dt.is_finite() && self.dx.is_finite()
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            dt: self.dt + o.dt,
            dx: self.dx + o.dx,
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            dt: self.dt - o.dt,
            dx: self.dx - o.dx,
        }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            dt: self.dt * o.v + self.v * o.dt,
            dx: self.dx * o.v + self.v * o.dx,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.v;
        let q = self.v * inv;
        Self {
            v: q,
            dt: (self.dt - q * o.dt) * inv,
            dx: (self.dx - q * o.dx) * inv,
        }
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            dt: -self.dt,
            dx: -self.dx,
        }
    }
}

/// Value and first partial derivatives of a field at one event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEval {
    pub value: f64,
    pub d_dt: f64,
    pub d_dx: f64,
}

impl From<Dual2> for FieldEval {
    fn from(d: Dual2) -> Self {
        Self {
            value: d.v,
            d_dt: d.dt,
            d_dx: d.dx,
        }
    }
}

fn domain(e: &Expr, p: SpacetimePoint) -> Error {
    Error::Domain {
        subexpr: e.to_string(),
        at: p,
    }
}

fn eval_dual(e: &Expr, p: SpacetimePoint) -> Result<Dual2> {
    let out = match e {
        Expr::Num(v) => Dual2::constant(*v),
        Expr::Var(Var::T) => Dual2 { v: p.t, dt: 1.0, dx: 0.0 },
        Expr::Var(Var::X) => Dual2 { v: p.x, dt: 0.0, dx: 1.0 },
        Expr::Neg(a) => -eval_dual(a, p)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (eval_dual(a, p)?, eval_dual(b, p)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(domain(e, p));
                    }
                    a / b
                }
            }
        }
        Expr::Pow(base, n) => {
            let b = eval_dual(base, p)?;
            let n = *n;
            if n == 0 {
                Dual2::constant(1.0)
            } else {
                if n < 0 && b.v == 0.0 {
                    return Err(domain(e, p));
                }
                let f = libm::pow(b.v, n as f64);
                let df = n as f64 * libm::pow(b.v, (n - 1) as f64);
                b.chain(f, df)
            }
        }
        Expr::Call(func, arg) => {
            let a = eval_dual(arg, p)?;
            let v = a.v;
            match func {
                Func::Sin => a.chain(libm::sin(v), libm::cos(v)),
                Func::Cos => a.chain(libm::cos(v), -libm::sin(v)),
                Func::Tan => {
                    let c = libm::cos(v);
                    if c == 0.0 {
                        return Err(domain(e, p));
                    }
                    a.chain(libm::tan(v), 1.0 / (c * c))
                }
                Func::Exp => {
                    let ev = libm::exp(v);
                    a.chain(ev, ev)
                }
                Func::Log => {
                    if v <= 0.0 {
                        return Err(domain(e, p));
                    }
                    a.chain(libm::log(v), 1.0 / v)
                }
                Func::Sqrt => {
                    if v <= 0.0 {
                        return Err(domain(e, p));
                    }
                    let s = libm::sqrt(v);
                    a.chain(s, 0.5 / s)
                }
                Func::Tanh => {
                    let th = libm::tanh(v);
                    a.chain(th, 1.0 - th * th)
                }
                Func::Atan => a.chain(libm::atan(v), 1.0 / (1.0 + v * v)),
                Func::Csc => {
                    let s = libm::sin(v);
                    if s == 0.0 {
                        return Err(domain(e, p));
                    }
                    let csc = 1.0 / s;
                    a.chain(csc, -csc * libm::cos(v) * csc)
                }
            }
        }
    };
    if !out.is_finite() {
        return Err(domain(e, p));
    }
    Ok(out)
}

/// Value and exact first partials `(∂_t, ∂_x)` of `e` at `p`.
pub fn eval_with_derivatives(e: &Expr, p: SpacetimePoint) -> Result<FieldEval> {
    eval_dual(e, p).map(FieldEval::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, x).unwrap()
    }

    #[test]
    fn parses_with_precedence() {
        assert_eq!(parse("t + 2*x").unwrap(), Expr::t() + Expr::num(2.0) * Expr::x());
        assert_eq!(parse("-x^2").unwrap(), -(Expr::x().pow(2)));
        assert_eq!(parse("x^2^3").unwrap(), Expr::x().pow(8));
        assert_eq!(parse("t - x - 1").unwrap(), (Expr::t() - Expr::x()) - Expr::num(1.0));
        assert_eq!(parse("t / x * 2").unwrap(), (Expr::t() / Expr::x()) * Expr::num(2.0));
        assert_eq!(parse(" 2 *-t").unwrap(), Expr::num(2.0) * -Expr::t());
        assert_eq!(parse("x^-2").unwrap(), Expr::x().pow(-2));
        assert_eq!(parse("1.5e-3").unwrap(), Expr::num(1.5e-3));
        assert_eq!(
            parse("sin(t)*exp(-x^2)").unwrap(),
            Expr::call(Func::Sin, Expr::t()) * Expr::call(Func::Exp, -(Expr::x().pow(2)))
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("t + * x") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("sin t"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("(t + x"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("t x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x^2.5"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("x^t"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("t $ x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("1e999"), Err(Error::Syntax { offset: 0, .. })));
        assert_eq!(
            parse("abs(x)"),
            Err(Error::UnknownIdentifier {
                name: "abs".into(),
                offset: 0
            })
        );
    }

    #[test]
    fn evaluation_examples() {
        let e = parse("t").unwrap().eval(pt(3.0, 5.0)).unwrap();
        assert_eq!(e, FieldEval { value: 3.0, d_dt: 1.0, d_dx: 0.0 });
        let e = parse("t*x").unwrap().eval(pt(2.0, 7.0)).unwrap();
        assert_eq!(e, FieldEval { value: 14.0, d_dt: 7.0, d_dx: 2.0 });
    }

    fn central_difference(e: &Expr, p: SpacetimePoint) -> (f64, f64) {
        let h = 1e-5;
        let f = |t: f64, x: f64| e.eval(pt(t, x)).unwrap().value;
        (
            (f(p.t + h, p.x) - f(p.t - h, p.x)) / (2.0 * h),
            (f(p.t, p.x + h) - f(p.t, p.x - h)) / (2.0 * h),
        )
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-6 * b.abs() || (a - b).abs() <= 1e-8
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let e = parse("sin(t)*exp(-x^2)").unwrap();
        let p = pt(1.0, 0.5);
        let d = e.eval(p).unwrap();
        let (ft, fx) = central_difference(&e, p);
        assert!(close(d.d_dt, ft), "{} vs {}", d.d_dt, ft);
        assert!(close(d.d_dx, fx), "{} vs {}", d.d_dx, fx);
        // closed form
        assert_abs_diff_eq!(d.d_dt, libm::cos(1.0) * libm::exp(-0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(d.d_dx, -libm::sin(1.0) * libm::exp(-0.25), epsilon = 1e-15);

        for src in [
            "tan(t/3) + atan(x*t)",
            "log(2 + x^2) / sqrt(1 + t^2)",
            "csc(1 + 0.2*t) - tanh(x - t)^3",
            "cos(pi*x) * t^-1",
            "x^0 + 3",
        ] {
            let e = parse(src).unwrap();
            for p in [pt(0.3, -0.7), pt(1.2, 0.4), pt(-0.9, 0.9)] {
                let d = e.eval(p).unwrap();
                let (ft, fx) = central_difference(&e, p);
                assert!(close(d.d_dt, ft), "{src} {p:?}: {} vs {}", d.d_dt, ft);
                assert!(close(d.d_dx, fx), "{src} {p:?}: {} vs {}", d.d_dx, fx);
            }
        }
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        match parse("1 + log(x - 1)").unwrap().eval(pt(0.0, 0.5)) {
            Err(Error::Domain { subexpr, .. }) => assert_eq!(subexpr, "log(x - 1)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("sqrt(t)").unwrap().eval(pt(-1.0, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(parse("1/x").unwrap().eval(pt(1.0, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(parse("csc(t)").unwrap().eval(pt(0.0, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(parse("x^-1").unwrap().eval(pt(0.0, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(parse("exp(exp(t))").unwrap().eval(pt(10.0, 0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn printing_round_trips_tricky_shapes() {
        for src in [
            "t + 2*x",
            "sin(t)*exp(-x^2)",
            "(t - x) - (t - x)",
            "t - (x - 1)",
            "t/(x*2)",
            "-(t + x)",
            "--t",
            "(-t)^2",
            "(t^2)^3",
            "t*-x",
            "2 - -x",
            "x^-3",
            "pi*t",
            "0.000001 + 1e300*t",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::t()),
            Just(Expr::x()),
            (0.0..10.0f64).prop_map(Expr::num),
            (0u32..5).prop_map(|n| Expr::num(n as f64)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let funcs: Vec<Func> = Func::ALL.to_vec();
            prop_oneof![
                inner.clone().prop_map(|e| -e),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
                (inner.clone(), -3i32..4).prop_map(|(a, n)| a.pow(n)),
                (inner, proptest::sample::select(funcs)).prop_map(|(a, f)| Expr::call(f, a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), e);
        }

        #[test]
        fn evaluation_is_deterministic(e in arb_expr(), t in -2.0..2.0f64, x in -2.0..2.0f64) {
            let p = pt(t, x);
            let a = e.eval(p);
            let b = e.eval(p);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
                    prop_assert_eq!(a.d_dt.to_bits(), b.d_dt.to_bits());
                }
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                _ => prop_assert!(false),
            }
        }
    }
}
