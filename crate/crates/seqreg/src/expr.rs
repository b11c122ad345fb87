//! Closed-form tail expressions in the index variable `p`.
//!
//! Grammar: `+ - * / ^`, postfix `!`, parentheses, numbers, `p`, and the functions
//! `exp`, `ln`, `log`, `sqrt`, `fact`. Expressions that avoid transcendental functions and use
//! integer exponents are evaluated exactly.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use seqreg_core::num::{int, parse_ext};
use seqreg_core::{ExtReal, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sqrt,
    Fact,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(Rational),
    Index,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

/// Largest factorial argument evaluated exactly.
const FACT_LIMIT: i64 = 5000;

impl Expr {
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        let mut parser = Parser {
            src: source.as_bytes(),
            pos: 0,
        };
        let root = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(Expr {
            root,
            source: source.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Whether evaluation stays in exact rational arithmetic.
    pub fn is_exact(&self) -> bool {
        exact_node(&self.root)
    }

    pub fn eval(&self, p: usize) -> ExtReal {
        if self.is_exact() {
            match eval_exact(&self.root, p) {
                Some(v) => ExtReal::Finite(v),
                None => ExtReal::PosInf,
            }
        } else {
            let v = eval_f64(&self.root, p);
            if v.is_nan() {
                ExtReal::PosInf
            } else {
                ExtReal::from_f64(v)
            }
        }
    }

    /// Float evaluation, `NaN` when undefined.
    pub fn eval_f64(&self, p: usize) -> f64 {
        eval_f64(&self.root, p)
    }
}

fn integer_literal(node: &Node) -> Option<i64> {
    match node {
        Node::Num(r) if r.is_integer() => r.to_integer().to_i64(),
        Node::Neg(inner) => integer_literal(inner).map(|v| -v),
        _ => None,
    }
}

fn exact_node(node: &Node) -> bool {
    match node {
        Node::Num(_) | Node::Index => true,
        Node::Neg(a) => exact_node(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            exact_node(a) && exact_node(b)
        }
        Node::Pow(a, b) => exact_node(a) && integer_literal(b).is_some(),
        Node::Call(Func::Fact, a) => exact_node(a),
        Node::Call(..) => false,
    }
}

/// `None` on division by zero or an out-of-range factorial.
fn eval_exact(node: &Node, p: usize) -> Option<Rational> {
    Some(match node {
        Node::Num(r) => r.clone(),
        Node::Index => int(p as i64),
        Node::Neg(a) => -eval_exact(a, p)?,
        Node::Add(a, b) => eval_exact(a, p)? + eval_exact(b, p)?,
        Node::Sub(a, b) => eval_exact(a, p)? - eval_exact(b, p)?,
        Node::Mul(a, b) => eval_exact(a, p)? * eval_exact(b, p)?,
        Node::Div(a, b) => {
            let d = eval_exact(b, p)?;
            if d.is_zero() {
                return None;
            }
            eval_exact(a, p)? / d
        }
        Node::Pow(a, b) => {
            let base = eval_exact(a, p)?;
            let e = i32::try_from(integer_literal(b)?).ok()?;
            if base.is_zero() && e < 0 {
                return None;
            }
            base.pow(e)
        }
        Node::Call(Func::Fact, a) => {
            let n = eval_exact(a, p)?;
            if !n.is_integer() || n.is_negative() {
                return None;
            }
            let n = n.to_integer().to_i64()?;
            if n > FACT_LIMIT {
                return None;
            }
            (2..=n).fold(Rational::one(), |acc, k| acc * int(k))
        }
        Node::Call(..) => return None,
    })
}

fn eval_f64(node: &Node, p: usize) -> f64 {
    match node {
        Node::Num(r) => seqreg_core::num::to_f64(r),
        Node::Index => p as f64,
        Node::Neg(a) => -eval_f64(a, p),
        Node::Add(a, b) => eval_f64(a, p) + eval_f64(b, p),
        Node::Sub(a, b) => eval_f64(a, p) - eval_f64(b, p),
        Node::Mul(a, b) => eval_f64(a, p) * eval_f64(b, p),
        Node::Div(a, b) => eval_f64(a, p) / eval_f64(b, p),
        Node::Pow(a, b) => eval_f64(a, p).powf(eval_f64(b, p)),
        Node::Call(f, a) => {
            let x = eval_f64(a, p);
            match f {
                Func::Exp => x.exp(),
                Func::Ln => x.ln(),
                Func::Sqrt => x.sqrt(),
                Func::Fact => {
                    if x < 0.0 {
                        f64::NAN
                    } else {
                        libm::exp(libm::lgamma(x + 1.0))
                    }
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.postfix()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Node, ExprError> {
        let mut node = self.atom()?;
        while self.eat(b'!') {
            node = Node::Call(Func::Fact, Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exponent_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match parse_ext(text) {
            Ok(ExtReal::Finite(r)) => Ok(Node::Num(r)),
            _ => Err(ExprError {
                position: start,
                message: format!("invalid number `{text}`"),
            }),
        }
    }

    fn word(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let func = match name {
            "p" => return Ok(Node::Index),
            "e" => return Ok(Node::Call(Func::Exp, Box::new(Node::Num(Rational::one())))),
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "fact" => Func::Fact,
            _ => {
                return Err(ExprError {
                    position: start,
                    message: format!("unknown name `{name}`"),
                })
            }
        };
        if !self.eat(b'(') {
            return Err(self.error("expected `(` after function name"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected `)`"));
        }
        Ok(Node::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use seqreg_core::num::ratio;

    #[test]
    fn exact_arithmetic() {
        let e = Expr::parse("2*p^2 - p/3 + 1").unwrap();
        assert!(e.is_exact());
        assert_eq!(e.eval(3), ExtReal::Finite(ratio(18, 1)));
        let f = Expr::parse("fact(p)^2").unwrap();
        assert_eq!(f.eval(4), ExtReal::from(576));
        assert_eq!(Expr::parse("p!").unwrap().eval(5), ExtReal::from(120));
        assert_eq!(Expr::parse("-p^2").unwrap().eval(3), ExtReal::from(-9));
        assert_eq!(Expr::parse("2^-2").unwrap().eval(0), ExtReal::ratio(1, 4));
    }

    #[test]
    fn inexact_arithmetic() {
        let e = Expr::parse("p*ln(p+1)").unwrap();
        assert!(!e.is_exact());
        assert!((e.eval(3).to_f64() - 3.0 * 4f64.ln()).abs() < 1e-15);
        assert!((Expr::parse("fact(0.5)").unwrap().eval_f64(0) - 0.886_226_925_452_758).abs() < 1e-12);
        assert!((Expr::parse("fact(20)").unwrap().eval_f64(0) - 2.432_902_008_176_64e18).abs() < 1e4);
        assert_eq!(Expr::parse("exp(p)^2").unwrap().eval(1000), ExtReal::PosInf);
    }

    #[test]
    fn division_by_zero_is_infinite() {
        assert_eq!(Expr::parse("1/p").unwrap().eval(0), ExtReal::PosInf);
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(Expr::parse("p +").unwrap_err().position, 3);
        assert!(Expr::parse("foo(p)").is_err());
        assert!(Expr::parse("(p").is_err());
        assert!(Expr::parse("p p").is_err());
        assert!(Expr::parse("1.2.3").is_err());
    }

    #[test]
    fn exponent_notation() {
        assert_eq!(Expr::parse("1e2*p").unwrap().eval(2), ExtReal::from(200));
        assert_eq!(Expr::parse("2.5e-1").unwrap().eval(0), ExtReal::ratio(1, 4));
    }
}
