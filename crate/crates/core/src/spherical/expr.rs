//! Real expressions in `t` and `r` with exact symbolic derivatives.
//!
//! Grammar (usual precedence, `^` right-associative and binding tighter than
//! unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 't' | 'r' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func   := 'sin' | 'cos' | 'exp'
//! ```
//!
//! Exponents must be free of `t` and `r`.

use std::fmt;

use crate::error::{NcgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    R,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(NcgError::Expression(format!(
                "unexpected {:?} in '{src}'",
                p.tokens[p.pos]
            )));
        }
        Ok(e)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn eval(&self, t: f64, r: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::R) => r,
            Expr::Neg(a) => -a.eval(t, r),
            Expr::Add(a, b) => a.eval(t, r) + b.eval(t, r),
            Expr::Sub(a, b) => a.eval(t, r) - b.eval(t, r),
            Expr::Mul(a, b) => a.eval(t, r) * b.eval(t, r),
            Expr::Div(a, b) => a.eval(t, r) / b.eval(t, r),
            Expr::Pow(a, k) => a.eval(t, r).powf(*k),
            Expr::Sin(a) => a.eval(t, r).sin(),
            Expr::Cos(a) => a.eval(t, r).cos(),
            Expr::Exp(a) => a.eval(t, r).exp(),
        }
    }

    /// Value that must be finite.
    pub fn eval_finite(&self, t: f64, r: f64) -> Result<f64> {
        let v = self.eval(t, r);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NcgError::Expression(format!(
                "'{self}' is not finite at t = {t}, r = {r}"
            )))
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.depends_on(v)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        !self.depends_on(Var::T) && !self.depends_on(Var::R)
    }

    /// Exact partial derivative, with trivial constant folding.
    pub fn derivative(&self, v: Var) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(_) => Expr::Const(1.0),
            Expr::Neg(a) => neg(a.derivative(v)),
            Expr::Add(a, b) => add(a.derivative(v), b.derivative(v)),
            Expr::Sub(a, b) => sub(a.derivative(v), b.derivative(v)),
            Expr::Mul(a, b) => add(
                mul(a.derivative(v), (**b).clone()),
                mul((**a).clone(), b.derivative(v)),
            ),
            Expr::Div(a, b) => div(
                sub(
                    mul(a.derivative(v), (**b).clone()),
                    mul((**a).clone(), b.derivative(v)),
                ),
                Expr::Pow(b.clone(), 2.0),
            ),
            Expr::Pow(a, k) => mul(
                mul(Expr::Const(*k), Expr::Pow(a.clone(), k - 1.0)),
                a.derivative(v),
            ),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.derivative(v)),
            Expr::Cos(a) => neg(mul(Expr::Sin(a.clone()), a.derivative(v))),
            Expr::Exp(a) => mul(Expr::Exp(a.clone()), a.derivative(v)),
        }
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), _) if *x == 0.0 => b,
        (_, Expr::Const(y)) if *y == 0.0 => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (_, Expr::Const(y)) if *y == 0.0 => a,
        (Expr::Const(x), _) if *x == 0.0 => neg(b),
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), _) | (_, Expr::Const(x)) if *x == 0.0 => Expr::zero(),
        (Expr::Const(x), _) if *x == 1.0 => b,
        (_, Expr::Const(y)) if *y == 1.0 => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match &a {
        Expr::Const(x) if *x == 0.0 => Expr::zero(),
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn sin(a: Expr) -> Expr {
    Expr::Sin(Box::new(a))
}

pub fn cos(a: Expr) -> Expr {
    Expr::Cos(Box::new(a))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Var(Var::R) => write!(f, "r"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a} ^ {k})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| NcgError::Expression(format!("bad number '{text}'")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(NcgError::Expression(format!("unexpected character '{c}'")));
        }
    }
    if out.is_empty() {
        return Err(NcgError::Expression("empty expression".into()));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(NcgError::Expression(format!(
                "expected '{op}', found {:?}",
                self.peek()
            )))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_op('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_op('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat_op('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat_op('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let exponent = self.unary()?;
            if !exponent.is_constant() {
                return Err(NcgError::Expression(
                    "exponents may not depend on t or r".into(),
                ));
            }
            return Ok(Expr::Pow(Box::new(base), exponent.eval(0.0, 0.0)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "t" => Ok(Expr::Var(Var::T)),
                    "r" => Ok(Expr::Var(Var::R)),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "sin" | "cos" | "exp" => {
                        self.expect_op('(')?;
                        let arg = Box::new(self.expr()?);
                        self.expect_op(')')?;
                        Ok(match name.as_str() {
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            _ => Expr::Exp(arg),
                        })
                    }
                    other => Err(NcgError::Expression(format!(
                        "unknown identifier '{other}'"
                    ))),
                }
            }
            other => Err(NcgError::Expression(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn parses_and_evaluates() {
        let cases = [
            ("1 + 2 * 3", 7.0),
            ("-2^2", -4.0),
            ("2^3^2", 512.0),
            ("(1 - 4) / 2", -1.5),
            ("sin(pi / 2) + cos(0) + exp(0)", 3.0),
            ("1.5e1 - 5", 10.0),
            ("t * r", 6.0),
            ("r^-1", 1.0 / 3.0),
        ];
        for (src, v) in cases {
            assert!(close(Expr::parse(src).unwrap().eval(2.0, 3.0), v), "{src}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        for src in ["", "1 +", "foo(t)", "t^r", "(1", "2 $ 3", "sin t"] {
            assert!(
                matches!(Expr::parse(src), Err(NcgError::Expression(_))),
                "{src}"
            );
        }
    }

    #[test]
    fn derivative_examples() {
        let e = Expr::parse("t^2 * sin(r) + exp(-t*r) / r").unwrap();
        let (t, r): (f64, f64) = (0.7, 1.3);
        let dt = 2.0 * t * r.sin() - r * (-t * r).exp() / r;
        let dr = t * t * r.cos() + (-t * (-t * r).exp() * r - (-t * r).exp()) / (r * r);
        assert!(close(e.derivative(Var::T).eval(t, r), dt));
        assert!(close(e.derivative(Var::R).eval(t, r), dr));
        assert_eq!(
            Expr::parse("3 + pi").unwrap().derivative(Var::T),
            Expr::zero()
        );
    }

    proptest! {
        #[test]
        fn derivative_matches_finite_difference(
            a in -2.0f64..2.0, b in -2.0f64..2.0, t in -1.0f64..1.0, r in 0.5f64..2.0
        ) {
            let src = format!("({a}) * sin(({b}) * t + r^2) + cos(t) / r");
            let e = Expr::parse(&src).unwrap();
            let h = 1e-5;
            let fd_t = (e.eval(t + h, r) - e.eval(t - h, r)) / (2.0 * h);
            let fd_r = (e.eval(t, r + h) - e.eval(t, r - h)) / (2.0 * h);
            prop_assert!((e.derivative(Var::T).eval(t, r) - fd_t).abs() < 1e-7);
            prop_assert!((e.derivative(Var::R).eval(t, r) - fd_r).abs() < 1e-7);
        }
    }
}
