//! Closed-form weight expressions.
//!
//! Grammar (a flat, diff-friendly language for `--weight`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := number | 'x' | 'y' | 'r2' | 'fs'
//!         | ('sin'|'cos'|'exp'|'log'|'sqrt') '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! `x`, `y` are the chart coordinates, `r2 = x² + y²`, and `fs` is the
//! reference potential `½·log(1 + r2)`.  Expressions are evaluated on
//! second-order forward-mode duals, so Laplacians used by the Bergman
//! experiments are *analytic*, not finite differences.

use feklab::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Value with first and second derivatives in `(x, y)`.
#[derive(Clone, Copy, Debug)]
pub struct Dual2 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Dual2 {
    pub fn constant(v: f64) -> Self {
        Dual2 {
            v,
            dx: 0.0,
            dy: 0.0,
            dxx: 0.0,
            dxy: 0.0,
            dyy: 0.0,
        }
    }

    pub fn var_x(v: f64) -> Self {
        Dual2 {
            v,
            dx: 1.0,
            ..Dual2::constant(0.0)
        }
    }

    pub fn var_y(v: f64) -> Self {
        Dual2 {
            v,
            dy: 1.0,
            ..Dual2::constant(0.0)
        }
    }

    pub fn laplacian(&self) -> f64 {
        self.dxx + self.dyy
    }

    fn add(self, o: Dual2) -> Dual2 {
        Dual2 {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }

    fn neg(self) -> Dual2 {
        Dual2 {
            v: -self.v,
            dx: -self.dx,
            dy: -self.dy,
            dxx: -self.dxx,
            dxy: -self.dxy,
            dyy: -self.dyy,
        }
    }

    fn mul(self, o: Dual2) -> Dual2 {
        Dual2 {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            dyy: self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        }
    }

    /// Chain rule through a scalar function with `f, f', f''` at `self.v`.
    fn compose(self, f: f64, f1: f64, f2: f64) -> Dual2 {
        Dual2 {
            v: f,
            dx: f1 * self.dx,
            dy: f1 * self.dy,
            dxx: f2 * self.dx * self.dx + f1 * self.dxx,
            dxy: f2 * self.dx * self.dy + f1 * self.dxy,
            dyy: f2 * self.dy * self.dy + f1 * self.dyy,
        }
    }

    fn recip(self) -> Dual2 {
        let iv = 1.0 / self.v;
        self.compose(iv, -iv * iv, 2.0 * iv * iv * iv)
    }
}

#[derive(Clone, Debug)]
enum Node {
    Num(f64),
    X,
    Y,
    R2,
    Fs,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, i32),
    Sin(Box<Node>),
    Cos(Box<Node>),
    Exp(Box<Node>),
    Log(Box<Node>),
    Sqrt(Box<Node>),
}

impl Node {
    fn eval(&self, x: Dual2, y: Dual2) -> Dual2 {
        match self {
            Node::Num(c) => Dual2::constant(*c),
            Node::X => x,
            Node::Y => y,
            Node::R2 => x.mul(x).add(y.mul(y)),
            Node::Fs => {
                let r2 = x.mul(x).add(y.mul(y));
                let one_plus = r2.add(Dual2::constant(1.0));
                let v = one_plus.v;
                one_plus
                    .compose(v.ln(), 1.0 / v, -1.0 / (v * v))
                    .mul(Dual2::constant(0.5))
            }
            Node::Add(a, b) => a.eval(x, y).add(b.eval(x, y)),
            Node::Sub(a, b) => a.eval(x, y).add(b.eval(x, y).neg()),
            Node::Mul(a, b) => a.eval(x, y).mul(b.eval(x, y)),
            Node::Div(a, b) => a.eval(x, y).mul(b.eval(x, y).recip()),
            Node::Neg(a) => a.eval(x, y).neg(),
            Node::Pow(a, n) => {
                let base = a.eval(x, y);
                let mut acc = Dual2::constant(1.0);
                for _ in 0..n.unsigned_abs() {
                    acc = acc.mul(base);
                }
                if *n < 0 {
                    acc.recip()
                } else {
                    acc
                }
            }
            Node::Sin(a) => {
                let u = a.eval(x, y);
                u.compose(u.v.sin(), u.v.cos(), -u.v.sin())
            }
            Node::Cos(a) => {
                let u = a.eval(x, y);
                u.compose(u.v.cos(), -u.v.sin(), -u.v.cos())
            }
            Node::Exp(a) => {
                let u = a.eval(x, y);
                let e = u.v.exp();
                u.compose(e, e, e)
            }
            Node::Log(a) => {
                let u = a.eval(x, y);
                u.compose(u.v.ln(), 1.0 / u.v, -1.0 / (u.v * u.v))
            }
            Node::Sqrt(a) => {
                let u = a.eval(x, y);
                let s = u.v.sqrt();
                u.compose(s, 0.5 / s, -0.25 / (s * s * s))
            }
        }
    }
}

/// A parsed weight expression, cheap to clone and `Send + Sync`.
#[derive(Clone)]
pub struct WeightExpr {
    source: String,
    node: Arc<Node>,
}

impl fmt::Debug for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightExpr({})", self.source)
    }
}

impl WeightExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let node = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Config(format!(
                "trailing input in weight expression '{src}'"
            )));
        }
        Ok(WeightExpr {
            source: src.to_string(),
            node: Arc::new(node),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        self.node
            .eval(Dual2::var_x(z.re), Dual2::var_y(z.im))
            .v
    }

    /// Analytic Laplacian via second-order duals.
    pub fn laplacian(&self, z: Complex64) -> f64 {
        self.node
            .eval(Dual2::var_x(z.re), Dual2::var_y(z.im))
            .laplacian()
    }

    /// Radial profile when the expression only involves `r2`/`fs`
    /// (circle-invariant weights); `None` otherwise.
    pub fn radial_profile(&self) -> Option<impl Fn(f64) -> f64 + Send + Sync + Clone> {
        fn uses_xy(n: &Node) -> bool {
            match n {
                Node::X | Node::Y => true,
                Node::Num(_) | Node::R2 | Node::Fs => false,
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    uses_xy(a) || uses_xy(b)
                }
                Node::Neg(a)
                | Node::Pow(a, _)
                | Node::Sin(a)
                | Node::Cos(a)
                | Node::Exp(a)
                | Node::Log(a)
                | Node::Sqrt(a) => uses_xy(a),
            }
        }
        if uses_xy(&self.node) {
            return None;
        }
        let node = self.node.clone();
        Some(move |r: f64| {
            node.eval(Dual2::var_x(r), Dual2::var_y(0.0)).v
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == '.'
                        || bytes[i] == 'e'
                        || bytes[i] == 'E'
                        || ((bytes[i] == '+' || bytes[i] == '-')
                            && i > start
                            && (bytes[i - 1] == 'e' || bytes[i - 1] == 'E')))
                {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number '{s}'")))?;
                out.push(Token::Num(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push(Token::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Config(format!(
                    "unexpected character '{other}' in weight expression"
                )))
            }
        }
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

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Node::Neg(Box::new(self.factor()?)));
        }
        let mut base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let neg = if matches!(self.peek(), Some(Token::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Token::Num(v)) if v.fract() == 0.0 && v.abs() < 64.0 => {
                    let n = v as i32;
                    base = Node::Pow(Box::new(base), if neg { -n } else { n });
                }
                other => {
                    return Err(Error::Config(format!(
                        "exponent must be a small integer, got {other:?}"
                    )))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.bump() {
            Some(Token::Num(v)) => Ok(Node::Num(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Config("missing ')'".into())),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "x" => Ok(Node::X),
                "y" => Ok(Node::Y),
                "r2" => Ok(Node::R2),
                "fs" => Ok(Node::Fs),
                "sin" | "cos" | "exp" | "log" | "sqrt" => {
                    match self.bump() {
                        Some(Token::LParen) => {}
                        _ => {
                            return Err(Error::Config(format!(
                                "function '{name}' needs parentheses"
                            )))
                        }
                    }
                    let arg = Box::new(self.expr()?);
                    match self.bump() {
                        Some(Token::RParen) => {}
                        _ => return Err(Error::Config("missing ')'".into())),
                    }
                    Ok(match name.as_str() {
                        "sin" => Node::Sin(arg),
                        "cos" => Node::Cos(arg),
                        "exp" => Node::Exp(arg),
                        "log" => Node::Log(arg),
                        _ => Node::Sqrt(arg),
                    })
                }
                other => Err(Error::Config(format!(
                    "unknown identifier '{other}' (expected x, y, r2, fs or a function)"
                ))),
            },
            other => Err(Error::Config(format!("unexpected token {other:?}"))),
        }
    }
}
