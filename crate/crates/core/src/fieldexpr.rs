//! Expression language for warping functions, metric components and vector
//! field components.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Named constants are substituted as literals at parse time, so the free
//! variables of a parsed expression are always chart coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::jets::{Jet2, JetError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("{func} takes {expected} argument(s), got {found}")]
    Arity {
        func: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
    #[error(transparent)]
    Domain(#[from] JetError),
}

/// Numeric carrier for expression evaluation: plain reals or jets.
///
/// Both implementations compute values with the same floating-point
/// operation sequence, so `eval::<f64>` equals `eval::<Jet2>().value()`
/// bit for bit.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn lift(v: f64) -> Self;
    fn real(&self) -> f64;
    fn div(self, rhs: Self) -> Result<Self, JetError>;
    fn powi(self, n: i32) -> Result<Self, JetError>;
    fn powf(self, exponent: Self) -> Result<Self, JetError>;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Result<Self, JetError>;
    fn sqrt(self) -> Result<Self, JetError>;
    fn tanh(self) -> Self;
    fn cbrt(self) -> Result<Self, JetError>;
}

impl Scalar for f64 {
    fn lift(v: f64) -> Self {
        v
    }
    fn real(&self) -> f64 {
        *self
    }
    fn div(self, rhs: Self) -> Result<Self, JetError> {
        if rhs.abs() <= f64::MIN_POSITIVE {
            return Err(JetError::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn powi(self, n: i32) -> Result<Self, JetError> {
        if n == 0 {
            return Ok(1.0);
        }
        let mut acc = self;
        for _ in 1..n.unsigned_abs() {
            acc *= self;
        }
        if n < 0 {
            Scalar::div(1.0, acc)
        } else {
            Ok(acc)
        }
    }
    fn powf(self, exponent: Self) -> Result<Self, JetError> {
        if self <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                arg: self,
            });
        }
        Ok((exponent * self.ln()).exp())
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Result<Self, JetError> {
        if self <= 0.0 {
            return Err(JetError::Domain {
                func: "log",
                arg: self,
            });
        }
        Ok(f64::ln(self))
    }
    fn sqrt(self) -> Result<Self, JetError> {
        if self <= 0.0 {
            return Err(JetError::Domain {
                func: "sqrt",
                arg: self,
            });
        }
        Ok(f64::sqrt(self))
    }
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    fn cbrt(self) -> Result<Self, JetError> {
        if self == 0.0 {
            return Err(JetError::Domain {
                func: "cbrt",
                arg: self,
            });
        }
        Ok(f64::cbrt(self))
    }
}

impl Scalar for Jet2 {
    fn lift(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn real(&self) -> f64 {
        self.value()
    }
    fn div(self, rhs: Self) -> Result<Self, JetError> {
        self.checked_div(&rhs)
    }
    fn powi(self, n: i32) -> Result<Self, JetError> {
        Jet2::powi(&self, n)
    }
    fn powf(self, exponent: Self) -> Result<Self, JetError> {
        Jet2::powf(&self, &exponent)
    }
    fn sin(self) -> Self {
        Jet2::sin(&self)
    }
    fn cos(self) -> Self {
        Jet2::cos(&self)
    }
    fn exp(self) -> Self {
        Jet2::exp(&self)
    }
    fn ln(self) -> Result<Self, JetError> {
        Jet2::ln(&self)
    }
    fn sqrt(self) -> Result<Self, JetError> {
        Jet2::sqrt(&self)
    }
    fn tanh(self) -> Self {
        Jet2::tanh(&self)
    }
    fn cbrt(self) -> Result<Self, JetError> {
        Jet2::cbrt(&self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Tanh,
    Cbrt,
    Pow,
}

impl Func {
    fn lookup(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "tanh" => Func::Tanh,
            "cbrt" => Func::Cbrt,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Tanh => "tanh",
            Func::Cbrt => "cbrt",
            Func::Pow => "pow",
        }
    }

    fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Index into the owning expression's variable list.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// `folded` holds the exponent's value when it has no free variables.
    Pow {
        base: Box<Expr>,
        exp: Box<Expr>,
        folded: Option<f64>,
    },
    Call(Func, Vec<Expr>),
}

/// A parsed expression together with the variable scope it was parsed in.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldExpr {
    ast: Expr,
    vars: Vec<String>,
    free: Vec<usize>,
}

/// Largest exponent magnitude lowered to repeated multiplication.
const MAX_INT_POW: f64 = 64.0;

impl FieldExpr {
    /// Parses `src` with `vars` as the coordinate scope and no named constants.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Self, ExprError> {
        Self::parse_with(src, vars, &BTreeMap::new())
    }

    pub fn parse_with(
        src: &str,
        vars: &[&str],
        constants: &BTreeMap<String, f64>,
    ) -> Result<Self, ExprError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut parser = Parser {
            src,
            pos: 0,
            vars: &vars,
            constants,
        };
        parser.skip_ws();
        if parser.pos >= src.len() {
            return Err(parser.error("empty expression"));
        }
        let ast = parser.expr()?;
        parser.skip_ws();
        if parser.pos < src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        let mut used = vec![false; vars.len()];
        mark_vars(&ast, &mut used);
        let free = (0..vars.len()).filter(|&i| used[i]).collect();
        Ok(Self { ast, vars, free })
    }

    /// Constant expression `v` over the given scope.
    pub fn constant(v: f64, vars: &[&str]) -> Self {
        let ast = if v < 0.0 {
            Expr::Neg(Box::new(Expr::Num(-v)))
        } else {
            Expr::Num(v)
        };
        Self {
            ast,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            free: Vec::new(),
        }
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables that actually occur, in scope order.
    pub fn free_vars(&self) -> Vec<&str> {
        self.free.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.free.is_empty()
    }

    /// Evaluates with `env[k]` bound to the k-th scope variable.
    pub fn eval<S: Scalar>(&self, env: &[S]) -> Result<S, ExprError> {
        if env.len() < self.vars.len() {
            if let Some(&missing) = self.free.iter().find(|&&i| i >= env.len()) {
                return Err(ExprError::MissingBinding(self.vars[missing].clone()));
            }
        }
        Ok(eval_node(&self.ast, env)?)
    }

    /// Evaluates against a name-keyed environment.
    pub fn eval_named<S: Scalar>(&self, env: &BTreeMap<&str, S>) -> Result<S, ExprError> {
        let mut slots = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            match env.get(name.as_str()) {
                Some(v) => slots.push(*v),
                None if self.free.contains(&i) => {
                    return Err(ExprError::MissingBinding(name.clone()))
                }
                None => slots.push(S::lift(0.0)),
            }
        }
        self.eval(&slots)
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.ast, &self.vars)
    }
}

fn mark_vars(e: &Expr, used: &mut [bool]) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(i) => used[*i] = true,
        Expr::Neg(a) => mark_vars(a, used),
        Expr::Bin(_, a, b) => {
            mark_vars(a, used);
            mark_vars(b, used);
        }
        Expr::Pow { base, exp, .. } => {
            mark_vars(base, used);
            mark_vars(exp, used);
        }
        Expr::Call(_, args) => args.iter().for_each(|a| mark_vars(a, used)),
    }
}

fn has_vars(e: &Expr) -> bool {
    match e {
        Expr::Num(_) => false,
        Expr::Var(_) => true,
        Expr::Neg(a) => has_vars(a),
        Expr::Bin(_, a, b) => has_vars(a) || has_vars(b),
        Expr::Pow { base, exp, .. } => has_vars(base) || has_vars(exp),
        Expr::Call(_, args) => args.iter().any(has_vars),
    }
}

fn pow_node<S: Scalar>(base: S, exp: Option<S>, folded: Option<f64>) -> Result<S, JetError> {
    match folded {
        Some(e) if e.fract() == 0.0 && e.abs() <= MAX_INT_POW => base.powi(e as i32),
        Some(e) => base.powf(S::lift(e)),
        None => base.powf(exp.expect("dynamic exponent evaluated")),
    }
}

fn eval_node<S: Scalar>(e: &Expr, env: &[S]) -> Result<S, JetError> {
    Ok(match e {
        Expr::Num(v) => S::lift(*v),
        Expr::Var(i) => env[*i],
        Expr::Neg(a) => -eval_node(a, env)?,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval_node(a, env)?, eval_node(b, env)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x.div(y)?,
            }
        }
        Expr::Pow { base, exp, folded } => {
            let b = eval_node(base, env)?;
            let dynamic = match folded {
                Some(_) => None,
                None => Some(eval_node(exp, env)?),
            };
            pow_node(b, dynamic, *folded)?
        }
        Expr::Call(func, args) => {
            let a = eval_node(&args[0], env)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Log => a.ln()?,
                Func::Sqrt => a.sqrt()?,
                Func::Tanh => a.tanh(),
                Func::Cbrt => a.cbrt()?,
                Func::Pow => {
                    let folded = if has_vars(&args[1]) {
                        None
                    } else {
                        Some(eval_node::<f64>(&args[1], &[])?)
                    };
                    let dynamic = match folded {
                        Some(_) => None,
                        None => Some(eval_node(&args[1], env)?),
                    };
                    pow_node(a, dynamic, folded)?
                }
            }
        }
    })
}

// Precedence levels used by the printer.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => P_ATOM,
        Expr::Neg(_) => P_NEG,
        Expr::Pow { .. } => P_POW,
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => P_ADD,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => P_MUL,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, vars: &[String], min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "(")?;
        write_node(f, e, vars)?;
        write!(f, ")")
    } else {
        write_node(f, e, vars)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, e: &Expr, vars: &[String]) -> fmt::Result {
    match e {
        Expr::Num(v) => write!(f, "{v}"),
        Expr::Var(i) => write!(f, "{}", vars[*i]),
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_at(f, a, vars, P_NEG)
        }
        Expr::Bin(op, a, b) => {
            let (level, sym) = match op {
                BinOp::Add => (P_ADD, "+"),
                BinOp::Sub => (P_ADD, "-"),
                BinOp::Mul => (P_MUL, "*"),
                BinOp::Div => (P_MUL, "/"),
            };
            write_at(f, a, vars, level)?;
            write!(f, " {sym} ")?;
            write_at(f, b, vars, level + 1)
        }
        Expr::Pow { base, exp, .. } => {
            write_at(f, base, vars, P_ATOM)?;
            write!(f, "^")?;
            write_at(f, exp, vars, P_NEG)
        }
        Expr::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write_node(f, a, vars)?;
            }
            write!(f, ")")
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [String],
    constants: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let exp = self.factor()?;
        let folded = if has_vars(&exp) {
            None
        } else {
            Some(eval_node::<f64>(&exp, &[])?)
        };
        Ok(Expr::Pow {
            base: Box::new(base),
            exp: Box::new(exp),
            folded,
        })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(start),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if self.eat(b'(') {
                    self.call(name, start)
                } else {
                    self.identifier(name, start)
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self, start: usize) -> Result<Expr, ExprError> {
        let bytes = self.src.as_bytes();
        let digits = |p: &mut usize| {
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p);
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            digits(&mut p);
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if q < bytes.len() && bytes[q].is_ascii_digit() {
                digits(&mut q);
                p = q;
            }
        }
        let lexeme = &self.src[start..p];
        let v: f64 = lexeme.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number `{lexeme}`"),
        })?;
        self.pos = p;
        Ok(Expr::Num(v))
    }

    fn identifier(&self, name: &str, start: usize) -> Result<Expr, ExprError> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(Expr::Var(i));
        }
        let value = match self.constants.get(name) {
            Some(v) => *v,
            None if name == "pi" => std::f64::consts::PI,
            None => {
                return Err(ExprError::UnknownIdentifier {
                    name: name.to_string(),
                    offset: start,
                })
            }
        };
        Ok(if value < 0.0 {
            Expr::Neg(Box::new(Expr::Num(-value)))
        } else {
            Expr::Num(value)
        })
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr, ExprError> {
        let func = Func::lookup(name).ok_or_else(|| ExprError::UnknownIdentifier {
            name: name.to_string(),
            offset: start,
        })?;
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        if args.len() != func.arity() {
            return Err(ExprError::Arity {
                func: func.name(),
                expected: func.arity(),
                found: args.len(),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

/// Which factor of the product a field or coordinate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    Base,
    /// Fiber index, zero-based.
    Fiber(usize),
    /// All chart coordinates (a non-lifted field).
    Full,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Base => write!(f, "base"),
            Block::Fiber(i) => write!(f, "fiber.{}", i + 1),
            Block::Full => write!(f, "full"),
        }
    }
}

/// One lifted vector field: components over the coordinates of `block`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldDef {
    pub block: Block,
    pub components: Vec<FieldExpr>,
}

impl VectorFieldDef {
    pub fn new(block: Block, components: Vec<FieldExpr>) -> Self {
        Self { block, components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Parses one component string per block coordinate.
    pub fn parse(
        block: Block,
        sources: &[&str],
        coords: &[&str],
        constants: &BTreeMap<String, f64>,
    ) -> Result<Self, ExprError> {
        let components = sources
            .iter()
            .map(|s| FieldExpr::parse_with(s, coords, constants))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(block, components))
    }
}
