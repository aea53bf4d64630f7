//! Scalar symbolic expressions over a coordinate chart.
//!
//! Expressions are immutable DAGs behind `Arc`, so subtrees produced by one
//! computation (a connection coefficient, say) are shared by everything built
//! from them. Equality is decided numerically by sampling ([`sample`]), so the
//! constructors only perform cheap local rewrites that keep trees small.

mod diff;
mod eval;
mod parse;
mod render;
pub mod sample;
mod simplify;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul};

pub use eval::{EvalError, Evaluator, Params};
pub use parse::{parse_expr, ParseError, Symbols};
pub use sample::{num_equal, Domain, Sampling};

pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Coord { index: usize, name: Arc<str> },
    Param(Arc<str>),
    Add(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Neg(Expr),
    Func(Func, Expr),
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::wrap(Node::Const(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Expr {
        Expr::rational(Rational::new(num, den))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn coord(index: usize, name: &str) -> Expr {
        Expr::wrap(Node::Coord { index, name: Arc::from(name) })
    }

    pub fn param(name: &str) -> Expr {
        Expr::wrap(Node::Param(Arc::from(name)))
    }

    pub fn pi() -> Expr {
        Expr::param("pi")
    }

    pub fn as_const(&self) -> Option<Rational> {
        match self.node() {
            Node::Const(r) => Some(*r),
            _ => None,
        }
    }

    /// True only for the literal constant 0; numerically-zero trees are not detected.
    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Const(r) if *r == Rational::from_integer(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Const(r) if *r == Rational::from_integer(1))
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), other.as_const()) {
            if let Some(c) = a.checked_add(&b) {
                return Expr::rational(c);
            }
        }
        // a + (-a) with shared storage
        if let Node::Neg(inner) = other.node() {
            if inner.ptr_eq(self) {
                return Expr::zero();
            }
        }
        if let Node::Neg(inner) = self.node() {
            if inner.ptr_eq(other) {
                return Expr::zero();
            }
        }
        Expr::wrap(Node::Add(self.clone(), other.clone()))
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        if other.ptr_eq(self) {
            return Expr::zero();
        }
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(r) => Expr::rational(-*r),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => {
                if let Some(c) = a.checked_mul(&b) {
                    return Expr::rational(c);
                }
            }
            (Some(a), None) if a == Rational::from_integer(-1) => return other.neg(),
            (None, Some(b)) if b == Rational::from_integer(-1) => return self.neg(),
            _ => {}
        }
        // pull negations outward so that a·(-b) and -(a·b) look the same
        match (self.node(), other.node()) {
            (Node::Neg(a), Node::Neg(b)) => a.mul(b),
            (Node::Neg(a), _) => a.mul(other).neg(),
            (_, Node::Neg(b)) => self.mul(b).neg(),
            _ => Expr::wrap(Node::Mul(self.clone(), other.clone())),
        }
    }

    pub fn div(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        if other.is_one() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), other.as_const()) {
            if b != Rational::from_integer(0) {
                if let Some(c) = a.checked_div(&b) {
                    return Expr::rational(c);
                }
            }
        }
        if other.ptr_eq(self) {
            return Expr::one();
        }
        Expr::wrap(Node::Div(self.clone(), other.clone()))
    }

    pub fn powi(&self, n: i32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return self.clone();
        }
        if let Some(a) = self.as_const() {
            if a != Rational::from_integer(0) || n > 0 {
                if let Some(c) = checked_pow(a, n) {
                    return Expr::rational(c);
                }
            }
        }
        Expr::wrap(Node::Pow(self.clone(), n))
    }

    pub fn apply(&self, f: Func) -> Expr {
        if self.is_zero() {
            match f {
                Func::Sin | Func::Tan | Func::Sinh | Func::Sqrt | Func::Abs => return Expr::zero(),
                Func::Cos | Func::Cosh | Func::Exp => return Expr::one(),
                Func::Cot | Func::Ln => {}
            }
        }
        if self.is_one() {
            match f {
                Func::Ln => return Expr::zero(),
                Func::Sqrt | Func::Abs => return Expr::one(),
                _ => {}
            }
        }
        Expr::wrap(Node::Func(f, self.clone()))
    }

    pub fn sin(&self) -> Expr {
        self.apply(Func::Sin)
    }
    pub fn cos(&self) -> Expr {
        self.apply(Func::Cos)
    }
    pub fn tan(&self) -> Expr {
        self.apply(Func::Tan)
    }
    pub fn cot(&self) -> Expr {
        self.apply(Func::Cot)
    }
    pub fn sinh(&self) -> Expr {
        self.apply(Func::Sinh)
    }
    pub fn cosh(&self) -> Expr {
        self.apply(Func::Cosh)
    }
    pub fn exp(&self) -> Expr {
        self.apply(Func::Exp)
    }
    pub fn ln(&self) -> Expr {
        self.apply(Func::Ln)
    }
    pub fn sqrt(&self) -> Expr {
        self.apply(Func::Sqrt)
    }
    pub fn abs(&self) -> Expr {
        self.apply(Func::Abs)
    }

    pub fn scale(&self, r: Rational) -> Expr {
        Expr::rational(r).mul(self)
    }

    /// Balanced sum, so long accumulations do not produce deep left spines.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let terms: Vec<Expr> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        fn go(ts: &[Expr]) -> Expr {
            match ts.len() {
                0 => Expr::zero(),
                1 => ts[0].clone(),
                n => go(&ts[..n / 2]).add(&go(&ts[n / 2..])),
            }
        }
        go(&terms)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            match e.node() {
                Node::Add(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Func(_, a) => stack.push(a.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    pub fn diff(&self, coord: usize) -> Expr {
        diff::diff(self, coord)
    }
}

fn checked_pow(a: Rational, n: i32) -> Option<Rational> {
    let base = if n < 0 {
        if *a.numer() == 0 {
            return None;
        }
        a.recip()
    } else {
        a
    };
    let mut acc = Rational::from_integer(1);
    for _ in 0..n.unsigned_abs() {
        acc = acc.checked_mul(&base)?;
    }
    Some(acc)
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                Expr::$m(self, rhs)
            }
        }
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$m(&self, &rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                Expr::$m(&self, rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$m(self, &rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
