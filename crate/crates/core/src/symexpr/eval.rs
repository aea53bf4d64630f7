use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{Expr, Func, Node};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("`{func}` undefined at argument {arg}")]
    OutOfDomain { func: &'static str, arg: f64 },
    #[error("non-finite value in `{0}`")]
    NonFinite(String),
    #[error("no value for parameter `{0}`")]
    UnboundParam(String),
    #[error("coordinate index {0} outside the evaluation point")]
    MissingCoord(usize),
}

/// Values for named parameters. `pi` is always bound.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Params {
        Params::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Params {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        if name == "pi" {
            return Some(std::f64::consts::PI);
        }
        self.0.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

/// Evaluates expressions at one point, caching shared subtrees.
pub struct Evaluator<'a> {
    point: &'a [f64],
    params: &'a Params,
    cache: HashMap<*const Node, f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(point: &'a [f64], params: &'a Params) -> Self {
        Evaluator { point, params, cache: HashMap::new() }
    }

    pub fn eval(&mut self, e: &Expr) -> Result<f64, EvalError> {
        if let Some(v) = self.cache.get(&e.id()) {
            return Ok(*v);
        }
        let v = match e.node() {
            Node::Const(r) => *r.numer() as f64 / *r.denom() as f64,
            Node::Coord { index, .. } => *self.point.get(*index).ok_or(EvalError::MissingCoord(*index))?,
            Node::Param(name) => self.params.get(name).ok_or_else(|| EvalError::UnboundParam(name.to_string()))?,
            Node::Add(a, b) => self.eval(a)? + self.eval(b)?,
            Node::Mul(a, b) => self.eval(a)? * self.eval(b)?,
            Node::Div(a, b) => {
                let den = self.eval(b)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero(e.to_string()));
                }
                self.eval(a)? / den
            }
            Node::Pow(a, n) => {
                let base = self.eval(a)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero(e.to_string()));
                }
                base.powi(*n)
            }
            Node::Neg(a) => -self.eval(a)?,
            Node::Func(f, a) => apply(*f, self.eval(a)?)?,
        };
        if !v.is_finite() {
            return Err(EvalError::NonFinite(e.to_string()));
        }
        self.cache.insert(e.id(), v);
        Ok(v)
    }
}

fn apply(f: Func, x: f64) -> Result<f64, EvalError> {
    let bad = || EvalError::OutOfDomain { func: f.name(), arg: x };
    Ok(match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => {
            if x.cos() == 0.0 {
                return Err(bad());
            }
            x.tan()
        }
        Func::Cot => {
            let s = x.sin();
            if s == 0.0 {
                return Err(bad());
            }
            x.cos() / s
        }
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= 0.0 {
                return Err(bad());
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(bad());
            }
            x.sqrt()
        }
        Func::Abs => x.abs(),
    })
}

impl Expr {
    /// One-shot evaluation; use an [`Evaluator`] to share work across expressions.
    pub fn eval_at(&self, point: &[f64], params: &Params) -> Result<f64, EvalError> {
        Evaluator::new(point, params).eval(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{parse_expr, Symbols};
    use std::f64::consts::PI;

    fn ev(src: &str, t: f64) -> Result<f64, EvalError> {
        parse_expr(src, &Symbols::new(&["t"])).unwrap().eval_at(&[t], &Params::new())
    }

    #[test]
    fn examples() {
        assert!((ev("sin(t)", PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(ev("cot(t)", PI / 2.0).unwrap().abs() < 1e-15);
        assert!((ev("cot(t)", PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ev("1/sin(t)", PI / 2.0).unwrap() - 1.0).abs() < 1e-15);
        for t in [0.1, 0.7, 2.5, -3.0] {
            assert!((ev("sin(t)^2 + cos(t)^2", t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(ev("ln(t)", 0.0), Err(EvalError::OutOfDomain { .. })));
        assert!(matches!(ev("ln(t - 1)", 0.5), Err(EvalError::OutOfDomain { .. })));
        assert!(matches!(ev("1/t", 0.0), Err(EvalError::DivisionByZero(_))));
        assert!(matches!(ev("t^(-1)", 0.0), Err(EvalError::DivisionByZero(_))));
        assert!(matches!(ev("exp(exp(t))", 10.0), Err(EvalError::NonFinite(_))));
        assert!(matches!(ev("cot(t)", 0.0), Err(EvalError::OutOfDomain { .. })));
        let k = parse_expr("k*t", &Symbols::new(&["t"]).with_params(&["k"])).unwrap();
        assert!(matches!(k.eval_at(&[1.0], &Params::new()), Err(EvalError::UnboundParam(_))));
        assert_eq!(k.eval_at(&[2.0], &Params::new().with("k", 1.5)).unwrap(), 3.0);
    }
}
