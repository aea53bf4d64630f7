use std::fmt;

use super::{Expr, Node};

// binding strength of the rendered form; children weaker than required get parentheses
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const PREFIX: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn strength(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(r) => {
            if *r.numer() < 0 {
                PREFIX
            } else if r.is_integer() {
                ATOM
            } else {
                PRODUCT
            }
        }
        Node::Coord { .. } | Node::Param(_) | Node::Func(..) => ATOM,
        Node::Add(..) => SUM,
        Node::Mul(..) | Node::Div(..) => PRODUCT,
        Node::Neg(_) => PREFIX,
        Node::Pow(..) => POWER,
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, need: u8) -> fmt::Result {
    if strength(e) < need {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Node::Coord { name, .. } => f.write_str(name),
            Node::Param(name) => f.write_str(name),
            Node::Add(a, b) => {
                child(f, a, SUM)?;
                match b.node() {
                    Node::Neg(x) => {
                        f.write_str(" - ")?;
                        child(f, x, PRODUCT)
                    }
                    Node::Const(r) if *r.numer() < 0 => write!(f, " - {}", Expr::rational(-*r)),
                    _ => {
                        f.write_str(" + ")?;
                        child(f, b, SUM)
                    }
                }
            }
            Node::Mul(a, b) => {
                child(f, a, PRODUCT)?;
                f.write_str("*")?;
                child(f, b, PREFIX)
            }
            Node::Div(a, b) => {
                child(f, a, PRODUCT)?;
                f.write_str("/")?;
                child(f, b, POWER)
            }
            Node::Neg(a) => {
                f.write_str("-")?;
                child(f, a, PRODUCT)
            }
            Node::Pow(a, n) => {
                child(f, a, ATOM)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Node::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::symexpr::{num_equal, parse_expr, Domain, Expr, Symbols};

    #[test]
    fn readable() {
        let s = Symbols::new(&["t"]);
        let t = Expr::coord(0, "t");
        assert_eq!(t.sin().powi(2).to_string(), "sin(t)^2");
        assert_eq!((t.cos() / t.sin()).to_string(), "cos(t)/sin(t)");
        assert_eq!((Expr::one() / (&t * &t)).to_string(), "1/(t*t)");
        assert_eq!((Expr::frac(1, 2) * &t).to_string(), "1/2*t");
        assert_eq!((-(&t + Expr::one())).to_string(), "-(t + 1)");
        assert_eq!((&t - t.cot()).to_string(), "t - cot(t)");
        let back = parse_expr(&(&t - (-&t).powi(-3)).to_string(), &s).unwrap();
        let dom = Domain::new(vec![(0.2, 2.9)]).unwrap();
        assert!(num_equal(&back, &(&t + t.powi(-3)), &dom).unwrap());
    }
}
