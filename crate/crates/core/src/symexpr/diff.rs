use std::collections::HashMap;

use super::{Expr, Func, Node};

/// Partial derivative with respect to coordinate `coord`, memoized over
/// shared subtrees so DAG size grows linearly.
pub(crate) fn diff(e: &Expr, coord: usize) -> Expr {
    let mut memo = HashMap::new();
    go(e, coord, &mut memo)
}

fn go(e: &Expr, k: usize, memo: &mut HashMap<*const Node, Expr>) -> Expr {
    if let Some(d) = memo.get(&e.id()) {
        return d.clone();
    }
    let d = match e.node() {
        Node::Const(_) | Node::Param(_) => Expr::zero(),
        Node::Coord { index, .. } => {
            if *index == k {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(a, b) => go(a, k, memo).add(&go(b, k, memo)),
        Node::Neg(a) => go(a, k, memo).neg(),
        Node::Mul(a, b) => {
            let da = go(a, k, memo);
            let db = go(b, k, memo);
            da.mul(b).add(&a.mul(&db))
        }
        Node::Div(a, b) => {
            let da = go(a, k, memo);
            let db = go(b, k, memo);
            if db.is_zero() {
                da.div(b)
            } else {
                da.mul(b).sub(&a.mul(&db)).div(&b.powi(2))
            }
        }
        Node::Pow(a, n) => {
            let da = go(a, k, memo);
            Expr::int(*n as i64).mul(&a.powi(n - 1)).mul(&da)
        }
        Node::Func(f, a) => {
            let da = go(a, k, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                outer(*f, a, e).mul(&da)
            }
        }
    };
    memo.insert(e.id(), d.clone());
    d
}

/// f'(a), where `fa` is the already-built f(a).
fn outer(f: Func, a: &Expr, fa: &Expr) -> Expr {
    match f {
        Func::Sin => a.cos(),
        Func::Cos => a.sin().neg(),
        Func::Tan => Expr::one().add(&fa.powi(2)),
        Func::Cot => a.sin().powi(-2).neg(),
        Func::Sinh => a.cosh(),
        Func::Cosh => a.sinh(),
        Func::Exp => fa.clone(),
        Func::Ln => Expr::one().div(a),
        Func::Sqrt => Expr::frac(1, 2).div(fa),
        Func::Abs => a.div(fa),
    }
}

#[cfg(test)]
mod tests {
    use super::super::sample::{fd_check, Domain};
    use super::super::{parse_expr, Symbols};

    fn sym() -> Symbols {
        Symbols::new(&["t", "p"])
    }

    #[test]
    fn examples() {
        let s = sym();
        let dom = Domain::new(vec![(0.2, 2.9), (0.2, 6.0)]).unwrap();
        let cases = [
            ("sin(t)", "cos(t)"),
            ("cot(t)", "-1/sin(t)^2"),
            ("ln(sin(t))", "cot(t)"),
            ("t^3*p", "3*t^2*p"),
            ("sqrt(t)", "1/(2*sqrt(t))"),
        ];
        for (src, want) in cases {
            let d = parse_expr(src, &s).unwrap().diff(0);
            let w = parse_expr(want, &s).unwrap();
            assert!(super::super::num_equal(&d, &w, &dom).unwrap(), "{src}");
        }
    }

    #[test]
    fn finite_differences() {
        let s = sym();
        let dom = Domain::new(vec![(0.3, 1.4), (0.2, 2.0)]).unwrap();
        for src in [
            "tan(t)*exp(p)",
            "abs(t - 2)/cosh(p)",
            "sinh(t*p)^(-2) + ln(t)",
            "(t + p^2)/(1 + sin(p))",
            "pi*cot(t)*sqrt(p)",
        ] {
            let e = parse_expr(src, &s).unwrap();
            for k in 0..2 {
                fd_check(&e, k, &dom).unwrap_or_else(|m| panic!("{src} d{k}: {m}"));
            }
        }
    }
}
