//! Normal form for display: Laurent polynomials over atoms.
//!
//! Atoms are coordinates, parameters, function applications (with simplified
//! arguments) and reciprocals of multi-term polynomials. `tan` and `cot` are
//! expanded into `sin` and `cos`, and `sin² + cos² = 1` is applied in whichever
//! direction gives fewer terms. The result is rebuilt with `cot`/`tan`
//! recombined where a cosine/sine ratio appears.
//!
//! This is only used to present results; numeric comparison never depends on it.

use std::collections::{BTreeMap, HashMap};

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, Signed, Zero};

use super::{Expr, Func, Node, Rational};

/// Monomial: atom key to (nonzero) exponent.
type Mono = BTreeMap<String, i32>;
type Poly = BTreeMap<Mono, Rational>;

/// Terms allowed in an intermediate polynomial before giving up.
const TERM_LIMIT: usize = 512;

#[derive(Clone)]
enum Atom {
    Leaf(Expr),
    Func(Func, Expr),
    /// reciprocal of a polynomial with at least two terms
    Recip(Poly),
}

struct Ctx {
    atoms: HashMap<String, Atom>,
    memo: HashMap<*const Node, Option<Poly>>,
}

impl Expr {
    /// Algebraically equivalent, usually much smaller expression.
    /// Falls back to `self` when the normal form would be too large.
    pub fn simplify(&self) -> Expr {
        let mut ctx = Ctx { atoms: HashMap::new(), memo: HashMap::new() };
        match ctx.poly(self) {
            Some(p) => {
                let out = ctx.best_expr(&p);
                if out.node_count() <= self.node_count() {
                    out
                } else {
                    self.clone()
                }
            }
            None => self.clone(),
        }
    }
}

fn constant(r: Rational) -> Poly {
    let mut p = Poly::new();
    if !r.is_zero() {
        p.insert(Mono::new(), r);
    }
    p
}

fn add_into(acc: &mut Poly, m: Mono, c: Rational) -> Option<()> {
    let slot = acc.entry(m.clone()).or_insert_with(Rational::zero);
    *slot = slot.checked_add(&c)?;
    if slot.is_zero() {
        acc.remove(&m);
    }
    Some(())
}

fn padd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut out = a.clone();
    for (m, c) in b {
        add_into(&mut out, m.clone(), *c)?;
    }
    (out.len() <= TERM_LIMIT).then_some(out)
}

fn pneg(a: &Poly) -> Poly {
    a.iter().map(|(m, c)| (m.clone(), -*c)).collect()
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = a.clone();
    for (k, e) in b {
        let v = out.entry(k.clone()).or_insert(0);
        *v += e;
        if *v == 0 {
            out.remove(k);
        }
    }
    out
}

fn mono_inv(a: &Mono) -> Mono {
    a.iter().map(|(k, e)| (k.clone(), -e)).collect()
}

fn pmul(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.len() * b.len() > TERM_LIMIT * 4 {
        return None;
    }
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_into(&mut out, mono_mul(ma, mb), ca.checked_mul(cb)?)?;
        }
    }
    (out.len() <= TERM_LIMIT).then_some(out)
}

fn ppow(a: &Poly, n: u32) -> Option<Poly> {
    let mut out = constant(Rational::from_integer(1));
    for _ in 0..n {
        out = pmul(&out, a)?;
    }
    Some(out)
}

fn single(p: &Poly) -> Option<(&Mono, &Rational)> {
    if p.len() == 1 {
        p.iter().next()
    } else {
        None
    }
}

fn poly_key(p: &Poly) -> String {
    let terms: Vec<String> = p
        .iter()
        .map(|(m, c)| {
            let f: Vec<String> = m.iter().map(|(k, e)| format!("{k}^{e}")).collect();
            format!("{c}*{}", f.join("*"))
        })
        .collect();
    terms.join("+")
}

/// Largest monomial dividing every term (componentwise minimum exponent).
fn common_mono(p: &Poly) -> Mono {
    let mut iter = p.keys();
    let mut out = iter.next().cloned().unwrap_or_default();
    for m in iter {
        let keys: Vec<String> = out.keys().cloned().collect();
        for k in keys {
            let e = m.get(&k).copied().unwrap_or(0);
            let cur = out[&k];
            let v = cur.min(e);
            if cur > 0 && e <= 0 || cur < 0 && e >= 0 || v == 0 {
                out.remove(&k);
            } else if cur > 0 {
                out.insert(k, v);
            } else {
                out.insert(k, cur.max(e));
            }
        }
    }
    out
}

/// `q / d` when the division leaves no remainder within a few steps.
fn exact_quotient(q: &Poly, d: &Poly) -> Option<Poly> {
    let (lead_m, lead_c) = d.iter().next()?;
    let mut rem = q.clone();
    let mut quot = Poly::new();
    for _ in 0..32 {
        let Some((m, c)) = rem.iter().next().map(|(m, c)| (m.clone(), *c)) else { return Some(quot) };
        let step = Poly::from([(mono_mul(&m, &mono_inv(lead_m)), c.checked_div(lead_c)?)]);
        rem = padd(&rem, &pneg(&pmul(&step, d)?))?;
        quot = padd(&quot, &step)?;
    }
    None
}

impl Ctx {
    fn atom(&mut self, key: String, atom: Atom) -> Poly {
        self.atoms.entry(key.clone()).or_insert(atom);
        let mut m = Mono::new();
        m.insert(key, 1);
        let mut p = Poly::new();
        p.insert(m, Rational::from_integer(1));
        p
    }

    fn poly(&mut self, e: &Expr) -> Option<Poly> {
        if let Some(p) = self.memo.get(&e.id()) {
            return p.clone();
        }
        let out = self.build(e);
        self.memo.insert(e.id(), out.clone());
        out
    }

    fn build(&mut self, e: &Expr) -> Option<Poly> {
        match e.node() {
            Node::Const(r) => Some(constant(*r)),
            Node::Coord { index, name } => Some(self.atom(format!("c{index:03}:{name}"), Atom::Leaf(e.clone()))),
            Node::Param(name) => Some(self.atom(format!("q:{name}"), Atom::Leaf(e.clone()))),
            Node::Add(a, b) => {
                let (a, b) = (self.poly(a)?, self.poly(b)?);
                padd(&a, &b)
            }
            Node::Neg(a) => Some(pneg(&self.poly(a)?)),
            Node::Mul(a, b) => {
                let (a, b) = (self.poly(a)?, self.poly(b)?);
                pmul(&a, &b)
            }
            Node::Div(a, b) => {
                let (a, b) = (self.poly(a)?, self.poly(b)?);
                self.divide(&a, &b)
            }
            Node::Pow(a, n) => {
                let a = self.poly(a)?;
                if *n >= 0 {
                    ppow(&a, *n as u32)
                } else {
                    let inv = self.divide(&constant(Rational::from_integer(1)), &a)?;
                    ppow(&inv, n.unsigned_abs())
                }
            }
            Node::Func(f, a) => {
                let arg = self.poly(a)?;
                self.func(*f, arg)
            }
        }
    }

    fn divide(&mut self, a: &Poly, b: &Poly) -> Option<Poly> {
        if b.is_empty() {
            return None;
        }
        if let Some((m, c)) = single(b) {
            let inv = Poly::from([(mono_inv(m), Rational::from_integer(1) / *c)]);
            return pmul(a, &inv);
        }
        // pull out the common monomial and normalise the leading coefficient
        let g = common_mono(b);
        let g_inv = Poly::from([(mono_inv(&g), Rational::from_integer(1))]);
        let reduced = pmul(b, &g_inv)?;
        let lead = *reduced.values().next()?;
        let unit = Poly::from([(Mono::new(), Rational::from_integer(1) / lead)]);
        let reduced = pmul(&reduced, &unit)?;
        // a proportional to the denominator
        if a.len() == reduced.len() {
            let mut ratio = None;
            let mut ok = true;
            for ((ma, ca), (mb, cb)) in a.iter().zip(reduced.iter()) {
                if ma != mb {
                    ok = false;
                    break;
                }
                let r = ca.checked_div(cb)?;
                if ratio.is_some_and(|x| x != r) {
                    ok = false;
                    break;
                }
                ratio = Some(r);
            }
            if ok {
                let scale = Poly::from([(mono_inv(&g), ratio?.checked_div(&lead)?)]);
                return Some(scale);
            }
        }
        let key = format!("r:({})", poly_key(&reduced));
        let recip = self.atom(key, Atom::Recip(reduced));
        let factor = Poly::from([(mono_inv(&g), Rational::from_integer(1) / lead)]);
        pmul(&pmul(a, &recip)?, &factor)
    }

    fn func(&mut self, f: Func, arg: Poly) -> Option<Poly> {
        if arg.is_empty() {
            return match f {
                Func::Sin | Func::Tan | Func::Sinh | Func::Sqrt | Func::Abs => Some(Poly::new()),
                Func::Cos | Func::Cosh | Func::Exp => Some(constant(Rational::from_integer(1))),
                Func::Cot | Func::Ln => None,
            };
        }
        if let Some((m, c)) = single(&arg) {
            if m.is_empty() && f == Func::Abs {
                return Some(constant(c.abs()));
            }
        }
        // odd and even functions take a canonical argument sign
        let negative = arg.values().next().is_some_and(|c| c.is_negative());
        let parity = match f {
            Func::Sin | Func::Tan | Func::Cot | Func::Sinh => Some(true),
            Func::Cos | Func::Cosh | Func::Abs => Some(false),
            _ => None,
        };
        let (arg, flip) = match parity {
            Some(odd) if negative => (pneg(&arg), odd),
            _ => (arg, false),
        };
        let key_arg = poly_key(&arg);
        let arg_expr = self.expr_of(&arg);
        let mut make = |g: Func| self.atom(format!("f:{}({key_arg})", g.name()), Atom::Func(g, arg_expr.clone()));
        let out = match f {
            Func::Tan => {
                let (s, c) = (make(Func::Sin), make(Func::Cos));
                let inv = Poly::from([(mono_inv(c.keys().next()?), Rational::from_integer(1))]);
                pmul(&s, &inv)?
            }
            Func::Cot => {
                let (s, c) = (make(Func::Sin), make(Func::Cos));
                let inv = Poly::from([(mono_inv(s.keys().next()?), Rational::from_integer(1))]);
                pmul(&c, &inv)?
            }
            other => make(other),
        };
        Some(if flip { pneg(&out) } else { out })
    }

    /// Replaces `from(x)^2` by `1 − to(x)^2` in every numerator monomial.
    fn pythagoras(&self, p: &Poly, from: Func, to: Func) -> Option<Poly> {
        let mut current = p.clone();
        loop {
            let hit = current.iter().find_map(|(m, c)| {
                m.iter().find_map(|(k, e)| {
                    let arg = k.strip_prefix(&format!("f:{}(", from.name()))?;
                    (*e >= 2).then(|| (m.clone(), *c, k.clone(), format!("f:{}({arg}", to.name())))
                })
            });
            let Some((m, c, k, other)) = hit else { return Some(current) };
            current.remove(&m);
            let mut base = m.clone();
            let e = base[&k] - 2;
            if e == 0 {
                base.remove(&k);
            } else {
                base.insert(k, e);
            }
            add_into(&mut current, base.clone(), c)?;
            let with_other = mono_mul(&base, &Mono::from([(other, 2)]));
            add_into(&mut current, with_other, -c)?;
            if current.len() > TERM_LIMIT {
                return None;
            }
        }
    }

    /// Cancels `R^e·Q` where `Q` is an exact multiple of the polynomial `1/R` stands for.
    fn cancel(&self, p: &Poly) -> Poly {
        let mut current = p.clone();
        let recips: Vec<(String, Poly)> = self
            .atoms
            .iter()
            .filter_map(|(k, a)| match a {
                Atom::Recip(q) => Some((k.clone(), q.clone())),
                _ => None,
            })
            .collect();
        for (key, den) in recips {
            let mut by_exp: BTreeMap<i32, Poly> = BTreeMap::new();
            for (m, c) in &current {
                let e = m.get(&key).copied().unwrap_or(0);
                let mut rest = m.clone();
                rest.remove(&key);
                by_exp.entry(e).or_default().insert(rest, *c);
            }
            let mut rebuilt = Poly::new();
            let mut changed = false;
            for (e, q) in by_exp {
                let (e, q) = match (e > 0).then(|| exact_quotient(&q, &den)).flatten() {
                    Some(quot) => {
                        changed = true;
                        (e - 1, quot)
                    }
                    None => (e, q),
                };
                for (m, c) in q {
                    let m = if e == 0 { m } else { mono_mul(&m, &Mono::from([(key.clone(), e)])) };
                    if add_into(&mut rebuilt, m, c).is_none() {
                        return p.clone();
                    }
                }
            }
            if changed {
                current = rebuilt;
            }
        }
        current
    }

    fn best_expr(&mut self, p: &Poly) -> Expr {
        let p = &self.cancel(p);
        let mut candidates = vec![p.clone()];
        if let Some(q) = self.pythagoras(p, Func::Cos, Func::Sin) {
            candidates.push(q);
        }
        if let Some(q) = self.pythagoras(p, Func::Sin, Func::Cos) {
            candidates.push(q);
        }
        // the `to` atoms introduced above may be new
        for c in &candidates {
            for m in c.keys() {
                for k in m.keys() {
                    if !self.atoms.contains_key(k) {
                        self.register_trig(k);
                    }
                }
            }
        }
        candidates
            .iter()
            .map(|c| self.expr_of(c))
            .min_by_key(|e| (e.node_count(), e.to_string().len()))
            .expect("at least one candidate")
    }

    fn register_trig(&mut self, key: &str) {
        // a sine or cosine introduced by the identity shares its argument with an existing atom
        for (name, f) in [("sin", Func::Sin), ("cos", Func::Cos)] {
            if let Some(arg) = key.strip_prefix(&format!("f:{name}(")) {
                let twin = ["sin", "cos"].iter().find_map(|n| match self.atoms.get(&format!("f:{n}({arg}")) {
                    Some(Atom::Func(_, a)) => Some(a.clone()),
                    _ => None,
                });
                if let Some(a) = twin {
                    self.atoms.insert(key.to_string(), Atom::Func(f, a));
                }
            }
        }
    }

    fn atom_expr(&self, key: &str) -> Expr {
        match &self.atoms[key] {
            Atom::Leaf(e) => e.clone(),
            Atom::Func(f, a) => a.apply(*f),
            Atom::Recip(p) => self.expr_of(p),
        }
    }

    fn expr_of(&self, p: &Poly) -> Expr {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (m, c) in p {
            let (t, negative) = self.term(m, c);
            if negative {
                neg.push(t);
            } else {
                pos.push(t);
            }
        }
        let mut acc: Option<Expr> = None;
        for t in pos {
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        for t in neg {
            acc = Some(match acc {
                None => t.neg(),
                Some(a) => a.sub(&t),
            });
        }
        acc.unwrap_or_else(Expr::zero)
    }

    /// Builds `|c|·m` and reports the sign of `c` separately.
    fn term(&self, m: &Mono, c: &Rational) -> (Expr, bool) {
        let mut m = m.clone();
        // cos^a / sin^b → cot^k and sin^a / cos^b → tan^k for a shared argument
        let mut ratios: Vec<(Func, String, i32)> = Vec::new();
        let keys: Vec<String> = m.keys().cloned().collect();
        for k in &keys {
            for (num, den, f) in [("cos", "sin", Func::Cot), ("sin", "cos", Func::Tan)] {
                let Some(arg) = k.strip_prefix(&format!("f:{num}(")) else { continue };
                let other = format!("f:{den}({arg}");
                let (Some(&a), Some(&b)) = (m.get(k), m.get(&other)) else { continue };
                if a > 0 && b < 0 {
                    let n = a.min(-b);
                    for (key, delta) in [(k.clone(), -n), (other.clone(), n)] {
                        let v = m[&key] + delta;
                        if v == 0 {
                            m.remove(&key);
                        } else {
                            m.insert(key, v);
                        }
                    }
                    ratios.push((f, k.clone(), n));
                }
            }
        }
        let mut num = Expr::rational(Rational::from_integer(*c.abs().numer()));
        let mut den = Expr::rational(Rational::from_integer(*c.denom()));
        for (f, key, n) in ratios {
            let arg = match &self.atoms[&key] {
                Atom::Func(_, a) => a.clone(),
                _ => unreachable!("trig atoms carry their argument"),
            };
            num = num.mul(&arg.apply(f).powi(n));
        }
        for (k, e) in &m {
            let base = self.atom_expr(k);
            match &self.atoms[k] {
                Atom::Recip(_) if *e < 0 => num = num.mul(&base.powi(-e)),
                Atom::Recip(_) => den = den.mul(&base.powi(*e)),
                _ if *e > 0 => num = num.mul(&base.powi(*e)),
                _ => den = den.mul(&base.powi(-e)),
            }
        }
        (num.div(&den), c.is_negative())
    }
}
