use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::coeff::Coeff;
use crate::ring::context::Ctx;
use crate::ring::monomial::{Monomial, MonomialOrder};

/// Sparse multivariate polynomial in canonical form: no zero coefficient is
/// ever stored, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Coeff>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails only when the contexts differ.
pub fn arithmetic(a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
    a.check_ctx(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Poly {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Ctx) -> Poly {
        Poly::constant(ctx, ctx.field().one())
    }

    pub fn constant(ctx: &Ctx, c: Coeff) -> Poly {
        Poly::term(ctx, Monomial::one(ctx.n_vars()), c)
    }

    pub fn from_i64(ctx: &Ctx, c: i64) -> Poly {
        Poly::constant(ctx, ctx.field().from_i64(c))
    }

    pub fn var(ctx: &Ctx, i: usize) -> Poly {
        Poly::term(ctx, Monomial::var(ctx.n_vars(), i), ctx.field().one())
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Result<Poly> {
        let i = ctx.var_index(name).ok_or_else(|| Error::UnknownVariable {
            name: name.to_string(),
            line: 0,
            col: 0,
        })?;
        Ok(Poly::var(ctx, i))
    }

    pub fn term(ctx: &Ctx, m: Monomial, c: Coeff) -> Poly {
        debug_assert_eq!(m.len(), ctx.n_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ctx: ctx.clone(), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(ctx: &Ctx, it: I) -> Poly {
        let mut p = Poly::zero(ctx);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn from_map_unchecked(ctx: &Ctx, terms: BTreeMap<Monomial, Coeff>) -> Poly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn check_ctx(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_coeff(&self) -> Coeff {
        self.terms
            .get(&Monomial::one(self.ctx.n_vars()))
            .cloned()
            .unwrap_or_else(|| self.ctx.field().zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient of the monomial with exponent vector `e` (zero if absent).
    pub fn coefficient_of(&self, e: &[u32]) -> Result<Coeff> {
        if e.len() != self.ctx.n_vars() {
            return Err(Error::LengthMismatch { expected: self.ctx.n_vars(), got: e.len() });
        }
        Ok(self
            .terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.ctx.field().zero()))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// True when no fiber variable occurs.
    pub fn is_base_only(&self) -> bool {
        self.ctx.fiber_indices().all(|i| !self.involves(i))
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Sum of the terms whose exponent in variable `i` is exactly `e`, with
    /// that variable removed.
    pub fn coefficient_in_var(&self, i: usize, e: u32) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[i] == e {
                let mut k = m.clone();
                k.0[i] = 0;
                terms.insert(k, c.clone());
            }
        }
        Poly { ctx: self.ctx.clone(), terms }
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let field = self.ctx.field();
        let mut out = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k.0[i] -= 1;
            out.add_term(k, c * &field.from_i64(e as i64));
        }
        out
    }

    /// Ring homomorphism into `target`: variable `i` goes to `images[i]`
    /// when present, otherwise to the variable of the same name in `target`.
    pub fn substitute(&self, images: &BTreeMap<usize, Poly>, target: &Ctx) -> Result<Poly> {
        let n = self.ctx.n_vars();
        let mut imgs: Vec<Poly> = Vec::with_capacity(n);
        for i in 0..n {
            let img = match images.get(&i) {
                Some(p) => {
                    if p.ctx != *target {
                        return Err(Error::ImageContext(format!(
                            "image of `{}` lives in {}, expected {}",
                            self.ctx.vars()[i],
                            p.ctx,
                            target
                        )));
                    }
                    p.clone()
                }
                None => {
                    let name = &self.ctx.vars()[i];
                    match target.var_index(name) {
                        Some(j) => Poly::var(target, j),
                        None if !self.involves(i) => Poly::zero(target),
                        None => {
                            return Err(Error::ImageContext(format!(
                                "variable `{name}` has no image in {target}"
                            )))
                        }
                    }
                }
            };
            imgs.push(img);
        }
        let mut powers: Vec<Vec<Poly>> = imgs.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &imgs[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Substitution keyed by variable names.
    pub fn substitute_named(&self, images: &[(&str, Poly)], target: &Ctx) -> Result<Poly> {
        let mut map = BTreeMap::new();
        for (name, p) in images {
            let i = self
                .ctx
                .var_index(name)
                .ok_or_else(|| Error::ImageContext(format!("no variable `{name}` in {}", self.ctx)))?;
            map.insert(i, p.clone());
        }
        self.substitute(&map, target)
    }

    /// Moves the polynomial into another context by matching variable names.
    pub fn to_context(&self, target: &Ctx) -> Result<Poly> {
        if self.ctx == *target {
            return Ok(Poly { ctx: target.clone(), terms: self.terms.clone() });
        }
        let mut idx = Vec::with_capacity(self.ctx.n_vars());
        for (i, name) in self.ctx.vars().iter().enumerate() {
            match target.var_index(name) {
                Some(j) => idx.push(Some(j)),
                None if !self.involves(i) => idx.push(None),
                None => {
                    return Err(Error::ImageContext(format!("variable `{name}` is missing from {target}")))
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.n_vars()];
            for (i, &x) in m.0.iter().enumerate() {
                if let Some(j) = idx[i] {
                    e[j] = x;
                }
            }
            terms.insert(Monomial(e), c.clone());
        }
        Ok(Poly { ctx: target.clone(), terms })
    }

    fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.ctx.vars()[i].clone()),
                _ => parts.push(format!("{}^{}", self.ctx.vars()[i], e)),
            }
        }
        parts.join("*")
    }

    /// Terms in descending degrevlex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coeff)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b.0, a.0));
        ts
    }
}

/// Writes `c * m` with sign handled by the caller.
pub(crate) fn fmt_scaled(coeff: &Coeff, body: &str) -> String {
    if body.is_empty() {
        return coeff.to_string();
    }
    if coeff.is_one() {
        body.to_string()
    } else {
        format!("{coeff}*{body}")
    }
}

/// Joins signed terms as `a - b + c`.
pub(crate) fn join_signed(items: Vec<(bool, String)>) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, s)) in items.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&s);
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| (c.is_negative(), fmt_scaled(&c.abs(), &self.fmt_monomial(m))))
            .collect();
        write!(f, "{}", join_signed(items))
    }
}

fn assert_ctx(a: &Poly, b: &Poly) {
    if a.check_ctx(b).is_err() {
        panic!("polynomial arithmetic across contexts {} and {}", a.ctx, b.ctx);
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_ctx(self, rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_ctx(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_ctx(self, rhs);
        let mut out = Poly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffField, RingContext};

    fn ctx() -> Ctx {
        RingContext::absolute(CoeffField::Rationals, &["x", "y"]).unwrap()
    }

    #[test]
    fn cancellation_and_products() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        assert_eq!(&(&x + &y) + &(&x - &y), x.scale(&c.field().from_i64(2)));
        let one = Poly::one(&c);
        assert_eq!((&x + &one) * (&x - &one), &x.pow(2) - &one);
        let half = Poly::constant(&c, c.field().from_ratio(&1.into(), &2.into()).unwrap());
        let two = Poly::from_i64(&c, 2);
        assert_eq!(&(&half * &x) * &two, x);
    }

    #[test]
    fn coefficient_extraction() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let p = (&x * &y.pow(2)).scale(&c.field().from_i64(3));
        assert_eq!(p.coefficient_of(&[1, 2]).unwrap(), c.field().from_i64(3));
        assert!(x.pow(2).coefficient_of(&[1, 0]).unwrap().is_zero());
        assert_eq!((&x + &y).pow(2).coefficient_of(&[1, 1]).unwrap(), c.field().from_i64(2));
        assert!(matches!(x.coefficient_of(&[1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn substitution_examples() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let one = Poly::one(&c);
        let p = &x.pow(2) - &y;
        assert_eq!(p.substitute_named(&[("y", one.clone())], &c).unwrap(), &x.pow(2) - &one);

        let ct = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let cx = RingContext::absolute(CoeffField::Rationals, &["x"]).unwrap();
        let t = Poly::var(&ct, 1);
        let yy = Poly::var(&ct, 0);
        let xx = Poly::var(&cx, 0);
        let rel = &t.pow(2) - &yy;
        let img = rel.substitute_named(&[("T", xx.clone()), ("y", xx.pow(2))], &cx).unwrap();
        assert!(img.is_zero());

        let cu = RingContext::absolute(CoeffField::Rationals, &["u", "v"]).unwrap();
        let u = Poly::var(&cu, 0);
        let v = Poly::var(&cu, 1);
        let s = (&x + &y).substitute_named(&[("x", &u + &v), ("y", &u - &v)], &cu).unwrap();
        assert_eq!(s, u.scale(&cu.field().from_i64(2)));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = Poly::var(&ctx(), 0);
        let other = RingContext::absolute(CoeffField::Rationals, &["x"]).unwrap();
        let b = Poly::var(&other, 0);
        assert_eq!(arithmetic(&a, &b, ArithOp::Add), Err(Error::ContextMismatch));
    }

    #[test]
    fn display_is_canonical() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let half = c.field().from_ratio(&1.into(), &2.into()).unwrap();
        let p = &(&x.pow(2) * &y) - &Poly::constant(&c, half);
        assert_eq!(p.to_string(), "x^2*y - 1/2");
        assert_eq!((-&x + Poly::from_i64(&c, 3)).to_string(), "-x + 3");
        assert_eq!(Poly::zero(&c).to_string(), "0");
    }
}
