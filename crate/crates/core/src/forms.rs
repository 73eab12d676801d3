//! Differential forms with polynomial coefficients, stored on the sorted
//! basis `dx_{i1} ∧ … ∧ dx_{ip}` with `i1 < … < ip`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{fmt_scaled, join_signed, Ctx, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    ctx: Ctx,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

impl DiffForm {
    pub fn zero(ctx: &Ctx, degree: usize) -> DiffForm {
        DiffForm { ctx: ctx.clone(), degree, comps: BTreeMap::new() }
    }

    /// The 0-form `p`.
    pub fn function(p: Poly) -> DiffForm {
        let ctx = p.ctx().clone();
        let mut f = DiffForm::zero(&ctx, 0);
        f.add_component(Vec::new(), p);
        f
    }

    /// `dx_i`.
    pub fn dvar(ctx: &Ctx, i: usize) -> DiffForm {
        DiffForm::basis(ctx, &[i], Poly::one(ctx))
    }

    /// `coeff · dx_{i1} ∧ … ∧ dx_{ip}` for indices in any order.
    pub fn basis(ctx: &Ctx, indices: &[usize], coeff: Poly) -> DiffForm {
        let mut idx = indices.to_vec();
        let mut f = DiffForm::zero(ctx, idx.len());
        if let Some(neg) = sort_sign(&mut idx) {
            f.add_component(idx, if neg { -coeff } else { coeff });
        }
        f
    }

    /// `coeff · dT_1 ∧ … ∧ dT_r` over all fiber variables.
    pub fn fiber_top(coeff: Poly) -> DiffForm {
        let ctx = coeff.ctx().clone();
        let idx: Vec<usize> = ctx.fiber_indices().collect();
        DiffForm::basis(&ctx, &idx, coeff)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.comps
    }

    /// Coefficient of the sorted basis element `indices`.
    pub fn coefficient(&self, indices: &[usize]) -> Poly {
        self.comps.get(indices).cloned().unwrap_or_else(|| Poly::zero(&self.ctx))
    }

    fn add_component(&mut self, idx: Vec<usize>, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.comps.remove(&idx) {
            Some(q) => {
                let s = &q + &p;
                if !s.is_zero() {
                    self.comps.insert(idx, s);
                }
            }
            None => {
                self.comps.insert(idx, p);
            }
        }
    }

    fn check(&self, other: &DiffForm) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let rhs = if self.is_zero() { self } else { other };
        for (k, p) in &rhs.comps {
            out.add_component(k.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.scale(&-Poly::one(&self.ctx))
    }

    /// Multiplies every coefficient by the function `p`.
    pub fn scale(&self, p: &Poly) -> DiffForm {
        let mut out = DiffForm::zero(&self.ctx, self.degree);
        for (k, c) in &self.comps {
            out.add_component(k.clone(), c * p);
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        let degree = self.degree + other.degree;
        let mut out = DiffForm::zero(&self.ctx, degree);
        if degree > self.ctx.n_vars() {
            return Ok(out);
        }
        for (a, p) in &self.comps {
            for (b, q) in &other.comps {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(neg) = sort_sign(&mut idx) {
                    let c = p * q;
                    out.add_component(idx, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> DiffForm {
        let mut out = DiffForm::zero(&self.ctx, self.degree + 1);
        for (k, p) in &self.comps {
            for j in 0..self.ctx.n_vars() {
                if k.contains(&j) {
                    continue;
                }
                let dp = p.derivative(j);
                if dp.is_zero() {
                    continue;
                }
                let mut idx = Vec::with_capacity(k.len() + 1);
                idx.push(j);
                idx.extend_from_slice(k);
                let neg = sort_sign(&mut idx).expect("distinct indices");
                out.add_component(idx, if neg { -dp } else { dp });
            }
        }
        out
    }

    /// Pullback along the ring map sending variable `i` to `images[i]`
    /// (unassigned variables go to the same-named variable of `target`).
    pub fn pullback(&self, images: &BTreeMap<usize, Poly>, target: &Ctx) -> Result<DiffForm> {
        let n = self.ctx.n_vars();
        let mut dimg: Vec<Option<DiffForm>> = vec![None; n];
        let mut out = DiffForm::zero(target, self.degree);
        for (k, p) in &self.comps {
            let mut acc = DiffForm::function(p.substitute(images, target)?);
            for &i in k {
                if dimg[i].is_none() {
                    let x = Poly::var(&self.ctx, i).substitute(images, target)?;
                    dimg[i] = Some(DiffForm::function(x).exterior_derivative());
                }
                acc = acc.wedge(dimg[i].as_ref().expect("filled"))?;
            }
            out = out.add(&acc)?;
        }
        out.degree = self.degree;
        Ok(out)
    }

    /// Moves the form into a context sharing its variable names.
    pub fn to_context(&self, target: &Ctx) -> Result<DiffForm> {
        let mut out = DiffForm::zero(target, self.degree);
        for (k, p) in &self.comps {
            let mut idx = Vec::with_capacity(k.len());
            for &i in k {
                let name = &self.ctx.vars()[i];
                idx.push(target.var_index(name).ok_or_else(|| {
                    Error::ImageContext(format!("variable `{name}` is missing from {target}"))
                })?);
            }
            out = out.add(&DiffForm::basis(target, &idx, p.to_context(target)?))?;
        }
        Ok(out)
    }

    /// True when every differential is along a fiber (resp. base) variable.
    pub fn only_fiber_differentials(&self) -> bool {
        self.comps.keys().all(|k| k.iter().all(|&i| self.ctx.is_fiber(i)))
    }

    pub fn only_base_differentials(&self) -> bool {
        self.comps.keys().all(|k| k.iter().all(|&i| !self.ctx.is_fiber(i)))
    }

    /// For a form `g · dT_1 ∧ … ∧ dT_r` over all fiber variables, returns `g`.
    pub fn fiber_top_coefficient(&self) -> Result<Poly> {
        let top: Vec<usize> = self.ctx.fiber_indices().collect();
        if self.degree != top.len() {
            return Err(Error::DegreeMismatch(format!(
                "expected a {}-form in the fiber differentials, got degree {}",
                top.len(),
                self.degree
            )));
        }
        if self.comps.keys().any(|k| *k != top) {
            return Err(Error::DegreeMismatch("form involves base differentials".into()));
        }
        Ok(self.coefficient(&top))
    }
}

/// `μ ∧ ν` for a base form `ν` and a fiber form `μ` (fiber part first).
pub fn transitivity_wedge(nu: &DiffForm, mu: &DiffForm) -> Result<DiffForm> {
    if !nu.only_base_differentials() {
        return Err(Error::BlockViolation("ν must only involve base differentials".into()));
    }
    if !mu.only_fiber_differentials() {
        return Err(Error::BlockViolation("μ must only involve fiber differentials".into()));
    }
    mu.wedge(nu)
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(&[]));
        }
        let mut items = Vec::new();
        for (k, p) in &self.comps {
            let body = k.iter().map(|&i| format!("d({})", self.ctx.vars()[i])).collect::<Vec<_>>().join("/\\");
            if p.n_terms() == 1 {
                let (m, c) = p.terms().next().expect("one term");
                let mono = Poly::term(&self.ctx, m.clone(), self.ctx.field().one()).to_string();
                let head = if m.is_one() { String::new() } else { mono };
                let full = if head.is_empty() { body } else { format!("{head}*{body}") };
                items.push((c.is_negative(), fmt_scaled(&c.abs(), &full)));
            } else {
                items.push((false, format!("({p})*{body}")));
            }
        }
        write!(f, "{}", join_signed(items))
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
    fn wedge_signs() {
        let c = ctx();
        let dx = DiffForm::dvar(&c, 0);
        let dy = DiffForm::dvar(&c, 1);
        assert_eq!(dx.wedge(&dy).unwrap().coefficient(&[0, 1]), Poly::one(&c));
        assert_eq!(dy.wedge(&dx).unwrap().coefficient(&[0, 1]), -Poly::one(&c));
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }

    #[test]
    fn derivative_examples() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let d = DiffForm::function(x.pow(2)).exterior_derivative();
        assert_eq!(d, DiffForm::basis(&c, &[0], &x + &x));
        let xdy = DiffForm::basis(&c, &[1], x.clone());
        assert_eq!(xdy.exterior_derivative(), DiffForm::basis(&c, &[0, 1], Poly::one(&c)));
        let closed = xdy.add(&DiffForm::basis(&c, &[0], y)).unwrap();
        assert!(closed.exterior_derivative().is_zero());
    }

    #[test]
    fn pullback_examples() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let dy = DiffForm::dvar(&c, 1);
        let img = BTreeMap::from([(1, x.pow(2))]);
        assert_eq!(dy.pullback(&img, &c).unwrap(), DiffForm::basis(&c, &[0], &x + &x));
        let img = BTreeMap::from([(1, Poly::one(&c))]);
        assert!(dy.pullback(&img, &c).unwrap().is_zero());
        let uv = RingContext::absolute(CoeffField::Rationals, &["u", "v"]).unwrap();
        let img = BTreeMap::from([(0, Poly::var(&uv, 0)), (1, Poly::var(&uv, 1))]);
        let top = DiffForm::basis(&c, &[0, 1], Poly::one(&c));
        assert_eq!(top.pullback(&img, &uv).unwrap(), DiffForm::basis(&uv, &[0, 1], Poly::one(&uv)));
    }

    #[test]
    fn transitivity_order() {
        let c = RingContext::relative(CoeffField::Rationals, &["u1", "u2"], &["T"]).unwrap();
        let du = DiffForm::dvar(&c, 0);
        let dt = DiffForm::dvar(&c, 2);
        // dT ∧ du = -(du ∧ dT) on the sorted basis
        let w = transitivity_wedge(&du, &dt).unwrap();
        assert_eq!(w.coefficient(&[0, 2]), -Poly::one(&c));
        let du12 = du.wedge(&DiffForm::dvar(&c, 1)).unwrap();
        let w = transitivity_wedge(&du12, &dt).unwrap();
        assert_eq!(w.coefficient(&[0, 1, 2]), Poly::one(&c));
        let w = transitivity_wedge(&DiffForm::function(Poly::one(&c)), &dt).unwrap();
        assert_eq!(w, dt);
        assert!(transitivity_wedge(&dt, &du).is_err());
    }

    #[test]
    fn display() {
        let c = ctx();
        let x = Poly::var(&c, 0);
        let f = DiffForm::basis(&c, &[0, 1], x.clone())
            .add(&DiffForm::zero(&c, 2))
            .unwrap();
        assert_eq!(f.to_string(), "x*d(x)/\\d(y)");
        let g = DiffForm::basis(&c, &[0], &x + &Poly::one(&c));
        assert_eq!(g.to_string(), "(x + 1)*d(x)");
        assert_eq!(DiffForm::basis(&c, &[1], -Poly::from_i64(&c, 2)).to_string(), "-2*d(y)");
    }
}
