//! Residue symbols `Res[ω; f_1, …, f_r]` for zero-dimensional denominator
//! tuples, absolute or relative to a polynomial base.

mod tate;

use std::sync::OnceLock;

pub use tate::{lambda_via_residue, tate_lambda, tate_presentation, trace_via_tate, TatePresentation};

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::groebner::{buchberger, certify_zero_dimensional, default_order, normal_form, GroebnerBasis, QuotientAlgebra};
use crate::linalg::{self, Matrix};
use crate::ring::{Coeff, Ctx, Monomial, MonomialOrder, Poly};

/// Denominators `f_1, …, f_r`, one per fiber variable, generating an ideal
/// certified zero-dimensional over the fiber block.
#[derive(Clone, Debug)]
pub struct DenomTuple {
    denoms: Vec<Poly>,
    gb: GroebnerBasis,
    quotient: OnceLock<std::result::Result<QuotientAlgebra, Error>>,
}

impl DenomTuple {
    pub fn new(denoms: Vec<Poly>) -> Result<DenomTuple> {
        let first = denoms.first().ok_or_else(|| Error::EmptyInput("no denominators".into()))?;
        let ctx = first.ctx().clone();
        for p in &denoms {
            first.check_ctx(p)?;
        }
        if denoms.len() != ctx.fiber_len() {
            return Err(Error::DegreeMismatch(format!(
                "{} denominators for {} fiber variables",
                denoms.len(),
                ctx.fiber_len()
            )));
        }
        let gb = buchberger(&denoms, default_order(&ctx))?;
        if certify_zero_dimensional(&gb).is_none() {
            return Err(Error::NotZeroDimensional);
        }
        Ok(DenomTuple { denoms, gb, quotient: OnceLock::new() })
    }

    pub fn ctx(&self) -> &Ctx {
        self.gb.ctx()
    }

    pub fn denoms(&self) -> &[Poly] {
        &self.denoms
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// The quotient algebra; fails with `NotCertifiedFree` in the relative
    /// case when some leading monomial involves a base variable.
    pub fn quotient(&self) -> Result<&QuotientAlgebra> {
        self.quotient
            .get_or_init(|| QuotientAlgebra::new(self.gb.clone()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The tuple `(f_1^{β_1}, …, f_r^{β_r})`.
    pub fn powered(&self, beta: &[u32]) -> Result<DenomTuple> {
        if beta.len() != self.denoms.len() {
            return Err(Error::LengthMismatch { expected: self.denoms.len(), got: beta.len() });
        }
        DenomTuple::new(self.denoms.iter().zip(beta).map(|(f, &b)| f.pow(b)).collect())
    }
}

/// `target_i = Σ_j u_ij · source_j`, with `det_u = det(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformWitness {
    pub u: Matrix<Poly>,
    pub det_u: Poly,
    pub source: Vec<Poly>,
    pub target: Vec<Poly>,
}

impl TransformWitness {
    pub fn holds(&self) -> bool {
        match self.source.first() {
            Some(p) => self.relations_hold() && linalg::det_poly(&self.u, p.ctx()) == self.det_u,
            None => self.target.is_empty(),
        }
    }

    fn relations_hold(&self) -> bool {
        let Some(ctx) = self.source.first().map(|p| p.ctx().clone()) else {
            return self.target.is_empty();
        };
        self.u.len() == self.target.len()
            && self
                .u
                .iter()
                .zip(&self.target)
                .all(|(row, t)| crate::groebner::combine(row, &self.source, &ctx) == *t)
    }
}

/// Coefficient of `T^{α-1}` in `g` for `ω = g · dT_1 ∧ … ∧ dT_r`, as a
/// base-only polynomial.
pub fn residue_monomial(omega: &DiffForm, alpha: &[u32]) -> Result<Poly> {
    let ctx = omega.ctx().clone();
    if alpha.len() != ctx.fiber_len() {
        return Err(Error::LengthMismatch { expected: ctx.fiber_len(), got: alpha.len() });
    }
    if alpha.iter().any(|&a| a == 0) {
        return Err(Error::DegreeMismatch("exponents must be positive".into()));
    }
    let mut g = omega.fiber_top_coefficient()?;
    for (i, &a) in ctx.fiber_indices().zip(alpha) {
        g = g.coefficient_in_var(i, a - 1);
    }
    Ok(g)
}

/// Expresses a monic eliminant in each fiber variable through the
/// denominators, using the Gröbner transition data.
pub fn to_pure_powers(d: &DenomTuple) -> Result<TransformWitness> {
    let q = d.quotient()?;
    let ctx = d.ctx().clone();
    let mut u = Vec::with_capacity(d.denoms.len());
    let mut target = Vec::with_capacity(d.denoms.len());
    for i in ctx.fiber_indices() {
        let p = q.eliminant(i);
        let (rem, w) = normal_form(&p, &d.gb)?;
        if !rem.is_zero() {
            return Err(Error::Internal(format!("eliminant {p} is not in the ideal")));
        }
        u.push(koszul_reduce(w.cofactors, &d.denoms, &d.gb.order()));
        target.push(p);
    }
    let det_u = linalg::det_poly(&u, &ctx);
    let w = TransformWitness { u, det_u, source: d.denoms.clone(), target };
    if !w.relations_hold() {
        return Err(Error::Internal("transformation witness failed".into()));
    }
    Ok(w)
}

/// Shrinks a cofactor row of `Σ u_j f_j` with the Koszul syzygies: each
/// `u_j` is reduced modulo every later `f_k`, the quotient moving to `u_k`.
fn koszul_reduce(mut row: Vec<Poly>, f: &[Poly], order: &MonomialOrder) -> Vec<Poly> {
    for j in 0..row.len() {
        for k in j + 1..row.len() {
            let (q, r) = divide_by(&row[j], &f[k], order);
            if !q.is_zero() {
                row[j] = r;
                row[k] = &row[k] + &(&q * &f[j]);
            }
        }
    }
    row
}

/// `p = q·f + r` with no term of `r` divisible by the leading monomial of `f`.
fn divide_by(p: &Poly, f: &Poly, order: &MonomialOrder) -> (Poly, Poly) {
    let ctx = p.ctx();
    let Some((lm, lc)) = f.leading_term(order) else {
        return (Poly::zero(ctx), p.clone());
    };
    let lm = lm.clone();
    let inv = lc.inv().expect("leading coefficient is nonzero");
    let mut q = Poly::zero(ctx);
    let mut r = p.clone();
    loop {
        let hit = r
            .terms()
            .filter(|(m, _)| lm.divides(m))
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (lm.quotient_of(m).expect("divides"), c * &inv));
        let Some((s, k)) = hit else { break };
        r = &r - &f.mul_term(&s, &k);
        q.add_term(s, k);
    }
    (q, r)
}

/// Remainder of `h` on division by `p`, monic of degree `deg` in variable `i`.
fn reduce_monic(h: &Poly, p: &Poly, i: usize, deg: u32) -> Poly {
    let ctx = h.ctx();
    let mut h = h.clone();
    while let Some(e) = h.degree_in(i).filter(|&e| e >= deg) {
        let lead = h.coefficient_in_var(i, e);
        let shift = Monomial::var(ctx.n_vars(), i);
        let mut m = Monomial::one(ctx.n_vars());
        for _ in 0..(e - deg) {
            m = m.mul(&shift);
        }
        h = &h - &(&lead * &p.mul_term(&m, &ctx.field().one()));
    }
    h
}

/// Iterated univariate residues against monic eliminants, last fiber
/// variable first.
pub(crate) fn iterated_residue(numerator: &Poly, eliminants: &[Poly]) -> Poly {
    let ctx = numerator.ctx().clone();
    let fiber: Vec<usize> = ctx.fiber_indices().collect();
    let mut h = numerator.clone();
    for (k, &i) in fiber.iter().enumerate().rev() {
        let p = &eliminants[k];
        let deg = p.degree_in(i).unwrap_or(0);
        if deg == 0 {
            return Poly::zero(&ctx);
        }
        let r = reduce_monic(&h, p, i, deg);
        h = r.coefficient_in_var(i, deg - 1);
    }
    h
}

/// `Res[ω; d]` for a top fiber form `ω`.
pub fn residue_symbol(omega: &DiffForm, d: &DenomTuple) -> Result<Poly> {
    if omega.ctx() != d.ctx() {
        return Err(Error::ContextMismatch);
    }
    let g = omega.fiber_top_coefficient()?;
    let w = to_pure_powers(d)?;
    Ok(iterated_residue(&(&w.det_u * &g), &w.target))
}

/// `Res[g · dT_1 ∧ … ∧ dT_r; d]`.
pub fn residue_of_function(g: &Poly, d: &DenomTuple) -> Result<Poly> {
    residue_symbol(&DiffForm::fiber_top(g.clone()), d)
}

/// Gram matrix `G_ij = Res[b_i b_j dT; d]` over the standard basis, with its
/// determinant. Absolute case only.
pub fn residue_pairing_gram(d: &DenomTuple) -> Result<(Matrix<Coeff>, Coeff)> {
    let ctx = d.ctx().clone();
    if ctx.is_relative() {
        return Err(Error::InvalidContext("the residue pairing needs an absolute ring".into()));
    }
    let q = d.quotient()?;
    let w = to_pure_powers(d)?;
    let n = q.rank();
    let mut g = vec![vec![ctx.field().zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let b = &q.basis_element(i) * &q.basis_element(j);
            let v = iterated_residue(&(&w.det_u * &b), &w.target).constant_coeff();
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    let det = linalg::det(&g, ctx.field());
    Ok((g, det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffField, RingContext};

    fn abs(vars: &[&str]) -> Ctx {
        RingContext::absolute(CoeffField::Rationals, vars).unwrap()
    }

    fn q(ctx: &Ctx, n: i64, d: i64) -> Poly {
        Poly::constant(ctx, ctx.field().from_ratio(&n.into(), &d.into()).unwrap())
    }

    #[test]
    fn monomial_residues() {
        let c = abs(&["x", "y"]);
        let top = DiffForm::fiber_top(Poly::one(&c));
        assert_eq!(residue_monomial(&top, &[1, 1]).unwrap(), Poly::one(&c));
        assert!(residue_monomial(&top, &[2, 1]).unwrap().is_zero());
        let g = &Poly::from_i64(&c, 3) * &(&Poly::var(&c, 0) * &Poly::var(&c, 1).pow(2));
        assert_eq!(residue_monomial(&DiffForm::fiber_top(g), &[2, 3]).unwrap(), Poly::from_i64(&c, 3));
    }

    #[test]
    fn pure_power_witnesses() {
        let c = abs(&["x", "y"]);
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let w = to_pure_powers(&DenomTuple::new(vec![&x.pow(2) + &y, y.clone()]).unwrap()).unwrap();
        assert_eq!(w.target, vec![x.pow(2), y.clone()]);
        assert_eq!(w.det_u, Poly::one(&c));
        let w = to_pure_powers(&DenomTuple::new(vec![&x + &y, &x - &y]).unwrap()).unwrap();
        assert_eq!(w.u[0], vec![q(&c, 1, 2), q(&c, 1, 2)]);
        assert_eq!(w.u[1], vec![q(&c, 1, 2), q(&c, -1, 2)]);
        assert_eq!(w.det_u, q(&c, -1, 2));
        let cx = abs(&["x"]);
        let w = to_pure_powers(&DenomTuple::new(vec![Poly::var(&cx, 0)]).unwrap()).unwrap();
        assert_eq!(w.det_u, Poly::one(&cx));
    }

    #[test]
    fn residue_examples() {
        let c = abs(&["x", "y"]);
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let one = Poly::one(&c);
        assert_eq!(residue_of_function(&one, &DenomTuple::new(vec![x.clone(), y.clone()]).unwrap()).unwrap(), one);
        let d = DenomTuple::new(vec![&x + &y, &x - &y]).unwrap();
        assert_eq!(residue_of_function(&one, &d).unwrap(), q(&c, -1, 2));

        let ct = abs(&["T"]);
        let t = Poly::var(&ct, 0);
        let d = DenomTuple::new(vec![&t.pow(2) - &Poly::one(&ct)]).unwrap();
        assert_eq!(residue_of_function(&t, &d).unwrap(), Poly::one(&ct));
        assert_eq!(residue_of_function(&(&t + &t), &d).unwrap(), Poly::from_i64(&ct, 2));
        assert!(residue_of_function(&Poly::one(&ct), &d).unwrap().is_zero());

        let cr = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let y = Poly::var(&cr, 0);
        let t = Poly::var(&cr, 1);
        let d = DenomTuple::new(vec![&t.pow(2) - &y]).unwrap();
        assert_eq!(residue_of_function(&t, &d).unwrap(), Poly::one(&cr));
        assert!(residue_of_function(&Poly::one(&cr), &d).unwrap().is_zero());
        assert_eq!(residue_of_function(&t.pow(3), &d).unwrap(), y);
    }

    #[test]
    fn gram_examples() {
        let ct = abs(&["T"]);
        let t = Poly::var(&ct, 0);
        let f = CoeffField::Rationals;
        let (g, det) = residue_pairing_gram(&DenomTuple::new(vec![&t.pow(2) - &Poly::one(&ct)]).unwrap()).unwrap();
        assert_eq!(g, vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]);
        assert_eq!(det, f.from_i64(-1));
        let (g, _) = residue_pairing_gram(&DenomTuple::new(vec![t]).unwrap()).unwrap();
        assert_eq!(g, vec![vec![f.one()]]);
        let c = abs(&["x", "y"]);
        let x = Poly::var(&c, 0);
        let (g, _) = residue_pairing_gram(&DenomTuple::new(vec![x.pow(2), Poly::var(&c, 1)]).unwrap()).unwrap();
        assert_eq!(g, vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]);
    }

    #[test]
    fn unit_ideal_has_zero_residue() {
        let c = abs(&["T"]);
        let d = DenomTuple::new(vec![Poly::one(&c)]).unwrap();
        assert!(residue_of_function(&Poly::var(&c, 0), &d).unwrap().is_zero());
    }
}
