use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::{certify_zero_dimensional, GroebnerBasis};
use crate::linalg::{self, Matrix};
use crate::ring::{Coeff, Ctx, Monomial, Poly};

/// `k[u][T]/(f)` as a finite free module over the base ring `k[u]`, with the
/// standard monomials (in the fiber variables) as basis.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    std_monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    mult_matrices: Vec<Matrix<Poly>>,
}

impl QuotientAlgebra {
    pub fn new(gb: GroebnerBasis) -> Result<QuotientAlgebra> {
        let ctx = gb.ctx().clone();
        let exps = certify_zero_dimensional(&gb).ok_or(Error::NotZeroDimensional)?;
        if gb.leading_monomials().iter().any(|m| ctx.base_indices().any(|i| m.0[i] > 0)) {
            return Err(Error::NotCertifiedFree);
        }
        let n = ctx.n_vars();
        let fiber: Vec<usize> = ctx.fiber_indices().collect();
        let mut std_monomials = Vec::new();
        if !gb.is_unit_ideal() {
            // odometer over the box below the pure powers
            let mut e = vec![0u32; fiber.len()];
            'outer: loop {
                let mut m = vec![0u32; n];
                for (k, &i) in fiber.iter().enumerate() {
                    m[i] = e[k];
                }
                let m = Monomial(m);
                if !gb.leading_monomials().iter().any(|lm| lm.divides(&m)) {
                    std_monomials.push(m);
                }
                for k in 0..fiber.len() {
                    e[k] += 1;
                    if e[k] < exps[&fiber[k]] {
                        continue 'outer;
                    }
                    e[k] = 0;
                }
                break;
            }
        }
        let order = gb.order();
        std_monomials.sort_by(|a, b| order.cmp(a, b));
        let index = std_monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut q = QuotientAlgebra { gb, std_monomials, index, mult_matrices: Vec::new() };
        q.mult_matrices = fiber.iter().map(|&i| q.mult_matrix(&Poly::var(&ctx, i))).collect();
        for a in 0..q.mult_matrices.len() {
            for b in a + 1..q.mult_matrices.len() {
                let ab = linalg::mat_mul_poly(&q.mult_matrices[a], &q.mult_matrices[b], &ctx);
                let ba = linalg::mat_mul_poly(&q.mult_matrices[b], &q.mult_matrices[a], &ctx);
                if ab != ba {
                    return Err(Error::Internal("multiplication matrices do not commute".into()));
                }
            }
        }
        Ok(q)
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn ctx(&self) -> &Ctx {
        self.gb.ctx()
    }

    pub fn rank(&self) -> usize {
        self.std_monomials.len()
    }

    pub fn std_monomials(&self) -> &[Monomial] {
        &self.std_monomials
    }

    pub fn basis_element(&self, i: usize) -> Poly {
        let ctx = self.ctx();
        Poly::term(ctx, self.std_monomials[i].clone(), ctx.field().one())
    }

    /// Multiplication matrices of the fiber variables, in fiber order.
    pub fn mult_matrices(&self) -> &[Matrix<Poly>] {
        &self.mult_matrices
    }

    /// Coordinates of `p` on the standard basis, as base-ring polynomials
    /// (living in the same context).
    pub fn coordinates(&self, p: &Poly) -> Vec<Poly> {
        let ctx = self.ctx();
        let r = self.gb.reduce(p);
        let mut coords = vec![Poly::zero(ctx); self.rank()];
        for (m, c) in r.terms() {
            let mut fib = m.clone();
            let mut base = m.clone();
            for i in ctx.base_indices() {
                fib.0[i] = 0;
            }
            for i in ctx.fiber_indices() {
                base.0[i] = 0;
            }
            let k = self.index[&fib];
            coords[k].add_term(base, c.clone());
        }
        coords
    }

    pub fn element(&self, coords: &[Poly]) -> Poly {
        let mut acc = Poly::zero(self.ctx());
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &self.basis_element(i));
            }
        }
        acc
    }

    /// Matrix of multiplication by `c`; column `j` holds the coordinates of
    /// `c · b_j`.
    pub fn mult_matrix(&self, c: &Poly) -> Matrix<Poly> {
        let n = self.rank();
        let cols: Vec<Vec<Poly>> = (0..n).map(|j| self.coordinates(&(c * &self.basis_element(j)))).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Trace of multiplication by `c`, a base-only polynomial.
    pub fn canonical_trace(&self, c: &Poly) -> Poly {
        let mut acc = Poly::zero(self.ctx());
        for j in 0..self.rank() {
            let col = self.coordinates(&(c * &self.basis_element(j)));
            acc = &acc + &col[j];
        }
        acc
    }

    /// Minimal polynomial of `a` over the coefficient field (absolute case),
    /// by incremental elimination on the coordinate vectors of `1, a, a², …`.
    pub fn minimal_polynomial(&self, a: &Poly) -> Poly {
        let ctx = self.ctx();
        let field = ctx.field();
        let n = self.rank();
        // rows: (pivot, vector with pivot entry 1, combination of powers)
        let mut rows: Vec<(usize, Vec<Coeff>, Vec<Coeff>)> = Vec::new();
        let mut power = Poly::one(ctx);
        let mut k = 0usize;
        loop {
            let mut v: Vec<Coeff> = self.coordinates(&power).iter().map(Poly::constant_coeff).collect();
            let mut comb = vec![field.zero(); k + 1];
            comb[k] = field.one();
            for (p, row, rc) in &rows {
                if v[*p].is_zero() {
                    continue;
                }
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x - &(&f * y);
                }
                for (x, y) in comb.iter_mut().zip(rc) {
                    *x = &*x - &(&f * y);
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => {
                    let mut p = Poly::zero(ctx);
                    let mut pw = Poly::one(ctx);
                    for c in &comb {
                        p = &p + &pw.scale(c);
                        pw = &pw * a;
                    }
                    return p;
                }
                Some(p) => {
                    let inv = v[p].inv().expect("nonzero pivot");
                    let v: Vec<Coeff> = v.iter().map(|x| x * &inv).collect();
                    let comb: Vec<Coeff> = comb.iter().map(|x| x * &inv).collect();
                    rows.push((p, v, comb));
                }
            }
            debug_assert!(k <= n);
            power = self.gb.reduce(&(&power * a));
            k += 1;
        }
    }

    /// A monic polynomial in the fiber variable `var` alone (coefficients in
    /// the base) lying in the ideal: the minimal polynomial over a field, the
    /// characteristic polynomial of the multiplication matrix otherwise.
    pub fn eliminant(&self, var: usize) -> Poly {
        let ctx = self.ctx();
        let t = Poly::var(ctx, var);
        let n = self.rank();
        if n == 0 {
            return Poly::one(ctx);
        }
        if !ctx.is_relative() {
            return self.minimal_polynomial(&t);
        }
        let k = ctx.fiber_indices().position(|i| i == var).expect("fiber variable");
        let cp = linalg::charpoly(&self.mult_matrices[k], ctx);
        let mut p = Poly::zero(ctx);
        for (j, c) in cp.iter().enumerate() {
            p = &p + &(c * &t.pow((n - j) as u32));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{buchberger, default_order};
    use crate::ring::{CoeffField, MonomialOrder, RingContext};

    #[test]
    fn univariate_quotient() {
        let c = RingContext::absolute(CoeffField::Rationals, &["T"]).unwrap();
        let t = Poly::var(&c, 0);
        let f = &t.pow(2) - &Poly::one(&c);
        let q = QuotientAlgebra::new(buchberger(&[f.clone()], MonomialOrder::DegRevLex).unwrap()).unwrap();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.canonical_trace(&Poly::one(&c)), Poly::from_i64(&c, 2));
        assert!(q.canonical_trace(&t).is_zero());
        assert_eq!(q.eliminant(0), f);
    }

    #[test]
    fn relative_quotient() {
        let c = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let y = Poly::var(&c, 0);
        let t = Poly::var(&c, 1);
        let f = &t.pow(2) - &y;
        let q = QuotientAlgebra::new(buchberger(&[f.clone()], default_order(&c)).unwrap()).unwrap();
        assert_eq!(q.rank(), 2);
        let zero = Poly::zero(&c);
        let one = Poly::one(&c);
        assert_eq!(q.mult_matrices()[0], vec![vec![zero.clone(), y.clone()], vec![one, zero]]);
        assert_eq!(q.canonical_trace(&t.pow(2)), &y + &y);
        assert_eq!(q.eliminant(1), f);
    }

    #[test]
    fn minimal_polynomial_of_linear_system() {
        let c = RingContext::absolute(CoeffField::Rationals, &["x", "y"]).unwrap();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        let q = QuotientAlgebra::new(buchberger(&[&x + &y, &x - &y], MonomialOrder::DegRevLex).unwrap()).unwrap();
        assert_eq!(q.rank(), 1);
        assert_eq!(q.eliminant(0), x);
        let q = QuotientAlgebra::new(buchberger(&[&x.pow(2) + &y, y.clone()], MonomialOrder::DegRevLex).unwrap())
            .unwrap();
        assert_eq!(q.std_monomials().len(), 2);
        assert_eq!(q.eliminant(0), x.pow(2));
        assert_eq!(q.eliminant(1), y);
    }

    #[test]
    fn rejects_non_free_and_positive_dimensional() {
        let c = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let y = Poly::var(&c, 0);
        let t = Poly::var(&c, 1);
        let gb = buchberger(&[&(&y * &t) - &Poly::one(&c)], default_order(&c)).unwrap();
        assert!(matches!(QuotientAlgebra::new(gb), Err(Error::NotZeroDimensional)));
        let gb = buchberger(&[t.pow(2), &y * &t], default_order(&c)).unwrap();
        assert!(matches!(QuotientAlgebra::new(gb), Err(Error::NotCertifiedFree)));
    }
}
