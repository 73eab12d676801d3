use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groebner::divide;
use crate::linalg::{self, Matrix};
use crate::residue::{residue_of_function, DenomTuple};
use crate::ring::{Coeff, Ctx, Monomial, MonomialOrder, Poly, RingContext};

/// Divided differences of an absolute zero-dimensional presentation, the
/// Bezoutian `Δ = det h`, its class `Δ̄` in `C ⊗ C`, and the resulting
/// trace generator `λ`.
#[derive(Clone, Debug)]
pub struct TatePresentation {
    denoms: DenomTuple,
    /// Ring `k[X_1..X_n, Y_1..Y_n]`.
    pair_ctx: Ctx,
    pub h: Matrix<Poly>,
    pub delta: Poly,
    pub delta_bar: Poly,
    /// `D[i][j]`: coefficient of `b_i(X) b_j(Y)` in `Δ̄`.
    pub delta_coords: Matrix<Coeff>,
    pub jac_class: Poly,
    /// `m(Δ̄)`: `Δ̄` with `X, Y ↦ T`, reduced in `C`.
    pub multiplied: Poly,
    /// `λ(b_i)` over the standard basis.
    pub lambda: Vec<Coeff>,
    /// Gröbner bases of both copies of the ideal, joined.
    union: Vec<Poly>,
}

fn fresh_names(ctx: &Ctx, tag: &str) -> Vec<String> {
    ctx.vars()
        .iter()
        .map(|v| {
            let mut name = format!("{v}_{tag}");
            while ctx.var_index(&name).is_some() {
                name.push('_');
            }
            name
        })
        .collect()
}

impl TatePresentation {
    pub fn denoms(&self) -> &DenomTuple {
        &self.denoms
    }

    pub fn pair_ctx(&self) -> &Ctx {
        &self.pair_ctx
    }

    fn copy(&self, p: &Poly, offset: usize) -> Result<Poly> {
        let n = p.ctx().n_vars();
        let images = (0..n).map(|i| (i, Poly::var(&self.pair_ctx, offset + i))).collect();
        p.substitute(&images, &self.pair_ctx)
    }

    /// Normal form in `k[X, Y]` modulo both copies of the ideal.
    pub fn reduce_pair(&self, p: &Poly) -> Poly {
        divide(p, &self.union, &MonomialOrder::DegRevLex, false).1
    }

    /// True when `h` is a valid divided-difference matrix for the relations.
    pub fn is_divided_difference(&self, h: &Matrix<Poly>) -> Result<bool> {
        let n = self.denoms.ctx().n_vars();
        for (i, f) in self.denoms.denoms().iter().enumerate() {
            let lhs = &self.copy(f, 0)? - &self.copy(f, n)?;
            let mut rhs = Poly::zero(&self.pair_ctx);
            for j in 0..n {
                let diff = &Poly::var(&self.pair_ctx, j) - &Poly::var(&self.pair_ctx, n + j);
                rhs = &rhs + &(&h[i][j] * &diff);
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Δ̄` computed from another divided-difference matrix.
    pub fn delta_bar_from(&self, h: &Matrix<Poly>) -> Result<Poly> {
        if !self.is_divided_difference(h)? {
            return Err(Error::Internal("not a divided-difference matrix".into()));
        }
        Ok(self.reduce_pair(&linalg::det_poly(h, &self.pair_ctx)))
    }

    /// `f_i(X) - f_i(Y) = Σ_j h_ij (X_j - Y_j)` and `h_ij(X, X) = ∂f_i/∂X_j`.
    pub fn check_invariants(&self) -> Result<bool> {
        let ctx = self.denoms.ctx();
        let n = ctx.n_vars();
        let diag: BTreeMap<usize, Poly> = (0..2 * n)
            .map(|k| (k, Poly::var(ctx, k % n)))
            .collect();
        for (i, f) in self.denoms.denoms().iter().enumerate() {
            for j in 0..n {
                if self.h[i][j].substitute(&diag, ctx)? != f.derivative(j) {
                    return Ok(false);
                }
            }
        }
        Ok(self.is_divided_difference(&self.h)? && self.multiplied == self.jac_class)
    }
}

/// Builds the presentation by successive substitution `X_j → Y_j`.
pub fn tate_presentation(f: &[Poly]) -> Result<TatePresentation> {
    let denoms = DenomTuple::new(f.to_vec())?;
    let ctx = denoms.ctx().clone();
    if ctx.is_relative() {
        return Err(Error::InvalidContext("divided differences need an absolute ring".into()));
    }
    let q = denoms.quotient()?;
    let n = ctx.n_vars();
    let mut names = fresh_names(&ctx, "X");
    names.extend(fresh_names(&ctx, "Y"));
    let pair_ctx = RingContext::absolute(ctx.field().clone(), &names)?;
    let xs: Vec<Poly> = (0..n).map(|j| Poly::var(&pair_ctx, j)).collect();
    let ys: Vec<Poly> = (0..n).map(|j| Poly::var(&pair_ctx, n + j)).collect();

    let mut h = Vec::with_capacity(n);
    for fi in f {
        // stage j has Y_1..Y_j and X_{j+1}..X_n
        let stage = |j: usize| -> Result<Poly> {
            let images = (0..n).map(|k| (k, if k < j { ys[k].clone() } else { xs[k].clone() })).collect();
            fi.substitute(&images, &pair_ctx)
        };
        let mut row = Vec::with_capacity(n);
        let mut prev = stage(0)?;
        for j in 0..n {
            let next = stage(j + 1)?;
            let diff = &xs[j] - &ys[j];
            let (quot, rem) = divide(&(&prev - &next), &[diff], &MonomialOrder::Lex, true);
            if !rem.is_zero() {
                return Err(Error::NotDivisible("divided difference".into()));
            }
            row.push(quot.into_iter().next().expect("one quotient"));
            prev = next;
        }
        h.push(row);
    }
    let delta = linalg::det_poly(&h, &pair_ctx);

    let order = MonomialOrder::DegRevLex;
    let mut union = Vec::new();
    for g in q.gb().basis() {
        let gx = g.substitute(&(0..n).map(|k| (k, xs[k].clone())).collect(), &pair_ctx)?;
        let gy = g.substitute(&(0..n).map(|k| (k, ys[k].clone())).collect(), &pair_ctx)?;
        union.push(gx);
        union.push(gy);
    }
    let delta_bar = divide(&delta, &union, &order, false).1;

    let rank = q.rank();
    let field = ctx.field().clone();
    let mut delta_coords = vec![vec![field.zero(); rank]; rank];
    let index = |m: &[u32]| q.std_monomials().iter().position(|b| b.0 == m);
    for (m, c) in delta_bar.terms() {
        let (i, j) = match (index(&m.0[..n]), index(&m.0[n..])) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(Error::Internal("Δ̄ not supported on standard monomials".into())),
        };
        delta_coords[i][j] = c.clone();
    }

    let jac: Matrix<Poly> = f.iter().map(|fi| (0..n).map(|j| fi.derivative(j)).collect()).collect();
    let jac_class = q.gb().reduce(&linalg::det_poly(&jac, &ctx));
    let collapse: BTreeMap<usize, Poly> = (0..2 * n).map(|k| (k, Poly::var(&ctx, k % n))).collect();
    let multiplied = q.gb().reduce(&delta_bar.substitute(&collapse, &ctx)?);

    let one = index(&Monomial::one(n).0).ok_or(Error::NotZeroDimensional)?;
    let dt: Matrix<Coeff> = (0..rank).map(|j| (0..rank).map(|i| delta_coords[i][j].clone()).collect()).collect();
    let rhs: Vec<Coeff> = (0..rank).map(|j| if j == one { field.one() } else { field.zero() }).collect();
    let lambda = linalg::solve(&dt, &rhs, &field)
        .ok_or_else(|| Error::Internal("Bezoutian coefficient matrix is singular".into()))?;

    let pres = TatePresentation { denoms, pair_ctx, h, delta, delta_bar, delta_coords, jac_class, multiplied, lambda, union };
    if !pres.check_invariants()? {
        return Err(Error::Internal("divided-difference invariants failed".into()));
    }
    Ok(pres)
}

/// `λ(c)` from the Bezoutian.
pub fn tate_lambda(pres: &TatePresentation, c: &Poly) -> Result<Coeff> {
    let q = pres.denoms.quotient()?;
    if c.ctx() != q.ctx() {
        return Err(Error::ContextMismatch);
    }
    let mut acc = q.ctx().field().zero();
    for (x, l) in q.coordinates(c).iter().zip(&pres.lambda) {
        acc = &acc + &(&x.constant_coeff() * l);
    }
    Ok(acc)
}

/// `λ(m(Δ̄) · c)`, which equals the trace of multiplication by `c`.
pub fn trace_via_tate(pres: &TatePresentation, c: &Poly) -> Result<Coeff> {
    tate_lambda(pres, &(&pres.multiplied * c))
}

/// `λ(c) = Res[c · dT; f]` for any lift `c`.
pub fn lambda_via_residue(d: &DenomTuple, c: &Poly) -> Result<Coeff> {
    Ok(residue_of_function(c, d)?.constant_coeff())
}
