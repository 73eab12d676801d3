//! Traces of functions and of top differential forms along a finite flat
//! map `Spec k[u][T]/(f) → Spec k[u]` given by a complete intersection.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::residue::{residue_of_function, DenomTuple};
use crate::ring::{Ctx, Poly};

/// `S = k[u][T_1..T_d]/(f_1..f_d)`, certified finite free over `k[u]`.
#[derive(Clone, Debug)]
pub struct FinitePresentation {
    denoms: DenomTuple,
}

impl FinitePresentation {
    pub fn new(relations: Vec<Poly>) -> Result<FinitePresentation> {
        let denoms = DenomTuple::new(relations)?;
        denoms.quotient()?;
        Ok(FinitePresentation { denoms })
    }

    pub fn ctx(&self) -> &Ctx {
        self.denoms.ctx()
    }

    pub fn relations(&self) -> &[Poly] {
        self.denoms.denoms()
    }

    pub fn denoms(&self) -> &DenomTuple {
        &self.denoms
    }

    pub fn rank(&self) -> usize {
        self.denoms.quotient().map(|q| q.rank()).unwrap_or(0)
    }

    /// `df_1 ∧ … ∧ df_d`.
    pub fn relation_differential(&self) -> Result<DiffForm> {
        let ctx = self.ctx();
        let mut acc = DiffForm::function(Poly::one(ctx));
        for f in self.relations() {
            acc = acc.wedge(&DiffForm::function(f.clone()).exterior_derivative())?;
        }
        Ok(acc)
    }
}

/// Trace of multiplication by `s` on `S` over `k[u]`.
pub fn trace_function(pres: &FinitePresentation, s: &Poly) -> Result<Poly> {
    if s.ctx() != pres.ctx() {
        return Err(Error::ContextMismatch);
    }
    Ok(pres.denoms.quotient()?.canonical_trace(s))
}

/// The coefficients `x_K` in `df ∧ η = Σ_K x_K · dT_1 ∧ … ∧ dT_d ∧ du_K`,
/// keyed by the base index set `K`. Components missing part of the fiber
/// block are dropped.
pub fn klt_components(pres: &FinitePresentation, eta: &DiffForm) -> Result<BTreeMap<Vec<usize>, Poly>> {
    let ctx = pres.ctx();
    if eta.ctx() != ctx {
        return Err(Error::ContextMismatch);
    }
    let d = ctx.fiber_len();
    let w = pres.relation_differential()?.wedge(eta)?;
    let mut out = BTreeMap::new();
    for (idx, c) in w.components() {
        if !ctx.fiber_indices().all(|i| idx.contains(&i)) {
            continue;
        }
        let k: Vec<usize> = idx.iter().copied().filter(|&i| !ctx.is_fiber(i)).collect();
        // dT ∧ du_K = (-1)^{d|K|} du_K ∧ dT, and the sorted basis has du_K first
        let c = if (d * k.len()) % 2 == 1 { -c } else { c.clone() };
        out.insert(k, c);
    }
    Ok(out)
}

/// `∫(η) = Σ_K Res[x_K dT; f] du_K`, a form in the base differentials.
pub fn klt_trace(pres: &FinitePresentation, eta: &DiffForm) -> Result<DiffForm> {
    let ctx = pres.ctx();
    let n = ctx.base_len();
    if eta.degree() != n {
        return Err(Error::DegreeMismatch(format!(
            "expected a form of degree {n} (the base dimension), got {}",
            eta.degree()
        )));
    }
    let mut out = DiffForm::zero(ctx, n);
    for (k, x) in klt_components(pres, eta)? {
        let r = residue_of_function(&x, &pres.denoms)?;
        out = out.add(&DiffForm::basis(ctx, &k, r))?;
    }
    Ok(out)
}
