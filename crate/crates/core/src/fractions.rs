//! Generalized fractions `[ν; t_1^{β_1}, …, t_r^{β_r}]` representing local
//! cohomology classes supported on `V(t)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::groebner::normal_form;
use crate::linalg;
use crate::residue::{residue_symbol, DenomTuple};
use crate::ring::Poly;

#[derive(Clone, Debug)]
pub struct GenFraction {
    numerator: DiffForm,
    denoms: DenomTuple,
    exponents: Vec<u32>,
    powered: DenomTuple,
}

impl GenFraction {
    pub fn new(numerator: DiffForm, denoms: DenomTuple, exponents: Vec<u32>) -> Result<GenFraction> {
        let r = denoms.denoms().len();
        if exponents.len() != r {
            return Err(Error::LengthMismatch { expected: r, got: exponents.len() });
        }
        if exponents.iter().any(|&b| b == 0) {
            return Err(Error::DegreeMismatch("fraction exponents must be positive".into()));
        }
        if numerator.ctx() != denoms.ctx() {
            return Err(Error::ContextMismatch);
        }
        if numerator.degree() + 1 < r || numerator.degree() > r {
            return Err(Error::DegreeMismatch(format!(
                "numerator of degree {} over {r} denominators",
                numerator.degree()
            )));
        }
        let powered = denoms.powered(&exponents)?;
        Ok(GenFraction { numerator, denoms, exponents, powered })
    }

    /// Convenience constructor from raw denominators.
    pub fn from_parts(numerator: DiffForm, denoms: Vec<Poly>, exponents: Vec<u32>) -> Result<GenFraction> {
        GenFraction::new(numerator, DenomTuple::new(denoms)?, exponents)
    }

    pub fn numerator(&self) -> &DiffForm {
        &self.numerator
    }

    pub fn denoms(&self) -> &DenomTuple {
        &self.denoms
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `(t_1^{β_1}, …, t_r^{β_r})`.
    pub fn powered_denoms(&self) -> &DenomTuple {
        &self.powered
    }

    fn rank(&self) -> usize {
        self.denoms.denoms().len()
    }

    fn with_numerator(&self, numerator: DiffForm) -> GenFraction {
        GenFraction { numerator, ..self.clone() }
    }

    /// The fraction with numerator multiplied by `g`.
    pub fn scale(&self, g: &Poly) -> GenFraction {
        self.with_numerator(self.numerator.scale(g))
    }
}

fn require_top(fr: &GenFraction) -> Result<()> {
    if fr.numerator.degree() != fr.rank() {
        return Err(Error::DegreeMismatch(format!(
            "expected a numerator of degree {}, got {}",
            fr.rank(),
            fr.numerator.degree()
        )));
    }
    Ok(())
}

/// True iff every numerator coefficient lies in `(t^β)`.
pub fn fraction_is_zero(fr: &GenFraction) -> Result<bool> {
    require_top(fr)?;
    let gb = fr.powered.gb();
    Ok(fr.numerator.components().values().all(|c| gb.contains(c)))
}

/// `[ν · Π t_i^{γ_i - β_i}; t^γ]`.
pub fn fraction_rescale(fr: &GenFraction, gamma: &[u32]) -> Result<GenFraction> {
    if gamma.len() != fr.rank() {
        return Err(Error::LengthMismatch { expected: fr.rank(), got: gamma.len() });
    }
    if gamma.iter().zip(&fr.exponents).any(|(g, b)| g < b) {
        return Err(Error::NotDominating);
    }
    let ctx = fr.denoms.ctx();
    let mut factor = Poly::one(ctx);
    for ((t, g), b) in fr.denoms.denoms().iter().zip(gamma).zip(&fr.exponents) {
        factor = &factor * &t.pow(g - b);
    }
    GenFraction::new(fr.numerator.scale(&factor), fr.denoms.clone(), gamma.to_vec())
}

/// Rewrites `a` over the denominators of `b`, raised to a uniform power `k`
/// at least `b`'s exponents, via `s_i^k = Σ u_ij t_j^{β_j}`. `None` when some
/// `s_i` is not in the radical of `(t)`.
fn rewrite_over(a: &GenFraction, b: &GenFraction) -> Result<Option<(GenFraction, u32)>> {
    let q = a.powered.quotient()?;
    let start = b.exponents.iter().copied().max().unwrap_or(1);
    let stop = start + q.rank().max(1) as u32;
    let gb = a.powered.gb();
    for k in start..=stop {
        let mut rows = Vec::with_capacity(a.rank());
        let mut ok = true;
        for s in b.denoms.denoms() {
            let (rem, w) = normal_form(&s.pow(k), gb)?;
            if !rem.is_zero() {
                ok = false;
                break;
            }
            rows.push(w.cofactors);
        }
        if ok {
            let det = linalg::det_poly(&rows, a.denoms.ctx());
            let fr = GenFraction::new(a.numerator.scale(&det), b.denoms.clone(), vec![k; a.rank()])?;
            return Ok(Some((fr, k)));
        }
    }
    Ok(None)
}

/// Equality of classes. Identical denominator sequences are compared after
/// rescaling to the componentwise maximum; sequences with the same support
/// are first rewritten over a common sequence by the transformation law.
pub fn fraction_equal(a: &GenFraction, b: &GenFraction) -> Result<bool> {
    require_top(a)?;
    require_top(b)?;
    if a.denoms.ctx() != b.denoms.ctx() {
        return Err(Error::ContextMismatch);
    }
    if a.denoms.denoms() == b.denoms.denoms() {
        let gamma: Vec<u32> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| *x.max(y)).collect();
        let (ra, rb) = (fraction_rescale(a, &gamma)?, fraction_rescale(b, &gamma)?);
        let diff = ra.with_numerator(ra.numerator.sub(&rb.numerator)?);
        return fraction_is_zero(&diff);
    }
    // the supports must agree in both directions
    let back = rewrite_over(b, a)?;
    let Some((ra, k)) = rewrite_over(a, b)? else { return Err(Error::NoCommonRefinement) };
    if back.is_none() {
        return Err(Error::NoCommonRefinement);
    }
    let rb = fraction_rescale(b, &vec![k; b.rank()])?;
    let diff = ra.with_numerator(ra.numerator.sub(&rb.numerator)?);
    fraction_is_zero(&diff)
}

/// `d[η; t^k] = [dη; t^k] - Σ_j k_j [dt_j ∧ η; t^{k + e_j}]`, with zero
/// numerators dropped.
pub fn d_fraction(fr: &GenFraction) -> Result<Vec<GenFraction>> {
    let r = fr.rank();
    if fr.numerator.degree() + 1 != r {
        return Err(Error::DegreeMismatch(format!(
            "expected a numerator of degree {}, got {}",
            r - 1,
            fr.numerator.degree()
        )));
    }
    let ctx = fr.denoms.ctx();
    let mut out = Vec::new();
    let d_eta = fr.numerator.exterior_derivative();
    if !d_eta.is_zero() {
        out.push(fr.with_numerator(d_eta));
    }
    for (j, t) in fr.denoms.denoms().iter().enumerate() {
        let k = fr.exponents[j];
        let dt = DiffForm::function(t.clone()).exterior_derivative();
        let num = dt.wedge(&fr.numerator)?.scale(&Poly::from_i64(ctx, -(k as i64)));
        if num.is_zero() {
            continue;
        }
        let mut exps = fr.exponents.clone();
        exps[j] += 1;
        out.push(GenFraction::new(num, fr.denoms.clone(), exps)?);
    }
    Ok(out)
}

/// `Res[ν; t_1^{β_1}, …, t_r^{β_r}]`.
pub fn residue_of_fraction(fr: &GenFraction) -> Result<Poly> {
    require_top(fr)?;
    residue_symbol(&fr.numerator, &fr.powered)
}

impl fmt::Display for GenFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dens: Vec<String> = self
            .denoms
            .denoms()
            .iter()
            .zip(&self.exponents)
            .map(|(t, &b)| {
                let s = t.to_string();
                let s = if t.n_terms() > 1 || (b > 1 && !is_atom(&s)) { format!("({s})") } else { s };
                if b == 1 {
                    s
                } else {
                    format!("{s}^{b}")
                }
            })
            .collect();
        write!(f, "[{}; {}]", self.numerator, dens.join(", "))
    }
}

fn is_atom(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
