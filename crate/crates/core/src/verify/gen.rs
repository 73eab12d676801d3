use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::forms::DiffForm;
use crate::ring::{Coeff, CoeffField, Ctx, Monomial, Poly};

pub(crate) const FIBER_NAMES: [&str; 3] = ["x", "y", "z"];
pub(crate) const BASE_NAMES: [&str; 2] = ["u", "v"];

/// Seeded source of small random polynomials and forms.
pub(crate) struct Gen {
    pub rng: ChaCha8Rng,
    pub field: CoeffField,
}

impl Gen {
    pub fn small(&mut self) -> i64 {
        self.rng.gen_range(-3..=3)
    }

    pub fn coeff(&mut self) -> Coeff {
        let v = self.small();
        self.field.from_i64(v)
    }

    pub fn nonzero(&mut self) -> Coeff {
        loop {
            let c = self.coeff();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Random monomial of total degree at most `max_deg` in `vars`.
    fn monomial(&mut self, n: usize, vars: &[usize], max_deg: u32) -> Monomial {
        let mut m = Monomial::one(n);
        if vars.is_empty() {
            return m;
        }
        let deg = self.rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            let i = *vars.choose(&mut self.rng).expect("nonempty");
            m.0[i] += 1;
        }
        m
    }

    /// Sum of up to `terms` random terms of degree at most `max_deg` in
    /// `vars`.
    pub fn poly(&mut self, ctx: &Ctx, vars: &[usize], max_deg: u32, terms: usize) -> Poly {
        let k = self.rng.gen_range(0..=terms);
        let mut p = Poly::zero(ctx);
        for _ in 0..k {
            let m = self.monomial(ctx.n_vars(), vars, max_deg);
            let c = self.nonzero();
            p.add_term(m, c);
        }
        p
    }

    /// Like [`Gen::poly`] over the fiber variables, with each term also
    /// multiplied by a random base monomial of degree at most `base_deg`.
    pub fn mixed_poly(&mut self, ctx: &Ctx, fiber_deg: u32, base_deg: u32, terms: usize) -> Poly {
        let fiber: Vec<usize> = ctx.fiber_indices().collect();
        let base: Vec<usize> = ctx.base_indices().collect();
        let k = self.rng.gen_range(0..=terms);
        let mut p = Poly::zero(ctx);
        for _ in 0..k {
            let a = self.monomial(ctx.n_vars(), &fiber, fiber_deg);
            let b = self.monomial(ctx.n_vars(), &base, base_deg);
            let c = self.nonzero();
            p.add_term(a.mul(&b), c);
        }
        p
    }

    pub fn any_poly(&mut self, ctx: &Ctx, max_deg: u32, terms: usize) -> Poly {
        let all: Vec<usize> = (0..ctx.n_vars()).collect();
        self.poly(ctx, &all, max_deg, terms)
    }

    /// `f_i = T_i^{d_i} + g_i` with `min_deg ≤ d_i ≤ max_deg` and `g_i` of
    /// fiber degree below `d_i` (base degree at most 1 in the relative case).
    pub fn ci(&mut self, ctx: &Ctx, min_deg: u32, max_deg: u32) -> Vec<Poly> {
        self.ci_within(ctx, min_deg, max_deg, u32::MAX)
    }

    /// [`Gen::ci`] with `Π d_i ≤ rank` whenever `min_deg^r ≤ rank`.
    pub fn ci_within(&mut self, ctx: &Ctx, min_deg: u32, max_deg: u32, rank: u32) -> Vec<Poly> {
        let max_deg = max_deg.max(1);
        let min_deg = min_deg.clamp(1, max_deg);
        let fiber: Vec<usize> = ctx.fiber_indices().collect();
        let mut used = 1u32;
        let mut out = Vec::with_capacity(fiber.len());
        for (k, &i) in fiber.iter().enumerate() {
            let rest = min_deg.saturating_pow((fiber.len() - k - 1) as u32);
            let room = rank / used.saturating_mul(rest).max(1);
            let d = self.rng.gen_range(min_deg..=max_deg.min(room).max(min_deg));
            used = used.saturating_mul(d);
            let g = self.mixed_poly(ctx, d - 1, 1, 3);
            out.push(&Poly::var(ctx, i).pow(d) + &g);
        }
        out
    }

    /// Random form of degree `p` with coefficients of degree at most
    /// `max_deg`.
    pub fn form(&mut self, ctx: &Ctx, p: usize, max_deg: u32) -> DiffForm {
        let n = ctx.n_vars();
        let mut out = DiffForm::zero(ctx, p);
        let idx: Vec<usize> = (0..n).collect();
        for _ in 0..self.rng.gen_range(1..=3) {
            let mut pick = idx.clone();
            pick.shuffle(&mut self.rng);
            pick.truncate(p);
            let c = self.any_poly(ctx, max_deg, 3);
            out = out.add(&DiffForm::basis(ctx, &pick, c)).expect("same degree");
        }
        out
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }
}

/// Sign of a permutation given as an image list.
pub(crate) fn permutation_sign(p: &[usize]) -> bool {
    let mut neg = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                neg = !neg;
            }
        }
    }
    neg
}
