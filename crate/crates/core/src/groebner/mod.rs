//! Buchberger's algorithm with cofactor tracking, normal forms with
//! ideal-membership witnesses, and zero-dimensionality certificates.

mod quotient;

use std::collections::{BTreeMap, HashSet};

pub use quotient::QuotientAlgebra;

use crate::error::{Error, Result};
use crate::ring::{Coeff, Ctx, Monomial, MonomialOrder, Poly};

/// `target = Σ cofactors[j] · gens[j]`, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorWitness {
    pub target: Poly,
    pub cofactors: Vec<Poly>,
}

impl CofactorWitness {
    pub fn holds(&self, gens: &[Poly]) -> bool {
        combine(&self.cofactors, gens, self.target.ctx()) == self.target
    }
}

pub(crate) fn combine(cofactors: &[Poly], gens: &[Poly], ctx: &Ctx) -> Poly {
    let mut acc = Poly::zero(ctx);
    for (c, g) in cofactors.iter().zip(gens) {
        if !c.is_zero() {
            acc = &acc + &(c * g);
        }
    }
    acc
}

/// Reduced Gröbner basis of the ideal spanned by `gens`, together with the
/// transition matrix expressing every basis element through the generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ctx: Ctx,
    order: MonomialOrder,
    gens: Vec<Poly>,
    basis: Vec<Poly>,
    leading: Vec<Monomial>,
    transition: Vec<Vec<Poly>>,
}

/// Multivariate division of `p` by `divisors` under `order`. Returns the
/// quotients (empty unless `track`) and the fully reduced remainder.
pub(crate) fn divide(p: &Poly, divisors: &[Poly], order: &MonomialOrder, track: bool) -> (Vec<Poly>, Poly) {
    let ctx = p.ctx();
    let heads: Vec<(Monomial, Coeff)> = divisors
        .iter()
        .map(|d| {
            let (m, c) = d.leading_term(order).expect("zero divisor");
            (m.clone(), c.inv().expect("nonzero leading coefficient"))
        })
        .collect();
    let mut work: BTreeMap<Vec<i64>, (Monomial, Coeff)> =
        p.terms().map(|(m, c)| (order.key(m), (m.clone(), c.clone()))).collect();
    let mut rem = BTreeMap::new();
    let mut quots: Vec<BTreeMap<Monomial, Coeff>> = vec![BTreeMap::new(); if track { divisors.len() } else { 0 }];
    while let Some((_, (m, c))) = work.pop_last() {
        let hit = heads.iter().enumerate().find_map(|(k, (lm, inv))| lm.quotient_of(&m).map(|q| (k, q, inv)));
        match hit {
            Some((k, q, inv)) => {
                let coef = &c * inv;
                for (dm, dc) in divisors[k].terms() {
                    if *dm == heads[k].0 {
                        continue;
                    }
                    let nm = dm.mul(&q);
                    let val = -(&coef * dc);
                    let key = order.key(&nm);
                    match work.entry(key) {
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert((nm, val));
                        }
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let s = &o.get().1 + &val;
                            if s.is_zero() {
                                o.remove();
                            } else {
                                o.get_mut().1 = s;
                            }
                        }
                    }
                }
                if track {
                    let e = quots[k].entry(q).or_insert_with(|| ctx.field().zero());
                    *e = &*e + &coef;
                }
            }
            None => {
                rem.insert(m, c);
            }
        }
    }
    let quots = quots
        .into_iter()
        .map(|t| Poly::from_map_unchecked(ctx, t.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
        .collect();
    (quots, Poly::from_map_unchecked(ctx, rem))
}

struct Elem {
    poly: Poly,
    lm: Monomial,
    lc: Coeff,
    cof: Vec<Poly>,
}

fn sub_combination(base: &[Poly], quots: &[Poly], cofs: &[&[Poly]], ctx: &Ctx) -> Vec<Poly> {
    let mut out = base.to_vec();
    for (q, cof) in quots.iter().zip(cofs) {
        if q.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(cof.iter()) {
            if !c.is_zero() {
                *o = &*o - &(q * c);
            }
        }
    }
    debug_assert!(out.iter().all(|p| p.ctx() == ctx));
    out
}

impl GroebnerBasis {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn transition(&self) -> &[Vec<Poly>] {
        &self.transition
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.leading.iter().any(Monomial::is_one)
    }

    /// Checks every `basis[i] = Σ transition[i][j] · gens[j]`.
    pub fn verify_transitions(&self) -> bool {
        self.basis
            .iter()
            .zip(&self.transition)
            .all(|(g, cof)| combine(cof, &self.gens, &self.ctx) == *g)
    }

    /// Remainder of `p` modulo the basis, without cofactor bookkeeping.
    pub fn reduce(&self, p: &Poly) -> Poly {
        divide(p, &self.basis, &self.order, false).1
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        other.gens.iter().all(|g| self.contains(g)) && self.gens.iter().all(|g| other.contains(g))
    }
}

/// Reduced Gröbner basis of `gens` under `order`.
pub fn buchberger(gens: &[Poly], order: MonomialOrder) -> Result<GroebnerBasis> {
    let first = gens.first().ok_or_else(|| Error::EmptyInput("no generators".into()))?;
    let ctx = first.ctx().clone();
    for g in gens {
        first.check_ctx(g)?;
    }
    let m = gens.len();
    let unit = |j: usize| -> Vec<Poly> {
        (0..m).map(|k| if k == j { Poly::one(&ctx) } else { Poly::zero(&ctx) }).collect()
    };

    let mut elems: Vec<Elem> = Vec::new();
    let mut pending: BTreeMap<(u32, Vec<i64>, usize, usize), ()> = BTreeMap::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();

    let push = |elems: &mut Vec<Elem>,
                pending: &mut BTreeMap<(u32, Vec<i64>, usize, usize), ()>,
                pending_set: &mut HashSet<(usize, usize)>,
                e: Elem| {
        let j = elems.len();
        for (i, other) in elems.iter().enumerate() {
            let l = other.lm.lcm(&e.lm);
            pending.insert((l.degree(), order.key(&l), i, j), ());
            pending_set.insert((i, j));
        }
        elems.push(e);
    };

    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        // inter-reduce incoming generators against what we have so far
        let current: Vec<Poly> = elems.iter().map(|e| e.poly.clone()).collect();
        let (quots, rem) = if current.is_empty() {
            (Vec::new(), g.clone())
        } else {
            divide(g, &current, &order, true)
        };
        if rem.is_zero() {
            continue;
        }
        let cofs: Vec<&[Poly]> = elems.iter().map(|e| e.cof.as_slice()).collect();
        let cof = sub_combination(&unit(j), &quots, &cofs, &ctx);
        let (lm, lc) = rem.leading_term(&order).map(|(a, b)| (a.clone(), b.clone())).expect("nonzero");
        push(&mut elems, &mut pending, &mut pending_set, Elem { poly: rem, lm, lc, cof });
    }

    while let Some(((_, _, i, j), ())) = pending.pop_first() {
        pending_set.remove(&(i, j));
        let (li, lj) = (&elems[i].lm, &elems[j].lm);
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && elems[k].lm.divides(&l)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mi = li.quotient_of(&l).expect("lcm");
        let mj = lj.quotient_of(&l).expect("lcm");
        let ci = elems[i].lc.inv().expect("lc");
        let cj = -elems[j].lc.inv().expect("lc");
        let s = &elems[i].poly.mul_term(&mi, &ci) + &elems[j].poly.mul_term(&mj, &cj);
        let s_cof: Vec<Poly> = elems[i]
            .cof
            .iter()
            .zip(&elems[j].cof)
            .map(|(a, b)| &a.mul_term(&mi, &ci) + &b.mul_term(&mj, &cj))
            .collect();
        let current: Vec<Poly> = elems.iter().map(|e| e.poly.clone()).collect();
        let (quots, rem) = divide(&s, &current, &order, true);
        if rem.is_zero() {
            continue;
        }
        let cofs: Vec<&[Poly]> = elems.iter().map(|e| e.cof.as_slice()).collect();
        let cof = sub_combination(&s_cof, &quots, &cofs, &ctx);
        let (lm, lc) = rem.leading_term(&order).map(|(a, b)| (a.clone(), b.clone())).expect("nonzero");
        push(&mut elems, &mut pending, &mut pending_set, Elem { poly: rem, lm, lc, cof });
    }

    // minimalize
    let mut idx: Vec<usize> = (0..elems.len()).collect();
    idx.sort_by(|&a, &b| order.cmp(&elems[a].lm, &elems[b].lm).then(a.cmp(&b)));
    let mut keep: Vec<usize> = Vec::new();
    for &k in &idx {
        if !keep.iter().any(|&h| elems[h].lm.divides(&elems[k].lm)) {
            keep.push(k);
        }
    }

    // tail-reduce and normalize
    let mut basis = Vec::with_capacity(keep.len());
    let mut transition = Vec::with_capacity(keep.len());
    for (pos, &k) in keep.iter().enumerate() {
        let others: Vec<usize> = keep.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &h)| h).collect();
        let other_polys: Vec<Poly> = others.iter().map(|&h| elems[h].poly.clone()).collect();
        let (quots, rem) = if other_polys.is_empty() {
            (Vec::new(), elems[k].poly.clone())
        } else {
            divide(&elems[k].poly, &other_polys, &order, true)
        };
        let cofs: Vec<&[Poly]> = others.iter().map(|&h| elems[h].cof.as_slice()).collect();
        let cof = sub_combination(&elems[k].cof, &quots, &cofs, &ctx);
        let lc_inv = rem.leading_term(&order).expect("minimal element survives").1.inv().expect("lc");
        basis.push(rem.scale(&lc_inv));
        transition.push(cof.iter().map(|c| c.scale(&lc_inv)).collect::<Vec<_>>());
    }
    let leading = basis
        .iter()
        .map(|g: &Poly| g.leading_term(&order).expect("nonzero").0.clone())
        .collect();

    let gb = GroebnerBasis { ctx, order, gens: gens.to_vec(), basis, leading, transition };
    if !gb.verify_transitions() {
        return Err(Error::Internal("Gröbner transition identity failed".into()));
    }
    Ok(gb)
}

/// Remainder of `p` modulo `gb` and the witness for `p - remainder` in terms
/// of the original generators.
pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Result<(Poly, CofactorWitness)> {
    p.check_ctx(&gb.basis.first().cloned().unwrap_or_else(|| Poly::zero(&gb.ctx)))?;
    let (quots, rem) = divide(p, &gb.basis, &gb.order, true);
    let zero = vec![Poly::zero(&gb.ctx); gb.gens.len()];
    let cofs: Vec<&[Poly]> = gb.transition.iter().map(Vec::as_slice).collect();
    let neg = sub_combination(&zero, &quots, &cofs, &gb.ctx);
    let cofactors: Vec<Poly> = neg.iter().map(|c| -c).collect();
    let witness = CofactorWitness { target: p - &rem, cofactors };
    if !witness.holds(&gb.gens) {
        return Err(Error::Internal("normal-form witness failed".into()));
    }
    Ok((rem, witness))
}

/// For each fiber variable, the smallest `e` with `x^e` a leading monomial
/// of the basis (a leading monomial `1` gives `e = 0`). `None` when some
/// fiber variable has no pure-power leading monomial.
pub fn certify_zero_dimensional(gb: &GroebnerBasis) -> Option<BTreeMap<usize, u32>> {
    let ctx = &gb.ctx;
    let mut out = BTreeMap::new();
    if gb.is_unit_ideal() {
        for i in ctx.fiber_indices() {
            out.insert(i, 0);
        }
        return Some(out);
    }
    for lm in &gb.leading {
        if let Some((i, e)) = lm.pure_power() {
            if ctx.is_fiber(i) {
                let slot = out.entry(i).or_insert(e);
                *slot = (*slot).min(e);
            }
        }
    }
    if ctx.fiber_indices().all(|i| out.contains_key(&i)) {
        Some(out)
    } else {
        None
    }
}

/// Default order for a context: degrevlex for absolute rings, the block
/// order with the fiber block dominant for relative ones.
pub fn default_order(ctx: &Ctx) -> MonomialOrder {
    if ctx.is_relative() {
        MonomialOrder::Block { split: ctx.base_len() }
    } else {
        MonomialOrder::DegRevLex
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffField, RingContext};

    fn xy() -> (Ctx, Poly, Poly) {
        let c = RingContext::absolute(CoeffField::Rationals, &["x", "y"]).unwrap();
        let x = Poly::var(&c, 0);
        let y = Poly::var(&c, 1);
        (c, x, y)
    }

    #[test]
    fn one_step_example() {
        let (_, x, y) = xy();
        let gb = buchberger(&[&x.pow(2) + &y, y.clone()], MonomialOrder::DegRevLex).unwrap();
        let mut basis = gb.basis().to_vec();
        basis.sort_by_key(|p| p.to_string());
        assert_eq!(basis, vec![x.pow(2), y.clone()]);
        assert!(gb.verify_transitions());
    }

    #[test]
    fn principal_and_univariate() {
        let (_, x, _) = xy();
        let gb = buchberger(&[x.clone()], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb.basis(), &[x]);
        let c = RingContext::absolute(CoeffField::Rationals, &["T"]).unwrap();
        let t = Poly::var(&c, 0);
        let f = &t.pow(2) - &Poly::one(&c);
        let gb = buchberger(&[f.clone()], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb.basis(), &[f]);
    }

    #[test]
    fn normal_form_examples() {
        let c = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let y = Poly::var(&c, 0);
        let t = Poly::var(&c, 1);
        let gb = buchberger(&[&t.pow(2) - &y], default_order(&c)).unwrap();
        let (r, w) = normal_form(&t.pow(3), &gb).unwrap();
        assert_eq!(r, &y * &t);
        assert_eq!(w.cofactors, vec![t.clone()]);

        let (_, x, y) = xy();
        let gens = [&x.pow(2) + &y, y.clone()];
        let gb = buchberger(&gens, MonomialOrder::DegRevLex).unwrap();
        let (r, w) = normal_form(&y, &gb).unwrap();
        assert!(r.is_zero());
        assert_eq!(w.cofactors, vec![Poly::zero(y.ctx()), Poly::one(y.ctx())]);
        let (r, w) = normal_form(&x.pow(2), &gb).unwrap();
        assert!(r.is_zero());
        assert_eq!(w.cofactors, vec![Poly::one(y.ctx()), -Poly::one(y.ctx())]);
    }

    #[test]
    fn zero_dimensional_certificates() {
        let (c, x, y) = xy();
        let gb = buchberger(&[y.clone(), x.pow(2)], MonomialOrder::DegRevLex).unwrap();
        let cert = certify_zero_dimensional(&gb).unwrap();
        assert_eq!(cert.get(&0), Some(&2));
        assert_eq!(cert.get(&1), Some(&1));
        let gb = buchberger(&[&x * &y], MonomialOrder::DegRevLex).unwrap();
        assert!(certify_zero_dimensional(&gb).is_none());
        drop(c);

        let c = RingContext::relative(CoeffField::Rationals, &["y"], &["T"]).unwrap();
        let gb = buchberger(&[&Poly::var(&c, 1).pow(2) - &Poly::var(&c, 0)], default_order(&c)).unwrap();
        let cert = certify_zero_dimensional(&gb).unwrap();
        assert_eq!(cert.into_iter().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn membership_of_combinations() {
        let (c, x, y) = xy();
        let f1 = &(&x.pow(2) * &y) - &Poly::one(&c);
        let f2 = &(&x * &y.pow(2)) - &x;
        let gb = buchberger(&[f1.clone(), f2.clone()], MonomialOrder::DegRevLex).unwrap();
        let member = &(&(&x + &y) * &f1) + &(&y.pow(3) * &f2);
        assert!(gb.contains(&member));
        let (_, w) = normal_form(&member, &gb).unwrap();
        assert!(w.holds(&[f1, f2]));
        assert!(!gb.contains(&x));
    }
}
