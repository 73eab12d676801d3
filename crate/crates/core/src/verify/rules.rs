use std::collections::BTreeMap;

use rand::Rng;
use serde_json::json;

use super::{compare, gen::permutation_sign, trial_gen, Gen, InstanceSpec, Outcome, Rule, BASE_NAMES, FIBER_NAMES};
use crate::error::{Error, Result};
use crate::finite_trace::{klt_trace, trace_function, FinitePresentation};
use crate::forms::{transitivity_wedge, DiffForm};
use crate::fractions::{d_fraction, fraction_equal, fraction_is_zero, fraction_rescale, residue_of_fraction, GenFraction};
use crate::groebner::combine;
use crate::linalg::{self, Matrix};
use crate::projective::{class_is_zero, coboundary, cohomology_dim, fraction_to_cech_class, pn_integral};
use crate::residue::{
    residue_monomial, residue_of_function, residue_pairing_gram, residue_symbol, tate_lambda, tate_presentation,
    trace_via_tate, DenomTuple,
};
use crate::ring::{Coeff, Ctx, Poly, RingContext};

const RETRIES: usize = 8;

pub(crate) fn trial_count(rule: Rule, trials: u64, spec: &InstanceSpec) -> u64 {
    match rule {
        Rule::R7 => r7_cases(spec.n).len() as u64,
        Rule::Cech => 1 + cech_cases().len() as u64,
        _ => trials,
    }
}

pub(crate) fn run_trial(rule: Rule, spec: &InstanceSpec, trial: u64) -> Outcome {
    let mut g = trial_gen(rule, spec, trial);
    let res = match rule {
        Rule::R1 => r1(&mut g, spec),
        Rule::R2 => r2(&mut g, spec),
        Rule::R3 => r3(&mut g, spec),
        Rule::R4 => r4(&mut g, spec),
        Rule::R5 => r5(&mut g, spec),
        Rule::R6 => r6(&mut g, spec),
        Rule::R7 => r7(&mut g, spec, trial),
        Rule::R8 => r8(&mut g, spec),
        Rule::R9 => r9(&mut g, spec),
        Rule::R10 => r10(&mut g, spec),
        Rule::Jacobian => jacobian_rule(&mut g, spec),
        Rule::Tate => tate(&mut g, spec),
        Rule::Pairing => pairing(&mut g, spec),
        Rule::Sum => sum(&mut g, spec),
        Rule::Cech => cech(spec, trial),
    };
    let replay = json!({ "rule": rule.name(), "trial": trial, "spec": spec });
    match res {
        Ok(Outcome::Fail { instance, lhs, rhs }) => {
            Outcome::Fail { instance: json!({ "replay": replay, "data": instance }), lhs, rhs }
        }
        Ok(o) => o,
        Err(e) => Outcome::Fail {
            instance: json!({ "replay": replay }),
            lhs: format!("error {}: {e}", e.code()),
            rhs: String::new(),
        },
    }
}

fn ctx_for(spec: &InstanceSpec, n: usize, m: usize) -> Result<Ctx> {
    RingContext::relative(spec.field.clone(), &BASE_NAMES[..m], &FIBER_NAMES[..n])
}

/// Quotient rank bound for generated tuples.
fn rank_budget(ctx: &Ctx) -> u32 {
    match (ctx.base_len(), ctx.fiber_len()) {
        (0, _) => 16,
        (1, f) if f <= 2 => 8,
        _ => 4,
    }
}

fn ci(g: &mut Gen, ctx: &Ctx, min_deg: u32, max_deg: u32) -> Vec<Poly> {
    g.ci_within(ctx, min_deg, max_deg, rank_budget(ctx))
}

/// Degree bound keeping quotient ranks small for three fiber variables.
fn cap(spec: &InstanceSpec, n: usize) -> u32 {
    if n >= 3 {
        spec.degree.min(2)
    } else {
        spec.degree
    }
}

fn strs(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(Poly::to_string).collect()
}

/// A denominator tuple whose quotient is certified finite free, or `None`.
fn certified(ps: Vec<Poly>) -> Option<DenomTuple> {
    let d = DenomTuple::new(ps).ok()?;
    d.quotient().ok()?;
    Some(d)
}

/// `det(∂f_i/∂T_j)` over the fiber variables.
pub(crate) fn jacobian(f: &[Poly]) -> Poly {
    let ctx = f[0].ctx().clone();
    let m: Matrix<Poly> = f.iter().map(|fi| ctx.fiber_indices().map(|j| fi.derivative(j)).collect()).collect();
    linalg::det_poly(&m, &ctx)
}

fn lift(ps: &[Poly], target: &Ctx) -> Result<Vec<Poly>> {
    ps.iter().map(|p| p.to_context(target)).collect()
}

fn constant(ctx: &Ctx, v: i64) -> Poly {
    Poly::from_i64(ctx, v)
}

/// Transformation law with a random polynomial matrix, plus alternation.
fn r1(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n;
    let ctx = ctx_for(spec, n, spec.m)?;
    let dmax = cap(spec, n).min(3);
    let all: Vec<usize> = if n >= 3 { ctx.fiber_indices().collect() } else { (0..ctx.n_vars()).collect() };
    for _ in 0..RETRIES {
        let t = ci(g, &ctx, 1, dmax);
        let mut u: Matrix<Poly> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let e = if i == j {
                    let c = g.nonzero();
                    &Poly::constant(&ctx, c) + &g.poly(&ctx, &all, 1, 1)
                } else {
                    g.poly(&ctx, &all, 1, 2)
                };
                row.push(e);
            }
            u.push(row);
        }
        let s: Vec<Poly> = u.iter().map(|row| combine(row, &t, &ctx)).collect();
        let Some(ds) = certified(s.clone()) else { continue };
        if ds.quotient()?.rank() > rank_budget(&ctx) as usize {
            continue;
        }
        let dt = DenomTuple::new(t.clone())?;
        let num = g.mixed_poly(&ctx, dmax, 1, 3);
        let det = linalg::det_poly(&u, &ctx);
        let lhs = residue_of_function(&num, &dt)?;
        let rhs = residue_of_function(&(&det * &num), &ds)?;

        let perm = g.permutation(n);
        let tp: Vec<Poly> = perm.iter().map(|&i| t[i].clone()).collect();
        let alt = residue_of_function(&num, &DenomTuple::new(tp)?)?;
        let expected = if permutation_sign(&perm) { -lhs.clone() } else { lhs.clone() };

        let instance = json!({
            "ring": ctx.to_string(), "t": strs(&t), "s": strs(&s), "numerator": num.to_string(),
            "det_u": det.to_string(), "permutation": perm,
        });
        return Ok(compare(instance, format!("{lhs}; {alt}"), format!("{rhs}; {expected}")));
    }
    Ok(Outcome::Skip)
}

/// Split cover `X × {1..k}` cut out by `q(e) = Π (e - i)`.
fn r2(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n.min(2);
    let ctx = ctx_for(spec, n, spec.m)?;
    let k = g.rng.gen_range(2..=3i64);
    if spec.field.characteristic() != 0 && spec.field.characteristic() <= k as u64 {
        return Ok(Outcome::Skip);
    }
    let mut fiber = vec!["e"];
    fiber.extend(&FIBER_NAMES[..n]);
    let cover = RingContext::relative(spec.field.clone(), &BASE_NAMES[..spec.m], &fiber)?;
    let ei = cover.var_index("e").expect("declared");
    let e = Poly::var(&cover, ei);
    let dmax = cap(spec, n);

    let t = g.ci_within(&ctx, 1, dmax, rank_budget(&ctx) / 2);
    let dt = DenomTuple::new(t.clone())?;
    let mut q = Poly::one(&cover);
    for i in 1..=k {
        q = &q * &(&e - &constant(&cover, i));
    }
    let mut dens = vec![q.clone()];
    dens.extend(lift(&t, &cover)?);
    let dc = DenomTuple::new(dens)?;
    let dq = DiffForm::function(q.clone()).exterior_derivative();
    let fiber_x: Vec<usize> = cover.fiber_indices().filter(|&i| i != ei).collect();

    // pulled-back form: k copies of the residue
    let num = g.mixed_poly(&ctx, dmax, 1, 3);
    let omega = DiffForm::basis(&cover, &fiber_x, num.to_context(&cover)?);
    let lhs = residue_symbol(&dq.wedge(&omega)?, &dc)?;
    let rhs = (&constant(&ctx, k) * &residue_of_function(&num, &dt)?).to_context(&cover)?;

    // sheet-dependent form: sum over the sheets
    let h = g.mixed_poly(&ctx, dmax, 1, 3).to_context(&cover)?;
    let ge = &num.to_context(&cover)? + &(&e * &h);
    let lhs2 = residue_symbol(&dq.wedge(&DiffForm::basis(&cover, &fiber_x, ge.clone()))?, &dc)?;
    let mut rhs2 = Poly::zero(&ctx);
    for i in 1..=k {
        let img = BTreeMap::from([(ei, constant(&cover, i))]);
        let gi = ge.substitute(&img, &cover)?.to_context(&ctx)?;
        rhs2 = &rhs2 + &residue_of_function(&gi, &dt)?;
    }
    let rhs2 = rhs2.to_context(&cover)?;

    let instance = json!({
        "ring": cover.to_string(), "t": strs(&t), "sheets": k,
        "numerator": num.to_string(), "sheet_numerator": ge.to_string(),
    });
    Ok(compare(instance, format!("{lhs}; {lhs2}"), format!("{rhs}; {rhs2}")))
}

/// Graph immersion `X → P = X × A^1`, `w = h(x)`.
fn r3(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n.min(2);
    let x_ctx = ctx_for(spec, n, spec.m)?;
    let mut fiber = vec!["w"];
    fiber.extend(&FIBER_NAMES[..n]);
    let p_ctx = RingContext::relative(spec.field.clone(), &BASE_NAMES[..spec.m], &fiber)?;
    let wi = p_ctx.var_index("w").expect("declared");
    let w = Poly::var(&p_ctx, wi);
    let base: Vec<usize> = x_ctx.base_indices().collect();
    let p_fiber: Vec<usize> = p_ctx.fiber_indices().collect();
    let dmax = cap(spec, n);

    for _ in 0..RETRIES {
        let t = ci(g, &x_ctx, 1, dmax);
        let h = &g.mixed_poly(&x_ctx, 2, 0, 3) + &g.poly(&x_ctx, &base, 1, 1);
        let s = &w - &h.to_context(&p_ctx)?;
        let mut dens = vec![s.clone()];
        for tj in &t {
            let r = g.poly(&p_ctx, &p_fiber, 1, 2);
            dens.push(&tj.to_context(&p_ctx)? + &(&s * &r));
        }
        let Some(dp) = certified(dens.clone()) else { continue };
        let num = g.mixed_poly(&p_ctx, 2, 1, 4);

        let restricted = num.substitute(&BTreeMap::from([(wi, h.to_context(&p_ctx)?)]), &p_ctx)?.to_context(&x_ctx)?;
        let lhs = residue_of_function(&restricted, &DenomTuple::new(t.clone())?)?;
        let rhs = residue_of_function(&num, &dp)?.to_context(&x_ctx)?;
        let instance = json!({
            "ring": p_ctx.to_string(), "t_x": strs(&t), "h": h.to_string(),
            "denoms": strs(&dens), "numerator": num.to_string(),
        });
        return Ok(compare(instance, lhs, rhs));
    }
    Ok(Outcome::Skip)
}

/// Tower `k[u][x] → k[u] → k`: iterated residue against the wedge residue.
fn r4(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let e = spec.n.min(2);
    let rel = ctx_for(spec, e, 1)?;
    let base = rel.base_ring();
    let flat = rel.flattened();
    let dmax = cap(spec, e);

    let t = ci(g, &rel, 1, dmax);
    let num = g.mixed_poly(&rel, dmax, 1, 3);
    let d = g.rng.gen_range(1..=3u32);
    let s = &Poly::var(&base, 0).pow(d) + &g.poly(&base, &[0], d - 1, 2);
    let a = &g.poly(&base, &[0], 2, 2) + &Poly::constant(&base, g.nonzero());

    let inner = residue_of_function(&num, &DenomTuple::new(t.clone())?)?.to_context(&base)?;
    let lhs = residue_of_function(&(&inner * &a), &DenomTuple::new(vec![s.clone()])?)?;

    let nu = DiffForm::basis(&rel, &[0], a.to_context(&rel)?);
    let mu = DiffForm::fiber_top(num.clone());
    let omega = transitivity_wedge(&nu, &mu)?.to_context(&flat)?;
    let mut dens = lift(&t, &flat)?;
    dens.push(s.to_context(&flat)?);
    let rhs = residue_symbol(&omega, &DenomTuple::new(dens)?)?;

    let instance = json!({
        "ring": rel.to_string(), "t": strs(&t), "s": s.to_string(),
        "numerator": num.to_string(), "base_form": a.to_string(),
    });
    Ok(compare(instance, lhs.constant_coeff(), rhs.constant_coeff()))
}

const POINTS_1: [[i64; 1]; 4] = [[0], [1], [-1], [2]];
const POINTS_2: [[i64; 2]; 4] = [[0, 1], [1, -1], [-1, 2], [2, 0]];

/// Specialization of the base variables at fixed points.
fn r5(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let m = spec.m.clamp(1, 2);
    let n = spec.n;
    let ctx = ctx_for(spec, n, m)?;
    let abs = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..n])?;
    let dmax = cap(spec, n);
    let t = ci(g, &ctx, 1, dmax);
    let num = g.mixed_poly(&ctx, dmax, 2, 4);
    let generic = residue_of_function(&num, &DenomTuple::new(t.clone())?)?;

    let points: Vec<Vec<i64>> =
        if m == 1 { POINTS_1.iter().map(|p| p.to_vec()).collect() } else { POINTS_2.iter().map(|p| p.to_vec()).collect() };
    let (mut lhs, mut rhs, mut skipped) = (Vec::new(), Vec::new(), 0usize);
    for pt in &points {
        let mut img: BTreeMap<usize, Poly> =
            ctx.base_indices().zip(pt).map(|(i, &a)| (i, constant(&abs, a))).collect();
        for (k, i) in ctx.fiber_indices().enumerate() {
            img.insert(i, Poly::var(&abs, k));
        }
        let ta: Vec<Poly> = t.iter().map(|p| p.substitute(&img, &abs)).collect::<Result<_>>()?;
        let Some(da) = certified(ta) else {
            skipped += 1;
            continue;
        };
        lhs.push(residue_of_function(&num.substitute(&img, &abs)?, &da)?.constant_coeff().to_string());
        rhs.push(generic.substitute(&img, &abs)?.constant_coeff().to_string());
    }
    if points.len() - skipped < 3 {
        return Ok(Outcome::Skip);
    }
    let instance = json!({
        "ring": ctx.to_string(), "t": strs(&t), "numerator": num.to_string(),
        "points": points, "skipped_points": skipped,
    });
    Ok(compare(instance, lhs.join(", "), rhs.join(", ")))
}

/// Trace formula against the multiplication-matrix trace.
fn r6(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let ctx = ctx_for(spec, spec.n, spec.m)?;
    let dmax = cap(spec, spec.n);
    let f = ci(g, &ctx, 2, dmax);
    let d = DenomTuple::new(f.clone())?;
    let phi = g.mixed_poly(&ctx, dmax + 1, 1, 4);
    let lhs = residue_of_function(&(&phi * &jacobian(&f)), &d)?;
    let rhs = d.quotient()?.canonical_trace(&phi);
    let instance = json!({ "ring": ctx.to_string(), "f": strs(&f), "phi": phi.to_string() });
    Ok(compare(instance, lhs, rhs))
}

fn r7_cases(n_max: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let mut a = vec![1u32; n];
        'outer: loop {
            out.push(a.clone());
            for x in a.iter_mut() {
                if *x < 3 {
                    *x += 1;
                    continue 'outer;
                }
                *x = 1;
            }
            break;
        }
    }
    out
}

/// Intersection formula, exhaustive over exponents at most 3.
fn r7(g: &mut Gen, spec: &InstanceSpec, trial: u64) -> Result<Outcome> {
    let alpha = r7_cases(spec.n)[trial as usize].clone();
    let n = alpha.len();
    let ctx = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..n])?;
    let simple = alpha.iter().all(|&a| a == 1);
    let top = DiffForm::fiber_top(Poly::one(&ctx));

    let monomial = residue_monomial(&top, &alpha)?;
    let powers: Vec<Poly> = ctx.fiber_indices().zip(&alpha).map(|(i, &a)| Poly::var(&ctx, i).pow(a)).collect();
    let engine = residue_symbol(&top, &DenomTuple::new(powers)?)?;
    let expected = constant(&ctx, i64::from(simple));
    let mut lhs = vec![monomial.to_string(), engine.to_string()];
    let mut rhs = vec![expected.to_string(), expected.to_string()];

    // with a random tuple the all-ones case counts the points
    let mut t_desc = Vec::new();
    if n <= 2 {
        let t = ci(g, &ctx, 1, spec.degree.min(2));
        let dt = DenomTuple::new(t.clone())?;
        let rank = dt.quotient()?.rank() as i64;
        let powered = dt.powered(&alpha)?;
        lhs.push(residue_of_function(&jacobian(&t), &powered)?.to_string());
        rhs.push(constant(&ctx, if simple { rank } else { 0 }).to_string());
        t_desc = strs(&t);
    }
    let instance = json!({ "alpha": alpha, "t": t_desc });
    Ok(compare(instance, lhs.join(", "), rhs.join(", ")))
}

/// Vanishing on the ideal, and nondegeneracy of the residue pairing.
fn r8(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let ctx = ctx_for(spec, spec.n, spec.m)?;
    let dmax = cap(spec, spec.n);
    let f = ci(g, &ctx, 1, dmax);
    let d = DenomTuple::new(f.clone())?;
    let mut num = Poly::zero(&ctx);
    for fj in &f {
        num = &num + &(&g.mixed_poly(&ctx, 2, 1, 3) * fj);
    }
    let vanish = residue_of_function(&num, &d)?;

    let abs = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..spec.n])?;
    let fa = ci(g, &abs, 1, dmax);
    let (_, det) = residue_pairing_gram(&DenomTuple::new(fa.clone())?)?;
    let instance = json!({
        "ring": ctx.to_string(), "f": strs(&f), "numerator": num.to_string(), "gram_f": strs(&fa),
    });
    let lhs = format!("{vanish}; det {}", if det.is_zero() { "zero" } else { "nonzero" });
    Ok(compare(instance, lhs, "0; det nonzero".to_string()))
}

/// Exterior differentiation of fractions, plus the fraction operations.
fn r9(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n.min(2);
    let ctx = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..n])?;
    let t = ci(g, &ctx, 1, spec.degree.min(2));
    let k: Vec<u32> = (0..n).map(|_| g.rng.gen_range(1..=3)).collect();
    let eta = g.form(&ctx, n - 1, 2);
    let d = DenomTuple::new(t.clone())?;

    let lhs = residue_symbol(&eta.exterior_derivative(), &d.powered(&k)?)?;
    let mut rhs = Poly::zero(&ctx);
    for (j, tj) in t.iter().enumerate() {
        let mut kj = k.clone();
        kj[j] += 1;
        let num = DiffForm::function(tj.clone()).exterior_derivative().wedge(&eta)?;
        rhs = &rhs + &(&constant(&ctx, k[j] as i64) * &residue_symbol(&num, &d.powered(&kj)?)?);
    }
    let fr = GenFraction::new(eta.clone(), d.clone(), k.clone())?;
    let mut total = Poly::zero(&ctx);
    for term in d_fraction(&fr)? {
        total = &total + &residue_of_fraction(&term)?;
    }

    let omega = g.form(&ctx, n, 2);
    let top = GenFraction::new(omega.clone(), d.clone(), k.clone())?;
    let up: Vec<u32> = k.iter().map(|x| x + 1).collect();
    let rescaled = fraction_rescale(&top, &up)?;
    let equal = fraction_equal(&top, &rescaled)?;
    let same_residue = residue_of_fraction(&top)? == residue_of_fraction(&rescaled)?;
    let killed = fraction_is_zero(&top.scale(&t[0].pow(k[0])))?;

    let instance = json!({
        "ring": ctx.to_string(), "t": strs(&t), "k": k, "eta": eta.to_string(), "omega": omega.to_string(),
    });
    Ok(compare(
        instance,
        format!("{lhs}; {total}; {equal} {same_residue} {killed}"),
        format!("{rhs}; 0; true true true"),
    ))
}

/// Residues through a finite map against the base residue of its trace.
fn r10(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let m = spec.m.clamp(1, 2);
    let n = spec.n.min(2);
    let ctx = ctx_for(spec, n, m)?;
    let base = ctx.base_ring();
    let flat = ctx.flattened();
    let dmax = cap(spec, n);

    let f = ci(g, &ctx, 1, dmax);
    let pres = FinitePresentation::new(f.clone())?;
    let eta = g.form(&ctx, m, 2);
    let t = ci(g, &base, 1, 2);

    let trace = klt_trace(&pres, &eta)?;
    let base_idx: Vec<usize> = ctx.base_indices().collect();
    let coeff = trace.coefficient(&base_idx).to_context(&base)?;
    let lhs = residue_of_function(&coeff, &DenomTuple::new(t.clone())?)?;

    let omega = pres.relation_differential()?.wedge(&eta)?.to_context(&flat)?;
    let mut dens = lift(&f, &flat)?;
    dens.extend(lift(&t, &flat)?);
    let rhs = residue_symbol(&omega, &DenomTuple::new(dens)?)?;

    let rank = trace_function(&pres, &Poly::one(&ctx))?;
    let instance = json!({
        "ring": ctx.to_string(), "f": strs(&f), "eta": eta.to_string(), "t": strs(&t),
    });
    Ok(compare(
        instance,
        format!("{}; {rank}", lhs.constant_coeff()),
        format!("{}; {}", rhs.constant_coeff(), constant(&ctx, pres.rank() as i64)),
    ))
}

fn jacobian_rule(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let ctx = ctx_for(spec, spec.n, spec.m)?;
    let f = ci(g, &ctx, 2, cap(spec, spec.n));
    let d = DenomTuple::new(f.clone())?;
    let lhs = residue_of_function(&jacobian(&f), &d)?;
    let rhs = constant(&ctx, d.quotient()?.rank() as i64);
    Ok(compare(json!({ "ring": ctx.to_string(), "f": strs(&f) }), lhs, rhs))
}

/// Bezoutian trace generator against residues and traces, its independence
/// of the divided differences, and of the variable order.
fn tate(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n;
    let ctx = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..n])?;
    let f = ci(g, &ctx, 1, cap(spec, n));
    let pres = tate_presentation(&f)?;
    let d = pres.denoms().clone();
    let q = d.quotient()?;
    let mut lhs = vec![pres.check_invariants()?.to_string()];
    let mut rhs = vec!["true".to_string()];
    for i in 0..q.rank() {
        let b = q.basis_element(i);
        lhs.push(tate_lambda(&pres, &b)?.to_string());
        rhs.push(residue_of_function(&b, &d)?.constant_coeff().to_string());
        lhs.push(trace_via_tate(&pres, &b)?.to_string());
        rhs.push(q.canonical_trace(&b).constant_coeff().to_string());
    }

    if n >= 2 {
        let pc = pres.pair_ctx().clone();
        let p = g.any_poly(&pc, 1, 2);
        let dx = |j: usize| &Poly::var(&pc, j) - &Poly::var(&pc, n + j);
        let mut h = pres.h.clone();
        let row = g.rng.gen_range(0..n);
        h[row][0] = &h[row][0] + &(&p * &dx(1));
        h[row][1] = &h[row][1] - &(&p * &dx(0));
        lhs.push(pres.delta_bar_from(&h)?.to_string());
        rhs.push(pres.delta_bar.to_string());
    }

    let perm = g.permutation(n);
    let names: Vec<&str> = perm.iter().map(|&i| FIBER_NAMES[i]).collect();
    let pctx = RingContext::absolute(spec.field.clone(), &names)?;
    let fp: Vec<Poly> = perm.iter().map(|&i| f[i].to_context(&pctx)).collect::<Result<_>>()?;
    let ppres = tate_presentation(&fp)?;
    let c = g.any_poly(&ctx, 3, 4);
    lhs.push(tate_lambda(&ppres, &c.to_context(&pctx)?)?.to_string());
    rhs.push(tate_lambda(&pres, &c)?.to_string());

    let instance = json!({ "ring": ctx.to_string(), "f": strs(&f), "permutation": perm, "c": c.to_string() });
    Ok(compare(instance, lhs.join(", "), rhs.join(", ")))
}

fn pairing(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let ctx = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..spec.n])?;
    let f = ci(g, &ctx, 1, cap(spec, spec.n));
    let d = DenomTuple::new(f.clone())?;
    let (gram, det) = residue_pairing_gram(&d)?;
    let q = d.quotient()?;
    let pres = tate_presentation(&f)?;
    let mut lambda_gram = gram.clone();
    for (i, row) in lambda_gram.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = tate_lambda(&pres, &(&q.basis_element(i) * &q.basis_element(j)))?;
        }
    }
    let instance = json!({ "ring": ctx.to_string(), "f": strs(&f) });
    let lhs = format!("det {}; agrees with λ {}", if det.is_zero() { "zero" } else { "nonzero" }, lambda_gram == gram);
    Ok(compare(instance, lhs, "det nonzero; agrees with λ true".to_string()))
}

/// `Σ_j c_j s^j = 1 / Σ_j a_j s^j` up to `s^{len-1}`.
fn inverse_series(a: &[Coeff], len: usize) -> Result<Vec<Coeff>> {
    let inv0 = a[0].inv().ok_or(Error::DivisionByZero)?;
    let mut b: Vec<Coeff> = vec![inv0.clone()];
    for j in 1..len {
        let mut acc = a[0].field().zero();
        for i in 1..=j.min(a.len() - 1) {
            acc = &acc + &(&a[i] * &b[j - i]);
        }
        b.push(-(&acc * &inv0));
    }
    Ok(b)
}

/// Additivity over the points of a split tuple, against local residues from
/// Laurent expansions.
fn sum(g: &mut Gen, spec: &InstanceSpec) -> Result<Outcome> {
    let n = spec.n.min(2);
    let ctx = RingContext::absolute(spec.field.clone(), &FIBER_NAMES[..n])?;
    let field = ctx.field().clone();
    // per variable: distinct roots with multiplicities
    let mut roots: Vec<Vec<(i64, u32)>> = Vec::new();
    for _ in 0..n {
        let count = g.rng.gen_range(1..=2);
        let mut rs: Vec<(i64, u32)> = Vec::new();
        while rs.len() < count {
            let a = g.rng.gen_range(-2..=2i64);
            if rs.iter().all(|(b, _)| field.from_i64(a - b) != field.zero()) {
                rs.push((a, g.rng.gen_range(1..=2)));
            }
        }
        roots.push(rs);
    }
    let f: Vec<Poly> = roots
        .iter()
        .enumerate()
        .map(|(k, rs)| {
            let tk = Poly::var(&ctx, k);
            rs.iter().fold(Poly::one(&ctx), |acc, &(a, m)| &acc * &(&tk - &constant(&ctx, a)).pow(m))
        })
        .collect();
    let num = g.any_poly(&ctx, 3, 4);
    let lhs = residue_of_function(&num, &DenomTuple::new(f.clone())?)?.constant_coeff();

    let mut rhs = field.zero();
    let mut choice = vec![0usize; n];
    'points: loop {
        let shift: BTreeMap<usize, Poly> =
            (0..n).map(|k| (k, &Poly::var(&ctx, k) + &constant(&ctx, roots[k][choice[k]].0))).collect();
        let mut h = num.substitute(&shift, &ctx)?;
        for k in 0..n {
            let (p, mult) = roots[k][choice[k]];
            let s = Poly::var(&ctx, k);
            let mut unit = Poly::one(&ctx);
            for (i, &(a, m)) in roots[k].iter().enumerate() {
                if i != choice[k] {
                    unit = &unit * &(&s + &constant(&ctx, p - a)).pow(m);
                }
            }
            let coeffs: Vec<Coeff> =
                (0..=unit.degree_in(k).unwrap_or(0)).map(|j| unit.coefficient_in_var(k, j).constant_coeff()).collect();
            let inv = inverse_series(&coeffs, mult as usize)?;
            let series =
                inv.iter().enumerate().fold(Poly::zero(&ctx), |acc, (j, c)| &acc + &s.pow(j as u32).scale(c));
            h = (&h * &series).coefficient_in_var(k, mult - 1);
        }
        rhs = &rhs + &h.constant_coeff();
        for k in 0..n {
            choice[k] += 1;
            if choice[k] < roots[k].len() {
                continue 'points;
            }
            choice[k] = 0;
        }
        break;
    }
    let instance = json!({ "ring": ctx.to_string(), "f": strs(&f), "numerator": num.to_string() });
    Ok(compare(instance, lhs, rhs))
}

fn cech_cases() -> Vec<Vec<u32>> {
    r7_cases(2)
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Trial 0 checks cohomology dimensions; the rest compare the projective
/// integral of a fraction with its affine residue.
fn cech(spec: &InstanceSpec, trial: u64) -> Result<Outcome> {
    if trial == 0 {
        let mut bad = Vec::new();
        for r in 1..=3usize {
            for d in -6..=6i64 {
                for q in 0..=r {
                    let ri = r as i64;
                    let expected = match q {
                        0 if d >= 0 => binomial(d + ri, ri),
                        _ if q == r && d <= -ri - 1 => binomial(-d - 1, ri),
                        _ => 0,
                    };
                    let got = cohomology_dim(r, d, q);
                    if got != expected {
                        bad.push(format!("r={r} d={d} q={q}: {got} vs {expected}"));
                    }
                }
            }
        }
        return Ok(compare(json!({ "check": "dimensions" }), bad.join("; "), String::new()));
    }
    let alpha = cech_cases()[trial as usize - 1].clone();
    let r = alpha.len();
    let field = spec.field.clone();
    let c = fraction_to_cech_class(&field, r, &alpha)?;
    let integral = pn_integral(&c)?;

    let ctx = RingContext::absolute(field.clone(), &FIBER_NAMES[..r])?;
    let vars: Vec<Poly> = ctx.fiber_indices().map(|i| Poly::var(&ctx, i)).collect();
    let fr = GenFraction::from_parts(DiffForm::fiber_top(Poly::one(&ctx)), vars, alpha.clone())?;
    let affine = residue_of_fraction(&fr)?.constant_coeff();

    let simple = alpha.iter().all(|&a| a == 1);
    let witness = match class_is_zero(&c)? {
        Some(x) => coboundary(&x)? == c,
        None => false,
    };
    Ok(compare(
        json!({ "alpha": alpha }),
        format!("{integral}; coboundary {witness}"),
        format!("{affine}; coboundary {}", !simple),
    ))
}
