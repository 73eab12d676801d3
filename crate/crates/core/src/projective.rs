//! Čech cochains of `O(d)` on `P^r` for the standard cover `U_i = {T_i ≠ 0}`,
//! with Laurent-monomial entries. Every computation splits over exponent
//! vectors, so all linear systems are finite.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::ring::{Coeff, CoeffField};

pub type Laurent = BTreeMap<Vec<i64>, Coeff>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCochain {
    field: CoeffField,
    r: usize,
    twist: i64,
    level: usize,
    entries: BTreeMap<Vec<usize>, Laurent>,
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl CechCochain {
    pub fn zero(field: CoeffField, r: usize, twist: i64, level: usize) -> CechCochain {
        CechCochain { field, r, twist, level, entries: BTreeMap::new() }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Laurent> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c · T^exps` on `U_S`, checking homogeneity and that negative
    /// exponents only occur at indices of `S`.
    pub fn add_term(&mut self, subset: &[usize], exps: Vec<i64>, c: Coeff) -> Result<()> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != self.level + 1 || s.iter().any(|&i| i > self.r) {
            return Err(Error::WrongTwist(format!("subset {subset:?} is not at level {}", self.level)));
        }
        if exps.len() != self.r + 1 {
            return Err(Error::LengthMismatch { expected: self.r + 1, got: exps.len() });
        }
        if exps.iter().sum::<i64>() != self.twist {
            return Err(Error::WrongTwist(format!("monomial {exps:?} is not of degree {}", self.twist)));
        }
        if exps.iter().enumerate().any(|(i, &e)| e < 0 && !s.contains(&i)) {
            return Err(Error::WrongTwist(format!("monomial {exps:?} has a pole outside U_{s:?}")));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.entries.entry(s.clone()).or_default();
        let sum = match entry.get(&exps) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            entry.remove(&exps);
        } else {
            entry.insert(exps, sum);
        }
        if entry.is_empty() {
            self.entries.remove(&s);
        }
        Ok(())
    }

    fn same_space(&self, other: &CechCochain) -> Result<()> {
        if self.r != other.r || self.twist != other.twist || self.level != other.level || self.field != other.field {
            return Err(Error::WrongTwist("cochains live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &CechCochain) -> Result<CechCochain> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (s, l) in &other.entries {
            for (e, c) in l {
                out.add_term(s, e.clone(), c.clone())?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Coeff) -> CechCochain {
        let mut out = CechCochain::zero(self.field.clone(), self.r, self.twist, self.level);
        for (s, l) in &self.entries {
            for (e, c) in l {
                out.add_term(s, e.clone(), c * k).expect("same space");
            }
        }
        out
    }

    pub fn coefficient(&self, subset: &[usize], exps: &[i64]) -> Coeff {
        self.entries
            .get(subset)
            .and_then(|l| l.get(exps))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// All exponent vectors occurring anywhere in the cochain.
    fn exponent_vectors(&self) -> BTreeSet<Vec<i64>> {
        self.entries.values().flat_map(|l| l.keys().cloned()).collect()
    }
}

/// `(δc)_S = Σ_k (-1)^k c_{S \ s_k}`.
pub fn coboundary(c: &CechCochain) -> Result<CechCochain> {
    if c.level >= c.r {
        return Err(Error::LevelOverflow { level: c.level, r: c.r });
    }
    let mut out = CechCochain::zero(c.field.clone(), c.r, c.twist, c.level + 1);
    for s in subsets(c.r + 1, c.level + 2) {
        for k in 0..s.len() {
            let mut face = s.clone();
            face.remove(k);
            if let Some(l) = c.entries.get(&face) {
                for (e, v) in l {
                    out.add_term(&s, e.clone(), &c.field.from_i64(sign(k)) * v)?;
                }
            }
        }
    }
    Ok(out)
}

fn negative_set(exps: &[i64]) -> Vec<usize> {
    exps.iter().enumerate().filter(|(_, &e)| e < 0).map(|(i, _)| i).collect()
}

/// Subsets of `{0..r}` of size `level + 1` containing `neg`.
fn cells(r: usize, level: usize, neg: &[usize]) -> Vec<Vec<usize>> {
    subsets(r + 1, level + 1).into_iter().filter(|s| neg.iter().all(|i| s.contains(i))).collect()
}

/// Matrix of `δ` from level `p` to `p + 1` on the cells containing `neg`.
fn delta_matrix(field: &CoeffField, r: usize, p: usize, neg: &[usize]) -> Matrix<Coeff> {
    let src = cells(r, p, neg);
    let dst = cells(r, p + 1, neg);
    dst.iter()
        .map(|t| {
            src.iter()
                .map(|s| {
                    let mut c = field.zero();
                    if s.iter().all(|i| t.contains(i)) {
                        let k = t.iter().position(|i| !s.contains(i)).expect("one extra index");
                        c = field.from_i64(sign(k));
                    }
                    c
                })
                .collect()
        })
        .collect()
}

/// `dim H^q` of the finite complex supported on exponent vectors with
/// negative set `neg`.
fn local_cohomology(r: usize, q: usize, neg: &[usize]) -> usize {
    let field = CoeffField::Rationals;
    let dim = cells(r, q, neg).len();
    let out = if q < r { linalg::rank(&delta_matrix(&field, r, q, neg)) } else { 0 };
    let inc = if q > 0 { linalg::rank(&delta_matrix(&field, r, q - 1, neg)) } else { 0 };
    dim - out - inc
}

/// Number of exponent vectors in `Z^{r+1}` summing to `d` with negative set
/// exactly `neg`; `None` when infinite.
fn count_vectors(r: usize, d: i64, neg: &[usize]) -> Option<u64> {
    let n = r + 1;
    let k = neg.len();
    if k > 0 && k < n {
        return None;
    }
    // shift to non-negative compositions of `total` into `n` parts
    let total = if k == 0 { d } else { -d - n as i64 };
    if total < 0 {
        return Some(0);
    }
    let mut count = 0u64;
    let mut stack = vec![(0usize, total)];
    while let Some((i, left)) = stack.pop() {
        if i == n - 1 {
            count += 1;
            continue;
        }
        for v in 0..=left {
            stack.push((i + 1, left - v));
        }
    }
    Some(count)
}

/// `dim H^q(P^r, O(d))` from the monomial splitting of the Čech complex.
pub fn cohomology_dim(r: usize, d: i64, q: usize) -> u64 {
    if q > r {
        return 0;
    }
    let mut total = 0u64;
    for size in 0..=r + 1 {
        for neg in subsets(r + 1, size) {
            let h = local_cohomology(r, q, &neg) as u64;
            if h == 0 {
                continue;
            }
            let count = count_vectors(r, d, &neg).expect("acyclic for proper negative sets");
            total += h * count;
        }
    }
    total
}

/// `[dt_1 ∧ … ∧ dt_r; t^α] ↦ T_0^{Σα - r - 1} Π T_i^{-α_i}` on `U_0 ∩ … ∩ U_r`.
pub fn fraction_to_cech_class(field: &CoeffField, r: usize, alpha: &[u32]) -> Result<CechCochain> {
    if alpha.len() != r {
        return Err(Error::LengthMismatch { expected: r, got: alpha.len() });
    }
    if alpha.iter().any(|&a| a == 0) {
        return Err(Error::DegreeMismatch("exponents must be positive".into()));
    }
    let sum: i64 = alpha.iter().map(|&a| a as i64).sum();
    let mut exps = vec![sum - r as i64 - 1];
    exps.extend(alpha.iter().map(|&a| -(a as i64)));
    let mut c = CechCochain::zero(field.clone(), r, -(r as i64) - 1, r);
    c.add_term(&(0..=r).collect::<Vec<_>>(), exps, field.one())?;
    Ok(c)
}

/// `Some(x)` with `δx = c` (verified) when `c` is a coboundary, else `None`.
/// At level 0 only the zero cochain qualifies, with an empty witness at
/// level 0.
pub fn class_is_zero(c: &CechCochain) -> Result<Option<CechCochain>> {
    if c.level == 0 {
        return Ok(if c.is_zero() { Some(c.clone()) } else { None });
    }
    let p = c.level - 1;
    let mut x = CechCochain::zero(c.field.clone(), c.r, c.twist, p);
    for exps in c.exponent_vectors() {
        let neg = negative_set(&exps);
        let src = cells(c.r, p, &neg);
        let dst = cells(c.r, c.level, &neg);
        let a = delta_matrix(&c.field, c.r, p, &neg);
        let b: Vec<Coeff> = dst.iter().map(|t| c.coefficient(t, &exps)).collect();
        if dst.is_empty() {
            continue;
        }
        let Some(sol) = linalg::solve(&a, &b, &c.field) else { return Ok(None) };
        for (s, v) in src.iter().zip(sol) {
            x.add_term(s, exps.clone(), v)?;
        }
    }
    if coboundary(&x)? != *c {
        return Err(Error::Internal("coboundary witness failed".into()));
    }
    Ok(Some(x))
}

/// Coefficient of `1/(T_0 ⋯ T_r)` in a top cochain of twist `-r-1`; a
/// coboundary never contributes to it.
pub fn pn_integral(c: &CechCochain) -> Result<Coeff> {
    if c.level != c.r || c.twist != -(c.r as i64) - 1 {
        return Err(Error::WrongTwist(format!(
            "expected level {} and twist {}, got level {} and twist {}",
            c.r,
            -(c.r as i64) - 1,
            c.level,
            c.twist
        )));
    }
    let full: Vec<usize> = (0..=c.r).collect();
    Ok(c.coefficient(&full, &vec![-1; c.r + 1]))
}

fn fmt_laurent(l: &Laurent) -> String {
    let items = l
        .iter()
        .rev()
        .map(|(e, c)| {
            let body: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("T{i}") } else { format!("T{i}^{x}") })
                .collect();
            (c.is_negative(), crate::ring::fmt_scaled(&c.abs(), &body.join("*")))
        })
        .collect();
    crate::ring::join_signed(items)
}

impl fmt::Display for CechCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(s, l)| {
                let idx: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("U{{{}}}: {}", idx.join(","), fmt_laurent(l))
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: i64, k: i64) -> u64 {
        if n < 0 || k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
    }

    #[test]
    fn dimensions_match_binomials() {
        for r in 1..=3usize {
            for d in -6..=6i64 {
                for q in 0..=r {
                    let expected = match q {
                        0 if d >= 0 => binomial(d + r as i64, r as i64),
                        q if q == r && d <= -(r as i64) - 1 => binomial(-d - 1, r as i64),
                        _ => 0,
                    };
                    assert_eq!(cohomology_dim(r, d, q), expected, "r={r} d={d} q={q}");
                }
            }
        }
        assert_eq!(cohomology_dim(1, -2, 1), 1);
        assert_eq!(cohomology_dim(2, 0, 0), 1);
        assert_eq!(cohomology_dim(2, -3, 2), 1);
        assert_eq!(cohomology_dim(1, -1, 1), 0);
    }

    #[test]
    fn coboundary_examples() {
        let f = CoeffField::Rationals;
        let mut c = CechCochain::zero(f.clone(), 1, 0, 0);
        c.add_term(&[0], vec![-1, 1], f.one()).unwrap();
        let dc = coboundary(&c).unwrap();
        assert_eq!(dc.coefficient(&[0, 1], &[-1, 1]), f.from_i64(-1));

        let mut constant = CechCochain::zero(f.clone(), 2, 1, 0);
        for i in 0..3 {
            constant.add_term(&[i], vec![1, 0, 0], f.one()).unwrap();
        }
        assert!(coboundary(&constant).unwrap().is_zero());
        let top = fraction_to_cech_class(&f, 2, &[1, 1]).unwrap();
        assert!(matches!(coboundary(&top), Err(Error::LevelOverflow { .. })));
    }

    #[test]
    fn fraction_classes() {
        let f = CoeffField::Rationals;
        let mu = fraction_to_cech_class(&f, 2, &[1, 1]).unwrap();
        assert_eq!(mu.coefficient(&[0, 1, 2], &[-1, -1, -1]), f.one());
        assert!(class_is_zero(&mu).unwrap().is_none());
        assert_eq!(pn_integral(&mu).unwrap(), f.one());
        assert_eq!(pn_integral(&mu.scale(&f.from_i64(5))).unwrap(), f.from_i64(5));

        let nu = fraction_to_cech_class(&f, 2, &[2, 1]).unwrap();
        assert_eq!(nu.coefficient(&[0, 1, 2], &[0, -2, -1]), f.one());
        let w = class_is_zero(&nu).unwrap().expect("coboundary");
        assert_eq!(coboundary(&w).unwrap(), nu);
        assert_eq!(pn_integral(&nu).unwrap(), f.zero());

        let line = fraction_to_cech_class(&f, 1, &[1]).unwrap();
        assert_eq!(line.coefficient(&[0, 1], &[-1, -1]), f.one());
        let zero = CechCochain::zero(f.clone(), 2, -3, 2);
        assert!(class_is_zero(&zero).unwrap().is_some());
    }

    #[test]
    fn rejects_bad_terms() {
        let f = CoeffField::Rationals;
        let mut c = CechCochain::zero(f.clone(), 1, 0, 0);
        assert!(c.add_term(&[0], vec![1, -1], f.one()).is_err());
        assert!(c.add_term(&[0], vec![1, 1], f.one()).is_err());
        assert!(pn_integral(&c).is_err());
    }
}
