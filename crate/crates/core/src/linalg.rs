//! Small dense linear algebra over the coefficient field and over
//! polynomial rings (division-free).

use crate::ring::{Coeff, CoeffField, Ctx, Poly};

pub type Matrix<T> = Vec<Vec<T>>;

/// Row-reduces `m` in place; returns the pivot columns.
fn echelon(m: &mut Matrix<Coeff>, cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &(&f * s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix<Coeff>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    echelon(&mut a, cols).len()
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &Matrix<Coeff>, b: &[Coeff], field: &CoeffField) -> Option<Vec<Coeff>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<Coeff> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn det(m: &Matrix<Coeff>, field: &CoeffField) -> Coeff {
    let n = m.len();
    let mut a = m.clone();
    let mut d = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return field.zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = &d * &a[c][c];
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] = &a[i][j] - &v;
            }
        }
    }
    d
}

pub fn mat_mul_poly(a: &Matrix<Poly>, b: &Matrix<Poly>, ctx: &Ctx) -> Matrix<Poly> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Poly::zero(ctx); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

/// Coefficients of `det(x I - m)`, highest degree first, by Berkowitz's
/// division-free algorithm.
pub fn charpoly(m: &Matrix<Poly>, ctx: &Ctx) -> Vec<Poly> {
    let n = m.len();
    if n == 0 {
        return vec![Poly::one(ctx)];
    }
    let mut vect = vec![Poly::one(ctx), -&m[0][0]];
    for r in 1..n {
        // leading (r+1)x(r+1) block = [[A, C], [R, a_rr]]
        let a: Matrix<Poly> = (0..r).map(|i| m[i][..r].to_vec()).collect();
        let col: Vec<Poly> = (0..r).map(|i| m[i][r].clone()).collect();
        let row: Vec<Poly> = m[r][..r].to_vec();
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(Poly::one(ctx));
        toeplitz.push(-&m[r][r]);
        let mut power_c = col.clone();
        for _ in 0..r {
            let mut s = Poly::zero(ctx);
            for (x, y) in row.iter().zip(&power_c) {
                s = &s + &(x * y);
            }
            toeplitz.push(-&s);
            power_c = (0..r)
                .map(|i| {
                    let mut s = Poly::zero(ctx);
                    for (x, y) in a[i].iter().zip(&power_c) {
                        s = &s + &(x * y);
                    }
                    s
                })
                .collect();
        }
        let mut next = vec![Poly::zero(ctx); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate() {
                if i >= j {
                    *slot = &*slot + &(&toeplitz[i - j] * v);
                }
            }
        }
        vect = next;
    }
    vect
}

pub fn det_poly(m: &Matrix<Poly>, ctx: &Ctx) -> Poly {
    let n = m.len();
    if n <= 6 {
        return det_by_minors(m, ctx);
    }
    let cp = charpoly(m, ctx);
    let last = cp[n].clone();
    if n % 2 == 0 {
        last
    } else {
        -last
    }
}

/// Laplace expansion with the minors on the bottom rows shared by column set.
fn det_by_minors(m: &Matrix<Poly>, ctx: &Ctx) -> Poly {
    let n = m.len();
    // minors[S] = det of the last |S| rows restricted to the columns in S
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
    minors[0] = Some(Poly::one(ctx));
    for size in 1..=n {
        let row = n - size;
        for set in 0usize..(1 << n) {
            if set.count_ones() as usize != size {
                continue;
            }
            let mut acc = Poly::zero(ctx);
            let mut neg = false;
            for j in (0..n).filter(|j| set & (1 << j) != 0) {
                let rest = minors[set & !(1 << j)].as_ref().expect("smaller minors first");
                if !m[row][j].is_zero() && !rest.is_zero() {
                    let t = &m[row][j] * rest;
                    acc = if neg { &acc - &t } else { &acc + &t };
                }
                neg = !neg;
            }
            minors[set] = Some(acc);
        }
    }
    minors[(1 << n) - 1].take().expect("full minor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingContext;

    #[test]
    fn field_solve_and_det() {
        let f = CoeffField::Rationals;
        let c = |v: i64| f.from_i64(v);
        let a = vec![vec![c(1), c(1)], vec![c(1), c(-1)]];
        assert_eq!(det(&a, &f), c(-2));
        let x = solve(&a, &[c(2), c(0)], &f).unwrap();
        assert_eq!(x, vec![c(1), c(1)]);
        let sing = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        assert_eq!(rank(&sing), 1);
        assert!(solve(&sing, &[c(1), c(1)], &f).is_none());
    }

    #[test]
    fn berkowitz_matches_laplace() {
        let ctx = RingContext::absolute(CoeffField::Rationals, &["a", "b"]).unwrap();
        let a = Poly::var(&ctx, 0);
        let b = Poly::var(&ctx, 1);
        let k = |v| Poly::from_i64(&ctx, v);
        let m = vec![
            vec![a.clone(), k(1), b.clone()],
            vec![k(2), b.clone(), k(0)],
            vec![&a * &b, k(-1), k(3)],
        ];
        let laplace = &(&m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1])))
            - &(&(&m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0])))
                - &(&m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]))));
        assert_eq!(det_poly(&m, &ctx), laplace);
        let cp = charpoly(&m, &ctx);
        assert_eq!(-&cp[3], laplace);
        assert_eq!(cp[1], -&(&(&a + &b) + &k(3)));
    }
}
