use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial, one entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the single variable when the monomial is a pure power `x_i^e`
    /// with `e > 0`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }
}

/// Monomial orders. `Block { split }` compares the fiber variables
/// (indices `>= split`) by degrevlex first and breaks ties on the base
/// variables (indices `< split`) by degrevlex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    Block { split: usize },
}

fn degrevlex_key(exps: &[u32], key: &mut Vec<i64>) {
    key.push(exps.iter().map(|&e| e as i64).sum());
    key.extend(exps.iter().rev().map(|&e| -(e as i64)));
}

impl MonomialOrder {
    /// A vector whose lexicographic order realizes this monomial order.
    pub fn key(&self, m: &Monomial) -> Vec<i64> {
        let mut key = Vec::with_capacity(m.len() + 2);
        match *self {
            MonomialOrder::DegRevLex => degrevlex_key(&m.0, &mut key),
            MonomialOrder::Lex => key.extend(m.0.iter().map(|&e| e as i64)),
            MonomialOrder::Block { split } => {
                let split = split.min(m.len());
                degrevlex_key(&m.0[split..], &mut key);
                degrevlex_key(&m.0[..split], &mut key);
            }
        }
        key
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::DegRevLex => "degrevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block { split } => format!("block({split})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[0, 1])), Ordering::Greater);
        // x*z < y^2 in degrevlex with x > y > z
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_prefers_fiber() {
        // vars (y | T): T beats any power of y
        let o = MonomialOrder::Block { split: 1 };
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[5, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[0, 2])), Ordering::Greater);
    }
}
