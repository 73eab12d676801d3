use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::coeff::CoeffField;

/// Coefficient field plus an ordered list of variables. The first
/// `base_len` variables form the base block `u`, the rest the fiber block `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    field: CoeffField,
    vars: Vec<String>,
    base_len: usize,
}

pub type Ctx = Arc<RingContext>;

impl RingContext {
    pub fn new(field: CoeffField, vars: Vec<String>, base_len: usize) -> Result<Ctx> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidContext(format!("duplicate variable `{v}`")));
            }
        }
        if base_len > vars.len() {
            return Err(Error::InvalidContext(format!(
                "base block of length {base_len} exceeds {} variables",
                vars.len()
            )));
        }
        Ok(Arc::new(RingContext { field, vars, base_len }))
    }

    /// All variables are fiber variables.
    pub fn absolute<S: AsRef<str>>(field: CoeffField, vars: &[S]) -> Result<Ctx> {
        Self::new(field, vars.iter().map(|s| s.as_ref().to_string()).collect(), 0)
    }

    pub fn relative<S: AsRef<str>>(field: CoeffField, base: &[S], fiber: &[S]) -> Result<Ctx> {
        let vars = base.iter().chain(fiber).map(|s| s.as_ref().to_string()).collect();
        Self::new(field, vars, base.len())
    }

    /// Parses `QQ[x,y]`, `QQ[y][T]` (base block, then fiber block) or the
    /// same with an `Fp:<p>` prefix.
    pub fn parse(spec: &str) -> Result<Ctx> {
        let spec = spec.trim();
        let open = spec
            .find('[')
            .ok_or_else(|| Error::InvalidContext(format!("missing `[` in `{spec}`")))?;
        let field = CoeffField::parse(&spec[..open])?;
        let mut blocks = Vec::new();
        let mut rest = &spec[open..];
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::InvalidContext(format!("expected `[` in `{spec}`")))?;
            let close = body
                .find(']')
                .ok_or_else(|| Error::InvalidContext(format!("unclosed `[` in `{spec}`")))?;
            let names: Vec<String> = body[..close]
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            for n in &names {
                if !is_identifier(n) {
                    return Err(Error::InvalidContext(format!("bad variable name `{n}`")));
                }
            }
            blocks.push(names);
            rest = body[close + 1..].trim_start();
        }
        match blocks.len() {
            1 => Self::new(field, blocks.pop().unwrap_or_default(), 0),
            2 => {
                let fiber = blocks.pop().unwrap_or_default();
                let base = blocks.pop().unwrap_or_default();
                Self::relative(field, &base, &fiber)
            }
            _ => Err(Error::InvalidContext(format!("expected one or two variable blocks in `{spec}`"))),
        }
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn is_relative(&self) -> bool {
        self.base_len > 0
    }

    pub fn fiber_len(&self) -> usize {
        self.vars.len() - self.base_len
    }

    pub fn base_indices(&self) -> std::ops::Range<usize> {
        0..self.base_len
    }

    pub fn fiber_indices(&self) -> std::ops::Range<usize> {
        self.base_len..self.vars.len()
    }

    pub fn is_fiber(&self, i: usize) -> bool {
        i >= self.base_len
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The context made of the base variables alone, as an absolute ring.
    pub fn base_ring(&self) -> Ctx {
        Arc::new(RingContext {
            field: self.field.clone(),
            vars: self.vars[..self.base_len].to_vec(),
            base_len: 0,
        })
    }

    /// Same variables, all treated as fiber variables.
    pub fn flattened(&self) -> Ctx {
        Arc::new(RingContext { field: self.field.clone(), vars: self.vars.clone(), base_len: 0 })
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)?;
        if self.base_len > 0 {
            write!(f, "[{}]", self.vars[..self.base_len].join(","))?;
        }
        write!(f, "[{}]", self.vars[self.base_len..].join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_blocks() {
        let c = RingContext::parse("QQ[y][T]").unwrap();
        assert_eq!(c.vars(), &["y".to_string(), "T".to_string()]);
        assert_eq!(c.base_len(), 1);
        assert_eq!(c.to_string(), "QQ[y][T]");
        let c = RingContext::parse("Fp:7[x, y]").unwrap();
        assert_eq!(c.field(), &CoeffField::PrimeField(7));
        assert!(!c.is_relative());
    }

    #[test]
    fn rejects_duplicates() {
        assert!(matches!(RingContext::parse("QQ[x,x]"), Err(Error::InvalidContext(_))));
        assert!(matches!(RingContext::parse("QQ[x][x]"), Err(Error::InvalidContext(_))));
        assert!(RingContext::parse("QQ[1x]").is_err());
    }
}
