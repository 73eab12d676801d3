//! Recursive-descent parser for polynomials and differential forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/\') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | ident | 'd' '(' ident ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::ring::{Ctx, Poly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Wedge,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut width = 1;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '0'..='9' => {
                let start = i;
                while i + width < chars.len() && chars[i + width].is_ascii_digit() {
                    width += 1;
                }
                let s: String = chars[start..start + width].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits")), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + width < chars.len() && (chars[i + width].is_ascii_alphanumeric() || chars[i + width] == '_') {
                    width += 1;
                }
                out.push((Tok::Ident(chars[start..start + width].iter().collect()), pos));
            }
            '+' => out.push((Tok::Plus, pos)),
            '-' => out.push((Tok::Minus, pos)),
            '*' => out.push((Tok::Star, pos)),
            '^' => out.push((Tok::Caret, pos)),
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            '/' if chars.get(i + 1) == Some(&'\\') => {
                width = 2;
                out.push((Tok::Wedge, pos));
            }
            '/' => out.push((Tok::Slash, pos)),
            other => {
                return Err(Error::Syntax { line, col, msg: format!("unexpected character `{other}`") });
            }
        }
        i += width;
        col += width;
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    ctx: &'a Ctx,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, pos: Pos, msg: impl Into<String>) -> Error {
        Error::Syntax { line: pos.line, col: pos.col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<DiffForm> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            if rhs.degree() != acc.degree() {
                return Err(Error::MixedDegree { line: pos.line, col: pos.col });
            }
            acc = if neg { acc.sub(&rhs)? } else { acc.add(&rhs)? };
        }
    }

    fn term(&mut self) -> Result<DiffForm> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    if acc.degree() > 0 && rhs.degree() > 0 {
                        return Err(self.syntax(pos, "use `/\\` to multiply two forms"));
                    }
                    acc = acc.wedge(&rhs)?;
                }
                Tok::Wedge => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.wedge(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DiffForm> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<DiffForm> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let epos = self.pos();
        let e = match self.bump().0 {
            Tok::Int(n) => u32::try_from(n).map_err(|_| self.syntax(epos, "exponent too large"))?,
            _ => return Err(self.syntax(epos, "expected a non-negative integer exponent")),
        };
        if base.degree() > 0 {
            return Err(self.syntax(pos, "cannot raise a form of positive degree to a power"));
        }
        Ok(DiffForm::function(base.coefficient(&[]).pow(e)))
    }

    fn atom(&mut self) -> Result<DiffForm> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => {
                let field = self.ctx.field();
                let c = if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    let d = match self.bump().0 {
                        Tok::Int(d) => d,
                        _ => return Err(self.syntax(dpos, "expected an integer denominator")),
                    };
                    field.from_ratio(&n, &d).map_err(|_| self.syntax(dpos, "zero denominator"))?
                } else {
                    field.from_bigint(&n)
                };
                Ok(DiffForm::function(Poly::constant(self.ctx, c)))
            }
            Tok::Ident(name) if name == "d" && *self.peek() == Tok::LParen => {
                self.bump();
                let vpos = self.pos();
                let v = match self.bump().0 {
                    Tok::Ident(v) => v,
                    _ => return Err(self.syntax(vpos, "expected a variable inside d(…)")),
                };
                let i = self.var(&v, vpos)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(DiffForm::dvar(self.ctx, i))
            }
            Tok::Ident(name) => {
                let i = self.var(&name, pos)?;
                Ok(DiffForm::function(Poly::var(self.ctx, i)))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::End => Err(self.syntax(pos, "unexpected end of input")),
            other => Err(self.syntax(pos, format!("unexpected {}", describe(&other)))),
        }
    }

    fn var(&self, name: &str, pos: Pos) -> Result<usize> {
        self.ctx.var_index(name).ok_or_else(|| Error::UnknownVariable {
            name: name.to_string(),
            line: pos.line,
            col: pos.col,
        })
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::Slash => "`/`",
        Tok::Wedge => "`/\\`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

/// Parses a polynomial or a differential form; polynomials come back as
/// forms of degree 0.
pub fn parse_expression(text: &str, ctx: &Ctx) -> Result<DiffForm> {
    let mut p = Parser { toks: lex(text)?, at: 0, ctx };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        let pos = p.pos();
        return Err(p.syntax(pos, format!("unexpected {}", describe(p.peek()))));
    }
    Ok(out)
}

pub fn parse_poly(text: &str, ctx: &Ctx) -> Result<Poly> {
    let f = parse_expression(text, ctx)?;
    if f.degree() > 0 {
        return Err(Error::DegreeMismatch(format!("expected a polynomial, got a {}-form", f.degree())));
    }
    Ok(f.coefficient(&[]))
}

pub fn parse_form(text: &str, ctx: &Ctx) -> Result<DiffForm> {
    parse_expression(text, ctx)
}

/// Splits at top-level commas (outside parentheses).
pub fn split_list(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CoeffField, RingContext};

    fn ctx() -> Ctx {
        RingContext::absolute(CoeffField::Rationals, &["x", "y"]).unwrap()
    }

    #[test]
    fn polynomial() {
        let c = ctx();
        let p = parse_poly("x^2*y - 1/2", &c).unwrap();
        assert_eq!(p.n_terms(), 2);
        assert_eq!(p.coefficient_of(&[2, 1]).unwrap(), c.field().one());
        assert_eq!(p.constant_coeff(), c.field().from_ratio(&(-1).into(), &2.into()).unwrap());
        assert_eq!(p.to_string(), "x^2*y - 1/2");
        assert_eq!(parse_poly("-(x+y)^2 + 2*x*y", &c).unwrap().to_string(), "-x^2 - y^2");
    }

    #[test]
    fn forms() {
        let c = ctx();
        let f = parse_form("x*d(x)/\\d(y)", &c).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coefficient(&[0, 1]), Poly::var(&c, 0));
        assert_eq!(f.to_string(), "x*d(x)/\\d(y)");
        let g = parse_form("d(y)/\\d(x) + (x+1)*d(x)/\\d(y)", &c).unwrap();
        assert_eq!(g.coefficient(&[0, 1]), Poly::var(&c, 0));
    }

    #[test]
    fn errors() {
        let c = ctx();
        assert_eq!(parse_form("d(x) + 1", &c).unwrap_err(), Error::MixedDegree { line: 1, col: 6 });
        assert!(matches!(parse_poly("x + z", &c), Err(Error::UnknownVariable { col: 5, .. })));
        assert!(matches!(parse_poly("x +", &c), Err(Error::Syntax { line: 1, col: 4, .. })));
        assert!(matches!(parse_poly("x\n  ** y", &c), Err(Error::Syntax { line: 2, col: 4, .. })));
        assert!(matches!(parse_poly("x^-1", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_form("d(x)*d(y)", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x $ y", &c), Err(Error::Syntax { col: 3, .. })));
    }

    #[test]
    fn lists() {
        assert_eq!(split_list("x, (x+y, 1), y^2"), vec!["x", "(x+y, 1)", "y^2"]);
        assert!(split_list("").is_empty());
    }
}
