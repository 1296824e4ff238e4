//! Infix expressions over `Q, D, E, a, ad, V`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | symbol | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `[x, y]` is the commutator. `a†` is accepted as a spelling of `ad`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};

use super::{AlgebraElement, AlgebraError, BosonElement, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Q,
    D,
    E,
    A,
    Ad,
    V,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Sym(Symbol),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Int(_) => {}
            Expr::Sym(s) => {
                out.insert(*s);
            }
            Expr::Neg(x) | Expr::Pow(x, _) => x.symbols(out),
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Commutator(x, y) => {
                x.symbols(out);
                y.symbols(out);
            }
        }
    }
}

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed<S: Scalar> {
    Weyl(AlgebraElement<S>),
    Boson(BosonElement<S>),
}

impl<S: Scalar> std::fmt::Display for Parsed<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parsed::Weyl(x) => x.fmt(f),
            Parsed::Boson(x) => x.fmt(f),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(AlgebraError::Parse { offset, message: message.into() })
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{c}'"))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return err(self.pos, "expected an integer");
        }
        self.pos += digits.len();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') || self.eat('−') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') || self.eat('−') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.pos;
            let n = self.integer()?;
            let n: u32 = match u32::try_from(n) {
                Ok(n) => n,
                Err(_) => return err(at, "exponent too large"),
            };
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(',')?;
                let y = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Commutator(Box::new(x), Box::new(y)))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) if c.is_alphabetic() => {
                let ident: String = self.rest().chars().take_while(|c| c.is_alphanumeric() || *c == '†').collect();
                self.pos += ident.len();
                let sym = match ident.as_str() {
                    "Q" => Symbol::Q,
                    "D" => Symbol::D,
                    "E" => Symbol::E,
                    "a" => Symbol::A,
                    "ad" | "a†" => Symbol::Ad,
                    "V" => Symbol::V,
                    other => return err(at, format!("unknown symbol '{other}'")),
                };
                Ok(Expr::Sym(sym))
            }
            Some(c) => err(at, format!("unexpected '{c}'")),
            None => err(at, "unexpected end of input"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

fn eval<S: Scalar>(e: &Expr, sym: &dyn Fn(Symbol) -> AlgebraElement<S>) -> Result<AlgebraElement<S>> {
    Ok(match e {
        Expr::Int(n) => AlgebraElement::scalar(S::from_bigint(n)),
        Expr::Sym(s) => sym(*s),
        Expr::Add(x, y) => &eval(x, sym)? + &eval(y, sym)?,
        Expr::Sub(x, y) => &eval(x, sym)? - &eval(y, sym)?,
        Expr::Mul(x, y) => eval(x, sym)?.multiply(&eval(y, sym)?)?,
        Expr::Neg(x) => -&eval(x, sym)?,
        Expr::Pow(x, n) => eval(x, sym)?.pow(*n)?,
        Expr::Commutator(x, y) => eval(x, sym)?.commutator(&eval(y, sym)?)?,
    })
}

/// Parses and normal-orders.
///
/// `V` selects boson mode, where `a, ad, V` are the generators and `Q, D, E`
/// are not allowed. Without `V`, an expression in `a, ad` alone is also read
/// in boson mode; mixed with `Q, D, E` they are expanded as
/// `a = (Q + D)/√2`, `ad = (Q − D)/√2`.
pub fn parse<S: Scalar>(src: &str) -> Result<Parsed<S>> {
    let e = parse_expr(src)?;
    let mut syms = BTreeSet::new();
    e.symbols(&mut syms);
    let weyl = syms.iter().any(|s| matches!(s, Symbol::Q | Symbol::D | Symbol::E));
    let boson = syms.iter().any(|s| matches!(s, Symbol::A | Symbol::Ad | Symbol::V));
    if syms.contains(&Symbol::V) && weyl {
        return err(0, "V cannot be mixed with Q, D or E");
    }
    if boson && !weyl {
        // boson coding: Q ↔ a†, E ↔ V, D ↔ a
        let x = eval::<S>(&e, &|s| match s {
            Symbol::A => AlgebraElement::d(),
            Symbol::Ad => AlgebraElement::q(),
            _ => AlgebraElement::e(),
        })?;
        return Ok(Parsed::Boson(BosonElement::from(x)));
    }
    let r = S::sqrt_ratio(&BigUint::from(1u8), &BigUint::from(2u8));
    let x = eval::<S>(&e, &|s| match s {
        Symbol::Q => AlgebraElement::q(),
        Symbol::D => AlgebraElement::d(),
        Symbol::E => AlgebraElement::e(),
        Symbol::A => (&AlgebraElement::q() + &AlgebraElement::d()).scale(&r),
        Symbol::Ad => (&AlgebraElement::q() - &AlgebraElement::d()).scale(&r),
        Symbol::V => unreachable!("rejected above"),
    })?;
    Ok(Parsed::Weyl(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Surd;

    fn weyl(src: &str) -> String {
        match parse::<Surd>(src).unwrap() {
            Parsed::Weyl(x) => x.to_string(),
            Parsed::Boson(b) => panic!("expected Weyl, got {b}"),
        }
    }

    #[test]
    fn commutator_is_one() {
        assert_eq!(weyl("[D,Q]"), "1");
        assert_eq!(weyl("D*Q - Q*D"), "1");
    }

    #[test]
    fn precedence() {
        assert_eq!(weyl("2*Q^2 + -Q"), "2*Q^2 - Q");
        assert_eq!(weyl("(Q + D)^2"), "Q^2 + 2*Q*D + D^2 + 1");
        assert_eq!(weyl("E*D^2*Q^2*E"), "2*E");
    }

    #[test]
    fn boson_mode() {
        let p = parse::<Surd>("[a, ad]").unwrap();
        assert_eq!(p.to_string(), "1");
        assert!(matches!(p, Parsed::Boson(_)));
        assert_eq!(parse::<Surd>("a*V").unwrap().to_string(), "0");
        assert_eq!(parse::<Surd>("V*ad").unwrap().to_string(), "0");
    }

    #[test]
    fn mixed_symbols() {
        // a·ad − ad·a = [a, a†] = 1 also through the Q, D expansion
        assert_eq!(weyl("Q*0 + a*ad - ad*a"), "1");
        assert!(parse::<Surd>("V*Q").is_err());
    }

    #[test]
    fn errors_carry_offsets() {
        match parse::<Surd>("Q + X") {
            Err(AlgebraError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse::<Surd>("(Q").is_err());
        assert!(parse::<Surd>("Q Q").is_err());
    }
}
