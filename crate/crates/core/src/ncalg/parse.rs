//! Expression parsing shared by the library and the CLI.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! sum     := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ['^' ['-'] int]
//! primary := '(' sum ')' | generator | number | 'q'
//! gen     := 'X[' i ',' j ']' | 'Y[' i ']' | 'E[' i ']' | 'F[' i ']'
//!          | 'K{' rat (',' rat)* '}' | 'Ka{' int (',' int)* '}'
//! number  := int ['/' int]
//! ```
//!
//! There is no division operator, so `p/r` is unambiguous as a rational
//! literal. The AST is interpreted against a coordinate algebra here
//! (`expr_to_ncpoly`) and against the enveloping-algebra calculus in the
//! uqrep module; atoms outside the target family are domain errors, not
//! parse errors.

use super::{AlgError, AlgebraSpec, GeneratorId, NCPoly};
use crate::coeff::{rat, rat_int, LaurentPoly, Rat};
use std::fmt;
use thiserror::Error;

/// Parse failure with a byte offset into the input.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

// ---- AST ----

/// Leaf symbol. Generator indices stay wide here; range checking happens
/// at interpretation time against a concrete algebra.
#[derive(Clone, PartialEq, Debug)]
pub enum Atom {
    GenX { row: i64, col: i64 },
    GenY { idx: i64 },
    GenE { idx: i64 },
    GenF { idx: i64 },
    KOmega(Vec<Rat>),
    KAlpha(Vec<i64>),
    Coeff(LaurentPoly),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::GenX { row, col } => write!(f, "X[{},{}]", row, col),
            Atom::GenY { idx } => write!(f, "Y[{}]", idx),
            Atom::GenE { idx } => write!(f, "E[{}]", idx),
            Atom::GenF { idx } => write!(f, "F[{}]", idx),
            Atom::KOmega(v) => {
                write!(f, "K{{")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "}}")
            }
            Atom::KAlpha(v) => {
                write!(f, "Ka{{")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "}}")
            }
            Atom::Coeff(c) => write!(f, "{}", c),
        }
    }
}

/// Expression tree. `Sum` carries a negation flag per summand.
#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Atom(Atom),
    Pow(Box<Expr>, i64),
    Mul(Vec<Expr>),
    Sum(Vec<(bool, Expr)>),
}

// ---- Lexer ----

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Name(String),
    Int(i64),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Caret,
    Star,
    Plus,
    Minus,
    Slash,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'^' => Tok::Caret,
            b'*' => Tok::Star,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'/' => Tok::Slash,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let Ok(v) = text.parse::<i64>() else {
                    return err(start, format!("integer literal {} overflows", text));
                };
                toks.push((start, Tok::Int(v)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                toks.push((start, Tok::Name(input[start..i].to_string())));
                continue;
            }
            other => return err(i, format!("unexpected character {:?}", other as char)),
        };
        toks.push((i, tok));
        i += 1;
    }
    Ok(toks)
}

// ---- Parser ----

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            err(self.here(), format!("expected {}", what))
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(v),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                err(self.here(), format!("expected {}", what))
            }
        }
    }

    fn signed_int(&mut self, what: &str) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.int(what)?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rat, ParseError> {
        let p = self.signed_int("a rational p/r")?;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let at = self.here();
            let r = self.int("a denominator")?;
            if r == 0 {
                return err(at, "zero denominator");
            }
            Ok(rat(p, r))
        } else {
            Ok(rat_int(p))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        loop {
            terms.push((neg, self.term()?));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    neg = false;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    neg = true;
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(Expr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Expr::Mul(factors))
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let p = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = self.signed_int("an exponent")?;
            Ok(Expr::Pow(Box::new(p), k))
        } else {
            Ok(p)
        }
    }

    fn bracket_indices(&mut self, count: usize) -> Result<Vec<i64>, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut out = Vec::new();
        for k in 0..count {
            if k > 0 {
                self.expect(&Tok::Comma, "','")?;
            }
            out.push(self.int("an index")?);
        }
        self.expect(&Tok::RBracket, "']'")?;
        Ok(out)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Int(p)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let dat = self.here();
                    let r = self.int("a denominator")?;
                    if r == 0 {
                        return err(dat, "zero denominator");
                    }
                    Ok(Expr::Atom(Atom::Coeff(LaurentPoly::from_rat(rat(p, 1) / rat_int(r)))))
                } else {
                    Ok(Expr::Atom(Atom::Coeff(LaurentPoly::from_int(p))))
                }
            }
            Some(Tok::Name(name)) => match name.as_str() {
                "q" => Ok(Expr::Atom(Atom::Coeff(LaurentPoly::q()))),
                "X" => {
                    let ix = self.bracket_indices(2)?;
                    Ok(Expr::Atom(Atom::GenX {
                        row: ix[0],
                        col: ix[1],
                    }))
                }
                "Y" => {
                    let ix = self.bracket_indices(1)?;
                    Ok(Expr::Atom(Atom::GenY { idx: ix[0] }))
                }
                "E" => {
                    let ix = self.bracket_indices(1)?;
                    Ok(Expr::Atom(Atom::GenE { idx: ix[0] }))
                }
                "F" => {
                    let ix = self.bracket_indices(1)?;
                    Ok(Expr::Atom(Atom::GenF { idx: ix[0] }))
                }
                "K" => {
                    self.expect(&Tok::LBrace, "'{'")?;
                    let mut coords = vec![self.rational()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        coords.push(self.rational()?);
                    }
                    self.expect(&Tok::RBrace, "'}'")?;
                    Ok(Expr::Atom(Atom::KOmega(coords)))
                }
                "Ka" => {
                    self.expect(&Tok::LBrace, "'{'")?;
                    let mut coords = vec![self.signed_int("an integer coordinate")?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        coords.push(self.signed_int("an integer coordinate")?);
                    }
                    self.expect(&Tok::RBrace, "'}'")?;
                    Ok(Expr::Atom(Atom::KAlpha(coords)))
                }
                other => err(at, format!("unknown symbol {}", other)),
            },
            _ => err(at, "expected an expression"),
        }
    }
}

/// Parses the shared expression grammar into an AST.
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: input.len(),
    };
    let e = p.sum()?;
    if p.pos != toks.len() {
        return err(p.here(), "trailing input");
    }
    Ok(e)
}

// ---- Interpretation into a coordinate algebra ----

fn gen_for(spec: AlgebraSpec, atom: &Atom) -> Result<GeneratorId, AlgError> {
    let check = |v: i64, text: String| -> Result<u8, AlgError> {
        if (1..=255).contains(&v) {
            Ok(v as u8)
        } else {
            Err(AlgError::IndexOutOfRange {
                gen: text,
                size: spec.size(),
            })
        }
    };
    match atom {
        Atom::GenX { row, col } => {
            let r = check(*row, atom.to_string())?;
            let c = check(*col, atom.to_string())?;
            Ok(GeneratorId::x(r, c))
        }
        Atom::GenY { idx } => Ok(GeneratorId::y(check(*idx, atom.to_string())?)),
        _ => Err(AlgError::WrongFamily {
            gen: atom.to_string(),
            spec: spec.name(),
        }),
    }
}

/// Evaluates an AST as an element of the given coordinate algebra,
/// normal-formed. E/F/K atoms belong to the enveloping-algebra
/// interpreter and are rejected here.
pub fn expr_to_ncpoly(e: &Expr, spec: AlgebraSpec) -> Result<NCPoly, AlgError> {
    match e {
        Expr::Atom(Atom::Coeff(c)) => Ok(NCPoly::scalar(spec, c.clone())),
        Expr::Atom(atom) => NCPoly::generator(spec, gen_for(spec, atom)?),
        Expr::Pow(b, k) => expr_to_ncpoly(b, spec)?.pow_i(*k),
        Expr::Mul(fs) => {
            let mut acc = NCPoly::one(spec);
            for f in fs {
                acc = acc.mul(&expr_to_ncpoly(f, spec)?)?;
            }
            Ok(acc)
        }
        Expr::Sum(ts) => {
            let mut acc = NCPoly::zero(spec);
            for (neg, t) in ts {
                let v = expr_to_ncpoly(t, spec)?;
                acc = if *neg { acc.sub(&v) } else { acc.add(&v) };
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(spec: AlgebraSpec, input: &str) -> String {
        expr_to_ncpoly(&parse_expr(input).unwrap(), spec)
            .unwrap()
            .to_string()
    }

    #[test]
    fn commutation_examples() {
        let qm = AlgebraSpec::QMatrix(2);
        assert_eq!(
            nf(qm, "X[2,2]*X[1,1]"),
            "X[1,1]*X[2,2] - (q - q^-1)*X[1,2]*X[2,1]"
        );
        assert_eq!(nf(qm, "X[1,1]*X[1,2] - q*X[1,2]*X[1,1]"), "0");
        assert_eq!(nf(AlgebraSpec::BorelPlus(2), "X[2,2]"), "X[1,1]^-1");
        assert_eq!(nf(AlgebraSpec::BorelPlus(2), "X[1,1]^-1*X[1,2]"), "X[1,1]^-1*X[1,2]");
    }

    #[test]
    fn coefficients_and_parens() {
        let qm = AlgebraSpec::QMatrix(2);
        assert_eq!(nf(qm, "2/3*q^-1"), "2/3*q^-1");
        assert_eq!(nf(qm, "(q - q^-1)*X[1,2]"), "(q - q^-1)*X[1,2]");
        assert_eq!(nf(qm, "-X[1,2] + X[1,2]"), "0");
        assert_eq!(nf(qm, "(X[1,2] + X[2,1])^2"), nf(qm, "X[1,2]^2 + 2*X[1,2]*X[2,1] + X[2,1]^2"));
        assert_eq!(nf(AlgebraSpec::Torus(2), "Y[1]^-3*Y[2]"), "Y[1]^-4");
    }

    #[test]
    fn uq_atoms_parse_but_do_not_interpret_here() {
        let e = parse_expr("K{1,-1/2}*E[1]^2").unwrap();
        let Expr::Mul(fs) = &e else { panic!() };
        assert_eq!(fs.len(), 2);
        assert!(matches!(fs[0], Expr::Atom(Atom::KOmega(_))));
        assert!(matches!(
            expr_to_ncpoly(&e, AlgebraSpec::QMatrix(2)),
            Err(AlgError::WrongFamily { .. })
        ));
        let ka = parse_expr("Ka{1,0,-2}").unwrap();
        assert!(matches!(ka, Expr::Atom(Atom::KAlpha(ref v)) if v == &vec![1, 0, -2]));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_expr("X[1,2").unwrap_err().pos, 5);
        assert!(parse_expr("X[1,2]*").is_err());
        assert!(parse_expr("Z[1]").is_err());
        assert!(parse_expr("1/0").is_err());
        assert!(parse_expr("q^").is_err());
        assert!(parse_expr("X[1,2] X[2,1]").is_err());
    }

    #[test]
    fn domain_errors_are_not_parse_errors() {
        let e = parse_expr("X[5,1]").unwrap();
        assert!(matches!(
            expr_to_ncpoly(&e, AlgebraSpec::QMatrix(2)),
            Err(AlgError::IndexOutOfRange { .. })
        ));
        let neg = parse_expr("X[1,2]^-1").unwrap();
        assert!(expr_to_ncpoly(&neg, AlgebraSpec::QMatrix(2)).is_err());
    }
}
