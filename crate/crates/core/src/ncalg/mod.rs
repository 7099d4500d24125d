//! Words over indexed generators, noncommutative polynomials, tensor
//! elements, and homomorphisms given by generator images.
//!
//! Four algebra kinds share one engine, each with its own canonical form:
//!
//! - `QMatrix(N)`: the quantum matrix algebra on X\[i,j\], 1 <= i,j <= N.
//!   Canonical words are ascending in row-major order on (row, col).
//! - `BorelPlus(N)` / `BorelMinus(N)`: the quotients by the strictly lower
//!   (resp. upper) generators, with X\[1,1\]...X\[N,N\] = 1 making the
//!   diagonal invertible. Canonical words carry the diagonal Laurent block
//!   leftmost (X\[N,N\] eliminated), then the strictly upper (resp. lower)
//!   letters ascending.
//! - `Torus(N)`: the commutative Laurent quotient on Y\[i\] with
//!   Y\[1\]...Y\[N\] = 1, Y\[N\] eliminated.
//!
//! Generator indices are 1-based everywhere, matching the textual forms
//! `X[i,j]`, `Y[i]`.

mod json;
mod parse;
mod rewrite;

pub use json::{ncpoly_to_json, tensor_to_json};
pub use parse::{expr_to_ncpoly, parse_expr, Atom, Expr, ParseError};

use crate::coeff::LaurentPoly;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

// ---- Generators, letters, words ----

/// Indexed generator name. `K` never occurs inside a [`Word`]; K-parts of
/// quantized-enveloping-algebra elements are weights, not letters (see the
/// uqrep module). The derived order is row-major on (row, col) for X, which
/// is exactly the monomial order the rewriting engine sorts by.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GeneratorId {
    X { row: u8, col: u8 },
    Y { idx: u8 },
    E { idx: u8 },
    F { idx: u8 },
    K,
}

impl GeneratorId {
    pub fn x(row: u8, col: u8) -> Self {
        GeneratorId::X { row, col }
    }

    pub fn y(idx: u8) -> Self {
        GeneratorId::Y { idx }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::X { row, col } => write!(f, "X[{},{}]", row, col),
            GeneratorId::Y { idx } => write!(f, "Y[{}]", idx),
            GeneratorId::E { idx } => write!(f, "E[{}]", idx),
            GeneratorId::F { idx } => write!(f, "F[{}]", idx),
            GeneratorId::K => write!(f, "K"),
        }
    }
}

/// Generator power. Exponent is never zero; negative exponents are only
/// meaningful for generators the ambient algebra flags invertible.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub gen: GeneratorId,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: GeneratorId, exp: i64) -> Self {
        debug_assert!(exp != 0);
        Letter { gen, exp }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^{}", self.gen, self.exp)
        }
    }
}

/// Monomial: a sequence of letters with adjacent letters on distinct
/// generators (equal neighbors merge, zero exponents vanish). The empty
/// word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: GeneratorId) -> Self {
        Word(vec![Letter::new(g, 1)])
    }

    /// Builds a word, merging adjacent letters on the same generator and
    /// dropping letters whose exponents cancel to zero.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.gen == l.gen => {
                    last.exp += l.exp;
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total letter count with multiplicity (absolute exponents).
    pub fn length(&self) -> u64 {
        self.0.iter().map(|l| l.exp.unsigned_abs()).sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

// ---- Algebra kinds ----

/// The four built-in presentations. The rewrite rules, generator order,
/// invertibility flags, and eliminated generator are all functions of the
/// kind and size, so the enum carries everything the engine needs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AlgebraSpec {
    QMatrix(u8),
    BorelPlus(u8),
    BorelMinus(u8),
    Torus(u8),
}

impl AlgebraSpec {
    pub fn size(&self) -> u8 {
        match self {
            AlgebraSpec::QMatrix(n)
            | AlgebraSpec::BorelPlus(n)
            | AlgebraSpec::BorelMinus(n)
            | AlgebraSpec::Torus(n) => *n,
        }
    }

    /// Short name used in serialization and CLI flags.
    pub fn name(&self) -> String {
        match self {
            AlgebraSpec::QMatrix(n) => format!("qm:{}", n),
            AlgebraSpec::BorelPlus(n) => format!("borel+:{}", n),
            AlgebraSpec::BorelMinus(n) => format!("borel-:{}", n),
            AlgebraSpec::Torus(n) => format!("torus:{}", n),
        }
    }

    /// True when negative exponents on `g` are allowed: Borel diagonals and
    /// all torus generators.
    pub fn is_invertible(&self, g: GeneratorId) -> bool {
        match (self, g) {
            (AlgebraSpec::BorelPlus(_) | AlgebraSpec::BorelMinus(_), GeneratorId::X { row, col }) => {
                row == col
            }
            (AlgebraSpec::Torus(_), GeneratorId::Y { .. }) => true,
            _ => false,
        }
    }

    /// Checks family, index range, and the invertibility constraint on the
    /// exponent sign.
    pub fn validate_letter(&self, l: &Letter) -> Result<(), AlgError> {
        let n = self.size();
        let in_range = |i: u8| i >= 1 && i <= n;
        let family_ok = match (self, l.gen) {
            (
                AlgebraSpec::QMatrix(_) | AlgebraSpec::BorelPlus(_) | AlgebraSpec::BorelMinus(_),
                GeneratorId::X { row, col },
            ) => {
                if !in_range(row) || !in_range(col) {
                    return Err(AlgError::IndexOutOfRange {
                        gen: l.gen.to_string(),
                        size: n,
                    });
                }
                true
            }
            (AlgebraSpec::Torus(_), GeneratorId::Y { idx }) => {
                if !in_range(idx) {
                    return Err(AlgError::IndexOutOfRange {
                        gen: l.gen.to_string(),
                        size: n,
                    });
                }
                true
            }
            _ => false,
        };
        if !family_ok {
            return Err(AlgError::WrongFamily {
                gen: l.gen.to_string(),
                spec: self.name(),
            });
        }
        if l.exp < 0 && !self.is_invertible(l.gen) {
            return Err(AlgError::NegativeExponent {
                gen: l.gen.to_string(),
            });
        }
        Ok(())
    }
}

/// Errors from word/polynomial construction and the rewrite engine.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgError {
    #[error("generator {gen} out of range for size {size}")]
    IndexOutOfRange { gen: String, size: u8 },
    #[error("generator {gen} does not belong to algebra {spec}")]
    WrongFamily { gen: String, spec: String },
    #[error("negative exponent on non-invertible generator {gen}")]
    NegativeExponent { gen: String },
    #[error("algebra mismatch: {left} vs {right}")]
    SpecMismatch { left: String, right: String },
    #[error("no image provided for generator {gen}")]
    MissingImage { gen: String },
    #[error("image of invertible generator {gen} is not an invertible monomial")]
    NonInvertibleImage { gen: String },
    #[error("expected a single-term monomial element")]
    NotAMonomial,
    #[error("{msg}")]
    Invalid { msg: String },
}

// ---- NCPoly ----

/// Noncommutative polynomial over a fixed algebra kind: finite map from
/// words to nonzero Laurent coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCPoly {
    spec: AlgebraSpec,
    terms: BTreeMap<Word, LaurentPoly>,
}

impl NCPoly {
    pub fn zero(spec: AlgebraSpec) -> Self {
        NCPoly {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: AlgebraSpec) -> Self {
        NCPoly::monomial(spec, Word::one(), LaurentPoly::one())
    }

    pub fn scalar(spec: AlgebraSpec, c: LaurentPoly) -> Self {
        NCPoly::monomial(spec, Word::one(), c)
    }

    /// Raw term; no normalization. The zero coefficient gives the zero
    /// polynomial.
    pub fn monomial(spec: AlgebraSpec, word: Word, coeff: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        NCPoly { spec, terms }
    }

    /// Canonical form of a single generator (X[N,N] in a Borel kind already
    /// rewrites to the inverse diagonal block, for instance).
    pub fn generator(spec: AlgebraSpec, g: GeneratorId) -> Result<Self, AlgError> {
        NCPoly::monomial(spec, Word::gen(g), LaurentPoly::one()).normal_form()
    }

    /// Canonical form of a single letter with exponent.
    pub fn letter(spec: AlgebraSpec, g: GeneratorId, exp: i64) -> Result<Self, AlgError> {
        if exp == 0 {
            return Ok(NCPoly::one(spec));
        }
        NCPoly::monomial(
            spec,
            Word::from_letters([Letter::new(g, exp)]),
            LaurentPoly::one(),
        )
        .normal_form()
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Word::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff_of(&self, w: &Word) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    fn insert_term(terms: &mut BTreeMap<Word, LaurentPoly>, w: Word, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&w) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    terms.remove(&w);
                }
            }
            None => {
                terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.spec, other.spec);
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            Self::insert_term(&mut terms, w.clone(), c.clone());
        }
        NCPoly {
            spec: self.spec,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        NCPoly {
            spec: self.spec,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        if c.is_zero() {
            return NCPoly::zero(self.spec);
        }
        NCPoly {
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Rewrites every term to the algebra's canonical representative. The result
    /// is independent of reduction strategy (exercised by the associativity
    /// suites); termination comes from the sorting metric of the oriented
    /// relation system.
    pub fn normal_form(&self) -> Result<Self, AlgError> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            for (nw, nc) in rewrite::normalize_word(self.spec, w, c)? {
                Self::insert_term(&mut terms, nw, nc);
            }
        }
        Ok(NCPoly {
            spec: self.spec,
            terms,
        })
    }

    /// Concatenation product followed by normalization.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        if self.spec != other.spec {
            return Err(AlgError::SpecMismatch {
                left: self.spec.name(),
                right: other.spec.name(),
            });
        }
        let mut out = NCPoly::zero(self.spec);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let p = NCPoly::monomial(self.spec, w1.concat(w2), c1.mul(c2)).normal_form()?;
                out = out.add(&p);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgError> {
        let mut acc = NCPoly::one(self.spec);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a single-term element whose word is made of invertible
    /// letters and whose coefficient is a monomial. Everything else is
    /// rejected: that is all the localization the quotient algebras carry.
    pub fn try_inverse(&self) -> Result<Self, AlgError> {
        if self.terms.len() != 1 {
            return Err(AlgError::NotAMonomial);
        }
        let (w, c) = self.terms.iter().next().unwrap();
        let cinv = c.inv_monomial().map_err(|_| AlgError::NotAMonomial)?;
        for l in w.letters() {
            if !self.spec.is_invertible(l.gen) {
                return Err(AlgError::NonInvertibleImage {
                    gen: l.gen.to_string(),
                });
            }
        }
        let inv_word = Word::from_letters(
            w.letters()
                .iter()
                .rev()
                .map(|l| Letter::new(l.gen, -l.exp)),
        );
        NCPoly::monomial(self.spec, inv_word, cinv).normal_form()
    }

    /// Integer power, negative exponents through [`NCPoly::try_inverse`].
    pub fn pow_i(&self, e: i64) -> Result<Self, AlgError> {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.try_inverse()?.pow((-e) as u32)
        }
    }

    /// Coefficient-wise specialization at a rational q (root-of-unity
    /// guard applies); terms whose coefficients vanish at the point drop out.
    pub fn specialize(&self, qval: &crate::coeff::Rat) -> Result<Self, crate::coeff::CoeffError> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = c.eval_specialized(qval)?;
            let p = LaurentPoly::from_rat(v);
            if !p.is_zero() {
                terms.insert(w.clone(), p);
            }
        }
        Ok(NCPoly {
            spec: self.spec,
            terms,
        })
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(w, c)| (vec![w], c)))
    }
}

/// Shared term printer for NCPoly (one leg) and TensorPoly (several legs,
/// joined by `(x)`). Signs come off the highest-exponent coefficient; a
/// composite coefficient is parenthesized, as in `- (q - q^-1)*X[1,2]*X[2,1]`.
fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (Vec<&'a Word>, &'a LaurentPoly)>,
{
    let mut first = true;
    let mut any = false;
    for (words, coeff) in terms {
        any = true;
        let lead_exp = coeff.max_exp().expect("stored coefficients are nonzero");
        let neg = num::Signed::is_negative(&coeff.coeff(lead_exp));
        let mag = if neg { coeff.neg() } else { coeff.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let unit_word = words.iter().all(|w| w.is_empty());
        if unit_word {
            if mag.as_monomial().is_some() {
                write!(f, "{}", mag)?;
            } else {
                write!(f, "({})", mag)?;
            }
        } else {
            if !mag.is_one() {
                if mag.as_monomial().is_some() {
                    write!(f, "{}*", mag)?;
                } else {
                    write!(f, "({})*", mag)?;
                }
            }
            for (i, w) in words.iter().enumerate() {
                if i > 0 {
                    write!(f, " (x) ")?;
                }
                write!(f, "{}", w)?;
            }
        }
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

// ---- TensorPoly ----

/// Element of a tensor product of the above algebras, one spec per leg.
/// Multiplication is leg-wise with no braiding. Two legs cover the public
/// operations; comultiplication iterates produce longer leg vectors (the
/// coassociativity checks need three).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorPoly {
    specs: Vec<AlgebraSpec>,
    terms: BTreeMap<Vec<Word>, LaurentPoly>,
}

impl TensorPoly {
    pub fn zero(specs: Vec<AlgebraSpec>) -> Self {
        TensorPoly {
            specs,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(specs: Vec<AlgebraSpec>) -> Self {
        let words = vec![Word::one(); specs.len()];
        TensorPoly::monomial(specs, words, LaurentPoly::one())
    }

    pub fn monomial(specs: Vec<AlgebraSpec>, words: Vec<Word>, coeff: LaurentPoly) -> Self {
        assert_eq!(specs.len(), words.len(), "one word per leg");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(words, coeff);
        }
        TensorPoly { specs, terms }
    }

    /// Pure tensor of polynomial legs: distributes all term combinations.
    pub fn of(legs: &[NCPoly]) -> Self {
        let specs: Vec<AlgebraSpec> = legs.iter().map(|p| p.spec()).collect();
        let mut out = TensorPoly::one(specs);
        for (i, leg) in legs.iter().enumerate() {
            let mut next = TensorPoly::zero(out.specs.clone());
            for (words, c) in &out.terms {
                for (w, cw) in leg.terms() {
                    let mut nw = words.clone();
                    nw[i] = nw[i].concat(w);
                    Self::insert_term(&mut next.terms, nw, c.mul(cw));
                }
            }
            out = next;
        }
        out
    }

    pub fn specs(&self) -> &[AlgebraSpec] {
        &self.specs
    }

    pub fn left_spec(&self) -> AlgebraSpec {
        self.specs[0]
    }

    pub fn right_spec(&self) -> AlgebraSpec {
        *self.specs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &LaurentPoly)> {
        self.terms.iter()
    }

    fn insert_term(terms: &mut BTreeMap<Vec<Word>, LaurentPoly>, w: Vec<Word>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&w) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    terms.remove(&w);
                }
            }
            None => {
                terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.specs, other.specs);
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            Self::insert_term(&mut terms, w.clone(), c.clone());
        }
        TensorPoly {
            specs: self.specs.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        TensorPoly {
            specs: self.specs.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        if c.is_zero() {
            return TensorPoly::zero(self.specs.clone());
        }
        TensorPoly {
            specs: self.specs.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Leg-wise normalization.
    pub fn normal_form(&self) -> Result<Self, AlgError> {
        let mut out = TensorPoly::zero(self.specs.clone());
        for (words, c) in &self.terms {
            // Normalize each leg word separately, then recombine the
            // cross products of the resulting term lists.
            let mut partial: Vec<(Vec<Word>, LaurentPoly)> = vec![(Vec::new(), c.clone())];
            for (i, w) in words.iter().enumerate() {
                let pieces = rewrite::normalize_word(self.specs[i], w, &LaurentPoly::one())?;
                let mut next = Vec::new();
                for (prefix, pc) in &partial {
                    for (nw, nc) in &pieces {
                        let mut p = prefix.clone();
                        p.push(nw.clone());
                        next.push((p, pc.mul(nc)));
                    }
                }
                partial = next;
            }
            for (w, pc) in partial {
                Self::insert_term(&mut out.terms, w, pc);
            }
        }
        Ok(out)
    }

    /// Leg-wise product: (a (x) b)(c (x) d) = ac (x) bd, each leg
    /// normal-formed. No braiding.
    pub fn tensor_mul(&self, other: &Self) -> Result<Self, AlgError> {
        if self.specs != other.specs {
            return Err(AlgError::SpecMismatch {
                left: format!("{:?}", self.specs.iter().map(|s| s.name()).collect::<Vec<_>>()),
                right: format!("{:?}", other.specs.iter().map(|s| s.name()).collect::<Vec<_>>()),
            });
        }
        let mut concat = TensorPoly::zero(self.specs.clone());
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let words: Vec<Word> = w1
                    .iter()
                    .zip(w2.iter())
                    .map(|(a, b)| a.concat(b))
                    .collect();
                Self::insert_term(&mut concat.terms, words, c1.mul(c2));
            }
        }
        concat.normal_form()
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgError> {
        let mut acc = TensorPoly::one(self.specs.clone());
        for _ in 0..e {
            acc = acc.tensor_mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a single pure tensor of invertible monomials.
    pub fn try_inverse(&self) -> Result<Self, AlgError> {
        if self.terms.len() != 1 {
            return Err(AlgError::NotAMonomial);
        }
        let (words, c) = self.terms.iter().next().unwrap();
        let cinv = c.inv_monomial().map_err(|_| AlgError::NotAMonomial)?;
        let mut inv_words = Vec::new();
        for (i, w) in words.iter().enumerate() {
            for l in w.letters() {
                if !self.specs[i].is_invertible(l.gen) {
                    return Err(AlgError::NonInvertibleImage {
                        gen: l.gen.to_string(),
                    });
                }
            }
            inv_words.push(Word::from_letters(
                w.letters().iter().rev().map(|l| Letter::new(l.gen, -l.exp)),
            ));
        }
        TensorPoly {
            specs: self.specs.clone(),
            terms: BTreeMap::from([(inv_words, cinv)]),
        }
        .normal_form()
    }

    pub fn pow_i(&self, e: i64) -> Result<Self, AlgError> {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.try_inverse()?.pow((-e) as u32)
        }
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(w, c)| (w.iter().collect(), c)))
    }
}

// ---- Homomorphic extension ----

/// Target of a generator-image homomorphism. Implemented by [`NCPoly`] and
/// [`TensorPoly`]; [`apply_hom`] is generic over it.
pub trait AlgElem: Sized + Clone {
    fn hom_one(&self) -> Self;
    fn hom_add(&self, other: &Self) -> Self;
    fn hom_mul(&self, other: &Self) -> Result<Self, AlgError>;
    fn hom_scale(&self, c: &LaurentPoly) -> Self;
    fn hom_pow_i(&self, e: i64) -> Result<Self, AlgError>;
}

impl AlgElem for NCPoly {
    fn hom_one(&self) -> Self {
        NCPoly::one(self.spec)
    }
    fn hom_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn hom_mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.mul(other)
    }
    fn hom_scale(&self, c: &LaurentPoly) -> Self {
        self.scale(c)
    }
    fn hom_pow_i(&self, e: i64) -> Result<Self, AlgError> {
        self.pow_i(e)
    }
}

impl AlgElem for TensorPoly {
    fn hom_one(&self) -> Self {
        TensorPoly::one(self.specs.clone())
    }
    fn hom_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn hom_mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.tensor_mul(other)
    }
    fn hom_scale(&self, c: &LaurentPoly) -> Self {
        self.scale(c)
    }
    fn hom_pow_i(&self, e: i64) -> Result<Self, AlgError> {
        self.pow_i(e)
    }
}

/// The unique algebra-homomorphic extension of a generator-image map,
/// normal-formed in the target. Negative exponents push through images by
/// inversion, so images of invertible generators must be invertible
/// monomial-like elements.
pub fn apply_hom<T, Im>(p: &NCPoly, images: Im, unit: &T) -> Result<T, AlgError>
where
    T: AlgElem,
    Im: Fn(GeneratorId) -> Option<T>,
{
    let mut out = unit.hom_scale(&LaurentPoly::zero());
    for (w, c) in p.terms() {
        let mut acc = unit.hom_scale(c);
        for l in w.letters() {
            let img = images(l.gen).ok_or_else(|| AlgError::MissingImage {
                gen: l.gen.to_string(),
            })?;
            let factor = img.hom_pow_i(l.exp).map_err(|e| match e {
                AlgError::NotAMonomial | AlgError::NonInvertibleImage { .. } => {
                    AlgError::NonInvertibleImage {
                        gen: l.gen.to_string(),
                    }
                }
                other => other,
            })?;
            acc = acc.hom_mul(&factor)?;
        }
        out = out.hom_add(&acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat_int, LaurentPoly};

    fn x(r: u8, c: u8) -> GeneratorId {
        GeneratorId::x(r, c)
    }

    // ---- Words ----

    #[test]
    fn adjacent_letters_merge() {
        let w = Word::from_letters([
            Letter::new(x(1, 1), 1),
            Letter::new(x(1, 1), 2),
            Letter::new(x(1, 2), 1),
        ]);
        assert_eq!(w.letters().len(), 2);
        assert_eq!(w.letters()[0].exp, 3);
        let cancel = Word::from_letters([Letter::new(x(1, 1), 1), Letter::new(x(1, 1), -1)]);
        assert!(cancel.is_empty());
    }

    #[test]
    fn word_display() {
        let w = Word::from_letters([Letter::new(x(1, 1), -1), Letter::new(x(1, 2), 2)]);
        assert_eq!(w.to_string(), "X[1,1]^-1*X[1,2]^2");
        assert_eq!(Word::one().to_string(), "1");
    }

    #[test]
    fn generator_order_is_row_major() {
        assert!(x(1, 2) < x(2, 1));
        assert!(x(1, 1) < x(1, 2));
        assert!(x(2, 2) > x(1, 9));
        assert!(GeneratorId::y(3) > x(9, 9));
    }

    // ---- Validation ----

    #[test]
    fn validation_rejects_bad_letters() {
        let qm = AlgebraSpec::QMatrix(2);
        assert!(matches!(
            qm.validate_letter(&Letter::new(x(3, 1), 1)),
            Err(AlgError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            qm.validate_letter(&Letter::new(GeneratorId::y(1), 1)),
            Err(AlgError::WrongFamily { .. })
        ));
        assert!(matches!(
            qm.validate_letter(&Letter::new(x(1, 1), -1)),
            Err(AlgError::NegativeExponent { .. })
        ));
        let bp = AlgebraSpec::BorelPlus(2);
        assert!(bp.validate_letter(&Letter::new(x(1, 1), -1)).is_ok());
        assert!(matches!(
            bp.validate_letter(&Letter::new(x(1, 2), -1)),
            Err(AlgError::NegativeExponent { .. })
        ));
    }

    // ---- Printing ----

    #[test]
    fn poly_display_matches_golden_forms() {
        let qm = AlgebraSpec::QMatrix(2);
        let w1 = Word::from_letters([Letter::new(x(1, 1), 1), Letter::new(x(2, 2), 1)]);
        let w2 = Word::from_letters([Letter::new(x(1, 2), 1), Letter::new(x(2, 1), 1)]);
        let p = NCPoly::monomial(qm, w1, LaurentPoly::one())
            .add(&NCPoly::monomial(qm, w2, LaurentPoly::qhat().neg()));
        assert_eq!(
            p.to_string(),
            "X[1,1]*X[2,2] - (q - q^-1)*X[1,2]*X[2,1]"
        );
        assert_eq!(NCPoly::zero(qm).to_string(), "0");
        assert_eq!(NCPoly::one(qm).to_string(), "1");
        let s = NCPoly::scalar(qm, LaurentPoly::q().add(&LaurentPoly::one()));
        assert_eq!(s.to_string(), "(q + 1)");
        assert_eq!(s.neg().to_string(), "-(q + 1)");
    }

    #[test]
    fn tensor_display() {
        let qm = AlgebraSpec::QMatrix(2);
        let t = TensorPoly::of(&[
            NCPoly::generator(qm, x(1, 1)).unwrap(),
            NCPoly::generator(qm, x(1, 2)).unwrap(),
        ]);
        assert_eq!(t.to_string(), "X[1,1] (x) X[1,2]");
    }

    // ---- Scalars and linearity ----

    #[test]
    fn add_cancels_terms() {
        let qm = AlgebraSpec::QMatrix(2);
        let g = NCPoly::generator(qm, x(1, 2)).unwrap();
        assert!(g.sub(&g).is_zero());
        let two = g.add(&g);
        assert_eq!(two.coeff_of(&Word::gen(x(1, 2))), LaurentPoly::from_int(2));
    }

    #[test]
    fn unit_multiplication() {
        let qm = AlgebraSpec::QMatrix(3);
        let g = NCPoly::generator(qm, x(2, 3)).unwrap();
        assert_eq!(NCPoly::one(qm).mul(&g).unwrap(), g);
        assert_eq!(g.mul(&NCPoly::one(qm)).unwrap(), g);
    }

    #[test]
    fn spec_mismatch_rejected() {
        let a = NCPoly::one(AlgebraSpec::QMatrix(2));
        let b = NCPoly::one(AlgebraSpec::QMatrix(3));
        assert!(matches!(
            a.mul(&b),
            Err(AlgError::SpecMismatch { .. })
        ));
    }

    // ---- Inversion ----

    #[test]
    fn inverse_of_diagonal_monomial() {
        let bp = AlgebraSpec::BorelPlus(3);
        let d = NCPoly::monomial(
            bp,
            Word::from_letters([Letter::new(x(1, 1), 2), Letter::new(x(2, 2), -1)]),
            LaurentPoly::monomial(3, rat_int(2)),
        );
        let inv = d.try_inverse().unwrap();
        assert!(d.mul(&inv).unwrap().is_one());
        let g = NCPoly::generator(bp, x(1, 2)).unwrap();
        assert!(matches!(
            g.try_inverse(),
            Err(AlgError::NonInvertibleImage { .. })
        ));
        let sum = d.add(&NCPoly::one(bp));
        assert!(matches!(sum.try_inverse(), Err(AlgError::NotAMonomial)));
    }

    // ---- apply_hom ----

    #[test]
    fn identity_hom_is_normal_form() {
        let qm = AlgebraSpec::QMatrix(2);
        let w = Word::from_letters([Letter::new(x(2, 2), 1), Letter::new(x(1, 1), 1)]);
        let p = NCPoly::monomial(qm, w, LaurentPoly::one());
        let id = |g: GeneratorId| NCPoly::generator(qm, g).ok();
        let h = apply_hom(&p, id, &NCPoly::one(qm)).unwrap();
        assert_eq!(h, p.normal_form().unwrap());
    }

    #[test]
    fn counit_style_hom() {
        // X[i,j] -> delta_ij on the two-term qdet expression gives 1.
        let qm = AlgebraSpec::QMatrix(2);
        let w1 = Word::from_letters([Letter::new(x(1, 1), 1), Letter::new(x(2, 2), 1)]);
        let w2 = Word::from_letters([Letter::new(x(1, 2), 1), Letter::new(x(2, 1), 1)]);
        let p = NCPoly::monomial(qm, w1, LaurentPoly::one()).add(&NCPoly::monomial(
            qm,
            w2,
            LaurentPoly::q().neg(),
        ));
        let images = |g: GeneratorId| match g {
            GeneratorId::X { row, col } if row == col => Some(NCPoly::one(qm)),
            GeneratorId::X { .. } => Some(NCPoly::zero(qm)),
            _ => None,
        };
        let h = apply_hom(&p, images, &NCPoly::one(qm)).unwrap();
        assert!(h.is_one());
    }

    #[test]
    fn missing_image_reported() {
        let qm = AlgebraSpec::QMatrix(2);
        let p = NCPoly::generator(qm, x(1, 2)).unwrap();
        let none = |_: GeneratorId| -> Option<NCPoly> { None };
        assert!(matches!(
            apply_hom(&p, none, &NCPoly::one(qm)),
            Err(AlgError::MissingImage { .. })
        ));
    }
}
