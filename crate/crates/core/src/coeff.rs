//! Exact arithmetic in the coefficient ring Q[q, q^-1].
//!
//! A [`LaurentPoly`] is a finite map from integer exponents of q to nonzero
//! rational coefficients. All arithmetic is exact; equality is structural
//! equality of the term maps. The element q-hat = q - q^-1 shows up in every
//! straightening relation and in pairing values, so it gets a constructor of
//! its own, and [`QhatFrac`] carries values of the form f / q-hat^k without
//! ever leaving the polynomial ring (general localization is deliberately
//! not supported; division is restricted to nonzero monomials).
//!
//! Textual form is canonical: terms in descending exponent order, e.g.
//! `q^2 - 1 + 3*q^-1`. The parser accepts signed sums of `c`, `c*q^k` and
//! `q^k` with `c` a rational `p/r`.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational scalar. `BigRational` already maintains the
/// invariants we need: always reduced, denominator positive, zero is 0/1.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational p/r. Panics on r = 0.
pub fn rat(p: i64, r: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(r))
}

/// Errors from coefficient-ring operations.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CoeffError {
    #[error("evaluation at q = 0 is undefined (negative powers)")]
    EvalAtZero,
    #[error("root-of-unity guard: specialization at q = {0} is rejected")]
    RootOfUnity(String),
    #[error("division is only defined for nonzero monomial divisors")]
    NonMonomialDivisor,
    #[error("division by zero")]
    DivisionByZero,
}

// ---- LaurentPoly ----

/// Element of Q[q, q^-1]: exponent -> nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, rat_int(1))
    }

    /// The generator q.
    pub fn q() -> Self {
        LaurentPoly::monomial(1, rat_int(1))
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        LaurentPoly::monomial(k, rat_int(1))
    }

    /// q-hat = q - q^-1.
    pub fn qhat() -> Self {
        LaurentPoly::q_pow(1).sub(&LaurentPoly::q_pow(-1))
    }

    /// c * q^k; the zero polynomial when c = 0.
    pub fn monomial(k: i64, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_rat(c: Rat) -> Self {
        LaurentPoly::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        LaurentPoly::from_rat(rat_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Some((k, c)) when the polynomial is exactly c*q^k with c != 0.
    pub fn as_monomial(&self) -> Option<(i64, &Rat)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((*k, c))
        } else {
            None
        }
    }

    /// Exponent/coefficient pairs in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent with nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let k = k1 + k2;
                let entry = terms.entry(k).or_insert_with(Rat::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    /// Multiply by c*q^k without building an intermediate polynomial.
    pub fn mul_monomial(&self, k: i64, c: &Rat) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (e + k, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at a nonzero rational q. Distinct from
    /// [`LaurentPoly::eval_specialized`]: plain evaluation only guards q = 0.
    pub fn eval(&self, qval: &Rat) -> Result<Rat, CoeffError> {
        if qval.is_zero() {
            return Err(CoeffError::EvalAtZero);
        }
        let mut acc = Rat::zero();
        let inv = qval.recip();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                num::pow::pow(qval.clone(), *k as usize)
            } else {
                num::pow::pow(inv.clone(), (-*k) as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }

    /// Evaluation used when q is specialized as the deformation parameter:
    /// additionally rejects q = 1 and q = -1 (the only rational roots of
    /// unity) with a distinct error.
    pub fn eval_specialized(&self, qval: &Rat) -> Result<Rat, CoeffError> {
        if qval.is_zero() {
            return Err(CoeffError::EvalAtZero);
        }
        if qval.is_one() || (-qval.clone()).is_one() {
            return Err(CoeffError::RootOfUnity(qval.to_string()));
        }
        self.eval(qval)
    }

    /// Divide by a monomial divisor c*q^k. Any other divisor is rejected:
    /// general localization stays out of the coefficient ring.
    pub fn div_monomial(&self, divisor: &Self) -> Result<Self, CoeffError> {
        if divisor.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        match divisor.as_monomial() {
            Some((k, c)) => Ok(self.mul_monomial(-k, &c.recip())),
            None => Err(CoeffError::NonMonomialDivisor),
        }
    }

    /// Multiplicative inverse, defined exactly for nonzero monomials.
    pub fn inv_monomial(&self) -> Result<Self, CoeffError> {
        LaurentPoly::one().div_monomial(self)
    }

    /// Canonical text, terms in descending exponent order.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }
}

/// Exact quotient self / divisor when it exists in Q[q, q^-1]. Shifts both
/// operands to ordinary polynomials and long-divides; `None` when the
/// division leaves a remainder. Internal: only `QhatFrac` normalization may
/// divide by a non-monomial.
fn exact_div(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(LaurentPoly::zero());
    }
    let num_min = num.min_exp().unwrap();
    let den_min = den.min_exp().unwrap();
    // num = q^num_min * N, den = q^den_min * D with N, D ordinary polynomials
    // having nonzero constant terms; the quotient is q^(num_min-den_min) * N/D.
    let n = num.mul_monomial(-num_min, &rat_int(1));
    let d = den.mul_monomial(-den_min, &rat_int(1));
    let d_deg = d.max_exp().unwrap();
    let d_lead = d.coeff(d_deg);
    let mut rem = n;
    let mut quot = LaurentPoly::zero();
    while !rem.is_zero() {
        let r_deg = rem.max_exp().unwrap();
        if r_deg < d_deg {
            return None;
        }
        let t = LaurentPoly::monomial(r_deg - d_deg, rem.coeff(r_deg) / &d_lead);
        quot = quot.add(&t);
        rem = rem.sub(&t.mul(&d));
    }
    Some(quot.mul_monomial(num_min - den_min, &rat_int(1)))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
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
            if *k == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if *k == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

// ---- Coefficient-literal parsing ----

/// Parse error for the coefficient grammar.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("coefficient parse error at byte {pos}: {msg}")]
pub struct CoeffParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse the textual coefficient grammar: signed sums of `c`, `c*q^k`,
/// `q^k` (also plain `q`), with `c` a rational `p/r`.
pub fn parse_laurent(input: &str) -> Result<LaurentPoly, CoeffParseError> {
    let b = input.as_bytes();
    let mut pos = 0usize;
    let mut acc = LaurentPoly::zero();
    skip_ws(b, &mut pos);
    let mut first = true;
    loop {
        skip_ws(b, &mut pos);
        if pos >= b.len() {
            if first {
                return Err(err(pos, "empty coefficient"));
            }
            break;
        }
        let mut sign = 1i64;
        match b[pos] {
            b'+' => {
                pos += 1;
            }
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(err(pos, "expected '+' or '-'")),
        }
        first = false;
        skip_ws(b, &mut pos);
        let term = parse_term(b, &mut pos)?;
        acc = acc.add(&term.scale(&rat_int(sign)));
        skip_ws(b, &mut pos);
        if pos >= b.len() {
            break;
        }
        if b[pos] != b'+' && b[pos] != b'-' {
            return Err(err(pos, "expected '+' or '-'"));
        }
    }
    Ok(acc)
}

fn parse_term(b: &[u8], pos: &mut usize) -> Result<LaurentPoly, CoeffParseError> {
    if *pos < b.len() && b[*pos] == b'q' {
        let k = parse_q_power(b, pos)?;
        return Ok(LaurentPoly::q_pow(k));
    }
    let c = parse_rational(b, pos)?;
    skip_ws(b, pos);
    if *pos < b.len() && b[*pos] == b'*' {
        *pos += 1;
        skip_ws(b, pos);
        if *pos >= b.len() || b[*pos] != b'q' {
            return Err(err(*pos, "expected q after '*'"));
        }
        let k = parse_q_power(b, pos)?;
        return Ok(LaurentPoly::monomial(k, c));
    }
    Ok(LaurentPoly::from_rat(c))
}

fn parse_q_power(b: &[u8], pos: &mut usize) -> Result<i64, CoeffParseError> {
    debug_assert_eq!(b[*pos], b'q');
    *pos += 1;
    if *pos < b.len() && b[*pos] == b'^' {
        *pos += 1;
        parse_int(b, pos)
    } else {
        Ok(1)
    }
}

fn parse_rational(b: &[u8], pos: &mut usize) -> Result<Rat, CoeffParseError> {
    let p = parse_int(b, pos)?;
    let save = *pos;
    let mut probe = *pos;
    skip_ws(b, &mut probe);
    if probe < b.len() && b[probe] == b'/' {
        probe += 1;
        skip_ws(b, &mut probe);
        if probe < b.len() && (b[probe] == b'-' || b[probe].is_ascii_digit()) {
            *pos = probe;
            let r = parse_int(b, pos)?;
            if r == 0 {
                return Err(err(save, "zero denominator"));
            }
            return Ok(rat(p, r));
        }
    }
    Ok(rat_int(p))
}

fn parse_int(b: &[u8], pos: &mut usize) -> Result<i64, CoeffParseError> {
    let start = *pos;
    let mut sign = 1i64;
    if *pos < b.len() && b[*pos] == b'-' {
        sign = -1;
        *pos += 1;
    }
    let digits_start = *pos;
    while *pos < b.len() && b[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == digits_start {
        return Err(err(start, "expected integer"));
    }
    let s = std::str::from_utf8(&b[digits_start..*pos]).unwrap();
    s.parse::<i64>()
        .map(|v| sign * v)
        .map_err(|_| err(start, "integer out of range"))
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && (b[*pos] == b' ' || b[*pos] == b'\t') {
        *pos += 1;
    }
}

fn err(pos: usize, msg: &str) -> CoeffParseError {
    CoeffParseError {
        pos,
        msg: msg.to_string(),
    }
}

// ---- QhatFrac ----

/// A value num / q-hat^pow. Pairing values live here: the coefficient ring
/// has no q-hat inverse, so every asserted equality is cleared by a q-hat
/// power instead. Equality cross-multiplies, so representatives with
/// different powers compare correctly.
#[derive(Clone, Debug)]
pub struct QhatFrac {
    pub num: LaurentPoly,
    pub pow: u32,
}

impl QhatFrac {
    pub fn zero() -> Self {
        QhatFrac {
            num: LaurentPoly::zero(),
            pow: 0,
        }
    }

    pub fn one() -> Self {
        QhatFrac {
            num: LaurentPoly::one(),
            pow: 0,
        }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        QhatFrac { num: p, pow: 0 }
    }

    /// num / q-hat^pow.
    pub fn new(num: LaurentPoly, pow: u32) -> Self {
        QhatFrac { num, pow }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        QhatFrac {
            num: self.num.mul(&other.num),
            pow: self.pow + other.pow,
        }
    }

    pub fn mul_laurent(&self, other: &LaurentPoly) -> Self {
        QhatFrac {
            num: self.num.mul(other),
            pow: self.pow,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let pow = self.pow.max(other.pow);
        let qh = LaurentPoly::qhat();
        let a = self.num.mul(&qh.pow(pow - self.pow));
        let b = other.num.mul(&qh.pow(pow - other.pow));
        QhatFrac { num: a.add(&b), pow }
    }

    pub fn neg(&self) -> Self {
        QhatFrac {
            num: self.num.neg(),
            pow: self.pow,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Lowest-terms representative: cancels q-hat factors out of the
    /// numerator while the power allows.
    pub fn normalize(&self) -> Self {
        if self.num.is_zero() {
            return QhatFrac::zero();
        }
        let qh = LaurentPoly::qhat();
        let mut num = self.num.clone();
        let mut pow = self.pow;
        while pow > 0 {
            match exact_div(&num, &qh) {
                Some(r) => {
                    num = r;
                    pow -= 1;
                }
                None => break,
            }
        }
        QhatFrac { num, pow }
    }
}

impl PartialEq for QhatFrac {
    fn eq(&self, other: &Self) -> bool {
        let qh = LaurentPoly::qhat();
        self.num.mul(&qh.pow(other.pow)) == other.num.mul(&qh.pow(self.pow))
    }
}

impl Eq for QhatFrac {}

impl fmt::Display for QhatFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalize();
        if n.pow == 0 {
            return write!(f, "{}", n.num);
        }
        if n.num.is_one() {
            return write!(f, "qhat^-{}", n.pow);
        }
        if n.num == LaurentPoly::from_int(-1) {
            return write!(f, "-qhat^-{}", n.pow);
        }
        match n.num.as_monomial() {
            Some(_) => write!(f, "{}*qhat^-{}", n.num, n.pow),
            None => write!(f, "({})*qhat^-{}", n.num, n.pow),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
        let nterms = rng.gen_range(0..=4);
        let mut p = LaurentPoly::zero();
        for _ in 0..nterms {
            let k = rng.gen_range(-4..=4);
            let num = rng.gen_range(-5..=5);
            let den = [1i64, 1, 1, 2, 3][rng.gen_range(0..5)];
            p = p.add(&LaurentPoly::monomial(k, rat(num, den)));
        }
        p
    }

    // ---- Construction and basic arithmetic ----

    #[test]
    fn additive_inverse_cancels() {
        let s = LaurentPoly::q().add(&LaurentPoly::q().neg());
        assert!(s.is_zero());
    }

    #[test]
    fn qhat_plus_qinv_is_q() {
        let s = LaurentPoly::qhat().add(&LaurentPoly::q_pow(-1));
        assert_eq!(s, LaurentPoly::q());
    }

    #[test]
    fn disjoint_supports_add() {
        let s = LaurentPoly::q_pow(2).add(&LaurentPoly::from_int(3));
        assert_eq!(s.coeff(2), rat_int(1));
        assert_eq!(s.coeff(0), rat_int(3));
        assert_eq!(s.iter().count(), 2);
    }

    #[test]
    fn qhat_times_q() {
        let p = LaurentPoly::qhat().mul(&LaurentPoly::q());
        assert_eq!(p, LaurentPoly::q_pow(2).sub(&LaurentPoly::one()));
    }

    #[test]
    fn unit_of_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_laurent(&mut rng);
            assert_eq!(LaurentPoly::q_pow(0).mul(&x), x);
        }
    }

    #[test]
    fn difference_of_squares() {
        let p = LaurentPoly::qhat().mul(&LaurentPoly::q().add(&LaurentPoly::q_pow(-1)));
        assert_eq!(p, LaurentPoly::q_pow(2).sub(&LaurentPoly::q_pow(-2)));
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let a = random_laurent(&mut rng);
            let b = random_laurent(&mut rng);
            let c = random_laurent(&mut rng);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }

    // ---- Evaluation ----

    #[test]
    fn eval_qhat_at_two() {
        let v = LaurentPoly::qhat().eval(&rat_int(2)).unwrap();
        assert_eq!(v, rat(3, 2));
    }

    #[test]
    fn eval_constant() {
        let v = LaurentPoly::one().eval(&rat(7, 3)).unwrap();
        assert_eq!(v, rat_int(1));
    }

    #[test]
    fn eval_q_squared_minus_one_at_two() {
        let p = LaurentPoly::q_pow(2).sub(&LaurentPoly::one());
        assert_eq!(p.eval(&rat_int(2)).unwrap(), rat_int(3));
    }

    #[test]
    fn eval_rejects_zero() {
        assert_eq!(
            LaurentPoly::q().eval(&rat_int(0)),
            Err(CoeffError::EvalAtZero)
        );
    }

    #[test]
    fn specialization_rejects_units_distinctly() {
        let p = LaurentPoly::q();
        assert!(matches!(
            p.eval_specialized(&rat_int(1)),
            Err(CoeffError::RootOfUnity(_))
        ));
        assert!(matches!(
            p.eval_specialized(&rat_int(-1)),
            Err(CoeffError::RootOfUnity(_))
        ));
        assert_eq!(p.eval_specialized(&rat_int(0)), Err(CoeffError::EvalAtZero));
        assert_eq!(p.eval_specialized(&rat(5, 3)).unwrap(), rat(5, 3));
    }

    #[test]
    fn eval_is_ring_hom() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let points = [rat_int(2), rat(5, 3)];
        for _ in 0..500 {
            let a = random_laurent(&mut rng);
            let b = random_laurent(&mut rng);
            for qv in &points {
                let lhs = a.mul(&b).eval(qv).unwrap();
                let rhs = a.eval(qv).unwrap() * b.eval(qv).unwrap();
                assert_eq!(lhs, rhs);
                let lhs = a.add(&b).eval(qv).unwrap();
                let rhs = a.eval(qv).unwrap() + b.eval(qv).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    // ---- Division guard ----

    #[test]
    fn division_only_by_monomials() {
        let qh = LaurentPoly::qhat();
        assert_eq!(
            LaurentPoly::one().div_monomial(&qh),
            Err(CoeffError::NonMonomialDivisor)
        );
        assert_eq!(
            LaurentPoly::one().div_monomial(&LaurentPoly::zero()),
            Err(CoeffError::DivisionByZero)
        );
        let m = LaurentPoly::monomial(3, rat(2, 1));
        let r = LaurentPoly::q_pow(5).div_monomial(&m).unwrap();
        assert_eq!(r, LaurentPoly::monomial(2, rat(1, 2)));
        assert_eq!(r.mul(&m), LaurentPoly::q_pow(5));
    }

    #[test]
    fn monomial_inverse_round_trips() {
        let m = LaurentPoly::monomial(-2, rat(3, 4));
        let inv = m.inv_monomial().unwrap();
        assert!(m.mul(&inv).is_one());
    }

    // ---- Canonical text and parsing ----

    #[test]
    fn canonical_text_descending() {
        let p = LaurentPoly::q_pow(2)
            .add(&LaurentPoly::from_int(-1))
            .add(&LaurentPoly::monomial(-1, rat_int(3)));
        assert_eq!(p.to_string(), "q^2 - 1 + 3*q^-1");
    }

    #[test]
    fn text_edge_cases() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::one().to_string(), "1");
        assert_eq!(LaurentPoly::q().to_string(), "q");
        assert_eq!(LaurentPoly::q().neg().to_string(), "-q");
        assert_eq!(LaurentPoly::qhat().to_string(), "q - q^-1");
        assert_eq!(LaurentPoly::monomial(2, rat(1, 2)).to_string(), "1/2*q^2");
        assert_eq!(
            LaurentPoly::monomial(-3, rat(-2, 3)).to_string(),
            "-2/3*q^-3"
        );
    }

    #[test]
    fn parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = random_laurent(&mut rng);
            let back = parse_laurent(&p.to_string()).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_laurent("q - q^-1").unwrap(), LaurentPoly::qhat());
        assert_eq!(parse_laurent("-1/2*q^3").unwrap(), LaurentPoly::monomial(3, rat(-1, 2)));
        assert_eq!(parse_laurent("3").unwrap(), LaurentPoly::from_int(3));
        assert_eq!(parse_laurent("q^0").unwrap(), LaurentPoly::one());
        assert!(parse_laurent("").is_err());
        assert!(parse_laurent("q +").is_err());
        assert!(parse_laurent("1/0").is_err());
        assert!(parse_laurent("q q").is_err());
    }

    // ---- QhatFrac ----

    #[test]
    fn qhat_frac_equality_cross_multiplies() {
        // q-hat / q-hat^2 == 1 / q-hat
        let a = QhatFrac::new(LaurentPoly::qhat(), 2);
        let b = QhatFrac::new(LaurentPoly::one(), 1);
        assert_eq!(a, b);
        assert_ne!(a, QhatFrac::one());
    }

    #[test]
    fn qhat_frac_normalize() {
        let a = QhatFrac::new(LaurentPoly::qhat().pow(3).mul(&LaurentPoly::q()), 2);
        let n = a.normalize();
        assert_eq!(n.pow, 0);
        assert_eq!(n.num, LaurentPoly::qhat().mul(&LaurentPoly::q()));
    }

    #[test]
    fn qhat_frac_arithmetic() {
        let third = QhatFrac::new(LaurentPoly::one(), 1);
        let sum = third.add(&third).sub(&third);
        assert_eq!(sum, third);
        let sq = third.mul(&third);
        assert_eq!(sq.pow, 2);
        // (1/qhat) * qhat = 1
        assert_eq!(third.mul_laurent(&LaurentPoly::qhat()), QhatFrac::one());
    }

    #[test]
    fn qhat_frac_display() {
        assert_eq!(
            QhatFrac::new(LaurentPoly::from_int(-1), 1).to_string(),
            "-qhat^-1"
        );
        assert_eq!(QhatFrac::new(LaurentPoly::one(), 2).to_string(), "qhat^-2");
        assert_eq!(
            QhatFrac::new(LaurentPoly::q_pow(2).add(&LaurentPoly::one()), 2).to_string(),
            "(q^2 + 1)*qhat^-2"
        );
        assert_eq!(
            QhatFrac::new(LaurentPoly::qhat(), 1).to_string(),
            "1"
        );
        assert_eq!(
            QhatFrac::new(LaurentPoly::monomial(1, rat_int(2)), 1).to_string(),
            "2*q*qhat^-1"
        );
    }

    #[test]
    fn exact_div_by_qhat() {
        let qh = LaurentPoly::qhat();
        let p = qh.mul(&qh).mul(&LaurentPoly::q_pow(-3).scale(&rat(5, 2)));
        let r = exact_div(&p, &qh).unwrap();
        assert_eq!(r, qh.mul(&LaurentPoly::q_pow(-3).scale(&rat(5, 2))));
        assert!(exact_div(&LaurentPoly::q(), &qh).is_none());
        assert!(exact_div(&LaurentPoly::one(), &qh).is_none());
    }
}
