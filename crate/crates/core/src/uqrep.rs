//! The quantized enveloping side: weight-lattice arithmetic with the
//! Cartan form, words K_lambda E_I (or F_I) with K collected leftmost and
//! no Serre reduction, Hopf maps, the vector representation and its
//! tensor powers, matrix-coefficient functionals, the dual pairing with
//! two splitting strategies, the phi and psi comparison checks, and Gram
//! ranks against an independent dimension oracle.
//!
//! Rank convention: `n` is the rank, so coordinate-algebra partners live
//! at matrix size N = n + 1. All q-exponents produced here come from form
//! values that must be integers; fractional values raise errors instead
//! of being rounded.

use std::collections::BTreeMap;

use num::ToPrimitive;

use crate::coeff::{rat, rat_int, LaurentPoly, QhatFrac, Rat};
use crate::ncalg::{AlgError, AlgebraSpec, Expr, GeneratorId, NCPoly, Word};
use crate::qcoord::{unipotent_gen, BorelSign, UnipotentKind};

fn invalid(msg: impl Into<String>) -> AlgError {
    AlgError::Invalid { msg: msg.into() }
}

// ---- Weights and the Cartan form ----

/// Weight in the fundamental-weight basis: coords[i] is the coefficient
/// of omega_{i+1}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Weight {
    coords: Vec<Rat>,
}

impl Weight {
    pub fn zero(n: u8) -> Self {
        Weight {
            coords: vec![rat_int(0); n as usize],
        }
    }

    pub fn from_omega_coords(coords: Vec<Rat>) -> Self {
        Weight { coords }
    }

    /// The fundamental weight omega_i.
    pub fn fundamental(n: u8, i: u8) -> Result<Self, AlgError> {
        check_index(n, i)?;
        let mut w = Weight::zero(n);
        w.coords[i as usize - 1] = rat_int(1);
        Ok(w)
    }

    /// The simple root alpha_i = -omega_{i-1} + 2 omega_i - omega_{i+1}.
    pub fn alpha(n: u8, i: u8) -> Result<Self, AlgError> {
        check_index(n, i)?;
        let mut w = Weight::zero(n);
        let i = i as usize;
        w.coords[i - 1] = rat_int(2);
        if i >= 2 {
            w.coords[i - 2] = rat_int(-1);
        }
        if i < n as usize {
            w.coords[i] = rat_int(-1);
        }
        Ok(w)
    }

    /// The module weight beta_j = -omega_{j-1} + omega_j for 1 <= j <= n+1
    /// (omega_0 = omega_{n+1} = 0).
    pub fn beta(n: u8, j: u8) -> Result<Self, AlgError> {
        if j < 1 || j > n + 1 {
            return Err(invalid(format!(
                "beta index {} outside [1, {}]",
                j,
                n + 1
            )));
        }
        let mut w = Weight::zero(n);
        let j = j as usize;
        if j <= n as usize {
            w.coords[j - 1] = rat_int(1);
        }
        if j >= 2 {
            w.coords[j - 2] -= rat_int(1);
        }
        Ok(w)
    }

    pub fn rank(&self) -> u8 {
        self.coords.len() as u8
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c == &rat_int(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Weight {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    /// Coordinates in the simple-root basis; rational in general.
    pub fn alpha_coords(&self) -> Vec<Rat> {
        let n = self.coords.len();
        (1..=n)
            .map(|i| {
                let mut acc = rat_int(0);
                for (jm1, c) in self.coords.iter().enumerate() {
                    acc += c * omega_gram(n, i, jm1 + 1);
                }
                acc
            })
            .collect()
    }

    /// Membership in the weight lattice: integer fundamental coordinates.
    pub fn in_weight_lattice(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Membership in the root lattice: integer simple-root coordinates.
    pub fn in_root_lattice(&self) -> bool {
        self.alpha_coords().iter().all(|c| c.is_integer())
    }
}

fn check_index(n: u8, i: u8) -> Result<(), AlgError> {
    if i < 1 || i > n {
        return Err(invalid(format!("index {} outside [1, {}]", i, n)));
    }
    Ok(())
}

/// Gram matrix entry (omega_i, omega_j) = min(i,j)(n+1-max(i,j))/(n+1).
fn omega_gram(n: usize, i: usize, j: usize) -> Rat {
    let (lo, hi) = (i.min(j) as i64, i.max(j) as i64);
    Rat::new(
        (lo * (n as i64 + 1 - hi)).into(),
        (n as i64 + 1).into(),
    )
}

/// The Cartan form, normalized by (alpha_i, alpha_j) = Cartan entry.
pub fn bilinear_form(a: &Weight, b: &Weight) -> Result<Rat, AlgError> {
    if a.rank() != b.rank() {
        return Err(AlgError::SpecMismatch {
            left: format!("rank {}", a.rank()),
            right: format!("rank {}", b.rank()),
        });
    }
    let n = a.coords.len();
    let mut acc = rat_int(0);
    for (im1, ca) in a.coords.iter().enumerate() {
        if ca == &rat_int(0) {
            continue;
        }
        for (jm1, cb) in b.coords.iter().enumerate() {
            acc += ca * cb * omega_gram(n, im1 + 1, jm1 + 1);
        }
    }
    Ok(acc)
}

/// Form value that the calculus requires to be an integer q-exponent.
pub fn form_int(a: &Weight, b: &Weight) -> Result<i64, AlgError> {
    let v = bilinear_form(a, b)?;
    if !v.is_integer() {
        return Err(invalid(format!("non-integer form value {}", v)));
    }
    v.to_integer()
        .to_i64()
        .ok_or_else(|| invalid("form value overflows".to_string()))
}

/// Cartan integer (alpha_i, alpha_j) in constant time.
fn cartan_int(i: u8, j: u8) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// (a, alpha_j), which is the j-th fundamental coordinate of a.
fn form_alpha_int(a: &Weight, j: u8) -> Result<i64, AlgError> {
    let c = &a.coords[j as usize - 1];
    if !c.is_integer() {
        return Err(invalid(format!("non-integer form value {}", c)));
    }
    c.to_integer()
        .to_i64()
        .ok_or_else(|| invalid("form value overflows".to_string()))
}

/// alpha_i in the fundamental-weight basis.
pub fn root_to_fundamental(n: u8, i: u8) -> Result<Weight, AlgError> {
    Weight::alpha(n, i)
}

/// omega_i in the simple-root basis; rational coordinates.
pub fn fundamental_weight_in_roots(n: u8, i: u8) -> Result<Vec<Rat>, AlgError> {
    Ok(Weight::fundamental(n, i)?.alpha_coords())
}

// ---- Words and elements ----

/// The four word algebras: E letters over the check or plain lattice,
/// then F letters likewise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UqVariant {
    Geq0Check,
    Geq0,
    Leq0Check,
    Leq0,
}

impl UqVariant {
    pub fn is_e_side(self) -> bool {
        matches!(self, UqVariant::Geq0Check | UqVariant::Geq0)
    }

    pub fn is_check(self) -> bool {
        matches!(self, UqVariant::Geq0Check | UqVariant::Leq0Check)
    }

    /// The Cartan swap partner: same lattice, opposite letter family.
    pub fn flipped(self) -> Self {
        match self {
            UqVariant::Geq0Check => UqVariant::Leq0Check,
            UqVariant::Geq0 => UqVariant::Leq0,
            UqVariant::Leq0Check => UqVariant::Geq0Check,
            UqVariant::Leq0 => UqVariant::Geq0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UqVariant::Geq0Check => "uq>=0-check",
            UqVariant::Geq0 => "uq>=0",
            UqVariant::Leq0Check => "uq<=0-check",
            UqVariant::Leq0 => "uq<=0",
        }
    }

    fn allows(self, w: &Weight) -> bool {
        if self.is_check() {
            w.in_weight_lattice()
        } else {
            w.in_root_lattice()
        }
    }

    fn letter_name(self, i: u8) -> String {
        if self.is_e_side() {
            format!("E[{}]", i)
        } else {
            format!("F[{}]", i)
        }
    }
}

/// Canonical spanning word: a single K_lambda followed by letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct UqWord {
    pub kpart: Weight,
    pub letters: Vec<u8>,
}

/// Element of one of the four word algebras; always in canonical form
/// (K leftmost, letter sequences free).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UqElement {
    n: u8,
    variant: UqVariant,
    terms: BTreeMap<UqWord, LaurentPoly>,
}

impl UqElement {
    pub fn zero(n: u8, variant: UqVariant) -> Self {
        UqElement {
            n,
            variant,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: u8, variant: UqVariant) -> Self {
        UqElement::monomial(n, variant, Weight::zero(n), Vec::new(), LaurentPoly::one())
            .expect("the unit word is valid")
    }

    pub fn monomial(
        n: u8,
        variant: UqVariant,
        kpart: Weight,
        letters: Vec<u8>,
        coeff: LaurentPoly,
    ) -> Result<Self, AlgError> {
        if kpart.rank() != n {
            return Err(AlgError::SpecMismatch {
                left: format!("rank {}", kpart.rank()),
                right: format!("rank {}", n),
            });
        }
        if !variant.allows(&kpart) {
            return Err(invalid(format!(
                "K weight outside the {} lattice",
                if variant.is_check() { "Lambda" } else { "root" }
            )));
        }
        for &i in &letters {
            if i < 1 || i > n {
                return Err(AlgError::IndexOutOfRange {
                    gen: variant.letter_name(i),
                    size: n,
                });
            }
        }
        let mut e = UqElement::zero(n, variant);
        if !coeff.is_zero() {
            e.terms.insert(UqWord { kpart, letters }, coeff);
        }
        Ok(e)
    }

    pub fn k_of(n: u8, variant: UqVariant, kpart: Weight) -> Result<Self, AlgError> {
        UqElement::monomial(n, variant, kpart, Vec::new(), LaurentPoly::one())
    }

    pub fn gen(n: u8, variant: UqVariant, i: u8) -> Result<Self, AlgError> {
        UqElement::monomial(n, variant, Weight::zero(n), vec![i], LaurentPoly::one())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn variant(&self) -> UqVariant {
        self.variant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UqWord, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(w, c)| {
                w.kpart.is_zero() && w.letters.is_empty() && c.is_one()
            })
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgError> {
        if self.n != other.n || self.variant != other.variant {
            return Err(AlgError::SpecMismatch {
                left: format!("{} rank {}", self.variant.name(), self.n),
                right: format!("{} rank {}", other.variant.name(), other.n),
            });
        }
        Ok(())
    }

    fn insert(&mut self, w: UqWord, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.get(&w).cloned().unwrap_or_else(LaurentPoly::zero);
        let merged = cur.add(&c);
        if merged.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&LaurentPoly::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = UqElement::zero(self.n, self.variant);
        for (w, v) in &self.terms {
            out.insert(w.clone(), v.mul(c));
        }
        out
    }

    /// Product; K parts migrate left across letters, each crossing
    /// contributing q^{-(nu, alpha_i)} on the E side and the inverse on
    /// the F side.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.compatible(other)?;
        let n = self.n;
        let e_side = self.variant.is_e_side();
        let mut out = UqElement::zero(n, self.variant);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut shift = 0i64;
                for &i in &wa.letters {
                    let v = form_alpha_int(&wb.kpart, i)?;
                    shift += if e_side { -v } else { v };
                }
                let mut letters = wa.letters.clone();
                letters.extend_from_slice(&wb.letters);
                let w = UqWord {
                    kpart: wa.kpart.add(&wb.kpart),
                    letters,
                };
                out.insert(w, ca.mul(cb).mul(&LaurentPoly::q_pow(shift)));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgError> {
        let mut acc = UqElement::one(self.n, self.variant);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for UqElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let mut parts: Vec<String> = Vec::new();
            if !w.kpart.is_zero() {
                let coords: Vec<String> = w.kpart.coords.iter().map(|c| c.to_string()).collect();
                parts.push(format!("K{{{}}}", coords.join(",")));
            }
            for &i in &w.letters {
                parts.push(self.variant.letter_name(i));
            }
            let body = parts.join("*");
            let coeff = c.to_string();
            let multi = coeff.contains(" + ") || coeff.contains(" - ");
            let (sign, mag) = if multi {
                ("+", format!("({})", coeff))
            } else if let Some(rest) = coeff.strip_prefix('-') {
                ("-", rest.to_string())
            } else {
                ("+", coeff)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match (mag != "1" || body.is_empty(), body.is_empty()) {
                (true, true) => write!(f, "{}", mag)?,
                (true, false) => write!(f, "{}*{}", mag, body)?,
                (false, false) => write!(f, "{}", body)?,
                (false, true) => unreachable!(),
            }
        }
        Ok(())
    }
}

// ---- Comultiplication, counit, antipode ----

/// Tensor with a fixed number of legs, each a canonical word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UqTensor {
    n: u8,
    variant: UqVariant,
    legs: usize,
    terms: BTreeMap<Vec<UqWord>, LaurentPoly>,
}

impl UqTensor {
    pub fn zero(n: u8, variant: UqVariant, legs: usize) -> Self {
        UqTensor {
            n,
            variant,
            legs,
            terms: BTreeMap::new(),
        }
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<UqWord>, &LaurentPoly)> {
        self.terms.iter()
    }

    fn insert(&mut self, w: Vec<UqWord>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.get(&w).cloned().unwrap_or_else(LaurentPoly::zero);
        let merged = cur.add(&c);
        if merged.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, merged);
        }
    }
}

/// All splittings of one canonical word across `legs` ordered legs, with
/// the crossing q-powers. On the E side a letter assigned to leg t shifts
/// the K of every earlier leg by its root; on the F side it shifts every
/// later leg by the negated root.
fn expand_legs(
    n: u8,
    variant: UqVariant,
    word: &UqWord,
    legs: usize,
) -> Result<Vec<(Vec<UqWord>, i64)>, AlgError> {
    if legs == 0 {
        return Err(invalid("tensor must have at least one leg"));
    }
    let m = word.letters.len();
    let e_side = variant.is_e_side();
    let alphas: Vec<Weight> = (1..=n)
        .map(|i| Weight::alpha(n, i))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut assign = vec![0usize; m];
    loop {
        // Crossing exponent for this assignment.
        let mut cross = 0i64;
        for s in 0..m {
            for u in 0..s {
                let crossed = if e_side {
                    assign[u] < assign[s]
                } else {
                    assign[u] > assign[s]
                };
                if crossed {
                    cross -= cartan_int(word.letters[s], word.letters[u]);
                }
            }
        }
        let mut leg_words = Vec::with_capacity(legs);
        for t in 0..legs {
            let mut kpart = word.kpart.clone();
            for s in 0..m {
                let shifts = if e_side {
                    assign[s] > t
                } else {
                    assign[s] < t
                };
                if shifts {
                    let a = &alphas[word.letters[s] as usize - 1];
                    kpart = if e_side { kpart.add(a) } else { kpart.sub(a) };
                }
            }
            let letters: Vec<u8> = (0..m)
                .filter(|&s| assign[s] == t)
                .map(|s| word.letters[s])
                .collect();
            leg_words.push(UqWord { kpart, letters });
        }
        out.push((leg_words, cross));
        // Odometer over leg assignments.
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(out);
            }
            assign[pos] += 1;
            if assign[pos] < legs {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}

/// Comultiplication into two legs.
pub fn uq_comult(u: &UqElement) -> Result<UqTensor, AlgError> {
    uq_comult_multi(u, 2)
}

/// Iterated comultiplication into `legs` ordered legs.
pub fn uq_comult_multi(u: &UqElement, legs: usize) -> Result<UqTensor, AlgError> {
    let mut out = UqTensor::zero(u.n, u.variant, legs);
    for (w, c) in &u.terms {
        for (leg_words, cross) in expand_legs(u.n, u.variant, w, legs)? {
            out.insert(leg_words, c.mul(&LaurentPoly::q_pow(cross)));
        }
    }
    Ok(out)
}

/// Applies comultiplication to one leg of a tensor, growing it by a leg.
pub fn uq_comult_leg(t: &UqTensor, leg: usize) -> Result<UqTensor, AlgError> {
    let mut out = UqTensor::zero(t.n, t.variant, t.legs + 1);
    for (words, c) in &t.terms {
        for (pair, cross) in expand_legs(t.n, t.variant, &words[leg], 2)? {
            let mut nw = words.clone();
            nw[leg] = pair[1].clone();
            nw.insert(leg, pair[0].clone());
            out.insert(nw, c.mul(&LaurentPoly::q_pow(cross)));
        }
    }
    Ok(out)
}

/// Counit: kills every word with letters, keeps K coefficients.
pub fn uq_counit(u: &UqElement) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (w, c) in &u.terms {
        if w.letters.is_empty() {
            acc = acc.add(c);
        }
    }
    acc
}

/// Antipode: S(K_lambda) = K_{-lambda}, S(E_i) = -K_{-alpha_i} E_i,
/// S(F_i) = -F_i K_{alpha_i}; extended as an antihomomorphism.
pub fn uq_antipode(u: &UqElement) -> Result<UqElement, AlgError> {
    let n = u.n;
    let mut out = UqElement::zero(n, u.variant);
    for (w, c) in &u.terms {
        let mut acc = UqElement::one(n, u.variant);
        for &i in w.letters.iter().rev() {
            let alpha = Weight::alpha(n, i)?;
            let s_letter = if u.variant.is_e_side() {
                UqElement::k_of(n, u.variant, alpha.neg())?
                    .mul(&UqElement::gen(n, u.variant, i)?)?
                    .neg()
            } else {
                UqElement::gen(n, u.variant, i)?
                    .mul(&UqElement::k_of(n, u.variant, alpha)?)?
                    .neg()
            };
            acc = acc.mul(&s_letter)?;
        }
        acc = acc.mul(&UqElement::k_of(n, u.variant, w.kpart.neg())?)?;
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

/// The Cartan swap: letters change family, K parts and coefficients stay.
pub fn cartan_omega(u: &UqElement) -> UqElement {
    let mut out = UqElement::zero(u.n, u.variant.flipped());
    for (w, c) in &u.terms {
        out.insert(w.clone(), c.clone());
    }
    out
}

// ---- The vector representation and tensor powers ----

/// Vector in V(omega_1)^{tensor m}: coefficients over index tuples with
/// entries in [1, n+1].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleVector {
    n: u8,
    degree: usize,
    coeffs: BTreeMap<Vec<u8>, LaurentPoly>,
}

impl ModuleVector {
    pub fn zero(n: u8, degree: usize) -> Self {
        ModuleVector {
            n,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector e_j (tensor degree 1).
    pub fn basis(n: u8, j: u8) -> Result<Self, AlgError> {
        ModuleVector::pure(n, &[j])
    }

    /// The pure tensor e_{j_1} x ... x e_{j_m}.
    pub fn pure(n: u8, indices: &[u8]) -> Result<Self, AlgError> {
        if indices.is_empty() {
            return Err(invalid("tensor degree must be at least 1"));
        }
        for &j in indices {
            if j < 1 || j > n + 1 {
                return Err(invalid(format!(
                    "basis index {} outside [1, {}]",
                    j,
                    n + 1
                )));
            }
        }
        let mut v = ModuleVector::zero(n, indices.len());
        v.coeffs.insert(indices.to_vec(), LaurentPoly::one());
        Ok(v)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u8>, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn coeff_of(&self, indices: &[u8]) -> LaurentPoly {
        self.coeffs.get(indices).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        if self.n != other.n || self.degree != other.degree {
            return Err(AlgError::SpecMismatch {
                left: format!("degree {} rank {}", self.degree, self.n),
                right: format!("degree {} rank {}", other.degree, other.n),
            });
        }
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            let cur = out.coeffs.get(w).cloned().unwrap_or_else(LaurentPoly::zero);
            let merged = cur.add(c);
            if merged.is_zero() {
                out.coeffs.remove(w);
            } else {
                out.coeffs.insert(w.clone(), merged);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = ModuleVector::zero(self.n, self.degree);
        for (w, v) in &self.coeffs {
            let s = v.mul(c);
            if !s.is_zero() {
                out.coeffs.insert(w.clone(), s);
            }
        }
        out
    }
}

/// One leg word acting on one basis index: letters apply right to left
/// (E_i e_j = delta_{i,j-1} e_{j-1}, F_i e_j = delta_{ij} e_{j+1}), then
/// the K part scales by q^{(beta_j', lambda)}.
fn act_leg(
    n: u8,
    e_side: bool,
    word: &UqWord,
    j: u8,
) -> Result<Option<(u8, i64)>, AlgError> {
    let mut cur = j;
    for &i in word.letters.iter().rev() {
        if e_side {
            if i + 1 == cur {
                cur -= 1;
            } else {
                return Ok(None);
            }
        } else if i == cur {
            cur += 1;
        } else {
            return Ok(None);
        }
    }
    let exp = form_int(&Weight::beta(n, cur)?, &word.kpart)?;
    Ok(Some((cur, exp)))
}

/// Action on a tensor power: each word splits across the legs through
/// iterated comultiplication and the legs act factor-wise.
pub fn module_act(u: &UqElement, v: &ModuleVector) -> Result<ModuleVector, AlgError> {
    if u.n != v.n {
        return Err(AlgError::SpecMismatch {
            left: format!("rank {}", u.n),
            right: format!("rank {}", v.n),
        });
    }
    let e_side = u.variant.is_e_side();
    let mut out = ModuleVector::zero(v.n, v.degree);
    for (uw, uc) in &u.terms {
        for (leg_words, cross) in expand_legs(u.n, u.variant, uw, v.degree)? {
            for (indices, vc) in &v.coeffs {
                let mut new_indices = Vec::with_capacity(v.degree);
                let mut exp = cross;
                let mut dead = false;
                for (t, leg) in leg_words.iter().enumerate() {
                    match act_leg(u.n, e_side, leg, indices[t])? {
                        Some((j2, e)) => {
                            new_indices.push(j2);
                            exp += e;
                        }
                        None => {
                            dead = true;
                            break;
                        }
                    }
                }
                if dead {
                    continue;
                }
                let term = ModuleVector {
                    n: v.n,
                    degree: v.degree,
                    coeffs: BTreeMap::from([(
                        new_indices,
                        uc.mul(vc).mul(&LaurentPoly::q_pow(exp)),
                    )]),
                };
                out = out.add(&term)?;
            }
        }
    }
    Ok(out)
}

// ---- Matrix-coefficient functionals ----

/// Closed form for the restricted matrix coefficient on a spanning word:
/// q^{(beta_i, lambda)} when i = j with no letters, or i < j with the
/// letters spelling (i, i+1, ..., j-1); zero otherwise, and identically
/// zero for i > j.
pub fn xbar_eval(n: u8, i: u8, j: u8, lambda: &Weight, letters: &[u8]) -> Result<LaurentPoly, AlgError> {
    if i < 1 || j < 1 || i > n + 1 || j > n + 1 {
        return Err(invalid(format!(
            "functional index ({},{}) outside [1, {}]",
            i,
            j,
            n + 1
        )));
    }
    if i > j {
        return Ok(LaurentPoly::zero());
    }
    let expected: Vec<u8> = (i..j).collect();
    if letters != expected.as_slice() {
        return Ok(LaurentPoly::zero());
    }
    let exp = form_int(&Weight::beta(n, i)?, lambda)?;
    Ok(LaurentPoly::q_pow(exp))
}

/// One convolution leg of a functional word.
#[derive(Clone, Copy, Debug)]
struct FuncLeg {
    row: u8,
    col: u8,
    exp: i64,
}

fn word_to_legs(n: u8, w: &Word) -> Result<Vec<FuncLeg>, AlgError> {
    let mut legs = Vec::new();
    for l in w.letters() {
        let GeneratorId::X { row, col } = l.gen else {
            return Err(invalid("functionals are words in X[i,j]"));
        };
        if row > n + 1 || col > n + 1 || row < 1 || col < 1 {
            return Err(AlgError::IndexOutOfRange {
                gen: l.gen.to_string(),
                size: n + 1,
            });
        }
        if row == col {
            legs.push(FuncLeg { row, col, exp: l.exp });
        } else {
            if l.exp < 0 {
                return Err(AlgError::NegativeExponent {
                    gen: l.gen.to_string(),
                });
            }
            for _ in 0..l.exp {
                legs.push(FuncLeg { row, col, exp: 1 });
            }
        }
    }
    Ok(legs)
}

/// All assignments of letter positions to off-diagonal legs such that
/// each leg receives exactly its consecutive run, with pruning.
fn assignments(legs: &[FuncLeg], letters: &[u8]) -> Vec<Vec<usize>> {
    fn rec(
        legs: &[FuncLeg],
        letters: &[u8],
        s: usize,
        t_of: &mut Vec<usize>,
        counts: &mut Vec<u8>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if s == letters.len() {
            let complete = legs.iter().enumerate().all(|(t, leg)| {
                leg.row == leg.col || counts[t] == leg.col - leg.row
            });
            if complete {
                out.push(t_of.clone());
            }
            return;
        }
        for (t, leg) in legs.iter().enumerate() {
            if leg.row == leg.col {
                continue;
            }
            let need = leg.col - leg.row;
            if counts[t] < need && letters[s] == leg.row + counts[t] {
                t_of.push(t);
                counts[t] += 1;
                rec(legs, letters, s + 1, t_of, counts, out);
                counts[t] -= 1;
                t_of.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut t_of = Vec::with_capacity(letters.len());
    let mut counts = vec![0u8; legs.len()];
    rec(legs, letters, 0, &mut t_of, &mut counts, &mut out);
    out
}

fn eval_legs_on_word(n: u8, legs: &[FuncLeg], w: &UqWord) -> Result<LaurentPoly, AlgError> {
    // A lower-triangle leg annihilates every spanning word.
    if legs.iter().any(|l| l.row > l.col) {
        return Ok(LaurentPoly::zero());
    }
    let alphas: Vec<Weight> = (1..=n)
        .map(|i| Weight::alpha(n, i))
        .collect::<Result<_, _>>()?;
    let mut acc = LaurentPoly::zero();
    for t_of in assignments(legs, &w.letters) {
        let mut exp = 0i64;
        // Crossing scalar from collecting K parts leftwards.
        for s in 0..w.letters.len() {
            for u in 0..s {
                if t_of[u] < t_of[s] {
                    exp -= cartan_int(w.letters[s], w.letters[u]);
                }
            }
        }
        // Each leg evaluates at its shifted K weight.
        for (t, leg) in legs.iter().enumerate() {
            let mut kpart = w.kpart.clone();
            for s in 0..w.letters.len() {
                if t_of[s] > t {
                    kpart = kpart.add(&alphas[w.letters[s] as usize - 1]);
                }
            }
            let beta = Weight::beta(n, leg.row)?;
            exp += leg.exp * form_int(&beta, &kpart)?;
        }
        acc = acc.add(&LaurentPoly::q_pow(exp));
    }
    Ok(acc)
}

/// Evaluates a functional, given as a polynomial in the X letters, on an
/// E-side element. Words evaluate verbatim, letter by letter, by
/// convolution; no rewriting is applied to the functional, so raw
/// (non-canonical) letter sequences are meaningful arguments.
pub fn functional_eval(x: &NCPoly, u: &UqElement) -> Result<LaurentPoly, AlgError> {
    let n = u.n;
    match x.spec() {
        AlgebraSpec::BorelPlus(sz) | AlgebraSpec::QMatrix(sz) if sz == n + 1 => {}
        other => {
            return Err(AlgError::SpecMismatch {
                left: other.name(),
                right: format!("borel+:{} or qm:{}", n + 1, n + 1),
            });
        }
    }
    if !u.variant.is_e_side() {
        return Err(invalid("functionals evaluate on E-side elements"));
    }
    let mut acc = LaurentPoly::zero();
    for (xw, xc) in x.terms() {
        let legs = word_to_legs(n, xw)?;
        for (uw, uc) in &u.terms {
            let v = eval_legs_on_word(n, &legs, uw)?;
            acc = acc.add(&v.mul(xc).mul(uc));
        }
    }
    Ok(acc)
}

// ---- The dual pairing ----

/// Which argument's word is peeled at each recursion step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairStrategy {
    PeelSecondArg,
    PeelFirstArg,
}

fn alpha_sum_form(letters: &[u8], upto: usize, target: u8) -> i64 {
    letters[..upto].iter().map(|&l| cartan_int(target, l)).sum()
}

fn remove_at(letters: &[u8], idx: usize) -> Vec<u8> {
    let mut v = letters.to_vec();
    v.remove(idx);
    v
}

/// Pairing on canonical words. Both strategies peel the rightmost letter
/// of their argument; each peel consumes one matching letter from the
/// other side, contributing -qhat^{-1} and K crossing powers.
fn pair_words(
    n: u8,
    mu: &Weight,
    f_letters: &[u8],
    lambda: &Weight,
    e_letters: &[u8],
    strategy: PairStrategy,
) -> Result<QhatFrac, AlgError> {
    match strategy {
        PairStrategy::PeelSecondArg => {
            if e_letters.is_empty() {
                return if f_letters.is_empty() {
                    Ok(QhatFrac::from_laurent(LaurentPoly::q_pow(-form_int(
                        mu, lambda,
                    )?)))
                } else {
                    Ok(QhatFrac::zero())
                };
            }
            let j = *e_letters.last().unwrap();
            let alpha_j = Weight::alpha(n, j)?;
            let mut acc = QhatFrac::zero();
            for s in 0..f_letters.len() {
                if f_letters[s] != j {
                    continue;
                }
                let cross = -alpha_sum_form(f_letters, s, j);
                let exp = cross - form_alpha_int(mu, j)?;
                let factor = QhatFrac::new(LaurentPoly::monomial(exp, rat_int(-1)), 1);
                let rec = pair_words(
                    n,
                    &mu.sub(&alpha_j),
                    &remove_at(f_letters, s),
                    lambda,
                    &e_letters[..e_letters.len() - 1],
                    strategy,
                )?;
                acc = acc.add(&factor.mul(&rec));
            }
            Ok(acc)
        }
        PairStrategy::PeelFirstArg => {
            if f_letters.is_empty() {
                return if e_letters.is_empty() {
                    Ok(QhatFrac::from_laurent(LaurentPoly::q_pow(-form_int(
                        mu, lambda,
                    )?)))
                } else {
                    Ok(QhatFrac::zero())
                };
            }
            let i = *f_letters.last().unwrap();
            let alpha_i = Weight::alpha(n, i)?;
            let mut acc = QhatFrac::zero();
            for s in 0..e_letters.len() {
                if e_letters[s] != i {
                    continue;
                }
                let cross = -alpha_sum_form(e_letters, s, i);
                let exp = cross + form_alpha_int(lambda, i)?;
                let factor = QhatFrac::new(LaurentPoly::monomial(exp, rat_int(-1)), 1);
                let rec = pair_words(
                    n,
                    mu,
                    &f_letters[..f_letters.len() - 1],
                    &lambda.add(&alpha_i),
                    &remove_at(e_letters, s),
                    strategy,
                )?;
                acc = acc.add(&factor.mul(&rec));
            }
            Ok(acc)
        }
    }
}

/// Alternate orientation used by the well-definedness checks: peels the
/// leftmost letter of the second argument instead of the rightmost.
fn pair_words_leftmost(
    n: u8,
    mu: &Weight,
    f_letters: &[u8],
    lambda: &Weight,
    e_letters: &[u8],
) -> Result<QhatFrac, AlgError> {
    if e_letters.is_empty() {
        return if f_letters.is_empty() {
            Ok(QhatFrac::from_laurent(LaurentPoly::q_pow(-form_int(
                mu, lambda,
            )?)))
        } else {
            Ok(QhatFrac::zero())
        };
    }
    let j = e_letters[0];
    let alpha_j = Weight::alpha(n, j)?;
    // Total root content of the first argument.
    let mut alpha_all = Weight::zero(n);
    for &l in f_letters {
        alpha_all = alpha_all.add(&Weight::alpha(n, l)?);
    }
    let mut acc = QhatFrac::zero();
    for s in 0..f_letters.len() {
        if f_letters[s] != j {
            continue;
        }
        let mut cross = 0i64;
        for &l in &f_letters[s + 1..] {
            cross -= cartan_int(l, j);
        }
        let nu = mu.sub(&alpha_all).add(&alpha_j);
        let exp = cross - form_alpha_int(&nu, j)? - form_int(&nu.sub(&alpha_j), lambda)?;
        let factor = QhatFrac::new(LaurentPoly::monomial(exp, rat_int(-1)), 1);
        let rec = pair_words_leftmost(
            n,
            mu,
            &remove_at(f_letters, s),
            &Weight::zero(n),
            &e_letters[1..],
        )?;
        acc = acc.add(&factor.mul(&rec));
    }
    Ok(acc)
}

fn pair_precheck(y: &UqElement, x: &UqElement) -> Result<(), AlgError> {
    if y.n != x.n {
        return Err(AlgError::SpecMismatch {
            left: format!("rank {}", y.n),
            right: format!("rank {}", x.n),
        });
    }
    if y.variant.is_e_side() || !x.variant.is_e_side() {
        return Err(invalid(
            "pairing takes an F-side first argument and an E-side second argument",
        ));
    }
    Ok(())
}

/// The dual pairing, bilinear over canonical words.
pub fn pair(y: &UqElement, x: &UqElement, strategy: PairStrategy) -> Result<QhatFrac, AlgError> {
    pair_precheck(y, x)?;
    let mut acc = QhatFrac::zero();
    for (yw, yc) in &y.terms {
        for (xw, xc) in &x.terms {
            let v = pair_words(y.n, &yw.kpart, &yw.letters, &xw.kpart, &xw.letters, strategy)?;
            acc = acc.add(&v.mul_laurent(&yc.mul(xc)));
        }
    }
    Ok(acc)
}

/// The pairing computed with the leftmost-peel orientation; agreement
/// with [`pair`] witnesses split-order independence.
pub fn pair_leftmost(y: &UqElement, x: &UqElement) -> Result<QhatFrac, AlgError> {
    pair_precheck(y, x)?;
    let mut acc = QhatFrac::zero();
    for (yw, yc) in &y.terms {
        for (xw, xc) in &x.terms {
            let v = pair_words_leftmost(y.n, &yw.kpart, &yw.letters, &xw.kpart, &xw.letters)?;
            acc = acc.add(&v.mul_laurent(&yc.mul(xc)));
        }
    }
    Ok(acc)
}

// ---- phi and the test grid ----

/// The K-weight test grid: zero, the signed simple roots, and adjacent
/// sums. Every character arising at desk scale is separated here.
pub fn lambda_grid(n: u8) -> Vec<Weight> {
    let mut grid = vec![Weight::zero(n)];
    for i in 1..=n {
        let a = Weight::alpha(n, i).expect("index in range");
        grid.push(a.clone());
        grid.push(a.neg());
    }
    for i in 1..n {
        let a = Weight::alpha(n, i).expect("index in range");
        let b = Weight::alpha(n, i + 1).expect("index in range");
        grid.push(a.add(&b));
    }
    grid
}

/// Compares pair(y, -) against scale times the functional x on every
/// spanning word K_lambda E_I with |I| <= max_len and lambda in the grid.
pub fn phi_check(
    y: &UqElement,
    x: &NCPoly,
    scale: &QhatFrac,
    max_len: usize,
    grid: &[Weight],
) -> Result<bool, AlgError> {
    let n = y.n;
    for lambda in grid {
        for letters in words_up_to(n, max_len) {
            let u = UqElement::monomial(
                n,
                UqVariant::Geq0,
                lambda.clone(),
                letters,
                LaurentPoly::one(),
            )?;
            let lhs = pair(y, &u, PairStrategy::PeelSecondArg)?;
            let rhs = scale.mul_laurent(&functional_eval(x, &u)?);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All letter sequences over [1, n] of length 0..=max_len.
pub fn words_up_to(n: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=n {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---- psi and the presentation of the plus part ----

/// Image of an E-letter word under psi, split as (unscaled polynomial,
/// scale): the polynomial multiplies the generators X[i,i+1]X[i+1,i+1]^-1
/// and the scale carries (-qhat^-1)^length.
pub fn psi_image(n: u8, letters: &[u8]) -> Result<(NCPoly, QhatFrac), AlgError> {
    let size = n + 1;
    let mut acc = NCPoly::one(AlgebraSpec::BorelPlus(size));
    for &i in letters {
        check_index(n, i)?;
        let z = unipotent_gen(UnipotentKind::Z, BorelSign::Plus, size, i, i + 1)?;
        acc = acc.mul(&z)?;
    }
    let sign = if letters.len() % 2 == 0 { 1 } else { -1 };
    let scale = QhatFrac::new(LaurentPoly::from_int(sign), letters.len() as u32);
    Ok((acc, scale))
}

/// Residuals of the plus-part presentation under psi: quantum Serre for
/// adjacent indices and plain commutation for distant ones (|i-j| >= 2).
/// Scales cancel within each homogeneous residual, so the unscaled
/// images witness exactness.
pub fn uqplus_relation_cases(n: u8) -> Result<Vec<(String, NCPoly)>, AlgError> {
    let image = |word: &[u8]| -> Result<NCPoly, AlgError> { Ok(psi_image(n, word)?.0) };
    let mut cases = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            if i.abs_diff(j) == 1 {
                let serre = image(&[i, i, j])?
                    .sub(&image(&[i, j, i])?.scale(&LaurentPoly::q().add(&LaurentPoly::q_pow(-1))))
                    .add(&image(&[j, i, i])?);
                cases.push((format!("psi serre i={} j={}", i, j), serre.normal_form()?));
            } else {
                let dist = image(&[i, j])?.sub(&image(&[j, i])?);
                cases.push((format!("psi distant i={} j={}", i, j), dist.normal_form()?));
            }
        }
    }
    Ok(cases)
}

/// All nondecreasing letter sequences over [1, n] of length 0..=max_len.
pub fn sorted_words_up_to(n: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            let lo = w.last().copied().unwrap_or(1);
            for i in lo..=n {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Stacks psi images of the sorted words as coefficient rows over the
/// canonical Borel words and returns (word count, exact rank at q = 2).
pub fn psi_sorted_rank(n: u8, max_len: usize) -> Result<(usize, usize), AlgError> {
    let words = sorted_words_up_to(n, max_len);
    let images: Vec<NCPoly> = words
        .iter()
        .map(|w| Ok(psi_image(n, w)?.0.normal_form()?))
        .collect::<Result<_, AlgError>>()?;
    let mut columns: Vec<Word> = Vec::new();
    for p in &images {
        for (w, _) in p.terms() {
            if !columns.contains(w) {
                columns.push(w.clone());
            }
        }
    }
    columns.sort();
    let q2 = crate::coeff::rat(2, 1);
    let mut rows = Vec::new();
    for p in &images {
        let mut row = Vec::with_capacity(columns.len());
        for col in &columns {
            row.push(
                p.coeff_of(col)
                    .eval(&q2)
                    .map_err(|e| invalid(e.to_string()))?,
            );
        }
        rows.push(row);
    }
    Ok((words.len(), rational_rank(rows)))
}

// ---- Gram matrices and the dimension oracle ----

/// Exact rank over the rationals by Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| rows[r][col] != rat_int(0));
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let inv = rat_int(1) / rows[rank][col].clone();
        for c in col..ncols {
            let v = rows[rank][c].clone() * inv.clone();
            rows[rank][c] = v;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != rat_int(0) {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let v = rows[r][c].clone() - factor.clone() * rows[rank][c].clone();
                    rows[r][c] = v;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Nonnegative integer simple-root coordinates of a dominant root-cone
/// weight.
fn positive_cone_counts(n: u8, mu: &Weight) -> Result<Vec<u64>, AlgError> {
    let coords = mu.alpha_coords();
    let mut counts = Vec::with_capacity(n as usize);
    for c in &coords {
        if !c.is_integer() || c < &rat_int(0) {
            return Err(invalid(
                "weight is not in the nonnegative root cone".to_string(),
            ));
        }
        counts.push(c.to_integer().to_u64().ok_or_else(|| invalid("weight overflow"))?);
    }
    Ok(counts)
}

/// All arrangements of the letter multiset given by counts, in
/// lexicographic order.
fn words_of_counts(counts: &[u64]) -> Vec<Vec<u8>> {
    fn rec(counts: &mut Vec<u64>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                cur.push(i as u8 + 1);
                rec(counts, cur, out);
                cur.pop();
                counts[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut counts.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Gram data of the pairing at one root-cone weight.
pub struct GramResult {
    pub e_words: Vec<Vec<u8>>,
    pub f_words: Vec<Vec<u8>>,
    pub matrix: Vec<Vec<QhatFrac>>,
    pub rank: usize,
}

/// Pairing matrix between all F-words of weight -mu and all E-words of
/// weight mu, with its exact rank at q = 2.
pub fn gram_rank(n: u8, mu: &Weight, height_cap: u64) -> Result<GramResult, AlgError> {
    let counts = positive_cone_counts(n, mu)?;
    let height: u64 = counts.iter().sum();
    if height == 0 {
        return Err(invalid("weight must be nonzero".to_string()));
    }
    if height > height_cap {
        return Err(invalid(format!(
            "height {} exceeds cap {}",
            height, height_cap
        )));
    }
    let words = words_of_counts(&counts);
    let zero_w = Weight::zero(n);
    let mut matrix = Vec::with_capacity(words.len());
    for fw in &words {
        let mut row = Vec::with_capacity(words.len());
        for ew in &words {
            row.push(pair_words(
                n,
                &zero_w,
                fw,
                &zero_w,
                ew,
                PairStrategy::PeelSecondArg,
            )?);
        }
        matrix.push(row);
    }
    let q2 = rat(2, 1);
    let qhat2 = rat(3, 2);
    let mut rat_rows = Vec::with_capacity(matrix.len());
    for row in &matrix {
        let mut rr = Vec::with_capacity(row.len());
        for entry in row {
            let num = entry.num.eval(&q2).map_err(|e| invalid(e.to_string()))?;
            let mut denom = rat_int(1);
            for _ in 0..entry.pow {
                denom *= qhat2.clone();
            }
            rr.push(num / denom);
        }
        rat_rows.push(rr);
    }
    let rank = rational_rank(rat_rows);
    Ok(GramResult {
        e_words: words.clone(),
        f_words: words,
        matrix,
        rank,
    })
}

/// Dimension of the weight-mu component of the plus part, from the free
/// words modulo the span of all two-sided relation placements (quantum
/// Serre and distant commutation), with rank taken exactly at q = 2.
pub fn dimension_oracle(n: u8, mu: &Weight) -> Result<usize, AlgError> {
    let counts = positive_cone_counts(n, mu)?;
    let words = words_of_counts(&counts);
    let index: BTreeMap<Vec<u8>, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    // Relation residuals as (word, coefficient at q = 2) lists.
    let mut residuals: Vec<(Vec<u64>, Vec<(Vec<u8>, Rat)>)> = Vec::new();
    let qq = rat_int(2) + rat(1, 2);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            if i.abs_diff(j) == 1 {
                let mut wt = vec![0u64; n as usize];
                wt[i as usize - 1] = 2;
                wt[j as usize - 1] += 1;
                residuals.push((
                    wt,
                    vec![
                        (vec![i, i, j], rat_int(1)),
                        (vec![i, j, i], -qq.clone()),
                        (vec![j, i, i], rat_int(1)),
                    ],
                ));
            } else if i < j {
                let mut wt = vec![0u64; n as usize];
                wt[i as usize - 1] = 1;
                wt[j as usize - 1] = 1;
                residuals.push((
                    wt,
                    vec![(vec![i, j], rat_int(1)), (vec![j, i], rat_int(-1))],
                ));
            }
        }
    }
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (wt, terms) in &residuals {
        // Complement multisets split between a left and a right factor.
        let Some(rem) = sub_counts(&counts, wt) else {
            continue;
        };
        for left_counts in sub_multisets(&rem) {
            let right_counts = sub_counts(&rem, &left_counts).expect("subset of remainder");
            for w1 in words_of_counts(&left_counts) {
                for w2 in words_of_counts(&right_counts) {
                    let mut row = vec![rat_int(0); words.len()];
                    for (mid, c) in terms {
                        let mut word = w1.clone();
                        word.extend_from_slice(mid);
                        word.extend_from_slice(&w2);
                        let idx = index[&word];
                        row[idx] = row[idx].clone() + c.clone();
                    }
                    rows.push(row);
                }
            }
        }
    }
    let relation_rank = rational_rank(rows);
    Ok(words.len() - relation_rank)
}

fn sub_counts(a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_sub(y))
        .collect()
}

fn sub_multisets(counts: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &c in counts {
        let mut next = Vec::new();
        for partial in &out {
            for take in 0..=c {
                let mut v = partial.clone();
                v.push(take);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

// ---- Expression bridge ----

/// Builds an element from a parsed expression; K{...} takes fundamental
/// coordinates, Ka{...} simple-root coordinates.
pub fn uq_from_expr(expr: &Expr, n: u8, variant: UqVariant) -> Result<UqElement, AlgError> {
    use crate::ncalg::Atom;
    match expr {
        Expr::Atom(a) => match a {
            Atom::GenE { idx } => {
                if !variant.is_e_side() {
                    return Err(AlgError::WrongFamily {
                        gen: format!("E[{}]", idx),
                        spec: variant.name().to_string(),
                    });
                }
                let i = u8::try_from(*idx).map_err(|_| AlgError::IndexOutOfRange {
                    gen: format!("E[{}]", idx),
                    size: n,
                })?;
                UqElement::gen(n, variant, i)
            }
            Atom::GenF { idx } => {
                if variant.is_e_side() {
                    return Err(AlgError::WrongFamily {
                        gen: format!("F[{}]", idx),
                        spec: variant.name().to_string(),
                    });
                }
                let i = u8::try_from(*idx).map_err(|_| AlgError::IndexOutOfRange {
                    gen: format!("F[{}]", idx),
                    size: n,
                })?;
                UqElement::gen(n, variant, i)
            }
            Atom::KOmega(coords) => {
                if coords.len() != n as usize {
                    return Err(invalid(format!(
                        "K expects {} coordinates, got {}",
                        n,
                        coords.len()
                    )));
                }
                UqElement::k_of(n, variant, Weight::from_omega_coords(coords.clone()))
            }
            Atom::KAlpha(coeffs) => {
                if coeffs.len() != n as usize {
                    return Err(invalid(format!(
                        "Ka expects {} coordinates, got {}",
                        n,
                        coeffs.len()
                    )));
                }
                let mut w = Weight::zero(n);
                for (im1, &c) in coeffs.iter().enumerate() {
                    let mut a = Weight::alpha(n, im1 as u8 + 1)?;
                    a = Weight {
                        coords: a.coords.iter().map(|x| x * rat_int(c)).collect(),
                    };
                    w = w.add(&a);
                }
                UqElement::k_of(n, variant, w)
            }
            Atom::GenX { row, col } => Err(AlgError::WrongFamily {
                gen: format!("X[{},{}]", row, col),
                spec: variant.name().to_string(),
            }),
            Atom::GenY { idx } => Err(AlgError::WrongFamily {
                gen: format!("Y[{}]", idx),
                spec: variant.name().to_string(),
            }),
            Atom::Coeff(c) => Ok(UqElement::one(n, variant).scale(c)),
        },
        Expr::Pow(base, e) => {
            let b = uq_from_expr(base, n, variant)?;
            if *e >= 0 {
                b.pow(*e as u32)
            } else {
                // Only K monomials invert.
                if b.terms.len() != 1 {
                    return Err(AlgError::NotAMonomial);
                }
                let (w, c) = b.terms.iter().next().unwrap();
                if !w.letters.is_empty() {
                    return Err(AlgError::NonInvertibleImage {
                        gen: "letter word".to_string(),
                    });
                }
                let cinv = c
                    .inv_monomial()
                    .map_err(|_| AlgError::NotAMonomial)?;
                let base_inv =
                    UqElement::monomial(n, variant, w.kpart.neg(), Vec::new(), cinv)?;
                base_inv.pow((-*e) as u32)
            }
        }
        Expr::Mul(parts) => {
            let mut acc = UqElement::one(n, variant);
            for p in parts {
                acc = acc.mul(&uq_from_expr(p, n, variant)?)?;
            }
            Ok(acc)
        }
        Expr::Sum(parts) => {
            let mut acc = UqElement::zero(n, variant);
            for (neg, p) in parts {
                let e = uq_from_expr(p, n, variant)?;
                acc = if *neg { acc.sub(&e)? } else { acc.add(&e)? };
            }
            Ok(acc)
        }
    }
}
