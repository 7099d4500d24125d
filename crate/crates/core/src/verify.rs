//! Named verification suites. Each suite runs a family of exact checks
//! at one size and returns a report of (id, status, residual) cases,
//! sorted by id. Residuals that are not naturally polynomials (tensor
//! mismatches, rank gaps, pairing values) are wrapped as scalar
//! polynomials that are zero exactly on pass.
//!
//! Sizes: coordinate-algebra suites read `size` as the matrix size N;
//! enveloping-side suites work at rank n = N - 1. Randomized suites
//! draw from a ChaCha stream seeded by `seed`, so identical
//! configurations reproduce identical reports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coeff::{rat_int, LaurentPoly, QhatFrac};
use crate::ncalg::{
    ncpoly_to_json, AlgError, AlgebraSpec, GeneratorId, Letter, NCPoly, TensorPoly, Word,
};
use crate::qcoord::{
    antipode_axiom_residual, antipode_note, borel_transpose, comult, comult_leg, counit,
    is_coinvariant, qdet, r_map, resolve_antipode_convention, smash_coinv_gen, smash_mul,
    smash_phi, smash_torus, torus_antipode, transpose, unipotent_gen, unipotent_relation_cases,
    BorelSign, CoactionMap, SmashElement, SmashSide, UnipotentKind,
};
use crate::uqrep::{
    cartan_omega, dimension_oracle, form_int, functional_eval, gram_rank, lambda_grid, module_act,
    pair, pair_leftmost, phi_check, psi_sorted_rank, uqplus_relation_cases, words_up_to,
    xbar_eval, ModuleVector, PairStrategy, UqElement, UqVariant, Weight,
};

fn x(r: u8, c: u8) -> GeneratorId {
    GeneratorId::x(r, c)
}

// ---- Reports ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub status: Status,
    pub residual: NCPoly,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub size: u8,
    pub cases: Vec<Case>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: &str, size: u8) -> Self {
        Report {
            suite: suite.to_string(),
            size,
            cases: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, id: String, residual: NCPoly) {
        let status = if residual.is_zero() {
            Status::Pass
        } else {
            Status::Fail
        };
        self.cases.push(Case {
            id,
            status,
            residual,
        });
    }

    fn push_scalar(&mut self, id: String, spec: AlgebraSpec, residual: LaurentPoly) {
        self.push(id, NCPoly::scalar(spec, residual));
    }

    fn push_flag(&mut self, id: String, ok: bool, spec: AlgebraSpec) {
        let r = if ok {
            LaurentPoly::zero()
        } else {
            LaurentPoly::one()
        };
        self.push_scalar(id, spec, r);
    }

    fn push_qhat(&mut self, id: String, spec: AlgebraSpec, residual: QhatFrac) {
        self.push_scalar(id, spec, residual.normalize().num);
    }

    fn finish(mut self) -> Self {
        self.cases.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "size": self.size,
            "cases": self
                .cases
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "status": c.status.as_str(),
                        "residual": ncpoly_to_json(&c.residual),
                    })
                })
                .collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!("{} {}\n", c.status.as_str(), c.id));
            if c.status == Status::Fail {
                out.push_str(&format!("  residual: {}\n", c.residual));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {}\n", n));
        }
        out.push_str(&format!(
            "suite={} size={} cases={} failures={}\n",
            self.suite,
            self.size,
            self.cases.len(),
            self.failures()
        ));
        out
    }
}

// ---- Configuration ----

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Matrix size N for coordinate suites; rank runs at N - 1.
    pub size: u8,
    /// Word-length truncation for functional and pairing spans.
    pub max_len: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            size: 3,
            max_len: 4,
            seed: 0,
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "oqm",
    "unipotent",
    "hopf",
    "coinv",
    "smash",
    "xijmap",
    "pairing",
    "phi",
    "psi",
    "gram",
];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let r = match name {
        "oqm" => suite_oqm(cfg)?,
        "unipotent" => suite_unipotent(cfg)?,
        "hopf" => suite_hopf(cfg)?,
        "coinv" => suite_coinv(cfg)?,
        "smash" => suite_smash(cfg)?,
        "xijmap" => suite_xijmap(cfg)?,
        "pairing" => suite_pairing(cfg)?,
        "phi" => suite_phi(cfg)?,
        "psi" => suite_psi(cfg)?,
        "gram" => suite_gram(cfg)?,
        other => {
            return Err(AlgError::Invalid {
                msg: format!("unknown suite {}", other),
            })
        }
    };
    Ok(r.finish())
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Report>, AlgError> {
    SUITE_NAMES.iter().map(|s| run_suite(s, cfg)).collect()
}

// ---- Shared builders ----

/// Raw (unreduced) defining-relation residuals of the quantum matrix
/// algebra at one size, one per unordered generator pair, labeled by
/// branch: same-row and same-col q-commutation, crossing commutation,
/// and the qhat-corrected diagonal branch.
pub fn qmatrix_relation_residuals(size: u8) -> Vec<(String, NCPoly)> {
    let spec = AlgebraSpec::QMatrix(size);
    let raw2 = |a: (u8, u8), b: (u8, u8)| {
        NCPoly::monomial(
            spec,
            Word::from_letters([Letter::new(x(a.0, a.1), 1), Letter::new(x(b.0, b.1), 1)]),
            LaurentPoly::one(),
        )
    };
    let mut cells = Vec::new();
    for i in 1..=size {
        for j in 1..=size {
            cells.push((i, j));
        }
    }
    let mut out = Vec::new();
    for (idx, &(i, j)) in cells.iter().enumerate() {
        for &(l, m) in &cells[idx + 1..] {
            let tag = format!("({},{})x({},{})", i, j, l, m);
            let (branch, residual) = if i == l {
                (
                    "same-row",
                    raw2((i, j), (l, m)).sub(&raw2((l, m), (i, j)).scale(&LaurentPoly::q())),
                )
            } else if j == m {
                (
                    "same-col",
                    raw2((i, j), (l, m)).sub(&raw2((l, m), (i, j)).scale(&LaurentPoly::q())),
                )
            } else if j > m {
                (
                    "crossing-commute",
                    raw2((i, j), (l, m)).sub(&raw2((l, m), (i, j))),
                )
            } else {
                (
                    "diag-corrected",
                    raw2((i, j), (l, m))
                        .sub(&raw2((l, m), (i, j)))
                        .sub(&raw2((i, m), (l, j)).scale(&LaurentPoly::qhat())),
                )
            };
            out.push((format!("{} {}", branch, tag), residual));
        }
    }
    out
}

fn nonzero_range(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

fn random_qm_poly(rng: &mut ChaCha8Rng, size: u8) -> NCPoly {
    let spec = AlgebraSpec::QMatrix(size);
    let nterms = rng.gen_range(1..=2);
    let mut p = NCPoly::zero(spec);
    for _ in 0..nterms {
        let len = rng.gen_range(0..=2);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                Letter::new(
                    x(rng.gen_range(1..=size), rng.gen_range(1..=size)),
                    1,
                )
            })
            .collect();
        let coeff = LaurentPoly::monomial(rng.gen_range(-2..=2), rat_int(nonzero_range(rng, 3)));
        p = p.add(&NCPoly::monomial(spec, Word::from_letters(letters), coeff));
    }
    p
}

fn random_pair_below(rng: &mut ChaCha8Rng, size: u8) -> (u8, u8) {
    let i = rng.gen_range(1..=size - 1);
    let j = rng.gen_range(i + 1..=size);
    (i, j)
}

fn generators_of(spec: AlgebraSpec) -> Vec<GeneratorId> {
    let n = spec.size();
    let mut out = Vec::new();
    match spec {
        AlgebraSpec::QMatrix(_) => {
            for i in 1..=n {
                for j in 1..=n {
                    out.push(x(i, j));
                }
            }
        }
        AlgebraSpec::BorelPlus(_) => {
            for i in 1..=n {
                for j in i..=n {
                    out.push(x(i, j));
                }
            }
        }
        AlgebraSpec::BorelMinus(_) => {
            for i in 1..=n {
                for j in 1..=i {
                    out.push(x(i, j));
                }
            }
        }
        AlgebraSpec::Torus(_) => {
            for i in 1..=n {
                out.push(GeneratorId::y(i));
            }
        }
    }
    out
}

// ---- oqm: rewriting soundness and the transpose ----

fn suite_oqm(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let mut report = Report::new("oqm", size);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..500 {
        let a = random_qm_poly(&mut rng, size);
        let b = random_qm_poly(&mut rng, size);
        let c = random_qm_poly(&mut rng, size);
        let lhs = a.mul(&b)?.mul(&c)?;
        let rhs = a.mul(&b.mul(&c)?)?;
        report.push(format!("assoc triple {:03}", k), lhs.sub(&rhs));
    }
    for (id, raw) in qmatrix_relation_residuals(size) {
        report.push(format!("relation {}", id), raw.normal_form()?);
        report.push(format!("transpose {}", id), transpose(&raw)?.normal_form()?);
    }
    report.push(
        "transpose qdet".to_string(),
        transpose(&qdet(size))?.normal_form()?.sub(&qdet(size)),
    );
    for i in 1..=size {
        for j in (i + 1)..=size {
            let mapped = borel_transpose(&unipotent_gen(
                UnipotentKind::Y,
                BorelSign::Plus,
                size,
                i,
                j,
            )?)?;
            let target = unipotent_gen(UnipotentKind::Z, BorelSign::Minus, size, i, j)?
                .scale(&LaurentPoly::q_pow(-1));
            report.push(
                format!("borel transpose y+({},{})", i, j),
                mapped.sub(&target).normal_form()?,
            );
        }
    }
    Ok(report)
}

// ---- unipotent: the y/z presentations ----

fn suite_unipotent(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let mut report = Report::new("unipotent", cfg.size);
    for kind in [UnipotentKind::Y, UnipotentKind::Z] {
        for sign in [BorelSign::Plus, BorelSign::Minus] {
            for (id, residual) in unipotent_relation_cases(kind, sign, cfg.size)? {
                report.push(id, residual);
            }
        }
    }
    Ok(report)
}

// ---- hopf: coalgebra axioms and the antipode ----

/// Contracts every leg except `keep` with the counit.
fn counit_contract(t: &TensorPoly, keep: usize) -> Result<NCPoly, AlgError> {
    let specs = t.specs().to_vec();
    let mut acc = NCPoly::zero(specs[keep]);
    for (words, c) in t.terms() {
        let mut scalar = c.clone();
        for (idx, w) in words.iter().enumerate() {
            if idx == keep {
                continue;
            }
            let eps = counit(&NCPoly::monomial(specs[idx], w.clone(), LaurentPoly::one()))?;
            scalar = scalar.mul(&eps);
        }
        acc = acc.add(&NCPoly::monomial(specs[keep], words[keep].clone(), scalar));
    }
    acc.normal_form()
}

fn suite_hopf(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let mut report = Report::new("hopf", size);
    let kinds = [
        AlgebraSpec::QMatrix(size),
        AlgebraSpec::BorelPlus(size),
        AlgebraSpec::BorelMinus(size),
        AlgebraSpec::Torus(size),
    ];
    for spec in kinds {
        for g in generators_of(spec) {
            let p = NCPoly::generator(spec, g)?;
            let d = comult(&p)?;
            let left = comult_leg(&d, 0)?;
            let right = comult_leg(&d, 1)?;
            report.push_flag(
                format!("coassoc {} {}", spec.name(), g),
                left == right,
                spec,
            );
            report.push(
                format!("counit-left {} {}", spec.name(), g),
                counit_contract(&d, 1)?.sub(&p),
            );
            report.push(
                format!("counit-right {} {}", spec.name(), g),
                counit_contract(&d, 0)?.sub(&p),
            );
        }
    }
    let conv = resolve_antipode_convention();
    for i in 1..=size {
        for j in 1..=size {
            for (order, left) in [("left", true), ("right", false)] {
                report.push(
                    format!("antipode {} ({},{})", order, i, j),
                    antipode_axiom_residual(size, i, j, conv, left)?,
                );
            }
        }
    }
    report.notes.push(antipode_note());
    Ok(report)
}

// ---- coinv: coaction coinvariants ----

fn suite_coinv(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let mut report = Report::new("coinv", size);
    for sign in [BorelSign::Plus, BorelSign::Minus] {
        let tag = match sign {
            BorelSign::Plus => "+",
            BorelSign::Minus => "-",
        };
        for i in 1..=size {
            for j in (i + 1)..=size {
                let z = unipotent_gen(UnipotentKind::Z, sign, size, i, j)?;
                report.push_flag(
                    format!("eta coinvariant z{}({},{})", tag, i, j),
                    is_coinvariant(&z, CoactionMap::Eta)?,
                    sign.spec(size),
                );
                let y = unipotent_gen(UnipotentKind::Y, sign, size, i, j)?;
                report.push_flag(
                    format!("theta coinvariant y{}({},{})", tag, i, j),
                    is_coinvariant(&y, CoactionMap::Theta)?,
                    sign.spec(size),
                );
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..200 {
        let sign = if k % 2 == 0 {
            BorelSign::Plus
        } else {
            BorelSign::Minus
        };
        let (kind, map, family) = if (k / 2) % 2 == 0 {
            (UnipotentKind::Z, CoactionMap::Eta, "z/eta")
        } else {
            (UnipotentKind::Y, CoactionMap::Theta, "y/theta")
        };
        let len = rng.gen_range(1..=4);
        let mut p = NCPoly::one(sign.spec(size));
        for _ in 0..len {
            let (i, j) = random_pair_below(&mut rng, size);
            p = p.mul(&unipotent_gen(kind, sign, size, i, j)?)?;
        }
        report.push_flag(
            format!("coinvariant product {} {:03}", family, k),
            is_coinvariant(&p, map)?,
            sign.spec(size),
        );
    }
    // Negative controls: bare off-triangle matrix entries are not
    // coinvariant.
    for i in 1..=size {
        for j in 1..=size {
            if i == j {
                continue;
            }
            let (spec, tag) = if i < j {
                (AlgebraSpec::BorelPlus(size), "borel+")
            } else {
                (AlgebraSpec::BorelMinus(size), "borel-")
            };
            let p = NCPoly::generator(spec, x(i, j))?;
            report.push_flag(
                format!("negative control {} X[{},{}] not eta-coinvariant", tag, i, j),
                !is_coinvariant(&p, CoactionMap::Eta)?,
                spec,
            );
        }
    }
    Ok(report)
}

// ---- smash: the structure maps ----

fn random_smash(
    rng: &mut ChaCha8Rng,
    side: SmashSide,
    sign: BorelSign,
    size: u8,
) -> Result<SmashElement, AlgError> {
    let mut s = SmashElement::zero(side, sign, size);
    let nterms = rng.gen_range(1..=2);
    for _ in 0..nterms {
        let clen = rng.gen_range(0..=2);
        let coinv_letters: Vec<Letter> = (0..clen)
            .map(|_| {
                let (i, j) = random_pair_below(rng, size);
                Letter::new(x(i, j), 1)
            })
            .collect();
        let tlen = rng.gen_range(0..=2);
        let torus_letters: Vec<Letter> = (0..tlen)
            .map(|_| Letter::new(GeneratorId::y(rng.gen_range(1..=size)), nonzero_range(rng, 2)))
            .collect();
        let coeff = LaurentPoly::monomial(rng.gen_range(-2..=2), rat_int(nonzero_range(rng, 3)));
        s.add_term(
            Word::from_letters(coinv_letters),
            Word::from_letters(torus_letters),
            coeff,
        )?;
    }
    Ok(s)
}

fn torus_words_up_to(size: u8, max_len: usize) -> Vec<Word> {
    let mut letters = Vec::new();
    for i in 1..=size {
        letters.push(Letter::new(GeneratorId::y(i), 1));
        letters.push(Letter::new(GeneratorId::y(i), -1));
    }
    let mut out = vec![Word::one()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut v = w.clone();
                v.push(*l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| Word::from_letters(v.clone())));
        layer = next;
    }
    out
}

fn suite_smash(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let mut report = Report::new("smash", size);
    for sign in [BorelSign::Plus, BorelSign::Minus] {
        let tag = match sign {
            BorelSign::Plus => "+",
            BorelSign::Minus => "-",
        };
        for i in 1..=size {
            for j in (i + 1)..=size {
                // Phi(z(i,j) # Y[col]) recovers the bare matrix entry.
                let col = match sign {
                    BorelSign::Plus => j,
                    BorelSign::Minus => i,
                };
                let gen_smash = smash_mul(
                    &smash_coinv_gen(SmashSide::CoinvFirst, sign, size, i, j)?,
                    &smash_torus(
                        SmashSide::CoinvFirst,
                        sign,
                        size,
                        Word::gen(GeneratorId::y(col)),
                    )?,
                )?;
                let target = match sign {
                    BorelSign::Plus => NCPoly::generator(sign.spec(size), x(i, j))?,
                    BorelSign::Minus => NCPoly::generator(sign.spec(size), x(j, i))?,
                };
                report.push(
                    format!("phi structure z{}({},{})", tag, i, j),
                    smash_phi(&gen_smash)?.sub(&target).normal_form()?,
                );
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (side, label) in [
        (SmashSide::CoinvFirst, "phi multiplicative"),
        (SmashSide::TorusFirst, "psi multiplicative"),
    ] {
        for k in 0..200 {
            let sign = if k % 2 == 0 {
                BorelSign::Plus
            } else {
                BorelSign::Minus
            };
            let s1 = random_smash(&mut rng, side, sign, size)?;
            let s2 = random_smash(&mut rng, side, sign, size)?;
            let lhs = smash_phi(&smash_mul(&s1, &s2)?)?;
            let rhs = smash_phi(&s1)?.mul(&smash_phi(&s2)?)?;
            report.push(format!("{} {:03}", label, k), lhs.sub(&rhs));
        }
    }
    for sign in [BorelSign::Plus, BorelSign::Minus] {
        let tag = match sign {
            BorelSign::Plus => "+",
            BorelSign::Minus => "-",
        };
        let torus = AlgebraSpec::Torus(size);
        for (k, w) in torus_words_up_to(size, 3).into_iter().enumerate() {
            let t = NCPoly::monomial(torus, w, LaurentPoly::one());
            let lhs = r_map(&t, sign)?.mul(&r_map(&torus_antipode(&t)?, sign)?)?;
            let expected = NCPoly::one(sign.spec(size)).scale(&counit(&t)?);
            report.push(
                format!("r convolution inverse {} {:03}", tag, k),
                lhs.sub(&expected),
            );
        }
    }
    Ok(report)
}

// ---- xijmap: matrix-coefficient functionals ----

fn suite_xijmap(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let n = size - 1;
    let mut report = Report::new("xijmap", size);
    let grid = lambda_grid(n);
    let words = words_up_to(n, cfg.max_len);
    for i in 1..=size {
        for j in 1..=size {
            let mut bad = LaurentPoly::zero();
            for lambda in &grid {
                for letters in &words {
                    let direct = xbar_eval(n, i, j, lambda, letters)?;
                    let u = UqElement::monomial(
                        n,
                        UqVariant::Geq0,
                        lambda.clone(),
                        letters.clone(),
                        LaurentPoly::one(),
                    )?;
                    let via_module =
                        module_act(&u, &ModuleVector::basis(n, j)?)?.coeff_of(&[i]);
                    let diff = direct.sub(&via_module);
                    if !diff.is_zero() && bad.is_zero() {
                        bad = diff;
                    }
                    if i > j && !via_module.is_zero() && bad.is_zero() {
                        bad = via_module;
                    }
                }
            }
            let id = if i > j {
                format!("xbar[{},{}] vanishes below the diagonal", i, j)
            } else {
                format!("xbar[{},{}] matches the module route", i, j)
            };
            report.push_scalar(id, AlgebraSpec::QMatrix(size), bad);
        }
    }
    // The defining relations evaluate to zero as functionals on raw
    // spanning words; desk scale keeps the rank small here.
    if n <= 2 {
        for (id, raw) in qmatrix_relation_residuals(size) {
            let mut bad = LaurentPoly::zero();
            for lambda in &grid {
                for letters in &words {
                    let u = UqElement::monomial(
                        n,
                        UqVariant::Geq0,
                        lambda.clone(),
                        letters.clone(),
                        LaurentPoly::one(),
                    )?;
                    let v = functional_eval(&raw, &u)?;
                    if !v.is_zero() && bad.is_zero() {
                        bad = v;
                    }
                }
            }
            report.push_scalar(
                format!("functional {}", id),
                AlgebraSpec::QMatrix(size),
                bad,
            );
        }
    }
    Ok(report)
}

// ---- pairing ----

fn f_word(n: u8, mu: Weight, letters: Vec<u8>) -> Result<UqElement, AlgError> {
    UqElement::monomial(n, UqVariant::Leq0Check, mu, letters, LaurentPoly::one())
}

fn e_word(n: u8, lambda: Weight, letters: Vec<u8>) -> Result<UqElement, AlgError> {
    UqElement::monomial(n, UqVariant::Geq0, lambda, letters, LaurentPoly::one())
}

fn serre_element(n: u8, variant: UqVariant, i: u8, j: u8) -> Result<UqElement, AlgError> {
    let word = |letters: Vec<u8>| {
        UqElement::monomial(n, variant, Weight::zero(n), letters, LaurentPoly::one())
    };
    word(vec![i, i, j])?
        .sub(&word(vec![i, j, i])?.scale(&LaurentPoly::q().add(&LaurentPoly::q_pow(-1))))?
        .add(&word(vec![j, i, i])?)
}

fn distant_element(n: u8, variant: UqVariant, i: u8, j: u8) -> Result<UqElement, AlgError> {
    let word = |letters: Vec<u8>| {
        UqElement::monomial(n, variant, Weight::zero(n), letters, LaurentPoly::one())
    };
    word(vec![i, j])?.sub(&word(vec![j, i])?)
}

fn sorted_copy(w: &[u8]) -> Vec<u8> {
    let mut v = w.to_vec();
    v.sort_unstable();
    v
}

fn suite_pairing(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let n = size - 1;
    let scalar_spec = AlgebraSpec::QMatrix(size);
    let mut report = Report::new("pairing", size);
    let grid = lambda_grid(n);

    // Generator base cases.
    for i in 1..=n {
        for j in 1..=n {
            let got = pair(
                &f_word(n, Weight::zero(n), vec![i])?,
                &e_word(n, Weight::zero(n), vec![j])?,
                PairStrategy::PeelSecondArg,
            )?;
            let expected = if i == j {
                QhatFrac::new(LaurentPoly::from_int(-1), 1)
            } else {
                QhatFrac::zero()
            };
            report.push_qhat(
                format!("base (F[{}],E[{}])", i, j),
                scalar_spec,
                got.sub(&expected),
            );
        }
    }
    for (a, mu) in grid.iter().enumerate() {
        for (b, nu) in grid.iter().enumerate() {
            let got = pair(
                &f_word(n, mu.clone(), Vec::new())?,
                &e_word(n, nu.clone(), Vec::new())?,
                PairStrategy::PeelSecondArg,
            )?;
            let expected = QhatFrac::from_laurent(LaurentPoly::q_pow(-form_int(mu, nu)?));
            report.push_qhat(
                format!("base K-grid {:02}x{:02}", a, b),
                scalar_spec,
                got.sub(&expected),
            );
        }
    }
    for j in 1..=n {
        let got = pair(
            &f_word(n, grid[1].clone(), Vec::new())?,
            &e_word(n, Weight::zero(n), vec![j])?,
            PairStrategy::PeelSecondArg,
        )?;
        report.push_qhat(format!("base (K,E[{}]) vanishes", j), scalar_spec, got);
        let got = pair(
            &f_word(n, Weight::zero(n), vec![j])?,
            &e_word(n, grid[1].clone(), Vec::new())?,
            PairStrategy::PeelSecondArg,
        )?;
        report.push_qhat(format!("base (F[{}],K) vanishes", j), scalar_spec, got);
    }

    // Split-order independence on seeded random words.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..300 {
        let mu = Weight::from_omega_coords(
            (0..n).map(|_| rat_int(rng.gen_range(-2..=2))).collect(),
        );
        let mut lambda = Weight::zero(n);
        for i in 1..=n {
            let c: i64 = rng.gen_range(-2..=2);
            for _ in 0..c.abs() {
                let a = Weight::alpha(n, i)?;
                lambda = if c > 0 { lambda.add(&a) } else { lambda.sub(&a) };
            }
        }
        let fl: Vec<u8> = (0..rng.gen_range(0..=cfg.max_len))
            .map(|_| rng.gen_range(1..=n))
            .collect();
        let el: Vec<u8> = (0..rng.gen_range(0..=cfg.max_len))
            .map(|_| rng.gen_range(1..=n))
            .collect();
        let y = f_word(n, mu, fl)?;
        let xe = e_word(n, lambda, el)?;
        let a = pair(&y, &xe, PairStrategy::PeelSecondArg)?;
        let b = pair(&y, &xe, PairStrategy::PeelFirstArg)?;
        let c = pair_leftmost(&y, &xe)?;
        let mut bad = a.sub(&b);
        if bad.is_zero() {
            bad = a.sub(&c);
        }
        report.push_qhat(format!("well-defined {:03}", k), scalar_spec, bad);
    }

    // Weight orthogonality, exhaustive over letter words.
    let span = words_up_to(n, cfg.max_len.min(4));
    for la in 0..=cfg.max_len.min(4) {
        for lb in 0..=cfg.max_len.min(4) {
            let mut bad = QhatFrac::zero();
            for fw in span.iter().filter(|w| w.len() == la) {
                for ew in span.iter().filter(|w| w.len() == lb) {
                    if sorted_copy(fw) == sorted_copy(ew) {
                        continue;
                    }
                    let v = pair(
                        &f_word(n, Weight::zero(n), fw.clone())?,
                        &e_word(n, Weight::zero(n), ew.clone())?,
                        PairStrategy::PeelSecondArg,
                    )?;
                    if !v.is_zero() && bad.is_zero() {
                        bad = v;
                    }
                }
            }
            report.push_qhat(
                format!("weight orthogonality |I|={} |J|={}", la, lb),
                scalar_spec,
                bad,
            );
        }
    }

    // Relation residuals are in the radical: padded Serre and distant
    // elements pair to zero against every matching-weight word.
    let mut relation_elements: Vec<(String, UqVariant, UqElement)> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i.abs_diff(j) == 1 {
                relation_elements.push((
                    format!("serre i={} j={}", i, j),
                    UqVariant::Geq0,
                    serre_element(n, UqVariant::Geq0, i, j)?,
                ));
                relation_elements.push((
                    format!("serre i={} j={} f-side", i, j),
                    UqVariant::Leq0Check,
                    serre_element(n, UqVariant::Leq0Check, i, j)?,
                ));
            } else if i < j && j - i >= 2 {
                relation_elements.push((
                    format!("distant i={} j={}", i, j),
                    UqVariant::Geq0,
                    distant_element(n, UqVariant::Geq0, i, j)?,
                ));
                relation_elements.push((
                    format!("distant i={} j={} f-side", i, j),
                    UqVariant::Leq0Check,
                    distant_element(n, UqVariant::Leq0Check, i, j)?,
                ));
            }
        }
    }
    for (id, variant, rel) in relation_elements {
        let base_len = rel.terms().next().map_or(0, |(w, _)| w.letters.len());
        let pad = 5usize.saturating_sub(base_len);
        let mut bad = QhatFrac::zero();
        for w1 in words_up_to(n, pad) {
            for w2 in words_up_to(n, pad - w1.len()) {
                let padded = UqElement::monomial(
                    n,
                    variant,
                    Weight::zero(n),
                    w1.clone(),
                    LaurentPoly::one(),
                )?
                .mul(&rel)?
                .mul(&UqElement::monomial(
                    n,
                    variant,
                    Weight::zero(n),
                    w2.clone(),
                    LaurentPoly::one(),
                )?)?;
                // All padded terms share one letter multiset.
                let weight_word =
                    sorted_copy(&padded.terms().next().map_or(Vec::new(), |(w, _)| w.letters.clone()));
                let total_len = weight_word.len();
                for partner in words_up_to(n, total_len) {
                    if partner.len() != total_len || sorted_copy(&partner) != weight_word {
                        continue;
                    }
                    let v = if variant.is_e_side() {
                        pair(
                            &f_word(n, Weight::zero(n), partner.clone())?,
                            &padded,
                            PairStrategy::PeelSecondArg,
                        )?
                    } else {
                        pair(
                            &padded,
                            &e_word(n, Weight::zero(n), partner.clone())?,
                            PairStrategy::PeelSecondArg,
                        )?
                    };
                    if !v.is_zero() && bad.is_zero() {
                        bad = v;
                    }
                }
            }
        }
        report.push_qhat(format!("radical {}", id), scalar_spec, bad);
    }
    Ok(report)
}

// ---- phi ----

fn suite_phi(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let n = size - 1;
    let bp = AlgebraSpec::BorelPlus(size);
    let mut report = Report::new("phi", size);
    let grid = lambda_grid(n);
    let diag = |i: u8| NCPoly::generator(bp, x(i, i));
    for i in 1..=size {
        let y = UqElement::k_of(n, UqVariant::Leq0Check, Weight::beta(n, i)?.neg())?;
        report.push_flag(
            format!("phi K{{-beta_{}}} -> xbar[{},{}]", i, i, i),
            phi_check(&y, &diag(i)?, &QhatFrac::one(), cfg.max_len, &grid)?,
            bp,
        );
        let y = UqElement::k_of(n, UqVariant::Leq0Check, Weight::beta(n, i)?)?;
        report.push_flag(
            format!("phi K{{beta_{}}} -> xbar[{},{}]^-1", i, i, i),
            phi_check(&y, &diag(i)?.try_inverse()?, &QhatFrac::one(), cfg.max_len, &grid)?,
            bp,
        );
    }
    for i in 1..=n {
        let y = UqElement::monomial(
            n,
            UqVariant::Leq0Check,
            Weight::beta(n, i)?.neg().add(&Weight::alpha(n, i)?),
            vec![i],
            LaurentPoly::one(),
        )?;
        let scale = QhatFrac::new(LaurentPoly::monomial(-1, rat_int(-1)), 1);
        report.push_flag(
            format!(
                "phi K{{-beta_{}+alpha_{}}}F[{}] -> -q^-1*qhat^-1*xbar[{},{}]",
                i,
                i,
                i,
                i,
                i + 1
            ),
            phi_check(
                &y,
                &NCPoly::generator(bp, x(i, i + 1))?,
                &scale,
                cfg.max_len,
                &grid,
            )?,
            bp,
        );
        let oe = cartan_omega(&UqElement::gen(n, UqVariant::Geq0Check, i)?);
        let xpoly = NCPoly::generator(bp, x(i, i + 1))?.mul(&diag(i + 1)?.try_inverse()?)?;
        let scale = QhatFrac::new(LaurentPoly::from_int(-1), 1);
        report.push_flag(
            format!(
                "phi omega(E[{}]) -> -qhat^-1*xbar[{},{}]*xbar[{},{}]^-1",
                i,
                i,
                i + 1,
                i + 1,
                i + 1
            ),
            phi_check(&oe, &xpoly, &scale, cfg.max_len, &grid)?,
            bp,
        );
    }
    Ok(report)
}

// ---- psi ----

fn suite_psi(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let n = size - 1;
    let bp = AlgebraSpec::BorelPlus(size);
    let mut report = Report::new("psi", size);
    for (id, residual) in uqplus_relation_cases(n)? {
        report.push(id, residual);
    }
    let (count, rank) = psi_sorted_rank(n, 3)?;
    report.push_scalar(
        "psi sorted-word images independent (length <= 3)".to_string(),
        bp,
        LaurentPoly::from_int(count as i64 - rank as i64),
    );
    report.notes.push(
        "distant commutation (E_i E_j = E_j E_i for |i-j| >= 2) is taken among the \
         defining relations of the plus part alongside the adjacent quantum Serre relations"
            .to_string(),
    );
    Ok(report)
}

// ---- gram ----

fn compositions(n: usize, max_total: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for partial in &out {
            let used: u64 = partial.iter().sum();
            for take in 0..=(max_total - used) {
                let mut v = partial.clone();
                v.push(take);
                next.push(v);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().sum::<u64>() >= 1);
    out
}

fn suite_gram(cfg: &VerifyConfig) -> Result<Report, AlgError> {
    let size = cfg.size;
    let n = size - 1;
    let scalar_spec = AlgebraSpec::QMatrix(size);
    let mut report = Report::new("gram", size);
    for counts in compositions(n as usize, 4) {
        let mut mu = Weight::zero(n);
        for (im1, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                mu = mu.add(&Weight::alpha(n, im1 as u8 + 1)?);
            }
        }
        let g = gram_rank(n, &mu, 4)?;
        let d = dimension_oracle(n, &mu)?;
        let label: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        report.push_scalar(
            format!("gram rank mu=({})", label.join(",")),
            scalar_spec,
            LaurentPoly::from_int(g.rank as i64 - d as i64),
        );
    }
    Ok(report)
}
