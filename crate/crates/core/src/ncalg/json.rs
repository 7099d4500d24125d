//! JSON forms. Term maps iterate sorted (BTreeMap), and serde_json's
//! default map keeps keys ordered, so serialization is byte-deterministic.
//!
//! Letters encode as `["X", row, col, exp]`, `["Y", idx, exp]`,
//! `["E", idx, exp]`, `["F", idx, exp]`; coefficients as sorted
//! `[qexp, "p/r"]` pairs.

use super::{GeneratorId, NCPoly, TensorPoly, Word};
use crate::coeff::LaurentPoly;
use serde_json::{json, Value};

fn word_to_json(w: &Word) -> Value {
    Value::Array(
        w.letters()
            .iter()
            .map(|l| match l.gen {
                GeneratorId::X { row, col } => json!(["X", row, col, l.exp]),
                GeneratorId::Y { idx } => json!(["Y", idx, l.exp]),
                GeneratorId::E { idx } => json!(["E", idx, l.exp]),
                GeneratorId::F { idx } => json!(["F", idx, l.exp]),
                GeneratorId::K => json!(["K", l.exp]),
            })
            .collect(),
    )
}

fn coeff_to_json(c: &LaurentPoly) -> Value {
    Value::Array(
        c.iter()
            .map(|(k, r)| json!([k, r.to_string()]))
            .collect(),
    )
}

/// `{"spec": "...", "terms": [{"coeff": [[qexp, "p/r"],...], "word": [...]}]}`
pub fn ncpoly_to_json(p: &NCPoly) -> Value {
    json!({
        "spec": p.spec().name(),
        "terms": p
            .terms()
            .map(|(w, c)| json!({"word": word_to_json(w), "coeff": coeff_to_json(c)}))
            .collect::<Vec<_>>(),
    })
}

/// Tensor variant: `"specs"` lists one algebra name per leg and each term
/// carries a `"words"` array of the same length.
pub fn tensor_to_json(t: &TensorPoly) -> Value {
    json!({
        "specs": t.specs().iter().map(|s| s.name()).collect::<Vec<_>>(),
        "terms": t
            .terms()
            .map(|(ws, c)| {
                json!({
                    "words": ws.iter().map(word_to_json).collect::<Vec<_>>(),
                    "coeff": coeff_to_json(c),
                })
            })
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{AlgebraSpec, GeneratorId, Letter, NCPoly, TensorPoly, Word};
    use super::*;
    use crate::coeff::LaurentPoly;

    #[test]
    fn ncpoly_schema() {
        let qm = AlgebraSpec::QMatrix(2);
        let w1 = Word::from_letters([
            Letter::new(GeneratorId::x(1, 1), 1),
            Letter::new(GeneratorId::x(2, 2), 1),
        ]);
        let w2 = Word::from_letters([
            Letter::new(GeneratorId::x(1, 2), 1),
            Letter::new(GeneratorId::x(2, 1), 1),
        ]);
        let p = NCPoly::monomial(qm, w1, LaurentPoly::one())
            .add(&NCPoly::monomial(qm, w2, LaurentPoly::q().neg()));
        assert_eq!(
            serde_json::to_string(&ncpoly_to_json(&p)).unwrap(),
            r#"{"spec":"qm:2","terms":[{"coeff":[[0,"1"]],"word":[["X",1,1,1],["X",2,2,1]]},{"coeff":[[1,"-1"]],"word":[["X",1,2,1],["X",2,1,1]]}]}"#
        );
    }

    #[test]
    fn tensor_schema() {
        let t = TensorPoly::of(&[
            NCPoly::generator(AlgebraSpec::BorelPlus(2), GeneratorId::x(1, 2)).unwrap(),
            NCPoly::generator(AlgebraSpec::Torus(2), GeneratorId::y(1)).unwrap(),
        ]);
        assert_eq!(
            serde_json::to_string(&tensor_to_json(&t)).unwrap(),
            r#"{"specs":["borel+:2","torus:2"],"terms":[{"coeff":[[0,"1"]],"words":[[["X",1,2,1]],[["Y",1,1]]]}]}"#
        );
    }

    #[test]
    fn rational_coefficients_serialize_as_fractions() {
        let qm = AlgebraSpec::QMatrix(2);
        let p = NCPoly::scalar(qm, LaurentPoly::monomial(-2, crate::coeff::rat(2, 3)));
        assert_eq!(
            serde_json::to_string(&ncpoly_to_json(&p)).unwrap(),
            r#"{"spec":"qm:2","terms":[{"coeff":[[-2,"2/3"]],"word":[]}]}"#
        );
    }
}
