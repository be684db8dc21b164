//! JSON forms of sequences and priors.
//!
//! ```text
//! {"k": 2, "candidates": [[1, 0], [0, "3/2"]]}
//! {"k": 2, "n": 2, "iid": true,
//!  "steps": [{"atoms": [{"v": [1, 0], "p": "1/2"}, {"v": [0, 3], "p": "1/2"}]}, ...]}
//! ```
//!
//! Exact mode writes probabilities as `"num/den"` strings and non-integral
//! entries as `"num/den"` strings. Readers accept numbers or strings in
//! either mode.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{Atom, FiniteDistribution, ProductPrior, Sequence, ValueVector};
use crate::scalar::{Mode, Scalar};

fn scalar_to_json<N: Scalar>(x: &N) -> Value {
    match N::MODE {
        Mode::Float => json!(x.to_f64()),
        Mode::Exact => {
            let text = x.render();
            match text.parse::<i64>() {
                Ok(i) => json!(i),
                Err(_) => Value::String(text),
            }
        }
    }
}

fn probability_to_json<N: Scalar>(p: &N) -> Value {
    match N::MODE {
        Mode::Float => json!(p.to_f64()),
        Mode::Exact => {
            let text = p.render();
            if text.contains('/') {
                Value::String(text)
            } else {
                Value::String(format!("{text}/1"))
            }
        }
    }
}

fn scalar_from_json<N: Scalar>(v: &Value, what: &str) -> Result<N> {
    match v {
        Value::Number(num) => N::parse(&num.to_string()),
        Value::String(s) => N::parse(s),
        other => Err(Error::Parse(format!("{what}: expected number, got {other}"))),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array")))
}

fn as_count(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{what}: expected a non-negative integer")))
}

pub fn vector_to_json<N: Scalar>(v: &ValueVector<N>) -> Value {
    Value::Array(v.entries().iter().map(scalar_to_json).collect())
}

pub fn vector_from_json<N: Scalar>(v: &Value) -> Result<ValueVector<N>> {
    let entries = as_array(v, "value vector")?
        .iter()
        .map(|e| scalar_from_json(e, "vector entry"))
        .collect::<Result<Vec<N>>>()?;
    ValueVector::new(entries)
}

pub fn sequence_to_json<N: Scalar>(sigma: &Sequence<N>) -> Value {
    json!({
        "k": sigma.k(),
        "candidates": sigma.candidates().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

pub fn sequence_from_json<N: Scalar>(v: &Value) -> Result<Sequence<N>> {
    let obj = as_object(v, "sequence")?;
    let k = as_count(field(obj, "k")?, "k")?;
    let candidates = as_array(field(obj, "candidates")?, "candidates")?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    let sigma = Sequence::new(candidates)?;
    if sigma.k() != k {
        return Err(Error::invalid(format!(
            "declared k={k} but candidates have k={}",
            sigma.k()
        )));
    }
    Ok(sigma)
}

pub fn distribution_to_json<N: Scalar>(d: &FiniteDistribution<N>) -> Value {
    json!({
        "atoms": d.atoms().iter().map(|a| json!({
            "v": vector_to_json(&a.value),
            "p": probability_to_json(&a.prob),
        })).collect::<Vec<_>>(),
    })
}

pub fn distribution_from_json<N: Scalar>(v: &Value) -> Result<FiniteDistribution<N>> {
    let obj = as_object(v, "step")?;
    let atoms = as_array(field(obj, "atoms")?, "atoms")?
        .iter()
        .map(|a| {
            let a = as_object(a, "atom")?;
            Ok(Atom {
                value: vector_from_json(field(a, "v")?)?,
                prob: scalar_from_json(field(a, "p")?, "probability")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteDistribution::new(atoms)
}

pub fn prior_to_json<N: Scalar>(prior: &ProductPrior<N>) -> Value {
    json!({
        "k": prior.k(),
        "n": prior.n(),
        "iid": prior.is_iid(),
        "steps": prior.steps().iter().map(distribution_to_json).collect::<Vec<_>>(),
    })
}

/// Reads a prior. With `"iid": true` a single listed step is repeated `n`
/// times; otherwise exactly `n` steps must be listed.
pub fn prior_from_json<N: Scalar>(v: &Value) -> Result<ProductPrior<N>> {
    let obj = as_object(v, "prior")?;
    let k = as_count(field(obj, "k")?, "k")?;
    let n = as_count(field(obj, "n")?, "n")?;
    let iid = obj.get("iid").and_then(Value::as_bool).unwrap_or(false);
    let steps = as_array(field(obj, "steps")?, "steps")?
        .iter()
        .map(distribution_from_json)
        .collect::<Result<Vec<_>>>()?;
    let prior = if iid && steps.len() == 1 {
        ProductPrior::iid(steps.into_iter().next().expect("one step"), n)?
    } else {
        if steps.len() != n {
            return Err(Error::invalid(format!(
                "declared n={n} but {} steps listed",
                steps.len()
            )));
        }
        ProductPrior::new(steps)?
    };
    if prior.k() != k {
        return Err(Error::invalid(format!(
            "declared k={k} but atoms have k={}",
            prior.k()
        )));
    }
    if iid && !prior.is_iid() {
        return Err(Error::invalid("iid flag set but steps differ"));
    }
    Ok(prior)
}

/// Accepts either a prior or a sequence (read as a deterministic prior).
pub fn prior_or_sequence_from_json<N: Scalar>(v: &Value) -> Result<ProductPrior<N>> {
    let obj = as_object(v, "input")?;
    if obj.contains_key("steps") {
        prior_from_json(v)
    } else if obj.contains_key("candidates") {
        Ok(ProductPrior::deterministic(&sequence_from_json(v)?))
    } else {
        Err(Error::Parse(
            "input has neither \"steps\" nor \"candidates\"".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn sequence_round_trip() {
        let s = Sequence::<Rational>::new(vec![
            ValueVector::new(vec![Rational::from_ratio(3, 2), Rational::from_int(0)]).unwrap(),
            ValueVector::from_ints(&[0, 4]).unwrap(),
        ])
        .unwrap();
        let v = sequence_to_json(&s);
        assert_eq!(v.to_string(), r#"{"candidates":[["3/2",0],[0,4]],"k":2}"#);
        assert_eq!(sequence_from_json::<Rational>(&v).unwrap(), s);
    }

    #[test]
    fn prior_round_trip_and_iid_shorthand() {
        let text = r#"{"k":1,"n":3,"iid":true,"steps":[{"atoms":[{"v":[1],"p":"1/4"},{"v":[3],"p":0.75}]}]}"#;
        let p: ProductPrior<Rational> = prior_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(p.n(), 3);
        assert!(p.is_iid());
        let back = prior_to_json(&p);
        assert_eq!(back["steps"][0]["atoms"][1]["p"], json!("3/4"));
        assert_eq!(prior_from_json::<Rational>(&back).unwrap(), p);
        let f: ProductPrior<f64> = prior_from_json(&back).unwrap();
        assert_eq!(f.steps()[0].atoms()[0].prob, 0.25);
    }

    #[test]
    fn malformed_inputs() {
        let bad = [
            r#"{"k":2,"candidates":[[1,0],[1]]}"#,
            r#"{"k":3,"candidates":[[1,0]]}"#,
            r#"{"candidates":[[1,0]]}"#,
            r#"{"k":1,"n":2,"steps":[{"atoms":[{"v":[1],"p":"1/2"}]}]}"#,
        ];
        for text in bad {
            let v: Value = serde_json::from_str(text).unwrap();
            assert!(prior_or_sequence_from_json::<Rational>(&v).is_err(), "{text}");
        }
    }
}
