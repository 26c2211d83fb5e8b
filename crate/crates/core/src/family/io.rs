//! JSON parameter files.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{General26, Normalized14, ParamPoint, Provenance, NORMALIZED_KEYS};
use crate::error::{Error, Result};
use crate::polyring::{Coeff, Fp, Param, PrimeField, Rational, NUM_PARAMS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Fp(PrimeField),
}

impl FromStr for FieldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "rational" {
            return Ok(FieldChoice::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::Parse(format!("field must be 'rational' or 'fp:<prime>', got {s:?}")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in field {s:?}")))?;
        Ok(FieldChoice::Fp(PrimeField::new(p)?))
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rational => write!(f, "rational"),
            FieldChoice::Fp(p) => write!(f, "{p}"),
        }
    }
}

/// A parameter point over whichever field the file named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPoint {
    Rational(ParamPoint<Rational>),
    Fp(ParamPoint<Fp>),
}

impl AnyPoint {
    pub fn field(&self) -> FieldChoice {
        match self {
            AnyPoint::Rational(_) => FieldChoice::Rational,
            AnyPoint::Fp(p) => FieldChoice::Fp(match p {
                ParamPoint::Normalized14(t) => t.values()[0].field(),
                ParamPoint::General26(g) => g.values()[0].field(),
            }),
        }
    }
}

/// On-disk form: `{"model": ..., "field": ..., "coeffs": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamFile {
    pub model: String,
    pub field: String,
    pub coeffs: BTreeMap<String, Value>,
}

fn scalar_text(key: &str, v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(Error::Parse(format!(
            "coefficient {key} must be an integer or a \"num/den\" string"
        ))),
    }
}

fn convert<C: Coeff>(ring: &C::Ring, key: &str, q: &Rational) -> Result<C> {
    C::from_rational(ring, q)
        .ok_or_else(|| Error::Parse(format!("coefficient {key} = {q} has no image in the field")))
}

fn check_keys(coeffs: &BTreeMap<String, Value>, expected: &[String]) -> Result<()> {
    if let Some(k) = coeffs.keys().find(|k| !expected.contains(k)) {
        return Err(Error::Parse(format!("unknown coefficient key {k:?}")));
    }
    if let Some(k) = expected.iter().find(|k| !coeffs.contains_key(*k)) {
        return Err(Error::Parse(format!("missing coefficient key {k:?}")));
    }
    Ok(())
}

fn general_keys() -> Vec<String> {
    (0..NUM_PARAMS)
        .map(|k| format!("a_{}_{}", k / 13 + 1, k % 13))
        .collect()
}

impl ParamFile {
    pub fn parse(text: &str) -> Result<AnyPoint> {
        let file: ParamFile = serde_json::from_str(text)?;
        file.to_point()
    }

    fn point_over<C: Coeff>(&self, ring: &C::Ring) -> Result<ParamPoint<C>> {
        let mut rationals = BTreeMap::new();
        for (k, v) in &self.coeffs {
            rationals.insert(k.clone(), scalar_text(k, v)?.parse::<Rational>()?);
        }
        match self.model.as_str() {
            "normalized14" => {
                let keys: Vec<String> = NORMALIZED_KEYS.iter().map(|s| s.to_string()).collect();
                check_keys(&self.coeffs, &keys)?;
                let mut values = Vec::with_capacity(14);
                for k in &keys {
                    values.push(convert::<C>(ring, k, &rationals[k])?);
                }
                let values: [C; 14] = values.try_into().expect("14 entries");
                Ok(ParamPoint::Normalized14(Normalized14::new(values, Provenance::User)))
            }
            "general26" => {
                let keys = general_keys();
                check_keys(&self.coeffs, &keys)?;
                let mut values = Vec::with_capacity(NUM_PARAMS);
                for (idx, k) in keys.iter().enumerate() {
                    debug_assert_eq!(Param::general(idx / 13 + 1, idx % 13).index(), idx);
                    values.push(convert::<C>(ring, k, &rationals[k])?);
                }
                let values: [C; NUM_PARAMS] = values.try_into().expect("26 entries");
                Ok(ParamPoint::General26(General26::new(values, Provenance::User)))
            }
            other => Err(Error::Parse(format!(
                "model must be 'normalized14' or 'general26', got {other:?}"
            ))),
        }
    }

    pub fn to_point(&self) -> Result<AnyPoint> {
        match self.field.parse::<FieldChoice>()? {
            FieldChoice::Rational => Ok(AnyPoint::Rational(self.point_over::<Rational>(&())?)),
            FieldChoice::Fp(p) => Ok(AnyPoint::Fp(self.point_over::<Fp>(&p)?)),
        }
    }

    pub fn from_point<C: Coeff>(p: &ParamPoint<C>, field: FieldChoice) -> Self {
        let (model, map) = match p {
            ParamPoint::Normalized14(t) => ("normalized14", t.to_map()),
            ParamPoint::General26(g) => ("general26", g.to_map()),
        };
        ParamFile {
            model: model.to_string(),
            field: field.to_string(),
            coeffs: map.into_iter().map(|(k, v)| (k, Value::String(v))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_normalized() {
        let text = r#"{"model":"normalized14","field":"rational","coeffs":{
            "a1":"3","b1":"-2/5","c1":0,"d1":1,"e1":"0","h1":"2","l1":"0",
            "a2":"0","b2":"0","c2":"0","d2":"0","g2":"0","h2":"0","l2":"7"}}"#;
        let AnyPoint::Rational(ParamPoint::Normalized14(t)) = ParamFile::parse(text).unwrap() else {
            panic!("wrong variant")
        };
        assert_eq!(*t.get("b1"), Rational::new(-2, 5));
        let file = ParamFile::from_point(&ParamPoint::Normalized14(t.clone()), FieldChoice::Rational);
        let again = file.to_point().unwrap();
        assert_eq!(again, AnyPoint::Rational(ParamPoint::Normalized14(t)));
    }

    #[test]
    fn key_errors() {
        let missing = r#"{"model":"normalized14","field":"rational","coeffs":{"a1":"3"}}"#;
        assert!(matches!(ParamFile::parse(missing), Err(Error::Parse(_))));
        let mut coeffs: Vec<String> = NORMALIZED_KEYS.iter().map(|k| format!("\"{k}\":\"1\"")).collect();
        coeffs.push("\"zz\":\"1\"".into());
        let unknown = format!(
            r#"{{"model":"normalized14","field":"rational","coeffs":{{{}}}}}"#,
            coeffs.join(",")
        );
        assert!(matches!(ParamFile::parse(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn fp_field() {
        let coeffs: Vec<String> = general_keys().iter().map(|k| format!("\"{k}\":\"1/2\"")).collect();
        let text = format!(
            r#"{{"model":"general26","field":"fp:7","coeffs":{{{}}}}}"#,
            coeffs.join(",")
        );
        let p = ParamFile::parse(&text).unwrap();
        assert_eq!(p.field(), FieldChoice::Fp(PrimeField::new(7).unwrap()));
        let AnyPoint::Fp(ParamPoint::General26(g)) = p else { panic!() };
        assert_eq!(g.get(2, 12).value(), 4);
        assert!("fp:9".parse::<FieldChoice>().is_err());
        assert!("fp:3".parse::<FieldChoice>().is_err());
    }
}
