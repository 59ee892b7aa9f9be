//! JSON problem files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "N": 2,
//!   "beta": { "coeffs": [-1, 3, 2], "interval": ["0", "1/3"] },
//!   "translations": [{ "value": "b^-2-1" }],
//!   "options": { "assert_in_BN": null, "depth": 8 }
//! }
//! ```
//!
//! `beta` is either `{ "p": 1, "q": 4 }` or a polynomial with ascending
//! integer coefficients and an isolating interval. Each translation is
//! `{ "value": "..." }` or `{ "digits": [..] }`; `t_0 = 0` is implicit.

use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use selfsim_core::algnum::{parse_rational, BetaKind, BetaSpec, Rational};
use selfsim_core::decide::{DecideConfig, TranslationSpec};

use crate::CliError;

pub const PROBLEM_SCHEMA: u64 = 1;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemOptions {
    pub search_degree: Option<usize>,
    pub cap: Option<usize>,
    pub assert_in_bn: Option<bool>,
    pub depth: Option<usize>,
    pub tol: Option<f64>,
}

impl ProblemOptions {
    /// `other` wins wherever it is set.
    pub fn overridden_by(&self, other: &ProblemOptions) -> ProblemOptions {
        ProblemOptions {
            search_degree: other.search_degree.or(self.search_degree),
            cap: other.cap.or(self.cap),
            assert_in_bn: other.assert_in_bn.or(self.assert_in_bn),
            depth: other.depth.or(self.depth),
            tol: other.tol.or(self.tol),
        }
    }

    pub fn decide_config(&self) -> DecideConfig {
        let mut c = DecideConfig::default();
        if let Some(d) = self.search_degree {
            c.search_degree = d;
        }
        if let Some(cap) = self.cap {
            c.enum_cap = cap;
        }
        c.assert_in_bn = self.assert_in_bn;
        c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub beta: BetaSpec,
    pub translations: Vec<TranslationSpec>,
    pub options: ProblemOptions,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Problem::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Problem, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Problem::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Problem, CliError> {
        let top = object(v, "")?;
        known_keys(top, "", &["schema", "N", "beta", "translations", "options"])?;
        if let Some(s) = top.get("schema") {
            let s = uint(s, "schema")?;
            if s != PROBLEM_SCHEMA {
                return Err(field("schema", format!("unsupported schema version {s}")));
            }
        }
        let n = uint(require(top, "", "N")?, "N")?;
        let n = u32::try_from(n)
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| field("N", "must be a positive integer"))?;
        let beta = parse_beta(require(top, "", "beta")?, n)?;
        let translations = match top.get("translations") {
            None => Vec::new(),
            Some(t) => array(t, "translations")?
                .iter()
                .enumerate()
                .map(|(i, t)| parse_translation(t, &format!("translations[{i}]")))
                .collect::<Result<_, _>>()?,
        };
        let options = match top.get("options") {
            None | Some(Value::Null) => ProblemOptions::default(),
            Some(o) => parse_options(o)?,
        };
        Ok(Problem {
            beta,
            translations,
            options,
        })
    }

    pub fn to_value(&self) -> Value {
        let beta = match &self.beta.kind {
            BetaKind::Rational { p, q } => json!({ "p": p.to_string(), "q": q.to_string() }),
            BetaKind::Root { coeffs, lo, hi } => json!({
                "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "interval": [lo.to_string(), hi.to_string()],
            }),
        };
        let translations: Vec<Value> = self
            .translations
            .iter()
            .map(|t| match t {
                TranslationSpec::Value(s) => json!({ "value": s }),
                TranslationSpec::Digits(d) => json!({ "digits": d }),
            })
            .collect();
        let mut options = Map::new();
        let o = &self.options;
        if let Some(d) = o.search_degree {
            options.insert("search_degree".into(), json!(d));
        }
        if let Some(c) = o.cap {
            options.insert("cap".into(), json!(c));
        }
        if let Some(a) = o.assert_in_bn {
            options.insert("assert_in_BN".into(), json!(a));
        }
        if let Some(d) = o.depth {
            options.insert("depth".into(), json!(d));
        }
        if let Some(t) = o.tol {
            options.insert("tol".into(), json!(t));
        }
        json!({
            "schema": PROBLEM_SCHEMA,
            "N": self.beta.n,
            "beta": beta,
            "translations": translations,
            "options": options,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("problem serializes")
    }
}

fn field(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Field {
        path: if path.is_empty() { "<root>".into() } else { path.into() },
        message: msg.into(),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| field(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| field(path, "expected an array"))
}

fn require<'a>(m: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, CliError> {
    m.get(key).ok_or_else(|| field(&join(path, key), "missing"))
}

fn known_keys(m: &Map<String, Value>, path: &str, keys: &[&str]) -> Result<(), CliError> {
    match m.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(field(&join(path, k), format!("unknown field, expected one of {keys:?}"))),
        None => Ok(()),
    }
}

fn uint(v: &Value, path: &str) -> Result<u64, CliError> {
    v.as_u64().ok_or_else(|| field(path, "expected a nonnegative integer"))
}

/// Integers may be JSON numbers or decimal strings.
fn integer(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| field(path, format!("`{s}` is not an integer"))),
        _ => Err(field(path, "expected an integer or integer string")),
    }
}

fn rational(v: &Value, path: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| field(path, format!("`{s}` is not a rational \"p/q\"")))
        }
        Value::Number(_) => integer(v, path)
            .map(Rational::from_integer)
            .map_err(|_| field(path, "non-integer numbers must be given as \"p/q\" strings")),
        _ => Err(field(path, "expected a rational string")),
    }
}

fn parse_beta(v: &Value, n: u32) -> Result<BetaSpec, CliError> {
    let m = object(v, "beta")?;
    if m.contains_key("p") || m.contains_key("q") {
        known_keys(m, "beta", &["p", "q"])?;
        let p = integer(require(m, "beta", "p")?, "beta.p")?;
        let q = integer(require(m, "beta", "q")?, "beta.q")?;
        return Ok(BetaSpec {
            kind: BetaKind::Rational { p, q },
            n,
        });
    }
    if m.contains_key("coeffs") || m.contains_key("interval") {
        known_keys(m, "beta", &["coeffs", "interval"])?;
        let coeffs = array(require(m, "beta", "coeffs")?, "beta.coeffs")?
            .iter()
            .enumerate()
            .map(|(i, c)| integer(c, &format!("beta.coeffs[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let iv = array(require(m, "beta", "interval")?, "beta.interval")?;
        if iv.len() != 2 {
            return Err(field("beta.interval", "expected [lo, hi]"));
        }
        let lo = rational(&iv[0], "beta.interval[0]")?;
        let hi = rational(&iv[1], "beta.interval[1]")?;
        return Ok(BetaSpec {
            kind: BetaKind::Root { coeffs, lo, hi },
            n,
        });
    }
    Err(field("beta", "expected {\"p\", \"q\"} or {\"coeffs\", \"interval\"}"))
}

fn parse_translation(v: &Value, path: &str) -> Result<TranslationSpec, CliError> {
    let m = object(v, path)?;
    known_keys(m, path, &["value", "digits"])?;
    match (m.get("value"), m.get("digits")) {
        (Some(Value::String(s)), None) => Ok(TranslationSpec::Value(s.clone())),
        (Some(Value::Number(_)), None) => Ok(TranslationSpec::Value(
            integer(&m["value"], &join(path, "value"))?.to_string(),
        )),
        (Some(_), None) => Err(field(&join(path, "value"), "expected a string")),
        (None, Some(d)) => {
            let p = join(path, "digits");
            let digits = array(d, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_u64()
                        .and_then(|x| u8::try_from(x).ok())
                        .ok_or_else(|| field(&format!("{p}[{i}]"), "expected a digit"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TranslationSpec::Digits(digits))
        }
        _ => Err(field(path, "expected exactly one of `value` or `digits`")),
    }
}

fn parse_options(v: &Value) -> Result<ProblemOptions, CliError> {
    let m = object(v, "options")?;
    known_keys(m, "options", &["search_degree", "cap", "assert_in_BN", "depth", "tol"])?;
    let usize_opt = |key: &str| -> Result<Option<usize>, CliError> {
        m.get(key)
            .filter(|x| !x.is_null())
            .map(|x| uint(x, &join("options", key)).map(|u| u as usize))
            .transpose()
    };
    let assert_in_bn = match m.get("assert_in_BN") {
        None | Some(Value::Null) => None,
        Some(Value::Bool(b)) => Some(*b),
        Some(_) => return Err(field("options.assert_in_BN", "expected true, false or null")),
    };
    let tol = match m.get("tol") {
        None | Some(Value::Null) => None,
        Some(x) => Some(
            x.as_f64()
                .filter(|t| *t > 0.0)
                .ok_or_else(|| field("options.tol", "expected a positive number"))?,
        ),
    };
    Ok(ProblemOptions {
        search_degree: usize_opt("search_degree")?,
        cap: usize_opt("cap")?,
        assert_in_bn,
        depth: usize_opt("depth")?,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_problem() {
        let p = Problem::from_json_str(
            r#"{"N": 1, "beta": {"p": 1, "q": "4"}, "translations": [{"value": "3"}, {"digits": [1, 0]}]}"#,
        )
        .unwrap();
        assert_eq!(p.beta, BetaSpec::rational(1, 4, 1));
        assert_eq!(
            p.translations,
            vec![TranslationSpec::Value("3".into()), TranslationSpec::Digits(vec![1, 0])]
        );
        assert_eq!(Problem::from_value(&p.to_value()).unwrap(), p);
    }

    #[test]
    fn root_problem_round_trips() {
        let p = Problem::from_json_str(
            r#"{"N": 2, "beta": {"coeffs": [-1, 3, 2], "interval": ["0", "1/3"]},
                "translations": [{"value": "b^-2-1"}],
                "options": {"assert_in_BN": false, "depth": 6, "tol": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(p.options.assert_in_bn, Some(false));
        assert_eq!(p.options.depth, Some(6));
        assert_eq!(Problem::from_json_str(&p.to_json_string()).unwrap(), p);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = Problem::from_json_str(r#"{"N": 1, "beta": {"coeffs": [1], "interval": ["0", "x"]}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("beta.interval[1]"), "{e}");
        let e = Problem::from_json_str(r#"{"N": 1, "beta": {"p": 1, "q": 4}, "translations": [{"digit": [1]}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("translations[0].digit"), "{e}");
        let e = Problem::from_json_str("{\"N\": 1,\n \"beta\": }").unwrap_err();
        assert!(matches!(e, CliError::Json { line: 2, .. }), "{e}");
        let e = Problem::from_json_str(r#"{"beta": {"p": 1, "q": 4}}"#).unwrap_err();
        assert!(e.to_string().contains("N"), "{e}");
    }
}
