//! JSON documents for linear combinations, and the plain-text expression syntax.

use serde_json::{json, Value};

use mzv_core::exactnum::{format_rational, parse_rational, Rational};
use mzv_core::words::{LinComb, MzvSymbol};
use mzv_core::{MzvError, Result};

/// Header fields of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Meta {
    pub modulus: u32,
    pub weight: u32,
    pub depth: usize,
}

impl Meta {
    /// Meta for a combination of symbols, falling back to `modulus` and `weight` when it is empty.
    pub fn of(c: &LinComb<MzvSymbol>, modulus: u32, weight: u32) -> Meta {
        Meta {
            modulus: c.keys().next().map_or(modulus, |z| z.modulus),
            weight: c.keys().next().map_or(weight, MzvSymbol::weight),
            depth: c.keys().map(MzvSymbol::depth).max().unwrap_or(0),
        }
    }

    fn to_json(self) -> Value {
        json!({"N": self.modulus, "weight": self.weight, "depth": self.depth})
    }
}

/// `{terms: [{symbol, coeff}], meta: {N, weight, depth}}` for any displayable terms.
pub fn terms_document<T: Ord + Clone + std::fmt::Display>(c: &LinComb<T>, meta: Meta) -> Value {
    let terms: Vec<Value> = c
        .iter()
        .map(|(t, v)| json!({"symbol": t.to_string(), "coeff": format_rational(v)}))
        .collect();
    json!({"terms": terms, "meta": meta.to_json()})
}

pub fn serialize(c: &LinComb<MzvSymbol>, meta: Meta) -> Value {
    terms_document(c, meta)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| MzvError::Malformed(format!("document has no {key:?} field")))
}

/// Inverse of [`serialize`].
pub fn parse(doc: &Value) -> Result<(LinComb<MzvSymbol>, Meta)> {
    let terms = field(doc, "terms")?
        .as_array()
        .ok_or_else(|| MzvError::Malformed("\"terms\" is not an array".into()))?;
    let mut out = LinComb::new();
    for t in terms {
        let symbol = field(t, "symbol")?
            .as_str()
            .ok_or_else(|| MzvError::Malformed("symbol is not a string".into()))?;
        let coeff = field(t, "coeff")?
            .as_str()
            .ok_or_else(|| MzvError::Malformed("coeff is not a string".into()))?;
        out.add_term(symbol.parse()?, parse_rational(coeff)?);
    }
    let meta = field(doc, "meta")?;
    let num = |k: &str| -> Result<u64> {
        field(meta, k)?
            .as_u64()
            .ok_or_else(|| MzvError::Malformed(format!("meta.{k} is not a count")))
    };
    let meta = Meta {
        modulus: num("N")? as u32,
        weight: num("weight")? as u32,
        depth: num("depth")? as usize,
    };
    Ok((out, meta))
}

/// Parses `(c)*symbol + (c)*symbol`, as printed by `LinComb`'s `Display`, or a bare symbol.
pub fn parse_expression(text: &str) -> Result<LinComb<MzvSymbol>> {
    let text = text.trim();
    if text == "0" {
        return Ok(LinComb::new());
    }
    let mut out = LinComb::new();
    for part in text.split(" + ") {
        let part = part.trim();
        let (coeff, symbol) = match part.strip_prefix('(') {
            Some(rest) => {
                let (c, s) = rest.split_once(")*").ok_or_else(|| {
                    MzvError::Malformed(format!("expected (c)*symbol in {part:?}"))
                })?;
                (parse_rational(c)?, s)
            }
            None => (Rational::from_integer(1.into()), part),
        };
        out.add_term(symbol.parse()?, coeff);
    }
    Ok(out)
}

/// Pretty JSON with a trailing newline; byte-stable for equal inputs.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}
