//! JSON interchange: code files, witness tables, point lists and certificates.
//!
//! Rationals inside polynomials are `["num", "den"]` pairs of decimal
//! strings; elsewhere they are canonical `"num/den"` strings.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::algebra::{parse_rat, Poly, Rat, Real};
use crate::code::{bound_tol, BVCode};
use crate::dual::{GadgetProvenance, TaggedCode};
use crate::error::{Error, Result};
use crate::mollify::MollifyCertificate;
use crate::selection::{Candidate, HellyCertificate, SelectionCertificate};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

pub fn rat_pair(r: &Rat) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

pub fn parse_rat_pair(v: &Value) -> Result<Rat> {
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(format!("expected [num, den], got {v}")))?;
    let int = |x: &Value| -> Result<BigInt> {
        match x {
            Value::String(s) => s.trim().parse().map_err(|_| bad(format!("not an integer: {s:?}"))),
            Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
            _ => Err(bad(format!("not an integer: {x}"))),
        }
    };
    let (n, d) = (int(&a[0])?, int(&a[1])?);
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// `"num/den"`, or `"num"` for integers.
pub fn rat_str(r: &Rat) -> Value {
    Value::String(r.to_string())
}

/// A rational given as `"a/b"`, a decimal string, an integer, or a `[num, den]` pair.
pub fn parse_rat_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| bad(format!("not a rational: {s:?}"))),
        Value::Number(n) => parse_rat(&n.to_string()).ok_or_else(|| bad(format!("not a rational: {n}"))),
        Value::Array(_) => parse_rat_pair(v),
        _ => Err(bad(format!("not a rational: {v}"))),
    }
}

/// Exact value where rational, plus a certified enclosure.
pub fn real_value(x: &Real) -> Value {
    let (lo, hi) = x.enclose(&bound_tol());
    let mut m = Map::new();
    if let Some(r) = x.to_rat() {
        m.insert("exact".into(), rat_str(r));
    }
    m.insert("lo".into(), rat_str(&lo));
    m.insert("hi".into(), rat_str(&hi));
    Value::Object(m)
}

pub fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rat_pair).collect())
}

pub fn parse_poly(v: &Value) -> Result<Poly> {
    let cs = v.as_array().ok_or_else(|| bad("polynomial must be an array of coefficients"))?;
    Ok(Poly::from_coeffs(cs.iter().map(parse_rat_pair).collect::<Result<_>>()?))
}

/// An unvalidated code document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub polys: Vec<Poly>,
    pub v: Rat,
    pub provenance: Option<GadgetProvenance>,
}

impl CodeFile {
    pub fn from_code(code: &BVCode) -> Self {
        CodeFile { polys: code.prefix().to_vec(), v: code.v().clone(), provenance: None }
    }

    pub fn from_tagged(t: &TaggedCode) -> Self {
        CodeFile { provenance: t.provenance.clone(), ..CodeFile::from_code(&t.code) }
    }

    pub fn depth(&self) -> usize {
        self.polys.len().saturating_sub(1)
    }

    /// Full validation of the rate and variation invariants.
    pub fn to_code(&self) -> Result<BVCode> {
        BVCode::new(self.polys.clone(), self.v.clone())
    }

    /// Validated code with its provenance; a present provenance must replay.
    pub fn to_tagged(&self) -> Result<TaggedCode> {
        let code = self.to_code()?;
        let truncation = match &self.provenance {
            Some(p) => {
                let rebuilt = crate::dual::replay(p)?;
                if rebuilt.code.prefix() != code.prefix() || rebuilt.code.v() != code.v() {
                    return Err(Error::NotAGadgetCode("provenance does not reproduce the code".into()));
                }
                rebuilt.truncation
            }
            None => Rat::one(),
        };
        Ok(TaggedCode { code, provenance: self.provenance.clone(), truncation })
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("polys".into(), Value::Array(self.polys.iter().map(poly_json).collect()));
        m.insert("v".into(), rat_pair(&self.v));
        m.insert("depth".into(), json!(self.depth()));
        if let Some(p) = &self.provenance {
            m.insert("provenance".into(), provenance_json(p));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let polys: Vec<Poly> = v
            .get("polys")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"polys\""))?
            .iter()
            .map(parse_poly)
            .collect::<Result<_>>()?;
        let rate = parse_rat_pair(v.get("v").ok_or_else(|| bad("missing \"v\""))?)?;
        if let Some(d) = v.get("depth") {
            let d = d.as_u64().ok_or_else(|| bad("\"depth\" must be a nonnegative integer"))?;
            if polys.is_empty() || d as usize != polys.len() - 1 {
                return Err(bad(format!("\"depth\" is {d} but {} polynomials are stored", polys.len())));
            }
        }
        let provenance = v.get("provenance").map(parse_provenance).transpose()?;
        Ok(CodeFile { polys, v: rate, provenance })
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values always serialize")
    }

    pub fn parse(s: &str) -> Result<Self> {
        CodeFile::from_json(&serde_json::from_str(s).map_err(|e| bad(e.to_string()))?)
    }
}

pub fn witness_table_json(ws: &[(usize, Option<usize>)]) -> Value {
    Value::Array(ws.iter().map(|(n, w)| json!({ "n": n, "witness_at": w })).collect())
}

/// `[{"n": …, "witness_at": i' or null}, …]`.
pub fn parse_witness_table(v: &Value) -> Result<Vec<(usize, Option<usize>)>> {
    let rows = v.as_array().ok_or_else(|| bad("witness table must be an array"))?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let n = r.get("n").and_then(Value::as_u64).ok_or_else(|| bad(format!("row without \"n\": {r}")))?;
        let w = match r.get("witness_at") {
            None | Some(Value::Null) => None,
            Some(x) => Some(x.as_u64().ok_or_else(|| bad(format!("bad \"witness_at\": {x}")))? as usize),
        };
        if out.iter().any(|&(m, _)| m == n as usize) {
            return Err(bad(format!("duplicate row for n = {n}")));
        }
        out.push((n as usize, w));
    }
    Ok(out)
}

fn provenance_json(p: &GadgetProvenance) -> Value {
    let ws: Vec<(usize, Option<usize>)> = p.witnesses.iter().copied().enumerate().collect();
    json!({ "kind": "cantor_sum", "terms": p.terms, "depth": p.depth, "witnesses": witness_table_json(&ws) })
}

fn parse_provenance(v: &Value) -> Result<GadgetProvenance> {
    if v.get("kind").and_then(Value::as_str) != Some("cantor_sum") {
        return Err(bad("unknown provenance kind"));
    }
    let field = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(format!("provenance without \"{k}\"")));
    let (terms, depth) = (field("terms")?, field("depth")?);
    let table = parse_witness_table(v.get("witnesses").ok_or_else(|| bad("provenance without \"witnesses\""))?)?;
    let mut witnesses = vec![None; terms];
    for (n, w) in table {
        *witnesses.get_mut(n).ok_or_else(|| bad(format!("witness row n = {n} beyond {terms} terms")))? = w;
    }
    Ok(GadgetProvenance { witnesses, terms, depth })
}

/// A list of rationals, each in any form accepted by [`parse_rat_value`].
pub fn parse_points(v: &Value) -> Result<Vec<Rat>> {
    v.as_array().ok_or_else(|| bad("points must be an array"))?.iter().map(parse_rat_value).collect()
}

pub fn points_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_str).collect())
}

pub fn selection_certificate_json(c: &SelectionCertificate) -> Value {
    let candidate = match &c.candidate {
        Candidate::Point(x) => rat_str(x),
        Candidate::Product(xs) => points_json(xs),
    };
    let levels: Vec<Value> = c
        .levels
        .iter()
        .map(|a| json!({ "n": a.n, "index": a.index, "bound": rat_str(&a.bound), "value": rat_str(&a.value) }))
        .collect();
    json!({
        "g": c.g,
        "candidate": candidate,
        "levels": levels,
        "exhausted_at": c.exhausted_at,
        "slack": rat_str(&c.slack),
        "survivors": c.survivors,
    })
}

pub fn helly_certificate_json(c: &HellyCertificate, shift: usize) -> Value {
    let pairs: Vec<Value> = c
        .pairs
        .iter()
        .map(|p| json!({ "n": p.n, "m": p.m, "k": p.k, "bound": rat_str(&p.bound), "value": real_value(&p.value) }))
        .collect();
    json!({
        "g": c.g,
        "depth": c.depth,
        "v": rat_str(&c.v),
        "slack": rat_str(&c.slack),
        "shift": shift,
        "pairs": pairs,
        "exhausted_at": c.exhausted_at,
    })
}

pub fn mollify_certificate_json(c: &MollifyCertificate) -> Value {
    json!({
        "eps": rat_str(&c.eps),
        "m": c.m,
        "v": rat_str(&c.v),
        "bound": rat_str(&c.bound),
        "exact_error": real_value(&c.exact_error),
        "instance_error": real_value(&c.instance_error),
        "projection_error": real_value(&c.projection_error),
        "new_v": rat_str(&c.new_v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::code::bvcode_from_poly_depth;
    use crate::dual::{cantor_sum, Pi01Gadget};

    #[test]
    fn code_round_trip() {
        let f = bvcode_from_poly_depth(Poly::from_coeffs(vec![rat(-1, 3), rat(7, 2), rat(-22, 7)]), 5);
        let file = CodeFile::from_code(&f);
        let back = CodeFile::parse(&file.to_string_pretty()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_code().unwrap(), f);
        let doc = file.to_json();
        assert_eq!(doc["depth"], json!(5));
        assert_eq!(doc["polys"][0][0], json!(["-1", "3"]));
    }

    #[test]
    fn provenance_round_trip() {
        let g = Pi01Gadget::from_table(&[(0, None), (1, Some(1))]);
        let t = cantor_sum(&g, 2, 3).unwrap();
        let file = CodeFile::from_tagged(&t);
        let back = CodeFile::parse(&file.to_string_pretty()).unwrap();
        assert_eq!(back.provenance, t.provenance);
        assert!(back.to_tagged().is_ok());
        let mut forged = back.clone();
        forged.polys[3] = Poly::zero();
        assert!(forged.to_tagged().is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(CodeFile::parse("{\"polys\": [[[\"1\",\"0\"]]], \"v\": [\"0\",\"1\"]}").is_err());
        assert!(CodeFile::parse("{\"polys\": [[]], \"v\": [\"0\",\"1\"], \"depth\": 3}").is_err());
        assert!(CodeFile::parse("{\"v\": [\"0\",\"1\"]}").is_err());
    }

    #[test]
    fn points_and_tables() {
        let v: Value = serde_json::from_str(r#"["1/3", "0.25", 1, ["2", "6"]]"#).unwrap();
        assert_eq!(parse_points(&v).unwrap(), vec![rat(1, 3), rat(1, 4), int(1), rat(1, 3)]);
        let t: Value = serde_json::from_str(r#"[{"n": 0, "witness_at": null}, {"n": 1, "witness_at": 3}]"#).unwrap();
        assert_eq!(parse_witness_table(&t).unwrap(), vec![(0, None), (1, Some(3))]);
        let dup: Value = serde_json::from_str(r#"[{"n": 0}, {"n": 0}]"#).unwrap();
        assert!(parse_witness_table(&dup).is_err());
    }
}
