//! JSON lattice files and report encoding.
//!
//! Lattice file: `{"case", "residue_degree", "param", "precision"}` plus exactly one of
//! `"gram"` (a square matrix) or `"jordan_blocks"` (a list of `{"i", "gram"}` placed block
//! diagonally). A B-element is an integer, a decimal string, or `{"a0": [..], "a1": [..]}`
//! holding the coefficients of a0 + a1·π over the Galois ring basis.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::HermitianLattice;
use crate::ring::{AElem, BElem, Case, Matrix, PiVal, RingContext};

pub const SCHEMA: u64 = 1;

/// Serde adapters writing big numbers as decimal strings.
pub mod decimal {
    pub mod biguint {
        use num_bigint::BigUint;
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&x.to_str_radix(10))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
            let s = String::deserialize(d)?;
            s.parse().map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
        }
    }

    /// "p/q" in lowest terms, or "p" when q = 1.
    pub mod bigrational {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&x.to_string())
        }

        pub fn parse(s: &str) -> Option<BigRational> {
            match s.split_once('/') {
                Some((p, q)) => {
                    let q: BigInt = q.trim().parse().ok()?;
                    if q == BigInt::from(0) {
                        return None;
                    }
                    Some(BigRational::new(p.trim().parse().ok()?, q))
                }
                None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            let s = String::deserialize(d)?;
            parse(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
        }
    }

    pub mod bigrational_vec {
        use num_rational::BigRational;
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| super::bigrational::parse(s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}"))))
                .collect()
        }
    }

    pub mod opt_bigrational {
        use num_rational::BigRational;
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::bigrational::parse(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}"))))
                .transpose()
        }
    }

    pub mod biguint_vec {
        use num_bigint::BigUint;
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_str_radix(10))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}"))))
                .collect()
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// An integer given as a JSON number or decimal string, reduced mod 2^64.
fn parse_int(v: &Value, what: &str) -> Result<u64> {
    let n: BigInt = match v {
        Value::Number(x) => x
            .as_i64()
            .map(BigInt::from)
            .or_else(|| x.as_u64().map(BigInt::from))
            .ok_or_else(|| parse_err(format!("{what}: {x} is not an integer")))?,
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("{what}: {s:?} is not an integer")))?,
        other => return Err(parse_err(format!("{what}: expected an integer, got {other}"))),
    };
    let m = BigInt::from(1u8) << 64;
    let r: BigInt = ((n % &m) + &m) % &m;
    Ok(r.to_u64().expect("reduced below 2^64"))
}

fn parse_a(ctx: &RingContext, v: &Value, what: &str) -> Result<AElem> {
    let r = ctx.residue_degree();
    let coeffs: Vec<u64> = match v {
        Value::Array(xs) => {
            if xs.len() > r {
                return Err(parse_err(format!("{what}: {} coefficients for residue degree {r}", xs.len())));
            }
            xs.iter().map(|x| parse_int(x, what)).collect::<Result<_>>()?
        }
        other => vec![parse_int(other, what)?],
    };
    Ok(ctx.galois().from_coeffs(&coeffs))
}

pub fn parse_belem(ctx: &RingContext, v: &Value, what: &str) -> Result<BElem> {
    match v {
        Value::Object(m) => {
            for key in m.keys() {
                if key != "a0" && key != "a1" {
                    return Err(parse_err(format!("{what}: unknown key {key:?}")));
                }
            }
            let zero = Value::Array(Vec::new());
            Ok(BElem {
                a0: parse_a(ctx, m.get("a0").unwrap_or(&zero), what)?,
                a1: parse_a(ctx, m.get("a1").unwrap_or(&zero), what)?,
            })
        }
        other => Ok(BElem { a0: parse_a(ctx, other, what)?, a1: ctx.galois().zero() }),
    }
}

pub fn belem_to_json(ctx: &RingContext, x: &BElem) -> Value {
    let g = ctx.galois();
    let enc = |a: &AElem| Value::Array(g.coeffs(a).iter().map(|c| Value::String(c.to_string())).collect());
    json!({ "a0": enc(&x.a0), "a1": enc(&x.a1) })
}

pub fn matrix_to_json(ctx: &RingContext, m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| belem_to_json(ctx, x)).collect())).collect())
}

fn parse_matrix(ctx: &RingContext, v: &Value, what: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| parse_err(format!("{what}: expected a list of rows")))?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("{what}: row {i} is not a list")))?;
        if row.len() != n {
            return Err(parse_err(format!("{what}: row {i} has {} entries, expected {n}", row.len())));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| parse_belem(ctx, x, &format!("{what}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Matrix::from_rows(out)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

/// Parse a lattice file's contents. `precision_override` replaces the file's precision.
pub fn parse_lattice(text: &str, precision_override: Option<u32>) -> Result<HermitianLattice> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| parse_err("lattice file must be a JSON object"))?;
    let case = Case::from_number(parse_int(field(obj, "case")?, "case")?)
        .ok_or_else(|| parse_err("case must be 1 or 2"))?;
    let r = parse_int(field(obj, "residue_degree")?, "residue_degree")? as usize;
    let k = match precision_override {
        Some(k) => k,
        None => u32::try_from(parse_int(field(obj, "precision")?, "precision")?)
            .map_err(|_| parse_err("precision out of range"))?,
    };
    let param: Vec<i64> = match obj.get("param") {
        None => vec![1],
        Some(Value::Array(xs)) => xs.iter().map(|x| parse_int(x, "param").map(|c| c as i64)).collect::<Result<_>>()?,
        Some(other) => vec![parse_int(other, "param")? as i64],
    };
    let ring = Arc::new(RingContext::new(case, r, &param, k)?);
    let gram = match (obj.get("gram"), obj.get("jordan_blocks")) {
        (Some(g), None) => parse_matrix(&ring, g, "gram")?,
        (None, Some(b)) => parse_blocks(&ring, b)?,
        _ => return Err(parse_err("exactly one of \"gram\" and \"jordan_blocks\" must be present")),
    };
    HermitianLattice::new(ring, gram)
}

fn parse_blocks(ring: &Arc<RingContext>, v: &Value) -> Result<Matrix> {
    let blocks = v.as_array().ok_or_else(|| parse_err("jordan_blocks must be a list"))?;
    let mut acc = Matrix::zeros(0, 0);
    for (t, b) in blocks.iter().enumerate() {
        let obj = b.as_object().ok_or_else(|| parse_err(format!("jordan_blocks[{t}] must be an object")))?;
        let i = parse_int(field(obj, "i")?, "i")? as i64;
        let g = parse_matrix(ring, field(obj, "gram")?, &format!("jordan_blocks[{t}].gram"))?;
        let l = HermitianLattice::new(ring.clone(), g.clone())?;
        let modular = l.scale_exp() == PiVal::Finite(i as u32)
            && l.det_val() == PiVal::Finite(i as u32 * l.rank() as u32);
        if i < 0 || !modular {
            return Err(parse_err(format!("jordan_blocks[{t}] is not π^{i}-modular")));
        }
        acc = acc.direct_sum(&g);
    }
    Ok(acc)
}

pub fn read_lattice(path: &Path, precision_override: Option<u32>) -> Result<HermitianLattice> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    parse_lattice(&text, precision_override)
}

/// The lattice-file form of `l` (always with an explicit Gram matrix).
pub fn lattice_to_json(l: &HermitianLattice) -> Value {
    let ctx = l.ring();
    let g = ctx.galois();
    let param: Vec<Value> = g.coeffs(ctx.param()).iter().map(|c| Value::String(c.to_string())).collect();
    json!({
        "case": ctx.case().number(),
        "residue_degree": ctx.residue_degree(),
        "param": param,
        "precision": ctx.precision(),
        "gram": matrix_to_json(ctx, l.gram()),
    })
}

/// `value` as a JSON object with the schema version added. Keys come out sorted.
pub fn with_schema<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), Value::from(SCHEMA));
    }
    v
}

/// Drop the schema tag before deserializing a report.
pub fn strip_schema(mut v: Value) -> Result<Value> {
    match &mut v {
        Value::Object(m) => match m.remove("schema") {
            Some(s) if s.as_u64() == Some(SCHEMA) => Ok(v),
            Some(s) => Err(parse_err(format!("unsupported schema {s}"))),
            None => Err(parse_err("missing schema")),
        },
        _ => Err(parse_err("report must be a JSON object")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{local_density, DensityReport};

    const H0: &str = r#"{"case":1,"residue_degree":1,"param":[1],"precision":16,"gram":[[0,1],[1,0]]}"#;

    #[test]
    fn parses_plain_and_structured_entries() {
        let l = parse_lattice(H0, None).unwrap();
        assert_eq!(l.rank(), 2);
        let text = r#"{"case":2,"residue_degree":2,"param":["1"],"precision":12,
            "gram":[[{"a0":["4","0"]},{"a1":["1"]}],[{"a1":["-1"]},2]]}"#;
        let l = parse_lattice(text, None).unwrap();
        let again = parse_lattice(&lattice_to_json(&l).to_string(), None).unwrap();
        assert_eq!(l, again);
    }

    #[test]
    fn rejects_non_hermitian_and_ambiguous_files() {
        let bad = r#"{"case":1,"residue_degree":1,"param":[1],"precision":16,"gram":[[0,1],[2,0]]}"#;
        assert!(matches!(parse_lattice(bad, None), Err(Error::NotHermitian { row: 0, col: 1 })));
        let both = r#"{"case":1,"residue_degree":1,"precision":16,"gram":[[1]],"jordan_blocks":[]}"#;
        assert!(matches!(parse_lattice(both, None), Err(Error::Parse(_))));
    }

    #[test]
    fn jordan_block_shortcut() {
        let text = r#"{"case":1,"residue_degree":1,"precision":16,
            "jordan_blocks":[{"i":0,"gram":[[1]]},{"i":2,"gram":[[2]]}]}"#;
        assert_eq!(parse_lattice(text, None).unwrap().rank(), 2);
        let wrong = r#"{"case":1,"residue_degree":1,"precision":16,"jordan_blocks":[{"i":1,"gram":[[1]]}]}"#;
        assert!(parse_lattice(wrong, None).is_err());
    }

    #[test]
    fn report_round_trips() {
        let rep = local_density(&parse_lattice(H0, None).unwrap()).unwrap();
        let v = with_schema(&rep);
        let text = serde_json::to_string(&v).unwrap();
        let back: DensityReport = serde_json::from_value(strip_schema(serde_json::from_str(&text).unwrap()).unwrap()).unwrap();
        assert_eq!(back, rep);
    }
}
