//! Versioned JSON documents for barcodes, zigzag modules and geometry.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::barcodes1d::{GradedBarcode, Interval};
use crate::cellular1d::{CriticalGrid, ZigzagModule};
use crate::error::{Error, Result};
use crate::foundations::{fmt_decimal, parse_rat, ExtRat, FieldElem, FieldId, Matrix};
use crate::gamma_geometry::HPolyhedron;

pub const SCHEMA: &str = "gamma-persist/1";

/// Digits used by the lossy `*_decimal` convenience fields.
pub const DECIMAL_DIGITS: usize = 6;

fn bad(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// Parses a document, rejecting any other schema tag.
pub fn read_doc<T: DeserializeOwned>(text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(bad)?;
    match v.get("schema") {
        Some(Value::String(s)) if s == SCHEMA => {}
        Some(other) => return Err(Error::Parse(format!("unsupported schema {other}"))),
        None => return Err(Error::Parse(format!("missing \"schema\":\"{SCHEMA}\""))),
    }
    serde_json::from_value(v).map_err(bad)
}

/// Serializes `body` with the schema tag added.
pub fn write_doc<T: Serialize>(body: &T) -> String {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    match serde_json::to_value(body).expect("serializable") {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("value".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BarJson {
    lower: String,
    upper: String,
    lower_closed: bool,
    upper_closed: bool,
    #[serde(default = "one")]
    mult: usize,
    #[serde(default)]
    degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower_decimal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper_decimal: Option<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BarcodeJson {
    bars: Vec<BarJson>,
}

fn decimal(e: &ExtRat) -> String {
    match e {
        ExtRat::Finite(r) => fmt_decimal(r, DECIMAL_DIGITS),
        other => other.to_string(),
    }
}

pub fn barcode_to_value(b: &GradedBarcode, with_decimal: bool) -> Value {
    let bars = b
        .triples()
        .into_iter()
        .map(|(degree, i, mult)| BarJson {
            lower: i.lower().to_string(),
            upper: i.upper().to_string(),
            lower_closed: i.lower_closed(),
            upper_closed: i.upper_closed(),
            mult,
            degree,
            lower_decimal: with_decimal.then(|| decimal(i.lower())),
            upper_decimal: with_decimal.then(|| decimal(i.upper())),
        })
        .collect();
    serde_json::to_value(BarcodeJson { bars }).expect("serializable")
}

pub fn barcode_to_json(b: &GradedBarcode, with_decimal: bool) -> String {
    write_doc(&barcode_to_value(b, with_decimal))
}

pub fn barcode_from_json(text: &str) -> Result<GradedBarcode> {
    let doc: BarcodeJson = read_doc(text)?;
    let mut triples = Vec::new();
    for b in doc.bars {
        let i = Interval::new(ExtRat::parse(&b.lower)?, ExtRat::parse(&b.upper)?, b.lower_closed, b.upper_closed)?;
        triples.push((b.degree, i, b.mult));
    }
    Ok(GradedBarcode::from_triples(triples))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MapJson {
    left: Vec<String>,
    right: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModuleJson {
    #[serde(default)]
    degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<FieldId>,
    grid: Vec<String>,
    dims: Vec<usize>,
    maps: Vec<MapJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ZigzagJson {
    Many { modules: Vec<ModuleJson> },
    One(ModuleJson),
}

fn matrix_from(field: FieldId, rows: usize, cols: usize, entries: &[String]) -> Result<Matrix> {
    let data = entries.iter().map(|s| field.from_rat(&parse_rat(s)?)).collect::<Result<Vec<FieldElem>>>()?;
    Matrix::from_entries(field, rows, cols, data)
}

fn module_from(m: ModuleJson, default_field: FieldId) -> Result<(i32, ZigzagModule)> {
    let field = m.field.unwrap_or(default_field);
    let grid = CriticalGrid::new(m.grid.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?)?;
    if m.dims.len() != grid.num_cells() || m.maps.len() != grid.num_points() {
        return Err(Error::Shape("dims and maps do not match the grid".into()));
    }
    let maps = m
        .maps
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (l, c, r) = (m.dims[2 * i], m.dims[2 * i + 1], m.dims[2 * i + 2]);
            Ok((matrix_from(field, l, c, &p.left)?, matrix_from(field, r, c, &p.right)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((m.degree, ZigzagModule::new(field, grid, m.dims.clone(), maps)?))
}

/// Reads one module or a `"modules"` list keyed by degree; `default_field` applies when `"field"` is absent.
pub fn zigzag_from_json(text: &str, default_field: FieldId) -> Result<BTreeMap<i32, ZigzagModule>> {
    let mods = match read_doc::<ZigzagJson>(text)? {
        ZigzagJson::Many { modules } => modules,
        ZigzagJson::One(m) => vec![m],
    };
    let mut out = BTreeMap::new();
    for m in mods {
        let (d, z) = module_from(m, default_field)?;
        if out.insert(d, z).is_some() {
            return Err(Error::Parse(format!("degree {d} appears twice")));
        }
    }
    Ok(out)
}

fn entries(m: &Matrix) -> Vec<String> {
    m.entries().iter().map(ToString::to_string).collect()
}

pub fn zigzag_to_json(mods: &BTreeMap<i32, ZigzagModule>) -> String {
    let modules: Vec<ModuleJson> = mods
        .iter()
        .map(|(&degree, z)| ModuleJson {
            degree,
            field: Some(z.field()),
            grid: z.grid().values().iter().map(ToString::to_string).collect(),
            dims: z.dims().to_vec(),
            maps: z.maps().iter().map(|(l, r)| MapJson { left: entries(l), right: entries(r) }).collect(),
        })
        .collect();
    write_doc(&json!({ "modules": modules }))
}

pub fn strata_to_json(strata: &[HPolyhedron], extra: Option<Value>) -> String {
    let list: Vec<Value> = strata
        .iter()
        .map(|p| {
            let mut v = serde_json::to_value(p).expect("serializable");
            v.as_object_mut().expect("object").insert("role".into(), json!("stratum"));
            v
        })
        .collect();
    let mut body = json!({ "strata": list });
    if let Some(Value::Object(e)) = extra {
        body.as_object_mut().expect("object").extend(e);
    }
    write_doc(&body)
}

pub fn strata_from_json(text: &str) -> Result<Vec<HPolyhedron>> {
    #[derive(Deserialize)]
    struct Doc {
        strata: Vec<HPolyhedron>,
    }
    Ok(read_doc::<Doc>(text)?.strata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcodes1d::tests::arb_interval;
    use crate::cellular1d::from_barcode;
    use crate::foundations::rat_int;
    use proptest::prelude::*;

    #[test]
    fn barcode_shape() {
        let b = GradedBarcode::single(Interval::closed_open(&rat_int(0), &rat_int(2)).unwrap(), 1);
        let v: Value = serde_json::from_str(&barcode_to_json(&b, false)).unwrap();
        assert_eq!(
            v,
            json!({"schema": SCHEMA, "bars": [{"lower":"0","upper":"2","lower_closed":true,"upper_closed":false,"mult":1,"degree":1}]})
        );
        let d: Value = serde_json::from_str(&barcode_to_json(&b, true)).unwrap();
        assert_eq!(d["bars"][0]["upper_decimal"], json!("2.000000"));
        assert_eq!(barcode_from_json(&barcode_to_json(&b, true)).unwrap(), b);
    }

    #[test]
    fn schema_enforced() {
        assert!(barcode_from_json(r#"{"bars":[]}"#).is_err());
        assert!(barcode_from_json(r#"{"schema":"gamma-persist/0","bars":[]}"#).is_err());
        assert!(barcode_from_json(r#"{"schema":"gamma-persist/1","bars":[]}"#).unwrap().is_zero());
        let e = barcode_from_json(r#"{"schema":"gamma-persist/1","bars":[{"lower":"2","upper":"1","lower_closed":true,"upper_closed":true}]}"#);
        assert!(e.is_err());
    }

    #[test]
    fn single_module_defaults() {
        let text = r#"{"schema":"gamma-persist/1","grid":["0"],"dims":[0,1,1],"maps":[{"left":[],"right":["1"]}]}"#;
        let m = zigzag_from_json(text, FieldId::Q).unwrap();
        assert_eq!(m[&0].field(), FieldId::Q);
        assert_eq!(m[&0].dims(), &[0, 1, 1]);
        let bad = r#"{"schema":"gamma-persist/1","grid":["0"],"dims":[0,1,1],"maps":[{"left":[],"right":["1","0"]}]}"#;
        assert!(zigzag_from_json(bad, FieldId::Q).is_err());
    }

    proptest! {
        #[test]
        fn round_trips(bars in prop::collection::vec((arb_interval(), -1i32..2, 1usize..3), 0..6), q in any::<bool>()) {
            let b = GradedBarcode::from_triples(bars.into_iter().map(|(i, d, m)| (d, i, m)));
            prop_assert_eq!(barcode_from_json(&barcode_to_json(&b, false)).unwrap(), b.clone());
            let field = if q { FieldId::Q } else { FieldId::F2 };
            let mods = from_barcode(field, &b).unwrap();
            prop_assert_eq!(zigzag_from_json(&zigzag_to_json(&mods), FieldId::F2).unwrap(), mods);
        }
    }
}
