//! JSON file formats for sequences, arrays and correlation reports.
//!
//! ```text
//! sequence:    {"kind":"roots","r":3,"exponents":[0,0,0,...]}
//!              {"kind":"quaternion","values":[[w,x,y,z],...]}
//! array:       {"kind":"roots","r":2,"dims":[4,4,4,4],"data":[...]}
//!              {"kind":"quaternion","dims":[16,16],"data":[[w,x,y,z],...]}
//! correlation: {"kind":...,"dims":[...],"tol":...,"count":n,
//!               "entries":[{"shift":[...],"re":..,"im":..}]}   (quaternion: w,x,y,z)
//! ```
//!
//! Array data is flattened row-major with axis 0 = `j`. All entries are exact
//! integers. Readers go through `serde_json::Value` so errors can name the
//! offending field.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::{CorrelationValue, Quaternion};
use crate::construction::{ArrayData, PerfectArray};
use crate::correlation::{CorrelationResult, CorrelationValues, ZczReport};
use crate::error::{Error, Result};
use crate::sequences::{QuaternionSequence, RootSequence, Sequence};

fn bad(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("field `{field}`: {msg}"))
}

fn object(value: &Value) -> Result<&Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Format("expected a JSON object at top level".into()))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| bad(name, "missing"))
}

fn kind(obj: &Map<String, Value>) -> Result<&str> {
    let k = field(obj, "kind")?
        .as_str()
        .ok_or_else(|| bad("kind", "expected a string"))?;
    match k {
        "roots" | "quaternion" => Ok(k),
        other => Err(bad(
            "kind",
            format!("expected \"roots\" or \"quaternion\", found {other:?}"),
        )),
    }
}

fn uint(value: &Value, name: &str) -> Result<u64> {
    value.as_u64().ok_or_else(|| {
        bad(
            name,
            format!("expected a non-negative integer, found {value}"),
        )
    })
}

fn order(obj: &Map<String, Value>) -> Result<u32> {
    let r = uint(field(obj, "r")?, "r")?;
    u32::try_from(r).ok().filter(|&r| r > 0).ok_or_else(|| {
        bad(
            "r",
            format!("expected a positive 32-bit root order, found {r}"),
        )
    })
}

fn uint_list(value: &Value, name: &str) -> Result<Vec<u64>> {
    let items = value
        .as_array()
        .ok_or_else(|| bad(name, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| uint(v, &format!("{name}[{i}]")))
        .collect()
}

fn exponent_list(value: &Value, name: &str, order: u32) -> Result<Vec<u32>> {
    uint_list(value, name)?
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            if e < order as u64 {
                Ok(e as u32)
            } else {
                Err(bad(
                    &format!("{name}[{i}]"),
                    format!("exponent {e} is not below r = {order}"),
                ))
            }
        })
        .collect()
}

fn quaternion_list(value: &Value, name: &str) -> Result<Vec<Quaternion>> {
    let items = value
        .as_array()
        .ok_or_else(|| bad(name, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let at = format!("{name}[{i}]");
            let parts = v
                .as_array()
                .filter(|p| p.len() == 4)
                .ok_or_else(|| bad(&at, "expected [w, x, y, z]"))?;
            let mut c = [0i64; 4];
            for (slot, p) in c.iter_mut().zip(parts) {
                *slot = p
                    .as_i64()
                    .ok_or_else(|| bad(&at, format!("expected integer components, found {p}")))?;
            }
            let q = Quaternion::from(c);
            if !q.is_unit() {
                return Err(bad(&at, format!("{q} is not a unit quaternion")));
            }
            Ok(q)
        })
        .collect()
}

pub fn sequence_to_json(seq: &Sequence) -> String {
    #[derive(Serialize)]
    #[serde(tag = "kind", rename_all = "lowercase")]
    enum Out<'a> {
        Roots { r: u32, exponents: &'a [u32] },
        Quaternion { values: &'a [Quaternion] },
    }
    let out = match seq {
        Sequence::Roots(s) => Out::Roots {
            r: s.order(),
            exponents: s.exponents(),
        },
        Sequence::Quaternion(s) => Out::Quaternion { values: s.values() },
    };
    serde_json::to_string(&out).expect("sequence serialization is infallible")
}

pub fn sequence_from_json(text: &str) -> Result<Sequence> {
    let value: Value = serde_json::from_str(text)?;
    let obj = object(&value)?;
    match kind(obj)? {
        "roots" => {
            let r = order(obj)?;
            let exponents = exponent_list(field(obj, "exponents")?, "exponents", r)?;
            if exponents.is_empty() {
                return Err(bad("exponents", "sequence is empty"));
            }
            Ok(Sequence::Roots(RootSequence::new(r, exponents)?))
        }
        _ => {
            let values = quaternion_list(field(obj, "values")?, "values")?;
            if values.is_empty() {
                return Err(bad("values", "sequence is empty"));
            }
            Ok(Sequence::Quaternion(QuaternionSequence::new(values)?))
        }
    }
}

pub fn array_to_json(array: &PerfectArray) -> String {
    #[derive(Serialize)]
    #[serde(tag = "kind", rename_all = "lowercase")]
    enum Out<'a> {
        Roots {
            r: u32,
            dims: &'a [usize],
            data: &'a [u32],
        },
        Quaternion {
            dims: &'a [usize],
            data: &'a [Quaternion],
        },
    }
    let dims = array.dims();
    let out = match array.data() {
        ArrayData::Roots { order, exponents } => Out::Roots {
            r: *order,
            dims,
            data: exponents,
        },
        ArrayData::Quaternion(values) => Out::Quaternion { dims, data: values },
    };
    serde_json::to_string(&out).expect("array serialization is infallible")
}

pub fn array_from_json(text: &str) -> Result<PerfectArray> {
    let value: Value = serde_json::from_str(text)?;
    let obj = object(&value)?;
    let kind = kind(obj)?;
    let dims: Vec<usize> = uint_list(field(obj, "dims")?, "dims")?
        .into_iter()
        .map(|d| d as usize)
        .collect();
    if dims.is_empty() || dims.contains(&0) {
        return Err(bad(
            "dims",
            format!("expected positive axis lengths, found {dims:?}"),
        ));
    }
    let cells: usize = dims.iter().product();
    let data_value = field(obj, "data")?;
    let data = if kind == "roots" {
        let r = order(obj)?;
        ArrayData::Roots {
            order: r,
            exponents: exponent_list(data_value, "data", r)?,
        }
    } else {
        ArrayData::Quaternion(quaternion_list(data_value, "data")?)
    };
    let len = match &data {
        ArrayData::Roots { exponents, .. } => exponents.len(),
        ArrayData::Quaternion(v) => v.len(),
    };
    if len != cells {
        return Err(bad(
            "data",
            format!("dims {dims:?} need {cells} entries, found {len}"),
        ));
    }
    PerfectArray::new(dims, data)
}

fn value_fields(shift: &[usize], v: &CorrelationValue) -> Value {
    match v {
        CorrelationValue::Complex(c) => json!({ "shift": shift, "re": c.re, "im": c.im }),
        CorrelationValue::Quaternion(q) => {
            json!({ "shift": shift, "w": q.w, "x": q.x, "y": q.y, "z": q.z })
        }
    }
}

/// Sparse export: only the non-zero entries.
pub fn correlation_to_json(res: &CorrelationResult) -> String {
    let census = res.nonzero_census();
    let kind = match res.values {
        CorrelationValues::Complex(_) => "roots",
        CorrelationValues::Quaternion(_) => "quaternion",
    };
    let entries: Vec<Value> = census
        .entries
        .iter()
        .map(|(s, v)| value_fields(&s.0, v))
        .collect();
    let out = json!({
        "kind": kind,
        "dims": res.dims,
        "tol": res.tol,
        "absolute_tol": res.threshold.absolute,
        "relative_tol": res.threshold.relative,
        "count": census.count,
        "entries": entries,
    });
    serde_json::to_string_pretty(&out).expect("correlation serialization is infallible")
}

pub fn zcz_report_to_json(report: &ZczReport) -> String {
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| {
            json!({
                "k1": p.k1,
                "k2": p.k2,
                "count": p.nonzero_count,
                "peak": p.peak_magnitude,
                "entries": p.entries.iter().map(|(s, v)| value_fields(&s.0, v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let out = json!({
        "members": report.members,
        "cells": report.cells,
        "d_squared": report.d_squared,
        "ratio": report.ratio,
        "counts": report.counts(),
        "holds": report.holds(),
        "pairs": pairs,
    });
    serde_json::to_string_pretty(&out).expect("report serialization is infallible")
}

pub fn read_sequence(path: impl AsRef<Path>) -> Result<Sequence> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    sequence_from_json(&text).map_err(|e| with_path(e, path))
}

pub fn read_array(path: impl AsRef<Path>) -> Result<PerfectArray> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    array_from_json(&text).map_err(|e| with_path(e, path))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format!("{text}\n")).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    }
}
