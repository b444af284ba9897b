//! JSON codecs for descriptors, morphisms, models, points, and polynomials.
//!
//! All rationals travel as canonical strings (`"p/q"`, `"p"`, or `"inf"`),
//! coefficients as their display form (`"t^2 - 1"`), so round-trips are
//! exact. Output maps are key-sorted, so identical inputs serialize to
//! identical bytes.

use polyskel::complex::{DescentData, StrictDualComplex};
use polyskel::error::{Error, Result};
use polyskel::field::Coeff;
use polyskel::geometry::RealizationPoint;
use polyskel::polysimplex::{ComponentMap, ExtendedPolySimplex, PSMorphism, PolySimplex};
use polyskel::rat::{format_rat, parse_rat, ExtRat, Rat};
use polyskel::skeleton::{DiscCoord, Monomial, SkeletalPoint, StandardPairModel, ValuedPolynomial};
use polyskel::strata::{
    standard_descriptor, CombinatorialChartData, ComponentTable, PairDescriptor, StratumKind,
    StratumRecord,
};
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

pub fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

pub fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(format!("{what} must be a JSON object")))
}

pub fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| bad(format!("missing field {key:?}")))
}

pub fn str_field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    field(m, key)?
        .as_str()
        .ok_or_else(|| bad(format!("field {key:?} must be a string")))
}

pub fn u32_field(m: &Map<String, Value>, key: &str) -> Result<u32> {
    field(m, key)?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| bad(format!("field {key:?} must be a small nonnegative integer")))
}

pub fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be a JSON array")))
}

pub fn u32_list(v: &Value, what: &str) -> Result<Vec<u32>> {
    arr(v, what)?
        .iter()
        .map(|e| {
            e.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| bad(format!("{what} entries must be small nonnegative integers")))
        })
        .collect()
}

pub fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    arr(v, what)?
        .iter()
        .map(|e| {
            e.as_str()
                .map(str::to_string)
                .ok_or_else(|| bad(format!("{what} entries must be strings")))
        })
        .collect()
}

pub fn ext_rat_to_string(v: &ExtRat) -> String {
    match v {
        ExtRat::Finite(q) => format_rat(q),
        ExtRat::Infinity => "inf".to_string(),
    }
}

pub fn ext_rat_from_str(s: &str) -> Result<ExtRat> {
    if s == "inf" {
        return Ok(ExtRat::Infinity);
    }
    parse_rat(s)
        .map(ExtRat::Finite)
        .ok_or_else(|| bad(format!("malformed rational {s:?}")))
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    parse_rat(s).ok_or_else(|| bad(format!("malformed rational {s:?}")))
}

pub fn coeff_from_str(s: &str) -> Result<Coeff> {
    Coeff::parse(s).ok_or_else(|| bad(format!("malformed coefficient {s:?}")))
}

pub fn shape_to_json(shape: &ExtendedPolySimplex) -> Value {
    json!({
        "n": shape.base().factors(),
        "r": shape.colors().iter().map(ext_rat_to_string).collect::<Vec<_>>(),
        "s": shape.s(),
    })
}

pub fn shape_from_json(v: &Value) -> Result<ExtendedPolySimplex> {
    let m = obj(v, "shape")?;
    let n = u32_list(field(m, "n")?, "n")?;
    let r = string_list(field(m, "r")?, "r")?
        .iter()
        .map(|s| ext_rat_from_str(s))
        .collect::<Result<Vec<_>>>()?;
    let s = u32_field(m, "s")?;
    ExtendedPolySimplex::new(PolySimplex::new(n)?, r, s)
}

pub fn morphism_to_json(f: &PSMorphism) -> Value {
    let cmaps: Vec<Value> = f
        .component_maps()
        .iter()
        .map(|c| match c {
            ComponentMap::Embed(t) => json!({ "embed": t }),
            ComponentMap::Collapse(v) => json!({ "collapse": v }),
        })
        .collect();
    json!({
        "source": shape_to_json(f.source()),
        "target": shape_to_json(f.target()),
        "f": f.factor_assignment(),
        "cmaps": cmaps,
        "g": f.orthant_map(),
    })
}

pub fn morphism_from_json(v: &Value) -> Result<PSMorphism> {
    let m = obj(v, "morphism")?;
    let source = shape_from_json(field(m, "source")?)?;
    let target = shape_from_json(field(m, "target")?)?;
    let f = arr(field(m, "f")?, "f")?
        .iter()
        .map(|e| {
            if e.is_null() {
                Ok(None)
            } else {
                e.as_u64()
                    .map(|n| Some(n as usize))
                    .ok_or_else(|| bad("factor assignment entries must be indices or null"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let cmaps = arr(field(m, "cmaps")?, "cmaps")?
        .iter()
        .map(|e| {
            let em = obj(e, "component map")?;
            if let Some(t) = em.get("embed") {
                Ok(ComponentMap::Embed(u32_list(t, "embed")?))
            } else if let Some(c) = em.get("collapse") {
                c.as_u64()
                    .and_then(|n| u32::try_from(n).ok())
                    .map(ComponentMap::Collapse)
                    .ok_or_else(|| bad("collapse vertex must be a small integer"))
            } else {
                Err(bad("component map must be an embed table or a collapse vertex"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let g = u32_list(field(m, "g")?, "g")?;
    PSMorphism::new(source, target, f, cmaps, g)
}

fn chart_to_json(chart: &CombinatorialChartData) -> Value {
    let alpha: Vec<Value> = chart
        .alpha()
        .iter()
        .map(|(tuple, label)| json!([tuple, label]))
        .collect();
    let gamma: Vec<Value> = chart
        .gamma()
        .iter()
        .map(|block| Value::Array(block.iter().map(|l| json!(l)).collect()))
        .collect();
    json!({
        "shape": shape_to_json(chart.shape()),
        "alpha": alpha,
        "gamma": gamma,
    })
}

fn chart_from_json(v: &Value) -> Result<CombinatorialChartData> {
    let m = obj(v, "chart")?;
    let shape = shape_from_json(field(m, "shape")?)?;
    let mut alpha = BTreeMap::new();
    for entry in arr(field(m, "alpha")?, "alpha")? {
        let pair = arr(entry, "alpha entry")?;
        if pair.len() != 2 {
            return Err(bad("alpha entries must be [tuple, label] pairs"));
        }
        let tuple = u32_list(&pair[0], "alpha tuple")?;
        let label = pair[1]
            .as_str()
            .ok_or_else(|| bad("alpha labels must be strings"))?;
        alpha.insert(tuple, label.to_string());
    }
    let gamma = arr(field(m, "gamma")?, "gamma")?
        .iter()
        .map(|b| Ok(string_list(b, "gamma block")?.into_iter().collect::<BTreeSet<_>>()))
        .collect::<Result<Vec<_>>>()?;
    CombinatorialChartData::new(shape, alpha, gamma)
}

fn stratum_to_json(st: &StratumRecord) -> Value {
    json!({
        "id": st.id,
        "kind": match st.kind { StratumKind::X => "x", StratumKind::H => "h" },
        "a_x": st.a_x.iter().collect::<Vec<_>>(),
        "a_h": st.a_h.iter().collect::<Vec<_>>(),
        "chart": chart_to_json(&st.chart),
    })
}

fn stratum_from_json(v: &Value) -> Result<StratumRecord> {
    let m = obj(v, "stratum")?;
    let kind = match str_field(m, "kind")? {
        "x" => StratumKind::X,
        "h" => StratumKind::H,
        other => return Err(bad(format!("unknown stratum kind {other:?}"))),
    };
    Ok(StratumRecord {
        id: str_field(m, "id")?.to_string(),
        kind,
        a_x: string_list(field(m, "a_x")?, "a_x")?.into_iter().collect(),
        a_h: string_list(field(m, "a_h")?, "a_h")?.into_iter().collect(),
        chart: chart_from_json(field(m, "chart")?)?,
    })
}

/// Serialize a descriptor as an `"abstract"` document (fully explicit: every
/// parse of the output rebuilds the same descriptor).
pub fn descriptor_to_json(desc: &PairDescriptor) -> Value {
    let comps = desc.components();
    let container: Map<String, Value> = comps
        .h_components()
        .iter()
        .map(|h| {
            (
                h.clone(),
                json!(comps.container(h).cloned().unwrap_or_default()),
            )
        })
        .collect();
    let mut order = Vec::new();
    for x in desc.stratum_ids() {
        for y in desc.stratum_ids() {
            if x != y && desc.leq(x, y).unwrap_or(false) {
                order.push(json!([x, y]));
            }
        }
    }
    json!({
        "kind": "abstract",
        "components": {
            "x": comps.x_components(),
            "h": comps.h_components(),
            "container": container,
        },
        "strata": desc.strata().iter().map(stratum_to_json).collect::<Vec<_>>(),
        "order": order,
    })
}

pub enum ParsedDescriptor {
    Pair(PairDescriptor),
    Descent {
        base: PairDescriptor,
        classes: Vec<Vec<String>>,
        witnesses: BTreeMap<(String, String), PSMorphism>,
    },
}

pub fn descriptor_from_json(value: &Value) -> Result<ParsedDescriptor> {
    let m = obj(value, "descriptor document")?;
    match str_field(m, "kind")? {
        "standard" => {
            let n = u32_list(field(m, "n")?, "n")?;
            let r = string_list(field(m, "r")?, "r")?
                .iter()
                .map(|s| rat_from_str(s))
                .collect::<Result<Vec<_>>>()?;
            let d = u32_field(m, "d")?;
            let s = u32_field(m, "s")?;
            Ok(ParsedDescriptor::Pair(standard_descriptor(&n, &r, d, s)?))
        }
        "abstract" => {
            let cm = obj(field(m, "components")?, "components")?;
            let x = string_list(field(cm, "x")?, "components.x")?;
            let h = string_list(field(cm, "h")?, "components.h")?;
            let container = obj(field(cm, "container")?, "container")?
                .iter()
                .map(|(k, v)| {
                    v.as_str()
                        .map(|s| (k.clone(), s.to_string()))
                        .ok_or_else(|| bad("container values must be component labels"))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            let components = ComponentTable::new(x, h, container)?;
            let strata = arr(field(m, "strata")?, "strata")?
                .iter()
                .map(stratum_from_json)
                .collect::<Result<Vec<_>>>()?;
            let order = arr(field(m, "order")?, "order")?
                .iter()
                .map(|p| {
                    let pair = string_list(p, "order pair")?;
                    if pair.len() != 2 {
                        return Err(bad("order entries must be [lower, upper] pairs"));
                    }
                    Ok((pair[0].clone(), pair[1].clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ParsedDescriptor::Pair(PairDescriptor::from_parts(
                components, strata, &order,
            )?))
        }
        "descent" => {
            let base = match descriptor_from_json(field(m, "base")?)? {
                ParsedDescriptor::Pair(d) => d,
                ParsedDescriptor::Descent { .. } => {
                    return Err(bad("descent documents cannot nest"))
                }
            };
            let classes = arr(field(m, "classes")?, "classes")?
                .iter()
                .map(|c| string_list(c, "class"))
                .collect::<Result<Vec<_>>>()?;
            let mut witnesses = BTreeMap::new();
            for w in arr(field(m, "witnesses")?, "witnesses")? {
                let wm = obj(w, "witness")?;
                witnesses.insert(
                    (
                        str_field(wm, "from")?.to_string(),
                        str_field(wm, "to")?.to_string(),
                    ),
                    morphism_from_json(field(wm, "morphism")?)?,
                );
            }
            Ok(ParsedDescriptor::Descent {
                base,
                classes,
                witnesses,
            })
        }
        other => Err(bad(format!("unknown descriptor kind {other:?}"))),
    }
}

pub fn descent_to_data(
    base: PairDescriptor,
    classes: Vec<Vec<String>>,
    witnesses: BTreeMap<(String, String), PSMorphism>,
) -> Result<DescentData> {
    Ok(DescentData {
        base: StrictDualComplex::build(base)?,
        classes,
        witnesses,
    })
}

pub fn realization_to_json(p: &RealizationPoint) -> Value {
    json!({
        "x": p
            .x()
            .iter()
            .map(|xi| xi.iter().map(ext_rat_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "y": p.y().iter().map(ext_rat_to_string).collect::<Vec<_>>(),
    })
}

pub fn realization_from_json(v: &Value, closure: bool) -> Result<RealizationPoint> {
    let m = obj(v, "realization point")?;
    let x = arr(field(m, "x")?, "x")?
        .iter()
        .map(|xi| {
            string_list(xi, "x factor")?
                .iter()
                .map(|s| ext_rat_from_str(s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let y = string_list(field(m, "y")?, "y")?
        .iter()
        .map(|s| ext_rat_from_str(s))
        .collect::<Result<Vec<_>>>()?;
    if closure {
        Ok(RealizationPoint::new_closure(x, y))
    } else {
        RealizationPoint::new(x, y)
    }
}

pub fn model_from_json(v: &Value, closure: bool) -> Result<StandardPairModel> {
    let m = obj(v, "model")?;
    let n = u32_list(field(m, "n")?, "n")?;
    let a = string_list(field(m, "a")?, "a")?
        .iter()
        .map(|s| coeff_from_str(s))
        .collect::<Result<Vec<_>>>()?;
    let d = u32_field(m, "d")?;
    let s = u32_field(m, "s")?;
    if closure {
        StandardPairModel::new_closure(n, a, d, s)
    } else {
        StandardPairModel::new(n, a, d, s)
    }
}

pub fn point_to_json(x: &SkeletalPoint) -> Value {
    json!({
        "v": x
            .v()
            .iter()
            .map(|vi| vi.iter().map(format_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "coords": x
            .coords()
            .iter()
            .map(|dc| json!({ "c": dc.c.to_string(), "u": ext_rat_to_string(&dc.u) }))
            .collect::<Vec<_>>(),
    })
}

pub fn point_from_json(model: &StandardPairModel, v: &Value) -> Result<SkeletalPoint> {
    let m = obj(v, "skeletal point")?;
    let weights = arr(field(m, "v")?, "v")?
        .iter()
        .map(|vi| {
            string_list(vi, "v factor")?
                .iter()
                .map(|s| rat_from_str(s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let coords = arr(field(m, "coords")?, "coords")?
        .iter()
        .map(|c| {
            let cm = obj(c, "disc coordinate")?;
            Ok(DiscCoord::new(
                coeff_from_str(str_field(cm, "c")?)?,
                ext_rat_from_str(str_field(cm, "u")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SkeletalPoint::new(model, weights, coords)
}

pub fn poly_from_json(model: &StandardPairModel, v: &Value) -> Result<ValuedPolynomial> {
    let mut raw = Vec::new();
    for term in arr(v, "polynomial")? {
        let tm = obj(term, "polynomial term")?;
        let tor = arr(field(tm, "tor")?, "tor")?
            .iter()
            .map(|t| u32_list(t, "tor factor"))
            .collect::<Result<Vec<_>>>()?;
        let disc = u32_list(field(tm, "disc")?, "disc")?;
        let c = coeff_from_str(str_field(tm, "c")?)?;
        raw.push((Monomial { tor, disc }, c));
    }
    ValuedPolynomial::from_terms(model, raw)
}
