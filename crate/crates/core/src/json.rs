//! JSON interchange. Rationals are always strings `"p/q"`; elements of a
//! proper extension are coordinate vectors of such strings.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::field::{format_rational, parse_rational, FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::series::{Laurent, LaurentMatrix, LaurentSeries};
use crate::cohomology::DeRhamDims;
use crate::connection::{Connection, GaugeElement, GaugeSource};
use crate::error::{Error, Result};
use crate::reduction::driver::{Leaf, Measure, Node, Normalization, ReductionTree};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn q_json(x: &Q) -> Value {
    Value::String(format_rational(x))
}

fn q_parse(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => Err(perr(format!("expected a rational string, got {v}"))),
    }
}

fn coords_json(c: &[Q]) -> Value {
    Value::Array(c.iter().map(q_json).collect())
}

pub fn element_json(x: &FieldElement) -> Value {
    if x.tower().is_rationals() {
        q_json(&x.coords()[0])
    } else {
        coords_json(x.coords())
    }
}

pub fn element_parse(tower: &Arc<FieldTower>, v: &Value) -> Result<FieldElement> {
    match v {
        Value::Array(items) => {
            if items.len() != tower.dim() {
                return Err(perr(format!(
                    "coordinate vector of length {} for a tower of dimension {}",
                    items.len(),
                    tower.dim()
                )));
            }
            let coords = items.iter().map(q_parse).collect::<Result<Vec<_>>>()?;
            Ok(FieldElement::from_coords(tower, coords))
        }
        _ => Ok(FieldElement::from_rational(tower, q_parse(v)?)),
    }
}

pub fn field_json(tower: &FieldTower) -> Value {
    let levels: Vec<Value> = (0..tower.height())
        .map(|k| {
            let poly = tower.level_polynomial(k);
            Value::Array(
                poly.iter()
                    .map(|c| if k == 0 { q_json(&c[0]) } else { coords_json(c) })
                    .collect(),
            )
        })
        .collect();
    json!({ "levels": levels })
}

pub fn field_parse(v: &Value) -> Result<Arc<FieldTower>> {
    let mut tower = FieldTower::rationals();
    let levels = match v.get("levels") {
        None => return Ok(tower),
        Some(Value::Array(l)) => l,
        Some(_) => return Err(perr("field.levels must be an array")),
    };
    for (k, level) in levels.iter().enumerate() {
        let Value::Array(coeffs) = level else {
            return Err(perr(format!("field level {k} must be an array")));
        };
        let poly = coeffs
            .iter()
            .map(|c| element_parse(&tower, c))
            .collect::<Result<Vec<_>>>()?;
        tower = tower
            .extend(&poly)
            .map_err(|e| perr(format!("field level {k}: {e}")))?;
    }
    Ok(tower)
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| element_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn matrix_parse(tower: &Arc<FieldTower>, n: usize, v: &Value) -> Result<Matrix> {
    let Value::Array(rows) = v else {
        return Err(perr("matrix must be an array of rows"));
    };
    if rows.len() != n {
        return Err(perr(format!("matrix has {} rows, expected {n}", rows.len())));
    }
    let mut m = Matrix::zeros(tower, n, n);
    for (i, row) in rows.iter().enumerate() {
        let Value::Array(cells) = row else {
            return Err(perr("matrix row must be an array"));
        };
        if cells.len() != n {
            return Err(perr(format!("matrix row {i} has {} entries, expected {n}", cells.len())));
        }
        for (j, x) in cells.iter().enumerate() {
            m.set(i, j, element_parse(tower, x)?);
        }
    }
    Ok(m)
}

fn precision_json(p: Option<i64>) -> Value {
    p.map_or(Value::Null, Value::from)
}

fn series_fields(s: &LaurentMatrix) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("rank".into(), Value::from(s.zero_coeff().rows()));
    m.insert("ramification".into(), Value::from(s.ram()));
    m.insert("precision".into(), precision_json(s.prec()));
    m.insert("field".into(), field_json(s.zero_coeff().tower()));
    m.insert(
        "coefficients".into(),
        Value::Array(
            s.terms()
                .map(|(e, c)| json!({ "exp": e, "matrix": matrix_json(c) }))
                .collect(),
        ),
    );
    m
}

/// A matrix series in the connection layout, without `pole_order`.
pub fn matrix_series_json(s: &LaurentMatrix) -> Value {
    Value::Object(series_fields(s))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    v.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| perr(format!("missing or non-integer field {key:?}")))
}

pub fn matrix_series_parse(v: &Value) -> Result<LaurentMatrix> {
    if !v.is_object() {
        return Err(perr("expected a JSON object"));
    }
    let n = get_i64(v, "rank")?;
    if n < 1 {
        return Err(perr("rank must be positive"));
    }
    let n = n as usize;
    let ram = match v.get("ramification") {
        None => 1,
        Some(_) => get_i64(v, "ramification")?,
    };
    if ram < 1 {
        return Err(perr("ramification must be positive"));
    }
    let prec = match v.get("precision") {
        None | Some(Value::Null) => None,
        Some(_) => Some(get_i64(v, "precision")?),
    };
    let tower = match v.get("field") {
        None | Some(Value::Null) => FieldTower::rationals(),
        Some(f) => field_parse(f)?,
    };
    let Some(Value::Array(coeffs)) = v.get("coefficients") else {
        return Err(perr("missing coefficient list"));
    };
    let mut terms = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let e = get_i64(c, "exp")?;
        if prec.map_or(false, |p| e >= p) {
            return Err(perr(format!("coefficient at exponent {e} lies beyond precision")));
        }
        let m = matrix_parse(&tower, n, c.get("matrix").ok_or_else(|| perr("coefficient without matrix"))?)?;
        terms.push((e, m));
    }
    Ok(Laurent::from_terms(ram, terms, prec, Matrix::zeros(&tower, n, n)))
}

pub fn connection_json(c: &Connection) -> Value {
    let mut m = series_fields(c.gamma());
    m.insert("pole_order".into(), Value::from(c.pole_order()));
    Value::Object(m)
}

pub fn connection_parse(v: &Value) -> Result<Connection> {
    let gamma = matrix_series_parse(v)?;
    let c = Connection::new(gamma).map_err(|e| perr(e.to_string()))?;
    if let Some(p) = v.get("pole_order") {
        if p.as_i64() != Some(c.pole_order()) {
            return Err(perr(format!(
                "declared pole_order {p} differs from computed {}",
                c.pole_order()
            )));
        }
    }
    Ok(c)
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse_text(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| perr(e.to_string()))
}

pub fn connection_from_str(s: &str) -> Result<Connection> {
    connection_parse(&parse_text(s)?)
}

pub fn connection_to_string(c: &Connection) -> String {
    to_text(&connection_json(c))
}

/// A gauge file holds `g` in the matrix-series layout; its inverse is computed.
pub fn gauge_parse(v: &Value, target: Option<i64>) -> Result<GaugeElement> {
    let g = matrix_series_parse(v)?;
    let target = target.or(g.prec());
    GaugeElement::explicit(g, target)
}

pub fn scalar_series_json(s: &LaurentSeries) -> Value {
    json!({
        "ramification": s.ram(),
        "precision": precision_json(s.prec()),
        "terms": s.terms().map(|(e, c)| json!({ "exp": e, "value": element_json(c) })).collect::<Vec<_>>(),
    })
}

pub fn dims_json(d: &DeRhamDims) -> Value {
    json!({
        "h0": d.h0,
        "h1": d.h1,
        "chi": d.chi,
        "window": [d.window.n_min, d.window.n_max],
        "stabilized": d.stabilized,
        "certificate": d.certificate.as_str(),
    })
}

fn measure_json(m: &Measure) -> Value {
    json!({
        "rank": m.rank,
        "codim": m.codim,
        "nilpotent": m.nilpotent,
        "scalar_part": m.scalar_part,
    })
}

fn gauge_json(g: &GaugeElement) -> Value {
    let mut m = Map::new();
    match g.source() {
        GaugeSource::Monomial { basis, exponents } => {
            m.insert("source".into(), Value::from("monomial"));
            m.insert("exponents".into(), Value::Array(exponents.iter().map(q_json).collect()));
            m.insert("basis".into(), basis.as_ref().map_or(Value::Null, matrix_json));
        }
        GaugeSource::Exp(xi) => {
            m.insert("source".into(), Value::from("exp"));
            m.insert("log".into(), matrix_series_json(xi));
        }
        GaugeSource::Explicit => {
            m.insert("source".into(), Value::from("explicit"));
        }
    }
    m.insert("matrix".into(), matrix_series_json(g.matrix()));
    Value::Object(m)
}

fn normalization_json(n: &Normalization) -> Value {
    json!({
        "mode": n.mode,
        "gauge": gauge_json(&n.gauge),
        "steps": n.steps.iter().map(|s| json!({ "i": s.i, "c": matrix_json(&s.c) })).collect::<Vec<_>>(),
    })
}

fn leaf_json(l: &Leaf) -> Value {
    let mut m = Map::new();
    m.insert("leaf".into(), Value::from(l.kind()));
    let c = l.connection();
    m.insert("rank".into(), Value::from(c.rank()));
    m.insert("ramification".into(), Value::from(c.ram()));
    match l {
        Leaf::Rank1 { connection } => {
            let polar: Vec<Value> = connection
                .gamma()
                .terms()
                .filter(|(e, _)| *e < 0)
                .map(|(e, x)| json!({ "exp": e, "value": element_json(x.get(0, 0)) }))
                .collect();
            m.insert("polar".into(), Value::Array(polar));
        }
        Leaf::RegularSingular { residue, .. } => {
            m.insert("residue".into(), matrix_json(residue));
        }
        Leaf::InvertibleIrregularLead {
            pole_order,
            leading,
            t_exponent,
            ..
        } => {
            m.insert("pole_order".into(), Value::from(*pole_order));
            m.insert("leading".into(), matrix_json(leading));
            m.insert("t_exponent".into(), q_json(t_exponent));
        }
    }
    m.insert("connection".into(), connection_json(c));
    Value::Object(m)
}

pub fn tree_node_json(t: &ReductionTree) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), Value::from(t.kind()));
    m.insert("measure".into(), measure_json(&t.measure));
    match &t.node {
        Node::Leaf(l) => {
            if let Value::Object(lm) = leaf_json(l) {
                m.extend(lm);
            }
        }
        Node::SibuyaSplit {
            normalization,
            tower,
            basis,
            sizes,
            eigenvalue,
            children,
        } => {
            m.insert("normalization".into(), normalization_json(normalization));
            m.insert("field".into(), field_json(tower));
            m.insert("basis".into(), matrix_json(basis));
            m.insert("sizes".into(), json!(sizes));
            m.insert("eigenvalue".into(), element_json(eigenvalue));
            m.insert("children".into(), Value::Array(children.iter().map(tree_node_json).collect()));
        }
        Node::NilpotentShear {
            normalization,
            triple,
            shear,
            gauge,
            slodowy,
            child,
        } => {
            m.insert("normalization".into(), normalization_json(normalization));
            m.insert(
                "triple".into(),
                json!({
                    "e": matrix_json(&triple.e),
                    "f": matrix_json(&triple.f),
                    "h": matrix_json(&triple.h),
                    "partition": triple.partition,
                }),
            );
            m.insert("alpha".into(), shear.alpha.as_ref().map_or(Value::Null, q_json));
            m.insert(
                "branch".into(),
                Value::from(match shear.branch {
                    crate::reduction::shear::Branch::RegularSingular => "RegularSingular",
                    crate::reduction::shear::Branch::Irregular => "Irregular",
                }),
            );
            m.insert("q".into(), q_json(&shear.q));
            m.insert("ramification".into(), Value::from(shear.ramification));
            m.insert("shear".into(), gauge_json(gauge));
            m.insert("slodowy".into(), slodowy.as_ref().map_or(Value::Null, matrix_json));
            m.insert("child".into(), tree_node_json(child));
        }
        Node::ScalarTwist { phi, child } => {
            m.insert("phi".into(), scalar_series_json(phi));
            m.insert("child".into(), tree_node_json(child));
        }
    }
    Value::Object(m)
}

pub fn tree_json(t: &ReductionTree) -> Value {
    json!({ "input": connection_json(&t.input), "tree": tree_node_json(t) })
}
