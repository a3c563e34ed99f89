//! JSON bundles. One file holds one object, optionally tagged with
//! `"schema": "g2kit/1"` and `"kind": "lie2" | "crossed" | "algebroid" | "action"`;
//! untagged files are recognised by their fields.
//!
//! Rationals are strings `"p/q"` (plain integers are accepted). Sparse tensor
//! entries list only nonzero values; brackets store `i < j` and the other
//! half is filled in by antisymmetry.

use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::action::StrictActionData;
use crate::algebroid::{algebroid_context, LieAlgebroidData, Section};
use crate::error::{G2Error, Result};
use crate::graded_poly::{fmt_rat, parse_rat, rat, Derivation, GradedContext, GradedPoly, Rat};
use crate::lie2::{CrossedModuleData, StrictLie2Data, Tensor3};

pub const SCHEMA: &str = "g2kit/1";

#[derive(Debug, Clone)]
pub enum Bundle {
    Lie2(StrictLie2Data),
    Crossed(CrossedModuleData),
    Algebroid(LieAlgebroidData),
    Action(Box<StrictActionData>),
}

impl Bundle {
    pub fn kind(&self) -> &'static str {
        match self {
            Bundle::Lie2(_) => "lie2",
            Bundle::Crossed(_) => "crossed",
            Bundle::Algebroid(_) => "algebroid",
            Bundle::Action(_) => "action",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bundle::Lie2(l) => lie2_to_json(l),
            Bundle::Crossed(c) => crossed_to_json(c),
            Bundle::Algebroid(a) => algebroid_to_json(a),
            Bundle::Action(s) => action_to_json(s),
        }
    }
}

fn err(path: &str, msg: impl std::fmt::Display) -> G2Error {
    G2Error::Parse(format!("{path}: {msg}"))
}

/// `err` for a nested error, without repeating its kind.
fn wrap(path: &str, e: G2Error) -> G2Error {
    match e {
        G2Error::Parse(m) => err(path, m),
        other => err(path, other),
    }
}

/// Reads and shape-checks a bundle file.
pub fn parse_bundle(path: impl AsRef<Path>) -> Result<Bundle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| G2Error::Parse(format!("{}: {e}", path.display())))?;
    parse_bundle_str(&text).map_err(|e| wrap(&path.display().to_string(), e))
}

pub fn parse_bundle_str(text: &str) -> Result<Bundle> {
    let v: Value = serde_json::from_str(text).map_err(|e| G2Error::Parse(format!("malformed JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
    if let Some(s) = obj.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return Err(err("$.schema", format!("expected {SCHEMA:?}, got {s}")));
        }
    }
    let kind = match obj.get("kind") {
        Some(k) => k.as_str().ok_or_else(|| err("$.kind", "must be a string"))?.to_string(),
        None if obj.contains_key("mu_g") || obj.contains_key("mu_h") => "action".into(),
        None if obj.contains_key("bracket_h") || obj.contains_key("alpha") => "crossed".into(),
        None if obj.contains_key("base_dim") => "algebroid".into(),
        None if obj.contains_key("dim_g") => "lie2".into(),
        None => return Err(err("$", "cannot tell what kind of bundle this is; add a \"kind\" field")),
    };
    Ok(match kind.as_str() {
        "lie2" => Bundle::Lie2(lie2_from_json(&v, "$")?),
        "crossed" => Bundle::Crossed(crossed_from_json(&v, "$")?),
        "algebroid" => Bundle::Algebroid(algebroid_from_json(&v, "$")?),
        "action" => Bundle::Action(Box::new(action_from_json(&v, "$")?)),
        other => return Err(err("$.kind", format!("unknown kind {other:?}"))),
    })
}

fn field<'a>(v: &'a Value, path: &str, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| err(path, format!("missing field {name:?}")))
}

fn get_usize(v: &Value, path: &str, name: &str) -> Result<usize> {
    field(v, path, name)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(&format!("{path}.{name}"), "expected a non-negative integer"))
}

fn get_array<'a>(v: &'a Value, path: &str, name: &str) -> Result<&'a Vec<Value>> {
    match v.get(name) {
        None => Ok(EMPTY.get_or_init(Vec::new)),
        Some(a) => a.as_array().ok_or_else(|| err(&format!("{path}.{name}"), "expected an array")),
    }
}

static EMPTY: std::sync::OnceLock<Vec<Value>> = std::sync::OnceLock::new();

fn parse_rat_value(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| wrap(path, e)),
        Value::Number(n) => n.as_i64().map(rat).ok_or_else(|| err(path, "numbers must be integers; write \"p/q\"")),
        _ => Err(err(path, "expected a rational \"p/q\"")),
    }
}

/// Reads `[i1, .., ik, "p/q"]` with every index checked against `bounds`.
fn sparse_entry(v: &Value, path: &str, bounds: &[usize]) -> Result<(Vec<usize>, Rat)> {
    let a = v.as_array().ok_or_else(|| err(path, "expected [indices..., \"p/q\"]"))?;
    if a.len() != bounds.len() + 1 {
        return Err(err(path, format!("expected {} indices and a value", bounds.len())));
    }
    let mut idx = Vec::with_capacity(bounds.len());
    for (k, (x, b)) in a.iter().zip(bounds).enumerate() {
        let i =
            x.as_u64().ok_or_else(|| err(&format!("{path}[{k}]"), "index must be a non-negative integer"))? as usize;
        if i >= *b {
            return Err(err(&format!("{path}[{k}]"), format!("index {i} out of range 0..{b}")));
        }
        idx.push(i);
    }
    Ok((idx, parse_rat_value(&a[bounds.len()], &format!("{path}[{}]", bounds.len()))?))
}

fn zeros3(a: usize, b: usize, c: usize) -> Tensor3 {
    vec![vec![vec![Rat::zero(); c]; b]; a]
}

fn antisym_from_sparse(list: &[Value], path: &str, dim: usize) -> Result<Tensor3> {
    let mut t = zeros3(dim, dim, dim);
    for (n, e) in list.iter().enumerate() {
        let p = format!("{path}[{n}]");
        let (ix, v) = sparse_entry(e, &p, &[dim, dim, dim])?;
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        if i >= j {
            return Err(err(&p, "store bracket entries with i < j"));
        }
        t[i][j][k] = v.clone();
        t[j][i][k] = -v;
    }
    Ok(t)
}

fn general_from_sparse3(list: &[Value], path: &str, dims: [usize; 3]) -> Result<Tensor3> {
    let mut t = zeros3(dims[0], dims[1], dims[2]);
    for (n, e) in list.iter().enumerate() {
        let (ix, v) = sparse_entry(e, &format!("{path}[{n}]"), &dims)?;
        t[ix[0]][ix[1]][ix[2]] = v;
    }
    Ok(t)
}

fn matrix_from_sparse(list: &[Value], path: &str, dims: [usize; 2]) -> Result<Vec<Vec<Rat>>> {
    let mut m = vec![vec![Rat::zero(); dims[1]]; dims[0]];
    for (n, e) in list.iter().enumerate() {
        let (ix, v) = sparse_entry(e, &format!("{path}[{n}]"), &dims)?;
        m[ix[0]][ix[1]] = v;
    }
    Ok(m)
}

fn sparse3(t: &Tensor3, upper_only: bool) -> Vec<Value> {
    let mut out = Vec::new();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in a.iter().enumerate() {
            if upper_only && i >= j {
                continue;
            }
            for (k, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    out.push(json!([i, j, k, fmt_rat(v)]));
                }
            }
        }
    }
    out
}

fn sparse2(m: &[Vec<Rat>]) -> Vec<Value> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.push(json!([i, j, fmt_rat(v)]));
            }
        }
    }
    out
}

fn tagged(kind: &str, mut body: Map<String, Value>) -> Value {
    body.insert("schema".into(), json!(SCHEMA));
    body.insert("kind".into(), json!(kind));
    Value::Object(body)
}

fn as_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

pub fn lie2_from_json(v: &Value, path: &str) -> Result<StrictLie2Data> {
    let (h, g) = (get_usize(v, path, "dim_h")?, get_usize(v, path, "dim_g")?);
    let l = StrictLie2Data {
        dim_h: h,
        dim_g: g,
        bracket_g: antisym_from_sparse(get_array(v, path, "bracket_g")?, &format!("{path}.bracket_g"), g)?,
        act: general_from_sparse3(get_array(v, path, "act")?, &format!("{path}.act"), [g, h, h])?,
        delta: matrix_from_sparse(get_array(v, path, "delta")?, &format!("{path}.delta"), [h, g])?,
    };
    l.check_shapes()?;
    Ok(l)
}

pub fn lie2_to_json(l: &StrictLie2Data) -> Value {
    tagged(
        "lie2",
        as_map(json!({
            "dim_h": l.dim_h,
            "dim_g": l.dim_g,
            "bracket_g": sparse3(&l.bracket_g, true),
            "act": sparse3(&l.act, false),
            "delta": sparse2(&l.delta),
        })),
    )
}

pub fn crossed_from_json(v: &Value, path: &str) -> Result<CrossedModuleData> {
    let (h, g) = (get_usize(v, path, "dim_h")?, get_usize(v, path, "dim_g")?);
    Ok(CrossedModuleData {
        dim_h: h,
        dim_g: g,
        bracket_h: antisym_from_sparse(get_array(v, path, "bracket_h")?, &format!("{path}.bracket_h"), h)?,
        bracket_g: antisym_from_sparse(get_array(v, path, "bracket_g")?, &format!("{path}.bracket_g"), g)?,
        delta: matrix_from_sparse(get_array(v, path, "delta")?, &format!("{path}.delta"), [h, g])?,
        alpha: general_from_sparse3(get_array(v, path, "alpha")?, &format!("{path}.alpha"), [g, h, h])?,
    })
}

pub fn crossed_to_json(c: &CrossedModuleData) -> Value {
    tagged(
        "crossed",
        as_map(json!({
            "dim_h": c.dim_h,
            "dim_g": c.dim_g,
            "bracket_h": sparse3(&c.bracket_h, true),
            "bracket_g": sparse3(&c.bracket_g, true),
            "delta": sparse2(&c.delta),
            "alpha": sparse3(&c.alpha, false),
        })),
    )
}

fn poly_from_json(ctx: &Arc<GradedContext>, v: &Value, path: &str) -> Result<GradedPoly> {
    GradedPoly::from_json(ctx, v).map_err(|e| wrap(path, e))
}

fn body_poly(ctx: &Arc<GradedContext>, v: &Value, path: &str) -> Result<GradedPoly> {
    let p = poly_from_json(ctx, v, path)?;
    if !p.is_body_function() {
        return Err(err(path, "must depend on the base coordinates only"));
    }
    Ok(p)
}

fn index(v: &Value, path: &str, name: &str, bound: usize) -> Result<usize> {
    let i = get_usize(v, path, name)?;
    if i >= bound {
        return Err(err(&format!("{path}.{name}"), format!("index {i} out of range 0..{bound}")));
    }
    Ok(i)
}

pub fn algebroid_from_json(v: &Value, path: &str) -> Result<LieAlgebroidData> {
    let (n, r) = (get_usize(v, path, "base_dim")?, get_usize(v, path, "rank")?);
    let mut a = LieAlgebroidData::new(n, r);
    let ctx = a.ctx().clone();
    for (m, e) in get_array(v, path, "c")?.iter().enumerate() {
        let p = format!("{path}.c[{m}]");
        let (i, j, k) = (index(e, &p, "i", r)?, index(e, &p, "j", r)?, index(e, &p, "k", r)?);
        if i >= j {
            return Err(err(&p, "store structure functions with i < j"));
        }
        a.set_c(i, j, k, body_poly(&ctx, field(e, &p, "poly")?, &format!("{p}.poly"))?)?;
    }
    for (m, e) in get_array(v, path, "rho")?.iter().enumerate() {
        let p = format!("{path}.rho[{m}]");
        let (i, al) = (index(e, &p, "i", r)?, index(e, &p, "alpha", n)?);
        a.set_rho(i, al, body_poly(&ctx, field(e, &p, "poly")?, &format!("{p}.poly"))?)?;
    }
    Ok(a)
}

pub fn algebroid_to_json(a: &LieAlgebroidData) -> Value {
    let mut c = Vec::new();
    for i in 0..a.rank {
        for j in (i + 1)..a.rank {
            for k in 0..a.rank {
                let p = a.c(i, j, k);
                if !p.is_zero() {
                    c.push(json!({"i": i, "j": j, "k": k, "poly": p.to_json()}));
                }
            }
        }
    }
    let mut rho = Vec::new();
    for i in 0..a.rank {
        for al in 0..a.base_dim {
            let p = a.rho(i, al);
            if !p.is_zero() {
                rho.push(json!({"i": i, "alpha": al, "poly": p.to_json()}));
            }
        }
    }
    tagged("algebroid", as_map(json!({"base_dim": a.base_dim, "rank": a.rank, "c": c, "rho": rho})))
}

fn section_from_json(ctx: &Arc<GradedContext>, v: &Value, path: &str, r: usize) -> Result<Section> {
    let a = v.as_array().ok_or_else(|| err(path, "a section is an array of polynomials"))?;
    if a.len() != r {
        return Err(err(path, format!("a section needs {r} coefficients, got {}", a.len())));
    }
    let coeffs =
        a.iter().enumerate().map(|(i, p)| body_poly(ctx, p, &format!("{path}[{i}]"))).collect::<Result<_>>()?;
    Ok(Section { coeffs })
}

fn cdo_field_from_json(ctx: &Arc<GradedContext>, v: &Value, path: &str, n: usize, r: usize) -> Result<Derivation> {
    let base = v
        .get("base")
        .map(|b| b.as_array().ok_or_else(|| err(&format!("{path}.base"), "expected an array")))
        .transpose()?;
    let mut d = Derivation::zero(ctx);
    if let Some(base) = base {
        if base.len() != n {
            return Err(err(&format!("{path}.base"), format!("expected {n} polynomials, got {}", base.len())));
        }
        for (x, p) in base.iter().enumerate() {
            d.set_component(x, body_poly(ctx, p, &format!("{path}.base[{x}]"))?)?;
        }
    }
    if let Some(fib) = v.get("fiber") {
        let rows = fib.as_array().ok_or_else(|| err(&format!("{path}.fiber"), "expected an r x r array"))?;
        if rows.len() != r {
            return Err(err(&format!("{path}.fiber"), format!("expected {r} rows, got {}", rows.len())));
        }
        let mut comps = vec![GradedPoly::zero(ctx); r];
        for (a, row) in rows.iter().enumerate() {
            let p = format!("{path}.fiber[{a}]");
            let row = row.as_array().ok_or_else(|| err(&p, "expected an array"))?;
            if row.len() != r {
                return Err(err(&p, format!("expected {r} entries, got {}", row.len())));
            }
            // fiber[a][b] is the coefficient of ξ^a ∂/∂ξ^b
            for (b, f) in row.iter().enumerate() {
                let f = body_poly(ctx, f, &format!("{p}[{b}]"))?;
                comps[b] = comps[b].add(&f.mul(&GradedPoly::var(ctx, n + a))?)?;
            }
        }
        for (b, c) in comps.into_iter().enumerate() {
            d.set_component(n + b, c)?;
        }
    }
    Ok(d)
}

pub fn action_from_json(v: &Value, path: &str) -> Result<StrictActionData> {
    let l = lie2_from_json(field(v, path, "lie2")?, &format!("{path}.lie2"))?;
    let a = algebroid_from_json(field(v, path, "algebroid")?, &format!("{path}.algebroid"))?;
    let (n, r) = (a.base_dim, a.rank);
    let ctx = algebroid_context(n, r);
    let mu_h_raw = get_array(v, path, "mu_h")?;
    if mu_h_raw.len() != l.dim_h {
        return Err(err(&format!("{path}.mu_h"), format!("expected {} sections, got {}", l.dim_h, mu_h_raw.len())));
    }
    let mu_h = mu_h_raw
        .iter()
        .enumerate()
        .map(|(k, s)| section_from_json(&ctx, s, &format!("{path}.mu_h[{k}]"), r))
        .collect::<Result<_>>()?;
    let mu_g_raw = get_array(v, path, "mu_g")?;
    if mu_g_raw.len() != l.dim_g {
        return Err(err(&format!("{path}.mu_g"), format!("expected {} operators, got {}", l.dim_g, mu_g_raw.len())));
    }
    let mu_g = mu_g_raw
        .iter()
        .enumerate()
        .map(|(k, d)| cdo_field_from_json(&ctx, d, &format!("{path}.mu_g[{k}]"), n, r))
        .collect::<Result<_>>()?;
    let s = StrictActionData { l, a, mu_h, mu_g };
    s.check_shapes()?;
    Ok(s)
}

pub fn action_to_json(s: &StrictActionData) -> Value {
    let strip = |v: Value| {
        let mut m = as_map(v);
        m.remove("schema");
        m.remove("kind");
        Value::Object(m)
    };
    let (n, r) = (s.a.base_dim, s.a.rank);
    let mu_h: Vec<Value> =
        s.mu_h.iter().map(|sec| json!(sec.coeffs.iter().map(GradedPoly::to_json).collect::<Vec<_>>())).collect();
    let fibre: Vec<usize> = (n..n + r).collect();
    let mu_g: Vec<Value> = s
        .mu_g
        .iter()
        .map(|d| {
            let base: Vec<Value> = (0..n).map(|x| d.component(x).to_json()).collect();
            let mut fiber = vec![vec![GradedPoly::zero(s.a.ctx()).to_json(); r]; r];
            for b in 0..r {
                for (a, f) in d.component(n + b).split_linear(&fibre).unwrap_or_default() {
                    fiber[a - n][b] = f.to_json();
                }
            }
            json!({"base": base, "fiber": fiber})
        })
        .collect();
    tagged(
        "action",
        as_map(json!({
            "lie2": strip(lie2_to_json(&s.l)),
            "algebroid": strip(algebroid_to_json(&s.a)),
            "mu_h": mu_h,
            "mu_g": mu_g,
        })),
    )
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_else(|_| v.to_string())
}
