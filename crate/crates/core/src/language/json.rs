//! Reader for complex-change definition files and association files.
//!
//! The grammar is documented in `docs/complex-changes.md`.

use serde_json::{Map, Value};

use crate::detect::GroundAssociation;
use crate::error::DefinitionFileError;
use crate::pattern::{FilterExpr, GraphPattern, PatternTerm, TriplePattern, Variable};
use crate::rdf::{parse_term, Term};

use super::{Association, ChangeLanguage, ComplexChangeDef, SimpleChangeRef};

type Result<T> = std::result::Result<T, DefinitionFileError>;

fn shape(path: &str, message: impl Into<String>) -> DefinitionFileError {
    DefinitionFileError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(shape(path, format!("unknown field `{k}`")));
    }
    Ok(obj)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| shape(path, "expected a string"))
}

/// `?name` is a variable; anything else must be an N-Triples term.
pub fn parse_pattern_term(text: &str, path: &str) -> Result<PatternTerm> {
    if let Some(name) = text.strip_prefix('?') {
        let valid = !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(shape(path, format!("invalid variable `{text}`")));
        }
        return Ok(PatternTerm::Var(Variable::new(name)));
    }
    parse_term(text)
        .map(PatternTerm::Const)
        .map_err(|e| shape(path, format!("invalid term `{text}`: {e}")))
}

fn ground_term(v: &Value, path: &str) -> Result<Term> {
    match parse_pattern_term(string(v, path)?, path)? {
        PatternTerm::Const(t) => Ok(t),
        PatternTerm::Var(_) => Err(shape(path, "associations must be ground")),
    }
}

fn terms(v: &Value, path: &str) -> Result<Vec<PatternTerm>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = format!("{path}[{i}]");
            parse_pattern_term(string(x, &p)?, &p)
        })
        .collect()
}

fn filter(v: &Value, path: &str) -> Result<FilterExpr> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape(path, "expected an object"))?;
    let op = string(
        obj.get("op").ok_or_else(|| shape(path, "missing `op`"))?,
        &format!("{path}.op"),
    )?;
    match op {
        "eq" | "neq" => {
            object(v, path, &["op", "lhs", "rhs"])?;
            let side = |k: &str| -> Result<PatternTerm> {
                let p = format!("{path}.{k}");
                let x = obj
                    .get(k)
                    .ok_or_else(|| shape(path, format!("missing `{k}`")))?;
                parse_pattern_term(string(x, &p)?, &p)
            };
            let (l, r) = (side("lhs")?, side("rhs")?);
            Ok(if op == "eq" {
                FilterExpr::Eq(l, r)
            } else {
                FilterExpr::Neq(l, r)
            })
        }
        "and" | "or" => {
            object(v, path, &["op", "args"])?;
            let p = format!("{path}.args");
            let args = array(
                obj.get("args")
                    .ok_or_else(|| shape(path, "missing `args`"))?,
                &p,
            )?
            .iter()
            .enumerate()
            .map(|(i, x)| filter(x, &format!("{p}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
            Ok(if op == "and" {
                FilterExpr::And(args)
            } else {
                FilterExpr::Or(args)
            })
        }
        other => Err(shape(path, format!("unknown filter operator `{other}`"))),
    }
}

enum Member {
    Pattern(GraphPattern),
    NotExists(GraphPattern),
    Filter(FilterExpr),
}

fn member(v: &Value, path: &str) -> Result<Member> {
    if v.is_array() {
        return Ok(Member::Pattern(pattern(v, path)?));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| shape(path, "expected a pattern object or array"))?;
    if obj.len() != 1 {
        return Err(shape(path, "a pattern object has exactly one key"));
    }
    let (key, body) = obj.iter().next().expect("one key");
    let p = format!("{path}.{key}");
    Ok(match key.as_str() {
        "bgp" => {
            let tps = array(body, &p)?
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let tp_path = format!("{p}[{i}]");
                    let parts = terms(t, &tp_path)?;
                    let [s, pr, o]: [PatternTerm; 3] = parts
                        .try_into()
                        .map_err(|_| shape(&tp_path, "a triple pattern has three terms"))?;
                    Ok(TriplePattern::new(s, pr, o))
                })
                .collect::<Result<Vec<_>>>()?;
            Member::Pattern(GraphPattern::Bgp(tps))
        }
        "join" => Member::Pattern(pattern(body, &p)?),
        "union" => {
            let branches = array(body, &p)?;
            if branches.len() < 2 {
                return Err(shape(&p, "a union has at least two branches"));
            }
            let mut parsed = branches
                .iter()
                .enumerate()
                .map(|(i, b)| pattern(b, &format!("{p}[{i}]")));
            let first = parsed.next().expect("two branches")?;
            Member::Pattern(parsed.try_fold(first, |acc, b| {
                Ok::<_, DefinitionFileError>(GraphPattern::union(acc, b?))
            })?)
        }
        "optional" => {
            let parts = array(body, &p)?;
            if parts.len() != 2 {
                return Err(shape(&p, "optional takes [pattern, optional-pattern]"));
            }
            Member::Pattern(GraphPattern::optional(
                pattern(&parts[0], &format!("{p}[0]"))?,
                pattern(&parts[1], &format!("{p}[1]"))?,
            ))
        }
        "not_exists" => Member::NotExists(pattern(body, &p)?),
        "filter" => Member::Filter(filter(body, &p)?),
        other => Err(shape(path, format!("unknown pattern node `{other}`")))?,
    })
}

/// A pattern node, or an array read as a group: its `not_exists` and
/// `filter` members apply to the join of the remaining members.
pub fn pattern(v: &Value, path: &str) -> Result<GraphPattern> {
    if v.is_null() {
        return Ok(GraphPattern::Unit);
    }
    let members: Vec<Member> = match v.as_array() {
        Some(xs) => xs
            .iter()
            .enumerate()
            .map(|(i, x)| member(x, &format!("{path}[{i}]")))
            .collect::<Result<_>>()?,
        None => vec![member(v, path)?],
    };
    let mut positive = Vec::new();
    let mut guards = Vec::new();
    let mut filters = Vec::new();
    for m in members {
        match m {
            Member::Pattern(p) => positive.push(p),
            Member::NotExists(p) => guards.push(p),
            Member::Filter(f) => filters.push(f),
        }
    }
    let mut gp = match positive.len() {
        0 => GraphPattern::Unit,
        1 => positive.pop().expect("one member"),
        _ => GraphPattern::Join(positive),
    };
    for g in guards {
        gp = GraphPattern::not_exists(gp, g);
    }
    match filters.len() {
        0 => {}
        1 => gp = GraphPattern::filter(gp, filters.pop().expect("one filter")),
        _ => gp = GraphPattern::filter(gp, FilterExpr::And(filters)),
    }
    Ok(gp)
}

fn definition(v: &Value, path: &str) -> Result<ComplexChangeDef> {
    let obj = object(
        v,
        path,
        &[
            "name",
            "params",
            "priority",
            "consumes",
            "cond_old",
            "cond_new",
            "associations",
        ],
    )?;
    let get = |k: &str| {
        obj.get(k)
            .ok_or_else(|| shape(path, format!("missing `{k}`")))
    };
    let name = string(get("name")?, &format!("{path}.name"))?;
    let params = array(get("params")?, &format!("{path}.params"))?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let pp = format!("{path}.params[{i}]");
            let s = string(p, &pp)?;
            Ok(Variable::new(s.strip_prefix('?').unwrap_or(s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let priority = get("priority")?
        .as_i64()
        .ok_or_else(|| shape(&format!("{path}.priority"), "expected an integer"))?;
    let mut def = ComplexChangeDef::new(name, &[], priority);
    def.params = params;
    if let Some(c) = obj.get("consumes") {
        let cp = format!("{path}.consumes");
        for (i, r) in array(c, &cp)?.iter().enumerate() {
            let rp = format!("{cp}[{i}]");
            let ro = object(r, &rp, &["change", "args"])?;
            let change = string(
                ro.get("change")
                    .ok_or_else(|| shape(&rp, "missing `change`"))?,
                &rp,
            )?;
            let args = match ro.get("args") {
                Some(a) => terms(a, &format!("{rp}.args"))?,
                None => Vec::new(),
            };
            def.consumes.push(SimpleChangeRef::new(change, args));
        }
    }
    if let Some(c) = obj.get("cond_old") {
        def.cond_old = pattern(c, &format!("{path}.cond_old"))?;
    }
    if let Some(c) = obj.get("cond_new") {
        def.cond_new = pattern(c, &format!("{path}.cond_new"))?;
    }
    if let Some(a) = obj.get("associations") {
        let ap = format!("{path}.associations");
        for (i, x) in array(a, &ap)?.iter().enumerate() {
            let xp = format!("{ap}[{i}]");
            let xo = object(x, &xp, &["from", "to"])?;
            let side = |k: &str| -> Result<Vec<PatternTerm>> {
                terms(
                    xo.get(k)
                        .ok_or_else(|| shape(&xp, format!("missing `{k}`")))?,
                    &format!("{xp}.{k}"),
                )
            };
            def.associations
                .push(Association::new(side("from")?, side("to")?));
        }
    }
    Ok(def)
}

/// Parses a JSON array of complex-change definitions.
pub fn parse_complex_definitions(text: &str) -> Result<Vec<ComplexChangeDef>> {
    let v: Value = serde_json::from_str(text)?;
    array(&v, "$")?
        .iter()
        .enumerate()
        .map(|(i, d)| definition(d, &format!("$[{i}]")))
        .collect()
}

/// Parses and registers every definition in file order.
pub fn load_complex_definitions(text: &str, lang: &mut ChangeLanguage) -> Result<usize> {
    let defs = parse_complex_definitions(text)?;
    let n = defs.len();
    for d in defs {
        lang.register_complex(d)?;
    }
    Ok(n)
}

/// Parses a JSON array of `{"old": [..], "new": [..]}` ground associations.
pub fn parse_associations(text: &str) -> Result<Vec<GroundAssociation>> {
    let v: Value = serde_json::from_str(text)?;
    array(&v, "$")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let path = format!("$[{i}]");
            let obj = object(a, &path, &["old", "new"])?;
            let side = |k: &str| -> Result<Vec<Term>> {
                let p = format!("{path}.{k}");
                array(
                    obj.get(k)
                        .ok_or_else(|| shape(&path, format!("missing `{k}`")))?,
                    &p,
                )?
                .iter()
                .enumerate()
                .map(|(j, t)| ground_term(t, &format!("{p}[{j}]")))
                .collect()
            };
            GroundAssociation::new(side("old")?, side("new")?).map_err(|m| shape(&path, m))
        })
        .collect()
}
