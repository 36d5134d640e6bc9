use std::fmt::{self, Write};

use super::{FilterExpr, GraphPattern, GraphSelector, Variable};

impl fmt::Display for GraphSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphSelector::Old => "<v_old>",
            GraphSelector::New => "<v_new>",
            GraphSelector::Ontology => "<changesOntology>",
        })
    }
}

impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[FilterExpr], op: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            FilterExpr::Eq(a, b) => write!(f, "{a} = {b}"),
            FilterExpr::Neq(a, b) => write!(f, "{a} != {b}"),
            FilterExpr::And(xs) if xs.is_empty() => f.write_str("true"),
            FilterExpr::Or(xs) if xs.is_empty() => f.write_str("false"),
            FilterExpr::And(xs) => join(f, xs, "&&"),
            FilterExpr::Or(xs) => join(f, xs, "||"),
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn render(gp: &GraphPattern, depth: usize, out: &mut String) {
    match gp {
        GraphPattern::Unit => {}
        GraphPattern::Scoped(sel, inner) => {
            indent(out, depth);
            let _ = writeln!(out, "GRAPH {sel} {{");
            render(inner, depth + 1, out);
            indent(out, depth);
            out.push_str("}\n");
        }
        GraphPattern::Bgp(tps) => {
            for tp in tps {
                indent(out, depth);
                let _ = writeln!(out, "{tp}");
            }
        }
        GraphPattern::Join(xs) => xs.iter().for_each(|x| render(x, depth, out)),
        GraphPattern::Union(a, b) => {
            indent(out, depth);
            out.push_str("{\n");
            render(a, depth + 1, out);
            indent(out, depth);
            out.push_str("} UNION {\n");
            render(b, depth + 1, out);
            indent(out, depth);
            out.push_str("}\n");
        }
        GraphPattern::Optional(a, b) => {
            render(a, depth, out);
            indent(out, depth);
            out.push_str("OPTIONAL {\n");
            render(b, depth + 1, out);
            indent(out, depth);
            out.push_str("}\n");
        }
        GraphPattern::Filter(p, expr) => {
            render(p, depth, out);
            indent(out, depth);
            let _ = writeln!(out, "FILTER ({expr})");
        }
        GraphPattern::NotExists(p, sub) => {
            render(p, depth, out);
            indent(out, depth);
            out.push_str("FILTER NOT EXISTS {\n");
            render(sub, depth + 1, out);
            indent(out, depth);
            out.push_str("}\n");
        }
    }
}

impl fmt::Display for GraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render(self, 0, &mut out);
        f.write_str(&out)
    }
}

/// Renders `SELECT ?p1 .. WHERE { gp }` in SPARQL-like syntax.
pub fn select_query(params: &[Variable], gp: &GraphPattern) -> String {
    let mut out = String::from("SELECT");
    for p in params {
        let _ = write!(out, " {p}");
    }
    out.push_str(" WHERE {\n");
    render(gp, 1, &mut out);
    out.push('}');
    out
}
