//! Graph-pattern algebra over the OLD, NEW and ONTOLOGY graphs.

mod display;
mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::rdf::{Iri, Term, Triple};

pub use display::select_query;
pub(crate) use eval::Plan;
pub use eval::{eval_graph_pattern, eval_graph_pattern_with, eval_triple_pattern, EvalContext};

/// A query variable, named without its `?` sigil.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Self {
        Variable(Arc::from(name.as_ref().trim_start_matches('?')))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Names starting with `__` belong to compiled patterns.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with("__")
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A position in a triple pattern or a filter operand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(Variable),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: impl AsRef<str>) -> Self {
        PatternTerm::Var(Variable::new(name))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    pub fn resolve(&self, mu: &Mapping) -> Option<Term> {
        match self {
            PatternTerm::Var(v) => mu.get(v).cloned(),
            PatternTerm::Const(t) => Some(t.clone()),
        }
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Const(Term::Iri(i))
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => v.fmt(f),
            PatternTerm::Const(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }

    /// `μ(tp)`: replaces bound variables, leaving the rest in place.
    pub fn substitute(&self, mu: &Mapping) -> TriplePattern {
        let sub = |p: &PatternTerm| match p {
            PatternTerm::Var(v) => mu
                .get(v)
                .map(|t| PatternTerm::Const(t.clone()))
                .unwrap_or_else(|| p.clone()),
            c => c.clone(),
        };
        TriplePattern {
            subject: sub(&self.subject),
            predicate: sub(&self.predicate),
            object: sub(&self.object),
        }
    }

    /// The triple `μ(tp)` when every position is bound and well-typed.
    pub fn ground(&self, mu: &Mapping) -> Option<Triple> {
        let s = self.subject.resolve(mu)?;
        let p = self.predicate.resolve(mu)?;
        let o = self.object.resolve(mu)?;
        Some(Triple::new(s.as_iri()?.clone(), p.as_iri()?.clone(), o))
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphSelector {
    Old,
    New,
    Ontology,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FilterExpr {
    Eq(PatternTerm, PatternTerm),
    Neq(PatternTerm, PatternTerm),
    And(Vec<FilterExpr>),
    Or(Vec<FilterExpr>),
}

impl FilterExpr {
    pub fn eq(lhs: impl Into<PatternTerm>, rhs: impl Into<PatternTerm>) -> Self {
        FilterExpr::Eq(lhs.into(), rhs.into())
    }

    pub fn neq(lhs: impl Into<PatternTerm>, rhs: impl Into<PatternTerm>) -> Self {
        FilterExpr::Neq(lhs.into(), rhs.into())
    }

    pub fn vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            FilterExpr::Eq(a, b) | FilterExpr::Neq(a, b) => {
                out.extend(a.as_var().cloned());
                out.extend(b.as_var().cloned());
            }
            FilterExpr::And(xs) | FilterExpr::Or(xs) => xs.iter().for_each(|x| x.vars(out)),
        }
    }

    /// Comparisons with an unbound operand are false.
    pub fn holds(&self, mu: &Mapping) -> bool {
        match self {
            FilterExpr::Eq(a, b) => {
                matches!((a.resolve(mu), b.resolve(mu)), (Some(x), Some(y)) if x == y)
            }
            FilterExpr::Neq(a, b) => {
                matches!((a.resolve(mu), b.resolve(mu)), (Some(x), Some(y)) if x != y)
            }
            FilterExpr::And(xs) => xs.iter().all(|x| x.holds(mu)),
            FilterExpr::Or(xs) => xs.iter().any(|x| x.holds(mu)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphPattern {
    /// The empty group: one solution with no bindings.
    Unit,
    Scoped(GraphSelector, Box<GraphPattern>),
    Bgp(Vec<TriplePattern>),
    Join(Vec<GraphPattern>),
    Union(Box<GraphPattern>, Box<GraphPattern>),
    Optional(Box<GraphPattern>, Box<GraphPattern>),
    Filter(Box<GraphPattern>, FilterExpr),
    NotExists(Box<GraphPattern>, Box<GraphPattern>),
}

impl GraphPattern {
    pub fn scoped(graph: GraphSelector, inner: GraphPattern) -> Self {
        GraphPattern::Scoped(graph, Box::new(inner))
    }

    pub fn bgp(tps: impl IntoIterator<Item = TriplePattern>) -> Self {
        GraphPattern::Bgp(tps.into_iter().collect())
    }

    pub fn join(parts: impl IntoIterator<Item = GraphPattern>) -> Self {
        GraphPattern::Join(parts.into_iter().collect())
    }

    pub fn union(a: GraphPattern, b: GraphPattern) -> Self {
        GraphPattern::Union(Box::new(a), Box::new(b))
    }

    pub fn optional(a: GraphPattern, b: GraphPattern) -> Self {
        GraphPattern::Optional(Box::new(a), Box::new(b))
    }

    pub fn filter(inner: GraphPattern, expr: FilterExpr) -> Self {
        GraphPattern::Filter(Box::new(inner), expr)
    }

    pub fn not_exists(inner: GraphPattern, sub: GraphPattern) -> Self {
        GraphPattern::NotExists(Box::new(inner), Box::new(sub))
    }

    pub fn is_unit(&self) -> bool {
        match self {
            GraphPattern::Unit => true,
            GraphPattern::Bgp(tps) => tps.is_empty(),
            GraphPattern::Join(xs) => xs.iter().all(GraphPattern::is_unit),
            GraphPattern::Scoped(_, p) => p.is_unit(),
            _ => false,
        }
    }

    pub fn vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            GraphPattern::Unit => {}
            GraphPattern::Scoped(_, p) => p.collect_vars(out),
            GraphPattern::Bgp(tps) => {
                for tp in tps {
                    out.extend(tp.vars().cloned());
                }
            }
            GraphPattern::Join(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            GraphPattern::Union(a, b)
            | GraphPattern::Optional(a, b)
            | GraphPattern::NotExists(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            GraphPattern::Filter(p, f) => {
                p.collect_vars(out);
                f.vars(out);
            }
        }
    }

    /// Variables bound in every solution.
    pub fn certain_vars(&self) -> BTreeSet<Variable> {
        match self {
            GraphPattern::Unit => BTreeSet::new(),
            GraphPattern::Scoped(_, p) => p.certain_vars(),
            GraphPattern::Bgp(_) => self.vars(),
            GraphPattern::Join(xs) => xs.iter().flat_map(GraphPattern::certain_vars).collect(),
            GraphPattern::Union(a, b) => a
                .certain_vars()
                .intersection(&b.certain_vars())
                .cloned()
                .collect(),
            GraphPattern::Optional(a, _)
            | GraphPattern::Filter(a, _)
            | GraphPattern::NotExists(a, _) => a.certain_vars(),
        }
    }

    /// Every triple pattern, in source order.
    pub fn triple_patterns(&self) -> Vec<&TriplePattern> {
        let mut out = Vec::new();
        self.collect_tps(&mut out);
        out
    }

    fn collect_tps<'a>(&'a self, out: &mut Vec<&'a TriplePattern>) {
        match self {
            GraphPattern::Unit => {}
            GraphPattern::Scoped(_, p) | GraphPattern::Filter(p, _) => p.collect_tps(out),
            GraphPattern::Bgp(tps) => out.extend(tps.iter()),
            GraphPattern::Join(xs) => xs.iter().for_each(|x| x.collect_tps(out)),
            GraphPattern::Union(a, b)
            | GraphPattern::Optional(a, b)
            | GraphPattern::NotExists(a, b) => {
                a.collect_tps(out);
                b.collect_tps(out);
            }
        }
    }
}

/// A partial function from variables to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mapping(BTreeMap<Variable, Term>);

impl Mapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: Variable, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn with(mut self, v: impl AsRef<str>, t: Term) -> Self {
        self.0.insert(Variable::new(v), t);
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }

    /// Two mappings are compatible iff they agree on shared variables.
    pub fn compatible(&self, other: &Mapping) -> bool {
        self.0
            .iter()
            .all(|(v, t)| other.0.get(v).is_none_or(|u| u == t))
    }

    pub fn project(&self, vars: &[Variable]) -> Mapping {
        Mapping(
            vars.iter()
                .filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone())))
                .collect(),
        )
    }
}

impl FromIterator<(Variable, Term)> for Mapping {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        Mapping(iter.into_iter().collect())
    }
}
