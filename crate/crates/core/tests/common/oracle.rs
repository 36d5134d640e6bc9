//! Brute-force simple-change detection: every assignment of a definition's
//! variables over the whole term universe is tried and the detectability
//! conditions are checked literally, without any pattern evaluator.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::seq::IndexedRandom;
use rand::Rng;

use rdfdelta_core::language::SimpleChangeDef;
use rdfdelta_core::pattern::{FilterExpr, GraphPattern, PatternTerm, TriplePattern, Variable};
use rdfdelta_core::rdf::{Iri, Literal, Term, Triple};

pub type Detections = BTreeMap<(String, Vec<Term>), BTreeSet<Triple>>;

type Assignment = HashMap<Variable, Term>;

/// A random language with its random version pair over a closed universe.
#[derive(Debug, Clone)]
pub struct Instance {
    pub terms: Vec<Term>,
    pub defs: Vec<SimpleChangeDef>,
    pub old: Vec<Triple>,
    pub new: Vec<Triple>,
}

const NAMES: [&str; 4] = [
    "Alpha_Change",
    "Beta_Change",
    "Gamma_Change",
    "Delta_Change",
];
const DELTA_VARS: [&str; 3] = ["a", "b", "c"];
const OUTER_LOCALS: [&str; 2] = ["o1", "o2"];

struct Gen<'a, R> {
    rng: &'a mut R,
    iris: &'a [Term],
    predicates: &'a [Term],
    terms: &'a [Term],
    fresh: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn pick(&mut self, pool: &[Term]) -> PatternTerm {
        PatternTerm::Const(pool.choose(self.rng).unwrap().clone())
    }

    fn var_or(&mut self, vars: &[String], p_var: f64, pool: &[Term]) -> PatternTerm {
        if !vars.is_empty() && self.rng.random_bool(p_var) {
            PatternTerm::var(vars.choose(self.rng).unwrap())
        } else {
            let pool = pool.to_vec();
            self.pick(&pool)
        }
    }

    fn tp(&mut self, vars: &[String]) -> TriplePattern {
        let (iris, predicates, terms) = (
            self.iris.to_vec(),
            self.predicates.to_vec(),
            self.terms.to_vec(),
        );
        let s = self.var_or(vars, 0.85, &iris);
        let p = self.var_or(vars, 0.2, &predicates);
        let o = self.var_or(vars, 0.75, &terms);
        TriplePattern::new(s, p, o)
    }

    fn filter(&mut self, vars: &[String]) -> FilterExpr {
        let terms = self.terms.to_vec();
        let cmp = |g: &mut Self| {
            let lhs = PatternTerm::var(vars.choose(g.rng).unwrap());
            let rhs = g.var_or(vars, 0.4, &terms);
            if g.rng.random_bool(0.5) {
                FilterExpr::Eq(lhs, rhs)
            } else {
                FilterExpr::Neq(lhs, rhs)
            }
        };
        match self.rng.random_range(0..4) {
            0 => FilterExpr::And(vec![cmp(self), cmp(self)]),
            1 => FilterExpr::Or(vec![cmp(self), cmp(self)]),
            _ => cmp(self),
        }
    }

    /// Filters read only delta variables, which every solution binds;
    /// NOT EXISTS members use delta variables and variables of their own.
    fn cond(&mut self, depth: usize, delta_vars: &[String]) -> GraphPattern {
        let outer: Vec<String> = delta_vars
            .iter()
            .cloned()
            .chain(OUTER_LOCALS.iter().map(|s| s.to_string()))
            .collect();
        let roll = if depth == 0 {
            self.rng.random_range(0..2)
        } else {
            self.rng.random_range(0..6)
        };
        match roll {
            0 => GraphPattern::Unit,
            1 => {
                let n = self.rng.random_range(1..=2);
                GraphPattern::bgp((0..n).map(|_| self.tp(&outer)))
            }
            2 => GraphPattern::join([
                self.cond(depth - 1, delta_vars),
                self.cond(depth - 1, delta_vars),
            ]),
            3 => GraphPattern::union(
                self.cond(depth - 1, delta_vars),
                self.cond(depth - 1, delta_vars),
            ),
            4 if !delta_vars.is_empty() => {
                let f = self.filter(delta_vars);
                GraphPattern::filter(self.cond(depth - 1, delta_vars), f)
            }
            _ => {
                self.fresh += 1;
                let mut own: Vec<String> = delta_vars.to_vec();
                own.push(format!("x{}", self.fresh));
                let sub = GraphPattern::bgp([self.tp(&own)]);
                GraphPattern::not_exists(self.cond(depth - 1, delta_vars), sub)
            }
        }
    }
}

fn universe() -> (Vec<Term>, Vec<Term>, Vec<Term>) {
    let iris: Vec<Term> = (0..8)
        .map(|i| Term::Iri(Iri::new(format!("u:i{i}")).unwrap()))
        .collect();
    let literals: Vec<Term> = (0..4)
        .map(|i| Term::from(Literal::plain(format!("l{i}"))))
        .collect();
    let predicates = iris[..3].to_vec();
    let terms = iris.iter().chain(&literals).cloned().collect();
    (iris, predicates, terms)
}

fn random_triple(rng: &mut impl Rng, iris: &[Term], predicates: &[Term], terms: &[Term]) -> Triple {
    let iri = |t: &Term| t.as_iri().unwrap().clone();
    Triple::new(
        iri(iris.choose(rng).unwrap()),
        iri(predicates.choose(rng).unwrap()),
        terms.choose(rng).unwrap().clone(),
    )
}

/// Up to four definitions with one or two consumed patterns each, and a
/// pair of versions with at most 50 triples in total over 12 terms.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let (iris, predicates, terms) = universe();
    let n_defs = rng.random_range(1..=4);
    let mut defs = Vec::new();
    let mut gen = Gen {
        rng,
        iris: &iris,
        predicates: &predicates,
        terms: &terms,
        fresh: 0,
    };
    for name in NAMES.iter().take(n_defs) {
        let n_delta = gen.rng.random_range(1..=2);
        let pool: Vec<String> = DELTA_VARS.iter().map(|s| s.to_string()).collect();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for _ in 0..n_delta {
            let tp = gen.tp(&pool);
            if gen.rng.random_bool(0.5) {
                plus.push(tp);
            } else {
                minus.push(tp);
            }
        }
        let delta_vars: Vec<String> = plus
            .iter()
            .chain(&minus)
            .flat_map(|tp| tp.vars().map(|v| v.name().to_string()).collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let params: Vec<&str> = delta_vars
            .iter()
            .filter(|_| gen.rng.random_bool(0.7))
            .map(String::as_str)
            .collect();
        let mut def = SimpleChangeDef::new(*name, &params);
        for tp in plus {
            def = def.added(tp);
        }
        for tp in minus {
            def = def.deleted(tp);
        }
        let depth = gen.rng.random_range(0..=2);
        def = def.cond_old(gen.cond(depth, &delta_vars));
        let depth = gen.rng.random_range(0..=2);
        def = def.cond_new(gen.cond(depth, &delta_vars));
        defs.push(def);
    }
    let total = gen.rng.random_range(10..=50);
    let mut old = BTreeSet::new();
    let mut new = BTreeSet::new();
    for _ in 0..total {
        let t = random_triple(gen.rng, &iris, &predicates, &terms);
        match gen.rng.random_range(0..3) {
            0 => old.insert(t),
            1 => new.insert(t),
            _ => {
                old.insert(t.clone());
                new.insert(t)
            }
        };
    }
    Instance {
        terms,
        defs,
        old: old.into_iter().collect(),
        new: new.into_iter().collect(),
    }
}

fn ground(tp: &TriplePattern, mu: &Assignment) -> Option<Triple> {
    let term = |p: &PatternTerm| match p {
        PatternTerm::Var(v) => mu.get(v).cloned(),
        PatternTerm::Const(t) => Some(t.clone()),
    };
    let s = term(&tp.subject)?.as_iri()?.clone();
    let p = term(&tp.predicate)?.as_iri()?.clone();
    Some(Triple::new(s, p, term(&tp.object)?))
}

fn value(p: &PatternTerm, mu: &Assignment) -> Option<Term> {
    match p {
        PatternTerm::Var(v) => mu.get(v).cloned(),
        PatternTerm::Const(t) => Some(t.clone()),
    }
}

fn filter_holds(f: &FilterExpr, mu: &Assignment) -> bool {
    match f {
        FilterExpr::Eq(a, b) => {
            matches!((value(a, mu), value(b, mu)), (Some(x), Some(y)) if x == y)
        }
        FilterExpr::Neq(a, b) => {
            matches!((value(a, mu), value(b, mu)), (Some(x), Some(y)) if x != y)
        }
        FilterExpr::And(xs) => xs.iter().all(|x| filter_holds(x, mu)),
        FilterExpr::Or(xs) => xs.iter().any(|x| filter_holds(x, mu)),
    }
}

/// Every extension of `mu` to `vars` over `terms`.
fn extensions(mu: &Assignment, vars: &[Variable], terms: &[Term]) -> Vec<Assignment> {
    let mut out = vec![mu.clone()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|m| {
                terms.iter().map(move |t| {
                    let mut m = m.clone();
                    m.insert(v.clone(), t.clone());
                    m
                })
            })
            .collect();
    }
    out
}

/// Whether `gp` is satisfied in `graph` under a total assignment of its
/// variables; variables met first inside a NOT EXISTS are quantified there.
fn holds(gp: &GraphPattern, graph: &HashSet<Triple>, mu: &Assignment, terms: &[Term]) -> bool {
    match gp {
        GraphPattern::Unit => true,
        GraphPattern::Scoped(_, p) => holds(p, graph, mu, terms),
        GraphPattern::Bgp(tps) => tps
            .iter()
            .all(|tp| ground(tp, mu).is_some_and(|t| graph.contains(&t))),
        GraphPattern::Join(xs) => xs.iter().all(|x| holds(x, graph, mu, terms)),
        GraphPattern::Union(a, b) => holds(a, graph, mu, terms) || holds(b, graph, mu, terms),
        GraphPattern::Filter(p, f) => holds(p, graph, mu, terms) && filter_holds(f, mu),
        GraphPattern::NotExists(p, sub) => {
            if !holds(p, graph, mu, terms) {
                return false;
            }
            let local: Vec<Variable> = sub
                .vars()
                .into_iter()
                .filter(|v| !mu.contains_key(v))
                .collect();
            !extensions(mu, &local, terms)
                .iter()
                .any(|m| holds(sub, graph, m, terms))
        }
        GraphPattern::Optional(..) => unimplemented!("the generator never produces OPTIONAL"),
    }
}

fn not_exists_vars(gp: &GraphPattern, out: &mut BTreeSet<Variable>) {
    match gp {
        GraphPattern::NotExists(p, sub) => {
            not_exists_vars(p, out);
            out.extend(sub.vars());
        }
        GraphPattern::Scoped(_, p) | GraphPattern::Filter(p, _) => not_exists_vars(p, out),
        GraphPattern::Join(xs) => xs.iter().for_each(|x| not_exists_vars(x, out)),
        GraphPattern::Union(a, b) | GraphPattern::Optional(a, b) => {
            not_exists_vars(a, out);
            not_exists_vars(b, out);
        }
        GraphPattern::Unit | GraphPattern::Bgp(_) => {}
    }
}

/// Detectable instantiations of every definition, each with the delta
/// triples consumed by its witnessing assignments.
pub fn detect(inst: &Instance) -> Detections {
    let old: HashSet<Triple> = inst.old.iter().cloned().collect();
    let new: HashSet<Triple> = inst.new.iter().cloned().collect();
    let mut out = Detections::new();
    for def in &inst.defs {
        let delta_vars: Vec<Variable> = def
            .delta_plus
            .iter()
            .chain(&def.delta_minus)
            .flat_map(|tp| tp.vars().cloned().collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut inner = BTreeSet::new();
        not_exists_vars(&def.cond_old, &mut inner);
        not_exists_vars(&def.cond_new, &mut inner);
        let mut cond_vars = def.cond_old.vars();
        cond_vars.extend(def.cond_new.vars());
        let outer: Vec<Variable> = cond_vars
            .into_iter()
            .filter(|v| {
                !delta_vars.contains(v) && (!inner.contains(v) || OUTER_LOCALS.contains(&v.name()))
            })
            .collect();
        for mu in extensions(&Assignment::new(), &delta_vars, &inst.terms) {
            let plus: Option<Vec<Triple>> =
                def.delta_plus.iter().map(|tp| ground(tp, &mu)).collect();
            let minus: Option<Vec<Triple>> =
                def.delta_minus.iter().map(|tp| ground(tp, &mu)).collect();
            let (Some(plus), Some(minus)) = (plus, minus) else {
                continue;
            };
            if !plus.iter().all(|t| new.contains(t) && !old.contains(t))
                || !minus.iter().all(|t| old.contains(t) && !new.contains(t))
            {
                continue;
            }
            let witnessed = extensions(&mu, &outer, &inst.terms).iter().any(|m| {
                holds(&def.cond_old, &old, m, &inst.terms)
                    && holds(&def.cond_new, &new, m, &inst.terms)
            });
            if !witnessed {
                continue;
            }
            let args: Vec<Term> = def.params.iter().map(|p| mu[&p.var].clone()).collect();
            out.entry((def.name.clone(), args))
                .or_default()
                .extend(plus.into_iter().chain(minus));
        }
    }
    out
}
