use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::error::PatternError;
use crate::rdf::{low_level_delta, Dataset, LowLevelDelta, TermId, Universe};

use super::{
    FilterExpr, GraphPattern, GraphSelector, Mapping, PatternTerm, TriplePattern, Variable,
};

/// The graphs a pattern can read: the two versions, the ontology of changes,
/// and the two halves of their low-level delta.
pub struct EvalContext {
    universe: Universe,
    old: Dataset,
    new: Dataset,
    ontology: Dataset,
    added: Dataset,
    deleted: Dataset,
    simple_layer: bool,
    setup_seconds: f64,
}

impl EvalContext {
    pub fn new(old: Dataset, new: Dataset) -> Self {
        Self::with_ontology(old, new, None)
    }

    /// Computes the delta and builds every lookup index up front, so later
    /// evaluation cost depends on matches rather than on graph size.
    pub fn with_ontology(old: Dataset, new: Dataset, ontology: Option<Dataset>) -> Self {
        let start = Instant::now();
        let universe = old.universe().clone();
        let new = if new.universe().same_as(&universe) {
            new
        } else {
            new.rehome(&universe)
        };
        let ontology = match ontology {
            Some(o) => o.rehome(&universe),
            None => Dataset::with_label(&universe, "ontology"),
        };
        let LowLevelDelta { added, deleted } = low_level_delta(&old, &new);
        rayon::join(
            || rayon::join(|| old.build_index(), || new.build_index()),
            || {
                added.build_index();
                deleted.build_index();
                ontology.build_index();
            },
        );
        EvalContext {
            universe,
            old,
            new,
            ontology,
            added,
            deleted,
            simple_layer: false,
            setup_seconds: start.elapsed().as_secs_f64(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn old(&self) -> &Dataset {
        &self.old
    }

    pub fn new_version(&self) -> &Dataset {
        &self.new
    }

    pub fn ontology(&self) -> &Dataset {
        &self.ontology
    }

    pub fn added(&self) -> &Dataset {
        &self.added
    }

    pub fn deleted(&self) -> &Dataset {
        &self.deleted
    }

    pub fn delta(&self) -> LowLevelDelta {
        LowLevelDelta {
            added: self.added.clone(),
            deleted: self.deleted.clone(),
        }
    }

    pub fn extend_ontology(&mut self, triples: &Dataset) {
        self.ontology.extend_from(triples);
    }

    /// Records that the simple detections of this version pair are in the
    /// ontology graph.
    pub fn mark_simple_layer(&mut self) {
        self.simple_layer = true;
    }

    pub fn has_simple_layer(&self) -> bool {
        self.simple_layer
    }

    /// Seconds spent computing the delta and building indexes.
    pub fn setup_seconds(&self) -> f64 {
        self.setup_seconds
    }

    pub fn graph(&self, selector: GraphSelector) -> &Dataset {
        match selector {
            GraphSelector::Old => &self.old,
            GraphSelector::New => &self.new,
            GraphSelector::Ontology => &self.ontology,
        }
    }

    fn physical(&self, g: Graph) -> &Dataset {
        match g {
            Graph::Old => &self.old,
            Graph::New => &self.new,
            Graph::Ontology => &self.ontology,
            Graph::Added => &self.added,
            Graph::Deleted => &self.deleted,
        }
    }
}

/// Solutions of `tp` over `ds`: exactly the mappings on `vars(tp)` whose
/// substitution is a triple of `ds`.
pub fn eval_triple_pattern(tp: &TriplePattern, ds: &Dataset) -> BTreeSet<Mapping> {
    let lookup = |p: &PatternTerm| match p {
        PatternTerm::Const(t) => ds.universe().lookup(t).map(Some).ok_or(()),
        PatternTerm::Var(_) => Ok(None),
    };
    let (Ok(s), Ok(p), Ok(o)) = (
        lookup(&tp.subject),
        lookup(&tp.predicate),
        lookup(&tp.object),
    ) else {
        return BTreeSet::new();
    };
    let mut out = BTreeSet::new();
    let positions = tp.positions();
    'triples: for raw in ds
        .index()
        .scan(s.map(TermId::get), p.map(TermId::get), o.map(TermId::get))
    {
        let mut mu = Mapping::new();
        for (pos, value) in positions.iter().zip(raw) {
            if let PatternTerm::Var(v) = pos {
                let term = ds
                    .universe()
                    .resolve(TermId::from_raw(value).expect("ids are non-zero"));
                match mu.get(v) {
                    Some(prev) if *prev != term => continue 'triples,
                    _ => {
                        mu.insert(v.clone(), term);
                    }
                }
            }
        }
        out.insert(mu);
    }
    out
}

pub fn eval_graph_pattern(
    gp: &GraphPattern,
    ctx: &EvalContext,
) -> Result<BTreeSet<Mapping>, PatternError> {
    eval_graph_pattern_with(gp, ctx, &Mapping::new())
}

/// Evaluates `gp` with the bindings of `seed` substituted in.
pub fn eval_graph_pattern_with(
    gp: &GraphPattern,
    ctx: &EvalContext,
    seed: &Mapping,
) -> Result<BTreeSet<Mapping>, PatternError> {
    let prebound: Vec<Variable> = seed.iter().map(|(v, _)| v.clone()).collect();
    let plan = Plan::compile(gp, ctx, &prebound)?;
    let mut row = plan.empty_row();
    for (v, t) in seed.iter() {
        row[plan.slot(v).expect("seed variables have slots")] = ctx.universe.intern(t).get();
    }
    Ok(plan
        .run(ctx, vec![row])
        .into_iter()
        .map(|r| plan.decode(ctx, &r))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Graph {
    Old,
    New,
    Ontology,
    Added,
    Deleted,
}

impl From<GraphSelector> for Graph {
    fn from(s: GraphSelector) -> Self {
        match s {
            GraphSelector::Old => Graph::Old,
            GraphSelector::New => Graph::New,
            GraphSelector::Ontology => Graph::Ontology,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pos {
    Slot(usize),
    Const(u32),
}

#[derive(Debug, Clone)]
struct Tp {
    graph: Graph,
    terms: [Pos; 3],
}

#[derive(Debug, Clone)]
enum Cond {
    Eq(Pos, Pos),
    Neq(Pos, Pos),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

#[derive(Debug, Clone)]
enum Node {
    Unit,
    Bgp(Vec<Tp>),
    Join(Vec<Node>),
    Union(Vec<Node>),
    Optional(Box<Node>, Box<Node>),
    Filter(Box<Node>, Cond),
    NotExists(Box<Node>, Box<Node>),
}

type Row = Vec<u32>;
type Slots = BTreeSet<usize>;

/// A pattern lowered onto slot-indexed rows and interned constants, with
/// join children ordered for evaluation.
pub(crate) struct Plan {
    root: Node,
    vars: Vec<Variable>,
    slots: BTreeMap<Variable, usize>,
}

impl Plan {
    pub(crate) fn compile(
        gp: &GraphPattern,
        ctx: &EvalContext,
        prebound: &[Variable],
    ) -> Result<Plan, PatternError> {
        let mut vars: Vec<Variable> = prebound.to_vec();
        for v in gp.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let slots: BTreeMap<Variable, usize> = vars
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let lowering = Lowering {
            slots: &slots,
            universe: &ctx.universe,
        };
        let mut root = lowering.lower(gp, None)?;
        let mut bound: Slots = prebound.iter().map(|v| slots[v]).collect();
        order(&mut root, &mut bound, ctx);
        Ok(Plan { root, vars, slots })
    }

    pub(crate) fn slot(&self, v: &Variable) -> Option<usize> {
        self.slots.get(v).copied()
    }

    pub(crate) fn empty_row(&self) -> Row {
        vec![0; self.vars.len()]
    }

    pub(crate) fn run(&self, ctx: &EvalContext, seeds: Vec<Row>) -> Vec<Row> {
        Exec { ctx }.eval(&self.root, seeds)
    }

    pub(crate) fn decode(&self, ctx: &EvalContext, row: &Row) -> Mapping {
        self.vars
            .iter()
            .zip(row)
            .filter_map(|(v, &id)| {
                TermId::from_raw(id).map(|id| (v.clone(), ctx.universe.resolve(id)))
            })
            .collect()
    }
}

struct Lowering<'a> {
    slots: &'a BTreeMap<Variable, usize>,
    universe: &'a Universe,
}

impl Lowering<'_> {
    fn pos(&self, p: &PatternTerm) -> Pos {
        match p {
            PatternTerm::Var(v) => Pos::Slot(self.slots[v]),
            PatternTerm::Const(t) => Pos::Const(self.universe.intern(t).get()),
        }
    }

    fn cond(&self, f: &FilterExpr) -> Cond {
        match f {
            FilterExpr::Eq(a, b) => Cond::Eq(self.pos(a), self.pos(b)),
            FilterExpr::Neq(a, b) => Cond::Neq(self.pos(a), self.pos(b)),
            FilterExpr::And(xs) => Cond::And(xs.iter().map(|x| self.cond(x)).collect()),
            FilterExpr::Or(xs) => Cond::Or(xs.iter().map(|x| self.cond(x)).collect()),
        }
    }

    fn lower(&self, gp: &GraphPattern, scope: Option<Graph>) -> Result<Node, PatternError> {
        Ok(match gp {
            GraphPattern::Unit => Node::Unit,
            GraphPattern::Scoped(sel, inner) => {
                if scope.is_some() {
                    return Err(PatternError::MalformedPattern(
                        "graph scope nested inside another graph scope".into(),
                    ));
                }
                self.lower(inner, Some((*sel).into()))?
            }
            GraphPattern::Bgp(tps) if tps.is_empty() => Node::Unit,
            GraphPattern::Bgp(tps) => {
                let Some(graph) = scope else {
                    return Err(PatternError::MalformedPattern(format!(
                        "triple pattern `{}` is not inside a graph scope",
                        tps[0]
                    )));
                };
                Node::Bgp(
                    tps.iter()
                        .map(|tp| Tp {
                            graph,
                            terms: [
                                self.pos(&tp.subject),
                                self.pos(&tp.predicate),
                                self.pos(&tp.object),
                            ],
                        })
                        .collect(),
                )
            }
            GraphPattern::Join(xs) => {
                let mut bgp = Vec::new();
                let mut rest = Vec::new();
                for x in xs {
                    flatten(self.lower(x, scope)?, &mut bgp, &mut rest);
                }
                if !bgp.is_empty() {
                    rest.insert(0, Node::Bgp(bgp));
                }
                match rest.len() {
                    0 => Node::Unit,
                    1 => rest.pop().expect("one child"),
                    _ => Node::Join(rest),
                }
            }
            GraphPattern::Union(a, b) => {
                Node::Union(vec![self.lower(a, scope)?, self.lower(b, scope)?])
            }
            GraphPattern::Optional(a, b) => Node::Optional(
                Box::new(self.lower(a, scope)?),
                Box::new(self.lower(b, scope)?),
            ),
            GraphPattern::Filter(p, f) => {
                Node::Filter(Box::new(self.lower(p, scope)?), self.cond(f))
            }
            GraphPattern::NotExists(a, b) => {
                delta_rewrite(self.lower(a, scope)?, self.lower(b, scope)?)
            }
        })
    }
}

fn flatten(node: Node, bgp: &mut Vec<Tp>, rest: &mut Vec<Node>) {
    match node {
        Node::Unit => {}
        Node::Bgp(tps) => bgp.extend(tps),
        Node::Join(xs) => {
            for x in xs {
                flatten(x, bgp, rest);
            }
        }
        other => rest.push(other),
    }
}

/// `L FILTER NOT EXISTS { GRAPH old { tp } }` with `tp` matched in NEW by `L`
/// is a lookup of `tp` in the added triples; symmetrically for deletions.
fn delta_rewrite(mut left: Node, right: Node) -> Node {
    let guard = match &right {
        Node::Bgp(tps) if tps.len() == 1 => tps[0].clone(),
        _ => return Node::NotExists(Box::new(left), Box::new(right)),
    };
    let (matched_in, virtual_graph) = match guard.graph {
        Graph::Old => (Graph::New, Graph::Added),
        Graph::New => (Graph::Old, Graph::Deleted),
        _ => return Node::NotExists(Box::new(left), Box::new(right)),
    };
    let tps = match &mut left {
        Node::Bgp(tps) => Some(tps),
        Node::Join(xs) => xs.iter_mut().find_map(|x| match x {
            Node::Bgp(tps) => Some(tps),
            _ => None,
        }),
        _ => None,
    };
    if let Some(tp) = tps.and_then(|tps| {
        tps.iter_mut()
            .find(|tp| tp.graph == matched_in && tp.terms == guard.terms)
    }) {
        tp.graph = virtual_graph;
        return left;
    }
    Node::NotExists(Box::new(left), Box::new(right))
}

fn vars_of(node: &Node, out: &mut Slots) {
    let mut pos = |p: &Pos| {
        if let Pos::Slot(i) = p {
            out.insert(*i);
        }
    };
    fn cond_vars(c: &Cond, f: &mut dyn FnMut(&Pos)) {
        match c {
            Cond::Eq(a, b) | Cond::Neq(a, b) => {
                f(a);
                f(b);
            }
            Cond::And(xs) | Cond::Or(xs) => xs.iter().for_each(|x| cond_vars(x, f)),
        }
    }
    match node {
        Node::Unit => {}
        Node::Bgp(tps) => tps.iter().flat_map(|tp| tp.terms.iter()).for_each(&mut pos),
        Node::Join(xs) | Node::Union(xs) => xs.iter().for_each(|x| vars_of(x, out)),
        Node::Optional(a, b) | Node::NotExists(a, b) => {
            vars_of(a, out);
            vars_of(b, out);
        }
        Node::Filter(p, c) => {
            cond_vars(c, &mut pos);
            vars_of(p, out);
        }
    }
}

fn certain(node: &Node) -> Slots {
    match node {
        Node::Unit => Slots::new(),
        Node::Bgp(_) => {
            let mut out = Slots::new();
            vars_of(node, &mut out);
            out
        }
        Node::Join(xs) => xs.iter().flat_map(certain).collect(),
        Node::Union(xs) => {
            let mut it = xs.iter().map(certain);
            let first = it.next().unwrap_or_default();
            it.fold(first, |acc, s| acc.intersection(&s).copied().collect())
        }
        Node::Optional(a, _) | Node::Filter(a, _) | Node::NotExists(a, _) => certain(a),
    }
}

/// Variables a node reads without binding them itself.
fn needs(node: &Node) -> Slots {
    let mut all = Slots::new();
    vars_of(node, &mut all);
    let sure = certain(node);
    all.difference(&sure).copied().collect()
}

fn estimate(node: &Node, bound: &Slots, ctx: &EvalContext) -> f64 {
    match node {
        Node::Unit => 1.0,
        Node::Bgp(tps) => tps
            .iter()
            .map(|tp| {
                let key = |p: &Pos| match p {
                    Pos::Const(c) => Some(*c),
                    Pos::Slot(_) => None,
                };
                let n = ctx.physical(tp.graph).index().count(
                    key(&tp.terms[0]),
                    key(&tp.terms[1]),
                    key(&tp.terms[2]),
                ) as f64;
                let joined = tp
                    .terms
                    .iter()
                    .filter(|p| matches!(p, Pos::Slot(i) if bound.contains(i)))
                    .count();
                n / 1000f64.powi(joined as i32)
            })
            .fold(f64::INFINITY, f64::min),
        Node::Join(xs) => xs
            .iter()
            .map(|x| estimate(x, bound, ctx))
            .fold(f64::INFINITY, f64::min),
        Node::Union(xs) => xs.iter().map(|x| estimate(x, bound, ctx)).sum(),
        Node::Optional(a, _) | Node::Filter(a, _) | Node::NotExists(a, _) => {
            estimate(a, bound, ctx)
        }
    }
}

/// Orders join children so that a child reading a variable some sibling can
/// bind runs after that sibling, then greedily by estimated size.
fn order(node: &mut Node, bound: &mut Slots, ctx: &EvalContext) {
    match node {
        Node::Unit | Node::Bgp(_) => {
            bound.extend(certain(node));
        }
        Node::Join(children) => {
            let mut possible = bound.clone();
            for c in children.iter() {
                possible.extend(certain(c));
            }
            let mut pending: Vec<Node> = std::mem::take(children);
            let mut ordered = Vec::with_capacity(pending.len());
            while !pending.is_empty() {
                let ready = |c: &Node| {
                    needs(c)
                        .iter()
                        .all(|v| !possible.contains(v) || bound.contains(v))
                };
                let pick = (0..pending.len())
                    .filter(|&i| ready(&pending[i]))
                    .min_by(|&i, &j| {
                        let key = |k: usize| {
                            let c = &pending[k];
                            let pruning_only = certain(c).is_subset(bound);
                            (!pruning_only, estimate(c, bound, ctx))
                        };
                        let (a, b) = (key(i), key(j));
                        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(i.cmp(&j))
                    })
                    .unwrap_or(0);
                let mut child = pending.remove(pick);
                order(&mut child, bound, ctx);
                ordered.push(child);
            }
            *children = ordered;
        }
        Node::Union(xs) => {
            let mut common: Option<Slots> = None;
            for x in xs.iter_mut() {
                let mut b = bound.clone();
                order(x, &mut b, ctx);
                common = Some(match common {
                    None => b,
                    Some(c) => c.intersection(&b).copied().collect(),
                });
            }
            bound.extend(common.unwrap_or_default());
        }
        Node::Optional(a, b) | Node::NotExists(a, b) => {
            order(a, bound, ctx);
            let mut inner = bound.clone();
            order(b, &mut inner, ctx);
        }
        Node::Filter(p, _) => order(p, bound, ctx),
    }
}

struct Exec<'a> {
    ctx: &'a EvalContext,
}

impl Exec<'_> {
    fn eval(&self, node: &Node, rows: Vec<Row>) -> Vec<Row> {
        if rows.is_empty() {
            return rows;
        }
        match node {
            Node::Unit => rows,
            Node::Bgp(tps) => {
                let mut out = Vec::new();
                let all = if tps.len() >= 64 {
                    u64::MAX
                } else {
                    (1u64 << tps.len()) - 1
                };
                for mut row in rows {
                    self.extend(tps, all, &mut row, &mut out, false);
                }
                out
            }
            Node::Join(xs) => xs.iter().fold(rows, |acc, x| self.eval(x, acc)),
            Node::Union(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.extend(self.eval(x, rows.clone()));
                }
                out.sort_unstable();
                out.dedup();
                out
            }
            Node::Optional(a, b) => {
                let mut out = Vec::new();
                for row in self.eval(a, rows) {
                    let ext = self.eval(b, vec![row.clone()]);
                    if ext.is_empty() {
                        out.push(row);
                    } else {
                        out.extend(ext);
                    }
                }
                out
            }
            Node::Filter(p, c) => {
                let mut out = self.eval(p, rows);
                out.retain(|r| holds(c, r));
                out
            }
            Node::NotExists(a, b) => {
                let mut out = self.eval(a, rows);
                out.retain(|r| !self.exists(b, r));
                out
            }
        }
    }

    fn exists(&self, node: &Node, row: &Row) -> bool {
        match node {
            Node::Unit => true,
            Node::Bgp(tps) => {
                let all = if tps.len() >= 64 {
                    u64::MAX
                } else {
                    (1u64 << tps.len()) - 1
                };
                let mut scratch = row.clone();
                self.extend(tps, all, &mut scratch, &mut Vec::new(), true)
            }
            _ => !self.eval(node, vec![row.clone()]).is_empty(),
        }
    }

    fn key(&self, p: Pos, row: &Row) -> Option<u32> {
        match p {
            Pos::Const(c) => Some(c),
            Pos::Slot(i) => (row[i] != 0).then_some(row[i]),
        }
    }

    /// Extends `row` by the remaining patterns of a basic pattern, always
    /// matching next the pattern with the fewest candidates under the current
    /// bindings. Returns whether any solution was found.
    fn extend(
        &self,
        tps: &[Tp],
        remaining: u64,
        row: &mut Row,
        out: &mut Vec<Row>,
        first_only: bool,
    ) -> bool {
        if remaining == 0 {
            if !first_only {
                out.push(row.clone());
            }
            return true;
        }
        let mut best: Option<(usize, usize)> = None;
        for (i, tp) in tps.iter().enumerate() {
            if remaining & (1 << i) == 0 {
                continue;
            }
            let [s, p, o] = tp.terms.map(|t| self.key(t, row));
            let n = self.ctx.physical(tp.graph).index().count(s, p, o);
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((i, n));
            }
            if n == 0 {
                return false;
            }
        }
        let (i, _) = best.expect("remaining is non-empty");
        let tp = &tps[i];
        let [s, p, o] = tp.terms.map(|t| self.key(t, row));
        let rest = remaining & !(1 << i);
        let mut found = false;
        let mut fresh: [usize; 3] = [usize::MAX; 3];
        for triple in self.ctx.physical(tp.graph).index().scan(s, p, o) {
            let mut ok = true;
            let mut n_fresh = 0;
            for (k, pos) in tp.terms.iter().enumerate() {
                if let Pos::Slot(slot) = *pos {
                    if row[slot] == 0 {
                        row[slot] = triple[k];
                        fresh[n_fresh] = slot;
                        n_fresh += 1;
                    } else if row[slot] != triple[k] {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.extend(tps, rest, row, out, first_only) {
                found = true;
            }
            for &slot in &fresh[..n_fresh] {
                row[slot] = 0;
            }
            if found && first_only {
                return true;
            }
        }
        found
    }
}

fn holds(c: &Cond, row: &Row) -> bool {
    let val = |p: &Pos| match *p {
        Pos::Const(c) => Some(c),
        Pos::Slot(i) => (row[i] != 0).then_some(row[i]),
    };
    match c {
        Cond::Eq(a, b) => matches!((val(a), val(b)), (Some(x), Some(y)) if x == y),
        Cond::Neq(a, b) => matches!((val(a), val(b)), (Some(x), Some(y)) if x != y),
        Cond::And(xs) => xs.iter().all(|x| holds(x, row)),
        Cond::Or(xs) => xs.iter().any(|x| holds(x, row)),
    }
}
