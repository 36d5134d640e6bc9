//! Simple-change detection with triple consumption, the completeness and
//! unambiguity checks, and priority-tiered complex-change detection.

mod instance;
mod report;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{DetectionError, PatternError};
use crate::language::{
    ChangeLanguage, CompiledComplex, CompiledSimple, NEW_VERSION_VAR, OLD_VERSION_VAR,
};
use crate::ontology::{emit_associations, emit_detections, OntologyNamespace};
use crate::pattern::{EvalContext, PatternTerm, Plan, TriplePattern, Variable};
use crate::rdf::{Dataset, LowLevelDelta, Term, TermId, Triple};

pub(crate) use instance::digest;
pub use instance::{
    AssociationStore, ChangeInstantiation, ChangeKind, ConsumptionMap, GroundAssociation,
    VersionPair,
};
pub use report::{DetectionReport, Timings};

/// The version pair named by the labels of the context's two versions.
pub fn versions_of(ctx: &EvalContext) -> VersionPair {
    VersionPair::new(ctx.old().label(), ctx.new_version().label())
}

#[derive(Debug, Clone, Default)]
pub struct SimpleDetection {
    pub instantiations: BTreeSet<ChangeInstantiation>,
    pub consumption: ConsumptionMap,
}

#[derive(Debug, Clone, Default)]
pub struct ComplexDetection {
    pub instantiations: BTreeSet<ChangeInstantiation>,
    pub consumption: ConsumptionMap,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy)]
enum At {
    Slot(usize),
    Id(u32),
}

fn lower(tp: &TriplePattern, plan: &Plan, ctx: &EvalContext) -> [At; 3] {
    tp.positions().map(|p| match p {
        PatternTerm::Var(v) => At::Slot(plan.slot(v).expect("pattern variables have slots")),
        PatternTerm::Const(t) => At::Id(ctx.universe().intern(t).get()),
    })
}

fn id(raw: u32) -> TermId {
    TermId::from_raw(raw).expect("bound values are non-zero")
}

type Witnesses = BTreeMap<Vec<u32>, BTreeSet<[u32; 3]>>;

/// Distinct parameter bindings of one simple change, each with the delta
/// triples consumed by its witnessing solutions.
fn simple_witnesses(c: &CompiledSimple, ctx: &EvalContext) -> Result<Witnesses, PatternError> {
    let plan = Plan::compile(&c.pattern, ctx, &[])?;
    let params: Vec<usize> = c
        .def
        .params
        .iter()
        .map(|p| plan.slot(&p.var).expect("parameters occur in the pattern"))
        .collect();
    let consumed: Vec<[At; 3]> = c
        .def
        .delta_plus
        .iter()
        .chain(&c.def.delta_minus)
        .map(|tp| lower(tp, &plan, ctx))
        .collect();
    let mut out = Witnesses::new();
    for row in plan.run(ctx, vec![plan.empty_row()]) {
        let args: Vec<u32> = params.iter().map(|&s| row[s]).collect();
        if args.contains(&0) {
            continue;
        }
        let triples = out.entry(args).or_default();
        for tp in &consumed {
            triples.insert(tp.map(|a| match a {
                At::Slot(s) => row[s],
                At::Id(i) => i,
            }));
        }
    }
    Ok(out)
}

/// Evaluates every simple change over the context and records, for each
/// detected instantiation, the delta triples its solutions consume.
pub fn detect_simple(
    lang: &ChangeLanguage,
    ctx: &EvalContext,
) -> Result<SimpleDetection, DetectionError> {
    let versions = versions_of(ctx);
    let changes: Vec<&CompiledSimple> = lang.simple_changes().collect();
    let raw: Vec<Witnesses> = changes
        .par_iter()
        .map(|c| simple_witnesses(c, ctx))
        .collect::<Result<_, _>>()?;
    let universe = ctx.universe();
    let decoded: Vec<Vec<(ChangeInstantiation, Vec<Triple>)>> = changes
        .par_iter()
        .zip(raw)
        .map(|(c, witnesses)| {
            witnesses
                .into_iter()
                .map(|(args, triples)| {
                    let args = args.into_iter().map(|a| universe.resolve(id(a))).collect();
                    let inst = ChangeInstantiation::new(
                        &c.def.name,
                        ChangeKind::Simple,
                        args,
                        versions.clone(),
                    );
                    let triples = triples
                        .into_iter()
                        .map(|t| ctx.old().decode(t.map(id)))
                        .collect();
                    (inst, triples)
                })
                .collect()
        })
        .collect();
    let mut out = SimpleDetection::default();
    for (inst, triples) in decoded.into_iter().flatten() {
        for t in triples {
            out.consumption.record_triple(t, inst.clone());
        }
        out.instantiations.insert(inst);
    }
    Ok(out)
}

fn delta_triples(delta: &LowLevelDelta) -> impl Iterator<Item = Triple> + '_ {
    delta.added.iter().chain(delta.deleted.iter())
}

/// Delta triples that no detected change consumes.
pub fn check_completeness(consumption: &ConsumptionMap, delta: &LowLevelDelta) -> BTreeSet<Triple> {
    delta_triples(delta)
        .filter(|t| consumption.consumers_of(t).next().is_none())
        .collect()
}

/// Delta triples consumed by two or more distinct instantiations.
pub fn check_unambiguity(
    consumption: &ConsumptionMap,
    delta: &LowLevelDelta,
) -> BTreeMap<Triple, BTreeSet<ChangeInstantiation>> {
    delta_triples(delta)
        .filter_map(|t| {
            let consumers: BTreeSet<ChangeInstantiation> =
                consumption.consumers_of(&t).cloned().collect();
            (consumers.len() > 1).then_some((t, consumers))
        })
        .collect()
}

struct ComplexMatches {
    found: BTreeMap<Vec<u32>, BTreeSet<u32>>,
    shared: BTreeSet<Vec<u32>>,
    unbound: bool,
}

fn complex_matches(
    c: &CompiledComplex,
    ctx: &EvalContext,
    seed: &[(Variable, u32)],
) -> Result<ComplexMatches, PatternError> {
    let prebound: Vec<Variable> = seed.iter().map(|(v, _)| v.clone()).collect();
    let plan = Plan::compile(&c.pattern, ctx, &prebound)?;
    let mut row = plan.empty_row();
    for (v, value) in seed {
        if let Some(s) = plan.slot(v) {
            row[s] = *value;
        }
    }
    let params: Vec<Option<usize>> = c.def.params.iter().map(|p| plan.slot(p)).collect();
    let refs: Vec<usize> = (0..c.def.consumes.len())
        .map(|i| {
            plan.slot(&Variable::new(format!("__sc{i}")))
                .expect("reference variables have slots")
        })
        .collect();
    let mut out = ComplexMatches {
        found: BTreeMap::new(),
        shared: BTreeSet::new(),
        unbound: false,
    };
    for row in plan.run(ctx, vec![row]) {
        let args: Option<Vec<u32>> = params
            .iter()
            .map(|s| s.map(|s| row[s]).filter(|&v| v != 0))
            .collect();
        let Some(args) = args else {
            out.unbound = true;
            continue;
        };
        let consumed: Vec<u32> = refs.iter().map(|&s| row[s]).collect();
        let distinct: BTreeSet<u32> = consumed.iter().copied().collect();
        if distinct.len() < consumed.len() {
            out.shared.insert(args.clone());
        }
        out.found.entry(args).or_default().extend(distinct);
    }
    Ok(out)
}

/// Detects complex changes tier by tier, highest priority first. Each
/// tier sees the simple instantiations left unconsumed by the tiers above
/// it; its own `consumes` edges are written to the ontology graph before
/// the next tier runs. Instantiations in the same tier never suppress each
/// other, and a simple instantiation consumed twice within a tier is
/// reported as a warning.
pub fn detect_complex(
    lang: &ChangeLanguage,
    ctx: &mut EvalContext,
    simple: &BTreeSet<ChangeInstantiation>,
    assoc: &AssociationStore,
    ns: &OntologyNamespace,
) -> Result<ComplexDetection, DetectionError> {
    let versions = versions_of(ctx);
    if !ctx.has_simple_layer() {
        return Err(DetectionError::MissingSimpleLayer {
            old: versions.old.to_string(),
            new: versions.new.to_string(),
        });
    }
    let universe = ctx.universe().clone();
    let mut pair_assoc = AssociationStore::new();
    pair_assoc.extend(&versions, assoc.for_pair(&versions).cloned());
    if !pair_assoc.is_empty() {
        ctx.extend_ontology(&emit_associations(&pair_assoc, ns, &universe));
    }
    let by_node: HashMap<u32, &ChangeInstantiation> = simple
        .iter()
        .map(|s| {
            (
                universe
                    .intern(&Term::Iri(ns.detection(s.stable_id())))
                    .get(),
                s,
            )
        })
        .collect();
    let seed = [
        (
            Variable::new(OLD_VERSION_VAR),
            universe.intern(&Term::Iri(ns.version(&versions.old))).get(),
        ),
        (
            Variable::new(NEW_VERSION_VAR),
            universe.intern(&Term::Iri(ns.version(&versions.new))).get(),
        ),
    ];
    let mut out = ComplexDetection::default();
    for (priority, tier) in lang.priority_tiers() {
        let matches: Vec<ComplexMatches> = tier
            .par_iter()
            .map(|c| complex_matches(c, ctx, &seed))
            .collect::<Result<_, _>>()?;
        let mut tier_insts = Vec::new();
        let mut tier_consumption = ConsumptionMap::new();
        for (c, m) in tier.iter().zip(matches) {
            if m.unbound {
                out.warnings.push(format!(
                    "{}: solutions leaving a parameter unbound were ignored",
                    c.def.name
                ));
            }
            for (args, consumed) in m.found {
                let shared = m.shared.contains(&args);
                let terms = args.into_iter().map(|a| universe.resolve(id(a))).collect();
                let inst = ChangeInstantiation::new(
                    &c.def.name,
                    ChangeKind::Complex,
                    terms,
                    versions.clone(),
                );
                if shared {
                    out.warnings.push(format!(
                        "{inst} consumes one simple instantiation through several references"
                    ));
                }
                for node in consumed {
                    let s = by_node
                        .get(&node)
                        .expect("consumed individuals come from the simple layer");
                    tier_consumption.record_simple((*s).clone(), inst.clone());
                }
                tier_insts.push(inst);
            }
        }
        for (s, consumers) in tier_consumption.simple_consumers() {
            if consumers.len() > 1 {
                let names: Vec<String> = consumers.iter().map(ToString::to_string).collect();
                out.warnings.push(format!(
                    "equal-priority conflict at priority {priority}: {s} is consumed by {}",
                    names.join(" and ")
                ));
            }
        }
        if !tier_insts.is_empty() {
            let triples: Dataset =
                emit_detections(&tier_insts, &tier_consumption, lang, ns, &universe)
                    .expect("complex changes of the language have classes");
            ctx.extend_ontology(&triples);
        }
        out.instantiations.extend(tier_insts);
        out.consumption.merge(tier_consumption);
    }
    Ok(out)
}
