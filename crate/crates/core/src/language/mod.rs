//! The language of changes: simple and complex change definitions, their
//! validation and their compilation into detection patterns.

mod compile;
pub mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{LanguageError, PatternError};
use crate::pattern::{GraphPattern, PatternTerm, TriplePattern, Variable};

pub use compile::{compile_complex, compile_simple, NEW_VERSION_VAR, OLD_VERSION_VAR};

/// Whether a parameter ranges over resources or literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamKind {
    Resource,
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub var: Variable,
    pub kind: ParamKind,
}

impl Param {
    pub fn resource(name: &str) -> Self {
        Param {
            var: Variable::new(name),
            kind: ParamKind::Resource,
        }
    }

    pub fn literal(name: &str) -> Self {
        Param {
            var: Variable::new(name),
            kind: ParamKind::Literal,
        }
    }
}

/// `c(p1..pn) = ⟨δ⁺, δ⁻, cond_old, cond_new⟩`. Conditions are written
/// without graph scopes; compilation places them in OLD and NEW.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleChangeDef {
    pub name: String,
    pub params: Vec<Param>,
    pub delta_plus: Vec<TriplePattern>,
    pub delta_minus: Vec<TriplePattern>,
    pub cond_old: GraphPattern,
    pub cond_new: GraphPattern,
}

impl SimpleChangeDef {
    pub fn new(name: impl Into<String>, params: &[&str]) -> Self {
        SimpleChangeDef {
            name: name.into(),
            params: params.iter().map(|p| Param::resource(p)).collect(),
            delta_plus: Vec::new(),
            delta_minus: Vec::new(),
            cond_old: GraphPattern::Unit,
            cond_new: GraphPattern::Unit,
        }
    }

    pub fn added(mut self, tp: TriplePattern) -> Self {
        self.delta_plus.push(tp);
        self
    }

    pub fn deleted(mut self, tp: TriplePattern) -> Self {
        self.delta_minus.push(tp);
        self
    }

    pub fn cond_old(mut self, gp: GraphPattern) -> Self {
        self.cond_old = gp;
        self
    }

    pub fn cond_new(mut self, gp: GraphPattern) -> Self {
        self.cond_new = gp;
        self
    }

    /// Marks the named parameter as literal-valued.
    pub fn literal_param(mut self, name: &str) -> Self {
        let v = Variable::new(name);
        for p in &mut self.params {
            if p.var == v {
                p.kind = ParamKind::Literal;
            }
        }
        self
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn param_vars(&self) -> Vec<Variable> {
        self.params.iter().map(|p| p.var.clone()).collect()
    }

    pub fn body_vars(&self) -> BTreeSet<Variable> {
        let mut vars = self.cond_old.vars();
        vars.extend(self.cond_new.vars());
        for tp in self.delta_plus.iter().chain(&self.delta_minus) {
            vars.extend(tp.vars().cloned());
        }
        vars
    }
}

/// `c'(a1..am)` inside a complex change: a simple change applied to
/// variables or constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleChangeRef {
    pub change: String,
    pub args: Vec<PatternTerm>,
}

impl SimpleChangeRef {
    pub fn new(change: impl Into<String>, args: impl IntoIterator<Item = PatternTerm>) -> Self {
        SimpleChangeRef {
            change: change.into(),
            args: args.into_iter().collect(),
        }
    }
}

/// A rename `{v1} ⇝ {v2}`, split `{v0} ⇝ {v1..vn}` or merge `{v1..vn} ⇝ {v0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Association {
    pub from: Vec<PatternTerm>,
    pub to: Vec<PatternTerm>,
}

impl Association {
    pub fn new(
        from: impl IntoIterator<Item = PatternTerm>,
        to: impl IntoIterator<Item = PatternTerm>,
    ) -> Self {
        Association {
            from: from.into_iter().collect(),
            to: to.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Variable> {
        self.from
            .iter()
            .chain(&self.to)
            .filter_map(PatternTerm::as_var)
    }

    /// Checks the three admissible shapes, returning why it fails otherwise.
    pub fn shape_error(&self) -> Option<String> {
        check_shape(&self.from, &self.to)
    }
}

pub(crate) fn check_shape<T: PartialEq>(from: &[T], to: &[T]) -> Option<String> {
    if from.is_empty() || to.is_empty() {
        return Some("both sides must be non-empty".into());
    }
    if from.len() > 1 && to.len() > 1 {
        return Some("one side must have exactly one member".into());
    }
    let all: Vec<&T> = from.iter().chain(to).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[i] == all[j] {
                return Some("members must be pairwise distinct".into());
            }
        }
    }
    None
}

/// `c(p1..pn) = ⟨δs, cond_old, cond_new, A, P⟩`. Larger priorities win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexChangeDef {
    pub name: String,
    pub params: Vec<Variable>,
    pub consumes: Vec<SimpleChangeRef>,
    pub cond_old: GraphPattern,
    pub cond_new: GraphPattern,
    pub associations: Vec<Association>,
    pub priority: i64,
}

impl ComplexChangeDef {
    pub fn new(name: impl Into<String>, params: &[&str], priority: i64) -> Self {
        ComplexChangeDef {
            name: name.into(),
            params: params.iter().map(Variable::new).collect(),
            consumes: Vec::new(),
            cond_old: GraphPattern::Unit,
            cond_new: GraphPattern::Unit,
            associations: Vec::new(),
            priority,
        }
    }

    pub fn consumes(mut self, r: SimpleChangeRef) -> Self {
        self.consumes.push(r);
        self
    }

    pub fn cond_old(mut self, gp: GraphPattern) -> Self {
        self.cond_old = gp;
        self
    }

    pub fn cond_new(mut self, gp: GraphPattern) -> Self {
        self.cond_new = gp;
        self
    }

    pub fn association(mut self, a: Association) -> Self {
        self.associations.push(a);
        self
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn body_vars(&self) -> BTreeSet<Variable> {
        let mut vars = self.cond_old.vars();
        vars.extend(self.cond_new.vars());
        for r in &self.consumes {
            vars.extend(r.args.iter().filter_map(PatternTerm::as_var).cloned());
        }
        for a in &self.associations {
            vars.extend(a.vars().cloned());
        }
        vars
    }
}

#[derive(Debug, Clone)]
pub struct CompiledSimple {
    pub def: SimpleChangeDef,
    pub abbrev: String,
    pub pattern: GraphPattern,
}

#[derive(Debug, Clone)]
pub struct CompiledComplex {
    pub def: ComplexChangeDef,
    pub abbrev: String,
    /// Kinds of the parameters, taken from the simple-change parameters they
    /// are passed to.
    pub param_kinds: Vec<ParamKind>,
    pub pattern: GraphPattern,
}

/// Either kind of registered change.
#[derive(Debug, Clone, Copy)]
pub enum ChangeRef<'a> {
    Simple(&'a CompiledSimple),
    Complex(&'a CompiledComplex),
}

impl ChangeRef<'_> {
    pub fn abbrev(&self) -> &str {
        match self {
            ChangeRef::Simple(s) => &s.abbrev,
            ChangeRef::Complex(c) => &c.abbrev,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            ChangeRef::Simple(s) => s.def.arity(),
            ChangeRef::Complex(c) => c.def.arity(),
        }
    }
}

/// A name-indexed set of simple and complex changes.
#[derive(Debug, Clone, Default)]
pub struct ChangeLanguage {
    simple: BTreeMap<String, Arc<CompiledSimple>>,
    complex: BTreeMap<String, Arc<CompiledComplex>>,
    abbrevs: BTreeMap<String, String>,
}

/// Lowercase initials of the underscore-separated words of `name`, with a
/// two-letter form for the compound words the catalogs use.
pub fn abbreviation(name: &str) -> String {
    name.split('_')
        .filter(|w| !w.is_empty())
        .map(|w| match w {
            "Superclass" | "SuperClass" => "sc".to_string(),
            "Superproperty" | "SuperProperty" => "sp".to_string(),
            "Inscheme" | "InScheme" => "is".to_string(),
            w => w
                .chars()
                .next()
                .map(|c| c.to_ascii_lowercase())
                .into_iter()
                .collect(),
        })
        .collect()
}

fn reserved_check(
    change: &str,
    vars: impl IntoIterator<Item = Variable>,
) -> Result<(), LanguageError> {
    for v in vars {
        if v.is_reserved() {
            return Err(LanguageError::ReservedVariable {
                change: change.to_string(),
                var: v.name().to_string(),
            });
        }
    }
    Ok(())
}

fn unscoped(change: &str, gp: &GraphPattern) -> Result<(), LanguageError> {
    fn has_scope(gp: &GraphPattern) -> bool {
        match gp {
            GraphPattern::Scoped(..) => true,
            GraphPattern::Unit | GraphPattern::Bgp(_) => false,
            GraphPattern::Join(xs) => xs.iter().any(has_scope),
            GraphPattern::Filter(p, _) => has_scope(p),
            GraphPattern::Union(a, b)
            | GraphPattern::Optional(a, b)
            | GraphPattern::NotExists(a, b) => has_scope(a) || has_scope(b),
        }
    }
    if has_scope(gp) {
        return Err(LanguageError::Pattern {
            change: change.to_string(),
            source: PatternError::MalformedPattern("conditions must not name a graph".into()),
        });
    }
    Ok(())
}

impl ChangeLanguage {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_name(&self, name: &str) -> Result<String, LanguageError> {
        let valid = !name.is_empty()
            && name.starts_with(|c: char| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(LanguageError::InvalidName(name.to_string()));
        }
        if self.simple.contains_key(name) || self.complex.contains_key(name) {
            return Err(LanguageError::DuplicateName(name.to_string()));
        }
        let abbrev = abbreviation(name);
        if let Some(other) = self.abbrevs.get(&abbrev) {
            return Err(LanguageError::AbbrevCollision {
                change: name.to_string(),
                other: other.clone(),
                abbrev,
            });
        }
        Ok(abbrev)
    }

    pub fn register_simple(&mut self, def: SimpleChangeDef) -> Result<&mut Self, LanguageError> {
        let abbrev = self.check_name(&def.name)?;
        if def.delta_plus.is_empty() && def.delta_minus.is_empty() {
            return Err(LanguageError::EmptyDelta { change: def.name });
        }
        let body = def.body_vars();
        reserved_check(&def.name, body.iter().cloned().chain(def.param_vars()))?;
        for p in &def.params {
            if !body.contains(&p.var) {
                return Err(LanguageError::UnboundParam {
                    change: def.name.clone(),
                    param: p.var.name().to_string(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for p in &def.params {
            if !seen.insert(&p.var) {
                return Err(LanguageError::Pattern {
                    change: def.name.clone(),
                    source: PatternError::MalformedPattern(format!("parameter {} repeated", p.var)),
                });
            }
        }
        unscoped(&def.name, &def.cond_old)?;
        unscoped(&def.name, &def.cond_new)?;
        let pattern = compile_simple(&def);
        self.abbrevs.insert(abbrev.clone(), def.name.clone());
        self.simple.insert(
            def.name.clone(),
            Arc::new(CompiledSimple {
                def,
                abbrev,
                pattern,
            }),
        );
        Ok(self)
    }

    pub fn register_complex(&mut self, def: ComplexChangeDef) -> Result<&mut Self, LanguageError> {
        let abbrev = self.check_name(&def.name)?;
        let body = def.body_vars();
        reserved_check(
            &def.name,
            body.iter().cloned().chain(def.params.iter().cloned()),
        )?;
        let mut kinds: BTreeMap<Variable, ParamKind> = BTreeMap::new();
        for r in &def.consumes {
            let simple = self
                .simple
                .get(&r.change)
                .ok_or_else(|| LanguageError::UnknownSimpleChange(r.change.clone()))?;
            if simple.def.arity() != r.args.len() {
                return Err(LanguageError::ArityMismatch {
                    name: r.change.clone(),
                    expected: simple.def.arity(),
                    got: r.args.len(),
                });
            }
            for (arg, p) in r.args.iter().zip(&simple.def.params) {
                if let PatternTerm::Var(v) = arg {
                    kinds.entry(v.clone()).or_insert(p.kind);
                }
            }
        }
        for p in &def.params {
            if !body.contains(p) {
                return Err(LanguageError::UnboundParam {
                    change: def.name.clone(),
                    param: p.name().to_string(),
                });
            }
        }
        for a in &def.associations {
            if let Some(reason) = a.shape_error() {
                return Err(LanguageError::InvalidAssociation {
                    change: def.name.clone(),
                    reason,
                });
            }
        }
        unscoped(&def.name, &def.cond_old)?;
        unscoped(&def.name, &def.cond_new)?;
        let pattern = compile_complex(&def, self);
        let param_kinds = def
            .params
            .iter()
            .map(|p| kinds.get(p).copied().unwrap_or(ParamKind::Resource))
            .collect();
        self.abbrevs.insert(abbrev.clone(), def.name.clone());
        self.complex.insert(
            def.name.clone(),
            Arc::new(CompiledComplex {
                def,
                abbrev,
                param_kinds,
                pattern,
            }),
        );
        Ok(self)
    }

    pub fn simple(&self, name: &str) -> Option<&CompiledSimple> {
        self.simple.get(name).map(Arc::as_ref)
    }

    pub fn complex(&self, name: &str) -> Option<&CompiledComplex> {
        self.complex.get(name).map(Arc::as_ref)
    }

    pub fn get(&self, name: &str) -> Option<ChangeRef<'_>> {
        self.simple(name)
            .map(ChangeRef::Simple)
            .or_else(|| self.complex(name).map(ChangeRef::Complex))
    }

    /// Simple changes in name order.
    pub fn simple_changes(&self) -> impl Iterator<Item = &CompiledSimple> {
        self.simple.values().map(Arc::as_ref)
    }

    /// Complex changes in name order.
    pub fn complex_changes(&self) -> impl Iterator<Item = &CompiledComplex> {
        self.complex.values().map(Arc::as_ref)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.simple
            .keys()
            .chain(self.complex.keys())
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.simple.len() + self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Priority tiers of the complex changes, highest first; names sorted
    /// within each tier.
    pub fn priority_tiers(&self) -> Vec<(i64, Vec<&CompiledComplex>)> {
        let mut tiers: BTreeMap<std::cmp::Reverse<i64>, Vec<&CompiledComplex>> = BTreeMap::new();
        for c in self.complex_changes() {
            tiers
                .entry(std::cmp::Reverse(c.def.priority))
                .or_default()
                .push(c);
        }
        tiers.into_iter().map(|(p, cs)| (p.0, cs)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::{self, QB, RDF, RDFS};
    use crate::rdf::Term;

    fn v(n: &str) -> PatternTerm {
        PatternTerm::var(n)
    }

    fn attach_type_to_measure() -> SimpleChangeDef {
        SimpleChangeDef::new("Attach_Type_To_Measure", &["m", "t"])
            .added(TriplePattern::new(
                v("m"),
                vocab::iri(RDFS, "range"),
                v("t"),
            ))
            .cond_new(GraphPattern::bgp([TriplePattern::new(
                v("m"),
                vocab::iri(RDF, "type"),
                vocab::iri(QB, "MeasureProperty"),
            )]))
    }

    fn add_superclass() -> SimpleChangeDef {
        SimpleChangeDef::new("Add_Superclass", &["a", "b"]).added(TriplePattern::new(
            v("a"),
            vocab::iri(RDFS, "subClassOf"),
            v("b"),
        ))
    }

    #[test]
    fn registers_running_example() {
        let mut lang = ChangeLanguage::new();
        lang.register_simple(attach_type_to_measure()).unwrap();
        assert_eq!(
            lang.simple("Attach_Type_To_Measure").unwrap().abbrev,
            "attm"
        );
        assert!(matches!(
            lang.register_simple(attach_type_to_measure()),
            Err(LanguageError::DuplicateName(_))
        ));
    }

    #[test]
    fn unbound_param() {
        let def = SimpleChangeDef::new("Broken", &["x"]).added(TriplePattern::new(
            v("a"),
            vocab::iri(RDFS, "label"),
            v("b"),
        ));
        assert_eq!(
            ChangeLanguage::new().register_simple(def).unwrap_err(),
            LanguageError::UnboundParam {
                change: "Broken".into(),
                param: "x".into()
            }
        );
    }

    #[test]
    fn reserved_variables_rejected() {
        let def = SimpleChangeDef::new("Broken", &["__x"]).added(TriplePattern::new(
            v("__x"),
            vocab::iri(RDFS, "label"),
            v("b"),
        ));
        assert!(matches!(
            ChangeLanguage::new().register_simple(def),
            Err(LanguageError::ReservedVariable { .. })
        ));
    }

    #[test]
    fn complex_registration_errors() {
        let mut lang = ChangeLanguage::new();
        lang.register_simple(add_superclass()).unwrap();
        let obsolete =
            Term::iri("http://www.geneontology.org/formats/oboInOwl#ObsoleteClass").unwrap();
        let ok = ComplexChangeDef::new("Mark_as_Obsolete", &["cl"], 2)
            .consumes(SimpleChangeRef::new("Add_Superclass", [v("cl"), v("obs")]))
            .cond_old(GraphPattern::filter(
                GraphPattern::Unit,
                crate::pattern::FilterExpr::eq(Variable::new("obs"), obsolete),
            ));
        lang.register_complex(ok).unwrap();
        assert_eq!(lang.complex("Mark_as_Obsolete").unwrap().abbrev, "mao");

        let unknown = ComplexChangeDef::new("C1", &["x"], 1)
            .consumes(SimpleChangeRef::new("NoSuchChange", [v("x")]));
        assert_eq!(
            lang.register_complex(unknown).unwrap_err(),
            LanguageError::UnknownSimpleChange("NoSuchChange".into())
        );
        let arity = ComplexChangeDef::new("C2", &["x"], 1).consumes(SimpleChangeRef::new(
            "Add_Superclass",
            [v("x"), v("y"), v("z")],
        ));
        assert_eq!(
            lang.register_complex(arity).unwrap_err(),
            LanguageError::ArityMismatch {
                name: "Add_Superclass".into(),
                expected: 2,
                got: 3
            }
        );
        let bad_assoc = ComplexChangeDef::new("C3", &["x"], 1)
            .consumes(SimpleChangeRef::new("Add_Superclass", [v("x"), v("y")]))
            .association(Association::new([v("x")], [v("x")]));
        assert!(matches!(
            lang.register_complex(bad_assoc),
            Err(LanguageError::InvalidAssociation { .. })
        ));
    }

    #[test]
    fn abbreviations() {
        assert_eq!(abbreviation("Add_Superclass"), "asc");
        assert_eq!(abbreviation("Add_Inscheme"), "ais");
        assert_eq!(abbreviation("Delete_Inscheme"), "dis");
        assert_eq!(abbreviation("Delete_Instance"), "di");
        assert_eq!(abbreviation("Attach_Type_To_Measure"), "attm");
    }

    #[test]
    fn abbreviation_collision_is_an_error() {
        let mut lang = ChangeLanguage::new();
        lang.register_simple(add_superclass()).unwrap();
        let twin = SimpleChangeDef::new("Alter_Super_Class", &["a"]).added(TriplePattern::new(
            v("a"),
            vocab::iri(RDFS, "label"),
            v("b"),
        ));
        assert!(matches!(
            lang.register_simple(twin),
            Err(LanguageError::AbbrevCollision { .. })
        ));
    }

    #[test]
    fn association_shapes() {
        let a = |from: &[&str], to: &[&str]| {
            Association::new(from.iter().map(|x| v(x)), to.iter().map(|x| v(x)))
        };
        assert!(a(&["x"], &["y"]).shape_error().is_none());
        assert!(a(&["x"], &["y", "z"]).shape_error().is_none());
        assert!(a(&["x", "y"], &["z"]).shape_error().is_none());
        assert!(a(&["x"], &["x"]).shape_error().is_some());
        assert!(a(&["x", "y"], &["z", "w"]).shape_error().is_some());
        assert!(a(&["x"], &["y", "y"]).shape_error().is_some());
        assert!(a(&[], &["y"]).shape_error().is_some());
    }
}
