//! The built-in simple-change languages for plain RDF and for Data Cube.

mod datacube;
mod rdf;

use std::fmt;
use std::str::FromStr;

use crate::language::{ChangeLanguage, SimpleChangeDef};
use crate::pattern::{FilterExpr, GraphPattern, PatternTerm, TriplePattern};
use crate::rdf::vocab;

pub use datacube::datacube_catalog;
pub use rdf::rdf_catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogId {
    RdfModel,
    DataCube,
}

impl CatalogId {
    pub fn language(self) -> ChangeLanguage {
        match self {
            CatalogId::RdfModel => rdf_catalog(),
            CatalogId::DataCube => datacube_catalog(),
        }
    }
}

impl FromStr for CatalogId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rdf" => Ok(CatalogId::RdfModel),
            "qb" => Ok(CatalogId::DataCube),
            other => Err(format!("unknown model `{other}` (expected rdf or qb)")),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogId::RdfModel => "rdf",
            CatalogId::DataCube => "qb",
        })
    }
}

fn v(name: &str) -> PatternTerm {
    PatternTerm::var(name)
}

fn c(ns: &str, local: &str) -> PatternTerm {
    PatternTerm::Const(vocab::term(ns, local))
}

fn tp(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> TriplePattern {
    TriplePattern::new(s, p, o)
}

fn bgp(tps: impl IntoIterator<Item = TriplePattern>) -> GraphPattern {
    GraphPattern::bgp(tps)
}

fn absent(gp: GraphPattern) -> GraphPattern {
    GraphPattern::not_exists(GraphPattern::Unit, gp)
}

fn only_if(expr: FilterExpr) -> GraphPattern {
    GraphPattern::filter(GraphPattern::Unit, expr)
}

/// An addition and its mirrored deletion: the same patterns consumed from
/// the other version, with the condition moved to that version.
struct Pair<'a> {
    add: &'a str,
    delete: &'a str,
    params: &'a [&'a str],
    literals: &'a [&'a str],
    delta: Vec<TriplePattern>,
    cond: GraphPattern,
}

impl Pair<'_> {
    fn register(self, lang: &mut ChangeLanguage) {
        let base = |name: &str| {
            let mut d = SimpleChangeDef::new(name, self.params);
            for l in self.literals {
                d = d.literal_param(l);
            }
            d
        };
        let mut add = base(self.add).cond_new(self.cond.clone());
        let mut del = base(self.delete).cond_old(self.cond);
        for t in self.delta {
            add = add.added(t.clone());
            del = del.deleted(t);
        }
        lang.register_simple(add)
            .expect("catalog definitions are valid");
        lang.register_simple(del)
            .expect("catalog definitions are valid");
    }
}
