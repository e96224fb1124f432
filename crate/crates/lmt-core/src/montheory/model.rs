//! Models of monoidal theories in finite strict monoidal categories.

use serde::Serialize;
use thiserror::Error;

use super::{sort_of, Colour, MonTerm, MonTheory};
use crate::fincat::{Mor, Ob, StrictMonStructure};

/// Colours to objects and generators to morphisms.
#[derive(Clone, Debug)]
pub struct ModelData {
    pub target: StrictMonStructure,
    pub colours: Vec<Ob>,
    pub generators: Vec<Mor>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum ModelError {
    #[error("generator `{name}` is sent to a morphism of the wrong type")]
    BadGenerator { name: String },
    #[error("term is ill-sorted")]
    IllSorted,
    #[error("model has {got} entries for {want} {what}")]
    Arity { what: &'static str, got: usize, want: usize },
}

impl ModelData {
    pub fn word(&self, w: &[Colour]) -> Ob {
        w.iter().fold(self.target.unit, |acc, &c| self.target.ob(acc, self.colours[c]))
    }

    pub fn interpret(&self, th: &MonTheory, t: &MonTerm) -> Result<Mor, ModelError> {
        sort_of(&th.sig, t).map_err(|_| ModelError::IllSorted)?;
        Ok(self.eval(t))
    }

    fn eval(&self, t: &MonTerm) -> Mor {
        let c = &self.target.carrier;
        match t {
            MonTerm::Gen(g) => self.generators[*g],
            MonTerm::Id(a) => c.id(self.colours[*a]),
            MonTerm::IdEps => c.id(self.target.unit),
            MonTerm::Comp(a, b) => c.comp(self.eval(a), self.eval(b)),
            MonTerm::Tensor(a, b) => self.target.mor(self.eval(a), self.eval(b)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub errors: Vec<ModelError>,
    /// Names of equation instances that fail.
    pub failed: Vec<String>,
}

impl ModelReport {
    pub fn holds(&self) -> bool {
        self.errors.is_empty() && self.failed.is_empty()
    }
}

/// Checks generator types, then every equation instance.
pub fn check_model(th: &MonTheory, m: &ModelData) -> ModelReport {
    let mut rep = ModelReport::default();
    let (nc, ng) = (th.sig.colours.len(), th.sig.generators.len());
    if m.colours.len() != nc {
        rep.errors.push(ModelError::Arity { what: "colours", got: m.colours.len(), want: nc });
    }
    if m.generators.len() != ng {
        rep.errors.push(ModelError::Arity { what: "generators", got: m.generators.len(), want: ng });
    }
    if !rep.errors.is_empty() {
        return rep;
    }
    let c = &m.target.carrier;
    for (i, g) in th.sig.generators.iter().enumerate() {
        let f = m.generators[i];
        if c.dom(f) != m.word(&g.dom) || c.cod(f) != m.word(&g.cod) {
            rep.errors.push(ModelError::BadGenerator { name: g.name.clone() });
        }
    }
    if !rep.errors.is_empty() {
        return rep;
    }
    for e in th.instances() {
        if m.eval(&e.lhs) != m.eval(&e.rhs) {
            rep.failed.push(e.name);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::fixtures::cat_z2;
    use crate::montheory::theories::builtin_theory;

    #[test]
    fn z2_models_of_monoids() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let z2 = Arc::new(cat_z2());
        let s = z2.morphisms().find(|&f| !z2.is_identity(f)).unwrap();
        let target = StrictMonStructure::from_commutative_monoid(z2.clone());
        let m = |mm, uu| ModelData { target: target.clone(), colours: vec![0], generators: vec![mm, uu] };
        assert!(check_model(&th, &m(s, s)).holds());
        assert!(check_model(&th, &m(z2.id(0), z2.id(0))).holds());
        let bad = check_model(&th, &m(s, z2.id(0)));
        assert!(!bad.holds());
        assert!(bad.failed.contains(&"unit-l".to_string()));
        let short = ModelData { target, colours: vec![0], generators: vec![s] };
        assert!(!check_model(&th, &short).errors.is_empty());
    }
}
