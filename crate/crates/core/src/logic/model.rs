use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TbaError};
use crate::lattice::{Element, ElementRepr, Family, PointDomain};
use crate::operator::{Operator, TransformKind};
use crate::topology::{derive, Derived, OperatorRole};

use super::formula::UnOp;

/// Tables of every unary connective, computed from one closure operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semantics {
    pub derived: Derived,
    pub neg_c: Operator,
    pub neg_i: Operator,
    pub neg_ic: Operator,
    pub neg_ci: Operator,
    pub cons: Operator,
    pub det: Operator,
    pub undet: Operator,
    pub cnot: Operator,
}

impl Semantics {
    pub fn new(closure: &Operator) -> Self {
        let derived = Derived::from_closure(closure);
        let neg_c = closure.transform(TransformKind::DC);
        let neg_i = derived.i.transform(TransformKind::DC);
        let neg_ic = derived.i.compose(&neg_c).expect("same domain");
        let neg_ci = closure.compose(&neg_i).expect("same domain");
        let cons = derived.i.transform(TransformKind::FP);
        let det = closure.transform(TransformKind::FP);
        let undet = det.compl();
        let cnot = Operator::negation(closure.domain());
        Semantics { derived, neg_c, neg_i, neg_ic, neg_ci, cons, det, undet, cnot }
    }

    pub fn op(&self, op: UnOp) -> &Operator {
        match op {
            UnOp::CNot => &self.cnot,
            UnOp::NegC => &self.neg_c,
            UnOp::NegI => &self.neg_i,
            UnOp::NegIC => &self.neg_ic,
            UnOp::NegCI => &self.neg_ci,
            UnOp::Cons => &self.cons,
            UnOp::Det => &self.det,
            UnOp::Undet => &self.undet,
            UnOp::Box => &self.derived.i,
            UnOp::Dia => &self.derived.c,
            UnOp::Ext => &self.derived.e,
            UnOp::Bdr => &self.derived.b,
            UnOp::Frt => &self.derived.f,
        }
    }

    pub fn closure(&self) -> &Operator {
        &self.derived.c
    }

    pub fn interior(&self) -> &Operator {
        &self.derived.i
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Primitive {
    #[default]
    Closure,
    Interior,
}

/// A finite model: one primitive operator, a valuation, and named domains
/// for restricted quantifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    domain: PointDomain,
    primitive: Primitive,
    operator: Operator,
    sem: Semantics,
    pub valuation: BTreeMap<String, Element>,
    pub domains: BTreeMap<String, Family>,
    pub domain_functions: BTreeMap<String, Operator>,
    pub individuals: usize,
    pub predicates: BTreeMap<String, Vec<Element>>,
    pub individual_domains: BTreeMap<String, Vec<usize>>,
    pub individual_domain_functions: BTreeMap<String, Vec<Element>>,
}

impl Model {
    pub fn new(primitive: Primitive, operator: Operator) -> Self {
        let closure = match primitive {
            Primitive::Closure => operator.clone(),
            Primitive::Interior => derive(&operator, OperatorRole::Interior, OperatorRole::Closure),
        };
        Model {
            domain: operator.domain(),
            primitive,
            sem: Semantics::new(&closure),
            operator,
            valuation: BTreeMap::new(),
            domains: BTreeMap::new(),
            domain_functions: BTreeMap::new(),
            individuals: 0,
            predicates: BTreeMap::new(),
            individual_domains: BTreeMap::new(),
            individual_domain_functions: BTreeMap::new(),
        }
    }

    pub fn with_closure(c: Operator) -> Self {
        Model::new(Primitive::Closure, c)
    }

    pub fn with_interior(i: Operator) -> Self {
        Model::new(Primitive::Interior, i)
    }

    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    pub fn primitive(&self) -> Primitive {
        self.primitive
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn semantics(&self) -> &Semantics {
        &self.sem
    }

    pub fn set(&mut self, var: &str, value: Element) -> Result<&mut Self> {
        self.domain.check_same(value.domain())?;
        self.valuation.insert(var.to_string(), value);
        Ok(self)
    }

    pub fn valued(mut self, var: &str, points: &[usize]) -> Result<Self> {
        let e = self.domain.from_points(points)?;
        self.set(var, e)?;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    points: usize,
    #[serde(default)]
    primitive: Primitive,
    operator: Operator,
    #[serde(default)]
    valuation: BTreeMap<String, ElementRepr>,
    #[serde(default)]
    domains: BTreeMap<String, Vec<ElementRepr>>,
    #[serde(default)]
    domain_functions: BTreeMap<String, Operator>,
    #[serde(default, skip_serializing_if = "is_zero")]
    individuals: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    predicates: BTreeMap<String, Vec<ElementRepr>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    individual_domains: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    individual_domain_functions: BTreeMap<String, Vec<ElementRepr>>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let elems = |v: &[Element]| v.iter().map(|&e| ElementRepr::from(e)).collect::<Vec<_>>();
        ModelRepr {
            points: self.domain.points(),
            primitive: self.primitive,
            operator: self.operator.clone(),
            valuation: self.valuation.iter().map(|(k, &v)| (k.clone(), v.into())).collect(),
            domains: self.domains.iter().map(|(k, f)| (k.clone(), elems(f.members()))).collect(),
            domain_functions: self.domain_functions.clone(),
            individuals: self.individuals,
            predicates: self.predicates.iter().map(|(k, v)| (k.clone(), elems(v))).collect(),
            individual_domains: self.individual_domains.clone(),
            individual_domain_functions: self
                .individual_domain_functions
                .iter()
                .map(|(k, v)| (k.clone(), elems(v)))
                .collect(),
        }
        .serialize(s)
    }
}

fn resolve_all(d: PointDomain, v: &[ElementRepr]) -> Result<Vec<Element>> {
    v.iter().map(|r| r.resolve(d)).collect()
}

impl TryFrom<ModelRepr> for Model {
    type Error = TbaError;

    fn try_from(r: ModelRepr) -> Result<Model> {
        let d = PointDomain::new(r.points)?;
        d.check_same(r.operator.domain())?;
        let mut m = Model::new(r.primitive, r.operator);
        for (k, v) in r.valuation {
            if !super::parser::parse_formula(&k).is_ok_and(|f| matches!(f, super::formula::Formula::Var(_))) {
                return Err(TbaError::Structural(format!("'{k}' is not a variable name")));
            }
            m.valuation.insert(k, v.resolve(d)?);
        }
        for (k, v) in r.domains {
            m.domains.insert(k, Family::new(d, resolve_all(d, &v)?)?);
        }
        for (k, f) in r.domain_functions {
            d.check_same(f.domain())?;
            m.domain_functions.insert(k, f);
        }
        m.individuals = r.individuals;
        let check_len = |name: &str, len: usize| {
            if len == r.individuals {
                Ok(())
            } else {
                Err(TbaError::Structural(format!(
                    "'{name}' has {len} entries but the model has {} individuals",
                    r.individuals
                )))
            }
        };
        for (k, v) in r.predicates {
            check_len(&k, v.len())?;
            m.predicates.insert(k, resolve_all(d, &v)?);
        }
        for (k, v) in r.individual_domain_functions {
            check_len(&k, v.len())?;
            m.individual_domain_functions.insert(k, resolve_all(d, &v)?);
        }
        for (k, v) in r.individual_domains {
            if let Some(&bad) = v.iter().find(|&&i| i >= r.individuals) {
                return Err(TbaError::Structural(format!("individual {bad} out of range in '{k}'")));
            }
            m.individual_domains.insert(k, v);
        }
        Ok(m)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ModelRepr::deserialize(d)?;
        Model::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn indiscrete() -> Operator {
        Operator::new(PointDomain::new(2).unwrap(), [0, 3, 3, 3]).unwrap()
    }

    #[test]
    fn json_roundtrip() {
        let mut m = Model::with_closure(indiscrete()).valued("p", &[0]).unwrap();
        m.domains.insert("D".into(), Family::from_masks(m.domain(), [1, 3]).unwrap());
        m.domain_functions.insert("d".into(), Operator::identity(m.domain()));
        let s = m.to_json();
        assert_eq!(
            s,
            r#"{"points":2,"primitive":"closure","operator":{"points":2,"table":[0,3,3,3]},"valuation":{"p":[0]},"domains":{"D":[[0],[0,1]]},"domain_functions":{"d":{"points":2,"table":[0,1,2,3]}}}"#
        );
        assert_eq!(Model::from_json(&s).unwrap(), m);
    }

    #[test]
    fn accepts_masks_and_interior() {
        let s = r#"{"points":2,"primitive":"interior","operator":{"points":2,"table":[0,1,0,3]},"valuation":{"p":1}}"#;
        let m = Model::from_json(s).unwrap();
        assert_eq!(m.semantics().closure().table(), &[0, 3, 2, 3]);
        assert_eq!(m.valuation["p"].bits(), 1);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Model::from_json(r#"{"points":3,"operator":{"points":2,"table":[0,1,2,3]}}"#).is_err());
        assert!(Model::from_json(r#"{"points":2,"operator":{"points":2,"table":[0,1,2,3]},"valuation":{"p":[2]}}"#).is_err());
        assert!(Model::from_json(r#"{"points":2,"operator":{"points":2,"table":[0,1,2,3]},"valuation":{"P":[0]}}"#).is_err());
        assert!(Model::from_json(
            r#"{"points":1,"operator":{"points":1,"table":[0,1]},"individuals":2,"predicates":{"P":[[0]]}}"#
        )
        .is_err());
    }

    #[test]
    fn connective_tables() {
        let s = Semantics::new(&indiscrete());
        assert_eq!(s.neg_c.table(), &[3, 3, 3, 0]);
        assert_eq!(s.neg_i.table(), &[3, 0, 0, 0]);
        assert_eq!(s.cons.table(), &[3, 2, 1, 3]);
        assert_eq!(s.neg_i, s.neg_c.transform(TransformKind::D));
    }
}
