//! Negotiable properties of negation, each direction checked separately.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::formula::UnOp;
use super::model::Semantics;
use crate::error::{Result, TbaError};
use crate::lattice::{Element, PointDomain};
use crate::operator::{enumerate_operators, Operator};
use crate::topology::{axiom_bundle_check, OperatorRole};

/// Negation connectives a property can be instantiated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NegChoice {
    CNot,
    NegC,
    NegI,
    NegIC,
    NegCI,
}

impl NegChoice {
    pub const ALL: [NegChoice; 5] = [NegChoice::CNot, NegChoice::NegC, NegChoice::NegI, NegChoice::NegIC, NegChoice::NegCI];

    pub fn unop(self) -> UnOp {
        match self {
            NegChoice::CNot => UnOp::CNot,
            NegChoice::NegC => UnOp::NegC,
            NegChoice::NegI => UnOp::NegI,
            NegChoice::NegIC => UnOp::NegIC,
            NegChoice::NegCI => UnOp::NegCI,
        }
    }

    pub fn name(self) -> &'static str {
        self.unop().token()
    }
}

impl FromStr for NegChoice {
    type Err = TbaError;
    fn from_str(s: &str) -> Result<Self> {
        NegChoice::ALL
            .into_iter()
            .find(|n| n.name() == s || (s == "cnot" && *n == NegChoice::CNot))
            .ok_or_else(|| TbaError::UnknownName(s.to_string()))
    }
}

macro_rules! neg_props {
    ($($v:ident => $name:literal, $schema:literal;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum NegationPropertyId { $($v),* }

        impl NegationPropertyId {
            pub const ALL: &'static [NegationPropertyId] = &[$(NegationPropertyId::$v),*];

            pub fn name(self) -> &'static str {
                match self { $(NegationPropertyId::$v => $name),* }
            }

            /// Schema with `~` for the negation; `|-` is degree-preserving
            /// consequence and `==>` meta-level implication.
            pub fn schema(self) -> &'static str {
                match self { $(NegationPropertyId::$v => $schema),* }
            }
        }
    };
}

neg_props! {
    Ecq => "ECQ", "A & ~A |- F";
    Tnd => "TND", "|- A | ~A";
    WeakTnd => "weakTND", "~B |- A | ~A";
    WeakEcq => "weakECQ", "A & ~A |- ~B";
    Lnc => "LNC", "|- ~(A & ~A)";
    DeMorgan1a => "deMorgan1a", "~(A | B) |- ~A & ~B";
    DeMorgan1b => "deMorgan1b", "~A & ~B |- ~(A | B)";
    DeMorgan2a => "deMorgan2a", "~(A & B) |- ~A | ~B";
    DeMorgan2b => "deMorgan2b", "~A | ~B |- ~(A & B)";
    DblNegA => "dblNeg_a", "A |- ~~A";
    DblNegB => "dblNeg_b", "~~A |- A";
    WeakDblNegA => "weakDblNeg_a", "|- A ==> |- ~~A";
    WeakDblNegB => "weakDblNeg_b", "|- ~~A ==> |- A";
    Contraposition1a => "contraposition1a", "A -> B |- ~B -> ~A";
    Contraposition1b => "contraposition1b", "~B -> ~A |- A -> B";
    Contraposition2a => "contraposition2a", "A -> ~B |- B -> ~A";
    Contraposition2b => "contraposition2b", "B -> ~A |- A -> ~B";
    WeakContraposition1a => "weakContraposition1a", "A |- B ==> ~B |- ~A";
    WeakContraposition1b => "weakContraposition1b", "~B |- ~A ==> A |- B";
    WeakContraposition2a => "weakContraposition2a", "A |- ~B ==> B |- ~A";
    WeakContraposition2b => "weakContraposition2b", "B |- ~A ==> A |- ~B";
    DisjSyllogismA => "disjSyllogism_a", "A | B |- ~A -> B";
    DisjSyllogismB => "disjSyllogism_b", "~A -> B |- A | B";
}

impl fmt::Display for NegationPropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NegationPropertyId {
    type Err = TbaError;
    fn from_str(s: &str) -> Result<Self> {
        NegationPropertyId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| TbaError::UnknownName(s.to_string()))
    }
}

/// Instance of property `p` at `(a, b)` for negation table `n`.
pub fn instance_holds(p: NegationPropertyId, n: &Operator, m: u32, a: u32, b: u32) -> bool {
    use NegationPropertyId::*;
    let ng = |x: u32| n.at(x & m);
    let le = |x: u32, y: u32| x & !y & m == 0;
    let imp = |x: u32, y: u32| (!x | y) & m;
    match p {
        Ecq => le(a & ng(a), 0),
        Tnd => le(m, a | ng(a)),
        WeakTnd => le(ng(b), a | ng(a)),
        WeakEcq => le(a & ng(a), ng(b)),
        Lnc => le(m, ng(a & ng(a))),
        DeMorgan1a => le(ng(a | b), ng(a) & ng(b)),
        DeMorgan1b => le(ng(a) & ng(b), ng(a | b)),
        DeMorgan2a => le(ng(a & b), ng(a) | ng(b)),
        DeMorgan2b => le(ng(a) | ng(b), ng(a & b)),
        DblNegA => le(a, ng(ng(a))),
        DblNegB => le(ng(ng(a)), a),
        WeakDblNegA => a != m || ng(ng(a)) == m,
        WeakDblNegB => ng(ng(a)) != m || a == m,
        Contraposition1a => le(imp(a, b), imp(ng(b), ng(a))),
        Contraposition1b => le(imp(ng(b), ng(a)), imp(a, b)),
        Contraposition2a => le(imp(a, ng(b)), imp(b, ng(a))),
        Contraposition2b => le(imp(b, ng(a)), imp(a, ng(b))),
        WeakContraposition1a => !le(a, b) || le(ng(b), ng(a)),
        WeakContraposition1b => !le(ng(b), ng(a)) || le(a, b),
        WeakContraposition2a => !le(a, ng(b)) || le(b, ng(a)),
        WeakContraposition2b => !le(b, ng(a)) || le(a, ng(b)),
        DisjSyllogismA => le(a | b, imp(ng(a), b)),
        DisjSyllogismB => le(imp(ng(a), b), a | b),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NegationReport {
    pub property: &'static str,
    pub schema: &'static str,
    pub negation: &'static str,
    pub holds: bool,
    /// first failing `(A, B)` in ascending order
    pub counterexample: Option<(Element, Element)>,
}

/// Checks a property for the given connective over every valuation of `A`, `B`.
pub fn negation_property(p: NegationPropertyId, neg: NegChoice, sem: &Semantics) -> NegationReport {
    let n = sem.op(neg.unop());
    let d = n.domain();
    let m = d.mask();
    let cx = (0..=m).flat_map(|b| (0..=m).map(move |a| (a, b))).find(|&(a, b)| !instance_holds(p, n, m, a, b));
    NegationReport {
        property: p.name(),
        schema: p.schema(),
        negation: neg.name(),
        holds: cx.is_none(),
        counterexample: cx.map(|(a, b)| (el(d, a), el(d, b))),
    }
}

fn el(d: PointDomain, bits: u32) -> Element {
    d.element(bits).expect("in range")
}

fn op_holds(p: NegationPropertyId, n: &Operator) -> bool {
    let m = n.domain().mask();
    (0..=m).all(|a| (0..=m).all(|b| instance_holds(p, n, m, a, b)))
}

#[derive(Clone, Debug, Serialize)]
pub struct NegationMapRow {
    pub property: &'static str,
    pub negation: &'static str,
    /// closures (all operators) on which the property holds
    pub all_operators: u64,
    pub all_total: u64,
    /// among closures satisfying the full Kuratowski axioms
    pub kuratowski: u64,
    pub kuratowski_total: u64,
}

/// Empirical map: for each property and connective, on how many closure
/// operators of `domain` it holds, overall and under the Kuratowski axioms.
pub fn negation_map(domain: PointDomain) -> Result<Vec<NegationMapRow>> {
    let sems: Vec<(Semantics, bool)> = enumerate_operators(domain)?
        .map(|c| {
            let k = axiom_bundle_check(&c, OperatorRole::Closure).holds;
            (Semantics::new(&c), k)
        })
        .collect();
    let kt = sems.iter().filter(|(_, k)| *k).count() as u64;
    let mut rows = Vec::new();
    for &p in NegationPropertyId::ALL {
        for neg in NegChoice::ALL {
            let (mut all, mut kur) = (0, 0);
            for (s, k) in &sems {
                if op_holds(p, s.op(neg.unop())) {
                    all += 1;
                    kur += *k as u64;
                }
            }
            rows.push(NegationMapRow {
                property: p.name(),
                negation: neg.name(),
                all_operators: all,
                all_total: sems.len() as u64,
                kuratowski: kur,
                kuratowski_total: kt,
            });
        }
    }
    Ok(rows)
}
