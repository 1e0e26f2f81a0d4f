//! Deterministic countermodel search.
//!
//! Models are visited by point count, then operator index, then valuation
//! index; the first failure in that order is reported whatever the thread
//! count.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::eval::{consequence_over, unvalued};
use super::formula::{Mode, Sequent};
use super::model::Model;
use crate::conditions::{holds, ConditionId};
use crate::error::{Result, TbaError};
use crate::lattice::{PointDomain, N_MAX};
use crate::operator::{operator_count, Operator, ENUM_MAX_POINTS};
use crate::par;
use crate::topology::{closure_of_relation, derive, relation_count, OperatorRole, Relation, RELATION_MAX_POINTS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Exhaustive,
    Relational,
    Random,
}

impl FromStr for Strategy {
    type Err = TbaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "relational" => Ok(Strategy::Relational),
            "random" => Ok(Strategy::Random),
            _ => Err(TbaError::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Relational => "relational",
            Strategy::Random => "random",
        })
    }
}

/// A condition required of the operator of some role, derived from the closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub role: OperatorRole,
    pub condition: ConditionId,
}

impl Assumption {
    pub fn holds_for(&self, closure: &Operator) -> bool {
        holds(self.condition, &derive(closure, OperatorRole::Closure, self.role))
    }
}

/// Parses `ROLE:COND,COND,...`, e.g. `I:MULT,CNTR,DNRM,IDEM`.
pub fn parse_assumptions(s: &str) -> Result<Vec<Assumption>> {
    let (role, conds) = s
        .split_once(':')
        .ok_or_else(|| TbaError::Usage(format!("expected ROLE:COND,... in '{s}'")))?;
    let role: OperatorRole = role.trim().parse()?;
    conds
        .split(',')
        .filter(|c| !c.trim().is_empty())
        .map(|c| Ok(Assumption { role, condition: c.trim().parse()? }))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub min_points: usize,
    pub max_points: usize,
    pub assumptions: Vec<Assumption>,
    pub strategy: Strategy,
    /// operators per point count for the random strategy
    pub samples: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            min_points: 1,
            max_points: 2,
            assumptions: Vec::new(),
            strategy: Strategy::Exhaustive,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum SearchOutcome {
    /// No countermodel exists among all operators of the searched sizes.
    Valid { models: u64 },
    Countermodel { points: usize, operator_index: u64, model: Box<Model> },
    /// Nothing found, but the searched space was not exhaustive.
    Inconclusive { models: u64 },
}

impl SearchOutcome {
    pub fn countermodel(&self) -> Option<&Model> {
        match self {
            SearchOutcome::Countermodel { model, .. } => Some(model),
            _ => None,
        }
    }
}

impl SearchOptions {
    fn validate(&self) -> Result<()> {
        if self.min_points == 0 || self.min_points > self.max_points {
            return Err(TbaError::Usage(format!(
                "point range {}..={} is empty",
                self.min_points, self.max_points
            )));
        }
        let limit = match self.strategy {
            Strategy::Exhaustive => ENUM_MAX_POINTS,
            Strategy::Relational => RELATION_MAX_POINTS,
            Strategy::Random => N_MAX,
        };
        if self.max_points > limit {
            return Err(TbaError::Capacity {
                what: format!("{} search on {} points", self.strategy, self.max_points),
                limit,
            });
        }
        if self.strategy == Strategy::Random && self.samples == 0 {
            return Err(TbaError::Usage("random search needs at least one sample".into()));
        }
        Ok(())
    }

    fn space(&self, d: PointDomain) -> Result<u64> {
        match self.strategy {
            Strategy::Exhaustive => operator_count(d),
            Strategy::Relational => relation_count(d),
            Strategy::Random => Ok(self.samples),
        }
    }

    fn candidate(&self, d: PointDomain, k: u64) -> Operator {
        match self.strategy {
            Strategy::Exhaustive => Operator::at_index(d, k).expect("index below count"),
            Strategy::Relational => closure_of_relation(&Relation::at_index(d, k)),
            Strategy::Random => {
                let mix = self.seed ^ (d.points() as u64).rotate_left(48) ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
                Operator::sample(d, mix)
            }
        }
    }

    fn admits(&self, c: &Operator) -> bool {
        self.assumptions.iter().all(|a| a.holds_for(c))
    }
}

fn scan<F>(opts: &SearchOptions, test: F) -> Result<SearchOutcome>
where
    F: Fn(&Model) -> Result<Option<Model>> + Sync + Send,
{
    opts.validate()?;
    let mut models = 0;
    for n in opts.min_points..=opts.max_points {
        let d = PointDomain::new(n)?;
        let total = opts.space(d)?;
        let hit = par::find_first(0..total, |k| {
            let c = opts.candidate(d, k);
            if !opts.admits(&c) {
                return None;
            }
            match test(&Model::with_closure(c)) {
                Ok(Some(m)) => Some(Ok((k, m))),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        });
        if let Some(hit) = hit {
            let (k, model) = hit?;
            return Ok(SearchOutcome::Countermodel { points: n, operator_index: k, model: Box::new(model) });
        }
        models += total;
    }
    Ok(match opts.strategy {
        Strategy::Exhaustive => SearchOutcome::Valid { models },
        _ => SearchOutcome::Inconclusive { models },
    })
}

/// Searches for a model and valuation falsifying `s`.
pub fn search(s: &Sequent, opts: &SearchOptions) -> Result<SearchOutcome> {
    let vars: Vec<String> = s.free_vars().into_iter().collect();
    scan(opts, |m| {
        let r = consequence_over(s, m, &vars)?;
        Ok(r.counterexample.map(|cx| {
            let mut out = m.clone();
            out.valuation = cx;
            out
        }))
    })
}

/// Searches for a model on which `s` holds globally for every valuation but
/// fails locally for some valuation. The returned model carries the local
/// counterexample as its valuation.
pub fn separate_local_global(s: &Sequent, opts: &SearchOptions) -> Result<SearchOutcome> {
    let vars: Vec<String> = s.free_vars().into_iter().collect();
    let local = s.clone().with_mode(Mode::Local);
    let global = s.clone().with_mode(Mode::Global);
    scan(opts, |m| {
        if !consequence_over(&global, m, &vars)?.holds {
            return Ok(None);
        }
        let r = consequence_over(&local, m, &vars)?;
        Ok(r.counterexample.map(|cx| {
            let mut out = m.clone();
            out.valuation = cx;
            out
        }))
    })
}

/// Re-checks a reported countermodel: the sequent must fail at its valuation.
pub fn recheck(s: &Sequent, m: &Model) -> Result<bool> {
    if !unvalued(s, m).is_empty() {
        return Ok(false);
    }
    Ok(!super::eval::consequence(s, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::consequence;
    use crate::logic::parser::parse_sequent;
    use crate::topology::axiom_bundle_check;

    fn opts(max: usize) -> SearchOptions {
        SearchOptions { max_points: max, ..Default::default() }
    }

    #[test]
    fn ecq_fails_for_negc() {
        let s = parse_sequent("p, negC p |- F").unwrap();
        let out = search(&s, &opts(2)).unwrap();
        let m = out.countermodel().expect("countermodel");
        assert!(recheck(&s, m).unwrap());
        let reloaded = Model::from_json(&m.to_json()).unwrap();
        assert!(!consequence(&s, &reloaded).unwrap());
    }

    #[test]
    fn gentle_explosion_is_valid() {
        let s = parse_sequent("cons p, p, negC p |- F").unwrap();
        assert!(matches!(search(&s, &opts(2)).unwrap(), SearchOutcome::Valid { models: 260 }));
    }

    #[test]
    fn tnd_fails_under_interior_axioms() {
        let s = parse_sequent("|- p | negI p").unwrap();
        let mut o = opts(2);
        o.assumptions = parse_assumptions("I:MULT,CNTR,DNRM,IDEM").unwrap();
        let out = search(&s, &o).unwrap();
        let m = out.countermodel().expect("countermodel");
        assert!(axiom_bundle_check(m.semantics().interior(), OperatorRole::Interior).holds);
        assert!(recheck(&s, m).unwrap());
        assert_eq!(m.domain().points(), 2);
    }

    #[test]
    fn local_global_separation() {
        let s = parse_sequent("p |- box p").unwrap();
        let out = separate_local_global(&s, &opts(2)).unwrap();
        let m = out.countermodel().expect("separating model");
        assert!(recheck(&s, m).unwrap());
        assert!(holds(ConditionId::Dnrm, m.semantics().interior()));
    }

    #[test]
    fn relational_and_random() {
        let s = parse_sequent("p, negC p |- F").unwrap();
        let o = SearchOptions { strategy: Strategy::Relational, max_points: 3, ..Default::default() };
        assert!(search(&s, &o).unwrap().countermodel().is_some());
        let v = parse_sequent("p |- p").unwrap();
        assert!(matches!(search(&v, &o).unwrap(), SearchOutcome::Inconclusive { .. }));
        let r = SearchOptions { strategy: Strategy::Random, max_points: 3, samples: 50, seed: 9, ..Default::default() };
        let a = search(&s, &r).unwrap();
        let b = search(&s, &r).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn option_errors() {
        let s = parse_sequent("p |- p").unwrap();
        assert!(search(&s, &opts(4)).is_err());
        assert!(search(&s, &SearchOptions { min_points: 3, max_points: 2, ..Default::default() }).is_err());
        assert!(parse_assumptions("Q:MULT").is_err());
        assert!(parse_assumptions("I:NOPE").is_err());
        assert!(parse_assumptions("MULT").is_err());
    }
}
