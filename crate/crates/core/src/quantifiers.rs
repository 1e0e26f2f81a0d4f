//! Lifted quantifiers over a finite sort, constant and varying domains,
//! and Barcan-formula experiments.

use serde::Serialize;

use crate::conditions::{holds, ConditionId};
use crate::error::{Result, TbaError};
use crate::lattice::{Element, Family, PointDomain};
use crate::logic::{parse_formula, Model};
use crate::operator::{enumerate_operators, Operator};
use crate::par;
use crate::topology::{axiom_bundle_check, OperatorRole};

/// What a quantifier ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuantSort {
    /// every element of the algebra; member `k` is the element with bits `k`
    Propositional,
    Individuals(usize),
}

impl QuantSort {
    pub fn size(&self, domain: PointDomain) -> usize {
        match self {
            QuantSort::Propositional => domain.size(),
            QuantSort::Individuals(m) => *m,
        }
    }
}

/// Domain of quantification, indexed by sort member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    Unrestricted,
    /// membership of each sort member
    Constant(Vec<bool>),
    /// existence proposition of each sort member
    Varying(Vec<Element>),
}

impl DomainSpec {
    /// Constant domain over the propositional sort.
    pub fn from_family(f: &Family) -> DomainSpec {
        DomainSpec::Constant((0..f.domain().size() as u32).map(|x| f.members().iter().any(|e| e.bits() == x)).collect())
    }

    fn weight(&self, k: usize, mask: u32) -> u32 {
        match self {
            DomainSpec::Unrestricted => mask,
            DomainSpec::Constant(d) => mask * d[k] as u32,
            DomainSpec::Varying(v) => v[k].bits(),
        }
    }

    fn check(&self, len: usize, domain: PointDomain) -> Result<()> {
        let n = match self {
            DomainSpec::Unrestricted => return Ok(()),
            DomainSpec::Constant(d) => d.len(),
            DomainSpec::Varying(v) => {
                for e in v {
                    domain.check_same(e.domain())?;
                }
                v.len()
            }
        };
        if n != len {
            return Err(TbaError::Structural(format!("domain spec covers {n} sort members, predicate has {len}")));
        }
        Ok(())
    }
}

/// `D↑`: the rigid domain function of a family over the propositional sort.
pub fn lift_up(d: &Family) -> DomainSpec {
    let dom = d.domain();
    DomainSpec::Varying(
        (0..dom.size() as u32).map(|x| if d.members().iter().any(|e| e.bits() == x) { dom.top() } else { dom.bottom() }).collect(),
    )
}

fn check_phi(phi: &[Element]) -> Result<PointDomain> {
    let first = phi.first().ok_or_else(|| TbaError::Structural("predicate over an empty sort".into()))?;
    let d = first.domain();
    for e in phi {
        d.check_same(e.domain())?;
    }
    Ok(d)
}

pub(crate) fn pi_raw(phi: &[u32], spec: &DomainSpec, mask: u32) -> u32 {
    phi.iter().enumerate().fold(mask, |acc, (k, &v)| acc & (!spec.weight(k, mask) | v)) & mask
}

pub(crate) fn sigma_raw(phi: &[u32], spec: &DomainSpec, mask: u32) -> u32 {
    phi.iter().enumerate().fold(0, |acc, (k, &v)| acc | (spec.weight(k, mask) & v)) & mask
}

/// Universal quantification of `phi` (one value per sort member).
pub fn pi(phi: &[Element], spec: &DomainSpec) -> Result<Element> {
    let d = check_phi(phi)?;
    spec.check(phi.len(), d)?;
    let raw: Vec<u32> = phi.iter().map(|e| e.bits()).collect();
    d.element(pi_raw(&raw, spec, d.mask()))
}

pub fn sigma(phi: &[Element], spec: &DomainSpec) -> Result<Element> {
    let d = check_phi(phi)?;
    spec.check(phi.len(), d)?;
    let raw: Vec<u32> = phi.iter().map(|e| e.bits()).collect();
    d.element(sigma_raw(&raw, spec, d.mask()))
}

/// `phi` as a predicate over the propositional sort.
pub fn operator_predicate(phi: &Operator) -> Vec<Element> {
    let d = phi.domain();
    phi.table().iter().map(|&x| d.element(x).expect("masked")).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LawResult {
    pub law: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub exhaustive: bool,
}

impl LawResult {
    pub fn ok(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

fn law(law: &'static str, cases: u64, failures: u64) -> LawResult {
    LawResult { law, cases, failures, exhaustive: true }
}

/// Every table from a sort of `size` members to elements of `d`, by index.
fn table_at(d: PointDomain, size: usize, mut idx: u64) -> Vec<u32> {
    let s = d.size() as u64;
    (0..size)
        .map(|_| {
            let v = (idx % s) as u32;
            idx /= s;
            v
        })
        .collect()
}

fn table_count(d: PointDomain, size: usize) -> u64 {
    (d.size() as u64).pow(size as u32)
}

/// Quantifier identities, exhaustive over the propositional sort of `domain`
/// and individual sorts of 1..=`max_individuals` members.
pub fn quantifier_laws(domain: PointDomain, max_individuals: usize) -> Result<Vec<LawResult>> {
    let m = domain.mask();
    let size = domain.size();
    let total_ops = crate::operator::operator_count(domain)?;
    let op = |k: u64| Operator::at_index(domain, k).expect("in range");
    let range_of = |t: &[u32]| Family::from_masks(domain, t.iter().copied()).expect("masked");
    let families = 1u64 << size;
    let fam = |s: u64| Family::from_masks(domain, (0..size as u32).filter(|x| s >> x & 1 == 1)).expect("masked");
    let mut out = Vec::new();

    let f = par::count(0..total_ops, |k| {
        let t = op(k);
        let r = range_of(t.table());
        pi_raw(t.table(), &DomainSpec::Unrestricted, m) != r.big_meet().bits()
            || sigma_raw(t.table(), &DomainSpec::Unrestricted, m) != r.big_join().bits()
    });
    out.push(law("Pi = meet of range, Sigma = join of range", total_ops, f));

    let f = par::count(0..total_ops, |k| {
        let t = op(k);
        let c: Vec<u32> = t.table().iter().map(|x| !x & m).collect();
        pi_raw(t.table(), &DomainSpec::Unrestricted, m) != !sigma_raw(&c, &DomainSpec::Unrestricted, m) & m
    });
    out.push(law("Pi phi = -Sigma phi^c", total_ops, f));

    let f = par::count(0..total_ops * total_ops, |k| {
        let (phi, delta) = (op(k % total_ops), op(k / total_ops));
        let spec = DomainSpec::Varying(operator_predicate(&delta));
        let c: Vec<u32> = phi.table().iter().map(|x| !x & m).collect();
        let imp: Vec<u32> = (0..size).map(|x| (!delta.at(x as u32) | phi.at(x as u32)) & m).collect();
        pi_raw(phi.table(), &spec, m) != !sigma_raw(&c, &spec, m) & m
            || pi_raw(phi.table(), &spec, m) != pi_raw(&imp, &DomainSpec::Unrestricted, m)
    });
    out.push(law("Pi{d} phi = -Sigma{d} phi^c = Pi(d => phi)", total_ops * total_ops, f));

    let f = par::count(0..total_ops * families, |k| {
        let (phi, dset) = (op(k % total_ops), fam(k / total_ops));
        let img = phi.image(&dset).expect("same domain");
        let cons = DomainSpec::from_family(&dset);
        let lifted = lift_up(&dset);
        let p = pi_raw(phi.table(), &cons, m);
        let s = sigma_raw(phi.table(), &cons, m);
        p != img.big_meet().bits()
            || s != img.big_join().bits()
            || p != pi_raw(phi.table(), &lifted, m)
            || s != sigma_raw(phi.table(), &lifted, m)
    });
    out.push(law("Pi[D] = meet of image = Pi{D up}, and duals", total_ops * families, f));

    let f = par::count(0..total_ops, |k| {
        let phi = op(k);
        let empty = lift_up(&Family::empty(domain));
        let full = lift_up(&domain.powerset());
        pi_raw(phi.table(), &empty, m) != m
            || pi_raw(phi.table(), &full, m) != pi_raw(phi.table(), &DomainSpec::Unrestricted, m)
    });
    out.push(law("lift_up of empty is vacuous, of everything is unrestricted", total_ops, f));

    let f = par::count(0..total_ops * total_ops, |k| {
        let (phi, psi) = (op(k % total_ops), op(k / total_ops));
        let comp = phi.compose(&psi).expect("same domain");
        let spec = DomainSpec::from_family(&psi.range());
        pi_raw(comp.table(), &DomainSpec::Unrestricted, m) != pi_raw(phi.table(), &spec, m)
            || sigma_raw(comp.table(), &DomainSpec::Unrestricted, m) != sigma_raw(phi.table(), &spec, m)
    });
    out.push(law("Pi(phi . psi) = Pi[range psi] phi", total_ops * total_ops, f));

    // drinker's principle on every predicate table
    let drinker = parse_formula("Exists x . (Drunk(x) -> Forall y . Drunk(y))")?;
    let mut cases = 0;
    let mut failures = 0;
    for inds in 1..=max_individuals {
        for idx in 0..table_count(domain, inds) {
            let mut model = Model::with_closure(Operator::identity(domain));
            model.individuals = inds;
            let t = table_at(domain, inds, idx);
            model.predicates.insert("Drunk".into(), t.iter().map(|&x| domain.element(x).expect("masked")).collect());
            cases += 1;
            if !crate::logic::valid(&drinker, &model)? {
                failures += 1;
            }
        }
    }
    out.push(law("drinker's principle", cases, failures));

    let f = parse_formula("forall a . exists b . a <-> -b")?;
    let mut failures = 0;
    for c in enumerate_operators(domain)? {
        if !crate::logic::valid(&f, &Model::with_closure(c))? {
            failures += 1;
        }
    }
    out.push(law("forall A . exists B . A <-> -B", total_ops, failures));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BarcanForm {
    Cbf1,
    Cbf2,
    Bf1,
    Bf2,
}

impl BarcanForm {
    pub const ALL: [BarcanForm; 4] = [BarcanForm::Cbf1, BarcanForm::Cbf2, BarcanForm::Bf1, BarcanForm::Bf2];

    pub fn name(self) -> &'static str {
        match self {
            BarcanForm::Cbf1 => "CBF-1",
            BarcanForm::Cbf2 => "CBF-2",
            BarcanForm::Bf1 => "BF-1",
            BarcanForm::Bf2 => "BF-2",
        }
    }

    /// The condition on `f` under which the form is expected to hold.
    pub fn premise(self) -> ConditionId {
        match self {
            BarcanForm::Cbf1 | BarcanForm::Cbf2 => ConditionId::Mono,
            BarcanForm::Bf1 => ConditionId::IMultB,
            BarcanForm::Bf2 => ConditionId::IAddiA,
        }
    }
}

/// Whether the Barcan form holds for operator `f`, predicate `psi` and domain `spec`.
pub fn barcan_instance(form: BarcanForm, f: &Operator, psi: &[u32], spec: &DomainSpec) -> bool {
    let m = f.domain().mask();
    let fpsi: Vec<u32> = psi.iter().map(|&x| f.at(x)).collect();
    let le = |a: u32, b: u32| a & !b & m == 0;
    match form {
        BarcanForm::Cbf1 => le(f.at(pi_raw(psi, spec, m)), pi_raw(&fpsi, spec, m)),
        BarcanForm::Cbf2 => le(sigma_raw(&fpsi, spec, m), f.at(sigma_raw(psi, spec, m))),
        BarcanForm::Bf1 => le(pi_raw(&fpsi, spec, m), f.at(pi_raw(psi, spec, m))),
        BarcanForm::Bf2 => le(f.at(sigma_raw(psi, spec, m)), sigma_raw(&fpsi, spec, m)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BarcanReport {
    pub form: &'static str,
    pub premise: &'static str,
    pub sort_size: usize,
    /// constant-domain variant: every subset of the sort as `D`
    pub constant_domains: bool,
    pub operators_with_premise: u64,
    pub cases: u64,
    pub failures: u64,
    /// form holds for all ψ (and D) exactly when the premise holds
    pub premise_equivalent: bool,
    pub exhaustive: bool,
}

/// Checks each Barcan form over all operators of `domain`, all `psi` on a
/// sort of `sort_size` members and, if `constant_domains`, every domain `D`.
/// Falls back to `samples` seeded `psi` tables when the table space exceeds 2^16.
pub fn barcan_check(domain: PointDomain, sort_size: usize, constant_domains: bool, samples: u64, seed: u64) -> Result<Vec<BarcanReport>> {
    use rand::{Rng, SeedableRng};
    let total_ops = crate::operator::operator_count(domain)?;
    let tables = table_count(domain, sort_size);
    let exhaustive = tables <= 1 << 16;
    let psis: Vec<Vec<u32>> = if exhaustive {
        (0..tables).map(|i| table_at(domain, sort_size, i)).collect()
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| (0..sort_size).map(|_| rng.random_range(0..domain.size() as u32)).collect()).collect()
    };
    let specs: Vec<DomainSpec> = if constant_domains {
        (0u64..1 << sort_size).map(|s| DomainSpec::Constant((0..sort_size).map(|k| s >> k & 1 == 1).collect())).collect()
    } else {
        vec![DomainSpec::Unrestricted]
    };
    let cases_per_op = (psis.len() * specs.len()) as u64;
    BarcanForm::ALL
        .iter()
        .map(|&form| {
            let rows = par::map(0..total_ops, |k| {
                let f = Operator::at_index(domain, k).expect("in range");
                let premise = holds(form.premise(), &f);
                let mut cases = psis.iter().flat_map(|p| specs.iter().map(move |s| (p, s)));
                let fails = if premise {
                    cases.filter(|(p, s)| !barcan_instance(form, &f, p, s)).count() as u64
                } else {
                    cases.any(|(p, s)| !barcan_instance(form, &f, p, s)) as u64
                };
                (premise, fails)
            });
            let with_premise = rows.iter().filter(|r| r.0).count() as u64;
            let failures = rows.iter().filter(|r| r.0).map(|r| r.1).sum();
            let premise_equivalent = rows.iter().all(|&(p, fails)| p == (fails == 0));
            Ok(BarcanReport {
                form: form.name(),
                premise: form.premise().name(),
                sort_size,
                constant_domains,
                operators_with_premise: with_premise,
                cases: with_premise * cases_per_op,
                failures,
                premise_equivalent,
                exhaustive,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VaryingCountermodel {
    pub form: &'static str,
    pub operator: Operator,
    pub delta: Vec<Element>,
    pub psi: Vec<Element>,
    /// (δ, ψ) pairs examined before the hit, counting across operators
    pub candidates: u64,
}

/// Operators with the premises under which the varying-domain forms are
/// known to fail: `iMULT ∧ CNTR ∧ IDEM`.
pub fn interior_like(domain: PointDomain) -> Result<Vec<Operator>> {
    Ok(enumerate_operators(domain)?
        .filter(|f| [ConditionId::IMult, ConditionId::Cntr, ConditionId::Idem].iter().all(|&c| holds(c, f)))
        .collect())
}

/// First countermodel to the varying-domain form (`Cbf1` or `Bf1`), scanning
/// operators, then sort sizes 1..=`max_sort`, then δ and ψ tables in index
/// order, within `budget` candidate pairs.
pub fn varying_countermodel(form: BarcanForm, domain: PointDomain, max_sort: usize, budget: u64) -> Result<Option<VaryingCountermodel>> {
    let ops = interior_like(domain)?;
    let el = |x: u32| domain.element(x).expect("masked");
    let mut spent = 0u64;
    for f in &ops {
        for size in 1..=max_sort {
            let t = table_count(domain, size);
            let pairs = t * t;
            let hit = par::find_first(0..pairs.min(budget.saturating_sub(spent)), |k| {
                let (di, pi) = (k / t, k % t);
                let delta = table_at(domain, size, di);
                let psi = table_at(domain, size, pi);
                let spec = DomainSpec::Varying(delta.iter().map(|&x| el(x)).collect());
                (!barcan_instance(form, f, &psi, &spec)).then_some((k, delta, psi))
            });
            if let Some((k, delta, psi)) = hit {
                return Ok(Some(VaryingCountermodel {
                    form: form.name(),
                    operator: f.clone(),
                    delta: delta.into_iter().map(el).collect(),
                    psi: psi.into_iter().map(el).collect(),
                    candidates: spent + k + 1,
                }));
            }
            spent += pairs;
            if spent >= budget {
                return Ok(None);
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct OpenQuestionProbe {
    pub points: usize,
    pub interiors: u64,
    /// `∀ᴵA.∃ᴵB. A ⟷ −B` evaluates to ⊤ with pointwise quantifiers
    pub pointwise_valid: u64,
    /// every open `A` has an open `B` with `A ⟷ −B = ⊤`
    pub uniform_valid: u64,
    pub first_uniform_failure: Option<Operator>,
}

/// Evaluates the restricted formula under both readings over every interior
/// operator (full axioms) on `domain`.
pub fn open_question_probe(domain: PointDomain) -> Result<OpenQuestionProbe> {
    let f = parse_formula("forall[open] a . exists[open] b . a <-> -b")?;
    let m = domain.mask();
    let (mut interiors, mut pointwise, mut uniform) = (0, 0, 0);
    let mut first = None;
    for i in enumerate_operators(domain)? {
        if !axiom_bundle_check(&i, OperatorRole::Interior).holds {
            continue;
        }
        interiors += 1;
        if crate::logic::valid(&f, &Model::with_interior(i.clone()))? {
            pointwise += 1;
        }
        let opens: Vec<u32> = (0..=m).filter(|&x| i.at(x) == x).collect();
        let ok = opens.iter().all(|&a| opens.iter().any(|&b| !(a ^ !b) & m == m));
        if ok {
            uniform += 1;
        } else if first.is_none() {
            first = Some(i);
        }
    }
    Ok(OpenQuestionProbe {
        points: domain.points(),
        interiors,
        pointwise_valid: pointwise,
        uniform_valid: uniform,
        first_uniform_failure: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> PointDomain {
        PointDomain::new(n).unwrap()
    }

    #[test]
    fn spec_examples() {
        let id = operator_predicate(&Operator::identity(d(2)));
        assert!(pi(&id, &DomainSpec::Unrestricted).unwrap().is_bottom());
        assert!(sigma(&id, &DomainSpec::Unrestricted).unwrap().is_top());
        assert!(pi(&id, &lift_up(&Family::empty(d(2)))).unwrap().is_top());
    }

    #[test]
    fn partial_specs_rejected() {
        let id = operator_predicate(&Operator::identity(d(2)));
        assert!(pi(&id, &DomainSpec::Constant(vec![true])).is_err());
        assert!(pi(&[], &DomainSpec::Unrestricted).is_err());
        let other = vec![d(1).top(); 4];
        assert!(pi(&id, &DomainSpec::Varying(other)).is_err());
    }

    #[test]
    fn laws_n1() {
        for r in quantifier_laws(d(1), 3).unwrap() {
            assert!(r.ok(), "{}", r.law);
        }
    }

    #[test]
    fn hand_countermodels() {
        let i = Operator::new(d(2), [0, 1, 0, 3]).unwrap();
        let spec = DomainSpec::Varying(vec![d(2).from_points(&[0]).unwrap()]);
        assert!(!barcan_instance(BarcanForm::Bf1, &i, &[0], &spec));
        let spec = DomainSpec::Varying(vec![d(2).from_points(&[1]).unwrap()]);
        assert!(!barcan_instance(BarcanForm::Cbf1, &i, &[2], &spec));
    }

    #[test]
    fn varying_search_finds_one() {
        let hit = varying_countermodel(BarcanForm::Bf1, d(2), 2, 10_000_000).unwrap().unwrap();
        let spec = DomainSpec::Varying(hit.delta.clone());
        let psi: Vec<u32> = hit.psi.iter().map(|e| e.bits()).collect();
        assert!(!barcan_instance(BarcanForm::Bf1, &hit.operator, &psi, &spec));
        for c in [ConditionId::IMult, ConditionId::Cntr, ConditionId::Idem] {
            assert!(holds(c, &hit.operator));
        }
    }

    #[test]
    fn barcan_n1() {
        for r in barcan_check(d(1), 2, true, 0, 0).unwrap() {
            assert_eq!(r.failures, 0, "{}", r.form);
            assert!(r.premise_equivalent, "{}", r.form);
        }
    }

    #[test]
    fn probe_n1() {
        let p = open_question_probe(d(1)).unwrap();
        assert_eq!(p.interiors, 1);
        assert_eq!(p.pointwise_valid, 1);
    }
}
