//! Recovery operators and the condition-free explosion laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::eval_bits;
use super::formula::random_formula;
use super::model::{Model, Semantics};
use super::negation::{instance_holds, NegationPropertyId};
use crate::error::Result;
use crate::lattice::PointDomain;
use crate::operator::{operator_count, Operator, TransformKind};
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct TheoremOutcome {
    pub theorem: &'static str,
    pub holds: bool,
}

fn all_a(m: u32, p: impl Fn(u32) -> bool) -> bool {
    (0..=m).all(p)
}

/// Generalised explosion laws for one operator `eta`, over every element.
pub fn eta_laws_hold(eta: &Operator) -> bool {
    let m = eta.domain().mask();
    let fpc = eta.transform(TransformKind::FPC);
    let fp = eta.transform(TransformKind::FP);
    all_a(m, |a| {
        let e = eta.at(a);
        fpc.at(a) & a & e == 0 && fpc.at(a) & !(a | e) == 0 && (fp.at(a) | a | e) == m
    })
}

/// Border operator as the dual of the closure's fixed-point transform.
pub fn border_fp(c: &Operator) -> Operator {
    c.transform(TransformKind::FP).transform(TransformKind::D)
}

/// Theorems (a) to (d) for one closure, with no conditions assumed.
pub fn recovery_theorems(c: &Operator) -> Vec<TheoremOutcome> {
    let s = Semantics::new(c);
    let m = c.domain().mask();
    let (i, nc, ni) = (s.interior(), &s.neg_c, &s.neg_i);
    let b = border_fp(c);
    let items: Vec<(&'static str, bool)> = vec![
        ("open A implies A & negC A = F", all_a(m, |a| i.at(a) != a || a & nc.at(a) == 0)),
        ("closed A implies A | negI A = T", all_a(m, |a| c.at(a) != a || a | ni.at(a) == m)),
        ("cons A & A & negC A = F", all_a(m, |a| s.cons.at(a) & a & nc.at(a) == 0)),
        ("det A <= A | negI A", all_a(m, |a| s.det.at(a) & !(a | ni.at(a)) == 0)),
        ("eta laws for eta = negC", eta_laws_hold(nc)),
        ("cons = negC^fpc", s.cons == nc.transform(TransformKind::FPC)),
        ("det = negI^fpc", s.det == ni.transform(TransformKind::FPC)),
        ("undet = negI^fp", s.undet == ni.transform(TransformKind::FP)),
        ("cons = B^c with B = (C^fp)^d", s.cons == b.compl()),
        ("det = B^d with B = (C^fp)^d", s.det == b.transform(TransformKind::D)),
    ];
    items.into_iter().map(|(theorem, holds)| TheoremOutcome { theorem, holds }).collect()
}

/// Whether `cons = B^c` and `det = B^d` hold with the border `A & C(-A)`.
pub fn table_border_identities(c: &Operator) -> bool {
    let s = Semantics::new(c);
    let b = &s.derived.b;
    s.cons == b.compl() && s.det == b.transform(TransformKind::D)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveRecovery {
    pub closures: u64,
    pub theorem_failures: u64,
    pub etas: u64,
    pub eta_failures: u64,
    /// closures where the identities hold with the border `A & C(-A)`
    pub table_border_agree: u64,
    /// of those, how many are expansive; equality with the previous count
    /// and with the number of expansive closures means "exactly the expansive ones"
    pub expansive: u64,
    pub table_border_iff_expansive: bool,
}

/// (a)–(d) over every closure, and the generalised laws over every `eta`.
pub fn recovery_exhaustive(domain: PointDomain) -> Result<ExhaustiveRecovery> {
    use crate::conditions::{holds, ConditionId};
    let total = operator_count(domain)?;
    let theorem_failures = par::count(0..total, |k| {
        let c = Operator::at_index(domain, k).expect("in range");
        !recovery_theorems(&c).iter().all(|t| t.holds)
    });
    let eta_failures = par::count(0..total, |k| !eta_laws_hold(&Operator::at_index(domain, k).expect("in range")));
    let facts = par::map(0..total, |k| {
        let c = Operator::at_index(domain, k).expect("in range");
        (table_border_identities(&c), holds(ConditionId::Expn, &c))
    });
    let agree = facts.iter().filter(|f| f.0).count() as u64;
    let expansive = facts.iter().filter(|f| f.1).count() as u64;
    Ok(ExhaustiveRecovery {
        closures: total,
        theorem_failures,
        etas: total,
        eta_failures,
        table_border_agree: agree,
        expansive,
        table_border_iff_expansive: facts.iter().all(|f| f.0 == f.1),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContextSchemaOutcome {
    pub contexts: usize,
    pub checks: u64,
    pub failures: u64,
}

/// Γ/Δ schema: `cons A & Γ(A) <= Δ(A)` and `A` open give `Γ(A) <= Δ(A)`,
/// for random contexts with hole `a` and a side variable `q`, over every model
/// of `domain` visited with stride `stride`.
pub fn context_schema(domain: PointDomain, contexts: usize, seed: u64, stride: usize) -> Result<ContextSchemaOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> =
        (0..contexts).map(|_| (random_formula(&mut rng, 3, &["a", "q"]), random_formula(&mut rng, 3, &["a", "q"]))).collect();
    let m = domain.mask();
    let (mut checks, mut failures) = (0u64, 0u64);
    for c in crate::operator::enumerate_operators(domain)?.step_by(stride.max(1)) {
        let mut model = Model::with_closure(c);
        let (cons, int) = (model.semantics().cons.clone(), model.semantics().interior().clone());
        for (g, dl) in &pairs {
            for a in 0..=m {
                for q in 0..=m {
                    model.valuation.insert("a".into(), domain.element(a)?);
                    model.valuation.insert("q".into(), domain.element(q)?);
                    let gv = eval_bits(g, &model)?;
                    let dv = eval_bits(dl, &model)?;
                    let premise = cons.at(a) & gv & !dv == 0;
                    let open = int.at(a) == a;
                    checks += 1;
                    if premise && open && gv & !dv != 0 {
                        failures += 1;
                    }
                }
            }
        }
    }
    Ok(ContextSchemaOutcome { contexts, checks, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct BorderRecoveryRow {
    pub property: &'static str,
    /// closures where the guarded property holds for `negC`
    pub holds_on: u64,
    pub closures: u64,
}

/// Empirical record: properties of `negC` guarded by `B^fp(A)`, i.e.
/// `B^fp(A) & lhs <= rhs`, counted over all closures of `domain`.
pub fn border_recovery_report(domain: PointDomain) -> Result<Vec<BorderRecoveryRow>> {
    use NegationPropertyId::*;
    let props = [Contraposition1a, Contraposition1b, DeMorgan1a, DeMorgan2a, DeMorgan2b, DblNegA, DblNegB];
    let total = operator_count(domain)?;
    let m = domain.mask();
    Ok(props
        .iter()
        .map(|&p| {
            let holds_on = par::count(0..total, |k| {
                let c = Operator::at_index(domain, k).expect("in range");
                let s = Semantics::new(&c);
                let guard = s.derived.b.transform(TransformKind::FP);
                let n = &s.neg_c;
                (0..=m).all(|a| {
                    (0..=m).all(|b| {
                        let g = guard.at(a);
                        guarded_instance(p, n, m, a, b, g)
                    })
                })
            });
            BorderRecoveryRow { property: p.name(), holds_on, closures: total }
        })
        .collect())
}

fn guarded_instance(p: NegationPropertyId, n: &Operator, m: u32, a: u32, b: u32, g: u32) -> bool {
    use NegationPropertyId::*;
    let ng = |x: u32| n.at(x & m);
    let imp = |x: u32, y: u32| (!x | y) & m;
    let (lhs, rhs) = match p {
        Contraposition1a => (imp(a, b), imp(ng(b), ng(a))),
        Contraposition1b => (imp(ng(b), ng(a)), imp(a, b)),
        DeMorgan1a => (ng(a | b), ng(a) & ng(b)),
        DeMorgan2a => (ng(a & b), ng(a) | ng(b)),
        DeMorgan2b => (ng(a) | ng(b), ng(a & b)),
        DblNegA => (a, ng(ng(a))),
        DblNegB => (ng(ng(a)), a),
        _ => return instance_holds(p, n, m, a, b),
    };
    g & lhs & !rhs == 0
}
