use std::collections::BTreeMap;

use serde::Serialize;

use super::formula::{BinOp, Formula, Mode, QuantKind, Restriction, Sequent};
use super::model::Model;
use crate::error::{Result, TbaError};
use crate::lattice::Element;

#[derive(Default)]
struct Env {
    props: Vec<(String, u32)>,
    inds: Vec<(String, usize)>,
}

fn lookup<T: Copy>(stack: &[(String, T)], name: &str) -> Option<T> {
    stack.iter().rev().find(|(k, _)| k == name).map(|(_, v)| *v)
}

fn binop(op: BinOp, a: u32, b: u32, m: u32) -> u32 {
    m & match op {
        BinOp::And => a & b,
        BinOp::Or => a | b,
        BinOp::Impl => !a | b,
        BinOp::Iff => !(a ^ b),
        BinOp::Diff => a & !b,
        BinOp::SymDiff => a ^ b,
    }
}

fn eval_in(f: &Formula, m: &Model, env: &mut Env) -> Result<u32> {
    let mask = m.domain().mask();
    Ok(match f {
        Formula::Var(v) => match lookup(&env.props, v) {
            Some(x) => x,
            None => m.valuation.get(v).map(|e| e.bits()).ok_or_else(|| TbaError::UnboundVariable(v.clone()))?,
        },
        Formula::Top => mask,
        Formula::Bot => 0,
        Formula::Unary(op, a) => {
            let x = eval_in(a, m, env)?;
            m.semantics().op(*op).at(x)
        }
        Formula::Binary(op, a, b) => {
            let x = eval_in(a, m, env)?;
            let y = eval_in(b, m, env)?;
            binop(*op, x, y, mask)
        }
        Formula::Quant { kind, restriction, var, body } => {
            let sem = m.semantics();
            // δ(X) for each candidate X: full membership, or a weight
            let weight = |x: u32| -> Result<u32> {
                Ok(match restriction {
                    Restriction::None => mask,
                    Restriction::Open => mask * (sem.interior().at(x) == x) as u32,
                    Restriction::Closed => mask * (sem.closure().at(x) == x) as u32,
                    Restriction::Domain(d) => {
                        let fam = m.domains.get(d).ok_or_else(|| TbaError::UnknownName(d.clone()))?;
                        mask * fam.members().iter().any(|e| e.bits() == x) as u32
                    }
                    Restriction::DomainFn(d) => {
                        m.domain_functions.get(d).ok_or_else(|| TbaError::UnknownName(d.clone()))?.at(x)
                    }
                })
            };
            let mut acc = if *kind == QuantKind::Forall { mask } else { 0 };
            for x in 0..=mask {
                let w = weight(x)?;
                env.props.push((var.clone(), x));
                let v = eval_in(body, m, env);
                env.props.pop();
                let v = v?;
                match kind {
                    QuantKind::Forall => acc &= !w | v,
                    QuantKind::Exists => acc |= w & v,
                }
            }
            acc & mask
        }
        Formula::IndQuant { kind, restriction, var, body } => {
            let n = m.individuals;
            let weight = |i: usize| -> Result<u32> {
                Ok(match restriction {
                    Restriction::None => mask,
                    Restriction::Domain(d) => {
                        let dom = m.individual_domains.get(d).ok_or_else(|| TbaError::UnknownName(d.clone()))?;
                        mask * dom.contains(&i) as u32
                    }
                    Restriction::DomainFn(d) => {
                        m.individual_domain_functions.get(d).ok_or_else(|| TbaError::UnknownName(d.clone()))?[i]
                            .bits()
                    }
                    Restriction::Open | Restriction::Closed => {
                        return Err(TbaError::Usage("open/closed restrictions apply to propositions only".into()))
                    }
                })
            };
            let mut acc = if *kind == QuantKind::Forall { mask } else { 0 };
            for i in 0..n {
                let w = weight(i)?;
                env.inds.push((var.clone(), i));
                let v = eval_in(body, m, env);
                env.inds.pop();
                let v = v?;
                match kind {
                    QuantKind::Forall => acc &= !w | v,
                    QuantKind::Exists => acc |= w & v,
                }
            }
            acc & mask
        }
        Formula::Pred(p, x) => {
            let i = lookup(&env.inds, x).ok_or_else(|| TbaError::UnboundVariable(x.clone()))?;
            let table = m.predicates.get(p).ok_or_else(|| TbaError::UnknownName(p.clone()))?;
            table[i].bits()
        }
    })
}

/// Raw bitmask value of `f` in `m`.
pub fn eval_bits(f: &Formula, m: &Model) -> Result<u32> {
    eval_in(f, m, &mut Env::default())
}

pub fn eval(f: &Formula, m: &Model) -> Result<Element> {
    m.domain().element(eval_bits(f, m)?)
}

pub fn valid(f: &Formula, m: &Model) -> Result<bool> {
    Ok(eval_bits(f, m)? == m.domain().mask())
}

/// Consequence at the model's valuation.
pub fn consequence(s: &Sequent, m: &Model) -> Result<bool> {
    let mask = m.domain().mask();
    let prem = s.premises.iter().map(|f| eval_bits(f, m)).collect::<Result<Vec<_>>>()?;
    let concl = s.conclusions.iter().map(|f| eval_bits(f, m)).collect::<Result<Vec<_>>>()?;
    Ok(match s.mode {
        Mode::Local => {
            let lhs = prem.iter().fold(mask, |a, &x| a & x);
            let rhs = concl.iter().fold(0, |a, &x| a | x);
            lhs & !rhs == 0
        }
        Mode::Global => !prem.iter().all(|&x| x == mask) || concl.contains(&mask),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOutcome {
    pub holds: bool,
    /// valuations examined
    pub valuations: u64,
    /// first failing assignment of the scanned variables
    pub counterexample: Option<BTreeMap<String, Element>>,
}

/// Variables of `s` that the model does not value, in sorted order.
pub fn unvalued(s: &Sequent, m: &Model) -> Vec<String> {
    s.free_vars().into_iter().filter(|v| !m.valuation.contains_key(v)).collect()
}

/// Checks `s` for every assignment of `vars` (ascending, first variable least
/// significant), keeping the rest of the model's valuation.
pub fn consequence_over(s: &Sequent, m: &Model, vars: &[String]) -> Result<ScanOutcome> {
    let d = m.domain();
    let size = d.size() as u64;
    let total = size.checked_pow(vars.len() as u32).filter(|&t| t <= 1 << 24).ok_or_else(|| {
        TbaError::Capacity { what: format!("valuations of {} variables", vars.len()), limit: 1 << 24 }
    })?;
    let mut work = m.clone();
    for idx in 0..total {
        let mut rest = idx;
        for v in vars {
            work.valuation.insert(v.clone(), d.element((rest % size) as u32)?);
            rest /= size;
        }
        if !consequence(s, &work)? {
            let cx = vars.iter().map(|v| (v.clone(), work.valuation[v])).collect();
            return Ok(ScanOutcome { holds: false, valuations: idx + 1, counterexample: Some(cx) });
        }
    }
    Ok(ScanOutcome { holds: true, valuations: total, counterexample: None })
}

/// Checks `s` at the model's valuation, ranging over all values of any
/// variables the model leaves unvalued.
pub fn consequence_all(s: &Sequent, m: &Model) -> Result<ScanOutcome> {
    consequence_over(s, m, &unvalued(s, m))
}
