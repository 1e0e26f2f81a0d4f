use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum UnOp {
    /// classical complement `-`
    CNot,
    NegC,
    NegI,
    NegIC,
    NegCI,
    Cons,
    Det,
    Undet,
    /// interior
    Box,
    /// closure
    Dia,
    Ext,
    Bdr,
    Frt,
}

impl UnOp {
    pub const ALL: [UnOp; 13] = [
        UnOp::CNot,
        UnOp::NegC,
        UnOp::NegI,
        UnOp::NegIC,
        UnOp::NegCI,
        UnOp::Cons,
        UnOp::Det,
        UnOp::Undet,
        UnOp::Box,
        UnOp::Dia,
        UnOp::Ext,
        UnOp::Bdr,
        UnOp::Frt,
    ];

    pub fn token(self) -> &'static str {
        match self {
            UnOp::CNot => "-",
            UnOp::NegC => "negC",
            UnOp::NegI => "negI",
            UnOp::NegIC => "negIC",
            UnOp::NegCI => "negCI",
            UnOp::Cons => "cons",
            UnOp::Det => "det",
            UnOp::Undet => "undet",
            UnOp::Box => "box",
            UnOp::Dia => "dia",
            UnOp::Ext => "ext",
            UnOp::Bdr => "bdr",
            UnOp::Frt => "frt",
        }
    }

    pub fn from_keyword(s: &str) -> Option<UnOp> {
        Some(match s {
            "negC" => UnOp::NegC,
            "negI" => UnOp::NegI,
            "negIC" => UnOp::NegIC,
            "negCI" => UnOp::NegCI,
            "cons" => UnOp::Cons,
            "det" => UnOp::Det,
            "undet" => UnOp::Undet,
            "box" | "int" => UnOp::Box,
            "dia" | "cl" => UnOp::Dia,
            "ext" => UnOp::Ext,
            "bdr" => UnOp::Bdr,
            "frt" => UnOp::Frt,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BinOp {
    And,
    Or,
    Impl,
    Iff,
    Diff,
    SymDiff,
}

impl BinOp {
    pub fn token(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Impl => "->",
            BinOp::Iff => "<->",
            BinOp::Diff => "\\",
            BinOp::SymDiff => "^",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn level(self) -> u8 {
        match self {
            BinOp::Iff => 1,
            BinOp::Impl => 2,
            BinOp::Or => 3,
            BinOp::And | BinOp::Diff | BinOp::SymDiff => 4,
        }
    }

    pub fn right_assoc(self) -> bool {
        self == BinOp::Impl
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QuantKind {
    Forall,
    Exists,
}

/// Which sort members a quantifier ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Restriction {
    None,
    Open,
    Closed,
    /// constant domain looked up by name
    Domain(String),
    /// varying domain: a named domain function
    DomainFn(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    Unary(UnOp, Box<Formula>),
    Binary(BinOp, Box<Formula>, Box<Formula>),
    /// propositional quantifier
    Quant { kind: QuantKind, restriction: Restriction, var: String, body: Box<Formula> },
    /// quantifier over individuals
    IndQuant { kind: QuantKind, restriction: Restriction, var: String, body: Box<Formula> },
    /// predicate application `P(x)`
    Pred(String, String),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn un(op: UnOp, f: Formula) -> Formula {
        Formula::Unary(op, Box::new(f))
    }

    pub fn bin(op: BinOp, a: Formula, b: Formula) -> Formula {
        Formula::Binary(op, Box::new(a), Box::new(b))
    }

    /// Free propositional variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Formula::Top | Formula::Bot | Formula::Pred(..) => {}
            Formula::Unary(_, a) => a.collect_free(bound, out),
            Formula::Binary(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::IndQuant { body, .. } => body.collect_free(bound, out),
        }
    }

    /// Replaces free occurrences of `var` by `with`.
    pub fn substitute(&self, var: &str, with: &Formula) -> Formula {
        match self {
            Formula::Var(v) if v == var => with.clone(),
            Formula::Var(_) | Formula::Top | Formula::Bot | Formula::Pred(..) => self.clone(),
            Formula::Unary(op, a) => Formula::un(*op, a.substitute(var, with)),
            Formula::Binary(op, a, b) => Formula::bin(*op, a.substitute(var, with), b.substitute(var, with)),
            Formula::Quant { var: v, .. } if v == var => self.clone(),
            Formula::Quant { kind, restriction, var: v, body } => Formula::Quant {
                kind: *kind,
                restriction: restriction.clone(),
                var: v.clone(),
                body: Box::new(body.substitute(var, with)),
            },
            Formula::IndQuant { kind, restriction, var: v, body } => Formula::IndQuant {
                kind: *kind,
                restriction: restriction.clone(),
                var: v.clone(),
                body: Box::new(body.substitute(var, with)),
            },
        }
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Quant { .. } | Formula::IndQuant { .. } => 0,
            Formula::Binary(op, ..) => op.level(),
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn fmt_restriction(r: &Restriction, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match r {
        Restriction::None => Ok(()),
        Restriction::Open => write!(f, "[open]"),
        Restriction::Closed => write!(f, "[closed]"),
        Restriction::Domain(d) => write!(f, "[{d}]"),
        Restriction::DomainFn(d) => write!(f, "{{{d}}}"),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Top => write!(f, "T"),
            Formula::Bot => write!(f, "F"),
            Formula::Pred(p, x) => write!(f, "{p}({x})"),
            Formula::Unary(UnOp::CNot, a) => {
                write!(f, "-")?;
                a.fmt_child(f, 5)
            }
            Formula::Unary(op, a) => {
                write!(f, "{} ", op.token())?;
                a.fmt_child(f, 5)
            }
            Formula::Binary(op, a, b) => {
                let l = op.level();
                let (lmin, rmin) = if op.right_assoc() { (l + 1, l) } else { (l, l + 1) };
                a.fmt_child(f, lmin)?;
                write!(f, " {} ", op.token())?;
                b.fmt_child(f, rmin)
            }
            Formula::Quant { kind, restriction, var, body } => {
                write!(f, "{}", if *kind == QuantKind::Forall { "forall" } else { "exists" })?;
                fmt_restriction(restriction, f)?;
                write!(f, " {var} . {body}")
            }
            Formula::IndQuant { kind, restriction, var, body } => {
                write!(f, "{}", if *kind == QuantKind::Forall { "Forall" } else { "Exists" })?;
                fmt_restriction(restriction, f)?;
                write!(f, " {var} . {body}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// degree-preserving
    Local,
    /// truth-preserving
    Global,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusions: Vec<Formula>,
    pub mode: Mode,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusions: Vec<Formula>, mode: Mode) -> Self {
        Sequent { premises, conclusions, mode }
    }

    /// `|- f`
    pub fn theorem(f: Formula) -> Self {
        Sequent::new(vec![], vec![f], Mode::Local)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.premises.iter().chain(&self.conclusions).flat_map(|f| f.free_vars()).collect()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Formula]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let turnstile = if self.mode == Mode::Global { "|-g" } else { "|-" };
        let prem = join(&self.premises);
        let concl = join(&self.conclusions);
        match (prem.is_empty(), concl.is_empty()) {
            (true, true) => write!(f, "{turnstile}"),
            (true, false) => write!(f, "{turnstile} {concl}"),
            (false, true) => write!(f, "{prem} {turnstile}"),
            (false, false) => write!(f, "{prem} {turnstile} {concl}"),
        }
    }
}

/// A parsed query: either a bare formula or a sequent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Goal {
    Formula(Formula),
    Sequent(Sequent),
}

impl Goal {
    pub fn into_sequent(self) -> Sequent {
        match self {
            Goal::Formula(f) => Sequent::theorem(f),
            Goal::Sequent(s) => s,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Formula(x) => write!(f, "{x}"),
            Goal::Sequent(s) => write!(f, "{s}"),
        }
    }
}

/// Random quantifier-free formula over `vars`, at most `depth` deep.
pub fn random_formula(rng: &mut impl rand::Rng, depth: usize, vars: &[&str]) -> Formula {
    const BIN: [BinOp; 6] = [BinOp::And, BinOp::Or, BinOp::Impl, BinOp::Iff, BinOp::Diff, BinOp::SymDiff];
    if depth == 0 || rng.random_ratio(1, 4) {
        return match rng.random_range(0..vars.len() + 2) {
            0 => Formula::Top,
            1 => Formula::Bot,
            k => Formula::var(vars[k - 2]),
        };
    }
    if rng.random_bool(0.4) {
        let op = UnOp::ALL[rng.random_range(0..UnOp::ALL.len())];
        Formula::un(op, random_formula(rng, depth - 1, vars))
    } else {
        let op = BIN[rng.random_range(0..BIN.len())];
        Formula::bin(op, random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars))
    }
}
