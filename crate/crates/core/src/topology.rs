//! Closure, interior, exterior, border and frontier operators, their
//! inter-definitions and axioms, and finite topologies.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::conditions::{self, holds, iaddi_fast, ConditionId, EXACT_FAMILY_MAX_POINTS};
use crate::error::{Result, TbaError};
use crate::lattice::{Element, PointDomain};
use crate::operator::{operator_count, Operator, TransformKind};
use crate::par;

/// Relations and topologies are enumerated up to this many points.
pub const RELATION_MAX_POINTS: usize = 4;
pub const DEFAULT_MONOID_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorRole {
    Closure,
    Interior,
    Exterior,
    Border,
    Frontier,
}

impl OperatorRole {
    pub const ALL: [OperatorRole; 5] = [
        OperatorRole::Closure,
        OperatorRole::Interior,
        OperatorRole::Exterior,
        OperatorRole::Border,
        OperatorRole::Frontier,
    ];

    pub fn letter(self) -> char {
        match self {
            OperatorRole::Closure => 'C',
            OperatorRole::Interior => 'I',
            OperatorRole::Exterior => 'E',
            OperatorRole::Border => 'B',
            OperatorRole::Frontier => 'F',
        }
    }
}

impl fmt::Display for OperatorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for OperatorRole {
    type Err = TbaError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" | "closure" => Ok(OperatorRole::Closure),
            "i" | "interior" => Ok(OperatorRole::Interior),
            "e" | "exterior" => Ok(OperatorRole::Exterior),
            "b" | "border" => Ok(OperatorRole::Border),
            "f" | "frontier" => Ok(OperatorRole::Frontier),
            _ => Err(TbaError::UnknownName(s.to_string())),
        }
    }
}

/// Converts `f`, read as an operator of role `from`, into the operator of role `to`.
/// No axioms are assumed.
pub fn derive(f: &Operator, from: OperatorRole, to: OperatorRole) -> Operator {
    use OperatorRole::*;
    let m = f.domain().mask();
    let g = |x: u32| f.at(x & m);
    let d = f.domain();
    match (from, to) {
        (a, b) if a == b => f.clone(),
        (Interior, Closure) | (Closure, Interior) => f.transform(TransformKind::D),
        (Exterior, Closure) => Operator::from_fn(d, |a| !g(a)),
        (Border, Closure) => Operator::from_fn(d, |a| a | g(!a)),
        (Frontier, Closure) => Operator::from_fn(d, |a| a | g(a)),
        (Exterior, Interior) => Operator::from_fn(d, |a| g(!a)),
        (Border, Interior) => Operator::from_fn(d, |a| a & !g(a)),
        (Frontier, Interior) => Operator::from_fn(d, |a| a & !g(a)),
        (Closure, Exterior) => Operator::from_fn(d, |a| !g(a)),
        (Interior, Exterior) => Operator::from_fn(d, |a| g(!a)),
        (Border, Exterior) => Operator::from_fn(d, |a| !a & !g(!a)),
        (Frontier, Exterior) => Operator::from_fn(d, |a| !a & !g(a)),
        (Closure, Border) => Operator::from_fn(d, |a| a & g(!a)),
        (Interior, Border) => Operator::from_fn(d, |a| a & !g(a)),
        (Exterior, Border) => Operator::from_fn(d, |a| a & !g(!a)),
        (Frontier, Border) => Operator::from_fn(d, |a| a & g(a)),
        (Closure, Frontier) => Operator::from_fn(d, |a| g(a) & g(!a)),
        (Interior, Frontier) => Operator::from_fn(d, |a| !(g(a) | g(!a))),
        (Exterior, Frontier) => Operator::from_fn(d, |a| !(g(a) | g(!a))),
        (Border, Frontier) => Operator::from_fn(d, |a| g(a) | g(!a)),
        _ => unreachable!(),
    }
}

/// All five operators derived from a primitive of the given role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub c: Operator,
    pub i: Operator,
    pub e: Operator,
    pub b: Operator,
    pub f: Operator,
}

impl Derived {
    pub fn from_role(op: &Operator, role: OperatorRole) -> Self {
        use OperatorRole::*;
        Derived {
            c: derive(op, role, Closure),
            i: derive(op, role, Interior),
            e: derive(op, role, Exterior),
            b: derive(op, role, Border),
            f: derive(op, role, Frontier),
        }
    }

    pub fn from_closure(c: &Operator) -> Self {
        Derived::from_role(c, OperatorRole::Closure)
    }

    pub fn get(&self, role: OperatorRole) -> &Operator {
        match role {
            OperatorRole::Closure => &self.c,
            OperatorRole::Interior => &self.i,
            OperatorRole::Exterior => &self.e,
            OperatorRole::Border => &self.b,
            OperatorRole::Frontier => &self.f,
        }
    }
}

/// Axioms that are not plain catalog conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Cond(ConditionId),
    /// `E(−E(A)) = E(A)`
    E4,
    /// `B(−B(−A)) ≤ A`
    B4,
    /// `F(−A) = F(A)`
    F2,
    /// `F(F(A)) ≤ F(A)`
    F4,
}

impl Axiom {
    pub fn name(self) -> String {
        match self {
            Axiom::Cond(c) => c.name().to_string(),
            Axiom::E4 => "E(-E(A)) = E(A)".into(),
            Axiom::B4 => "B(-B(-A)) <= A".into(),
            Axiom::F2 => "F(-A) = F(A)".into(),
            Axiom::F4 => "F(F(A)) <= F(A)".into(),
        }
    }

    pub fn holds(self, f: &Operator) -> bool {
        let m = f.domain().mask();
        let g = |x: u32| f.at(x & m);
        let all = |p: &dyn Fn(u32) -> bool| (0..=m).all(p);
        match self {
            Axiom::Cond(c) => holds(c, f),
            Axiom::E4 => all(&|a| g(!g(a)) == g(a)),
            Axiom::B4 => all(&|a| g(!g(!a)) & !a == 0),
            Axiom::F2 => all(&|a| g(!a) == g(a)),
            Axiom::F4 => all(&|a| g(g(a)) & !g(a) == 0),
        }
    }
}

/// The four axioms of a role, in order.
pub fn axioms(role: OperatorRole) -> [Axiom; 4] {
    use ConditionId::*;
    use OperatorRole::*;
    let c = Axiom::Cond;
    match role {
        Closure => [c(Addi), c(Expn), c(Norm), c(Idem)],
        Interior => [c(Mult), c(Cntr), c(Dnrm), c(Idem)],
        Exterior => [c(NAddi), c(NExpn), c(NNorm), Axiom::E4],
        Border => [c(NMultr), c(Cntr), c(NDnrm), Axiom::B4],
        Frontier => [c(NMultr), Axiom::F2, c(Norm), Axiom::F4],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub label: String,
    pub axiom: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleReport {
    pub role: OperatorRole,
    pub axioms: Vec<AxiomResult>,
    pub holds: bool,
}

pub fn axiom_bundle_check(f: &Operator, role: OperatorRole) -> BundleReport {
    let axioms: Vec<AxiomResult> = axioms(role)
        .iter()
        .enumerate()
        .map(|(i, ax)| AxiomResult {
            label: format!("{}{}", role.letter(), i + 1),
            axiom: ax.name(),
            holds: ax.holds(f),
        })
        .collect();
    let all = axioms.iter().all(|a| a.holds);
    BundleReport { role, axioms, holds: all }
}

/// The Hausdorff residue `X ↦ B(−B(−X))` of a border operator.
pub fn residue(b: &Operator) -> Operator {
    let m = b.domain().mask();
    Operator::from_fn(b.domain(), |x| b.at(!b.at(!x & m) & m))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub open: bool,
    pub closed: bool,
    pub clopen: bool,
    pub regular_open: bool,
    pub regular_closed: bool,
    pub dense: bool,
    pub boundary: bool,
    pub nowhere_dense: bool,
}

/// Topological status of `a` with respect to closure `c`.
pub fn classify_element(c: &Operator, a: Element) -> Result<Classification> {
    c.domain().check_same(a.domain())?;
    let i = c.transform(TransformKind::D);
    let x = a.bits();
    let m = c.domain().mask();
    let open = i.at(x) == x;
    let closed = c.at(x) == x;
    Ok(Classification {
        open,
        closed,
        clopen: open && closed,
        regular_open: i.at(c.at(x)) == x,
        regular_closed: c.at(i.at(x)) == x,
        dense: c.at(x) == m,
        boundary: i.at(x) == 0,
        nowhere_dense: i.at(c.at(x)) == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BulletOutcome {
    pub bullet: &'static str,
    pub holds: bool,
}

/// The fixed-point characterisations, each checked over every element.
pub fn fixed_point_bullets(c: &Operator) -> Vec<BulletOutcome> {
    let d = Derived::from_closure(c);
    let m = c.domain().mask();
    let (i, e, b, f) = (&d.i, &d.e, &d.b, &d.f);
    let ed = e.transform(TransformKind::D);
    let bd = b.transform(TransformKind::D);
    let all = |p: &dyn Fn(u32) -> bool| (0..=m).all(p);
    let fp = |o: &Operator, x: u32| o.at(x) == x;
    let items: Vec<(&'static str, bool)> = vec![
        ("open iff B(A) = bot", all(&|a| fp(i, a) == (b.at(a) == 0))),
        ("closed iff B(-A) = bot", all(&|a| fp(c, a) == (b.at(!a & m) == 0))),
        ("clopen iff F(A) = bot", all(&|a| (fp(c, a) && fp(i, a)) == (f.at(a) == 0))),
        ("E has no fixed points", all(&|a| !fp(e, a))),
        ("fp(E^2) iff fp(I.C) (regular open)", all(&|a| (e.at(e.at(a)) == a) == (i.at(c.at(a)) == a))),
        (
            "fp((E^d)^2) iff fp(C.I) (regular closed)",
            all(&|a| (ed.at(ed.at(a)) == a) == (c.at(i.at(a)) == a)),
        ),
        ("fp(B) iff I(A) = bot (boundary)", all(&|a| fp(b, a) == (i.at(a) == 0))),
        ("fp(B^d) iff C(A) = top (dense)", all(&|a| fp(&bd, a) == (c.at(a) == m))),
        (
            "fp(F) iff closed and nowhere dense",
            all(&|a| fp(f, a) == (fp(c, a) && i.at(c.at(a)) == 0)),
        ),
        (
            "nowhere dense iff fp(F, C(A)) iff A <= F(C(A))",
            all(&|a| {
                let nd = i.at(c.at(a)) == 0;
                let ca = c.at(a);
                nd == fp(f, ca) && nd == (a & !f.at(ca) == 0)
            }),
        ),
    ];
    items.into_iter().map(|(bullet, holds)| BulletOutcome { bullet, holds }).collect()
}

/// A binary relation on the points; row `w` holds the successors of `w`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    domain: PointDomain,
    rows: SmallVec<[u32; 16]>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation{:?}", self.edges())
    }
}

impl Relation {
    pub fn from_rows(domain: PointDomain, rows: impl IntoIterator<Item = u32>) -> Result<Self> {
        let rows: SmallVec<[u32; 16]> = rows.into_iter().collect();
        if rows.len() != domain.points() || rows.iter().any(|r| r & !domain.mask() != 0) {
            return Err(TbaError::Structural(format!(
                "relation rows do not fit a {}-point domain",
                domain.points()
            )));
        }
        Ok(Relation { domain, rows })
    }

    pub fn from_edges(domain: PointDomain, edges: &[(usize, usize)]) -> Result<Self> {
        let n = domain.points();
        let mut rows: SmallVec<[u32; 16]> = SmallVec::from_elem(0, n);
        for &(w, v) in edges {
            if w >= n || v >= n {
                return Err(TbaError::Structural(format!("edge ({w},{v}) outside {n} points")));
            }
            rows[w] |= 1 << v;
        }
        Ok(Relation { domain, rows })
    }

    pub fn empty(domain: PointDomain) -> Self {
        Relation { domain, rows: SmallVec::from_elem(0, domain.points()) }
    }

    pub fn total(domain: PointDomain) -> Self {
        Relation { domain, rows: SmallVec::from_elem(domain.mask(), domain.points()) }
    }

    /// The relation whose adjacency bits, row-major, spell `index`.
    pub fn at_index(domain: PointDomain, index: u64) -> Self {
        let n = domain.points();
        let m = domain.mask() as u64;
        let rows = (0..n).map(|w| ((index >> (n * w)) & m) as u32).collect();
        Relation { domain, rows }
    }

    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn related(&self, w: usize, v: usize) -> bool {
        self.rows[w] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.domain.points();
        (0..n).flat_map(|w| (0..n).filter(move |&v| self.related(w, v)).map(move |v| (w, v))).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.domain.points()).all(|w| self.related(w, w))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.domain.points();
        (0..n).all(|w| {
            (0..n).filter(|&v| self.related(w, v)).all(|v| self.rows[v] & !self.rows[w] == 0)
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    points: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelationRepr { points: self.domain.points(), edges: self.edges() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RelationRepr::deserialize(d)?;
        let domain = PointDomain::new(r.points).map_err(serde::de::Error::custom)?;
        Relation::from_edges(domain, &r.edges).map_err(serde::de::Error::custom)
    }
}

/// Number of relations on `domain`, if enumerable.
pub fn relation_count(domain: PointDomain) -> Result<u64> {
    let n = domain.points();
    if n > RELATION_MAX_POINTS {
        return Err(TbaError::Capacity {
            what: format!("enumerating relations on {n} points"),
            limit: RELATION_MAX_POINTS,
        });
    }
    Ok(1u64 << (n * n))
}

/// `C[R](A) = {w : some successor of w lies in A}`.
pub fn closure_of_relation(r: &Relation) -> Operator {
    let rows = r.rows.clone();
    Operator::from_fn(r.domain, move |a| {
        rows.iter().enumerate().filter(|(_, &row)| row & a != 0).fold(0, |acc, (w, _)| acc | 1 << w)
    })
}

/// `R[f] w v ⇔ w ∈ f({v})`.
pub fn relation_of_operator(f: &Operator) -> Relation {
    let n = f.domain().points();
    let rows = (0..n)
        .map(|w| (0..n).filter(|&v| f.at(1 << v) >> w & 1 == 1).fold(0, |acc, v| acc | 1 << v))
        .collect();
    Relation { domain: f.domain(), rows }
}

/// Exact complete additivity when families are enumerable, else the atom-based path.
pub fn iaddi_exact_or_fast(f: &Operator) -> bool {
    if f.domain().points() <= EXACT_FAMILY_MAX_POINTS {
        holds(ConditionId::IAddi, f)
    } else {
        iaddi_fast(f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OperatorBridge {
    pub iaddi: bool,
    pub reconstructs: bool,
    /// `iADDI f ⇔ f = C[R[f]]`
    pub alexandrov: bool,
    /// `EXPN f ⇒ R[f]` reflexive
    pub expn_reflexive: bool,
    /// `MONO f ∧ IDEM_a f ⇒ R[f]` transitive
    pub mono_idem_transitive: bool,
}

impl OperatorBridge {
    pub fn ok(&self) -> bool {
        self.alexandrov && self.expn_reflexive && self.mono_idem_transitive
    }
}

pub fn bridge_properties(f: &Operator) -> OperatorBridge {
    use ConditionId::*;
    let r = relation_of_operator(f);
    let iaddi = iaddi_exact_or_fast(f);
    let reconstructs = closure_of_relation(&r) == *f;
    OperatorBridge {
        iaddi,
        reconstructs,
        alexandrov: iaddi == reconstructs,
        expn_reflexive: !holds(Expn, f) || r.is_reflexive(),
        mono_idem_transitive: !(holds(Mono, f) && holds(IdemA, f)) || r.is_transitive(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationBridge {
    pub iaddi_and_norm: bool,
    pub expn_iff_reflexive: bool,
    pub idem_a_iff_transitive: bool,
    pub roundtrip: bool,
}

impl RelationBridge {
    pub fn ok(&self) -> bool {
        self.iaddi_and_norm && self.expn_iff_reflexive && self.idem_a_iff_transitive && self.roundtrip
    }
}

pub fn relation_bridge(r: &Relation) -> RelationBridge {
    use ConditionId::*;
    let psi = closure_of_relation(r);
    RelationBridge {
        iaddi_and_norm: iaddi_exact_or_fast(&psi) && holds(Norm, &psi),
        expn_iff_reflexive: holds(Expn, &psi) == r.is_reflexive(),
        idem_a_iff_transitive: holds(IdemA, &psi) == r.is_transitive(),
        roundtrip: relation_of_operator(&psi) == *r,
    }
}

/// Kuratowski closures of all topologies on `k` points, one per preorder
/// (specialisation order), in relation-index order.
pub fn finite_topologies(domain: PointDomain) -> Result<Vec<Operator>> {
    let total = relation_count(domain)?;
    let closures = par::map(0..total, |i| {
        let r = Relation::at_index(domain, i);
        (r.is_reflexive() && r.is_transitive()).then(|| closure_of_relation(&r))
    });
    Ok(closures.into_iter().flatten().collect())
}

/// Same topologies from brute force over families of open sets, sorted by table.
pub fn finite_topologies_bruteforce(domain: PointDomain) -> Result<Vec<Operator>> {
    let size = domain.size();
    if domain.points() > RELATION_MAX_POINTS {
        return Err(TbaError::Capacity {
            what: "brute-force topology enumeration".into(),
            limit: RELATION_MAX_POINTS,
        });
    }
    let m = domain.mask();
    let found = par::map(0..1u64 << size, |sel| {
        let is_open = |x: u32| sel >> x & 1 == 1;
        if !is_open(0) || !is_open(m) {
            return None;
        }
        let opens: Vec<u32> = (0..size as u32).filter(|&x| is_open(x)).collect();
        let closed_under = opens.iter().all(|&a| opens.iter().all(|&b| is_open(a | b) && is_open(a & b)));
        if !closed_under {
            return None;
        }
        // interior = largest open subset; closure is its dual
        let interior = |x: u32| opens.iter().filter(|&&o| o & !x == 0).fold(0, |acc, &o| acc | o);
        Some(Operator::from_fn(domain, |x| !interior(!x & m)))
    });
    let mut ops: Vec<Operator> = found.into_iter().flatten().collect();
    ops.sort();
    Ok(ops)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoidClosure {
    pub operators: Vec<Operator>,
    pub saturated: bool,
}

/// Closure of `{identity} ∪ generators` under composition, stopping at `cap` elements.
pub fn monoid_closure(generators: &[Operator], cap: usize) -> Result<MonoidClosure> {
    let domain = match generators.first() {
        Some(g) => g.domain(),
        None => return Err(TbaError::Usage("monoid_closure needs at least one generator".into())),
    };
    if cap == 0 {
        return Err(TbaError::Usage("cap must be at least 1".into()));
    }
    for g in generators {
        domain.check_same(g.domain())?;
    }
    let mut seen: HashSet<Operator> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let id = Operator::identity(domain);
    seen.insert(id.clone());
    order.push(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x)?;
            if seen.contains(&y) {
                continue;
            }
            if order.len() >= cap {
                return Ok(MonoidClosure { operators: order, saturated: false });
            }
            seen.insert(y.clone());
            order.push(y.clone());
            queue.push_back(y);
        }
    }
    Ok(MonoidClosure { operators: order, saturated: true })
}

/// Distinct operators reachable as compositions with an odd number of complement
/// factors, from words over `{c, −}`; stops at `cap` (operator, parity) states.
pub fn odd_negations(c: &Operator, cap: usize) -> Result<(Vec<Operator>, bool)> {
    let domain = c.domain();
    let neg = Operator::negation(domain);
    let gens = [(c.clone(), false), (neg, true)];
    let mut seen: HashMap<(Operator, bool), ()> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (Operator::identity(domain), false);
    seen.insert(start.clone(), ());
    queue.push_back(start);
    let mut saturated = true;
    while let Some((x, parity)) = queue.pop_front() {
        for (g, flips) in &gens {
            let state = (g.compose(&x)?, parity ^ flips);
            if seen.contains_key(&state) {
                continue;
            }
            if seen.len() >= cap {
                saturated = false;
                break;
            }
            seen.insert(state.clone(), ());
            queue.push_back(state);
        }
    }
    let mut odd: Vec<Operator> = seen.into_keys().filter(|(_, p)| *p).map(|(o, _)| o).collect();
    odd.sort();
    odd.dedup();
    Ok((odd, saturated))
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub elements: Vec<Element>,
    pub saturated: bool,
}

/// Elements reachable from `seed` by applying generators, stopping at `cap` elements.
pub fn orbit(generators: &[Operator], seed: Element, cap: usize) -> Result<Orbit> {
    for g in generators {
        g.domain().check_same(seed.domain())?;
    }
    let mut seen = HashSet::new();
    let mut elements = vec![seed];
    seen.insert(seed);
    let mut i = 0;
    while i < elements.len() {
        let x = elements[i];
        for g in generators {
            let y = g.call(x);
            if seen.insert(y) {
                if elements.len() >= cap {
                    return Ok(Orbit { elements, saturated: false });
                }
                elements.push(y);
            }
        }
        i += 1;
    }
    Ok(Orbit { elements, saturated: true })
}

/// Iterates the residue from `seed` until a value repeats or `cap` steps pass.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueChain {
    pub chain: Vec<Element>,
    pub stabilized: bool,
}

pub fn residue_chain(b: &Operator, seed: Element, cap: usize) -> Result<ResidueChain> {
    b.domain().check_same(seed.domain())?;
    let r = residue(b);
    let mut chain = vec![seed];
    let mut seen = HashSet::from([seed]);
    for _ in 0..cap {
        let next = r.call(*chain.last().expect("nonempty"));
        if !seen.insert(next) {
            return Ok(ResidueChain { chain, stabilized: true });
        }
        chain.push(next);
    }
    Ok(ResidueChain { chain, stabilized: false })
}

/// For one subset of the first three border axioms: does it make B4 coincide with `nIDEMr_b`?
#[derive(Clone, Debug, Serialize)]
pub struct B4SubsetOutcome {
    pub subset: Vec<&'static str>,
    pub operators_satisfying: u64,
    pub equivalent: bool,
    pub minimal: bool,
}

/// Maps every subset of `{B1, B2, B3}` to whether B4 ⇔ `nIDEMr_b` holds on all
/// operators (of `domain`) satisfying that subset.
pub fn b4_subset_map(domain: PointDomain) -> Result<Vec<B4SubsetOutcome>> {
    use ConditionId::*;
    let total = operator_count(domain)?;
    let names = ["B1", "B2", "B3"];
    let conds = [NMultr, Cntr, NDnrm];
    // per operator: bitmask of B1..B3 satisfied, and whether B4 ⇔ nIDEMr_b
    let facts = par::map(0..total, |i| {
        let f = Operator::at_index_unchecked(domain, i);
        let sat = conds.iter().enumerate().filter(|(_, &c)| holds(c, &f)).fold(0u8, |a, (k, _)| a | 1 << k);
        (sat, Axiom::B4.holds(&f) == holds(NIdemrB, &f))
    });
    let mut out: Vec<B4SubsetOutcome> = (0u8..8)
        .map(|s| {
            let relevant = facts.iter().filter(|(sat, _)| sat & s == s);
            let (count, eq) = relevant.fold((0u64, true), |(n, ok), &(_, agree)| (n + 1, ok && agree));
            let subset = (0..3).filter(|k| s >> k & 1 == 1).map(|k| names[k]).collect();
            B4SubsetOutcome { subset, operators_satisfying: count, equivalent: eq, minimal: false }
        })
        .collect();
    let eq: Vec<bool> = out.iter().map(|o| o.equivalent).collect();
    for s in 0u8..8 {
        let proper_sub_works = (0u8..8).any(|t| t != s && t & s == t && eq[t as usize]);
        out[s as usize].minimal = eq[s as usize] && !proper_sub_works;
    }
    Ok(out)
}

/// Number of closures of finite topologies on 1..=4 points.
pub const TOPOLOGY_COUNTS: [usize; 4] = [1, 4, 29, 355];

/// Checks all 20 derivations round-trip for a closure and that each derived
/// operator satisfies its axiom bundle. Returns the first failure, if any.
pub fn roundtrip_failure(c: &Operator) -> Option<String> {
    let d = Derived::from_closure(c);
    for role in OperatorRole::ALL {
        let op = d.get(role);
        let bundle = axiom_bundle_check(op, role);
        if !bundle.holds {
            let bad: Vec<_> = bundle.axioms.iter().filter(|a| !a.holds).map(|a| a.label.clone()).collect();
            return Some(format!("{role} fails {}", bad.join(",")));
        }
        for to in OperatorRole::ALL {
            if derive(op, role, to) != *d.get(to) {
                return Some(format!("{role} -> {to} does not reproduce the table"));
            }
        }
    }
    None
}

/// Re-export of the equality used by checks elsewhere.
pub use conditions::check as check_condition;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Family;
    use crate::operator::enumerate_operators;
    use OperatorRole::*;

    fn d(n: usize) -> PointDomain {
        PointDomain::new(n).unwrap()
    }

    fn indiscrete(n: usize) -> Operator {
        Operator::from_fn(d(n), |x| if x == 0 { 0 } else { u32::MAX })
    }

    fn sierpinski_interior() -> Operator {
        Operator::new(d(2), [0, 1, 0, 3]).unwrap()
    }

    #[test]
    fn derive_examples() {
        let c = indiscrete(2);
        assert_eq!(derive(&c, Closure, Border).table(), &[0, 1, 2, 0]);
        assert_eq!(derive(&c, Closure, Frontier).table(), &[0, 3, 3, 0]);
        assert_eq!(derive(&c, Closure, Closure), c);
        for f in enumerate_operators(d(2)).unwrap() {
            assert_eq!(derive(&derive(&f, Closure, Interior), Interior, Closure), f);
        }
    }

    #[test]
    fn border_is_dual_of_fp() {
        for c in finite_topologies(d(3)).unwrap() {
            let b = derive(&c, Closure, Border);
            assert_eq!(b, c.transform(TransformKind::FP).transform(TransformKind::D));
        }
    }

    #[test]
    fn bundle_examples() {
        assert!(axiom_bundle_check(&indiscrete(2), Closure).holds);
        assert!(axiom_bundle_check(&sierpinski_interior(), Interior).holds);
        let r = axiom_bundle_check(&Operator::top(d(1)), Closure);
        assert!(!r.holds);
        assert!(!r.axioms[2].holds && r.axioms[2].label == "C3");
    }

    #[test]
    fn classification_examples() {
        let c = derive(&sierpinski_interior(), Interior, Closure);
        let a = classify_element(&c, d(2).from_points(&[0]).unwrap()).unwrap();
        assert!(a.open && !a.closed && a.dense);
        let b = classify_element(&c, d(2).from_points(&[1]).unwrap()).unwrap();
        assert!(b.closed && b.boundary);
        let t = classify_element(&indiscrete(2), d(2).top()).unwrap();
        assert!(t.clopen);
    }

    #[test]
    fn relation_examples() {
        let dom = d(2);
        assert_eq!(closure_of_relation(&Relation::total(dom)), indiscrete(2));
        assert_eq!(relation_of_operator(&indiscrete(2)), Relation::total(dom));
        assert_eq!(closure_of_relation(&Relation::empty(dom)), Operator::bottom(dom));
        let r = Relation::from_edges(dom, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let c = closure_of_relation(&r);
        assert_eq!(c.at(1), 1);
        assert_eq!(c.at(2), 3);
        assert!(holds(ConditionId::Expn, &c) && holds(ConditionId::IdemA, &c));
    }

    #[test]
    fn relation_serde() {
        let r = Relation::from_edges(d(2), &[(0, 1), (1, 1)]).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"points":2,"edges":[[0,1],[1,1]]}"#);
        assert_eq!(serde_json::from_str::<Relation>(&s).unwrap(), r);
        assert!(serde_json::from_str::<Relation>(r#"{"points":2,"edges":[[0,2]]}"#).is_err());
    }

    #[test]
    fn bridge_examples() {
        let b = bridge_properties(&indiscrete(2));
        assert!(b.iaddi && b.reconstructs);
        let b = bridge_properties(&Operator::top(d(1)));
        assert!(!b.iaddi && !b.reconstructs && b.ok());
        for f in enumerate_operators(d(2)).unwrap() {
            assert!(bridge_properties(&f).ok(), "{f:?}");
        }
        for n in 1..=3 {
            for i in 0..relation_count(d(n)).unwrap() {
                assert!(relation_bridge(&Relation::at_index(d(n), i)).ok());
            }
        }
    }

    #[test]
    fn topology_counts() {
        for k in 1..=4 {
            let pre = finite_topologies(d(k)).unwrap();
            assert_eq!(pre.len(), TOPOLOGY_COUNTS[k - 1]);
        }
        for k in 1..=3 {
            let mut pre = finite_topologies(d(k)).unwrap();
            pre.sort();
            assert_eq!(pre, finite_topologies_bruteforce(d(k)).unwrap());
        }
    }

    #[test]
    fn roundtrips_and_bullets_small() {
        for k in 1..=3 {
            for c in finite_topologies(d(k)).unwrap() {
                assert_eq!(roundtrip_failure(&c), None);
                for b in fixed_point_bullets(&c) {
                    assert!(b.holds, "{}", b.bullet);
                }
            }
        }
    }

    #[test]
    fn monoid_examples() {
        let dom = d(2);
        let id = monoid_closure(&[Operator::identity(dom)], 64).unwrap();
        assert_eq!(id.operators, vec![Operator::identity(dom)]);
        assert!(id.saturated);
        let c = indiscrete(2);
        let k = monoid_closure(&[c.clone(), Operator::negation(dom)], 64).unwrap();
        assert!(k.saturated && k.operators.len() <= 14);
        let f = derive(&c, Closure, Frontier);
        let o = orbit(&[f, Operator::negation(dom)], dom.from_points(&[0]).unwrap(), 64).unwrap();
        let got = Family::new(dom, o.elements.iter().copied()).unwrap();
        assert_eq!(got, dom.powerset());
        let (odd, sat) = odd_negations(&c, 64).unwrap();
        assert!(sat && odd.len() <= 7);
        let capped = monoid_closure(&[Operator::sample(d(3), 1), Operator::sample(d(3), 2)], 5).unwrap();
        assert!(!capped.saturated && capped.operators.len() == 5);
    }

    #[test]
    fn residue_chain_terminates_in_finite_space() {
        let c = derive(&sierpinski_interior(), Interior, Closure);
        let b = derive(&c, Closure, Border);
        let ch = residue_chain(&b, d(2).top(), 16).unwrap();
        assert!(ch.stabilized);
    }

    #[test]
    fn b4_map_shape() {
        let map = b4_subset_map(d(2)).unwrap();
        assert_eq!(map.len(), 8);
        assert_eq!(map[0].operators_satisfying, 256);
        // the full set of other axioms is what the characterisation is stated under
        assert!(map[7].equivalent);
    }
}
