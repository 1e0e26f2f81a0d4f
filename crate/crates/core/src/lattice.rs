//! The Boolean algebra of subsets of a finite point domain.
//!
//! Point `j` corresponds to bit `j` of an element's bitmask. Elements carry
//! their domain so that mixing algebras of different sizes is caught rather
//! than silently truncated.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TbaError};

/// Largest supported number of points.
pub const N_MAX: usize = 16;

/// A finite set of points `{0, .., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointDomain {
    n: u8,
}

impl PointDomain {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(TbaError::InvalidPointCount(n));
        }
        Ok(PointDomain { n: n as u8 })
    }

    #[inline]
    pub fn points(self) -> usize {
        self.n as usize
    }

    /// Bitmask with every point set.
    #[inline]
    pub fn mask(self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Number of elements of the algebra (`2^n`).
    #[inline]
    pub fn size(self) -> usize {
        1usize << self.n
    }

    #[inline]
    pub fn top(self) -> Element {
        Element { domain: self, bits: self.mask() }
    }

    #[inline]
    pub fn bottom(self) -> Element {
        Element { domain: self, bits: 0 }
    }

    pub fn element(self, bits: u32) -> Result<Element> {
        if bits & !self.mask() != 0 {
            return Err(TbaError::InvalidElement(format!(
                "mask {bits:#b} has bits beyond {} points",
                self.n
            )));
        }
        Ok(Element { domain: self, bits })
    }

    /// Element from an unchecked mask; bits beyond the domain are cleared.
    #[inline]
    pub(crate) fn masked(self, bits: u32) -> Element {
        Element { domain: self, bits: bits & self.mask() }
    }

    pub fn from_points(self, points: &[usize]) -> Result<Element> {
        let mut bits = 0u32;
        for &p in points {
            if p >= self.points() {
                return Err(TbaError::InvalidElement(format!(
                    "point {p} outside domain of {} points",
                    self.n
                )));
            }
            bits |= 1 << p;
        }
        Ok(Element { domain: self, bits })
    }

    pub fn singleton(self, point: usize) -> Result<Element> {
        self.from_points(&[point])
    }

    /// All elements in ascending bitmask order.
    pub fn elements(self) -> impl Iterator<Item = Element> + Clone {
        (0..self.size() as u32).map(move |bits| Element { domain: self, bits })
    }

    /// The family of all elements.
    pub fn powerset(self) -> Family {
        Family { domain: self, members: self.elements().collect() }
    }

    pub(crate) fn check_same(self, other: PointDomain) -> Result<()> {
        if self != other {
            return Err(TbaError::DomainMismatch { left: self.points(), right: other.points() });
        }
        Ok(())
    }
}

/// A set of points, i.e. an element of the algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    domain: PointDomain,
    bits: u32,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.points())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

impl Element {
    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn domain(self) -> PointDomain {
        self.domain
    }

    pub fn points(self) -> Vec<usize> {
        (0..self.domain.points()).filter(|&j| self.contains(j)).collect()
    }

    #[inline]
    pub fn contains(self, point: usize) -> bool {
        point < 32 && self.bits & (1 << point) != 0
    }

    #[inline]
    pub fn is_bottom(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_top(self) -> bool {
        self.bits == self.domain.mask()
    }

    fn binary(self, other: Element, f: impl Fn(u32, u32) -> u32) -> Result<Element> {
        self.domain.check_same(other.domain)?;
        Ok(self.domain.masked(f(self.bits, other.bits)))
    }

    pub fn meet(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| a & b)
    }

    pub fn join(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| a | b)
    }

    pub fn implies(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| !a | b)
    }

    pub fn iff(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| !(a ^ b))
    }

    /// Points of `self` not in `other`.
    pub fn diff(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| a & !b)
    }

    pub fn symdiff(self, other: Element) -> Result<Element> {
        self.binary(other, |a, b| a ^ b)
    }

    #[inline]
    pub fn compl(self) -> Element {
        self.domain.masked(!self.bits)
    }

    pub fn leq(self, other: Element) -> Result<bool> {
        self.domain.check_same(other.domain)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn eq_elem(self, other: Element) -> Result<bool> {
        self.domain.check_same(other.domain)?;
        Ok(self.bits == other.bits)
    }

    /// Agreement of `self` and `other` on the points of `u` (inside) or of `-u` (outside).
    pub fn relativized_eq(self, other: Element, u: Element, side: Side) -> Result<bool> {
        self.domain.check_same(other.domain)?;
        self.domain.check_same(u.domain)?;
        let scope = side.scope(u.bits, self.domain.mask());
        Ok((self.bits ^ other.bits) & scope == 0)
    }

    /// Order restricted to the points of `u` (inside) or of `-u` (outside).
    pub fn relativized_leq(self, other: Element, u: Element, side: Side) -> Result<bool> {
        self.domain.check_same(other.domain)?;
        self.domain.check_same(u.domain)?;
        let scope = side.scope(u.bits, self.domain.mask());
        Ok(self.bits & !other.bits & scope == 0)
    }

    /// Least-index atom below `self`, or `None` for bottom.
    pub fn atom_below(self) -> Option<Element> {
        if self.bits == 0 {
            None
        } else {
            Some(Element { domain: self.domain, bits: 1 << self.bits.trailing_zeros() })
        }
    }

    /// `a ≠ ⊥` and for every `P`, `a ≤ P` or `a ≤ -P`.
    pub fn is_atom(self) -> bool {
        if self.bits == 0 {
            return false;
        }
        self.domain.elements().all(|p| {
            let a = self.bits;
            a & !p.bits == 0 || a & p.bits == 0
        })
    }
}

/// Which points a relativized comparison looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

impl Side {
    #[inline]
    pub(crate) fn scope(self, u: u32, full: u32) -> u32 {
        match self {
            Side::Inside => u,
            Side::Outside => !u & full,
        }
    }
}

// Operator sugar. These panic on domain mismatch; use the named methods for
// checked arithmetic.
impl BitAnd for Element {
    type Output = Element;
    fn bitand(self, rhs: Element) -> Element {
        self.meet(rhs).expect("domain mismatch in `&`")
    }
}

impl BitOr for Element {
    type Output = Element;
    fn bitor(self, rhs: Element) -> Element {
        self.join(rhs).expect("domain mismatch in `|`")
    }
}

impl BitXor for Element {
    type Output = Element;
    fn bitxor(self, rhs: Element) -> Element {
        self.symdiff(rhs).expect("domain mismatch in `^`")
    }
}

impl Not for Element {
    type Output = Element;
    fn not(self) -> Element {
        self.compl()
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points().serialize(s)
    }
}

/// Wire form of an element: a point list or an integer bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Points(Vec<usize>),
    Mask(u32),
}

impl ElementRepr {
    pub fn resolve(&self, domain: PointDomain) -> Result<Element> {
        match self {
            ElementRepr::Points(p) => domain.from_points(p),
            ElementRepr::Mask(m) => domain.element(*m),
        }
    }
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        ElementRepr::Points(e.points())
    }
}

/// A finite set of elements, kept sorted by bitmask without duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    domain: PointDomain,
    members: Vec<Element>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl Family {
    pub fn new(domain: PointDomain, members: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut v = Vec::new();
        for m in members {
            domain.check_same(m.domain)?;
            v.push(m);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Family { domain, members: v })
    }

    pub fn empty(domain: PointDomain) -> Self {
        Family { domain, members: Vec::new() }
    }

    /// Family whose members are the given bitmasks.
    pub fn from_masks(domain: PointDomain, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        let elems = masks.into_iter().map(|m| domain.element(m)).collect::<Result<Vec<_>>>()?;
        Family::new(domain, elems)
    }

    /// Family selected by a bitset over element masks (bit `i` set ⇔ element `i` is a member).
    #[cfg(test)]
    pub(crate) fn from_selector(domain: PointDomain, selector: u64) -> Family {
        let members = (0..domain.size().min(64) as u32)
            .filter(|i| selector >> i & 1 == 1)
            .map(|bits| Element { domain, bits })
            .collect();
        Family { domain, members }
    }

    #[inline]
    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    #[inline]
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: Element) -> bool {
        e.domain == self.domain && self.members.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }

    /// Infimum; `⊤` for the empty family.
    pub fn big_meet(&self) -> Element {
        let bits = self.members.iter().fold(self.domain.mask(), |acc, e| acc & e.bits);
        Element { domain: self.domain, bits }
    }

    /// Supremum; `⊥` for the empty family.
    pub fn big_join(&self) -> Element {
        let bits = self.members.iter().fold(0, |acc, e| acc | e.bits);
        Element { domain: self.domain, bits }
    }

    pub fn meet_closed(&self) -> bool {
        self.pairwise_closed(|a, b| a & b)
    }

    pub fn join_closed(&self) -> bool {
        self.pairwise_closed(|a, b| a | b)
    }

    /// Every subfamily, the empty one included, has its infimum in the family.
    /// For finite families this is `⊤ ∈ S` plus closure under binary meets.
    pub fn infimum_closed(&self) -> bool {
        self.contains(self.domain.top()) && self.meet_closed()
    }

    pub fn supremum_closed(&self) -> bool {
        self.contains(self.domain.bottom()) && self.join_closed()
    }

    /// Like [`Family::infimum_closed`] but only over nonempty subfamilies.
    pub fn infimum_closed_nonempty(&self) -> bool {
        self.meet_closed()
    }

    pub fn supremum_closed_nonempty(&self) -> bool {
        self.join_closed()
    }

    fn pairwise_closed(&self, op: impl Fn(u32, u32) -> u32) -> bool {
        self.members.iter().all(|a| {
            self.members.iter().all(|b| {
                let c = Element { domain: self.domain, bits: op(a.bits, b.bits) };
                self.contains(c)
            })
        })
    }

    /// Members complemented.
    pub fn complements(&self) -> Family {
        let members = self.members.iter().map(|e| e.compl());
        Family::new(self.domain, members).expect("same domain")
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> PointDomain {
        PointDomain::new(n).unwrap()
    }

    fn el(n: usize, pts: &[usize]) -> Element {
        d(n).from_points(pts).unwrap()
    }

    #[test]
    fn rejects_empty_and_oversized_domains() {
        assert_eq!(PointDomain::new(0), Err(TbaError::InvalidPointCount(0)));
        assert!(PointDomain::new(N_MAX).is_ok());
        assert!(PointDomain::new(N_MAX + 1).is_err());
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(el(2, &[0]).meet(el(2, &[0, 1])).unwrap(), el(2, &[0]));
        assert_eq!(el(2, &[0]).compl(), el(2, &[1]));
        // pointwise biconditional: point 0: F<->T = F, point 1: F<->F = T
        assert_eq!(d(2).bottom().iff(el(2, &[0])).unwrap(), el(2, &[1]));
        assert_eq!(el(3, &[0, 1]).symdiff(el(3, &[1, 2])).unwrap(), el(3, &[0, 2]));
        assert_eq!(el(3, &[0, 1]).diff(el(3, &[1, 2])).unwrap(), el(3, &[0]));
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let e = el(2, &[0]).meet(el(3, &[0]));
        assert_eq!(e, Err(TbaError::DomainMismatch { left: 2, right: 3 }));
        assert!(el(2, &[0]).leq(el(3, &[0])).is_err());
        assert!(el(2, &[0]).relativized_eq(el(2, &[0]), el(3, &[0]), Side::Inside).is_err());
    }

    #[test]
    fn element_validation() {
        assert!(d(2).element(4).is_err());
        assert!(d(2).from_points(&[2]).is_err());
        assert_eq!(d(2).element(3).unwrap(), d(2).top());
    }

    #[test]
    fn order_examples() {
        let dom = d(2);
        for x in dom.elements() {
            assert!(dom.bottom().leq(x).unwrap());
        }
        assert!(!el(2, &[0]).leq(el(2, &[1])).unwrap());
        for a in dom.elements() {
            for b in dom.elements() {
                let both = a.leq(b).unwrap() && b.leq(a).unwrap();
                assert_eq!(a.eq_elem(b).unwrap(), both);
            }
        }
    }

    #[test]
    fn relativized_examples() {
        let dom = d(2);
        assert!(el(2, &[0]).relativized_eq(el(2, &[0, 1]), el(2, &[0]), Side::Inside).unwrap());
        for a in dom.elements() {
            for b in dom.elements() {
                assert_eq!(a.relativized_eq(b, dom.top(), Side::Inside).unwrap(), a == b);
                for u in dom.elements() {
                    assert_eq!(
                        a.relativized_eq(b, u, Side::Inside).unwrap(),
                        (u & a) == (u & b)
                    );
                    assert_eq!(
                        a.relativized_eq(b, u, Side::Outside).unwrap(),
                        (u | a) == (u | b)
                    );
                    // order variants: pointwise implication on the scoped points
                    let inside = u.points().iter().all(|&w| !a.contains(w) || b.contains(w));
                    let outside =
                        (!u).points().iter().all(|&w| !a.contains(w) || b.contains(w));
                    assert_eq!(a.relativized_leq(b, u, Side::Inside).unwrap(), inside);
                    assert_eq!(a.relativized_leq(b, u, Side::Outside).unwrap(), outside);
                }
            }
        }
    }

    #[test]
    fn involution_and_de_morgan() {
        for n in 1..=4 {
            for a in d(n).elements() {
                assert_eq!(!!a, a);
            }
        }
        for n in 1..=3 {
            for a in d(n).elements() {
                for b in d(n).elements() {
                    assert_eq!(!(a & b), !a | !b);
                    assert_eq!(!(a | b), !a & !b);
                }
            }
        }
    }

    #[test]
    fn big_ops() {
        let dom = d(2);
        assert_eq!(Family::empty(dom).big_meet(), dom.top());
        assert_eq!(Family::empty(dom).big_join(), dom.bottom());
        let s = Family::new(dom, [el(2, &[0]), el(2, &[1])]).unwrap();
        assert_eq!(s.big_join(), dom.top());
        let s = Family::new(dom, [el(2, &[0]), el(2, &[0, 1])]).unwrap();
        assert_eq!(s.big_meet(), el(2, &[0]));
    }

    #[test]
    fn big_ops_agree_with_binary_fold() {
        let dom = d(3);
        for sel in 1u64..256 {
            let s = Family::from_selector(dom, sel);
            let meet = s.iter().reduce(|a, b| a & b).unwrap();
            let join = s.iter().reduce(|a, b| a | b).unwrap();
            assert_eq!(s.big_meet(), meet);
            assert_eq!(s.big_join(), join);
        }
    }

    /// Subfamily enumeration oracle for the infimum/supremum predicates.
    fn closed_by_enumeration(s: &Family, meet: bool, nonempty: bool) -> bool {
        let k = s.len();
        (0u64..1 << k).all(|sub| {
            if nonempty && sub == 0 {
                return true;
            }
            let d = Family::new(
                s.domain(),
                (0..k).filter(|i| sub >> i & 1 == 1).map(|i| s.members()[i]),
            )
            .unwrap();
            s.contains(if meet { d.big_meet() } else { d.big_join() })
        })
    }

    #[test]
    fn closure_predicates() {
        let dom = d(2);
        let s = Family::new(dom, [dom.bottom(), el(2, &[0]), dom.top()]).unwrap();
        assert!(s.infimum_closed());
        assert!(closed_by_enumeration(&s, true, false));
        let s = Family::new(dom, [el(2, &[0]), el(2, &[1])]).unwrap();
        assert!(!s.meet_closed());
        assert!(dom.powerset().supremum_closed());
        assert!(Family::empty(dom).infimum_closed_nonempty());
        assert!(!Family::empty(dom).infimum_closed());
    }

    #[test]
    fn closure_predicates_match_enumeration() {
        // every family at n = 2 (16 of them) and every family at n = 3 (256)
        for n in 2..=3 {
            let dom = d(n);
            for sel in 0u64..1 << dom.size() {
                let s = Family::from_selector(dom, sel);
                assert_eq!(s.infimum_closed(), closed_by_enumeration(&s, true, false));
                assert_eq!(s.supremum_closed(), closed_by_enumeration(&s, false, false));
                assert_eq!(s.infimum_closed_nonempty(), closed_by_enumeration(&s, true, true));
                assert_eq!(s.supremum_closed_nonempty(), closed_by_enumeration(&s, false, true));
            }
        }
    }

    #[test]
    fn atoms() {
        assert_eq!(el(2, &[1]).atom_below(), Some(el(2, &[1])));
        assert_eq!(d(2).top().atom_below(), Some(el(2, &[0])));
        assert_eq!(d(2).bottom().atom_below(), None);
        assert!(!el(2, &[0, 1]).is_atom());
        assert!(el(2, &[1]).is_atom());
        for n in 1..=4 {
            for a in d(n).elements() {
                assert_eq!(a.is_atom(), a.bits().count_ones() == 1);
            }
        }
    }

    #[test]
    fn atom_existence() {
        for n in 1..=4 {
            for p in d(n).elements().filter(|p| !p.is_bottom()) {
                assert!(d(n).elements().any(|q| q.is_atom() && q.leq(p).unwrap()));
            }
        }
    }

    #[test]
    fn element_wire_forms() {
        let dom = d(3);
        let e = el(3, &[0, 2]);
        assert_eq!(serde_json::to_string(&e).unwrap(), "[0,2]");
        let a: ElementRepr = serde_json::from_str("[0,2]").unwrap();
        let b: ElementRepr = serde_json::from_str("5").unwrap();
        assert_eq!(a.resolve(dom).unwrap(), e);
        assert_eq!(b.resolve(dom).unwrap(), e);
        let bad: ElementRepr = serde_json::from_str("[3]").unwrap();
        assert!(bad.resolve(dom).is_err());
    }
}
