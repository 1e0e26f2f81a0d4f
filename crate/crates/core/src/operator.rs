//! Unary operations on elements stored as dense lookup tables.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Result, TbaError};
use crate::lattice::{Element, Family, PointDomain};

/// Largest point count for which the full operator space can be enumerated.
pub const ENUM_MAX_POINTS: usize = 3;

pub(crate) type Table = SmallVec<[u32; 16]>;

/// A total function on the elements of a domain. Entry `i` of the table is
/// the image of the element whose bitmask is `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operator {
    domain: PointDomain,
    table: Table,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator{:?}", self.table.as_slice())
    }
}

/// The five involutive transformations on operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    /// `X ↦ −f(X)`
    C,
    /// `X ↦ −f(−X)`
    D,
    /// `X ↦ f(−X)`
    DC,
    /// `X ↦ f(X) ⟷ X`
    FP,
    /// `X ↦ f(X) △ X`
    FPC,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] =
        [TransformKind::C, TransformKind::D, TransformKind::DC, TransformKind::FP, TransformKind::FPC];

    pub fn suffix(self) -> &'static str {
        match self {
            TransformKind::C => "c",
            TransformKind::D => "d",
            TransformKind::DC => "dc",
            TransformKind::FP => "fp",
            TransformKind::FPC => "fpc",
        }
    }
}

impl Operator {
    pub fn new(domain: PointDomain, table: impl IntoIterator<Item = u32>) -> Result<Self> {
        let table: Table = table.into_iter().collect();
        if table.len() != domain.size() {
            return Err(TbaError::InvalidOperator(format!(
                "table has {} entries, expected {}",
                table.len(),
                domain.size()
            )));
        }
        if let Some(bad) = table.iter().find(|&&m| m & !domain.mask() != 0) {
            return Err(TbaError::InvalidOperator(format!(
                "entry {bad} is not an element of a {}-point domain",
                domain.points()
            )));
        }
        Ok(Operator { domain, table })
    }

    /// Operator from elements listed in input order.
    pub fn from_elements(domain: PointDomain, entries: &[Element]) -> Result<Self> {
        for e in entries {
            domain.check_same(e.domain())?;
        }
        Operator::new(domain, entries.iter().map(|e| e.bits()))
    }

    /// Tabulates `f` on raw bitmasks; outputs are masked to the domain.
    pub fn from_fn(domain: PointDomain, f: impl Fn(u32) -> u32) -> Self {
        let m = domain.mask();
        let table = (0..domain.size() as u32).map(|x| f(x) & m).collect();
        Operator { domain, table }
    }

    #[inline]
    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    #[inline]
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Raw table lookup.
    #[inline]
    pub fn at(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn apply(&self, x: Element) -> Result<Element> {
        self.domain.check_same(x.domain())?;
        Ok(self.domain.masked(self.at(x.bits())))
    }

    /// Like [`Operator::apply`], panicking on a domain mismatch.
    #[inline]
    pub fn call(&self, x: Element) -> Element {
        self.apply(x).expect("operator applied outside its domain")
    }

    pub fn identity(domain: PointDomain) -> Self {
        Operator::from_fn(domain, |x| x)
    }

    /// The complement operator **n**.
    pub fn negation(domain: PointDomain) -> Self {
        Operator::from_fn(domain, |x| !x)
    }

    pub fn constant(e: Element) -> Self {
        let b = e.bits();
        Operator::from_fn(e.domain(), move |_| b)
    }

    /// `⊤'`, the constant-top operator.
    pub fn top(domain: PointDomain) -> Self {
        Operator::constant(domain.top())
    }

    /// `⊥'`, the constant-bottom operator.
    pub fn bottom(domain: PointDomain) -> Self {
        Operator::constant(domain.bottom())
    }

    fn zip(&self, g: &Operator, op: impl Fn(u32, u32) -> u32) -> Result<Operator> {
        self.domain.check_same(g.domain)?;
        let m = self.domain.mask();
        let table = self.table.iter().zip(&g.table).map(|(&a, &b)| op(a, b) & m).collect();
        Ok(Operator { domain: self.domain, table })
    }

    pub fn meet(&self, g: &Operator) -> Result<Operator> {
        self.zip(g, |a, b| a & b)
    }

    pub fn join(&self, g: &Operator) -> Result<Operator> {
        self.zip(g, |a, b| a | b)
    }

    pub fn implies(&self, g: &Operator) -> Result<Operator> {
        self.zip(g, |a, b| !a | b)
    }

    /// Pointwise complement of the outputs; the same as the `C` transform.
    pub fn compl(&self) -> Operator {
        self.transform(TransformKind::C)
    }

    pub fn transform(&self, k: TransformKind) -> Operator {
        let m = self.domain.mask();
        let t = &self.table;
        let table = match k {
            TransformKind::C => t.iter().map(|&y| !y & m).collect(),
            TransformKind::D => (0..t.len()).map(|x| !t[!x & m as usize] & m).collect(),
            TransformKind::DC => (0..t.len()).map(|x| t[!x & m as usize]).collect(),
            TransformKind::FP => t.iter().enumerate().map(|(x, &y)| !(y ^ x as u32) & m).collect(),
            TransformKind::FPC => t.iter().enumerate().map(|(x, &y)| y ^ x as u32).collect(),
        };
        Operator { domain: self.domain, table }
    }

    /// `self ∘ g`, i.e. `X ↦ self(g(X))`.
    pub fn compose(&self, g: &Operator) -> Result<Operator> {
        self.domain.check_same(g.domain)?;
        let table = g.table.iter().map(|&y| self.table[y as usize]).collect();
        Ok(Operator { domain: self.domain, table })
    }

    /// `k`-fold self-composition, `k ≥ 1`.
    pub fn power(&self, k: usize) -> Result<Operator> {
        if k == 0 {
            return Err(TbaError::Usage("power requires k >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_fixed_point(&self, x: u32) -> bool {
        self.at(x) == x
    }

    pub fn fixed_points(&self) -> Family {
        let masks = (0..self.table.len() as u32).filter(|&x| self.at(x) == x);
        Family::from_masks(self.domain, masks).expect("masks are in range")
    }

    pub fn image(&self, s: &Family) -> Result<Family> {
        self.domain.check_same(s.domain())?;
        Family::from_masks(self.domain, s.iter().map(|x| self.at(x.bits())))
    }

    pub fn range(&self) -> Family {
        Family::from_masks(self.domain, self.table.iter().copied()).expect("masks are in range")
    }

    /// The eight transforms that make up the cube of opposition.
    pub fn cube_vertices(&self) -> [(&'static str, Operator); 8] {
        use TransformKind::*;
        let d = self.transform(D);
        [
            ("f", self.clone()),
            ("f^c", self.transform(C)),
            ("f^d", d.clone()),
            ("f^dc", self.transform(DC)),
            ("f^fp", self.transform(FP)),
            ("f^fpc", self.transform(FPC)),
            ("(f^d)^fp", d.transform(FP)),
            ("(f^d)^fpc", d.transform(FPC)),
        ]
    }

    /// Verifies that the cube of opposition on `self` commutes: every edge
    /// identity holds, each transform is involutive on every vertex, and the
    /// vertex set is closed under all five transforms.
    pub fn cube_check(&self) -> bool {
        use TransformKind::*;
        let v = self.cube_vertices();
        let [f, fc, fd, fdc, ffp, ffpc, fdfp, fdfpc] = v.each_ref().map(|(_, o)| o);
        let edges = fc.transform(D) == *fdc
            && fd.transform(C) == *fdc
            && fdc.transform(FP) == ffp.transform(D)
            && ffp.transform(D) == *fdfpc
            && fdc.transform(FPC) == ffpc.transform(D)
            && ffpc.transform(D) == *fdfp
            && ffp.transform(C) == *ffpc
            && fc.transform(FP) == *ffpc
            && fdfp.transform(C) == *fdfpc
            && fd.transform(D) == *f;
        if !edges {
            return false;
        }
        v.iter().all(|(_, o)| {
            TransformKind::ALL.iter().all(|&k| {
                let t = o.transform(k);
                t.transform(k) == *o && v.iter().any(|(_, w)| *w == t)
            })
        })
    }

    /// Position of `self` in the enumeration order (entry 0 least significant).
    pub fn index(&self) -> Option<u64> {
        let n = self.domain.points();
        if n > ENUM_MAX_POINTS {
            return None;
        }
        Some(self.table.iter().enumerate().fold(0u64, |acc, (j, &y)| acc | (y as u64) << (n * j)))
    }

    /// Inverse of [`Operator::index`].
    pub fn at_index(domain: PointDomain, index: u64) -> Result<Operator> {
        let total = operator_count(domain)?;
        if index >= total {
            return Err(TbaError::Usage(format!("operator index {index} out of range 0..{total}")));
        }
        Ok(Operator::at_index_unchecked(domain, index))
    }

    #[inline]
    pub(crate) fn at_index_unchecked(domain: PointDomain, index: u64) -> Operator {
        let n = domain.points();
        let m = domain.mask() as u64;
        let table = (0..domain.size()).map(|j| ((index >> (n * j)) & m) as u32).collect();
        Operator { domain, table }
    }

    /// Uniform random table, deterministic per seed.
    pub fn sample(domain: PointDomain, seed: u64) -> Operator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Operator::sample_with(domain, &mut rng)
    }

    pub fn sample_with(domain: PointDomain, rng: &mut impl Rng) -> Operator {
        let m = domain.mask();
        let table = (0..domain.size()).map(|_| rng.random::<u32>() & m).collect();
        Operator { domain, table }
    }
}

/// Size of the operator space on `domain`, if it is enumerable.
pub fn operator_count(domain: PointDomain) -> Result<u64> {
    let n = domain.points();
    if n > ENUM_MAX_POINTS {
        return Err(TbaError::Capacity {
            what: format!("enumerating all operators on {n} points"),
            limit: ENUM_MAX_POINTS,
        });
    }
    Ok(1u64 << (n * domain.size()))
}

/// All operators on `domain` in ascending index order.
pub fn enumerate_operators(domain: PointDomain) -> Result<impl Iterator<Item = Operator>> {
    let total = operator_count(domain)?;
    Ok((0..total).map(move |i| Operator::at_index_unchecked(domain, i)))
}

/// Shorthand for [`Operator::sample`].
pub fn sample_operator(domain: PointDomain, seed: u64) -> Operator {
    Operator::sample(domain, seed)
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    points: usize,
    table: Vec<u32>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRepr { points: self.domain.points(), table: self.table.to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(d)?;
        let domain = PointDomain::new(r.points).map_err(serde::de::Error::custom)?;
        Operator::new(domain, r.table).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par;

    fn d(n: usize) -> PointDomain {
        PointDomain::new(n).unwrap()
    }

    /// Closure of the indiscrete space: `⊥ ↦ ⊥`, everything else `↦ ⊤`.
    fn indiscrete(n: usize) -> Operator {
        Operator::from_fn(d(n), |x| if x == 0 { 0 } else { u32::MAX })
    }

    /// Direct pointwise reading of each transform, used as an oracle.
    fn transform_oracle(f: &Operator, k: TransformKind) -> Operator {
        let dom = f.domain();
        let table: Vec<u32> = dom
            .elements()
            .map(|x| {
                let r = match k {
                    TransformKind::C => !f.call(x),
                    TransformKind::D => !f.call(!x),
                    TransformKind::DC => f.call(!x),
                    TransformKind::FP => f.call(x).iff(x).unwrap(),
                    TransformKind::FPC => f.call(x) ^ x,
                };
                r.bits()
            })
            .collect();
        Operator::new(dom, table).unwrap()
    }

    #[test]
    fn lifted_ops() {
        let dom = d(1);
        let n = Operator::negation(dom);
        let e = Operator::identity(dom);
        assert_eq!(n.meet(&e).unwrap(), Operator::bottom(dom));
        assert_eq!(n.meet(&e).unwrap().table(), &[0, 0]);
        assert_eq!(n.join(&e).unwrap(), Operator::top(dom));
        for seed in 0..100 {
            let f = Operator::sample(d(2), seed);
            assert_eq!(f.implies(&f).unwrap(), Operator::top(d(2)));
        }
        assert!(n.meet(&Operator::identity(d(2))).is_err());
    }

    #[test]
    fn transform_examples() {
        assert_eq!(Operator::bottom(d(1)).transform(TransformKind::D), Operator::top(d(1)));
        assert_eq!(Operator::identity(d(2)).transform(TransformKind::FP), Operator::top(d(2)));
    }

    #[test]
    fn transforms_match_pointwise_oracle() {
        for f in enumerate_operators(d(2)).unwrap() {
            for k in TransformKind::ALL {
                assert_eq!(f.transform(k), transform_oracle(&f, k));
            }
        }
    }

    #[test]
    fn minimal_signature_identities() {
        let dom = d(2);
        let n = Operator::negation(dom);
        let e = Operator::identity(dom);
        for f in enumerate_operators(dom).unwrap() {
            let fc = f.transform(TransformKind::C);
            assert_eq!(fc, n.compose(&f).unwrap());
            assert_eq!(f.transform(TransformKind::DC), f.compose(&n).unwrap());
            assert_eq!(f.transform(TransformKind::D), n.compose(&f.compose(&n).unwrap()).unwrap());
            let fp = f.meet(&e).unwrap().join(&fc.meet(&n).unwrap()).unwrap();
            assert_eq!(f.transform(TransformKind::FP), fp);
            let fpc = f.join(&e).unwrap().meet(&fc.join(&n).unwrap()).unwrap();
            assert_eq!(f.transform(TransformKind::FPC), fpc);
            assert_eq!(f.transform(TransformKind::FPC), f.transform(TransformKind::FP).compl());
            assert_eq!(f.transform(TransformKind::FPC), fc.transform(TransformKind::FP));
        }
    }

    #[test]
    fn compose_examples() {
        let dom = d(2);
        let n = Operator::negation(dom);
        assert_eq!(n.compose(&n).unwrap(), Operator::identity(dom));
        for seed in 0..100 {
            let f = Operator::sample(dom, seed);
            assert_eq!(f.compose(&Operator::identity(dom)).unwrap(), f);
        }
        let c = indiscrete(2);
        assert_eq!(c.compose(&n).unwrap().table(), &[3, 3, 3, 0]);
        assert_eq!(c.power(3).unwrap(), c);
        assert!(c.power(0).is_err());
    }

    #[test]
    fn fixed_points_examples() {
        let dom = d(2);
        assert_eq!(Operator::identity(dom).fixed_points(), dom.powerset());
        let fp = indiscrete(2).fixed_points();
        assert_eq!(fp, Family::new(dom, [dom.bottom(), dom.top()]).unwrap());
        for f in enumerate_operators(dom).unwrap() {
            let ffp = f.transform(TransformKind::FP);
            for x in dom.elements() {
                assert_eq!(f.fixed_points().contains(x), ffp.call(x).is_top());
            }
            let dual = f.transform(TransformKind::D).fixed_points();
            assert_eq!(dual, f.fixed_points().complements());
        }
    }

    #[test]
    fn image_and_range() {
        let dom = d(2);
        let s = Family::from_masks(dom, [1, 2]).unwrap();
        assert_eq!(Operator::identity(dom).image(&s).unwrap(), s);
        assert_eq!(
            Operator::top(dom).image(&s).unwrap(),
            Family::new(dom, [dom.top()]).unwrap()
        );
        assert_eq!(indiscrete(2).range(), Family::from_masks(dom, [0, 3]).unwrap());
    }

    #[test]
    fn cube_examples() {
        for f in enumerate_operators(d(1)).unwrap() {
            assert!(f.cube_check());
        }
        let v = Operator::identity(d(1)).cube_vertices();
        assert_eq!(v[4].1, Operator::top(d(1)));
        assert_eq!(v[5].1, Operator::bottom(d(1)));
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_operators(d(1)).unwrap().count(), 4);
        assert_eq!(operator_count(d(2)).unwrap(), 256);
        assert_eq!(operator_count(d(3)).unwrap(), 16_777_216);
        assert!(enumerate_operators(d(4)).is_err());
        let ops: Vec<_> = enumerate_operators(d(2)).unwrap().collect();
        assert_eq!(ops.len(), 256);
        for (i, f) in ops.iter().enumerate() {
            assert_eq!(f.index(), Some(i as u64));
            assert_eq!(&Operator::at_index(d(2), i as u64).unwrap(), f);
        }
        assert_eq!(ops[0], Operator::bottom(d(2)));
        assert_eq!(ops[1].table(), &[1, 0, 0, 0]);
        assert_eq!(ops[4].table(), &[0, 1, 0, 0]);
        assert!(Operator::at_index(d(2), 256).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = Operator::sample(d(3), 7);
        let b = Operator::sample(d(3), 7);
        assert_eq!(a, b);
        assert_ne!(a, Operator::sample(d(3), 8));
        assert_eq!(a.table().len(), 8);
    }

    #[test]
    fn serde_roundtrip_and_validation() {
        let f = indiscrete(2);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"points":2,"table":[0,3,3,3]}"#);
        let g: Operator = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(serde_json::from_str::<Operator>(r#"{"points":2,"table":[0,3,3]}"#).is_err());
        assert!(serde_json::from_str::<Operator>(r#"{"points":2,"table":[0,3,3,4]}"#).is_err());
    }

    #[test]
    fn involutions_at_three_points_sampled() {
        let dom = d(3);
        assert!(par::all(0..10_000, |seed| {
            let f = Operator::sample(dom, seed);
            TransformKind::ALL.iter().all(|&k| f.transform(k).transform(k) == f)
        }));
    }
}
