//! Catalog of axiomatic conditions on operators, with counterexample search.
//!
//! Binary conditions quantify over all ordered pairs `(A, B)`. Infinitary
//! conditions quantify over families of elements; the family space is
//! enumerated exactly up to [`EXACT_FAMILY_MAX_POINTS`] points and sampled
//! beyond that.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Result, TbaError};
use crate::lattice::{Element, Family, PointDomain};
use crate::operator::{enumerate_operators, operator_count, Operator, TransformKind};
use crate::par;

/// Families are enumerated exhaustively (`2^(2^n)` of them) up to this many points.
pub const EXACT_FAMILY_MAX_POINTS: usize = 4;
/// Largest family size enumerated exhaustively in bounded mode.
pub const FAM_BOUND: usize = 3;
/// Random families added in bounded mode.
pub const DEFAULT_FAMILY_SAMPLES: usize = 256;
const SUBFAMILY_BUDGET: u64 = 1 << 16;

macro_rules! conditions {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Identifier of an axiomatic condition.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum ConditionId { $($variant),* }

        impl ConditionId {
            pub const ALL: &'static [ConditionId] = &[$(ConditionId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(ConditionId::$variant => $name),* }
            }
        }

        impl FromStr for ConditionId {
            type Err = TbaError;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(ConditionId::$variant),)*
                    _ => Err(TbaError::UnknownName(s.to_string())),
                }
            }
        }
    };
}

conditions! {
    Mono => "MONO",
    AddiA => "ADDI_a", AddiB => "ADDI_b", Addi => "ADDI",
    MultA => "MULT_a", MultB => "MULT_b", Mult => "MULT",
    Expn => "EXPN", Cntr => "CNTR", Norm => "NORM", Dnrm => "DNRM",
    IdemA => "IDEM_a", IdemB => "IDEM_b", Idem => "IDEM",
    IAddiA => "iADDI_a", IAddiB => "iADDI_b", IAddi => "iADDI",
    IMultA => "iMULT_a", IMultB => "iMULT_b", IMult => "iMULT",
    Anti => "ANTI",
    NAddiA => "nADDI_a", NAddiB => "nADDI_b", NAddi => "nADDI",
    NMultA => "nMULT_a", NMultB => "nMULT_b", NMult => "nMULT",
    NExpn => "nEXPN", NCntr => "nCNTR", NNorm => "nNORM", NDnrm => "nDNRM",
    NIdemA => "nIDEM_a", NIdemB => "nIDEM_b", NIdem => "nIDEM",
    InAddiA => "inADDI_a", InAddiB => "inADDI_b", InAddi => "inADDI",
    InMultA => "inMULT_a", InMultB => "inMULT_b", InMult => "inMULT",
    AddirA => "ADDIr_a", AddirB => "ADDIr_b", Addir => "ADDIr",
    MultrA => "MULTr_a", MultrB => "MULTr_b", Multr => "MULTr",
    IAddirA => "iADDIr_a", IAddirB => "iADDIr_b", IAddir => "iADDIr",
    IMultrA => "iMULTr_a", IMultrB => "iMULTr_b", IMultr => "iMULTr",
    IdemrA => "IDEMr_a", IdemrB => "IDEMr_b", Idemr => "IDEMr",
    NAddirA => "nADDIr_a", NAddirB => "nADDIr_b", NAddir => "nADDIr",
    NMultrA => "nMULTr_a", NMultrB => "nMULTr_b", NMultr => "nMULTr",
    InAddirA => "inADDIr_a", InAddirB => "inADDIr_b", InAddir => "inADDIr",
    InMultrA => "inMULTr_a", InMultrB => "inMULTr_b", InMultr => "inMULTr",
    NIdemrA => "nIDEMr_a", NIdemrB => "nIDEMr_b", NIdemr => "nIDEMr",
    MonoW1 => "MONOw1", MonoW2 => "MONOw2", AntiW1 => "ANTIw1", AntiW2 => "ANTIw2",
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Quantifier shape of an atomic condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Nullary,
    Unary,
    Binary,
    Family,
}

impl ConditionId {
    /// The atomic conditions a composite condition is the conjunction of.
    pub fn components(self) -> &'static [ConditionId] {
        use ConditionId::*;
        match self {
            Addi => &[AddiA, AddiB],
            Mult => &[MultA, MultB],
            Idem => &[IdemA, IdemB],
            IAddi => &[IAddiA, IAddiB],
            IMult => &[IMultA, IMultB],
            NAddi => &[NAddiA, NAddiB],
            NMult => &[NMultA, NMultB],
            NIdem => &[NIdemA, NIdemB],
            InAddi => &[InAddiA, InAddiB],
            InMult => &[InMultA, InMultB],
            Addir => &[AddirA, AddirB],
            Multr => &[MultrA, MultrB],
            IAddir => &[IAddirA, IAddirB],
            IMultr => &[IMultrA, IMultrB],
            Idemr => &[IdemrA, IdemrB],
            NAddir => &[NAddirA, NAddirB],
            NMultr => &[NMultrA, NMultrB],
            InAddir => &[InAddirA, InAddirB],
            InMultr => &[InMultrA, InMultrB],
            NIdemr => &[NIdemrA, NIdemrB],
            _ => &[],
        }
    }

    pub fn is_composite(self) -> bool {
        !self.components().is_empty()
    }

    pub fn arity(self) -> Arity {
        use ConditionId::*;
        match self {
            Norm | Dnrm | NNorm | NDnrm => Arity::Nullary,
            Expn | Cntr | IdemA | IdemB | NExpn | NCntr | NIdemA | NIdemB | IdemrA | IdemrB
            | NIdemrA | NIdemrB => Arity::Unary,
            IAddiA | IAddiB | IMultA | IMultB | InAddiA | InAddiB | InMultA | InMultB
            | IAddirA | IAddirB | IMultrA | IMultrB | InAddirA | InAddirB | InMultrA
            | InMultrB => Arity::Family,
            c if c.is_composite() => c.components()[0].arity(),
            _ => Arity::Binary,
        }
    }

    pub fn is_infinitary(self) -> bool {
        self.arity() == Arity::Family
    }
}

/// The instance on which a condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The atomic condition that failed (differs from the report's id for composites).
    pub component: ConditionId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub condition: ConditionId,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Set when an infinitary condition was only checked on a subset of families.
    pub approximate: bool,
}

/// Knobs for bounded infinitary checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub family_samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { family_samples: DEFAULT_FAMILY_SAMPLES, seed: 0x7ba5eed }
    }
}

#[inline]
fn leq(x: u32, y: u32) -> bool {
    x & !y == 0
}

#[inline]
fn leq_in(x: u32, y: u32, u: u32) -> bool {
    x & !y & u == 0
}

#[inline]
fn leq_out(x: u32, y: u32, u: u32, m: u32) -> bool {
    x & !y & !u & m == 0
}

fn nullary_holds(c: ConditionId, t: &[u32], m: u32) -> bool {
    use ConditionId::*;
    match c {
        Norm => t[0] == 0,
        Dnrm => t[m as usize] == m,
        NNorm => t[0] == m,
        NDnrm => t[m as usize] == 0,
        _ => unreachable!("{c} is not nullary"),
    }
}

fn unary_holds(c: ConditionId, t: &[u32], m: u32, a: u32) -> bool {
    use ConditionId::*;
    let f = |x: u32| t[x as usize];
    let fa = f(a);
    match c {
        Expn => leq(a, fa),
        Cntr => leq(fa, a),
        IdemA => leq(f(fa), fa),
        IdemB => leq(fa, f(fa)),
        NExpn => leq(fa, !a & m),
        NCntr => leq(!a & m, fa),
        NIdemA => leq(fa, f(!fa & m)),
        NIdemB => leq(f(!fa & m), fa),
        IdemrA => leq_out(f(a | fa), fa, a, m),
        IdemrB => leq_in(fa, f(a & fa), a),
        NIdemrA => leq_out(fa, f(a | (!fa & m)), a, m),
        NIdemrB => leq_in(f(a & !fa), fa, a),
        _ => unreachable!("{c} is not unary"),
    }
}

fn binary_holds(c: ConditionId, t: &[u32], m: u32, a: u32, b: u32) -> bool {
    use ConditionId::*;
    let f = |x: u32| t[x as usize];
    let (fa, fb) = (f(a), f(b));
    let (j, k) = (a | b, a & b);
    match c {
        Mono => !leq(a, b) || leq(fa, fb),
        Anti => !leq(a, b) || leq(fb, fa),
        AddiA => leq(f(j), fa | fb),
        AddiB => leq(fa | fb, f(j)),
        MultA => leq(f(k), fa & fb),
        MultB => leq(fa & fb, f(k)),
        NAddiA => leq(fa & fb, f(j)),
        NAddiB => leq(f(j), fa & fb),
        NMultA => leq(fa | fb, f(k)),
        NMultB => leq(f(k), fa | fb),
        AddirA => leq_out(f(j), fa | fb, j, m),
        AddirB => leq_out(fa | fb, f(j), j, m),
        MultrA => leq_in(f(k), fa & fb, k),
        MultrB => leq_in(fa & fb, f(k), k),
        NAddirA => leq_out(fa & fb, f(j), j, m),
        NAddirB => leq_out(f(j), fa & fb, j, m),
        NMultrA => leq_in(fa | fb, f(k), k),
        NMultrB => leq_in(f(k), fa | fb, k),
        MonoW1 => !leq(a, b) || leq(fa, b | fb),
        MonoW2 => !leq(a, b) || leq(a & fa, fb),
        AntiW1 => !leq(a, b) || leq(fb, b | fa),
        AntiW2 => !leq(a, b) || leq(a & fb, fa),
        _ => unreachable!("{c} is not binary"),
    }
}

/// Aggregates of a family `S` under an operator `f`.
#[derive(Clone, Copy, Debug)]
struct FamilyAgg {
    join: u32,
    meet: u32,
    img_join: u32,
    img_meet: u32,
}

impl FamilyAgg {
    fn of(t: &[u32], m: u32, members: impl IntoIterator<Item = u32>) -> Self {
        let mut agg = FamilyAgg { join: 0, meet: m, img_join: 0, img_meet: m };
        for x in members {
            let y = t[x as usize];
            agg.join |= x;
            agg.meet &= x;
            agg.img_join |= y;
            agg.img_meet &= y;
        }
        agg
    }
}

fn family_holds(c: ConditionId, t: &[u32], m: u32, g: FamilyAgg) -> bool {
    use ConditionId::*;
    let (fj, fm) = (t[g.join as usize], t[g.meet as usize]);
    let (ij, im) = (g.img_join, g.img_meet);
    match c {
        IAddiA => leq(fj, ij),
        IAddiB => leq(ij, fj),
        IMultA => leq(fm, im),
        IMultB => leq(im, fm),
        InAddiA => leq(im, fj),
        InAddiB => leq(fj, im),
        InMultA => leq(ij, fm),
        InMultB => leq(fm, ij),
        IAddirA => leq_out(fj, ij, g.join, m),
        IAddirB => leq_out(ij, fj, g.join, m),
        IMultrA => leq_in(fm, im, g.meet),
        IMultrB => leq_in(im, fm, g.meet),
        InAddirA => leq_out(im, fj, g.join, m),
        InAddirB => leq_out(fj, im, g.join, m),
        InMultrA => leq_in(ij, fm, g.meet),
        InMultrB => leq_in(fm, ij, g.meet),
        _ => unreachable!("{c} is not infinitary"),
    }
}

/// Family members encoded as a selector: bit `i` set iff element `i` belongs.
fn selector_members(selector: u64, size: usize) -> impl Iterator<Item = u32> {
    (0..size as u32).filter(move |&i| selector >> i & 1 == 1)
}

/// Visits every family the check covers; returns `(first failing family, approximate)`.
fn search_families(
    domain: PointDomain,
    opts: &CheckOptions,
    mut fails: impl FnMut(&[u32]) -> bool,
) -> (Option<Vec<u32>>, bool) {
    let size = domain.size();
    if domain.points() <= EXACT_FAMILY_MAX_POINTS {
        let mut buf: SmallVec<[u32; 16]> = SmallVec::new();
        for sel in 0u64..1 << size {
            buf.clear();
            buf.extend(selector_members(sel, size));
            if fails(&buf) {
                return (Some(buf.to_vec()), false);
            }
        }
        return (None, false);
    }

    if fails(&[]) {
        return (Some(Vec::new()), true);
    }
    let all: Vec<u32> = (0..size as u32).collect();
    if fails(&all) {
        return (Some(all), true);
    }
    // every family of size k while the count stays within budget
    let mut k = 1;
    while k <= FAM_BOUND && binomial(size as u64, k as u64) <= SUBFAMILY_BUDGET {
        let mut idx: Vec<u32> = (0..k as u32).collect();
        loop {
            if fails(&idx) {
                return (Some(idx), true);
            }
            if !next_combination(&mut idx, size as u32) {
                break;
            }
        }
        k += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.family_samples {
        let len = rng.random_range(2..=size.min(12));
        let mut fam: Vec<u32> = (0..len).map(|_| rng.random_range(0..size as u32)).collect();
        fam.sort_unstable();
        fam.dedup();
        if fails(&fam) {
            return (Some(fam), true);
        }
    }
    (None, true)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn next_combination(idx: &mut [u32], n: u32) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - (k - i) as u32 {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks `c` on `f` with default options.
pub fn check(c: ConditionId, f: &Operator) -> CheckReport {
    check_with(c, f, &CheckOptions::default())
}

pub fn check_with(c: ConditionId, f: &Operator, opts: &CheckOptions) -> CheckReport {
    if c.is_composite() {
        let mut approximate = false;
        for &part in c.components() {
            let r = check_with(part, f, opts);
            approximate |= r.approximate;
            if !r.holds {
                return CheckReport { condition: c, holds: false, witness: r.witness, approximate };
            }
        }
        return CheckReport { condition: c, holds: true, witness: None, approximate };
    }

    let domain = f.domain();
    let t = f.table();
    let m = domain.mask();
    let el = |x: u32| domain.element(x).expect("in range");
    let witness = |a: Option<u32>, b: Option<u32>, family: Option<Family>| Witness {
        component: c,
        a: a.map(el),
        b: b.map(el),
        family,
    };
    let size = domain.size() as u32;
    let (witness, approximate) = match c.arity() {
        Arity::Nullary => {
            let w = (!nullary_holds(c, t, m)).then(|| {
                let a = if matches!(c, ConditionId::Norm | ConditionId::NNorm) { 0 } else { m };
                witness(Some(a), None, None)
            });
            (w, false)
        }
        Arity::Unary => {
            let w = (0..size).find(|&a| !unary_holds(c, t, m, a)).map(|a| witness(Some(a), None, None));
            (w, false)
        }
        Arity::Binary => {
            let w = (0..size)
                .flat_map(|a| (0..size).map(move |b| (a, b)))
                .find(|&(a, b)| !binary_holds(c, t, m, a, b))
                .map(|(a, b)| witness(Some(a), Some(b), None));
            (w, false)
        }
        Arity::Family => {
            let (fam, approx) = search_families(domain, opts, |members| {
                !family_holds(c, t, m, FamilyAgg::of(t, m, members.iter().copied()))
            });
            let w = fam.map(|fam| {
                let fam = Family::from_masks(domain, fam).expect("in range");
                witness(None, None, Some(fam))
            });
            (w, approx)
        }
    };
    CheckReport { condition: c, holds: witness.is_none(), witness, approximate }
}

/// Shorthand for `check(c, f).holds`.
pub fn holds(c: ConditionId, f: &Operator) -> bool {
    check(c, f).holds
}

/// Re-evaluates a witness: true iff the recorded instance violates its component.
pub fn violated_by(f: &Operator, w: &Witness) -> Result<bool> {
    let c = w.component;
    let t = f.table();
    let m = f.domain().mask();
    let bits = |e: Option<Element>| -> Result<u32> {
        let e = e.ok_or_else(|| TbaError::Usage(format!("witness for {c} is missing an element")))?;
        f.domain().check_same(e.domain())?;
        Ok(e.bits())
    };
    Ok(match c.arity() {
        Arity::Nullary => !nullary_holds(c, t, m),
        Arity::Unary => !unary_holds(c, t, m, bits(w.a)?),
        Arity::Binary => !binary_holds(c, t, m, bits(w.a)?, bits(w.b)?),
        Arity::Family => {
            let fam = w
                .family
                .as_ref()
                .ok_or_else(|| TbaError::Usage(format!("witness for {c} is missing a family")))?;
            f.domain().check_same(fam.domain())?;
            !family_holds(c, t, m, FamilyAgg::of(t, m, fam.iter().map(|e| e.bits())))
        }
    })
}

/// Outcome of comparing two conditions over a whole operator space.
#[derive(Clone, Debug, Serialize)]
pub struct EquivScan {
    pub first: ConditionId,
    pub second: ConditionId,
    pub operators: u64,
    pub equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Operator>,
}

/// Compares `c1` and `c2` on every operator of `domain`.
pub fn check_equiv_scan(c1: ConditionId, c2: ConditionId, domain: PointDomain) -> Result<EquivScan> {
    let total = operator_count(domain)?;
    let mismatch = par::find_first(0..total, |i| {
        let f = Operator::at_index_unchecked(domain, i);
        (holds(c1, &f) != holds(c2, &f)).then_some(f)
    });
    Ok(EquivScan { first: c1, second: c2, operators: total, equivalent: mismatch.is_none(), mismatch })
}

/// Condition pairs related by a transformation: `c` holds of `f` iff `c2` holds of `f^k`.
pub const TRANSFORM_PAIRS: &[(ConditionId, ConditionId, TransformKind)] = {
    use ConditionId::*;
    use TransformKind::{C, D, DC};
    &[
        // duals
        (AddiA, MultB, D),
        (AddiB, MultA, D),
        (Expn, Cntr, D),
        (Norm, Dnrm, D),
        (IdemA, IdemB, D),
        (IAddiA, IMultB, D),
        (IAddiB, IMultA, D),
        (Mono, Mono, D),
        (Anti, Anti, D),
        (NAddiA, NMultB, D),
        (NAddiB, NMultA, D),
        (InAddiA, InMultB, D),
        (InAddiB, InMultA, D),
        (NExpn, NCntr, D),
        (NNorm, NDnrm, D),
        (NIdemA, NIdemB, D),
        (AddirA, MultrB, D),
        (AddirB, MultrA, D),
        (IAddirA, IMultrB, D),
        (IAddirB, IMultrA, D),
        (IdemrA, IdemrB, D),
        (NAddirA, NMultrB, D),
        (NAddirB, NMultrA, D),
        (InAddirA, InMultrB, D),
        (InAddirB, InMultrA, D),
        (NIdemrA, NIdemrB, D),
        (MonoW1, MonoW2, D),
        (AntiW1, AntiW2, D),
        // complements
        (AddiA, NAddiA, C),
        (AddiB, NAddiB, C),
        (IAddiA, InAddiA, C),
        (IAddiB, InAddiB, C),
        (Expn, NExpn, C),
        (Norm, NNorm, C),
        (IdemA, NIdemA, C),
        (Mono, Anti, C),
        // dual-complements
        (AddiA, NMultB, DC),
        (AddiB, NMultA, DC),
        (IAddiA, InMultB, DC),
        (IAddiB, InMultA, DC),
        (Expn, NCntr, DC),
        (Norm, NDnrm, DC),
        (IdemA, NIdemB, DC),
        (Mono, Anti, DC),
    ]
};

/// True iff `c` holds of `f` exactly when `c2` holds of `f^k`.
pub fn check_dual_pair(c: ConditionId, c2: ConditionId, k: TransformKind, f: &Operator) -> bool {
    holds(c, f) == holds(c2, &f.transform(k))
}

/// Triples `(c, c_fp, c_fpc)`: `c f ⇔ c_fp f^fp ⇔ c_fpc f^fpc`.
pub const FP_TRIPLES: &[(ConditionId, ConditionId, ConditionId)] = {
    use ConditionId::*;
    &[
        (Expn, Expn, NExpn),
        (Cntr, NCntr, Cntr),
        (Norm, NNorm, Norm),
        (Dnrm, Dnrm, NDnrm),
        (AddirA, NAddirA, AddirA),
        (AddirB, NAddirB, AddirB),
        (IAddirA, InAddirA, IAddirA),
        (IAddirB, InAddirB, IAddirB),
        (MultrA, MultrA, NMultrA),
        (MultrB, MultrB, NMultrB),
        (IMultrA, IMultrA, InMultrA),
        (IMultrB, IMultrB, InMultrB),
        (IdemrA, NIdemrA, IdemrA),
        (IdemrB, IdemrB, NIdemrB),
    ]
};

/// Evaluates the three-way biconditional keyed by `c`.
pub fn check_fp_triple(c: ConditionId, f: &Operator) -> Result<bool> {
    let &(_, c_fp, c_fpc) = FP_TRIPLES
        .iter()
        .find(|t| t.0 == c)
        .ok_or_else(|| TbaError::Usage(format!("no fixed-point triple for {c}")))?;
    let a = holds(c, f);
    let b = holds(c_fp, &f.transform(TransformKind::FP));
    let d = holds(c_fpc, &f.transform(TransformKind::FPC));
    Ok(a == b && b == d)
}

/// A conditional equivalence: under any premise, the listed conditions coincide.
#[derive(Clone, Copy, Debug)]
pub struct Bridge {
    pub premises: &'static [ConditionId],
    pub equivalent: &'static [ConditionId],
}

pub const BRIDGES: [Bridge; 8] = {
    use ConditionId::*;
    [
        Bridge { premises: &[Expn, NExpn], equivalent: &[AddiA, AddirA] },
        Bridge { premises: &[Expn], equivalent: &[AddiB, AddirB, MonoW1] },
        Bridge { premises: &[Cntr], equivalent: &[MultA, MultrA, MonoW2] },
        Bridge { premises: &[Cntr, NCntr], equivalent: &[MultB, MultrB] },
        Bridge { premises: &[Expn, NExpn], equivalent: &[NAddiA, NAddirA] },
        Bridge { premises: &[NExpn], equivalent: &[NAddiB, NAddirB, AntiW1] },
        Bridge { premises: &[NCntr], equivalent: &[NMultA, NMultrA, AntiW2] },
        Bridge { premises: &[Cntr, NCntr], equivalent: &[NMultB, NMultrB] },
    ]
};

impl fmt::Display for Bridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<_> = self.premises.iter().map(|c| c.name()).collect();
        let e: Vec<_> = self.equivalent.iter().map(|c| c.name()).collect();
        write!(f, "given {}: {}", p.join(" or "), e.join(" <=> "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeOutcome {
    pub bridge: String,
    /// Whether some premise holds of the operator.
    pub applies: bool,
    /// False only if the bridge applies and the conditions disagree.
    pub holds: bool,
}

/// Evaluates each of the eight bridges on `f`.
pub fn check_relativization_bridge(f: &Operator) -> Vec<BridgeOutcome> {
    BRIDGES
        .iter()
        .map(|b| {
            let applies = b.premises.iter().any(|&p| holds(p, f));
            let first = holds(b.equivalent[0], f);
            let agree = b.equivalent.iter().all(|&c| holds(c, f) == first);
            BridgeOutcome { bridge: b.to_string(), applies, holds: !applies || agree }
        })
        .collect()
}

/// First operator (in enumeration order) where `weaker` holds but `stronger` fails.
pub fn find_separating(
    stronger: ConditionId,
    weaker: ConditionId,
    domain: PointDomain,
) -> Result<Option<Operator>> {
    let total = operator_count(domain)?;
    Ok(par::find_first(0..total, |i| {
        let f = Operator::at_index_unchecked(domain, i);
        (holds(weaker, &f) && !holds(stronger, &f)).then_some(f)
    }))
}

/// Complete additivity through atoms: `f(⊥) = ⊥` and `f(X)` is the join of
/// `f({j})` over the points `j` of `X`. Agrees with exact `iADDI` on finite
/// domains; see [`validate_fast_iaddi`].
pub fn iaddi_fast(f: &Operator) -> bool {
    let t = f.table();
    if t[0] != 0 {
        return false;
    }
    let n = f.domain().points();
    (1..t.len() as u32).all(|x| {
        let via_atoms = (0..n).filter(|j| x >> j & 1 == 1).fold(0, |acc, j| acc | t[1 << j]);
        t[x as usize] == via_atoms
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FastPathValidation {
    pub operators: u64,
    pub agreements: u64,
    pub positives: u64,
}

impl FastPathValidation {
    pub fn ok(&self) -> bool {
        self.operators == self.agreements
    }
}

/// Compares [`iaddi_fast`] with the naive family check on the given operators.
pub fn validate_fast_iaddi<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> FastPathValidation {
    let mut v = FastPathValidation { operators: 0, agreements: 0, positives: 0 };
    for f in ops {
        let naive = holds(ConditionId::IAddi, f);
        v.operators += 1;
        v.positives += naive as u64;
        v.agreements += (naive == iaddi_fast(f)) as u64;
    }
    v
}

/// One implication between conditions and closure properties of `fp f`.
#[derive(Clone, Debug, Serialize)]
pub struct LinkOutcome {
    pub link: &'static str,
    pub holds: bool,
}

/// The implications linking conditions to closure properties of the fixed points.
pub fn fixed_point_links(f: &Operator) -> Vec<LinkOutcome> {
    use ConditionId::*;
    let fp = f.fixed_points();
    let h = |c| holds(c, f);
    let mono = h(Mono);
    let links: [(&'static str, bool, bool); 10] = [
        ("MULT => meet_closed(fp)", h(Mult), fp.meet_closed()),
        ("iMULT => infimum_closed(fp)", h(IMult), fp.infimum_closed()),
        ("ADDI => join_closed(fp)", h(Addi), fp.join_closed()),
        ("iADDI => supremum_closed(fp)", h(IAddi), fp.supremum_closed()),
        (
            "MONO & CNTR & IDEM_b & meet_closed(fp) => MULT",
            mono && h(Cntr) && h(IdemB) && fp.meet_closed(),
            h(Mult),
        ),
        (
            "MONO & CNTR & IDEM_b & infimum_closed(fp) => iMULT",
            mono && h(Cntr) && h(IdemB) && fp.infimum_closed(),
            h(IMult),
        ),
        (
            "MONO & EXPN & IDEM_a & join_closed(fp) => ADDI",
            mono && h(Expn) && h(IdemA) && fp.join_closed(),
            h(Addi),
        ),
        (
            "MONO & EXPN & IDEM_a & supremum_closed(fp) => iADDI",
            mono && h(Expn) && h(IdemA) && fp.supremum_closed(),
            h(IAddi),
        ),
        ("MONO & EXPN => infimum_closed(fp)", mono && h(Expn), fp.infimum_closed()),
        ("MONO & CNTR => supremum_closed(fp)", mono && h(Cntr), fp.supremum_closed()),
    ];
    links.iter().map(|&(link, pre, post)| LinkOutcome { link, holds: !pre || post }).collect()
}

/// All operators on `domain` satisfying every condition in `conds`.
pub fn operators_satisfying(domain: PointDomain, conds: &[ConditionId]) -> Result<Vec<Operator>> {
    let ops = enumerate_operators(domain)?;
    Ok(ops.filter(|f| conds.iter().all(|&c| holds(c, f))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::enumerate_operators;
    use ConditionId::*;

    fn d(n: usize) -> PointDomain {
        PointDomain::new(n).unwrap()
    }

    fn indiscrete(n: usize) -> Operator {
        Operator::from_fn(d(n), |x| if x == 0 { 0 } else { u32::MAX })
    }

    fn sierpinski_interior() -> Operator {
        Operator::new(d(2), [0, 1, 0, 3]).unwrap()
    }

    /// Naive evaluation of the definitions with `Element` arithmetic.
    fn oracle(c: ConditionId, f: &Operator) -> bool {
        let dom = f.domain();
        let els: Vec<Element> = dom.elements().collect();
        let ap = |x: Element| f.call(x);
        let le = |x: Element, y: Element| x.leq(y).unwrap();
        let le_in = |x: Element, y: Element, u: Element| (u & x).leq(u & y).unwrap();
        let le_out = |x: Element, y: Element, u: Element| (u | x).leq(u | y).unwrap();
        let pairs = || els.iter().flat_map(|&a| els.iter().map(move |&b| (a, b)));
        let fams = || (0u64..1 << dom.size()).map(|s| Family::from_selector(dom, s));
        let img_join = |s: &Family| f.image(s).unwrap().big_join();
        let img_meet = |s: &Family| f.image(s).unwrap().big_meet();
        match c {
            Mono => pairs().all(|(a, b)| !le(a, b) || le(ap(a), ap(b))),
            AddiA => pairs().all(|(a, b)| le(ap(a | b), ap(a) | ap(b))),
            MultB => pairs().all(|(a, b)| le(ap(a) & ap(b), ap(a & b))),
            Expn => els.iter().all(|&a| le(a, ap(a))),
            Norm => ap(dom.bottom()).is_bottom(),
            IdemrA => els.iter().all(|&a| le_out(ap(a | ap(a)), ap(a), a)),
            NIdemrB => els.iter().all(|&a| le_in(ap(a & !ap(a)), ap(a), a)),
            NMultrB => pairs().all(|(a, b)| le_in(ap(a & b), ap(a) | ap(b), a & b)),
            AddirB => pairs().all(|(a, b)| le_out(ap(a) | ap(b), ap(a | b), a | b)),
            IAddiA => fams().all(|s| le(ap(s.big_join()), img_join(&s))),
            IMultB => fams().all(|s| le(img_meet(&s), ap(s.big_meet()))),
            InMultrA => fams().all(|s| le_in(img_join(&s), ap(s.big_meet()), s.big_meet())),
            InAddirB => fams().all(|s| le_out(ap(s.big_join()), img_meet(&s), s.big_join())),
            _ => unimplemented!(),
        }
    }

    #[test]
    fn names_round_trip() {
        for &c in ConditionId::ALL {
            assert_eq!(c.name().parse::<ConditionId>().unwrap(), c);
        }
        assert!("FOO".parse::<ConditionId>().is_err());
        assert_eq!(NIdemrB.to_string(), "nIDEMr_b");
    }

    #[test]
    fn checkers_match_naive_displays() {
        let sample = [Mono, AddiA, MultB, Expn, Norm, IdemrA, NIdemrB, NMultrB, AddirB, IAddiA, IMultB, InMultrA, InAddirB];
        for f in enumerate_operators(d(2)).unwrap() {
            for &c in &sample {
                assert_eq!(holds(c, &f), oracle(c, &f), "{c} on {f:?}");
            }
        }
    }

    #[test]
    fn spec_examples() {
        assert!(holds(Expn, &indiscrete(2)));
        let r = check(Norm, &Operator::top(d(1)));
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().a, Some(d(1).bottom()));
        let r = check(IAddiA, &Operator::top(d(1)));
        assert!(!r.holds);
        assert!(r.witness.unwrap().family.unwrap().is_empty());
        assert!(!r.approximate);
    }

    #[test]
    fn witnesses_reverify() {
        for f in enumerate_operators(d(2)).unwrap().step_by(7) {
            for &c in ConditionId::ALL {
                let r = check(c, &f);
                match &r.witness {
                    Some(w) => {
                        assert!(!r.holds);
                        assert!(violated_by(&f, w).unwrap(), "{c} {f:?}");
                    }
                    None => assert!(r.holds),
                }
            }
        }
    }

    #[test]
    fn bounded_infinitary_checks_are_flagged() {
        let f = Operator::sample(d(5), 1);
        let r = check(IAddiA, &f);
        assert!(r.approximate);
        assert!(!check(IAddiA, &Operator::sample(d(3), 1)).approximate);
        // a Kripke diamond is completely additive, bounded mode must not refute it
        let dom = d(5);
        let succ = |w: u32| (1u32 << w) | (1 << ((w + 1) % 5));
        let dia = Operator::from_fn(dom, |x| (0..5).filter(|&w| succ(w) & x != 0).fold(0, |a, w| a | 1 << w));
        let r = check(IAddi, &dia);
        assert!(r.holds && r.approximate);
    }

    #[test]
    fn equivalence_scans() {
        assert!(check_equiv_scan(Mono, AddiB, d(2)).unwrap().equivalent);
        assert!(check_equiv_scan(Mono, MultA, d(2)).unwrap().equivalent);
        assert!(check_equiv_scan(Anti, NAddiB, d(2)).unwrap().equivalent);
        assert!(!check_equiv_scan(Mono, Anti, d(2)).unwrap().equivalent);
        assert!(check_equiv_scan(Mono, AddiB, d(4)).is_err());
    }

    #[test]
    fn transform_pairs_exact_at_two_points() {
        for f in enumerate_operators(d(2)).unwrap() {
            for &(c, c2, k) in TRANSFORM_PAIRS {
                assert!(check_dual_pair(c, c2, k, &f), "{c} / {c2} under {k:?} on {f:?}");
            }
        }
    }

    #[test]
    fn fp_triples_exact_at_two_points() {
        for f in enumerate_operators(d(2)).unwrap() {
            for &(c, _, _) in FP_TRIPLES {
                assert!(check_fp_triple(c, &f).unwrap(), "{c} on {f:?}");
            }
        }
        assert!(check_fp_triple(Mono, &indiscrete(2)).is_err());
    }

    #[test]
    fn bridges_exact_at_two_points() {
        for f in enumerate_operators(d(2)).unwrap() {
            for o in check_relativization_bridge(&f) {
                assert!(o.holds, "{} on {f:?}", o.bridge);
            }
        }
        let i = sierpinski_interior();
        assert!(holds(Cntr, &i) && holds(MultA, &i) && holds(MultrA, &i));
        let sep = find_separating(AddiB, AddirB, d(2)).unwrap().unwrap();
        assert!(holds(AddirB, &sep) && !holds(AddiB, &sep));
    }

    #[test]
    fn implications_at_two_points() {
        for f in enumerate_operators(d(2)).unwrap() {
            let h = |c| holds(c, &f);
            if h(Expn) {
                assert!(h(Dnrm) && h(IdemB));
            }
            if h(Cntr) {
                assert!(h(Norm) && h(IdemA));
            }
            let mono = h(Mono);
            for c in [AddiB, MultA, IAddiB, IMultA] {
                assert_eq!(h(c), mono);
            }
            let anti = h(Anti);
            for c in [NAddiB, NMultA, InAddiB, InMultA] {
                assert_eq!(h(c), anti);
            }
            assert_eq!(mono, holds(Mono, &f.transform(TransformKind::D)));
            if h(IAddi) {
                assert!(h(Addi) && h(Norm));
            }
            if h(IMult) {
                assert!(h(Mult) && h(Dnrm));
            }
            assert_eq!(h(MonoW1), h(AddirB));
            assert_eq!(h(MonoW2), h(MultrA));
            assert_eq!(h(AntiW1), h(NAddirB));
            assert_eq!(h(AntiW2), h(NMultrA));
            for l in fixed_point_links(&f) {
                assert!(l.holds, "{} on {f:?}", l.link);
            }
        }
    }

    #[test]
    fn nmultr_matches_border_form() {
        for f in enumerate_operators(d(2)).unwrap() {
            let dom = f.domain();
            let b1 = dom.elements().all(|a| {
                dom.elements().all(|b| {
                    let k = a & b;
                    k & f.call(k) == k & (f.call(a) | f.call(b))
                })
            });
            assert_eq!(holds(NMultr, &f), b1);
        }
    }

    #[test]
    fn fast_iaddi_agrees_with_naive() {
        let all: Vec<_> = enumerate_operators(d(2)).unwrap().collect();
        let v = validate_fast_iaddi(&all);
        assert!(v.ok() && v.operators == 256 && v.positives > 0);
        let sampled: Vec<_> = (0..200).map(|s| Operator::sample(d(3), s)).collect();
        assert!(validate_fast_iaddi(&sampled).ok());
    }
}
