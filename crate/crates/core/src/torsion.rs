//! Torsion pairs inside a 2-cluster-tilting subcategory: 2-finiteness,
//! orthogonality and maximality checks, canonical sequences, the pushout
//! lifting condition, and enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::highercat::{
    left_approximation, left_full_approximation, lift_through, right_approximation,
    right_full_approximation, ExactSeq, Subcat,
};
use crate::modcat::{cokernel, direct_sum, hom_dim, kernel, reject_into, trace_from, ModMap, Module};

/// Default cap on the number of indecomposables scanned by subset.
pub const SUBSET_BUDGET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiniteSide {
    Contra,
    Co,
}

/// Per-member outcome of a 2-finiteness check: the sequence
/// `X_2 -> X_1 -> M` (contra) or `M -> X^1 -> X^2` (co) and whether the Hom
/// sequence against every member of `C` is exact in the middle.
#[derive(Clone, Debug)]
pub struct FinitenessCert {
    pub member: usize,
    pub sequence: ExactSeq,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct FinitenessReport {
    pub side: FiniteSide,
    pub holds: bool,
    pub certs: Vec<FinitenessCert>,
}

impl FinitenessReport {
    pub fn failures(&self) -> Vec<usize> {
        self.certs.iter().filter(|c| !c.exact).map(|c| c.member).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side,
            "holds": self.holds,
            "sequences": self.certs.iter().map(|c| json!({
                "member": c.member,
                "dims": c.sequence.modules.iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>(),
                "exact": c.exact,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Multiplicity-full right `X`-approximation of `m`.
pub fn right_full_approx(x: &Subcat, m: &Module) -> Result<ModMap> {
    Ok(right_full_approximation(x, m)?.map)
}

/// Multiplicity-full left `X`-approximation of `m`.
pub fn left_full_approx(x: &Subcat, m: &Module) -> Result<ModMap> {
    Ok(left_full_approximation(x, m)?.map)
}

/// For every member `M` of `c`, the approximation sequence built from full
/// approximations, accepted when `Hom(C', -)` (contra) or `Hom(-, C')` (co)
/// is exact at the middle term for all members `C'`.
pub fn is_2_finite(x: &Subcat, c: &Subcat, side: FiniteSide) -> Result<FinitenessReport> {
    if !x.same_host(c) {
        return Err(Error::AlgebraMismatch);
    }
    let certs = c
        .modules()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(i, m)| {
            let sequence = match side {
                FiniteSide::Contra => {
                    let x1 = right_full_approx(x, m)?;
                    let (k, incl) = kernel(&x1);
                    let x2 = right_full_approx(x, &k)?;
                    ExactSeq::from_maps(vec![incl.compose(&x2), x1])?
                }
                FiniteSide::Co => {
                    let x1 = left_full_approx(x, m)?;
                    let (k, proj) = cokernel(&x1);
                    let x2 = left_full_approx(x, &k)?;
                    ExactSeq::from_maps(vec![x1, x2.compose(&proj)])?
                }
            };
            let exact = c.modules().all(|(_, y)| match side {
                FiniteSide::Contra => sequence.hom_from_defects(y, false).is_empty(),
                FiniteSide::Co => sequence.hom_into_defects(y, false).is_empty(),
            });
            Ok(FinitenessCert {
                member: i,
                sequence,
                exact,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FinitenessReport {
        side,
        holds: certs.iter().all(|c| c.exact),
        certs,
    })
}

/// A verified 2-functorially finite torsion pair in `c`.
#[derive(Clone, Debug)]
pub struct TorsPair2FF {
    pub c: Subcat,
    pub t: Subcat,
    pub f: Subcat,
    /// `[T contra, T co, F contra, F co]`
    pub certs: Vec<FinitenessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorsionViolation {
    NotInC { index: usize },
    HomNonzero { t: usize, f: usize },
    /// `x` is left orthogonal to `F` but not in `T`.
    TorsionNotMaximal { x: usize },
    /// `x` is right orthogonal to `T` but not in `F`.
    TorsionFreeNotMaximal { x: usize },
    NotFinite { class: String, side: FiniteSide, member: usize },
}

#[derive(Clone, Debug)]
pub struct TorsionCheck {
    pub holds: bool,
    pub violation: Option<TorsionViolation>,
    pub pair: Option<TorsPair2FF>,
}

/// Checks orthogonality, both maximality conditions over the members of
/// `c`, and 2-finiteness on both sides of both classes.
pub fn is_torsion_pair_2ff(t: &Subcat, f: &Subcat, c: &Subcat) -> Result<TorsionCheck> {
    if !t.same_host(c) || !f.same_host(c) {
        return Err(Error::AlgebraMismatch);
    }
    let fail = |v: TorsionViolation| {
        Ok(TorsionCheck {
            holds: false,
            violation: Some(v),
            pair: None,
        })
    };
    for &i in t.members.iter().chain(&f.members) {
        if !c.contains_index(i) {
            return fail(TorsionViolation::NotInC { index: i });
        }
    }
    for (i, x) in t.modules() {
        for (j, y) in f.modules() {
            if hom_dim(x, y) != 0 {
                return fail(TorsionViolation::HomNonzero { t: i, f: j });
            }
        }
    }
    for (i, x) in c.modules() {
        if !t.contains_index(i) && f.modules().all(|(_, y)| hom_dim(x, y) == 0) {
            return fail(TorsionViolation::TorsionNotMaximal { x: i });
        }
        if !f.contains_index(i) && t.modules().all(|(_, y)| hom_dim(y, x) == 0) {
            return fail(TorsionViolation::TorsionFreeNotMaximal { x: i });
        }
    }
    let mut certs = Vec::new();
    for (name, class) in [("torsion", t), ("torsion-free", f)] {
        for side in [FiniteSide::Contra, FiniteSide::Co] {
            let rep = is_2_finite(class, c, side)?;
            if let Some(&member) = rep.failures().first() {
                return fail(TorsionViolation::NotFinite {
                    class: name.into(),
                    side,
                    member,
                });
            }
            certs.push(rep);
        }
    }
    Ok(TorsionCheck {
        holds: true,
        violation: None,
        pair: Some(TorsPair2FF {
            c: c.clone(),
            t: t.clone(),
            f: f.clone(),
            certs,
        }),
    })
}

/// `T_M -> M -> F_M` from a minimal right `T`-approximation and a minimal
/// left `F`-approximation, checked exact at `M`.
pub fn canonical_sequence(pair: &TorsPair2FF, m: &Module) -> Result<ExactSeq> {
    let tm = right_approximation(&pair.t, m)?;
    let fm = left_approximation(&pair.f, m)?;
    let seq = ExactSeq::from_maps(vec![tm.map, fm.map])?;
    if !seq.interior_defects().is_empty() {
        return Err(Error::FailedResolution(format!(
            "canonical sequence for {:?} is not exact in the middle",
            m.dims()
        )));
    }
    Ok(seq)
}

/// A lift `0 -> T0' -> T1' -> T2' -> T3 -> 0` over a 2-exact row with
/// vertical maps into `T0, X, Y` and the identity on `T3`.
#[derive(Clone, Debug)]
pub struct PushoutLift {
    pub top: ExactSeq,
    pub vertical: Vec<ModMap>,
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(PushoutLift),
    NoLift { obstruction: String, low_confidence: bool },
}

impl LiftOutcome {
    pub fn is_lifted(&self) -> bool {
        matches!(self, LiftOutcome::Lifted(_))
    }
}

/// Looks for `T0', T1', T2' ∈ T` over `0 -> T0 -> X -> Y -> T3 -> 0`.
///
/// `T2' -> Y` is a right `T`-approximation, `T1'` approximates the
/// pullback of `X -> Y <- ker(T2' -> T3)`, and `T0'` is the remaining
/// kernel, which has to lie in `T`. Minimal approximations are tried first,
/// then multiplicity-full ones, then full ones with up to three extra copies
/// of each member.
pub fn pushout_lift_check(t: &Subcat, c: &Subcat, seq: &ExactSeq) -> Result<LiftOutcome> {
    if !seq.is_d_exact(2) {
        return Err(Error::NotTwoExact("row is not 2-exact".into()));
    }
    for m in &seq.modules {
        if !c.contains(m)? {
            return Err(Error::NotTwoExact(format!("{:?} is not in C", m.dims())));
        }
    }
    if !t.contains(seq.first())? || !t.contains(seq.last())? {
        return Err(Error::NotTwoExact("end terms must lie in T".into()));
    }
    let mut last = String::new();
    for copies in 0..=4 {
        match try_lift(t, seq, copies)? {
            Ok(lift) => return Ok(LiftOutcome::Lifted(lift)),
            Err(why) => last = why,
        }
    }
    Ok(LiftOutcome::NoLift {
        obstruction: last,
        low_confidence: true,
    })
}

/// `copies == 0`: minimal approximations; otherwise full approximations
/// with `copies` repetitions.
fn try_lift(t: &Subcat, seq: &ExactSeq, copies: usize) -> Result<std::result::Result<PushoutLift, String>> {
    let alg = seq.algebra().clone();
    let approx = |m: &Module| -> Result<ModMap> {
        if copies == 0 {
            return Ok(right_approximation(t, m)?.map);
        }
        let full = right_full_approximation(t, m)?.map;
        let parts = vec![full.source().clone(); copies];
        let maps = vec![full; copies];
        Ok(ModMap::row(&alg, &maps, m).with_ends(&direct_sum(&alg, &parts), m))
    };
    let [x1, x2, x3] = [0, 1, 2].map(|i| seq.maps[i].clone());
    let (t0, x, y, t3) = (&seq.modules[0], &seq.modules[1], &seq.modules[2], &seq.modules[3]);

    let g2 = approx(y)?;
    let top2 = x3.compose(&g2);
    if !top2.is_surjective() {
        return Ok(Err("T-approximation of Y does not cover T3".into()));
    }
    let (k2, k2_incl) = kernel(&top2);
    // pullback of k2 -> Y <- X
    let parts = [k2.clone(), x.clone()];
    let diff = ModMap::from_blocks(&alg, &parts, std::slice::from_ref(y), |_, j| {
        Some(if j == 0 { g2.compose(&k2_incl) } else { x2.neg() })
    })
    .with_ends(&direct_sum(&alg, &parts), y);
    let (pb, pb_incl) = kernel(&diff);
    let g1_all = pb_incl.compose(&approx(&pb)?);
    let t1_to_k2 = ModMap::projection(&alg, &parts, 0).compose(&g1_all);
    let g1 = ModMap::projection(&alg, &parts, 1).compose(&g1_all);
    let top1 = k2_incl.compose(&t1_to_k2);
    if !t1_to_k2.is_surjective() {
        return Ok(Err("T-approximation of the pullback does not cover ker(T2' -> T3)".into()));
    }
    let (t0p, top0) = kernel(&top1);
    if !t.contains(&t0p)? {
        return Ok(Err(format!("kernel {:?} of T1' -> T2' is not in T", t0p.dims())));
    }
    // T0' -> X lands in the image of T0 -> X
    let g0 = lift_through(&g1.compose(&top0), &x1)
        .ok_or_else(|| Error::FailedResolution("T0' does not map into T0".into()))?;
    let top = ExactSeq::from_maps(vec![top0, top1, top2])?;
    if !top.is_exact() {
        return Ok(Err("top row is not exact".into()));
    }
    let vertical = vec![g0, g1, g2, ModMap::identity(t3)];
    for k in 0..3 {
        let a = seq.maps[k].compose(&vertical[k]);
        let b = vertical[k + 1].compose(&top.maps[k]);
        if !a.add(&b.neg()).is_zero() {
            return Ok(Err(format!("square {k} does not commute")));
        }
    }
    debug_assert!(vertical[0].target() == t0);
    Ok(Ok(PushoutLift { top, vertical }))
}

/// All 2-functorially finite torsion pairs in `c`, by scanning subsets of
/// its indecomposables as candidate torsion classes.
pub fn enumerate_2ff_torsion_pairs(c: &Subcat) -> Result<Vec<TorsPair2FF>> {
    enumerate_with_budget(c, SUBSET_BUDGET)
}

pub fn enumerate_with_budget(c: &Subcat, budget: usize) -> Result<Vec<TorsPair2FF>> {
    let n = c.len();
    if n > budget {
        return Err(Error::TooLarge { n, budget });
    }
    let members: Vec<usize> = c.members.iter().copied().collect();
    let homs: Vec<Vec<bool>> = members
        .iter()
        .map(|&i| members.iter().map(|&j| hom_dim(c.module(i), c.module(j)) != 0).collect())
        .collect();
    let candidates: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = (0u64..1 << n)
        .filter_map(|mask| {
            let in_t = |a: usize| mask >> a & 1 == 1;
            let f: Vec<usize> = (0..n).filter(|&b| (0..n).all(|a| !in_t(a) || !homs[a][b])).collect();
            let t_closure: Vec<usize> = (0..n).filter(|&a| f.iter().all(|&b| !homs[a][b])).collect();
            if t_closure.iter().any(|&a| !in_t(a)) || (0..n).any(|a| in_t(a) && !t_closure.contains(&a)) {
                return None;
            }
            Some((
                t_closure.iter().map(|&a| members[a]).collect(),
                f.iter().map(|&b| members[b]).collect(),
            ))
        })
        .collect();
    let mut pairs = candidates
        .par_iter()
        .map(|(t, f)| {
            let t = Subcat::new(&c.host, t.iter().copied());
            let f = Subcat::new(&c.host, f.iter().copied());
            Ok(is_torsion_pair_2ff(&t, &f, c)?.pair)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    pairs.sort_by_key(|p| pair_key(p));
    Ok(pairs)
}

fn pair_key(p: &TorsPair2FF) -> (Vec<(Vec<usize>, usize)>, Vec<(Vec<usize>, usize)>) {
    let key = |s: &Subcat| {
        let mut v: Vec<(Vec<usize>, usize)> = s.modules().map(|(i, m)| (m.dims().to_vec(), i)).collect();
        v.sort();
        v
    };
    (key(&p.t), key(&p.f))
}

/// Host indecomposables in `Fac T` (trace of the generator is everything).
pub fn fac_members(t: &Subcat) -> Result<BTreeSet<usize>> {
    let g = t.generator();
    let mut out = BTreeSet::new();
    for (i, z) in t.host.modules.iter().enumerate() {
        if trace_from(&g, z)?.0.dims() == z.dims() {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Host indecomposables in `Sub F` (the reject into the generator is zero).
pub fn sub_members(f: &Subcat) -> Result<BTreeSet<usize>> {
    let g = f.generator();
    let mut out = BTreeSet::new();
    for (i, z) in f.host.modules.iter().enumerate() {
        if reject_into(z, &g)?.0.is_zero() {
            out.insert(i);
        }
    }
    Ok(out)
}

/// `(Fac T, Sub F)` on the host indecomposables: whether the two sides are
/// Hom-orthogonal, and which indecomposables break maximality (left
/// orthogonal to `Sub F` but outside `Fac T`, or right orthogonal to
/// `Fac T` but outside `Sub F`).
#[derive(Clone, Debug, Serialize)]
pub struct InducedPair {
    pub fac: BTreeSet<usize>,
    pub sub: BTreeSet<usize>,
    pub orthogonal: bool,
    pub unclassified: Vec<usize>,
}

impl InducedPair {
    pub fn is_torsion_pair(&self) -> bool {
        self.orthogonal && self.unclassified.is_empty()
    }
}

pub fn induced_pair(pair: &TorsPair2FF) -> Result<InducedPair> {
    let host = &pair.c.host;
    let fac = fac_members(&pair.t)?;
    let sub = sub_members(&pair.f)?;
    let hom = |a: usize, b: usize| hom_dim(&host.modules[a], &host.modules[b]) != 0;
    let orthogonal = fac.iter().all(|&a| sub.iter().all(|&b| !hom(a, b)));
    let unclassified = (0..host.len())
        .filter(|z| {
            let left = sub.iter().all(|&s| !hom(*z, s));
            let right = fac.iter().all(|&t| !hom(t, *z));
            (left && !fac.contains(z)) || (right && !sub.contains(z))
        })
        .collect();
    Ok(InducedPair {
        fac,
        sub,
        orthogonal,
        unclassified,
    })
}

impl TorsPair2FF {
    pub fn to_json(&self) -> Value {
        json!({
            "torsion": self.t.to_json(),
            "torsion_free": self.f.to_json(),
            "certificates": self.certs.iter().map(FinitenessReport::to_json).collect::<Vec<_>>(),
        })
    }

    /// The pair with its canonical sequences for every member of `C`.
    pub fn report(&self) -> Result<Value> {
        let mut seqs = Vec::new();
        for (i, m) in self.c.modules() {
            let s = canonical_sequence(self, m)?;
            seqs.push(json!({
                "member": i,
                "dims": s.modules.iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>(),
            }));
        }
        let mut v = self.to_json();
        v["canonical_sequences"] = json!(seqs);
        Ok(v)
    }
}
