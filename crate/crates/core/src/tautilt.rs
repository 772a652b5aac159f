//! Support τ₂-tilting and 2-tilting recognition, `add T`-coresolutions,
//! Ext-projectives of torsion classes, and the correspondence check between
//! support τ₂-tilting modules and 2-functorially finite torsion pairs.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Algebra, IdempotentQuotient};
use crate::error::{Error, Result};
use crate::highercat::{left_approximation_by, ExactSeq, Subcat};
use crate::modcat::{
    annihilator, annihilator_vertices, cokernel, decompose, direct_sum, ext_dim, hom_dim, projective_dimension,
    tau_d, trace_from, ModMap, Module,
};
use crate::torsion::{enumerate_with_budget, TorsPair2FF, SUBSET_BUDGET};

/// Largest vertex count for which every sub-idempotent is also scanned.
pub const IDEMPOTENT_SCAN_LIMIT: usize = 8;

/// The indecomposable summands of `t`, one per isomorphism class.
pub fn basic_summands(t: &Module) -> Vec<Module> {
    decompose(t).summands.into_iter().map(|(m, _)| m).collect()
}

/// The regular module `A = ⊕ P(v)`.
pub fn regular_module(alg: &Arc<Algebra>) -> Module {
    let parts: Vec<Module> = (0..alg.num_vertices()).map(|v| Module::projective(alg, v)).collect();
    direct_sum(alg, &parts)
}

/// `0 -> M -> T_0 -> ... -> T_k -> 0` with `k <= maxlen` from minimal left
/// `add T`-approximations, or `None` when an approximation is not injective
/// or the cokernels do not vanish in time.
pub fn add_coresolution(m: &Module, t: &Module, maxlen: usize) -> Result<Option<ExactSeq>> {
    if !m.same_algebra(t) {
        return Err(Error::AlgebraMismatch);
    }
    if m.is_zero() {
        return Ok(Some(ExactSeq::from_maps(vec![ModMap::identity(m)])?));
    }
    let parts = basic_summands(t);
    let mut maps = Vec::new();
    let mut k = m.clone();
    let mut proj = ModMap::identity(m);
    for _ in 0..=maxlen {
        let a = left_approximation_by(&parts, &k)?;
        if !a.map.is_injective() {
            return Ok(None);
        }
        maps.push(a.map.compose(&proj));
        let (next, next_proj) = cokernel(&a.map);
        if next.is_zero() {
            let seq = ExactSeq::from_maps(maps)?;
            debug_assert!(seq.is_exact());
            return Ok(Some(seq));
        }
        k = next;
        proj = next_proj;
    }
    Ok(None)
}

/// Evidence that `T` is support τ₂-tilting: `e` is the set of vertices
/// killing `T`, and over `A/<e>` the module has `Hom(T, τ₂T) = 0` and an
/// `add T`-coresolution of the regular module of length at most 2.
#[derive(Clone, Debug)]
pub struct SupportTau2Cert {
    pub t: Module,
    pub e: Vec<usize>,
    pub quotient: IdempotentQuotient,
    pub coresolution: ExactSeq,
    /// Number of indecomposable summands.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotTau2 {
    /// `Hom(T, τ₂T) != 0` over the quotient.
    HomToTranslate { dim: usize },
    /// No `add T`-coresolution of the regular module (minimal chain only).
    NoCoresolution,
}

fn tau2_over(t: &Module, alg: &Arc<Algebra>, e: &[usize]) -> Result<std::result::Result<SupportTau2Cert, NotTau2>> {
    let q = alg.quotient_by_idempotent(e)?;
    let tq = t.to_quotient(&q)?;
    let dim = hom_dim(&tq, &tau_d(&tq, 2));
    if dim != 0 {
        return Ok(Err(NotTau2::HomToTranslate { dim }));
    }
    let Some(coresolution) = add_coresolution(&regular_module(&q.algebra), &tq, 2)? else {
        return Ok(Err(NotTau2::NoCoresolution));
    };
    Ok(Ok(SupportTau2Cert {
        rank: decompose(&tq).summands.len(),
        t: tq,
        e: e.to_vec(),
        quotient: q,
        coresolution,
    }))
}

/// Support τ₂-tilting test with the maximal idempotent `e` (all vertices
/// acting as zero on `T`). `T` is replaced by its basic part.
pub fn is_support_tau2_tilting(t: &Module, alg: &Arc<Algebra>) -> Result<std::result::Result<SupportTau2Cert, NotTau2>> {
    if !t.algebra().same_as(alg) {
        return Err(Error::AlgebraMismatch);
    }
    let basic = direct_sum(alg, &basic_summands(t));
    let e = annihilator_vertices(alg, std::slice::from_ref(&basic));
    tau2_over(&basic, alg, &e)
}

/// Every vertex set `e` with `eT = 0` for which `T` is τ₂-tilting over
/// `A/<e>`.
pub fn tau2_idempotents(t: &Module, alg: &Arc<Algebra>) -> Result<Vec<Vec<usize>>> {
    let basic = direct_sum(alg, &basic_summands(t));
    let maximal = annihilator_vertices(alg, std::slice::from_ref(&basic));
    let mut out = Vec::new();
    for mask in 0u64..1 << maximal.len() {
        let e: Vec<usize> = (0..maximal.len()).filter(|&i| mask >> i & 1 == 1).map(|i| maximal[i]).collect();
        if tau2_over(&basic, alg, &e)?.is_ok() {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TiltingReport {
    pub holds: bool,
    pub projective_dimension: Option<usize>,
    /// `dim Ext^i(T,T)` for `i = 1, 2`.
    pub self_ext: [usize; 2],
    pub coresolution: Option<ExactSeq>,
}

/// The three 2-tilting conditions: `pd T <= 2`, `Ext^{1,2}(T,T) = 0`, and an
/// `add T`-coresolution of `A` of length at most 2.
pub fn is_2_tilting(t: &Module, alg: &Arc<Algebra>) -> Result<TiltingReport> {
    if !t.algebra().same_as(alg) {
        return Err(Error::AlgebraMismatch);
    }
    let pd = projective_dimension(t, 2);
    let self_ext = [ext_dim(1, t, t), ext_dim(2, t, t)];
    let coresolution = add_coresolution(&regular_module(alg), t, 2)?;
    Ok(TiltingReport {
        holds: pd.is_some() && self_ext == [0, 0] && coresolution.is_some(),
        projective_dimension: pd,
        self_ext,
        coresolution,
    })
}

/// `T` as a module over `A / ann T`.
pub fn over_annihilator_quotient(t: &Module) -> Result<Module> {
    let ann = annihilator(t);
    let alg = t.algebra();
    let q = if ann.is_empty() { alg.clone() } else { alg.quotient_by_ideal(&ann)? };
    Module::new(&q, t.dims().to_vec(), t.actions().to_vec())
}

/// `{X ∈ ind C : tr_T(X) = X}`.
pub fn fac_cap_c(t: &Module, c: &Subcat) -> Result<Subcat> {
    let mut members = Vec::new();
    for (i, x) in c.modules() {
        if trace_from(t, x)?.0.dims() == x.dims() {
            members.push(i);
        }
    }
    Ok(Subcat::new(&c.host, members))
}

/// Members `X` of the class with `Ext^2(X, Y) = 0` for every member `Y`,
/// summed once each.
pub fn ext_projective_generator(tclass: &Subcat) -> Module {
    direct_sum(tclass.algebra(), &ext_projective_members(tclass).iter().map(|&i| tclass.module(i).clone()).collect::<Vec<_>>())
}

pub fn ext_projective_members(tclass: &Subcat) -> Vec<usize> {
    tclass
        .modules()
        .filter(|(_, x)| tclass.modules().all(|(_, y)| ext_dim(2, x, y) == 0))
        .map(|(i, _)| i)
        .collect()
}

/// One support τ₂-tilting module found by the scan, as a set of members.
#[derive(Clone, Debug, Serialize)]
pub struct Tau2Entry {
    pub members: BTreeSet<usize>,
    pub dims: Vec<Vec<usize>>,
    pub e: Vec<usize>,
    pub rank: usize,
    pub coresolution: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Fac T ∩ C` of a support τ₂-tilting module is not an enumerated
    /// torsion class.
    PhiMissing { tau2: usize, fac: BTreeSet<usize> },
    /// The Ext-projectives of a torsion class do not form a support
    /// τ₂-tilting module.
    PsiMissing { pair: usize, generator: BTreeSet<usize> },
    PhiPsiNotIdentity { pair: usize },
    PsiPhiNotIdentity { tau2: usize },
    /// The maximal idempotent disagrees with the scan over sub-idempotents.
    IdempotentChoice { members: BTreeSet<usize> },
    CountMismatch { tau2: usize, pairs: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub holds: bool,
    pub tau2: Vec<Tau2Entry>,
    #[serde(skip)]
    pub pairs: Vec<TorsPair2FF>,
    /// `(tau2 index, pair index)`
    pub bijection: Vec<(usize, usize)>,
    pub witnesses: Vec<Witness>,
    pub flags: Vec<String>,
}

impl CorrespondenceReport {
    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self.pairs.iter().map(TorsPair2FF::to_json).collect();
        json!({
            "holds": self.holds,
            "counts": {"tau2": self.tau2.len(), "pairs": self.pairs.len()},
            "tau2": self.tau2,
            "pairs": pairs,
            "bijection": self.bijection,
            "witnesses": self.witnesses,
            "flags": self.flags,
        })
    }
}

/// Support τ₂-tilting modules among basic sums of members of `c`, sorted by
/// (rank, dims), together with the member sets on which the maximal
/// idempotent and the sub-idempotent scan disagree.
pub fn enumerate_support_tau2(c: &Subcat) -> Result<(Vec<Tau2Entry>, Vec<BTreeSet<usize>>)> {
    enumerate_support_tau2_with_budget(c, SUBSET_BUDGET)
}

pub fn enumerate_support_tau2_with_budget(
    c: &Subcat,
    budget: usize,
) -> Result<(Vec<Tau2Entry>, Vec<BTreeSet<usize>>)> {
    let n = c.len();
    if n > budget {
        return Err(Error::TooLarge { n, budget });
    }
    let alg = c.algebra().clone();
    let members: Vec<usize> = c.members.iter().copied().collect();
    let scan_idempotents = alg.num_vertices() <= IDEMPOTENT_SCAN_LIMIT;

    let scanned = (0u64..1 << n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&mask| {
            let set: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| members[i]).collect();
            let parts: Vec<Module> = set.iter().map(|&i| c.module(i).clone()).collect();
            let t = direct_sum(&alg, &parts);
            let outcome = is_support_tau2_tilting(&t, &alg)?;
            let disagrees = if scan_idempotents {
                tau2_idempotents(&t, &alg)?.is_empty() == outcome.is_ok()
            } else {
                false
            };
            let entry = outcome.ok().map(|cert| Tau2Entry {
                dims: parts.iter().map(|m| m.dims().to_vec()).collect(),
                members: set.clone(),
                e: cert.e,
                rank: cert.rank,
                coresolution: cert.coresolution.modules.iter().map(|m| m.dims().to_vec()).collect(),
            });
            Ok((set, entry, disagrees))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut disagreements = Vec::new();
    let mut tau2 = Vec::new();
    for (set, entry, disagrees) in scanned {
        if disagrees {
            disagreements.push(set);
        }
        tau2.extend(entry);
    }
    tau2.sort_by(|a, b| (a.members.len(), &a.dims, &a.members).cmp(&(b.members.len(), &b.dims, &b.members)));
    Ok((tau2, disagreements))
}

/// Enumerates support τ₂-tilting modules among basic sums of members of
/// `c`, and 2-ff torsion pairs in `c`, and checks that `T -> Fac T ∩ C` and
/// `T -> Ext-projectives of T` are mutually inverse.
pub fn verify_theorem1(c: &Subcat) -> Result<CorrespondenceReport> {
    verify_theorem1_with_budget(c, SUBSET_BUDGET)
}

pub fn verify_theorem1_with_budget(c: &Subcat, budget: usize) -> Result<CorrespondenceReport> {
    if !c.host.complete {
        return Err(Error::IncompleteHost);
    }
    let alg = c.algebra().clone();
    let (tau2, disagreements) = enumerate_support_tau2_with_budget(c, budget)?;
    let mut witnesses: Vec<Witness> = disagreements
        .into_iter()
        .map(|members| Witness::IdempotentChoice { members })
        .collect();

    let pairs = enumerate_with_budget(c, budget)?;
    let class_of = |members: &BTreeSet<usize>| pairs.iter().position(|p| &p.t.members == members);
    let tau2_of = |members: &BTreeSet<usize>| tau2.iter().position(|t| &t.members == members);

    let mut bijection = Vec::new();
    for (i, entry) in tau2.iter().enumerate() {
        let parts: Vec<Module> = entry.members.iter().map(|&j| c.module(j).clone()).collect();
        let fac = fac_cap_c(&direct_sum(&alg, &parts), c)?.members;
        match class_of(&fac) {
            None => witnesses.push(Witness::PhiMissing { tau2: i, fac }),
            Some(k) => {
                let back: BTreeSet<usize> = ext_projective_members(&pairs[k].t).into_iter().collect();
                if back != entry.members {
                    witnesses.push(Witness::PsiPhiNotIdentity { tau2: i });
                }
                bijection.push((i, k));
            }
        }
    }
    for (k, pair) in pairs.iter().enumerate() {
        let generator: BTreeSet<usize> = ext_projective_members(&pair.t).into_iter().collect();
        match tau2_of(&generator) {
            None => witnesses.push(Witness::PsiMissing { pair: k, generator }),
            Some(i) => {
                let parts: Vec<Module> = tau2[i].members.iter().map(|&j| c.module(j).clone()).collect();
                if fac_cap_c(&direct_sum(&alg, &parts), c)?.members != pair.t.members {
                    witnesses.push(Witness::PhiPsiNotIdentity { pair: k });
                }
            }
        }
    }
    if tau2.len() != pairs.len() {
        witnesses.push(Witness::CountMismatch {
            tau2: tau2.len(),
            pairs: pairs.len(),
        });
    }
    Ok(CorrespondenceReport {
        holds: witnesses.is_empty(),
        tau2,
        pairs,
        bijection,
        witnesses,
        flags: vec!["MINIMAL_ONLY".into()],
    })
}
