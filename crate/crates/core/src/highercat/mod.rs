//! Subcategories of `mod A` given by indecomposables of a host index, exact
//! sequences, approximations, d-cluster-tilting checks, resolutions, the
//! d-pullback and the gluing constructions.

mod approx;
mod ct;
mod glue;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::arknit::IndecIndex;
use crate::error::{Error, Result};
use crate::modcat::{direct_sum, hom_basis, module_to_json, span_rank, ModMap, Module};

pub use approx::{
    left_approximation, left_approximation_by, left_full_approximation, right_approximation, right_approximation_by,
    right_full_approximation, Approximation,
};
pub use ct::{
    c_resolution, d_pullback, find_cluster_tilting, is_d_cluster_tilting, spliced_sequences, CtReport, CtViolation, Pullback,
    Side,
};
pub use glue::{glue_two_resolutions, CompactDiagram, GlueDiagram};

/// `add` of a set of indecomposables from a host index.
#[derive(Clone, Debug)]
pub struct Subcat {
    pub host: Arc<IndecIndex>,
    pub members: BTreeSet<usize>,
}

impl Subcat {
    pub fn new(host: &Arc<IndecIndex>, members: impl IntoIterator<Item = usize>) -> Subcat {
        let members: BTreeSet<usize> = members.into_iter().collect();
        assert!(members.iter().all(|&i| i < host.len()), "member outside the host");
        Subcat {
            host: host.clone(),
            members,
        }
    }

    pub fn all(host: &Arc<IndecIndex>) -> Subcat {
        Subcat::new(host, 0..host.len())
    }

    pub fn empty(host: &Arc<IndecIndex>) -> Subcat {
        Subcat::new(host, [])
    }

    /// `add M` for a module whose summands all lie in the host.
    pub fn from_module(host: &Arc<IndecIndex>, m: &Module) -> Result<Subcat> {
        let idx = host.summand_indices(m)?;
        Ok(Subcat::new(host, idx.into_iter().map(|(i, _)| i)))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.host.algebra
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn module(&self, i: usize) -> &Module {
        &self.host.modules[i]
    }

    pub fn modules(&self) -> impl Iterator<Item = (usize, &Module)> + '_ {
        self.members.iter().map(move |&i| (i, &self.host.modules[i]))
    }

    /// The basic additive generator `⊕ members`.
    pub fn generator(&self) -> Module {
        let parts: Vec<Module> = self.modules().map(|(_, m)| m.clone()).collect();
        direct_sum(self.algebra(), &parts)
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    /// Whether every indecomposable summand of `m` is a member.
    pub fn contains(&self, m: &Module) -> Result<bool> {
        Ok(self
            .host
            .summand_indices(m)?
            .iter()
            .all(|(i, _)| self.members.contains(i)))
    }

    pub fn is_subcat_of(&self, other: &Subcat) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn same_host(&self, other: &Subcat) -> bool {
        Arc::ptr_eq(&self.host, &other.host) || self.host.algebra.same_as(&other.host.algebra)
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .modules()
            .map(|(i, m)| json!({"index": i, "dims": m.dims()}))
            .collect();
        json!(members)
    }
}

/// `M_0 -> M_1 -> ... -> M_k` with `maps[i] : M_i -> M_{i+1}`. Exactness is
/// always meant with zeros at both ends.
#[derive(Clone, Debug)]
pub struct ExactSeq {
    pub modules: Vec<Module>,
    pub maps: Vec<ModMap>,
}

impl ExactSeq {
    /// Builds the sequence from composable maps (at least one), without
    /// checking exactness.
    pub fn from_maps(maps: Vec<ModMap>) -> Result<ExactSeq> {
        let first = maps
            .first()
            .ok_or_else(|| Error::NotTwoExact("a sequence needs at least one map".into()))?;
        let mut modules = vec![first.source().clone()];
        for (i, f) in maps.iter().enumerate() {
            if f.source() != &modules[i] {
                return Err(Error::DimensionMismatch(format!("map {i} does not start where map {} ends", i.wrapping_sub(1))));
            }
            modules.push(f.target().clone());
        }
        Ok(ExactSeq { modules, maps })
    }

    /// Like `from_maps`, but fails unless the sequence is exact.
    pub fn exact(maps: Vec<ModMap>) -> Result<ExactSeq> {
        let seq = ExactSeq::from_maps(maps)?;
        match seq.defects().first() {
            None => Ok(seq),
            Some(&i) => Err(Error::NotTwoExact(format!("not exact at position {i}"))),
        }
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.modules[0].algebra()
    }

    pub fn first(&self) -> &Module {
        &self.modules[0]
    }

    pub fn last(&self) -> &Module {
        self.modules.last().unwrap()
    }

    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].compose(&w[0]).is_zero())
    }

    /// Positions where `0 -> M_0 -> ... -> M_k -> 0` fails to be exact.
    pub fn defects(&self) -> Vec<usize> {
        self.defects_with(true)
    }

    /// Interior positions `0 < i < k` where `M_{i-1} -> M_i -> M_{i+1}` fails
    /// to be exact.
    pub fn interior_defects(&self) -> Vec<usize> {
        self.defects_with(false)
    }

    fn defects_with(&self, ends: bool) -> Vec<usize> {
        if !self.is_complex() {
            return (0..self.len()).collect();
        }
        let nv = self.algebra().num_vertices();
        let ranks: Vec<Vec<usize>> = self
            .maps
            .iter()
            .map(|f| (0..nv).map(|v| f.mat(v).rank()).collect())
            .collect();
        (0..self.len())
            .filter(|&i| ends || (i > 0 && i + 1 < self.len()))
            .filter(|&i| {
                (0..nv).any(|v| {
                    let into = if i == 0 { 0 } else { ranks[i - 1][v] };
                    let out = if i + 1 == self.len() { 0 } else { ranks[i][v] };
                    self.modules[i].dim_at(v) != into + out
                })
            })
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.defects().is_empty()
    }

    /// Exact with `d + 2` terms.
    pub fn is_d_exact(&self, d: usize) -> bool {
        self.len() == d + 2 && self.is_exact()
    }

    /// Whether every term except possibly the two ends lies in `c`.
    pub fn interior_in(&self, c: &Subcat) -> Result<bool> {
        for m in &self.modules[1..self.len().saturating_sub(1)] {
            if !c.contains(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Positions where `Hom(x, -)` applied to the sequence is not exact.
    /// With `ends`, the outer zeros are included; otherwise only interior
    /// positions are checked.
    pub fn hom_from_defects(&self, x: &Module, ends: bool) -> Vec<usize> {
        let homs: Vec<Vec<ModMap>> = self
            .modules
            .iter()
            .map(|m| hom_basis(x, m).expect("same algebra"))
            .collect();
        let ranks: Vec<usize> = self
            .maps
            .iter()
            .zip(&homs)
            .map(|(f, hs)| {
                let imgs: Vec<ModMap> = hs.iter().map(|h| f.compose(h)).collect();
                span_rank(&imgs)
            })
            .collect();
        chain_defects(&homs.iter().map(Vec::len).collect::<Vec<_>>(), &ranks, ends)
    }

    /// Positions where `Hom(-, x)` applied to the sequence is not exact,
    /// numbered by the original terms.
    pub fn hom_into_defects(&self, x: &Module, ends: bool) -> Vec<usize> {
        let homs: Vec<Vec<ModMap>> = self
            .modules
            .iter()
            .map(|m| hom_basis(m, x).expect("same algebra"))
            .collect();
        // Hom(M_{i+1}, x) -> Hom(M_i, x), h -> h f_i
        let ranks: Vec<usize> = self
            .maps
            .iter()
            .zip(&homs[1..])
            .map(|(f, hs)| {
                let imgs: Vec<ModMap> = hs.iter().map(|h| h.compose(f)).collect();
                span_rank(&imgs)
            })
            .collect();
        chain_defects(&homs.iter().map(Vec::len).collect::<Vec<_>>(), &ranks, ends)
    }

    /// Termwise direct sum of sequences of equal length.
    pub fn direct_sum(seqs: &[ExactSeq]) -> Result<ExactSeq> {
        let first = seqs
            .first()
            .ok_or_else(|| Error::NotTwoExact("empty direct sum".into()))?;
        if seqs.iter().any(|s| s.len() != first.len()) {
            return Err(Error::DimensionMismatch("sequences of different lengths".into()));
        }
        let alg = first.algebra().clone();
        let maps = (0..first.maps.len())
            .map(|i| ModMap::diagonal(&alg, &seqs.iter().map(|s| s.maps[i].clone()).collect::<Vec<_>>()))
            .collect();
        ExactSeq::from_maps(maps)
    }

    /// `0 -> M -> M -> 0 -> ... -> 0` with the identity in position `at`.
    pub fn trivial(m: &Module, len: usize, at: usize) -> ExactSeq {
        assert!(len >= 2 && at + 1 < len);
        let zero = Module::zero(m.algebra());
        let modules: Vec<Module> = (0..len)
            .map(|i| if i == at || i == at + 1 { m.clone() } else { zero.clone() })
            .collect();
        let maps = (0..len - 1)
            .map(|i| {
                if i == at {
                    ModMap::identity(m)
                } else {
                    ModMap::zero(&modules[i], &modules[i + 1])
                }
            })
            .collect();
        ExactSeq { modules, maps }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "modules": self.modules.iter().map(|m| json!(m.dims())).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(map_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Exactness defects of a complex of vector spaces `V_0 - V_1 - ... - V_k`
/// given dimensions and the ranks of the maps between neighbours.
fn chain_defects(dims: &[usize], ranks: &[usize], ends: bool) -> Vec<usize> {
    let k = dims.len();
    (0..k)
        .filter(|&i| {
            let outer = i == 0 || i + 1 == k;
            if outer && !ends {
                return false;
            }
            let left = if i == 0 { 0 } else { ranks[i - 1] };
            let right = if i + 1 == k { 0 } else { ranks[i] };
            dims[i] != left + right
        })
        .collect()
}

pub(crate) fn map_to_json(f: &ModMap) -> Value {
    json!({
        "source": f.source().dims(),
        "target": f.target().dims(),
        "mats": f.mats().iter().map(|m| m.to_rows()).collect::<Vec<_>>(),
    })
}

pub(crate) fn object_to_json(host: &IndecIndex, m: &Module) -> Value {
    let summands = host
        .summand_indices(m)
        .map(|v| v.into_iter().map(|(i, k)| json!([i, k])).collect::<Vec<_>>())
        .ok();
    json!({"dims": m.dims(), "summands": summands, "module": module_to_json(m)})
}

/// The map `h` with `mono ∘ h = g`, if `g` factors through the injective `mono`.
pub(crate) fn lift_through(g: &ModMap, mono: &ModMap) -> Option<ModMap> {
    let mats = (0..g.mats().len())
        .map(|v| mono.mat(v).solve_matrix(g.mat(v)).expect("shapes agree"))
        .collect::<Option<Vec<_>>>()?;
    Some(ModMap::new_unchecked(g.source(), mono.source(), mats))
}
