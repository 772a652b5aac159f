//! Indecomposable modules of representation-finite algebras, by knitting the
//! Auslander-Reiten quiver, and a brute-force enumerator used as an oracle.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::modcat::{
    cokernel, decompose, hom_basis, indec_iso, is_indecomposable, is_injective, is_projective, kernel,
    map_from_generators, module_to_json, projective_cover_with_generators, radical, radical_submodule,
    socle_submodule, tau, tau_inv, Generator, ModMap, Module,
};

#[derive(Clone, Copy, Debug)]
pub struct KnitLimits {
    pub max_count: usize,
    pub max_dim: usize,
}

impl Default for KnitLimits {
    fn default() -> Self {
        KnitLimits {
            max_count: 200,
            max_dim: 32,
        }
    }
}

/// Indecomposables up to isomorphism, with AR arrows and the translate.
#[derive(Clone, Debug)]
pub struct IndecIndex {
    pub algebra: Arc<Algebra>,
    pub modules: Vec<Module>,
    /// `(source, target, multiplicity)` irreducible-map arrows.
    pub ar_arrows: Vec<(usize, usize, usize)>,
    /// `x -> τ x` for non-projective `x`.
    pub tau_map: BTreeMap<usize, usize>,
    /// True when knitting closed up, so `modules` is all of `ind A`.
    pub complete: bool,
}

impl IndecIndex {
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    /// Index of the entry isomorphic to an indecomposable `m`.
    pub fn find(&self, m: &Module) -> Option<usize> {
        self.modules.iter().position(|x| indec_iso(m, x).is_some())
    }

    /// Multiplicities of index entries among the summands of `m`.
    pub fn summand_indices(&self, m: &Module) -> Result<Vec<(usize, usize)>> {
        let cert = decompose(m);
        let mut out = Vec::new();
        for (x, k) in cert.summands {
            let i = self.find(&x).ok_or(Error::IncompleteHost)?;
            out.push((i, k));
        }
        out.sort();
        Ok(out)
    }

    pub fn is_projective(&self, i: usize) -> bool {
        !self.tau_map.contains_key(&i)
    }

    pub fn to_json(&self) -> Value {
        let modules: Vec<Value> = self
            .modules
            .iter()
            .enumerate()
            .map(|(i, m)| {
                json!({
                    "index": i,
                    "dims": m.dims(),
                    "projective": is_projective(m),
                    "injective": is_injective(m),
                    "module": module_to_json(m),
                })
            })
            .collect();
        let arrows: Vec<Value> = self.ar_arrows.iter().map(|&(s, t, k)| json!([s, t, k])).collect();
        let tau: Vec<Value> = self.tau_map.iter().map(|(&x, &t)| json!([x, t])).collect();
        json!({
            "complete": self.complete,
            "modules": modules,
            "arrows": arrows,
            "tau": tau,
        })
    }
}

/// An almost split sequence `0 -> τY -> E -> Y -> 0`.
#[derive(Clone, Debug)]
pub struct ArSequence {
    pub left: Module,
    pub middle: Module,
    pub incl: ModMap,
    pub proj: ModMap,
}

fn is_nonzero_class(q: &Mat, v: &[u32]) -> bool {
    q.mul_vec(v).iter().any(|&x| x != 0)
}

/// The almost split sequence ending at a non-projective indecomposable `y`.
///
/// With `0 -> ΩY -> P -> Y -> 0` the projective cover, a class in
/// `Ext^1(Y, τY) = Hom(ΩY, τY) / (maps through P)` killed by `rad End(Y)`
/// determines `E` as a pushout.
pub fn ar_sequence(y: &Module) -> Option<ArSequence> {
    if is_projective(y) {
        return None;
    }
    let alg = y.algebra();
    let f = y.field();
    let ty = tau(y);
    let (cover, gens) = projective_cover_with_generators(y);
    let p0 = cover.source().clone();
    let (omega, iota) = kernel(&cover);
    let homs = hom_basis(&omega, &ty).ok()?;
    if homs.is_empty() {
        return None;
    }
    let through: Vec<Vec<u32>> = hom_basis(&p0, &ty)
        .ok()?
        .iter()
        .map(|g| g.compose(&iota).flatten())
        .collect();
    let len = homs[0].flatten().len();
    let q = Mat::from_columns(f, len, &through).cokernel_projection();
    // Lifts of a basis of rad End(Y) to endomorphisms of ΩY.
    let ends = hom_basis(y, y).ok()?;
    let totals: Vec<Mat> = ends.iter().map(ModMap::total).collect();
    let rad_coords = radical(f, &totals);
    let mut restricted = Vec::new();
    for c in &rad_coords {
        let terms: Vec<(u32, &ModMap)> = c.iter().copied().zip(&ends).collect();
        let phi = ModMap::combination(y, y, &terms);
        let lifted_gens: Vec<Generator> = gens
            .iter()
            .map(|g| {
                let want = phi.mat(g.vertex).mul_vec(&g.vector);
                let x = cover.mat(g.vertex).solve(&want).unwrap().expect("cover is onto");
                Generator {
                    vertex: g.vertex,
                    vector: x,
                }
            })
            .collect();
        let lift = map_from_generators(&p0, &lifted_gens).with_ends(&p0, &p0);
        let on_omega: Vec<Mat> = (0..alg.num_vertices())
            .map(|v| {
                let moved = lift.mat(v).mul(iota.mat(v));
                iota.mat(v).solve_matrix(&moved).unwrap().expect("lift preserves the kernel")
            })
            .collect();
        restricted.push(ModMap::new_unchecked(&omega, &omega, on_omega));
    }
    let h_cols: Vec<Vec<u32>> = homs.iter().map(ModMap::flatten).collect();
    let mut conditions = Vec::new();
    for r in &restricted {
        let cols: Vec<Vec<u32>> = homs.iter().map(|h| h.compose(r).flatten()).collect();
        conditions.push(q.mul(&Mat::from_columns(f, len, &cols)));
    }
    let system = Mat::vstack_all(f, homs.len(), &conditions);
    let h_mat = Mat::from_columns(f, len, &h_cols);
    let c = system
        .kernel_basis()
        .into_iter()
        .find(|c| is_nonzero_class(&q, &h_mat.mul_vec(c)))?;
    let terms: Vec<(u32, &ModMap)> = c.iter().copied().zip(&homs).collect();
    let h = ModMap::combination(&omega, &ty, &terms);
    let into_sum = ModMap::column(alg, &omega, &[iota.clone(), h.neg()]);
    let (middle, to_middle) = cokernel(&into_sum);
    let parts = [p0.clone(), ty.clone()];
    let ty_in = ModMap::injection(alg, &parts, 1).with_ends(&ty, into_sum.target());
    let incl = to_middle.compose(&ty_in);
    // E -> Y is induced by (π, 0) on P ⊕ τY.
    let pi0 = ModMap::row(alg, &[cover.clone(), ModMap::zero(&ty, y)], y);
    let proj_mats: Vec<Mat> = (0..alg.num_vertices())
        .map(|v| {
            let sec = to_middle
                .mat(v)
                .solve_matrix(&Mat::identity(f, middle.dim_at(v)))
                .unwrap()
                .expect("cokernel map is onto");
            pi0.mat(v).mul(&sec)
        })
        .collect();
    let proj = ModMap::new_unchecked(&middle, y, proj_mats);
    Some(ArSequence {
        left: ty,
        middle,
        incl,
        proj,
    })
}

struct Knitter {
    alg: Arc<Algebra>,
    limits: KnitLimits,
    modules: Vec<Module>,
    arrows: BTreeMap<(usize, usize), usize>,
    tau_map: BTreeMap<usize, usize>,
    queue: VecDeque<usize>,
}

impl Knitter {
    fn partial(&self, reason: String) -> Error {
        Error::LimitExceeded {
            reason,
            partial: Box::new(IndecIndex {
                algebra: self.alg.clone(),
                modules: self.modules.clone(),
                ar_arrows: self.arrows.iter().map(|(&(s, t), &k)| (s, t, k)).collect(),
                tau_map: self.tau_map.clone(),
                complete: false,
            }),
        }
    }

    fn insert(&mut self, m: Module) -> Result<usize> {
        if let Some(i) = self.modules.iter().position(|x| indec_iso(&m, x).is_some()) {
            return Ok(i);
        }
        if m.total_dim() > self.limits.max_dim {
            return Err(self.partial(format!("module of dimension {} > {}", m.total_dim(), self.limits.max_dim)));
        }
        if self.modules.len() >= self.limits.max_count {
            return Err(self.partial(format!("more than {} indecomposables", self.limits.max_count)));
        }
        self.modules.push(m);
        let i = self.modules.len() - 1;
        self.queue.push_back(i);
        Ok(i)
    }

    fn arrow(&mut self, s: usize, t: usize, k: usize) {
        let e = self.arrows.entry((s, t)).or_insert(0);
        *e = (*e).max(k);
    }

    fn summands(m: &Module) -> Vec<(Module, usize)> {
        decompose(m).summands
    }

    fn process(&mut self, y: usize) -> Result<()> {
        let m = self.modules[y].clone();
        if is_projective(&m) {
            for (x, k) in Self::summands(&radical_submodule(&m).0) {
                let i = self.insert(x)?;
                self.arrow(i, y, k);
            }
        } else {
            let seq = ar_sequence(&m).expect("non-projective indecomposable");
            let t = self.insert(seq.left)?;
            self.tau_map.insert(y, t);
            for (x, k) in Self::summands(&seq.middle) {
                let i = self.insert(x)?;
                self.arrow(t, i, k);
                self.arrow(i, y, k);
            }
        }
        if is_injective(&m) {
            let (_, soc) = socle_submodule(&m);
            for (x, k) in Self::summands(&cokernel(&soc).0) {
                let i = self.insert(x)?;
                self.arrow(y, i, k);
            }
        } else {
            self.insert(tau_inv(&m))?;
        }
        Ok(())
    }
}

/// Knits the AR quiver outward from the projectives and injectives. The
/// closure under translates, AR middle terms, radicals of projectives and
/// quotients of injectives by their socles is all of `ind A` exactly when
/// `A` is representation-finite.
pub fn knit_indecomposables(alg: &Arc<Algebra>, limits: KnitLimits) -> Result<IndecIndex> {
    let mut k = Knitter {
        alg: alg.clone(),
        limits,
        modules: Vec::new(),
        arrows: BTreeMap::new(),
        tau_map: BTreeMap::new(),
        queue: VecDeque::new(),
    };
    for v in 0..alg.num_vertices() {
        k.insert(Module::projective(alg, v))?;
    }
    for v in 0..alg.num_vertices() {
        k.insert(Module::injective(alg, v))?;
    }
    while let Some(y) = k.queue.pop_front() {
        k.process(y)?;
    }
    // Sort by (dimension, dimension vector, discovery order) and renumber.
    let mut order: Vec<usize> = (0..k.modules.len()).collect();
    order.sort_by_key(|&i| (k.modules[i].total_dim(), k.modules[i].dims().to_vec(), i));
    let mut new_index = vec![0; order.len()];
    for (n, &o) in order.iter().enumerate() {
        new_index[o] = n;
    }
    let modules = order.iter().map(|&o| k.modules[o].clone()).collect();
    let mut ar_arrows: Vec<(usize, usize, usize)> = k
        .arrows
        .iter()
        .map(|(&(s, t), &m)| (new_index[s], new_index[t], m))
        .collect();
    ar_arrows.sort();
    let tau_map = k.tau_map.iter().map(|(&x, &t)| (new_index[x], new_index[t])).collect();
    Ok(IndecIndex {
        algebra: alg.clone(),
        modules,
        ar_arrows,
        tau_map,
        complete: true,
    })
}

/// All dimension vectors `0 < d <= bounds`, in lexicographic order.
fn dim_vectors(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=b).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.retain(|d| d.iter().any(|&x| x > 0));
    out
}

/// Every indecomposable with dimension vector at most `bounds`, found by
/// enumerating all action matrices. `budget` caps the number of matrix
/// tuples examined.
pub fn brute_force_indecomposables(alg: &Arc<Algebra>, bounds: &[usize], budget: u64) -> Result<Vec<Module>> {
    if bounds.len() != alg.num_vertices() {
        return Err(Error::DimensionMismatch("one bound per vertex expected".into()));
    }
    let p = alg.field().p() as u64;
    let dvs = dim_vectors(bounds);
    let mut total: u64 = 0;
    for d in &dvs {
        let entries: u32 = (0..alg.num_arrows())
            .map(|a| (d[alg.arrow(a).source] * d[alg.arrow(a).target]) as u32)
            .sum();
        let count = p
            .checked_pow(entries)
            .ok_or_else(|| Error::BudgetExceeded(format!("dimension vector {d:?}")))?;
        total = total.saturating_add(count);
        if total > budget {
            return Err(Error::BudgetExceeded(format!("{total} matrix tuples > {budget}")));
        }
    }
    let per_dv: Vec<Vec<Module>> = dvs.par_iter().map(|d| enumerate_dim_vector(alg, d)).collect();
    let mut out: Vec<Module> = per_dv.into_iter().flatten().collect();
    out.sort_by_key(|m| (m.total_dim(), m.dims().to_vec()));
    Ok(out)
}

fn enumerate_dim_vector(alg: &Arc<Algebra>, d: &[usize]) -> Vec<Module> {
    let f = alg.field();
    let p = f.p();
    let shapes: Vec<(usize, usize)> = (0..alg.num_arrows())
        .map(|a| (d[alg.arrow(a).target], d[alg.arrow(a).source]))
        .collect();
    let n: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut digits = vec![0u32; n];
    let mut found: Vec<Module> = Vec::new();
    loop {
        let mut pos = 0;
        let action: Vec<Mat> = shapes
            .iter()
            .map(|&(r, c)| {
                let m = Mat::from_data(f, r, c, digits[pos..pos + r * c].to_vec());
                pos += r * c;
                m
            })
            .collect();
        if let Ok(m) = Module::new(alg, d.to_vec(), action) {
            if is_indecomposable(&m) && !found.iter().any(|x| indec_iso(&m, x).is_some()) {
                found.push(m);
            }
        }
        // Next tuple in base p.
        let mut i = 0;
        while i < n {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    found
}

fn dims_label(m: &Module) -> String {
    let parts: Vec<String> = m.dims().iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Graphviz rendering: one node per indecomposable labelled by its
/// dimension vector, solid arrows for irreducible maps, dashed `x -> τx`.
pub fn ar_quiver_dot(idx: &IndecIndex) -> String {
    let mut s = String::from("digraph AR {\n  rankdir=LR;\n");
    for (i, m) in idx.modules.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", dims_label(m));
    }
    for &(a, b, k) in &idx.ar_arrows {
        if k == 1 {
            let _ = writeln!(s, "  n{a} -> n{b};");
        } else {
            let _ = writeln!(s, "  n{a} -> n{b} [label=\"{k}\"];");
        }
    }
    for (&x, &t) in &idx.tau_map {
        let _ = writeln!(s, "  n{x} -> n{t} [style=dashed, constraint=false];");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::is_isomorphic;

    fn lambda3(p: u32) -> Arc<Algebra> {
        Algebra::from_text(&format!(
            "field {p}\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation b*a\n"
        ))
        .unwrap()
    }

    fn dim_set(ms: &[Module]) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = ms.iter().map(|m| m.dims().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn knits_lambda3() {
        let a = lambda3(101);
        let idx = knit_indecomposables(&a, KnitLimits::default()).unwrap();
        assert_eq!(
            dim_set(&idx.modules),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![1, 0, 0], vec![1, 1, 0]]
        );
        let s1 = idx.find(&Module::simple(&a, 0)).unwrap();
        let s2 = idx.find(&Module::simple(&a, 1)).unwrap();
        let s3 = idx.find(&Module::simple(&a, 2)).unwrap();
        assert_eq!(idx.tau_map[&s1], s2);
        assert_eq!(idx.tau_map[&s2], s3);
        assert_eq!(idx.tau_map.len(), 2);
    }

    #[test]
    fn knits_semisimple() {
        let a = Algebra::from_text("field 2\nvertices 1 2 3\n").unwrap();
        let idx = knit_indecomposables(&a, KnitLimits::default()).unwrap();
        assert_eq!(idx.len(), 3);
        assert!(idx.ar_arrows.is_empty());
        let dot = ar_quiver_dot(&idx);
        assert!(dot.starts_with("digraph AR {"));
        assert_eq!(dot.matches("label=").count(), 3);
    }

    #[test]
    fn kronecker_exceeds_limits() {
        let a = Algebra::from_text("field 2\nvertices 1 2\narrow x: 1 -> 2\narrow y: 1 -> 2\n").unwrap();
        let r = knit_indecomposables(
            &a,
            KnitLimits {
                max_count: 200,
                max_dim: 12,
            },
        );
        match r {
            Err(Error::LimitExceeded { partial, .. }) => {
                // Preprojectives have dimension vectors (n, n+1) or (n+1, n).
                assert!(partial.len() >= 6);
            }
            other => panic!("expected a limit error, got {other:?}"),
        }
    }

    #[test]
    fn brute_force_matches_knitting_on_lambda3() {
        let a = lambda3(2);
        let bf = brute_force_indecomposables(&a, &[1, 1, 1], 1 << 20).unwrap();
        let idx = knit_indecomposables(&a, KnitLimits::default()).unwrap();
        assert_eq!(bf.len(), idx.len());
        for m in &bf {
            assert!(idx.find(m).is_some());
        }
        let k = Algebra::from_text("field 3\nvertices 1\n").unwrap();
        assert_eq!(brute_force_indecomposables(&k, &[1], 100).unwrap().len(), 1);
        assert!(brute_force_indecomposables(&a, &[0, 0, 0], 100).unwrap().is_empty());
        assert!(matches!(
            brute_force_indecomposables(&a, &[3, 3, 3], 100),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn ar_sequence_for_s2() {
        let a = lambda3(101);
        let seq = ar_sequence(&Module::simple(&a, 1)).unwrap();
        assert!(is_isomorphic(&seq.middle, &Module::projective(&a, 1)));
        assert!(seq.incl.is_injective() && seq.proj.is_surjective());
        assert!(seq.proj.compose(&seq.incl).is_zero());
    }
}
