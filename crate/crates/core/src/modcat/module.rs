use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, IdempotentQuotient};
use crate::error::{Error, Result};
use crate::exactlin::{Fp, Mat};

/// A finite-dimensional left module, stored as a quiver representation.
#[derive(Clone)]
pub struct Module {
    alg: Arc<Algebra>,
    dims: Vec<usize>,
    action: Vec<Mat>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.dims)
    }
}

/// Equal as representations (same algebra, same matrices), not up to iso.
impl PartialEq for Module {
    fn eq(&self, other: &Module) -> bool {
        self.same_algebra(other) && self.dims == other.dims && self.action == other.action
    }
}

impl Module {
    /// Checks shapes and that every relation acts as zero.
    pub fn new(alg: &Arc<Algebra>, dims: Vec<usize>, action: Vec<Mat>) -> Result<Module> {
        if dims.len() != alg.num_vertices() {
            return Err(Error::InvalidModule(format!(
                "{} vertex dimensions for {} vertices",
                dims.len(),
                alg.num_vertices()
            )));
        }
        if action.len() != alg.num_arrows() {
            return Err(Error::InvalidModule(format!(
                "{} arrow matrices for {} arrows",
                action.len(),
                alg.num_arrows()
            )));
        }
        for (a, m) in action.iter().enumerate() {
            let arr = alg.arrow(a);
            if m.rows() != dims[arr.target] || m.cols() != dims[arr.source] {
                return Err(Error::InvalidModule(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    arr.name,
                    dims[arr.target],
                    dims[arr.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != alg.field() {
                return Err(Error::InvalidModule(format!("arrow {} over the wrong field", arr.name)));
            }
        }
        let m = Module {
            alg: alg.clone(),
            dims,
            action,
        };
        let f = alg.field();
        for rel in &alg.spec().relations {
            let (s, t) = alg.spec().path_endpoints(&rel.terms[0].1).unwrap();
            let mut acc = Mat::zeros(f, m.dims[t], m.dims[s]);
            for (c, path) in &rel.terms {
                acc.add_scaled(*c, &m.path_action(s, path));
            }
            if !acc.is_zero() {
                return Err(Error::InvalidModule(format!(
                    "relation {} does not act as zero",
                    alg.spec().path_name(&rel.terms[0].1)
                )));
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(alg: &Arc<Algebra>, dims: Vec<usize>, action: Vec<Mat>) -> Module {
        debug_assert!(Module::new(alg, dims.clone(), action.clone()).is_ok());
        Module {
            alg: alg.clone(),
            dims,
            action,
        }
    }

    pub fn zero(alg: &Arc<Algebra>) -> Module {
        let dims = vec![0; alg.num_vertices()];
        Self::with_zero_action(alg, dims)
    }

    fn with_zero_action(alg: &Arc<Algebra>, dims: Vec<usize>) -> Module {
        let f = alg.field();
        let action = (0..alg.num_arrows())
            .map(|a| {
                let arr = alg.arrow(a);
                Mat::zeros(f, dims[arr.target], dims[arr.source])
            })
            .collect();
        Module {
            alg: alg.clone(),
            dims,
            action,
        }
    }

    pub fn simple(alg: &Arc<Algebra>, v: usize) -> Module {
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        Self::with_zero_action(alg, dims)
    }

    /// `P(v) = A e_v`, with basis the residue paths starting at `v`.
    pub fn projective(alg: &Arc<Algebra>, v: usize) -> Module {
        let f = alg.field();
        let n = alg.num_vertices();
        let dims: Vec<usize> = (0..n).map(|w| alg.paths_between(v, w).len()).collect();
        let action = (0..alg.num_arrows())
            .map(|a| {
                let arr = alg.arrow(a);
                let src = alg.paths_between(v, arr.source);
                let tgt = alg.paths_between(v, arr.target);
                let mut m = Mat::zeros(f, tgt.len(), src.len());
                for (c, &p) in src.iter().enumerate() {
                    for &(q, coef) in alg.mul_basis(alg.arrow_element(a), p) {
                        let r = tgt.iter().position(|&x| x == q).expect("parallel paths");
                        m.set(r, c, coef);
                    }
                }
                m
            })
            .collect();
        Module {
            alg: alg.clone(),
            dims,
            action,
        }
    }

    /// `I(v) = D(e_v A)`, the dual of the opposite projective at `v`.
    pub fn injective(alg: &Arc<Algebra>, v: usize) -> Module {
        Module::projective(&alg.opposite(), v).dual().rebase(alg)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Fp {
        self.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn action(&self, a: usize) -> &Mat {
        &self.action[a]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.action
    }

    /// Start of each vertex block in the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    /// Matrix of a path (arrows in traversal order) starting at `source`.
    pub fn path_action(&self, source: usize, arrows: &[usize]) -> Mat {
        let mut m = Mat::identity(self.field(), self.dims[source]);
        for &a in arrows {
            m = self.action[a].mul(&m);
        }
        m
    }

    /// Action of a basis element of the algebra, as a map between vertex spaces.
    pub fn basis_action(&self, b: usize) -> Mat {
        let p = &self.alg.basis()[b];
        self.path_action(p.source, &p.arrows)
    }

    /// Action of an algebra element on the total space.
    pub fn element_action(&self, x: &[u32]) -> Mat {
        let f = self.field();
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = Mat::zeros(f, n, n);
        for (b, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = &self.alg.basis()[b];
            let block = self.basis_action(b).scale(c);
            let mut cur = out.block(off[p.target], block.rows(), off[p.source], block.cols());
            cur = cur.add(&block);
            out.set_block(off[p.target], off[p.source], &cur);
        }
        out
    }

    /// The dual `D M = Hom_K(M, K)` over the opposite algebra.
    pub fn dual(&self) -> Module {
        let op = self.alg.opposite();
        Module {
            alg: op,
            dims: self.dims.clone(),
            action: self.action.iter().map(Mat::transpose).collect(),
        }
    }

    /// Reattaches the module to a structurally equal algebra handle.
    pub fn rebase(self, alg: &Arc<Algebra>) -> Module {
        assert!(self.alg.same_as(alg), "rebase onto a different algebra");
        Module {
            alg: alg.clone(),
            ..self
        }
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        self.alg.same_as(&other.alg)
    }

    /// Restricts a module supported away from the removed vertices to `A/<e>`.
    pub fn to_quotient(&self, q: &IdempotentQuotient) -> Result<Module> {
        for v in 0..self.alg.num_vertices() {
            if !q.kept_vertices.contains(&v) && self.dims[v] != 0 {
                return Err(Error::InvalidModule(format!(
                    "nonzero at removed vertex {}",
                    self.alg.vertex_label(v)
                )));
            }
        }
        let dims = q.kept_vertices.iter().map(|&v| self.dims[v]).collect();
        let action = q.kept_arrows.iter().map(|&a| self.action[a].clone()).collect();
        Module::new(&q.algebra, dims, action)
    }

    /// Inflates an `A/<e>`-module back to `A`.
    pub fn from_quotient(alg: &Arc<Algebra>, q: &IdempotentQuotient, m: &Module) -> Module {
        let f = alg.field();
        let mut dims = vec![0; alg.num_vertices()];
        for (i, &v) in q.kept_vertices.iter().enumerate() {
            dims[v] = m.dims[i];
        }
        let action = (0..alg.num_arrows())
            .map(|a| match q.kept_arrows.iter().position(|&x| x == a) {
                Some(i) => m.action[i].clone(),
                None => {
                    let arr = alg.arrow(a);
                    Mat::zeros(f, dims[arr.target], dims[arr.source])
                }
            })
            .collect();
        Module::new_unchecked(alg, dims, action)
    }
}

/// Direct sum in the given order; vertex spaces are concatenated.
pub fn direct_sum(alg: &Arc<Algebra>, parts: &[Module]) -> Module {
    let f = alg.field();
    let n = alg.num_vertices();
    let dims = (0..n).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
    let action = (0..alg.num_arrows())
        .map(|a| {
            let blocks: Vec<Mat> = parts.iter().map(|m| m.action[a].clone()).collect();
            Mat::block_diag(f, &blocks)
        })
        .collect();
    Module {
        alg: alg.clone(),
        dims,
        action,
    }
}

/// A morphism of modules, one matrix per vertex.
#[derive(Clone, Debug)]
pub struct ModMap {
    source: Module,
    target: Module,
    mats: Vec<Mat>,
}

impl ModMap {
    /// Checks shapes and the intertwining condition for every arrow.
    pub fn new(source: &Module, target: &Module, mats: Vec<Mat>) -> Result<ModMap> {
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch);
        }
        if mats.len() != source.dims.len() {
            return Err(Error::DimensionMismatch("one matrix per vertex expected".into()));
        }
        for (v, m) in mats.iter().enumerate() {
            if m.rows() != target.dims[v] || m.cols() != source.dims[v] {
                return Err(Error::DimensionMismatch(format!("map block at vertex {v}")));
            }
        }
        let alg = &source.alg;
        for a in 0..alg.num_arrows() {
            let arr = alg.arrow(a);
            let lhs = mats[arr.target].mul(&source.action[a]);
            let rhs = target.action[a].mul(&mats[arr.source]);
            if lhs != rhs {
                return Err(Error::InvalidModule(format!("map does not commute with {}", arr.name)));
            }
        }
        Ok(ModMap {
            source: source.clone(),
            target: target.clone(),
            mats,
        })
    }

    pub(crate) fn new_unchecked(source: &Module, target: &Module, mats: Vec<Mat>) -> ModMap {
        debug_assert!(ModMap::new(source, target, mats.clone()).is_ok());
        ModMap {
            source: source.clone(),
            target: target.clone(),
            mats,
        }
    }

    pub fn zero(source: &Module, target: &Module) -> ModMap {
        let f = source.field();
        let mats = (0..source.dims.len())
            .map(|v| Mat::zeros(f, target.dims[v], source.dims[v]))
            .collect();
        ModMap {
            source: source.clone(),
            target: target.clone(),
            mats,
        }
    }

    pub fn identity(m: &Module) -> ModMap {
        let f = m.field();
        let mats = m.dims.iter().map(|&d| Mat::identity(f, d)).collect();
        ModMap {
            source: m.clone(),
            target: m.clone(),
            mats,
        }
    }

    /// Builds a map from its block-diagonal matrix on total spaces.
    pub fn from_total(source: &Module, target: &Module, total: &Mat) -> ModMap {
        let so = source.offsets();
        let to = target.offsets();
        let mats = (0..source.dims.len())
            .map(|v| total.block(to[v], target.dims[v], so[v], source.dims[v]))
            .collect();
        ModMap::new_unchecked(source, target, mats)
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn mat(&self, v: usize) -> &Mat {
        &self.mats[v]
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    /// Block-diagonal matrix on total spaces.
    pub fn total(&self) -> Mat {
        Mat::block_diag(self.source.field(), &self.mats)
    }

    /// Entries of all vertex blocks, concatenated; a coordinate vector in
    /// the space of vertexwise linear maps.
    pub fn flatten(&self) -> Vec<u32> {
        self.mats.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(Mat::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.mats.iter().all(Mat::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.rows())
    }

    pub fn rank(&self) -> usize {
        self.mats.iter().map(Mat::rank).sum()
    }

    pub fn inverse(&self) -> Option<ModMap> {
        let mats: Option<Vec<Mat>> = self.mats.iter().map(Mat::inverse).collect();
        Some(ModMap::new_unchecked(&self.target, &self.source, mats?))
    }

    /// `g.compose(f) = g ∘ f`.
    pub fn compose(&self, f: &ModMap) -> ModMap {
        debug_assert_eq!(f.target.dims, self.source.dims);
        let mats = self.mats.iter().zip(&f.mats).map(|(g, f)| g.mul(f)).collect();
        ModMap {
            source: f.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }

    pub fn add(&self, other: &ModMap) -> ModMap {
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.add(b)).collect();
        ModMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mats,
        }
    }

    pub fn scale(&self, c: u32) -> ModMap {
        ModMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: self.mats.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> ModMap {
        self.scale(self.source.field().neg(1))
    }

    /// Linear combination `sum c_i f_i` of maps with a common source and target.
    pub fn combination(source: &Module, target: &Module, terms: &[(u32, &ModMap)]) -> ModMap {
        let mut out = ModMap::zero(source, target);
        for &(c, f) in terms {
            for (acc, m) in out.mats.iter_mut().zip(&f.mats) {
                acc.add_scaled(c, m);
            }
        }
        out
    }

    /// Replaces source and target by structurally identical modules.
    pub fn with_ends(&self, source: &Module, target: &Module) -> ModMap {
        assert_eq!(source.dims, self.source.dims);
        assert_eq!(target.dims, self.target.dims);
        ModMap {
            source: source.clone(),
            target: target.clone(),
            mats: self.mats.clone(),
        }
    }

    /// `D f : D N -> D M` over the opposite algebra.
    pub fn dual(&self) -> ModMap {
        ModMap {
            source: self.target.dual(),
            target: self.source.dual(),
            mats: self.mats.iter().map(Mat::transpose).collect(),
        }
    }

    pub fn rebase(self, alg: &Arc<Algebra>) -> ModMap {
        ModMap {
            source: self.source.rebase(alg),
            target: self.target.rebase(alg),
            mats: self.mats,
        }
    }

    /// The map `⊕ sources -> ⊕ targets` with block `(i, j)` given by
    /// `block(i, j)` (a map `sources[j] -> targets[i]`, or `None` for zero).
    pub fn from_blocks(
        alg: &Arc<Algebra>,
        sources: &[Module],
        targets: &[Module],
        block: impl Fn(usize, usize) -> Option<ModMap>,
    ) -> ModMap {
        let source = direct_sum(alg, sources);
        let target = direct_sum(alg, targets);
        let f = alg.field();
        let mut mats: Vec<Mat> = (0..alg.num_vertices())
            .map(|v| Mat::zeros(f, target.dims[v], source.dims[v]))
            .collect();
        for i in 0..targets.len() {
            for j in 0..sources.len() {
                let Some(g) = block(i, j) else { continue };
                for (v, m) in mats.iter_mut().enumerate() {
                    let r0: usize = targets[..i].iter().map(|t| t.dims[v]).sum();
                    let c0: usize = sources[..j].iter().map(|s| s.dims[v]).sum();
                    m.set_block(r0, c0, &g.mats[v]);
                }
            }
        }
        ModMap::new_unchecked(&source, &target, mats)
    }

    /// Canonical injection of summand `i` into `direct_sum(parts)`.
    pub fn injection(alg: &Arc<Algebra>, parts: &[Module], i: usize) -> ModMap {
        ModMap::from_blocks(alg, &parts[i..=i], parts, |r, _| {
            (r == i).then(|| ModMap::identity(&parts[i]))
        })
        .with_source(&parts[i])
    }

    /// Canonical projection of `direct_sum(parts)` onto summand `i`.
    pub fn projection(alg: &Arc<Algebra>, parts: &[Module], i: usize) -> ModMap {
        ModMap::from_blocks(alg, parts, &parts[i..=i], |_, c| {
            (c == i).then(|| ModMap::identity(&parts[i]))
        })
        .with_target(&parts[i])
    }

    /// `(f_1, ..., f_k) : ⊕ M_j -> N`.
    pub fn row(alg: &Arc<Algebra>, maps: &[ModMap], target: &Module) -> ModMap {
        let sources: Vec<Module> = maps.iter().map(|m| m.source.clone()).collect();
        ModMap::from_blocks(alg, &sources, std::slice::from_ref(target), |_, j| Some(maps[j].clone()))
            .with_target(target)
    }

    /// `(f_1, ..., f_k)^T : M -> ⊕ N_i`.
    pub fn column(alg: &Arc<Algebra>, source: &Module, maps: &[ModMap]) -> ModMap {
        let targets: Vec<Module> = maps.iter().map(|m| m.target.clone()).collect();
        ModMap::from_blocks(alg, std::slice::from_ref(source), &targets, |i, _| Some(maps[i].clone()))
            .with_source(source)
    }

    /// `f ⊕ g`.
    pub fn diagonal(alg: &Arc<Algebra>, maps: &[ModMap]) -> ModMap {
        let sources: Vec<Module> = maps.iter().map(|m| m.source.clone()).collect();
        let targets: Vec<Module> = maps.iter().map(|m| m.target.clone()).collect();
        ModMap::from_blocks(alg, &sources, &targets, |i, j| (i == j).then(|| maps[i].clone()))
    }

    fn with_source(mut self, s: &Module) -> ModMap {
        self.source = s.clone();
        self
    }

    fn with_target(mut self, t: &Module) -> ModMap {
        self.target = t.clone();
        self
    }
}
