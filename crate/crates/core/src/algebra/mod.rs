//! Bound quiver algebras `A = KQ/I` with an explicit path basis.

mod spec;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use spec::{parse_spec, ArrowSpec, QuiverSpec, Relation};

use crate::error::{Error, Result};
use crate::exactlin::{Fp, Mat};

/// A path in the quiver; `arrows` lists arrow indices in traversal order.
/// Trivial paths have no arrows and `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Give up (`NotAdmissible`) once paths of this length are still nonzero.
    pub max_path_len: usize,
    /// Give up once the truncated path space has this many paths.
    pub max_paths: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_path_len: 64,
            max_paths: 20_000,
        }
    }
}

/// A finite-dimensional algebra `KQ/I` over `F_p`.
///
/// The basis is a set of residue paths: trivial paths `e_v` first (indices
/// `0..n` in vertex order), then arrows in declaration order, then longer
/// paths. Multiplication `b_i * b_j` means "b_j, then b_i".
pub struct Algebra {
    spec: QuiverSpec,
    field: Fp,
    basis: Vec<Path>,
    mult: Vec<Vec<Vec<(usize, u32)>>>,
    by_ends: Vec<Vec<Vec<usize>>>,
    arrow_basis: Vec<usize>,
    loewy_bound: usize,
    opposite: OnceLock<Arc<Algebra>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("field", &self.field)
            .field("vertices", &self.spec.vertices)
            .field("dim", &self.dim())
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Algebra {}

/// Paths of length `<= n`, columns ordered longest first.
struct Truncation {
    paths: Vec<Path>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
    col_of: Vec<usize>,
}

impl Truncation {
    fn new(spec: &QuiverSpec, n: usize, max_paths: usize) -> Option<Self> {
        let mut levels: Vec<Vec<Path>> = vec![(0..spec.vertices.len())
            .map(|v| Path {
                source: v,
                target: v,
                arrows: vec![],
            })
            .collect()];
        let mut total = levels[0].len();
        for _ in 0..n {
            let prev = levels.last().unwrap();
            let mut next = Vec::new();
            for p in prev {
                for (ai, a) in spec.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            total += next.len();
            if total > max_paths {
                return None;
            }
            levels.push(next);
        }
        let paths: Vec<Path> = levels.into_iter().flatten().collect();
        let mut lookup = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            lookup.insert((p.source, p.arrows.clone()), i);
        }
        // Longest paths get the leftmost columns so they become pivots.
        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(paths[i].len()), i));
        let mut col_of = vec![0; paths.len()];
        for (c, &i) in order.iter().enumerate() {
            col_of[i] = c;
        }
        Some(Truncation {
            paths,
            lookup,
            col_of,
        })
    }

    fn col(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.lookup
            .get(&(source, arrows.to_vec()))
            .map(|&i| self.col_of[i])
    }
}

impl Algebra {
    pub fn build(spec: QuiverSpec) -> Result<Arc<Algebra>> {
        Self::build_with(spec, BuildOptions::default())
    }

    pub fn from_text(text: &str) -> Result<Arc<Algebra>> {
        Self::build(parse_spec(text)?)
    }

    /// Computes the path basis length by length: at truncation length `n`
    /// the span of `u * r * w` (relations `r`) is row-reduced; once every
    /// path of length `n` lies in that span the basis is the set of
    /// non-pivot paths.
    pub fn build_with(spec: QuiverSpec, opts: BuildOptions) -> Result<Arc<Algebra>> {
        let field = spec.field();
        let n_vertices = spec.vertices.len();
        for n in 1..=opts.max_path_len {
            let Some(tr) = Truncation::new(&spec, n, opts.max_paths) else {
                return Err(Error::NotAdmissible {
                    bound: opts.max_path_len,
                });
            };
            let ncols = tr.paths.len();
            let mut paths_from: Vec<Vec<usize>> = vec![vec![]; n_vertices];
            let mut paths_to: Vec<Vec<usize>> = vec![vec![]; n_vertices];
            for (i, p) in tr.paths.iter().enumerate() {
                paths_from[p.source].push(i);
                paths_to[p.target].push(i);
            }
            let mut rows: Vec<u32> = Vec::new();
            let mut nrows = 0;
            for rel in &spec.relations {
                let (s, t) = spec.path_endpoints(&rel.terms[0].1).expect("validated");
                let minlen = rel.terms.iter().map(|(_, p)| p.len()).min().unwrap();
                for &wi in &paths_to[s] {
                    let w = &tr.paths[wi];
                    for &ui in &paths_from[t] {
                        let u = &tr.paths[ui];
                        if w.len() + u.len() + minlen > n {
                            continue;
                        }
                        let mut row = vec![0u32; ncols];
                        for (c, q) in &rel.terms {
                            if w.len() + q.len() + u.len() > n {
                                continue;
                            }
                            let mut arrows = w.arrows.clone();
                            arrows.extend_from_slice(q);
                            arrows.extend_from_slice(&u.arrows);
                            let col = tr.col(w.source, &arrows).expect("path in truncation");
                            row[col] = field.add(row[col], *c);
                        }
                        if row.iter().any(|&x| x != 0) {
                            rows.extend(row);
                            nrows += 1;
                        }
                    }
                }
            }
            let rel_mat = Mat::from_data(field, nrows, ncols, rows);
            let rr = rel_mat.rref();
            let mut pivot_row = vec![None; ncols];
            for (r, &c) in rr.pivots.iter().enumerate() {
                pivot_row[c] = Some(r);
            }
            // Every path of length n must reduce to zero.
            let top_killed = tr.paths.iter().filter(|p| p.len() == n).all(|p| {
                let c = tr.col(p.source, &p.arrows).unwrap();
                match pivot_row[c] {
                    Some(r) => (0..ncols).all(|k| k == c || rr.matrix.get(r, k) == 0),
                    None => false,
                }
            });
            if !top_killed {
                continue;
            }
            return Ok(Arc::new(Self::assemble(spec, field, n, &tr, &rr.matrix, &pivot_row)));
        }
        Err(Error::NotAdmissible {
            bound: opts.max_path_len,
        })
    }

    fn assemble(
        spec: QuiverSpec,
        field: Fp,
        n: usize,
        tr: &Truncation,
        reduced: &Mat,
        pivot_row: &[Option<usize>],
    ) -> Algebra {
        let n_vertices = spec.vertices.len();
        // Non-pivot paths in (length, generation) order.
        let mut basis_paths: Vec<usize> = (0..tr.paths.len())
            .filter(|&i| pivot_row[tr.col_of[i]].is_none())
            .collect();
        basis_paths.sort_by_key(|&i| (tr.paths[i].len(), i));
        let basis: Vec<Path> = basis_paths.iter().map(|&i| tr.paths[i].clone()).collect();
        let mut basis_of_col = vec![None; tr.paths.len()];
        for (b, &i) in basis_paths.iter().enumerate() {
            basis_of_col[tr.col_of[i]] = Some(b);
        }
        let normal_form = |source: usize, arrows: &[usize]| -> Vec<(usize, u32)> {
            if arrows.len() > n {
                return vec![];
            }
            let c = tr.col(source, arrows).expect("path in truncation");
            if let Some(b) = basis_of_col[c] {
                return vec![(b, 1)];
            }
            let r = pivot_row[c].expect("pivot");
            let mut out: Vec<(usize, u32)> = (0..reduced.cols())
                .filter(|&k| k != c && reduced.get(r, k) != 0)
                .map(|k| (basis_of_col[k].expect("reduced row"), field.neg(reduced.get(r, k))))
                .collect();
            out.sort();
            out
        };
        let dim = basis.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                if bj.target != bi.source {
                    continue;
                }
                let mut arrows = bj.arrows.clone();
                arrows.extend_from_slice(&bi.arrows);
                mult[i][j] = normal_form(bj.source, &arrows);
            }
        }
        let mut by_ends = vec![vec![Vec::new(); n_vertices]; n_vertices];
        for (i, b) in basis.iter().enumerate() {
            by_ends[b.source][b.target].push(i);
        }
        let arrow_basis = (0..spec.arrows.len())
            .map(|a| {
                basis
                    .iter()
                    .position(|b| b.arrows == [a])
                    .expect("arrows survive an admissible ideal")
            })
            .collect();
        let alg = Algebra {
            spec,
            field,
            basis,
            mult,
            by_ends,
            arrow_basis,
            loewy_bound: n,
            opposite: OnceLock::new(),
        };
        debug_assert!(alg.check_associative());
        alg
    }

    /// Exhaustive associativity check on basis triples.
    pub fn check_associative(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul_sparse(&[(i, 1)], &[(j, 1)]);
                for k in 0..d {
                    let left = self.mul_sparse(&ij, &[(k, 1)]);
                    let jk = self.mul_sparse(&[(j, 1)], &[(k, 1)]);
                    let right = self.mul_sparse(&[(i, 1)], &jk);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn mul_sparse(&self, x: &[(usize, u32)], y: &[(usize, u32)]) -> Vec<(usize, u32)> {
        let f = self.field;
        let mut acc = vec![0u32; self.dim()];
        for &(i, a) in x {
            for &(j, b) in y {
                let ab = f.mul(a, b);
                for &(k, c) in &self.mult[i][j] {
                    acc[k] = f.add(acc[k], f.mul(ab, c));
                }
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|&(_, v)| v != 0)
            .collect()
    }

    pub fn spec(&self) -> &QuiverSpec {
        &self.spec
    }
    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.spec.vertices.len()
    }
    pub fn num_arrows(&self) -> usize {
        self.spec.arrows.len()
    }
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }
    /// Length beyond which every path is zero.
    pub fn loewy_bound(&self) -> usize {
        self.loewy_bound
    }

    /// Structural identity: same quiver, relations and field.
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.spec.vertices[v]
    }

    pub fn arrow(&self, a: usize) -> &ArrowSpec {
        &self.spec.arrows[a]
    }

    /// Basis index of the trivial path at `v`.
    pub fn idempotent(&self, v: usize) -> usize {
        v
    }

    pub fn arrow_element(&self, a: usize) -> usize {
        self.arrow_basis[a]
    }

    /// Basis indices of residue paths from `s` to `t`.
    pub fn paths_between(&self, s: usize, t: usize) -> &[usize] {
        &self.by_ends[s][t]
    }

    /// Sparse product `b_i * b_j` ("b_j, then b_i").
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.mult[i][j]
    }

    /// Dense product of two elements.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let xs: Vec<_> = x.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
        let ys: Vec<_> = y.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
        let mut out = vec![0; self.dim()];
        for (k, v) in self.mul_sparse(&xs, &ys) {
            out[k] = v;
        }
        out
    }

    /// The residue of an arbitrary path, as a dense vector over the basis.
    pub fn path_element(&self, source: usize, arrows: &[usize]) -> Vec<u32> {
        let mut cur: Vec<(usize, u32)> = vec![(self.idempotent(source), 1)];
        for &a in arrows {
            cur = self.mul_sparse(&[(self.arrow_element(a), 1)], &cur);
        }
        let mut out = vec![0; self.dim()];
        for (k, v) in cur {
            out[k] = v;
        }
        out
    }

    /// The opposite algebra (arrows and relations reversed), cached.
    pub fn opposite(&self) -> Arc<Algebra> {
        self.opposite
            .get_or_init(|| {
                Algebra::build_with(
                    self.spec.opposite(),
                    BuildOptions {
                        max_path_len: self.loewy_bound + 1,
                        max_paths: usize::MAX,
                    },
                )
                .expect("opposite of an admissible algebra is admissible")
            })
            .clone()
    }

    /// Image of a basis element in the opposite algebra.
    pub fn to_opposite(&self, b: usize) -> Vec<u32> {
        let path = &self.basis[b];
        let rev: Vec<usize> = path.arrows.iter().rev().copied().collect();
        self.opposite().path_element(path.target, &rev)
    }

    /// `A / <e>` for the idempotent `e = sum of e_v, v in removed`.
    pub fn quotient_by_idempotent(&self, removed: &[usize]) -> Result<IdempotentQuotient> {
        for &v in removed {
            if v >= self.num_vertices() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        let keep_vertex: Vec<bool> = (0..self.num_vertices()).map(|v| !removed.contains(&v)).collect();
        let kept_vertices: Vec<usize> = (0..self.num_vertices()).filter(|&v| keep_vertex[v]).collect();
        let new_vertex = |v: usize| kept_vertices.iter().position(|&x| x == v);
        let kept_arrows: Vec<usize> = (0..self.num_arrows())
            .filter(|&a| {
                let arr = &self.spec.arrows[a];
                keep_vertex[arr.source] && keep_vertex[arr.target]
            })
            .collect();
        let new_arrow = |a: usize| kept_arrows.iter().position(|&x| x == a);
        let arrows = kept_arrows
            .iter()
            .map(|&a| {
                let arr = &self.spec.arrows[a];
                ArrowSpec {
                    name: arr.name.clone(),
                    source: new_vertex(arr.source).unwrap(),
                    target: new_vertex(arr.target).unwrap(),
                }
            })
            .collect();
        let relations = self
            .spec
            .relations
            .iter()
            .map(|r| Relation {
                terms: r
                    .terms
                    .iter()
                    .filter_map(|(c, path)| {
                        let mapped: Option<Vec<usize>> = path.iter().map(|&a| new_arrow(a)).collect();
                        mapped.map(|p| (*c, p))
                    })
                    .collect(),
            })
            .collect();
        let spec = QuiverSpec::new(
            self.spec.p,
            kept_vertices.iter().map(|&v| self.spec.vertices[v].clone()).collect(),
            arrows,
            relations,
        )?;
        let algebra = Algebra::build_with(
            spec,
            BuildOptions {
                max_path_len: self.loewy_bound + 1,
                max_paths: usize::MAX,
            },
        )?;
        Ok(IdempotentQuotient {
            algebra,
            kept_vertices,
            kept_arrows,
        })
    }

    /// `A / J` for a two-sided ideal `J` spanned by `generators`, provided
    /// `J` lies in the square of the arrow ideal (so the quiver is unchanged).
    pub fn quotient_by_ideal(&self, generators: &[Vec<u32>]) -> Result<Arc<Algebra>> {
        let mut relations = self.spec.relations.clone();
        for g in generators {
            for s in 0..self.num_vertices() {
                for t in 0..self.num_vertices() {
                    let terms: Vec<(u32, Vec<usize>)> = self
                        .paths_between(s, t)
                        .iter()
                        .filter(|&&b| g[b] != 0)
                        .map(|&b| (g[b], self.basis[b].arrows.clone()))
                        .collect();
                    if terms.is_empty() {
                        continue;
                    }
                    if terms.iter().any(|(_, p)| p.len() < 2) {
                        return Err(Error::Unsupported(
                            "ideal not contained in the square of the arrow ideal".into(),
                        ));
                    }
                    relations.push(Relation { terms });
                }
            }
        }
        let spec = QuiverSpec::new(
            self.spec.p,
            self.spec.vertices.clone(),
            self.spec.arrows.clone(),
            relations,
        )?;
        Algebra::build_with(
            spec,
            BuildOptions {
                max_path_len: self.loewy_bound + 1,
                max_paths: usize::MAX,
            },
        )
    }

    /// Same quiver and relations, different characteristic.
    pub fn with_field(&self, p: u32) -> Result<Arc<Algebra>> {
        let relations = self
            .spec
            .relations
            .iter()
            .map(|r| Relation {
                terms: r.terms.iter().map(|(c, path)| (c % p, path.clone())).collect(),
            })
            .collect();
        Algebra::build(QuiverSpec::new(
            p,
            self.spec.vertices.clone(),
            self.spec.arrows.clone(),
            relations,
        )?)
    }
}

/// `A/<e>` together with the vertex and arrow embeddings into `A`.
#[derive(Clone, Debug)]
pub struct IdempotentQuotient {
    pub algebra: Arc<Algebra>,
    /// New vertex index -> old vertex index.
    pub kept_vertices: Vec<usize>,
    /// New arrow index -> old arrow index.
    pub kept_arrows: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const LAMBDA3: &str =
        "field 5\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelation b*a\n";

    #[test]
    fn lambda3_has_dimension_five() {
        let a = Algebra::from_text(LAMBDA3).unwrap();
        assert_eq!(a.dim(), 5);
        assert!(a.check_associative());
        // b * a = 0
        let ba = a.mul_basis(a.arrow_element(1), a.arrow_element(0));
        assert!(ba.is_empty());
        // b * e_2 = b
        assert_eq!(a.mul_basis(a.arrow_element(1), 1), &[(a.arrow_element(1), 1)]);
    }

    #[test]
    fn point_algebra() {
        let a = Algebra::from_text("field 3\nvertices x\n").unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn free_loop_is_not_admissible() {
        let r = Algebra::from_text("field 2\nvertices 1\narrow x: 1 -> 1\n");
        assert!(matches!(r, Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn truncated_loop() {
        let a = Algebra::from_text("field 2\nvertices 1\narrow x: 1 -> 1\nrelation x*x*x\n").unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.check_associative());
    }

    #[test]
    fn commutative_square() {
        let t = "field 7\nvertices 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 4\narrow c: 1 -> 3\narrow d: 3 -> 4\nrelation b*a - d*c\n";
        let a = Algebra::from_text(t).unwrap();
        // e1..e4, a, b, c, d, one length-2 path
        assert_eq!(a.dim(), 9);
        let ba = a.path_element(0, &[0, 1]);
        let dc = a.path_element(0, &[2, 3]);
        assert_eq!(ba, dc);
        assert!(a.check_associative());
    }

    #[test]
    fn mixed_length_relation() {
        // x^2 = x^3 on a loop with x^3 = 0 gives x^2 = 0.
        let t = "field 5\nvertices 1\narrow x: 1 -> 1\nrelation x*x - x*x*x\nrelation x*x*x\n";
        let a = Algebra::from_text(t).unwrap();
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn quotients() {
        let a = Algebra::from_text(LAMBDA3).unwrap();
        let q = a.quotient_by_idempotent(&[0, 1]).unwrap();
        assert_eq!(q.algebra.dim(), 1);
        assert_eq!(q.kept_vertices, vec![2]);
        let q = a.quotient_by_idempotent(&[]).unwrap();
        assert!(q.algebra.same_as(&a));
        let q = a.quotient_by_idempotent(&[1]).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert_eq!(q.algebra.num_arrows(), 0);
        let z = a.quotient_by_idempotent(&[0, 1, 2]).unwrap();
        assert_eq!(z.algebra.dim(), 0);
        // Composing quotients by disjoint sets equals the quotient by the union.
        let q1 = a.quotient_by_idempotent(&[0]).unwrap();
        let q12 = q1.algebra.quotient_by_idempotent(&[0]).unwrap();
        let direct = a.quotient_by_idempotent(&[0, 1]).unwrap();
        assert!(q12.algebra.same_as(&direct.algebra));
    }

    #[test]
    fn opposite_involution() {
        let a = Algebra::from_text(LAMBDA3).unwrap();
        let op = a.opposite();
        assert_eq!(op.dim(), 5);
        assert_eq!(op.arrow(0).source, 1);
        assert!(op.opposite().same_as(&a));
        let ss = Algebra::from_text("field 2\nvertices 1 2 3\n").unwrap();
        assert!(ss.opposite().same_as(&ss));
    }
}
