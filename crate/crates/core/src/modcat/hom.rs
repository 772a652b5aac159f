use crate::error::{Error, Result};
use crate::exactlin::Mat;

use super::module::{ModMap, Module};

/// A basis of `Hom_A(M, N)`: the kernel of the intertwining system
/// `X_v M_a = N_a X_u` for every arrow `a: u -> v`.
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<ModMap>> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let alg = m.algebra();
    let f = m.field();
    let nv = alg.num_vertices();
    // Unknown X_v occupies a block of n_v * m_v variables, row-major.
    let mut var_off = Vec::with_capacity(nv);
    let mut nvars = 0;
    for v in 0..nv {
        var_off.push(nvars);
        nvars += n.dim_at(v) * m.dim_at(v);
    }
    if nvars == 0 {
        return Ok(vec![]);
    }
    let mut rows: Vec<u32> = Vec::new();
    let mut nrows = 0;
    for a in 0..alg.num_arrows() {
        let arr = alg.arrow(a);
        let (u, v) = (arr.source, arr.target);
        let (mu, mv, nu, nvd) = (m.dim_at(u), m.dim_at(v), n.dim_at(u), n.dim_at(v));
        let ma = m.action(a);
        let na = n.action(a);
        // Entry (i, j) of X_v M_a - N_a X_u, for i < n_v, j < m_u.
        for i in 0..nvd {
            for j in 0..mu {
                let mut row = vec![0u32; nvars];
                for k in 0..mv {
                    let c = ma.get(k, j);
                    if c != 0 {
                        let idx = var_off[v] + i * mv + k;
                        row[idx] = f.add(row[idx], c);
                    }
                }
                for k in 0..nu {
                    let c = na.get(i, k);
                    if c != 0 {
                        let idx = var_off[u] + k * mu + j;
                        row[idx] = f.sub(row[idx], c);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.extend(row);
                    nrows += 1;
                }
            }
        }
    }
    let system = Mat::from_data(f, nrows, nvars, rows);
    let basis = system
        .kernel_basis()
        .into_iter()
        .map(|x| {
            let mats = (0..nv)
                .map(|v| {
                    let (r, c) = (n.dim_at(v), m.dim_at(v));
                    Mat::from_data(f, r, c, x[var_off[v]..var_off[v] + r * c].to_vec())
                })
                .collect();
            ModMap::new_unchecked(m, n, mats)
        })
        .collect();
    Ok(basis)
}

pub fn hom_dim(m: &Module, n: &Module) -> usize {
    hom_basis(m, n).expect("same algebra").len()
}

/// Rank of a family of maps with common source and target, as vectors.
pub fn span_rank(maps: &[ModMap]) -> usize {
    if maps.is_empty() {
        return 0;
    }
    let f = maps[0].source().field();
    let cols: Vec<Vec<u32>> = maps.iter().map(ModMap::flatten).collect();
    Mat::from_columns(f, cols[0].len(), &cols).rank()
}

/// Kernel, image and cokernel of a map, each with its structure maps.
#[derive(Clone, Debug)]
pub struct MapParts {
    pub kernel: Module,
    /// `ker f -> M`
    pub kernel_incl: ModMap,
    pub image: Module,
    /// `M -> im f`
    pub coimage_proj: ModMap,
    /// `im f -> N`
    pub image_incl: ModMap,
    pub cokernel: Module,
    /// `N -> coker f`
    pub cokernel_proj: ModMap,
}

/// The submodule of `m` spanned at each vertex by the columns of `bases[v]`
/// (full column rank, closed under the action), with its inclusion.
pub fn submodule(m: &Module, bases: Vec<Mat>) -> (Module, ModMap) {
    let alg = m.algebra();
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let action = (0..alg.num_arrows())
        .map(|a| {
            let arr = alg.arrow(a);
            let moved = m.action(a).mul(&bases[arr.source]);
            bases[arr.target]
                .solve_matrix(&moved)
                .expect("shapes agree")
                .expect("subspace is a submodule")
        })
        .collect();
    let sub = Module::new_unchecked(alg, dims, action);
    let incl = ModMap::new_unchecked(&sub, m, bases);
    (sub, incl)
}

/// The quotient of `m` by the kernels of the surjections `projs[v]`
/// (whose kernels form a submodule), with the quotient map.
pub fn quotient_module(m: &Module, projs: Vec<Mat>) -> (Module, ModMap) {
    let alg = m.algebra();
    let f = m.field();
    let dims: Vec<usize> = projs.iter().map(Mat::rows).collect();
    let sections: Vec<Mat> = projs
        .iter()
        .map(|q| {
            q.solve_matrix(&Mat::identity(f, q.rows()))
                .expect("shapes agree")
                .expect("projection is surjective")
        })
        .collect();
    let action = (0..alg.num_arrows())
        .map(|a| {
            let arr = alg.arrow(a);
            projs[arr.target].mul(m.action(a)).mul(&sections[arr.source])
        })
        .collect();
    let quot = Module::new_unchecked(alg, dims, action);
    let proj = ModMap::new_unchecked(m, &quot, projs);
    (quot, proj)
}

pub fn map_parts(f: &ModMap) -> MapParts {
    let (m, n) = (f.source(), f.target());
    let nv = m.dims().len();
    let kernels: Vec<Mat> = (0..nv).map(|v| f.mat(v).kernel_matrix()).collect();
    let (kernel, kernel_incl) = submodule(m, kernels);
    let images: Vec<Mat> = (0..nv).map(|v| f.mat(v).column_space()).collect();
    let coim: Vec<Mat> = (0..nv)
        .map(|v| {
            images[v]
                .solve_matrix(f.mat(v))
                .expect("shapes agree")
                .expect("columns lie in the image")
        })
        .collect();
    let (image, image_incl) = submodule(n, images);
    let coimage_proj = ModMap::new_unchecked(m, &image, coim);
    let projs: Vec<Mat> = (0..nv).map(|v| f.mat(v).cokernel_projection()).collect();
    let (cokernel, cokernel_proj) = quotient_module(n, projs);
    MapParts {
        kernel,
        kernel_incl,
        image,
        coimage_proj,
        image_incl,
        cokernel,
        cokernel_proj,
    }
}

pub fn kernel(f: &ModMap) -> (Module, ModMap) {
    let kernels: Vec<Mat> = f.mats().iter().map(Mat::kernel_matrix).collect();
    submodule(f.source(), kernels)
}

pub fn cokernel(f: &ModMap) -> (Module, ModMap) {
    let parts = map_parts(f);
    (parts.cokernel, parts.cokernel_proj)
}

/// Sum of the given submodules (as inclusions into `m`).
pub fn sum_of_images(m: &Module, maps: &[ModMap]) -> (Module, ModMap) {
    let f = m.field();
    let bases = (0..m.dims().len())
        .map(|v| {
            let blocks: Vec<Mat> = maps.iter().map(|g| g.mat(v).clone()).collect();
            Mat::hstack_all(f, m.dim_at(v), &blocks).column_space()
        })
        .collect();
    submodule(m, bases)
}

/// `rad M`: the sum of the images of the arrows.
pub fn radical_submodule(m: &Module) -> (Module, ModMap) {
    let alg = m.algebra();
    let f = m.field();
    let bases = (0..alg.num_vertices())
        .map(|v| {
            let incoming: Vec<Mat> = (0..alg.num_arrows())
                .filter(|&a| alg.arrow(a).target == v)
                .map(|a| m.action(a).clone())
                .collect();
            Mat::hstack_all(f, m.dim_at(v), &incoming).column_space()
        })
        .collect();
    submodule(m, bases)
}

/// `soc M`: the vectors killed by every arrow.
pub fn socle_submodule(m: &Module) -> (Module, ModMap) {
    let alg = m.algebra();
    let f = m.field();
    let bases = (0..alg.num_vertices())
        .map(|v| {
            let outgoing: Vec<Mat> = (0..alg.num_arrows())
                .filter(|&a| alg.arrow(a).source == v)
                .map(|a| m.action(a).clone())
                .collect();
            Mat::vstack_all(f, m.dim_at(v), &outgoing).kernel_matrix()
        })
        .collect();
    submodule(m, bases)
}

/// `tr_T(M)`: the sum of the images of all maps `T -> M`.
pub fn trace_from(t: &Module, m: &Module) -> Result<(Module, ModMap)> {
    let maps = hom_basis(t, m)?;
    Ok(sum_of_images(m, &maps))
}

/// `rej_F(M)`: the intersection of the kernels of all maps `M -> F`.
pub fn reject_into(m: &Module, f: &Module) -> Result<(Module, ModMap)> {
    let maps = hom_basis(m, f)?;
    let field = m.field();
    let kernels = (0..m.dims().len())
        .map(|v| {
            let blocks: Vec<Mat> = maps.iter().map(|g| g.mat(v).clone()).collect();
            Mat::vstack_all(field, m.dim_at(v), &blocks).kernel_matrix()
        })
        .collect();
    Ok(submodule(m, kernels))
}

/// `ann M` as a subspace of `A`: basis vectors over the path basis.
pub fn annihilator(m: &Module) -> Vec<Vec<u32>> {
    let alg = m.algebra();
    let f = m.field();
    let cols: Vec<Vec<u32>> = (0..alg.dim())
        .map(|b| {
            let mut unit = vec![0; alg.dim()];
            unit[b] = 1;
            m.element_action(&unit).data().to_vec()
        })
        .collect();
    let n = m.total_dim() * m.total_dim();
    Mat::from_columns(f, n, &cols).kernel_basis()
}

pub fn annihilator_is_zero(m: &Module) -> bool {
    annihilator(m).is_empty()
}

/// Vertices `v` with `e_v` annihilating every module in `xs`.
pub fn annihilator_vertices(alg: &crate::algebra::Algebra, xs: &[Module]) -> Vec<usize> {
    (0..alg.num_vertices())
        .filter(|&v| xs.iter().all(|x| x.dim_at(v) == 0))
        .collect()
}
