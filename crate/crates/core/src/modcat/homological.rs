use std::sync::Arc;

use crate::algebra::Algebra;
use crate::exactlin::Mat;

use super::decomp::strip_summands;
use super::hom::{cokernel, hom_basis, hom_dim, kernel, span_rank};
use super::module::{direct_sum, ModMap, Module};

/// A generator of a module: a vector in the space at `vertex`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub vertex: usize,
    pub vector: Vec<u32>,
}

/// Generators whose classes form a basis of `top M = M / rad M`.
pub fn top_generators(m: &Module) -> Vec<Generator> {
    let alg = m.algebra();
    let f = m.field();
    let mut out = Vec::new();
    for v in 0..alg.num_vertices() {
        let d = m.dim_at(v);
        if d == 0 {
            continue;
        }
        let incoming: Vec<Mat> = (0..alg.num_arrows())
            .filter(|&a| alg.arrow(a).target == v)
            .map(|a| m.action(a).clone())
            .collect();
        let rad = Mat::hstack_all(f, d, &incoming).column_space();
        let r = rad.cols();
        let rr = rad.hstack(&Mat::identity(f, d)).rref();
        for &c in rr.pivots.iter().filter(|&&c| c >= r) {
            let mut vector = vec![0; d];
            vector[c - r] = 1;
            out.push(Generator { vertex: v, vector });
        }
    }
    out
}

/// The map `⊕ P(v_j) -> M` sending `e_{v_j}` to the `j`-th generator.
pub fn map_from_generators(m: &Module, gens: &[Generator]) -> ModMap {
    let alg = m.algebra();
    let parts: Vec<Module> = gens.iter().map(|g| Module::projective(alg, g.vertex)).collect();
    let blocks: Vec<ModMap> = gens
        .iter()
        .zip(&parts)
        .map(|(g, p)| {
            let mats = (0..alg.num_vertices())
                .map(|w| {
                    let cols: Vec<Vec<u32>> = alg
                        .paths_between(g.vertex, w)
                        .iter()
                        .map(|&b| m.basis_action(b).mul_vec(&g.vector))
                        .collect();
                    Mat::from_columns(m.field(), m.dim_at(w), &cols)
                })
                .collect();
            ModMap::new_unchecked(p, m, mats)
        })
        .collect();
    ModMap::row(alg, &blocks, m)
}

/// Projective cover `P(M) -> M` together with the generators used.
pub fn projective_cover_with_generators(m: &Module) -> (ModMap, Vec<Generator>) {
    let gens = top_generators(m);
    (map_from_generators(m, &gens), gens)
}

pub fn projective_cover(m: &Module) -> ModMap {
    projective_cover_with_generators(m).0
}

/// Injective envelope `M -> I(M)`, the dual of the projective cover of `D M`.
pub fn injective_envelope(m: &Module) -> ModMap {
    let alg = m.algebra();
    let env = projective_cover(&m.dual()).dual().rebase(alg);
    let target = env.target().clone();
    env.with_ends(m, &target)
}

pub fn is_projective(m: &Module) -> bool {
    top_generators(m)
        .iter()
        .map(|g| Module::projective(m.algebra(), g.vertex).total_dim())
        .sum::<usize>()
        == m.total_dim()
}

pub fn is_injective(m: &Module) -> bool {
    is_projective(&m.dual())
}

/// `Ω^k M`: iterated kernels of projective covers. Projective summands of
/// the result are kept, so `Ω` of a non-projective module may be projective.
pub fn syzygy(m: &Module, k: usize) -> Module {
    let mut cur = m.clone();
    for _ in 0..k {
        cur = kernel(&projective_cover(&cur)).0;
    }
    cur
}

/// `Ω^{-k} M`: iterated cokernels of injective envelopes.
pub fn cosyzygy(m: &Module, k: usize) -> Module {
    let mut cur = m.clone();
    for _ in 0..k {
        cur = cokernel(&injective_envelope(&cur)).0;
    }
    cur
}

/// Restriction of an element of `⊕_j P(v_j)` at vertex `w` to component `j`,
/// as an element of the algebra.
fn component_element(alg: &Algebra, vertices: &[usize], w: usize, x: &[u32], j: usize) -> Vec<u32> {
    let offset: usize = vertices[..j].iter().map(|&v| alg.paths_between(v, w).len()).sum();
    let mut out = vec![0; alg.dim()];
    for (i, &b) in alg.paths_between(vertices[j], w).iter().enumerate() {
        out[b] = x[offset + i];
    }
    out
}

/// `Tr M`: the cokernel of `Hom(P_0, A) -> Hom(P_1, A)` for a minimal
/// presentation `P_1 -> P_0 -> M`, a module over the opposite algebra.
pub fn transpose(m: &Module) -> Module {
    let alg = m.algebra();
    let op = alg.opposite();
    let f = m.field();
    let (cover, gens0) = projective_cover_with_generators(m);
    let v0: Vec<usize> = gens0.iter().map(|g| g.vertex).collect();
    let (omega, incl) = kernel(&cover);
    let gens1 = top_generators(&omega);
    let v1: Vec<usize> = gens1.iter().map(|g| g.vertex).collect();
    // Images of the P_1 generators inside P_0.
    let images: Vec<Vec<u32>> = gens1.iter().map(|g| incl.mat(g.vertex).mul_vec(&g.vector)).collect();
    let target_parts: Vec<Module> = v1.iter().map(|&w| Module::projective(&op, w)).collect();
    let target = direct_sum(&op, &target_parts);
    // Generator e_{v_j} of P^op(v_j) goes to (x_ij^op)_i in ⊕ P^op(w_i), at vertex v_j.
    let op_gens: Vec<Generator> = v0
        .iter()
        .enumerate()
        .map(|(j, &vj)| {
            let mut vector = Vec::with_capacity(target.dim_at(vj));
            for (i, &wi) in v1.iter().enumerate() {
                let x = component_element(alg, &v0, wi, &images[i], j);
                let mut xop = vec![0u32; op.dim()];
                for (b, &c) in x.iter().enumerate() {
                    if c != 0 {
                        for (k, y) in alg.to_opposite(b).into_iter().enumerate() {
                            xop[k] = f.add(xop[k], f.mul(c, y));
                        }
                    }
                }
                vector.extend(op.paths_between(wi, vj).iter().map(|&b| xop[b]));
            }
            Generator { vertex: vj, vector }
        })
        .collect();
    let map = map_from_generators(&target, &op_gens);
    cokernel(&map).0
}

/// Auslander-Reiten translate `τ M = D Tr M`.
pub fn tau(m: &Module) -> Module {
    transpose(m).dual().rebase(m.algebra())
}

/// `τ^- M = Tr D M`.
pub fn tau_inv(m: &Module) -> Module {
    transpose(&m.dual()).rebase(m.algebra())
}

/// `τ_d M = τ Ω^{d-1} M`.
pub fn tau_d(m: &Module, d: usize) -> Module {
    assert!(d >= 1);
    tau(&syzygy(m, d - 1))
}

/// `τ_d^- M = τ^- Ω^{-(d-1)} M`.
pub fn tau_d_inv(m: &Module, d: usize) -> Module {
    assert!(d >= 1);
    tau_inv(&cosyzygy(m, d - 1))
}

/// `dim Ext^i(M, N)`, via `Ext^i(M, N) = Ext^1(Ω^{i-1} M, N)` and the exact
/// sequence `0 -> Hom(K, N) -> Hom(P, N) -> Hom(ΩK, N) -> Ext^1(K, N) -> 0`.
pub fn ext_dim(i: usize, m: &Module, n: &Module) -> usize {
    if i == 0 {
        return hom_dim(m, n);
    }
    let k = syzygy(m, i - 1);
    let (cover, gens) = projective_cover_with_generators(&k);
    let omega = kernel(&cover).0;
    let hom_p: usize = gens.iter().map(|g| n.dim_at(g.vertex)).sum();
    hom_dim(&omega, n) + hom_dim(&k, n) - hom_p
}

/// `dim Hom(M, N)` modulo maps factoring through a projective.
pub fn stable_hom_dim(m: &Module, n: &Module) -> usize {
    let total = hom_dim(m, n);
    if total == 0 {
        return 0;
    }
    let cover = projective_cover(n);
    let through: Vec<ModMap> = hom_basis(m, cover.source())
        .expect("same algebra")
        .iter()
        .map(|h| cover.compose(h))
        .collect();
    total - span_rank(&through)
}

/// `dim Hom(M, N)` modulo maps factoring through an injective.
pub fn costable_hom_dim(m: &Module, n: &Module) -> usize {
    let total = hom_dim(m, n);
    if total == 0 {
        return 0;
    }
    let env = injective_envelope(m);
    let through: Vec<ModMap> = hom_basis(env.target(), n)
        .expect("same algebra")
        .iter()
        .map(|h| h.compose(&env))
        .collect();
    total - span_rank(&through)
}

/// Projective dimension, or `None` if it exceeds `cap`.
pub fn projective_dimension(m: &Module, cap: usize) -> Option<usize> {
    let mut cur = m.clone();
    for k in 0..=cap {
        if cur.is_zero() {
            return Some(k.saturating_sub(1));
        }
        if is_projective(&cur) {
            return Some(k);
        }
        cur = syzygy(&cur, 1);
    }
    None
}

pub fn injective_dimension(m: &Module, cap: usize) -> Option<usize> {
    projective_dimension(&m.dual(), cap)
}

/// Maximum projective dimension of the simples, or `None` past `cap`.
pub fn global_dimension(alg: &Arc<Algebra>, cap: usize) -> Option<usize> {
    let mut best = 0;
    for v in 0..alg.num_vertices() {
        best = best.max(projective_dimension(&Module::simple(alg, v), cap)?);
    }
    Some(best)
}

/// `M` with its projective summands removed.
pub fn strip_projectives(m: &Module) -> Module {
    strip_summands(m, is_projective)
}

pub fn strip_injectives(m: &Module) -> Module {
    strip_summands(m, is_injective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::decomp::is_isomorphic;
    use crate::modcat::tests::lambda3;

    #[test]
    fn covers_and_envelopes() {
        let a = lambda3();
        let s1 = Module::simple(&a, 0);
        let c = projective_cover(&s1);
        assert_eq!(c.source().dims(), &[1, 1, 0]);
        assert!(c.is_surjective());
        let s3 = Module::simple(&a, 2);
        let e = injective_envelope(&s3);
        assert_eq!(e.target().dims(), &[0, 1, 1]);
        assert!(e.is_injective());
        let p1 = Module::projective(&a, 0);
        assert!(projective_cover(&p1).is_iso());
        assert!(is_projective(&p1) && !is_projective(&s1));
        assert!(is_injective(&s1) && is_injective(&p1));
    }

    #[test]
    fn syzygies_of_s1() {
        let a = lambda3();
        let s1 = Module::simple(&a, 0);
        assert!(is_isomorphic(&syzygy(&s1, 1), &Module::simple(&a, 1)));
        assert!(is_isomorphic(&syzygy(&s1, 2), &Module::simple(&a, 2)));
        assert!(syzygy(&s1, 3).is_zero());
        assert!(syzygy(&Module::projective(&a, 1), 1).is_zero());
        assert!(is_isomorphic(&cosyzygy(&Module::simple(&a, 2), 1), &Module::simple(&a, 1)));
    }

    #[test]
    fn transpose_and_translates() {
        let a = lambda3();
        let s2 = Module::simple(&a, 1);
        assert_eq!(transpose(&s2).dims(), &[0, 0, 1]);
        assert!(transpose(&Module::projective(&a, 0)).is_zero());
        let s1 = Module::simple(&a, 0);
        let s3 = Module::simple(&a, 2);
        assert!(is_isomorphic(&tau(&s2), &s3));
        assert!(is_isomorphic(&tau_d(&s1, 2), &s3));
        assert!(is_isomorphic(&tau_d_inv(&s3, 2), &s1));
        assert!(tau_d(&Module::projective(&a, 0), 2).is_zero());
        assert!(tau_d(&Module::zero(&a), 2).is_zero());
    }

    #[test]
    fn ext_and_stable_hom() {
        let a = lambda3();
        let s1 = Module::simple(&a, 0);
        let s2 = Module::simple(&a, 1);
        let s3 = Module::simple(&a, 2);
        assert_eq!(ext_dim(1, &s1, &s2), 1);
        assert_eq!(ext_dim(2, &s1, &s3), 1);
        assert_eq!(ext_dim(1, &Module::projective(&a, 0), &s2), 0);
        assert_eq!(ext_dim(0, &s1, &s1), 1);
        assert_eq!(stable_hom_dim(&s2, &s2), 1);
        assert_eq!(stable_hom_dim(&s1, &s1), 1);
        assert_eq!(stable_hom_dim(&Module::projective(&a, 1), &s2), 0);
        assert_eq!(costable_hom_dim(&s3, &s3), 1);
    }

    #[test]
    fn global_dimensions() {
        let a = lambda3();
        assert_eq!(global_dimension(&a, 10), Some(2));
        let ss = Algebra::from_text("field 2\nvertices 1 2 3\n").unwrap();
        assert_eq!(global_dimension(&ss, 10), Some(0));
        let a2 = Algebra::from_text("field 2\nvertices 1 2\narrow a: 1 -> 2\n").unwrap();
        assert_eq!(global_dimension(&a2, 10), Some(1));
        let lp = Algebra::from_text("field 2\nvertices 1\narrow x: 1 -> 1\nrelation x*x\n").unwrap();
        assert_eq!(global_dimension(&lp, 5), None);
    }
}
