use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arknit::IndecIndex;
use crate::error::{Error, Result};
use crate::modcat::{cokernel, direct_sum, ext_dim, is_injective, is_projective, kernel, ModMap, Module};

use super::approx::{left_approximation, right_approximation};
use super::{lift_through, ExactSeq, Subcat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One failure of the d-cluster-tilting conditions, by host index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CtViolation {
    /// `Ext^degree(left, right) != 0` with both in `C`.
    Ext { degree: usize, left: usize, right: usize },
    /// `x` is outside `C` but `Ext^i(C, x) = 0` for `0 < i < d`.
    RightOrthogonal { x: usize },
    /// `x` is outside `C` but `Ext^i(x, C) = 0` for `0 < i < d`.
    LeftOrthogonal { x: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct CtReport {
    pub holds: bool,
    pub violations: Vec<CtViolation>,
}

/// Checks `C = {X : Ext^i(C,X) = 0, 0<i<d} = {X : Ext^i(X,C) = 0, 0<i<d}`
/// over every indecomposable of the host.
/// All `d`-cluster-tilting subcategories of the host. Projectives and
/// injectives always belong, so only the remaining indecomposables are
/// scanned.
pub fn find_cluster_tilting(host: &Arc<IndecIndex>, d: usize, budget: usize) -> Result<Vec<Subcat>> {
    if !host.complete {
        return Err(Error::IncompleteHost);
    }
    let (forced, free): (Vec<usize>, Vec<usize>) =
        (0..host.len()).partition(|&i| is_projective(&host.modules[i]) || is_injective(&host.modules[i]));
    if free.len() > budget {
        return Err(Error::TooLarge { n: free.len(), budget });
    }
    let found = (0u64..1 << free.len())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&mask| {
            let extra = (0..free.len()).filter(|&i| mask >> i & 1 == 1).map(|i| free[i]);
            let c = Subcat::new(host, forced.iter().copied().chain(extra));
            Ok(is_d_cluster_tilting(&c, d)?.holds.then_some(c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

pub fn is_d_cluster_tilting(c: &Subcat, d: usize) -> Result<CtReport> {
    if !c.host.complete {
        return Err(Error::IncompleteHost);
    }
    let host = &c.host;
    let mut violations = Vec::new();
    for (x, xm) in host.modules.iter().enumerate() {
        let mut into_x = false;
        let mut from_x = false;
        for (m, mm) in c.modules() {
            for i in 1..d {
                if ext_dim(i, mm, xm) != 0 {
                    into_x = true;
                    if c.contains_index(x) {
                        violations.push(CtViolation::Ext { degree: i, left: m, right: x });
                    }
                }
                if ext_dim(i, xm, mm) != 0 {
                    from_x = true;
                }
            }
        }
        if !c.contains_index(x) {
            if !into_x {
                violations.push(CtViolation::RightOrthogonal { x });
            }
            if !from_x {
                violations.push(CtViolation::LeftOrthogonal { x });
            }
        }
    }
    Ok(CtReport {
        holds: violations.is_empty(),
        violations,
    })
}

/// `0 -> C_{d-1} -> ... -> C_0 -> M -> 0` (right) or
/// `0 -> M -> C^0 -> ... -> C^{d-1} -> 0` (left) from minimal
/// approximations, checked to stay exact under `Hom(C', -)` (resp.
/// `Hom(-, C')`) for every member `C'`.
pub fn c_resolution(c: &Subcat, m: &Module, side: Side, d: usize) -> Result<ExactSeq> {
    if d == 0 {
        return Err(Error::FailedResolution("d must be positive".into()));
    }
    if !m.algebra().same_as(c.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let seq = match side {
        Side::Right => right_resolution(c, m, d)?,
        Side::Left => left_resolution(c, m, d)?,
    };
    if let Some(&i) = seq.defects().first() {
        return Err(Error::FailedResolution(format!("resolution is not exact at term {i}")));
    }
    for (j, x) in c.modules() {
        let bad = match side {
            Side::Right => seq.hom_from_defects(x, true),
            Side::Left => seq.hom_into_defects(x, true),
        };
        if let Some(&i) = bad.first() {
            return Err(Error::FailedResolution(format!(
                "Hom against member {j} is not exact at term {i}"
            )));
        }
    }
    Ok(seq)
}

fn right_resolution(c: &Subcat, m: &Module, d: usize) -> Result<ExactSeq> {
    // maps[0] : C_0 -> M, maps[i] : C_i -> C_{i-1}
    let mut maps: Vec<ModMap> = Vec::new();
    let mut k = m.clone();
    let mut incl = ModMap::identity(m);
    for _ in 0..d - 1 {
        let a = right_approximation(c, &k)?;
        if !a.map.is_surjective() {
            return Err(Error::FailedResolution("right approximation is not onto".into()));
        }
        maps.push(incl.compose(&a.map));
        let (next, next_incl) = kernel(&a.map);
        k = next;
        incl = next_incl;
    }
    if !c.contains(&k)? {
        return Err(Error::FailedResolution(format!("kernel {:?} is not in C", k.dims())));
    }
    maps.push(incl);
    maps.reverse();
    ExactSeq::from_maps(maps)
}

fn left_resolution(c: &Subcat, m: &Module, d: usize) -> Result<ExactSeq> {
    let mut maps: Vec<ModMap> = Vec::new();
    let mut k = m.clone();
    let mut proj = ModMap::identity(m);
    for _ in 0..d - 1 {
        let a = left_approximation(c, &k)?;
        if !a.map.is_injective() {
            return Err(Error::FailedResolution("left approximation is not injective".into()));
        }
        maps.push(a.map.compose(&proj));
        let (next, next_proj) = cokernel(&a.map);
        k = next;
        proj = next_proj;
    }
    if !c.contains(&k)? {
        return Err(Error::FailedResolution(format!("cokernel {:?} is not in C", k.dims())));
    }
    maps.push(proj);
    ExactSeq::from_maps(maps)
}

/// The d-exact sequences `0 -> C_{d-1} -> ... -> C_0 -> C^0 -> ... -> C^{d-1} -> 0`
/// spliced from the right and left C-resolutions of each host indecomposable
/// outside `C`.
pub fn spliced_sequences(c: &Subcat, d: usize) -> Result<Vec<ExactSeq>> {
    let mut out = Vec::new();
    for (i, m) in c.host.modules.iter().enumerate() {
        if c.contains_index(i) {
            continue;
        }
        let right = c_resolution(c, m, Side::Right, d)?;
        let left = c_resolution(c, m, Side::Left, d)?;
        let mut maps = right.maps[..right.maps.len() - 1].to_vec();
        maps.push(left.maps[0].compose(right.maps.last().unwrap()));
        maps.extend_from_slice(&left.maps[1..]);
        out.push(ExactSeq::exact(maps)?);
    }
    Ok(out)
}

/// Output of `d_pullback`: the lifted row `Y_0 -> X_1 -> ... -> X_{d+1}`,
/// vertical maps `X_k -> Y_k` (identity on `Y_0`), and the long sequence
/// `X_1 -> X_2 ⊕ Y_1 -> ... -> X_{d+1} ⊕ Y_d -> Y_{d+1}`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub lifted: ExactSeq,
    pub vertical: Vec<ModMap>,
    pub long: ExactSeq,
}

/// Pulls a d-exact sequence `Y_0 -> ... -> Y_{d+1}` back along
/// `f : X_{d+1} -> Y_{d+1}`, taking `X_k` as a right C-approximation of the
/// kernel of the cone differential out of `X_{k+1} ⊕ Y_k`, and `X_1` as
/// that kernel itself.
pub fn d_pullback(c: &Subcat, seq: &ExactSeq, f: &ModMap) -> Result<Pullback> {
    if seq.len() < 3 {
        return Err(Error::NotTwoExact("need at least three terms".into()));
    }
    if !seq.is_exact() {
        return Err(Error::NotTwoExact("the row is not exact".into()));
    }
    if !seq.interior_in(c)? {
        return Err(Error::NotTwoExact("interior terms must lie in C".into()));
    }
    if f.target() != seq.last() {
        return Err(Error::DimensionMismatch("f must land in the last term".into()));
    }
    let alg = seq.algebra().clone();
    let d = seq.len() - 2;
    let ys = &seq.modules;
    let y = &seq.maps;
    // xs[k], phis[k] for k = 1..=d+1; xmaps[k] : X_k -> X_{k+1}
    let mut xs: Vec<Option<Module>> = vec![None; d + 2];
    let mut phis: Vec<Option<ModMap>> = vec![None; d + 2];
    let mut xmaps: Vec<Option<ModMap>> = vec![None; d + 2];
    let mut diffs: Vec<ModMap> = Vec::new();
    xs[d + 1] = Some(f.source().clone());
    phis[d + 1] = Some(f.clone());
    let mut first_incl = None;
    for k in (1..=d).rev() {
        let x_next = xs[k + 1].clone().unwrap();
        let phi_next = phis[k + 1].clone().unwrap();
        let src = [x_next.clone(), ys[k].clone()];
        let diff = if k == d {
            ModMap::from_blocks(&alg, &src, &ys[d + 1..=d + 1], |_, j| {
                Some(if j == 0 { phi_next.clone() } else { y[d].neg() })
            })
            .with_ends(&direct_sum(&alg, &src), &ys[d + 1])
        } else {
            let x_after = xs[k + 2].clone().unwrap();
            let xmap = xmaps[k + 1].clone().unwrap();
            ModMap::from_blocks(&alg, &src, &[x_after, ys[k + 1].clone()], |i, j| match (i, j) {
                (0, 0) => Some(xmap.clone()),
                (1, 0) => Some(phi_next.clone()),
                (1, 1) => Some(y[k].neg()),
                _ => None,
            })
        };
        let (kmod, kincl) = kernel(&diff);
        diffs.push(diff);
        let to_sum = if k >= 2 {
            let a = right_approximation(c, &kmod)?;
            if !a.map.is_surjective() {
                return Err(Error::FailedResolution("approximation of the pullback is not onto".into()));
            }
            kincl.compose(&a.map)
        } else {
            kincl.clone()
        };
        let xk = to_sum.source().clone();
        xmaps[k] = Some(ModMap::projection(&alg, &src, 0).compose(&to_sum));
        phis[k] = Some(ModMap::projection(&alg, &src, 1).compose(&to_sum));
        xs[k] = Some(xk);
        if k == 1 {
            first_incl = Some(kincl);
        }
    }
    let first_incl = first_incl.unwrap();
    // Y_0 -> X_1 is y -> (0, y_0 y) through the kernel inclusion.
    let src1 = [xs[2].clone().unwrap(), ys[1].clone()];
    let into_sum = ModMap::from_blocks(&alg, &ys[0..1], &src1, |i, _| (i == 1).then(|| y[0].clone()))
        .with_ends(&ys[0], first_incl.target());
    let u = lift_through(&into_sum, &first_incl)
        .ok_or_else(|| Error::FailedResolution("Y_0 does not map into the d-kernel".into()))?;

    let mut row = vec![u];
    row.extend((1..=d).map(|k| xmaps[k].clone().unwrap()));
    let lifted = ExactSeq::from_maps(row)?;
    let mut vertical = vec![ModMap::identity(&ys[0])];
    vertical.extend((1..=d + 1).map(|k| phis[k].clone().unwrap()));

    for k in 0..=d {
        let left = vertical[k + 1].compose(&lifted.maps[k]);
        let right = y[k].compose(&vertical[k]);
        if !left.add(&right.neg()).is_zero() {
            return Err(Error::FailedResolution(format!("square {k} does not commute")));
        }
    }
    if !lifted.is_exact() {
        return Err(Error::FailedResolution("lifted row is not exact".into()));
    }
    let mut long_maps = vec![first_incl];
    diffs.reverse();
    long_maps.extend(diffs);
    let long = ExactSeq::from_maps(long_maps)?;
    if !long.is_exact() {
        return Err(Error::FailedResolution("induced long sequence is not exact".into()));
    }
    Ok(Pullback { lifted, vertical, long })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arknit::{knit_indecomposables, IndecIndex, KnitLimits};
    use crate::modcat::tests::lambda3;
    use crate::modcat::{hom_basis, is_isomorphic};

    fn host() -> Arc<IndecIndex> {
        Arc::new(knit_indecomposables(&lambda3(), KnitLimits::default()).unwrap())
    }

    fn find(h: &IndecIndex, dims: &[usize]) -> usize {
        h.modules.iter().position(|m| m.dims() == dims).unwrap()
    }

    fn s1(h: &IndecIndex) -> Module {
        h.modules[find(h, &[1, 0, 0])].clone()
    }

    fn star(h: &Arc<IndecIndex>) -> Subcat {
        Subcat::new(h, [[1, 1, 0], [0, 1, 1], [0, 0, 1], [1, 0, 0]].map(|d| find(h, &d)))
    }

    #[test]
    fn cluster_tilting_examples() {
        let h = host();
        let found = find_cluster_tilting(&h, 2, 20).unwrap();
        assert_eq!(found.iter().map(|c| c.members.clone()).collect::<Vec<_>>(), vec![star(&h).members]);
        assert_eq!(find_cluster_tilting(&h, 1, 20).unwrap().len(), 1);
        assert!(matches!(find_cluster_tilting(&h, 2, 0), Err(Error::TooLarge { n: 1, budget: 0 })));
        assert!(is_d_cluster_tilting(&Subcat::all(&h), 1).unwrap().holds);
        assert!(is_d_cluster_tilting(&star(&h), 2).unwrap().holds);
        let all = is_d_cluster_tilting(&Subcat::all(&h), 2).unwrap();
        assert!(!all.holds);
        let (s1, s2) = (find(&h, &[1, 0, 0]), find(&h, &[0, 1, 0]));
        assert!(all.violations.contains(&CtViolation::Ext { degree: 1, left: s1, right: s2 }));
        for drop in star(&h).members {
            let mut c = star(&h);
            c.members.remove(&drop);
            assert!(!is_d_cluster_tilting(&c, 2).unwrap().holds);
        }
    }

    #[test]
    fn resolutions_of_s2() {
        let h = host();
        let c = star(&h);
        let s2 = h.modules[find(&h, &[0, 1, 0])].clone();
        let r = c_resolution(&c, &s2, Side::Right, 2).unwrap();
        let dims: Vec<&[usize]> = r.modules.iter().map(|m| m.dims()).collect();
        assert_eq!(dims, [&[0, 0, 1][..], &[0, 1, 1], &[0, 1, 0]]);
        let l = c_resolution(&c, &s2, Side::Left, 2).unwrap();
        let dims: Vec<&[usize]> = l.modules.iter().map(|m| m.dims()).collect();
        assert_eq!(dims, [&[0, 1, 0][..], &[1, 1, 0], &[1, 0, 0]]);
        let p1 = h.modules[find(&h, &[1, 1, 0])].clone();
        let r = c_resolution(&c, &p1, Side::Right, 2).unwrap();
        assert!(r.modules[0].is_zero() && r.maps[1].is_iso());
        for m in &h.modules {
            for side in [Side::Left, Side::Right] {
                assert_eq!(c_resolution(&c, m, side, 2).unwrap().len(), 3);
            }
        }
    }

    #[test]
    fn pullback_along_identity_and_zero() {
        let h = host();
        let c = star(&h);
        let s2 = h.modules[find(&h, &[0, 1, 0])].clone();
        let right = c_resolution(&c, &s2, Side::Right, 2).unwrap();
        let left = c_resolution(&c, &s2, Side::Left, 2).unwrap();
        // 0 -> S3 -> P2 -> P1 -> S1 -> 0
        let seq = ExactSeq::exact(vec![
            right.maps[0].clone(),
            left.maps[0].compose(&right.maps[1]),
            left.maps[1].clone(),
        ])
        .unwrap();
        let id = ModMap::identity(seq.last());
        let pb = d_pullback(&c, &seq, &id).unwrap();
        for (a, b) in pb.lifted.modules.iter().zip(&seq.modules) {
            assert!(is_isomorphic(a, b));
        }
        assert!(pb.vertical.iter().all(ModMap::is_iso));
        let zero = ModMap::zero(seq.last(), seq.last());
        let pb = d_pullback(&c, &seq, &zero).unwrap();
        // X_2 = P2 ⊕ S1: the d-kernel term next to a split copy of S1.
        assert!(pb.lifted.is_exact() && pb.vertical[3].is_zero());
        assert!(is_isomorphic(&pb.lifted.modules[2], &direct_sum(&h.algebra, &[seq.modules[1].clone(), s1(&h)])));
        let s1 = seq.last();
        for (_, t) in c.modules() {
            for g in hom_basis(t, s1).unwrap() {
                let pb = d_pullback(&c, &seq, &g).unwrap();
                assert!(pb.long.is_exact());
            }
        }
    }
}
