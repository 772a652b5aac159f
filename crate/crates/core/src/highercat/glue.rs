use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modcat::{direct_sum, is_isomorphic, kernel, ModMap, Module};

use super::approx::right_approximation;
use super::{lift_through, map_to_json, object_to_json, ExactSeq, Subcat};

/// `P ≅ P' ⊕ M'`: the complement `P'` with its host summands.
#[derive(Clone, Debug)]
pub struct CompactDiagram {
    pub p_prime: Module,
    pub p_prime_summands: Vec<usize>,
}

/// The grid gluing `0 -> L -> M -> N -> X -> 0` (A) and
/// `0 -> L' -> M' -> N' -> X -> 0` (B) along `X`.
///
/// `pb = N ×_X N'`, `P -> pb` is a minimal right C-approximation with kernel
/// `Q`, and `R`, `S` are the pullbacks making
/// `0 -> L' -> R -> P -> N -> 0`, `0 -> L -> S -> P -> N' -> 0`,
/// `0 -> Q -> R -> M' -> 0` and `0 -> Q -> S -> M -> 0` exact.
#[derive(Clone, Debug)]
pub struct GlueDiagram {
    pub seq_a: ExactSeq,
    pub seq_b: ExactSeq,
    pub pullback: Module,
    pub p: Module,
    pub q: Module,
    pub r: Module,
    pub s: Module,
    pub p_to_n: ModMap,
    pub p_to_n_prime: ModMap,
    pub q_to_p: ModMap,
    pub l_prime_to_r: ModMap,
    pub q_to_r: ModMap,
    pub r_to_p: ModMap,
    pub r_to_m_prime: ModMap,
    pub l_to_s: ModMap,
    pub q_to_s: ModMap,
    pub s_to_p: ModMap,
    pub s_to_m: ModMap,
    pub p_summands: Vec<usize>,
    pub q_summands: Vec<usize>,
    pub compact: Option<CompactDiagram>,
}

pub fn glue_two_resolutions(c: &Subcat, seq_a: &ExactSeq, seq_b: &ExactSeq) -> Result<GlueDiagram> {
    if !seq_a.algebra().same_as(c.algebra()) || !seq_b.algebra().same_as(c.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    for (name, seq) in [("first", seq_a), ("second", seq_b)] {
        if !seq.is_d_exact(2) {
            return Err(Error::NotTwoExact(format!("{name} sequence is not 2-exact")));
        }
        for m in &seq.modules {
            if !c.contains(m)? {
                return Err(Error::NotTwoExact(format!("{name} sequence leaves C at {:?}", m.dims())));
            }
        }
    }
    if seq_a.last() != seq_b.last() {
        return Err(Error::NotTwoExact("sequences end at different modules".into()));
    }
    let alg = c.algebra().clone();
    let [a1, a2, a3] = [0, 1, 2].map(|i| seq_a.maps[i].clone());
    let [b1, b2, b3] = [0, 1, 2].map(|i| seq_b.maps[i].clone());
    let (m, n) = (&seq_a.modules[1], &seq_a.modules[2]);
    let (mp, np) = (&seq_b.modules[1], &seq_b.modules[2]);
    let fail = |what: &str| Error::FailedResolution(format!("gluing: {what}"));

    let nn = [n.clone(), np.clone()];
    let diff = ModMap::from_blocks(&alg, &nn, &seq_a.modules[3..4], |_, j| {
        Some(if j == 0 { a3.clone() } else { b3.neg() })
    })
    .with_ends(&direct_sum(&alg, &nn), seq_a.last());
    let (pb, pb_incl) = kernel(&diff);
    let approx = right_approximation(c, &pb)?;
    if !approx.map.is_surjective() {
        return Err(fail("approximation of the pullback is not onto"));
    }
    let p = approx.object.clone();
    let to_nn = pb_incl.compose(&approx.map);
    let p_to_n = ModMap::projection(&alg, &nn, 0).compose(&to_nn);
    let p_to_n_prime = ModMap::projection(&alg, &nn, 1).compose(&to_nn);
    let (q, q_to_p) = kernel(&approx.map);

    // R = {(p, m') : α p = 0, β p = b2 m'}
    let pm = [p.clone(), mp.clone()];
    let r_diff = ModMap::from_blocks(&alg, &pm, &nn, |i, j| match (i, j) {
        (0, 0) => Some(p_to_n.clone()),
        (1, 0) => Some(p_to_n_prime.clone()),
        (1, 1) => Some(b2.neg()),
        _ => None,
    });
    let (r, r_incl) = kernel(&r_diff);
    let r_to_p = ModMap::projection(&alg, &pm, 0).compose(&r_incl);
    let r_to_m_prime = ModMap::projection(&alg, &pm, 1).compose(&r_incl);
    let l_prime_to_r = lift_through(&ModMap::injection(&alg, &pm, 1).compose(&b1), &r_incl)
        .ok_or_else(|| fail("L' does not map into R"))?;
    let q_to_r = lift_through(&ModMap::injection(&alg, &pm, 0).compose(&q_to_p), &r_incl)
        .ok_or_else(|| fail("Q does not map into R"))?;

    // S = {(p, m) : α p = a2 m, β p = 0}
    let pm2 = [p.clone(), m.clone()];
    let s_diff = ModMap::from_blocks(&alg, &pm2, &nn, |i, j| match (i, j) {
        (0, 0) => Some(p_to_n.clone()),
        (0, 1) => Some(a2.neg()),
        (1, 0) => Some(p_to_n_prime.clone()),
        _ => None,
    });
    let (s, s_incl) = kernel(&s_diff);
    let s_to_p = ModMap::projection(&alg, &pm2, 0).compose(&s_incl);
    let s_to_m = ModMap::projection(&alg, &pm2, 1).compose(&s_incl);
    let l_to_s = lift_through(&ModMap::injection(&alg, &pm2, 1).compose(&a1), &s_incl)
        .ok_or_else(|| fail("L does not map into S"))?;
    let q_to_s = lift_through(&ModMap::injection(&alg, &pm2, 0).compose(&q_to_p), &s_incl)
        .ok_or_else(|| fail("Q does not map into S"))?;

    let rows = [
        ("row L'-R-P-N", vec![l_prime_to_r.clone(), r_to_p.clone(), p_to_n.clone()]),
        ("column L-S-P-N'", vec![l_to_s.clone(), s_to_p.clone(), p_to_n_prime.clone()]),
        ("column Q-R-M'", vec![q_to_r.clone(), r_to_m_prime.clone()]),
        ("row Q-S-M", vec![q_to_s.clone(), s_to_m.clone()]),
    ];
    for (name, maps) in rows {
        if !ExactSeq::from_maps(maps)?.is_exact() {
            return Err(fail(&format!("{name} is not exact")));
        }
    }
    let squares = [
        a3.compose(&p_to_n).add(&b3.compose(&p_to_n_prime).neg()),
        p_to_n.compose(&s_to_p).add(&a2.compose(&s_to_m).neg()),
        p_to_n_prime.compose(&r_to_p).add(&b2.compose(&r_to_m_prime).neg()),
        r_to_p.compose(&q_to_r).add(&q_to_p.neg()),
        s_to_p.compose(&q_to_s).add(&q_to_p.neg()),
    ];
    if squares.iter().any(|d| !d.is_zero()) {
        return Err(fail("a square does not commute"));
    }
    if !is_isomorphic(&r, &direct_sum(&alg, &[mp.clone(), q.clone()])) {
        return Err(fail("R is not M' ⊕ Q"));
    }
    if !is_isomorphic(&s, &direct_sum(&alg, &[m.clone(), q.clone()])) {
        return Err(fail("S is not M ⊕ Q"));
    }
    if !c.contains(&q)? {
        return Err(fail("Q is not in C"));
    }
    let p_summands = approx.summands.clone();
    let q_summands = expand(&c.host.summand_indices(&q)?);
    if p_summands.iter().any(|i| q_summands.contains(i)) {
        return Err(fail("P and Q share a summand"));
    }
    let compact = complement(c, &p_summands, &expand(&c.host.summand_indices(mp)?));
    Ok(GlueDiagram {
        seq_a: seq_a.clone(),
        seq_b: seq_b.clone(),
        pullback: pb,
        p,
        q,
        r,
        s,
        p_to_n,
        p_to_n_prime,
        q_to_p,
        l_prime_to_r,
        q_to_r,
        r_to_p,
        r_to_m_prime,
        l_to_s,
        q_to_s,
        s_to_p,
        s_to_m,
        p_summands,
        q_summands,
        compact,
    })
}

fn expand(mults: &[(usize, usize)]) -> Vec<usize> {
    mults
        .iter()
        .flat_map(|&(i, k)| std::iter::repeat(i).take(k))
        .collect()
}

/// `P'` with `P ≅ P' ⊕ M'`, when the summands of `M'` occur in `P`.
fn complement(c: &Subcat, p: &[usize], mp: &[usize]) -> Option<CompactDiagram> {
    let mut left: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in p {
        *left.entry(i).or_default() += 1;
    }
    for i in mp {
        let k = left.get_mut(i)?;
        if *k == 0 {
            return None;
        }
        *k -= 1;
    }
    let summands = expand(&left.into_iter().collect::<Vec<_>>());
    let parts: Vec<Module> = summands.iter().map(|&i| c.module(i).clone()).collect();
    Some(CompactDiagram {
        p_prime: direct_sum(c.algebra(), &parts),
        p_prime_summands: summands,
    })
}

impl GlueDiagram {
    pub fn to_json(&self, host: &crate::arknit::IndecIndex) -> Value {
        let obj = |m: &Module| object_to_json(host, m);
        json!({
            "seq_a": self.seq_a.to_json(),
            "seq_b": self.seq_b.to_json(),
            "objects": {
                "pullback": obj(&self.pullback),
                "P": obj(&self.p),
                "Q": obj(&self.q),
                "R": obj(&self.r),
                "S": obj(&self.s),
            },
            "maps": {
                "P->N": map_to_json(&self.p_to_n),
                "P->N'": map_to_json(&self.p_to_n_prime),
                "Q->P": map_to_json(&self.q_to_p),
                "L'->R": map_to_json(&self.l_prime_to_r),
                "Q->R": map_to_json(&self.q_to_r),
                "R->P": map_to_json(&self.r_to_p),
                "R->M'": map_to_json(&self.r_to_m_prime),
                "L->S": map_to_json(&self.l_to_s),
                "Q->S": map_to_json(&self.q_to_s),
                "S->P": map_to_json(&self.s_to_p),
                "S->M": map_to_json(&self.s_to_m),
            },
            "P_summands": self.p_summands,
            "Q_summands": self.q_summands,
            "compact": self.compact.as_ref().map(|c| json!({
                "P'": obj(&c.p_prime),
                "P'_summands": c.p_prime_summands,
            })),
        })
    }
}
