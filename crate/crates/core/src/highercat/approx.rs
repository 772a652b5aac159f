use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::Result;
use crate::exactlin::Mat;
use crate::modcat::{direct_sum, hom_basis, radical, ModMap, Module};

use super::Subcat;

/// An approximation `object -> M` (right) or `M -> object` (left), with the
/// host indices of the summands of `object` in order.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub object: Module,
    pub map: ModMap,
    pub summands: Vec<usize>,
}

/// `⊕_X X^{dim Hom(X,M)} -> M` with the evaluation map.
pub fn right_full_approximation(c: &Subcat, m: &Module) -> Result<Approximation> {
    let mut maps = Vec::new();
    let mut summands = Vec::new();
    for (i, x) in c.modules() {
        for h in hom_basis(x, m)? {
            maps.push(h);
            summands.push(i);
        }
    }
    let parts = summands.iter().map(|&i| c.module(i).clone()).collect();
    Ok(assemble_right(c.algebra(), m, maps, summands, parts))
}

/// `M -> ⊕_X X^{dim Hom(M,X)}` with the coevaluation map.
pub fn left_full_approximation(c: &Subcat, m: &Module) -> Result<Approximation> {
    let mut maps = Vec::new();
    let mut summands = Vec::new();
    for (i, x) in c.modules() {
        for h in hom_basis(m, x)? {
            maps.push(h);
            summands.push(i);
        }
    }
    let parts = summands.iter().map(|&i| c.module(i).clone()).collect();
    Ok(assemble_left(c.algebra(), m, maps, summands, parts))
}

/// Minimal right approximation: for each member `X`, maps `X -> M` whose
/// classes span `Hom(X,M)` modulo the maps factoring through radical maps
/// into `C`, chosen one `End(X)`-orbit at a time.
pub fn right_approximation(c: &Subcat, m: &Module) -> Result<Approximation> {
    let members: Vec<(usize, &Module)> = c.modules().collect();
    minimal_right(c.algebra(), &members, m)
}

/// Minimal left approximation, dual to `right_approximation`.
pub fn left_approximation(c: &Subcat, m: &Module) -> Result<Approximation> {
    let members: Vec<(usize, &Module)> = c.modules().collect();
    minimal_left(c.algebra(), &members, m)
}

/// Minimal right `add(⊕ parts)`-approximation for pairwise non-isomorphic
/// indecomposable `parts`; summands are numbered by position in `parts`.
pub fn right_approximation_by(parts: &[Module], m: &Module) -> Result<Approximation> {
    let members: Vec<(usize, &Module)> = parts.iter().enumerate().collect();
    minimal_right(m.algebra(), &members, m)
}

/// Minimal left `add(⊕ parts)`-approximation, as `right_approximation_by`.
pub fn left_approximation_by(parts: &[Module], m: &Module) -> Result<Approximation> {
    let members: Vec<(usize, &Module)> = parts.iter().enumerate().collect();
    minimal_left(m.algebra(), &members, m)
}

fn minimal_right(alg: &Arc<Algebra>, members: &[(usize, &Module)], m: &Module) -> Result<Approximation> {
    let mut maps = Vec::new();
    let mut summands = Vec::new();
    let mut parts = Vec::new();
    for &(i, x) in members {
        let homs = hom_basis(x, m)?;
        if homs.is_empty() {
            continue;
        }
        let mut span: Vec<ModMap> = Vec::new();
        for &(j, y) in members {
            let radical_maps = if i == j { radical_endomorphisms(x)? } else { hom_basis(x, y)? };
            if radical_maps.is_empty() {
                continue;
            }
            for h in hom_basis(y, m)? {
                span.extend(radical_maps.iter().map(|r| h.compose(r)));
            }
        }
        let ends = hom_basis(x, x)?;
        pick_generators(&homs, span, |g| ends.iter().map(|e| g.compose(e)).collect(), |g| {
            maps.push(g.clone());
            summands.push(i);
            parts.push(x.clone());
        });
    }
    Ok(assemble_right(alg, m, maps, summands, parts))
}

fn minimal_left(alg: &Arc<Algebra>, members: &[(usize, &Module)], m: &Module) -> Result<Approximation> {
    let mut maps = Vec::new();
    let mut summands = Vec::new();
    let mut parts = Vec::new();
    for &(i, x) in members {
        let homs = hom_basis(m, x)?;
        if homs.is_empty() {
            continue;
        }
        let mut span: Vec<ModMap> = Vec::new();
        for &(j, y) in members {
            let radical_maps = if i == j { radical_endomorphisms(x)? } else { hom_basis(y, x)? };
            if radical_maps.is_empty() {
                continue;
            }
            for h in hom_basis(m, y)? {
                span.extend(radical_maps.iter().map(|r| r.compose(&h)));
            }
        }
        let ends = hom_basis(x, x)?;
        pick_generators(&homs, span, |g| ends.iter().map(|e| e.compose(g)).collect(), |g| {
            maps.push(g.clone());
            summands.push(i);
            parts.push(x.clone());
        });
    }
    Ok(assemble_left(alg, m, maps, summands, parts))
}

fn radical_endomorphisms(x: &Module) -> Result<Vec<ModMap>> {
    let ends = hom_basis(x, x)?;
    let totals: Vec<Mat> = ends.iter().map(ModMap::total).collect();
    Ok(radical(x.field(), &totals)
        .iter()
        .map(|c| {
            let terms: Vec<(u32, &ModMap)> = c.iter().copied().zip(&ends).collect();
            ModMap::combination(x, x, &terms)
        })
        .collect())
}

/// Greedily extends `span` by orbits `orbit(g)` of basis maps `g` until it
/// covers `homs`, reporting each chosen `g`.
fn pick_generators(
    homs: &[ModMap],
    mut span: Vec<ModMap>,
    orbit: impl Fn(&ModMap) -> Vec<ModMap>,
    mut choose: impl FnMut(&ModMap),
) {
    let field = homs[0].source().field();
    let len = homs[0].flatten().len();
    let mut cols: Vec<Vec<u32>> = span.drain(..).map(|g| g.flatten()).collect();
    let mut rank = Mat::from_columns(field, len, &cols).rank();
    for g in homs {
        cols.push(g.flatten());
        let r = Mat::from_columns(field, len, &cols).rank();
        cols.pop();
        if r == rank {
            continue;
        }
        choose(g);
        cols.extend(orbit(g).iter().map(ModMap::flatten));
        rank = Mat::from_columns(field, len, &cols).rank();
    }
}

fn assemble_right(
    alg: &Arc<Algebra>,
    m: &Module,
    maps: Vec<ModMap>,
    summands: Vec<usize>,
    parts: Vec<Module>,
) -> Approximation {
    let object = direct_sum(alg, &parts);
    let map = if maps.is_empty() {
        ModMap::zero(&object, m)
    } else {
        ModMap::row(alg, &maps, m)
    };
    Approximation { object, map, summands }
}

fn assemble_left(
    alg: &Arc<Algebra>,
    m: &Module,
    maps: Vec<ModMap>,
    summands: Vec<usize>,
    parts: Vec<Module>,
) -> Approximation {
    let object = direct_sum(alg, &parts);
    let map = if maps.is_empty() {
        ModMap::zero(m, &object)
    } else {
        ModMap::column(alg, m, &maps)
    };
    Approximation { object, map, summands }
}
