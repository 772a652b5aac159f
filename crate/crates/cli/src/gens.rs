//! Generator names: a dimension vector written `1-1-0`, optionally followed
//! by `#k` to pick the k-th indecomposable (in index order) with that vector.

use std::sync::Arc;

use tau2::arknit::IndecIndex;
use tau2::highercat::Subcat;

use crate::Failure;

fn parse_dims(s: &str) -> Option<Vec<usize>> {
    s.split('-').map(|t| t.trim().parse().ok()).collect()
}

pub fn resolve(host: &Arc<IndecIndex>, name: &str) -> Result<usize, Failure> {
    let name = name.trim();
    let (dims, pick) = match name.split_once('#') {
        Some((d, k)) => (d, Some(k.parse::<usize>().map_err(|_| Failure::usage(format!("bad suffix in `{name}`")))?)),
        None => (name, None),
    };
    let dims = parse_dims(dims).ok_or_else(|| Failure::usage(format!("`{name}` is not a dimension vector like 1-0-1")))?;
    if dims.len() != host.algebra.num_vertices() {
        return Err(Failure::usage(format!(
            "`{name}` has {} entries, the quiver has {} vertices",
            dims.len(),
            host.algebra.num_vertices()
        )));
    }
    let hits: Vec<usize> = (0..host.len()).filter(|&i| host.modules[i].dims() == dims).collect();
    match (hits.len(), pick) {
        (0, _) => Err(Failure::usage(format!("no indecomposable with dimension vector `{name}`"))),
        (1, None | Some(0)) => Ok(hits[0]),
        (_, Some(k)) if k < hits.len() => Ok(hits[k]),
        (n, None) => Err(Failure::usage(format!(
            "`{name}` matches {n} indecomposables (indices {hits:?}); add #0..#{}",
            n - 1
        ))),
        (n, Some(k)) => Err(Failure::usage(format!("`{name}`: only {n} candidates, #{k} is out of range"))),
    }
}

pub fn subcat(host: &Arc<IndecIndex>, names: &[String]) -> Result<Subcat, Failure> {
    let mut members = Vec::new();
    for name in names.iter().filter(|n| !n.trim().is_empty()) {
        members.push(resolve(host, name)?);
    }
    Ok(Subcat::new(host, members))
}

/// The name of an index entry, with a suffix only when needed.
pub fn name_of(host: &IndecIndex, i: usize) -> String {
    let dims = host.modules[i].dims();
    let base = dims.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
    let same: Vec<usize> = (0..host.len()).filter(|&j| host.modules[j].dims() == dims).collect();
    if same.len() == 1 {
        base
    } else {
        format!("{base}#{}", same.iter().position(|&j| j == i).unwrap())
    }
}
