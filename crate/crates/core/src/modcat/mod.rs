//! The module category `mod A`: representations, morphisms, Hom and Ext,
//! covers, syzygies, transposes and translates, and Krull-Schmidt
//! decompositions.

mod decomp;
mod hom;
mod homological;
mod module;

use std::sync::Arc;

use serde_json::{json, Map, Value};

pub use decomp::{
    basic_part, decompose, indec_iso, is_indecomposable, is_isomorphic, radical, strip_summands, DecompCert,
};
pub use hom::{
    annihilator, annihilator_is_zero, annihilator_vertices, cokernel, hom_basis, hom_dim, kernel, map_parts,
    quotient_module, radical_submodule, reject_into, socle_submodule, span_rank, submodule, sum_of_images, trace_from, MapParts,
};
pub use homological::{
    cosyzygy, costable_hom_dim, ext_dim, global_dimension, injective_dimension, injective_envelope, is_injective,
    is_projective, map_from_generators, projective_cover, projective_cover_with_generators, projective_dimension,
    stable_hom_dim, strip_injectives, strip_projectives, syzygy, tau, tau_d, tau_d_inv, tau_inv, top_generators,
    transpose, Generator,
};
pub use module::{direct_sum, ModMap, Module};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::Mat;

/// Parses `{"dims": {vertex: n}, "action": {arrow: [[row, ...]]}}`.
/// Missing vertices have dimension 0; missing arrows act as zero.
pub fn module_from_json(alg: &Arc<Algebra>, text: &str) -> Result<Module> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    module_from_value(alg, &value)
}

pub fn module_from_value(alg: &Arc<Algebra>, value: &Value) -> Result<Module> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Json("module must be an object".into()))?;
    for key in obj.keys() {
        if key != "dims" && key != "action" {
            return Err(Error::Json(format!("unexpected key `{key}`")));
        }
    }
    let spec = alg.spec();
    let mut dims = vec![0usize; alg.num_vertices()];
    if let Some(d) = obj.get("dims") {
        let d = d
            .as_object()
            .ok_or_else(|| Error::Json("`dims` must be an object".into()))?;
        for (label, n) in d {
            let v = spec
                .vertex_index(label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            dims[v] = n
                .as_u64()
                .filter(|&n| n <= 1 << 16)
                .ok_or_else(|| Error::Json(format!("bad dimension for vertex {label}")))? as usize;
        }
    }
    let f = alg.field();
    let mut action: Vec<Mat> = (0..alg.num_arrows())
        .map(|a| Mat::zeros(f, dims[alg.arrow(a).target], dims[alg.arrow(a).source]))
        .collect();
    if let Some(act) = obj.get("action") {
        let act = act
            .as_object()
            .ok_or_else(|| Error::Json("`action` must be an object".into()))?;
        for (name, rows) in act {
            let a = spec
                .arrow_index(name)
                .ok_or_else(|| Error::UnknownLabel(name.clone()))?;
            let rows = rows
                .as_array()
                .ok_or_else(|| Error::Json(format!("matrix for {name} must be an array")))?;
            let (r, c) = (action[a].rows(), action[a].cols());
            if rows.len() != r {
                return Err(Error::DimensionMismatch(format!("arrow {name} needs {r} rows")));
            }
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|row| row.len() == c)
                    .ok_or_else(|| Error::DimensionMismatch(format!("arrow {name} needs {c} columns")))?;
                for (j, x) in row.iter().enumerate() {
                    let x = x
                        .as_i64()
                        .ok_or_else(|| Error::Json(format!("non-integer entry for {name}")))?;
                    action[a].set(i, j, f.from_i64(x));
                }
            }
        }
    }
    Module::new(alg, dims, action)
}

pub fn module_to_json(m: &Module) -> Value {
    let alg = m.algebra();
    let mut dims = Map::new();
    for v in 0..alg.num_vertices() {
        dims.insert(alg.vertex_label(v).to_string(), json!(m.dim_at(v)));
    }
    let mut action = Map::new();
    for a in 0..alg.num_arrows() {
        action.insert(alg.arrow(a).name.clone(), json!(m.action(a).to_rows()));
    }
    json!({ "dims": dims, "action": action })
}
