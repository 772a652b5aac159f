use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{Fp, Mat};

use super::hom::{hom_basis, kernel, submodule};
use super::module::{direct_sum, ModMap, Module};

const RANDOM_TRIES: usize = 1024;
const SEED: u64 = 0x7a75_3254;

/// Indecomposable summands with multiplicities, and an isomorphism from the
/// decomposed module onto `⊕ summand^multiplicity` (summands in order).
#[derive(Clone, Debug)]
pub struct DecompCert {
    pub summands: Vec<(Module, usize)>,
    pub iso_to_sum: ModMap,
}

impl DecompCert {
    /// The summands expanded by multiplicity, in the order used by `iso_to_sum`.
    pub fn expanded(&self) -> Vec<Module> {
        self.summands
            .iter()
            .flat_map(|(m, k)| std::iter::repeat(m.clone()).take(*k))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.summands.iter().map(|(_, k)| k).sum()
    }
}

/// `g_i(x) = (Tr(x~^(p^i)) mod p^(i+1)) / p^i` for an integer lift `x~`.
fn trace_functional(x: &Mat, i: u32) -> u32 {
    let p = x.field().p() as u64;
    if i == 0 {
        return x.trace();
    }
    let modulus = p.pow(i + 1);
    let n = x.rows();
    let lift: Vec<u64> = x.data().iter().map(|&v| v as u64).collect();
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let c = a[r * n + k];
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    out[r * n + j] = (out[r * n + j] + c * b[k * n + j]) % modulus;
                }
            }
        }
        out
    };
    let mut e = p.pow(i);
    let mut base = lift;
    let mut acc: Vec<u64> = (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let tr = (0..n).fold(0u64, |s, k| (s + acc[k * n + k]) % modulus);
    ((tr / p.pow(i)) % p) as u32
}

fn combine(field: Fp, basis: &[Mat], coords: &[u32]) -> Mat {
    let n = basis[0].rows();
    let mut out = Mat::zeros(field, n, n);
    for (c, b) in coords.iter().zip(basis) {
        if *c != 0 {
            out.add_scaled(*c, b);
        }
    }
    out
}

/// Jacobson radical of the matrix algebra spanned by `basis` (which must be
/// closed under multiplication), as coordinate vectors over `basis`.
///
/// Iterated trace-form kernels: `I_{-1} = E`, and
/// `I_i = {a in I_{i-1} : g_i(ab) = 0 for all b}` for `i <= log_p(n)`.
pub fn radical(field: Fp, basis: &[Mat]) -> Vec<Vec<u32>> {
    let e = basis.len();
    if e == 0 {
        return vec![];
    }
    let n = basis[0].rows();
    let p = field.p() as usize;
    let mut levels = 0u32;
    let mut pw = p;
    while pw <= n {
        levels += 1;
        pw = pw.saturating_mul(p);
    }
    let mut cur: Vec<Vec<u32>> = (0..e)
        .map(|k| {
            let mut v = vec![0; e];
            v[k] = 1;
            v
        })
        .collect();
    for i in 0..=levels {
        if cur.is_empty() {
            break;
        }
        let elems: Vec<Mat> = cur.iter().map(|c| combine(field, basis, c)).collect();
        // gram[j][k] = g_i(a_k b_j); kernel vectors are combinations of the a_k.
        let mut gram = Mat::zeros(field, e, elems.len());
        for (k, a) in elems.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                gram.set(j, k, trace_functional(&a.mul(b), i));
            }
        }
        cur = gram
            .kernel_basis()
            .into_iter()
            .map(|c| {
                let mut v = vec![0u32; e];
                for (k, &ck) in c.iter().enumerate() {
                    if ck != 0 {
                        for (t, &x) in cur[k].iter().enumerate() {
                            v[t] = field.add(v[t], field.mul(ck, x));
                        }
                    }
                }
                v
            })
            .collect();
    }
    cur
}

fn flatten_all(ms: &[Mat]) -> Vec<Vec<u32>> {
    ms.iter().map(|m| m.data().to_vec()).collect()
}

/// Frobenius-fixed, non-scalar element of a commutative algebra given by a
/// basis (closed under products, containing the identity), or `None` if
/// the fixed subalgebra is just the scalars.
fn frobenius_splitter(field: Fp, basis: &[Mat]) -> Option<Mat> {
    let n = basis[0].rows();
    let cols = flatten_all(basis);
    let b = Mat::from_columns(field, n * n, &cols);
    let q = basis.len();
    let mut phi = Mat::zeros(field, q, q);
    for (j, c) in basis.iter().enumerate() {
        let img = c.pow(field.p() as u64);
        let coords = b.solve(img.data()).ok()??;
        for (i, &x) in coords.iter().enumerate() {
            phi.set(i, j, x);
        }
    }
    let fixed = phi.sub(&Mat::identity(field, q)).kernel_basis();
    if fixed.len() <= 1 {
        return None;
    }
    let id = Mat::identity(field, n);
    fixed
        .iter()
        .map(|c| combine(field, basis, c))
        .find(|w| {
            let scalar = w.get(0, 0);
            *w != id.scale(scalar)
        })
}

/// `w - λ` for the first `λ` making it singular; `w` must have all its
/// eigenvalues in the prime field.
fn shift_to_singular(field: Fp, w: &Mat) -> Option<Mat> {
    let n = w.rows();
    let id = Mat::identity(field, n);
    // The diagonal entries of a triangularizable w need not be eigenvalues,
    // so scan the field when it is small enough.
    let limit = field.p().min(1 << 16);
    (0..limit)
        .map(|l| w.sub(&id.scale(l)))
        .find(|z| !z.is_invertible())
}

fn is_useful_splitter(z: &Mat) -> bool {
    !z.is_invertible() && !z.is_nilpotent()
}

/// Commutative subalgebra `F_p[z]`, basis `1, z, z^2, ...`.
fn polynomial_span(field: Fp, z: &Mat) -> Vec<Mat> {
    let n = z.rows();
    let mut out = vec![Mat::identity(field, n)];
    let mut rank = 1;
    loop {
        let next = out.last().unwrap().mul(z);
        let mut cols = flatten_all(&out);
        cols.push(next.data().to_vec());
        let r = Mat::from_columns(field, n * n, &cols).rank();
        if r == rank {
            return out;
        }
        rank = r;
        out.push(next);
    }
}

fn splitter_from_element(field: Fp, z: &Mat) -> Option<Mat> {
    if is_useful_splitter(z) {
        return Some(z.clone());
    }
    let w = frobenius_splitter(field, &polynomial_span(field, z))?;
    shift_to_singular(field, &w).filter(is_useful_splitter)
}

/// Analysis of `End(M)`: `None` if it is local, otherwise an endomorphism
/// (as a total-space matrix) that is neither nilpotent nor invertible.
fn find_splitter(m: &Module) -> Option<Mat> {
    let field = m.field();
    let ends: Vec<Mat> = hom_basis(m, m)
        .expect("same algebra")
        .iter()
        .map(ModMap::total)
        .collect();
    let e = ends.len();
    if e <= 1 {
        return None;
    }
    if let Some(z) = ends.iter().find(|z| is_useful_splitter(z)) {
        return Some(z.clone());
    }
    let rad = radical(field, &ends);
    let q = e - rad.len();
    if q <= 1 {
        return None;
    }
    let rad_mats: Vec<Mat> = rad.iter().map(|c| combine(field, &ends, c)).collect();
    let n = m.total_dim();
    let mut cols = flatten_all(&rad_mats);
    cols.extend(flatten_all(&ends));
    let rr = Mat::from_columns(field, n * n, &cols).rref();
    let complement: Vec<Mat> = rr
        .pivots
        .iter()
        .filter(|&&c| c >= rad.len())
        .map(|&c| ends[c - rad.len()].clone())
        .collect();
    let mut all = rad_mats.clone();
    all.extend(complement.iter().cloned());
    let coord_mat = Mat::from_columns(field, n * n, &flatten_all(&all));
    let mod_rad = |x: &Mat| -> Vec<u32> {
        let c = coord_mat.solve(x.data()).unwrap().expect("element of End");
        c[rad.len()..].to_vec()
    };
    let commutative = complement.iter().enumerate().all(|(i, a)| {
        complement[i + 1..]
            .iter()
            .all(|b| mod_rad(&a.mul(b).sub(&b.mul(a))).iter().all(|&x| x == 0))
    });
    if commutative {
        // E/rad is a product of fields; it is one field iff the Frobenius
        // fixed points are the scalars.
        let mut phi = Mat::zeros(field, q, q);
        for (j, c) in complement.iter().enumerate() {
            for (i, x) in mod_rad(&c.pow(field.p() as u64)).into_iter().enumerate() {
                phi.set(i, j, x);
            }
        }
        let fixed = phi.sub(&Mat::identity(field, q)).kernel_basis();
        if fixed.len() <= 1 {
            return None;
        }
        let id_coords = mod_rad(&Mat::identity(field, n));
        let id_mat = Mat::from_columns(field, q, &[id_coords]);
        for c in &fixed {
            let with = id_mat.hstack(&Mat::from_columns(field, q, &[c.clone()]));
            if with.rank() == 2 {
                let w = combine(field, &complement, c);
                if let Some(z) = shift_to_singular(field, &w).filter(is_useful_splitter) {
                    return Some(z);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for z in ends.iter().cloned().chain((0..RANDOM_TRIES).map(|_| {
        let coords: Vec<u32> = (0..e).map(|_| rng.gen_range(0..field.p())).collect();
        combine(field, &ends, &coords)
    })) {
        if let Some(s) = splitter_from_element(field, &z) {
            return Some(s);
        }
    }
    panic!("no splitting endomorphism found for a decomposable module");
}

pub fn is_indecomposable(m: &Module) -> bool {
    !m.is_zero() && find_splitter(m).is_none()
}

/// Leaves of a Fitting splitting tree, with an isomorphism onto their sum.
fn split_leaves(m: &Module) -> (Vec<Module>, ModMap) {
    let alg = m.algebra();
    if m.is_zero() {
        let zero = direct_sum(alg, &[]);
        return (vec![], ModMap::zero(m, &zero));
    }
    let Some(z) = find_splitter(m) else {
        return (vec![m.clone()], ModMap::identity(m));
    };
    let zn = ModMap::from_total(m, m, &z.pow(m.total_dim() as u64));
    let (k, ik) = kernel(&zn);
    let images: Vec<Mat> = zn.mats().iter().map(Mat::column_space).collect();
    let (i, ii) = submodule(m, images);
    let from_parts = ModMap::row(alg, &[ik, ii], m);
    let to_parts = from_parts.inverse().expect("Fitting decomposition");
    let (lk, fk) = split_leaves(&k);
    let (li, fi) = split_leaves(&i);
    let mut leaves = lk;
    leaves.extend(li);
    let sum = direct_sum(alg, &leaves);
    let diag = ModMap::diagonal(alg, &[fk, fi]);
    let iso = diag.compose(&to_parts).with_ends(m, &sum);
    (leaves, iso)
}

/// An isomorphism between indecomposables, if one exists.
pub fn indec_iso(x: &Module, y: &Module) -> Option<ModMap> {
    if x.dims() != y.dims() {
        return None;
    }
    hom_basis(x, y).ok()?.into_iter().find(ModMap::is_iso)
}

pub fn decompose(m: &Module) -> DecompCert {
    let alg: &Arc<_> = m.algebra();
    let (leaves, to_leaves) = split_leaves(m);
    // Group leaves into iso classes; remember the iso onto each representative.
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(leaves.len());
    let mut to_rep = Vec::with_capacity(leaves.len());
    for (j, x) in leaves.iter().enumerate() {
        let found = reps
            .iter()
            .enumerate()
            .find_map(|(c, &r)| indec_iso(x, &leaves[r]).map(|f| (c, f)));
        match found {
            Some((c, f)) => {
                class_of.push(c);
                to_rep.push(f);
            }
            None => {
                class_of.push(reps.len());
                reps.push(j);
                to_rep.push(ModMap::identity(x));
            }
        }
    }
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&c| {
        let r = &leaves[reps[c]];
        (r.total_dim(), r.dims().to_vec(), c)
    });
    let mut summands = Vec::new();
    let mut targets = Vec::new();
    let mut slot = vec![0; leaves.len()];
    for &c in &order {
        let members: Vec<usize> = (0..leaves.len()).filter(|&j| class_of[j] == c).collect();
        summands.push((leaves[reps[c]].clone(), members.len()));
        for j in members {
            slot[j] = targets.len();
            targets.push(leaves[reps[c]].clone());
        }
    }
    let perm = ModMap::from_blocks(alg, &leaves, &targets, |i, j| {
        (slot[j] == i).then(|| to_rep[j].clone())
    });
    let iso_to_sum = perm.compose(&to_leaves);
    DecompCert {
        summands,
        iso_to_sum,
    }
}

/// `M ≅ N`, by matching indecomposable summands with multiplicity.
pub fn is_isomorphic(m: &Module, n: &Module) -> bool {
    if !m.same_algebra(n) || m.dims() != n.dims() {
        return false;
    }
    let dm = decompose(m);
    let dn = decompose(n);
    if dm.summands.len() != dn.summands.len() {
        return false;
    }
    let mut used = vec![false; dn.summands.len()];
    for (x, k) in &dm.summands {
        let hit = dn
            .summands
            .iter()
            .enumerate()
            .find(|(i, (y, l))| !used[*i] && k == l && indec_iso(x, y).is_some());
        match hit {
            Some((i, _)) => used[i] = true,
            None => return false,
        }
    }
    true
}

/// Removes summands isomorphic to any of `drop`, returning the rest as a sum.
pub fn strip_summands(m: &Module, drop: impl Fn(&Module) -> bool) -> Module {
    let cert = decompose(m);
    let kept: Vec<Module> = cert.expanded().into_iter().filter(|x| !drop(x)).collect();
    direct_sum(m.algebra(), &kept)
}

/// Basic version: one copy of each indecomposable summand.
pub fn basic_part(m: &Module) -> Module {
    let cert = decompose(m);
    let parts: Vec<Module> = cert.summands.into_iter().map(|(x, _)| x).collect();
    direct_sum(m.algebra(), &parts)
}
