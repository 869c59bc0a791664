//! Degree-0 homomorphism spaces and randomized isomorphism testing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{Field, Matrix};
use crate::modules::graded::{GradedModule, ModuleMap};

/// Degrees in which a map `M → N` has unknown entries, and which of the
/// compatibility squares `j → j+1` are fully determined.
fn common_window<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> (i64, i64) {
    let lo = m.lo().min(n.lo());
    let mut hi = m.hi().max(n.hi());
    if !m.is_bounded() {
        hi = hi.min(m.hi());
    }
    if !n.is_bounded() {
        hi = hi.min(n.hi());
    }
    (lo, hi)
}

/// Basis of `Hom_0(M, N)`, restricted to the degrees where both modules are
/// known. Each map is reported on the source window of `M`.
pub fn hom_basis<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> Vec<ModuleMap<F>> {
    let f = m.field().clone();
    let (lo, hi) = common_window(m, n);
    if hi < lo {
        return vec![];
    }
    let degs: Vec<i64> = (lo..=hi).collect();
    let mut offsets = Vec::with_capacity(degs.len());
    let mut total = 0usize;
    for &j in &degs {
        offsets.push(total);
        total += m.dim(j) * n.dim(j);
    }
    let idx = |k: usize, r: usize, c: usize, j: i64| offsets[k] + r * m.dim(j) + c;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (k, &j) in degs.iter().enumerate() {
        let (mj, mj1, nj, nj1) = (m.dim(j), m.dim(j + 1), n.dim(j), n.dim(j + 1));
        if nj1 == 0 || mj == 0 {
            continue;
        }
        if !(m.known(j + 1) && n.known(j + 1)) {
            continue;
        }
        for a in 0..m.num_generators() {
            let am = m.action(a, j);
            let an = n.action(a, j);
            // (f_{j+1} · am − an · f_j)[r][c] = 0
            for r in 0..nj1 {
                for c in 0..mj {
                    let mut row = vec![f.zero(); total];
                    let mut nonzero = false;
                    if k + 1 < degs.len() {
                        for t in 0..mj1 {
                            let v = am.get(t, c);
                            if !f.is_zero(v) {
                                let p = idx(k + 1, r, t, j + 1);
                                row[p] = f.add(&row[p], v);
                                nonzero = true;
                            }
                        }
                    }
                    for t in 0..nj {
                        let v = an.get(r, t);
                        if !f.is_zero(v) {
                            let p = idx(k, t, c, j);
                            row[p] = f.sub(&row[p], v);
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let constraints = Matrix::from_rows(f.clone(), total, rows).expect("uniform rows");
    let kernel = constraints.kernel_basis();
    (0..kernel.rows())
        .map(|b| map_from_vector(m, n, &degs, &offsets, kernel.row(b)))
        .collect()
}

fn map_from_vector<F: Field>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    degs: &[i64],
    offsets: &[usize],
    v: &[F::Elem],
) -> ModuleMap<F> {
    let f = m.field().clone();
    let mats = (m.lo()..=m.hi())
        .map(|j| {
            let mut mat = Matrix::zeros(f.clone(), n.dim(j), m.dim(j));
            if let Some(k) = degs.iter().position(|&d| d == j) {
                for r in 0..n.dim(j) {
                    for c in 0..m.dim(j) {
                        mat.set(r, c, v[offsets[k] + r * m.dim(j) + c].clone());
                    }
                }
            }
            mat
        })
        .collect();
    ModuleMap { lo: m.lo(), mats }
}

pub fn hom_dim<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> usize {
    hom_basis(m, n).len()
}

/// Outcome of a randomized isomorphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

/// Dimensions over a common window, with zero padding.
fn padded_dims(v: &[usize], lo: i64, from: i64, to: i64) -> Vec<usize> {
    (from..=to)
        .map(|j| {
            if j < lo || j >= lo + v.len() as i64 {
                0
            } else {
                v[(j - lo) as usize]
            }
        })
        .collect()
}

/// Cheap invariants that must agree for isomorphic modules: piece
/// dimensions, socle dimensions, radical series.
pub fn invariants_differ<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> bool {
    let (lo, hi) = common_window(m, n);
    if padded_dims(m.piece_dims(), m.lo(), lo, hi) != padded_dims(n.piece_dims(), n.lo(), lo, hi) {
        return true;
    }
    if m.is_bounded() && n.is_bounded() {
        let (sm, sn) = (m.socle_dims(), n.socle_dims());
        if padded_dims(&sm, m.lo(), lo, hi) != padded_dims(&sn, n.lo(), lo, hi) {
            return true;
        }
        let (rm, rn) = (m.radical_series_dims(), n.radical_series_dims());
        if rm.len() != rn.len() {
            return true;
        }
        for (a, b) in rm.iter().zip(&rn) {
            if padded_dims(a, m.lo(), lo, hi) != padded_dims(b, n.lo(), lo, hi) {
                return true;
            }
        }
    }
    false
}

/// Decides `M ≅ N` (degree-0 graded isomorphism) by invariant screening and
/// then sampling random elements of `Hom_0(M, N)` from a seeded generator.
///
/// For unbounded truncations the comparison is made on the common known
/// window.
pub fn module_isomorphic<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, trials: usize, seed: u64) -> Verdict {
    if invariants_differ(m, n) {
        return Verdict::No;
    }
    let (lo, hi) = common_window(m, n);
    if (lo..=hi).all(|j| m.dim(j) == 0) {
        return Verdict::Yes;
    }
    let basis = hom_basis(m, n);
    if basis.is_empty() {
        return Verdict::No;
    }
    if m.is_bounded() && n.is_bounded() {
        if hom_dim(m, m) != basis.len() || hom_dim(n, m) != basis.len() {
            return Verdict::No;
        }
    }
    let f = m.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        let map = combine(&basis, &coeffs);
        let invertible = (lo..=hi).all(|j| match map.at(j) {
            Some(mat) => mat.is_invertible(),
            None => m.dim(j) == 0,
        });
        if invertible {
            return Verdict::Yes;
        }
    }
    Verdict::Inconclusive
}

/// `Σ c_i f_i`.
pub fn combine<F: Field>(basis: &[ModuleMap<F>], coeffs: &[F::Elem]) -> ModuleMap<F> {
    let first = &basis[0];
    let mut mats: Vec<Matrix<F>> = first
        .mats
        .iter()
        .map(|m| Matrix::zeros(m.field().clone(), m.rows(), m.cols()))
        .collect();
    for (b, c) in basis.iter().zip(coeffs) {
        for (acc, m) in mats.iter_mut().zip(&b.mats) {
            acc.add_scaled(c, m);
        }
    }
    ModuleMap { lo: first.lo, mats }
}
