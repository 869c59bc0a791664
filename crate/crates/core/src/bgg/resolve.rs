//! Minimal free resolutions over a truncated (possibly infinite) algebra,
//! computed degree by degree.

use std::sync::Arc;

use crate::bgg::complex::{FreeComplex, FreeEntry};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::quadratic::TruncatedAlgebra;

/// Minimal free resolution of `A / A·(ℓ_1, …, ℓ_r)` for linear forms `ℓ_k`,
/// placed in positions `−length..0`. Syzygies are found in internal degrees
/// up to `degree_bound`; a term with no new generators ends the resolution.
pub fn cyclic_free_resolution<F: Field>(
    alg: &Arc<TruncatedAlgebra<F>>,
    forms: &[Vec<F::Elem>],
    length: usize,
    degree_bound: i64,
) -> Result<FreeComplex<F>> {
    let g = alg.num_generators();
    let f = alg.field().clone();
    if forms.iter().any(|v| v.len() != g) {
        return Err(Error::DimensionMismatch("linear forms must have one coefficient per generator".into()));
    }
    if degree_bound > alg.max_degree() as i64 && alg.top_degree().is_none() {
        return Err(Error::WindowTooSmall(format!(
            "degree bound {degree_bound} exceeds the truncation {}",
            alg.max_degree()
        )));
    }
    // Independent forms only, so the first map is minimal.
    let reduced = if forms.is_empty() {
        Matrix::zeros(f.clone(), 0, g)
    } else {
        Matrix::from_rows(f.clone(), g, forms.to_vec())?.row_basis()
    };
    // Built from position 0 downwards, then reversed.
    let mut gens: Vec<Vec<i64>> = vec![vec![0]];
    let mut maps: Vec<Vec<FreeEntry<F>>> = Vec::new();
    if reduced.rows() > 0 && length > 0 {
        gens.push(vec![1; reduced.rows()]);
        maps.push(
            (0..reduced.rows())
                .map(|k| FreeEntry { target: 0, source: k, elem: reduced.row(k).to_vec() })
                .collect(),
        );
    }
    while gens.len() <= length && gens.len() >= 2 {
        let depth = gens.len() - 1;
        let src_gens = gens[depth].clone();
        let mut new_gens: Vec<i64> = Vec::new();
        let mut new_entries: Vec<FreeEntry<F>> = Vec::new();
        let start = src_gens.iter().min().copied().unwrap_or(0) + 1;
        for u in start..=degree_bound {
            let current = assemble(alg, &gens, &maps)?;
            // Position of the source term in the assembled complex.
            let pos = -(depth as i64);
            let d = current.differential(pos, u)?;
            let kernel = d.kernel_basis();
            if kernel.rows() == 0 {
                continue;
            }
            let image = if new_gens.is_empty() {
                Matrix::zeros(f.clone(), 0, kernel.cols())
            } else {
                let partial = assemble(alg, &push(&gens, new_gens.clone()), &push(&maps, new_entries.clone()))?;
                partial.differential(pos - 1, u)?.transpose().row_basis()
            };
            // Greedily keep kernel vectors that are new modulo the image.
            let mut basis = image;
            let mut lifts: Vec<Vec<F::Elem>> = Vec::new();
            for r in 0..kernel.rows() {
                let candidate = basis.vstack(&Matrix::from_rows(f.clone(), kernel.cols(), vec![kernel.row(r).to_vec()])?);
                if candidate.rank() > basis.rank() {
                    basis = candidate;
                    lifts.push(kernel.row(r).to_vec());
                }
            }
            for v in &lifts {
                let source = new_gens.len();
                new_gens.push(u);
                let mut off = 0;
                for (t, &s) in src_gens.iter().enumerate() {
                    let n = alg.dim(u - s).unwrap_or(0);
                    let elem = v[off..off + n].to_vec();
                    off += n;
                    if elem.iter().any(|x| !f.is_zero(x)) {
                        new_entries.push(FreeEntry { target: t, source, elem });
                    }
                }
            }
        }
        if new_gens.is_empty() {
            break;
        }
        gens.push(new_gens);
        maps.push(new_entries);
    }
    assemble(alg, &gens, &maps)
}

fn push<T: Clone>(v: &[T], x: T) -> Vec<T> {
    let mut out = v.to_vec();
    out.push(x);
    out
}

/// `gens[k]` is position `−k`, `maps[k]` goes from position `−k−1` to `−k`.
fn assemble<F: Field>(
    alg: &Arc<TruncatedAlgebra<F>>,
    gens: &[Vec<i64>],
    maps: &[Vec<FreeEntry<F>>],
) -> Result<FreeComplex<F>> {
    let lo = -(gens.len() as i64 - 1);
    let generators: Vec<Vec<i64>> = gens.iter().rev().cloned().collect();
    let diffs: Vec<Vec<FreeEntry<F>>> = maps.iter().rev().cloned().collect();
    FreeComplex::new(alg.clone(), lo, generators, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::quadratic::QuadraticPresentation;

    #[test]
    fn resolution_of_the_residue_field() {
        let f = PrimeField::new(31).unwrap();
        let alg = Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::polynomial(f, 3), 6));
        let forms: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| u32::from(i == j)).collect()).collect();
        let res = cyclic_free_resolution(&alg, &forms, 5, 5).unwrap();
        assert_eq!((res.lo(), res.hi()), (-3, 0));
        let ranks: Vec<usize> = (-3..=0).map(|p| res.generator_degrees(p).len()).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
        let h = res.cohomology((0, 5)).unwrap();
        assert_eq!(h.entries.len(), 1);
    }

    #[test]
    fn quotient_of_a_sklyanin_algebra_is_resolved() {
        let f = PrimeField::new(13).unwrap();
        let alg = Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::sklyanin(f, 1, 1, 2), 7));
        let res = cyclic_free_resolution(&alg, &[vec![0, 1, 0], vec![0, 0, 1]], 4, 6).unwrap();
        assert!(res.is_complex((0, 6)).unwrap());
        let h = res.cohomology((0, 6)).unwrap();
        assert!(h.entries.iter().all(|e| e.position == 0));
    }
}
