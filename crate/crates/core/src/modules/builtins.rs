//! Standard modules over a truncated algebra.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::modules::graded::GradedModule;
use crate::quadratic::TruncatedAlgebra;

/// The trivial module `k = A/A_{≥1}` in degree 0.
pub fn trivial<F: Field>(alg: &Arc<TruncatedAlgebra<F>>) -> GradedModule<F> {
    GradedModule::new_unchecked(alg.clone(), 0, vec![1], vec![], true)
}

fn top_or_window<F: Field>(alg: &TruncatedAlgebra<F>) -> (usize, bool) {
    match alg.top_degree() {
        Some(d) => (d, true),
        None => (alg.max_degree(), false),
    }
}

/// The algebra as a left module over itself. For an algebra that is not
/// finite within the truncation the result is an unbounded truncation.
pub fn regular<F: Field>(alg: &Arc<TruncatedAlgebra<F>>) -> GradedModule<F> {
    let (top, bounded) = top_or_window(alg);
    let g = alg.num_generators();
    let dims = alg.dims()[..=top].to_vec();
    let act = (0..top).map(|n| (0..g).map(|a| alg.left_gen(n, a)).collect()).collect();
    GradedModule::new_unchecked(alg.clone(), 0, dims, act, bounded)
}

/// The graded dual `A′` of a finite-dimensional algebra, with `(A′)_{−n} =
/// (A_n)′` and left action `(a·φ)(b) = φ(b·a)`. Basis vectors are the dual
/// basis of the normal-word basis.
pub fn regular_dual<F: Field>(alg: &Arc<TruncatedAlgebra<F>>) -> Result<GradedModule<F>> {
    let top = alg.top_degree().ok_or(Error::NotFinite { degree: alg.max_degree() })?;
    let g = alg.num_generators();
    let dims: Vec<usize> = (0..=top).rev().map(|n| alg.dims()[n]).collect();
    // Window index k corresponds to degree −(top − k), i.e. A_{top−k}.
    let act = (0..top)
        .map(|k| {
            let n = top - k;
            (0..g).map(|a| alg.right_gen(n - 1, a).transpose()).collect()
        })
        .collect();
    Ok(GradedModule::new_unchecked(alg.clone(), -(top as i64), dims, act, true))
}

/// `⊕ A(−s)` over the listed generator degrees `s`.
pub fn free_module<F: Field>(alg: &Arc<TruncatedAlgebra<F>>, degrees: &[i64]) -> GradedModule<F> {
    let r = regular(alg);
    let parts: Vec<_> = degrees.iter().map(|&s| r.shift(-s)).collect();
    GradedModule::direct_sum_all(alg.clone(), &parts)
}

/// `⊕ A′(−t)` over the listed socle degrees `t`.
pub fn cofree_module<F: Field>(alg: &Arc<TruncatedAlgebra<F>>, socle_degrees: &[i64]) -> Result<GradedModule<F>> {
    let d = regular_dual(alg)?;
    let parts: Vec<_> = socle_degrees.iter().map(|&t| d.shift(-t)).collect();
    Ok(GradedModule::direct_sum_all(alg.clone(), &parts))
}

/// `A / A·(ℓ_1, …, ℓ_r)` for linear forms `ℓ_i ∈ A_1` (coefficient vectors
/// in the generator basis).
pub fn quotient_by_linear_forms<F: Field>(
    alg: &Arc<TruncatedAlgebra<F>>,
    forms: &[Vec<F::Elem>],
) -> Result<GradedModule<F>> {
    let g = alg.num_generators();
    if let Some(bad) = forms.iter().find(|v| v.len() != g) {
        return Err(Error::DimensionMismatch(format!(
            "linear form has {} coefficients, expected {g}",
            bad.len()
        )));
    }
    let r = regular(alg);
    let f = alg.field().clone();
    let gens: Vec<Matrix<F>> = (0..r.piece_dims().len())
        .map(|k| {
            let d = r.piece_dims()[k];
            if k == 1 {
                let cols: Vec<Vec<F::Elem>> = forms.to_vec();
                Matrix::from_rows(f.clone(), g, cols).expect("uniform").transpose()
            } else {
                Matrix::zeros(f.clone(), d, 0)
            }
        })
        .collect();
    let ideal = r.span_closure(&gens);
    Ok(r.quotient(&ideal).0.trim_keep_zero())
}

/// `A / A·(x_i : i ∈ indices)`.
pub fn quotient_by_generators<F: Field>(
    alg: &Arc<TruncatedAlgebra<F>>,
    indices: &[usize],
) -> Result<GradedModule<F>> {
    let g = alg.num_generators();
    let f = alg.field().clone();
    let mut forms = Vec::new();
    for &i in indices {
        if i >= g {
            return Err(Error::Parse(format!("generator index {i} out of range (g = {g})")));
        }
        let mut v = vec![f.zero(); g];
        v[i] = f.one();
        forms.push(v);
    }
    quotient_by_linear_forms(alg, &forms)
}

impl<F: Field> GradedModule<F> {
    /// Trims zero pieces but keeps unbounded modules untouched and the zero
    /// module anchored at degree 0.
    pub(crate) fn trim_keep_zero(&self) -> Self {
        if self.is_bounded() {
            self.trim()
        } else {
            self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::quadratic::QuadraticPresentation;

    fn alg(g: usize) -> Arc<TruncatedAlgebra<PrimeField>> {
        let f = PrimeField::new(101).unwrap();
        Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::exterior(f, g), g + 1))
    }

    #[test]
    fn dual_of_exterior_is_a_module() {
        let a = alg(3);
        let d = regular_dual(&a).unwrap();
        assert_eq!(d.lo(), -3);
        assert_eq!(d.piece_dims(), &[1, 3, 3, 1]);
        assert!(d.check_relations().is_ok());
        assert_eq!(d.socle_dims(), vec![0, 0, 0, 1]);
    }

    #[test]
    fn quotient_by_first_generator() {
        let a = alg(2);
        let m = quotient_by_generators(&a, &[0]).unwrap();
        assert_eq!(m.piece_dims(), &[1, 1]);
        assert!(m.check_relations().is_ok());
        let a3 = alg(3);
        let m = quotient_by_generators(&a3, &[0]).unwrap();
        assert_eq!(m.piece_dims(), &[1, 2, 1]);
        assert!(quotient_by_generators(&a3, &[5]).is_err());
    }

    #[test]
    fn free_and_cofree_sums() {
        let a = alg(2);
        let fm = free_module(&a, &[0, 1]);
        assert_eq!((fm.lo(), fm.piece_dims()), (0, &[1, 3, 3, 1][..]));
        let cm = cofree_module(&a, &[0]).unwrap();
        assert_eq!(cm.lo(), -2);
    }
}
