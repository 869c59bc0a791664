//! The Koszul complex of a quadratic algebra and a numerical Koszulness
//! probe.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bgg::complex::{FreeComplex, FreeEntry};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::quadratic::{QuadraticPresentation, TruncatedAlgebra};

/// `L^{−i} = A(−i) ⊗ (A!_i)′` for `0 ≤ i ≤ length`, with
/// `d(f_b) = Σ_α Σ_c [y_α·c]_b · x_α f_c`. The dual algebra must be the
/// truncated Koszul dual of `alg`'s presentation.
pub fn koszul_complex<F: Field>(alg: &Arc<TruncatedAlgebra<F>>, dual: &TruncatedAlgebra<F>) -> Result<FreeComplex<F>> {
    let expected = alg.presentation().koszul_dual();
    if !expected.same_relations(dual.presentation()) {
        return Err(Error::PresentationMismatch(
            "second algebra is not the Koszul dual of the first".into(),
        ));
    }
    let g = alg.num_generators();
    let length = match dual.top_degree() {
        Some(t) => t,
        None => dual.max_degree().min(alg.max_degree()),
    };
    let f = alg.field().clone();
    // Positions −length..0; index k ↔ position −(length − k), i = length − k.
    let generators: Vec<Vec<i64>> = (0..=length).rev().map(|i| vec![i as i64; dual.dims()[i]]).collect();
    let mut diffs = Vec::new();
    for i in (1..=length).rev() {
        let lefts: Vec<_> = (0..g).map(|a| dual.left_gen(i - 1, a)).collect();
        let mut entries = Vec::new();
        for b in 0..dual.dims()[i] {
            for c in 0..dual.dims()[i - 1] {
                let elem: Vec<F::Elem> = lefts.iter().map(|m| m.get(b, c).clone()).collect();
                if elem.iter().any(|x| !f.is_zero(x)) {
                    entries.push(FreeEntry { target: c, source: b, elem });
                }
            }
        }
        diffs.push(entries);
    }
    FreeComplex::new(alg.clone(), -(length as i64), generators, diffs)
}

/// Result of [`koszulness_probe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulnessReport {
    pub reciprocity_ok: bool,
    /// First degree where `H_A(t)·H_{A!}(−t)` has a nonzero coefficient.
    pub first_bad_degree: Option<usize>,
    /// Largest internal degree through which the Koszul complex has only
    /// the expected cohomology `k` in position 0, degree 0.
    pub koszul_complex_exact_up_to: Option<i64>,
    pub dims: Vec<usize>,
    pub dual_dims: Vec<usize>,
}

/// Checks Hilbert series reciprocity through degree `n` and exactness of
/// the Koszul complex through the same degree.
pub fn koszulness_probe<F: Field>(pres: &QuadraticPresentation<F>, n: usize) -> Result<KoszulnessReport> {
    if n < 2 {
        return Err(Error::Precondition("the probe needs N ≥ 2".into()));
    }
    let alg = Arc::new(TruncatedAlgebra::new(pres, n));
    let dual = TruncatedAlgebra::new(&pres.koszul_dual(), n);
    let (a, b) = (alg.dims().to_vec(), dual.dims().to_vec());
    let mut first_bad = None;
    for deg in 0..=n {
        let coeff: i64 = (0..=deg)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                sign * (b[i] as i64) * (a[deg - i] as i64)
            })
            .sum();
        let expected = if deg == 0 { 1 } else { 0 };
        if coeff != expected {
            first_bad = Some(deg);
            break;
        }
    }
    let complex = koszul_complex(&alg, &dual)?;
    let table = complex.cohomology((0, n as i64))?;
    let mut exact_up_to = None;
    for u in 0..=n as i64 {
        let ok = (complex.lo()..=complex.hi()).all(|p| table.get(p, u) == usize::from(p == 0 && u == 0));
        if !ok {
            break;
        }
        exact_up_to = Some(u);
    }
    Ok(KoszulnessReport {
        reciprocity_ok: first_bad.is_none(),
        first_bad_degree: first_bad,
        koszul_complex_exact_up_to: exact_up_to,
        dims: a,
        dual_dims: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn polynomial_koszul_resolution() {
        let pres = QuadraticPresentation::polynomial(f7(), 2);
        let alg = Arc::new(TruncatedAlgebra::new(&pres, 6));
        let dual = TruncatedAlgebra::new(&pres.koszul_dual(), 6);
        let l = koszul_complex(&alg, &dual).unwrap();
        assert_eq!((l.lo(), l.hi()), (-2, 0));
        assert_eq!(l.generator_degrees(-1), &[1, 1]);
        assert!(l.is_complex((0, 4)).unwrap());
        let h = l.cohomology((0, 4)).unwrap();
        assert_eq!(h.entries.len(), 1);
        assert_eq!(h.get(0, 0), 1);
    }

    #[test]
    fn exterior_base_has_growing_ranks() {
        let pres = QuadraticPresentation::exterior(f7(), 2);
        let alg = Arc::new(TruncatedAlgebra::new(&pres, 3));
        let dual = TruncatedAlgebra::new(&pres.koszul_dual(), 3);
        let l = koszul_complex(&alg, &dual).unwrap();
        for i in 0..=3 {
            assert_eq!(l.generator_degrees(-i).len(), i as usize + 1);
        }
        let wrong = TruncatedAlgebra::new(&pres, 3);
        assert!(matches!(koszul_complex(&alg, &wrong), Err(Error::PresentationMismatch(_))));
    }

    #[test]
    fn sklyanin_ranks_and_probe() {
        let pres = QuadraticPresentation::sklyanin(f7(), 1, 2, 3);
        let alg = Arc::new(TruncatedAlgebra::new(&pres, 5));
        let dual = TruncatedAlgebra::new(&pres.koszul_dual(), 5);
        let l = koszul_complex(&alg, &dual).unwrap();
        let ranks: Vec<usize> = (0..=3).map(|i| l.generator_degrees(-i).len()).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
        let r = koszulness_probe(&pres, 6).unwrap();
        assert!(r.reciprocity_ok);
        assert_eq!(r.koszul_complex_exact_up_to, Some(6));
    }

    #[test]
    fn monomial_algebra_is_koszul() {
        // k<x,y>/(xx): dims 1,2,3,5,8,...; its dual k<x,y>/(xy,yx,yy) has dims 1,2,1,1,...
        let pres = QuadraticPresentation::from_i64(f7(), &["x", "y"], &[&[1, 0, 0, 0]]).unwrap();
        let r = koszulness_probe(&pres, 6).unwrap();
        assert_eq!(r.dims[..5], [1, 2, 3, 5, 8]);
        assert_eq!(r.dual_dims[..4], [1, 2, 1, 1]);
        assert!(r.reciprocity_ok);
        assert_eq!(r.koszul_complex_exact_up_to, Some(6));
    }

    #[test]
    fn reciprocity_failure_is_detected() {
        // k<x,y,z>/(yz, xz, zy − zz): the degree-4 coefficient of
        // H_A(t)·H_{A!}(−t) is 22 − 3·11 + 3·6 − 2·3 = 1.
        let x = |i: usize, j: usize| i * 3 + j;
        let mut rels = vec![vec![0i64; 9]; 3];
        rels[0][x(1, 2)] = 1;
        rels[1][x(0, 2)] = 1;
        rels[2][x(2, 1)] = 1;
        rels[2][x(2, 2)] = -1;
        let refs: Vec<&[i64]> = rels.iter().map(Vec::as_slice).collect();
        let pres = QuadraticPresentation::from_i64(f7(), &["x", "y", "z"], &refs).unwrap();
        let r = koszulness_probe(&pres, 5).unwrap();
        assert_eq!(r.dims, vec![1, 3, 6, 11, 22, 44]);
        assert_eq!(r.dual_dims[..4], [1, 3, 3, 2]);
        assert!(!r.reciprocity_ok);
        assert_eq!(r.first_bad_degree, Some(4));
        assert!(r.koszul_complex_exact_up_to.is_some_and(|u| u < 5));
    }
}
