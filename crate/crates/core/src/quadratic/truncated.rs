use crate::linalg::{quotient_basis, Field, Matrix, Quotient};
use crate::quadratic::presentation::QuadraticPresentation;

/// The graded pieces `A_0, …, A_N` of a quadratic algebra with all products
/// landing inside the window.
///
/// `A_n` is computed as the cokernel of `A_{n−2}⊗R → A_{n−1}⊗V`, which is
/// isomorphic to `V^{⊗n}` modulo the degree-`n` part of the ideal but only
/// ever touches spaces of size `g · dim A_{n−1}`. Each basis element of `A_n`
/// is a normal word `b'·e_j` with `b'` a basis element of `A_{n−1}`.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra<F: Field> {
    pres: QuadraticPresentation<F>,
    max_degree: usize,
    dims: Vec<usize>,
    words: Vec<Vec<(usize, usize)>>,
    quotients: Vec<Option<Quotient<F>>>,
    /// `right_gen[n][j]`: right multiplication by `e_j`, `A_n → A_{n+1}`.
    right_gen: Vec<Vec<Matrix<F>>>,
    /// `rmul[m][n][b]`: right multiplication by basis element `b` of `A_n`,
    /// as a map `A_m → A_{m+n}`.
    rmul: Vec<Vec<Vec<Matrix<F>>>>,
}

impl<F: Field> TruncatedAlgebra<F> {
    pub fn new(pres: &QuadraticPresentation<F>, max_degree: usize) -> Self {
        let f = pres.field().clone();
        let g = pres.num_generators();
        let mut dims = vec![1];
        let mut words = vec![vec![]];
        let mut quotients = vec![None];
        let mut right_gen: Vec<Vec<Matrix<F>>> = Vec::new();
        for n in 1..=max_degree {
            let prev = dims[n - 1];
            let ambient = prev * g;
            let mut rows = Vec::new();
            if n >= 2 {
                for a in 0..dims[n - 2] {
                    for r in 0..pres.relation_dim() {
                        let mut v = vec![f.zero(); ambient];
                        for i in 0..g {
                            for j in 0..g {
                                let c = pres.coeff(r, i, j);
                                if f.is_zero(c) {
                                    continue;
                                }
                                let ai = &right_gen[n - 2][i];
                                for k in 0..prev {
                                    let e = ai.get(k, a);
                                    if !f.is_zero(e) {
                                        let idx = k * g + j;
                                        v[idx] = f.add(&v[idx], &f.mul(c, e));
                                    }
                                }
                            }
                        }
                        rows.push(v);
                    }
                }
            }
            let sub = Matrix::from_rows(f.clone(), ambient, rows).expect("uniform rows");
            let q = quotient_basis(&sub, ambient).expect("ambient matches");
            // Non-pivot columns are exactly those where the section has a unit.
            let mut ws = vec![(0, 0); q.dim()];
            for k in 0..q.dim() {
                let c = (0..ambient).find(|&c| !f.is_zero(q.section.get(c, k))).expect("unit column");
                ws[k] = (c / g, c % g);
            }
            let maps = (0..g)
                .map(|j| {
                    let cols: Vec<usize> = (0..prev).map(|a| a * g + j).collect();
                    q.projection.select_cols(&cols)
                })
                .collect();
            right_gen.push(maps);
            dims.push(q.dim());
            words.push(ws);
            quotients.push(Some(q));
        }

        let mut rmul: Vec<Vec<Vec<Matrix<F>>>> = Vec::new();
        for m in 0..=max_degree {
            let mut per_n: Vec<Vec<Matrix<F>>> = vec![vec![Matrix::identity(f.clone(), dims[m])]];
            for n in 1..=max_degree - m {
                let mut mats = Vec::with_capacity(dims[n]);
                for &(parent, j) in &words[n] {
                    mats.push(right_gen[m + n - 1][j].mul(&per_n[n - 1][parent]));
                }
                per_n.push(mats);
            }
            rmul.push(per_n);
        }

        TruncatedAlgebra { pres: pres.clone(), max_degree, dims, words, quotients, right_gen, rmul }
    }

    pub fn presentation(&self) -> &QuadraticPresentation<F> {
        &self.pres
    }
    pub fn field(&self) -> &F {
        self.pres.field()
    }
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
    pub fn num_generators(&self) -> usize {
        self.pres.num_generators()
    }

    /// `dim A_n` for `n` in the window and zero for negative `n`; `None`
    /// beyond the truncation.
    pub fn dim(&self, n: i64) -> Option<usize> {
        if n < 0 {
            Some(0)
        } else {
            self.dims.get(n as usize).copied()
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Largest degree with a nonzero piece, if the window already shows the
    /// algebra to be finite-dimensional.
    pub fn top_degree(&self) -> Option<usize> {
        if *self.dims.last().expect("degree 0 present") != 0 {
            return None;
        }
        self.dims.iter().rposition(|&d| d != 0)
    }

    /// Basis element `b` of `A_n` as a product `A_{n−1}[parent] · e_j`.
    pub fn word(&self, n: usize, b: usize) -> (usize, usize) {
        self.words[n][b]
    }

    /// Basis element `b` of `A_n` spelled out as a generator sequence.
    pub fn word_letters(&self, n: usize, b: usize) -> Vec<usize> {
        let mut letters = Vec::with_capacity(n);
        let (mut deg, mut idx) = (n, b);
        while deg > 0 {
            let (p, j) = self.words[deg][idx];
            letters.push(j);
            deg -= 1;
            idx = p;
        }
        letters.reverse();
        letters
    }

    /// Projection `A_{n−1}⊗V → A_n` from the inductive construction.
    pub fn quotient(&self, n: usize) -> Option<&Quotient<F>> {
        self.quotients.get(n).and_then(|q| q.as_ref())
    }

    /// Right multiplication by the generator `e_j` on `A_n`.
    pub fn right_gen(&self, n: usize, j: usize) -> &Matrix<F> {
        &self.right_gen[n][j]
    }

    /// Left multiplication by the generator `e_i`, `A_n → A_{n+1}`.
    pub fn left_gen(&self, n: usize, i: usize) -> Matrix<F> {
        let f = self.field();
        let mut out = Matrix::zeros(f.clone(), self.dims[n + 1], self.dims[n]);
        for k in 0..self.dims[n] {
            let m = &self.rmul[1][n][k];
            for r in 0..self.dims[n + 1] {
                out.set(r, k, m.get(r, i).clone());
            }
        }
        out
    }

    /// Right multiplication by basis element `b` of `A_n` on `A_m`.
    pub fn right_basis(&self, m: usize, n: usize, b: usize) -> &Matrix<F> {
        &self.rmul[m][n][b]
    }

    /// Right multiplication by an arbitrary element of `A_n`, as `A_m → A_{m+n}`.
    pub fn right_mult(&self, m: usize, n: usize, elem: &[F::Elem]) -> Matrix<F> {
        let f = self.field();
        let mut out = Matrix::zeros(f.clone(), self.dims[m + n], self.dims[m]);
        for (b, c) in elem.iter().enumerate() {
            out.add_scaled(c, &self.rmul[m][n][b]);
        }
        out
    }

    /// Left multiplication by an element of `A_m`, as `A_n → A_{m+n}`.
    pub fn left_mult(&self, m: usize, elem: &[F::Elem], n: usize) -> Matrix<F> {
        let f = self.field();
        let mut out = Matrix::zeros(f.clone(), self.dims[m + n], self.dims[n]);
        for k in 0..self.dims[n] {
            let col = self.rmul[m][n][k].mul_vec(elem);
            for (r, v) in col.into_iter().enumerate() {
                out.set(r, k, v);
            }
        }
        out
    }

    /// Product of `a ∈ A_m` and `b ∈ A_n`.
    pub fn mul(&self, m: usize, a: &[F::Elem], n: usize, b: &[F::Elem]) -> Vec<F::Elem> {
        self.right_mult(m, n, b).mul_vec(a)
    }

    /// Image of the tensor monomial `e_{w_1}⋯e_{w_n}` in `A_n`.
    pub fn word_element(&self, word: &[usize]) -> Vec<F::Elem> {
        let f = self.field();
        let mut v = vec![f.one()];
        for (n, &j) in word.iter().enumerate() {
            v = self.right_gen[n][j].mul_vec(&v);
        }
        v
    }

    /// Unit vector for basis element `b` of `A_n`.
    pub fn basis_vector(&self, n: usize, b: usize) -> Vec<F::Elem> {
        let f = self.field();
        let mut v = vec![f.zero(); self.dims[n]];
        v[b] = f.one();
        v
    }
}

/// Free-function form of [`TruncatedAlgebra::new`].
pub fn truncate_algebra<F: Field>(pres: &QuadraticPresentation<F>, n: usize) -> TruncatedAlgebra<F> {
    TruncatedAlgebra::new(pres, n)
}

/// `[dim A_0, …, dim A_N]`.
pub fn hilbert_function<F: Field>(alg: &TruncatedAlgebra<F>) -> Vec<usize> {
    alg.dims().to_vec()
}
