use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{quotient_basis, Field, Matrix};
use crate::quadratic::TruncatedAlgebra;

/// A graded left module over a truncated quadratic algebra, stored on a
/// finite window of internal degrees `[lo, hi]`.
///
/// Each algebra generator `x_α` acts by matrices `M_j → M_{j+1}`. A
/// *bounded* module has zero pieces outside its window; an unbounded one
/// (typically a truncation of a module over an infinite algebra) is simply
/// not known above `hi`. Below `lo` every module is zero.
#[derive(Clone, Debug)]
pub struct GradedModule<F: Field> {
    alg: Arc<TruncatedAlgebra<F>>,
    lo: i64,
    dims: Vec<usize>,
    /// `act[k][α]`: `M_{lo+k} → M_{lo+k+1}` for `k + 1 < dims.len()`.
    act: Vec<Vec<Matrix<F>>>,
    bounded: bool,
}

/// A degree-0 module homomorphism, as one matrix per degree of the source
/// window.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap<F: Field> {
    pub lo: i64,
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn at(&self, j: i64) -> Option<&Matrix<F>> {
        if j < self.lo {
            return None;
        }
        self.mats.get((j - self.lo) as usize)
    }

    pub fn compose(&self, first: &ModuleMap<F>) -> ModuleMap<F> {
        let mats = first
            .mats
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let j = first.lo + k as i64;
                match self.at(j) {
                    Some(s) => s.mul(m),
                    None => Matrix::zeros(m.field().clone(), 0, m.cols()),
                }
            })
            .collect();
        ModuleMap { lo: first.lo, mats }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// The same map stored on the full window of `source`, with zero blocks
    /// wherever the stored data is missing or has the wrong shape.
    pub fn on_window(&self, source: &GradedModule<F>, target: &GradedModule<F>) -> ModuleMap<F> {
        let f = source.field().clone();
        let mats = (source.lo()..=source.hi())
            .map(|j| match self.at(j) {
                Some(m) if m.rows() == target.dim(j) && m.cols() == source.dim(j) => m.clone(),
                _ => Matrix::zeros(f.clone(), target.dim(j), source.dim(j)),
            })
            .collect();
        ModuleMap { lo: source.lo(), mats }
    }

    /// `self + c·other` on a common window.
    pub fn add_scaled(&self, c: &F::Elem, other: &ModuleMap<F>) -> ModuleMap<F> {
        assert_eq!((self.lo, self.mats.len()), (other.lo, other.mats.len()), "maps on different windows");
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut a = a.clone();
                a.add_scaled(c, b);
                a
            })
            .collect();
        ModuleMap { lo: self.lo, mats }
    }
}

impl<F: Field> GradedModule<F> {
    /// Builds a module and verifies shapes and the quadratic relations.
    pub fn new(
        alg: Arc<TruncatedAlgebra<F>>,
        lo: i64,
        dims: Vec<usize>,
        act: Vec<Vec<Matrix<F>>>,
        bounded: bool,
    ) -> Result<Self> {
        let m = Self::new_unchecked(alg, lo, dims, act, bounded);
        m.check_shapes()?;
        m.check_relations()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        alg: Arc<TruncatedAlgebra<F>>,
        lo: i64,
        dims: Vec<usize>,
        act: Vec<Vec<Matrix<F>>>,
        bounded: bool,
    ) -> Self {
        GradedModule { alg, lo, dims, act, bounded }
    }

    pub fn zero(alg: Arc<TruncatedAlgebra<F>>) -> Self {
        GradedModule { alg, lo: 0, dims: vec![], act: vec![], bounded: true }
    }

    fn check_shapes(&self) -> Result<()> {
        let g = self.alg.num_generators();
        let expected = self.dims.len().saturating_sub(1);
        if self.act.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected actions for {expected} degrees, found {}",
                self.act.len()
            )));
        }
        for (k, per) in self.act.iter().enumerate() {
            if per.len() != g {
                return Err(Error::DimensionMismatch(format!(
                    "degree {}: expected {g} action matrices, found {}",
                    self.lo + k as i64,
                    per.len()
                )));
            }
            for m in per {
                if m.rows() != self.dims[k + 1] || m.cols() != self.dims[k] {
                    return Err(Error::DimensionMismatch(format!(
                        "degree {}: action must be {}×{}, found {}×{}",
                        self.lo + k as i64,
                        self.dims[k + 1],
                        self.dims[k],
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every relation `Σ c_αβ x_α x_β` must act as zero `M_j → M_{j+2}`.
    pub fn check_relations(&self) -> Result<()> {
        let pres = self.alg.presentation();
        let f = self.field().clone();
        let g = pres.num_generators();
        for j in self.lo..=self.hi() {
            if !self.known(j + 2) {
                break;
            }
            for r in 0..pres.relation_dim() {
                let mut total = Matrix::zeros(f.clone(), self.dim(j + 2), self.dim(j));
                for a in 0..g {
                    for b in 0..g {
                        let c = pres.coeff(r, a, b);
                        if f.is_zero(c) {
                            continue;
                        }
                        let prod = self.action(a, j + 1).mul(&self.action(b, j));
                        total.add_scaled(c, &prod);
                    }
                }
                if !total.is_zero() {
                    return Err(Error::Precondition(format!(
                        "relation {r} does not annihilate the module in degree {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra<F>> {
        &self.alg
    }
    pub fn field(&self) -> &F {
        self.alg.field()
    }
    pub fn num_generators(&self) -> usize {
        self.alg.num_generators()
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    /// Top of the window; `lo − 1` for an empty window.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }
    pub fn piece_dims(&self) -> &[usize] {
        &self.dims
    }

    /// Whether the piece in degree `j` is determined by the stored data.
    pub fn known(&self, j: i64) -> bool {
        self.bounded || j <= self.hi()
    }

    /// `dim M_j`; zero outside the window (also above an unbounded window,
    /// where callers must check [`Self::known`] first).
    pub fn dim(&self, j: i64) -> usize {
        if j < self.lo || j > self.hi() {
            0
        } else {
            self.dims[(j - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bounded && self.total_dim() == 0
    }

    /// Action of generator `α`, `M_j → M_{j+1}`.
    pub fn action(&self, alpha: usize, j: i64) -> Matrix<F> {
        if j >= self.lo && j < self.hi() {
            self.act[(j - self.lo) as usize][alpha].clone()
        } else {
            assert!(self.known(j + 1), "action out of the known window");
            Matrix::zeros(self.field().clone(), self.dim(j + 1), self.dim(j))
        }
    }

    fn action_ref(&self, alpha: usize, j: i64) -> Option<&Matrix<F>> {
        if j >= self.lo && j < self.hi() {
            Some(&self.act[(j - self.lo) as usize][alpha])
        } else {
            None
        }
    }

    /// `M(ℓ)`, with `M(ℓ)_i = M_{i+ℓ}`.
    pub fn shift(&self, l: i64) -> Self {
        let mut m = self.clone();
        m.lo -= l;
        m
    }

    /// Drops zero pieces at either end of a bounded window.
    pub fn trim(&self) -> Self {
        if !self.bounded {
            return self.clone();
        }
        let Some(first) = self.dims.iter().position(|&d| d != 0) else {
            return Self::zero(self.alg.clone());
        };
        let last = self.dims.iter().rposition(|&d| d != 0).expect("nonzero piece");
        GradedModule {
            alg: self.alg.clone(),
            lo: self.lo + first as i64,
            dims: self.dims[first..=last].to_vec(),
            act: self.act[first..last].to_vec(),
            bounded: true,
        }
    }

    /// Re-stores the module on the window `[lo, hi]`. Pieces outside the
    /// old window are zero, which requires a bounded module when `hi`
    /// exceeds the stored top; a smaller `hi` truncates.
    pub fn widen(&self, lo: i64, hi: i64) -> Self {
        assert!(
            self.bounded || hi <= self.hi() || self.dims.is_empty(),
            "cannot extend an unbounded module above its known window"
        );
        assert!(
            lo <= self.lo || self.total_dim() == 0 || self.dims[..((lo - self.lo) as usize).min(self.dims.len())].iter().all(|&d| d == 0),
            "widening would drop nonzero low pieces"
        );
        let f = self.field().clone();
        let g = self.num_generators();
        let len = (hi - lo + 1).max(0) as usize;
        let dims: Vec<usize> = (0..len).map(|k| self.dim(lo + k as i64)).collect();
        let act = (0..len.saturating_sub(1))
            .map(|k| {
                let j = lo + k as i64;
                (0..g)
                    .map(|a| match self.action_ref(a, j) {
                        Some(m) => m.clone(),
                        None => Matrix::zeros(f.clone(), dims[k + 1], dims[k]),
                    })
                    .collect()
            })
            .collect();
        let bounded = self.bounded && hi >= self.hi();
        GradedModule { alg: self.alg.clone(), lo, dims, act, bounded }
    }

    /// Restriction to the degrees `≤ hi`, as an unbounded truncation.
    pub fn truncate_above(&self, hi: i64) -> Self {
        let keep = (hi - self.lo + 1).clamp(0, self.dims.len() as i64) as usize;
        GradedModule {
            alg: self.alg.clone(),
            lo: self.lo,
            dims: self.dims[..keep].to_vec(),
            act: self.act[..keep.saturating_sub(1)].to_vec(),
            bounded: false,
        }
    }

    /// `M_{≥j}` as a submodule with the same grading.
    pub fn truncate_below(&self, j: i64) -> Self {
        if j <= self.lo {
            return self.clone();
        }
        let skip = ((j - self.lo) as usize).min(self.dims.len());
        GradedModule {
            alg: self.alg.clone(),
            lo: j,
            dims: self.dims[skip..].to_vec(),
            act: self.act[skip.min(self.act.len())..].to_vec(),
            bounded: self.bounded,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = match (self.bounded, other.bounded) {
            (true, true) => self.hi().max(other.hi()),
            (true, false) => other.hi(),
            (false, true) => self.hi(),
            (false, false) => self.hi().min(other.hi()),
        };
        let bounded = self.bounded && other.bounded;
        let (a, b) = (self.widen(lo, hi), other.widen(lo, hi));
        let g = self.num_generators();
        let dims = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
        let act = a
            .act
            .iter()
            .zip(&b.act)
            .map(|(pa, pb)| (0..g).map(|al| pa[al].direct_sum(&pb[al])).collect())
            .collect();
        GradedModule { alg: self.alg.clone(), lo, dims, act, bounded }
    }

    pub fn direct_sum_all(alg: Arc<TruncatedAlgebra<F>>, parts: &[Self]) -> Self {
        parts.iter().fold(Self::zero(alg), |acc, p| acc.direct_sum(p))
    }

    /// Action of the basis element `b` of `A_n`, `M_j → M_{j+n}`.
    pub fn act_basis(&self, n: usize, b: usize, j: i64) -> Matrix<F> {
        let letters = self.alg.word_letters(n, b);
        let mut m = Matrix::identity(self.field().clone(), self.dim(j));
        for (k, &l) in letters.iter().rev().enumerate() {
            m = self.action(l, j + k as i64).mul(&m);
        }
        m
    }

    /// Action of an arbitrary element of `A_n`.
    pub fn act_element(&self, n: usize, elem: &[F::Elem], j: i64) -> Matrix<F> {
        let f = self.field().clone();
        let table = ActionTable::from_degree(self, j, n);
        let mut out = Matrix::zeros(f, self.dim(j + n as i64), self.dim(j));
        for (b, c) in elem.iter().enumerate() {
            out.add_scaled(c, &table.get(n, b));
        }
        out
    }

    /// Joint kernel of all generator actions, per degree (basis columns).
    pub fn socle(&self) -> Vec<Matrix<F>> {
        let f = self.field().clone();
        (self.lo..=self.hi())
            .map(|j| {
                let d = self.dim(j);
                if !self.known(j + 1) {
                    return Matrix::zeros(f.clone(), d, 0);
                }
                let mut stacked = Matrix::zeros(f.clone(), 0, d);
                for a in 0..self.num_generators() {
                    stacked = stacked.vstack(&self.action(a, j));
                }
                stacked.kernel_basis().transpose()
            })
            .collect()
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle().iter().map(|s| s.cols()).collect()
    }

    /// `rad(M) = A_{≥1}·M`, per degree (basis columns).
    pub fn radical(&self) -> Vec<Matrix<F>> {
        let f = self.field().clone();
        (self.lo..=self.hi())
            .map(|j| {
                let mut span = Matrix::zeros(f.clone(), self.dim(j), 0);
                if j > self.lo {
                    for a in 0..self.num_generators() {
                        span = span.hstack(&self.action(a, j - 1));
                    }
                }
                span.column_basis()
            })
            .collect()
    }

    /// Dimensions of the spans of a family of subspaces under repeated
    /// application of the radical, as a cheap isomorphism invariant.
    pub fn radical_series_dims(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current: Vec<Matrix<F>> = (self.lo..=self.hi())
            .map(|j| Matrix::identity(self.field().clone(), self.dim(j)))
            .collect();
        for _ in 0..=self.dims.len() {
            let dims: Vec<usize> = current.iter().map(|m| m.cols()).collect();
            let done = dims.iter().all(|&d| d == 0);
            out.push(dims);
            if done {
                break;
            }
            current = (0..self.dims.len())
                .map(|k| {
                    let j = self.lo + k as i64;
                    let mut span = Matrix::zeros(self.field().clone(), self.dim(j), 0);
                    if k > 0 {
                        for a in 0..self.num_generators() {
                            span = span.hstack(&self.action(a, j - 1).mul(&current[k - 1]));
                        }
                    }
                    span.column_basis()
                })
                .collect();
        }
        out
    }

    /// Smallest submodule containing the given vectors (columns, per degree
    /// of the window), returned as basis columns per degree.
    pub fn span_closure(&self, gens: &[Matrix<F>]) -> Vec<Matrix<F>> {
        let mut out: Vec<Matrix<F>> = Vec::with_capacity(self.dims.len());
        for k in 0..self.dims.len() {
            let j = self.lo + k as i64;
            let mut span = gens[k].clone();
            if k > 0 {
                for a in 0..self.num_generators() {
                    span = span.hstack(&self.action(a, j - 1).mul(&out[k - 1]));
                }
            }
            out.push(span.column_basis());
        }
        out
    }

    /// The submodule with the given basis columns per degree (which must be
    /// closed under the action), together with its inclusion.
    pub fn submodule(&self, bases: &[Matrix<F>]) -> (Self, ModuleMap<F>) {
        let g = self.num_generators();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let act = (0..self.dims.len().saturating_sub(1))
            .map(|k| {
                let j = self.lo + k as i64;
                (0..g)
                    .map(|a| {
                        let image = self.action(a, j).mul(&bases[k]);
                        bases[k + 1].solve(&image).expect("subspace is a submodule")
                    })
                    .collect()
            })
            .collect();
        let sub = GradedModule { alg: self.alg.clone(), lo: self.lo, dims, act, bounded: self.bounded };
        (sub, ModuleMap { lo: self.lo, mats: bases.to_vec() })
    }

    /// `M / E` for a submodule `E` given by basis columns per degree, with
    /// the projection map.
    pub fn quotient(&self, bases: &[Matrix<F>]) -> (Self, ModuleMap<F>) {
        let g = self.num_generators();
        let qs: Vec<_> = bases
            .iter()
            .enumerate()
            .map(|(k, b)| quotient_basis(&b.transpose(), self.dims[k]).expect("ambient matches"))
            .collect();
        let dims = qs.iter().map(|q| q.dim()).collect();
        let act = (0..self.dims.len().saturating_sub(1))
            .map(|k| {
                let j = self.lo + k as i64;
                (0..g)
                    .map(|a| qs[k + 1].projection.mul(&self.action(a, j)).mul(&qs[k].section))
                    .collect()
            })
            .collect();
        let quo = GradedModule { alg: self.alg.clone(), lo: self.lo, dims, act, bounded: self.bounded };
        let proj = ModuleMap { lo: self.lo, mats: qs.into_iter().map(|q| q.projection).collect() };
        (quo, proj)
    }

    /// Kernel of a map out of this module.
    pub fn kernel_of(&self, map: &ModuleMap<F>) -> (Self, ModuleMap<F>) {
        let bases: Vec<Matrix<F>> = (0..self.dims.len())
            .map(|k| {
                let m = &map.mats[k];
                m.kernel_basis().transpose()
            })
            .collect();
        self.submodule(&bases)
    }

    /// Identity map.
    pub fn identity_map(&self) -> ModuleMap<F> {
        ModuleMap {
            lo: self.lo,
            mats: self.dims.iter().map(|&d| Matrix::identity(self.field().clone(), d)).collect(),
        }
    }

    /// Checks that `map` is a degree-0 homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &Self, map: &ModuleMap<F>) -> bool {
        for j in self.lo..self.hi() {
            if !target.known(j + 1) {
                break;
            }
            let (Some(fj), Some(fj1)) = (map.at(j), map.at(j + 1)) else {
                return false;
            };
            for a in 0..self.num_generators() {
                if fj1.mul(&self.action(a, j)) != target.action(a, j).mul(fj) {
                    return false;
                }
            }
        }
        true
    }

    /// The same pieces and actions, regarded over another algebra with the
    /// same number of generators (used to pass between an algebra and a
    /// presentation with identical relations).
    pub fn with_algebra(&self, alg: Arc<TruncatedAlgebra<F>>) -> Self {
        let mut m = self.clone();
        m.alg = alg;
        m
    }
}

/// Actions of every basis element of `A_0..A_n` starting from one degree.
pub struct ActionTable<F: Field> {
    /// `by_deg[n][b]`: action of basis element `b` of `A_n`, `M_j → M_{j+n}`.
    by_deg: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> ActionTable<F> {
    /// For the start degree `j`, actions of all algebra basis elements of
    /// degree at most `n_max` (limited by the algebra's truncation).
    pub fn from_degree(m: &GradedModule<F>, j: i64, n_max: usize) -> Self {
        let alg = m.algebra().clone();
        let n_max = n_max.min(alg.max_degree());
        let field = m.field().clone();
        let mut by_deg = vec![vec![Matrix::identity(field, m.dim(j))]];
        for n in 1..=n_max {
            let mut row = Vec::with_capacity(alg.dims()[n]);
            for b in 0..alg.dims()[n] {
                row.push(m.act_basis(n, b, j));
            }
            by_deg.push(row);
        }
        ActionTable { by_deg }
    }

    pub fn get(&self, n: usize, b: usize) -> Matrix<F> {
        self.by_deg[n][b].clone()
    }

    pub fn get_ref(&self, n: usize, b: usize) -> &Matrix<F> {
        &self.by_deg[n][b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::modules::builtins;
    use crate::quadratic::QuadraticPresentation;

    fn ext2() -> Arc<TruncatedAlgebra<PrimeField>> {
        let f = PrimeField::new(101).unwrap();
        Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::exterior(f, 2), 3))
    }

    #[test]
    fn regular_module_satisfies_relations() {
        let alg = ext2();
        let r = builtins::regular(&alg);
        assert!(r.check_relations().is_ok());
        assert_eq!(r.piece_dims(), &[1, 2, 1]);
        assert_eq!(r.socle_dims(), vec![0, 0, 1]);
    }

    #[test]
    fn bad_action_is_rejected() {
        let alg = ext2();
        let f = *alg.field();
        let one = Matrix::identity(f, 1);
        let act = vec![vec![one.clone(), one.clone()], vec![one.clone(), Matrix::zeros(f, 1, 1)]];
        assert!(GradedModule::new(alg, 0, vec![1, 1, 1], act, true).is_err());
    }

    #[test]
    fn quotient_and_kernel_of_projection_agree() {
        let alg = ext2();
        let r = builtins::regular(&alg);
        let rad = r.radical();
        let (q, proj) = r.quotient(&rad);
        assert_eq!(q.piece_dims(), &[1, 0, 0]);
        assert!(r.is_homomorphism(&q, &proj));
        let (k, inc) = r.kernel_of(&proj);
        assert_eq!(k.piece_dims(), &[0, 2, 1]);
        assert!(k.is_homomorphism(&r, &inc));
    }

    #[test]
    fn shift_moves_window() {
        let alg = ext2();
        let k = builtins::trivial(&alg);
        assert_eq!(k.shift(1).lo(), -1);
        assert_eq!(k.shift(1).dim(-1), 1);
    }
}
