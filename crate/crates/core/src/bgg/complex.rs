//! Cochain complexes of graded modules, stored degreewise.
//!
//! Two shapes occur. A [`FreeComplex`] has terms `⊕ A(−s)` over an algebra
//! that is usually infinite (and therefore truncated), with differentials
//! given by homogeneous algebra elements. A [`ModuleComplex`] has
//! finite-dimensional terms over a Frobenius algebra, given as explicit
//! modules and maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::modules::{GradedModule, ModuleMap};
use crate::quadratic::TruncatedAlgebra;

/// Dimension of cohomology at one (position, internal degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohomologyEntry {
    pub position: i64,
    pub degree: i64,
    pub dim: usize,
}

/// Cohomology dimensions over a rectangular window; entries outside the
/// stored list are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub positions: (i64, i64),
    pub degrees: (i64, i64),
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyTable {
    pub fn from_map(positions: (i64, i64), degrees: (i64, i64), map: BTreeMap<(i64, i64), usize>) -> Self {
        let entries = map
            .into_iter()
            .filter(|&(_, d)| d > 0)
            .map(|((position, degree), dim)| CohomologyEntry { position, degree, dim })
            .collect();
        CohomologyTable { positions, degrees, entries }
    }

    pub fn get(&self, position: i64, degree: i64) -> usize {
        self.entries
            .iter()
            .find(|e| e.position == position && e.degree == degree)
            .map_or(0, |e| e.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries inside a sub-window.
    pub fn restrict(&self, positions: (i64, i64), degrees: (i64, i64)) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|e| {
                (positions.0..=positions.1).contains(&e.position) && (degrees.0..=degrees.1).contains(&e.degree)
            })
            .copied()
            .collect();
        CohomologyTable { positions, degrees, entries }
    }

    /// Relabels the table: entry at `(p, u)` moves to `(p + dp, u + du)`.
    pub fn relabel(&self, dp: i64, du: i64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| CohomologyEntry { position: e.position + dp, degree: e.degree + du, dim: e.dim })
            .collect();
        CohomologyTable {
            positions: (self.positions.0 + dp, self.positions.1 + dp),
            degrees: (self.degrees.0 + du, self.degrees.1 + du),
            entries,
        }
    }

    /// Same entries on the overlap of the two windows.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = (self.positions.0.max(other.positions.0), self.positions.1.min(other.positions.1));
        let d = (self.degrees.0.max(other.degrees.0), self.degrees.1.min(other.degrees.1));
        self.restrict(p, d).entries == other.restrict(p, d).entries
    }

    /// `Σ_u dim h^p_u` for one position.
    pub fn position_total(&self, position: i64) -> usize {
        self.entries.iter().filter(|e| e.position == position).map(|e| e.dim).sum()
    }

    /// Aligned plain-text rendering: one row per position, one column per
    /// internal degree.
    pub fn to_text(&self) -> String {
        let mut out = String::from("pos\\deg");
        for u in self.degrees.0..=self.degrees.1 {
            out.push_str(&format!(" {u:>4}"));
        }
        out.push('\n');
        for p in self.positions.0..=self.positions.1 {
            out.push_str(&format!("{p:>7}"));
            for u in self.degrees.0..=self.degrees.1 {
                out.push_str(&format!(" {:>4}", self.get(p, u)));
            }
            out.push('\n');
        }
        out
    }
}

/// `dim ker(out) − rank(inc)` for a piece of dimension `dim`.
pub(crate) fn homology_dim<F: Field>(dim: usize, incoming: &Matrix<F>, outgoing: &Matrix<F>) -> usize {
    if dim == 0 {
        return 0;
    }
    dim - outgoing.rank() - incoming.rank()
}

/// One entry of a free differential: generator `source` of the earlier term
/// maps to `elem · target` in the later one, with `elem` homogeneous of
/// degree `s_source − s_target`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeEntry<F: Field> {
    pub target: usize,
    pub source: usize,
    pub elem: Vec<F::Elem>,
}

/// A complex of free modules `⊕_g A(−s_g)`, positions `lo, lo+1, …`.
/// Left modules over `A`, so a differential acts by right multiplication
/// by its entries.
#[derive(Clone, Debug)]
pub struct FreeComplex<F: Field> {
    alg: Arc<TruncatedAlgebra<F>>,
    lo: i64,
    generators: Vec<Vec<i64>>,
    diffs: Vec<Vec<FreeEntry<F>>>,
}

impl<F: Field> FreeComplex<F> {
    /// Validates entry degrees and lengths. `diffs[k]` goes from position
    /// `lo + k` to `lo + k + 1`.
    pub fn new(
        alg: Arc<TruncatedAlgebra<F>>,
        lo: i64,
        generators: Vec<Vec<i64>>,
        diffs: Vec<Vec<FreeEntry<F>>>,
    ) -> Result<Self> {
        if diffs.len() + 1 != generators.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                generators.len(),
                generators.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, entries) in diffs.iter().enumerate() {
            for e in entries {
                let (Some(&s), Some(&t)) = (generators[k].get(e.source), generators[k + 1].get(e.target)) else {
                    return Err(Error::DimensionMismatch(format!("entry index out of range at position {}", lo + k as i64)));
                };
                let deg = s - t;
                let expected = alg.dim(deg).filter(|_| deg >= 0);
                if deg < 0 || expected != Some(e.elem.len()) {
                    return Err(Error::DimensionMismatch(format!(
                        "entry {}→{} at position {} has {} coefficients for degree {deg}",
                        e.source,
                        e.target,
                        lo + k as i64,
                        e.elem.len()
                    )));
                }
            }
        }
        Ok(FreeComplex { alg, lo, generators, diffs })
    }

    /// The zero complex.
    pub fn zero(alg: Arc<TruncatedAlgebra<F>>) -> Self {
        FreeComplex { alg, lo: 0, generators: vec![], diffs: vec![] }
    }

    /// `A(−s)` in position 0 for each listed `s`, zero differential.
    pub fn free_module(alg: Arc<TruncatedAlgebra<F>>, degrees: &[i64]) -> Self {
        FreeComplex { alg, lo: 0, generators: vec![degrees.to_vec()], diffs: vec![] }
    }

    /// The structure object: `A` in position 0.
    pub fn structure(alg: Arc<TruncatedAlgebra<F>>) -> Self {
        Self::free_module(alg, &[0])
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra<F>> {
        &self.alg
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.generators.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.generators.iter().all(|g| g.is_empty())
    }

    pub fn generator_degrees(&self, p: i64) -> &[i64] {
        if p < self.lo || p > self.hi() {
            return &[];
        }
        &self.generators[(p - self.lo) as usize]
    }

    pub fn entries(&self, p: i64) -> &[FreeEntry<F>] {
        if p < self.lo || p >= self.hi() {
            return &[];
        }
        &self.diffs[(p - self.lo) as usize]
    }

    /// Whether the degree-`u` piece of position `p` lies inside the
    /// truncation.
    pub fn known(&self, p: i64, u: i64) -> bool {
        self.alg.top_degree().is_some()
            || self.generator_degrees(p).iter().all(|&s| u - s <= self.alg.max_degree() as i64)
    }

    pub fn dim(&self, p: i64, u: i64) -> usize {
        self.generator_degrees(p).iter().map(|&s| self.alg.dim(u - s).unwrap_or(0)).sum()
    }

    fn offsets(&self, p: i64, u: i64) -> Vec<usize> {
        let mut off = 0;
        self.generator_degrees(p)
            .iter()
            .map(|&s| {
                let o = off;
                off += self.alg.dim(u - s).unwrap_or(0);
                o
            })
            .collect()
    }

    fn require_known(&self, p: i64, u: i64) -> Result<()> {
        if self.known(p, u) {
            Ok(())
        } else {
            let top = self.generator_degrees(p).iter().max().copied().unwrap_or(0);
            Err(Error::WindowTooSmall(format!(
                "position {p} degree {u} needs the algebra through degree {}, truncated at {}",
                u - self.generator_degrees(p).iter().min().copied().unwrap_or(top),
                self.alg.max_degree()
            )))
        }
    }

    /// Left multiplication by generator `α` on position `p`, degree `u → u+1`.
    pub fn action(&self, p: i64, alpha: usize, u: i64) -> Result<Matrix<F>> {
        self.require_known(p, u + 1)?;
        let f = self.alg.field().clone();
        let mut out = Matrix::zeros(f, self.dim(p, u + 1), self.dim(p, u));
        let (src, tgt) = (self.offsets(p, u), self.offsets(p, u + 1));
        for (g, &s) in self.generator_degrees(p).iter().enumerate() {
            let n = u - s;
            if n < 0 || self.alg.dim(n) == Some(0) || self.alg.dim(n + 1) == Some(0) {
                continue;
            }
            out.set_block(tgt[g], src[g], &self.alg.left_gen(n as usize, alpha));
        }
        Ok(out)
    }

    /// `d^p` in internal degree `u`.
    pub fn differential(&self, p: i64, u: i64) -> Result<Matrix<F>> {
        self.require_known(p, u)?;
        self.require_known(p + 1, u)?;
        let f = self.alg.field().clone();
        let mut out = Matrix::zeros(f, self.dim(p + 1, u), self.dim(p, u));
        let (src, tgt) = (self.offsets(p, u), self.offsets(p + 1, u));
        let sd = self.generator_degrees(p);
        let td = self.generator_degrees(p + 1);
        for e in self.entries(p) {
            let n = u - sd[e.source];
            let deg = sd[e.source] - td[e.target];
            if n < 0 || self.alg.dim(n) == Some(0) || self.alg.dim(n + deg) == Some(0) {
                continue;
            }
            let block = self.alg.right_mult(n as usize, deg as usize, &e.elem);
            let cur = out.block(tgt[e.target], src[e.source], block.rows(), block.cols());
            out.set_block(tgt[e.target], src[e.source], &cur.add(&block));
        }
        Ok(out)
    }

    /// Cohomology dimensions for all positions and the given internal
    /// degrees.
    pub fn cohomology(&self, degrees: (i64, i64)) -> Result<CohomologyTable> {
        let mut map = BTreeMap::new();
        let positions = (self.lo, self.hi());
        for p in self.lo..=self.hi() {
            for u in degrees.0..=degrees.1 {
                let dim = self.dim(p, u);
                if dim == 0 {
                    continue;
                }
                let out = self.differential(p, u)?;
                let inc = self.differential(p - 1, u)?;
                map.insert((p, u), homology_dim(dim, &inc, &out));
            }
        }
        Ok(CohomologyTable::from_map(positions, degrees, map))
    }

    /// `d^{p+1} d^p = 0` in every listed internal degree.
    pub fn is_complex(&self, degrees: (i64, i64)) -> Result<bool> {
        for p in self.lo..self.hi() {
            for u in degrees.0..=degrees.1 {
                if !self.differential(p + 1, u)?.mul(&self.differential(p, u)?).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Internal shift `X(l)`: generator degrees drop by `l`.
    pub fn shift(&self, l: i64) -> Self {
        let mut c = self.clone();
        for g in c.generators.iter_mut() {
            for s in g.iter_mut() {
                *s -= l;
            }
        }
        c
    }

    /// Suspension `Σ^i X`: `(Σ^i X)^p = X^{p+i}`, differential times `(−1)^i`.
    pub fn suspend(&self, i: i64) -> Self {
        let mut c = self.clone();
        c.lo -= i;
        if i.rem_euclid(2) == 1 {
            let f = self.alg.field().clone();
            for entries in c.diffs.iter_mut() {
                for e in entries.iter_mut() {
                    e.elem = e.elem.iter().map(|x| f.neg(x)).collect();
                }
            }
        }
        c
    }

    /// Termwise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.generators.is_empty() {
            return other.clone();
        }
        if other.generators.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut generators = Vec::new();
        let mut diffs = Vec::new();
        for p in lo..=hi {
            let a = self.generator_degrees(p);
            let mut g = a.to_vec();
            g.extend_from_slice(other.generator_degrees(p));
            generators.push(g);
            if p < hi {
                let (na, nb) = (a.len(), self.generator_degrees(p + 1).len());
                let mut e: Vec<FreeEntry<F>> = self.entries(p).to_vec();
                e.extend(other.entries(p).iter().map(|x| FreeEntry {
                    target: x.target + nb,
                    source: x.source + na,
                    elem: x.elem.clone(),
                }));
                diffs.push(e);
            }
        }
        FreeComplex { alg: self.alg.clone(), lo, generators, diffs }
    }

    /// Brutal truncation keeping positions `from..=to`.
    pub fn brutal(&self, from: i64, to: i64) -> Self {
        if to < from {
            return Self::zero(self.alg.clone());
        }
        let generators = (from..=to).map(|p| self.generator_degrees(p).to_vec()).collect();
        let diffs = (from..to).map(|p| self.entries(p).to_vec()).collect();
        FreeComplex { alg: self.alg.clone(), lo: from, generators, diffs }
    }

    /// Largest internal degree `u` for which every piece in degrees `≤ u` is
    /// inside the truncation (or `i64::MAX` for a finite algebra).
    pub fn known_through(&self) -> i64 {
        if self.alg.top_degree().is_some() {
            return i64::MAX;
        }
        let n = self.alg.max_degree() as i64;
        self.generators.iter().flatten().map(|&s| s + n).min().unwrap_or(i64::MAX)
    }

    /// Largest generator degree anywhere in the complex.
    pub fn max_generator_degree(&self) -> Option<i64> {
        self.generators.iter().flatten().max().copied()
    }
}

/// A complex of finite-dimensional graded modules over one algebra,
/// positions `lo, lo+1, …`.
#[derive(Clone, Debug)]
pub struct ModuleComplex<F: Field> {
    alg: Arc<TruncatedAlgebra<F>>,
    lo: i64,
    terms: Vec<GradedModule<F>>,
    diffs: Vec<ModuleMap<F>>,
}

impl<F: Field> ModuleComplex<F> {
    /// `diffs[k]` maps term `k` to term `k + 1`; each is re-stored on its
    /// source window and checked to be a module map.
    pub fn new(alg: Arc<TruncatedAlgebra<F>>, lo: i64, terms: Vec<GradedModule<F>>, diffs: Vec<ModuleMap<F>>) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::DimensionMismatch(format!("{} terms with {} differentials", terms.len(), diffs.len())));
        }
        let diffs: Vec<ModuleMap<F>> = diffs
            .iter()
            .enumerate()
            .map(|(k, d)| d.on_window(&terms[k], &terms[k + 1]))
            .collect();
        for (k, d) in diffs.iter().enumerate() {
            if !terms[k].is_homomorphism(&terms[k + 1], d) {
                return Err(Error::DimensionMismatch(format!("differential at position {} is not a module map", lo + k as i64)));
            }
        }
        Ok(ModuleComplex { alg, lo, terms, diffs })
    }

    pub(crate) fn new_unchecked(alg: Arc<TruncatedAlgebra<F>>, lo: i64, terms: Vec<GradedModule<F>>, diffs: Vec<ModuleMap<F>>) -> Self {
        ModuleComplex { alg, lo, terms, diffs }
    }

    /// `M` concentrated in position 0.
    pub fn single(m: &GradedModule<F>) -> Self {
        ModuleComplex { alg: m.algebra().clone(), lo: 0, terms: vec![m.clone()], diffs: vec![] }
    }

    pub fn zero(alg: Arc<TruncatedAlgebra<F>>) -> Self {
        ModuleComplex { alg, lo: 0, terms: vec![], diffs: vec![] }
    }

    pub fn algebra(&self) -> &Arc<TruncatedAlgebra<F>> {
        &self.alg
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, p: i64) -> Option<&GradedModule<F>> {
        if p < self.lo {
            return None;
        }
        self.terms.get((p - self.lo) as usize)
    }

    pub fn terms(&self) -> &[GradedModule<F>] {
        &self.terms
    }

    pub fn differential_map(&self, p: i64) -> Option<&ModuleMap<F>> {
        if p < self.lo {
            return None;
        }
        self.diffs.get((p - self.lo) as usize)
    }

    pub fn dim(&self, p: i64, u: i64) -> usize {
        self.term(p).map_or(0, |t| t.dim(u))
    }

    /// Range of internal degrees carrying any nonzero piece.
    pub fn degree_span(&self) -> Option<(i64, i64)> {
        let nonzero: Vec<&GradedModule<F>> = self.terms.iter().filter(|t| t.total_dim() > 0).collect();
        if nonzero.is_empty() {
            return None;
        }
        let lo = nonzero.iter().map(|t| t.trim().lo()).min().unwrap();
        let hi = nonzero.iter().map(|t| t.trim().hi()).max().unwrap();
        Some((lo, hi))
    }

    /// `d^p` in internal degree `u` (zero where a term vanishes).
    pub fn differential(&self, p: i64, u: i64) -> Matrix<F> {
        let f = self.alg.field().clone();
        let (r, c) = (self.dim(p + 1, u), self.dim(p, u));
        match self.differential_map(p).and_then(|d| d.at(u)) {
            Some(m) if m.rows() == r && m.cols() == c => m.clone(),
            _ => Matrix::zeros(f, r, c),
        }
    }

    pub fn cohomology(&self, degrees: (i64, i64)) -> CohomologyTable {
        let mut map = BTreeMap::new();
        for p in self.lo..=self.hi() {
            for u in degrees.0..=degrees.1 {
                let dim = self.dim(p, u);
                if dim > 0 {
                    map.insert((p, u), homology_dim(dim, &self.differential(p - 1, u), &self.differential(p, u)));
                }
            }
        }
        CohomologyTable::from_map((self.lo, self.hi()), degrees, map)
    }

    pub fn cohomology_all(&self) -> CohomologyTable {
        let span = self.degree_span().unwrap_or((0, 0));
        self.cohomology(span)
    }

    pub fn is_complex(&self) -> bool {
        let Some((a, b)) = self.degree_span() else { return true };
        (self.lo..self.hi()).all(|p| (a..=b).all(|u| self.differential(p + 1, u).mul(&self.differential(p, u)).is_zero()))
    }

    /// `C(l)`, shifting every term.
    pub fn shift(&self, l: i64) -> Self {
        ModuleComplex {
            alg: self.alg.clone(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.shift(l)).collect(),
            diffs: self.diffs.iter().map(|d| ModuleMap { lo: d.lo - l, mats: d.mats.clone() }).collect(),
        }
    }

    /// `Σ^i C`: `(Σ^i C)^p = C^{p+i}`, differential times `(−1)^i`.
    pub fn suspend(&self, i: i64) -> Self {
        let mut c = self.clone();
        c.lo -= i;
        if i.rem_euclid(2) == 1 {
            for d in c.diffs.iter_mut() {
                d.mats = d.mats.iter().map(|m| m.neg()).collect();
            }
        }
        c
    }

    /// Brutal truncation keeping positions `from..=to`.
    pub fn brutal(&self, from: i64, to: i64) -> Self {
        let from = from.max(self.lo);
        let to = to.min(self.hi());
        if to < from {
            return Self::zero(self.alg.clone());
        }
        let terms = (from..=to).map(|p| self.term(p).unwrap().clone()).collect();
        let diffs = (from..to).map(|p| self.differential_map(p).unwrap().clone()).collect();
        ModuleComplex { alg: self.alg.clone(), lo: from, terms, diffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::quadratic::QuadraticPresentation;

    fn poly(g: usize, n: usize) -> Arc<TruncatedAlgebra<PrimeField>> {
        let f = PrimeField::new(101).unwrap();
        Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::polynomial(f, g), n))
    }

    #[test]
    fn multiplication_by_a_variable() {
        // A(−1) --·x1--> A over k[x1, x2]: cohomology A/(x1) in position 1.
        let a = poly(2, 6);
        let f = a.field().clone();
        let x1 = vec![f.one(), f.zero()];
        let c = FreeComplex::new(a.clone(), 0, vec![vec![1], vec![0]], vec![vec![FreeEntry { target: 0, source: 0, elem: x1 }]])
            .unwrap();
        assert!(c.is_complex((0, 5)).unwrap());
        let h = c.cohomology((0, 5)).unwrap();
        for u in 0..=5 {
            assert_eq!(h.get(1, u), 1);
            assert_eq!(h.get(0, u), 0);
        }
        assert!(c.cohomology((0, 7)).is_err());
    }

    #[test]
    fn shifts_and_suspensions_relabel_tables() {
        let a = poly(2, 6);
        let f = a.field().clone();
        let x1 = vec![f.one(), f.zero()];
        let c = FreeComplex::new(a.clone(), 0, vec![vec![1], vec![0]], vec![vec![FreeEntry { target: 0, source: 0, elem: x1 }]])
            .unwrap();
        let h = c.cohomology((0, 4)).unwrap();
        let hs = c.shift(1).suspend(2).cohomology((-1, 3)).unwrap();
        assert!(hs.agrees_with(&h.relabel(-2, -1)));
        assert!(c.suspend(1).is_complex((0, 4)).unwrap());
    }

    #[test]
    fn bad_entry_degree_is_rejected() {
        let a = poly(2, 4);
        let f = a.field().clone();
        let e = FreeEntry { target: 0, source: 0, elem: vec![f.one()] };
        assert!(FreeComplex::new(a, 0, vec![vec![1], vec![0]], vec![vec![e]]).is_err());
    }

    #[test]
    fn table_text_is_aligned() {
        let t = CohomologyTable::from_map((0, 1), (0, 1), BTreeMap::from([((0, 0), 1)]));
        let text = t.to_text();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().all(|l| l.len() == text.lines().next().unwrap().len()));
    }
}
