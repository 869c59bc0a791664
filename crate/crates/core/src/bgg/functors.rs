//! The functors `F` (modules over the Frobenius side to free complexes) and
//! `G` (free complexes to complexes of cofree modules), and the `RHom(k, −)`
//! tables they are compared with.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bgg::complex::{homology_dim, CohomologyTable, FreeComplex, FreeEntry, ModuleComplex};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::modules::{regular_dual, require_frobenius, GradedModule, ModuleMap};
use crate::quadratic::{QuadraticPresentation, TruncatedAlgebra};

/// A quadratic algebra `A` (truncated) together with the Frobenius algebra
/// on the other side of the correspondence: the opposite of `A!`, which
/// pairs generator `x_α` with generator `y_α`.
#[derive(Clone, Debug)]
pub struct BggPair<F: Field> {
    pub algebra: Arc<TruncatedAlgebra<F>>,
    pub dual: Arc<TruncatedAlgebra<F>>,
    /// Top degree of the dual (the `d` with `(A!)′ ≅ A!(d)`).
    pub top: usize,
}

impl<F: Field> BggPair<F> {
    pub fn new(pres: &QuadraticPresentation<F>, max_degree: usize) -> Result<Self> {
        let g = pres.num_generators();
        let dual = Arc::new(TruncatedAlgebra::new(&pres.bgg_dual(), g + 1));
        let top = require_frobenius(&dual)?;
        let algebra = Arc::new(TruncatedAlgebra::new(pres, max_degree));
        Ok(BggPair { algebra, dual, top })
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn num_generators(&self) -> usize {
        self.algebra.num_generators()
    }

    /// `(A!)′`, the cogenerator on the Frobenius side.
    pub fn cogenerator(&self) -> GradedModule<F> {
        regular_dual(&self.dual).expect("the dual is finite")
    }

    fn check_dual_module(&self, m: &GradedModule<F>) -> Result<()> {
        let other = m.algebra();
        if Arc::ptr_eq(other, &self.dual) || other.presentation().same_relations(self.dual.presentation()) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch("module is not over the Frobenius side of this pair".into()))
        }
    }

    fn check_free_complex(&self, x: &FreeComplex<F>) -> Result<()> {
        let other = x.algebra();
        if Arc::ptr_eq(other, &self.algebra) || other.presentation().same_relations(self.algebra.presentation()) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch("complex is not over the base algebra of this pair".into()))
        }
    }

    /// `f ↦ f·y_α` on `(A!)′`, from degree `−k` to `−k+1`.
    fn cogenerator_right_action(&self, k: i64, alpha: usize) -> Matrix<F> {
        let f = self.field().clone();
        let dim = |n: i64| self.dual.dim(n).unwrap_or(0);
        if k <= 0 || k > self.top as i64 {
            return Matrix::zeros(f, dim(k - 1), dim(k));
        }
        self.dual.left_gen((k - 1) as usize, alpha).transpose()
    }
}

/// Kronecker product with the first factor as the outer index.
pub(crate) fn kron<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let f = a.field().clone();
    let mut out = Matrix::zeros(f.clone(), a.rows() * b.rows(), a.cols() * b.cols());
    for r1 in 0..a.rows() {
        for c1 in 0..a.cols() {
            let x = a.get(r1, c1);
            if f.is_zero(x) {
                continue;
            }
            for r2 in 0..b.rows() {
                for c2 in 0..b.cols() {
                    let y = b.get(r2, c2);
                    if !f.is_zero(y) {
                        out.set(r1 * b.rows() + r2, c1 * b.cols() + c2, f.mul(x, y));
                    }
                }
            }
        }
    }
    out
}

/// Per position of `F(C)`: the `(term, internal degree, dimension)` blocks
/// whose basis vectors become generators, in order.
fn f_blocks<F: Field>(c: &ModuleComplex<F>, p: i64) -> Vec<(i64, i64, usize)> {
    (c.lo()..=c.hi())
        .filter_map(|j| {
            let i = p - j;
            let d = c.dim(j, i);
            (d > 0).then_some((j, i, d))
        })
        .collect()
}

/// `F(C)`: the generator set of position `p` is `⊕_{i+j=p} (C^j)_i` placed
/// in degree `−i`; the differential is `∂_C + (−1)^j Σ_α x_α ⊗ y_α`.
pub fn functor_f<F: Field>(pair: &BggPair<F>, c: &ModuleComplex<F>) -> Result<FreeComplex<F>> {
    if let Some(t) = c.terms().first() {
        pair.check_dual_module(t)?;
    }
    let f = pair.field().clone();
    let g = pair.num_generators();
    let Some((dlo, dhi)) = c.degree_span() else {
        return Ok(FreeComplex::zero(pair.algebra.clone()));
    };
    let (plo, phi) = (c.lo() + dlo, c.hi() + dhi);
    let blocks: Vec<Vec<(i64, i64, usize)>> = (plo..=phi).map(|p| f_blocks(c, p)).collect();
    let generators: Vec<Vec<i64>> = blocks
        .iter()
        .map(|b| b.iter().flat_map(|&(_, i, d)| std::iter::repeat(-i).take(d)).collect())
        .collect();
    let offset = |bl: &[(i64, i64, usize)], j: i64| -> Option<usize> {
        let mut off = 0;
        for &(jj, _, d) in bl {
            if jj == j {
                return Some(off);
            }
            off += d;
        }
        None
    };
    let mut diffs = Vec::new();
    for k in 0..blocks.len().saturating_sub(1) {
        let (src, tgt) = (&blocks[k], &blocks[k + 1]);
        let mut entries = Vec::new();
        let mut src_off = 0;
        for &(j, i, d) in src {
            let sign_neg = j.rem_euclid(2) == 1;
            if let Some(t_off) = offset(tgt, j + 1) {
                let dmat = c.differential(j, i);
                for b in 0..d {
                    for r in 0..dmat.rows() {
                        let v = dmat.get(r, b);
                        if !f.is_zero(v) {
                            entries.push(FreeEntry { target: t_off + r, source: src_off + b, elem: vec![v.clone()] });
                        }
                    }
                }
            }
            if let Some(t_off) = offset(tgt, j) {
                let term = c.term(j).expect("term in range");
                let acts: Vec<Matrix<F>> = (0..g).map(|a| term.action(a, i)).collect();
                for b in 0..d {
                    for r in 0..term.dim(i + 1) {
                        let elem: Vec<F::Elem> = acts
                            .iter()
                            .map(|m| {
                                let v = m.get(r, b).clone();
                                if sign_neg {
                                    f.neg(&v)
                                } else {
                                    v
                                }
                            })
                            .collect();
                        if elem.iter().any(|x| !f.is_zero(x)) {
                            entries.push(FreeEntry { target: t_off + r, source: src_off + b, elem });
                        }
                    }
                }
            }
            src_off += d;
        }
        diffs.push(entries);
    }
    FreeComplex::new(pair.algebra.clone(), plo, generators, diffs)
}

/// Block layout of `G(X)^n`: for each position `i` of `X`, the block
/// `(A!)′(q) ⊗ X^i_q` with `q = n − i`.
struct GTerm<F: Field> {
    blocks: Vec<(i64, i64, usize)>,
    module: GradedModule<F>,
}

fn g_term<F: Field>(pair: &BggPair<F>, x: &FreeComplex<F>, n: i64) -> Result<GTerm<F>> {
    let cog = pair.cogenerator();
    let mut blocks = Vec::new();
    let mut parts = Vec::new();
    for i in x.lo()..=x.hi() {
        let q = n - i;
        if !x.known(i, q) {
            return Err(Error::WindowTooSmall(format!(
                "G needs position {i} of its input in degree {q}, beyond the truncation (extend the base algebra to degree {})",
                q - x.generator_degrees(i).iter().min().copied().unwrap_or(0)
            )));
        }
        let d = x.dim(i, q);
        blocks.push((i, q, d));
        for _ in 0..d {
            parts.push(cog.shift(q));
        }
    }
    let module = GradedModule::direct_sum_all(pair.dual.clone(), &parts);
    Ok(GTerm { blocks, module })
}

/// The degree-`u` offsets of the blocks of a `G` term.
fn g_offsets<F: Field>(pair: &BggPair<F>, t: &GTerm<F>, u: i64) -> Vec<usize> {
    let mut off = 0;
    t.blocks
        .iter()
        .map(|&(_, q, d)| {
            let o = off;
            off += d * pair.dual.dim(-(u + q)).unwrap_or(0);
            o
        })
        .collect()
}

/// `G(X)` on positions `positions.0..=positions.1`. Term `n` is
/// `⊕_i (A!)′(n−i) ⊗ X^i_{n−i}`; the differential is
/// `id ⊗ ∂_X + (−1)^i Σ_α (·y_α) ⊗ x_α`.
pub fn functor_g<F: Field>(pair: &BggPair<F>, x: &FreeComplex<F>, positions: (i64, i64)) -> Result<ModuleComplex<F>> {
    pair.check_free_complex(x)?;
    let f = pair.field().clone();
    let g = pair.num_generators();
    if x.is_empty() || positions.1 < positions.0 {
        return Ok(ModuleComplex::zero(pair.dual.clone()));
    }
    let terms: Vec<GTerm<F>> = (positions.0..=positions.1).map(|n| g_term(pair, x, n)).collect::<Result<_>>()?;
    let mut diffs = Vec::new();
    for k in 0..terms.len() - 1 {
        let (src, tgt) = (&terms[k], &terms[k + 1]);
        let m = &src.module;
        let mut mats = Vec::new();
        for u in m.lo()..=m.hi() {
            let mut mat = Matrix::zeros(f.clone(), tgt.module.dim(u), m.dim(u));
            let (so, to) = (g_offsets(pair, src, u), g_offsets(pair, tgt, u));
            for (b, &(i, q, d)) in src.blocks.iter().enumerate() {
                let k_deg = -(u + q);
                let dim_d = pair.dual.dim(k_deg).unwrap_or(0);
                if d == 0 || dim_d == 0 {
                    continue;
                }
                // Horizontal: block (i, q) → block (i+1, q) of the next term.
                if let Some(tb) = tgt.blocks.iter().position(|&(ii, qq, _)| ii == i + 1 && qq == q) {
                    let dx = x.differential(i, q)?;
                    if !dx.is_zero() {
                        let block = kron(&dx, &Matrix::identity(f.clone(), dim_d));
                        mat.set_block(to[tb], so[b], &block);
                    }
                }
                // Vertical: block (i, q) → block (i, q+1).
                if let Some(tb) = tgt.blocks.iter().position(|&(ii, qq, _)| ii == i && qq == q + 1) {
                    let rows = tgt.blocks[tb].2 * pair.dual.dim(-(u + q + 1)).unwrap_or(0);
                    if rows == 0 {
                        continue;
                    }
                    let mut block = Matrix::zeros(f.clone(), rows, d * dim_d);
                    for a in 0..g {
                        let la = x.action(i, a, q)?;
                        let ra = pair.cogenerator_right_action(k_deg, a);
                        block = block.add(&kron(&la, &ra));
                    }
                    if i.rem_euclid(2) == 1 {
                        block = block.neg();
                    }
                    mat.set_block(to[tb], so[b], &block);
                }
            }
            mats.push(mat);
        }
        diffs.push(ModuleMap { lo: m.lo(), mats });
    }
    let modules = terms.into_iter().map(|t| t.module).collect();
    Ok(ModuleComplex::new_unchecked(pair.dual.clone(), positions.0, modules, diffs))
}

/// `dim h^t Hom_A(L, X(m))` for the Koszul resolution `L` of `k`: the
/// piece in position `t` is `⊕_{s+q=t} A!_q ⊗ X^s_{q+m}`, with
/// differential `∂_X + (−1)^s Σ_α (y_α·) ⊗ x_α`. Entries are keyed by
/// `(t, m)`.
pub fn rhom_k_table<F: Field>(
    pair: &BggPair<F>,
    x: &FreeComplex<F>,
    positions: (i64, i64),
    twists: (i64, i64),
) -> Result<CohomologyTable> {
    pair.check_free_complex(x)?;
    let f = pair.field().clone();
    let g = pair.num_generators();
    let top = pair.top as i64;
    let bdim = |q: i64| pair.dual.dim(q).unwrap_or(0);
    // Blocks (s, q, dim X^s_{q+m}) of position t.
    let blocks = |t: i64, m: i64| -> Result<Vec<(i64, i64, usize)>> {
        let mut out = Vec::new();
        for s in x.lo()..=x.hi() {
            let q = t - s;
            if !(0..=top).contains(&q) {
                continue;
            }
            if !x.known(s, q + m) {
                return Err(Error::WindowTooSmall(format!("Hom side needs position {s} in degree {}", q + m)));
            }
            out.push((s, q, x.dim(s, q + m)));
        }
        Ok(out)
    };
    let size = |bl: &[(i64, i64, usize)]| bl.iter().map(|&(_, q, d)| bdim(q) * d).sum::<usize>();
    let offset_of = |bl: &[(i64, i64, usize)], s: i64, q: i64| -> Option<usize> {
        let mut off = 0;
        for &(ss, qq, d) in bl {
            if ss == s && qq == q {
                return Some(off);
            }
            off += bdim(qq) * d;
        }
        None
    };
    // The left multiplication on A! is right multiplication on its opposite.
    let diff = |t: i64, m: i64| -> Result<Matrix<F>> {
        let (src, tgt) = (blocks(t, m)?, blocks(t + 1, m)?);
        let mut mat = Matrix::zeros(f.clone(), size(&tgt), size(&src));
        let mut off = 0;
        for &(s, q, d) in &src {
            let w = bdim(q);
            if let Some(to) = offset_of(&tgt, s + 1, q) {
                let dx = x.differential(s, q + m)?;
                mat.set_block(to, off, &kron(&Matrix::identity(f.clone(), w), &dx));
            }
            if let Some(to) = offset_of(&tgt, s, q + 1) {
                let rows = bdim(q + 1) * x.dim(s, q + 1 + m);
                if rows > 0 && w * d > 0 {
                    let mut block = Matrix::zeros(f.clone(), rows, w * d);
                    for a in 0..g {
                        let ry = pair.dual.right_gen(q as usize, a);
                        block = block.add(&kron(ry, &x.action(s, a, q + m)?));
                    }
                    if s.rem_euclid(2) == 1 {
                        block = block.neg();
                    }
                    mat.set_block(to, off, &block);
                }
            }
            off += w * d;
        }
        Ok(mat)
    };
    let mut map = BTreeMap::new();
    for t in positions.0..=positions.1 {
        for m in twists.0..=twists.1 {
            let dim = size(&blocks(t, m)?);
            if dim == 0 {
                continue;
            }
            let h = homology_dim(dim, &diff(t - 1, m)?, &diff(t, m)?);
            map.insert((t, m), h);
        }
    }
    Ok(CohomologyTable::from_map(positions, twists, map))
}

/// Side-by-side comparison of `h^i(GX)_j` with
/// `h^{i+j+d} Hom(L, X(−j−d))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub g_side: CohomologyTable,
    pub rhom_side: CohomologyTable,
    pub holds: bool,
}

pub fn cohomology_identity<F: Field>(
    pair: &BggPair<F>,
    x: &FreeComplex<F>,
    positions: (i64, i64),
    degrees: (i64, i64),
) -> Result<IdentityReport> {
    let d = pair.top as i64;
    let gx = functor_g(pair, x, (positions.0 - 1, positions.1 + 1))?;
    let g_side = gx.cohomology(degrees).restrict(positions, degrees);
    let mut map = BTreeMap::new();
    for i in positions.0..=positions.1 {
        for j in degrees.0..=degrees.1 {
            let t = i + j + d;
            let m = -j - d;
            let table = rhom_k_table(pair, x, (t, t), (m, m))?;
            map.insert((i, j), table.get(t, m));
        }
    }
    let rhom_side = CohomologyTable::from_map(positions, degrees, map);
    let holds = g_side.entries == rhom_side.entries;
    Ok(IdentityReport { g_side, rhom_side, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::modules::builtins::{quotient_by_generators, trivial};

    fn pair(g: usize, n: usize) -> BggPair<PrimeField> {
        let f = PrimeField::new(101).unwrap();
        BggPair::new(&QuadraticPresentation::polynomial(f, g), n).unwrap()
    }

    #[test]
    fn f_of_cogenerator_is_k() {
        for g in [2, 3] {
            let p = pair(g, 8);
            let fc = functor_f(&p, &ModuleComplex::single(&p.cogenerator())).unwrap();
            assert!(fc.is_complex((0, 6)).unwrap());
            let h = fc.cohomology((-2, 6)).unwrap();
            assert_eq!(h.entries.len(), 1, "{:?}", h.entries);
            assert_eq!(h.get(0, 0), 1);
        }
    }

    #[test]
    fn f_of_zero_is_zero() {
        let p = pair(2, 4);
        assert!(functor_f(&p, &ModuleComplex::zero(p.dual.clone())).unwrap().is_empty());
    }

    #[test]
    fn f_shift_law() {
        let p = pair(2, 9);
        let family = [
            trivial(&p.dual),
            p.cogenerator(),
            quotient_by_generators(&p.dual, &[0]).unwrap(),
            crate::modules::regular(&p.dual),
        ];
        for m in &family {
            let base = functor_f(&p, &ModuleComplex::single(m)).unwrap().cohomology((-3, 5)).unwrap();
            for i in -2..=2 {
                let shifted = functor_f(&p, &ModuleComplex::single(&m.shift(i))).unwrap();
                let h = shifted.cohomology((-3 + i, 5 + i).min((-3 + i, 5 + i))).unwrap();
                // F(M(i)) ≅ Σ^i F(M)(−i): entry (p, u) of F(M) moves to (p − i, u + i).
                assert!(h.agrees_with(&base.relabel(-i, i)), "shift {i}");
            }
        }
    }

    #[test]
    fn g_of_a_resolves_k() {
        for g in [2, 3] {
            let p = pair(g, 8);
            let ga = functor_g(&p, &FreeComplex::structure(p.algebra.clone()), (-1, 5)).unwrap();
            assert!(ga.is_complex());
            for (n, term) in (0..=5).zip(ga.terms().iter().skip(1)) {
                assert_eq!(term.socle_dims().iter().sum::<usize>(), p.algebra.dims()[n]);
            }
            let h = ga.cohomology_all().restrict((-1, 4), (-20, 20));
            assert_eq!(h.entries.len(), 1, "{:?}", h.entries);
            assert_eq!(h.get(0, 0), 1);
        }
    }

    #[test]
    fn g_identity_on_small_family() {
        let p = pair(2, 10);
        let a = p.algebra.clone();
        let x = FreeComplex::free_module(a.clone(), &[1]).direct_sum(&FreeComplex::structure(a.clone()).suspend(1));
        let r = cohomology_identity(&p, &x, (-2, 3), (-4, 2)).unwrap();
        assert!(r.holds, "{:?}\n{:?}", r.g_side, r.rhom_side);
        let k_res = FreeComplex::structure(a);
        let r = cohomology_identity(&p, &k_res, (-1, 3), (-4, 1)).unwrap();
        assert!(r.holds);
    }
}
