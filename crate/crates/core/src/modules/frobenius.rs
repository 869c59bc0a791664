//! Injective and projective resolutions over a finite-dimensional graded
//! Frobenius algebra, and the invariants read off from them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::modules::builtins::{cofree_module, free_module, regular, regular_dual};
use crate::modules::graded::{ActionTable, GradedModule, ModuleMap};
use crate::modules::hom::{hom_basis, module_isomorphic, Verdict};
use crate::quadratic::TruncatedAlgebra;

/// Top degree of a finite algebra with one-dimensional left and right
/// socles (a connected graded algebra with these properties is Frobenius).
pub fn require_frobenius<F: Field>(alg: &Arc<TruncatedAlgebra<F>>) -> Result<usize> {
    let top = alg.top_degree().ok_or(Error::NotFinite { degree: alg.max_degree() })?;
    let left = regular(alg).socle_dims().iter().sum::<usize>();
    let right = regular_dual(alg)?.radical_top_dim();
    if left != 1 || right != 1 || alg.dims()[top] != 1 {
        return Err(Error::UnsupportedAlgebra(format!(
            "algebra with Hilbert function {:?} is not Frobenius (socle dimension {left})",
            alg.dims()
        )));
    }
    Ok(top)
}

impl<F: Field> GradedModule<F> {
    /// `dim M/rad M`.
    pub(crate) fn radical_top_dim(&self) -> usize {
        self.radical().iter().zip(self.piece_dims()).map(|(r, d)| d - r.cols()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub is_frobenius: bool,
    pub shift: Option<i64>,
    pub verdict: Verdict,
}

/// Tests `A′ ≅ A(d)` as graded left modules, `d` the top degree.
pub fn check_frobenius<F: Field>(alg: &Arc<TruncatedAlgebra<F>>, trials: usize, seed: u64) -> Result<FrobeniusReport> {
    let top = alg.top_degree().ok_or(Error::NotFinite { degree: alg.max_degree() })? as i64;
    let dual = regular_dual(alg)?;
    let shifted = regular(alg).shift(top);
    let verdict = module_isomorphic(&dual, &shifted, trials, seed);
    let is_frobenius = verdict == Verdict::Yes;
    Ok(FrobeniusReport { is_frobenius, shift: is_frobenius.then_some(top), verdict })
}

/// `M′` with `(M′)_j = (M_{−j})′` and transposed actions. The result is a
/// left module over the opposite presentation; it is returned over `alg_op`,
/// which must be a truncation of that presentation (the same algebra when
/// the relations are flip-symmetric). Dualizing twice gives back `M`
/// exactly.
pub fn matlis_dual_over<F: Field>(m: &GradedModule<F>, alg_op: &Arc<TruncatedAlgebra<F>>) -> Result<GradedModule<F>> {
    if !m.is_bounded() {
        return Err(Error::UnsupportedInput("the graded dual needs a bounded module".into()));
    }
    if !alg_op.presentation().same_relations(&m.algebra().presentation().opposite()) {
        return Err(Error::PresentationMismatch("target algebra is not the opposite presentation".into()));
    }
    let g = m.num_generators();
    let dims: Vec<usize> = m.piece_dims().iter().rev().copied().collect();
    let lo = -m.hi();
    let act = (0..dims.len().saturating_sub(1))
        .map(|k| {
            let j = lo + k as i64;
            (0..g).map(|a| m.action(a, -j - 1).transpose()).collect()
        })
        .collect();
    GradedModule::new(alg_op.clone(), lo, dims, act, true)
}

/// [`matlis_dual_over`] over the module's own algebra, for algebras whose
/// relations are flip-symmetric.
pub fn matlis_dual<F: Field>(m: &GradedModule<F>) -> Result<GradedModule<F>> {
    let alg = m.algebra().clone();
    matlis_dual_over(m, &alg)
}

/// An injective envelope `ι: M ↪ I` with `I = ⊕ A′(−t)` over socle degrees.
#[derive(Clone, Debug)]
pub struct Envelope<F: Field> {
    pub socle_degrees: Vec<i64>,
    pub module: GradedModule<F>,
    pub embedding: ModuleMap<F>,
}

/// Builds `ι(m) = (b ↦ λ(b·m))` for a family of functionals `λ` on the
/// socle, one cogenerator per socle basis vector.
pub fn injective_envelope<F: Field>(m: &GradedModule<F>) -> Result<Envelope<F>> {
    let alg = m.algebra().clone();
    let d = require_frobenius(&alg)? as i64;
    if !m.is_bounded() {
        return Err(Error::UnsupportedInput("injective envelopes need a bounded module".into()));
    }
    let f = m.field().clone();
    let socle = m.socle();
    let mut socle_degrees = Vec::new();
    let mut functionals: Vec<(i64, Vec<F::Elem>)> = Vec::new();
    for (k, s) in socle.iter().enumerate() {
        if s.cols() == 0 {
            continue;
        }
        let t = m.lo() + k as i64;
        let left = s.left_inverse().expect("socle basis is independent");
        for r in 0..left.rows() {
            socle_degrees.push(t);
            functionals.push((t, left.row(r).to_vec()));
        }
    }
    let module = cofree_module(&alg, &socle_degrees)?;
    let tables: Vec<ActionTable<F>> = (m.lo()..=m.hi()).map(|u| ActionTable::from_degree(m, u, d as usize)).collect();
    let mats = (m.lo()..=m.hi())
        .map(|u| {
            let table = &tables[(u - m.lo()) as usize];
            let mut mat = Matrix::zeros(f.clone(), module.dim(u), m.dim(u));
            let mut row = 0;
            for (t, lambda) in &functionals {
                let n = t - u;
                if n < 0 || n > d {
                    continue;
                }
                let n = n as usize;
                let lam = Matrix::from_rows(f.clone(), lambda.len(), vec![lambda.clone()]).expect("one row");
                for b in 0..alg.dims()[n] {
                    let entry = lam.mul(table.get_ref(n, b));
                    for c in 0..m.dim(u) {
                        mat.set(row, c, entry.get(0, c).clone());
                    }
                    row += 1;
                }
            }
            debug_assert_eq!(row, module.dim(u));
            mat
        })
        .collect();
    let embedding = ModuleMap { lo: m.lo(), mats };
    Ok(Envelope { socle_degrees, module, embedding })
}

impl<F: Field> Envelope<F> {
    /// The embedding re-expressed on the window of the envelope (zero-padded).
    pub fn embedding_on(&self, lo: i64, hi: i64, source: &GradedModule<F>) -> ModuleMap<F> {
        let f = source.field().clone();
        let mats = (lo..=hi)
            .map(|j| match self.embedding.at(j) {
                Some(m) => m.clone(),
                None => Matrix::zeros(f.clone(), self.module.dim(j), source.dim(j)),
            })
            .collect();
        ModuleMap { lo, mats }
    }
}

/// `coker(ι)` restricted to the envelope's window, with the projection
/// `I → ΣM`.
fn cokernel_of_envelope<F: Field>(m: &GradedModule<F>, env: &Envelope<F>) -> (GradedModule<F>, ModuleMap<F>) {
    let i = &env.module;
    let images: Vec<Matrix<F>> = (i.lo()..=i.hi())
        .map(|j| match env.embedding.at(j) {
            Some(e) => e.column_basis(),
            None => Matrix::zeros(m.field().clone(), i.dim(j), 0),
        })
        .collect();
    let (q, p) = i.quotient(&images);
    (q, p)
}

/// `ΣM = I⁰/M` for the minimal injective envelope.
pub fn first_cosyzygy<F: Field>(m: &GradedModule<F>) -> Result<GradedModule<F>> {
    let env = injective_envelope(m)?;
    Ok(cokernel_of_envelope(m, &env).0.trim())
}

/// Summary of a finite prefix of a minimal (co)resolution.
#[derive(Clone, Debug)]
pub struct ResolutionReport<F: Field> {
    /// Socle degrees (injective side) or generator degrees (free side) per step.
    pub terms: Vec<Vec<i64>>,
    /// Cogenerator or generator counts per step.
    pub numbers: Vec<usize>,
    /// `Σ^{i+1}M` (injective side) or `Ω^{i+1}M` (free side) after step `i`.
    pub syzygies: Vec<GradedModule<F>>,
    /// Differentials `∂^i : I^i → I^{i+1}` (injective side only).
    pub differentials: Vec<ModuleMap<F>>,
    /// Terms `I^i` as modules.
    pub term_modules: Vec<GradedModule<F>>,
}

/// The minimal injective resolution of `M`, `steps` terms deep.
pub fn minimal_injective_resolution<F: Field>(m: &GradedModule<F>, steps: usize) -> Result<ResolutionReport<F>> {
    require_frobenius(m.algebra())?;
    let mut terms = Vec::new();
    let mut numbers = Vec::new();
    let mut syzygies = Vec::new();
    let mut term_modules = Vec::new();
    let mut to_cosyz: Vec<ModuleMap<F>> = Vec::new();
    let mut env_maps: Vec<(Envelope<F>, GradedModule<F>)> = Vec::new();
    let mut current = m.trim();
    for _ in 0..steps {
        let env = injective_envelope(&current)?;
        let (cosyz, proj) = cokernel_of_envelope(&current, &env);
        terms.push(env.socle_degrees.clone());
        numbers.push(env.socle_degrees.len());
        term_modules.push(env.module.clone());
        to_cosyz.push(proj);
        env_maps.push((env, current.clone()));
        let trimmed = cosyz.trim();
        syzygies.push(trimmed.clone());
        current = trimmed;
    }
    // ∂^i = ι_{i+1} ∘ π_i : I^i → ΣM → I^{i+1}.
    let mut differentials = Vec::new();
    for i in 0..steps.saturating_sub(1) {
        let src = &term_modules[i];
        let (env_next, cos) = &env_maps[i + 1];
        let emb = env_next.embedding_on(src.lo(), src.hi(), cos);
        let proj = &to_cosyz[i];
        let f = src.field().clone();
        // proj maps into the untrimmed cokernel, which agrees with `cos`
        // on every degree where `cos` is nonzero.
        let mats = (src.lo()..=src.hi())
            .map(|j| {
                let p = proj.at(j).expect("projection on source window");
                let e = emb.at(j).expect("embedding padded");
                if p.rows() == 0 || e.cols() == 0 {
                    Matrix::zeros(f.clone(), term_modules[i + 1].dim(j), src.dim(j))
                } else {
                    e.mul(p)
                }
            })
            .collect();
        differentials.push(ModuleMap { lo: src.lo(), mats });
    }
    Ok(ResolutionReport { terms, numbers, syzygies, differentials, term_modules })
}

/// Bass numbers `μ^0, …, μ^{steps−1}`.
pub fn bass_numbers<F: Field>(m: &GradedModule<F>, steps: usize) -> Result<Vec<usize>> {
    Ok(minimal_injective_resolution(m, steps)?.numbers)
}

/// `Σ^i M`, free of injective summands for `i ≥ 1`.
pub fn cosyzygy<F: Field>(m: &GradedModule<F>, i: usize) -> Result<GradedModule<F>> {
    if i == 0 {
        return Ok(m.clone());
    }
    let mut cur = m.trim();
    for _ in 0..i {
        cur = first_cosyzygy(&cur)?;
    }
    strip_injective_summands(&cur)
}

/// Removes a maximal injective (equivalently free) direct summand. With
/// `ω` spanning the top degree `d` of the algebra, a complement `U` of
/// `ker(ω·)` generates a free summand, and the result is `M / A·U`.
pub fn strip_injective_summands<F: Field>(m: &GradedModule<F>) -> Result<GradedModule<F>> {
    let alg = m.algebra().clone();
    let d = require_frobenius(&alg)?;
    if !m.is_bounded() {
        return Err(Error::UnsupportedInput("stripping summands needs a bounded module".into()));
    }
    let f = m.field().clone();
    let gens: Vec<Matrix<F>> = (m.lo()..=m.hi())
        .map(|j| {
            let omega = m.act_basis(d, 0, j);
            if omega.rows() == 0 {
                return Matrix::zeros(f.clone(), m.dim(j), 0);
            }
            // Columns of the transpose's row space complement the kernel.
            let row_space = omega.row_basis();
            let comp = row_space.transpose();
            if comp.cols() == 0 {
                Matrix::zeros(f.clone(), m.dim(j), 0)
            } else {
                comp
            }
        })
        .collect();
    if gens.iter().all(|g| g.cols() == 0) {
        return Ok(m.trim());
    }
    let span = m.span_closure(&gens);
    Ok(m.quotient(&span).0.trim())
}

/// A projective cover `P = ⊕ A(−s) ↠ M`.
#[derive(Clone, Debug)]
pub struct Cover<F: Field> {
    pub generator_degrees: Vec<i64>,
    pub module: GradedModule<F>,
    pub surjection: ModuleMap<F>,
    /// Lifts of a basis of `M/rad M`, as (degree, vector in `M_degree`).
    pub lifts: Vec<(i64, Vec<F::Elem>)>,
}

pub fn projective_cover<F: Field>(m: &GradedModule<F>) -> Result<Cover<F>> {
    let alg = m.algebra().clone();
    let top = alg.top_degree().ok_or(Error::NotFinite { degree: alg.max_degree() })?;
    if !m.is_bounded() {
        return Err(Error::UnsupportedInput("projective covers need a bounded module".into()));
    }
    let f = m.field().clone();
    let rad = m.radical();
    let mut lifts = Vec::new();
    for (k, r) in rad.iter().enumerate() {
        let j = m.lo() + k as i64;
        let q = crate::linalg::quotient_basis(&r.transpose(), m.dim(j))?;
        for c in 0..q.dim() {
            lifts.push((j, q.section.col(c)));
        }
    }
    let degrees: Vec<i64> = lifts.iter().map(|(s, _)| *s).collect();
    let module = free_module(&alg, &degrees);
    let tables: Vec<ActionTable<F>> = (m.lo()..=m.hi()).map(|u| ActionTable::from_degree(m, u, top)).collect();
    let mats = (module.lo()..=module.hi())
        .map(|u| {
            let mut mat = Matrix::zeros(f.clone(), m.dim(u), module.dim(u));
            let mut col = 0;
            for (s, v) in &lifts {
                let n = u - s;
                if n < 0 || n as usize > top {
                    continue;
                }
                let n = n as usize;
                let table = &tables[(s - m.lo()) as usize];
                for b in 0..alg.dims()[n] {
                    let img = table.get_ref(n, b).mul_vec(v);
                    for (r, x) in img.into_iter().enumerate() {
                        mat.set(r, col, x);
                    }
                    col += 1;
                }
            }
            mat
        })
        .collect();
    let surjection = ModuleMap { lo: module.lo(), mats };
    Ok(Cover { generator_degrees: degrees, module, surjection, lifts })
}

/// `ΩM = ker(P ↠ M)` with its inclusion into the cover.
pub fn first_syzygy<F: Field>(m: &GradedModule<F>) -> Result<(GradedModule<F>, Cover<F>, ModuleMap<F>)> {
    let cover = projective_cover(m)?;
    let (k, inc) = cover.module.kernel_of(&cover.surjection);
    Ok((k, cover, inc))
}

/// `Ω^i M`, stripped of injective summands for `i ≥ 1`.
pub fn syzygy<F: Field>(m: &GradedModule<F>, i: usize) -> Result<GradedModule<F>> {
    if i == 0 {
        return Ok(m.clone());
    }
    let mut cur = m.trim();
    for _ in 0..i {
        cur = first_syzygy(&cur)?.0.trim();
    }
    strip_injective_summands(&cur)
}

/// A minimal free resolution `⋯ → P_1 → P_0 → M`, with each generator of
/// `P_{i+1}` recorded as its image in `P_i` (a vector in the degree of that
/// generator).
#[derive(Clone, Debug)]
pub struct FreeResolution<F: Field> {
    pub generator_degrees: Vec<Vec<i64>>,
    pub terms: Vec<GradedModule<F>>,
    /// `images[i][g]`: image in `P_i` of generator `g` of `P_{i+1}`.
    pub images: Vec<Vec<Vec<F::Elem>>>,
    /// `maps[0] : P_0 → M` and `maps[i] : P_i → P_{i−1}`.
    pub maps: Vec<ModuleMap<F>>,
}

pub fn minimal_free_resolution<F: Field>(m: &GradedModule<F>, steps: usize) -> Result<FreeResolution<F>> {
    let mut generator_degrees = Vec::new();
    let mut terms = Vec::new();
    let mut images = Vec::new();
    let mut maps = Vec::new();
    let mut current = m.trim();
    let mut inclusion: Option<ModuleMap<F>> = None;
    for _ in 0..steps {
        let (kernel, cover, inc) = first_syzygy(&current)?;
        generator_degrees.push(cover.generator_degrees.clone());
        terms.push(cover.module.clone());
        if let Some(prev) = &inclusion {
            images.push(
                cover
                    .lifts
                    .iter()
                    .map(|(s, v)| prev.at(*s).expect("lift degree inside the previous term").mul_vec(v))
                    .collect(),
            );
            maps.push(prev.compose(&cover.surjection).on_window(&cover.module, &terms[terms.len() - 2]));
        } else {
            maps.push(cover.surjection.clone());
        }
        inclusion = Some(inc);
        current = kernel;
    }
    Ok(FreeResolution { generator_degrees, terms, images, maps })
}

/// Graded pieces of `Ext^i(k, M)`: `dims[t] = dim Ext^i(k, M(t))`, nonzero
/// entries only, computed from a minimal free resolution of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub degree: usize,
    pub dims: std::collections::BTreeMap<i64, usize>,
}

impl ExtTable {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

/// Offsets of each generator's block inside `P_u = ⊕_g A_{u − s_g}`.
fn block_offsets<F: Field>(alg: &TruncatedAlgebra<F>, degrees: &[i64], u: i64) -> Vec<Option<(usize, usize)>> {
    let mut off = 0;
    degrees
        .iter()
        .map(|&s| {
            let n = u - s;
            match alg.dim(n) {
                Some(d) if d > 0 => {
                    let r = Some((off, n as usize));
                    off += d;
                    r
                }
                _ => None,
            }
        })
        .collect()
}

/// `δ^i : ⊕_{g∈P_i} M_{s_g+t} → ⊕_{g'∈P_{i+1}} M_{s_{g'}+t}` from the
/// resolution data.
fn hom_differential<F: Field>(res: &FreeResolution<F>, i: usize, m: &GradedModule<F>, t: i64) -> Matrix<F> {
    let alg = m.algebra();
    let f = m.field().clone();
    let src = &res.generator_degrees[i];
    let tgt = &res.generator_degrees[i + 1];
    let src_off: Vec<usize> = src
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += m.dim(s + t);
            Some(o)
        })
        .collect();
    let tgt_off: Vec<usize> = tgt
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += m.dim(s + t);
            Some(o)
        })
        .collect();
    let rows: usize = tgt.iter().map(|&s| m.dim(s + t)).sum();
    let cols: usize = src.iter().map(|&s| m.dim(s + t)).sum();
    let mut out = Matrix::zeros(f, rows, cols);
    for (gp, &sp) in tgt.iter().enumerate() {
        let image = &res.images[i][gp];
        let blocks = block_offsets(alg, src, sp);
        for (g, &s) in src.iter().enumerate() {
            let Some((off, n)) = blocks[g] else { continue };
            let elem = &image[off..off + alg.dims()[n]];
            if elem.iter().all(|x| m.field().is_zero(x)) || m.dim(s + t) == 0 || m.dim(sp + t) == 0 {
                continue;
            }
            let act = m.act_element(n, elem, s + t);
            out.set_block(tgt_off[gp], src_off[g], &act);
        }
    }
    out
}

/// `Ext^i(k, M(t))` for all shifts `t`, through a minimal free resolution of
/// `k` and the complex `Hom_0(P_•, M(t))`.
pub fn ext_k<F: Field>(m: &GradedModule<F>, i: usize) -> Result<ExtTable> {
    let alg = m.algebra().clone();
    require_frobenius(&alg)?;
    let mut dims = std::collections::BTreeMap::new();
    let m = m.trim();
    if m.total_dim() == 0 {
        return Ok(ExtTable { degree: i, dims });
    }
    let k = crate::modules::builtins::trivial(&alg);
    let res = minimal_free_resolution(&k, i + 2)?;
    let degs = &res.generator_degrees[i];
    if degs.is_empty() {
        return Ok(ExtTable { degree: i, dims });
    }
    let (smin, smax) = (*degs.iter().min().unwrap(), *degs.iter().max().unwrap());
    for t in (m.lo() - smax)..=(m.hi() - smin) {
        let cdim: usize = degs.iter().map(|&s| m.dim(s + t)).sum();
        if cdim == 0 {
            continue;
        }
        let out = hom_differential(&res, i, &m, t);
        let kernel = cdim - out.rank();
        let image = if i == 0 { 0 } else { hom_differential(&res, i - 1, &m, t).rank() };
        let h = kernel - image;
        if h > 0 {
            dims.insert(t, h);
        }
    }
    Ok(ExtTable { degree: i, dims })
}

fn flatten_map<F: Field>(map: &ModuleMap<F>, m: &GradedModule<F>, n: &GradedModule<F>) -> Vec<F::Elem> {
    let f = m.field();
    let mut v = Vec::new();
    for j in m.lo()..=m.hi() {
        let (r, c) = (n.dim(j), m.dim(j));
        match map.at(j) {
            Some(mat) if mat.rows() == r && mat.cols() == c => v.extend_from_slice(mat.data()),
            _ => v.extend(std::iter::repeat(f.zero()).take(r * c)),
        }
    }
    v
}

/// `dim` of degree-0 maps `M → N` modulo those factoring through an
/// injective module (equivalently through the injective envelope of `M`).
pub fn stable_hom<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> Result<usize> {
    let m = m.trim();
    let all = hom_basis(&m, n);
    if all.is_empty() {
        return Ok(0);
    }
    let env = injective_envelope(&m)?;
    let through: Vec<Vec<F::Elem>> = hom_basis(&env.module, n)
        .iter()
        .map(|g| flatten_map(&g.compose(&env.embedding), &m, n))
        .collect();
    let len = flatten_map(&all[0], &m, n).len();
    let rank = Matrix::from_rows(m.field().clone(), len, through)?.rank();
    Ok(all.len() - rank)
}
