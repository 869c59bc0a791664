//! Tails objects and the correspondence between them and stable module
//! classes over the Frobenius side.

use serde::{Deserialize, Serialize};

use crate::bgg::complex::{CohomologyTable, FreeComplex, ModuleComplex};
use crate::bgg::functors::{functor_f, functor_g, BggPair};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::modules::{
    bass_numbers, injective_envelope, minimal_free_resolution, minimal_injective_resolution, module_isomorphic,
    strip_injective_summands, syzygy, trivial, GradedModule, ModuleMap, Verdict,
};

/// A free complex regarded modulo torsion: only cohomology in internal
/// degrees from `cutoff` through `trusted_through` is meaningful.
#[derive(Clone, Debug)]
pub struct TailsObject<F: Field> {
    pub underlying: FreeComplex<F>,
    pub cutoff: i64,
    pub trusted_through: i64,
}

impl<F: Field> TailsObject<F> {
    /// Wraps a complex with the default cutoff `d + 1 + (largest generator
    /// degree)`.
    pub fn new(pair: &BggPair<F>, underlying: FreeComplex<F>) -> Self {
        let cutoff = pair.top as i64 + 1 + underlying.max_generator_degree().unwrap_or(0);
        Self::with_cutoff(underlying, cutoff)
    }

    pub fn with_cutoff(underlying: FreeComplex<F>, cutoff: i64) -> Self {
        let trusted_through = underlying.known_through();
        TailsObject { underlying, cutoff, trusted_through }
    }

    /// `O = π(A)`.
    pub fn structure(pair: &BggPair<F>) -> Self {
        Self::new(pair, FreeComplex::structure(pair.algebra.clone()))
    }

    /// Cohomology over the trusted degrees.
    pub fn cohomology(&self) -> Result<CohomologyTable> {
        if self.trusted_through < self.cutoff {
            return Err(Error::WindowTooSmall(format!(
                "no trusted degrees: cutoff {} exceeds truncation bound {}",
                self.cutoff, self.trusted_through
            )));
        }
        self.underlying.cohomology((self.cutoff, self.trusted_through))
    }

    /// Tables agree on the common trusted degrees.
    pub fn tails_equal(&self, other: &Self) -> Result<bool> {
        let lo = self.cutoff.max(other.cutoff);
        let hi = self.trusted_through.min(other.trusted_through);
        if hi < lo {
            return Err(Error::WindowTooSmall("trusted windows do not overlap".into()));
        }
        let a = self.underlying.cohomology((lo, hi))?;
        let b = other.underlying.cohomology((lo, hi))?;
        Ok(a.entries == b.entries)
    }

    /// `T(l)`.
    pub fn twist(&self, l: i64) -> Self {
        TailsObject {
            underlying: self.underlying.shift(l),
            cutoff: self.cutoff - l,
            trusted_through: self.trusted_through.saturating_sub(l),
        }
    }

    /// `Σ^i T`.
    pub fn suspend(&self, i: i64) -> Self {
        TailsObject { underlying: self.underlying.suspend(i), ..self.clone() }
    }
}

/// Complete cofree resolution `C^{−left} → ⋯ → C^{right−1}` of `M` over the
/// Frobenius side: `C^{−m} = P_{m−1}` from a minimal free resolution (free
/// modules are cofree here), `C^j = I^j` from the minimal injective
/// resolution, spliced through `P_0 ↠ M ↪ I^0`.
pub fn complete_cofree_resolution<F: Field>(
    m: &GradedModule<F>,
    left: usize,
    right: usize,
) -> Result<ModuleComplex<F>> {
    let alg = m.algebra().clone();
    let m = m.trim();
    if m.total_dim() == 0 {
        return Ok(ModuleComplex::zero(alg));
    }
    let free = minimal_free_resolution(&m, left)?;
    let inj = minimal_injective_resolution(&m, right)?;
    let env = injective_envelope(&m)?;
    let mut terms = Vec::new();
    let mut diffs: Vec<ModuleMap<F>> = Vec::new();
    for k in (0..left).rev() {
        terms.push(free.terms[k].clone());
        if k > 0 {
            diffs.push(free.maps[k].clone());
        }
    }
    if left > 0 && right > 0 {
        let p0 = &free.terms[0];
        let to_m = free.maps[0].on_window(p0, &m);
        let emb = env.embedding_on(m.lo(), m.hi(), &m);
        diffs.push(emb.compose(&to_m).on_window(p0, &inj.term_modules[0]));
    }
    for j in 0..right {
        terms.push(inj.term_modules[j].clone());
        if j + 1 < right {
            diffs.push(inj.differentials[j].clone());
        }
    }
    ModuleComplex::new(alg, -(left as i64), terms, diffs)
}

/// `φ(M)`: the tails object of `F(M)`.
///
/// `F` of a complete cofree resolution of `M` agrees with `F(M)` modulo
/// torsion, since `F` of a cofree module has torsion cohomology; the tests
/// compare the two on their common trusted band.
pub fn phi<F: Field>(pair: &BggPair<F>, m: &GradedModule<F>) -> Result<TailsObject<F>> {
    let fm = functor_f(pair, &ModuleComplex::single(&m.trim()))?;
    Ok(TailsObject::new(pair, fm))
}

/// `γ(T)`: apply `G` to the underlying complex, take the cycles `Z^p` in a
/// position `p` past the last cohomology, and return `Ω^p Z^p` without
/// injective summands. The answer is computed at two consecutive positions
/// and must agree.
pub fn gamma<F: Field>(pair: &BggPair<F>, t: &TailsObject<F>) -> Result<GradedModule<F>> {
    let x = &t.underlying;
    if x.is_empty() {
        return Ok(GradedModule::zero(pair.dual.clone()));
    }
    let n = pair.algebra.max_degree() as i64;
    let mut nlo = i64::MAX;
    let mut nhi = i64::MAX;
    for i in x.lo()..=x.hi() {
        let gens = x.generator_degrees(i);
        if let Some(&smin) = gens.iter().min() {
            nlo = nlo.min(i + smin);
            nhi = nhi.min(i + smin + n);
        }
    }
    let nlo = nlo - 1;
    let gx = functor_g(pair, x, (nlo, nhi))?;
    let span = gx.degree_span().unwrap_or((0, 0));
    let table = gx.cohomology(span);
    // Cohomology is reliable at positions nlo+1..=nhi−1.
    let last = table.entries.iter().filter(|e| e.position < nhi).map(|e| e.position).max();
    let Some(last) = last else {
        return Ok(GradedModule::zero(pair.dual.clone()));
    };
    let p = (last + 1).max(0);
    if p + 2 > nhi {
        return Err(Error::WindowTooSmall(format!(
            "G is exact only from position {} but the truncation reaches position {nhi}; raise the base truncation",
            last + 1
        )));
    }
    let representative = |p: i64| -> Result<GradedModule<F>> {
        let term = gx.term(p).expect("position inside G window");
        let (z, _) = term.kernel_of(gx.differential_map(p).expect("differential inside G window"));
        let z = z.trim();
        strip_injective_summands(&syzygy(&z, p as usize)?)
    };
    let first = representative(p)?;
    let second = representative(p + 1)?;
    if module_isomorphic(&first, &second, 32, 0) != Verdict::Yes {
        return Err(Error::WindowTooSmall(format!(
            "γ did not stabilize between positions {p} and {}",
            p + 1
        )));
    }
    Ok(first)
}

/// `dim Hom(O, h^j(T)(ℓ)) = dim h^j(T)_ℓ` for `ℓ` in the requested range.
pub fn tails_hom_dims<F: Field>(t: &TailsObject<F>, j: i64, range: (i64, i64)) -> Result<Vec<usize>> {
    if range.0 < t.cutoff || range.1 > t.trusted_through {
        return Err(Error::WindowTooSmall(format!(
            "requested degrees {}..{} outside the trusted window {}..{}",
            range.0, range.1, t.cutoff, t.trusted_through
        )));
    }
    let table = t.underlying.cohomology(range)?;
    Ok((range.0..=range.1).map(|l| table.get(j, l)).collect())
}

/// Estimated dimension of the support from eventual growth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum SupportDimension {
    Empty,
    Dimension(usize),
    Inconclusive,
}

/// Degree of the eventual Hilbert polynomial: the least `k` such that the
/// last three entries of the `k`-th difference sequence agree (and are
/// nonzero). A zero tail of length three reads as empty support.
pub fn support_dimension(dims: &[usize]) -> SupportDimension {
    if dims.len() < 3 {
        return SupportDimension::Inconclusive;
    }
    if dims[dims.len() - 3..].iter().all(|&d| d == 0) {
        return SupportDimension::Empty;
    }
    let mut seq: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
    for k in 0.. {
        if seq.len() < 3 {
            break;
        }
        let tail = &seq[seq.len() - 3..];
        if tail[0] == tail[1] && tail[1] == tail[2] && tail[0] != 0 {
            return SupportDimension::Dimension(k);
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
    }
    SupportDimension::Inconclusive
}

/// One row of [`bass_support_identity`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassSupportRow {
    pub i: usize,
    pub bass: usize,
    pub tails: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassSupportReport {
    pub rows: Vec<BassSupportRow>,
    pub holds: bool,
}

/// Compares `μ^i(M)` with `Σ_j dim h^j(φM)_{i−j}` for `i` in the range.
pub fn bass_support_identity<F: Field>(
    pair: &BggPair<F>,
    m: &GradedModule<F>,
    range: (usize, usize),
) -> Result<BassSupportReport> {
    bass_support_on(&phi(pair, m)?, m, range)
}

/// The widest range of `i` for which every degree `i − j` needed by
/// [`bass_support_identity`] lies in the trusted window of `t`.
pub fn trusted_identity_range<F: Field>(t: &TailsObject<F>) -> Option<(usize, usize)> {
    let x = &t.underlying;
    let occupied: Vec<i64> = (x.lo()..=x.hi()).filter(|&j| !x.generator_degrees(j).is_empty()).collect();
    let (&jmin, &jmax) = (occupied.first()?, occupied.last()?);
    let lo = (t.cutoff + jmax).max(0);
    let hi = t.trusted_through + jmin;
    (hi >= lo).then_some((lo as usize, hi as usize))
}

/// [`bass_support_identity`] against an already computed `t = φ(M)`.
pub fn bass_support_on<F: Field>(t: &TailsObject<F>, m: &GradedModule<F>, range: (usize, usize)) -> Result<BassSupportReport> {
    let bass = bass_numbers(m, range.1 + 1)?;
    let (plo, phi_hi) = (t.underlying.lo(), t.underlying.hi());
    let mut rows = Vec::new();
    for i in range.0..=range.1 {
        let mut tails = 0;
        for j in plo..=phi_hi {
            let l = i as i64 - j;
            if t.underlying.generator_degrees(j).is_empty() {
                continue;
            }
            if l < t.cutoff || l > t.trusted_through {
                return Err(Error::WindowTooSmall(format!(
                    "degree {l} of position {j} is outside the trusted window {}..{}",
                    t.cutoff, t.trusted_through
                )));
            }
            tails += t.underlying.cohomology((l, l))?.get(j, l);
        }
        rows.push(BassSupportRow { i, bass: bass[i], tails });
    }
    let holds = rows.iter().all(|r| r.bass == r.tails);
    Ok(BassSupportReport { rows, holds })
}

/// Outcome of [`torsion_cohomology_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub truncation: usize,
    pub table: CohomologyTable,
    pub only_in_position_d: bool,
    pub degrees_in_range: bool,
}

impl TorsionReport {
    pub fn passed(&self) -> bool {
        self.only_in_position_d && self.degrees_in_range && !self.table.is_zero()
    }
}

/// Cohomology of `F(L⟨j⟩)`, where `L⟨j⟩` keeps positions `−j..0` of the
/// minimal free resolution of `k` over the Frobenius side. Expected in
/// position `d` only, internal degrees `−d−j..−d`.
pub fn torsion_cohomology_check<F: Field>(pair: &BggPair<F>, j: usize) -> Result<TorsionReport> {
    let d = pair.top as i64;
    let k = trivial(&pair.dual);
    let res = minimal_free_resolution(&k, j + 1)?;
    let terms: Vec<GradedModule<F>> = (0..=j).rev().map(|i| res.terms[i].clone()).collect();
    let diffs: Vec<ModuleMap<F>> = (1..=j).rev().map(|i| res.maps[i].clone()).collect();
    let l = ModuleComplex::new(pair.dual.clone(), -(j as i64), terms, diffs)?;
    let fl = functor_f(pair, &l)?;
    let lo = -d - j as i64 - 1;
    let hi = fl.known_through().min(d + 2);
    let table = fl.cohomology((lo, hi))?;
    let only_in_position_d = table.entries.iter().all(|e| e.position == d);
    let degrees_in_range = table.entries.iter().all(|e| (-d - j as i64..=-d).contains(&e.degree));
    Ok(TorsionReport { truncation: j, table, only_in_position_d, degrees_in_range })
}

/// Least `n ≤ max` with `Σ^n M ≅ M(n)`, with `M` first stripped of
/// injective summands.
pub fn detect_period<F: Field>(m: &GradedModule<F>, max: usize, trials: usize, seed: u64) -> Result<Option<usize>> {
    let m = strip_injective_summands(&m.trim())?;
    if m.total_dim() == 0 {
        return Ok(None);
    }
    let mut cur = m.clone();
    for n in 1..=max {
        cur = strip_injective_summands(&crate::modules::cosyzygy(&cur, 1)?)?;
        if module_isomorphic(&cur, &m.shift(n as i64), trials, seed) == Verdict::Yes {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::modules::{quotient_by_generators, regular};
    use crate::quadratic::QuadraticPresentation;

    fn pair(g: usize, n: usize) -> BggPair<PrimeField> {
        let f = PrimeField::new(101).unwrap();
        BggPair::new(&QuadraticPresentation::polynomial(f, g), n).unwrap()
    }

    #[test]
    fn support_dimension_examples() {
        assert_eq!(support_dimension(&[1, 3, 6, 10, 15, 21]), SupportDimension::Dimension(2));
        assert_eq!(support_dimension(&[1, 1, 1, 1, 1, 1]), SupportDimension::Dimension(0));
        assert_eq!(support_dimension(&[0, 0, 0, 0]), SupportDimension::Empty);
        assert_eq!(support_dimension(&[1, 2]), SupportDimension::Inconclusive);
        assert_eq!(support_dimension(&[1, 5, 2, 9]), SupportDimension::Inconclusive);
    }

    #[test]
    fn complete_resolution_shapes() {
        let p = pair(2, 6);
        let k = trivial(&p.dual);
        let c = complete_cofree_resolution(&k, 3, 4).unwrap();
        assert!(c.is_complex());
        let counts: Vec<usize> = c.terms().iter().map(|t| t.socle_dims().iter().sum()).collect();
        assert_eq!(counts, vec![3, 2, 1, 1, 2, 3, 4]);
        let h = c.cohomology_all();
        assert!(h.restrict((-2, 2), (-20, 20)).is_zero(), "{:?}", h.entries);
        let m = quotient_by_generators(&p.dual, &[0]).unwrap();
        let c = complete_cofree_resolution(&m, 3, 3).unwrap();
        assert!(c.terms().iter().all(|t| t.socle_dims().iter().sum::<usize>() == 1));
        assert!(c.cohomology_all().restrict((-2, 1), (-20, 20)).is_zero());
        let z = complete_cofree_resolution(&GradedModule::zero(p.dual.clone()), 2, 2).unwrap();
        assert!(z.terms().is_empty());
    }

    #[test]
    fn phi_of_k_is_structure_sheaf() {
        let p = pair(3, 8);
        let t = phi(&p, &trivial(&p.dual)).unwrap();
        let h = t.cohomology().unwrap();
        for l in t.cutoff..=t.trusted_through {
            let expected = ((l + 1) * (l + 2) / 2) as usize;
            assert_eq!(h.get(0, l), expected);
        }
        assert!(t.tails_equal(&TailsObject::structure(&p)).unwrap());
    }

    #[test]
    fn phi_of_injective_vanishes_and_shift() {
        let p = pair(2, 10);
        let t = phi(&p, &regular(&p.dual)).unwrap();
        assert!(t.cohomology().unwrap().is_zero());
        let k1 = phi(&p, &trivial(&p.dual).shift(1)).unwrap();
        let expected = TailsObject::structure(&p).twist(-1).suspend(1);
        assert!(k1.tails_equal(&expected).unwrap());
    }

    #[test]
    fn phi_agrees_with_complete_resolution_band() {
        let p = pair(2, 12);
        for m in [trivial(&p.dual), quotient_by_generators(&p.dual, &[0]).unwrap()] {
            let t = phi(&p, &m).unwrap();
            let c = complete_cofree_resolution(&m, 1, 8).unwrap();
            // Keep C^{-1}..C^6; the first dropped term bounds the band.
            let fc = functor_f(&p, &c.brutal(-1, 6)).unwrap();
            let band_hi = -c.term(7).unwrap().trim().hi() - 1;
            let lo = t.cutoff;
            let hi = band_hi.min(t.trusted_through).min(fc.known_through());
            assert!(hi >= lo, "empty band");
            let a = t.underlying.cohomology((lo, hi)).unwrap();
            let b = fc.cohomology((lo, hi)).unwrap();
            assert!(!a.is_zero());
            assert_eq!(a.entries, b.entries);
        }
    }

    #[test]
    fn gamma_round_trips() {
        let p = pair(2, 12);
        let k = trivial(&p.dual);
        let o = TailsObject::structure(&p);
        assert_eq!(module_isomorphic(&gamma(&p, &o).unwrap(), &k, 16, 0), Verdict::Yes);
        let m = quotient_by_generators(&p.dual, &[0]).unwrap();
        let back = gamma(&p, &phi(&p, &m).unwrap()).unwrap();
        assert_eq!(module_isomorphic(&back, &m, 16, 0), Verdict::Yes);
        let twisted = gamma(&p, &o.twist(-1).suspend(1)).unwrap();
        assert_eq!(module_isomorphic(&twisted, &k.shift(1), 16, 0), Verdict::Yes);
    }

    #[test]
    fn torsion_cohomology_d2() {
        let p = pair(2, 10);
        for j in 0..=2 {
            let r = torsion_cohomology_check(&p, j).unwrap();
            assert!(r.passed(), "j = {j}: {:?}", r.table.entries);
        }
        let r = torsion_cohomology_check(&p, 0).unwrap();
        assert_eq!(r.table.entries.len(), 1);
        assert_eq!((r.table.entries[0].position, r.table.entries[0].degree), (2, -2));
    }

    #[test]
    fn bass_support_examples() {
        let p = pair(2, 14);
        let m = quotient_by_generators(&p.dual, &[0]).unwrap();
        let r = bass_support_identity(&p, &m, (4, 7)).unwrap();
        assert!(r.holds, "{:?}", r.rows);
        assert!(r.rows.iter().all(|row| row.bass == 1));
        let r = bass_support_identity(&p, &trivial(&p.dual), (3, 6)).unwrap();
        assert!(r.holds, "{:?}", r.rows);
        assert_eq!(r.rows[0].bass, 4);
        let r = bass_support_identity(&p, &GradedModule::zero(p.dual.clone()), (3, 5)).unwrap();
        assert!(r.rows.iter().all(|row| row.bass == 0 && row.tails == 0));
    }

    #[test]
    fn periods() {
        let p = pair(2, 4);
        let m = quotient_by_generators(&p.dual, &[0]).unwrap();
        assert_eq!(detect_period(&m, 4, 16, 0).unwrap(), Some(1));
        assert_eq!(detect_period(&trivial(&p.dual), 6, 16, 0).unwrap(), None);
    }
}
