//! Point modules, their shift law, and the periodicity of the modules they
//! correspond to on the Frobenius side.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bgg::{cyclic_free_resolution, gamma, BggPair, TailsObject};
use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::modules::{
    bass_numbers, cosyzygy, module_isomorphic, quotient_by_linear_forms, GradedModule, Verdict,
};
use crate::points::scheme::{orbit_length, OrbitLength, PointScheme, ProjPoint};
use crate::quadratic::{QuadraticPresentation, TruncatedAlgebra};

/// `P(p) = A / A·p⊥` over `A` truncated at degree `n`; every piece must be
/// one-dimensional.
pub fn point_module(pres: &QuadraticPresentation<PrimeField>, p: &ProjPoint, n: usize) -> Result<GradedModule<PrimeField>> {
    let alg = Arc::new(TruncatedAlgebra::new(pres, n));
    point_module_over(&alg, p)
}

pub fn point_module_over(alg: &Arc<TruncatedAlgebra<PrimeField>>, p: &ProjPoint) -> Result<GradedModule<PrimeField>> {
    if p.coords.len() != alg.num_generators() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates for {} generators",
            p.coords.len(),
            alg.num_generators()
        )));
    }
    let m = quotient_by_linear_forms(alg, &p.annihilator(alg.field()))?;
    for j in 0..=alg.max_degree() as i64 {
        let dim = m.dim(j);
        if dim != 1 {
            return Err(Error::NotAPoint { degree: j as usize, dim });
        }
    }
    Ok(m)
}

/// `P(p)_{≥1}(1) ≅ P(σ^{2−d} p)` on the common window, with `d` the top
/// degree of the Koszul dual.
pub fn verify_shift_law(
    pres: &QuadraticPresentation<PrimeField>,
    scheme: &PointScheme,
    p: &ProjPoint,
    n: usize,
    d: usize,
) -> Result<bool> {
    let target = scheme.sigma_power(p, 2 - d as i64)?;
    let alg = Arc::new(TruncatedAlgebra::new(pres, n));
    let lhs = point_module_over(&alg, p)?.truncate_below(1).shift(1);
    let rhs = point_module_over(&alg, &target)?;
    Ok(module_isomorphic(&lhs, &rhs, 16, 0) == Verdict::Yes)
}

/// How a [`PeriodReport`]'s period was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodSource {
    /// Only the σ-orbit was computed.
    OrbitPredicted,
    /// The module over the Frobenius side was built and its cosyzygies checked.
    SyzygyVerified,
}

/// Summary of the cosyzygy chain `Σ^i M(p)` against shifts of `M(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyWitness {
    pub module_dims: Vec<usize>,
    pub module_lo: i64,
    /// `(i, j)` with `Σ^i M(p) ≅ M(p)(j)` among the tested pairs.
    pub isomorphisms: Vec<(usize, i64)>,
    /// First `i ≥ 1` with `Σ^i M(p) ≅ M(p)(i)`.
    pub first_period: Option<usize>,
    pub bass_numbers: Vec<usize>,
    pub consistent_with_equal_shifts: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub point: ProjPoint,
    pub orbit: OrbitLength,
    pub source: PeriodSource,
    pub witness: Option<SyzygyWitness>,
    /// Why the transport was not carried out, when it was not.
    pub note: Option<String>,
}

impl PeriodReport {
    /// Orbit prediction and syzygy witness agree (trivially true when only
    /// the orbit was computed).
    pub fn agrees(&self) -> bool {
        match (&self.witness, self.orbit) {
            (Some(w), OrbitLength::Length(n)) => w.first_period == Some(n) && w.consistent_with_equal_shifts,
            (Some(w), OrbitLength::ExceedsBound) => w.first_period.is_none() && w.consistent_with_equal_shifts,
            (None, _) => true,
        }
    }
}

/// `M(p) = γ(π P(p))`, computed from a minimal free resolution of `P(p)`.
pub fn transport_point_module(pair: &BggPair<PrimeField>, p: &ProjPoint) -> Result<GradedModule<PrimeField>> {
    let alg = &pair.algebra;
    point_module_over(alg, p)?;
    let forms = p.annihilator(alg.field());
    let bound = (pair.top as i64 + 1).min(alg.max_degree() as i64);
    let res = cyclic_free_resolution(alg, &forms, pair.top, bound)?;
    gamma(pair, &TailsObject::new(pair, res))
}

/// Predicts the period of `M(p)` from the `σ^{2−d}`-orbit of `p`; when
/// `transport` is set, also builds `M(p)` and checks `Σ^i M(p)` against
/// `M(p)(j)` for `i ≤ min(orbit, bound)` and `|j − i| ≤ 2`.
pub fn predict_period(
    pair: &BggPair<PrimeField>,
    scheme: &PointScheme,
    p: &ProjPoint,
    bound: usize,
    transport: bool,
) -> Result<PeriodReport> {
    let exponent = 2 - pair.top as i64;
    let orbit = orbit_length(scheme, p, exponent, bound)?;
    let mut report = PeriodReport { point: p.clone(), orbit, source: PeriodSource::OrbitPredicted, witness: None, note: None };
    if !transport {
        return Ok(report);
    }
    let m = match transport_point_module(pair, p) {
        Ok(m) => m,
        Err(Error::WindowTooSmall(msg)) => {
            report.note = Some(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let steps = match orbit {
        OrbitLength::Length(n) => n,
        OrbitLength::ExceedsBound => bound,
    };
    let mut isomorphisms = Vec::new();
    let mut first_period = None;
    let mut cur = m.clone();
    for i in 1..=steps {
        cur = cosyzygy(&cur, 1)?;
        for j in (i as i64 - 2)..=(i as i64 + 2) {
            if module_isomorphic(&cur, &m.shift(j), 32, 0) == Verdict::Yes {
                isomorphisms.push((i, j));
                if j == i as i64 && first_period.is_none() {
                    first_period = Some(i);
                }
            }
        }
        if first_period.is_some() {
            break;
        }
    }
    let bass = bass_numbers(&m, steps.max(2) + 1)?;
    let consistent = isomorphisms.iter().all(|&(i, j)| i as i64 == j);
    report.source = PeriodSource::SyzygyVerified;
    report.witness = Some(SyzygyWitness {
        module_dims: m.piece_dims().to_vec(),
        module_lo: m.lo(),
        isomorphisms,
        first_period,
        bass_numbers: bass,
        consistent_with_equal_shifts: consistent,
    });
    Ok(report)
}
