//! Point schemes of quadratic algebras over prime fields.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, PrimeField};
use crate::quadratic::QuadraticPresentation;

/// A point of `P(V′)`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    pub coords: Vec<u32>,
}

impl ProjPoint {
    pub fn new(field: &PrimeField, coords: &[u32]) -> Result<Self> {
        let p = field.modulus() as u32;
        let reduced: Vec<u32> = coords.iter().map(|&c| c % p).collect();
        let Some(lead) = reduced.iter().copied().find(|&c| c != 0) else {
            return Err(Error::Parse("the zero vector is not a projective point".into()));
        };
        let inv = field.inv(&lead);
        Ok(ProjPoint { coords: reduced.iter().map(|c| field.mul(c, &inv)).collect() })
    }

    /// Parses `a:b:c`.
    pub fn parse(field: &PrimeField, text: &str) -> Result<Self> {
        let coords = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(':')
            .map(|t| field.parse(t.trim()))
            .collect::<Result<Vec<u32>>>()?;
        Self::new(field, &coords)
    }

    /// Every point of `P^{g−1}(F_p)` in sorted order.
    pub fn all(field: &PrimeField, g: usize) -> Vec<ProjPoint> {
        let p = field.modulus() as u32;
        let mut out = Vec::new();
        for lead in 0..g {
            let free = g - lead - 1;
            let count = (p as u64).pow(free as u32);
            for code in 0..count {
                let mut coords = vec![0u32; g];
                coords[lead] = 1;
                let mut c = code;
                for slot in coords[lead + 1..].iter_mut().rev() {
                    *slot = (c % p as u64) as u32;
                    c /= p as u64;
                }
                out.push(ProjPoint { coords });
            }
        }
        out.sort();
        out
    }

    /// A basis of `p⊥ ⊂ A_1`: linear forms vanishing at the point.
    pub fn annihilator(&self, field: &PrimeField) -> Vec<Vec<u32>> {
        let m = crate::linalg::Matrix::from_rows(*field, self.coords.len(), vec![self.coords.clone()]).expect("one row");
        let k = m.kernel_basis();
        (0..k.rows()).map(|r| k.row(r).to_vec()).collect()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(":"))
    }
}

/// `Σ c_{αβ} p_α q_β` for relation row `r`.
fn relation_value(pres: &QuadraticPresentation<PrimeField>, r: usize, p: &ProjPoint, q: &ProjPoint) -> u32 {
    let f = pres.field();
    let g = pres.num_generators();
    let mut acc = 0u32;
    for a in 0..g {
        if p.coords[a] == 0 {
            continue;
        }
        for b in 0..g {
            let c = pres.coeff(r, a, b);
            if *c != 0 && q.coords[b] != 0 {
                acc = f.add(&acc, &f.mul(c, &f.mul(&p.coords[a], &q.coords[b])));
            }
        }
    }
    acc
}

/// Pairs `(p, q)` with every multilinearized relation vanishing, and the
/// map `σ : p ↦ q` when the pairs form the graph of a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointScheme {
    pub modulus: u32,
    pub num_generators: usize,
    pub pairs: Vec<(ProjPoint, ProjPoint)>,
    /// Distinct first coordinates, sorted.
    pub points: Vec<ProjPoint>,
    /// `sigma[i]` is the index of `σ(points[i])`.
    pub sigma: Option<Vec<usize>>,
    pub is_graph: bool,
}

/// Exhaustive search of `P(V′) × P(V′)`, parallel over the first factor.
pub fn enumerate_point_scheme(pres: &QuadraticPresentation<PrimeField>) -> PointScheme {
    let f = *pres.field();
    let g = pres.num_generators();
    let all = ProjPoint::all(&f, g);
    let rels = pres.relation_dim();
    let mut pairs: Vec<(ProjPoint, ProjPoint)> = all
        .par_iter()
        .flat_map_iter(|p| {
            all.iter()
                .filter(|q| (0..rels).all(|r| relation_value(pres, r, p, q) == 0))
                .map(|q| (p.clone(), q.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.sort();
    let mut points: Vec<ProjPoint> = pairs.iter().map(|(p, _)| p.clone()).collect();
    points.dedup();
    let is_graph = points.len() == pairs.len();
    let sigma = if is_graph {
        let image: Option<Vec<usize>> = pairs.iter().map(|(_, q)| points.binary_search(q).ok()).collect();
        image.filter(|img| {
            let mut seen = vec![false; img.len()];
            img.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        })
    } else {
        None
    };
    PointScheme { modulus: f.modulus() as u32, num_generators: g, pairs, points, sigma, is_graph }
}

/// Outcome of [`orbit_length`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum OrbitLength {
    Length(usize),
    ExceedsBound,
}

impl PointScheme {
    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    fn permutation(&self) -> Result<&[usize]> {
        self.sigma.as_deref().ok_or_else(|| {
            Error::NoAutomorphism(if self.is_graph {
                "σ is not a bijection of the scheme".into()
            } else {
                "the scheme is not the graph of a map".into()
            })
        })
    }

    fn require_point(&self, p: &ProjPoint) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::NotAPoint { degree: 1, dim: 0 })
    }

    /// `σ^e(p)` for any integer `e`.
    pub fn sigma_power(&self, p: &ProjPoint, e: i64) -> Result<ProjPoint> {
        let perm = self.permutation()?;
        let mut i = self.require_point(p)?;
        if e >= 0 {
            for _ in 0..e {
                i = perm[i];
            }
        } else {
            let mut inv = vec![0; perm.len()];
            for (a, &b) in perm.iter().enumerate() {
                inv[b] = a;
            }
            for _ in 0..(-e) {
                i = inv[i];
            }
        }
        Ok(self.points[i].clone())
    }

    /// Orbit lengths of `σ^e`, sorted per orbit of the scheme points.
    pub fn orbit_lengths(&self, e: i64) -> Result<Vec<usize>> {
        let perm = self.permutation()?;
        let mut seen = vec![false; perm.len()];
        let mut lengths = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut n = 0;
            let mut p = self.points[start].clone();
            loop {
                seen[self.index_of(&p).expect("scheme point")] = true;
                p = self.sigma_power(&p, e)?;
                n += 1;
                if p == self.points[start] {
                    break;
                }
            }
            lengths.push(n);
        }
        lengths.sort();
        Ok(lengths)
    }
}

/// Least `n ≤ bound` with `(σ^e)^n(p) = p`.
pub fn orbit_length(scheme: &PointScheme, p: &ProjPoint, exponent: i64, bound: usize) -> Result<OrbitLength> {
    scheme.require_point(p)?;
    let mut q = p.clone();
    for n in 1..=bound {
        q = scheme.sigma_power(&q, exponent)?;
        if &q == p {
            return Ok(OrbitLength::Length(n));
        }
    }
    Ok(OrbitLength::ExceedsBound)
}
