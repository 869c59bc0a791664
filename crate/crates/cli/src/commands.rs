//! The subcommands. Each returns its rendered report.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use ncbgg::bgg::{
    bass_support_on, gamma, koszulness_probe, phi, support_dimension, trusted_identity_range, BassSupportReport, BggPair,
    SupportDimension,
};
use ncbgg::io::{complex_dump, parse_module, parse_presentation, scheme_dump, write_presentation, AnyPresentation};
use ncbgg::linalg::{Field, PrimeField};
use ncbgg::modules::{
    minimal_injective_resolution, module_isomorphic, require_frobenius, strip_injective_summands, GradedModule, Verdict,
};
use ncbgg::points::{enumerate_point_scheme, orbit_length, predict_period, OrbitLength, ProjPoint};
use ncbgg::quadratic::{QuadraticPresentation, TruncatedAlgebra};
use ncbgg::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::table::Table;
use crate::{Common, Failure, Format, Outcome};

type CmdResult = Result<Outcome, Failure>;

macro_rules! over_field {
    ($any:expr, $p:ident => $body:expr) => {
        match $any {
            AnyPresentation::Prime($p) => $body,
            AnyPresentation::Rational($p) => $body,
        }
    };
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn located(path: &Path, e: Error) -> Failure {
    let error = match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::DimensionMismatch(m) => Error::DimensionMismatch(format!("{}: {m}", path.display())),
        other => other,
    };
    error.into()
}

fn load_presentation(path: &Path) -> Result<AnyPresentation, Failure> {
    parse_presentation(&read(path)?).map_err(|e| located(path, e))
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn done(common: &Common, json: Value, table: impl FnOnce() -> String) -> CmdResult {
    let text = match common.format {
        Format::Json => json_text(&json),
        Format::Table => table(),
    };
    Ok(Outcome { text, inconclusive: false })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn relation_rows<F: Field>(p: &QuadraticPresentation<F>) -> Vec<Vec<String>> {
    let f = p.field();
    (0..p.relation_dim()).map(|r| p.relations().row(r).iter().map(|c| f.format(c)).collect()).collect()
}

pub fn dual(input: &Path, common: &Common) -> CmdResult {
    over_field!(load_presentation(input)?, p => {
        let d = p.koszul_dual();
        let text = match common.format {
            Format::Json => write_presentation(&d),
            Format::Table => {
                let g = d.num_generators();
                let dims = TruncatedAlgebra::new(&d, g + 1).dims().to_vec();
                let mut t = Table::new(&["relation", "coefficients"]);
                for (r, row) in relation_rows(&d).iter().enumerate() {
                    t.row(vec![r.to_string(), row.join(" ")]);
                }
                format!("generators: {}\ndims through degree {}: {}\n{}", d.generators().join(" "), g + 1, join(&dims), t.render())
            }
        };
        Ok(Outcome { text, inconclusive: false })
    })
}

pub fn truncate(input: &Path, n: usize, common: &Common) -> CmdResult {
    over_field!(load_presentation(input)?, p => {
        let alg = TruncatedAlgebra::new(&p, n);
        let dims = alg.dims().to_vec();
        let top = alg.top_degree();
        let json = json!({ "generators": p.generators(), "trunc": n, "dims": dims, "top_degree": top });
        done(common, json, || {
            let mut t = Table::new(&["degree", "dim"]);
            for (i, d) in dims.iter().enumerate() {
                t.row(vec![i.to_string(), d.to_string()]);
            }
            let top = top.map_or("not reached".to_string(), |d| d.to_string());
            format!("{}top degree: {top}\n", t.render())
        })
    })
}

pub fn probe(input: &Path, n: usize, common: &Common) -> CmdResult {
    over_field!(load_presentation(input)?, p => {
        let r = koszulness_probe(&p, n)?;
        let consistent = r.reciprocity_ok && r.koszul_complex_exact_up_to == Some(n as i64);
        let verdict = if consistent { "consistent-with-koszul" } else { "not-koszul" };
        let json = json!({ "trunc": n, "verdict": verdict, "report": r });
        done(common, json, || {
            let mut t = Table::new(&["degree", "dim A", "dim A!"]);
            for i in 0..=n {
                t.row(vec![i.to_string(), r.dims[i].to_string(), r.dual_dims[i].to_string()]);
            }
            let bad = r.first_bad_degree.map_or("none".to_string(), |d| d.to_string());
            let exact = r.koszul_complex_exact_up_to.map_or("nowhere".to_string(), |d| d.to_string());
            format!("{}reciprocity fails first in degree: {bad}\nKoszul complex exact through degree: {exact}\nverdict: {verdict}\n", t.render())
        })
    })
}

fn frobenius_side<F: Field>(b: &QuadraticPresentation<F>) -> Result<Arc<TruncatedAlgebra<F>>, Failure> {
    let alg = Arc::new(TruncatedAlgebra::new(b, b.num_generators() + 1));
    require_frobenius(&alg).map_err(|e| Failure {
        error: e,
        hint: Some("--dual-input must present a finite-dimensional Frobenius algebra such as an exterior algebra".into()),
    })?;
    Ok(alg)
}

fn module_summary<F: Field>(m: &GradedModule<F>) -> Value {
    json!({ "window": [m.lo(), m.hi()], "dims": m.piece_dims() })
}

pub fn resolve(input: &Path, dual_input: &Path, steps: usize, common: &Common) -> CmdResult {
    let module_text = read(input)?;
    over_field!(load_presentation(dual_input)?, b => resolve_over(&b, input, &module_text, steps, common))
}

fn resolve_over<F: Field>(b: &QuadraticPresentation<F>, path: &Path, text: &str, steps: usize, common: &Common) -> CmdResult {
    let alg = frobenius_side(b)?;
    let m = parse_module(text, &alg).map_err(|e| located(path, e))?.trim();
    let res = minimal_injective_resolution(&m, steps)?;
    let core = strip_injective_summands(&m)?;
    let period = if core.total_dim() == 0 {
        json!({ "kind": "trivial" })
    } else {
        match ncbgg::bgg::detect_period(&m, steps, common.trials, common.seed)? {
            Some(n) => json!({ "kind": "period", "value": n }),
            None => json!({ "kind": "none-within", "value": steps }),
        }
    };
    let cosyzygies: Vec<Value> = res
        .syzygies
        .iter()
        .enumerate()
        .map(|(i, s)| json!({ "step": i + 1, "window": [s.lo(), s.hi()], "dims": s.piece_dims() }))
        .collect();
    let json = json!({
        "module": module_summary(&m),
        "bass_numbers": res.numbers,
        "socle_degrees": res.terms,
        "cosyzygies": cosyzygies,
        "period": period,
    });
    done(common, json.clone(), || {
        let mut t = Table::new(&["i", "mu^i", "socle degrees", "cosyzygy window", "cosyzygy dims"]);
        for i in 0..res.numbers.len() {
            let s = &res.syzygies[i];
            t.row(vec![
                i.to_string(),
                res.numbers[i].to_string(),
                join(&res.terms[i]),
                if s.is_zero() { "zero".into() } else { format!("{}..{}", s.lo(), s.hi()) },
                join(s.piece_dims()),
            ]);
        }
        let period = match json["period"]["kind"].as_str() {
            Some("trivial") => "trivial (injective module)".to_string(),
            Some("period") => format!("{}", json["period"]["value"]),
            _ => format!("none within {steps} steps"),
        };
        format!("{}period: {period}\n", t.render())
    })
}

pub fn bgg(input: &Path, dual_input: &Path, trunc: usize, window: Option<(i64, i64)>, common: &Common) -> CmdResult {
    let module_text = read(input)?;
    over_field!(load_presentation(dual_input)?, b => {
        frobenius_side(&b)?;
        let a = b.bgg_dual();
        let attempt = |n: usize| -> CmdResult {
            let pair = BggPair::new(&a, n)?;
            let m = parse_module(&module_text, &pair.dual).map_err(|e| located(input, e))?;
            bgg_report(&pair, &m, window, common)
        };
        match attempt(trunc) {
            Err(Failure { error: Error::WindowTooSmall(msg), .. }) => {
                let enough = (trunc + 1..=trunc + 12).find(|&n| attempt(n).is_ok());
                let hint = enough.map(|n| format!("increase --trunc to ≥ {n}"));
                Err(Failure { error: Error::WindowTooSmall(msg), hint })
            }
            other => other,
        }
    })
}

fn bgg_report<F: Field>(pair: &BggPair<F>, m: &GradedModule<F>, window: Option<(i64, i64)>, common: &Common) -> CmdResult {
    let t = phi(pair, m)?;
    // An empty φ(M) is trusted everywhere; show as many degrees as the truncation.
    let default_hi = t.trusted_through.min(t.cutoff + pair.algebra.max_degree() as i64);
    let (lo, hi) = window.unwrap_or((t.cutoff, default_hi));
    if lo < t.cutoff || hi > t.trusted_through {
        return Err(Error::WindowTooSmall(format!(
            "degrees {lo}..{hi} leave the trusted window {}..{} of φ(M)",
            t.cutoff, t.trusted_through
        ))
        .into());
    }
    if window.is_none() && hi - lo < 2 {
        return Err(Error::WindowTooSmall(format!(
            "only degrees {lo}..{hi} of φ(M) are trusted; the support estimate needs at least three"
        ))
        .into());
    }
    let table = t.underlying.cohomology((lo, hi))?;
    let tail_dims: Vec<usize> = (lo..=hi).map(|l| table.entries.iter().filter(|e| e.degree == l).map(|e| e.dim).sum()).collect();
    let support = support_dimension(&tail_dims);

    let stripped = strip_injective_summands(&m.trim())?;
    let back = gamma(pair, &t)?;
    let verdict = module_isomorphic(&back, &stripped, common.trials, common.seed);

    let identity = if t.underlying.is_empty() || (t.underlying.lo()..=t.underlying.hi()).all(|j| t.underlying.generator_degrees(j).is_empty()) {
        BassSupportReport { rows: Vec::new(), holds: true }
    } else {
        let range = trusted_identity_range(&t).ok_or_else(|| {
            Error::WindowTooSmall(format!("no Bass degree has all of its φ-side degrees inside {}..{}", t.cutoff, t.trusted_through))
        })?;
        bass_support_on(&t, m, range)?
    };

    let json = json!({
        "module": module_summary(m),
        "cutoff": t.cutoff,
        "trusted_through": t.trusted_through,
        "window": [lo, hi],
        "phi_cohomology": table.entries,
        "tail_dims": tail_dims,
        "support_dimension": support,
        "round_trip": { "verdict": verdict, "gamma": module_summary(&back) },
        "identity": identity,
        "phi_complex": complex_dump(&t.underlying),
    });
    let text = match common.format {
        Format::Json => json_text(&json),
        Format::Table => {
            let positions: Vec<i64> = {
                let mut p: Vec<i64> = table.entries.iter().map(|e| e.position).collect();
                p.dedup();
                p.sort();
                p.dedup();
                p
            };
            let mut headers = vec!["degree".to_string()];
            headers.extend(positions.iter().map(|p| format!("h^{p}")));
            let hdr: Vec<&str> = headers.iter().map(String::as_str).collect();
            let mut tab = Table::new(&hdr);
            for l in lo..=hi {
                let mut row = vec![l.to_string()];
                row.extend(positions.iter().map(|&p| table.get(p, l).to_string()));
                tab.row(row);
            }
            let support = match support {
                SupportDimension::Empty => "empty".to_string(),
                SupportDimension::Dimension(d) => d.to_string(),
                SupportDimension::Inconclusive => "inconclusive".to_string(),
            };
            let mut id = Table::new(&["i", "mu^i", "sum_j h^j(phi M)_(i-j)"]);
            for r in &identity.rows {
                id.row(vec![r.i.to_string(), r.bass.to_string(), r.tails.to_string()]);
            }
            format!(
                "phi(M) cohomology, trusted degrees {} {}\n{}support dimension: {support}\ngamma(phi(M)) vs M: {}\n\nBass identity (holds: {})\n{}",
                t.cutoff,
                if t.trusted_through == i64::MAX { "onwards".to_string() } else { format!("to {}", t.trusted_through) },
                tab.render(),
                verdict_word(verdict),
                identity.holds,
                id.render()
            )
        }
    };
    Ok(Outcome { text, inconclusive: verdict == Verdict::Inconclusive })
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "isomorphic",
        Verdict::No => "not isomorphic",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn orbit_word(o: OrbitLength, bound: usize) -> String {
    match o {
        OrbitLength::Length(n) => format!("period {n}"),
        OrbitLength::ExceedsBound => format!("aperiodic up to {bound}"),
    }
}

pub fn points(input: &Path, bound: usize, point: Option<&str>, trunc: usize, common: &Common) -> CmdResult {
    let pres: QuadraticPresentation<PrimeField> = match load_presentation(input)? {
        AnyPresentation::Prime(p) => p,
        AnyPresentation::Rational(_) => {
            return Err(Error::Precondition("point schemes are enumerated over prime fields only".into()).into())
        }
    };
    let field = *pres.field();
    let scheme = enumerate_point_scheme(&pres);
    let dual = Arc::new(TruncatedAlgebra::new(&pres.bgg_dual(), pres.num_generators() + 1));
    let top = require_frobenius(&dual).ok();
    let mut notes: Vec<String> = Vec::new();
    if scheme.sigma.is_none() {
        notes.push(if scheme.is_graph {
            "σ is not a bijection; orbit operations disabled".into()
        } else {
            "the point scheme is not the graph of a map; orbit operations disabled".into()
        });
    }
    if top.is_none() {
        notes.push("the dual side is not Frobenius; periods are not predicted".into());
    }
    let mut cycle_type: BTreeMap<usize, usize> = BTreeMap::new();
    if let Ok(lengths) = scheme.orbit_lengths(1) {
        for l in lengths {
            *cycle_type.entry(l).or_default() += 1;
        }
    }
    let exponent = top.map(|d| 2 - d as i64);
    let periods: Vec<(String, OrbitLength)> = match (exponent, &scheme.sigma) {
        (Some(e), Some(_)) => scheme
            .points
            .iter()
            .map(|p| Ok((p.label(), orbit_length(&scheme, p, e, bound)?)))
            .collect::<Result<_, Error>>()?,
        _ => Vec::new(),
    };
    let report = match point {
        None => None,
        Some(text) => {
            let p = ProjPoint::parse(&field, text)?;
            if scheme.sigma.is_none() {
                return Err(Error::NoAutomorphism(notes.join("; ")).into());
            }
            if scheme.index_of(&p).is_none() {
                return Err(Error::Precondition(format!("{} is not a point of the point scheme", p.label())).into());
            }
            let pair = BggPair::new(&pres, trunc)?;
            Some(predict_period(&pair, &scheme, &p, bound, true)?)
        }
    };
    let cycles: Vec<Value> = cycle_type.iter().map(|(l, c)| json!({ "length": l, "count": c })).collect();
    let json = json!({
        "field": field.modulus(),
        "scheme_size": scheme.points.len(),
        "is_graph": scheme.is_graph,
        "sigma_cycle_type": cycles,
        "dual_top_degree": top,
        "period_exponent": exponent,
        "bound": bound,
        "periods": periods.iter().map(|(p, o)| json!({ "point": p, "orbit": o })).collect::<Vec<_>>(),
        "scheme": scheme_dump(&scheme),
        "point_report": report.as_ref().map(|r| json!({ "report": r, "agrees": r.agrees() })),
        "notes": notes,
    });
    done(common, json, || {
        let mut out = format!("point scheme over F_{}: {} points\n", field.modulus(), scheme.points.len());
        if !cycle_type.is_empty() {
            let parts: Vec<String> = cycle_type.iter().map(|(l, c)| format!("{l}^{c}")).collect();
            out.push_str(&format!("sigma cycle type: {}\n", parts.join(" ")));
        }
        for n in &notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(e) = exponent {
            out.push_str(&format!("periods from the orbits of sigma^{e}\n"));
        }
        let mut t = Table::new(&["point", "prediction"]);
        for (p, o) in &periods {
            t.row(vec![p.clone(), orbit_word(*o, bound)]);
        }
        out.push_str(&t.render());
        if let Some(r) = &report {
            out.push_str(&format!("\n{}: {}\n", r.point.label(), orbit_word(r.orbit, bound)));
            match &r.witness {
                Some(w) => {
                    let found = w.first_period.map_or("none".to_string(), |n| n.to_string());
                    out.push_str(&format!(
                        "transported module dims {} from degree {}\nsyzygy period: {found}\nBass numbers: {}\nagrees with orbit: {}\n",
                        join(&w.module_dims),
                        w.module_lo,
                        join(&w.bass_numbers),
                        r.agrees()
                    ));
                }
                None => out.push_str(&format!("transport not carried out: {}\n", r.note.clone().unwrap_or_default())),
            }
        }
        out
    })
}

