//! JSON file formats: presentations, modules, free complexes and point
//! schemes.
//!
//! Coefficients are read as JSON integers or as strings (`"3"`, `"-1/2"`).
//! Prime-field coefficients are written back as integers in `0..p`,
//! rational ones as `"a/b"` strings.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bgg::{FreeComplex, FreeEntry};
use crate::error::{Error, Result};
use crate::linalg::{Field, FieldSpec, Matrix, PrimeField, Rationals};
use crate::modules::{quotient_by_generators, regular, regular_dual, trivial, GradedModule};
use crate::points::PointScheme;
use crate::quadratic::{QuadraticPresentation, TruncatedAlgebra};

/// A presentation read from a file, over whichever field the file names.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPresentation {
    Prime(QuadraticPresentation<PrimeField>),
    Rational(QuadraticPresentation<Rationals>),
}

impl AnyPresentation {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyPresentation::Prime(p) => p.field().spec(),
            AnyPresentation::Rational(_) => FieldSpec::Rational,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FieldFile {
    Prime(u32),
    Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationIn {
    field: FieldFile,
    generators: Vec<String>,
    relations: Vec<Vec<Value>>,
}

/// Serialized form of a presentation (relations in reduced echelon form).
#[derive(Serialize)]
pub struct PresentationOut {
    field: FieldFile,
    generators: Vec<String>,
    relations: Vec<Vec<Value>>,
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: line {}, column {}: {e}", e.line(), e.column()))
}

fn parse_coeff<F: Field>(field: &F, v: &Value, at: &str) -> Result<F::Elem> {
    let located = |e: Error| Error::Parse(format!("{at}: {e}"));
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => Err(Error::Parse(format!("{at}: coefficient {n} is not an integer; write fractions as \"a/b\""))),
        },
        Value::String(s) => field.parse(s).map_err(located),
        other => Err(Error::Parse(format!("{at}: expected a number or a string, found {other}"))),
    }
}

fn coeff_json<F: Field>(field: &F, a: &F::Elem) -> Value {
    let text = field.format(a);
    match field.spec() {
        FieldSpec::Prime(_) => Value::from(text.parse::<i64>().expect("prime field elements format as integers")),
        FieldSpec::Rational => Value::String(text),
    }
}

fn build_presentation<F: Field>(field: F, generators: Vec<String>, relations: &[Vec<Value>]) -> Result<QuadraticPresentation<F>> {
    let g = generators.len();
    let mut rows = Vec::with_capacity(relations.len());
    for (r, row) in relations.iter().enumerate() {
        if row.len() != g * g {
            return Err(Error::Parse(format!(
                "relations[{r}]: expected {} coefficients for {g} generators, found {}",
                g * g,
                row.len()
            )));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(c, v)| parse_coeff(&field, v, &format!("relations[{r}][{c}]")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    let m = Matrix::from_rows(field.clone(), g * g, rows)?;
    QuadraticPresentation::new(field, generators, m)
}

/// Reads a presentation file.
pub fn parse_presentation(text: &str) -> Result<AnyPresentation> {
    let raw: PresentationIn = serde_json::from_str(text).map_err(|e| json_error("presentation", e))?;
    match raw.field {
        FieldFile::Prime(p) => {
            let f = PrimeField::new(p)?;
            Ok(AnyPresentation::Prime(build_presentation(f, raw.generators, &raw.relations)?))
        }
        FieldFile::Rational => Ok(AnyPresentation::Rational(build_presentation(Rationals, raw.generators, &raw.relations)?)),
    }
}

pub fn presentation_out<F: Field>(p: &QuadraticPresentation<F>) -> PresentationOut {
    let f = p.field();
    let field = match f.spec() {
        FieldSpec::Prime(q) => FieldFile::Prime(q),
        FieldSpec::Rational => FieldFile::Rational,
    };
    let relations = (0..p.relation_dim())
        .map(|r| p.relations().row(r).iter().map(|a| coeff_json(f, a)).collect())
        .collect();
    PresentationOut { field, generators: p.generators().to_vec(), relations }
}

/// JSON for a presentation with one relation per line, ending in a newline.
pub fn write_presentation<F: Field>(p: &QuadraticPresentation<F>) -> String {
    let out = presentation_out(p);
    let list = |items: Vec<String>| format!("[{}]", items.join(", "));
    let compact = |v: &Value| serde_json::to_string(v).expect("values serialize");
    let rows: Vec<String> = out.relations.iter().map(|r| format!("    {}", list(r.iter().map(compact).collect()))).collect();
    let relations = if rows.is_empty() { "[]".to_string() } else { format!("[\n{}\n  ]", rows.join(",\n")) };
    let field = serde_json::to_string(&out.field).expect("field serializes");
    let generators = list(out.generators.iter().map(|g| compact(&Value::from(g.as_str()))).collect());
    format!("{{\n  \"field\": {field},\n  \"generators\": {generators},\n  \"relations\": {relations}\n}}\n")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleIn {
    builtin: Option<String>,
    #[serde(default)]
    generators: Vec<usize>,
    #[serde(default)]
    shift: i64,
    window: Option<(i64, i64)>,
    dims: Option<Vec<usize>>,
    actions: Option<Vec<Vec<Vec<Vec<Value>>>>>,
}

/// Explicit serialized module: `actions[k][α]` is the matrix (list of
/// rows) of generator `α` from degree `window.0 + k` to the next.
#[derive(Serialize)]
pub struct ModuleOut {
    window: (i64, i64),
    dims: Vec<usize>,
    actions: Vec<Vec<Vec<Vec<Value>>>>,
}

fn parse_matrix<F: Field>(field: &F, rows: &[Vec<Value>], shape: (usize, usize), at: &str) -> Result<Matrix<F>> {
    if rows.len() != shape.0 {
        return Err(Error::Parse(format!("{at}: expected {} rows, found {}", shape.0, rows.len())));
    }
    let mut data = Vec::with_capacity(shape.0 * shape.1);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != shape.1 {
            return Err(Error::Parse(format!("{at}[{r}]: expected {} entries, found {}", shape.1, row.len())));
        }
        for (c, v) in row.iter().enumerate() {
            data.push(parse_coeff(field, v, &format!("{at}[{r}][{c}]"))?);
        }
    }
    Matrix::new(field.clone(), shape.0, shape.1, data)
}

/// Reads a module file over `alg`: either a builtin or explicit data.
pub fn parse_module<F: Field>(text: &str, alg: &Arc<TruncatedAlgebra<F>>) -> Result<GradedModule<F>> {
    let raw: ModuleIn = serde_json::from_str(text).map_err(|e| json_error("module", e))?;
    let m = match (&raw.builtin, &raw.dims) {
        (Some(_), Some(_)) => return Err(Error::Parse("module: give either \"builtin\" or \"dims\", not both".into())),
        (None, None) => return Err(Error::Parse("module: missing \"builtin\" or \"dims\"".into())),
        (Some(name), None) => match name.as_str() {
            "k" => trivial(alg),
            "regular" => regular(alg),
            "regular-dual" => regular_dual(alg)?,
            "quotient-by-generators" => quotient_by_generators(alg, &raw.generators)?,
            other => return Err(Error::Parse(format!("module: unknown builtin {other:?}"))),
        },
        (None, Some(dims)) => {
            let lo = raw.window.map_or(0, |w| w.0);
            if let Some((wlo, whi)) = raw.window {
                if whi - wlo + 1 != dims.len() as i64 {
                    return Err(Error::Parse(format!("module: window {wlo}:{whi} does not match {} piece dims", dims.len())));
                }
            }
            let actions = raw.actions.unwrap_or_default();
            let f = alg.field();
            let act = actions
                .iter()
                .enumerate()
                .map(|(k, per)| {
                    if k + 1 >= dims.len() {
                        return Err(Error::Parse(format!("actions[{k}]: no degree above the window for this action")));
                    }
                    per.iter()
                        .enumerate()
                        .map(|(a, rows)| parse_matrix(f, rows, (dims[k + 1], dims[k]), &format!("actions[{k}][{a}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            GradedModule::new(alg.clone(), lo, dims.clone(), act, true)?
        }
    };
    Ok(m.shift(raw.shift))
}

pub fn module_out<F: Field>(m: &GradedModule<F>) -> ModuleOut {
    let f = m.field();
    let actions = (m.lo()..m.lo() + m.piece_dims().len().saturating_sub(1) as i64)
        .map(|j| {
            (0..m.num_generators())
                .map(|a| m.action(a, j).row_vecs().iter().map(|r| r.iter().map(|x| coeff_json(f, x)).collect()).collect())
                .collect()
        })
        .collect();
    ModuleOut { window: (m.lo(), m.hi()), dims: m.piece_dims().to_vec(), actions }
}

/// One nonzero differential entry: the algebra element (of `degree`) by
/// which generator `source` of position `position` maps to generator
/// `target` of position `position + 1`, in the monomial-section basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDump {
    pub position: i64,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    pub coeffs: Vec<Value>,
}

/// Serialized [`FreeComplex`]: the shift multiset of each position and all
/// differential entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub field: String,
    pub lo: i64,
    pub generators: Vec<Vec<i64>>,
    pub entries: Vec<EntryDump>,
}

pub fn complex_dump<F: Field>(x: &FreeComplex<F>) -> ComplexDump {
    let f = x.algebra().field();
    let mut entries = Vec::new();
    if !x.is_empty() {
        for p in x.lo()..x.hi() {
            for e in x.entries(p) {
                let degree = x.generator_degrees(p)[e.source] - x.generator_degrees(p + 1)[e.target];
                entries.push(EntryDump {
                    position: p,
                    source: e.source,
                    target: e.target,
                    degree,
                    coeffs: e.elem.iter().map(|c| coeff_json(f, c)).collect(),
                });
            }
        }
    }
    let generators = if x.is_empty() { Vec::new() } else { (x.lo()..=x.hi()).map(|p| x.generator_degrees(p).to_vec()).collect() };
    let field = match f.spec() {
        FieldSpec::Prime(p) => format!("F_{p}"),
        FieldSpec::Rational => "Q".into(),
    };
    ComplexDump { field, lo: x.lo(), generators, entries }
}

/// Rebuilds a complex from its dump over `alg`.
pub fn complex_from_dump<F: Field>(dump: &ComplexDump, alg: &Arc<TruncatedAlgebra<F>>) -> Result<FreeComplex<F>> {
    if dump.generators.is_empty() {
        return Ok(FreeComplex::zero(alg.clone()));
    }
    let f = alg.field();
    let mut diffs: Vec<Vec<FreeEntry<F>>> = vec![Vec::new(); dump.generators.len() - 1];
    for (k, e) in dump.entries.iter().enumerate() {
        let slot = e.position - dump.lo;
        if slot < 0 || slot as usize >= diffs.len() {
            return Err(Error::Parse(format!("entries[{k}]: position {} has no outgoing differential", e.position)));
        }
        let elem = e
            .coeffs
            .iter()
            .enumerate()
            .map(|(c, v)| parse_coeff(f, v, &format!("entries[{k}].coeffs[{c}]")))
            .collect::<Result<Vec<_>>>()?;
        diffs[slot as usize].push(FreeEntry { target: e.target, source: e.source, elem });
    }
    FreeComplex::new(alg.clone(), dump.lo, dump.generators.clone(), diffs)
}

/// Serialized point scheme with σ's cycle decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeDump {
    pub field: u32,
    pub points: Vec<String>,
    pub sigma: Option<Vec<usize>>,
    pub is_graph: bool,
    pub orbits: Option<Vec<Vec<usize>>>,
}

pub fn scheme_dump(s: &PointScheme) -> SchemeDump {
    let orbits = s.sigma.as_ref().map(|perm| {
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = perm[i];
            }
            out.push(cycle);
        }
        out
    });
    SchemeDump {
        field: s.modulus,
        points: s.points.iter().map(|p| p.label()).collect(),
        sigma: s.sigma.clone(),
        is_graph: s.is_graph,
        orbits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::enumerate_point_scheme;

    #[test]
    fn presentation_round_trip() {
        let text = r#"{"field": {"prime": 7}, "generators": ["x", "y"], "relations": [[0, 1, -1, 0]]}"#;
        let AnyPresentation::Prime(p) = parse_presentation(text).unwrap() else { panic!("prime field") };
        assert!(p.same_relations(&QuadraticPresentation::polynomial(PrimeField::new(7).unwrap(), 2)));
        let again = parse_presentation(&write_presentation(&p)).unwrap();
        assert_eq!(again, AnyPresentation::Prime(p));
    }

    #[test]
    fn rational_coefficients() {
        let text = r#"{"field": "rational", "generators": ["x", "y"], "relations": [["1/2", 0, 0, "-3"]]}"#;
        let AnyPresentation::Rational(p) = parse_presentation(text).unwrap() else { panic!("rational field") };
        let out = write_presentation(&p);
        assert!(out.contains("\"-6\""), "{out}");
        assert_eq!(parse_presentation(&out).unwrap(), AnyPresentation::Rational(p));
    }

    #[test]
    fn located_errors() {
        let err = parse_presentation(r#"{"field": {"prime": 7}, "generators": ["x"], "relations": [[1, 2]]}"#).unwrap_err();
        assert!(err.to_string().contains("relations[0]"), "{err}");
        let err = parse_presentation("{\"field\": \n oops}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_presentation(r#"{"field": {"prime": 8}, "generators": ["x"], "relations": []}"#).unwrap_err();
        assert!(matches!(err, Error::InvalidField(_)));
        let err = parse_presentation(r#"{"field": "rational", "generators": ["x"], "relations": [["1/0"]]}"#).unwrap_err();
        assert!(err.to_string().contains("relations[0][0]"), "{err}");
    }

    #[test]
    fn module_builtins_and_explicit() {
        let f = PrimeField::new(5).unwrap();
        let alg = Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::exterior(f, 2), 3));
        let k = parse_module(r#"{"builtin": "k"}"#, &alg).unwrap();
        assert_eq!(k.piece_dims(), &[1]);
        let q = parse_module(r#"{"builtin": "quotient-by-generators", "generators": [0], "shift": 1}"#, &alg).unwrap();
        assert_eq!((q.lo(), q.piece_dims()), (-1, &[1usize, 1][..]));
        let r = regular(&alg);
        let text = serde_json::to_string(&module_out(&r)).unwrap();
        let back = parse_module(&text, &alg).unwrap();
        assert_eq!(back.piece_dims(), r.piece_dims());
        for j in r.lo()..r.hi() {
            for a in 0..2 {
                assert_eq!(back.action(a, j), r.action(a, j));
            }
        }
        let bad = r#"{"window": [0, 2], "dims": [1, 1, 1], "actions": [[[[1]], [[0]]], [[[1]], [[0]]]]}"#;
        assert!(parse_module(bad, &alg).is_err(), "x·x must act as zero");
        assert!(parse_module(r#"{"builtin": "nope"}"#, &alg).is_err());
    }

    #[test]
    fn complex_dump_round_trip() {
        let f = PrimeField::new(7).unwrap();
        let alg = Arc::new(TruncatedAlgebra::new(&QuadraticPresentation::polynomial(f, 2), 4));
        let forms = [vec![1, 0], vec![0, 1]];
        let x = crate::bgg::cyclic_free_resolution(&alg, &forms, 2, 3).unwrap();
        let dump = complex_dump(&x);
        let text = serde_json::to_string(&dump).unwrap();
        let back: ComplexDump = serde_json::from_str(&text).unwrap();
        let y = complex_from_dump(&back, &alg).unwrap();
        assert_eq!(complex_dump(&y), dump);
        assert_eq!(y.cohomology((0, 4)).unwrap(), x.cohomology((0, 4)).unwrap());
    }

    #[test]
    fn scheme_orbits() {
        let f = PrimeField::new(7).unwrap();
        let s = enumerate_point_scheme(&QuadraticPresentation::quantum_plane(f, 2));
        let d = scheme_dump(&s);
        let mut lens: Vec<usize> = d.orbits.unwrap().iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 1, 3, 3]);
    }
}
