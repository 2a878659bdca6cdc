//! JSON documents read and written by the command-line tool.
//!
//! Exact values travel as strings (`"p/q"` or `"p"`); floats only appear where
//! the computation itself is floating point.

use std::fmt;

use polysphere_core::designs::{Mode, PointSet, Value as PointValue};
use polysphere_core::gram::GramForm;
use polysphere_core::heights::{PolynomialSubspace, Subspace};
use polysphere_core::orthogonalizer::{CertificateReport, OrthogonalCertificate, SiegelBasis};
use polysphere_core::{
    parse_rational, IndexBasis, Int, MultiIndex, Polynomial, Rational, RationalMatrix,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError(format!("malformed JSON: {e}"))
    }
}

impl From<polysphere_core::Error> for FormatError {
    fn from(e: polysphere_core::Error) -> Self {
        FormatError(e.to_string())
    }
}

pub type FormatResult<T> = Result<T, FormatError>;

fn rational(s: &str) -> FormatResult<Rational> {
    parse_rational(s).map_err(FormatError::from)
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn int_json(n: &Int) -> Value {
    Value::String(n.to_string())
}

pub fn int_vector_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn rational_matrix_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(rational_json).collect()))
            .collect(),
    )
}

pub fn multi_index_json(m: &MultiIndex) -> Value {
    json!(m.exponents())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    m: Vec<u32>,
    c: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialDoc {
    #[serde(rename = "N")]
    n: Option<usize>,
    terms: Vec<TermDoc>,
}

fn polynomial_from_doc(doc: PolynomialDoc, vars: Option<usize>) -> FormatResult<Polynomial> {
    let n = match (doc.n, vars) {
        (Some(a), Some(b)) if a != b => {
            return Err(FormatError(format!(
                "polynomial declares N = {a}, expected {b}"
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(FormatError("polynomial is missing \"N\"".into())),
    };
    let terms = doc
        .terms
        .into_iter()
        .map(|t| Ok((MultiIndex::new(t.m), rational(&t.c)?)))
        .collect::<FormatResult<Vec<_>>>()?;
    Ok(Polynomial::from_terms(n, terms)?)
}

/// Parses `{"N": 2, "terms": [{"m": [1, 0], "c": "3"}]}`.
pub fn parse_polynomial(text: &str) -> FormatResult<Polynomial> {
    polynomial_from_doc(serde_json::from_str(text)?, None)
}

pub fn polynomial_json(f: &Polynomial) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(m, c)| json!({"m": m.exponents(), "c": c.to_string()}))
        .collect();
    json!({"N": f.vars(), "terms": terms})
}

pub fn serialize_polynomial(f: &Polynomial) -> String {
    polynomial_json(f).to_string()
}

/// A subspace as read from a file: either polynomials or bare coefficient
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceDoc {
    Polynomials(PolynomialSubspace),
    Vectors(Subspace),
}

impl SubspaceDoc {
    pub fn space(&self) -> &Subspace {
        match self {
            SubspaceDoc::Polynomials(p) => p.space(),
            SubspaceDoc::Vectors(s) => s,
        }
    }

    pub fn ambient(&self) -> Option<&IndexBasis> {
        match self {
            SubspaceDoc::Polynomials(p) => Some(p.ambient()),
            SubspaceDoc::Vectors(_) => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceFile {
    #[serde(rename = "N")]
    n: Option<usize>,
    #[serde(rename = "M")]
    m: Option<u32>,
    polynomials: Option<Vec<PolynomialDoc>>,
    vectors: Option<Vec<Vec<String>>>,
}

/// Parses either `{"N": 2, "M": 2?, "polynomials": [{"terms": [...]}, ...]}`
/// or `{"vectors": [["1", "2"], ...]}`. With `"M"` the polynomials are embedded
/// in the monomial basis of that degree, otherwise of their largest degree.
pub fn parse_subspace(text: &str) -> FormatResult<SubspaceDoc> {
    let doc: SubspaceFile = serde_json::from_str(text)?;
    match (doc.polynomials, doc.vectors) {
        (Some(polys), None) => {
            let n = doc
                .n
                .ok_or_else(|| FormatError("subspace file is missing \"N\"".into()))?;
            let polys = polys
                .into_iter()
                .map(|p| polynomial_from_doc(p, Some(n)))
                .collect::<FormatResult<Vec<_>>>()?;
            let v = PolynomialSubspace::from_polynomials(n, &polys)?;
            match doc.m {
                None => Ok(SubspaceDoc::Polynomials(v)),
                Some(m) => {
                    let ambient = IndexBasis::new(m, n)?;
                    let cols = polys
                        .iter()
                        .map(|p| p.coefficient_vector(&ambient))
                        .collect::<Result<Vec<_>, _>>()?;
                    let space = Subspace::new(RationalMatrix::from_columns(ambient.len(), &cols)?)?;
                    Ok(SubspaceDoc::Polynomials(PolynomialSubspace::new(
                        ambient, space,
                    )?))
                }
            }
        }
        (None, Some(vectors)) => {
            if doc.n.is_some() || doc.m.is_some() {
                return Err(FormatError(
                    "\"N\" and \"M\" only apply to polynomial subspaces".into(),
                ));
            }
            let len = vectors
                .first()
                .map(Vec::len)
                .ok_or_else(|| FormatError("subspace has no vectors".into()))?;
            let cols = vectors
                .iter()
                .map(|v| v.iter().map(|s| rational(s)).collect())
                .collect::<FormatResult<Vec<Vec<Rational>>>>()?;
            Ok(SubspaceDoc::Vectors(Subspace::new(
                RationalMatrix::from_columns(len, &cols)?,
            )?))
        }
        _ => Err(FormatError(
            "subspace file needs exactly one of \"polynomials\" or \"vectors\"".into(),
        )),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FormFile {
    Wrapped { matrix: Vec<Vec<String>> },
    Bare(Vec<Vec<String>>),
}

/// Parses a symmetric form matrix: `[["1","0"],["0","1"]]` or `{"matrix": ...}`.
pub fn parse_form_matrix(text: &str) -> FormatResult<RationalMatrix> {
    let rows = match serde_json::from_str::<FormFile>(text)? {
        FormFile::Wrapped { matrix } | FormFile::Bare(matrix) => matrix,
    };
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| rational(s)).collect())
        .collect::<FormatResult<Vec<Vec<Rational>>>>()?;
    let m = RationalMatrix::from_rows(rows)?;
    if m.rows() != m.cols() {
        return Err(FormatError(format!(
            "form matrix is {}x{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_symmetric() {
        return Err(FormatError("form matrix is not symmetric".into()));
    }
    Ok(m)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsDoc {
    #[serde(rename = "N")]
    n: usize,
    mode: String,
    points: Vec<Vec<Value>>,
}

/// Parses `{"N": 2, "mode": "exact", "points": [["1", "0"], ...]}`; exact
/// coordinates are rational strings, float coordinates are JSON numbers.
pub fn parse_points(text: &str) -> FormatResult<PointSet> {
    let doc: PointsDoc = serde_json::from_str(text)?;
    let mode = match doc.mode.as_str() {
        "exact" => Mode::Exact,
        "float" => Mode::Float,
        other => {
            return Err(FormatError(format!(
                "unknown mode {other:?}, expected \"exact\" or \"float\""
            )))
        }
    };
    let mut values = Vec::with_capacity(doc.points.len());
    let (mut exact, mut float) = (0usize, 0usize);
    for p in &doc.points {
        let mut row = Vec::with_capacity(p.len());
        for x in p {
            row.push(match x {
                Value::String(s) => {
                    exact += 1;
                    PointValue::Exact(rational(s)?)
                }
                Value::Number(n) => {
                    float += 1;
                    PointValue::Float(
                        n.as_f64()
                            .ok_or_else(|| FormatError(format!("bad number {n}")))?,
                    )
                }
                other => {
                    return Err(FormatError(format!(
                        "coordinate {other} is neither a string nor a number"
                    )))
                }
            });
        }
        values.push(row);
    }
    if exact > 0 && float > 0 {
        return Err(polysphere_core::Error::MixedMode.into());
    }
    let declared_ok = match mode {
        Mode::Exact => float == 0,
        Mode::Float => exact == 0,
    };
    if !declared_ok {
        return Err(FormatError(format!(
            "coordinates do not match declared mode \"{mode}\""
        )));
    }
    Ok(PointSet::from_values(doc.n, values)?)
}

pub fn points_json(s: &PointSet) -> Value {
    let points: Vec<Value> = (0..s.len())
        .map(|i| {
            Value::Array(
                s.point(i)
                    .iter()
                    .map(|x| match x {
                        PointValue::Exact(q) => rational_json(q),
                        PointValue::Float(f) => json!(f),
                    })
                    .collect(),
            )
        })
        .collect();
    json!({"N": s.vars(), "mode": s.mode().to_string(), "points": points})
}

/// `{"M", "N", "L", "order": "lex", "basis": [...], "entries": [{"i","j","v"}]}`
/// with `i <= j` and only nonzero entries.
pub fn gram_json(form: &GramForm) -> Value {
    let basis = form.basis();
    let entries: Vec<Value> = form
        .upper_entries()
        .into_iter()
        .map(|(i, j, v)| json!({"i": i, "j": j, "v": v.to_string()}))
        .collect();
    json!({
        "M": basis.degree(),
        "N": basis.vars(),
        "L": basis.len(),
        "order": "lex",
        "basis": basis.indices().iter().map(multi_index_json).collect::<Vec<_>>(),
        "entries": entries,
    })
}

fn vectors_as_polynomials(ambient: &IndexBasis, vectors: &[Vec<Int>]) -> Value {
    Value::Array(
        vectors
            .iter()
            .map(|g| {
                let coeffs: Vec<Rational> = g.iter().cloned().map(Rational::from_integer).collect();
                polynomial_json(
                    &Polynomial::from_coefficients(ambient, &coeffs).expect("lengths agree"),
                )
            })
            .collect(),
    )
}

pub fn siegel_json(s: &SiegelBasis, ambient: Option<&IndexBasis>) -> Value {
    let mut out = Map::new();
    out.insert(
        "vectors".into(),
        Value::Array(s.vectors.iter().map(|v| int_vector_json(v)).collect()),
    );
    if let Some(b) = ambient {
        out.insert("polynomials".into(), vectors_as_polynomials(b, &s.vectors));
    }
    out.insert(
        "heights".into(),
        Value::Array(s.heights.iter().map(int_json).collect()),
    );
    out.insert("product_sq".into(), int_json(&s.product_sq()));
    out.insert(
        "subspace_height_sq".into(),
        rational_json(s.subspace_height.value()),
    );
    out.insert(
        "method".into(),
        json!(format!("{:?}", s.method).to_lowercase()),
    );
    out.insert("certified".into(), json!(s.certified() && s.bound_holds()));
    Value::Object(out)
}

/// Mirrors [`OrthogonalCertificate`]; when `ambient` is given the vectors are
/// also written out as polynomials.
pub fn certificate_json(c: &OrthogonalCertificate, ambient: Option<&IndexBasis>) -> Value {
    let mut out = Map::new();
    out.insert(
        "fingerprint".into(),
        Value::Array(c.fingerprint.iter().map(|v| int_vector_json(v)).collect()),
    );
    out.insert(
        "vectors".into(),
        Value::Array(c.vectors.iter().map(|v| int_vector_json(v)).collect()),
    );
    if let Some(b) = ambient {
        out.insert("ambient".into(), json!({"M": b.degree(), "N": b.vars()}));
        out.insert("polynomials".into(), vectors_as_polynomials(b, &c.vectors));
    }
    out.insert("form_values".into(), rational_matrix_json(&c.form_values));
    out.insert(
        "heights".into(),
        Value::Array(c.heights.iter().map(int_json).collect()),
    );
    out.insert(
        "subspace_height_sq".into(),
        rational_json(c.subspace_height.value()),
    );
    out.insert("form_height".into(), rational_json(&c.form_height));
    out.insert("L".into(), json!(c.ambient_len));
    out.insert("product_sq".into(), int_json(&c.product_sq));
    out.insert("squared_bound".into(), rational_json(&c.squared_bound));
    out.insert("radical_dim".into(), json!(c.radical_dim));
    out.insert("siegel_certified".into(), json!(c.siegel_certified));
    out.insert("bound_holds".into(), json!(c.bound_holds));
    Value::Object(out)
}

pub fn report_json(r: &CertificateReport) -> Value {
    let mut out = Map::new();
    for (check, ok) in &r.results {
        out.insert(check.name().into(), json!(ok));
    }
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_examples() {
        let f = parse_polynomial(r#"{"N":2,"terms":[{"m":[1,0],"c":"3"}]}"#).unwrap();
        assert_eq!(f.to_string(), "3*X1");
        let dup = parse_polynomial(r#"{"N":2,"terms":[{"m":[1,0],"c":"3"},{"m":[1,0],"c":"1"}]}"#);
        assert!(dup.is_err());
        assert!(parse_polynomial(r#"{"N":2,"terms":[]}"#).unwrap().is_zero());
        assert!(parse_polynomial(r#"{"N":2,"terms":[{"m":[1,0,0],"c":"3"}]}"#).is_err());
        assert!(parse_polynomial(r#"{"N":2,"terms":[{"m":[1,0],"c":"3/0"}]}"#).is_err());
        assert!(parse_polynomial(r#"{"N":2,"terms":[{"m":[1,0],"c":"x"}]}"#).is_err());
    }

    #[test]
    fn subspace_files() {
        let v = parse_subspace(r#"{"N":2,"polynomials":[{"terms":[{"m":[2,0],"c":"1"}]},{"terms":[{"m":[0,2],"c":"1"}]}]}"#)
            .unwrap();
        assert_eq!(v.space().dim(), 2);
        assert_eq!(v.ambient().unwrap().degree(), 2);
        let v = parse_subspace(r#"{"N":2,"M":3,"polynomials":[{"terms":[{"m":[1,0],"c":"1"}]}]}"#)
            .unwrap();
        assert_eq!(v.ambient().unwrap().len(), 10);
        let v = parse_subspace(r#"{"vectors":[["1/2","1/2"]]}"#).unwrap();
        assert_eq!(v.space().ambient_dim(), 2);
        assert!(parse_subspace(r#"{"vectors":[["1","2"],["2","4"]]}"#).is_err());
        assert!(parse_subspace(r#"{"N":2}"#).is_err());
        assert!(
            parse_subspace(r#"{"N":2,"M":1,"polynomials":[{"terms":[{"m":[2,0],"c":"1"}]}]}"#)
                .is_err()
        );
    }

    #[test]
    fn form_files() {
        let m = parse_form_matrix(r#"[["2","0"],["0","3"]]"#).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(
            parse_form_matrix(r#"{"matrix":[["2","0"],["0","3"]]}"#).unwrap(),
            m
        );
        assert!(parse_form_matrix(r#"[["2","1"],["0","3"]]"#).is_err());
        assert!(parse_form_matrix(r#"[["2","1"]]"#).is_err());
    }

    #[test]
    fn point_files() {
        let s =
            parse_points(r#"{"N":2,"mode":"exact","points":[["1","0"],["-3/5","4/5"]]}"#).unwrap();
        assert_eq!((s.len(), s.mode()), (2, Mode::Exact));
        assert_eq!(parse_points(&points_json(&s).to_string()).unwrap(), s);
        let s = parse_points(r#"{"N":2,"mode":"float","points":[[1.0,0.0],[0.6,0.8]]}"#).unwrap();
        assert_eq!(s.mode(), Mode::Float);
        let mixed = parse_points(r#"{"N":2,"mode":"exact","points":[["1",0.0]]}"#);
        assert_eq!(
            mixed,
            Err(FormatError(
                "point set mixes exact and float coordinates".into()
            ))
        );
        assert!(parse_points(r#"{"N":2,"mode":"float","points":[["1","0"]]}"#).is_err());
        assert!(parse_points(r#"{"N":2,"mode":"exact","points":[["1","1"]]}"#).is_err());
        assert!(parse_points(r#"{"N":2,"mode":"fuzzy","points":[["1","0"]]}"#).is_err());
    }
}
