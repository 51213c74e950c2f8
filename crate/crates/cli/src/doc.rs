//! JSON documents: `jet`, `fracquad`, `pairing` and `spheremap`.
//!
//! Rationals are written as strings `"p"` or `"p/q"`; integers are also
//! accepted on input. Quadratic parts are symmetric matrices, so the
//! polynomial `x1*x2` has off-diagonal entries `1/2`.

use std::str::FromStr;

use num_bigint::BigInt;
use rounding_core::cliff::NormedPairing;
use rounding_core::jets::{FracQuadMap, Jet2};
use rounding_core::polycore::linalg::Matrix;
use rounding_core::spheres::QuadSphereMap;
use rounding_core::{Poly, PolyMap, QuadForm, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum RawRational {
    Text(String),
    Int(i64),
}

impl From<&Rational> for RawRational {
    fn from(r: &Rational) -> Self {
        RawRational::Text(r.to_string())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid rational {s:?}"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid rational {s:?}"))?;
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Tracks the field path for error messages.
struct Ctx<'a> {
    file: &'a str,
}

impl Ctx<'_> {
    fn err(&self, field: &str, msg: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.file.to_string(),
            location: format!("field {field}"),
            message: msg.into(),
        }
    }

    fn rational(&self, field: &str, raw: &RawRational) -> Result<Rational, CliError> {
        match raw {
            RawRational::Int(v) => Ok(Rational::from_integer(BigInt::from(*v))),
            RawRational::Text(s) => parse_rational(s).map_err(|e| self.err(field, e)),
        }
    }

    fn vector(&self, field: &str, raw: &[RawRational], len: usize) -> Result<Vec<Rational>, CliError> {
        if raw.len() != len {
            return Err(self.err(field, format!("expected {len} entries, found {}", raw.len())));
        }
        raw.iter()
            .enumerate()
            .map(|(i, r)| self.rational(&format!("{field}[{i}]"), r))
            .collect()
    }

    fn matrix(&self, field: &str, raw: &[Vec<RawRational>], rows: usize, cols: usize) -> Result<Matrix, CliError> {
        if raw.len() != rows {
            return Err(self.err(field, format!("expected {rows} rows, found {}", raw.len())));
        }
        raw.iter()
            .enumerate()
            .map(|(i, row)| self.vector(&format!("{field}[{i}]"), row, cols))
            .collect()
    }

    fn form(&self, field: &str, raw: &[Vec<RawRational>], dim: usize) -> Result<QuadForm, CliError> {
        let m = self.matrix(field, raw, dim, dim)?;
        QuadForm::new(m).map_err(|e| self.err(field, e.to_string()))
    }
}

fn write_vector(v: &[Rational]) -> Vec<RawRational> {
    v.iter().map(RawRational::from).collect()
}

fn write_matrix(m: &[Vec<Rational>]) -> Vec<Vec<RawRational>> {
    m.iter().map(|r| write_vector(r)).collect()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub kind: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<RawRational>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Vec<RawRational>>>,
}

/// Coefficients of a polynomial of degree at most two.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QuadPolyDoc {
    pub constant: RawRational,
    pub linear: Vec<RawRational>,
    pub quadratic: Vec<Vec<RawRational>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FracQuadDoc {
    pub kind: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "F")]
    pub f: Vec<QuadPolyDoc>,
    #[serde(rename = "Q")]
    pub q: QuadPolyDoc,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairingDoc {
    pub kind: String,
    pub r: usize,
    pub s: usize,
    pub n: usize,
    /// `tensor[i][j][c]`: coefficient of `x_i y_j` in `f_c`.
    pub tensor: Vec<Vec<Vec<RawRational>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SphereMapDoc {
    pub kind: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub f: Vec<Vec<Vec<RawRational>>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<RawRational>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<RawRational>>,
    #[serde(rename = "D")]
    pub d: Vec<RawRational>,
}

pub enum Document {
    Jet(Jet2),
    FracQuad(FracQuadMap),
    Pairing(NormedPairing),
    SphereMap(QuadSphereMap),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Jet(_) => "jet",
            Document::FracQuad(_) => "fracquad",
            Document::Pairing(_) => "pairing",
            Document::SphereMap(_) => "spheremap",
        }
    }
}

fn json_error(file: &str, e: &serde_json::Error) -> CliError {
    CliError::Parse {
        path: file.to_string(),
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

/// Parses a document. Structural errors carry a line and column, value
/// errors carry the field path.
pub fn parse_document(file: &str, text: &str) -> Result<Document, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
    let ctx = Ctx { file };
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| ctx.err("kind", "missing or not a string"))?
        .to_string();
    // re-parse from text so that type errors report line and column
    match kind.as_str() {
        "jet" => {
            let doc: JetDoc = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
            Ok(Document::Jet(jet_from_doc(&ctx, &doc)?))
        }
        "fracquad" => {
            let doc: FracQuadDoc = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
            Ok(Document::FracQuad(fracquad_from_doc(&ctx, &doc)?))
        }
        "pairing" => {
            let doc: PairingDoc = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
            Ok(Document::Pairing(pairing_from_doc(&ctx, &doc)?))
        }
        "spheremap" => {
            let doc: SphereMapDoc = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
            Ok(Document::SphereMap(spheremap_from_doc(&ctx, &doc)?))
        }
        other => Err(ctx.err("kind", format!("unknown document kind {other:?}"))),
    }
}

fn jet_from_doc(ctx: &Ctx, doc: &JetDoc) -> Result<Jet2, CliError> {
    let a = ctx.matrix("A", &doc.a, doc.n, doc.m)?;
    if doc.b.len() != doc.n {
        return Err(ctx.err("B", format!("expected {} matrices, found {}", doc.n, doc.b.len())));
    }
    let forms = doc
        .b
        .iter()
        .enumerate()
        .map(|(i, s)| ctx.form(&format!("B[{i}]"), s, doc.m))
        .collect::<Result<Vec<_>, _>>()?;
    Jet2::from_parts(&a, &forms, doc.m).map_err(|e| ctx.err("A", e.to_string()))
}

pub fn jet_to_doc(jet: &Jet2) -> JetDoc {
    JetDoc {
        kind: "jet".into(),
        m: jet.source_dim(),
        n: jet.target_dim(),
        a: write_matrix(&jet.linear().linear_matrix()),
        b: jet
            .quadratic()
            .quadratic_forms()
            .iter()
            .map(|f| write_matrix(f.matrix()))
            .collect(),
    }
}

fn quad_poly_from_doc(ctx: &Ctx, field: &str, doc: &QuadPolyDoc, m: usize) -> Result<Poly, CliError> {
    let c = ctx.rational(&format!("{field}.constant"), &doc.constant)?;
    let lin = ctx.vector(&format!("{field}.linear"), &doc.linear, m)?;
    let quad = ctx.form(&format!("{field}.quadratic"), &doc.quadratic, m)?;
    Ok(&(&Poly::constant(m, c) + &Poly::linear(&lin)) + &quad.to_poly())
}

pub fn quad_poly_to_doc(p: &Poly) -> QuadPolyDoc {
    let m = p.num_vars();
    let linear: Vec<Rational> = (0..m)
        .map(|i| {
            let mut e = vec![0u8; m];
            e[i] = 1;
            p.coeff(&e)
        })
        .collect();
    let quad = QuadForm::from_poly(&p.homogeneous_part(2)).expect("homogeneous quadratic part");
    QuadPolyDoc {
        constant: RawRational::from(&p.constant_term()),
        linear: write_vector(&linear),
        quadratic: write_matrix(quad.matrix()),
    }
}

fn fracquad_from_doc(ctx: &Ctx, doc: &FracQuadDoc) -> Result<FracQuadMap, CliError> {
    if doc.f.len() != doc.n {
        return Err(ctx.err("F", format!("expected {} coordinates, found {}", doc.n, doc.f.len())));
    }
    let coords = doc
        .f
        .iter()
        .enumerate()
        .map(|(i, c)| quad_poly_from_doc(ctx, &format!("F[{i}]"), c, doc.m))
        .collect::<Result<Vec<_>, _>>()?;
    let q = quad_poly_from_doc(ctx, "Q", &doc.q, doc.m)?;
    let f = PolyMap::new(doc.m, coords).map_err(|e| ctx.err("F", e.to_string()))?;
    FracQuadMap::new(f, q).map_err(|e| CliError::Math(e))
}

pub fn fracquad_to_doc(phi: &FracQuadMap) -> FracQuadDoc {
    FracQuadDoc {
        kind: "fracquad".into(),
        m: phi.source_dim(),
        n: phi.target_dim(),
        f: phi.numerator().coords().iter().map(quad_poly_to_doc).collect(),
        q: quad_poly_to_doc(phi.denominator()),
    }
}

fn pairing_from_doc(ctx: &Ctx, doc: &PairingDoc) -> Result<NormedPairing, CliError> {
    if doc.tensor.len() != doc.r {
        return Err(ctx.err("tensor", format!("expected {} slices, found {}", doc.r, doc.tensor.len())));
    }
    let tensor = doc
        .tensor
        .iter()
        .enumerate()
        .map(|(i, t)| ctx.matrix(&format!("tensor[{i}]"), t, doc.s, doc.n))
        .collect::<Result<Vec<_>, _>>()?;
    NormedPairing::new(tensor).map_err(CliError::Math)
}

pub fn pairing_to_doc(f: &NormedPairing) -> PairingDoc {
    let [r, s, n] = f.size();
    PairingDoc {
        kind: "pairing".into(),
        r,
        s,
        n,
        tensor: f.tensor().iter().map(|t| write_matrix(t)).collect(),
    }
}

fn spheremap_from_doc(ctx: &Ctx, doc: &SphereMapDoc) -> Result<QuadSphereMap, CliError> {
    let k = doc.source_dim;
    if doc.f.len() != doc.target_dim {
        return Err(ctx.err("f", format!("expected {} forms, found {}", doc.target_dim, doc.f.len())));
    }
    let forms = doc
        .f
        .iter()
        .enumerate()
        .map(|(i, s)| ctx.form(&format!("f[{i}]"), s, k))
        .collect::<Result<Vec<_>, _>>()?;
    let g = ctx.form("G", &doc.g, k)?;
    let map = PolyMap::from_forms(&forms, k).map_err(|e| ctx.err("f", e.to_string()))?;
    let sm = QuadSphereMap::new(map, g).map_err(CliError::Math)?;
    // the stored normalizer must match the recomputed one
    let (l, d) = sm.normalizer();
    if &ctx.matrix("L", &doc.l, k, k)? != l || ctx.vector("D", &doc.d, k)? != d {
        return Err(ctx.err("L", "normalizer does not match G = L D L^T"));
    }
    Ok(sm)
}

pub fn spheremap_to_doc(sm: &QuadSphereMap) -> SphereMapDoc {
    let (l, d) = sm.normalizer();
    SphereMapDoc {
        kind: "spheremap".into(),
        source_dim: sm.source_dim(),
        target_dim: sm.target_dim(),
        f: sm.map().quadratic_forms().iter().map(|q| write_matrix(q.matrix())).collect(),
        g: write_matrix(sm.metric().matrix()),
        l: write_matrix(l),
        d: write_vector(d),
    }
}

pub fn document_to_json(doc: &Document) -> Value {
    match doc {
        Document::Jet(j) => serde_json::to_value(jet_to_doc(j)),
        Document::FracQuad(f) => serde_json::to_value(fracquad_to_doc(f)),
        Document::Pairing(p) => serde_json::to_value(pairing_to_doc(p)),
        Document::SphereMap(s) => serde_json::to_value(spheremap_to_doc(s)),
    }
    .expect("documents serialize")
}

/// `x1 + 1/2*x2` style rendering plus the coefficient vector of a
/// polynomial of degree at most two.
pub fn poly_json(p: &Poly) -> Value {
    serde_json::json!({
        "text": p.to_string(),
        "coefficients": quad_poly_to_doc(p),
    })
}
