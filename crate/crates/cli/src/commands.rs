use std::fmt::Write as _;
use std::path::Path;

use rounding_core::circles::{verify_rounding_numeric, FractionalMap};
use rounding_core::cliff::{
    hopf_map, kappa, normed_pairing, pairing_to_rounding, rho, stiefel_hopf_feasible, NormedPairing,
};
use rounding_core::jets::{
    canonical_rounding, factor_degenerate, is_degenerate, jets_equivalent, validate_jet, DegeneracyWitness,
    FracQuadMap, Jet2, RoundingJet,
};
use rounding_core::spheres::{homogenize, sphere_lift, split_norm};
use rounding_core::{inner_poly, Error, Rational, Signature};
use serde_json::{json, Value};

use crate::doc::{self, Document};
use crate::report::{digest, float, oracle_json, Report, EXIT_INVALID};
use crate::{CliError, Command, OracleArgs};

pub struct Output {
    pub report: Report,
    pub stdout: String,
}

enum Fail {
    Op(CliError),
    Math(Error),
}

impl From<CliError> for Fail {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Math(m) => Fail::Math(m),
            other => Fail::Op(other),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Math(e)
    }
}

/// `Ok(Some(text))` replaces the JSON report on stdout.
type Step = Result<Option<String>, Fail>;

struct Input {
    name: String,
    bytes: Vec<u8>,
}

fn read(path: &Path) -> Result<Input, CliError> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: name.clone(),
        source,
    })?;
    Ok(Input { name, bytes })
}

fn parse(input: &Input) -> Result<Document, CliError> {
    let text = std::str::from_utf8(&input.bytes).map_err(|e| CliError::Parse {
        path: input.name.clone(),
        location: format!("byte {}", e.valid_up_to()),
        message: "input is not UTF-8".into(),
    })?;
    doc::parse_document(&input.name, text)
}

fn write_doc(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn wrong_kind(input: &Input, doc: &Document, expected: &str) -> CliError {
    CliError::Parse {
        path: input.name.clone(),
        location: "field kind".into(),
        message: format!("expected {expected}, found {}", doc.kind()),
    }
}

fn load_jet(input: &Input) -> Result<Jet2, Fail> {
    match parse(input)? {
        Document::Jet(j) => Ok(j),
        Document::FracQuad(f) => Ok(f.two_jet()?),
        other => Err(Fail::Op(wrong_kind(input, &other, "jet or fracquad"))),
    }
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn matrix(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| vector(r)).collect())
}

fn signature(s: &Signature) -> Value {
    json!({
        "positive": s.positive,
        "negative": s.negative,
        "zero": s.zero,
        "text": s.to_string(),
    })
}

fn degeneracy_witness(w: &DegeneracyWitness) -> Value {
    match w {
        DegeneracyWitness::Rational(v) => json!({ "rational": vector(v) }),
        DegeneracyWitness::QuadraticExtension {
            base,
            radicand,
            direction,
        } => json!({
            "base": vector(base),
            "radicand": rat(radicand),
            "direction": vector(direction),
        }),
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch(_) => "DimensionMismatch",
        Error::DivisionByZero => "DivisionByZero",
        Error::WrongDegree { .. } => "WrongDegree",
        Error::RankTooLow { .. } => "RankTooLow",
        Error::NotDivisible { .. } => "NotDivisible",
        Error::DenominatorDoesNotDivide { .. } => "DenominatorDoesNotDivide",
        Error::NotDegenerate => "NotDegenerate",
        Error::IrrationalKernelWitness => "IrrationalKernelWitness",
        Error::DenominatorVanishesIdentically => "DenominatorVanishesIdentically",
        Error::TooFewPoints { .. } => "TooFewPoints",
        Error::Q2NotQuadratic => "Q2NotQuadratic",
        Error::Degenerate { .. } => "Degenerate",
        Error::PoleProximity(_) => "PoleProximity",
        Error::SizeInfeasible { .. } => "SizeInfeasible",
        Error::OutOfRange { .. } => "OutOfRange",
        Error::NotNormedPairing => "NotNormedPairing",
        Error::NotDefined => "NotDefined",
    }
}

fn reject(report: &mut Report, e: &Error) {
    report.exit_status = EXIT_INVALID;
    report.verdict("valid", false).verdict("reason", error_code(e));
    report.witness("error", e.to_string());
    match e {
        Error::NotDivisible { condition, remainder } => {
            report
                .witness("failed_condition", condition.to_string())
                .witness("remainder", remainder.to_string());
        }
        Error::DenominatorDoesNotDivide { remainder } => {
            report.witness("remainder", remainder.to_string());
        }
        Error::RankTooLow { rank } => {
            report.witness("rank", *rank);
        }
        Error::Degenerate { signature: s, witness } => {
            report.witness("signature", signature(s));
            if let Some(w) = witness {
                report.witness("kernel_vector", vector(w));
            }
        }
        Error::SizeInfeasible { rho, .. } => {
            report.witness("rho", *rho);
        }
        _ => {}
    }
}

fn finish(mut report: Report, step: Step) -> Result<Output, CliError> {
    let text = match step {
        Ok(text) => text,
        Err(Fail::Op(e)) => return Err(e),
        Err(Fail::Math(e)) => {
            reject(&mut report, &e);
            None
        }
    };
    let stdout = text.unwrap_or_else(|| report.render());
    Ok(Output { report, stdout })
}

fn jet_witnesses(report: &mut Report, rj: &RoundingJet) {
    report
        .witness("p", doc::poly_json(rj.p()))
        .witness("q", doc::poly_json(rj.q()))
        .witness("rank", rj.rank());
}

fn degeneracy(report: &mut Report, rj: &RoundingJet) -> bool {
    let d = is_degenerate(rj);
    report
        .verdict("degenerate", d.degenerate)
        .witness("kernel", matrix(&d.kernel))
        .witness("restricted_signature", signature(&d.restricted_signature))
        .witness(
            "degeneracy_witness",
            d.witness.as_ref().map_or(Value::Null, degeneracy_witness),
        );
    d.degenerate
}

fn run_oracle<M: FractionalMap + ?Sized>(report: &mut Report, map: &M, args: &OracleArgs) -> bool {
    let r = verify_rounding_numeric(map, args.trials, args.seed, args.tol);
    report.oracle = Some(oracle_json(&r));
    report.verdict("oracle_passed", r.passed());
    if !r.passed() {
        report.exit_status = EXIT_INVALID;
    }
    r.passed()
}

pub fn run(cli: &crate::Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Check { file } => {
            let input = read(file)?;
            let mut report = Report::new("check", digest(&[&input.bytes], ""));
            let step = (|| {
                let rj = validate_jet(&load_jet(&input)?)?;
                report.verdict("valid", true);
                jet_witnesses(&mut report, &rj);
                degeneracy(&mut report, &rj);
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Canon {
            file,
            out,
            verify,
            oracle,
        } => {
            let input = read(file)?;
            let params = if *verify { oracle.params() } else { String::new() };
            let mut report = Report::new("canon", digest(&[&input.bytes], &params));
            let step = (|| {
                let rj = validate_jet(&load_jet(&input)?)?;
                let phi = canonical_rounding(&rj);
                let aa = inner_poly(rj.jet().linear(), rj.jet().linear())?;
                let ff = inner_poly(phi.numerator(), phi.numerator())?;
                report
                    .verdict("valid", true)
                    .verdict("norm_identity", ff == phi.denominator() * &aa)
                    .verdict("represents_germ", phi.represents_germ());
                jet_witnesses(&mut report, &rj);
                let document = doc::document_to_json(&Document::FracQuad(phi.clone()));
                if let Some(path) = out {
                    write_doc(path, &document)?;
                }
                report.witness("canonical", document);
                if *verify {
                    run_oracle(&mut report, &phi, oracle);
                }
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Degen { file } => {
            let input = read(file)?;
            let mut report = Report::new("degen", digest(&[&input.bytes], ""));
            let step = (|| {
                let rj = validate_jet(&load_jet(&input)?)?;
                report.verdict("valid", true);
                jet_witnesses(&mut report, &rj);
                degeneracy(&mut report, &rj);
                let defect = rj.q() - &(rj.p() * rj.p());
                report.witness("q_minus_p_squared", doc::poly_json(&defect));
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Factor { file, out } => {
            let input = read(file)?;
            let mut report = Report::new("factor", digest(&[&input.bytes], ""));
            let step = (|| {
                let rj = validate_jet(&load_jet(&input)?)?;
                report.verdict("valid", true);
                degeneracy(&mut report, &rj);
                let fac = factor_degenerate(&rj)?;
                let reduced = doc::document_to_json(&Document::Jet(fac.reduced.jet().clone()));
                if let Some(path) = out {
                    write_doc(path, &reduced)?;
                }
                report
                    .verdict("factored", true)
                    .witness("projection", matrix(&fac.projection))
                    .witness("common_kernel", matrix(&fac.common_kernel))
                    .witness("reduced", reduced)
                    .witness("reduced_p", doc::poly_json(fac.reduced.p()))
                    .witness("reduced_q", doc::poly_json(fac.reduced.q()));
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Equiv { first, second } => {
            let (a, b) = (read(first)?, read(second)?);
            let mut report = Report::new("equiv", digest(&[&a.bytes, &b.bytes], ""));
            let step = (|| {
                let j1 = validate_jet(&load_jet(&a)?)?;
                let j2 = validate_jet(&load_jet(&b)?)?;
                report.verdict("valid", true);
                match jets_equivalent(&j1, &j2) {
                    Some(e) => {
                        let inv = e.inverse();
                        report
                            .verdict("equivalent", true)
                            .witness("lambda", rat(&e.lambda))
                            .witness("l", doc::poly_json(&e.l))
                            .witness(
                                "inverse",
                                json!({ "lambda": rat(&inv.lambda), "l": doc::poly_json(&inv.l) }),
                            );
                    }
                    None => {
                        report.verdict("equivalent", false);
                    }
                }
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Sphere { file, out, at } => {
            let input = read(file)?;
            let params = at
                .as_ref()
                .map(|v| format!("at={v:?}"))
                .unwrap_or_default();
            let mut report = Report::new("sphere", digest(&[&input.bytes], &params));
            let step = (|| {
                let rj = validate_jet(&load_jet(&input)?)?;
                report.verdict("valid", true);
                let phi = canonical_rounding(&rj);
                let (q1, q2) = split_norm(&homogenize(&phi)?)?;
                report
                    .witness("Q1", matrix(q1.matrix()))
                    .witness("Q2", matrix(q2.matrix()));
                let sm = sphere_lift(&rj)?;
                let g = sm.metric().to_poly();
                report
                    .verdict("nondegenerate", true)
                    .verdict("sphere_identity", inner_poly(sm.map(), sm.map())? == &g * &g)
                    .witness("signature", signature(&sm.signature()));
                let document = doc::document_to_json(&Document::SphereMap(sm.clone()));
                if let Some(path) = out {
                    write_doc(path, &document)?;
                }
                report.witness("spheremap", document);
                if let Some(x) = at {
                    let chart = sm.evaluate_factored(x)?;
                    let direct = phi.eval_f64(x);
                    report.witness(
                        "chart",
                        json!({
                            "point": x.iter().copied().map(float).collect::<Vec<_>>(),
                            "factored": chart.into_iter().map(float).collect::<Vec<_>>(),
                            "direct": direct.map(|d| d.into_iter().map(float).collect::<Vec<_>>()),
                        }),
                    );
                }
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Pairing { r, n, out } => {
            let mut report = Report::new("pairing", digest(&[], &format!("r={r};n={n}")));
            let step = (|| {
                let f = normed_pairing(*r, *n)?;
                pairing_report(&mut report, &f);
                let document = doc::document_to_json(&Document::Pairing(f));
                if let Some(path) = out {
                    write_doc(path, &document)?;
                }
                report.witness("pairing", document);
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Hopf {
            file,
            size,
            out,
            verify,
            oracle,
        } => {
            let input = file.as_ref().map(|p| read(p)).transpose()?;
            let mut params = size.as_ref().map(|s| format!("size={s:?}")).unwrap_or_default();
            if *verify {
                params.push_str(&oracle.params());
            }
            let inputs: Vec<&[u8]> = input.iter().map(|i| i.bytes.as_slice()).collect();
            let mut report = Report::new("hopf", digest(&inputs, &params));
            let step = (|| {
                let f = match (&input, size) {
                    (Some(input), _) => match parse(input)? {
                        Document::Pairing(f) => f,
                        other => return Err(Fail::Op(wrong_kind(input, &other, "pairing"))),
                    },
                    (None, Some(s)) => normed_pairing(s[0], s[1])?,
                    (None, None) => {
                        return Err(Fail::Op(CliError::Usage("give a pairing file or --size R N".into())))
                    }
                };
                pairing_report(&mut report, &f);
                let h = hopf_map(&f);
                report
                    .verdict("sphere_identity", true)
                    .witness("signature", signature(&h.signature()));
                let document = doc::document_to_json(&Document::SphereMap(h));
                if let Some(path) = out {
                    write_doc(path, &document)?;
                }
                report.witness("spheremap", document);
                if *verify {
                    let phi = pairing_to_rounding(&f);
                    report.verdict("represents_germ", phi.represents_germ());
                    run_oracle(&mut report, &phi, oracle);
                }
                Ok(None)
            })();
            finish(report, step)
        }
        Command::Tables {
            rho: rho_n,
            kappa: kappa_m,
            stiefel,
            range,
            json,
        } => {
            let params = format!("rho={rho_n:?};kappa={kappa_m:?};stiefel={stiefel:?};range={range}");
            let mut report = Report::new("tables", digest(&[], &params));
            let step = (|| {
                let text = if let Some(n) = rho_n {
                    if *n == 0 {
                        return Err(Fail::Math(Error::OutOfRange {
                            what: "rho argument",
                            value: 0,
                            range: ">= 1",
                        }));
                    }
                    let values: Vec<u64> = (1..=*n).map(rho).collect();
                    report.verdict("rho", values.clone());
                    table("n", "rho(n)", (1..=*n).zip(values))
                } else if let Some(m) = kappa_m {
                    if *range {
                        let values = (1..=*m).map(kappa).collect::<Result<Vec<_>, _>>()?;
                        report.verdict("kappa", values.clone());
                        table("m", "kappa(m)", (1..=*m as u64).zip(values.into_iter().map(|v| v as u64)))
                    } else {
                        let v = kappa(*m)?;
                        report.verdict("kappa", v);
                        format!("kappa({m}) = {v}\n")
                    }
                } else if let Some(s) = stiefel {
                    let (r, s_, n) = (s[0], s[1], s[2]);
                    let sh = stiefel_hopf_feasible(r, s_, n)?;
                    report
                        .verdict("no_obstruction", sh.no_obstruction)
                        .witness("odd_binomials", sh.odd_binomials.clone());
                    if sh.no_obstruction {
                        format!("[{r},{s_},{n}]: no obstruction (C({n},k) even for {} < k < {s_})\n", n as i64 - r as i64)
                    } else {
                        let ks: Vec<String> = sh
                            .odd_binomials
                            .iter()
                            .map(|k| format!("k={k} (C({n},{k}) odd)"))
                            .collect();
                        format!("[{r},{s_},{n}]: obstruction at {}\n", ks.join(", "))
                    }
                } else {
                    return Err(Fail::Op(CliError::Usage("give one of --rho, --kappa, --stiefel".into())));
                };
                Ok((!json).then_some(text))
            })();
            finish(report, step)
        }
        Command::Verify { file, oracle } => {
            let input = read(file)?;
            let mut report = Report::new("verify", digest(&[&input.bytes], &oracle.params()));
            let step = (|| {
                let phi: FracQuadMap = match parse(&input)? {
                    Document::Jet(j) => canonical_rounding(&validate_jet(&j)?),
                    Document::FracQuad(f) => f,
                    Document::Pairing(f) => pairing_to_rounding(&f),
                    other => return Err(Fail::Op(wrong_kind(&input, &other, "jet, fracquad or pairing"))),
                };
                report
                    .verdict("valid", true)
                    .verdict("represents_germ", phi.represents_germ());
                run_oracle(&mut report, &phi, oracle);
                Ok(None)
            })();
            finish(report, step)
        }
    }
}

fn pairing_report(report: &mut Report, f: &NormedPairing) {
    let [r, s, n] = f.size();
    let sh = stiefel_hopf_feasible(r, s, n).expect("positive sizes");
    report
        .verdict("valid", true)
        .verdict("identity_holds", f.identity_holds())
        .verdict("stiefel_hopf_no_obstruction", sh.no_obstruction)
        .witness("size", vec![r, s, n]);
    if s == n {
        report.witness("rho", rho(n as u64));
    }
}

/// Two-row aligned table, wrapped every 16 columns.
fn table(head: &str, label: &str, rows: impl Iterator<Item = (u64, u64)>) -> String {
    let rows: Vec<(u64, u64)> = rows.collect();
    let lw = head.len().max(label.len());
    let mut out = String::new();
    for chunk in rows.chunks(16) {
        let w = chunk
            .iter()
            .map(|(a, b)| a.to_string().len().max(b.to_string().len()))
            .max()
            .unwrap_or(1);
        let _ = write!(out, "{head:<lw$}");
        for (a, _) in chunk {
            let _ = write!(out, " {a:>w$}");
        }
        out.push('\n');
        let _ = write!(out, "{label:<lw$}");
        for (_, b) in chunk {
            let _ = write!(out, " {b:>w$}");
        }
        out.push('\n');
    }
    out
}
