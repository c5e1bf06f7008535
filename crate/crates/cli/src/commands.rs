use std::fmt;
use std::fs;

use dualcurve::bertrand::{self, BertrandReport, InvolutePairReport, InvoluteSpec};
use dualcurve::dsl::{self, ParseError};
use dualcurve::study::{LineRecord, OrientedLine};
use dualcurve::tol::CHECK_TOL;
use dualcurve::{par, Domain, DualCurve, DualScalar, DualVec3, Error, FrenetData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{csv, json};
use crate::{CheckArgs, Common, CurveArgs, Format, InvoluteArgs, OffsetArgs, Source, ToDualArgs, ToLineArgs};

/// Panels of the arc-length table used before building involutes.
const ARC_PANELS: usize = 64;
const ROUNDTRIP_LINES: usize = 100;
const ROUNDTRIP_SEED: u64 = 0x5eed;
const ROUNDTRIP_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { what: &'static str, src: String, err: ParseError },
    Numeric { err: Error, src: Option<String> },
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 1,
            CliError::Numeric { .. } => 2,
            CliError::Failed(_) => 3,
        }
    }

    fn numeric(err: Error, src: Option<&str>) -> CliError {
        match err {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            Error::NotPlanar { .. } => CliError::Failed(err.to_string()),
            err => CliError::Numeric {
                err,
                src: src.map(str::to_owned),
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Parse { what, src, err } => write!(f, "error: invalid {what}: {}", err.render(src)),
            CliError::Numeric { err, src } => {
                write!(f, "error: {err}")?;
                if let (Error::EvalDomain { start, end, .. }, Some(src)) = (err, src) {
                    if *end <= src.len() && src.is_char_boundary(*start) {
                        let width = src[*start..*end].chars().count().max(1);
                        let col = src[..*start].chars().count();
                        write!(f, "\n  {src}\n  {}{}", " ".repeat(col), "^".repeat(width))?;
                    }
                }
                Ok(())
            }
            CliError::Failed(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_source(s: &Source) -> CliResult<String> {
    match (&s.curve, &s.file) {
        (Some(c), _) => Ok(c.clone()),
        (None, Some(path)) => fs::read_to_string(path)
            .map(|t| t.trim().to_owned())
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(CliError::Usage("one of --curve or --file is required".into())),
    }
}

fn domain(s: &Source) -> CliResult<Domain> {
    Domain::new(s.from, s.to).map_err(|_| {
        CliError::Usage(format!("--from must be below --to and both finite, got {} and {}", s.from, s.to))
    })
}

struct Loaded {
    src: String,
    canonical: String,
    curve: DualCurve,
}

fn compile(what: &'static str, src: String, dom: Domain) -> CliResult<Loaded> {
    let ast = dsl::parse(&src).map_err(|err| CliError::Parse {
        what,
        src: src.clone(),
        err,
    })?;
    Ok(Loaded {
        canonical: dsl::format(&ast),
        curve: dsl::compile(&ast, dom),
        src,
    })
}

fn load(s: &Source) -> CliResult<Loaded> {
    compile("curve", read_source(s)?, domain(s)?)
}

fn dual_constant(what: &'static str, text: &str) -> CliResult<DualScalar> {
    let e = dsl::parse_scalar(text).map_err(|err| CliError::Parse {
        what,
        src: text.to_owned(),
        err,
    })?;
    dsl::eval_constant(&e).map_err(|err| match err {
        Error::InvalidArgument(msg) => CliError::Usage(format!("--{what}: {msg}")),
        err => CliError::numeric(err, Some(text)),
    })
}

fn samples(n: usize) -> CliResult<usize> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    Ok(n)
}

fn tolerance(tol: Option<f64>) -> CliResult<f64> {
    let tol = tol.unwrap_or(CHECK_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive and finite, got {tol}")));
    }
    Ok(tol)
}

fn emit(common: &Common, text: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn vec_cells(v: &DualVec3) -> Vec<f64> {
    let (re, du) = (v.re(), v.du());
    vec![re[0], re[1], re[2], du[0], du[1], du[2]]
}

fn vec_header(name: &str) -> Vec<String> {
    ["re_x", "re_y", "re_z", "du_x", "du_y", "du_z"]
        .iter()
        .map(|c| if name.is_empty() { c.to_string() } else { format!("{name}_{c}") })
        .collect()
}

fn header_refs(h: &[String]) -> Vec<&str> {
    h.iter().map(String::as_str).collect()
}

#[derive(Serialize)]
struct FrenetOutput<'a> {
    curve: &'a str,
    samples: &'a [FrenetData],
}

pub fn frenet(a: &CurveArgs) -> CliResult<()> {
    let c = load(&a.source)?;
    let n = samples(a.n)?;
    let data = dualcurve::sample_frenet(&c.curve, a.source.from, a.source.to, n)
        .map_err(|e| CliError::numeric(e, Some(&c.src)))?;
    let text = match a.common.format {
        Format::Json => json(&FrenetOutput {
            curve: &c.canonical,
            samples: &data,
        }),
        Format::Csv => {
            let mut h = vec!["t".to_string(), "kappa_re".into(), "kappa_du".into(), "tau_re".into(), "tau_du".into()];
            for name in ["T", "N", "B"] {
                h.extend(vec_header(name));
            }
            csv(
                &header_refs(&h),
                data.iter().map(|f| {
                    let mut row = vec![f.t, f.kappa.re, f.kappa.du, f.tau.re, f.tau.du];
                    for v in [&f.tangent, &f.normal, &f.binormal] {
                        row.extend(vec_cells(v));
                    }
                    row
                }),
            )
        }
    };
    emit(&a.common, &text)
}

#[derive(Serialize)]
struct PointSample {
    t: f64,
    point: DualVec3,
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    curve: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<DualScalar>,
    samples: Vec<PointSample>,
}

fn point_samples(curve: &DualCurve, from: f64, to: f64, n: usize, src: &str) -> CliResult<Vec<PointSample>> {
    let ts = par::linspace(from, to, n);
    par::try_map(n, |i| {
        Ok(PointSample {
            t: ts[i],
            point: curve.position(ts[i])?,
        })
    })
    .map_err(|e| CliError::numeric(e, Some(src)))
}

fn emit_points(common: &Common, out: &SampleOutput) -> CliResult<()> {
    let text = match common.format {
        Format::Json => json(out),
        Format::Csv => {
            let mut h = vec!["t".to_string()];
            h.extend(vec_header(""));
            csv(
                &header_refs(&h),
                out.samples.iter().map(|p| {
                    let mut row = vec![p.t];
                    row.extend(vec_cells(&p.point));
                    row
                }),
            )
        }
    };
    emit(common, &text)
}

pub fn sample(a: &CurveArgs) -> CliResult<()> {
    let c = load(&a.source)?;
    let n = samples(a.n)?;
    let out = SampleOutput {
        curve: &c.canonical,
        lambda: None,
        samples: point_samples(&c.curve, a.source.from, a.source.to, n, &c.src)?,
    };
    emit_points(&a.common, &out)
}

pub fn bertrand_offset(a: &OffsetArgs) -> CliResult<()> {
    let c = load(&a.source)?;
    let n = samples(a.n)?;
    let lambda = dual_constant("lambda", &a.lambda)?;
    let beta = bertrand::offset_curve(&c.curve, lambda);
    let out = SampleOutput {
        curve: &c.canonical,
        lambda: Some(lambda),
        samples: point_samples(&beta, a.source.from, a.source.to, n, &c.src)?,
    };
    emit_points(&a.common, &out)
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    curve: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve2: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<DualScalar>,
    report: &'a BertrandReport,
}

fn failed_criteria(r: &BertrandReport) -> Vec<&'static str> {
    let c = &r.criteria;
    [
        ("normal_alignment", c.normal_alignment.pass),
        ("distance", c.distance.pass),
        ("angle", c.angle.pass),
        ("relation", c.relation.pass),
        ("frenet_identity", c.frenet_identity.pass),
    ]
    .into_iter()
    .filter(|(_, pass)| !pass)
    .map(|(name, _)| name)
    .collect()
}

fn report_csv(r: &BertrandReport) -> String {
    let header = [
        "t",
        "u_re",
        "u_du",
        "distance_re",
        "distance_du",
        "cos_re",
        "cos_du",
        "normal_cross_re",
        "normal_cross_du",
        "speed_ratio_re",
        "speed_ratio_du",
        "frenet_identity_residual",
    ];
    let rows = (0..r.parameters.len()).map(|i| {
        vec![
            r.parameters[i],
            r.correspondence[i].re,
            r.correspondence[i].du,
            r.distance_samples[i].re,
            r.distance_samples[i].du,
            r.cos_samples[i].re,
            r.cos_samples[i].du,
            r.normal_alignment[i][0],
            r.normal_alignment[i][1],
            r.speed_ratio[i].re,
            r.speed_ratio[i].du,
            r.frenet_identity_residual[i],
        ]
    });
    csv(&header, rows)
}

fn verdict(r: &BertrandReport) -> CliResult<()> {
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!("not a Bertrand pair; failed: {}", failed_criteria(r).join(", "))))
    }
}

pub fn bertrand_check(a: &CheckArgs) -> CliResult<()> {
    let c = load(&a.source)?;
    let n = samples(a.n)?;
    let tol = tolerance(a.tol)?;
    let (beta, second, lambda) = match (&a.curve2, &a.lambda) {
        (Some(src), _) => {
            let b = compile("curve2", src.clone(), domain(&a.source)?)?;
            (b.curve, Some(b.canonical), None)
        }
        (None, Some(text)) => {
            let lambda = dual_constant("lambda", text)?;
            (bertrand::offset_curve(&c.curve, lambda), None, Some(lambda))
        }
        (None, None) => return Err(CliError::Usage("one of --curve2 or --lambda is required".into())),
    };
    let report = bertrand::check_bertrand_pair(&c.curve, &beta, n, tol).map_err(|e| CliError::numeric(e, None))?;
    let text = match a.common.format {
        Format::Json => json(&CheckOutput {
            curve: &c.canonical,
            curve2: second.as_deref(),
            lambda,
            report: &report,
        }),
        Format::Csv => report_csv(&report),
    };
    emit(&a.common, &text)?;
    verdict(&report)
}

#[derive(Serialize)]
struct InvoluteSample {
    s: f64,
    point: DualVec3,
    tau: DualScalar,
}

#[derive(Serialize)]
struct InvoluteOutput<'a> {
    curve: &'a str,
    c: DualScalar,
    base_length: DualScalar,
    samples: Vec<InvoluteSample>,
}

#[derive(Serialize)]
struct InvolutePairOutput<'a> {
    curve: &'a str,
    c: DualScalar,
    c2: DualScalar,
    base_length: DualScalar,
    report: &'a InvolutePairReport,
}

pub fn involute(a: &InvoluteArgs) -> CliResult<()> {
    let loaded = load(&a.source)?;
    let c = dual_constant("c", &a.c)?;
    let tol = tolerance(a.tol)?;
    let numeric = |e| CliError::numeric(e, Some(&loaded.src));
    let reparam = dualcurve::ArcLengthReparam::new(&loaded.curve, ARC_PANELS).map_err(numeric)?;
    let length = reparam.total_length();
    let unit = reparam.into_curve().map_err(numeric)?;
    let spec = InvoluteSpec::new(c, unit.domain()).map_err(numeric)?;

    if let Some(c2_text) = &a.c2 {
        let c2 = dual_constant("c2", c2_text)?;
        let n = samples(a.n.unwrap_or(dualcurve::tol::CHECK_SAMPLES))?;
        let report = bertrand::check_theorem4(&unit, c, c2, n, tol).map_err(numeric)?;
        let text = match a.common.format {
            Format::Json => json(&InvolutePairOutput {
                curve: &loaded.canonical,
                c,
                c2,
                base_length: length,
                report: &report,
            }),
            Format::Csv => report_csv(&report.pair),
        };
        emit(&a.common, &text)?;
        if !report.planarity.pass {
            return Err(CliError::Failed(format!(
                "involute torsion {:e} exceeds {tol:e}",
                report.planarity.max_deviation
            )));
        }
        return verdict(&report.pair);
    }

    let n = samples(a.n.unwrap_or(10))?;
    let inv = bertrand::involute_on(&unit, &spec).map_err(numeric)?;
    let window = spec.window;
    let ss = par::linspace(window.min, window.max, n);
    let data = par::try_map(n, |i| {
        Ok(InvoluteSample {
            s: ss[i],
            point: inv.position(ss[i])?,
            tau: bertrand::involute_torsion(&unit, c, ss[i])?,
        })
    })
    .map_err(numeric)?;
    let text = match a.common.format {
        Format::Json => json(&InvoluteOutput {
            curve: &loaded.canonical,
            c,
            base_length: length,
            samples: data,
        }),
        Format::Csv => {
            let mut h = vec!["s".to_string()];
            h.extend(vec_header(""));
            h.extend(["tau_re".to_string(), "tau_du".to_string()]);
            csv(
                &header_refs(&h),
                data.iter().map(|p| {
                    let mut row = vec![p.s];
                    row.extend(vec_cells(&p.point));
                    row.extend([p.tau.re, p.tau.du]);
                    row
                }),
            )
        }
    };
    emit(&a.common, &text)
}

fn roundtrip_error(line: &OrientedLine) -> Result<f64, Error> {
    let rec = OrientedLine::from_dual_unit(&line.to_dual_unit())?;
    let back = OrientedLine::from_point_dir(rec.closest_point, rec.line.direction)?;
    let mut err: f64 = 0.0;
    for k in 0..3 {
        err = err
            .max((back.direction[k] - line.direction[k]).abs())
            .max((back.moment[k] - line.moment[k]).abs());
    }
    Ok(err)
}

#[derive(Serialize)]
struct RoundTripOutput {
    lines: usize,
    seed: u64,
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SingleRoundTrip {
    dual: DualVec3,
    line: OrientedLine,
    roundtrip_error: f64,
    pass: bool,
}

pub fn to_dual(a: &ToDualArgs) -> CliResult<()> {
    let numeric = |e| CliError::numeric(e, None);
    match (a.point, a.dir) {
        (Some(p), Some(d)) => {
            let line = OrientedLine::from_point_dir(p, d).map_err(numeric)?;
            let dual = line.to_dual_unit();
            if a.roundtrip {
                let err = roundtrip_error(&line).map_err(numeric)?;
                let pass = err <= ROUNDTRIP_TOL;
                let text = match a.common.format {
                    Format::Json => json(&SingleRoundTrip {
                        dual,
                        line,
                        roundtrip_error: err,
                        pass,
                    }),
                    Format::Csv => {
                        let mut h = vec_header("");
                        h.push("roundtrip_error".into());
                        let mut row = vec_cells(&dual);
                        row.push(err);
                        csv(&header_refs(&h), [row])
                    }
                };
                emit(&a.common, &text)?;
                return if pass {
                    Ok(())
                } else {
                    Err(CliError::Failed(format!("round-trip error {err:e} exceeds {ROUNDTRIP_TOL:e}")))
                };
            }
            let text = match a.common.format {
                Format::Json => json(&dual),
                Format::Csv => csv(&header_refs(&vec_header("")), [vec_cells(&dual)]),
            };
            emit(&a.common, &text)
        }
        _ if a.roundtrip => {
            let mut rng = ChaCha8Rng::seed_from_u64(ROUNDTRIP_SEED);
            let mut max_error: f64 = 0.0;
            let mut lines = 0;
            while lines < ROUNDTRIP_LINES {
                let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-10.0..10.0));
                let d: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let Ok(line) = OrientedLine::from_point_dir(p, d) else { continue };
                max_error = max_error.max(roundtrip_error(&line).map_err(numeric)?);
                lines += 1;
            }
            let out = RoundTripOutput {
                lines,
                seed: ROUNDTRIP_SEED,
                max_error,
                tolerance: ROUNDTRIP_TOL,
                pass: max_error <= ROUNDTRIP_TOL,
            };
            let text = match a.common.format {
                Format::Json => json(&out),
                Format::Csv => csv(&["lines", "max_error"], [vec![lines as f64, max_error]]),
            };
            emit(&a.common, &text)?;
            if out.pass {
                Ok(())
            } else {
                Err(CliError::Failed(format!("round-trip error {max_error:e} exceeds {ROUNDTRIP_TOL:e}")))
            }
        }
        _ => Err(CliError::Usage("--point and --dir are required unless --roundtrip is given".into())),
    }
}

pub fn to_line(a: &ToLineArgs) -> CliResult<()> {
    let rec: LineRecord =
        OrientedLine::from_dual_unit(&DualVec3::from_parts(a.re, a.du)).map_err(|e| CliError::numeric(e, None))?;
    let text = match a.common.format {
        Format::Json => json(&rec),
        Format::Csv => {
            let h = [
                "dir_x", "dir_y", "dir_z", "moment_x", "moment_y", "moment_z", "closest_x", "closest_y", "closest_z",
            ];
            let mut row = rec.line.direction.to_vec();
            row.extend(rec.line.moment);
            row.extend(rec.closest_point);
            csv(&h, [row])
        }
    };
    emit(&a.common, &text)
}
