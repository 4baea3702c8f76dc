use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use danielewski::algebra::{parse_rational, rat, UniPoly};
use danielewski::certificate::Certificate;
use danielewski::fibration::{
    euler_report, verify_conic_pencil_identity, verify_deg4_parametrization,
    verify_nu0_eigenvalue, verify_trivialization, FibrationSpec, Quartic,
};
use danielewski::graphcalc::{
    classify_zigzag, contract_to_minimal, make_standard_from_semistandard,
    normalize_via_zero_moves, parse_steps, reversion, GraphJson, PathGraph, Snapshot,
    TranscriptEntry, WeightedGraph, Zigzag,
};
use danielewski::surface::{Surface, SurfaceDef, SurfaceError};
use danielewski::vfield::{
    build_family, generators, nu0, preserves_fibration, FamilyParams, FieldError, FieldJson,
    PolyFlow, VectorField,
};

/// Exact certificates for vector fields, fibrations and boundary zigzags
/// of Danielewski surfaces `xy = p(z)`.
#[derive(Parser)]
#[command(name = "danielewski", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the families of complete vector fields available for `p`
    Classify {
        #[arg(long = "p")]
        p: String,
        #[command(flatten)]
        out: Output,
    },
    /// Check tangency, family conditions and fibration preservation
    VerifyField(VerifyFieldArgs),
    /// Apply blow-ups, blow-downs and zigzag moves
    Graph(GraphArgs),
    /// Fiber data and identity certificates for a fibration
    Fibration(FibrationArgs),
    /// Run a fixed set of certificates with known outcomes
    Selftest {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyFieldArgs {
    #[arg(long = "p")]
    p: String,
    /// `{"nu_x": .., "nu_y": .., "nu_z": ..}`
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    field: Option<PathBuf>,
    /// Family parameters, tagged by `"family"`
    #[arg(long)]
    family: Option<PathBuf>,
    /// Fibration to test; defaults to the family's own, or `x` for a raw field
    #[arg(long)]
    fibration: Option<PathBuf>,
    #[arg(long, default_value_t = 32)]
    degree_cap: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphAction {
    /// `[[0,0,w2,..]] -> [[w2,..,0,0]]`
    Revert,
    /// Reach a standard zigzag through zero moves
    Normalize,
    /// Semistandard to standard via `MakeZero`
    Standardize,
    /// Blow down (-1)-vertices until minimal
    Contract,
    /// Report the zigzag class only
    Classify,
}

#[derive(Args)]
struct GraphArgs {
    /// Zigzag such as `[[0,0,-3]]`
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    zigzag: Option<String>,
    /// Weighted graph JSON `{"vertices": [..], "edges": [..]}`
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Comma-separated steps, e.g. `movezero@1:left,blowdown@3`
    #[arg(long)]
    steps: Option<String>,
    action: Option<GraphAction>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct FibrationArgs {
    #[arg(long = "p")]
    p: String,
    /// `{"type": "coord_x" | "coord_z" | "two_section" | "double_section", ..}`
    #[arg(long)]
    fibration: PathBuf,
    /// Fiber parameter for the quartic certificates
    #[arg(long, requires = "xi", allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Square root of `alpha + b^2/4 - c`
    #[arg(long, requires = "alpha", allow_hyphen_values = true)]
    xi: Option<String>,
    #[command(flatten)]
    out: Output,
}

/// What a command produced: text for the terminal, a JSON report and the
/// certificates that decide the exit code.
struct Report {
    lines: Vec<String>,
    json: Value,
    certificates: Vec<Certificate>,
}

impl Report {
    fn new() -> Self {
        Report {
            lines: Vec::new(),
            json: json!({}),
            certificates: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn certify(&mut self, c: Certificate) {
        self.lines.push(c.to_string());
        self.certificates.push(c);
    }

    fn all_verified(&self) -> bool {
        self.certificates.iter().all(Certificate::verified)
    }

    fn finish(mut self, out: &Output) -> Result<ExitCode> {
        for l in &self.lines {
            println!("{l}");
        }
        if let Some(path) = &out.json {
            self.json["certificates"] = serde_json::to_value(&self.certificates)?;
            self.json["all_verified"] = json!(self.all_verified());
            write_json(path, &self.json)?;
        }
        Ok(if self.all_verified() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        })
    }
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if path == Path::new("-") {
        println!("{text}");
    } else {
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn surface(p: &str) -> Result<Surface> {
    SurfaceDef::parse(p).map_err(|e| match e {
        SurfaceError::MultipleZeros { gcd } => {
            anyhow!("p has a multiple zero; witness gcd(p, p') = {}", gcd.format("z"))
        }
        other => anyhow!("invalid p: {other}"),
    })
}

fn classify(p: &str, out: &Output) -> Result<ExitCode> {
    let s = surface(p)?;
    let k = s.degree();
    let boundary = Zigzag(vec![0, 0, -(k as i64)]);
    let mut r = Report::new();
    r.line(format!("p = {}  (deg {k}, simple zeros)", s.p()));
    r.line(format!("boundary zigzag {boundary}: {}", classify_zigzag(&boundary)));
    let mut families = vec![
        json!({
            "family": 1,
            "available": true,
            "field": "c*HF + (A(x)*z + B(x))*SF^x",
            "fibration": "x",
            "constraints": "c in Q, A, B in Q[x]",
        }),
        json!({
            "family": 2,
            "available": true,
            "field": "alpha*SF^x + n*A(f)*HF",
            "fibration": "f = x^m (x^l (z+a) + Q(x))^n",
            "constraints": "m, n >= 1 coprime, l >= 0, deg Q < l, A(0) = c/(m+nl), \
                            A(f)(mQ + nxQ') - cQ in x^(l+1) C[S]",
        }),
    ];
    let f3 = if k == 4 {
        let a = s.leading_coeff();
        json!({
            "family": 3,
            "available": true,
            "field": "A(f)*nu0",
            "nu0": nu0(&s)?.to_json(),
            "fibration": format!("f = {}", FibrationSpec::DoubleSection.as_surface_elem(&s)?),
            "constraints": format!("A in Q[t]; a = {a}"),
        })
    } else {
        json!({
            "family": 3,
            "available": false,
            "reason": format!("needs deg p = 4, got {k}"),
        })
    };
    families.push(f3);
    for f in &families {
        let head = format!("family ({})", f["family"]);
        if f["available"] == json!(true) {
            r.line(format!("{head}: {}  preserving {}", f["field"].as_str().unwrap_or(""), f["fibration"].as_str().unwrap_or("")));
            r.line(format!("    {}", f["constraints"].as_str().unwrap_or("")));
        } else {
            r.line(format!("{head}: unavailable ({})", f["reason"].as_str().unwrap_or("")));
        }
    }
    r.json = json!({
        "p": s.p().to_string(),
        "degree": k,
        "boundary_zigzag": boundary.to_string(),
        "families": families,
    });
    r.finish(out)
}

fn h_certificate(
    field: &VectorField,
    spec: &FibrationSpec,
    s: &Surface,
    cap: usize,
    expected: Option<&UniPoly>,
) -> Result<Certificate> {
    let f = spec.as_surface_elem(s)?;
    let inputs = json!({ "field": field.to_json(), "fibration": spec, "f": f.to_string(), "degree_cap": cap });
    let claim = format!("nu(f) = h(f) for f = {f}");
    Ok(match preserves_fibration(field, &f, cap) {
        Ok(Some(h)) => {
            let matches = expected.is_none_or(|e| *e == h);
            let mut cert = Certificate::with_status(claim, matches, inputs);
            let mut details = json!({ "h": h.format("t"), "nu(f)": field.apply(&f).to_string() });
            if let Some(e) = expected {
                details["expected_h"] = json!(e.format("t"));
            }
            cert = cert.details(details);
            cert
        }
        Ok(None) => Certificate::with_status(claim, false, inputs)
            .details(json!({ "nu(f)": field.apply(&f).to_string(), "reason": "no polynomial h exists" })),
        Err(FieldError::Cap { cap }) => Certificate::with_status(claim, false, inputs).details(
            json!({ "nu(f)": field.apply(&f).to_string(), "reason": format!("no h up to degree {cap}; inconclusive") }),
        ),
        Err(e) => return Err(e.into()),
    })
}

fn tangency_certificate(field: &VectorField) -> Certificate {
    Certificate::from_residue(
        "x*nu_y + y*nu_x - p'(z)*nu_z = 0 in C[S]",
        field.tangency_residue(),
        json!({ "field": field.to_json(), "p": field.surface().p().to_string() }),
    )
}

fn verify_field(args: &VerifyFieldArgs) -> Result<ExitCode> {
    let s = surface(&args.p)?;
    let mut r = Report::new();
    let override_spec: Option<FibrationSpec> = args.fibration.as_deref().map(read_json).transpose()?;
    if let Some(spec) = &override_spec {
        spec.validate(&s)?;
    }
    let (field, spec, expected) = if let Some(path) = &args.family {
        let params: FamilyParams = read_json(path)?;
        r.json["family"] = serde_json::to_value(&params)?;
        match build_family(&params, &s) {
            Ok(field) => {
                r.certify(Certificate::with_status(
                    "family parameters satisfy the side conditions",
                    true,
                    serde_json::to_value(&params)?,
                ));
                let expected = override_spec.is_none().then(|| params.expected_h());
                (field, override_spec.unwrap_or_else(|| params.fibration()), expected)
            }
            Err(FieldError::Validation { condition, witness }) => {
                r.certify(
                    Certificate::with_status(
                        format!("family parameters satisfy {condition}"),
                        false,
                        serde_json::to_value(&params)?,
                    )
                    .details(json!({ "witness": witness })),
                );
                r.line(format!("    witness: {witness}"));
                return r.finish(&args.out);
            }
            Err(FieldError::NotRegular { component, source }) => {
                r.certify(
                    Certificate::with_status(format!("{component} lies in C[S]"), false, serde_json::to_value(&params)?)
                        .details(json!({ "witness": source.to_string() })),
                );
                return r.finish(&args.out);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let path = args.field.as_ref().expect("clap enforces one input");
        let json: FieldJson = read_json(path)?;
        let field = VectorField::from_json(&s, &json)?;
        (field, override_spec.unwrap_or(FibrationSpec::CoordX), None)
    };
    r.json["field"] = serde_json::to_value(field.to_json())?;
    let tangency = tangency_certificate(&field);
    let tangent = tangency.verified();
    r.certify(tangency);
    if tangent {
        let cert = h_certificate(&field, &spec, &s, args.degree_cap, expected.as_ref())?;
        let h = cert.details.as_ref().and_then(|d| d.get("h")).and_then(Value::as_str).map(String::from);
        r.certify(cert);
        if let Some(h) = h {
            r.line(format!("    h(t) = {h}"));
        }
    }
    r.finish(&args.out)
}

fn snapshot_text(s: &Snapshot) -> String {
    match s {
        Snapshot::Zigzag(z) => z.clone(),
        Snapshot::Graph(g) => serde_json::to_string(g).unwrap_or_default(),
    }
}

fn graph_cmd(args: &GraphArgs) -> Result<ExitCode> {
    let mut r = Report::new();
    let mut transcript: Vec<TranscriptEntry> = Vec::new();
    let mut elementary = Vec::new();
    let steps = args.steps.as_deref().map(parse_steps).transpose()?.unwrap_or_default();

    let start_graph = match &args.graph {
        Some(path) => Some(WeightedGraph::from_json(&read_json::<GraphJson>(path)?)?),
        None => None,
    };
    let start_path = match (&args.zigzag, &start_graph) {
        (Some(z), _) => Some(PathGraph::from_zigzag(&z.parse::<Zigzag>()?)),
        (None, Some(g)) => PathGraph::from_graph(g).ok(),
        (None, None) => unreachable!("clap enforces one input"),
    };

    let before = match (&start_path, &start_graph) {
        (Some(p), _) => p.zigzag().to_string(),
        (None, Some(g)) => serde_json::to_string(&g.to_json())?,
        _ => unreachable!(),
    };
    r.line(format!("start: {before}"));

    // Steps first, then the named action on the result.
    let (mut path, mut graph) = (start_path, start_graph);
    if !steps.is_empty() {
        if let Some(p) = &path {
            let mut cur = p.clone();
            for s in &steps {
                elementary.extend(cur.expand(s)?);
                let (next, log) = cur.replay(std::slice::from_ref(s))?;
                transcript.extend(log);
                cur = next;
            }
            graph = Some(cur.graph.clone());
            path = Some(cur);
        } else {
            let mut cur = graph.clone().expect("graph input");
            for s in &steps {
                let next = cur.apply(s)?;
                transcript.push(TranscriptEntry {
                    step: s.clone(),
                    before: Snapshot::Graph(cur.to_json()),
                    after: Snapshot::Graph(next.to_json()),
                });
                elementary.push(s.clone());
                cur = next;
            }
            path = PathGraph::from_graph(&cur).ok();
            graph = Some(cur);
        }
    }

    let mut result = path.as_ref().map(|p| p.zigzag());
    match args.action {
        None => {}
        Some(GraphAction::Contract) => {
            let g = graph.clone().unwrap_or_else(|| path.as_ref().expect("input").graph.clone());
            let (min, log) = contract_to_minimal(&g);
            elementary.extend(log.iter().map(|e| e.step.clone()));
            transcript.extend(log);
            result = PathGraph::from_graph(&min).ok().map(|p| p.zigzag());
            if result.is_none() {
                r.json["result_graph"] = serde_json::to_value(min.to_json())?;
                r.line(format!("result: {}", serde_json::to_string(&min.to_json())?));
            }
        }
        Some(action) => {
            let z = result.clone().ok_or_else(|| anyhow!("this action needs a linear graph"))?;
            let named = match action {
                GraphAction::Revert => Some(reversion(&z)?),
                GraphAction::Normalize => Some(normalize_via_zero_moves(&z)?),
                GraphAction::Standardize => Some(make_standard_from_semistandard(&z)?),
                GraphAction::Classify => None,
                GraphAction::Contract => unreachable!(),
            };
            if let Some((_, moves)) = named {
                let mut cur = PathGraph::from_zigzag(&z);
                for s in &moves {
                    elementary.extend(cur.expand(s)?);
                    let (next, log) = cur.replay(std::slice::from_ref(s))?;
                    transcript.extend(log);
                    cur = next;
                }
                result = Some(cur.zigzag());
            }
        }
    }

    for e in &transcript {
        r.line(format!("  {}: {} -> {}", e.step, snapshot_text(&e.before), snapshot_text(&e.after)));
    }
    let elementary_text: Vec<String> = elementary.iter().map(ToString::to_string).collect();
    if !elementary_text.is_empty() {
        r.line(format!("elementary: {}", elementary_text.join(",")));
    }
    if let Some(z) = &result {
        r.line(format!("result: {z}"));
        r.line(format!("class: {}", classify_zigzag(z)));
        r.json["result"] = json!(z.to_string());
        r.json["class"] = serde_json::to_value(classify_zigzag(z))?;
    }
    r.json["start"] = json!(before);
    r.json["transcript"] = serde_json::to_value(&transcript)?;
    r.json["elementary_steps"] = json!(elementary_text);
    r.finish(&args.out)
}

fn fibration_cmd(args: &FibrationArgs) -> Result<ExitCode> {
    let s = surface(&args.p)?;
    let spec: FibrationSpec = read_json(&args.fibration)?;
    spec.validate(&s)?;
    let mut r = Report::new();
    let f = spec.as_surface_elem(&s)?;
    r.line(format!("f = {f}"));
    let report = euler_report(&spec, &s)?;
    r.line(format!(
        "generic fiber {}; special values: roots of {} ({} distinct)",
        report.generic_fiber, report.special_values, report.special_count
    ));
    for sf in &report.special_fibers {
        let chi = sf.chi.map_or("unassigned".to_string(), |c| c.to_string());
        r.line(format!("  over {}: {} x {} (chi {chi})", sf.over, sf.count, sf.shape));
    }
    match report.chi_s {
        Some(chi) => r.certify(
            Certificate::with_status("chi(S) = deg p from the fibration formula", chi == s.degree() as i64, json!({ "fibration": spec, "p": s.p().to_string() }))
                .details(json!({ "chi_S": chi, "deg_p": s.degree(), "formula": report.formula })),
        ),
        None => r.line("chi(S): not assigned for this fibration"),
    }
    if let FibrationSpec::TwoSection { .. } = spec {
        r.certify(verify_trivialization(&spec)?);
    }
    if spec == FibrationSpec::DoubleSection {
        if let (Some(alpha), Some(xi)) = (&args.alpha, &args.xi) {
            let q = Quartic::numeric(&s, &parse_rational(alpha)?, &parse_rational(xi)?)?;
            r.certify(verify_deg4_parametrization(&q, None)?);
            r.certify(verify_nu0_eigenvalue(&q, None)?);
        }
        r.certify(verify_conic_pencil_identity(None, None, &rat(0))?);
    }
    r.json["f"] = json!(f.to_string());
    r.json["report"] = serde_json::to_value(&report)?;
    r.finish(&args.out)
}

fn selftest(out: &Output) -> Result<ExitCode> {
    let mut r = Report::new();
    for p in ["z^2 - 1", "z^3 - z", "z^4 - 1"] {
        let s = surface(p)?;
        let g = generators(&s);
        for (name, v) in [("HF", &g.hf), ("SF^x", &g.sfx), ("SF^y", &g.sfy)] {
            r.certify(Certificate::from_residue(format!("{name} is tangent on xy = {p}"), v.tangency_residue(), json!({ "p": p })));
        }
        r.certify(Certificate::with_status(
            format!("[HF, SF^x] = SF^x and [HF, SF^y] = -SF^y on xy = {p}"),
            g.hf.bracket(&g.sfx) == g.sfx && g.hf.bracket(&g.sfy) == -&g.sfy,
            json!({ "p": p }),
        ));
        r.certify(Certificate::with_status(
            format!("HF flow on xy = {p}"),
            PolyFlow::hf(&s).verify()?,
            json!({ "p": p }),
        ));
        r.certify(h_certificate(&g.hf, &FibrationSpec::CoordX, &s, 4, Some(&UniPoly::identity()))?);
    }
    let s = surface("z^4 - 1")?;
    let family3 = build_family(&FamilyParams::Family3 { a: UniPoly::one() }, &s)?;
    r.certify(h_certificate(&family3, &FibrationSpec::DoubleSection, &s, 4, Some(&UniPoly::zero()))?);
    let q = Quartic::numeric(&s, &rat(4), &rat(2))?;
    r.certify(verify_deg4_parametrization(&q, None)?);
    r.certify(verify_nu0_eigenvalue(&q, None)?);
    r.certify(verify_conic_pencil_identity(None, None, &rat(0))?);
    let spec = FibrationSpec::TwoSection { m: 2, n: 3, l: 1, a: rat(1), q: UniPoly::from_ints(&[5]) };
    r.certify(verify_trivialization(&spec)?);
    let (z, _) = reversion(&"[[0,0,-3]]".parse()?)?;
    r.certify(Certificate::with_status("reversion of [[0,0,-3]] is [[-3,0,0]]", z.to_string() == "[[-3,0,0]]", json!({})));
    r.json["command"] = json!("selftest");
    r.finish(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { p, out } => classify(&p, &out),
        Command::VerifyField(a) => verify_field(&a),
        Command::Graph(a) => graph_cmd(&a),
        Command::Fibration(a) => fibration_cmd(&a),
        Command::Selftest { out } => selftest(&out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
