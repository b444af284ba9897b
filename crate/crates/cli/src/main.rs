//! Command line front end: descriptor ingestion, face-lattice and quotient
//! exports, and the symbolic skeleton operations.
//!
//! Exit codes: 0 success, 2 descriptor/validation failure, 3 domain error.
//! Errors go to stderr as a JSON object with an `errors` list; validation
//! failures cite the violated axiom by its short code name.

mod doc;

use clap::{Parser, Subcommand, ValueEnum};
use polyskel::complex::{coequalize, StrictDualComplex};
use polyskel::error::Error;
use polyskel::geometry::RealizationPoint;
use polyskel::rat::{format_rat, ExtRat};
use polyskel::skeleton::{
    closure_membership, flow, generic_unit_oracle, reduction_stratum, seminorm_eval, sigma,
    star_eval, tau, trop, Membership, SkeletalPoint, StandardPairModel,
};
use polyskel::strata::validate_descriptor;
use serde_json::{json, Value};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "polyskel", about = "Dual complexes and extended skeletons of standard pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file (defaults to stdin).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampling commands (reserved; output stays deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Interpretation mode for models and points.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Standard)]
    mode: Mode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Standard,
    Closure,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a descriptor and list its strata.
    Strata,
    /// Build the strict dual complex and emit its face lattice.
    Complex,
    /// Apply descent data and emit the quotient lattice.
    Glue,
    /// Symbolic operations on skeletal points of a standard-pair model.
    Skeleton {
        #[command(subcommand)]
        op: SkeletonOp,
    },
    /// Closure membership queries on extended coordinate records.
    Closure,
    /// Export trajectories (csv) or a vertex/edge dump (off).
    Export,
}

#[derive(Subcommand)]
enum SkeletonOp {
    /// Coordinate record of a point.
    Trop,
    /// Monomial-point section of trop.
    Sigma,
    /// Retraction onto the skeleton.
    Tau,
    /// Deformation trajectory over a parameter grid.
    Flow,
    /// Reduction stratum and genericity of a point.
    Reduce,
    /// Seminorm of a polynomial at a point (and the flow translate when a
    /// parameter is given).
    Eval,
}

struct Failure {
    code: u8,
    value: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Descriptor(msg) => Failure {
                code: 2,
                value: json!({ "errors": [{ "detail": msg }] }),
            },
            Error::Domain(msg) => Failure {
                code: 3,
                value: json!({ "errors": [{ "detail": msg }] }),
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let payload = if out.ends_with('\n') { out } else { out + "\n" };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, payload) {
                        eprintln!("{}", json!({ "errors": [{ "detail": e.to_string() }] }));
                        return ExitCode::from(3);
                    }
                }
                None => print!("{payload}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&f.value).unwrap_or_default()
            );
            ExitCode::from(f.code)
        }
    }
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    let bytes = match &cli.input {
        Some(path) => std::fs::read(path).map_err(|e| Failure {
            code: 2,
            value: json!({ "errors": [{ "detail": format!("cannot read input: {e}") }] }),
        })?,
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(|e| Failure {
                code: 2,
                value: json!({ "errors": [{ "detail": format!("cannot read stdin: {e}") }] }),
            })?;
            buf
        }
    };
    serde_json::from_slice(&bytes).map_err(|e| Failure {
        code: 2,
        value: json!({ "errors": [{ "detail": format!("malformed JSON: {e}") }] }),
    })
}

fn parsed_pair(value: &Value) -> Result<polyskel::strata::PairDescriptor, Failure> {
    match doc::descriptor_from_json(value)? {
        doc::ParsedDescriptor::Pair(d) => Ok(d),
        doc::ParsedDescriptor::Descent { .. } => Err(Failure {
            code: 2,
            value: json!({ "errors": [{ "detail": "this command expects a pair descriptor, not descent data" }] }),
        }),
    }
}

fn validated(desc: polyskel::strata::PairDescriptor) -> Result<polyskel::strata::PairDescriptor, Failure> {
    let report = validate_descriptor(&desc);
    if report.is_valid() {
        Ok(desc)
    } else {
        let errors: Vec<Value> = report
            .violations
            .iter()
            .map(|v| json!({ "axiom": v.axiom, "detail": v.detail }))
            .collect();
        Err(Failure {
            code: 2,
            value: json!({ "errors": errors }),
        })
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let input = read_input(cli)?;
    match &cli.command {
        Command::Strata => cmd_strata(cli, &input),
        Command::Complex => cmd_complex(&input).map(|v| pretty(&v)),
        Command::Glue => cmd_glue(&input),
        Command::Skeleton { op } => cmd_skeleton(cli, op, &input),
        Command::Closure => cmd_closure(&input),
        Command::Export => cmd_export(cli, &input),
    }
}

fn cmd_strata(cli: &Cli, input: &Value) -> Result<String, Failure> {
    let desc = validated(parsed_pair(input)?)?;
    match cli.format {
        Format::Csv => {
            let mut out = String::from("id,kind,codim,a_x,a_h\n");
            for st in desc.strata() {
                let kind = match st.kind {
                    polyskel::strata::StratumKind::X => "x",
                    polyskel::strata::StratumKind::H => "h",
                };
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    st.id,
                    kind,
                    st.codim(),
                    st.a_x.iter().cloned().collect::<Vec<_>>().join("|"),
                    st.a_h.iter().cloned().collect::<Vec<_>>().join("|"),
                ));
            }
            Ok(out)
        }
        _ => {
            let strata: Vec<Value> = desc
                .strata()
                .iter()
                .map(|st| {
                    json!({
                        "id": st.id,
                        "kind": match st.kind {
                            polyskel::strata::StratumKind::X => "x",
                            polyskel::strata::StratumKind::H => "h",
                        },
                        "codim": st.codim(),
                        "a_x": st.a_x.iter().collect::<Vec<_>>(),
                        "a_h": st.a_h.iter().collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(pretty(&json!({
                "count": desc.strata().len(),
                "strata": strata,
            })))
        }
    }
}

fn build_complex(input: &Value) -> Result<StrictDualComplex, Failure> {
    let desc = validated(parsed_pair(input)?)?;
    Ok(StrictDualComplex::build(desc)?)
}

fn cmd_complex(input: &Value) -> Result<Value, Failure> {
    let complex = build_complex(input)?;
    let desc = complex.descriptor();
    let mut faces = Vec::new();
    let mut f_vector: Vec<u64> = Vec::new();
    for st in desc.strata() {
        let dim = st.codim() as usize;
        if f_vector.len() <= dim {
            f_vector.resize(dim + 1, 0);
        }
        f_vector[dim] += 1;
        faces.push(json!({ "stratum": st.id, "dim": st.codim() }));
    }
    let mut embeddings = Vec::new();
    let mut intersections = Vec::new();
    let ids = desc.stratum_ids();
    for x in &ids {
        for y in &ids {
            if desc.leq(x, y)? {
                embeddings.push(json!({
                    "x": x,
                    "y": y,
                    "morphism": doc::morphism_to_json(complex.face_embedding(x, y)?),
                }));
            }
            if x < y {
                let common = complex.face_intersection(x, y)?;
                intersections.push(json!({
                    "x": x,
                    "y": y,
                    "strata": common.iter().collect::<Vec<_>>(),
                }));
            }
        }
    }
    Ok(json!({
        "descriptor": doc::descriptor_to_json(desc),
        "faces": faces,
        "f_vector": f_vector,
        "embeddings": embeddings,
        "intersections": intersections,
    }))
}

fn cmd_glue(input: &Value) -> Result<String, Failure> {
    let (base, classes, witnesses) = match doc::descriptor_from_json(input)? {
        doc::ParsedDescriptor::Descent {
            base,
            classes,
            witnesses,
        } => (base, classes, witnesses),
        doc::ParsedDescriptor::Pair(_) => {
            return Err(Failure {
                code: 2,
                value: json!({ "errors": [{ "detail": "glue expects a descent document" }] }),
            })
        }
    };
    let base = validated(base)?;
    let glued = coequalize(doc::descent_to_data(base, classes, witnesses)?)?;
    let k = glued.class_count();
    let mut order = Vec::new();
    let mut incidences = Vec::new();
    for p in 0..k {
        for q in 0..k {
            if p != q && glued.leq(p, q) {
                order.push(json!([p, q]));
            }
            let morphisms = glued.incidences(p, q);
            if !morphisms.is_empty() && p != q {
                incidences.push(json!({
                    "p": p,
                    "q": q,
                    "morphisms": morphisms.iter().map(doc::morphism_to_json).collect::<Vec<_>>(),
                }));
            }
        }
    }
    let classes_json: Vec<Value> = (0..k)
        .map(|c| {
            let mut members = glued.members(c);
            members.sort();
            json!({
                "representative": glued.representative(c),
                "members": members,
            })
        })
        .collect();
    Ok(pretty(&json!({
        "class_count": k,
        "classes": classes_json,
        "order": order,
        "incidences": incidences,
    })))
}

fn model_and_point(
    cli: &Cli,
    input: &Value,
) -> Result<(StandardPairModel, SkeletalPoint), Failure> {
    let m = doc::obj(input, "task")?;
    let model = doc::model_from_json(doc::field(m, "model")?, cli.mode == Mode::Closure)?;
    let point = doc::point_from_json(&model, doc::field(m, "point")?)?;
    Ok((model, point))
}

fn trajectory_taus(input: &Value) -> Result<Vec<ExtRat>, Failure> {
    let m = doc::obj(input, "task")?;
    let mut taus = match m.get("taus") {
        Some(v) => doc::string_list(v, "taus")?
            .iter()
            .map(|s| doc::ext_rat_from_str(s))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![
            ExtRat::Infinity,
            ExtRat::from_int(5),
            ExtRat::from_int(2),
            ExtRat::from_int(1),
            ExtRat::zero(),
        ],
    };
    // Rows run with the homotopy time: decreasing τ, from the identity
    // towards the retraction.
    taus.sort_by(|a, b| b.cmp(a));
    taus.dedup();
    Ok(taus)
}

fn trajectory_rows(
    model: &StandardPairModel,
    point: &SkeletalPoint,
    taus: &[ExtRat],
) -> Result<Vec<(ExtRat, SkeletalPoint, RealizationPoint)>, Failure> {
    let mut rows = Vec::new();
    for t in taus {
        let moved = flow(model, point, t)?;
        let record = trop(model, &moved)?;
        rows.push((t.clone(), moved, record));
    }
    Ok(rows)
}

fn trajectory_csv(
    model: &StandardPairModel,
    rows: &[(ExtRat, SkeletalPoint, RealizationPoint)],
) -> String {
    let mut header = vec!["tau".to_string()];
    for (i, &ni) in model.n().iter().enumerate() {
        for j in 0..=ni {
            header.push(format!("v{i}.{j}"));
        }
    }
    for j in 1..=model.d() {
        header.push(format!("c{j}"));
        header.push(format!("u{j}"));
    }
    for j in 1..=model.s() {
        header.push(format!("y{j}"));
    }
    let mut out = header.join(",") + "\n";
    for (t, pt, record) in rows {
        let mut cells = vec![doc::ext_rat_to_string(t)];
        for vi in pt.v() {
            for w in vi {
                cells.push(format_rat(w));
            }
        }
        for dc in pt.coords() {
            cells.push(dc.c.to_string().replace(' ', ""));
            cells.push(doc::ext_rat_to_string(&dc.u));
        }
        for y in record.y() {
            cells.push(doc::ext_rat_to_string(y));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn cmd_skeleton(cli: &Cli, op: &SkeletonOp, input: &Value) -> Result<String, Failure> {
    match op {
        SkeletonOp::Trop => {
            let (model, point) = model_and_point(cli, input)?;
            let record = trop(&model, &point)?;
            Ok(pretty(&json!({ "trop": doc::realization_to_json(&record) })))
        }
        SkeletonOp::Sigma => {
            let m = doc::obj(input, "task")?;
            let model =
                doc::model_from_json(doc::field(m, "model")?, cli.mode == Mode::Closure)?;
            let w = doc::realization_from_json(doc::field(m, "w")?, cli.mode == Mode::Closure)?;
            let point = sigma(&model, &w)?;
            Ok(pretty(&json!({ "point": doc::point_to_json(&point) })))
        }
        SkeletonOp::Tau => {
            let (model, point) = model_and_point(cli, input)?;
            let fixed = tau(&model, &point)?;
            Ok(pretty(&json!({ "point": doc::point_to_json(&fixed) })))
        }
        SkeletonOp::Flow => {
            let (model, point) = model_and_point(cli, input)?;
            let taus = trajectory_taus(input)?;
            let rows = trajectory_rows(&model, &point, &taus)?;
            match cli.format {
                Format::Csv => Ok(trajectory_csv(&model, &rows)),
                _ => {
                    let rows_json: Vec<Value> = rows
                        .iter()
                        .map(|(t, pt, record)| {
                            json!({
                                "tau": doc::ext_rat_to_string(t),
                                "point": doc::point_to_json(pt),
                                "trop": doc::realization_to_json(record),
                            })
                        })
                        .collect();
                    Ok(pretty(&json!({ "trajectory": rows_json })))
                }
            }
        }
        SkeletonOp::Reduce => {
            let (model, point) = model_and_point(cli, input)?;
            let (stratum, generic) = reduction_stratum(&model, &point)?;
            Ok(pretty(&json!({ "stratum": stratum, "generic": generic })))
        }
        SkeletonOp::Eval => {
            let m = doc::obj(input, "task")?;
            let (model, point) = model_and_point(cli, input)?;
            let poly = doc::poly_from_json(&model, doc::field(m, "poly")?)?;
            let value = seminorm_eval(&model, &point, &poly)?;
            let mut out = serde_json::Map::new();
            out.insert(
                "seminorm".to_string(),
                json!(doc::ext_rat_to_string(&value)),
            );
            if let Some(ts) = m.get("tau") {
                let t = doc::ext_rat_from_str(
                    ts.as_str()
                        .ok_or_else(|| doc::bad("tau must be a rational string"))?,
                )?;
                let star = star_eval(&model, &point, &t, &poly)?;
                let oracle = generic_unit_oracle(&model, &point, &t, &poly)?;
                let moved = flow(&model, &point, &t)?;
                let along = seminorm_eval(&model, &moved, &poly)?;
                out.insert("star".to_string(), json!(doc::ext_rat_to_string(&star)));
                out.insert("oracle".to_string(), json!(doc::ext_rat_to_string(&oracle)));
                out.insert(
                    "flow_seminorm".to_string(),
                    json!(doc::ext_rat_to_string(&along)),
                );
            }
            Ok(pretty(&Value::Object(out)))
        }
    }
}

fn cmd_closure(input: &Value) -> Result<String, Failure> {
    let m = doc::obj(input, "task")?;
    let model = doc::model_from_json(doc::field(m, "model")?, true)?;
    let mut memberships = Vec::new();
    for p in doc::arr(doc::field(m, "points")?, "points")? {
        let point = doc::realization_from_json(p, true)?;
        let verdict = match closure_membership(&model, &point)? {
            Membership::InS => "inS",
            Membership::InSH => "inSH",
            Membership::Outside => "outside",
        };
        memberships.push(json!({
            "point": doc::realization_to_json(&point),
            "membership": verdict,
        }));
    }
    Ok(pretty(&json!({ "memberships": memberships })))
}

fn cmd_export(cli: &Cli, input: &Value) -> Result<String, Failure> {
    match cli.format {
        Format::Csv => {
            let (model, point) = model_and_point(cli, input)?;
            let taus = trajectory_taus(input)?;
            let rows = trajectory_rows(&model, &point, &taus)?;
            Ok(trajectory_csv(&model, &rows))
        }
        Format::Off => off_dump(input),
        Format::Json => cmd_complex(input).map(|v| pretty(&v)),
    }
}

/// An OFF-like dump of the vertex/edge structure of a complex of dimension
/// at most 3: vertices are the dimension-0 faces, edges connect the
/// vertices of each dimension-1 face.
fn off_dump(input: &Value) -> Result<String, Failure> {
    let complex = build_complex(input)?;
    let desc = complex.descriptor();
    if desc.strata().iter().any(|st| st.codim() > 3) {
        return Err(Error::Domain(
            "vertex/edge dumps cover complexes of dimension at most 3".to_string(),
        )
        .into());
    }
    let vertices: Vec<&str> = desc
        .strata()
        .iter()
        .filter(|st| st.codim() == 0)
        .map(|st| st.id.as_str())
        .collect();
    let index = |id: &str| vertices.iter().position(|v| *v == id).unwrap();
    let mut edges = Vec::new();
    for st in desc.strata() {
        if st.codim() != 1 {
            continue;
        }
        let ends: Vec<usize> = desc
            .upper_set(&st.id)?
            .iter()
            .filter(|y| matches!(desc.stratum(y).map(|s| s.codim()), Ok(0)))
            .map(|y| index(y))
            .collect();
        edges.push((st.id.clone(), ends));
    }
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} 0\n", vertices.len(), edges.len()));
    for (i, id) in vertices.iter().enumerate() {
        out.push_str(&format!("{i} 0 0 # {id}\n"));
    }
    for (id, ends) in &edges {
        let cells: Vec<String> = ends.iter().map(usize::to_string).collect();
        out.push_str(&format!("{} {} # {id}\n", ends.len(), cells.join(" ")));
    }
    Ok(out)
}
