//! Command-line front end. Every subcommand is a pure function from input
//! files and flags to a canonical-JSON document on stdout; diagnostics go
//! to stderr. Exit codes: 0 success, 1 invalid input, 2 infeasible request.

use std::collections::BTreeMap;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::{self, EmbeddingKey, InvariantPair};
use crate::frontdiagram::{Dir, FrontDiagram};
use crate::halfint::HalfInt;
use crate::jsonutil;
use crate::moves::{self, RMove, RSite, Site, StabSign};
use crate::planar::{self, PlanarMap};
use crate::realize;

#[derive(Parser)]
#[command(name = "legfront", version, about = "Legendrian graph front calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check every structural invariant of a diagram file.
    Validate {
        #[arg(long)]
        diagram: String,
    },
    /// Classical invariants of a theta diagram (or of an explicit cycle).
    Invariants {
        #[arg(long)]
        diagram: String,
        /// Optional cycle as JSON [["e1","fwd"],["e2","bwd"],...].
        #[arg(long)]
        cycle: Option<String>,
    },
    /// Admissibility, embedding count and image count of an invariant pair.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        tb: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rot: Option<String>,
        /// Read newline-delimited {"tb":[..],"rot":[..]} requests instead.
        #[arg(long)]
        batch: bool,
    },
    /// All admissible pairs with tb_i >= -B, one JSON record per line.
    Enumerate {
        #[arg(long)]
        bound: i64,
    },
    /// Stabilization recipe and realized diagram for an admissible pair.
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        tb: String,
        #[arg(long, allow_hyphen_values = true)]
        rot: String,
        /// Coorientation sign at v1 (+1/-1); defaults to the direct build.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
        /// Also write the diagram to this path.
        #[arg(long)]
        out: Option<String>,
    },
    /// The family diagram G_l.
    Gl {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
    /// Mirror a diagram across the x-axis.
    Mirror {
        #[arg(long)]
        diagram: String,
    },
    /// Apply a move and report the invariant deltas.
    Move {
        #[arg(long)]
        diagram: String,
        #[arg(long = "move")]
        name: String,
        /// Site descriptor (JSON), shape depends on the move.
        #[arg(long)]
        site: String,
    },
    /// Are two embedding keys equivalent up to relabeling?
    Equiv {
        #[arg(long, allow_hyphen_values = true)]
        tb: String,
        #[arg(long, allow_hyphen_values = true)]
        rot: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
        #[arg(long, allow_hyphen_values = true)]
        tb2: String,
        #[arg(long, allow_hyphen_values = true)]
        rot2: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma2: i64,
    },
    /// Orbit and canonical form of an embedding key.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        tb: String,
        #[arg(long, allow_hyphen_values = true)]
        rot: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
    },
    /// Are G_l and G_l' related by edge stabilizations alone?
    Connected {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        lprime: String,
    },
    /// Property-N realization certificate of a planar map.
    PlanarRealize {
        #[arg(long)]
        map: String,
    },
    /// Infinite family of distinct realizations of a planar map.
    Family {
        #[arg(long)]
        map: String,
        #[arg(long)]
        kmax: usize,
    },
}

/// Runs the CLI against explicit arguments; returns (exit code, stdout).
pub fn run(args: &[String], stdin: &str) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are success, not input errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return (code, e.to_string());
        }
    };
    match dispatch(cli, stdin) {
        Ok(doc) => (0, doc),
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            (code, String::new())
        }
    }
}

struct CliError {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError { code: 1, message: message.into() }
}

fn infeasible(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

impl From<crate::frontdiagram::DiagramError> for CliError {
    fn from(e: crate::frontdiagram::DiagramError) -> Self {
        invalid(e.to_string())
    }
}

impl From<realize::RealizeError> for CliError {
    fn from(e: realize::RealizeError) -> Self {
        match e {
            realize::RealizeError::Inadmissible(_)
            | realize::RealizeError::BadIndex(_)
            | realize::RealizeError::InvalidKey => infeasible(e.to_string()),
            realize::RealizeError::Internal(_) => invalid(e.to_string()),
        }
    }
}

impl From<moves::MoveError> for CliError {
    fn from(e: moves::MoveError) -> Self {
        match e {
            moves::MoveError::Pattern(_) | moves::MoveError::Range(_) => infeasible(e.to_string()),
            _ => invalid(e.to_string()),
        }
    }
}

impl From<planar::PlanarError> for CliError {
    fn from(e: planar::PlanarError) -> Self {
        match e {
            planar::PlanarError::NoWitness => infeasible(e.to_string()),
            _ => invalid(e.to_string()),
        }
    }
}

fn parse_vec3(s: &str) -> Result<[i64; 3], CliError> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid(format!("bad integer vector: {s}")))?;
    <[i64; 3]>::try_from(parts).map_err(|_| invalid(format!("expected three components: {s}")))
}

fn parse_halfint(s: &str) -> Result<HalfInt, CliError> {
    HalfInt::parse(s).map_err(invalid)
}

fn halfint_json(h: HalfInt) -> Value {
    match h.as_integer() {
        Some(n) => json!(n),
        None => json!(h.doubled() as f64 / 2.0),
    }
}

fn read_diagram(path: &str) -> Result<FrontDiagram, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    let d: FrontDiagram =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{path}: {e}")))?;
    Ok(d)
}

fn require_legal(d: &FrontDiagram) -> Result<(), CliError> {
    let violations = d.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(invalid(format!(
            "illegal diagram: {}",
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
        )))
    }
}

/// Planar map file shape: {"vertices":[0,..,n-1], "edges":[[u,v],..],
/// "rotation":{"v":[[edge,end],..]}}.
fn map_from_json(text: &str) -> Result<PlanarMap, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    let vertices = v["vertices"]
        .as_array()
        .ok_or_else(|| invalid("map: missing vertices"))?;
    let n = vertices.len();
    let edges: Vec<(usize, usize)> = v["edges"]
        .as_array()
        .ok_or_else(|| invalid("map: missing edges"))?
        .iter()
        .map(|e| {
            let pair = e.as_array().filter(|a| a.len() == 2)?;
            Some((pair[0].as_u64()? as usize, pair[1].as_u64()? as usize))
        })
        .collect::<Option<_>>()
        .ok_or_else(|| invalid("map: bad edge list"))?;
    let rot_obj = v["rotation"]
        .as_object()
        .ok_or_else(|| invalid("map: missing rotation"))?;
    let mut rotation = vec![Vec::new(); n];
    for (key, ring) in rot_obj {
        let vi: usize = key.parse().map_err(|_| invalid("map: bad rotation key"))?;
        if vi >= n {
            return Err(invalid(format!("map: rotation key {vi} out of range")));
        }
        rotation[vi] = ring
            .as_array()
            .ok_or_else(|| invalid("map: bad rotation ring"))?
            .iter()
            .map(|end| {
                let pair = end.as_array().filter(|a| a.len() == 2)?;
                Some((pair[0].as_u64()? as usize, pair[1].as_u64()? as u8))
            })
            .collect::<Option<_>>()
            .ok_or_else(|| invalid("map: bad rotation ring"))?;
    }
    Ok(PlanarMap { num_vertices: n, edges, rotation })
}

fn read_map(path: &str) -> Result<PlanarMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    map_from_json(&text)
}

fn key_json(k: &EmbeddingKey) -> Value {
    json!({"tb": k.tb, "rot": k.rot, "sigma1": k.sigma1})
}

fn theta_json(d: &FrontDiagram) -> Result<Value, CliError> {
    let inv = d.theta_invariants()?;
    let tw: Vec<Value> = inv.tw().iter().map(|t| halfint_json(*t)).collect();
    Ok(json!({
        "tb": inv.tb,
        "rot": inv.rot,
        "tw": tw,
        "total_rot": inv.total_rot(),
        "sigma_v1": inv.sigma_v1,
        "sigma_v2": inv.sigma_v2,
    }))
}

fn classify_json(pair: &InvariantPair) -> Value {
    let (admissible, violations) = classify::is_admissible(pair);
    let images = classify::count_images(pair);
    json!({
        "admissible": admissible,
        "violations": violations,
        "embeddings": classify::count_embeddings(pair),
        "images": images.count,
        "images_criterion": images.criterion_count,
        "criterion_discrepancy": images.discrepancy,
    })
}

fn recipe_json(r: &realize::StabRecipe) -> Value {
    json!({
        "l": halfint_json(r.l),
        "stabs": r.stabs.iter().map(|&(p, n)| json!([p, n])).collect::<Vec<_>>(),
        "shift": r.cyclic_shift,
        "mirrored": r.mirrored,
        "a": r.a,
        "b": r.b,
    })
}

fn dispatch(cli: Cli, stdin: &str) -> Result<String, CliError> {
    let summary = cli.format == "summary";
    let doc = match cli.command {
        Command::Validate { diagram } => {
            let d = read_diagram(&diagram)?;
            let violations = d.validate();
            let legal = violations.is_empty();
            let doc = json!({
                "legal": legal,
                "violations": violations
                    .iter()
                    .map(|v| json!({"event": v.event, "message": v.message}))
                    .collect::<Vec<_>>(),
            });
            if !legal {
                // Report and fail: downstream operations would reject it.
                println!("{}", render(&doc, summary));
                return Err(invalid("illegal diagram"));
            }
            doc
        }
        Command::Invariants { diagram, cycle } => {
            let d = read_diagram(&diagram)?;
            require_legal(&d)?;
            match cycle {
                None => theta_json(&d)?,
                Some(text) => {
                    let raw: Vec<(String, String)> =
                        serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
                    let cycle: Vec<(String, Dir)> = raw
                        .into_iter()
                        .map(|(e, dir)| {
                            let dir = match dir.as_str() {
                                "fwd" | "forward" => Ok(Dir::Forward),
                                "bwd" | "backward" => Ok(Dir::Backward),
                                other => Err(invalid(format!("bad direction {other}"))),
                            }?;
                            Ok((e, dir))
                        })
                        .collect::<Result<_, CliError>>()?;
                    let t = d.traverse_cycle(&cycle)?;
                    json!({
                        "up_cusps": t.up_cusps,
                        "down_cusps": t.down_cusps,
                        "writhe": t.writhe,
                        "tb": t.tb(),
                        "rot": t.rot(),
                    })
                }
            }
        }
        Command::Classify { tb, rot, batch } => {
            if batch {
                let mut lines = Vec::new();
                for line in stdin.lines().filter(|l| !l.trim().is_empty()) {
                    let v: Value = serde_json::from_str(line).map_err(|e| invalid(e.to_string()))?;
                    let pair = pair_from_value(&v)?;
                    lines.push(jsonutil::to_canonical_string(&classify_json(&pair)));
                }
                return Ok(lines.join("\n") + "\n");
            }
            let (Some(tb), Some(rot)) = (tb, rot) else {
                return Err(invalid("classify requires --tb and --rot (or --batch)"));
            };
            let pair = InvariantPair::new(parse_vec3(&tb)?, parse_vec3(&rot)?);
            let doc = classify_json(&pair);
            if summary {
                let adm = doc["admissible"].as_bool().unwrap();
                return Ok(format!(
                    "admissible: {adm}; embeddings: {}; images: {}\n",
                    doc["embeddings"], doc["images"]
                ));
            }
            doc
        }
        Command::Enumerate { bound } => {
            if bound < 1 {
                return Err(infeasible("bound must be >= 1"));
            }
            let mut lines = Vec::new();
            for pair in classify::enumerate_admissible(bound) {
                lines.push(jsonutil::to_canonical_string(&json!({
                    "tb": pair.tb,
                    "rot": pair.rot,
                })));
            }
            return Ok(lines.join("\n") + "\n");
        }
        Command::Realize { tb, rot, sigma, out } => {
            let pair = InvariantPair::new(parse_vec3(&tb)?, parse_vec3(&rot)?);
            let recipe = realize::stab_recipe(&pair)?;
            let diagram = match sigma {
                None => realize::apply_recipe(&recipe)?,
                Some(s) => {
                    let key = EmbeddingKey::new(pair, s);
                    realize::realize_key(&key)?
                }
            };
            if let Some(path) = out {
                std::fs::write(&path, jsonutil::to_canonical_string(&diagram))
                    .map_err(|e| invalid(format!("{path}: {e}")))?;
            }
            json!({
                "recipe": recipe_json(&recipe),
                "diagram": serde_json::to_value(&diagram).unwrap(),
            })
        }
        Command::Gl { l } => {
            let l = parse_halfint(&l)?;
            let d = realize::build_gl(l)?;
            serde_json::to_value(&d).unwrap()
        }
        Command::Mirror { diagram } => {
            let d = read_diagram(&diagram)?;
            require_legal(&d)?;
            serde_json::to_value(d.mirror()).unwrap()
        }
        Command::Move { diagram, name, site } => {
            let d = read_diagram(&diagram)?;
            require_legal(&d)?;
            let site_value: Value =
                serde_json::from_str(&site).map_err(|e| invalid(e.to_string()))?;
            let before = d.theta_invariants().ok();
            let after_diagram = apply_named_move(&d, &name, &site_value)?;
            let after = after_diagram.theta_invariants().ok();
            let deltas = match (&before, &after) {
                (Some(b), Some(a)) => json!({
                    "tb_before": b.tb, "tb_after": a.tb,
                    "rot_before": b.rot, "rot_after": a.rot,
                    "sigma_v1_before": b.sigma_v1, "sigma_v1_after": a.sigma_v1,
                    "sigma_v2_before": b.sigma_v2, "sigma_v2_after": a.sigma_v2,
                }),
                _ => Value::Null,
            };
            json!({
                "diagram": serde_json::to_value(&after_diagram).unwrap(),
                "invariant_deltas": deltas,
            })
        }
        Command::Equiv { tb, rot, sigma, tb2, rot2, sigma2 } => {
            let k1 = EmbeddingKey::new(InvariantPair::new(parse_vec3(&tb)?, parse_vec3(&rot)?), sigma);
            let k2 =
                EmbeddingKey::new(InvariantPair::new(parse_vec3(&tb2)?, parse_vec3(&rot2)?), sigma2);
            if !k1.is_valid() || !k2.is_valid() {
                return Err(infeasible("invalid embedding key"));
            }
            json!({
                "equivalent": classify::equivalent_up_to_relabeling(&k1, &k2),
                "canonical1": key_json(&classify::canonical(&k1)),
                "canonical2": key_json(&classify::canonical(&k2)),
            })
        }
        Command::Orbit { tb, rot, sigma } => {
            let k = EmbeddingKey::new(InvariantPair::new(parse_vec3(&tb)?, parse_vec3(&rot)?), sigma);
            if !k.is_valid() {
                return Err(infeasible("invalid embedding key"));
            }
            let orbit: Vec<Value> = classify::orbit(&k).iter().map(key_json).collect();
            json!({
                "orbit": orbit,
                "canonical": key_json(&classify::canonical(&k)),
            })
        }
        Command::Connected { l, lprime } => {
            let l = parse_halfint(&l)?;
            let lp = parse_halfint(&lprime)?;
            let c = moves::edge_stab_connected(l, lp)?;
            if summary {
                return Ok(format!("edge_stab_connected: {c}\n"));
            }
            json!({ "edge_stab_connected": c })
        }
        Command::PlanarRealize { map } => {
            let m = read_map(&map)?;
            let cert = planar::realize_property_n(&m)?;
            serde_json::to_value(&cert).unwrap()
        }
        Command::Family { map, kmax } => {
            let m = read_map(&map)?;
            let fam = planar::infinite_family(&m, kmax)?;
            serde_json::to_value(&fam).unwrap()
        }
    };
    Ok(render(&doc, summary) + "\n")
}

fn render(doc: &Value, summary: bool) -> String {
    if summary {
        // Summary format falls back to pretty JSON for structured docs.
        serde_json::to_string_pretty(&jsonutil::canonicalize(doc)).unwrap()
    } else {
        jsonutil::canonicalize(doc).to_string()
    }
}

fn pair_from_value(v: &Value) -> Result<InvariantPair, CliError> {
    let get3 = |key: &str| -> Result<[i64; 3], CliError> {
        let arr = v[key]
            .as_array()
            .ok_or_else(|| invalid(format!("missing {key}")))?;
        let parts: Vec<i64> = arr
            .iter()
            .map(|x| x.as_i64())
            .collect::<Option<_>>()
            .ok_or_else(|| invalid(format!("bad {key}")))?;
        <[i64; 3]>::try_from(parts).map_err(|_| invalid(format!("bad {key}")))
    };
    Ok(InvariantPair::new(get3("tb")?, get3("rot")?))
}

fn apply_named_move(
    d: &FrontDiagram,
    name: &str,
    site: &Value,
) -> Result<FrontDiagram, CliError> {
    let site_err = || invalid(format!("bad site for move {name}: {site}"));
    match name {
        "edge-stabilize" => {
            let edge = site["edge"].as_str().ok_or_else(site_err)?;
            let sign = match site["sign"].as_str() {
                Some("+") => StabSign::Positive,
                Some("-") => StabSign::Negative,
                _ => return Err(site_err()),
            };
            let event = site["event"].as_u64().ok_or_else(site_err)? as usize;
            let pos = site["pos"].as_u64().ok_or_else(site_err)? as usize;
            Ok(moves::edge_stabilize(d, edge, sign, Site { event, pos })?)
        }
        "edge-destabilize" => {
            let event = site["event"].as_u64().ok_or_else(site_err)? as usize;
            Ok(moves::edge_destabilize(d, event)?)
        }
        "vertex-stabilize" => {
            let vertex = site["vertex"].as_str().ok_or_else(site_err)?;
            let variant = site["variant"].as_u64().unwrap_or(1) as usize;
            Ok(moves::vertex_stabilize(d, vertex, variant)?)
        }
        "vertex-twist" => {
            let vertex = site["vertex"].as_str().ok_or_else(site_err)?;
            let edges = site["edges"].as_array().ok_or_else(site_err)?;
            let (Some(a), Some(b)) = (edges.first().and_then(|x| x.as_str()),
                                       edges.get(1).and_then(|x| x.as_str()))
            else {
                return Err(site_err());
            };
            let sign = match site["sign"].as_str() {
                Some("+") => StabSign::Positive,
                Some("-") => StabSign::Negative,
                _ => return Err(site_err()),
            };
            Ok(moves::vertex_twist(d, vertex, a, b, sign)?)
        }
        "gl-step" => Ok(moves::gl_step(d)?),
        "I" | "II" | "III" | "III_v" | "V" => {
            let mv = match name {
                "I" => RMove::I,
                "II" => RMove::II,
                "III" => RMove::III,
                "III_v" => RMove::IIIv,
                _ => RMove::V,
            };
            let rsite: RSite =
                serde_json::from_value(site.clone()).map_err(|_| site_err())?;
            Ok(moves::reidemeister(d, mv, &rsite)?)
        }
        _ => Err(invalid(format!("unknown move {name}"))),
    }
}

/// Serializes a planar map in the documented file shape.
pub fn map_to_json(map: &PlanarMap) -> Value {
    let mut rotation = BTreeMap::new();
    for (v, ring) in map.rotation.iter().enumerate() {
        rotation.insert(
            v.to_string(),
            ring.iter().map(|&(e, w)| json!([e, w])).collect::<Vec<_>>(),
        );
    }
    json!({
        "vertices": (0..map.num_vertices).collect::<Vec<_>>(),
        "edges": map.edges.iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
        "rotation": rotation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut full = vec!["legfront".to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        run(&full, "")
    }

    #[test]
    fn classify_spec_example() {
        let (code, out) = run_args(&["classify", "--tb", "-1,-2,-1", "--rot", "0,1,0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["admissible"], json!(true));
        assert_eq!(v["embeddings"], json!(1));
        assert_eq!(v["images"], json!(1));
    }

    #[test]
    fn connected_spec_example() {
        let (code, out) = run_args(&["connected", "--l", "-0.5", "--lprime", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"edge_stab_connected":false}"#);
    }

    #[test]
    fn realize_spec_example() {
        let (code, out) = run_args(&["realize", "--tb", "-3,-3,-2", "--rot", "0,0,1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["recipe"]["l"], json!(0));
        assert_eq!(v["recipe"]["stabs"], json!([[1, 0], [0, 1], [0, 0]]));
    }

    #[test]
    fn inadmissible_realize_is_infeasible() {
        let (code, _) = run_args(&["realize", "--tb", "0,-1,-1", "--rot", "0,0,0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn determinism() {
        let a = run_args(&["enumerate", "--bound", "2"]);
        let b = run_args(&["enumerate", "--bound", "2"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
        assert_eq!(a.1.lines().count(), 19);
    }

    #[test]
    fn gl_roundtrips_through_validate_and_invariants() {
        let (code, out) = run_args(&["gl", "--l", "1/2"]);
        assert_eq!(code, 0);
        let dir = std::env::temp_dir().join("legfront-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gl.json");
        std::fs::write(&path, &out).unwrap();
        let p = path.to_str().unwrap();
        let (code, out) = run_args(&["validate", "--diagram", p]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""legal":true"#));
        let (code, out) = run_args(&["invariants", "--diagram", p]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["tb"], json!([-1, -3, -1]));
    }

    #[test]
    fn batch_classify() {
        let stdin = "{\"tb\":[-1,-1,-1],\"rot\":[0,0,0]}\n{\"tb\":[0,-1,-1],\"rot\":[0,0,0]}\n";
        let (code, out) = run(
            &["legfront".into(), "classify".into(), "--batch".into()],
            stdin,
        );
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.trim().lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains(r#""embeddings":2"#));
        assert!(lines[1].contains(r#""embeddings":0"#));
    }
}
