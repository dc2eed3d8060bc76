//! Command-line surface: list-classes, centralizer, conjugate, membership,
//! verify.
//!
//! Exit codes: 0 success, 2 usage error, 3 not conjugate, 4 not in group.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use ccg_core::{
    brute_classes, class_size_and_centralizer, conjugacy_certificate, contains,
    enumerate_group_with_cap, group_order, list_classes, spinor_norm, Form, FormKind,
    GroupSpec, MatrixFq, DEFAULT_MAX_ORDER,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ccg", version, about = "Conjugacy classes, centralizers and conjugating elements in finite classical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupFlags {
    /// Group family: GL, SL, Sp, U, SU, O, O+, O-, SO, SO+, SO-, Omega,
    /// Omega+, Omega-
    #[arg(long)]
    group: String,
    /// Dimension of the natural module
    #[arg(long)]
    n: usize,
    /// Field size (the base field size q for unitary groups)
    #[arg(long)]
    q: u64,
    /// Optional form file ("kind n q type" header, then Gram rows); must be
    /// congruent to the standard form of the group
    #[arg(long)]
    form_file: Option<PathBuf>,
}

#[derive(Args)]
struct IoFlags {
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the conjugacy classes of the group
    ListClasses {
        #[command(flatten)]
        group: GroupFlags,
        #[command(flatten)]
        io: IoFlags,
    },
    /// Describe the centralizer of an element (order, radical, reductive
    /// factors, generators)
    Centralizer {
        #[command(flatten)]
        group: GroupFlags,
        #[command(flatten)]
        io: IoFlags,
        /// Matrix file ("n q" header, then rows)
        matrix: PathBuf,
    },
    /// Decide conjugacy of two elements; print a witness or a reason
    Conjugate {
        #[command(flatten)]
        group: GroupFlags,
        #[command(flatten)]
        io: IoFlags,
        /// Matrix file for x
        x: PathBuf,
        /// Matrix file for y
        y: PathBuf,
    },
    /// Test membership of an element in the group
    Membership {
        #[command(flatten)]
        group: GroupFlags,
        #[command(flatten)]
        io: IoFlags,
        /// Matrix file
        matrix: PathBuf,
    },
    /// Cross-check the class list against the brute-force oracle
    Verify {
        #[command(flatten)]
        group: GroupFlags,
        #[command(flatten)]
        io: IoFlags,
        /// Oracle enumeration cap (also via env CCG_MAX_ORDER)
        #[arg(long)]
        max_order: Option<u64>,
        /// Seed for the oracle's randomized generator search
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // Domain errors map to dedicated codes.
            let msg = format!("{e:#}");
            if msg.contains("not in the group") {
                ExitCode::from(4)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::ListClasses { group, io } => {
            let spec = build_spec(&group)?;
            let classes = list_classes(&spec)?;
            let payload = json!({
                "group": spec.name(),
                "order": group_order(&spec).to_string(),
                "classes": classes.iter().map(|c| json!({
                    "label": c.label.to_string(),
                    "size": c.size.to_string(),
                    "centralizer_order": c.centralizer_order.to_string(),
                    "rep": matrix_rows(&c.rep),
                })).collect::<Vec<_>>(),
            });
            let text = |payload: &Value| {
                let mut s = format!(
                    "{}  order {}\n",
                    payload["group"].as_str().unwrap(),
                    payload["order"].as_str().unwrap()
                );
                for c in payload["classes"].as_array().unwrap() {
                    s += &format!(
                        "{}  size {}  centralizer {}\n",
                        c["label"].as_str().unwrap(),
                        c["size"].as_str().unwrap(),
                        c["centralizer_order"].as_str().unwrap()
                    );
                }
                s
            };
            emit(&io, &payload, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Centralizer { group, io, matrix } => {
            let spec = build_spec(&group)?;
            let x = read_matrix(&spec, &matrix)?;
            if !contains(&spec, &x) {
                eprintln!("element is not in the group");
                return Ok(ExitCode::from(4));
            }
            let d = ccg_core::centralizer(&spec, &x)?;
            let payload = json!({
                "group": spec.name(),
                "order": d.order.to_string(),
                "unipotent_radical_order": d.unipotent_radical_order.to_string(),
                "reductive_factors": d.reductive_factors,
                "generators": d.generators.iter().map(matrix_rows).collect::<Vec<_>>(),
            });
            let text = |p: &Value| {
                format!(
                    "order {}\nunipotent radical order {}\nreductive factors {}\ngenerators {}\n",
                    p["order"].as_str().unwrap(),
                    p["unipotent_radical_order"].as_str().unwrap(),
                    p["reductive_factors"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|v| v.as_str().unwrap().to_string())
                        .collect::<Vec<_>>()
                        .join(" x "),
                    p["generators"].as_array().unwrap().len()
                )
            };
            emit(&io, &payload, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Conjugate { group, io, x, y } => {
            let spec = build_spec(&group)?;
            let xm = read_matrix(&spec, &x)?;
            let ym = read_matrix(&spec, &y)?;
            if !contains(&spec, &xm) || !contains(&spec, &ym) {
                eprintln!("element is not in the group");
                return Ok(ExitCode::from(4));
            }
            let cert = conjugacy_certificate(&spec, &xm, &ym)?;
            match cert.witness {
                Some(w) => {
                    let payload = json!({
                        "conjugate": true,
                        "witness": matrix_rows(&w),
                    });
                    let nq = format!("{} {}", spec.n, spec.field.q());
                    let text = move |p: &Value| {
                        let mut s = format!("{nq}\n");
                        for row in p["witness"].as_array().unwrap() {
                            let cells: Vec<String> = row
                                .as_array()
                                .unwrap()
                                .iter()
                                .map(|v| v.as_u64().unwrap().to_string())
                                .collect();
                            s += &cells.join(" ");
                            s += "\n";
                        }
                        s
                    };
                    emit(&io, &payload, text)?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    let payload = json!({
                        "conjugate": false,
                        "reason": cert.reason.unwrap_or_default(),
                    });
                    // Reason always goes out as JSON per the interface.
                    write_out(&io, &format!("{payload}\n"))?;
                    Ok(ExitCode::from(3))
                }
            }
        }
        Command::Membership { group, io, matrix } => {
            let spec = build_spec(&group)?;
            let x = read_matrix(&spec, &matrix)?;
            let member = contains(&spec, &x);
            let mut payload = json!({
                "group": spec.name(),
                "member": member,
                "det": x.det(),
            });
            if spec.family.is_orthogonal() && x.det() == 1 {
                if let Some(form) = &spec.isometry_group().form {
                    if ccg_core::is_isometry(&x, form) {
                        if let Ok(theta) = spinor_norm(&x, form) {
                            payload["spinor_norm"] = json!(theta);
                        }
                    }
                }
            }
            let text = |p: &Value| format!("{p}\n");
            emit(&io, &payload, text)?;
            Ok(if member {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
        Command::Verify {
            group,
            io,
            max_order,
            seed: _,
        } => {
            let spec = build_spec(&group)?;
            let cap = max_order
                .or_else(|| {
                    std::env::var("CCG_MAX_ORDER")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(DEFAULT_MAX_ORDER);
            let classes = list_classes(&spec)?;
            let order = group_order(&spec);
            let total: u128 = classes.iter().map(|c| c.size).sum();
            let mut checks = vec![
                ("class sizes sum to group order", total == order),
                (
                    "class size x centralizer = group order",
                    classes
                        .iter()
                        .all(|c| c.size * c.centralizer_order == order),
                ),
                (
                    "sizes match the formula route",
                    classes.iter().all(|c| {
                        let split = classes
                            .iter()
                            .filter(|d| d.label.divisors == c.label.divisors)
                            .count();
                        class_size_and_centralizer(&spec, &c.label, split)
                            .map(|(size, cent)| {
                                size == c.size && cent == c.centralizer_order
                            })
                            .unwrap_or(false)
                    }),
                ),
            ];
            let mut oracle_note = "skipped (order above cap)".to_string();
            if order <= cap as u128 {
                let g = enumerate_group_with_cap(&spec, cap)?;
                let orbits = brute_classes(&g);
                let count_ok = orbits.len() == classes.len();
                checks.push(("class count matches oracle", count_ok));
                let mut sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
                let mut listed: Vec<usize> = classes.iter().map(|c| c.size as usize).collect();
                sizes.sort_unstable();
                listed.sort_unstable();
                checks.push(("class sizes match oracle", sizes == listed));
                oracle_note = format!("enumerated {} elements", g.len());
            }
            let ok = checks.iter().all(|(_, b)| *b);
            let payload = json!({
                "group": spec.name(),
                "oracle": oracle_note,
                "checks": checks.iter().map(|(n, b)| json!({"name": n, "pass": b})).collect::<Vec<_>>(),
                "pass": ok,
            });
            let text = |p: &Value| {
                let mut s = String::new();
                for c in p["checks"].as_array().unwrap() {
                    s += &format!(
                        "{} {}\n",
                        if c["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" },
                        c["name"].as_str().unwrap()
                    );
                }
                s
            };
            emit(&io, &payload, text)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn build_spec(flags: &GroupFlags) -> anyhow::Result<GroupSpec> {
    let mut spec = GroupSpec::from_name(&flags.group, flags.n, flags.q)
        .with_context(|| format!("invalid group {}({},{})", flags.group, flags.n, flags.q))?;
    if let Some(path) = &flags.form_file {
        let form = read_form(&spec, path)?;
        let std_form = spec
            .form
            .clone()
            .ok_or_else(|| anyhow!("--form-file is not applicable to linear groups"))?;
        ccg_core::congruence_transform(&form, &std_form)
            .map_err(|_| anyhow!("form is not congruent to the standard form of the group"))?;
        spec.form = Some(form);
    }
    Ok(spec)
}

fn matrix_rows(m: &MatrixFq) -> Vec<Vec<u64>> {
    (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Matrix file: first line `n q`, then `n` lines of `n` integers.
fn read_matrix(spec: &GroupSpec, path: &PathBuf) -> anyhow::Result<MatrixFq> {
    let body = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = body.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty matrix file"))?;
    let head: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().context("bad header"))
        .collect::<anyhow::Result<_>>()?;
    let [n, q] = head[..] else { bail!("header must be `n q`") };
    if n as usize != spec.n || q != spec.field.q() {
        bail!(
            "matrix is {}x{} over F_{}, group expects {}x{} over F_{}",
            n, n, q, spec.n, spec.n, spec.field.q()
        );
    }
    let mut rows = vec![];
    for _ in 0..n {
        let line = lines.next().ok_or_else(|| anyhow!("missing matrix row"))?;
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse().context("bad entry"))
            .collect::<anyhow::Result<_>>()?;
        if row.len() != n as usize {
            bail!("row has {} entries, expected {}", row.len(), n);
        }
        if row.iter().any(|&v| v >= q) {
            bail!("matrix entry out of range for F_{q}");
        }
        rows.push(row);
    }
    Ok(MatrixFq::from_rows(&spec.field, &rows))
}

/// Form file: first line `kind n q type`, then Gram rows.
fn read_form(spec: &GroupSpec, path: &PathBuf) -> anyhow::Result<Form> {
    let body = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = body.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| anyhow!("empty form file"))?
        .split_whitespace()
        .collect();
    let [kind, n, q, _ty] = header[..] else {
        bail!("form header must be `kind n q type`")
    };
    let kind = match kind {
        "alternating" => FormKind::Alternating,
        "symmetric" => FormKind::Symmetric,
        "hermitian" => FormKind::Hermitian,
        "quadratic" => FormKind::Quadratic,
        other => bail!("unknown form kind {other}"),
    };
    let n: usize = n.parse()?;
    let q: u64 = q.parse()?;
    if n != spec.n || q != spec.field.q() {
        bail!("form dimensions do not match the group");
    }
    let mut rows = vec![];
    for _ in 0..n {
        let line = lines.next().ok_or_else(|| anyhow!("missing Gram row"))?;
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse().context("bad entry"))
            .collect::<anyhow::Result<_>>()?;
        rows.push(row);
    }
    Ok(Form::new(kind, MatrixFq::from_rows(&spec.field, &rows))?)
}

fn emit(io: &IoFlags, payload: &Value, text: impl Fn(&Value) -> String) -> anyhow::Result<()> {
    let body = if io.json {
        format!("{payload}\n")
    } else {
        text(payload)
    };
    write_out(io, &body)
}

fn write_out(io: &IoFlags, body: &str) -> anyhow::Result<()> {
    match &io.out {
        Some(path) => std::fs::write(path, body)?,
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}
