use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spid_core::sweep::{run_sweep, shuffle_family, SweepConfig, SweepRow};
use spid_core::*;

#[derive(Parser)]
#[command(name = "spid-lab", version, about = "Subspace families with prescribed intersection dimensions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum Class {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "remark")]
    Remark,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one of the constructions and write it as a family file.
    Construct {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        /// Co-dimension t (classes I-IV).
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        t1: Option<usize>,
        #[arg(long)]
        t2: Option<usize>,
        #[arg(long)]
        n: usize,
        /// Sunflower size (class I and the two-value example).
        #[arg(long)]
        m: Option<usize>,
        /// Number of hyperplanes (classes III, IV and the two-value example).
        #[arg(long)]
        s: Option<usize>,
        /// Class sizes for III/IV, e.g. `2,1,1`.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Class I coefficient vectors, `;` between vectors, e.g. `1,1,0;1,0,0`.
        #[arg(long)]
        b: Option<String>,
        /// Choice of Q for each extra member of the two-value example (0-based).
        #[arg(long, value_delimiter = ',')]
        q_choices: Option<Vec<usize>>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Check that every pairwise intersection dimension lies in the list and
    /// each listed value occurs.
    Verify {
        path: PathBuf,
        /// Allowed intersection dimensions, e.g. `1,2`.
        #[arg(long = "values", short = 'L', value_delimiter = ',', required = true)]
        values: Vec<usize>,
    },
    /// Non-increasing δ-array of the family.
    Delta {
        path: PathBuf,
        /// Shuffle the members with this seed first.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Junta bound check for a family with two intersection dimensions.
    Bound { path: PathBuf },
    /// Recognise the shape of an extremal family.
    Classify {
        path: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build and check every bundle in a parameter range.
    Sweep {
        /// JSON config; the built-in range when omitted.
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Run the exhaustive oracles on rows with at most 7 members.
        #[arg(long)]
        oracle: bool,
        /// Write the rows as JSON.
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

/// Exit 1 for domain failures, 2 for bad input.
enum Failure {
    Domain(String),
    Input(String),
}

impl From<SpidError> for Failure {
    fn from(e: SpidError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<FamilyFileError> for Failure {
    fn from(e: FamilyFileError) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Construct {
            class,
            q,
            k,
            t,
            t1,
            t2,
            n,
            m,
            s,
            sizes,
            b,
            q_choices,
            out,
        } => params(class, q, k, t, t1, t2, n, m, s, sizes, b, q_choices)
            .and_then(|p| construct(&p, out.as_deref())),
        Cmd::Verify { path, values } => verify(&path, &values),
        Cmd::Delta { path, seed } => delta(&path, seed),
        Cmd::Bound { path } => bound(&path),
        Cmd::Classify { path, seed } => classify(&path, seed),
        Cmd::Sweep {
            config,
            seed,
            oracle,
            out,
        } => sweep(config.as_deref(), seed, oracle, out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn need(v: Option<usize>, flag: &str, class: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Input(format!("class {class} needs --{flag}")))
}

#[allow(clippy::too_many_arguments)]
fn params(
    class: Class,
    q: u32,
    k: usize,
    t: Option<usize>,
    t1: Option<usize>,
    t2: Option<usize>,
    n: usize,
    m: Option<usize>,
    s: Option<usize>,
    sizes: Option<Vec<usize>>,
    b: Option<String>,
    q_choices: Option<Vec<usize>>,
) -> Result<ConstructionParams, Failure> {
    Ok(match class {
        Class::I => {
            let mut p = ClassIParams::new(q, k, need(t, "t", "I")?, n, need(m, "m", "I")?);
            if let Some(b) = b {
                p.b = Some(parse_vectors(&b)?);
            }
            ConstructionParams::ClassI(p)
        }
        Class::II => ConstructionParams::ClassII(ClassIIParams::new(q, k, need(t, "t", "II")?, n)),
        Class::III => {
            let mut p = ClassIIIParams::new(q, k, need(t, "t", "III")?, n, need(s, "s", "III")?);
            if let Some(sz) = sizes {
                p.class_sizes = sz;
            }
            ConstructionParams::ClassIII(p)
        }
        Class::IV => {
            let mut p = ClassIVParams::new(q, k, need(t, "t", "IV")?, n, need(s, "s", "IV")?);
            if let Some(sz) = sizes {
                p.class_sizes = sz;
            }
            ConstructionParams::ClassIV(p)
        }
        Class::Remark => {
            let mut p = RemarkExampleParams::new(
                q,
                k,
                need(t1, "t1", "remark")?,
                need(t2, "t2", "remark")?,
                n,
                need(m, "m", "remark")?,
                need(s, "s", "remark")?,
            );
            p.q_choices = q_choices;
            ConstructionParams::Remark(p)
        }
    })
}

fn parse_vectors(text: &str) -> Result<Vec<Vec<u32>>, Failure> {
    text.split(';')
        .map(|v| {
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|e| Failure::Input(format!("bad entry {x:?} in --b: {e}")))
                })
                .collect()
        })
        .collect()
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn rows(s: &Subspace) -> Value {
    json!(s.basis())
}

fn construct(p: &ConstructionParams, out: Option<&Path>) -> CmdResult {
    let fam = p.build()?;
    let (t1, _) = p.t_pair();
    let sorted = sort_nonincreasing(&fam)?;
    let junta = is_junta(&fam, fam.k() - t1).is_some();
    let file = FamilyFile::from_family(&fam, Some(p));
    println!("construction: {}", p.name());
    println!("ambient: {}", fam.ambient_dim());
    println!("members: {}", fam.len());
    println!("dim span: {} (predicted {})", fam.dim_span(), p.predicted_dim());
    println!("sorted delta: {sorted}");
    println!("junta: {junta}");
    match out {
        Some(path) => {
            file.save(path)?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", file.to_json()),
    }
    Ok(())
}

fn load(path: &Path) -> Result<SpidFamily, Failure> {
    Ok(FamilyFile::load(path)?.1)
}

fn verify(path: &Path, values: &[usize]) -> CmdResult {
    let fam = load(path)?;
    let profile = fam.profile();
    println!("members: {}, k = {}, ambient {}", fam.len(), fam.k(), fam.ambient_dim());
    for l in 0..=fam.k() {
        let c = profile.count(l);
        if c > 0 {
            println!("  {c} pairs meet in dimension {l}");
        }
    }
    println!("attained: {:?}", profile.attained());
    if !fam.meets_ambient_assumption() {
        let l = profile.attained().first().copied().unwrap_or(0);
        println!(
            "warning: ambient dimension {} is below n(k - l) + l = {}",
            fam.ambient_dim(),
            fam.len() * (fam.k() - l) + l
        );
    }
    match verify_spid(&fam, values) {
        Ok(_) => {
            println!("PASS: family is a SPID for {values:?}");
            Ok(())
        }
        Err(SpidError::NotSpid(v)) => {
            println!("FAIL: {v}");
            Err(Failure::Domain(format!("not a SPID for {values:?}")))
        }
        Err(e) => Err(e.into()),
    }
}

fn maybe_shuffle(fam: SpidFamily, seed: Option<u64>) -> SpidFamily {
    match seed {
        Some(s) => shuffle_family(&fam, s).0,
        None => fam,
    }
}

fn delta(path: &Path, seed: Option<u64>) -> CmdResult {
    let fam = maybe_shuffle(load(path)?, seed);
    let d = sort_nonincreasing(&fam)?;
    println!("delta: {d}");
    println!("ordering: {:?}", d.ordering);
    println!("dim span: {}", d.sum());
    print_json(&json!({ "delta": d.values, "ordering": d.ordering, "dim_span": d.sum() }));
    Ok(())
}

fn bound(path: &Path) -> CmdResult {
    let fam = load(path)?;
    let r = check_theorem_2_1(&fam)?;
    println!("n = {}, k = {}, t1 = {}, t2 = {}", r.n, r.k, r.t1, r.t2);
    println!("dim span: {}", r.dim_span);
    println!("junta threshold: {}", r.junta_threshold);
    if let Some(x) = r.refined_threshold {
        let rel = if r.dim_span <= x { "<=" } else { ">" };
        println!("refined threshold: {x} (dim span {rel} {x})");
    }
    println!("junta: {}", r.is_junta_at_center_dim);
    if let Some(e) = r.epsilon {
        println!("epsilon: {e}");
    }
    println!("implication holds: {}", r.implication_holds);
    for note in &r.notes {
        println!("note: {note}");
    }
    print_json(&json!({
        "n": r.n, "k": r.k, "t1": r.t1, "t2": r.t2,
        "dim_span": r.dim_span,
        "junta_threshold": r.junta_threshold,
        "refined_threshold": r.refined_threshold,
        "junta": r.is_junta_at_center_dim,
        "epsilon": r.epsilon,
        "within_hypotheses": r.within_hypotheses,
        "implication_holds": r.implication_holds,
        "notes": r.notes,
    }));
    Ok(())
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Junta { center } => json!({ "kind": "junta", "center": rows(center) }),
        Witness::Sunflower { center, petals } => {
            json!({ "kind": "sunflower", "center": rows(center), "petals": petals })
        }
        Witness::CommonHyperplane { anchor, w } => {
            json!({ "kind": "common_hyperplane", "anchor": anchor, "w": rows(w) })
        }
        Witness::Pencil {
            anchor,
            v_prime,
            hyperplanes,
            classes,
            anchor_dims,
        } => json!({
            "kind": "pencil",
            "anchor": anchor,
            "v_prime": rows(v_prime),
            "hyperplanes": hyperplanes.iter().map(rows).collect::<Vec<_>>(),
            "classes": classes,
            "anchor_dims": anchor_dims,
        }),
    }
}

fn classify(path: &Path, seed: Option<u64>) -> CmdResult {
    let fam = maybe_shuffle(load(path)?, seed);
    let r = classify_extremal(&fam)?;
    println!("verdict: {}", r.verdict);
    println!("k = {}, t = {}, m = {}", r.k, r.t, r.m);
    if let Some(s) = r.s() {
        println!("s = {s}");
    }
    if !r.also_matches.is_empty() {
        let names: Vec<&str> = r.also_matches.iter().map(|v| v.as_str()).collect();
        println!("also matches: {}", names.join(", "));
    }
    for note in &r.notes {
        println!("note: {note}");
    }
    print_json(&json!({
        "verdict": r.verdict.as_str(),
        "k": r.k, "t": r.t, "m": r.m, "s": r.s(),
        "also_matches": r.also_matches.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
        "witness": witness_json(&r.witness),
        "notes": r.notes,
    }));
    Ok(())
}

fn load_config(path: &Path) -> Result<SweepConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(format!(
            "config parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn describe(r: &SweepRow) -> String {
    let p = serde_json::to_value(&r.params).expect("json");
    let mut parts = Vec::new();
    if let Value::Object(map) = p {
        for (key, v) in map {
            if key != "class" && !v.is_null() {
                parts.push(format!("{key}={v}"));
            }
        }
    }
    parts.join(" ")
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "-",
    }
}

fn sweep(config: Option<&Path>, seed: Option<u64>, oracle: bool, out: Option<&Path>) -> CmdResult {
    let mut cfg = match config {
        Some(p) => load_config(p)?,
        None => SweepConfig::builtin(),
    };
    if seed.is_some() {
        cfg.seed = seed;
    }
    cfg.oracle |= oracle;
    let rows = run_sweep(&cfg);
    println!("class\tambient\tdim\tpredicted\tmatch\tverdict\toracle\tparams");
    for r in &rows {
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}{}",
            r.params.name(),
            r.ambient,
            r.dim_span,
            r.predicted_dim,
            if r.passed { "ok" } else { "FAIL" },
            r.verdict.as_deref().unwrap_or("-"),
            flag(r.oracle_ok),
            describe(r),
            r.error.as_ref().map(|e| format!("\terror: {e}")).unwrap_or_default(),
        );
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!("{} rows, {failed} failed", rows.len());
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&rows).expect("json");
        std::fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if failed > 0 {
        return Err(Failure::Domain(format!("{failed} sweep rows failed")));
    }
    Ok(())
}
