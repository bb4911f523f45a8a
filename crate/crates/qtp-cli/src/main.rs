//! Command-line driver: generate graphs, compute tree-decompositions, build
//! and verify quasi-tree-partitions, colour them, and hunt for excluded
//! patterns. Documents flow through a JSON envelope so the subcommands
//! compose as a pipeline.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 when a
//! precondition or pattern violation is certified, 3 on usage or parse
//! errors.

use clap::{Parser, Subcommand};
use qtp_core::colouring::{
    clean_clustering_bound, colour_clean_qtp, colour_fractional_qtp, colour_heavy_qtp,
    fractional_clustering_bound, heavy_clustering_bound, validate_colouring, ColouringError,
    ListAssignment,
};
use qtp_core::construct::{
    build_qtp_degeneracy, build_qtp_excluded, build_qtp_excluded_clean, build_qtp_kst_free,
    BuildError,
};
use qtp_core::gen::{generate, FamilyParams, GenError};
use qtp_core::graph::{Graph, VertexSet};
use qtp_core::io::{
    emit_document, emit_graph_text, parse_document, qtp_dot, treedec_dot, Document, QtpDoc,
    TreedecDoc, SCHEMA,
};
use qtp_core::patterns::{extension_or_skewer, find_kst, find_kst_star, rho_oracle, PatternError};
use qtp_core::qtp::{validate_qtp, QuasiTreePartition};
use qtp_core::treedec::{heuristic_treedec, validate_treedec, EliminationRule, TreeDecomposition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "qtp", version, about = "Quasi-tree-partition toolkit")]
struct Cli {
    /// Input file; standard input when omitted
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit DOT instead of JSON where a tree is produced
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a named graph family
    Gen {
        /// One of: path, cycle, complete, grid, fan, closure, biclique,
        /// kst-star, extension, skewered, hybrid, partial-ktree
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the plain edge-list format instead of JSON
        #[arg(long)]
        text: bool,
    },
    /// Compute a tree-decomposition of the input graph
    Treedec,
    /// Build a quasi-tree-partition
    Build {
        #[command(subcommand)]
        variant: BuildVariant,
    },
    /// Validate an artifact and report violations
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Colour a partition and validate the result
    Colour {
        #[command(subcommand)]
        mode: ColourMode,
    },
    /// Search for a pattern and print the witness
    Detect {
        #[command(subcommand)]
        what: DetectWhat,
    },
    /// Certified lower bound on the densest subdivided subgraph
    Rho {
        /// Largest branch set tried
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum BuildVariant {
    /// Width-1 partition along the degeneracy order
    Degeneracy,
    /// Bounded-width partition of a star-pattern-free graph
    KstFree {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        rho: usize,
        /// Root set, comma-separated ids (optionally prefixed `S=`)
        #[arg(long)]
        set: Option<String>,
    },
    /// Clean peel-and-splice construction
    ExcludedClean {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Peel-and-splice with the relaxed density threshold
    Excluded {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Check the partition axioms; exit 1 on violations
    Qtp {
        /// Heaviness threshold for the heavy-children statistic
        #[arg(long)]
        s: Option<usize>,
    },
    /// Check the decomposition axioms; exit 1 on violations
    Treedec,
    /// Recompute properness, clustering, defect and list compliance
    Colouring,
}

#[derive(Subcommand)]
enum ColourMode {
    /// Set colouring of a clean partition
    Clean {
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Draw random lists of the minimum legal size with this seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Single-colour variant driven by heavy children
    Heavy {
        /// Cap on heavy children per node; defaults to the observed maximum
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Set colouring without the cleanness requirement
    Fractional {
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum DetectWhat {
    /// Complete bipartite subgraph with s and t sides
    Kst {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// The midpoint-augmented variant
    KstStar {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Extension-or-skewer dichotomy around a vertex set
    ExtensionSkewer {
        /// The set X, comma-separated ids (optionally prefixed `S=`)
        #[arg(long)]
        set: String,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
}

struct Failure {
    code: u8,
    kind: &'static str,
    detail: String,
    extra: Vec<(&'static str, Value)>,
}

impl Failure {
    fn new(code: u8, kind: &'static str, detail: impl Into<String>) -> Failure {
        Failure {
            code,
            kind,
            detail: detail.into(),
            extra: Vec::new(),
        }
    }

    fn with(mut self, key: &'static str, value: Value) -> Failure {
        self.extra.push((key, value));
        self
    }

    fn render(self) -> (String, u8) {
        let mut error = serde_json::Map::new();
        error.insert("kind".into(), json!(self.kind));
        error.insert("detail".into(), json!(self.detail));
        for (key, value) in self.extra {
            error.insert(key.into(), value);
        }
        let body = json!({ "schema": SCHEMA, "error": Value::Object(error) });
        eprintln!("qtp: {}", self.detail);
        (pretty(&body), self.code)
    }
}

fn pretty(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("reports serialize");
    out.push('\n');
    out
}

fn finish(doc: &Document, report: Value) -> String {
    let mut v = serde_json::to_value(doc).expect("documents serialize");
    v.as_object_mut()
        .expect("documents are objects")
        .insert("report".into(), report);
    pretty(&v)
}

fn report_only(report: Value) -> String {
    pretty(&json!({ "schema": SCHEMA, "report": report }))
}

fn bounded(b: u128) -> u64 {
    b.min(u64::MAX as u128) as u64
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::new(3, "io", format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::new(3, "io", format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn load_document(path: Option<&Path>) -> Result<Document, Failure> {
    let text = read_input(path)?;
    parse_document(&text).map_err(|e| Failure::new(3, "parse", e.to_string()))
}

fn need_graph(doc: &Document) -> Result<Graph, Failure> {
    let gd = doc
        .graph
        .as_ref()
        .ok_or_else(|| Failure::new(3, "missing-field", "the document carries no graph"))?;
    gd.to_graph()
        .map_err(|e| Failure::new(3, "parse", e.to_string()))
}

fn need_qtp(doc: &Document) -> Result<QuasiTreePartition, Failure> {
    let qd = doc
        .qtp
        .as_ref()
        .ok_or_else(|| Failure::new(3, "missing-field", "the document carries no partition"))?;
    qd.to_qtp()
        .map_err(|e| Failure::new(3, "parse", e.to_string()))
}

fn parse_set(raw: &str) -> Result<VertexSet, Failure> {
    let trimmed = raw.strip_prefix("S=").unwrap_or(raw);
    let mut out = Vec::new();
    for field in trimmed.split(',') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        out.push(field.parse::<usize>().map_err(|_| {
            Failure::new(3, "invalid-params", format!("bad vertex id `{field}` in --set"))
        })?);
    }
    if out.is_empty() {
        return Err(Failure::new(3, "invalid-params", "--set names no vertices"));
    }
    Ok(out.into_iter().collect())
}

fn tree_degree(q: &QuasiTreePartition) -> usize {
    (0..q.tree.node_count())
        .map(|x| q.tree.children(x).len() + usize::from(q.tree.parent_slice()[x].is_some()))
        .max()
        .unwrap_or(0)
}

fn make_lists(n: usize, required: usize, seed: Option<u64>) -> ListAssignment {
    match seed {
        None => ListAssignment::uniform(n, required),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let palette = required + 3;
            let lists = (0..n)
                .map(|_| rand::seq::index::sample(&mut rng, palette, required).into_vec())
                .collect();
            ListAssignment::new(lists)
        }
    }
}

fn gen_failure(e: GenError) -> Failure {
    match e {
        GenError::UnknownFamily(_) => Failure::new(3, "unknown-family", e.to_string()),
        GenError::BadParams(_) => Failure::new(3, "invalid-params", e.to_string()),
    }
}

fn build_failure(e: BuildError) -> Failure {
    match e {
        BuildError::InvalidDecomposition(_) => {
            Failure::new(1, "invalid-decomposition", e.to_string())
        }
        BuildError::InvalidParams(_) => Failure::new(3, "invalid-params", e.to_string()),
        BuildError::PreconditionViolation { ref set } => {
            let set = serde_json::to_value(set).expect("sets serialize");
            Failure::new(2, "precondition-violation", e.to_string()).with("set", set)
        }
        BuildError::PatternPresent { ref witness } => {
            let witness = serde_json::to_value(witness).expect("witnesses serialize");
            Failure::new(2, "pattern-present", e.to_string()).with("witness", witness)
        }
        BuildError::SearchCapExceeded(_) => Failure::new(2, "search-cap-exceeded", e.to_string()),
    }
}

fn pattern_failure(e: PatternError) -> Failure {
    match e {
        PatternError::SearchCapExceeded(_) => Failure::new(2, "search-cap-exceeded", e.to_string()),
        PatternError::BadParameters(_) => Failure::new(3, "invalid-params", e.to_string()),
    }
}

fn colouring_failure(e: ColouringError) -> Failure {
    match e {
        ColouringError::InvalidPartition(_) => Failure::new(1, "invalid-partition", e.to_string()),
        ColouringError::ListsTooSmall { .. } => Failure::new(2, "lists-too-small", e.to_string()),
        ColouringError::NotClean => Failure::new(2, "not-clean", e.to_string()),
        ColouringError::HeavyCapViolated { .. } => {
            Failure::new(2, "heavy-cap-violated", e.to_string())
        }
        ColouringError::InvalidInput(_) => Failure::new(3, "invalid-params", e.to_string()),
    }
}

fn run_gen(family: &str, params: &FamilyParams, text: bool) -> Result<(String, u8), Failure> {
    let g = generate(family, params).map_err(gen_failure)?;
    if text {
        return Ok((emit_graph_text(&g), 0));
    }
    Ok((emit_document(&Document::with_graph(&g)), 0))
}

fn supplied_or_computed(
    doc: &Document,
    g: &Graph,
) -> (TreeDecomposition, &'static str) {
    match &doc.treedec {
        Some(td) => (td.to_treedec(), "supplied"),
        None => (heuristic_treedec(g, EliminationRule::MinFill), "computed"),
    }
}

fn run_build(cli: &Cli, variant: &BuildVariant) -> Result<(String, u8), Failure> {
    let mut doc = load_document(cli.input.as_deref())?;
    let g = need_graph(&doc)?;
    let (q, source) = match variant {
        BuildVariant::Degeneracy => (build_qtp_degeneracy(&g), "none"),
        BuildVariant::KstFree { s, t, rho, set } => {
            let root_set = set.as_deref().map(parse_set).transpose()?;
            let (d, source) = supplied_or_computed(&doc, &g);
            let q = build_qtp_kst_free(&g, &d, *s, *t, *rho, root_set.as_ref())
                .map_err(build_failure)?;
            doc.treedec = Some(TreedecDoc::from_treedec(&d));
            (q, source)
        }
        BuildVariant::ExcludedClean { s, a, b, rho, cap } => {
            let (d, source) = supplied_or_computed(&doc, &g);
            let q = build_qtp_excluded_clean(&g, &d, *s, *a, *b, *rho, *cap)
                .map_err(build_failure)?;
            doc.treedec = Some(TreedecDoc::from_treedec(&d));
            (q, source)
        }
        BuildVariant::Excluded { s, a, b, rho, cap } => {
            let (d, source) = supplied_or_computed(&doc, &g);
            let q =
                build_qtp_excluded(&g, &d, *s, *a, *b, *rho, *cap).map_err(build_failure)?;
            doc.treedec = Some(TreedecDoc::from_treedec(&d));
            (q, source)
        }
    };
    if cli.dot {
        return Ok((qtp_dot(&q), 0));
    }
    let rep = validate_qtp(&g, &q, None);
    let report = json!({
        "valid": rep.valid,
        "width": rep.width,
        "quasiness": rep.quasiness,
        "clean": rep.clean,
        "treedec": source,
    });
    doc.qtp = Some(QtpDoc::from_qtp(&q));
    Ok((finish(&doc, report), 0))
}

fn run_verify(cli: &Cli, what: &VerifyWhat) -> Result<(String, u8), Failure> {
    let doc = load_document(cli.input.as_deref())?;
    let g = need_graph(&doc)?;
    match what {
        VerifyWhat::Qtp { s } => {
            let q = need_qtp(&doc)?;
            let rep = validate_qtp(&g, &q, *s);
            let code = u8::from(!rep.valid);
            let report = serde_json::to_value(&rep).expect("reports serialize");
            Ok((report_only(report), code))
        }
        VerifyWhat::Treedec => {
            let td = doc.treedec.as_ref().ok_or_else(|| {
                Failure::new(3, "missing-field", "the document carries no tree-decomposition")
            })?;
            let rep = validate_treedec(&g, &td.to_treedec());
            let code = u8::from(!rep.valid);
            let report = serde_json::to_value(&rep).expect("reports serialize");
            Ok((report_only(report), code))
        }
        VerifyWhat::Colouring => {
            let col = doc.colouring.clone().ok_or_else(|| {
                Failure::new(3, "missing-field", "the document carries no colouring")
            })?;
            let rep = validate_colouring(&g, &col, doc.lists.as_ref());
            let valid = rep.violations.is_empty() && rep.list_ok;
            let mut report = serde_json::to_value(&rep).expect("reports serialize");
            report
                .as_object_mut()
                .expect("reports are objects")
                .insert("valid".into(), json!(valid));
            Ok((report_only(report), u8::from(!valid)))
        }
    }
}

fn run_colour(cli: &Cli, mode: &ColourMode) -> Result<(String, u8), Failure> {
    let mut doc = load_document(cli.input.as_deref())?;
    let g = need_graph(&doc)?;
    let q = need_qtp(&doc)?;
    let r = q.quasiness();
    let width = q.width();
    let degree = tree_degree(&q);
    let (col, lists, bound) = match mode {
        ColourMode::Clean { ell, seed } => {
            let required = ell * (r + 1) + 1;
            let lists = doc
                .lists
                .clone()
                .unwrap_or_else(|| make_lists(g.n(), required, *seed));
            let col = colour_clean_qtp(&g, &q, &lists, *ell).map_err(colouring_failure)?;
            (col, lists, clean_clustering_bound(*ell, width, degree))
        }
        ColourMode::Heavy { cap, seed } => {
            let cap = cap.unwrap_or_else(|| {
                validate_qtp(&g, &q, Some(r + 2))
                    .max_heavy_children
                    .unwrap_or(0)
            });
            let required = r + 2;
            let lists = doc
                .lists
                .clone()
                .unwrap_or_else(|| make_lists(g.n(), required, *seed));
            let col = colour_heavy_qtp(&g, &q, &lists, cap).map_err(colouring_failure)?;
            (col, lists, heavy_clustering_bound(width, cap))
        }
        ColourMode::Fractional { ell, seed } => {
            let required = (r + 1) * ell + 1;
            let lists = doc
                .lists
                .clone()
                .unwrap_or_else(|| make_lists(g.n(), required, *seed));
            let col = colour_fractional_qtp(&g, &q, &lists, *ell).map_err(colouring_failure)?;
            (col, lists, fractional_clustering_bound(width, *ell, degree))
        }
    };
    let rep = validate_colouring(&g, &col, Some(&lists));
    let mut report = serde_json::to_value(&rep).expect("reports serialize");
    report
        .as_object_mut()
        .expect("reports are objects")
        .insert("bound".into(), json!(bounded(bound)));
    doc.lists = Some(lists);
    doc.colouring = Some(col);
    Ok((finish(&doc, report), 0))
}

fn run_detect(cli: &Cli, what: &DetectWhat) -> Result<(String, u8), Failure> {
    let doc = load_document(cli.input.as_deref())?;
    let g = need_graph(&doc)?;
    let report = match what {
        DetectWhat::Kst { s, t, cap } => {
            let witness = find_kst(&g, *s, *t, *cap).map_err(pattern_failure)?;
            json!({
                "found": witness.is_some(),
                "witness": serde_json::to_value(witness).expect("witnesses serialize"),
            })
        }
        DetectWhat::KstStar { s, t, cap } => {
            let witness = find_kst_star(&g, *s, *t, *cap).map_err(pattern_failure)?;
            json!({
                "found": witness.is_some(),
                "witness": serde_json::to_value(witness).expect("witnesses serialize"),
            })
        }
        DetectWhat::ExtensionSkewer { set, a, b } => {
            let x = parse_set(set)?;
            let witness = extension_or_skewer(&g, &x, *a, *b).map_err(pattern_failure)?;
            json!({
                "found": witness.is_some(),
                "witness": serde_json::to_value(witness).expect("witnesses serialize"),
            })
        }
    };
    Ok((report_only(report), 0))
}

fn run_cmd(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.cmd {
        Cmd::Gen {
            family,
            n,
            k,
            s,
            t,
            a,
            b,
            seed,
            text,
        } => {
            let params = FamilyParams {
                n: *n,
                k: *k,
                s: *s,
                t: *t,
                a: *a,
                b: *b,
                seed: *seed,
            };
            run_gen(family, &params, *text)
        }
        Cmd::Treedec => {
            let mut doc = load_document(cli.input.as_deref())?;
            let g = need_graph(&doc)?;
            let d = heuristic_treedec(&g, EliminationRule::MinFill);
            if cli.dot {
                return Ok((treedec_dot(&d), 0));
            }
            let report = json!({ "width": d.width(), "nodes": d.bags.len() });
            doc.treedec = Some(TreedecDoc::from_treedec(&d));
            Ok((finish(&doc, report), 0))
        }
        Cmd::Build { variant } => run_build(cli, variant),
        Cmd::Verify { what } => run_verify(cli, what),
        Cmd::Colour { mode } => run_colour(cli, mode),
        Cmd::Detect { what } => run_detect(cli, what),
        Cmd::Rho { k, cap } => {
            let doc = load_document(cli.input.as_deref())?;
            let g = need_graph(&doc)?;
            let result = rho_oracle(&g, *k, *cap).map_err(pattern_failure)?;
            let report = serde_json::to_value(&result).expect("results serialize");
            Ok((report_only(report), 0))
        }
    }
}

fn write_output(path: Option<&Path>, payload: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, payload),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.exit_code() != 0;
            let _ = e.print();
            return if usage_error {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (payload, code) = match run_cmd(&cli) {
        Ok(done) => done,
        Err(failure) => failure.render(),
    };
    if let Err(e) = write_output(cli.out.as_deref(), &payload) {
        eprintln!("qtp: cannot write output: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
