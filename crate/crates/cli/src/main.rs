//! `rbd` — exact lattice computations for negative-definite plumbings.
//!
//! Subcommands wire the text file formats (graph, diagram, ambient data) to
//! the library pipelines and print deterministic reports, either as aligned
//! text or as a JSON-record stream (one self-delimiting record per logical
//! row). Exit codes: 0 on success, 1 when a computed result contradicts a
//! stored expectation or a queried property fails, 2 on input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbd_core::ball::{extension_classes, owens_strle_check_with, ExtensionReport};
use rbd_core::blowdown::{lift_basic_classes, parse_ambient, BlowdownReport};
use rbd_core::dinv::{
    condition2_path_pairs, d_table, full_path, sharp_vectors, DTableOptions, FullPath,
    PathTerminal,
};
use rbd_core::goeritz::{form_to_graph, goeritz_form, parse_diagram};
use rbd_core::lens::{chain_boundary, lens_equiv, park_dual, LensSpace};
use rbd_core::matrix::{Int, IntMatrix};
use rbd_core::plumbing::{
    format_graph, mn_family_graph, park_chain, parse_graph, seifert_star, wahl_graph, HandleSpec,
    PlumbingGraph, RayConvention,
};
use rbd_core::spinc::{BoxPreset, CharLattice};
use rbd_core::fixtures::{self, FixtureReport};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Mutex;

// ---------------------------------------------------------------------------
// Command line surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "rbd",
    version,
    about = "Exact lattice computations for negative-definite plumbings",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: aligned text or one JSON record per logical row.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for independent sub-computations. Results are
    /// gathered and re-ordered, so the output never depends on this.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Print the intersection form, determinant, and invariant factors.
    Form(GraphInput),

    /// One line per spin-c class: representative, d, witness, path count.
    DTable {
        #[command(flatten)]
        input: GraphInput,

        /// Extra box-widening rounds allowed while the scan stabilizes.
        #[arg(long, default_value_t = 3)]
        widen: u32,
    },

    /// Greedy full path from a characteristic covector (or from every sharp
    /// covector when no start is given).
    Paths {
        #[command(flatten)]
        input: GraphInput,

        /// Start covector, e.g. "3,-1,0". Default: all sharp covectors.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },

    /// Covectors of square -b2 in the chosen box, grouped by class.
    Sharp {
        #[command(flatten)]
        input: GraphInput,

        /// Box preset to enumerate: full, initial, or taut.
        #[arg(long, default_value = "initial")]
        preset: String,
    },

    /// Spin-c extension verdicts over a rational-homology-ball handle.
    Extend {
        #[command(flatten)]
        input: GraphInput,

        /// Handle as "k1,...,kn;framing" (otherwise taken from the file's
        /// `h` line).
        #[arg(long, allow_hyphen_values = true)]
        handle: Option<String>,
    },

    /// Lift ambient basic classes through a rational blow-down.
    Blowdown {
        #[command(flatten)]
        input: GraphInput,

        /// Ambient data file (chi/sigma header plus class lines).
        #[arg(long, value_name = "FILE")]
        ambient: PathBuf,

        /// Handle as "k1,...,kn;framing" (otherwise from the file's `h` line).
        #[arg(long, allow_hyphen_values = true)]
        handle: Option<String>,
    },

    /// Goeritz form of an alternating-diagram file, emitted in the graph
    /// file format the other subcommands read.
    Goeritz {
        /// Diagram file: `regions <w>` header plus `x <a> <b> <sign>` lines.
        diagram: PathBuf,

        /// Region deleted from the full checkerboard matrix.
        #[arg(long)]
        basepoint: Option<usize>,
    },

    /// Lens-space bookkeeping.
    Lens {
        #[command(subcommand)]
        cmd: LensCmd,
    },

    /// Re-derive every stored worked example and diff against expectations;
    /// exits 1 on any mismatch.
    Fixtures {
        /// Only run fixtures whose name contains this substring, and print
        /// every check line.
        #[arg(long)]
        example: Option<String>,
    },
}

#[derive(Subcommand)]
enum LensCmd {
    /// Oriented homeomorphism test for L(p,q) vs L(p',q').
    Equiv {
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        p2: i64,
        #[arg(allow_hyphen_values = true)]
        q2: i64,

        /// Reverse the orientation of the first space before comparing.
        #[arg(long)]
        reverse_first: bool,
    },

    /// Boundary lens space of a linear chain of the given weights.
    Chain {
        /// Chain weights, e.g. -4 -3 -2 -2.
        #[arg(required = true, allow_hyphen_values = true)]
        weights: Vec<i64>,
    },

    /// The rational-ball chain for (p,q): weights, boundary, and the dual
    /// parameter.
    Park { p: i64, q: i64 },
}

/// A plumbing source: a graph file or one of the named generators.
#[derive(Args)]
struct GraphInput {
    /// Graph file (`v`/`e`/`h` lines).
    file: Option<PathBuf>,

    /// Rational-ball chain C(p,q) (long-end-first weights).
    #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "file")]
    park: Option<Vec<i64>>,

    /// Wahl-type star W(p,q,r).
    #[arg(long, num_args = 3, value_names = ["P", "Q", "R"], conflicts_with = "file")]
    wahl: Option<Vec<u32>>,

    /// Two-parameter ribbon-family plumbing member (m, n).
    #[arg(long, num_args = 2, value_names = ["M", "N"], allow_hyphen_values = true, conflicts_with = "file")]
    mn: Option<Vec<i64>>,

    /// Star-shaped plumbing: central weight then rays a/b, e.g.
    /// --seifert -2 2/1 3/1 7/1.
    #[arg(long, num_args = 2.., value_names = ["B", "A/B"], allow_hyphen_values = true, conflicts_with = "file")]
    seifert: Option<Vec<String>>,
}

// ---------------------------------------------------------------------------
// Failure plumbing: exit 1 = computed mismatch, exit 2 = input problem.
// ---------------------------------------------------------------------------

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }

    fn mismatch(msg: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: msg.into(),
        }
    }
}

/// Attribute a library error to the file (or flag) the bad data came from.
fn input_err(source: &str, e: rbd_core::Error) -> Failure {
    Failure::input(format!("{}: {}", source, e))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), e)))
}

// ---------------------------------------------------------------------------
// Shared parsing helpers
// ---------------------------------------------------------------------------

fn parse_int_list(text: &str, what: &str) -> Result<Vec<Int>, Failure> {
    text.split(',')
        .map(str::trim)
        .map(|tok| {
            Int::from_str(tok)
                .map_err(|_| Failure::input(format!("{}: bad integer `{}`", what, tok)))
        })
        .collect()
}

/// `k1,...,kn;framing`
fn parse_handle_flag(text: &str) -> Result<HandleSpec, Failure> {
    let (ks, f) = text
        .split_once(';')
        .ok_or_else(|| Failure::input("--handle: expected `k1,...,kn;framing`"))?;
    Ok(HandleSpec {
        pairings: parse_int_list(ks, "--handle")?,
        framing: Int::from_str(f.trim())
            .map_err(|_| Failure::input(format!("--handle: bad framing `{}`", f.trim())))?,
    })
}

/// `a/b` ray fraction.
fn parse_ray(tok: &str) -> Result<(Int, Int), Failure> {
    let (a, b) = tok
        .split_once('/')
        .ok_or_else(|| Failure::input(format!("--seifert: ray `{}` is not a/b", tok)))?;
    let parse = |s: &str| {
        Int::from_str(s.trim())
            .map_err(|_| Failure::input(format!("--seifert: bad integer `{}`", s.trim())))
    };
    Ok((parse(a)?, parse(b)?))
}

impl GraphInput {
    /// Resolve to a plumbing plus the file's handle line (if any) and a name
    /// for error messages.
    fn load(&self) -> Result<(PlumbingGraph, Option<HandleSpec>, String), Failure> {
        if let Some(pq) = &self.park {
            let name = format!("--park {} {}", pq[0], pq[1]);
            let g = park_chain(&Int::from(pq[0]), &Int::from(pq[1]))
                .map_err(|e| input_err(&name, e))?;
            return Ok((g, None, name));
        }
        if let Some(pqr) = &self.wahl {
            let name = format!("--wahl {} {} {}", pqr[0], pqr[1], pqr[2]);
            let g = wahl_graph(pqr[0], pqr[1], pqr[2]).map_err(|e| input_err(&name, e))?;
            return Ok((g, None, name));
        }
        if let Some(mn) = &self.mn {
            let name = format!("--mn {} {}", mn[0], mn[1]);
            let g = mn_family_graph(mn[0], mn[1]).map_err(|e| input_err(&name, e))?;
            return Ok((g, None, name));
        }
        if let Some(args) = &self.seifert {
            let name = format!("--seifert {}", args.join(" "));
            let b = Int::from_str(args[0].trim())
                .map_err(|_| Failure::input(format!("{}: bad central weight", name)))?;
            let rays: Vec<(Int, Int)> = args[1..]
                .iter()
                .map(|t| parse_ray(t))
                .collect::<Result<_, _>>()?;
            let g = seifert_star(&b, &rays, RayConvention::AlphaOverBeta)
                .map_err(|e| input_err(&name, e))?;
            return Ok((g, None, name));
        }
        let path = self
            .file
            .as_ref()
            .ok_or_else(|| Failure::input("no graph given: pass a file or a generator flag"))?;
        let text = read_file(path)?;
        let parsed = parse_graph(&text).map_err(|e| input_err(&path.display().to_string(), e))?;
        Ok((parsed.graph, parsed.handle, path.display().to_string()))
    }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Tuple form used everywhere vectors are printed: `(a,b,c)`.
fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn fmt_matrix(m: &IntMatrix) -> String {
    let width = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| format!("{:>width$}", m.get(i, j).to_string(), width = width))
            .collect();
        out.push_str(&format!("[ {} ]\n", row.join("  ")));
    }
    out
}

fn emit_record(value: &Value) {
    println!("{}", value);
}

/// Run `f` over `items` with up to `jobs` threads; results come back in the
/// original order regardless of scheduling.
fn run_parallel<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs <= 1 {
        return items.into_iter().map(f).collect();
    }
    let mut queue: Vec<(usize, T)> = items.into_iter().enumerate().collect();
    queue.reverse();
    let queue = Mutex::new(queue);
    let done: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                match job {
                    Some((i, t)) => {
                        let r = f(t);
                        done.lock().unwrap().push((i, r));
                    }
                    None => break,
                }
            });
        }
    });
    let mut out = done.into_inner().unwrap();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_form(input: &GraphInput, format: Format) -> Result<(), Failure> {
    let (g, _, name) = input.load()?;
    let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
    let factors: Vec<String> = ctx.invariant_factors().iter().map(|d| d.to_string()).collect();
    match format {
        Format::Text => {
            print!("{}", fmt_matrix(ctx.form()));
            println!("det = {}", ctx.det());
            println!("invariant factors = {}", factors.join(", "));
            println!("classes = {}", ctx.class_count());
        }
        Format::Records => {
            let rows: Vec<Vec<String>> = ctx
                .form()
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect();
            emit_record(&json!({
                "kind": "form",
                "matrix": rows,
                "det": ctx.det().to_string(),
                "factors": factors,
                "classes": ctx.class_count().to_string(),
            }));
        }
    }
    Ok(())
}

fn cmd_d_table(input: &GraphInput, widen: u32, format: Format) -> Result<(), Failure> {
    let (g, _, name) = input.load()?;
    let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
    let table =
        d_table(&ctx, &DTableOptions { max_widen: widen }).map_err(|e| input_err(&name, e))?;
    if !table.stabilized {
        return Err(Failure::mismatch(format!(
            "{}: d table did not stabilize within {} widening rounds",
            name, widen
        )));
    }
    let paths = condition2_path_pairs(&g).map_err(|e| input_err(&name, e))?;
    match format {
        Format::Text => {
            let rep_w = table.rows.iter().map(|r| fmt_vec(&r.rep).len()).max().unwrap_or(1);
            let d_w = table.rows.iter().map(|r| r.d.to_string().len()).max().unwrap_or(1);
            let wit_w = table.rows.iter().map(|r| fmt_vec(&r.witness).len()).max().unwrap_or(1);
            for row in &table.rows {
                println!(
                    "{:<rep_w$}  d = {:>d_w$}  witness = {:<wit_w$}  paths = {}",
                    fmt_vec(&row.rep),
                    row.d.to_string(),
                    fmt_vec(&row.witness),
                    paths.get(&row.residue).copied().unwrap_or(0),
                    rep_w = rep_w,
                    d_w = d_w,
                    wit_w = wit_w,
                );
            }
        }
        Format::Records => {
            for row in &table.rows {
                emit_record(&json!({
                    "kind": "class",
                    "rep": fmt_vec(&row.rep),
                    "d": row.d.to_string(),
                    "witness": fmt_vec(&row.witness),
                    "paths": paths.get(&row.residue).copied().unwrap_or(0),
                }));
            }
        }
    }
    Ok(())
}

fn describe_terminal(t: &PathTerminal) -> String {
    match t {
        PathTerminal::InBand => "in-band".to_string(),
        PathTerminal::Overshoot { vertex } => format!("overshoot at {}", vertex),
    }
}

fn path_line(g: &PlumbingGraph, p: &FullPath) -> String {
    let moves: Vec<String> = p.moves.iter().map(|&v| g.label(v).to_string()).collect();
    let vectors: Vec<String> = p.vectors.iter().map(|k| fmt_vec(k)).collect();
    format!(
        "{}  moves: {}  terminal: {}",
        vectors.join(" -> "),
        if moves.is_empty() { "-".to_string() } else { moves.join(" ") },
        describe_terminal(&p.terminal),
    )
}

fn cmd_paths(
    input: &GraphInput,
    start: Option<&str>,
    format: Format,
    jobs: usize,
) -> Result<(), Failure> {
    let (g, _, name) = input.load()?;
    let starts: Vec<Vec<Int>> = match start {
        Some(text) => vec![parse_int_list(text, "--start")?],
        None => {
            let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
            sharp_vectors(&ctx)
                .map_err(|e| input_err(&name, e))?
                .into_iter()
                .flat_map(|c| c.vectors)
                .collect()
        }
    };
    let results: Vec<Result<FullPath, rbd_core::Error>> =
        run_parallel(starts, jobs, |k| full_path(&g, &k));
    for res in results {
        let p = res.map_err(|e| input_err(&name, e))?;
        match format {
            Format::Text => println!("{}", path_line(&g, &p)),
            Format::Records => {
                let moves: Vec<String> =
                    p.moves.iter().map(|&v| g.label(v).to_string()).collect();
                emit_record(&json!({
                    "kind": "path",
                    "start": fmt_vec(p.initial()),
                    "terminal": fmt_vec(p.terminal_vector()),
                    "vectors": p.vectors.iter().map(|k| fmt_vec(k)).collect::<Vec<_>>(),
                    "moves": moves,
                    "condition": describe_terminal(&p.terminal),
                }));
            }
        }
    }
    Ok(())
}

fn cmd_sharp(input: &GraphInput, preset: &str, format: Format) -> Result<(), Failure> {
    let (g, _, name) = input.load()?;
    let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
    let preset = BoxPreset::from_str(preset).map_err(Failure::input)?;
    // Grouped sharp covectors come from the initial box; other presets list
    // the square = -b2 covectors of that box directly.
    let classes = match preset {
        BoxPreset::Initial => sharp_vectors(&ctx).map_err(|e| input_err(&name, e))?,
        other => {
            let target = Int::from(-(ctx.rank() as i64)) * ctx.det();
            let mut groups: std::collections::BTreeMap<Vec<Int>, Vec<Vec<Int>>> =
                std::collections::BTreeMap::new();
            for k in ctx.char_box(other).iter() {
                if ctx.square_scaled(&k) == target {
                    groups.entry(ctx.residue(&k)).or_default().push(k);
                }
            }
            let mut out: Vec<rbd_core::dinv::SharpClass> = groups
                .into_iter()
                .map(|(residue, vectors)| rbd_core::dinv::SharpClass { residue, vectors })
                .collect();
            out.sort_by(|a, b| a.vectors[0].cmp(&b.vectors[0]));
            out
        }
    };
    for c in &classes {
        let vectors: Vec<String> = c.vectors.iter().map(|v| fmt_vec(v)).collect();
        match format {
            Format::Text => println!("class {}: {}", fmt_vec(&c.residue), vectors.join(" ")),
            Format::Records => emit_record(&json!({
                "kind": "sharp-class",
                "class": fmt_vec(&c.residue),
                "vectors": vectors,
            })),
        }
    }
    Ok(())
}

fn resolve_handle(
    file_handle: Option<HandleSpec>,
    flag: Option<&str>,
    name: &str,
) -> Result<HandleSpec, Failure> {
    if let Some(text) = flag {
        return parse_handle_flag(text);
    }
    file_handle.ok_or_else(|| {
        Failure::input(format!(
            "{}: no handle: add an `h k1 .. kn ; framing` line or pass --handle",
            name
        ))
    })
}

fn print_extension_report(
    ctx: &CharLattice,
    report: &ExtensionReport,
    format: Format,
) -> Result<(), Failure> {
    let table = d_table(ctx, &DTableOptions::default())
        .map_err(|e| Failure::input(format!("d table: {}", e)))?;
    let cert = owens_strle_check_with(report, &table);
    match format {
        Format::Text => {
            println!("kernel: {}", fmt_vec(&report.kernel));
            if report.parity_disagrees {
                println!("note: divisibility and parity verdicts differ");
            }
            for v in &report.verdicts {
                let verdict = if v.extends {
                    format!(
                        "extends (a = {})",
                        v.a.as_ref().map(|a| a.to_string()).unwrap_or_default()
                    )
                } else if v.divisibility {
                    "divisible, parity fails".to_string()
                } else {
                    "not divisible".to_string()
                };
                println!("class {}: {}", fmt_vec(&v.rep), verdict);
            }
            println!(
                "square law: extending = {}, classes = {}, {}; d = 0 on extenders: {}",
                cert.extending,
                cert.class_count,
                if cert.square_law { "t^2 = |H1| holds" } else { "t^2 = |H1| FAILS" },
                if cert.all_d_zero { "yes" } else { "NO" },
            );
        }
        Format::Records => {
            emit_record(&json!({
                "kind": "kernel",
                "kernel": fmt_vec(&report.kernel),
                "parity_disagrees": report.parity_disagrees,
            }));
            for v in &report.verdicts {
                emit_record(&json!({
                    "kind": "verdict",
                    "class": fmt_vec(&v.rep),
                    "divisible": v.divisibility,
                    "extends": v.extends,
                    "coefficient": v.a.as_ref().map(|a| a.to_string()),
                }));
            }
            emit_record(&json!({
                "kind": "certificate",
                "extending": cert.extending,
                "classes": cert.class_count.to_string(),
                "square_law": cert.square_law,
                "all_d_zero": cert.all_d_zero,
                "holds": cert.holds,
            }));
        }
    }
    if !cert.holds {
        return Err(Failure::mismatch(
            "square law failed: boundary cannot bound a rational homology ball with this data",
        ));
    }
    Ok(())
}

fn cmd_extend(
    input: &GraphInput,
    handle_flag: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let (g, file_handle, name) = input.load()?;
    let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
    let spec = resolve_handle(file_handle, handle_flag, &name)?;
    let report = extension_classes(&ctx, &spec).map_err(|e| input_err(&name, e))?;
    print_extension_report(&ctx, &report, format)
}

fn print_blowdown_report(report: &BlowdownReport, format: Format) {
    match format {
        Format::Text => {
            println!(
                "chi: {} -> {}   sigma: {} -> {}   b2 removed: {}",
                report.chi_before,
                report.chi_after,
                report.sigma_before,
                report.sigma_after,
                report.b2
            );
            let name_w = report
                .classes
                .iter()
                .map(|c| c.name.len())
                .max()
                .unwrap_or(4)
                .max("name".len());
            let restr_w = report
                .classes
                .iter()
                .map(|c| fmt_vec(&c.restriction).len())
                .max()
                .unwrap_or(11)
                .max("restriction".len());
            println!(
                "{:<name_w$}  {:<restr_w$}  {:>4}  {:>4}  {:>5}  {:>5}  {:>7}  {:>8}  {:>8}  {:>8}  merged",
                "name", "restriction", "c1sq", "glue", "taut", "sharp", "extends", "survives",
                "D before", "D after",
                name_w = name_w,
                restr_w = restr_w,
            );
            for c in &report.classes {
                let yn = |b: bool| if b { "yes" } else { "no" };
                println!(
                    "{:<name_w$}  {:<restr_w$}  {:>4}  {:>4}  {:>5}  {:>5}  {:>7}  {:>8}  {:>8}  {:>8}  {}",
                    c.name,
                    fmt_vec(&c.restriction),
                    c.c1sq.to_string(),
                    yn(c.glue_characteristic),
                    yn(c.taut),
                    yn(c.sharp),
                    yn(c.extends),
                    yn(c.survives),
                    c.d_before.to_string(),
                    c.d_after.to_string(),
                    c.merged_into
                        .map(|i| report.classes[i].name.clone())
                        .unwrap_or_else(|| "-".to_string()),
                    name_w = name_w,
                    restr_w = restr_w,
                );
            }
            println!("basic classes after blow-down: {}", report.basic_class_count);
        }
        Format::Records => {
            for c in &report.classes {
                emit_record(&json!({
                    "kind": "class",
                    "name": c.name,
                    "restriction": fmt_vec(&c.restriction),
                    "c1sq": c.c1sq.to_string(),
                    "glue_characteristic": c.glue_characteristic,
                    "taut": c.taut,
                    "sharp": c.sharp,
                    "extends": c.extends,
                    "survives": c.survives,
                    "d_before": c.d_before.to_string(),
                    "d_after": c.d_after.to_string(),
                    "merged_into": c.merged_into.map(|i| report.classes[i].name.clone()),
                }));
            }
            emit_record(&json!({
                "kind": "summary",
                "chi_before": report.chi_before.to_string(),
                "chi_after": report.chi_after.to_string(),
                "sigma_before": report.sigma_before.to_string(),
                "sigma_after": report.sigma_after.to_string(),
                "b2": report.b2,
                "basic_classes": report.basic_class_count,
            }));
        }
    }
}

fn cmd_blowdown(
    input: &GraphInput,
    ambient_path: &Path,
    handle_flag: Option<&str>,
    format: Format,
) -> Result<(), Failure> {
    let (g, file_handle, name) = input.load()?;
    let ctx = CharLattice::from_graph(&g).map_err(|e| input_err(&name, e))?;
    let spec = resolve_handle(file_handle, handle_flag, &name)?;
    let ambient_text = read_file(ambient_path)?;
    let ambient = parse_ambient(&ambient_text)
        .map_err(|e| input_err(&ambient_path.display().to_string(), e))?;
    let ball = extension_classes(&ctx, &spec).map_err(|e| input_err(&name, e))?;
    let report = lift_basic_classes(&ctx, &ambient, &ball)
        .map_err(|e| input_err(&ambient_path.display().to_string(), e))?;
    print_blowdown_report(&report, format);
    Ok(())
}

fn cmd_goeritz(
    diagram_path: &Path,
    basepoint: Option<usize>,
    format: Format,
) -> Result<(), Failure> {
    let text = read_file(diagram_path)?;
    let name = diagram_path.display().to_string();
    let d = parse_diagram(&text).map_err(|e| input_err(&name, e))?;
    let basepoint = basepoint.unwrap_or(d.regions() - 1);
    let gf = goeritz_form(&d, basepoint).map_err(|e| input_err(&name, e))?;
    let graph = form_to_graph(&gf.form).map_err(|e| input_err(&name, e))?;
    let graph_text = format_graph(&graph, None);
    match format {
        Format::Text => {
            println!("# basepoint region {}", gf.basepoint);
            println!("# orientation flipped: {}", gf.flipped);
            print!("{}", graph_text);
        }
        Format::Records => {
            emit_record(&json!({
                "kind": "goeritz",
                "basepoint": gf.basepoint,
                "flipped": gf.flipped,
                "graph": graph_text,
            }));
        }
    }
    Ok(())
}

fn cmd_lens(cmd: &LensCmd, format: Format) -> Result<(), Failure> {
    match cmd {
        LensCmd::Equiv {
            p,
            q,
            p2,
            q2,
            reverse_first,
        } => {
            let build = |p: i64, q: i64| {
                LensSpace::new(Int::from(p), Int::from(q))
                    .map_err(|e| Failure::input(format!("lens equiv: {}", e)))
            };
            let mut a = build(*p, *q)?;
            if *reverse_first {
                a = a.reversed();
            }
            let b = build(*p2, *q2)?;
            let eq = lens_equiv(&a, &b);
            match format {
                Format::Text => println!("{}", eq),
                Format::Records => emit_record(&json!({
                    "kind": "equiv",
                    "first": a.to_string(),
                    "second": b.to_string(),
                    "equivalent": eq,
                })),
            }
            if !eq {
                return Err(Failure::mismatch(format!(
                    "{} and {} are not orientedly homeomorphic",
                    a, b
                )));
            }
        }
        LensCmd::Chain { weights } => {
            let ws: Vec<Int> = weights.iter().map(|&w| Int::from(w)).collect();
            let l = chain_boundary(&ws).map_err(|e| Failure::input(format!("lens chain: {}", e)))?;
            match format {
                Format::Text => println!("{}", l),
                Format::Records => emit_record(&json!({
                    "kind": "lens",
                    "space": l.to_string(),
                    "p": l.p().to_string(),
                    "q": l.q().to_string(),
                    "sign": l.sign(),
                })),
            }
        }
        LensCmd::Park { p, q } => {
            let g = park_chain(&Int::from(*p), &Int::from(*q))
                .map_err(|e| Failure::input(format!("lens park: {}", e)))?;
            let boundary = chain_boundary(g.weights())
                .map_err(|e| Failure::input(format!("lens park: {}", e)))?;
            let dual = p - q;
            let weights: Vec<String> = g.weights().iter().map(|w| w.to_string()).collect();
            match format {
                Format::Text => {
                    println!("chain: {}", weights.join(" "));
                    println!("boundary: {}", boundary);
                    println!(
                        "dual parameter: {} (product congruence {})",
                        dual,
                        if park_dual(&Int::from(*p), &Int::from(*q), &Int::from(dual)) {
                            "holds"
                        } else {
                            "fails"
                        }
                    );
                }
                Format::Records => emit_record(&json!({
                    "kind": "park",
                    "chain": weights,
                    "boundary": boundary.to_string(),
                    "dual": dual,
                    "dual_congruence": park_dual(&Int::from(*p), &Int::from(*q), &Int::from(dual)),
                })),
            }
        }
    }
    Ok(())
}

fn fixture_list() -> Vec<(&'static str, fn() -> rbd_core::Result<FixtureReport>)> {
    vec![
        ("c53-chain", fixtures::c53),
        ("wahl-2-2-2", fixtures::wahl222),
        ("lens-25-7-chain", fixtures::lens257),
        ("knot-9-41", fixtures::knot941),
        ("knot-9-41-mirror", fixtures::mirror941),
        ("goeritz-families", fixtures::goeritz_families),
        ("mn-family", fixtures::mn_family),
        ("blowup-ledger", fixtures::blowup),
        ("ambient-e2-c21", fixtures::ambient_e2),
        ("ambient-e3-c53", fixtures::ambient_e3_c53),
        ("ambient-e4-l257", fixtures::ambient_e4_l257),
        ("ambient-e3-wahl", fixtures::ambient_e3_wahl),
        ("park-chains", fixtures::park_chains),
        ("lens-identities", fixtures::lens_identities),
        ("seifert-stars", fixtures::seifert),
        ("wahl-2-2-3", fixtures::wahl223),
    ]
}

fn cmd_fixtures(example: Option<&str>, format: Format, jobs: usize) -> Result<(), Failure> {
    let selected: Vec<(&'static str, fn() -> rbd_core::Result<FixtureReport>)> = fixture_list()
        .into_iter()
        .filter(|(name, _)| example.map_or(true, |pat| name.contains(pat)))
        .collect();
    if selected.is_empty() {
        return Err(Failure::input(format!(
            "no fixture name contains `{}`",
            example.unwrap_or("")
        )));
    }
    let verbose = example.is_some();
    let reports: Vec<rbd_core::Result<FixtureReport>> =
        run_parallel(selected, jobs, |(_, f)| f());
    let mut all_pass = true;
    for report in reports {
        let report = report.map_err(|e| Failure::input(format!("fixture setup: {}", e)))?;
        let passed = report.passed();
        all_pass &= passed;
        match format {
            Format::Text => {
                if verbose {
                    println!("{}:", report.name);
                    for c in &report.checks {
                        if c.pass {
                            println!("  ok   {}", c.label);
                        } else {
                            println!("  FAIL {} ({})", c.label, c.detail);
                        }
                    }
                } else {
                    println!(
                        "{:<18} {} ({} checks)",
                        report.name,
                        if passed { "ok" } else { "FAILED" },
                        report.checks.len()
                    );
                    for c in report.failed_checks() {
                        println!("  FAIL {} ({})", c.label, c.detail);
                    }
                }
            }
            Format::Records => {
                for c in &report.checks {
                    emit_record(&json!({
                        "kind": "check",
                        "fixture": report.name,
                        "label": c.label,
                        "pass": c.pass,
                        "detail": c.detail,
                    }));
                }
            }
        }
    }
    if !all_pass {
        return Err(Failure::mismatch("fixture expectations not met"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Form(input) => cmd_form(input, cli.format),
        Command::DTable { input, widen } => cmd_d_table(input, *widen, cli.format),
        Command::Paths { input, start } => {
            cmd_paths(input, start.as_deref(), cli.format, cli.jobs)
        }
        Command::Sharp { input, preset } => cmd_sharp(input, preset, cli.format),
        Command::Extend { input, handle } => cmd_extend(input, handle.as_deref(), cli.format),
        Command::Blowdown {
            input,
            ambient,
            handle,
        } => cmd_blowdown(input, ambient, handle.as_deref(), cli.format),
        Command::Goeritz { diagram, basepoint } => cmd_goeritz(diagram, *basepoint, cli.format),
        Command::Lens { cmd } => cmd_lens(cmd, cli.format),
        Command::Fixtures { example } => cmd_fixtures(example.as_deref(), cli.format, cli.jobs),
    }
}

fn main() -> ExitCode {
    // Dying mid-pipe (e.g. `rbd fixtures | head`) is a normal way for a
    // reader to stop consuming; exit quietly instead of panicking.
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let broken_pipe = info
            .payload()
            .downcast_ref::<String>()
            .is_some_and(|s| s.contains("Broken pipe"));
        if broken_pipe {
            std::process::exit(0);
        }
        default_hook(info);
    }));

    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rbd: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
