//! Command-line driver. [`run`] returns the process exit code so the whole
//! interface can be exercised in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::budget::Budget;
use crate::cech::CechComplex;
use crate::cert::{self, Verified};
use crate::error::{Error, Result};
use crate::frobenius::{find_relation, ClassHandle, FrobeniusPoly};
use crate::kill::{kill_all, kill_class, scan_window, trivialize_relation, KillAll, DEFAULT_WINDOW};
use crate::poly::PolyRing;
use crate::ringfile::{parse_ring, ring_hash, serialize_tower, RingSpec};
use crate::tower::RingTower;

#[derive(Parser, Debug)]
#[command(name = "charp-kill", version, about = "Local cohomology, Frobenius relations and certified class killing over F_p")]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// S-pairs per Gröbner basis computation
    #[arg(long, global = true)]
    pair_cap: Option<usize>,
    /// Extra denominator exponent tried when solving for boundaries
    #[arg(long, global = true)]
    exp_cap: Option<u32>,
    /// Highest Koszul level examined for stabilization
    #[arg(long, global = true)]
    koszul_cap: Option<u32>,
    /// Vanishing degrees required on each side of the nonzero range
    #[arg(long, global = true)]
    guard: Option<u32>,
    /// Largest Frobenius power searched
    #[arg(long, global = true)]
    orbit_cap: Option<u32>,
    /// Extra cofactor degree in membership searches
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::from_env();
        if let Some(v) = self.pair_cap {
            b.pair_cap = v;
        }
        if let Some(v) = self.exp_cap {
            b.exp_cap = v;
        }
        if let Some(v) = self.koszul_cap {
            b.koszul_cap = v;
        }
        if let Some(v) = self.guard {
            b.guard = v;
        }
        if let Some(v) = self.orbit_cap {
            b.orbit_cap = v;
        }
        if let Some(v) = self.degree_cap {
            b.degree_cap = v;
        }
        b
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert function of R over a degree range
    Hilbert {
        ring: PathBuf,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        degrees: (i64, i64),
    },
    /// Graded pieces of H^i_m(R) with basis cocycles
    Lc {
        ring: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        degrees: (i64, i64),
    },
    /// Frobenius relation g with g(α) = 0
    Frob {
        ring: PathBuf,
        #[arg(long)]
        i: usize,
        /// Cochain file (as printed by `lc`)
        #[arg(long, conflicts_with = "auto")]
        class: Option<PathBuf>,
        /// Every basis class in the scanned window
        #[arg(long)]
        auto: bool,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Kill one class, or all of H^i, in a certified module-finite extension
    Kill {
        ring: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        class: Option<PathBuf>,
        /// Output prefix for PREFIX.kc and PREFIX.tower
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
    /// Cofactors for a colon relation on a parameter prefix
    Trivialize {
        ring: PathBuf,
        /// Comma-separated parameters x_1..x_j
        #[arg(long)]
        params: String,
        #[arg(long)]
        witness: String,
        /// Output prefix for PREFIX.tc and PREFIX.tower
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file against a ring (exit 0 iff OK)
    Verify { cert: PathBuf, ring: PathBuf },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, found {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_ring(path: &Path, budget: &Budget) -> Result<RingSpec> {
    parse_ring(&read(path)?, budget)
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let io = |e: std::io::Error| Error::Precondition(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn complex(spec: &RingSpec, budget: &Budget) -> Result<CechComplex> {
    CechComplex::new(RingTower::trivial(spec.presentation.clone()), spec.cech.clone(), budget)
}

fn format_g(ring: &PolyRing, g: &FrobeniusPoly) -> String {
    let p = ring.p() as u64;
    let mut parts = vec![format!("T^{}", p.pow(g.s))];
    for (j, c) in g.coeffs.iter().enumerate().rev() {
        if !c.is_zero() {
            parts.push(format!("({})*T^{}", ring.format(c), p.pow(j as u32)));
        }
    }
    if g.s == 0 {
        return "T".into();
    }
    parts.join(" - ")
}

fn default_prefix(ring: &Path, suffix: &str) -> PathBuf {
    let stem = ring.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    ring.with_file_name(format!("{stem}.{suffix}"))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn read_class(cx: &CechComplex, path: &Path, budget: &Budget) -> Result<ClassHandle> {
    let v: serde_json::Value =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("class file: {e}")))?;
    let c = cert::cochain_from_json(cx, &v)?;
    ClassHandle::new(cx, c, budget)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let budget = cli.budget.budget();
    let w = |out: &mut dyn Write, s: String| {
        writeln!(out, "{s}").map_err(|e| Error::Precondition(format!("output: {e}")))
    };
    match cli.command {
        Command::Hilbert { ring, degrees } => {
            let spec = load_ring(&ring, &budget)?;
            w(out, "t\tdim".into())?;
            for t in degrees.0..=degrees.1 {
                w(out, format!("{t}\t{}", spec.presentation.hilbert_function(t)))?;
            }
        }
        Command::Lc { ring, i, degrees } => {
            let spec = load_ring(&ring, &budget)?;
            let cx = complex(&spec, &budget)?;
            let mut pieces = Vec::new();
            w(out, "t\tdim".into())?;
            for t in degrees.0..=degrees.1 {
                let piece = cx.lc_graded_piece(i, t, &budget)?;
                w(out, format!("{t}\t{}", piece.dimension))?;
                pieces.push(piece);
            }
            for piece in pieces.iter().filter(|p| p.dimension > 0) {
                for (k, c) in piece.basis.iter().enumerate() {
                    let json = serde_json::to_string(&cert::cochain_json(spec.ring(), c)).expect("json");
                    w(out, format!("# basis t={} #{k} {json}", piece.t))?;
                }
            }
        }
        Command::Frob { ring, i, class, auto, window } => {
            let spec = load_ring(&ring, &budget)?;
            let cx = complex(&spec, &budget)?;
            let classes: Vec<ClassHandle> = match class {
                Some(path) => vec![read_class(&cx, &path, &budget)?],
                None if auto => scan_window(&cx, i, window.unwrap_or(DEFAULT_WINDOW), &budget)?
                    .into_iter()
                    .flat_map(|p| {
                        let t = p.t;
                        p.basis.into_iter().map(move |c| ClassHandle { cocycle: c, degree: t, piece: Some((i, t)) })
                    })
                    .collect(),
                None => return Err(Error::Precondition("frob needs --class FILE or --auto".into())),
            };
            for (k, alpha) in classes.iter().enumerate() {
                let rel = find_relation(&cx, alpha, &budget)?;
                let coeffs: Vec<String> = rel.g.coeffs.iter().map(|c| spec.ring().format(c)).collect();
                w(out, format!("class #{k} t={}: g(T) = {}", alpha.degree, format_g(spec.ring(), &rel.g)))?;
                w(out, format!("# g {}", serde_json::json!({"s": rel.g.s, "coeffs": coeffs})))?;
            }
        }
        Command::Kill { ring, i, class, out: prefix, window } => {
            let spec = load_ring(&ring, &budget)?;
            let cx = complex(&spec, &budget)?;
            let hash = ring_hash(&spec);
            let all = match class {
                Some(path) => {
                    let alpha = read_class(&cx, &path, &budget)?;
                    let (tower, cert) = kill_class(&cx, &alpha, &hash, &budget)?;
                    let (joined, _, map) = RingTower::trivial(spec.presentation.clone()).compositum(&tower, &budget)?;
                    KillAll { tower: joined, certificates: vec![cert], maps: vec![map], dimensions: Vec::new() }
                }
                None => kill_all(&cx, i, window.unwrap_or(DEFAULT_WINDOW), &hash, &budget)?,
            };
            if all.certificates.iter().any(|c| c.level != i) {
                return Err(Error::Precondition(format!("class is not of level {i}")));
            }
            let prefix = prefix.unwrap_or_else(|| default_prefix(&ring, &format!("h{i}")));
            let kc = with_ext(&prefix, "kc");
            write_atomic(&kc, &cert::to_text(&cert::kill_bundle_json(&spec, i, &all)))?;
            write_atomic(&with_ext(&prefix, "tower"), &serialize_tower(&spec, &all.tower))?;
            w(out, format!("killed {} class(es) of H^{i}; rank bound {}", all.certificates.len(), all.tower.rank_bound()))?;
            w(out, format!("certificate {}", kc.display()))?;
        }
        Command::Trivialize { ring, params, witness, out: prefix } => {
            let spec = load_ring(&ring, &budget)?;
            let cx = complex(&spec, &budget)?;
            let r = spec.ring();
            let xs = params.split(',').map(|s| r.parse(s.trim())).collect::<Result<Vec<_>>>()?;
            let wpoly = r.parse(&witness)?;
            let cert = trivialize_relation(&cx, &xs, &wpoly, &ring_hash(&spec), &budget)?;
            let prefix = prefix.unwrap_or_else(|| default_prefix(&ring, "triv"));
            write_atomic(&with_ext(&prefix, "tc"), &cert::to_text(&cert::trivialization_json(&spec, &cert)))?;
            write_atomic(&with_ext(&prefix, "tower"), &serialize_tower(&spec, &cert.tower))?;
            let tr = cert.tower.ring();
            for (k, c) in cert.cofactors.iter().enumerate() {
                w(out, format!("c{} = {}", k + 1, tr.format(c)))?;
            }
            w(out, format!("certificate {}", with_ext(&prefix, "tc").display()))?;
        }
        Command::Verify { cert: path, ring } => {
            let spec = load_ring(&ring, &budget)?;
            let text = read(&path).map_err(|e| Error::VerifyFail(e.to_string()))?;
            let (verified, report) = cert::verify_text(&text, &spec, &budget)?;
            let what = match verified {
                Verified::Kill { level, certificates, .. } => format!("{} kill certificate(s) for H^{level}", certificates.len()),
                Verified::Trivialization { .. } => "trivialization certificate".to_string(),
            };
            w(out, format!("OK: {what}, {} checks", report.checks.len()))?;
        }
    }
    Ok(())
}

/// Parse `argv` (including the program name) and run. Errors go to `err`
/// as `error[<category>]: <message>`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => Error::Parse(String::new()).exit_code(),
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let msg = match &e {
                Error::Parse(m) | Error::Budget(m) | Error::Precondition(m) | Error::VerifyFail(m) => m,
            };
            let _ = writeln!(err, "error[{}]: {msg}", e.category());
            e.exit_code()
        }
    }
}
