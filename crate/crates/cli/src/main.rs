//! `subdyn`: classify substitutions and run the applications from the
//! command line.
//!
//! Exit codes: 0 decided, 1 input error, 3 undecided at the requested depth,
//! 4 spectrum computed for a substitution that is not certified minimal.

/// `println!` that exits quietly when stdout is closed (e.g. piped to `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subdyn::catalog;
use subdyn::classifier::{classify, ClassifyOptions, TriState};
use subdyn::definition::Definition;
use subdyn::number_theory::{transcendence_report, TranscendenceOptions};
use subdyn::par::Execution;
use subdyn::recognizer::{enumerate_one_partitions, preimage_from_cuts, TwoLetterShape};
use subdyn::report::{
    analyze, gordon_json, partition_json, PartitionReport, ReportFile, SpectrumReport, TranscendenceJson,
};
use subdyn::spectral::{band_spectrum, default_window, gordon_check, GordonOptions};
use subdyn::substitution::{bounded_letters, is_primitive, Substitution};
use subdyn::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_NOT_MINIMAL: u8 = 4;

#[derive(Parser)]
#[command(name = "subdyn", version, about = "Minimality, linear repetitivity and applications for substitution subshifts")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide minimality and linear repetitivity, with certificates.
    Analyze(AnalyzeArgs),
    /// Band spectra of periodic approximants.
    Spectrum(SpectrumArgs),
    /// 1-partitions of a word for two-letter substitutions with S(b) = b.
    Partition(PartitionArgs),
    /// Stutter-criterion premises and the digit expansion of the fixed point.
    Transcendence(TranscendenceArgs),
    /// List or export the built-in substitutions.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct Source {
    /// Definition file, or `catalog:NAME` for a built-in entry.
    definition: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// Factor length up to which periodicity is tested.
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Iterates checked for the growth constants.
    #[arg(long, default_value_t = 30)]
    nmax: usize,
    /// Largest power tried for the compatibility certificate.
    #[arg(long, default_value_t = 8)]
    compat_depth: usize,
    /// Classify even when compatibility is not certified.
    #[arg(long)]
    assume_compatible: bool,
    /// Write the report as JSON.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: Source,
    /// Level k: the period word is S^k(e).
    #[arg(long, default_value_t = 6)]
    level: usize,
    /// Also compute every level from --level up to this one.
    #[arg(long, value_name = "K")]
    to: Option<usize>,
    /// Energy window.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    /// Letter e generating the period word (default: the certified letter).
    #[arg(long)]
    letter: Option<char>,
    /// Run the cube-frequency check as well.
    #[arg(long)]
    cubes: bool,
    /// Write the bands as CSV (level, band, lo, hi).
    #[arg(long, value_name = "OUT")]
    csv: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    source: Source,
    /// Word to partition, written in the alphabet of the definition
    #[arg(long, conflicts_with = "prefix", required_unless_present = "prefix")]
    word: Option<String>,
    /// Use the first N letters of the fixed point of a.
    #[arg(long, value_name = "N")]
    prefix: Option<usize>,
    /// Write the report as JSON.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct TranscendenceArgs {
    #[command(flatten)]
    source: Source,
    /// Iterates n checked for the length ratios.
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Binary places of the value.
    #[arg(long, default_value_t = 256)]
    bits: usize,
    /// Base of the expansion, at least 2
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Write the report as JSON.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Write the digits used, as one line of text.
    #[arg(long, value_name = "OUT")]
    digits: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    /// Print the definition of this entry.
    #[arg(long, value_name = "NAME")]
    export: Option<String>,
    /// Write every entry as NAME.json into this directory.
    #[arg(long, value_name = "DIR", conflicts_with = "export")]
    export_all: Option<PathBuf>,
    /// Output file for --export (default: stdout).
    #[arg(long, value_name = "OUT", requires = "export")]
    out: Option<PathBuf>,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UndecidedAtDepth(_)
            | Error::Unsaturated { .. }
            | Error::TooShallow { .. }
            | Error::LengthOverflow { .. }
            | Error::NoConvergence(_) => EXIT_UNDECIDED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Transcendence(a) => cmd_transcendence(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(source: &Source) -> Result<(Definition, Substitution), Failure> {
    let def = if let Some(name) = source.definition.strip_prefix("catalog:") {
        catalog::lookup(name)
            .ok_or_else(|| input_error(format!("no catalog entry named '{name}'")))?
            .definition
    } else {
        let path = Path::new(&source.definition);
        let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        Definition::from_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?
    };
    let subst = def.substitution()?;
    Ok((def, subst))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn print_caveats(caveats: &[String]) {
    for c in caveats {
        say!("  caveat: {c}");
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Outcome {
    let (def, subst) = load(&args.source)?;
    let options = ClassifyOptions {
        depth: args.depth,
        n_max: args.nmax,
        compat_depth: args.compat_depth,
        assume_compatible: args.assume_compatible,
        ..Default::default()
    };
    let analysis = analyze(&subst, &options)?;
    say!("{}: {}", def.name, analysis.summary());
    let c = &analysis.compatibility;
    match &c.evidence {
        Some(ev) => {
            let mut detail = vec![ev.kind.to_string()];
            detail.extend(ev.letter.as_ref().map(|l| format!("letter {l}")));
            detail.extend(ev.word.as_ref().map(|w| format!("word {w}")));
            detail.extend(ev.power.map(|p| format!("power {p}")));
            detail.extend(ev.side.map(|s| format!("{s} side")));
            say!("  compatibility: {} ({})", c.status, detail.join(", "));
        }
        None => say!("  compatibility: {}", c.status),
    }
    if let Some(cl) = &analysis.classification {
        say!(
            "  bounded letters: {{{}}}  growing letters: {{{}}}",
            cl.bounded_letters.join(", "),
            cl.growing_letters.join(", ")
        );
        for g in &cl.bounded_gaps {
            let mut line = format!("  bounded gaps for {}: {}", g.letter, g.decision.as_str());
            if let Some(k) = g.kappa {
                line.push_str(&format!(" (every factor of length {k} contains it)"));
            }
            if let (Some(cause), Some(w)) = (&g.cause, &g.witness) {
                line.push_str(&format!(" ({cause}; witness {w} in {})", g.witness_source.as_deref().unwrap_or("?")));
            }
            if let Some(r) = &g.reason {
                line.push_str(&format!(" ({r})"));
            }
            say!("{line}");
        }
        say!("  uniquely ergodic: {}", cl.uniquely_ergodic);
        if let Some(lr) = &cl.linear_repetitivity {
            say!(
                "  return words: {{{}}}  G = {}  theta = {:.12}  lambda = {:.6}  rho = {:.6}",
                lr.return_words.join(", "),
                lr.g,
                lr.theta,
                lr.lambda,
                lr.rho
            );
            say!("  C_LR = {:.6}", lr.c_lr);
        }
    }
    print_caveats(&analysis.caveats);
    let decided = analysis.decided();
    if let Some(path) = &args.json {
        write(path, &analysis.into_report(&def.name).to_json())?;
    }
    Ok(if decided { 0 } else { EXIT_UNDECIDED })
}

fn cmd_spectrum(args: SpectrumArgs) -> Outcome {
    let (def, subst) = load(&args.source)?;
    let window = match args.window.as_deref() {
        Some(&[lo, hi]) if lo < hi => Some((lo, hi)),
        Some(w) => return Err(input_error(format!("inverted energy window [{}, {}]", w[0], w[1]))),
        None => None,
    };
    let last = args.to.unwrap_or(args.level);
    if last < args.level {
        return Err(input_error(format!("--to {last} is below --level {}", args.level)));
    }
    let potential = def.potential()?;

    let report = match classify(&subst, &ClassifyOptions::default()) {
        Ok(r) => Some(r),
        Err(Error::Precondition(_) | Error::UndecidedAtDepth(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let minimal = report.as_ref().map_or(TriState::Undecided, |r| r.minimal);
    let e = match args.letter {
        Some(c) => subst.alphabet().letter_of(c).ok_or(Error::UnknownSymbol(c))?,
        None => report
            .as_ref()
            .and_then(|r| r.certificate.as_ref().map(|c| c.e))
            .or_else(|| bounded_letters(&subst).growing_letters().next())
            .ok_or(Error::EmptySubshift)?,
    };
    if minimal != TriState::Yes {
        eprintln!(
            "warning: {} is not certified minimal (minimal: {}); computing the periodic approximants anyway",
            def.name,
            minimal.as_str()
        );
    }
    let window = window.unwrap_or_else(|| default_window(potential.values(), 0.5));
    let mut spectra = Vec::new();
    for k in args.level..=last {
        spectra.push(band_spectrum(&subst, &potential, e, k, Some(window), Execution::default())?);
    }
    say!("level  period  bands  total measure");
    for s in &spectra {
        let flag = if s.possible_band_merging { "  (bands closer than 1e-7 merged)" } else { "" };
        say!("{:>5}  {:>6}  {:>5}  {:.12}{flag}", s.level, s.period_word.len(), s.bands.len(), s.total_measure);
    }
    let cubes = if args.cubes {
        match &report {
            Some(r) if r.minimal == TriState::Yes && r.lr.is_some() => {
                let g = gordon_check(&subst, r, &GordonOptions::default())?;
                let j = gordon_json(&subst, &g);
                match (&j.u, j.frequency_lower_bound) {
                    (Some(u), Some(bound)) => {
                        say!("cubes: u = {u}, frequency bound {bound:.6e}");
                        for l in &j.levels {
                            match l.frequency {
                                Some(f) => say!("  k = {}  |S^k(u)| = {}  frequency {f:.6e}", l.level, l.period),
                                None => say!("  k = {}  |S^k(u)| = {}  sample too short", l.level, l.period),
                            }
                        }
                    }
                    _ => say!("cubes: hypothesis not found (searched factors up to length {})", j.searched_length.unwrap_or(0)),
                }
                Some(j)
            }
            _ => {
                say!("cubes: skipped, needs a certified minimal subshift with C_LR");
                None
            }
        }
    } else {
        None
    };
    if let Some(path) = &args.csv {
        let mut csv = String::from("level,band,lo,hi\n");
        for s in &spectra {
            for (i, b) in s.bands.iter().enumerate() {
                csv.push_str(&format!("{},{},{},{}\n", s.level, i, b.lo, b.hi));
            }
        }
        write(path, &csv)?;
    }
    if let Some(path) = &args.json {
        let body = SpectrumReport::new(&subst, potential.values(), e, minimal, &spectra, cubes);
        let mut caveats = report.map(|r| r.depth_caveats).unwrap_or_default();
        if spectra.iter().any(|s| s.possible_band_merging) {
            caveats.push("bands closer than 1e-7 were merged".into());
        }
        write(path, &ReportFile::new("spectrum", &def.name, body, caveats).to_json())?;
    }
    Ok(if minimal == TriState::Yes { 0 } else { EXIT_NOT_MINIMAL })
}

fn cmd_partition(args: PartitionArgs) -> Outcome {
    let (def, subst) = load(&args.source)?;
    let shape = TwoLetterShape::new(&subst, &ClassifyOptions::default())?;
    let word = match (&args.word, args.prefix) {
        (Some(w), _) => subst.alphabet().parse(w)?,
        (None, Some(n)) => subst.fixed_point_prefix(shape.a, n)?,
        (None, None) => return Err(input_error("give --word or --prefix")),
    };
    let parts = enumerate_one_partitions(&shape, &word)?;
    if parts.is_empty() {
        return Err(input_error(format!("{} has no 1-partition", subst.render(&word))));
    }
    let l = shape.window;
    let n = word.len();
    say!("{}: L = {l}, word of length {n}, 1-partitions: {}", def.name, parts.len());
    let (lo, hi) = (l, n.saturating_sub(l));
    let mut sets: Vec<Vec<usize>> = parts.iter().map(|p| p.cuts_within(lo, hi)).collect();
    sets.sort();
    sets.dedup();
    let mut preimage = None;
    if n <= 2 * l {
        say!("  word is not longer than 2L; no interior to compare");
    } else if let [cuts] = sets.as_slice() {
        say!("  unique interior cut-set on [{lo}, {hi}]: {cuts:?}");
        let (pre, offset) = preimage_from_cuts(&shape, &word, cuts)?;
        say!("  preimage from position {offset}: {}", subst.render(&pre));
        preimage = Some((subst.render(&pre), offset));
    } else {
        say!("  {} distinct interior cut-sets on [{lo}, {hi}]", sets.len());
        for s in &sets {
            say!("    {s:?}");
        }
    }
    if let Some(path) = &args.json {
        let body = PartitionReport {
            rules: PartitionReport::rules_of(&shape),
            word: subst.render(&word),
            route: shape.route,
            l,
            partitions: parts.iter().map(|p| partition_json(&shape, p)).collect(),
            interior: [lo, hi],
            interior_cut_sets: sets.len(),
            interior_cuts: if sets.len() == 1 { sets[0].clone() } else { Vec::new() },
            preimage: preimage.as_ref().map(|p| p.0.clone()),
            preimage_offset: preimage.as_ref().map(|p| p.1),
        };
        write(path, &ReportFile::new("partition", &def.name, body, Vec::new()).to_json())?;
    }
    Ok(0)
}

fn cmd_transcendence(args: TranscendenceArgs) -> Outcome {
    let (def, subst) = load(&args.source)?;
    if subst.size() != 2 {
        return Err(input_error(format!("needs a two-letter alphabet, got {} letters", subst.size())));
    }
    if is_primitive(&subst).is_primitive() {
        say!("{}: primitive case: covered by Allouche–Zamboni, not analyzed here", def.name);
        return Ok(0);
    }
    let report = classify(&subst, &ClassifyOptions::default())?;
    let options = TranscendenceOptions { depth: args.depth, bits: args.bits, base: args.base };
    let r = transcendence_report(&subst, &report, &options)?;
    let j = TranscendenceJson::new(&subst, &r, &options);
    match &r.witness.skeleton.case {
        subdyn::number_theory::StutterCase::ZeroOnesZero { k, w } => {
            say!("{}: case {} (k = {k}, w = \"{w}\")", def.name, j.case_tag)
        }
        subdyn::number_theory::StutterCase::DoubleZero { w } => say!("{}: case {} (w = \"{w}\")", def.name, j.case_tag),
    }
    if j.letters_swapped {
        say!("  letters swapped to bring the fixed letter second");
    }
    say!("  p = \"{}\"", j.p);
    say!("   n  |U_n|  |V_n|  |V'_n|  |U_n|/|V_n|  |V'_n|/|V_n|");
    for n in 0..=options.depth {
        say!(
            "  {n:>2}  {}  {}  {}  {:.9}  {:.9}",
            j.u_lengths[n], j.v_lengths[n], j.v_prime_lengths[n], j.ratios_uv[n], j.ratios_vpv[n]
        );
    }
    say!("  |V_n| unbounded: {}", j.v_unbounded.as_str());
    say!("  |U_n|/|V_n| bounded: {} (max {:.9})", j.uv_bounded.as_str(), j.max_ratio_uv);
    say!("  |V'_n|/|V_n| bounded below: {} (min {:.9})", j.vpv_positive.as_str(), j.min_ratio_vpv);
    say!("  z (base {}, {} bits) = {}", j.base, j.bits, j.value_binary);
    say!("  z ~ {}", j.value_decimal);
    say!("  two-precision check: {}", if j.precision_checked { "agree" } else { "DISAGREE" });
    say!("  {}", j.statement);
    if let Some(path) = &args.digits {
        let u = subst.fixed_point_prefix(r.witness.skeleton.zero, r.value.digits_used)?;
        let text: String = u.iter().map(|&d| char::from(b'0' + d)).chain(std::iter::once('\n')).collect();
        fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.json {
        let caveats = vec![format!("length ratios checked for n <= {}", options.depth)];
        write(path, &ReportFile::new("transcendence", &def.name, j.clone(), caveats).to_json())?;
    }
    let settled = [j.v_unbounded, j.uv_bounded, j.vpv_positive].iter().all(|&t| t == TriState::Yes);
    Ok(if settled && j.precision_checked { 0 } else { 3 })
}

fn cmd_catalog(args: CatalogArgs) -> Outcome {
    if let Some(name) = &args.export {
        let entry = catalog::lookup(name).ok_or_else(|| input_error(format!("no catalog entry named '{name}'")))?;
        let text = entry.definition.to_json();
        match &args.out {
            Some(path) => write(path, &text)?,
            None => say!("{}", text.trim_end_matches('\n')),
        }
        return Ok(0);
    }
    if let Some(dir) = &args.export_all {
        fs::create_dir_all(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
        for entry in catalog::catalog() {
            write(&dir.join(format!("{}.json", entry.name)), &entry.definition.to_json())?;
        }
        return Ok(0);
    }
    for entry in catalog::catalog() {
        say!("{:<22} {}", entry.name, entry.description);
    }
    Ok(0)
}
