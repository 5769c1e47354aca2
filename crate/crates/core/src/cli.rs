//! The `vcoh` command line.
//!
//! Exit status is 0 on success, 1 when well-formed input fails
//! mathematically (axiom failure, unverifiable extension, inequivalent
//! pair), and 2 on malformed input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::axioms::{check_all, check_module, Axiom, AxiomReport, Verdict};
use crate::cohomology::{class_coordinates, compute_der, compute_h2, TwoCochain};
use crate::error::{Error, Result};
use crate::extension::{
    build_deformation, build_extension, check_equivalence_deformations,
    check_equivalence_extensions, verify_extension, Equivalence, SquareZeroExtension,
};
use crate::graded::{VAModule, VertexAlgebra};
use crate::presets::{
    adjoint_module, dual_numbers_algebra, graded_nilpotent_algebra, split_pair_algebra,
    trivial_algebra, truncated_free_boson,
};
use crate::report::{
    axiom_report_json, axiom_report_text, cochain_json, cochain_text, cohomology_json, map_json,
    map_text, sha256_hex, Roles,
};
use crate::scalar::Scalar;
use crate::specfile::{dump, dump_loaded, parse_spec, Loaded, SpecFile};

#[derive(Debug, Parser)]
#[command(name = "vcoh", version, about = "Cohomology, extensions and deformations of vertex algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Trivial,
    DualNumbers,
    SplitPair,
    GradedNilpotent,
    FreeBoson,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Trivial => "trivial",
            Preset::DualNumbers => "dual-numbers",
            Preset::SplitPair => "split-pair",
            Preset::GradedNilpotent => "graded-nilpotent",
            Preset::FreeBoson => "free-boson",
        }
    }

    /// The preset algebra; `cutoff` is the truncation level of the free
    /// boson (default 4) and an override for the exact presets.
    pub fn build(self, cutoff: Option<i64>) -> Result<VertexAlgebra<Scalar>> {
        let v = match self {
            Preset::Trivial => trivial_algebra(),
            Preset::DualNumbers => dual_numbers_algebra(),
            Preset::SplitPair => split_pair_algebra(),
            Preset::GradedNilpotent => graded_nilpotent_algebra(),
            Preset::FreeBoson => {
                let n = cutoff.unwrap_or(4);
                if !(0..=8).contains(&n) {
                    return Err(Error::WeightOutOfRange {
                        weight: n,
                        min: 0,
                        cutoff: 8,
                    });
                }
                return Ok(truncated_free_boson(n as u32));
            }
        };
        match cutoff {
            Some(c) => v.with_cutoff(c),
            None => Ok(v),
        }
    }
}

#[derive(Debug, Args)]
pub struct Source {
    /// Algebra spec file.
    pub spec: Option<PathBuf>,
    /// Use a built-in algebra instead of a spec file.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Override the cutoff (truncation level for truncated algebras).
    #[arg(long, allow_negative_numbers = true)]
    pub cutoff: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivKind {
    Extension,
    Deformation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every axiom of the algebra (and of its module, if given).
    Check(Source),
    /// Derivations into the module (the adjoint module by default).
    H1(Source),
    /// Cocycles, coboundaries and second cohomology.
    H2(Source),
    /// Build and verify the square-zero extension twisted by a cochain.
    Extend {
        #[command(flatten)]
        source: Source,
        /// File whose PSI section gives the cochain (default: the spec's own PSI).
        #[arg(long)]
        psi: Option<PathBuf>,
        /// Write the extension as a spec file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the first-order deformation Y + tΨ over the dual numbers.
    Deform {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// Decide whether two cochains give equivalent extensions or deformations.
    Equiv {
        #[arg(long, value_enum)]
        kind: EquivKind,
        /// First spec (or PSI-only file with --preset).
        a: PathBuf,
        /// Second spec (or PSI-only file with --preset).
        b: PathBuf,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: Option<i64>,
    },
    /// Print a built-in algebra in the spec format.
    DumpPreset {
        #[arg(value_enum)]
        preset: Preset,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: Option<i64>,
    },
}

/// A finished command: exit status, rendered report, optional emitted file.
#[derive(Debug)]
pub struct Finished {
    pub status: i32,
    pub output: String,
    pub emit: Option<(PathBuf, String)>,
}

struct Input {
    loaded: Loaded,
    description: String,
    digest: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(source: &Source) -> Result<Input> {
    let loaded = match (&source.spec, source.preset) {
        (Some(_), Some(_)) => {
            return Err(Error::SpaceMismatch("give either a spec file or --preset, not both".into()))
        }
        (None, None) => return Err(Error::SpaceMismatch("give a spec file or --preset".into())),
        (None, Some(p)) => Loaded {
            algebra: p.build(source.cutoff)?,
            module: None,
            psi: None,
        },
        (Some(path), None) => parse_spec(&read(path)?)?.build(source.cutoff)?,
    };
    let description = match (&source.spec, source.preset) {
        (Some(path), _) => path.display().to_string(),
        (_, Some(p)) => format!("preset:{}", p.name()),
        _ => unreachable!(),
    };
    let digest = sha256_hex(&dump_loaded(&loaded));
    Ok(Input {
        loaded,
        description,
        digest,
    })
}

fn module_of(input: &Input) -> Result<VAModule<Scalar>> {
    match &input.loaded.module {
        Some(m) => Ok(m.clone()),
        None => adjoint_module(&input.loaded.algebra),
    }
}

fn psi_from(
    file: Option<&Path>,
    input: &Input,
    target: &VAModule<Scalar>,
) -> Result<(TwoCochain, Option<String>)> {
    match file {
        Some(path) => {
            let text = read(path)?;
            let spec = parse_spec(&text)?;
            let psi = spec.cochain(input.loaded.algebra.space(), target.space())?;
            Ok((psi, Some(path.display().to_string())))
        }
        None => Ok((
            input
                .loaded
                .psi
                .clone()
                .unwrap_or_else(|| zero_cochain(&input.loaded.algebra, target)),
            None,
        )),
    }
}

fn zero_cochain(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> TwoCochain {
    TwoCochain::zero(v.space().clone(), v.space().clone(), w.space().clone())
}

struct Rendered {
    json: Value,
    text: String,
    status: i32,
    emit: Option<(PathBuf, String)>,
}

fn input_json(input: &Input) -> Value {
    json!({"source": input.description, "sha256": input.digest})
}

fn algebra_roles<'a>(v: &'a VertexAlgebra<Scalar>) -> impl Fn(Axiom) -> Roles<'a> {
    move |_| Roles::uniform(v.space())
}

fn module_roles<'a>(v: &'a VertexAlgebra<Scalar>, w: &'a VAModule<Scalar>) -> impl Fn(Axiom) -> Roles<'a> {
    move |_| Roles {
        algebra: v.space(),
        acted: w.space(),
        residual: w.space(),
    }
}

fn extension_roles<'a>(e: &'a SquareZeroExtension) -> impl Fn(Axiom) -> Roles<'a> {
    move |a| Roles {
        algebra: e.total.space(),
        acted: e.total.space(),
        residual: if a == Axiom::ProjectionHomomorphism {
            e.base().space()
        } else {
            e.total.space()
        },
    }
}

fn status_of(verdict: Verdict) -> i32 {
    if verdict.is_fail() {
        1
    } else {
        0
    }
}

/// The algebra and module must pass before cohomology is meaningful.
fn precondition(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> Option<Rendered> {
    let rv = check_all(v);
    let rw = check_module(v, w);
    if !rv.verdict().is_fail() && !rw.verdict().is_fail() {
        return None;
    }
    let mut text = String::from("input fails the axiom check; nothing computed\n");
    text.push_str(&axiom_report_text(&rv, algebra_roles(v)));
    Some(Rendered {
        json: json!({
            "error": "input fails the axiom check",
            "algebra": axiom_report_json(&rv, algebra_roles(v)),
            "module": axiom_report_json(&rw, module_roles(v, w)),
        }),
        text,
        status: 1,
        emit: None,
    })
}

fn cmd_check(source: &Source) -> Result<Rendered> {
    let input = load(source)?;
    let v = &input.loaded.algebra;
    let rv = check_all(v);
    let mut verdict = rv.verdict();
    let mut json = json!({
        "input": input_json(&input),
        "algebra": axiom_report_json(&rv, algebra_roles(v)),
    });
    let mut text = axiom_report_text(&rv, algebra_roles(v));
    if let Some(w) = &input.loaded.module {
        let rw = check_module(v, w);
        if rw.verdict().is_fail() {
            verdict = Verdict::Fail;
        } else if rw.verdict() == Verdict::PassWithinWindow && verdict == Verdict::Pass {
            verdict = Verdict::PassWithinWindow;
        }
        json["module"] = axiom_report_json(&rw, module_roles(v, w));
        text.push_str("module:\n");
        text.push_str(&axiom_report_text(&rw, module_roles(v, w)));
    }
    json["verdict"] = json!(verdict.as_str());
    Ok(Rendered {
        json,
        text,
        status: status_of(verdict),
        emit: None,
    })
}

fn cmd_h1(source: &Source) -> Result<Rendered> {
    let input = load(source)?;
    let v = &input.loaded.algebra;
    let w = module_of(&input)?;
    if let Some(r) = precondition(v, &w) {
        return Ok(r);
    }
    let r = compute_der(v, &w);
    let mut text = format!("dim H1 = dim Der = {}\n", r.h_dim);
    if let Some(win) = r.window {
        text.push_str(&format!("({})\n", win.describe()));
    }
    for f in &r.cocycle_basis {
        text.push_str(&format!("  {}\n", map_text(f)));
    }
    Ok(Rendered {
        json: json!({
            "input": input_json(&input),
            "h1": cohomology_json(&r, map_json),
        }),
        text,
        status: 0,
        emit: None,
    })
}

fn cmd_h2(source: &Source) -> Result<Rendered> {
    let input = load(source)?;
    let v = &input.loaded.algebra;
    let w = module_of(&input)?;
    if let Some(r) = precondition(v, &w) {
        return Ok(r);
    }
    let r = compute_h2(v, &w)?;
    let mut text = format!(
        "dim Z2 = {}\ndim B2 = {}\ndim H2 = {}\n",
        r.cocycle_basis.len(),
        r.coboundary_basis.len(),
        r.h_dim
    );
    if let Some(win) = r.window {
        text.push_str(&format!("({}, {} checks skipped)\n", win.describe(), r.skipped));
    }
    for rep in &r.representatives {
        text.push_str(&format!("  representative: {}\n", cochain_text(rep)));
    }
    Ok(Rendered {
        json: json!({
            "input": input_json(&input),
            "h2": cohomology_json(&r, cochain_json),
        }),
        text,
        status: 0,
        emit: None,
    })
}

fn cmd_extend(source: &Source, psi: Option<&Path>, emit: Option<&Path>) -> Result<Rendered> {
    let input = load(source)?;
    let v = &input.loaded.algebra;
    let w = module_of(&input)?;
    let (psi, psi_source) = psi_from(psi, &input, &w)?;
    let e = build_extension(v, &w, &psi)?;
    let report = verify_extension(&e);
    let verdict = report.verdict();
    let spec = dump(&e.total, None, None);
    let mut json = json!({
        "input": input_json(&input),
        "psi": cochain_json(&psi),
        "psi_source": psi_source,
        "verification": axiom_report_json(&report, extension_roles(&e)),
        "verdict": verdict.as_str(),
    });
    let mut text = format!("psi: {}\n", cochain_text(&psi));
    text.push_str(&axiom_report_text(&report, extension_roles(&e)));
    let mut file = None;
    if !verdict.is_fail() {
        match emit {
            Some(path) => {
                json["emitted"] = json!(path.display().to_string());
                text.push_str(&format!("extension written to {}\n", path.display()));
                file = Some((path.to_path_buf(), spec));
            }
            None => {
                text.push_str(&spec);
                json["extension"] = json!(spec);
            }
        }
    }
    Ok(Rendered {
        json,
        text,
        status: status_of(verdict),
        emit: file,
    })
}

fn cmd_deform(source: &Source, psi: Option<&Path>) -> Result<Rendered> {
    let input = load(source)?;
    let v = &input.loaded.algebra;
    let adjoint = adjoint_module(v)?;
    let (psi, psi_source) = psi_from(psi, &input, &adjoint)?;
    let d = build_deformation(v, &psi)?;
    let report: AxiomReport<_> = check_all(&d.deformed);
    let roles = algebra_roles(v);
    let json = json!({
        "input": input_json(&input),
        "psi": cochain_json(&psi),
        "psi_source": psi_source,
        "deformed": axiom_report_json(&report, &roles),
        "verdict": report.verdict().as_str(),
    });
    let mut text = format!("psi: {}\n", cochain_text(&psi));
    text.push_str(&axiom_report_text(&report, &roles));
    Ok(Rendered {
        json,
        text,
        status: status_of(report.verdict()),
        emit: None,
    })
}

fn equivalence_output(eq: Option<Equivalence>, obstruction: impl FnOnce() -> Result<Vec<Scalar>>) -> Result<(Value, String, i32)> {
    Ok(match eq {
        Some(eq) => (
            json!({"equivalent": true, "g": map_json(&eq.g), "kind": eq.kind}),
            format!("equivalent\ng: {}\n", map_text(&eq.g)),
            0,
        ),
        None => {
            let coords = obstruction()?;
            let shown: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            (
                json!({"equivalent": false, "obstruction": shown}),
                format!("inequivalent\nobstruction class coordinates: [{}]\n", shown.join(", ")),
                1,
            )
        }
    })
}

fn cmd_equiv(kind: EquivKind, a: &Path, b: &Path, preset: Option<Preset>, cutoff: Option<i64>) -> Result<Rendered> {
    let text_a = read(a)?;
    let text_b = read(b)?;
    let spec_a = parse_spec(&text_a)?;
    let spec_b = parse_spec(&text_b)?;
    let base: Loaded = match preset {
        Some(p) => Loaded {
            algebra: p.build(cutoff)?,
            module: None,
            psi: None,
        },
        None => {
            let la = spec_a.build(cutoff)?;
            if spec_b.has_algebra() {
                let lb = spec_b.build(cutoff)?;
                if lb.algebra != la.algebra || lb.module != la.module {
                    return Err(Error::SpaceMismatch("the two specs describe different algebras".into()));
                }
            }
            la
        }
    };
    let v = &base.algebra;
    let w = match (&base.module, kind) {
        (Some(m), EquivKind::Extension) => m.clone(),
        _ => adjoint_module(v)?,
    };
    let cochain = |s: &SpecFile| s.cochain(v.space(), w.space());
    let (psi_a, psi_b) = (cochain(&spec_a)?, cochain(&spec_b)?);
    let digest = sha256_hex(&format!(
        "{}{}",
        dump(v, base.module.as_ref(), Some(&psi_a)),
        dump(v, base.module.as_ref(), Some(&psi_b))
    ));
    let obstruction = || -> Result<Vec<Scalar>> {
        let h2 = compute_h2(v, &w)?;
        class_coordinates(&h2, &psi_a.difference(&psi_b)?)
    };
    let (mut json, mut text, status) = match kind {
        EquivKind::Extension => {
            let e1 = build_extension(v, &w, &psi_a)?;
            let e2 = build_extension(v, &w, &psi_b)?;
            for (name, e) in [("a", &e1), ("b", &e2)] {
                let r = verify_extension(e);
                if r.verdict().is_fail() {
                    let text = format!("{name} is not an extension\n{}", axiom_report_text(&r, extension_roles(e)));
                    return Ok(Rendered {
                        json: json!({"error": format!("{name} is not an extension"), "verification": axiom_report_json(&r, extension_roles(e))}),
                        text,
                        status: 1,
                        emit: None,
                    });
                }
            }
            equivalence_output(check_equivalence_extensions(&e1, &e2)?, obstruction)?
        }
        EquivKind::Deformation => {
            let d1 = build_deformation(v, &psi_a)?;
            let d2 = build_deformation(v, &psi_b)?;
            for (name, d) in [("a", &d1), ("b", &d2)] {
                let r = check_all(&d.deformed);
                if r.verdict().is_fail() {
                    let text = format!("{name} is not a deformation\n{}", axiom_report_text(&r, algebra_roles(v)));
                    return Ok(Rendered {
                        json: json!({"error": format!("{name} is not a deformation"), "deformed": axiom_report_json(&r, algebra_roles(v))}),
                        text,
                        status: 1,
                        emit: None,
                    });
                }
            }
            equivalence_output(check_equivalence_deformations(&d1, &d2)?, obstruction)?
        }
    };
    json["input"] = json!({
        "a": a.display().to_string(),
        "b": b.display().to_string(),
        "sha256": digest,
    });
    text.insert_str(0, &format!("psi_a: {}\npsi_b: {}\n", cochain_text(&psi_a), cochain_text(&psi_b)));
    Ok(Rendered {
        json,
        text,
        status,
        emit: None,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check(_) => "check",
        Command::H1(_) => "h1",
        Command::H2(_) => "h2",
        Command::Extend { .. } => "extend",
        Command::Deform { .. } => "deform",
        Command::Equiv { .. } => "equiv",
        Command::DumpPreset { .. } => "dump-preset",
    }
}

/// Runs a parsed command line without touching standard output.
pub fn run(cli: &Cli) -> Result<Finished> {
    let start = Instant::now();
    let mut r = match &cli.command {
        Command::Check(s) => cmd_check(s)?,
        Command::H1(s) => cmd_h1(s)?,
        Command::H2(s) => cmd_h2(s)?,
        Command::Extend { source, psi, emit } => cmd_extend(source, psi.as_deref(), emit.as_deref())?,
        Command::Deform { source, psi } => cmd_deform(source, psi.as_deref())?,
        Command::Equiv {
            kind,
            a,
            b,
            preset,
            cutoff,
        } => cmd_equiv(*kind, a, b, *preset, *cutoff)?,
        Command::DumpPreset { preset, cutoff } => {
            let text = dump(&preset.build(*cutoff)?, None, None);
            Rendered {
                json: json!({"preset": preset.name(), "spec": text}),
                text,
                status: 0,
                emit: None,
            }
        }
    };
    r.json["command"] = json!(command_name(&cli.command));
    if cli.timing {
        let ms = start.elapsed().as_millis() as u64;
        r.json["elapsed_ms"] = json!(ms);
        r.text.push_str(&format!("elapsed: {ms} ms\n"));
    }
    let output = if cli.json {
        let mut s = serde_json::to_string_pretty(&r.json).expect("values serialize");
        s.push('\n');
        s
    } else {
        r.text
    };
    Ok(Finished {
        status: r.status,
        output,
        emit: r.emit,
    })
}

fn write(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}

/// Parses arguments, runs, prints or writes the result, and returns the
/// process exit status.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(done) => {
            if let Some((path, text)) = &done.emit {
                if let Err(e) = write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = write(path, &done.output) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{}", done.output),
            }
            done.status
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"command": command_name(&cli.command), "error": e.to_string()}));
            }
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}
