//! The plain-text algebra spec format.
//!
//! ```text
//! # comments run to the end of the line
//! WEIGHTS
//! min 0
//! cutoff 1
//! tier exact
//! BASIS
//! 0: one
//! 1: eps
//! VACUUM
//! one
//! MODES
//! one -1 eps -> 1*eps
//! eps -1 one -> 1*eps
//! MODULE
//! WEIGHTS
//! ...
//! BASIS
//! ...
//! MODES
//! ...
//! TW
//! w -> 1*w2
//! PSI
//! eps -1 eps -> 1*one
//! ```
//!
//! Section headers are bare upper-case words. Everything after `MODULE`
//! describes the module until `PSI`, which must come last. Vectors are `0` or
//! terms `c*label` joined by `+`; a bare `label` means `1*label` and `-label`
//! means `-1*label`. Coefficients are exact rationals `p` or `p/q`.
//! Missing `min`/`cutoff` default to the lowest/highest weight present,
//! missing `tier` to `exact`.

use std::str::FromStr;
use std::sync::Arc;

use crate::cohomology::TwoCochain;
use crate::error::{Error, Result};
use crate::graded::{
    build_module, build_vertex_algebra, fill_modes, AlgebraDescription, GradedMap, GradedSpace,
    ModeEntry, ModeFamily, ModuleDescription, Tier, VAModule, VertexAlgebra,
};
use crate::scalar::Scalar;

/// Basis and grading data shared by the algebra and module parts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpaceSection {
    pub basis: Vec<(i64, String)>,
    pub min_weight: Option<i64>,
    pub cutoff: Option<i64>,
    pub tier: Option<Tier>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModuleSection {
    pub space: SpaceSection,
    pub modes: Vec<ModeEntry<Scalar>>,
    pub translation: Vec<(String, Vec<(Scalar, String)>)>,
}

/// A parsed spec file, before any validation beyond syntax.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpecFile {
    pub space: SpaceSection,
    pub vacuum: Option<String>,
    pub modes: Vec<ModeEntry<Scalar>>,
    pub module: Option<ModuleSection>,
    pub psi: Option<Vec<ModeEntry<Scalar>>>,
}

/// The objects a spec file describes.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded {
    pub algebra: VertexAlgebra<Scalar>,
    pub module: Option<VAModule<Scalar>>,
    pub psi: Option<TwoCochain>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Start,
    Weights,
    Basis,
    Vacuum,
    Modes,
    Translation,
    Psi,
}

const HEADERS: [&str; 7] = ["WEIGHTS", "BASIS", "VACUUM", "MODES", "MODULE", "TW", "PSI"];

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(b, t)| (line[..b].chars().count() + 1, t))
        .collect()
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn parse_int(text: &str, line: usize, column: usize) -> Result<i64> {
    text.parse()
        .map_err(|_| parse_error(line, column, format!("expected an integer, found `{text}`")))
}

/// Parses the vector expression starting at byte `offset` of `line`.
fn parse_vector(full: &str, offset: usize, line: usize) -> Result<Vec<(Scalar, String)>> {
    let text = &full[offset..];
    if text.trim().is_empty() {
        return Err(parse_error(line, column_of(full, offset), "missing vector after `->`"));
    }
    if text.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for piece in text.split('+') {
        let lead = piece.len() - piece.trim_start().len();
        let term = piece.trim();
        let col = column_of(full, offset + start + lead);
        start += piece.len() + 1;
        if term.is_empty() {
            return Err(parse_error(line, col, "empty term"));
        }
        let (coeff, label) = match term.split_once('*') {
            Some((c, l)) => {
                let c = Scalar::from_str(c.trim())
                    .map_err(|_| parse_error(line, col, format!("invalid coefficient `{}`", c.trim())))?;
                (c, l.trim())
            }
            None => match term.strip_prefix('-') {
                Some(l) => (-Scalar::one(), l.trim()),
                None => (Scalar::one(), term),
            },
        };
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(parse_error(line, col, format!("malformed term `{term}`")));
        }
        terms.push((coeff, label.to_string()));
    }
    Ok(terms)
}

fn parse_mode_line(full: &str, line: usize) -> Result<ModeEntry<Scalar>> {
    let arrow = full
        .find("->")
        .ok_or_else(|| parse_error(line, 1, "expected `left mode right -> vector`"))?;
    let lhs = tokens(&full[..arrow]);
    if lhs.len() != 3 {
        let col = lhs.get(3).map_or(1, |t| t.0);
        return Err(parse_error(
            line,
            col,
            format!("expected three fields before `->`, found {}", lhs.len()),
        ));
    }
    let mode = parse_int(lhs[1].1, line, lhs[1].0)?;
    Ok(ModeEntry {
        left: lhs[0].1.to_string(),
        mode,
        right: lhs[2].1.to_string(),
        value: parse_vector(full, arrow + 2, line)?,
    })
}

fn parse_translation_line(full: &str, line: usize) -> Result<(String, Vec<(Scalar, String)>)> {
    let arrow = full
        .find("->")
        .ok_or_else(|| parse_error(line, 1, "expected `label -> vector`"))?;
    let lhs = tokens(&full[..arrow]);
    if lhs.len() != 1 {
        return Err(parse_error(line, 1, "expected a single label before `->`"));
    }
    Ok((lhs[0].1.to_string(), parse_vector(full, arrow + 2, line)?))
}

fn parse_weights_line(space: &mut SpaceSection, full: &str, line: usize) -> Result<()> {
    let toks = tokens(full);
    if toks.len() != 2 {
        return Err(parse_error(line, 1, "expected `min N`, `cutoff N` or `tier exact|truncated`"));
    }
    let (col, value) = toks[1];
    match toks[0].1 {
        "min" => space.min_weight = Some(parse_int(value, line, col)?),
        "cutoff" => space.cutoff = Some(parse_int(value, line, col)?),
        "tier" => {
            space.tier = Some(match value {
                "exact" => Tier::Exact,
                "truncated" => Tier::Truncated,
                other => return Err(parse_error(line, col, format!("unknown tier `{other}`"))),
            })
        }
        other => return Err(parse_error(line, toks[0].0, format!("unknown weights key `{other}`"))),
    }
    Ok(())
}

fn parse_basis_line(space: &mut SpaceSection, full: &str, line: usize) -> Result<()> {
    let colon = full
        .find(':')
        .ok_or_else(|| parse_error(line, 1, "expected `weight: label ...`"))?;
    let w_text = full[..colon].trim();
    let w_col = column_of(full, full.len() - full.trim_start().len());
    let weight = parse_int(w_text, line, w_col)?;
    let labels = tokens(&full[colon + 1..]);
    if labels.is_empty() {
        return Err(parse_error(line, column_of(full, colon) + 1, "no labels after `:`"));
    }
    for (_, l) in labels {
        space.basis.push((weight, l.to_string()));
    }
    Ok(())
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut spec = SpecFile::default();
    let mut section = Section::Start;
    let mut in_module = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let full = raw.split('#').next().unwrap_or("");
        let toks = tokens(full);
        if toks.is_empty() {
            continue;
        }
        let first = toks[0].1;
        if toks.len() == 1 && first.chars().all(|c| c.is_ascii_uppercase() || c == '_') {
            if !HEADERS.contains(&first) {
                return Err(parse_error(line, toks[0].0, format!("unknown section `{first}`")));
            }
            if section == Section::Psi {
                return Err(parse_error(line, toks[0].0, "PSI must be the last section"));
            }
            section = match first {
                "WEIGHTS" => Section::Weights,
                "BASIS" => Section::Basis,
                "VACUUM" if in_module => {
                    return Err(parse_error(line, toks[0].0, "VACUUM inside MODULE"))
                }
                "VACUUM" => Section::Vacuum,
                "MODES" => Section::Modes,
                "TW" if !in_module => {
                    return Err(parse_error(line, toks[0].0, "TW outside MODULE"))
                }
                "TW" => Section::Translation,
                "PSI" => {
                    spec.psi = Some(Vec::new());
                    Section::Psi
                }
                _ => {
                    if in_module {
                        return Err(parse_error(line, toks[0].0, "duplicate MODULE section"));
                    }
                    in_module = true;
                    spec.module = Some(ModuleSection::default());
                    Section::Start
                }
            };
            continue;
        }
        let module = spec.module.as_mut().filter(|_| in_module);
        match section {
            Section::Start => {
                return Err(parse_error(line, toks[0].0, "content before any section header"))
            }
            Section::Weights => match module {
                Some(m) => parse_weights_line(&mut m.space, full, line)?,
                None => parse_weights_line(&mut spec.space, full, line)?,
            },
            Section::Basis => match module {
                Some(m) => parse_basis_line(&mut m.space, full, line)?,
                None => parse_basis_line(&mut spec.space, full, line)?,
            },
            Section::Vacuum => {
                if toks.len() != 1 || spec.vacuum.is_some() {
                    return Err(parse_error(line, toks[0].0, "VACUUM takes exactly one label"));
                }
                spec.vacuum = Some(first.to_string());
            }
            Section::Modes => {
                let entry = parse_mode_line(full, line)?;
                match module {
                    Some(m) => m.modes.push(entry),
                    None => spec.modes.push(entry),
                }
            }
            Section::Translation => {
                let t = parse_translation_line(full, line)?;
                module.expect("TW only inside MODULE").translation.push(t);
            }
            Section::Psi => {
                let entry = parse_mode_line(full, line)?;
                spec.psi.as_mut().expect("PSI opened").push(entry);
            }
        }
    }
    Ok(spec)
}

impl SpecFile {
    pub fn has_algebra(&self) -> bool {
        !self.space.basis.is_empty()
    }

    fn algebra_description(&self, cutoff: Option<i64>) -> AlgebraDescription<Scalar> {
        AlgebraDescription {
            basis: self.space.basis.clone(),
            min_weight: self.space.min_weight,
            cutoff: cutoff.or(self.space.cutoff),
            tier: self.space.tier.unwrap_or(Tier::Exact),
            vacuum: self.vacuum.clone(),
            modes: self.modes.clone(),
        }
    }

    /// Builds and validates everything the file describes. `cutoff`
    /// overrides the algebra's cutoff; truncated algebras drop states above
    /// it, exact ones reject a cutoff below their top weight.
    pub fn build(&self, cutoff: Option<i64>) -> Result<Loaded> {
        let desc = self.algebra_description(None);
        let mut algebra = build_vertex_algebra(&desc)?;
        if let Some(c) = cutoff {
            algebra = algebra.with_cutoff(c)?;
        }
        let module = match &self.module {
            Some(m) => Some(build_module(
                &algebra,
                &ModuleDescription {
                    basis: m.space.basis.clone(),
                    min_weight: m.space.min_weight,
                    cutoff: m.space.cutoff,
                    tier: m.space.tier.unwrap_or(Tier::Exact),
                    modes: m.modes.clone(),
                    translation: m.translation.clone(),
                },
            )?),
            None => None,
        };
        let target = module.as_ref().map_or(algebra.space(), |m| m.space()).clone();
        let psi = match &self.psi {
            Some(entries) => Some(build_cochain(algebra.space(), &target, entries)?),
            None => None,
        };
        Ok(Loaded {
            algebra,
            module,
            psi,
        })
    }

    /// The PSI section as a cochain `V ⊗ V → target`; zero if absent.
    pub fn cochain(&self, algebra: &Arc<GradedSpace>, target: &Arc<GradedSpace>) -> Result<TwoCochain> {
        build_cochain(algebra, target, self.psi.as_deref().unwrap_or(&[]))
    }
}

pub fn build_cochain(
    algebra: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    entries: &[ModeEntry<Scalar>],
) -> Result<TwoCochain> {
    let mut psi = ModeFamily::zero(algebra.clone(), algebra.clone(), target.clone());
    fill_modes(&mut psi, entries)?;
    Ok(psi)
}

fn dump_space(out: &mut String, space: &GradedSpace) {
    out.push_str("WEIGHTS\n");
    out.push_str(&format!("min {}\n", space.min_weight()));
    out.push_str(&format!("cutoff {}\n", space.cutoff()));
    out.push_str(&format!("tier {}\n", space.tier().as_str()));
    out.push_str("BASIS\n");
    for w in space.weights_present() {
        let labels: Vec<&str> = space.basis_of_weight(w).map(|i| space.label(i)).collect();
        out.push_str(&format!("{}: {}\n", w, labels.join(" ")));
    }
}

fn dump_modes(out: &mut String, modes: &ModeFamily<Scalar>) {
    for (&(a, n, b), v) in modes.entries() {
        out.push_str(&format!(
            "{} {} {} -> {}\n",
            modes.left().label(a),
            n,
            modes.right().label(b),
            modes.target().format_vector(v)
        ));
    }
}

fn dump_translation(out: &mut String, t: &GradedMap<Scalar>) {
    let space = t.source();
    for i in 0..space.dim() {
        let img = t.image(i);
        if !img.is_zero() {
            out.push_str(&format!("{} -> {}\n", space.label(i), t.target().format_vector(img)));
        }
    }
}

/// The canonical text of an algebra with optional module and cochain.
pub fn dump(v: &VertexAlgebra<Scalar>, module: Option<&VAModule<Scalar>>, psi: Option<&TwoCochain>) -> String {
    let mut out = String::new();
    dump_space(&mut out, v.space());
    out.push_str("VACUUM\n");
    out.push_str(v.space().label(v.vacuum()));
    out.push('\n');
    out.push_str("MODES\n");
    dump_modes(&mut out, v.modes());
    if let Some(m) = module {
        out.push_str("MODULE\n");
        dump_space(&mut out, m.space());
        out.push_str("MODES\n");
        dump_modes(&mut out, m.modes());
        out.push_str("TW\n");
        dump_translation(&mut out, m.translation());
    }
    if let Some(p) = psi {
        out.push_str("PSI\n");
        dump_modes(&mut out, p);
    }
    out
}

pub fn dump_loaded(l: &Loaded) -> String {
    dump(&l.algebra, l.module.as_ref(), l.psi.as_ref())
}

/// Parses, validates and re-emits a spec file in canonical form.
pub fn normalize(text: &str) -> Result<String> {
    Ok(dump_loaded(&parse_spec(text)?.build(None)?))
}
