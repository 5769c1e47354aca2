//! Componentwise verification of the vertex algebra and module axioms.
//!
//! Every axiom is checked instance by instance on basis vectors, over any
//! [`Coeff`] ring. An instance either yields a residual vector (zero means
//! the instance holds) or is skipped because it needs a state above the
//! cutoff of a truncated space. Skipped instances never count as passed.
//!
//! Duality is checked through the Borcherds component identity
//!
//! ```text
//! Σ_i C(p,i) (u_{r+i} v)_{p+q-i} w
//!   = Σ_i (-1)^i C(r,i) [ u_{p+r-i}(v_{q+i} w) - (-1)^r v_{q+r-i}(u_{p+i} w) ]
//! ```
//!
//! enumerated over all `(p, q, r)` whose result weight lies in the known
//! range and whose three intermediate weight bounds
//! `wt u + wt v - r - 1`, `wt v + wt w - q - 1`, `wt u + wt w - p - 1`
//! stay within the cutoff plus a margin (see [`jacobi_margin`]).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, TruncationBreach};
use crate::graded::{skew_apply, GradedMap, GradedSpace, ModeFamily, Tier, VAModule, VertexAlgebra};
use crate::scalar::{Coeff, Scalar, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    GradingRestriction,
    Identity,
    Creation,
    /// `(Tu)_n v = -n u_{n-1} v`
    TranslationDerivative,
    /// `T(u_n v) - u_n T(v) = -n u_{n-1} v`
    TranslationBracket,
    SkewSymmetry,
    Jacobi,
    ModuleIdentity,
    ModuleTranslationDerivative,
    ModuleTranslationBracket,
    ModuleJacobi,
    SquareZeroIdeal,
    ProjectionHomomorphism,
    InclusionHomomorphism,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::GradingRestriction => "grading-restriction",
            Axiom::Identity => "identity",
            Axiom::Creation => "creation",
            Axiom::TranslationDerivative => "translation-derivative",
            Axiom::TranslationBracket => "translation-bracket",
            Axiom::SkewSymmetry => "skew-symmetry",
            Axiom::Jacobi => "jacobi",
            Axiom::ModuleIdentity => "module-identity",
            Axiom::ModuleTranslationDerivative => "module-translation-derivative",
            Axiom::ModuleTranslationBracket => "module-translation-bracket",
            Axiom::ModuleJacobi => "module-jacobi",
            Axiom::SquareZeroIdeal => "square-zero-ideal",
            Axiom::ProjectionHomomorphism => "projection-homomorphism",
            Axiom::InclusionHomomorphism => "inclusion-homomorphism",
        }
    }
}

/// Which basis vectors and modes an instance was evaluated at. Indices refer
/// to the bases of the spaces involved (for module axioms `w` is a module
/// basis index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Basis { v: usize },
    Mode { u: usize, n: i64, v: usize },
    Borcherds { u: usize, v: usize, w: usize, p: i64, q: i64, r: i64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<R> {
    Checked {
        axiom: Axiom,
        instance: Instance,
        residual: SparseVec<R>,
    },
    Skipped {
        axiom: Axiom,
        instance: Instance,
        breach: TruncationBreach,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure<R> {
    pub axiom: Axiom,
    pub instance: Instance,
    pub residual: SparseVec<R>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Skip {
    pub axiom: Axiom,
    pub instance: Instance,
    pub breach: TruncationBreach,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PassWithinWindow,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::PassWithinWindow => "pass-within-window",
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport<R> {
    pub passed: Vec<(Axiom, Instance)>,
    pub failed: Vec<Failure<R>>,
    pub skipped: Vec<Skip>,
}

impl<R> Default for AxiomReport<R> {
    fn default() -> Self {
        AxiomReport {
            passed: Vec::new(),
            failed: Vec::new(),
            skipped: Vec::new(),
        }
    }
}

impl<R: Coeff> AxiomReport<R> {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = Outcome<R>>) -> Self {
        let mut report = Self::default();
        for o in outcomes {
            report.record(o);
        }
        report
    }

    pub fn record(&mut self, outcome: Outcome<R>) {
        match outcome {
            Outcome::Checked {
                axiom,
                instance,
                residual,
            } => {
                if residual.is_zero() {
                    self.passed.push((axiom, instance));
                } else {
                    self.failed.push(Failure {
                        axiom,
                        instance,
                        residual,
                    });
                }
            }
            Outcome::Skipped {
                axiom,
                instance,
                breach,
            } => self.skipped.push(Skip {
                axiom,
                instance,
                breach,
            }),
        }
    }

    pub fn merge(&mut self, other: AxiomReport<R>) {
        self.passed.extend(other.passed);
        self.failed.extend(other.failed);
        self.skipped.extend(other.skipped);
    }

    pub fn verdict(&self) -> Verdict {
        if !self.failed.is_empty() {
            Verdict::Fail
        } else if self.skipped.is_empty() {
            Verdict::Pass
        } else {
            Verdict::PassWithinWindow
        }
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut v: Vec<Axiom> = self.failed.iter().map(|f| f.axiom).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn outcome<R: Coeff>(
    axiom: Axiom,
    instance: Instance,
    residual: Result<SparseVec<R>, TruncationBreach>,
) -> Outcome<R> {
    match residual {
        Ok(residual) => Outcome::Checked {
            axiom,
            instance,
            residual,
        },
        Err(breach) => Outcome::Skipped {
            axiom,
            instance,
            breach,
        },
    }
}

/// Whether `w` lies in the known range `[min, cutoff]` of `space`.
fn in_window(space: &GradedSpace, w: i64) -> bool {
    w >= space.min_weight() && w <= space.cutoff()
}

/// `v ↦ v_{-2} 1`, computed wherever the image weight is known. On a
/// truncated space the images at the top weight stay unknown and applying
/// the map there reports a breach.
pub fn raw_translation<R: Coeff>(v: &VertexAlgebra<R>) -> GradedMap<R> {
    let space = v.space();
    let mut t = GradedMap::zero(space.clone(), space.clone(), 1);
    for i in 0..space.dim() {
        if let Ok(Some(img)) = v.modes().basis_mode(i, -2, v.vacuum()) {
            t.set_image(i, img.clone())
                .expect("weight rule makes v_{-2}1 homogeneous of weight wt v + 1");
        }
    }
    t
}

/// The translation operator `T(v) = v_{-2} 1`, the `x` coefficient of
/// `Y(v, x) 1`. Requires the creation property.
pub fn intrinsic_t<R: Coeff>(v: &VertexAlgebra<R>) -> Result<GradedMap<R>> {
    if !check_creation(v).failed.is_empty() {
        return Err(Error::CreationFailed);
    }
    Ok(raw_translation(v))
}

pub fn identity_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    vacuum_action_outcomes(v.modes(), v.vacuum(), Axiom::Identity)
}

fn vacuum_action_outcomes<R: Coeff>(
    modes: &ModeFamily<R>,
    vacuum: usize,
    axiom: Axiom,
) -> Vec<Outcome<R>> {
    let mut out = Vec::new();
    for b in 0..modes.right().dim() {
        for n in modes.mode_window(vacuum, b) {
            let res = modes.basis_mode(vacuum, n, b).map(|x| {
                let mut r = x.cloned().unwrap_or_default();
                if n == -1 {
                    r.add_term(b, &R::one().neg());
                }
                r
            });
            out.push(outcome(axiom, Instance::Mode { u: vacuum, n, v: b }, res));
        }
    }
    out
}

pub fn creation_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    let modes = v.modes();
    let vac = v.vacuum();
    let mut out = Vec::new();
    for a in 0..v.space().dim() {
        for n in modes.mode_window(a, vac).filter(|&n| n >= -1) {
            let res = modes.basis_mode(a, n, vac).map(|x| {
                let mut r = x.cloned().unwrap_or_default();
                if n == -1 {
                    r.add_term(a, &R::one().neg());
                }
                r
            });
            out.push(outcome(Axiom::Creation, Instance::Mode { u: a, n, v: vac }, res));
        }
    }
    out
}

/// Both translation identities for the action `left ⊗ right → right`, with
/// `t_left` the translation of the algebra and `t_right` that of the space
/// acted on.
fn translation_outcomes_for<R: Coeff>(
    modes: &ModeFamily<R>,
    t_left: &GradedMap<R>,
    t_right: &GradedMap<R>,
    derivative: Axiom,
    bracket: Axiom,
) -> Vec<Outcome<R>> {
    let left = modes.left();
    let right = modes.right();
    let target = modes.target();
    let mut out = Vec::new();
    for a in 0..left.dim() {
        for b in 0..right.dim() {
            let base = left.weight(a) + right.weight(b);
            let ua = SparseVec::unit(a);
            let vb = SparseVec::unit(b);
            // (Tu)_n v has weight base - n
            for n in (base - target.cutoff())..=(base - target.min_weight()) {
                let res = (|| {
                    let tu = t_left.apply(&ua)?;
                    let mut r = modes.apply(&tu, n, &vb)?;
                    if let Some(x) = modes.basis_mode(a, n - 1, b)? {
                        r.add_scaled_scalar(x, &Scalar::from_int(n));
                    }
                    Ok(r)
                })();
                out.push(outcome(derivative, Instance::Mode { u: a, n, v: b }, res));
            }
            // T(u_n v) - u_n T v has weight base - n
            for n in (base - target.cutoff())..=(base - target.min_weight()) {
                let res = (|| {
                    let inner = modes.apply(&ua, n, &vb)?;
                    let mut r = t_right.apply(&inner)?;
                    let tv = t_right.apply(&vb)?;
                    r.sub_assign(&modes.apply(&ua, n, &tv)?);
                    if let Some(x) = modes.basis_mode(a, n - 1, b)? {
                        r.add_scaled_scalar(x, &Scalar::from_int(n));
                    }
                    Ok(r)
                })();
                out.push(outcome(bracket, Instance::Mode { u: a, n, v: b }, res));
            }
        }
    }
    out
}

pub fn translation_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    let t = raw_translation(v);
    translation_outcomes_for(
        v.modes(),
        &t,
        &t,
        Axiom::TranslationDerivative,
        Axiom::TranslationBracket,
    )
}

pub fn skew_symmetry_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    let t = raw_translation(v);
    let modes = v.modes();
    let dim = v.space().dim();
    let mut out = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let ua = SparseVec::unit(a);
            let vb = SparseVec::unit(b);
            for n in modes.mode_window(a, b) {
                let res = (|| {
                    let mut r = modes.basis_mode(a, n, b)?.cloned().unwrap_or_default();
                    r.sub_assign(&skew_apply(modes, &t, &ua, n, &vb)?);
                    Ok(r)
                })();
                out.push(outcome(Axiom::SkewSymmetry, Instance::Mode { u: a, n, v: b }, res));
            }
        }
    }
    out
}

/// How far beyond the cutoff the Jacobi enumeration lets intermediate weight
/// bounds reach. Truncated spaces get a one-weight frontier whose instances
/// are reported skipped when they need unknown states; exact spaces use the
/// full width of the weight range.
pub fn jacobi_margin(space: &GradedSpace) -> i64 {
    match space.tier() {
        Tier::Truncated => 1,
        Tier::Exact => space.cutoff() - space.min_weight() + 1,
    }
}

/// Residual of the Borcherds identity at `(u, v, w, p, q, r)`, where `inner`
/// is the algebra's own vertex operator and `act` its action on the space
/// containing `w`.
pub fn borcherds_residual<R: Coeff>(
    inner: &ModeFamily<R>,
    act: &ModeFamily<R>,
    u: usize,
    v: usize,
    w: usize,
    (p, q, r): (i64, i64, i64),
) -> Result<SparseVec<R>, TruncationBreach> {
    let vspace = inner.left();
    let xspace = act.right();
    let (wu, wv, ww) = (vspace.weight(u), vspace.weight(v), xspace.weight(w));
    let uu = SparseVec::<R>::unit(u);
    let vv = SparseVec::<R>::unit(v);
    let wvec = SparseVec::<R>::unit(w);
    let upper = |top: i64, bound: i64| -> i64 {
        if top >= 0 {
            bound.min(top)
        } else {
            bound
        }
    };
    let mut res = SparseVec::new();

    let imax = upper(p, wu + wv - r - 1 - vspace.min_weight());
    for i in 0..=imax {
        let c = Scalar::binomial(p, i as u32);
        if c.is_zero() {
            continue;
        }
        let Some(uv) = inner.basis_mode(u, r + i, v)? else {
            continue;
        };
        let term = act.apply(uv, p + q - i, &wvec)?;
        res.add_scaled_scalar(&term, &c);
    }

    let sign_r = Scalar::sign(r);
    let imax = upper(r, wv + ww - q - 1 - xspace.min_weight());
    for i in 0..=imax {
        let c = Scalar::sign(i) * Scalar::binomial(r, i as u32);
        if c.is_zero() {
            continue;
        }
        let Some(vw) = act.basis_mode(v, q + i, w)? else {
            continue;
        };
        let term = act.apply(&uu, p + r - i, vw)?;
        res.add_scaled_scalar(&term, &-c);
    }

    let imax = upper(r, wu + ww - p - 1 - xspace.min_weight());
    for i in 0..=imax {
        let c = Scalar::sign(i) * Scalar::binomial(r, i as u32);
        if c.is_zero() {
            continue;
        }
        let Some(uw) = act.basis_mode(u, p + i, w)? else {
            continue;
        };
        let term = act.apply(&vv, q + r - i, uw)?;
        res.add_scaled_scalar(&term, &(c * &sign_r));
    }
    Ok(res)
}

/// The `(p, q, r)` enumeration window for one basis triple.
pub fn jacobi_window(
    vspace: &GradedSpace,
    xspace: &GradedSpace,
    (wu, wv, ww): (i64, i64, i64),
) -> Vec<(i64, i64, i64)> {
    let bound_v = vspace.cutoff() + jacobi_margin(vspace);
    let bound_x = xspace.cutoff() + jacobi_margin(xspace);
    let r_lo = wu + wv - 1 - bound_v;
    let q_lo = wv + ww - 1 - bound_x;
    let p_lo = wu + ww - 1 - bound_x;
    let mut out = Vec::new();
    for result in xspace.min_weight()..=xspace.cutoff() {
        let sum = wu + wv + ww - 2 - result;
        let slack = sum - p_lo - q_lo - r_lo;
        if slack < 0 {
            continue;
        }
        for dp in 0..=slack {
            for dq in 0..=(slack - dp) {
                let p = p_lo + dp;
                let q = q_lo + dq;
                out.push((p, q, sum - p - q));
            }
        }
    }
    out
}

fn jacobi_outcomes_for<R: Coeff>(
    inner: &ModeFamily<R>,
    act: &ModeFamily<R>,
    axiom: Axiom,
) -> Vec<Outcome<R>> {
    let vspace = inner.left().clone();
    let xspace = act.right().clone();
    let (dv, dx) = (vspace.dim(), xspace.dim());
    let triples: Vec<(usize, usize, usize)> = (0..dv)
        .flat_map(|u| (0..dv).flat_map(move |v| (0..dx).map(move |w| (u, v, w))))
        .collect();
    triples
        .par_iter()
        .map(|&(u, v, w)| {
            let weights = (vspace.weight(u), vspace.weight(v), xspace.weight(w));
            jacobi_window(&vspace, &xspace, weights)
                .into_iter()
                .map(|(p, q, r)| {
                    outcome(
                        axiom,
                        Instance::Borcherds { u, v, w, p, q, r },
                        borcherds_residual(inner, act, u, v, w, (p, q, r)),
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn jacobi_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    jacobi_outcomes_for(v.modes(), v.modes(), Axiom::Jacobi)
}

pub fn grading_outcomes<R: Coeff>(space: &GradedSpace) -> Vec<Outcome<R>> {
    (0..space.dim())
        .map(|i| {
            let residual = if in_window(space, space.weight(i)) {
                SparseVec::new()
            } else {
                SparseVec::unit(i)
            };
            Outcome::Checked {
                axiom: Axiom::GradingRestriction,
                instance: Instance::Basis { v: i },
                residual,
            }
        })
        .collect()
}

pub fn check_identity<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(identity_outcomes(v))
}

pub fn check_creation<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(creation_outcomes(v))
}

pub fn check_translation<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(translation_outcomes(v))
}

pub fn check_skew_symmetry<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(skew_symmetry_outcomes(v))
}

pub fn check_jacobi<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(jacobi_outcomes(v))
}

/// Every instance of every algebra axiom, in a fixed order.
pub fn all_outcomes<R: Coeff>(v: &VertexAlgebra<R>) -> Vec<Outcome<R>> {
    let mut out = grading_outcomes(v.space());
    out.extend(identity_outcomes(v));
    out.extend(creation_outcomes(v));
    out.extend(translation_outcomes(v));
    out.extend(skew_symmetry_outcomes(v));
    out.extend(jacobi_outcomes(v));
    out
}

pub fn check_all<R: Coeff>(v: &VertexAlgebra<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(all_outcomes(v))
}

pub fn module_outcomes<R: Coeff>(v: &VertexAlgebra<R>, w: &VAModule<R>) -> Vec<Outcome<R>> {
    let tv = raw_translation(v);
    let mut out = grading_outcomes(w.space());
    out.extend(vacuum_action_outcomes(
        w.modes(),
        v.vacuum(),
        Axiom::ModuleIdentity,
    ));
    out.extend(translation_outcomes_for(
        w.modes(),
        &tv,
        w.translation(),
        Axiom::ModuleTranslationDerivative,
        Axiom::ModuleTranslationBracket,
    ));
    out.extend(jacobi_outcomes_for(v.modes(), w.modes(), Axiom::ModuleJacobi));
    out
}

pub fn check_module<R: Coeff>(v: &VertexAlgebra<R>, w: &VAModule<R>) -> AxiomReport<R> {
    AxiomReport::from_outcomes(module_outcomes(v, w))
}
