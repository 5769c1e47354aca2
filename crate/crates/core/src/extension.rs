//! Square-zero extensions `V ⊕ W` twisted by a 2-cochain, first-order
//! deformations `Y + tΨ` over the dual numbers, and equivalence decisions
//! for both.
//!
//! The extension has modes
//!
//! ```text
//! (v1, w1)_n (v2, w2) = (v1_n v2, v1_n w2 + skew(w1, n, v2) + ψ(v1)_n v2)
//! ```
//!
//! and vacuum `(1, 0)`. Two extensions `E(ψ1)`, `E(ψ2)` are equivalent
//! exactly when `ψ1 - ψ2 = δg` for a vacuum-killing degree-zero `g`, through
//! the shear `h(v, w) = (v, w + g(v))`.

use std::sync::Arc;

use serde::Serialize;

use crate::axioms::{check_all, Axiom, AxiomReport, Instance, Outcome};
use crate::cohomology::{is_coboundary, TwoCochain};
use crate::error::{Error, Result, TruncationBreach};
use crate::graded::{GradedMap, GradedSpace, ModeFamily, ModeKey, Tier, VAModule, VertexAlgebra};
use crate::presets::adjoint_module;
use crate::scalar::{Coeff, DualScalar, Scalar, SparseVec};

type Vector = SparseVec<Scalar>;

#[derive(Clone, Debug, PartialEq)]
pub struct SquareZeroExtension {
    pub total: VertexAlgebra<Scalar>,
    /// `V ⊕ W → V`
    pub proj: GradedMap<Scalar>,
    /// `W → V ⊕ W`
    pub incl: GradedMap<Scalar>,
    pub psi: TwoCochain,
    base: VertexAlgebra<Scalar>,
    module: VAModule<Scalar>,
    lift: Vec<usize>,
    embed: Vec<usize>,
}

impl SquareZeroExtension {
    pub fn base(&self) -> &VertexAlgebra<Scalar> {
        &self.base
    }

    pub fn module(&self) -> &VAModule<Scalar> {
        &self.module
    }

    /// Index of `(v, 0)` in the total space.
    pub fn lift(&self, v: usize) -> usize {
        self.lift[v]
    }

    /// Index of `(0, w)` in the total space.
    pub fn embed(&self, w: usize) -> usize {
        self.embed[w]
    }

    /// The `W` component of a vector of the total space.
    pub fn w_part(&self, x: &Vector) -> Vector {
        let mut back = vec![usize::MAX; self.total.space().dim()];
        for (i, &t) in self.embed.iter().enumerate() {
            back[t] = i;
        }
        x.iter()
            .filter(|(i, _)| back[**i] != usize::MAX)
            .map(|(i, c)| (back[*i], c.clone()))
            .collect()
    }

    /// The index of a total basis vector in `W`, if it lies there.
    pub fn w_index(&self, total: usize) -> Option<usize> {
        self.embed.iter().position(|&t| t == total)
    }
}

fn outcome(
    axiom: Axiom,
    instance: Instance,
    residual: Result<Vector, TruncationBreach>,
) -> Outcome<Scalar> {
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

fn mode_or_zero(
    modes: &ModeFamily<Scalar>,
    a: usize,
    n: i64,
    b: usize,
) -> Result<Vector, TruncationBreach> {
    Ok(modes.basis_mode(a, n, b)?.cloned().unwrap_or_default())
}

fn unique_label(taken: &std::collections::BTreeSet<String>, label: &str) -> String {
    let mut l = label.to_string();
    while taken.contains(&l) {
        l.push('\'');
    }
    l
}

/// The direct sum `V ⊕ W` with `W` labels primed where they collide.
fn sum_space(v: &GradedSpace, w: &GradedSpace) -> Result<GradedSpace> {
    let mut taken: std::collections::BTreeSet<String> = v.labels().iter().cloned().collect();
    let mut basis: Vec<(i64, String)> = (0..v.dim())
        .map(|i| (v.weight(i), v.label(i).to_string()))
        .collect();
    for i in 0..w.dim() {
        let l = unique_label(&taken, w.label(i));
        taken.insert(l.clone());
        basis.push((w.weight(i), l));
    }
    let tier = if v.tier() == Tier::Truncated || w.tier() == Tier::Truncated {
        Tier::Truncated
    } else {
        Tier::Exact
    };
    let min = if w.dim() == 0 {
        v.min_weight()
    } else {
        v.min_weight().min(w.min_weight())
    };
    GradedSpace::new(basis, Some(min), Some(v.cutoff().max(w.cutoff())), tier)
}

fn check_cochain_spaces(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, psi: &TwoCochain) -> Result<()> {
    if **w.algebra_space() != **v.space() {
        return Err(Error::SpaceMismatch("module is over a different algebra".into()));
    }
    if **psi.left() != **v.space() || **psi.right() != **v.space() || **psi.target() != **w.space() {
        return Err(Error::SpaceMismatch("cochain must map V ⊗ V into W".into()));
    }
    Ok(())
}

/// Builds `V ⊕ W` with the twisted modes. Construction is unconditional;
/// whether the result is a vertex algebra is decided by [`verify_extension`].
pub fn build_extension(
    v: &VertexAlgebra<Scalar>,
    w: &VAModule<Scalar>,
    psi: &TwoCochain,
) -> Result<SquareZeroExtension> {
    check_cochain_spaces(v, w, psi)?;
    let vs = v.space();
    let ws = w.space();
    let all = sum_space(vs, ws)?;
    let lift: Vec<usize> = (0..vs.dim())
        .map(|i| all.index_of(vs.label(i)).expect("registered"))
        .collect();
    // replays the renaming done by sum_space
    let mut names: std::collections::BTreeSet<String> = vs.labels().iter().cloned().collect();
    let mut embed = Vec::with_capacity(ws.dim());
    for i in 0..ws.dim() {
        let l = unique_label(&names, ws.label(i));
        embed.push(all.index_of(&l).expect("registered"));
        names.insert(l);
    }
    let total_space = Arc::new(all);
    let mut modes = ModeFamily::zero(total_space.clone(), total_space.clone(), total_space.clone());

    let put = |modes: &mut ModeFamily<Scalar>, a: usize, n: i64, b: usize, val: Vector| {
        let mut cur = modes.entries().get(&(a, n, b)).cloned().unwrap_or_default();
        cur.add_assign(&val);
        modes.insert(a, n, b, cur)
    };
    for (&(a, n, b), val) in v.modes().entries() {
        put(&mut modes, lift[a], n, lift[b], val.reindex(|i| lift[i]))?;
    }
    for (&(a, n, b), val) in psi.entries() {
        put(&mut modes, lift[a], n, lift[b], val.reindex(|i| embed[i]))?;
    }
    for (&(a, n, c), val) in w.modes().entries() {
        put(&mut modes, lift[a], n, embed[c], val.reindex(|i| embed[i]))?;
    }
    for c in 0..ws.dim() {
        for (b, &lb) in lift.iter().enumerate() {
            let s = ws.weight(c) + vs.weight(b) - 1;
            for n in (s - ws.cutoff())..=(s - ws.min_weight()) {
                let val = w.skew_mode(&Vector::unit(c), n, &Vector::unit(b))?;
                put(&mut modes, embed[c], n, lb, val.reindex(|i| embed[i]))?;
            }
        }
    }
    let total = VertexAlgebra::new(total_space.clone(), lift[v.vacuum()], modes)?;

    let mut proj = GradedMap::zero(total_space.clone(), vs.clone(), 0);
    for (i, &t) in lift.iter().enumerate() {
        proj.set_image(t, Vector::unit(i))?;
    }
    let mut incl = GradedMap::zero(ws.clone(), total_space, 0);
    for (i, &t) in embed.iter().enumerate() {
        incl.set_image(i, Vector::unit(t))?;
    }
    Ok(SquareZeroExtension {
        total,
        proj,
        incl,
        psi: psi.clone(),
        base: v.clone(),
        module: w.clone(),
        lift,
        embed,
    })
}

/// `check_all` on the total algebra, plus the square-zero ideal property,
/// the projection being a homomorphism onto `V` and the inclusion being a
/// `V`-module map.
pub fn verify_extension(e: &SquareZeroExtension) -> AxiomReport<Scalar> {
    let mut report = check_all(&e.total);
    let tm = e.total.modes();
    let ws = e.module.space();
    let vs = e.base.space();
    let dim = e.total.space().dim();

    for c1 in 0..ws.dim() {
        for c2 in 0..ws.dim() {
            let (x, y) = (e.embed[c1], e.embed[c2]);
            for n in tm.mode_window(x, y) {
                report.record(outcome(
                    Axiom::SquareZeroIdeal,
                    Instance::Mode { u: x, n, v: y },
                    mode_or_zero(tm, x, n, y),
                ));
            }
        }
    }

    report.record(Outcome::Checked {
        axiom: Axiom::ProjectionHomomorphism,
        instance: Instance::Basis {
            v: e.total.vacuum(),
        },
        residual: e
            .proj
            .image(e.total.vacuum())
            .difference(&e.base.vacuum_vector()),
    });
    for x in 0..dim {
        for y in 0..dim {
            for n in tm.mode_window(x, y) {
                let res = (|| {
                    let xy = mode_or_zero(tm, x, n, y)?;
                    let mut r = e.proj.apply(&xy)?;
                    let px = e.proj.image(x);
                    let py = e.proj.image(y);
                    r.sub_assign(&e.base.modes().apply(px, n, py)?);
                    Ok(r)
                })();
                report.record(outcome(
                    Axiom::ProjectionHomomorphism,
                    Instance::Mode { u: x, n, v: y },
                    res,
                ));
            }
        }
    }

    let wm = e.module.modes();
    for a in 0..vs.dim() {
        for c in 0..ws.dim() {
            for n in wm.mode_window(a, c) {
                let res = (|| {
                    let mut r = e.incl.apply(&mode_or_zero(wm, a, n, c)?)?;
                    r.sub_assign(&mode_or_zero(tm, e.lift[a], n, e.embed[c])?);
                    Ok(r)
                })();
                report.record(outcome(
                    Axiom::InclusionHomomorphism,
                    Instance::Mode {
                        u: e.lift[a],
                        n,
                        v: e.embed[c],
                    },
                    res,
                ));
            }
        }
    }
    report
}

/// The `W` component of `(v1, 0)_n (v2, 0)`, without verification.
pub fn read_cochain(e: &SquareZeroExtension) -> Result<TwoCochain> {
    let vs = e.base.space();
    let mut psi = ModeFamily::zero(vs.clone(), vs.clone(), e.module.space().clone());
    for a in 0..vs.dim() {
        for b in 0..vs.dim() {
            for n in psi.mode_window(a, b) {
                let x = mode_or_zero(e.total.modes(), e.lift[a], n, e.lift[b])?;
                psi.insert(a, n, b, e.w_part(&x))?;
            }
        }
    }
    Ok(psi)
}

/// Reads `ψ` back off a verified extension.
pub fn extension_to_cocycle(e: &SquareZeroExtension) -> Result<TwoCochain> {
    if verify_extension(e).verdict().is_fail() {
        return Err(Error::NotVerified);
    }
    read_cochain(e)
}

/// `Y_t = Y + tΨ` over the dual numbers, with `Ψ` valued in `V` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformation {
    pub base: VertexAlgebra<Scalar>,
    pub psi: TwoCochain,
    pub deformed: VertexAlgebra<DualScalar>,
}

fn constant(c: &Scalar) -> DualScalar {
    DualScalar::new(c.clone(), Scalar::zero())
}

pub fn build_deformation(v: &VertexAlgebra<Scalar>, psi: &TwoCochain) -> Result<Deformation> {
    if **psi.left() != **v.space() || **psi.right() != **v.space() || **psi.target() != **v.space() {
        return Err(Error::SpaceMismatch("deformation cochain must map V ⊗ V into V".into()));
    }
    // re-home the cochain on the algebra's own space handle
    let mut slope = ModeFamily::zero(v.space().clone(), v.space().clone(), v.space().clone());
    for (&(a, n, b), val) in psi.entries() {
        slope.insert(a, n, b, val.clone())?;
    }
    let modes = v
        .modes()
        .map_coeffs(constant)
        .add_scaled(&slope.map_coeffs(constant), &DualScalar::t())?;
    let deformed = VertexAlgebra::new(v.space().clone(), v.vacuum(), modes)?;
    Ok(Deformation {
        base: v.clone(),
        psi: slope,
        deformed,
    })
}

/// The `t⁰` part of a dual-number algebra.
pub fn value_part(d: &VertexAlgebra<DualScalar>) -> VertexAlgebra<Scalar> {
    d.map_coeffs(|c| c.value.clone())
}

/// The `t¹` part of a dual-number algebra's modes.
pub fn slope_part(d: &VertexAlgebra<DualScalar>) -> ModeFamily<Scalar> {
    d.modes().map_coeffs(|c| c.slope.clone())
}

pub fn deformation_to_extension(d: &Deformation) -> Result<SquareZeroExtension> {
    let w = adjoint_module(&d.base)?;
    build_extension(&d.base, &w, &d.psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceKind {
    /// `h(v, w) = (v, w + g(v))`
    Extension,
    /// `f_t = 1 + tg`
    Deformation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub g: GradedMap<Scalar>,
    pub kind: EquivalenceKind,
}

/// The shear `h(v, w) = (v, w + g(v))` from `e1` to `e2`.
pub fn shear(e1: &SquareZeroExtension, e2: &SquareZeroExtension, g: &GradedMap<Scalar>) -> Result<GradedMap<Scalar>> {
    let mut h = GradedMap::zero(e1.total.space().clone(), e2.total.space().clone(), 0);
    for i in 0..e1.base.space().dim() {
        let mut img = Vector::unit(e2.lift[i]);
        img.add_assign(&g.image(i).reindex(|c| e2.embed[c]));
        h.set_image(e1.lift[i], img)?;
    }
    for c in 0..e1.module.space().dim() {
        h.set_image(e1.embed[c], Vector::unit(e2.embed[c]))?;
    }
    Ok(h)
}

fn verify_shear(e1: &SquareZeroExtension, e2: &SquareZeroExtension, h: &GradedMap<Scalar>) -> Result<()> {
    let fail = |what: String| Err(Error::EquivalenceCheckFailed(what));
    let m1 = e1.total.modes();
    let m2 = e2.total.modes();
    let dim = e1.total.space().dim();
    for x in 0..dim {
        for y in 0..dim {
            for n in m1.mode_window(x, y) {
                let lhs = h.apply(&mode_or_zero(m1, x, n, y)?)?;
                let rhs = m2.apply(h.image(x), n, h.image(y))?;
                if lhs != rhs {
                    let s = e1.total.space();
                    return fail(format!("h({} {} {}) differs", s.label(x), n, s.label(y)));
                }
            }
        }
    }
    if *h.image(e1.total.vacuum()) != e2.total.vacuum_vector() {
        return fail("vacuum not preserved".into());
    }
    for x in 0..dim {
        if e2.proj.apply(h.image(x))? != *e1.proj.image(x) {
            return fail("projection square does not commute".into());
        }
    }
    for c in 0..e1.module.space().dim() {
        if h.apply(e1.incl.image(c))? != *e2.incl.image(c) {
            return fail("inclusion square does not commute".into());
        }
    }
    Ok(())
}

/// Decides whether two extensions of `V` by the same `W` are equivalent.
/// When they are, the shear is built and checked against every product and
/// both squares of the defining diagram before being returned.
pub fn check_equivalence_extensions(
    e1: &SquareZeroExtension,
    e2: &SquareZeroExtension,
) -> Result<Option<Equivalence>> {
    if e1.base != e2.base || e1.module != e2.module {
        return Err(Error::SpaceMismatch(
            "extensions of different algebras or modules".into(),
        ));
    }
    let d = e1.psi.difference(&e2.psi)?;
    let Some(g) = is_coboundary(&e1.base, &e1.module, &d)? else {
        return Ok(None);
    };
    let h = shear(e1, e2, &g)?;
    verify_shear(e1, e2, &h)?;
    Ok(Some(Equivalence {
        g,
        kind: EquivalenceKind::Extension,
    }))
}

/// `f_t = 1 + tg` as a map over the dual numbers.
pub fn dual_shear(g: &GradedMap<Scalar>) -> GradedMap<DualScalar> {
    let space = g.source().clone();
    let mut f = GradedMap::zero(space.clone(), g.target().clone(), 0);
    for i in 0..space.dim() {
        let mut img: SparseVec<DualScalar> = g.image(i).map_coeffs(|c| DualScalar::new(Scalar::zero(), c.clone()));
        img.add_term(i, &DualScalar::one());
        f.set_image(i, img).expect("degree zero");
    }
    f
}

/// Residuals of `f_t(Y1_t(u, x)v) - Y2_t(f_t u, x) f_t v`, one per mode.
pub fn deformation_intertwining_residuals(
    d1: &Deformation,
    d2: &Deformation,
    f: &GradedMap<DualScalar>,
) -> Result<Vec<(ModeKey, SparseVec<DualScalar>)>> {
    let m1 = d1.deformed.modes();
    let m2 = d2.deformed.modes();
    let dim = d1.base.space().dim();
    let mut out = Vec::new();
    for u in 0..dim {
        for v in 0..dim {
            for n in m1.mode_window(u, v) {
                let inner = m1.basis_mode(u, n, v)?.cloned().unwrap_or_default();
                let mut r = f.apply(&inner)?;
                r.sub_assign(&m2.apply(f.image(u), n, f.image(v))?);
                out.push(((u, n, v), r));
            }
        }
    }
    Ok(out)
}

/// Decides whether two deformations of the same algebra are equivalent. The
/// returned `g` is checked by evaluating the intertwining identity for
/// `f_t = 1 + tg` exactly in the dual-number ring.
pub fn check_equivalence_deformations(
    d1: &Deformation,
    d2: &Deformation,
) -> Result<Option<Equivalence>> {
    if d1.base != d2.base {
        return Err(Error::SpaceMismatch("deformations of different algebras".into()));
    }
    let w = adjoint_module(&d1.base)?;
    let d = d1.psi.difference(&d2.psi)?;
    let Some(g) = is_coboundary(&d1.base, &w, &d)? else {
        return Ok(None);
    };
    let f = dual_shear(&g);
    for ((u, n, v), r) in deformation_intertwining_residuals(d1, d2, &f)? {
        if !r.is_zero() {
            let s = d1.base.space();
            return Err(Error::EquivalenceCheckFailed(format!(
                "f_t does not intertwine at {} {} {}",
                s.label(u),
                n,
                s.label(v)
            )));
        }
    }
    Ok(Some(Equivalence {
        g,
        kind: EquivalenceKind::Deformation,
    }))
}
