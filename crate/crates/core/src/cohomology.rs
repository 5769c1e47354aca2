//! First and second cohomology as exact linear algebra.
//!
//! `H¹(V, W)` is computed as the space of derivations `f: V → W`, degree
//! zero maps with `f(u_n v) = skew(f(u), n, v) + u_n f(v)`.
//!
//! A 2-cochain is a weight-rule-compatible family of modes `V ⊗ V → W`. It
//! is a cocycle when the square-zero extension it twists passes every axiom
//! check. The `W` component of every check residual is linear in the
//! cochain, so `Z²` is the kernel of the matrix whose columns are the
//! residuals of the finitely many basis cochains. `B²` is spanned by the
//! coboundaries of vacuum-killing degree-zero maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{all_outcomes, Axiom, Instance, Outcome, Skip};
use crate::error::{Error, Result, TruncationBreach};
use crate::extension::build_extension;
use crate::graded::{GradedMap, GradedSpace, ModeFamily, Tier, VAModule, VertexAlgebra};
use crate::linalg::{kernel_basis, quotient_dim, solve_affine, Echelon, LinearSystem, Row};
use crate::scalar::{Scalar, SparseVec};

type Vector = SparseVec<Scalar>;

/// Modes `V ⊗ V → W((x))`.
pub type TwoCochain = ModeFamily<Scalar>;

/// The known weight range of a truncated-tier computation. Results carrying
/// one are cohomology of the truncation, not of the infinite algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub min_weight: i64,
    pub cutoff: i64,
}

impl Window {
    pub fn describe(&self) -> String {
        format!("level-{} cohomology", self.cutoff)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyResult<T> {
    pub h_dim: usize,
    pub cocycle_basis: Vec<T>,
    pub coboundary_basis: Vec<T>,
    pub representatives: Vec<T>,
    /// Set on the truncated tier.
    pub window: Option<Window>,
    /// Checks that could not be evaluated within the window.
    pub skipped: usize,
}

fn window_of(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> Option<Window> {
    let truncated = v.tier() == Tier::Truncated || w.space().tier() == Tier::Truncated;
    truncated.then(|| Window {
        min_weight: v.space().min_weight().min(w.space().min_weight()),
        cutoff: v.space().cutoff().min(w.space().cutoff()),
    })
}

/// Unknowns `(v, c)` of a degree-zero map `V → W`: the coefficient of `c` in
/// `f(v)`.
fn degree_zero_unknowns(vs: &GradedSpace, ws: &GradedSpace, skip_vacuum: Option<usize>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 0..vs.dim() {
        if Some(v) == skip_vacuum {
            continue;
        }
        for c in ws.basis_of_weight(vs.weight(v)) {
            out.push((v, c));
        }
    }
    out
}

fn elementary_map(vs: &Arc<GradedSpace>, ws: &Arc<GradedSpace>, v: usize, c: usize) -> GradedMap<Scalar> {
    let mut g = GradedMap::zero(vs.clone(), ws.clone(), 0);
    g.set_image(v, Vector::unit(c)).expect("same weight");
    g
}

fn map_from_coordinates(
    vs: &Arc<GradedSpace>,
    ws: &Arc<GradedSpace>,
    unknowns: &[(usize, usize)],
    x: &Row,
) -> GradedMap<Scalar> {
    let mut images = vec![Vector::new(); vs.dim()];
    for (j, c) in x {
        let (v, t) = unknowns[*j];
        images[v].add_term(t, c);
    }
    let mut g = GradedMap::zero(vs.clone(), ws.clone(), 0);
    for (v, img) in images.into_iter().enumerate() {
        g.set_image(v, img).expect("same weight");
    }
    g
}

fn derivation_rows(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> (LinearSystem, Vec<(usize, usize)>, usize) {
    let vs = v.space();
    let ws = w.space();
    let unknowns = degree_zero_unknowns(vs, ws, None);
    let col: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let names = unknowns
        .iter()
        .map(|(a, c)| format!("f({})[{}]", vs.label(*a), ws.label(*c)))
        .collect();
    let mut system = LinearSystem::new(names);
    let mut skipped = 0;
    for u in 0..vs.dim() {
        for b in 0..vs.dim() {
            let s = vs.weight(u) + vs.weight(b) - 1;
            for n in (s - ws.cutoff())..=(s - ws.min_weight()) {
                // row per target coordinate: f(u_n b) - skew(f(u), n, b) - u_n f(b)
                let rows = (|| -> Result<BTreeMap<usize, Row>, TruncationBreach> {
                    let mut rows: BTreeMap<usize, Row> = BTreeMap::new();
                    let mut add = |target: &Vector, unknown: usize, sign: &Scalar| {
                        for (t, c) in target {
                            rows.entry(*t).or_default().add_term(unknown, &(c * sign));
                        }
                    };
                    let one = Scalar::one();
                    let minus = -Scalar::one();
                    if let Some(ub) = v.modes().basis_mode(u, n, b)? {
                        for (x, cx) in ub {
                            for c in ws.basis_of_weight(vs.weight(*x)) {
                                add(&Vector::unit(c), col[&(*x, c)], &(cx * &one));
                            }
                        }
                    }
                    for c in ws.basis_of_weight(vs.weight(u)) {
                        let sk = w.skew_mode(&Vector::unit(c), n, &Vector::unit(b))?;
                        add(&sk, col[&(u, c)], &minus);
                    }
                    for c in ws.basis_of_weight(vs.weight(b)) {
                        let act = w.modes().apply(&Vector::unit(u), n, &Vector::unit(c))?;
                        add(&act, col[&(b, c)], &minus);
                    }
                    Ok(rows)
                })();
                match rows {
                    Ok(rows) => {
                        for (t, row) in rows {
                            if row.is_zero() {
                                continue;
                            }
                            let label = format!("({}, {}, {}) at {}", vs.label(u), n, vs.label(b), ws.label(t));
                            system.push_row(row, label).expect("registered unknowns");
                        }
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
    }
    (system, unknowns, skipped)
}

/// The linear system whose solutions are the derivations `V → W`. Unknowns
/// are the entries of a degree-zero map; rows are indexed by `(u, n, v)` and
/// a target coordinate.
pub fn derivation_system(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> LinearSystem {
    derivation_rows(v, w).0
}

/// `Der(V, W)`, reported as `H¹`.
pub fn compute_der(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> CohomologyResult<GradedMap<Scalar>> {
    let (system, unknowns, skipped) = derivation_rows(v, w);
    let basis: Vec<GradedMap<Scalar>> = kernel_basis(&system)
        .iter()
        .map(|x| map_from_coordinates(v.space(), w.space(), &unknowns, x))
        .collect();
    CohomologyResult {
        h_dim: basis.len(),
        cocycle_basis: basis.clone(),
        coboundary_basis: Vec::new(),
        representatives: basis,
        window: window_of(v, w),
        skipped,
    }
}

/// `δg(u, x)v = -g(Y(u, x)v) + skew(g(u), x)v + Y_W(u, x)g(v)`.
pub fn coboundary(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, g: &GradedMap<Scalar>) -> Result<TwoCochain> {
    if **g.source() != **v.space() || **g.target() != **w.space() || g.degree() != 0 {
        return Err(Error::SpaceMismatch("g must be a degree-zero map V -> W".into()));
    }
    if !g.image(v.vacuum()).is_zero() {
        return Err(Error::VacuumNotKilled);
    }
    let vs = v.space();
    let mut out = ModeFamily::zero(vs.clone(), vs.clone(), w.space().clone());
    for u in 0..vs.dim() {
        for b in 0..vs.dim() {
            let (uu, bb) = (Vector::unit(u), Vector::unit(b));
            for n in out.mode_window(u, b) {
                let mut r = w.skew_mode(g.image(u), n, &bb)?;
                r.add_assign(&w.modes().apply(&uu, n, g.image(b))?);
                if let Some(ub) = v.modes().basis_mode(u, n, b)? {
                    r.sub_assign(&g.apply(ub)?);
                }
                out.insert(u, n, b, r)?;
            }
        }
    }
    Ok(out)
}

/// Identifies one coordinate of a cocycle residual: the axiom instance on the
/// extension and a basis vector of `W`.
pub type ResidualKey = (Axiom, Instance, usize);

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CocycleResidual {
    pub entries: BTreeMap<ResidualKey, Scalar>,
    pub skipped: Vec<Skip>,
}

impl CocycleResidual {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn combine(&self, other: &Self, sign: &Scalar) -> Self {
        let mut entries = self.entries.clone();
        for (k, c) in &other.entries {
            let e = entries.entry(*k).or_insert_with(Scalar::zero);
            *e += &(c * sign);
            if e.is_zero() {
                entries.remove(k);
            }
        }
        CocycleResidual {
            entries,
            skipped: self.skipped.clone(),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        self.combine(other, &Scalar::one())
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, &-Scalar::one())
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        CocycleResidual::default().combine(self, c)
    }
}

/// The `W` components of every axiom residual of the extension twisted by
/// `psi`. Zero exactly when the extension passes every evaluable check.
pub fn cocycle_residual(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, psi: &TwoCochain) -> Result<CocycleResidual> {
    let e = build_extension(v, w, psi)?;
    let mut back = vec![None; e.total.space().dim()];
    for c in 0..w.space().dim() {
        back[e.embed(c)] = Some(c);
    }
    let mut out = CocycleResidual::default();
    for o in all_outcomes(&e.total) {
        match o {
            Outcome::Checked {
                axiom,
                instance,
                residual,
            } => {
                for (i, c) in &residual {
                    if let Some(k) = back[*i] {
                        out.entries.insert((axiom, instance, k), c.clone());
                    }
                }
            }
            Outcome::Skipped {
                axiom,
                instance,
                breach,
            } => out.skipped.push(Skip {
                axiom,
                instance,
                breach,
            }),
        }
    }
    Ok(out)
}

/// The basis of 2-cochains: one entry `a_n b = c` per basis triple and mode
/// landing in the known weights of `W`, ordered by `(wt a, a, n, b, c)`.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    left: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    keys: Vec<(usize, i64, usize, usize)>,
    index: HashMap<(usize, i64, usize, usize), usize>,
}

impl CochainBasis {
    pub fn new(v: &Arc<GradedSpace>, w: &Arc<GradedSpace>) -> Self {
        let mut keys = Vec::new();
        for a in 0..v.dim() {
            // the basis is sorted by weight, so index order is (wt a, a)
            let mut per_a = Vec::new();
            for b in 0..v.dim() {
                let s = v.weight(a) + v.weight(b) - 1;
                for n in (s - w.cutoff())..=(s - w.min_weight()) {
                    for c in w.basis_of_weight(s - n) {
                        per_a.push((a, n, b, c));
                    }
                }
            }
            per_a.sort();
            keys.extend(per_a);
        }
        let index = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        CochainBasis {
            left: v.clone(),
            target: w.clone(),
            keys,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> (usize, i64, usize, usize) {
        self.keys[i]
    }

    pub fn label(&self, i: usize) -> String {
        let (a, n, b, c) = self.keys[i];
        format!(
            "{} {} {} -> {}",
            self.left.label(a),
            n,
            self.left.label(b),
            self.target.label(c)
        )
    }

    pub fn element(&self, i: usize) -> TwoCochain {
        self.from_coordinates(&Vector::unit(i))
    }

    pub fn from_coordinates(&self, x: &Row) -> TwoCochain {
        let mut values: BTreeMap<(usize, i64, usize), Vector> = BTreeMap::new();
        for (i, c) in x {
            let (a, n, b, t) = self.keys[*i];
            values.entry((a, n, b)).or_default().add_term(t, c);
        }
        let mut psi = ModeFamily::zero(self.left.clone(), self.left.clone(), self.target.clone());
        for ((a, n, b), v) in values {
            psi.insert(a, n, b, v).expect("basis entries obey the weight rule");
        }
        psi
    }

    pub fn coordinates(&self, psi: &TwoCochain) -> Row {
        let mut x = Row::new();
        for (&(a, n, b), v) in psi.entries() {
            for (c, coef) in v {
                let i = self.index[&(a, n, b, *c)];
                x.add_term(i, coef);
            }
        }
        x
    }
}

/// `Z²` as coordinate vectors over `basis`, together with the number of
/// distinct skipped checks.
fn cocycle_space(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, basis: &CochainBasis) -> Result<(Vec<Row>, usize)> {
    let zero = ModeFamily::zero(v.space().clone(), v.space().clone(), w.space().clone());
    let base = cocycle_residual(v, w, &zero)?;
    let columns: Vec<CocycleResidual> = (0..basis.len())
        .into_par_iter()
        .map(|i| cocycle_residual(v, w, &basis.element(i)).map(|r| r.difference(&base)))
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<ResidualKey, Row> = BTreeMap::new();
    let mut skips = std::collections::BTreeSet::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, c) in &col.entries {
            rows.entry(*k).or_default().add_term(j, c);
        }
        skips.extend(col.skipped.iter().map(|s| (s.axiom, s.instance)));
    }
    let mut system = LinearSystem::new((0..basis.len()).map(|i| basis.label(i)).collect());
    for (k, row) in rows {
        system
            .push_row(row, format!("{:?}", k))
            .expect("registered unknowns");
    }
    Ok((kernel_basis(&system), skips.len()))
}

/// A basis of `Z²(V, W)` by the probe method.
pub fn compute_z2(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> Result<Vec<TwoCochain>> {
    let basis = CochainBasis::new(v.space(), w.space());
    let (z2, _) = cocycle_space(v, w, &basis)?;
    Ok(z2.iter().map(|x| basis.from_coordinates(x)).collect())
}

/// The elementary vacuum-killing degree-zero maps `v ↦ c`, `v ≠ 1`.
pub fn vacuum_killing_maps(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> Vec<GradedMap<Scalar>> {
    degree_zero_unknowns(v.space(), w.space(), Some(v.vacuum()))
        .into_iter()
        .map(|(a, c)| elementary_map(v.space(), w.space(), a, c))
        .collect()
}

fn coboundary_columns(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, basis: &CochainBasis) -> Result<Vec<Row>> {
    vacuum_killing_maps(v, w)
        .iter()
        .map(|g| Ok(basis.coordinates(&coboundary(v, w, g)?)))
        .collect()
}

/// `H²(V, W) = Z² / B²` with a basis of each and class representatives
/// drawn from the `Z²` basis.
pub fn compute_h2(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>) -> Result<CohomologyResult<TwoCochain>> {
    let basis = CochainBasis::new(v.space(), w.space());
    let (z2, skipped) = cocycle_space(v, w, &basis)?;
    let mut echelon = Echelon::new();
    let mut b2 = Vec::new();
    for x in coboundary_columns(v, w, &basis)? {
        if echelon.insert(x.clone(), "coboundary") {
            b2.push(x);
        }
    }
    let h_dim = quotient_dim(&z2, &b2)?;
    let mut reps = Vec::new();
    for x in &z2 {
        if echelon.insert(x.clone(), "cocycle") {
            reps.push(x.clone());
        }
    }
    debug_assert_eq!(reps.len(), h_dim);
    let to_cochains = |rows: &[Row]| rows.iter().map(|x| basis.from_coordinates(x)).collect();
    Ok(CohomologyResult {
        h_dim,
        cocycle_basis: to_cochains(&z2),
        coboundary_basis: to_cochains(&b2),
        representatives: to_cochains(&reps),
        window: window_of(v, w),
        skipped,
    })
}

/// Solves `δg = psi` for a vacuum-killing degree-zero `g`.
pub fn is_coboundary(v: &VertexAlgebra<Scalar>, w: &VAModule<Scalar>, psi: &TwoCochain) -> Result<Option<GradedMap<Scalar>>> {
    if !cocycle_residual(v, w, psi)?.is_zero() {
        return Err(Error::NotACocycle);
    }
    let basis = CochainBasis::new(v.space(), w.space());
    let unknowns = degree_zero_unknowns(v.space(), w.space(), Some(v.vacuum()));
    let columns = coboundary_columns(v, w, &basis)?;
    let target = basis.coordinates(psi);
    let Some(x) = solve_columns(&columns, basis.len(), &target) else {
        return Ok(None);
    };
    Ok(Some(map_from_coordinates(v.space(), w.space(), &unknowns, &x)))
}

/// Solves `Σ x_j columns[j] = target` in a space of dimension `dim`.
fn solve_columns(columns: &[Row], dim: usize, target: &Row) -> Option<Row> {
    let mut rows = vec![Row::new(); dim];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            rows[*i].add_term(j, c);
        }
    }
    let mut system = LinearSystem::with_unknowns(columns.len());
    let mut rhs = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        system.push_row(row, i.to_string()).expect("registered unknowns");
        rhs.push(target.get(i));
    }
    solve_affine(&system, &rhs)
}

/// Coordinates of the class of `psi` against `h2.representatives`.
pub fn class_coordinates(h2: &CohomologyResult<TwoCochain>, psi: &TwoCochain) -> Result<Vec<Scalar>> {
    let Some(first) = h2.cocycle_basis.first().or(h2.coboundary_basis.first()) else {
        return if psi.is_zero() { Ok(Vec::new()) } else { Err(Error::NotACocycle) };
    };
    let basis = CochainBasis::new(first.left(), first.target());
    let mut columns: Vec<Row> = h2.representatives.iter().map(|r| basis.coordinates(r)).collect();
    columns.extend(h2.coboundary_basis.iter().map(|b| basis.coordinates(b)));
    let x = solve_columns(&columns, basis.len(), &basis.coordinates(psi)).ok_or(Error::NotACocycle)?;
    Ok((0..h2.representatives.len()).map(|i| x.get(i)).collect())
}
