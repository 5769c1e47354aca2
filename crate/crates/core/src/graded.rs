//! Graded spaces, graded maps, and mode families.
//!
//! A vertex operator `Y(u, x)v = Σ u_n v x^{-n-1}` is stored componentwise as
//! its modes `u_n v` on basis vectors. The grading operator is not a matrix:
//! it is the weight labeling of the basis, and its conjugation property
//! becomes the weight rule `wt(u_n v) = wt u + wt v - n - 1`, which every
//! stored entry obeys.
//!
//! Spaces come in two tiers. On the exact tier the space is genuinely zero
//! above its cutoff. On the truncated tier states above the cutoff exist but
//! are unknown, and any computation that needs one fails with
//! [`TruncationBreach`] instead of silently reading a zero.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result, TruncationBreach};
use crate::scalar::{Coeff, Scalar, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Exact,
    Truncated,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Exact => "exact",
            Tier::Truncated => "truncated",
        }
    }
}

pub(crate) fn valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| !c.is_whitespace() && !"*+,:#".contains(c))
}

/// A finite-dimensional integer-graded space with a named basis sorted by
/// weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    weights: Vec<i64>,
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    min_weight: i64,
    cutoff: i64,
    tier: Tier,
}

impl GradedSpace {
    /// Builds a space from `(weight, label)` pairs. The basis is stably
    /// sorted by weight. `min_weight` defaults to the lowest weight present
    /// (0 for the zero space) and `cutoff` to the highest.
    pub fn new(
        basis: Vec<(i64, String)>,
        min_weight: Option<i64>,
        cutoff: Option<i64>,
        tier: Tier,
    ) -> Result<Self> {
        let mut basis = basis;
        basis.sort_by_key(|(w, _)| *w);
        let lowest = basis.first().map(|(w, _)| *w);
        let highest = basis.last().map(|(w, _)| *w);
        let min_weight = min_weight.or(lowest).unwrap_or(0);
        let cutoff = cutoff.or(highest).unwrap_or(min_weight);
        if let Some(h) = highest {
            if h > cutoff {
                return Err(match tier {
                    Tier::Exact => Error::CutoffBelowMaxWeight {
                        cutoff,
                        max_weight: h,
                    },
                    Tier::Truncated => Error::WeightOutOfRange {
                        weight: h,
                        min: min_weight,
                        cutoff,
                    },
                });
            }
        }
        if let Some(l) = lowest {
            if l < min_weight {
                return Err(Error::WeightOutOfRange {
                    weight: l,
                    min: min_weight,
                    cutoff,
                });
            }
        }
        let mut index = BTreeMap::new();
        for (i, (_, label)) in basis.iter().enumerate() {
            if !valid_label(label) {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let (weights, labels) = basis.into_iter().unzip();
        Ok(GradedSpace {
            weights,
            labels,
            index,
            min_weight,
            cutoff,
            tier,
        })
    }

    pub fn zero(tier: Tier) -> Self {
        GradedSpace::new(Vec::new(), Some(0), Some(0), tier).expect("empty space is valid")
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn min_weight(&self) -> i64 {
        self.min_weight
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn tier(&self) -> Tier {
        self.tier
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.weights.last().copied()
    }

    /// Basis positions of weight `w`.
    pub fn basis_of_weight(&self, w: i64) -> Range<usize> {
        let start = self.weights.partition_point(|&x| x < w);
        let end = self.weights.partition_point(|&x| x <= w);
        start..end
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut d = BTreeMap::new();
        for &w in &self.weights {
            *d.entry(w).or_insert(0) += 1;
        }
        d
    }

    pub fn weights_present(&self) -> BTreeSet<i64> {
        self.weights.iter().copied().collect()
    }

    /// Whether weight `w` can carry nonzero states. `Ok(false)` means the
    /// weight space is known to be zero; an error means it is unknown.
    pub fn weight_status(&self, w: i64) -> Result<bool, TruncationBreach> {
        if w < self.min_weight {
            return Ok(false);
        }
        if w > self.cutoff {
            return match self.tier {
                Tier::Exact => Ok(false),
                Tier::Truncated => Err(TruncationBreach {
                    weight: w,
                    cutoff: self.cutoff,
                }),
            };
        }
        Ok(true)
    }

    /// A copy with a different cutoff. Exact-tier spaces reject cutoffs below
    /// their top weight; truncated spaces drop basis vectors above it.
    pub fn with_cutoff(&self, cutoff: i64) -> Result<Self> {
        let basis = self
            .weights
            .iter()
            .zip(&self.labels)
            .filter(|(w, _)| self.tier == Tier::Exact || **w <= cutoff)
            .map(|(w, l)| (*w, l.clone()))
            .collect();
        GradedSpace::new(basis, Some(self.min_weight), Some(cutoff), self.tier)
    }

    /// The weight of a homogeneous vector, `None` for zero or inhomogeneous.
    pub fn homogeneous_weight<R: Coeff>(&self, v: &SparseVec<R>) -> Option<i64> {
        let mut it = v.indices().map(|i| self.weights[i]);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    pub fn format_vector<R: Coeff>(&self, v: &SparseVec<R>) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        v.iter()
            .map(|(i, c)| format!("{}*{}", c, self.labels[*i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A linear map between graded spaces shifting weight by `degree`, stored as
/// the image of each source basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap<R> {
    degree: i64,
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    images: Vec<SparseVec<R>>,
}

impl<R: Coeff> GradedMap<R> {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> Self {
        let images = vec![SparseVec::new(); source.dim()];
        GradedMap {
            degree,
            source,
            target,
            images,
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let mut m = Self::zero(space.clone(), space, 0);
        for i in 0..m.images.len() {
            m.images[i] = SparseVec::unit(i);
        }
        m
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn image(&self, i: usize) -> &SparseVec<R> {
        &self.images[i]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(SparseVec::is_zero)
    }

    /// Sets the image of basis vector `i`, enforcing the degree.
    pub fn set_image(&mut self, i: usize, image: SparseVec<R>) -> Result<()> {
        let expected = self.source.weight(i) + self.degree;
        for j in image.indices() {
            let found = self.target.weight(j);
            if found != expected {
                return Err(Error::WeightRuleViolation {
                    entry: format!(
                        "map image of {} -> {}",
                        self.source.label(i),
                        self.target.label(j)
                    ),
                    expected,
                    found,
                });
            }
        }
        self.images[i] = image;
        Ok(())
    }

    /// Applies the map. Fails when the image weight of some component is
    /// unknown in a truncated target.
    pub fn apply(&self, v: &SparseVec<R>) -> Result<SparseVec<R>, TruncationBreach> {
        let mut out = SparseVec::new();
        for (i, c) in v {
            if !self.target.weight_status(self.source.weight(*i) + self.degree)? {
                continue;
            }
            out.add_scaled(&self.images[*i], c);
        }
        Ok(out)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> GradedMap<S> {
        GradedMap {
            degree: self.degree,
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().map(|v| v.map_coeffs(f)).collect(),
        }
    }

    /// Nonzero matrix entries `(source index, target index, coefficient)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> + '_ {
        self.images
            .iter()
            .enumerate()
            .flat_map(|(i, v)| v.iter().map(move |(j, c)| (i, *j, c)))
    }
}

/// `(1/j!) T^j(w)`: the `x^j` coefficient of `e^{xT} w`.
pub fn exp_t<R: Coeff>(
    t: &GradedMap<R>,
    j: u32,
    w: &SparseVec<R>,
) -> Result<SparseVec<R>, TruncationBreach> {
    let mut v = w.clone();
    for _ in 0..j {
        if v.is_zero() {
            break;
        }
        v = t.apply(&v)?;
    }
    Ok(v.scaled_by(&Scalar::inv_factorial(j)))
}

pub type ModeKey = (usize, i64, usize);

/// Sparse structure constants `(a, n, b) ↦ a_n b` for a bilinear family of
/// vertex operators `left ⊗ right → target((x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeFamily<R> {
    left: Arc<GradedSpace>,
    right: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    entries: BTreeMap<ModeKey, SparseVec<R>>,
}

impl<R: Coeff> ModeFamily<R> {
    pub fn zero(left: Arc<GradedSpace>, right: Arc<GradedSpace>, target: Arc<GradedSpace>) -> Self {
        ModeFamily {
            left,
            right,
            target,
            entries: BTreeMap::new(),
        }
    }

    pub fn left(&self) -> &Arc<GradedSpace> {
        &self.left
    }

    pub fn right(&self) -> &Arc<GradedSpace> {
        &self.right
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<ModeKey, SparseVec<R>> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weight of `a_n b` for basis vectors `a`, `b`.
    pub fn target_weight(&self, a: usize, n: i64, b: usize) -> i64 {
        self.left.weight(a) + self.right.weight(b) - n - 1
    }

    /// The modes `n` for which `a_n b` lands in the target's known weights.
    pub fn mode_window(&self, a: usize, b: usize) -> std::ops::RangeInclusive<i64> {
        let s = self.left.weight(a) + self.right.weight(b) - 1;
        (s - self.target.cutoff())..=(s - self.target.min_weight())
    }

    /// Stores `a_n b = value`, replacing any previous entry.
    pub fn insert(&mut self, a: usize, n: i64, b: usize, value: SparseVec<R>) -> Result<()> {
        let expected = self.target_weight(a, n, b);
        for c in value.indices() {
            let found = self.target.weight(c);
            if found != expected {
                return Err(Error::WeightRuleViolation {
                    entry: format!(
                        "{} {} {} -> {}",
                        self.left.label(a),
                        n,
                        self.right.label(b),
                        self.target.label(c)
                    ),
                    expected,
                    found,
                });
            }
        }
        if value.is_zero() {
            self.entries.remove(&(a, n, b));
        } else {
            self.entries.insert((a, n, b), value);
        }
        Ok(())
    }

    /// `a_n b` on basis vectors; `None` means zero.
    pub fn basis_mode(
        &self,
        a: usize,
        n: i64,
        b: usize,
    ) -> Result<Option<&SparseVec<R>>, TruncationBreach> {
        if !self.target.weight_status(self.target_weight(a, n, b))? {
            return Ok(None);
        }
        Ok(self.entries.get(&(a, n, b)))
    }

    /// Bilinear extension of the stored entries.
    pub fn apply(
        &self,
        a: &SparseVec<R>,
        n: i64,
        b: &SparseVec<R>,
    ) -> Result<SparseVec<R>, TruncationBreach> {
        let mut out = SparseVec::new();
        for (i, ca) in a {
            for (j, cb) in b {
                if let Some(v) = self.basis_mode(*i, n, *j)? {
                    out.add_scaled(v, &ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> ModeFamily<S> {
        ModeFamily {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (*k, v.map_coeffs(f)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    fn same_spaces(&self, other: &Self) -> Result<()> {
        if self.left != other.left || self.right != other.right || self.target != other.target {
            return Err(Error::SpaceMismatch(
                "mode families act between different spaces".into(),
            ));
        }
        Ok(())
    }

    /// `self + c·other`
    pub fn add_scaled(&self, other: &Self, c: &R) -> Result<Self> {
        self.same_spaces(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let e = out.entries.entry(*k).or_default();
            e.add_scaled(v, c);
            if e.is_zero() {
                out.entries.remove(k);
            }
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &R::one())
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &R::one().neg())
    }

    pub fn scaled(&self, c: &R) -> Self {
        let mut out = Self::zero(self.left.clone(), self.right.clone(), self.target.clone());
        for (k, v) in &self.entries {
            let s = v.scaled(c);
            if !s.is_zero() {
                out.entries.insert(*k, s);
            }
        }
        out
    }
}

/// `w_n v` for the family `Y(w, x)v := e^{xT} Y(v, -x) w`, computed as
/// `Σ_{j≥0} (-1)^{n+j+1} (1/j!) T^j(v_{n+j} w)`.
///
/// `modes` is the action `left ⊗ right → right` (so `w` lies in `right` and
/// `v` in `left`), and `translation` is the degree-one operator on `right`.
pub fn skew_apply<R: Coeff>(
    modes: &ModeFamily<R>,
    translation: &GradedMap<R>,
    w: &SparseVec<R>,
    n: i64,
    v: &SparseVec<R>,
) -> Result<SparseVec<R>, TruncationBreach> {
    let wspace = modes.right();
    let vspace = modes.left();
    let target = modes.target();
    let mut out = SparseVec::new();
    for (wi, cw) in w {
        for (vi, cv) in v {
            let result_weight = wspace.weight(*wi) + vspace.weight(*vi) - n - 1;
            if !target.weight_status(result_weight)? {
                continue;
            }
            let coeff = cw.mul(cv);
            let max_j = result_weight - target.min_weight();
            for j in 0..=max_j {
                let Some(inner) = modes.basis_mode(*vi, n + j, *wi)? else {
                    continue;
                };
                let term = exp_t(translation, j as u32, inner)?;
                out.add_scaled(&term, &coeff.scale(&Scalar::sign(n + j + 1)));
            }
        }
    }
    Ok(out)
}

/// A vertex algebra given by its modes, over the coefficient ring `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexAlgebra<R> {
    space: Arc<GradedSpace>,
    vacuum: usize,
    modes: ModeFamily<R>,
}

impl<R: Coeff> VertexAlgebra<R> {
    pub fn new(space: Arc<GradedSpace>, vacuum: usize, modes: ModeFamily<R>) -> Result<Self> {
        if vacuum >= space.dim() {
            return Err(Error::NoVacuum);
        }
        if space.weight(vacuum) != 0 {
            return Err(Error::VacuumWrongWeight(space.weight(vacuum)));
        }
        if **modes.left() != *space || **modes.right() != *space || **modes.target() != *space {
            return Err(Error::SpaceMismatch(
                "vertex operator must act on the algebra's own space".into(),
            ));
        }
        Ok(VertexAlgebra {
            space,
            vacuum,
            modes,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn tier(&self) -> Tier {
        self.space.tier()
    }

    pub fn vacuum(&self) -> usize {
        self.vacuum
    }

    pub fn vacuum_vector(&self) -> SparseVec<R> {
        SparseVec::unit(self.vacuum)
    }

    pub fn modes(&self) -> &ModeFamily<R> {
        &self.modes
    }

    pub fn mode(
        &self,
        a: &SparseVec<R>,
        n: i64,
        b: &SparseVec<R>,
    ) -> Result<SparseVec<R>, TruncationBreach> {
        self.modes.apply(a, n, b)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> VertexAlgebra<S> {
        VertexAlgebra {
            space: self.space.clone(),
            vacuum: self.vacuum,
            modes: self.modes.map_coeffs(f),
        }
    }

    /// Same algebra with a new cutoff (see [`GradedSpace::with_cutoff`]).
    pub fn with_cutoff(&self, cutoff: i64) -> Result<Self> {
        let space = Arc::new(self.space.with_cutoff(cutoff)?);
        let remap: Vec<Option<usize>> = (0..self.space.dim())
            .map(|i| space.index_of(self.space.label(i)))
            .collect();
        let mut modes = ModeFamily::zero(space.clone(), space.clone(), space.clone());
        for ((a, n, b), v) in self.modes.entries() {
            let (Some(a2), Some(b2)) = (remap[*a], remap[*b]) else {
                continue;
            };
            if modes.target_weight(a2, *n, b2) > cutoff {
                continue;
            }
            let v2 = v.reindex(|i| remap[i].expect("target weight within cutoff"));
            modes.insert(a2, *n, b2, v2)?;
        }
        let vacuum = remap[self.vacuum].ok_or(Error::NoVacuum)?;
        VertexAlgebra::new(space, vacuum, modes)
    }
}

/// A module over a vertex algebra: the action `V ⊗ W → W((x))` and the
/// translation operator of `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct VAModule<R> {
    space: Arc<GradedSpace>,
    modes: ModeFamily<R>,
    translation: GradedMap<R>,
}

impl<R: Coeff> VAModule<R> {
    pub fn new(
        algebra_space: &Arc<GradedSpace>,
        modes: ModeFamily<R>,
        translation: GradedMap<R>,
    ) -> Result<Self> {
        let space = modes.right().clone();
        if **modes.left() != **algebra_space || *modes.target() != space {
            return Err(Error::SpaceMismatch(
                "module action must map V ⊗ W into W".into(),
            ));
        }
        if translation.degree() != 1 || *translation.source() != space || *translation.target() != space {
            return Err(Error::SpaceMismatch(
                "module translation must be a degree-one map W -> W".into(),
            ));
        }
        Ok(VAModule {
            space,
            modes,
            translation,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn algebra_space(&self) -> &Arc<GradedSpace> {
        self.modes.left()
    }

    pub fn modes(&self) -> &ModeFamily<R> {
        &self.modes
    }

    pub fn translation(&self) -> &GradedMap<R> {
        &self.translation
    }

    /// `w_n v` for the skew family `Y^W_{WV}(w, x)v = e^{xT_W} Y_W(v, -x) w`.
    pub fn skew_mode(
        &self,
        w: &SparseVec<R>,
        n: i64,
        v: &SparseVec<R>,
    ) -> Result<SparseVec<R>, TruncationBreach> {
        skew_apply(&self.modes, &self.translation, w, n, v)
    }
}

/// A mode line `left mode right -> Σ coeff*label`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeEntry<R> {
    pub left: String,
    pub mode: i64,
    pub right: String,
    pub value: Vec<(R, String)>,
}

/// Structured input for [`build_vertex_algebra`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraDescription<R> {
    pub basis: Vec<(i64, String)>,
    pub min_weight: Option<i64>,
    pub cutoff: Option<i64>,
    pub tier: Tier,
    pub vacuum: Option<String>,
    pub modes: Vec<ModeEntry<R>>,
}

/// Structured input for [`build_module`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleDescription<R> {
    pub basis: Vec<(i64, String)>,
    pub min_weight: Option<i64>,
    pub cutoff: Option<i64>,
    pub tier: Tier,
    pub modes: Vec<ModeEntry<R>>,
    pub translation: Vec<(String, Vec<(R, String)>)>,
}

pub(crate) fn resolve_vector<R: Coeff>(
    space: &GradedSpace,
    terms: &[(R, String)],
) -> Result<SparseVec<R>> {
    let mut v = SparseVec::new();
    for (c, label) in terms {
        let i = space
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        v.add_term(i, c);
    }
    Ok(v)
}

pub(crate) fn fill_modes<R: Coeff>(family: &mut ModeFamily<R>, lines: &[ModeEntry<R>]) -> Result<()> {
    for e in lines {
        let a = family
            .left()
            .index_of(&e.left)
            .ok_or_else(|| Error::UnknownLabel(e.left.clone()))?;
        let b = family
            .right()
            .index_of(&e.right)
            .ok_or_else(|| Error::UnknownLabel(e.right.clone()))?;
        let value = resolve_vector(family.target(), &e.value)?;
        family.insert(a, e.mode, b, value)?;
    }
    Ok(())
}

/// Validates a description entry by entry and builds the algebra.
pub fn build_vertex_algebra<R: Coeff>(desc: &AlgebraDescription<R>) -> Result<VertexAlgebra<R>> {
    let space = Arc::new(GradedSpace::new(
        desc.basis.clone(),
        desc.min_weight,
        desc.cutoff,
        desc.tier,
    )?);
    let vacuum_label = desc.vacuum.as_ref().ok_or(Error::NoVacuum)?;
    let vacuum = space
        .index_of(vacuum_label)
        .ok_or_else(|| Error::UnknownLabel(vacuum_label.clone()))?;
    let mut modes = ModeFamily::zero(space.clone(), space.clone(), space.clone());
    fill_modes(&mut modes, &desc.modes)?;
    VertexAlgebra::new(space, vacuum, modes)
}

pub fn build_module<R: Coeff>(
    algebra: &VertexAlgebra<R>,
    desc: &ModuleDescription<R>,
) -> Result<VAModule<R>> {
    let space = Arc::new(GradedSpace::new(
        desc.basis.clone(),
        desc.min_weight,
        desc.cutoff,
        desc.tier,
    )?);
    let mut modes = ModeFamily::zero(algebra.space().clone(), space.clone(), space.clone());
    fill_modes(&mut modes, &desc.modes)?;
    let mut t = GradedMap::zero(space.clone(), space.clone(), 1);
    for (label, terms) in &desc.translation {
        let i = space
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        t.set_image(i, resolve_vector(&space, terms)?)?;
    }
    VAModule::new(algebra.space(), modes, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn entry(l: &str, n: i64, r: &str, value: &[(i64, &str)]) -> ModeEntry<Scalar> {
        ModeEntry {
            left: l.into(),
            mode: n,
            right: r.into(),
            value: value.iter().map(|(c, s)| (q(*c), s.to_string())).collect(),
        }
    }

    fn one_dim() -> AlgebraDescription<Scalar> {
        AlgebraDescription {
            basis: vec![(0, "one".into())],
            min_weight: None,
            cutoff: None,
            tier: Tier::Exact,
            vacuum: Some("one".into()),
            modes: vec![entry("one", -1, "one", &[(1, "one")])],
        }
    }

    fn dual_numbers() -> AlgebraDescription<Scalar> {
        AlgebraDescription {
            basis: vec![(0, "one".into()), (0, "eps".into())],
            min_weight: None,
            cutoff: None,
            tier: Tier::Exact,
            vacuum: Some("one".into()),
            modes: vec![
                entry("one", -1, "one", &[(1, "one")]),
                entry("one", -1, "eps", &[(1, "eps")]),
                entry("eps", -1, "one", &[(1, "eps")]),
            ],
        }
    }

    #[test]
    fn builds_one_dimensional_algebra() {
        let v = build_vertex_algebra(&one_dim()).unwrap();
        assert_eq!(v.space().dim(), 1);
        assert_eq!(v.modes().entries().len(), 1);
    }

    #[test]
    fn rejects_weight_rule_violation() {
        let mut d = one_dim();
        d.modes.push(entry("one", 0, "one", &[(1, "one")]));
        assert!(matches!(
            build_vertex_algebra(&d),
            Err(Error::WeightRuleViolation { expected: -1, found: 0, .. })
        ));
    }

    #[test]
    fn rejects_missing_or_misweighted_vacuum() {
        let mut d = one_dim();
        d.vacuum = None;
        assert!(matches!(build_vertex_algebra(&d), Err(Error::NoVacuum)));

        let d = AlgebraDescription::<Scalar> {
            basis: vec![(1, "a".into())],
            min_weight: None,
            cutoff: None,
            tier: Tier::Exact,
            vacuum: Some("a".into()),
            modes: vec![],
        };
        assert!(matches!(build_vertex_algebra(&d), Err(Error::VacuumWrongWeight(1))));
    }

    #[test]
    fn dual_numbers_modes() {
        let v = build_vertex_algebra(&dual_numbers()).unwrap();
        let one = v.vacuum_vector();
        let eps = SparseVec::unit(1);
        assert_eq!(v.mode(&one, -1, &eps).unwrap(), eps);
        assert_eq!(v.mode(&eps, -1, &eps).unwrap(), SparseVec::new());
        for n in [-3, -2, 0, 1] {
            assert!(v.mode(&one, n, &eps).unwrap().is_zero());
        }
    }

    #[test]
    fn mode_apply_is_bilinear() {
        let v = build_vertex_algebra(&dual_numbers()).unwrap();
        let a: SparseVec<Scalar> = [(0, q(2)), (1, q(-3))].into_iter().collect();
        let a2: SparseVec<Scalar> = [(0, q(5)), (1, q(7))].into_iter().collect();
        let b: SparseVec<Scalar> = [(0, q(1)), (1, q(4))].into_iter().collect();
        let lhs = v.mode(&a.sum(&a2), -1, &b).unwrap();
        let rhs = v.mode(&a, -1, &b).unwrap().sum(&v.mode(&a2, -1, &b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_t_basics() {
        let space = Arc::new(
            GradedSpace::new(vec![(0, "a".into()), (1, "b".into())], None, None, Tier::Exact).unwrap(),
        );
        let mut t = GradedMap::<Scalar>::zero(space.clone(), space.clone(), 1);
        let w = SparseVec::unit(0);
        assert_eq!(exp_t(&t, 0, &w).unwrap(), w);
        assert!(exp_t(&t, 1, &w).unwrap().is_zero());
        t.set_image(0, SparseVec::unit(1)).unwrap();
        assert_eq!(exp_t(&t, 1, &w).unwrap(), SparseVec::unit(1));
        // beyond the top weight on the exact tier
        assert!(exp_t(&t, 2, &w).unwrap().is_zero());
        assert!(t.set_image(1, SparseVec::unit(0)).is_err());
    }

    #[test]
    fn truncated_tier_reports_breach() {
        let space = Arc::new(
            GradedSpace::new(vec![(0, "a".into()), (1, "b".into())], None, Some(1), Tier::Truncated)
                .unwrap(),
        );
        let mut t = GradedMap::<Scalar>::zero(space.clone(), space.clone(), 1);
        t.set_image(0, SparseVec::unit(1)).unwrap();
        let err = exp_t(&t, 2, &SparseVec::unit(0)).unwrap_err();
        assert_eq!(err.weight, 2);
        assert_eq!(err.cutoff, 1);
    }

    #[test]
    fn skew_mode_of_weight_zero_module_at_mode_zero_vanishes() {
        let v = build_vertex_algebra(&dual_numbers()).unwrap();
        let t = GradedMap::zero(v.space().clone(), v.space().clone(), 1);
        let w = VAModule::new(v.space(), v.modes().clone(), t).unwrap();
        let eps = SparseVec::unit(1);
        let one = SparseVec::unit(0);
        assert!(w.skew_mode(&eps, 0, &one).unwrap().is_zero());
        // Y_W(1, -x) w = w
        assert_eq!(w.skew_mode(&eps, -1, &one).unwrap(), eps);
        // commutative product for T = 0
        assert_eq!(w.skew_mode(&one, -1, &eps).unwrap(), eps);
    }

    #[test]
    fn basis_of_weight_ranges() {
        let s = GradedSpace::new(
            vec![(2, "c".into()), (0, "a".into()), (2, "d".into()), (1, "b".into())],
            None,
            None,
            Tier::Exact,
        )
        .unwrap();
        assert_eq!(s.labels(), &["a", "b", "c", "d"]);
        assert_eq!(s.basis_of_weight(2), 2..4);
        assert_eq!(s.basis_of_weight(5), 4..4);
        assert_eq!(s.dims().into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 1), (2, 2)]);
    }

    #[test]
    fn exact_cutoff_override_below_top_weight_is_rejected() {
        let s = GradedSpace::new(vec![(0, "a".into()), (2, "b".into())], None, None, Tier::Exact).unwrap();
        assert!(matches!(s.with_cutoff(1), Err(Error::CutoffBelowMaxWeight { .. })));
        assert_eq!(s.with_cutoff(3).unwrap().cutoff(), 3);
    }

    #[test]
    fn labels_must_be_unique_and_well_formed() {
        assert!(matches!(
            GradedSpace::new(vec![(0, "a".into()), (0, "a".into())], None, None, Tier::Exact),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            GradedSpace::new(vec![(0, "1a".into())], None, None, Tier::Exact),
            Err(Error::InvalidLabel(_))
        ));
    }
}
