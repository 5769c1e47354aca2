//! Example algebras and modules.
//!
//! A commutative associative unital algebra `A` with a derivation `D` that
//! raises weight by one is a vertex algebra with `Y(a, x)b = (e^{xD}a)·b`,
//! i.e. `a_n b = 0` for `n ≥ 0` and `a_{-j-1} b = (1/j!)(D^j a)·b`. These are
//! genuinely finite, so every construction on them is exact. The truncated
//! free boson is the one infinite example, kept for truncation bookkeeping.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::axioms::intrinsic_t;
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, ModeFamily, Tier, VAModule, VertexAlgebra};
use crate::scalar::{Scalar, SparseVec};

type Vector = SparseVec<Scalar>;

/// A commutative differential algebra given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct CommDiffAlgebraSpec {
    pub labels: Vec<String>,
    pub weights: Vec<i64>,
    pub unit: usize,
    /// `table[i][j] = e_i · e_j`
    pub table: Vec<Vec<Vector>>,
    /// `derivation[i] = D(e_i)`
    pub derivation: Vec<Vector>,
}

impl CommDiffAlgebraSpec {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn multiply(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            for (j, b) in y {
                out.add_scaled(&self.table[*i][*j], &(a * b));
            }
        }
        out
    }

    pub fn derive(&self, x: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            out.add_scaled(&self.derivation[*i], a);
        }
        out
    }

    fn name(&self, i: usize) -> &str {
        &self.labels[i]
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.weights.len() != d || self.table.len() != d || self.derivation.len() != d {
            return Err(Error::SpaceMismatch(
                "labels, weights, table and derivation disagree in size".into(),
            ));
        }
        if self.table.iter().any(|row| row.len() != d) {
            return Err(Error::SpaceMismatch("multiplication table is not square".into()));
        }
        if self.unit >= d {
            return Err(Error::NoVacuum);
        }
        if self.weights[self.unit] != 0 {
            return Err(Error::WeightMismatch(format!(
                "unit {} has weight {}",
                self.name(self.unit),
                self.weights[self.unit]
            )));
        }
        let homogeneous = |v: &Vector, w: i64| v.indices().all(|k| self.weights[k] == w);
        for i in 0..d {
            if !homogeneous(&self.derivation[i], self.weights[i] + 1) {
                return Err(Error::WeightMismatch(format!(
                    "D({}) is not of weight {}",
                    self.name(i),
                    self.weights[i] + 1
                )));
            }
            for j in 0..d {
                if !homogeneous(&self.table[i][j], self.weights[i] + self.weights[j]) {
                    return Err(Error::WeightMismatch(format!(
                        "{}·{} is not of weight {}",
                        self.name(i),
                        self.name(j),
                        self.weights[i] + self.weights[j]
                    )));
                }
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::NotCommutative(format!(
                        "({}, {})",
                        self.name(i),
                        self.name(j)
                    )));
                }
            }
            if self.table[self.unit][i] != Vector::unit(i) {
                return Err(Error::NotUnital(self.name(i).to_string()));
            }
        }
        let e = Vector::unit;
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i][j];
                let leibniz = self
                    .derive(ij)
                    .difference(&self.multiply(&self.derivation[i], &e(j)))
                    .difference(&self.multiply(&e(i), &self.derivation[j]));
                if !leibniz.is_zero() {
                    return Err(Error::NotLeibniz(format!(
                        "({}, {})",
                        self.name(i),
                        self.name(j)
                    )));
                }
                for k in 0..d {
                    let left = self.multiply(ij, &e(k));
                    let right = self.multiply(&e(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(format!(
                            "({}, {}, {})",
                            self.name(i),
                            self.name(j),
                            self.name(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The vertex algebra `Y(a, x)b = (e^{xD}a)·b` on an exact-tier space.
pub fn from_commutative_algebra(spec: &CommDiffAlgebraSpec) -> Result<VertexAlgebra<Scalar>> {
    spec.validate()?;
    let basis = spec
        .weights
        .iter()
        .zip(&spec.labels)
        .map(|(w, l)| (*w, l.clone()))
        .collect();
    let space = Arc::new(GradedSpace::new(basis, None, None, Tier::Exact)?);
    // the space sorts its basis by weight
    let pos: Vec<usize> = spec
        .labels
        .iter()
        .map(|l| space.index_of(l).expect("label registered"))
        .collect();
    let mut modes = ModeFamily::zero(space.clone(), space.clone(), space.clone());
    for a in 0..spec.dim() {
        let mut da = Vector::unit(a);
        let mut j = 0u32;
        while !da.is_zero() {
            let scale = Scalar::inv_factorial(j);
            for b in 0..spec.dim() {
                let prod = spec.multiply(&da, &Vector::unit(b)).scaled(&scale);
                modes.insert(pos[a], -(j as i64) - 1, pos[b], prod.reindex(|k| pos[k]))?;
            }
            da = spec.derive(&da);
            j += 1;
            if j as usize > spec.dim() + 1 {
                return Err(Error::WeightMismatch("derivation is not nilpotent".into()));
            }
        }
    }
    VertexAlgebra::new(space, pos[spec.unit], modes)
}

type Product<'a> = (&'a str, &'a str, &'a [(i64, &'a str)]);

fn spec_from(
    labels: &[(&str, i64)],
    products: &[Product<'_>],
) -> CommDiffAlgebraSpec {
    let d = labels.len();
    let idx = |s: &str| labels.iter().position(|(l, _)| *l == s).expect("known label");
    let mut table = vec![vec![Vector::new(); d]; d];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = Vector::unit(i);
    }
    table[0] = (0..d).map(Vector::unit).collect();
    for (a, b, value) in products {
        let v: Vector = value
            .iter()
            .map(|(c, l)| (idx(l), Scalar::from_int(*c)))
            .collect();
        table[idx(a)][idx(b)] = v.clone();
        table[idx(b)][idx(a)] = v;
    }
    CommDiffAlgebraSpec {
        labels: labels.iter().map(|(l, _)| l.to_string()).collect(),
        weights: labels.iter().map(|(_, w)| *w).collect(),
        unit: 0,
        table,
        derivation: vec![Vector::new(); d],
    }
}

/// `ℚ` itself.
pub fn trivial_algebra() -> VertexAlgebra<Scalar> {
    from_commutative_algebra(&spec_from(&[("one", 0)], &[])).expect("valid preset")
}

/// `ℚ[ε]/(ε²)` with `wt ε = 0` and `D = 0`.
pub fn dual_numbers_spec() -> CommDiffAlgebraSpec {
    spec_from(&[("one", 0), ("eps", 0)], &[])
}

pub fn dual_numbers_algebra() -> VertexAlgebra<Scalar> {
    from_commutative_algebra(&dual_numbers_spec()).expect("valid preset")
}

/// `ℚ × ℚ` in the basis `{1, e}` with `e² = e`.
pub fn split_pair_spec() -> CommDiffAlgebraSpec {
    spec_from(&[("one", 0), ("e", 0)], &[("e", "e", &[(1, "e")])])
}

pub fn split_pair_algebra() -> VertexAlgebra<Scalar> {
    from_commutative_algebra(&split_pair_spec()).expect("valid preset")
}

/// `ℚ[ε]/(ε²)` with `wt ε = 1` and `D = 0`.
pub fn graded_nilpotent_spec() -> CommDiffAlgebraSpec {
    spec_from(&[("one", 0), ("eps", 1)], &[])
}

pub fn graded_nilpotent_algebra() -> VertexAlgebra<Scalar> {
    from_commutative_algebra(&graded_nilpotent_spec()).expect("valid preset")
}

/// The adjoint module: `W = V`, `Y_W = Y`, `T_W = T`.
pub fn adjoint_module(v: &VertexAlgebra<Scalar>) -> Result<VAModule<Scalar>> {
    VAModule::new(v.space(), v.modes().clone(), intrinsic_t(v)?)
}

// Fock space of the rank-one Heisenberg algebra [a_m, a_n] = m δ_{m+n,0}.
// A basis state a_{-λ1} ... a_{-λk} 1 is the partition λ in decreasing order.
type Partition = Vec<u32>;
type Fock = BTreeMap<Partition, Scalar>;

fn fock_add(out: &mut Fock, p: Partition, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(p.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&p);
    }
}

fn fock_weight(p: &Partition) -> i64 {
    p.iter().map(|&x| x as i64).sum()
}

/// `a_m` on a basis state.
fn heisenberg(m: i64, p: &Partition) -> Fock {
    let mut out = Fock::new();
    match m {
        0 => {}
        m if m < 0 => {
            let mut q = p.clone();
            let part = (-m) as u32;
            let at = q.partition_point(|&x| x >= part);
            q.insert(at, part);
            fock_add(&mut out, q, &Scalar::one());
        }
        m => {
            let part = m as u32;
            if let Some(at) = p.iter().position(|&x| x == part) {
                let mult = p.iter().filter(|&&x| x == part).count() as i64;
                let mut q = p.clone();
                q.remove(at);
                fock_add(&mut out, q, &Scalar::from_int(m * mult));
            }
        }
    }
    out
}

fn heisenberg_vec(m: i64, v: &Fock) -> Fock {
    let mut out = Fock::new();
    for (p, c) in v {
        for (q, d) in heisenberg(m, p) {
            fock_add(&mut out, q, &(c * &d));
        }
    }
    out
}

struct BosonModes {
    memo: HashMap<(Partition, i64, Partition), Fock>,
}

impl BosonModes {
    /// `s_n w` for basis states `s`, `w`, by peeling the largest part off `s`:
    /// `(a_{-k} s')_n = Σ_i (-1)^i C(-k, i) [a_{-k-i} s'_{n+i} - (-1)^k s'_{n-k-i} a_i]`.
    fn mode(&mut self, s: &Partition, n: i64, w: &Partition) -> Fock {
        let key = (s.clone(), n, w.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Fock::new();
        if s.is_empty() {
            if n == -1 {
                fock_add(&mut out, w.clone(), &Scalar::one());
            }
        } else if fock_weight(s) + fock_weight(w) - n > 0 {
            let k = s[0] as i64;
            let rest: Partition = s[1..].to_vec();
            let (ws, ww) = (fock_weight(&rest), fock_weight(w));
            let sign_k = Scalar::sign(k);
            // first sum: s'_{n+i} w vanishes once its weight drops below zero
            let imax = ws + ww - n - 1;
            for i in 0..=imax.max(-1) {
                let c = Scalar::sign(i) * Scalar::binomial(-k, i as u32);
                let inner = self.mode(&rest, n + i, w);
                if inner.is_empty() {
                    continue;
                }
                for (p, d) in heisenberg_vec(-k - i, &inner) {
                    fock_add(&mut out, p, &(&c * &d));
                }
            }
            // second sum: a_i w vanishes for i > wt w
            for i in 1..=ww {
                let c = Scalar::sign(i) * Scalar::binomial(-k, i as u32) * &sign_k;
                for (p, d) in heisenberg(i, w) {
                    for (q, e) in self.mode(&rest, n - k - i, &p) {
                        fock_add(&mut out, q, &-(&c * &(&d * &e)));
                    }
                }
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

fn partitions_of(n: u32, max_part: u32) -> Vec<Partition> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut tail in partitions_of(n - first, first) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn partition_label(p: &Partition) -> String {
    if p.is_empty() {
        "one".to_string()
    } else {
        let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        format!("a{}", parts.join("_"))
    }
}

/// The Heisenberg vertex algebra truncated at weight `cutoff`: basis
/// `a_{-λ1} ... a_{-λk} 1` for partitions `λ` of weight at most the cutoff,
/// labelled `one`, `a1`, `a2`, `a1_1`, ...
pub fn truncated_free_boson(cutoff: u32) -> VertexAlgebra<Scalar> {
    let states: Vec<Partition> = (0..=cutoff)
        .flat_map(|w| partitions_of(w, w))
        .collect();
    let basis = states
        .iter()
        .map(|p| (fock_weight(p), partition_label(p)))
        .collect();
    let space = Arc::new(
        GradedSpace::new(basis, Some(0), Some(cutoff as i64), Tier::Truncated)
            .expect("partition labels are distinct"),
    );
    let index: HashMap<&Partition, usize> = states
        .iter()
        .map(|p| (p, space.index_of(&partition_label(p)).expect("registered")))
        .collect();
    let mut ops = BosonModes {
        memo: HashMap::new(),
    };
    let mut modes = ModeFamily::zero(space.clone(), space.clone(), space.clone());
    for s in &states {
        for w in &states {
            let a = index[s];
            let b = index[w];
            for n in modes.mode_window(a, b) {
                let v = ops.mode(s, n, w);
                let vec: Vector = v.iter().map(|(p, c)| (index[p], c.clone())).collect();
                modes.insert(a, n, b, vec).expect("modes obey the weight rule");
            }
        }
    }
    VertexAlgebra::new(space, index[&Vec::new()], modes).expect("vacuum has weight 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{check_all, check_creation, check_module, Verdict};

    #[test]
    fn trivial_is_one_dimensional() {
        let v = trivial_algebra();
        assert_eq!(v.space().dim(), 1);
        assert_eq!(check_all(&v).verdict(), Verdict::Pass);
    }

    #[test]
    fn dual_numbers_have_single_mode() {
        let v = dual_numbers_algebra();
        assert_eq!(v.space().dim(), 2);
        assert!(v.modes().entries().keys().all(|(_, n, _)| *n == -1));
        let eps = Vector::unit(1);
        assert!(v.mode(&eps, -1, &eps).unwrap().is_zero());
    }

    #[test]
    fn presets_pass_check_all_with_no_skips() {
        for v in [
            trivial_algebra(),
            dual_numbers_algebra(),
            split_pair_algebra(),
            graded_nilpotent_algebra(),
        ] {
            let r = check_all(&v);
            assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.failed);
            assert!(r.skipped.is_empty());
            let w = adjoint_module(&v).unwrap();
            assert_eq!(check_module(&v, &w).verdict(), Verdict::Pass);
        }
    }

    #[test]
    fn rejects_non_associative_table() {
        // x·x = y·y = 1, x·y = 0: (x·y)·y = 0 but x·(y·y) = x
        let mut spec = spec_from(
            &[("one", 0), ("x", 0), ("y", 0)],
            &[("x", "x", &[(1, "one")]), ("y", "y", &[(1, "one")])],
        );
        assert!(matches!(
            from_commutative_algebra(&spec),
            Err(Error::NotAssociative(_))
        ));
        spec.table[1][2] = Vector::unit(2);
        assert!(matches!(
            from_commutative_algebra(&spec),
            Err(Error::NotCommutative(_))
        ));
    }

    #[test]
    fn rejects_bad_derivation() {
        let mut spec = graded_nilpotent_spec();
        spec.derivation[0] = Vector::unit(1);
        assert!(matches!(
            from_commutative_algebra(&spec),
            Err(Error::NotLeibniz(_))
        ));
        let mut spec = dual_numbers_spec();
        spec.derivation[1] = Vector::unit(1);
        assert!(matches!(
            from_commutative_algebra(&spec),
            Err(Error::WeightMismatch(_))
        ));
    }

    #[test]
    fn polynomial_algebra_with_derivation() {
        // ℚ[x]/(x³), wt x = 1, D = d/dx · x ... take D(x) = x², D(x²) = 2x³ = 0
        let mut spec = spec_from(
            &[("one", 0), ("x", 1), ("x2", 2)],
            &[("x", "x", &[(1, "x2")])],
        );
        spec.derivation[1] = Vector::unit(2);
        let v = from_commutative_algebra(&spec).unwrap();
        assert_eq!(check_all(&v).verdict(), Verdict::Pass);
        // T equals D
        let t = crate::axioms::intrinsic_t(&v).unwrap();
        assert_eq!(t.image(1), &Vector::unit(2));
        assert!(t.image(2).is_zero());
    }

    #[test]
    fn boson_dimensions_follow_partition_counts() {
        for (n, dims) in [(2u32, vec![1, 1, 2]), (4, vec![1, 1, 2, 3, 5])] {
            let v = truncated_free_boson(n);
            let got: Vec<usize> = v.space().dims().values().copied().collect();
            assert_eq!(got, dims);
        }
    }

    #[test]
    fn boson_level_one_normalization() {
        let v = truncated_free_boson(3);
        let s = v.space();
        let a = Vector::unit(s.index_of("a1").unwrap());
        assert_eq!(v.mode(&a, 1, &a).unwrap(), Vector::unit(s.index_of("one").unwrap()));
        // a_{-1} a = a_{-1}a_{-1} 1
        assert_eq!(v.mode(&a, -1, &a).unwrap(), Vector::unit(s.index_of("a1_1").unwrap()));
        // T(a) = a_{-2} 1
        assert_eq!(
            v.mode(&a, -2, &v.vacuum_vector()).unwrap(),
            Vector::unit(s.index_of("a2").unwrap())
        );
        assert_eq!(check_creation(&v).verdict(), Verdict::Pass);
    }
}
