//! Independent brute-force oracles on dense multiplication tables.
//!
//! Nothing here goes through the crate's linear algebra: the tables are
//! written out by hand and every rank and nullspace is computed by plain
//! Gaussian elimination on dense `BigRational` matrices.

#![allow(dead_code, clippy::needless_range_loop)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vertex_cohomology::cohomology::{CochainBasis, TwoCochain};
use vertex_cohomology::graded::{GradedSpace, VertexAlgebra};
use vertex_cohomology::{Scalar, SparseVec};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(n.into())
}

/// A commutative unital algebra with `D = 0`, by structure constants.
#[derive(Clone, Debug)]
pub struct Table {
    pub labels: Vec<&'static str>,
    pub weights: Vec<i64>,
    pub unit: usize,
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i e_j`
    pub mul: Vec<Vec<Vec<Q>>>,
}

impl Table {
    fn new(labels: Vec<&'static str>, weights: Vec<i64>) -> Self {
        let d = labels.len();
        let mut mul = vec![vec![vec![q(0); d]; d]; d];
        for i in 0..d {
            mul[0][i][i] = q(1);
            mul[i][0][i] = q(1);
        }
        Table {
            labels,
            weights,
            unit: 0,
            mul,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn product(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![q(0); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                for k in 0..d {
                    out[k] += &x[i] * &y[j] * &self.mul[i][j][k];
                }
            }
        }
        out
    }

    fn unit_vec(&self, i: usize) -> Vec<Q> {
        let mut v = vec![q(0); self.dim()];
        v[i] = q(1);
        v
    }
}

pub fn trivial_table() -> Table {
    Table::new(vec!["one"], vec![0])
}

pub fn dual_table() -> Table {
    Table::new(vec!["one", "eps"], vec![0, 0])
}

pub fn split_table() -> Table {
    let mut t = Table::new(vec!["one", "e"], vec![0, 0]);
    t.mul[1][1][1] = q(1);
    t
}

pub fn graded_nilpotent_table() -> Table {
    Table::new(vec!["one", "eps"], vec![0, 1])
}

/// `ℚ[x]/(x⁴)` in the basis `1, x, x², x³`.
pub fn quartic_table() -> Table {
    let mut t = Table::new(vec!["one", "x", "x2", "x3"], vec![0, 0, 0, 0]);
    for i in 1..4 {
        for j in 1..4 {
            if i + j < 4 {
                t.mul[i][j][i + j] = q(1);
            }
        }
    }
    t
}

/// Row echelon form in place; returns the rank.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : rows · x = 0}` by full reduction.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for k in 0..cols {
            m[r][k] = &m[r][k] / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![q(0); cols];
        x[free] = q(1);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[row][free].clone();
        }
        out.push(x);
    }
    out
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let both: Vec<Vec<Q>> = a.iter().chain(b).cloned().collect();
    let ra = rank(a);
    ra == rank(b) && ra == rank(&both)
}

/// Weight-preserving maps `A → A` as `(i, k)`: coefficient of `e_k` in `f(e_i)`.
pub fn map_unknowns(t: &Table, kill_unit: bool) -> Vec<(usize, usize)> {
    let d = t.dim();
    let mut out = Vec::new();
    for i in 0..d {
        if kill_unit && i == t.unit {
            continue;
        }
        for k in 0..d {
            if t.weights[i] == t.weights[k] {
                out.push((i, k));
            }
        }
    }
    out
}

fn apply_map(t: &Table, unknowns: &[(usize, usize)], x: &[Q], v: &[Q]) -> Vec<Q> {
    let mut out = vec![q(0); t.dim()];
    for (j, &(i, k)) in unknowns.iter().enumerate() {
        out[k] += &x[j] * &v[i];
    }
    out
}

/// Leibniz derivations `f(ab) = f(a)b + a f(b)`, in `map_unknowns(t, false)`
/// coordinates.
pub fn derivations(t: &Table) -> Vec<Vec<Q>> {
    let unknowns = map_unknowns(t, false);
    let n = unknowns.len();
    let d = t.dim();
    let mut rows = Vec::new();
    for a in 0..d {
        for b in 0..d {
            // column j: residual of the elementary map j
            let cols: Vec<Vec<Q>> = (0..n)
                .map(|j| {
                    let mut x = vec![q(0); n];
                    x[j] = q(1);
                    let f = |v: &[Q]| apply_map(t, &unknowns, &x, v);
                    let ea = t.unit_vec(a);
                    let eb = t.unit_vec(b);
                    let lhs = f(&t.product(&ea, &eb));
                    let r1 = t.product(&f(&ea), &eb);
                    let r2 = t.product(&ea, &f(&eb));
                    (0..d).map(|k| &lhs[k] - &r1[k] - &r2[k]).collect()
                })
                .collect();
            for k in 0..d {
                rows.push((0..n).map(|j| cols[j][k].clone()).collect());
            }
        }
    }
    nullspace(&rows, n)
}

/// Coordinates `(i, j, k)` of weight-compatible bilinear maps `A ⊗ A → A`.
pub fn cochain_unknowns(t: &Table) -> Vec<(usize, usize, usize)> {
    let d = t.dim();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if t.weights[k] == t.weights[i] + t.weights[j] {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

fn bilinear(t: &Table, unknowns: &[(usize, usize, usize)], x: &[Q], a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![q(0); t.dim()];
    for (m, &(i, j, k)) in unknowns.iter().enumerate() {
        if x[m].is_zero() {
            continue;
        }
        out[k] += &x[m] * &a[i] * &b[j];
    }
    out
}

/// Symmetric, normalized classical Hochschild 2-cocycles
/// `aψ(b,c) - ψ(ab,c) + ψ(a,bc) - ψ(a,b)c = 0`.
pub fn classical_cocycles(t: &Table) -> Vec<Vec<Q>> {
    let unknowns = cochain_unknowns(t);
    let n = unknowns.len();
    let d = t.dim();
    let idx = |i, j, k| unknowns.iter().position(|&u| u == (i, j, k));
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (m, &(i, j, k)) in unknowns.iter().enumerate() {
        if i == t.unit || j == t.unit {
            let mut r = vec![q(0); n];
            r[m] = q(1);
            rows.push(r);
        }
        if i < j {
            let mut r = vec![q(0); n];
            r[m] = q(1);
            r[idx(j, i, k).expect("symmetric weights")] = q(-1);
            rows.push(r);
        }
    }
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let cols: Vec<Vec<Q>> = (0..n)
                    .map(|m| {
                        let mut x = vec![q(0); n];
                        x[m] = q(1);
                        let psi = |u: &[Q], v: &[Q]| bilinear(t, &unknowns, &x, u, v);
                        let (ea, eb, ec) = (t.unit_vec(a), t.unit_vec(b), t.unit_vec(c));
                        let t1 = t.product(&ea, &psi(&eb, &ec));
                        let t2 = psi(&t.product(&ea, &eb), &ec);
                        let t3 = psi(&ea, &t.product(&eb, &ec));
                        let t4 = t.product(&psi(&ea, &eb), &ec);
                        (0..d).map(|k| &t1[k] - &t2[k] + &t3[k] - &t4[k]).collect()
                    })
                    .collect();
                for k in 0..d {
                    rows.push((0..n).map(|m| cols[m][k].clone()).collect());
                }
            }
        }
    }
    nullspace(&rows, n)
}

/// `δg(a, b) = g(a)b - g(ab) + a g(b)` for every elementary unit-killing
/// weight-preserving `g`, in `cochain_unknowns` coordinates.
pub fn classical_coboundaries(t: &Table) -> Vec<Vec<Q>> {
    let maps = map_unknowns(t, true);
    let unknowns = cochain_unknowns(t);
    maps.iter()
        .enumerate()
        .map(|(j, _)| {
            let mut x = vec![q(0); maps.len()];
            x[j] = q(1);
            let g = |v: &[Q]| apply_map(t, &maps, &x, v);
            unknowns
                .iter()
                .map(|&(a, b, k)| {
                    let (ea, eb) = (t.unit_vec(a), t.unit_vec(b));
                    let v = t.product(&g(&ea), &eb);
                    let w = g(&t.product(&ea, &eb));
                    let u = t.product(&ea, &g(&eb));
                    &v[k] - &w[k] + &u[k]
                })
                .collect()
        })
        .collect()
}

pub fn scalar_to_q(s: &Scalar) -> Q {
    BigRational::new(s.numerator().clone(), s.denominator().clone())
}

fn label_index(space: &GradedSpace, t: &Table, i: usize) -> usize {
    space.index_of(t.labels[i]).expect("oracle labels match the preset")
}

/// The oracle coordinates of a vertex-algebra cochain, or `None` if it has
/// entries at modes other than `-1` (so it is not a classical cochain).
pub fn cochain_to_oracle(t: &Table, psi: &TwoCochain) -> Option<Vec<Q>> {
    let unknowns = cochain_unknowns(t);
    let mut x = vec![q(0); unknowns.len()];
    let s = psi.left();
    for (&(a, n, b), v) in psi.entries() {
        if n != -1 {
            return None;
        }
        for (c, coef) in v {
            let key = (
                t.labels.iter().position(|l| *l == s.label(a))?,
                t.labels.iter().position(|l| *l == s.label(b))?,
                t.labels.iter().position(|l| *l == psi.target().label(*c))?,
            );
            let m = unknowns.iter().position(|&u| u == key)?;
            x[m] += scalar_to_q(coef);
        }
    }
    Some(x)
}

/// Oracle coordinates of a degree-zero map given by its images.
pub fn map_to_oracle(t: &Table, space: &GradedSpace, image: impl Fn(usize) -> SparseVec<Scalar>) -> Vec<Q> {
    let unknowns = map_unknowns(t, false);
    let mut x = vec![q(0); unknowns.len()];
    for i in 0..t.dim() {
        for (k, c) in &image(label_index(space, t, i)) {
            let kk = t.labels.iter().position(|l| *l == space.label(*k)).unwrap();
            let m = unknowns.iter().position(|&u| u == (i, kk)).unwrap();
            x[m] += scalar_to_q(c);
        }
    }
    x
}

/// A random cochain over the probe basis: each coordinate is nonzero with
/// probability about one half, with small integer or half-integer values.
pub fn random_cochain(basis: &CochainBasis, rng: &mut ChaCha8Rng) -> TwoCochain {
    let mut x = SparseVec::new();
    for i in 0..basis.len() {
        if rng.gen_bool(0.5) {
            let num: i64 = rng.gen_range(-3..=3);
            let den: i64 = rng.gen_range(1..=2);
            x.add_term(i, &Scalar::new(num, den).unwrap());
        }
    }
    basis.from_coordinates(&x)
}

/// A random combination of the given cochains.
pub fn random_combination(items: &[TwoCochain], zero: &TwoCochain, rng: &mut ChaCha8Rng) -> TwoCochain {
    let mut acc = zero.clone();
    for it in items {
        let c = Scalar::from_int(rng.gen_range(-2..=2));
        acc = acc.add_scaled(it, &c).unwrap();
    }
    acc
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn one() -> Q {
    Q::one()
}

pub fn presets() -> Vec<(&'static str, VertexAlgebra<Scalar>, Table)> {
    use vertex_cohomology::presets::*;
    vec![
        ("trivial", trivial_algebra(), trivial_table()),
        ("dual-numbers", dual_numbers_algebra(), dual_table()),
        ("split-pair", split_pair_algebra(), split_table()),
        ("graded-nilpotent", graded_nilpotent_algebra(), graded_nilpotent_table()),
    ]
}
