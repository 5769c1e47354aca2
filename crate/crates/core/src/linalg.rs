//! Sparse exact linear algebra over [`Scalar`].
//!
//! Rows are sparse vectors indexed by unknown position. Elimination is
//! Gauss-Jordan with the pivot taken at the first nonzero unknown, so the
//! reduced form is canonical and identical across runs. Every row carries a
//! provenance label naming the constraint it came from; a reduced row keeps
//! the label of the row that introduced its pivot.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, SparseVec};

pub type Row = SparseVec<Scalar>;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    unknowns: Vec<String>,
    rows: Vec<Row>,
    labels: Vec<String>,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<String>) -> Self {
        LinearSystem {
            unknowns,
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// A system over `n` anonymous unknowns `x0 .. x{n-1}`.
    pub fn with_unknowns(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("x{i}")).collect())
    }

    /// Dense integer rows, for small hand-written systems.
    pub fn from_dense(num_unknowns: usize, rows: &[&[i64]]) -> Self {
        let mut sys = Self::with_unknowns(num_unknowns);
        for (k, r) in rows.iter().enumerate() {
            let row = r
                .iter()
                .enumerate()
                .map(|(i, &c)| (i, Scalar::from_int(c)))
                .collect();
            sys.push_row(row, format!("r{k}"))
                .expect("dense row wider than the unknown set");
        }
        sys
    }

    pub fn push_row(&mut self, row: Row, label: impl Into<String>) -> Result<()> {
        if let Some(bad) = row.indices().find(|&i| i >= self.unknowns.len()) {
            return Err(Error::SpaceMismatch(format!(
                "row references unknown {bad} but only {} are registered",
                self.unknowns.len()
            )));
        }
        self.rows.push(row);
        self.labels.push(label.into());
        Ok(())
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for r in &self.rows {
            ech.insert(r.clone(), "");
        }
        ech.rank()
    }
}

/// An incrementally maintained reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    // pivot column -> (row normalized to 1 at the pivot, provenance)
    pivots: BTreeMap<usize, (Row, String)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, mut row: Row) -> Row {
        let hits: Vec<usize> = row
            .indices()
            .filter(|c| self.pivots.contains_key(c))
            .collect();
        for c in hits {
            let factor = row.get(c);
            if factor.is_zero() {
                continue;
            }
            let (p, _) = &self.pivots[&c];
            row.add_scaled(p, &-factor);
        }
        row
    }

    pub fn contains(&self, row: &Row) -> bool {
        self.reduce(row.clone()).is_zero()
    }

    /// Adds a row; returns `false` when it was already in the span.
    pub fn insert(&mut self, row: Row, label: &str) -> bool {
        let row = self.reduce(row);
        let Some(lead) = row.leading_index() else {
            return false;
        };
        let inv = row.get(lead).recip().expect("leading entry is nonzero");
        let row = row.scaled(&inv);
        for (p, _) in self.pivots.values_mut() {
            let factor = p.get(lead);
            if !factor.is_zero() {
                p.add_scaled(&row, &-factor);
            }
        }
        self.pivots.insert(lead, (row, label.to_string()));
        true
    }

    fn into_rows(self) -> impl Iterator<Item = (usize, Row, String)> {
        self.pivots.into_iter().map(|(c, (r, l))| (c, r, l))
    }
}

/// Reduced row echelon form. Zero rows are dropped; the row space is kept.
pub fn rref(system: &LinearSystem) -> LinearSystem {
    let mut ech = Echelon::new();
    for (row, label) in system.rows.iter().zip(&system.labels) {
        ech.insert(row.clone(), label);
    }
    let mut out = LinearSystem::new(system.unknowns.clone());
    for (_, row, label) in ech.into_rows() {
        out.rows.push(row);
        out.labels.push(label);
    }
    out
}

/// A basis of the solution space of the homogeneous system, one vector per
/// free unknown (that unknown set to 1, the other free unknowns to 0).
pub fn kernel_basis(system: &LinearSystem) -> Vec<Row> {
    let reduced = rref(system);
    let pivot_of: BTreeMap<usize, &Row> = reduced
        .rows
        .iter()
        .map(|r| (r.leading_index().expect("rref rows are nonzero"), r))
        .collect();
    (0..system.num_unknowns())
        .filter(|c| !pivot_of.contains_key(c))
        .map(|free| {
            let mut v = Row::unit(free);
            for (&p, row) in &pivot_of {
                let c = row.get(free);
                if !c.is_zero() {
                    v.add_term(p, &-c);
                }
            }
            v
        })
        .collect()
}

/// One solution of `system · x = rhs`, or `None` when inconsistent.
///
/// Panics if `rhs.len()` differs from the number of rows.
pub fn solve_affine(system: &LinearSystem, rhs: &[Scalar]) -> Option<Row> {
    assert_eq!(
        rhs.len(),
        system.num_rows(),
        "right-hand side length must equal the number of rows"
    );
    let n = system.num_unknowns();
    let mut ech = Echelon::new();
    for (row, b) in system.rows.iter().zip(rhs) {
        let mut aug = row.clone();
        aug.add_term(n, b);
        ech.insert(aug, "");
    }
    let mut x = Row::new();
    for (pivot, row, _) in ech.into_rows() {
        if pivot == n {
            return None;
        }
        x.add_term(pivot, &row.get(n));
    }
    Some(x)
}

pub fn rank(vectors: &[Row]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v.clone(), "");
    }
    ech.rank()
}

/// `dim span(space) - dim span(subspace)`, after checking containment.
pub fn quotient_dim(space: &[Row], subspace: &[Row]) -> Result<usize> {
    let mut ech = Echelon::new();
    for v in space {
        ech.insert(v.clone(), "");
    }
    if subspace.iter().any(|v| !ech.contains(v)) {
        return Err(Error::SubspaceNotContained);
    }
    Ok(ech.rank() - rank(subspace))
}

/// Evaluates every row of the system at `x`.
pub fn residual(system: &LinearSystem, x: &Row) -> Vec<Scalar> {
    system
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .fold(Scalar::zero(), |acc, (i, c)| acc + c * &x.get(*i))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(c: &[i64]) -> Row {
        c.iter()
            .enumerate()
            .map(|(i, &x)| (i, Scalar::from_int(x)))
            .collect()
    }

    fn dense(sys: &LinearSystem) -> Vec<Vec<Scalar>> {
        sys.rows()
            .iter()
            .map(|r| (0..sys.num_unknowns()).map(|i| r.get(i)).collect())
            .collect()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn rref_proportional_rows() {
        let s = LinearSystem::from_dense(2, &[&[1, 2], &[2, 4]]);
        assert_eq!(dense(&rref(&s)), ints(&[&[1, 2]]));
    }

    #[test]
    fn rref_empty() {
        let s = LinearSystem::with_unknowns(3);
        assert_eq!(rref(&s).num_rows(), 0);
    }

    #[test]
    fn rref_permutation() {
        let s = LinearSystem::from_dense(2, &[&[0, 1], &[1, 0]]);
        assert_eq!(dense(&rref(&s)), ints(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn rref_keeps_provenance_of_pivot_rows() {
        let mut s = LinearSystem::with_unknowns(2);
        s.push_row(row(&[0, 3]), "second").unwrap();
        s.push_row(row(&[2, 0]), "first").unwrap();
        let r = rref(&s);
        assert_eq!(r.labels(), &["first".to_string(), "second".to_string()]);
    }

    #[test]
    fn push_row_rejects_unregistered_unknowns() {
        let mut s = LinearSystem::with_unknowns(2);
        assert!(s.push_row(Row::unit(2), "bad").is_err());
    }

    #[test]
    fn kernel_examples() {
        let s = LinearSystem::from_dense(2, &[&[1, 2]]);
        let k = kernel_basis(&s);
        assert_eq!(k, vec![row(&[-2, 1])]);

        let id = LinearSystem::from_dense(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(kernel_basis(&id).is_empty());

        let zero = LinearSystem::from_dense(3, &[&[0, 0, 0]]);
        assert_eq!(kernel_basis(&zero).len(), 3);
    }

    #[test]
    fn solve_examples() {
        let s = LinearSystem::from_dense(2, &[&[1, 1], &[1, -1]]);
        let x = solve_affine(&s, &[Scalar::from_int(2), Scalar::zero()]).unwrap();
        assert_eq!(x, row(&[1, 1]));

        let s = LinearSystem::from_dense(1, &[&[0]]);
        assert!(solve_affine(&s, &[Scalar::one()]).is_none());

        let s = LinearSystem::with_unknowns(3);
        assert_eq!(solve_affine(&s, &[]).unwrap(), Row::new());
    }

    #[test]
    fn quotient_examples() {
        let e1 = Row::unit(0);
        let e2 = Row::unit(1);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], std::slice::from_ref(&e1)).unwrap(), 1);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap(), 0);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[]).unwrap(), 2);
        assert!(matches!(
            quotient_dim(&[e1], &[e2]),
            Err(Error::SubspaceNotContained)
        ));
    }

    fn system_strategy() -> impl Strategy<Value = LinearSystem> {
        (1usize..6, 0usize..6).prop_flat_map(|(n, m)| {
            proptest::collection::vec(
                proptest::collection::vec((-3i64..=3, 1i64..=3), n),
                m,
            )
            .prop_map(move |rows| {
                let mut s = LinearSystem::with_unknowns(n);
                for (k, r) in rows.into_iter().enumerate() {
                    let v = r
                        .into_iter()
                        .enumerate()
                        .map(|(i, (a, b))| (i, Scalar::new(a, b).unwrap()))
                        .collect();
                    s.push_row(v, format!("r{k}")).unwrap();
                }
                s
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(s in system_strategy()) {
            let once = rref(&s);
            prop_assert_eq!(rref(&once), once);
        }

        #[test]
        fn rank_nullity(s in system_strategy()) {
            prop_assert_eq!(s.rank() + kernel_basis(&s).len(), s.num_unknowns());
        }

        #[test]
        fn kernel_vectors_are_exact_solutions(s in system_strategy()) {
            for k in kernel_basis(&s) {
                prop_assert!(residual(&s, &k).iter().all(|r| r.is_zero()));
            }
        }

        #[test]
        fn rref_preserves_row_space(s in system_strategy()) {
            let r = rref(&s);
            let mut both = s.rows().to_vec();
            both.extend(r.rows().iter().cloned());
            prop_assert_eq!(rank(&both), s.rank());
            prop_assert_eq!(r.rank(), s.rank());
        }

        #[test]
        fn consistent_solutions_satisfy_system(s in system_strategy(), x in proptest::collection::vec(-3i64..=3, 6)) {
            let x: Row = x.into_iter().take(s.num_unknowns()).enumerate().map(|(i, c)| (i, Scalar::from_int(c))).collect();
            let rhs = residual(&s, &x);
            let y = solve_affine(&s, &rhs).expect("consistent by construction");
            prop_assert_eq!(residual(&s, &y), rhs);
        }
    }
}
