//! Nilpotent Lie algebras given by structure constants, and the exact group
//! law in exponential coordinates of the first kind.
//!
//! The bracket is `[e_i, e_j] = Σ_k c[i][j][k] e_k`. For a nilpotent algebra of
//! step `s` the Baker–Campbell–Hausdorff series terminates after nested
//! brackets of depth `s`, so for `s <= 3` the product
//!
//! ```text
//! log(exp x · exp y) = x + y + ½[x,y] + (1/12)([x,[x,y]] + [y,[y,x]])
//! ```
//!
//! is exact. Steps above 3 are rejected by [`NilpotentGroup::new`].
//!
//! All indices in this module are zero-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tolerances::EXACT;
use crate::verdict::{Check, ValidationVerdict};

/// Largest nilpotency step for which the group law is implemented.
pub const MAX_STEP: usize = 3;

/// Entries below this are treated as zero when computing spans.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("structure constant tensor has {found} entries, expected {expected} (dim^3)")]
    Shape { expected: usize, found: usize },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("declared step must be positive")]
    ZeroStep,
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("nilpotency step {0} is not supported (maximum {MAX_STEP})")]
    UnsupportedStep(usize),
    #[error("algebra failed validation: {0}")]
    InvalidAlgebra(String),
    #[error(
        "basis is not adapted: [e{i}, e{j}] has a component along e{k}, outside the trailing \
         block of size {block}; change basis so that [g,g] is spanned by the last basis vectors"
    )]
    NonAdaptedBasis {
        i: usize,
        j: usize,
        k: usize,
        block: usize,
    },
}

/// A finite-dimensional real Lie algebra given by structure constants,
/// together with its declared nilpotency step.
///
/// Construction only checks shapes; use [`NilpotentAlgebra::validate`] for
/// the algebraic invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentAlgebra {
    dim: usize,
    step: usize,
    constants: Vec<f64>,
}

impl NilpotentAlgebra {
    /// `constants` is the dense tensor in `c[(i * dim + j) * dim + k]` order.
    pub fn new(dim: usize, step: usize, constants: Vec<f64>) -> Result<Self, LieError> {
        if dim == 0 {
            return Err(LieError::ZeroDimension);
        }
        if step == 0 {
            return Err(LieError::ZeroStep);
        }
        let expected = dim * dim * dim;
        if constants.len() != expected {
            return Err(LieError::Shape {
                expected,
                found: constants.len(),
            });
        }
        if constants.iter().any(|c| !c.is_finite()) {
            return Err(LieError::NonFinite);
        }
        Ok(NilpotentAlgebra {
            dim,
            step,
            constants,
        })
    }

    /// Sets exactly the listed entries `c[i][j][k] = value`; antisymmetric
    /// partners are not filled in.
    pub fn from_triples(
        dim: usize,
        step: usize,
        triples: &[(usize, usize, usize, f64)],
    ) -> Result<Self, LieError> {
        let mut algebra = Self::new(dim, step, vec![0.0; dim * dim * dim])?;
        for &(i, j, k, value) in triples {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(LieError::IndexOutOfRange { index, dim });
                }
            }
            if !value.is_finite() {
                return Err(LieError::NonFinite);
            }
            let at = algebra.offset(i, j, k);
            algebra.constants[at] = value;
        }
        Ok(algebra)
    }

    /// Like [`from_triples`](Self::from_triples) but each `(i, j, k, value)`
    /// also sets `c[j][i][k] = -value`.
    pub fn from_brackets(
        dim: usize,
        step: usize,
        brackets: &[(usize, usize, usize, f64)],
    ) -> Result<Self, LieError> {
        let mut triples = Vec::with_capacity(2 * brackets.len());
        for &(i, j, k, value) in brackets {
            triples.push((i, j, k, value));
            triples.push((j, i, k, -value));
        }
        Self::from_triples(dim, step, &triples)
    }

    /// Heisenberg algebra in `(x, y, s)` ordering: `[e0, e1] = e2`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, 2, &[(0, 1, 2, 1.0)]).expect("static algebra")
    }

    /// Free step-2 nilpotent algebra on three generators `e0, e1, e2` with
    /// `[e0,e1] = e3`, `[e0,e2] = e4`, `[e1,e2] = e5`.
    pub fn free_step2_rank3() -> Self {
        Self::from_brackets(6, 2, &[(0, 1, 3, 1.0), (0, 2, 4, 1.0), (1, 2, 5, 1.0)])
            .expect("static algebra")
    }

    /// Four-dimensional filiform algebra: `[e0,e1] = e2`, `[e0,e2] = e3` (step 3).
    pub fn filiform4() -> Self {
        Self::from_brackets(4, 3, &[(0, 1, 2, 1.0), (0, 2, 3, 1.0)]).expect("static algebra")
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, 1, vec![0.0; dim * dim * dim]).expect("dim must be positive")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> usize {
        self.step
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[self.offset(i, j, k)]
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    /// `[x, y] = Σ_{i,j} x_i y_j c[i][j][·]`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>, LieError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let w = xi * yj;
                if w == 0.0 {
                    continue;
                }
                let row = &self.constants[self.offset(i, j, 0)..self.offset(i, j, 0) + n];
                for (o, &c) in out.iter_mut().zip(row) {
                    *o += w * c;
                }
            }
        }
        out
    }

    fn check_len(&self, v: &[f64]) -> Result<(), LieError> {
        if v.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn basis_vector(&self, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.dim];
        e[i] = 1.0;
        e
    }

    /// Dimensions of `g = g_1 ⊇ g_2 ⊇ …` where `g_{k+1} = [g, g_k]`, stopping at
    /// the first zero term or after `dim + 1` terms (non-nilpotent input).
    pub fn lower_central_series(&self) -> Vec<usize> {
        let mut dims = Vec::new();
        let mut term: Vec<Vec<f64>> = (0..self.dim).map(|i| self.basis_vector(i)).collect();
        while !term.is_empty() && dims.len() <= self.dim {
            dims.push(term.len());
            term = self.next_central_term(&term);
        }
        if term.is_empty() {
            dims.push(0);
        }
        dims
    }

    /// Orthonormal basis of `[g, span(term)]`.
    fn next_central_term(&self, term: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut spanning = Vec::new();
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            for b in term {
                spanning.push(self.bracket_unchecked(&e, b));
            }
        }
        orthonormal_span(spanning)
    }

    /// Nilpotency step computed from the constants, or `None` when the lower
    /// central series does not reach zero.
    pub fn computed_step(&self) -> Option<usize> {
        let dims = self.lower_central_series();
        match dims.last() {
            Some(0) => Some(dims.len() - 1),
            _ => None,
        }
    }

    /// Checks antisymmetry, the Jacobi identity and the declared step.
    /// Each check passes iff its residual is at most `1e-12`.
    pub fn validate(&self) -> ValidationVerdict {
        let n = self.dim;
        let mut verdict = ValidationVerdict::new();

        let mut antisym = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    antisym = antisym.max((self.constant(i, j, k) + self.constant(j, i, k)).abs());
                }
            }
        }
        verdict.push(Check::new("antisymmetry", antisym, EXACT));
        verdict.push(Check::new("jacobi", self.jacobi_residual(), EXACT));

        // [g, g_step] must vanish: bracket every basis vector with the
        // step-th term of the lower central series.
        let mut term: Vec<Vec<f64>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for _ in 1..self.step {
            term = self.next_central_term(&term);
        }
        let mut nil = 0.0_f64;
        for i in 0..n {
            let e = self.basis_vector(i);
            for b in &term {
                for v in self.bracket_unchecked(&e, b) {
                    nil = nil.max(v.abs());
                }
            }
        }
        verdict.push(Check::new("nilpotency", nil, EXACT));

        let step_residual = match self.computed_step() {
            Some(s) => (s as f64 - self.step as f64).abs(),
            None => f64::INFINITY,
        };
        verdict.push(Check::new("step", step_residual, EXACT));
        verdict
    }

    /// Max over `i, j, l, k` of
    /// `|Σ_m c[i][j][m] c[m][l][k] + c[j][l][m] c[m][i][k] + c[l][i][m] c[m][j][k]|`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        let mut acc = 0.0;
                        for m in 0..n {
                            acc += self.constant(i, j, m) * self.constant(m, l, k)
                                + self.constant(j, l, m) * self.constant(m, i, k)
                                + self.constant(l, i, m) * self.constant(m, j, k);
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
        worst
    }

    /// Indices of the basis vectors spanning `[g, g]`.
    ///
    /// The basis must be adapted: `[g, g]` has to be exactly the span of the
    /// last `r` basis vectors, `r` being its dimension.
    pub fn commutator_subalgebra(&self) -> Result<Vec<usize>, LieError> {
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                rows.push(self.constants[self.offset(i, j, 0)..self.offset(i, j, 0) + n].to_vec());
            }
        }
        let rank = orthonormal_span(rows).len();
        let first = n - rank;
        for i in 0..n {
            for j in 0..n {
                for k in 0..first {
                    if self.constant(i, j, k).abs() > EXACT {
                        return Err(LieError::NonAdaptedBasis {
                            i,
                            j,
                            k,
                            block: rank,
                        });
                    }
                }
            }
        }
        Ok((first..n).collect())
    }
}

/// Modified Gram–Schmidt; returns an orthonormal basis of the span.
fn orthonormal_span(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let scale = vectors
        .iter()
        .map(|v| norm2(v))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        // two passes for stability
        for _ in 0..2 {
            for b in &basis {
                let proj: f64 = v.iter().zip(b).map(|(a, b)| a * b).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = norm2(&v);
        if norm > RANK_TOL * scale {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A group element in exponential coordinates of the first kind.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint(Vec<f64>);

impl GroupPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, LieError> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(LieError::NonFinite);
        }
        Ok(GroupPoint(coords))
    }

    pub fn identity(dim: usize) -> Self {
        GroupPoint(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// In exponential coordinates of the first kind the inverse is negation.
    pub fn inverse(&self) -> GroupPoint {
        GroupPoint(self.0.iter().map(|c| -c).collect())
    }

    /// Largest absolute coordinate difference.
    pub fn distance_max(&self, other: &GroupPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        GroupPoint(coords)
    }
}

/// A validated nilpotent algebra of step at most 3, viewed as a group.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentGroup {
    algebra: NilpotentAlgebra,
}

impl NilpotentGroup {
    pub fn new(algebra: NilpotentAlgebra) -> Result<Self, LieError> {
        let verdict = algebra.validate();
        if !verdict.passed() {
            return Err(LieError::InvalidAlgebra(verdict.failures().join(", ")));
        }
        if algebra.step() > MAX_STEP {
            return Err(LieError::UnsupportedStep(algebra.step()));
        }
        Ok(NilpotentGroup { algebra })
    }

    pub fn heisenberg() -> Self {
        Self::new(NilpotentAlgebra::heisenberg()).expect("valid algebra")
    }

    pub fn algebra(&self) -> &NilpotentAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint::identity(self.dim())
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<GroupPoint, LieError> {
        self.algebra.check_len(&coords)?;
        GroupPoint::new(coords)
    }

    /// `g1 · g2` via the truncated BCH series.
    pub fn multiply(&self, g1: &GroupPoint, g2: &GroupPoint) -> Result<GroupPoint, LieError> {
        self.algebra.check_len(g1.coords())?;
        self.algebra.check_len(g2.coords())?;
        Ok(GroupPoint(self.bch(g1.coords(), g2.coords())))
    }

    pub fn inverse(&self, g: &GroupPoint) -> GroupPoint {
        g.inverse()
    }

    /// `a⁻¹ · g · a`.
    pub fn conjugate(&self, a: &GroupPoint, g: &GroupPoint) -> Result<GroupPoint, LieError> {
        let left = self.multiply(&a.inverse(), g)?;
        self.multiply(&left, a)
    }

    pub(crate) fn bch(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let a = &self.algebra;
        let mut z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        if a.step() < 2 {
            return z;
        }
        let xy = a.bracket_unchecked(x, y);
        for (zi, v) in z.iter_mut().zip(&xy) {
            *zi += 0.5 * v;
        }
        if a.step() < 3 {
            return z;
        }
        let x_xy = a.bracket_unchecked(x, &xy);
        let y_xy = a.bracket_unchecked(y, &xy);
        // [y,[y,x]] = -[y,[x,y]]
        for ((zi, p), q) in z.iter_mut().zip(&x_xy).zip(&y_xy) {
            *zi += (p - q) / 12.0;
        }
        z
    }

    /// Max associativity residual over `samples` seeded triples with
    /// coordinates uniform in `[-scale, scale]`.
    pub fn associativity_residual(&self, samples: usize, scale: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let g: Vec<GroupPoint> = (0..3).map(|_| random_point(&mut rng, self.dim(), scale)).collect();
            let left = self.bch(&self.bch(g[0].coords(), g[1].coords()), g[2].coords());
            let right = self.bch(g[0].coords(), &self.bch(g[1].coords(), g[2].coords()));
            for (l, r) in left.iter().zip(&right) {
                worst = worst.max((l - r).abs());
            }
        }
        worst
    }
}

pub(crate) fn random_point<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> GroupPoint {
    GroupPoint((0..dim).map(|_| rng.random_range(-scale..=scale)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(v: &[f64]) -> GroupPoint {
        GroupPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn heisenberg_validates_with_step_two() {
        let a = NilpotentAlgebra::heisenberg();
        let v = a.validate();
        assert!(v.passed(), "{v}");
        assert_eq!(a.computed_step(), Some(2));
        assert_eq!(a.lower_central_series(), vec![3, 1, 0]);
    }

    #[test]
    fn missing_partner_fails_antisymmetry() {
        // c[1][2][3] = 1 and c[2][1][3] = 1 in one-based terms
        let a = NilpotentAlgebra::from_triples(3, 2, &[(0, 1, 2, 1.0), (1, 0, 2, 1.0)]).unwrap();
        let v = a.validate();
        assert!(!v.get("antisymmetry").unwrap().pass);
        assert_eq!(v.get("antisymmetry").unwrap().residual, 2.0);
    }

    #[test]
    fn wrong_declared_step_fails() {
        let a = NilpotentAlgebra::from_brackets(3, 3, &[(0, 1, 2, 1.0)]).unwrap();
        let v = a.validate();
        assert!(v.get("nilpotency").unwrap().pass);
        assert!(!v.get("step").unwrap().pass);
        let a = NilpotentAlgebra::from_brackets(3, 1, &[(0, 1, 2, 1.0)]).unwrap();
        assert!(!a.validate().get("nilpotency").unwrap().pass);
    }

    #[test]
    fn non_nilpotent_algebra_is_rejected() {
        // so(3): [e0,e1]=e2, [e1,e2]=e0, [e2,e0]=e1
        let a = NilpotentAlgebra::from_brackets(
            3,
            2,
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
        )
        .unwrap();
        assert_eq!(a.computed_step(), None);
        let v = a.validate();
        assert!(v.get("jacobi").unwrap().pass);
        assert!(!v.passed());
        assert!(matches!(NilpotentGroup::new(a), Err(LieError::InvalidAlgebra(_))));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(
            NilpotentAlgebra::new(2, 1, vec![0.0; 7]),
            Err(LieError::Shape {
                expected: 8,
                found: 7
            })
        );
        assert!(matches!(
            NilpotentAlgebra::from_triples(3, 1, &[(0, 1, 3, 1.0)]),
            Err(LieError::IndexOutOfRange { index: 3, dim: 3 })
        ));
        let a = NilpotentAlgebra::heisenberg();
        assert!(a.bracket(&[1.0, 0.0], &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn heisenberg_bracket_values() {
        let a = NilpotentAlgebra::heisenberg();
        assert_eq!(a.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        // 1*4 - 2*3 = -2
        assert_eq!(a.bracket(&[1.0, 2.0, 5.0], &[3.0, 4.0, 7.0]).unwrap(), vec![0.0, 0.0, -2.0]);
        assert_eq!(a.bracket(&[0.3, -1.7, 2.0], &[0.3, -1.7, 2.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn heisenberg_product_matches_matrix_law() {
        let g = NilpotentGroup::heisenberg();
        let p = g.multiply(&gp(&[1.0, 0.0, 0.0]), &gp(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(p.coords(), &[1.0, 1.0, 0.5]);
        let id = g.identity();
        let q = gp(&[0.4, -2.0, 3.5]);
        assert_eq!(g.multiply(&id, &q).unwrap(), q);
        assert_eq!(g.multiply(&q, &q.inverse()).unwrap(), id);
        assert_eq!(p.inverse().coords(), &[-1.0, -1.0, -0.5]);
    }

    #[test]
    fn step_three_group_is_associative() {
        let g = NilpotentGroup::new(NilpotentAlgebra::filiform4()).unwrap();
        assert!(g.associativity_residual(200, 1.0, 3) <= 1e-12);
    }

    #[test]
    fn step_four_is_unsupported() {
        let a = NilpotentAlgebra::from_brackets(
            5,
            4,
            &[(0, 1, 2, 1.0), (0, 2, 3, 1.0), (0, 3, 4, 1.0)],
        )
        .unwrap();
        assert!(a.validate().passed());
        assert_eq!(NilpotentGroup::new(a), Err(LieError::UnsupportedStep(4)));
    }

    #[test]
    fn commutator_subalgebra_indices() {
        assert_eq!(NilpotentAlgebra::heisenberg().commutator_subalgebra().unwrap(), vec![2]);
        assert!(NilpotentAlgebra::abelian(4).commutator_subalgebra().unwrap().is_empty());
        assert_eq!(
            NilpotentAlgebra::free_step2_rank3().commutator_subalgebra().unwrap(),
            vec![3, 4, 5]
        );
        assert_eq!(NilpotentAlgebra::filiform4().commutator_subalgebra().unwrap(), vec![2, 3]);
    }

    #[test]
    fn non_adapted_basis_is_reported() {
        // Heisenberg with the central element listed first.
        let a = NilpotentAlgebra::from_brackets(3, 2, &[(1, 2, 0, 1.0)]).unwrap();
        assert!(a.validate().passed());
        assert!(matches!(
            a.commutator_subalgebra(),
            Err(LieError::NonAdaptedBasis { k: 0, .. })
        ));
    }
}
