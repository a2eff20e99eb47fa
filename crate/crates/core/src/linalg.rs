//! Dense complex linear algebra for single-qubit and two-qubit operators.
//!
//! Matrices are stored inline (no heap allocation) and are always either
//! 2×2 or 4×4. Two-qubit operators use qubit A as the left tensor factor,
//! so basis index `2*a + b` labels `|a⟩ ⊗ |b⟩`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Elementwise tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Negative eigenvalues down to `-STATE_CLAMP` are treated as rounding noise.
pub const STATE_CLAMP: f64 = 1e-10;
/// Tolerance on `trace == 1` for density matrices.
pub const TRACE_TOL: f64 = 1e-10;

const JACOBI_OFFDIAG_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 50;

const MAX_DIM: usize = 4;
const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

const fn pauli(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> ComplexMatrix {
    let mut data = [C0; MAX_DIM * MAX_DIM];
    data[0] = a;
    data[1] = b;
    data[2] = c;
    data[3] = d;
    ComplexMatrix { dim: 2, data }
}

pub const IDENTITY_2: ComplexMatrix = pauli(C1, C0, C0, C1);
pub const SIGMA_X: ComplexMatrix = pauli(C0, C1, C1, C0);
pub const SIGMA_Y: ComplexMatrix = pauli(C0, Complex64::new(0.0, -1.0), CI, C0);
pub const SIGMA_Z: ComplexMatrix = pauli(C1, C0, C0, Complex64::new(-1.0, 0.0));

/// Which qubit of a two-qubit operator to keep after a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if dim == 2 || dim == 4 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "matrix dimension must be 2 or 4, got {dim}"
            )))
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self {
            dim,
            data: [C0; MAX_DIM * MAX_DIM],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = C1;
        }
        Ok(m)
    }

    /// Identity scaled to unit trace, the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self::identity(dim)?.scale(1.0 / dim as f64))
    }

    pub fn from_fn<F>(dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_fn(dim, |r, c| entries[r * dim + c])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        Self::from_fn(dim, |r, c| {
            if r == c {
                Complex64::new(diag[r], 0.0)
            } else {
                C0
            }
        })
    }

    /// Rank-1 operator `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Result<Self> {
        Self::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn dagger(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(r, c)] = self[(c, r)].conj();
            }
        }
        out
    }

    fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        let mut out = *self;
        for z in out.data[..self.dim * self.dim].iter_mut() {
            *z = f(*z);
        }
        out
    }

    /// Kronecker product of two single-qubit operators.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 || other.dim != 2 {
            return Err(Error::InvalidInput(
                "kron is defined for two 2x2 factors".into(),
            ));
        }
        Self::from_fn(4, |r, c| self[(r / 2, c / 2)] * other[(r % 2, c % 2)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Returns the `(i, j)` pair with the largest Hermiticity defect when it
    /// exceeds `tol`.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        let mut worst = (0, 0, 0.0_f64);
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst.2 {
                    worst = (r, c, d);
                }
            }
        }
        if worst.2 > tol {
            Err(Error::NonHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.check_hermitian(HERMITIAN_TOL).is_ok()
    }

    /// `(M + M†)/2`, removing rounding-level anti-Hermitian noise.
    pub fn hermitian_part(&self) -> Self {
        let d = self.dagger();
        let mut out = *self;
        for (o, x) in out.data.iter_mut().zip(d.data.iter()) {
            *o = (*o + x) * 0.5;
        }
        out
    }

    /// True when the only nonzero entries sit on the diagonal and the
    /// anti-diagonal of a 4×4 matrix.
    pub fn is_x_form(&self) -> bool {
        self.dim == 4 && (0..4).all(|r| (0..4).all(|c| r == c || r + c == 3 || self[(r, c)] == C0))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.dim && c < self.dim, "index ({r},{c}) out of range");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.dim && c < self.dim, "index ({r},{c}) out of range");
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: [C0; MAX_DIM * MAX_DIM],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == C0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        let mut out = *self;
        for (o, x) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += x;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        let mut out = *self;
        for (o, x) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o -= x;
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Real eigenvalues in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueList(Vec<f64>);

impl EigenvalueList {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Eigenvalues together with a unitary whose columns are the matching
/// eigenvectors, so that `m = V diag(values) V†`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: EigenvalueList,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V diag(f(λ)) V†`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let v = &self.vectors;
        let n = v.dim;
        let fl: Vec<f64> = self.values.values().iter().map(|&l| f(l)).collect();
        let mut out = *v;
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = (0..n).map(|k| v[(r, k)] * fl[k] * v[(c, k)].conj()).sum();
            }
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `m[p][q]` with a
/// diagonal unitary, then zeroes it with a real plane rotation. A pivot is
/// negligible once `|m[p][q]| <= 1e-13 * min(1, sqrt(|m[p][p] m[q][q]|))`;
/// sweeps stop when every pivot is negligible or after 50 sweeps. The
/// relative form keeps small eigenvalues of nearly pure states accurate.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.check_hermitian(HERMITIAN_TOL)?;
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n)?;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                if !negligible(&a, p, q) {
                    rotate(&mut a, &mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])])?;
    Ok(HermitianEigen {
        values: EigenvalueList(values),
        vectors,
    })
}

fn negligible(a: &ComplexMatrix, p: usize, q: usize) -> bool {
    let scale = (a[(p, p)].re * a[(q, q)].re).abs().sqrt().min(1.0);
    a[(p, q)].norm() <= JACOBI_OFFDIAG_TOL * scale
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    // Phase step: D = diag(.., conj(e) at q, ..) makes a[p][q] real and positive.
    let e = apq / g;
    let ec = e.conj();
    for k in 0..n {
        a[(k, q)] *= ec;
        v[(k, q)] *= ec;
    }
    for k in 0..n {
        a[(q, k)] *= e;
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<EigenvalueList> {
    Ok(hermitian_eigen(m)?.values)
}

/// Clamps eigenvalues in `[-1e-10, 0)` to zero; anything lower is an error.
pub fn clamp_state_spectrum(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&l| {
            if l < -STATE_CLAMP {
                Err(Error::NotAState(l))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// `-Σ λ log2 λ` with `0 log 0 = 0`.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// Binary entropy `H2(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    entropy_of_spectrum(&[x, 1.0 - x])
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidInput(format!(
            "density matrix trace is {tr}, expected 1"
        )));
    }
    let ev = hermitian_eigenvalues(m)?;
    Ok(entropy_of_spectrum(&clamp_state_spectrum(ev.values())?))
}

/// Reduced operator of a two-qubit operator on the kept subsystem.
pub fn partial_trace(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::InvalidInput(format!(
            "partial trace needs a 4x4 two-qubit operator, got {}x{}",
            m.dim, m.dim
        )));
    }
    ComplexMatrix::from_fn(2, |i, j| match keep {
        Subsystem::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
        Subsystem::B => m[(i, j)] + m[(2 + i, 2 + j)],
    })
}

/// Checks that `m` is a density matrix: Hermitian, unit trace and positive
/// semidefinite up to the clamping band.
pub fn validate_state(m: &ComplexMatrix) -> Result<()> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidInput(format!(
            "density matrix trace is {tr}, expected 1"
        )));
    }
    let ev = hermitian_eigenvalues(m)?;
    clamp_state_spectrum(ev.values())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn singlet() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::projector(&[c(0.0), c(h), c(-h), c(0.0)]).unwrap()
    }

    #[test]
    fn rejects_unsupported_dimensions() {
        assert!(ComplexMatrix::zeros(3).is_err());
        assert!(ComplexMatrix::zeros(8).is_err());
    }

    #[test]
    fn eigenvalues_of_maximally_mixed() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::maximally_mixed(4).unwrap()).unwrap();
        assert_eq!(ev.values(), &[0.25; 4]);
    }

    #[test]
    fn eigenvalues_of_diagonal_are_sorted() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
            .unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        let expect = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in ev.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenvalues_of_thermal_x_block() {
        // central block of the R=1.25, B=0, KT=0.2 matrix
        let (a11, a22, a23) = (0.039893, 0.460107, -0.380322);
        let mut m = ComplexMatrix::from_real_diagonal(&[a11, a22, a22, a11]).unwrap();
        m[(1, 2)] = c(a23);
        m[(2, 1)] = c(a23);
        let ev = hermitian_eigenvalues(&m).unwrap();
        let v = ev.values();
        assert!((v[0] - 0.039893).abs() < 1e-12);
        assert!((v[1] - 0.039893).abs() < 1e-12);
        assert!((v[2] - 0.079785).abs() < 1e-5);
        assert!((v[3] - 0.840429).abs() < 1e-5);
    }

    #[test]
    fn eigen_reconstructs_complex_matrix() {
        let m = ComplexMatrix::from_row_major(
            2,
            &[
                c(0.7),
                Complex64::new(0.1, -0.3),
                Complex64::new(0.1, 0.3),
                c(0.3),
            ],
        )
        .unwrap();
        let eig = hermitian_eigen(&m).unwrap();
        let back = eig.apply(|l| l);
        assert!(back.max_abs_diff(&m) < 1e-14);
        let disc = ((0.7f64 - 0.3).powi(2) + 4.0 * 0.1).sqrt();
        assert!((eig.values.values()[0] - (1.0 - disc) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn resolves_tiny_blocks() {
        let (d, o) = (1.2e-7, -1.19e-7);
        let mut m = ComplexMatrix::from_real_diagonal(&[5e-20, d, d, 1.0 - 2.0 * d]).unwrap();
        m[(1, 2)] = c(o);
        m[(2, 1)] = c(o);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev.values()[1] - (d + o)).abs() < 1e-22);
        assert!((ev.values()[2] - (d - o)).abs() < 1e-20);
    }

    #[test]
    fn non_hermitian_input_names_the_pair() {
        let mut m = ComplexMatrix::identity(4).unwrap();
        m[(1, 3)] = c(0.5);
        match hermitian_eigenvalues(&m) {
            Err(Error::NonHermitian { row, col, .. }) => assert_eq!((row, col), (1, 3)),
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&singlet()).unwrap().abs() < 1e-12);
        let mixed = von_neumann_entropy(&ComplexMatrix::maximally_mixed(4).unwrap()).unwrap();
        assert!((mixed - 2.0).abs() < 1e-12);
        let m = ComplexMatrix::from_real_diagonal(&[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
            .unwrap();
        let direct = 6f64.log2() / 3.0 + 2.0 * 3f64.log2() / 3.0;
        let s = von_neumann_entropy(&m).unwrap();
        assert!((s - direct).abs() < 1e-12);
        assert!((s - 1.918296).abs() < 1e-5);
    }

    #[test]
    fn entropy_clamps_tiny_negatives_and_rejects_large_ones() {
        let ok = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]).unwrap();
        assert!(von_neumann_entropy(&ok).unwrap().abs() < 1e-9);
        let bad = ComplexMatrix::from_real_diagonal(&[1.1, -0.1]).unwrap();
        assert!(matches!(
            von_neumann_entropy(&bad),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn entropy_is_permutation_invariant() {
        let a = ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[0.3, 0.1, 0.4, 0.2]).unwrap();
        assert_eq!(
            von_neumann_entropy(&a).unwrap(),
            von_neumann_entropy(&b).unwrap()
        );
    }

    #[test]
    fn partial_trace_examples() {
        let half = ComplexMatrix::maximally_mixed(2).unwrap();
        let mixed = ComplexMatrix::maximally_mixed(4).unwrap();
        assert_eq!(partial_trace(&mixed, Subsystem::A).unwrap(), half);
        assert!(
            partial_trace(&singlet(), Subsystem::B)
                .unwrap()
                .max_abs_diff(&half)
                < 1e-15
        );
        assert!(partial_trace(&half, Subsystem::A).is_err());
    }

    #[test]
    fn partial_trace_keeps_correct_factor() {
        let a = ComplexMatrix::from_real_diagonal(&[0.9, 0.1]).unwrap();
        let b = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]).unwrap();
        let ab = a.kron(&b).unwrap();
        assert!(partial_trace(&ab, Subsystem::A).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&ab, Subsystem::B).unwrap().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn pauli_algebra() {
        let xy = &SIGMA_X * &SIGMA_Y;
        assert_eq!(xy, SIGMA_Z.map(|z| z * CI));
        for s in [SIGMA_X, SIGMA_Y, SIGMA_Z] {
            assert_eq!(&s * &s, IDENTITY_2);
            assert!(s.is_hermitian());
        }
    }
}
