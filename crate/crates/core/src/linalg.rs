//! Dense complex linear algebra on 2×2 and 4×4 matrices.
//!
//! Everything here is a `Copy` value type. The dimension is a const
//! parameter restricted to 2 or 4; mixing dimensions is a type error, so the
//! only runtime failures left are non-finite input, non-Hermitian input to the
//! eigensolver and indefinite input to the square root.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::LinalgError;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Tolerance used to decide whether an input to [`hermitian_eig`] is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as rounding noise.
pub const PSD_CLAMP_TOL: f64 = 1e-10;
/// Eigenvalues below `-PSD_REJECT_TOL` mean the operator is not PSD.
pub const PSD_REJECT_TOL: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 50;
const JACOBI_OFFDIAG_TOL: f64 = 1e-14;

#[inline]
pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) const ZERO: C64 = c(0.0, 0.0);
pub(crate) const ONE: C64 = c(1.0, 0.0);

/// Unit-modulus phase `e^{iφ}`.
#[inline]
pub fn phase(angle: f64) -> C64 {
    c(libm::cos(angle), libm::sin(angle))
}

/// Square complex matrix of dimension `N` (2 or 4), row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>([[C64; N]; N]);

/// Single-qubit operator.
pub type Mat2 = Matrix<2>;
/// Two-qubit operator.
pub type Mat4 = Matrix<4>;

/// Column vector of dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ket<const N: usize>([C64; N]);

pub type Ket2 = Ket<2>;
pub type Ket4 = Ket<4>;

const fn assert_dim<const N: usize>() {
    assert!(N == 2 || N == 4, "only 2x2 and 4x4 matrices are supported");
}

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        const { assert_dim::<N>() };
        Matrix([[ZERO; N]; N])
    }

    pub const fn identity() -> Self {
        let mut m = Self::zeros();
        let mut i = 0;
        while i < N {
            m.0[i][i] = ONE;
            i += 1;
        }
        m
    }

    /// Builds a matrix from rows, rejecting NaN or infinite entries.
    pub fn from_rows(rows: [[C64; N]; N]) -> Result<Self, LinalgError> {
        const { assert_dim::<N>() };
        if rows.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Matrix(rows))
        } else {
            Err(LinalgError::NonFinite)
        }
    }

    /// Builds a matrix from rows without the finiteness check. Used by the
    /// gate constructors whose entries are finite by construction.
    pub(crate) const fn from_rows_unchecked(rows: [[C64; N]; N]) -> Self {
        const { assert_dim::<N>() };
        Matrix(rows)
    }

    pub fn from_diagonal(diag: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn rows(&self) -> &[[C64; N]; N] {
        &self.0
    }

    pub fn diagonal(&self) -> [C64; N] {
        core::array::from_fn(|i| self.0[i][i])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Matrix(core::array::from_fn(|r| core::array::from_fn(|col| self.0[col][r].conj())))
    }

    pub fn transpose(&self) -> Self {
        Matrix(core::array::from_fn(|r| core::array::from_fn(|col| self.0[col][r])))
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Matrix(self.0.map(|row| row.map(|z| z * s)))
    }

    /// Matrix-vector product. No renormalization is performed.
    pub fn apply(&self, v: &Ket<N>) -> Ket<N> {
        Ket(core::array::from_fn(|r| {
            let mut acc = ZERO;
            for k in 0..N {
                acc += self.0[r][k] * v.0[k];
            }
            acc
        }))
    }

    /// `self · m · self†`, the conjugation action on operators.
    pub fn conjugate(&self, m: &Self) -> Self {
        *self * *m * self.adjoint()
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().flatten().zip(other.0.iter().flatten()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    /// Deviation of `self†·self` from the identity, as a max-abs residual.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Largest off-diagonal modulus.
    pub fn offdiagonal_max(&self) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..N {
            for col in 0..N {
                if r != col {
                    m = m.max(self.0[r][col].norm());
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.offdiagonal_max() <= tol
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for r in 0..N {
            for k in 0..N {
                acc += self.0[r][k] * other.0[k][r];
            }
        }
        acc
    }

    /// `⟨v|self|v⟩`.
    pub fn expectation(&self, v: &Ket<N>) -> C64 {
        v.inner(&self.apply(v))
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.0[r][col]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.0[r][col]
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..N {
            for k in 0..N {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for col in 0..N {
                    out.0[r][col] += a * rhs.0[k][col];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<Ket<N>> for Matrix<N> {
    type Output = Ket<N>;
    fn mul(self, rhs: Ket<N>) -> Ket<N> {
        self.apply(&rhs)
    }
}

impl<const N: usize> Mul<C64> for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Matrix(self.0.map(|row| row.map(|z| z * rhs)))
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Matrix(core::array::from_fn(|r| core::array::from_fn(|col| self.0[r][col] + rhs.0[r][col])))
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Matrix(core::array::from_fn(|r| core::array::from_fn(|col| self.0[r][col] - rhs.0[r][col])))
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Matrix(self.0.map(|row| row.map(|z| -z)))
    }
}

impl<const N: usize> Ket<N> {
    pub fn new(amplitudes: [C64; N]) -> Self {
        const { assert_dim::<N>() };
        Ket(amplitudes)
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(index: usize) -> Self {
        let mut v = [ZERO; N];
        v[index] = ONE;
        Ket::new(v)
    }

    pub fn amplitudes(&self) -> &[C64; N] {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Ket(self.0.map(|z| z * s))
    }

    /// `|self⟩⟨self|`.
    pub fn outer(&self) -> Matrix<N> {
        Matrix(core::array::from_fn(|r| core::array::from_fn(|col| self.0[r] * self.0[col].conj())))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl<const N: usize> Index<usize> for Ket<N> {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

/// Kronecker product; `(a⊗b)[2r+s][2c+t] = a[r][c]·b[s][t]`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for r in 0..2 {
        for col in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    out.0[2 * r + s][2 * col + t] = a.0[r][col] * b.0[s][t];
                }
            }
        }
    }
    out
}

pub fn kron_ket(a: &Ket2, b: &Ket2) -> Ket4 {
    Ket(core::array::from_fn(|i| a.0[i / 2] * b.0[i % 2]))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const N: usize> {
    /// Ascending.
    pub values: [f64; N],
    /// Orthonormal eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: [Ket<N>; N],
}

impl<const N: usize> HermitianEigen<N> {
    /// `Σ f(λᵢ) vᵢvᵢ†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        let mut out = Matrix::<N>::zeros();
        for (lambda, v) in self.values.iter().zip(self.vectors.iter()) {
            let w = f(*lambda);
            if w == 0.0 {
                continue;
            }
            out = out + v.outer() * w;
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<N> {
        self.map_spectrum(|x| x)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a[p][q]` and then
/// applies a real Jacobi rotation to the resulting real-symmetric 2×2 block.
pub fn hermitian_eig<const N: usize>(a: &Matrix<N>) -> Result<HermitianEigen<N>, LinalgError> {
    let residual = a.hermiticity_residual();
    if !residual.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if residual > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { residual });
    }

    // Symmetrize so rounding in the input does not leak into the rotations.
    let mut m =
        Matrix::<N>(core::array::from_fn(|r| core::array::from_fn(|col| (a.0[r][col] + a.0[col][r].conj()) * 0.5)));
    for i in 0..N {
        m.0[i][i] = c(m.0[i][i].re, 0.0);
    }
    let mut w = Matrix::<N>::identity();

    let scale = m.frobenius_norm().max(1.0);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if offdiag_norm(&m) < JACOBI_OFFDIAG_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut m, &mut w, p, q);
            }
        }
    }
    if !converged && offdiag_norm(&m) >= JACOBI_OFFDIAG_TOL * scale {
        return Err(LinalgError::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: [usize; N] = core::array::from_fn(|i| i);
    order.sort_by(|&i, &j| m.0[i][i].re.total_cmp(&m.0[j][j].re));
    Ok(HermitianEigen {
        values: core::array::from_fn(|k| m.0[order[k]][order[k]].re),
        vectors: core::array::from_fn(|k| Ket(core::array::from_fn(|r| w.0[r][order[k]]))),
    })
}

fn offdiag_norm<const N: usize>(m: &Matrix<N>) -> f64 {
    let mut s = 0.0;
    for r in 0..N {
        for col in 0..N {
            if r != col {
                s += m.0[r][col].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

fn rotate<const N: usize>(m: &mut Matrix<N>, w: &mut Matrix<N>, p: usize, q: usize) {
    let apq = m.0[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let alpha = m.0[p][p].re;
    let delta = m.0[q][q].re;
    // e^{-iφ} with a_pq = |a_pq| e^{iφ}
    let unphase = apq.conj() / mag;

    let tau = (delta - alpha) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let cs = 1.0 / libm::sqrt(1.0 + t * t);
    let sn = t * cs;

    // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let vpp = c(cs, 0.0);
    let vpq = c(sn, 0.0);
    let vqp = unphase * (-sn);
    let vqq = unphase * cs;

    // m ← m·V
    for k in 0..N {
        let mkp = m.0[k][p];
        let mkq = m.0[k][q];
        m.0[k][p] = mkp * vpp + mkq * vqp;
        m.0[k][q] = mkp * vpq + mkq * vqq;
    }
    // m ← V†·m
    for k in 0..N {
        let mpk = m.0[p][k];
        let mqk = m.0[q][k];
        m.0[p][k] = vpp.conj() * mpk + vqp.conj() * mqk;
        m.0[q][k] = vpq.conj() * mpk + vqq.conj() * mqk;
    }
    m.0[p][q] = ZERO;
    m.0[q][p] = ZERO;
    m.0[p][p] = c(m.0[p][p].re, 0.0);
    m.0[q][q] = c(m.0[q][q].re, 0.0);

    for k in 0..N {
        let wkp = w.0[k][p];
        let wkq = w.0[k][q];
        w.0[k][p] = wkp * vpp + wkq * vqp;
        w.0[k][q] = wkp * vpq + wkq * vqq;
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues down to `-PSD_REJECT_TOL` are clamped to zero; anything more
/// negative is rejected.
pub fn psd_sqrt<const N: usize>(a: &Matrix<N>) -> Result<Matrix<N>, LinalgError> {
    let eig = hermitian_eig(a)?;
    let min = eig.values[0];
    if min < -PSD_REJECT_TOL {
        return Err(LinalgError::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(eig.map_spectrum(|x| libm::sqrt(x.max(0.0))))
}

/// Index of the largest-modulus entry, lowest row-major index on ties.
fn reference_entry<const N: usize>(b: &Matrix<N>) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_mag = -1.0;
    for r in 0..N {
        for col in 0..N {
            let mag = b.0[r][col].norm();
            if mag > best_mag {
                best_mag = mag;
                best = (r, col);
            }
        }
    }
    best
}

/// The unit-modulus factor `c` aligning `b` with `a` at `b`'s
/// largest-magnitude entry, and the residual `max|a − c·b|`.
pub fn global_phase_alignment<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> (C64, f64) {
    let (r, col) = reference_entry(b);
    let ratio = a.0[r][col] / b.0[r][col];
    let factor = if ratio.norm() > 0.0 && ratio.norm().is_finite() { ratio / ratio.norm() } else { ONE };
    (factor, a.max_abs_diff(&b.scale(factor)))
}

/// True iff `a ≈ c·b` for some unit-modulus `c`, within `tol` elementwise.
pub fn equal_up_to_global_phase<const N: usize>(a: &Matrix<N>, b: &Matrix<N>, tol: f64) -> bool {
    global_phase_alignment(a, b).1 <= tol
}
