use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::UnitaryError;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance on `‖UᴴU - I‖_F` and `|det U - 1|` for constructed matrices.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// `SU(n)` or the full unitary group `U(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    #[default]
    Special,
    Unitary,
}

/// A unitary matrix, special unless built for [`GroupKind::Unitary`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    /// Validates unitarity (and `det = 1` for `SU`) within `tol`.
    pub fn new(m: CMatrix, group: GroupKind, tol: f64) -> Result<Self, UnitaryError> {
        if !m.is_square() || m.nrows() < 1 {
            return Err(UnitaryError::NotSquare(m.nrows(), m.ncols()));
        }
        let drift = unitarity_defect(&m);
        if !(drift <= tol) {
            return Err(UnitaryError::NotUnitary(drift));
        }
        if group == GroupKind::Special {
            let det_err = (m.determinant() - C64::new(1.0, 0.0)).norm();
            if !(det_err <= tol) {
                return Err(UnitaryError::NotSpecial(det_err));
            }
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix(CMatrix::identity(dim, dim))
    }

    /// Wraps without validation. For matrices produced by this crate's
    /// exponential and projection maps.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        UnitaryMatrix(m)
    }

    /// `diag(entries)`.
    pub fn diagonal(entries: &[C64], group: GroupKind) -> Result<Self, UnitaryError> {
        let m = CMatrix::from_diagonal(&DVector::from_column_slice(entries));
        Self::new(m, group, CONSTRUCTION_TOL)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        matrix_to_rows(&self.0)
    }
}

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, UnitaryError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(UnitaryError::NotSquare(n, rows.first().map_or(0, Vec::len)));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| C64::new(rows[r][c][0], rows[r][c][1])))
}

impl Serialize for UnitaryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Deserializes any square matrix and checks it lies in `U(n)` within
/// `1e-6`; callers needing `SU(n)` re-check with [`UnitaryMatrix::new`].
impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let m = matrix_from_rows(&rows).map_err(D::Error::custom)?;
        UnitaryMatrix::new(m, GroupKind::Unitary, 1e-6).map_err(D::Error::custom)
    }
}

/// `‖MᴴM - I‖_F`.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm()
}

/// Orthogonal projection onto the Lie algebra: the skew-Hermitian part,
/// made traceless for `SU(n)`.
pub fn project_to_algebra(x: &CMatrix, group: GroupKind) -> CMatrix {
    let mut a = (x - x.adjoint()) * C64::new(0.5, 0.0);
    if group == GroupKind::Special {
        let n = a.nrows();
        let shift = a.trace() / C64::new(n as f64, 0.0);
        for k in 0..n {
            a[(k, k)] -= shift;
        }
    }
    a
}

/// `exp(A)` for skew-Hermitian `A` through the eigendecomposition of the
/// Hermitian matrix `-iA`.
pub fn exp_skew_hermitian(a: &CMatrix) -> CMatrix {
    let h = a * C64::new(0.0, -1.0);
    // symmetrize against rounding before the Hermitian solver
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let q = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| C64::new(l.cos(), l.sin())),
    );
    q * CMatrix::from_diagonal(&phases) * q.adjoint()
}

/// Nearest unitary matrix (polar factor), then the determinant phase
/// divided out evenly for `SU(n)`.
pub fn reproject(m: &CMatrix, group: GroupKind) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut q = u * v_t;
    if group == GroupKind::Special {
        let det = q.determinant();
        let n = q.nrows() as f64;
        let theta = det.arg() / n;
        q *= C64::new(theta.cos(), -theta.sin());
    }
    q
}

/// Haar-distributed element from an explicit generator: complex Gaussian
/// entries sampled column-major, QR with the diagonal of `R` made positive,
/// then for `SU(n)` the first column rotated by `conj(det Q)`.
pub fn haar_from_rng<R: Rng + ?Sized>(dim: usize, group: GroupKind, rng: &mut R) -> UnitaryMatrix {
    let mut z = CMatrix::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            z[(r, c)] = C64::new(re, im);
        }
    }
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    if group == GroupKind::Special {
        let det = q.determinant();
        let fix = (det / det.norm()).conj();
        for row in 0..dim {
            q[(row, 0)] *= fix;
        }
    }
    UnitaryMatrix(q)
}

/// Haar-random element of `SU(dim)`, deterministic in `seed`.
pub fn haar_random(dim: usize, seed: u64) -> Result<UnitaryMatrix, UnitaryError> {
    haar_random_in(dim, seed, GroupKind::Special)
}

pub fn haar_random_in(dim: usize, seed: u64, group: GroupKind) -> Result<UnitaryMatrix, UnitaryError> {
    if dim < 2 {
        return Err(UnitaryError::DimensionTooSmall(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(haar_from_rng(dim, group, &mut rng))
}
