//! Complex matrix arithmetic for 2x2 operators and 4x4 density matrices.
//!
//! Dimensions are fixed at 2 and 4: the protocol is exactly two qubits and
//! nothing here pretends otherwise. All types are plain `Copy` values;
//! every operation returns a fresh matrix so grids can be evaluated in
//! parallel without shared state.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::math;
use crate::tol;

/// Complex scalar with `f64` components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    /// e^{i angle}
    pub fn phase(angle: f64) -> Self {
        Complex::new(math::cos(angle), math::sin(angle))
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }

    pub fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// Errors raised by the matrix layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinalgError {
    /// `U * U^dag` deviated from the identity by more than the gate.
    NonUnitary { defect: f64 },
    /// A density matrix failed the Hermiticity check.
    NotHermitian { defect: f64 },
    /// A density matrix trace strayed from one.
    TraceNotOne { trace: f64 },
    /// A diagonal entry was more negative than the clamp window.
    NegativeDiagonal { value: f64 },
    /// Raw diagonal probabilities did not sum to one within `NORM_TOL`.
    NotNormalized { sum: f64 },
    /// A stored entry was NaN or infinite.
    NonFinite,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NonUnitary { defect } => {
                write!(f, "operator is not unitary (defect {defect:e})")
            }
            LinalgError::NotHermitian { defect } => {
                write!(f, "density matrix is not Hermitian (defect {defect:e})")
            }
            LinalgError::TraceNotOne { trace } => {
                write!(f, "density matrix trace is {trace}, expected 1")
            }
            LinalgError::NegativeDiagonal { value } => {
                write!(
                    f,
                    "density matrix diagonal entry {value:e} below clamp window"
                )
            }
            LinalgError::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
            LinalgError::NonFinite => write!(f, "matrix entry is NaN or infinite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LinalgError {}

/// 2x2 complex operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator2 {
    entries: [[Complex; 2]; 2],
}

impl Operator2 {
    pub const fn new(entries: [[Complex; 2]; 2]) -> Self {
        Operator2 { entries }
    }

    pub fn identity() -> Self {
        Operator2::new([[Complex::ONE, Complex::ZERO], [Complex::ZERO, Complex::ONE]])
    }

    /// The bit flip used as the classical move: i*sigma_y = [[0,1],[-1,0]].
    pub fn flip() -> Self {
        Operator2::new([
            [Complex::ZERO, Complex::ONE],
            [Complex::real(-1.0), Complex::ZERO],
        ])
    }

    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.entries[r][c]
    }

    pub fn mul(&self, rhs: &Operator2) -> Operator2 {
        let mut out = [[Complex::ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = Complex::ZERO;
                for k in 0..2 {
                    acc = acc + self.entries[r][k] * rhs.entries[k][c];
                }
                out[r][c] = acc;
            }
        }
        Operator2::new(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator2 {
        let mut out = [[Complex::ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.entries[c][r].conj();
            }
        }
        Operator2::new(out)
    }

    pub fn trace(&self) -> Complex {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Max-abs entry of `U * U^dag - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.mul(&self.dagger());
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let expect = if r == c { Complex::ONE } else { Complex::ZERO };
                worst = worst.max((p.entries[r][c] - expect).abs());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_defect() <= tolerance
    }
}

/// 4x4 complex operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator4 {
    entries: [[Complex; 4]; 4],
}

impl Operator4 {
    pub const fn new(entries: [[Complex; 4]; 4]) -> Self {
        Operator4 { entries }
    }

    pub fn identity() -> Self {
        let mut e = [[Complex::ZERO; 4]; 4];
        for i in 0..4 {
            e[i][i] = Complex::ONE;
        }
        Operator4::new(e)
    }

    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.entries[r][c]
    }

    pub fn mul(&self, rhs: &Operator4) -> Operator4 {
        let mut out = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = Complex::ZERO;
                for k in 0..4 {
                    acc = acc + self.entries[r][k] * rhs.entries[k][c];
                }
                out[r][c] = acc;
            }
        }
        Operator4::new(out)
    }

    pub fn dagger(&self) -> Operator4 {
        let mut out = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] = self.entries[c][r].conj();
            }
        }
        Operator4::new(out)
    }

    /// Apply to a column vector.
    pub fn mul_vec(&self, v: &[Complex; 4]) -> [Complex; 4] {
        let mut out = [Complex::ZERO; 4];
        for r in 0..4 {
            let mut acc = Complex::ZERO;
            for k in 0..4 {
                acc = acc + self.entries[r][k] * v[k];
            }
            out[r] = acc;
        }
        out
    }

    pub fn unitarity_defect(&self) -> f64 {
        let p = self.mul(&self.dagger());
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == c { Complex::ONE } else { Complex::ZERO };
                worst = worst.max((p.entries[r][c] - expect).abs());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_defect() <= tolerance
    }
}

/// Kronecker product with row-major block convention:
/// `out[(2i+k), (2j+l)] = a[i,j] * b[k,l]`.
pub fn tensor_product(a: &Operator2, b: &Operator2) -> Operator4 {
    let mut out = [[Complex::ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    Operator4::new(out)
}

/// 4x4 density matrix: Hermitian, unit trace, non-negative diagonal
/// (up to `PROB_CLAMP` roundoff).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: [[Complex; 4]; 4],
}

impl DensityMatrix {
    /// Validates the invariants before accepting the entries.
    pub fn new(entries: [[Complex; 4]; 4]) -> Result<Self, LinalgError> {
        let rho = DensityMatrix { entries };
        for r in 0..4 {
            for c in 0..4 {
                if !entries[r][c].is_finite() {
                    return Err(LinalgError::NonFinite);
                }
            }
        }
        let herm = rho.hermiticity_defect();
        if herm > tol::DENSITY_TOL {
            return Err(LinalgError::NotHermitian { defect: herm });
        }
        let tr = rho.trace();
        if math::abs(tr.re - 1.0) > tol::DENSITY_TOL || math::abs(tr.im) > tol::DENSITY_TOL {
            return Err(LinalgError::TraceNotOne { trace: tr.re });
        }
        for n in 0..4 {
            if entries[n][n].re < -tol::PROB_CLAMP {
                return Err(LinalgError::NegativeDiagonal {
                    value: entries[n][n].re,
                });
            }
        }
        Ok(rho)
    }

    /// Outer product |v><v| of a normalized state vector.
    pub fn from_pure(v: &[Complex; 4]) -> Self {
        let mut e = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                e[r][c] = v[r] * v[c].conj();
            }
        }
        DensityMatrix { entries: e }
    }

    pub fn maximally_mixed() -> Self {
        let mut e = [[Complex::ZERO; 4]; 4];
        for i in 0..4 {
            e[i][i] = Complex::real(0.25);
        }
        DensityMatrix { entries: e }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.entries[r][c]
    }

    pub fn trace(&self) -> Complex {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2] + self.entries[3][3]
    }

    /// Max-abs entry of `rho - rho^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[r][c] - self.entries[c][r].conj()).abs());
            }
        }
        worst
    }

    /// `u * rho * u^dag`. The operator is gated at the conjugation
    /// unitarity tolerance before anything is computed.
    pub fn conjugate_by(&self, u: &Operator4) -> Result<DensityMatrix, LinalgError> {
        let defect = u.unitarity_defect();
        if defect > tol::CONJUGATION_UNITARITY_TOL {
            return Err(LinalgError::NonUnitary { defect });
        }
        let ud = u.dagger();
        let mut tmp = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = Complex::ZERO;
                for k in 0..4 {
                    acc = acc + u.entries[r][k] * self.entries[k][c];
                }
                tmp[r][c] = acc;
            }
        }
        let mut out = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = Complex::ZERO;
                for k in 0..4 {
                    acc = acc + tmp[r][k] * ud.entries[k][c];
                }
                out[r][c] = acc;
            }
        }
        Ok(DensityMatrix { entries: out })
    }

    /// Real parts of the diagonal, clamped to [0, 1] and renormalized to
    /// sum exactly one when the raw sum is within `NORM_TOL`.
    pub fn diagonal_probabilities(&self) -> Result<[f64; 4], LinalgError> {
        let mut raw = [0.0f64; 4];
        for n in 0..4 {
            let d = self.entries[n][n].re;
            if d < -tol::PROB_CLAMP {
                return Err(LinalgError::NegativeDiagonal { value: d });
            }
            raw[n] = d.clamp(0.0, 1.0);
        }
        let sum: f64 = raw.iter().sum();
        if math::abs(sum - 1.0) >= tol::NORM_TOL {
            return Err(LinalgError::NotNormalized { sum });
        }
        for p in raw.iter_mut() {
            *p /= sum;
        }
        Ok(raw)
    }

    /// Zero the computational-basis off-diagonals (full dephasing fixed
    /// point). Idempotent.
    pub fn dephased(&self) -> DensityMatrix {
        let mut e = [[Complex::ZERO; 4]; 4];
        for n in 0..4 {
            e[n][n] = Complex::real(self.entries[n][n].re);
        }
        DensityMatrix { entries: e }
    }

    /// Convex mixture `p * a + (1-p) * b`. The caller validates `p`.
    pub fn mix(a: &DensityMatrix, b: &DensityMatrix, p: f64) -> DensityMatrix {
        let mut e = [[Complex::ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                e[r][c] = a.entries[r][c].scale(p) + b.entries[r][c].scale(1.0 - p);
            }
        }
        DensityMatrix { entries: e }
    }
}
