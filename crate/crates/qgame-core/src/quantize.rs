//! The quantization protocol: entangler, correlation-state preparation,
//! round evaluation, expected payoffs, and the closed-form payoff
//! expressions used as independent oracles for the pipeline.
//!
//! A round runs as follows. The referee holds a two-qubit correlation
//! state `rho_in`. The players apply local operators `U_A (x) U_B`, the
//! referee applies the inverse entangler and projectively measures in the
//! computational basis `{|00>,|01>,|10>,|11>}`, and outcome `n = 2j + l`
//! pays out cell `n` of the payoff matrix. The entangler is fixed:
//!
//! ```text
//! J |fg> = [ |fg> + i (-1)^(f+g) |(1-f)(1-g)> ] / sqrt(2)
//! ```
//!
//! so `J|00>` is the maximally entangled state `(|00> + i|11>)/sqrt(2)`.

use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use crate::game::PayoffMatrix2x2;
use crate::linalg::{tensor_product, Complex, DensityMatrix, LinalgError, Operator2, Operator4};
use crate::math;
use crate::tol;

/// A two-qubit computational basis state |fg>.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductState {
    pub f: u8,
    pub g: u8,
}

impl ProductState {
    pub fn new(f: u8, g: u8) -> Self {
        assert!(f <= 1 && g <= 1, "basis bits must be 0 or 1");
        ProductState { f, g }
    }

    /// Basis index n = 2f + g.
    pub fn index(&self) -> usize {
        (2 * self.f + self.g) as usize
    }
}

impl fmt::Display for ProductState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}{}>", self.f, self.g)
    }
}

/// How the shared correlation state was prepared.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorrelationKind {
    /// Maximally entangled state J|fg><fg|J^dag.
    Mes(ProductState),
    /// The MES after full phase damping: off-diagonals zeroed.
    Dephased(ProductState),
    /// The maximally mixed state I/4.
    FullRank,
    /// Source emits J|00> with probability p and J|01> otherwise.
    Corrupted { p: f64 },
}

/// A prepared correlation state with its provenance tag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationState {
    pub rho: DensityMatrix,
    pub kind: CorrelationKind,
}

/// Probabilities of the referee's four measurement outcomes, in order
/// (AW, AL, NW, NL) = (|00>, |01>, |10>, |11>).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeDistribution {
    probs: [f64; 4],
}

impl OutcomeDistribution {
    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn p(&self, n: usize) -> f64 {
        self.probs[n]
    }

    /// Convex combination of two distributions.
    pub fn mix(a: &OutcomeDistribution, b: &OutcomeDistribution, p: f64) -> OutcomeDistribution {
        let mut probs = [0.0; 4];
        for n in 0..4 {
            probs[n] = p * a.probs[n] + (1.0 - p) * b.probs[n];
        }
        OutcomeDistribution { probs }
    }
}

/// Errors from the protocol layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuantizeError {
    /// A mixing probability fell outside [0, 1].
    BadProbability { p: f64 },
    /// A player operator failed the unitarity gate.
    NonUnitary { defect: f64 },
    /// The numeric substrate rejected a state.
    Linalg(LinalgError),
}

impl fmt::Display for QuantizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantizeError::BadProbability { p } => write!(f, "probability {p} outside [0, 1]"),
            QuantizeError::NonUnitary { defect } => {
                write!(f, "player operator is not unitary (defect {defect:e})")
            }
            QuantizeError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinalgError> for QuantizeError {
    fn from(e: LinalgError) -> Self {
        QuantizeError::Linalg(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuantizeError {}

/// The entangling operator J, column by column from its action on the
/// four basis states. Unitary by construction.
pub fn build_entangler() -> Operator4 {
    let mut e = [[Complex::ZERO; 4]; 4];
    for f in 0..2usize {
        for g in 0..2usize {
            let col = 2 * f + g;
            let flipped = 2 * (1 - f) + (1 - g);
            let sign = if (f + g) % 2 == 0 { 1.0 } else { -1.0 };
            e[col][col] = Complex::real(FRAC_1_SQRT_2);
            e[flipped][col] = Complex::new(0.0, sign * FRAC_1_SQRT_2);
        }
    }
    Operator4::new(e)
}

fn entangled_vector(initial: ProductState) -> [Complex; 4] {
    let mut v = [Complex::ZERO; 4];
    let flipped = ProductState::new(1 - initial.f, 1 - initial.g);
    let sign = if (initial.f + initial.g) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    v[initial.index()] = Complex::real(FRAC_1_SQRT_2);
    v[flipped.index()] = Complex::new(0.0, sign * FRAC_1_SQRT_2);
    v
}

/// Prepare a correlation state of the requested kind.
pub fn build_correlation(kind: CorrelationKind) -> Result<CorrelationState, QuantizeError> {
    let rho = match kind {
        CorrelationKind::Mes(initial) => DensityMatrix::from_pure(&entangled_vector(initial)),
        CorrelationKind::Dephased(initial) => {
            DensityMatrix::from_pure(&entangled_vector(initial)).dephased()
        }
        CorrelationKind::FullRank => DensityMatrix::maximally_mixed(),
        CorrelationKind::Corrupted { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(QuantizeError::BadProbability { p });
            }
            let mes00 = DensityMatrix::from_pure(&entangled_vector(ProductState::new(0, 0)));
            let mes01 = DensityMatrix::from_pure(&entangled_vector(ProductState::new(0, 1)));
            DensityMatrix::mix(&mes00, &mes01, p)
        }
    };
    Ok(CorrelationState { rho, kind })
}

fn normalize_probs(mut raw: [f64; 4]) -> Result<[f64; 4], QuantizeError> {
    for p in raw.iter_mut() {
        if *p < -tol::PROB_CLAMP {
            return Err(LinalgError::NegativeDiagonal { value: *p }.into());
        }
        *p = p.clamp(0.0, 1.0);
    }
    let sum: f64 = raw.iter().sum();
    if math::abs(sum - 1.0) >= tol::NORM_TOL {
        return Err(LinalgError::NotNormalized { sum }.into());
    }
    for p in raw.iter_mut() {
        *p /= sum;
    }
    Ok(raw)
}

/// One round of the protocol: apply the players' local operators, undo
/// the entangler, and read out the four outcome probabilities.
pub fn play_round(
    state: &CorrelationState,
    ua: &Operator2,
    ub: &Operator2,
) -> Result<OutcomeDistribution, QuantizeError> {
    for op in [ua, ub] {
        let defect = op.unitarity_defect();
        if defect > tol::CONJUGATION_UNITARITY_TOL {
            return Err(QuantizeError::NonUnitary { defect });
        }
    }
    // diag(J^dag U rho U^dag J) = diag(M rho M^dag) with M = J^dag (UA x UB).
    let m = build_entangler().dagger().mul(&tensor_product(ua, ub));
    let mut raw = [0.0f64; 4];
    for n in 0..4 {
        // row_n(M) * rho * row_n(M)^dag
        let mut row_rho = [Complex::ZERO; 4];
        for c in 0..4 {
            let mut acc = Complex::ZERO;
            for k in 0..4 {
                acc = acc + m.get(n, k) * state.rho.get(k, c);
            }
            row_rho[c] = acc;
        }
        let mut acc = Complex::ZERO;
        for c in 0..4 {
            acc = acc + row_rho[c] * m.get(n, c).conj();
        }
        raw[n] = acc.re;
    }
    Ok(OutcomeDistribution {
        probs: normalize_probs(raw)?,
    })
}

/// Average payoffs for a distribution: the referee pays cell `n` of the
/// matrix on outcome `n`.
pub fn expected_payoffs(dist: &OutcomeDistribution, m: &PayoffMatrix2x2) -> (f64, f64) {
    let mut pa = 0.0;
    let mut pb = 0.0;
    for n in 0..4 {
        pa += m.alice[n] * dist.probs[n];
        pb += m.bob[n] * dist.probs[n];
    }
    (pa, pb)
}

/// Round in which Bob plays a classical mixture: identity with
/// probability `p`, the flip otherwise.
pub fn play_round_mixed_bob(
    state: &CorrelationState,
    ua: &Operator2,
    p: f64,
) -> Result<OutcomeDistribution, QuantizeError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QuantizeError::BadProbability { p });
    }
    let with_identity = play_round(state, ua, &Operator2::identity())?;
    let with_flip = play_round(state, ua, &Operator2::flip())?;
    Ok(OutcomeDistribution::mix(&with_identity, &with_flip, p))
}

/// Closed-form Welfare payoffs for one-parameter operators over the
/// entangled |00> state:
///
/// ```text
/// $_A = [1 + 3(cos tA + cos tB) + 5 cos tA cos tB] / 4
/// $_B = [3 + 2 cos tA - cos tA cos tB] / 2
/// ```
pub fn closed_form_one_param(theta_a: f64, theta_b: f64) -> (f64, f64) {
    let u = math::cos(theta_a);
    let v = math::cos(theta_b);
    let pa = (1.0 + 3.0 * (u + v) + 5.0 * u * v) / 4.0;
    let pb = (3.0 + 2.0 * u - u * v) / 2.0;
    (pa, pb)
}

/// Closed-form outcome probabilities for two-parameter operators over the
/// entangled |00> state:
///
/// ```text
/// P00 = cos^2(tA/2) cos^2(tB/2) cos^2(fA + fB)
/// P01 = (x sin fB - y cos fA)^2     x = sin(tA/2) cos(tB/2)
/// P10 = (x cos fB - y sin fA)^2     y = cos(tA/2) sin(tB/2)
/// P11 = remainder
/// ```
pub fn closed_form_two_param_probs(
    theta_a: f64,
    phi_a: f64,
    theta_b: f64,
    phi_b: f64,
) -> OutcomeDistribution {
    let (ca, sa) = (math::cos(theta_a / 2.0), math::sin(theta_a / 2.0));
    let (cb, sb) = (math::cos(theta_b / 2.0), math::sin(theta_b / 2.0));
    let x = sa * cb;
    let y = ca * sb;
    let c_sum = math::cos(phi_a + phi_b);
    let p00 = ca * ca * cb * cb * c_sum * c_sum;
    let p01 = {
        let a = x * math::sin(phi_b) - y * math::cos(phi_a);
        a * a
    };
    let p10 = {
        let a = x * math::cos(phi_b) - y * math::sin(phi_a);
        a * a
    };
    let p11 = (1.0 - p00 - p01 - p10).max(0.0);
    OutcomeDistribution {
        probs: [p00, p01, p10, p11],
    }
}

/// Which dephased correlation a closed form refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DephasedVariant {
    /// Damped J|00>: diagonal (1/2, 0, 0, 1/2).
    FromZeroZero,
    /// Damped J|01>: diagonal (0, 1/2, 1/2, 0).
    FromZeroOne,
}

/// Closed-form Welfare payoffs for two-parameter operators over a
/// dephased correlation.
///
/// The damped-|00> case has the explicit form
///
/// ```text
/// $_A = [1 + 5 cos tA cos tB - 3 sin tA sin tB sin(fA + fB)] / 4
/// $_B = [3 - cos tA cos tB - 2 sin tA sin tB cos fA sin fB] / 2
/// ```
///
/// The damped-|01> case is evaluated through the round pipeline, which is
/// the ground truth; expanding it gives the sign-mirrored form
///
/// ```text
/// $_A = [1 - 5 cos tA cos tB + 3 sin tA sin tB sin(fA + fB)] / 4
/// $_B = [3 + cos tA cos tB + 2 sin tA sin tB cos fA sin fB] / 2
/// ```
pub fn closed_form_dephased(
    theta_a: f64,
    phi_a: f64,
    theta_b: f64,
    phi_b: f64,
    variant: DephasedVariant,
) -> (f64, f64) {
    match variant {
        DephasedVariant::FromZeroZero => {
            let uv = math::cos(theta_a) * math::cos(theta_b);
            let ss = math::sin(theta_a) * math::sin(theta_b);
            let pa = (1.0 + 5.0 * uv - 3.0 * ss * math::sin(phi_a + phi_b)) / 4.0;
            let pb = (3.0 - uv - 2.0 * ss * math::cos(phi_a) * math::sin(phi_b)) / 2.0;
            (pa, pb)
        }
        DephasedVariant::FromZeroOne => {
            let state = build_correlation(CorrelationKind::Dephased(ProductState::new(0, 1)))
                .expect("dephased correlation always builds");
            let ua = crate::strategy::to_matrix(&crate::strategy::StrategyParams::Su2Two {
                theta: theta_a,
                phi: phi_a,
            })
            .expect("two-parameter point has a matrix");
            let ub = crate::strategy::to_matrix(&crate::strategy::StrategyParams::Su2Two {
                theta: theta_b,
                phi: phi_b,
            })
            .expect("two-parameter point has a matrix");
            let dist = play_round(&state, &ua, &ub).expect("pipeline accepts unitary operators");
            expected_payoffs(&dist, &PayoffMatrix2x2::welfare())
        }
    }
}

/// Closed-form outcome probabilities when Alice plays a general SU(2)
/// operator over the entangled |00> state and Bob mixes the classical
/// operators (identity with probability p):
///
/// ```text
/// P00 = p cos^2(tA/2) cos^2(fA) + (1-p) sin^2(tA/2) sin^2(vA)
/// P01 = (1-p) cos^2(tA/2) cos^2(fA) + p sin^2(tA/2) sin^2(vA)
/// P10 = (1-p) cos^2(tA/2) sin^2(fA) + p sin^2(tA/2) cos^2(vA)
/// P11 = remainder
/// ```
pub fn closed_form_bob_classical_mix(
    theta_a: f64,
    phi_a: f64,
    varphi_a: f64,
    p: f64,
) -> OutcomeDistribution {
    let c2 = {
        let c = math::cos(theta_a / 2.0);
        c * c
    };
    let s2 = 1.0 - c2;
    let cf2 = {
        let c = math::cos(phi_a);
        c * c
    };
    let sf2 = 1.0 - cf2;
    let sv2 = {
        let s = math::sin(varphi_a);
        s * s
    };
    let cv2 = 1.0 - sv2;
    let p00 = p * c2 * cf2 + (1.0 - p) * s2 * sv2;
    let p01 = (1.0 - p) * c2 * cf2 + p * s2 * sv2;
    let p10 = (1.0 - p) * c2 * sf2 + p * s2 * cv2;
    let p11 = (1.0 - p00 - p01 - p10).max(0.0);
    OutcomeDistribution {
        probs: [p00, p01, p10, p11],
    }
}
