//! Parametrized strategy families and their matrix realizations.
//!
//! Five spaces are supported: the two classical operators, classical
//! probability mixtures over them, and one-, two-, and three-parameter
//! SU(2) sets. The general three-parameter layout is
//!
//! ```text
//! [ e^{i phi} cos(theta/2)      e^{i varphi} sin(theta/2) ]
//! [ -e^{-i varphi} sin(theta/2) e^{-i phi} cos(theta/2)   ]
//! ```
//!
//! with `theta in [0, pi]` and `phi, varphi in [0, pi/2]`. The phase
//! ranges are deliberately the restricted quarter-turn intervals: the
//! equilibrium landscape depends on them, and widening to the full circle
//! changes the results.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use crate::linalg::{Complex, Operator2};
use crate::math;
use crate::quantize::ProductState;
use crate::tol;

/// Tag identifying a strategy family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategySpace {
    ClassicalPure,
    ClassicalMixed,
    Su2One,
    Su2Two,
    Su2Three,
}

impl StrategySpace {
    /// Number of continuous parameters a grid ranges over.
    pub fn param_count(&self) -> usize {
        match self {
            StrategySpace::ClassicalPure => 0,
            StrategySpace::ClassicalMixed | StrategySpace::Su2One => 1,
            StrategySpace::Su2Two => 2,
            StrategySpace::Su2Three => 3,
        }
    }

    /// Inclusive (lo, hi) range per continuous parameter.
    pub fn param_ranges(&self) -> &'static [(f64, f64)] {
        match self {
            StrategySpace::ClassicalPure => &[],
            StrategySpace::ClassicalMixed => &[(0.0, 1.0)],
            StrategySpace::Su2One => &[(0.0, PI)],
            StrategySpace::Su2Two => &[(0.0, PI), (0.0, FRAC_PI_2)],
            StrategySpace::Su2Three => &[(0.0, PI), (0.0, FRAC_PI_2), (0.0, FRAC_PI_2)],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StrategySpace::ClassicalPure => "classical_pure",
            StrategySpace::ClassicalMixed => "classical_mixed",
            StrategySpace::Su2One => "su2_one",
            StrategySpace::Su2Two => "su2_two",
            StrategySpace::Su2Three => "su2_three",
        }
    }
}

/// One of the two classical operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalOp {
    /// sigma_0
    Identity,
    /// i*sigma_y, realized exactly as [[0,1],[-1,0]].
    Flip,
}

impl ClassicalOp {
    pub fn matrix(&self) -> Operator2 {
        match self {
            ClassicalOp::Identity => Operator2::identity(),
            ClassicalOp::Flip => Operator2::flip(),
        }
    }
}

/// A concrete point in a strategy space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrategyParams {
    /// A bare classical operator choice.
    ClassicalPure {
        op: ClassicalOp,
    },
    /// Probability of applying the identity (the rest goes to the flip).
    ClassicalMixed {
        p: f64,
    },
    Su2One {
        theta: f64,
    },
    Su2Two {
        theta: f64,
        phi: f64,
    },
    Su2Three {
        theta: f64,
        phi: f64,
        varphi: f64,
    },
}

/// Errors from strategy construction and realization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrategyError {
    /// A probability mixture has no single matrix realization.
    MixedHasNoMatrix,
    /// Move label not known for the given player/initial state.
    UnknownLabel,
    /// Grids need at least two points per parameter.
    BadResolution { resolution: usize },
    /// A parameter fell outside its declared range.
    OutOfRange { name: &'static str, value: f64 },
    /// Operator comparison requires unitary inputs.
    NonUnitary { defect: f64 },
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyError::MixedHasNoMatrix => {
                write!(f, "a classical mixture has no single matrix realization")
            }
            StrategyError::UnknownLabel => write!(f, "unknown move label"),
            StrategyError::BadResolution { resolution } => {
                write!(f, "grid resolution {resolution} too small (need >= 2)")
            }
            StrategyError::OutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} outside its range")
            }
            StrategyError::NonUnitary { defect } => {
                write!(
                    f,
                    "operator distance needs unitary inputs (defect {defect:e})"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for StrategyError {}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64, StrategyError> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(StrategyError::OutOfRange { name, value })
    }
}

impl StrategyParams {
    pub fn classical_pure(op: ClassicalOp) -> Self {
        StrategyParams::ClassicalPure { op }
    }

    pub fn classical_mixed(p: f64) -> Result<Self, StrategyError> {
        Ok(StrategyParams::ClassicalMixed {
            p: check_range("p", p, 0.0, 1.0)?,
        })
    }

    pub fn su2_one(theta: f64) -> Result<Self, StrategyError> {
        Ok(StrategyParams::Su2One {
            theta: check_range("theta", theta, 0.0, PI)?,
        })
    }

    pub fn su2_two(theta: f64, phi: f64) -> Result<Self, StrategyError> {
        Ok(StrategyParams::Su2Two {
            theta: check_range("theta", theta, 0.0, PI)?,
            phi: check_range("phi", phi, 0.0, FRAC_PI_2)?,
        })
    }

    pub fn su2_three(theta: f64, phi: f64, varphi: f64) -> Result<Self, StrategyError> {
        Ok(StrategyParams::Su2Three {
            theta: check_range("theta", theta, 0.0, PI)?,
            phi: check_range("phi", phi, 0.0, FRAC_PI_2)?,
            varphi: check_range("varphi", varphi, 0.0, FRAC_PI_2)?,
        })
    }

    pub fn space(&self) -> StrategySpace {
        match self {
            StrategyParams::ClassicalPure { .. } => StrategySpace::ClassicalPure,
            StrategyParams::ClassicalMixed { .. } => StrategySpace::ClassicalMixed,
            StrategyParams::Su2One { .. } => StrategySpace::Su2One,
            StrategyParams::Su2Two { .. } => StrategySpace::Su2Two,
            StrategyParams::Su2Three { .. } => StrategySpace::Su2Three,
        }
    }

    /// Continuous coordinates, in the order declared by the space.
    pub fn coords(&self) -> Vec<f64> {
        match *self {
            StrategyParams::ClassicalPure { .. } => Vec::new(),
            StrategyParams::ClassicalMixed { p } => alloc::vec![p],
            StrategyParams::Su2One { theta } => alloc::vec![theta],
            StrategyParams::Su2Two { theta, phi } => alloc::vec![theta, phi],
            StrategyParams::Su2Three { theta, phi, varphi } => alloc::vec![theta, phi, varphi],
        }
    }

    /// Rebuild a point of the same kind from raw coordinates, clamping to
    /// the declared ranges.
    pub fn with_coords(&self, coords: &[f64]) -> StrategyParams {
        let ranges = self.space().param_ranges();
        let clamp = |i: usize| coords[i].clamp(ranges[i].0, ranges[i].1);
        match self {
            StrategyParams::ClassicalPure { op } => StrategyParams::ClassicalPure { op: *op },
            StrategyParams::ClassicalMixed { .. } => StrategyParams::ClassicalMixed { p: clamp(0) },
            StrategyParams::Su2One { .. } => StrategyParams::Su2One { theta: clamp(0) },
            StrategyParams::Su2Two { .. } => StrategyParams::Su2Two {
                theta: clamp(0),
                phi: clamp(1),
            },
            StrategyParams::Su2Three { .. } => StrategyParams::Su2Three {
                theta: clamp(0),
                phi: clamp(1),
                varphi: clamp(2),
            },
        }
    }
}

impl fmt::Display for StrategyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyParams::ClassicalPure { op } => match op {
                ClassicalOp::Identity => write!(f, "pure(identity)"),
                ClassicalOp::Flip => write!(f, "pure(flip)"),
            },
            StrategyParams::ClassicalMixed { p } => write!(f, "mixed(p={p:.9})"),
            StrategyParams::Su2One { theta } => write!(f, "su2_one(theta={theta:.9})"),
            StrategyParams::Su2Two { theta, phi } => {
                write!(f, "su2_two(theta={theta:.9}, phi={phi:.9})")
            }
            StrategyParams::Su2Three { theta, phi, varphi } => write!(
                f,
                "su2_three(theta={theta:.9}, phi={phi:.9}, varphi={varphi:.9})"
            ),
        }
    }
}

/// Matrix realization of a strategy point.
///
/// Classical mixtures have no single matrix and are rejected; the payoff
/// pipeline handles them as convex combinations instead.
pub fn to_matrix(params: &StrategyParams) -> Result<Operator2, StrategyError> {
    let (theta, phi, varphi) = match *params {
        StrategyParams::ClassicalPure { op } => return Ok(op.matrix()),
        StrategyParams::ClassicalMixed { .. } => return Err(StrategyError::MixedHasNoMatrix),
        StrategyParams::Su2One { theta } => (theta, 0.0, 0.0),
        StrategyParams::Su2Two { theta, phi } => (theta, phi, 0.0),
        StrategyParams::Su2Three { theta, phi, varphi } => (theta, phi, varphi),
    };
    let c = math::cos(theta / 2.0);
    let s = math::sin(theta / 2.0);
    Ok(Operator2::new([
        [
            Complex::phase(phi).scale(c),
            Complex::phase(varphi).scale(s),
        ],
        [
            Complex::phase(-varphi).scale(-s),
            Complex::phase(-phi).scale(c),
        ],
    ]))
}

/// Operator assignment of the classical move labels. It depends on the
/// initial product state: for |00> the moves A and W sit on the identity;
/// for |01> Bob's assignment swaps.
pub fn classical_embedding(
    move_label: &str,
    initial: ProductState,
) -> Result<ClassicalOp, StrategyError> {
    let op = match (move_label, initial.g) {
        ("A", _) => ClassicalOp::Identity,
        ("N", _) => ClassicalOp::Flip,
        ("W", 0) | ("L", 1) => ClassicalOp::Identity,
        ("L", 0) | ("W", 1) => ClassicalOp::Flip,
        _ => return Err(StrategyError::UnknownLabel),
    };
    Ok(op)
}

/// Uniform inclusive grid over a strategy space, in deterministic order
/// (first parameter slowest).
pub fn grid(space: StrategySpace, resolution: usize) -> Result<Vec<StrategyParams>, StrategyError> {
    if resolution < 2 {
        return Err(StrategyError::BadResolution { resolution });
    }
    if space == StrategySpace::ClassicalPure {
        return Ok(alloc::vec![
            StrategyParams::classical_pure(ClassicalOp::Identity),
            StrategyParams::classical_pure(ClassicalOp::Flip),
        ]);
    }
    let ranges = space.param_ranges();
    let axis = |range: (f64, f64)| -> Vec<f64> {
        (0..resolution)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let mut out = Vec::new();
    match space {
        StrategySpace::ClassicalMixed => {
            for &p in &axis(ranges[0]) {
                out.push(StrategyParams::ClassicalMixed { p });
            }
        }
        StrategySpace::Su2One => {
            for &theta in &axis(ranges[0]) {
                out.push(StrategyParams::Su2One { theta });
            }
        }
        StrategySpace::Su2Two => {
            for &theta in &axis(ranges[0]) {
                for &phi in &axis(ranges[1]) {
                    out.push(StrategyParams::Su2Two { theta, phi });
                }
            }
        }
        StrategySpace::Su2Three => {
            for &theta in &axis(ranges[0]) {
                for &phi in &axis(ranges[1]) {
                    for &varphi in &axis(ranges[2]) {
                        out.push(StrategyParams::Su2Three { theta, phi, varphi });
                    }
                }
            }
        }
        StrategySpace::ClassicalPure => unreachable!(),
    }
    Ok(out)
}

/// Global-phase-invariant distance between unitaries:
/// `d = sqrt(1 - |tr(u^dag v)| / 2)`, zero exactly on phase-equivalent
/// pairs. Used to deduplicate equilibrium candidates.
pub fn operator_distance(u: &Operator2, v: &Operator2) -> Result<f64, StrategyError> {
    for op in [u, v] {
        let defect = op.unitarity_defect();
        if defect > tol::UNITARITY_TOL * 100.0 {
            return Err(StrategyError::NonUnitary { defect });
        }
    }
    let t = u.dagger().mul(v).trace().abs();
    Ok(math::sqrt((1.0 - t / 2.0).max(0.0)))
}

/// Human-readable name for a well-known operator, used in reports.
pub fn describe_operator(u: &Operator2) -> Option<String> {
    let known: [(&str, Operator2); 4] = [
        ("s0", Operator2::identity()),
        ("i*sy", Operator2::flip()),
        (
            "i*sz",
            Operator2::new([[Complex::I, Complex::ZERO], [Complex::ZERO, -Complex::I]]),
        ),
        (
            "(s0+i*sy)/sqrt2",
            to_matrix(&StrategyParams::Su2One { theta: FRAC_PI_2 }).unwrap(),
        ),
    ];
    for (name, op) in known {
        if operator_distance(u, &op).ok()? <= 1e-6 {
            return Some(String::from(name));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor_product;

    fn assert_op_eq(a: &Operator2, b: &Operator2, tol: f64) {
        for r in 0..2 {
            for c in 0..2 {
                assert!(
                    (a.get(r, c) - b.get(r, c)).abs() <= tol,
                    "entry ({r},{c}): {:?} vs {:?}",
                    a.get(r, c),
                    b.get(r, c)
                );
            }
        }
    }

    #[test]
    fn one_param_at_zero_is_identity() {
        let u = to_matrix(&StrategyParams::su2_one(0.0).unwrap()).unwrap();
        assert_op_eq(&u, &Operator2::identity(), 0.0);
    }

    #[test]
    fn two_param_theta_zero_phi_quarter_is_phase_flip() {
        let u = to_matrix(&StrategyParams::su2_two(0.0, FRAC_PI_2).unwrap()).unwrap();
        let i_sz = Operator2::new([[Complex::I, Complex::ZERO], [Complex::ZERO, -Complex::I]]);
        assert_op_eq(&u, &i_sz, 1e-15);
    }

    #[test]
    fn one_param_half_pi_is_equal_superposition_rotation() {
        let u = to_matrix(&StrategyParams::su2_one(FRAC_PI_2).unwrap()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let want = Operator2::new([
            [Complex::real(r), Complex::real(r)],
            [Complex::real(-r), Complex::real(r)],
        ]);
        assert_op_eq(&u, &want, 1e-15);
    }

    #[test]
    fn one_param_pi_is_the_flip() {
        let u = to_matrix(&StrategyParams::su2_one(PI).unwrap()).unwrap();
        assert_op_eq(&u, &Operator2::flip(), 1e-15);
    }

    #[test]
    fn mixed_has_no_matrix() {
        assert_eq!(
            to_matrix(&StrategyParams::classical_mixed(0.3).unwrap()),
            Err(StrategyError::MixedHasNoMatrix)
        );
    }

    #[test]
    fn param_ranges_are_enforced() {
        assert!(StrategyParams::su2_one(-0.1).is_err());
        assert!(StrategyParams::su2_two(0.1, 2.0).is_err());
        assert!(StrategyParams::classical_mixed(1.5).is_err());
        assert!(StrategyParams::su2_three(0.1, 0.1, f64::NAN).is_err());
    }

    #[test]
    fn embedding_for_both_initial_states() {
        let s00 = ProductState::new(0, 0);
        let s01 = ProductState::new(0, 1);
        assert_eq!(
            classical_embedding("A", s00).unwrap(),
            ClassicalOp::Identity
        );
        assert_eq!(
            classical_embedding("W", s00).unwrap(),
            ClassicalOp::Identity
        );
        assert_eq!(classical_embedding("N", s00).unwrap(), ClassicalOp::Flip);
        assert_eq!(classical_embedding("L", s00).unwrap(), ClassicalOp::Flip);
        assert_eq!(
            classical_embedding("A", s01).unwrap(),
            ClassicalOp::Identity
        );
        assert_eq!(
            classical_embedding("L", s01).unwrap(),
            ClassicalOp::Identity
        );
        assert_eq!(classical_embedding("N", s01).unwrap(), ClassicalOp::Flip);
        assert_eq!(classical_embedding("W", s01).unwrap(), ClassicalOp::Flip);
        assert_eq!(
            classical_embedding("Z", s00),
            Err(StrategyError::UnknownLabel)
        );
    }

    #[test]
    fn grids_have_the_declared_shape() {
        let pure = grid(StrategySpace::ClassicalPure, 33).unwrap();
        assert_eq!(pure.len(), 2);

        let one = grid(StrategySpace::Su2One, 3).unwrap();
        assert_eq!(one.len(), 3);
        let thetas: Vec<f64> = one
            .iter()
            .map(|p| match p {
                StrategyParams::Su2One { theta } => *theta,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(thetas, alloc::vec![0.0, FRAC_PI_2, PI]);

        let two = grid(StrategySpace::Su2Two, 5).unwrap();
        assert_eq!(two.len(), 25);
        assert!(two.contains(&StrategyParams::Su2Two {
            theta: 0.0,
            phi: FRAC_PI_2
        }));

        assert!(matches!(
            grid(StrategySpace::Su2One, 1),
            Err(StrategyError::BadResolution { .. })
        ));
    }

    #[test]
    fn grid_matrices_are_unitary_with_unit_modulus_determinant() {
        for space in [
            StrategySpace::Su2One,
            StrategySpace::Su2Two,
            StrategySpace::Su2Three,
        ] {
            for p in grid(space, 9).unwrap() {
                let u = to_matrix(&p).unwrap();
                assert!(u.unitarity_defect() <= 1e-12, "{p:?}");
                let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
                assert!((det.abs() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn pinned_parameters_embed_smaller_spaces() {
        for p in grid(StrategySpace::Su2One, 17).unwrap() {
            let theta = match p {
                StrategyParams::Su2One { theta } => theta,
                _ => unreachable!(),
            };
            let one = to_matrix(&p).unwrap();
            let two = to_matrix(&StrategyParams::Su2Two { theta, phi: 0.0 }).unwrap();
            let three = to_matrix(&StrategyParams::Su2Three {
                theta,
                phi: 0.0,
                varphi: 0.0,
            })
            .unwrap();
            assert_op_eq(&one, &two, 0.0);
            assert_op_eq(&one, &three, 0.0);
        }
        for p in grid(StrategySpace::Su2Two, 9).unwrap() {
            let (theta, phi) = match p {
                StrategyParams::Su2Two { theta, phi } => (theta, phi),
                _ => unreachable!(),
            };
            let two = to_matrix(&p).unwrap();
            let three = to_matrix(&StrategyParams::Su2Three {
                theta,
                phi,
                varphi: 0.0,
            })
            .unwrap();
            assert_op_eq(&two, &three, 0.0);
        }
    }

    #[test]
    fn distance_examples() {
        let id = Operator2::identity();
        assert_eq!(operator_distance(&id, &id).unwrap(), 0.0);

        let phased = Operator2::new([[Complex::I, Complex::ZERO], [Complex::ZERO, Complex::I]]);
        assert!(operator_distance(&id, &phased).unwrap() <= 1e-12);

        let d = operator_distance(&id, &Operator2::flip()).unwrap();
        assert!((d - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn distance_is_a_phase_invariant_semimetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let a = StrategyParams::Su2Three {
                theta: rng.gen::<f64>() * PI,
                phi: rng.gen::<f64>() * FRAC_PI_2,
                varphi: rng.gen::<f64>() * FRAC_PI_2,
            };
            let b = StrategyParams::Su2Three {
                theta: rng.gen::<f64>() * PI,
                phi: rng.gen::<f64>() * FRAC_PI_2,
                varphi: rng.gen::<f64>() * FRAC_PI_2,
            };
            let u = to_matrix(&a).unwrap();
            let v = to_matrix(&b).unwrap();
            let duv = operator_distance(&u, &v).unwrap();
            let dvu = operator_distance(&v, &u).unwrap();
            assert!((duv - dvu).abs() <= 1e-12);
            assert!(duv >= 0.0);

            // Multiplying by a global phase never changes the distance.
            // The sqrt amplifies roundoff near zero, so the bound is ~1e-7.
            let g = Complex::phase(rng.gen::<f64>() * core::f64::consts::TAU);
            let w = Operator2::new([
                [g * v.get(0, 0), g * v.get(0, 1)],
                [g * v.get(1, 0), g * v.get(1, 1)],
            ]);
            assert!((operator_distance(&u, &w).unwrap() - duv).abs() <= 1e-6);
            assert!(operator_distance(&v, &w).unwrap() <= 1e-6);
        }
    }

    #[test]
    fn distance_rejects_non_unitary_input() {
        let bad = Operator2::new([
            [Complex::real(2.0), Complex::ZERO],
            [Complex::ZERO, Complex::real(2.0)],
        ]);
        assert!(matches!(
            operator_distance(&bad, &Operator2::identity()),
            Err(StrategyError::NonUnitary { .. })
        ));
    }

    #[test]
    fn flip_tensor_convention_reproduces_entangler_action() {
        // J = (I + i (isy x isy)) / sqrt2 maps |00> to (|00> + i|11>)/sqrt2.
        let f = tensor_product(&Operator2::flip(), &Operator2::flip());
        let v = f.mul_vec(&[Complex::ONE, Complex::ZERO, Complex::ZERO, Complex::ZERO]);
        assert!((v[3] - Complex::ONE).abs() <= 1e-15);
    }
}
