//! Classical 2x2 game representation: classification, pure/mixed Nash
//! analysis in closed form, and the dilemma grading used by the reports.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Which player a value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Alice,
    Bob,
}

/// Payoff matrix of a two-player, two-move game.
///
/// Cells are stored in outcome order `n = 2i + j` where `i` indexes
/// Alice's move (row) and `j` Bob's move (column), so `alice[n]` is also
/// the payoff the referee assigns to measurement outcome `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffMatrix2x2 {
    pub alice: [f64; 4],
    pub bob: [f64; 4],
    pub row_labels: [String; 2],
    pub col_labels: [String; 2],
}

impl PayoffMatrix2x2 {
    pub fn new(
        alice: [f64; 4],
        bob: [f64; 4],
        row_labels: [&str; 2],
        col_labels: [&str; 2],
    ) -> Self {
        debug_assert!(alice.iter().chain(bob.iter()).all(|v| v.is_finite()));
        debug_assert!(row_labels[0] != row_labels[1] && col_labels[0] != col_labels[1]);
        PayoffMatrix2x2 {
            alice,
            bob,
            row_labels: [String::from(row_labels[0]), String::from(row_labels[1])],
            col_labels: [String::from(col_labels[0]), String::from(col_labels[1])],
        }
    }

    /// The Welfare Game: Alice chooses Aid/No-aid, Bob chooses Work/Loaf.
    pub fn welfare() -> Self {
        PayoffMatrix2x2::new(
            [3.0, -1.0, -1.0, 0.0],
            [2.0, 3.0, 1.0, 0.0],
            ["A", "N"],
            ["W", "L"],
        )
    }

    /// Payoff pair at the pure cell (row, col).
    pub fn cell(&self, row: usize, col: usize) -> (f64, f64) {
        let n = 2 * row + col;
        (self.alice[n], self.bob[n])
    }
}

/// Structural classification of a 2x2 game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameClassification {
    pub symmetric: bool,
    pub zero_sum: bool,
    /// True when the game has at least one pure Nash equilibrium.
    pub coordination: bool,
}

/// A point in the classical mixed-strategy square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedProfile {
    /// Probability Alice plays row 0.
    pub p: f64,
    /// Probability Bob plays column 0.
    pub q: f64,
}

impl MixedProfile {
    pub fn new(p: f64, q: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        MixedProfile { p, q }
    }
}

/// Grading of how well a unique equilibrium resolves the Samaritan's
/// dilemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DilemmaCase {
    /// Alice's payoff is negative: the equilibrium exists but she loses.
    CaseI,
    /// Both payoffs non-negative, Alice at most Bob.
    CaseII,
    /// Both payoffs non-negative, Alice strictly ahead.
    CaseIII,
    /// No unique equilibrium to grade.
    NotApplicable,
}

impl DilemmaCase {
    /// Compact grade used in the summary grid.
    pub fn short(&self) -> &'static str {
        match self {
            DilemmaCase::CaseI => "I",
            DilemmaCase::CaseII => "II",
            DilemmaCase::CaseIII => "III",
            DilemmaCase::NotApplicable => "n.a",
        }
    }
}

impl fmt::Display for DilemmaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DilemmaCase::CaseI => write!(f, "CASE_I"),
            DilemmaCase::CaseII => write!(f, "CASE_II"),
            DilemmaCase::CaseIII => write!(f, "CASE_III"),
            DilemmaCase::NotApplicable => write!(f, "n.a"),
        }
    }
}

/// Outcome of the closed-form mixed-equilibrium analysis.
#[derive(Clone, Debug, PartialEq)]
pub enum MixedNashOutcome {
    /// Interior equilibrium where both indifference equations have a
    /// solution strictly inside (0, 1).
    Interior {
        profile: MixedProfile,
        payoffs: (f64, f64),
    },
    /// No interior solution; the pure equilibria (possibly none) are the
    /// whole story.
    PureOnly(Vec<(usize, usize)>),
}

/// Errors from the classical analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GameError {
    /// An indifference equation is identically satisfied; the flat
    /// direction is reported instead of an arbitrary point.
    Degenerate { flat_for: Player },
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::Degenerate { flat_for } => {
                let who = match flat_for {
                    Player::Alice => "Alice",
                    Player::Bob => "Bob",
                };
                write!(f, "degenerate game: {who} is indifferent everywhere")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GameError {}

/// Classify a game as symmetric / zero-sum / coordination.
pub fn classify(m: &PayoffMatrix2x2) -> GameClassification {
    let [a, b, c, d] = m.alice;
    let [w, x, y, z] = m.bob;
    let symmetric = a == w && b == y && x == c && d == z;
    let zero_sum = a + w == 0.0 && b + x == 0.0 && c + y == 0.0 && d + z == 0.0;
    let coordination = !pure_nash(m).is_empty();
    GameClassification {
        symmetric,
        zero_sum,
        coordination,
    }
}

/// All pure cells that are mutual best responses. Ties count, so weak
/// equilibria are included.
pub fn pure_nash(m: &PayoffMatrix2x2) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for row in 0..2 {
        for col in 0..2 {
            let (a_here, b_here) = m.cell(row, col);
            let (a_other, _) = m.cell(1 - row, col);
            let (_, b_other) = m.cell(row, 1 - col);
            if a_here >= a_other && b_here >= b_other {
                out.push((row, col));
            }
        }
    }
    out
}

/// Expected payoffs at a mixed profile: the bilinear average over cells.
pub fn mixed_payoffs(m: &PayoffMatrix2x2, prof: &MixedProfile) -> (f64, f64) {
    let weights = [
        prof.p * prof.q,
        prof.p * (1.0 - prof.q),
        (1.0 - prof.p) * prof.q,
        (1.0 - prof.p) * (1.0 - prof.q),
    ];
    let mut pa = 0.0;
    let mut pb = 0.0;
    for n in 0..4 {
        pa += weights[n] * m.alice[n];
        pb += weights[n] * m.bob[n];
    }
    (pa, pb)
}

/// Closed-form mixed equilibrium of a 2x2 game.
///
/// Each player's mixing weight is pinned by the opponent's indifference
/// equation; an interior equilibrium is reported only when both solutions
/// land strictly inside (0, 1), otherwise the pure analysis is returned.
pub fn mixed_nash_2x2(m: &PayoffMatrix2x2) -> Result<MixedNashOutcome, GameError> {
    let [a, b, c, d] = m.alice;
    let [w, x, y, z] = m.bob;

    // q equalizes Alice's two rows: q*a + (1-q)*b = q*c + (1-q)*d.
    let q_den = (a - c) + (d - b);
    let q_num = d - b;
    // p equalizes Bob's two columns: p*w + (1-p)*y = p*x + (1-p)*z.
    let p_den = (w - x) + (z - y);
    let p_num = z - y;

    if q_den == 0.0 && q_num == 0.0 {
        return Err(GameError::Degenerate {
            flat_for: Player::Alice,
        });
    }
    if p_den == 0.0 && p_num == 0.0 {
        return Err(GameError::Degenerate {
            flat_for: Player::Bob,
        });
    }

    if q_den != 0.0 && p_den != 0.0 {
        let q = q_num / q_den;
        let p = p_num / p_den;
        if p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0 {
            let profile = MixedProfile::new(p, q);
            let payoffs = mixed_payoffs(m, &profile);
            return Ok(MixedNashOutcome::Interior { profile, payoffs });
        }
    }
    Ok(MixedNashOutcome::PureOnly(pure_nash(m)))
}

/// Apply the dilemma grading to an equilibrium payoff pair.
pub fn dilemma_case(payoffs: (f64, f64), unique_ne: bool) -> DilemmaCase {
    if !unique_ne {
        return DilemmaCase::NotApplicable;
    }
    let (pa, pb) = payoffs;
    if pa < 0.0 {
        DilemmaCase::CaseI
    } else if pa <= pb {
        DilemmaCase::CaseII
    } else if pb >= 0.0 {
        DilemmaCase::CaseIII
    } else {
        // 0 <= alice, bob < 0: outside the graded cases.
        DilemmaCase::NotApplicable
    }
}

/// Classical/entangled communication cost of playing an extended game
/// with `n_a` x `n_b` named strategies: c-bits to announce a choice, and
/// the two shared entangled pairs the protocol consumes.
pub fn communication_cost(n_a: usize, n_b: usize) -> (u32, u32) {
    assert!(n_a >= 2 && n_b >= 2, "strategy counts must be at least 2");
    let cbits = ceil_log2(n_a) + ceil_log2(n_b);
    (cbits, 2)
}

fn ceil_log2(n: usize) -> u32 {
    usize::BITS - (n - 1).leading_zeros()
}
