//! Nash equilibrium search over pairs of strategy spaces.
//!
//! The search is exhaustive-grid mutual-best-response with local
//! refinement, not gradient descent: the payoff surfaces are smooth
//! trigonometric polynomials but have flat directions, and grids with
//! explicit certification stay robust and reproducible there. Candidates
//! are grid profiles where neither player can gain more than a
//! grid-scale tolerance; each candidate is refined (coordinate ascent,
//! then a deviation-gap descent that pins interior saddle points), then
//! certified by re-scanning both players' deviation sets on a finer grid.
//! Only profiles whose certified gaps stay within `epsilon` are reported.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::game::{
    dilemma_case, mixed_nash_2x2, DilemmaCase, MixedNashOutcome, PayoffMatrix2x2, Player,
};
use crate::linalg::{tensor_product, Operator2, Operator4};
use crate::quantize::{
    build_correlation, build_entangler, expected_payoffs, play_round, CorrelationKind,
    CorrelationState, ProductState,
};
use crate::strategy::{
    grid, operator_distance, to_matrix, ClassicalOp, StrategyParams, StrategySpace,
};

/// Tuning knobs for the equilibrium search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Grid points per continuous parameter.
    pub grid_resolution: usize,
    /// Coordinate-ascent passes applied to each candidate.
    pub refine_iters: usize,
    /// Certification gap: a profile is an equilibrium when no unilateral
    /// deviation improves a player by more than this.
    pub epsilon: f64,
    /// Phase-invariant operator distance below which two candidates are
    /// considered the same equilibrium.
    pub dedupe_radius: f64,
    /// Hard cap on grid profiles evaluated per search.
    pub max_profiles: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_resolution: 33,
            refine_iters: 8,
            epsilon: 1e-6,
            dedupe_radius: 1e-2,
            max_profiles: 4_000_000,
        }
    }
}

/// Errors from the search layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SearchError {
    /// The requested grids exceed the configured profile cap.
    BudgetExceeded { profiles: usize, cap: usize },
    /// Configuration violates its invariants.
    BadConfig(&'static str),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::BudgetExceeded { profiles, cap } => {
                write!(f, "search budget exceeded: {profiles} profiles > cap {cap}")
            }
            SearchError::BadConfig(msg) => write!(f, "bad search config: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SearchError {}

impl SearchConfig {
    fn validate(&self) -> Result<(), SearchError> {
        if self.epsilon <= 0.0 {
            return Err(SearchError::BadConfig("epsilon must be positive"));
        }
        if self.grid_resolution < 9 {
            return Err(SearchError::BadConfig("grid resolution must be at least 9"));
        }
        if self.refine_iters == 0 {
            return Err(SearchError::BadConfig("refine_iters must be at least 1"));
        }
        Ok(())
    }
}

/// A certified equilibrium candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateNE {
    pub params_a: StrategyParams,
    pub params_b: StrategyParams,
    pub payoffs: (f64, f64),
    /// Largest unilateral improvement found for Alice on the
    /// verification grid.
    pub gap_a: f64,
    /// Same for Bob.
    pub gap_b: f64,
}

/// Result of an equilibrium search.
#[derive(Clone, Debug, PartialEq)]
pub struct NEReport {
    pub equilibria: Vec<CandidateNE>,
    /// Exactly one equilibrium after phase deduplication.
    pub unique: bool,
    /// Every profile on the grid yields the same payoffs.
    pub flat: bool,
    /// The constant payoff pair of a flat game.
    pub flat_payoffs: Option<(f64, f64)>,
    pub dilemma: DilemmaCase,
}

/// Payoff evaluation for strategy points, including classical mixtures,
/// against a fixed correlation state and payoff matrix.
pub struct Evaluator<'a> {
    state: &'a CorrelationState,
    matrix: &'a PayoffMatrix2x2,
    entangler_dag: Operator4,
}

#[derive(Clone, Copy)]
enum Realized {
    Op(Operator2),
    Mix(f64),
}

impl<'a> Evaluator<'a> {
    pub fn new(state: &'a CorrelationState, matrix: &'a PayoffMatrix2x2) -> Self {
        Evaluator {
            state,
            matrix,
            entangler_dag: build_entangler().dagger(),
        }
    }

    fn realize(params: &StrategyParams) -> Realized {
        match params {
            StrategyParams::ClassicalMixed { p } => Realized::Mix(*p),
            other => Realized::Op(to_matrix(other).expect("non-mixed strategy has a matrix")),
        }
    }

    fn round(&self, ua: &Operator2, ub: &Operator2) -> (f64, f64) {
        // Same computation as `play_round`, with the inverse entangler
        // cached across the whole sweep.
        let m = self.entangler_dag.mul(&tensor_product(ua, ub));
        let mut probs = [0.0f64; 4];
        for n in 0..4 {
            let mut acc = 0.0;
            for c in 0..4 {
                let mut row = crate::linalg::Complex::ZERO;
                for k in 0..4 {
                    row = row + m.get(n, k) * self.state.rho.get(k, c);
                }
                let w = row * m.get(n, c).conj();
                acc += w.re;
            }
            probs[n] = acc.clamp(0.0, 1.0);
        }
        let mut pa = 0.0;
        let mut pb = 0.0;
        for n in 0..4 {
            pa += self.matrix.alice[n] * probs[n];
            pb += self.matrix.bob[n] * probs[n];
        }
        (pa, pb)
    }

    fn payoffs_realized(&self, a: &Realized, b: &Realized) -> (f64, f64) {
        match (a, b) {
            (Realized::Op(ua), Realized::Op(ub)) => self.round(ua, ub),
            (Realized::Mix(p), Realized::Op(ub)) => {
                let top = self.round(&Operator2::identity(), ub);
                let bot = self.round(&Operator2::flip(), ub);
                lerp(top, bot, *p)
            }
            (Realized::Op(ua), Realized::Mix(q)) => {
                let left = self.round(ua, &Operator2::identity());
                let right = self.round(ua, &Operator2::flip());
                lerp(left, right, *q)
            }
            (Realized::Mix(p), Realized::Mix(q)) => {
                let ii = self.round(&Operator2::identity(), &Operator2::identity());
                let if_ = self.round(&Operator2::identity(), &Operator2::flip());
                let fi = self.round(&Operator2::flip(), &Operator2::identity());
                let ff = self.round(&Operator2::flip(), &Operator2::flip());
                let top = lerp(ii, if_, *q);
                let bot = lerp(fi, ff, *q);
                lerp(top, bot, *p)
            }
        }
    }

    /// Expected payoffs of a full profile.
    pub fn payoffs(&self, pa: &StrategyParams, pb: &StrategyParams) -> (f64, f64) {
        self.payoffs_realized(&Self::realize(pa), &Self::realize(pb))
    }
}

fn lerp(a: (f64, f64), b: (f64, f64), p: f64) -> (f64, f64) {
    (p * a.0 + (1.0 - p) * b.0, p * a.1 + (1.0 - p) * b.1)
}

fn side_value(payoffs: (f64, f64), side: Player) -> f64 {
    match side {
        Player::Alice => payoffs.0,
        Player::Bob => payoffs.1,
    }
}

/// Largest grid step over a space's continuous parameters.
fn max_grid_step(space: StrategySpace, resolution: usize) -> f64 {
    space
        .param_ranges()
        .iter()
        .map(|(lo, hi)| (hi - lo) / (resolution - 1) as f64)
        .fold(0.0, f64::max)
}

/// One monotone coordinate-ascent run for a single player, opponent
/// frozen. Only accepts moves that improve the refining player's payoff.
fn ascend<F: Fn(&StrategyParams) -> f64>(
    eval: F,
    start: StrategyParams,
    resolution: usize,
    iters: usize,
) -> (StrategyParams, f64) {
    let ranges = start.space().param_ranges();
    let mut cur = start;
    let mut val = eval(&cur);
    if ranges.is_empty() {
        return (cur, val);
    }
    let mut steps: Vec<f64> = ranges
        .iter()
        .map(|(lo, hi)| (hi - lo) / (resolution - 1) as f64 / 2.0)
        .collect();
    for _ in 0..iters {
        let before = val;
        for slot in 0..ranges.len() {
            for dir in [1.0, -1.0] {
                let mut coords = cur.coords();
                coords[slot] += dir * steps[slot];
                let cand = cur.with_coords(&coords);
                let cand_val = eval(&cand);
                if cand_val > val {
                    cur = cand;
                    val = cand_val;
                }
            }
        }
        debug_assert!(val >= before, "ascent pass decreased the payoff");
        for s in steps.iter_mut() {
            *s /= 2.0;
        }
    }
    (cur, val)
}

/// Best deviation payoff for one player: scan the player's grid against
/// the frozen opponent, then sharpen the best point by ascent.
fn best_deviation(
    eval: &Evaluator<'_>,
    side: Player,
    own_space: StrategySpace,
    own_grid: &[StrategyParams],
    opponent: &StrategyParams,
    resolution: usize,
    refine_iters: usize,
) -> f64 {
    let opp = Evaluator::realize(opponent);
    let value = |p: &StrategyParams| {
        let own = Evaluator::realize(p);
        let payoffs = match side {
            Player::Alice => eval.payoffs_realized(&own, &opp),
            Player::Bob => eval.payoffs_realized(&opp, &own),
        };
        side_value(payoffs, side)
    };
    let mut best_val = f64::NEG_INFINITY;
    let mut best = own_grid[0];
    for point in own_grid {
        let v = value(point);
        if v > best_val {
            best_val = v;
            best = *point;
        }
    }
    if own_space.param_count() == 0 {
        return best_val;
    }
    let (_, sharpened) = ascend(value, best, resolution, refine_iters);
    sharpened.max(best_val)
}

/// Unilateral improvement gaps of a profile, one per player.
#[allow(clippy::too_many_arguments)]
fn deviation_gaps(
    eval: &Evaluator<'_>,
    pa: &StrategyParams,
    pb: &StrategyParams,
    grid_a: &[StrategyParams],
    grid_b: &[StrategyParams],
    space_a: StrategySpace,
    space_b: StrategySpace,
    resolution: usize,
    refine_iters: usize,
) -> (f64, f64) {
    let base = eval.payoffs(pa, pb);
    let best_a = best_deviation(
        eval,
        Player::Alice,
        space_a,
        grid_a,
        pb,
        resolution,
        refine_iters,
    );
    let best_b = best_deviation(
        eval,
        Player::Bob,
        space_b,
        grid_b,
        pa,
        resolution,
        refine_iters,
    );
    ((best_a - base.0).max(0.0), (best_b - base.1).max(0.0))
}

/// Grid scan of one player's best responses to a fixed opponent
/// strategy: every point within `epsilon` of the grid max is kept and
/// refined by coordinate ascent.
pub fn best_response(
    space: StrategySpace,
    opponent: &StrategyParams,
    state: &CorrelationState,
    m: &PayoffMatrix2x2,
    cfg: &SearchConfig,
    side: Player,
) -> Result<Vec<(StrategyParams, f64)>, SearchError> {
    cfg.validate()?;
    let points = grid(space, cfg.grid_resolution).expect("resolution validated");
    if points.len() > cfg.max_profiles {
        return Err(SearchError::BudgetExceeded {
            profiles: points.len(),
            cap: cfg.max_profiles,
        });
    }
    let eval = Evaluator::new(state, m);
    let opp = Evaluator::realize(opponent);
    let value = |p: &StrategyParams| {
        let own = Evaluator::realize(p);
        let payoffs = match side {
            Player::Alice => eval.payoffs_realized(&own, &opp),
            Player::Bob => eval.payoffs_realized(&opp, &own),
        };
        side_value(payoffs, side)
    };
    let values: Vec<f64> = points.iter().map(&value).collect();
    let max = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut out = Vec::new();
    for (point, v) in points.iter().zip(values.iter()) {
        if *v >= max - cfg.epsilon {
            let (refined, refined_val) =
                ascend(&value, *point, cfg.grid_resolution, cfg.refine_iters);
            out.push((refined, refined_val));
        }
    }
    Ok(out)
}

/// Deviation gaps of a candidate profile on the verification grid
/// (double the search density), sharpened by ascent. A candidate is
/// certified when both gaps stay within `cfg.epsilon`.
pub fn verify_ne(
    pa: &StrategyParams,
    pb: &StrategyParams,
    space_a: StrategySpace,
    space_b: StrategySpace,
    state: &CorrelationState,
    m: &PayoffMatrix2x2,
    cfg: &SearchConfig,
) -> (f64, f64) {
    let eval = Evaluator::new(state, m);
    let fine = 2 * cfg.grid_resolution - 1;
    let grid_a = grid(space_a, fine).expect("resolution validated");
    let grid_b = grid(space_b, fine).expect("resolution validated");
    deviation_gaps(
        &eval,
        pa,
        pb,
        &grid_a,
        &grid_b,
        space_a,
        space_b,
        fine,
        cfg.refine_iters + 4,
    )
}

/// Alternating per-player coordinate ascent on a candidate profile.
/// Each pass never decreases the refining player's payoff.
fn alternating_refine(
    eval: &Evaluator<'_>,
    mut pa: StrategyParams,
    mut pb: StrategyParams,
    resolution: usize,
    iters: usize,
) -> (StrategyParams, StrategyParams) {
    let ranges_a = pa.space().param_ranges();
    let ranges_b = pb.space().param_ranges();
    if ranges_a.is_empty() && ranges_b.is_empty() {
        return (pa, pb);
    }
    let step0 = |ranges: &[(f64, f64)], slot: usize, resolution: usize| {
        (ranges[slot].1 - ranges[slot].0) / (resolution - 1) as f64 / 2.0
    };
    let mut scale = 1.0;
    for _ in 0..iters {
        // Alice's pass.
        let mut val = eval.payoffs(&pa, &pb).0;
        let before_a = val;
        for slot in 0..ranges_a.len() {
            for dir in [1.0, -1.0] {
                let mut coords = pa.coords();
                coords[slot] += dir * step0(ranges_a, slot, resolution) * scale;
                let cand = pa.with_coords(&coords);
                let cand_val = eval.payoffs(&cand, &pb).0;
                if cand_val > val {
                    pa = cand;
                    val = cand_val;
                }
            }
        }
        debug_assert!(val >= before_a);
        // Bob's pass.
        let mut val = eval.payoffs(&pa, &pb).1;
        let before_b = val;
        for slot in 0..ranges_b.len() {
            for dir in [1.0, -1.0] {
                let mut coords = pb.coords();
                coords[slot] += dir * step0(ranges_b, slot, resolution) * scale;
                let cand = pb.with_coords(&coords);
                let cand_val = eval.payoffs(&pa, &cand).1;
                if cand_val > val {
                    pb = cand;
                    val = cand_val;
                }
            }
        }
        debug_assert!(val >= before_b);
        scale /= 2.0;
    }
    (pa, pb)
}

/// Descend the total deviation gap of a profile toward zero. Coordinate
/// ascent alone orbits interior saddle equilibria (each player's payoff
/// is flat there); driving the gap itself to zero pins them. The work is
/// bounded by `max_gap_evals` deviation scans.
#[allow(clippy::too_many_arguments)]
fn gap_descent(
    eval: &Evaluator<'_>,
    mut pa: StrategyParams,
    mut pb: StrategyParams,
    grid_a: &[StrategyParams],
    grid_b: &[StrategyParams],
    space_a: StrategySpace,
    space_b: StrategySpace,
    resolution: usize,
    refine_iters: usize,
    target: f64,
    max_gap_evals: usize,
) -> (StrategyParams, StrategyParams, f64, f64) {
    let mut evals_left = max_gap_evals;
    let gaps = |pa: &StrategyParams, pb: &StrategyParams| {
        deviation_gaps(
            eval,
            pa,
            pb,
            grid_a,
            grid_b,
            space_a,
            space_b,
            resolution,
            refine_iters,
        )
    };
    let (mut ga, mut gb) = gaps(&pa, &pb);
    let ranges_a = pa.space().param_ranges();
    let ranges_b = pb.space().param_ranges();
    let slots = ranges_a.len() + ranges_b.len();
    if slots == 0 || (ga <= target && gb <= target) {
        return (pa, pb, ga, gb);
    }
    let base_step: Vec<f64> = ranges_a
        .iter()
        .chain(ranges_b.iter())
        .map(|(lo, hi)| (hi - lo) / (resolution - 1) as f64 / 2.0)
        .collect();
    let mut scale = 1.0f64;
    let mut silent_levels = 0usize;
    // Halving levels: enough to localize a saddle to ~1e-7 of a grid step.
    'levels: for _level in 0..26 {
        if ga <= target && gb <= target {
            break;
        }
        let mut level_improved = false;
        // Sweep all coordinates at the current scale until stuck.
        for _sweep in 0..2 {
            let mut improved = false;
            for slot in 0..slots {
                for dir in [1.0, -1.0] {
                    if evals_left == 0 {
                        break 'levels;
                    }
                    evals_left -= 1;
                    let (ca, cb) = {
                        let mut coords_a = pa.coords();
                        let mut coords_b = pb.coords();
                        if slot < ranges_a.len() {
                            coords_a[slot] += dir * base_step[slot] * scale;
                        } else {
                            coords_b[slot - ranges_a.len()] += dir * base_step[slot] * scale;
                        }
                        (pa.with_coords(&coords_a), pb.with_coords(&coords_b))
                    };
                    let (ga2, gb2) = gaps(&ca, &cb);
                    if ga2 + gb2 < ga + gb - 1e-15 {
                        pa = ca;
                        pb = cb;
                        ga = ga2;
                        gb = gb2;
                        improved = true;
                        level_improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if level_improved {
            silent_levels = 0;
        } else {
            silent_levels += 1;
            // A |linear| landscape accepts again within a couple of
            // halvings; a plateau stuck at a positive gap never does.
            if silent_levels >= 4 {
                break;
            }
        }
        scale /= 2.0;
    }
    (pa, pb, ga, gb)
}

/// Phase-invariant distance between two strategy points of the same
/// space (mixtures compare by weight).
fn params_distance(a: &StrategyParams, b: &StrategyParams) -> f64 {
    match (a, b) {
        (StrategyParams::ClassicalMixed { p: x }, StrategyParams::ClassicalMixed { p: y }) => {
            crate::math::abs(x - y)
        }
        _ => {
            let ua = to_matrix(a).expect("non-mixed strategy has a matrix");
            let ub = to_matrix(b).expect("non-mixed strategy has a matrix");
            operator_distance(&ua, &ub).unwrap_or(1.0)
        }
    }
}

fn profile_distance(
    a: &(StrategyParams, StrategyParams),
    b: &(StrategyParams, StrategyParams),
) -> f64 {
    params_distance(&a.0, &b.0).max(params_distance(&a.1, &b.1))
}

fn coords_cmp(a: &CandidateNE, b: &CandidateNE) -> core::cmp::Ordering {
    let ka: Vec<f64> = a
        .params_a
        .coords()
        .into_iter()
        .chain(a.params_b.coords())
        .collect();
    let kb: Vec<f64> = b
        .params_a
        .coords()
        .into_iter()
        .chain(b.params_b.coords())
        .collect();
    for (x, y) in ka.iter().zip(kb.iter()) {
        match x.partial_cmp(y).expect("coords are finite") {
            core::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    core::cmp::Ordering::Equal
}

/// Search a pair of strategy spaces for certified Nash equilibria.
pub fn find_nash(
    space_a: StrategySpace,
    space_b: StrategySpace,
    state: &CorrelationState,
    m: &PayoffMatrix2x2,
    cfg: &SearchConfig,
) -> Result<NEReport, SearchError> {
    cfg.validate()?;
    let eval = Evaluator::new(state, m);

    if space_a == StrategySpace::ClassicalMixed && space_b == StrategySpace::ClassicalMixed {
        return Ok(mixed_mixed_search(&eval, m, cfg));
    }

    let grid_a = grid(space_a, cfg.grid_resolution).expect("resolution validated");
    let grid_b = grid(space_b, cfg.grid_resolution).expect("resolution validated");
    let profiles = grid_a.len().saturating_mul(grid_b.len());
    if profiles > cfg.max_profiles {
        return Err(SearchError::BudgetExceeded {
            profiles,
            cap: cfg.max_profiles,
        });
    }

    // Full payoff table in fixed grid order.
    let realized_a: Vec<Realized> = grid_a.iter().map(Evaluator::realize).collect();
    let realized_b: Vec<Realized> = grid_b.iter().map(Evaluator::realize).collect();
    let mut table = Vec::with_capacity(profiles);
    for ra in &realized_a {
        for rb in &realized_b {
            table.push(eval.payoffs_realized(ra, rb));
        }
    }

    // Flat game: every profile pays the same, so every profile is a weak
    // equilibrium; report the constant instead of enumerating the grid.
    let (mut lo_a, mut hi_a) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo_b, mut hi_b) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(a, b) in &table {
        lo_a = lo_a.min(a);
        hi_a = hi_a.max(a);
        lo_b = lo_b.min(b);
        hi_b = hi_b.max(b);
    }
    if hi_a - lo_a <= cfg.epsilon && hi_b - lo_b <= cfg.epsilon {
        let constant = table[0];
        return Ok(NEReport {
            equilibria: Vec::new(),
            unique: false,
            flat: true,
            flat_payoffs: Some(constant),
            dilemma: dilemma_case(constant, true),
        });
    }

    // Column maxima for Alice, row maxima for Bob.
    let nb = grid_b.len();
    let mut col_max_a = alloc::vec![f64::NEG_INFINITY; nb];
    let mut row_max_b = alloc::vec![f64::NEG_INFINITY; grid_a.len()];
    for (i, row) in table.chunks(nb).enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            col_max_a[j] = col_max_a[j].max(a);
            row_max_b[i] = row_max_b[i].max(b);
        }
    }

    // Candidate tolerance is grid-scale: near an interior equilibrium the
    // best on-grid profile can still leak a slope-times-step payoff gap
    // (at most ~5/4 h for this payoff range).
    let h = max_grid_step(space_a, cfg.grid_resolution)
        .max(max_grid_step(space_b, cfg.grid_resolution));
    let cand_tol = cfg.epsilon.max(1.5 * h);

    let mut candidates: Vec<(f64, StrategyParams, StrategyParams)> = Vec::new();
    for (i, row) in table.chunks(nb).enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            let table_gap = (col_max_a[j] - a) + (row_max_b[i] - b);
            if col_max_a[j] - a <= cand_tol && row_max_b[i] - b <= cand_tol {
                candidates.push((table_gap, grid_a[i], grid_b[j]));
            }
        }
    }

    // Refine candidates toward their local attractors, then merge points
    // that landed in the same lattice cell. Flat regions produce large
    // candidate clouds, so an O(n log n) bucket pass has to come before
    // any pairwise work.
    let lattice_key = |prof: &(StrategyParams, StrategyParams)| -> Vec<i64> {
        let mut key = Vec::new();
        for (params, space) in [(&prof.0, space_a), (&prof.1, space_b)] {
            if let StrategyParams::ClassicalPure { op } = params {
                key.push(match op {
                    ClassicalOp::Identity => -1,
                    ClassicalOp::Flip => -2,
                });
                continue;
            }
            for (coord, (lo, hi)) in params.coords().iter().zip(space.param_ranges()) {
                let unit = (hi - lo) / (cfg.grid_resolution - 1) as f64 / 4.0;
                key.push(libm::round((coord - lo) / unit) as i64);
            }
        }
        key
    };
    let mut buckets: alloc::collections::BTreeMap<Vec<i64>, (f64, StrategyParams, StrategyParams)> =
        alloc::collections::BTreeMap::new();
    for (table_gap, pa, pb) in candidates {
        // Keep the raw grid point as well as its refined image: refinement
        // concentrates strict equilibria but drifts away from interior
        // saddles, where the raw point is the better descent seed.
        let (ra, rb) = alternating_refine(&eval, pa, pb, cfg.grid_resolution, cfg.refine_iters);
        for prof in [(pa, pb), (ra, rb)] {
            let entry = buckets
                .entry(lattice_key(&prof))
                .or_insert((table_gap, prof.0, prof.1));
            if table_gap < entry.0 {
                *entry = (table_gap, prof.0, prof.1);
            }
        }
    }

    // Exact mutual best responses on the grid are screened in full; the
    // off-grid near misses (where interior saddles hide) are screened in
    // ascending table-gap order with a hard cap, which bounds the work on
    // flat plateaus.
    const MAX_NEAR_MISS_SCREENS: usize = 256;
    let mut exact: Vec<(StrategyParams, StrategyParams)> = Vec::new();
    let mut near: Vec<(f64, StrategyParams, StrategyParams)> = Vec::new();
    for (table_gap, pa, pb) in buckets.into_values() {
        if table_gap <= 1e-9 {
            exact.push((pa, pb));
        } else {
            near.push((table_gap, pa, pb));
        }
    }
    near.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .expect("gaps are finite")
            .then_with(|| {
                let cx: Vec<f64> = x.1.coords().into_iter().chain(x.2.coords()).collect();
                let cy: Vec<f64> = y.1.coords().into_iter().chain(y.2.coords()).collect();
                cx.partial_cmp(&cy).expect("coords are finite")
            })
    });
    near.truncate(MAX_NEAR_MISS_SCREENS);

    // Cheap deviation gaps on a coarse grid decide which representatives
    // are already equilibria and which are worth the descent.
    let coarse_res = 17.max(cfg.grid_resolution / 2 + 1);
    let coarse_a = grid(space_a, coarse_res).expect("resolution validated");
    let coarse_b = grid(space_b, coarse_res).expect("resolution validated");
    let mut ready: Vec<(StrategyParams, StrategyParams)> = Vec::new();
    let mut pending: Vec<(f64, StrategyParams, StrategyParams)> = Vec::new();
    for (pa, pb) in exact
        .into_iter()
        .chain(near.into_iter().map(|(_, pa, pb)| (pa, pb)))
    {
        let (ga, gb) = deviation_gaps(
            &eval,
            &pa,
            &pb,
            &coarse_a,
            &coarse_b,
            space_a,
            space_b,
            coarse_res,
            cfg.refine_iters,
        );
        if ga <= cfg.epsilon && gb <= cfg.epsilon {
            ready.push((pa, pb));
        } else if ga + gb <= 2.0 * cand_tol {
            pending.push((ga + gb, pa, pb));
        }
    }
    pending.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .expect("gaps are finite")
            .then_with(|| {
                let cx: Vec<f64> = x.1.coords().into_iter().chain(x.2.coords()).collect();
                let cy: Vec<f64> = y.1.coords().into_iter().chain(y.2.coords()).collect();
                cx.partial_cmp(&cy).expect("coords are finite")
            })
    });

    // Interior saddles (the smallest pending gaps) get pinned by the
    // descent. Reps inside the basin of an equilibrium that is already in
    // hand would only rediscover it, so they are skipped; a run of
    // failures means the rest is plateau noise.
    const DESCENT_FAILURE_STREAK: usize = 16;
    const DESCENT_GAP_EVALS: usize = 400;
    const MAX_DESCENTS: usize = 64;
    const MAX_PENDING: usize = 256;
    let basin_radius = cfg.dedupe_radius.max(1.5 * h);
    pending.truncate(MAX_PENDING);
    let mut failures = 0usize;
    let mut descents = 0usize;
    for (_, pa, pb) in pending {
        if failures >= DESCENT_FAILURE_STREAK || descents >= MAX_DESCENTS {
            break;
        }
        let prof = (pa, pb);
        if ready
            .iter()
            .any(|r| profile_distance(r, &prof) <= basin_radius)
        {
            continue;
        }
        descents += 1;
        let (pa, pb, ga, gb) = gap_descent(
            &eval,
            pa,
            pb,
            &coarse_a,
            &coarse_b,
            space_a,
            space_b,
            coarse_res,
            cfg.refine_iters,
            cfg.epsilon / 8.0,
            DESCENT_GAP_EVALS,
        );
        if ga <= cfg.epsilon && gb <= cfg.epsilon {
            ready.push((pa, pb));
            failures = 0;
        } else {
            failures += 1;
        }
    }

    // Certify on the verification grid (double density). A near miss gets
    // one more descent against the fine evaluator before rejection.
    let fine_res = 2 * cfg.grid_resolution - 1;
    let fine_a = grid(space_a, fine_res).expect("resolution validated");
    let fine_b = grid(space_b, fine_res).expect("resolution validated");
    let fine_gaps = |pa: &StrategyParams, pb: &StrategyParams| {
        deviation_gaps(
            &eval,
            pa,
            pb,
            &fine_a,
            &fine_b,
            space_a,
            space_b,
            fine_res,
            cfg.refine_iters + 4,
        )
    };
    let mut certified: Vec<CandidateNE> = Vec::new();
    for (pa, pb) in ready {
        let (mut pa, mut pb) = (pa, pb);
        let (mut gap_a, mut gap_b) = fine_gaps(&pa, &pb);
        // Polish anything not already well inside the certification gap:
        // a profile is reported with its payoffs, and those drift faster
        // than the gap does near an interior saddle.
        let target = cfg.epsilon / 8.0;
        if (gap_a > target || gap_b > target) && gap_a + gap_b <= 10.0 * cfg.epsilon {
            let polished = gap_descent(
                &eval,
                pa,
                pb,
                &fine_a,
                &fine_b,
                space_a,
                space_b,
                fine_res,
                cfg.refine_iters,
                cfg.epsilon / 8.0,
                160,
            );
            pa = polished.0;
            pb = polished.1;
            gap_a = polished.2;
            gap_b = polished.3;
        }
        if gap_a <= cfg.epsilon && gap_b <= cfg.epsilon {
            let payoffs = eval.payoffs(&pa, &pb);
            certified.push(CandidateNE {
                params_a: pa,
                params_b: pb,
                payoffs,
                gap_a,
                gap_b,
            });
        }
    }

    // Final dedup: keep the best-certified representative per cluster.
    certified.sort_by(coords_cmp);
    let mut equilibria: Vec<CandidateNE> = Vec::new();
    for cand in certified {
        let profile = (cand.params_a, cand.params_b);
        if let Some(existing) = equilibria
            .iter_mut()
            .find(|e| profile_distance(&(e.params_a, e.params_b), &profile) <= cfg.dedupe_radius)
        {
            if cand.gap_a.max(cand.gap_b) < existing.gap_a.max(existing.gap_b) {
                *existing = cand;
            }
        } else {
            equilibria.push(cand);
        }
    }

    let unique = equilibria.len() == 1;
    let dilemma = if unique {
        dilemma_case(equilibria[0].payoffs, true)
    } else {
        DilemmaCase::NotApplicable
    };
    Ok(NEReport {
        equilibria,
        unique,
        flat: false,
        flat_payoffs: None,
        dilemma,
    })
}

/// Mixed-versus-mixed search: solved in closed form from the four
/// operator cells so interior equilibria come out exact, not
/// grid-approximated.
fn mixed_mixed_search(eval: &Evaluator<'_>, m: &PayoffMatrix2x2, cfg: &SearchConfig) -> NEReport {
    let ops = [ClassicalOp::Identity, ClassicalOp::Flip];
    let mut alice = [0.0; 4];
    let mut bob = [0.0; 4];
    for (i, oa) in ops.iter().enumerate() {
        for (j, ob) in ops.iter().enumerate() {
            let (a, b) = eval.payoffs(
                &StrategyParams::classical_pure(*oa),
                &StrategyParams::classical_pure(*ob),
            );
            alice[2 * i + j] = a;
            bob[2 * i + j] = b;
        }
    }

    let lo_a = alice.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi_a = alice.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let lo_b = bob.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi_b = bob.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if hi_a - lo_a <= cfg.epsilon && hi_b - lo_b <= cfg.epsilon {
        let constant = (alice[0], bob[0]);
        return NEReport {
            equilibria: Vec::new(),
            unique: false,
            flat: true,
            flat_payoffs: Some(constant),
            dilemma: dilemma_case(constant, true),
        };
    }

    let op_game = PayoffMatrix2x2::new(alice, bob, ["id", "flip"], ["id", "flip"]);
    let mut profiles: Vec<(f64, f64)> = Vec::new();
    match mixed_nash_2x2(&op_game) {
        Ok(MixedNashOutcome::Interior { profile, .. }) => {
            profiles.push((profile.p, profile.q));
            for (i, j) in crate::game::pure_nash(&op_game) {
                profiles.push(((1 - i) as f64, (1 - j) as f64));
            }
        }
        Ok(MixedNashOutcome::PureOnly(cells)) => {
            for (i, j) in cells {
                profiles.push(((1 - i) as f64, (1 - j) as f64));
            }
        }
        // A fully indifferent player leaves no isolated point to report.
        Err(_) => {}
    }

    let mut equilibria = Vec::new();
    for (p, q) in profiles {
        let pa = StrategyParams::ClassicalMixed { p };
        let pb = StrategyParams::ClassicalMixed { p: q };
        let (gap_a, gap_b) = verify_ne(
            &pa,
            &pb,
            StrategySpace::ClassicalMixed,
            StrategySpace::ClassicalMixed,
            eval.state,
            m,
            cfg,
        );
        if gap_a <= cfg.epsilon && gap_b <= cfg.epsilon {
            equilibria.push(CandidateNE {
                params_a: pa,
                params_b: pb,
                payoffs: eval.payoffs(&pa, &pb),
                gap_a,
                gap_b,
            });
        }
    }
    equilibria.sort_by(coords_cmp);
    let unique = equilibria.len() == 1;
    let dilemma = if unique {
        dilemma_case(equilibria[0].payoffs, true)
    } else {
        DilemmaCase::NotApplicable
    };
    NEReport {
        equilibria,
        unique,
        flat: false,
        flat_payoffs: None,
        dilemma,
    }
}

/// Run the equilibrium search over a corrupted source for each supplied
/// mixing probability.
pub fn corrupted_sweep(
    p_values: &[f64],
    space_a: StrategySpace,
    space_b: StrategySpace,
    m: &PayoffMatrix2x2,
    cfg: &SearchConfig,
) -> Result<Vec<(f64, NEReport)>, SearchError> {
    let mut out = Vec::with_capacity(p_values.len());
    for &p in p_values {
        let state = build_correlation(CorrelationKind::Corrupted { p })
            .map_err(|_| SearchError::BadConfig("corrupted-source probability outside [0, 1]"))?;
        let report = find_nash(space_a, space_b, &state, m, cfg)?;
        out.push((p, report));
    }
    Ok(out)
}

/// A finite payoff matrix extended with named quantum operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub row_ops: Vec<Operator2>,
    pub col_ops: Vec<Operator2>,
    /// cells[row][col]
    pub cells: Vec<Vec<(f64, f64)>>,
    /// Mutual best responses within the finite matrix (ties count).
    pub ne_cells: Vec<(usize, usize)>,
}

/// Extend a 2x2 game with named operators: the original moves are
/// embedded as their classical operators (assignment depends on the
/// initial product state), the extras are appended, and every cell is
/// evaluated through the round pipeline.
pub fn build_extended_matrix(
    m: &PayoffMatrix2x2,
    extra_a: &[(String, Operator2)],
    extra_b: &[(String, Operator2)],
    state: &CorrelationState,
    initial: ProductState,
) -> ExtendedMatrix {
    // Positional embedding: Alice's first move is the identity; Bob's
    // first move is the identity exactly when the initial state is |x0>.
    let bob_first = if initial.g == 0 {
        ClassicalOp::Identity
    } else {
        ClassicalOp::Flip
    };
    let bob_second = match bob_first {
        ClassicalOp::Identity => ClassicalOp::Flip,
        ClassicalOp::Flip => ClassicalOp::Identity,
    };

    let mut row_labels: Vec<String> = m.row_labels.to_vec();
    let mut row_ops: Vec<Operator2> =
        alloc::vec![ClassicalOp::Identity.matrix(), ClassicalOp::Flip.matrix()];
    for (name, op) in extra_a {
        row_labels.push(name.clone());
        row_ops.push(*op);
    }
    let mut col_labels: Vec<String> = m.col_labels.to_vec();
    let mut col_ops: Vec<Operator2> = alloc::vec![bob_first.matrix(), bob_second.matrix()];
    for (name, op) in extra_b {
        col_labels.push(name.clone());
        col_ops.push(*op);
    }
    let unique_per_side = |labels: &[String]| {
        let mut names: Vec<&String> = labels.iter().collect();
        names.sort();
        names.windows(2).all(|w| w[0] != w[1])
    };
    debug_assert!(
        unique_per_side(&row_labels) && unique_per_side(&col_labels),
        "operator names must be unique per side"
    );

    let mut cells = Vec::with_capacity(row_ops.len());
    for ua in &row_ops {
        let mut row = Vec::with_capacity(col_ops.len());
        for ub in &col_ops {
            let dist = play_round(state, ua, ub).expect("named operators are unitary");
            row.push(expected_payoffs(&dist, m));
        }
        cells.push(row);
    }

    let mut ne_cells = Vec::new();
    for r in 0..cells.len() {
        for c in 0..cells[r].len() {
            let (a_here, b_here) = cells[r][c];
            let a_best = (0..cells.len()).all(|r2| cells[r2][c].0 <= a_here);
            let b_best = (0..cells[r].len()).all(|c2| cells[r][c2].1 <= b_here);
            if a_best && b_best {
                ne_cells.push((r, c));
            }
        }
    }

    ExtendedMatrix {
        row_labels,
        col_labels,
        row_ops,
        col_ops,
        cells,
        ne_cells,
    }
}
