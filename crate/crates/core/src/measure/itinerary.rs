//! Symbolic itineraries: separation times, centered cylinder words and
//! conditional expectations on cylinder cells.
//!
//! Words are sequences of continuity-branch labels: each flight is
//! labeled by the scatterer it hits together with the lattice translate
//! of the copy. Branch boundaries are exactly the tangential flights, so
//! these words are the computable surrogate of the partition into
//! connected singularity-free components (bare scatterer ids would lump
//! every whispering-gallery rebounce sequence into one annular cell that
//! never shrinks). Backward branches come from the time-reversal
//! involution, so only forward orbits are computed.

use crate::dynamics::{BilliardTable, PhasePoint};
use crate::measure::SrbMeasure;
use rand::Rng;
use std::collections::HashMap;
use thiserror::Error;

/// Centered itinerary word: branch labels from time `-m` to `m`.
pub type Word = Vec<u16>;

/// Branch label of one flight: destination scatterer id plus the
/// (clamped) lattice offset of the copy that was hit.
pub(crate) fn encode_symbol(n_ids: usize, id: usize, off: [i8; 2]) -> u16 {
    let ox = (off[0].clamp(-2, 2) + 2) as u16;
    let oy = (off[1].clamp(-2, 2) + 2) as u16;
    id as u16 + (n_ids as u16) * (5 * oy + ox)
}

/// Scatterer id carried by a symbol.
pub(crate) fn symbol_id(n_ids: usize, sym: u16) -> u16 {
    sym % n_ids as u16
}

const CENTER_OFF: [i8; 2] = [0, 0];

/// Offset code of the zero translate.
const ZERO_OFF_CODE: u16 = 12;

/// A word is hyperbolic when no flight in its window is a same-copy
/// rebounce. Rebounces (whispering-gallery bounces on one circular
/// scatterer) are isometries in the arc coordinate, so cells whose
/// window contains them do not contract in `r` no matter how deep the
/// word; every genuinely dispersing flight contracts the cell by the
/// expansion factor instead.
pub fn word_is_hyperbolic(n_ids: usize, word: &[u16]) -> bool {
    let m = word.len() / 2;
    let is_rebounce = |sym: u16, toward_center: u16| {
        sym / n_ids as u16 == ZERO_OFF_CODE && symbol_id(n_ids, sym) == symbol_id(n_ids, toward_center)
    };
    for i in m + 1..word.len() {
        if is_rebounce(word[i], word[i - 1]) {
            return false;
        }
    }
    for i in (0..m).rev() {
        if is_rebounce(word[i], word[i + 1]) {
            return false;
        }
    }
    true
}

/// Forward separation time of two points, possibly saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationResult {
    /// First iterate at which the orbits take different continuity
    /// branches (or exactly one of them grazes).
    Separated(usize),
    /// No separation observed up to the horizon.
    Saturated(usize),
}

#[derive(Debug, Error)]
#[error("itinerary word {0:?} is not present in the partition")]
pub struct MissingCell(pub Word);

/// Empirical surrogate of the forward separation time: the first
/// `n <= n_max` at which the branch itineraries of `x` and `y` disagree,
/// or at which exactly one orbit grazes.
pub fn separation_time(
    table: &BilliardTable,
    x: &PhasePoint,
    y: &PhasePoint,
    n_max: usize,
) -> SeparationResult {
    if x.scatterer != y.scatterer {
        return SeparationResult::Separated(0);
    }
    let mut a = *x;
    let mut b = *y;
    for n in 1..=n_max {
        let ra = table.next_collision(&a);
        let rb = table.next_collision(&b);
        match (ra, rb) {
            (Ok(na), Ok(nb)) => {
                if na.next.scatterer != nb.next.scatterer || na.offset != nb.offset {
                    return SeparationResult::Separated(n);
                }
                a = na.next;
                b = nb.next;
            }
            (Ok(_), Err(_)) | (Err(_), Ok(_)) => return SeparationResult::Separated(n),
            (Err(_), Err(_)) => return SeparationResult::Saturated(n_max),
        }
    }
    SeparationResult::Saturated(n_max)
}

/// Branch labels visited from time `-m` to `m`, or `None` when either
/// orbit branch grazes before depth `m`. The backward labels are read
/// off the involution orbit.
pub fn centered_word(table: &BilliardTable, x: &PhasePoint, m: usize) -> Option<Word> {
    let n_ids = table.scatterers().len();
    let mut word = Vec::with_capacity(2 * m + 1);
    if m > 0 {
        let back = table.orbit(&table.involution(x), m);
        if !back.is_complete() {
            return None;
        }
        for k in (1..=m).rev() {
            word.push(encode_symbol(n_ids, back.itinerary[k], back.offsets[k - 1]));
        }
    }
    word.push(encode_symbol(n_ids, x.scatterer, CENTER_OFF));
    if m > 0 {
        let fwd = table.orbit(x, m);
        if !fwd.is_complete() {
            return None;
        }
        for k in 1..=m {
            word.push(encode_symbol(n_ids, fwd.itinerary[k], fwd.offsets[k - 1]));
        }
    }
    Some(word)
}

/// One cell of a cylinder partition.
#[derive(Debug, Clone, Default)]
pub struct Cell {
    pub points: Vec<PhasePoint>,
    pub weight: f64,
}

/// Empirical cylinder partition at depth `m`: SRB samples keyed by their
/// centered branch words.
#[derive(Debug, Clone)]
pub struct CylinderPartition {
    pub depth: usize,
    pub cells: HashMap<Word, Cell>,
    pub total_samples: usize,
    /// Cells with fewer hits are flagged low-confidence and excluded
    /// from sup-type estimators.
    pub min_occupancy: usize,
    /// Samples dropped because a branch grazed before depth `m`.
    pub dropped: usize,
    /// Scatterer count of the underlying table (symbol alphabet base).
    pub n_ids: usize,
}

impl CylinderPartition {
    pub fn low_confidence_cells(&self) -> usize {
        self.cells.values().filter(|c| c.points.len() < self.min_occupancy).count()
    }

    pub fn total_weight(&self) -> f64 {
        self.cells.values().map(|c| c.weight).sum()
    }

    /// Number of distinct scatterer-id projections of the branch words;
    /// bounded by `(#scatterers)^(2m+1)`.
    pub fn id_word_count(&self) -> usize {
        let mut seen: std::collections::HashSet<Vec<u16>> = std::collections::HashSet::new();
        for w in self.cells.keys() {
            seen.insert(w.iter().map(|&s| symbol_id(self.n_ids, s)).collect());
        }
        seen.len()
    }
}

/// Build a cylinder partition from `n_samples` SRB draws.
pub fn cylinder_partition(
    table: &BilliardTable,
    measure: &SrbMeasure,
    m: usize,
    n_samples: usize,
    rng: &mut impl Rng,
) -> CylinderPartition {
    let mut cells: HashMap<Word, Cell> = HashMap::new();
    let mut kept = 0usize;
    let mut dropped = 0usize;
    for _ in 0..n_samples {
        let p = measure.sample(rng);
        match centered_word(table, &p, m) {
            Some(w) => {
                cells.entry(w).or_default().points.push(p);
                kept += 1;
            }
            None => dropped += 1,
        }
    }
    for cell in cells.values_mut() {
        cell.weight = cell.points.len() as f64 / kept as f64;
    }
    CylinderPartition {
        depth: m,
        cells,
        total_samples: kept,
        min_occupancy: 50,
        dropped,
        n_ids: table.scatterers().len(),
    }
}

/// Piecewise-constant conditional expectation on cylinder cells.
#[derive(Debug, Clone)]
pub struct CellFunction {
    pub depth: usize,
    pub values: HashMap<Word, f64>,
    /// Sup of `|f - g|` over sampled points of confident cells (those at
    /// or above the occupancy floor).
    pub sup_gap: f64,
    /// Same sup without the confidence filter, for transparency.
    pub sup_gap_all: f64,
    /// Sup over confident cells whose window is rebounce-free (see
    /// [`word_is_hyperbolic`]); the quantity that contracts at the
    /// hyperbolicity rate for observables depending on the arc
    /// coordinate.
    pub sup_gap_hyperbolic: f64,
    /// Cell-weighted mean of the conditional expectation.
    pub weighted_mean: f64,
}

impl CellFunction {
    pub fn eval(&self, table: &BilliardTable, x: &PhasePoint) -> Result<f64, MissingCell> {
        let w = centered_word(table, x, self.depth).ok_or_else(|| MissingCell(Vec::new()))?;
        self.values.get(&w).copied().ok_or(MissingCell(w))
    }
}

/// Project `f` onto the partition: cell averages of `f` over the sampled
/// points, the empirical stand-in for `E(f | F_{-m}^m)`.
pub fn conditional_expectation_on_cells(
    f: impl Fn(&PhasePoint) -> f64,
    partition: &CylinderPartition,
) -> CellFunction {
    let mut values = HashMap::with_capacity(partition.cells.len());
    let mut sup_gap = 0.0f64;
    let mut sup_gap_all = 0.0f64;
    let mut sup_gap_hyperbolic = 0.0f64;
    let mut weighted_mean = 0.0;
    for (word, cell) in &partition.cells {
        let vals: Vec<f64> = cell.points.iter().map(&f).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let confident = cell.points.len() >= partition.min_occupancy;
        let hyperbolic = confident && word_is_hyperbolic(partition.n_ids, word);
        for v in &vals {
            let gap = (v - mean).abs();
            sup_gap_all = sup_gap_all.max(gap);
            if confident {
                sup_gap = sup_gap.max(gap);
            }
            if hyperbolic {
                sup_gap_hyperbolic = sup_gap_hyperbolic.max(gap);
            }
        }
        weighted_mean += cell.weight * mean;
        values.insert(word.clone(), mean);
    }
    CellFunction {
        depth: partition.depth,
        values,
        sup_gap,
        sup_gap_all,
        sup_gap_hyperbolic,
        weighted_mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::orbit_rng;

    fn table() -> BilliardTable {
        BilliardTable::canonical_three_disk()
    }

    #[test]
    fn identical_points_saturate() {
        let t = table();
        let p = PhasePoint { scatterer: 0, r: 0.3, phi: 0.2 };
        assert_eq!(separation_time(&t, &p, &p, 30), SeparationResult::Saturated(30));
    }

    #[test]
    fn different_scatterers_separate_immediately() {
        let t = table();
        let x = PhasePoint { scatterer: 0, r: 0.3, phi: 0.2 };
        let y = PhasePoint { scatterer: 1, r: 0.3, phi: 0.2 };
        assert_eq!(separation_time(&t, &x, &y, 30), SeparationResult::Separated(0));
    }

    #[test]
    fn close_pairs_separate_late() {
        // typical 1e-8-close pair on the canonical table separates after
        // ten or more collisions (hyperbolicity rate ~ 1.5 per step)
        let t = table();
        let mut rng = orbit_rng(21, 0);
        let m = SrbMeasure::new(&t);
        let mut times = Vec::new();
        for _ in 0..30 {
            let x = m.sample(&mut rng);
            let y = PhasePoint { scatterer: x.scatterer, r: x.r + 1e-8, phi: x.phi };
            if let SeparationResult::Separated(n) = separation_time(&t, &x, &y, 60) {
                times.push(n);
            }
        }
        times.sort_unstable();
        let median = times[times.len() / 2];
        assert!(median >= 10, "median separation {median} (times {times:?})");
    }

    #[test]
    fn separation_is_symmetric() {
        let t = table();
        let mut rng = orbit_rng(22, 0);
        let m = SrbMeasure::new(&t);
        for _ in 0..40 {
            let x = m.sample(&mut rng);
            let y = PhasePoint {
                scatterer: x.scatterer,
                r: x.r + 1e-6,
                phi: (x.phi + 1e-6).clamp(-1.5, 1.5),
            };
            assert_eq!(separation_time(&t, &x, &y, 40), separation_time(&t, &y, &x, 40));
        }
    }

    #[test]
    fn depth_zero_partition_has_scatterer_cells() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(23, 0);
        let part = cylinder_partition(&t, &m, 0, 40_000, &mut rng);
        assert_eq!(part.cells.len(), 3);
        assert!((part.total_weight() - 1.0).abs() < 1e-12);
        // weights match perimeter shares
        let total = t.boundary_length();
        for (word, cell) in &part.cells {
            let share =
                t.scatterers()[symbol_id(3, word[0]) as usize].circumference() / total;
            assert!(
                (cell.weight - share).abs() < 3.0 * (share / 40_000.0f64).sqrt() + 1e-3,
                "cell {word:?}: weight {} vs share {share}",
                cell.weight
            );
        }
    }

    #[test]
    fn cell_count_grows_with_depth_and_id_projection_is_bounded() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(24, 0);
        let mut prev = 0usize;
        for depth in 0..=2 {
            let part = cylinder_partition(&t, &m, depth, 20_000, &mut rng);
            let bound = 3usize.pow(2 * depth as u32 + 1);
            assert!(part.id_word_count() <= bound);
            assert!(part.cells.len() >= prev);
            prev = part.cells.len();
        }
    }

    #[test]
    fn conditional_expectation_of_constant_is_exact() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(25, 0);
        let part = cylinder_partition(&t, &m, 1, 5_000, &mut rng);
        let g = conditional_expectation_on_cells(|_| 3.5, &part);
        assert!(g.sup_gap_all == 0.0);
        assert!((g.weighted_mean - 3.5).abs() < 1e-12);
    }

    #[test]
    fn conditional_expectation_preserves_mean() {
        // tower property at the empirical level: weighted cell means of a
        // centered f reproduce the sample mean exactly
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(26, 0);
        let part = cylinder_partition(&t, &m, 1, 20_000, &mut rng);
        let f = |p: &PhasePoint| -p.phi.cos().ln() - crate::measure::NEG_LOG_COS_MEAN;
        let g = conditional_expectation_on_cells(f, &part);
        let sample_mean: f64 = part
            .cells
            .values()
            .flat_map(|c| c.points.iter())
            .map(f)
            .sum::<f64>()
            / part.total_samples as f64;
        assert!((g.weighted_mean - sample_mean).abs() < 1e-12);
    }

    #[test]
    fn sup_gap_decays_with_depth() {
        // confident-cell sup of |f - E(f|cells)| decays geometrically
        // across depths for the unbounded observable
        let t = table();
        let m = SrbMeasure::new(&t);
        let f = |p: &PhasePoint| -p.phi.cos().ln();
        let mut sups = Vec::new();
        for depth in 1..=4 {
            let mut rng = orbit_rng(27, depth as u64);
            let mut part = cylinder_partition(&t, &m, depth, 200_000, &mut rng);
            part.min_occupancy = 25;
            let g = conditional_expectation_on_cells(f, &part);
            sups.push(g.sup_gap);
        }
        assert!(
            sups.windows(2).all(|w| w[1] < w[0]),
            "sup gaps not strictly decreasing: {sups:?}"
        );
        let xs: Vec<f64> = (1..=4).map(|d| d as f64).collect();
        let ys: Vec<f64> = sups.iter().map(|s| s.ln()).collect();
        let (slope, _, _) = crate::stats::ols(&xs, &ys);
        // geometric decay: fit ratio below one
        assert!(slope.exp() < 1.0, "fit ratio {} (sups {sups:?})", slope.exp());
    }

    #[test]
    fn missing_cell_is_reported() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(28, 0);
        let part = cylinder_partition(&t, &m, 1, 50, &mut rng);
        let g = conditional_expectation_on_cells(|p| p.phi, &part);
        let mut seen_missing = false;
        for _ in 0..20_000 {
            let p = m.sample(&mut rng);
            if g.eval(&t, &p).is_err() {
                seen_missing = true;
                break;
            }
        }
        assert!(seen_missing, "tiny partition should miss some itineraries");
    }
}
