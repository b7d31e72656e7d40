//! Explicit `(a,a)`-valid colorings that certify lower bounds on `T(a,a;r)`
//! for `r = 2, 3, 4`.
//!
//! All three are built from intervals. A color class `[s, as+1]` holds no
//! `(a,a)`-triple because `ax + 2d > as + 1` for every `x >= s`. A color can
//! be reused on a later interval `[u, v]` as long as `v < 2u - a*e`, where `e`
//! is the end of its first interval, which rules out triples that start in the
//! first interval and end in the second.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Coloring, Params, Triple};
use crate::solver::{Budget, Decision, Solver};

pub const RED: u8 = 0;
pub const BLUE: u8 = 1;
pub const GREEN: u8 = 2;
pub const YELLOW: u8 = 3;

/// Longest coloring the constructions will materialize.
pub const MAX_LENGTH: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConstructionLabel {
    #[serde(rename = "Thm3.1")]
    TwoColors,
    #[serde(rename = "Thm3.2")]
    ThreeColors,
    #[serde(rename = "Thm3.3")]
    FourColors,
}

impl ConstructionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionLabel::TwoColors => "Thm3.1",
            ConstructionLabel::ThreeColors => "Thm3.2",
            ConstructionLabel::FourColors => "Thm3.3",
        }
    }

    pub fn colors(&self) -> usize {
        match self {
            ConstructionLabel::TwoColors => 2,
            ConstructionLabel::ThreeColors => 3,
            ConstructionLabel::FourColors => 4,
        }
    }

    pub fn from_part(part: u8) -> Option<Self> {
        match part {
            1 => Some(ConstructionLabel::TwoColors),
            2 => Some(ConstructionLabel::ThreeColors),
            3 => Some(ConstructionLabel::FourColors),
            _ => None,
        }
    }

    /// Smallest `a` the bound is stated for.
    pub fn min_a(&self) -> u64 {
        match self {
            ConstructionLabel::TwoColors => 4,
            _ => 2,
        }
    }

    /// The lower bound on `T(a,a;r)` the construction certifies.
    pub fn bound(&self, a: u64) -> u128 {
        let a = a as u128;
        match self {
            ConstructionLabel::TwoColors => a * a + 3 * a + 8,
            ConstructionLabel::ThreeColors => 3 * a.pow(3) + 4 * a * a + 5 * a + 8,
            ConstructionLabel::FourColors => 7 * a.pow(4) + 12 * a.pow(3) + 6 * a * a + 9 * a + 16,
        }
    }
}

/// Where a construction's coloring came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSource {
    Pattern,
    Search,
    /// Neither the pattern nor the budgeted search produced a valid coloring.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub label: ConstructionLabel,
    pub a: u64,
    pub claimed_n: u64,
    pub coloring: Coloring,
    pub certified: bool,
    pub source: WitnessSource,
    /// Minimal monochromatic triple of the pattern when certification fails.
    pub offending: Option<Triple>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    pub label: ConstructionLabel,
    pub a: u64,
    pub r: usize,
    pub claimed_n: u64,
    pub bound: u128,
    pub certified: bool,
    pub source: WitnessSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<[usize; 3]>,
}

impl ConstructionResult {
    pub fn report(&self) -> ConstructionReport {
        ConstructionReport {
            label: self.label,
            a: self.a,
            r: self.label.colors(),
            claimed_n: self.claimed_n,
            bound: self.label.bound(self.a),
            certified: self.certified,
            source: self.source,
            offending: self.offending.map(|t| t.elements()),
        }
    }

    /// Witness file with the construction label attached.
    pub fn witness_json(&self) -> String {
        let mut w = self.coloring.to_witness();
        w.label = Some(self.label.as_str().to_string());
        w.to_json()
    }
}

/// Colors `[1, n]` from consecutive `(end, color)` runs.
fn from_runs(params: Params, runs: &[(u64, u8)]) -> Result<Coloring> {
    let mut colors = Vec::with_capacity(runs.last().map_or(0, |r| r.0 as usize));
    for &(end, c) in runs {
        debug_assert!(end as usize >= colors.len());
        colors.resize(end as usize, c);
    }
    Coloring::new(params, colors)
}

fn check_a(label: ConstructionLabel, a: u64) -> Result<Params> {
    if a < label.min_a() {
        return Err(Error::Precondition(format!(
            "{} needs a >= {}, got {a}",
            label.as_str(),
            label.min_a()
        )));
    }
    let len = label.bound(a) - 1;
    if len > MAX_LENGTH as u128 {
        return Err(Error::Precondition(format!(
            "{} at a = {a} has length {len}, above the limit {MAX_LENGTH}",
            label.as_str()
        )));
    }
    Params::new(a as usize, a as usize, label.colors())
}

fn certify(label: ConstructionLabel, a: u64, coloring: Coloring) -> ConstructionResult {
    let offending = coloring.find_mono_triple();
    let claimed_n = (label.bound(a) - 1) as u64;
    ConstructionResult {
        label,
        a,
        claimed_n,
        certified: offending.is_none() && coloring.n() as u64 == claimed_n,
        coloring,
        source: WitnessSource::Pattern,
        offending,
    }
}

/// Interval pattern of the 2-color bound, on `[1, a^2+3a+7]`.
///
/// `[a+2, a^2+1]` is left unassigned by the interval description; it is colored
/// red here, which extends the red interval `[a^2+2, a^2+2a+1]` down to the
/// end of the first blue interval.
pub fn pattern_2col(a: u64) -> Result<Coloring> {
    let params = check_a(ConstructionLabel::TwoColors, a)?;
    let a2 = a * a;
    from_runs(
        params,
        &[
            (a + 1, BLUE),
            (a2 + 2 * a + 1, RED),
            (a2 + 3 * a + 3, BLUE),
            (a2 + 3 * a + 4, RED),
            (a2 + 3 * a + 5, BLUE),
            (a2 + 3 * a + 6, RED),
            (a2 + 3 * a + 7, BLUE),
        ],
    )
}

pub fn construct_2col(a: u64) -> Result<ConstructionResult> {
    Ok(certify(ConstructionLabel::TwoColors, a, pattern_2col(a)?))
}

/// Interval pattern of the 3-color bound, on `[1, 3a^3+4a^2+5a+7]`.
pub fn pattern_3col(a: u64) -> Result<Coloring> {
    let params = check_a(ConstructionLabel::ThreeColors, a)?;
    let (a2, a3) = (a * a, a * a * a);
    from_runs(
        params,
        &[
            (a + 1, RED),
            (a2 + 2 * a + 1, BLUE),
            (a3 + 2 * a2 + 2 * a + 1, GREEN),
            (2 * a3 + 3 * a2 + 3 * a + 3, RED),
            (3 * a3 + 4 * a2 + 5 * a + 7, BLUE),
        ],
    )
}

pub fn construct_3col(a: u64) -> Result<ConstructionResult> {
    Ok(certify(ConstructionLabel::ThreeColors, a, pattern_3col(a)?))
}

/// Interval pattern proposed for the 4-color bound.
///
/// Four bands `[s, as+1]` in red, blue, green, yellow, followed by second
/// intervals for red, blue and green, each as long as the reuse condition
/// allows. The last one ends at `7a^4+12a^3+6a^2+9a+15`.
pub fn pattern_4col(a: u64) -> Result<Coloring> {
    let params = check_a(ConstructionLabel::FourColors, a)?;
    let mut runs = Vec::new();
    let mut band_ends = Vec::new();
    let mut end = 0u64;
    for color in [RED, BLUE, GREEN, YELLOW] {
        let s = end + 1;
        end = a * s + 1;
        runs.push((end, color));
        band_ends.push(end);
    }
    for (color, first_end) in [RED, BLUE, GREEN].into_iter().zip(band_ends) {
        let u = end + 1;
        end = 2 * u - a * first_end - 1;
        runs.push((end, color));
    }
    debug_assert_eq!(end as u128, ConstructionLabel::FourColors.bound(a) - 1);
    from_runs(params, &runs)
}

/// Certifies the 4-color pattern; if it fails, searches for any valid
/// 4-coloring of the same length within `budget`.
pub fn construct_4col(a: u64, budget: &Budget) -> Result<ConstructionResult> {
    let label = ConstructionLabel::FourColors;
    let pattern = certify(label, a, pattern_4col(a)?);
    if pattern.certified {
        return Ok(pattern);
    }
    let params = *pattern.coloring.params();
    let n = pattern.claimed_n as usize;
    match Solver::from_env().exists_valid(&params, n, budget) {
        Decision::Yes(found) => {
            let mut res = certify(label, a, found);
            res.source = WitnessSource::Search;
            res.offending = pattern.offending;
            Ok(res)
        }
        Decision::No | Decision::Unknown => Ok(ConstructionResult {
            source: WitnessSource::Unknown,
            certified: false,
            ..pattern
        }),
    }
}

/// Dispatches on the bound number (1, 2 or 3).
pub fn construct(part: u8, a: u64, budget: &Budget) -> Result<ConstructionResult> {
    match ConstructionLabel::from_part(part) {
        Some(ConstructionLabel::TwoColors) => construct_2col(a),
        Some(ConstructionLabel::ThreeColors) => construct_3col(a),
        Some(ConstructionLabel::FourColors) => construct_4col(a, budget),
        None => Err(Error::Precondition(format!(
            "part must be 1, 2 or 3, got {part}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runs_of(c: &Coloring) -> Vec<(usize, usize, u8)> {
        let mut out: Vec<(usize, usize, u8)> = Vec::new();
        for (i, &col) in c.colors().iter().enumerate() {
            match out.last_mut() {
                Some(last) if last.2 == col => last.1 = i + 1,
                _ => out.push((i + 1, i + 1, col)),
            }
        }
        out
    }

    #[test]
    fn two_color_examples() {
        let r = construct_2col(4).unwrap();
        assert_eq!(r.coloring.n(), 35);
        assert!(r.certified, "{:?}", r.offending);
        let r = construct_2col(5).unwrap();
        assert_eq!(r.coloring.n(), 47);
        assert!(r.certified);
        assert!(construct_2col(3).is_err());
    }

    #[test]
    fn three_color_intervals_for_a_2() {
        let r = construct_3col(2).unwrap();
        assert_eq!(r.coloring.n(), 57);
        assert!(r.certified);
        let red: Vec<_> = runs_of(&r.coloring)
            .into_iter()
            .map(|(s, e, c)| (c, s, e))
            .collect();
        assert_eq!(
            red,
            vec![
                (RED, 1, 3),
                (BLUE, 4, 9),
                (GREEN, 10, 21),
                (RED, 22, 37),
                (BLUE, 38, 57)
            ]
        );
        assert_eq!(construct_3col(3).unwrap().coloring.n(), 139);
        assert!(construct_3col(1).is_err());
    }

    #[test]
    fn four_color_lengths() {
        assert_eq!(pattern_4col(2).unwrap().n(), 265);
        assert_eq!(pattern_4col(3).unwrap().n(), 987);
        assert!(pattern_4col(1).is_err());
        let r = construct_4col(2, &Budget::nodes(1)).unwrap();
        assert!(r.certified);
        assert_eq!(r.source, WitnessSource::Pattern);
    }

    #[test]
    fn failed_certification_reports_triple() {
        // drop the red gap fill: color [a+2, a^2+1] blue instead
        let a = 4u64;
        let mut colors = pattern_2col(a).unwrap().colors().to_vec();
        for c in &mut colors[(a as usize + 1)..(a * a + 1) as usize] {
            *c = BLUE;
        }
        let params = Params::new(4, 4, 2).unwrap();
        let r = certify(
            ConstructionLabel::TwoColors,
            a,
            Coloring::new(params, colors).unwrap(),
        );
        assert!(!r.certified);
        assert!(r.offending.is_some());
    }

    #[test]
    fn witness_carries_label() {
        let r = construct_2col(4).unwrap();
        let json = r.witness_json();
        assert!(json.ends_with(r#","label":"Thm3.1"}"#));
        assert_eq!(Coloring::from_json(&json).unwrap(), r.coloring);
    }

    #[test]
    fn too_long_is_rejected() {
        assert!(construct_4col(40, &Budget::unlimited()).is_err());
        assert!(construct(4, 4, &Budget::unlimited()).is_err());
    }
}
