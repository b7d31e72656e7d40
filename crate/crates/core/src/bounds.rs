//! Closed-form bounds on `T(a,b) = T(a,b;2)` and a checker for the two
//! color-forcing implications that drive the quadratic upper bound.
//!
//! All formulas are evaluated in `i128`. Inputs are limited to
//! [`MAX_COEFF`], which keeps the quartic terms far from overflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Coloring;

/// Largest `a` or `b` accepted by the bound formulas.
pub const MAX_COEFF: u64 = 1_000_000;

fn checked_pair(a: u64, b: u64) -> (i128, i128) {
    assert!(
        a >= 1 && a <= b && b <= MAX_COEFF,
        "bound formulas need 1 <= a <= b <= {MAX_COEFF}, got ({a}, {b})"
    );
    (a as i128, b as i128)
}

/// `T(a,b)` is finite exactly when `b != 2a`.
pub fn existence(a: u64, b: u64) -> bool {
    b != 2 * a
}

/// The older lower and upper bounds, by the sign of `b - 2a`.
pub fn thm1_bounds(a: u64, b: u64) -> Option<(i128, i128)> {
    let (a, b) = checked_pair(a, b);
    if b == 2 * a {
        return None;
    }
    let b2 = b * b;
    let b3 = b2 * b;
    Some(if b > 2 * a {
        (
            2 * b2 + 5 * b - 2 * a + 4,
            4 * a * (b3 + b2 - 3 * b - 3) + 2 * b3 + 4 * b2 + 6 * b,
        )
    } else {
        (
            3 * b2 - 2 * a * b + 5 * b - 2 * a + 4,
            4 * a * (b3 + 2 * b2 + 2 * b) - 4 * b2,
        )
    })
}

/// Quadratic upper bound for `a < b`, `b != 2a`.
pub fn thm2_upper(a: u64, b: u64) -> Option<i128> {
    let (a, b) = checked_pair(a, b);
    if a == b || b == 2 * a {
        return None;
    }
    let even = b % 2 == 0;
    Some(match (even, b > 2 * a) {
        (true, true) => 7 * b * b - 6 * a * b + 13 * b - 10 * a,
        (false, true) => 14 * b * b - 12 * a * b + 26 * b - 20 * a,
        (true, false) => 3 * b * b + 2 * a * b + 16 * a,
        (false, false) => 6 * b * b + 4 * a * b + 8 * b + 16 * a,
    })
}

pub const LABEL_T1B: &str = "T1b";
pub const LABEL_T_2A_MINUS_1: &str = "T-2a-1";
pub const LABEL_THM3_1: &str = "Thm3.1";

/// Lower bounds that only apply to special families of pairs.
pub fn special_lowers(a: u64, b: u64) -> Vec<(String, i128)> {
    let (ai, bi) = checked_pair(a, b);
    let mut out = Vec::new();
    if a == 1 && b >= 3 {
        out.push((LABEL_T1B.to_string(), 2 * bi * bi + 5 * bi + 6));
    }
    if a >= 2 && b == 2 * a - 1 {
        out.push((LABEL_T_2A_MINUS_1.to_string(), 16 * ai * ai - 12 * ai + 6));
    }
    if a == b && a >= 4 {
        out.push((LABEL_THM3_1.to_string(), ai * ai + 3 * ai + 8));
    }
    out
}

/// Every applicable bound for one pair, with the best of each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub a: u64,
    pub b: u64,
    pub exists: bool,
    pub thm1_lower: Option<i128>,
    pub thm1_upper: Option<i128>,
    pub thm2_upper: Option<i128>,
    pub special_lowers: Vec<(String, i128)>,
    /// Absent only when `T(a,b)` is infinite and no formula applies.
    pub best_lower: Option<i128>,
    pub best_lower_source: Option<String>,
    pub best_upper: Option<i128>,
    pub best_upper_source: Option<String>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Aggregates all formulas for `(a, b)`.
pub fn best_known(a: u64, b: u64) -> BoundReport {
    let exists = existence(a, b);
    let thm1 = thm1_bounds(a, b);
    let thm2 = thm2_upper(a, b);
    let special = special_lowers(a, b);

    let mut lowers: Vec<(String, i128)> = Vec::new();
    if let Some((lo, _)) = thm1 {
        lowers.push(("Thm1".into(), lo));
    }
    lowers.extend(special.iter().cloned());
    let mut uppers: Vec<(String, i128)> = Vec::new();
    if let Some((_, up)) = thm1 {
        uppers.push(("Thm1".into(), up));
    }
    if let Some(up) = thm2 {
        uppers.push(("Thm2".into(), up));
    }

    // ties keep the first listed source
    let best_lower = lowers
        .iter()
        .fold(None::<&(String, i128)>, |acc, x| match acc {
            Some(m) if m.1 >= x.1 => Some(m),
            _ => Some(x),
        })
        .cloned();
    let best_upper = uppers
        .iter()
        .fold(None::<&(String, i128)>, |acc, x| match acc {
            Some(m) if m.1 <= x.1 => Some(m),
            _ => Some(x),
        })
        .cloned();

    BoundReport {
        a,
        b,
        exists,
        thm1_lower: thm1.map(|t| t.0),
        thm1_upper: thm1.map(|t| t.1),
        thm2_upper: thm2,
        special_lowers: special,
        best_lower: best_lower.as_ref().map(|x| x.1),
        best_lower_source: best_lower.map(|x| x.0),
        best_upper: best_upper.as_ref().map(|x| x.1),
        best_upper_source: best_upper.map(|x| x.0),
    }
}

/// Validates `(a, b)` before handing it to [`best_known`].
pub fn try_best_known(a: u64, b: u64) -> Result<BoundReport> {
    if a == 0 || a > b {
        return Err(Error::InvalidParams(format!(
            "need 1 <= a <= b, got ({a}, {b})"
        )));
    }
    if b > MAX_COEFF {
        return Err(Error::InvalidParams(format!("b = {b} exceeds {MAX_COEFF}")));
    }
    Ok(best_known(a, b))
}

/// Which of the two implications to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaPart {
    /// From `χ(x) = χ(k)` conclude `χ(x - i(b-2a)/2) = χ(k)`.
    A,
    /// From `χ(y) = χ(k+i)` conclude `χ(y - i(b-2a)) = χ(k+i)`.
    B,
}

/// One instantiation of the forcing lemma. `target` is `x` for part A and `y`
/// for part B. Negative `i` is allowed as long as `k + i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Lemma1Instance {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub i: i64,
    pub m: usize,
    pub target: usize,
    pub part: LemmaPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaVerdict {
    ConclusionHolds,
    HypothesesFail,
    Violated,
}

/// Evaluates one instance of the lemma against `coloring`.
///
/// The coloring must use two colors, cover `[1, M]`, be valid on `[1, M]` and
/// satisfy `χ(k) != χ(k+i)`; anything else is rejected as an error.
pub fn lemma1_check(inst: &Lemma1Instance, coloring: &Coloring) -> Result<LemmaVerdict> {
    let params = coloring.params();
    if params.a() != inst.a || params.b() != inst.b {
        return Err(Error::Precondition(format!(
            "instance is for ({}, {}) but the coloring is for ({}, {})",
            inst.a,
            inst.b,
            params.a(),
            params.b()
        )));
    }
    if params.r() != 2 {
        return Err(Error::Precondition("the lemma is about 2-colorings".into()));
    }
    if inst.m == 0 || inst.m > coloring.n() {
        return Err(Error::Precondition(format!(
            "M = {} outside [1, {}]",
            inst.m,
            coloring.n()
        )));
    }
    let k = inst.k as i128;
    let i = inst.i as i128;
    let ki = k + i;
    if inst.k == 0 || ki < 1 || ki > inst.m as i128 || inst.k > inst.m || i == 0 {
        return Err(Error::Precondition(format!(
            "need 1 <= k, k+i <= M with i != 0; got k = {}, i = {}",
            inst.k, inst.i
        )));
    }
    if let Some(t) = coloring.find_mono_triple_upto(inst.m) {
        return Err(Error::PremiseViolated {
            m: inst.m,
            x: t.x,
            y: t.y,
            z: t.z,
        });
    }
    let chi = |p: i128| coloring.color(p as usize);
    if chi(k) == chi(ki) {
        return Err(Error::Precondition(format!(
            "χ({}) = χ({}) but the lemma needs them to differ",
            k, ki
        )));
    }

    Ok(verdict(inst, coloring))
}

/// Tally of an exhaustive sweep over lemma instances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub instances: u64,
    pub conclusion_holds: u64,
    pub hypotheses_fail: u64,
    pub violated: u64,
    pub negative_i_holds: u64,
}

impl SweepSummary {
    fn add(&mut self, other: &SweepSummary) {
        self.instances += other.instances;
        self.conclusion_holds += other.conclusion_holds;
        self.hypotheses_fail += other.hypotheses_fail;
        self.violated += other.violated;
        self.negative_i_holds += other.negative_i_holds;
    }
}

/// Checks every instance with `M = n`: all `k`, all nonzero `i` with
/// `χ(k) != χ(k+i)`, every target in `[1, M]`, both parts.
pub fn lemma1_sweep(coloring: &Coloring) -> Result<SweepSummary> {
    let n = coloring.n();
    let params = *coloring.params();
    if let Some(t) = coloring.find_mono_triple() {
        return Err(Error::PremiseViolated {
            m: n,
            x: t.x,
            y: t.y,
            z: t.z,
        });
    }
    let mut total = SweepSummary::default();
    for k in 1..=n {
        for ki in 1..=n {
            if coloring.color(k) == coloring.color(ki) {
                continue;
            }
            let i = ki as i64 - k as i64;
            for part in [LemmaPart::A, LemmaPart::B] {
                let mut s = SweepSummary::default();
                for target in 1..=n {
                    let inst = Lemma1Instance {
                        a: params.a(),
                        b: params.b(),
                        k,
                        i,
                        m: n,
                        target,
                        part,
                    };
                    s.instances += 1;
                    match verdict(&inst, coloring) {
                        LemmaVerdict::ConclusionHolds => {
                            s.conclusion_holds += 1;
                            if i < 0 {
                                s.negative_i_holds += 1;
                            }
                        }
                        LemmaVerdict::HypothesesFail => s.hypotheses_fail += 1,
                        LemmaVerdict::Violated => s.violated += 1,
                    }
                }
                total.add(&s);
            }
        }
    }
    Ok(total)
}

/// Hypotheses and conclusion of one instance; premises are the caller's job.
fn verdict(inst: &Lemma1Instance, coloring: &Coloring) -> LemmaVerdict {
    let (a, b, k, i, m, t) = (
        inst.a as i128,
        inst.b as i128,
        inst.k as i128,
        inst.i as i128,
        inst.m as i128,
        inst.target as i128,
    );
    if t < 1 || t > m {
        return LemmaVerdict::HypothesesFail;
    }
    let chi = |p: i128| coloring.color(p as usize);
    let ki = k + i;
    let (holds, conclusion, expected) = match inst.part {
        LemmaPart::A => {
            // (i) x > ak + ib/2, and also x > ak when i < 0
            let h1 = 2 * t > 2 * a * k + i * b && (i > 0 || t > a * k);
            let h2 = m >= t.max(2 * (t - a * k) + b * k);
            let h3 = (i * (b - 2 * a)) % 2 == 0;
            let h4 = chi(t) == chi(k);
            (h1 && h2 && h3 && h4, t - i * (b - 2 * a) / 2, chi(k))
        }
        LemmaPart::B => {
            // (i) y > b(k+i), and also y > b(k+i) - 2ai when i < 0
            let h1 = t > b * ki && (i > 0 || t > b * ki - 2 * a * i);
            let h2 = m >= t.max(t - i * (b - 2 * a));
            let h3 = (t - b * ki) % 2 == 0;
            let h4 = chi(t) == chi(ki);
            (h1 && h2 && h3 && h4, t - i * (b - 2 * a), chi(ki))
        }
    };
    if !holds {
        LemmaVerdict::HypothesesFail
    } else if conclusion < 1 || conclusion > m || chi(conclusion) != expected {
        // the hypotheses place the conclusion inside [1, M]
        LemmaVerdict::Violated
    } else {
        LemmaVerdict::ConclusionHolds
    }
}
