//! Sufficient conditions on a pair `(a, b)` for a zero-free disk of the
//! forest polynomial `F_G` over graphs of maximum degree at most `Δ`, and the
//! resulting constants `K` such that every chromatic root satisfies
//! `|q| < K Δ`.
//!
//! With `f = 1 + b/(Δ-1)` the disk radius of the degree-dependent modes is
//! `r = b (1-a) / ((Δ-1) f^{Δ-1})` and `K = 1/(r Δ)`. The degree-free modes
//! report the radius per unit of `1/Δ`, so again `K = 1/radius`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree_genfun::{clawfree_growth, deep_tree_bound, growth_factor};

/// Rounding allowance for non-strict conditions.
pub const CONDITION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("no (a, b) satisfies the {0} condition")]
    Infeasible(Mode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    General,
    /// Finite girth `g`, using both tree bounds.
    GeneralGirth(usize),
    GirthLimit,
    GirthLimitUniform,
    Uniform,
    Clawfree,
}

impl Mode {
    pub fn needs_delta(self) -> bool {
        matches!(self, Mode::General | Mode::GeneralGirth(_) | Mode::GirthLimit)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::General => f.write_str("general"),
            Mode::GeneralGirth(g) => write!(f, "general-girth({g})"),
            Mode::GirthLimit => f.write_str("girth-limit"),
            Mode::GirthLimitUniform => f.write_str("girth-limit-uniform"),
            Mode::Uniform => f.write_str("uniform"),
            Mode::Clawfree => f.write_str("clawfree"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    /// Accepts the display names; `girth` and `general-girth` need the
    /// girth in parentheses, e.g. `girth(10)`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "general" => Ok(Mode::General),
            "girth-limit" => Ok(Mode::GirthLimit),
            "girth-limit-uniform" => Ok(Mode::GirthLimitUniform),
            "uniform" => Ok(Mode::Uniform),
            "clawfree" | "claw-free" => Ok(Mode::Clawfree),
            _ => {
                let inner = s
                    .strip_prefix("general-girth(")
                    .or_else(|| s.strip_prefix("girth("))
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown mode {s:?}"))?;
                inner
                    .parse()
                    .map(Mode::GeneralGirth)
                    .map_err(|_| format!("bad girth in {s:?}"))
            }
        }
    }
}

/// Outcome of evaluating a condition. `margin` is the slack of the
/// inequality on a log scale (or `a - h` for the claw-free condition);
/// `radius` and `k` are those the pair would certify.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionResult {
    pub holds: bool,
    pub margin: f64,
    pub radius: f64,
    pub k: f64,
}

impl ConditionResult {
    fn non_strict(margin: f64, radius: f64) -> Self {
        ConditionResult {
            holds: margin >= -CONDITION_SLACK,
            margin,
            radius,
            k: 1.0 / radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    pub a: f64,
    pub b: f64,
    /// Zero-free radius of `F_G`; per unit `1/Δ` when `delta` is absent.
    pub radius: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

fn open_unit(name: &str, x: f64) -> Result<(), CertError> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(CertError::Range(format!("{name} = {x} must lie in (0, 1)")))
    }
}

/// Largest admissible `b` for a degree bound: `(Δ-1)/(Δ-2)`, unbounded for `Δ = 2`.
pub fn b_max(delta: usize) -> f64 {
    if delta <= 2 {
        f64::INFINITY
    } else {
        (delta as f64 - 1.0) / (delta as f64 - 2.0)
    }
}

fn degree_range(delta: usize, a: f64, b: f64) -> Result<(), CertError> {
    if delta < 2 {
        return Err(CertError::Range(format!("delta = {delta} must be at least 2")));
    }
    open_unit("a", a)?;
    let bmax = b_max(delta);
    if !(b > 0.0 && b <= bmax * (1.0 + 1e-12)) {
        return Err(CertError::Range(format!("b = {b} must lie in (0, {bmax}]")));
    }
    Ok(())
}

/// `b (1-a) / ((Δ-1) f^{Δ-1})`.
pub fn degree_radius(delta: usize, a: f64, b: f64) -> f64 {
    let d1 = delta as f64 - 1.0;
    b * (1.0 - a) / (d1 * growth_factor(delta, b).powf(d1))
}

/// `prod_i (1 - b (1 - a + t_i) / ((Δ-1) f^{Δ-1})) ≥ 1 - a` in log space;
/// `None` when some factor is not positive.
fn product_margin(delta: usize, a: f64, b: f64, t: impl Fn(usize) -> f64) -> Option<f64> {
    let d1 = delta as f64 - 1.0;
    let scale = b / (d1 * growth_factor(delta, b).powf(d1));
    let mut log_prod = 0.0;
    for i in 0..delta - 1 {
        let ai = scale * (1.0 - a + t(i));
        if ai >= 1.0 {
            return None;
        }
        log_prod += (-ai).ln_1p();
    }
    Some(log_prod - (-a).ln_1p())
}

fn product_result(delta: usize, a: f64, b: f64, t: impl Fn(usize) -> f64) -> ConditionResult {
    let radius = degree_radius(delta, a, b) * delta as f64;
    match product_margin(delta, a, b, t) {
        Some(m) => ConditionResult::non_strict(m, radius),
        None => ConditionResult {
            holds: false,
            margin: f64::NEG_INFINITY,
            radius,
            k: 1.0 / radius,
        },
    }
}

/// All graphs of maximum degree `Δ`, with `t_i = f^i - 1`.
///
/// `radius` in the result is `r Δ`; the certificate divides by `Δ`.
pub fn condition_general(delta: usize, a: f64, b: f64) -> Result<ConditionResult, CertError> {
    degree_range(delta, a, b)?;
    let f = growth_factor(delta, b);
    Ok(product_result(delta, a, b, |i| f.powi(i as i32) - 1.0))
}

/// Girth at least `g`: `t_i = min(f^i - 1, e^b (b/f)^{g-2})`.
pub fn condition_general_girth(delta: usize, girth: usize, a: f64, b: f64) -> Result<ConditionResult, CertError> {
    degree_range(delta, a, b)?;
    if girth < 3 {
        return Err(CertError::Range(format!("girth = {girth} must be at least 3")));
    }
    let f = growth_factor(delta, b);
    let deep = deep_tree_bound(delta, girth - 2, b);
    Ok(product_result(delta, a, b, |i| (f.powi(i as i32) - 1.0).min(deep)))
}

/// Smallest girth `g ≤ max_girth` for which the girth condition holds.
pub fn min_girth(delta: usize, a: f64, b: f64, max_girth: usize) -> Result<Option<usize>, CertError> {
    for g in 3..=max_girth {
        if condition_general_girth(delta, g, a, b)?.holds {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Limit of large girth: `(1 - b(1-a)/((Δ-1) f^{Δ-1}))^{Δ-1} ≥ 1 - a`.
pub fn condition_girth_limit(delta: usize, a: f64, b: f64) -> Result<ConditionResult, CertError> {
    degree_range(delta, a, b)?;
    let c = degree_radius(delta, a, b);
    let radius = c * delta as f64;
    if c >= 1.0 {
        return Ok(ConditionResult {
            holds: false,
            margin: f64::NEG_INFINITY,
            radius,
            k: 1.0 / radius,
        });
    }
    let margin = (delta as f64 - 1.0) * (-c).ln_1p() - (-a).ln_1p();
    Ok(ConditionResult::non_strict(margin, radius))
}

/// Degree-free condition `e^{1-(ab+1)e^{-b}} ≤ 1/(1-a)`, valid for every
/// `Δ ≥ 3` when `a < 2/3`. `K = e^b / ((1-a) b)`.
pub fn condition_uniform(a: f64, b: f64) -> Result<ConditionResult, CertError> {
    open_unit("a", a)?;
    open_unit("b", b)?;
    if a >= 2.0 / 3.0 {
        return Err(CertError::Range(format!(
            "a = {a} must be below 2/3 (a < 1 - 1/Δ for Δ = 3)"
        )));
    }
    let margin = -(-a).ln_1p() - (1.0 - (a * b + 1.0) * (-b).exp());
    Ok(ConditionResult::non_strict(margin, b * (1.0 - a) * (-b).exp()))
}

/// Degree-free large-girth condition `e^{-b(1-a)e^{-b}} ≥ 1 - a`.
pub fn condition_girth_limit_uniform(a: f64, b: f64) -> Result<ConditionResult, CertError> {
    open_unit("a", a)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(CertError::Range(format!("b = {b} must lie in (0, 1]")));
    }
    let margin = -b * (1.0 - a) * (-b).exp() - (-a).ln_1p();
    Ok(ConditionResult::non_strict(margin, b * (1.0 - a) * (-b).exp()))
}

/// `h(a, b)` of the claw-free condition.
pub fn clawfree_h(a: f64, b: f64) -> f64 {
    let q = clawfree_growth(b);
    let lin = b * (1.0 - a) / q;
    let sq = b * (1.0 - a) / (2.0 * q);
    lin + sq * sq + b * b / 4.0 * (1.0 - 1.0 / q)
}

/// Claw-free graphs: `h(a, b) < a` (strict); radius `b(1-a)/(1+b+b²/4)`.
pub fn condition_clawfree(a: f64, b: f64) -> Result<ConditionResult, CertError> {
    open_unit("a", a)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(CertError::Range(format!("b = {b} must be positive")));
    }
    let margin = a - clawfree_h(a, b);
    let radius = b * (1.0 - a) / clawfree_growth(b);
    Ok(ConditionResult {
        holds: margin > 0.0,
        margin,
        radius,
        k: 1.0 / radius,
    })
}

fn required_delta(mode: Mode, delta: Option<usize>) -> Result<usize, CertError> {
    delta.ok_or_else(|| CertError::Range(format!("mode {mode} needs a degree bound")))
}

pub fn condition(mode: Mode, delta: Option<usize>, a: f64, b: f64) -> Result<ConditionResult, CertError> {
    match mode {
        Mode::General => condition_general(required_delta(mode, delta)?, a, b),
        Mode::GeneralGirth(g) => condition_general_girth(required_delta(mode, delta)?, g, a, b),
        Mode::GirthLimit => condition_girth_limit(required_delta(mode, delta)?, a, b),
        Mode::GirthLimitUniform => condition_girth_limit_uniform(a, b),
        Mode::Uniform => condition_uniform(a, b),
        Mode::Clawfree => condition_clawfree(a, b),
    }
}

/// Certificate for a given pair, or `None` when the condition fails.
pub fn certify(mode: Mode, delta: Option<usize>, a: f64, b: f64) -> Result<Option<Certificate>, CertError> {
    let delta = if mode.needs_delta() { delta } else { None };
    let res = condition(mode, delta, a, b)?;
    Ok(res.holds.then(|| Certificate {
        mode,
        delta,
        a,
        b,
        radius: match delta {
            Some(d) => res.radius / d as f64,
            None => res.radius,
        },
        k: res.k,
    }))
}

/// Principal branch of the Lambert W function for `x > 0`, by Halley's method.
pub fn lambert_w(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "lambert_w needs a finite positive argument");
    let mut w = if x < 3.0 {
        x.ln_1p() * 0.8
    } else {
        x.ln() - x.ln().ln().max(0.0)
    };
    for _ in 0..100 {
        let ew = w.exp();
        let fw = w * ew - x;
        let step = fw / (ew * (w + 1.0) - (w + 2.0) * fw / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1e-300) {
            break;
        }
    }
    w
}

/// `1 + x > exp(x - x²)`, the logarithm bound used for `x ∈ [-1/2, 0)`.
pub fn log_bound_holds(x: f64) -> bool {
    1.0 + x > (x - x * x).exp()
}

/// Search region for `(a, b)`.
fn search_box(mode: Mode, delta: Option<usize>) -> (f64, f64) {
    let a_hi = if mode == Mode::Uniform { 2.0 / 3.0 } else { 0.99 };
    let b_hi = match mode {
        Mode::General | Mode::GeneralGirth(_) | Mode::GirthLimit => b_max(delta.unwrap_or(2)).min(3.0),
        Mode::GirthLimitUniform => 1.0,
        Mode::Uniform => 1.0,
        Mode::Clawfree => 3.0,
    };
    // b < 1 is strict in the uniform mode
    (a_hi, if mode == Mode::Uniform { b_hi - 1e-9 } else { b_hi })
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    k: f64,
    a: f64,
    b: f64,
}

fn better(x: Cell, y: Cell) -> Cell {
    let key = |c: Cell| (c.k, c.b, c.a);
    if key(x).partial_cmp(&key(y)) == Some(std::cmp::Ordering::Greater) {
        y
    } else {
        x
    }
}

fn accepted(mode: Mode, delta: Option<usize>, a: f64, b: f64) -> bool {
    condition(mode, delta, a, b).is_ok_and(|r| r.holds && r.margin >= CONDITION_SLACK)
}

/// Best certificate with this `b`. The feasible `a` form an interval
/// reaching up to `a_hi` and `K` grows with `a`, so the smallest accepted
/// `a` is located by bisection.
fn best_for_b(mode: Mode, delta: Option<usize>, a_hi: f64, b: f64) -> Option<Cell> {
    let (mut lo, mut hi) = (1e-9, a_hi);
    if !accepted(mode, delta, hi, b) {
        return None;
    }
    if accepted(mode, delta, lo, b) {
        hi = lo;
    } else {
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if accepted(mode, delta, mid, b) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
    }
    let r = condition(mode, delta, hi, b).ok()?;
    Some(Cell { k: r.k, a: hi, b })
}

fn best_on(mode: Mode, delta: Option<usize>, a_hi: f64, bs: Vec<f64>) -> Option<Cell> {
    bs.into_par_iter()
        .filter_map(|b| best_for_b(mode, delta, a_hi, b))
        .reduce_with(better)
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).floor() as i64;
    let mut v: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).filter(|&x| x <= hi).collect();
    if v.last().is_none_or(|&x| x < hi - 1e-12) {
        v.push(hi);
    }
    v
}

/// Minimise `K`: scan `b` with step 1e-3 and then refine around the best
/// value down to step 1e-8, taking at each `b` the smallest `a` whose margin
/// is at least [`CONDITION_SLACK`].
pub fn optimize(mode: Mode, delta: Option<usize>) -> Result<Certificate, CertError> {
    let delta = if mode.needs_delta() {
        let d = required_delta(mode, delta)?;
        degree_range(d, 0.5, 1e-3)?;
        Some(d)
    } else {
        None
    };
    let (a_hi, b_hi) = search_box(mode, delta);
    let a_hi = a_hi - 1e-9;
    let mut step = 1e-3;
    let mut best = best_on(mode, delta, a_hi, axis(step, b_hi, step)).ok_or(CertError::Infeasible(mode))?;
    for fine in [1e-5, 1e-7, 1e-8] {
        let lo = (best.b - 2.0 * step).max(fine);
        let hi = (best.b + 2.0 * step).min(b_hi);
        if let Some(c) = best_on(mode, delta, a_hi, axis(lo, hi, fine)) {
            best = better(best, c);
        }
        step = fine;
    }
    let cert = certify(mode, delta, best.a, best.b)?.ok_or(CertError::Infeasible(mode))?;
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub delta: usize,
    #[serde(rename = "K")]
    pub k: f64,
    pub a: f64,
    pub b: f64,
}

impl TableRow {
    pub fn csv_header() -> &'static str {
        "delta,K,a,b"
    }

    pub fn to_csv(&self) -> String {
        format!("{},{:.4},{},{}", self.delta, self.k, self.a, self.b)
    }
}

/// Degrees covered by the tables.
pub const TABLE_DEGREES: [usize; 6] = [3, 4, 5, 6, 20, 100];

/// Certifying `(a, b)` for all graphs of maximum degree `Δ`, per [`TABLE_DEGREES`].
pub const GENERAL_PAIRS: [(f64, f64); 6] = [
    (0.388, 1.207),
    (0.367, 0.990),
    (0.358, 0.913),
    (0.353, 0.874),
    (0.340, 0.779),
    (0.334, 0.745),
];

/// Certifying `(a, b)` in the large-girth limit; `b = (Δ-1)/(Δ-2)`.
pub const GIRTH_LIMIT_A: [f64; 6] = [0.314, 0.286, 0.274, 0.267, 0.249, 0.245];

fn table_row(mode: Mode, delta: usize, a: f64, b: f64) -> Result<TableRow, CertError> {
    let cert = certify(mode, Some(delta), a, b)?.ok_or(CertError::Infeasible(mode))?;
    Ok(TableRow { delta, k: cert.k, a, b })
}

/// Rows `(general, girth-limit)` evaluated at the certifying pairs.
pub fn emit_tables() -> Result<(Vec<TableRow>, Vec<TableRow>), CertError> {
    let general = TABLE_DEGREES
        .iter()
        .zip(GENERAL_PAIRS)
        .map(|(&d, (a, b))| table_row(Mode::General, d, a, b))
        .collect::<Result<_, _>>()?;
    let girth = TABLE_DEGREES
        .iter()
        .zip(GIRTH_LIMIT_A)
        .map(|(&d, a)| table_row(Mode::GirthLimit, d, a, b_max(d)))
        .collect::<Result<_, _>>()?;
    Ok((general, girth))
}

/// Rows `(general, girth-limit)` found by [`optimize`].
pub fn optimized_tables() -> Result<(Vec<TableRow>, Vec<TableRow>), CertError> {
    let run = |mode| {
        TABLE_DEGREES
            .par_iter()
            .map(|&d| {
                optimize(mode, Some(d)).map(|c| TableRow {
                    delta: d,
                    k: c.k,
                    a: c.a,
                    b: c.b,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    };
    Ok((run(Mode::General)?, run(Mode::GirthLimit)?))
}
