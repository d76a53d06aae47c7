//! Checks that a formulation's projection is exactly `conv(L(n))` and that
//! its counted size respects a declared bound.

use std::fmt::Write as _;
use std::time::Instant;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::Result;
use crate::exactlp::{convex_hull_hrep, LinConstraint};
use crate::langs::{bits_to_string, support_over, LanguageSpec};
use crate::polytope::{zero_one_members, DeclaredBound, ExtendedFormulation, SupportOracle};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random objectives in the support battery, on top of the `±e_i`.
    pub directions: usize,
    pub seed: u64,
    /// Run the exact hull comparison when it is small enough.
    pub certify: bool,
    /// Largest number of multiplier variables left after substituting the
    /// hull system's equations for which the hull is computed.
    pub exact_threshold: usize,
    /// Largest `|L(n)|` for which the hull is computed.
    pub max_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { directions: 200, seed: 0, certify: true, exact_threshold: 14, max_points: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { detail: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub status: Status,
    pub seconds: f64,
}

impl Check {
    fn timed(start: Instant, status: Status) -> Check {
        Check { status, seconds: start.elapsed().as_secs_f64() }
    }

    fn skipped(reason: impl Into<String>) -> Check {
        Check { status: Status::Skipped { reason: reason.into() }, seconds: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub language_size: usize,
    pub inequalities: usize,
    pub equations: usize,
    pub variables: usize,
    pub completeness: Check,
    pub soundness: Check,
    pub support_battery: Check,
    pub certified: Check,
    pub size_check: Check,
}

impl VerificationReport {
    fn checks(&self) -> [(&'static str, &Check); 5] {
        [
            ("completeness", &self.completeness),
            ("soundness", &self.soundness),
            ("support_battery", &self.support_battery),
            ("certified", &self.certified),
            ("size_check", &self.size_check),
        ]
    }

    /// True iff no enabled check failed.
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, c)| !c.failed())
    }

    /// The verdicts alone, without timings.
    pub fn verdicts(&self) -> Vec<(&'static str, Status)> {
        self.checks().iter().map(|(name, c)| (*name, c.status.clone())).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}, |L(n)| = {}, {} inequalities, {} equations, {} variables",
            self.n, self.language_size, self.inequalities, self.equations, self.variables
        );
        for (name, c) in self.checks() {
            let line = match &c.status {
                Status::Pass => "pass".to_string(),
                Status::Fail { detail } => format!("FAIL: {detail}"),
                Status::Skipped { reason } => format!("skipped ({reason})"),
            };
            let _ = writeln!(out, "  {name:<16} {line} [{:.3}s]", c.seconds);
        }
        let _ = writeln!(out, "verdict: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

/// Seeded objective battery: every `±e_i`, then `count` vectors whose
/// entries are `p/q` with `p ∈ [-9, 9]` and `q ∈ [1, 9]` drawn from
/// SplitMix64.
pub fn objective_battery<S: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<S>> {
    let mut out = Vec::with_capacity(2 * n + count);
    for i in 0..n {
        for sign in [1, -1] {
            let mut c = vec![S::zero(); n];
            c[i] = S::from_i64(sign);
            out.push(c);
        }
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    for _ in 0..count {
        out.push(
            (0..n)
                .map(|_| {
                    let p = (rng.next_u64() % 19) as i64 - 9;
                    let q = (rng.next_u64() % 9) as i64 + 1;
                    S::from_frac(p, q)
                })
                .collect(),
        );
    }
    out
}

/// Rank of the rows `(p, 1)` over the points.
fn affine_rank<S: Scalar>(points: &[Vec<u8>]) -> usize {
    let mut rows: Vec<Vec<S>> = points
        .iter()
        .map(|p| p.iter().map(|&b| S::from_i64(b as i64)).chain([S::one()]).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let head = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].div_ref(&head[col]);
            for (x, h) in row.iter_mut().zip(&head) {
                *x = x.sub_ref(&h.mul_ref(&f));
            }
        }
        rank += 1;
    }
    rank
}

/// Variables the exact hull computation has to eliminate: the `n + m`
/// coordinates and multipliers minus the independent equations.
pub fn hull_variables<S: Scalar>(points: &[Vec<u8>], n: usize) -> usize {
    if points.is_empty() {
        return 0;
    }
    n + points.len() - affine_rank::<S>(points)
}

fn row_text<S: Scalar>(row: &LinConstraint<S>, n: usize) -> String {
    let coeffs: Vec<String> = row.dense(n).iter().map(ToString::to_string).collect();
    format!("{} {} {}", coeffs.join(" "), row.relation.symbol(), row.rhs)
}

/// Compares `E` against an explicit point set `points ⊆ {0,1}^n` (sorted,
/// distinct).
pub fn verify_against_points<S: Scalar>(
    e: &ExtendedFormulation<S>,
    points: &[Vec<u8>],
    n: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let report = e.size_report();

    let t = Instant::now();
    let members = zero_one_members(e)?;
    let search_secs = t.elapsed().as_secs_f64();
    let missing = points.iter().find(|x| members.binary_search(x).is_err());
    let extra = members.iter().find(|x| points.binary_search(x).is_err());
    let completeness = Check {
        status: match missing {
            None => Status::Pass,
            Some(x) => Status::Fail { detail: format!("{} is in L(n) but not in the projection", bits_to_string(x)) },
        },
        seconds: search_secs,
    };
    let soundness = Check {
        status: match extra {
            None => Status::Pass,
            Some(x) => Status::Fail { detail: format!("{} is in the projection but not in L(n)", bits_to_string(x)) },
        },
        seconds: 0.0,
    };

    let t = Instant::now();
    let oracle = SupportOracle::new(e)?;
    let mut battery = Status::Pass;
    for c in objective_battery::<S>(n, options.directions, options.seed) {
        let got = oracle.support(&c)?;
        let want = support_over(points, &c);
        if got != want {
            let c_text: Vec<String> = c.iter().map(ToString::to_string).collect();
            battery = Status::Fail {
                detail: format!("objective ({}): formulation gives {got:?}, language gives {want:?}", c_text.join(", ")),
            };
            break;
        }
    }
    let support_battery = Check::timed(t, battery);

    let certified = if !options.certify {
        Check::skipped("not requested")
    } else if !completeness.passed() {
        Check::skipped("completeness failed")
    } else if points.len() > options.max_points {
        Check::skipped(format!("|L(n)| = {} exceeds {}", points.len(), options.max_points))
    } else if hull_variables::<S>(points, n) > options.exact_threshold {
        Check::skipped(format!(
            "{} hull variables exceed the threshold {}",
            hull_variables::<S>(points, n),
            options.exact_threshold
        ))
    } else {
        let t = Instant::now();
        let status = if points.is_empty() {
            if oracle.is_feasible() {
                Status::Fail { detail: "L(n) is empty but the formulation is not".into() }
            } else {
                Status::Pass
            }
        } else {
            let rational: Vec<Vec<S>> =
                points.iter().map(|p| p.iter().map(|&b| S::from_i64(b as i64)).collect()).collect();
            let hull = convex_hull_hrep(&rational)?;
            let mut status = Status::Pass;
            for row in hull.constraints() {
                if !oracle.is_valid(row)? {
                    status = Status::Fail {
                        detail: format!("hull row `{}` is violated by the projection", row_text(row, n)),
                    };
                    break;
                }
            }
            status
        };
        Check::timed(t, status)
    };

    Ok(VerificationReport {
        n,
        language_size: points.len(),
        inequalities: report.inequalities,
        equations: report.equations,
        variables: report.variables,
        completeness,
        soundness,
        support_battery,
        certified,
        size_check: Check::skipped("no bound declared"),
    })
}

/// Runs every check of `E` against `L(n)`.
pub fn verify_language_ef<S: Scalar>(
    e: &ExtendedFormulation<S>,
    l: &LanguageSpec,
    n: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let points = l.enumerate(n)?;
    if e.dim() != n {
        return Err(crate::error::Error::DimensionMismatch { expected: n, found: e.dim() });
    }
    verify_against_points(e, &points, n, options)
}

/// Compares the counted size with a declared bound.
pub fn size_check<S: Scalar>(e: &ExtendedFormulation<S>, bound: &DeclaredBound) -> Check {
    let size = e.size() as u128;
    let status = if size <= bound.value {
        Status::Pass
    } else {
        Status::Fail { detail: format!("{size} inequalities exceed {} = {}", bound.expression, bound.value) }
    };
    Check { status, seconds: 0.0 }
}

impl VerificationReport {
    pub fn with_size_check<S: Scalar>(mut self, e: &ExtendedFormulation<S>, bound: &DeclaredBound) -> Self {
        self.size_check = size_check(e, bound);
        self
    }
}
