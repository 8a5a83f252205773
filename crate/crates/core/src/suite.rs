//! The invariant suite run by `verify`: every estimate checked against the
//! shooting eigenvalue on one chain and exponent.

use serde::Serialize;

use crate::chain::{dual_chain, Case, Chain};
use crate::eigen::{self, EigenSolution};
use crate::error::Result;
use crate::exponent::Exponent;
use crate::forms::rayleigh_quotient;
use crate::ops::{self, ScanOptions};
use crate::random::{random_candidate, random_function, rng};
use crate::testfn::{Class, Side};

/// Relative tolerance for the inequality checks.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub lambda: f64,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Random candidates per admissibility class.
    pub trials: usize,
    /// Steps of each approximating sequence.
    pub iters: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            iters: 5,
            seed: 0,
            tol: eigen::DEFAULT_TOL,
        }
    }
}

/// `a <= b` up to a relative slack.
pub fn leq(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * a.abs().max(b.abs())
}

struct Recorder(Vec<SuiteCheck>);

impl Recorder {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(SuiteCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records the first violated index of a pairwise condition, if any.
    fn all(&mut self, name: &str, bad: Option<usize>, what: impl Fn(usize) -> String) {
        match bad {
            None => self.push(name, true, "ok"),
            Some(i) => self.push(name, false, what(i)),
        }
    }
}

pub fn run(chain: &Chain, e: &Exponent, opts: &SuiteOptions) -> Result<SuiteReport> {
    let sol = eigen::solve(chain, e, opts.tol)?;
    let lambda = sol.lambda;
    let mut rec = Recorder(Vec::new());

    for c in eigen::verify_solution(chain, e, &sol)?.checks {
        rec.push(
            format!("eigen.{}", c.name),
            c.passed,
            format!("{:.3e} (tol {:.0e})", c.value, c.tol),
        );
    }

    let (lo, hi) = ops::basic_bounds(chain, e);
    rec.push(
        "basic_sandwich",
        leq(lo, lambda, REL_TOL) && leq(lambda, hi, REL_TOL),
        format!("{lo:.6e} <= {lambda:.6e} <= {hi:.6e}"),
    );

    sequences(&mut rec, chain, e, lambda, opts.iters)?;
    certificates(&mut rec, chain, e, &sol, opts)?;
    rayleigh(&mut rec, chain, e, lambda, opts);

    let it = eigen::inverse_iteration(chain, e, 1e-10, 1_000_000)?;
    let gap = (it.lambda - lambda).abs() / lambda;
    rec.push(
        "oracle_agreement",
        it.converged && gap <= 1e-8,
        format!("gap {gap:.3e} after {} steps", it.iterations),
    );

    let first = chain.case().first_index();
    let ms: Vec<usize> = (first..=chain.n()).collect();
    let seq = eigen::lambda_truncated_seq(chain, e, &ms, opts.tol)?;
    rec.all(
        "truncation_nonincreasing",
        (1..seq.len()).find(|&i| !leq(seq[i], seq[i - 1], 1e-12)),
        |i| format!("lambda^({}) > lambda^({})", ms[i], ms[i - 1]),
    );
    let last = *seq.last().expect("nonempty");
    rec.push(
        "truncation_limit",
        (last - lambda).abs() <= 1e-12 * lambda,
        format!("{last:.16e} vs {lambda:.16e}"),
    );

    if chain.case() == Case::Dn {
        let (lhs, rhs) = duality_sides(chain, e, opts.tol)?;
        let gap = (lhs - rhs).abs() / lhs;
        rec.push("duality", gap <= 1e-8, format!("gap {gap:.3e}"));
    }
    Ok(SuiteReport {
        lambda,
        checks: rec.0,
    })
}

/// `lambda_p(dn)^(-1/p)` and `lambda_{p*}(dual)^(-1/p*)`.
pub fn duality_sides(chain: &Chain, e: &Exponent, tol: f64) -> Result<(f64, f64)> {
    let dual = dual_chain(chain, e)?;
    let conj = e.conjugate()?;
    let a = eigen::solve(chain, e, tol)?.lambda;
    let b = eigen::solve(&dual, &conj, tol)?.lambda;
    Ok((a.powf(-1.0 / e.p()), b.powf(-1.0 / conj.p())))
}

fn sequences(rec: &mut Recorder, chain: &Chain, e: &Exponent, lambda: f64, iters: usize) -> Result<()> {
    let d = ops::delta_seq(chain, e, iters)?.values;
    let (dp, db) = ops::cut_sequences(chain, e, iters, &ScanOptions::default())?;
    let (dp, db) = (dp.values, db.values);
    rec.all(
        "delta_nonincreasing",
        (1..iters).find(|&i| !leq(d[i], d[i - 1], REL_TOL)),
        |i| format!("delta_{} > delta_{}", i + 1, i),
    );
    rec.all(
        "delta_prime_nondecreasing",
        (1..iters).find(|&i| !leq(dp[i - 1], dp[i], REL_TOL)),
        |i| format!("delta'_{} < delta'_{}", i + 1, i),
    );
    rec.all(
        "delta_lower_bounds",
        (0..iters).find(|&i| !leq(1.0 / d[i], lambda, REL_TOL)),
        |i| format!("1/delta_{} = {:.6e} above lambda", i + 1, 1.0 / d[i]),
    );
    rec.all(
        "delta_prime_upper_bounds",
        (0..iters).find(|&i| !leq(lambda, 1.0 / dp[i], REL_TOL)),
        |i| format!("1/delta'_{} = {:.6e} below lambda", i + 1, 1.0 / dp[i]),
    );
    rec.all(
        "delta_bar_upper_bounds",
        (0..iters).find(|&i| !leq(lambda, 1.0 / db[i], REL_TOL)),
        |i| format!("1/delta-bar_{} = {:.6e} below lambda", i + 1, 1.0 / db[i]),
    );
    rec.all(
        "delta_bar_dominates_prime",
        (1..iters).find(|&i| !leq(dp[i - 1], db[i], REL_TOL)),
        |i| format!("delta-bar_{} < delta'_{}", i + 1, i),
    );
    if chain.n() <= ops::SCAN_CAP {
        let imp = ops::improved_estimates(chain, e)?;
        let pairs = [
            ("delta1", imp.delta1, d[0]),
            ("delta1_prime", imp.delta1_prime, dp[0]),
            ("delta_bar1", imp.delta_bar1, db[0]),
        ];
        let worst = pairs
            .iter()
            .map(|(_, a, b)| (a - b).abs() / b)
            .fold(0.0, f64::max);
        rec.push(
            "closed_forms",
            worst <= 1e-12,
            format!("max relative gap {worst:.3e}"),
        );
        let s = ops::sigma(chain, e).value;
        rec.push(
            "delta_bar1_range",
            leq(s, imp.delta_bar1, REL_TOL) && leq(imp.delta_bar1, e.p() * s, REL_TOL),
            format!("{:.6e} in [{s:.6e}, {:.6e}]", imp.delta_bar1, e.p() * s),
        );
    }
    Ok(())
}

fn certificates(
    rec: &mut Recorder,
    chain: &Chain,
    e: &Exponent,
    sol: &EigenSolution,
    opts: &SuiteOptions,
) -> Result<()> {
    let mut r = rng(opts.seed);
    let lambda = sol.lambda;
    for class in Class::ALL {
        if !class.exists_for(chain.case()) {
            continue;
        }
        let side = class.side().expect("classified");
        let (mut tried, mut worst) = (0, None);
        for t in 0..opts.trials {
            let near = (t % 2 == 1).then_some(sol);
            let Some(cand) = random_candidate(&mut r, chain, e, class, near) else {
                continue;
            };
            let bound = match ops::bound_from_test_function(chain, e, &cand, side) {
                Ok(b) => b.value,
                // Zero increments on an F_I lower bound certify nothing.
                Err(_) => continue,
            };
            tried += 1;
            let ok = match side {
                Side::Lower => leq(bound, lambda, REL_TOL),
                Side::Upper => leq(lambda, bound, REL_TOL),
            };
            if !ok && worst.is_none() {
                worst = Some(bound);
            }
        }
        match worst {
            None => rec.push(
                format!("certificate.{class}"),
                true,
                format!("{tried} candidates"),
            ),
            Some(b) => rec.push(
                format!("certificate.{class}"),
                false,
                format!("{side} bound {b:.6e} vs lambda {lambda:.6e}"),
            ),
        }
    }
    Ok(())
}

fn rayleigh(rec: &mut Recorder, chain: &Chain, e: &Exponent, lambda: f64, opts: &SuiteOptions) {
    let mut r = rng(opts.seed ^ 0x5eed);
    let bad = (0..opts.trials).find_map(|_| {
        let f = random_function(&mut r, chain.len());
        let q = rayleigh_quotient(chain, e, &f).ok()?;
        (!leq(lambda, q, REL_TOL)).then_some(q)
    });
    match bad {
        None => rec.push("rayleigh_optimality", true, format!("{} functions", opts.trials)),
        Some(q) => rec.push(
            "rayleigh_optimality",
            false,
            format!("quotient {q:.6e} below lambda {lambda:.6e}"),
        ),
    }
}
