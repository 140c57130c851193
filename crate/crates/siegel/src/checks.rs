//! Invariant suites run by `siegel check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{is_prime, Fp};
use crate::cycles::{predict_scalar_cycle, predict_vector_cycle, CycleKind};
use crate::error::{Error, Result};
use crate::galois::{classify_inertia, frob_charpoly, reduction_plan, InertiaType};
use crate::localdef::{random_hasse_det, random_local, step3_identity_check, LocalRing};
use crate::rep::{component_basis, pieri_assemble, pieri_split, rep_apply, tensor_apply, Mat2, TensorVector, Weight};
use crate::strata::{canonical_filtration_compute, eo_tables, partial_hasse_order, Phi};

pub const SUITES: [&str; 6] = ["pieri", "strata", "cycles", "galois", "localdef", "all"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub suite: &'static str,
    pub p: u64,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub primes: Vec<u64>,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
}

fn line(suite: &'static str, p: u64, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine { suite, p, name: name.into(), pass, detail: detail.into() }
}

pub fn run_suite(suite: &str, primes: &[u64]) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::domain(format!("unknown suite {suite}; expected one of {}", SUITES.join(", "))));
    }
    if let Some(&p) = primes.iter().find(|&&p| p < 5 || !is_prime(p)) {
        return Err(Error::domain(format!("p = {p} must be a prime at least 5")));
    }
    let mut checks = Vec::new();
    for &p in primes {
        let all = suite == "all";
        if all || suite == "pieri" {
            checks.extend(pieri(p));
        }
        if all || suite == "strata" {
            checks.extend(strata(p));
        }
        if all || suite == "cycles" {
            checks.extend(cycles(p));
        }
        if all || suite == "galois" {
            checks.extend(galois(p));
        }
        if all || suite == "localdef" {
            checks.extend(localdef(p));
        }
    }
    Ok(SuiteReport { suite: suite.into(), primes: primes.to_vec(), pass: checks.iter().all(|c| c.pass), checks })
}

fn random_invertible(p: u64, rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let g = [[rng.gen_range(0..p as i64), rng.gen_range(0..p as i64)], [rng.gen_range(0..p as i64), rng.gen_range(0..p as i64)]];
        if (g[0][0] * g[1][1] - g[0][1] * g[1][0]).rem_euclid(p as i64) != 0 {
            return g;
        }
    }
}

fn pieri(p: u64) -> Vec<CheckLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut out = Vec::new();
    for n in 0..=p as usize - 3 {
        let dims: usize = (0..=n.min(2)).map(|j| component_basis(j, n, 0, p).map_or(0, |b| b.len())).sum();
        out.push(line("pieri", p, format!("dimension n={n}"), dims == 3 * (n + 1), format!("{dims}")));
        let mut failures = 0;
        for _ in 0..100 {
            let m = rng.gen_range(-2..3);
            let x = TensorVector { n, m, coords: (0..3 * (n + 1)).map(|_| Fp::new(rng.gen_range(0..p as i64), p)).collect() };
            let g = random_invertible(p, &mut rng);
            let ok = (|| -> Result<bool> {
                let s = pieri_split(n, p, &x)?;
                let mut ok = pieri_assemble(n, m, p, &s)? == x;
                let gs = pieri_split(n, p, &tensor_apply(&g, &x)?)?;
                for j in 0..3 {
                    if let Some(v) = s.component(j) {
                        let w = Weight::new(v.n as i64 + v.m, v.m);
                        ok &= gs.component(j) == Some(&rep_apply(w, &g, v)?);
                    }
                }
                Ok(ok)
            })();
            failures += !matches!(ok, Ok(true)) as usize;
        }
        out.push(line("pieri", p, format!("round trip and equivariance n={n}"), failures == 0, format!("{failures} failures of 100")));
    }
    out
}

fn strata(p: u64) -> Vec<CheckLine> {
    let mut out = Vec::new();
    for rec in eo_tables() {
        let ok = canonical_filtration_compute(rec.phi, p).is_ok_and(|c| c == rec.canonical);
        out.push(line("strata", p, format!("canonical type {}", rec.phi), ok, ""));
    }
    for (phi, v) in [(Phi(1, 2), None), (Phi(1, 1), Some(1)), (Phi(1, 1), Some(2)), (Phi(0, 1), None)] {
        let name = format!("order {phi}{}", v.map_or(String::new(), |v| format!(" variant {v}")));
        match partial_hasse_order(phi, v, p, None) {
            Ok(r) => out.push(line("strata", p, name, r.matches, format!("{} (expected {} = {})", r.order, r.expected, r.expected_value))),
            Err(e) => out.push(line("strata", p, name, false, e.to_string())),
        }
    }
    out
}

fn cycles(p: u64) -> Vec<CheckLine> {
    let q = p as i64;
    let mut bad = Vec::new();
    let mut count = 0;
    for k in 2..=3 * q + 2 {
        for semi in [false, true] {
            for kind in [CycleKind::Scalar, CycleKind::Vector] {
                let r = match kind {
                    CycleKind::Scalar => predict_scalar_cycle(q, k, semi, None),
                    CycleKind::Vector => predict_vector_cycle(q, k, semi),
                };
                let Ok(r) = r else { continue };
                count += 1;
                if r.entries.len() != kind.length(q) || !r.analysis.passes() {
                    bad.push(format!("{kind:?} k={k} semi={semi}"));
                }
            }
        }
    }
    vec![line("cycles", p, "predicted cycles", bad.is_empty(), format!("{count} cycles, failing: [{}]", bad.join(", ")))]
}

fn galois(p: u64) -> Vec<CheckLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(p + 1);
    let q = p as i64;
    let mut palin = true;
    for _ in 0..100 {
        let f = |rng: &mut ChaCha8Rng| Fp::new(rng.gen_range(0..q), p);
        let chi = Fp::new(rng.gen_range(1..q), p);
        let ell = [2u64, 3, 13][rng.gen_range(0..3)];
        let w = Weight::new(rng.gen_range(3..30), rng.gen_range(1..3));
        palin &= frob_charpoly(f(&mut rng), f(&mut rng), chi, ell, w, p).is_ok_and(|c| c.is_symplectic());
    }
    let accepted = (0..q.pow(4) - 1).filter(|&a| classify_inertia(InertiaType::Level4 { a }, p).is_ok_and(|v| v.valid_mod_p())).count();
    let brute = (0..q.pow(4) - 1).filter(|a| a % (q + 1) == 0 && a % (q * q + 1) != 0).count();
    let plan = reduction_plan(Weight::new(q + 3, q + 3), p);
    let plan_ok = plan.as_ref().is_ok_and(|r| r.bound_ok && r.bound == q.pow(4) + q * q + 2 * q + 1);
    vec![
        line("galois", p, "symplectic palindrome", palin, "100 random systems"),
        line("galois", p, "level 4 count", accepted == brute, format!("{accepted} accepted, brute force {brute}")),
        line(
            "galois",
            p,
            "reduction plan bounds",
            plan_ok,
            plan.map(|r| format!("i = {}, bound {}", r.ladder_printed, r.bound)).unwrap_or_default(),
        ),
    ]
}

fn localdef(p: u64) -> Vec<CheckLine> {
    let Ok(ring) = LocalRing::new(p, 5) else {
        return vec![line("localdef", p, "ring", false, "invalid p")];
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p + 2);
    let mut failures = 0;
    for i in 0..20 {
        let f = random_local(ring, &mut rng);
        let d = random_hasse_det(ring, &mut rng);
        failures += !step3_identity_check(&f, &d, 2 + i % 5, 5).unwrap_or(false) as usize;
    }
    vec![line("localdef", p, "closed form of big theta", failures == 0, format!("{failures} failures of 20"))]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_5() {
        for s in ["pieri", "strata", "cycles", "galois", "localdef"] {
            let r = run_suite(s, &[5]).unwrap();
            assert!(r.pass, "{s}: {:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_suite_and_bad_prime() {
        assert!(run_suite("nope", &[5]).is_err());
        assert!(run_suite("pieri", &[9]).is_err());
    }
}
