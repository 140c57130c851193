//! Acceptance criteria 1–12. Each criterion prints one line:
//!
//!   criterion NN PASS|FAIL  <title>  (<elapsed> / budget <budget>)  <detail>
//!
//! Every comparison is exact equality in F_p; the only tolerances are the wall-clock
//! budgets below, pinned per criterion. Criteria listed in `UNATTAINABLE` are expected
//! to fail and the test asserts that they still do, so a silent change is caught.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siegel::arith::{is_prime, Fp, QuadExt};
use siegel::cycles::{analyze_anchored, predict_scalar_cycle, predict_vector_cycle, CycleKind, CycleReport};
use siegel::fixtures::{index_box, invariant_form, random_form};
use siegel::galois::{classify_inertia, frob_charpoly, reduction_plan, twist_system, HeckeData, HeckeSystem, InertiaType};
use siegel::hecke::{hecke_apply, hecke_coefficient, required_indices, required_indices_with, HeckeOptions, HeckeRequest, Lifting};
use siegel::localdef::{
    big_theta_local_value, random_hasse_det, random_local, step3_identity_check, theta1_local_leading, theta2_local_n1_leading,
    theta_local, Local, LocalRing, T11, T12, T22,
};
use siegel::qexp::{QExpansion, QIndex};
use siegel::rep::{
    component_basis, pieri_assemble, pieri_project, pieri_split, rep_apply, sym2_of_index, tensor_apply, Mat2, TensorVector, Weight,
};
use siegel::strata::{canonical_filtration_compute, eo_tables, partial_hasse_order_with_zeta, Phi};
use siegel::theta::{big_theta, big_theta_multiplier, theta2_iterate_closed, theta_j, theta_scalar, Proportionality};

const BUDGET_PIERI: Duration = Duration::from_secs(5);
const BUDGET_BIG_THETA: Duration = Duration::from_secs(5);
const BUDGET_HECKE: Duration = Duration::from_secs(10);
const BUDGET_COMMUTATION: Duration = Duration::from_secs(30);
const BUDGET_STRATA: Duration = Duration::from_secs(60);
const BUDGET_STEP3: Duration = Duration::from_secs(30);
const BUDGET_CYCLES: Duration = Duration::from_secs(5);
const BUDGET_NONE: Duration = Duration::from_secs(600);

const UNATTAINABLE: &[u8] = &[7];

type Criterion = (u8, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn modp(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn pow_mod(b: i128, e: u64, p: u64) -> u64 {
    let mut r: i128 = 1;
    for _ in 0..e {
        r = (r * b).rem_euclid(p as i128);
    }
    r as u64
}

fn inv_mod(x: i128, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn random_invertible(p: u64, rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let q = p as i64;
        let g = [[rng.gen_range(0..q), rng.gen_range(0..q)], [rng.gen_range(0..q), rng.gen_range(0..q)]];
        if (g[0][0] * g[1][1] - g[0][1] * g[1][0]).rem_euclid(q) != 0 {
            return g;
        }
    }
}

fn c01_pieri() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut cases = 0;
    for p in [5u64, 7, 11] {
        for n in 0..=p as usize - 3 {
            let dims: usize = (0..=n.min(2)).map(|j| component_basis(j, n, 0, p).unwrap().len()).sum();
            if dims != 3 * (n + 1) {
                return outcome(false, format!("p={p} n={n}: component dimensions sum to {dims}"));
            }
            for _ in 0..100 {
                let m = rng.gen_range(-3..4);
                let x = TensorVector { n, m, coords: (0..3 * (n + 1)).map(|_| Fp::new(rng.gen_range(0..p as i64), p)).collect() };
                let g = random_invertible(p, &mut rng);
                let s = pieri_split(n, p, &x).unwrap();
                if pieri_assemble(n, m, p, &s).unwrap() != x {
                    return outcome(false, format!("p={p} n={n}: reassembly differs"));
                }
                let gs = pieri_split(n, p, &tensor_apply(&g, &x).unwrap()).unwrap();
                for j in 0..3 {
                    if let Some(v) = s.component(j) {
                        let w = Weight::new(v.n as i64 + v.m, v.m);
                        if gs.component(j) != Some(&rep_apply(w, &g, v).unwrap()) {
                            return outcome(false, format!("p={p} n={n} j={j}: not equivariant for g={g:?}"));
                        }
                    }
                }
                cases += 1;
            }
        }
    }
    outcome(true, format!("{cases} random (g, x) over p in {{5,7,11}}, n <= p-3"))
}

/// Scalar part of (T ⊗ T)/N² under the projection onto the determinant line.
fn double_tensor_scalar(t: QIndex, level: u64, p: u64) -> Fp {
    let s = sym2_of_index(t.a, t.b, t.c, p);
    let n = Fp::new(level as i64, p);
    let x = TensorVector::outer(&s, &s).scale(Fp::new(1, p) / (n * n));
    pieri_project(2, &x, p).unwrap().coords[0]
}

fn c02_big_theta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for p in [5u64, 7] {
        for i in 0..50 {
            let level = [1u64, 2, 3][i % 3];
            let f = random_form(p, level, Weight::new(4, 4), &index_box(3), &mut rng);
            let direct = big_theta(&f, 1).unwrap();
            let composite = theta_j(&theta_scalar(&f).unwrap(), 1).unwrap();
            if composite != direct.hasse_scale(1) {
                return outcome(false, format!("p={p}: theta_1(theta(F)) differs from big theta"));
            }
            for (t, v) in direct.support() {
                if v.coords[0] != f.coeff_or_zero(t).coords[0] * double_tensor_scalar(*t, level, p) {
                    return outcome(false, format!("p={p} T={t:?}: multiplier mismatch"));
                }
            }
        }
    }
    outcome(true, "50 random expansions per p in {5,7}")
}

fn c03_hecke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let opts = HeckeOptions { assume_complete: true, lifting: Lifting::Crt };
    for p in [5u64, 7, 11] {
        let f = random_form(p, 3, Weight::new(5, 3), &index_box(3), &mut rng);
        let req = HeckeRequest { ell: 2, power: 0, targets: f.indices().collect() };
        if hecke_apply(&f, &req, opts).unwrap() != f {
            return outcome(false, format!("p={p}: T(1) is not the identity"));
        }
        for ell in [2u64, 3] {
            for k in 2..=8i64 {
                let mut g = QExpansion::new(p, 1, Weight::new(k, k)).unwrap();
                g.insert_ints(QIndex::new(0, 0, 0), &[1]).unwrap();
                let got = hecke_coefficient(&g, ell, 1, QIndex::new(0, 0, 0), HeckeOptions::default()).unwrap().coords[0].value();
                let l = ell as i128;
                let want = modp(1 + (l + 1) * pow_mod(l, (k - 2) as u64, p) as i128 + pow_mod(l, (2 * k - 3) as u64, p) as i128, p);
                if got != want {
                    return outcome(false, format!("p={p} ell={ell} k={k}: constant term {got}, expected {want}"));
                }
            }
        }
    }
    let mut lifts = 0;
    for (ell, p, level) in [(2u64, 7u64, 3u64), (3, 5, 4), (2, 11, 5), (3, 7, 5)] {
        for w in [Weight::new(4, 4), Weight::new(5, 3)] {
            for t in [QIndex::new(1, 1, 1), QIndex::new(2, 1, 1), QIndex::new(1, 0, 2)] {
                for power in 1..=2 {
                    let seed: u64 = rng.gen();
                    let mut need: BTreeSet<QIndex> = required_indices(ell, power, t, level).unwrap();
                    need.extend(required_indices_with(ell, power, t, level, Lifting::Randomized(seed)).unwrap());
                    let f = invariant_form(p, level, w, &need, rng.gen_range(0..100));
                    let a = hecke_coefficient(&f, ell, power, t, opts).unwrap();
                    let b = hecke_coefficient(&f, ell, power, t, HeckeOptions { lifting: Lifting::Randomized(seed), ..opts }).unwrap();
                    if a != b {
                        return outcome(false, format!("lift dependence at ell={ell} p={p} T={t:?} i={power}"));
                    }
                    lifts += 1;
                }
            }
        }
    }
    outcome(true, format!("grid ell in {{2,3}}, k in 2..8, p in {{5,7,11}}; {lifts} lift comparisons"))
}

fn c04_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let opts = HeckeOptions { assume_complete: true, lifting: Lifting::Crt };
    let targets = [QIndex::new(1, 1, 1), QIndex::new(1, 0, 2), QIndex::new(2, 1, 1)];
    let mut checks = 0;
    for p in [5u64, 7] {
        for ell in [2u64, 3] {
            let lf = Fp::new(ell as i64, p);
            for (w, js) in [(Weight::new(6, 4), vec![1u8, 2, 3]), (Weight::new(5, 4), vec![2, 3]), (Weight::new(4, 4), vec![3])] {
                let f = random_form(p, 1, w, &index_box(4), &mut rng);
                for t in targets {
                    let hf = hecke_coefficient(&f, ell, 1, t, opts).unwrap();
                    let x = TensorVector::outer(&hf, &sym2_of_index(t.a, t.b, t.c, p)).scale(f.level_inv());
                    for &j in &js {
                        let lhs = hecke_coefficient(&theta_j(&f, j).unwrap(), ell, 1, t, opts).unwrap();
                        let rhs = pieri_project(3 - j as usize, &x, p).unwrap().scale(lf);
                        if lhs.coords != rhs.coords {
                            return outcome(false, format!("p={p} ell={ell} j={j} T={t:?}"));
                        }
                        checks += 1;
                    }
                }
            }
            let f = random_form(p, 1, Weight::new(4, 4), &index_box(4), &mut rng);
            for t in targets {
                let lhs = hecke_coefficient(&big_theta(&f, 1).unwrap(), ell, 1, t, opts).unwrap();
                let hf = hecke_coefficient(&f, ell, 1, t, opts).unwrap();
                if lhs.coords != vec![hf.coords[0] * big_theta_multiplier(t, 1, p) * lf * lf] {
                    return outcome(false, format!("big theta p={p} ell={ell} T={t:?}"));
                }
                checks += 1;
            }
        }
    }
    outcome(true, format!("{checks} coefficient identities, factor ell for theta_j and ell^2 for big theta"))
}

fn c05_strata() -> Outcome {
    let cases: [(Phi, Option<u8>, u64, i64); 8] = [
        (Phi(1, 2), None, 5, 1),
        (Phi(1, 2), None, 7, 1),
        (Phi(1, 1), Some(1), 5, 34),
        (Phi(1, 1), Some(2), 5, 10),
        (Phi(1, 1), Some(1), 7, 62),
        (Phi(1, 1), Some(2), 7, 14),
        (Phi(0, 1), None, 5, 480),
        (Phi(0, 1), None, 7, 2016),
    ];
    let mut seen = Vec::new();
    for (phi, v, p, want) in cases {
        let zeta = siegel::arith::find_zeta(p).unwrap();
        let got = partial_hasse_order_with_zeta(phi, v, p, None, zeta).map(|r| r.order);
        if got != Ok(want) {
            return outcome(false, format!("{phi} {v:?} p={p}: {got:?}, expected {want}"));
        }
        seen.push(want.to_string());
    }
    let roots = QuadExt::new(5).unwrap().roots_of_minus_one();
    for z in &roots {
        if partial_hasse_order_with_zeta(Phi(0, 1), None, 5, None, *z).map(|r| r.order) != Ok(480) {
            return outcome(false, format!("zeta dependence at {z:?}"));
        }
    }
    outcome(true, format!("orders [{}]; all {} roots of zeta^6 = -1 at p=5", seen.join(", "), roots.len()))
}

fn c06_canonical() -> Outcome {
    for rec in eo_tables() {
        for p in [5u64, 7, 11] {
            let c = canonical_filtration_compute(rec.phi, p).unwrap();
            if c != rec.canonical {
                return outcome(false, format!("{} at p={p}: computed {c:?}", rec.phi));
            }
        }
    }
    outcome(true, "all four strata at p in {5,7,11}")
}

fn linear(ring: LocalRing, c11: u64, c12: u64, c22: u64) -> Local {
    ring.var(T11).scale(ring.fp(c11 as i64)).add(&ring.var(T12).scale(ring.fp(c12 as i64))).add(&ring.var(T22).scale(ring.fp(c22 as i64)))
}

fn c07_local() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures: Vec<String> = Vec::new();
    let mut mismatch_big = 0;
    let mut total = 0;
    for p in [5u64, 7, 11] {
        let ring = LocalRing::new(p, 3).unwrap();
        let q = p as i128;
        for _ in 0..50 {
            total += 1;
            let alpha = rng.gen_range(0..q);
            let k = rng.gen_range(1..3 * q);
            let out = theta_local(&ring.constant(ring.fp(alpha as i64)), k as i64, 1);
            let ka = modp(k * alpha, p);
            let want = [linear(ring, 0, 0, ka), linear(ring, 0, modp(2 * k * alpha, p), 0), linear(ring, ka, 0, 0)];
            if out.iter().zip(&want).any(|(o, w)| o.truncate(2) != w.truncate(2)) {
                failures.push(format!("theta_local p={p} k={k}"));
            }
            let printed = modp(k * (2 * k - 1) * alpha * inv_mod(9, p) as i128, p);
            if big_theta_local_value(ring.fp(alpha as i64), k as i64).unwrap().value() != printed {
                mismatch_big += 1;
            }
            let (k1, k2) = (rng.gen_range(1..60i128), rng.gen_range(1..30i128));
            let fs = [rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q)];
            let h = modp(-(k1 - 3 * k2) * inv_mod(2, p) as i128, p) as i128;
            let want = linear(ring, modp(h * fs[0], p), modp(h * fs[1], p), modp(-(k1 - 3) * fs[2], p));
            let got = theta1_local_leading(ring, fs.map(|x| ring.fp(x as i64)), k1 as i64, k2 as i64);
            if got != want {
                failures.push(format!("theta1 p={p}"));
            }
            let (f0, f1) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let c = modp((2 * k - 1) * inv_mod(3, p) as i128, p) as i128;
            let want = [linear(ring, 0, modp(-c * f0, p), modp(c * f1, p)), linear(ring, modp(-c * f0, p), modp(c * f1, p), 0)];
            if theta2_local_n1_leading(ring, [ring.fp(f0 as i64), ring.fp(f1 as i64)], k as i64) != want {
                failures.push(format!("theta2 n=1 p={p}"));
            }
        }
    }
    if mismatch_big > 0 {
        failures.push(format!(
            "big_theta_local_value differs from the printed k(2k-1)alpha/9 on {mismatch_big} of {total} tuples (computed value is k(2k-1)alpha/3)"
        ));
    }
    outcome(failures.is_empty(), if failures.is_empty() { "four leading forms on 50 tuples per p".into() } else { failures.join("; ") })
}

fn c08_step3() -> Outcome {
    let ring = LocalRing::new(7, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for i in 0..50 {
        let f = random_local(ring, &mut rng);
        let d = random_hasse_det(ring, &mut rng);
        let k = 2 + (i % 5) as i64;
        if !step3_identity_check(&f, &d, k, 5).unwrap() {
            return outcome(false, format!("instance {i} with k={k}"));
        }
    }
    let generic = (0..50)
        .filter(|i| {
            let f = random_local(ring, &mut rng);
            let d = random_local(ring, &mut rng).truncate(3);
            let d = d.add(&ring.constant(ring.one() - d.constant_term()));
            !step3_identity_check(&f, &d, 2 + (i % 5) as i64, 5).unwrap()
        })
        .count();
    outcome(true, format!("50 instances with det A = det(alpha - bT), p=7, cutoff 5; fails on {generic} of 50 generic unit dets"))
}

/// Jumping numbers recomputed from the entries: b = (w_t + step − w_{t+1})/(p − 1) at drops.
fn oracle_sum_b(r: &CycleReport, kind: CycleKind) -> i64 {
    let (p, e) = (r.p, &r.entries);
    let step = kind.step(p);
    let n = e.len();
    let start = if r.semi_ordinary && kind == CycleKind::Scalar { 0 } else { n - 1 };
    let seq: Vec<i64> = (0..=n).map(|i| e[(start + i) % n]).collect();
    seq.windows(2).filter(|w| w[1] != w[0] + step).map(|w| (w[0] + step - w[1]) / (p - 1)).sum()
}

fn c09_cycles() -> Outcome {
    let mut count = 0;
    for p in (5..=31).filter(|&p| is_prime(p as u64)) {
        for k in 2..=3 * p + 2 {
            for semi in [false, true] {
                for kind in [CycleKind::Scalar, CycleKind::Vector] {
                    let r = match kind {
                        CycleKind::Scalar => predict_scalar_cycle(p, k, semi, None),
                        CycleKind::Vector => predict_vector_cycle(p, k, semi),
                    };
                    let r = match r {
                        Ok(r) => r,
                        Err(e) if semi && kind == CycleKind::Scalar && k % p == 0 && k != p => {
                            assert!(e.to_string().contains("case not covered"));
                            continue;
                        }
                        Err(e) => return outcome(false, format!("p={p} k={k} semi={semi} {kind:?}: {e}")),
                    };
                    let want_len = if kind == CycleKind::Scalar { (p - 1) / 2 } else { p - 1 };
                    let want_b = if kind == CycleKind::Scalar { (p + 1) / 2 } else { p };
                    let anchor = if semi && kind == CycleKind::Scalar { 0 } else { r.entries.len() - 1 };
                    let again = analyze_anchored(&r.entries, p, kind, r.symbolic_base, anchor).unwrap();
                    let case2 = r.analysis.low_points.windows(2).any(|w| (w[0].kind, w[1].kind) == (Some(1), Some(2)));
                    let ok = r.entries.len() as i64 == want_len
                        && again == r.analysis
                        && r.analysis.passes()
                        && r.analysis.sum_b == want_b
                        && r.analysis.sum_c == want_len
                        && (r.symbolic_base || oracle_sum_b(&r, kind) == want_b)
                        && !case2;
                    if !ok {
                        return outcome(false, format!("p={p} k={k} semi={semi} {kind:?}: {:?}", r.analysis.violations));
                    }
                    count += 1;
                }
            }
        }
    }
    outcome(true, format!("{count} predicted cycles over primes 5..31"))
}

fn c10_theta2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut mus = Vec::new();
    for p in [7u64, 11, 13, 17] {
        for level in [1u64, 2, 3] {
            let f = random_form(p, level, Weight::new(5, 4), &index_box(2), &mut rng);
            let (closed, rep) = theta2_iterate_closed(&f, 1).unwrap();
            let want = pow_mod(64, 1, p);
            match rep {
                Proportionality::Proportional { mu } if mu == want && mu != 0 && !closed.is_empty() => {}
                other => return outcome(false, format!("p={p} N={level}: {other:?}, expected mu_1 = 64 mod p = {want}")),
            }
        }
        mus.push(format!("p={p}: {}", 64 % p));
    }
    outcome(true, format!("mu_1 = 64 on every instance ({})", mus.join(", ")))
}

fn c11_galois() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for p in [5u64, 7, 11] {
        let q = p as i64;
        for _ in 0..100 {
            let ell = [2u64, 3, 13, 17][rng.gen_range(0..4)];
            let w = Weight::new(rng.gen_range(3..40), rng.gen_range(1..3));
            let (l1, l2, c) = (rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(1..q));
            let f = frob_charpoly(Fp::new(l1, p), Fp::new(l2, p), Fp::new(c, p), ell, w, p).unwrap();
            let s = w.k1 + w.k2;
            let nu = modp(c as i128 * pow_mod(ell as i128, (s - 3) as u64, p) as i128, p);
            let want = [
                1,
                modp(-(l1 as i128), p),
                modp(l1 as i128 * l1 as i128 - l2 as i128 - pow_mod(ell as i128, (s - 4) as u64, p) as i128 * c as i128, p),
                modp(-(nu as i128) * l1 as i128, p),
                modp(nu as i128 * nu as i128, p),
            ];
            if f.coeffs.map(|x| x.value()) != want || !f.is_symplectic() {
                return outcome(false, format!("charpoly p={p} ell={ell}"));
            }
            let alpha = rng.gen_range(0..q - 1);
            let mut sys = HeckeSystem::new(p, 1, w).unwrap();
            sys.insert(ell, HeckeData { lam1: Fp::new(l1, p), lam2: Fp::new(l2, p), chi2: Fp::new(c, p) }).unwrap();
            let g = &twist_system(&sys, alpha).unwrap().charpolys().unwrap()[&ell];
            let la = pow_mod(ell as i128, alpha as u64, p) as i128;
            let scaled: Vec<u64> = want.iter().enumerate().map(|(j, &a)| modp(a as i128 * pow_mod(la, j as u64, p) as i128, p)).collect();
            if g.coeffs.map(|x| x.value()).to_vec() != scaled {
                return outcome(false, format!("twist p={p} ell={ell} alpha={alpha}"));
            }
        }
    }
    let accepted = (0..624).filter(|&a| classify_inertia(InertiaType::Level4 { a }, 5).unwrap().valid_mod_p()).count();
    let brute = (0i64..624).filter(|a| a % 6 == 0 && a % 26 != 0).count();
    if accepted != brute {
        return outcome(false, format!("level 4: {accepted} accepted, brute force {brute}"));
    }
    let plan = reduction_plan(Weight::new(10, 10), 5).unwrap();
    if plan.ladder_printed != 110 || plan.bound != 661 || !plan.bound_ok {
        return outcome(false, format!("plan at p=5: i={} bound={}", plan.ladder_printed, plan.bound));
    }
    outcome(true, format!("palindrome and twist on 100 systems per p; level 4 count {accepted}; plan i=110, bound 661"))
}

fn c12_codec() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    for p in [5u64, 7, 11] {
        for i in 0..20 {
            let w = [Weight::new(4, 4), Weight::new(6, 3), Weight::new(5, 4)][i % 3];
            let f = random_form(p, 1 + (i as u64 % 3), w, &index_box(3), &mut rng);
            if QExpansion::from_smf(&f.to_smf()).unwrap() != f {
                return outcome(false, format!("codec round trip p={p}"));
            }
            let g = random_form(p, 1, Weight::new(3, 3), &index_box(2), &mut rng);
            let h = g.frobenius_power().unwrap();
            if !h.is_p_singular() || !h.is_weak_p_singular() || h.pth_root().unwrap() != Some(g.clone()) {
                return outcome(false, format!("p-singularity p={p}"));
            }
            if f.is_p_singular() && !f.is_weak_p_singular() {
                return outcome(false, format!("p-singular but not weak p={p}"));
            }
        }
    }
    outcome(true, "60 codec round trips; Frobenius powers are p-singular, weak, and recover their root")
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (1, "Pieri suite", BUDGET_PIERI, c01_pieri),
        (2, "big theta composite", BUDGET_BIG_THETA, c02_big_theta),
        (3, "Hecke identity, constant term, lifts", BUDGET_HECKE, c03_hecke),
        (4, "theta-Hecke commutation", BUDGET_COMMUTATION, c04_commutation),
        (5, "strata orders", BUDGET_STRATA, c05_strata),
        (6, "canonical type oracle", BUDGET_NONE, c06_canonical),
        (7, "local leading terms", BUDGET_NONE, c07_local),
        (8, "closed form of big theta", BUDGET_STEP3, c08_step3),
        (9, "theta cycles", BUDGET_CYCLES, c09_cycles),
        (10, "theta_2 iterate proportionality", BUDGET_NONE, c10_theta2),
        (11, "Galois bookkeeping", BUDGET_NONE, c11_galois),
        (12, "codec and p-singularity", BUDGET_NONE, c12_codec),
    ];
    let mut unexpected = Vec::new();
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        println!(
            "criterion {id:02} {}  {title}  ({:.2}s / budget {}s)  {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
        if pass == UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
