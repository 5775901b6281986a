//! Acceptance gate: one test per headline claim, each printing a single
//! `[criterion N] PASS/FAIL` line (visible with `--nocapture`, and always
//! on failure). Every numeric tolerance is stated inline; every exact
//! claim is checked with integer/rational arithmetic.

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta2_core::exact::{factorial, harmonic_power_sum, int, iv_certificate, lcm_range, padic_ord,
    padic_ord_int, rat};
use zeta2_core::hp;
use zeta2_core::oracle::{
    barnes_lemma1_check, contour_quad1, contour_quad2, cross_tale_check, growth_fit, zeta2,
    zeta_tail_integral, QuadratureSpec,
};
use zeta2_core::tale_one::{permutation_check, Params, PEX, REM3};
use zeta2_core::tale_two::{that, Params2};
use zeta2_core::verify;
use zeta2_core::Rat;

type Outcome = std::result::Result<String, String>;

fn report(criterion: u32, desc: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("[criterion {criterion}] PASS — {desc} ({detail})"),
        Err(detail) => {
            println!("[criterion {criterion}] FAIL — {desc} ({detail})");
            panic!("criterion {criterion} failed: {detail}");
        }
    }
}

fn from_check(c: verify::Check) -> Outcome {
    if c.passed {
        Ok(c.detail)
    } else {
        Err(format!("{}: {}", c.name, c.detail))
    }
}

fn from_checks(cs: Vec<verify::Check>) -> Outcome {
    let mut details = Vec::new();
    for c in cs {
        details.push(from_check(c)?);
    }
    Ok(details.join("; "))
}

/// q_n is an integer and D_{8n}·D_{9n}·p_n is an integer, exactly, for
/// the main family at n = 1..=40.
#[test]
fn criterion_1_integrality() {
    let outcome = (|| -> Outcome {
        for n in 1..=40 {
            let form = PEX.linear_form(n).map_err(|e| e.to_string())?;
            let mut subs = [form.c1, form.c2];
            subs.sort_unstable();
            if subs != [8 * n, 9 * n] {
                return Err(format!("n = {n}: harmonic subscripts {subs:?} instead of [8n, 9n]"));
            }
            let clear = lcm_range(form.c1 as u64) * lcm_range(form.c2 as u64);
            if !(Rat::from_integer(clear) * &form.p).is_integer() {
                return Err(format!("n = {n}: D_{}·D_{}·p not an integer", form.c1, form.c2));
            }
        }
        Ok("q ∈ ℤ and D_{8n}·D_{9n}·p ∈ ℤ for n = 1..=40".into())
    })();
    report(1, "coefficient integrality, main family", outcome);
}

/// The sharpened inclusions: Φ_n (primes in (√(9n), 8n]) and Φ̃_n (all
/// primes ≤ 8n) divide q_n and clear into D_{8n}·D_{9n}·p_n, n = 1..=40.
#[test]
fn criterion_2_sharpened_integrality() {
    report(2, "prime-sieve inclusions", from_check(verify::corrected_integrality(40)));
}

/// The two constructions give the same linear form: coefficients agree up
/// to one common sign for n = 1..=8, and the prefactor-normalized contour
/// integrals agree to ten significant digits at n = 0, 1, 2.
#[test]
fn criterion_3_cross_construction() {
    let outcome = (|| -> Outcome {
        from_check(verify::cross_construction_coefficients(8))?;
        for n in 0..=2 {
            let (lhs, rhs) = cross_tale_check(n, 30).map_err(|e| e.to_string())?;
            let (l, r) = (lhs.value.to_rat(), rhs.value.to_rat());
            let diff = (&l - &r).abs();
            let bound = l.abs() * rat(1, 10_000_000_000);
            if diff > bound {
                return Err(format!("n = {n}: normalized integrals differ by {}", diff));
            }
        }
        Ok("signs recorded (−1 throughout); integrals agree to 10 digits at n = 0..=2".into())
    })();
    report(3, "cross-construction identity", outcome);
}

/// The frozen decimal constants: C0, C1, the three step-function limits,
/// the two denominator-savings constants (all ±1e−8), and the three
/// measure bounds (±1e−7), headline μ(ζ(2)) ≤ 5.09541178.
#[test]
fn criterion_4_measure_constants() {
    report(4, "growth and measure constants", from_check(verify::measure_constants()));
}

/// Step tables φ, φ̂, φ̃ recomputed from their definitions match the frozen
/// tables, and the permutation rule equals the closed-form minimum at
/// every reduced rational with denominator ≤ 150.
#[test]
fn criterion_5_step_tables() {
    report(
        5,
        "step-function tables",
        from_checks(vec![verify::step_tables(), verify::phi_permutation_minimum(150)]),
    );
}

/// The recurrence characteristic polynomial: dominant zero modulus e^{C1},
/// complex pair modulus e^{−C0}, and exact Vieta identities.
#[test]
fn criterion_6_characteristic_polynomial() {
    report(6, "characteristic polynomial", from_check(verify::characteristic_polynomial()));
}

/// Contour quadrature reproduces q_n·ζ(2) − p_n within 1e−10·max(1, |q_n|)
/// for every preset at n = 1..=6, and the two beta-integral identities
/// (alternating 1/(ℓ+1) and tail-of-ζ(2)) hold to 1e−10 for indices ≤ 10.
#[test]
fn criterion_7_oracle_equivalence() {
    let outcome = (|| -> Outcome {
        let z = zeta2(300).map_err(|e| e.to_string())?.to_rat();
        let tol_unit = rat(1, 10_000_000_000);
        for n in 1..=6 {
            for fam in [&PEX, &REM3] {
                let p = fam.params(n).map_err(|e| e.to_string())?;
                let form = p.linear_form().map_err(|e| e.to_string())?;
                let spec = QuadratureSpec::tale_one_default(&p).with_digits(60);
                let quad = contour_quad1(&p, &spec).map_err(|e| e.to_string())?;
                let diff = (quad.value.to_rat() - form.residual(&z)).abs();
                let tol = &tol_unit * Rat::from_integer(form.q.abs().max(int(1)));
                if diff > tol {
                    return Err(format!("{} n = {n}: |quad − exact| = {diff}", fam.name));
                }
            }
            let p2 = that(n).map_err(|e| e.to_string())?;
            let form = p2.linear_form().map_err(|e| e.to_string())?;
            let spec = QuadratureSpec::tale_two_default(&p2).with_digits(60);
            let quad = contour_quad2(&p2, &spec).map_err(|e| e.to_string())?;
            let diff = (quad.value.to_rat() - form.residual(&z)).abs();
            let tol = &tol_unit * Rat::from_integer(form.q.abs().max(int(1)));
            if diff > tol {
                return Err(format!("hat preset n = {n}: |quad − exact| = {diff}"));
            }
        }
        let tol = rat(1, 10_000_000_000);
        for ell in 0..=10 {
            let got = barnes_lemma1_check(ell, 20).map_err(|e| e.to_string())?.value.to_rat();
            let sign = if ell % 2 == 0 { 1 } else { -1 };
            if (got - rat(sign, ell + 1)).abs() > tol {
                return Err(format!("alternating beta integral off at ℓ = {ell}"));
            }
        }
        for k in 0..=10 {
            let got = zeta_tail_integral(k, 20).map_err(|e| e.to_string())?.value.to_rat();
            let expect = &z - &harmonic_power_sum(k, 2).map_err(|e| e.to_string())?;
            if (got - expect).abs() > tol {
                return Err(format!("ζ(2)-tail integral off at k = {k}"));
            }
        }
        Ok("quadrature matches exact forms (3 presets, n ≤ 6); both lemma integrals hold".into())
    })();
    report(7, "numeric oracle equivalence", outcome);
}

fn random_params1(rng: &mut ChaCha8Rng) -> Params {
    loop {
        let b123: [i64; 3] =
            [rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2)];
        let lo = *b123.iter().max().unwrap();
        let a: [i64; 4] = [
            rng.gen_range(lo.max(1)..=lo + 3),
            rng.gen_range(lo.max(1)..=lo + 3),
            rng.gen_range(lo.max(1)..=lo + 3),
            rng.gen_range(lo.max(1)..=lo + 3),
        ];
        let hi = *a.iter().max().unwrap();
        let b4_max = a.iter().sum::<i64>() - b123.iter().sum::<i64>();
        if b4_max < hi + 1 {
            continue;
        }
        let b4 = rng.gen_range(hi + 1..=b4_max);
        if let Ok(p) = Params::new(a, [b123[0], b123[1], b123[2], b4]) {
            return p;
        }
    }
}

fn random_params2(rng: &mut ChaCha8Rng) -> Params2 {
    loop {
        let b0 = rng.gen_range(0..=2);
        let b1 = rng.gen_range(0..=1);
        let lo: i64 = b0.max(2 * b1);
        let half = (lo + 1) / 2;
        let a = [
            rng.gen_range(lo..=lo + 4),
            rng.gen_range(half..=half + 2),
            rng.gen_range(half..=half + 2),
            rng.gen_range(half..=half + 2),
        ];
        let mid = a[0].max(2 * a[1]).max(2 * a[2]).max(2 * a[3]);
        let b2 = rng.gen_range(mid / 2 + 1..=mid / 2 + 4);
        let b3 = a.iter().sum::<i64>() + 2 - b0 - b1 - b2;
        if let Ok(p) = Params2::new(a, [b0, b1, b2, b3]) {
            return p;
        }
    }
}

fn floor_log(p: u64, x: i64) -> i64 {
    let mut c = 0;
    let mut v = p as i64;
    while v <= x {
        v *= p as i64;
        c += 1;
    }
    c
}

/// Randomized structural properties under a fixed seed: integer-valuedness
/// certificates, pole-coefficient balance and p-adic lower bounds on
/// random second-construction instances, permutation invariance on random
/// (parameters, order) pairs, and the hat preset's own inclusions to n = 30.
#[test]
fn criterion_8_randomized_properties() {
    let outcome = (|| -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2);
        for i in 0..50 {
            let blocks = rng.gen_range(1..=3);
            let spec: Vec<(i64, i64)> = (0..blocks)
                .map(|_| {
                    let b = rng.gen_range(-4..=4);
                    (rng.gen_range(b..=b + 6), b)
                })
                .collect();
            let k = rng.gen_range(-5..=10);
            let mut ell = rng.gen_range(-5..=10);
            if ell == k {
                ell += 1;
            }
            iv_certificate(&spec, k, ell)
                .map_err(|e| format!("certificate {i} on {spec:?}, k = {k}, ℓ = {ell}: {e}"))?;
        }
        for i in 0..8 {
            let p = random_params2(&mut rng);
            let (ka, aks) = p.double_pole_coeffs();
            let (kb, bks) = p.simple_pole_coeffs().map_err(|e| e.to_string())?;
            let sum: Rat = bks.iter().sum();
            if !num_traits::Zero::is_zero(&sum) {
                return Err(format!("instance {i} {p}: Σ B_k = {sum} ≠ 0"));
            }
            let span = 2 * p.b_tail_sorted()[1];
            for prime in [3u64, 5, 7, 11, 13] {
                for (j, a) in aks.iter().enumerate() {
                    let k = ka + j as i64;
                    let ord = padic_ord_int(a, prime).map_err(|e| e.to_string())?;
                    if !ord.at_least(p.padic_bound(k, prime)) {
                        return Err(format!("instance {i} {p}: ord_{prime}(A_{k}) too small"));
                    }
                }
                for (j, b) in bks.iter().enumerate() {
                    let k = kb + j as i64;
                    let bound = p.padic_bound(k, prime) - 1 - floor_log(prime, span);
                    let ord = padic_ord(b, prime).map_err(|e| e.to_string())?;
                    if !ord.at_least(bound) {
                        return Err(format!("instance {i} {p}: ord_{prime}(B_{k}) too small"));
                    }
                }
            }
        }
        for i in 0..20 {
            let p = random_params1(&mut rng);
            let mut order = [0usize, 1, 2, 3];
            order.shuffle(&mut rng);
            if !permutation_check(&p, &order).map_err(|e| e.to_string())? {
                return Err(format!("permutation case {i}: order {order:?} changed the form"));
            }
        }
        from_check(verify::hat_padic_orders(30))?;
        Ok("50 certificates, 8 pole-coefficient instances, 20 permutations, hat n ≤ 30".into())
    })();
    report(8, "randomized property suites", outcome);
}

/// Asymptotics from the forms themselves: the least-squares slope of
/// ln|q_n| over n = 20..=100 is within 5% of C1, and the slope of
/// ln|q_n·ζ(2) − p_n| is within 10% of −C0.
#[test]
fn criterion_9_growth_fits() {
    let outcome = (|| -> Outcome {
        const C0: f64 = 15.88518998;
        const C1: f64 = 23.22906071;
        // ζ(2) to 9000 bits: at n = 100 the form is ~e^{−1589} while
        // |q| ~ e^{2323}, so the reference value must carry more than
        // (2323 + 1589)/ln 2 ≈ 5644 bits to leave the residual visible.
        let bits = 9000;
        let pi = hp::pi(bits);
        let z = (&pi * &pi).to_rat() * rat(1, 6);
        let mut qs = Vec::new();
        let mut rs = Vec::new();
        for n in 1..=100 {
            let form = PEX.linear_form(n).map_err(|e| e.to_string())?;
            qs.push(Rat::from_integer(form.q.clone()));
            rs.push(form.residual(&z));
        }
        let slope_q = growth_fit(&qs, 20).map_err(|e| e.to_string())?;
        if (slope_q - C1).abs() > 0.05 * C1 {
            return Err(format!("ln|q| slope {slope_q:.6} not within 5% of {C1}"));
        }
        let slope_r = growth_fit(&rs, 20).map_err(|e| e.to_string())?;
        if (slope_r + C0).abs() > 0.10 * C0 {
            return Err(format!("ln|r| slope {slope_r:.6} not within 10% of −{C0}"));
        }
        Ok(format!("slopes {slope_q:.4} ≈ C1 and {slope_r:.4} ≈ −C0"))
    })();
    report(9, "growth-rate fits", outcome);
}

// keep the randomized generators honest: they must terminate and produce
// valid parameters for the fixed seed used above
#[test]
fn random_generators_terminate() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2);
    for _ in 0..100 {
        let p1 = random_params1(&mut rng);
        assert!(p1.d() >= 0);
        let p2 = random_params2(&mut rng);
        assert_eq!(p2.a().iter().sum::<i64>(), p2.b().iter().sum::<i64>() - 2);
    }
}

// the factorial helper used in the prefactor guards stays exact
#[test]
fn prefactor_guard_identity() {
    let n = 3i64;
    let lhs = Rat::new(factorial(6 * n), factorial(7 * n) * factorial(5 * n) * factorial(3 * n));
    assert_eq!(PEX.params(n).unwrap().prefactor(), lhs);
}
