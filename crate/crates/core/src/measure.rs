//! Growth rates of the linear forms and the irrationality-measure pipeline.
//!
//! The sequences q_n and r_n = q_n·ζ(2) − p_n grow geometrically; the rates
//! are read off a saddle-point analysis whose only inputs are the family
//! slopes. Writing the cubic ∏(τ−αj) − ∏(τ−βj) = 0 with one real zero τ1
//! and a conjugate pair τ0, τ̄0,
//!
//! ```text
//! lim log|q_n|/n = f0(τ1) = C1,   limsup log|r_n|/n = Re f0(τ0) = −C0,
//! ```
//!
//! while the denominator cost is C2 = γ1 + γ2 − lim log Φ_n/n, the last
//! limit being a closed-form digamma sum over the step-function pieces.
//! An application of the standard criterion then bounds the irrationality
//! measure: μ(ζ(2)) ≤ (C0 + C1)/(C0 − C2).

use crate::error::{Error, Result};
use crate::exact::{int, rat, Int, Rat};
use crate::hp::{digamma_rat, ln, Cx, Hp};
use crate::sieve::{phi_perm, phi_tilde, step_table, SieveSpec, StepFn};
use crate::tale_one::Family;
use num_traits::{Signed, Zero};

/// Guard bits carried through root-finding and logarithm evaluation.
const GUARD: u32 = 32;

/// Coefficients, descending, of ∏_{j=1..4}(τ−αj) − ∏_{j=1..4}(τ−βj).
/// The quartic terms cancel, so the result is (at most) a cubic; equal
/// slope multisets give the zero polynomial.
pub fn growth_cubic(f: &Family) -> [Int; 4] {
    fn elem_sym(x: &[i64; 4]) -> [i64; 4] {
        // e1..e4 by expanding ∏(τ + x_j) coefficient by coefficient.
        let mut e = [0i64; 5];
        e[0] = 1;
        for (k, xj) in x.iter().enumerate() {
            for i in (1..=k + 1).rev() {
                e[i] += xj * e[i - 1];
            }
        }
        [e[1], e[2], e[3], e[4]]
    }
    let ea = elem_sym(&f.alpha);
    let eb = elem_sym(&f.beta);
    // ∏(τ−xj) = τ⁴ − e1τ³ + e2τ² − e3τ + e4.
    [
        int(-(ea[0] - eb[0])),
        int(ea[1] - eb[1]),
        int(-(ea[2] - eb[2])),
        int(ea[3] - eb[3]),
    ]
}

fn horner_hp(coeffs: &[Int], x: &Hp) -> Hp {
    let bits = x.bits();
    let mut acc = Hp::from_int(&coeffs[0], bits);
    for c in &coeffs[1..] {
        acc = &(&acc * x) + &Hp::from_int(c, bits);
    }
    acc
}

fn horner_cx(coeffs: &[Int], z: &Cx) -> Cx {
    let bits = z.re.bits();
    let mut acc = Cx::new(Hp::from_int(&coeffs[0], bits), Hp::zero(bits));
    for c in &coeffs[1..] {
        acc = acc.mul(z);
        acc.re = &acc.re + &Hp::from_int(c, bits);
    }
    acc
}

fn horner_rat(coeffs: &[Int], x: &Rat) -> Rat {
    let mut acc = Rat::from_integer(coeffs[0].clone());
    for c in &coeffs[1..] {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

/// The real zero and one member of the complex-conjugate pair of an
/// integer cubic, each accurate to the full requested precision (well
/// beyond 30 significant digits at 128 bits and up). The root layout is
/// decided exactly first, via the sign of the discriminant; three real
/// zeroes violate the growth hypothesis and are rejected.
pub fn solve_growth(cubic: &[Int; 4], bits: u32) -> Result<(Hp, Cx)> {
    if cubic[0].is_zero() {
        let degree = match cubic.iter().position(|c| !c.is_zero()) {
            Some(i) => format!("degree {}", 3 - i),
            None => "the zero polynomial".to_string(),
        };
        return Err(Error::Degenerate(format!(
            "growth polynomial must be a true cubic, got {degree}"
        )));
    }
    let (a, b, c, d) = (&cubic[0], &cubic[1], &cubic[2], &cubic[3]);
    let disc = int(18) * a * b * c * d - int(4) * b * b * b * d + b * b * c * c
        - int(4) * a * c * c * c
        - int(27) * a * a * d * d;
    if !disc.is_negative() {
        return Err(Error::Hypothesis(format!(
            "cubic discriminant is {disc} ≥ 0, so all three zeroes are real; \
             the one-real-plus-conjugate-pair growth hypothesis fails"
        )));
    }

    // Work with a positive leading coefficient; the roots do not move.
    let pos: Vec<Int> = if cubic[0].is_negative() {
        cubic.iter().map(|v| -v).collect()
    } else {
        cubic.to_vec()
    };
    let deriv = [int(3) * &pos[0], int(2) * &pos[1], pos[2].clone()];
    let wb = bits + GUARD;

    // Cauchy bound: every root has |τ| < 1 + max|c_i|/|c_3|.
    let maxc = pos[1].abs().max(pos[2].abs()).max(pos[3].abs());
    let bound = Hp::from_rat_parts(&(&maxc + &pos[0]), &pos[0], wb) + &Hp::one(wb);
    let mut lo = -&bound;
    let mut hi = bound;
    // p(lo) < 0 < p(hi) since the leading coefficient is positive and the
    // single real root lies between; bisect to half precision.
    for _ in 0..(wb / 2 + 64) {
        let mid = (&lo + &hi).mul2k(-1);
        if horner_hp(&pos, &mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton to full precision (quadratic convergence from here).
    let mut tau1 = (&lo + &hi).mul2k(-1);
    for _ in 0..12 {
        let dp = horner_hp(&deriv, &tau1);
        if dp.is_zero() {
            return Err(Error::Internal("vanishing derivative while polishing the real zero".into()));
        }
        tau1 = &tau1 - &(&horner_hp(&pos, &tau1) / &dp);
    }

    // Deflate: p/(τ−τ1) = aτ² + b'τ + c', then close the conjugate pair.
    let ah = Hp::from_int(&pos[0], wb);
    let bp = &Hp::from_int(&pos[1], wb) + &(&ah * &tau1);
    let cp = &Hp::from_int(&pos[2], wb) + &(&bp * &tau1);
    let disc2 = &(&bp * &bp) - &(&(&ah * &cp).mul2k(2));
    if !disc2.is_negative() {
        return Err(Error::Internal(
            "deflated quadratic has real zeroes despite a negative discriminant".into(),
        ));
    }
    let two_a = ah.mul2k(1);
    let re = &(-&bp) / &two_a;
    let im = &(-&disc2).sqrt()? / &two_a;
    let mut tau0 = Cx::new(re, im);
    for _ in 0..8 {
        let dp = horner_cx(&deriv, &tau0);
        tau0 = tau0.sub(&horner_cx(&pos, &tau0).div(&dp));
    }

    // Self-check: residuals must be far below 10⁻²⁵·max|coefficient|.
    let thr = Hp::from_rat_parts(&maxc, &int(10).pow(25), wb);
    let r1 = horner_hp(&pos, &tau1).abs();
    let r0 = horner_cx(&pos, &tau0).abs2().sqrt()?;
    if r1.cmp_val(&thr) != std::cmp::Ordering::Less || r0.cmp_val(&thr) != std::cmp::Ordering::Less
    {
        return Err(Error::Internal(format!(
            "root residuals {} and {} exceed the 10⁻²⁵·‖cubic‖ gate",
            r1.to_decimal_string(3),
            r0.to_decimal_string(3)
        )));
    }
    let tau0 = if tau0.im.is_negative() { tau0.conj() } else { tau0 };
    Ok((tau1.with_bits(bits), Cx::new(tau0.re.with_bits(bits), tau0.im.with_bits(bits))))
}

/// x·ln(x) extended by 0 at x = 0 (slope differences of a valid family are
/// nonnegative integers).
fn xlnx_int(x: i64, bits: u32) -> Result<Hp> {
    if x == 0 {
        return Ok(Hp::zero(bits));
    }
    Ok(&Hp::from_i64(x, bits) * &ln(&Hp::from_i64(x.abs(), bits))?)
}

/// The slope-only constant part of f0:
/// −Σ_{j≤3} (αj−βj)·log(αj−βj) + (β4−α4)·log(β4−α4).
fn f0_constant(f: &Family, bits: u32) -> Result<Hp> {
    let mut acc = Hp::zero(bits);
    for j in 0..3 {
        acc = &acc - &xlnx_int(f.alpha[j] - f.beta[j], bits)?;
    }
    Ok(&acc + &xlnx_int(f.beta[3] - f.alpha[3], bits)?)
}

/// f0 at a real point, all logarithms of absolute values.
fn f0_real(f: &Family, tau: &Hp) -> Result<Hp> {
    let bits = tau.bits();
    let mut acc = f0_constant(f, bits)?;
    for j in 0..4 {
        for (s, sign) in [(f.alpha[j], 1), (f.beta[j], -1)] {
            let diff = (tau - &Hp::from_i64(s, bits)).abs();
            if diff.is_zero() {
                return Err(Error::Singularity(format!(
                    "growth exponent evaluated at the parameter point τ = {s}"
                )));
            }
            let term = &Hp::from_i64(sign * s, bits) * &ln(&diff)?;
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

/// Re f0 at a complex point; the real part only sees log|τ−s|, so the
/// branch choice is immaterial.
fn f0_re_complex(f: &Family, tau: &Cx) -> Result<Hp> {
    let bits = tau.re.bits();
    let mut acc = f0_constant(f, bits)?;
    for j in 0..4 {
        for (s, sign) in [(f.alpha[j], 1), (f.beta[j], -1)] {
            let z =ioffset(tau, s);
            let a2 = z.abs2();
            if a2.is_zero() {
                return Err(Error::Singularity(format!(
                    "growth exponent evaluated at the parameter point τ = {s}"
                )));
            }
            // log|z| = log(|z|²)/2.
            let term = &Hp::from_i64(sign * s, bits) * &ln(&a2)?.mul2k(-1);
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

fn ioffset(z: &Cx, s: i64) -> Cx {
    Cx::new(&z.re - &Hp::from_i64(s, z.re.bits()), z.im.clone())
}

/// Saddle-point growth data of one family: the cubic, its zeroes, and the
/// two exponents C0 = −Re f0(τ0) (decay rate of the forms) and
/// C1 = f0(τ1) (growth rate of the coefficients).
#[derive(Debug, Clone)]
pub struct GrowthConstants {
    pub cubic: [Int; 4],
    pub tau1: Hp,
    pub tau0: Cx,
    pub c0: Hp,
    pub c1: Hp,
}

pub fn growth_constants(f: &Family, bits: u32) -> Result<GrowthConstants> {
    let cubic = growth_cubic(f);
    // Exact screen: an integer parameter that is a zero of the cubic would
    // put τ1 on a logarithmic singularity of f0.
    for s in f.alpha.iter().chain(f.beta.iter()) {
        if horner_rat(&cubic, &rat(*s, 1)).is_zero() {
            return Err(Error::Singularity(format!(
                "the slope point {s} is a zero of the growth cubic"
            )));
        }
    }
    let wb = bits + GUARD;
    let (tau1, tau0) = solve_growth(&cubic, wb)?;
    let c1 = f0_real(f, &tau1)?;
    let c0 = -&f0_re_complex(f, &tau0)?;
    Ok(GrowthConstants {
        cubic,
        tau1: tau1.with_bits(bits),
        tau0: Cx::new(tau0.re.with_bits(bits), tau0.im.with_bits(bits)),
        c0: c0.with_bits(bits),
        c1: c1.with_bits(bits),
    })
}

/// lim log Φ_n/n for the correction built from the step function φ:
///
/// ```text
/// ∫₀¹ φ dψ − ∫₀^{1/γ2} φ(x) dx/x²
/// ```
///
/// with ψ the digamma function. Both integrals collapse to finite sums
/// over the constancy pieces; the second one is exactly rational. φ must
/// vanish on a neighborhood of 0 or the second integral diverges.
pub fn phi_limit(phi: &StepFn, gamma2: i64, bits: u32) -> Result<Hp> {
    if gamma2 < 1 {
        return Err(Error::Domain(format!("γ2 must be ≥ 1, got {gamma2}")));
    }
    let pieces = phi.pieces();
    if pieces[0].2 != 0 {
        return Err(Error::Domain(
            "step function must vanish in a neighborhood of 0: ∫ φ(x)/x² dx diverges".into(),
        ));
    }
    let wb = bits + GUARD;
    let mut acc = Hp::zero(wb);
    let mut correction = Rat::zero();
    let cut = rat(1, gamma2);
    for (lo, hi, v) in &pieces {
        if *v == 0 {
            continue;
        }
        let dpsi = &digamma_rat(hi, wb)? - &digamma_rat(lo, wb)?;
        acc = &acc + &(&dpsi * &Hp::from_i64(*v, wb));
        if *lo < cut {
            let h = if *hi < cut { hi.clone() } else { cut.clone() };
            correction += rat(*v, 1) * (lo.recip() - h.recip());
        }
    }
    Ok((&acc - &Hp::from_rat(&correction, wb)).with_bits(bits))
}

/// C2 = γ1 + γ2 − lim log Φ_n/n: the per-index cost of clearing all
/// denominators after the prime-power correction.
pub fn c2_constant(gamma1: i64, gamma2: i64, phi_lim: &Hp) -> Hp {
    &Hp::from_i64(gamma1 + gamma2, phi_lim.bits()) - phi_lim
}

/// The measure bound (C0 + C1)/(C0 − C2). Requires C0 > C2: otherwise the
/// approximations shrink too slowly to say anything.
pub fn hata_mu(c0: &Hp, c1: &Hp, c2: &Hp) -> Result<Hp> {
    if c0.cmp_val(c2) != std::cmp::Ordering::Greater {
        return Err(Error::Unavailable(
            "no irrationality measure derivable: C0 ≤ C2".into(),
        ));
    }
    Ok(&(c0 + c1) / &(c0 - c2))
}

/// Cross-check of the growth constants against the recurrence the main
/// family's forms satisfy: the characteristic polynomial's dominant zero
/// must have log-modulus C1 and the conjugate pair log-modulus −C0.
#[derive(Debug, Clone)]
pub struct CharpolyReport {
    pub lambda_real: Hp,
    pub lambda_complex: Cx,
    /// ln|λ_real| (the dominant zero).
    pub log_max: Hp,
    /// ln|λ_complex|.
    pub log_complex: Hp,
    /// |ln|λ_max| − C1| < 10⁻⁶.
    pub matches_c1: bool,
    /// |ln|λ_complex| + C0| < 10⁻⁶.
    pub matches_c0: bool,
    /// −coeff₂/coeff₃ as an exact fraction.
    pub vieta_sum: Rat,
    /// −coeff₀/coeff₃ as an exact fraction.
    pub vieta_product: Rat,
    /// vieta_product = −2⁴⁶/(3¹²·7¹⁴) exactly.
    pub product_closed_form: bool,
    /// Numeric zeroes reproduce both Vieta values to 10⁻⁹ relative.
    pub roots_match_vieta: bool,
}

/// The recurrence's characteristic polynomial, transcribed coefficient by
/// coefficient: 2²·3¹²·7¹⁴λ³ + 3³·7⁷·794493690983053821271·λ²
/// − 2²⁰·3⁴·7⁵·2687491277·λ + 2⁴⁸.
pub fn charpoly() -> [Int; 4] {
    [
        int(4) * int(3).pow(12) * int(7).pow(14),
        int(27) * int(7).pow(7) * Int::from(794_493_690_983_053_821_271i128),
        -(int(2).pow(20) * int(81) * int(7).pow(5) * int(2_687_491_277)),
        int(2).pow(48),
    ]
}

pub fn charpoly_consistency(bits: u32) -> Result<CharpolyReport> {
    let wb = bits + GUARD;
    let coeffs = charpoly();
    let (l_real, l_cx) = solve_growth(&coeffs, wb)?;
    let g = growth_constants(&crate::tale_one::PEX, wb)?;

    let log_max = ln(&l_real.abs())?;
    let log_complex = ln(&l_cx.abs2())?.mul2k(-1);
    let tol = Hp::from_rat(&rat(1, 1_000_000), wb);
    let matches_c1 = (&log_max - &g.c1).abs().cmp_val(&tol) == std::cmp::Ordering::Less;
    let matches_c0 = (&log_complex + &g.c0).abs().cmp_val(&tol) == std::cmp::Ordering::Less;

    let lead = Rat::from_integer(coeffs[0].clone());
    let vieta_sum = Rat::from_integer(-&coeffs[1]) / &lead;
    let vieta_product = Rat::from_integer(-&coeffs[3]) / &lead;
    let closed = -Rat::new(int(2).pow(46), int(3).pow(12) * int(7).pow(14));
    let product_closed_form = vieta_product == closed;

    // λ_real + 2·Re λ_c and λ_real·|λ_c|², against the exact targets.
    let sum_num = &l_real + &l_cx.re.mul2k(1);
    let prod_num = &l_real * &l_cx.abs2();
    let rel = |x: &Hp, target: &Rat| -> bool {
        let t = Hp::from_rat(target, wb);
        let err = &(x - &t).abs() / &t.abs();
        err.cmp_val(&Hp::from_rat(&rat(1, 1_000_000_000), wb)) == std::cmp::Ordering::Less
    };
    let roots_match_vieta = rel(&sum_num, &vieta_sum) && rel(&prod_num, &vieta_product);

    Ok(CharpolyReport {
        lambda_real: l_real.with_bits(bits),
        lambda_complex: Cx::new(l_cx.re.with_bits(bits), l_cx.im.with_bits(bits)),
        log_max: log_max.with_bits(bits),
        log_complex: log_complex.with_bits(bits),
        matches_c1,
        matches_c0,
        vieta_sum,
        vieta_product,
        product_closed_form,
        roots_match_vieta,
    })
}

/// End-to-end constants for one family: growth exponents, denominator
/// cost after the chosen correction, and the measure bound.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub preset: &'static str,
    /// Whether C2 uses the combined two-construction correction.
    pub corrected: bool,
    pub c0: Hp,
    pub c1: Hp,
    pub c2: Hp,
    pub phi_limit: Hp,
    pub mu: Hp,
}

pub fn measure_pipeline(f: &Family, corrected: bool, bits: u32) -> Result<MeasureReport> {
    let g = growth_constants(f, bits)?;
    let spec = SieveSpec::for_family(f);
    let table = if corrected {
        if f.name != "pex" {
            return Err(Error::Domain(format!(
                "the combined correction is established for the main family only, not {}",
                f.name
            )));
        }
        step_table(phi_tilde, 126)?
    } else {
        step_table(|x| phi_perm(f, x), 126)?
    };
    let lim = phi_limit(&table, spec.gamma2(), bits)?;
    let c2 = c2_constant(spec.gamma1(), spec.gamma2(), &lim);
    let mu = hata_mu(&g.c0, &g.c1, &c2)?;
    Ok(MeasureReport {
        preset: f.name,
        corrected,
        c0: g.c0,
        c1: g.c1,
        c2,
        phi_limit: lim,
        mu,
    })
}
