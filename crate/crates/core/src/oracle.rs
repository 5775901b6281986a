//! High-precision numerical cross-checks of the exact constructions.
//!
//! Everything in this module recomputes, by quadrature or series summation,
//! quantities that the exact modules assemble arithmetically, so agreement
//! is a strong end-to-end test of both sides. The main tool is the vertical
//! line integral (1/2πi)∫ K(t)·F(t) dt with kernel K either (π/sin πt)² or
//! π/sin 2πt. Substituting t = c + iy folds the line onto [0, ∞):
//!
//!   (1/2πi)∫_{c−i∞}^{c+i∞} K·F dt = (1/π)·∫_0^∞ Re[K(c+iy)·F(c+iy)] dy,
//!
//! because the integrand at −y is the conjugate of the one at +y. The
//! folded integrand is even and analytic around the real axis, so the plain
//! trapezoid rule converges geometrically in the step size; the driver
//! halves the step until two refinements agree and reports the last
//! difference as the error estimate. Both kernels decay like e^(−2πy),
//! which dominates any polynomial growth of F and bounds the truncation
//! height. The integrand can peak thousands of bits above the value of the
//! integral (the small linear forms arise from cancellation), so the
//! working precision is chosen after probing the integrand's magnitude.
//!
//! The series oracles sum residues directly: over half-integers against the
//! π/sin 2πt kernel (alternating, with acceleration), and over integers
//! against the squared kernel (convergent only for decaying F, with an
//! Euler–Maclaurin tail). Error estimates everywhere are empirical
//! differences between refinements, not certified enclosures.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int, rat, Int, Rat};
use crate::factors::FactorList;
use crate::hp::{self, Cx, Hp};
use crate::tale_one::Params;
use crate::tale_two::{that, Params2};
use num_traits::{One, Signed, Zero};

/// Hard precision ceiling, in decimal digits.
pub const MAX_DIGITS: u32 = 1000;

/// Fixed-point scale covering `digits` decimal digits plus guard room.
fn bits_for(digits: u32) -> u32 {
    digits * 10 / 3 + 32
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Error::Domain(format!(
            "requested {digits} digits; supported range is 1..={MAX_DIGITS}"
        )));
    }
    Ok(())
}

/// ζ(2) = π²/6 to the requested number of decimal digits.
pub fn zeta2(digits: u32) -> Result<Hp> {
    check_digits(digits)?;
    let wb = bits_for(digits) + 32;
    let p = hp::pi(wb);
    Ok((&(&p * &p) / &Hp::from_i64(6, wb)).with_bits(bits_for(digits)))
}

/// Contour placement and precision request for the line integrals.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// The integration line is Re t = abscissa.
    pub abscissa: Rat,
    /// Target absolute accuracy, as decimal digits.
    pub digits: u32,
}

impl QuadratureSpec {
    /// Default line Re t = 1/2 − a2* for the first construction; always
    /// strictly inside the pole-free strip (−a2*, 1 − b2*) and at maximal
    /// distance 1/2 from the kernel's pole lattice.
    pub fn tale_one_default(p: &Params) -> Self {
        QuadratureSpec { abscissa: rat(1 - 2 * p.a_star()[1], 2), digits: 50 }
    }

    /// Default line Re t = (1 − 2·â0*)/4 for the second construction; sits
    /// a quarter step inside the left edge of the strip (−â0*/2, (1−b̂0)/2)
    /// and is admissible for every valid parameter set.
    pub fn tale_two_default(p: &Params2) -> Self {
        QuadratureSpec { abscissa: rat(1 - 2 * p.a0_star(), 4), digits: 50 }
    }

    pub fn with_digits(mut self, digits: u32) -> Self {
        self.digits = digits;
        self
    }
}

/// A numeric result together with its empirical quality data.
#[derive(Debug, Clone)]
pub struct OracleValue {
    pub value: Hp,
    /// Empirical absolute error estimate (refinement difference plus
    /// truncation allowance); not a certified bound.
    pub error: Hp,
    /// Integrand evaluations or series terms consumed.
    pub nodes: usize,
    /// Largest |Im t| (or series abscissa) actually visited.
    pub height: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kernel {
    /// (π/sin πt)², double poles at the integers.
    SquaredCosec,
    /// π/sin 2πt, simple poles at the half-integers.
    DoubledCosec,
}

/// Folded integrand Re[K(c+iy)·F(c+iy)] with precomputed line data.
struct LineIntegrand<'a> {
    rf: &'a FactorList,
    kernel: Kernel,
    /// sin/cos of πc (squared kernel) or 2πc (doubled kernel).
    sin_c: Hp,
    cos_c: Hp,
    c_hp: Hp,
    pi: Hp,
    pi_sq: Hp,
    wb: u32,
}

impl<'a> LineIntegrand<'a> {
    fn new(rf: &'a FactorList, kernel: Kernel, c: &Rat, wb: u32) -> LineIntegrand<'a> {
        let (sin_c, cos_c) = match kernel {
            Kernel::SquaredCosec => hp::sin_cos_pi_rat(c, wb),
            Kernel::DoubledCosec => hp::sin_cos_pi_rat(&(c * rat(2, 1)), wb),
        };
        let pi = hp::pi(wb);
        let pi_sq = &pi * &pi;
        LineIntegrand { rf, kernel, sin_c, cos_c, c_hp: Hp::from_rat(c, wb), pi, pi_sq, wb }
    }

    /// e^{πy} for the squared kernel, e^{2πy} for the doubled one: the
    /// exponential whose powers the driver maintains.
    fn exp_arg(&self) -> Hp {
        match self.kernel {
            Kernel::SquaredCosec => self.pi.clone(),
            Kernel::DoubledCosec => self.pi.mul2k(1),
        }
    }

    /// Integrand value at height y, given ep = e^{arg·y} and its inverse.
    ///
    /// sin(θ(c+iy)) = sin θc·cosh θy + i·cos θc·sinh θy for θ = π or 2π.
    fn g(&self, y: &Hp, ep: &Hp, epi: &Hp) -> Hp {
        let ch = (ep + epi).mul2k(-1);
        let sh = (ep - epi).mul2k(-1);
        let z = Cx::new(&self.sin_c * &ch, &self.cos_c * &sh);
        let k = match self.kernel {
            Kernel::SquaredCosec => {
                Cx::new(self.pi_sq.clone(), Hp::zero(self.wb)).div(&z.square())
            }
            Kernel::DoubledCosec => Cx::new(self.pi.clone(), Hp::zero(self.wb)).div(&z),
        };
        let t = Cx::new(self.c_hp.clone(), y.clone());
        k.mul(&self.rf.eval_cx(&t)).re
    }
}

/// base^m by binary powering; log-many multiplications keep the rounding
/// drift independent of the node index.
fn powi(base: &Hp, mut m: u64) -> Hp {
    let mut acc = Hp::one(base.bits());
    let mut sq = base.clone();
    while m > 0 {
        if m & 1 == 1 {
            acc = &acc * &sq;
        }
        m >>= 1;
        if m > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Extra mantissa room needed for the integrand's dynamic range, measured
/// by probing |g| at a few heights spread across the decay scale. The
/// integral is exponentially smaller than the integrand's peak, so this
/// margin is what the final cancellation eats.
fn probe_magnitude(rf: &FactorList, kernel: Kernel, c: &Rat, deg: i64) -> u32 {
    let wb0: u32 = 192;
    let ig = LineIntegrand::new(rf, kernel, c, wb0);
    let arg = ig.exp_arg();
    let d = deg.max(0) as u64;
    // heights in quarter units: fixed small ones plus the polynomial scale
    let mut quarters: Vec<u64> = vec![1, 4, 16, d / 2, (2 * d) / 3, d, 2 * d];
    quarters.sort_unstable();
    quarters.dedup();
    let mut mag: i64 = 0;
    for q in quarters {
        if q == 0 {
            continue;
        }
        let y = Hp::from_i64(q as i64, wb0).mul2k(-2);
        let ep = hp::exp(&(&arg * &y));
        let epi = &Hp::one(wb0) / &ep;
        let g = ig.g(&y, &ep, &epi);
        if !g.is_zero() {
            mag = mag.max(g.mant().bits() as i64 - wb0 as i64);
        }
    }
    mag.clamp(0, 1 << 22) as u32
}

const MAX_LEVELS: u32 = 12;
const MAX_NODES: usize = 5_000_000;

/// (1/2πi)∫_{c−i∞}^{c+i∞} K(t)·F(t) dt by the folded trapezoid rule with
/// step halving. `c` must avoid the kernel's pole lattice; the caller is
/// responsible for strip admissibility.
fn vertical_line_integral(
    rf: &FactorList,
    kernel: Kernel,
    c: &Rat,
    digits: u32,
) -> Result<OracleValue> {
    check_digits(digits)?;
    let lattice_hit = match kernel {
        Kernel::SquaredCosec => c.is_integer(),
        Kernel::DoubledCosec => (c * rat(2, 1)).is_integer(),
    };
    if lattice_hit {
        return Err(Error::Domain(format!(
            "abscissa {c} lands on a kernel pole; the line must pass between them"
        )));
    }

    let deg = rf.degree();
    let target = bits_for(digits);
    let mag = probe_magnitude(rf, kernel, c, deg);
    let wb = target + 96 + mag;
    let ig = LineIntegrand::new(rf, kernel, c, wb);
    let arg = ig.exp_arg();

    // Exponential decay takes over once 2πy outruns the polynomial factor;
    // from the peak it still takes ~0.11 units of height per bit to fall
    // from 2^mag below the stop threshold.
    let y_floor = (deg.max(0) as f64) * 0.5 + 4.0;
    let y_cap = y_floor + 0.12 * ((target + mag) as f64 + 24.0) + 8.0;
    let eps_term = Hp::one(target + 32).mul2k(-((target + 24) as i64));
    let eps_conv = Hp::one(target + 32).mul2k(-((target + 6) as i64));

    let mut s_prev: Option<Hp> = None;
    let mut nodes = 0usize;
    let mut height = 0f64;
    for level in 0..=MAX_LEVELS {
        let h_log2 = -(3 + level as i64);
        let h = Hp::one(wb).mul2k(h_log2);
        let h_f = (h_log2 as f64).exp2();
        let e_base = hp::exp(&(&arg * &h));
        let e_inv = &Hp::one(wb) / &e_base;
        // a refinement adds only the odd nodes of the halved grid
        let (start, step) = if s_prev.is_none() { (0u64, 1u64) } else { (1, 2) };
        let mut sum = Hp::zero(wb);
        let mut tiny = 0u32;
        let mut m = start;
        loop {
            let y = &h * &Hp::from_i64(m as i64, wb);
            let ep = powi(&e_base, m);
            let epi = powi(&e_inv, m);
            let g = ig.g(&y, &ep, &epi);
            sum = if m == 0 { &sum + &g.mul2k(-1) } else { &sum + &g };
            nodes += 1;
            if nodes > MAX_NODES {
                return Err(Error::Resolution(format!(
                    "line integral used more than {MAX_NODES} nodes without settling"
                )));
            }
            let yf = m as f64 * h_f;
            if yf >= y_floor && g.abs().cmp_val(&eps_term) == Ordering::Less {
                tiny += 1;
                if tiny >= 3 {
                    height = height.max(yf);
                    break;
                }
            } else {
                tiny = 0;
            }
            if yf > y_cap {
                return Err(Error::Resolution(format!(
                    "integrand failed to decay below threshold by height {yf:.1}"
                )));
            }
            m += step;
        }
        let s_level = match &s_prev {
            None => &h * &sum,
            Some(sp) => &sp.mul2k(-1) + &(&h * &sum),
        };
        if let Some(sp) = &s_prev {
            let delta = (&s_level - sp).abs();
            if level >= 2 && delta.cmp_val(&eps_conv) != Ordering::Greater {
                let value = &s_level / &ig.pi;
                // refinement difference + truncation allowance + the ulp
                // lost when the value is rounded to its output scale
                let ulp_out = Hp::one(target + 32).mul2k(-((target + 16) as i64));
                let error = &(&(&delta + &eps_term.mul2k(8)) / &ig.pi) + &ulp_out;
                return Ok(OracleValue {
                    value: value.with_bits(target + 16),
                    error: error.abs().with_bits(target + 32),
                    nodes,
                    height,
                });
            }
        }
        s_prev = Some(s_level);
    }
    Err(Error::Resolution(format!(
        "trapezoid refinements did not stabilise within {MAX_LEVELS} halvings at {digits} digits"
    )))
}

fn apply_sign(mut v: OracleValue, d: i64) -> OracleValue {
    if d.rem_euclid(2) == 1 {
        v.value = -&v.value;
    }
    v
}

/// Numerical value of the first construction's quantity r = q·ζ(2) − p as
/// the line integral of (−1)^d·(π/sin πt)²·R(t)/(2πi).
///
/// The abscissa must lie strictly inside (−a2*, 1 − b2*), where the
/// integrand has no singularities, and off the integer lattice (inside the
/// strip the kernel's double poles are cancelled by double roots of R, but
/// kernel and R are evaluated separately here).
pub fn contour_quad1(p: &Params, spec: &QuadratureSpec) -> Result<OracleValue> {
    let mut bs = p.b();
    bs.sort_unstable();
    let lo = rat(-p.a_star()[1], 1);
    let hi = rat(1 - bs[1], 1);
    if spec.abscissa <= lo || spec.abscissa >= hi {
        return Err(Error::Domain(format!(
            "abscissa {} outside the admissible strip ({lo}, {hi})",
            spec.abscissa
        )));
    }
    let raw = vertical_line_integral(&p.rfun(), Kernel::SquaredCosec, &spec.abscissa, spec.digits)?;
    Ok(apply_sign(raw, p.d()))
}

/// Numerical value of the second construction's quantity r̂ = q̂·ζ(2) − p̂ as
/// the line integral of (−1)^d̂·(π/sin 2πt)·R̂(t)/(2πi).
///
/// The abscissa must lie strictly inside (−â0*/2, (1−b̂0)/2) and off the
/// half-integer lattice.
pub fn contour_quad2(p: &Params2, spec: &QuadratureSpec) -> Result<OracleValue> {
    let lo = rat(-p.a0_star(), 2);
    let hi = rat(1 - p.b()[0], 2);
    if spec.abscissa <= lo || spec.abscissa >= hi {
        return Err(Error::Domain(format!(
            "abscissa {} outside the admissible strip ({lo}, {hi})",
            spec.abscissa
        )));
    }
    let raw = vertical_line_integral(&p.rfun(), Kernel::DoubledCosec, &spec.abscissa, spec.digits)?;
    Ok(apply_sign(raw, p.d_hat()))
}

/// Quadrature of (π/sin πt)²·(t−1)···(t−ℓ)/ℓ! along Re t = 1/2.
///
/// By Barnes's first lemma this equals (−1)^ℓ/(ℓ+1); the returned value is
/// the raw quadrature so callers can measure the deviation themselves.
pub fn barnes_lemma1_check(ell: i64, digits: u32) -> Result<OracleValue> {
    if !(0..=30).contains(&ell) {
        return Err(Error::Domain(format!("basis degree {ell} outside 0..=30")));
    }
    let mut rf = FactorList::new(Rat::new(Int::one(), factorial(ell)));
    for j in 1..=ell {
        rf.push(-2 * j, 1);
    }
    vertical_line_integral(&rf, Kernel::SquaredCosec, &rat(1, 2), digits)
}

/// Quadrature of (π/sin πt)²/(t+k) along Re t = 1/2, which sums the tail
/// Σ_{m>k} 1/m² = ζ(2) − (1 + 1/4 + ... + 1/k²).
pub fn zeta_tail_integral(k: i64, digits: u32) -> Result<OracleValue> {
    if k < 0 {
        return Err(Error::Domain(format!("tail index {k} must be ≥ 0")));
    }
    let rf = FactorList::one().with_factor(k, -1);
    vertical_line_integral(&rf, Kernel::SquaredCosec, &rat(1, 2), digits)
}

/// Alternating-series acceleration (Cohen, Rodriguez Villegas, Zagier):
/// estimates Σ_{k≥0} (−1)^k·a_k from the first `n` terms, converging like
/// (3+√8)^{−n} when the terms are moments of a measure on [0, 1].
fn accelerated_alternating<F: FnMut(u64) -> Result<Rat>>(mut term: F, n: u64) -> Result<Rat> {
    if n == 0 {
        return Err(Error::Domain("acceleration needs at least one term".into()));
    }
    // d_n = ((3+√8)^n + (3−√8)^n)/2, integral via d_{k+1} = 6·d_k − d_{k−1}
    let mut d_prev = Int::one();
    let mut d_cur = int(3);
    for _ in 1..n {
        let next = int(6) * &d_cur - &d_prev;
        d_prev = d_cur;
        d_cur = next;
    }
    let d = Rat::from_integer(d_cur);
    let mut b = -Rat::one();
    let mut c = -d.clone();
    let mut s = Rat::zero();
    for k in 0..n {
        c = &b - &c;
        s += &c * &term(k)?;
        let ki = k as i64;
        let ni = n as i64;
        b *= Rat::new(int(2) * int(ki + ni) * int(ki - ni), int(2 * ki + 1) * int(ki + 1));
    }
    Ok(s / d)
}

/// Exact value of F at the half-integer m/2.
fn eval_half(rf: &FactorList, m: i64) -> Result<Rat> {
    rf.eval(&Rat::new(int(m), int(2)))
}

/// r̂ by direct residue summation over the half-integer poles of the
/// π/sin 2πt kernel: r̂ = −((−1)^d̂/2)·Σ_{m≥1−â0*} (−1)^m·R̂(m/2).
///
/// The irregular head (m ≤ 0, where the numerator roots sit) is summed
/// as-is; from m = 1 on every term is positive and decays like 1/m², and
/// the alternating tail is accelerated. The error estimate is the
/// difference between two acceleration orders, with one deepening retry
/// before the request is declared unresolvable.
pub fn half_integer_series(p: &Params2, tol: f64) -> Result<OracleValue> {
    if !tol.is_finite() || !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance {tol} outside (0, 1)")));
    }
    let rf = p.rfun();
    if rf.degree() > -2 {
        return Err(Error::Validation(format!(
            "series needs O(1/t²) decay; factor degree is {}",
            rf.degree()
        )));
    }
    let tol_rat = Rat::from_float(tol)
        .ok_or_else(|| Error::Domain(format!("tolerance {tol} is not representable")))?;
    let bits = (-tol.log2()).ceil() as u32 + 64;

    let m0 = 1 - p.a0_star();
    let mut head = Rat::zero();
    for m in m0..=0 {
        let v = eval_half(&rf, m)?;
        if m.rem_euclid(2) == 0 {
            head += v;
        } else {
            head -= v;
        }
    }

    // Σ_{m≥1} (−1)^m·R̂(m/2) = −Σ_{k≥0} (−1)^k·R̂((k+1)/2)
    let n0 = (bits as f64 * 0.40) as u64 + 12;
    let v1 = accelerated_alternating(|k| eval_half(&rf, k as i64 + 1), n0)?;
    let v2 = accelerated_alternating(|k| eval_half(&rf, k as i64 + 1), n0 + 10)?;
    let quarter_tol = &tol_rat / Rat::from_integer(int(4));
    let (acc, err, n_used) = if (&v1 - &v2).abs() <= quarter_tol {
        let moved = (&v1 - &v2).abs();
        (v2, moved, n0 + 10)
    } else {
        let v3 = accelerated_alternating(|k| eval_half(&rf, k as i64 + 1), 2 * n0)?;
        let moved = (&v2 - &v3).abs();
        if &moved * Rat::from_integer(int(2)) > tol_rat {
            return Err(Error::Resolution(format!(
                "accelerated tail still moved by {moved} after {} terms",
                2 * n0
            )));
        }
        (v3, moved, 2 * n0)
    };

    let total = head - acc;
    let sign = if p.d_hat().rem_euclid(2) == 0 { -1 } else { 1 };
    let value_rat = total * Rat::new(int(sign), int(2));
    let wb = bits + 32;
    Ok(OracleValue {
        value: Hp::from_rat(&value_rat, wb),
        error: &Hp::from_rat(&err, wb).abs() + &Hp::one(wb).mul2k(-(wb as i64)),
        nodes: n_used as usize,
        height: (n_used as f64 + 1.0) / 2.0,
    })
}

/// Power sums Σ_i e_i/(t + x_i)^j for j = 1..=jmax at a point where no
/// factor vanishes; these are the derivatives of ln F up to factorials.
fn power_sums_at(rf: &FactorList, t: &Rat, jmax: usize) -> Vec<Rat> {
    let mut sums = vec![Rat::zero(); jmax];
    for &(h, e) in rf.factors() {
        let inv = (t + Rat::new(int(h), int(2))).recip();
        let e_rat = Rat::from_integer(int(e));
        let mut pw = Rat::one();
        for s in sums.iter_mut() {
            pw *= &inv;
            *s += &e_rat * &pw;
        }
    }
    sums
}

/// Derivatives F^{(j)}(t) for j = 0..=jmax−1 from F(t) and the
/// log-derivative power sums, via F′ = F·(ln F)′ and the Leibniz rule.
fn derivatives_at(rf: &FactorList, t: &Rat, jmax: usize) -> Result<Vec<Rat>> {
    let f0 = rf.eval(t)?;
    if f0.is_zero() {
        return Err(Error::Singularity(format!(
            "derivative table needs a non-root anchor, got a root at t = {t}"
        )));
    }
    let sums = power_sums_at(rf, t, jmax);
    // gd[i] = (ln F)^{(i+1)} = (−1)^i·i!·S_{i+1}
    let mut gd = Vec::with_capacity(jmax);
    let mut fact = Rat::one();
    for (i, s) in sums.iter().enumerate() {
        if i > 0 {
            fact *= rat(-(i as i64), 1);
        }
        gd.push(&fact * s);
    }
    let mut derivs = vec![f0];
    for m in 0..jmax.saturating_sub(1) {
        let mut acc = Rat::zero();
        for j in 0..=m {
            acc += Rat::from_integer(binomial(m as i64, j as i64)) * &derivs[j] * &gd[m - j];
        }
        derivs.push(acc);
    }
    Ok(derivs)
}

/// r for a decaying first-construction R (degree d = −1) by summing the
/// residues R′(m) of (π/sin πt)²·R(t) at the integers right of the strip:
///
///   r = (−1)^{d+1}·Σ_{m≥1−a2*} R′(m),
///
/// the orientation being fixed by closing the contour over the decaying
/// side; the convention is calibrated so that R = 1/(t+1) (the main
/// family's n = 0 member) evaluates to −ζ(2). The far tail is summed by
/// the Euler–Maclaurin expansion anchored where all factors are positive.
pub fn integer_series1(p: &Params, tol: f64) -> Result<OracleValue> {
    let d = p.d();
    if d >= 0 {
        return Err(Error::Unavailable(format!(
            "integer residue series diverges for degree d = {d} ≥ 0; use the line integral"
        )));
    }
    if !tol.is_finite() || !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance {tol} outside (0, 1)")));
    }
    let tol_rat = Rat::from_float(tol)
        .ok_or_else(|| Error::Domain(format!("tolerance {tol} is not representable")))?;
    let bits = (-tol.log2()).ceil() as i64 + 64;

    let rf = p.rfun();
    let m0 = 1 - p.a_star()[1];
    let mut anchor = (bits / 2).max(64).max(m0 + 1);
    const KMAX: usize = 30;

    for attempt in 0..2 {
        let mut direct = Rat::zero();
        for m in m0..anchor {
            direct += rf.derivative_at(&rat(m, 1))?;
        }
        let a = rat(anchor, 1);
        let derivs = derivatives_at(&rf, &a, 2 * KMAX + 1)?;
        // Σ_{m≥A} R′(m) = −R(A) + R′(A)/2 − Σ_k B_{2k}/(2k)!·R^{(2k)}(A)
        let mut tail = -&derivs[0] + &derivs[1] / Rat::from_integer(int(2));
        let mut em_err = Rat::zero();
        let mut settled = false;
        let mut terms = 0usize;
        for k in 1..=KMAX {
            let term =
                hp::bernoulli(2 * k) / Rat::from_integer(factorial(2 * k as i64)) * &derivs[2 * k];
            em_err = term.abs();
            tail -= term;
            terms = k;
            if &em_err * Rat::from_integer(int(8)) <= tol_rat {
                settled = true;
                break;
            }
        }
        if !settled {
            if attempt == 0 {
                anchor *= 2;
                continue;
            }
            return Err(Error::Resolution(format!(
                "tail expansion still moved by {em_err} after {KMAX} terms at anchor {anchor}"
            )));
        }
        let sum = direct + tail;
        let value_rat = if (d + 1).rem_euclid(2) == 0 { sum } else { -sum };
        let wb = bits as u32 + 32;
        return Ok(OracleValue {
            value: Hp::from_rat(&value_rat, wb),
            error: &Hp::from_rat(&em_err, wb) + &Hp::one(wb).mul2k(-(wb as i64)),
            nodes: (anchor - m0) as usize + terms,
            height: anchor as f64,
        });
    }
    unreachable!("anchor retry loop returns on its second pass");
}

/// Least-squares slope of ln|values[n]| against n over n ≥ skip, ignoring
/// zero entries. This is the empirical growth-rate probe: geometric data
/// cⁿ comes back as ln c.
pub fn growth_fit(values: &[Rat], skip: usize) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (n, v) in values.iter().enumerate().skip(skip) {
        if v.is_zero() {
            continue;
        }
        xs.push(n as f64);
        ys.push(hp::ln_rat_abs(v, 96)?.to_f64());
    }
    if xs.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} usable points after skipping {skip}; a fit needs at least 5",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    Ok(num / den)
}

/// Cross-construction integral identity at index n: the (π/sin πt)² line
/// integral of the main family's R equals the π/sin 2πt line integral of
/// the hat preset's R̂, before either sign normalization is applied.
///
/// The factorial prefactors that make the two integrands comparable are
/// asserted exactly first: Π(main, n) = (6n)!/((7n)!·(5n)!·(3n)!) and
/// Π̂(hat, n) = (6n)!²/((9n)!·(3n)!). Returns the (first, second) raw
/// values; the caller compares them at its own tolerance.
pub fn cross_tale_check(n: i64, digits: u32) -> Result<(OracleValue, OracleValue)> {
    let p1 = crate::tale_one::PEX.params(n)?;
    let p2 = that(n)?;
    let pi1 = Rat::new(factorial(6 * n), factorial(7 * n) * factorial(5 * n) * factorial(3 * n));
    if p1.prefactor() != pi1 {
        return Err(Error::Internal(format!(
            "main-family prefactor at n = {n} differs from (6n)!/((7n)!(5n)!(3n)!)"
        )));
    }
    let pi2 = Rat::new(factorial(6 * n) * factorial(6 * n), factorial(9 * n) * factorial(3 * n));
    if p2.prefactor() != pi2 {
        return Err(Error::Internal(format!(
            "hat-preset prefactor at n = {n} differs from (6n)!²/((9n)!(3n)!)"
        )));
    }
    let spec1 = QuadratureSpec::tale_one_default(&p1).with_digits(digits);
    let spec2 = QuadratureSpec::tale_two_default(&p2).with_digits(digits);
    let lhs = vertical_line_integral(&p1.rfun(), Kernel::SquaredCosec, &spec1.abscissa, digits)?;
    let rhs = vertical_line_integral(&p2.rfun(), Kernel::DoubledCosec, &spec2.abscissa, digits)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tale_one::{Params, PEX, REM3};

    fn hp_close(a: &Hp, b: &Hp, tol_pow10: u32) -> bool {
        let tol = Rat::new(Int::one(), int(10).pow(tol_pow10));
        (a - b).abs().to_rat() <= tol
    }

    #[test]
    fn zeta2_matches_the_classical_value() {
        let z = zeta2(25).unwrap();
        assert!(z.to_decimal_string(25).starts_with("1.644934066848226436"));
        assert!(matches!(zeta2(0), Err(Error::Domain(_))));
        assert!(matches!(zeta2(1001), Err(Error::Domain(_))));
        // doubling the precision leaves every earlier digit in place
        let a = zeta2(40).unwrap();
        let b = zeta2(80).unwrap();
        assert!(hp_close(&a, &b, 39));
    }

    #[test]
    fn basis_polynomial_integrals_match_the_closed_form() {
        for ell in [0i64, 1, 3, 7] {
            let got = barnes_lemma1_check(ell, 20).unwrap();
            let sign = if ell % 2 == 0 { 1 } else { -1 };
            let expected = Hp::from_rat(&rat(sign, ell + 1), 128);
            assert!(
                hp_close(&got.value, &expected, 12),
                "degree {ell}: got {}",
                got.value.to_decimal_string(20)
            );
            assert!(got.error.to_f64() < 1e-12);
        }
        assert!(matches!(barnes_lemma1_check(31, 20), Err(Error::Domain(_))));
        assert!(matches!(barnes_lemma1_check(-1, 20), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_integrals_recover_zeta_partial_sums() {
        let z = zeta2(25).unwrap();
        let k0 = zeta_tail_integral(0, 20).unwrap();
        assert!(hp_close(&k0.value, &z, 12));
        // k = 2: ζ(2) − 5/4
        let k2 = zeta_tail_integral(2, 20).unwrap();
        let expected = &z - &Hp::from_rat(&rat(5, 4), 128);
        assert!(hp_close(&k2.value, &expected, 12));
        assert!(matches!(zeta_tail_integral(-1, 20), Err(Error::Domain(_))));
    }

    #[test]
    fn toy_quadrature_matches_the_exact_form() {
        // R = t³/(t+1): q = −1, p = −5/3, so r = 5/3 − ζ(2) ≈ 0.0217326
        let p = Params::new([1, 1, 1, 1], [0, 0, 0, 2]).unwrap();
        let form = p.linear_form().unwrap();
        assert_eq!(form.q, int(-1));
        assert_eq!(form.p, rat(-5, 3));
        let z = zeta2(30).unwrap();
        let exact = Hp::from_rat(&form.residual(&z.to_rat()), 160);
        let spec = QuadratureSpec::tale_one_default(&p).with_digits(25);
        let quad = contour_quad1(&p, &spec).unwrap();
        assert!(hp_close(&quad.value, &exact, 12));
        let approx = quad.value.to_f64();
        assert!((approx - 0.0217326).abs() < 1e-6, "value drifted to {approx}");
    }

    #[test]
    fn the_integral_does_not_depend_on_the_abscissa() {
        let p = Params::new([1, 1, 1, 1], [0, 0, 0, 2]).unwrap();
        let a = contour_quad1(&p, &QuadratureSpec { abscissa: rat(-1, 2), digits: 25 }).unwrap();
        let b = contour_quad1(&p, &QuadratureSpec { abscissa: rat(-1, 4), digits: 25 }).unwrap();
        assert!(hp_close(&a.value, &b.value, 12));
    }

    #[test]
    fn preset_quadratures_agree_with_the_exact_forms() {
        let z = zeta2(40).unwrap().to_rat();
        for fam in [&PEX, &REM3] {
            let p = fam.params(1).unwrap();
            let form = p.linear_form().unwrap();
            let exact = Hp::from_rat(&form.residual(&z), 200);
            let spec = QuadratureSpec::tale_one_default(&p).with_digits(30);
            let quad = contour_quad1(&p, &spec).unwrap();
            // |r| is around 1e−7 here; ask for ten significant digits of it
            assert!(
                hp_close(&quad.value, &exact, 17),
                "{}: quad {} vs exact {}",
                fam.name,
                quad.value.to_decimal_string(20),
                exact.to_decimal_string(20)
            );
        }
        let p2 = that(1).unwrap();
        let form = p2.linear_form().unwrap();
        let exact = Hp::from_rat(&form.residual(&z), 200);
        let spec = QuadratureSpec::tale_two_default(&p2).with_digits(30);
        let quad = contour_quad2(&p2, &spec).unwrap();
        assert!(hp_close(&quad.value, &exact, 17));
    }

    #[test]
    fn smallest_hat_instance_integrates_to_zeta2() {
        // R̂ = 1/(t+1)² at n = 0, whose form is exactly 1·ζ(2) − 0
        let p2 = that(0).unwrap();
        let form = p2.linear_form().unwrap();
        assert_eq!(form.q, int(1));
        assert!(form.p.is_zero());
        let z = zeta2(25).unwrap();
        let spec = QuadratureSpec::tale_two_default(&p2).with_digits(25);
        let quad = contour_quad2(&p2, &spec).unwrap();
        assert!(hp_close(&quad.value, &z, 12));
    }

    #[test]
    fn half_integer_series_agrees_with_the_line_integral() {
        let p2 = that(0).unwrap();
        let z = zeta2(25).unwrap();
        let series = half_integer_series(&p2, 1e-15).unwrap();
        assert!(hp_close(&series.value, &z, 14));

        let p2 = that(1).unwrap();
        let series = half_integer_series(&p2, 1e-16).unwrap();
        let spec = QuadratureSpec::tale_two_default(&p2).with_digits(25);
        let quad = contour_quad2(&p2, &spec).unwrap();
        assert!(
            hp_close(&series.value, &quad.value, 14),
            "series {} vs quadrature {}",
            series.value.to_decimal_string(20),
            quad.value.to_decimal_string(20)
        );
        assert!(series.error.to_f64() <= 1e-16);
        assert!(matches!(half_integer_series(&p2, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn integer_series_handles_exactly_the_decaying_instances() {
        // R = 1/(t+1) at n = 0: the calibration anchor, r = −ζ(2)
        let p = PEX.params(0).unwrap();
        let z = zeta2(25).unwrap();
        let series = integer_series1(&p, 1e-15).unwrap();
        assert!(hp_close(&series.value, &(-&z), 14));

        // another degree −1 instance, checked against its exact form
        let p = Params::new_relaxed([1, 1, 1, 2], [1, 1, 1, 3]).unwrap();
        let form = p.linear_form().unwrap();
        let exact = Hp::from_rat(&form.residual(&z.to_rat()), 160);
        let series = integer_series1(&p, 1e-15).unwrap();
        assert!(hp_close(&series.value, &exact, 14));
        let quad =
            contour_quad1(&p, &QuadratureSpec::tale_one_default(&p).with_digits(25)).unwrap();
        assert!(hp_close(&series.value, &quad.value, 12));

        let growing = PEX.params(1).unwrap();
        assert!(matches!(integer_series1(&growing, 1e-12), Err(Error::Unavailable(_))));
    }

    #[test]
    fn growth_fit_recovers_geometric_rates() {
        let doubling: Vec<Rat> = (0u32..24).map(|n| Rat::from_integer(int(2).pow(n))).collect();
        let slope = growth_fit(&doubling, 3).unwrap();
        assert!((slope - std::f64::consts::LN_2).abs() < 1e-9);

        let short: Vec<Rat> = (0u32..4).map(|n| Rat::from_integer(int(3).pow(n))).collect();
        assert!(matches!(growth_fit(&short, 0), Err(Error::InsufficientData(_))));

        // zeros beyond the skip are not usable points
        let mut sparse = doubling.clone();
        for v in sparse.iter_mut().skip(4) {
            *v = Rat::zero();
        }
        assert!(matches!(growth_fit(&sparse, 0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn cross_construction_integrals_agree() {
        for n in 0..=2 {
            let (lhs, rhs) = cross_tale_check(n, 30).unwrap();
            let diff = (&lhs.value - &rhs.value).abs();
            // ten significant digits of agreement
            let bound = &lhs.value.abs() * &Hp::from_rat(&rat(1, 10_000_000_000), 64);
            assert!(
                diff.cmp_val(&bound) != Ordering::Greater,
                "n = {n}: {} vs {}",
                lhs.value.to_decimal_string(20),
                rhs.value.to_decimal_string(20)
            );
        }
    }

    #[test]
    fn inadmissible_abscissae_are_rejected() {
        let p = PEX.params(1).unwrap();
        // strip is (−7, −1): boundary, outside, and integer lattice points fail
        for c in [rat(-7, 1), rat(0, 1), rat(-15, 2), rat(-3, 1)] {
            let r = contour_quad1(&p, &QuadratureSpec { abscissa: c.clone(), digits: 15 });
            assert!(matches!(r, Err(Error::Domain(_))), "abscissa {c} slipped through");
        }
        let p2 = that(1).unwrap();
        // strip is (−5, −3/2); −2 is inside but on the half-integer lattice
        for c in [rat(-5, 1), rat(-1, 1), rat(-2, 1)] {
            let r = contour_quad2(&p2, &QuadratureSpec { abscissa: c.clone(), digits: 15 });
            assert!(matches!(r, Err(Error::Domain(_))), "abscissa {c} slipped through");
        }
    }

    #[test]
    fn reported_error_estimates_cover_precision_doubling() {
        let p = PEX.params(1).unwrap();
        let lo = contour_quad1(&p, &QuadratureSpec::tale_one_default(&p).with_digits(20)).unwrap();
        let hi = contour_quad1(&p, &QuadratureSpec::tale_one_default(&p).with_digits(40)).unwrap();
        let diff = (&lo.value - &hi.value).abs();
        let budget = &lo.error + &hi.error;
        assert!(
            diff.cmp_val(&budget) != Ordering::Greater,
            "diff {:e} exceeds budget {:e} (lo err {:e}, hi err {:e})",
            diff.to_f64(),
            budget.to_f64(),
            lo.error.to_f64(),
            hi.error.to_f64()
        );
    }
}
