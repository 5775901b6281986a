//! Factored rational functions c·∏(t + x_i)^{e_i} with half-integer roots.
//!
//! Both linear-form constructions, the integer-valuedness certificates, and
//! the numeric oracles evaluate the same factored objects, so the factor
//! list is the one shared representation. Roots are stored doubled
//! (`two_x = 2·x_i`) so factors coming from (2t + j) = 2·(t + j/2) live in
//! the same table as plain (t + j); the scale 2 goes into the constant.
//!
//! Exact evaluation returns the multiplicity m at the point together with
//! the nonvanishing part, i.e. F(t) = (t − τ)^m · G(t) with G(τ) ≠ 0, which
//! is what residues and the derivative case analysis need.

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::hp::{Cx, Hp};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    coeff: Rat,
    /// (2·root offset, exponent): the factor (t + two_x/2)^e, e ≠ 0.
    factors: Vec<(i64, i64)>,
}

impl FactorList {
    pub fn new(coeff: Rat) -> Self {
        FactorList { coeff, factors: Vec::new() }
    }

    pub fn one() -> Self {
        FactorList::new(Rat::one())
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn factors(&self) -> &[(i64, i64)] {
        &self.factors
    }

    /// Net degree Σ e_i (negative for proper rational functions).
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul_coeff(&mut self, r: &Rat) {
        self.coeff *= r;
    }

    /// Multiplies by (t + two_x/2)^e, merging with an existing factor.
    pub fn push(&mut self, two_x: i64, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(slot) = self.factors.iter_mut().find(|f| f.0 == two_x) {
            slot.1 += e;
            if slot.1 == 0 {
                self.factors.retain(|f| f.1 != 0);
            }
            return;
        }
        self.factors.push((two_x, e));
    }

    /// Multiplies by (t+b)(t+b+1)···(t+a−1) raised to `e` (empty when a ≤ b).
    pub fn rising_block(&mut self, b: i64, a: i64, e: i64) {
        for j in b..a {
            self.push(2 * j, e);
        }
    }

    /// Multiplies by (2t+b)(2t+b+1)···(2t+a−1) raised to `e`; each factor
    /// contributes scale 2^e to the constant and a half-integer root.
    pub fn doubled_block(&mut self, b: i64, a: i64, e: i64) {
        let two = Rat::from_integer(Int::from(2));
        for j in b..a {
            self.push(j, e);
            if e >= 0 {
                for _ in 0..e {
                    self.coeff *= &two;
                }
            } else {
                for _ in 0..-e {
                    self.coeff /= &two;
                }
            }
        }
    }

    /// Returns self multiplied by (t + k)^e.
    pub fn with_factor(&self, k: i64, e: i64) -> Self {
        let mut f = self.clone();
        f.push(2 * k, e);
        f
    }

    /// Writes F(t) = (t − τ)^m · G(t) with G(τ) ≠ 0 and returns (m, G(τ)).
    pub fn eval_parts(&self, t: &Rat) -> (i64, Rat) {
        let p = t.numer();
        let q = t.denom();
        let two_q: BigInt = q * 2;
        let mut mult: i64 = 0;
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        // Power of (2q) owed by the nonvanishing factors.
        let mut scale: i64 = 0;
        for &(h, e) in &self.factors {
            let u: BigInt = p * 2 + q * h; // 2p + h·q
            if u.is_zero() {
                mult += e;
                continue;
            }
            scale += e;
            let (target, exp) = if e > 0 { (&mut num, e) } else { (&mut den, -e) };
            *target *= u.pow(exp as u32);
        }
        if scale > 0 {
            den *= two_q.pow(scale as u32);
        } else if scale < 0 {
            num *= two_q.pow((-scale) as u32);
        }
        let g = Rat::new(num, den) * &self.coeff;
        (mult, g)
    }

    /// Exact value at a non-pole point (0 at a zero, error at a pole).
    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        let (m, g) = self.eval_parts(t);
        if m < 0 {
            return Err(Error::Singularity(format!("evaluation at pole t = {t}")));
        }
        Ok(if m > 0 { Rat::zero() } else { g })
    }

    /// Exact derivative F′(τ), defined whenever τ is not a pole.
    ///
    /// With F = (t − τ)^m G: m = 0 gives G(τ)·Σ e_i/(τ + x_i); m = 1 gives
    /// G(τ); m ≥ 2 gives 0.
    pub fn derivative_at(&self, t: &Rat) -> Result<Rat> {
        let (m, g) = self.eval_parts(t);
        match m {
            _ if m < 0 => Err(Error::Singularity(format!("derivative at pole t = {t}"))),
            0 => {
                let (s1, _) = self.log_derivative_sums(t);
                Ok(g * s1)
            }
            1 => Ok(g),
            _ => Ok(Rat::zero()),
        }
    }

    /// (Σ e_i/(t + x_i), Σ e_i/(t + x_i)²) at a point where no factor
    /// vanishes; used for derivative values and tail expansions.
    pub fn log_derivative_sums(&self, t: &Rat) -> (Rat, Rat) {
        let p = t.numer();
        let q = t.denom();
        let mut s1 = Rat::zero();
        let mut s2 = Rat::zero();
        for &(h, e) in &self.factors {
            let u: BigInt = p * 2 + q * h; // (t + x) = u/(2q)
            debug_assert!(!u.is_zero(), "log derivative at a root");
            let inv = Rat::new(q * 2, u); // 1/(t+x)
            let e_rat = Rat::from_integer(Int::from(e));
            s1 += &e_rat * &inv;
            s2 += e_rat * (&inv * &inv);
        }
        (s1, s2)
    }

    /// Second derivative at a point where no factor vanishes.
    pub fn second_derivative_at_regular(&self, t: &Rat) -> Result<Rat> {
        let (m, g) = self.eval_parts(t);
        if m != 0 {
            return Err(Error::Singularity(format!(
                "second derivative needs a regular non-root point, got multiplicity {m} at t = {t}"
            )));
        }
        let (s1, s2) = self.log_derivative_sums(t);
        Ok(g * (&s1 * &s1 - s2))
    }

    /// Complex fixed-point evaluation; `t` must stay away from the poles.
    pub fn eval_cx(&self, t: &Cx) -> Cx {
        let bits = t.re.bits();
        let mut num = Cx::one(bits);
        let mut den = Cx::one(bits);
        let half = Hp::from_rat_parts(&Int::one(), &Int::from(2), bits);
        for &(h, e) in &self.factors {
            let x = &half * &Hp::from_int(&Int::from(h), bits);
            let lin = Cx { re: &t.re + &x, im: t.im.clone() };
            let (target, exp) = if e > 0 { (&mut num, e) } else { (&mut den, -e) };
            for _ in 0..exp {
                *target = target.mul(&lin);
            }
        }
        let c = Hp::from_rat(&self.coeff, bits);
        num.scale(&c).div(&den)
    }
}
