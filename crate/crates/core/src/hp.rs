//! Fixed-point big-number reals and complexes.
//!
//! A value is mant·2^(−bits); `bits` is the binary fixed-point scale chosen
//! per computation (rule of thumb: 3.33 bits per requested decimal digit
//! plus generous guard). Every arithmetic op rounds to the operand scale,
//! so absolute error per op is one ulp = 2^(−bits); callers pick `bits`
//! large enough to cover both the target precision and the dynamic range of
//! intermediate values.
//!
//! Provided functions: π (Machin), ln 2, exp, ln (including ln of a big
//! integer), sin/cos of π·rational with exact range reduction, sqrt, and
//! digamma via recurrence plus the Bernoulli asymptotic series.

use crate::error::{Error, Result};
use crate::exact::{int, Int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hp {
    mant: BigInt,
    bits: u32,
}

/// Rounds x/2^s to the nearest integer (ties toward +∞).
fn shr_round(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    ((x >> (s - 1)) + 1i32) >> 1
}

/// Rounds a/b to the nearest integer; b must be positive.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let q = a.div_floor(b);
    let r = a - &q * b;
    if &r * 2i32 >= *b {
        q + 1i32
    } else {
        q
    }
}

impl Hp {
    pub fn zero(bits: u32) -> Self {
        Hp { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Hp { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int(v: &Int, bits: u32) -> Self {
        Hp { mant: v << bits, bits }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Hp::from_int(&int(v), bits)
    }

    pub fn from_rat_parts(num: &Int, den: &Int, bits: u32) -> Self {
        assert!(!den.is_zero());
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        Hp { mant: div_round(&(num << bits), &den), bits }
    }

    pub fn from_rat(r: &Rat, bits: u32) -> Self {
        Hp::from_rat_parts(r.numer(), r.denom(), bits)
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite());
        Hp::from_rat(&Rat::from_float(x).expect("finite float"), bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Hp { mant: self.mant.abs(), bits: self.bits }
    }

    /// Exact rational value mant/2^bits.
    pub fn to_rat(&self) -> Rat {
        Rat::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    /// Rescales to a new fixed-point scale (rounding when shrinking).
    pub fn with_bits(&self, bits: u32) -> Self {
        if bits == self.bits {
            self.clone()
        } else if bits > self.bits {
            Hp { mant: &self.mant << (bits - self.bits), bits }
        } else {
            Hp { mant: shr_round(&self.mant, self.bits - bits), bits }
        }
    }

    fn aligned(a: &Hp, b: &Hp) -> (Hp, Hp) {
        let bits = a.bits.max(b.bits);
        (a.with_bits(bits), b.with_bits(bits))
    }

    pub fn mul2k(&self, k: i64) -> Self {
        if k >= 0 {
            Hp { mant: &self.mant << (k as u32), bits: self.bits }
        } else {
            Hp { mant: shr_round(&self.mant, (-k) as u32), bits: self.bits }
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.is_negative() {
            return Err(Error::Domain("sqrt of negative value".into()));
        }
        let mant = (&self.mant << self.bits).sqrt();
        Ok(Hp { mant, bits: self.bits })
    }

    /// Floor to a big integer.
    pub fn floor_int(&self) -> Int {
        self.mant.div_floor(&(BigInt::one() << self.bits))
    }

    /// Nearest integer.
    pub fn round_int(&self) -> Int {
        shr_round(&self.mant, self.bits)
    }

    /// Approximate conversion; saturates to ±∞ outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let nbits = self.mant.bits() as i64;
        let take = 64.min(nbits) as u32;
        let shift = nbits - take as i64;
        let top = (&self.mant >> (shift as u64)).to_f64().unwrap_or(0.0);
        let exp2 = shift - self.bits as i64;
        if exp2 > 1023 {
            return if self.mant.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if exp2 < -1074 - 64 {
            return 0.0;
        }
        top * (exp2 as f64).exp2()
    }

    /// Decimal string with the given number of significant digits.
    pub fn to_decimal_string(&self, sig: u32) -> String {
        assert!(sig >= 1);
        if self.mant.is_zero() {
            return "0".into();
        }
        let neg = self.mant.is_negative();
        let a = self.mant.abs();
        // aim the scale so digits_int lands near sig + 2 digits whatever
        // the magnitude; the actual digit count refines the ±1 estimate
        let mag2 = a.bits() as i64 - 1 - self.bits as i64;
        let e10_est = (mag2 as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let shift = sig as i64 + 2 - e10_est;
        let mut digits_int = if shift >= 0 {
            div_round(&(&a * Int::from(10u32).pow(shift as u32)), &(BigInt::one() << self.bits))
        } else {
            div_round(&a, &(Int::from(10u32).pow((-shift) as u32) << self.bits))
        };
        // digits_int ≈ |x|·10^shift; exponent of leading digit:
        let ndig = digits_int.to_string().len() as i64;
        let e10 = ndig - 1 - shift; // leading digit is 10^e10
        let drop = ndig - sig as i64;
        if drop > 0 {
            digits_int = div_round(&digits_int, &Int::from(10u32).pow(drop as u32));
        } else if drop < 0 {
            digits_int *= Int::from(10u32).pow((-drop) as u32);
        }
        let mut ds = digits_int.to_string();
        // rounding may carry over to one extra digit
        let e10 = if ds.len() as i64 > sig as i64 {
            ds.truncate(sig as usize);
            e10 + 1
        } else {
            e10
        };
        let body = if (-4..sig as i64 + 4).contains(&e10) {
            if e10 >= 0 {
                let point = (e10 + 1) as usize;
                if point >= ds.len() {
                    let zeros = "0".repeat(point - ds.len());
                    format!("{ds}{zeros}")
                } else {
                    format!("{}.{}", &ds[..point], &ds[point..])
                }
            } else {
                let zeros = "0".repeat((-e10 - 1) as usize);
                format!("0.{zeros}{ds}")
            }
        } else {
            let mut m = ds.clone();
            let head = m.remove(0);
            if m.is_empty() {
                format!("{head}e{e10}")
            } else {
                format!("{head}.{m}e{e10}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_val(other))
    }
}

impl Hp {
    pub fn cmp_val(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = Hp::aligned(self, other);
        a.mant.cmp(&b.mant)
    }
}

macro_rules! hp_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Hp> for &Hp {
            type Output = Hp;
            fn $method(self, rhs: &Hp) -> Hp {
                Hp::$method(self, rhs)
            }
        }
        impl $trait<Hp> for Hp {
            type Output = Hp;
            fn $method(self, rhs: Hp) -> Hp {
                Hp::$method(&self, &rhs)
            }
        }
        impl $trait<&Hp> for Hp {
            type Output = Hp;
            fn $method(self, rhs: &Hp) -> Hp {
                Hp::$method(&self, rhs)
            }
        }
    };
}

impl Hp {
    fn add(a: &Hp, b: &Hp) -> Hp {
        let (x, y) = Hp::aligned(a, b);
        Hp { mant: x.mant + y.mant, bits: x.bits }
    }
    fn sub(a: &Hp, b: &Hp) -> Hp {
        let (x, y) = Hp::aligned(a, b);
        Hp { mant: x.mant - y.mant, bits: x.bits }
    }
    fn mul(a: &Hp, b: &Hp) -> Hp {
        let (x, y) = Hp::aligned(a, b);
        Hp { mant: shr_round(&(&x.mant * &y.mant), x.bits), bits: x.bits }
    }
    fn div(a: &Hp, b: &Hp) -> Hp {
        let (x, y) = Hp::aligned(a, b);
        assert!(!y.mant.is_zero(), "division by zero");
        let (num, den) = if y.mant.is_negative() { (-&x.mant, -&y.mant) } else { (x.mant.clone(), y.mant.clone()) };
        Hp { mant: div_round(&(num << x.bits), &den), bits: x.bits }
    }
}

hp_binop!(Add, add);
hp_binop!(Sub, sub);
hp_binop!(Mul, mul);
hp_binop!(Div, div);

impl Neg for &Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp { mant: -&self.mant, bits: self.bits }
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp { mant: -self.mant, bits: self.bits }
    }
}

// ---------------------------------------------------------------------------
// constants

static PI_CACHE: Mutex<Option<(u32, BigInt)>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<(u32, BigInt)>> = Mutex::new(None);

/// Σ_{k≥0} (−1)^k / ((2k+1)·x^(2k+1)) scaled by 2^bits (arctan of 1/x).
fn atan_inv_scaled(x: u64, bits: u32) -> BigInt {
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut term = div_round(&(BigInt::one() << bits), &BigInt::from(x));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        let contrib = div_round(&term, &BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            acc += contrib;
        } else {
            acc -= contrib;
        }
        term = div_round(&term, &xx);
        k += 1;
    }
    acc
}

/// Σ_{k≥0} 1 / ((2k+1)·x^(2k+1)) scaled by 2^bits (artanh of 1/x).
fn atanh_inv_scaled(x: u64, bits: u32) -> BigInt {
    let xx = BigInt::from(x) * BigInt::from(x);
    let mut term = div_round(&(BigInt::one() << bits), &BigInt::from(x));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        acc += div_round(&term, &BigInt::from(2 * k + 1));
        term = div_round(&term, &xx);
        k += 1;
    }
    acc
}

pub fn pi(bits: u32) -> Hp {
    {
        let cache = PI_CACHE.lock().unwrap();
        if let Some((b, m)) = cache.as_ref() {
            if *b >= bits {
                return Hp { mant: m.clone(), bits: *b }.with_bits(bits);
            }
        }
    }
    let work = bits + 64;
    // Machin: π = 16·atan(1/5) − 4·atan(1/239).
    let mant = (atan_inv_scaled(5, work) << 4) - (atan_inv_scaled(239, work) << 2);
    let out = Hp { mant, bits: work }.with_bits(bits);
    let mut cache = PI_CACHE.lock().unwrap();
    *cache = Some((bits, out.mant.clone()));
    out
}

pub fn ln2(bits: u32) -> Hp {
    {
        let cache = LN2_CACHE.lock().unwrap();
        if let Some((b, m)) = cache.as_ref() {
            if *b >= bits {
                return Hp { mant: m.clone(), bits: *b }.with_bits(bits);
            }
        }
    }
    let work = bits + 64;
    let mant = atanh_inv_scaled(3, work) << 1;
    let out = Hp { mant, bits: work }.with_bits(bits);
    let mut cache = LN2_CACHE.lock().unwrap();
    *cache = Some((bits, out.mant.clone()));
    out
}

// ---------------------------------------------------------------------------
// elementary functions

/// Natural log of a positive value.
pub fn ln(x: &Hp) -> Result<Hp> {
    if !x.mant.is_positive() {
        return Err(Error::Domain("ln needs a positive argument".into()));
    }
    let bits = x.bits;
    let work = bits + 64;
    let xw = x.with_bits(work);
    // x = m·2^e with m ∈ [1, 2)
    let mut e: i64 = xw.mant.bits() as i64 - 1 - work as i64;
    let mut m = Hp { mant: xw.mant.clone(), bits: (work as i64 + e) as u32 }.with_bits(work);
    // pull m into [0.75, 1.5) so |w| ≤ 0.2
    let thresh = Hp { mant: BigInt::from(3) << (work - 1), bits: work }; // 1.5
    if m.cmp_val(&thresh) != std::cmp::Ordering::Less {
        m = m.mul2k(-1);
        e += 1;
    }
    // ln m = 2·artanh(w), w = (m−1)/(m+1)
    let one = Hp::one(work);
    let w = (&m - &one) / (&m + &one);
    let w2 = &w * &w;
    let mut term = w.clone();
    let mut acc = Hp::zero(work);
    let mut k: i64 = 0;
    while !term.mant.is_zero() {
        acc = &acc + &(&term / &Hp::from_i64(2 * k + 1, work));
        term = &term * &w2;
        k += 1;
    }
    let res = &acc.mul2k(1) + &(&ln2(work) * &Hp::from_i64(e, work));
    Ok(res.with_bits(bits))
}

/// Natural log of a positive big integer at the given scale.
pub fn ln_int(n: &Int, bits: u32) -> Result<Hp> {
    if !n.is_positive() {
        return Err(Error::Domain("ln of a non-positive integer".into()));
    }
    // ln's own range reduction handles any magnitude; from_int is exact
    ln(&Hp::from_int(n, bits))
}

/// Natural log of |r| for a nonzero rational.
pub fn ln_rat_abs(r: &Rat, bits: u32) -> Result<Hp> {
    if r.is_zero() {
        return Err(Error::Domain("ln of zero".into()));
    }
    Ok(ln_int(&r.numer().abs(), bits)? - ln_int(&r.denom().abs(), bits)?)
}

pub fn exp(x: &Hp) -> Hp {
    let bits = x.bits;
    let work = bits + 96;
    let xw = x.with_bits(work);
    let l2 = ln2(work);
    // x = k·ln2 + r with |r| ≤ ln2/2
    let k = (&xw / &l2 + Hp::from_rat_parts(&int(1), &int(2), work)).floor_int();
    let k_i64 = k.to_i64().expect("exp argument in sane range");
    let r = &xw - &(&l2 * &Hp::from_int(&k, work));
    // halve the argument s times, Taylor, then square s times
    let s = 16u32;
    let u = r.mul2k(-(s as i64));
    let mut term = Hp::one(work);
    let mut acc = Hp::one(work);
    let mut j: i64 = 1;
    loop {
        term = &(&term * &u) / &Hp::from_i64(j, work);
        if term.mant.is_zero() {
            break;
        }
        acc = &acc + &term;
        j += 1;
        if j > 10_000 {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc.mul2k(k_i64).with_bits(bits)
}

/// sin(π·c) and cos(π·c) with the range reduction done exactly on the
/// rational c, so huge c costs nothing and hits no cancellation.
pub fn sin_cos_pi_rat(c: &Rat, bits: u32) -> (Hp, Hp) {
    let work = bits + 64;
    // reduce c mod 2 into [0, 2)
    let two = Rat::from_integer(int(2));
    let mut r = c - (c / &two).floor() * &two;
    let mut sin_sign = 1i32;
    if r >= Rat::one() {
        r -= Rat::one();
        sin_sign = -1;
    }
    let mut cos_sign = sin_sign;
    // r ∈ [0,1); fold into [0, 1/2]
    if r > Rat::new(int(1), int(2)) {
        r = Rat::one() - r;
        cos_sign = -cos_sign;
    }
    let u = &pi(work) * &Hp::from_rat(&r, work);
    let u2 = &u * &u;
    // sin u = Σ (−1)^k u^{2k+1}/(2k+1)!, cos u likewise
    let mut sin_acc = u.clone();
    let mut term = u.clone();
    let mut k: i64 = 1;
    loop {
        term = &(&term * &u2) / &Hp::from_int(&(int(2 * k) * int(2 * k + 1)), work);
        if term.mant.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sin_acc = &sin_acc - &term;
        } else {
            sin_acc = &sin_acc + &term;
        }
        k += 1;
    }
    let mut cos_acc = Hp::one(work);
    let mut term = Hp::one(work);
    let mut k: i64 = 1;
    loop {
        term = &(&term * &u2) / &Hp::from_int(&(int(2 * k - 1) * int(2 * k)), work);
        if term.mant.is_zero() {
            break;
        }
        if k % 2 == 1 {
            cos_acc = &cos_acc - &term;
        } else {
            cos_acc = &cos_acc + &term;
        }
        k += 1;
    }
    if sin_sign < 0 {
        sin_acc = -sin_acc;
    }
    if cos_sign < 0 {
        cos_acc = -cos_acc;
    }
    (sin_acc.with_bits(bits), cos_acc.with_bits(bits))
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and digamma

static BERNOULLI: Mutex<Vec<Rat>> = Mutex::new(Vec::new());

/// B_n (B_1 = −1/2 convention), exact.
pub fn bernoulli(n: usize) -> Rat {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(Rat::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        // Σ_{j=0}^{m} C(m+1, j)·B_j = 0
        let mut acc = Rat::zero();
        for (j, b) in cache.iter().enumerate() {
            let c = crate::exact::binomial((m + 1) as i64, j as i64);
            acc += Rat::from_integer(c) * b;
        }
        let next = -acc / Rat::from_integer(int((m + 1) as i64));
        cache.push(next);
    }
    cache[n].clone()
}

/// ψ(x) for rational x > 0, via the recurrence ψ(x+1) = ψ(x) + 1/x up to a
/// scale where the Bernoulli asymptotic series converges below 2^(−bits).
pub fn digamma_rat(x: &Rat, bits: u32) -> Result<Hp> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let work = bits + 64;
    let target = int((work as f64 * 0.12) as i64 + 16);
    let mut shift_sum = Hp::zero(work);
    let mut cur = x.clone();
    while cur.numer() < &(cur.denom() * &target) {
        shift_sum = &shift_sum + &Hp::from_rat_parts(cur.denom(), cur.numer(), work);
        cur += Rat::one();
    }
    // ψ(X) = ln X − 1/(2X) − Σ_{k≥1} B_{2k}/(2k·X^{2k})
    let xh = Hp::from_rat(&cur, work);
    let mut acc = ln(&xh)?;
    let inv = &Hp::one(work) / &xh;
    let inv2 = &inv * &inv;
    acc = &acc - &inv.mul2k(-1);
    let mut pow = inv2.clone();
    for k in 1..=(work as usize) {
        let b = bernoulli(2 * k);
        let term = &(&pow * &Hp::from_rat(&b, work)) / &Hp::from_i64(2 * k as i64, work);
        if term.mant.is_zero() {
            break;
        }
        acc = &acc - &term;
        pow = &pow * &inv2;
        if 2 * k > 4 * work as usize {
            return Err(Error::Resolution("digamma series failed to reach scale".into()));
        }
    }
    Ok((&acc - &shift_sum).with_bits(bits))
}

// ---------------------------------------------------------------------------
// complex pairs

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cx {
    pub re: Hp,
    pub im: Hp,
}

impl Cx {
    pub fn new(re: Hp, im: Hp) -> Self {
        Cx { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Cx { re: Hp::zero(bits), im: Hp::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Cx { re: Hp::one(bits), im: Hp::zero(bits) }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, s: &Hp) -> Cx {
        Cx { re: &self.re * s, im: &self.im * s }
    }

    pub fn conj(&self) -> Cx {
        Cx { re: self.re.clone(), im: -&self.im }
    }

    pub fn abs2(&self) -> Hp {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn div(&self, o: &Cx) -> Cx {
        let d = o.abs2();
        let n = self.mul(&o.conj());
        Cx { re: &n.re / &d, im: &n.im / &d }
    }

    pub fn square(&self) -> Cx {
        self.mul(self)
    }
}
