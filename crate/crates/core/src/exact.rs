//! Exact integer/rational arithmetic: lcm ranges D_n = lcm(1..n), harmonic
//! and alternating harmonic partial sums, p-adic orders, small-prime
//! enumeration, and the integer-valuedness certificates for factorial-scaled
//! products of binomial-type polynomials.
//!
//! No floating point anywhere in this module.

use crate::error::{Error, Result};
use crate::factors::FactorList;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Mutex;

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

/// Shorthand for small rational literals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Converts a rational known to be an integer; anything else is a bug in a
/// proved-integrality path.
pub fn to_int_exact(r: &Rat, what: &str) -> Result<Int> {
    if r.denom().is_one() {
        Ok(r.numer().clone())
    } else {
        Err(Error::Internal(format!("{what} is not an integer: {r}")))
    }
}

static FACTORIALS: Mutex<Vec<Int>> = Mutex::new(Vec::new());

/// n! with a process-wide memo table.
pub fn factorial(n: i64) -> Int {
    assert!(n >= 0, "factorial of negative argument");
    let n = n as usize;
    let mut cache = FACTORIALS.lock().unwrap();
    if cache.is_empty() {
        cache.push(Int::one());
    }
    while cache.len() <= n {
        let next = cache.last().unwrap() * Int::from(cache.len());
        cache.push(next);
    }
    cache[n].clone()
}

/// Binomial coefficient with the usual vanishing convention outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> Int {
    debug_assert!(n >= 0, "binomial with negative upper index");
    if k < 0 || k > n {
        return Int::zero();
    }
    let (num, den_a, den_b) = (factorial(n), factorial(k), factorial(n - k));
    num / (den_a * den_b)
}

/// D_n = lcm(1, 2, …, n), with D_0 = D_1 = 1.
pub fn lcm_range(n: u64) -> Int {
    let mut acc = Int::one();
    for j in 2..=n.max(1) {
        acc = acc.lcm(&Int::from(j));
    }
    acc
}

/// Σ_{ℓ=1}^{k} 1/ℓ^s for s ∈ {1, 2, 3}.
pub fn harmonic_power_sum(k: i64, s: u32) -> Result<Rat> {
    if k < 0 {
        return Err(Error::Domain(format!("harmonic sum length {k} < 0")));
    }
    if !(1..=3).contains(&s) {
        return Err(Error::Domain(format!("harmonic power {s} outside 1..=3")));
    }
    let mut acc = Rat::zero();
    for l in 1..=k {
        acc += Rat::new(Int::one(), Int::from(l).pow(s));
    }
    Ok(acc)
}

/// Σ_{ℓ=1}^{k} (−1)^{ℓ−1}/ℓ^s for s ∈ {1, 2}.
pub fn alt_harmonic_sum(k: i64, s: u32) -> Result<Rat> {
    if k < 0 {
        return Err(Error::Domain(format!("alternating sum length {k} < 0")));
    }
    if !(1..=2).contains(&s) {
        return Err(Error::Domain(format!("alternating power {s} outside 1..=2")));
    }
    let mut acc = Rat::zero();
    for l in 1..=k {
        let term = Rat::new(Int::one(), Int::from(l).pow(s));
        if l % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Order at p of a nonzero value, or the distinguished order of 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicOrd {
    Finite(i64),
    /// ord_p(0): larger than every finite order.
    Infinite,
}

impl PadicOrd {
    pub fn at_least(&self, bound: i64) -> bool {
        match self {
            PadicOrd::Finite(v) => *v >= bound,
            PadicOrd::Infinite => true,
        }
    }
}

fn ord_of_int(x: &Int, p: &Int) -> i64 {
    debug_assert!(!x.is_zero());
    let mut v = 0;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Signed order ord_p on rationals; ord_p(0) is the infinite marker.
pub fn padic_ord(x: &Rat, p: u64) -> Result<PadicOrd> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if x.is_zero() {
        return Ok(PadicOrd::Infinite);
    }
    let pb = Int::from(p);
    Ok(PadicOrd::Finite(ord_of_int(x.numer(), &pb) - ord_of_int(x.denom(), &pb)))
}

pub fn padic_ord_int(x: &Int, p: u64) -> Result<PadicOrd> {
    padic_ord(&Rat::from_integer(x.clone()), p)
}

/// Primes p with lo < p ≤ hi, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    primes_upto(hi).into_iter().filter(|&p| p > lo).collect()
}

/// Sieve of Eratosthenes up to and including hi.
pub fn primes_upto(hi: u64) -> Vec<u64> {
    if hi < 2 {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut q = p * p;
        while q <= n {
            composite[q] = true;
            q += p;
        }
    }
    out
}

/// Certificate data for R(t) = ∏_j (t+b_j)(t+b_j+1)···(t+a_j−1)/(a_j−b_j)!:
/// with m = max_j (a_j − b_j) and D_m = lcm(1..m), the triple
/// (R(k), D_m·R′(k), D_m·(R(k)−R(ℓ))/(k−ℓ)) consists of integers.
pub fn iv_certificate(spec: &[(i64, i64)], k: i64, ell: i64) -> Result<(Int, Int, Int)> {
    if k == ell {
        return Err(Error::Domain("difference quotient needs k ≠ ℓ".into()));
    }
    let mut m = 0i64;
    let mut f = FactorList::one();
    for &(a, b) in spec {
        if b > a {
            return Err(Error::Validation(format!("factor needs b ≤ a, got a = {a}, b = {b}")));
        }
        m = m.max(a - b);
        f.rising_block(b, a, 1);
        f.mul_coeff(&Rat::new(Int::one(), factorial(a - b)));
    }
    let dm = lcm_range(m as u64);
    let tk = Rat::from_integer(int(k));
    let tl = Rat::from_integer(int(ell));
    let rk = f.eval(&tk)?;
    let rl = f.eval(&tl)?;
    let deriv = f.derivative_at(&tk)?;
    let v0 = to_int_exact(&rk, "R(k)")?;
    let v1 = to_int_exact(&(Rat::from_integer(dm.clone()) * deriv), "D_m·R'(k)")?;
    let quot = (rk - rl) / Rat::from_integer(int(k - ell));
    let v2 = to_int_exact(&(Rat::from_integer(dm) * quot), "D_m·(R(k)-R(ℓ))/(k-ℓ)")?;
    Ok((v0, v1, v2))
}
