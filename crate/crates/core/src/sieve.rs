//! Prime-power corrections to the linear-form denominators.
//!
//! Both constructions leave unused p-adic room in their coefficients: for
//! every prime p in a suitable range, p^{φ(n/p)} divides q_n and clears the
//! same power from the denominator of p_n. The exponent functions φ are
//! 1-periodic integer-valued step functions computed exactly from the
//! family slopes; their product over primes, Φ_n = ∏ p^{φ(n/p)}, shrinks
//! the effective denominator lcm(1..γ1·n)·lcm(1..γ2·n) by a factor that
//! grows like e^{cn} and is what pushes the final measure below 5.1.
//!
//! Three concrete exponent functions matter here: φ from the permutation
//! symmetry of the first construction ([`phi_perm`], equivalently
//! [`phi_min`]), φ̂ from the p-adic pole-coefficient bounds of the second
//! construction ([`phi_hat`]), and their pointwise maximum [`phi_tilde`],
//! which is sound for the main family because both constructions produce
//! the same numbers up to sign.

use crate::error::{Error, Result};
use crate::exact::{int, lcm_range, primes_upto, rat, to_int_exact, Int, Rat};
use crate::tale_one::{Family, LinForm};
use crate::tale_two::{THAT_ALPHA, THAT_BETA};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A 1-periodic integer-valued step function on [0, 1) with rational
/// breakpoints: value `values[i]` on [breaks[i], breaks[i+1]), the last
/// piece ending at 1. Always stored normalized: breaks[0] = 0, breakpoints
/// strictly ascending inside [0, 1), adjacent values distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFn {
    breaks: Vec<Rat>,
    values: Vec<i64>,
}

impl StepFn {
    pub fn new(breaks: Vec<Rat>, values: Vec<i64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(Error::Validation(format!(
                "step function needs equally many breakpoints and values (≥ 1), got {} and {}",
                breaks.len(),
                values.len()
            )));
        }
        if !breaks[0].is_zero() {
            return Err(Error::Validation(format!(
                "first breakpoint must be 0, got {}",
                breaks[0]
            )));
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!(
                    "breakpoints must ascend strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if *breaks.last().unwrap() >= Rat::one() {
            return Err(Error::Validation(format!(
                "breakpoints must stay below 1, got {}",
                breaks.last().unwrap()
            )));
        }
        for w in values.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Validation(
                    "adjacent pieces with equal values must be merged".into(),
                ));
            }
        }
        Ok(StepFn { breaks, values })
    }

    /// Number of constant pieces.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The pieces as (lo, hi, value) with the last hi equal to 1.
    pub fn pieces(&self) -> Vec<(Rat, Rat, i64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let hi = if i + 1 < self.len() { self.breaks[i + 1].clone() } else { Rat::one() };
            out.push((self.breaks[i].clone(), hi, self.values[i]));
        }
        out
    }

    /// Value at x, reduced into [0, 1) first.
    pub fn eval(&self, x: &Rat) -> i64 {
        let f = x - x.floor();
        // breaks[0] = 0 ≤ f, so the partition point is ≥ 1.
        let idx = self.breaks.partition_point(|b| *b <= f) - 1;
        self.values[idx]
    }
}

fn ifloor(x: &Rat) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("step-function floors stay within i64")
}

fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            if j == i {
                continue;
            }
            for k in 0..4 {
                if k == i || k == j {
                    continue;
                }
                let l = 6 - i - j - k;
                out.push([i, j, k, l]);
            }
        }
    }
    out
}

/// Permutation-symmetry exponent of a first-construction family:
///
/// ```text
/// φ(x) = max over reorderings α′ of α of
///        ⌊(β4−α4)x⌋ − ⌊(β4−α4′)x⌋ − Σ_{j≤3} (⌊(αj−βj)x⌋ − ⌊(αj′−βj)x⌋)
/// ```
///
/// x is reduced mod 1 first. φ(n/p) is the guaranteed power of p dividing
/// q_n (and clearing p_n's denominator) for primes p with p² > γ0·n.
pub fn phi_perm(f: &Family, x: &Rat) -> i64 {
    let x = frac(x);
    let al = f.alpha;
    let be = f.beta;
    // blk[s][j] = ⌊(α_s−β_j)x⌋, lead[s] = ⌊(β4−α_s)x⌋; the permutation
    // loop is then pure integer bookkeeping.
    let mut blk = [[0i64; 3]; 4];
    let mut lead = [0i64; 4];
    for s in 0..4 {
        for j in 0..3 {
            blk[s][j] = ifloor(&(rat(al[s] - be[j], 1) * &x));
        }
        lead[s] = ifloor(&(rat(be[3] - al[s], 1) * &x));
    }
    let mut best = i64::MIN;
    for sigma in permutations4() {
        let v = lead[3] - lead[sigma[3]]
            - (0..3).map(|j| blk[j][j] - blk[sigma[j]][j]).sum::<i64>();
        best = best.max(v);
    }
    best
}

/// The same exponent computed as a minimum over a shift y instead of a
/// maximum over permutations:
///
/// ```text
/// φ(x) = min over y ∈ [0,1) of
///        Σ_{j≤3} (⌊y−βjx⌋ − ⌊y−αjx⌋ − ⌊(αj−βj)x⌋)
///        + ⌊(β4−α4)x⌋ − ⌊β4x−y⌋ − ⌊y−α4x⌋
/// ```
///
/// Every term is piecewise constant in y and the only downward jumps land
/// exactly on y ∈ {frac(αj·x)} (the expression is right-continuous there),
/// so the minimum over [0, 1) is attained on the finite candidate set of
/// all offset fractional parts together with 0.
pub fn phi_min(f: &Family, x: &Rat) -> i64 {
    let x = frac(x);
    let ax: Vec<Rat> = f.alpha.iter().map(|s| rat(*s, 1) * &x).collect();
    let bx: Vec<Rat> = f.beta.iter().map(|s| rat(*s, 1) * &x).collect();
    let mut cands: Vec<Rat> = vec![Rat::zero()];
    for off in ax.iter().chain(bx.iter()) {
        cands.push(frac(off));
    }
    let fixed: i64 = ifloor(&(&bx[3] - &ax[3]))
        - (0..3).map(|j| ifloor(&(&ax[j] - &bx[j]))).sum::<i64>();
    let mut best = i64::MAX;
    for y in &cands {
        let mut v = fixed;
        for j in 0..3 {
            v += ifloor(&(y - &bx[j])) - ifloor(&(y - &ax[j]));
        }
        v -= ifloor(&(&bx[3] - y));
        v -= ifloor(&(y - &ax[3]));
        best = best.min(v);
    }
    best
}

/// Pole-coefficient exponent of a second-construction family with slopes
/// α̂, β̂ (the doubled block is the 0-th entry):
///
/// ```text
/// φ̂(x) = min over y ∈ [0,1) of
///        ⌊2y−β̂0x⌋ − ⌊2y−α̂0x⌋ − ⌊(α̂0−β̂0)x⌋
///        + ⌊y−β̂1x⌋ − ⌊y−α̂1x⌋ − ⌊(α̂1−β̂1)x⌋
///        + Σ_{j=2,3} (⌊(β̂j−α̂j)x⌋ − ⌊β̂jx−y⌋ − ⌊y−α̂jx⌋)
/// ```
///
/// The candidate set gains the half-shifted fractional parts frac(c/2),
/// frac(c/2 + 1/2) coming from the ⌊2y − c⌋ terms.
pub fn phi_hat(alpha: &[i64; 4], beta: &[i64; 4], x: &Rat) -> i64 {
    let x = frac(x);
    let ax: Vec<Rat> = alpha.iter().map(|s| rat(*s, 1) * &x).collect();
    let bx: Vec<Rat> = beta.iter().map(|s| rat(*s, 1) * &x).collect();
    let half = rat(1, 2);
    let mut cands: Vec<Rat> = vec![Rat::zero()];
    for off in [&ax[0], &bx[0]] {
        let h = off / rat(2, 1);
        cands.push(frac(&h));
        cands.push(frac(&(h + &half)));
    }
    for off in ax[1..].iter().chain(bx[1..].iter()) {
        cands.push(frac(off));
    }
    let fixed: i64 = ifloor(&(&bx[2] - &ax[2])) + ifloor(&(&bx[3] - &ax[3]))
        - ifloor(&(&ax[0] - &bx[0]))
        - ifloor(&(&ax[1] - &bx[1]));
    let mut best = i64::MAX;
    for y in &cands {
        let y2 = rat(2, 1) * y;
        let mut v = fixed;
        v += ifloor(&(&y2 - &bx[0])) - ifloor(&(&y2 - &ax[0]));
        v += ifloor(&(y - &bx[1])) - ifloor(&(y - &ax[1]));
        for j in 2..4 {
            v -= ifloor(&(&bx[j] - y));
            v -= ifloor(&(y - &ax[j]));
        }
        best = best.min(v);
    }
    best
}

/// Pointwise maximum of the main family's φ and the preset φ̂. Because the
/// two constructions yield identical forms up to sign, both exponents apply
/// to the same q_n, p_n simultaneously, and neither dominates the other
/// (φ < φ̂ on [1/5, 2/9) ∪ [3/7, 4/9) ∪ [6/7, 7/8)).
pub fn phi_tilde(x: &Rat) -> i64 {
    phi_perm(&crate::tale_one::PEX, x).max(phi_hat(&THAT_ALPHA, &THAT_BETA, x))
}

fn table_at<F: Fn(&Rat) -> i64>(phi: &F, bound: u32) -> StepFn {
    // All reduced fractions with denominator ≤ bound, ascending. The true
    // breakpoints have denominators ≤ bound by precondition, so between
    // consecutive grid points the function cannot change.
    let mut pts: Vec<(u32, u32)> = vec![(0, 1)];
    for den in 2..=bound {
        for num in 1..den {
            if num.gcd(&den) == 1 {
                pts.push((num, den));
            }
        }
    }
    pts.sort_by(|a, b| (u64::from(a.0) * u64::from(b.1)).cmp(&(u64::from(b.0) * u64::from(a.1))));
    let mut breaks = Vec::new();
    let mut values: Vec<i64> = Vec::new();
    for (num, den) in pts {
        let x = rat(i64::from(num), i64::from(den));
        let v = phi(&x);
        if values.last() != Some(&v) {
            breaks.push(x);
            values.push(v);
        }
    }
    StepFn { breaks, values }
}

/// Recovers the exact breakpoint/value table of a step function whose
/// breakpoints have denominator ≤ `denominator_bound` by evaluating it on
/// every reduced fraction up to that denominator and merging equal runs.
/// The table is recomputed at twice the bound; any difference means the
/// bound was too small and is reported as a resolution error.
pub fn step_table<F: Fn(&Rat) -> i64>(phi: F, denominator_bound: u32) -> Result<StepFn> {
    if denominator_bound == 0 {
        return Err(Error::Domain("denominator bound must be ≥ 1".into()));
    }
    let coarse = table_at(&phi, denominator_bound);
    let fine = table_at(&phi, 2 * denominator_bound);
    if coarse != fine {
        return Err(Error::Resolution(format!(
            "step table changes between denominator bounds {} and {}: the function has finer structure than the requested resolution",
            denominator_bound,
            2 * denominator_bound
        )));
    }
    Ok(coarse)
}

/// Prime range over which a Φ product runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeRange {
    /// √(γ0·n) < p ≤ γ2·n, i.e. p² > γ0·n.
    AboveSqrt,
    /// 2 ≤ p ≤ γ2·n.
    FromTwo,
}

/// Denominator data of a family: D_{γ1·n}·D_{γ2·n} clears p_n, and the
/// arithmetic correction Φ_n runs over the `range` rule's primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveSpec {
    gamma0: i64,
    gamma1: i64,
    gamma2: i64,
    range: PrimeRange,
}

impl SieveSpec {
    pub fn new(gamma0: i64, gamma1: i64, gamma2: i64, range: PrimeRange) -> Result<Self> {
        if gamma1 < gamma2 {
            return Err(Error::Validation(format!(
                "denominator exponents must be ordered γ1 ≥ γ2, got γ1 = {gamma1}, γ2 = {gamma2}"
            )));
        }
        if gamma0 < 0 || gamma2 < 1 {
            return Err(Error::Validation(format!(
                "need γ0 ≥ 0 and γ2 ≥ 1, got γ0 = {gamma0}, γ2 = {gamma2}"
            )));
        }
        Ok(SieveSpec { gamma0, gamma1, gamma2, range })
    }

    /// γ0 = max |αj − βk|, γ1 ≥ γ2 the two denominator slopes, primes
    /// taken above √(γ0·n).
    pub fn for_family(f: &Family) -> Self {
        let mut gamma0 = 0;
        for aj in f.alpha {
            for bk in f.beta {
                gamma0 = gamma0.max((aj - bk).abs());
            }
        }
        // Denominator slopes: c1 = max(αj−βj, β4−α2*), c2 = max(Σα−Σβ, β4−α2*),
        // read off the affine parameter forms.
        let mut srt = f.alpha;
        srt.sort_unstable();
        let a2s = srt[1];
        let block = (0..3).map(|j| f.alpha[j] - f.beta[j]).max().unwrap();
        let c1 = block.max(f.beta[3] - a2s);
        let c2 = (f.alpha.iter().sum::<i64>() - f.beta.iter().sum::<i64>()).max(f.beta[3] - a2s);
        let (g1, g2) = if c1 >= c2 { (c1, c2) } else { (c2, c1) };
        SieveSpec { gamma0, gamma1: g1, gamma2: g2, range: PrimeRange::AboveSqrt }
    }

    /// Range preset for the second-construction products and the combined
    /// correction: D_{9n}·D_{8n} denominators (valid because the forms
    /// coincide with the main family's up to sign), all primes up to 8n.
    pub fn preset_hat() -> Self {
        SieveSpec { gamma0: 0, gamma1: 9, gamma2: 8, range: PrimeRange::FromTwo }
    }

    pub fn gamma0(&self) -> i64 {
        self.gamma0
    }

    pub fn gamma1(&self) -> i64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> i64 {
        self.gamma2
    }

    pub fn range(&self) -> PrimeRange {
        self.range
    }

    /// The primes the Φ product runs over for index n, ascending.
    pub fn primes(&self, n: i64) -> Vec<u64> {
        let hi = self.gamma2 * n;
        if hi < 2 {
            return Vec::new();
        }
        let all = primes_upto(hi as u64);
        match self.range {
            PrimeRange::FromTwo => all,
            PrimeRange::AboveSqrt => {
                let cut = (self.gamma0 * n) as u64;
                all.into_iter().filter(|&p| p * p > cut).collect()
            }
        }
    }
}

/// Φ_n = ∏ p^{φ(n/p)} over the primes the range selects, exactly. Empty
/// ranges give 1.
pub fn big_phi(n: i64, phi: &StepFn, spec: &SieveSpec) -> Result<Int> {
    if n < 1 {
        return Err(Error::Domain(format!("sieve index n must be ≥ 1, got {n}")));
    }
    let mut out = Int::one();
    for p in spec.primes(n) {
        let e = phi.eval(&rat(n, p as i64));
        if e < 0 {
            return Err(Error::Domain(format!(
                "negative exponent {e} at prime {p}: Φ would not be an integer"
            )));
        }
        if e > 0 {
            out *= int(p as i64).pow(e as u32);
        }
    }
    Ok(out)
}

/// Outcome of the exact divisibility check underlying the corrected
/// denominators: Φ⁻¹·q ∈ ℤ and Φ⁻¹·D_{c1}·D_{c2}·p ∈ ℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub n: i64,
    pub phi: Int,
    pub d_subscripts: (i64, i64),
    pub q_divisible: bool,
    pub p_cleared: bool,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.q_divisible && self.p_cleared
    }
}

/// Checks the corrected inclusions for one form: whether Φ divides q and
/// whether Φ divides D_{c1}·D_{c2}·p (which in particular requires the
/// product to be an integer). Failures are reported, not raised: they
/// falsify the arithmetic claim rather than the computation.
pub fn inclusion_check(
    n: i64,
    form: &LinForm,
    phi: &Int,
    d_subscripts: (i64, i64),
) -> Result<InclusionReport> {
    if phi.is_zero() || phi.is_negative() {
        return Err(Error::Domain(format!("correction Φ must be ≥ 1, got {phi}")));
    }
    if d_subscripts.0 < 0 || d_subscripts.1 < 0 {
        return Err(Error::Domain(format!(
            "lcm subscripts must be ≥ 0, got ({}, {})",
            d_subscripts.0, d_subscripts.1
        )));
    }
    let q_divisible = (&form.q % phi).is_zero();
    let cleared =
        Rat::from_integer(lcm_range(d_subscripts.0 as u64) * lcm_range(d_subscripts.1 as u64))
            * &form.p;
    let p_cleared = match to_int_exact(&cleared, "denominator-cleared p") {
        Ok(v) => (v % phi).is_zero(),
        Err(_) => false,
    };
    Ok(InclusionReport { n, phi: phi.clone(), d_subscripts, q_divisible, p_cleared })
}
