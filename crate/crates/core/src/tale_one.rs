//! First family of rational approximations to ζ(2).
//!
//! The generating object is the rational function
//!
//! ```text
//!          (t+b1)…(t+a1−1)   (t+b2)…(t+a2−1)   (t+b3)…(t+a3−1)   (b4−a4−1)!
//! R(t)  =  ——————————————— · ——————————————— · ——————————————— · ———————————————
//!             (a1−b1)!           (a2−b2)!          (a3−b3)!      (t+a4)…(t+b4−1)
//! ```
//!
//! with integer parameters a = (a1..a4), b = (b1..b4) subject to
//! b1,b2,b3 ≤ every a and every a < b4. Writing R as a degree-d polynomial
//! plus simple poles, its partial-fraction data assemble into q·ζ(2) − p
//! with q an integer and p a rational whose denominator divides
//! lcm(1..c1)·lcm(1..c2). Two concrete one-parameter families are exported
//! as [`PEX`] and [`REM3`].

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, harmonic_power_sum, int, lcm_range, Int, Rat};
use crate::factors::FactorList;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Validated parameter tuple (a; b) for the first construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    a: [i64; 4],
    b: [i64; 4],
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(a1..a4; b1..b4) = ({},{},{},{}; {},{},{},{})",
            self.a[0], self.a[1], self.a[2], self.a[3], self.b[0], self.b[1], self.b[2], self.b[3]
        )
    }
}

/// One member of the family: the integer q, the rational p, and the
/// denominator exponents, so that q·ζ(2) − p is the small linear form.
///
/// Guarantees established at construction: `q` is an integer and
/// `lcm(1..c1)·lcm(1..c2)·p` is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinForm {
    pub q: Int,
    pub p: Rat,
    pub c1: i64,
    pub c2: i64,
    /// Degree of the polynomial part (−1 when it vanishes).
    pub d: i64,
}

impl LinForm {
    /// q·z − p evaluated at a supplied approximation z of ζ(2).
    pub fn residual(&self, z: &Rat) -> Rat {
        Rat::from_integer(self.q.clone()) * z - &self.p
    }
}

impl Params {
    /// Strict validation: the classical condition plus d ≥ 0.
    pub fn new(a: [i64; 4], b: [i64; 4]) -> Result<Self> {
        let p = Params::new_relaxed(a, b)?;
        if p.d() < 0 {
            return Err(Error::Validation(format!(
                "degree d = {} is negative; the parameter sums need Σa ≥ Σb",
                p.d()
            )));
        }
        Ok(p)
    }

    /// Same ordering constraints but d = −1 is allowed (the polynomial part
    /// is then empty). Family members at n = 0 live in this relaxed set.
    pub fn new_relaxed(a: [i64; 4], b: [i64; 4]) -> Result<Self> {
        for (j, &bj) in b.iter().take(3).enumerate() {
            for (i, &ai) in a.iter().enumerate() {
                if bj > ai {
                    return Err(Error::Validation(format!(
                        "need b{} ≤ a{}, got {} > {}",
                        j + 1,
                        i + 1,
                        bj,
                        ai
                    )));
                }
            }
        }
        for (i, &ai) in a.iter().enumerate() {
            if ai >= b[3] {
                return Err(Error::Validation(format!(
                    "need a{} < b4, got {} ≥ {}",
                    i + 1,
                    ai,
                    b[3]
                )));
            }
        }
        let p = Params { a, b };
        if p.d() < -1 {
            return Err(Error::Validation(format!(
                "degree d = {} is below −1; parameters are too unbalanced",
                p.d()
            )));
        }
        Ok(p)
    }

    pub fn a(&self) -> [i64; 4] {
        self.a
    }

    pub fn b(&self) -> [i64; 4] {
        self.b
    }

    /// Degree of the polynomial part of R.
    pub fn d(&self) -> i64 {
        self.a.iter().sum::<i64>() - self.b.iter().sum::<i64>()
    }

    /// The a-parameters in increasing order.
    pub fn a_star(&self) -> [i64; 4] {
        let mut s = self.a;
        s.sort_unstable();
        s
    }

    /// Π(a, b) = (b4−a4−1)! / ((a1−b1)!·(a2−b2)!·(a3−b3)!), the factor by
    /// which the normalized form differs from (q, p); it depends on how the
    /// a's are paired with the b's while q/Π and p/Π do not.
    pub fn prefactor(&self) -> Rat {
        let mut den = Int::one();
        for j in 0..3 {
            den *= factorial(self.a[j] - self.b[j]);
        }
        Rat::new(factorial(self.b[3] - self.a[3] - 1), den)
    }

    /// R as an explicit factored rational function.
    pub fn rfun(&self) -> FactorList {
        let mut f = FactorList::new(Rat::one());
        let mut coeff = Rat::one();
        for j in 0..3 {
            f.rising_block(self.b[j], self.a[j], 1);
            coeff /= Rat::from_integer(factorial(self.a[j] - self.b[j]));
        }
        f.rising_block(self.a[3], self.b[3], -1);
        coeff *= Rat::from_integer(factorial(self.b[3] - self.a[3] - 1));
        f.mul_coeff(&coeff);
        f
    }

    /// Residues of R at t = −k: returns (k0, coeffs) with coeffs[i] the
    /// residue at k = k0 + i, for k0 = max(a) up to b4 − 1. Below k0 every
    /// residue vanishes because the numerator has a root there.
    pub fn pole_coeffs(&self) -> (i64, Vec<Int>) {
        let k0 = self.a_star()[3];
        let d = self.d();
        let b4 = self.b[3];
        let mut out = Vec::with_capacity((b4 - k0).max(0) as usize);
        for k in k0..b4 {
            let mut c = binomial(k - self.b[0], k - self.a[0])
                * binomial(k - self.b[1], k - self.a[1])
                * binomial(k - self.b[2], k - self.a[2])
                * binomial(b4 - self.a[3] - 1, k - self.a[3]);
            if (d + b4 + k).rem_euclid(2) == 1 {
                c = -c;
            }
            out.push(c);
        }
        (k0, out)
    }

    /// Coefficients A_0..A_d of the polynomial part of R in the shifted
    /// binomial basis: with P = R − Σ_k C_k/(t+k) and G(s) = P(s − a2*),
    /// A_ℓ is the ℓ-th forward difference of G at s = 1, so that
    /// G(s) = Σ_ℓ A_ℓ·C(s−1, ℓ).
    ///
    /// All sample points s = 1..d+1 sit strictly right of every pole since
    /// a2* ≤ a4* (the poles of R start at t = −max(a)).
    pub fn poly_part(&self) -> Result<Vec<Rat>> {
        let d = self.d();
        if d < 0 {
            return Ok(Vec::new());
        }
        let shift = self.a_star()[1];
        let r = self.rfun();
        let (k0, cks) = self.pole_coeffs();
        let npts = (d + 1) as usize;
        let mut vals = Vec::with_capacity(npts);
        for s in 1..=(d + 1) {
            let ti = s - shift;
            let t = Rat::from_integer(int(ti));
            let rv = r.eval(&t)?;
            // Σ C_k/(t+k) accumulated over one denominator, reduced once.
            let mut num = Int::zero();
            let mut den = Int::one();
            for (i, c) in cks.iter().enumerate() {
                let k = k0 + i as i64;
                let tk = int(ti + k);
                num = num * &tk + c * &den;
                den *= tk;
            }
            vals.push(rv - Rat::new(num, den));
        }
        // integer forward-difference table over a common denominator
        let mut den = Int::one();
        for v in &vals {
            den = den.lcm(v.denom());
        }
        let mut row: Vec<Int> = vals.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        let mut out = Vec::with_capacity(npts);
        out.push(Rat::new(row[0].clone(), den.clone()));
        for _ in 1..npts {
            for i in 0..row.len() - 1 {
                row[i] = &row[i + 1] - &row[i];
            }
            row.pop();
            out.push(Rat::new(row[0].clone(), den.clone()));
        }
        Ok(out)
    }

    /// Denominator exponent pair: lcm(1..c1)·lcm(1..c2) clears p.
    pub fn c_pair(&self) -> (i64, i64) {
        let astar = self.a_star();
        let tail = self.b[3] - astar[1] - 1;
        let c1 = (0..3)
            .map(|j| self.a[j] - self.b[j])
            .max()
            .unwrap()
            .max(tail);
        let c2 = (self.d() + 1).max(tail);
        (c1, c2)
    }

    /// Bound for the polynomial-part coefficients alone:
    /// lcm(1..c)·A_ℓ is an integer for c = max_j (a_j − b_j), j ≤ 3.
    pub fn c_poly(&self) -> i64 {
        (0..3).map(|j| self.a[j] - self.b[j]).max().unwrap()
    }

    /// Assembles the linear form q·ζ(2) − p from the partial-fraction data.
    pub fn linear_form(&self) -> Result<LinForm> {
        let d = self.d();
        let sign = if d.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let shift = self.a_star()[1];
        let (k0, cks) = self.pole_coeffs();

        let mut q = Int::zero();
        let mut h_sum = Rat::zero();
        // running H2(k − shift), advanced incrementally
        let mut h2 = harmonic_power_sum(k0 - shift, 2)?;
        for (i, c) in cks.iter().enumerate() {
            let k = k0 + i as i64;
            if i > 0 {
                let m = int(k - shift);
                h2 += Rat::new(Int::one(), &m * &m);
            }
            q += c;
            h_sum += Rat::from_integer(c.clone()) * &h2;
        }
        q *= int(sign);

        let adiff = self.poly_part()?;
        let mut a_sum = Rat::zero();
        for (ell, al) in adiff.iter().enumerate() {
            let s = if ell % 2 == 0 { 1i64 } else { -1 };
            a_sum += Rat::new(int(s), int(ell as i64 + 1)) * al;
        }
        let p = Rat::from_integer(int(sign)) * (h_sum - a_sum);

        let (c1, c2) = self.c_pair();
        let clear = lcm_range(c1.max(0) as u64) * lcm_range(c2.max(0) as u64);
        if !(&clear % p.denom()).is_zero() {
            return Err(Error::Internal(format!(
                "denominator of p does not divide lcm(1..{c1})·lcm(1..{c2}) at {self}"
            )));
        }
        Ok(LinForm { q, p, c1, c2, d })
    }
}

/// Evaluates the polynomial part at any t from its difference coefficients:
/// P(t) = Σ_ℓ A_ℓ·C(t+shift−1, ℓ) with the generalized binomial.
pub fn poly_part_eval(coeffs: &[Rat], shift: i64, t: &Rat) -> Rat {
    let base = t + Rat::from_integer(int(shift - 1));
    let mut acc = Rat::zero();
    let mut basis = Rat::one(); // C(base, ℓ), built up incrementally
    for (ell, al) in coeffs.iter().enumerate() {
        if ell > 0 {
            basis *= (&base - Rat::from_integer(int(ell as i64 - 1)))
                / Rat::from_integer(int(ell as i64));
        }
        acc += al * &basis;
    }
    acc
}

/// Cross-multiplied invariance of the normalized form under reshuffling the
/// a-parameters: q(σa, b)·Π(a, b) must equal q(a, b)·Π(σa, b), and the same
/// for p. Returns whether both identities hold.
pub fn permutation_check(params: &Params, order: &[usize; 4]) -> Result<bool> {
    let mut sorted = *order;
    sorted.sort_unstable();
    if sorted != [0, 1, 2, 3] {
        return Err(Error::Domain(format!("{order:?} is not a permutation of 0..4")));
    }
    let mut a2 = [0i64; 4];
    for (i, &o) in order.iter().enumerate() {
        a2[i] = params.a()[o];
    }
    let permuted = Params::new_relaxed(a2, params.b())?;
    let f1 = params.linear_form()?;
    let f2 = permuted.linear_form()?;
    let pi1 = params.prefactor();
    let pi2 = permuted.prefactor();
    let ok_q = Rat::from_integer(f2.q.clone()) * &pi1 == Rat::from_integer(f1.q.clone()) * &pi2;
    let ok_p = &f2.p * &pi1 == &f1.p * &pi2;
    Ok(ok_q && ok_p)
}

/// One-parameter family a_j = α_j·n + 1, b_j = β_j·n + 1 (j ≤ 3),
/// b4 = β4·n + 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Family {
    pub name: &'static str,
    pub alpha: [i64; 4],
    pub beta: [i64; 4],
}

/// Main family: the one driving the measure bound 5.09541178.
pub const PEX: Family = Family { name: "pex", alpha: [7, 6, 5, 8], beta: [0, 1, 2, 14] };

/// Comparison family with slightly weaker constants (bound 5.20514736).
pub const REM3: Family = Family { name: "rem3", alpha: [4, 5, 6, 7], beta: [0, 1, 2, 12] };

impl Family {
    pub fn params(&self, n: i64) -> Result<Params> {
        if n < 0 {
            return Err(Error::Domain(format!("family index n must be ≥ 0, got {n}")));
        }
        let a = [
            self.alpha[0] * n + 1,
            self.alpha[1] * n + 1,
            self.alpha[2] * n + 1,
            self.alpha[3] * n + 1,
        ];
        let b = [
            self.beta[0] * n + 1,
            self.beta[1] * n + 1,
            self.beta[2] * n + 1,
            self.beta[3] * n + 2,
        ];
        Params::new_relaxed(a, b)
    }

    pub fn linear_form(&self, n: i64) -> Result<LinForm> {
        self.params(n)?.linear_form()
    }
}

pub fn family_by_name(name: &str) -> Result<Family> {
    match name {
        "pex" => Ok(PEX),
        "rem3" => Ok(REM3),
        _ => Err(Error::Domain(format!("unknown family '{name}' (expected pex or rem3)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn toy() -> Params {
        // R(t) = t³/(t+1): the smallest fully hand-checkable case
        Params::new([1, 1, 1, 1], [0, 0, 0, 2]).unwrap()
    }

    #[test]
    fn toy_partial_fraction_data() {
        let p = toy();
        assert_eq!(p.d(), 2);
        let (k0, c) = p.pole_coeffs();
        assert_eq!(k0, 1);
        assert_eq!(c, vec![int(-1)]);
        // P(t) = t² − t + 1 in the shifted binomial basis at a2* = 1
        let a = p.poly_part().unwrap();
        assert_eq!(a, vec![rat(1, 1), rat(0, 1), rat(2, 1)]);
        assert_eq!(poly_part_eval(&a, 1, &rat(5, 1)), rat(21, 1));
        assert_eq!(poly_part_eval(&a, 1, &rat(1, 2)), rat(3, 4));
    }

    #[test]
    fn toy_linear_form_by_hand() {
        let f = toy().linear_form().unwrap();
        assert_eq!(f.q, int(-1));
        assert_eq!(f.p, rat(-5, 3));
        assert_eq!((f.c1, f.c2), (1, 3));
        // q·ζ(2) − p = 5/3 − ζ(2) ≈ 0.0217326 > 0
        let z = rat(1644934, 1000000);
        assert!(f.residual(&z) > Rat::zero());
        assert!(f.residual(&z) < rat(22, 1000));
    }

    #[test]
    fn base_case_of_each_family() {
        for fam in [PEX, REM3] {
            let p = fam.params(0).unwrap();
            assert_eq!(p.a(), [1, 1, 1, 1]);
            assert_eq!(p.d(), -1);
            let f = p.linear_form().unwrap();
            assert_eq!(f.q, int(-1), "{}", fam.name);
            assert_eq!(f.p, Rat::zero(), "{}", fam.name);
        }
    }

    #[test]
    fn family_parameter_formulas() {
        let p = PEX.params(2).unwrap();
        assert_eq!(p.a(), [15, 13, 11, 17]);
        assert_eq!(p.b(), [1, 3, 5, 30]);
        let r = REM3.params(3).unwrap();
        assert_eq!(r.a(), [13, 16, 19, 22]);
        assert_eq!(r.b(), [1, 4, 7, 38]);
        assert!(PEX.params(-1).is_err());
    }

    #[test]
    fn pex_n1_charge_frozen() {
        // Σ over k = 9..15 of signed binomial products, computed by hand
        let f = PEX.linear_form(1).unwrap();
        assert_eq!(f.q, int(-157454400));
        assert_eq!((f.c1, f.c2), (8, 9));
        assert_eq!(f.d, 8);
    }

    #[test]
    fn residues_match_binomial_formula() {
        for params in [PEX.params(1).unwrap(), REM3.params(1).unwrap(), toy()] {
            let r = params.rfun();
            let (k0, cks) = params.pole_coeffs();
            for (i, c) in cks.iter().enumerate() {
                let k = k0 + i as i64;
                let (m, g) = r.eval_parts(&rat(-k, 1));
                assert_eq!(m, -1, "simple pole expected at t = −{k}");
                assert_eq!(g, Rat::from_integer(c.clone()), "residue at t = −{k}");
            }
            // below k0 the function is finite or the residue vanishes
            let astar = params.a_star();
            for k in params.a().iter().min().copied().unwrap()..astar[3] {
                let (m, _) = r.eval_parts(&rat(-k, 1));
                assert!(m >= 0, "unexpected pole below max(a) at t = −{k}");
            }
        }
    }

    #[test]
    fn partial_fractions_reconstruct_r() {
        for params in [PEX.params(1).unwrap(), REM3.params(2).unwrap()] {
            let r = params.rfun();
            let (k0, cks) = params.pole_coeffs();
            let a = params.poly_part().unwrap();
            let shift = params.a_star()[1];
            for t in [rat(3, 2), rat(10, 7), rat(-1, 3)] {
                let mut v = poly_part_eval(&a, shift, &t);
                for (i, c) in cks.iter().enumerate() {
                    let k = k0 + i as i64;
                    v += Rat::from_integer(c.clone()) / (&t + Rat::from_integer(int(k)));
                }
                assert_eq!(v, r.eval(&t).unwrap(), "at t = {t} for {params}");
            }
        }
    }

    #[test]
    fn denominator_bounds_hold() {
        for (fam, n) in [(PEX, 1), (PEX, 2), (REM3, 1), (REM3, 2)] {
            let params = fam.params(n).unwrap();
            let f = params.linear_form().unwrap();
            let clear = lcm_range(f.c1 as u64) * lcm_range(f.c2 as u64);
            assert!((clear % f.p.denom()).is_zero());
            let c = params.c_poly();
            let dm = lcm_range(c as u64);
            for al in params.poly_part().unwrap() {
                assert!(
                    (&dm % al.denom()).is_zero(),
                    "lcm(1..{c})·A_ℓ not integral for {} at n = {n}",
                    fam.name
                );
            }
        }
    }

    #[test]
    fn slopes_of_denominator_exponents() {
        for n in [1, 2, 5] {
            let (c1, c2) = PEX.params(n).unwrap().c_pair();
            assert_eq!((c1, c2), (8 * n, 9 * n));
            let (c1, c2) = REM3.params(n).unwrap().c_pair();
            assert_eq!((c1, c2), (7 * n, 7 * n));
        }
    }

    #[test]
    fn prefactor_frozen_values() {
        assert_eq!(PEX.params(1).unwrap().prefactor(), rat(1, 5040));
        assert_eq!(REM3.params(1).unwrap().prefactor(), rat(5, 576));
        assert_eq!(toy().prefactor(), rat(1, 1));
    }

    #[test]
    fn permutation_invariance_examples() {
        let p = PEX.params(1).unwrap();
        for order in [[1, 0, 2, 3], [2, 1, 0, 3], [3, 1, 2, 0], [0, 3, 2, 1]] {
            assert!(permutation_check(&p, &order).unwrap(), "order {order:?}");
        }
        assert!(permutation_check(&p, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        // b1 exceeds one of the a's
        assert!(Params::new([3, 4, 5, 6], [4, 0, 0, 9]).is_err());
        // a4 reaches b4
        assert!(Params::new([3, 4, 5, 9], [0, 0, 0, 9]).is_err());
        // too unbalanced even for the relaxed set
        assert!(Params::new_relaxed([1, 1, 1, 1], [0, 0, 0, 6]).is_err());
        // d = −1: rejected strictly, fine relaxed
        assert!(Params::new([1, 1, 1, 1], [1, 1, 1, 2]).is_err());
        assert!(Params::new_relaxed([1, 1, 1, 1], [1, 1, 1, 2]).is_ok());
        assert!(family_by_name("nope").is_err());
    }
}
