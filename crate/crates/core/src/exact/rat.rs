use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. Always stored reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(v: BigInt) -> Rat {
    Rat::from_integer(v)
}

/// `x` falling `n` times: x (x-1) ... (x-n+1). The empty product is 1.
pub fn falling_power(x: &Rat, n: u64) -> Rat {
    let mut acc = Rat::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        if acc.is_zero() {
            return acc;
        }
        t -= Rat::one();
    }
    acc
}

pub fn pow_i(x: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow::pow(x.clone(), e as usize)
    } else {
        num_traits::pow::pow(x.recip(), (-e) as usize)
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Returns the value as an integer when the denominator is 1.
pub fn as_integer(x: &Rat) -> Option<BigInt> {
    if x.denom().is_one() {
        Some(x.numer().clone())
    } else {
        None
    }
}

/// Returns `Some(k)` when `x` is a nonnegative integer that fits in `u64`.
pub fn as_natural(x: &Rat) -> Option<u64> {
    let i = as_integer(x)?;
    if i.is_negative() {
        return None;
    }
    u64::try_from(i).ok()
}

pub fn as_i64(x: &Rat) -> Option<i64> {
    as_integer(x).and_then(|i| i64::try_from(i).ok())
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

/// Prints `p/q` or `p`; this is also the literal syntax accepted by the parsers.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Divisors of |v| (v != 0), ascending. Trial division; fine for the sizes
/// that appear as leading/trailing coefficients of recurrence coefficients.
pub(crate) fn divisors(v: &BigInt) -> Vec<BigInt> {
    let mut n = v.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    let mut steps: u64 = 0;
    while &p * &p <= n && steps < 20_000_000 {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
        steps += 1;
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}
