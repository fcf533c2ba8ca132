//! Polynomial gcd over the integers by images modulo word-sized primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::OnceLock;

use super::poly::Poly;
use super::rat::from_big;

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn primes() -> impl Iterator<Item = u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let head = CACHE.get_or_init(|| (1u64 << 30..1u64 << 31).rev().filter(|&p| is_prime(p)).take(256).collect());
    let last = *head.last().unwrap();
    head.iter().copied().chain((1u64 << 30..last).rev().filter(|&p| is_prime(p)))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn image(c: &[BigInt], p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    c.iter().map(|x| x.mod_floor(&m).try_into().unwrap()).collect()
}

/// Monic gcd of two polynomials over `ℤ/p`, coefficients ascending.
fn gcd_mod(mut u: Vec<u64>, mut v: Vec<u64>, p: u64) -> Vec<u64> {
    while !v.is_empty() {
        let inv = inv_mod(*v.last().unwrap(), p);
        while u.len() >= v.len() {
            let c = u.last().unwrap() * inv % p;
            let off = u.len() - v.len();
            for (j, vc) in v.iter().enumerate() {
                u[off + j] = (u[off + j] + p - c * vc % p) % p;
            }
            while u.last() == Some(&0) {
                u.pop();
            }
        }
        std::mem::swap(&mut u, &mut v);
    }
    let inv = inv_mod(*u.last().unwrap(), p);
    u.iter().map(|c| c * inv % p).collect()
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    if c * 2 > *m {
        c - m
    } else {
        c.clone()
    }
}

/// Exact division test in `ℤ[x]` for a primitive divisor.
fn divides(d: &[BigInt], a: &[BigInt]) -> bool {
    let mut rem = a.to_vec();
    let lc = d.last().unwrap();
    while rem.len() >= d.len() {
        let (q, r) = rem.last().unwrap().div_rem(lc);
        if !r.is_zero() {
            return false;
        }
        let off = rem.len() - d.len();
        for (j, dc) in d.iter().enumerate() {
            rem[off + j] -= &q * dc;
        }
        rem.pop();
    }
    rem.iter().all(|c| c.is_zero())
}

/// Monic gcd of primitive integer polynomials of positive degree.
pub(super) fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    let ai: Vec<BigInt> = a.coeffs().iter().map(|c| c.to_integer()).collect();
    let bi: Vec<BigInt> = b.coeffs().iter().map(|c| c.to_integer()).collect();
    let (la, lb) = (ai.last().unwrap(), bi.last().unwrap());
    let gamma = la.gcd(lb);
    let mut deg = ai.len().min(bi.len());
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    for p in primes() {
        let pb = BigInt::from(p);
        if (la % &pb).is_zero() || (lb % &pb).is_zero() {
            continue;
        }
        let g = gcd_mod(image(&ai, p), image(&bi, p), p);
        let d = g.len() - 1;
        if d == 0 {
            return Poly::one();
        }
        if d > deg {
            continue;
        }
        if d < deg {
            deg = d;
            acc = vec![BigInt::zero(); d + 1];
            modulus = BigInt::one();
        }
        let gm: u64 = gamma.mod_floor(&pb).try_into().unwrap();
        let minv: u64 = inv_mod(modulus.mod_floor(&pb).try_into().unwrap(), p);
        let mut changed = false;
        for (c, r) in acc.iter_mut().zip(&g) {
            let r = r * gm % p;
            let cm: u64 = c.mod_floor(&pb).try_into().unwrap();
            let t = (r + p - cm) % p * minv % p;
            if t != 0 {
                changed = true;
                *c += &modulus * t;
            }
        }
        modulus *= &pb;
        for c in acc.iter_mut() {
            *c = symmetric(&c.mod_floor(&modulus), &modulus);
        }
        if changed {
            continue;
        }
        let cand = Poly::new(acc.iter().cloned().map(from_big).collect()).primitive().1;
        let ci: Vec<BigInt> = cand.coeffs().iter().map(|c| c.to_integer()).collect();
        if divides(&ci, &ai) && divides(&ci, &bi) {
            return cand.monic();
        }
    }
    unreachable!("prime supply exhausted")
}
