use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::rat::{binomial, from_big, rat};
use crate::exact::{Poly, Rat, RatFun};


/// Laurent polynomial `Σ c_m x^m` over ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Laurent {
    terms: BTreeMap<i64, Rat>,
}

impl Laurent {
    pub fn from_map(mut terms: BTreeMap<i64, Rat>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Laurent { terms }
    }

    pub fn monomial(c: Rat, m: i64) -> Self {
        Laurent::from_map([(m, c)].into_iter().collect())
    }

    pub fn constant(c: Rat) -> Self {
        Laurent::monomial(c, 0)
    }

    pub fn from_poly(p: &Poly) -> Self {
        Laurent::from_map(p.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())).collect())
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_pow(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn max_pow(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// `x^k · self`
    pub fn shift_pow(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(m, c)| (m + k, c.clone())).collect() }
    }

    pub fn derivative(&self) -> Laurent {
        Laurent::from_map(self.terms.iter().map(|(m, c)| (m - 1, c * rat(*m))).collect())
    }

    /// Polynomial `x^{-min} · self` (nonnegative powers only).
    pub fn to_poly_shifted(&self) -> (i64, Poly) {
        let m = self.min_pow();
        let deg = (self.max_pow() - m) as usize;
        let mut v = vec![Rat::zero(); deg + 1];
        for (k, c) in &self.terms {
            v[(k - m) as usize] = c.clone();
        }
        (m, Poly::new(v))
    }

    pub fn to_ratfun(&self) -> RatFun {
        if self.is_zero() {
            return RatFun::zero();
        }
        let (m, p) = self.to_poly_shifted();
        if m >= 0 {
            RatFun::from(&p * &Poly::monomial(Rat::one(), m as usize))
        } else {
            RatFun::new(p, Poly::monomial(Rat::one(), (-m) as usize))
        }
    }

    /// Converts a rational function whose denominator is a power of `x`.
    pub fn from_ratfun(r: &RatFun) -> Option<Laurent> {
        let d = r.den();
        let k = d.degree().unwrap_or(0);
        if *d != Poly::monomial(Rat::one(), k) {
            return None;
        }
        Some(Laurent::from_poly(r.num()).shift_pow(-(k as i64)))
    }

    pub fn scale(&self, c: &Rat) -> Laurent {
        Laurent::from_map(self.terms.iter().map(|(m, a)| (*m, a * c)).collect())
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match m {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{m}"),
            };
            let lit = crate::exact::rat::fmt_rat(&a);
            if *m == 0 {
                s.push_str(&lit);
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{lit}*{mono}"));
            }
        }
        s
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut m = self.terms.clone();
        for (k, c) in &o.terms {
            *m.entry(*k).or_insert_with(Rat::zero) += c;
        }
        Laurent::from_map(m)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self + &(-o)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut m: BTreeMap<i64, Rat> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                *m.entry(i + j).or_insert_with(Rat::zero) += a * b;
            }
        }
        Laurent::from_map(m)
    }
}

/// Differential operator `Σ c_i(x) D^i` with Laurent polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffOp {
    terms: BTreeMap<u32, Laurent>,
}

impl DiffOp {
    pub fn from_map(mut terms: BTreeMap<u32, Laurent>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        DiffOp { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Laurent)>>(it: I) -> Self {
        let mut m: BTreeMap<u32, Laurent> = BTreeMap::new();
        for (k, c) in it {
            let e = m.entry(k).or_default();
            *e = &*e + &c;
        }
        DiffOp::from_map(m)
    }

    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn one() -> Self {
        DiffOp::coef(Laurent::constant(Rat::one()))
    }

    pub fn coef(c: Laurent) -> Self {
        DiffOp::from_terms([(0, c)])
    }

    /// `x^m`
    pub fn x_pow(m: i64) -> Self {
        DiffOp::coef(Laurent::monomial(Rat::one(), m))
    }

    /// `D^k`
    pub fn d(k: u32) -> Self {
        DiffOp::from_terms([(k, Laurent::constant(Rat::one()))])
    }

    pub fn terms(&self) -> &BTreeMap<u32, Laurent> {
        &self.terms
    }

    pub fn coeff(&self, k: u32) -> Laurent {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn lmul(&self, c: &Laurent) -> DiffOp {
        DiffOp::from_map(self.terms.iter().map(|(k, a)| (*k, c * a)).collect())
    }

    /// Dense coefficient list over ℚ(x).
    pub fn to_ratfuns(&self) -> Vec<RatFun> {
        (0..=self.order()).map(|k| self.coeff(k).to_ratfun()).collect()
    }

    /// Clears denominators of ℚ(x) coefficients and removes the polynomial
    /// content; the result differs from the input by a left unit of ℚ(x).
    pub fn from_ratfuns(cs: &[RatFun]) -> DiffOp {
        let den = cs.iter().fold(Poly::one(), |acc, c| acc.lcm(c.den()));
        let polys: Vec<Poly> = cs
            .iter()
            .map(|c| (c * &RatFun::from(den.clone())).as_poly().expect("cleared"))
            .collect();
        let g = polys.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        if g.is_zero() {
            return DiffOp::zero();
        }
        DiffOp::from_terms(
            polys
                .iter()
                .enumerate()
                .map(|(k, p)| (k as u32, Laurent::from_poly(&p.div_exact(&g).expect("content divides")))),
        )
        .canonical()
    }

    /// Minimum power of `x` moved to zero, integer-primitive, polynomial
    /// content removed, positive leading coefficient.
    pub fn canonical(&self) -> DiffOp {
        if self.is_zero() {
            return DiffOp::zero();
        }
        let m = self.terms.values().map(|c| c.min_pow()).min().unwrap();
        let shifted: Vec<Poly> = (0..=self.order())
            .map(|k| {
                let c = self.coeff(k).shift_pow(-m);
                if c.is_zero() {
                    Poly::zero()
                } else {
                    let (s, p) = c.to_poly_shifted();
                    &p * &Poly::monomial(Rat::one(), s as usize)
                }
            })
            .collect();
        let g = shifted.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        let reduced: Vec<Poly> = shifted.iter().map(|p| p.div_exact(&g).unwrap()).collect();
        let mut den = BigInt::one();
        let mut gi = BigInt::zero();
        for p in &reduced {
            for a in p.coeffs() {
                den = den.lcm(a.denom());
            }
        }
        for p in &reduced {
            for a in p.coeffs() {
                gi = gi.gcd(&(a * from_big(den.clone())).to_integer());
            }
        }
        if reduced.last().unwrap().lead().is_negative() {
            gi = -gi;
        }
        let f = Rat::new(den, gi);
        DiffOp::from_terms(reduced.iter().enumerate().map(|(k, p)| (k as u32, Laurent::from_poly(&p.scale(&f)))))
    }

    pub fn eq_up_to_unit(&self, other: &DiffOp) -> bool {
        self.canonical() == other.canonical()
    }

    /// Applies the operator to a truncated power series `Σ s_k x^k`
    /// (`s.len() = N+1`); returns coefficients of powers `lo..=hi` that are
    /// fully determined by the truncation.
    pub fn apply_series(&self, s: &[Rat]) -> (i64, Vec<Rat>) {
        let n = s.len() as i64;
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        let mut lo = i64::MAX;
        let mut hi = i64::MAX;
        for (k, c) in &self.terms {
            let k = *k as i64;
            for m in c.terms().keys() {
                lo = lo.min(*m);
                hi = hi.min(n - 1 - k + m);
            }
            for j in k..n {
                let v = &s[j as usize];
                if v.is_zero() {
                    continue;
                }
                let f = v * crate::exact::falling_power(&rat(j), k as u64);
                for (m, a) in c.terms() {
                    *out.entry(j - k + m).or_insert_with(Rat::zero) += &f * a;
                }
            }
        }
        if lo > hi {
            return (lo, Vec::new());
        }
        let vals = (lo..=hi).map(|p| out.get(&p).cloned().unwrap_or_else(Rat::zero)).collect();
        (lo, vals)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let single = self.terms.len() == 1;
        for (k, c) in self.terms.iter().rev() {
            let bare = single && *k == 0;
            let neg = !bare && c.terms().values().next_back().unwrap().is_negative();
            let a = if neg { -c } else { c.clone() };
            let body = if a.terms().len() == 1 || bare {
                a.fmt_var(var)
            } else {
                format!("({})", a.fmt_var(var))
            };
            let dpart = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            let term = match (body.as_str(), dpart.is_empty()) {
                ("1", false) => dpart,
                (_, false) => format!("{body}*{dpart}"),
                (_, true) => body,
            };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&term);
        }
        s
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp[{}]", self.fmt_var("x"))
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, o: &DiffOp) -> DiffOp {
        let mut m = self.terms.clone();
        for (k, c) in &o.terms {
            let e = m.entry(*k).or_default();
            *e = &*e + c;
        }
        DiffOp::from_map(m)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, o: &DiffOp) -> DiffOp {
        self + &(-o)
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, o: &DiffOp) -> DiffOp {
        // (a D^i)(b D^j) = a Σ_t C(i,t) b^{(t)} D^{i-t+j}
        let mut m: BTreeMap<u32, Laurent> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let mut bt = b.clone();
                for t in 0..=*i {
                    if bt.is_zero() {
                        break;
                    }
                    let c = from_big(binomial(*i as u64, t as u64));
                    let term = &(a * &bt).scale(&c);
                    let e = m.entry(i - t + j).or_default();
                    *e = &*e + term;
                    bt = bt.derivative();
                }
            }
        }
        DiffOp::from_map(m)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffOp {
            type Output = DiffOp;
            fn $m(self, o: DiffOp) -> DiffOp {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Dense operator over ℚ(x), index = power of D.
pub(crate) fn ratdiff_mul(a: &[RatFun], b: &[RatFun]) -> Vec<RatFun> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFun::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let mut bt = bj.clone();
            for t in 0..=i {
                if bt.is_zero() {
                    break;
                }
                let c = from_big(binomial(i as u64, t as u64));
                out[i - t + j] = &out[i - t + j] + &(ai * &bt).scale(&c);
                bt = bt.derivative();
            }
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_d_x() {
        let dx = &DiffOp::d(1) * &DiffOp::x_pow(1);
        let expect = &(&DiffOp::x_pow(1) * &DiffOp::d(1)) + &DiffOp::one();
        assert_eq!(dx, expect);
    }

    #[test]
    fn printing() {
        let m = DiffOp::from_terms([
            (2, Laurent::monomial(rat(1), 2)),
            (1, Laurent::from_poly(&Poly::from_ints(&[-1, 3]))),
            (0, Laurent::constant(rat(1))),
        ]);
        assert_eq!(m.to_string(), "x^2*D^2 + (3*x - 1)*D + 1");
        assert_eq!(DiffOp::x_pow(-1).to_string(), "x^-1");
    }

    #[test]
    fn apply_to_exponential_series() {
        // (D - 1) e^x = 0
        let mut s = vec![Rat::one()];
        for k in 1..10 {
            let prev = s[k - 1].clone();
            s.push(prev / rat(k as i64));
        }
        let m = &DiffOp::d(1) - &DiffOp::one();
        let (_, vals) = m.apply_series(&s);
        assert!(vals.iter().all(|v| v.is_zero()));
    }
}
