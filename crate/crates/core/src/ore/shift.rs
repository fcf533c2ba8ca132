use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{Poly, Rat, RatFun};

use super::OreError;

/// Operator `Σ p_k(n) E^k` in the skew Laurent algebra over ℚ(n),
/// with `E·f(n) = f(n+1)·E`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ShiftOp {
    terms: BTreeMap<i64, RatFun>,
}

impl ShiftOp {
    pub fn from_map(mut terms: BTreeMap<i64, RatFun>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        ShiftOp { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, RatFun)>>(it: I) -> Self {
        let mut m: BTreeMap<i64, RatFun> = BTreeMap::new();
        for (k, c) in it {
            let e = m.entry(k).or_insert_with(RatFun::zero);
            *e = &*e + &c;
        }
        ShiftOp::from_map(m)
    }

    /// Coefficients given as polynomials, index = power of E.
    pub fn from_polys(ps: &[Poly]) -> Self {
        ShiftOp::from_terms(ps.iter().enumerate().map(|(k, p)| (k as i64, RatFun::from(p.clone()))))
    }

    pub fn zero() -> Self {
        ShiftOp::default()
    }

    pub fn one() -> Self {
        ShiftOp::coef(RatFun::one())
    }

    pub fn coef(c: RatFun) -> Self {
        ShiftOp::from_terms([(0, c)])
    }

    /// `E^k`
    pub fn e(k: i64) -> Self {
        ShiftOp::from_terms([(k, RatFun::one())])
    }

    /// `q(n) E - p(n)`
    pub fn first_order(q: RatFun, p: RatFun) -> Self {
        ShiftOp::from_terms([(1, q), (0, -p)])
    }

    pub fn terms(&self) -> &BTreeMap<i64, RatFun> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> RatFun {
        self.terms.get(&k).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn max_exp(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn order(&self) -> usize {
        (self.max_exp() - self.min_exp()) as usize
    }

    pub fn lead(&self) -> RatFun {
        self.coeff(self.max_exp())
    }

    pub fn trailing(&self) -> RatFun {
        self.coeff(self.min_exp())
    }

    /// Substitutes `n + k` for `n` in every coefficient.
    pub fn shift_coeffs(&self, k: i64) -> ShiftOp {
        ShiftOp { terms: self.terms.iter().map(|(e, c)| (*e, c.shift_i(k))).collect() }
    }

    /// `c(n) · self`
    pub fn lmul(&self, c: &RatFun) -> ShiftOp {
        ShiftOp::from_map(self.terms.iter().map(|(e, d)| (*e, c * d)).collect())
    }

    pub fn scale(&self, c: &Rat) -> ShiftOp {
        self.lmul(&RatFun::constant(c.clone()))
    }

    /// `Σ p_k(n) y(n+k)`.
    pub fn apply_at<F>(&self, y: F, n: i64) -> Result<Rat, OreError>
    where
        F: Fn(i64) -> Rat,
    {
        let mut acc = Rat::zero();
        for (k, c) in &self.terms {
            let v = c.eval_i(n).ok_or(OreError::PoleAtIndex(n))?;
            if !v.is_zero() {
                acc += v * y(n + k);
            }
        }
        Ok(acc)
    }

    /// Applies to a one-way sequence given by a prefix, padding negative
    /// indices with zeros. Indices past the prefix are an error.
    pub fn apply_padded(&self, vals: &[Rat], n: i64) -> Result<Rat, OreError> {
        let top = n + self.max_exp();
        if top >= vals.len() as i64 {
            return Err(OreError::OutOfRange(top));
        }
        self.apply_at(|i| if i < 0 { Rat::zero() } else { vals[i as usize].clone() }, n)
    }

    /// Right division `self = q·d + r` in ℚ(n)[E] with `max_exp(r) < max_exp(d)`.
    pub fn right_divrem(&self, d: &ShiftOp) -> (ShiftOp, ShiftOp) {
        assert!(!d.is_zero(), "division by zero operator");
        let dm = d.max_exp();
        let dl = d.lead();
        let mut q = ShiftOp::zero();
        let mut r = self.clone();
        while !r.is_zero() && r.max_exp() >= dm {
            let k = r.max_exp() - dm;
            let c = &r.lead() / &dl.shift_i(k);
            let t = ShiftOp::from_terms([(k, c)]);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        (q, r)
    }

    /// Right division in the Laurent algebra: both operands are first moved
    /// to exponents `≥ 0` by left powers of `E`, so the remainder has fewer
    /// terms than the order of `d`.
    pub fn right_divrem_laurent(&self, d: &ShiftOp) -> (ShiftOp, ShiftOp) {
        let (a, m) = (self.min_exp(), d.min_exp());
        let (q, r) = (&ShiftOp::e(-a) * self).right_divrem(&(&ShiftOp::e(-m) * d));
        let ea = ShiftOp::e(a);
        (&(&ea * &q) * &ShiftOp::e(-m), &ea * &r)
    }

    pub fn right_divides(&self, d: &ShiftOp) -> bool {
        self.right_divrem_laurent(d).1.is_zero()
    }

    /// Least common denominator of all coefficients (monic).
    pub fn common_denominator(&self) -> Poly {
        self.terms.values().fold(Poly::one(), |acc, c| acc.lcm(c.den()))
    }

    /// Left-multiplies by the common denominator so all coefficients are polynomials.
    pub fn clear_denominators(&self) -> ShiftOp {
        self.lmul(&RatFun::from(self.common_denominator()))
    }

    /// Canonical representative: `E^{-min}` moved to the left, denominators
    /// cleared, integer-primitive, positive leading coefficient.
    pub fn canonical(&self) -> ShiftOp {
        if self.is_zero() {
            return ShiftOp::zero();
        }
        let m = self.min_exp();
        let shifted = &ShiftOp::e(-m) * self;
        let cleared = shifted.clear_denominators();
        let mut den = BigInt::one();
        let mut g = BigInt::zero();
        for c in cleared.terms.values() {
            for a in c.num().coeffs() {
                den = den.lcm(a.denom());
            }
        }
        for c in cleared.terms.values() {
            for a in c.num().coeffs() {
                g = g.gcd(&(a * Rat::from_integer(den.clone())).to_integer());
            }
        }
        if cleared.lead().num().lead().is_negative() {
            g = -g;
        }
        cleared.scale(&Rat::new(den, g))
    }

    /// Canonical form with the common polynomial content also removed; two
    /// operators differing by a left unit of ℚ(n)⟨E,E⁻¹⟩ have equal forms.
    pub fn normalize_unit(&self) -> ShiftOp {
        let c = self.canonical();
        let g = c.poly_content();
        if g.is_constant() {
            return c;
        }
        c.lmul(&RatFun::new(Poly::one(), g)).canonical()
    }

    /// Monic gcd of the (polynomial) coefficients.
    pub fn poly_content(&self) -> Poly {
        self.terms.values().fold(Poly::zero(), |acc, c| acc.gcd(c.num()))
    }

    pub fn eq_up_to_unit(&self, other: &ShiftOp) -> bool {
        self.normalize_unit() == other.normalize_unit()
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let single = self.terms.len() == 1;
        for (k, c) in self.terms.iter().rev() {
            let (neg, body) = coef_text(c, var, single && *k == 0);
            let epart = match k {
                0 => String::new(),
                1 => "E".to_string(),
                _ => format!("E^{k}"),
            };
            let term = match (body.as_str(), epart.is_empty()) {
                ("1", false) => epart,
                (_, false) => format!("{body}*{epart}"),
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

/// Sign and text of a coefficient; multi-term bodies are parenthesized
/// unless `bare` is set.
pub(crate) fn coef_text(c: &RatFun, var: &str, bare: bool) -> (bool, String) {
    if bare {
        return (false, c.fmt_var(var));
    }
    let neg = c.is_negative_leading();
    let a = if neg { -c } else { c.clone() };
    let txt = a.fmt_var(var);
    let simple = match a.as_poly() {
        Some(p) => p.coeffs().iter().filter(|x| !x.is_zero()).count() <= 1,
        None => false,
    };
    if simple {
        (neg, txt)
    } else {
        (neg, format!("({txt})"))
    }
}

impl fmt::Display for ShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("n"))
    }
}

impl fmt::Debug for ShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftOp[{}]", self.fmt_var("n"))
    }
}

impl Add for &ShiftOp {
    type Output = ShiftOp;
    fn add(self, o: &ShiftOp) -> ShiftOp {
        let mut m = self.terms.clone();
        for (k, c) in &o.terms {
            let e = m.entry(*k).or_insert_with(RatFun::zero);
            *e = &*e + c;
        }
        ShiftOp::from_map(m)
    }
}

impl Sub for &ShiftOp {
    type Output = ShiftOp;
    fn sub(self, o: &ShiftOp) -> ShiftOp {
        self + &(-o)
    }
}

impl Neg for &ShiftOp {
    type Output = ShiftOp;
    fn neg(self) -> ShiftOp {
        ShiftOp { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Mul for &ShiftOp {
    type Output = ShiftOp;
    fn mul(self, o: &ShiftOp) -> ShiftOp {
        let mut m: BTreeMap<i64, RatFun> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let t = a * &b.shift_i(*i);
                let e = m.entry(i + j).or_insert_with(RatFun::zero);
                *e = &*e + &t;
            }
        }
        ShiftOp::from_map(m)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ShiftOp {
            type Output = ShiftOp;
            fn $m(self, o: ShiftOp) -> ShiftOp {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ShiftOp {
    type Output = ShiftOp;
    fn neg(self) -> ShiftOp {
        -&self
    }
}
