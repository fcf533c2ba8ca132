use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rat::{rat, Rat};

/// Reduced rational function `num/den` with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds and reduces `num/den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let l = d.lead();
        if !l.is_one() {
            let li = l.recip();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFun { num: n, den: d }
    }

    fn from_coprime(mut n: Poly, mut d: Poly) -> Self {
        let l = d.lead();
        if !l.is_one() {
            let li = l.recip();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFun { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFun::constant(rat(c))
    }

    pub fn var() -> Self {
        RatFun::from(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == Poly::one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        self.is_poly().then(|| self.num.clone())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        (self.is_poly() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_i(&self, x: i64) -> Option<Rat> {
        self.eval(&rat(x))
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `r(x + c)`
    pub fn shift(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return self.clone();
        }
        RatFun::new(self.num.shift(c), self.den.shift(c))
    }

    pub fn shift_i(&self, c: i64) -> RatFun {
        self.shift(&rat(c))
    }

    /// `r(a*x + b)`
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> RatFun {
        RatFun::new(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
    }

    pub fn derivative(&self) -> RatFun {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den)
    }

    pub fn pow(&self, k: i32) -> RatFun {
        if k >= 0 {
            RatFun::new(self.num.pow(k as u32), self.den.pow(k as u32))
        } else {
            self.recip().pow(-k)
        }
    }

    /// Largest nonnegative integer pole, if any.
    pub fn max_natural_pole(&self) -> Option<u64> {
        self.den.max_natural_root()
    }

    /// Canonical text with the given variable name.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.fmt_var(var);
        }
        // Pull the rational content out so numerator and denominator print
        // with integer coefficients where possible.
        let (cn, pn) = self.num.primitive();
        let (cd, pd) = self.den.primitive();
        let c = cn / cd;
        let numer = pn.scale(&c);
        format!("({})/({})", numer.fmt_var(var), pd.fmt_var(var))
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative_leading(&self) -> bool {
        self.num.lead().is_negative()
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> Self {
        RatFun::constant(c)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("n"))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({})", self.fmt_var("x"))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = o.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&o.num * &a);
        if num.is_zero() {
            return RatFun::zero();
        }
        // Any common factor of `num` and `a·b·g` already divides `g`.
        let g2 = num.gcd(&g);
        if g2.is_constant() {
            RatFun::from_coprime(num, &a * &o.den)
        } else {
            RatFun::from_coprime(num.div_exact(&g2).unwrap(), (&a * &o.den).div_exact(&g2).unwrap())
        }
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        if self.is_poly() && o.is_poly() {
            return RatFun::from(&self.num * &o.num).scale(&(self.den.lead() * o.den.lead()).recip());
        }
        // Cross-cancel before multiplying to keep degrees small.
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFun::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, o: &RatFun) -> RatFun {
        self * &o.recip()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, o: RatFun) -> RatFun {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
