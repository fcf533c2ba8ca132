use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exact::rat::fmt_rat;
use crate::exact::{Poly, Rat, RatFun};

pub type Seq = Arc<SeqExpr>;

/// Form of a quasi-rational atom `α^n · n^j` or `α^n / (n - β)^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuasiForm {
    PolyPower(u32),
    PolePower(Rat, u32),
}

/// Sequence representation. Children are shared; values are immutable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    /// `q(n) a_{n+1} = p(n) a_n` with explicit initial terms.
    Hypergeom { p: Poly, q: Poly, initial: Vec<Rat> },
    /// `a_n = r(n)` except for the explicit prefix.
    Rational { r: RatFun, prefix: Vec<Rat> },
    Quasi { alpha: Rat, form: QuasiForm },
    Delta,
    FinSupport(Vec<Rat>),
    /// `f1_n Σ_{k2 ≤ n+η1} f2_{k2} Σ_{k3 ≤ k2+η2} …`
    NestedSum { factors: Vec<Seq>, offsets: Vec<u64> },
    LinComb { coeffs: Vec<Rat>, terms: Vec<Seq> },
    Shift { inner: Seq, k: u64 },
    /// `(λ, a_0, a_1, …)`
    InvShift { inner: Seq, lambda: Rat },
    PartialSum(Seq),
    Product(Seq, Seq),
    Conv(Seq, Seq),
    Interlace(Vec<Seq>),
    ZeroInterlace { inner: Seq, m: u64 },
    Multisect { inner: Seq, m: u64, r: u64 },
}

pub fn hyper(p: Poly, q: Poly, initial: Vec<Rat>) -> Seq {
    Arc::new(SeqExpr::Hypergeom { p, q, initial })
}

pub fn rational(r: RatFun, prefix: Vec<Rat>) -> Seq {
    Arc::new(SeqExpr::Rational { r, prefix })
}

/// Polynomial sequence `p(n)`.
pub fn poly_seq(p: Poly) -> Seq {
    rational(RatFun::from(p), Vec::new())
}

pub fn constant(c: Rat) -> Seq {
    poly_seq(Poly::constant(c))
}

pub fn quasi(alpha: Rat, form: QuasiForm) -> Seq {
    Arc::new(SeqExpr::Quasi { alpha, form })
}

pub fn delta() -> Seq {
    Arc::new(SeqExpr::Delta)
}

pub fn fin(values: Vec<Rat>) -> Seq {
    Arc::new(SeqExpr::FinSupport(values))
}

pub fn nested(factors: Vec<Seq>, offsets: Vec<u64>) -> Seq {
    assert!(!factors.is_empty(), "nested sum needs at least one factor");
    assert_eq!(offsets.len() + 1, factors.len(), "one offset per inner sum");
    Arc::new(SeqExpr::NestedSum { factors, offsets })
}

/// Nested sum with all offsets zero.
pub fn nest(factors: Vec<Seq>) -> Seq {
    let k = factors.len().saturating_sub(1);
    nested(factors, vec![0; k])
}

/// Linear combination; a single unit-coefficient term collapses to itself.
pub fn lincomb(coeffs: Vec<Rat>, terms: Vec<Seq>) -> Seq {
    assert_eq!(coeffs.len(), terms.len());
    if terms.len() == 1 && coeffs[0].is_one() {
        return terms[0].clone();
    }
    Arc::new(SeqExpr::LinComb { coeffs, terms })
}

pub fn add(a: Seq, b: Seq) -> Seq {
    lincomb(vec![Rat::one(), Rat::one()], vec![a, b])
}

pub fn scale(c: Rat, a: Seq) -> Seq {
    lincomb(vec![c], vec![a])
}

pub fn zero_seq() -> Seq {
    fin(Vec::new())
}

pub fn shift(inner: Seq, k: u64) -> Seq {
    if k == 0 {
        return inner;
    }
    Arc::new(SeqExpr::Shift { inner, k })
}

pub fn inv_shift(inner: Seq, lambda: Rat) -> Seq {
    Arc::new(SeqExpr::InvShift { inner, lambda })
}

/// `E_0^{-k}`
pub fn inv_shift_zero(inner: Seq, k: u64) -> Seq {
    (0..k).fold(inner, |acc, _| inv_shift(acc, Rat::zero()))
}

pub fn psum(inner: Seq) -> Seq {
    Arc::new(SeqExpr::PartialSum(inner))
}

pub fn product(a: Seq, b: Seq) -> Seq {
    Arc::new(SeqExpr::Product(a, b))
}

pub fn conv(a: Seq, b: Seq) -> Seq {
    Arc::new(SeqExpr::Conv(a, b))
}

pub fn interlace(parts: Vec<Seq>) -> Seq {
    assert!(!parts.is_empty(), "interlacing needs at least one part");
    Arc::new(SeqExpr::Interlace(parts))
}

pub fn zero_interlace(inner: Seq, m: u64) -> Seq {
    assert!(m >= 1);
    Arc::new(SeqExpr::ZeroInterlace { inner, m })
}

pub fn multisect(inner: Seq, m: u64, r: u64) -> Seq {
    assert!(m >= 1 && r < m, "residue must lie in 0..m");
    Arc::new(SeqExpr::Multisect { inner, m, r })
}

fn list(vs: &[Rat]) -> String {
    vs.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
}

fn join(es: &[Seq]) -> String {
    es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqExpr::Hypergeom { p, q, initial } => write!(f, "hyper({p}; {q}; {})", list(initial)),
            SeqExpr::Rational { r, prefix } => {
                if prefix.is_empty() {
                    write!(f, "rat({r};)")
                } else {
                    write!(f, "rat({r}; {})", list(prefix))
                }
            }
            SeqExpr::Quasi { alpha, form } => match form {
                QuasiForm::PolyPower(j) => write!(f, "quasi({}; pow {j})", fmt_rat(alpha)),
                QuasiForm::PolePower(b, j) => write!(f, "quasi({}; pole {} {j})", fmt_rat(alpha), fmt_rat(b)),
            },
            SeqExpr::Delta => f.write_str("delta"),
            SeqExpr::FinSupport(v) => write!(f, "fin({})", list(v)),
            SeqExpr::NestedSum { factors, offsets } => {
                if offsets.iter().all(|o| *o == 0) {
                    write!(f, "nsum({})", join(factors))
                } else {
                    let os: Vec<String> = offsets.iter().map(|o| o.to_string()).collect();
                    write!(f, "nsum({}; {})", join(factors), os.join(", "))
                }
            }
            SeqExpr::LinComb { coeffs, terms } => {
                if terms.is_empty() {
                    return f.write_str("fin()");
                }
                let parts: Vec<String> = coeffs
                    .iter()
                    .zip(terms)
                    .map(|(c, t)| {
                        let body = if matches!(**t, SeqExpr::LinComb { .. }) { format!("({t})") } else { t.to_string() };
                        if c.is_one() {
                            body
                        } else {
                            format!("{} * {body}", fmt_rat(c))
                        }
                    })
                    .collect();
                f.write_str(&parts.join(" + "))
            }
            SeqExpr::Shift { inner, k } => write!(f, "shift({inner}, {k})"),
            SeqExpr::InvShift { inner, lambda } => write!(f, "ishift({inner}, {})", fmt_rat(lambda)),
            SeqExpr::PartialSum(inner) => write!(f, "psum({inner})"),
            SeqExpr::Product(a, b) => write!(f, "had({a}, {b})"),
            SeqExpr::Conv(a, b) => write!(f, "conv({a}, {b})"),
            SeqExpr::Interlace(ps) => write!(f, "interlace({})", join(ps)),
            SeqExpr::ZeroInterlace { inner, m } => write!(f, "lam({inner}, {m})"),
            SeqExpr::Multisect { inner, m, r } => write!(f, "msect({inner}, {m}, {r})"),
        }
    }
}

impl SeqExpr {
    /// Number of nodes, counting shared children once per occurrence.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Seq> {
        match self {
            SeqExpr::NestedSum { factors, .. } => factors.iter().collect(),
            SeqExpr::LinComb { terms, .. } => terms.iter().collect(),
            SeqExpr::Interlace(ps) => ps.iter().collect(),
            SeqExpr::Shift { inner, .. }
            | SeqExpr::InvShift { inner, .. }
            | SeqExpr::PartialSum(inner)
            | SeqExpr::ZeroInterlace { inner, .. }
            | SeqExpr::Multisect { inner, .. } => vec![inner],
            SeqExpr::Product(a, b) | SeqExpr::Conv(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }
}
