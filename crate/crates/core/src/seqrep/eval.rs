use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::exact::rat::{pow_i, rat};
use crate::exact::Rat;

use super::expr::{QuasiForm, Seq, SeqExpr};
use super::SeqError;

/// Memoizing evaluator. Each node's prefix is cached by node identity, so
/// shared subtrees are computed once. Not meant for concurrent use; create
/// one evaluator per task.
pub struct Evaluator {
    memo: HashMap<usize, (Seq, Vec<Rat>)>,
    limit: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        let limit = std::env::var("SEQCONV_MEMO_LIMIT")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(100_000);
        Evaluator { memo: HashMap::new(), limit }
    }

    pub fn with_limit(limit: usize) -> Self {
        Evaluator { memo: HashMap::new(), limit }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn eval(&mut self, e: &Seq, n: usize) -> Result<Rat, SeqError> {
        Ok(self.prefix(e, n + 1)?[n].clone())
    }

    /// Terms `0..len` of `e`.
    pub fn prefix(&mut self, e: &Seq, len: usize) -> Result<Vec<Rat>, SeqError> {
        let key = Arc::as_ptr(e) as usize;
        if let Some((_, v)) = self.memo.get(&key) {
            if v.len() >= len {
                return Ok(v[..len].to_vec());
            }
        }
        let v = self.compute(e, len)?;
        if self.memo.len() >= self.limit {
            self.memo.clear();
        }
        self.memo.insert(key, (e.clone(), v.clone()));
        Ok(v)
    }

    fn compute(&mut self, e: &Seq, len: usize) -> Result<Vec<Rat>, SeqError> {
        Ok(match &**e {
            SeqExpr::Hypergeom { p, q, initial } => hyper_terms(p, q, initial, len)?,
            SeqExpr::Rational { r, prefix } => {
                let mut out = Vec::with_capacity(len);
                for n in 0..len {
                    if n < prefix.len() {
                        out.push(prefix[n].clone());
                    } else {
                        out.push(r.eval_i(n as i64).ok_or(SeqError::UndefinedTerm(n as u64))?);
                    }
                }
                out
            }
            SeqExpr::Quasi { alpha, form } => {
                if alpha.is_zero() {
                    return Err(SeqError::InvalidAtom("quasi-rational base must be nonzero".into()));
                }
                let mut out = Vec::with_capacity(len);
                let mut ap = Rat::one();
                for n in 0..len {
                    let x = rat(n as i64);
                    let v = match form {
                        QuasiForm::PolyPower(j) => pow_i(&x, *j as i64),
                        QuasiForm::PolePower(b, j) => {
                            let d = &x - b;
                            if d.is_zero() {
                                return Err(SeqError::InvalidAtom(format!("pole {b} lies in the naturals")));
                            }
                            pow_i(&d, -(*j as i64))
                        }
                    };
                    out.push(&ap * v);
                    ap *= alpha;
                }
                out
            }
            SeqExpr::Delta => (0..len).map(|n| if n == 0 { Rat::one() } else { Rat::zero() }).collect(),
            SeqExpr::FinSupport(vs) => (0..len).map(|n| vs.get(n).cloned().unwrap_or_else(Rat::zero)).collect(),
            SeqExpr::NestedSum { factors, offsets } => {
                let d = factors.len();
                let mut lens = vec![len; d];
                for i in 1..d {
                    lens[i] = lens[i - 1] + offsets[i - 1] as usize;
                }
                let mut t = self.prefix(&factors[d - 1], lens[d - 1])?;
                for i in (0..d - 1).rev() {
                    let f = self.prefix(&factors[i], lens[i])?;
                    let mut sums = Vec::with_capacity(t.len());
                    let mut acc = Rat::zero();
                    for v in &t {
                        acc += v;
                        sums.push(acc.clone());
                    }
                    let eta = offsets[i] as usize;
                    t = (0..lens[i]).map(|n| &f[n] * &sums[n + eta]).collect();
                }
                t
            }
            SeqExpr::LinComb { coeffs, terms } => {
                let mut out = vec![Rat::zero(); len];
                for (c, t) in coeffs.iter().zip(terms) {
                    if c.is_zero() {
                        continue;
                    }
                    let v = self.prefix(t, len)?;
                    for (o, x) in out.iter_mut().zip(v) {
                        *o += c * x;
                    }
                }
                out
            }
            SeqExpr::Shift { inner, k } => {
                let k = *k as usize;
                self.prefix(inner, len + k)?.split_off(k)
            }
            SeqExpr::InvShift { inner, lambda } => {
                let mut out = vec![lambda.clone()];
                if len > 1 {
                    out.extend(self.prefix(inner, len - 1)?);
                }
                out.truncate(len);
                out
            }
            SeqExpr::PartialSum(inner) => {
                let v = self.prefix(inner, len)?;
                let mut acc = Rat::zero();
                v.into_iter()
                    .map(|x| {
                        acc += x;
                        acc.clone()
                    })
                    .collect()
            }
            SeqExpr::Product(a, b) => {
                let x = self.prefix(a, len)?;
                let y = self.prefix(b, len)?;
                x.into_iter().zip(y).map(|(u, v)| u * v).collect()
            }
            SeqExpr::Conv(a, b) => {
                let x = self.prefix(a, len)?;
                let y = self.prefix(b, len)?;
                cauchy(&x, &y)
            }
            SeqExpr::Interlace(parts) => {
                let m = parts.len();
                let mut vals = Vec::with_capacity(m);
                for (j, p) in parts.iter().enumerate() {
                    let need = if len > j { (len - j).div_ceil(m) } else { 0 };
                    vals.push(self.prefix(p, need)?);
                }
                (0..len).map(|n| vals[n % m][n / m].clone()).collect()
            }
            SeqExpr::ZeroInterlace { inner, m } => {
                let m = *m as usize;
                let v = self.prefix(inner, len.div_ceil(m))?;
                (0..len).map(|n| if n % m == 0 { v[n / m].clone() } else { Rat::zero() }).collect()
            }
            SeqExpr::Multisect { inner, m, r } => {
                let (m, r) = (*m as usize, *r as usize);
                if len == 0 {
                    return Ok(Vec::new());
                }
                let v = self.prefix(inner, m * (len - 1) + r + 1)?;
                (0..len).map(|n| v[m * n + r].clone()).collect()
            }
        })
    }
}

/// Cauchy product of two equal-length prefixes.
pub fn cauchy(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let len = x.len().min(y.len());
    (0..len)
        .map(|n| {
            let mut acc = Rat::zero();
            for k in 0..=n {
                if !x[k].is_zero() && !y[n - k].is_zero() {
                    acc += &x[k] * &y[n - k];
                }
            }
            acc
        })
        .collect()
}

/// Terms of a hypergeometric atom, validating the initial values.
pub fn hyper_terms(p: &crate::exact::Poly, q: &crate::exact::Poly, initial: &[Rat], len: usize) -> Result<Vec<Rat>, SeqError> {
    if q.is_zero() {
        return Err(SeqError::InvalidAtom("hypergeometric q must be nonzero".into()));
    }
    let need = q.max_natural_root().map_or(1, |r| r as usize + 2);
    if initial.len() < need {
        return Err(SeqError::InvalidAtom(format!(
            "hypergeometric atom needs initial values for indices 0..{} (q vanishes at {})",
            need - 1,
            need - 2
        )));
    }
    for n in 0..initial.len() - 1 {
        let qn = q.eval_i(n as i64);
        if !qn.is_zero() && &qn * &initial[n + 1] != p.eval_i(n as i64) * &initial[n] {
            return Err(SeqError::InvalidAtom(format!("initial values violate the recurrence at n = {n}")));
        }
    }
    let mut out: Vec<Rat> = initial.iter().take(len).cloned().collect();
    while out.len() < len {
        let n = out.len() - 1;
        let qn = q.eval_i(n as i64);
        let v = p.eval_i(n as i64) * &out[n] / qn;
        out.push(v);
    }
    Ok(out)
}

