use num_traits::Zero;

use super::linalg::solve;
use super::poly::Poly;
use super::rat::{pow_i, rat, Rat};
use super::ratfun::RatFun;
use super::roots::rational_roots;
use super::ExactError;

/// `poly_part + Σ c / (x - β)^j`, pole terms sorted by `(β, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionForm {
    pub poly_part: Poly,
    pub pole_terms: Vec<(Rat, u32, Rat)>,
}

impl PartialFractionForm {
    pub fn recombine(&self) -> RatFun {
        let mut acc = RatFun::from(self.poly_part.clone());
        for (beta, j, c) in &self.pole_terms {
            let den = Poly::linear_root(beta).pow(*j);
            acc = &acc + &RatFun::new(Poly::constant(c.clone()), den);
        }
        acc
    }
}

pub fn partial_fractions(r: &RatFun) -> Result<PartialFractionForm, ExactError> {
    let (poly_part, rem) = r.num().div_rem(r.den());
    if rem.is_zero() {
        return Ok(PartialFractionForm { poly_part, pole_terms: Vec::new() });
    }
    let den = r.den();
    let roots = rational_roots(den)?;
    let deg = den.degree().unwrap_or(0);
    let covered: u32 = roots.iter().map(|(_, m)| *m).sum();
    if covered as usize != deg {
        return Err(ExactError::IrreducibleDenominator(den.to_string()));
    }

    let mut unknowns: Vec<(Rat, u32)> = Vec::new();
    for (beta, m) in &roots {
        for j in 1..=*m {
            unknowns.push((beta.clone(), j));
        }
    }
    let mut rows = Vec::with_capacity(deg);
    let mut rhs = Vec::with_capacity(deg);
    let mut x = 0i64;
    while rows.len() < deg {
        let xs = rat(x);
        x += 1;
        let d = den.eval(&xs);
        if d.is_zero() {
            continue;
        }
        rows.push(
            unknowns
                .iter()
                .map(|(beta, j)| pow_i(&(&xs - beta), -(*j as i64)))
                .collect::<Vec<Rat>>(),
        );
        rhs.push(rem.eval(&xs) / d);
    }
    let sol = solve(&rows, &rhs).expect("partial fraction basis is independent");
    let mut pole_terms: Vec<(Rat, u32, Rat)> = unknowns
        .into_iter()
        .zip(sol)
        .filter(|(_, c)| !c.is_zero())
        .map(|((b, j), c)| (b, j, c))
        .collect();
    pole_terms.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    Ok(PartialFractionForm { poly_part, pole_terms })
}
