use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::Zero;
use serde::Serialize;

use crate::closure::annihilate;
use crate::conv::{conv_dalembert, conv_liouvillian, ConvResult};
use crate::exact::rat::fmt_rat;
use crate::exact::Rat;
use crate::hyperexp::{hyperexp_factor, reduce_padded, HyperExpRate};
use crate::ore::{iso_rinv, lclm, ShiftOp};
use crate::seqrep::{conv, Evaluator, Seq, SeqExpr};

use super::parse::{parse_operator, parse_ratfun_x, parse_seq_expr, Operator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Eval { expr: String, n: u64 },
    GSeries { expr: String, n: u64 },
    Annihilate { expr_a: String, expr_b: Option<String> },
    Convolve { expr_a: String, expr_b: String, want_rep: bool, want_ann: bool },
    HyperExpFactor { op: String, rate: String, reduce: bool },
    Verify { op: String, expr: String, from: i64, to: i64 },
    Lclm { op1: String, op2: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub status: Status,
    pub payload: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl Report {
    fn ok(payload: Vec<String>) -> Self {
        Report { status: Status::Ok, payload, diagnostics: Vec::new() }
    }

    fn error(msg: impl Into<String>) -> Self {
        Report { status: Status::Error, payload: Vec::new(), diagnostics: vec![msg.into()] }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.payload {
            out.push_str(line);
            out.push('\n');
        }
        for d in &self.diagnostics {
            out.push_str("note: ");
            out.push_str(d);
            out.push('\n');
        }
        if self.status == Status::Error {
            out.insert_str(0, "error\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn evaluator() -> Evaluator {
    match std::env::var("SEQCONV_MEMO_LIMIT").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(limit) => Evaluator::with_limit(limit),
        None => Evaluator::new(),
    }
}

type Outcome = Result<Report, String>;

/// Runs one command. Failures of any kind come back as reports.
pub fn run(cmd: &Command) -> Report {
    match catch_unwind(AssertUnwindSafe(|| dispatch(cmd))) {
        Ok(Ok(r)) => r,
        Ok(Err(msg)) => Report::error(msg),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal failure".into());
            Report::error(format!("internal failure: {msg}"))
        }
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Eval { expr, n } => {
            let e = seq(expr)?;
            let vals = evaluator().prefix(&e, *n as usize + 1).map_err(|e| e.to_string())?;
            Ok(Report::ok(vec![vals.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")]))
        }
        Command::GSeries { expr, n } => {
            let e = seq(expr)?;
            let vals = evaluator().prefix(&e, *n as usize + 1).map_err(|e| e.to_string())?;
            Ok(Report::ok(vec![series_text(&vals)]))
        }
        Command::Annihilate { expr_a, expr_b } => {
            let a = seq(expr_a)?;
            let e = match expr_b {
                Some(b) => conv(a, seq(b)?),
                None => a,
            };
            let s = annihilate(&e).map_err(|e| e.to_string())?;
            match s.ann {
                Some(l) => Ok(Report::ok(vec![format!("{l}"), format!("valid from n = {}", s.valid_from)])),
                None => Err("no annihilator is synthesized for this representation".into()),
            }
        }
        Command::Convolve { expr_a, expr_b, want_rep, want_ann } => {
            let (a, b) = (seq(expr_a)?, seq(expr_b)?);
            let (rep, ann) = if !want_rep && !want_ann { (true, true) } else { (*want_rep, *want_ann) };
            let interlaced = |e: &Seq| matches!(**e, SeqExpr::Interlace(_));
            let mut payload = Vec::new();
            let mut diags = Vec::new();
            if interlaced(&a) || interlaced(&b) {
                let (g, parts) = conv_liouvillian(&a, &b).map_err(|e| e.to_string())?;
                if rep {
                    payload.push(format!("rep: {g}"));
                }
                for (r, part) in parts.iter().enumerate() {
                    describe(part, &format!("part {r} "), rep, ann, &mut payload, &mut diags);
                }
            } else {
                let res = conv_dalembert(&a, &b).map_err(|e| e.to_string())?;
                if rep {
                    payload.push(format!("rep: {}", res.seq));
                }
                describe(&res, "", false, ann, &mut payload, &mut diags);
            }
            Ok(Report { status: Status::Ok, payload, diagnostics: diags })
        }
        Command::HyperExpFactor { op, rate, reduce } => {
            let l = shift_op(op)?;
            let r = parse_ratfun_x(rate).map_err(|e| e.to_string())?;
            let lp = hyperexp_factor(&l, &HyperExpRate(r)).map_err(|e| e.to_string())?;
            let mut payload = vec![format!("L' = {lp}")];
            let mut diags = Vec::new();
            if *reduce {
                let red = reduce_padded(&lp);
                payload.push(format!("E-power: {}", red.e_power));
                payload.push(format!("content: {}", red.content));
                payload.push(format!("reduced: {}", red.reduced));
                if !red.affected.is_empty() {
                    diags.push(format!("cancellation affects n in {:?}", red.affected));
                }
                if !red.singular.is_empty() {
                    diags.push(format!("reduced leading coefficient vanishes at n in {:?}", red.singular));
                }
                if red.reduced.order() == 1 {
                    let q = red.reduced.lead();
                    let p = -red.reduced.trailing();
                    payload.push(format!("solutions: ({q}) b(n+1) = ({p}) b(n)"));
                }
            }
            Ok(Report { status: Status::Ok, payload, diagnostics: diags })
        }
        Command::Verify { op, expr, from, to } => {
            if from > to {
                return Err(format!("empty range {from}..{to}"));
            }
            let l = shift_op(op)?.clear_denominators();
            let e = seq(expr)?;
            let len = (*to + l.max_exp() + 1).max(1) as usize;
            let vals = evaluator().prefix(&e, len).map_err(|e| e.to_string())?;
            for n in *from..=*to {
                let v = l.apply_padded(&vals, n).map_err(|e| e.to_string())?;
                if !v.is_zero() {
                    return Ok(Report {
                        status: Status::Fail,
                        payload: vec![format!("FAIL n = {from}..{to}")],
                        diagnostics: vec![format!("first violation at n = {n}: lhs = {}, rhs = 0", fmt_rat(&v))],
                    });
                }
            }
            Ok(Report::ok(vec![format!("PASS n = {from}..{to}")]))
        }
        Command::Lclm { op1, op2 } => {
            let (a, b) = (shift_op(op1)?, shift_op(op2)?);
            if a.is_zero() || b.is_zero() {
                return Err("lclm of the zero operator".into());
            }
            Ok(Report::ok(vec![lclm(&a, &b).to_string()]))
        }
    }
}

fn describe(res: &ConvResult, label: &str, rep: bool, ann: bool, payload: &mut Vec<String>, diags: &mut Vec<String>) {
    if rep {
        payload.push(format!("{label}rep: {}", res.seq));
    }
    if ann {
        payload.push(format!("{label}ann: {}", integral(&res.ann.compose())));
        payload.push(format!("{label}factored: {}", res.ann));
    }
    if let Some(m) = &res.main {
        diags.push(format!("{label}first main step: {}, L0 = {}", m.case_tag, m.l0));
    }
    diags.push(format!("{label}threshold N = {}", res.threshold));
    if res.swapped {
        diags.push(format!("{label}operands exchanged"));
    }
}

/// Integer-primitive form with the same `E` exponents.
fn integral(l: &ShiftOp) -> ShiftOp {
    if l.is_zero() {
        return l.clone();
    }
    &ShiftOp::e(l.min_exp()) * &l.canonical()
}

fn seq(text: &str) -> Result<Seq, String> {
    parse_seq_expr(text).map_err(|e| e.to_string())
}

fn shift_op(text: &str) -> Result<ShiftOp, String> {
    match parse_operator(text).map_err(|e| e.to_string())? {
        Operator::Shift(l) => Ok(l),
        Operator::Diff(m) => Ok(iso_rinv(&m)),
    }
}

fn series_text(vals: &[Rat]) -> String {
    let mut s = String::new();
    for (k, c) in vals.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        let neg = c < &Rat::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        let body = if k == 0 {
            fmt_rat(&a)
        } else if a == Rat::from_integer(1.into()) {
            mono
        } else {
            format!("{}*{mono}", fmt_rat(&a))
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} + O(x^{})", vals.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const THIRD_ORDER: &str = "(n+3)*E^3 - (n^2+6*n+10)*E^2 + (2*n+5)*E - 1";

    #[test]
    fn harmonic_terms() {
        let r = run(&Command::Eval { expr: "psum(rat(1/n; 0))".into(), n: 3 });
        assert_eq!(r.payload, vec!["0, 1, 3/2, 11/6"]);
        assert_eq!(r.exit_code(), 0);
        let g = run(&Command::GSeries { expr: "psum(rat(1/n; 0))".into(), n: 3 });
        assert_eq!(g.payload, vec!["x + 3/2*x^2 + 11/6*x^3 + O(x^4)"]);
    }

    #[test]
    fn verify_passes_and_fails() {
        let expr = "conv(hyper(n+1; 1; 1), hyper(1; n+1; 1))";
        let ok = run(&Command::Verify { op: THIRD_ORDER.into(), expr: expr.into(), from: 0, to: 30 });
        assert_eq!(ok.status, Status::Ok, "{ok:?}");
        let bad = run(&Command::Verify { op: "E - 1".into(), expr: "hyper(2; 1; 1)".into(), from: -1, to: 5 });
        assert_eq!(bad.status, Status::Fail);
        assert_eq!(bad.exit_code(), 1);
        assert!(bad.diagnostics[0].contains("n = -1"));
    }

    #[test]
    fn errors_are_reports() {
        let r = run(&Command::Eval { expr: "conv(".into(), n: 3 });
        assert_eq!(r.status, Status::Error);
        assert!(r.diagnostics[0].contains("position 5"));
        let r = run(&Command::HyperExpFactor { op: "E - 1".into(), rate: "1".into(), reduce: false });
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn harmonic_convolution_annihilator() {
        let h = "psum(rat(1/n; 0))";
        let r = run(&Command::Convolve { expr_a: h.into(), expr_b: h.into(), want_rep: false, want_ann: true });
        assert_eq!(r.status, Status::Ok, "{r:?}");
        let v = run(&Command::Verify {
            op: "((n+3)*E - (n+2))^2*(E-1)^2".into(),
            expr: format!("conv({h}, {h})"),
            from: 0,
            to: 30,
        });
        assert_eq!(v.status, Status::Ok, "{v:?}");
        let ann = r.payload[0].trim_start_matches("ann: ").to_string();
        let v = run(&Command::Verify { op: ann, expr: format!("conv({h}, {h})"), from: 0, to: 30 });
        assert_eq!(v.status, Status::Ok, "{v:?}");
    }
}
