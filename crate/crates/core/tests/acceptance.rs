//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact over the rationals; the numeric tolerance is pinned at zero.

use std::path::PathBuf;
use std::process::Command;

use num_traits::{One, Signed, Zero};
use seqconv::cli::{parse_operator, parse_shift_operator, Operator};
use seqconv::closure::{annihilate, conv_annihilator_via_gf};
use seqconv::conv::{conv_dalembert, conv_liouvillian, ConvError};
use seqconv::exact::{frac, rat, Poly, Rat, RatFun};
use seqconv::hyperexp::{gauged_diff, hyperexp_factor, reduce_padded, HyperExpRate};
use seqconv::ore::{iso_r, DiffOp, ShiftOp};
use seqconv::seqrep::*;

const TOLERANCE: i64 = 0;
const PROPERTY_SUITES: &[&str] = &["prop_seqrep", "prop_ore"];

type Outcome = Result<String, String>;

fn vals(e: &Seq, n: usize) -> Vec<Rat> {
    Evaluator::new().prefix(e, n).expect("defined terms")
}

fn brute(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    (0..a.len().min(b.len())).map(|n| (0..=n).map(|k| &a[k] * &b[n - k]).sum()).collect()
}

fn exact_eq(x: &Rat, y: &Rat) -> bool {
    (x - y).abs() <= rat(TOLERANCE)
}

fn factorials(n: usize) -> Vec<Rat> {
    let mut f = vec![Rat::one()];
    for k in 1..n {
        let next = &f[k - 1] * rat(k as i64);
        f.push(next);
    }
    f
}

fn harmonic(n: usize) -> Vec<Rat> {
    let mut h = vec![Rat::zero()];
    for k in 1..n {
        let next = &h[k - 1] + frac(1, k as i64);
        h.push(next);
    }
    h
}

fn double_factorials(n: usize) -> Vec<Rat> {
    let mut d = vec![Rat::one(), Rat::one()];
    for k in 2..n {
        let next = &d[k - 2] * rat(k as i64);
        d.push(next);
    }
    d.truncate(n);
    d
}

fn fact() -> Seq {
    hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)])
}

fn inv_fact() -> Seq {
    hyper(Poly::one(), Poly::from_ints(&[1, 1]), vec![rat(1)])
}

fn harmonic_seq() -> Seq {
    psum(rational(RatFun::new(Poly::one(), Poly::var()), vec![rat(0)]))
}

fn shift_op(text: &str) -> ShiftOp {
    parse_shift_operator(text).expect("operator literal")
}

fn diff_op(text: &str) -> DiffOp {
    match parse_operator(text).expect("operator literal") {
        Operator::Diff(m) => m,
        Operator::Shift(_) => panic!("differential operator expected"),
    }
}

fn annihilates(l: &ShiftOp, v: &[Rat], from: i64, to: i64) -> Result<(), String> {
    for n in from..=to {
        let r = l.apply_padded(v, n).map_err(|e| e.to_string())?;
        if !r.is_zero() {
            return Err(format!("{l} leaves {r} at n = {n}"));
        }
    }
    Ok(())
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

const THIRD_ORDER: &str = "(n + 3)*E^3 - (n^2 + 6*n + 10)*E^2 + (2*n + 5)*E - 1";

fn factorial_square() -> Outcome {
    let y = vals(&conv(fact(), fact()), 52);
    let f = factorials(53);
    check(y == brute(&f, &f)[..52], || "evaluator disagrees with the direct convolution".into())?;
    for n in 0..=50 {
        let lhs = rat(2) * &y[n + 1] - rat(n as i64 + 2) * &y[n];
        check(exact_eq(&lhs, &(rat(2) * &f[n + 1])), || format!("fails at n = {n}"))?;
    }
    Ok("2y(n+1) - (n+2)y(n) = 2(n+1)! for n = 0..50".into())
}

fn third_order_operator() -> Outcome {
    let y = vals(&conv(fact(), inv_fact()), 54);
    let f = factorials(54);
    let g: Vec<Rat> = f.iter().map(|x| x.recip()).collect();
    check(y == brute(&f, &g), || "evaluator disagrees with the direct convolution".into())?;
    annihilates(&shift_op(THIRD_ORDER), &y, 0, 50)?;
    Ok("operator annihilates conv(n!, 1/n!) for n = 0..50".into())
}

fn pole_example() -> Outcome {
    let a = hyper(Poly::from_ints(&[2, 2]), Poly::one(), vec![frac(1, 2)]);
    let b = rational(RatFun::new(Poly::one(), Poly::new(vec![frac(1, 2), rat(1)])), vec![]);
    let r = conv_dalembert(&a, &b).map_err(|e| e.to_string())?;
    let main = r.main.as_ref().ok_or("no main step recorded")?;
    check(main.l0.eq_up_to_unit(&shift_op("E - (2*n + 3)")), || format!("L0 = {}", main.l0))?;

    let dfact: Vec<Rat> = factorials(41).iter().enumerate().map(|(k, f)| f * Rat::from_integer(2.into()).pow(k as i32)).collect();
    let rhs = vals(&main.rhs, 41);
    let mut acc = Rat::zero();
    for n in 0..=40 {
        acc += &dfact[n];
        let want = frac(1, 2 * n as i64 + 3) - &acc;
        check(exact_eq(&rhs[n], &want), || format!("rhs differs at n = {n}"))?;
    }

    let av: Vec<Rat> = (0..41).map(|n| &dfact[n] / rat(2)).collect();
    let bv: Vec<Rat> = (0..41).map(|n| frac(2, 2 * n as i64 + 1)).collect();
    check(vals(&r.seq, 41) == brute(&av, &bv), || "representation differs from the direct convolution".into())?;

    let m = RatFun::new(
        &Poly::from_ints(&[3, 2]) * &Poly::from_ints(&[7, 2]).pow(2),
        &Poly::from_ints(&[5, 2]).pow(2) * &Poly::from_ints(&[9, 2]),
    );
    let expect = [
        ShiftOp::first_order(RatFun::one(), m),
        shift_op("E - (2*n + 4)"),
        shift_op("E - 1"),
        shift_op("E - (2*n + 3)"),
    ];
    check(r.ann.eq_factors_up_to_unit(&expect), || format!("factors {}", r.ann))?;
    Ok(format!("L0 = {}, rhs and representation match for n = 0..40, annihilator {}", main.l0, r.ann))
}

fn hyperexp_example() -> Outcome {
    let l = shift_op(THIRD_ORDER);
    let m = iso_r(&l);
    let m_want = diff_op("-x^-2*(x^2*D^2 - (x - 1)*(2*x - 1)*D + (x - 2)*(x - 1))");
    check(m.eq_up_to_unit(&m_want), || format!("M = {m}"))?;
    let r = HyperExpRate(RatFun::one());
    let mp = gauged_diff(&l, &r);
    check(mp.eq_up_to_unit(&diff_op("-x^-2*(x^2*D^2 + (3*x - 1)*D + 1)")), || format!("M' = {mp}"))?;
    let lp = hyperexp_factor(&l, &r).map_err(|e| e.to_string())?;
    check(lp.eq_up_to_unit(&shift_op("(n + 3)*E^3 - (n + 3)^2*E^2")), || format!("L' = {lp}"))?;
    let red = reduce_padded(&lp);
    for c in [rat(1), frac(-7, 3)] {
        let b: Vec<Rat> = factorials(32).iter().map(|f| f * &c).collect();
        annihilates(&red.reduced, &b, 0, 30)?;
        annihilates(&lp, &b, -(lp.order() as i64), 30)?;
    }
    Ok(format!("M, M' and L' match; reduced {} solved by C*n! for n = 0..30", red.reduced))
}

fn exponential_square() -> Outcome {
    let y = vals(&conv(inv_fact(), inv_fact()), 41);
    for (n, f) in factorials(41).iter().enumerate() {
        let want = Rat::from_integer(2.into()).pow(n as i32) / f;
        check(exact_eq(&y[n], &want), || format!("differs at n = {n}"))?;
    }
    let la = annihilate(&inv_fact()).map_err(|e| e.to_string())?.ann.ok_or("no annihilator")?;
    let g = conv_annihilator_via_gf(&la, &la, &inv_fact(), &inv_fact()).map_err(|e| e.to_string())?;
    check(g.eq_up_to_unit(&shift_op("(n + 1)*E - 2")), || format!("got {g}"))?;
    Ok(format!("conv(1/n!, 1/n!) = 2^n/n! for n = 0..40; annihilator {g}"))
}

fn double_factorial_interlacing() -> Outcome {
    let even = hyper(Poly::from_ints(&[2, 2]), Poly::one(), vec![rat(1)]);
    let odd = hyper(Poly::from_ints(&[3, 2]), Poly::one(), vec![rat(1)]);
    let u = interlace(vec![even, odd]);
    let v = rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![]);
    let (seq, parts) = conv_liouvillian(&u, &v).map_err(|e| e.to_string())?;
    check(parts.len() == 2, || format!("{} parts", parts.len()))?;

    let d = double_factorials(46);
    let s = |m: i64| -> Rat { (0..=m.max(-1)).map(|j| d[j as usize].clone()).sum() };
    let g0 = |n: usize| -> Rat {
        let inner: Rat = (1..=n as i64)
            .map(|k| (frac(4 * k + 1, 2 * k * (2 * k + 1)) - s(2 * k - 2)) / &d[2 * k as usize + 1])
            .sum();
        &d[2 * n + 1] * (Rat::one() + inner)
    };
    let g1 = |n: usize| -> Rat {
        let inner: Rat = (1..=n as i64)
            .map(|k| (frac(4 * k + 3, (2 * k + 1) * (2 * k + 2)) - s(2 * k - 1)) / &d[2 * k as usize + 2])
            .sum();
        &d[2 * n + 2] * (frac(3, 4) + inner)
    };
    let (p0, p1) = (vals(&parts[0].seq, 21), vals(&parts[1].seq, 21));
    for n in 0..=20 {
        check(exact_eq(&p0[n], &g0(n)), || format!("even part differs at n = {n}"))?;
        check(exact_eq(&p1[n], &g1(n)), || format!("odd part differs at n = {n}"))?;
    }
    let got = vals(&seq, 41);
    for n in 0..=40usize {
        let want: Rat = (0..=n).map(|k| &d[k] / rat((n - k + 1) as i64)).sum();
        check(exact_eq(&got[n], &want), || format!("interlacing differs at n = {n}"))?;
    }
    Ok("both parts match g0, g1 for n = 0..20; interlacing matches for n = 0..40".into())
}

fn harmonic_examples() -> Outcome {
    let h = harmonic(70);
    let f = factorials(70);
    let hh = brute(&h, &h);
    let fh = brute(&f, &h);
    check(vals(&conv(harmonic_seq(), harmonic_seq()), 70) == hh, || "H*H evaluation".into())?;
    annihilates(&shift_op("((n + 3)*E - (n + 2))^2*(E - 1)^2"), &hh, 0, 60)?;
    annihilates(&shift_op("((n + 5)*E - (n + 4))*((E - (n + 2))*(E - 1))^2"), &fh, 0, 60)?;
    let mut orders = Vec::new();
    for (a, b, want) in [(harmonic_seq(), harmonic_seq(), &hh), (fact(), harmonic_seq(), &fh)] {
        let r = conv_dalembert(&a, &b).map_err(|e| e.to_string())?;
        check(vals(&r.seq, 61) == want[..61], || format!("representation of {a} * {b}"))?;
        let l = r.ann.compose();
        annihilates(&l, want, 0, 60)?;
        orders.push(l.order());
    }
    Ok(format!("given operators and computed ones (orders {orders:?}) annihilate for n = 0..60"))
}

fn property_suites() -> Outcome {
    let deps: PathBuf = std::env::current_exe().map_err(|e| e.to_string())?.parent().unwrap().to_path_buf();
    let mut summary = Vec::new();
    for suite in PROPERTY_SUITES {
        let bin = std::fs::read_dir(&deps)
            .map_err(|e| e.to_string())?
            .filter_map(Result::ok)
            .filter(|e| {
                let name = e.file_name().to_string_lossy().into_owned();
                name.starts_with(&format!("{suite}-")) && !name.contains('.')
            })
            .max_by_key(|e| e.metadata().and_then(|m| m.modified()).ok())
            .ok_or_else(|| format!("{suite} is not built; run cargo test --workspace"))?;
        let out = Command::new(bin.path()).arg("-q").output().map_err(|e| e.to_string())?;
        let text = String::from_utf8_lossy(&out.stdout);
        let line = text.lines().find(|l| l.starts_with("test result")).unwrap_or("no result").to_string();
        check(out.status.success(), || format!("{suite}: {line}"))?;
        summary.push(format!("{suite}: {}", line.trim_start_matches("test result: ").split(';').next().unwrap_or("")));
    }
    Ok(summary.join(", "))
}

fn negative_control() -> Outcome {
    match conv_dalembert(&fact(), &inv_fact()) {
        Err(ConvError::NotRationallyDAlembertian(msg)) => {
            annihilates(&shift_op(THIRD_ORDER), &vals(&conv(fact(), inv_fact()), 40), 0, 36)?;
            Ok(format!("refused: {msg}"))
        }
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(r) => Err(format!("produced {}", r.seq)),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("conv(n!, n!) first-order inhomogeneous recurrence", factorial_square),
        ("third-order operator annihilates conv(n!, 1/n!)", third_order_operator),
        ("pole case end to end", pole_example),
        ("hyperexponential factor", hyperexp_example),
        ("exponential square", exponential_square),
        ("double factorial interlacing", double_factorial_interlacing),
        ("harmonic convolutions", harmonic_examples),
        ("property suites", property_suites),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
