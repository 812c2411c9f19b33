//! Random expression trees evaluated both in `Interval` and in the dyadic
//! oracle.

use rand::Rng;
use stverify::Interval;

use super::dyadic::DI;

pub struct Eval {
    pub f: Interval,
    pub o: DI,
    /// First operation whose oracle value escaped its enclosure.
    pub bad: Option<String>,
}

impl Eval {
    fn new(f: Interval, o: DI) -> Self {
        Eval { f, o, bad: None }
    }

    fn op(f: Interval, o: DI, name: &str, args: &[&Eval]) -> Self {
        let bad = args.iter().find_map(|a| a.bad.clone()).or_else(|| {
            (!o.inside(&f)).then(|| {
                let xs: Vec<String> = args.iter().map(|a| format!("{:?}", a.f)).collect();
                format!("{name}({}) = {f:?}, oracle [{:e}, {:e}]", xs.join(", "), o.lo.to_f64(), o.hi.to_f64())
            })
        });
        Eval { f, o, bad }
    }
}

fn leaf(rng: &mut impl Rng) -> Eval {
    if rng.random_bool(0.2) {
        let (p, q) = (rng.random_range(-1000..1000), rng.random_range(1..1000));
        return Eval::op(Interval::from_ratio(p, q).unwrap(), DI::ratio(p, q), "ratio", &[]);
    }
    let x: f64 = match rng.random_range(0..4) {
        0 => rng.random_range(-10.0..10.0),
        1 => rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-30..30)),
        2 => rng.random_range(-100..100) as f64,
        _ => rng.random_range(0.0..1.0),
    };
    Eval::new(Interval::point(x), DI::from_f64(x))
}

/// Subtrees that have blown up are not extended further.
fn tame(e: &Eval) -> bool {
    e.f.lo().is_finite() && e.f.hi().is_finite() && e.f.mag() < 1e60 && e.f.width() <= 1e-3 * e.f.mag().max(1.0)
}

pub fn random(rng: &mut impl Rng, depth: u32) -> Eval {
    if depth == 0 || rng.random_bool(0.15) {
        return leaf(rng);
    }
    let a = random(rng, depth - 1);
    if !tame(&a) {
        return a;
    }
    match rng.random_range(0..10) {
        0..=3 => {
            let b = random(rng, depth - 1);
            if !tame(&b) {
                return a;
            }
            match rng.random_range(0..4) {
                0 => Eval::op(a.f + b.f, a.o.add(&b.o), "add", &[&a, &b]),
                1 => Eval::op(a.f - b.f, a.o.sub(&b.o), "sub", &[&a, &b]),
                2 => Eval::op(a.f * b.f, a.o.mul(&b.o), "mul", &[&a, &b]),
                _ => match (a.f.checked_div(b.f), a.o.div(&b.o)) {
                    (Ok(f), Some(o)) => Eval::op(f, o, "div", &[&a, &b]),
                    _ => return a,
                },
            }
        }
        4 => Eval::op(a.f.sqr(), a.o.sqr(), "sqr", &[&a]),
        5 => Eval::op(-a.f, a.o.neg(), "neg", &[&a]),
        6 if a.f.lo() >= 0.0 => match a.o.sqrt() {
            Some(o) => Eval::op(a.f.sqrt().unwrap(), o, "sqrt", &[&a]),
            // only reachable when the argument already escaped
            None => return a,
        },
        7 if a.f.mag() < 30.0 => Eval::op(a.f.exp(), a.o.exp(), "exp", &[&a]),
        8 if a.f.mag() < 30.0 => Eval::op(a.f.expm1(), a.o.expm1(), "expm1", &[&a]),
        // odd powers as x * x^2, matching the library
        _ => Eval::op(a.f.powi(3), a.o.mul(&a.o.sqr()), "cube", &[&a]),
    }
}
