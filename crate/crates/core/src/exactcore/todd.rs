use std::sync::{Mutex, OnceLock};

use num::{BigInt, One, Zero};

use super::ring::Rational;
use super::series::PowerSeries;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, from the recurrence
/// `Σ_{k≤n} C(n+1,k) B_k = 0`. Memoized for the process.
pub fn bernoulli(n: usize) -> Rational {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut table = MEMO.get_or_init(|| Mutex::new(vec![Rational::one()])).lock().unwrap();
    while table.len() <= n {
        let m = table.len() as u64;
        let mut sum = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            sum += Rational::from_integer(binomial(m + 1, k as u64)) * b;
        }
        let next = -sum / Rational::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[n].clone()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Truncation of `t/(1-e^{-t}) = Σ B_n (-t)^n / n!` at `order`.
pub fn todd_series(order: u32) -> PowerSeries<Rational> {
    PowerSeries::from_terms(
        1,
        order,
        (0..=order as usize).map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let c = bernoulli(n) * Rational::from_integer(BigInt::from(sign)) / Rational::from_integer(factorial(n));
            (vec![n as u32], c)
        }),
    )
}

/// Truncation of `(1-e^{-t})/t = Σ (-t)^n/(n+1)!` at `order`.
pub fn todd_inverse_series(order: u32) -> PowerSeries<Rational> {
    PowerSeries::from_terms(
        1,
        order,
        (0..=order as usize).map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            (vec![n as u32], Rational::new(BigInt::from(sign), factorial(n + 1)))
        }),
    )
}
