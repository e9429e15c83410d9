//! Small exact-arithmetic helpers shared by the combinatorial modules.

use num_bigint::BigUint;
use num_traits::One;

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divisors of `d` in increasing order. `divisors(0)` is empty.
pub fn divisors(d: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= d {
        if d.is_multiple_of(i) {
            small.push(i);
            if i * i != d {
                large.push(d / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `top · (top-1) ⋯ (top-count+1)`, i.e. `top! / (top-count)!`; zero when `count > top`.
pub fn falling_factorial(top: usize, count: usize) -> BigUint {
    if count > top {
        return BigUint::default();
    }
    (0..count).fold(BigUint::one(), |acc, i| acc * BigUint::from(top - i))
}

/// Stirling numbers of the second kind `S(a, j)` for `0 <= j <= a`.
pub fn stirling2_row(a: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=a {
        let mut next = vec![BigUint::default(); i + 1];
        for (j, slot) in next.iter_mut().enumerate().skip(1) {
            let mut v = row.get(j - 1).cloned().unwrap_or_default();
            if j < row.len() {
                v += &row[j] * BigUint::from(j);
            }
            *slot = v;
        }
        row = next;
    }
    row
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    falling_factorial(n, k) / factorial(k)
}
