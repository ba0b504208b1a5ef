//! Arithmetic in the cyclic group Z_n.
//!
//! Group elements are plain `u64` values kept reduced to `[0, n)`. All
//! operations go through a [`Group`] context that carries the modulus, so a
//! value is only meaningful together with the group it was reduced in.

use crate::error::{Error, Result};

/// The cyclic group Z_n for some n >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Group {
    n: u64,
}

impl Group {
    pub fn new(n: u64) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidTree("group order must be positive".into()));
        }
        Ok(Group { n })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    /// Reduces a signed integer into `[0, n)`.
    pub fn elem(&self, value: i64) -> u64 {
        let n = self.n as i64;
        (value.rem_euclid(n)) as u64
    }

    pub fn reduce(&self, value: u64) -> u64 {
        value % self.n
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.n && b < self.n);
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.n && b < self.n);
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.n);
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }

    /// Multiplicative inverse, defined exactly for units.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if self.n == 1 {
            return Ok(0);
        }
        let (g, x, _) = ext_gcd(a as i128, self.n as i128);
        if g != 1 {
            return Err(Error::NonUnit(a, self.n));
        }
        Ok((x.rem_euclid(self.n as i128)) as u64)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a, self.n) == 1
    }

    /// Minimum number of +1/-1 steps from 0 to `a`: min(a, n - a).
    pub fn distance(&self, a: u64) -> u64 {
        debug_assert!(a < self.n);
        a.min(self.n - a)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.checked_add(1).expect("prime search overflow");
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}
