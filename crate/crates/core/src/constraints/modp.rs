//! Arithmetic modulo the Mersenne prime `2^61 - 1`, used for fast exact rank
//! computations (rank over F_p equals rank over Q with overwhelming
//! probability at random evaluation points).

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{Const, Rational, Scalar};

pub const MODULUS: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Fp(u64);

impl Fp {
    pub fn new(x: u64) -> Fp {
        Fp(x % MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Fp {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(MODULUS - 2)
    }

    fn from_bigint(x: &BigInt) -> Fp {
        let r = x.mod_floor(&BigInt::from(MODULUS));
        Fp(r.to_u64().expect("reduced below modulus"))
    }

    pub fn from_rational(r: &Rational) -> Fp {
        Fp::from_bigint(r.numer()) * Fp::from_bigint(r.denom()).inv()
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + MODULUS - o.0
        })
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(0) - self
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let p = self.0 as u128 * o.0 as u128;
        let lo = (p as u64) & MODULUS;
        let hi = (p >> 61) as u64;
        let mut s = lo + hi;
        while s >= MODULUS {
            s -= MODULUS;
        }
        Fp(s)
    }
}

impl Zero for Fp {
    fn zero() -> Fp {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Fp {
        Fp(1)
    }
}

impl Scalar for Fp {
    const EXACT: bool = true;

    fn from_const(c: &Const) -> Self {
        Fp::from_rational(c.exact())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self = *self + *other;
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = *self - *other;
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = *self + *a * *b;
    }

    /// 0 or 1: residues carry no size.
    fn magnitude(&self) -> f64 {
        if self.0 == 0 {
            0.0
        } else {
            1.0
        }
    }

    fn as_f64(&self) -> Option<f64> {
        None
    }
}

/// Rank of a row-major matrix over F_p.
pub fn rank(mut rows: Vec<Vec<Fp>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = *x * inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = *x - f * *y;
                }
            }
        }
        r += 1;
    }
    r
}
