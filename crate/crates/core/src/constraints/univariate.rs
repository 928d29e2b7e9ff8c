//! Univariate rational polynomials and Sturm real-root counting.

use num_traits::{Signed, Zero};

use crate::scalar::Rational;

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.degree();
        let inv = d.lead().recip();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() * &inv;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn exact_div(&self, d: &UPoly) -> UPoly {
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() <= dd {
            return UPoly::new(Vec::new());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for shift in (0..q.len()).rev() {
            let f = &r[shift + dd] * &inv;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
        }
        UPoly::new(q)
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.exact_div(&g)
    }

    fn sign_at_pos_inf(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.lead().is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_neg_inf(&self) -> i32 {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            seq.push(UPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let seq = self.squarefree().sturm_sequence();
        let changes = |signs: Vec<i32>| {
            let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let lo = changes(seq.iter().map(UPoly::sign_at_neg_inf).collect());
        let hi = changes(seq.iter().map(UPoly::sign_at_pos_inf).collect());
        lo - hi
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn changes_at(seq: &[UPoly], x: &Rational) -> usize {
        let s: Vec<bool> = seq
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Bisects on the sign of a squarefree `self` over `(a, b]`, which holds
    /// exactly one root.
    fn refine(&self, mut a: Rational, mut b: Rational, width: &Rational) -> Rational {
        let two = Rational::from_integer(2.into());
        let fb = self.eval(&b);
        if fb.is_zero() {
            return b;
        }
        let sb = fb.is_positive();
        while &b - &a >= *width {
            let mid = (&a + &b) / &two;
            let fm = self.eval(&mid);
            if fm.is_zero() {
                return mid;
            }
            if fm.is_positive() == sb {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a + b) / two
    }

    /// Distinct real roots, each bisected to width below `2^-bits`.
    pub fn real_roots(&self, bits: u32) -> Vec<Rational> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p = self.squarefree();
        let seq = p.sturm_sequence();
        let lead = p.lead().abs();
        let bound =
            p.0.iter()
                .map(|c| c.abs() / &lead)
                .fold(Rational::zero(), |a, b| if b > a { b } else { a })
                + Rational::from_integer(1.into());
        let two = Rational::from_integer(2.into());
        let width = Rational::new(
            1.into(),
            num_traits::pow(num_bigint::BigInt::from(2), bits as usize),
        );
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            // Sturm counts distinct roots in the half-open interval (a, b].
            let n = Self::changes_at(&seq, &a) - Self::changes_at(&seq, &b);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(p.refine(a, b, &width));
                continue;
            }
            let mid = (&a + &b) / &two;
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort();
        out
    }
}
