//! Exact scalar fields: the rationals and the Gaussian rationals.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, Complex, One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Reduced arbitrary-precision rational. `num` keeps the denominator
/// positive and the fraction in lowest terms after every operation.
pub type Rat = BigRational;

/// Elements of `Q(i)`, used where a potential only splits after adjoining `i`.
pub type GaussRat = Complex<Rat>;

/// Exact field of characteristic zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rat(r: Rat) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rat(rat(v, 1))
    }

    /// Splits off a leading minus sign for pretty printing: returns
    /// `(true, -self)` when the value reads as negative.
    fn sign_split(&self) -> (bool, Self);

    /// Canonical text form. Parenthesized when it is a sum.
    fn render(&self) -> String;

    /// Lossless text encoding used for serialization.
    fn encode(&self) -> String;

    fn decode(s: &str) -> Option<Self>;
}

fn decode_rat(s: &str) -> Option<Rat> {
    s.trim().parse().ok()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

impl Field for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }

    fn sign_split(&self) -> (bool, Self) {
        if self.is_negative() {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Option<Self> {
        decode_rat(s)
    }
}

impl Field for GaussRat {
    fn from_rat(r: Rat) -> Self {
        Complex::new(r, Rat::zero())
    }

    fn sign_split(&self) -> (bool, Self) {
        let neg = if self.im.is_zero() { self.re.is_negative() } else { self.re.is_zero() && self.im.is_negative() };
        if neg {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    fn render(&self) -> String {
        let imag = |v: &Rat| -> String {
            if v.is_one() {
                "i".to_string()
            } else if (-v).is_one() {
                "-i".to_string()
            } else {
                format!("{v}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => self.re.to_string(),
            (true, false) => imag(&self.im),
            (false, false) => {
                let im = imag(&self.im);
                if im.starts_with('-') {
                    format!("({}{})", self.re, im)
                } else {
                    format!("({}+{})", self.re, im)
                }
            }
        }
    }

    fn encode(&self) -> String {
        if self.im.is_zero() {
            self.re.to_string()
        } else {
            format!("{};{}", self.re, self.im)
        }
    }

    fn decode(s: &str) -> Option<Self> {
        match s.split_once(';') {
            Some((re, im)) => Some(Complex::new(decode_rat(re)?, decode_rat(im)?)),
            None => Some(Complex::new(decode_rat(s)?, Rat::zero())),
        }
    }
}

/// The imaginary unit of `Q(i)`.
pub fn gauss_i() -> GaussRat {
    Complex::new(Rat::zero(), Rat::one())
}
