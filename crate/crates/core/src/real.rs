//! Scalar abstraction so the single-jump solver can run in `f64` or in
//! MPFR-backed extended precision.

use num_complex::Complex;
use num_traits::Num;
use std::fmt::Debug;
use std::ops::Neg;

pub trait Real:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn pi() -> Self;
    /// Unit roundoff of the working precision.
    fn epsilon() -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;

    fn from_ratio(num: i128, den: i128) -> Self {
        // Exact for |num|, |den| < 2^53; callers with larger entries use the
        // extended type, which overrides this.
        Self::from_f64(num as f64) / Self::from_f64(den as f64)
    }

    fn two_pi() -> Self {
        Self::pi() * Self::from_i64(2)
    }

    /// `k·self` as a rounded product plus its rounding error.
    fn mul_int_split(&self, k: i64) -> (Self, Self) {
        (self.clone() * Self::from_i64(k), Self::zero())
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }
    fn mul_int_split(&self, k: i64) -> (Self, Self) {
        let kf = k as f64;
        let p = self * kf;
        (p, self.mul_add(kf, -p))
    }
}

pub fn cabs<R: Real>(z: &Complex<R>) -> R {
    let (a, b) = (z.re.abs(), z.im.abs());
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big == R::zero() {
        return R::zero();
    }
    let t = small / big.clone();
    big * (R::one() + t.clone() * t).sqrt()
}

pub fn carg<R: Real>(z: &Complex<R>) -> R {
    z.im.atan2(&z.re)
}

/// `e^{iθ}`.
pub fn cis<R: Real>(theta: &R) -> Complex<R> {
    Complex::new(theta.cos(), theta.sin())
}

/// `e^{ikθ}` without the `ulp(kθ)` phase error of `cis(k·θ)`.
pub fn cis_multiple<R: Real>(theta: &R, k: i64) -> Complex<R> {
    let (p, e) = theta.mul_int_split(k);
    let base = cis(&p);
    if e == R::zero() {
        return base;
    }
    // e is a rounding error, so e^2/2 is below the working precision.
    base.clone() + base * Complex::new(R::zero(), e)
}

pub fn cscale<R: Real>(z: &Complex<R>, s: &R) -> Complex<R> {
    Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone())
}

/// `i^p` for a non-negative integer power.
pub fn i_pow<R: Real>(p: usize) -> Complex<R> {
    match p % 4 {
        0 => Complex::new(R::one(), R::zero()),
        1 => Complex::new(R::zero(), R::one()),
        2 => Complex::new(-R::one(), R::zero()),
        _ => Complex::new(R::zero(), -R::one()),
    }
}

/// Maps an angle to `[-π, π)`.
pub fn wrap_angle_r<R: Real>(x: &R) -> R {
    let two_pi = R::two_pi();
    let shifted = x.clone() + R::pi();
    let turns = (shifted.clone() / two_pi.clone()).floor();
    let y = shifted - turns * two_pi.clone() - R::pi();
    if y >= R::pi() {
        y - two_pi
    } else if y < -R::pi() {
        y + two_pi
    } else {
        y
    }
}

pub fn to_c64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<R: Real>(z: &Complex<f64>) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

#[cfg(feature = "extended")]
pub use big::{set_working_digits, working_bits, Big};

#[cfg(feature = "extended")]
mod big {
    use super::Real;
    use num_traits::{Num, One, Zero};
    use rug::float::Constant;
    use rug::ops::Pow;
    use rug::Float;
    use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
    use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

    static BITS: AtomicU32 = AtomicU32::new(256);

    /// Sets the significand width from a decimal digit count (plus guard bits).
    /// Affects values constructed afterwards.
    pub fn set_working_digits(digits: u32) {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
        BITS.store(bits.max(64), AtomicOrdering::SeqCst);
    }

    pub fn working_bits() -> u32 {
        BITS.load(AtomicOrdering::SeqCst)
    }

    /// MPFR float at the process-wide working precision.
    #[derive(Clone, Debug, PartialEq, PartialOrd)]
    pub struct Big(pub Float);

    impl Big {
        fn new<T>(v: T) -> Self
        where
            Float: rug::Assign<T>,
        {
            let mut f = Float::new(working_bits());
            rug::Assign::assign(&mut f, v);
            Big(f)
        }
    }

    macro_rules! binop {
        ($tr:ident, $m:ident, $op:tt) => {
            impl $tr for Big {
                type Output = Big;
                fn $m(self, rhs: Big) -> Big {
                    Big(self.0 $op rhs.0)
                }
            }
        };
    }
    binop!(Add, add, +);
    binop!(Sub, sub, -);
    binop!(Mul, mul, *);
    binop!(Div, div, /);

    impl Rem for Big {
        type Output = Big;
        fn rem(self, rhs: Big) -> Big {
            let q = (self.0.clone() / &rhs.0).trunc();
            Big(self.0 - q * rhs.0)
        }
    }

    impl Neg for Big {
        type Output = Big;
        fn neg(self) -> Big {
            Big(-self.0)
        }
    }

    impl Zero for Big {
        fn zero() -> Self {
            Big::new(0)
        }
        fn is_zero(&self) -> bool {
            self.0.is_zero()
        }
    }

    impl One for Big {
        fn one() -> Self {
            Big::new(1)
        }
    }

    impl Num for Big {
        type FromStrRadixErr = String;
        fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
            let parsed = Float::parse_radix(s, radix as i32).map_err(|e| e.to_string())?;
            Ok(Big::new(parsed))
        }
    }

    impl Real for Big {
        fn from_f64(x: f64) -> Self {
            Big::new(x)
        }
        fn from_i64(n: i64) -> Self {
            Big::new(n)
        }
        fn to_f64(&self) -> f64 {
            self.0.to_f64()
        }
        fn pi() -> Self {
            Big::new(Constant::Pi)
        }
        fn epsilon() -> Self {
            let two = Big::new(2);
            Big(two.0.pow(1 - working_bits() as i32))
        }
        fn sqrt(&self) -> Self {
            Big(self.0.clone().sqrt())
        }
        fn sin(&self) -> Self {
            Big(self.0.clone().sin())
        }
        fn cos(&self) -> Self {
            Big(self.0.clone().cos())
        }
        fn atan2(&self, x: &Self) -> Self {
            Big(self.0.clone().atan2(&x.0))
        }
        fn abs(&self) -> Self {
            Big(self.0.clone().abs())
        }
        fn floor(&self) -> Self {
            Big(self.0.clone().floor())
        }
        fn from_ratio(num: i128, den: i128) -> Self {
            Big::new(num) / Big::new(den)
        }
    }
}
