//! Exact numbers of the form `p + q·√d` with rational `p`, `q` and a
//! squarefree radicand `d`, plus the literal grammar shared by every input
//! format:
//!
//! ```text
//! scalar := rat | [rat ("+"|"-")] rat "*sqrt(" uint ")"
//! rat    := ["-"] uint ["/" posuint]
//! ```

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rationals are always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: &'static str },
    #[error("radicand mismatch: expected sqrt({expected}), found sqrt({found})")]
    RadicandMismatch { expected: u64, found: u64 },
    #[error("radicand {0} is not a positive squarefree integer")]
    NotSquarefree(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// A positive squarefree integer. `Radicand::ONE` is the purely rational field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radicand(u64);

impl Radicand {
    pub const ONE: Radicand = Radicand(1);

    pub fn new(d: u64) -> Result<Self, ScalarError> {
        if is_squarefree(d) {
            Ok(Radicand(d))
        } else {
            Err(ScalarError::NotSquarefree(d))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_rational(self) -> bool {
        self.0 == 1
    }

    /// The common field of two radicands; `ONE` is compatible with everything.
    pub fn join(self, other: Radicand) -> Result<Radicand, ScalarError> {
        if self == other || other.is_rational() {
            Ok(self)
        } else if self.is_rational() {
            Ok(other)
        } else {
            Err(ScalarError::RadicandMismatch {
                expected: self.0,
                found: other.0,
            })
        }
    }
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// The radicand shared by one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScalarContext {
    pub radicand: Radicand,
}

impl ScalarContext {
    pub fn new(d: u64) -> Result<Self, ScalarError> {
        Ok(ScalarContext {
            radicand: Radicand::new(d)?,
        })
    }

    pub fn rational() -> Self {
        ScalarContext {
            radicand: Radicand::ONE,
        }
    }
}

/// The exact real number `rat + irr·√radicand`.
///
/// Stored canonically: a zero irrational part always carries `Radicand::ONE`,
/// and with `Radicand::ONE` the irrational part is folded into the rational
/// part. Structural equality is therefore numeric equality.
///
/// Arithmetic operators and `Ord` panic when two operands carry different
/// nontrivial radicands; the `checked_*` methods and [`compare`] report that
/// as [`ScalarError::RadicandMismatch`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    rat: Rational,
    irr: Rational,
    radicand: Radicand,
}

impl QuadScalar {
    pub fn new(rat: Rational, irr: Rational, radicand: Radicand) -> Self {
        let (rat, irr, radicand) = if radicand.is_rational() {
            (rat + irr, Rational::zero(), Radicand::ONE)
        } else if irr.is_zero() {
            (rat, irr, Radicand::ONE)
        } else {
            (rat, irr, radicand)
        };
        QuadScalar { rat, irr, radicand }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_rational(rat: Rational) -> Self {
        QuadScalar {
            rat,
            irr: Rational::zero(),
            radicand: Radicand::ONE,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// `q·√d`.
    pub fn sqrt_multiple(q: Rational, radicand: Radicand) -> Self {
        Self::new(Rational::zero(), q, radicand)
    }

    pub fn rat_part(&self) -> &Rational {
        &self.rat
    }

    pub fn irr_part(&self) -> &Rational {
        &self.irr
    }

    pub fn radicand(&self) -> Radicand {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// Exact sign of `p + q√d`.
    pub fn signum(&self) -> Ordering {
        let zero = Rational::zero();
        let sp = self.rat.cmp(&zero);
        let sq = self.irr.cmp(&zero);
        match (sp, sq) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            _ => {
                // Opposite signs: sign(p + q√d) = sign(q)·sign(q²d − p²).
                // q²d ≠ p² because √d is irrational.
                let d = Rational::from_integer(BigInt::from(self.radicand.0));
                let qq = &self.irr * &self.irr * d;
                let pp = &self.rat * &self.rat;
                let s = qq.cmp(&pp);
                if sq == Ordering::Greater {
                    s
                } else {
                    s.reverse()
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> QuadScalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn mul_by_rational(&self, k: &Rational) -> QuadScalar {
        QuadScalar::new(&self.rat * k, &self.irr * k, self.radicand)
    }

    pub fn checked_add(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        let d = self.radicand.join(other.radicand)?;
        Ok(QuadScalar::new(
            &self.rat + &other.rat,
            &self.irr + &other.irr,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        let d = self.radicand.join(other.radicand)?;
        Ok(QuadScalar::new(
            &self.rat - &other.rat,
            &self.irr - &other.irr,
            d,
        ))
    }

    pub fn checked_mul(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        let d = self.radicand.join(other.radicand)?;
        let dd = Rational::from_integer(BigInt::from(d.0));
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dd;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(QuadScalar::new(rat, irr, d))
    }

    pub fn checked_div(&self, other: &QuadScalar) -> Result<QuadScalar, ScalarError> {
        let d = self.radicand.join(other.radicand)?;
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // Multiply through by the conjugate; the norm is nonzero for nonzero input.
        let dd = Rational::from_integer(BigInt::from(d.0));
        let norm = &other.rat * &other.rat - &other.irr * &other.irr * &dd;
        let rat = &self.rat * &other.rat - &self.irr * &other.irr * &dd;
        let irr = &self.irr * &other.rat - &self.rat * &other.irr;
        Ok(QuadScalar::new(rat / &norm, irr / norm, d))
    }

    /// Greatest integer not exceeding the value, computed exactly.
    pub fn floor(&self) -> BigInt {
        if self.irr.is_zero() {
            return self.rat.floor().to_integer();
        }
        let n = self.irr.numer();
        let m = self.irr.denom();
        // floor(|n|√d / m) = floor(isqrt(n²d) / m)
        let root = (n * n * BigInt::from(self.radicand.0)).sqrt();
        let fl = root.div_floor(m);
        // q√d is irrational, so floor(−y) = −floor(y) − 1.
        let s = if n.is_positive() { fl } else { -fl - 1 };
        let base = (&self.rat + Rational::from_integer(s.clone())).floor().to_integer();
        let candidate = QuadScalar::from_rational(Rational::from_integer(&base + 1));
        if self.checked_sub(&candidate).expect("rational operand").signum() != Ordering::Less {
            base + 1
        } else {
            base
        }
    }
}

/// Exact comparison; errors when the operands live in different fields.
pub fn compare(a: &QuadScalar, b: &QuadScalar) -> Result<Ordering, ScalarError> {
    Ok(a.checked_sub(b)?.signum())
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other).expect("QuadScalar comparison across radicands")
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar {
            rat: -&self.rat,
            irr: -&self.irr,
            radicand: self.radicand,
        }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadScalar> for &QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                self.$checked(rhs).expect("QuadScalar arithmetic across radicands")
            }
        }
        impl $trait<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadScalar> for &QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl From<Rational> for QuadScalar {
    fn from(r: Rational) -> Self {
        QuadScalar::from_rational(r)
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        QuadScalar::from_integer(n)
    }
}

/// Canonical literal: `3/2`, `1*sqrt(2)`, `-3+2*sqrt(2)`, `1/2-1/3*sqrt(5)`.
impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}*sqrt({})", self.irr, self.radicand);
        }
        let sign = if self.irr.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt({})", self.rat, sign, self.irr.abs(), self.radicand)
    }
}

/// A parsed literal together with the radicand it spelled out, if any.
///
/// `1+0*sqrt(2)` parses to the rational 1 but still names radicand 2, which
/// matters for formats that infer their field from the first literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub value: QuadScalar,
    pub written_radicand: Option<Radicand>,
}

/// Parse a literal, accepting any squarefree radicand.
pub fn parse_literal(text: &str) -> Result<Literal, ScalarError> {
    Parser::new(text).scalar()
}

/// Parse a literal in a fixed context. A literal naming a different radicand
/// is rejected even when its irrational coefficient is zero.
pub fn parse_scalar(text: &str, ctx: &ScalarContext) -> Result<QuadScalar, ScalarError> {
    let lit = parse_literal(text)?;
    if let Some(found) = lit.written_radicand {
        if found != ctx.radicand {
            return Err(ScalarError::RadicandMismatch {
                expected: ctx.radicand.get(),
                found: found.get(),
            });
        }
    }
    Ok(lit.value)
}

/// Canonical literal text; identical to the `Display` output.
pub fn format_scalar(x: &QuadScalar) -> String {
    alloc::format!("{x}")
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: &'static str) -> ScalarError {
        ScalarError::Syntax {
            column: self.pos + 1,
            message,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, ScalarError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        // Only ASCII digits were consumed.
        Ok(core::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    fn uint(&mut self) -> Result<BigInt, ScalarError> {
        let s = self.digits()?;
        Ok(s.parse::<BigInt>().expect("ascii digits"))
    }

    fn rat(&mut self) -> Result<Rational, ScalarError> {
        let negative = self.eat(b'-');
        let numer = self.uint()?;
        let denom = if self.eat(b'/') {
            let at = self.pos;
            let d = self.uint()?;
            if d.is_zero() {
                return Err(ScalarError::Syntax {
                    column: at + 1,
                    message: "denominator must be positive",
                });
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational::new(numer, denom);
        Ok(if negative { -r } else { r })
    }

    fn sqrt_tail(&mut self) -> Result<Radicand, ScalarError> {
        if !self.eat_str("*sqrt(") {
            return Err(self.err("expected \"*sqrt(\""));
        }
        let at = self.pos;
        let s = self.digits()?;
        let d: u64 = s.parse().map_err(|_| ScalarError::Syntax {
            column: at + 1,
            message: "radicand out of range",
        })?;
        let radicand = Radicand::new(d)?;
        if !self.eat(b')') {
            return Err(self.err("expected \")\""));
        }
        Ok(radicand)
    }

    fn end(&self) -> Result<(), ScalarError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn scalar(mut self) -> Result<Literal, ScalarError> {
        let first = self.rat()?;
        let (rat, irr, radicand) = match self.peek() {
            None => {
                return Ok(Literal {
                    value: QuadScalar::from_rational(first),
                    written_radicand: None,
                })
            }
            Some(b'*') => {
                let d = self.sqrt_tail()?;
                (Rational::zero(), first, d)
            }
            Some(c @ (b'+' | b'-')) => {
                self.pos += 1;
                let coeff = self.rat()?;
                let d = self.sqrt_tail()?;
                let coeff = if c == b'-' { -coeff } else { coeff };
                (first, coeff, d)
            }
            Some(_) => return Err(self.err("expected \"+\", \"-\" or \"*sqrt(\"")),
        };
        self.end()?;
        Ok(Literal {
            value: QuadScalar::new(rat, irr, radicand),
            written_radicand: Some(radicand),
        })
    }
}
