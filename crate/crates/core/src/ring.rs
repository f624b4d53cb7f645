//! Coefficient rings and their exact element arithmetic.
//!
//! Four rings are supported: the integers, the rationals, prime fields with a
//! machine-word modulus, and the integers localized at a prime (fractions
//! whose denominator is coprime to `p`). All arithmetic is exact; elements
//! are kept in a canonical form so equality is structural.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::Error;
use crate::util::{inv_mod, is_prime_u64, mul_mod};

/// Largest admissible modulus for `Ring::PrimeField`. Residues stay in a
/// `u64` and products fit a `u128`.
pub const MAX_PRIME: u64 = 1 << 61;

/// A coefficient ring together with everything needed to compute in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The ring of integers; units are 1 and -1.
    Integers,
    /// The field of rationals.
    Rationals,
    /// GF(p) for a prime `p < 2^61`; elements are residues in `[0, p)`.
    PrimeField(u64),
    /// Z localized at the prime `p`: reduced fractions `a/b` with `p` not
    /// dividing `b`. Units are the fractions with `p` not dividing `a`.
    LocalizedIntegers(u64),
}

/// An element of one of the supported rings, in canonical form:
/// integers as arbitrary-precision values, fractions fully reduced with a
/// positive denominator, residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
}

impl Ring {
    /// GF(p) with the primality and word-size bounds checked.
    pub fn prime_field(p: u64) -> Result<Ring, Error> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        Ok(Ring::PrimeField(p))
    }

    /// Z localized at p, with primality checked.
    pub fn localized(p: u64) -> Result<Ring, Error> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::LocalizedIntegers(p))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Ring::Rationals | Ring::PrimeField(_))
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Ring::Integers => Coeff::Int(BigInt::zero()),
            Ring::Rationals | Ring::LocalizedIntegers(_) => Coeff::Rat(BigRational::zero()),
            Ring::PrimeField(_) => Coeff::Mod(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> Coeff {
        match self {
            Ring::Integers => Coeff::Int(n),
            Ring::Rationals | Ring::LocalizedIntegers(_) => Coeff::Rat(BigRational::from(n)),
            Ring::PrimeField(p) => {
                let r = n.mod_floor_u64(*p);
                Coeff::Mod(r)
            }
        }
    }

    /// Construct a fraction `a/b`; fails in Z (unless `b | a`), and in
    /// ZLoc(p) when the reduced denominator is divisible by p.
    pub fn from_fraction(&self, a: BigInt, b: BigInt) -> Result<Coeff, Error> {
        if b.is_zero() {
            return Err(Error::parse("zero denominator"));
        }
        match self {
            Ring::Integers => {
                let (q, r) = num::Integer::div_rem(&a, &b);
                if r.is_zero() {
                    Ok(Coeff::Int(q))
                } else {
                    Err(Error::parse(format!("{a}/{b} is not an integer")))
                }
            }
            Ring::Rationals => Ok(Coeff::Rat(BigRational::new(a, b))),
            Ring::LocalizedIntegers(p) => {
                let v = BigRational::new(a, b);
                if v.denom().mod_floor_u64(*p) == 0 {
                    return Err(Error::DenominatorDivisible(v.to_string(), *p));
                }
                Ok(Coeff::Rat(v))
            }
            Ring::PrimeField(p) => {
                let bn = b.mod_floor_u64(*p);
                if bn == 0 {
                    return Err(Error::parse(format!("denominator {b} is 0 mod {p}")));
                }
                let an = a.mod_floor_u64(*p);
                Ok(Coeff::Mod(mul_mod(an, inv_mod(bn, *p), *p)))
            }
        }
    }

    /// Parse the decimal string forms used in the file formats: an integer,
    /// or `a/b` for the fraction-valued rings.
    pub fn parse(&self, s: &str) -> Result<Coeff, Error> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, Error> {
            t.parse::<BigInt>()
                .map_err(|_| Error::parse(format!("bad integer literal {t:?}")))
        };
        match s.split_once('/') {
            Some((a, b)) => self.from_fraction(parse_int(a)?, parse_int(b)?),
            None => {
                let n = parse_int(s)?;
                if let Ring::LocalizedIntegers(_) | Ring::Rationals = self {
                    return Ok(Coeff::Rat(BigRational::from(n)));
                }
                Ok(self.from_bigint(n))
            }
        }
    }

    /// Render an element in the same canonical string form `parse` accepts.
    pub fn format(&self, v: &Coeff) -> String {
        v.to_string()
    }

    fn check(&self, v: &Coeff) {
        debug_assert!(
            matches!(
                (self, v),
                (Ring::Integers, Coeff::Int(_))
                    | (Ring::Rationals, Coeff::Rat(_))
                    | (Ring::LocalizedIntegers(_), Coeff::Rat(_))
                    | (Ring::PrimeField(_), Coeff::Mod(_))
            ),
            "coefficient {v:?} does not belong to {self:?}"
        );
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.modulus();
                let s = x + y;
                Coeff::Mod(if s >= p { s - p } else { s })
            }
            _ => unreachable!(),
        }
    }

    pub fn add_assign(&self, a: &mut Coeff, b: &Coeff) {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => *x += y,
            (Coeff::Rat(x), Coeff::Rat(y)) => *x += y,
            (Coeff::Mod(x), Coeff::Mod(y)) => {
                let p = self.modulus();
                let s = *x + y;
                *x = if s >= p { s - p } else { s };
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.check(a);
        match a {
            Coeff::Int(x) => Coeff::Int(-x),
            Coeff::Rat(x) => Coeff::Rat(-x),
            Coeff::Mod(0) => Coeff::Mod(0),
            Coeff::Mod(x) => Coeff::Mod(self.modulus() - x),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(mul_mod(*x, *y, self.modulus())),
            _ => unreachable!(),
        }
    }

    /// True iff `x` is invertible. An inverse exists exactly when this holds.
    pub fn is_unit(&self, x: &Coeff) -> bool {
        self.check(x);
        match (self, x) {
            (Ring::Integers, Coeff::Int(v)) => v.magnitude().is_one(),
            (Ring::Rationals, Coeff::Rat(v)) => !v.is_zero(),
            (Ring::LocalizedIntegers(p), Coeff::Rat(v)) => {
                !v.is_zero() && v.numer().mod_floor_u64(*p) != 0
            }
            (Ring::PrimeField(_), Coeff::Mod(v)) => *v != 0,
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self, x: &Coeff) -> Option<Coeff> {
        if !self.is_unit(x) {
            return None;
        }
        Some(match x {
            Coeff::Int(v) => Coeff::Int(v.clone()),
            Coeff::Rat(v) => Coeff::Rat(v.recip()),
            Coeff::Mod(v) => Coeff::Mod(inv_mod(*v, self.modulus())),
        })
    }

    /// `-1/x`, the weight picked up when a matched edge is traversed
    /// backwards. Panics if `x` is not a unit.
    pub fn neg_inverse(&self, x: &Coeff) -> Coeff {
        self.neg(&self.inverse(x).expect("neg_inverse of a non-unit"))
    }

    fn modulus(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => unreachable!("modulus outside GF(p)"),
        }
    }

    /// p-adic valuation of a nonzero element of Z or ZLoc(p). In ZLoc the
    /// denominator is coprime to p, so only the numerator counts.
    pub fn valuation(&self, p: u64, x: &Coeff) -> u32 {
        let n = match x {
            Coeff::Int(v) => v.clone(),
            Coeff::Rat(v) => v.numer().clone(),
            Coeff::Mod(_) => panic!("valuation in a prime field"),
        };
        assert!(!n.is_zero(), "valuation of zero");
        let p = BigInt::from(p);
        let mut n = n;
        let mut v = 0;
        loop {
            let (q, r) = num::Integer::div_rem(&n, &p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    /// Exact division by `p^e`; the caller guarantees divisibility (in the
    /// fraction rings: the numerator carries valuation at least `e`).
    pub fn divide_pow(&self, p: u64, e: u32, x: &Coeff) -> Coeff {
        let d = BigInt::from(p).pow(e);
        match x {
            Coeff::Int(v) => {
                let (q, r) = num::Integer::div_rem(v, &d);
                assert!(r.is_zero(), "inexact division by {p}^{e}");
                Coeff::Int(q)
            }
            Coeff::Rat(v) => {
                let out = v / BigRational::from(d);
                debug_assert!(
                    !matches!(self, Ring::LocalizedIntegers(_))
                        || num::Integer::mod_floor(out.denom(), &BigInt::from(p)) != BigInt::zero(),
                    "inexact division by {p}^{e} left the local ring"
                );
                Coeff::Rat(out)
            }
            Coeff::Mod(_) => panic!("divide_pow in a prime field"),
        }
    }
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Int(v) => v.is_zero(),
            Coeff::Rat(v) => v.is_zero(),
            Coeff::Mod(v) => *v == 0,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Int(v) => write!(f, "{v}"),
            Coeff::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Coeff::Mod(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
            Ring::LocalizedIntegers(p) => write!(f, "ZLoc({p})"),
        }
    }
}

impl Ring {
    /// Parse the ring tags used in CHC files: `Z`, `Q`, `GF(p)`, `ZLoc(p)`.
    pub fn parse_tag(s: &str) -> Result<Ring, Error> {
        let s = s.trim();
        match s {
            "Z" => return Ok(Ring::Integers),
            "Q" => return Ok(Ring::Rationals),
            _ => {}
        }
        let inner = |prefix: &str| -> Option<&str> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')
        };
        if let Some(p) = inner("GF") {
            let p: u64 = p.parse().map_err(|_| Error::parse(format!("bad prime in {s:?}")))?;
            return Ring::prime_field(p);
        }
        if let Some(p) = inner("ZLoc") {
            let p: u64 = p.parse().map_err(|_| Error::parse(format!("bad prime in {s:?}")))?;
            return Ring::localized(p);
        }
        Err(Error::parse(format!("unknown ring tag {s:?}")))
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue below a u64 modulus"),
        }
    }
}
