//! Rational functions. Univariate values are kept with coprime numerator
//! and denominator and a monic denominator; multivariate values only
//! normalise the leading denominator coefficient to 1.

use std::fmt;
use std::sync::Arc;

use super::{sigma_act, Poly, UniPoly};
use crate::error::{Error, Result};
use crate::ffield::{Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant() == Some(Fe::ONE) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if *num.field() != *den.field() {
            return Err(Error::FieldMismatch {
                expected: num.field().id(),
                found: den.field().id(),
            });
        }
        if num.nvars() != den.nvars() {
            return Err(Error::VariableMismatch(num.nvars(), den.nvars()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        let field = Arc::clone(num.field());
        if num.nvars() == 1 {
            let n = num.to_uni().unwrap();
            let d = den.to_uni().unwrap();
            let g = n.gcd(&d);
            let (n, d) = if g.is_zero() || g.is_one() {
                (n, d)
            } else {
                (n.div_exact(&g), d.div_exact(&g))
            };
            let (lead, d) = d.monic();
            let n = n.scale(field.inv(lead).unwrap());
            return RatFunc {
                num: Poly::from_uni(&n),
                den: Poly::from_uni(&d),
            };
        }
        let (_, &lead) = den.terms().iter().next_back().unwrap();
        let inv = field.inv(lead).unwrap();
        RatFunc {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field(), p.nvars());
        Self::canonical(p, one)
    }

    pub fn parse(field: &Arc<Field>, nvars: usize, num: &str, den: Option<&str>) -> Result<Self> {
        let n = Poly::parse(field, nvars, num)?;
        let d = match den {
            Some(s) => Poly::parse(field, nvars, s)?,
            None => Poly::one(field, nvars),
        };
        Self::new(n, d)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<Field> {
        self.num.field()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den` (univariate); `None` for the zero function.
    pub fn degree(&self) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(
            self.num.total_degree().unwrap_or(0) as i64
                - self.den.total_degree().unwrap_or(0) as i64,
        )
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, x: &[Fe]) -> Option<Fe> {
        let f = self.field();
        let d = self.den.eval(x);
        f.inv(d).map(|di| f.mul(self.num.eval(x), di))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den && self.nvars() > 1 {
            return Self::canonical(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::canonical(num, self.den.mul(&other.den))
    }

    pub fn scale(&self, c: Fe) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    pub fn sigma_act(&self, i: i64, q_exp: u32, d: u32) -> Self {
        Self::canonical(
            sigma_act(&self.num, i, q_exp, d),
            sigma_act(&self.den, i, q_exp, d),
        )
    }

    pub fn is_over_subfield(&self, sub_k: u32) -> bool {
        self.num.is_over_subfield(sub_k) && self.den.is_over_subfield(sub_k)
    }

    pub fn num_uni(&self) -> Result<UniPoly> {
        self.num.to_uni()
    }

    pub fn den_uni(&self) -> Result<UniPoly> {
        self.den.to_uni()
    }
}

/// `Σ_{i<d} σ^i(f)`, whose coefficients lie in `F_q`.
pub fn trace_rational(f: &RatFunc, q_exp: u32, d: u32) -> RatFunc {
    let mut acc = f.clone();
    for i in 1..d {
        acc = acc.add(&f.sigma_act(i as i64, q_exp, d));
    }
    assert!(
        acc.is_over_subfield(q_exp),
        "trace of a rational function is Frobenius-fixed"
    );
    acc
}
