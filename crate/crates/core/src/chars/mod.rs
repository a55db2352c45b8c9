//! Multiplicative and additive characters of a finite field, valued in
//! `Z[ζ_N]` with `N = p·(|F| - 1)`.
//!
//! Every character of a field `F` of size `Q` lands in the same ring, so
//! products of a multiplicative and an additive value are single roots
//! `ζ_N^{p·a + (Q-1)·c}`. The sum engine works with these exponents
//! directly; [`char_eval`] is the exact, element-level entry point.

pub mod cyclo;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use cyclo::{cyc_canonical, Accumulator, Approx, CycValue};

use crate::error::{Error, Result};
use crate::ffield::{gcd, Element, Fe, Field};

/// Cyclotomic order `p·(|F| - 1)` shared by all character values on `F`.
pub fn cyc_order(field: &Field) -> u32 {
    let n = field.characteristic() as u64 * field.order();
    u32::try_from(n).expect("cyclotomic order fits in u32 under the field cap")
}

/// Exponent of `ζ_N` for `ζ_{Q-1}^m · ζ_p^a`.
#[inline]
pub fn combine_exponents(field: &Field, mult: u64, add: u32) -> u32 {
    let p = field.characteristic() as u64;
    let n1 = field.order();
    ((p * (mult % n1) + n1 * add as u64) % (p * n1)) as u32
}

fn check_field(expected: &Field, x: &Element) -> Result<()> {
    if *x.field != *expected {
        return Err(Error::FieldMismatch {
            expected: expected.id(),
            found: x.field.id(),
        });
    }
    Ok(())
}

/// `χ(gen^j) = ζ_{Q-1}^{k·j}`, extended by `χ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultChar {
    field: Arc<Field>,
    k_idx: u64,
}

impl MultChar {
    pub fn new(field: Arc<Field>, k_idx: u64) -> Self {
        let k_idx = k_idx % field.order();
        MultChar { field, k_idx }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k_idx(&self) -> u64 {
        self.k_idx
    }

    pub fn order(&self) -> u64 {
        let n = self.field.order();
        n / gcd(self.k_idx, n)
    }

    pub fn is_trivial(&self) -> bool {
        self.k_idx == 0
    }

    pub fn pow(&self, e: u64) -> MultChar {
        let n = self.field.order() as u128;
        MultChar::new(
            Arc::clone(&self.field),
            ((self.k_idx as u128 * e as u128) % n) as u64,
        )
    }

    pub fn mul(&self, other: &MultChar) -> MultChar {
        MultChar::new(Arc::clone(&self.field), self.k_idx + other.k_idx)
    }

    pub fn conjugate(&self) -> MultChar {
        let n = self.field.order();
        MultChar::new(Arc::clone(&self.field), (n - self.k_idx) % n)
    }

    /// Exponent of `ζ_{Q-1}` at `x`, `None` at zero.
    #[inline]
    pub fn exponent(&self, x: Fe) -> Option<u64> {
        let n = self.field.order();
        self.field
            .log(x)
            .map(|j| ((j as u128 * self.k_idx as u128) % n as u128) as u64)
    }

    pub fn eval(&self, x: &Element) -> Result<CycValue> {
        check_field(&self.field, x)?;
        let n = cyc_order(&self.field);
        Ok(match self.exponent(x.value) {
            None => CycValue::zero(n),
            Some(m) => CycValue::root(n, combine_exponents(&self.field, m, 0) as u64),
        })
    }
}

/// `ψ_b(x) = ζ_p^{Tr_{F/F_p}(b·x)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddChar {
    field: Arc<Field>,
    b: Fe,
}

impl AddChar {
    pub fn new(field: Arc<Field>, b: Fe) -> Self {
        AddChar { field, b }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn twist(&self) -> Fe {
        self.b
    }

    pub fn is_trivial(&self) -> bool {
        self.b.is_zero()
    }

    /// Exponent of `ζ_p` at `x`.
    #[inline]
    pub fn exponent(&self, x: Fe) -> u32 {
        self.field.abs_trace(self.field.mul(self.b, x))
    }

    pub fn eval(&self, x: &Element) -> Result<CycValue> {
        check_field(&self.field, x)?;
        let n = cyc_order(&self.field);
        let a = self.exponent(x.value);
        Ok(CycValue::root(
            n,
            combine_exponents(&self.field, 0, a) as u64,
        ))
    }
}

/// Either kind of character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Character {
    Mult(MultChar),
    Add(AddChar),
}

impl Character {
    pub fn field(&self) -> &Arc<Field> {
        match self {
            Character::Mult(c) => c.field(),
            Character::Add(c) => c.field(),
        }
    }
}

pub fn char_eval(c: &Character, x: &Element) -> Result<CycValue> {
    match c {
        Character::Mult(m) => m.eval(x),
        Character::Add(a) => a.eval(x),
    }
}

/// Config form of a character: `{"mult": {"k_idx": 1}}` or
/// `{"add": {"b": "g"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharDescriptor {
    Mult { k_idx: u64 },
    Add { b: String },
}

impl CharDescriptor {
    pub fn build(&self, field: &Arc<Field>) -> Result<Character> {
        Ok(match self {
            CharDescriptor::Mult { k_idx } => {
                Character::Mult(MultChar::new(Arc::clone(field), *k_idx))
            }
            CharDescriptor::Add { b } => {
                Character::Add(AddChar::new(Arc::clone(field), field.parse(b)?))
            }
        })
    }
}
