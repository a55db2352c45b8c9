#![allow(dead_code)]

use std::sync::Arc;

use charsum_core::ffield::{build_field, Fe, Field};
use charsum_core::polyrat::{Poly, UniPoly};
use charsum_core::sheaf::{AsJson, KummerJson, SheafSpec, SheafSpecJson};
use proptest::prelude::*;

/// `(p, q_exp, d)` with `q^d ≤ 64`.
pub const TOWERS: &[(u32, u32, u32)] = &[
    (2, 1, 2),
    (2, 1, 3),
    (2, 2, 2),
    (2, 1, 4),
    (3, 1, 2),
    (5, 1, 2),
    (2, 3, 2),
];

/// Text of the polynomial with the given coefficient indices (lowest
/// first), lead coefficient forced nonzero.
pub fn poly_text(field: &Arc<Field>, c: &[u32]) -> String {
    let size = field.size();
    let mut v: Vec<Fe> = c.iter().map(|&x| Fe(x % size)).collect();
    let last = v.len() - 1;
    v[last] = Fe(c[last] % (size - 1) + 1);
    Poly::from_uni(&UniPoly::new(Arc::clone(field), v)).to_string()
}

#[derive(Clone, Debug)]
pub struct RawSpec {
    pub tower: (u32, u32, u32),
    pub kummer: Vec<(u64, Vec<u32>)>,
    pub as_factor: Option<(u32, Vec<u32>, Vec<u32>)>,
}

impl RawSpec {
    pub fn json(&self) -> SheafSpecJson {
        let (p, qe, d) = self.tower;
        let f = build_field(p, qe * d).unwrap();
        SheafSpecJson {
            p: p as u64,
            q_exp: qe,
            d,
            n: 1,
            kummer: self
                .kummer
                .iter()
                .map(|(k, c)| KummerJson {
                    k_idx: *k,
                    poly: poly_text(&f, c),
                })
                .collect(),
            as_factor: self.as_factor.as_ref().map(|(b, n, den)| AsJson {
                b: f.format(Fe(b % (f.size() - 1) + 1)),
                num: poly_text(&f, n),
                den: Some(poly_text(&f, den)),
            }),
            exclude: None,
        }
    }

    pub fn spec(&self) -> SheafSpec {
        SheafSpec::from_json(&self.json()).unwrap()
    }
}

pub fn raw_spec() -> impl Strategy<Value = RawSpec> {
    (
        prop::sample::select(TOWERS.to_vec()),
        prop::collection::vec((any::<u64>(), prop::collection::vec(any::<u32>(), 1..=3)), 0..=2),
        prop::option::of((
            any::<u32>(),
            prop::collection::vec(any::<u32>(), 1..=4),
            prop::collection::vec(any::<u32>(), 1..=3),
        )),
    )
        .prop_map(|(tower, kummer, as_factor)| RawSpec {
            tower,
            kummer,
            as_factor,
        })
}
