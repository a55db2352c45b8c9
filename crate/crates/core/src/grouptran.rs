//! The transfer homomorphism `G^ab → H^ab` for explicit finite groups.
//!
//! Groups are multiplication tables over indices `0..n`. Right cosets `Hg`
//! and the permutation `τ` with `Hg_i g = Hg_{τ(i)}` follow the usual
//! convention; the transfer of `g` is `Π_i g_i g g_{τ(i)}^{-1}` taken
//! modulo `[H,H]`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted.
pub const MAX_GROUP_ORDER: usize = 720;

/// Representative systems are enumerated exhaustively up to this count,
/// otherwise sampled.
pub const EXHAUSTIVE_REP_SYSTEMS: u64 = 5000;
pub const SAMPLED_REP_SYSTEMS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Explicit-table group descriptor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDescriptor {
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_label(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut s = String::new();
    for i in 0..perm.len() {
        if seen[i] || perm[i] == i {
            continue;
        }
        let mut cyc = vec![i + 1];
        seen[i] = true;
        let mut j = perm[i];
        while j != i {
            seen[j] = true;
            cyc.push(j + 1);
            j = perm[j];
        }
        let parts: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("({})", parts.join(" ")));
    }
    if s.is_empty() {
        "e".into()
    } else {
        s
    }
}

impl FiniteGroup {
    /// Validates a multiplication table (`table[a][b] = a·b`).
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Error::MalformedGroup(format!("{name}: {m}"));
        if n == 0 {
            return Err(bad("empty table"));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::CapExceeded(format!(
                "group order {n} exceeds {MAX_GROUP_ORDER}"
            )));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("table is not n×n over 0..n"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| bad("no identity"))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| bad("missing inverse"))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(bad("label count differs from order")),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteGroup {
            name: name.to_string(),
            labels,
            table,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedGroup("cyclic:0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&format!("cyclic:{n}"), table, None)
    }

    /// Dihedral group of order `2n`: `r^i s^j` at index `2i + j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::MalformedGroup("dihedral:0".into()));
        }
        let idx = |i: usize, j: usize| 2 * (i % n) + j;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for i1 in 0..n {
            for j1 in 0..2 {
                for i2 in 0..n {
                    for j2 in 0..2 {
                        // r^i1 s^j1 r^i2 s^j2 = r^{i1 ± i2} s^{j1+j2}
                        let i = if j1 == 0 { i1 + i2 } else { i1 + n - i2 };
                        table[idx(i1, j1)][idx(i2, j2)] = idx(i, (j1 + j2) % 2);
                    }
                }
            }
        }
        let labels = (0..2 * n)
            .map(|k| {
                let (i, j) = (k / 2, k % 2);
                match (i, j) {
                    (0, 0) => "e".to_string(),
                    (_, 0) => format!("r^{i}"),
                    (0, _) => "s".to_string(),
                    _ => format!("r^{i}s"),
                }
            })
            .collect();
        Self::from_table(&format!("dihedral:{n}"), table, Some(labels))
    }

    /// Symmetric group on `n ≤ 6` letters; `(a·b)(x) = a(b(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(Error::CapExceeded(format!("symmetric:{n} (n must be 1..=6)")));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&(0..n).map(|x| a[b[x]]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        Self::from_table(&format!("symmetric:{n}"), table, Some(labels))
    }

    /// `cyclic:n`, `dihedral:n`, `symmetric:n`, or a JSON table descriptor.
    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let d: TableDescriptor =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return Self::from_table("table", d.table, d.labels);
        }
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad group descriptor `{s}`")))?;
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad group order in `{s}`")))?;
        match kind {
            "cyclic" => Self::cyclic(n),
            "dihedral" => Self::dihedral(n),
            "symmetric" => Self::symmetric(n),
            _ => Err(Error::Parse(format!("unknown group family `{kind}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find_label(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a generating set.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup::from_members(self, set.into_iter().collect())
    }

    /// Every subgroup, ordered by (order, member list). Built by closing
    /// the cyclic subgroups under pairwise joins.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut layer: Vec<Vec<usize>> = Vec::new();
        for a in 0..self.order() {
            let h = self.generated(&[a]).members;
            if seen.insert(h.clone()) {
                layer.push(h);
            }
        }
        let cyclic = layer.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for h in &layer {
                for c in &cyclic {
                    let mut gens = h.clone();
                    gens.extend(c);
                    let j = self.generated(&gens).members;
                    if seen.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<Subgroup> = seen
            .into_iter()
            .map(|m| Subgroup::from_members(self, m))
            .collect();
        out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then(a.members.cmp(&b.members)));
        out
    }

    /// `[H,H]` for a subgroup `H`: the subgroup generated by all
    /// commutators, closed under conjugation by `H` until stable.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut gens: BTreeSet<usize> = BTreeSet::new();
        for &a in &h.members {
            for &b in &h.members {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                gens.insert(c);
            }
        }
        loop {
            let cur = self.generated(&gens.iter().copied().collect::<Vec<_>>());
            let mut grew = false;
            for &x in &cur.members {
                for &a in &h.members {
                    let y = self.mul(self.mul(a, x), self.inv(a));
                    if !cur.contains(y) && gens.insert(y) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return cur;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn from_members(g: &FiniteGroup, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; g.order()];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup { members, mask }
    }

    /// Validated constructor for user-supplied member lists.
    pub fn new(g: &FiniteGroup, members: Vec<usize>) -> Result<Self> {
        if members.iter().any(|&m| m >= g.order()) {
            return Err(Error::MalformedGroup("subgroup member out of range".into()));
        }
        let s = Self::from_members(g, members);
        if !s.contains(g.identity()) {
            return Err(Error::MalformedGroup("subgroup lacks the identity".into()));
        }
        for &a in &s.members {
            for &b in &s.members {
                if !s.contains(g.mul(a, g.inv(b))) {
                    return Err(Error::MalformedGroup("subset is not a subgroup".into()));
                }
            }
        }
        Ok(s)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask[a]
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self, g: &FiniteGroup) -> usize {
        g.order() / self.order()
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|x| {
            self.members
                .iter()
                .all(|&h| self.contains(g.mul(g.mul(x, h), g.inv(x))))
        })
    }

    /// Right coset id of every element (`Hx = Hy ⇔ id[x] = id[y]`), ids
    /// numbered by smallest member.
    pub fn right_coset_ids(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut id = vec![usize::MAX; g.order()];
        let mut next = 0;
        for x in 0..g.order() {
            if id[x] == usize::MAX {
                for &h in &self.members {
                    id[g.mul(h, x)] = next;
                }
                next += 1;
            }
        }
        id
    }

    /// All right cosets as member lists, in coset-id order.
    pub fn right_cosets(&self, g: &FiniteGroup) -> Vec<Vec<usize>> {
        let ids = self.right_coset_ids(g);
        let mut out = vec![Vec::new(); self.index(g)];
        for (x, &i) in ids.iter().enumerate() {
            out[i].push(x);
        }
        out
    }

    /// Smallest element of each right coset.
    pub fn default_representatives(&self, g: &FiniteGroup) -> Vec<usize> {
        self.right_cosets(g).iter().map(|c| c[0]).collect()
    }
}

/// `H^ab` as a lookup from elements of `H` to canonical class
/// representatives (smallest element of `h[H,H]`).
#[derive(Clone, Debug)]
pub struct Abelianization {
    commutator: Subgroup,
    class: Vec<Option<usize>>,
}

/// A class `h[H,H]`, identified by its smallest element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AbelianizedElement(pub usize);

impl Abelianization {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Self {
        let commutator = g.commutator_subgroup(h);
        let mut class = vec![None; g.order()];
        for &x in h.members() {
            if class[x].is_none() {
                let coset: Vec<usize> = commutator.members().iter().map(|&c| g.mul(x, c)).collect();
                let rep = *coset.iter().min().unwrap();
                for y in coset {
                    class[y] = Some(rep);
                }
            }
        }
        Abelianization { commutator, class }
    }

    pub fn commutator(&self) -> &Subgroup {
        &self.commutator
    }

    /// Class of `x`; `None` if `x ∉ H`.
    pub fn class_of(&self, x: usize) -> Option<AbelianizedElement> {
        self.class[x].map(AbelianizedElement)
    }
}

/// `Π g_i g g_{τ(i)}^{-1}` as an element of `H`, before abelianising.
pub fn transfer_product(g: &FiniteGroup, h: &Subgroup, reps: &[usize], x: usize) -> Result<usize> {
    let ids = h.right_coset_ids(g);
    transfer_product_with_ids(g, h, &ids, reps, x)
}

fn transfer_product_with_ids(
    g: &FiniteGroup,
    h: &Subgroup,
    ids: &[usize],
    reps: &[usize],
    x: usize,
) -> Result<usize> {
    let d = h.index(g);
    if reps.len() != d {
        return Err(Error::MalformedGroup(format!(
            "{} representatives for {d} cosets",
            reps.len()
        )));
    }
    let mut by_coset = vec![usize::MAX; d];
    for &r in reps {
        let c = ids[r];
        if by_coset[c] != usize::MAX {
            return Err(Error::MalformedGroup("two representatives of one coset".into()));
        }
        by_coset[c] = r;
    }
    let mut acc = g.identity();
    for &gi in reps {
        let y = g.mul(gi, x);
        let gt = by_coset[ids[y]];
        let factor = g.mul(y, g.inv(gt));
        if !h.contains(factor) {
            return Err(Error::MalformedGroup("transfer factor outside H".into()));
        }
        acc = g.mul(acc, factor);
    }
    Ok(acc)
}

/// `tran(x)` in `H^ab` for the given right-coset representatives.
pub fn transfer_map(
    g: &FiniteGroup,
    h: &Subgroup,
    ab: &Abelianization,
    reps: &[usize],
    x: usize,
) -> Result<AbelianizedElement> {
    let p = transfer_product(g, h, reps, x)?;
    Ok(ab.class_of(p).expect("transfer product lies in H"))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransferLawReport {
    pub group: String,
    pub subgroup: Vec<String>,
    pub index: usize,
    pub normal: bool,
    pub cyclic_quotient: bool,
    pub rep_systems_checked: u64,
    pub rep_systems_total: u64,
    pub exhaustive: bool,
    pub independence: bool,
    pub homomorphism: bool,
    pub composite_is_power: bool,
    /// `None` when the law does not apply.
    pub normal_conjugate_product: Option<bool>,
    pub cyclic_quotient_power: Option<bool>,
    pub failures: Vec<String>,
}

impl TransferLawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the transfer laws for `(G, H)` over all representative systems
/// (or a seeded sample of them above [`EXHAUSTIVE_REP_SYSTEMS`]).
pub fn verify_transfer_laws(g: &FiniteGroup, h: &Subgroup, seed: u64) -> TransferLawReport {
    let n = g.order();
    let d = h.index(g);
    let ids = h.right_coset_ids(g);
    let cosets = h.right_cosets(g);
    let ab_h = Abelianization::new(g, h);
    let whole = Subgroup::from_members(g, (0..n).collect());
    let ab_g = Abelianization::new(g, &whole);
    let normal = h.is_normal(g);
    let mut rep = TransferLawReport {
        group: g.name().to_string(),
        subgroup: h.members().iter().map(|&x| g.label(x).to_string()).collect(),
        index: d,
        normal,
        independence: true,
        homomorphism: true,
        composite_is_power: true,
        ..Default::default()
    };
    let tran = |reps: &[usize], x: usize| -> Result<usize> {
        transfer_product_with_ids(g, h, &ids, reps, x)
    };
    let class_h = |y: usize| ab_h.class_of(y).expect("in H");
    let base_reps = h.default_representatives(g);
    let base: Vec<AbelianizedElement> = match (0..n).map(|x| tran(&base_reps, x)).collect::<Result<Vec<_>>>() {
        Ok(v) => v.into_iter().map(class_h).collect(),
        Err(e) => {
            rep.failures.push(e.to_string());
            return rep;
        }
    };

    // (a) independence of representatives
    let total = (h.order() as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    rep.rep_systems_total = total;
    rep.exhaustive = total <= EXHAUSTIVE_REP_SYSTEMS;
    let systems: Vec<Vec<usize>> = if rep.exhaustive {
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; d];
        loop {
            out.push((0..d).map(|i| cosets[i][digits[i]]).collect());
            let mut i = 0;
            while i < d {
                digits[i] += 1;
                if digits[i] < cosets[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_REP_SYSTEMS)
            .map(|_| {
                cosets
                    .iter()
                    .map(|c| c[rng.gen_range(0..c.len())])
                    .collect()
            })
            .collect()
    };
    rep.rep_systems_checked = systems.len() as u64;
    'outer: for reps in &systems {
        for x in 0..n {
            let t = class_h(tran(reps, x).expect("valid system"));
            if t != base[x] {
                rep.independence = false;
                rep.failures.push(format!(
                    "representative dependence at g = {} with reps {:?}",
                    g.label(x),
                    reps
                ));
                break 'outer;
            }
        }
    }

    // (b) homomorphism: tran(xy) = tran(x)·tran(y) in H^ab
    'hom: for x in 0..n {
        for y in 0..n {
            let lhs = base[g.mul(x, y)];
            let rhs = class_h(g.mul(base[x].0, base[y].0));
            if lhs != rhs {
                rep.homomorphism = false;
                rep.failures.push(format!(
                    "not a homomorphism at ({}, {})",
                    g.label(x),
                    g.label(y)
                ));
                break 'hom;
            }
        }
    }

    // (c) inclusion ∘ transfer = d-th power in G^ab
    for x in 0..n {
        let lhs = ab_g.class_of(base[x].0).unwrap();
        let rhs = ab_g.class_of(g.pow(x, d)).unwrap();
        if lhs != rhs {
            rep.composite_is_power = false;
            rep.failures
                .push(format!("composite differs from g^d at g = {}", g.label(x)));
            break;
        }
    }

    // (d) normal case: tran(h) = Π g_i h g_i^{-1}
    if normal {
        let mut ok = true;
        for &y in h.members() {
            let prod = base_reps
                .iter()
                .fold(g.identity(), |acc, &gi| g.mul(acc, g.mul(g.mul(gi, y), g.inv(gi))));
            if class_h(prod) != base[y] {
                ok = false;
                rep.failures.push(format!(
                    "conjugate-product formula fails at h = {}",
                    g.label(y)
                ));
                break;
            }
        }
        rep.normal_conjugate_product = Some(ok);

        // (e) cyclic quotient: tran(σ) = σ^d whenever σH generates G/H
        let generators: Vec<usize> = (0..n)
            .filter(|&s| {
                (1..d).all(|k| !h.contains(g.pow(s, k))) && h.contains(g.pow(s, d))
            })
            .collect();
        rep.cyclic_quotient = !generators.is_empty();
        if rep.cyclic_quotient {
            let mut ok = true;
            for &s in &generators {
                if class_h(g.pow(s, d)) != base[s] {
                    ok = false;
                    rep.failures
                        .push(format!("σ^d law fails at σ = {}", g.label(s)));
                    break;
                }
            }
            rep.cyclic_quotient_power = Some(ok);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_example() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let h = Subgroup::new(&g, vec![0, 2]).unwrap();
        let ab = Abelianization::new(&g, &h);
        let reps = h.default_representatives(&g);
        assert_eq!(transfer_map(&g, &h, &ab, &reps, 1).unwrap(), AbelianizedElement(2));
    }

    #[test]
    fn s3_examples() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let a3 = g.generated(&[g.find_label("(1 2 3)").unwrap()]);
        assert_eq!(a3.order(), 3);
        let ab = Abelianization::new(&g, &a3);
        let e = g.identity();
        let t12 = g.find_label("(1 2)").unwrap();
        let c123 = g.find_label("(1 2 3)").unwrap();
        let reps = vec![e, t12];
        assert_eq!(
            transfer_map(&g, &a3, &ab, &reps, t12).unwrap(),
            AbelianizedElement(e)
        );
        assert_eq!(
            transfer_map(&g, &a3, &ab, &reps, c123).unwrap(),
            AbelianizedElement(e)
        );
        let r = verify_transfer_laws(&g, &a3, 0);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.cyclic_quotient_power, Some(true));
    }

    #[test]
    fn whole_group_is_abelianization() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let whole = Subgroup::from_members(&g, (0..6).collect());
        let r = verify_transfer_laws(&g, &whole, 0);
        assert_eq!(r.index, 1);
        assert!(r.passed());
        let ab = Abelianization::new(&g, &whole);
        for x in 0..6 {
            assert_eq!(
                transfer_map(&g, &whole, &ab, &[g.identity()], x).unwrap(),
                ab.class_of(x).unwrap()
            );
        }
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::cyclic(12).unwrap().subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().subgroups().len(), 30);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().subgroups().len(), 10);
    }

    #[test]
    fn commutator_subgroups() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let whole = Subgroup::from_members(&s4, (0..24).collect());
        assert_eq!(s4.commutator_subgroup(&whole).order(), 12);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let whole = Subgroup::from_members(&d4, (0..8).collect());
        assert_eq!(d4.commutator_subgroup(&whole).order(), 2);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![0, 1]], None).is_err());
        assert!(FiniteGroup::parse_descriptor("cyclic:x").is_err());
        assert!(FiniteGroup::parse_descriptor("klein:4").is_err());
        let g = FiniteGroup::parse_descriptor(r#"{"table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(Subgroup::new(&s3, vec![0, 1, 2]).is_err());
    }
}
