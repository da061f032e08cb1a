//! Finite Abelian groups `Z/n_1 + ... + Z/n_k` and their characters.
//!
//! Elements are stored as reduced residue vectors. The same coordinates are
//! used for characters: `(a_1, ..., a_k)` acts by
//! `x -> sum a_t x_t (e / n_t) mod e`, where `e` is the exponent.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    orders: Arc<[u64]>,
    cardinality: u64,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!(
                "cyclic factor order {bad} is below 2"
            )));
        }
        let cardinality = orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::Overflow("group cardinality"))?;
        Ok(FiniteAbelianGroup {
            orders: orders.into(),
            cardinality,
        })
    }

    /// `(Z/n)^rank`.
    pub fn uniform(n: u64, rank: usize) -> Result<Self> {
        Self::new(vec![n; rank])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &n| acc.lcm(&n))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// Builds an element, reducing each (possibly negative) coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        let coords = coords
            .iter()
            .zip(self.orders.iter())
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    pub fn basis_vector(&self, i: usize) -> GroupElement {
        let mut x = self.zero();
        x.coords[i] = 1;
        x
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.cardinality).map(move |mut idx| {
            let mut coords = vec![0; self.rank()];
            for (slot, &n) in coords.iter_mut().zip(self.orders.iter()).rev() {
                *slot = idx % n;
                idx /= n;
            }
            GroupElement {
                group: self.clone(),
                coords,
            }
        })
    }

    pub fn character(&self, coords: &[i64]) -> Result<Character> {
        let x = self.element(coords)?;
        Ok(Character {
            group: x.group,
            coords: x.coords,
        })
    }

    /// Every character of the group, in lexicographic coordinate order.
    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(|x| Character {
            group: x.group,
            coords: x.coords,
        })
    }

    /// Quotient of `Z^gens` by the row space of `relations`, returned as a
    /// group together with the images of the standard generators.
    ///
    /// The relations must have full rank so that the quotient is finite.
    pub fn presented(gens: usize, relations: &[Vec<i64>]) -> Result<(Self, Vec<GroupElement>)> {
        let matrix: Vec<Vec<i128>> = relations
            .iter()
            .map(|row| {
                if row.len() != gens {
                    return Err(Error::InvalidInput("relation row has wrong length".into()));
                }
                Ok(row.iter().map(|&v| v as i128).collect())
            })
            .collect::<Result<_>>()?;
        let (diag, v) = smith_diagonal(matrix, gens)?;
        let mut orders = Vec::new();
        let mut kept = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            match *d {
                0 => return Err(Error::InvalidInput("presented group is infinite".into())),
                1 => {}
                d => {
                    orders.push(u64::try_from(d).map_err(|_| Error::Overflow("invariant factor"))?);
                    kept.push(i);
                }
            }
        }
        let group = FiniteAbelianGroup::new(orders)?;
        let images = (0..gens)
            .map(|j| {
                let coords: Vec<i64> = kept
                    .iter()
                    .zip(group.orders())
                    .map(|(&i, &n)| v[j][i].rem_euclid(n as i128) as i64)
                    .collect();
                group.element(&coords)
            })
            .collect::<Result<_>>()?;
        Ok((group, images))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &GroupElement) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.orders.iter())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }

    /// Least `m >= 1` with `m x = 0`.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.orders.iter())
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

pub fn element_order(x: &GroupElement) -> u64 {
    x.order()
}

/// `{0, x, 2x, ..., (ord - 1)x}` in that order.
pub fn cyclic_span(x: &GroupElement) -> Vec<GroupElement> {
    let mut out = vec![x.group.zero()];
    let mut cur = x.clone();
    while !cur.is_zero() {
        out.push(cur.clone());
        cur = cur.add_unchecked(x);
    }
    out
}

/// Whether `<x>` and `<y>` meet only in zero.
pub fn direct_sum_test(x: &GroupElement, y: &GroupElement) -> Result<bool> {
    if x.group != y.group {
        return Err(Error::GroupMismatch);
    }
    // a nontrivial intersection contains a subgroup of prime order of <y>
    let (ox, oy) = (x.order(), y.order());
    let mut rest = oy;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            let z = y.scale((oy / p) as i64);
            if (0..ox).any(|j| x.scale(j as i64) == z) {
                return Ok(false);
            }
        }
        p += 1;
    }
    Ok(true)
}

/// Whether `elems` generate `group`.
///
/// The subgroup generated by the lifts of `elems` together with
/// `n_t e_t` is all of `Z^k` exactly when its Smith form is trivial.
pub fn generates(elems: &[GroupElement], group: &FiniteAbelianGroup) -> bool {
    if elems.iter().any(|x| &x.group != group) {
        return false;
    }
    let k = group.rank();
    let mut rows: Vec<Vec<i64>> = elems
        .iter()
        .map(|x| x.coords.iter().map(|&c| c as i64).collect())
        .collect();
    for (t, &n) in group.orders().iter().enumerate() {
        let mut row = vec![0i64; k];
        row[t] = n as i64;
        rows.push(row);
    }
    match FiniteAbelianGroup::presented(k, &rows) {
        Ok((quotient, _)) => quotient.cardinality() == 1,
        Err(_) => false,
    }
}

/// Subgroup generated by `elems`, by breadth-first saturation.
pub fn subgroup_closure(elems: &[GroupElement], group: &FiniteAbelianGroup) -> Result<BTreeSet<GroupElement>> {
    if elems.iter().any(|x| &x.group != group) {
        return Err(Error::GroupMismatch);
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(group.zero());
    queue.push_back(group.zero());
    while let Some(x) = queue.pop_front() {
        for g in elems {
            let y = x.add_unchecked(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    group: FiniteAbelianGroup,
    coords: Vec<u64>,
}

impl Character {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Value as a residue modulo the group exponent.
    pub fn eval(&self, x: &GroupElement) -> Result<u64> {
        if self.group != x.group {
            return Err(Error::GroupMismatch);
        }
        let e = self.group.exponent() as u128;
        let total = self
            .coords
            .iter()
            .zip(&x.coords)
            .zip(self.group.orders.iter())
            .fold(0u128, |acc, ((&a, &b), &n)| {
                (acc + (a as u128 * b as u128 % e) * (e / n as u128)) % e
            });
        Ok(total as u64)
    }

    pub fn scale(&self, k: i64) -> Character {
        let x = GroupElement {
            group: self.group.clone(),
            coords: self.coords.clone(),
        }
        .scale(k);
        Character {
            group: x.group,
            coords: x.coords,
        }
    }

    /// The conjugate character `x -> -chi(x)`.
    pub fn conjugate(&self) -> Character {
        self.scale(-1)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "chi({})", parts.join(","))
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// `{j c : gcd(j, e) = 1}` for `j` ascending, first occurrences only.
pub fn unit_translates(c: &Character) -> Result<Vec<Character>> {
    if c.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let e = c.group.exponent();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for j in (1..e).filter(|j| j.gcd(&e) == 1) {
        let t = c.scale(j as i64);
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Smith diagonalisation `A V = U^{-1} D` tracking only the column transform.
fn smith_diagonal(mut a: Vec<Vec<i128>>, cols: usize) -> Result<(Vec<i128>, Vec<Vec<i128>>)> {
    let rows = a.len();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let checked = |x: Option<i128>| x.ok_or(Error::Overflow("Smith normal form"));

    let mut diag = vec![0i128; cols];
    for t in 0..rows.min(cols) {
        // pivot = entry of least absolute value in the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| (a[i][j].abs(), i, j));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    for j in t..cols {
                        a[i][j] = checked(a[i][j].checked_sub(checked(q.checked_mul(a[t][j]))?))?;
                    }
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for i in t..rows {
                        a[i][j] = checked(a[i][j].checked_sub(checked(q.checked_mul(a[i][t]))?))?;
                    }
                    for row in v.iter_mut() {
                        row[j] = checked(row[j].checked_sub(checked(q.checked_mul(row[t]))?))?;
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                let best_row = (t..rows)
                    .filter(|&i| a[i][t] != 0)
                    .min_by_key(|&i| a[i][t].abs())
                    .unwrap();
                let best_col = (t..cols)
                    .filter(|&j| a[t][j] != 0)
                    .min_by_key(|&j| a[t][j].abs())
                    .unwrap();
                if a[best_row][t].abs() <= a[t][best_col].abs() {
                    a.swap(t, best_row);
                } else {
                    swap_cols(&mut a, &mut v, t, best_col);
                }
                continue;
            }
            // enforce divisibility so the diagonal is the invariant-factor chain
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = checked(a[t][j].checked_add(a[i][j]))?;
                    }
                }
                None => break,
            }
        }
        diag[t] = a[t][t].abs();
    }
    Ok((diag, v))
}

fn swap_cols(a: &mut [Vec<i128>], v: &mut [Vec<i128>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in v.iter_mut() {
        row.swap(x, y);
    }
}
