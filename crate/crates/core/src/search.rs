//! Finite searches: monodromy orbits on the degree-5 del Pezzo surface,
//! abelian Beauville structures, group-theoretic sphere packings.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::covers::{invariants_general, CoverSpec};
use crate::error::{Error, Result};
use crate::geometry::{delpezzo5, delpezzo_pair_index, delpezzo_pairs};
use crate::hodge::irregularity_and_pg;
use crate::numeric::{int, rat, serialize_rational};
use crate::zgroups::FiniteAbelianGroup;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn primitive_root(p: u64) -> u64 {
    let order = |g: u64| {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    (1..p).find(|&g| order(g) == p - 1).expect("prime modulus")
}

fn delpezzo_nodes() -> &'static [(usize, usize)] {
    static NODES: OnceLock<Vec<(usize, usize)>> = OnceLock::new();
    NODES.get_or_init(|| delpezzo5().nodes)
}

/// Values in `(Z/n)^2` on the ten lines, in pair order `12, 13, ..., 45`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DelPezzoAssignment {
    pub n: u64,
    pub values: [[u64; 2]; 10],
}

impl DelPezzoAssignment {
    pub fn to_spec(&self) -> Result<CoverSpec> {
        let group = FiniteAbelianGroup::uniform(self.n, 2)?;
        let values = self
            .values
            .iter()
            .map(|v| group.element(&[v[0] as i64, v[1] as i64]))
            .collect::<Result<Vec<_>>>()?;
        CoverSpec::delpezzo(group, values)
    }

    fn code(&self) -> u128 {
        self.values
            .iter()
            .flatten()
            .fold(0u128, |acc, &x| acc * self.n as u128 + x as u128)
    }

    fn transform(&self, m: [[u64; 2]; 2]) -> Self {
        let n = self.n;
        let mut values = self.values;
        for v in values.iter_mut() {
            *v = [
                (m[0][0] * v[0] + m[0][1] * v[1]) % n,
                (m[1][0] * v[0] + m[1][1] * v[1]) % n,
            ];
        }
        DelPezzoAssignment { n, values }
    }

    fn permute(&self, perm: &[usize; 5]) -> Self {
        let mut values = self.values;
        for (a, &(i, j)) in delpezzo_pairs().iter().enumerate() {
            values[delpezzo_pair_index(perm[i], perm[j])] = self.values[a];
        }
        DelPezzoAssignment { n: self.n, values }
    }

    /// Nonzero values with linearly independent values at all 15 nodes.
    pub fn admissible(&self) -> bool {
        let n = self.n;
        if self.values.iter().any(|v| v == &[0, 0]) {
            return false;
        }
        let det = |a: [u64; 2], b: [u64; 2]| (a[0] * b[1] + n * n - a[1] * b[0] % n) % n;
        delpezzo_nodes()
            .iter()
            .all(|&(a, b)| det(self.values[a], self.values[b]) != 0)
    }
}

impl Serialize for DelPezzoAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, [u64; 2]> = delpezzo_pairs()
            .iter()
            .zip(self.values)
            .map(|(&(i, j), v)| (format!("{}{}", i + 1, j + 1), v))
            .collect();
        map.serialize(s)
    }
}

/// Basis of the kernel of `matrix` over `Z/p`.
fn kernel_mod_p(matrix: &[Vec<i64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let p = p as i64;
    let mut rows: Vec<Vec<i64>> = matrix
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let inverse = |a: i64| (1..p).find(|b| a * b % p == 1).expect("unit");
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inverse(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..cols {
                    rows[r][c] = (rows[r][c] - f * rows[rank][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (-rows[r][free]).rem_euclid(p) as u64;
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssignmentEnumeration {
    pub n: u64,
    pub kernel_dimension: usize,
    /// Solutions per group coordinate.
    pub kernel_size: u128,
    pub admissible: Vec<DelPezzoAssignment>,
}

/// All admissible `(Z/n)^2` assignments on the ten lines, `n` prime.
pub fn enumerate_assignments(n: u64) -> Result<AssignmentEnumeration> {
    if !is_prime(n) {
        return Err(Error::InvalidInput(format!("n = {n} must be prime")));
    }
    let geometry = delpezzo5();
    let matrix: Vec<Vec<i64>> = (0..geometry.lattice.rank())
        .map(|b| geometry.curves.iter().map(|c| c.class[b]).collect())
        .collect();
    let basis = kernel_mod_p(&matrix, 10, n);
    let d = basis.len();
    let count = (n as u128).pow(d as u32);
    if count * count > 1 << 34 {
        return Err(Error::Unsupported(format!("{count}^2 candidate assignments is too many")));
    }
    let vectors: Vec<[u64; 10]> = (0..count as u64)
        .map(|mut idx| {
            let mut v = [0u64; 10];
            for b in &basis {
                let c = idx % n;
                idx /= n;
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + c * y) % n;
                }
            }
            v
        })
        .collect();
    let admissible: Vec<DelPezzoAssignment> = vectors
        .par_iter()
        .flat_map_iter(|u| {
            vectors.iter().filter_map(move |w| {
                let mut values = [[0u64; 2]; 10];
                for c in 0..10 {
                    values[c] = [u[c], w[c]];
                }
                let a = DelPezzoAssignment { n, values };
                a.admissible().then_some(a)
            })
        })
        .collect();
    Ok(AssignmentEnumeration {
        n,
        kernel_dimension: d,
        kernel_size: count,
        admissible,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub representative: DelPezzoAssignment,
    pub size: usize,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub e: i64,
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitClassification {
    pub n: u64,
    pub kernel_dimension: usize,
    pub admissible_count: usize,
    pub orbits: Vec<OrbitSummary>,
    pub verified_members: usize,
    #[serde(skip)]
    orbit_of: HashMap<u128, usize>,
}

impl OrbitClassification {
    /// Index of the orbit containing `a`, if `a` is admissible.
    pub fn orbit_of(&self, a: &DelPezzoAssignment) -> Option<usize> {
        self.orbit_of.get(&a.code()).copied()
    }
}

fn cover_numbers(a: &DelPezzoAssignment) -> Result<[i64; 5]> {
    let spec = a.to_spec()?;
    let inv = invariants_general(&spec)?;
    let h = irregularity_and_pg(&spec)?;
    let k2 = i64::try_from(inv.k2).map_err(|_| Error::Overflow("K^2"))?;
    let e = i64::try_from(inv.e).map_err(|_| Error::Overflow("e"))?;
    Ok([k2, e, h.chi, h.q, h.p_g])
}

/// Orbits of admissible assignments under `GL(2, Z/n) x S_5`, with the
/// invariants of each orbit checked on every member.
pub fn classify_orbits(n: u64) -> Result<OrbitClassification> {
    let enumeration = enumerate_assignments(n)?;
    let members = enumeration.admissible;
    let index: HashMap<u128, usize> = members.iter().enumerate().map(|(i, a)| (a.code(), i)).collect();
    let w = primitive_root(n);
    let matrices = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[w, 0], [0, 1]]];
    let perms = [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]];
    let images: Vec<Vec<usize>> = members
        .par_iter()
        .map(|a| {
            let moved = matrices
                .iter()
                .map(|&m| a.transform(m))
                .chain(perms.iter().map(|p| a.permute(p)));
            moved
                .map(|b| {
                    index.get(&b.code()).copied().ok_or_else(|| {
                        Error::Inconsistent("the symmetry group does not preserve admissibility".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut uf = UnionFind((0..members.len()).collect());
    for (i, targets) in images.iter().enumerate() {
        for &j in targets {
            uf.union(i, j);
        }
    }
    let mut sorted: Vec<usize> = (0..members.len()).collect();
    sorted.sort_by_key(|&i| members[i]);
    let mut root_to_orbit: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    for &i in &sorted {
        let root = uf.find(i);
        if !root_to_orbit.contains_key(&root) {
            root_to_orbit.insert(root, reps.len());
            reps.push(i);
        }
    }
    let orbit_index: Vec<usize> = (0..members.len()).map(|i| root_to_orbit[&uf.find(i)]).collect();
    let numbers: Vec<[i64; 5]> = members.par_iter().map(cover_numbers).collect::<Result<_>>()?;
    let mut orbits: Vec<OrbitSummary> = reps
        .iter()
        .map(|&i| {
            let [k2, e, chi, q, p_g] = numbers[i];
            OrbitSummary {
                representative: members[i],
                size: 0,
                k2,
                e,
                chi,
                q,
                p_g,
            }
        })
        .collect();
    for (i, &o) in orbit_index.iter().enumerate() {
        orbits[o].size += 1;
        if numbers[i] != numbers[reps[o]] {
            return Err(Error::Inconsistent(format!(
                "invariants differ inside orbit {o}: {:?} vs {:?}",
                numbers[i], numbers[reps[o]]
            )));
        }
    }
    let orbit_of = members.iter().zip(&orbit_index).map(|(a, &o)| (a.code(), o)).collect();
    Ok(OrbitClassification {
        n,
        kernel_dimension: enumeration.kernel_dimension,
        admissible_count: members.len(),
        verified_members: members.len(),
        orbits,
        orbit_of,
    })
}

/// Plane lines `L_hk`, `h < k <= 4`, in lexicographic order (0-based pairs).
const PLANE_LINES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The four representatives printed as six-tuples, in the order given.
pub const PRINTED_SIX_TUPLES: [[[u64; 2]; 6]; 4] = [
    [[1, 0], [1, 0], [0, 1], [2, 1], [2, 1], [4, 2]],
    [[1, 0], [1, 0], [0, 1], [2, 1], [4, 2], [2, 1]],
    [[1, 0], [1, 0], [0, 1], [4, 1], [3, 2], [1, 1]],
    [[1, 0], [1, 0], [0, 1], [1, 1], [0, 3], [2, 0]],
];

/// Line ordering used for the printed tuples: entries go to the plane lines
/// `L12, L13, L14, L24, L34, L23`.
pub const PRINTED_SIX_TUPLE_ORDER: [usize; 6] = [0, 1, 2, 4, 5, 3];

/// Completes six plane-line values to the ten lines: `L_hk = E_ij` with
/// `{i, j, h, k} = {1, 2, 3, 4}`, and `E_i5` carries the sum over the lines
/// through `P_i`. `order[t]` is the plane line receiving entry `t`.
pub fn six_tuple_assignment(n: u64, tuple: &[[u64; 2]; 6], order: &[usize; 6]) -> DelPezzoAssignment {
    let mut values = [[0u64; 2]; 10];
    let mut line_value = [[0u64; 2]; 6];
    for (t, &l) in order.iter().enumerate() {
        line_value[l] = [tuple[t][0] % n, tuple[t][1] % n];
    }
    for (l, &(h, k)) in PLANE_LINES.iter().enumerate() {
        let (i, j) = match (0..4).filter(|&x| x != h && x != k).collect::<Vec<_>>()[..] {
            [i, j] => (i, j),
            _ => unreachable!(),
        };
        values[delpezzo_pair_index(i, j)] = line_value[l];
    }
    for p in 0..4 {
        let mut eps = [0u64; 2];
        for (l, &(h, k)) in PLANE_LINES.iter().enumerate() {
            if h == p || k == p {
                eps = [(eps[0] + line_value[l][0]) % n, (eps[1] + line_value[l][1]) % n];
            }
        }
        values[delpezzo_pair_index(p, 4)] = eps;
    }
    DelPezzoAssignment { n, values }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SixTupleResolution {
    pub order: [usize; 6],
    pub orbits: Vec<usize>,
}

fn permutations6() -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    let mut p = [0, 1, 2, 3, 4, 5];
    fn rec(k: usize, p: &mut [usize; 6], out: &mut Vec<[usize; 6]>) {
        if k == 6 {
            out.push(*p);
            return;
        }
        for i in k..6 {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Orbit of each tuple under a single line ordering, if every tuple is
/// admissible under it.
pub fn locate_six_tuples(
    classification: &OrbitClassification,
    tuples: &[[[u64; 2]; 6]],
    order: &[usize; 6],
) -> Option<Vec<usize>> {
    tuples
        .iter()
        .map(|t| classification.orbit_of(&six_tuple_assignment(classification.n, t, order)))
        .collect()
}

/// Every line ordering under which all tuples are admissible.
pub fn six_tuple_orderings(
    classification: &OrbitClassification,
    tuples: &[[[u64; 2]; 6]],
) -> Vec<SixTupleResolution> {
    permutations6()
        .into_iter()
        .filter_map(|order| {
            locate_six_tuples(classification, tuples, &order).map(|orbits| SixTupleResolution { order, orbits })
        })
        .collect()
}

/// Lexicographically first line ordering under which the tuples land in
/// pairwise distinct orbits and `regular` (if given) lands in the orbit
/// with `q = 0`.
pub fn resolve_six_tuples(
    classification: &OrbitClassification,
    tuples: &[[[u64; 2]; 6]],
    regular: Option<usize>,
) -> Option<SixTupleResolution> {
    permutations6().into_iter().find_map(|order| {
        let orbits = locate_six_tuples(classification, tuples, &order)?;
        let mut distinct = orbits.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let regular_ok = regular.map_or(true, |r| classification.orbits[orbits[r]].q == 0);
        (distinct.len() == orbits.len() && regular_ok).then_some(SixTupleResolution { order, orbits })
    })
}

type Pair = (u64, u64);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BeauvilleDatum {
    pub n: u64,
    pub first: [Pair; 3],
    pub second: [Pair; 3],
}

fn add(n: u64, a: Pair, b: Pair) -> Pair {
    ((a.0 + b.0) % n, (a.1 + b.1) % n)
}

fn neg(n: u64, a: Pair) -> Pair {
    ((n - a.0) % n, (n - a.1) % n)
}

fn det(n: u64, a: Pair, b: Pair) -> u64 {
    (a.0 * b.1 % n + n - a.1 * b.0 % n) % n
}

/// Union of the cyclic subgroups spanned by a triple, as a membership table.
fn sigma_set(n: u64, t: &[Pair; 3]) -> Vec<bool> {
    let mut set = vec![false; (n * n) as usize];
    for &g in t {
        let mut x = (0, 0);
        for _ in 0..n {
            set[(x.0 * n + x.1) as usize] = true;
            x = add(n, x, g);
        }
    }
    set
}

/// Brute-force check that no nonzero element lies in both stabilizer sets.
pub fn beauville_free(d: &BeauvilleDatum) -> bool {
    let n = d.n;
    let in_span = |g: Pair, t: &[Pair; 3]| {
        t.iter().any(|&a| (0..n).any(|k| ((k * a.0) % n, (k * a.1) % n) == g))
    };
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&g| g != (0, 0))
        .all(|g| !(in_span(g, &d.first) && in_span(g, &d.second)))
}

fn canonical_beauville(n: u64, a: [Pair; 3], b: [Pair; 3]) -> BeauvilleDatum {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best: Option<BeauvilleDatum> = None;
    for (s, t) in [(a, b), (b, a)] {
        for p in PERMS {
            let (x, y) = (s[p[0]], s[p[1]]);
            // inverse of the matrix with columns x, y
            let dv = det(n, x, y);
            let inv = (1..n).find(|k| k * dv % n == 1).expect("generating pair");
            let apply = |g: Pair| {
                (
                    inv * ((y.1 * g.0 % n + n - y.0 * g.1 % n) % n) % n,
                    inv * ((x.0 * g.1 % n + n - x.1 * g.0 % n) % n) % n,
                )
            };
            let mut other = [apply(t[0]), apply(t[1]), apply(t[2])];
            other.sort_unstable();
            let cand = BeauvilleDatum {
                n,
                first: [(1, 0), (0, 1), neg(n, (1, 1))],
                second: other,
            };
            if best.as_ref().map_or(true, |b| &cand < b) {
                best = Some(cand);
            }
        }
    }
    best.expect("nonempty")
}

/// All abelian Beauville structures on `(Z/n)^2` up to automorphisms and
/// permutations within and between the two triples.
pub fn beauville_search(n: u64) -> Result<Vec<BeauvilleDatum>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    let first = [(1, 0), (0, 1), neg(n, (1, 1))];
    let sigma1 = sigma_set(n, &first);
    let elems: Vec<Pair> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let mut found: Vec<BeauvilleDatum> = elems
        .par_iter()
        .flat_map_iter(|&a| {
            let sigma1 = &sigma1;
            elems.iter().filter_map(move |&b| {
                if det(n, a, b).gcd(&n) != 1 {
                    return None;
                }
                let second = [a, b, neg(n, add(n, a, b))];
                let sigma2 = sigma_set(n, &second);
                let meets = sigma1.iter().zip(&sigma2).skip(1).any(|(x, y)| *x && *y);
                (!meets).then(|| canonical_beauville(n, first, second))
            })
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

/// A finite group as a Cayley table with a stabilizer set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: String| Err(Error::InvalidInput(format!("Cayley table: {msg}")));
        if n == 0 {
            return bad("empty".into());
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has length {}", row.len()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return bad(format!("row {i} is not a permutation"));
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[c]], true) {
                    return bad(format!("column {c} is not a permutation"));
                }
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity element".into());
        };
        let inverse: Vec<usize> = (0..n)
            .map(|x| (0..n).find(|&y| table[x][y] == identity).expect("latin square"))
            .collect();
        // Light's test: associativity against a generating set suffices
        let mut gens = Vec::new();
        let mut reached = vec![false; n];
        reached[identity] = true;
        while let Some(g) = (0..n).find(|&x| !reached[x]) {
            gens.push(g);
            let mut frontier: Vec<usize> = (0..n).filter(|&x| reached[x]).collect();
            while let Some(x) = frontier.pop() {
                for &h in &gens {
                    let y = table[x][h];
                    if !reached[y] {
                        reached[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        for &g in &gens {
            for x in 0..n {
                for y in 0..n {
                    if table[table[x][y]][g] != table[x][table[y][g]] {
                        return bad(format!("not associative at ({x}, {y}, {g})"));
                    }
                }
            }
        }
        Ok(CayleyTable {
            table,
            identity,
            inverse,
        })
    }

    /// Table of the symmetric group on `k` letters, permutations in
    /// lexicographic order, `(a b)(x) = a(b(x))`.
    pub fn symmetric(k: usize) -> Result<Self> {
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        let mut p: Vec<usize> = (0..k).collect();
        // next-permutation walk
        loop {
            let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("successor");
            p.swap(i - 1, j);
            p[i..].reverse();
            perms.push(p.clone());
        }
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        CayleyTable::new(table)
    }

    /// Table of `Z/n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        CayleyTable::new((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    fn check_elements(&self, s: &[usize]) -> Result<()> {
        match s.iter().find(|&&x| x >= self.order()) {
            Some(x) => Err(Error::InvalidInput(format!("element {x} is not in the group"))),
            None => Ok(()),
        }
    }

    /// Membership table of `s` after checking closure under inversion and
    /// conjugation.
    pub fn stabilizer_set(&self, s: &[usize]) -> Result<Vec<bool>> {
        self.check_elements(s)?;
        let mut member = vec![false; self.order()];
        for &x in s {
            member[x] = true;
        }
        for &x in s {
            if !member[self.inv(x)] {
                return Err(Error::InvalidInput(format!("stabilizer set is not closed under inversion at {x}")));
            }
            for g in 0..self.order() {
                if !member[self.mul(self.mul(g, x), self.inv(g))] {
                    return Err(Error::InvalidInput(format!(
                        "stabilizer set is not closed under conjugation at {x}"
                    )));
                }
            }
        }
        Ok(member)
    }

    fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in h {
            member[x] = true;
        }
        member[self.identity] && h.iter().all(|&a| h.iter().all(|&b| member[self.mul(a, b)]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub mode: PackingMode,
    pub r: usize,
    pub elements: Vec<usize>,
}

/// Largest set `{g_i}` with `g_i^{-1} g_j` outside the stabilizer set for
/// `i != j`; the identity is ignored in `stabilizers`.
pub fn sphere_packing(group: &CayleyTable, stabilizers: &[usize], mode: PackingMode) -> Result<Packing> {
    let mut forbidden = group.stabilizer_set(stabilizers)?;
    forbidden[group.identity()] = false;
    let n = group.order();
    let compatible = |a: usize, b: usize| a != b && !forbidden[group.mul(group.inv(a), b)];
    let elements = match mode {
        PackingMode::Greedy => {
            let mut chosen: Vec<usize> = Vec::new();
            for g in 0..n {
                if chosen.iter().all(|&c| compatible(c, g)) {
                    chosen.push(g);
                }
            }
            chosen
        }
        PackingMode::Exact => {
            if n > 5000 {
                return Err(Error::Unsupported(format!("exact packing needs |G| <= 5000, got {n}")));
            }
            // translating by an element of the packing puts the identity in it
            let e = group.identity();
            let candidates: Vec<usize> = (0..n).filter(|&g| compatible(e, g)).collect();
            let adjacency: Vec<Bitset> = candidates
                .iter()
                .map(|&a| Bitset::from_iter(candidates.len(), candidates.iter().map(|&b| compatible(a, b))))
                .collect();
            let mut clique = MaxClique {
                adjacency: &adjacency,
                best: Vec::new(),
                current: Vec::new(),
            };
            clique.expand(Bitset::full(candidates.len()));
            let mut out = vec![e];
            out.extend(clique.best.iter().map(|&i| candidates[i]));
            out.sort_unstable();
            out
        }
    };
    for (i, &a) in elements.iter().enumerate() {
        for &b in &elements[i + 1..] {
            if !compatible(a, b) {
                return Err(Error::Inconsistent(format!("packing elements {a} and {b} collide")));
            }
        }
    }
    Ok(Packing {
        mode,
        r: elements.len(),
        elements,
    })
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn from_iter(len: usize, bits: impl Iterator<Item = bool>) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, b) in bits.enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Bitset(words)
    }

    fn full(len: usize) -> Self {
        Bitset::from_iter(len, std::iter::repeat(true).take(len))
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

struct MaxClique<'a> {
    adjacency: &'a [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
}

impl MaxClique<'_> {
    /// Greedy colouring of `p`: vertices in colour order with their colour
    /// numbers, used as the branch-and-bound estimate.
    fn colour(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let mut uncoloured = p.clone();
        let mut out = Vec::with_capacity(p.count());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut available = uncoloured.clone();
            while let Some(v) = available.first() {
                available.remove(v);
                uncoloured.remove(v);
                out.push((v, colour));
                available = Bitset(
                    available
                        .0
                        .iter()
                        .zip(&self.adjacency[v].0)
                        .map(|(a, b)| a & !b)
                        .collect(),
                );
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bitset) {
        let order = self.colour(&p);
        for &(v, c) in order.iter().rev() {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = p.and(&self.adjacency[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub embeds: bool,
    pub h1_free: bool,
    pub h2_free: bool,
}

/// `H_2 (H_1 \ {1}) ∩ S = ∅`, with freeness of each `H_i` reported.
pub fn embedding_check(group: &CayleyTable, h1: &[usize], h2: &[usize], s: &[usize]) -> Result<EmbeddingReport> {
    for h in [h1, h2, s] {
        group.check_elements(h)?;
    }
    if !group.is_subgroup(h1) || !group.is_subgroup(h2) {
        return Err(Error::InvalidInput("H1 and H2 must be subgroups".into()));
    }
    let mut member = vec![false; group.order()];
    for &x in s {
        member[x] = true;
    }
    let e = group.identity();
    let free = |h: &[usize]| h.iter().all(|&x| x == e || !member[x]);
    let embeds = h2
        .iter()
        .all(|&b| h1.iter().filter(|&&a| a != e).all(|&a| !member[group.mul(b, a)]));
    Ok(EmbeddingReport {
        embeds,
        h1_free: free(h1),
        h2_free: free(h2),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonalType {
    pub hyperbolic: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub branching_sum: BigRational,
    pub base_genus: Option<i64>,
    pub within_hurwitz_bound: Option<bool>,
}

/// Riemann-Hurwitz for a group of order `group_order` acting on a curve with
/// quotient `P^1` and branching orders `orders`.
pub fn polygonal_type(orders: &[u64], group_order: Option<u64>) -> Result<PolygonalType> {
    if orders.len() < 3 || orders.iter().any(|&x| x < 2) {
        return Err(Error::InvalidInput("need at least three branching orders, each >= 2".into()));
    }
    let sum = orders.iter().fold(int(0), |acc, &m| acc + int(1) - rat(1, m as i64));
    let hyperbolic = sum > int(2);
    let (base_genus, within_hurwitz_bound) = match group_order {
        None => (None, None),
        Some(order) => {
            let twice = int(order as i64) * (&sum - int(2));
            if !twice.is_integer() || twice.to_integer().is_odd() {
                return Err(Error::InvalidInput(format!("2(b - 1) = {twice} is not an even integer")));
            }
            let b = twice.to_integer() / 2 + 1;
            let b = i64::try_from(b).map_err(|_| Error::Overflow("base genus"))?;
            let bound = (b >= 2).then(|| order as i64 <= 84 * (b - 1));
            (Some(b), bound)
        }
    };
    Ok(PolygonalType {
        hyperbolic,
        branching_sum: sum,
        base_genus,
        within_hurwitz_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_dimension() {
        for p in [2, 3, 5] {
            let e = enumerate_assignments(p).unwrap();
            assert_eq!(e.kernel_dimension, 5);
            assert_eq!(e.kernel_size, (p as u128).pow(5));
        }
        assert!(enumerate_assignments(2).unwrap().admissible.is_empty());
        assert!(enumerate_assignments(6).is_err());
    }

    #[test]
    fn beauville_small() {
        for n in [2, 3, 4, 6] {
            assert!(beauville_search(n).unwrap().is_empty(), "n = {n}");
        }
        let found = beauville_search(5).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(beauville_free));
    }

    #[test]
    fn packing_examples() {
        let z6 = CayleyTable::cyclic(6).unwrap();
        assert_eq!(sphere_packing(&z6, &[], PackingMode::Exact).unwrap().r, 6);
        assert_eq!(sphere_packing(&z6, &[1, 2, 3, 4, 5], PackingMode::Exact).unwrap().r, 1);
        let p = sphere_packing(&z6, &[3], PackingMode::Exact).unwrap();
        assert_eq!(p.r, 3);
        assert_eq!(p.elements[0], 0);
        assert!(sphere_packing(&z6, &[1], PackingMode::Exact).is_err());
        assert!(CayleyTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
    }

    fn brute_force_packing(group: &CayleyTable, forbidden: &[bool]) -> usize {
        let n = group.order();
        let adj: Vec<u32> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| a != b && !forbidden[group.mul(group.inv(a), b)])
                    .fold(0u32, |m, b| m | 1 << b)
            })
            .collect();
        (1u32..1 << n)
            .filter(|&mask| (0..n).all(|i| mask & 1 << i == 0 || mask & !(adj[i] | 1 << i) == 0))
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn symmetric_tables() {
        let s3 = CayleyTable::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        // S_3 is not abelian
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        assert_eq!(CayleyTable::symmetric(4).unwrap().order(), 24);
    }

    #[test]
    fn packing_in_s3() {
        let s3 = CayleyTable::symmetric(3).unwrap();
        let transpositions: Vec<usize> = (1..6).filter(|&g| s3.mul(g, g) == 0).collect();
        assert_eq!(transpositions.len(), 3);
        let p = sphere_packing(&s3, &transpositions, PackingMode::Exact).unwrap();
        let mut forbidden = vec![false; 6];
        for &t in &transpositions {
            forbidden[t] = true;
        }
        assert_eq!(p.r, brute_force_packing(&s3, &forbidden));
        assert_eq!(p.r, 3);
        assert!(sphere_packing(&s3, &transpositions[..1], PackingMode::Exact).is_err());
    }

    proptest! {
        #[test]
        fn exact_packing_is_optimal(n in 2usize..=14, picks in prop::collection::vec(1usize..14, 0..5)) {
            let g = CayleyTable::cyclic(n).unwrap();
            let mut s: Vec<usize> = picks.iter().map(|x| x % n).filter(|&x| x != 0).collect();
            let inverses: Vec<usize> = s.iter().map(|&x| g.inv(x)).collect();
            s.extend(inverses);
            let exact = sphere_packing(&g, &s, PackingMode::Exact).unwrap();
            let greedy = sphere_packing(&g, &s, PackingMode::Greedy).unwrap();
            let forbidden = g.stabilizer_set(&s).unwrap();
            prop_assert_eq!(exact.r, brute_force_packing(&g, &forbidden));
            prop_assert!(greedy.r <= exact.r);
        }
    }

    #[test]
    fn six_tuples_complete_to_admissible_assignments() {
        let order = [0, 1, 2, 4, 5, 3];
        for t in &PRINTED_SIX_TUPLES {
            let a = six_tuple_assignment(5, t, &order);
            assert!(a.admissible());
            assert!(a.to_spec().is_ok());
        }
        // the plain lexicographic line order does not work for every tuple
        assert!(PRINTED_SIX_TUPLES
            .iter()
            .any(|t| !six_tuple_assignment(5, t, &[0, 1, 2, 3, 4, 5]).admissible()));
    }

    #[test]
    fn symmetry_preserves_admissibility() {
        let a = six_tuple_assignment(5, &PRINTED_SIX_TUPLES[2], &[0, 1, 2, 4, 5, 3]);
        for m in [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]] {
            assert!(a.transform(m).admissible());
        }
        for p in [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]] {
            let b = a.permute(&p);
            assert!(b.admissible());
            assert!(b.to_spec().is_ok());
        }
    }

    #[test]
    fn embedding_examples() {
        let z6 = CayleyTable::cyclic(6).unwrap();
        let r = embedding_check(&z6, &[0, 2, 4], &[0, 3], &[0]).unwrap();
        assert!(r.embeds && r.h1_free && r.h2_free);
        assert!(!embedding_check(&z6, &[0, 3], &[0, 3], &[0, 3]).unwrap().embeds);
        assert!(embedding_check(&z6, &[0], &[0, 2, 4], &[1, 5]).unwrap().embeds);
        assert!(embedding_check(&z6, &[0, 1], &[0], &[]).is_err());
    }

    #[test]
    fn polygonal_examples() {
        let t = polygonal_type(&[2, 3, 7], Some(168)).unwrap();
        assert!(t.hyperbolic);
        assert_eq!((t.base_genus, t.within_hurwitz_bound), (Some(3), Some(true)));
        assert!(!polygonal_type(&[2, 2, 2, 2], None).unwrap().hyperbolic);
        assert_eq!(polygonal_type(&[5, 5, 5], Some(25)).unwrap().base_genus, Some(6));
        assert!(polygonal_type(&[2, 3, 7], Some(100)).is_err());
    }
}

