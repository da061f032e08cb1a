//! Abelian covers of a branch geometry: specifications, smoothness,
//! maximal covers and Chern invariants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::configs::{builtin, LineConfiguration};
use crate::error::{Error, Result};
use crate::geometry::{blowup_plane, delpezzo5, delpezzo_pair_index, BranchGeometry};
use crate::numeric::{as_integer, int, rat, serialize_bigint, serialize_opt_rational, serialize_rational};
use crate::zgroups::{direct_sum_test, generates, FiniteAbelianGroup, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub geometry: BranchGeometry,
    pub group: FiniteAbelianGroup,
    pub monodromy: Vec<GroupElement>,
}

impl CoverSpec {
    /// Validates generation and the relation `sum_c class(c) (x) g_c = 0`
    /// in `Pic(Y) (x) G`.
    pub fn new(geometry: BranchGeometry, group: FiniteAbelianGroup, monodromy: Vec<GroupElement>) -> Result<Self> {
        if monodromy.len() != geometry.curves.len() {
            return Err(Error::InvalidCover(format!(
                "{} monodromy elements for {} branch curves",
                monodromy.len(),
                geometry.curves.len()
            )));
        }
        if monodromy.iter().any(|g| g.group() != &group) {
            return Err(Error::GroupMismatch);
        }
        for b in 0..geometry.lattice.rank() {
            for (t, &n) in group.orders().iter().enumerate() {
                let total = geometry
                    .curves
                    .iter()
                    .zip(&monodromy)
                    .fold(0i128, |acc, (c, g)| acc + c.class[b] as i128 * g.coords()[t] as i128);
                if total.rem_euclid(n as i128) != 0 {
                    return Err(Error::InvalidCover(format!(
                        "monodromy is incompatible with linear equivalence (basis class {b}, coordinate {t})"
                    )));
                }
            }
        }
        if !generates(&monodromy, &group) {
            return Err(Error::InvalidCover("monodromy does not generate the group".into()));
        }
        Ok(CoverSpec {
            geometry,
            group,
            monodromy,
        })
    }

    /// Cover of the blown-up plane from line monodromies; exceptional
    /// monodromies are the sums over the lines through each point.
    pub fn plane(config: &LineConfiguration, group: FiniteAbelianGroup, lines: Vec<GroupElement>) -> Result<Self> {
        if lines.len() != config.r {
            return Err(Error::InvalidCover(format!(
                "{} line monodromies for {} lines",
                lines.len(),
                config.r
            )));
        }
        let geometry = blowup_plane(config)?;
        let mut monodromy = lines.clone();
        for p in &config.multiple_points {
            let mut eps = group.zero();
            for &j in &p.lines {
                eps = eps.add(&lines[j])?;
            }
            monodromy.push(eps);
        }
        CoverSpec::new(geometry, group, monodromy)
    }

    /// Cover of the degree-5 del Pezzo surface; values in pair order
    /// `12, 13, ..., 45`.
    pub fn delpezzo(group: FiniteAbelianGroup, values: Vec<GroupElement>) -> Result<Self> {
        CoverSpec::new(delpezzo5(), group, values)
    }

    /// Uniform Kummer cover of exponent `n`: group `(Z/n)^r / (1, ..., 1)`.
    pub fn kummer(config: &LineConfiguration, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("exponent must be at least 2, got {n}")));
        }
        let r = config.r;
        let mut relations: Vec<Vec<i64>> = (0..r)
            .map(|j| (0..r).map(|i| if i == j { n as i64 } else { 0 }).collect())
            .collect();
        relations.push(vec![1; r]);
        let (group, lines) = FiniteAbelianGroup::presented(r, &relations)?;
        CoverSpec::plane(config, group, lines)
    }

    pub fn branching_orders(&self) -> Vec<u64> {
        self.monodromy.iter().map(GroupElement::order).collect()
    }

    fn require_nonzero(&self) -> Result<()> {
        match self.monodromy.iter().position(GroupElement::is_zero) {
            Some(c) => Err(Error::Unsupported(format!(
                "branch curve {} carries zero monodromy",
                self.geometry.curves[c].label
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ConfigurationRef {
    Name(String),
    Inline(LineConfiguration),
}

#[derive(Debug, Clone, Deserialize)]
pub struct GroupInput {
    pub orders: Vec<u64>,
}

/// `(Z/5)^2` monodromy on five general lines with all values on one affine
/// line.
pub const PARDINI_ORIGINAL: [[i64; 2]; 5] = [[1, 0], [1, 1], [1, 2], [1, 3], [1, 4]];
pub const PARDINI_SECOND: [[i64; 2]; 5] = [[1, 0], [0, 1], [1, 1], [2, 4], [1, 4]];

/// File form of a cover of a blown-up plane. `monodromy` lists either the
/// lines only or every branch curve, exceptional curves last.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpecInput {
    pub configuration: ConfigurationRef,
    pub group: GroupInput,
    pub monodromy: Vec<Vec<i64>>,
}

/// File form of a cover of the degree-5 del Pezzo surface, keyed by pairs
/// such as `"12"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelPezzoSpecInput {
    pub surface: String,
    pub group: GroupInput,
    pub assignment: BTreeMap<String, Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoverSpecInput {
    DelPezzo(DelPezzoSpecInput),
    Plane(PlaneSpecInput),
}

impl PlaneSpecInput {
    pub fn configuration(&self) -> Result<LineConfiguration> {
        match &self.configuration {
            ConfigurationRef::Name(name) => builtin(name),
            ConfigurationRef::Inline(c) => Ok(c.clone()),
        }
    }

    pub fn build(&self) -> Result<CoverSpec> {
        let config = self.configuration()?;
        let group = FiniteAbelianGroup::new(self.group.orders.clone())?;
        let elems = self
            .monodromy
            .iter()
            .map(|v| group.element(v))
            .collect::<Result<Vec<_>>>()?;
        if elems.len() == config.r {
            return CoverSpec::plane(&config, group, elems);
        }
        CoverSpec::new(blowup_plane(&config)?, group, elems)
    }
}

impl DelPezzoSpecInput {
    pub fn build(&self) -> Result<CoverSpec> {
        if self.surface != "delpezzo5" {
            return Err(Error::InvalidInput(format!("unknown surface `{}`", self.surface)));
        }
        let group = FiniteAbelianGroup::new(self.group.orders.clone())?;
        let mut values: Vec<Option<GroupElement>> = vec![None; 10];
        for (key, v) in &self.assignment {
            let bad = || Error::InvalidInput(format!("bad pair key `{key}`"));
            let digits: Vec<usize> = key
                .chars()
                .map(|ch| ch.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            let [a, b] = digits[..] else {
                return Err(bad());
            };
            if !(1..=5).contains(&a) || !(1..=5).contains(&b) || a == b {
                return Err(bad());
            }
            values[delpezzo_pair_index(a - 1, b - 1)] = Some(group.element(v)?);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidInput("assignment must cover all ten pairs".into()))?;
        CoverSpec::delpezzo(group, values)
    }
}

impl CoverSpecInput {
    pub fn build(&self) -> Result<CoverSpec> {
        match self {
            CoverSpecInput::Plane(p) => p.build(),
            CoverSpecInput::DelPezzo(d) => d.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeVerdict {
    pub curves: (String, String),
    pub direct_sum: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub nodes: Vec<NodeVerdict>,
}

pub fn smoothness_check(spec: &CoverSpec) -> Result<SmoothnessReport> {
    spec.require_nonzero()?;
    let nodes = spec
        .geometry
        .nodes
        .iter()
        .map(|&(a, b)| {
            Ok(NodeVerdict {
                curves: (
                    spec.geometry.curves[a].label.clone(),
                    spec.geometry.curves[b].label.clone(),
                ),
                direct_sum: direct_sum_test(&spec.monodromy[a], &spec.monodromy[b])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmoothnessReport {
        smooth: nodes.iter().all(|n| n.direct_sum),
        nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalCover {
    pub spec: CoverSpec,
    /// `(g''_j, g_j)` for each line: the surjection `G'' -> G` on generators.
    pub surjection: Vec<(GroupElement, GroupElement)>,
}

pub fn maximal_cover(spec: &CoverSpec) -> Result<MaximalCover> {
    let plane = spec
        .geometry
        .plane
        .as_ref()
        .ok_or_else(|| Error::Unsupported("maximal covers need a plane model".into()))?;
    let r = plane.lines;
    let lines = &spec.monodromy[..r];
    let mut relations: Vec<Vec<i64>> = lines
        .iter()
        .enumerate()
        .map(|(j, g)| (0..r).map(|i| if i == j { g.order() as i64 } else { 0 }).collect())
        .collect();
    relations.push(vec![1; r]);
    let (group, images) = FiniteAbelianGroup::presented(r, &relations)?;
    let surjection = images.iter().cloned().zip(lines.iter().cloned()).collect();
    if group.cardinality() == spec.group.cardinality() {
        return Ok(MaximalCover {
            spec: spec.clone(),
            surjection,
        });
    }
    let mut monodromy = images;
    for p in &plane.points {
        let mut eps = group.zero();
        for &j in p {
            eps = eps.add(&monodromy[j])?;
        }
        monodromy.push(eps);
    }
    Ok(MaximalCover {
        spec: CoverSpec::new(spec.geometry.clone(), group, monodromy)?,
        surjection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeFlags {
    pub positive_index: bool,
    pub bmy_satisfied: bool,
    pub bmy_violated: bool,
    pub ball_quotient: bool,
    pub bidisk_slope: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChernInvariants {
    #[serde(rename = "K2", serialize_with = "serialize_bigint")]
    pub k2: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub e: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub chi: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub sigma: BigRational,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub nu: Option<BigRational>,
    #[serde(rename = "nuC", serialize_with = "serialize_opt_rational")]
    pub nu_c: Option<BigRational>,
    pub flags: SlopeFlags,
}

impl ChernInvariants {
    pub fn from_k2_e(k2: BigInt, e: BigInt) -> Self {
        let k2r = BigRational::from_integer(k2.clone());
        let er = BigRational::from_integer(e.clone());
        let chi = (&k2r + &er) / int(12);
        let sigma = (&k2r - int(2) * &er) / int(3);
        let nu = (!chi.is_zero()).then(|| &k2r / &chi);
        let nu_c = (!e.is_zero()).then(|| &k2r / &er);
        let bmy_satisfied = k2r <= int(9) * &chi;
        let flags = SlopeFlags {
            positive_index: k2r > int(2) * &er,
            bmy_satisfied,
            bmy_violated: !bmy_satisfied,
            ball_quotient: e.is_positive() && k2 == BigInt::from(3) * &e,
            bidisk_slope: e.is_positive() && k2 == BigInt::from(2) * &e,
        };
        ChernInvariants {
            k2,
            e,
            chi,
            sigma,
            nu,
            nu_c,
            flags,
        }
    }

    pub fn chi_integer(&self) -> Option<BigInt> {
        as_integer(&self.chi)
    }
}

fn exact_integer(x: BigRational, what: &str) -> Result<BigInt> {
    as_integer(&x).ok_or_else(|| Error::Inconsistent(format!("{what} = {x} is not an integer")))
}

/// Stratified evaluation with branching order `orders[c]` on curve `c`,
/// scaled by the lcm of the orders so that everything stays integral.
fn stratified(geometry: &BranchGeometry, group_order: u64, orders: &[u64]) -> Result<ChernInvariants> {
    let overflow = || Error::Overflow("stratified invariants");
    let lattice = &geometry.lattice;
    let g = i128::from(group_order);
    let l = orders.iter().fold(1u64, |acc, d| acc.lcm(d)) as i128;
    let mut v: Vec<i128> = lattice.canonical_class.iter().map(|&x| l * x as i128).collect();
    for (c, &d) in geometry.curves.iter().zip(orders) {
        let w = l - l / d as i128;
        for (k, &x) in v.iter_mut().zip(&c.class) {
            *k += w * x as i128;
        }
    }
    let mut square = 0i128;
    for (i, row) in lattice.gram.iter().enumerate() {
        for (j, &q) in row.iter().enumerate() {
            let term = v[i].checked_mul(v[j]).and_then(|t| t.checked_mul(q as i128)).ok_or_else(overflow)?;
            square = square.checked_add(term).ok_or_else(overflow)?;
        }
    }
    let numer = square.checked_mul(g).ok_or_else(overflow)?;
    if numer % (l * l) != 0 {
        return Err(Error::Inconsistent(format!("K^2 = {numer}/{} is not an integer", l * l)));
    }
    let k2 = numer / (l * l);
    let mut e = g * geometry.open_complement_euler() as i128;
    for (c, &d) in geometry.curves.iter().zip(orders) {
        e += g / d as i128 * c.open_euler as i128;
    }
    for &(a, b) in &geometry.nodes {
        let local = (orders[a] * orders[b]) as i128;
        if g % local != 0 {
            return Err(Error::Inconsistent(format!("node contribution {g}/{local} is not an integer")));
        }
        e += g / local;
    }
    let inv = ChernInvariants::from_k2_e(BigInt::from(k2), BigInt::from(e));
    exact_integer(inv.chi.clone(), "chi")?;
    Ok(inv)
}

pub fn invariants_general(spec: &CoverSpec) -> Result<ChernInvariants> {
    let report = smoothness_check(spec)?;
    if !report.smooth {
        let bad: Vec<String> = report
            .nodes
            .iter()
            .filter(|n| !n.direct_sum)
            .map(|n| format!("{}/{}", n.curves.0, n.curves.1))
            .collect();
        return Err(Error::InvalidCover(format!("cover is singular over {}", bad.join(", "))));
    }
    stratified(&spec.geometry, spec.group.cardinality(), &spec.branching_orders())
}

/// Closed forms for the uniform exponent-`n` cover of a configuration.
pub fn invariants_kummer_plane(c: &LineConfiguration, n: u64) -> Result<ChernInvariants> {
    let spec = CoverSpec::kummer(c, n)?;
    let r = c.r;
    for (i, eps) in spec.monodromy[r..].iter().enumerate() {
        if eps.order() != n {
            return Err(Error::InvalidCover(format!(
                "branching order {} at multiple point {} is below {n}",
                eps.order(),
                i + 1
            )));
        }
    }
    let s = c.stats();
    let n_i = n as i64;
    let w = int(1) - rat(1, n_i);
    let scale = BigRational::from_integer(BigInt::from(n).pow(r as u32 - 1));
    let mut k2 = (int(-3) + int(r as i64) * &w).pow(2);
    for p in &c.multiple_points {
        k2 -= (int(1) + &w * int(1 - p.valency as i64)).pow(2);
    }
    let (k, v, delta) = (s.k as i64, s.v as i64, s.delta);
    let e = int(k + 3)
        - &w * int(2 * k - 2 * v + 2 * r as i64 - 2 * delta)
        - (int(1) - rat(1, n_i * n_i)) * int(v + delta);
    let k2 = exact_integer(&scale * k2, "K^2")?;
    let e = exact_integer(&scale * e, "e")?;
    Ok(ChernInvariants::from_k2_e(k2, e))
}

/// Maximal Kummer cover of exponent `n` over the ten lines of the degree-5
/// del Pezzo surface.
pub fn invariants_hk_delpezzo(n: u64) -> Result<ChernInvariants> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    let n = BigInt::from(n);
    let n3 = n.pow(3);
    let two = BigInt::from(2);
    let k2 = BigInt::from(5) * (&n - &two).pow(2) * &n3;
    let e = &n3 * (BigInt::from(3) + &two * (&n - &two) * (&n - BigInt::from(3)));
    Ok(ChernInvariants::from_k2_e(k2, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcdhRecord {
    pub invariants: ChernInvariants,
    pub base_genus: u64,
    pub fibre_genus: u64,
    pub singular_fibres: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub zeuthen_segre_residue: BigInt,
}

/// `(Z/n)^2` cover of the degree-5 del Pezzo surface branched with order
/// `n` on all ten lines.
pub fn bcdh_invariants(n: u64) -> Result<BcdhRecord> {
    if n < 5 || n.gcd(&6) != 1 {
        return Err(Error::InvalidInput(format!("n must satisfy gcd(n, 6) = 1 and n >= 5, got {n}")));
    }
    let invariants = stratified(&delpezzo5(), n * n, &[n; 10])?;
    let (b, g) = ((n - 1) / 2, n - 1);
    let fibration = BigInt::from(4) * BigInt::from(g - 1) * BigInt::from(b - 1);
    let residue = &invariants.e - fibration;
    if residue != BigInt::from(3) {
        return Err(Error::Inconsistent(format!(
            "Zeuthen-Segre residue {residue} does not match three singular fibres"
        )));
    }
    Ok(BcdhRecord {
        invariants,
        base_genus: b,
        fibre_genus: g,
        singular_fibres: 3,
        zeuthen_segre_residue: residue,
    })
}
