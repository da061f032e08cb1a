//! Line configurations in the plane.
//!
//! Only points of valency at least three are stored; the double points are
//! derived from the count `delta = C(r,2) - sum C(v_i,2)`.
//!
//! Configurations read from files are taken as given: nothing here checks
//! that an incidence table is realizable by actual lines over the complex
//! numbers.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Realizability {
    Complex,
    OnlyCharP(u64),
}

// JSON form: "complex" or {"char": p}
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RealizabilityRepr {
    Tag(String),
    Char {
        #[serde(rename = "char")]
        p: u64,
    },
}

impl Serialize for Realizability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Realizability::Complex => RealizabilityRepr::Tag("complex".into()),
            Realizability::OnlyCharP(p) => RealizabilityRepr::Char { p },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Realizability {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RealizabilityRepr::deserialize(d)? {
            RealizabilityRepr::Tag(t) if t == "complex" => Ok(Realizability::Complex),
            RealizabilityRepr::Tag(t) => Err(serde::de::Error::custom(format!(
                "unknown realizability `{t}`"
            ))),
            RealizabilityRepr::Char { p } => Ok(Realizability::OnlyCharP(p)),
        }
    }
}

impl Default for Realizability {
    fn default() -> Self {
        Realizability::Complex
    }
}

impl fmt::Display for Realizability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realizability::Complex => write!(f, "complex"),
            Realizability::OnlyCharP(p) => write!(f, "only in characteristic {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplePoint {
    pub valency: usize,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConfiguration {
    #[serde(rename = "lines")]
    pub r: usize,
    #[serde(rename = "points")]
    pub multiple_points: Vec<MultiplePoint>,
    #[serde(default)]
    pub realizability: Realizability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfigStats {
    pub r: u64,
    pub k: u64,
    pub v: u64,
    pub delta: i64,
}

fn choose2(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

impl LineConfiguration {
    pub fn new(r: usize, points: Vec<Vec<usize>>, realizability: Realizability) -> Self {
        let multiple_points = points
            .into_iter()
            .map(|mut lines| {
                lines.sort_unstable();
                MultiplePoint {
                    valency: lines.len(),
                    lines,
                }
            })
            .collect();
        LineConfiguration {
            r,
            multiple_points,
            realizability,
        }
    }

    /// `a_{j,i}`: whether line `j` passes through multiple point `i`.
    pub fn incidence(&self, line: usize, point: usize) -> bool {
        self.multiple_points[point].lines.contains(&line)
    }

    pub fn points_on_line(&self, line: usize) -> Vec<usize> {
        (0..self.multiple_points.len())
            .filter(|&i| self.incidence(line, i))
            .collect()
    }

    /// Whether lines `a` and `b` meet in a recorded multiple point.
    pub fn meet_at_multiple_point(&self, a: usize, b: usize) -> bool {
        self.multiple_points
            .iter()
            .any(|p| p.lines.contains(&a) && p.lines.contains(&b))
    }

    pub fn stats(&self) -> ConfigStats {
        let pair_sum: i64 = self.multiple_points.iter().map(|p| choose2(p.valency)).sum();
        ConfigStats {
            r: self.r as u64,
            k: self.multiple_points.len() as u64,
            v: self.multiple_points.iter().map(|p| p.valency as u64).sum(),
            delta: choose2(self.r) - pair_sum,
        }
    }

    /// Violated invariants, empty when the configuration is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.r < 3 {
            out.push(format!("need at least 3 lines, got {}", self.r));
        }
        for (i, p) in self.multiple_points.iter().enumerate() {
            if p.valency < 3 {
                out.push(format!("point {i} has valency {} (< 3)", p.valency));
            }
            if p.lines.len() != p.valency {
                out.push(format!(
                    "point {i} lists {} lines but valency {}",
                    p.lines.len(),
                    p.valency
                ));
            }
            let distinct: BTreeSet<_> = p.lines.iter().collect();
            if distinct.len() != p.lines.len() {
                out.push(format!("point {i} repeats a line"));
            }
            if let Some(bad) = p.lines.iter().find(|&&l| l >= self.r) {
                out.push(format!("point {i} references line {bad} >= {}", self.r));
            }
        }
        for i in 0..self.multiple_points.len() {
            for j in i + 1..self.multiple_points.len() {
                let a: BTreeSet<_> = self.multiple_points[i].lines.iter().collect();
                let shared = self.multiple_points[j]
                    .lines
                    .iter()
                    .filter(|l| a.contains(l))
                    .count();
                if shared > 1 {
                    out.push(format!("points {i} and {j} share {shared} lines"));
                }
            }
        }
        for line in 0..self.r {
            let load: usize = self
                .multiple_points
                .iter()
                .filter(|p| p.lines.contains(&line))
                .map(|p| p.lines.len().saturating_sub(1))
                .sum();
            if load > self.r.saturating_sub(1) {
                out.push(format!(
                    "line {line} meets {load} other lines at multiple points, more than r-1"
                ));
            }
        }
        let stats = self.stats();
        if stats.delta < 0 {
            out.push(format!("negative double-point count {}", stats.delta));
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(violations))
        }
    }

    pub fn general_position(r: usize) -> Self {
        LineConfiguration::new(r, Vec::new(), Realizability::Complex)
    }

    /// The six lines `P_iP_j` through four general points. Lines are ordered
    /// `P1P2, P1P3, P1P4, P2P3, P2P4, P3P4` and point `i` is `P_{i+1}`.
    pub fn complete_quadrangle() -> Self {
        let pairs = quadrangle_lines();
        let points = (0..4)
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, (a, b))| *a == p || *b == p)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        LineConfiguration::new(6, points, Realizability::Complex)
    }

    /// Fano plane: lines and points of `P^2(F_2)`.
    pub fn fano() -> Self {
        let pts = f2_points();
        // a line of P^2(F_2) is the kernel of a nonzero functional
        let lines = f2_points();
        let points = pts
            .iter()
            .map(|p| {
                lines
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| (p[0] & l[0]) ^ (p[1] & l[1]) ^ (p[2] & l[2]) == 0)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        LineConfiguration::new(7, points, Realizability::OnlyCharP(2))
    }

    /// Hesse arrangement `(9_4, 12_3)`: the twelve lines through pairs of
    /// flexes of a smooth cubic, modelled on the affine plane over `F_3`.
    /// The nine flexes are the quadruple points.
    pub fn hesse() -> Self {
        let lines = affine_f3_lines();
        let points = f3_affine_points()
            .iter()
            .map(|p| {
                lines
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.contains(p))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        LineConfiguration::new(12, points, Realizability::Complex)
    }

    /// Dual Hesse arrangement `(12_3, 9_4)`: nine lines and twelve triple
    /// points.
    pub fn dual_hesse() -> Self {
        let flexes = f3_affine_points();
        let points = affine_f3_lines()
            .iter()
            .map(|l| {
                l.iter()
                    .map(|p| flexes.iter().position(|q| q == p).unwrap())
                    .collect()
            })
            .collect();
        LineConfiguration::new(9, points, Realizability::Complex)
    }
}

pub(crate) fn quadrangle_lines() -> [(usize, usize); 6] {
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
}

fn f2_points() -> Vec<[u8; 3]> {
    (1u8..8).map(|x| [x >> 2 & 1, x >> 1 & 1, x & 1]).collect()
}

fn f3_affine_points() -> Vec<(u8, u8)> {
    (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).collect()
}

fn affine_f3_lines() -> Vec<Vec<(u8, u8)>> {
    let mut lines = Vec::new();
    for &(dx, dy) in &[(0u8, 1u8), (1, 0), (1, 1), (1, 2)] {
        let mut seen = BTreeSet::new();
        for p in f3_affine_points() {
            let line: BTreeSet<(u8, u8)> = (0..3)
                .map(|t| ((p.0 + t * dx) % 3, (p.1 + t * dy) % 3))
                .collect();
            if seen.insert(line.clone()) {
                lines.push(line.into_iter().collect());
            }
        }
    }
    lines
}

/// Names accepted by [`builtin`].
pub const CATALOG: &[&str] = &[
    "general_position(r)",
    "complete_quadrangle",
    "fano_char2",
    "hesse",
    "dual_hesse",
];

/// Looks up a catalog configuration. `general_position` takes the line count
/// as `general_position(6)` or `general_position:6`.
pub fn builtin(name: &str) -> Result<LineConfiguration> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("general_position") {
        let digits = rest.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == '_');
        let r: usize = digits
            .parse()
            .map_err(|_| Error::UnknownConfiguration(name.to_string()))?;
        let config = LineConfiguration::general_position(r);
        config.ensure_valid()?;
        return Ok(config);
    }
    match name {
        "complete_quadrangle" => Ok(LineConfiguration::complete_quadrangle()),
        "fano_char2" | "fano" => Ok(LineConfiguration::fano()),
        "hesse" => Ok(LineConfiguration::hesse()),
        "dual_hesse" => Ok(LineConfiguration::dual_hesse()),
        _ => Err(Error::UnknownConfiguration(name.to_string())),
    }
}
