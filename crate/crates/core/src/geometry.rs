//! Intersection numerics on the surfaces that carry branch loci: the plane,
//! its blow-ups at the multiple points of a line configuration, and the
//! del Pezzo surface of degree 5.
//!
//! Lattice vectors are integer coordinates in the basis `(L, E_1, ..., E_k)`
//! where `L` is the pullback of a line and `E_i` are exceptional curves.

use serde::Serialize;

use crate::configs::{LineConfiguration, Realizability};
use crate::error::{Error, Result};

pub type LatticeVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardLattice {
    pub gram: Vec<Vec<i64>>,
    pub canonical_class: LatticeVector,
    pub euler_number: i64,
}

impl PicardLattice {
    /// `P^2` blown up in `k` points: gram `diag(1, -1, ..., -1)`,
    /// `K = -3L + sum E_i`, `e = 3 + k`.
    pub fn blown_up_plane(k: usize) -> Self {
        let rank = k + 1;
        let gram = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match (i == j, i) {
                        (false, _) => 0,
                        (true, 0) => 1,
                        (true, _) => -1,
                    })
                    .collect()
            })
            .collect();
        let mut canonical_class = vec![1; rank];
        canonical_class[0] = -3;
        PicardLattice {
            gram,
            canonical_class,
            euler_number: 3 + k as i64,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn dot(&self, a: &[i64], b: &[i64]) -> i64 {
        self.gram
            .iter()
            .enumerate()
            .map(|(i, row)| a[i] * row.iter().zip(b).map(|(g, y)| g * y).sum::<i64>())
            .sum()
    }

    pub fn euler_characteristic(&self, d: &[i64]) -> i64 {
        // chi(O(D)) = 1 + (D^2 - D.K) / 2 on a rational surface
        1 + (self.dot(d, d) - self.dot(d, &self.canonical_class)) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    ProjectivePlane,
    DelPezzo5,
    PlaneBlowup,
}

/// Plane configuration data kept alongside a blown-up geometry: curves
/// `0..lines` are strict transforms, the rest are exceptional curves in the
/// order of `points`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneModel {
    pub lines: usize,
    pub points: Vec<Vec<usize>>,
    pub realizability: Realizability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCurve {
    pub class: LatticeVector,
    pub genus: u64,
    pub open_euler: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchGeometry {
    pub ambient: Ambient,
    pub lattice: PicardLattice,
    pub curves: Vec<BranchCurve>,
    pub nodes: Vec<(usize, usize)>,
    pub plane: Option<PlaneModel>,
}

impl BranchGeometry {
    /// `e(Y \ D)` from additivity over the stratification.
    pub fn open_complement_euler(&self) -> i64 {
        self.lattice.euler_number
            - self.curves.iter().map(|c| c.open_euler).sum::<i64>()
            - self.nodes.len() as i64
    }

    pub fn node_count(&self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        self.nodes.iter().filter(|&&n| n == key).count()
    }

    /// Checks transversality bookkeeping and the open Euler numbers.
    pub fn consistency_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.curves.len();
        for a in 0..n {
            for b in a + 1..n {
                let meet = self.lattice.dot(&self.curves[a].class, &self.curves[b].class);
                if meet != self.node_count(a, b) as i64 {
                    out.push(format!(
                        "{}.{} = {meet} but {} nodes recorded",
                        self.curves[a].label,
                        self.curves[b].label,
                        self.node_count(a, b)
                    ));
                }
            }
            let on_curve = self.nodes.iter().filter(|&&(x, y)| x == a || y == a).count() as i64;
            let expected = 2 - 2 * self.curves[a].genus as i64 - on_curve;
            if expected != self.curves[a].open_euler {
                out.push(format!("open Euler number of {} is off", self.curves[a].label));
            }
        }
        let k = &self.lattice.canonical_class;
        if self.lattice.dot(k, k) + self.lattice.euler_number != 12 {
            out.push("Noether fails for the ambient surface".into());
        }
        out
    }
}

/// Blows up the plane at every point of valency at least three.
pub fn blowup_plane(c: &LineConfiguration) -> Result<BranchGeometry> {
    c.ensure_valid()?;
    let r = c.r;
    let k = c.multiple_points.len();
    let lattice = PicardLattice::blown_up_plane(k);
    let mut nodes = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            if !c.meet_at_multiple_point(a, b) {
                nodes.push((a, b));
            }
        }
    }
    for (i, p) in c.multiple_points.iter().enumerate() {
        for &j in &p.lines {
            nodes.push((j, r + i));
        }
    }
    nodes.sort_unstable();

    let count_on = |idx: usize| nodes.iter().filter(|&&(x, y)| x == idx || y == idx).count() as i64;
    let mut curves = Vec::with_capacity(r + k);
    for j in 0..r {
        let mut class = vec![0; k + 1];
        class[0] = 1;
        for i in c.points_on_line(j) {
            class[i + 1] = -1;
        }
        curves.push(BranchCurve {
            class,
            genus: 0,
            open_euler: 2 - count_on(j),
            label: format!("D{}", j + 1),
        });
    }
    for i in 0..k {
        let mut class = vec![0; k + 1];
        class[i + 1] = 1;
        curves.push(BranchCurve {
            class,
            genus: 0,
            open_euler: 2 - count_on(r + i),
            label: format!("E{}", i + 1),
        });
    }

    let ambient = if k == 0 {
        Ambient::ProjectivePlane
    } else if k == 4 && four_points_in_general_position(c) {
        Ambient::DelPezzo5
    } else {
        Ambient::PlaneBlowup
    };
    Ok(BranchGeometry {
        ambient,
        lattice,
        curves,
        nodes,
        plane: Some(PlaneModel {
            lines: r,
            points: c.multiple_points.iter().map(|p| p.lines.clone()).collect(),
            realizability: c.realizability,
        }),
    })
}

// Every pair of the four points is joined by a configuration line and no
// configuration line carries three of them.
fn four_points_in_general_position(c: &LineConfiguration) -> bool {
    let k = c.multiple_points.len();
    let joined = (0..k).all(|a| {
        (a + 1..k).all(|b| {
            c.multiple_points[a]
                .lines
                .iter()
                .any(|l| c.multiple_points[b].lines.contains(l))
        })
    });
    joined && (0..c.r).all(|l| c.points_on_line(l).len() <= 2)
}

/// Index pairs `{i, j}` of `{1..5}` in lexicographic order, 0-based.
pub fn delpezzo_pairs() -> [(usize, usize); 10] {
    let mut out = [(0, 0); 10];
    let mut n = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            out[n] = (i, j);
            n += 1;
        }
    }
    out
}

pub fn delpezzo_pair_index(a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    delpezzo_pairs().iter().position(|&p| p == key).expect("valid pair")
}

/// Class of the line `E_{i,j}` (0-based indices): `E_{i,5} -> E_i`,
/// otherwise `L - E_h - E_k` with `{i,j,h,k} = {1,2,3,4}`.
pub fn delpezzo_line_class(i: usize, j: usize) -> LatticeVector {
    let (i, j) = (i.min(j), i.max(j));
    let mut class = vec![0; 5];
    if j == 4 {
        class[i + 1] = 1;
    } else {
        class[0] = 1;
        for h in (0..4).filter(|&h| h != i && h != j) {
            class[h + 1] = -1;
        }
    }
    class
}

/// The ten `(-1)`-curves in pair order.
pub fn delpezzo_lines() -> Vec<LatticeVector> {
    delpezzo_pairs()
        .iter()
        .map(|&(i, j)| delpezzo_line_class(i, j))
        .collect()
}

pub fn delpezzo_lattice() -> PicardLattice {
    PicardLattice::blown_up_plane(4)
}

/// The degree-5 del Pezzo surface with its ten lines as branch curves.
pub fn delpezzo5() -> BranchGeometry {
    let pairs = delpezzo_pairs();
    let mut nodes = Vec::new();
    for a in 0..10 {
        for b in a + 1..10 {
            let (p, q) = (pairs[a], pairs[b]);
            if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                nodes.push((a, b));
            }
        }
    }
    let curves = pairs
        .iter()
        .map(|&(i, j)| BranchCurve {
            class: delpezzo_line_class(i, j),
            genus: 0,
            open_euler: -1,
            label: format!("E{}{}", i + 1, j + 1),
        })
        .collect();
    BranchGeometry {
        ambient: Ambient::DelPezzo5,
        lattice: delpezzo_lattice(),
        curves,
        nodes,
        plane: None,
    }
}

/// Applies a permutation of `{1..5}` (0-based images) to a divisor class,
/// via the induced permutation of the ten lines.
pub fn delpezzo_permute(perm: &[usize; 5], d: &[i64]) -> LatticeVector {
    // D = aL - sum m_i E_i = a E12 + (a - m3) E35 + (a - m4) E45 - m1 E15 - m2 E25
    let (a, m) = (d[0], [-d[1], -d[2], -d[3], -d[4]]);
    let terms = [
        ((0, 1), a),
        ((0, 4), -m[0]),
        ((1, 4), -m[1]),
        ((2, 4), a - m[2]),
        ((3, 4), a - m[3]),
    ];
    let mut out = vec![0; 5];
    for ((i, j), coeff) in terms {
        let image = delpezzo_line_class(perm[i], perm[j]);
        for (o, c) in out.iter_mut().zip(image) {
            *o += coeff * c;
        }
    }
    out
}

/// `h^0(O_Y(D))` on the degree-5 del Pezzo surface.
///
/// Subtracts fixed `(-1)`-curves (first in pair order) until `D` is nef,
/// where Riemann-Roch with vanishing applies, or until `D.(-K) < 0`.
pub fn h0_delpezzo(d: &[i64]) -> Result<i64> {
    let mut d: [i64; 5] = d.try_into().map_err(|_| {
        Error::InvalidInput(format!("del Pezzo class must have 5 coordinates, got {}", d.len()))
    })?;
    let lines = fixed_lines();
    loop {
        // -K = 3L - sum E_i
        if 3 * d[0] + d[1] + d[2] + d[3] + d[4] < 0 {
            return Ok(0);
        }
        if d == [0; 5] {
            return Ok(1);
        }
        match lines.iter().find(|e| diagonal_dot(&d, e) < 0) {
            Some(e) => {
                for (x, y) in d.iter_mut().zip(e) {
                    *x -= y;
                }
            }
            None => return Ok(delpezzo_chi(&d)),
        }
    }
}

fn diagonal_dot(a: &[i64; 5], b: &[i64; 5]) -> i64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3] - a[4] * b[4]
}

fn delpezzo_chi(d: &[i64; 5]) -> i64 {
    1 + (diagonal_dot(d, d) - diagonal_dot(d, &[-3, 1, 1, 1, 1])) / 2
}

fn fixed_lines() -> &'static [[i64; 5]; 10] {
    static LINES: std::sync::OnceLock<[[i64; 5]; 10]> = std::sync::OnceLock::new();
    LINES.get_or_init(|| {
        let mut out = [[0; 5]; 10];
        for (o, l) in out.iter_mut().zip(delpezzo_lines()) {
            o.copy_from_slice(&l);
        }
        out
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

pub fn cohomology_delpezzo(d: &[i64]) -> Result<Cohomology> {
    let h0 = h0_delpezzo(d)?;
    let dual: Vec<i64> = [-3, 1, 1, 1, 1].iter().zip(d).map(|(k, x)| k - x).collect();
    let h2 = h0_delpezzo(&dual)?;
    let h1 = h0 + h2 - delpezzo_chi(d.try_into().expect("checked by h0_delpezzo"));
    if h1 < 0 {
        return Err(Error::Inconsistent(format!(
            "negative h1 for {d:?}: h0 = {h0}, h2 = {h2}"
        )));
    }
    Ok(Cohomology { h0, h1, h2 })
}

/// `O(d)` on `P^2`.
pub fn cohomology_plane(d: i64) -> Cohomology {
    let h0 = |t: i64| if t >= 0 { (t + 1) * (t + 2) / 2 } else { 0 };
    Cohomology {
        h0: h0(d),
        h1: 0,
        h2: h0(-3 - d),
    }
}

/// Line-bundle cohomology on the ambient surface, where implemented.
pub fn cohomology(geometry: &BranchGeometry, d: &[i64]) -> Result<Cohomology> {
    match geometry.ambient {
        Ambient::ProjectivePlane => Ok(cohomology_plane(d[0])),
        Ambient::DelPezzo5 => cohomology_delpezzo(d),
        Ambient::PlaneBlowup => Err(Error::Unsupported(
            "line-bundle cohomology is only implemented for P^2 and the degree-5 del Pezzo surface"
                .into(),
        )),
    }
}
