//! Eigensheaf decompositions of Abelian covers and eigenspace dimensions
//! of cyclic covers of the line.

use num_integer::Integer;
use serde::Serialize;

use crate::covers::{invariants_general, CoverSpec};
use crate::error::{Error, Result};
use crate::geometry::{cohomology, Ambient, LatticeVector};
use crate::zgroups::Character;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterBundle {
    pub character: Character,
    pub class: LatticeVector,
    pub h0_canonical_twist: i64,
    pub h1_negative: i64,
}

/// `L_chi = (1/e) sum_c [chi(g_c)] class(c)` with `e` the group exponent.
pub fn character_class(spec: &CoverSpec, chi: &Character) -> Result<LatticeVector> {
    let e = spec.group.exponent() as i64;
    let rank = spec.geometry.lattice.rank();
    let mut total = vec![0i64; rank];
    for (curve, g) in spec.geometry.curves.iter().zip(&spec.monodromy) {
        let value = chi.eval(g)? as i64;
        for (t, x) in total.iter_mut().zip(&curve.class) {
            *t += value * x;
        }
    }
    if total.iter().any(|t| t % e != 0) {
        return Err(Error::InvalidCover(format!(
            "L_chi is not integral for {chi}: {e} L = {total:?}"
        )));
    }
    Ok(total.into_iter().map(|t| t / e).collect())
}

fn require_cohomology(spec: &CoverSpec) -> Result<()> {
    match spec.geometry.ambient {
        Ambient::ProjectivePlane | Ambient::DelPezzo5 => Ok(()),
        Ambient::PlaneBlowup => Err(Error::Unsupported(
            "character sheaves need a cover of P^2 without blow-ups or of the degree-5 del Pezzo surface".into(),
        )),
    }
}

/// One bundle per nontrivial character, in coordinate order.
pub fn character_bundles(spec: &CoverSpec) -> Result<Vec<CharacterBundle>> {
    require_cohomology(spec)?;
    let lattice = &spec.geometry.lattice;
    spec.group
        .characters()
        .filter(|chi| !chi.is_trivial())
        .map(|chi| {
            let class = character_class(spec, &chi)?;
            let twist: Vec<i64> = lattice
                .canonical_class
                .iter()
                .zip(&class)
                .map(|(k, l)| k + l)
                .collect();
            let negative: Vec<i64> = class.iter().map(|l| -l).collect();
            Ok(CharacterBundle {
                h0_canonical_twist: cohomology(&spec.geometry, &twist)?.h0,
                h1_negative: cohomology(&spec.geometry, &negative)?.h1,
                character: chi,
                class,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers {
    pub q: i64,
    pub p_g: i64,
    pub chi: i64,
}

pub fn irregularity_and_pg(spec: &CoverSpec) -> Result<HodgeNumbers> {
    let bundles = character_bundles(spec)?;
    let q = bundles.iter().map(|b| b.h1_negative).sum();
    let p_g = bundles.iter().map(|b| b.h0_canonical_twist).sum();
    let chi = invariants_general(spec)?
        .chi_integer()
        .and_then(|c| i64::try_from(c).ok())
        .ok_or(Error::Overflow("chi"))?;
    if 1 - q + p_g != chi {
        return Err(Error::Inconsistent(format!(
            "1 - q + p_g = {} but chi = {chi}",
            1 - q + p_g
        )));
    }
    Ok(HodgeNumbers { q, p_g, chi })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalCharacter {
    pub character: Character,
    pub degree: i64,
    pub sections: i64,
    pub z_exponents: Vec<u64>,
}

/// Characters contributing to `H^0(K_S)` for a cover of `P^2`.
pub fn canonical_characters(spec: &CoverSpec) -> Result<Vec<CanonicalCharacter>> {
    if spec.geometry.ambient != Ambient::ProjectivePlane {
        return Err(Error::Unsupported("canonical characters are listed for covers of P^2 only".into()));
    }
    let e = spec.group.exponent();
    let mut out = Vec::new();
    for chi in spec.group.characters().filter(|c| !c.is_trivial()) {
        let degree = character_class(spec, &chi)?[0];
        let sections = cohomology(&spec.geometry, &[degree - 3])?.h0;
        if sections == 0 {
            continue;
        }
        let z_exponents = spec
            .monodromy
            .iter()
            .map(|g| Ok(e - 1 - chi.eval(g)?))
            .collect::<Result<_>>()?;
        out.push(CanonicalCharacter {
            character: chi,
            degree,
            sections,
            z_exponents,
        });
    }
    Ok(out)
}

/// Exponents of the branch lines common to every canonical divisor `z_chi`.
pub fn common_z_factor(list: &[CanonicalCharacter]) -> Vec<u64> {
    let Some(first) = list.first() else {
        return Vec::new();
    };
    (0..first.z_exponents.len())
        .map(|j| list.iter().map(|c| c.z_exponents[j]).min().unwrap_or(0))
        .collect()
}

/// `z^n = y0^m0 y1^m1 (y1 - y0)^m2 (y1 - x y0)^m3` over the `x`-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicQuadrupleCover {
    pub n: u64,
    pub m: [u64; 4],
}

impl CyclicQuadrupleCover {
    pub fn new(n: u64, m: [u64; 4]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
        }
        if let Some(bad) = m.iter().find(|&&mj| mj == 0 || mj.gcd(&n) != 1) {
            return Err(Error::InvalidInput(format!(
                "exponent {bad} must be positive and prime to {n}"
            )));
        }
        if m.iter().sum::<u64>() % n != 0 {
            return Err(Error::InvalidInput(format!("exponents must sum to a multiple of {n}")));
        }
        Ok(CyclicQuadrupleCover { n, m })
    }

    /// `sum m_j = n` and every `m_j <= n - 3`.
    pub fn normalized(&self) -> bool {
        self.m.iter().sum::<u64>() == self.n && self.m.iter().all(|&mj| mj + 3 <= self.n)
    }
}

/// `dim V^{chi_i} = ([i m_0] + [i m_1] + [i m_2] + [i m_3] - n) / n`.
pub fn eigen_dims(c: &CyclicQuadrupleCover) -> Result<Vec<u64>> {
    let n = c.n;
    let dims = (1..n)
        .map(|i| {
            let residues: Vec<u64> = c.m.iter().map(|mj| i * mj % n).collect();
            if residues.contains(&0) {
                return Err(Error::InvalidInput(format!("residue [i m_j] vanishes for i = {i}")));
            }
            let total = residues.iter().sum::<u64>() - n;
            if total % n != 0 || total / n > 2 {
                return Err(Error::Inconsistent(format!("dimension for i = {i} is {total}/{n}")));
            }
            Ok(total / n)
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 1..n as usize {
        if dims[i - 1] + dims[n as usize - i - 1] != 2 {
            return Err(Error::Inconsistent(format!("conjugate dimensions at i = {i} do not sum to 2")));
        }
    }
    Ok(dims)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandKind {
    FlatRank2,
    AmpleRank1,
    Absorbed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenSummand {
    pub index: u64,
    pub dim: u64,
    pub kind: SummandKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FujitaSplit {
    pub summands: Vec<EigenSummand>,
    pub rank_a: u64,
    pub rank_q: u64,
    pub flat_summands: u64,
    pub infinite_monodromy: bool,
    pub verdict: &'static str,
}

pub fn fujita_split(c: &CyclicQuadrupleCover) -> Result<FujitaSplit> {
    let n = c.n;
    let dims = eigen_dims(c)?;
    let summands: Vec<EigenSummand> = dims
        .iter()
        .enumerate()
        .map(|(i, &dim)| EigenSummand {
            index: i as u64 + 1,
            dim,
            kind: match dim {
                2 => SummandKind::FlatRank2,
                1 => SummandKind::AmpleRank1,
                _ => SummandKind::Absorbed,
            },
        })
        .collect();
    let flat: Vec<u64> = summands
        .iter()
        .filter(|s| s.kind == SummandKind::FlatRank2)
        .map(|s| s.index)
        .collect();
    let infinite_monodromy = flat.iter().any(|&i| {
        (1..n)
            .filter(|j| j.gcd(&n) == 1)
            .any(|j| dims[(i * j % n) as usize - 1] == 1)
    });
    Ok(FujitaSplit {
        rank_a: dims.iter().filter(|&&d| d == 1).count() as u64,
        rank_q: 2 * flat.len() as u64,
        flat_summands: flat.len() as u64,
        infinite_monodromy,
        verdict: if infinite_monodromy {
            "infinite (per criterion)"
        } else {
            "criterion not met"
        },
        summands,
    })
}

/// Genus of the smooth model of `w^n = prod (x - p)^{a_p}` by Riemann-Hurwitz.
pub fn cyclic_p1_genus(n: u64, exponents: &[u64]) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    if exponents.iter().sum::<u64>() % n != 0 {
        return Err(Error::InvalidInput("exponents must sum to 0 mod n".into()));
    }
    if exponents.iter().fold(n, |g, a| g.gcd(a)) != 1 {
        return Err(Error::InvalidInput("the cover is disconnected".into()));
    }
    let ramification: i64 = exponents.iter().map(|a| (n - n.gcd(a)) as i64).sum();
    let twice = ramification - 2 * n as i64 + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("2g = {twice}")));
    }
    Ok(twice as u64 / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::LineConfiguration;
    use crate::zgroups::FiniteAbelianGroup;
    use proptest::prelude::*;

    fn plane_cover(vectors: &[[i64; 2]]) -> CoverSpec {
        let g = FiniteAbelianGroup::uniform(5, 2).unwrap();
        let lines = vectors.iter().map(|v| g.element(v).unwrap()).collect();
        CoverSpec::plane(&LineConfiguration::general_position(vectors.len()), g, lines).unwrap()
    }

    const SECOND: [[i64; 2]; 5] = [[1, 0], [0, 1], [1, 1], [2, 4], [1, 4]];
    const ORIGINAL: [[i64; 2]; 5] = [[1, 0], [1, 1], [1, 2], [1, 3], [1, 4]];

    #[test]
    fn character_classes() {
        let spec = plane_cover(&SECOND);
        let chi = spec.group.character(&[4, 4]).unwrap();
        assert_eq!(character_class(&spec, &chi).unwrap(), vec![3]);
        let chi = spec.group.character(&[1, 0]).unwrap();
        assert_eq!(character_class(&spec, &chi).unwrap(), vec![1]);
    }

    #[test]
    fn pardini_hodge_numbers() {
        for v in [SECOND, ORIGINAL] {
            let h = irregularity_and_pg(&plane_cover(&v)).unwrap();
            assert_eq!((h.q, h.p_g, h.chi), (0, 4, 5));
        }
    }

    #[test]
    fn canonical_inventory() {
        let list = canonical_characters(&plane_cover(&SECOND)).unwrap();
        let mut coords: Vec<Vec<u64>> = list.iter().map(|c| c.character.coords().to_vec()).collect();
        coords.sort();
        assert_eq!(coords, vec![vec![1, 3], vec![3, 4], vec![4, 0], vec![4, 4]]);
        assert!(list.iter().all(|c| c.degree == 3 && c.sections == 1));
        let c44 = list.iter().find(|c| c.character.coords() == [4, 4]).unwrap();
        assert_eq!(c44.z_exponents, vec![0, 0, 1, 0, 4]);
        // p_g = 4 splits as one section of degree 3 plus three of degree 4
        let list = canonical_characters(&plane_cover(&ORIGINAL)).unwrap();
        let found: Vec<(Vec<u64>, i64, i64)> = list
            .iter()
            .map(|c| (c.character.coords().to_vec(), c.degree, c.sections))
            .collect();
        assert_eq!(found, vec![(vec![3, 0], 3, 1), (vec![4, 0], 4, 3)]);
        assert_eq!(common_z_factor(&list), vec![0; 5]);
    }

    #[test]
    fn fermat_quintic_pg() {
        let spec = CoverSpec::kummer(&LineConfiguration::general_position(4), 5).unwrap();
        let total: i64 = canonical_characters(&spec).unwrap().iter().map(|c| c.sections).sum();
        assert_eq!(total, 4);
        assert_eq!(irregularity_and_pg(&spec).unwrap().p_g, 4);
    }

    #[test]
    fn blowups_are_unsupported() {
        let spec = CoverSpec::kummer(&LineConfiguration::hesse(), 3).unwrap();
        assert!(matches!(irregularity_and_pg(&spec), Err(Error::Unsupported(_))));
    }

    #[test]
    fn eigen_dimension_examples() {
        let c = CyclicQuadrupleCover::new(5, [1, 1, 1, 2]).unwrap();
        assert_eq!(eigen_dims(&c).unwrap(), vec![0, 1, 1, 2]);
        let c = CyclicQuadrupleCover::new(7, [1, 1, 1, 4]).unwrap();
        assert_eq!(eigen_dims(&c).unwrap(), vec![0, 0, 1, 1, 2, 2]);
        assert!(CyclicQuadrupleCover::new(6, [1, 1, 2, 2]).is_err());
    }

    #[test]
    fn fujita_examples() {
        let s = fujita_split(&CyclicQuadrupleCover::new(7, [1, 1, 1, 4]).unwrap()).unwrap();
        assert_eq!((s.rank_a, s.flat_summands, s.rank_q), (2, 2, 4));
        assert!(s.infinite_monodromy);
        let s = fujita_split(&CyclicQuadrupleCover::new(5, [1, 1, 1, 2]).unwrap()).unwrap();
        assert_eq!((s.rank_a, s.flat_summands), (2, 1));
        assert!(s.infinite_monodromy);
        // every dimension is 1 here
        let s = fujita_split(&CyclicQuadrupleCover::new(4, [1, 1, 3, 3]).unwrap()).unwrap();
        assert_eq!(s.flat_summands, 0);
        assert!(!s.infinite_monodromy);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(cyclic_p1_genus(5, &[1, 1, 3]).unwrap(), 2);
        assert_eq!(cyclic_p1_genus(5, &[1, 1, 1, 2]).unwrap(), 4);
        assert_eq!(cyclic_p1_genus(2, &[1, 1]).unwrap(), 0);
        assert!(cyclic_p1_genus(4, &[2, 2]).is_err());
    }

    fn quadruple() -> impl Strategy<Value = CyclicQuadrupleCover> {
        (2u64..=31, prop::array::uniform3(1u64..31)).prop_filter_map("valid", |(n, m)| {
            let m: Vec<u64> = m.iter().map(|x| x % n).collect();
            let last = (n - m.iter().sum::<u64>() % n) % n;
            CyclicQuadrupleCover::new(n, [m[0], m[1], m[2], last]).ok()
        })
    }

    proptest! {
        #[test]
        fn dims_sum_to_genus(c in quadruple()) {
            let dims = eigen_dims(&c).unwrap();
            prop_assert_eq!(dims.iter().sum::<u64>(), cyclic_p1_genus(c.n, &c.m).unwrap());
            for i in 1..c.n as usize {
                prop_assert_eq!(dims[i - 1] + dims[c.n as usize - i - 1], 2);
            }
        }
    }
}
