//! Numerics of fibred surfaces: slopes, feasibility windows, singular-fibre
//! counts and rigidity tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{floor, int, rat, serialize_bigint, serialize_rational};

/// `4(g-1)(b-1)`, the Euler number of a holomorphic bundle.
pub fn bundle_euler(b: u64, g: u64) -> i64 {
    4 * (g as i64 - 1) * (b as i64 - 1)
}

/// `mu = e - 4(g-1)(b-1)`. When `fibration` is set the input claims a
/// relatively minimal fibration with `g >= 2`, where `mu < 0` is impossible.
pub fn zeuthen_segre_mu(e: i64, b: u64, g: u64, fibration: bool) -> Result<i64> {
    let mu = e - bundle_euler(b, g);
    if fibration && g >= 2 && mu < 0 {
        return Err(Error::Inconsistent(format!("Zeuthen-Segre residue {mu} is negative")));
    }
    Ok(mu)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub chi_min: Option<i64>,
    pub chi_max: Option<i64>,
}

/// Integers `chi` with `(g-1)(b-1) < chi < (4/3)(g-1)(b-1)`.
pub fn kodaira_feasibility(g: u64, b: u64) -> Result<Feasibility> {
    if g < 3 || b < 2 {
        return Err(Error::InvalidInput(format!("need g >= 3 and b >= 2, got g = {g}, b = {b}")));
    }
    let p = (g as i64 - 1) * (b as i64 - 1);
    let (lo, hi) = (p + 1, (4 * p - 1) / 3);
    Ok(if lo <= hi {
        Feasibility {
            feasible: true,
            chi_min: Some(lo),
            chi_max: Some(hi),
        }
    } else {
        Feasibility {
            feasible: false,
            chi_min: None,
            chi_max: None,
        }
    })
}

/// `g_n = 1 + (g-1) n^{2g}`.
pub fn fibre_genus_scaling(g: u64, n: u64) -> Result<BigInt> {
    if g < 2 || n < 1 {
        return Err(Error::InvalidInput(format!("need g >= 2 and n >= 1, got g = {g}, n = {n}")));
    }
    let exp = u32::try_from(2 * g).map_err(|_| Error::Overflow("fibre genus exponent"))?;
    Ok(BigInt::from(1) + BigInt::from(g - 1) * BigInt::from(n).pow(exp))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArakelovDegree {
    #[serde(serialize_with = "serialize_rational")]
    pub degree: BigRational,
    pub holomorphic_bundle: bool,
}

/// `deg f_* omega = chi - (g-1)(b-1)`.
pub fn arakelov_degree(chi: &BigRational, b: u64, g: u64) -> ArakelovDegree {
    let degree = chi - int((g as i64 - 1) * (b as i64 - 1));
    ArakelovDegree {
        holomorphic_bundle: degree.is_zero(),
        degree,
    }
}

/// Smallest `s >= 0` with `(g/2)(2b - 2 + s) > deg`.
pub fn tan_min_singular_fibres_for_degree(b: u64, g: u64, deg: &BigRational) -> Result<u64> {
    if g < 1 {
        return Err(Error::InvalidInput("fibre genus must be at least 1".into()));
    }
    let bound = int(2) * deg / int(g as i64) - int(2 * b as i64 - 2);
    let s = floor(&bound) + BigInt::from(1);
    if s.is_negative() {
        return Ok(0);
    }
    u64::try_from(s).map_err(|_| Error::Overflow("singular fibre bound"))
}

pub fn tan_min_singular_fibres(b: u64, g: u64, chi: &BigRational) -> Result<u64> {
    let deg = chi - int((b as i64 - 1) * (g as i64 - 1));
    tan_min_singular_fibres_for_degree(b, g, &deg)
}

/// Slope of a cover of `B x B` branched on `r` graphs with multiplicities `m`.
pub fn very_simple_slope(b: u64, m: &[u64]) -> Result<BigRational> {
    if b < 2 {
        return Err(Error::InvalidInput(format!("base genus must be at least 2, got {b}")));
    }
    if m.iter().any(|&mi| mi < 2) {
        return Err(Error::InvalidInput("multiplicities must be at least 2".into()));
    }
    let mut num = int(0);
    let mut den = int(2 * (b as i64 - 1));
    for &mi in m {
        let mi = mi as i64;
        num += int(1) - rat(1, mi * mi);
        den += int(1) - rat(1, mi);
    }
    Ok(int(2) + num / den)
}

/// Limit of `very_simple_slope` as all multiplicities grow: `3 - 2/(2 + alpha)`
/// with `alpha = r/(b-1)`.
pub fn very_simple_slope_limit(b: u64, r: u64) -> Result<BigRational> {
    if b < 2 {
        return Err(Error::InvalidInput(format!("base genus must be at least 2, got {b}")));
    }
    let alpha = rat(r as i64, b as i64 - 1);
    Ok(int(3) - int(2) / (int(2) + alpha))
}

/// Slope after base change of degree `d` branched at `r` points.
pub fn base_change_slope(k2: &BigInt, g: u64, b: u64, d: u64, r: u64) -> Result<BigRational> {
    if d < 1 || g < 2 || b < 2 {
        return Err(Error::InvalidInput(format!("need d >= 1, g >= 2, b >= 2, got d = {d}, g = {g}, b = {b}")));
    }
    let k2 = BigRational::from_integer(k2.clone());
    let x = rat(r as i64, d as i64);
    let g1 = int(g as i64 - 1);
    let b1 = int(b as i64 - 1);
    let slope = (&k2 + int(4) * &x * &g1) / (int(4) * &g1 * (&b1 + &x / int(2)));
    let before = &k2 / (int(4) * &g1 * &b1);
    if r > 0 && k2 > int(8) * &g1 * &b1 && slope >= before {
        return Err(Error::Inconsistent("base change did not lower the slope".into()));
    }
    Ok(slope)
}

/// Checks that a Kodaira fibration has `2 < K^2/e < 3`.
pub fn check_kodaira_slope(k2: &BigInt, e: &BigInt) -> Result<BigRational> {
    if !e.is_positive() {
        return Err(Error::Inconsistent(format!("Kodaira fibration with e = {e}")));
    }
    let slope = BigRational::new(k2.clone(), e.clone());
    if slope <= int(2) || slope >= int(3) {
        return Err(Error::Inconsistent(format!("Kodaira fibration slope {slope} is outside (2, 3)")));
    }
    Ok(slope)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsogenousEuler {
    #[serde(serialize_with = "serialize_rational")]
    pub euler: BigRational,
    pub integral: bool,
}

/// `e = 4 (g1 - 1)(g2 - 1) / |G|`; a fractional value rules the surface out.
pub fn isogenous_euler(g1: u64, g2: u64, group_order: u64) -> Result<IsogenousEuler> {
    if g1 < 2 || g2 < 2 || group_order < 1 {
        return Err(Error::InvalidInput("need g1, g2 >= 2 and |G| >= 1".into()));
    }
    let euler = rat(4 * (g1 as i64 - 1) * (g2 as i64 - 1), group_order as i64);
    Ok(IsogenousEuler {
        integral: euler.is_integer(),
        euler,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonRigidity {
    #[serde(serialize_with = "serialize_bigint")]
    pub quantity: BigInt,
    pub not_rigid: bool,
    pub verdict: &'static str,
}

/// `10 chi - 2 K^2 + h^0(Theta) > 0` forces a nontrivial deformation.
pub fn nonrigidity_test(chi: i64, k2: i64, h0_theta: i64) -> NonRigidity {
    let quantity = BigInt::from(10) * chi - BigInt::from(2) * k2 + h0_theta;
    let not_rigid = quantity.is_positive();
    NonRigidity {
        quantity,
        not_rigid,
        verdict: if not_rigid { "not rigid" } else { "inconclusive" },
    }
}
