//! Cluster and avoidance generating functions assembled from `M_u`.
//!
//! * `C_u(x,y,z) = M_u(x/(1−y), y, z)`
//! * `A_u(x,y,0) = 1 / (1 − xy/(1−y) − C_u(x,y,−1))`
//! * `A_u(x,y,z) = 1 / (1 − xy/(1−y) − C_u(x,y,z−1))`
//!
//! plus the series maps that relate `M_u` to `M_{1u}` and `M_{u⁺}`.

use crate::clusters::minimal_cluster_gf;
use crate::error::{Error, Result};
use crate::series::{Series, Truncation};
use crate::words::Word;

/// `C_u` truncated at `trunc`.
pub fn cluster_gf(u: &Word, trunc: Truncation) -> Result<Series> {
    Ok(minimal_cluster_gf(u, trunc)?.substitute_x_geometric())
}

/// `A_u(x, y, 0)`: words avoiding `u`, by length and weight.
pub fn avoidance_gf(u: &Word, trunc: Truncation) -> Result<Series> {
    let clusters = cluster_gf(u, trunc)?.eval_z(-1);
    Series::letter(trunc).add(&clusters)?.quasi_inverse()
}

/// `A_u(x, y, z)`: all words, with `z` marking dominating factors.
pub fn full_gf(u: &Word, trunc: Truncation) -> Result<Series> {
    let clusters = cluster_gf(u, trunc)?.shift_z_minus_one();
    Series::letter(trunc).add(&clusters)?.quasi_inverse()
}

/// Every word, by length and weight: `1 / (1 − xy/(1−y))`.
pub fn all_words_gf(trunc: Truncation) -> Series {
    Series::letter(trunc)
        .quasi_inverse()
        .expect("the letter series has no weightless terms")
}

/// `M ↦ xy·M / (1 − M)`, taking `M_u` to `M_{1u}`.
pub fn prepend_transform(m: &Series) -> Result<Series> {
    if let Some((mono, _)) = m.terms().find(|(mono, _)| mono.b == 0) {
        return Err(Error::Precondition(format!(
            "prepend transform needs positive weight in every term, found x^{} y^0 z^{}",
            mono.a, mono.c
        )));
    }
    let xy = Series::monomial(m.truncation(), 1, 1, 0, 1);
    xy.mul(m)?.mul(&m.quasi_inverse()?)
}

/// `M(x, y, z) ↦ M(xy, y, z)`, taking `M_u` to `M_{u⁺}`.
pub fn plus_transform(m: &Series) -> Result<Series> {
    m.scale_x_by_y_power(1)
}

/// `M(x, y, z) ↦ M(x/y, y, z)`, taking `M_{u⁺}` back to `M_u`.
///
/// The result is exact for terms with `a + b ≤ W`; terms of `M_u` with
/// `a + b > W` were already cut from the truncated input.
pub fn unplus_transform(m: &Series) -> Result<Series> {
    if let Some((mono, _)) = m.terms().find(|(mono, _)| mono.b < mono.a) {
        return Err(Error::Precondition(format!(
            "x -> x/y needs b >= a in every term, found x^{} y^{} z^{}",
            mono.a, mono.b, mono.c
        )));
    }
    m.scale_x_by_y_power(-1)
}
