//! Bipartite Moore bound and defect arithmetic.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Largest degree accepted by the bound helpers.
pub const MAX_DEGREE: u32 = 64;
/// Largest diameter accepted by the bound helpers.
pub const MAX_DIAMETER: u32 = 16;

fn check_query(d: u32, diameter: u32) -> Result<()> {
    if d < 2 || diameter < 2 {
        return Err(invalid(format!(
            "degree and diameter must both be at least 2 (got d={d}, D={diameter})"
        )));
    }
    if d > MAX_DEGREE || diameter > MAX_DIAMETER {
        return Err(invalid(format!(
            "d={d}, D={diameter} outside supported range d<={MAX_DEGREE}, D<={MAX_DIAMETER}"
        )));
    }
    Ok(())
}

/// `2 * (1 + (d-1) + ... + (d-1)^(D-1))`.
pub fn moore_bound(d: u32, diameter: u32) -> Result<u128> {
    check_query(d, diameter)?;
    let base = u128::from(d - 1);
    let mut term: u128 = 1;
    let mut sum: u128 = 0;
    for _ in 0..diameter {
        sum += term;
        term *= base;
    }
    Ok(2 * sum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectRecord {
    pub d: u32,
    #[serde(rename = "D")]
    pub diameter: u32,
    pub order: u128,
    pub moore_bound: u128,
    pub defect: u128,
}

pub fn defect(d: u32, diameter: u32, order: u128) -> Result<DefectRecord> {
    let moore_bound = moore_bound(d, diameter)?;
    if order > moore_bound {
        return Err(invalid(format!(
            "order {order} exceeds the bipartite Moore bound {moore_bound} for d={d}, D={diameter}"
        )));
    }
    Ok(DefectRecord {
        d,
        diameter,
        order,
        moore_bound,
        defect: moore_bound - order,
    })
}

/// Upper bound `d^2 - d - 1` on the modulus of a diameter-3 `Φ_m(a_1..a_{d-3})`.
pub fn max_m_upper_bound(d: u32) -> Result<usize> {
    if d < 4 {
        return Err(invalid(format!(
            "need d >= 4 for at least one offset, got {d}"
        )));
    }
    if d > MAX_DEGREE {
        return Err(invalid(format!("d={d} exceeds {MAX_DEGREE}")));
    }
    let bound = (d * d - d - 1) as usize;
    debug_assert_eq!(
        bound as u128,
        (moore_bound(d, 3).expect("validated") - 4) / 2
    );
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moore_values() {
        assert_eq!(moore_bound(2, 2).unwrap(), 4);
        assert_eq!(moore_bound(7, 3).unwrap(), 86);
        assert_eq!(moore_bound(11, 3).unwrap(), 222);
        assert_eq!(moore_bound(4, 3).unwrap(), 26);
        assert!(moore_bound(1, 3).is_err());
        assert!(moore_bound(3, 1).is_err());
        assert!(moore_bound(65, 3).is_err());
        // widest admissible input stays exact
        assert!(moore_bound(64, 16).unwrap() > 0);
    }

    #[test]
    fn defects() {
        assert_eq!(defect(7, 3, 80).unwrap().defect, 6);
        assert_eq!(defect(11, 3, 190).unwrap().defect, 32);
        assert_eq!(defect(4, 3, 26).unwrap().defect, 0);
        assert!(defect(4, 3, 27).is_err());
    }

    #[test]
    fn max_m_values() {
        assert_eq!(max_m_upper_bound(7).unwrap(), 41);
        assert_eq!(max_m_upper_bound(11).unwrap(), 109);
        assert_eq!(max_m_upper_bound(4).unwrap(), 11);
        assert!(max_m_upper_bound(3).is_err());
        for d in 4..=MAX_DEGREE {
            let m = max_m_upper_bound(d).unwrap() as u128;
            assert_eq!(2 * m + 4, moore_bound(d, 3).unwrap());
        }
    }

    #[test]
    fn monotone() {
        for diameter in 2..=6 {
            for d in 2..20 {
                assert!(moore_bound(d + 1, diameter).unwrap() > moore_bound(d, diameter).unwrap());
            }
        }
        for d in 3..20 {
            for diameter in 2..10 {
                assert!(moore_bound(d, diameter + 1).unwrap() > moore_bound(d, diameter).unwrap());
            }
        }
    }
}
