//! Search for singular points of the surface over small prime fields.
//!
//! A point of P^4(F_p) is singular when both cubics vanish there and the
//! 2x5 Jacobian matrix has rank below two. Finding none for several primes
//! is evidence, not proof, of smoothness in characteristic zero.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::CubicPair;
use crate::polyring::{Field, PrimeField, NVARS};

pub const DEFAULT_PRIMES: [u64; 4] = [7, 11, 13, 31];

/// Singular points kept per prime; the total count is always reported.
pub const SINGULAR_POINT_CAP: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct PrimeScan {
    pub prime: u64,
    pub points_scanned: u64,
    pub singular_count: u64,
    pub singular_points: Vec<[u64; NVARS]>,
    pub truncated: bool,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothScanReport {
    /// Always true: the scan is evidence of smoothness, not a certificate.
    pub heuristic: bool,
    pub records: Vec<PrimeScan>,
}

impl SmoothScanReport {
    pub fn no_singular_points(&self) -> bool {
        self.records.iter().all(|r| r.singular_count == 0)
    }
}

/// Sparse polynomial over Z/p with machine-word coefficients.
struct WordPoly {
    terms: Vec<([u8; NVARS], u64)>,
}

impl WordPoly {
    fn eval(&self, pows: &[[u64; 4]; NVARS], p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for i in 0..NVARS {
                t = t * pows[i][e[i] as usize] % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

fn expected_points(p: u64) -> u64 {
    (p.pow(5) - 1) / (p - 1)
}

fn scan_prime<C: Field>(pair: &CubicPair<C>, field: PrimeField) -> Result<PrimeScan> {
    let p = field.modulus();
    let to_word = |f: &crate::polyring::Polynomial<C>| -> Result<WordPoly> {
        let terms = f
            .terms()
            .map(|(m, c)| {
                c.reduce_mod(&field)
                    .map(|v| (m.exps(), v.value()))
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "coefficient {c} over {} does not reduce modulo {p}",
                            C::ring_name(&c.ring())
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WordPoly { terms })
    };
    let f = [to_word(pair.f1())?, to_word(pair.f2())?];
    let grads: Vec<[WordPoly; NVARS]> = pair
        .f
        .iter()
        .map(|fi| {
            let g = fi.gradient();
            let mut out = Vec::with_capacity(NVARS);
            for gi in &g {
                out.push(to_word(gi)?);
            }
            Ok(out.try_into().ok().expect("five partials"))
        })
        .collect::<Result<_>>()?;

    // points (0,..,0,1,x_{i+1},..,x_4) for lead position i, indexed by the tail
    let mut singular: Vec<[u64; NVARS]> = Vec::new();
    let mut scanned = 0u64;
    for lead in 0..NVARS {
        let n = p.pow((NVARS - 1 - lead) as u32);
        scanned += n;
        let found: Vec<[u64; NVARS]> = (0..n)
            .into_par_iter()
            .filter_map(|mut k| {
                let mut pt = [0u64; NVARS];
                pt[lead] = 1;
                for slot in pt.iter_mut().skip(lead + 1).rev() {
                    *slot = k % p;
                    k /= p;
                }
                let pows: [[u64; 4]; NVARS] = std::array::from_fn(|i| {
                    let x = pt[i];
                    [1, x, x * x % p, x * x % p * x % p]
                });
                if f[0].eval(&pows, p) != 0 || f[1].eval(&pows, p) != 0 {
                    return None;
                }
                let j: [[u64; NVARS]; 2] =
                    std::array::from_fn(|r| std::array::from_fn(|c| grads[r][c].eval(&pows, p)));
                let full_rank = (0..NVARS).any(|a| {
                    (a + 1..NVARS).any(|b| (j[0][a] * j[1][b] % p) != (j[0][b] * j[1][a] % p))
                });
                (!full_rank).then_some(pt)
            })
            .collect();
        singular.extend(found);
    }
    singular.sort();
    let count = singular.len() as u64;
    let truncated = singular.len() > SINGULAR_POINT_CAP;
    singular.truncate(SINGULAR_POINT_CAP);
    Ok(PrimeScan {
        prime: p,
        points_scanned: scanned,
        singular_count: count,
        singular_points: singular,
        truncated,
        verdict: if count == 0 {
            "no-singular-points"
        } else {
            "singular-points-found"
        },
    })
}

pub fn smooth_scan<C: Field>(pair: &CubicPair<C>, primes: &[u64]) -> Result<SmoothScanReport> {
    let mut records = Vec::with_capacity(primes.len());
    for &p in primes {
        let field = PrimeField::new(p)?;
        let rec = scan_prime(pair, field)?;
        debug_assert_eq!(rec.points_scanned, expected_points(p));
        records.push(rec);
    }
    Ok(SmoothScanReport {
        heuristic: true,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_normalized, Normalized14};
    use crate::polyring::Rational;

    #[test]
    fn counts_and_fermat() {
        let pair = build_normalized(&Normalized14::<Rational>::zero(&()));
        let r = smooth_scan(&pair, &[7]).unwrap();
        assert_eq!(r.records[0].points_scanned, 2801);
        assert!(r.heuristic);
        assert!(smooth_scan(&pair, &[3]).is_err());
    }

    #[test]
    fn doubled_cubic_is_singular() {
        let pair = build_normalized(&Normalized14::<Rational>::zero(&()));
        let same = CubicPair::new(pair.f1().clone(), pair.f1().clone());
        let r = smooth_scan(&same, &[7]).unwrap();
        assert!(r.records[0].singular_count > 0);
        assert_eq!(r.records[0].verdict, "singular-points-found");
    }
}
