//! Independent reference computations for the integration tests. None of
//! these call into the algorithm they are used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use tors3::polyring::{Monomial, ParamMono, ParamPoly, Rational};

/// Element `a + b*eps` of `Z[eps] / (eps^2 + eps + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Eisenstein(pub i64, pub i64);

impl Eisenstein {
    pub const ONE: Eisenstein = Eisenstein(1, 0);
    pub const EPS: Eisenstein = Eisenstein(0, 1);

    pub fn mul(self, o: Eisenstein) -> Eisenstein {
        // eps^2 = -1 - eps
        let (a, b, c, d) = (self.0, self.1, o.0, o.1);
        Eisenstein(a * c - b * d, a * d + b * c - b * d)
    }

    pub fn pow(self, e: u32) -> Eisenstein {
        (0..e).fold(Eisenstein::ONE, |acc, _| acc.mul(self))
    }
}

/// Weight of a monomial by substituting `X -> eps X`, `Y -> eps^2 Y` and
/// reading off which power of `eps` the monomial picks up.
pub fn weight_by_substitution(m: &Monomial) -> u8 {
    let e = m.exps();
    let eps2 = Eisenstein::EPS.mul(Eisenstein::EPS);
    let factor = Eisenstein::EPS
        .pow((e[1] + e[2]) as u32)
        .mul(eps2.pow((e[3] + e[4]) as u32));
    (0..3u8)
        .find(|&k| Eisenstein::EPS.pow(k as u32) == factor)
        .expect("a power of eps")
}

/// Coefficients of `(1 - t^3)^2 / (1 - t)^5` up to `t^n`.
pub fn hilbert_series(n: usize) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    for (k, c) in [(0, 1), (3, -2), (6, 1)] {
        if k <= n {
            num[k] += c;
        }
    }
    // multiply by 1/(1-t) five times, i.e. take partial sums
    for _ in 0..5 {
        for i in 1..=n {
            num[i] += num[i - 1];
        }
    }
    num
}

/// `c_2` of a (3,3) complete intersection surface in P^4 as a multiple of
/// `H^2`, from the expansion of `(1+H)^5 / (1+3H)^2`, together with `c_1`.
pub fn chern_classes_33() -> (i64, i64) {
    let trunc = 3;
    let mut num = vec![0i64; trunc];
    for (k, slot) in num.iter_mut().enumerate() {
        *slot = [1, 5, 10][k];
    }
    // 1/(1+3H) = 1 - 3H + 9H^2
    let inv = [1i64, -3, 9];
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0i64; trunc];
        for i in 0..trunc {
            for j in 0..trunc - i {
                out[i + j] += a[i] * b[j];
            }
        }
        out
    };
    let c = mul(&mul(&num, &inv), &inv);
    (c[1], c[2])
}

/// `chi(Theta)` for the cover, via Riemann-Roch: `(7 c_1^2 - 5 c_2) / 6`
/// with `H^2 = 9`.
pub fn euler_char_tangent() -> i64 {
    let (c1, c2) = chern_classes_33();
    let deg = 9;
    (7 * c1 * c1 * deg - 5 * c2 * deg) / 6
}

/// Leibniz expansion of a determinant of rationals.
pub fn det_leibniz(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::from_int(0);
    permute(&mut perm, 0, &mut |p| {
        let mut prod = Rational::from_int(if sign(p) > 0 { 1 } else { -1 });
        for (r, &c) in p.iter().enumerate() {
            prod = tors3::polyring::Coeff::mul(&prod, &m[r][c]);
        }
        total = tors3::polyring::Coeff::add(&total, &prod);
    });
    total
}

fn sign(p: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Every permutation of a single-term matrix whose product is `target`,
/// as 1-based `(row, column)` lists sorted by column, with the signed
/// coefficient. Full `n!` enumeration.
pub fn census_brute_force(m: &[Vec<ParamPoly>], target: &ParamMono) -> Vec<(Vec<(usize, usize)>, Rational)> {
    let n = m.len();
    let entries: Vec<Vec<Option<(ParamMono, Rational)>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.as_single_term().map(|(mm, c)| (*mm, c.clone())))
                .collect()
        })
        .collect();
    let mut hits = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut mono = ParamMono::one();
        let mut coeff = Rational::from_int(if sign(p) > 0 { 1 } else { -1 });
        for (r, &c) in p.iter().enumerate() {
            match &entries[r][c] {
                Some((mm, cc)) => {
                    mono = mono.mul(mm);
                    coeff = tors3::polyring::Coeff::mul(&coeff, cc);
                }
                None => return,
            }
        }
        if &mono == target {
            let mut pos: Vec<(usize, usize)> = p.iter().enumerate().map(|(r, &c)| (r + 1, c + 1)).collect();
            pos.sort_by_key(|&(_, c)| c);
            hits.push((pos, coeff));
        }
    });
    hits
}

/// Rank over `Z/p` by plain Gaussian elimination on machine words.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let inv = |a: i64| {
        let (mut r, mut e, mut base) = (1i64, p - 2, a);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let iv = inv(m[rank][c]);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * iv % p;
                for k in 0..ncols {
                    m[r][k] = (m[r][k] - f * m[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of points of `P^4(F_p)`.
pub fn projective_points(p: u64) -> u64 {
    (0..5).map(|k| p.pow(k)).sum()
}

/// Parameter monomial from `(name, exponent)` pairs.
pub fn param_mono(factors: &[(&str, u8)]) -> ParamMono {
    let mut map: BTreeMap<&str, u8> = BTreeMap::new();
    for (n, e) in factors {
        *map.entry(n).or_default() += e;
    }
    let f: Vec<_> = map
        .into_iter()
        .map(|(n, e)| (tors3::polyring::Param::from_name(n).expect("known name"), e))
        .collect();
    ParamMono::from_factors(&f)
}
