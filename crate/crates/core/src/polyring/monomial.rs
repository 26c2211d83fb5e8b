use std::cmp::Ordering;
use std::fmt;

/// Number of ambient coordinates of P^4.
pub const NVARS: usize = 5;

/// Coordinate names in the fixed variable order.
pub const VAR_NAMES: [&str; NVARS] = ["W0", "X1", "X2", "Y3", "Y4"];

/// Weight of each coordinate under the order-3 action: `W0` is fixed, the
/// `X`'s are scaled by a primitive cube root of unity and the `Y`'s by its
/// inverse (weight 2 = -1 mod 3).
pub const VAR_WEIGHTS: [u8; NVARS] = [0, 1, 1, 2, 2];

pub const W0: usize = 0;
pub const X1: usize = 1;
pub const X2: usize = 2;
pub const Y3: usize = 3;
pub const Y4: usize = 4;

/// Exponent vector in `(W0, X1, X2, Y3, Y4)`.
///
/// Ordered graded-lexicographically with `W0 > X1 > X2 > Y3 > Y4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; NVARS]);

impl Monomial {
    pub const fn new(exps: [u8; NVARS]) -> Self {
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> [u8; NVARS] {
        self.0
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// `((e1 + e2) - (e3 + e4)) mod 3`.
    pub fn weight(&self) -> u8 {
        let x = self.0[X1] as i64 + self.0[X2] as i64;
        let y = self.0[Y3] as i64 + self.0[Y4] as i64;
        (x - y).rem_euclid(3) as u8
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    /// `self / var(i)` when divisible.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0;
        e[i] -= 1;
        Some(Monomial(e))
    }

    /// All monomials of degree `n`, in descending order.
    pub fn all_of_degree(n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = [0u8; NVARS];
        fn rec(i: usize, left: u32, cur: &mut [u8; NVARS], out: &mut Vec<Monomial>) {
            if i == NVARS - 1 {
                cur[i] = left as u8;
                out.push(Monomial(*cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u8;
                rec(i + 1, left - e, cur, out);
            }
        }
        rec(0, n, &mut cur, &mut out);
        out
    }

    /// Parses products like `W0^2*X1` or `X1 Y3`; `1` is the unit monomial.
    pub fn parse(s: &str) -> Option<Monomial> {
        let s = s.trim();
        if s == "1" {
            return Some(Monomial::one());
        }
        let mut e = [0u8; NVARS];
        for f in s.split(['*', ' ']).filter(|f| !f.is_empty()) {
            let (name, pow) = match f.split_once('^') {
                Some((n, p)) => (n, p.parse::<u8>().ok()?),
                None => (f, 1),
            };
            let i = VAR_NAMES.iter().position(|&v| v == name)?;
            e[i] += pow;
        }
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(VAR_NAMES[i].to_string()),
                _ => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of monomials of degree `n` in five variables.
pub fn monomial_count(n: u32) -> usize {
    binomial(n as u64 + 4, 4) as usize
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_of_examples() {
        assert_eq!(Monomial::parse("W0^4").unwrap().weight(), 0);
        assert_eq!(Monomial::parse("X1*Y3").unwrap().weight(), 0);
        assert_eq!(Monomial::parse("X1^2*X2").unwrap().weight(), 0);
        assert_eq!(Monomial::parse("W0*X1").unwrap().weight(), 1);
        assert_eq!(Monomial::parse("W0*Y3").unwrap().weight(), 2);
    }

    #[test]
    fn enumeration_is_descending_and_complete() {
        for n in 0..6 {
            let ms = Monomial::all_of_degree(n);
            assert_eq!(ms.len(), monomial_count(n));
            assert!(ms.windows(2).all(|w| w[0] > w[1]));
            assert!(ms.iter().all(|m| m.degree() == n));
        }
        let two = Monomial::all_of_degree(2);
        assert_eq!(two[0].to_string(), "W0^2");
        assert_eq!(two.last().unwrap().to_string(), "Y4^2");
    }

    #[test]
    fn parse_and_display() {
        let m = Monomial::parse("X1^2 Y3 Y4").unwrap();
        assert_eq!(m.to_string(), "X1^2*Y3*Y4");
        assert_eq!(Monomial::parse(&m.to_string()), Some(m));
        assert!(Monomial::parse("Z9").is_none());
    }
}
