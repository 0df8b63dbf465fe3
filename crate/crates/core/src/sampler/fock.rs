use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Occupation numbers `(s₁ … s_m)`, one per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockState(Vec<usize>);

impl FockState {
    pub fn new(occupations: Vec<usize>) -> Self {
        Self(occupations)
    }

    /// `n` photons, one in each listed mode.
    pub fn from_modes(m: usize, modes: &[usize]) -> Result<Self> {
        let mut occ = vec![0; m];
        for &k in modes {
            if k >= m {
                return Err(Error::OutOfRange(format!("mode {k} outside 0..{m}")));
            }
            occ[k] += 1;
        }
        Ok(Self(occ))
    }

    pub fn vacuum(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&s| s <= 1)
    }

    /// Mode index of every photon, repeated by occupation: `(2,0,1)` gives
    /// `[0, 0, 2]`.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect()
    }

    /// `Π s_i!`
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&s| factorial(s)).product()
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Accepts either one digit per mode (`"10101"`) or comma-separated counts
/// (`"1,0,12"`).
impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_err = |what: &str| Error::Parse {
            line: 1,
            message: format!("invalid Fock state {s:?}: {what}"),
        };
        if s.is_empty() {
            return Err(parse_err("empty"));
        }
        let occ = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(&e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| parse_err("non-digit"))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self(occ))
    }
}

/// All `n`-photon states over `m` modes in ascending lexicographic order of
/// the occupation vectors; there are `C(m+n−1, n)` of them.
pub fn enumerate_states(m: usize, n: usize) -> Vec<FockState> {
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(FockState(vec![]));
        }
        return out;
    }
    let mut cur = vec![0; m];
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<FockState>) {
        let m = cur.len();
        if k == m - 1 {
            cur[k] = left;
            out.push(FockState(cur.clone()));
            return;
        }
        for s in 0..=left {
            cur[k] = s;
            rec(k + 1, left - s, cur, out);
        }
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// The `C(m, n)` states with at most one photon per mode, same ordering as
/// [`enumerate_states`].
pub fn collision_free_states(m: usize, n: usize) -> Vec<FockState> {
    let mut out = Vec::new();
    let mut cur = vec![0; m];
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<FockState>) {
        let m = cur.len();
        if left > m - k {
            return;
        }
        if k == m {
            out.push(FockState(cur.clone()));
            return;
        }
        cur[k] = 0;
        rec(k + 1, left, cur, out);
        if left > 0 {
            cur[k] = 1;
            rec(k + 1, left - 1, cur, out);
            cur[k] = 0;
        }
    }
    rec(0, n, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_binomials() {
        assert_eq!(enumerate_states(5, 3).len(), 35);
        assert_eq!(collision_free_states(5, 3).len(), 10);
        for m in 1..7 {
            for n in 0..5 {
                assert_eq!(enumerate_states(m, n).len() as u128, binomial(m + n - 1, n));
                assert_eq!(collision_free_states(m, n).len() as u128, binomial(m, n));
            }
        }
    }

    #[test]
    fn ordering_is_lexicographic() {
        let all = enumerate_states(4, 3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0].occupations(), &[0, 0, 0, 3]);
        let cf = collision_free_states(4, 2);
        assert!(cf.windows(2).all(|w| w[0] < w[1]));
        assert!(cf.iter().all(FockState::is_collision_free));
    }

    #[test]
    fn parse_and_display() {
        let s: FockState = "10101".parse().unwrap();
        assert_eq!(s.occupations(), &[1, 0, 1, 0, 1]);
        assert_eq!(s.to_string(), "10101");
        let t: FockState = "2, 0,11".parse().unwrap();
        assert_eq!(t.occupations(), &[2, 0, 11]);
        assert_eq!(t.to_string(), "2,0,11");
        assert!("1x1".parse::<FockState>().is_err());
        assert!("".parse::<FockState>().is_err());
    }

    #[test]
    fn mode_list_repeats() {
        let s = FockState::new(vec![2, 0, 1]);
        assert_eq!(s.mode_list(), vec![0, 0, 2]);
        assert_eq!(s.factorial_product(), 2.0);
        assert_eq!(
            FockState::from_modes(3, &[2, 0, 2]).unwrap().occupations(),
            &[1, 0, 2]
        );
    }
}
