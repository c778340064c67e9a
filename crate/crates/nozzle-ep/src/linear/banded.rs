//! Banded LU factorization with partial pivoting (LAPACK `gbtrf` layout, unblocked).

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals. Storage reserves `kl` extra
/// super-diagonals for pivoting fill.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<f64>,
}

/// Factored form ready for repeated solves.
#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    ipiv: Vec<usize>,
    /// `max |u_jj| / min |u_jj|`, a cheap condition indicator.
    pub pivot_ratio: f64,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        Self { n, kl, ku, ld, ab: vec![0.0; ld * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        // row `kv + r - c` of column `c`
        (self.kl + self.ku + r - c) + c * self.ld
    }

    /// Accumulate `v` into entry `(r, c)`; panics outside the declared band.
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of range");
        assert!(c <= r + self.ku && r <= c + self.kl, "entry ({r}, {c}) outside band kl={} ku={}", self.kl, self.ku);
        let k = self.idx(r, c);
        self.ab[k] += v;
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        if c > r + self.ku || r > c + self.kl {
            return 0.0;
        }
        self.ab[self.idx(r, c)]
    }

    /// `y = A x` using the declared band.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (r, yr) in y.iter_mut().enumerate() {
            let lo = r.saturating_sub(self.kl);
            let hi = (r + self.ku).min(self.n - 1);
            for c in lo..=hi {
                *yr += self.ab[self.idx(r, c)] * x[c];
            }
        }
        y
    }

    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let kv = kl + ku;
        let scale = self.ab.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = scale * 1e-14;
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        let (mut pmin, mut pmax) = (f64::INFINITY, 0.0f64);
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = 0.0;
            for t in 0..=km {
                let v = self.ab[(kv + t) + j * self.ld].abs();
                if v > best {
                    best = v;
                    jp = t;
                }
            }
            ipiv[j] = j + jp;
            if !(best > tiny) {
                let cond = if best > 0.0 { pmax.max(scale) / best } else { f64::INFINITY };
                return Err(Error::SingularSystem { row: j, pivot: best, cond });
            }
            pmin = pmin.min(best);
            pmax = pmax.max(best);
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let a = self.idx(j, c);
                    let b = self.idx(j + jp, c);
                    self.ab.swap(a, b);
                }
            }
            let piv = self.ab[kv + j * self.ld];
            for t in 1..=km {
                self.ab[(kv + t) + j * self.ld] /= piv;
            }
            for c in j + 1..=ju {
                let ujc = self.ab[self.idx(j, c)];
                if ujc == 0.0 {
                    continue;
                }
                for t in 1..=km {
                    let l = self.ab[(kv + t) + j * self.ld];
                    let k = self.idx(j + t, c);
                    self.ab[k] -= l * ujc;
                }
            }
        }
        Ok(BandLu { m: self, ipiv, pivot_ratio: pmax / pmin })
    }
}

impl BandLu {
    pub fn solve(&self, b: &mut [f64]) {
        let m = &self.m;
        let n = m.n;
        let kv = m.kl + m.ku;
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = m.kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for t in 1..=km {
                    b[j + t] -= m.ab[(kv + t) + j * m.ld] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] /= m.ab[kv + j * m.ld];
            let bj = b[j];
            if bj != 0.0 {
                let lo = j.saturating_sub(kv);
                for r in lo..j {
                    b[r] -= m.ab[m.idx(r, j)] * bj;
                }
            }
        }
    }
}
