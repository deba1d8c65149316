//! Independent dense-matrix oracle: plain `Vec<Vec<Complex64>>` arithmetic in
//! the canonical basis, written without the crate's operator types.

#![allow(dead_code)]

use cheshire_core::Complex64;

pub type Mat = Vec<Vec<Complex64>>;
pub type Vect = Vec<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(x: f64) -> Complex64 {
    c(x, 0.0)
}

pub fn eye(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { r(1.0) } else { r(0.0) }).collect()).collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![r(0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &Vect, b: &Vect) -> Vect {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn matvec(a: &Mat, v: &Vect) -> Vect {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// `⟨u|v⟩` with `u` given as a ket (conjugated here).
pub fn braket(u: &Vect, v: &Vect) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn h() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

// 2x2 blocks in (L,R) or (H,V) order.
pub fn hadamard() -> Mat {
    vec![vec![r(h()), r(h())], vec![r(h()), r(-h())]]
}
pub fn sx() -> Mat {
    vec![vec![r(0.0), r(1.0)], vec![r(1.0), r(0.0)]]
}
pub fn sy() -> Mat {
    vec![vec![r(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), r(0.0)]]
}
pub fn sz() -> Mat {
    vec![vec![r(1.0), r(0.0)], vec![r(0.0), r(-1.0)]]
}
pub fn proj(i: usize) -> Mat {
    let mut m = vec![vec![r(0.0); 2]; 2];
    m[i][i] = r(1.0);
    m
}

/// HWP on arm R of path ⊗ pol (4x4, canonical order LH, LV, RH, RV).
pub fn hwp_right() -> Mat {
    let mut m = kron(&proj(0), &eye(2));
    let flip = kron(&proj(1), &sx());
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] += flip[i][j];
        }
    }
    m
}

/// Two-port PBS: H keeps its mode, V swaps modes.
pub fn pbs() -> Mat {
    let mut m = kron(&eye(2), &proj(0));
    let refl = kron(&sx(), &proj(1));
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] += refl[i][j];
        }
    }
    m
}

/// Interferometer with output PBS, up to the detectors: PBS · BS2 · HWP_R · BS1.
pub fn mz_pbs_total() -> Mat {
    let bs = kron(&hadamard(), &eye(2));
    matmul(&pbs(), &matmul(&bs, &matmul(&hwp_right(), &bs)))
}

pub fn basis(n: usize, i: usize) -> Vect {
    (0..n).map(|j| if i == j { r(1.0) } else { r(0.0) }).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Tiny deterministic generator (SplitMix64) for random test states.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn complex(&mut self) -> Complex64 {
        c(self.unit(), self.unit())
    }

    pub fn vector(&mut self, n: usize) -> Vect {
        (0..n).map(|_| self.complex()).collect()
    }
}
