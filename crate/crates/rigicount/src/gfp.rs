//! Dense linear algebra over GF(p) with p = 2^31 - 1.
//!
//! Random evaluation of a generic matrix over a large prime field gives its
//! generic rank except with probability O(deg / p) (Schwartz-Zippel), so
//! exact echelon arithmetic here replaces floating-point rank thresholds.

/// The Mersenne prime 2^31 - 1.
pub const MODULUS: u64 = (1 << 31) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    a * b % MODULUS
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a % MODULUS != 0, "zero has no inverse");
    pow(a, MODULUS - 2)
}

/// Row-major matrix over GF(p).
#[derive(Debug, Clone)]
pub struct MatGf {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl MatGf {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatGf { rows, cols, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % MODULUS;
    }

    pub fn transpose(&self) -> MatGf {
        let mut out = MatGf::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Reduces in place to row echelon form; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    self.set(row, c, self.get(p, c));
                    self.set(p, c, tmp);
                }
            }
            let piv_inv = inv(self.get(row, col));
            for c in col..self.cols {
                let v = mul(self.get(row, c), piv_inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for c in col..self.cols {
                        let v = sub(self.get(r, c), mul(f, self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelon().len()
    }

    /// Basis of the right null space {x : Mx = 0}.
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let mut work = self.clone();
        let pivots = work.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u64; self.cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                // Reduced form: row r reads x[pc] + sum over free columns.
                x[pc] = sub(0, work.get(r, free));
            }
            basis.push(x);
        }
        basis
    }

    /// Basis of the left null space {y : yM = 0}.
    pub fn left_null_space(&self) -> Vec<Vec<u64>> {
        self.transpose().null_space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        assert_eq!(add(MODULUS - 1, 5), 4);
        assert_eq!(sub(2, 5), MODULUS - 3);
        assert_eq!(mul(inv(12345), 12345), 1);
    }

    #[test]
    fn rank_and_kernel_of_a_singular_matrix() {
        // Rows: (1, 2, 3), (2, 4, 6), (0, 1, 1): rank 2.
        let mut m = MatGf::zeros(3, 3);
        for (r, row) in [[1u64, 2, 3], [2, 4, 6], [0, 1, 1]].iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        assert_eq!(m.rank(), 2);
        let basis = m.null_space();
        assert_eq!(basis.len(), 1);
        for x in &basis {
            for r in 0..3 {
                let mut acc = 0u64;
                for c in 0..3 {
                    acc = add(acc, mul(m.get(r, c), x[c]));
                }
                assert_eq!(acc, 0);
            }
        }
    }

    #[test]
    fn left_kernel_annihilates_rows() {
        let mut m = MatGf::zeros(3, 2);
        for (r, row) in [[1u64, 0], [0, 1], [1, 1]].iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        let basis = m.left_null_space();
        assert_eq!(basis.len(), 1);
        let y = &basis[0];
        for c in 0..2 {
            let mut acc = 0u64;
            for r in 0..3 {
                acc = add(acc, mul(y[r], m.get(r, c)));
            }
            assert_eq!(acc, 0);
        }
    }
}
