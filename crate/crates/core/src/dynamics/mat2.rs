//! Minimal 2x2 real matrix used for tangent maps.

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }

    /// Max-absolute-entry norm.
    pub fn norm_inf(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// Entrywise max difference, the metric used against the
    /// finite-difference oracle.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut m = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_apply() {
        let m = Mat2([[2.0, 1.0], [1.0, 1.0]]);
        assert_eq!(m.det(), 1.0);
        assert_eq!(m.apply([1.0, 0.0]), [2.0, 1.0]);
        let id = m.mul(&Mat2([[1.0, -1.0], [-1.0, 2.0]]));
        assert!(id.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
    }
}
