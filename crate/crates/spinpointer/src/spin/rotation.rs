use num_complex::Complex64;

/// A 2×2 unitary acting on a single spin-1/2, rows/columns ordered `(↑, ↓)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHalfRotation {
    pub entries: [[Complex64; 2]; 2],
}

impl SpinHalfRotation {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self { entries: [[one, zero], [zero, one]] }
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.entries;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.entries;
        Self {
            entries: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { entries: out }
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().compose(self);
        let id = Self::identity();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.entries[i][j] - id.entries[i][j]).norm());
            }
        }
        worst
    }
}

/// `exp(−i p·σ/2)`: rotation by `|p|` about `p̂`, right-handed.
pub fn su2_rotation(p: [f64; 3]) -> SpinHalfRotation {
    let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let c = (0.5 * norm).cos();
    // sin(|p|/2)/|p|, continued analytically through |p| = 0.
    let sinc_half = if norm < 1e-6 {
        0.5 - norm * norm / 48.0
    } else {
        (0.5 * norm).sin() / norm
    };
    let (vx, vy, vz) = (p[0] * sinc_half, p[1] * sinc_half, p[2] * sinc_half);
    SpinHalfRotation {
        entries: [
            [Complex64::new(c, -vz), Complex64::new(-vy, -vx)],
            [Complex64::new(vy, -vx), Complex64::new(c, vz)],
        ],
    }
}

/// The `(↑, ↓)` components of `su2_rotation(p)|↑⟩`.
pub fn rotated_up_amplitudes(p: [f64; 3]) -> (Complex64, Complex64) {
    let u = su2_rotation(p);
    (u.entries[0][0], u.entries[1][0])
}
