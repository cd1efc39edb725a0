use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{domain, Result};

/// A point on the unit sphere, stored as polar and azimuthal angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    polar: f64,
    azimuth: f64,
}

impl Direction {
    pub const UP: Direction = Direction { polar: 0.0, azimuth: 0.0 };

    pub fn polar(&self) -> f64 {
        self.polar
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.polar.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Direction of a nonzero vector.
    pub fn from_cartesian(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(domain(format!("cannot take the direction of {v:?}")));
        }
        let polar = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let azimuth = v[1].atan2(v[0]).rem_euclid(TAU);
        Ok(Self { polar, azimuth })
    }

    pub fn antipode(&self) -> Self {
        Self {
            polar: PI - self.polar,
            azimuth: (self.azimuth + PI).rem_euclid(TAU),
        }
    }
}

/// Builds a direction; the azimuth is reduced into `[0, 2π)`.
pub fn direction_from_angles(polar: f64, azimuth: f64) -> Result<Direction> {
    if !(0.0..=PI).contains(&polar) || !azimuth.is_finite() {
        return Err(domain(format!("polar angle {polar} outside [0, π] or non-finite azimuth")));
    }
    let mut azimuth = azimuth.rem_euclid(TAU);
    if azimuth >= TAU {
        azimuth = 0.0;
    }
    Ok(Direction { polar, azimuth })
}

/// The guessing score `cos²(θ/2)` for the angle θ between `u` and `w`.
pub fn score(u: &Direction, w: &Direction) -> f64 {
    let (a, b) = (u.cartesian(), w.cartesian());
    let cos = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    0.5 * (1.0 + cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cardinal_directions() {
        let z = direction_from_angles(0.0, 1.234).unwrap().cartesian();
        assert_abs_diff_eq!(z[2], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[0].hypot(z[1]), 0.0, epsilon = 1e-15);
        let x = direction_from_angles(FRAC_PI_2, 0.0).unwrap().cartesian();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        let mz = direction_from_angles(PI, 0.0).unwrap().cartesian();
        assert_abs_diff_eq!(mz[2], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn azimuth_reduced() {
        let d = direction_from_angles(1.0, -0.5).unwrap();
        assert_abs_diff_eq!(d.azimuth(), TAU - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn out_of_range_polar_rejected() {
        assert!(direction_from_angles(-0.1, 0.0).is_err());
        assert!(direction_from_angles(3.2, 0.0).is_err());
    }

    #[test]
    fn score_examples() {
        let z = Direction::UP;
        let mz = direction_from_angles(PI, 0.0).unwrap();
        let x = direction_from_angles(FRAC_PI_2, 0.0).unwrap();
        assert_abs_diff_eq!(score(&z, &z), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(score(&z, &mz), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(score(&z, &x), 0.5, epsilon = 1e-15);
    }
}
