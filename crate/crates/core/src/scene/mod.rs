//! 3D Gaussian scene representation: anisotropic Gaussians with spherical
//! harmonics color, pinhole cameras, density/covariance evaluation.

pub mod io;
pub mod sh;

use crate::error::{Error, Result};
use crate::math::{logit, sigmoid, Mat3, Quat, Vec3};
use crate::scalar::{c, Scalar};

/// Minimum world-space scale; covariances built from smaller scales are
/// rejected at construction.
pub const MIN_SCALE: f64 = 1e-6;

/// One anisotropic 3D Gaussian.
///
/// Scale is stored as log-scale and opacity as a logit so that optimizer
/// steps can never leave the valid domain (scale > 0, opacity in (0,1)).
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian3D<T> {
    pub mean: Vec3<T>,
    /// Unit quaternion (renormalized after every optimizer step).
    pub rotation: Quat<T>,
    pub log_scale: Vec3<T>,
    pub opacity_logit: T,
    /// SH coefficients, `(degree+1)^2` per channel, laid out coefficient-major:
    /// `sh[k * 3 + channel]`.
    pub sh: Vec<T>,
    pub editable: bool,
}

impl<T: Scalar> Gaussian3D<T> {
    /// Build from world-space scale and opacity in (0, 1).
    pub fn new(
        mean: Vec3<T>,
        rotation: Quat<T>,
        scale: Vec3<T>,
        opacity: T,
        sh: Vec<T>,
        editable: bool,
    ) -> Result<Self> {
        let floor = c::<T>(MIN_SCALE);
        for s in scale.to_array() {
            if !(s >= floor) {
                return Err(Error::DegenerateCovariance {
                    scale: s.to_f64().unwrap_or(f64::NAN),
                    floor: MIN_SCALE,
                });
            }
        }
        if !(opacity > T::zero() && opacity < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "opacity {opacity} not in (0,1)"
            )));
        }
        if rotation.norm() < c(1e-12) {
            return Err(Error::InvalidParameter("zero quaternion".into()));
        }
        if sh.len() % 3 != 0 || !matches!(sh.len() / 3, 1 | 4 | 9 | 16) {
            return Err(Error::InvalidParameter(format!(
                "sh length {} is not 3*(L+1)^2 for L in 0..=3",
                sh.len()
            )));
        }
        Ok(Self {
            mean,
            rotation: rotation.normalized(),
            log_scale: Vec3::new(scale.x.ln(), scale.y.ln(), scale.z.ln()),
            opacity_logit: logit(opacity),
            sh,
            editable,
        })
    }

    pub fn sh_degree(&self) -> usize {
        match self.sh.len() / 3 {
            1 => 0,
            4 => 1,
            9 => 2,
            _ => 3,
        }
    }

    pub fn scale(&self) -> Vec3<T> {
        Vec3::new(self.log_scale.x.exp(), self.log_scale.y.exp(), self.log_scale.z.exp())
    }

    pub fn opacity(&self) -> T {
        sigmoid(self.opacity_logit)
    }

    /// Covariance Sigma = R * diag(s)^2 * R^T; symmetric PSD by construction.
    pub fn covariance(&self) -> Mat3<T> {
        let r = self.rotation.rotation_matrix();
        let s = self.scale();
        let s2 = Mat3::diag(Vec3::new(s.x * s.x, s.y * s.y, s.z * s.z));
        r.mul(&s2).mul(&r.transpose())
    }

    /// Unnormalized Gaussian density exp(-0.5 (x-mu)^T Sigma^-1 (x-mu)); 1 at the mean.
    pub fn density_at(&self, x: Vec3<T>) -> Result<T> {
        let s = self.scale();
        let floor = c::<T>(MIN_SCALE);
        if s.x < floor || s.y < floor || s.z < floor {
            return Err(Error::DegenerateCovariance {
                scale: s.x.min(s.y).min(s.z).to_f64().unwrap_or(f64::NAN),
                floor: MIN_SCALE,
            });
        }
        let d = x.sub(self.mean);
        let y = self.covariance().solve(d);
        Ok((-c::<T>(0.5) * d.dot(y)).exp())
    }
}

/// Ordered collection of Gaussians sharing one SH degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianScene<T> {
    pub gaussians: Vec<Gaussian3D<T>>,
    pub sh_degree: usize,
}

impl<T: Scalar> GaussianScene<T> {
    pub fn new(gaussians: Vec<Gaussian3D<T>>, sh_degree: usize) -> Result<Self> {
        if sh_degree > 3 {
            return Err(Error::InvalidParameter(format!("sh_degree {sh_degree} > 3")));
        }
        let want = 3 * (sh_degree + 1) * (sh_degree + 1);
        for (i, g) in gaussians.iter().enumerate() {
            if g.sh.len() != want {
                return Err(Error::ShapeMismatch(format!(
                    "gaussian {i} has {} sh values, scene degree {sh_degree} needs {want}",
                    g.sh.len()
                )));
            }
        }
        Ok(Self { gaussians, sh_degree })
    }

    pub fn empty(sh_degree: usize) -> Self {
        Self { gaussians: Vec::new(), sh_degree }
    }

    pub fn len(&self) -> usize {
        self.gaussians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaussians.is_empty()
    }

    /// Axis-aligned bounds of the means; None for an empty scene.
    pub fn bbox(&self) -> Option<(Vec3<T>, Vec3<T>)> {
        let first = self.gaussians.first()?;
        let mut lo = first.mean;
        let mut hi = first.mean;
        for g in &self.gaussians {
            lo = Vec3::new(lo.x.min(g.mean.x), lo.y.min(g.mean.y), lo.z.min(g.mean.z));
            hi = Vec3::new(hi.x.max(g.mean.x), hi.y.max(g.mean.y), hi.z.max(g.mean.z));
        }
        Some((lo, hi))
    }
}

/// Pinhole camera with a rigid world-to-camera transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera<T> {
    pub width: usize,
    pub height: usize,
    pub fx: T,
    pub fy: T,
    pub cx: T,
    pub cy: T,
    /// World-to-camera rotation (row-major).
    pub rotation: Mat3<T>,
    pub translation: Vec3<T>,
}

impl<T: Scalar> Camera<T> {
    pub fn new(
        width: usize,
        height: usize,
        fx: T,
        fy: T,
        cx: T,
        cy: T,
        rotation: Mat3<T>,
        translation: Vec3<T>,
    ) -> Result<Self> {
        if fx <= T::zero() || fy <= T::zero() {
            return Err(Error::InvalidParameter("fx, fy must be positive".into()));
        }
        if cx < T::zero() || cx >= crate::scalar::cu(width) || cy < T::zero() || cy >= crate::scalar::cu(height) {
            return Err(Error::InvalidParameter("principal point outside image".into()));
        }
        let rrt = rotation.mul(&rotation.transpose());
        let eye = Mat3::identity();
        // f32 look-at construction carries a few ulps of error; 1e-5 covers it
        // while still rejecting genuinely non-orthonormal inputs.
        let tol = c::<T>(1e-5);
        for i in 0..3 {
            for j in 0..3 {
                if (rrt.m[i][j] - eye.m[i][j]).abs() > tol {
                    return Err(Error::InvalidParameter("rotation not orthonormal".into()));
                }
            }
        }
        Ok(Self { width, height, fx, fy, cx, cy, rotation, translation })
    }

    /// Camera looking from `eye` toward `target`; +z is the viewing direction.
    pub fn look_at(
        width: usize,
        height: usize,
        focal: T,
        eye: Vec3<T>,
        target: Vec3<T>,
        up: Vec3<T>,
    ) -> Result<Self> {
        let forward = target.sub(eye).normalized();
        // right = forward x up (camera x points right in image space)
        let right = Vec3::new(
            forward.y * up.z - forward.z * up.y,
            forward.z * up.x - forward.x * up.z,
            forward.x * up.y - forward.y * up.x,
        )
        .normalized();
        let down = Vec3::new(
            forward.y * right.z - forward.z * right.y,
            forward.z * right.x - forward.x * right.z,
            forward.x * right.y - forward.y * right.x,
        );
        let rotation = Mat3::from_rows(right.to_array(), down.to_array(), forward.to_array());
        let translation = rotation.mul_vec(eye).scale(-T::one());
        let half = c::<T>(0.5);
        Self::new(
            width,
            height,
            focal,
            focal,
            crate::scalar::cu::<T>(width) * half,
            crate::scalar::cu::<T>(height) * half,
            rotation,
            translation,
        )
    }

    pub fn world_to_cam(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation.mul_vec(p).add(self.translation)
    }

    /// Camera center in world coordinates.
    pub fn center(&self) -> Vec3<T> {
        self.rotation.transpose().mul_vec(self.translation).scale(-T::one())
    }

    /// Unit vector from the camera center toward a world point.
    pub fn view_dir_to(&self, p: Vec3<T>) -> Vec3<T> {
        p.sub(self.center()).normalized()
    }

    /// World point at pixel (px, py) and camera-space depth z.
    pub fn unproject(&self, px: T, py: T, z: T) -> Vec3<T> {
        let x = (px - self.cx) / self.fx * z;
        let y = (py - self.cy) / self.fy * z;
        let cam = Vec3::new(x, y, z);
        self.rotation.transpose().mul_vec(cam.sub(self.translation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dc_sh(rgb: [f64; 3]) -> Vec<f64> {
        // degree 0: one coefficient per channel
        vec![rgb[0], rgb[1], rgb[2]]
    }

    fn unit_gaussian(scale: Vec3<f64>, rot: Quat<f64>) -> Gaussian3D<f64> {
        Gaussian3D::new(Vec3::zero(), rot, scale, 0.5, dc_sh([0.0; 3]), true).unwrap()
    }

    #[test]
    fn covariance_isotropic_unit_is_identity() {
        let g = unit_gaussian(Vec3::splat(1.0), Quat::identity());
        let cov = g.covariance();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(cov.m[i][j], want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn covariance_axis_aligned_scaling() {
        let g = unit_gaussian(Vec3::new(2.0, 1.0, 1.0), Quat::identity());
        let cov = g.covariance();
        assert_relative_eq!(cov.m[0][0], 4.0, epsilon = 1e-12);
        assert_relative_eq!(cov.m[1][1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(cov.m[2][2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn covariance_rotated_matches_matrix_product_oracle() {
        // 90 degrees about z with s=(2,1,1): direct R diag(4,1,1) R^T gives diag(1,4,1)
        let q = Quat::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2);
        let g = unit_gaussian(Vec3::new(2.0, 1.0, 1.0), q);
        let cov = g.covariance();
        let r = q.rotation_matrix();
        let oracle = r.mul(&Mat3::diag(Vec3::new(4.0, 1.0, 1.0))).mul(&r.transpose());
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(cov.m[i][j], oracle.m[i][j], epsilon = 1e-12);
            }
        }
        assert_relative_eq!(cov.m[0][0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(cov.m[1][1], 4.0, epsilon = 1e-12);
        assert_relative_eq!(cov.m[2][2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn covariance_eigenvalues_are_squared_scales() {
        // eigenvalue check through nalgebra on a randomly rotated gaussian
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let q = Quat::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if q.norm() < 1e-3 {
                continue;
            }
            let s = Vec3::new(
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.2..2.0),
            );
            let g = unit_gaussian(s, q);
            let cov = g.covariance();
            let m = nalgebra::Matrix3::from_fn(|i, j| cov.m[i][j]);
            let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            let mut want = vec![s.x * s.x, s.y * s.y, s.z * s.z];
            eig.sort_by(|a, b| a.total_cmp(b));
            want.sort_by(|a, b| a.total_cmp(b));
            for (e, w) in eig.iter().zip(&want) {
                assert_relative_eq!(e, w, epsilon = 1e-6, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn density_is_one_at_mean() {
        let g = unit_gaussian(Vec3::new(0.3, 0.7, 1.1), Quat::new(0.6, 0.2, -0.3, 0.1));
        assert_eq!(g.density_at(g.mean).unwrap(), 1.0);
    }

    #[test]
    fn density_unit_isotropic_analytic() {
        let g = unit_gaussian(Vec3::splat(1.0), Quat::identity());
        let v = g.density_at(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(v, 0.6065306597126334, epsilon = 1e-12);
    }

    #[test]
    fn density_anisotropic_matches_linear_solve_oracle() {
        // Sigma = diag(1,4,1) from the rotated case; d = (1,1,0) gives
        // d^T Sigma^-1 d = 1 + 1/4, frozen from the dense-solve oracle.
        let q = Quat::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2);
        let g = unit_gaussian(Vec3::new(2.0, 1.0, 1.0), q);
        let v = g.density_at(Vec3::new(1.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(v, 0.5352614285189903, epsilon = 1e-9);

        // independent oracle: nalgebra dense solve
        let cov = g.covariance();
        let m = nalgebra::Matrix3::from_fn(|i, j| cov.m[i][j]);
        let d = nalgebra::Vector3::new(1.0, 1.0, 0.0);
        let y = m.lu().solve(&d).unwrap();
        let oracle = (-0.5 * d.dot(&y)).exp();
        assert_relative_eq!(v, oracle, epsilon = 1e-12);
    }

    #[test]
    fn density_maximized_at_mean_on_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = unit_gaussian(
                Vec3::new(
                    rng.gen_range(0.1..1.5),
                    rng.gen_range(0.1..1.5),
                    rng.gen_range(0.1..1.5),
                ),
                Quat::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0) + 1.5,
                ),
            );
            let peak = g.density_at(g.mean).unwrap();
            for _ in 0..50 {
                let p = Vec3::new(
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                );
                assert!(g.density_at(p).unwrap() <= peak);
            }
        }
    }

    #[test]
    fn construction_rejects_degenerate_scale() {
        let r = Gaussian3D::<f64>::new(
            Vec3::zero(),
            Quat::identity(),
            Vec3::new(1e-9, 1.0, 1.0),
            0.5,
            dc_sh([0.0; 3]),
            true,
        );
        assert!(matches!(r, Err(Error::DegenerateCovariance { .. })));
    }

    #[test]
    fn camera_rejects_bad_intrinsics() {
        let r = Camera::<f32>::new(64, 64, -1.0, 1.0, 32.0, 32.0, Mat3::identity(), Vec3::zero());
        assert!(r.is_err());
        let r = Camera::<f32>::new(64, 64, 50.0, 50.0, 80.0, 32.0, Mat3::identity(), Vec3::zero());
        assert!(r.is_err());
    }

    #[test]
    fn look_at_camera_sees_target_at_principal_point() {
        let cam = Camera::<f64>::look_at(
            64,
            48,
            60.0,
            Vec3::new(0.0, 0.0, -5.0),
            Vec3::zero(),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        let p = cam.world_to_cam(Vec3::zero());
        assert_relative_eq!(p.z, 5.0, epsilon = 1e-12);
        let u = cam.fx * p.x / p.z + cam.cx;
        let v = cam.fy * p.y / p.z + cam.cy;
        assert_relative_eq!(u, 32.0, epsilon = 1e-9);
        assert_relative_eq!(v, 24.0, epsilon = 1e-9);
        // unproject roundtrip
        let w = cam.unproject(u, v, 5.0);
        assert_relative_eq!(w.x, 0.0, epsilon = 1e-9);
        assert_relative_eq!(w.norm(), 0.0, epsilon = 1e-9);
        // camera center recovers the eye
        let ctr = cam.center();
        assert_relative_eq!(ctr.z, -5.0, epsilon = 1e-9);
    }
}
