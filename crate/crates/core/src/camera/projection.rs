use serde::{Deserialize, Serialize};

use crate::{Error, Quat, Result, Vec3};

/// Stand-in magnitude for NDC coordinates that are non-finite (points in the
/// camera plane).
pub const NDC_SENTINEL: f64 = 1e6;

/// Static pinhole camera looking down its local -Z with +Y up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraSpec {
    pub position: Vec3,
    #[serde(with = "crate::serde_util::quat_wxyz")]
    pub orientation: Quat,
    /// Vertical field of view in radians.
    pub vertical_fov: f64,
    /// Width over height.
    pub aspect: f64,
    pub near: f64,
}

impl Default for CameraSpec {
    fn default() -> Self {
        Self::looking_at(Vec3::new(0.0, 1.5, 6.0), Vec3::new(0.0, 1.0, 0.0), 50f64.to_radians(), 16.0 / 9.0, 0.1)
    }
}

impl CameraSpec {
    /// Camera at `position` aimed at `target`, keeping world +Y up.
    pub fn looking_at(position: Vec3, target: Vec3, vertical_fov: f64, aspect: f64, near: f64) -> Self {
        let dir = target - position;
        let orientation = if dir.norm() == 0.0 {
            Quat::identity()
        } else if dir.cross(&Vec3::y()).norm() < 1e-12 {
            // Looking straight up or down; any roll is as good as another.
            Quat::rotation_between(&-Vec3::z(), &dir).unwrap_or_else(Quat::identity)
        } else {
            // face_towards aligns local +Z with the given direction.
            Quat::face_towards(&-dir, &Vec3::y())
        };
        Self { position, orientation, vertical_fov, aspect, near }
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.orientation.quaternion();
        if !(self.position.iter().all(|c| c.is_finite()) && (q.norm() - 1.0).abs() < 1e-6) {
            return Err(Error::validation("camera position must be finite and orientation unit-norm"));
        }
        if !(self.vertical_fov > 0.0 && self.vertical_fov < std::f64::consts::PI) {
            return Err(Error::validation(format!("vertical_fov must be in (0, pi), got {}", self.vertical_fov)));
        }
        if !(self.aspect.is_finite() && self.aspect > 0.0) {
            return Err(Error::validation(format!("aspect must be positive, got {}", self.aspect)));
        }
        if !(self.near.is_finite() && self.near > 0.0) {
            return Err(Error::validation(format!("near must be positive, got {}", self.near)));
        }
        Ok(())
    }

    /// World point in camera coordinates.
    pub fn to_camera(&self, point: &Vec3) -> Vec3 {
        self.orientation.inverse() * (point - self.position)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    /// Normalized device coordinates; the visible region is `[-1, 1]^2`.
    pub ndc: [f64; 2],
    /// Distance along the view axis (`-z` in camera space).
    pub depth: f64,
    /// In front of the near plane and inside the frustum.
    pub in_view: bool,
    /// False when a coordinate was non-finite and replaced by `±NDC_SENTINEL`.
    pub finite: bool,
}

/// Perspective projection of a world point.
///
/// Points behind the near plane are reported out of view with the formula's
/// own (possibly flipped) sign.
pub fn project(camera: &CameraSpec, point: &Vec3) -> Projection {
    let p = camera.to_camera(point);
    let depth = -p.z;
    let tan_half = (camera.vertical_fov * 0.5).tan();
    let mut finite = true;
    let mut fix = |num: f64, v: f64| {
        if v.is_finite() {
            v
        } else {
            finite = false;
            if num == 0.0 {
                0.0
            } else {
                num.signum() * NDC_SENTINEL
            }
        }
    };
    let x = fix(p.x, (p.x / depth) / (camera.aspect * tan_half));
    let y = fix(p.y, (p.y / depth) / tan_half);
    let in_view = depth >= camera.near && x.abs() <= 1.0 && y.abs() <= 1.0;
    Projection { ndc: [x, y], depth, in_view, finite }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn camera() -> CameraSpec {
        CameraSpec {
            position: Vec3::zeros(),
            orientation: Quat::identity(),
            vertical_fov: 60f64.to_radians(),
            aspect: 1.5,
            near: 0.1,
        }
    }

    #[test]
    fn optical_axis_is_center() {
        let p = project(&camera(), &Vec3::new(0.0, 0.0, -5.0));
        assert_eq!(p.ndc, [0.0, 0.0]);
        assert_eq!(p.depth, 5.0);
        assert!(p.in_view && p.finite);
    }

    #[test]
    fn frustum_edges() {
        let cam = camera();
        let d = 3.0;
        let half = (cam.vertical_fov / 2.0).tan();
        let top = project(&cam, &Vec3::new(0.0, half * d, -d));
        assert!((top.ndc[1] - 1.0).abs() < 1e-9);
        let right = project(&cam, &Vec3::new(cam.aspect * half * d, 0.0, -d));
        assert!((right.ndc[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn behind_camera_is_out_of_view() {
        let p = project(&camera(), &Vec3::new(0.0, 0.0, 2.0));
        assert!(!p.in_view);
        assert_eq!(p.depth, -2.0);
        let q = project(&camera(), &Vec3::new(0.0, 0.0, -0.05));
        assert!(!q.in_view);
    }

    #[test]
    fn camera_plane_uses_sentinel() {
        let p = project(&camera(), &Vec3::new(1.0, -2.0, 0.0));
        assert!(!p.finite && !p.in_view);
        assert_eq!(p.ndc, [NDC_SENTINEL, -NDC_SENTINEL]);
        let o = project(&camera(), &Vec3::zeros());
        assert_eq!(o.ndc, [0.0, 0.0]);
    }

    #[test]
    fn look_at_centers_target() {
        let cam = CameraSpec::looking_at(Vec3::new(3.0, 2.0, 4.0), Vec3::new(-1.0, 0.5, 0.0), 0.8, 1.0, 0.1);
        let p = project(&cam, &Vec3::new(-1.0, 0.5, 0.0));
        assert!(p.ndc[0].abs() < 1e-12 && p.ndc[1].abs() < 1e-12);
        assert!(p.depth > 0.0);
        // World up stays up on screen.
        let above = project(&cam, &Vec3::new(-1.0, 0.6, 0.0));
        assert!(above.ndc[1] > 0.0);
        assert!(CameraSpec::default().validate().is_ok());
    }

    #[test]
    fn validation() {
        let mut c = camera();
        c.vertical_fov = std::f64::consts::PI;
        assert!(c.validate().is_err());
        let mut c = camera();
        c.near = 0.0;
        assert!(c.validate().is_err());
        let mut c = camera();
        c.aspect = -1.0;
        assert!(c.validate().is_err());
    }
}
