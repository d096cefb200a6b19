//! Scene primitives and their closed-solid intersection tests.
//!
//! Every primitive is defined in a unit local frame and placed by
//! translation, rotation and per-axis scale:
//!
//! | kind     | local solid                                              |
//! |----------|----------------------------------------------------------|
//! | cube     | `|x|, |y|, |z| <= 0.5`                                   |
//! | sphere   | `|p| <= 0.5`                                             |
//! | plane    | `y = 0`, `|x|, |z| <= 0.5` (finite quad, no thickness)   |
//! | cylinder | `x^2 + z^2 <= 0.25`, `|y| <= 0.5`                        |
//! | cone     | apex at `y = 0.5`, base radius 0.5 at `y = -0.5`         |

use serde::{Deserialize, Serialize};

use crate::{Error, Quat, Result, Vec3};

/// Slack on every surface so boundary contacts count as collisions.
pub const SURFACE_EPS: f64 = 1e-9;
const HALF: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveKind {
    Cube,
    Sphere,
    Plane,
    Cylinder,
    Cone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub id: String,
    pub kind: PrimitiveKind,
    pub position: Vec3,
    #[serde(with = "crate::serde_util::quat_wxyz")]
    pub rotation: Quat,
    pub scale: Vec3,
}

impl SceneObject {
    pub fn new(id: impl Into<String>, kind: PrimitiveKind, position: Vec3) -> Self {
        Self { id: id.into(), kind, position, rotation: Quat::identity(), scale: Vec3::repeat(1.0) }
    }

    pub fn with_scale(mut self, scale: Vec3) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_rotation(mut self, rotation: Quat) -> Self {
        self.rotation = rotation;
        self
    }

    /// Scale must be strictly positive and the transform finite.
    pub fn validate(&self) -> Result<()> {
        if !self.scale.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(Error::validation(format!("object {}: scale must be strictly positive", self.id)));
        }
        if !self.position.iter().all(|c| c.is_finite()) {
            return Err(Error::validation(format!("object {}: position must be finite", self.id)));
        }
        Ok(())
    }

    /// World-to-local mapping, or `ObjectDegenerate` for a singular transform.
    pub fn local_frame(&self) -> Result<LocalFrame> {
        let q = self.rotation.quaternion();
        let invertible = self.scale.iter().all(|s| s.is_finite() && s.abs() > 1e-12)
            && self.position.iter().all(|c| c.is_finite())
            && q.coords.iter().all(|c| c.is_finite())
            && (q.norm() - 1.0).abs() < 1e-6;
        if !invertible {
            return Err(Error::ObjectDegenerate(self.id.clone()));
        }
        Ok(LocalFrame {
            origin: self.position,
            inverse_rotation: self.rotation.inverse(),
            inverse_scale: self.scale.map(|s| 1.0 / s),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LocalFrame {
    origin: Vec3,
    inverse_rotation: Quat,
    inverse_scale: Vec3,
}

impl LocalFrame {
    pub fn to_local(&self, p: &Vec3) -> Vec3 {
        (self.inverse_rotation * (p - self.origin)).component_mul(&self.inverse_scale)
    }
}

impl PrimitiveKind {
    /// Closed point-in-solid test in the unit local frame.
    pub fn contains_local(self, p: &Vec3) -> bool {
        let lim = HALF + SURFACE_EPS;
        match self {
            PrimitiveKind::Cube => p.iter().all(|c| c.abs() <= lim),
            PrimitiveKind::Sphere => p.norm() <= lim,
            PrimitiveKind::Plane => p.y.abs() <= SURFACE_EPS && p.x.abs() <= lim && p.z.abs() <= lim,
            PrimitiveKind::Cylinder => p.y.abs() <= lim && p.x.hypot(p.z) <= lim,
            PrimitiveKind::Cone => p.y.abs() <= lim && p.x.hypot(p.z) <= HALF * (HALF - p.y) + SURFACE_EPS,
        }
    }

    /// Closed segment-vs-solid test in the unit local frame.
    pub fn segment_hits_local(self, a: &Vec3, b: &Vec3) -> bool {
        let d = b - a;
        match self {
            PrimitiveKind::Cube => slab_range(a, &d, [0, 1, 2]).is_some(),
            PrimitiveKind::Sphere => {
                let t = closest_param(a.dot(&d), d.norm_squared(), 0.0, 1.0);
                (a + d * t).norm() <= HALF + SURFACE_EPS
            }
            PrimitiveKind::Plane => plane_hits(a, b),
            PrimitiveKind::Cylinder => {
                let Some((lo, hi)) = slab_range(a, &d, [1]) else { return false };
                let t = closest_param(a.x * d.x + a.z * d.z, d.x * d.x + d.z * d.z, lo, hi);
                (a.x + t * d.x).hypot(a.z + t * d.z) <= HALF + SURFACE_EPS
            }
            PrimitiveKind::Cone => {
                let Some((lo, hi)) = slab_range(a, &d, [1]) else { return false };
                // f(t) = x^2 + z^2 - (r(y))^2 with r(y) = 0.5 (0.5 - y); inside where f <= 0.
                let s0 = HALF - a.y;
                let qa = d.x * d.x + d.z * d.z - 0.25 * d.y * d.y;
                let qb = 2.0 * (a.x * d.x + a.z * d.z) + 0.5 * s0 * d.y;
                let qc = a.x * a.x + a.z * a.z - 0.25 * s0 * s0;
                let f = |t: f64| (qa * t + qb) * t + qc;
                let mut best = f(lo).min(f(hi));
                if qa > 0.0 {
                    let v = -qb / (2.0 * qa);
                    if v > lo && v < hi {
                        best = best.min(f(v));
                    }
                }
                // Compare radially so the slack matches `contains_local`.
                best <= SURFACE_EPS * (2.0 * HALF + SURFACE_EPS)
            }
        }
    }
}

/// Parameter in `[lo, hi]` minimizing `|a + t d|` over the projected axes,
/// given `a·d` and `|d|^2` on those axes.
fn closest_param(a_dot_d: f64, d_sq: f64, lo: f64, hi: f64) -> f64 {
    if d_sq <= 0.0 {
        lo
    } else {
        (-a_dot_d / d_sq).clamp(lo, hi)
    }
}

/// Parameter range within `[0, 1]` where the segment lies inside the closed
/// slabs `|coord| <= 0.5` of the given axes.
fn slab_range(a: &Vec3, d: &Vec3, axes: impl IntoIterator<Item = usize>) -> Option<(f64, f64)> {
    let lim = HALF + SURFACE_EPS;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for axis in axes {
        let (p, v) = (a[axis], d[axis]);
        if v.abs() < 1e-300 {
            if p.abs() > lim {
                return None;
            }
            continue;
        }
        let (mut t0, mut t1) = ((-lim - p) / v, (lim - p) / v);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        lo = lo.max(t0);
        hi = hi.min(t1);
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

fn plane_hits(a: &Vec3, b: &Vec3) -> bool {
    let in_quad = |p: &Vec3| p.x.abs() <= HALF + SURFACE_EPS && p.z.abs() <= HALF + SURFACE_EPS;
    let (ya, yb) = (a.y, b.y);
    let on_a = ya.abs() <= SURFACE_EPS;
    let on_b = yb.abs() <= SURFACE_EPS;
    if on_a && on_b {
        // Segment lies in the plane: clip against the quad in x and z.
        let d = b - a;
        return slab_range(a, &d, [0, 2]).is_some();
    }
    if (on_a && in_quad(a)) || (on_b && in_quad(b)) {
        return true;
    }
    if ya.signum() == yb.signum() {
        return false;
    }
    let t = ya / (ya - yb);
    in_quad(&(a + (b - a) * t))
}
