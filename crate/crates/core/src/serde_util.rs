//! Wire formats for rotations: quaternions as `[w, x, y, z]`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Quat;

fn to_array(q: &Quat) -> [f64; 4] {
    [q.w, q.i, q.j, q.k]
}

fn from_array<E: serde::de::Error>([w, x, y, z]: [f64; 4]) -> Result<Quat, E> {
    let q = nalgebra::Quaternion::new(w, x, y, z);
    let norm = q.norm();
    if !(norm.is_finite() && (norm - 1.0).abs() <= 1e-6) {
        return Err(E::custom(format!("quaternion [{w}, {x}, {y}, {z}] is not unit-norm")));
    }
    Ok(Quat::new_normalize(q))
}

pub mod quat_wxyz {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Quat, s: S) -> Result<S::Ok, S::Error> {
        to_array(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Quat, D::Error> {
        from_array(<[f64; 4]>::deserialize(d)?)
    }
}

pub mod quat_wxyz_vec {
    use super::*;

    pub fn serialize<S: Serializer>(qs: &[Quat], s: S) -> Result<S::Ok, S::Error> {
        qs.iter().map(to_array).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Quat>, D::Error> {
        Vec::<[f64; 4]>::deserialize(d)?.into_iter().map(from_array).collect()
    }
}
