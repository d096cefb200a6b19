use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub name: String,
    pub parent: Option<usize>,
    pub rest_offset: Vec3,
}

impl Joint {
    pub fn new(name: impl Into<String>, parent: Option<usize>, rest_offset: Vec3) -> Self {
        Self { name: name.into(), parent, rest_offset }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpAxis {
    X,
    #[default]
    Y,
    Z,
}

impl UpAxis {
    pub fn unit(self) -> nalgebra::Unit<Vec3> {
        match self {
            UpAxis::X => Vec3::x_axis(),
            UpAxis::Y => Vec3::y_axis(),
            UpAxis::Z => Vec3::z_axis(),
        }
    }

    /// Right-handed ground-plane basis `(forward, side)` with `forward × side == up`
    /// cyclically: Y-up uses (+Z, +X), Z-up uses (+X, +Y), X-up uses (+Y, +Z).
    ///
    /// `forward` is also the root's local axis that defines heading.
    pub fn ground_basis(self) -> (Vec3, Vec3) {
        match self {
            UpAxis::Y => (Vec3::z(), Vec3::x()),
            UpAxis::Z => (Vec3::x(), Vec3::y()),
            UpAxis::X => (Vec3::y(), Vec3::z()),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            UpAxis::X => "X",
            UpAxis::Y => "Y",
            UpAxis::Z => "Z",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label.trim() {
            "X" | "x" => Some(UpAxis::X),
            "Y" | "y" => Some(UpAxis::Y),
            "Z" | "z" => Some(UpAxis::Z),
            _ => None,
        }
    }

    /// Component of `v` along the up axis.
    pub fn height(self, v: &Vec3) -> f64 {
        match self {
            UpAxis::X => v.x,
            UpAxis::Y => v.y,
            UpAxis::Z => v.z,
        }
    }
}

/// Joint hierarchy shared by every clip of an animation set.
///
/// Joints are stored in topological order: the root is joint 0 and every
/// parent index is smaller than its child's index.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    joints: Vec<Joint>,
    up_axis: UpAxis,
    chains: BTreeMap<String, Vec<usize>>,
    by_name: HashMap<String, usize>,
}

impl Skeleton {
    pub fn new(
        joints: Vec<Joint>,
        up_axis: UpAxis,
        chains: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::structural("skeleton has no joints"));
        }
        let mut by_name = HashMap::with_capacity(joints.len());
        for (i, joint) in joints.iter().enumerate() {
            match joint.parent {
                None if i != 0 => {
                    return Err(Error::structural(format!(
                        "joint {i} ({}) has no parent; only joint 0 may be the root",
                        joint.name
                    )))
                }
                Some(_) if i == 0 => {
                    return Err(Error::structural("joint 0 must be the root"));
                }
                Some(p) if p >= i => {
                    return Err(Error::structural(format!(
                        "joint {i} ({}) has parent {p}; parents must precede children",
                        joint.name
                    )))
                }
                _ => {}
            }
            if !joint.rest_offset.iter().all(|c| c.is_finite()) {
                return Err(Error::structural(format!("joint {} has a non-finite offset", joint.name)));
            }
            if by_name.insert(joint.name.clone(), i).is_some() {
                return Err(Error::structural(format!("duplicate joint name {}", joint.name)));
            }
        }
        for (chain, members) in &chains {
            if let Some(bad) = members.iter().find(|&&j| j >= joints.len()) {
                return Err(Error::structural(format!(
                    "chain {chain} references joint {bad}, skeleton has {}",
                    joints.len()
                )));
            }
        }
        Ok(Self { joints, up_axis, chains, by_name })
    }

    /// Skeleton with default up axis and no chains.
    pub fn from_joints(joints: Vec<Joint>) -> Result<Self> {
        Self::new(joints, UpAxis::default(), BTreeMap::new())
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn joint(&self, index: usize) -> Option<&Joint> {
        self.joints.get(index)
    }

    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn up_axis(&self) -> UpAxis {
        self.up_axis
    }

    pub fn chains(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.chains
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.joints
            .iter()
            .enumerate()
            .filter(move |(_, j)| j.parent == Some(index))
            .map(|(i, _)| i)
    }

    /// Same joint names, parents (by name) and up axis. Offsets may differ.
    pub fn same_hierarchy(&self, other: &Skeleton) -> bool {
        self.up_axis == other.up_axis
            && self.joints.len() == other.joints.len()
            && self.joints.iter().zip(&other.joints).all(|(a, b)| {
                a.name == b.name
                    && a.parent.map(|p| &self.joints[p].name) == b.parent.map(|p| &other.joints[p].name)
            })
    }

    /// Name of `index`'s parent, if any.
    pub fn parent_name(&self, index: usize) -> Option<&str> {
        self.joints[index].parent.map(|p| self.joints[p].name.as_str())
    }
}
