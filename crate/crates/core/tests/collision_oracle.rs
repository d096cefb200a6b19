mod common;

use animlens_core::spatial::{path_collisions, JointPath, PrimitiveKind, SceneObject};
use animlens_core::{Quat, Vec3};
use nalgebra::{Matrix4, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 1000;
const KINDS: [PrimitiveKind; 5] =
    [PrimitiveKind::Cube, PrimitiveKind::Sphere, PrimitiveKind::Plane, PrimitiveKind::Cylinder, PrimitiveKind::Cone];

/// World-to-unit-frame matrix built independently of the crate's `LocalFrame`.
fn inverse_model(o: &SceneObject) -> Matrix4<f64> {
    let model = Matrix4::new_translation(&o.position)
        * o.rotation.to_homogeneous()
        * Matrix4::new_nonuniform_scaling(&o.scale);
    model.try_inverse().unwrap()
}

fn inside(kind: PrimitiveKind, p: &Vec3) -> bool {
    match kind {
        PrimitiveKind::Cube => p.x.abs() <= 0.5 && p.y.abs() <= 0.5 && p.z.abs() <= 0.5,
        PrimitiveKind::Sphere => p.x * p.x + p.y * p.y + p.z * p.z <= 0.25,
        PrimitiveKind::Cylinder => p.y.abs() <= 0.5 && p.x * p.x + p.z * p.z <= 0.25,
        PrimitiveKind::Cone => p.y.abs() <= 0.5 && (p.x * p.x + p.z * p.z).sqrt() <= (0.5 - p.y) / 2.0,
        PrimitiveKind::Plane => unreachable!(),
    }
}

/// Frames covered according to dense sampling of the polyline.
fn oracle(points: &[Vec3], object: &SceneObject) -> Vec<bool> {
    let t = points.len();
    let inv = inverse_model(object);
    let local = |s: f64| -> (usize, Vec3) {
        let i = (s.floor() as usize).min(t - 2);
        let w = points[i] + (points[i + 1] - points[i]) * (s - i as f64);
        (i, inv.transform_point(&Point3::from(w)).coords)
    };
    let mut covered = vec![false; t];
    let mut prev: Option<(usize, Vec3)> = None;
    for k in 0..SAMPLES {
        let s = (t - 1) as f64 * k as f64 / (SAMPLES - 1) as f64;
        let (i, p) = local(s);
        let hit = match object.kind {
            PrimitiveKind::Plane => prev.is_some_and(|(_, q)| {
                if q.y.signum() == p.y.signum() && p.y != 0.0 {
                    return false;
                }
                let u = q.y / (q.y - p.y);
                let c = q + (p - q) * u;
                c.x.abs() <= 0.5 && c.z.abs() <= 0.5
            }),
            kind => inside(kind, &p),
        };
        if hit {
            covered[i] = true;
            covered[i + 1] = true;
            if let Some((j, _)) = prev {
                covered[j] = true;
            }
        }
        prev = Some((i, p));
    }
    covered
}

fn coverage(t: usize, events: &[animlens_core::spatial::CollisionEvent]) -> Vec<bool> {
    let mut covered = vec![false; t];
    for e in events {
        for iv in &e.frame_intervals {
            covered[iv.start..iv.end].iter_mut().for_each(|c| *c = true);
        }
    }
    covered
}

/// First and last frame of every covered run.
fn edges(covered: &[bool]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &c) in covered.iter().enumerate() {
        let before = i > 0 && covered[i - 1];
        let after = i + 1 < covered.len() && covered[i + 1];
        if c && (!before || !after) {
            out.push(i);
        }
    }
    out
}

#[test]
fn segment_tests_match_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut cases_with_hits = 0;
    for case in 0..100 {
        let t = rng.random_range(2..30);
        let mut p = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let points: Vec<Vec3> = (0..t)
            .map(|_| {
                p += Vec3::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4));
                p
            })
            .collect();
        let object = SceneObject::new("o", KINDS[case % KINDS.len()], points[rng.random_range(0..t)])
            .with_scale(Vec3::new(rng.random_range(0.5..2.5), rng.random_range(0.5..2.5), rng.random_range(0.5..2.5)))
            .with_rotation(Quat::from_euler_angles(
                rng.random_range(-3.0..3.0),
                rng.random_range(-1.5..1.5),
                rng.random_range(-3.0..3.0),
            ));
        let path = JointPath { clip_id: "c".into(), joint: 0, points: points.clone() };
        let got = coverage(t, &path_collisions(&path, std::slice::from_ref(&object)).unwrap());
        let want = oracle(&points, &object);
        if got.iter().any(|&c| c) {
            cases_with_hits += 1;
        }
        let fences: Vec<usize> = edges(&got).into_iter().chain(edges(&want)).collect();
        for f in (0..t).filter(|&f| got[f] != want[f]) {
            assert!(
                fences.iter().any(|&e| e.abs_diff(f) <= 1),
                "case {case} ({:?}): frame {f} kernel {} oracle {}",
                object.kind,
                got[f],
                want[f]
            );
        }
    }
    assert!(cases_with_hits >= 50, "only {cases_with_hits} cases touched their object");
}
