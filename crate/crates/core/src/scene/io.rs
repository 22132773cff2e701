//! Scene serialization.
//!
//! Binary scene file ("GSPL"): magic bytes `GSPL`, little-endian `u32`
//! version (= 1), `u32` sh_degree, `u64` gaussian count, then per gaussian
//! little-endian `f32` fields in fixed order: mean (3), quaternion wxyz (4),
//! log-scale (3), opacity logit (1), sh coefficients (3*(L+1)^2, laid out
//! `sh[k*3 + channel]`), editable flag (1.0 or 0.0).
//!
//! Cameras are a JSON array of records with intrinsics, a row-major rotation,
//! a translation, an image path, and an optional mask path.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{Mat3, Quat, Vec3};
use crate::scalar::{c, Scalar};
use crate::scene::{Camera, Gaussian3D, GaussianScene};

const MAGIC: &[u8; 4] = b"GSPL";
const VERSION: u32 = 1;

/// Per-gaussian scalar count for a given degree (without the editable flag).
fn scalar_count(sh_degree: usize) -> usize {
    3 + 4 + 3 + 1 + 3 * (sh_degree + 1) * (sh_degree + 1)
}

pub fn save_scene<T: Scalar>(scene: &GaussianScene<T>, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(scene.sh_degree as u32).to_le_bytes())?;
    w.write_all(&(scene.gaussians.len() as u64).to_le_bytes())?;
    let to_f32 = |v: T| v.to_f32().unwrap_or(f32::NAN);
    for g in &scene.gaussians {
        let mut vals: Vec<f32> = Vec::with_capacity(scalar_count(scene.sh_degree) + 1);
        vals.extend(g.mean.to_array().map(to_f32));
        vals.extend(g.rotation.to_array().map(to_f32));
        vals.extend(g.log_scale.to_array().map(to_f32));
        vals.push(to_f32(g.opacity_logit));
        vals.extend(g.sh.iter().map(|&v| to_f32(v)));
        vals.push(if g.editable { 1.0 } else { 0.0 });
        for v in vals {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_scene<T: Scalar>(path: &Path) -> Result<GaussianScene<T>> {
    let file = File::open(path)?;
    let mut r = BufReader::new(file);
    let mut header = [0u8; 4 + 4 + 4 + 8];
    r.read_exact(&mut header)
        .map_err(|_| Error::MalformedHeader("file shorter than header".into()))?;
    if &header[0..4] != MAGIC {
        return Err(Error::MalformedHeader(format!(
            "bad magic {:?}",
            &header[0..4]
        )));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let sh_degree = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    if sh_degree > 3 {
        return Err(Error::MalformedHeader(format!("sh_degree {sh_degree} > 3")));
    }
    let count = u64::from_le_bytes(header[12..20].try_into().unwrap());

    let per_gaussian = scalar_count(sh_degree) + 1;
    let expected = count * per_gaussian as u64 * 4;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if (payload.len() as u64) < expected {
        return Err(Error::TruncatedPayload { expected, got: payload.len() as u64 });
    }

    let n_sh = 3 * (sh_degree + 1) * (sh_degree + 1);
    let mut gaussians = Vec::with_capacity(count as usize);
    let mut offset = 0usize;
    let mut next = || {
        let v = f32::from_le_bytes(payload[offset..offset + 4].try_into().unwrap());
        offset += 4;
        v
    };
    for _ in 0..count {
        let mean = Vec3::new(c::<T>(0.0), c::<T>(0.0), c::<T>(0.0));
        let mut g = Gaussian3D {
            mean,
            rotation: Quat::identity(),
            log_scale: Vec3::zero(),
            opacity_logit: T::zero(),
            sh: vec![T::zero(); n_sh],
            editable: false,
        };
        let f = |v: f32| T::from_f32(v).unwrap();
        g.mean = Vec3::new(f(next()), f(next()), f(next()));
        g.rotation = Quat::new(f(next()), f(next()), f(next()), f(next()));
        g.log_scale = Vec3::new(f(next()), f(next()), f(next()));
        g.opacity_logit = f(next());
        for k in 0..n_sh {
            g.sh[k] = f(next());
        }
        g.editable = next() != 0.0;
        gaussians.push(g);
    }
    GaussianScene::new(gaussians, sh_degree)
}

/// One camera record in the cameras JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CameraRecord {
    pub width: usize,
    pub height: usize,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    /// Row-major world-to-camera rotation.
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<PathBuf>,
}

impl CameraRecord {
    pub fn from_camera<T: Scalar>(cam: &Camera<T>) -> Self {
        let f = |v: T| v.to_f64().unwrap();
        let mut rotation = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                rotation[i * 3 + j] = f(cam.rotation.m[i][j]);
            }
        }
        Self {
            width: cam.width,
            height: cam.height,
            fx: f(cam.fx),
            fy: f(cam.fy),
            cx: f(cam.cx),
            cy: f(cam.cy),
            rotation,
            translation: [f(cam.translation.x), f(cam.translation.y), f(cam.translation.z)],
            image: None,
            mask: None,
        }
    }

    pub fn to_camera<T: Scalar>(&self) -> Result<Camera<T>> {
        let g = |v: f64| c::<T>(v);
        let rotation = Mat3::from_rows(
            [g(self.rotation[0]), g(self.rotation[1]), g(self.rotation[2])],
            [g(self.rotation[3]), g(self.rotation[4]), g(self.rotation[5])],
            [g(self.rotation[6]), g(self.rotation[7]), g(self.rotation[8])],
        );
        Camera::new(
            self.width,
            self.height,
            g(self.fx),
            g(self.fy),
            g(self.cx),
            g(self.cy),
            rotation,
            Vec3::new(g(self.translation[0]), g(self.translation[1]), g(self.translation[2])),
        )
    }
}

pub fn save_cameras(records: &[CameraRecord], path: &Path) -> Result<()> {
    let file = File::create(path)?;
    serde_json::to_writer_pretty(BufWriter::new(file), records)?;
    Ok(())
}

pub fn load_cameras(path: &Path) -> Result<Vec<CameraRecord>> {
    let file = File::open(path)?;
    let records: Vec<CameraRecord> = serde_json::from_reader(BufReader::new(file))?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_scene(n: usize, sh_degree: usize, seed: u64) -> GaussianScene<f32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_sh = 3 * (sh_degree + 1) * (sh_degree + 1);
        let gaussians = (0..n)
            .map(|_| Gaussian3D {
                mean: Vec3::new(rng.gen::<f32>(), rng.gen::<f32>(), rng.gen::<f32>()),
                rotation: Quat::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ),
                log_scale: Vec3::new(
                    rng.gen_range(-3.0..0.0),
                    rng.gen_range(-3.0..0.0),
                    rng.gen_range(-3.0..0.0),
                ),
                opacity_logit: rng.gen_range(-4.0..4.0),
                sh: (0..n_sh).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                editable: rng.gen(),
            })
            .collect();
        GaussianScene::new(gaussians, sh_degree).unwrap()
    }

    #[test]
    fn empty_scene_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.gspl");
        let scene = GaussianScene::<f32>::empty(2);
        save_scene(&scene, &path).unwrap();
        let back = load_scene::<f32>(&path).unwrap();
        assert_eq!(back.sh_degree, 2);
        assert!(back.is_empty());
    }

    #[test]
    fn single_gaussian_roundtrips_all_59_scalars_plus_flag() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.gspl");
        let scene = random_scene(1, 3, 42);
        save_scene(&scene, &path).unwrap();
        let back = load_scene::<f32>(&path).unwrap();
        let (a, b) = (&scene.gaussians[0], &back.gaussians[0]);
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.rotation, b.rotation);
        assert_eq!(a.log_scale, b.log_scale);
        assert_eq!(a.opacity_logit, b.opacity_logit);
        assert_eq!(a.sh, b.sh);
        assert_eq!(a.sh.len(), 48);
        assert_eq!(a.editable, b.editable);
    }

    #[test]
    fn large_random_scene_roundtrips_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.gspl");
        let scene = random_scene(10_000, 1, 7);
        save_scene(&scene, &path).unwrap();
        let back = load_scene::<f32>(&path).unwrap();
        assert_eq!(scene, back);
    }

    #[test]
    fn bad_magic_is_malformed_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.gspl");
        std::fs::write(&path, b"NOPE\x01\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00").unwrap();
        assert!(matches!(load_scene::<f32>(&path), Err(Error::MalformedHeader(_))));
    }

    #[test]
    fn future_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v9.gspl");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"GSPL");
        bytes.extend_from_slice(&9u32.to_le_bytes());
        bytes.extend_from_slice(&0u32.to_le_bytes());
        bytes.extend_from_slice(&0u64.to_le_bytes());
        std::fs::write(&path, bytes).unwrap();
        assert!(matches!(load_scene::<f32>(&path), Err(Error::UnsupportedVersion(9))));
    }

    #[test]
    fn truncated_payload_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trunc.gspl");
        let scene = random_scene(3, 0, 1);
        save_scene(&scene, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(load_scene::<f32>(&path), Err(Error::TruncatedPayload { .. })));
    }

    #[test]
    fn camera_record_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cams.json");
        let cam = Camera::<f64>::look_at(
            64,
            64,
            70.0,
            Vec3::new(1.0, 2.0, -4.0),
            Vec3::zero(),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        let mut rec = CameraRecord::from_camera(&cam);
        rec.image = Some(PathBuf::from("img/0.png"));
        save_cameras(&[rec], &path).unwrap();
        let loaded = load_cameras(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        let back: Camera<f64> = loaded[0].to_camera().unwrap();
        assert_eq!(back.width, 64);
        assert!((back.fx - 70.0).abs() < 1e-12);
        assert_eq!(loaded[0].image.as_deref(), Some(Path::new("img/0.png")));
        assert!(loaded[0].mask.is_none());
    }
}
