//! Dense float image buffer plus PNG import/export.
//!
//! Latents, render targets, and masks all flow through [`ImageBuf`]; PNG is
//! the only on-disk image format.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{c, cu, Scalar};

/// H x W x C row-major float image. Values are nominally in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuf<T> {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> ImageBuf<T> {
    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self { height, width, channels, data: vec![T::zero(); height * width * channels] }
    }

    pub fn filled(height: usize, width: usize, channels: usize, v: T) -> Self {
        Self { height, width, channels, data: vec![v; height * width * channels] }
    }

    pub fn from_fn(height: usize, width: usize, channels: usize, f: impl Fn(usize, usize, usize) -> T) -> Self {
        let mut img = Self::zeros(height, width, channels);
        for y in 0..height {
            for x in 0..width {
                for ch in 0..channels {
                    let v = f(y, x, ch);
                    img.data[(y * width + x) * channels + ch] = v;
                }
            }
        }
        img
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize, ch: usize) -> T {
        self.data[(y * self.width + x) * self.channels + ch]
    }

    #[inline]
    pub fn at_mut(&mut self, y: usize, x: usize, ch: usize) -> &mut T {
        &mut self.data[(y * self.width + x) * self.channels + ch]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.height == other.height && self.width == other.width && self.channels == other.channels
    }

    pub fn require_same_shape(&self, other: &Self, context: &str) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(format!(
                "{context}: {}x{}x{} vs {}x{}x{}",
                self.height, self.width, self.channels, other.height, other.width, other.channels
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            height: self.height,
            width: self.width,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Mean squared error over all entries.
    pub fn mse(&self, other: &Self) -> T {
        let n = cu::<T>(self.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            / n
    }

    /// PSNR in dB for images in [0, 1]; capped at 100 dB for exact matches.
    pub fn psnr(&self, other: &Self) -> T {
        let mse = self.mse(other);
        if mse < c(1e-10) {
            return c(100.0);
        }
        c::<T>(10.0) * (T::one() / mse).log10()
    }

    /// 2x average-pool downsample; odd trailing rows/columns are dropped.
    pub fn downsample2(&self) -> Self {
        let h = self.height / 2;
        let w = self.width / 2;
        let quarter = c::<T>(0.25);
        Self::from_fn(h, w, self.channels, |y, x, ch| {
            (self.at(2 * y, 2 * x, ch)
                + self.at(2 * y, 2 * x + 1, ch)
                + self.at(2 * y + 1, 2 * x, ch)
                + self.at(2 * y + 1, 2 * x + 1, ch))
                * quarter
        })
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let to_u8 = |v: T| -> u8 {
            let v = v.max(T::zero()).min(T::one());
            (v * c(255.0)).round().to_u8().unwrap_or(0)
        };
        match self.channels {
            1 => {
                let buf: Vec<u8> = self.data.iter().map(|&v| to_u8(v)).collect();
                let img = image::GrayImage::from_raw(self.width as u32, self.height as u32, buf)
                    .ok_or_else(|| Error::Image("gray buffer size mismatch".into()))?;
                img.save(path).map_err(|e| Error::Image(e.to_string()))
            }
            3 => {
                let buf: Vec<u8> = self.data.iter().map(|&v| to_u8(v)).collect();
                let img = image::RgbImage::from_raw(self.width as u32, self.height as u32, buf)
                    .ok_or_else(|| Error::Image("rgb buffer size mismatch".into()))?;
                img.save(path).map_err(|e| Error::Image(e.to_string()))
            }
            n => Err(Error::Image(format!("cannot save {n}-channel image as PNG"))),
        }
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| Error::Image(format!("{}: {e}", path.display())))?;
        let rgb = img.to_rgb8();
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let scale = c::<T>(1.0 / 255.0);
        let data = rgb.as_raw().iter().map(|&b| cu::<T>(b as usize) * scale).collect();
        Ok(Self { height: h, width: w, channels: 3, data })
    }

    /// Load an 8-bit grayscale PNG as a single-channel image in [0, 1].
    pub fn load_png_gray(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| Error::Image(format!("{}: {e}", path.display())))?;
        let gray = img.to_luma8();
        let (w, h) = (gray.width() as usize, gray.height() as usize);
        let scale = c::<T>(1.0 / 255.0);
        let data = gray.as_raw().iter().map(|&b| cu::<T>(b as usize) * scale).collect();
        Ok(Self { height: h, width: w, channels: 1, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psnr_of_identical_images_is_capped() {
        let a = ImageBuf::<f32>::filled(4, 4, 3, 0.5);
        assert_eq!(a.psnr(&a), 100.0);
    }

    #[test]
    fn png_roundtrip_quantized() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.png");
        let img = ImageBuf::<f32>::from_fn(5, 7, 3, |y, x, c| {
            ((y * 31 + x * 7 + c * 3) % 256) as f32 / 255.0
        });
        img.save_png(&path).unwrap();
        let back = ImageBuf::<f32>::load_png(&path).unwrap();
        assert_eq!(back.height, 5);
        assert_eq!(back.width, 7);
        for (a, b) in img.data.iter().zip(&back.data) {
            assert!((a - b).abs() < 0.5 / 255.0 + 1e-6);
        }
    }

    #[test]
    fn downsample2_averages_quads() {
        let img = ImageBuf::<f64>::from_fn(4, 4, 1, |y, x, _| (y * 4 + x) as f64);
        let d = img.downsample2();
        assert_eq!(d.height, 2);
        assert_eq!(d.at(0, 0, 0), (0.0 + 1.0 + 4.0 + 5.0) / 4.0);
    }
}
