//! RGB images and the fixed six-space conversion ensemble.
//!
//! All conversions normalize 8-bit RGB to `[0, 1]` first. Channel ranges:
//! HSV hue in degrees `[0, 360)`, S and V in `[0, 1]`; YCbCr (full-range
//! BT.601) and YUV (BT.601 analog weights, chroma offset by +0.5) in
//! `[0, 1]`; XYZ via the sRGB D65 linearization in `[0, 1.089]`; Lab with L
//! in `[0, 100]` and a, b nominally in `[-128, 127]`.
//!
//! The `rgb_from_*` / `xyz_from_lab` inverses exist for round-trip testing.

use crate::error::{Error, Result};

/// 8-bit three-channel raster, row-major R, G, B triplets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRGB {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageRGB {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height * 3 {
            return Err(Error::InvalidParameter(format!(
                "pixel buffer length {} does not match {width}x{height}x3",
                pixels.len()
            )));
        }
        Ok(ImageRGB { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorSpace {
    Rgb,
    Hsv,
    YCbCr,
    Yuv,
    Xyz,
    Lab,
}

/// The fixed ensemble used by the feature pipeline.
pub const ENSEMBLE: [ColorSpace; 6] = [
    ColorSpace::Rgb,
    ColorSpace::Hsv,
    ColorSpace::YCbCr,
    ColorSpace::Yuv,
    ColorSpace::Xyz,
    ColorSpace::Lab,
];

impl ColorSpace {
    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Rgb => "rgb",
            ColorSpace::Hsv => "hsv",
            ColorSpace::YCbCr => "ycbcr",
            ColorSpace::Yuv => "yuv",
            ColorSpace::Xyz => "xyz",
            ColorSpace::Lab => "lab",
        }
    }
}

impl std::str::FromStr for ColorSpace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rgb" => Ok(ColorSpace::Rgb),
            "hsv" => Ok(ColorSpace::Hsv),
            "ycbcr" => Ok(ColorSpace::YCbCr),
            "yuv" => Ok(ColorSpace::Yuv),
            "xyz" => Ok(ColorSpace::Xyz),
            "lab" => Ok(ColorSpace::Lab),
            other => Err(Error::UnknownColorspace(other.to_string())),
        }
    }
}

/// One converted image: three real-valued planes in row-major order.
#[derive(Debug, Clone)]
pub struct ImagePlanar {
    pub colorspace: ColorSpace,
    pub channels: [Vec<f64>; 3],
    pub width: usize,
    pub height: usize,
}

pub fn rgb_to_hsv(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * (((g - b) / delta).rem_euclid(6.0))
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let s = if max == 0.0 { 0.0 } else { delta / max };
    (h.rem_euclid(360.0), s, max)
}

pub fn rgb_from_hsv(h: f64, s: f64, v: f64) -> (f64, f64, f64) {
    let c = v * s;
    let hp = (h.rem_euclid(360.0)) / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as usize {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    (r1 + m, g1 + m, b1 + m)
}

pub fn rgb_to_ycbcr(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cb = -0.168_736 * r - 0.331_264 * g + 0.5 * b + 0.5;
    let cr = 0.5 * r - 0.418_688 * g - 0.081_312 * b + 0.5;
    (y, cb, cr)
}

pub fn rgb_from_ycbcr(y: f64, cb: f64, cr: f64) -> (f64, f64, f64) {
    let cb = cb - 0.5;
    let cr = cr - 0.5;
    (y + 1.402 * cr, y - 0.344_136 * cb - 0.714_136 * cr, y + 1.772 * cb)
}

pub fn rgb_to_yuv(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let u = -0.147_13 * r - 0.288_86 * g + 0.436 * b + 0.5;
    let v = 0.615 * r - 0.514_99 * g - 0.100_01 * b + 0.5;
    (y, u, v)
}

pub fn rgb_from_yuv(y: f64, u: f64, v: f64) -> (f64, f64, f64) {
    let u = u - 0.5;
    let v = v - 0.5;
    (
        y + 1.139_83 * v,
        y - 0.394_65 * u - 0.580_60 * v,
        y + 2.032_11 * u,
    )
}

fn srgb_linearize(c: f64) -> f64 {
    if c <= 0.040_45 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn srgb_delinearize(c: f64) -> f64 {
    if c <= 0.003_130_8 {
        12.92 * c
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

pub fn rgb_to_xyz(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let rl = srgb_linearize(r);
    let gl = srgb_linearize(g);
    let bl = srgb_linearize(b);
    (
        0.412_456_4 * rl + 0.357_576_1 * gl + 0.180_437_5 * bl,
        0.212_672_9 * rl + 0.715_152_2 * gl + 0.072_175_0 * bl,
        0.019_333_9 * rl + 0.119_192_0 * gl + 0.950_304_1 * bl,
    )
}

pub fn rgb_from_xyz(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let rl = 3.240_454_2 * x - 1.537_138_5 * y - 0.498_531_4 * z;
    let gl = -0.969_266_0 * x + 1.876_010_8 * y + 0.041_556_0 * z;
    let bl = 0.055_643_4 * x - 0.204_025_9 * y + 1.057_225_2 * z;
    (srgb_delinearize(rl), srgb_delinearize(gl), srgb_delinearize(bl))
}

/// D65 reference white.
const WHITE: (f64, f64, f64) = (0.950_47, 1.0, 1.088_83);

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA {
        t * t * t
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

pub fn xyz_to_lab(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let fx = lab_f(x / WHITE.0);
    let fy = lab_f(y / WHITE.1);
    let fz = lab_f(z / WHITE.2);
    (116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

pub fn xyz_from_lab(l: f64, a: f64, b: f64) -> (f64, f64, f64) {
    let fy = (l + 16.0) / 116.0;
    let fx = fy + a / 500.0;
    let fz = fy - b / 200.0;
    (WHITE.0 * lab_f_inv(fx), WHITE.1 * lab_f_inv(fy), WHITE.2 * lab_f_inv(fz))
}

/// Convert an image into one colorspace.
pub fn convert(image: &ImageRGB, target: ColorSpace) -> ImagePlanar {
    let n = image.width * image.height;
    let mut c0 = Vec::with_capacity(n);
    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for px in image.pixels.chunks_exact(3) {
        let r = px[0] as f64 / 255.0;
        let g = px[1] as f64 / 255.0;
        let b = px[2] as f64 / 255.0;
        let (a, b2, c) = match target {
            ColorSpace::Rgb => (r, g, b),
            ColorSpace::Hsv => rgb_to_hsv(r, g, b),
            ColorSpace::YCbCr => rgb_to_ycbcr(r, g, b),
            ColorSpace::Yuv => rgb_to_yuv(r, g, b),
            ColorSpace::Xyz => rgb_to_xyz(r, g, b),
            ColorSpace::Lab => {
                let (x, y, z) = rgb_to_xyz(r, g, b);
                xyz_to_lab(x, y, z)
            }
        };
        c0.push(a);
        c1.push(b2);
        c2.push(c);
    }
    ImagePlanar {
        colorspace: target,
        channels: [c0, c1, c2],
        width: image.width,
        height: image.height,
    }
}

/// Fan one image out to several colorspaces, order preserved. Duplicate
/// targets are rejected.
pub fn convert_all(image: &ImageRGB, targets: &[ColorSpace]) -> Result<Vec<ImagePlanar>> {
    if targets.is_empty() {
        return Err(Error::InvalidParameter("no conversion targets given".into()));
    }
    for (i, t) in targets.iter().enumerate() {
        if targets[..i].contains(t) {
            return Err(Error::DuplicateColorspace(t.name().to_string()));
        }
    }
    Ok(targets.iter().map(|&t| convert(image, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn one_pixel(r: u8, g: u8, b: u8) -> ImageRGB {
        ImageRGB::new(1, 1, vec![r, g, b]).unwrap()
    }

    #[test]
    fn white_maps_to_lab_reference() {
        // the sRGB matrix rows match the D65 white at ~1e-7, not exactly
        let p = convert(&one_pixel(255, 255, 255), ColorSpace::Lab);
        assert!((p.channels[0][0] - 100.0).abs() < 1e-3);
        assert!(p.channels[1][0].abs() < 1e-3);
        assert!(p.channels[2][0].abs() < 1e-3);
    }

    #[test]
    fn pure_red_hsv() {
        let p = convert(&one_pixel(255, 0, 0), ColorSpace::Hsv);
        assert_eq!(p.channels[0][0], 0.0);
        assert_eq!(p.channels[1][0], 1.0);
        assert_eq!(p.channels[2][0], 1.0);
    }

    #[test]
    fn gray_ycbcr_has_centered_chroma() {
        let p = convert(&one_pixel(128, 128, 128), ColorSpace::YCbCr);
        assert!((p.channels[0][0] - 128.0 / 255.0).abs() < 1e-12);
        assert!((p.channels[1][0] - 0.5).abs() < 1e-12);
        assert!((p.channels[2][0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gray_has_zero_saturation_and_neutral_lab() {
        for v in [0u8, 31, 128, 200, 255] {
            let hsv = convert(&one_pixel(v, v, v), ColorSpace::Hsv);
            assert_eq!(hsv.channels[1][0], 0.0);
            let lab = convert(&one_pixel(v, v, v), ColorSpace::Lab);
            assert!(lab.channels[1][0].abs() <= 1e-3, "a = {}", lab.channels[1][0]);
            assert!(lab.channels[2][0].abs() <= 1e-3, "b = {}", lab.channels[2][0]);
        }
    }

    #[test]
    fn convert_all_preserves_order_and_shape() {
        let img = ImageRGB::new(2, 3, vec![10; 2 * 3 * 3]).unwrap();
        let planars = convert_all(&img, &ENSEMBLE).unwrap();
        assert_eq!(planars.len(), 6);
        for (p, want) in planars.iter().zip(ENSEMBLE) {
            assert_eq!(p.colorspace, want);
            assert_eq!(p.width, 2);
            assert_eq!(p.height, 3);
            assert_eq!(p.channels[0].len(), 6);
        }
    }

    #[test]
    fn rgb_target_is_identity_after_normalization() {
        let img = ImageRGB::new(2, 1, vec![0, 51, 255, 102, 153, 204]).unwrap();
        let p = convert(&img, ColorSpace::Rgb);
        assert_eq!(p.channels[0], vec![0.0, 102.0 / 255.0]);
        assert_eq!(p.channels[1], vec![51.0 / 255.0, 153.0 / 255.0]);
        assert_eq!(p.channels[2], vec![1.0, 204.0 / 255.0]);
    }

    #[test]
    fn duplicate_target_rejected() {
        let img = one_pixel(1, 2, 3);
        let err = convert_all(&img, &[ColorSpace::Rgb, ColorSpace::Rgb]);
        assert!(matches!(err, Err(Error::DuplicateColorspace(_))));
    }

    fn random_rgb(rng: &mut RngStream) -> (f64, f64, f64) {
        (rng.next_f64(), rng.next_f64(), rng.next_f64())
    }

    #[test]
    fn hsv_round_trip() {
        let mut rng = RngStream::from_key(&[101]);
        for _ in 0..2_000 {
            let (r, g, b) = random_rgb(&mut rng);
            let (h, s, v) = rgb_to_hsv(r, g, b);
            let (r2, g2, b2) = rgb_from_hsv(h, s, v);
            assert!((r - r2).abs() < 1e-4 && (g - g2).abs() < 1e-4 && (b - b2).abs() < 1e-4);
        }
    }

    #[test]
    fn ycbcr_round_trip() {
        let mut rng = RngStream::from_key(&[102]);
        for _ in 0..2_000 {
            let (r, g, b) = random_rgb(&mut rng);
            let (y, cb, cr) = rgb_to_ycbcr(r, g, b);
            let (r2, g2, b2) = rgb_from_ycbcr(y, cb, cr);
            assert!((r - r2).abs() < 1e-4 && (g - g2).abs() < 1e-4 && (b - b2).abs() < 1e-4);
        }
    }

    #[test]
    fn yuv_round_trip() {
        let mut rng = RngStream::from_key(&[103]);
        for _ in 0..2_000 {
            let (r, g, b) = random_rgb(&mut rng);
            let (y, u, v) = rgb_to_yuv(r, g, b);
            let (r2, g2, b2) = rgb_from_yuv(y, u, v);
            assert!((r - r2).abs() < 1e-3 && (g - g2).abs() < 1e-3 && (b - b2).abs() < 1e-3);
        }
    }

    #[test]
    fn xyz_lab_round_trip() {
        let mut rng = RngStream::from_key(&[104]);
        for _ in 0..2_000 {
            let (r, g, b) = random_rgb(&mut rng);
            let (x, y, z) = rgb_to_xyz(r, g, b);
            let (l, la, lb) = xyz_to_lab(x, y, z);
            let (x2, y2, z2) = xyz_from_lab(l, la, lb);
            let (r2, g2, b2) = rgb_from_xyz(x2, y2, z2);
            assert!((r - r2).abs() < 1e-3 && (g - g2).abs() < 1e-3 && (b - b2).abs() < 1e-3);
        }
    }

    #[test]
    fn xyz_range_bound() {
        let mut rng = RngStream::from_key(&[105]);
        for _ in 0..2_000 {
            let (r, g, b) = random_rgb(&mut rng);
            let (x, y, z) = rgb_to_xyz(r, g, b);
            for v in [x, y, z] {
                assert!((0.0..=1.089).contains(&v), "{v}");
            }
        }
    }
}
