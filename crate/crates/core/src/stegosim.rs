//! Cover synthesis, LSB-matching embedding and corpus generation.
//!
//! Covers are low-pass-filtered Gaussian noise over smooth gradients with a
//! little unfiltered grain, quantized to 8 bits: locally correlated like a
//! natural photo but fully seeded. Embedding is LSB matching: where a chosen
//! pixel's LSB disagrees with the message bit, the pixel moves by +-1 with
//! equal probability. Images travel as binary PPM (P6, maxval 255).

use std::fs;
use std::path::Path;

use crate::colorspace::ImageRGB;
use crate::error::{Error, Result};
use crate::exec;
use crate::fmt::f64_17;
use crate::rng::{self, purpose, RngStream};

/// Payload in message bits per channel pixel, plus the embedding seed.
#[derive(Debug, Clone, Copy)]
pub struct PayloadConfig {
    pub bpc: f64,
    pub seed: u64,
}

impl PayloadConfig {
    pub fn new(bpc: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bpc) {
            return Err(Error::InvalidParameter(format!("bpc must be in [0, 1], got {bpc}")));
        }
        Ok(PayloadConfig { bpc, seed })
    }
}

/// Parse a binary PPM (P6) stream with maxval 255. Header tokens may be
/// separated by any whitespace and `#` comments.
pub fn read_ppm(bytes: &[u8]) -> Result<ImageRGB> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(Error::PpmMagic);
    }
    let mut pos = 2;
    let mut fields = [0u32; 3]; // width, height, maxval
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(Error::PpmHeader("unexpected end of header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::PpmHeader(format!("expected integer at byte {pos}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("digits are ascii");
        *field = text
            .parse()
            .map_err(|_| Error::PpmHeader(format!("integer '{text}' out of range")))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::PpmMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(Error::PpmHeader(format!("zero dimension {width}x{height}")));
    }
    // exactly one whitespace byte separates the header from pixel data
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::PpmHeader("missing separator before pixel data".into())),
    }
    let expected = width as usize * height as usize * 3;
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(Error::PpmTruncated { expected, found: data.len() });
    }
    ImageRGB::new(width as usize, height as usize, data[..expected].to_vec())
}

/// Serialize as exactly `P6\n<w> <h>\n255\n` followed by raw RGB bytes.
pub fn write_ppm(image: &ImageRGB) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

/// Embed a random message by LSB matching. Per channel,
/// `ceil(bpc * width * height)` positions come from a seeded permutation;
/// each carries one uniform message bit. The cover is not mutated.
pub fn embed_lsbm(cover: &ImageRGB, payload: &PayloadConfig) -> Result<ImageRGB> {
    PayloadConfig::new(payload.bpc, payload.seed)?;
    let n = cover.width() * cover.height();
    let k = (payload.bpc * n as f64).ceil() as usize;
    let mut stego = cover.clone();
    let pixels = stego.pixels_mut();
    for channel in 0..3 {
        let mut stream = RngStream::from_key(&[payload.seed, purpose::EMBED, channel as u64]);
        let positions = stream.partial_permutation(n, k.min(n));
        for pos in positions {
            let idx = pos * 3 + channel;
            let value = pixels[idx];
            let bit = u8::from(stream.next_f64() < 0.5);
            if value & 1 != bit {
                let up = stream.next_f64() < 0.5;
                pixels[idx] = match value {
                    0 => 1,
                    255 => 254,
                    v if up => v + 1,
                    v => v - 1,
                };
            }
        }
    }
    Ok(stego)
}

// Cover generator shape constants, frozen after calibrating the detector to
// a useful difficulty: payloads must be detectable but not trivially so.
const COVER_NOISE_SIGMA: f64 = 20.0;
const COVER_FINE_SIGMA: f64 = 1.5;
const COVER_GRADIENT_AMP: f64 = 110.0;
const COVER_SINE_AMP: f64 = 30.0;
const COVER_BLUR_RADIUS: usize = 2; // 5x5 box kernel
const COVER_BLUR_PASSES: usize = 2;

/// Separable edge-clamped box blur.
fn box_blur(field: &mut Vec<f64>, width: usize, height: usize, radius: usize, passes: usize) {
    let k = 2 * radius + 1;
    let mut tmp = vec![0.0; field.len()];
    for _ in 0..passes {
        // horizontal
        for y in 0..height {
            for x in 0..width {
                let mut acc = 0.0;
                for d in 0..k {
                    let xi = (x + d).saturating_sub(radius).min(width - 1);
                    acc += field[y * width + xi];
                }
                tmp[y * width + x] = acc / k as f64;
            }
        }
        // vertical
        for y in 0..height {
            for x in 0..width {
                let mut acc = 0.0;
                for d in 0..k {
                    let yi = (y + d).saturating_sub(radius).min(height - 1);
                    acc += tmp[yi * width + x];
                }
                field[y * width + x] = acc / k as f64;
            }
        }
    }
}

/// Synthesize one seeded cover with natural-image-like local correlation.
pub fn synth_cover(width: usize, height: usize, seed: u64) -> Result<ImageRGB> {
    if width < 16 || height < 16 {
        return Err(Error::InvalidParameter(format!(
            "cover must be at least 16x16, got {width}x{height}"
        )));
    }
    let n = width * height;
    let mut pixels = vec![0u8; n * 3];
    for channel in 0..3 {
        let mut stream = RngStream::from_key(&[seed, purpose::COVER, channel as u64]);
        let mean = stream.next_range(90.0, 166.0);
        // gradient slopes bounded away from zero so every channel spreads
        // over a wide value range
        let gx = stream.next_range(0.4, 1.0) * stream.next_sign();
        let gy = stream.next_range(0.4, 1.0) * stream.next_sign();
        let fx = stream.next_range(0.5, 2.0);
        let fy = stream.next_range(0.5, 2.0);
        let phase = stream.next_range(0.0, std::f64::consts::TAU);

        let mut noise: Vec<f64> =
            (0..n).map(|_| stream.next_gaussian() * COVER_NOISE_SIGMA).collect();
        box_blur(&mut noise, width, height, COVER_BLUR_RADIUS, COVER_BLUR_PASSES);

        for y in 0..height {
            for x in 0..width {
                let u = x as f64 / width as f64;
                let v = y as f64 / height as f64;
                let base = mean
                    + COVER_GRADIENT_AMP * (gx * u + gy * v) / 2.0
                    + COVER_SINE_AMP * (std::f64::consts::TAU * (fx * u + fy * v) + phase).sin();
                let grain = stream.next_gaussian() * COVER_FINE_SIGMA;
                let value = (base + noise[y * width + x] + grain).round().clamp(0.0, 255.0);
                pixels[(y * width + x) * 3 + channel] = value as u8;
            }
        }
    }
    ImageRGB::new(width, height, pixels)
}

/// Train/test tag of one corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::ManifestParse(format!("unknown split '{other}'"))),
        }
    }
}

/// One image of the corpus. Cover entries leave `stego_path` empty and carry
/// `bpc = 0`; stego entries reference both their own file and the cover they
/// came from. A cover and all stegos derived from it share a split tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub cover_path: String,
    pub stego_path: String,
    pub bpc: f64,
    pub seed: u64,
    pub split: Split,
}

impl ManifestEntry {
    pub fn is_cover(&self) -> bool {
        self.stego_path.is_empty()
    }

    /// Path of the image this entry describes.
    pub fn image_path(&self) -> &str {
        if self.is_cover() {
            &self.cover_path
        } else {
            &self.stego_path
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cover_path,stego_path,bpc,seed,split\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.cover_path,
                e.stego_path,
                f64_17(e.bpc),
                e.seed,
                e.split.name()
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::ManifestParse("empty manifest".into()))?;
        if header != "cover_path,stego_path,bpc,seed,split" {
            return Err(Error::ManifestParse(format!("unexpected header '{header}'")));
        }
        let mut entries = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::ManifestParse(format!(
                    "line {}: expected 5 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            entries.push(ManifestEntry {
                cover_path: fields[0].to_string(),
                stego_path: fields[1].to_string(),
                bpc: fields[2]
                    .parse()
                    .map_err(|_| Error::ManifestParse(format!("line {}: bad bpc", lineno + 2)))?,
                seed: fields[3]
                    .parse()
                    .map_err(|_| Error::ManifestParse(format!("line {}: bad seed", lineno + 2)))?,
                split: fields[4].parse()?,
            });
        }
        Ok(CorpusManifest { entries })
    }

    /// Distinct positive payloads, ascending.
    pub fn payloads(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for e in &self.entries {
            if e.bpc > 0.0 && !out.contains(&e.bpc) {
                out.push(e.bpc);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Generate `n_pairs` covers plus one stego per (cover, payload), write them
/// as PPM files under `out_dir` and return the manifest with paths relative
/// to `out_dir`. Covers are split 75/25 into train/test; stegos inherit
/// their cover's tag so a pair never straddles the split.
pub fn gen_corpus(
    out_dir: &Path,
    n_pairs: usize,
    width: usize,
    height: usize,
    payloads: &[f64],
    seed: u64,
) -> Result<CorpusManifest> {
    if n_pairs < 8 {
        return Err(Error::InvalidParameter(format!("n_pairs must be at least 8, got {n_pairs}")));
    }
    for &bpc in payloads {
        if !(0.0..=1.0).contains(&bpc) {
            return Err(Error::InvalidParameter(format!("bpc must be in [0, 1], got {bpc}")));
        }
    }
    let cover_dir = out_dir.join("covers");
    let stego_dir = out_dir.join("stegos");
    fs::create_dir_all(&cover_dir).map_err(|e| Error::io(cover_dir.display().to_string(), e))?;
    fs::create_dir_all(&stego_dir).map_err(|e| Error::io(stego_dir.display().to_string(), e))?;

    let covers = exec::par_try_map(n_pairs, |i| {
        synth_cover(width, height, rng::derive_seed(&[seed, purpose::COVER, i as u64]))
    })?;

    // split by cover: seeded shuffle, first ~75% train
    let mut order: Vec<usize> = (0..n_pairs).collect();
    RngStream::from_key(&[seed, purpose::SPLIT]).shuffle(&mut order);
    let n_train = (3 * n_pairs + 2) / 4;
    let mut splits = vec![Split::Test; n_pairs];
    for &i in &order[..n_train] {
        splits[i] = Split::Train;
    }

    let mut entries = Vec::with_capacity(n_pairs * (1 + payloads.len()));
    for (i, cover) in covers.iter().enumerate() {
        let rel = format!("covers/cover_{i:04}.ppm");
        write_file(&out_dir.join(&rel), &write_ppm(cover))?;
        entries.push(ManifestEntry {
            cover_path: rel,
            stego_path: String::new(),
            bpc: 0.0,
            seed: rng::derive_seed(&[seed, purpose::COVER, i as u64]),
            split: splits[i],
        });
    }

    for (pi, &bpc) in payloads.iter().enumerate() {
        let stegos = exec::par_try_map(n_pairs, |i| {
            let embed_seed = rng::derive_seed(&[seed, purpose::EMBED, pi as u64, i as u64]);
            let payload = PayloadConfig::new(bpc, embed_seed)?;
            Ok::<_, Error>((embed_lsbm(&covers[i], &payload)?, embed_seed))
        })?;
        for (i, (stego, embed_seed)) in stegos.iter().enumerate() {
            let rel = format!("stegos/stego_{i:04}_p{pi}.ppm");
            write_file(&out_dir.join(&rel), &write_ppm(stego))?;
            entries.push(ManifestEntry {
                cover_path: format!("covers/cover_{i:04}.ppm"),
                stego_path: rel,
                bpc,
                seed: *embed_seed,
                split: splits[i],
            });
        }
    }

    Ok(CorpusManifest { entries })
}
