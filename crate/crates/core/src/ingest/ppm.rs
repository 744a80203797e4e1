//! Binary PPM (P6) decode/encode and hue/saturation histogram features.

use crate::error::{Error, Result};

/// A decoded 8-bit RGB image.
#[derive(Debug, Clone, PartialEq)]
pub struct Ppm {
    pub width: usize,
    pub height: usize,
    /// Interleaved RGB, `3 * width * height` bytes.
    pub rgb: Vec<u8>,
}

impl Ppm {
    pub fn new(width: usize, height: usize, rgb: Vec<u8>) -> Result<Self> {
        if width * height == 0 {
            return Err(Error::FormatError("zero-pixel image".into()));
        }
        if rgb.len() != 3 * width * height {
            return Err(Error::FormatError(format!(
                "{} bytes for {width}x{height} image",
                rgb.len()
            )));
        }
        Ok(Ppm { width, height, rgb })
    }

    /// Solid-color image, handy in tests.
    pub fn solid(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(3 * width * height);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Ppm::new(width, height, data)
    }
}

/// Parses a binary PPM (magic `P6`, maxval 255). Header comments (`#`) are
/// honored.
pub fn parse_ppm(bytes: &[u8]) -> Result<Ppm> {
    if bytes.len() < 2 || &bytes[0..2] != b"P6" {
        return Err(Error::FormatError("not a binary PPM (P6) image".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        skip_whitespace_and_comments(bytes, &mut pos)?;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(Error::FormatError("malformed PPM header".into()));
        }
        let text = std::str::from_utf8(&bytes[start..pos])
            .map_err(|_| Error::FormatError("malformed PPM header".into()))?;
        *field = text
            .parse()
            .map_err(|_| Error::FormatError("malformed PPM header".into()))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::FormatError(format!("maxval {maxval}, expected 255")));
    }
    if width * height == 0 {
        return Err(Error::FormatError("zero-pixel image".into()));
    }
    // single whitespace byte separates header from payload
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::FormatError("missing header terminator".into()));
    }
    pos += 1;
    let expected = 3 * width * height;
    if bytes.len() - pos != expected {
        return Err(Error::FormatError(format!(
            "payload holds {} bytes, expected {expected}",
            bytes.len() - pos
        )));
    }
    Ppm::new(width, height, bytes[pos..].to_vec())
}

fn skip_whitespace_and_comments(bytes: &[u8], pos: &mut usize) -> Result<()> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            return Ok(());
        }
    }
}

/// Serializes to the binary PPM layout parsed by [`parse_ppm`].
pub fn write_ppm(image: &Ppm) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.rgb);
    out
}

/// Hexcone RGB -> HSV. H in [0, 360), S and V in [0, 1].
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let (rf, gf, bf) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
    let max = rf.max(gf).max(bf);
    let min = rf.min(gf).min(bf);
    let delta = max - min;
    let v = max;
    let s = if max == 0.0 { 0.0 } else { delta / max };
    let mut h = if delta == 0.0 {
        0.0
    } else if max == rf {
        60.0 * ((gf - bf) / delta)
    } else if max == gf {
        60.0 * (2.0 + (bf - rf) / delta)
    } else {
        60.0 * (4.0 + (rf - gf) / delta)
    };
    if h < 0.0 {
        h += 360.0;
    }
    if h >= 360.0 {
        h -= 360.0;
    }
    (h, s, v)
}

/// 2-D hue/saturation histogram flattened hue-major to a `bins_h * bins_s`
/// vector, L1-normalized to sum 1. Bin edges are uniform and right-open;
/// S = 1 falls in the last saturation bin.
pub fn color_histogram(image: &Ppm, bins_h: usize, bins_s: usize) -> Result<Vec<f64>> {
    if bins_h == 0 || bins_s == 0 {
        return Err(Error::InvalidParam("histogram bins must be >= 1".into()));
    }
    let pixels = image.width * image.height;
    if pixels == 0 {
        return Err(Error::FormatError("zero-pixel image".into()));
    }
    let mut hist = vec![0.0; bins_h * bins_s];
    for px in image.rgb.chunks_exact(3) {
        let (h, s, _v) = rgb_to_hsv(px[0], px[1], px[2]);
        let hb = ((h / 360.0 * bins_h as f64) as usize) % bins_h;
        let sb = ((s * bins_s as f64) as usize).min(bins_s - 1);
        hist[hb * bins_s + sb] += 1.0;
    }
    let inv = 1.0 / pixels as f64;
    for v in &mut hist {
        *v *= inv;
    }
    Ok(hist)
}
