//! Binary PPM (`P6`) and PGM (`P5`) images with maxval 255.

use std::path::Path;

use crate::error::{Error, Result};

/// Three 8-bit channel planes, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    planes: [Vec<u8>; 3],
}

impl RgbImage {
    pub fn from_planes(width: usize, height: usize, planes: [Vec<u8>; 3]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Input(format!("image must be non-empty, got {width}x{height}")));
        }
        if planes.iter().any(|p| p.len() != width * height) {
            return Err(Error::Input(format!(
                "channel planes must hold {} pixels",
                width * height
            )));
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    /// Builds an image from interleaved `r, g, b` bytes.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[u8]) -> Result<Self> {
        if rgb.len() != 3 * width * height {
            return Err(Error::Input(format!(
                "expected {} interleaved bytes, got {}",
                3 * width * height,
                rgb.len()
            )));
        }
        let plane = |c: usize| rgb.iter().skip(c).step_by(3).copied().collect();
        Self::from_planes(width, height, [plane(0), plane(1), plane(2)])
    }

    /// Replicates one gray plane into all three channels.
    pub fn from_gray(gray: &GrayImage) -> Self {
        let p = gray.pixels().to_vec();
        Self {
            width: gray.width(),
            height: gray.height(),
            planes: [p.clone(), p.clone(), p],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channel(&self, c: usize) -> &[u8] {
        &self.planes[c]
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let k = y * self.width + x;
        [self.planes[0][k], self.planes[1][k], self.planes[2][k]]
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        let n = self.width * self.height;
        let mut out = Vec::with_capacity(3 * n);
        for k in 0..n {
            out.extend([self.planes[0][k], self.planes[1][k], self.planes[2][k]]);
        }
        out
    }
}

/// One 8-bit plane, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::Input(format!(
                "{width}x{height} image cannot hold {} pixels",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
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
}

struct Header {
    width: usize,
    height: usize,
    data_offset: usize,
}

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

/// Parses `magic ws width ws height ws maxval single-ws`. Comments (`#` to end
/// of line) may appear between header fields.
fn parse_header(bytes: &[u8], magic: &str) -> Result<Header> {
    if bytes.len() < 2 {
        return Err(format_err(0, "file too short for a magic number"));
    }
    let found = &bytes[..2];
    if found != magic.as_bytes() {
        if found[0] == b'P' && found[1].is_ascii_digit() {
            return Err(Error::UnsupportedVariant(String::from_utf8_lossy(found).into_owned()));
        }
        return Err(format_err(0, format!("expected magic {magic}")));
    }
    let mut pos = 2;
    let mut field = |name: &str| -> Result<(usize, usize)> {
        let start_ws = pos;
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        if pos == start_ws {
            return Err(format_err(pos, format!("expected whitespace before {name}")));
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(format_err(start, format!("expected {name}")));
        }
        std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(|v| (v, start))
            .ok_or_else(|| format_err(start, format!("{name} out of range")))
    };
    let (width, _) = field("width")?;
    let (height, _) = field("height")?;
    let (maxval, maxval_offset) = field("maxval")?;
    if maxval != 255 {
        return Err(format_err(maxval_offset, format!("maxval must be 255, got {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(format_err(2, "image dimensions must be positive"));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(format_err(pos, "expected a single whitespace byte after maxval")),
    }
    Ok(Header {
        width,
        height,
        data_offset: pos,
    })
}

fn payload<'a>(bytes: &'a [u8], header: &Header, channels: usize) -> Result<&'a [u8]> {
    let need = header.width * header.height * channels;
    let have = bytes.len() - header.data_offset;
    if have < need {
        return Err(format_err(
            bytes.len(),
            format!("truncated pixel data: {need} bytes expected, {have} present"),
        ));
    }
    Ok(&bytes[header.data_offset..header.data_offset + need])
}

pub fn parse_ppm(bytes: &[u8]) -> Result<RgbImage> {
    let header = parse_header(bytes, "P6")?;
    let data = payload(bytes, &header, 3)?;
    RgbImage::from_interleaved(header.width, header.height, data)
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let header = parse_header(bytes, "P5")?;
    let data = payload(bytes, &header, 1)?;
    GrayImage::new(header.width, header.height, data.to_vec())
}

pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.to_interleaved());
    out
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn read_ppm(path: &Path) -> Result<RgbImage> {
    parse_ppm(&std::fs::read(path)?)
}

pub fn write_ppm(img: &RgbImage, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, encode_ppm(img))?)
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    parse_pgm(&std::fs::read(path)?)
}

pub fn write_pgm(img: &GrayImage, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, encode_pgm(img))?)
}
