//! Minimal binary PGM (P5, maxval 255) reader and writer.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::{GrayImage, SegmentMask};

fn read_token<R: BufRead>(reader: &mut R) -> Result<String> {
    let mut token = String::new();
    loop {
        let mut byte = [0u8; 1];
        if reader.read(&mut byte)? == 0 {
            return Err(Error::contract("unexpected end of PGM header"));
        }
        let c = byte[0] as char;
        if c == '#' {
            // comment runs to end of line
            let mut line = String::new();
            reader.read_line(&mut line)?;
            continue;
        }
        if c.is_whitespace() {
            if token.is_empty() {
                continue;
            }
            return Ok(token);
        }
        token.push(c);
    }
}

/// Decode a binary PGM stream into a grayscale image.
pub fn read_pgm<R: BufRead>(mut reader: R) -> Result<GrayImage> {
    let magic = read_token(&mut reader)?;
    if magic != "P5" {
        return Err(Error::contract(format!("unsupported PGM magic {magic:?}")));
    }
    let parse = |s: String| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::contract(format!("bad PGM header token {s:?}")))
    };
    let width = parse(read_token(&mut reader)?)?;
    let height = parse(read_token(&mut reader)?)?;
    let maxval = parse(read_token(&mut reader)?)?;
    if maxval != 255 {
        return Err(Error::contract(format!("unsupported PGM maxval {maxval}")));
    }
    let mut pixels = vec![0u8; width * height];
    reader.read_exact(&mut pixels)?;
    GrayImage::new(width, height, pixels)
}

/// Encode a grayscale image as binary PGM.
pub fn write_pgm<W: Write>(image: &GrayImage, mut out: W) -> Result<()> {
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
    out.write_all(image.pixels())?;
    Ok(())
}

impl SegmentMask {
    /// Write this mask as PGM with values 0 and 255.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width(), self.height())?;
        let bytes: Vec<u8> = self.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
        out.write_all(&bytes)?;
        Ok(())
    }
}
