//! NPY version 1.0 reader and writer.
//!
//! Layout: the magic string `\x93NUMPY`, the version bytes `1 0`, a
//! little-endian `u16` header length, then an ASCII Python dict literal with
//! the keys `descr`, `fortran_order` and `shape`, padded with spaces and a
//! final `\n` so the data starts on a 64-byte boundary.
//!
//! Only C-order little-endian `f4`/`f8` arrays of rank 1 or 2 are accepted;
//! everything written is `<f4`.

use std::io::Write;
use std::path::Path;

use crate::{Error, Matrix, Result, ScoreVector};

pub const MAGIC: &[u8; 6] = b"\x93NUMPY";
const PREAMBLE: usize = MAGIC.len() + 2 + 2;
const ALIGN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dtype {
    F4,
    F8,
}

impl Dtype {
    fn size(self) -> usize {
        match self {
            Dtype::F4 => 4,
            Dtype::F8 => 8,
        }
    }
}

/// Decoded array: shape plus row-major values widened to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct NpyArray {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// Header bytes (preamble included) for a `<f4` C-order array of `shape`.
pub fn header(shape: &[usize]) -> Vec<u8> {
    let shape_repr = match shape {
        [n] => format!("({n},)"),
        dims => format!(
            "({})",
            dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
        ),
    };
    let dict = format!("{{'descr': '<f4', 'fortran_order': False, 'shape': {shape_repr}, }}");
    let unpadded = PREAMBLE + dict.len() + 1;
    let pad = (ALIGN - unpadded % ALIGN) % ALIGN;
    let hlen = dict.len() + pad + 1;

    let mut out = Vec::with_capacity(PREAMBLE + hlen);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(hlen as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', pad));
    out.push(b'\n');
    out
}

/// Encodes `data` as a `<f4` array. Values are rounded to `f32`.
pub fn encode(shape: &[usize], data: &[f64]) -> Result<Vec<u8>> {
    let count = element_count(shape)?;
    if count != data.len() {
        return Err(Error::Shape {
            what: "npy element count",
            expected: count,
            found: data.len(),
        });
    }
    let mut out = header(shape);
    out.reserve(data.len() * 4);
    for &x in data {
        out.extend_from_slice(&(x as f32).to_le_bytes());
    }
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<NpyArray> {
    if bytes.len() < PREAMBLE {
        return Err(Error::Header("file shorter than the npy preamble".into()));
    }
    if &bytes[..6] != MAGIC {
        return Err(Error::Header("missing \\x93NUMPY magic".into()));
    }
    if bytes[6..8] != [1, 0] {
        return Err(Error::Header(format!(
            "unsupported npy version {}.{}",
            bytes[6], bytes[7]
        )));
    }
    let hlen = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
    let end = PREAMBLE + hlen;
    if bytes.len() < end {
        return Err(Error::Header("truncated header".into()));
    }
    let text = std::str::from_utf8(&bytes[PREAMBLE..end])
        .ok()
        .filter(|s| s.is_ascii())
        .ok_or_else(|| Error::Header("header is not ASCII".into()))?;
    let dict = parse_dict(text)?;

    let count = element_count(&dict.shape)?;
    let expected = count
        .checked_mul(dict.dtype.size())
        .ok_or_else(|| Error::Overflow(dict.shape.clone()))?;
    let payload = &bytes[end..];
    if payload.len() != expected {
        return Err(Error::Payload {
            expected,
            found: payload.len(),
        });
    }
    let data = match dict.dtype {
        Dtype::F4 => payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect(),
        Dtype::F8 => payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect(),
    };
    Ok(NpyArray {
        shape: dict.shape,
        data,
    })
}

fn element_count(shape: &[usize]) -> Result<usize> {
    shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&n| n <= isize::MAX as usize / 8)
        .ok_or_else(|| Error::Overflow(shape.to_vec()))
}

struct HeaderDict {
    dtype: Dtype,
    shape: Vec<usize>,
}

fn parse_dict(text: &str) -> Result<HeaderDict> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::Header("header must end with a newline".into()))?
        .trim_end_matches(' ');
    let mut p = Parser {
        s: body.as_bytes(),
        pos: 0,
    };
    let mut descr = None;
    let mut fortran = None;
    let mut shape = None;

    p.skip_ws();
    p.expect(b'{')?;
    loop {
        p.skip_ws();
        if p.eat(b'}') {
            break;
        }
        let key = p.string()?;
        p.skip_ws();
        p.expect(b':')?;
        p.skip_ws();
        match key.as_str() {
            "descr" if descr.is_none() => descr = Some(p.string()?),
            "fortran_order" if fortran.is_none() => fortran = Some(p.boolean()?),
            "shape" if shape.is_none() => shape = Some(p.tuple()?),
            other => return Err(Error::Header(format!("unexpected or repeated key {other:?}"))),
        }
        p.skip_ws();
        if !p.eat(b',') {
            p.skip_ws();
            p.expect(b'}')?;
            break;
        }
    }
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(Error::Header("trailing characters after dict".into()));
    }

    let descr = descr.ok_or_else(|| Error::Header("missing 'descr'".into()))?;
    let fortran = fortran.ok_or_else(|| Error::Header("missing 'fortran_order'".into()))?;
    let shape = shape.ok_or_else(|| Error::Header("missing 'shape'".into()))?;
    let dtype = match descr.as_str() {
        "<f4" => Dtype::F4,
        "<f8" => Dtype::F8,
        _ => return Err(Error::Dtype(descr)),
    };
    if fortran {
        return Err(Error::Header("fortran_order arrays are not supported".into()));
    }
    Ok(HeaderDict { dtype, shape })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Header(format!("expected {:?} at byte {}", c as char, self.pos)))
        }
    }

    fn string(&mut self) -> Result<String> {
        let quote = match self.peek() {
            Some(q @ (b'\'' | b'"')) => q,
            _ => return Err(Error::Header(format!("expected string at byte {}", self.pos))),
        };
        self.pos += 1;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == quote {
                let s = &self.s[start..self.pos];
                self.pos += 1;
                return Ok(String::from_utf8_lossy(s).into_owned());
            }
            if c == b'\\' {
                return Err(Error::Header("escapes are not supported in header strings".into()));
            }
            self.pos += 1;
        }
        Err(Error::Header("unterminated string".into()))
    }

    fn boolean(&mut self) -> Result<bool> {
        for (word, value) in [("True", true), ("False", false)] {
            if self.s[self.pos..].starts_with(word.as_bytes()) {
                self.pos += word.len();
                return Ok(value);
            }
        }
        Err(Error::Header(format!("expected True/False at byte {}", self.pos)))
    }

    fn tuple(&mut self) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut dims = Vec::new();
        loop {
            self.skip_ws();
            if self.eat(b')') {
                // `(n)` without a trailing comma is an int, not a tuple.
                return Ok(dims);
            }
            dims.push(self.integer()?);
            self.skip_ws();
            if !self.eat(b',') {
                self.skip_ws();
                self.expect(b')')?;
                if dims.len() == 1 {
                    return Err(Error::Header("1-tuple shape needs a trailing comma".into()));
                }
                return Ok(dims);
            }
        }
    }

    fn integer(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Header(format!("bad shape dimension at byte {start}")))
    }
}

pub fn read_file(path: &Path) -> Result<NpyArray> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// Loads a 2-d `(rows, cols)` array. Zero rows are allowed here; the
/// [`crate::TokenMatrix`] conversion is what rejects them.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let arr = read_file(path.as_ref())?;
    match arr.shape[..] {
        [rows, cols] => Matrix::new(rows, cols, arr.data),
        _ => Err(Error::Rank {
            expected: 2,
            found: arr.shape,
        }),
    }
}

/// Loads a 1-d `(T,)` score array.
pub fn load_scores(path: impl AsRef<Path>) -> Result<ScoreVector> {
    let arr = read_file(path.as_ref())?;
    match arr.shape[..] {
        [_] => ScoreVector::new(arr.data),
        _ => Err(Error::Rank {
            expected: 1,
            found: arr.shape,
        }),
    }
}

pub fn save_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    write_file(path.as_ref(), &[m.rows(), m.cols()], m.data())
}

pub fn save_scores(path: impl AsRef<Path>, s: &ScoreVector) -> Result<()> {
    write_file(path.as_ref(), &[s.len()], s.as_slice())
}

fn write_file(path: &Path, shape: &[usize], data: &[f64]) -> Result<()> {
    let bytes = encode(shape, data)?;
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}
