//! Deterministic corpus of malformed NPY files. Every entry must be
//! rejected by the loader.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAGIC: &[u8] = b"\x93NUMPY";

/// Header built by hand (not by the library) around an arbitrary dict.
pub fn with_dict(dict: &str, version: [u8; 2]) -> Vec<u8> {
    let unpadded = 10 + dict.len() + 1;
    let pad = (64 - unpadded % 64) % 64;
    let mut out = MAGIC.to_vec();
    out.extend_from_slice(&version);
    out.extend_from_slice(&((dict.len() + pad + 1) as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', pad));
    out.push(b'\n');
    out
}

pub fn f4_payload(values: &[f32]) -> Vec<u8> {
    values.iter().flat_map(|x| x.to_le_bytes()).collect()
}

/// A valid `(3, 2)` `<f4` file. Payload values avoid the bytes of `\n`
/// and space.
pub fn valid_file() -> Vec<u8> {
    let mut f = with_dict("{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), }", [1, 0]);
    f.extend(f4_payload(&[1.5, -2.25, 3.0, 0.5, -1.0, 2.0]));
    f
}

const BAD_DICTS: &[&str] = &[
    "{'descr': '<i4', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '>f4', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f2', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '|u1', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<c8', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': 'float32', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': True, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': 0, 'shape': (3, 2), }",
    "{'descr': '<f4', 'shape': (3, 2), }",
    "{'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': False, }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), 'extra': 1, }",
    "{'descr': '<f4', 'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': [3, 2], }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, -2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3.0, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2, 1), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (6), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (2, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, 3), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (99999999999999999999, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), ",
    "'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr: '<f4', 'fortran_order': False, 'shape': (3, 2), }",
    "{\"descr\": \"<f4\", \"fortran_order\": False, \"shape\": (3, 2), }x",
    "{'descr': '<f4' 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': Flase, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), } trailing",
    "{'descr': '<f\\x34', 'fortran_order': False, 'shape': (3, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (3,, 2), }",
    "{'descr': '<f4', 'fortran_order': False, 'shape': (,), }",
    "{}",
    "",
    "[1, 2, 3]",
];

/// At least 1000 malformed files, each with a short label.
pub fn malformed_corpus() -> Vec<(String, Vec<u8>)> {
    let valid = valid_file();
    let header_len = valid.len() - 24;
    let mut out = Vec::new();

    for n in 0..valid.len() {
        out.push((format!("truncated to {n} bytes"), valid[..n].to_vec()));
    }
    let mut longer = valid.clone();
    longer.push(0x3f);
    out.push(("one byte of trailing payload".into(), longer));

    for pos in 0..MAGIC.len() {
        for delta in 1..=10u8 {
            let mut f = valid.clone();
            f[pos] = f[pos].wrapping_add(delta * 23);
            out.push((format!("magic byte {pos} changed"), f));
        }
    }
    for major in 0..=4u8 {
        for minor in 0..=9u8 {
            if (major, minor) != (1, 0) {
                let mut f = valid.clone();
                f[6] = major;
                f[7] = minor;
                out.push((format!("version {major}.{minor}"), f));
            }
        }
    }
    for delta in [-64i32, -32, -8, -2, -1, 1, 2, 8, 16, 24, 64, 1000, 30000] {
        let mut f = valid.clone();
        let hlen = u16::from_le_bytes([f[8], f[9]]) as i32 + delta;
        f[8..10].copy_from_slice(&(hlen as u16).to_le_bytes());
        out.push((format!("header length off by {delta}"), f));
    }
    for (i, dict) in BAD_DICTS.iter().enumerate() {
        for payload_len in [0usize, 5, 6] {
            let mut f = with_dict(dict, [1, 0]);
            f.extend(f4_payload(&vec![1.0; payload_len]));
            out.push((format!("bad dict #{i} with {payload_len} values"), f));
        }
    }
    let mut no_newline = valid.clone();
    no_newline[header_len - 1] = b' ';
    out.push(("header without final newline".into(), no_newline));

    let mut rng = ChaCha8Rng::seed_from_u64(0x6e7079);
    while out.len() < 1000 {
        let mut f = valid.clone();
        let pos = rng.random_range(10..header_len);
        f[pos] = rng.random_range(0x80..=0xff);
        out.push((format!("non-ASCII byte at {pos}"), f));
    }
    out
}

/// Valid headers whose payload carries a non-finite value at `(row, col)`.
pub fn non_finite_corpus() -> Vec<(usize, usize, Vec<u8>)> {
    let mut out = Vec::new();
    for bad in [f32::NAN, f32::INFINITY, f32::NEG_INFINITY] {
        for pos in 0..6 {
            let mut values = [1.5f32, -2.25, 3.0, 0.5, -1.0, 2.0];
            values[pos] = bad;
            let mut f = with_dict("{'descr': '<f4', 'fortran_order': False, 'shape': (3, 2), }", [1, 0]);
            f.extend(f4_payload(&values));
            out.push((pos / 2, pos % 2, f));
        }
    }
    out
}
