//! Binary codeword frames: `[nu: u32 LE][symbols: u32 LE][row-major symbols]`,
//! each symbol little-endian in `BITS / 8` bytes.

use crate::coding::codec::Codeword;
use crate::coding::field::Field;
use crate::error::{Error, Result};

const HEADER: usize = 8;

pub fn write_frame<F: Field>(codeword: &Codeword<F>) -> Vec<u8> {
    let width = (F::BITS / 8) as usize;
    let mut out = Vec::with_capacity(HEADER + codeword.data().len() * width);
    out.extend_from_slice(&(codeword.nu() as u32).to_le_bytes());
    out.extend_from_slice(&(codeword.symbols() as u32).to_le_bytes());
    for s in codeword.data() {
        out.extend_from_slice(&s.to_bits().to_le_bytes()[..width]);
    }
    out
}

pub fn parse_frame<F: Field>(bytes: &[u8]) -> Result<Codeword<F>> {
    let bad = |msg: String| Error::malformed("codeword frame", msg);
    if bytes.len() < HEADER {
        return Err(bad(format!("{} bytes, header needs {HEADER}", bytes.len())));
    }
    let nu = u32::from_le_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
    let symbols = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
    let width = (F::BITS / 8) as usize;
    let body = &bytes[HEADER..];
    let expected = nu
        .checked_mul(symbols)
        .and_then(|x| x.checked_mul(width))
        .ok_or_else(|| bad(format!("{nu} x {symbols} symbols overflows")))?;
    if body.len() != expected {
        return Err(bad(format!(
            "header promises {nu} x {symbols} symbols ({expected} bytes), body has {}",
            body.len()
        )));
    }
    let data = body
        .chunks_exact(width)
        .map(|chunk| {
            let mut word = [0u8; 4];
            word[..width].copy_from_slice(chunk);
            F::from_bits(u32::from_le_bytes(word))
        })
        .collect();
    Ok(Codeword::from_flat(nu, symbols, data))
}
