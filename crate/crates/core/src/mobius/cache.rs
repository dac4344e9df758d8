//! On-disk image of a [`MobiusTable`].
//!
//! Layout: `"RQMU"`, version byte `0x01`, `limit` as u64 little-endian, then
//! `ceil(limit / 4)` bytes of 2-bit codes in increasing `n`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::sieve::DEFAULT_SEGMENT;
use super::table::MobiusTable;
use crate::error::{ensure, Error, Result};

pub const MAGIC: &[u8; 4] = b"RQMU";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 4 + 1 + 8;

pub fn write_table<W: Write>(table: &MobiusTable, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&table.limit().to_le_bytes())?;
    w.write_all(table.codes())?;
    w.flush()?;
    Ok(())
}

pub fn encode_table(table: &MobiusTable) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + table.codes().len());
    write_table(table, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// Parses and validates the fixed header, returning the stored limit.
pub fn parse_header(header: &[u8]) -> Result<u64> {
    ensure!(
        header.len() >= HEADER_LEN,
        Integrity,
        "cache header truncated ({} bytes)",
        header.len()
    );
    ensure!(&header[..4] == MAGIC, Integrity, "bad cache magic {:?}", &header[..4]);
    ensure!(
        header[4] == VERSION,
        Integrity,
        "unsupported cache version {:#04x}",
        header[4]
    );
    let limit = u64::from_le_bytes(header[5..13].try_into().unwrap());
    ensure!(limit >= 1, Integrity, "cache declares limit 0");
    Ok(limit)
}

pub fn read_table<R: Read>(mut r: R) -> Result<MobiusTable> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Integrity("cache header truncated".into()),
        _ => Error::Io(e),
    })?;
    let limit = parse_header(&header)?;
    let mut codes = Vec::new();
    r.read_to_end(&mut codes)?;
    MobiusTable::from_untrusted_codes(limit, DEFAULT_SEGMENT, codes)
}

pub fn decode_table(bytes: &[u8]) -> Result<MobiusTable> {
    read_table(bytes)
}

/// Stored limit of a cache file, reading only its header.
pub fn peek_limit(path: &Path) -> Result<u64> {
    let mut f = fs::File::open(path)?;
    let mut header = [0u8; HEADER_LEN];
    f.read_exact(&mut header).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Integrity("cache header truncated".into()),
        _ => Error::Io(e),
    })?;
    parse_header(&header)
}

pub fn save(table: &MobiusTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let f = fs::File::create(&tmp)?;
        write_table(table, std::io::BufWriter::new(f))?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<MobiusTable> {
    let f = fs::File::open(path)?;
    read_table(std::io::BufReader::new(f))
}
