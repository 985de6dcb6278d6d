//! On-disk cache of enumerated Weyl groups.
//!
//! Layout (little endian): magic `ILWC`, format version `u32`, type letter
//! `u8`, rank `u8`, positive-root count `u16`, element count `u64`, then per
//! element a word length `u8`, the word bytes and one `i16` root image per
//! positive root. A SHA-256 digest of everything before it closes the file.
//! Any mismatch makes the reader report a miss so the caller recomputes.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::weyl::{enumerate_weyl, WeylElement, WeylGroup};
use super::{CartanType, RootSet, RootSystem, SignedRoot};
use crate::error::Result;

pub const CACHE_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"ILWC";
const DIGEST_LEN: usize = 32;

pub fn cache_path(dir: &Path, kind: CartanType) -> PathBuf {
    dir.join(format!("weyl-{kind}-v{CACHE_FORMAT_VERSION}.bin"))
}

pub fn encode(rs: &RootSystem, w: &WeylGroup) -> Vec<u8> {
    let np = rs.num_positive();
    let mut buf = Vec::with_capacity(24 + w.len() * (np * 2 + 16));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_FORMAT_VERSION.to_le_bytes());
    buf.push(rs.kind().letter as u8);
    buf.push(rs.rank() as u8);
    buf.extend_from_slice(&(np as u16).to_le_bytes());
    buf.extend_from_slice(&(w.len() as u64).to_le_bytes());
    for e in w.elements() {
        buf.push(e.word().len() as u8);
        buf.extend_from_slice(e.word());
        for r in e.root_image() {
            buf.extend_from_slice(&r.raw().to_le_bytes());
        }
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest[..]);
    buf
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.bytes.get(self.at..self.at + n)?;
        self.at += n;
        Some(s)
    }
    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|s| s[0])
    }
    fn u16(&mut self) -> Option<u16> {
        self.take(2).map(|s| u16::from_le_bytes([s[0], s[1]]))
    }
    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|s| u32::from_le_bytes(s.try_into().unwrap()))
    }
    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|s| u64::from_le_bytes(s.try_into().unwrap()))
    }
}

/// Decodes a cache image; `None` on any corruption or key mismatch.
pub fn decode(rs: &RootSystem, bytes: &[u8]) -> Option<WeylGroup> {
    if bytes.len() < DIGEST_LEN {
        return None;
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body)[..] != *digest {
        return None;
    }
    let mut r = Reader { bytes: body, at: 0 };
    if r.take(4)? != MAGIC || r.u32()? != CACHE_FORMAT_VERSION {
        return None;
    }
    let np = rs.num_positive();
    if r.u8()? != rs.kind().letter as u8 || r.u8()? as usize != rs.rank() || r.u16()? as usize != np {
        return None;
    }
    let count = r.u64()?;
    if count != rs.kind().weyl_order() {
        return None;
    }
    let mut elements = Vec::with_capacity(count as usize);
    let mut position = HashMap::with_capacity(count as usize);
    for p in 0..count as usize {
        let wl = r.u8()? as usize;
        let word = r.take(wl)?.to_vec();
        if word.iter().any(|&i| i as usize >= rs.rank()) {
            return None;
        }
        let mut image = Vec::with_capacity(np);
        for _ in 0..np {
            let sr = SignedRoot::from_raw(r.u16()? as i16);
            if sr.index() >= np {
                return None;
            }
            image.push(sr);
        }
        let e = WeylElement::from_image(word, image);
        if position.insert(e.inversion_set(), p as u32).is_some() {
            return None;
        }
        elements.push(e);
    }
    if r.at != body.len() || elements.first().map(|e| e.inversion_set()) != Some(RootSet::EMPTY) {
        return None;
    }
    Some(WeylGroup::assemble(rs, elements, position))
}

pub fn write_cache(dir: &Path, rs: &RootSystem, w: &WeylGroup) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, rs.kind());
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode(rs, w))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Reads a cached group; a missing or corrupt file is a miss, not an error.
pub fn read_cache(dir: &Path, rs: &RootSystem) -> Option<WeylGroup> {
    let path = cache_path(dir, rs.kind());
    let bytes = fs::read(&path).ok()?;
    let g = decode(rs, &bytes);
    if g.is_none() {
        log::warn!("ignoring corrupt Weyl cache {}", path.display());
    }
    g
}

/// Cache-backed [`enumerate_weyl`]. Write failures only log a warning.
pub fn load_or_enumerate(rs: &RootSystem, cap: Option<u64>, dir: Option<&Path>) -> Result<WeylGroup> {
    let Some(dir) = dir else {
        return enumerate_weyl(rs, cap);
    };
    let cap_v = cap.unwrap_or(super::DEFAULT_WEYL_CAP);
    let order = rs.kind().weyl_order();
    if order > cap_v {
        return Err(crate::Error::GroupTooLarge { order, cap: cap_v });
    }
    if let Some(g) = read_cache(dir, rs) {
        return Ok(g);
    }
    let g = enumerate_weyl(rs, cap)?;
    if let Err(e) = write_cache(dir, rs, &g) {
        log::warn!("could not write Weyl cache: {e}");
    }
    Ok(g)
}
