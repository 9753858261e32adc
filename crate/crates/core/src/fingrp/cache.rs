//! On-disk cache of enumerated groups. Layout is described in `docs/cache.md`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{fields_for, FiniteGroup, GroupSpec};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"PINDG1";
pub const FORMAT_VERSION: u16 = 1;

pub fn file_name(spec: &GroupSpec) -> String {
    format!("{}-n{}-q{}.pindg", spec.kind, spec.n, spec.q)
}

pub fn cache_path(dir: &Path, spec: &GroupSpec) -> PathBuf {
    dir.join(file_name(spec))
}

fn header(spec: &GroupSpec, modulus: &[u64]) -> Vec<u8> {
    let mut b = Vec::new();
    b.extend_from_slice(MAGIC);
    b.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    b.push(spec.kind.code());
    b.extend_from_slice(&spec.n.to_le_bytes());
    b.extend_from_slice(&spec.q.to_le_bytes());
    b.extend_from_slice(&(modulus.len() as u32).to_le_bytes());
    for c in modulus {
        b.extend_from_slice(&c.to_le_bytes());
    }
    b
}

pub fn encode(g: &FiniteGroup) -> Vec<u8> {
    let spec = g.spec();
    let mut b = header(spec, &g.field().descriptor().modulus);
    b.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    b.extend_from_slice(&(g.order() as u64).to_le_bytes());
    b.extend_from_slice(&(g.generators().len() as u32).to_le_bytes());
    for &x in g.generators() {
        b.extend_from_slice(&x.to_le_bytes());
    }
    for &x in g.raw_data() {
        b.extend_from_slice(&x.to_le_bytes());
    }
    let crc = crc32fast::hash(&b);
    b.extend_from_slice(&crc.to_le_bytes());
    b
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.0.len() < n {
            return Err(Error::Cache("truncated file".into()));
        }
        let (a, b) = self.0.split_at(n);
        self.0 = b;
        Ok(a)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Decodes a cache file for `spec`. Any mismatch is an error.
pub fn decode(bytes: &[u8], spec: &GroupSpec) -> Result<FiniteGroup> {
    if bytes.len() < 4 {
        return Err(Error::Cache("truncated file".into()));
    }
    let (body, crc) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body).to_le_bytes() != crc {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let (field, _) = fields_for(spec)?;
    let expect = header(spec, &field.descriptor().modulus);
    if !body.starts_with(&expect) {
        return Err(Error::Cache("header does not match the requested group".into()));
    }
    let mut r = Reader(&body[expect.len()..]);
    let dim = r.u32()? as usize;
    if dim != spec.dim() {
        return Err(Error::Cache("dimension mismatch".into()));
    }
    let order = r.u64()? as usize;
    let ngens = r.u32()? as usize;
    let gens = (0..ngens).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let len = order
        .checked_mul(dim * dim)
        .ok_or_else(|| Error::Cache("order overflow".into()))?;
    let data = (0..len).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    if !r.0.is_empty() {
        return Err(Error::Cache("trailing bytes".into()));
    }
    let g = FiniteGroup::from_parts(*spec, data, gens)?;
    if g.order() == 0 || g.element(0) != super::mat::identity(g.tables(), dim).as_slice() {
        return Err(Error::Cache("first element is not the identity".into()));
    }
    Ok(g)
}

/// Loads a cached group, treating a missing or stale file as a miss.
pub fn load(dir: &Path, spec: &GroupSpec) -> Result<Option<FiniteGroup>> {
    match fs::read(cache_path(dir, spec)) {
        Ok(bytes) => Ok(decode(&bytes, spec).ok()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Writes atomically (temporary file in the same directory, then rename).
pub fn store(dir: &Path, g: &FiniteGroup) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, g.spec());
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&encode(g))?;
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(path)
}

/// Builds `spec`, going through the cache when `dir` is given. Returns whether
/// the group came from the cache.
pub fn build_cached(spec: GroupSpec, max_order: u64, dir: Option<&Path>) -> Result<(FiniteGroup, bool)> {
    if let Some(dir) = dir {
        if let Some(g) = load(dir, &spec)? {
            if g.order() as u64 <= max_order {
                return Ok((g, true));
            }
        }
    }
    let g = FiniteGroup::build(spec, max_order)?;
    if let Some(dir) = dir {
        store(dir, &g)?;
    }
    Ok((g, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::GroupType;

    #[test]
    fn round_trip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GroupSpec::new(GroupType::Gu, 1, 3).unwrap();
        let (g, hit) = build_cached(spec, 1000, Some(dir.path())).unwrap();
        assert!(!hit);
        let (h, hit) = build_cached(spec, 1000, Some(dir.path())).unwrap();
        assert!(hit);
        assert_eq!(g.raw_data(), h.raw_data());
        assert_eq!(g.generators(), h.generators());

        // A bumped version byte invalidates the file.
        let path = cache_path(dir.path(), &spec);
        let mut bytes = fs::read(&path).unwrap();
        bytes[6] ^= 0xff;
        fs::write(&path, &bytes).unwrap();
        assert!(load(dir.path(), &spec).unwrap().is_none());
        let (_, hit) = build_cached(spec, 1000, Some(dir.path())).unwrap();
        assert!(!hit);
    }
}
