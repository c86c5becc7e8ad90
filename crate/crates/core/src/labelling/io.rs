//! Binary index format.
//!
//! Little-endian throughout:
//!
//! ```text
//! "TRIX" | u32 version | u32 flags (bit0 = weighted)
//! u64 n | u64 components | u64 root * components
//! u64 len + [u64] parent      (u64::MAX for roots)
//! u64 len + [u64] dfs_order
//! u64 len + [u64] subtree_size
//! u64 len + [u32] depth
//! u64 len + [u64] offsets     (n + 1 prefix sums)
//! u64 len + [f64] values
//! u64 len + [f64] diagonal
//! u64 len + [u64] id_map
//! u32 CRC-32C of every preceding byte
//! ```

use std::io::{Read, Write};

use thiserror::Error;

use super::LabelIndex;
use crate::treedecomp::{dfs_annotate, NO_PARENT};

const MAGIC: &[u8; 4] = b"TRIX";
pub const FORMAT_VERSION: u32 = 1;
const FLAG_WEIGHTED: u32 = 1;

#[derive(Debug, Error)]
pub enum IndexIoError {
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported index version {0}")]
    UnsupportedVersion(u32),
    #[error("index file is truncated")]
    TruncatedFile,
    #[error("index checksum mismatch")]
    ChecksumMismatch,
    #[error("unexpected bytes after index payload")]
    TrailingData,
    #[error("inconsistent index: {0}")]
    Corrupt(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    fn u32(&mut self, x: u32) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    fn array<T: Copy>(&mut self, xs: &[T], put: impl Fn(&mut Self, T)) {
        self.u64(xs.len() as u64);
        for &x in xs {
            put(self, x);
        }
    }
}

struct Decoder<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Decoder<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], IndexIoError> {
        let end = self.pos.checked_add(k).ok_or(IndexIoError::TruncatedFile)?;
        let out = self.bytes.get(self.pos..end).ok_or(IndexIoError::TruncatedFile)?;
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, IndexIoError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, IndexIoError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn array<T>(&mut self, width: usize, get: impl Fn(&[u8]) -> T) -> Result<Vec<T>, IndexIoError> {
        let len = self.u64()?;
        let bytes = usize::try_from(len)
            .ok()
            .and_then(|l| l.checked_mul(width))
            .ok_or(IndexIoError::TruncatedFile)?;
        Ok(self.take(bytes)?.chunks_exact(width).map(get).collect())
    }

    fn u64s(&mut self) -> Result<Vec<u64>, IndexIoError> {
        self.array(8, |b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
}

fn to_usize(xs: Vec<u64>) -> Result<Vec<usize>, IndexIoError> {
    xs.into_iter()
        .map(|x| usize::try_from(x).map_err(|_| IndexIoError::Corrupt("value exceeds address space")))
        .collect()
}

impl LabelIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.hierarchy;
        let n = self.node_count();
        let mut e = Encoder { buf: Vec::with_capacity(64 + 8 * (self.values.len() + 8 * n)) };
        e.buf.extend_from_slice(MAGIC);
        e.u32(FORMAT_VERSION);
        e.u32(if self.weighted { FLAG_WEIGHTED } else { 0 });
        e.u64(n as u64);
        e.u64(h.roots().len() as u64);
        for &r in h.roots() {
            e.u64(r as u64);
        }
        let parent: Vec<u64> = h.parents().iter().map(|&p| if p == NO_PARENT { u64::MAX } else { p as u64 }).collect();
        e.array(&parent, Encoder::u64);
        e.array(h.dfs_orders(), |e, x| e.u64(x as u64));
        e.array(h.subtree_sizes(), |e, x| e.u64(x as u64));
        e.array(h.depths(), Encoder::u32);
        e.array(&self.offsets, |e, x| e.u64(x as u64));
        e.array(&self.values, |e, x| e.u64(x.to_bits()));
        e.array(&self.diagonal, |e, x| e.u64(x.to_bits()));
        e.array(&self.external_ids, Encoder::u64);
        let crc = crc32c::crc32c(&e.buf);
        e.u32(crc);
        e.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexIoError> {
        let mut d = Decoder { bytes, pos: 0 };
        if d.take(4).map_err(|_| IndexIoError::BadMagic)? != MAGIC {
            return Err(IndexIoError::BadMagic);
        }
        let version = d.u32()?;
        if version != FORMAT_VERSION {
            return Err(IndexIoError::UnsupportedVersion(version));
        }
        let flags = d.u32()?;
        let n = d.u64()?;
        let components = d.u64()?;
        let mut roots = Vec::new();
        for _ in 0..components {
            roots.push(d.u64()?);
        }
        let parent = d.u64s()?;
        let dfs_order = d.u64s()?;
        let subtree_size = d.u64s()?;
        let depth = d.array(4, |b| u32::from_le_bytes(b.try_into().expect("4 bytes")))?;
        let offsets = d.u64s()?;
        let f64s = |d: &mut Decoder| d.array(8, |b| f64::from_bits(u64::from_le_bytes(b.try_into().expect("8 bytes"))));
        let values = f64s(&mut d)?;
        let diagonal = f64s(&mut d)?;
        let external_ids = d.u64s()?;
        let payload_end = d.pos;
        let stored = d.u32()?;
        if d.pos != bytes.len() {
            return Err(IndexIoError::TrailingData);
        }
        if crc32c::crc32c(&bytes[..payload_end]) != stored {
            return Err(IndexIoError::ChecksumMismatch);
        }

        let n = usize::try_from(n).map_err(|_| IndexIoError::Corrupt("node count"))?;
        let lengths_ok = [parent.len(), dfs_order.len(), subtree_size.len(), depth.len(), diagonal.len(), external_ids.len()]
            .iter()
            .all(|&l| l == n)
            && offsets.len() == n + 1;
        if !lengths_ok {
            return Err(IndexIoError::Corrupt("array length"));
        }
        let parent: Vec<usize> = parent
            .into_iter()
            .map(|p| if p == u64::MAX { Ok(NO_PARENT) } else { usize::try_from(p).map_err(|_| IndexIoError::Corrupt("parent")) })
            .collect::<Result<_, _>>()?;
        let hierarchy = dfs_annotate(parent).map_err(|_| IndexIoError::Corrupt("parent array"))?;
        let consistent = hierarchy.roots().iter().map(|&r| r as u64).eq(roots.iter().copied())
            && hierarchy.dfs_orders().iter().map(|&x| x as u64).eq(dfs_order.iter().copied())
            && hierarchy.subtree_sizes().iter().map(|&x| x as u64).eq(subtree_size.iter().copied())
            && hierarchy.depths() == depth.as_slice();
        if !consistent {
            return Err(IndexIoError::Corrupt("hierarchy arrays"));
        }
        let offsets = to_usize(offsets)?;
        let offsets_ok = offsets[0] == 0
            && (0..n).all(|v| {
                let expected = if hierarchy.is_root(v) { 0 } else { hierarchy.subtree_size(v) };
                offsets[v + 1].checked_sub(offsets[v]) == Some(expected)
            })
            && offsets[n] == values.len();
        if !offsets_ok {
            return Err(IndexIoError::Corrupt("label offsets"));
        }
        Ok(Self::assemble(hierarchy, offsets, values, diagonal, flags & FLAG_WEIGHTED != 0, external_ids))
    }

    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<(), IndexIoError> {
        sink.write_all(&self.to_bytes())?;
        sink.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut source: R) -> Result<Self, IndexIoError> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn example_bytes() -> Vec<u8> {
        LabelIndex::build(&generators::nine_node_example()).unwrap().to_bytes()
    }

    #[test]
    fn round_trip_is_exact() {
        let idx = LabelIndex::build(&generators::nine_node_example()).unwrap();
        let bytes = idx.to_bytes();
        let back = LabelIndex::from_bytes(&bytes).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn round_trip_forest_and_weights() {
        let g = crate::graph::Graph::from_edges(4, &[(0, 1, 2.5), (2, 3, 1.0)]).unwrap();
        let idx = LabelIndex::build(&g).unwrap();
        let back = LabelIndex::from_bytes(&idx.to_bytes()).unwrap();
        assert!(back.is_weighted());
        assert_eq!(back, idx);
    }

    #[test]
    fn bad_magic() {
        let mut bytes = example_bytes();
        bytes[0] = b'X';
        assert!(matches!(LabelIndex::from_bytes(&bytes), Err(IndexIoError::BadMagic)));
        assert!(matches!(LabelIndex::from_bytes(b"TR"), Err(IndexIoError::BadMagic)));
    }

    #[test]
    fn unsupported_version() {
        let mut bytes = example_bytes();
        bytes[4] = 9;
        assert!(matches!(LabelIndex::from_bytes(&bytes), Err(IndexIoError::UnsupportedVersion(9))));
    }

    #[test]
    fn truncated() {
        let bytes = example_bytes();
        for cut in [10, 40, bytes.len() / 2, bytes.len() - 100, bytes.len() - 2] {
            assert!(matches!(LabelIndex::from_bytes(&bytes[..cut]), Err(IndexIoError::TruncatedFile)), "cut {cut}");
        }
    }

    #[test]
    fn checksum_mismatch() {
        let mut bytes = example_bytes();
        let k = bytes.len() - 20;
        bytes[k] ^= 0x40;
        assert!(matches!(LabelIndex::from_bytes(&bytes), Err(IndexIoError::ChecksumMismatch)));
    }

    #[test]
    fn trailing_data() {
        let mut bytes = example_bytes();
        bytes.push(0);
        assert!(matches!(LabelIndex::from_bytes(&bytes), Err(IndexIoError::TrailingData)));
    }
}
