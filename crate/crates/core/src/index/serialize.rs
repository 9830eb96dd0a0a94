//! Binary index file: `SCSIDX1` magic, then length-prefixed little-endian
//! components (header, code counts, wavelet levels, BP topology).
//! Rank/select and navigation support is rebuilt on load.

use std::io::{Read, Write};

use super::bitvec::BitVector;
use super::topology::SuffixTreeTopology;
use super::wavelet::WaveletTree;
use super::{BwtIndex, CArray, FmIndex};
use crate::error::{Error, Result};

pub const INDEX_MAGIC: &[u8; 7] = b"SCSIDX1";
const MAGIC_STEM: &[u8; 6] = b"SCSIDX";

pub fn write_index<W: Write>(idx: &FmIndex, mut out: W) -> Result<()> {
    out.write_all(INDEX_MAGIC)?;

    let header = words_to_bytes(&[idx.len() as u64, idx.m() as u64, idx.sigma() as u64]);
    write_component(&mut out, &header)?;

    let c = idx.bwt.c_array.as_slice();
    let counts: Vec<u64> = c.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    write_component(&mut out, &words_to_bytes(&counts))?;

    let mut wt = Vec::new();
    let levels = idx.bwt.bwt.levels();
    wt.extend_from_slice(&(levels.len() as u64).to_le_bytes());
    for level in levels {
        append_bitvector(&mut wt, level);
    }
    write_component(&mut out, &wt)?;

    let mut bp = Vec::new();
    append_bitvector(&mut bp, idx.topology.bp());
    write_component(&mut out, &bp)?;
    out.flush()?;
    Ok(())
}

pub fn read_index<R: Read>(mut input: R) -> Result<FmIndex> {
    let mut magic = [0u8; 7];
    input
        .read_exact(&mut magic)
        .map_err(|_| Error::format("index file too short for magic"))?;
    if &magic != INDEX_MAGIC {
        if &magic[..6] == MAGIC_STEM {
            return Err(Error::UnsupportedVersion {
                expected: INDEX_MAGIC[6] as char,
                found: magic[6] as char,
            });
        }
        return Err(Error::format("not an index file (bad magic)"));
    }

    let header = bytes_to_words(&read_component(&mut input)?)?;
    let [n, m, sigma] = header[..] else {
        return Err(Error::format("index header must hold three integers"));
    };
    let (n, m, sigma) = (n as usize, m as usize, sigma as usize);
    if sigma > 255 {
        return Err(Error::format("alphabet larger than 255 symbols"));
    }

    let counts: Vec<usize> = bytes_to_words(&read_component(&mut input)?)?
        .into_iter()
        .map(|c| c as usize)
        .collect();
    if counts.len() != sigma + 1 || counts.iter().sum::<usize>() != n {
        return Err(Error::format("code counts disagree with header"));
    }

    let wt_bytes = read_component(&mut input)?;
    let mut cursor = &wt_bytes[..];
    let n_levels = take_u64(&mut cursor)? as usize;
    let mut levels = Vec::with_capacity(n_levels);
    for _ in 0..n_levels {
        levels.push(take_bitvector(&mut cursor)?);
    }
    let wt = WaveletTree::from_parts(levels, &counts, sigma + 1)
        .ok_or_else(|| Error::format("wavelet levels inconsistent with counts"))?;

    let bp_bytes = read_component(&mut input)?;
    let mut cursor = &bp_bytes[..];
    let bp = take_bitvector(&mut cursor)?;
    if bp.count_ones() * 2 != bp.len() {
        return Err(Error::format("topology is not balanced"));
    }
    let topology = SuffixTreeTopology::from_bp(bp);
    if topology.n_leaves() != n {
        return Err(Error::format("topology leaf count differs from text length"));
    }

    let bwt = BwtIndex {
        bwt: wt,
        c_array: CArray::from_counts(&counts),
        sigma,
    };
    Ok(FmIndex::from_parts(bwt, topology, m))
}

fn write_component<W: Write>(out: &mut W, payload: &[u8]) -> Result<()> {
    out.write_all(&(payload.len() as u64).to_le_bytes())?;
    out.write_all(payload)?;
    Ok(())
}

fn read_component<R: Read>(input: &mut R) -> Result<Vec<u8>> {
    let mut len = [0u8; 8];
    input
        .read_exact(&mut len)
        .map_err(|_| Error::format("truncated component length"))?;
    let len = u64::from_le_bytes(len) as usize;
    let mut buf = Vec::new();
    input.take(len as u64).read_to_end(&mut buf)?;
    if buf.len() != len {
        return Err(Error::format("truncated component payload"));
    }
    Ok(buf)
}

fn append_bitvector(buf: &mut Vec<u8>, bv: &BitVector) {
    buf.extend_from_slice(&(bv.len() as u64).to_le_bytes());
    buf.extend_from_slice(&words_to_bytes(bv.words()));
}

fn take_bitvector(cursor: &mut &[u8]) -> Result<BitVector> {
    let len = take_u64(cursor)? as usize;
    let n_words = len.div_ceil(64);
    let mut words = Vec::with_capacity(n_words);
    for _ in 0..n_words {
        words.push(take_u64(cursor)?);
    }
    Ok(BitVector::from_words(words, len))
}

fn take_u64(cursor: &mut &[u8]) -> Result<u64> {
    if cursor.len() < 8 {
        return Err(Error::format("truncated integer"));
    }
    let (head, rest) = cursor.split_at(8);
    *cursor = rest;
    Ok(u64::from_le_bytes(head.try_into().unwrap()))
}

fn words_to_bytes(words: &[u64]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_le_bytes()).collect()
}

fn bytes_to_words(bytes: &[u8]) -> Result<Vec<u64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::format("component length not a multiple of 8"));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::LexRange;

    #[test]
    fn round_trip_preserves_queries() {
        let idx = FmIndex::from_codes(&[0, 1, 1, 2, 0, 1, 2, 2, 0], 2);
        let mut buf = Vec::new();
        write_index(&idx, &mut buf).unwrap();
        assert_eq!(&buf[..7], INDEX_MAGIC);
        let back = read_index(&buf[..]).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.suffix_link(LexRange::new(5, 6)), LexRange::new(7, 9));
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        let idx = FmIndex::from_codes(&[0, 1, 0], 1);
        let mut buf = Vec::new();
        write_index(&idx, &mut buf).unwrap();
        let mut v2 = buf.clone();
        v2[6] = b'2';
        assert!(matches!(
            read_index(&v2[..]),
            Err(Error::UnsupportedVersion { found: '2', .. })
        ));
        assert!(read_index(&b"NOTANINDEX"[..]).is_err());
        assert!(read_index(&buf[..buf.len() - 3]).is_err());
    }
}
