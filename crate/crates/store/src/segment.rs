use std::fs::{self, File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::error::{Result, StoreError};

const HEADER_MAGIC: &[u8; 8] = b"ODKSEG01";
const FOOTER_MAGIC: &[u8; 8] = b"ODKFOOT1";
const TRAILER_MAGIC: &[u8; 8] = b"ODKTRLR1";
/// footer offset (u64) + footer length (u64) + crc32 of the footer (u32) + magic
const TRAILER_LEN: u64 = 8 + 8 + 4 + 8;
const ENTRY_LEN: usize = 32;

/// Rows per block; narrow queries read at most two blocks they do not fully use.
pub(crate) const BLOCK_ROWS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct BlockEntry {
    offset: u64,
    n_rows: u64,
    first_ts: i64,
    last_ts: i64,
}

/// Bookkeeping returned alongside query results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub blocks_read: usize,
    pub rows_returned: usize,
}

/// Committed state of one segment file.
#[derive(Debug)]
pub(crate) struct Segment {
    path: PathBuf,
    schema: Vec<String>,
    blocks: Vec<BlockEntry>,
    committed_len: u64,
}

impl Segment {
    /// Writes a fresh segment holding only the header and an empty commit.
    /// The file appears atomically via rename; an existing table is an error.
    pub(crate) fn create(path: &Path, schema: &[String]) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(HEADER_MAGIC);
        buf.extend_from_slice(&(schema.len() as u32).to_le_bytes());
        for name in schema {
            buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
            buf.extend_from_slice(name.as_bytes());
        }
        let footer_offset = buf.len() as u64;
        push_commit(&mut buf, footer_offset, &[]);

        let tmp = path.with_extension("seg.tmp");
        {
            let mut f = File::create(&tmp).map_err(StoreError::io(&tmp))?;
            f.write_all(&buf).map_err(StoreError::io(&tmp))?;
            f.sync_all().map_err(StoreError::io(&tmp))?;
        }
        if path.exists() {
            let _ = fs::remove_file(&tmp);
            return Err(StoreError::Corrupt { path: path.to_path_buf(), message: "table already exists".into() });
        }
        fs::rename(&tmp, path).map_err(StoreError::io(path))
    }

    pub(crate) fn open(path: &Path) -> Result<Segment> {
        let mut file = File::open(path).map_err(StoreError::io(path))?;
        Self::read_state(path, &mut file)
    }

    fn read_state(path: &Path, file: &mut File) -> Result<Segment> {
        let corrupt = |message: &str| StoreError::Corrupt { path: path.to_path_buf(), message: message.to_string() };
        let len = file.seek(SeekFrom::End(0)).map_err(StoreError::io(path))?;
        file.seek(SeekFrom::Start(0)).map_err(StoreError::io(path))?;

        let mut magic = [0u8; 8];
        file.read_exact(&mut magic).map_err(|_| corrupt("truncated header"))?;
        if &magic != HEADER_MAGIC {
            return Err(corrupt("bad header magic"));
        }
        let n_cols = read_u32(file).map_err(|_| corrupt("truncated header"))? as usize;
        let mut schema = Vec::with_capacity(n_cols);
        for _ in 0..n_cols {
            let n = read_u32(file).map_err(|_| corrupt("truncated header"))? as usize;
            let mut name = vec![0u8; n];
            file.read_exact(&mut name).map_err(|_| corrupt("truncated header"))?;
            schema.push(String::from_utf8(name).map_err(|_| corrupt("column name is not UTF-8"))?);
        }
        let header_len = file.stream_position().map_err(StoreError::io(path))?;

        let (footer, committed_len) = match read_commit_at(file, len, header_len) {
            Some(found) => found,
            None => recover_commit(file, header_len).ok_or_else(|| corrupt("no valid commit trailer"))?,
        };
        Ok(Segment { path: path.to_path_buf(), schema, blocks: decode_footer(&footer), committed_len })
    }

    pub(crate) fn schema(&self) -> &[String] {
        &self.schema
    }

    pub(crate) fn last_timestamp(&self) -> Option<i64> {
        self.blocks.last().map(|b| b.last_ts)
    }

    pub(crate) fn n_rows(&self) -> u64 {
        self.blocks.iter().map(|b| b.n_rows).sum()
    }

    fn row_bytes(&self) -> usize {
        8 * (1 + self.schema.len())
    }

    /// Appends rows as one commit. Caller guarantees shape; timestamps are
    /// checked against the committed tail under an exclusive file lock.
    pub(crate) fn append(path: &Path, timestamps: &[i64], values: &[f64]) -> Result<usize> {
        let mut file = OpenOptions::new().read(true).write(true).open(path).map_err(StoreError::io(path))?;
        file.lock().map_err(StoreError::io(path))?;
        let state = Self::read_state(path, &mut file)?;
        let d = state.schema.len();
        debug_assert_eq!(values.len(), timestamps.len() * d);
        if timestamps.is_empty() {
            return Ok(0);
        }
        if let Some(last) = state.last_timestamp() {
            if timestamps[0] <= last {
                return Err(StoreError::NonMonotone { line: 2, prev: last, next: timestamps[0] });
            }
        }

        let mut blocks = state.blocks.clone();
        let mut buf = Vec::with_capacity(timestamps.len() * state.row_bytes() + 64);
        let mut offset = state.committed_len;
        for (chunk_idx, ts_chunk) in timestamps.chunks(BLOCK_ROWS).enumerate() {
            let base = chunk_idx * BLOCK_ROWS;
            for (i, &t) in ts_chunk.iter().enumerate() {
                buf.extend_from_slice(&t.to_le_bytes());
                for v in &values[(base + i) * d..(base + i + 1) * d] {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
            blocks.push(BlockEntry {
                offset,
                n_rows: ts_chunk.len() as u64,
                first_ts: ts_chunk[0],
                last_ts: *ts_chunk.last().expect("chunks are non-empty"),
            });
            offset += (ts_chunk.len() * state.row_bytes()) as u64;
        }
        push_commit(&mut buf, offset, &blocks);

        // drop any torn tail left by an interrupted writer before appending
        file.set_len(state.committed_len).map_err(StoreError::io(path))?;
        file.seek(SeekFrom::Start(state.committed_len)).map_err(StoreError::io(path))?;
        file.write_all(&buf).map_err(StoreError::io(path))?;
        file.sync_data().map_err(StoreError::io(path))?;
        Ok(timestamps.len())
    }

    /// Rows with `start <= t < end`, located by binary search over block bounds.
    pub(crate) fn query(&self, start: i64, end: i64) -> Result<(Vec<i64>, Vec<f64>, QueryStats)> {
        let mut stats = QueryStats::default();
        let mut timestamps = Vec::new();
        let mut values = Vec::new();
        let first = self.blocks.partition_point(|b| b.last_ts < start);
        let d = self.schema.len();
        let mut file = None;
        for block in self.blocks[first..].iter().take_while(|b| b.first_ts < end) {
            let file = match &mut file {
                Some(f) => f,
                None => file.insert(File::open(&self.path).map_err(StoreError::io(&self.path))?),
            };
            let mut raw = vec![0u8; block.n_rows as usize * self.row_bytes()];
            file.seek(SeekFrom::Start(block.offset)).map_err(StoreError::io(&self.path))?;
            file.read_exact(&mut raw).map_err(StoreError::io(&self.path))?;
            stats.blocks_read += 1;

            let rows: Vec<&[u8]> = raw.chunks_exact(self.row_bytes()).collect();
            let ts_of = |r: &[u8]| i64::from_le_bytes(r[..8].try_into().expect("8 bytes"));
            let lo = rows.partition_point(|r| ts_of(r) < start);
            let hi = rows.partition_point(|r| ts_of(r) < end);
            for r in &rows[lo..hi] {
                timestamps.push(ts_of(r));
                values.extend(r[8..].chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes"))));
            }
        }
        debug_assert_eq!(values.len(), timestamps.len() * d);
        stats.rows_returned = timestamps.len();
        Ok((timestamps, values, stats))
    }
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Appends a footer for `blocks` followed by its trailer. `footer_offset` is
/// where the footer will land in the file.
fn push_commit(buf: &mut Vec<u8>, footer_offset: u64, blocks: &[BlockEntry]) {
    let start = buf.len();
    buf.extend_from_slice(FOOTER_MAGIC);
    buf.extend_from_slice(&(blocks.len() as u64).to_le_bytes());
    for b in blocks {
        buf.extend_from_slice(&b.offset.to_le_bytes());
        buf.extend_from_slice(&b.n_rows.to_le_bytes());
        buf.extend_from_slice(&b.first_ts.to_le_bytes());
        buf.extend_from_slice(&b.last_ts.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf[start..]);
    let footer_len = (buf.len() - start) as u64;
    buf.extend_from_slice(&footer_offset.to_le_bytes());
    buf.extend_from_slice(&footer_len.to_le_bytes());
    buf.extend_from_slice(&crc.to_le_bytes());
    buf.extend_from_slice(TRAILER_MAGIC);
}

fn decode_footer(footer: &[u8]) -> Vec<BlockEntry> {
    let word = |i: usize| footer[i..i + 8].try_into().expect("8 bytes");
    let n_blocks = (footer.len() - 16) / ENTRY_LEN;
    (0..n_blocks)
        .map(|k| {
            let o = 16 + k * ENTRY_LEN;
            BlockEntry {
                offset: u64::from_le_bytes(word(o)),
                n_rows: u64::from_le_bytes(word(o + 8)),
                first_ts: i64::from_le_bytes(word(o + 16)),
                last_ts: i64::from_le_bytes(word(o + 24)),
            }
        })
        .collect()
}

/// Validates the trailer ending at `end`; returns the footer bytes and `end`.
fn read_commit_at(file: &mut File, end: u64, header_len: u64) -> Option<(Vec<u8>, u64)> {
    if end < header_len + TRAILER_LEN {
        return None;
    }
    let mut trailer = [0u8; TRAILER_LEN as usize];
    file.seek(SeekFrom::Start(end - TRAILER_LEN)).ok()?;
    file.read_exact(&mut trailer).ok()?;
    if &trailer[20..] != TRAILER_MAGIC {
        return None;
    }
    let footer_offset = u64::from_le_bytes(trailer[0..8].try_into().ok()?);
    let footer_len = u64::from_le_bytes(trailer[8..16].try_into().ok()?);
    let crc = u32::from_le_bytes(trailer[16..20].try_into().ok()?);
    if footer_offset < header_len || footer_len < 16 || footer_offset.checked_add(footer_len)? != end - TRAILER_LEN {
        return None;
    }
    let mut footer = vec![0u8; footer_len as usize];
    file.seek(SeekFrom::Start(footer_offset)).ok()?;
    file.read_exact(&mut footer).ok()?;
    if &footer[..8] != FOOTER_MAGIC || crc32fast::hash(&footer) != crc {
        return None;
    }
    let n_blocks = u64::from_le_bytes(footer[8..16].try_into().ok()?) as usize;
    if footer.len() != 16 + n_blocks * ENTRY_LEN {
        return None;
    }
    Some((footer, end))
}

/// Walks back from the end of a file with a torn tail to the last valid commit.
fn recover_commit(file: &mut File, header_len: u64) -> Option<(Vec<u8>, u64)> {
    let mut body = Vec::new();
    file.seek(SeekFrom::Start(header_len)).ok()?;
    file.read_to_end(&mut body).ok()?;
    let mut pos = body.len();
    while pos >= TRAILER_MAGIC.len() {
        if &body[pos - TRAILER_MAGIC.len()..pos] == TRAILER_MAGIC {
            if let Some(found) = read_commit_at(file, header_len + pos as u64, header_len) {
                return Some(found);
            }
        }
        pos -= 1;
    }
    None
}
