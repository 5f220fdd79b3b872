use std::fs;
use std::path::{Path, PathBuf};

use odkit_core::TimeSeriesFrame;

use crate::csv_ingest::parse_csv;
use crate::error::{Result, StoreError};
use crate::segment::{QueryStats, Segment};

const CREDENTIALS: &str = "credentials";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionConfig {
    pub data_dir: PathBuf,
    /// Recorded for API compatibility; the store is always local.
    pub host: String,
    pub user: String,
    pub password: String,
}

/// Identifies a table; `schema` is the ordered list of value columns
/// (the `timestamp` column is implicit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableHandle {
    pub database: String,
    pub table: String,
    pub schema: Vec<String>,
}

impl TableHandle {
    pub fn new(database: impl Into<String>, table: impl Into<String>, schema: Vec<String>) -> Self {
        Self { database: database.into(), table: table.into(), schema }
    }
}

/// An open data directory. Cheap to clone; holds no file handles.
#[derive(Debug, Clone)]
pub struct Connection {
    data_dir: PathBuf,
    host: String,
    user: String,
}

/// Opens (creating on first use) the data directory and checks credentials.
///
/// Credentials live in `<data_dir>/credentials` as `user:password` lines. A
/// directory without that file is initialised with the connecting user. This
/// is API parity with a database login, not a security boundary.
pub fn connect_server(config: &ConnectionConfig) -> Result<Connection> {
    let dir = &config.data_dir;
    fs::create_dir_all(dir).map_err(StoreError::io(dir))?;
    let cred_path = dir.join(CREDENTIALS);
    if !cred_path.exists() {
        if config.user.is_empty() || config.user.contains(':') || config.user.contains('\n') {
            return Err(StoreError::Auth { user: config.user.clone() });
        }
        fs::write(&cred_path, format!("{}:{}\n", config.user, config.password)).map_err(StoreError::io(&cred_path))?;
    }
    let creds = fs::read_to_string(&cred_path).map_err(StoreError::io(&cred_path))?;
    let ok = creds.lines().filter_map(|l| l.split_once(':')).any(|(u, p)| u == config.user && p == config.password);
    if !ok {
        return Err(StoreError::Auth { user: config.user.clone() });
    }
    Ok(Connection { data_dir: dir.clone(), host: config.host.clone(), user: config.user.clone() })
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidName(name.to_string()))
    }
}

impl Connection {
    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn host(&self) -> &str {
        &self.host
    }

    pub fn user(&self) -> &str {
        &self.user
    }

    fn segment_path(&self, database: &str, table: &str) -> Result<PathBuf> {
        check_name(database)?;
        check_name(table)?;
        Ok(self.data_dir.join(database).join(format!("{table}.seg")))
    }

    /// All tables, sorted by database then table name.
    pub fn list_tables(&self) -> Result<Vec<TableHandle>> {
        let mut out = Vec::new();
        let entries = fs::read_dir(&self.data_dir).map_err(StoreError::io(&self.data_dir))?;
        for db in entries {
            let db = db.map_err(StoreError::io(&self.data_dir))?;
            if !db.file_type().map(|t| t.is_dir()).unwrap_or(false) {
                continue;
            }
            let db_name = db.file_name().to_string_lossy().into_owned();
            for seg in fs::read_dir(db.path()).map_err(StoreError::io(db.path()))? {
                let path = seg.map_err(StoreError::io(db.path()))?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("seg") {
                    continue;
                }
                let table = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let segment = Segment::open(&path)?;
                out.push(TableHandle::new(db_name.clone(), table, segment.schema().to_vec()));
            }
        }
        out.sort_by(|a, b| (&a.database, &a.table).cmp(&(&b.database, &b.table)));
        Ok(out)
    }

    /// Handle for an existing table, with its stored schema.
    pub fn open_table(&self, database: &str, table: &str) -> Result<TableHandle> {
        let path = self.segment_path(database, table)?;
        if !path.exists() {
            return Err(StoreError::UnknownTable { database: database.into(), table: table.into() });
        }
        let segment = Segment::open(&path)?;
        Ok(TableHandle::new(database, table, segment.schema().to_vec()))
    }

    pub fn row_count(&self, table: &TableHandle) -> Result<u64> {
        Ok(self.open_segment(table)?.n_rows())
    }

    fn open_segment(&self, table: &TableHandle) -> Result<Segment> {
        let path = self.segment_path(&table.database, &table.table)?;
        if !path.exists() {
            return Err(StoreError::UnknownTable { database: table.database.clone(), table: table.table.clone() });
        }
        let segment = Segment::open(&path)?;
        if segment.schema() != table.schema {
            return Err(StoreError::SchemaMismatch {
                expected: segment.schema().to_vec(),
                found: table.schema.clone(),
            });
        }
        Ok(segment)
    }

    /// Appends `frame` to `table`, creating the table with the handle's schema
    /// if it does not exist. The whole frame commits or nothing does.
    pub fn ingest_frame(&self, table: &TableHandle, frame: &TimeSeriesFrame) -> Result<usize> {
        if frame.columns() != table.schema {
            return Err(StoreError::SchemaMismatch { expected: table.schema.clone(), found: frame.columns().to_vec() });
        }
        let path = self.segment_path(&table.database, &table.table)?;
        if !path.exists() {
            let db_dir = path.parent().expect("segment path has a parent");
            fs::create_dir_all(db_dir).map_err(StoreError::io(db_dir))?;
            match Segment::create(&path, &table.schema) {
                Ok(()) => {}
                // lost a creation race; the schema check below still applies
                Err(StoreError::Corrupt { .. }) if path.exists() => {}
                Err(e) => return Err(e),
            }
        }
        self.open_segment(table)?;
        Segment::append(&path, frame.timestamps(), frame.values())
    }

    /// Parses `csv_path` completely, then appends it as one commit.
    pub fn ingest_csv(&self, table: &TableHandle, csv_path: &Path) -> Result<usize> {
        let frame = parse_csv(csv_path)?;
        self.ingest_frame(table, &frame)
    }

    /// Rows with `start_time <= t < end_time` in timestamp order.
    pub fn query_data(&self, table: &TableHandle, start_time: i64, end_time: i64) -> Result<TimeSeriesFrame> {
        self.query_with_stats(table, start_time, end_time).map(|(f, _)| f)
    }

    pub fn query_with_stats(
        &self,
        table: &TableHandle,
        start_time: i64,
        end_time: i64,
    ) -> Result<(TimeSeriesFrame, QueryStats)> {
        if start_time > end_time {
            return Err(StoreError::InvalidRange { start: start_time, end: end_time });
        }
        let segment = self.open_segment(table)?;
        let (timestamps, values, stats) = segment.query(start_time, end_time)?;
        let frame = TimeSeriesFrame::new(timestamps, segment.schema().to_vec(), values)?;
        Ok((frame, stats))
    }

    /// Every stored row.
    pub fn query_all(&self, table: &TableHandle) -> Result<TimeSeriesFrame> {
        self.query_data(table, i64::MIN, i64::MAX)
    }
}

pub fn ingest_csv(conn: &Connection, table: &TableHandle, csv_path: &Path) -> Result<usize> {
    conn.ingest_csv(table, csv_path)
}

pub fn query_data(conn: &Connection, table: &TableHandle, start_time: i64, end_time: i64) -> Result<TimeSeriesFrame> {
    conn.query_data(table, start_time, end_time)
}
