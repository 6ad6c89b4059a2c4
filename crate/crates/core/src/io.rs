//! CSV formats. Users and states are 1-indexed on disk.
//!
//! * activity matrix: header `slot,u1,...,uK`, rows `s,d_{s,1},...,d_{s,K}`;
//! * association: header `user,state`, one row per user.
//!
//! Output is UTF-8 with LF line endings and no trailing delimiter.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ActivityMatrix, Association};

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                _ => unreachable!("checked is_io_error"),
            }
        } else {
            Error::Parse(e.to_string())
        }
    }
}

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).from_reader(input)
}

/// Line number of a record for error messages.
fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

pub fn write_activity_matrix<W: Write>(out: W, demands: &ActivityMatrix) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header = vec!["slot".to_string()];
    header.extend((1..=demands.num_users()).map(|k| format!("u{k}")));
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(demands.num_users() + 1);
    for (s, row) in demands.rows().enumerate() {
        record.clear();
        record.push((s + 1).to_string());
        record.extend(row.iter().map(|d| d.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_activity_matrix<R: Read>(input: R) -> Result<ActivityMatrix> {
    let mut records = csv_reader(input).into_records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("activity matrix is empty".into()))??;
    if header.get(0) != Some("slot") {
        return Err(Error::Parse(format!("expected header starting with \"slot\", got {header:?}")));
    }
    for (i, name) in header.iter().enumerate().skip(1) {
        if name != format!("u{i}") {
            return Err(Error::Parse(format!("header column {} should be u{i}, got {name:?}", i + 1)));
        }
    }
    let num_users = header.len() - 1;
    let mut demands = Vec::new();
    let mut num_slots = 0;
    for record in records {
        let record = record?;
        let line = line_of(&record);
        let slot: usize = record
            .get(0)
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Parse(format!("line {line}: bad slot index")))?;
        if slot != num_slots + 1 {
            return Err(Error::Parse(format!("line {line}: expected slot {}, got {slot}", num_slots + 1)));
        }
        for f in record.iter().skip(1) {
            match f {
                "0" => demands.push(0),
                "1" => demands.push(1),
                other => {
                    return Err(Error::Parse(format!(
                        "line {line}: activity entries must be 0 or 1, got {other:?}"
                    )))
                }
            }
        }
        num_slots += 1;
    }
    ActivityMatrix::new(num_slots, num_users, demands)
}

pub fn write_association<W: Write>(out: W, assoc: &Association) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["user", "state"])?;
    for (user, &state) in assoc.states().iter().enumerate() {
        w.write_record([(user + 1).to_string(), (state + 1).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an association; `num_states` defaults to the largest state seen.
pub fn read_association<R: Read>(input: R, num_states: Option<usize>) -> Result<Association> {
    let mut records = csv_reader(input).into_records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("association file is empty".into()))??;
    if header.iter().collect::<Vec<_>>() != ["user", "state"] {
        return Err(Error::Parse(format!("expected header \"user,state\", got {header:?}")));
    }
    let mut states = Vec::new();
    for record in records {
        let record = record?;
        let line = line_of(&record);
        let bad = || Error::Parse(format!("line {line}: expected \"user,state\""));
        if record.len() != 2 {
            return Err(bad());
        }
        let user: usize = record[0].parse().map_err(|_| bad())?;
        let state: usize = record[1].parse().map_err(|_| bad())?;
        if user != states.len() + 1 {
            return Err(Error::Parse(format!("line {line}: expected user {}, got {user}", states.len() + 1)));
        }
        if state == 0 {
            return Err(Error::Parse(format!("line {line}: states are 1-indexed")));
        }
        states.push(state - 1);
    }
    let lambda = num_states.unwrap_or_else(|| states.iter().max().map_or(1, |m| m + 1));
    Association::new(states, lambda)
}

pub fn load_activity_matrix(path: &Path) -> Result<ActivityMatrix> {
    read_activity_matrix(File::open(path)?)
}

pub fn save_activity_matrix(path: &Path, demands: &ActivityMatrix) -> Result<()> {
    write_activity_matrix(File::create(path)?, demands)
}

pub fn save_association(path: &Path, assoc: &Association) -> Result<()> {
    write_association(File::create(path)?, assoc)
}
