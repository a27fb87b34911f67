//! Checkpoint files: one UTF-8 JSON header line followed by raw
//! little-endian f64 planes, row-major; complex fields interleave re/im.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::{Field, Repr, VecField2};
use crate::grid::Grid2D;
use crate::solver::ZakharovState;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldDescriptor {
    pub name: String,
    pub kind: FieldKind,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Header {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub t: f64,
    pub lambda: f64,
    pub fields: Vec<FieldDescriptor>,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad header: {0}")]
    Header(#[from] serde_json::Error),
    #[error("grid construction: {0}")]
    Grid(#[from] crate::Error),
    #[error("checkpoint field set {found:?} does not match the expected {expected:?}")]
    FieldSet { expected: Vec<String>, found: Vec<String> },
}

fn write_real_plane(w: &mut impl Write, f: &Field) -> Result<(), CheckpointError> {
    for z in f.data() {
        w.write_all(&z.re.to_le_bytes())?;
    }
    Ok(())
}

fn write_complex_plane(w: &mut impl Write, f: &Field) -> Result<(), CheckpointError> {
    for z in f.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64s(r: &mut impl Read, count: usize) -> Result<Vec<f64>, CheckpointError> {
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)?;
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

/// Write a first-order-formulation state (fields u complex, n, vx, vy real).
pub fn write_zakharov(
    path: &Path,
    state: &ZakharovState,
    lambda: f64,
) -> Result<(), CheckpointError> {
    let grid = state.grid();
    let header = Header {
        nx: grid.nx(),
        ny: grid.ny(),
        lx: grid.lx(),
        ly: grid.ly(),
        t: state.t,
        lambda,
        fields: vec![
            FieldDescriptor { name: "u".into(), kind: FieldKind::Complex },
            FieldDescriptor { name: "n".into(), kind: FieldKind::Real },
            FieldDescriptor { name: "vx".into(), kind: FieldKind::Real },
            FieldDescriptor { name: "vy".into(), kind: FieldKind::Real },
        ],
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    write_complex_plane(&mut w, &state.u)?;
    write_real_plane(&mut w, &state.n)?;
    write_real_plane(&mut w, &state.v.x)?;
    write_real_plane(&mut w, &state.v.y)?;
    w.flush()?;
    Ok(())
}

/// Read back a state written by [`write_zakharov`]; returns (state, lambda).
pub fn read_zakharov(path: &Path) -> Result<(ZakharovState, f64), CheckpointError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header_line = Vec::new();
    loop {
        let mut byte = [0u8; 1];
        r.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        header_line.push(byte[0]);
    }
    let header: Header = serde_json::from_slice(&header_line)?;
    let expected = ["u", "n", "vx", "vy"];
    let found: Vec<String> = header.fields.iter().map(|f| f.name.clone()).collect();
    if found != expected {
        return Err(CheckpointError::FieldSet {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        });
    }
    let grid: Arc<Grid2D> = Grid2D::new(header.nx, header.ny, header.lx, header.ly)?;
    let len = grid.len();

    let raw = read_f64s(&mut r, 2 * len)?;
    let u = Field::from_parts(
        &grid,
        Repr::Physical,
        raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
    );
    let real_plane = |r: &mut BufReader<File>| -> Result<Field, CheckpointError> {
        let raw = read_f64s(r, len)?;
        Ok(Field::from_parts(
            &grid,
            Repr::Physical,
            raw.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        ))
    };
    let n = real_plane(&mut r)?;
    let vx = real_plane(&mut r)?;
    let vy = real_plane(&mut r)?;
    Ok((ZakharovState { t: header.t, u, n, v: VecField2 { x: vx, y: vy } }, header.lambda))
}
