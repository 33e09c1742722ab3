//! Voxel grids of tensors and scalars, with CSV and JSON round trips.
//!
//! The CSV schema is one voxel per row under the header
//! `x,y,z,dxx,dxy,dxz,dyy,dyz,dzz` (3×3 tensors only; six entries by
//! symmetry). Masked voxels are simply omitted and the mask is inferred on
//! read. Floats are written with 17 significant digits so a write/read trip
//! is bit-exact. The JSON variant additionally carries grid dims, spacing
//! and the matrix dimension, and supports any k.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SpdMat, SymMat};

pub const FIELD_CSV_HEADER: &str = "x,y,z,dxx,dxy,dxz,dyy,dyz,dzz";

/// Rectangular grid of PSD tensors; `None` marks a masked voxel.
/// Linear layout is row-major with x fastest: `x + nx·(y + ny·z)`.
#[derive(Clone, Debug)]
pub struct TensorField {
    dims: [usize; 3],
    spacing: [f64; 3],
    voxels: Vec<Option<SpdMat>>,
}

impl TensorField {
    pub fn new(dims: [usize; 3], spacing: [f64; 3]) -> TensorField {
        let len = dims[0] * dims[1] * dims[2];
        TensorField {
            dims,
            spacing,
            voxels: vec![None; len],
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.voxels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voxels.is_empty()
    }

    fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.dims[0] && y < self.dims[1] && z < self.dims[2]);
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> Option<&SpdMat> {
        self.voxels[self.index(x, y, z)].as_ref()
    }

    /// Insert a tensor; every tensor in a field must share one dimension.
    pub fn set(&mut self, x: usize, y: usize, z: usize, tensor: SpdMat) -> Result<()> {
        if let Some(k) = self.tensor_dim() {
            if tensor.dim() != k {
                return Err(Error::DimMismatch(k, tensor.dim()));
            }
        }
        let idx = self.index(x, y, z);
        self.voxels[idx] = Some(tensor);
        Ok(())
    }

    pub fn clear(&mut self, x: usize, y: usize, z: usize) {
        let idx = self.index(x, y, z);
        self.voxels[idx] = None;
    }

    /// Dimension k of the stored tensors, if any voxel is unmasked.
    pub fn tensor_dim(&self) -> Option<usize> {
        self.voxels.iter().flatten().next().map(|t| t.dim())
    }

    pub fn unmasked_count(&self) -> usize {
        self.voxels.iter().flatten().count()
    }

    /// Voxel coordinates in row-major order (x fastest).
    pub fn coords(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let [nx, ny, nz] = self.dims;
        (0..nz).flat_map(move |z| (0..ny).flat_map(move |y| (0..nx).map(move |x| (x, y, z))))
    }

    /// All unmasked tensors in row-major order.
    pub fn tensors(&self) -> Vec<&SpdMat> {
        self.coords()
            .filter_map(|(x, y, z)| self.get(x, y, z))
            .collect()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> Result<()> {
        if let Some(k) = self.tensor_dim() {
            if k != 3 {
                return Err(Error::InvalidInput(format!(
                    "CSV field format holds 3x3 tensors, this field has k = {k}"
                )));
            }
        }
        writeln!(out, "{FIELD_CSV_HEADER}").map_err(io_err)?;
        for (x, y, z) in self.coords() {
            if let Some(t) = self.get(x, y, z) {
                writeln!(
                    out,
                    "{x},{y},{z},{},{},{},{},{},{}",
                    fmt17(t.get(0, 0)),
                    fmt17(t.get(0, 1)),
                    fmt17(t.get(0, 2)),
                    fmt17(t.get(1, 1)),
                    fmt17(t.get(1, 2)),
                    fmt17(t.get(2, 2)),
                )
                .map_err(io_err)?;
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<TensorField> {
        let mut rows: Vec<(usize, usize, usize, SpdMat)> = Vec::new();
        let mut dims = [0usize; 3];
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            let line = line.trim();
            if lineno == 0 {
                if line != FIELD_CSV_HEADER {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("expected header '{FIELD_CSV_HEADER}', got '{line}'"),
                    });
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected 9 comma-separated fields, got {}", fields.len()),
                });
            }
            let coord = |i: usize| -> Result<usize> {
                fields[i].trim().parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad coordinate '{}'", fields[i]),
                })
            };
            let val = |i: usize| -> Result<f64> {
                fields[i].trim().parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad float '{}'", fields[i]),
                })
            };
            let (x, y, z) = (coord(0)?, coord(1)?, coord(2)?);
            let (dxx, dxy, dxz, dyy, dyz, dzz) =
                (val(3)?, val(4)?, val(5)?, val(6)?, val(7)?, val(8)?);
            let sym =
                SymMat::new(3, &[dxx, dxy, dxz, dxy, dyy, dyz, dxz, dyz, dzz]).map_err(|e| {
                    Error::Parse {
                        line: lineno + 1,
                        msg: e.to_string(),
                    }
                })?;
            let tensor = SpdMat::new(sym).map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: format!("voxel tensor rejected: {e}"),
            })?;
            dims[0] = dims[0].max(x + 1);
            dims[1] = dims[1].max(y + 1);
            dims[2] = dims[2].max(z + 1);
            rows.push((x, y, z, tensor));
        }
        let mut field = TensorField::new(dims, [1.0, 1.0, 1.0]);
        for (x, y, z, tensor) in rows {
            if field.get(x, y, z).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("duplicate voxel ({x},{y},{z})"),
                });
            }
            field.set(x, y, z, tensor)?;
        }
        Ok(field)
    }

    pub fn write_json<W: Write + ?Sized>(&self, out: &mut W) -> Result<()> {
        let dto = FieldDto {
            dims: self.dims,
            spacing: self.spacing,
            dim: self.tensor_dim().unwrap_or(0),
            voxels: self
                .coords()
                .filter_map(|(x, y, z)| {
                    self.get(x, y, z).map(|t| VoxelDto {
                        x,
                        y,
                        z,
                        d: upper_triangle(t),
                    })
                })
                .collect(),
        };
        serde_json::to_writer(&mut *out, &dto).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
        writeln!(out).map_err(io_err)
    }

    pub fn read_json<R: BufRead>(input: R) -> Result<TensorField> {
        let dto: FieldDto = serde_json::from_reader(input).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let mut field = TensorField::new(dto.dims, dto.spacing);
        let k = dto.dim;
        for v in dto.voxels {
            if v.x >= dto.dims[0] || v.y >= dto.dims[1] || v.z >= dto.dims[2] {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!(
                        "voxel ({},{},{}) outside dims {:?}",
                        v.x, v.y, v.z, dto.dims
                    ),
                });
            }
            let tensor = from_upper_triangle(k, &v.d)?;
            field.set(v.x, v.y, v.z, tensor)?;
        }
        Ok(field)
    }

    pub fn set_spacing(&mut self, spacing: [f64; 3]) {
        self.spacing = spacing;
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse {
        line: 0,
        msg: e.to_string(),
    }
}

/// 17 significant digits: enough for f64 round trips.
pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn upper_triangle(t: &SpdMat) -> Vec<f64> {
    let k = t.dim();
    let mut out = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            out.push(t.get(i, j));
        }
    }
    out
}

fn from_upper_triangle(k: usize, d: &[f64]) -> Result<SpdMat> {
    if d.len() != k * (k + 1) / 2 {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "expected {} upper-triangle entries for k = {k}, got {}",
                k * (k + 1) / 2,
                d.len()
            ),
        });
    }
    let mut full = vec![0.0; k * k];
    let mut idx = 0;
    for i in 0..k {
        for j in i..k {
            full[i * k + j] = d[idx];
            full[j * k + i] = d[idx];
            idx += 1;
        }
    }
    SpdMat::new(SymMat::new(k, &full)?)
}

#[derive(Serialize, Deserialize)]
struct FieldDto {
    dims: [usize; 3],
    spacing: [f64; 3],
    dim: usize,
    voxels: Vec<VoxelDto>,
}

#[derive(Serialize, Deserialize)]
struct VoxelDto {
    x: usize,
    y: usize,
    z: usize,
    d: Vec<f64>,
}

/// Scalar voxel grid (anisotropy maps, distance maps).
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ScalarField {
    pub fn new(dims: [usize; 3], spacing: [f64; 3]) -> ScalarField {
        let len = dims[0] * dims[1] * dims[2];
        ScalarField {
            dims,
            spacing,
            values: vec![0.0; len],
            mask: vec![false; len],
        }
    }

    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: f64) {
        let i = self.index(x, y, z);
        self.values[i] = value;
        self.mask[i] = true;
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> Option<f64> {
        let i = self.index(x, y, z);
        self.mask[i].then(|| self.values[i])
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "x,y,z,value").map_err(io_err)?;
        let [nx, ny, nz] = self.dims;
        for z in 0..nz {
            for y in 0..ny {
                for x in 0..nx {
                    if let Some(v) = self.get(x, y, z) {
                        writeln!(out, "{x},{y},{z},{}", fmt17(v)).map_err(io_err)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// 8-bit binary PGM (P5) of a single z-slice field; values map linearly
    /// from [lo, hi] to [0, 255] and masked voxels render black.
    pub fn write_pgm<W: Write + ?Sized>(&self, out: &mut W, lo: f64, hi: f64) -> Result<()> {
        if self.dims[2] != 1 {
            return Err(Error::InvalidInput(format!(
                "PGM output needs a single-slice field, nz = {}",
                self.dims[2]
            )));
        }
        if hi <= lo || !(hi - lo).is_finite() {
            return Err(Error::InvalidInput("PGM range must satisfy hi > lo".into()));
        }
        let [nx, ny, _] = self.dims;
        write!(out, "P5\n{nx} {ny}\n255\n").map_err(io_err)?;
        let mut bytes = Vec::with_capacity(nx * ny);
        for y in 0..ny {
            for x in 0..nx {
                let b = match self.get(x, y, 0) {
                    Some(v) => {
                        let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
                        (t * 255.0).round() as u8
                    }
                    None => 0,
                };
                bytes.push(b);
            }
        }
        out.write_all(&bytes).map_err(io_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    fn random_tensor(rng: &mut impl Rng) -> SpdMat {
        let mut f = crate::linalg::Mat::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                f[(i, j)] = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        SpdMat::new(SymMat::from_mat(&f.matmul(&f.transpose())).unwrap()).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rng = stream_rng(40, 0);
        let mut field = TensorField::new([4, 4, 1], [1.0, 1.0, 1.0]);
        for x in 0..4 {
            for y in 0..4 {
                if (x, y) == (2, 1) {
                    continue; // leave one masked
                }
                field.set(x, y, 0, random_tensor(&mut rng)).unwrap();
            }
        }
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let back = TensorField::read_csv(&buf[..]).unwrap();
        assert_eq!(back.dims(), field.dims());
        assert!(back.get(2, 1, 0).is_none());
        for (x, y, z) in field.coords() {
            match (field.get(x, y, z), back.get(x, y, z)) {
                (None, None) => {}
                (Some(a), Some(b)) => assert_eq!(a.mat().data(), b.mat().data()),
                _ => panic!("mask mismatch at ({x},{y},{z})"),
            }
        }
        // and the re-serialization is byte-identical
        let mut buf2 = Vec::new();
        back.write_csv(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn header_only_is_empty_field() {
        let field = TensorField::read_csv(FIELD_CSV_HEADER.as_bytes()).unwrap();
        assert!(field.is_empty());
    }

    #[test]
    fn single_voxel_file() {
        let csv = format!("{FIELD_CSV_HEADER}\n0,0,0,1.0,0.0,0.0,2.0,0.0,3.0\n");
        let field = TensorField::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(field.dims(), [1, 1, 1]);
        let t = field.get(0, 0, 0).unwrap();
        assert_eq!(t.get(0, 0), 1.0);
        assert_eq!(t.get(1, 1), 2.0);
        assert_eq!(t.get(2, 2), 3.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_header = "a,b,c\n";
        match TensorField::read_csv(bad_header.as_bytes()) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad_row = format!("{FIELD_CSV_HEADER}\n0,0,0,1.0,nope,0.0,2.0,0.0,3.0\n");
        match TensorField::read_csv(bad_row.as_bytes()) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = stream_rng(41, 0);
        let mut field = TensorField::new([2, 3, 2], [0.5, 0.5, 2.0]);
        for (x, y, z) in [(0, 0, 0), (1, 2, 1), (0, 1, 1)] {
            field.set(x, y, z, random_tensor(&mut rng)).unwrap();
        }
        let mut buf = Vec::new();
        field.write_json(&mut buf).unwrap();
        let back = TensorField::read_json(&buf[..]).unwrap();
        assert_eq!(back.dims(), field.dims());
        assert_eq!(back.spacing(), field.spacing());
        for (x, y, z) in field.coords() {
            match (field.get(x, y, z), back.get(x, y, z)) {
                (None, None) => {}
                (Some(a), Some(b)) => assert_eq!(a.mat().data(), b.mat().data()),
                _ => panic!("mask mismatch"),
            }
        }
    }

    #[test]
    fn pgm_has_expected_header_and_size() {
        let mut f = ScalarField::new([3, 2, 1], [1.0; 3]);
        f.set(0, 0, 0, 0.0);
        f.set(1, 0, 0, 0.5);
        f.set(2, 1, 0, 1.0);
        let mut buf = Vec::new();
        f.write_pgm(&mut buf, 0.0, 1.0).unwrap();
        assert!(buf.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(buf.len(), b"P5\n3 2\n255\n".len() + 6);
        assert_eq!(buf[buf.len() - 6 + 1], 128); // value 0.5
        assert_eq!(*buf.last().unwrap(), 255);
    }
}
